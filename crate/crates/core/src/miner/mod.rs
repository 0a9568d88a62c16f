//! Pattern search with upper-bound pruning.
//!
//! The search runs in two phases:
//!
//! 1. Coincidence vocabulary. Single labels are evaluated first; a
//!    coincidence of size `n + 1` is formed by adding a larger label to a
//!    size-`n` coincidence whose own subsets all survived. Growth is gated by
//!    `LWU_K(⟨c⟩)`, which never increases as labels are added. Under the
//!    projected strategy a coincidence additionally enters the vocabulary
//!    only if `P_K(⟨c⟩)` meets the threshold.
//! 2. Sequence extension. Every vocabulary coincidence starts a depth-first
//!    search that appends vocabulary coincidences. A prefix whose bound falls
//!    below the threshold is dropped together with all of its extensions.
//!
//! Both bounds are sound for appending: an extension `L ++ M` with
//! `|L ++ M| ≤ K` has `u_max(L ++ M) ≤ P_K(L)` because the matched part of
//! `L` is worth at most `u_max(L)` per sequence and the `|M|` appended
//! positions at most the `K - |L|` heaviest eventsets. `P_K` is not
//! monotone under adding labels to a coincidence, hence the `LWU` gate in
//! phase 1.

mod index;

use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CSequenceDataset, Coincidence, LSequence, Utility};
use crate::par::{self, Execution};
use crate::utility::{dataset_utility, UpperBoundKind};

use index::{Bounds, LabelId, MiningIndex, Projection};

/// Minimum utility threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum Threshold {
    Absolute(Utility),
    /// Fraction of the total dataset utility.
    Relative(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    pub threshold: Threshold,
    /// Maximum pattern length `K`.
    pub max_length: usize,
    /// Maximum coincidence size `Z`.
    pub max_size: usize,
    pub strategy: UpperBoundKind,
}

impl MiningConfig {
    pub fn new(
        threshold: Threshold,
        max_length: usize,
        max_size: usize,
        strategy: UpperBoundKind,
    ) -> Self {
        Self {
            threshold,
            max_length,
            max_size,
            strategy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.threshold {
            Threshold::Relative(x) if !(0.0..=1.0).contains(&x) => {
                return Err(Error::InvalidConfig(format!(
                    "relative threshold must lie in [0, 1], got {x}"
                )))
            }
            Threshold::Absolute(x) if !x.is_finite() || x < 0.0 => {
                return Err(Error::InvalidConfig(format!(
                    "absolute threshold must be a nonnegative number, got {x}"
                )))
            }
            _ => {}
        }
        if self.max_length < 1 {
            return Err(Error::InvalidConfig(
                "maximum length K must be at least 1".into(),
            ));
        }
        if self.max_size < 1 {
            return Err(Error::InvalidConfig(
                "maximum size Z must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    #[serde(rename = "pattern")]
    pub lsequence: LSequence,
    pub umax: Utility,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MiningStats {
    pub candidates_generated: u64,
    pub candidates_pruned: u64,
    pub patterns_found: u64,
    pub elapsed_ms: f64,
}

impl MiningStats {
    fn merge(mut self, other: MiningStats) -> MiningStats {
        self.candidates_generated += other.candidates_generated;
        self.candidates_pruned += other.candidates_pruned;
        self.patterns_found += other.patterns_found;
        self
    }
}

pub fn resolve_threshold(cfg: &MiningConfig, d: &CSequenceDataset) -> Utility {
    match cfg.threshold {
        Threshold::Absolute(x) => x,
        Threshold::Relative(x) => x * dataset_utility(d),
    }
}

/// A phase-1 coincidence with its occurrences and single-coincidence bounds.
struct Candidate {
    labels: Vec<LabelId>,
    projection: Projection,
    bounds: Bounds,
}

struct Vocabulary {
    items: Vec<Candidate>,
    stats: MiningStats,
}

struct Search<'a> {
    index: &'a MiningIndex,
    strategy: UpperBoundKind,
    k: usize,
    z: usize,
    xi: Utility,
    exec: Execution,
}

impl Search<'_> {
    fn evaluate(&self, labels: Vec<LabelId>, projection: Projection) -> Candidate {
        let bounds = self.index.bounds(&projection, 1, self.k);
        Candidate {
            labels,
            projection,
            bounds,
        }
    }

    /// Phase 1 growth gate.
    fn grows(&self, c: &Candidate) -> bool {
        !c.projection.is_empty()
            && (self.strategy == UpperBoundKind::None || c.bounds.lwu >= self.xi)
    }

    fn promising(&self, b: &Bounds) -> bool {
        b.for_kind(self.strategy) >= self.xi
    }

    fn vocabulary(&self) -> Vocabulary {
        let mut stats = MiningStats::default();
        let singles: Vec<LabelId> = (0..self.index.num_labels() as LabelId).collect();
        let mut level: Vec<Candidate> = par::map(&singles, self.exec, |&l| {
            self.evaluate(vec![l], self.index.label_projection(l))
        });
        let mut items = Vec::new();
        let mut size = 1;
        loop {
            stats.candidates_generated += level.len() as u64;
            let (grown, rest): (Vec<Candidate>, Vec<Candidate>) =
                level.into_iter().partition(|c| self.grows(c));
            for c in rest {
                if !c.projection.is_empty() && self.promising(&c.bounds) {
                    items.push(c);
                } else {
                    stats.candidates_pruned += 1;
                }
            }
            if size == self.z || grown.is_empty() {
                for c in grown {
                    if self.promising(&c.bounds) {
                        items.push(c);
                    } else {
                        stats.candidates_pruned += 1;
                    }
                }
                break;
            }

            let survivors: HashSet<&[LabelId]> =
                grown.iter().map(|c| c.labels.as_slice()).collect();
            let extenders: Vec<LabelId> = if size == 1 {
                grown.iter().map(|c| c.labels[0]).collect()
            } else {
                let mut v: Vec<_> = grown
                    .iter()
                    .flat_map(|c| c.labels.iter().copied())
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let joins: Vec<(usize, LabelId)> = grown
                .iter()
                .enumerate()
                .flat_map(|(i, c)| {
                    let last = *c.labels.last().expect("non-empty coincidence");
                    extenders
                        .iter()
                        .filter(move |&&l| l > last)
                        .map(move |&l| (i, l))
                })
                .filter(|&(i, l)| {
                    // Every size-n subset must have survived.
                    let mut labels = grown[i].labels.clone();
                    labels.push(l);
                    (0..labels.len() - 1).all(|skip| {
                        let sub: Vec<LabelId> = labels
                            .iter()
                            .enumerate()
                            .filter(|&(p, _)| p != skip)
                            .map(|(_, &x)| x)
                            .collect();
                        survivors.contains(sub.as_slice())
                    })
                })
                .collect();
            let next = par::map(&joins, self.exec, |&(i, l)| {
                let mut labels = grown[i].labels.clone();
                labels.push(l);
                self.evaluate(labels, self.index.grow_coincidence(&grown[i].projection, l))
            });
            for c in grown {
                if self.promising(&c.bounds) {
                    items.push(c);
                } else {
                    stats.candidates_pruned += 1;
                }
            }
            level = next;
            size += 1;
        }
        items.sort_by(|a, b| {
            a.labels
                .len()
                .cmp(&b.labels.len())
                .then_with(|| a.labels.cmp(&b.labels))
        });
        Vocabulary { items, stats }
    }

    /// Depth-first extension of `prefix` (of length `len`).
    fn extend(
        &self,
        vocab: &[Candidate],
        prefix: &[usize],
        projection: &Projection,
        depth: usize,
    ) -> (Vec<(Vec<usize>, Utility)>, MiningStats) {
        let step = |next: &usize| {
            let mut found = Vec::new();
            let mut stats = MiningStats {
                candidates_generated: 1,
                ..Default::default()
            };
            let proj = self.index.extend(projection, &vocab[*next].projection);
            let len = prefix.len() + 1;
            let bounds = self.index.bounds(&proj, len, self.k);
            if proj.is_empty() || !self.promising(&bounds) {
                stats.candidates_pruned = 1;
                return (found, stats);
            }
            let mut pattern = prefix.to_vec();
            pattern.push(*next);
            if bounds.umax >= self.xi {
                found.push((pattern.clone(), bounds.umax));
                stats.patterns_found = 1;
            }
            if len < self.k {
                let (more, s) = self.extend(vocab, &pattern, &proj, depth + 1);
                found.extend(more);
                stats = stats.merge(s);
            }
            (found, stats)
        };
        let choices: Vec<usize> = (0..vocab.len()).collect();
        // Fan out near the root only; deeper subtrees stay on one worker.
        let exec = if depth < 2 {
            self.exec
        } else {
            Execution::Sequential
        };
        par::map(&choices, exec, step).into_iter().fold(
            (Vec::new(), MiningStats::default()),
            |(mut acc, st), (f, s)| {
                acc.extend(f);
                (acc, st.merge(s))
            },
        )
    }
}

fn build_search<'a>(
    index: &'a MiningIndex,
    d: &CSequenceDataset,
    cfg: &MiningConfig,
    exec: Execution,
) -> Result<Search<'a>> {
    cfg.validate()?;
    Ok(Search {
        index,
        strategy: cfg.strategy,
        k: cfg.max_length,
        z: cfg.max_size,
        xi: resolve_threshold(cfg, d),
        exec,
    })
}

/// Coincidences that survive phase 1 and make up the extension vocabulary,
/// in (size, lexicographic) order.
pub fn promising_coincidences(
    d: &CSequenceDataset,
    cfg: &MiningConfig,
    xi_abs: Utility,
) -> Result<Vec<Coincidence>> {
    let index = MiningIndex::new(d);
    let mut search = build_search(&index, d, cfg, Execution::default())?;
    search.xi = xi_abs;
    let vocab = search.vocabulary();
    Ok(vocab
        .items
        .iter()
        .map(|c| index.coincidence(&c.labels))
        .collect())
}

/// All patterns with length at most `K`, coincidence size at most `Z` and
/// `u_max` at or above the threshold, in canonical order.
pub fn mine(d: &CSequenceDataset, cfg: &MiningConfig) -> Result<(Vec<Pattern>, MiningStats)> {
    mine_with(d, cfg, Execution::default())
}

pub fn mine_with(
    d: &CSequenceDataset,
    cfg: &MiningConfig,
    exec: Execution,
) -> Result<(Vec<Pattern>, MiningStats)> {
    let start = Instant::now();
    let index = MiningIndex::new(d);
    let search = build_search(&index, d, cfg, exec)?;
    let Vocabulary {
        items: vocab,
        mut stats,
    } = search.vocabulary();

    let roots: Vec<usize> = (0..vocab.len()).collect();
    let per_root = par::map(&roots, exec, |&r| {
        let c = &vocab[r];
        let mut found = Vec::new();
        let mut s = MiningStats::default();
        if c.bounds.umax >= search.xi {
            found.push((vec![r], c.bounds.umax));
            s.patterns_found = 1;
        }
        if search.k > 1 {
            let (more, more_stats) = search.extend(&vocab, &[r], &c.projection, 1);
            found.extend(more);
            s = s.merge(more_stats);
        }
        (found, s)
    });

    let coincidences: Vec<Coincidence> =
        vocab.iter().map(|c| index.coincidence(&c.labels)).collect();
    let mut patterns = Vec::new();
    for (found, s) in per_root {
        stats = stats.merge(s);
        patterns.extend(found.into_iter().map(|(ids, umax)| {
            Pattern {
                lsequence: LSequence::new(ids.iter().map(|&i| coincidences[i].clone()).collect())
                    .expect("vocabulary coincidences are non-empty"),
                umax,
            }
        }));
    }
    patterns.sort_by(|a, b| a.lsequence.cmp(&b.lsequence));
    stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((patterns, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg(xi: Utility, k: usize, z: usize, s: UpperBoundKind) -> MiningConfig {
        MiningConfig::new(Threshold::Absolute(xi), k, z, s)
    }

    fn lseq(groups: &[&[&str]]) -> LSequence {
        LSequence::from_labels(groups).unwrap()
    }

    #[test]
    fn threshold_resolution() {
        let d = fixtures::running_example_cdataset();
        let rel = MiningConfig::new(Threshold::Relative(0.25), 4, 5, UpperBoundKind::Projected);
        assert_eq!(resolve_threshold(&rel, &d), 33.5);
        assert_eq!(
            resolve_threshold(&cfg(22.0, 3, 2, UpperBoundKind::Lwu), &d),
            22.0
        );
        let zero = MiningConfig::new(Threshold::Relative(0.0), 1, 1, UpperBoundKind::Lwu);
        assert_eq!(resolve_threshold(&zero, &d), 0.0);
    }

    #[test]
    fn config_validation() {
        let bad = [
            MiningConfig::new(Threshold::Relative(1.5), 1, 1, UpperBoundKind::Lwu),
            MiningConfig::new(Threshold::Absolute(-1.0), 1, 1, UpperBoundKind::Lwu),
            cfg(1.0, 0, 1, UpperBoundKind::Lwu),
            cfg(1.0, 1, 0, UpperBoundKind::Lwu),
        ];
        for c in bad {
            assert!(
                matches!(c.validate(), Err(Error::InvalidConfig(_))),
                "{c:?}"
            );
        }
    }

    #[test]
    fn running_example_contains_boundary_pattern() {
        let d = fixtures::running_example_cdataset();
        for s in UpperBoundKind::ALL {
            let (patterns, stats) = mine(&d, &cfg(22.0, 3, 2, s)).unwrap();
            let ab = lseq(&[&["A"], &["B"]]);
            let hit = patterns
                .iter()
                .find(|p| p.lsequence == ab)
                .expect("⟨{A}{B}⟩ mined");
            assert_eq!(hit.umax, 22.0);
            assert!(patterns
                .iter()
                .all(|p| p.umax >= 22.0 && p.lsequence.len() <= 3));
            assert!(patterns.iter().all(|p| p.lsequence.size() <= 2));
            assert_eq!(stats.patterns_found as usize, patterns.len());
        }
    }

    #[test]
    fn unconstrained_single_labels() {
        let d = fixtures::running_example_cdataset();
        let (patterns, _) = mine(&d, &cfg(0.0, 1, 1, UpperBoundKind::None)).unwrap();
        let got: Vec<_> = patterns
            .iter()
            .map(|p| (p.lsequence.to_string(), p.umax))
            .collect();
        // Best single window per sequence for each label, summed.
        assert_eq!(
            got,
            [
                ("⟨{A}⟩".to_string(), 8.0 + 6.0 + 8.0),
                ("⟨{B}⟩".to_string(), 5.0 + 3.0 + 4.0 + 4.0),
                ("⟨{C}⟩".to_string(), 2.0 + 2.0 + 2.0 + 3.0),
                ("⟨{D}⟩".to_string(), 9.0),
                ("⟨{E}⟩".to_string(), 4.0 + 4.0 + 4.0 + 6.0),
                ("⟨{F}⟩".to_string(), 15.0),
            ]
        );
    }

    #[test]
    fn vocabulary_contents() {
        let d = fixtures::running_example_cdataset();
        let pdc = MiningConfig::new(Threshold::Relative(0.25), 4, 5, UpperBoundKind::Projected);
        let v = promising_coincidences(&d, &pdc, 33.5).unwrap();
        assert!(v.contains(&Coincidence::new(["C"])));
        assert!(v.windows(2).all(|w| w[0] < w[1]));

        let all = promising_coincidences(&d, &cfg(0.0, 4, 5, UpperBoundKind::Lwu), 0.0).unwrap();
        // Every coincidence that is a subset of some eventset.
        let mut expected: HashSet<Coincidence> = HashSet::new();
        for c in d.csequences() {
            for e in c.eventsets() {
                let labels = e.coincidence().labels();
                for mask in 1u32..(1 << labels.len()) {
                    expected.insert(Coincidence::new(
                        labels
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, l)| l.as_str()),
                    ));
                }
            }
        }
        assert_eq!(all.iter().cloned().collect::<HashSet<_>>(), expected);

        let none =
            promising_coincidences(&d, &cfg(135.0, 4, 5, UpperBoundKind::Lwu), 135.0).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let d = fixtures::running_example_cdataset();
        for s in UpperBoundKind::ALL {
            let c = cfg(5.0, 4, 3, s);
            let (a, sa) = mine_with(&d, &c, Execution::Parallel).unwrap();
            let (b, sb) = mine_with(&d, &c, Execution::Sequential).unwrap();
            assert_eq!(a, b);
            assert_eq!(
                (
                    sa.candidates_generated,
                    sa.candidates_pruned,
                    sa.patterns_found
                ),
                (
                    sb.candidates_generated,
                    sb.candidates_pruned,
                    sb.patterns_found
                )
            );
        }
    }

    #[test]
    fn stats_invariants() {
        let d = fixtures::running_example_cdataset();
        for s in UpperBoundKind::ALL {
            let (_, st) = mine(&d, &cfg(20.0, 3, 3, s)).unwrap();
            assert!(st.candidates_pruned <= st.candidates_generated);
            assert!(st.patterns_found <= st.candidates_generated - st.candidates_pruned);
        }
    }
}
