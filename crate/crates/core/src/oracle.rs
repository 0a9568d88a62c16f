//! Brute-force reference implementation and random instance generator.
//!
//! Everything here enumerates: index assignments for matches, eventset
//! subsets for the top-k utility, and the whole pattern space for mining.
//! It depends on the domain types and the transformation only, never on the
//! utility module or the miner, so it can catch their bugs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::miner::{MiningConfig, Pattern, Threshold};
use crate::model::{
    CSequence, CSequenceDataset, Coincidence, ESequence, ESequenceDataset, EventInterval,
    LSequence, Time, Utility, UtilityTable,
};
use crate::transform::transform_dataset;
use crate::utility::UpperBoundKind;

/// Default cap on the number of patterns the oracle will enumerate.
pub const DEFAULT_BUDGET: u128 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub num_sequences: usize,
    pub max_intervals_per_seq: usize,
    /// Labels are drawn from `A`, `B`, ... up to this many letters.
    pub alphabet_size: usize,
    pub max_time: Time,
    pub max_duration: Time,
    pub max_external_utility: u32,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            seed: 1,
            num_sequences: 5,
            max_intervals_per_seq: 6,
            alphabet_size: 4,
            max_time: 20,
            max_duration: 8,
            max_external_utility: 5,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("num_sequences", self.num_sequences as u64),
            ("max_intervals_per_seq", self.max_intervals_per_seq as u64),
            ("alphabet_size", self.alphabet_size as u64),
            ("max_time", self.max_time),
            ("max_duration", self.max_duration),
            ("max_external_utility", self.max_external_utility as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
        }
        if self.alphabet_size > 26 {
            return Err(Error::InvalidConfig(
                "alphabet_size must be at most 26".into(),
            ));
        }
        Ok(())
    }
}

/// A seeded random dataset and utilities for every label of the alphabet.
/// Utilities are whole numbers so all utility arithmetic stays exact.
pub fn random_dataset(p: &GeneratorParams) -> Result<(ESequenceDataset, UtilityTable)> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let letters: Vec<String> = (0..p.alphabet_size)
        .map(|i| char::from(b'A' + i as u8).to_string())
        .collect();

    let mut sequences = Vec::with_capacity(p.num_sequences);
    for id in 1..=p.num_sequences as u64 {
        let n = rng.gen_range(1..=p.max_intervals_per_seq);
        let mut intervals: Vec<EventInterval> = Vec::with_capacity(n);
        let mut attempts = 0;
        while intervals.len() < n && attempts < 20 * n {
            attempts += 1;
            let label = letters.choose(&mut rng).expect("non-empty alphabet");
            let begin = rng.gen_range(0..p.max_time);
            let finish = begin + rng.gen_range(1..=p.max_duration);
            let e = EventInterval::new(label.as_str(), begin, finish)?;
            if !intervals.contains(&e) {
                intervals.push(e);
            }
        }
        sequences.push(ESequence::new(id, intervals)?);
    }

    let mut utilities = UtilityTable::new();
    for l in &letters {
        utilities.insert(
            l.as_str(),
            rng.gen_range(0..=p.max_external_utility) as Utility,
        )?;
    }
    Ok((ESequenceDataset::new(sequences)?, utilities))
}

/// A small seeded mining instance: dataset, `K`, `Z` and an absolute
/// threshold in `[0, u_d]`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub data: CSequenceDataset,
    pub max_length: usize,
    pub max_size: usize,
    pub xi: Utility,
}

impl Instance {
    pub fn config(&self, strategy: UpperBoundKind) -> MiningConfig {
        MiningConfig::new(
            Threshold::Absolute(self.xi),
            self.max_length,
            self.max_size,
            strategy,
        )
    }
}

/// Instance within at most 5 sequences, 6 intervals per sequence, 4 labels,
/// `K ≤ 3` and `Z ≤ 2`. Thresholds lean towards small fractions of `u_d` so
/// most instances yield patterns; every tenth seed uses zero.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ seed);
    let params = GeneratorParams {
        seed,
        num_sequences: rng.gen_range(1..=5),
        max_intervals_per_seq: rng.gen_range(1..=6),
        alphabet_size: rng.gen_range(1..=4),
        max_time: 15,
        max_duration: 8,
        max_external_utility: 5,
    };
    let (d, t) = random_dataset(&params).expect("valid generator parameters");
    let data = transform_dataset(&d, &t, None).expect("generator covers its labels");
    let ud = dataset_utility(&data);
    let xi = if seed.is_multiple_of(10) {
        0.0
    } else {
        (ud * rng.gen::<f64>().powi(3)).floor()
    };
    Instance {
        seed,
        data,
        max_length: rng.gen_range(1..=3),
        max_size: rng.gen_range(1..=2),
        xi,
    }
}

fn price(t: &UtilityTable, label: &str) -> Utility {
    t.get(label)
        .unwrap_or_else(|| panic!("no utility for `{label}`"))
}

fn labels_value(labels: &[String], lambda: Time, t: &UtilityTable) -> Utility {
    labels.iter().map(|l| price(t, l) * lambda as Utility).sum()
}

/// All strictly increasing `len`-tuples of positions below `n`.
fn combinations(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, len, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Utilities of all C-subsequences of `c` that match `l`, found by trying
/// every strictly increasing position tuple.
pub fn utility_set(l: &LSequence, c: &CSequence, t: &UtilityTable) -> Vec<Utility> {
    let pattern = l.coincidences();
    if pattern.is_empty() {
        return Vec::new();
    }
    let es = c.eventsets();
    combinations(es.len(), pattern.len())
        .into_iter()
        .filter(|pos| {
            pos.iter().zip(pattern).all(|(&j, p)| {
                p.labels()
                    .iter()
                    .all(|x| es[j].coincidence().labels().contains(x))
            })
        })
        .map(|pos| {
            pos.iter()
                .zip(pattern)
                .map(|(&j, p)| labels_value(p.labels(), es[j].duration(), t))
                .sum()
        })
        .collect()
}

/// Best match utility of `l` in `c`; zero when nothing matches.
pub fn max_match_utility(l: &LSequence, c: &CSequence, t: &UtilityTable) -> Utility {
    utility_set(l, c, t).into_iter().fold(0.0, Utility::max)
}

pub fn max_utility(l: &LSequence, d: &CSequenceDataset) -> Utility {
    d.csequences()
        .iter()
        .map(|c| max_match_utility(l, c, d.utilities()))
        .sum()
}

pub fn dataset_utility(d: &CSequenceDataset) -> Utility {
    d.csequences()
        .iter()
        .flat_map(|c| c.eventsets())
        .map(|e| labels_value(e.coincidence().labels(), e.duration(), d.utilities()))
        .sum()
}

/// Best utility of at most `k` eventsets of `c`, over every subset of
/// positions. Exponential in `|c|`.
pub fn max_k_utility(c: &CSequence, k: usize, t: &UtilityTable) -> Utility {
    let es = c.eventsets();
    assert!(
        es.len() <= 24,
        "oracle subset search limited to 24 eventsets"
    );
    let values: Vec<Utility> = es
        .iter()
        .map(|e| labels_value(e.coincidence().labels(), e.duration(), t))
        .collect();
    (0u32..1 << es.len())
        .filter(|mask| mask.count_ones() as usize <= k)
        .map(|mask| {
            (0..es.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| values[i])
                .sum::<Utility>()
        })
        .fold(0.0, Utility::max)
}

pub fn lwu(l: &LSequence, k: usize, d: &CSequenceDataset) -> Utility {
    if k == 0 {
        return 0.0;
    }
    d.csequences()
        .iter()
        .filter(|c| !utility_set(l, c, d.utilities()).is_empty())
        .map(|c| max_k_utility(c, k, d.utilities()))
        .sum()
}

pub fn projected_utilization(l: &LSequence, k: usize, d: &CSequenceDataset) -> Utility {
    assert!(l.len() <= k, "pattern longer than the length budget");
    max_utility(l, d) + lwu(l, k - l.len(), d)
}

/// Non-empty subsets of `alphabet` with at most `z` labels, in coincidence
/// order.
fn coincidences(alphabet: &[String], z: usize) -> Vec<Coincidence> {
    let mut labels = alphabet.to_vec();
    labels.sort();
    labels.dedup();
    assert!(labels.len() < 32, "oracle alphabet limited to 31 labels");
    let mut out: Vec<Coincidence> = (1u32..1 << labels.len())
        .filter(|m| m.count_ones() as usize <= z)
        .map(|m| {
            Coincidence::new(
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, l)| l.as_str()),
            )
        })
        .collect();
    out.sort();
    out
}

fn space_size(n: u128, k: usize) -> u128 {
    (1..=k as u32)
        .map(|len| n.saturating_pow(len))
        .fold(0u128, u128::saturating_add)
}

/// Every L-sequence over `alphabet` with length at most `k` and coincidence
/// size at most `z`, by length and then element-wise in coincidence order.
pub fn enumerate_lsequences(
    alphabet: &[String],
    k: usize,
    z: usize,
) -> impl Iterator<Item = LSequence> {
    let items = coincidences(alphabet, z);
    (1..=k).flat_map(move |len| {
        let items = items.clone();
        let n = items.len();
        let mut odometer = vec![0usize; len];
        let mut done = n == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let l = LSequence::new(odometer.iter().map(|&i| items[i].clone()).collect())
                .expect("non-empty coincidences");
            // Advance the rightmost digit first.
            let mut pos = len;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < n {
                    break;
                }
                odometer[pos] = 0;
            }
            Some(l)
        })
    })
}

/// Patterns that occur somewhere in `d` and reach the threshold, found by
/// scoring the entire pattern space.
pub fn brute_force_mine(
    d: &CSequenceDataset,
    cfg: &MiningConfig,
    budget: u128,
) -> Result<Vec<Pattern>> {
    cfg.validate()?;
    let alphabet = d.alphabet();
    let n = coincidences(&alphabet, cfg.max_size).len() as u128;
    let candidates = space_size(n, cfg.max_length);
    if candidates > budget {
        return Err(Error::OracleBudget { candidates, budget });
    }
    let xi = match cfg.threshold {
        Threshold::Absolute(x) => x,
        Threshold::Relative(x) => x * dataset_utility(d),
    };
    let mut out = Vec::new();
    for l in enumerate_lsequences(&alphabet, cfg.max_length, cfg.max_size) {
        let sets: Vec<Vec<Utility>> = d
            .csequences()
            .iter()
            .map(|c| utility_set(&l, c, d.utilities()))
            .collect();
        if sets.iter().all(Vec::is_empty) {
            continue;
        }
        let umax: Utility = sets
            .iter()
            .map(|s| s.iter().copied().fold(0.0, Utility::max))
            .sum();
        if umax >= xi {
            out.push(Pattern { lsequence: l, umax });
        }
    }
    out.sort_by(|a, b| a.lsequence.cmp(&b.lsequence));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn abc(n: usize) -> Vec<String> {
        ["A", "B", "C", "D"][..n]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn enumeration_counts() {
        let k1z1: Vec<_> = enumerate_lsequences(&abc(2), 1, 1)
            .map(|l| l.to_string())
            .collect();
        assert_eq!(k1z1, ["⟨{A}⟩", "⟨{B}⟩"]);
        assert_eq!(enumerate_lsequences(&abc(2), 1, 2).count(), 3);
        let all: Vec<_> = enumerate_lsequences(&abc(2), 2, 2).collect();
        assert_eq!(all.len(), 12);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_lsequences(&abc(3), 3, 2).count(), 6 + 36 + 216);
        assert_eq!(enumerate_lsequences(&[], 3, 2).count(), 0);
    }

    #[test]
    fn exhaustive_measures_on_running_example() {
        let d = fixtures::running_example_cdataset();
        let t = d.utilities();
        let ab = LSequence::from_labels(&[&["A"], &["B"]]).unwrap();
        let mut s1 = utility_set(&ab, &d.csequences()[0], t);
        s1.sort_by(f64::total_cmp);
        assert_eq!(s1, [9.0, 10.0, 13.0]);
        assert_eq!(max_utility(&ab, &d), 22.0);
        assert_eq!(max_k_utility(&d.csequences()[0], 2, t), 14.0);
        assert_eq!(lwu(&ab, 3, &d), 50.0);
        assert_eq!(projected_utilization(&ab, 3, &d), 42.0);
        assert_eq!(dataset_utility(&d), 134.0);
    }

    #[test]
    fn generator_is_deterministic() {
        let p = GeneratorParams::default();
        assert_eq!(random_dataset(&p).unwrap(), random_dataset(&p).unwrap());
        let other = GeneratorParams {
            seed: 2,
            ..p.clone()
        };
        assert_ne!(random_dataset(&p).unwrap(), random_dataset(&other).unwrap());
        let zero = GeneratorParams {
            num_sequences: 0,
            ..p
        };
        assert!(matches!(
            random_dataset(&zero),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn generator_snapshot() {
        let (d, t) = random_dataset(&GeneratorParams::default()).unwrap();
        let cd = transform_dataset(&d, &t, None).unwrap();
        assert_eq!((d.len(), d.num_intervals()), (5, 17));
        assert_eq!(dataset_utility(&cd), 216.0);
    }

    #[test]
    fn budget_guard() {
        let d = fixtures::running_example_cdataset();
        let cfg = MiningConfig::new(Threshold::Absolute(0.0), 4, 3, UpperBoundKind::None);
        assert!(matches!(
            brute_force_mine(&d, &cfg, DEFAULT_BUDGET),
            Err(Error::OracleBudget { .. })
        ));
    }
}
