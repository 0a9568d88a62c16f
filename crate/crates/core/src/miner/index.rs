//! Interned, position-indexed view of a C-sequence dataset used by the search.

use crate::model::{CSequenceDataset, Coincidence, Utility};
use crate::utility::UpperBoundKind;

pub(crate) type LabelId = u32;

pub(crate) struct SeqIndex {
    /// Sorted label ids per eventset.
    sets: Vec<Vec<LabelId>>,
    durations: Vec<Utility>,
    /// `top[k]` is the sum of the `k` largest eventset utilities.
    top: Vec<Utility>,
}

impl SeqIndex {
    pub(crate) fn top_k(&self, k: usize) -> Utility {
        self.top[k.min(self.sets.len())]
    }
}

pub(crate) struct MiningIndex {
    labels: Vec<String>,
    prices: Vec<Utility>,
    seqs: Vec<SeqIndex>,
}

/// Where a pattern can end inside one sequence, with the best utility of a
/// match ending exactly at that position. Positions ascend.
#[derive(Clone, Debug)]
pub(crate) struct SeqProjection {
    seq: u32,
    ends: Vec<(u32, Utility)>,
}

/// All sequences in which a pattern occurs. Sequences ascend.
#[derive(Clone, Debug, Default)]
pub(crate) struct Projection(Vec<SeqProjection>);

/// Exact utility and both bounds of a pattern, from one pass over its
/// projection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Bounds {
    pub umax: Utility,
    pub lwu: Utility,
    pub projected: Utility,
}

impl Bounds {
    pub(crate) fn for_kind(&self, kind: UpperBoundKind) -> Utility {
        match kind {
            UpperBoundKind::None => Utility::INFINITY,
            UpperBoundKind::Lwu => self.lwu,
            UpperBoundKind::Projected => self.projected,
        }
    }
}

impl MiningIndex {
    pub(crate) fn new(d: &CSequenceDataset) -> Self {
        let labels = d.alphabet();
        let prices = labels
            .iter()
            .map(|l| d.utilities().get(l).expect("dataset covers its labels"))
            .collect::<Vec<_>>();
        let id_of = |l: &String| labels.binary_search(l).expect("label in alphabet") as LabelId;

        let seqs = d
            .csequences()
            .iter()
            .map(|c| {
                let sets: Vec<Vec<LabelId>> = c
                    .eventsets()
                    .iter()
                    .map(|e| e.coincidence().labels().iter().map(id_of).collect())
                    .collect();
                let durations: Vec<Utility> = c
                    .eventsets()
                    .iter()
                    .map(|e| e.duration() as Utility)
                    .collect();
                let mut values: Vec<Utility> = sets
                    .iter()
                    .zip(&durations)
                    .map(|(s, &lambda)| s.iter().map(|&l| prices[l as usize] * lambda).sum())
                    .collect();
                values.sort_by(|a, b| b.total_cmp(a));
                let mut top = Vec::with_capacity(values.len() + 1);
                top.push(0.0);
                let mut acc = 0.0;
                for v in values {
                    acc += v;
                    top.push(acc);
                }
                SeqIndex {
                    sets,
                    durations,
                    top,
                }
            })
            .collect();
        Self {
            labels,
            prices,
            seqs,
        }
    }

    pub(crate) fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub(crate) fn coincidence(&self, ids: &[LabelId]) -> Coincidence {
        Coincidence::new(ids.iter().map(|&i| self.labels[i as usize].as_str()))
    }

    /// Occurrences of the single-label coincidence `{label}`.
    pub(crate) fn label_projection(&self, label: LabelId) -> Projection {
        let price = self.prices[label as usize];
        Projection(
            self.seqs
                .iter()
                .enumerate()
                .filter_map(|(s, seq)| {
                    let ends: Vec<_> = seq
                        .sets
                        .iter()
                        .zip(&seq.durations)
                        .enumerate()
                        .filter(|(_, (set, _))| set.binary_search(&label).is_ok())
                        .map(|(j, (_, &lambda))| (j as u32, price * lambda))
                        .collect();
                    (!ends.is_empty()).then_some(SeqProjection {
                        seq: s as u32,
                        ends,
                    })
                })
                .collect(),
        )
    }

    /// Occurrences of `c ∪ {label}` from the occurrences of `c`.
    pub(crate) fn grow_coincidence(&self, p: &Projection, label: LabelId) -> Projection {
        let price = self.prices[label as usize];
        Projection(
            p.0.iter()
                .filter_map(|sp| {
                    let seq = &self.seqs[sp.seq as usize];
                    let ends: Vec<_> = sp
                        .ends
                        .iter()
                        .filter(|(j, _)| seq.sets[*j as usize].binary_search(&label).is_ok())
                        .map(|&(j, u)| (j, u + price * seq.durations[j as usize]))
                        .collect();
                    (!ends.is_empty()).then_some(SeqProjection { seq: sp.seq, ends })
                })
                .collect(),
        )
    }

    /// Occurrences of `L ++ ⟨c⟩` from those of `L` and of `⟨c⟩`.
    ///
    /// A match of the extension ending at `j` is the best match of `L` ending
    /// strictly before `j` plus the utility of `c` at `j`.
    pub(crate) fn extend(&self, prefix: &Projection, item: &Projection) -> Projection {
        let mut out = Vec::new();
        let (mut a, mut b) = (prefix.0.iter().peekable(), item.0.iter().peekable());
        while let (Some(pa), Some(pb)) = (a.peek(), b.peek()) {
            if pa.seq < pb.seq {
                a.next();
                continue;
            }
            if pb.seq < pa.seq {
                b.next();
                continue;
            }
            let mut ends = Vec::new();
            let mut best: Option<Utility> = None;
            let mut k = 0;
            for &(j, u) in &pb.ends {
                while k < pa.ends.len() && pa.ends[k].0 < j {
                    let v = pa.ends[k].1;
                    best = Some(best.map_or(v, |b: Utility| b.max(v)));
                    k += 1;
                }
                if let Some(b) = best {
                    ends.push((j, b + u));
                }
            }
            if !ends.is_empty() {
                out.push(SeqProjection { seq: pa.seq, ends });
            }
            a.next();
            b.next();
        }
        Projection(out)
    }

    /// `u_max`, `LWU_k` and `P_k` of a pattern of length `len`.
    pub(crate) fn bounds(&self, p: &Projection, len: usize, k: usize) -> Bounds {
        let rest = k.saturating_sub(len);
        let mut out = Bounds {
            umax: 0.0,
            lwu: 0.0,
            projected: 0.0,
        };
        for sp in &p.0 {
            let seq = &self.seqs[sp.seq as usize];
            let best = sp.ends.iter().map(|e| e.1).fold(0.0, Utility::max);
            out.umax += best;
            out.lwu += seq.top_k(k);
            out.projected += best + seq.top_k(rest);
        }
        out
    }
}

impl Projection {
    pub(crate) fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
