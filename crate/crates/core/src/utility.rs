//! Utility measures over C-sequences and the two pruning upper bounds.
//!
//! An event label contributes `p(l) × λ` in a window of length `λ`; eventset,
//! sequence and dataset utilities are plain sums of that. A pattern's utility
//! in a sequence is the best utility among its matches there, and its
//! dataset utility (`u_max`) sums the per-sequence best, with unmatched
//! sequences contributing zero.
//!
//! Two upper bounds on `u_max` drive pruning:
//!
//! * `LWU_k(L)` sums, over the sequences in which `L` occurs, the largest
//!   utility any `k` eventsets of that sequence can reach.
//! * `P_k(L) = u_max(L) + LWU_{k-|L|}(L)` adds to the exact utility of `L`
//!   the most that the `k - |L|` coincidences still to be appended can add.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CEventset, CSequence, CSequenceDataset, Coincidence, LSequence, Time, Utility, UtilityTable,
};

/// Which upper bound decides whether a candidate is worth extending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpperBoundKind {
    /// No bound pruning; only candidates without any occurrence are dropped.
    None,
    /// L-sequence-weighted utilization (`ldc` on the command line).
    Lwu,
    /// Projected utilization (`pdc` on the command line).
    Projected,
}

impl UpperBoundKind {
    pub const ALL: [UpperBoundKind; 3] = [Self::None, Self::Lwu, Self::Projected];

    pub fn cli_name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Lwu => "ldc",
            Self::Projected => "pdc",
        }
    }
}

impl fmt::Display for UpperBoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for UpperBoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "ldc" | "lwu" => Ok(Self::Lwu),
            "pdc" | "projected" => Ok(Self::Projected),
            other => Err(Error::InvalidConfig(format!("unknown strategy `{other}`"))),
        }
    }
}

/// `p(l) × λ`.
pub fn event_utility(label: &str, lambda: Time, t: &UtilityTable) -> Result<Utility> {
    t.get(label)
        .map(|p| p * lambda as Utility)
        .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
}

/// Utility of the labels of `c` over a window of length `lambda`.
fn coincidence_utility(c: &Coincidence, lambda: Time, t: &UtilityTable) -> Result<Utility> {
    c.labels().iter().map(|l| event_utility(l, lambda, t)).sum()
}

pub fn eventset_utility(sigma: &CEventset, t: &UtilityTable) -> Result<Utility> {
    coincidence_utility(sigma.coincidence(), sigma.duration(), t)
}

pub fn csequence_utility(c: &CSequence, t: &UtilityTable) -> Result<Utility> {
    c.eventsets().iter().map(|e| eventset_utility(e, t)).sum()
}

fn checked(r: Result<Utility>) -> Utility {
    r.expect("CSequenceDataset guarantees a utility for every label")
}

pub fn dataset_utility(d: &CSequenceDataset) -> Utility {
    d.csequences()
        .iter()
        .map(|c| checked(csequence_utility(c, d.utilities())))
        .sum()
}

/// Best utility of at most `k` eventsets of `c`.
///
/// Utilities are nonnegative, so the optimum takes whole eventsets and the
/// largest ones: the sum of the `k` largest eventset utilities.
pub fn max_k_utility(c: &CSequence, k: usize, t: &UtilityTable) -> Result<Utility> {
    if k < 1 {
        return Err(Error::InvalidLength(k));
    }
    let mut values = c
        .eventsets()
        .iter()
        .map(|e| eventset_utility(e, t))
        .collect::<Result<Vec<_>>>()?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values.iter().take(k).sum())
}

/// Utilities of every match of `l` in `c`, one entry per choice of strictly
/// increasing positions. Exhaustive; meant for small inputs.
pub fn utility_set(l: &LSequence, c: &CSequence, t: &UtilityTable) -> Result<Vec<Utility>> {
    fn walk(
        pattern: &[Coincidence],
        eventsets: &[CEventset],
        t: &UtilityTable,
        acc: Utility,
        out: &mut Vec<Utility>,
    ) -> Result<()> {
        let Some((head, tail)) = pattern.split_first() else {
            out.push(acc);
            return Ok(());
        };
        for (j, e) in eventsets.iter().enumerate() {
            if head.is_subset(e.coincidence()) {
                let u = coincidence_utility(head, e.duration(), t)?;
                walk(tail, &eventsets[j + 1..], t, acc + u, out)?;
            }
        }
        Ok(())
    }

    let mut out = Vec::new();
    if !l.is_empty() {
        walk(l.coincidences(), c.eventsets(), t, 0.0, &mut out)?;
    }
    Ok(out)
}

/// Largest utility of a match of `l` in `c`, or 0 when there is none.
///
/// `best[k]` after processing eventset `j` holds the best utility of matching
/// the first `k` coincidences within eventsets `..=j`.
pub fn max_match_utility(l: &LSequence, c: &CSequence, t: &UtilityTable) -> Result<Utility> {
    let n = l.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut best: Vec<Option<Utility>> = vec![None; n + 1];
    best[0] = Some(0.0);
    for e in c.eventsets() {
        // Descending k so each eventset is used at most once.
        for k in (1..=n).rev() {
            let Some(prev) = best[k - 1] else { continue };
            let pat = &l.coincidences()[k - 1];
            if pat.is_subset(e.coincidence()) {
                let cand = prev + coincidence_utility(pat, e.duration(), t)?;
                if best[k].is_none_or(|b| cand > b) {
                    best[k] = Some(cand);
                }
            }
        }
    }
    Ok(best[n].unwrap_or(0.0))
}

/// Whether some C-subsequence of `c` matches `l`.
pub fn occurs_in(l: &LSequence, c: &CSequence) -> bool {
    let mut rest = c.eventsets().iter();
    l.coincidences()
        .iter()
        .all(|p| rest.any(|e| p.is_subset(e.coincidence())))
}

/// `u_max(L)`: per-sequence best match utility summed over the dataset.
pub fn max_utility(l: &LSequence, d: &CSequenceDataset) -> Utility {
    d.csequences()
        .iter()
        .map(|c| checked(max_match_utility(l, c, d.utilities())))
        .sum()
}

/// `LWU_k(L)`, with `LWU_0 = 0`.
pub fn lwu(l: &LSequence, k: usize, d: &CSequenceDataset) -> Utility {
    if k == 0 {
        return 0.0;
    }
    d.csequences()
        .iter()
        .filter(|c| occurs_in(l, c))
        .map(|c| checked(max_k_utility(c, k, d.utilities())))
        .sum()
}

/// `P_k(L) = u_max(L) + LWU_{k-|L|}(L)`; requires `|L| ≤ k`.
pub fn projected_utilization(l: &LSequence, k: usize, d: &CSequenceDataset) -> Result<Utility> {
    if l.len() > k {
        return Err(Error::PatternTooLong { len: l.len(), k });
    }
    Ok(max_utility(l, d) + lwu(l, k - l.len(), d))
}

/// Whether `l` meets the threshold under the chosen bound (inclusive).
pub fn is_promising(
    l: &LSequence,
    kind: UpperBoundKind,
    k: usize,
    xi_abs: Utility,
    d: &CSequenceDataset,
) -> Result<bool> {
    Ok(match kind {
        UpperBoundKind::None => true,
        UpperBoundKind::Lwu => lwu(l, k, d) >= xi_abs,
        UpperBoundKind::Projected => projected_utilization(l, k, d)? >= xi_abs,
    })
}
