//! Domain types for interval-based event data and the containment relations
//! between C-sequences and L-sequences.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time points are natural numbers.
pub type Time = u64;

/// Utility values (external utility times duration). Always nonnegative.
pub type Utility = f64;

/// A labeled interval `(label, begin, finish)` with `begin < finish`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventInterval {
    label: String,
    begin: Time,
    finish: Time,
}

impl EventInterval {
    pub fn new(label: impl Into<String>, begin: Time, finish: Time) -> Result<Self> {
        let label = label.into();
        if label.is_empty() || label.chars().any(char::is_whitespace) {
            return Err(Error::EmptyLabel);
        }
        if begin >= finish {
            return Err(Error::InvalidInterval {
                label,
                begin,
                finish,
            });
        }
        Ok(Self {
            label,
            begin,
            finish,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn begin(&self) -> Time {
        self.begin
    }

    pub fn finish(&self) -> Time {
        self.finish
    }

    /// Canonical E-sequence order: begin time, then label, then finish.
    fn order_key(&self) -> (Time, &str, Time) {
        (self.begin, &self.label, self.finish)
    }
}

/// An E-sequence: the intervals of one entity, sorted by begin time with ties
/// broken by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ESequence {
    id: u64,
    intervals: Vec<EventInterval>,
}

impl ESequence {
    pub fn new(id: u64, mut intervals: Vec<EventInterval>) -> Result<Self> {
        if id == 0 {
            return Err(Error::ZeroSequenceId);
        }
        if intervals.is_empty() {
            return Err(Error::EmptySequence);
        }
        intervals.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        if let Some(w) = intervals.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateInterval {
                id,
                label: w[0].label.clone(),
                begin: w[0].begin,
                finish: w[0].finish,
            });
        }
        Ok(Self { id, intervals })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn intervals(&self) -> &[EventInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// A collection of E-sequences with unique identifiers, kept in id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ESequenceDataset {
    sequences: Vec<ESequence>,
}

impl ESequenceDataset {
    pub fn new(mut sequences: Vec<ESequence>) -> Result<Self> {
        sequences.sort_by_key(ESequence::id);
        if let Some(w) = sequences.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateSequenceId(w[0].id));
        }
        Ok(Self { sequences })
    }

    pub fn sequences(&self) -> &[ESequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn num_intervals(&self) -> usize {
        self.sequences.iter().map(ESequence::len).sum()
    }

    /// Distinct labels in lexicographic order.
    pub fn alphabet(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .sequences
            .iter()
            .flat_map(|s| s.intervals.iter().map(EventInterval::label))
            .collect();
        set.into_iter().map(str::to_owned).collect()
    }
}

/// A set of labels in canonical (sorted, deduplicated) form. May be empty.
///
/// Ordering is by cardinality first, then lexicographic over the labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coincidence {
    labels: Vec<String>,
}

impl Coincidence {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        labels.dedup();
        Self { labels }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .is_ok()
    }

    /// `self ⊆ other`, by a merge over both sorted label lists.
    pub fn is_subset(&self, other: &Coincidence) -> bool {
        let mut theirs = other.labels.iter();
        'outer: for l in &self.labels {
            for m in theirs.by_ref() {
                match m.cmp(l) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }
}

impl Ord for Coincidence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.labels
            .len()
            .cmp(&other.labels.len())
            .then_with(|| self.labels.cmp(&other.labels))
    }
}

impl PartialOrd for Coincidence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coincidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.is_empty() {
            return f.write_str("∅");
        }
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

/// A coincidence together with the duration of its window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CEventset {
    coincidence: Coincidence,
    duration: Time,
}

impl CEventset {
    pub fn new(coincidence: Coincidence, duration: Time) -> Result<Self> {
        if duration == 0 {
            return Err(Error::ZeroDuration);
        }
        Ok(Self {
            coincidence,
            duration,
        })
    }

    pub fn coincidence(&self) -> &Coincidence {
        &self.coincidence
    }

    pub fn duration(&self) -> Time {
        self.duration
    }
}

impl fmt::Display for CEventset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Single-label eventsets drop their braces.
        match self.coincidence.labels() {
            [only] => write!(f, "({},{})", only, self.duration),
            _ => write!(f, "({},{})", self.coincidence, self.duration),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSequence {
    id: u64,
    eventsets: Vec<CEventset>,
}

impl CSequence {
    pub fn new(id: u64, eventsets: Vec<CEventset>) -> Self {
        Self { id, eventsets }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn eventsets(&self) -> &[CEventset] {
        &self.eventsets
    }

    pub fn len(&self) -> usize {
        self.eventsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eventsets.is_empty()
    }
}

impl fmt::Display for CSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for e in &self.eventsets {
            write!(f, "{e}")?;
        }
        f.write_str("⟩")
    }
}

/// Label to external utility. The empty coincidence carries utility zero
/// implicitly and needs no entry.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UtilityTable {
    entries: BTreeMap<String, Utility>,
}

impl UtilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a new entry; rejects duplicates and negative or non-finite values.
    pub fn insert(&mut self, label: impl Into<String>, value: Utility) -> Result<()> {
        let label = label.into();
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidUtility { label, value });
        }
        if self.entries.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        self.entries.insert(label, value);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<Utility> {
        self.entries.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.entries.contains_key(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Utility)> {
        self.entries.iter().map(|(l, v)| (l.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, Utility)> for UtilityTable {
    /// Panics on invalid entries; intended for literals in tests and fixtures.
    fn from_iter<I: IntoIterator<Item = (S, Utility)>>(iter: I) -> Self {
        let mut table = Self::new();
        for (l, v) in iter {
            table.insert(l, v).expect("valid utility entry");
        }
        table
    }
}

/// C-sequences paired with the utility table that covers every label in them.
#[derive(Clone, Debug, PartialEq)]
pub struct CSequenceDataset {
    csequences: Vec<CSequence>,
    utilities: UtilityTable,
}

impl CSequenceDataset {
    pub fn new(csequences: Vec<CSequence>, utilities: UtilityTable) -> Result<Self> {
        let mut ids = HashSet::with_capacity(csequences.len());
        for c in &csequences {
            if !ids.insert(c.id) {
                return Err(Error::DuplicateSequenceId(c.id));
            }
            for e in &c.eventsets {
                if let Some(l) = e
                    .coincidence
                    .labels()
                    .iter()
                    .find(|l| !utilities.contains(l))
                {
                    return Err(Error::UnknownLabel(l.clone()));
                }
            }
        }
        Ok(Self {
            csequences,
            utilities,
        })
    }

    pub fn csequences(&self) -> &[CSequence] {
        &self.csequences
    }

    pub fn utilities(&self) -> &UtilityTable {
        &self.utilities
    }

    pub fn len(&self) -> usize {
        self.csequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.csequences.is_empty()
    }

    /// Labels occurring in at least one non-empty coincidence, sorted.
    pub fn alphabet(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self
            .csequences
            .iter()
            .flat_map(|c| c.eventsets.iter())
            .flat_map(|e| e.coincidence.labels().iter())
            .collect();
        set.into_iter().cloned().collect()
    }
}

/// A pattern: an ordered list of non-empty coincidences.
///
/// Length is the number of coincidences, size the largest coincidence
/// cardinality. Ordered by length, then element-wise by coincidence order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LSequence {
    coincidences: Vec<Coincidence>,
}

impl LSequence {
    pub fn new(coincidences: Vec<Coincidence>) -> Result<Self> {
        if coincidences.iter().any(Coincidence::is_empty) {
            return Err(Error::EmptyCoincidence);
        }
        Ok(Self { coincidences })
    }

    /// Convenience constructor from nested label slices, e.g.
    /// `LSequence::from_labels(&[&["A"], &["B"]])`.
    pub fn from_labels(groups: &[&[&str]]) -> Result<Self> {
        Self::new(
            groups
                .iter()
                .map(|g| Coincidence::new(g.iter().copied()))
                .collect(),
        )
    }

    pub fn coincidences(&self) -> &[Coincidence] {
        &self.coincidences
    }

    pub fn len(&self) -> usize {
        self.coincidences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coincidences.is_empty()
    }

    pub fn size(&self) -> usize {
        self.coincidences
            .iter()
            .map(Coincidence::len)
            .max()
            .unwrap_or(0)
    }

    /// A new L-sequence with `c` appended.
    pub fn extended(&self, c: Coincidence) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::EmptyCoincidence);
        }
        let mut coincidences = self.coincidences.clone();
        coincidences.push(c);
        Ok(Self { coincidences })
    }
}

impl Ord for LSequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coincidences
            .len()
            .cmp(&other.coincidences.len())
            .then_with(|| self.coincidences.cmp(&other.coincidences))
    }
}

impl PartialOrd for LSequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for c in &self.coincidences {
            write!(f, "{c}")?;
        }
        f.write_str("⟩")
    }
}

/// `a ⊆ b` for C-eventsets: label subset with equal durations.
pub fn eventset_contains(a: &CEventset, b: &CEventset) -> bool {
    a.duration == b.duration && a.coincidence.is_subset(&b.coincidence)
}

/// Greedy leftmost embedding with strictly increasing positions. Taking the
/// earliest admissible position never rules out a later match.
fn embeds<A, B>(needle: &[A], haystack: &[B], fits: impl Fn(&A, &B) -> bool) -> bool {
    let mut rest = haystack.iter();
    needle.iter().all(|a| rest.any(|b| fits(a, b)))
}

/// `c ⊆ c_prime`: every eventset of `c` is contained in a distinct, strictly
/// later eventset of `c_prime`.
pub fn is_csubsequence(c: &CSequence, c_prime: &CSequence) -> bool {
    embeds(&c.eventsets, &c_prime.eventsets, eventset_contains)
}

/// `c ∼ l`: same length and equal label sets position by position.
pub fn matches(c: &CSequence, l: &LSequence) -> bool {
    c.eventsets.len() == l.coincidences.len()
        && c.eventsets
            .iter()
            .zip(&l.coincidences)
            .all(|(e, k)| e.coincidence == *k)
}

/// `l ⊆ l_prime`: each coincidence of `l` is a subset of a distinct, strictly
/// later coincidence of `l_prime`.
pub fn is_lsubsequence(l: &LSequence, l_prime: &LSequence) -> bool {
    embeds(
        &l.coincidences,
        &l_prime.coincidences,
        Coincidence::is_subset,
    )
}
