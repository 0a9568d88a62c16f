//! E-sequence to C-sequence conversion.
//!
//! The unique begin/finish times of a sequence cut its timeline into
//! consecutive windows; each window becomes a C-eventset holding the labels
//! whose intervals cover the whole window, paired with the window length.

use crate::error::{Error, Result};
use crate::model::{
    CEventset, CSequence, CSequenceDataset, Coincidence, ESequence, ESequenceDataset, Time,
    Utility, UtilityTable,
};

/// Strictly ascending begin/finish times of one E-sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimePointList(Vec<Time>);

impl TimePointList {
    pub fn points(&self) -> &[Time] {
        &self.0
    }

    /// Consecutive `(t_k, t_{k+1})` windows.
    pub fn windows(&self) -> impl Iterator<Item = (Time, Time)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

pub fn unique_time_points(s: &ESequence) -> TimePointList {
    let mut points: Vec<Time> = s
        .intervals()
        .iter()
        .flat_map(|e| [e.begin(), e.finish()])
        .collect();
    points.sort_unstable();
    points.dedup();
    TimePointList(points)
}

/// Labels whose intervals cover `[start, end]` entirely.
pub fn phi(s: &ESequence, start: Time, end: Time) -> Result<Coincidence> {
    if start >= end {
        return Err(Error::InvalidWindow(start, end));
    }
    Ok(Coincidence::new(
        s.intervals()
            .iter()
            .filter(|e| e.begin() <= start && end <= e.finish())
            .map(|e| e.label()),
    ))
}

pub fn to_csequence(s: &ESequence) -> CSequence {
    let eventsets = unique_time_points(s)
        .windows()
        .map(|(a, b)| {
            let c = phi(s, a, b).expect("time points are strictly ascending");
            CEventset::new(c, b - a).expect("time points are strictly ascending")
        })
        .collect();
    CSequence::new(s.id(), eventsets)
}

/// Transform every sequence and attach the utility table.
///
/// Labels missing from `utilities` take `default_utility` when given;
/// otherwise the first missing label is reported as an error.
pub fn transform_dataset(
    d: &ESequenceDataset,
    utilities: &UtilityTable,
    default_utility: Option<Utility>,
) -> Result<CSequenceDataset> {
    let mut table = utilities.clone();
    for label in d.alphabet() {
        if table.contains(&label) {
            continue;
        }
        match default_utility {
            Some(v) => table.insert(label, v)?,
            None => return Err(Error::UnknownLabel(label)),
        }
    }
    CSequenceDataset::new(d.sequences().iter().map(to_csequence).collect(), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::EventInterval;

    fn seq(id: u64) -> ESequence {
        fixtures::running_example().sequences()[id as usize - 1].clone()
    }

    #[test]
    fn time_points() {
        assert_eq!(unique_time_points(&seq(4)).points(), [1, 5, 8, 9, 12, 14]);
        assert_eq!(
            unique_time_points(&seq(1)).points(),
            [6, 10, 12, 17, 19, 21, 23, 25]
        );
        let single = ESequence::new(1, vec![EventInterval::new("A", 6, 12).unwrap()]).unwrap();
        assert_eq!(unique_time_points(&single).points(), [6, 12]);
    }

    #[test]
    fn window_function() {
        let s4 = seq(4);
        assert_eq!(phi(&s4, 9, 12).unwrap(), Coincidence::new(["C", "E", "F"]));
        assert_eq!(phi(&s4, 5, 8).unwrap(), Coincidence::empty());
        assert_eq!(phi(&s4, 100, 200).unwrap(), Coincidence::empty());
        assert_eq!(phi(&s4, 9, 9), Err(Error::InvalidWindow(9, 9)));
        assert_eq!(phi(&s4, 12, 9), Err(Error::InvalidWindow(12, 9)));
    }

    #[test]
    fn running_example_matches_hand_written_csequences() {
        let expected = fixtures::running_example_csequences();
        for (s, c) in fixtures::running_example()
            .sequences()
            .iter()
            .zip(&expected)
        {
            assert_eq!(&to_csequence(s), c, "sequence {}", s.id());
        }
        assert_eq!(
            to_csequence(&seq(4)).to_string(),
            "⟨(B,4)(∅,3)(C,1)({C,E,F},3)(C,2)⟩"
        );
        assert_eq!(
            to_csequence(&seq(1)).to_string(),
            "⟨(A,4)({A,B},2)(B,5)(∅,2)(C,2)({C,E},2)(C,2)⟩"
        );
    }

    #[test]
    fn single_interval() {
        let s = ESequence::new(7, vec![EventInterval::new("A", 6, 12).unwrap()]).unwrap();
        let c = to_csequence(&s);
        assert_eq!(c.id(), 7);
        assert_eq!(c.to_string(), "⟨(A,6)⟩");
    }

    #[test]
    fn overlapping_same_label_counts_once_per_window() {
        let s = ESequence::new(
            1,
            vec![
                EventInterval::new("A", 0, 4).unwrap(),
                EventInterval::new("A", 2, 6).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(to_csequence(&s).to_string(), "⟨(A,2)(A,2)(A,2)⟩");
    }

    #[test]
    fn dataset_transformation() {
        let d = transform_dataset(
            &fixtures::running_example(),
            &fixtures::running_example_utilities(),
            None,
        )
        .unwrap();
        assert_eq!(d, fixtures::running_example_cdataset());

        let empty =
            transform_dataset(&ESequenceDataset::default(), &UtilityTable::new(), None).unwrap();
        assert!(empty.is_empty());

        let partial: UtilityTable = [("A", 2.0)].into_iter().collect();
        assert_eq!(
            transform_dataset(&fixtures::running_example(), &partial, None),
            Err(Error::UnknownLabel("B".into()))
        );
        let defaulted =
            transform_dataset(&fixtures::running_example(), &partial, Some(1.0)).unwrap();
        assert_eq!(defaulted.utilities().get("A"), Some(2.0));
        assert_eq!(defaulted.utilities().get("F"), Some(1.0));
    }
}
