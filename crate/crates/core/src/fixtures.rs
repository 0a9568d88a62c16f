//! The four-sequence running example used throughout the tests, the `check`
//! subcommand and the README.

use crate::model::{
    CEventset, CSequence, CSequenceDataset, Coincidence, ESequence, ESequenceDataset,
    EventInterval, Time, UtilityTable,
};

/// Running example in the dataset file format.
pub const RUNNING_EXAMPLE_TSV: &str = "\
# id\tlabel\tbegin\tfinish
1\tA\t6\t12
1\tB\t10\t17
1\tC\t19\t25
1\tE\t21\t23
2\tA\t2\t7
2\tB\t5\t10
2\tD\t5\t12
2\tC\t16\t22
2\tE\t18\t20
3\tB\t6\t12
3\tA\t8\t14
3\tC\t14\t20
3\tE\t16\t18
4\tB\t1\t5
4\tC\t8\t14
4\tE\t9\t12
4\tF\t9\t12
";

/// External utilities of the running example in the utility file format.
pub const RUNNING_EXAMPLE_UTILITIES_TSV: &str = "\
A\t2
B\t1
C\t1
D\t3
E\t2
F\t5
";

const INTERVALS: &[(u64, &str, Time, Time)] = &[
    (1, "A", 6, 12),
    (1, "B", 10, 17),
    (1, "C", 19, 25),
    (1, "E", 21, 23),
    (2, "A", 2, 7),
    (2, "B", 5, 10),
    (2, "D", 5, 12),
    (2, "C", 16, 22),
    (2, "E", 18, 20),
    (3, "B", 6, 12),
    (3, "A", 8, 14),
    (3, "C", 14, 20),
    (3, "E", 16, 18),
    (4, "B", 1, 5),
    (4, "C", 8, 14),
    (4, "E", 9, 12),
    (4, "F", 9, 12),
];

pub fn running_example() -> ESequenceDataset {
    let sequences = (1..=4)
        .map(|id| {
            let intervals = INTERVALS
                .iter()
                .filter(|r| r.0 == id)
                .map(|&(_, l, b, f)| EventInterval::new(l, b, f).unwrap())
                .collect();
            ESequence::new(id, intervals).unwrap()
        })
        .collect();
    ESequenceDataset::new(sequences).unwrap()
}

pub fn running_example_utilities() -> UtilityTable {
    [
        ("A", 2.0),
        ("B", 1.0),
        ("C", 1.0),
        ("D", 3.0),
        ("E", 2.0),
        ("F", 5.0),
    ]
    .into_iter()
    .collect()
}

fn eventsets(items: &[(&[&str], Time)]) -> Vec<CEventset> {
    items
        .iter()
        .map(|(l, d)| CEventset::new(Coincidence::new(l.iter().copied()), *d).unwrap())
        .collect()
}

/// The C-sequences of the running example, written out by hand.
pub fn running_example_csequences() -> Vec<CSequence> {
    vec![
        CSequence::new(
            1,
            eventsets(&[
                (&["A"], 4),
                (&["A", "B"], 2),
                (&["B"], 5),
                (&[], 2),
                (&["C"], 2),
                (&["C", "E"], 2),
                (&["C"], 2),
            ]),
        ),
        CSequence::new(
            2,
            eventsets(&[
                (&["A"], 3),
                (&["A", "B", "D"], 2),
                (&["B", "D"], 3),
                (&["D"], 2),
                (&[], 4),
                (&["C"], 2),
                (&["C", "E"], 2),
                (&["C"], 2),
            ]),
        ),
        CSequence::new(
            3,
            eventsets(&[
                (&["B"], 2),
                (&["A", "B"], 4),
                (&["A"], 2),
                (&["C"], 2),
                (&["C", "E"], 2),
                (&["C"], 2),
            ]),
        ),
        CSequence::new(
            4,
            eventsets(&[
                (&["B"], 4),
                (&[], 3),
                (&["C"], 1),
                (&["C", "E", "F"], 3),
                (&["C"], 2),
            ]),
        ),
    ]
}

pub fn running_example_cdataset() -> CSequenceDataset {
    CSequenceDataset::new(running_example_csequences(), running_example_utilities()).unwrap()
}
