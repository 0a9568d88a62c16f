//! High-utility pattern mining over interval-based event sequences.
//!
//! Interval data is turned into sequences of coincidences (the labels active
//! over each stretch of time between consecutive interval endpoints, with
//! the stretch's duration). Patterns are ordered lists of label sets, valued
//! by the best utility of their matches in each sequence. The [`miner`]
//! finds every pattern up to a given length and coincidence size whose
//! utility reaches a threshold, pruning with one of two upper bounds;
//! [`oracle`] is a brute-force reference for it.
//!
//! ```
//! use huipm::{fixtures, miner, utility::UpperBoundKind};
//! use huipm::miner::{MiningConfig, Threshold};
//!
//! let data = fixtures::running_example_cdataset();
//! let cfg = MiningConfig::new(Threshold::Absolute(22.0), 3, 2, UpperBoundKind::Projected);
//! let (patterns, _stats) = miner::mine(&data, &cfg).unwrap();
//! assert!(patterns.iter().any(|p| p.lsequence.to_string() == "⟨{A}{B}⟩" && p.umax == 22.0));
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod par;
pub mod report;
pub mod transform;
pub mod utility;

pub use error::{Error, Result};
