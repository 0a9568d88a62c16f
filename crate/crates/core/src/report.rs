//! Run reports: a JSON document or a plain-text table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::miner::{MiningStats, Pattern, Threshold};
use crate::model::{CSequenceDataset, ESequenceDataset, Utility};
use crate::utility::{dataset_utility, UpperBoundKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub threshold: Threshold,
    pub xi_abs: Utility,
    pub max_length: usize,
    pub max_size: usize,
    pub strategies: Vec<UpperBoundKind>,
    pub benchmark: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub num_sequences: usize,
    pub num_intervals: usize,
    pub utility: Utility,
    pub alphabet: Vec<String>,
}

impl DatasetStats {
    pub fn new(raw: &ESequenceDataset, transformed: &CSequenceDataset) -> Self {
        Self {
            num_sequences: raw.len(),
            num_intervals: raw.num_intervals(),
            utility: dataset_utility(transformed),
            alphabet: raw.alphabet(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRun {
    pub strategy: UpperBoundKind,
    pub candidates_generated: u64,
    pub candidates_pruned: u64,
    pub patterns_found: u64,
    /// Present in benchmark mode only, so ordinary reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl StrategyRun {
    pub fn new(strategy: UpperBoundKind, stats: &MiningStats, timed: bool) -> Self {
        Self {
            strategy,
            candidates_generated: stats.candidates_generated,
            candidates_pruned: stats.candidates_pruned,
            patterns_found: stats.patterns_found,
            elapsed_ms: timed.then_some(stats.elapsed_ms),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub dataset: DatasetStats,
    pub runs: Vec<StrategyRun>,
    /// Whether every strategy produced the same patterns.
    pub strategies_agree: bool,
    pub patterns: Vec<Pattern>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let d = &self.dataset;
        let _ = writeln!(
            out,
            "threshold {} (xi_abs = {}), K = {}, Z = {}",
            match c.threshold {
                Threshold::Absolute(x) => format!("{x} absolute"),
                Threshold::Relative(x) => format!("{x} relative"),
            },
            c.xi_abs,
            c.max_length,
            c.max_size
        );
        let _ = writeln!(
            out,
            "dataset: {} sequences, {} intervals, utility {}, labels {}",
            d.num_sequences,
            d.num_intervals,
            d.utility,
            d.alphabet.join(",")
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<8} {:>12} {:>12} {:>10} {:>12}",
            "strategy", "generated", "pruned", "patterns", "elapsed_ms"
        );
        for r in &self.runs {
            let elapsed = r
                .elapsed_ms
                .map_or_else(|| "-".to_string(), |e| format!("{e:.3}"));
            let _ = writeln!(
                out,
                "{:<8} {:>12} {:>12} {:>10} {:>12}",
                r.strategy.cli_name(),
                r.candidates_generated,
                r.candidates_pruned,
                r.patterns_found,
                elapsed
            );
        }
        if !self.strategies_agree {
            let _ = writeln!(out, "WARNING: strategies returned different patterns");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>14}  pattern", "umax");
        for p in &self.patterns {
            let _ = writeln!(out, "{:>14}  {}", p.umax, p.lsequence);
        }
        out
    }
}
