//! Text formats for datasets and external utilities.
//!
//! Dataset files hold one interval per line as
//! `sequence_id<TAB>label<TAB>begin<TAB>finish`; utility files hold
//! `label<TAB>value`. Columns may also be separated by runs of spaces. Lines
//! starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ESequence, ESequenceDataset, EventInterval, Time, UtilityTable};

fn records<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(Error::from(e))),
        Ok(line) => {
            let t = line.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i + 1, t.to_owned())))
        }
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, name: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| parse_err(line, format!("invalid {name} `{raw}`")))
}

pub fn parse_dataset<R: BufRead>(r: R) -> Result<ESequenceDataset> {
    let mut groups: BTreeMap<u64, Vec<EventInterval>> = BTreeMap::new();
    let mut seen = HashSet::new();
    for rec in records(r) {
        let (n, line) = rec?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        let [id, label, begin, finish] = cols[..] else {
            return Err(parse_err(
                n,
                format!(
                    "expected 4 columns (id, label, begin, finish), found {}",
                    cols.len()
                ),
            ));
        };
        let id: u64 = field(n, "sequence id", id)?;
        if id == 0 {
            return Err(parse_err(n, "sequence id must be positive"));
        }
        let begin: Time = field(n, "begin time", begin)?;
        let finish: Time = field(n, "finish time", finish)?;
        let e =
            EventInterval::new(label, begin, finish).map_err(|e| parse_err(n, e.to_string()))?;
        if !seen.insert((id, e.clone())) {
            return Err(parse_err(
                n,
                format!("duplicate interval ({label}, {begin}, {finish}) in sequence {id}"),
            ));
        }
        groups.entry(id).or_default().push(e);
    }
    let sequences = groups
        .into_iter()
        .map(|(id, intervals)| ESequence::new(id, intervals))
        .collect::<Result<Vec<_>>>()?;
    ESequenceDataset::new(sequences)
}

pub fn parse_utilities<R: BufRead>(r: R) -> Result<UtilityTable> {
    let mut table = UtilityTable::new();
    for rec in records(r) {
        let (n, line) = rec?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        let [label, value] = cols[..] else {
            return Err(parse_err(
                n,
                format!("expected 2 columns (label, value), found {}", cols.len()),
            ));
        };
        let value: f64 = field(n, "utility", value)?;
        table
            .insert(label, value)
            .map_err(|e| parse_err(n, e.to_string()))?;
    }
    Ok(table)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_dataset(path: &Path) -> Result<ESequenceDataset> {
    parse_dataset(open(path)?)
}

pub fn read_utilities(path: &Path) -> Result<UtilityTable> {
    parse_utilities(open(path)?)
}

pub fn write_dataset<W: Write>(d: &ESequenceDataset, mut w: W) -> io::Result<()> {
    for s in d.sequences() {
        for e in s.intervals() {
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                s.id(),
                e.label(),
                e.begin(),
                e.finish()
            )?;
        }
    }
    Ok(())
}

pub fn write_utilities<W: Write>(t: &UtilityTable, mut w: W) -> io::Result<()> {
    for (label, value) in t.iter() {
        writeln!(w, "{label}\t{value}")?;
    }
    Ok(())
}
