//! Degeneracy histograms `N_{K,M}(μ)` and their CSV form.
//!
//! ```text
//! K,N1,class,orientable,simplicial,count
//! 6,7,S3,true,false,13660
//! ```
//!
//! `μ = 6K/N1` is never stored. `orientable` and `simplicial` are `true`,
//! `false` or `*` (not recorded). Lines starting with `#` and blank lines are
//! ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::classify::{classify_manifold, ClassifierConfig, SphereCatalog};
use super::Enumerated;
use crate::complex::RationalMu;

pub const CSV_HEADER: &str = "K,N1,class,orientable,simplicial,count";

/// The published 3-sphere degeneracies for `5 ≤ K ≤ 9`, `3.5 < μ < 6`.
pub const TABLE1_FIXTURE: &str = include_str!("../../data/table1_s3.csv");

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistogramKey {
    pub k: u32,
    pub n1: u32,
    pub class: String,
    pub orientable: Option<bool>,
    pub simplicial: Option<bool>,
}

impl HistogramKey {
    pub fn mu(&self) -> RationalMu {
        RationalMu::from_counts(self.k as u64, self.n1 as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistogramSource {
    Enumerated,
    Ingested,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyHistogram {
    entries: BTreeMap<HistogramKey, u64>,
    pub source: HistogramSource,
    pub filters: Vec<String>,
}

#[derive(Debug, Error)]
pub enum HistogramError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected header `{CSV_HEADER}`")]
    Header { line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate key (first seen on line {first})")]
    Duplicate { line: usize, first: usize },
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "*",
    }
}

impl DegeneracyHistogram {
    pub fn new(source: HistogramSource) -> Self {
        DegeneracyHistogram { entries: BTreeMap::new(), source, filters: Vec::new() }
    }

    pub fn add(&mut self, key: HistogramKey, count: u64) {
        *self.entries.entry(key).or_default() += count;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&HistogramKey, u64)> {
        self.entries.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Entries satisfying `keep`; `label` is appended to the filter list.
    pub fn filter(&self, label: &str, keep: impl Fn(&HistogramKey) -> bool) -> Self {
        let mut out = DegeneracyHistogram {
            entries: self.entries.iter().filter(|(k, _)| keep(k)).map(|(k, &c)| (k.clone(), c)).collect(),
            source: self.source,
            filters: self.filters.clone(),
        };
        out.filters.push(label.to_string());
        out
    }

    pub fn class_slice(&self, class: &str) -> Self {
        self.filter(&format!("class={class}"), |k| k.class == class)
    }

    /// Counts per `N1` at `K`, summed over the other key fields.
    pub fn levels(&self, k: u32) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for (key, &c) in &self.entries {
            if key.k == k {
                *out.entry(key.n1).or_default() += c;
            }
        }
        out
    }

    pub fn tet_counts(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.entries.keys().map(|k| k.k).collect();
        ks.dedup();
        ks
    }

    /// `count(K, n1_minus) / count(K, n1_plus)`, when both are present.
    pub fn ratio(&self, k: u32, n1_minus: u32, n1_plus: u32) -> Option<f64> {
        let levels = self.levels(k);
        let (&m, &p) = (levels.get(&n1_minus)?, levels.get(&n1_plus)?);
        (p > 0).then(|| m as f64 / p as f64)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for (k, c) in &self.entries {
            writeln!(s, "{},{},{},{},{},{}", k.k, k.n1, k.class, flag(k.orientable), flag(k.simplicial), c).unwrap();
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self, HistogramError> {
        let mut out = DegeneracyHistogram::new(HistogramSource::Ingested);
        let mut first_line: BTreeMap<HistogramKey, usize> = BTreeMap::new();
        let mut header_seen = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            if !header_seen {
                if row != CSV_HEADER {
                    return Err(HistogramError::Header { line });
                }
                header_seen = true;
                continue;
            }
            let bad = |message: String| HistogramError::Malformed { line, message };
            let fields: Vec<&str> = row.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(bad(format!("expected 6 fields, found {}", fields.len())));
            }
            let positive = |s: &str, what: &str| -> Result<u32, HistogramError> {
                match s.parse::<u32>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(bad(format!("{what} must be a positive integer, got {s:?}"))),
                }
            };
            let boolean = |s: &str, what: &str| -> Result<Option<bool>, HistogramError> {
                match s {
                    "true" => Ok(Some(true)),
                    "false" => Ok(Some(false)),
                    "*" => Ok(None),
                    _ => Err(bad(format!("{what} must be true, false or *, got {s:?}"))),
                }
            };
            if fields[2].is_empty() {
                return Err(bad("empty class".into()));
            }
            let key = HistogramKey {
                k: positive(fields[0], "K")?,
                n1: positive(fields[1], "N1")?,
                class: fields[2].to_string(),
                orientable: boolean(fields[3], "orientable")?,
                simplicial: boolean(fields[4], "simplicial")?,
            };
            let count: u64 = fields[5].parse().map_err(|_| bad(format!("count must be a nonnegative integer, got {:?}", fields[5])))?;
            if let Some(&first) = first_line.get(&key) {
                return Err(HistogramError::Duplicate { line, first });
            }
            first_line.insert(key.clone(), line);
            out.entries.insert(key, count);
        }
        if !header_seen {
            return Err(HistogramError::Header { line: text.lines().count().max(1) });
        }
        Ok(out)
    }

    pub fn table1_fixture() -> Self {
        DegeneracyHistogram::parse_csv(TABLE1_FIXTURE).expect("shipped fixture parses")
    }
}

pub fn ingest_histogram_file(path: &Path) -> Result<DegeneracyHistogram, HistogramError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| HistogramError::Io { path: path.display().to_string(), source })?;
    DegeneracyHistogram::parse_csv(&text)
}

/// Per-triangulation classifier seed derived from the master seed and the
/// position in the (signature-sorted) census.
pub fn derived_seed(master: u64, index: u64) -> u64 {
    // SplitMix64 finalizer.
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Classifies every enumerated triangulation and groups the counts.
pub fn histogram(items: &[Enumerated], catalog: &SphereCatalog, cfg: &ClassifierConfig) -> DegeneracyHistogram {
    let mut h = DegeneracyHistogram::new(HistogramSource::Enumerated);
    for (i, e) in items.iter().enumerate() {
        let t = &e.triangulation;
        let cfg = ClassifierConfig { seed: derived_seed(cfg.seed, i as u64), ..*cfg };
        let class = classify_manifold(t, catalog, &cfg);
        let key = HistogramKey {
            k: t.tet_count() as u32,
            n1: t.skeleton().n1() as u32,
            class: class.label.to_string(),
            orientable: Some(t.is_orientable()),
            simplicial: Some(t.is_simplicial()),
        };
        h.add(key, 1);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_ratios() {
        let h = DegeneracyHistogram::table1_fixture();
        let r: Vec<String> = [(6, 7, 8), (7, 8, 9), (8, 9, 10), (9, 10, 11)]
            .iter()
            .map(|&(k, m, p)| format!("{:.3}", h.ratio(k, m, p).unwrap()))
            .collect();
        assert_eq!(r, ["2.770", "2.698", "2.582", "2.458"]);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let h = DegeneracyHistogram::table1_fixture();
        let back = DegeneracyHistogram::parse_csv(&h.to_csv()).unwrap();
        assert_eq!(back, h);
        let dup = format!("{CSV_HEADER}\n6,7,S3,true,*,1\n6,7,S3,true,*,2\n");
        assert!(matches!(DegeneracyHistogram::parse_csv(&dup), Err(HistogramError::Duplicate { line: 3, first: 2 })));
        let bad = format!("{CSV_HEADER}\n6,0,S3,true,*,1\n");
        assert!(matches!(DegeneracyHistogram::parse_csv(&bad), Err(HistogramError::Malformed { line: 2, .. })));
    }
}
