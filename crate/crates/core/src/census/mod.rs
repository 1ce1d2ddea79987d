//! Exhaustive enumeration, manifold classification and degeneracy
//! histograms.

mod classify;
mod enumerate;
mod histogram;

use std::path::Path;

pub use classify::{classify_manifold, ClassLabel, ClassifierConfig, Evidence, ManifoldClass, SphereCatalog};
pub use enumerate::{enumerate_all, Enumerated};
pub use histogram::{
    derived_seed, histogram, ingest_histogram_file, DegeneracyHistogram, HistogramError, HistogramKey,
    HistogramSource, CSV_HEADER, TABLE1_FIXTURE,
};

use crate::complex::{parse_gluing_archive, GluedTriangulation, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ArchiveError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Reads a gluing archive (gluing files separated by `---` lines).
pub fn ingest_gluing_archive(path: &Path) -> Result<Vec<GluedTriangulation>, ArchiveError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ArchiveError::Io { path: path.display().to_string(), source })?;
    Ok(parse_gluing_archive(&text)?)
}
