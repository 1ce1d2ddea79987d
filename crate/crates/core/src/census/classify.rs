//! Conservative 3-sphere recognition.
//!
//! A triangulation with nontrivial `H1` is labelled by its homology. One
//! with trivial `H1` is walked with random Pachner moves biased towards
//! shrinking; reaching a catalogued 3-sphere triangulation proves it is
//! `S³`. Every closed triangulation with at most two tetrahedra and trivial
//! `H1` is a 3-sphere, so the catalog is those plus the boundary of the
//! 4-simplex.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::enumerate_all;
use crate::complex::{GluedTriangulation, HomologyProfile, IsoSignature};
use crate::moves::{apply_move, enumerate_moves, MoveKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    S3Confirmed,
    TrivialH1Unresolved,
    Other(HomologyProfile),
    Unclassified,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::S3Confirmed => f.write_str("S3"),
            ClassLabel::TrivialH1Unresolved => f.write_str("trivial-H1-unresolved"),
            ClassLabel::Other(h) => write!(f, "other({h})"),
            ClassLabel::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// How the label was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Nontrivial homology; no walk attempted.
    Homology,
    /// Reached the catalog entry `reached` on restart `restart` after
    /// `steps` moves.
    Simplified { restart: u32, steps: u32, reached: IsoSignature },
    /// The walk budget ran out.
    BudgetExhausted { restarts: u32, steps_per_restart: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldClass {
    pub label: ClassLabel,
    pub homology: HomologyProfile,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifierConfig {
    pub restarts: u32,
    pub steps: u32,
    /// Walks may grow at most this many tetrahedra above the start.
    pub headroom: usize,
    pub seed: u64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { restarts: 64, steps: 10_000, headroom: 4, seed: 0 }
    }
}

/// Signatures of known 3-sphere triangulations.
#[derive(Clone, Debug)]
pub struct SphereCatalog {
    signatures: BTreeSet<IsoSignature>,
    max_tets: usize,
}

impl SphereCatalog {
    pub fn standard() -> Self {
        let mut signatures = BTreeSet::new();
        for k in 1..=2 {
            for e in enumerate_all(k, 1) {
                if e.triangulation.homology_h1().is_trivial() {
                    signatures.insert(e.signature);
                }
            }
        }
        signatures.insert(GluedTriangulation::boundary_4_simplex().iso_signature());
        SphereCatalog { signatures, max_tets: 5 }
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn contains(&self, t: &GluedTriangulation) -> Option<IsoSignature> {
        if t.tet_count() > self.max_tets {
            return None;
        }
        let sig = t.iso_signature();
        self.signatures.contains(&sig).then_some(sig)
    }
}

const SHRINKING: [MoveKind; 2] = [MoveKind::ThreeTwo, MoveKind::FourOne];

pub fn classify_manifold(t: &GluedTriangulation, catalog: &SphereCatalog, cfg: &ClassifierConfig) -> ManifoldClass {
    let homology = t.homology_h1();
    if !homology.is_trivial() {
        return ManifoldClass { label: ClassLabel::Other(homology.clone()), homology, evidence: Evidence::Homology };
    }
    if let Some(reached) = catalog.contains(t) {
        return ManifoldClass {
            label: ClassLabel::S3Confirmed,
            homology,
            evidence: Evidence::Simplified { restart: 0, steps: 0, reached },
        };
    }
    let cap = t.tet_count() + cfg.headroom;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (restart as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut cur = t.clone();
        for step in 1..=cfg.steps {
            let shrink = enumerate_moves(&cur, &SHRINKING);
            let m = if !shrink.is_empty() && (cur.tet_count() >= cap || rng.gen_bool(0.9)) {
                *shrink.choose(&mut rng).unwrap()
            } else {
                let grow = enumerate_moves(&cur, &[MoveKind::TwoThree]);
                match grow.choose(&mut rng) {
                    Some(m) if cur.tet_count() < cap => *m,
                    _ => break,
                }
            };
            cur = apply_move(&cur, &m).expect("enumerated move applies");
            if let Some(reached) = catalog.contains(&cur) {
                return ManifoldClass {
                    label: ClassLabel::S3Confirmed,
                    homology,
                    evidence: Evidence::Simplified { restart, steps: step, reached },
                };
            }
        }
    }
    ManifoldClass {
        label: ClassLabel::TrivialH1Unresolved,
        homology,
        evidence: Evidence::BudgetExhausted { restarts: cfg.restarts, steps_per_restart: cfg.steps },
    }
}
