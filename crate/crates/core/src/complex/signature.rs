//! Canonical isomorphism signatures.
//!
//! A rooted labelling starts from a tetrahedron `r` and a vertex relabelling
//! `σ` of it, then visits faces `(new tet, face)` in ascending order. The
//! first time a face leads to an unlabelled tetrahedron, that tetrahedron
//! receives the next index and the vertex labels that make the gluing the
//! identity. Every face contributes one code
//!
//! ```text
//! code = 96 · target_tet + 24 · target_face + perm_index
//! ```
//!
//! where `perm_index` is the lexicographic index of the gluing permutation.
//! The signature is the lexicographically least code sequence over all
//! `24·K` roots. It is printed as `cdt1-<K>-<payload>`, the payload being
//! every code written in lowercase base 36 with a fixed width `w`, the
//! number of base-36 digits of `96K - 1` (so `w = 2` for `K ≤ 13`). Codes are
//! emitted for both sides of every gluing, which makes decoding a direct
//! table fill followed by the usual consistency checks.

use std::fmt;

use thiserror::Error;

use super::{GluedTriangulation, Gluing, StructureError};
use crate::perm::Perm4;

const PREFIX: &str = "cdt1";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoSignature(String);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("signature must look like {PREFIX}-<K>-<payload>")]
    Malformed,
    #[error("payload has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("invalid base-36 digit {0:?}")]
    Digit(char),
    #[error("code {0} out of range")]
    Code(u32),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

fn code_width(k: usize) -> usize {
    let mut max = 96 * k as u64 - 1;
    let mut w = 1;
    while max >= 36 {
        max /= 36;
        w += 1;
    }
    w
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Scratch state for one rooted traversal.
pub(crate) struct Traversal {
    old_of_new: Vec<u32>,
    new_of_old: Vec<u32>,
    map: Vec<Perm4>,
}

impl Traversal {
    pub(crate) fn new(k: usize) -> Self {
        Traversal { old_of_new: vec![0; k], new_of_old: vec![u32::MAX; k], map: vec![Perm4::IDENTITY; k] }
    }

    /// Feeds the code sequence of root `(root, sigma)` to `visit`, stopping
    /// early when `visit` returns `false`. `sigma` maps new labels to old.
    #[inline]
    pub(crate) fn run(
        &mut self,
        tri: &GluedTriangulation,
        root: usize,
        sigma: Perm4,
        mut visit: impl FnMut(usize, u16) -> bool,
    ) {
        let k = tri.tet_count();
        self.new_of_old.iter_mut().for_each(|x| *x = u32::MAX);
        self.old_of_new[0] = root as u32;
        self.new_of_old[root] = 0;
        self.map[0] = sigma;
        let mut count = 1usize;
        for n in 0..k {
            let old = self.old_of_new[n] as usize;
            let m = self.map[n];
            for nf in 0..4u8 {
                let g = tri.gluing(old, m.apply(nf));
                let seen = self.new_of_old[g.tet as usize];
                let code = if seen == u32::MAX {
                    let n2 = count;
                    count += 1;
                    self.old_of_new[n2] = g.tet;
                    self.new_of_old[g.tet as usize] = n2 as u32;
                    self.map[n2] = g.perm.compose(m);
                    (n2 * 96 + nf as usize * 24) as u16
                } else {
                    let m2inv = self.map[seen as usize].inverse();
                    let nf2 = m2inv.apply(g.face);
                    let p = m2inv.compose(g.perm).compose(m);
                    (seen as usize * 96 + nf2 as usize * 24 + p.index() as usize) as u16
                };
                if !visit(4 * n + nf as usize, code) {
                    return;
                }
            }
        }
    }
}

/// Lexicographically least code sequence and the number of roots attaining
/// it (the order of the automorphism group).
pub(crate) fn canonical_codes(tri: &GluedTriangulation) -> (Vec<u16>, usize) {
    let k = tri.tet_count();
    let mut trav = Traversal::new(k);
    let mut best: Vec<u16> = Vec::with_capacity(4 * k);
    let mut ties = 0usize;
    for root in 0..k {
        for sigma in Perm4::all() {
            if best.is_empty() {
                trav.run(tri, root, sigma, |_, c| {
                    best.push(c);
                    true
                });
                ties = 1;
                continue;
            }
            // 0 = equal so far, 1 = strictly smaller (overwriting), 2 = larger.
            let mut state = 0u8;
            trav.run(tri, root, sigma, |pos, c| {
                if state == 1 {
                    best[pos] = c;
                    return true;
                }
                match c.cmp(&best[pos]) {
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => {
                        state = 1;
                        best[pos] = c;
                        true
                    }
                    std::cmp::Ordering::Greater => {
                        state = 2;
                        false
                    }
                }
            });
            match state {
                0 => ties += 1,
                1 => ties = 1,
                _ => {}
            }
        }
    }
    (best, ties)
}

fn triangulation_from_codes(k: usize, codes: &[u16]) -> Result<GluedTriangulation, SignatureError> {
    let mut gluings = vec![[Gluing::new(0, 0, Perm4::IDENTITY); 4]; k];
    for (pos, &c) in codes.iter().enumerate() {
        let c = c as u32;
        let (tet, face, perm) = (c / 96, ((c % 96) / 24) as u8, (c % 24) as u8);
        if tet as usize >= k {
            return Err(SignatureError::Code(c));
        }
        let perm = Perm4::from_index(perm).ok_or(SignatureError::Code(c))?;
        gluings[pos / 4][pos % 4] = Gluing::new(tet, face, perm);
    }
    Ok(GluedTriangulation::from_gluings(gluings)?)
}

impl IsoSignature {
    pub fn of(tri: &GluedTriangulation) -> Self {
        let (codes, _) = canonical_codes(tri);
        IsoSignature::encode(tri.tet_count(), &codes)
    }

    fn encode(k: usize, codes: &[u16]) -> Self {
        let w = code_width(k);
        let mut s = format!("{PREFIX}-{k}-");
        for &c in codes {
            let mut buf = vec![b'0'; w];
            let mut v = c as usize;
            for slot in buf.iter_mut().rev() {
                *slot = DIGITS[v % 36];
                v /= 36;
            }
            s.push_str(std::str::from_utf8(&buf).unwrap());
        }
        IsoSignature(s)
    }

    /// Parses and checks a signature string (including that it decodes to a
    /// well-formed triangulation).
    pub fn parse(s: &str) -> Result<Self, SignatureError> {
        let sig = IsoSignature(s.to_string());
        sig.decode()?;
        Ok(sig)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tet_count(&self) -> usize {
        self.0.split('-').nth(1).and_then(|k| k.parse().ok()).unwrap_or(0)
    }

    /// Rebuilds the canonically labelled triangulation.
    pub fn decode(&self) -> Result<GluedTriangulation, SignatureError> {
        let mut parts = self.0.splitn(3, '-');
        let (Some(PREFIX), Some(k), Some(payload)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(SignatureError::Malformed);
        };
        let k: usize = k.parse().map_err(|_| SignatureError::Malformed)?;
        if k == 0 {
            return Err(SignatureError::Malformed);
        }
        let w = code_width(k);
        if payload.len() != 4 * k * w {
            return Err(SignatureError::Length { got: payload.len(), expected: 4 * k * w });
        }
        let mut codes = Vec::with_capacity(4 * k);
        for chunk in payload.as_bytes().chunks(w) {
            let mut v = 0u32;
            for &b in chunk {
                let d = DIGITS.iter().position(|&x| x == b).ok_or(SignatureError::Digit(b as char))?;
                v = v * 36 + d as u32;
            }
            if v >= 96 * k as u32 {
                return Err(SignatureError::Code(v));
            }
            codes.push(v as u16);
        }
        triangulation_from_codes(k, &codes)
    }
}

impl fmt::Display for IsoSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl GluedTriangulation {
    pub fn iso_signature(&self) -> IsoSignature {
        IsoSignature::of(self)
    }

    /// The representative labelled by its own minimal traversal.
    pub fn canonical_form(&self) -> GluedTriangulation {
        let (codes, _) = canonical_codes(self);
        triangulation_from_codes(self.tet_count(), &codes).expect("canonical codes decode")
    }

    /// Number of relabellings of tetrahedra and vertices mapping the
    /// triangulation to itself.
    pub fn automorphism_count(&self) -> usize {
        let k = self.tet_count();
        let mut trav = Traversal::new(k);
        let mut reference = Vec::with_capacity(4 * k);
        trav.run(self, 0, Perm4::IDENTITY, |_, c| {
            reference.push(c);
            true
        });
        let mut count = 0;
        for root in 0..k {
            for sigma in Perm4::all() {
                let mut equal = true;
                trav.run(self, root, sigma, |pos, c| {
                    equal = c == reference[pos];
                    equal
                });
                if equal {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_isomorphic(&self, other: &GluedTriangulation) -> bool {
        self.tet_count() == other.tet_count() && self.iso_signature() == other.iso_signature()
    }
}
