//! Facet-gluing triangulations of closed 3-manifolds.
//!
//! A [`GluedTriangulation`] is a set of `K` abstract tetrahedra with vertices
//! labelled 0..3. Face `f` of a tetrahedron is the face opposite vertex `f`.
//! Every face is glued to exactly one other face by a vertex relabelling, so
//! vertices, edges and triangles of different tetrahedra (or of the same one)
//! may be identified. This is the generalized notion of triangulation used by
//! census work; the stricter simplicial-complex notion is available as the
//! [`is_simplicial`](GluedTriangulation::is_simplicial) predicate.

mod homology;
mod signature;
mod skeleton;
mod text;
mod validate;

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::perm::Perm4;

pub use homology::{smith_normal_form, HomologyProfile, IntMatrix};
pub use signature::{IsoSignature, SignatureError};
pub use skeleton::{QuotientSkeleton, RationalMu};
pub use text::{format_gluing_text, parse_gluing_archive, parse_gluing_text, ParseError};
pub use validate::{LinkSummary, SimplicialWitness, ValidationReport, Verdict};

/// The six edges of a tetrahedron as ordered vertex pairs.
pub const TET_EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`TET_EDGES`] of the edge joining `a` and `b`.
#[inline]
pub fn edge_index(a: u8, b: u8) -> usize {
    const TABLE: [[u8; 4]; 4] = [[9, 0, 1, 2], [0, 9, 3, 4], [1, 3, 9, 5], [2, 4, 5, 9]];
    TABLE[a as usize][b as usize] as usize
}

/// Vertices of face `f` in ascending order.
#[inline]
pub fn face_vertices(f: u8) -> [u8; 3] {
    const TABLE: [[u8; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
    TABLE[f as usize]
}

/// Destination of one face gluing: face `face` of tetrahedron `tet`, reached by
/// mapping vertex `i` of the source tetrahedron to vertex `perm(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: u32,
    pub face: u8,
    pub perm: Perm4,
}

impl Gluing {
    pub fn new(tet: u32, face: u8, perm: Perm4) -> Self {
        Gluing { tet, face, perm }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("triangulation has no tetrahedra")]
    Empty,
    #[error("unglued face ({0},{1})")]
    UngluedFace(u32, u8),
    #[error("face ({0},{1}) glued to itself")]
    SelfGluedFace(u32, u8),
    #[error("face ({tet},{face}) references missing tetrahedron {target}")]
    MissingTet { tet: u32, face: u8, target: u32 },
    #[error("face ({tet},{face}): permutation {perm} does not carry face {face} to face {target_face}")]
    BadPermutation { tet: u32, face: u8, perm: Perm4, target_face: u8 },
    #[error("face ({0},{1}) glued inconsistently")]
    Inconsistent(u32, u8),
    #[error("face-adjacency graph is disconnected")]
    Disconnected,
}

/// A closed triangulation given by its face gluings. Values are immutable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GluedTriangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl GluedTriangulation {
    /// Validates and wraps a complete gluing table.
    pub fn from_gluings(gluings: Vec<[Gluing; 4]>) -> Result<Self, StructureError> {
        let k = gluings.len();
        if k == 0 {
            return Err(StructureError::Empty);
        }
        for (t, row) in gluings.iter().enumerate() {
            let t = t as u32;
            for f in 0..4u8 {
                let g = row[f as usize];
                if g.tet as usize >= k {
                    return Err(StructureError::MissingTet { tet: t, face: f, target: g.tet });
                }
                if g.face > 3 || g.perm.apply(f) != g.face {
                    return Err(StructureError::BadPermutation {
                        tet: t,
                        face: f,
                        perm: g.perm,
                        target_face: g.face,
                    });
                }
                if g.tet == t && g.face == f {
                    return Err(StructureError::SelfGluedFace(t, f));
                }
                let back = gluings[g.tet as usize][g.face as usize];
                if back.tet != t || back.face != f || back.perm != g.perm.inverse() {
                    return Err(StructureError::Inconsistent(t, f));
                }
            }
        }
        let tri = GluedTriangulation { gluings };
        if !tri.is_connected() {
            return Err(StructureError::Disconnected);
        }
        Ok(tri)
    }

    /// Wraps a gluing table already known to be a valid involution.
    pub(crate) fn from_gluings_unchecked(gluings: Vec<[Gluing; 4]>) -> Self {
        let tri = GluedTriangulation { gluings };
        debug_assert!(GluedTriangulation::from_gluings(tri.gluings.clone()).is_ok());
        tri
    }

    /// Two tetrahedra glued along all four faces by the identity.
    pub fn doubled_tetrahedron() -> Self {
        let g = |t: u32| -> [Gluing; 4] {
            [0, 1, 2, 3].map(|f| Gluing::new(t, f, Perm4::IDENTITY))
        };
        GluedTriangulation::from_gluings_unchecked(vec![g(1), g(0)])
    }

    /// The boundary of the 4-simplex: tetrahedron `i` spans the vertices
    /// `{0..4} \ {i}`, and any two tetrahedra share exactly one face.
    pub fn boundary_4_simplex() -> Self {
        // Local vertex j of tetrahedron i is the j-th smallest of {0..4} \ {i}.
        let global = |i: usize| -> [u8; 4] {
            let mut out = [0u8; 4];
            let mut n = 0;
            for v in 0..5u8 {
                if v as usize != i {
                    out[n] = v;
                    n += 1;
                }
            }
            out
        };
        let mut gluings = vec![[Gluing::new(0, 0, Perm4::IDENTITY); 4]; 5];
        for i in 0..5usize {
            let gi = global(i);
            for f in 0..4u8 {
                // Face f of tet i misses global vertex gi[f]; the other tet
                // containing that face is the one indexed by gi[f].
                let j = gi[f as usize] as usize;
                let gj = global(j);
                let mut img = [0u8; 4];
                for (local, &v) in gi.iter().enumerate() {
                    img[local] = if local as u8 == f {
                        gj.iter().position(|&w| w == i as u8).unwrap() as u8
                    } else {
                        gj.iter().position(|&w| w == v).unwrap() as u8
                    };
                }
                let perm = Perm4::from_images(img).expect("bijection");
                gluings[i][f as usize] = Gluing::new(j as u32, perm.apply(f), perm);
            }
        }
        GluedTriangulation::from_gluings_unchecked(gluings)
    }

    #[inline]
    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    #[inline]
    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// Relabels tetrahedra by `tet_map` (old index → new index) and the
    /// vertices of old tetrahedron `t` by `vertex_maps[t]` (old label → new).
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Self {
        let k = self.tet_count();
        assert_eq!(tet_map.len(), k);
        assert_eq!(vertex_maps.len(), k);
        let mut out = vec![[Gluing::new(0, 0, Perm4::IDENTITY); 4]; k];
        for t in 0..k {
            for f in 0..4u8 {
                let g = self.gluing(t, f);
                let src = vertex_maps[t];
                let dst = vertex_maps[g.tet as usize];
                let perm = dst.compose(g.perm).compose(src.inverse());
                out[tet_map[t]][src.apply(f) as usize] =
                    Gluing::new(tet_map[g.tet as usize] as u32, dst.apply(g.face), perm);
            }
        }
        GluedTriangulation::from_gluings_unchecked(out)
    }

    /// Stable 64-bit digest of the gluing table; identifies this exact
    /// labelled value (not its isomorphism class).
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.gluings.hash(&mut h);
        h.finish()
    }

    fn is_connected(&self) -> bool {
        let k = self.tet_count();
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = queue.pop_front() {
            for g in &self.gluings[t] {
                let u = g.tet as usize;
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == k
    }
}
