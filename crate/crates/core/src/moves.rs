//! Pachner moves on facet-gluing triangulations.
//!
//! Each move removes a small set of tetrahedra and glues in a different set
//! with the same boundary. The local pictures, in "pattern" labels:
//!
//! - 1-4 on a tetrahedron `t`: new tetrahedron `T_i` replaces vertex `i` of
//!   `t` by a new centre vertex, keeping the label `i` for the centre. Face
//!   `i` of `T_i` is the old face `i`; face `j` of `T_i` is glued to face `i`
//!   of `T_j` by the transposition `(i j)`.
//! - 4-1 undoes that: a vertex whose star is exactly four distinct
//!   tetrahedra glued as above.
//! - 2-3 on a triangle shared by distinct tetrahedra `A` (apex `d`) and `B`
//!   (apex `e`), the triangle vertices being `u_0, u_1, u_2`: `C_k` spans
//!   `d, e` and the `u_j` with `j ≠ k`, with `d` at label 3, `e` at label
//!   `k` and `u_j` at `j`. Face `k` of `C_k` is face `k` of `A`, face 3 of
//!   `C_k` is face `k` of `B`, and face `j` of `C_k` is glued to face `k` of
//!   `C_j` by `(j k)`.
//! - 3-2 undoes that: an edge of degree 3 surrounded by three distinct
//!   tetrahedra.
//!
//! A [`PachnerMove`] remembers the fingerprint of the triangulation it was
//! found in and is refused against any other value.

use std::fmt;

use thiserror::Error;

use crate::complex::{GluedTriangulation, Gluing, QuotientSkeleton, TET_EDGES};
use crate::perm::Perm4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    OneFour,
    FourOne,
    TwoThree,
    ThreeTwo,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [MoveKind::OneFour, MoveKind::FourOne, MoveKind::TwoThree, MoveKind::ThreeTwo];

    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::OneFour => MoveKind::FourOne,
            MoveKind::FourOne => MoveKind::OneFour,
            MoveKind::TwoThree => MoveKind::ThreeTwo,
            MoveKind::ThreeTwo => MoveKind::TwoThree,
        }
    }

    /// Change in the number of tetrahedra.
    pub fn tet_delta(self) -> i64 {
        fvector_delta(self).n3
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::OneFour => "1-4",
            MoveKind::FourOne => "4-1",
            MoveKind::TwoThree => "2-3",
            MoveKind::ThreeTwo => "3-2",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MoveKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        MoveKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown move kind {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FVectorDelta {
    pub n0: i64,
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
}

impl FVectorDelta {
    pub fn euler_change(&self) -> i64 {
        self.n0 - self.n1 + self.n2 - self.n3
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.n0, self.n1, self.n2, self.n3]
    }
}

pub fn fvector_delta(kind: MoveKind) -> FVectorDelta {
    let d = |n0, n1, n2, n3| FVectorDelta { n0, n1, n2, n3 };
    match kind {
        MoveKind::OneFour => d(1, 4, 6, 3),
        MoveKind::FourOne => d(-1, -4, -6, -3),
        MoveKind::TwoThree => d(0, 1, 2, 1),
        MoveKind::ThreeTwo => d(0, -1, -2, -1),
    }
}

/// A move located in one specific triangulation value.
///
/// `site` is the tetrahedron (1-4) or the triangle, edge or vertex orbit of
/// the skeleton. `anchor` is one tetrahedron incident to the site together
/// with the local face (2-3), edge index (3-2) or vertex (4-1) there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PachnerMove {
    pub kind: MoveKind,
    pub site: u32,
    pub anchor: (u32, u8),
    fingerprint: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("stale move: it was enumerated on a different triangulation")]
    Stale,
    #[error("invalid {kind} move at site {site}")]
    Invalid { kind: MoveKind, site: u32 },
}

/// Enumerates every valid move of the requested kinds, ordered by kind (in
/// the order given) and then by site.
pub fn enumerate_moves(t: &GluedTriangulation, kinds: &[MoveKind]) -> Vec<PachnerMove> {
    let sk = t.skeleton();
    enumerate_moves_with(t, &sk, kinds)
}

pub fn enumerate_moves_with(t: &GluedTriangulation, sk: &QuotientSkeleton, kinds: &[MoveKind]) -> Vec<PachnerMove> {
    let fp = t.fingerprint();
    let mut out = Vec::new();
    for &kind in kinds {
        let mk = |site: u32, anchor: (u32, u8)| PachnerMove { kind, site, anchor, fingerprint: fp };
        match kind {
            MoveKind::OneFour => out.extend((0..t.tet_count() as u32).map(|i| mk(i, (i, 0)))),
            MoveKind::TwoThree => {
                for (id, &(a, f)) in sk.face_rep.iter().enumerate() {
                    if t.gluing(a as usize, f).tet != a {
                        out.push(mk(id as u32, (a, f)));
                    }
                }
            }
            MoveKind::ThreeTwo => {
                for (id, &(a, e)) in sk.edge_rep.iter().enumerate() {
                    if sk.edge_degree[id] == 3 && sk.edge_valid[id] && three_two_roles(t, a as usize, e).is_some() {
                        out.push(mk(id as u32, (a, e)));
                    }
                }
            }
            MoveKind::FourOne => {
                for v in 0..sk.n0() {
                    if sk.vertex_corners[v] != 4 {
                        continue;
                    }
                    let (a, x) = vertex_rep(sk, v);
                    if four_one_roles(t, a, x).is_some() {
                        out.push(mk(v as u32, (a as u32, x)));
                    }
                }
            }
        }
    }
    out
}

/// Number of valid moves of the given kinds.
pub fn count_moves(t: &GluedTriangulation, kinds: &[MoveKind]) -> usize {
    enumerate_moves(t, kinds).len()
}

fn vertex_rep(sk: &QuotientSkeleton, v: usize) -> (usize, u8) {
    for (t, row) in sk.vertex_of.iter().enumerate() {
        if let Some(i) = row.iter().position(|&x| x as usize == v) {
            return (t, i as u8);
        }
    }
    unreachable!("vertex orbit without corners")
}

/// Applies `m`, returning the new triangulation.
pub fn apply_move(t: &GluedTriangulation, m: &PachnerMove) -> Result<GluedTriangulation, MoveError> {
    apply_move_with_inverse(t, m).map(|(out, _)| out)
}

/// Applies `m` and also returns the move that undoes it in the result.
pub fn apply_move_with_inverse(
    t: &GluedTriangulation,
    m: &PachnerMove,
) -> Result<(GluedTriangulation, PachnerMove), MoveError> {
    if m.fingerprint != t.fingerprint() {
        return Err(MoveError::Stale);
    }
    let invalid = MoveError::Invalid { kind: m.kind, site: m.site };
    let (a, x) = (m.anchor.0 as usize, m.anchor.1);
    if a >= t.tet_count() {
        return Err(invalid);
    }
    let (out, inv_anchor) = match m.kind {
        MoveKind::OneFour => one_four(t, a),
        MoveKind::FourOne => four_one(t, a, x).ok_or(invalid)?,
        MoveKind::TwoThree => two_three(t, a, x).ok_or(invalid)?,
        MoveKind::ThreeTwo => three_two(t, a, x).ok_or(invalid)?,
    };
    let sk = out.skeleton();
    let site = match m.kind.inverse() {
        MoveKind::OneFour => inv_anchor.0,
        MoveKind::FourOne => sk.vertex_of[inv_anchor.0 as usize][inv_anchor.1 as usize],
        MoveKind::TwoThree => sk.face_of[inv_anchor.0 as usize][inv_anchor.1 as usize],
        MoveKind::ThreeTwo => sk.edge_of[inv_anchor.0 as usize][inv_anchor.1 as usize],
    };
    let inverse = PachnerMove { kind: m.kind.inverse(), site, anchor: inv_anchor, fingerprint: out.fingerprint() };
    Ok((out, inverse))
}

/// New face `(tet, face)` that takes over old face `(old_tet, old_face)`;
/// `lambda` maps new vertex labels to old ones.
struct Boundary {
    new: (usize, u8),
    old: (usize, u8),
    lambda: Perm4,
}

/// Removes `removed` (any order), appends `count` new tetrahedra glued
/// internally by `internal` and to the rest through `boundary`. Kept
/// tetrahedra keep their relative order.
fn replace(
    t: &GluedTriangulation,
    removed: &[usize],
    count: usize,
    internal: &[((usize, u8), (usize, u8), Perm4)],
    boundary: &[Boundary],
) -> GluedTriangulation {
    let k = t.tet_count();
    let mut new_index = vec![usize::MAX; k];
    let mut next = 0;
    for (old, slot) in new_index.iter_mut().enumerate() {
        if !removed.contains(&old) {
            *slot = next;
            next += 1;
        }
    }
    let base = next;
    let total = base + count;
    let placeholder = Gluing::new(0, 0, Perm4::IDENTITY);
    let mut g = vec![[placeholder; 4]; total];
    for old in 0..k {
        if new_index[old] != usize::MAX {
            g[new_index[old]] = t.gluings()[old];
            for f in 0..4 {
                let dst = &mut g[new_index[old]][f];
                if new_index[dst.tet as usize] != usize::MAX {
                    dst.tet = new_index[dst.tet as usize] as u32;
                }
            }
        }
    }
    for &((a, fa), (b, fb), p) in internal {
        g[base + a][fa as usize] = Gluing::new((base + b) as u32, fb, p);
        g[base + b][fb as usize] = Gluing::new((base + a) as u32, fa, p.inverse());
    }
    for bd in boundary {
        let (nt, nf) = bd.new;
        let old = t.gluing(bd.old.0, bd.old.1);
        let kept = new_index[old.tet as usize];
        if kept != usize::MAX {
            let p = old.perm.compose(bd.lambda);
            g[base + nt][nf as usize] = Gluing::new(kept as u32, old.face, p);
            g[kept][old.face as usize] = Gluing::new((base + nt) as u32, nf, p.inverse());
        } else {
            let other = boundary
                .iter()
                .find(|b| b.old == (old.tet as usize, old.face))
                .expect("boundary faces of the removed region pair up");
            let p = other.lambda.inverse().compose(old.perm).compose(bd.lambda);
            g[base + nt][nf as usize] = Gluing::new((base + other.new.0) as u32, other.new.1, p);
        }
    }
    GluedTriangulation::from_gluings_unchecked(g)
}

fn one_four(t: &GluedTriangulation, a: usize) -> (GluedTriangulation, (u32, u8)) {
    let mut internal = Vec::new();
    for i in 0..4u8 {
        for j in i + 1..4u8 {
            internal.push(((i as usize, j), (j as usize, i), Perm4::transposition(i, j)));
        }
    }
    let boundary: Vec<Boundary> =
        (0..4u8).map(|i| Boundary { new: (i as usize, i), old: (a, i), lambda: Perm4::IDENTITY }).collect();
    let out = replace(t, &[a], 4, &internal, &boundary);
    // The centre is label 0 of the first new tetrahedron.
    let first = (t.tet_count() - 1) as u32;
    (out, (first, 0))
}

/// Role maps `φ_i` (pattern label → actual label) of the four tetrahedra in
/// the star of the vertex at corner `(a, x)`, if it is a 1-4 star.
fn four_one_roles(t: &GluedTriangulation, a: usize, x: u8) -> Option<[(usize, Perm4); 4]> {
    let mut others = (0..4u8).filter(|&v| v != x);
    let (o1, o2, o3) = (others.next()?, others.next()?, others.next()?);
    let phi0 = Perm4::from_images([x, o1, o2, o3])?;
    let mut roles = [(a, phi0); 4];
    for j in 1..4u8 {
        let g = t.gluing(a, phi0.apply(j));
        roles[j as usize] = (g.tet as usize, g.perm.compose(phi0).compose(Perm4::transposition(0, j)));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if roles[i].0 == roles[j].0 {
                return None;
            }
        }
    }
    for j in 1..4u8 {
        for k in j + 1..4u8 {
            let (tj, pj) = roles[j as usize];
            let (tk, pk) = roles[k as usize];
            let g = t.gluing(tj, pj.apply(k));
            let want = pk.compose(Perm4::transposition(j, k)).compose(pj.inverse());
            if g.tet as usize != tk || g.face != pk.apply(j) || g.perm != want {
                return None;
            }
        }
    }
    Some(roles)
}

fn four_one(t: &GluedTriangulation, a: usize, x: u8) -> Option<(GluedTriangulation, (u32, u8))> {
    let roles = four_one_roles(t, a, x)?;
    let removed: Vec<usize> = roles.iter().map(|r| r.0).collect();
    let boundary: Vec<Boundary> = (0..4u8)
        .map(|i| {
            let (ti, phi) = roles[i as usize];
            Boundary { new: (0, i), old: (ti, phi.apply(i)), lambda: phi }
        })
        .collect();
    let out = replace(t, &removed, 1, &[], &boundary);
    let u = (out.tet_count() - 1) as u32;
    Some((out, (u, 0)))
}

fn two_three(t: &GluedTriangulation, a: usize, fa: u8) -> Option<(GluedTriangulation, (u32, u8))> {
    let g = t.gluing(a, fa);
    let b = g.tet as usize;
    if b == a {
        return None;
    }
    let mut others = (0..4u8).filter(|&v| v != fa);
    let (o0, o1, o2) = (others.next()?, others.next()?, others.next()?);
    let phi_a = Perm4::from_images([o0, o1, o2, fa])?;
    let phi_b = g.perm.compose(phi_a);
    let mut internal = Vec::new();
    for k in 0..3u8 {
        for j in k + 1..3u8 {
            internal.push(((k as usize, j), (j as usize, k), Perm4::transposition(j, k)));
        }
    }
    let mut boundary = Vec::new();
    for k in 0..3u8 {
        boundary.push(Boundary { new: (k as usize, k), old: (a, phi_a.apply(k)), lambda: phi_a });
        boundary.push(Boundary {
            new: (k as usize, 3),
            old: (b, phi_b.apply(k)),
            lambda: phi_b.compose(Perm4::transposition(k, 3)),
        });
    }
    let out = replace(t, &[a, b], 3, &internal, &boundary);
    // The new edge joins labels 3 and 0 of C_0.
    let c0 = (out.tet_count() - 3) as u32;
    Some((out, (c0, crate::complex::edge_index(0, 3) as u8)))
}

/// Role maps of `C_0, C_1, C_2` around the edge `e` of tetrahedron `a`.
fn three_two_roles(t: &GluedTriangulation, a: usize, e: u8) -> Option<[(usize, Perm4); 3]> {
    let (x0, y0) = TET_EDGES[e as usize];
    let mut others = (0..4u8).filter(|&v| v != x0 && v != y0);
    let (o1, o2) = (others.next()?, others.next()?);
    // Pattern: d at 3, e at 0, u_1 at 1, u_2 at 2.
    let phi0 = Perm4::from_images([y0, o1, o2, x0])?;
    let g1 = t.gluing(a, phi0.apply(1));
    let phi1 = g1.perm.compose(phi0).compose(Perm4::transposition(0, 1));
    let c1 = g1.tet as usize;
    let g2 = t.gluing(c1, phi1.apply(2));
    let phi2 = g2.perm.compose(phi1).compose(Perm4::transposition(1, 2));
    let c2 = g2.tet as usize;
    if a == c1 || a == c2 || c1 == c2 {
        return None;
    }
    if g1.face != phi1.apply(0) || g2.face != phi2.apply(1) {
        return None;
    }
    let close = t.gluing(c2, phi2.apply(0));
    let want = phi0.compose(Perm4::transposition(0, 2)).compose(phi2.inverse());
    if close.tet as usize != a || close.face != phi0.apply(2) || close.perm != want {
        return None;
    }
    Some([(a, phi0), (c1, phi1), (c2, phi2)])
}

fn three_two(t: &GluedTriangulation, a: usize, e: u8) -> Option<(GluedTriangulation, (u32, u8))> {
    if e >= 6 {
        return None;
    }
    let roles = three_two_roles(t, a, e)?;
    let removed: Vec<usize> = roles.iter().map(|r| r.0).collect();
    let mut boundary = Vec::new();
    for k in 0..3u8 {
        let (ck, phi) = roles[k as usize];
        boundary.push(Boundary { new: (0, k), old: (ck, phi.apply(k)), lambda: phi });
        boundary.push(Boundary {
            new: (1, k),
            old: (ck, phi.apply(3)),
            lambda: phi.compose(Perm4::transposition(k, 3)),
        });
    }
    let internal = [((0, 3), (1, 3), Perm4::IDENTITY)];
    let out = replace(t, &removed, 2, &internal, &boundary);
    let new_a = (out.tet_count() - 2) as u32;
    Some((out, (new_a, 3)))
}
