use std::fmt;

use super::{edge_index, face_vertices, GluedTriangulation, TET_EDGES};
use crate::unionfind::ParityUnionFind;

/// Vertex, edge and triangle orbits of a gluing, with edge degrees.
///
/// Edge orbits carry an orientation: `edge_sign[t][e]` is +1 when the
/// tetrahedron edge `TET_EDGES[e]` (low label to high label) runs the same
/// way as the orbit's representative, -1 otherwise.
#[derive(Clone, Debug)]
pub struct QuotientSkeleton {
    pub vertex_of: Vec<[u32; 4]>,
    pub edge_of: Vec<[u32; 6]>,
    pub edge_sign: Vec<[i8; 6]>,
    pub face_of: Vec<[u32; 4]>,
    /// Number of tetrahedron-edge incidences per edge orbit.
    pub edge_degree: Vec<u32>,
    /// False when the orbit contains an edge identified with itself reversed.
    pub edge_valid: Vec<bool>,
    /// Endpoint vertex orbits (tail, head) of each edge orbit's representative.
    pub edge_ends: Vec<(u32, u32)>,
    /// Representative `(tet, local edge)` of each edge orbit.
    pub edge_rep: Vec<(u32, u8)>,
    /// Representative `(tet, face)` of each triangle orbit (the smaller side).
    pub face_rep: Vec<(u32, u8)>,
    /// Number of tetrahedron corners in each vertex orbit.
    pub vertex_corners: Vec<u32>,
}

impl QuotientSkeleton {
    pub fn n0(&self) -> usize {
        self.vertex_corners.len()
    }
    pub fn n1(&self) -> usize {
        self.edge_degree.len()
    }
    pub fn n2(&self) -> usize {
        self.face_rep.len()
    }
    pub fn n3(&self) -> usize {
        self.vertex_of.len()
    }

    /// `(N0, N1, N2, N3)`.
    pub fn f_vector(&self) -> [usize; 4] {
        [self.n0(), self.n1(), self.n2(), self.n3()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n0() as i64 - self.n1() as i64 + self.n2() as i64 - self.n3() as i64
    }
}

impl GluedTriangulation {
    /// Computes vertex, edge and triangle orbits by union-find over the
    /// identifications induced by face gluings.
    pub fn skeleton(&self) -> QuotientSkeleton {
        let k = self.tet_count();
        let mut verts = ParityUnionFind::new(4 * k);
        let mut edges = ParityUnionFind::new(6 * k);
        let mut face_of = vec![[u32::MAX; 4]; k];
        let mut face_rep = Vec::with_capacity(2 * k);

        for t in 0..k {
            for f in 0..4u8 {
                let g = self.gluing(t, f);
                let (u, h) = (g.tet as usize, g.face);
                if (u, h) < (t, f) {
                    continue;
                }
                let id = face_rep.len() as u32;
                face_rep.push((t as u32, f));
                face_of[t][f as usize] = id;
                face_of[u][h as usize] = id;
                let fv = face_vertices(f);
                for &v in &fv {
                    verts.union(4 * t + v as usize, 4 * u + g.perm.apply(v) as usize, 0);
                }
                for (i, &a) in fv.iter().enumerate() {
                    for &b in &fv[i + 1..] {
                        let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                        edges.union(
                            6 * t + edge_index(a, b),
                            6 * u + edge_index(pa, pb),
                            (pa > pb) as u8,
                        );
                    }
                }
            }
        }

        let (vids, n0) = verts.classes();
        let mut vertex_of = vec![[0u32; 4]; k];
        let mut vertex_corners = vec![0u32; n0];
        for t in 0..k {
            for v in 0..4 {
                let id = vids[4 * t + v];
                vertex_of[t][v] = id;
                vertex_corners[id as usize] += 1;
            }
        }

        let (eids, n1) = edges.classes();
        let mut edge_of = vec![[0u32; 6]; k];
        let mut edge_sign = vec![[1i8; 6]; k];
        let mut edge_degree = vec![0u32; n1];
        let mut edge_valid = vec![true; n1];
        let mut edge_rep = vec![(u32::MAX, 0u8); n1];
        let mut rep_parity = vec![0u8; n1];
        let mut edge_ends = vec![(0u32, 0u32); n1];
        for t in 0..k {
            for e in 0..6 {
                let x = 6 * t + e;
                let id = eids[x] as usize;
                let (_, par) = edges.find(x);
                if edge_rep[id].0 == u32::MAX {
                    edge_rep[id] = (t as u32, e as u8);
                    rep_parity[id] = par;
                    let (a, b) = TET_EDGES[e];
                    edge_ends[id] = (vertex_of[t][a as usize], vertex_of[t][b as usize]);
                    edge_valid[id] = !edges.is_conflicted(x);
                }
                edge_of[t][e] = id as u32;
                edge_sign[t][e] = if par == rep_parity[id] { 1 } else { -1 };
                edge_degree[id] += 1;
            }
        }

        QuotientSkeleton {
            vertex_of,
            edge_of,
            edge_sign,
            face_of,
            edge_degree,
            edge_valid,
            edge_ends,
            edge_rep,
            face_rep,
            vertex_corners,
        }
    }

    /// Mean bone-degree `6·N3 / N1` as an exact (unreduced) ratio.
    pub fn mean_bone_degree(&self) -> RationalMu {
        let sk = self.skeleton();
        RationalMu::new(6 * sk.n3() as u64, sk.n1() as u64)
    }
}

/// Exact mean bone-degree `6K / N1`, kept unreduced so that `K` and `N1`
/// remain readable from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalMu {
    numerator: u64,
    denominator: u64,
}

impl RationalMu {
    /// # Panics
    /// If `denominator` is zero.
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "mean bone-degree with zero edges");
        RationalMu { numerator, denominator }
    }

    /// The value for a triangulation with `k` tetrahedra and `n1` edges.
    pub fn from_counts(k: u64, n1: u64) -> Self {
        RationalMu::new(6 * k, n1)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `K`, valid when the numerator is a multiple of six.
    pub fn tets(&self) -> u64 {
        self.numerator / 6
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Exact comparison of two ratios.
    pub fn cmp_exact(&self, other: &RationalMu) -> std::cmp::Ordering {
        (self.numerator as u128 * other.denominator as u128)
            .cmp(&(other.numerator as u128 * self.denominator as u128))
    }

    /// The ratio in lowest terms.
    pub fn reduced(&self) -> (u64, u64) {
        let (mut a, mut b) = (self.numerator, self.denominator);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        (self.numerator / a, self.denominator / a)
    }

    /// Value rounded half-up to three decimals, computed exactly.
    pub fn display3(&self) -> String {
        let scaled = (self.numerator as u128 * 2000 + self.denominator as u128)
            / (2 * self.denominator as u128);
        format!("{}.{:03}", scaled / 1000, scaled % 1000)
    }
}

impl fmt::Display for RationalMu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_of_4_simplex_counts() {
        let b = GluedTriangulation::boundary_4_simplex();
        let sk = b.skeleton();
        assert_eq!(sk.f_vector(), [5, 10, 10, 5]);
        assert!(sk.edge_degree.iter().all(|&d| d == 3));
        assert!(sk.edge_valid.iter().all(|&v| v));
        assert_eq!(sk.euler_characteristic(), 0);
        assert_eq!(b.mean_bone_degree(), RationalMu::new(30, 10));
        assert_eq!(b.mean_bone_degree().value(), 3.0);
    }

    #[test]
    fn doubled_tetrahedron_counts() {
        let sk = GluedTriangulation::doubled_tetrahedron().skeleton();
        assert_eq!(sk.f_vector(), [4, 6, 4, 2]);
        assert!(sk.edge_degree.iter().all(|&d| d == 2));
        assert_eq!(sk.vertex_corners, vec![2, 2, 2, 2]);
    }

    #[test]
    fn display_rounding() {
        assert_eq!(RationalMu::from_counts(6, 7).display3(), "5.143");
        assert_eq!(RationalMu::from_counts(6, 8).display3(), "4.500");
        assert_eq!(RationalMu::from_counts(7, 9).display3(), "4.667");
        assert_eq!(RationalMu::from_counts(9, 13).display3(), "4.154");
        assert_eq!(RationalMu::from_counts(5, 8).display3(), "3.750");
        assert_eq!(RationalMu::from_counts(6, 7).to_string(), "36/7");
        assert_eq!(RationalMu::from_counts(9, 10).reduced(), (27, 5));
    }

    #[test]
    fn exact_ordering() {
        use std::cmp::Ordering;
        assert_eq!(RationalMu::new(36, 8).cmp_exact(&RationalMu::new(9, 2)), Ordering::Equal);
        assert_eq!(RationalMu::new(36, 7).cmp_exact(&RationalMu::new(54, 10)), Ordering::Less);
    }
}
