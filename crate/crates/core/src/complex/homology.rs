use std::fmt;

use super::{face_vertices, edge_index, GluedTriangulation, QuotientSkeleton, TET_EDGES};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: i64) {
        for c in 0..self.cols {
            let v = self.get(src, c);
            if v != 0 {
                let x = self.get(dst, c).checked_sub(q.checked_mul(v).expect("overflow")).expect("overflow");
                self.set(dst, c, x);
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: i64) {
        for r in 0..self.rows {
            let v = self.get(r, src);
            if v != 0 {
                let x = self.get(r, dst).checked_sub(q.checked_mul(v).expect("overflow")).expect("overflow");
                self.set(r, dst, x);
            }
        }
    }
}

/// Nonzero invariant factors `d1 | d2 | ...` of an integer matrix, all
/// positive. Their count is the rank.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<i64> {
    let mut a = m.clone();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < a.rows.min(a.cols) {
        // Smallest nonzero pivot in the remaining block.
        let mut pivot = None;
        for r in t..a.rows {
            for c in t..a.cols {
                let v = a.get(r, c).abs();
                if v != 0 && pivot.map_or(true, |(_, _, pv)| v < pv) {
                    pivot = Some((r, c, v));
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);
        loop {
            let p = a.get(t, t);
            let mut moved = false;
            for r in t + 1..a.rows {
                let v = a.get(r, t);
                if v != 0 {
                    a.row_axpy(r, t, v.div_euclid(p));
                    if a.get(r, t) != 0 {
                        moved = true;
                    }
                }
            }
            for c in t + 1..a.cols {
                let v = a.get(t, c);
                if v != 0 {
                    a.col_axpy(c, t, v.div_euclid(p));
                    if a.get(t, c) != 0 {
                        moved = true;
                    }
                }
            }
            if moved {
                // A smaller remainder appeared in row/column t; make it the pivot.
                let mut best = (t, t, a.get(t, t).abs());
                for r in t + 1..a.rows {
                    let v = a.get(r, t).abs();
                    if v != 0 && v < best.2 {
                        best = (r, t, v);
                    }
                }
                for c in t + 1..a.cols {
                    let v = a.get(t, c).abs();
                    if v != 0 && v < best.2 {
                        best = (t, c, v);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let mut fix = None;
            'scan: for r in t + 1..a.rows {
                for c in t + 1..a.cols {
                    if a.get(r, c) % p != 0 {
                        fix = Some(r);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(r) => a.row_axpy(t, r, -1),
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
        t += 1;
    }
    diag
}

/// First homology group: free rank plus invariant factors `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyProfile {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyProfile {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

impl QuotientSkeleton {
    /// Vertex-by-edge boundary matrix of the orbit cell complex.
    pub fn boundary_1(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n0(), self.n1());
        for (e, &(tail, head)) in self.edge_ends.iter().enumerate() {
            m.add(head as usize, e, 1);
            m.add(tail as usize, e, -1);
        }
        m
    }

    /// Edge-by-triangle boundary matrix of the orbit cell complex.
    pub fn boundary_2(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n1(), self.n2());
        for (id, &(t, f)) in self.face_rep.iter().enumerate() {
            let t = t as usize;
            let [u0, u1, u2] = face_vertices(f);
            for (a, b, s) in [(u0, u1, 1i64), (u1, u2, 1), (u0, u2, -1)] {
                let e = edge_index(a, b);
                debug_assert_eq!(TET_EDGES[e], (a, b));
                m.add(self.edge_of[t][e] as usize, id, s * self.edge_sign[t][e] as i64);
            }
        }
        m
    }
}

impl GluedTriangulation {
    /// `H1` from the Smith normal forms of the orbit-complex boundary maps.
    pub fn homology_h1(&self) -> HomologyProfile {
        self.homology_h1_with(&self.skeleton())
    }

    pub fn homology_h1_with(&self, sk: &QuotientSkeleton) -> HomologyProfile {
        let rank1 = smith_normal_form(&sk.boundary_1()).len();
        let d2 = smith_normal_form(&sk.boundary_2());
        let rank = sk.n1() - rank1 - d2.len();
        let torsion = d2.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect();
        HomologyProfile { rank, torsion }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
        IntMatrix { rows, cols, data: data.to_vec() }
    }

    #[test]
    fn small_snf_cases() {
        assert_eq!(smith_normal_form(&mat(2, 2, &[2, 0, 0, 3])), vec![1, 6]);
        assert_eq!(smith_normal_form(&mat(2, 2, &[2, 4, 6, 8])), vec![2, 4]);
        assert_eq!(smith_normal_form(&mat(1, 3, &[0, 0, 0])), Vec::<i64>::new());
        assert_eq!(smith_normal_form(&mat(3, 1, &[4, 6, 10])), vec![2]);
        assert_eq!(smith_normal_form(&mat(2, 3, &[1, 2, 3, 4, 5, 6])), vec![1, 3]);
    }

    #[test]
    fn sphere_examples_have_trivial_h1() {
        for t in [GluedTriangulation::boundary_4_simplex(), GluedTriangulation::doubled_tetrahedron()] {
            let sk = t.skeleton();
            let prod = sk.boundary_1().mul(&sk.boundary_2());
            assert!(prod.data.iter().all(|&x| x == 0));
            assert!(t.homology_h1().is_trivial());
        }
    }

    #[test]
    fn display() {
        assert_eq!(HomologyProfile { rank: 0, torsion: vec![] }.to_string(), "0");
        assert_eq!(HomologyProfile { rank: 1, torsion: vec![2] }.to_string(), "Z + Z/2");
    }
}
