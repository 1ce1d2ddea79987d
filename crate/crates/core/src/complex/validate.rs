use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{face_vertices, GluedTriangulation, QuotientSkeleton};
use crate::unionfind::ParityUnionFind;

/// Summary of the link of one vertex orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkSummary {
    pub vertex: u32,
    /// Link triangles (tetrahedron corners in the orbit).
    pub triangles: u32,
    pub edges: u32,
    pub vertices: u32,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub closed: bool,
}

impl LinkSummary {
    pub fn is_sphere(&self) -> bool {
        self.connected && self.closed && self.euler_characteristic == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ValidManifold,
    Invalid(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub links: Vec<LinkSummary>,
    /// Edge orbits identified with themselves in reverse.
    pub invalid_edges: Vec<u32>,
    pub orientable: bool,
    pub verdict: Verdict,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::ValidManifold
    }
}

/// First obstruction to being a simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicialWitness {
    RepeatedVertex { tet: u32 },
    SharedVertexSet { tets: (u32, u32) },
    SharedEdgeEndpoints { edges: (u32, u32) },
    SharedTriangleVertices { triangles: (u32, u32) },
}

impl fmt::Display for SimplicialWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplicialWitness::RepeatedVertex { tet } => {
                write!(f, "tetrahedron with repeated vertex orbit (tet {tet})")
            }
            SimplicialWitness::SharedVertexSet { tets } => {
                write!(f, "two tetrahedra share all vertices (tets {} and {})", tets.0, tets.1)
            }
            SimplicialWitness::SharedEdgeEndpoints { edges } => {
                write!(f, "two edges share both endpoints (edges {} and {})", edges.0, edges.1)
            }
            SimplicialWitness::SharedTriangleVertices { triangles } => write!(
                f,
                "two triangles share all vertices (triangles {} and {})",
                triangles.0, triangles.1
            ),
        }
    }
}

impl GluedTriangulation {
    /// Checks the closed-3-manifold criterion: every vertex link is a
    /// 2-sphere and no edge is identified with itself in reverse.
    pub fn validate_manifold(&self) -> ValidationReport {
        let sk = self.skeleton();
        self.validate_with(&sk)
    }

    pub fn validate_with(&self, sk: &QuotientSkeleton) -> ValidationReport {
        let k = self.tet_count();
        // Edge ends: (t, i, j) is the end at local vertex i of edge {i, j}.
        let mut ends = ParityUnionFind::new(16 * k);
        for t in 0..k {
            for f in 0..4u8 {
                let g = self.gluing(t, f);
                if (g.tet as usize, g.face) < (t, f) {
                    continue;
                }
                let u = g.tet as usize;
                let fv = face_vertices(f);
                for &i in &fv {
                    for &j in &fv {
                        if i != j {
                            let (pi, pj) = (g.perm.apply(i), g.perm.apply(j));
                            ends.union(16 * t + 4 * i as usize + j as usize, 16 * u + 4 * pi as usize + pj as usize, 0);
                        }
                    }
                }
            }
        }
        let n0 = sk.n0();
        let mut end_roots: Vec<Vec<usize>> = vec![Vec::new(); n0];
        for t in 0..k {
            for i in 0..4u8 {
                let v = sk.vertex_of[t][i as usize] as usize;
                for j in 0..4u8 {
                    if i != j {
                        let (r, _) = ends.find(16 * t + 4 * i as usize + j as usize);
                        end_roots[v].push(r);
                    }
                }
            }
        }
        let links: Vec<LinkSummary> = end_roots
            .into_iter()
            .enumerate()
            .map(|(v, mut roots)| {
                roots.sort_unstable();
                roots.dedup();
                let triangles = sk.vertex_corners[v];
                let edges = 3 * triangles / 2;
                let vertices = roots.len() as u32;
                LinkSummary {
                    vertex: v as u32,
                    triangles,
                    edges,
                    vertices,
                    euler_characteristic: vertices as i64 - edges as i64 + triangles as i64,
                    // A vertex orbit is by construction one class of corners
                    // joined across glued faces, and every face is glued.
                    connected: true,
                    closed: true,
                }
            })
            .collect();

        let invalid_edges: Vec<u32> = (0..sk.n1() as u32).filter(|&e| !sk.edge_valid[e as usize]).collect();
        let mut reasons = Vec::new();
        for l in &links {
            if !l.is_sphere() {
                reasons.push(format!(
                    "vertex link not a sphere (vertex {}, euler characteristic {})",
                    l.vertex, l.euler_characteristic
                ));
            }
        }
        for &e in &invalid_edges {
            reasons.push(format!("edge identified with itself in reverse (edge {e})"));
        }
        ValidationReport {
            links,
            invalid_edges,
            orientable: self.is_orientable(),
            verdict: if reasons.is_empty() { Verdict::ValidManifold } else { Verdict::Invalid(reasons) },
        }
    }

    /// Orientation signs can be chosen so that every gluing reverses the
    /// induced orientation of the shared face.
    pub fn is_orientable(&self) -> bool {
        let k = self.tet_count();
        let mut sign = vec![0i8; k];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for g in &self.gluings[t] {
                let want = -g.perm.sign() * sign[t];
                let u = g.tet as usize;
                if sign[u] == 0 {
                    sign[u] = want;
                    queue.push_back(u);
                } else if sign[u] != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial_witness().is_none()
    }

    /// `None` when the triangulation is a simplicial complex; otherwise the
    /// first violation found.
    pub fn simplicial_witness(&self) -> Option<SimplicialWitness> {
        let sk = self.skeleton();
        let k = self.tet_count();
        let mut tet_sets: HashMap<[u32; 4], u32> = HashMap::new();
        for t in 0..k {
            let mut vs = sk.vertex_of[t];
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) {
                return Some(SimplicialWitness::RepeatedVertex { tet: t as u32 });
            }
            if let Some(&other) = tet_sets.get(&vs) {
                return Some(SimplicialWitness::SharedVertexSet { tets: (other, t as u32) });
            }
            tet_sets.insert(vs, t as u32);
        }
        let mut edge_sets: HashMap<(u32, u32), u32> = HashMap::new();
        for (e, &(a, b)) in sk.edge_ends.iter().enumerate() {
            let key = (a.min(b), a.max(b));
            if let Some(&other) = edge_sets.get(&key) {
                return Some(SimplicialWitness::SharedEdgeEndpoints { edges: (other, e as u32) });
            }
            edge_sets.insert(key, e as u32);
        }
        let mut tri_sets: HashMap<[u32; 3], u32> = HashMap::new();
        for (id, &(t, f)) in sk.face_rep.iter().enumerate() {
            let mut vs = face_vertices(f).map(|v| sk.vertex_of[t as usize][v as usize]);
            vs.sort_unstable();
            if let Some(&other) = tri_sets.get(&vs) {
                return Some(SimplicialWitness::SharedTriangleVertices { triangles: (other, id as u32) });
            }
            tri_sets.insert(vs, id as u32);
        }
        None
    }
}
