//! Orderly generation of closed triangulations.
//!
//! Candidates are built directly in canonical labelling: faces are decided
//! in `(tet, face)` order, and an undecided face is glued either to a
//! later undecided face of an already discovered tetrahedron or to a face of
//! the next undiscovered one (by the identity, on the same face index). The
//! code sequence of such a table is its own traversal from root `(0, id)`.
//! After every choice the partial table is traversed from every other root
//! up to the first undecided face; if some root already gives a smaller
//! prefix the branch is dropped. Leaves where no root is smaller are
//! canonical representatives, one per isomorphism class.

use std::thread;

use crate::complex::{edge_index, face_vertices, GluedTriangulation, Gluing, IsoSignature};
use crate::perm::Perm4;

/// One canonical triangulation with its automorphism count.
#[derive(Clone, Debug)]
pub struct Enumerated {
    pub triangulation: GluedTriangulation,
    pub signature: IsoSignature,
    pub automorphisms: usize,
}

/// Parity union-find without path compression, so unions can be undone.
struct UndoUf {
    parent: Vec<u32>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    /// (child root, old rank of the surviving root, whether rank grew)
    log: Vec<(u32, u32, bool)>,
}

impl UndoUf {
    fn new(n: usize) -> Self {
        UndoUf { parent: (0..n as u32).collect(), parity: vec![0; n], rank: vec![0; n], log: Vec::new() }
    }

    fn find(&self, mut x: usize) -> (usize, u8) {
        let mut p = 0;
        while self.parent[x] as usize != x {
            p ^= self.parity[x];
            x = self.parent[x] as usize;
        }
        (x, p)
    }

    /// `false` on a parity contradiction (nothing is recorded then).
    fn union(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[lo] = hi as u32;
        self.parity[lo] = pa ^ pb ^ rel;
        let grew = self.rank[hi] == self.rank[lo];
        if grew {
            self.rank[hi] += 1;
        }
        self.log.push((lo as u32, hi as u32, grew));
        true
    }

    fn checkpoint(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, to: usize) {
        while self.log.len() > to {
            let (lo, hi, grew) = self.log.pop().unwrap();
            self.parent[lo as usize] = lo;
            self.parity[lo as usize] = 0;
            if grew {
                self.rank[hi as usize] -= 1;
            }
        }
    }
}

const NONE: u16 = u16::MAX;

struct Search {
    k: usize,
    /// Code `96·tet + 24·face + perm` per face, or `NONE`.
    table: Vec<u16>,
    count: usize,
    edges: UndoUf,
    old_of_new: Vec<u32>,
    new_of_old: Vec<u32>,
    map: Vec<Perm4>,
    scratch: LinkScratch,
}

/// Buffers for recomputing partial vertex links.
struct LinkScratch {
    corner: Vec<u32>,
    end: Vec<u32>,
    bnd: Vec<u32>,
    glued: Vec<i32>,
    chi_b: Vec<i32>,
}

fn uf_find(p: &mut [u32], mut x: usize) -> usize {
    while p[x] as usize != x {
        p[x] = p[p[x] as usize];
        x = p[x] as usize;
    }
    x
}

fn uf_union(p: &mut [u32], a: usize, b: usize) -> bool {
    let (ra, rb) = (uf_find(p, a), uf_find(p, b));
    if ra == rb {
        return false;
    }
    p[ra.max(rb)] = ra.min(rb) as u32;
    true
}

#[inline]
fn decode(c: u16) -> (usize, u8, Perm4) {
    let c = c as usize;
    (c / 96, ((c % 96) / 24) as u8, Perm4::from_index((c % 24) as u8).unwrap())
}

#[inline]
fn encode(t: usize, f: u8, p: Perm4) -> u16 {
    (t * 96 + f as usize * 24 + p.index() as usize) as u16
}

enum Prefix {
    /// Some root gives a strictly smaller sequence.
    Smaller,
    /// No root is smaller; `ties` roots agree on everything compared.
    NotSmaller { ties: usize },
}

impl Search {
    fn new(k: usize) -> Self {
        Search {
            k,
            table: vec![NONE; 4 * k],
            count: 1,
            edges: UndoUf::new(6 * k),
            old_of_new: vec![0; k],
            new_of_old: vec![u32::MAX; k],
            map: vec![Perm4::IDENTITY; k],
            scratch: LinkScratch {
                corner: vec![0; 4 * k],
                end: vec![0; 16 * k],
                bnd: vec![0; 16 * k],
                glued: vec![0; 4 * k],
                chi_b: vec![0; 4 * k],
            },
        }
    }

    /// Whether every partial vertex link can still close up to a sphere.
    ///
    /// The link of a vertex is built from one triangle per tetrahedron
    /// corner `(t, v)`; its edges `(t, v, f)` are glued when face `f` is, and
    /// its vertices are edge ends `(t, v, w)`. Each component is a surface
    /// with boundary, which must be planar: `χ + b = 2` with `b` boundary
    /// cycles. Further gluing never lowers the genus.
    fn links_ok(&mut self) -> bool {
        let k = self.k;
        let sc = &mut self.scratch;
        for (i, x) in sc.corner.iter_mut().enumerate() {
            *x = i as u32;
        }
        for (i, x) in sc.end.iter_mut().enumerate() {
            *x = i as u32;
        }
        for t in 0..k {
            for f in 0..4u8 {
                let c = self.table[4 * t + f as usize];
                if c == NONE {
                    continue;
                }
                let (u, g, p) = decode(c);
                if (u, g) < (t, f) {
                    continue;
                }
                for v in face_vertices(f) {
                    let pv = p.apply(v);
                    uf_union(&mut sc.corner, 4 * t + v as usize, 4 * u + pv as usize);
                    for w in face_vertices(f) {
                        if w != v {
                            uf_union(&mut sc.end, 16 * t + 4 * v as usize + w as usize, 16 * u + 4 * pv as usize + p.apply(w) as usize);
                        }
                    }
                }
            }
        }
        // Per component: chi_b = F + V − E_boundary + b, where the boundary
        // graph is 2-regular so b = E_boundary − (merging unions). Glued link
        // edges are tallied in `glued` from both sides and subtracted at the end.
        sc.chi_b.iter_mut().for_each(|x| *x = 0);
        sc.glued.iter_mut().for_each(|x| *x = 0);
        for (i, x) in sc.bnd.iter_mut().enumerate() {
            *x = i as u32;
        }
        for t in 0..k {
            for v in 0..4u8 {
                let comp = uf_find(&mut sc.corner, 4 * t + v as usize);
                sc.chi_b[comp] += 1;
                for w in 0..4u8 {
                    let e = 16 * t + 4 * v as usize + w as usize;
                    if w != v && uf_find(&mut sc.end, e) == e {
                        sc.chi_b[comp] += 1;
                    }
                }
                for f in 0..4u8 {
                    if f == v {
                        continue;
                    }
                    if self.table[4 * t + f as usize] != NONE {
                        sc.glued[comp] += 1;
                        continue;
                    }
                    let mut ws = (0..4u8).filter(|&w| w != v && w != f);
                    let (w1, w2) = (ws.next().unwrap(), ws.next().unwrap());
                    let a = uf_find(&mut sc.end, 16 * t + 4 * v as usize + w1 as usize);
                    let b = uf_find(&mut sc.end, 16 * t + 4 * v as usize + w2 as usize);
                    if uf_union(&mut sc.bnd, a, b) {
                        sc.chi_b[comp] -= 1;
                    }
                }
            }
        }
        for c in 0..4 * k {
            if uf_find(&mut sc.corner, c) == c {
                if sc.chi_b[c] - sc.glued[c] / 2 != 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Glues `(t, f)` to `(u, g)` by `p`; `false` if an edge would be
    /// identified with itself in reverse (the table is then unchanged).
    fn glue(&mut self, t: usize, f: u8, u: usize, g: u8, p: Perm4) -> bool {
        let mark = self.edges.checkpoint();
        let fv = face_vertices(f);
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (fv[i], fv[j]);
                let (pa, pb) = (p.apply(a), p.apply(b));
                if !self.edges.union(6 * t + edge_index(a, b), 6 * u + edge_index(pa, pb), (pa > pb) as u8) {
                    self.edges.rollback(mark);
                    return false;
                }
            }
        }
        self.table[4 * t + f as usize] = encode(u, g, p);
        self.table[4 * u + g as usize] = encode(t, f, p.inverse());
        true
    }

    fn unglue(&mut self, t: usize, f: u8, u: usize, g: u8, mark: usize) {
        self.table[4 * t + f as usize] = NONE;
        self.table[4 * u + g as usize] = NONE;
        self.edges.rollback(mark);
    }

    /// Compares every other root's traversal with the table's own sequence
    /// as far as both are decided.
    fn check_prefix(&mut self) -> Prefix {
        let mut ties = 1;
        for root in 0..self.count {
            for sigma in Perm4::all() {
                if root == 0 && sigma == Perm4::IDENTITY {
                    continue;
                }
                match self.compare_root(root, sigma) {
                    Cmp::Less => return Prefix::Smaller,
                    Cmp::Greater => {}
                    Cmp::Equal => ties += 1,
                    Cmp::Undecided => {}
                }
            }
        }
        Prefix::NotSmaller { ties }
    }

    fn compare_root(&mut self, root: usize, sigma: Perm4) -> Cmp {
        for x in self.new_of_old.iter_mut() {
            *x = u32::MAX;
        }
        self.old_of_new[0] = root as u32;
        self.new_of_old[root] = 0;
        self.map[0] = sigma;
        let mut count = 1usize;
        for n in 0..self.k {
            if n >= count {
                return Cmp::Undecided;
            }
            let old = self.old_of_new[n] as usize;
            let m = self.map[n];
            for nf in 0..4u8 {
                let pos = 4 * n + nf as usize;
                let ours = self.table[pos];
                let raw = self.table[4 * old + m.apply(nf) as usize];
                if raw == NONE || ours == NONE {
                    return Cmp::Undecided;
                }
                let (gt, gf, gp) = decode(raw);
                let seen = self.new_of_old[gt];
                let code = if seen == u32::MAX {
                    let n2 = count;
                    count += 1;
                    self.old_of_new[n2] = gt as u32;
                    self.new_of_old[gt] = n2 as u32;
                    self.map[n2] = gp.compose(m);
                    (n2 * 96 + nf as usize * 24) as u16
                } else {
                    let inv = self.map[seen as usize].inverse();
                    encode(seen as usize, inv.apply(gf), inv.compose(gp).compose(m))
                };
                if code != ours {
                    return if code < ours { Cmp::Less } else { Cmp::Greater };
                }
            }
        }
        Cmp::Equal
    }

    fn leaf(&self, ties: usize) -> Option<Enumerated> {
        let gluings: Vec<[Gluing; 4]> = (0..self.k)
            .map(|t| {
                [0, 1, 2, 3].map(|f| {
                    let (u, g, p) = decode(self.table[4 * t + f]);
                    Gluing::new(u as u32, g, p)
                })
            })
            .collect();
        let tri = GluedTriangulation::from_gluings_unchecked(gluings);
        let sk = tri.skeleton();
        if !tri.validate_with(&sk).is_valid() {
            return None;
        }
        let signature = tri.iso_signature();
        Some(Enumerated { triangulation: tri, signature, automorphisms: ties })
    }

    /// Options at the first undecided face, in code order.
    fn options(&self, n: usize, nf: u8) -> Vec<(usize, u8, Perm4)> {
        let mut out = Vec::new();
        for m in n..self.count {
            for g in 0..4u8 {
                if (m == n && g <= nf) || self.table[4 * m + g as usize] != NONE {
                    continue;
                }
                for p in Perm4::all() {
                    if p.apply(nf) == g {
                        out.push((m, g, p));
                    }
                }
            }
        }
        if self.count < self.k {
            out.push((self.count, nf, Perm4::IDENTITY));
        }
        out
    }

    fn run(&mut self, pos: usize, out: &mut Vec<Enumerated>, subtree: Option<(usize, usize)>) {
        let mut pos = pos;
        while pos < 4 * self.k && self.table[pos] != NONE {
            pos += 1;
        }
        if pos == 4 * self.k {
            if let Prefix::NotSmaller { ties, .. } = self.check_prefix() {
                out.extend(self.leaf(ties));
            }
            return;
        }
        let (n, nf) = (pos / 4, (pos % 4) as u8);
        if n >= self.count {
            return;
        }
        for (idx, (m, g, p)) in self.options(n, nf).into_iter().enumerate() {
            if let Some((worker, workers)) = subtree {
                if idx % workers != worker {
                    continue;
                }
            }
            let new_tet = m == self.count;
            let mark = self.edges.checkpoint();
            if !self.glue(n, nf, m, g, p) {
                continue;
            }
            if new_tet {
                self.count += 1;
            }
            if self.links_ok() && !matches!(self.check_prefix(), Prefix::Smaller) {
                self.run(pos + 1, out, None);
            }
            if new_tet {
                self.count -= 1;
            }
            self.unglue(n, nf, m, g, mark);
        }
    }
}

enum Cmp {
    Less,
    Equal,
    Greater,
    Undecided,
}

/// Every valid closed 3-manifold triangulation with `k` tetrahedra, one per
/// isomorphism class, sorted by signature. `threads` workers split the
/// choices for the first face; the output does not depend on it.
pub fn enumerate_all(k: usize, threads: usize) -> Vec<Enumerated> {
    assert!(k >= 1, "need at least one tetrahedron");
    let threads = threads.max(1);
    let mut all: Vec<Enumerated> = if threads == 1 {
        let mut out = Vec::new();
        Search::new(k).run(0, &mut out, None);
        out
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    s.spawn(move || {
                        let mut out = Vec::new();
                        Search::new(k).run(0, &mut out, Some((w, threads)));
                        out
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("enumeration worker panicked")).collect()
        })
    };
    all.sort_by(|a, b| a.signature.cmp(&b.signature));
    all
}
