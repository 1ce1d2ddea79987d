//! Disjoint-set forest with an optional parity bit per element.
//!
//! The parity records whether an element is identified with its root with
//! the same (0) or reversed (1) orientation. Joining two elements that are
//! already in one class with contradicting parity marks that class as
//! conflicted; this is how edges identified with themselves in reverse are
//! detected.

#[derive(Clone, Debug)]
pub struct ParityUnionFind {
    parent: Vec<u32>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    conflict: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n as u32).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
            conflict: vec![false; n],
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Root of `x` and the parity of `x` relative to that root.
    pub fn find(&mut self, x: usize) -> (usize, u8) {
        let mut root = x;
        let mut par = 0u8;
        while self.parent[root] as usize != root {
            par ^= self.parity[root];
            root = self.parent[root] as usize;
        }
        // Path compression, recomputing parities along the way.
        let mut cur = x;
        let mut cur_par = par;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            let next_par = cur_par ^ self.parity[cur];
            self.parent[cur] = root as u32;
            self.parity[cur] = cur_par;
            cur = next;
            cur_par = next_par;
        }
        (root, par)
    }

    /// Identifies `a` and `b` with relative parity `rel`. Returns `false` if
    /// they were already joined with the opposite parity.
    pub fn union(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != rel {
                self.conflict[ra] = true;
                return false;
            }
            return true;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[lo] = hi as u32;
        self.parity[lo] = pa ^ pb ^ rel;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        if self.conflict[lo] {
            self.conflict[hi] = true;
        }
        true
    }

    pub fn is_conflicted(&mut self, x: usize) -> bool {
        let (r, _) = self.find(x);
        self.conflict[r]
    }

    /// Dense class ids (in order of first appearance) for every element.
    pub fn classes(&mut self) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut id_of_root = vec![u32::MAX; n];
        let mut out = vec![0u32; n];
        let mut next = 0u32;
        for x in 0..n {
            let (r, _) = self.find(x);
            if id_of_root[r] == u32::MAX {
                id_of_root[r] = next;
                next += 1;
            }
            out[x] = id_of_root[r];
        }
        (out, next as usize)
    }
}
