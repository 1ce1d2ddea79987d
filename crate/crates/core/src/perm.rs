//! Permutations of the four vertices of a tetrahedron.
//!
//! A [`Perm4`] is stored as its index (0..24) in the lexicographic order of
//! one-line notation, so `Perm4::from_index(0)` is `0123` and index 23 is
//! `3210`. Composition, inversion and application go through small lookup
//! tables built at compile time.

use std::fmt;

const fn all_perms() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[n] = [a as u8, b as u8, c as u8, d as u8];
                        n += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const IMAGES: [[u8; 4]; 24] = all_perms();

const fn index_of(img: [u8; 4]) -> u8 {
    let mut i = 0;
    while i < 24 {
        let p = IMAGES[i];
        if p[0] == img[0] && p[1] == img[1] && p[2] == img[2] && p[3] == img[3] {
            return i as u8;
        }
        i += 1;
    }
    255
}

const fn compose_table() -> [[u8; 24]; 24] {
    let mut out = [[0u8; 24]; 24];
    let mut a = 0;
    while a < 24 {
        let mut b = 0;
        while b < 24 {
            let pa = IMAGES[a];
            let pb = IMAGES[b];
            let img = [
                pa[pb[0] as usize],
                pa[pb[1] as usize],
                pa[pb[2] as usize],
                pa[pb[3] as usize],
            ];
            out[a][b] = index_of(img);
            b += 1;
        }
        a += 1;
    }
    out
}

const fn inverse_table() -> [u8; 24] {
    let mut out = [0u8; 24];
    let mut a = 0;
    while a < 24 {
        let p = IMAGES[a];
        let mut inv = [0u8; 4];
        let mut i = 0;
        while i < 4 {
            inv[p[i] as usize] = i as u8;
            i += 1;
        }
        out[a] = index_of(inv);
        a += 1;
    }
    out
}

const fn sign_table() -> [i8; 24] {
    let mut out = [0i8; 24];
    let mut a = 0;
    while a < 24 {
        let p = IMAGES[a];
        let mut inversions = 0;
        let mut i = 0;
        while i < 4 {
            let mut j = i + 1;
            while j < 4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
                j += 1;
            }
            i += 1;
        }
        out[a] = if inversions % 2 == 0 { 1 } else { -1 };
        a += 1;
    }
    out
}

const COMPOSE: [[u8; 24]; 24] = compose_table();
const INVERSE: [u8; 24] = inverse_table();
const SIGN: [i8; 24] = sign_table();

/// A permutation of `{0, 1, 2, 3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Perm4(u8);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4(0);

    /// Every permutation, in index order.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(Perm4)
    }

    pub fn from_index(index: u8) -> Option<Perm4> {
        (index < 24).then_some(Perm4(index))
    }

    /// Builds a permutation from one-line notation; `None` unless `img` is a
    /// bijection of `{0,1,2,3}`.
    pub fn from_images(img: [u8; 4]) -> Option<Perm4> {
        match index_of(img) {
            255 => None,
            i => Some(Perm4(i)),
        }
    }

    /// The transposition swapping `a` and `b` (identity when `a == b`).
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut img = [0, 1, 2, 3];
        img.swap(a as usize, b as usize);
        Perm4(index_of(img))
    }

    #[inline]
    pub fn index(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn images(self) -> [u8; 4] {
        IMAGES[self.0 as usize]
    }

    #[inline]
    pub fn apply(self, i: u8) -> u8 {
        IMAGES[self.0 as usize][i as usize]
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    #[inline]
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(COMPOSE[self.0 as usize][other.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm4 {
        Perm4(INVERSE[self.0 as usize])
    }

    /// +1 for even permutations, -1 for odd.
    #[inline]
    pub fn sign(self) -> i8 {
        SIGN[self.0 as usize]
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.images();
        write!(f, "{}{}{}{}", p[0], p[1], p[2], p[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_indexing() {
        assert_eq!(Perm4::from_index(0).unwrap().images(), [0, 1, 2, 3]);
        assert_eq!(Perm4::from_index(1).unwrap().images(), [0, 1, 3, 2]);
        assert_eq!(Perm4::from_index(23).unwrap().images(), [3, 2, 1, 0]);
        assert!(Perm4::from_index(24).is_none());
        let mut prev = None;
        for p in Perm4::all() {
            if let Some(q) = prev {
                let a: [u8; 4] = Perm4::images(q);
                assert!(a < p.images());
            }
            prev = Some(p);
        }
    }

    #[test]
    fn group_laws() {
        for a in Perm4::all() {
            assert_eq!(a.compose(a.inverse()), Perm4::IDENTITY);
            assert_eq!(a.inverse().compose(a), Perm4::IDENTITY);
            for b in Perm4::all() {
                for i in 0..4 {
                    assert_eq!(a.compose(b).apply(i), a.apply(b.apply(i)));
                }
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn transpositions_are_odd() {
        for a in 0..4 {
            for b in 0..4 {
                let t = Perm4::transposition(a, b);
                assert_eq!(t.sign(), if a == b { 1 } else { -1 });
                assert_eq!(t.compose(t), Perm4::IDENTITY);
            }
        }
        assert!(Perm4::from_images([0, 0, 1, 2]).is_none());
    }
}
