use std::fmt;

/// A permutation of {0,1,2,3}, stored as the image of each point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

/// The 24 permutations in lexicographic order; isomorphism signatures index
/// gluing permutations into this list.
pub const ORDERED_S4: [[u8; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1],
    [0, 3, 1, 2], [0, 3, 2, 1], [1, 0, 2, 3], [1, 0, 3, 2],
    [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0],
    [2, 3, 0, 1], [2, 3, 1, 0], [3, 0, 1, 2], [3, 0, 2, 1],
    [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, rejecting anything that is not a bijection.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Permutations in lexicographic order of their image lists.
    pub fn ordered_s4(index: usize) -> Perm4 {
        Perm4(ORDERED_S4[index])
    }

    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut p = [0, 1, 2, 3];
        p.swap(a as usize, b as usize);
        Perm4(p)
    }

    #[inline]
    pub fn apply(self, i: u8) -> u8 {
        self.0[i as usize]
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    pub fn sign(self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Tetrahedron edges in the standard numbering: 0:01 1:02 2:03 3:12 4:13 5:23.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_number(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// The angle-pair selector (0, 1 or 2) containing tetrahedron edge `e`.
/// Pair k consists of edges k and 5 - k.
pub fn pair_of_edge(e: usize) -> u8 {
    e.min(5 - e) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_s4_is_sorted_and_complete() {
        let mut all: Vec<_> = ORDERED_S4.to_vec();
        all.sort();
        all.dedup();
        assert_eq!(all, ORDERED_S4.to_vec());
        assert_eq!(all.len(), 24);
        for p in ORDERED_S4 {
            assert!(Perm4::from_images(p).is_some());
        }
    }

    #[test]
    fn inverse_and_compose() {
        for p in ORDERED_S4 {
            let p = Perm4(p);
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for q in ORDERED_S4 {
                let q = Perm4(q);
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }
}
