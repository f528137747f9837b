//! Small index subsets of `[n]` as bitmasks, ordered lexicographically by
//! their sorted element lists (the order all reports use).

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A subset of `{0, .., 31}`; hyperplane index sets `L` and flat supports.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset {
    mask: u32,
}

impl Subset {
    pub const EMPTY: Subset = Subset { mask: 0 };

    pub fn from_mask(mask: u32) -> Subset {
        Subset { mask }
    }

    pub fn from_elements(elems: &[usize]) -> Subset {
        let mut mask = 0u32;
        for &e in elems {
            debug_assert!(e < 32);
            mask |= 1 << e;
        }
        Subset { mask }
    }

    pub fn singleton(e: usize) -> Subset {
        Subset { mask: 1 << e }
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, e: usize) -> bool {
        self.mask & (1 << e) != 0
    }

    pub fn insert(self, e: usize) -> Subset {
        Subset {
            mask: self.mask | (1 << e),
        }
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset {
            mask: self.mask | other.mask,
        }
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset {
            mask: self.mask & other.mask,
        }
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset {
            mask: self.mask & !other.mask,
        }
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// Complement within `[n]`.
    pub fn complement(self, n: usize) -> Subset {
        Subset {
            mask: !self.mask & ((1u32 << n) - 1),
        }
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut mask = self.mask;
        core::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let e = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Image under a permutation given as a function on indices.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Subset {
        let mut mask = 0u32;
        for e in self.elements() {
            mask |= 1 << f(e);
        }
        Subset { mask }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Subset) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    /// Lexicographic on the sorted element list, shorter-prefix first.
    fn cmp(&self, other: &Subset) -> Ordering {
        let mut a = self.elements();
        let mut b = other.elements();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

macro_rules! fmt_as_set {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{{")?;
            for (i, e) in self.elements().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", e + 1)?;
            }
            write!(f, "}}")
        }
    };
}

impl fmt::Debug for Subset {
    fmt_as_set!();
}

impl fmt::Display for Subset {
    fmt_as_set!();
}

/// All `k`-subsets of `[n]` in lexicographic order of their element lists.
pub fn combinations(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_elements(&idx));
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        if k == 0 {
            return out;
        }
    }
}
