use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Point subset of a space with at most 128 points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mask(pub u128);

impl Mask {
    pub const BITS: usize = 128;
    pub const EMPTY: Mask = Mask(0);

    #[inline]
    pub fn single(i: usize) -> Mask {
        Mask(1u128 << i)
    }

    pub fn full(n: usize) -> Mask {
        if n >= 128 {
            Mask(u128::MAX)
        } else {
            Mask((1u128 << n) - 1)
        }
    }

    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Mask {
        it.into_iter().fold(Mask::EMPTY, |m, i| m | Mask::single(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: Mask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: Mask) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn lowest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl BitOr for Mask {
    type Output = Mask;
    #[inline]
    fn bitor(self, rhs: Mask) -> Mask {
        Mask(self.0 | rhs.0)
    }
}

impl BitAnd for Mask {
    type Output = Mask;
    #[inline]
    fn bitand(self, rhs: Mask) -> Mask {
        Mask(self.0 & rhs.0)
    }
}

impl Sub for Mask {
    type Output = Mask;
    #[inline]
    fn sub(self, rhs: Mask) -> Mask {
        Mask(self.0 & !rhs.0)
    }
}

impl Not for Mask {
    type Output = Mask;
    fn not(self) -> Mask {
        Mask(!self.0)
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = Mask::from_indices([0, 3, 127]);
        assert_eq!(a.count(), 3);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 3, 127]);
        assert_eq!(a.lowest(), Some(0));
        assert!(a.contains(127) && !a.contains(1));
        assert_eq!((a - Mask::single(0)).lowest(), Some(3));
        assert!(Mask::from_indices([3]).is_subset(a));
        assert_eq!(Mask::full(128).count(), 128);
        assert_eq!(Mask::full(5), Mask::from_indices(0..5));
        assert_eq!(Mask::EMPTY.lowest(), None);
    }
}
