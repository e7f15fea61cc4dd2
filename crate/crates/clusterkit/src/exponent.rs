//! Integer exponent vectors for Laurent monomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Exponent vector of a Laurent monomial `x1^e1 * ... * xn^en`.
///
/// Entries may be negative. The total order compares entries from the
/// *last* index down: `u < w` iff at the largest index `i` with
/// `u[i] != w[i]` we have `u[i] < w[i]`. This order is compatible with
/// addition, which makes leading exponents multiplicative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(entries: Vec<i64>) -> Self {
        Exponent(entries)
    }

    /// The zero vector (exponent of the constant monomial).
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The standard basis vector `e_i` (exponent of `x_{i+1}`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Componentwise maximum with zero.
    pub fn positive_part(&self) -> Self {
        Exponent(self.0.iter().map(|&e| e.max(0)).collect())
    }

    /// Componentwise minimum over a set of exponents.
    pub fn componentwise_min(vs: impl IntoIterator<Item = Self>) -> Option<Self> {
        let mut iter = vs.into_iter();
        let mut acc = iter.next()?;
        for v in iter {
            for (a, b) in acc.0.iter_mut().zip(v.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        Some(acc)
    }
}

impl std::ops::Index<usize> for Exponent {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(self.0.iter().map(|&a| -a).collect())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_reads_from_last_index() {
        let u = Exponent::new(vec![5, 0]);
        let w = Exponent::new(vec![0, 1]);
        assert!(u < w);
        assert!(Exponent::new(vec![1, 2]) < Exponent::new(vec![0, 3]));
        assert!(Exponent::new(vec![2, 1]) > Exponent::new(vec![1, 1]));
    }

    #[test]
    fn order_compatible_with_addition() {
        let u = Exponent::new(vec![1, -2, 0]);
        let w = Exponent::new(vec![0, 0, 1]);
        let s = Exponent::new(vec![3, 1, -4]);
        assert!(u < w);
        assert!(&u + &s < &w + &s);
    }
}
