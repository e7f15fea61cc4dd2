//! The coefficient ring of the quantum torus: univariate Laurent
//! polynomials in `v` with integer coefficients, where `v^2 = t`. Balanced
//! q-binomials and bar-invariant normalizations need the half power of t,
//! which is exactly what `v` provides.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// An element of `Z[v^{±1}]`. Nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct VLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl VLaurent {
    pub fn zero() -> Self {
        VLaurent::default()
    }

    pub fn one() -> Self {
        Self::v_power(0)
    }

    /// The unit `v^k`.
    pub fn v_power(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigInt::one());
        VLaurent { terms }
    }

    /// The unit `t^k = v^{2k}`.
    pub fn t_power(k: i64) -> Self {
        Self::v_power(2 * k)
    }

    pub fn from_integer(c: i64) -> Self {
        Self::term(0, BigInt::from(c))
    }

    pub fn term(exp: i64, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        VLaurent { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.accumulate(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    /// `Some((k, sign))` when the element is the unit `±v^k`.
    pub fn as_unit(&self) -> Option<(i64, bool)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((k, true))
        } else if (-c).is_one() {
            Some((k, false))
        } else {
            None
        }
    }

    fn accumulate(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Multiply by `v^k`.
    pub fn shifted(&self, k: i64) -> Self {
        VLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        VLaurent {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        *self == self.bar()
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Derivative with respect to `v`, evaluated at `v = 1`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.terms.iter().map(|(&e, c)| BigInt::from(e) * c).sum()
    }

    /// Exact division in `Z[v^{±1}]`; `None` when `divisor` does not
    /// divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let f_low = *self.terms.keys().next().unwrap();
        let f_high = *self.terms.keys().next_back().unwrap();
        let g_low = *divisor.terms.keys().next().unwrap();
        let g_high = *divisor.terms.keys().next_back().unwrap();
        let deg_f = (f_high - f_low) as usize;
        let deg_g = (g_high - g_low) as usize;
        if deg_f < deg_g {
            return None;
        }
        let mut rem: Vec<BigInt> = vec![BigInt::zero(); deg_f + 1];
        for (&e, c) in &self.terms {
            rem[(e - f_low) as usize] = c.clone();
        }
        let mut g: Vec<BigInt> = vec![BigInt::zero(); deg_g + 1];
        for (&e, c) in &divisor.terms {
            g[(e - g_low) as usize] = c.clone();
        }
        let g_top = g[deg_g].clone();
        let mut quot: Vec<BigInt> = vec![BigInt::zero(); deg_f - deg_g + 1];
        for k in (0..=deg_f - deg_g).rev() {
            let lead = rem[deg_g + k].clone();
            if lead.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&lead, &g_top);
            if !r.is_zero() {
                return None;
            }
            for (i, gc) in g.iter().enumerate() {
                let sub = gc * &q;
                rem[i + k] -= sub;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_terms(
            quot.into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + f_low - g_low, c)),
        ))
    }
}

impl Add for &VLaurent {
    type Output = VLaurent;
    fn add(self, other: &VLaurent) -> VLaurent {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.accumulate(e, c.clone());
        }
        out
    }
}

impl Sub for &VLaurent {
    type Output = VLaurent;
    fn sub(self, other: &VLaurent) -> VLaurent {
        self + &(-other)
    }
}

impl Neg for &VLaurent {
    type Output = VLaurent;
    fn neg(self) -> VLaurent {
        VLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &VLaurent {
    type Output = VLaurent;
    fn mul(self, other: &VLaurent) -> VLaurent {
        let mut out = VLaurent::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                out.accumulate(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for VLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{mag}*v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{mag}*v^{e}")?,
            }
        }
        Ok(())
    }
}

/// The balanced Gaussian binomial at base `u = v^weight`:
/// `prod_{s=1}^{p} (u^{c-s+1} - u^{-(c-s+1)}) / (u^s - u^{-s})`.
/// Always a Laurent polynomial with nonnegative integer coefficients,
/// symmetric under `v <-> v^{-1}`. Returns zero when `p > c`.
pub fn q_binomial(c: u32, p: u32, weight: i64) -> VLaurent {
    assert!(weight > 0, "q-binomial weight must be positive");
    if p > c {
        return VLaurent::zero();
    }
    // Unbalanced Gaussian binomial in q via the Pascal recurrence
    // [c p] = [c-1 p-1] + q^p [c-1 p], then rebalanced around degree
    // p(c-p) with q = v^{2*weight}. Coefficient vectors are indexed by
    // the power of q; the zero polynomial is the empty vector.
    let p = p.min(c - p);
    let mut row: Vec<Vec<BigInt>> = vec![Vec::new(); (p + 1) as usize];
    row[0] = vec![BigInt::one()];
    for cc in 1..=c {
        for pp in (1..=p.min(cc)).rev() {
            let mut next = row[(pp - 1) as usize].clone();
            let shift = pp as usize;
            let old = &row[pp as usize];
            if !old.is_empty() && next.len() < old.len() + shift {
                next.resize(old.len() + shift, BigInt::zero());
            }
            for (i, coeff) in old.iter().enumerate() {
                next[i + shift] += coeff;
            }
            row[pp as usize] = next;
        }
    }
    let coeffs = row[p as usize].clone();
    let degree = (p * (c - p)) as i64;
    VLaurent::from_terms(
        coeffs
            .into_iter()
            .enumerate()
            .map(|(i, coeff)| (weight * (2 * i as i64 - degree), coeff)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[(i64, i64)]) -> VLaurent {
        VLaurent::from_terms(s.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn ring_basics() {
        let a = v(&[(1, 1), (-1, 1)]);
        let b = v(&[(1, 1), (-1, -1)]);
        assert_eq!(&a * &b, v(&[(2, 1), (-2, -1)]));
        assert_eq!(&a + &(-&a), VLaurent::zero());
        assert!(VLaurent::v_power(3).as_unit() == Some((3, true)));
    }

    #[test]
    fn exact_division() {
        let a = v(&[(2, 1), (0, 1), (-2, 1)]);
        let b = v(&[(1, 1), (-1, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        // v + v^{-1} does not divide v^2 + 1 + v^{-2} in Z[v^{±1}].
        assert_eq!(a.exact_div(&b), None);
        assert_eq!(v(&[(0, 3)]).exact_div(&v(&[(0, 2)])), None);
    }

    #[test]
    fn q_binomial_examples() {
        assert_eq!(q_binomial(2, 1, 1), v(&[(1, 1), (-1, 1)]));
        assert_eq!(q_binomial(3, 2, 1), v(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(q_binomial(5, 0, 1), VLaurent::one());
        assert_eq!(q_binomial(2, 3, 1), VLaurent::zero());
        // At weight d the exponents scale by d.
        assert_eq!(q_binomial(2, 1, 3), v(&[(3, 1), (-3, 1)]));
    }

    #[test]
    fn q_binomial_specializes_to_binomial() {
        for c in 0..=8u32 {
            for p in 0..=c {
                let qb = q_binomial(c, p, 1);
                assert!(qb.is_bar_symmetric());
                let expected = (0..p).fold(BigInt::one(), |acc, s| {
                    acc * BigInt::from(c - s) / BigInt::from(s + 1)
                });
                assert_eq!(qb.at_one(), expected);
            }
        }
    }
}
