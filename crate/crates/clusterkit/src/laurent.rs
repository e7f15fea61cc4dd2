//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Elements of `Q[x1^{±1}, ..., xn^{±1}]` are stored as a map from exponent
//! vectors to nonzero coefficients, sorted by the lex order on exponents, so
//! equality is structural. All arithmetic is exact; there is no floating
//! point anywhere in this crate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exponent::Exponent;

/// Errors from binary operations on polynomials of different ambient rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArithmeticError {
    DimensionMismatch { left: usize, right: usize },
}

impl fmt::Display for ArithmeticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticError::DimensionMismatch { left, right } => {
                write!(f, "ambient variable counts differ: {left} vs {right}")
            }
        }
    }
}

impl std::error::Error for ArithmeticError {}

/// Errors from exact division.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DivisionError {
    DivisionByZero,
    /// The dividend is not a multiple of the divisor; carries the first
    /// irreducible remainder encountered by leading-term elimination.
    NotDivisible { remainder: LaurentPolynomial },
    Dimension(ArithmeticError),
}

impl fmt::Display for DivisionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisionError::DivisionByZero => write!(f, "division by the zero polynomial"),
            DivisionError::NotDivisible { remainder } => {
                write!(f, "not divisible; irreducible remainder {remainder}")
            }
            DivisionError::Dimension(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for DivisionError {}

/// Errors from point evaluation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    /// Coordinate `index` is zero but some term has a negative exponent there.
    ZeroToNegativePower { index: usize },
    WrongPointLength { expected: usize, got: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ZeroToNegativePower { index } => {
                write!(f, "coordinate {} is zero but appears with a negative exponent", index + 1)
            }
            EvalError::WrongPointLength { expected, got } => {
                write!(f, "point has {got} coordinates, polynomial has {expected} variables")
            }
        }
    }
}

impl std::error::Error for EvalError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    Unexpected { at: usize, found: String },
    BadVariable { at: usize, index: usize, ambient: usize },
    ZeroDenominator { at: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Unexpected { at, found } => write!(f, "unexpected {found:?} at byte {at}"),
            ParseError::BadVariable { at, index, ambient } => {
                write!(f, "variable x{index} at byte {at} exceeds ambient count {ambient}")
            }
            ParseError::ZeroDenominator { at } => write!(f, "zero denominator at byte {at}"),
        }
    }
}

impl std::error::Error for ParseError {}

/// A Laurent polynomial in `n` variables with `BigRational` coefficients.
///
/// Invariant: no stored coefficient is zero, and every exponent vector has
/// length `n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent::zero(n), c);
        }
        LaurentPolynomial { n, terms }
    }

    pub fn from_integer(n: usize, c: i64) -> Self {
        Self::constant(n, BigRational::from_integer(BigInt::from(c)))
    }

    /// The coordinate function `x_{i+1}`.
    pub fn variable(n: usize, i: usize) -> Self {
        Self::monomial(n, Exponent::unit(n, i), BigRational::one())
    }

    pub fn monomial(n: usize, exponent: Exponent, coeff: BigRational) -> Self {
        assert_eq!(exponent.len(), n, "exponent length must match ambient n");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        LaurentPolynomial { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponent, BigRational)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            p.accumulate(e, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exponent::zero(self.n))
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lex-largest term, if any.
    pub fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Lex-smallest term, if any.
    pub fn trailing(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next()
    }

    /// True when the single stored term has exactly one monomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// All exponents are nonnegative (the polynomial lies in `Q[x1..xn]`).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_nonnegative())
    }

    /// All coefficients are positive integers.
    pub fn has_positive_integer_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.denom().is_one() && c.numer().is_positive())
    }

    fn accumulate(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.n);
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

    fn check_dims(&self, other: &Self) -> Result<(), ArithmeticError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(ArithmeticError::DimensionMismatch { left: self.n, right: other.n })
        }
    }

    /// Termwise sum in canonical form.
    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithmeticError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Distributive product; exponents add componentwise.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithmeticError> {
        self.check_dims(other)?;
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.accumulate(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn negated(&self) -> Self {
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shifted(&self, shift: &Exponent) -> Self {
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Componentwise minimum of all exponents (the monomial content shift).
    fn content_shift(&self) -> Exponent {
        Exponent::componentwise_min(self.terms.keys().cloned())
            .unwrap_or_else(|| Exponent::zero(self.n))
    }

    /// Exact division in the Laurent ring: returns the unique `q` with
    /// `self = q * divisor`, or reports the first irreducible remainder.
    ///
    /// Both operands are normalized by their monomial content so the
    /// quotient of the normalized parts is an honest polynomial; division
    /// then proceeds by lex-leading-term elimination, which terminates
    /// because the lex order is a well-order on nonnegative exponents.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, DivisionError> {
        self.check_dims(divisor).map_err(DivisionError::Dimension)?;
        if divisor.is_zero() {
            return Err(DivisionError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.n));
        }

        let f_shift = self.content_shift();
        let g_shift = divisor.content_shift();
        let mut rem = self.shifted(&-&f_shift);
        let g = divisor.shifted(&-&g_shift);
        let (g_lead, g_lead_coeff) = g.leading().expect("divisor is nonzero");
        let g_lead = g_lead.clone();
        let g_lead_coeff = g_lead_coeff.clone();

        let mut quotient = Self::zero(self.n);
        while let Some((r_lead, r_coeff)) = rem.leading() {
            let q_exp = r_lead - &g_lead;
            if !q_exp.is_nonnegative() {
                return Err(DivisionError::NotDivisible {
                    remainder: rem.shifted(&f_shift),
                });
            }
            let q_coeff = r_coeff / &g_lead_coeff;
            let term = Self::monomial(self.n, q_exp, q_coeff);
            rem = &rem - &(&term * &g);
            quotient = &quotient + &term;
        }
        Ok(quotient.shifted(&(&f_shift - &g_shift)))
    }

    /// Exact value at a rational point. Requires `p[i] != 0` for every `i`
    /// at which some term of `self` has a negative exponent.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, EvalError> {
        if point.len() != self.n {
            return Err(EvalError::WrongPointLength { expected: self.n, got: point.len() });
        }
        for i in 0..self.n {
            if point[i].is_zero() && self.terms.keys().any(|e| e[i] < 0) {
                return Err(EvalError::ZeroToNegativePower { index: i });
            }
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut value = c.clone();
            for (i, &k) in e.entries().iter().enumerate() {
                value *= rational_pow(&point[i], k);
            }
            total += value;
        }
        Ok(total)
    }

    /// Decompose into coefficients of powers of `x_{var+1}`: returns pairs
    /// `(d, c_d)` where `c_d` does not involve `x_{var+1}` and
    /// `self = sum_d c_d * x_{var+1}^d`.
    pub fn coefficients_in_variable(&self, var: usize) -> BTreeMap<i64, LaurentPolynomial> {
        let mut out: BTreeMap<i64, LaurentPolynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[var];
            let mut stripped = e.entries().to_vec();
            stripped[var] = 0;
            out.entry(d)
                .or_insert_with(|| Self::zero(self.n))
                .accumulate(Exponent::new(stripped), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Render in the text grammar: terms lex-descending, monomials as
    /// `x1^a1*...*xn^an`, rationals as `p/q`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Parse the grammar produced by [`render`](Self::render).
    pub fn parse(input: &str, n: usize) -> Result<Self, ParseError> {
        Parser { input: input.as_bytes(), pos: 0, n }.parse_poly()
    }
}

fn rational_pow(base: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mag = base.pow(k.unsigned_abs().try_into().expect("exponent fits i32"));
    if k < 0 {
        mag.recip()
    } else {
        mag
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self.checked_add(other).expect("ambient dimension mismatch")
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self + &other.negated()
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self.checked_mul(other).expect("ambient dimension mismatch")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.negated()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, e, &c.abs())?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, e: &Exponent, c: &BigRational) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    if !c.is_one() || e.is_zero() {
        if c.denom().is_one() {
            factors.push(c.numer().to_string());
        } else {
            factors.push(format!("{}/{}", c.numer(), c.denom()));
        }
    }
    for (i, &k) in e.entries().iter().enumerate() {
        match k {
            0 => {}
            1 => factors.push(format!("x{}", i + 1)),
            _ => factors.push(format!("x{}^{}", i + 1, k)),
        }
    }
    write!(f, "{}", factors.join("*"))
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn parse_poly(mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut poly = LaurentPolynomial::zero(self.n);
        self.skip_ws();
        let mut sign = if self.eat(b'-') { -1i64 } else { 1 };
        loop {
            let (e, c) = self.parse_term()?;
            poly.accumulate(e, c * BigRational::from_integer(BigInt::from(sign)));
            self.skip_ws();
            if self.pos >= self.input.len() {
                break;
            }
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Err(self.unexpected());
            }
        }
        Ok(poly)
    }

    fn parse_term(&mut self) -> Result<(Exponent, BigRational), ParseError> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0i64; self.n];
        loop {
            self.skip_ws();
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                let numer = self.parse_integer()?;
                let denom = if self.eat(b'/') {
                    let at = self.pos;
                    let d = self.parse_integer()?;
                    if d.is_zero() {
                        return Err(ParseError::ZeroDenominator { at });
                    }
                    d
                } else {
                    BigInt::one()
                };
                coeff *= BigRational::new(numer, denom);
            } else if self.peek() == Some(b'x') {
                let at = self.pos;
                self.pos += 1;
                let idx = self.parse_usize()?;
                if idx == 0 || idx > self.n {
                    return Err(ParseError::BadVariable { at, index: idx, ambient: self.n });
                }
                let k = if self.eat(b'^') { self.parse_signed()? } else { 1 };
                exps[idx - 1] += k;
            } else {
                return Err(self.unexpected());
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Exponent::new(exps), coeff))
    }

    fn parse_integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse_usize(&mut self) -> Result<usize, ParseError> {
        let v = self.parse_integer()?;
        Ok(v.try_into().unwrap_or(usize::MAX))
    }

    fn parse_signed(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(b'-');
        let v = self.parse_integer()?;
        let v: i64 = v.try_into().map_err(|_| self.unexpected())?;
        Ok(if neg { -v } else { v })
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek() == Some(b' ') {
            self.pos += 1;
        }
    }

    fn unexpected(&self) -> ParseError {
        let found = self
            .peek()
            .map(|b| (b as char).to_string())
            .unwrap_or_else(|| "end of input".to_string());
        ParseError::Unexpected { at: self.pos, found }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse2(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, 2).unwrap()
    }

    #[test]
    fn add_cancels() {
        let x1 = LaurentPolynomial::variable(2, 0);
        let x2 = LaurentPolynomial::variable(2, 1);
        let sum = &(&x1 + &x2) + &x2.negated();
        assert_eq!(sum, x1);
    }

    #[test]
    fn add_zero_is_identity() {
        let f = parse2("x1^-1*x2 + 3/2*x1");
        assert_eq!(&f + &LaurentPolynomial::zero(2), f);
    }

    #[test]
    fn add_hand_sum() {
        let f = parse2("x2 + 1");
        let g = parse2("x1 - 1");
        assert_eq!(&f + &g, parse2("x1 + x2"));
    }

    #[test]
    fn mul_inverse_monomial() {
        let xinv = LaurentPolynomial::monomial(1, Exponent::new(vec![-1]), q(1));
        let x = LaurentPolynomial::variable(1, 0);
        assert!((&xinv * &x).is_one());
    }

    #[test]
    fn mul_hand_expansion() {
        // (x2+1) * x1^{-1} is the A2 lower-bound generator y1.
        let f = parse2("x2 + 1");
        let g = parse2("x1^-1");
        assert_eq!(&f * &g, parse2("x1^-1*x2 + x1^-1"));
    }

    #[test]
    fn mul_one_is_identity() {
        let f = parse2("2*x1^3*x2^-2 - 1/3");
        assert_eq!(&f * &LaurentPolynomial::one(2), f);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let f = LaurentPolynomial::one(2);
        let g = LaurentPolynomial::one(3);
        assert_eq!(
            f.checked_add(&g),
            Err(ArithmeticError::DimensionMismatch { left: 2, right: 3 })
        );
        assert!(f.checked_mul(&g).is_err());
    }

    #[test]
    fn exact_div_hand_factorization() {
        let f = parse2("x1*x2 + x1");
        let g = parse2("x2 + 1");
        assert_eq!(f.exact_div(&g).unwrap(), parse2("x1"));
    }

    #[test]
    fn exact_div_by_one() {
        let f = parse2("x1^-2*x2 - 5");
        assert_eq!(f.exact_div(&LaurentPolynomial::one(2)).unwrap(), f);
    }

    #[test]
    fn exact_div_by_monomial_always_succeeds() {
        // Monomials are units of the Laurent ring.
        let f = parse2("x2 + 1");
        let g = parse2("x1");
        assert_eq!(f.exact_div(&g).unwrap(), parse2("x1^-1*x2 + x1^-1"));
    }

    #[test]
    fn exact_div_reports_remainder() {
        let f = parse2("x2 + 1");
        let g = parse2("x1 + 1");
        match f.exact_div(&g) {
            Err(DivisionError::NotDivisible { remainder }) => {
                assert!(!remainder.is_zero());
            }
            other => panic!("expected divisibility error, got {other:?}"),
        }
    }

    #[test]
    fn exact_div_zero_divisor() {
        let f = parse2("x1");
        assert_eq!(
            f.exact_div(&LaurentPolynomial::zero(2)),
            Err(DivisionError::DivisionByZero)
        );
    }

    #[test]
    fn evaluate_boundary_point() {
        // P1 of the A2 seed vanishes at (0, -1).
        let f = parse2("x2 + 1");
        let p = [q(0), q(-1)];
        assert_eq!(f.evaluate(&p).unwrap(), q(0));
    }

    #[test]
    fn evaluate_coordinate() {
        let f = parse2("x1");
        assert_eq!(f.evaluate(&[q(2), q(3)]).unwrap(), q(2));
    }

    #[test]
    fn evaluate_zero_to_negative_power() {
        let f = parse2("x1^-1*x2");
        assert_eq!(
            f.evaluate(&[q(0), q(1)]),
            Err(EvalError::ZeroToNegativePower { index: 0 })
        );
    }

    #[test]
    fn render_sorted_descending() {
        let f = parse2("x1 + x2 + x1^-1 - 2");
        assert_eq!(f.render(), "x2 + x1 - 2 + x1^-1");
        assert_eq!(parse2(&f.render()), f);
    }

    #[test]
    fn render_rational_coefficients() {
        // (0,0) is lex-larger than (2,-1): the order reads the last index
        // first, so the constant leads.
        let f = parse2("3/2*x1^2*x2^-1 - 1/3");
        assert_eq!(f.render(), "-1/3 + 3/2*x1^2*x2^-1");
        assert_eq!(parse2(&f.render()), f);
    }

    #[test]
    fn coefficients_in_variable_reassemble() {
        let f = parse2("x1^-2*x2 + x1^-2 + 3*x1*x2 - x2^2");
        let parts = f.coefficients_in_variable(0);
        let mut total = LaurentPolynomial::zero(2);
        for (d, c) in &parts {
            let shift = LaurentPolynomial::monomial(2, Exponent::new(vec![*d, 0]), q(1));
            total = &total + &(c * &shift);
        }
        assert_eq!(total, f);
        assert!(parts.values().all(|c| c.terms.keys().all(|e| e[0] == 0)));
    }
}
