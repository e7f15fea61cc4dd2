//! Elements of the based quantum torus: finite sums of normalized
//! monomials `X^e` with coefficients in `Z[v^{±1}]`, multiplied by
//! `X^a X^b = v^{a^T Lambda b} X^{a+b}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exponent::Exponent;
use crate::laurent::LaurentPolynomial;
use crate::poisson::PoissonMatrix;
use crate::quantum::vlaurent::VLaurent;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TorusError {
    CommutationMismatch,
    /// Exact left division failed; quantum mutation treats this as a
    /// corruption signal, never something to patch over.
    NotLeftDivisible { remainder: Box<TorusElement> },
    DivisionByZero,
    NotInvertible,
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::CommutationMismatch => {
                write!(f, "operands live over different commutation matrices")
            }
            TorusError::NotLeftDivisible { remainder } => {
                write!(f, "exact left division failed; remainder {remainder}")
            }
            TorusError::DivisionByZero => write!(f, "division by the zero element"),
            TorusError::NotInvertible => {
                write!(f, "only single-term elements with unit coefficient are invertible")
            }
        }
    }
}

impl std::error::Error for TorusError {}

/// A quantum torus element over an ambient commutation matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusElement {
    lambda: PoissonMatrix,
    terms: BTreeMap<Exponent, VLaurent>,
}

impl TorusElement {
    pub fn zero(lambda: PoissonMatrix) -> Self {
        TorusElement { lambda, terms: BTreeMap::new() }
    }

    pub fn one(lambda: PoissonMatrix) -> Self {
        let n = lambda.n();
        Self::monomial(lambda, Exponent::zero(n), VLaurent::one())
    }

    pub fn monomial(lambda: PoissonMatrix, exponent: Exponent, coeff: VLaurent) -> Self {
        assert_eq!(exponent.len(), lambda.n(), "exponent length must match ambient n");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        TorusElement { lambda, terms }
    }

    /// The generator `x_{i+1} = X^{e_i}`.
    pub fn generator(lambda: PoissonMatrix, i: usize) -> Self {
        let n = lambda.n();
        Self::monomial(lambda, Exponent::unit(n, i), VLaurent::one())
    }

    pub fn from_terms(
        lambda: PoissonMatrix,
        terms: impl IntoIterator<Item = (Exponent, VLaurent)>,
    ) -> Self {
        let mut out = Self::zero(lambda);
        for (e, c) in terms {
            out.accumulate(e, c);
        }
        out
    }

    pub fn lambda(&self) -> &PoissonMatrix {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &VLaurent)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> VLaurent {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Exponent, &VLaurent)> {
        self.terms.iter().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn accumulate(&mut self, e: Exponent, c: VLaurent) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.n());
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<(), TorusError> {
        if self.lambda == other.lambda {
            Ok(())
        } else {
            Err(TorusError::CommutationMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        TorusElement {
            lambda: self.lambda.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Scale by a central coefficient.
    pub fn scaled(&self, c: &VLaurent) -> Self {
        if c.is_zero() {
            return Self::zero(self.lambda.clone());
        }
        TorusElement {
            lambda: self.lambda.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Noncommutative product: `X^a X^b = v^{a^T Lambda b} X^{a+b}`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(self.lambda.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let twist = VLaurent::v_power(self.lambda.pairing(a, b));
                out.accumulate(a + b, &(ca * cb) * &twist);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("commutation matrices agree")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("commutation matrices agree")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("commutation matrices agree")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.lambda.clone());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Inverse of a single-term element with unit coefficient:
    /// `(s v^j X^e)^{-1} = s v^{-j} X^{-e}` (the twist cancels since
    /// `e^T Lambda e = 0`).
    pub fn invert_monomial(&self) -> Result<Self, TorusError> {
        let (e, c) = match self.terms.iter().next() {
            Some(pair) if self.terms.len() == 1 => pair,
            _ => return Err(TorusError::NotInvertible),
        };
        let (j, positive) = c.as_unit().ok_or(TorusError::NotInvertible)?;
        let coeff = if positive {
            VLaurent::v_power(-j)
        } else {
            -&VLaurent::v_power(-j)
        };
        Ok(Self::monomial(self.lambda.clone(), -e, coeff))
    }

    /// Conjugation by a generator: `x_i f x_i^{-1}` multiplies the term at
    /// `u` by `t^{lambda_i . u}` and fixes exponents.
    pub fn conjugated_by_generator(&self, i: usize) -> Self {
        TorusElement {
            lambda: self.lambda.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let w = self.lambda.row_weight(i, e);
                    (e.clone(), c * &VLaurent::t_power(w))
                })
                .collect(),
        }
    }

    /// Exact left division: the unique `q` with `divisor * q = self`.
    /// Leading exponents are additive (the coefficient ring is a domain
    /// and twists are units), so lex-leading-term elimination applies; the
    /// candidate quotient exponents strictly decrease inside the finite
    /// componentwise box `[min(R) - min(Y), max(R) - max(Y)]`, which
    /// bounds the search and makes failure a definite verdict.
    pub fn left_divide_exact(&self, divisor: &Self) -> Result<Self, TorusError> {
        self.check_ambient(divisor)?;
        if divisor.is_zero() {
            return Err(TorusError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.lambda.clone()));
        }
        let n = self.n();
        let box_low: Vec<i64> = (0..n)
            .map(|j| self.min_exp(j) - divisor.min_exp(j))
            .collect();
        let box_high: Vec<i64> = (0..n)
            .map(|j| self.max_exp(j) - divisor.max_exp(j))
            .collect();
        if box_low.iter().zip(&box_high).any(|(lo, hi)| lo > hi) {
            return Err(TorusError::NotLeftDivisible { remainder: Box::new(self.clone()) });
        }
        let (y_lead, y_coeff) = divisor.leading().expect("divisor is nonzero");
        let y_lead = y_lead.clone();
        let y_coeff = y_coeff.clone();
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.lambda.clone());
        while let Some((r_lead, r_coeff)) = rem.leading() {
            let q_exp = r_lead - &y_lead;
            let in_box = q_exp
                .entries()
                .iter()
                .zip(box_low.iter().zip(&box_high))
                .all(|(&e, (&lo, &hi))| lo <= e && e <= hi);
            if !in_box {
                return Err(TorusError::NotLeftDivisible { remainder: Box::new(rem.clone()) });
            }
            // y_coeff * v^{y_lead . Lambda . q_exp} * q_coeff = r_coeff
            let twist = self.lambda.pairing(&y_lead, &q_exp);
            let target = r_coeff.shifted(-twist);
            let Some(q_coeff) = target.exact_div(&y_coeff) else {
                return Err(TorusError::NotLeftDivisible { remainder: Box::new(rem.clone()) });
            };
            let term = Self::monomial(self.lambda.clone(), q_exp, q_coeff);
            rem = rem.sub(&divisor.mul(&term));
            quotient = quotient.add(&term);
        }
        Ok(quotient)
    }

    fn min_exp(&self, j: usize) -> i64 {
        self.terms.keys().map(|e| e[j]).min().expect("nonzero element")
    }

    fn max_exp(&self, j: usize) -> i64 {
        self.terms.keys().map(|e| e[j]).max().expect("nonzero element")
    }

    /// Classical limit `v -> 1`, as a Laurent polynomial with (integer)
    /// rational coefficients.
    pub fn specialize_v_one(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.n(),
            self.terms.iter().map(|(e, c)| {
                (e.clone(), BigRational::from_integer(c.at_one()))
            }),
        )
    }

    /// Derivative with respect to `v` at `v = 1`, termwise.
    pub fn v_derivative_at_one(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.n(),
            self.terms.iter().map(|(e, c)| {
                (e.clone(), BigRational::from_integer(c.derivative_at_one()))
            }),
        )
    }

    /// The bar involution `v -> v^{-1}` applied to all coefficients (the
    /// normalized monomials `X^e` are bar-invariant).
    pub fn bar(&self) -> Self {
        TorusElement {
            lambda: self.lambda.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.bar())).collect(),
        }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        self.terms.values().all(VLaurent::is_bar_symmetric)
    }

    /// Test whether `self = t^c * other` for some integer `c`; returns the
    /// exponent on success.
    pub fn t_multiple_of(&self, other: &Self) -> Option<i64> {
        if self.is_zero() && other.is_zero() {
            return Some(0);
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (lead_e, lead_c) = self.leading()?;
        let (other_e, other_c) = other.leading()?;
        if lead_e != other_e {
            return None;
        }
        let ratio = lead_c.exact_div(other_c)?;
        let (k, positive) = ratio.as_unit()?;
        if !positive || k % 2 != 0 {
            return None;
        }
        if *self == other.scaled(&VLaurent::v_power(k)) {
            Some(k / 2)
        } else {
            None
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            // Peel the sign off single-term coefficients so terms join
            // with " - "; multi-term coefficients stay parenthesized.
            let (negative, body) = if c.num_terms() == 1 {
                let rendered = c.to_string();
                match rendered.strip_prefix('-') {
                    Some(stripped) => (true, stripped.to_string()),
                    None => (false, rendered),
                }
            } else {
                (false, format!("({c})"))
            };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, p)
                    }
                })
                .collect();
            let mut parts: Vec<String> = Vec::new();
            if !(body == "1" && !monomial.is_empty()) {
                parts.push(body);
            }
            parts.extend(monomial);
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Parse the grammar produced by [`TorusElement::render`]. The ambient
/// commutation matrix must be supplied; it is part of the element's
/// identity, not of the text.
pub fn parse_torus_element(input: &str, lambda: &PoissonMatrix) -> Result<TorusElement, String> {
    let n = lambda.n();
    let mut out = TorusElement::zero(lambda.clone());
    let mut rest = input.trim();
    if rest == "0" {
        return Ok(out);
    }
    let mut sign = 1i64;
    if let Some(stripped) = rest.strip_prefix('-') {
        sign = -1;
        rest = stripped.trim_start();
    }
    loop {
        let (term_src, remainder, next_sign) = split_term(rest);
        let (exp, coeff) = parse_quantum_term(term_src.trim(), n)?;
        let signed = if sign < 0 { -&coeff } else { coeff };
        out = out.add(&TorusElement::monomial(lambda.clone(), exp, signed));
        match remainder {
            None => break,
            Some(r) => {
                rest = r.trim_start();
                sign = next_sign;
            }
        }
    }
    Ok(out)
}

/// Split off the first top-level term; returns the term text, the rest
/// after its sign separator, and the sign of the following term.
fn split_term(src: &str) -> (&str, Option<&str>, i64) {
    let bytes = src.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => {
                let sign = if bytes[i] == b'+' { 1 } else { -1 };
                return (&src[..i], Some(&src[i + 1..]), sign);
            }
            _ => {}
        }
        i += 1;
    }
    (src, None, 1)
}

fn parse_quantum_term(src: &str, n: usize) -> Result<(Exponent, VLaurent), String> {
    let mut coeff = VLaurent::one();
    let mut exps = vec![0i64; n];
    for factor in split_factors(src) {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(format!("empty factor in {src:?}"));
        }
        if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
            coeff = &coeff * &parse_vlaurent(inner)?;
        } else if factor.starts_with('x') {
            let (idx, pow) = parse_var_power(factor)?;
            if idx == 0 || idx > n {
                return Err(format!("variable x{idx} out of range 1..={n}"));
            }
            exps[idx - 1] += pow;
        } else {
            coeff = &coeff * &parse_vlaurent(factor)?;
        }
    }
    Ok((Exponent::new(exps), coeff))
}

/// Split a term on `*` at paren depth zero.
fn split_factors(src: &str) -> Vec<&str> {
    let bytes = src.as_bytes();
    let mut depth = 0usize;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'*' if depth == 0 => {
                parts.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
}

fn parse_var_power(src: &str) -> Result<(usize, i64), String> {
    let body = &src[1..];
    let (idx_src, pow_src) = match body.split_once('^') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let idx: usize = idx_src
        .parse()
        .map_err(|_| format!("bad variable index in {src:?}"))?;
    let pow: i64 = match pow_src {
        Some(p) => p.parse().map_err(|_| format!("bad exponent in {src:?}"))?,
        None => 1,
    };
    Ok((idx, pow))
}

/// Parse an element of `Z[v^{±1}]`: integer terms and `c*v^k` terms joined
/// by `+`/`-`.
pub fn parse_vlaurent(src: &str) -> Result<VLaurent, String> {
    let mut out = VLaurent::zero();
    let src = src.trim();
    if src.is_empty() {
        return Err("empty coefficient".into());
    }
    let mut rest = src;
    let mut sign = 1i64;
    if let Some(stripped) = rest.strip_prefix('-') {
        sign = -1;
        rest = stripped.trim_start();
    }
    loop {
        let (term, remainder, next_sign) = split_term(rest);
        let (exp, coeff) = parse_vmono(term.trim())?;
        out = &out + &VLaurent::term(exp, coeff * BigInt::from(sign));
        match remainder {
            None => break,
            Some(r) => {
                rest = r.trim_start();
                sign = next_sign;
            }
        }
    }
    Ok(out)
}

fn parse_vmono(src: &str) -> Result<(i64, BigInt), String> {
    let mut coeff = BigInt::from(1);
    let mut exp = 0i64;
    for factor in src.split('*') {
        let factor = factor.trim();
        if let Some(body) = factor.strip_prefix('v') {
            exp += match body.strip_prefix('^') {
                Some(p) => p.parse::<i64>().map_err(|_| format!("bad v power in {src:?}"))?,
                None if body.is_empty() => 1,
                None => return Err(format!("bad v factor in {src:?}")),
            };
        } else {
            let c: BigInt = factor
                .parse()
                .map_err(|_| format!("bad integer {factor:?} in coefficient"))?;
            coeff *= c;
        }
    }
    Ok((exp, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda_a2() -> PoissonMatrix {
        PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn x(i: usize) -> TorusElement {
        TorusElement::generator(lambda_a2(), i)
    }

    #[test]
    fn product_twists() {
        // X^{e1} X^{e2} = v^{-1} X^{(1,1)} for lambda_12 = -1.
        let p = x(0).mul(&x(1));
        assert_eq!(p.num_terms(), 1);
        let (e, c) = p.leading().unwrap();
        assert_eq!(e, &Exponent::new(vec![1, 1]));
        assert_eq!(c, &VLaurent::v_power(-1));
    }

    #[test]
    fn monomial_inverse() {
        let xi = x(0);
        let inv = xi.invert_monomial().unwrap();
        assert_eq!(xi.mul(&inv), TorusElement::one(lambda_a2()));
        let sum = xi.add(&TorusElement::one(lambda_a2()));
        assert!(sum.invert_monomial().is_err());
    }

    #[test]
    fn generators_t_commute() {
        // x1 x2 = t^{lambda_12} x2 x1.
        let lhs = x(0).mul(&x(1));
        let rhs = x(1).mul(&x(0));
        assert_eq!(lhs.t_multiple_of(&rhs), Some(-1));
    }

    #[test]
    fn sum_does_not_t_commute_with_generator() {
        let f = x(0);
        let g = x(1).add(&TorusElement::one(lambda_a2()));
        let lhs = f.mul(&g);
        let rhs = g.mul(&f);
        assert_eq!(lhs.t_multiple_of(&rhs), None);
    }

    #[test]
    fn left_division_roundtrip() {
        let y = x(0).add(&x(1));
        let q = x(1).add(&TorusElement::one(lambda_a2()));
        let prod = y.mul(&q);
        assert_eq!(prod.left_divide_exact(&y).unwrap(), q);
        let bad = prod.add(&TorusElement::one(lambda_a2()));
        assert!(matches!(
            bad.left_divide_exact(&y),
            Err(TorusError::NotLeftDivisible { .. })
        ));
    }

    #[test]
    fn specialization_drops_v() {
        let f = x(0).mul(&x(1)).add(&TorusElement::one(lambda_a2()));
        let classical = f.specialize_v_one();
        assert_eq!(
            classical,
            LaurentPolynomial::parse("x1*x2 + 1", 2).unwrap()
        );
    }

    #[test]
    fn render_parse_roundtrip() {
        let f = x(0)
            .mul(&x(1))
            .add(&x(0).scaled(&VLaurent::from_terms([(1, BigInt::from(1)), (-1, BigInt::from(1))])))
            .add(&TorusElement::one(lambda_a2()).scaled(&VLaurent::from_integer(-3)));
        let text = f.render();
        let back = parse_torus_element(&text, &lambda_a2()).unwrap();
        assert_eq!(back, f);
    }
}
