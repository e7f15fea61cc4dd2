//! Seeded random generators for property sweeps: skew-symmetrizable
//! exchange matrices, acyclic full-rank matrices with their cleared
//! inverse Poisson partners, random Laurent polynomials and torus
//! elements. Deterministic given the RNG, so CI runs are reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::exponent::Exponent;
use crate::intmat;
use crate::laurent::LaurentPolynomial;
use crate::poisson::{CompatiblePair, PoissonMatrix};
use crate::quantum::{TorusElement, VLaurent};
use crate::seed::ExchangeMatrix;

/// Random skew-symmetrizable `m x n` exchange matrix with entries in
/// `[-bound, bound]` and symmetrizer entries drawn from `{1, 2, 3}`.
pub fn random_skew_symmetrizable(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    bound: i64,
) -> ExchangeMatrix {
    assert!(m >= 1 && m <= n && bound >= 1);
    loop {
        let d: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let mut entries = vec![vec![0i64; n]; m];
        for i in 0..m {
            for j in i + 1..m {
                let g = num_integer::gcd(d[i], d[j]);
                let step_ij = d[j] / g;
                let step_ji = d[i] / g;
                let cap = (bound / step_ij).min(bound / step_ji);
                if cap == 0 {
                    continue;
                }
                let k = rng.gen_range(-cap..=cap);
                entries[i][j] = k * step_ij;
                entries[j][i] = -k * step_ji;
            }
            for j in m..n {
                entries[i][j] = rng.gen_range(-bound..=bound);
            }
        }
        if let Ok(matrix) = ExchangeMatrix::new(entries) {
            return matrix;
        }
    }
}

/// Random acyclic skew-symmetric full-rank `n x n` matrix (`n` even):
/// entries above the diagonal in `[-bound, bound]` oriented so positive
/// entries point upward, then conjugated by a random permutation.
pub fn random_acyclic_full_rank(rng: &mut impl Rng, n: usize, bound: i64) -> ExchangeMatrix {
    assert!(n % 2 == 0, "skew-symmetric full rank needs even n");
    loop {
        let mut entries = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(0..=bound);
                entries[i][j] = v;
                entries[j][i] = -v;
            }
        }
        let perm = random_permutation(rng, n);
        let mut shuffled = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                shuffled[perm[i]][perm[j]] = entries[i][j];
            }
        }
        if intmat::determinant(&shuffled).is_zero() {
            continue;
        }
        return ExchangeMatrix::new(shuffled).expect("skew-symmetric is symmetrizable");
    }
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// The compatible partner `Lambda = mu B^{-1}` with denominators cleared
/// to the least positive integer `mu`; returns the pair and `mu`.
pub fn cleared_inverse_pair(matrix: &ExchangeMatrix) -> (CompatiblePair, i64) {
    let inv = intmat::inverse(matrix.entries()).expect("matrix has full rank");
    let (cleared, mu) = intmat::clear_denominators(&inv);
    let entries: Vec<Vec<i64>> = cleared
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| i64::try_from(v.clone()).expect("cleared inverse entry fits i64"))
                .collect()
        })
        .collect();
    let lambda = PoissonMatrix::new(entries).expect("inverse of skew-symmetric is skew");
    let mu: i64 = mu.try_into().expect("denominator multiplier fits i64");
    let pair = CompatiblePair::check(matrix.clone(), lambda)
        .expect("B * (mu B^{-1}) = mu I is compatible");
    (pair, mu)
}

/// Random nonzero rational with numerator in `[-9, 9]` and denominator in
/// `[1, 4]`.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let numer = loop {
        let v = rng.gen_range(-9i64..=9);
        if v != 0 {
            break v;
        }
    };
    let denom = rng.gen_range(1i64..=4);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Random Laurent polynomial with at most `max_terms` terms and exponents
/// in `[-range, range]`; may be zero only if `allow_zero`.
pub fn random_laurent(
    rng: &mut impl Rng,
    n: usize,
    max_terms: usize,
    range: i64,
    allow_zero: bool,
) -> LaurentPolynomial {
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let poly = LaurentPolynomial::from_terms(
            n,
            (0..terms).map(|_| {
                let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
                (Exponent::new(exps), random_rational(rng))
            }),
        );
        if allow_zero || !poly.is_zero() {
            return poly;
        }
    }
}

/// Random full-rank skew-symmetric Poisson matrix (`n` even) with entries
/// in `[-bound, bound]`.
pub fn random_full_rank_lambda(rng: &mut impl Rng, n: usize, bound: i64) -> PoissonMatrix {
    assert!(n % 2 == 0, "full-rank skew-symmetric needs even n");
    loop {
        let mut entries = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(-bound..=bound);
                entries[i][j] = v;
                entries[j][i] = -v;
            }
        }
        if intmat::rank_bareiss(&entries) == n {
            return PoissonMatrix::new(entries).unwrap();
        }
    }
}

/// Random quantum torus element with at most `max_terms` terms, exponents
/// in `[-range, range]`, and small `v`-Laurent coefficients.
pub fn random_torus_element(
    rng: &mut impl Rng,
    lambda: &PoissonMatrix,
    max_terms: usize,
    range: i64,
) -> TorusElement {
    let n = lambda.n();
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let element = TorusElement::from_terms(
            lambda.clone(),
            (0..terms).map(|_| {
                let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
                (Exponent::new(exps), random_vlaurent(rng))
            }),
        );
        if !element.is_zero() {
            return element;
        }
    }
}

/// Random small element of `Z[v^{±1}]`, never zero.
pub fn random_vlaurent(rng: &mut impl Rng) -> VLaurent {
    loop {
        let terms = rng.gen_range(1..=2);
        let v = VLaurent::from_terms((0..terms).map(|_| {
            (rng.gen_range(-3i64..=3), BigInt::from(rng.gen_range(-4i64..=4)))
        }));
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random point with all coordinates nonzero.
pub fn random_generic_point(rng: &mut impl Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

/// Construct a boundary point for direction `i`: `p_i = 0`, all other
/// coordinates nonzero, and `P_i(p) = 0`, by scaling a coordinate where
/// the two exchange exponents differ by `±1`. Returns `None` when row `i`
/// admits no such coordinate.
pub fn boundary_point(
    rng: &mut impl Rng,
    matrix: &ExchangeMatrix,
    i: usize,
) -> Option<Vec<BigRational>> {
    let n = matrix.n();
    let row = matrix.row(i);
    let k = (0..n).find(|&k| k != i && row[k].abs() == 1)?;
    for _ in 0..64 {
        let mut p: Vec<BigRational> = (0..n).map(|_| random_rational(rng)).collect();
        p[i] = BigRational::zero();
        // P_i(p) = m^+(p) + m^-(p) = 0 solved for p_k: the ratio
        // m^+/m^- is C * p_k^{b_ik}, so set p_k to the exact root.
        let mut plus = BigRational::one();
        let mut minus = BigRational::one();
        for j in 0..n {
            if j == k || row[j] == 0 {
                continue;
            }
            let b = row[j];
            let factor = rational_pow(&p[j], b.unsigned_abs());
            if b > 0 {
                plus *= &factor;
            } else {
                minus *= &factor;
            }
        }
        if plus.is_zero() || minus.is_zero() {
            continue;
        }
        let target = -(minus / plus);
        if target.is_zero() {
            continue;
        }
        p[k] = if row[k] == 1 { target } else { target.recip() };
        return Some(p);
    }
    None
}

fn rational_pow(base: &BigRational, k: u64) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(m..=5);
            let b = random_skew_symmetrizable(&mut rng, m, n, 3);
            assert!(b.entries().iter().flatten().all(|&v| v.abs() <= 3));
        }
        for _ in 0..20 {
            let b = random_acyclic_full_rank(&mut rng, 4, 3);
            assert!(b.acyclicity().is_acyclic());
            let (pair, mu) = cleared_inverse_pair(&b);
            assert!(mu > 0);
            assert!(pair.d().iter().all(|&d| d == mu));
        }
    }

    #[test]
    fn boundary_points_satisfy_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = random_acyclic_full_rank(&mut rng, 4, 1);
        let seed = crate::seed::Seed::initial(b.clone());
        for i in 0..4 {
            if let Some(p) = boundary_point(&mut rng, &b, i) {
                assert!(p[i].is_zero());
                let data = seed.exchange_data(i);
                assert!(data.polynomial().evaluate(&p).unwrap().is_zero());
            }
        }
    }
}
