//! The quantum torus, based toric frames, q-binomials, quantum seed
//! mutation, quasi-commutation verification, classical specialization, and
//! the quantum monomial-extraction and descent arguments.

mod torus;
mod vlaurent;

pub use torus::{parse_torus_element, parse_vlaurent, TorusElement, TorusError};
pub use vlaurent::{q_binomial, VLaurent};

use std::fmt;

use crate::exponent::Exponent;
use crate::poisson::{
    descent_certificate_of_pair, CompatiblePair, CompatibilityRefusal, DescentCertificate,
    DescentError, PoissonMatrix,
};
use crate::seed::ExchangeMatrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuantumError {
    Incompatible(CompatibilityRefusal),
    /// A frame argument has a negative entry in a direction that is not an
    /// invertible frozen variable.
    UnsupportedDirection { index: usize },
    /// A toric-frame argument leaves the admissible cone away from the
    /// mutation direction.
    UnsupportedArgument { index: usize, entry: i64 },
    Torus(TorusError),
    IndexOutOfRange { index: usize, m: usize },
}

impl fmt::Display for QuantumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumError::Incompatible(r) => write!(f, "pair is not compatible: {r}"),
            QuantumError::UnsupportedDirection { index } => {
                write!(f, "negative frame exponent at non-invertible direction {}", index + 1)
            }
            QuantumError::UnsupportedArgument { index, entry } => {
                write!(f, "frame argument entry {} at index {} is inadmissible", entry, index + 1)
            }
            QuantumError::Torus(e) => e.fmt(f),
            QuantumError::IndexOutOfRange { index, m } => {
                write!(f, "index {} out of range 1..={m}", index + 1)
            }
        }
    }
}

impl std::error::Error for QuantumError {}

impl From<TorusError> for QuantumError {
    fn from(e: TorusError) -> Self {
        QuantumError::Torus(e)
    }
}

/// A quantum seed: the commutation matrix of the current toric frame, the
/// exchange matrix, and the frame's cluster variables expressed in the
/// initial quantum torus. The symmetrizer entries `d_k` are the diagonal
/// of `B * Lambda_M`, which mutation preserves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumSeed {
    matrix: ExchangeMatrix,
    /// Commutation matrix of the current frame.
    frame_lambda: PoissonMatrix,
    /// Commutation matrix of the initial torus the variables live in.
    initial_lambda: PoissonMatrix,
    variables: Vec<TorusElement>,
    d: Vec<i64>,
    history: Vec<usize>,
}

impl QuantumSeed {
    /// Initial quantum seed over a compatible pair: variable `i` is the
    /// torus generator `X^{e_i}`.
    pub fn initial(
        matrix: ExchangeMatrix,
        lambda: PoissonMatrix,
    ) -> Result<QuantumSeed, QuantumError> {
        let pair = CompatiblePair::check(matrix, lambda).map_err(QuantumError::Incompatible)?;
        let n = pair.lambda().n();
        let variables = (0..n)
            .map(|i| TorusElement::generator(pair.lambda().clone(), i))
            .collect();
        Ok(QuantumSeed {
            matrix: pair.matrix().clone(),
            frame_lambda: pair.lambda().clone(),
            initial_lambda: pair.lambda().clone(),
            variables,
            d: pair.d().to_vec(),
            history: Vec::new(),
        })
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    /// Commutation matrix `Lambda_M` of the current frame.
    pub fn frame_lambda(&self) -> &PoissonMatrix {
        &self.frame_lambda
    }

    /// Commutation matrix of the ambient initial torus.
    pub fn initial_lambda(&self) -> &PoissonMatrix {
        &self.initial_lambda
    }

    pub fn variables(&self) -> &[TorusElement] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &TorusElement {
        &self.variables[i]
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    fn pair(&self) -> CompatiblePair {
        CompatiblePair::check(self.matrix.clone(), self.frame_lambda.clone())
            .expect("seed invariant: (B, Lambda_M) is compatible")
    }

    /// The normalized frame monomial
    /// `M(c) = v^{-sum_{i<j} c_i c_j (Lambda_M)_ij} Y_1^{c_1} ... Y_n^{c_n}`,
    /// which satisfies `M(a) M(b) = v^{a^T Lambda_M b} M(a+b)` on
    /// nonnegative arguments. Negative entries are admitted only on
    /// invertible (single-term, unit-coefficient) frozen directions.
    pub fn frame_monomial(&self, c: &Exponent) -> Result<TorusElement, QuantumError> {
        assert_eq!(c.len(), self.n(), "frame argument length must be n");
        let mut product = TorusElement::one(self.initial_lambda.clone());
        for i in 0..self.n() {
            let power = c[i];
            if power == 0 {
                continue;
            }
            let factor = if power > 0 {
                self.variables[i].pow(power as u32)
            } else {
                if i < self.m() {
                    return Err(QuantumError::UnsupportedDirection { index: i });
                }
                let inv = self.variables[i]
                    .invert_monomial()
                    .map_err(|_| QuantumError::UnsupportedDirection { index: i })?;
                inv.pow((-power) as u32)
            };
            product = product.mul(&factor);
        }
        let mut norm: i64 = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                norm += c[i] * c[j] * self.frame_lambda.entry(i, j);
            }
        }
        Ok(product.scaled(&VLaurent::v_power(-norm)))
    }

    /// Quantum seed mutation at `k`: the new variable is the exact left
    /// quotient by `Y_k` of `v^alpha M(u^+) + v^beta M(u^-)`, where `u^±`
    /// are the nonnegative parts of row `k` of `B` and `alpha, beta` are
    /// the exchange normalization exponents `Lambda_M(e_k, u^±)`. The
    /// quotient exists by the quantum Laurent phenomenon; failure is a
    /// corruption signal and is surfaced, never patched.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed, QuantumError> {
        if k >= self.m() {
            return Err(QuantumError::IndexOutOfRange { index: k, m: self.m() });
        }
        let n = self.n();
        let mut u_plus = vec![0i64; n];
        let mut u_minus = vec![0i64; n];
        for i in 0..n {
            let b = self.matrix.entry(k, i);
            if b > 0 {
                u_plus[i] = b;
            } else if b < 0 {
                u_minus[i] = -b;
            }
        }
        let u_plus = Exponent::new(u_plus);
        let u_minus = Exponent::new(u_minus);
        let alpha = self.frame_lambda.row_weight(k, &u_plus);
        let beta = self.frame_lambda.row_weight(k, &u_minus);
        let numerator = self
            .frame_monomial(&u_plus)?
            .scaled(&VLaurent::v_power(alpha))
            .add(&self.frame_monomial(&u_minus)?.scaled(&VLaurent::v_power(beta)));
        let new_variable = numerator.left_divide_exact(&self.variables[k])?;

        let mutated_pair = self.pair().mutate(k, 1);
        let mut variables = self.variables.clone();
        variables[k] = new_variable;
        let mut history = self.history.clone();
        history.push(k);
        debug_assert_eq!(mutated_pair.d(), &self.d[..]);
        Ok(QuantumSeed {
            matrix: mutated_pair.matrix().clone(),
            frame_lambda: mutated_pair.lambda().clone(),
            initial_lambda: self.initial_lambda.clone(),
            variables,
            d: mutated_pair.d().to_vec(),
            history,
        })
    }

    /// Apply a mutation sequence.
    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<QuantumSeed, QuantumError> {
        let mut seed = self.clone();
        for &k in ks {
            seed = seed.mutate(k)?;
        }
        Ok(seed)
    }
}

/// The mutated frame evaluated by the q-binomial sum:
/// `M_k(c) = sum_{p=0}^{c_k} binom(c_k, p)_{v^{d_k}} M(E_eps c + eps p b^k)`,
/// computed in the initial torus. The argument of each summand is
/// `-c_k e_k` plus a nonnegative vector, so the `e_k` part is factored out
/// through exact left division by `Y_k^{c_k}`; any other negativity is an
/// admissibility error. The result equals the corresponding monomial of
/// the mutated seed's frame and does not depend on `eps`.
pub fn toric_frame_image(
    seed: &QuantumSeed,
    k: usize,
    c: &Exponent,
    eps: i64,
) -> Result<TorusElement, QuantumError> {
    assert!(eps == 1 || eps == -1, "sign must be +1 or -1");
    if k >= seed.m() {
        return Err(QuantumError::IndexOutOfRange { index: k, m: seed.m() });
    }
    let n = seed.n();
    assert_eq!(c.len(), n, "frame argument length must be n");
    let ck = c[k];
    if ck < 0 {
        return Err(QuantumError::UnsupportedArgument { index: k, entry: ck });
    }
    let e_mat = crate::poisson::mutation_e_matrix(seed.matrix(), k, eps);
    let mut total = TorusElement::zero(seed.initial_lambda().clone());
    for p in 0..=ck {
        // w = E_eps c + eps p b^k + c_k e_k, which must be nonnegative.
        let mut w = vec![0i64; n];
        for i in 0..n {
            let mut entry: i64 = 0;
            for j in 0..n {
                entry += e_mat[i][j] * c[j];
            }
            entry += eps * p * seed.matrix().entry(k, i);
            if i == k {
                entry += ck;
                if entry != 0 {
                    return Err(QuantumError::UnsupportedArgument { index: i, entry });
                }
            } else if entry < 0 {
                return Err(QuantumError::UnsupportedArgument { index: i, entry });
            }
            w[i] = entry;
        }
        let w = Exponent::new(w);
        // M(w - c_k e_k) = v^{c_k e_k^T Lambda w} Y_k^{-c_k} M(w)
        let twist = ck * seed.frame_lambda().row_weight(k, &w);
        let binom = q_binomial(ck as u32, p as u32, seed.d()[k]);
        let summand = seed
            .frame_monomial(&w)?
            .scaled(&(&binom * &VLaurent::v_power(twist)));
        total = total.add(&summand);
    }
    if ck == 0 {
        return Ok(total);
    }
    let divisor = seed.variable(k).pow(ck as u32);
    Ok(total.left_divide_exact(&divisor)?)
}

/// Why a variable list fails to pairwise quasi-commute.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiCommutationRefusal {
    pub pair: (usize, usize),
}

impl fmt::Display for QuasiCommutationRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variables {} and {} do not quasi-commute by a power of t",
            self.pair.0 + 1,
            self.pair.1 + 1
        )
    }
}

impl std::error::Error for QuasiCommutationRefusal {}

/// For each pair, test `Y_i Y_j = t^c Y_j Y_i` by exact division of the
/// two products; returns the matrix of exponents `c` or a refusal naming
/// a non-quasi-commuting pair.
pub fn quasi_commutation_matrix(
    vars: &[TorusElement],
) -> Result<PoissonMatrix, QuasiCommutationRefusal> {
    let n = vars.len();
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let forward = vars[i].mul(&vars[j]);
            let backward = vars[j].mul(&vars[i]);
            match forward.t_multiple_of(&backward) {
                Some(c) => {
                    entries[i][j] = c;
                    entries[j][i] = -c;
                }
                None => return Err(QuasiCommutationRefusal { pair: (i, j) }),
            }
        }
    }
    Ok(PoissonMatrix::new(entries).expect("constructed skew-symmetric"))
}

/// One step of quantum monomial extraction inside a two-sided ideal:
/// `output = t^{t_exponent} * input - x_i * input * x_i^{-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumExtractionStep {
    pub index: usize,
    pub t_exponent: i64,
    pub input: TorusElement,
    pub output: TorusElement,
}

/// Verifiable trace of the quantum reduction to a monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumExtractionTrace {
    pub original: TorusElement,
    /// Left-multiplying monomial exponent that clears denominators.
    pub shift: Exponent,
    pub steps: Vec<QuantumExtractionStep>,
    pub result: Exponent,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuantumExtractionError {
    ZeroInput,
    RankDeficient { rank: usize, n: usize },
}

impl fmt::Display for QuantumExtractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumExtractionError::ZeroInput => {
                write!(f, "cannot extract a monomial from zero")
            }
            QuantumExtractionError::RankDeficient { rank, n } => {
                write!(f, "Lambda has rank {rank} < {n}; extraction needs full rank")
            }
        }
    }
}

impl std::error::Error for QuantumExtractionError {}

/// Quantum analogue of monomial extraction using two-sided ideal closure:
/// conjugation by `x_i` multiplies the term at `u` by `t^{lambda_i . u}`,
/// so `t^{c} f - x_i f x_i^{-1}` cancels the term whose weight is `c`.
/// Coefficients stay nonzero because the coefficient ring is a domain;
/// the term count strictly decreases each step.
pub fn quantum_extract_monomial(
    f: &TorusElement,
) -> Result<QuantumExtractionTrace, QuantumExtractionError> {
    if f.is_zero() {
        return Err(QuantumExtractionError::ZeroInput);
    }
    let lambda = f.lambda().clone();
    let rank = lambda.rank();
    if rank != lambda.n() {
        return Err(QuantumExtractionError::RankDeficient { rank, n: lambda.n() });
    }
    let min = Exponent::componentwise_min(f.terms().map(|(e, _)| e.clone()))
        .expect("f is nonzero");
    let shift = Exponent::new(min.entries().iter().map(|&e| (-e).max(0)).collect());
    let clearer = TorusElement::monomial(lambda.clone(), shift.clone(), VLaurent::one());
    let mut current = clearer.mul(f);
    let mut steps = Vec::new();
    while current.num_terms() >= 2 {
        let mut tail = current.terms().rev().map(|(e, _)| e.clone());
        let w0 = tail.next().expect("at least two terms");
        let w1 = tail.next().expect("at least two terms");
        drop(tail);
        let diff = &w0 - &w1;
        let index = (0..lambda.n())
            .find(|&i| lambda.row_weight(i, &diff) != 0)
            .expect("full-rank Lambda separates distinct exponents");
        let t_exponent = lambda.row_weight(index, &w1);
        let output = quantum_extraction_step(&current, index, t_exponent);
        debug_assert!(output.num_terms() < current.num_terms());
        steps.push(QuantumExtractionStep {
            index,
            t_exponent,
            input: current.clone(),
            output: output.clone(),
        });
        current = output;
    }
    let result = current.leading().expect("reduction preserves nonzeroness").0.clone();
    Ok(QuantumExtractionTrace { original: f.clone(), shift, steps, result })
}

fn quantum_extraction_step(f: &TorusElement, index: usize, t_exponent: i64) -> TorusElement {
    let scaled = f.scaled(&VLaurent::t_power(t_exponent));
    scaled.sub(&f.conjugated_by_generator(index))
}

/// Re-verify every recorded conjugation identity of a quantum trace.
pub fn verify_quantum_extraction(trace: &QuantumExtractionTrace) -> Result<(), String> {
    if !trace.shift.entries().iter().all(|&s| s >= 0) {
        return Err("denominator-clearing shift has a negative entry".into());
    }
    let lambda = trace.original.lambda().clone();
    let clearer = TorusElement::monomial(lambda, trace.shift.clone(), VLaurent::one());
    let mut expected = clearer.mul(&trace.original);
    for (k, step) in trace.steps.iter().enumerate() {
        if step.input != expected {
            return Err(format!("step {k} input does not chain from the previous output"));
        }
        let recomputed = quantum_extraction_step(&step.input, step.index, step.t_exponent);
        if recomputed != step.output {
            return Err(format!("step {k} output fails t^c f - x_i f x_i^{{-1}}"));
        }
        if step.output.num_terms() >= step.input.num_terms() {
            return Err(format!("step {k} does not strictly decrease the term count"));
        }
        if step.output.is_zero() {
            return Err(format!("step {k} collapsed to zero"));
        }
        expected = step.output.clone();
    }
    if !expected.is_monomial() {
        return Err("final element is not a monomial".into());
    }
    if expected.leading().unwrap().0 != &trace.result {
        return Err("recorded result exponent differs from the final monomial".into());
    }
    Ok(())
}

/// Quantum descent certificate: same chain shape as the classical one,
/// with the genericity premise now the linear independence of `x_i y_i`
/// and `y_i x_i`, i.e. distinct conjugation weights of the two exchange
/// monomials. The weights recorded per step are the pairings
/// `w^T Lambda e_i` of the local exchange exponents, exactly as in the
/// classical certificate; their difference is `(B Lambda)_ii = d_i`.
pub fn quantum_descent_certificate(
    seed: &QuantumSeed,
) -> Result<DescentCertificate, DescentError> {
    descent_certificate_of_pair(seed.matrix(), seed.frame_lambda(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPolynomial;
    use crate::poisson::verify_descent;
    use crate::seed::Seed;
    use num_bigint::BigInt;

    fn a2_seed() -> QuantumSeed {
        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        QuantumSeed::initial(b, lambda).unwrap()
    }

    fn exp2(a: i64, b: i64) -> Exponent {
        Exponent::new(vec![a, b])
    }

    #[test]
    fn frame_monomial_basics() {
        let seed = a2_seed();
        assert_eq!(
            seed.frame_monomial(&exp2(1, 0)).unwrap(),
            seed.variable(0).clone()
        );
        assert_eq!(
            seed.frame_monomial(&exp2(0, 0)).unwrap(),
            TorusElement::one(seed.initial_lambda().clone())
        );
        // M(e1+e2) = v * Y1 Y2 = X^{(1,1)} for lambda_12 = -1.
        let m = seed.frame_monomial(&exp2(1, 1)).unwrap();
        assert_eq!(
            m,
            TorusElement::monomial(
                seed.initial_lambda().clone(),
                exp2(1, 1),
                VLaurent::one()
            )
        );
    }

    #[test]
    fn frame_normalization_identity() {
        let seed = a2_seed();
        let a = exp2(1, 0);
        let b = exp2(0, 1);
        let lhs = seed
            .frame_monomial(&a)
            .unwrap()
            .mul(&seed.frame_monomial(&b).unwrap());
        let pairing = seed.frame_lambda().pairing(&a, &b);
        let rhs = seed
            .frame_monomial(&exp2(1, 1))
            .unwrap()
            .scaled(&VLaurent::v_power(pairing));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantum_mutation_a2() {
        let seed = a2_seed();
        let s1 = seed.mutate(0).unwrap();
        let expected = TorusElement::from_terms(
            seed.initial_lambda().clone(),
            [
                (exp2(-1, 1), VLaurent::one()),
                (exp2(-1, 0), VLaurent::one()),
            ],
        );
        assert_eq!(s1.variable(0), &expected);

        // x1 * X1' = v^{-1} X^{e2} + 1.
        let x1 = TorusElement::generator(seed.initial_lambda().clone(), 0);
        let check = x1.mul(s1.variable(0));
        let target = TorusElement::from_terms(
            seed.initial_lambda().clone(),
            [
                (exp2(0, 1), VLaurent::v_power(-1)),
                (exp2(0, 0), VLaurent::one()),
            ],
        );
        assert_eq!(check, target);
    }

    #[test]
    fn quantum_mutation_is_involutive() {
        let seed = a2_seed();
        for k in 0..2 {
            let back = seed.mutate(k).unwrap().mutate(k).unwrap();
            assert_eq!(back.variables(), seed.variables());
            assert_eq!(back.matrix(), seed.matrix());
            assert_eq!(back.frame_lambda(), seed.frame_lambda());
        }
    }

    #[test]
    fn specialization_matches_classical() {
        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let classical = Seed::initial(b).mutate(0).unwrap();
        let quantum = a2_seed().mutate(0).unwrap();
        assert_eq!(
            quantum.variable(0).specialize_v_one(),
            *classical.variable(0)
        );
        assert_eq!(
            quantum.variable(0).specialize_v_one(),
            LaurentPolynomial::parse("x1^-1*x2 + x1^-1", 2).unwrap()
        );
    }

    #[test]
    fn quasi_commutation_tracks_pair_mutation() {
        let seed = a2_seed();
        assert_eq!(
            &quasi_commutation_matrix(seed.variables()).unwrap(),
            seed.frame_lambda()
        );
        let s1 = seed.mutate(0).unwrap();
        assert_eq!(
            &quasi_commutation_matrix(s1.variables()).unwrap(),
            s1.frame_lambda()
        );
    }

    #[test]
    fn quasi_commutation_refusal() {
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let x1 = TorusElement::generator(lambda.clone(), 0);
        let x2_plus_one =
            TorusElement::generator(lambda.clone(), 1).add(&TorusElement::one(lambda));
        let err = quasi_commutation_matrix(&[x1, x2_plus_one]).unwrap_err();
        assert_eq!(err.pair, (0, 1));
    }

    #[test]
    fn toric_frame_image_matches_mutation() {
        let seed = a2_seed();
        let s1 = seed.mutate(0).unwrap();
        for eps in [1, -1] {
            let image = toric_frame_image(&seed, 0, &exp2(1, 0), eps).unwrap();
            assert_eq!(&image, s1.variable(0));
        }
        // c = e_j with j != k: the image is Y_j itself, both signs.
        for eps in [1, -1] {
            let image = toric_frame_image(&seed, 0, &exp2(0, 1), eps).unwrap();
            assert_eq!(&image, seed.variable(1));
        }
    }

    #[test]
    fn toric_frame_image_disconnected_direction() {
        // Frozen third direction with b_{13} = 0: exchange-disconnected.
        let b = ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, 0]]).unwrap();
        let lambda = PoissonMatrix::new(vec![
            vec![0, -1, 0],
            vec![1, 0, 0],
            vec![0, 0, 0],
        ])
        .unwrap();
        let seed = QuantumSeed::initial(b, lambda).unwrap();
        let image = toric_frame_image(&seed, 0, &Exponent::new(vec![0, 0, 1]), 1).unwrap();
        assert_eq!(&image, seed.variable(2));
    }

    #[test]
    fn extraction_example() {
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let f = TorusElement::from_terms(
            lambda.clone(),
            [
                (exp2(1, 0), VLaurent::one()),
                (exp2(0, 1), VLaurent::one()),
            ],
        );
        let trace = quantum_extract_monomial(&f).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].index, 0);
        assert_eq!(trace.steps[0].t_exponent, 0);
        // One step: (1 - t^{-1}) X^{e2}.
        let out = &trace.steps[0].output;
        assert_eq!(out.num_terms(), 1);
        let (e, c) = out.leading().unwrap();
        assert_eq!(e, &exp2(0, 1));
        assert_eq!(
            c,
            &VLaurent::from_terms([(0, BigInt::from(1)), (-2, BigInt::from(-1))])
        );
        verify_quantum_extraction(&trace).unwrap();
    }

    #[test]
    fn extraction_monomial_input() {
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let f = TorusElement::monomial(lambda, exp2(-2, 1), VLaurent::v_power(3));
        let trace = quantum_extract_monomial(&f).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.result, exp2(0, 1));
        verify_quantum_extraction(&trace).unwrap();
    }

    #[test]
    fn quantum_descent_a2() {
        let cert = quantum_descent_certificate(&a2_seed()).unwrap();
        verify_descent(&cert).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert!(cert.steps[0].support.is_empty());
        assert_eq!(cert.steps[1].support, vec![0]);
    }

    #[test]
    fn skew_symmetrizable_walk_stays_coherent() {
        // B2-type pair: d = (1, 2), so the mutation at direction 2 uses
        // weight-2 q-binomials. Along an alternating walk the quantum
        // variables must stay bar-symmetric, specialize to the classical
        // walk, and quasi-commute by the mutated frame matrix.
        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-2, 0]]).unwrap();
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let mut quantum = QuantumSeed::initial(b.clone(), lambda.clone()).unwrap();
        assert_eq!(quantum.d(), &[1, 2]);
        let mut classical = Seed::initial(b);
        for step in 0..6 {
            let k = step % 2;
            quantum = quantum.mutate(k).unwrap();
            classical = classical.mutate(k).unwrap();
            for i in 0..2 {
                assert!(quantum.variable(i).is_bar_symmetric(), "step {step}, var {i}");
                assert_eq!(
                    quantum.variable(i).specialize_v_one(),
                    *classical.variable(i),
                    "step {step}, var {i}"
                );
            }
            let qc = quasi_commutation_matrix(quantum.variables()).unwrap();
            assert_eq!(&qc, quantum.frame_lambda(), "step {step}");
        }
    }

    #[test]
    fn commutator_derivative_on_cluster_variables() {
        // d/dv (FG - GF) at v = 1 equals 2 {f, g} on actual quantum
        // cluster variables, not just on monomials.
        let seed = a2_seed();
        let mutated = seed.mutate(0).unwrap();
        let f = mutated.variable(0);
        let g = seed.variable(1);
        let commutator = f.mul(g).sub(&g.mul(f));
        let classical = crate::poisson::bracket(
            &f.specialize_v_one(),
            &g.specialize_v_one(),
            seed.initial_lambda(),
        )
        .unwrap();
        use num_rational::BigRational;
        assert_eq!(
            commutator.v_derivative_at_one(),
            classical.scaled(&BigRational::from_integer(BigInt::from(2)))
        );
    }
}
