//! Log-canonical Poisson brackets, compatible pairs and their mutation,
//! genericity checks, monomial extraction, descent certificates, and
//! bivector rank at rational points.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exponent::Exponent;
use crate::intmat;
use crate::laurent::{ArithmeticError, LaurentPolynomial};
use crate::seed::{Acyclicity, ExchangeMatrix, Seed};

/// Skew-symmetric integer coefficient matrix of a log-canonical bracket
/// `{x_i, x_j} = lambda_ij x_i x_j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PoissonMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PoissonMatrixError {
    NotSkewSymmetric { witness: (usize, usize) },
    NotSquare,
}

impl fmt::Display for PoissonMatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoissonMatrixError::NotSkewSymmetric { witness: (i, j) } => {
                write!(f, "coefficient matrix is not skew-symmetric at ({}, {})", i + 1, j + 1)
            }
            PoissonMatrixError::NotSquare => write!(f, "coefficient matrix must be square"),
        }
    }
}

impl std::error::Error for PoissonMatrixError {}

impl PoissonMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, PoissonMatrixError> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(PoissonMatrixError::NotSquare);
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != -entries[j][i] {
                    return Err(PoissonMatrixError::NotSkewSymmetric { witness: (i, j) });
                }
            }
        }
        Ok(PoissonMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        PoissonMatrix { n, entries: vec![vec![0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// The pairing `a^T Lambda b`.
    pub fn pairing(&self, a: &Exponent, b: &Exponent) -> i64 {
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += a[i] as i128 * self.entries[i][j] as i128 * b[j] as i128;
            }
        }
        acc.try_into().expect("bracket weight exceeds i64")
    }

    /// Row weight `e_i^T Lambda u`.
    pub fn row_weight(&self, i: usize, u: &Exponent) -> i64 {
        let mut acc: i128 = 0;
        for j in 0..self.n {
            acc += self.entries[i][j] as i128 * u[j] as i128;
        }
        acc.try_into().expect("bracket weight exceeds i64")
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        intmat::rank_bareiss(&self.entries)
    }
}

/// The log-canonical bracket extended bilinearly to Laurent polynomials:
/// `{x^a, x^b} = (a^T Lambda b) x^{a+b}`. This is the unique biderivation
/// extending the bracket on the generators, and it is total and exact.
pub fn bracket(
    f: &LaurentPolynomial,
    g: &LaurentPolynomial,
    lambda: &PoissonMatrix,
) -> Result<LaurentPolynomial, ArithmeticError> {
    if f.num_vars() != g.num_vars() || f.num_vars() != lambda.n() {
        return Err(ArithmeticError::DimensionMismatch {
            left: f.num_vars().max(lambda.n()),
            right: g.num_vars(),
        });
    }
    let mut terms = Vec::new();
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            let w = lambda.pairing(a, b);
            if w != 0 {
                terms.push((a + b, ca * cb * BigRational::from_integer(BigInt::from(w))));
            }
        }
    }
    Ok(LaurentPolynomial::from_terms(f.num_vars(), terms))
}

/// A compatible pair `(B, Lambda)`: `B * Lambda` is zero off the diagonal
/// and its principal diagonal entries `d_i` are positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompatiblePair {
    matrix: ExchangeMatrix,
    lambda: PoissonMatrix,
    product: Vec<Vec<i64>>,
    d: Vec<i64>,
}

/// Why a pair `(B, Lambda)` is not compatible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CompatibilityRefusal {
    OffDiagonal { row: usize, col: usize, value: i64 },
    NonPositiveDiagonal { index: usize, value: i64 },
    DimensionMismatch { matrix_cols: usize, lambda_n: usize },
}

impl fmt::Display for CompatibilityRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompatibilityRefusal::OffDiagonal { row, col, value } => {
                write!(f, "(B*Lambda)[{},{}] = {} is nonzero off the diagonal", row + 1, col + 1, value)
            }
            CompatibilityRefusal::NonPositiveDiagonal { index, value } => {
                write!(f, "(B*Lambda)[{0},{0}] = {1} is not positive", index + 1, value)
            }
            CompatibilityRefusal::DimensionMismatch { matrix_cols, lambda_n } => {
                write!(f, "B has {matrix_cols} columns but Lambda is {lambda_n}x{lambda_n}")
            }
        }
    }
}

impl std::error::Error for CompatibilityRefusal {}

impl CompatiblePair {
    /// Check compatibility by direct multiplication. The full-rank property
    /// of `B * Lambda` is recorded as a post-check (it always holds when
    /// the diagonal is positive).
    pub fn check(
        matrix: ExchangeMatrix,
        lambda: PoissonMatrix,
    ) -> Result<CompatiblePair, CompatibilityRefusal> {
        if matrix.n() != lambda.n() {
            return Err(CompatibilityRefusal::DimensionMismatch {
                matrix_cols: matrix.n(),
                lambda_n: lambda.n(),
            });
        }
        let product = intmat::multiply(matrix.entries(), lambda.entries());
        for (i, row) in product.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    if v <= 0 {
                        return Err(CompatibilityRefusal::NonPositiveDiagonal { index: i, value: v });
                    }
                } else if v != 0 {
                    return Err(CompatibilityRefusal::OffDiagonal { row: i, col: j, value: v });
                }
            }
        }
        let d: Vec<i64> = (0..matrix.m()).map(|i| product[i][i]).collect();
        debug_assert_eq!(intmat::rank_bareiss(&product), matrix.m());
        Ok(CompatiblePair { matrix, lambda, product, d })
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn lambda(&self) -> &PoissonMatrix {
        &self.lambda
    }

    pub fn product(&self) -> &[Vec<i64>] {
        &self.product
    }

    /// The positive diagonal `d_1..d_m` of `B * Lambda`.
    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// Mutation of the pair at exchangeable index `k` with sign `eps`:
    /// `B_k = F^T B E^T`, `Lambda_k = E^T Lambda E`. The result is again
    /// compatible with the same diagonal, `Lambda_k` does not depend on
    /// the sign, and `B_k` agrees with plain matrix mutation.
    pub fn mutate(&self, k: usize, eps: i64) -> CompatiblePair {
        assert!(k < self.matrix.m(), "mutation index out of range");
        assert!(eps == 1 || eps == -1, "sign must be +1 or -1");
        let e = self.e_matrix(k, eps);
        let f = self.f_matrix(k, eps);
        let et = intmat::transpose(&e);
        let ft = intmat::transpose(&f);
        let new_b = intmat::multiply(&ft, &intmat::multiply(self.matrix.entries(), &et));
        let new_lambda = intmat::multiply(&et, &intmat::multiply(self.lambda.entries(), &e));
        let matrix = ExchangeMatrix::new(new_b).expect("mutated matrix stays skew-symmetrizable");
        let lambda = PoissonMatrix::new(new_lambda).expect("mutated Lambda stays skew-symmetric");
        CompatiblePair::check(matrix, lambda).expect("pair mutation preserves compatibility")
    }

    fn e_matrix(&self, k: usize, eps: i64) -> Vec<Vec<i64>> {
        mutation_e_matrix(&self.matrix, k, eps)
    }

    /// `F_{k,eps}`: identity except in row `k`, where the diagonal entry is
    /// -1 and column `j` holds `max(0, eps * b_{jk})`.
    fn f_matrix(&self, k: usize, eps: i64) -> Vec<Vec<i64>> {
        let m = self.matrix.m();
        let mut f = intmat::identity(m);
        for j in 0..m {
            f[k][j] = if j == k {
                -1
            } else {
                0.max(eps * self.matrix.entry(j, k))
            };
        }
        f
    }
}

/// `E_{k,eps}`: identity except in column `k`, where the diagonal entry is
/// -1 and row `i` holds `max(0, -eps * b_{ki})` (the exchange-matrix entry
/// read along row `k`, which covers frozen indices as well).
pub(crate) fn mutation_e_matrix(matrix: &ExchangeMatrix, k: usize, eps: i64) -> Vec<Vec<i64>> {
    let n = matrix.n();
    let mut e = intmat::identity(n);
    for i in 0..n {
        e[i][k] = if i == k { -1 } else { 0.max(-eps * matrix.entry(k, i)) };
    }
    e
}

/// The bracket weights of the two exchange monomials against `x_{i+1}`:
/// `{y_i, x_i} = mu_plus * m_i^+ + mu_minus * m_i^-` in the seed's own
/// cluster coordinates, with `mu = w^T Lambda e_i` for the respective
/// local exponents `w`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExchangeWeights {
    pub index: usize,
    pub mu_plus: i64,
    pub mu_minus: i64,
}

impl ExchangeWeights {
    pub fn distinct(&self) -> bool {
        self.mu_plus != self.mu_minus
    }
}

pub fn exchange_weights(seed: &Seed, lambda: &PoissonMatrix, i: usize) -> ExchangeWeights {
    exchange_weights_of_matrix(seed.matrix(), lambda, i)
}

pub fn exchange_weights_of_matrix(
    matrix: &ExchangeMatrix,
    lambda: &PoissonMatrix,
    i: usize,
) -> ExchangeWeights {
    assert!(i < matrix.m(), "exchange index out of range");
    assert_eq!(matrix.n(), lambda.n(), "ambient dimension mismatch");
    let (plus, minus) = local_exchange_exponents(matrix, i);
    let ei = Exponent::unit(matrix.n(), i);
    ExchangeWeights {
        index: i,
        mu_plus: lambda.pairing(&plus, &ei),
        mu_minus: lambda.pairing(&minus, &ei),
    }
}

/// Local exponents of `m_i^+` and `m_i^-` in the seed's own coordinates.
pub fn local_exchange_exponents(matrix: &ExchangeMatrix, i: usize) -> (Exponent, Exponent) {
    let n = matrix.n();
    let mut plus = vec![0i64; n];
    let mut minus = vec![0i64; n];
    for k in 0..n {
        let b = matrix.entry(i, k);
        if b > 0 {
            plus[k] = b;
        } else if b < 0 {
            minus[k] = -b;
        }
    }
    (Exponent::new(plus), Exponent::new(minus))
}

/// Per-row outcome of the literal genericity sum
/// `sum_j (B^{-1})_ij (max(b_ij,0) + min(b_ij,0))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LiteralGenericity {
    pub index: usize,
    pub value: BigRational,
    pub nonzero: bool,
}

/// Combined report of the literal sum and the semantic condition
/// `mu_plus != mu_minus`; disagreements are surfaced, never resolved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenericityReport {
    /// `None` when `B` is singular or not square (the literal sum needs
    /// `B^{-1}`); the semantic check is still performed.
    pub literal: Option<Vec<LiteralGenericity>>,
    pub semantic: Vec<ExchangeWeights>,
    /// Rows where exactly one of the two verdicts holds.
    pub disagreements: Vec<usize>,
}

impl GenericityReport {
    pub fn semantic_passes(&self) -> bool {
        self.semantic.iter().all(ExchangeWeights::distinct)
    }
}

pub fn genericity_check(matrix: &ExchangeMatrix, lambda: &PoissonMatrix) -> GenericityReport {
    let semantic: Vec<ExchangeWeights> = (0..matrix.m())
        .map(|i| exchange_weights_of_matrix(matrix, lambda, i))
        .collect();
    let literal = if matrix.is_square() {
        intmat::inverse(matrix.entries()).map(|inv| {
            (0..matrix.m())
                .map(|i| {
                    let mut value = BigRational::zero();
                    for j in 0..matrix.n() {
                        let b = matrix.entry(i, j);
                        // max(b,0) + min(b,0), kept in the literal split form.
                        let split = b.max(0) + b.min(0);
                        value += &inv[i][j] * BigRational::from_integer(BigInt::from(split));
                    }
                    let nonzero = !value.is_zero();
                    LiteralGenericity { index: i, value, nonzero }
                })
                .collect::<Vec<_>>()
        })
    } else {
        None
    };
    let disagreements = match &literal {
        Some(rows) => rows
            .iter()
            .zip(&semantic)
            .filter(|(lit, sem)| lit.nonzero != sem.distinct())
            .map(|(lit, _)| lit.index)
            .collect(),
        None => Vec::new(),
    };
    GenericityReport { literal, semantic, disagreements }
}

/// One step of monomial extraction: `output = c * x_{index+1} * input -
/// {x_{index+1}, input}`, which cancels the targeted term and strictly
/// decreases the term count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtractionStep {
    pub index: usize,
    pub scalar: BigRational,
    pub input: LaurentPolynomial,
    pub output: LaurentPolynomial,
}

/// A verifiable trace of the reduction of `f` to a single monomial inside
/// the Poisson ideal generated by `f`. Each recorded step is itself the
/// ideal-membership proof.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtractionTrace {
    pub original: LaurentPolynomial,
    /// Monomial multiplier (componentwise nonnegative) that clears
    /// denominators before the steps.
    pub shift: Exponent,
    pub steps: Vec<ExtractionStep>,
    pub result: Exponent,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtractionError {
    ZeroInput,
    RankDeficient { rank: usize, n: usize },
}

impl fmt::Display for ExtractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractionError::ZeroInput => write!(f, "cannot extract a monomial from zero"),
            ExtractionError::RankDeficient { rank, n } => {
                write!(f, "Lambda has rank {rank} < {n}; extraction needs full rank")
            }
        }
    }
}

impl std::error::Error for ExtractionError {}

/// Reduce `f` to a monomial of the ideal it generates: clear denominators,
/// then repeatedly form `c x_i f - {x_i, f}` with `i` the smallest index
/// whose row weight separates the two lex-largest terms and `c` the
/// weight of the second-largest, which cancels that term and keeps the
/// largest.
pub fn extract_monomial(
    f: &LaurentPolynomial,
    lambda: &PoissonMatrix,
) -> Result<ExtractionTrace, ExtractionError> {
    if f.is_zero() {
        return Err(ExtractionError::ZeroInput);
    }
    let rank = lambda.rank();
    if rank != lambda.n() {
        return Err(ExtractionError::RankDeficient { rank, n: lambda.n() });
    }
    let shift = denominator_clearing_shift(f);
    let mut current = f.shifted(&shift);
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
        let scalar = BigRational::from_integer(BigInt::from(lambda.row_weight(index, &w1)));
        let output = extraction_step(&current, index, &scalar, lambda);
        debug_assert!(output.num_terms() < current.num_terms());
        steps.push(ExtractionStep {
            index,
            scalar,
            input: current.clone(),
            output: output.clone(),
        });
        current = output;
    }
    let result = current
        .leading()
        .expect("reduction preserves nonzeroness")
        .0
        .clone();
    Ok(ExtractionTrace { original: f.clone(), shift, steps, result })
}

/// The exponent of the monomial multiplier that clears all denominators
/// of `f` (componentwise `max(0, -min exponent)`).
fn denominator_clearing_shift(f: &LaurentPolynomial) -> Exponent {
    let min = Exponent::componentwise_min(f.terms().map(|(e, _)| e.clone()))
        .expect("f is nonzero");
    Exponent::new(min.entries().iter().map(|&e| (-e).max(0)).collect())
}

fn extraction_step(
    f: &LaurentPolynomial,
    index: usize,
    scalar: &BigRational,
    lambda: &PoissonMatrix,
) -> LaurentPolynomial {
    let xi = LaurentPolynomial::variable(f.num_vars(), index);
    let lead = (&xi * f).scaled(scalar);
    let br = bracket(&xi, f, lambda).expect("dimensions agree");
    &lead - &br
}

/// Re-verify every recorded step equation of a trace exactly, plus the
/// denominator clearing and the final monomial claim.
pub fn verify_extraction(trace: &ExtractionTrace, lambda: &PoissonMatrix) -> Result<(), String> {
    if !trace.shift.entries().iter().all(|&s| s >= 0) {
        return Err("denominator-clearing shift has a negative entry".into());
    }
    let mut expected = trace.original.shifted(&trace.shift);
    for (k, step) in trace.steps.iter().enumerate() {
        if step.input != expected {
            return Err(format!("step {k} input does not chain from the previous output"));
        }
        let recomputed = extraction_step(&step.input, step.index, &step.scalar, lambda);
        if recomputed != step.output {
            return Err(format!("step {k} output fails c*x_i*f - {{x_i, f}}"));
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
        return Err("final polynomial is not a monomial".into());
    }
    if expected.leading().unwrap().0 != &trace.result {
        return Err("recorded result exponent differs from the final monomial".into());
    }
    Ok(())
}

/// One link of a descent chain: if the cluster variable at `index` lies in
/// a Poisson prime ideal, then `m_index^-` does, hence some variable in
/// its support (all strictly smaller) does, or `1` does when the support
/// is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DescentStep {
    /// 0-based index in the acyclic ordering.
    pub index: usize,
    pub weights: ExchangeWeights,
    /// Local exponent of `m_index^-`; empty support means `1 in I`.
    pub minus_exponent: Exponent,
    /// Support of `minus_exponent`, strictly below `index`.
    pub support: Vec<usize>,
}

/// Machine-checkable certificate that no nontrivial Poisson prime ideal
/// survives: for every starting index, the chain
/// `x_i in I => m_i^- in I => x_h in I (h < i) => ... => 1 in I`
/// terminates because indices strictly decrease.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DescentCertificate {
    /// Permutation to the acyclic ordered form: `permutation[new] = old`.
    pub permutation: Vec<usize>,
    /// Exchange matrix in the ordered form.
    pub matrix: ExchangeMatrix,
    /// Poisson matrix in the ordered form.
    pub lambda: PoissonMatrix,
    pub steps: Vec<DescentStep>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DescentError {
    NotSquare { m: usize, n: usize },
    OddRank { n: usize },
    NotAcyclic { cycle: Vec<usize> },
    NotCompatible(CompatibilityRefusal),
    GenericityFailure { index: usize },
}

impl fmt::Display for DescentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescentError::NotSquare { m, n } => {
                write!(f, "descent requires trivial coefficients (m = n), got {m} x {n}")
            }
            DescentError::OddRank { n } => write!(f, "descent requires even rank, got n = {n}"),
            DescentError::NotAcyclic { cycle } => {
                write!(
                    f,
                    "exchange matrix has a directed cycle through {:?}",
                    cycle.iter().map(|i| i + 1).collect::<Vec<_>>()
                )
            }
            DescentError::NotCompatible(r) => write!(f, "pair is not compatible: {r}"),
            DescentError::GenericityFailure { index } => {
                write!(f, "mu_plus = mu_minus at index {}; descent premise fails", index + 1)
            }
        }
    }
}

impl std::error::Error for DescentError {}

/// Build the descent certificate under the theorem hypotheses: acyclic
/// matrix with trivial coefficients of even rank, compatible
/// `(B, Lambda)`, and distinct exchange weights everywhere. The acyclic
/// reordering is applied and recorded rather than assumed.
pub fn descent_certificate(
    seed: &Seed,
    lambda: &PoissonMatrix,
) -> Result<DescentCertificate, DescentError> {
    descent_certificate_of_pair(seed.matrix(), lambda, true)
}

/// Matrix-level certificate construction shared by the classical and
/// quantum descents; only the classical theorem states the even-rank
/// hypothesis explicitly (compatibility forces it anyway when `m = n`).
pub fn descent_certificate_of_pair(
    matrix: &ExchangeMatrix,
    lambda: &PoissonMatrix,
    require_even: bool,
) -> Result<DescentCertificate, DescentError> {
    if !matrix.is_square() {
        return Err(DescentError::NotSquare { m: matrix.m(), n: matrix.n() });
    }
    if require_even && matrix.n() % 2 != 0 {
        return Err(DescentError::OddRank { n: matrix.n() });
    }
    let order = match matrix.acyclicity() {
        Acyclicity::Acyclic { order } => order,
        Acyclicity::Cyclic { cycle } => return Err(DescentError::NotAcyclic { cycle }),
    };
    let (ordered_matrix, ordered_lambda) = permute_pair(matrix, lambda, &order);
    CompatiblePair::check(ordered_matrix.clone(), ordered_lambda.clone())
        .map_err(DescentError::NotCompatible)?;
    let steps = descent_steps(&ordered_matrix, &ordered_lambda)?;
    Ok(DescentCertificate {
        permutation: order,
        matrix: ordered_matrix,
        lambda: ordered_lambda,
        steps,
    })
}

fn descent_steps(
    matrix: &ExchangeMatrix,
    lambda: &PoissonMatrix,
) -> Result<Vec<DescentStep>, DescentError> {
    let n = matrix.n();
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let weights = exchange_weights_of_matrix(matrix, lambda, i);
        if !weights.distinct() {
            return Err(DescentError::GenericityFailure { index: i });
        }
        let (_, minus) = local_exchange_exponents(matrix, i);
        let support: Vec<usize> = (0..n).filter(|&k| minus[k] != 0).collect();
        steps.push(DescentStep { index: i, weights, minus_exponent: minus, support });
    }
    Ok(steps)
}

fn permute_pair(
    matrix: &ExchangeMatrix,
    lambda: &PoissonMatrix,
    order: &[usize],
) -> (ExchangeMatrix, PoissonMatrix) {
    let n = matrix.n();
    let mut b = vec![vec![0i64; n]; n];
    let mut l = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = matrix.entry(order[i], order[j]);
            l[i][j] = lambda.entry(order[i], order[j]);
        }
    }
    (
        ExchangeMatrix::new(b).expect("permutation preserves skew-symmetrizability"),
        PoissonMatrix::new(l).expect("permutation preserves skew-symmetry"),
    )
}

/// Independent validity check of a descent certificate: recomputes every
/// step from the recorded ordered pair, checks strict descent of support
/// indices, distinct weights, and that the ordered form has no positive
/// entry below the diagonal (so every chain is grounded at `1 in I`).
pub fn verify_descent(cert: &DescentCertificate) -> Result<(), String> {
    let matrix = &cert.matrix;
    let lambda = &cert.lambda;
    if !matrix.is_square() {
        return Err("certificate matrix is not square".into());
    }
    let n = matrix.n();
    if cert.steps.len() != n {
        return Err(format!("expected {n} steps, found {}", cert.steps.len()));
    }
    for i in 0..n {
        for j in 0..i {
            if matrix.entry(i, j) > 0 {
                return Err(format!(
                    "entry ({}, {}) is positive below the diagonal; form is not ordered",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    for (i, step) in cert.steps.iter().enumerate() {
        if step.index != i {
            return Err(format!("step {i} is labelled {}", step.index));
        }
        let weights = exchange_weights_of_matrix(matrix, lambda, i);
        if weights != step.weights {
            return Err(format!("step {i} records wrong exchange weights"));
        }
        if !weights.distinct() {
            return Err(format!("step {i} weights are equal; m^- is not forced into the ideal"));
        }
        let (_, minus) = local_exchange_exponents(matrix, i);
        if minus != step.minus_exponent {
            return Err(format!("step {i} records wrong m^- exponent"));
        }
        let support: Vec<usize> = (0..n).filter(|&k| step.minus_exponent[k] != 0).collect();
        if support != step.support {
            return Err(format!("step {i} records wrong support"));
        }
        if support.iter().any(|&h| h >= i) {
            return Err(format!("step {i} support does not strictly descend"));
        }
    }
    Ok(())
}

/// Exact rank of the Poisson bivector `M_ij = lambda_ij p_i p_j` at a
/// rational point, by fraction-free elimination.
pub fn bivector_rank_at(lambda: &PoissonMatrix, point: &[BigRational]) -> usize {
    let n = lambda.n();
    assert_eq!(point.len(), n, "point length must match Lambda");
    let m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    BigRational::from_integer(BigInt::from(lambda.entry(i, j)))
                        * &point[i]
                        * &point[j]
                })
                .collect()
        })
        .collect();
    intmat::rank_rational(&m)
}

/// Verdict of the boundary nondegeneracy check `{x_i, y_i}(p) != 0` at a
/// point of the exchange hypersurface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryVerdict {
    pub value: BigRational,
    pub nonzero: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundaryError {
    CoordinateNotZero { index: usize, value: BigRational },
    ExchangeNotVanishing { value: BigRational },
    EarlierCoordinateZero { index: usize },
    WrongPointLength { expected: usize, got: usize },
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryError::CoordinateNotZero { index, value } => {
                write!(f, "p_{} = {} but the boundary check needs p_i = 0", index + 1, value)
            }
            BoundaryError::ExchangeNotVanishing { value } => {
                write!(f, "P_i(p) = {value} != 0; p is off the exchange hypersurface")
            }
            BoundaryError::EarlierCoordinateZero { index } => {
                write!(f, "p_{} = 0 but all earlier coordinates must be nonzero", index + 1)
            }
            BoundaryError::WrongPointLength { expected, got } => {
                write!(f, "point has {got} coordinates, expected {expected}")
            }
        }
    }
}

impl std::error::Error for BoundaryError {}

/// Evaluate `{x_i, y_i}` at a boundary point `p` with `p_i = 0`,
/// `P_i(p) = 0`, and `p_j != 0` for all `j < i`. Both exchange monomials
/// are polynomials, so evaluation is total; under the theorem's
/// hypotheses the verdict must be nonzero.
pub fn boundary_nondegeneracy(
    seed: &Seed,
    lambda: &PoissonMatrix,
    i: usize,
    point: &[BigRational],
) -> Result<BoundaryVerdict, BoundaryError> {
    let n = seed.n();
    if point.len() != n {
        return Err(BoundaryError::WrongPointLength { expected: n, got: point.len() });
    }
    if !point[i].is_zero() {
        return Err(BoundaryError::CoordinateNotZero { index: i, value: point[i].clone() });
    }
    for j in 0..i {
        if point[j].is_zero() {
            return Err(BoundaryError::EarlierCoordinateZero { index: j });
        }
    }
    let data = seed.exchange_data(i);
    let p_value = data
        .polynomial()
        .evaluate(point)
        .expect("exchange monomials have nonnegative exponents");
    if !p_value.is_zero() {
        return Err(BoundaryError::ExchangeNotVanishing { value: p_value });
    }
    // {x_i, y_i} = -(mu_plus m_i^+ + mu_minus m_i^-); evaluate exactly.
    let weights = exchange_weights(seed, lambda, i);
    let plus = data.plus.evaluate(point).expect("m_i^+ is a polynomial");
    let minus = data.minus.evaluate(point).expect("m_i^- is a polynomial");
    let value = -(plus * BigRational::from_integer(BigInt::from(weights.mu_plus))
        + minus * BigRational::from_integer(BigInt::from(weights.mu_minus)));
    let nonzero = !value.is_zero();
    Ok(BoundaryVerdict { value, nonzero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn a2_lambda() -> PoissonMatrix {
        PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn parse(s: &str, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, n).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn bracket_definition_case() {
        let x1 = LaurentPolynomial::variable(2, 0);
        let x2 = LaurentPolynomial::variable(2, 1);
        assert_eq!(bracket(&x1, &x2, &a2_lambda()).unwrap(), parse("-x1*x2", 2));
        assert!(bracket(&x1, &x1, &a2_lambda()).unwrap().is_zero());
    }

    #[test]
    fn bracket_lower_bound_generator() {
        let y1 = parse("x1^-1*x2 + x1^-1", 2);
        let x1 = LaurentPolynomial::variable(2, 0);
        assert_eq!(bracket(&y1, &x1, &a2_lambda()).unwrap(), parse("x2", 2));
    }

    #[test]
    fn compatibility_examples() {
        let pair = CompatiblePair::check(a2(), a2_lambda()).unwrap();
        assert_eq!(pair.d(), &[1, 1]);

        let flipped = PoissonMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(
            CompatiblePair::check(a2(), flipped),
            Err(CompatibilityRefusal::NonPositiveDiagonal { index: 0, value: -1 })
        );
        assert!(matches!(
            CompatiblePair::check(a2(), PoissonMatrix::zero(2)),
            Err(CompatibilityRefusal::NonPositiveDiagonal { index: 0, value: 0 })
        ));
    }

    #[test]
    fn pair_mutation_a2() {
        let pair = CompatiblePair::check(a2(), a2_lambda()).unwrap();
        let mutated = pair.mutate(0, 1);
        assert_eq!(mutated.matrix().entries(), &[vec![0, -1], vec![1, 0]]);
        assert_eq!(mutated.lambda().entries(), &[vec![0, 1], vec![-1, 0]]);
        assert_eq!(mutated.product(), &[vec![1, 0], vec![0, 1]]);

        let other_sign = pair.mutate(0, -1);
        assert_eq!(mutated.lambda(), other_sign.lambda());
        assert_eq!(mutated.matrix(), other_sign.matrix());

        // Agrees with plain matrix mutation.
        assert_eq!(mutated.matrix(), &pair.matrix().mutate(0));
    }

    #[test]
    fn pair_mutation_is_involutive() {
        let pair = CompatiblePair::check(a2(), a2_lambda()).unwrap();
        let back = pair.mutate(0, 1).mutate(0, -1);
        assert_eq!(back.matrix(), pair.matrix());
        assert_eq!(back.lambda(), pair.lambda());
    }

    #[test]
    fn pair_mutation_skew_symmetrizable_with_frozen() {
        // B2-type principal block plus one frozen column; Lambda vanishes
        // on the frozen direction.
        let b = ExchangeMatrix::new(vec![vec![0, 1, 2], vec![-2, 0, -1]]).unwrap();
        let lambda = PoissonMatrix::new(vec![
            vec![0, -1, 0],
            vec![1, 0, 0],
            vec![0, 0, 0],
        ])
        .unwrap();
        let pair = CompatiblePair::check(b, lambda).unwrap();
        assert_eq!(pair.d(), &[1, 2]);
        for k in 0..2 {
            let plus = pair.mutate(k, 1);
            let minus = pair.mutate(k, -1);
            assert_eq!(plus.lambda(), minus.lambda());
            assert_eq!(plus.matrix(), &pair.matrix().mutate(k));
            let back = plus.mutate(k, 1);
            assert_eq!(back.matrix(), pair.matrix());
            assert_eq!(back.lambda(), pair.lambda());
        }
    }

    #[test]
    fn exchange_weights_a2() {
        let seed = Seed::initial(a2());
        let w1 = exchange_weights(&seed, &a2_lambda(), 0);
        assert_eq!((w1.mu_plus, w1.mu_minus), (1, 0));
        let w2 = exchange_weights(&seed, &a2_lambda(), 1);
        assert!(w2.distinct());
        let zero = exchange_weights(&seed, &PoissonMatrix::zero(2), 0);
        assert_eq!((zero.mu_plus, zero.mu_minus), (0, 0));
        assert!(!zero.distinct());
    }

    #[test]
    fn genericity_a2_literal_and_semantic() {
        let report = genericity_check(&a2(), &a2_lambda());
        let literal = report.literal.as_ref().unwrap();
        assert_eq!(literal[0].value, q(-1));
        assert_eq!(literal[1].value, q(-1));
        assert!(report.semantic_passes());
        assert!(report.disagreements.is_empty());
    }

    #[test]
    fn genericity_zero_rows_fail_semantically() {
        let b = ExchangeMatrix::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let report = genericity_check(&b, &a2_lambda());
        assert!(report.literal.is_none());
        assert!(!report.semantic_passes());
    }

    #[test]
    fn extract_monomial_two_terms() {
        let f = parse("x1 + x2", 2);
        let trace = extract_monomial(&f, &a2_lambda()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].index, 0);
        assert_eq!(trace.steps[0].scalar, q(0));
        assert_eq!(trace.result, Exponent::new(vec![1, 1]));
        verify_extraction(&trace, &a2_lambda()).unwrap();
    }

    #[test]
    fn extract_monomial_trivial() {
        let f = parse("x1^-3*x2", 2);
        let trace = extract_monomial(&f, &a2_lambda()).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.result, Exponent::new(vec![0, 1]));
        verify_extraction(&trace, &a2_lambda()).unwrap();
    }

    #[test]
    fn extract_monomial_rank_deficient() {
        let f = parse("x1 + x2", 2);
        assert!(matches!(
            extract_monomial(&f, &PoissonMatrix::zero(2)),
            Err(ExtractionError::RankDeficient { rank: 0, n: 2 })
        ));
    }

    #[test]
    fn descent_a2_chains() {
        let seed = Seed::initial(a2());
        let cert = descent_certificate(&seed, &a2_lambda()).unwrap();
        verify_descent(&cert).unwrap();
        assert!(cert.steps[0].support.is_empty());
        assert_eq!(cert.steps[1].support, vec![0]);
    }

    #[test]
    fn descent_rank4_all_ones() {
        // Upper-triangular all-ones skew matrix: the pfaffian is 1, so the
        // inverse is integral and (B, B^{-1}) is compatible with d = 1.
        let entries = vec![
            vec![0, 1, 1, 1],
            vec![-1, 0, 1, 1],
            vec![-1, -1, 0, 1],
            vec![-1, -1, -1, 0],
        ];
        let b = ExchangeMatrix::new(entries.clone()).unwrap();
        let inv = crate::intmat::inverse(&entries).unwrap();
        let lambda = PoissonMatrix::new(
            inv.iter()
                .map(|row| row.iter().map(|v| i64::try_from(v.numer().clone()).unwrap()).collect())
                .collect(),
        )
        .unwrap();
        let cert = descent_certificate(&Seed::initial(b), &lambda).unwrap();
        verify_descent(&cert).unwrap();
        for (i, step) in cert.steps.iter().enumerate() {
            assert_eq!(step.support, (0..i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn descent_rejects_odd_rank() {
        let b = ExchangeMatrix::new(vec![
            vec![0, 1, 0],
            vec![-1, 0, 1],
            vec![0, -1, 0],
        ])
        .unwrap();
        let seed = Seed::initial(b);
        assert!(matches!(
            descent_certificate(&seed, &PoissonMatrix::zero(3)),
            Err(DescentError::OddRank { n: 3 })
        ));
    }

    #[test]
    fn bivector_rank_examples() {
        let lambda = a2_lambda();
        assert_eq!(bivector_rank_at(&lambda, &[q(2), q(3)]), 2);
        assert_eq!(bivector_rank_at(&lambda, &[q(0), q(3)]), 0);
    }

    #[test]
    fn boundary_a2() {
        let seed = Seed::initial(a2());
        let verdict =
            boundary_nondegeneracy(&seed, &a2_lambda(), 0, &[q(0), q(-1)]).unwrap();
        assert!(verdict.nonzero);
        assert_eq!(verdict.value, q(1));

        assert!(matches!(
            boundary_nondegeneracy(&seed, &a2_lambda(), 0, &[q(0), q(5)]),
            Err(BoundaryError::ExchangeNotVanishing { .. })
        ));
    }
}
