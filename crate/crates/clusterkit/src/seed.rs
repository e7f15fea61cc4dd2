//! Exchange matrices, seeds, classical mutation, acyclicity, lower-bound
//! generators, and bounded mutation-class enumeration.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::exponent::Exponent;
use crate::intmat;
use crate::laurent::{DivisionError, LaurentPolynomial};

/// Outcome of symmetrizer detection on a square integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SymmetrizerResult {
    /// Positive integer diagonal `d` with `d_i b_ij = -d_j b_ji`.
    Symmetrizable(Vec<i64>),
    /// No symmetrizer exists; `(i, j)` is a violating index pair (0-based).
    Refusal { witness: (usize, usize) },
}

/// Detect a positive integer symmetrizer of a square matrix, or produce a
/// witness pair. Ratio constraints `d_j/d_i = -b_ij/b_ji` are propagated
/// along the graph of nonzero entries after the sign checks
/// `b_ij b_ji <= 0` and `b_ij = 0 <=> b_ji = 0`.
pub fn find_symmetrizer(b: &[Vec<i64>]) -> SymmetrizerResult {
    let m = b.len();
    for i in 0..m {
        for j in 0..m {
            if i == j && b[i][j] != 0 {
                return SymmetrizerResult::Refusal { witness: (i, j) };
            }
            if (b[i][j] == 0) != (b[j][i] == 0) || b[i][j] * b[j][i] > 0 {
                return SymmetrizerResult::Refusal { witness: (i.min(j), i.max(j)) };
            }
        }
    }
    // d values as exact rationals per connected component, then cleared.
    let mut d: Vec<Option<BigRational>> = vec![None; m];
    for root in 0..m {
        if d[root].is_some() {
            continue;
        }
        let mut component = vec![root];
        d[root] = Some(BigRational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..m {
                if b[i][j] == 0 {
                    continue;
                }
                // d_i b_ij = -d_j b_ji  =>  d_j = d_i * (-b_ij / b_ji)
                let ratio = BigRational::new((-b[i][j]).into(), b[j][i].into());
                let dj = d[i].as_ref().unwrap() * ratio;
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) => {
                        if *existing != dj {
                            return SymmetrizerResult::Refusal {
                                witness: (i.min(j), i.max(j)),
                            };
                        }
                    }
                }
            }
        }
        // Clear denominators and reduce within the component.
        let lcm = component
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &i| {
                acc.lcm(d[i].as_ref().unwrap().denom())
            });
        let scaled: Vec<num_bigint::BigInt> = component
            .iter()
            .map(|&i| {
                let v = d[i].as_ref().unwrap();
                v.numer() * (&lcm / v.denom())
            })
            .collect();
        let g = intmat::gcd_all(scaled.iter());
        for (&i, v) in component.iter().zip(scaled) {
            d[i] = Some(BigRational::from_integer(v / &g));
        }
    }
    SymmetrizerResult::Symmetrizable(
        d.into_iter()
            .map(|v| {
                let v = v.unwrap();
                debug_assert!(v.denom().is_one());
                i64::try_from(v.numer().clone()).expect("symmetrizer entry fits i64")
            })
            .collect(),
    )
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatrixError {
    NotSkewSymmetrizable { witness: (usize, usize) },
    BadShape { rows: usize, cols: usize },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::NotSkewSymmetrizable { witness: (i, j) } => {
                write!(f, "principal block is not skew-symmetrizable; witness entry pair ({}, {})", i + 1, j + 1)
            }
            MatrixError::BadShape { rows, cols } => {
                write!(f, "{rows}x{cols} matrix cannot be an exchange matrix (need m <= n and rectangular rows)")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

/// An `m x n` integer exchange matrix (rows = exchangeable indices) whose
/// principal `m x m` block is skew-symmetrizable, together with a positive
/// diagonal symmetrizer `d` satisfying `d_i b_ij = -d_j b_ji`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ExchangeMatrix {
    entries: Vec<Vec<i64>>,
    m: usize,
    n: usize,
    symmetrizer: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let m = entries.len();
        let n = entries.first().map_or(0, Vec::len);
        if m == 0 || m > n || entries.iter().any(|r| r.len() != n) {
            return Err(MatrixError::BadShape { rows: m, cols: n });
        }
        let principal: Vec<Vec<i64>> = entries.iter().map(|r| r[..m].to_vec()).collect();
        match find_symmetrizer(&principal) {
            SymmetrizerResult::Symmetrizable(symmetrizer) => {
                Ok(ExchangeMatrix { entries, m, n, symmetrizer })
            }
            SymmetrizerResult::Refusal { witness } => {
                Err(MatrixError::NotSkewSymmetrizable { witness })
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn principal(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(|r| r[..self.m].to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// Matrix mutation at exchangeable index `k` (0-based): negate row and
    /// column `k`, and apply `b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2`
    /// elsewhere. The symmetrizer is unchanged.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        assert!(k < self.m, "mutation index out of range");
        let mut out = self.entries.clone();
        for i in 0..self.m {
            for j in 0..self.n {
                if i == k || j == k {
                    out[i][j] = -self.entries[i][j];
                } else {
                    let bik = self.entries[i][k] as i128;
                    let bkj = self.entries[k][j] as i128;
                    let corr = (bik.abs() * bkj + bik * bkj.abs()) / 2;
                    out[i][j] = (self.entries[i][j] as i128 + corr)
                        .try_into()
                        .expect("exchange matrix entry exceeds i64");
                }
            }
        }
        ExchangeMatrix {
            entries: out,
            m: self.m,
            n: self.n,
            symmetrizer: self.symmetrizer.clone(),
        }
    }

    /// Acyclicity of the directed graph with an edge `i -> j` whenever
    /// `b_ij > 0` (principal block). Returns a topological ordering when
    /// acyclic, or a directed cycle when not.
    pub fn acyclicity(&self) -> Acyclicity {
        let m = self.m;
        let mut indegree = vec![0usize; m];
        for i in 0..m {
            for j in 0..m {
                if self.entries[i][j] > 0 {
                    indegree[j] += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> =
            (0..m).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            order.push(i);
            for j in 0..m {
                if self.entries[i][j] > 0 {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        if order.len() == m {
            return Acyclicity::Acyclic { order };
        }
        // Walk forward along positive entries among the leftover vertices
        // until a vertex repeats; that loop is a directed cycle.
        let leftover: BTreeSet<usize> = (0..m).filter(|i| !order.contains(i)).collect();
        let start = *leftover.iter().next().unwrap();
        let mut path = vec![start];
        let mut seen = BTreeMap::from([(start, 0usize)]);
        let mut current = start;
        loop {
            let next = leftover
                .iter()
                .copied()
                .find(|&j| self.entries[current][j] > 0)
                .expect("leftover vertices all have positive out-edges");
            if let Some(&pos) = seen.get(&next) {
                return Acyclicity::Cyclic { cycle: path[pos..].to_vec() };
            }
            seen.insert(next, path.len());
            path.push(next);
            current = next;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Acyclicity {
    /// `order[k]` lists the vertices so that all positive entries point
    /// from earlier to later positions.
    Acyclic { order: Vec<usize> },
    Cyclic { cycle: Vec<usize> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic { .. })
    }

    pub fn order(&self) -> Option<&[usize]> {
        match self {
            Acyclicity::Acyclic { order } => Some(order),
            Acyclicity::Cyclic { .. } => None,
        }
    }
}

/// The two monomial halves of an exchange polynomial `P_i = m_i^+ + m_i^-`,
/// both expanded into the initial variables, plus their exponents in the
/// seed's own cluster coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExchangeData {
    pub index: usize,
    pub plus: LaurentPolynomial,
    pub minus: LaurentPolynomial,
    /// Exponent of `m_i^+` in the seed's own coordinates: `b_ik^+` per k.
    pub local_plus: Exponent,
    /// Exponent of `m_i^-` in the seed's own coordinates: `-b_ik^-` per k.
    pub local_minus: Exponent,
}

impl ExchangeData {
    pub fn polynomial(&self) -> LaurentPolynomial {
        &self.plus + &self.minus
    }
}

/// A seed: `n` cluster variables expressed as Laurent polynomials in the
/// initial variables, an exchange matrix, and the mutation history that
/// produced it. Variables with index >= m are frozen.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Seed {
    matrix: ExchangeMatrix,
    variables: Vec<LaurentPolynomial>,
    history: Vec<usize>,
}

impl Seed {
    /// The initial seed: variable `i` is the coordinate function `x_{i+1}`.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        let variables = (0..n).map(|i| LaurentPolynomial::variable(n, i)).collect();
        Seed { matrix, variables, history: Vec::new() }
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn variables(&self) -> &[LaurentPolynomial] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &LaurentPolynomial {
        &self.variables[i]
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

    /// True when variable `i` is exactly the coordinate monomial `x_{i+1}`
    /// for every `i`; holds for initial seeds.
    pub fn is_coordinate_seed(&self) -> bool {
        self.variables
            .iter()
            .enumerate()
            .all(|(i, v)| *v == LaurentPolynomial::variable(self.n(), i))
    }

    /// Exchange data for row `i`: `m_i^+ = prod_k v_k^{b_ik^+}` and
    /// `m_i^- = prod_k v_k^{-b_ik^-}`, computed in the seed's own
    /// coordinates and expanded into the initial variables.
    pub fn exchange_data(&self, i: usize) -> ExchangeData {
        assert!(i < self.m(), "exchange index out of range");
        let n = self.n();
        let mut plus = LaurentPolynomial::one(n);
        let mut minus = LaurentPolynomial::one(n);
        let mut local_plus = vec![0i64; n];
        let mut local_minus = vec![0i64; n];
        for k in 0..n {
            let b = self.matrix.entry(i, k);
            if b > 0 {
                local_plus[k] = b;
                plus = &plus * &self.variables[k].pow(b as u32);
            } else if b < 0 {
                local_minus[k] = -b;
                minus = &minus * &self.variables[k].pow((-b) as u32);
            }
        }
        ExchangeData {
            index: i,
            plus,
            minus,
            local_plus: Exponent::new(local_plus),
            local_minus: Exponent::new(local_minus),
        }
    }

    /// Seed mutation at `k`: the new variable is `P_k / x_k` (exact
    /// division in the initial Laurent ring), the matrix mutates, and the
    /// history grows by `k`. A division failure cannot occur for genuine
    /// seeds by the Laurent phenomenon, so it is surfaced as an error
    /// signalling corruption.
    pub fn mutate(&self, k: usize) -> Result<Seed, DivisionError> {
        assert!(k < self.m(), "mutation index out of range");
        let data = self.exchange_data(k);
        let new_var = data.polynomial().exact_div(&self.variables[k])?;
        let mut variables = self.variables.clone();
        variables[k] = new_var;
        let mut history = self.history.clone();
        history.push(k);
        Ok(Seed { matrix: self.matrix.mutate(k), variables, history })
    }

    /// The adjacent-cluster generators `y_1..y_m` with `x_i y_i = P_i`,
    /// as Laurent polynomials in the initial variables.
    pub fn lower_bound_generators(&self) -> Vec<LaurentPolynomial> {
        (0..self.m())
            .map(|i| {
                self.exchange_data(i)
                    .polynomial()
                    .exact_div(&self.variables[i])
                    .expect("P_i is divisible by x_i for genuine seeds")
            })
            .collect()
    }

    /// Canonical form: exchangeable variables sorted, matrix rows/columns
    /// permuted accordingly. Seed identity under enumeration is the
    /// unordered cluster content.
    pub fn canonical(&self) -> Seed {
        let m = self.m();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.sort_by(|&a, &b| self.variables[a].cmp(&self.variables[b]));
        let mut variables = self.variables.clone();
        for (new_pos, &old_pos) in perm.iter().enumerate() {
            variables[new_pos] = self.variables[old_pos].clone();
        }
        let mut entries = vec![vec![0i64; self.n()]; m];
        for (new_i, &old_i) in perm.iter().enumerate() {
            for j in 0..self.n() {
                let src = if j < m { self.matrix.entry(old_i, perm[j]) } else { self.matrix.entry(old_i, j) };
                entries[new_i][j] = src;
            }
        }
        let matrix = ExchangeMatrix::new(entries)
            .expect("permutation preserves skew-symmetrizability");
        Seed { matrix, variables, history: self.history.clone() }
    }

    fn canonical_key(&self) -> Vec<LaurentPolynomial> {
        let mut key = self.variables[..self.m()].to_vec();
        key.sort();
        key
    }
}

/// Result of breadth-first closure of a seed under mutation.
#[derive(Clone, Debug)]
pub struct MutationClass {
    /// Canonical representatives in discovery order.
    pub seeds: Vec<Seed>,
    /// All distinct exchangeable cluster variables across the class.
    pub cluster_variables: BTreeSet<LaurentPolynomial>,
    /// Undirected exchange-graph edges `(a, b, k)`: seed `a` mutated at
    /// direction `k` (in `a`'s canonical ordering) reaches seed `b`.
    pub edges: BTreeSet<(usize, usize, usize)>,
    /// True when `max_seeds` was reached with the closure still open.
    pub truncated: bool,
}

impl MutationClass {
    /// Undirected edge set with labels dropped.
    pub fn plain_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .map(|&(a, b, _)| (a.min(b), a.max(b)))
            .collect()
    }

    /// True when the exchange graph is a single cycle through all seeds.
    pub fn is_cycle(&self) -> bool {
        let n = self.seeds.len();
        let edges = self.plain_edges();
        if n < 3 || edges.len() != n {
            return false;
        }
        let mut degree = vec![0usize; n];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        degree.iter().all(|&d| d == 2) && connected(n, &edges)
    }
}

fn connected(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Default cap for [`enumerate_mutation_class`].
pub const DEFAULT_MAX_SEEDS: usize = 10_000;

/// Breadth-first closure of `seed` under mutation in all exchangeable
/// directions, deduplicated by canonical form. Stops with a truncation
/// flag once `max_seeds` canonical seeds have been found while the
/// frontier is still open.
pub fn enumerate_mutation_class(seed: &Seed, max_seeds: usize) -> MutationClass {
    let start = seed.canonical();
    let mut ids: BTreeMap<Vec<LaurentPolynomial>, usize> = BTreeMap::new();
    let mut seeds = vec![start.clone()];
    ids.insert(start.canonical_key(), 0);
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;

    'outer: while let Some(id) = queue.pop_front() {
        let current = seeds[id].clone();
        for k in 0..current.m() {
            let next = current
                .mutate(k)
                .expect("mutation of a genuine seed is exact")
                .canonical();
            let key = next.canonical_key();
            let next_id = match ids.get(&key) {
                Some(&existing) => existing,
                None => {
                    if seeds.len() >= max_seeds {
                        truncated = true;
                        break 'outer;
                    }
                    let new_id = seeds.len();
                    ids.insert(key, new_id);
                    seeds.push(next);
                    queue.push_back(new_id);
                    new_id
                }
            };
            if next_id != id {
                edges.insert((id.min(next_id), id.max(next_id), k));
            }
        }
    }

    let cluster_variables = seeds
        .iter()
        .flat_map(|s| s.variables()[..s.m()].iter().cloned())
        .collect();
    MutationClass { seeds, cluster_variables, edges, truncated }
}

/// Upper-bound membership at the seed's cluster: `f` (written in the
/// seed's own cluster coordinates) lies in
/// `C[x1^{±1}, .., x_j, y_j, .., x_m^{±1}, x_{m+1}, .., x_n]` for every
/// exchangeable `j`. A Laurent polynomial belongs to the `j`-th ring iff
/// each coefficient of `x_j^d` with `d < 0` is divisible by `P_j^{-d}`.
pub fn upper_bound_membership(f: &LaurentPolynomial, seed: &Seed) -> bool {
    let n = seed.n();
    assert_eq!(f.num_vars(), n, "ambient dimension mismatch");
    for j in 0..seed.m() {
        let data = local_exchange_polynomial(seed.matrix(), j);
        for (d, coeff) in f.coefficients_in_variable(j) {
            if d >= 0 {
                continue;
            }
            let power = data.pow((-d) as u32);
            if coeff.exact_div(&power).is_err() {
                return false;
            }
        }
    }
    true
}

/// `P_i` as a polynomial in the seed's own cluster coordinates.
pub fn local_exchange_polynomial(matrix: &ExchangeMatrix, i: usize) -> LaurentPolynomial {
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
    let one = BigRational::one();
    &LaurentPolynomial::monomial(n, Exponent::new(plus), one.clone())
        + &LaurentPolynomial::monomial(n, Exponent::new(minus), one)
}
