//! Small exact matrix kernels: integer products, fraction-free rank, and
//! rational inverses. Everything here is dimension-checked by assertion;
//! the matrices involved are cluster-scale (n <= 10 or so).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn multiply(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ra, ca) = (a.len(), a.first().map_or(0, Vec::len));
    let (rb, cb) = (b.len(), b.first().map_or(0, Vec::len));
    assert_eq!(ca, rb, "inner dimensions must agree");
    let mut out = vec![vec![0i64; cb]; ra];
    for i in 0..ra {
        for j in 0..cb {
            let mut acc: i128 = 0;
            for k in 0..ca {
                acc += a[i][k] as i128 * b[k][j] as i128;
            }
            out[i][j] = acc.try_into().expect("matrix entry exceeds i64");
        }
    }
    out
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut out = vec![vec![0i64; r]; c];
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1;
    }
    out
}

pub fn is_skew_symmetric(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    a.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..n).all(|j| a[i][j] == -a[j][i]))
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank_bareiss(a: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    rank_bareiss_bigint(m)
}

/// Rank of a rational matrix: rows are scaled to integers first (row
/// scaling by nonzero constants preserves rank).
pub fn rank_rational(a: &[Vec<BigRational>]) -> usize {
    let m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    rank_bareiss_bigint(m)
}

fn rank_bareiss_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let val = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = &val / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

/// Exact determinant over the rationals.
pub fn determinant(a: &[Vec<i64>]) -> BigRational {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let factor = &m[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact inverse over the rationals; `None` when singular.
pub fn inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "inverse needs a square matrix");
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext: Vec<BigRational> = row
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            ext.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            ext
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] /= &pivot;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..2 * n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Scale a rational matrix by the least positive integer making every entry
/// integral; returns the integer matrix and the multiplier.
pub fn clear_denominators(a: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut lcm = BigInt::one();
    for row in a {
        for x in row {
            lcm = lcm.lcm(x.denom());
        }
    }
    let cleared = a
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
        .collect();
    (cleared, lcm)
}

/// Positive gcd of a list, 0 for the empty/zero list.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_bivector_matrix() {
        assert_eq!(rank_bareiss(&[vec![0, -6], vec![6, 0]]), 2);
        assert_eq!(rank_bareiss(&[vec![0, 0], vec![6, 0]]), 1);
        assert_eq!(rank_bareiss(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn rank_rectangular() {
        assert_eq!(rank_bareiss(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank_bareiss(&[vec![1, 2, 3], vec![0, 1, 1]]), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![0, 1], vec![-1, 0]];
        let inv = inverse(&a).unwrap();
        let (cleared, mult) = clear_denominators(&inv);
        assert_eq!(mult, BigInt::one());
        assert_eq!(cleared, vec![vec![BigInt::from(0), BigInt::from(-1)], vec![BigInt::from(1), BigInt::from(0)]]);
        assert!(inverse(&[vec![1, 1], vec![1, 1]]).is_none());
    }

    #[test]
    fn determinant_matches() {
        assert_eq!(determinant(&[vec![0, 1], vec![-1, 0]]), BigRational::one());
        assert!(determinant(&[vec![1, 2], vec![2, 4]]).is_zero());
    }
}
