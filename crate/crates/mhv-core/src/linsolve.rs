//! Exact rational dense linear algebra: reduced row echelon form, kernel
//! bases, span membership, and quotient dimensions.
//!
//! Forward elimination is fraction-free (Bareiss) over integers after
//! clearing row denominators, which keeps intermediate entries from blowing
//! up; the final normalization pass produces the reduced echelon form over
//! ℚ. Pivots are always the first nonzero entry in column order, so output
//! is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vector at index {index} is not contained in the ambient span")]
    NotContained { index: usize },
}

/// A dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// M·v exactly.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (entry, coef) in self.row(r).iter().zip(v) {
                    if !entry.is_zero() && !coef.is_zero() {
                        acc += &(entry * coef);
                    }
                }
                acc
            })
            .collect()
    }

    /// Debug dump: rows of `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| {
                    serde_json::Value::Array(
                        self.row(r)
                            .iter()
                            .map(|x| serde_json::Value::String(x.to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefResult {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form, exact.
pub fn rref(m: &Matrix) -> RrefResult {
    // Clear each row's denominators; row scaling changes neither row space
    // nor kernel.
    let mut int_rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let lcm = m
                .row(r)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            m.row(r)
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    // Bareiss fraction-free forward elimination: the division by the
    // previous pivot is exact.
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pivot_row) = (r..m.rows).find(|&i| !int_rows[i][c].is_zero()) else {
            continue;
        };
        int_rows.swap(r, pivot_row);
        for i in r + 1..m.rows {
            // Rows with a zero head still get scaled by pivot/prev; Bareiss
            // needs every row updated each step for later divisions to stay
            // exact.
            let head = std::mem::replace(&mut int_rows[i][c], BigInt::zero());
            for j in c + 1..m.cols {
                let num = &int_rows[r][c] * &int_rows[i][j] - &head * &int_rows[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                int_rows[i][j] = q;
            }
        }
        prev = int_rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();

    // Normalize: pivot entries to 1, eliminate above pivots, exact rationals.
    let mut rat: Vec<Vec<Rational>> = int_rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| Rational::from_big(x, BigInt::one()))
                .collect()
        })
        .collect();
    for (i, &c) in pivots.iter().enumerate().rev() {
        let inv = rat[i][c].recip();
        for entry in rat[i][c..].iter_mut() {
            *entry *= &inv;
        }
        for above in 0..i {
            let factor = rat[above][c].clone();
            if factor.is_zero() {
                continue;
            }
            let (head, tail) = rat.split_at_mut(i);
            for (target, source) in head[above][c..].iter_mut().zip(&tail[0][c..]) {
                *target -= &(&factor * source);
            }
        }
    }
    RrefResult {
        matrix: Matrix::from_rows(rat),
        rank,
        pivots,
    }
}

/// An exact basis of the null space of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<Rational>>,
    pub rank: usize,
}

/// Null-space basis via free-variable back-substitution, ordered by free
/// column index. Each returned vector is re-checked against the matrix.
pub fn kernel_basis(m: &Matrix) -> KernelBasis {
    let RrefResult {
        matrix: r,
        rank,
        pivots,
    } = rref(m);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut vectors = Vec::with_capacity(m.cols - rank);
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.at(i, free);
        }
        debug_assert!(m.mul_vec(&v).iter().all(Rational::is_zero));
        vectors.push(v);
    }
    assert_eq!(rank + vectors.len(), m.cols, "rank-nullity");
    KernelBasis { vectors, rank }
}

pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rref(&Matrix::from_rows(vectors.to_vec())).rank
}

/// Coordinates of `v` in the span of `basis`, if any. Free coordinates of an
/// underdetermined system are set to zero, so the answer is deterministic.
pub fn membership(
    v: &[Rational],
    basis: &[Vec<Rational>],
) -> Result<Option<Vec<Rational>>, LinError> {
    for (i, b) in basis.iter().enumerate() {
        if b.len() != v.len() {
            return Err(LinError::LengthMismatch {
                expected: v.len(),
                got: basis[i].len(),
            });
        }
    }
    if v.iter().all(Rational::is_zero) {
        return Ok(Some(vec![Rational::zero(); basis.len()]));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    // Columns are the basis vectors; the last column is v.
    let m = Matrix::from_fn(v.len(), basis.len() + 1, |r, c| {
        if c < basis.len() {
            basis[c][r].clone()
        } else {
            v[r].clone()
        }
    });
    let RrefResult { matrix, pivots, .. } = rref(&m);
    if pivots.contains(&basis.len()) {
        return Ok(None);
    }
    let mut coords = vec![Rational::zero(); basis.len()];
    for (i, &pc) in pivots.iter().enumerate() {
        coords[pc] = matrix.at(i, basis.len()).clone();
    }
    // Exactness check: Σ cᵢ basisᵢ = v.
    let mut acc = vec![Rational::zero(); v.len()];
    for (c, b) in coords.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(b) {
            *a += &(c * x);
        }
    }
    assert_eq!(acc, v, "membership reconstruction");
    Ok(Some(coords))
}

/// dim span(A) − dim span(B), after checking B ⊆ span(A).
pub fn quotient_dim(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<usize, LinError> {
    let ra = rank(a);
    for (i, v) in b.iter().enumerate() {
        if membership(v, a)?.is_none() {
            return Err(LinError::NotContained { index: i });
        }
    }
    Ok(ra - rank(b))
}

/// Reduce `v` against row-reduced `rows` (pivot columns normalized to 1).
/// The result has zero entries in every pivot column of `rows`.
pub fn reduce_against(v: &[Rational], reduced: &RrefResult) -> Vec<Rational> {
    let mut out = v.to_vec();
    for (i, &c) in reduced.pivots.iter().enumerate() {
        if out[c].is_zero() {
            continue;
        }
        let factor = out[c].clone();
        for (target, entry) in out.iter_mut().zip(reduced.matrix.row(i)) {
            *target -= &(&factor * entry);
        }
    }
    out
}

/// Row-reduce a spanning set to a canonical basis: the nonzero rows of its
/// RREF (each leading coordinate 1).
pub fn canonical_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let reduced = rref(&Matrix::from_rows(vectors.to_vec()));
    (0..reduced.rank)
        .map(|i| reduced.matrix.row(i).to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_rank_examples() {
        assert_eq!(rref(&mat(&[&[1, 2], &[2, 4]])).rank, 1);
        let id = rref(&Matrix::identity(3));
        assert_eq!(id.rank, 3);
        assert_eq!(id.pivots, vec![0, 1, 2]);
        // [[1/2, 1/3], [1/4, 1/6]]: second row is half the first
        // (cross-multiplied: 1/2 * 1/6 == 1/3 * 1/4).
        let m = Matrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 6)]]);
        assert_eq!(rref(&m).rank, 1);
    }

    #[test]
    fn rref_idempotent() {
        let m = Matrix::from_rows(vec![
            vec![q(1, 2), q(2, 3), qi(0)],
            vec![qi(3), q(-1, 5), qi(7)],
            vec![q(7, 2), q(7, 15), qi(7)],
        ]);
        let first = rref(&m);
        let second = rref(&first.matrix);
        assert_eq!(first.matrix, second.matrix);
        assert_eq!(first.rank, 2);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.vectors, vec![vec![qi(-2), qi(1)]]);
        assert!(kernel_basis(&Matrix::identity(4)).vectors.is_empty());
        let k = kernel_basis(&Matrix::zero(2, 3));
        assert_eq!(k.vectors.len(), 3);
    }

    #[test]
    fn membership_examples() {
        let std2 = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert_eq!(
            membership(&[qi(1), qi(1)], &std2).unwrap(),
            Some(vec![qi(1), qi(1)])
        );
        assert_eq!(
            membership(&[qi(1), qi(0)], &[vec![qi(0), qi(1)]]).unwrap(),
            None
        );
        assert_eq!(
            membership(&[q(3, 2), qi(3)], &[vec![q(1, 2), qi(1)]]).unwrap(),
            Some(vec![qi(3)])
        );
        assert!(matches!(
            membership(&[qi(1)], &[vec![qi(1), qi(0)]]),
            Err(LinError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn quotient_dim_examples() {
        let std2 = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert_eq!(quotient_dim(&std2, &[vec![qi(1), qi(0)]]).unwrap(), 1);
        assert_eq!(quotient_dim(&std2, &std2).unwrap(), 0);
        let a = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]];
        assert_eq!(quotient_dim(&a, &[vec![qi(1), qi(1)]]).unwrap(), 1);
        let err = quotient_dim(&[vec![qi(1), qi(0)]], &[vec![qi(0), qi(1)]]).unwrap_err();
        assert_eq!(err, LinError::NotContained { index: 0 });
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = Matrix::from_rows(vec![
            vec![q(1, 3), qi(2), q(-5, 7), qi(0)],
            vec![qi(1), q(1, 2), qi(0), qi(4)],
        ]);
        let k = kernel_basis(&m);
        assert_eq!(k.rank + k.vectors.len(), 4);
        for v in &k.vectors {
            assert!(m.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn reduce_against_kills_pivot_columns() {
        let base = rref(&mat(&[&[1, 0, 2], &[0, 1, 3]]));
        let reduced = reduce_against(&[qi(5), qi(7), qi(1)], &base);
        assert_eq!(reduced[0], qi(0));
        assert_eq!(reduced[1], qi(0));
        assert_eq!(reduced[2], qi(-30));
    }
}
