//! Square codes.
//!
//! For a code `C` of dimension `k` and length `N`, `dim C*C` is at most
//! `min(N, k(k+1)/2)`, and random codes meet the bound. A GRS code squares
//! into `GRS_{2k-1}`, so its square has dimension `min(N, 2k-1)`.

use std::fmt;

use super::AnalysisError;
use crate::gf::{Elem, Field};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Square dimension at most `2k - 1`, strictly below the random bound.
    GrsLike,
    /// Square dimension equals the random-code bound.
    RandomLike,
    /// Neither of the above.
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::GrsLike => "grs-like",
            Classification::RandomLike => "random-like",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareCodeReport {
    pub k: usize,
    pub n: usize,
    pub square_dim: usize,
    pub bound: usize,
    pub classification: Classification,
}

/// Componentwise product `(a_0 b_0, ..., a_{n-1} b_{n-1})`.
pub fn star_product(field: &Field, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| field.mul(x, y)).collect())
}

/// `min(n, k(k+1)/2)`.
pub fn square_bound(k: usize, n: usize) -> usize {
    n.min(k * (k + 1) / 2)
}

pub fn classify(k: usize, square_dim: usize, bound: usize) -> Classification {
    let grs = (2 * k).saturating_sub(1);
    if square_dim <= grs && grs < bound {
        Classification::GrsLike
    } else if square_dim == bound {
        Classification::RandomLike
    } else {
        Classification::Inconclusive
    }
}

/// Incrementally maintained row basis in echelon form, each row scaled so
/// its pivot is one and zero at the pivots of earlier rows.
struct RowBasis<'a> {
    field: &'a Field,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl RowBasis<'_> {
    fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if !c.is_zero() {
                self.field.axpy(&mut v[*pivot..], c, &row[*pivot..]);
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(v[pivot]).expect("pivot is nonzero");
        self.field.scale(&mut v[pivot..], inv);
        self.rows.push((pivot, v));
        true
    }
}

/// Dimension of the span of all `g_i * g_j`, `i <= j`, over the rows of
/// `g`. Stops as soon as the span is the whole space.
pub fn square_code_dimension(g: &Matrix) -> SquareCodeReport {
    let (k, n) = (g.rows(), g.cols());
    let field = g.field();
    let mut basis = RowBasis { field, rows: Vec::new() };
    'outer: for i in 0..k {
        for j in i..k {
            if basis.rows.len() == n {
                break 'outer;
            }
            let prod = star_product(field, g.row(i), g.row(j)).expect("rows have equal length");
            basis.insert(prod);
        }
    }
    let square_dim = basis.rows.len();
    let bound = square_bound(k, n);
    SquareCodeReport {
        k,
        n,
        square_dim,
        bound,
        classification: classify(k, square_dim, bound),
    }
}

/// Deletes one column.
pub fn puncture(g: &Matrix, column: usize) -> Result<Matrix, AnalysisError> {
    if column >= g.cols() {
        return Err(AnalysisError::IndexOutOfRange { index: column, len: g.cols() });
    }
    let keep: Vec<usize> = (0..g.cols()).filter(|&c| c != column).collect();
    Ok(g.select_columns(&keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn star_product_basics() {
        let f = Field::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a: Vec<Elem> = (0..10).map(|_| f.random(&mut rng)).collect();
        let b: Vec<Elem> = (0..10).map(|_| f.random(&mut rng)).collect();
        assert_eq!(star_product(&f, &a, &[Elem::ONE; 10]).unwrap(), a);
        assert!(star_product(&f, &a, &[Elem::ZERO; 10]).unwrap().iter().all(|x| x.is_zero()));
        assert_eq!(star_product(&f, &a, &b).unwrap(), star_product(&f, &b, &a).unwrap());
        assert!(star_product(&f, &a, &b[..9]).is_err());
    }

    #[test]
    fn puncture_basics() {
        let f = Arc::new(Field::new(8).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Matrix::random(&f, 3, 3, &mut rng);
        let p = puncture(&g, 0).unwrap();
        assert_eq!(p, g.column_range(1, 3));
        for c in 0..3 {
            let p = puncture(&g, c).unwrap();
            assert_eq!(p.cols(), 2);
            assert!(p.rank() + 1 >= g.rank());
        }
        assert!(matches!(puncture(&g, 3), Err(AnalysisError::IndexOutOfRange { .. })));
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(8, 15, 32), Classification::GrsLike);
        assert_eq!(classify(8, 32, 32), Classification::RandomLike);
        assert_eq!(classify(8, 20, 32), Classification::Inconclusive);
        // 2k - 1 >= bound: the GRS square already fills the space.
        assert_eq!(classify(40, 60, 60), Classification::RandomLike);
    }
}
