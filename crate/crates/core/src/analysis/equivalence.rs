//! Constructive matrix equivalences behind the choice of `r`.
//!
//! When every block of `r + 1` columns of a target matrix `R` spans the
//! whole `k`-dimensional space, any GRS generator can be dressed up as `R`:
//! pick `C_i` so that `[g_i, C_i]` has full rank and solve
//! `[g_i, C_i] A_i = R_i`. An RLCE key with `r + 1 >= k` therefore hides
//! nothing, which is why parameters must keep `r < k - 1`.

use rand::Rng;

use super::AnalysisError;
use crate::grs::GrsCode;
use crate::linalg::Matrix;
use crate::rlce::{insert_columns, mix_blocks};

/// Blocks with `R = [g_0, C_0, ..., g_{n-1}, C_{n-1}] diag(A_0, ..., A_{n-1})`.
#[derive(Debug, Clone)]
pub struct BlockEquivalence {
    pub c_blocks: Vec<Matrix>,
    pub a_blocks: Vec<Matrix>,
}

impl BlockEquivalence {
    /// Recomputes `G_1 A` for `code`.
    pub fn reconstruct(&self, code: &GrsCode) -> Result<Matrix, AnalysisError> {
        let g1 = insert_columns(&code.generator_matrix(), &self.c_blocks)?;
        Ok(mix_blocks(&g1, &self.a_blocks)?)
    }
}

/// `S`, `C_0`, `A_0` with `R_0 = S [g_0, C_0] A_0`.
#[derive(Debug, Clone)]
pub struct ColumnRealization {
    pub s: Matrix,
    pub c0: Matrix,
    pub a0: Matrix,
}

/// Samples `C` (`k x r`) until `[g, C]` has rank `target_rank`.
fn full_rank_extension<R: Rng + ?Sized>(
    g: &[crate::gf::Elem],
    r: usize,
    target_rank: usize,
    field: &std::sync::Arc<crate::gf::Field>,
    rng: &mut R,
) -> (Matrix, Matrix) {
    let k = g.len();
    let g_col = Matrix::from_vec(field, k, 1, g.to_vec()).expect("column shape");
    loop {
        let c = Matrix::random(field, k, r, rng);
        let x = g_col.hconcat(&c).expect("same field and rows");
        if x.rank() == target_rank {
            return (c, x);
        }
    }
}

/// Invertible `N` with `X N = [I_k 0]` for a full-row-rank `k x w` matrix.
fn right_normalizer(x: &Matrix) -> Matrix {
    let (p, q, rank) = x.equivalence_form();
    debug_assert_eq!(rank, x.rows());
    let w = x.cols();
    let k = x.rows();
    // P X Q = [I 0]  =>  X Q diag(P, I) = [I 0].
    let mut d = Matrix::identity(x.field(), w);
    for i in 0..k {
        for j in 0..k {
            d.set(i, j, p.get(i, j));
        }
    }
    q.mul(&d).expect("square factors")
}

/// Finds `C_i`, `A_i` with `R = G_1 A` for the generator of `code`.
///
/// Requires `r + 1 >= k` and every `k x (r+1)` block of `R` to have rank
/// `k`. With `r + 1 = k` this is `A_i = [g_i, C_i]^{-1} R_i`; wider blocks
/// go through the normal form of right equivalence.
pub fn construct_equivalent<R: Rng + ?Sized>(
    target: &Matrix,
    code: &GrsCode,
    r: usize,
    rng: &mut R,
) -> Result<BlockEquivalence, AnalysisError> {
    let (n, k, w) = (code.len(), code.dimension(), r + 1);
    if w < k {
        return Err(AnalysisError::Infeasible { block: w, k });
    }
    if target.rows() != k {
        return Err(AnalysisError::DimensionMismatch { expected: k, got: target.rows() });
    }
    if target.cols() != n * w {
        return Err(AnalysisError::DimensionMismatch { expected: n * w, got: target.cols() });
    }
    let field = code.field();
    let gs = code.generator_matrix();
    let mut c_blocks = Vec::with_capacity(n);
    let mut a_blocks = Vec::with_capacity(n);
    for i in 0..n {
        let ri = target.column_range(i * w, (i + 1) * w);
        if ri.rank() < k {
            return Err(AnalysisError::HypothesisViolated(format!("block {i} of R has rank below k = {k}")));
        }
        let (c, x) = full_rank_extension(&gs.column(i), r, k, field, rng);
        let a = if w == k {
            x.inverse()?.mul(&ri)?
        } else {
            right_normalizer(&x).mul(&right_normalizer(&ri).inverse()?)?
        };
        c_blocks.push(c);
        a_blocks.push(a);
    }
    Ok(BlockEquivalence { c_blocks, a_blocks })
}

/// Realizes a full-rank `k x (r+1)` target from the first code column:
/// `R_0 = S [g_0, C_0] A_0` with `S` and `A_0` invertible.
pub fn realize_column_block<R: Rng + ?Sized>(
    code: &GrsCode,
    target: &Matrix,
    rng: &mut R,
) -> Result<ColumnRealization, AnalysisError> {
    let k = code.dimension();
    if target.rows() != k {
        return Err(AnalysisError::DimensionMismatch { expected: k, got: target.rows() });
    }
    let w = target.cols();
    if w == 0 {
        return Err(AnalysisError::HypothesisViolated("empty target block".into()));
    }
    let full = k.min(w);
    if target.rank() != full {
        return Err(AnalysisError::HypothesisViolated(format!(
            "target has rank {} but full rank is {full}",
            target.rank()
        )));
    }
    let gs = code.generator_matrix();
    let (c0, x) = full_rank_extension(&gs.column(0), w - 1, full, code.field(), rng);
    // P_X X Q_X = P_R R Q_R, so R = (P_R^-1 P_X) X (Q_X Q_R^-1).
    let (px, qx, _) = x.equivalence_form();
    let (pr, qr, _) = target.equivalence_form();
    let s = pr.inverse()?.mul(&px)?;
    let a0 = qx.mul(&qr.inverse()?)?;
    Ok(ColumnRealization { s, c0, a0 })
}

/// Draws a uniform full-rank `k x (r+1)` target, realizes it from the
/// first column of `code` and verifies the factorization exactly.
pub fn randomized_column_theorem_check<R: Rng + ?Sized>(
    code: &GrsCode,
    r: usize,
    rng: &mut R,
) -> Result<bool, AnalysisError> {
    let k = code.dimension();
    let target = Matrix::random_full_rank(code.field(), k, r + 1, rng);
    let real = realize_column_block(code, &target, rng)?;
    let g0 = Matrix::from_vec(code.field(), k, 1, code.generator_matrix().column(0))?;
    let x = g0.hconcat(&real.c0)?;
    let rebuilt = real.s.mul(&x)?.mul(&real.a0)?;
    Ok(rebuilt == target && real.s.inverse().is_ok() && real.a0.inverse().is_ok())
}
