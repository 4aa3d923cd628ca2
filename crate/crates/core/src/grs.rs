//! Generalized Reed-Solomon codes `GRS_k(alpha, v)`.
//!
//! A codeword is `(v_0 f(alpha_0), ..., v_{n-1} f(alpha_{n-1}))` for a
//! polynomial `f` of degree `< k` whose coefficients are the message. The
//! dual code is `GRS_{n-k}(alpha, v')` with
//! `v'_j = 1 / (v_j * prod_{i != j} (alpha_j - alpha_i))`, which gives the
//! parity checks used for syndrome decoding.

use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::gf::{Elem, Field};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrsError {
    #[error("invalid GRS parameters: {0}")]
    InvalidParameters(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("decoding failed")]
    DecodeFailure,
}

/// A message together with the error pattern that was removed from the
/// received word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<Elem>,
    pub error: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct GrsCode {
    field: Arc<Field>,
    alpha: Vec<Elem>,
    v: Vec<Elem>,
    k: usize,
    dual_v: Vec<Elem>,
}

impl GrsCode {
    /// Random code: `alpha` is a uniform `n`-subset of the field in random
    /// order and `v` is uniform over nonzero elements.
    pub fn random<R: Rng + ?Sized>(
        field: &Arc<Field>,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<Self, GrsError> {
        check_lengths(field, n, k)?;
        let alpha = index::sample(rng, field.size(), n)
            .into_iter()
            .map(|i| field.elem(i as u32).expect("index below field size"))
            .collect();
        let v = (0..n).map(|_| field.random_nonzero(rng)).collect();
        Self::from_parts(field, alpha, v, k)
    }

    pub fn from_parts(
        field: &Arc<Field>,
        alpha: Vec<Elem>,
        v: Vec<Elem>,
        k: usize,
    ) -> Result<Self, GrsError> {
        let n = alpha.len();
        check_lengths(field, n, k)?;
        if v.len() != n {
            return Err(GrsError::DimensionMismatch { expected: n, got: v.len() });
        }
        if v.iter().any(|x| x.is_zero()) {
            return Err(GrsError::InvalidParameters("column multipliers must be nonzero".into()));
        }
        let mut seen = vec![false; field.size()];
        for a in &alpha {
            if (a.value() as usize) >= field.size() || std::mem::replace(&mut seen[a.value() as usize], true) {
                return Err(GrsError::InvalidParameters(
                    "evaluation points must be distinct field elements".into(),
                ));
            }
        }
        let dual_v = (0..n)
            .map(|j| {
                let mut d = v[j];
                for i in (0..n).filter(|&i| i != j) {
                    d = field.mul(d, alpha[j] + alpha[i]);
                }
                field.inv(d).expect("distinct points and nonzero multipliers")
            })
            .collect();
        Ok(GrsCode {
            field: field.clone(),
            alpha,
            v,
            k,
            dual_v,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Designed minimum distance `n - k + 1`.
    pub fn min_distance(&self) -> usize {
        self.len() - self.k + 1
    }

    /// Unique-decoding radius `floor((n - k) / 2)`.
    pub fn capacity(&self) -> usize {
        (self.len() - self.k) / 2
    }

    pub fn alpha(&self) -> &[Elem] {
        &self.alpha
    }

    pub fn multipliers(&self) -> &[Elem] {
        &self.v
    }

    pub fn dual_multipliers(&self) -> &[Elem] {
        &self.dual_v
    }

    /// `k x n` matrix with entry `(i, j) = v_j * alpha_j^i`.
    pub fn generator_matrix(&self) -> Matrix {
        vandermonde(&self.field, &self.alpha, &self.v, self.k)
    }

    /// `(n - k) x n` parity-check matrix, the generator of the dual code.
    pub fn parity_check_matrix(&self) -> Matrix {
        vandermonde(&self.field, &self.alpha, &self.dual_v, self.len() - self.k)
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, GrsError> {
        if message.len() != self.k {
            return Err(GrsError::DimensionMismatch { expected: self.k, got: message.len() });
        }
        let f = &self.field;
        Ok(self
            .alpha
            .iter()
            .zip(&self.v)
            .map(|(&a, &vj)| {
                let fa = message.iter().rev().fold(Elem::ZERO, |acc, &c| f.mul(acc, a) + c);
                f.mul(vj, fa)
            })
            .collect())
    }

    /// `S_l = sum_j y_j v'_j alpha_j^l` for `l` in `0..n-k`.
    pub fn syndromes(&self, received: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let r = self.len() - self.k;
        let mut s = vec![Elem::ZERO; r];
        for ((&y, &w), &a) in received.iter().zip(&self.dual_v).zip(&self.alpha) {
            let mut term = f.mul(y, w);
            for sl in s.iter_mut() {
                if term.is_zero() {
                    break;
                }
                *sl += term;
                term = f.mul(term, a);
            }
        }
        s
    }

    /// Corrects up to `t` errors, `2t <= n - k`.
    ///
    /// Berlekamp-Massey runs over all `n - k` syndromes. The resulting
    /// recurrence has the error locators `alpha_j` as the roots of its
    /// characteristic polynomial, so a zero evaluation point needs no
    /// special casing. Roots are found by evaluating at every `alpha_j`, and
    /// magnitudes by solving the transposed Vandermonde system through the
    /// per-root quotients of the locator.
    pub fn decode(&self, received: &[Elem], t: usize) -> Result<Decoded, GrsError> {
        let n = self.len();
        if received.len() != n {
            return Err(GrsError::DimensionMismatch { expected: n, got: received.len() });
        }
        if 2 * t > n - self.k {
            return Err(GrsError::InvalidParameters(format!(
                "t = {t} exceeds the decoding radius {}",
                self.capacity()
            )));
        }
        let f = &self.field;
        let syn = self.syndromes(received);
        let mut error = vec![Elem::ZERO; n];

        if syn.iter().any(|s| !s.is_zero()) {
            let (conn, l) = berlekamp_massey(f, &syn);
            if l == 0 || l > t {
                return Err(GrsError::DecodeFailure);
            }
            // Characteristic polynomial, lowest degree first, monic.
            let locator: Vec<Elem> = (0..=l)
                .map(|i| conn.get(l - i).copied().unwrap_or(Elem::ZERO))
                .collect();
            let positions: Vec<usize> = (0..n)
                .filter(|&j| poly_eval(f, &locator, self.alpha[j]).is_zero())
                .collect();
            if positions.len() != l {
                return Err(GrsError::DecodeFailure);
            }
            for &j in &positions {
                let x = self.alpha[j];
                let quotient = divide_by_linear(f, &locator, x);
                let num = f.dot(&quotient, &syn[..l]);
                let den = poly_eval(f, &quotient, x);
                let y = f.div(num, den).map_err(|_| GrsError::DecodeFailure)?;
                if y.is_zero() {
                    return Err(GrsError::DecodeFailure);
                }
                error[j] = f.div(y, self.dual_v[j]).expect("dual multipliers are nonzero");
            }
        }

        let codeword: Vec<Elem> = received.iter().zip(&error).map(|(&y, &e)| y + e).collect();
        let message = self.interpolate(&codeword[..self.k], 0..self.k);
        Ok(Decoded { message, error })
    }

    /// Recovers the message polynomial from `k` codeword symbols at the
    /// given positions.
    fn interpolate(&self, symbols: &[Elem], positions: std::ops::Range<usize>) -> Vec<Elem> {
        let f = &self.field;
        let xs: Vec<Elem> = positions.clone().map(|j| self.alpha[j]).collect();
        let mut coef: Vec<Elem> = positions
            .zip(symbols)
            .map(|(j, &c)| f.div(c, self.v[j]).expect("nonzero multiplier"))
            .collect();
        let k = xs.len();
        // Newton divided differences.
        for step in 1..k {
            for i in (step..k).rev() {
                let num = coef[i] + coef[i - 1];
                let den = xs[i] + xs[i - step];
                coef[i] = f.div(num, den).expect("distinct points");
            }
        }
        // Expand the Newton form into monomial coefficients.
        let mut poly = vec![Elem::ZERO; k];
        if k == 0 {
            return poly;
        }
        poly[0] = coef[k - 1];
        for (deg, i) in (0..k - 1).rev().enumerate() {
            // poly = poly * (x - xs[i]) + coef[i]
            for d in (0..=deg).rev() {
                let c = poly[d];
                poly[d + 1] += c;
                poly[d] = f.mul(c, xs[i]);
            }
            poly[0] += coef[i];
        }
        poly
    }
}

fn check_lengths(field: &Field, n: usize, k: usize) -> Result<(), GrsError> {
    if k == 0 || k > n {
        return Err(GrsError::InvalidParameters(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if n > field.size() {
        return Err(GrsError::InvalidParameters(format!(
            "length {n} exceeds the field size {}",
            field.size()
        )));
    }
    Ok(())
}

fn vandermonde(field: &Arc<Field>, alpha: &[Elem], v: &[Elem], rows: usize) -> Matrix {
    let n = alpha.len();
    let mut m = Matrix::zeros(field, rows, n);
    for j in 0..n {
        let mut entry = v[j];
        for i in 0..rows {
            m.set(i, j, entry);
            entry = field.mul(entry, alpha[j]);
        }
    }
    m
}

/// Shortest LFSR generating `s`: connection polynomial `C` (with `C_0 = 1`)
/// and its length `L`, so `s_i + sum_{j=1..L} C_j s_{i-j} = 0` for `i >= L`.
pub(crate) fn berlekamp_massey(f: &Field, s: &[Elem]) -> (Vec<Elem>, usize) {
    let mut c = vec![Elem::ONE];
    let mut b = vec![Elem::ONE];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = Elem::ONE;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l.min(c.len() - 1) {
            d += f.mul(c[i], s[n - i]);
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f.div(d, last).expect("last discrepancy is nonzero");
        let lengthen = 2 * l <= n;
        let prev = lengthen.then(|| c.clone());
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, Elem::ZERO);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] += f.mul(coef, bi);
        }
        if let Some(prev) = prev {
            l = n + 1 - l;
            b = prev;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    (c, l)
}

fn poly_eval(f: &Field, p: &[Elem], x: Elem) -> Elem {
    p.iter().rev().fold(Elem::ZERO, |acc, &c| f.mul(acc, x) + c)
}

/// Quotient of `p / (x - root)` for a root of `p`, lowest degree first.
fn divide_by_linear(f: &Field, p: &[Elem], root: Elem) -> Vec<Elem> {
    let deg = p.len() - 1;
    let mut q = vec![Elem::ZERO; deg];
    let mut carry = Elem::ZERO;
    for i in (1..=deg).rev() {
        carry = p[i] + f.mul(carry, root);
        q[i - 1] = carry;
    }
    q
}
