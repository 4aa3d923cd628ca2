//! Information-set decoding cost estimates.
//!
//! Costs are in bit operations: field operations times `log2 q`. One
//! iteration performs a Gaussian elimination costed at
//! `(n - k)^2 (n + k) / 2` field operations. Lee-Brickell additionally
//! enumerates all weight-`p` combinations of the information set rows,
//! `C(k, p) (q - 1)^p` of them, at `p (n - k)` operations each. All
//! binomials are evaluated through log-gamma so that `n` in the thousands
//! stays finite.

use std::fmt;

use statrs::function::gamma::ln_gamma;

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsdAlgorithm {
    Prange,
    LeeBrickell,
}

impl fmt::Display for IsdAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsdAlgorithm::Prange => "prange",
            IsdAlgorithm::LeeBrickell => "lee-brickell",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsdEstimate {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub q: u64,
    pub algorithm: IsdAlgorithm,
    /// Errors allowed inside the information set (0 for Prange).
    pub p: usize,
    /// Collision window; unused by the implemented algorithms.
    pub window: Option<usize>,
    pub log2_iterations: f64,
    pub log2_cost: f64,
}

/// `log2 C(n, r)`.
pub fn log2_binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return f64::NEG_INFINITY;
    }
    let ln = ln_gamma(n as f64 + 1.0) - ln_gamma(r as f64 + 1.0) - ln_gamma((n - r) as f64 + 1.0);
    ln / std::f64::consts::LN_2
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn log2_elimination(n: usize, k: usize) -> f64 {
    let r = (n - k) as f64;
    (r * r * (n + k) as f64 / 2.0).log2()
}

pub fn isd_workfactor(
    n: usize,
    k: usize,
    t: usize,
    q: u64,
    algorithm: IsdAlgorithm,
) -> Result<IsdEstimate, AnalysisError> {
    if k == 0 || k >= n {
        return Err(AnalysisError::InvalidParameters(format!("need 0 < k < n, got n = {n}, k = {k}")));
    }
    if t > n - k {
        return Err(AnalysisError::InvalidParameters(format!("t = {t} exceeds n - k = {}", n - k)));
    }
    if q < 2 {
        return Err(AnalysisError::InvalidParameters(format!("field size q = {q} below 2")));
    }
    let bit_factor = (q as f64).log2().log2();
    let elim = log2_elimination(n, k);
    let total = log2_binomial(n, t);

    let (p, log2_iterations, per_iteration) = match algorithm {
        IsdAlgorithm::Prange => (0, total - log2_binomial(n - k, t), elim),
        IsdAlgorithm::LeeBrickell => {
            let log_q1 = ((q - 1) as f64).log2();
            (0..=t.min(k))
                .filter(|&p| t - p <= n - k)
                .map(|p| {
                    let iters = total - log2_binomial(n - k, t - p) - log2_binomial(k, p);
                    let enumerate = if p == 0 {
                        f64::NEG_INFINITY
                    } else {
                        log2_binomial(k, p) + p as f64 * log_q1 + ((p * (n - k)) as f64).log2()
                    };
                    (p, iters, log2_add(elim, enumerate))
                })
                .min_by(|a, b| (a.1 + a.2).total_cmp(&(b.1 + b.2)))
                .expect("p = 0 is always admissible")
        }
    };
    Ok(IsdEstimate {
        n,
        k,
        t,
        q,
        algorithm,
        p,
        window: None,
        log2_iterations,
        log2_cost: log2_iterations + per_iteration + bit_factor,
    })
}
