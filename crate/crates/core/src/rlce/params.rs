use std::fmt;

use super::RlceError;
use crate::gf::{MAX_DEGREE, MIN_DEGREE};

/// Scheme parameters: a GRS `[n, k]` code over GF(2^m) correcting `t`
/// errors, with `r` random columns inserted per code column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RlceParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub r: usize,
    pub m: u32,
    /// Nominal security level for registry entries.
    pub security_bits: Option<u32>,
}

/// Recommended parameter sets, all with `r = 1`: (level, n, k, t, m).
pub const RECOMMENDED: [(u32, usize, usize, usize, u32); 5] = [
    (60, 360, 200, 80, 8),
    (80, 560, 380, 90, 8),
    (128, 1020, 660, 180, 9),
    (192, 1560, 954, 203, 10),
    (256, 2184, 1260, 412, 10),
];

impl RlceParams {
    pub fn new(n: usize, k: usize, t: usize, r: usize, m: u32) -> Self {
        RlceParams { n, k, t, r, m, security_bits: None }
    }

    /// Length of public codewords and ciphertexts, `n (r + 1)`.
    pub fn code_length(&self) -> usize {
        self.n * (self.r + 1)
    }

    pub fn field_size(&self) -> usize {
        1usize << self.m
    }

    /// Same code shape, ignoring the nominal level.
    pub fn same_shape(&self, other: &RlceParams) -> bool {
        (self.n, self.k, self.t, self.r, self.m) == (other.n, other.k, other.t, other.r, other.m)
    }

    pub fn validate(&self) -> Result<(), RlceError> {
        let bad = |msg: String| Err(RlceError::InvalidParameters(msg));
        let RlceParams { n, k, t, r, m, .. } = *self;
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return bad(format!("field degree m = {m} outside {MIN_DEGREE}..={MAX_DEGREE}"));
        }
        if k == 0 || k >= n {
            return bad(format!("need 0 < k < n, got n = {n}, k = {k}"));
        }
        if t == 0 {
            return bad("t must be positive".into());
        }
        if r == 0 {
            return bad("r must be at least 1".into());
        }
        if n - k < 2 * t {
            return bad(format!("n - k + 1 = {} < 2t + 1 = {}", n - k + 1, 2 * t + 1));
        }
        if r + 1 >= k {
            return bad(format!("r = {r} must be below k - 1 = {}", k as isize - 1));
        }
        // t must clearly exceed (n - k^2) / 2k; we ask for twice that bound.
        if n > k * k && t * k <= n - k * k {
            return bad(format!("t = {t} too small relative to (n - k^2) / 2k for n = {n}, k = {k}"));
        }
        if n > self.field_size() {
            return bad(format!("n = {n} exceeds the field size 2^{m} = {}", self.field_size()));
        }
        if n > u16::MAX as usize || r > u8::MAX as usize || self.code_length() > u16::MAX as usize + 1 {
            return bad("parameters exceed the key file format limits".into());
        }
        Ok(())
    }
}

impl fmt::Display for RlceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} t={} r={} m={}", self.n, self.k, self.t, self.r, self.m)
    }
}

/// Registry lookup by nominal security level (60, 80, 128, 192 or 256).
pub fn recommended_params(security_bits: u32) -> Result<RlceParams, RlceError> {
    RECOMMENDED
        .iter()
        .find(|row| row.0 == security_bits)
        .map(|&(level, n, k, t, m)| RlceParams {
            n,
            k,
            t,
            r: 1,
            m,
            security_bits: Some(level),
        })
        .ok_or(RlceError::UnknownLevel(security_bits))
}

/// Public key size in bits: `k (n(r+1) - k) m` for the systematic form,
/// `k n(r+1) m` for the full generator.
pub fn public_key_size_bits(params: &RlceParams, systematic: bool) -> u64 {
    let k = params.k as u64;
    let len = params.code_length() as u64;
    let cols = if systematic { len - k } else { len };
    k * cols * params.m as u64
}
