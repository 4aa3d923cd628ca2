//! The RLCE public-key encryption scheme.
//!
//! Key generation takes a random GRS generator `G_s = [g_0, ..., g_{n-1}]`,
//! inserts a random `k x r` block `C_i` after every column `g_i`, mixes each
//! `(r + 1)`-column block with a random invertible `A_i`, and publishes
//! `G = S [g_0, C_0, ..., g_{n-1}, C_{n-1}] diag(A_0, ..., A_{n-1}) P`.
//! Ciphertexts are `y = mG + e` with `weight(e) = t`.
//!
//! Decryption undoes `P` and the blocks `A_i`, keeps the first coordinate
//! of every block, decodes the GRS code and accepts the result only if
//! `weight(y - mG) <= t`.

mod params;
mod wire;

use std::sync::Arc;

use rand::seq::index;
use rand::CryptoRng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gf::{Elem, Field, GfError};
use crate::grs::{GrsCode, GrsError};
use crate::linalg::{weight, LinalgError, Matrix, Permutation};

pub use params::{public_key_size_bits, recommended_params, RlceParams, RECOMMENDED};
pub use wire::{FLAG_CIPHERTEXT, FLAG_PRIVATE, FLAG_SYSTEMATIC, HEADER_LEN, MAGIC, VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RlceError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no recommended parameters for security level {0}")]
    UnknownLevel(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Decoding failed or the re-encryption weight check rejected the
    /// ciphertext. The two causes are deliberately not distinguished.
    #[error("decryption failed")]
    DecryptionFailed,
    #[error("private key does not belong to this public key")]
    KeyMismatch,
    #[error("malformed data: {0}")]
    Format(String),
    #[error("key generation self-check failed")]
    KeyCheck,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Grs(#[from] GrsError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: RlceParams,
    systematic: bool,
    g: Matrix,
    digest: [u8; 32],
}

impl std::fmt::Debug for PublicKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PublicKey")
            .field("params", &self.params)
            .field("systematic", &self.systematic)
            .finish_non_exhaustive()
    }
}

impl PublicKey {
    fn new(params: RlceParams, systematic: bool, g: Matrix) -> Self {
        let mut pk = PublicKey { params, systematic, g, digest: [0; 32] };
        pk.digest = Sha256::digest(pk.to_bytes()).into();
        pk
    }

    pub fn params(&self) -> &RlceParams {
        &self.params
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    /// The full `k x n(r+1)` generator (with the identity prefix when
    /// systematic).
    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn field(&self) -> &Arc<Field> {
        self.g.field()
    }

    /// SHA-256 of the serialized key.
    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    /// `mG`.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, RlceError> {
        if message.len() != self.params.k {
            return Err(RlceError::DimensionMismatch { expected: self.params.k, got: message.len() });
        }
        Ok(self.g.vec_mul(message)?)
    }

    /// `y = mG + e` with `e` of weight exactly `t` at uniform positions and
    /// with uniform nonzero values.
    pub fn encrypt<R: CryptoRng + ?Sized>(
        &self,
        message: &[Elem],
        rng: &mut R,
    ) -> Result<Ciphertext, RlceError> {
        let mut y = self.encode(message)?;
        let field = self.field();
        for pos in index::sample(rng, y.len(), self.params.t) {
            y[pos] += field.random_nonzero(rng);
        }
        Ok(Ciphertext { y })
    }

    pub fn to_systematic(&self) -> Result<PublicKey, RlceError> {
        if self.systematic {
            return Ok(self.clone());
        }
        let (rref, pivots) = self.g.rref();
        if pivots != (0..self.params.k).collect::<Vec<_>>() {
            return Err(RlceError::InvalidParameters(
                "leading k columns are not an information set".into(),
            ));
        }
        Ok(PublicKey::new(self.params, true, rref))
    }
}

#[derive(Clone)]
pub struct PrivateKey {
    params: RlceParams,
    systematic: bool,
    s_inv: Matrix,
    code: GrsCode,
    a_inv: Vec<Matrix>,
    p_inv: Permutation,
    public_digest: [u8; 32],
}

impl std::fmt::Debug for PrivateKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrivateKey").field("params", &self.params).finish_non_exhaustive()
    }
}

impl PrivateKey {
    pub fn params(&self) -> &RlceParams {
        &self.params
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn code(&self) -> &GrsCode {
        &self.code
    }

    pub fn s_inv(&self) -> &Matrix {
        &self.s_inv
    }

    pub fn a_inv_blocks(&self) -> &[Matrix] {
        &self.a_inv
    }

    pub fn p_inv(&self) -> &Permutation {
        &self.p_inv
    }

    /// Digest of the public key this key was generated with.
    pub fn public_digest(&self) -> &[u8; 32] {
        &self.public_digest
    }

    /// `y P^{-1} A^{-1}`, the full unmixed vector of length `n(r+1)`.
    pub fn unmix(&self, y: &[Elem]) -> Result<Vec<Elem>, RlceError> {
        let z = self.p_inv.apply(y)?;
        let w = self.params.r + 1;
        let mut out = Vec::with_capacity(z.len());
        for (block, a) in z.chunks_exact(w).zip(&self.a_inv) {
            out.extend(a.vec_mul(block)?);
        }
        Ok(out)
    }

    /// First coordinate of every unmixed block: a noisy codeword of the
    /// underlying GRS code.
    fn project(&self, y: &[Elem]) -> Result<Vec<Elem>, RlceError> {
        let z = self.p_inv.apply(y)?;
        let w = self.params.r + 1;
        let f = self.code.field();
        Ok(z.chunks_exact(w)
            .zip(&self.a_inv)
            .map(|(block, a)| {
                block
                    .iter()
                    .enumerate()
                    .fold(Elem::ZERO, |acc, (j, &x)| acc + f.mul(x, a.get(j, 0)))
            })
            .collect())
    }

    pub fn decrypt(&self, pk: &PublicKey, ct: &Ciphertext) -> Result<Vec<Elem>, RlceError> {
        if pk.digest() != &self.public_digest {
            return Err(RlceError::KeyMismatch);
        }
        let len = self.params.code_length();
        if ct.y.len() != len {
            return Err(RlceError::DimensionMismatch { expected: len, got: ct.y.len() });
        }
        let projected = self.project(&ct.y)?;
        let decoded = self
            .code
            .decode(&projected, self.params.t)
            .map_err(|_| RlceError::DecryptionFailed)?;
        let message = self.s_inv.vec_mul(&decoded.message)?;
        let reencoded = pk.encode(&message)?;
        let residual: Vec<Elem> = ct.y.iter().zip(&reencoded).map(|(&a, &b)| a + b).collect();
        if weight(&residual) > self.params.t {
            return Err(RlceError::DecryptionFailed);
        }
        Ok(message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub y: Vec<Elem>,
}

impl Ciphertext {
    pub fn new(y: Vec<Elem>) -> Self {
        Ciphertext { y }
    }
}

/// Generates a key pair. With `systematic`, the public generator is stored
/// as `[I | G']`; the row transform and any column reordering this needs
/// are folded into `S` and `P`.
pub fn keygen<R: CryptoRng + ?Sized>(
    params: &RlceParams,
    systematic: bool,
    rng: &mut R,
) -> Result<(PublicKey, PrivateKey), RlceError> {
    params.validate()?;
    let field = Arc::new(Field::new(params.m)?);
    let (n, k, r) = (params.n, params.k, params.r);
    let w = r + 1;

    let code = GrsCode::random(&field, n, k, rng)?;
    let gs = code.generator_matrix();
    let c_blocks: Vec<Matrix> = (0..n).map(|_| Matrix::random(&field, k, r, rng)).collect();
    let a_blocks: Vec<Matrix> = (0..n).map(|_| Matrix::random_nonsingular(&field, w, rng)).collect();
    let s = Matrix::random_nonsingular(&field, k, rng);
    let mut perm = Permutation::random(n * w, rng);

    let g1 = insert_columns(&gs, &c_blocks)?;
    let mixed = s.mul(&mix_blocks(&g1, &a_blocks)?)?;
    let mut g = perm.apply_to_columns(&mixed)?;
    let mut s_inv = s.inverse()?;

    if systematic {
        let (_, pivots) = g.rref();
        let mut order = pivots.clone();
        order.extend((0..g.cols()).filter(|c| !pivots.contains(c)));
        perm = Permutation::from_map(order.iter().map(|&i| perm.map()[i]).collect())?;
        g = g.select_columns(&order)?;
        // G = T^{-1} [I | G'] with T^{-1} the leading block.
        let t_inv = g.column_range(0, k);
        s_inv = s_inv.mul(&t_inv)?;
        g = g.rref().0;
    }

    let a_inv: Vec<Matrix> = a_blocks.iter().map(Matrix::inverse).collect::<Result<_, _>>()?;
    let pk = PublicKey::new(*params, systematic, g);
    let sk = PrivateKey {
        params: *params,
        systematic,
        s_inv,
        code,
        a_inv,
        p_inv: perm.inverse(),
        public_digest: *pk.digest(),
    };

    // Rebuild G from the stored inverses.
    let s_re = sk.s_inv.inverse()?;
    let a_re: Vec<Matrix> = sk.a_inv.iter().map(Matrix::inverse).collect::<Result<_, _>>()?;
    let rebuilt = sk
        .p_inv
        .inverse()
        .apply_to_columns(&s_re.mul(&mix_blocks(&g1, &a_re)?)?)?;
    if rebuilt != pk.g || pk.g.rank() != k {
        return Err(RlceError::KeyCheck);
    }
    Ok((pk, sk))
}

/// `[g_0, C_0, g_1, C_1, ...]`.
pub(crate) fn insert_columns(gs: &Matrix, c_blocks: &[Matrix]) -> Result<Matrix, RlceError> {
    let k = gs.rows();
    let r = c_blocks.first().map_or(0, Matrix::cols);
    let w = r + 1;
    let n = gs.cols();
    if c_blocks.len() != n {
        return Err(RlceError::DimensionMismatch { expected: n, got: c_blocks.len() });
    }
    let mut out = Matrix::zeros(gs.field(), k, n * w);
    for (i, c) in c_blocks.iter().enumerate() {
        if c.rows() != k || c.cols() != r {
            return Err(RlceError::DimensionMismatch { expected: k * r, got: c.rows() * c.cols() });
        }
        for row in 0..k {
            out.set(row, i * w, gs.get(row, i));
            for j in 0..r {
                out.set(row, i * w + 1 + j, c.get(row, j));
            }
        }
    }
    Ok(out)
}

/// `M diag(A_0, ..., A_{n-1})` without forming the block-diagonal matrix.
pub(crate) fn mix_blocks(m: &Matrix, blocks: &[Matrix]) -> Result<Matrix, RlceError> {
    let w = blocks.first().map_or(1, Matrix::rows);
    if m.cols() != blocks.len() * w {
        return Err(RlceError::DimensionMismatch { expected: blocks.len() * w, got: m.cols() });
    }
    let f = m.field().clone();
    let mut out = Matrix::zeros(&f, m.rows(), m.cols());
    for row in 0..m.rows() {
        let src = m.row(row);
        let dst = out.row_mut(row);
        for (i, a) in blocks.iter().enumerate() {
            let d = &mut dst[i * w..(i + 1) * w];
            for j in 0..w {
                f.axpy(d, src[i * w + j], a.row(j));
            }
        }
    }
    Ok(out)
}
