//! Binary file formats for keys and ciphertexts.
//!
//! Every file starts with a 14-byte header:
//!
//! ```text
//! "RLCE" | version (1) | m (1) | r (1) | n (2) | k (2) | t (2) | flags (1)
//! ```
//!
//! followed by field elements, each big-endian in `ceil(m/8)` bytes, and
//! all multi-byte integers big-endian. Flag bit 0 marks a systematic key,
//! bit 1 a private key and bit 2 a ciphertext.

use std::sync::Arc;

use super::{Ciphertext, PrivateKey, PublicKey, RlceError, RlceParams};
use crate::gf::{Elem, Field};
use crate::grs::GrsCode;
use crate::linalg::{Matrix, Permutation};

pub const MAGIC: &[u8; 4] = b"RLCE";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 14;
pub const FLAG_SYSTEMATIC: u8 = 0b001;
pub const FLAG_PRIVATE: u8 = 0b010;
pub const FLAG_CIPHERTEXT: u8 = 0b100;

fn format_err<T>(msg: impl Into<String>) -> Result<T, RlceError> {
    Err(RlceError::Format(msg.into()))
}

fn write_header(params: &RlceParams, flags: u8, out: &mut Vec<u8>) {
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(params.m as u8);
    out.push(params.r as u8);
    out.extend_from_slice(&(params.n as u16).to_be_bytes());
    out.extend_from_slice(&(params.k as u16).to_be_bytes());
    out.extend_from_slice(&(params.t as u16).to_be_bytes());
    out.push(flags);
}

/// Parsed file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub params: RlceParams,
    pub flags: u8,
}

impl Header {
    pub fn parse(bytes: &[u8]) -> Result<Header, RlceError> {
        if bytes.len() < HEADER_LEN {
            return format_err(format!("truncated header: {} of {HEADER_LEN} bytes", bytes.len()));
        }
        if &bytes[..4] != MAGIC {
            return format_err("bad magic, expected \"RLCE\"");
        }
        if bytes[4] != VERSION {
            return format_err(format!("unsupported version {:#04x}", bytes[4]));
        }
        let be16 = |i: usize| u16::from_be_bytes([bytes[i], bytes[i + 1]]) as usize;
        let params = RlceParams::new(be16(7), be16(9), be16(11), bytes[6] as usize, bytes[5] as u32);
        if bytes[13] & !(FLAG_SYSTEMATIC | FLAG_PRIVATE | FLAG_CIPHERTEXT) != 0 {
            return format_err(format!("unknown flag bits {:#04x}", bytes[13]));
        }
        params
            .validate()
            .map_err(|e| RlceError::Format(format!("header parameters rejected: {e}")))?;
        Ok(Header { params, flags: bytes[13] })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    field: &'a Field,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], RlceError> {
        if self.bytes.len() - self.pos < len {
            return format_err(format!(
                "truncated while reading {what}: need {len} bytes at offset {}, have {}",
                self.pos,
                self.bytes.len() - self.pos
            ));
        }
        let s = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn elems(&mut self, count: usize, what: &str) -> Result<Vec<Elem>, RlceError> {
        let width = self.field.byte_width();
        let raw = self.take(count * width, what)?;
        raw.chunks_exact(width)
            .map(|c| {
                self.field
                    .read_elem(c)
                    .map_err(|e| RlceError::Format(format!("{what}: {e}")))
            })
            .collect()
    }

    fn finish(&self) -> Result<(), RlceError> {
        if self.pos != self.bytes.len() {
            return format_err(format!("{} trailing bytes", self.bytes.len() - self.pos));
        }
        Ok(())
    }
}

fn write_elems(field: &Field, elems: &[Elem], out: &mut Vec<u8>) {
    for &e in elems {
        field.write_elem(e, out);
    }
}

fn expect_kind(h: &Header, want: u8, name: &str) -> Result<(), RlceError> {
    if h.flags & (FLAG_PRIVATE | FLAG_CIPHERTEXT) != want {
        return format_err(format!("not a {name} file (flags {:#04x})", h.flags));
    }
    Ok(())
}

impl PublicKey {
    /// Header, then the generator row-major. Systematic keys store only the
    /// `k x (n(r+1) - k)` block to the right of the identity.
    pub fn to_bytes(&self) -> Vec<u8> {
        let flags = if self.systematic { FLAG_SYSTEMATIC } else { 0 };
        let mut out = Vec::new();
        write_header(&self.params, flags, &mut out);
        let skip = if self.systematic { self.params.k } else { 0 };
        let f = self.g.field();
        for row in 0..self.g.rows() {
            write_elems(f, &self.g.row(row)[skip..], &mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<PublicKey, RlceError> {
        let h = Header::parse(bytes)?;
        expect_kind(&h, 0, "public key")?;
        let params = h.params;
        let systematic = h.flags & FLAG_SYSTEMATIC != 0;
        let field = Arc::new(Field::new(params.m)?);
        let (k, len) = (params.k, params.code_length());
        let mut rd = Reader { bytes, pos: HEADER_LEN, field: &field };
        let stored_cols = if systematic { len - k } else { len };
        let entries = rd.elems(k * stored_cols, "public key matrix")?;
        rd.finish()?;
        let stored = Matrix::from_vec(&field, k, stored_cols, entries)?;
        let g = if systematic {
            Matrix::identity(&field, k).hconcat(&stored)?
        } else {
            stored
        };
        let pk = PublicKey::new(params, systematic, g);
        debug_assert_eq!(pk.to_bytes(), bytes);
        Ok(pk)
    }
}

impl PrivateKey {
    /// Header, `S^{-1}`, `alpha`, `v`, the `A_i^{-1}` blocks, `P^{-1}` as
    /// 2-byte indices, then the 32-byte public key digest.
    pub fn to_bytes(&self) -> Vec<u8> {
        let flags = FLAG_PRIVATE | if self.systematic { FLAG_SYSTEMATIC } else { 0 };
        let mut out = Vec::new();
        write_header(&self.params, flags, &mut out);
        let f = self.code.field();
        write_elems(f, self.s_inv.as_slice(), &mut out);
        write_elems(f, self.code.alpha(), &mut out);
        write_elems(f, self.code.multipliers(), &mut out);
        for a in &self.a_inv {
            write_elems(f, a.as_slice(), &mut out);
        }
        for &i in self.p_inv.map() {
            out.extend_from_slice(&(i as u16).to_be_bytes());
        }
        out.extend_from_slice(&self.public_digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<PrivateKey, RlceError> {
        let h = Header::parse(bytes)?;
        expect_kind(&h, FLAG_PRIVATE, "private key")?;
        let params = h.params;
        let field = Arc::new(Field::new(params.m)?);
        let (n, k, w) = (params.n, params.k, params.r + 1);
        let mut rd = Reader { bytes, pos: HEADER_LEN, field: &field };

        let s_inv = Matrix::from_vec(&field, k, k, rd.elems(k * k, "S^-1")?)?;
        let alpha = rd.elems(n, "evaluation points")?;
        let v = rd.elems(n, "column multipliers")?;
        let mut a_inv = Vec::with_capacity(n);
        for _ in 0..n {
            a_inv.push(Matrix::from_vec(&field, w, w, rd.elems(w * w, "A^-1 block")?)?);
        }
        let raw = rd.take(2 * n * w, "P^-1")?;
        let map = raw
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as usize)
            .collect();
        let p_inv = Permutation::from_map(map)
            .map_err(|e| RlceError::Format(format!("P^-1: {e}")))?;
        let mut public_digest = [0u8; 32];
        public_digest.copy_from_slice(rd.take(32, "public key digest")?);
        rd.finish()?;

        let code = GrsCode::from_parts(&field, alpha, v, k)
            .map_err(|e| RlceError::Format(format!("GRS code: {e}")))?;
        Ok(PrivateKey {
            params,
            systematic: h.flags & FLAG_SYSTEMATIC != 0,
            s_inv,
            code,
            a_inv,
            p_inv,
            public_digest,
        })
    }
}

impl Ciphertext {
    pub fn to_bytes(&self, params: &RlceParams) -> Result<Vec<u8>, RlceError> {
        let len = params.code_length();
        if self.y.len() != len {
            return Err(RlceError::DimensionMismatch { expected: len, got: self.y.len() });
        }
        let field = Field::new(params.m)?;
        let mut out = Vec::new();
        write_header(params, FLAG_CIPHERTEXT, &mut out);
        write_elems(&field, &self.y, &mut out);
        Ok(out)
    }

    /// Parses a ciphertext and checks it was produced for `params`.
    pub fn from_bytes(bytes: &[u8], params: &RlceParams) -> Result<Ciphertext, RlceError> {
        let h = Header::parse(bytes)?;
        expect_kind(&h, FLAG_CIPHERTEXT, "ciphertext")?;
        if !h.params.same_shape(params) {
            return format_err(format!("ciphertext parameters ({}) do not match the key ({params})", h.params));
        }
        let field = Field::new(params.m)?;
        let mut rd = Reader { bytes, pos: HEADER_LEN, field: &field };
        let y = rd.elems(params.code_length(), "ciphertext")?;
        rd.finish()?;
        Ok(Ciphertext { y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rlce::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn header_layout() {
        let p = RlceParams::new(40, 20, 10, 1, 8);
        let mut out = Vec::new();
        write_header(&p, FLAG_SYSTEMATIC, &mut out);
        assert_eq!(out, b"RLCE\x01\x08\x01\x00\x28\x00\x14\x00\x0a\x01");
        let h = Header::parse(&out).unwrap();
        assert!(h.params.same_shape(&p));
        assert_eq!(h.flags, FLAG_SYSTEMATIC);
    }

    #[test]
    fn header_errors() {
        assert!(Header::parse(b"RLCE").is_err());
        assert!(Header::parse(b"RLCX\x01\x08\x01\x00\x28\x00\x14\x00\x0a\x00").is_err());
        assert!(Header::parse(b"RLCE\x02\x08\x01\x00\x28\x00\x14\x00\x0a\x00").is_err());
        // t = 12 violates 2t <= n - k
        assert!(Header::parse(b"RLCE\x01\x08\x01\x00\x28\x00\x14\x00\x0c\x00").is_err());
    }

    #[test]
    fn file_sizes() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let p = RlceParams::new(40, 20, 10, 1, 8);
        let (pk, sk) = keygen(&p, false, &mut rng).unwrap();
        assert_eq!(pk.to_bytes().len(), HEADER_LEN + 20 * 80);
        assert_eq!(
            sk.to_bytes().len(),
            HEADER_LEN + 400 + 40 + 40 + 40 * 4 + 2 * 80 + 32
        );
        let (spk, _) = keygen(&p, true, &mut rng).unwrap();
        assert_eq!(spk.to_bytes().len(), HEADER_LEN + 20 * 60);
    }

    #[test]
    fn truncated_and_trailing() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let p = RlceParams::new(40, 20, 10, 1, 8);
        let (pk, sk) = keygen(&p, false, &mut rng).unwrap();
        let bytes = pk.to_bytes();
        assert!(matches!(PublicKey::from_bytes(&bytes[..bytes.len() - 1]), Err(RlceError::Format(_))));
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(matches!(PublicKey::from_bytes(&longer), Err(RlceError::Format(_))));
        assert!(matches!(PublicKey::from_bytes(&sk.to_bytes()), Err(RlceError::Format(_))));
        assert!(matches!(PrivateKey::from_bytes(&bytes), Err(RlceError::Format(_))));
    }
}
