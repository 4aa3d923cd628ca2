//! Byte messages to field vectors and back.
//!
//! The payload is a 2-byte big-endian length followed by the message
//! bytes, read as a big-endian bitstream `m` bits per element and
//! zero-padded to `k` elements.

use rlce_core::{Elem, Field};

const LEN_PREFIX: usize = 2;

/// Largest message, in bytes, that fits in `k` elements of `GF(2^m)`.
pub fn capacity(m: u32, k: usize) -> usize {
    (m as usize * k / 8).saturating_sub(LEN_PREFIX).min(u16::MAX as usize)
}

pub fn pack(field: &Field, k: usize, message: &[u8]) -> Option<Vec<Elem>> {
    let m = field.degree();
    if message.len() > capacity(m, k) {
        return None;
    }
    let mut payload = (message.len() as u16).to_be_bytes().to_vec();
    payload.extend_from_slice(message);

    let mut out = Vec::with_capacity(k);
    let mut acc = 0u32;
    let mut bits = 0u32;
    for &byte in &payload {
        acc = acc << 8 | byte as u32;
        bits += 8;
        while bits >= m {
            bits -= m;
            out.push(acc >> bits & ((1 << m) - 1));
        }
        acc &= (1 << bits) - 1;
    }
    if bits > 0 {
        out.push(acc << (m - bits));
    }
    out.resize(k, 0);
    Some(out.into_iter().map(|v| field.elem(v).expect("value below field size")).collect())
}

/// Inverse of [`pack`]; `None` if the length prefix is out of range.
pub fn unpack(field: &Field, elems: &[Elem]) -> Option<Vec<u8>> {
    let m = field.degree();
    let mut bytes = Vec::with_capacity(elems.len() * m as usize / 8);
    let mut acc = 0u32;
    let mut bits = 0u32;
    for e in elems {
        acc = acc << m | e.value() as u32;
        bits += m;
        while bits >= 8 {
            bits -= 8;
            bytes.push((acc >> bits) as u8);
        }
        acc &= (1 << bits) - 1;
    }
    let len = u16::from_be_bytes([*bytes.first()?, *bytes.get(1)?]) as usize;
    if len > capacity(m, elems.len()) {
        return None;
    }
    Some(bytes[LEN_PREFIX..LEN_PREFIX + len].to_vec())
}
