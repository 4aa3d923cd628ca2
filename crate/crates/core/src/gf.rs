//! Arithmetic in GF(2^m) backed by log/antilog tables.
//!
//! Elements are stored as the integer value of their bit-polynomial. All
//! operations that need the reduction polynomial go through a [`Field`],
//! which is immutable once built and can be shared freely between threads.

use std::fmt;
use std::ops::{Add, AddAssign};

use rand::Rng;
use thiserror::Error;

/// Smallest supported extension degree.
pub const MIN_DEGREE: u32 = 4;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 12;

// Lexicographically smallest primitive polynomial for each degree 4..=12.
// 0x11D, 0x211 and 0x409 are the fixed choices for m = 8, 9, 10.
const PRIMITIVE_POLYS: [u32; 9] = [
    0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("unsupported extension degree {0} (expected {MIN_DEGREE}..={MAX_DEGREE})")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#x} is not primitive of degree {m}")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value:#x} is not an element of GF(2^{m})")]
    OutOfRange { m: u32, value: u32 },
}

/// A field element: the bit-polynomial of degree `< m` as an integer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Elem(pub(crate) u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub const fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// Characteristic 2: addition and subtraction are both XOR and need no tables.
impl Add for Elem {
    type Output = Elem;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl AddAssign for Elem {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

/// GF(2^m) with its reduction polynomial and discrete-log tables for the
/// generator `x`.
pub struct Field {
    m: u32,
    poly: u32,
    order: usize,
    log: Vec<u16>,
    // Doubled so that exp[log a + log b] never needs a reduction.
    exp: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(2^m) with the default primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self, GfError> {
        let poly = default_poly(m)?;
        Self::with_poly(m, poly)
    }

    /// Builds GF(2^m) from an explicit reduction polynomial, rejecting it
    /// unless `x` generates the whole multiplicative group.
    pub fn with_poly(m: u32, poly: u32) -> Result<Self, GfError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(GfError::UnsupportedDegree(m));
        }
        if poly >> m != 1 {
            return Err(GfError::NotPrimitive { m, poly });
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut log = vec![0u16; q];
        let mut exp = vec![0u16; 2 * order];
        let mut seen = vec![false; q];
        let mut x: u32 = 1;
        for (i, slot) in exp[..order].iter_mut().enumerate() {
            if seen[x as usize] {
                return Err(GfError::NotPrimitive { m, poly });
            }
            seen[x as usize] = true;
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(GfError::NotPrimitive { m, poly });
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Field {
            m,
            poly,
            order,
            log,
            exp,
        })
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn reduction_poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^m`.
    #[inline]
    pub fn size(&self) -> usize {
        self.order + 1
    }

    /// Size of the multiplicative group, `2^m - 1`.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Bytes used per element in serialized form.
    #[inline]
    pub fn byte_width(&self) -> usize {
        (self.m as usize).div_ceil(8)
    }

    pub fn elem(&self, value: u32) -> Result<Elem, GfError> {
        if value as usize >= self.size() {
            return Err(GfError::OutOfRange { m: self.m, value });
        }
        Ok(Elem(value as u16))
    }

    /// `x^i` for the table generator `x`.
    #[inline]
    pub fn generator_pow(&self, i: usize) -> Elem {
        Elem(self.exp[i % self.order])
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as usize)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(Elem(self.exp[self.order - self.log[a.0 as usize] as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        let b_inv = self.inv(b)?;
        Ok(self.mul(a, b_inv))
    }

    /// `a^e`, with `a^0 = 1` (including `0^0`). Negative exponents invert.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem, GfError> {
        if e == 0 {
            return Ok(Elem::ONE);
        }
        if a.is_zero() {
            return if e < 0 {
                Err(GfError::DivisionByZero)
            } else {
                Ok(Elem::ZERO)
            };
        }
        let order = self.order as i64;
        let l = self.log[a.0 as usize] as i64;
        let idx = (l * e.rem_euclid(order)).rem_euclid(order);
        Ok(Elem(self.exp[idx as usize]))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(0..self.size()) as u16)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(1..self.size()) as u16)
    }

    /// `dst[i] += c * src[i]` for every `i`. The inner loop of all row
    /// elimination and matrix products.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        if c == Elem::ONE {
            for (d, s) in dst.iter_mut().zip(src) {
                d.0 ^= s.0;
            }
            return;
        }
        let lc = self.log[c.0 as usize] as usize;
        let exp = &self.exp[lc..];
        for (d, s) in dst.iter_mut().zip(src) {
            if s.0 != 0 {
                d.0 ^= exp[self.log[s.0 as usize] as usize];
            }
        }
    }

    /// Multiplies every entry of `v` by `c` in place.
    #[inline]
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        if c.is_zero() {
            v.fill(Elem::ZERO);
            return;
        }
        let lc = self.log[c.0 as usize] as usize;
        let exp = &self.exp[lc..];
        for x in v.iter_mut() {
            if x.0 != 0 {
                x.0 = exp[self.log[x.0 as usize] as usize];
            }
        }
    }

    /// Inner product of two equal-length slices.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| acc + self.mul(x, y))
    }

    /// Big-endian encoding in [`Field::byte_width`] bytes.
    pub fn write_elem(&self, a: Elem, out: &mut Vec<u8>) {
        let bytes = a.0.to_be_bytes();
        out.extend_from_slice(&bytes[2 - self.byte_width()..]);
    }

    pub fn read_elem(&self, bytes: &[u8]) -> Result<Elem, GfError> {
        let value = bytes.iter().fold(0u32, |acc, &b| (acc << 8) | b as u32);
        self.elem(value)
    }
}

/// The fixed reduction polynomial used for degree `m`.
pub fn default_poly(m: u32) -> Result<u32, GfError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
        return Err(GfError::UnsupportedDegree(m));
    }
    Ok(PRIMITIVE_POLYS[(m - MIN_DEGREE) as usize])
}
