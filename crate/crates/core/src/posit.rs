//! Standard posits (two exponent bits) of any width from 2 to 64 bits.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::exact::{dyadic, floor_log2, scale_pow2, ExtendedReal};
use crate::takum::{check_width, mask, round_between, sign_extend};
use crate::{Error, Result};

/// Exponent bits of a standard posit.
pub const ES: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositBits {
    width: u32,
    bits: u64,
}

/// Field breakdown of a positive posit pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedPosit {
    /// Run-length-decoded regime.
    pub k: i32,
    /// Number of regime bits including the terminating bit, if present.
    pub regime_len: u32,
    /// Exponent value; truncated exponent bits read as zero.
    pub exponent: u32,
    pub fraction_bits: u64,
    pub p: u32,
}

impl PositBits {
    pub fn new(width: u32, bits: u64) -> Result<Self> {
        check_width(width)?;
        if bits & !mask(width) != 0 {
            return Err(Error::Usage(format!("{bits:#x} does not fit in {width} bits")));
        }
        Ok(PositBits { width, bits })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn nar(width: u32) -> Result<Self> {
        check_width(width)?;
        Ok(PositBits {
            width,
            bits: 1u64 << (width - 1),
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_nar(&self) -> bool {
        self.bits == 1u64 << (self.width - 1)
    }

    pub fn to_signed(&self) -> i64 {
        sign_extend(self.bits, self.width)
    }

    /// Fields of the absolute value of the pattern. `None` for zero and NaR.
    pub fn fields(&self) -> Option<DecodedPosit> {
        if self.is_zero() || self.is_nar() {
            return None;
        }
        let body_len = self.width - 1;
        let body = if self.to_signed() < 0 {
            self.negate().bits
        } else {
            self.bits
        } & mask(body_len.max(1));
        let bit = |i: u32| (body >> (body_len - 1 - i)) & 1;
        let lead = bit(0);
        let mut run = 1;
        while run < body_len && bit(run) == lead {
            run += 1;
        }
        let k = if lead == 1 { run as i32 - 1 } else { -(run as i32) };
        let regime_len = (run + 1).min(body_len);
        let rest_len = body_len - regime_len;
        let rest = if rest_len == 0 { 0 } else { body & mask(rest_len) };
        let (exponent, p, fraction_bits) = if rest_len >= ES {
            let p = rest_len - ES;
            ((rest >> p) as u32, p, if p == 0 { 0 } else { rest & mask(p) })
        } else {
            ((rest << (ES - rest_len)) as u32, 0, 0)
        };
        Some(DecodedPosit {
            k,
            regime_len,
            exponent,
            fraction_bits,
            p,
        })
    }

    pub fn decode(&self) -> ExtendedReal {
        if self.is_zero() {
            return ExtendedReal::Zero;
        }
        if self.is_nar() {
            return ExtendedReal::NaR;
        }
        let d = self.fields().expect("nonzero, non-NaR");
        let scale = 4 * d.k as i64 + d.exponent as i64;
        let m = BigInt::from((1u128 << d.p) + d.fraction_bits as u128);
        let v = ExtendedReal::Finite(dyadic(m, scale - d.p as i64));
        if self.to_signed() < 0 {
            -v
        } else {
            v
        }
    }

    /// Nearest posit, ties to the even pattern, saturating at both ends.
    pub fn encode(v: &ExtendedReal, width: u32) -> Result<Self> {
        check_width(width)?;
        let q = match v {
            ExtendedReal::Zero => return Self::zero(width),
            ExtendedReal::PosInf | ExtendedReal::NegInf | ExtendedReal::NaR => return Self::nar(width),
            ExtendedReal::Finite(q) => q,
        };
        let max_pattern = (1u64 << (width - 1)) - 1;
        let magnitude = q.abs();
        let lo = truncate_positive(&magnitude, width);
        let bits = round_between(&magnitude, lo, max_pattern, |bits| {
            PositBits { width, bits }
                .decode()
                .to_rational()
                .expect("positive pattern is finite")
        });
        let p = PositBits { width, bits };
        Ok(if q.is_negative() { p.negate() } else { p })
    }

    pub fn negate(&self) -> Self {
        PositBits {
            width: self.width,
            bits: self.bits.wrapping_neg() & mask(self.width),
        }
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.width != other.width {
            return Err(Error::Usage(format!(
                "cannot compare posits of widths {} and {}",
                self.width, other.width
            )));
        }
        Ok(self.to_signed().cmp(&other.to_signed()))
    }
}

fn truncate_positive(v: &BigRational, width: u32) -> u64 {
    let max_pattern = (1u64 << (width - 1)) - 1;
    let limit = 4 * (width as i64 - 2);
    let s = floor_log2(v);
    if s < -limit {
        return 0;
    }
    if s >= limit {
        return max_pattern;
    }
    let k = s.div_euclid(4);
    let e = s.rem_euclid(4) as u128;
    let (regime, regime_len): (u128, u32) = if k >= 0 {
        // k + 1 ones, then a zero
        (((1u128 << (k + 1)) - 1) << 1, k as u32 + 2)
    } else {
        (1, (-k) as u32 + 1)
    };
    let prefix = (regime << ES) | e;
    let prefix_len = regime_len + ES;
    let body_len = width - 1;
    if body_len <= prefix_len {
        return (prefix >> (prefix_len - body_len)) as u64;
    }
    let q = body_len - prefix_len;
    let scaled = scale_pow2(v, q as i64 - s);
    let f = (scaled.numer() / scaled.denom()) - (BigInt::one() << q as usize);
    ((prefix << q) | f.to_u128().expect("fraction fits")) as u64
}

/// `(2^(-4(n-2)), 2^(4(n-2)))`.
pub fn dynamic_range(width: u32) -> Result<(ExtendedReal, ExtendedReal)> {
    check_width(width)?;
    let min = PositBits { width, bits: 1 }.decode();
    let max = PositBits {
        width,
        bits: (1u64 << (width - 1)) - 1,
    }
    .decode();
    Ok((min, max))
}
