//! Linear takums of any width from 2 to 64 bits.
//!
//! An `n`-bit takum is laid out as
//!
//! ```text
//!  S | D | R R R | C ... (r bits) | F ... (p bits)
//! ```
//!
//! Patterns shorter than 12 bits are zero-extended to 12 bits before
//! decoding, so the sign, direction, regime and characteristic always sit in
//! the top 12 bits. For a positive pattern the value is `(1 + f) * 2^c` where
//!
//! * `r = R` if `D = 1`, otherwise `r = 7 - R`,
//! * `c = 2^r - 1 + C` if `D = 1`, otherwise `c = -2^(r+1) + 1 + C`,
//! * `f = F / 2^p` with `p = max(n, 12) - 5 - r`.
//!
//! Negative patterns are the two's complement of positive ones, so the
//! signed-integer order of patterns is the order of their values.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::exact::{dyadic, floor_log2, scale_pow2, ExtendedReal};
use crate::{Error, Result};

/// Smallest characteristic of any takum.
pub const MIN_CHARACTERISTIC: i32 = -255;
/// Largest characteristic of any takum.
pub const MAX_CHARACTERISTIC: i32 = 254;

/// An `n`-bit takum pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TakumBits {
    width: u32,
    bits: u64,
}

/// The fields of a takum pattern, read after zero-extension to 12 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedTakum {
    pub sign: bool,
    pub direction: bool,
    pub regime: u8,
    pub characteristic_bits: u64,
    pub fraction_bits: u64,
    /// Number of characteristic bits.
    pub r: u32,
    /// Number of fraction bits.
    pub p: u32,
    pub characteristic: i32,
    /// `F / 2^p`, in `[0, 1)`.
    pub fraction: BigRational,
}

pub(crate) fn check_width(width: u32) -> Result<()> {
    if (2..=64).contains(&width) {
        Ok(())
    } else {
        Err(Error::Usage(format!("width {width} outside 2..=64")))
    }
}

pub(crate) fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub(crate) fn sign_extend(bits: u64, width: u32) -> i64 {
    let shift = 64 - width;
    ((bits << shift) as i64) >> shift
}

impl TakumBits {
    pub fn new(width: u32, bits: u64) -> Result<Self> {
        check_width(width)?;
        if bits & !mask(width) != 0 {
            return Err(Error::Usage(format!("{bits:#x} does not fit in {width} bits")));
        }
        Ok(TakumBits { width, bits })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn nar(width: u32) -> Result<Self> {
        check_width(width)?;
        Ok(TakumBits {
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

    /// The pattern as a `width`-bit two's-complement integer.
    pub fn to_signed(&self) -> i64 {
        sign_extend(self.bits, self.width)
    }

    /// Field breakdown of the raw pattern. `None` for zero and NaR.
    ///
    /// The value formula `(1 + f) * 2^c` applies to positive patterns only;
    /// a negative pattern's value is that of its negation, negated.
    pub fn fields(&self) -> Option<DecodedTakum> {
        if self.is_zero() || self.is_nar() {
            return None;
        }
        let ext = self.width.max(12);
        let u = self.bits << (ext - self.width);
        let sign = (u >> (ext - 1)) & 1 == 1;
        let direction = (u >> (ext - 2)) & 1 == 1;
        let regime = ((u >> (ext - 5)) & 0b111) as u8;
        let r = if direction { regime as u32 } else { 7 - regime as u32 };
        let p = ext - 5 - r;
        let characteristic_bits = (u >> p) & ((1u64 << r) - 1);
        let fraction_bits = if p == 0 { 0 } else { u & mask(p) };
        let characteristic = if direction {
            (1i32 << r) - 1 + characteristic_bits as i32
        } else {
            -(1i32 << (r + 1)) + 1 + characteristic_bits as i32
        };
        let fraction = BigRational::new(BigInt::from(fraction_bits), BigInt::one() << p as usize);
        Some(DecodedTakum {
            sign,
            direction,
            regime,
            characteristic_bits,
            fraction_bits,
            r,
            p,
            characteristic,
            fraction,
        })
    }

    /// Exact value of the pattern.
    pub fn decode(&self) -> ExtendedReal {
        if self.is_zero() {
            return ExtendedReal::Zero;
        }
        if self.is_nar() {
            return ExtendedReal::NaR;
        }
        if self.to_signed() < 0 {
            return -self.negate().decode();
        }
        let d = self.fields().expect("nonzero, non-NaR");
        // (2^p + F) * 2^(c - p)
        let m = BigInt::from((1u128 << d.p) + d.fraction_bits as u128);
        ExtendedReal::Finite(dyadic(m, d.characteristic as i64 - d.p as i64))
    }

    /// Nearest takum of the given width; ties go to the even pattern.
    ///
    /// Finite nonzero values never round to zero or NaR: magnitudes outside
    /// the dynamic range saturate to the extremal patterns. Infinities and
    /// NaR map to NaR.
    pub fn encode(v: &ExtendedReal, width: u32) -> Result<Self> {
        check_width(width)?;
        let q = match v {
            ExtendedReal::Zero => return Self::zero(width),
            ExtendedReal::PosInf | ExtendedReal::NegInf | ExtendedReal::NaR => return Self::nar(width),
            ExtendedReal::Finite(q) => q,
        };
        let max_pattern = (1u64 << (width - 1)) - 1;
        let decode_pos = |bits: u64| -> BigRational {
            TakumBits { width, bits }
                .decode()
                .to_rational()
                .expect("positive pattern is finite")
        };
        let magnitude = q.abs();
        let lo = truncate_positive(&magnitude, width);
        let bits = round_between(&magnitude, lo, max_pattern, decode_pos);
        let t = TakumBits { width, bits };
        Ok(if q.is_negative() { t.negate() } else { t })
    }

    /// Two's complement within the width.
    pub fn negate(&self) -> Self {
        TakumBits {
            width: self.width,
            bits: self.bits.wrapping_neg() & mask(self.width),
        }
    }

    /// Order of the patterns as signed integers, which is the order of their
    /// values with NaR below everything.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.width != other.width {
            return Err(Error::Usage(format!(
                "cannot compare takums of widths {} and {}",
                self.width, other.width
            )));
        }
        Ok(self.to_signed().cmp(&other.to_signed()))
    }
}

/// The pattern whose value is the largest not exceeding `v`, for positive `v`
/// in the dynamic range. Below the range this is 0, above it is the maximum.
fn truncate_positive(v: &BigRational, width: u32) -> u64 {
    let max_pattern = (1u64 << (width - 1)) - 1;
    let c = floor_log2(v);
    if c < MIN_CHARACTERISTIC as i64 {
        return 0;
    }
    if c > MAX_CHARACTERISTIC as i64 {
        return max_pattern;
    }
    let c = c as i32;
    let (direction, r, cbits) = if c >= 0 {
        let r = 31 - (c as u32 + 1).leading_zeros();
        (1u64, r, (c - ((1 << r) - 1)) as u64)
    } else {
        let r = 31 - ((-c) as u32).leading_zeros();
        (0u64, r, (c + (1 << (r + 1)) - 1) as u64)
    };
    let regime = if direction == 1 { r as u64 } else { 7 - r as u64 };
    let prefix_len = 5 + r;
    let prefix: u128 = ((direction as u128) << (3 + r)) | ((regime as u128) << r) | cbits as u128;
    if width <= prefix_len {
        return (prefix >> (prefix_len - width)) as u64;
    }
    let q = width - prefix_len;
    // floor((v / 2^c - 1) * 2^q)
    let scaled = scale_pow2(v, q as i64 - c as i64);
    let f = (scaled.numer() / scaled.denom()) - (BigInt::one() << q as usize);
    let f = f.to_u128().expect("fraction fits");
    ((prefix << q) | f) as u64
}

/// Rounds positive `v` to the nearer of patterns `lo` and `lo + 1`, with
/// ties to the even pattern and saturation at `1..=max_pattern`.
pub(crate) fn round_between(
    v: &BigRational,
    lo: u64,
    max_pattern: u64,
    decode: impl Fn(u64) -> BigRational,
) -> u64 {
    if lo == 0 {
        return 1;
    }
    if lo >= max_pattern {
        return max_pattern;
    }
    let lo_val = decode(lo);
    let hi_val = decode(lo + 1);
    let twice = v * BigRational::from_integer(2.into());
    match twice.cmp(&(lo_val + hi_val)) {
        Ordering::Less => lo,
        Ordering::Greater => lo + 1,
        Ordering::Equal => {
            if lo.is_multiple_of(2) {
                lo
            } else {
                lo + 1
            }
        }
    }
}

/// Smallest positive and largest finite takum of the given width.
pub fn dynamic_range(width: u32) -> Result<(ExtendedReal, ExtendedReal)> {
    check_width(width)?;
    let min = TakumBits { width, bits: 1 }.decode();
    let max = TakumBits {
        width,
        bits: (1u64 << (width - 1)) - 1,
    }
    .decode();
    Ok((min, max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(width: u32, bits: u64) -> TakumBits {
        TakumBits::new(width, bits).unwrap()
    }

    #[test]
    fn decode_examples() {
        assert_eq!(t(8, 0x00).decode(), ExtendedReal::Zero);
        assert_eq!(t(8, 0x80).decode(), ExtendedReal::NaR);
        assert_eq!(t(8, 0x40).decode(), ExtendedReal::from_integer(1));
        assert_eq!(t(8, 0x01).decode(), ExtendedReal::pow2(-239));
    }

    #[test]
    fn fields_of_smallest_byte() {
        let d = t(8, 0x01).fields().unwrap();
        assert!(!d.sign && !d.direction);
        assert_eq!((d.regime, d.r, d.characteristic_bits, d.characteristic, d.p), (0, 7, 16, -239, 0));
    }

    #[test]
    fn encode_examples() {
        let enc = |v: ExtendedReal, w| TakumBits::encode(&v, w).unwrap().bits();
        assert_eq!(enc(ExtendedReal::from_integer(1), 8), 0x40);
        assert_eq!(enc(ExtendedReal::Zero, 16), 0x0000);
        assert_eq!(enc(ExtendedReal::pow2(300), 8), 0x7F);
        assert_eq!(enc(ExtendedReal::pow2(-300), 8), 0x01);
        assert_eq!(enc(-ExtendedReal::pow2(-300), 8), 0xFF);
        assert_eq!(enc(ExtendedReal::PosInf, 8), 0x80);
        assert_eq!(enc(ExtendedReal::NaR, 32), 0x8000_0000);
    }

    #[test]
    fn negate_examples() {
        assert_eq!(t(8, 0x40).negate().bits(), 0xC0);
        assert_eq!(t(8, 0xC0).decode(), ExtendedReal::from_integer(-1));
        assert_eq!(t(8, 0x00).negate().bits(), 0x00);
        assert_eq!(t(8, 0x80).negate().bits(), 0x80);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(t(8, 0x40).compare(&t(8, 0x41)).unwrap(), Ordering::Less);
        assert_eq!(t(8, 0xC0).compare(&t(8, 0x40)).unwrap(), Ordering::Less);
        assert_eq!(t(8, 0x80).compare(&t(8, 0x00)).unwrap(), Ordering::Less);
        assert!(matches!(t(8, 0).compare(&t(16, 0)), Err(Error::Usage(_))));
    }

    #[test]
    fn dynamic_range_examples() {
        let (lo, hi) = dynamic_range(8).unwrap();
        assert_eq!((lo, hi), (ExtendedReal::pow2(-239), ExtendedReal::pow2(239)));
        // c = -255 needs C = 0, which with F = 0 is the zero pattern
        let (lo, hi) = dynamic_range(12).unwrap();
        assert_eq!((lo, hi), (ExtendedReal::pow2(-254), ExtendedReal::pow2(254)));
        let (lo, hi) = dynamic_range(16).unwrap();
        assert_eq!(lo, ExtendedReal::from_dyadic(false, 17, -259));
        // (2 - 2^-4) * 2^254 = 31 * 2^250
        assert_eq!(hi, ExtendedReal::from_dyadic(false, 31, 250));
    }

    #[test]
    fn width_and_payload_are_validated() {
        assert!(TakumBits::new(1, 0).is_err());
        assert!(TakumBits::new(65, 0).is_err());
        assert!(TakumBits::new(8, 0x100).is_err());
        assert!(TakumBits::new(64, u64::MAX).is_ok());
    }

    #[test]
    fn two_bit_takums() {
        let vals: Vec<_> = (0..4).map(|b| t(2, b).decode()).collect();
        assert_eq!(
            vals,
            vec![
                ExtendedReal::Zero,
                ExtendedReal::from_integer(1),
                ExtendedReal::NaR,
                ExtendedReal::from_integer(-1)
            ]
        );
    }

    #[test]
    fn sixty_four_bit_extremes() {
        let (lo, hi) = dynamic_range(64).unwrap();
        assert_eq!(lo, ExtendedReal::from_dyadic(false, (1u128 << 52) + 1, -255 - 52));
        // (2 - 2^-52) * 2^254
        assert_eq!(hi, ExtendedReal::from_dyadic(false, (1u128 << 53) - 1, 254 - 52));
        let back = TakumBits::encode(&hi, 64).unwrap();
        assert_eq!(back.bits(), (1u64 << 63) - 1);
    }
}
