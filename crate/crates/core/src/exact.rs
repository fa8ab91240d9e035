//! Exact extended-real values and the relative 2-norm error.
//!
//! Every format decoder in this crate produces an [`ExtendedReal`], and every
//! error metric is accumulated in exact rational arithmetic. The only inexact
//! step is the final square root, which is carried out on big integers to
//! well beyond 30 significant decimal digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Number of significant decimal digits produced by [`RelError`]'s square root.
pub const SQRT_DIGITS: u32 = 36;

/// A value in the extended real line, plus the single not-a-real marker.
///
/// `Finite` is never zero; zero has its own variant so that sign-of-zero
/// questions are answered by the format codecs, not by this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedReal {
    Zero,
    Finite(BigRational),
    PosInf,
    NegInf,
    /// NaR of takums and posits, and every NaN of the IEEE-style formats.
    NaR,
}

impl ExtendedReal {
    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            ExtendedReal::Zero
        } else {
            ExtendedReal::Finite(q)
        }
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// Exact value of a binary64. NaN becomes [`ExtendedReal::NaR`].
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            return ExtendedReal::NaR;
        }
        if x.is_infinite() {
            return if x > 0.0 {
                ExtendedReal::PosInf
            } else {
                ExtendedReal::NegInf
            };
        }
        if x == 0.0 {
            return ExtendedReal::Zero;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(mant);
        let m = if negative { -m } else { m };
        Self::from_rational(dyadic(m, exp))
    }

    /// `sign * mantissa * 2^exp`.
    pub fn from_dyadic(negative: bool, mantissa: u128, exp: i64) -> Self {
        let m = BigInt::from(mantissa);
        Self::from_rational(dyadic(if negative { -m } else { m }, exp))
    }

    /// `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        Self::from_dyadic(false, 1, exp)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedReal::Zero)
    }

    pub fn is_nar(&self) -> bool {
        matches!(self, ExtendedReal::NaR)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::PosInf | ExtendedReal::NegInf)
    }

    /// Zero or finite.
    pub fn is_real(&self) -> bool {
        matches!(self, ExtendedReal::Zero | ExtendedReal::Finite(_))
    }

    /// The value as a rational, if it is zero or finite.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            ExtendedReal::Zero => Some(BigRational::zero()),
            ExtendedReal::Finite(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            ExtendedReal::Finite(q) => ExtendedReal::Finite(q.abs()),
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            other => other.clone(),
        }
    }

    /// Nearest binary64 (round to nearest, ties to even), saturating to
    /// infinity outside the binary64 range. NaR becomes NaN.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::Zero => 0.0,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::NaR => f64::NAN,
            ExtendedReal::Finite(q) => rational_to_f64(q),
        }
    }

    /// Ordering on the real line, `None` if either side is NaR.
    pub fn partial_cmp_real(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        let rank = |x: &Self| match x {
            NegInf => Some(0),
            Zero | Finite(_) => Some(1),
            PosInf => Some(2),
            NaR => None,
        };
        let (ra, rb) = (rank(self)?, rank(other)?);
        if ra != 1 || rb != 1 {
            return Some(ra.cmp(&rb));
        }
        Some(self.to_rational()?.cmp(&other.to_rational()?))
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> Self::Output {
        match self {
            ExtendedReal::Finite(q) => ExtendedReal::Finite(-q),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            other => other,
        }
    }
}

/// Parses decimal text exactly: `-0.1` is one tenth, not the nearest double.
/// Also accepts `inf`, `-inf`, `nar` and `nan`.
impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Usage(format!("not a number: '{s}'"));
        let t = s.trim().to_ascii_lowercase();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        match body {
            "inf" | "infinity" => return Ok(if negative { ExtendedReal::NegInf } else { ExtendedReal::PosInf }),
            "nar" | "nan" => return Ok(ExtendedReal::NaR),
            _ => {}
        }
        let (mantissa, exp) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
            None => (body, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int.is_empty() && frac.is_empty() || !(int.bytes().chain(frac.bytes())).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
        let scale = exp - frac.len() as i64;
        if scale.unsigned_abs() > 100_000 {
            return Err(bad());
        }
        let ten = BigInt::from(10).pow(scale.unsigned_abs() as u32);
        let q = if scale >= 0 {
            BigRational::from_integer(digits * ten)
        } else {
            BigRational::new(digits, ten)
        };
        Ok(ExtendedReal::from_rational(if negative { -q } else { q }))
    }
}

impl fmt::Display for ExtendedReal {
    /// Exact rendering: integers as-is, dyadic fractions as `m/2^k`,
    /// other rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Zero => write!(f, "0"),
            ExtendedReal::PosInf => write!(f, "inf"),
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::NaR => write!(f, "nar"),
            ExtendedReal::Finite(q) => {
                let den = q.denom();
                if den.is_one() {
                    return write!(f, "{}", q.numer());
                }
                let tz = den.trailing_zeros().unwrap_or(0);
                if (den >> tz as usize).is_one() && tz > 16 {
                    write!(f, "{}/2^{}", q.numer(), tz)
                } else {
                    write!(f, "{}/{}", q.numer(), den)
                }
            }
        }
    }
}

pub(crate) fn dyadic(m: BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(m << exp as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-exp) as usize)
    }
}

/// `floor(log2(q))` for positive `q`.
pub(crate) fn floor_log2(q: &BigRational) -> i64 {
    debug_assert!(q.is_positive());
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // now 2^(e-1) < n/d < 2^(e+1)
    let (nn, dd) = shift_pair(n, d, e);
    if nn < dd {
        e -= 1;
    }
    e
}

/// Compares `n` with `d * 2^e` by returning the pair scaled onto integers.
fn shift_pair(n: &BigUint, d: &BigUint, e: i64) -> (BigUint, BigUint) {
    if e >= 0 {
        (n.clone(), d << e as usize)
    } else {
        (n << (-e) as usize, d.clone())
    }
}

/// `q * 2^k`.
pub(crate) fn scale_pow2(q: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        BigRational::new(q.numer() << k as usize, q.denom().clone())
    } else {
        BigRational::new(q.numer().clone(), q.denom() << (-k) as usize)
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    let negative = q.is_negative();
    let a = q.abs();
    let e = floor_log2(&a);
    let v = if e > 1023 {
        f64::INFINITY
    } else {
        // 53 significant bits, or fewer in the subnormal range
        let lsb = (e - 52).max(-1074);
        let scaled = scale_pow2(&a, -lsb);
        let (int, rem) = scaled.numer().div_rem(scaled.denom());
        let twice = rem << 1usize;
        let mut m = int.to_u64().expect("53-bit significand");
        match twice.cmp(scaled.denom()) {
            Ordering::Greater => m += 1,
            Ordering::Equal if m & 1 == 1 => m += 1,
            _ => {}
        }
        if e == 1023 && m == 1u64 << 53 {
            f64::INFINITY
        } else if lsb >= -1022 {
            m as f64 * pow2_f64(lsb)
        } else {
            // subnormal grid: both factors and the product are exact
            m as f64 * pow2_f64(lsb + 1074) * pow2_f64(-1074)
        }
    };
    if negative {
        -v
    } else {
        v
    }
}

/// `2^e` for `e` in the binary64 range, built from its bit pattern.
fn pow2_f64(e: i64) -> f64 {
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// A relative error: exact square plus a decimal rendering of its root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelError {
    Finite {
        /// `sum (a - b)^2 / sum a^2`, exact.
        squared: BigRational,
        /// `sqrt(squared)` to [`SQRT_DIGITS`] significant digits, truncated.
        digits: BigUint,
        /// Decimal exponent: the root is `digits * 10^exp10`.
        exp10: i64,
    },
    /// A converted entry was infinite or NaR.
    Infinite,
}

impl RelError {
    pub fn from_squared(squared: BigRational) -> Self {
        let (digits, exp10) = sqrt_decimal(&squared, SQRT_DIGITS);
        RelError::Finite {
            squared,
            digits,
            exp10,
        }
    }

    pub fn zero() -> Self {
        RelError::from_squared(BigRational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RelError::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RelError::Finite { squared, .. } if squared.is_zero())
    }

    /// Nearest binary64 to the computed root; infinity for the overflow marker.
    pub fn to_f64(&self) -> f64 {
        match self {
            RelError::Infinite => f64::INFINITY,
            RelError::Finite { digits, exp10, .. } => {
                if digits.is_zero() {
                    0.0
                } else {
                    format!("{digits}e{exp10}").parse().expect("decimal literal")
                }
            }
        }
    }

    /// The root as a decimal string with `sig` significant digits (truncated).
    pub fn to_decimal(&self, sig: usize) -> String {
        match self {
            RelError::Infinite => "inf".to_string(),
            RelError::Finite { digits, exp10, .. } => {
                if digits.is_zero() {
                    return "0".to_string();
                }
                let s = digits.to_string();
                let sig = sig.min(s.len());
                let e = exp10 + s.len() as i64 - 1;
                format!("{}.{}e{}", &s[..1], &s[1..sig], e)
            }
        }
    }

    /// `self < threshold`, decided exactly on the squares.
    pub fn is_below(&self, threshold: f64) -> bool {
        match self {
            RelError::Infinite => false,
            RelError::Finite { squared, .. } => {
                let t = ExtendedReal::from_f64(threshold);
                match t {
                    ExtendedReal::PosInf => true,
                    ExtendedReal::Finite(t) if t.is_positive() => *squared < &t * &t,
                    _ => false,
                }
            }
        }
    }
}

impl PartialOrd for RelError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RelError {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RelError::Infinite, RelError::Infinite) => Ordering::Equal,
            (RelError::Infinite, _) => Ordering::Greater,
            (_, RelError::Infinite) => Ordering::Less,
            (RelError::Finite { squared: a, .. }, RelError::Finite { squared: b, .. }) => a.cmp(b),
        }
    }
}

impl fmt::Display for RelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelError::Infinite => write!(f, "inf"),
            _ => write!(f, "{:.16e}", self.to_f64()),
        }
    }
}

/// `floor(sqrt(q) * 10^k)` with `k` chosen so the result has at least `sig`
/// digits. Returns `(digits, -k)`.
fn sqrt_decimal(q: &BigRational, sig: u32) -> (BigUint, i64) {
    if q.is_zero() {
        return (BigUint::zero(), 0);
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    // sqrt(n/d) ~ 10^((log10 n - log10 d)/2)
    let log10_est = ((n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2 / 2.0).floor() as i64;
    let mut k = sig as i64 - log10_est + 1;
    loop {
        let (num, den) = if k >= 0 {
            (n * BigUint::from(10u32).pow(2 * k as u32), d.clone())
        } else {
            (n.clone(), d * BigUint::from(10u32).pow((-2 * k) as u32))
        };
        let root = (num / den).sqrt();
        if root.to_string().len() as u32 >= sig {
            return (root, -k);
        }
        k += 1;
    }
}

/// Relative 2-norm error between reference entries and their converted values.
///
/// Returns [`RelError::Infinite`] if any converted value is infinite or NaR.
pub fn rel_2norm_error(reference: &[ExtendedReal], converted: &[ExtendedReal]) -> Result<RelError, Error> {
    if reference.len() != converted.len() {
        return Err(Error::Usage(format!(
            "{} reference entries but {} converted values",
            reference.len(),
            converted.len()
        )));
    }
    if converted.iter().any(|c| !c.is_real()) {
        return Ok(RelError::Infinite);
    }
    let mut diff = BigRational::zero();
    let mut norm = BigRational::zero();
    for (a, c) in reference.iter().zip(converted) {
        let a = a
            .to_rational()
            .ok_or_else(|| Error::Usage("reference entries must be finite".into()))?;
        let c = c.to_rational().expect("checked above");
        let delta = &a - &c;
        diff += &delta * &delta;
        norm += &a * &a;
    }
    if norm.is_zero() {
        return Err(Error::ZeroReference);
    }
    Ok(RelError::from_squared(diff / norm))
}
