//! IEEE 754-style binary formats with configurable field widths.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::exact::{dyadic, floor_log2, scale_pow2, ExtendedReal};
use crate::{Error, Result};

/// How the all-ones exponent field is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NanPolicy {
    /// Infinities (if enabled) at zero significand, NaN otherwise.
    IeeeAllPayloads,
    /// OFP8 E4M3: only `S.1111.111` is NaN; the rest of the binade is finite.
    SinglePatternE4M3,
    /// No NaN encodings at all.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MiniFloatSpec {
    pub exp_bits: u32,
    pub frac_bits: u32,
    pub bias: i32,
    pub has_inf: bool,
    pub nan_policy: NanPolicy,
}

impl MiniFloatSpec {
    pub const FLOAT16: Self = Self::ieee(5, 10);
    pub const BFLOAT16: Self = Self::ieee(8, 7);
    pub const FLOAT32: Self = Self::ieee(8, 23);
    pub const FLOAT64: Self = Self::ieee(11, 52);
    pub const E5M2: Self = Self::ieee(5, 2);
    pub const E4M3: Self = MiniFloatSpec {
        exp_bits: 4,
        frac_bits: 3,
        bias: 7,
        has_inf: false,
        nan_policy: NanPolicy::SinglePatternE4M3,
    };

    /// IEEE layout with the usual bias `2^(e-1) - 1`.
    pub const fn ieee(exp_bits: u32, frac_bits: u32) -> Self {
        MiniFloatSpec {
            exp_bits,
            frac_bits,
            bias: (1 << (exp_bits - 1)) - 1,
            has_inf: true,
            nan_policy: NanPolicy::IeeeAllPayloads,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.exp_bits < 2 || 1 + self.exp_bits + self.frac_bits > 64 {
            return Err(Error::Usage(format!(
                "invalid layout: {} exponent and {} fraction bits",
                self.exp_bits, self.frac_bits
            )));
        }
        if self.nan_policy == NanPolicy::IeeeAllPayloads && self.frac_bits == 0 && self.has_inf {
            return Err(Error::Usage("IEEE NaNs need at least one fraction bit".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> u32 {
        1 + self.exp_bits + self.frac_bits
    }

    fn exp_max_field(&self) -> u64 {
        (1u64 << self.exp_bits) - 1
    }

    fn frac_mask(&self) -> u64 {
        (1u64 << self.frac_bits) - 1
    }

    fn sign_bit(&self) -> u64 {
        1u64 << (self.exp_bits + self.frac_bits)
    }

    /// Largest finite positive pattern.
    fn max_finite_bits(&self) -> u64 {
        let top = self.exp_max_field() << self.frac_bits;
        match self.nan_policy {
            NanPolicy::IeeeAllPayloads => top - 1,
            NanPolicy::SinglePatternE4M3 => top | (self.frac_mask() - 1),
            NanPolicy::None => top | self.frac_mask(),
        }
    }

    /// Canonical positive NaN, if the layout has one.
    fn nan_bits(&self) -> Option<u64> {
        let top = self.exp_max_field() << self.frac_bits;
        match self.nan_policy {
            NanPolicy::IeeeAllPayloads => Some(top | (1u64 << (self.frac_bits - 1))),
            NanPolicy::SinglePatternE4M3 => Some(top | self.frac_mask()),
            NanPolicy::None => None,
        }
    }

    fn inf_bits(&self) -> Option<u64> {
        self.has_inf.then(|| self.exp_max_field() << self.frac_bits)
    }

    /// `(smallest subnormal, smallest normal, largest finite)`.
    pub fn dynamic_range(&self) -> Result<(ExtendedReal, ExtendedReal, ExtendedReal)> {
        self.validate()?;
        let dec = |bits| MiniFloatBits { spec: *self, bits }.decode();
        Ok((dec(1), dec(1u64 << self.frac_bits), dec(self.max_finite_bits())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MiniFloatBits {
    pub spec: MiniFloatSpec,
    pub bits: u64,
}

impl MiniFloatBits {
    pub fn new(spec: MiniFloatSpec, bits: u64) -> Result<Self> {
        spec.validate()?;
        if spec.width() < 64 && bits >> spec.width() != 0 {
            return Err(Error::Usage(format!("{bits:#x} does not fit in {} bits", spec.width())));
        }
        Ok(MiniFloatBits { spec, bits })
    }

    pub fn sign(&self) -> bool {
        self.bits & self.spec.sign_bit() != 0
    }

    pub fn exponent_field(&self) -> u64 {
        (self.bits >> self.spec.frac_bits) & self.spec.exp_max_field()
    }

    pub fn fraction_field(&self) -> u64 {
        self.bits & self.spec.frac_mask()
    }

    pub fn is_nan(&self) -> bool {
        self.decode().is_nar()
    }

    pub fn decode(&self) -> ExtendedReal {
        let s = &self.spec;
        let (e, m) = (self.exponent_field(), self.fraction_field());
        let v = if e == s.exp_max_field() && s.nan_policy != NanPolicy::None {
            match s.nan_policy {
                NanPolicy::IeeeAllPayloads if m == 0 && s.has_inf => ExtendedReal::PosInf,
                NanPolicy::IeeeAllPayloads => ExtendedReal::NaR,
                _ if m == s.frac_mask() => ExtendedReal::NaR,
                _ => normal(s, e, m),
            }
        } else if e == 0 {
            let emin = 1 - s.bias as i64;
            ExtendedReal::from_rational(dyadic(BigInt::from(m), emin - s.frac_bits as i64))
        } else {
            normal(s, e, m)
        };
        if self.sign() {
            -v
        } else {
            v
        }
    }

    /// Round to nearest, ties to even. Overflow gives infinity, or NaN when
    /// the layout has no infinities; underflow gives a signed zero.
    pub fn encode(v: &ExtendedReal, spec: MiniFloatSpec) -> Result<Self> {
        spec.validate()?;
        let overflow = |negative: bool| -> u64 {
            let sign = if negative { spec.sign_bit() } else { 0 };
            sign | spec
                .inf_bits()
                .or(spec.nan_bits())
                .unwrap_or_else(|| spec.max_finite_bits())
        };
        let q = match v {
            ExtendedReal::Zero => return Ok(MiniFloatBits { spec, bits: 0 }),
            ExtendedReal::NaR => {
                let bits = spec.nan_bits().unwrap_or_else(|| spec.max_finite_bits());
                return Ok(MiniFloatBits { spec, bits });
            }
            ExtendedReal::PosInf => return Ok(MiniFloatBits { spec, bits: overflow(false) }),
            ExtendedReal::NegInf => return Ok(MiniFloatBits { spec, bits: overflow(true) }),
            ExtendedReal::Finite(q) => q,
        };
        let negative = q.is_negative();
        let sign = if negative { spec.sign_bit() } else { 0 };
        let a = q.abs();
        let emin = 1 - spec.bias as i64;
        let frac = spec.frac_bits as i64;
        let s = floor_log2(&a);
        if s > spec.bias as i64 + 1 {
            return Ok(MiniFloatBits { spec, bits: overflow(negative) });
        }
        let lsb = s.max(emin) - frac;
        let n = round_half_even(&scale_pow2(&a, -lsb));
        let n = match n.to_u128() {
            Some(n) => n,
            None => return Ok(MiniFloatBits { spec, bits: overflow(negative) }),
        };
        if n == 0 {
            return Ok(MiniFloatBits { spec, bits: sign });
        }
        // the implicit bit of n supplies the +1 of the biased exponent, and a
        // carry out of n moves into the next binade
        let magnitude = (((lsb + frac - emin) as u128) << frac) + n;
        if magnitude > spec.max_finite_bits() as u128 {
            return Ok(MiniFloatBits { spec, bits: overflow(negative) });
        }
        Ok(MiniFloatBits {
            spec,
            bits: sign | magnitude as u64,
        })
    }
}

fn normal(s: &MiniFloatSpec, e: u64, m: u64) -> ExtendedReal {
    let sig = BigInt::from((1u128 << s.frac_bits) + m as u128);
    ExtendedReal::Finite(dyadic(sig, e as i64 - s.bias as i64 - s.frac_bits as i64))
}

fn round_half_even(x: &BigRational) -> BigInt {
    let (int, rem) = x.numer().div_rem(x.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(x.denom()) {
        std::cmp::Ordering::Less => int,
        std::cmp::Ordering::Greater => int + 1,
        std::cmp::Ordering::Equal => {
            if int.is_odd() {
                int + 1
            } else {
                int
            }
        }
    }
}
