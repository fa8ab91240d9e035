//! A single handle over every number format the lab knows about.

use std::fmt;
use std::str::FromStr;

use crate::exact::ExtendedReal;
use crate::minifloat::{MiniFloatBits, MiniFloatSpec};
use crate::posit::{self, PositBits};
use crate::takum::{self, TakumBits};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormatId {
    Takum(u32),
    Posit(u32),
    E4M3,
    E5M2,
    Float16,
    BFloat16,
    Float32,
    Float64,
}

/// Formats benchmarked when the caller does not pick any.
pub const DEFAULT_FORMATS: [FormatId; 11] = [
    FormatId::Takum(8),
    FormatId::Takum(16),
    FormatId::Takum(32),
    FormatId::Posit(8),
    FormatId::Posit(16),
    FormatId::Posit(32),
    FormatId::E4M3,
    FormatId::E5M2,
    FormatId::Float16,
    FormatId::BFloat16,
    FormatId::Float32,
];

impl FormatId {
    pub fn width(&self) -> u32 {
        match *self {
            FormatId::Takum(n) | FormatId::Posit(n) => n,
            FormatId::E4M3 | FormatId::E5M2 => 8,
            FormatId::Float16 | FormatId::BFloat16 => 16,
            FormatId::Float32 => 32,
            FormatId::Float64 => 64,
        }
    }

    pub fn minifloat_spec(&self) -> Option<MiniFloatSpec> {
        Some(match self {
            FormatId::E4M3 => MiniFloatSpec::E4M3,
            FormatId::E5M2 => MiniFloatSpec::E5M2,
            FormatId::Float16 => MiniFloatSpec::FLOAT16,
            FormatId::BFloat16 => MiniFloatSpec::BFLOAT16,
            FormatId::Float32 => MiniFloatSpec::FLOAT32,
            FormatId::Float64 => MiniFloatSpec::FLOAT64,
            FormatId::Takum(_) | FormatId::Posit(_) => return None,
        })
    }

    pub fn encode(&self, v: &ExtendedReal) -> Result<u64> {
        Ok(match *self {
            FormatId::Takum(n) => TakumBits::encode(v, n)?.bits(),
            FormatId::Posit(n) => PositBits::encode(v, n)?.bits(),
            _ => MiniFloatBits::encode(v, self.minifloat_spec().expect("minifloat"))?.bits,
        })
    }

    pub fn decode(&self, bits: u64) -> Result<ExtendedReal> {
        Ok(match *self {
            FormatId::Takum(n) => TakumBits::new(n, bits)?.decode(),
            FormatId::Posit(n) => PositBits::new(n, bits)?.decode(),
            _ => MiniFloatBits::new(self.minifloat_spec().expect("minifloat"), bits)?.decode(),
        })
    }

    /// Rounds `v` into the format and back.
    pub fn round(&self, v: &ExtendedReal) -> Result<ExtendedReal> {
        self.decode(self.encode(v)?)
    }

    /// Smallest positive and largest finite value. For IEEE-style formats the
    /// smallest positive value is the smallest subnormal.
    pub fn dynamic_range(&self) -> Result<(ExtendedReal, ExtendedReal)> {
        match *self {
            FormatId::Takum(n) => takum::dynamic_range(n),
            FormatId::Posit(n) => posit::dynamic_range(n),
            _ => {
                let (sub, _, max) = self.minifloat_spec().expect("minifloat").dynamic_range()?;
                Ok((sub, max))
            }
        }
    }

    /// Family and position used when checking that wider formats do no worse.
    pub(crate) fn family_rank(&self) -> Vec<(&'static str, u32)> {
        match *self {
            FormatId::Takum(n) => vec![("takum", n)],
            FormatId::Posit(n) => vec![("posit", n)],
            FormatId::E4M3 => vec![("ieee-e4m3", 8)],
            FormatId::E5M2 => vec![("ieee-e5m2", 8)],
            FormatId::Float16 => vec![("ieee-e4m3", 16), ("ieee-e5m2", 16)],
            FormatId::BFloat16 => vec![("ieee-bf16", 16)],
            FormatId::Float32 => vec![("ieee-e4m3", 32), ("ieee-e5m2", 32), ("ieee-bf16", 32)],
            FormatId::Float64 => vec![("ieee-e4m3", 64), ("ieee-e5m2", 64), ("ieee-bf16", 64)],
        }
    }
}

impl fmt::Display for FormatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatId::Takum(n) => write!(f, "takum{n}"),
            FormatId::Posit(n) => write!(f, "posit{n}"),
            FormatId::E4M3 => f.write_str("e4m3"),
            FormatId::E5M2 => f.write_str("e5m2"),
            FormatId::Float16 => f.write_str("float16"),
            FormatId::BFloat16 => f.write_str("bfloat16"),
            FormatId::Float32 => f.write_str("float32"),
            FormatId::Float64 => f.write_str("float64"),
        }
    }
}

impl FromStr for FormatId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let width = |rest: &str| -> Result<u32> {
            let n: u32 = rest
                .parse()
                .map_err(|_| Error::Usage(format!("unknown format '{s}'")))?;
            takum::check_width(n)?;
            Ok(n)
        };
        Ok(match lower.as_str() {
            "e4m3" | "ofp8-e4m3" => FormatId::E4M3,
            "e5m2" | "ofp8-e5m2" => FormatId::E5M2,
            "float16" | "f16" | "half" => FormatId::Float16,
            "bfloat16" | "bf16" => FormatId::BFloat16,
            "float32" | "f32" => FormatId::Float32,
            "float64" | "f64" => FormatId::Float64,
            _ => {
                if let Some(rest) = lower.strip_prefix("takum") {
                    FormatId::Takum(width(rest)?)
                } else if let Some(rest) = lower.strip_prefix("posit") {
                    FormatId::Posit(width(rest)?)
                } else {
                    return Err(Error::Usage(format!("unknown format '{s}'")));
                }
            }
        })
    }
}
