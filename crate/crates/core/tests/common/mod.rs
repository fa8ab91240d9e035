//! Independent brute-force oracles shared by the integration tests.
//!
//! Decoders here read patterns as strings of '0'/'1' characters and never
//! call into the library's field logic.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use takumlab::{ExtendedReal, FormatId};

fn bit_string(bits: u64, width: u32) -> Vec<u8> {
    (0..width).rev().map(|i| ((bits >> i) & 1) as u8).collect()
}

fn from_bits(b: &[u8]) -> u64 {
    b.iter().fold(0, |acc, &x| acc * 2 + x as u64)
}

/// (1 + F / 2^p) * 2^c as an exact value.
fn scaled(negative: bool, f: u64, p: u32, c: i64) -> ExtendedReal {
    ExtendedReal::from_dyadic(negative, (1u128 << p) + f as u128, c - p as i64)
}

fn twos_complement(bits: u64, width: u32) -> u64 {
    let modulus = 1u128 << width;
    ((modulus - bits as u128) % modulus) as u64
}

pub fn takum_decode(bits: u64, width: u32) -> ExtendedReal {
    if bits == 0 {
        return ExtendedReal::Zero;
    }
    if bits == 1 << (width - 1) {
        return ExtendedReal::NaR;
    }
    if bits >> (width - 1) == 1 {
        return -takum_decode(twos_complement(bits, width), width);
    }
    let mut s = bit_string(bits, width);
    while s.len() < 12 {
        s.push(0);
    }
    let d = s[1];
    let reg = from_bits(&s[2..5]) as u32;
    let r = if d == 1 { reg } else { 7 - reg };
    let cbits = from_bits(&s[5..5 + r as usize]) as i64;
    let c = if d == 1 {
        (1i64 << r) - 1 + cbits
    } else {
        -(1i64 << (r + 1)) + 1 + cbits
    };
    let frac = &s[5 + r as usize..];
    scaled(false, from_bits(frac), frac.len() as u32, c)
}

pub fn posit_decode(bits: u64, width: u32) -> ExtendedReal {
    if bits == 0 {
        return ExtendedReal::Zero;
    }
    if bits == 1 << (width - 1) {
        return ExtendedReal::NaR;
    }
    if bits >> (width - 1) == 1 {
        return -posit_decode(twos_complement(bits, width), width);
    }
    let s = bit_string(bits, width);
    let body = &s[1..];
    let lead = body[0];
    let run = body.iter().take_while(|&&b| b == lead).count();
    let k = if lead == 1 { run as i64 - 1 } else { -(run as i64) };
    let rest: &[u8] = body.get(run + 1..).unwrap_or(&[]);
    let mut e = [0u8; 2];
    for (i, b) in rest.iter().take(2).enumerate() {
        e[i] = *b;
    }
    let frac: &[u8] = rest.get(2..).unwrap_or(&[]);
    scaled(false, from_bits(frac), frac.len() as u32, 4 * k + from_bits(&e) as i64)
}

/// Every pattern of an 8-bit format with its exact value.
pub fn table(format: FormatId) -> Vec<(u64, ExtendedReal)> {
    assert_eq!(format.width(), 8);
    (0..256u64)
        .map(|b| {
            let v = match format {
                FormatId::Takum(8) => takum_decode(b, 8),
                FormatId::Posit(8) => posit_decode(b, 8),
                _ => minifloat_decode(b, format),
            };
            (b, v)
        })
        .collect()
}

/// Straight from the OFP8 and IEEE field definitions, for 8-bit formats.
fn minifloat_decode(bits: u64, format: FormatId) -> ExtendedReal {
    let (eb, fb, bias) = match format {
        FormatId::E4M3 => (4u32, 3u32, 7i64),
        FormatId::E5M2 => (5, 2, 15),
        other => panic!("no oracle for {other}"),
    };
    let neg = bits >> 7 == 1;
    let e = ((bits >> fb) & ((1 << eb) - 1)) as i64;
    let f = bits & ((1 << fb) - 1);
    let all_ones = e == (1 << eb) - 1;
    match format {
        FormatId::E4M3 if all_ones && f == 7 => return ExtendedReal::NaR,
        FormatId::E5M2 if all_ones && f == 0 => {
            return if neg { ExtendedReal::NegInf } else { ExtendedReal::PosInf };
        }
        FormatId::E5M2 if all_ones => return ExtendedReal::NaR,
        _ => {}
    }
    if e == 0 {
        if f == 0 {
            return ExtendedReal::Zero;
        }
        return ExtendedReal::from_dyadic(neg, f as u128, 1 - bias - fb as i64);
    }
    scaled(neg, f, fb, e - bias)
}

fn rat(v: &ExtendedReal) -> BigRational {
    v.to_rational().unwrap_or_else(BigRational::zero)
}

/// What a brute-force nearest search over the full table says `v` encodes to.
///
/// Takum and posit: nearest nonzero real pattern (saturating). IEEE-style:
/// nearest finite pattern or a virtual pattern one ulp past the maximum,
/// which stands for overflow; ties go to the even pattern in both cases.
#[derive(Debug, PartialEq)]
pub enum Nearest {
    Pattern(u64),
    Overflow { negative: bool },
}

pub fn brute_force_nearest(format: FormatId, table: &[(u64, ExtendedReal)], v: f64) -> Nearest {
    assert!(v.is_finite() && v != 0.0);
    let tapered = matches!(format, FormatId::Takum(_) | FormatId::Posit(_));
    let wrong_zero = if v > 0.0 { 0x80 } else { 0x00 };
    // (pattern, value, is_overflow)
    let mut cands: Vec<(u64, f64, bool)> = table
        .iter()
        .filter(|(b, x)| x.is_real() && !(x.is_zero() && (tapered || *b == wrong_zero)))
        .map(|(b, x)| (*b, x.to_f64(), false))
        .collect();
    if !tapered {
        let max = cands.iter().map(|c| c.1).fold(0.0f64, f64::max);
        let top = cands.iter().find(|c| c.1 == max).unwrap().0;
        let below = cands.iter().map(|c| c.1).filter(|&x| x < max).fold(0.0f64, f64::max);
        let over = max + (max - below);
        cands.push((top + 1, over, true));
        cands.push((top + 1 + 0x80, -over, true));
    }
    let dist = |x: f64| (v - x).abs();
    let best = cands.iter().map(|c| dist(c.1)).fold(f64::INFINITY, f64::min);
    // Anything close to the best is settled exactly.
    let exact_v = rat(&ExtendedReal::from_f64(v));
    let exact_dist = |x: f64| (exact_v.clone() - rat(&ExtendedReal::from_f64(x))).abs();
    let pick = cands
        .iter()
        .filter(|c| dist(c.1) <= best * (1.0 + 1e-9))
        .min_by(|a, b| exact_dist(a.1).cmp(&exact_dist(b.1)).then((a.0 & 1).cmp(&(b.0 & 1))))
        .unwrap();
    if pick.2 {
        Nearest::Overflow { negative: v < 0.0 }
    } else {
        Nearest::Pattern(pick.0)
    }
}

/// The four 8-bit formats the rounding oracle covers.
pub const EIGHT_BIT: [FormatId; 4] = [FormatId::Takum(8), FormatId::Posit(8), FormatId::E4M3, FormatId::E5M2];

#[derive(Clone, Copy, Debug)]
pub enum Tapered {
    Takum,
    Posit,
}

struct Codec {
    decode: fn(u64, u32) -> Result<ExtendedReal, String>,
    encode: fn(&ExtendedReal, u32) -> Result<u64, String>,
    negate: fn(u64, u32) -> u64,
    oracle: fn(u64, u32) -> ExtendedReal,
}

fn codec(kind: Tapered) -> Codec {
    use takumlab::{PositBits, TakumBits};
    match kind {
        Tapered::Takum => Codec {
            decode: |b, n| TakumBits::new(n, b).map(|t| t.decode()).map_err(|e| e.to_string()),
            encode: |v, n| TakumBits::encode(v, n).map(|t| t.bits()).map_err(|e| e.to_string()),
            negate: |b, n| TakumBits::new(n, b).unwrap().negate().bits(),
            oracle: takum_decode,
        },
        Tapered::Posit => Codec {
            decode: |b, n| PositBits::new(n, b).map(|t| t.decode()).map_err(|e| e.to_string()),
            encode: |v, n| PositBits::encode(v, n).map(|t| t.bits()).map_err(|e| e.to_string()),
            negate: |b, n| PositBits::new(n, b).unwrap().negate().bits(),
            oracle: posit_decode,
        },
    }
}

fn signed(bits: u64, width: u32) -> i64 {
    ((bits << (64 - width)) as i64) >> (64 - width)
}

/// Over every pattern of the width: the library decode equals the oracle,
/// encode inverts decode, negation is two's complement and negates the value,
/// and signed-integer order is value order with NaR lowest.
pub fn check_exhaustive(kind: Tapered, width: u32) -> Result<(), String> {
    let c = codec(kind);
    let count = 1u64 << width;
    let nar = 1u64 << (width - 1);
    let mut prev: Option<ExtendedReal> = None;
    // Walk patterns in signed order: NaR, most negative, ..., most positive.
    for s in 0..count {
        let bits = (nar + s) % count;
        let v = (c.decode)(bits, width)?;
        let want = (c.oracle)(bits, width);
        if v != want {
            return Err(format!("{kind:?}{width} {bits:#x}: decode {v} but oracle {want}"));
        }
        let neg = (c.negate)(bits, width);
        if neg != (count - bits) % count {
            return Err(format!("{kind:?}{width} {bits:#x}: negate gave {neg:#x}"));
        }
        if bits == nar {
            if !v.is_nar() || neg != nar {
                return Err(format!("{kind:?}{width}: NaR pattern broken"));
            }
            continue;
        }
        if (c.decode)(neg, width)? != -v.clone() {
            return Err(format!("{kind:?}{width} {bits:#x}: decode(negate) is not -decode"));
        }
        let back = (c.encode)(&v, width)?;
        if back != bits {
            return Err(format!("{kind:?}{width} {bits:#x}: round trip gave {back:#x}"));
        }
        if let Some(p) = &prev {
            if p.partial_cmp_real(&v) != Some(std::cmp::Ordering::Less) {
                return Err(format!("{kind:?}{width} {bits:#x}: {p} not below {v}"));
            }
        }
        debug_assert_eq!(signed(bits, width), s as i64 - nar as i64);
        prev = Some(v);
    }
    Ok(())
}

/// Random probes for an 8-bit format: log-uniform magnitudes around the
/// dynamic range, exact table values nudged by an ulp, and midpoints of
/// neighbouring values.
pub fn rounding_probes(format: FormatId, count: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut finite: Vec<f64> = table(format)
        .iter()
        .filter(|(_, v)| v.is_real() && !v.is_zero())
        .map(|(_, v)| v.to_f64())
        .collect();
    finite.sort_by(f64::total_cmp);
    let (lo, hi) = format.dynamic_range().unwrap();
    let (lo, hi) = (lo.to_f64().log2() - 4.0, hi.to_f64().log2() + 4.0);
    (0..count)
        .map(|_| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let x = match rng.gen_range(0..4) {
                0 | 1 => rng.gen_range(lo..hi).exp2(),
                2 => {
                    let i = rng.gen_range(0..finite.len() - 1);
                    let (a, b) = (finite[i], finite[i + 1]);
                    if a.signum() == b.signum() { a.abs() / 2.0 + b.abs() / 2.0 } else { b.abs() }
                }
                _ => {
                    let x = finite[rng.gen_range(0..finite.len())].abs();
                    let ulp = f64::from_bits(x.to_bits() + 1) - x;
                    x + ulp * rng.gen_range(-1.0..=1.0f64).round()
                }
            };
            sign * x
        })
        .collect()
}

/// Number of probes where the library encoder disagrees with the brute-force
/// search, with the first few disagreements spelled out.
pub fn rounding_mismatches(format: FormatId, probes: &[f64]) -> (usize, Vec<String>) {
    let t = table(format);
    let mut bad = 0;
    let mut examples = Vec::new();
    for &x in probes {
        let got = format.encode(&ExtendedReal::from_f64(x)).unwrap();
        let ok = match brute_force_nearest(format, &t, x) {
            Nearest::Pattern(b) => got == b,
            Nearest::Overflow { negative } => {
                let d = format.decode(got).unwrap();
                match format {
                    FormatId::E4M3 => d.is_nar() && (got >> 7 == 1) == negative,
                    _ => d == if negative { ExtendedReal::NegInf } else { ExtendedReal::PosInf },
                }
            }
        };
        if !ok {
            bad += 1;
            if examples.len() < 5 {
                examples.push(format!("{format} {x:e}: got {got:#04x}, oracle {:?}", brute_force_nearest(format, &t, x)));
            }
        }
    }
    (bad, examples)
}

/// E4M3 records with an infinite error on a matrix whose largest magnitude
/// does not exceed 448.
pub fn e4m3_inf_without_cause(
    matrices: &[takumlab::matrix::SparseMatrix],
    records: &[takumlab::bench::ErrorRecord],
) -> Vec<String> {
    let e4m3_max = ExtendedReal::from_integer(448);
    records
        .iter()
        .filter(|r| r.format == FormatId::E4M3 && r.rel_error.is_infinite())
        .filter(|r| {
            let m = matrices.iter().find(|m| m.id == r.matrix_id).unwrap();
            m.max_abs().partial_cmp_real(&e4m3_max) != Some(std::cmp::Ordering::Greater)
        })
        .map(|r| r.matrix_id.clone())
        .collect()
}

/// The relative error of rounding `values` through the brute-force table
/// of an 8-bit format, computed from scratch.
pub fn oracle_rel_error_squared(format: FormatId, values: &[f64]) -> Option<BigRational> {
    let t = table(format);
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    for &x in values {
        let a = rat(&ExtendedReal::from_f64(x));
        let b = if x == 0.0 {
            BigRational::zero()
        } else {
            match brute_force_nearest(format, &t, x) {
                Nearest::Pattern(p) => rat(&t[p as usize].1),
                Nearest::Overflow { .. } => return None,
            }
        };
        num += (a.clone() - b).pow(2);
        den += a.pow(2);
    }
    Some(num / den)
}
