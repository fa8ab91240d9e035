//! Field breakdowns for `takumlab inspect`.

use takumlab::bench::fmt_value;
use takumlab::posit::ES;
use takumlab::{Error, ExtendedReal, FormatId, MiniFloatBits, PositBits, Result, TakumBits};

use crate::config::parse_format;

/// `args` is FORMAT [WIDTH] BITS-OR-VALUE.
pub fn run(args: &[String]) -> Result<String> {
    let (name, input) = match args {
        [f, input] => (f.clone(), input),
        [f, w, input] => (format!("{f}{w}"), input),
        _ => return Err(Error::Usage("expected FORMAT [WIDTH] BITS-OR-VALUE".into())),
    };
    let format = parse_format(&name)?;
    let mut out = String::new();
    let bits = match parse_bits(input)? {
        Some(b) => b,
        None => {
            let v: ExtendedReal = input.parse()?;
            let b = format.encode(&v)?;
            out.push_str(&format!("input={} -> {}\n", input.trim(), hex(b, format.width())));
            b
        }
    };
    let value = format.decode(bits)?;
    out.push_str(&breakdown(format, bits)?);
    out.push('\n');
    let back = format.encode(&value)?;
    let round_trip = if value.is_nar() {
        "n/a"
    } else if back == bits || value.is_zero() && format.decode(back)?.is_zero() {
        "ok"
    } else {
        "FAILED"
    };
    out.push_str(&format!(
        "bits={} decimal={} roundtrip={round_trip}\n",
        hex(bits, format.width()),
        fmt_value(&value)
    ));
    Ok(out)
}

fn parse_bits(s: &str) -> Result<Option<u64>> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    let (digits, radix) = if let Some(h) = lower.strip_prefix("0x") {
        (h, 16)
    } else if let Some(b) = lower.strip_prefix("0b") {
        (b, 2)
    } else {
        return Ok(None);
    };
    let digits = digits.replace('_', "");
    u64::from_str_radix(&digits, radix)
        .map(Some)
        .map_err(|_| Error::Usage(format!("bad bit pattern '{s}'")))
}

fn hex(bits: u64, width: u32) -> String {
    format!("0x{bits:0w$X}", w = width.div_ceil(4) as usize)
}

/// `len` bits of `bits` starting `from` bits below the top of a `total`-bit
/// word, clipped to the first `visible` bits; `∅` when nothing is left.
fn field(bits: u64, total: u32, from: u32, len: u32, visible: u32) -> String {
    let end = (from + len).min(visible);
    if from >= end {
        return "∅".into();
    }
    (from..end).map(|i| if (bits >> (total - 1 - i)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Fraction bits without trailing zeros, so a zero fraction reads `∅`.
fn fraction(bits: u64, total: u32, from: u32, len: u32, visible: u32) -> String {
    match field(bits, total, from, len, visible).trim_end_matches('0') {
        "" | "∅" => "∅".into(),
        f => f.into(),
    }
}

pub fn breakdown(format: FormatId, bits: u64) -> Result<String> {
    Ok(match format {
        FormatId::Takum(n) => takum(TakumBits::new(n, bits)?),
        FormatId::Posit(n) => posit(PositBits::new(n, bits)?),
        _ => minifloat(MiniFloatBits::new(format.minifloat_spec().expect("minifloat"), bits)?),
    })
}

fn takum(t: TakumBits) -> String {
    if t.is_zero() {
        return "zero".into();
    }
    if t.is_nar() {
        return "NaR".into();
    }
    let d = t.fields().expect("nonzero");
    let n = t.width();
    let ext = n.max(12);
    let u = t.bits() << (ext - n);
    format!(
        "S={} D={} R={} C={} F={} value={}",
        field(u, ext, 0, 1, n),
        field(u, ext, 1, 1, n),
        field(u, ext, 2, 3, n),
        field(u, ext, 5, d.r, n),
        fraction(u, ext, 5 + d.r, d.p, n),
        t.decode()
    )
}

fn posit(p: PositBits) -> String {
    if p.is_zero() {
        return "zero".into();
    }
    if p.is_nar() {
        return "NaR".into();
    }
    let d = p.fields().expect("nonzero");
    let n = p.width();
    let abs = if p.to_signed() < 0 { p.negate().bits() } else { p.bits() };
    let sign = if p.to_signed() < 0 { "1" } else { "0" };
    let e_len = ES.min(n - 1 - d.regime_len);
    format!(
        "S={sign} R={} E={} F={} k={} e={} value={}",
        field(abs, n, 1, d.regime_len, n),
        field(abs, n, 1 + d.regime_len, e_len, n),
        fraction(abs, n, 1 + d.regime_len + e_len, d.p, n),
        d.k,
        d.exponent,
        p.decode()
    )
}

fn minifloat(m: MiniFloatBits) -> String {
    if m.is_nan() {
        return "NaN".into();
    }
    let v = m.decode();
    if v.is_zero() {
        return if m.sign() { "-zero" } else { "zero" }.into();
    }
    let n = m.spec.width();
    let e = m.spec.exp_bits;
    format!(
        "S={} E={} M={} value={v}",
        field(m.bits, n, 0, 1, n),
        field(m.bits, n, 1, e, n),
        fraction(m.bits, n, 1 + e, m.spec.frac_bits, n)
    )
}
