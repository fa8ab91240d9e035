use std::fmt::Write as _;

use super::fmt_value;
use crate::exact::ExtendedReal;
use crate::format::FormatId;
use crate::minifloat::MiniFloatSpec;
use crate::{posit, takum, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct IeeeRange {
    pub subnormal_min: ExtendedReal,
    pub normal_min: ExtendedReal,
    pub max: ExtendedReal,
}

impl IeeeRange {
    fn of(spec: MiniFloatSpec) -> Result<Self> {
        let (subnormal_min, normal_min, max) = spec.dynamic_range()?;
        Ok(IeeeRange {
            subnormal_min,
            normal_min,
            max,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeRow {
    pub n: u32,
    pub takum: (ExtendedReal, ExtendedReal),
    pub posit: (ExtendedReal, ExtendedReal),
    /// The IEEE 754 layout of this width, if there is one.
    pub ieee: Option<IeeeRange>,
}

/// A fixed-width format shown as a single point. `figure_*` is the
/// IEEE-style reading with a reserved top exponent, which differs from the
/// format's own range only for E4M3.
#[derive(Clone, Debug, PartialEq)]
pub struct FormatPoint {
    pub format: FormatId,
    pub range: IeeeRange,
    pub figure_normal_min: ExtendedReal,
    pub figure_max: ExtendedReal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeTable {
    pub rows: Vec<RangeRow>,
    pub points: Vec<FormatPoint>,
}

/// 8-bit IEEE 754 layouts have no standard; this is the (4, 3) split with
/// the usual bias and reserved top exponent.
pub fn ieee_layout(n: u32) -> Option<MiniFloatSpec> {
    match n {
        8 => Some(MiniFloatSpec::ieee(4, 3)),
        16 => Some(MiniFloatSpec::FLOAT16),
        32 => Some(MiniFloatSpec::FLOAT32),
        64 => Some(MiniFloatSpec::FLOAT64),
        _ => None,
    }
}

pub fn dynamic_range_table(widths: &[u32]) -> Result<RangeTable> {
    if widths.is_empty() {
        return Err(Error::Usage("no widths given".into()));
    }
    let rows = widths
        .iter()
        .map(|&n| {
            Ok(RangeRow {
                n,
                takum: takum::dynamic_range(n)?,
                posit: posit::dynamic_range(n)?,
                ieee: ieee_layout(n).map(IeeeRange::of).transpose()?,
            })
        })
        .collect::<Result<_>>()?;
    let mut points = Vec::new();
    for format in [FormatId::BFloat16, FormatId::E4M3, FormatId::E5M2] {
        let range = IeeeRange::of(format.minifloat_spec().expect("minifloat"))?;
        let figure = match format {
            FormatId::E4M3 => IeeeRange::of(MiniFloatSpec::ieee(4, 3))?,
            _ => range.clone(),
        };
        points.push(FormatPoint {
            format,
            range,
            figure_normal_min: figure.normal_min,
            figure_max: figure.max,
        });
    }
    Ok(RangeTable { rows, points })
}

impl RangeTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,takum_min,takum_max,posit_min,posit_max,ieee_normal_min,ieee_max,ieee_subnormal_min\n",
        );
        for r in &self.rows {
            let ieee = match &r.ieee {
                Some(i) => format!(
                    "{},{},{}",
                    fmt_value(&i.normal_min),
                    fmt_value(&i.max),
                    fmt_value(&i.subnormal_min)
                ),
                None => ",,".into(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                fmt_value(&r.takum.0),
                fmt_value(&r.takum.1),
                fmt_value(&r.posit.0),
                fmt_value(&r.posit.1),
                ieee
            );
        }
        out
    }

    pub fn points_csv(&self) -> String {
        let mut out = String::from("format,n,min_subnormal,min_normal,max,figure_min_normal,figure_max\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                p.format,
                p.format.width(),
                fmt_value(&p.range.subnormal_min),
                fmt_value(&p.range.normal_min),
                fmt_value(&p.range.max),
                fmt_value(&p.figure_normal_min),
                fmt_value(&p.figure_max)
            );
        }
        out
    }
}
