//! Conversion-error benchmark: per-matrix relative errors, cumulative
//! distributions and the dynamic-range table.

mod range;

pub use range::{dynamic_range_table, ieee_layout, FormatPoint, IeeeRange, RangeRow, RangeTable};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::exact::{rel_2norm_error, ExtendedReal, RelError};
use crate::format::FormatId;
use crate::matrix::SparseMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorRecord {
    pub matrix_id: String,
    pub format: FormatId,
    pub rel_error: RelError,
}

/// Converts every stored entry into each format and back, one record per
/// format. An all-zero matrix gives [`Error::ZeroReference`].
pub fn bench_matrix(m: &SparseMatrix, formats: &[FormatId]) -> Result<Vec<ErrorRecord>> {
    if formats.is_empty() {
        return Err(Error::Usage("no formats selected".into()));
    }
    let reference = m.values();
    if reference.iter().all(ExtendedReal::is_zero) {
        return Err(Error::ZeroReference);
    }
    formats
        .iter()
        .map(|&format| {
            let converted = convert_all(&reference, format)?;
            Ok(ErrorRecord {
                matrix_id: m.id.clone(),
                format,
                rel_error: rel_2norm_error(&reference, &converted)?,
            })
        })
        .collect()
}

/// Rounds each value, converting repeated values once.
fn convert_all(values: &[ExtendedReal], format: FormatId) -> Result<Vec<ExtendedReal>> {
    let mut seen: std::collections::HashMap<&ExtendedReal, ExtendedReal> = std::collections::HashMap::new();
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let r = match seen.get(v) {
            Some(r) => r.clone(),
            None => {
                let r = format.round(v)?;
                seen.insert(v, r.clone());
                r
            }
        };
        out.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    /// Sorted by matrix id, then format.
    pub records: Vec<ErrorRecord>,
    /// `(matrix id, reason)` for matrices without records.
    pub skipped: Vec<(String, String)>,
}

/// Benchmarks all matrices on `jobs` threads. The report does not depend on
/// `jobs`.
pub fn bench_all(matrices: &[SparseMatrix], formats: &[FormatId], jobs: usize) -> Result<BenchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        matrices
            .par_iter()
            .map(|m| (m.id.clone(), bench_matrix(m, formats)))
            .collect()
    });
    let mut report = BenchReport::default();
    for (id, r) in results {
        match r {
            Ok(records) => report.records.extend(records),
            Err(Error::ZeroReference) => report.skipped.push((id, "all stored entries are zero".into())),
            Err(e) => return Err(e),
        }
    }
    report
        .records
        .sort_by(|a, b| (&a.matrix_id, a.format).cmp(&(&b.matrix_id, b.format)));
    report.skipped.sort();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdfSeries {
    pub format: FormatId,
    /// `(rank / N, error)` with errors ascending and infinities last.
    pub points: Vec<(f64, RelError)>,
}

impl CdfSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Cumulative distribution of one format's errors.
pub fn build_cdf(records: &[ErrorRecord]) -> Result<CdfSeries> {
    let format = match records.first() {
        Some(r) => r.format,
        None => return Err(Error::Usage("no records to build a distribution from".into())),
    };
    if let Some(r) = records.iter().find(|r| r.format != format) {
        return Err(Error::Usage(format!("mixed formats {format} and {}", r.format)));
    }
    let mut errors: Vec<RelError> = records.iter().map(|r| r.rel_error.clone()).collect();
    errors.sort();
    let n = errors.len() as f64;
    let points = errors
        .into_iter()
        .enumerate()
        .map(|(k, e)| ((k + 1) as f64 / n, e))
        .collect();
    Ok(CdfSeries { format, points })
}

/// One series per format, in format order.
pub fn build_cdfs(records: &[ErrorRecord]) -> Vec<CdfSeries> {
    let mut by_format: BTreeMap<FormatId, Vec<ErrorRecord>> = BTreeMap::new();
    for r in records {
        by_format.entry(r.format).or_default().push(r.clone());
    }
    by_format
        .values()
        .map(|rs| build_cdf(rs).expect("one format, non-empty"))
        .collect()
}

/// Fraction of the series strictly below `threshold`.
pub fn stability_fraction(series: &CdfSeries, threshold: f64) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let below = series.points.iter().filter(|(_, e)| e.is_below(threshold)).count();
    below as f64 / series.len() as f64
}

/// Pairs `(narrow, wide)` of the same family where the wider format did
/// worse on some matrix. Empty when monotonicity holds.
pub fn width_monotonicity_violations(records: &[ErrorRecord]) -> Vec<String> {
    let mut by_matrix: BTreeMap<&str, Vec<&ErrorRecord>> = BTreeMap::new();
    for r in records {
        by_matrix.entry(&r.matrix_id).or_default().push(r);
    }
    let mut out = Vec::new();
    for (id, rs) in by_matrix {
        for a in &rs {
            for b in &rs {
                let wider = a.format.family_rank().iter().any(|(fa, wa)| {
                    b.format.family_rank().iter().any(|(fb, wb)| fa == fb && wb > wa)
                });
                if wider && b.rel_error > a.rel_error {
                    out.push(format!(
                        "{id}: {} ({}) worse than {} ({})",
                        b.format, b.rel_error, a.format, a.rel_error
                    ));
                }
            }
        }
    }
    out
}

pub fn errors_csv(records: &[ErrorRecord]) -> String {
    let mut out = String::from("matrix_id,format,rel_error\n");
    for r in records {
        let _ = writeln!(out, "{},{},{}", r.matrix_id, r.format, r.rel_error);
    }
    out
}

pub fn cdf_csv(series: &[CdfSeries]) -> String {
    let mut out = String::from("format,percent,rel_error\n");
    for s in series {
        for (p, e) in &s.points {
            let _ = writeln!(out, "{},{},{}", s.format, fmt_f64(*p), e);
        }
    }
    out
}

pub fn stability_csv(series: &[CdfSeries], threshold: f64) -> String {
    let mut out = String::from("format,threshold,matrices,fraction_below\n");
    for s in series {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.format,
            fmt_f64(threshold),
            s.len(),
            fmt_f64(stability_fraction(s, threshold))
        );
    }
    out
}

/// 17 significant digits, or `inf`/`-inf`/`nar`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nar".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_value(v: &ExtendedReal) -> String {
    fmt_f64(v.to_f64())
}
