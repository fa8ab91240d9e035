mod common;

use std::path::PathBuf;

use takumlab::bench::{
    bench_all, bench_matrix, build_cdf, build_cdfs, cdf_csv, errors_csv, stability_csv, stability_fraction,
    width_monotonicity_violations,
};
use takumlab::format::DEFAULT_FORMATS;
use takumlab::matrix::{desk, parse_matrix_market};
use takumlab::{Error, ExtendedReal, FormatId, RelError};

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/desk_errors.csv")
}

#[test]
fn desk_errors_match_golden_file() {
    let matrices = desk::load().unwrap();
    let csv = errors_csv(&bench_all(&matrices, &DEFAULT_FORMATS, 4).unwrap().records);
    if std::env::var_os("TAKUMLAB_BLESS").is_some() {
        std::fs::write(golden_path(), &csv).unwrap();
    }
    let golden = std::fs::read_to_string(golden_path()).unwrap();
    assert!(csv == golden, "desk error CSV drifted; rerun with TAKUMLAB_BLESS=1 after checking why");
}

#[test]
fn report_does_not_depend_on_jobs() {
    let matrices = desk::load().unwrap();
    let runs: Vec<String> = [1, 2, 7]
        .into_iter()
        .map(|j| errors_csv(&bench_all(&matrices, &DEFAULT_FORMATS, j).unwrap().records))
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn wider_formats_never_do_worse() {
    let matrices = desk::load().unwrap();
    let mut formats = DEFAULT_FORMATS.to_vec();
    formats.extend([FormatId::Takum(64), FormatId::Posit(64), FormatId::Float64]);
    let report = bench_all(&matrices, &formats, 4).unwrap();
    assert_eq!(width_monotonicity_violations(&report.records), Vec::<String>::new());
}

#[test]
fn e4m3_overflow_only_where_entries_exceed_448() {
    let matrices = desk::load().unwrap();
    let report = bench_all(&matrices, &[FormatId::E4M3], 2).unwrap();
    assert!(report.records.iter().any(|r| r.rel_error.is_infinite()));
    assert_eq!(common::e4m3_inf_without_cause(&matrices, &report.records), Vec::<String>::new());
}

#[test]
fn eight_bit_errors_match_oracle() {
    for m in desk::load().unwrap() {
        let values: Vec<f64> = m.values().iter().map(ExtendedReal::to_f64).collect();
        for f in common::EIGHT_BIT {
            let got = &bench_matrix(&m, &[f]).unwrap()[0].rel_error;
            match (got, common::oracle_rel_error_squared(f, &values)) {
                (RelError::Finite { squared, .. }, Some(want)) => assert_eq!(squared, &want, "{} {f}", m.id),
                (RelError::Infinite, None) => {}
                (got, want) => panic!("{} {f}: {got} vs {want:?}", m.id),
            }
        }
    }
}

#[test]
fn degenerate_inputs() {
    let zero = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 0\n".as_bytes(), "z/z").unwrap();
    assert!(matches!(bench_matrix(&zero, &[FormatId::Takum(8)]), Err(Error::ZeroReference)));
    let one = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 3\n".as_bytes(), "o/o").unwrap();
    assert!(matches!(bench_matrix(&one, &[]), Err(Error::Usage(_))));
    // Exactly representable: zero error everywhere.
    for r in bench_matrix(&one, &DEFAULT_FORMATS).unwrap() {
        assert!(r.rel_error.is_zero(), "{}", r.format);
    }
    let report = bench_all(&[zero, one], &[FormatId::Float16], 2).unwrap();
    assert_eq!(report.records.len(), 1);
    assert_eq!(report.skipped, [("z/z".to_string(), "all stored entries are zero".to_string())]);
}

#[test]
fn distributions_and_stability() {
    let matrices = desk::load().unwrap();
    let report = bench_all(&matrices, &DEFAULT_FORMATS, 4).unwrap();
    let series = build_cdfs(&report.records);
    assert_eq!(series.len(), DEFAULT_FORMATS.len());
    for s in &series {
        assert_eq!(s.len(), 20);
        assert!(s.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(s.points.last().unwrap().0, 1.0);
    }
    let e4m3 = series.iter().find(|s| s.format == FormatId::E4M3).unwrap();
    let takum8 = series.iter().find(|s| s.format == FormatId::Takum(8)).unwrap();
    assert!(stability_fraction(takum8, 1.0) > stability_fraction(e4m3, 1.0));
    assert_eq!(stability_fraction(takum8, f64::INFINITY), 1.0);
    assert!(build_cdf(&report.records).is_err());
    assert!(build_cdf(&[]).is_err());

    let csv = cdf_csv(&series);
    assert!(csv.starts_with("format,percent,rel_error\ntakum8,5.0000000000000003e-2,"));
    assert!(csv.contains(",inf\n"));
    let st = stability_csv(&series, 1.0);
    assert!(st.starts_with("format,threshold,matrices,fraction_below\ntakum8,1.0000000000000000e0,20,"));
}
