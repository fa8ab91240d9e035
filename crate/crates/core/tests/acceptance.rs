//! The acceptance criteria, one PASS/FAIL/SKIP line each. Runs without the
//! libtest harness so the lines are always printed.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use takumlab::bench::{bench_all, build_cdfs, dynamic_range_table, errors_csv, stability_fraction, width_monotonicity_violations};
use takumlab::format::DEFAULT_FORMATS;
use takumlab::isa::{Category, Isa, Mnemonic};
use takumlab::matrix::{self, desk, CollectionIndex, FetchOptions, HttpTransport};
use takumlab::{takum, Error, ExtendedReal, FormatId};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::*;

type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_exhaustives() -> Result<String, String> {
    let start = Instant::now();
    for kind in [common::Tapered::Takum, common::Tapered::Posit] {
        for n in [8, 16] {
            common::check_exhaustive(kind, n)?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, format!("took {secs:.1} s"))?;
    Ok(format!("takum and posit at 8 and 16 bits, {secs:.2} s"))
}

fn c2_takum_range() -> Result<String, String> {
    let log10 = |v: &ExtendedReal| v.to_f64().log10();
    for n in [8u32, 12, 16, 32, 64] {
        let (min, max) = takum::dynamic_range(n).map_err(|e| e.to_string())?;
        check(min == common::takum_decode(1, n), format!("n={n}: min is not decode(0x..01)"))?;
        check(max == common::takum_decode((1 << (n - 1)) - 1, n), format!("n={n}: max is not the top pattern"))?;
        if n == 8 {
            check(
                (min.clone(), max.clone()) == (ExtendedReal::pow2(-239), ExtendedReal::pow2(239)),
                "n=8 endpoints",
            )?;
            continue;
        }
        // (2 - 2^-(n-12)) * 2^254 = 2^255 - 2^(266-n)
        let closed = ExtendedReal::from_dyadic(false, (1u128 << (n - 11)) - 1, 266 - n as i64);
        check(max == closed, format!("n={n}: max {max} vs closed form"))?;
        let ratio = min.to_f64() / ExtendedReal::pow2(-255).to_f64();
        check(ratio > 1.0 && ratio <= 2.0, format!("n={n}: min/2^-255 = {ratio}"))?;
        if n >= 32 {
            check((log10(&max) - 76.76).abs() < 0.01, format!("n={n}: log10 max {}", log10(&max)))?;
            check((log10(&min) + 76.76).abs() < 0.01, format!("n={n}: log10 min {}", log10(&min)))?;
        }
    }
    let plateau = 255.0 * 2f64.log10();
    check((plateau - 76.76).abs() < 0.01, format!("log10(2^255) = {plateau}"))?;
    Ok(format!("closed-form max, min = decode(0x..01), plateau 10^±{plateau:.2}"))
}

fn c3_fixed_points() -> Result<String, String> {
    let t = dynamic_range_table(&[8, 16, 32, 64]).map_err(|e| e.to_string())?;
    let point = |f: FormatId| t.points.iter().find(|p| p.format == f).unwrap();
    let sci = |v: &ExtendedReal, digits: usize| format!("{:.*e}", digits - 1, v.to_f64());
    let bf = point(FormatId::BFloat16);
    check(sci(&bf.range.normal_min, 10) == "1.175494351e-38", sci(&bf.range.normal_min, 10))?;
    check(sci(&bf.range.max, 9) == "3.38953139e38", sci(&bf.range.max, 9))?;
    let e5 = point(FormatId::E5M2);
    check(e5.range.normal_min.to_f64() == 6.103515625e-5 && e5.range.max.to_f64() == 57344.0, "E5M2")?;
    let e4 = point(FormatId::E4M3);
    check(e4.range.max.to_f64() == 448.0 && e4.figure_max.to_f64() == 240.0, "E4M3 max columns")?;
    let csv = t.points_csv();
    check(csv.contains(",4.4800000000000000e2,") && csv.contains(",2.4000000000000000e2\n"), "E4M3 csv columns")?;
    Ok("bfloat16, E5M2 exact; E4M3 max 448 with figure column 240".into())
}

fn c4_rounding() -> Result<String, String> {
    let mut parts = Vec::new();
    for (i, f) in common::EIGHT_BIT.into_iter().enumerate() {
        let probes = common::rounding_probes(f, 100_000, 0x5eed + i as u64);
        let (bad, examples) = common::rounding_mismatches(f, &probes);
        check(bad == 0, format!("{f}: {bad} mismatches, e.g. {examples:?}"))?;
        parts.push(f.to_string());
    }
    Ok(format!("{} x 100000 probes, 0 mismatches", parts.join("/")))
}

fn c5_desk() -> Result<String, String> {
    let matrices = desk::load().map_err(|e| e.to_string())?;
    check(matrices.len() == 20, format!("{} desk matrices", matrices.len()))?;
    let run = |jobs| bench_all(&matrices, &DEFAULT_FORMATS, jobs).map_err(|e| e.to_string());
    let a = run(1)?;
    let csv = errors_csv(&a.records);
    for jobs in [1, 3, 8] {
        check(errors_csv(&run(jobs)?.records) == csv, format!("CSV differs with {jobs} jobs"))?;
    }
    let mut formats = DEFAULT_FORMATS.to_vec();
    formats.extend([FormatId::Takum(64), FormatId::Posit(64), FormatId::Float64]);
    let wide = bench_all(&matrices, &formats, 4).map_err(|e| e.to_string())?;
    let violations = width_monotonicity_violations(&wide.records);
    check(violations.is_empty(), format!("{violations:?}"))?;
    let orphans = common::e4m3_inf_without_cause(&matrices, &a.records);
    check(orphans.is_empty(), format!("E4M3 inf without cause: {orphans:?}"))?;
    let infs = a.records.iter().filter(|r| r.format == FormatId::E4M3 && r.rel_error.is_infinite()).count();
    Ok(format!("{} records identical for jobs 1/3/8, monotone, {infs} E4M3 overflows all explained", a.records.len()))
}

fn c6_full_scale() -> Outcome {
    let Some(dir) = matrix::default_cache_dir() else {
        return Skip("no cache directory".into());
    };
    let network = std::env::var_os("TAKUMLAB_NETWORK").is_some();
    let index_path = dir.join(matrix::INDEX_FILE);
    let index = match std::fs::read_to_string(&index_path) {
        Ok(text) => match CollectionIndex::from_csv(&text) {
            Ok(i) => i,
            Err(e) => return Fail(format!("{}: {e}", index_path.display())),
        },
        Err(_) if network => match matrix::refresh_index(&HttpTransport::default()) {
            Ok(i) => i,
            Err(e) => return Skip(format!("network unavailable: {e}")),
        },
        Err(_) => return Skip(format!("no index at {} and TAKUMLAB_NETWORK unset", index_path.display())),
    };
    let mut opts = FetchOptions::new(&dir);
    opts.offline = !network;
    let out = match matrix::fetch_collection(&index, &opts, &HttpTransport::default()) {
        Ok(o) => o,
        Err(Error::NotCached(ids)) => return Skip(format!("{} matrices not cached", ids.len())),
        Err(e @ Error::Network { .. }) => return Skip(format!("network unavailable: {e}")),
        Err(e) => return Fail(e.to_string()),
    };
    let formats = [FormatId::Takum(8), FormatId::Posit(8), FormatId::E4M3, FormatId::E5M2];
    let report = match bench_all(&out.matrices, &formats, num_jobs()) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let expected = [(FormatId::Takum(8), 0.90), (FormatId::Posit(8), 0.65), (FormatId::E4M3, 0.55), (FormatId::E5M2, 0.45)];
    let series = build_cdfs(&report.records);
    let mut parts = Vec::new();
    let mut ok = true;
    for (f, want) in expected {
        let got = series.iter().find(|s| s.format == f).map_or(0.0, |s| stability_fraction(s, 1.0));
        ok &= (got - want).abs() <= 0.05;
        parts.push(format!("{f} {:.1}%", 100.0 * got));
    }
    let summary = format!("{} matrices in manifest: {}", out.manifest.included_count(), parts.join(", "));
    if ok {
        Pass(summary)
    } else {
        Fail(summary)
    }
}

fn num_jobs() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get())
}

fn c7_isa_counts() -> Result<String, String> {
    let isa = Isa::shipped().map_err(|e| e.to_string())?;
    let (_, counts) = isa.enumerate_legacy().map_err(|e| e.to_string())?;
    let want = [
        (Category::Bitwise, 220),
        (Category::Mask, 59),
        (Category::Integer, 107),
        (Category::FloatingPoint, 363),
        (Category::Cryptographic, 7),
    ];
    check(counts.total == 756, format!("total {}", counts.total))?;
    for (c, n) in want {
        check(counts.get(c) == n, format!("{c}: {} != {n}", counts.get(c)))?;
    }
    let examples = [
        ("KANDB", "M01"),
        ("VPMOVD2M", "M03"),
        ("VGF2P8MULB", "C03"),
        ("VDIVNEPBF16", "F04"),
        ("KANDW", "M01"),
        ("VPMOVM2D", "M04"),
        ("VGF2P8AFFINEQB", "C02"),
        ("VADDPH", "F01"),
        ("KORTESTQ", "M01"),
        ("KUNPCKBW", "M02"),
        ("VAESENC", "C01"),
        ("VDPBF16PS", "F08"),
    ];
    for (m, g) in examples {
        let got = isa.classify(&Mnemonic::new(m).unwrap()).map_err(|e| e.to_string())?;
        check(got.id == g, format!("{m} -> {} (want {g})", got.id))?;
    }
    Ok("756 = 220/59/107/363/7, partition holds, 12 worked examples".into())
}

fn c8_isa_proposed() -> Result<String, String> {
    let isa = Isa::shipped().map_err(|e| e.to_string())?;
    let proposed = isa.enumerate_proposed();
    for p in proposed {
        for bad in ["BF16", "HF8", "BF8", "PH"] {
            check(!p.contains(bad), format!("{p} contains {bad}"))?;
        }
        let again = isa.rewrite(&Mnemonic::new(p).unwrap()).map_err(|e| e.to_string())?;
        check(again == BTreeSet::from([p.clone()]), format!("rewrite({p}) = {again:?}"))?;
    }
    for m in isa.legacy() {
        for p in isa.rewrite_generalised(m).map_err(|e| e.to_string())? {
            check(proposed.contains(&p), format!("{m} -> {p} outside the proposed set"))?;
        }
    }
    let lang = |id: &str| isa.table().group(id).unwrap().proposed.expand();
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    check(lang("M03") == set(&["VPMOVB82M", "VPMOVB162M", "VPMOVB322M", "VPMOVB642M"]), "M03")?;
    check(lang("C01") == set(&["VAESDEC", "VAESDECLAST", "VAESENC", "VAESENCLAST"]), "C01")?;
    check(lang("F08") == set(&["VDPPT8PT16", "VDPPT16PT32", "VDPPT32PT64"]), "F08")?;
    Ok(format!("{} proposed mnemonics, closed and idempotent", proposed.len()))
}

fn run(f: impl FnOnce() -> Result<String, String>) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(detail)) => Pass(detail),
        Ok(Err(msg)) => Fail(msg),
        Err(_) => Fail("panicked".into()),
    }
}

fn main() {
    // `cargo test -- <filter>` passes arguments; a filter that excludes this
    // target's name skips it.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: Vec<Criterion> = vec![
        ("format exhaustives", Box::new(|| run(c1_exhaustives))),
        ("takum dynamic range", Box::new(|| run(c2_takum_range))),
        ("fixed-format range points", Box::new(|| run(c3_fixed_points))),
        ("8-bit rounding oracles", Box::new(|| run(c4_rounding))),
        ("desk-scale benchmark", Box::new(|| run(c5_desk))),
        ("full-scale benchmark", Box::new(c6_full_scale)),
        ("ISA counts and classification", Box::new(|| run(c7_isa_counts))),
        ("ISA proposed-set properties", Box::new(|| run(c8_isa_proposed))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let (tag, detail) = match f() {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} {} {name}: {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
