use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn takumlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_takumlab"))
        .args(args)
        .env_remove("TAKUMLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = takumlab(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/desk_errors.csv")
}

#[test]
fn inspect_examples() {
    assert!(ok(&["inspect", "takum", "8", "0x40"]).starts_with("S=0 D=1 R=000 C=∅ F=∅ value=1\n"));
    assert!(ok(&["inspect", "takum", "8", "0x00"]).starts_with("zero\n"));
    assert!(ok(&["inspect", "e4m3", "0x7F"]).starts_with("NaN\n"));
    let enc = ok(&["inspect", "posit8", "-2.5"]);
    assert!(enc.starts_with("input=-2.5 -> 0xB6\n"), "{enc}");
    assert!(enc.ends_with("roundtrip=ok\n"));
    assert_eq!(takumlab(&["inspect", "takum", "12", "0x40"]).status.code(), Some(1));
    assert_eq!(takumlab(&["inspect", "takum8", "banana"]).status.code(), Some(1));
}

#[test]
fn range_csv_and_chart() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("range.svg");
    let points = dir.path().join("points.csv");
    let csv = ok(&[
        "range",
        "--widths",
        "8,16,32,64",
        "--svg",
        svg.to_str().unwrap(),
        "--points",
        points.to_str().unwrap(),
    ]);
    assert_eq!(csv.lines().count(), 5);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg "));
    let points = std::fs::read_to_string(&points).unwrap();
    assert!(points.contains("\nbfloat16,16,"));
    assert_eq!(takumlab(&["range", "--widths", ""]).status.code(), Some(1));
    assert_eq!(takumlab(&["range", "--widths", "24"]).status.code(), Some(1));
}

#[test]
fn bench_desk_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let svg = dir.path().join("cdf.svg");
    let o = takumlab(&["bench", "--jobs", "3", "--out", out.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("takum8: "));
    let errors = std::fs::read_to_string(out.join("errors.csv")).unwrap();
    assert!(errors == std::fs::read_to_string(golden()).unwrap());
    assert!(std::fs::read_to_string(out.join("cdf.csv")).unwrap().starts_with("format,percent,rel_error\n"));
    assert!(std::fs::read_to_string(out.join("stability.csv")).unwrap().contains("takum8,1.0000000000000000e0,20,"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("class=\"series\""));
    // Same bytes on stdout, whatever the parallelism.
    assert_eq!(ok(&["bench", "--jobs", "1"]), errors);
}

#[test]
fn bench_flag_validation() {
    for args in [
        &["bench", "--threshold", "0"][..],
        &["bench", "--formats", "takum12"],
        &["bench", "--formats", "nonsense"],
        &["bench", "--jobs", "0"],
        &["bench", "--formats", "takum8", "--widths", "16"],
    ] {
        assert_eq!(takumlab(args).status.code(), Some(1), "{args:?}");
    }
    let csv = ok(&["bench", "--formats", "e4m3,takum8", "--widths", "8"]);
    assert!(csv.lines().skip(1).all(|l| l.contains(",takum8,") || l.contains(",e4m3,")));
    assert_eq!(csv.lines().count(), 41);
}

fn cache_with_index() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("index.csv"),
        "id,group,name,rows,cols,nnz,field,kind\nHB/bcsstk01,HB,bcsstk01,48,48,400,real,structural problem\n",
    )
    .unwrap();
    dir
}

#[test]
fn offline_cold_cache_names_the_missing_matrix() {
    let dir = cache_with_index();
    let o = takumlab(&["bench", "--collection", "--offline", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("HB/bcsstk01"), "{}", stderr(&o));
    let empty = tempfile::tempdir().unwrap();
    let o = takumlab(&["fetch", "--offline", "--cache-dir", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreachable_mirror_is_a_network_error() {
    let dir = cache_with_index();
    let o = takumlab(&[
        "fetch",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--base-url",
        "http://127.0.0.1:9/MM",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn isa_commands() {
    assert_eq!(ok(&["isa", "stats"]), "total 756\nbitwise 220\nmask 59\ninteger 107\nfloating_point 363\ncryptographic 7\n");
    assert_eq!(ok(&["isa", "classify", "VPMOVD2M"]), "VPMOVD2M,M03,mask\n");
    assert_eq!(ok(&["isa", "rewrite", "KORTESTQ", "vcvtps2ph"]), "KORTESTQ -> KORTESTB64\nVCVTPS2PH -> (none)\n");
    assert_eq!(ok(&["isa", "rewrite", "--generalised", "VPMOVD2M"]), "VPMOVD2M -> VPMOVB162M VPMOVB322M VPMOVB642M VPMOVB82M\n");
    assert_eq!(ok(&["isa", "classify", "--all"]).lines().count(), 757);
    let proposed = ok(&["isa", "enumerate", "--proposed"]);
    assert!(proposed.lines().any(|l| l == "VDPPT8PT16"));
    assert!(ok(&["isa", "diff"]).starts_with("kind,group,legacy,proposed\n"));
    assert!(ok(&["isa", "diff", "--text"]).contains("~ KORTESTQ -> KORTESTB64"));
    assert_eq!(takumlab(&["isa", "classify", "KANDX"]).status.code(), Some(2));
    assert_eq!(takumlab(&["isa", "classify", "not-a-mnemonic"]).status.code(), Some(1));
    assert_eq!(takumlab(&["isa", "classify"]).status.code(), Some(1));
}

#[test]
fn isa_with_custom_tables() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("list.txt");
    let groups = dir.path().join("groups.txt");
    std::fs::write(&list, "KANDB\nKORW\n").unwrap();
    std::fs::write(
        &groups,
        "[M01]\ncategory = mask\nlegacy = K(AND|OR)(B|W)\nproposed = K(AND|OR)B(8|16)\nrule K(AND|OR)B => K$1B8\nrule K(AND|OR)W => K$1B16\n",
    )
    .unwrap();
    let (l, g) = (list.to_str().unwrap(), groups.to_str().unwrap());
    assert_eq!(ok(&["isa", "--list", l, "--groups", g, "stats"]).lines().next(), Some("total 2"));
    assert_eq!(ok(&["isa", "--list", l, "--groups", g, "rewrite", "KORW"]), "KORW -> KORB16\n");
    std::fs::write(&groups, "[M01]\ncategory = mask\nlegacy = K(AND|OR)+\n").unwrap();
    assert_eq!(takumlab(&["isa", "--list", l, "--groups", g, "stats"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(takumlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(takumlab(&[]).status.code(), Some(1));
    assert_eq!(takumlab(&["--help"]).status.code(), Some(0));
    assert_eq!(takumlab(&["--version"]).status.code(), Some(0));
}
