use matcon_cli::{run, Output, ERROR, FAILS, HOLDS};

const NU_FILE: &str = "\
signature imp/2 neg/1
algebra B2 carrier 2
op B2 imp 0,0:1 0,1:1 1,0:0 1,1:1
op B2 neg 0:1 1:0
atlas NU algebra B2 filters {1};{}
";

fn matcon(args: &[&str]) -> Output {
    run(std::iter::once("matcon").chain(args.iter().copied()))
}

fn tsv(args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--format", "tsv"]);
    matcon(&all)
}

fn records(out: &Output) -> Vec<(&str, &str)> {
    out.stdout
        .lines()
        .map(|l| l.split_once('\t').expect("tsv record"))
        .collect()
}

fn value<'a>(out: &'a Output, key: &str) -> &'a str {
    records(out)
        .into_iter()
        .find(|(k, _)| *k == key)
        .unwrap_or_else(|| panic!("no {key} in {}", out.stdout))
        .1
}

fn nu_file() -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nu.mat");
    std::fs::write(&path, NU_FILE).unwrap();
    (dir, path.to_str().unwrap().to_string())
}

#[test]
fn check_exit_status_follows_entailment() {
    let out = tsv(&[
        "check",
        "--use",
        "CL2",
        "--premises",
        "p,(imp p q)",
        "--conclusion",
        "q",
    ]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(value(&out, "entails"), "true");
    assert_eq!(value(&out, "premises"), "{p, (imp p q)}");

    let out = tsv(&["check", "--use", "L3", "--conclusion", "(or p (neg p))"]);
    assert_eq!(out.code, FAILS);
    assert_eq!(value(&out, "entails"), "false");
    assert_eq!(value(&out, "premises"), "{}");
}

#[test]
fn uniformity_reports_the_witness() {
    let (_dir, path) = nu_file();
    let out = tsv(&[
        "uniformity",
        "--matrices",
        &path,
        "--use",
        "NU",
        "--vars",
        "p,q",
        "--depth",
        "1",
    ]);
    assert_eq!(out.code, FAILS);
    assert_eq!(value(&out, "outcome"), "counterexample");
    assert_eq!(value(&out, "witness.x"), "{}");
    assert_eq!(value(&out, "witness.y"), "{q}");
    assert_eq!(value(&out, "witness.alpha"), "(imp p p)");
    assert_eq!(value(&out, "seed"), "1");
    assert_eq!(value(&out, "exhaustive"), "true");

    let out = tsv(&[
        "uniformity",
        "--matrices",
        &path,
        "--use",
        "NU",
        "--semantic",
    ]);
    assert_eq!(out.code, FAILS);
    assert_eq!(value(&out, "check"), "bundle");
    assert_eq!(value(&out, "witness.chart_i"), "1");

    let out = tsv(&["uniformity", "--use", "CL2"]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(value(&out, "outcome"), "no-counterexample");
    assert!(records(&out)
        .iter()
        .any(|(k, _)| *k == "candidates_examined"));
}

#[test]
fn product_summary() {
    let out = tsv(&["product", "--use", "CL2,L3"]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(value(&out, "carrier"), "6");
    assert_eq!(value(&out, "filter_sizes"), "3,2");
    let filters: Vec<&str> = records(&out)
        .into_iter()
        .filter(|(k, _)| *k == "filter")
        .map(|(_, v)| v)
        .collect();
    assert_eq!(filters, ["{(1,0), (1,1), (1,2)}", "{(0,2), (1,2)}"]);
}

#[test]
fn listing_commands() {
    let out = tsv(&["theories", "--use", "CL2", "--vars", "p", "--depth", "1"]);
    assert_eq!(out.code, HOLDS);
    let n: usize = value(&out, "theories").parse().unwrap();
    assert_eq!(
        records(&out).iter().filter(|(k, _)| *k == "theory").count(),
        n
    );

    let out = tsv(&["sigma", "--use", "L3", "--vars", "p"]);
    assert_eq!(value(&out, "truth_sets"), "3");
    assert_eq!(value(&out, "properly_extendable"), "true");
}

#[test]
fn extension_commands() {
    let out = tsv(&[
        "wojcicki",
        "--premises",
        "r1,(imp r1 r2)",
        "--conclusion",
        "r2",
        "--new-vars",
        "r1,r2",
    ]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(value(&out, "witness.y"), "{p, (imp p q)}");
    assert_eq!(value(&out, "witness.beta"), "q");
    assert_eq!(value(&out, "witness.sigma"), "{p -> r1, q -> r2}");

    let out = tsv(&["wojcicki", "--conclusion", "r1"]);
    assert_eq!(out.code, FAILS);
    assert_eq!(value(&out, "entails"), "false");

    let out = tsv(&["conservativity", "--vars", "p"]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(value(&out, "candidates_examined"), "80");
}

#[test]
fn single_matrix_classification() {
    let out = tsv(&["single-matrix", "--use", "CL2"]);
    assert_eq!(out.code, HOLDS);
    assert_eq!(
        value(&out, "classification"),
        "consistent-with-single-matrix"
    );
    let (_dir, path) = nu_file();
    let out = tsv(&["single-matrix", "--matrices", &path, "--use", "NU"]);
    assert_eq!(out.code, FAILS);
    assert_eq!(value(&out, "uniform-syntactic.outcome"), "counterexample");
}

#[test]
fn errors_exit_with_two() {
    let out = matcon(&["check", "--use", "NOPE", "--conclusion", "p"]);
    assert_eq!(out.code, ERROR);
    assert!(out.stderr.contains("NOPE"));
    assert!(out.stdout.is_empty());

    let out = matcon(&["check", "--conclusion", "(imp p"]);
    assert_eq!(out.code, ERROR);
    assert!(out.stderr.contains("parse error"));

    let out = matcon(&["frobnicate"]);
    assert_eq!(out.code, ERROR);

    let out = matcon(&["uniformity", "--set-size", "0"]);
    assert_eq!(out.code, ERROR);

    let out = matcon(&["product", "--use", "L3,L3,L3,L3,L3,L3,L3,L3,L3"]);
    assert_eq!(out.code, ERROR);
    assert!(out.stderr.contains("cap"), "{}", out.stderr);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mat");
    std::fs::write(
        &bad,
        "signature imp/2\nalgebra B2 carrier 2\nop B2 imp 0,0:1 0,1:1 1,1:1\nmatrix T algebra B2 filter 1\n",
    )
    .unwrap();
    let out = matcon(&[
        "check",
        "--matrices",
        bad.to_str().unwrap(),
        "--use",
        "T",
        "--conclusion",
        "p",
    ]);
    assert_eq!(out.code, ERROR);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    assert!(out.stderr.contains("(1,0)"), "{}", out.stderr);

    let missing = dir.path().join("missing.mat");
    let out = matcon(&[
        "check",
        "--matrices",
        missing.to_str().unwrap(),
        "--conclusion",
        "p",
    ]);
    assert_eq!(out.code, ERROR);
}

#[test]
fn help_is_not_an_error() {
    let out = matcon(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("single-matrix"));
}

#[test]
fn text_format_is_aligned() {
    let out = matcon(&["check", "--premises", "p", "--conclusion", "p"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert!(lines
        .iter()
        .any(|l| l.starts_with("entails") && l.ends_with("true")));
    let col = |l: &str| {
        l.find("  ")
            .map(|i| i + l[i..].len() - l[i..].trim_start().len())
    };
    let first = col(lines[0]);
    assert!(lines.iter().all(|l| col(l) == first));
}

#[test]
fn binary_matches_library() {
    let bin = std::process::Command::new(env!("CARGO_BIN_EXE_matcon"))
        .args(["product", "--use", "CL2,L3", "--format", "tsv"])
        .output()
        .unwrap();
    let lib = tsv(&["product", "--use", "CL2,L3"]);
    assert_eq!(bin.status.code(), Some(lib.code));
    assert_eq!(String::from_utf8(bin.stdout).unwrap(), lib.stdout);
}
