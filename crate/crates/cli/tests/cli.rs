use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn posim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posim"))
        .args(args)
        .env_remove("POSIM_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Self(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs and expects exit 1 with a message naming `variant`.
fn domain_error(args: &[&str], variant: &str) {
    let o = posim(args);
    assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    assert!(stderr(&o).contains(variant), "{args:?}: {}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn identical_trees_have_unit_nmi() {
    let f = Files::new();
    let t = f.path("t.po");
    assert!(posim(&[
        "gen",
        "tree",
        "--branching",
        "2",
        "--depth",
        "4",
        "-o",
        s(&t)
    ])
    .status
    .success());
    let o = posim(&["compare", s(&t), s(&t), "--measure", "nmi"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("nmi=1.000000000000"));
}

#[test]
fn json_report_carries_the_terms() {
    let f = Files::new();
    let a = f.write("a.po", "3\n0 1\n1 2\n");
    let b = f.write("b.po", "3\n2 1\n1 0\n");
    let o = posim(&[
        "compare",
        s(&a),
        s(&b),
        "--measure",
        "ami",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["measure"], "ami");
    for key in ["value", "i", "h_kappa", "h_mu", "expected_i", "term_count"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["i"].as_f64().unwrap() - 0.17441604792151583).abs() < 1e-12);
}

#[test]
fn emi_output_is_reproducible() {
    let f = Files::new();
    let t = f.path("t.po");
    posim(&[
        "gen",
        "tree",
        "--branching",
        "3",
        "--depth",
        "3",
        "-o",
        s(&t),
    ]);
    let mu = f.path("mu.po");
    posim(&[
        "gen",
        "random-dag",
        "--n",
        "13",
        "--m",
        "12",
        "--seed",
        "5",
        "-o",
        s(&mu),
    ]);
    let args = [
        "compare",
        s(&t),
        s(&mu),
        "--measure",
        "emi",
        "--samples",
        "300",
        "--seed",
        "9",
    ];
    let first = posim(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let single = Command::new(env!("CARGO_BIN_EXE_posim"))
        .args(args)
        .env("POSIM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, single.stdout);
    assert!(stdout(&first).contains("null_model=dag-uniform"));
    assert!(stdout(&first).contains("samples=300"));

    let mcmc = posim(&[
        "compare",
        s(&t),
        s(&mu),
        "--measure",
        "emi",
        "--samples",
        "50",
        "--null",
        "rewire-mcmc",
        "--burn-in",
        "20",
    ]);
    assert!(
        stdout(&mcmc).contains("null_model=rewire-mcmc"),
        "{}",
        stderr(&mcmc)
    );
    assert!(posim(&[
        "compare",
        s(&t),
        s(&t),
        "--measure",
        "emi",
        "--seed",
        "random"
    ])
    .status
    .success());
}

#[test]
fn distances() {
    let f = Files::new();
    let t = f.path("t.po");
    posim(&[
        "gen",
        "tree",
        "--branching",
        "2",
        "--depth",
        "3",
        "-o",
        s(&t),
    ]);
    let swapped = f.write("s.po", "7\n0 1\n0 2\n1 5\n1 4\n2 3\n2 6\n");
    let o = posim(&["compare", s(&t), s(&swapped), "--measure", "kendall"]);
    assert_eq!(stdout(&o), "kendall=0\n");
    let a = f.write("a.po", "3\n0 1\n1 2\n");
    let b = f.write("b.po", "3\n2 1\n1 0\n");
    assert_eq!(
        stdout(&posim(&["compare", s(&a), s(&b), "--measure", "footrule"])),
        "footrule=4\n"
    );
    let o = posim(&["compare", s(&a), s(&b), "--measure", "kendall-hausdorff"]);
    assert_eq!(stdout(&o), "kendall-hausdorff=3\nextensions_enumerated=2\n");
    let o = posim(&["compare", s(&a), s(&a), "--measure", "naive-nmi"]);
    assert!(stdout(&o).contains("self_defect="));
}

#[test]
fn generators() {
    let o = posim(&["gen", "chain", "--n", "3"]);
    assert_eq!(stdout(&o), "3\n0 1\n1 2\n");
    let o = posim(&["gen", "buckets", "--sizes", "1,2"]);
    assert_eq!(stdout(&o), "3\n0 1\n0 2\n");
    let o = posim(&["gen", "random-dag", "--n", "6", "--m", "8", "--seed", "1"]);
    // implied links vanish from the Hasse edge list
    let links = stdout(&o).lines().count() - 1;
    assert!((5..=8).contains(&links), "{links}");
}

#[test]
fn null_and_term() {
    let o = posim(&["null", "--n", "20", "--m", "25", "--samples", "40"]);
    let text = stdout(&o);
    assert!(text.starts_with("mean_i="), "{text}");
    assert!(text.contains("samples_used=40\nnull_id=dag-uniform\n"));
    let o = posim(&[
        "term",
        "--candidates",
        "3",
        "--a",
        "2",
        "--b",
        "2",
        "--c",
        "2",
    ]);
    assert!(stdout(&o).starts_with("term_mi=0.636514168295\n"));
}

#[test]
fn swap_experiment_csv() {
    let o = posim(&[
        "experiment",
        "swap",
        "--branching",
        "2",
        "--depth",
        "8",
        "--runs",
        "100",
        "--seed",
        "7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,measure,mean,std,runs"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7 * 4);
    let levels: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(levels.len(), 7);
    for r in rows.iter().filter(|r| r[1] == "kendall") {
        assert_eq!((r[2], r[3]), ("0", "0"));
    }
}

#[test]
fn curve_experiments() {
    let f = Files::new();
    let out = f.path("p.csv");
    let o = posim(&[
        "experiment",
        "permute",
        "--depth",
        "5",
        "--runs",
        "5",
        "--scheme",
        "top-down",
        "--step",
        "0.25",
        "-o",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 2);
    let o = posim(&[
        "experiment",
        "rewire",
        "--depth",
        "5",
        "--runs",
        "5",
        "--scheme",
        "bottom-up",
        "--step",
        "0.5",
        "--null-samples",
        "20",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0.5,nmi,"));
    let o = posim(&[
        "experiment",
        "overlap",
        "--depth",
        "4",
        "--runs",
        "30",
        "--step",
        "0.5",
        "--bins",
        "10",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("f1,f2,L"));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec![],
        vec!["compare"],
        vec!["compare", "a", "b", "--measure", "bogus"],
        vec!["gen", "tree", "--branching", "x", "--depth", "2"],
        vec!["experiment", "permute", "--scheme", "sideways"],
        vec!["null", "--n", "3", "--m", "2", "--threads", "0"],
    ] {
        let o = posim(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(posim(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_is_reported() {
    let o = posim(&["compare", "/nonexistent/a.po", "/nonexistent/b.po"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/a.po"));
}

#[test]
fn every_domain_error_reaches_the_cli() {
    let f = Files::new();
    let chain3 = f.write("chain3.po", "3\n0 1\n1 2\n");
    let chain4 = f.write("chain4.po", "4\n0 1\n1 2\n2 3\n");
    let anti = f.write("anti.po", "3\n");
    let tree = f.write("tree.po", "3\n0 1\n0 2\n");
    let forest = f.write("forest.po", "3\n0 1\n");
    let anti4 = f.write("anti4.po", "4\n");
    let compare = |a: &Path, b: &Path, measure: &str| -> Vec<String> {
        ["compare", s(a), s(b), "--measure", measure]
            .iter()
            .map(|x| x.to_string())
            .collect()
    };
    let run = |args: Vec<String>, variant: &str| {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        domain_error(&refs, variant);
    };

    run(
        compare(&f.write("empty.po", "# nothing\n"), &chain3, "nmi"),
        "EmptyInput",
    );
    run(
        compare(&f.write("bad.po", "3\n0 1 2\n"), &chain3, "nmi"),
        "Parse",
    );
    run(
        compare(&f.write("range.po", "3\n0 7\n"), &chain3, "nmi"),
        "CandidateOutOfRange",
    );
    run(
        compare(&f.write("self.po", "3\n1 1\n"), &chain3, "nmi"),
        "SelfLoop",
    );
    run(
        compare(&f.write("cycle.po", "3\n0 1\n1 0\n"), &chain3, "nmi"),
        "CycleDetected",
    );
    let open = f.write("open.cl", "3\n0: 1\n1: 2\n");
    let mut args = compare(&open, &open, "nmi");
    args.extend(["--input".into(), "closure".into()]);
    run(args, "InvalidClosure");
    let mut args = compare(&forest, &forest, "emi");
    args.extend(["--null".into(), "rewire-mcmc".into()]);
    run(args, "NotRooted");
    run(
        ["gen", "tree", "--branching", "2", "--depth", "40"]
            .map(String::from)
            .to_vec(),
        "Overflow",
    );
    run(compare(&chain3, &chain4, "nmi"), "DomainMismatch");
    run(compare(&anti, &anti, "nmi"), "DegenerateOrder");
    run(compare(&anti, &anti, "naive-nmi"), "AllEmptyDownSets");
    run(
        [
            "term",
            "--candidates",
            "5",
            "--a",
            "3",
            "--b",
            "3",
            "--c",
            "1",
        ]
        .map(String::from)
        .to_vec(),
        "RangeViolation",
    );
    let mut args = compare(&anti4, &anti4, "kendall-nn");
    args.extend(["--cap".into(), "100".into()]);
    run(args, "ExtensionCapExceeded");
    run(compare(&tree, &chain3, "footrule"), "NotTotalOrder");
    run(
        ["null", "--n", "3", "--m", "5"].map(String::from).to_vec(),
        "InfeasibleSpec",
    );
    run(
        compare(&tree, &f.write("v.po", "3\n0 1\n"), "emi"),
        "LinkCountMismatch",
    );
}
