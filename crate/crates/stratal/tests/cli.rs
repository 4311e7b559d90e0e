//! End-to-end tests of the command-line surface: exit codes, output
//! shapes, and the parse/print round-trip at volume.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use stratal::cli::run;
use stratal::gen;
use stratal::parse::parse;
use stratal::print::{render, render_formula, Mode};
use stratal::stratify;
use stratal::surface::Syntax;

static FILE_COUNTER: AtomicU64 = AtomicU64::new(0);

fn input_file(content: &str) -> PathBuf {
    let n = FILE_COUNTER.fetch_add(1, Ordering::Relaxed);
    let path =
        std::env::temp_dir().join(format!("stratal-cli-test-{}-{n}.txt", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(args.iter().map(|s| s.to_string()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn run_on(args: &[&str], input: &str) -> (i32, String) {
    let path = input_file(input);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_owned();
    full.push(&p);
    let result = run_cli(&full);
    let _ = std::fs::remove_file(&path);
    result
}

#[test]
fn parse_prints_the_canonical_form() {
    let (code, out) = run_on(&["parse"], "b:0 in a:1");
    assert_eq!(code, 0);
    assert_eq!(out, "b:0 in a:1\n");

    let (code, out) = run_on(&["parse", "--json", "--mode", "nf"], "{a | ~(a in a)}");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "term");
    assert_eq!(v["text"], "{a | ~a in a}");
}

#[test]
fn parse_failures_exit_2() {
    let (code, _) = run_on(&["parse"], "a:0 in");
    assert_eq!(code, 2);
    // Level annotation missing in tst mode.
    let (code, _) = run_on(&["parse"], "a in b");
    assert_eq!(code, 2);
    // Level annotation present in nf mode.
    let (code, _) = run_on(&["parse", "--mode", "nf"], "a:1 in b:2");
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_2() {
    let (code, _) = run_cli(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = run_cli(&["normalize", "--strategy", "sideways"]);
    assert_eq!(code, 2);
}

#[test]
fn check_reports_violations() {
    let (code, out) = run_on(&["check"], "a:2 in b:3");
    assert_eq!((code, out.as_str()), (0, "stratified\n"));

    let (code, out) = run_on(&["check", "--json"], "a:2 in c:4");
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["violations"][0]["kind"], "bad_membership");
    assert_eq!(v["violations"][0]["member_level"], 2);
    assert_eq!(v["violations"][0]["container_level"], 4);
}

#[test]
fn infer_accepts_and_rejects() {
    let (code, out) = run_on(&["infer", "--json"], "{a | true}");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], true);

    let (code, out) = run_on(&["infer", "--json"], "{a | ~(a in a)}");
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["violation"]["kind"], "cycle");
    assert_ne!(v["violation"]["net_offset"], 0);
}

#[test]
fn normalize_modes_and_strategies() {
    // Big-step on leveled input.
    let (code, out) = run_on(&["normalize"], "b:0 in {q:0 | q:0 in c:1}");
    assert_eq!((code, out.as_str()), (0, "b:0 in c:1\n"));

    // Small-step agrees.
    let (code, out) = run_on(
        &["normalize", "--strategy", "outermost"],
        "b:0 in {q:0 | q:0 in c:1}",
    );
    assert_eq!((code, out.as_str()), (0, "b:0 in c:1\n"));

    // nf mode infers, normalizes, and prints without levels.
    let (code, out) = run_on(
        &["normalize", "--mode", "nf", "--strategy", "innermost"],
        "b in {q | q in c}",
    );
    assert_eq!((code, out.as_str()), (0, "b in c\n"));

    // Raw mode needs fuel.
    let (code, _) = run_on(
        &["normalize", "--mode", "raw", "--strategy", "outermost"],
        "{a | a in a} in {a | a in a}",
    );
    assert_eq!(code, 2);
    // Raw big-step is refused.
    let (code, _) = run_on(
        &["normalize", "--mode", "raw", "--fuel", "5"],
        "{a | a in a} in {a | a in a}",
    );
    assert_eq!(code, 2);

    // The divergent example exhausts its fuel.
    let (code, out) = run_on(
        &[
            "normalize",
            "--mode",
            "raw",
            "--strategy",
            "outermost",
            "--fuel",
            "7",
            "--json",
        ],
        "{a | a in a} in {a | a in a}",
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "fuel_exhausted");
    assert_eq!(v["steps"], 7);
}

#[test]
fn normalize_trace_is_json_lines() {
    let (code, out) = run_on(
        &[
            "normalize",
            "--mode",
            "raw",
            "--strategy",
            "outermost",
            "--fuel",
            "10",
            "--trace",
        ],
        "{b|false} in {a | ~(a in a)}",
    );
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 3);
    assert!(lines[0]["source"].is_string());
    let last = lines.last().unwrap();
    assert_eq!(last["status"], "normal");
    assert_eq!(last["steps"], lines.len() as u64 - 2);
    // The first contraction is the membership into the negated-self
    // comprehension.
    assert_eq!(lines[1]["pos"], serde_json::json!([]));
    assert_eq!(lines[1]["contractum"], "~{b | false} in {b | false}");
    assert_eq!(last["result"], "~false");
}

#[test]
fn measures_reports_the_numbers() {
    let (code, out) = run_on(&["measures", "--json"], "b:0 in {a:0 | false}");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["complexity"], 3);
    assert_eq!(v["atomic"], 1);
    assert_eq!(v["ternary"], false);
    assert_eq!(v["minlev"], 0);

    // Unstratified raw input still measures, but has no minlev.
    let (code, out) = run_on(&["measures", "--mode", "raw", "--json"], "a in a");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 3);
    assert!(v.get("minlev").is_none());
}

#[test]
fn prop_subcommand_runs_suites() {
    let (code, out) = run_cli(&[
        "prop",
        "--suite",
        "stratify",
        "--cases",
        "25",
        "--max-size",
        "10",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS stratify::generated_tst_is_stratified"));

    let (code, out) = run_cli(&[
        "prop",
        "--suite",
        "sigma",
        "--cases",
        "25",
        "--max-size",
        "10",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "sigma");
}

#[test]
fn seed_environment_variable_is_honored() {
    std::env::set_var("STRATAL_SEED", "12345");
    let (code, _) = run_cli(&[
        "prop",
        "--suite",
        "stratify",
        "--cases",
        "10",
        "--max-size",
        "8",
    ]);
    std::env::remove_var("STRATAL_SEED");
    assert_eq!(code, 0);
}

#[test]
fn round_trips_hold_at_volume() {
    // Leveled mode.
    for seed in 0..1000u64 {
        let f = gen::formula(seed, 20, Mode::Tst);
        let printed = render_formula(&f, Mode::Tst);
        let reparsed = parse(&printed, Mode::Tst)
            .unwrap_or_else(|e| panic!("reparse failed for `{printed}`: {e}"));
        assert_eq!(
            reparsed,
            Syntax::Formula(f),
            "tst round trip failed for `{printed}`"
        );
    }
    // Unleveled mode.
    for seed in 0..1000u64 {
        let f = gen::formula(seed, 20, Mode::Nf);
        let printed = render_formula(&f, Mode::Nf);
        let reparsed = parse(&printed, Mode::Nf)
            .unwrap_or_else(|e| panic!("reparse failed for `{printed}`: {e}"));
        assert_eq!(
            reparsed,
            Syntax::Formula(f),
            "nf round trip failed for `{printed}`"
        );
    }
    // Raw mode prints levels only where they are nonzero.
    for seed in 0..1000u64 {
        let f = gen::formula(seed, 20, Mode::Tst);
        let printed = render_formula(&f, Mode::Raw);
        let reparsed = parse(&printed, Mode::Raw)
            .unwrap_or_else(|e| panic!("reparse failed for `{printed}`: {e}"));
        assert_eq!(
            reparsed,
            Syntax::Formula(f),
            "raw round trip failed for `{printed}`"
        );
    }
}

#[test]
fn generator_soundness_at_volume() {
    for seed in 0..500u64 {
        let f = gen::formula(seed ^ 0xf00d, 20, Mode::Tst);
        assert!(stratify::check_formula_ok(&f));
    }
    for seed in 0..500u64 {
        let f = gen::formula(seed ^ 0xfeed, 20, Mode::Nf);
        assert!(stratify::infer_formula(&f).is_ok());
    }
}

#[test]
fn internal_values_render_through_their_embedding() {
    use stratal::internal::{IPred, ISet};
    use stratal::nominal::Atom;

    assert_eq!(
        render(&parse("false", Mode::Nf).unwrap(), Mode::Nf),
        "false"
    );
    let falsum = IPred::falsum();
    assert_eq!(stratal::print::render_pred(&falsum, Mode::Nf), "false");
    assert_eq!(
        stratal::print::render_pred(&IPred::verum(), Mode::Nf),
        "~false"
    );

    let a = Atom::named("a", 2);
    let x = IPred::elt(ISet::empty_set(1), &a).unwrap();
    let y = IPred::neg(x.clone());
    let both = IPred::and([x.clone(), y.clone()]);
    // Canonical order is deterministic, conjunction is binary.
    let printed = stratal::print::render_pred(&both, Mode::Tst);
    let reparsed = parse(&printed, Mode::Tst).unwrap();
    let Syntax::Formula(f) = reparsed else {
        panic!()
    };
    assert_eq!(
        stratal::normalize::interpret_formula(&f).unwrap(),
        both,
        "printing an internal value and re-reading it preserves it: {printed}"
    );
}
