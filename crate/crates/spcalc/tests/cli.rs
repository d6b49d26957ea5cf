use serde_json::Value;
use spcalc::cli::run;
use spcalc::replay::{run_suite, run_suite_with, Fault, Suite};
use spcalc_core::Bounds;

const SHOWCASE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/showcase.cat");

fn spcalc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spcalc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn on_showcase(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--workspace", SHOWCASE, "--no-time"];
    all.extend_from_slice(args);
    let (code, out, err) = spcalc(&all);
    let line = out.lines().next().unwrap_or_else(|| panic!("no output; stderr: {err}"));
    (code, serde_json::from_str(line).unwrap())
}

#[test]
fn records_keep_wire_field_order() {
    let (_, out, _) = spcalc(&["--workspace", SHOWCASE, "eval", "Y0", "--at", "0"]);
    let keys: Vec<&str> = ["\"cmd\"", "\"verdict\"", "\"certificate\"", "\"bounds\"", "\"seed\"", "\"wall_ms\""]
        .into_iter()
        .filter(|k| out.contains(k))
        .collect();
    assert_eq!(keys.len(), 6, "{out}");
    let at: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{out}");
}

#[test]
fn eval_of_a_representable() {
    let (code, r) = on_showcase(&["eval", "Y0", "--at", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["value"], 1);
}

#[test]
fn xor_convolution_profile() {
    let (code, r) = on_showcase(&["convolve", "F", "H", "--monoidal", "xor2"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["values"], serde_json::json!([5, 7]));
}

#[test]
fn terminal_presheaf_on_discrete_nat_is_not_small() {
    let (code, r) = on_showcase(&["limit", "--weight", "Empty", "--diagram", "NoneN"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "NotSmall");
    assert_eq!(r["witness"]["family"], "DiscreteNat");
}

#[test]
fn failed_check_exits_one() {
    let (code, r) = on_showcase(&["check", "closed", "--monoidal", "minN"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "ConditionFails");
}

#[test]
fn validation_error_exits_two() {
    let dir = std::env::temp_dir().join(format!("spcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.cat");
    std::fs::write(&path, "category B over FinSet { objects a, b; arrow f: a -> b; arrow g: b -> a; }\n").unwrap();
    let (code, out, err) = spcalc(&["--workspace", path.to_str().unwrap(), "fmt"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("ValidationError"), "{err}");
}

#[test]
fn unknown_names_and_bad_bounds_exit_two() {
    assert_eq!(spcalc(&["--workspace", SHOWCASE, "eval", "Nope", "--at", "0"]).0, 2);
    assert_eq!(spcalc(&["--workspace", SHOWCASE, "--bounds", "probes=0", "eval", "Y0", "--at", "0"]).0, 2);
    assert_eq!(spcalc(&["replay", "nosuch"]).0, 2);
    assert_eq!(spcalc(&["frobnicate"]).0, 2);
}

#[test]
fn bounds_override_is_echoed() {
    let (_, r) = on_showcase(&["--bounds", "probes=5,depth=2", "--seed", "9", "eval", "Y0", "--at", "0"]);
    assert_eq!(r["bounds"]["probes"], 5);
    assert_eq!(r["bounds"]["depth"], 2);
    assert_eq!(r["seed"], 9);
}

#[test]
fn same_seed_gives_identical_lines() {
    let args = ["--no-time", "--seed", "3", "replay", "dm", "--cases", "20"];
    let a = spcalc(&args).1;
    let b = spcalc(&args).1;
    assert_eq!(a, b);
    assert!(a.contains("\"Pass\""), "{a}");
}

#[test]
fn seeds_change_generated_cases() {
    let b = Bounds::default();
    let a = run_suite(Suite::Dm, 1, Some(10), &b);
    let c = run_suite(Suite::Dm, 2, Some(10), &b);
    assert!(a.ok() && c.ok());
    let gen = |s| spcalc::suites::dm(s, 10).iter().map(|p| p.le.clone()).collect::<Vec<_>>();
    assert_ne!(gen(1), gen(2));
}

#[test]
fn injected_fault_is_caught_and_shrunk() {
    let b = Bounds::default();
    let report = run_suite_with(Suite::Dm, 0, Some(40), &b, Some(Fault::OffByOne { threshold: 3 }));
    assert!(!report.ok());
    let c = report.counterexample.as_ref().unwrap();
    assert_eq!(c.size, 3, "{c:?}");
    let r = report.record(&b);
    assert!(!r.ok);
    assert_eq!(r.verdict, "Fail");
    assert!(r.to_line().contains("counterexample"));
}

#[test]
fn injected_yoneda_fault_shrinks_the_category() {
    let b = Bounds::default();
    let report = run_suite_with(Suite::Yoneda, 0, Some(60), &b, Some(Fault::OffByOne { threshold: 4 }));
    let c = report.counterexample.expect("fault fires on some case");
    assert_eq!(c.size, 4, "{c:?}");
}

#[test]
fn fmt_prints_canonical_text() {
    let (code, out, _) = spcalc(&["--workspace", SHOWCASE, "fmt"]);
    assert_eq!(code, 0);
    assert_eq!(spcalc::printer::print(&spcalc::parser::parse(&out).unwrap()), out);
}
