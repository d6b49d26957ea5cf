//! Seeded theorem replay: generate cases from a seed, check an invariant on
//! each, and report the smallest failing case after shrinking it.

use serde_json::{json, Value};
use spcalc_core::Bounds;

use crate::record::{Body, Record};
use crate::suites;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Yoneda,
    Completeness,
    Adjunction,
    Continuity,
    Convolution,
    Dm,
    Repsmall,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Yoneda, Suite::Completeness, Suite::Adjunction, Suite::Continuity, Suite::Convolution, Suite::Dm, Suite::Repsmall];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Yoneda => "yoneda",
            Suite::Completeness => "completeness",
            Suite::Adjunction => "adjunction",
            Suite::Continuity => "continuity",
            Suite::Convolution => "convolution",
            Suite::Dm => "dm",
            Suite::Repsmall => "repsmall",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Yoneda => 200,
            Suite::Completeness => 50,
            Suite::Adjunction => 20,
            Suite::Continuity => 100,
            Suite::Convolution => 1,
            Suite::Dm => 100,
            Suite::Repsmall => 20,
        }
    }
}

/// A deliberate engine corruption, for testing that failures are caught
/// and minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturbs the engine-side quantity of a check once cases are large
    /// enough: `size >= threshold`.
    OffByOne { threshold: usize },
}

impl Fault {
    pub fn fires(fault: Option<Fault>, size: usize) -> bool {
        matches!(fault, Some(Fault::OffByOne { threshold }) if size >= threshold)
    }
}

/// One generated instance of a suite's invariant.
pub trait Case: Sized {
    fn size(&self) -> usize;
    fn describe(&self) -> Value;
    /// `Err` with a reason when the invariant fails.
    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String>;
    /// Strictly smaller variants, tried in order while minimizing.
    fn shrink(&self) -> Vec<Self> {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub case: Value,
    pub size: usize,
    pub reason: String,
    /// Shrinking steps taken from the first failure found.
    pub shrunk: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }

    pub fn record(&self, bounds: &Bounds) -> Record {
        let summary = json!({ "suite": self.suite.name(), "cases": self.cases, "passed": self.passed });
        let body = match &self.counterexample {
            None => Body::Certificate(summary),
            Some(c) => {
                let mut w = summary;
                w["counterexample"] = c.case.clone();
                w["size"] = json!(c.size);
                w["reason"] = json!(c.reason);
                w["shrink_steps"] = json!(c.shrunk);
                Body::Witness(w)
            }
        };
        let mut r = Record::new(format!("replay {}", self.suite.name()), if self.ok() { "Pass" } else { "Fail" }, body, bounds);
        r.seed = self.seed;
        r.failing(!self.ok())
    }
}

fn minimize<C: Case>(mut case: C, mut reason: String, bounds: &Bounds, fault: Option<Fault>) -> Counterexample {
    let mut steps = 0;
    'outer: loop {
        for smaller in case.shrink() {
            if let Err(r) = smaller.check(bounds, fault) {
                case = smaller;
                reason = r;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    Counterexample { case: case.describe(), size: case.size(), reason, shrunk: steps }
}

/// Checks every case and minimizes the smallest failure.
pub fn run_cases<C: Case>(suite: Suite, seed: u64, cases: Vec<C>, bounds: &Bounds, fault: Option<Fault>) -> SuiteReport {
    let total = cases.len();
    let mut passed = 0;
    let mut worst: Option<(C, String)> = None;
    for c in cases {
        match c.check(bounds, fault) {
            Ok(()) => passed += 1,
            Err(r) => {
                if worst.as_ref().is_none_or(|(w, _)| c.size() < w.size()) {
                    worst = Some((c, r));
                }
            }
        }
    }
    let counterexample = worst.map(|(c, r)| minimize(c, r, bounds, fault));
    SuiteReport { suite, seed, cases: total, passed, counterexample }
}

pub fn run_suite(suite: Suite, seed: u64, cases: Option<usize>, bounds: &Bounds) -> SuiteReport {
    run_suite_with(suite, seed, cases, bounds, None)
}

pub fn run_suite_with(suite: Suite, seed: u64, cases: Option<usize>, bounds: &Bounds, fault: Option<Fault>) -> SuiteReport {
    let n = cases.unwrap_or(suite.default_cases());
    match suite {
        Suite::Yoneda => run_cases(suite, seed, suites::yoneda(seed, n), bounds, fault),
        Suite::Completeness => run_cases(suite, seed, suites::completeness(seed, n), bounds, fault),
        Suite::Adjunction => run_cases(suite, seed, suites::adjunction(seed, n), bounds, fault),
        Suite::Continuity => run_cases(suite, seed, suites::continuity(seed, n), bounds, fault),
        Suite::Convolution => run_cases(suite, seed, suites::convolution(seed, n), bounds, fault),
        Suite::Dm => run_cases(suite, seed, suites::dm(seed, n), bounds, fault),
        Suite::Repsmall => run_cases(suite, seed, suites::repsmall(seed, n), bounds, fault),
    }
}
