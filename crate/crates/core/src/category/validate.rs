use serde::Serialize;

use super::{Category, Obj};
use crate::base::BackendTag;

/// Every failed category, functor or naturality law. Empty iff valid; for
/// infinite categories only the first `probe_bound` objects were checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub probe_bound: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(super) fn validate(k: &Category, probes: usize) -> ValidationReport {
    let objs: Vec<Obj> = k.enumerate(probes);
    let mut failures = Vec::new();
    for &a in &objs {
        for &b in &objs {
            let n = k.hom_size(a, b);
            if k.base().tag() == BackendTag::Bool2 && n > 1 {
                failures.push(format!("hom({}, {}) has {n} elements over Bool2", k.object_name(a), k.object_name(b)));
            }
        }
        if k.identity(a) >= k.hom_size(a, a) {
            failures.push(format!("identity of {} is not an endomorphism", k.object_name(a)));
        }
    }
    if !failures.is_empty() {
        return ValidationReport { failures, probe_bound: (!k.is_finite()).then_some(probes) };
    }
    for &a in &objs {
        for &b in &objs {
            for f in 0..k.hom_size(a, b) {
                if k.compose(a, b, b, k.identity(b), f) != f || k.compose(a, a, b, f, k.identity(a)) != f {
                    failures.push(format!("identity law fails at {}", k.arrow_name(a, b, f)));
                }
            }
        }
    }
    for &a in &objs {
        for &b in &objs {
            for &c in &objs {
                for &d in &objs {
                    for f in 0..k.hom_size(a, b) {
                        for g in 0..k.hom_size(b, c) {
                            for h in 0..k.hom_size(c, d) {
                                let left = k.compose(a, c, d, h, k.compose(a, b, c, g, f));
                                let right = k.compose(a, b, d, k.compose(b, c, d, h, g), f);
                                if left != right {
                                    failures.push(format!(
                                        "associativity fails at ({}, {}, {})",
                                        k.arrow_name(c, d, h),
                                        k.arrow_name(b, c, g),
                                        k.arrow_name(a, b, f)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    ValidationReport { failures, probe_bound: (!k.is_finite()).then_some(probes) }
}
