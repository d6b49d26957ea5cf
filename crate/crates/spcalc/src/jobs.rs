//! Commands resolved against a workspace. Resolution checks every name and
//! type up front; the returned job then only computes.

use serde_json::{json, Value};
use spcalc_core::base::Base;
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::day::{closedness_check, convolve, internal_hom, Closedness, PromonoidalStructure, Side};
use spcalc_core::isbell::{dedekind_macneille_fixed_points, global_existence_gate, left_conjugate, right_conjugate};
use spcalc_core::kan::{adjunction_check, continuity_check, flatness_check, left_kan_along, restrict_along, Flatness};
use spcalc_core::presheaf::{
    completeness_check, phi_closure, pointwise_limit, weighted_colimit, ClosureMode, Completeness, LimitClass, PresheafDiagram,
    SmallPresheaf, Variance, Weight,
};
use spcalc_core::{Bounds, Error};

use crate::record::{self, Body, Record};
use crate::workspace::Workspace;

pub type Job = Box<dyn FnOnce(&Bounds) -> Result<Record, Error>>;

/// A command line after clap, before resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Eval { presheaf: String, at: String },
    Hom { f: String, g: String },
    Colim { weight: String, diagram: String, cat: Option<String> },
    Limit { weight: String, diagram: String, cat: Option<String> },
    Kan { functor: String, presheaf: String },
    Restrict { functor: String, presheaf: String },
    Convolve { f: String, g: String, monoidal: String },
    Ihom { g: String, h: String, monoidal: String, left: bool },
    Isbell { presheaf: String, left: bool },
    Dm { poset: String },
    CheckComplete { cat: String, phi: String },
    CheckClosed { monoidal: String },
    CheckContinuity { functor: String, phi: String },
    CheckFlat { presheaf: String, phi: String },
    CheckIsbellGate { cat: String },
    CheckPhi { cat: String, phi: String, colimits: bool, bound: usize },
    CheckAdjunction { functor: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Hom { .. } => "hom",
            Command::Colim { .. } => "colim",
            Command::Limit { .. } => "limit",
            Command::Kan { .. } => "kan",
            Command::Restrict { .. } => "restrict",
            Command::Convolve { .. } => "convolve",
            Command::Ihom { .. } => "ihom",
            Command::Isbell { .. } => "isbell",
            Command::Dm { .. } => "dm",
            Command::CheckComplete { .. } => "check complete",
            Command::CheckClosed { .. } => "check closed",
            Command::CheckContinuity { .. } => "check continuity",
            Command::CheckFlat { .. } => "check flat",
            Command::CheckIsbellGate { .. } => "check isbell-gate",
            Command::CheckPhi { .. } => "check phi",
            Command::CheckAdjunction { .. } => "check adjunction",
        }
    }
}

struct Names<'a>(&'a Workspace);

impl Names<'_> {
    fn presheaf(&self, name: &str) -> Result<SmallPresheaf, String> {
        self.0.presheaves.get(name).cloned().ok_or_else(|| format!("unknown presheaf `{name}`"))
    }

    fn functor(&self, name: &str) -> Result<Functor, String> {
        self.0.functors.get(name).cloned().ok_or_else(|| format!("unknown functor `{name}`"))
    }

    fn monoidal(&self, name: &str) -> Result<PromonoidalStructure, String> {
        self.0.monoidals.get(name).map(|m| m.promonoidal().clone()).ok_or_else(|| format!("unknown monoidal structure `{name}`"))
    }

    /// A workspace category, or a registered family over `FinSet`.
    fn category(&self, name: &str) -> Result<Category, String> {
        if let Some(k) = self.0.categories.get(name) {
            return Ok(k.clone());
        }
        Category::builtin(name, Base::finset()).map_err(|_| format!("unknown category `{name}`"))
    }

    fn object(&self, k: &Category, name: &str) -> Result<Obj, String> {
        k.lookup(name).filter(|&a| k.contains(a)).ok_or_else(|| format!("unknown object `{name}` of {}", k.name()))
    }

    fn class(&self, name: &str) -> Result<LimitClass, String> {
        LimitClass::parse(name).ok_or_else(|| {
            let known: Vec<&str> = LimitClass::ALL.iter().map(|c| c.name()).collect();
            format!("unknown limit class `{name}`; expected one of {}", known.join(", "))
        })
    }

    /// A named weight, or `empty` with the given variance over `base`.
    fn weight(&self, name: &str, base: &Base, variance: Variance) -> Result<Weight, String> {
        let w = match self.0.weights.get(name) {
            Some(w) => w.clone(),
            None if name == "empty" => Weight::empty(base, variance),
            None => return Err(format!("unknown weight `{name}`")),
        };
        if w.variance != variance {
            return Err(format!("weight `{name}` has the wrong variance for this command"));
        }
        Ok(w)
    }

    fn diagram(&self, name: &str, cat: &Option<String>) -> Result<(Category, PresheafDiagram), String> {
        match (self.0.diagrams.get(name), cat) {
            (Some(d), None) => Ok((d.ambient.clone(), d.diagram.clone())),
            (Some(d), Some(c)) => {
                let k = self.category(c)?;
                if !k.same(&d.ambient) {
                    return Err(format!("diagram `{name}` does not live on {c}"));
                }
                Ok((k, d.diagram.clone()))
            }
            (None, Some(c)) if name == "empty" => {
                let k = self.category(c)?;
                Ok((k.clone(), PresheafDiagram::empty(&k)))
            }
            (None, None) if name == "empty" => Err("the empty diagram needs --cat".into()),
            (None, _) => Err(format!("unknown diagram `{name}`")),
        }
    }
}

fn same_ambient(what: &str, f: &SmallPresheaf, k: &Category) -> Result<(), String> {
    if f.ambient().same(k) {
        Ok(())
    } else {
        Err(format!("{what} lives on {}, expected {}", f.ambient().name(), k.name()))
    }
}

/// Values of `f` at the first probed objects.
fn profile(f: &SmallPresheaf, bounds: &Bounds) -> Result<Value, Error> {
    let k = f.ambient();
    let mut out = serde_json::Map::new();
    for a in k.enumerate(bounds.probes) {
        out.insert(k.object_name(a), record::sizes(&f.evaluate_value(a)?));
    }
    Ok(Value::Object(out))
}

fn small(cmd: &str, f: &SmallPresheaf, bounds: &Bounds) -> Result<Record, Error> {
    let mut c = record::presheaf(f);
    c["profile"] = profile(f, bounds)?;
    Ok(Record::new(cmd, "Small", Body::Certificate(c), bounds))
}

fn verdict(cmd: &str, k: &Category, v: &spcalc_core::presheaf::Verdict, bounds: &Bounds) -> Result<Record, Error> {
    let (label, mut body) = record::verdict(k, v);
    if let (Body::Certificate(c), Some(cert)) = (&mut body, v.certificate()) {
        c["profile"] = profile(cert, bounds)?;
    }
    Ok(Record::new(cmd, label, body, bounds))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn resolve(ws: &Workspace, cmd: &Command) -> Result<Job, String> {
    let n = Names(ws);
    let name = cmd.name();
    let job: Job = match cmd.clone() {
        Command::Eval { presheaf, at } => {
            let f = n.presheaf(&presheaf)?;
            let a = n.object(f.ambient(), &at)?;
            Box::new(move |b| {
                let v = f.evaluate_value(a)?;
                let body = json!({ "presheaf": presheaf, "object": at, "value": record::sizes(&v) });
                Ok(Record::new(name, "Value", Body::Certificate(body), b))
            })
        }
        Command::Hom { f, g } => {
            let (pf, pg) = (n.presheaf(&f)?, n.presheaf(&g)?);
            same_ambient(&g, &pg, pf.ambient())?;
            Box::new(move |b| {
                let h = pf.hom_object(&pg, b.iso_budget)?;
                Ok(Record::new(name, "Value", Body::Certificate(json!({ "from": f, "to": g, "size": record::sizes(&h) })), b))
            })
        }
        Command::Colim { weight, diagram, cat } => {
            let (k, d) = n.diagram(&diagram, &cat)?;
            let w = n.weight(&weight, k.base(), Variance::Contravariant)?;
            Box::new(move |b| small(name, &weighted_colimit(k.base(), &k, &w, &d)?, b))
        }
        Command::Limit { weight, diagram, cat } => {
            let (k, d) = n.diagram(&diagram, &cat)?;
            let w = n.weight(&weight, k.base(), Variance::Covariant)?;
            Box::new(move |b| verdict(name, &k, &pointwise_limit(&k, &w, &d, b)?.verdict, b))
        }
        Command::Kan { functor, presheaf } => {
            let (f, g) = (n.functor(&functor)?, n.presheaf(&presheaf)?);
            same_ambient(&presheaf, &g, f.source())?;
            Box::new(move |b| small(name, &left_kan_along(&f, &g)?, b))
        }
        Command::Restrict { functor, presheaf } => {
            let (f, h) = (n.functor(&functor)?, n.presheaf(&presheaf)?);
            same_ambient(&presheaf, &h, f.target())?;
            Box::new(move |b| verdict(name, f.source(), &restrict_along(&f, &h, b)?, b))
        }
        Command::Convolve { f, g, monoidal } => {
            let p = n.monoidal(&monoidal)?;
            let (pf, pg) = (n.presheaf(&f)?, n.presheaf(&g)?);
            same_ambient(&f, &pf, &p.ambient)?;
            same_ambient(&g, &pg, &p.ambient)?;
            Box::new(move |b| small(name, &convolve(&pf, &pg, &p)?, b))
        }
        Command::Ihom { g, h, monoidal, left } => {
            let p = n.monoidal(&monoidal)?;
            let (pg, ph) = (n.presheaf(&g)?, n.presheaf(&h)?);
            same_ambient(&g, &pg, &p.ambient)?;
            same_ambient(&h, &ph, &p.ambient)?;
            let side = if left { Side::Left } else { Side::Right };
            Box::new(move |b| verdict(name, &p.ambient, &internal_hom(&pg, &ph, &p, side, b)?, b))
        }
        Command::Isbell { presheaf, left } => {
            let f = n.presheaf(&presheaf)?;
            Box::new(move |b| {
                let v = if left { left_conjugate(&f, b)? } else { right_conjugate(&f, b)? };
                verdict(name, &f.ambient().opposite(), &v, b)
            })
        }
        Command::Dm { poset } => {
            let k = n.category(&poset)?;
            Box::new(move |b| {
                let dm = dedekind_macneille_fixed_points(&k, b)?;
                let names = |s: &Vec<Obj>| s.iter().map(|&a| k.object_name(a)).collect::<Vec<_>>();
                let fixed: Vec<Vec<String>> = dm.fixed_points.iter().map(names).collect();
                let body = json!({ "downsets": dm.downsets.len(), "count": fixed.len(), "fixed_points": fixed });
                Ok(Record::new(name, "Computed", Body::Certificate(body), b))
            })
        }
        Command::CheckComplete { cat, phi } => {
            let (k, class) = (n.category(&cat)?, n.class(&phi)?);
            Box::new(move |b| {
                let r = completeness_check(&k, class, b)?;
                let mut body = json!({ "class": class.name(), "samples": r.samples, "solution_sets_agree": r.solution_sets_agree });
                let failed = r.verdict == Completeness::Incomplete;
                if let Some((diagram, w)) = &r.failure {
                    body["diagram"] = json!(diagram);
                    body["witness"] = record::witness(&k, w);
                }
                let body = if failed { Body::Witness(body) } else { Body::Certificate(body) };
                Ok(Record::new(name, r.verdict.label(), body, b).failing(failed))
            })
        }
        Command::CheckClosed { monoidal } => {
            let p = n.monoidal(&monoidal)?;
            Box::new(move |b| {
                let r = closedness_check(&p, b)?;
                let label = match &r.verdict {
                    Closedness::Closed => "Closed",
                    Closedness::ClosedOnProbes => "ClosedOnProbes",
                    Closedness::ConditionFails { .. } => "ConditionFails",
                    Closedness::Unknown { .. } => "Unknown",
                };
                let failed = matches!(r.verdict, Closedness::ConditionFails { .. });
                let body = if failed { Body::Witness(to_value(&r)) } else { Body::Certificate(to_value(&r)) };
                Ok(Record::new(name, label, body, b).failing(failed))
            })
        }
        Command::CheckContinuity { functor, phi } => {
            let (f, class) = (n.functor(&functor)?, n.class(&phi)?);
            Box::new(move |b| {
                let r = continuity_check(&f, class, b)?;
                let failed = r.unmatched() > 0;
                let label = if failed { "Unmatched" } else { "Matched" };
                Ok(Record::new(name, label, Body::Certificate(to_value(&r)), b).failing(failed))
            })
        }
        Command::CheckFlat { presheaf, phi } => {
            let (g, class) = (n.presheaf(&presheaf)?, n.class(&phi)?);
            Box::new(move |b| {
                let r = flatness_check(&g, class, b)?;
                let failed = matches!(r.verdict, Flatness::NotFlat { .. });
                let label = if failed { "NotFlat" } else { "FlatOnProbes" };
                let body = if failed { Body::Witness(to_value(&r)) } else { Body::Certificate(to_value(&r)) };
                Ok(Record::new(name, label, body, b).failing(failed))
            })
        }
        Command::CheckIsbellGate { cat } => {
            let k = n.category(&cat)?;
            Box::new(move |b| {
                let r = global_existence_gate(&k, b)?;
                let label = if r.consistent { "Consistent" } else { "Inconsistent" };
                Ok(Record::new(name, label, Body::Certificate(to_value(&r)), b).failing(!r.consistent))
            })
        }
        Command::CheckPhi { cat, phi, colimits, bound } => {
            let (k, class) = (n.category(&cat)?, n.class(&phi)?);
            if !k.is_finite() {
                return Err(format!("check phi needs a finite category, {cat} is not"));
            }
            let mode = if colimits { ClosureMode::Colimits } else { ClosureMode::Limits };
            Box::new(move |b| {
                let r = phi_closure(&k, class, mode, bound, b)?;
                let members: Vec<Value> = r.members.iter().map(record::presheaf).collect();
                let body = json!({ "class": class.name(), "members": members, "stable": r.stable });
                Ok(Record::new(name, if r.stable { "Stable" } else { "Bounded" }, Body::Certificate(body), b))
            })
        }
        Command::CheckAdjunction { functor } => {
            let f = n.functor(&functor)?;
            if !f.source().is_finite() || !f.target().is_finite() {
                return Err("check adjunction needs finite source and target".into());
            }
            Box::new(move |b| {
                let corpus = representable_pairs(&f)?;
                let r = adjunction_check(&f, &corpus, b)?;
                let label = if r.ok() { "Holds" } else { "Fails" };
                Ok(Record::new(name, label, Body::Certificate(to_value(&r)), b).failing(!r.ok()))
            })
        }
    };
    Ok(job)
}

/// Every pair (representable on the source, representable on the target).
pub fn representable_pairs(f: &Functor) -> Result<Vec<(SmallPresheaf, SmallPresheaf)>, Error> {
    let (k, l) = (f.source(), f.target());
    let mut out = Vec::new();
    for a in k.enumerate(usize::MAX) {
        for b in l.enumerate(usize::MAX) {
            out.push((SmallPresheaf::representable(k, a)?, SmallPresheaf::representable(l, b)?));
        }
    }
    Ok(out)
}
