//! Isbell conjugation between presheaves and copresheaves.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::base::{family_hom, BackendTag, BaseObject, FamilyHom, SortedEdge, SortedMap};
use crate::bounds::Bounds;
use crate::category::{Category, Obj};
use crate::error::{Error, Result};
use crate::presheaf::{certify, completeness_check, Completeness, LimitClass, PointwiseSource, SmallPresheaf, Verdict};

/// `A ↦ presheafHom(f, Y A)`, a presheaf on `K^op`.
struct Conjugate<'a> {
    f: &'a SmallPresheaf,
    op: Category,
    budget: u64,
    memo: RefCell<HashMap<Obj, Rc<FamilyHom>>>,
}

impl Conjugate<'_> {
    /// Bool2 carriers keep one element for any nonempty hom.
    fn squash(&self, x: usize) -> usize {
        if self.f.base().tag() == BackendTag::Bool2 {
            0
        } else {
            x
        }
    }

    fn hom(&self, a: Obj) -> Result<Rc<FamilyHom>> {
        if let Some(h) = self.memo.borrow().get(&a) {
            return Ok(h.clone());
        }
        let k = self.f.ambient();
        let support = self.f.support();
        let m = support.len();
        let base = k.base();
        let ys: Vec<BaseObject> = support.iter().map(|&b| base.constant(k.hom_size(b, a))).collect();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for u in 0..k.hom_size(support[i], support[j]) {
                    let ya: Vec<usize> = (0..ys[j].size(0))
                        .map(|x| self.squash(k.compose(support[i], support[j], a, x, u)))
                        .collect();
                    for s in 0..base.sorts() {
                        edges.push(SortedEdge {
                            from: j,
                            to: i,
                            sort: s,
                            x_map: self.f.action(i, j, u)[s].clone(),
                            y_map: ya.clone(),
                        });
                    }
                }
            }
        }
        let h = Rc::new(family_hom(base.site(), base.tag(), self.f.values(), &ys, &edges, self.budget)?);
        self.memo.borrow_mut().insert(a, h.clone());
        Ok(h)
    }
}

impl PointwiseSource for Conjugate<'_> {
    fn ambient(&self) -> &Category {
        &self.op
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.f.support().to_vec()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.hom(a)?.object.clone())
    }

    /// `u: a -> a2` in `K^op` is `u: a2 -> a` in `K`; postcompose with it.
    fn act(&self, a: Obj, a2: Obj, u: usize) -> Result<SortedMap> {
        let k = self.f.ambient();
        let (ha, hb) = (self.hom(a)?, self.hom(a2)?);
        let support = self.f.support();
        let site = k.base().site();
        let mut out = Vec::with_capacity(site.object_count());
        for s in 0..site.object_count() {
            let slots = hb.into_arrows(s).len();
            let map = hb.elements[s]
                .iter()
                .map(|phi| {
                    let moved = phi
                        .iter()
                        .enumerate()
                        .map(|(slot, comp)| {
                            let b = support[slot / slots];
                            comp.iter().map(|&x| self.squash(k.compose(b, a2, a, u, x))).collect()
                        })
                        .collect();
                    ha.lookup(s, &moved).expect("postcomposite of a natural family is natural")
                })
                .collect();
            out.push(map);
        }
        Ok(out)
    }
}

/// The conjugate `A ↦ presheafHom(f, Y A)`, certified on the opposite of
/// the ambient of `f`. Conjugating a presheaf on `K^op` gives the right
/// conjugate back on `K`.
pub fn conjugate(f: &SmallPresheaf, bounds: &Bounds) -> Result<Verdict> {
    let source = Conjugate { f, op: f.ambient().opposite(), budget: bounds.iso_budget, memo: Default::default() };
    certify(&source, bounds)
}

/// `O(f)` on `K^op` for `f` on `K`.
pub fn left_conjugate(f: &SmallPresheaf, bounds: &Bounds) -> Result<Verdict> {
    conjugate(f, bounds)
}

/// `Spec(g)` on `K` for `g` on `K^op`.
pub fn right_conjugate(g: &SmallPresheaf, bounds: &Bounds) -> Result<Verdict> {
    conjugate(g, bounds)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub members: usize,
    pub failures: Vec<String>,
}

impl ConjugationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn certified(v: Verdict, what: &str) -> std::result::Result<SmallPresheaf, String> {
    match v {
        Verdict::Small { certificate, .. } => Ok(certificate),
        other => Err(format!("{what} is {}", other.label())),
    }
}

/// For each corpus member `F`: the hom iso against every conjugate in the
/// corpus, a unit `F -> Spec(O F)`, and idempotence of `Spec ∘ O`.
pub fn conjugation_adjunction_check(corpus: &[SmallPresheaf], bounds: &Bounds) -> Result<ConjugationReport> {
    let budget = bounds.iso_budget;
    let mut report = ConjugationReport { members: corpus.len(), failures: Vec::new() };
    let mut conjugates = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        match certified(left_conjugate(f, bounds)?, "conjugate") {
            Ok(o) => conjugates.push((i, o)),
            Err(e) => report.failures.push(format!("member {i}: {e}")),
        }
    }
    for (i, o) in &conjugates {
        let f = &corpus[*i];
        let closure = match certified(right_conjugate(o, bounds)?, "closure") {
            Ok(c) => c,
            Err(e) => {
                report.failures.push(format!("member {i}: {e}"));
                continue;
            }
        };
        if f.morphisms(&closure, budget, Some(1))?.is_empty() {
            report.failures.push(format!("member {i}: no unit into its closure"));
        }
        let again = certified(left_conjugate(&closure, bounds)?, "conjugate of the closure");
        match again {
            Ok(o2) if o2.iso(o, budget)? => {}
            _ => report.failures.push(format!("member {i}: closure is not idempotent")),
        }
        for (j, g) in &conjugates {
            let spec = certified(right_conjugate(g, bounds)?, "closure")
                .map_err(|e| Error::Unsupported(format!("member {j}: {e}")))?;
            let left = g.hom_object(o, budget)?;
            let right = f.hom_object(&spec, budget)?;
            if !f.base().iso(&left, &right, budget)? {
                report.failures.push(format!("hom iso fails for members ({i}, {j})"));
            }
        }
    }
    Ok(report)
}

/// Downsets of a finite poset and the fixed points of `Spec ∘ O` among them.
#[derive(Clone, Debug, Serialize)]
pub struct DmCompletion {
    pub downsets: Vec<Vec<Obj>>,
    /// `closures[i]` is the closure of `downsets[i]`.
    pub closures: Vec<Vec<Obj>>,
    pub fixed_points: Vec<Vec<Obj>>,
}

pub fn downsets(k: &Category) -> Vec<Vec<Obj>> {
    let objs = k.enumerate(usize::MAX);
    let n = objs.len();
    (0u64..1 << n)
        .filter(|mask| (0..n).all(|b| mask >> b & 1 == 0 || (0..n).all(|a| k.hom_size(objs[a], objs[b]) == 0 || mask >> a & 1 == 1)))
        .map(|mask| (0..n).filter(|&a| mask >> a & 1 == 1).map(|a| objs[a]).collect())
        .collect()
}

/// The presheaf `1` on a downset, `0` elsewhere.
pub fn downset_presheaf(k: &Category, set: &[Obj]) -> Result<SmallPresheaf> {
    let base = k.base();
    let m = set.len();
    let mut actions = Vec::with_capacity(m * m);
    for &a in set {
        for &b in set {
            actions.push((0..k.hom_size(a, b)).map(|_| vec![vec![0]; base.sorts()]).collect());
        }
    }
    SmallPresheaf::new(k, set.to_vec(), vec![base.constant(1); m], actions)
}

/// Cuts of a finite poset over the two-element base, as fixed points of the
/// Isbell closure.
pub fn dedekind_macneille_fixed_points(poset: &Category, bounds: &Bounds) -> Result<DmCompletion> {
    if !poset.is_finite() || poset.base().tag() != BackendTag::Bool2 {
        return Err(Error::Unsupported("completions are computed for finite posets over Bool2".into()));
    }
    let objs = poset.enumerate(usize::MAX);
    let sets = downsets(poset);
    let mut closures = Vec::with_capacity(sets.len());
    let mut fixed_points = Vec::new();
    for s in &sets {
        let f = downset_presheaf(poset, s)?;
        let o = certified(left_conjugate(&f, bounds)?, "conjugate").map_err(Error::Unsupported)?;
        let c = certified(right_conjugate(&o, bounds)?, "closure").map_err(Error::Unsupported)?;
        let mut closed = Vec::new();
        for &a in &objs {
            if !c.evaluate_value(a)?.is_empty() {
                closed.push(a);
            }
        }
        if closed == *s {
            fixed_points.push(s.clone());
        }
        closures.push(closed);
    }
    Ok(DmCompletion { downsets: sets, closures, fixed_points })
}

#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    /// Completeness of presheaves on `K^op`, on probes.
    pub completeness: Completeness,
    pub conjugates: usize,
    pub not_small: usize,
    pub unknown: usize,
    /// Whether an incompleteness witness was found exactly when some
    /// conjugate was not small.
    pub consistent: bool,
}

/// Cross-checks completeness of `P(K^op)` against the conjugates of the
/// empty presheaf and of probed representables.
pub fn global_existence_gate(k: &Category, bounds: &Bounds) -> Result<GateReport> {
    let completeness = completeness_check(&k.opposite(), LimitClass::FiniteLimits, bounds)?.verdict;
    let mut corpus = vec![SmallPresheaf::empty(k)];
    for a in k.enumerate(bounds.probes.min(4)) {
        corpus.push(SmallPresheaf::representable(k, a)?);
    }
    let (mut not_small, mut unknown) = (0, 0);
    for f in &corpus {
        match left_conjugate(f, bounds)? {
            Verdict::NotSmall { .. } => not_small += 1,
            Verdict::Unknown { .. } => unknown += 1,
            Verdict::Small { .. } => {}
        }
    }
    let consistent = (completeness == Completeness::Incomplete) == (not_small > 0);
    Ok(GateReport { completeness, conjugates: corpus.len(), not_small, unknown, consistent })
}
