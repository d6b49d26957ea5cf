//! Convolution of presheaves along promonoidal structures, internal homs,
//! and the closedness criterion.

mod monoidal;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::base::{family_hom, BaseObject, FamilyHom, SortedEdge, SortedMap, UnionFind};
use crate::bounds::Bounds;
use crate::category::Obj;
use crate::error::{Error, Result};
use crate::presheaf::{
    certify, completeness_check, identity_map, restriction, Completeness, Evaluated, FnSource, LimitClass,
    PointwiseSource, SmallPresheaf, Verdict, Witness,
};

pub use monoidal::{
    approximate_colimit, from_monoidal, ApproximatelyMonoidal, MonoidalStructure, PromonoidalStructure, TensorRule,
};
use monoidal::StageElements;

/// Elements of `F ⊗ G` at one object.
struct ConvEval {
    value: BaseObject,
    /// Per sort: offsets of the blocks `(p, q)`, then classes.
    off: Vec<Vec<usize>>,
    class: Vec<Vec<usize>>,
    reps: Vec<Vec<(usize, usize, usize, usize, usize)>>,
    stages: Vec<StageElements>,
}

struct ConvSource<'a> {
    p: &'a PromonoidalStructure,
    f: &'a SmallPresheaf,
    g: &'a SmallPresheaf,
    memo: RefCell<HashMap<Obj, Rc<ConvEval>>>,
}

impl ConvSource<'_> {
    fn block(&self, p: usize, q: usize) -> usize {
        p * self.g.support().len() + q
    }

    fn eval(&self, c: Obj) -> Result<Rc<ConvEval>> {
        if let Some(e) = self.memo.borrow().get(&c) {
            return Ok(e.clone());
        }
        let e = Rc::new(self.compute(c)?);
        self.memo.borrow_mut().insert(c, e.clone());
        Ok(e)
    }

    fn compute(&self, c: Obj) -> Result<ConvEval> {
        let k = &self.p.ambient;
        let base = k.base();
        let site = base.site();
        let (fs, gs) = (self.f.support(), self.g.support());
        let (m, n) = (fs.len(), gs.len());
        let mut stages = Vec::with_capacity(m * n);
        for &a in fs {
            for &b in gs {
                stages.push(self.p.elements(c, a, b)?);
            }
        }
        let (mut offs, mut classes, mut all_reps, mut sizes) = (vec![], vec![], vec![], vec![]);
        for s in 0..base.sorts() {
            let fw: Vec<usize> = (0..m).map(|p| self.f.value(p).size(s)).collect();
            let gw: Vec<usize> = (0..n).map(|q| self.g.value(q).size(s)).collect();
            let mut off = vec![0];
            for p in 0..m {
                for q in 0..n {
                    off.push(off.last().unwrap() + fw[p] * gw[q] * stages[self.block(p, q)].len());
                }
            }
            let idx = |p: usize, q: usize, x: usize, y: usize, e: usize| {
                let ne = stages[p * n + q].len();
                off[p * n + q] + (x * gw[q] + y) * ne + e
            };
            let mut uf = UnionFind::new(*off.last().unwrap());
            for p in 0..m {
                for q in 0..n {
                    let st = &stages[self.block(p, q)];
                    for (e, &(i, z)) in st.reps.iter().enumerate() {
                        let mon = &self.p.stages[i];
                        let src = mon.tensor(fs[p], gs[q]);
                        // along arrows of the first variable
                        for p2 in 0..m {
                            for u in 0..k.hom_size(fs[p], fs[p2]) {
                                let fu = &self.f.action(p, p2, u)[s];
                                let ta = mon.tensor_arrow((fs[p], fs[p2], u), (gs[q], gs[q], k.identity(gs[q])));
                                let tgt = mon.tensor(fs[p2], gs[q]);
                                let e2 = stages[self.block(p2, q)].class_of(i, k.compose(c, src, tgt, ta, z));
                                for x in 0..fw[p2] {
                                    for y in 0..gw[q] {
                                        uf.union(idx(p, q, fu[x], y, e), idx(p2, q, x, y, e2));
                                    }
                                }
                            }
                        }
                        // along arrows of the second variable
                        for q2 in 0..n {
                            for v in 0..k.hom_size(gs[q], gs[q2]) {
                                let gv = &self.g.action(q, q2, v)[s];
                                let tb = mon.tensor_arrow((fs[p], fs[p], k.identity(fs[p])), (gs[q], gs[q2], v));
                                let tgt = mon.tensor(fs[p], gs[q2]);
                                let e2 = stages[self.block(p, q2)].class_of(i, k.compose(c, src, tgt, tb, z));
                                for x in 0..fw[p] {
                                    for y in 0..gw[q2] {
                                        uf.union(idx(p, q, x, gv[y], e), idx(p, q2, x, y, e2));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            let (class, count) = uf.classes();
            let mut reps = vec![(0, 0, 0, 0, 0); count];
            let mut seen = vec![false; count];
            for p in 0..m {
                for q in 0..n {
                    for x in 0..fw[p] {
                        for y in 0..gw[q] {
                            for e in 0..stages[self.block(p, q)].len() {
                                let cl = class[idx(p, q, x, y, e)];
                                if !std::mem::replace(&mut seen[cl], true) {
                                    reps[cl] = (p, q, x, y, e);
                                }
                            }
                        }
                    }
                }
            }
            sizes.push(count);
            offs.push(off);
            classes.push(class);
            all_reps.push(reps);
        }
        let lookup = |s: usize, (p, q, x, y, e): (usize, usize, usize, usize, usize)| {
            let gw = self.g.value(q).size(s);
            let ne = stages[p * n + q].len();
            classes[s][offs[s][p * n + q] + (x * gw + y) * ne + e]
        };
        let restrict = (0..site.arrow_count())
            .map(|h| {
                let (s, t) = (site.arrow(h).src, site.arrow(h).tgt);
                all_reps[t]
                    .iter()
                    .map(|&(p, q, x, y, e)| lookup(s, (p, q, self.f.value(p).restrict(h, x), self.g.value(q).restrict(h, y), e)))
                    .collect()
            })
            .collect();
        let mut value = BaseObject::from_parts(base.tag(), sizes, restrict);
        if base.tag() == crate::base::BackendTag::Bool2 && value.card() > 1 {
            value = base.constant(1);
            classes[0].iter_mut().for_each(|c| *c = 0);
            all_reps[0].truncate(1);
        }
        Ok(ConvEval { value, off: offs, class: classes, reps: all_reps, stages })
    }
}

impl PointwiseSource for ConvSource<'_> {
    fn ambient(&self) -> &crate::category::Category {
        &self.p.ambient
    }

    fn mentioned(&self) -> Vec<Obj> {
        let mut out = Vec::new();
        for &a in self.f.support() {
            for &b in self.g.support() {
                for m in &self.p.stages {
                    let x = m.tensor(a, b);
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    fn value(&self, c: Obj) -> Result<BaseObject> {
        Ok(self.eval(c)?.value.clone())
    }

    fn act(&self, c: Obj, c2: Obj, w: usize) -> Result<SortedMap> {
        let k = &self.p.ambient;
        let (at, at2) = (self.eval(c)?, self.eval(c2)?);
        let n = self.g.support().len();
        let (fs, gs) = (self.f.support(), self.g.support());
        Ok((0..at2.reps.len())
            .map(|s| {
                at2.reps[s]
                    .iter()
                    .map(|&(p, q, x, y, e)| {
                        let (i, z) = at2.stages[p * n + q].reps[e];
                        let t = self.p.stages[i].tensor(fs[p], gs[q]);
                        let e2 = at.stages[p * n + q].class_of(i, k.compose(c, c2, t, z, w));
                        let gw = self.g.value(q).size(s);
                        let ne = at.stages[p * n + q].len();
                        at.class[s][at.off[s][p * n + q] + (x * gw + y) * ne + e2]
                    })
                    .collect()
            })
            .collect())
    }
}

fn same_ambient(p: &PromonoidalStructure, xs: &[&SmallPresheaf]) -> Result<()> {
    if xs.iter().any(|x| *x.ambient() != p.ambient) {
        return Err(Error::AmbientMismatch("presheaf is not on the category carrying the structure".into()));
    }
    Ok(())
}

/// `F ⊗ G = ∫^{A,B} P(-; A, B) × F A × G B`, supported on the tensors of
/// support objects.
pub fn convolve(f: &SmallPresheaf, g: &SmallPresheaf, p: &PromonoidalStructure) -> Result<SmallPresheaf> {
    same_ambient(p, &[f, g])?;
    let source = ConvSource { p, f, g, memo: RefCell::default() };
    restriction(&source, &source.mentioned())
}

/// Which variable of the tensor the internal hom is adjoint to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `F ⊗ G -> H` iff `F -> [G, H]`.
    Right,
    /// `G ⊗ F -> H` iff `F -> [G, H]`.
    Left,
}

struct HomData {
    hom: FamilyHom,
    nodes: Vec<(usize, usize)>,
}

/// `a ↦ ∫_B [G B, lim_i H(a ⊗_i B)]`.
struct InternalHom<'a> {
    p: &'a PromonoidalStructure,
    g: &'a SmallPresheaf,
    h: &'a SmallPresheaf,
    side: Side,
    mentioned: Vec<Obj>,
    budget: u64,
    memo: RefCell<HashMap<Obj, Rc<HomData>>>,
}

impl InternalHom<'_> {
    fn t(&self, i: usize, a: Obj, b: Obj) -> Obj {
        match self.side {
            Side::Right => self.p.stages[i].tensor(a, b),
            Side::Left => self.p.stages[i].tensor(b, a),
        }
    }

    /// The arrow `t(a, b) -> t(a2, b2)` induced by `u: a -> a2`, `v: b -> b2`.
    fn t_arrow(&self, i: usize, ua: (Obj, Obj, usize), vb: (Obj, Obj, usize)) -> usize {
        match self.side {
            Side::Right => self.p.stages[i].tensor_arrow(ua, vb),
            Side::Left => self.p.stages[i].tensor_arrow(vb, ua),
        }
    }

    fn data(&self, a: Obj) -> Result<Rc<HomData>> {
        if let Some(d) = self.memo.borrow().get(&a) {
            return Ok(d.clone());
        }
        let k = &self.p.ambient;
        let gs = self.g.support();
        let stages = self.p.stages.len();
        let nodes: Vec<(usize, usize)> = (0..gs.len()).flat_map(|j| (0..stages).map(move |i| (j, i))).collect();
        let evs: Vec<Evaluated> =
            nodes.iter().map(|&(j, i)| self.h.evaluate(self.t(i, a, gs[j]))).collect::<Result<_>>()?;
        let node = |j: usize, i: usize| j * stages + i;
        let mut edges = Vec::new();
        let sorts = k.base().sorts();
        for j in 0..gs.len() {
            for j2 in 0..gs.len() {
                for w in 0..k.hom_size(gs[j], gs[j2]) {
                    for i in 0..stages {
                        let arrow = self.t_arrow(i, (a, a, k.identity(a)), (gs[j], gs[j2], w));
                        let hw = self.h.pull(&evs[node(j, i)], &evs[node(j2, i)], arrow);
                        let gw = self.g.action(j, j2, w);
                        for s in 0..sorts {
                            edges.push(SortedEdge {
                                from: node(j2, i),
                                to: node(j, i),
                                sort: s,
                                x_map: gw[s].clone(),
                                y_map: hw[s].clone(),
                            });
                        }
                    }
                }
            }
            for arr in self.p.index.arrows() {
                let (i, i2) = (arr.src, arr.tgt);
                if i == i2 {
                    continue;
                }
                let (x, x2) = (self.t(i, a, gs[j]), self.t(i2, a, gs[j]));
                let cmp = self.p.comparison(x, x2)?;
                let hc = self.h.pull(&evs[node(j, i)], &evs[node(j, i2)], cmp);
                let id = identity_map(self.g.value(j));
                for s in 0..sorts {
                    edges.push(SortedEdge {
                        from: node(j, i2),
                        to: node(j, i),
                        sort: s,
                        x_map: id[s].clone(),
                        y_map: hc[s].clone(),
                    });
                }
            }
        }
        let xs: Vec<BaseObject> = nodes.iter().map(|&(j, _)| self.g.value(j).clone()).collect();
        let ys: Vec<BaseObject> = evs.iter().map(|e| e.value.clone()).collect();
        let hom = family_hom(k.base().site(), k.base().tag(), &xs, &ys, &edges, self.budget)?;
        let d = Rc::new(HomData { hom, nodes });
        self.memo.borrow_mut().insert(a, d.clone());
        Ok(d)
    }
}

impl PointwiseSource for InternalHom<'_> {
    fn ambient(&self) -> &crate::category::Category {
        &self.p.ambient
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.mentioned.clone()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.data(a)?.hom.object.clone())
    }

    fn act(&self, a: Obj, a2: Obj, u: usize) -> Result<SortedMap> {
        let k = &self.p.ambient;
        let (da, db) = (self.data(a)?, self.data(a2)?);
        let gs = self.g.support();
        let site = k.base().site().clone();
        let pulls: Vec<SortedMap> = db
            .nodes
            .iter()
            .map(|&(j, i)| {
                let (x, x2) = (self.t(i, a, gs[j]), self.t(i, a2, gs[j]));
                let arrow = self.t_arrow(i, (a, a2, u), (gs[j], gs[j], k.identity(gs[j])));
                Ok(self.h.pull(&self.h.evaluate(x)?, &self.h.evaluate(x2)?, arrow))
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(site.object_count());
        for s in 0..site.object_count() {
            let slots = db.hom.into_arrows(s).to_vec();
            let map = db.hom.elements[s]
                .iter()
                .map(|phi| {
                    let moved = phi
                        .iter()
                        .enumerate()
                        .map(|(slot, comp)| {
                            let (nd, q) = (slot / slots.len(), slot % slots.len());
                            let src = site.arrow(slots[q]).src;
                            comp.iter().map(|&y| pulls[nd][src][y]).collect()
                        })
                        .collect();
                    da.hom.lookup(s, &moved).expect("postcomposite of a natural family is natural")
                })
                .collect();
            out.push(map);
        }
        Ok(out)
    }
}

/// `[G, H]`, after certifying each `a ↦ H(a ⊗_i B)` for `B` in the
/// support of `G`. Returns the first failing verdict otherwise.
pub fn internal_hom(g: &SmallPresheaf, h: &SmallPresheaf, p: &PromonoidalStructure, side: Side, bounds: &Bounds) -> Result<Verdict> {
    same_ambient(p, &[g, h])?;
    let k = &p.ambient;
    let mut mentioned: Vec<Obj> = Vec::new();
    let push = |v: &mut Vec<Obj>, a: Obj| {
        if !v.contains(&a) {
            v.push(a)
        }
    };
    for &b in g.support() {
        for m in &p.stages {
            let tensored = FnSource {
                ambient: k.clone(),
                mentioned: h.support().iter().copied().chain([b]).chain(m.unit).collect(),
                uniform: true,
                value: |a: Obj| {
                    let x = match side {
                        Side::Right => m.tensor(a, b),
                        Side::Left => m.tensor(b, a),
                    };
                    h.evaluate_value(x)
                },
                act: |a: Obj, a2: Obj, u: usize| {
                    let id = (b, b, k.identity(b));
                    let (x, x2, arrow) = match side {
                        Side::Right => (m.tensor(a, b), m.tensor(a2, b), m.tensor_arrow((a, a2, u), id)),
                        Side::Left => (m.tensor(b, a), m.tensor(b, a2), m.tensor_arrow(id, (a, a2, u))),
                    };
                    Ok(h.pull(&h.evaluate(x)?, &h.evaluate(x2)?, arrow))
                },
            };
            match certify(&tensored, bounds)? {
                Verdict::Small { certificate, .. } => {
                    for &a in certificate.support() {
                        push(&mut mentioned, a);
                    }
                }
                other => return Ok(other),
            }
        }
    }
    let source = InternalHom { p, g, h, side, mentioned, budget: bounds.iso_budget, memo: RefCell::default() };
    certify(&source, bounds)
}

#[derive(Clone, Debug, Serialize)]
pub enum Closedness {
    Closed,
    ClosedOnProbes,
    ConditionFails { b: Obj, d: Obj, side: Side, stage: usize, witness: WitnessSummary },
    Unknown { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSummary {
    pub family: String,
    pub object: Obj,
    pub value: Vec<usize>,
    pub reason: String,
}

impl From<Witness> for WitnessSummary {
    fn from(w: Witness) -> Self {
        WitnessSummary { family: w.family, object: w.object, value: w.value, reason: w.reason }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    pub verdict: Closedness,
    pub pairs: usize,
    /// Whether small presheaves on `K` had the sampled finite limits.
    pub premise_holds: bool,
}

/// Certifies `K(- ⊗_i B, D)` and `K(B ⊗_i -, D)` for probed `B`, `D`.
pub fn closedness_check(p: &PromonoidalStructure, bounds: &Bounds) -> Result<ClosednessReport> {
    let k = &p.ambient;
    let objs = if k.is_finite() { k.enumerate(usize::MAX) } else { k.enumerate(bounds.probes.min(6)) };
    let premise_holds = completeness_check(k, LimitClass::FiniteLimits, bounds)?.verdict != Completeness::Incomplete;
    let mut report = ClosednessReport { verdict: Closedness::Closed, pairs: 0, premise_holds };
    let mut unknown: Option<String> = None;
    for &b in &objs {
        for &d in &objs {
            report.pairs += 1;
            for (stage, m) in p.stages.iter().enumerate() {
                for side in [Side::Right, Side::Left] {
                    let t = |a: Obj| match side {
                        Side::Right => m.tensor(a, b),
                        Side::Left => m.tensor(b, a),
                    };
                    let source = FnSource {
                        ambient: k.clone(),
                        mentioned: [b, d].into_iter().chain(m.unit).collect(),
                        uniform: true,
                        value: |a: Obj| Ok(k.base().constant(k.hom_size(t(a), d))),
                        act: |a: Obj, a2: Obj, u: usize| {
                            let id = (b, b, k.identity(b));
                            let arrow = match side {
                                Side::Right => m.tensor_arrow((a, a2, u), id),
                                Side::Left => m.tensor_arrow(id, (a, a2, u)),
                            };
                            let map: Vec<usize> =
                                (0..k.hom_size(t(a2), d)).map(|x| k.compose(t(a), t(a2), d, x, arrow)).collect();
                            Ok(vec![map; k.base().sorts()])
                        },
                    };
                    match certify(&source, bounds)? {
                        Verdict::NotSmall { witness } => {
                            report.verdict =
                                Closedness::ConditionFails { b, d, side, stage, witness: witness.into() };
                            return Ok(report);
                        }
                        Verdict::Unknown { reason, .. } => {
                            unknown.get_or_insert(reason);
                        }
                        Verdict::Small { .. } => {}
                    }
                }
            }
        }
    }
    report.verdict = match unknown {
        Some(reason) => Closedness::Unknown { reason },
        None if k.is_finite() => Closedness::Closed,
        None => Closedness::ClosedOnProbes,
    };
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub triples: usize,
    pub failures: Vec<String>,
}

/// Associativity and unit laws of convolution, up to iso, on a corpus.
pub fn coherence_spot_check(p: &PromonoidalStructure, corpus: &[SmallPresheaf], bounds: &Bounds) -> Result<CoherenceReport> {
    let mut report = CoherenceReport { triples: 0, failures: Vec::new() };
    let pairs: Vec<Vec<SmallPresheaf>> = corpus
        .iter()
        .map(|x| corpus.iter().map(|y| convolve(x, y, p)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    for (i, x) in corpus.iter().enumerate() {
        if let Some(j) = &p.unit {
            if !convolve(j, x, p)?.iso(x, bounds.iso_budget)? || !convolve(x, j, p)?.iso(x, bounds.iso_budget)? {
                report.failures.push(format!("unit law fails at {i}"));
            }
        }
        for (j, _) in corpus.iter().enumerate() {
            for (l, z) in corpus.iter().enumerate() {
                report.triples += 1;
                let left = convolve(&pairs[i][j], z, p)?;
                let right = convolve(x, &pairs[j][l], p)?;
                if !left.iso(&right, bounds.iso_budget)? {
                    report.failures.push(format!("associativity fails at ({i}, {j}, {l})"));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
