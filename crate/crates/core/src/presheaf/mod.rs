//! Small presheaves as finite Kan-extension certificates.
//!
//! A [`SmallPresheaf`] on `K` is given by a finite list `B` of objects and a
//! functor `B^op -> V`; it denotes the left Kan extension of that functor
//! along the inclusion `B -> K`.

mod certify;
mod phi;
mod repsmall;
mod solution;
mod weight;

use serde::Serialize;

use crate::base::{global_nats, Base, BaseMorphism, BaseObject, FamilyHom, SortedEdge, SortedMap, UnionFind};
use crate::category::{Category, Obj};
use crate::error::{Error, Result};

pub use certify::{certify, restriction, FnSource, PointwiseSource, Verdict, Witness};
pub use phi::{
    completeness_check, diagrams_in, phi_closure, phi_complete_check, ClosureMode, Completeness, CompletenessReport,
    LimitClass, PhiClosure, PhiCompleteReport,
};
pub(crate) use phi::{describe, limit_vertex, represents, sample_objects, SAMPLE_LIMIT};
pub use repsmall::{representably_small_check, FunctorCategoryTarget, Probe, RepSmallReport};
pub use solution::{solution_set_search, Cone, ConeDiagram, ConeSource, SolutionOutcome, SolutionSet, Stage};
pub use weight::{
    base_cotensor, base_tensor, pointwise_limit, weighted_colimit, LimitOutcome, LimitSource, PresheafDiagram,
    Variance, Weight,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPresheaf {
    #[serde(skip)]
    ambient: Category,
    support: Vec<Obj>,
    values: Vec<BaseObject>,
    /// At `i * m + j`, for each arrow `u: b_i -> b_j`, the map `F(b_j) -> F(b_i)`.
    actions: Vec<Vec<SortedMap>>,
}

/// The value of a small presheaf at one object, as the coend
/// `∫^i hom(a, b_i) × F(b_i)`, remembering representatives.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub object: Obj,
    pub value: BaseObject,
    /// Per sort, the offset of `(i, u, y)` is `offsets[i] + u * |F(b_i)| + y`.
    offsets: Vec<Vec<usize>>,
    class: Vec<Vec<usize>>,
    /// Per sort, one representative `(i, u, y)` per class.
    reps: Vec<Vec<(usize, usize, usize)>>,
    widths: Vec<Vec<usize>>,
}

impl Evaluated {
    pub fn class_of(&self, sort: usize, i: usize, u: usize, y: usize) -> usize {
        self.class[sort][self.offsets[sort][i] + u * self.widths[sort][i] + y]
    }

    pub fn rep(&self, sort: usize, x: usize) -> (usize, usize, usize) {
        self.reps[sort][x]
    }
}

/// A morphism of small presheaves, given on the support of its source.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafMorphism {
    pub source: SmallPresheaf,
    pub target: SmallPresheaf,
    /// `components[i]: F(b_i) -> G(b_i)`, with `G(b_i)` the evaluation.
    pub components: Vec<SortedMap>,
}

impl SmallPresheaf {
    pub fn new(ambient: &Category, support: Vec<Obj>, values: Vec<BaseObject>, actions: Vec<Vec<SortedMap>>) -> Result<Self> {
        let f = SmallPresheaf { ambient: ambient.clone(), support, values, actions };
        f.check()?;
        Ok(f)
    }

    /// A presheaf on a discrete family given by its values on a finite
    /// support; all actions are identities.
    pub fn from_values(ambient: &Category, support: Vec<Obj>, values: Vec<BaseObject>) -> Result<Self> {
        let m = support.len();
        let mut actions = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let n = ambient.hom_size(support[i], support[j]);
                if n > 0 && (i != j || n > 1) {
                    return Err(Error::InvalidDiagram(
                        "actions are required when support objects have arrows between them".into(),
                    ));
                }
                actions.push((0..n).map(|_| identity_map(&values[i])).collect());
            }
        }
        SmallPresheaf::new(ambient, support, values, actions)
    }

    pub fn empty(ambient: &Category) -> Self {
        SmallPresheaf { ambient: ambient.clone(), support: vec![], values: vec![], actions: vec![] }
    }

    /// The representable `hom(-, a)`.
    pub fn representable(k: &Category, a: Obj) -> Result<Self> {
        k.check_object(a)?;
        let n = k.hom_size(a, a);
        let value = k.hom_object(a, a);
        let sorts = k.base().sorts();
        let action = (0..n)
            .map(|u| {
                let map: Vec<usize> = (0..value.card_or_first()).map(|x| k.compose(a, a, a, x, u)).collect();
                vec![map; sorts]
            })
            .collect();
        Ok(SmallPresheaf { ambient: k.clone(), support: vec![a], values: vec![value], actions: vec![action] })
    }

    pub fn ambient(&self) -> &Category {
        &self.ambient
    }

    pub fn base(&self) -> &Base {
        self.ambient.base()
    }

    pub fn support(&self) -> &[Obj] {
        &self.support
    }

    pub fn values(&self) -> &[BaseObject] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &BaseObject {
        &self.values[i]
    }

    /// `F(u): F(b_j) -> F(b_i)` for `u: b_i -> b_j`.
    pub fn action(&self, i: usize, j: usize, u: usize) -> &SortedMap {
        &self.actions[i * self.support.len() + j][u]
    }

    pub fn actions(&self) -> &[Vec<SortedMap>] {
        &self.actions
    }

    fn check(&self) -> Result<()> {
        let k = &self.ambient;
        let base = k.base();
        let m = self.support.len();
        let bad = |s: String| Err(Error::InvalidDiagram(s));
        if self.values.len() != m || self.actions.len() != m * m {
            return bad("presheaf data does not match its support".into());
        }
        for &b in &self.support {
            k.check_object(b)?;
        }
        for v in &self.values {
            base.check(v)?;
        }
        for i in 0..m {
            for j in 0..m {
                let (bi, bj) = (self.support[i], self.support[j]);
                if self.actions[i * m + j].len() != k.hom_size(bi, bj) {
                    return bad(format!("missing actions for arrows {} -> {}", k.object_name(bi), k.object_name(bj)));
                }
                for (u, map) in self.actions[i * m + j].iter().enumerate() {
                    let morph = BaseMorphism::new(self.values[j].clone(), self.values[i].clone(), map.clone());
                    let ok = morph.is_ok_and(|mo| mo.is_natural(base.site()));
                    if !ok {
                        return bad(format!("action of {} is not a base morphism", k.arrow_name(bi, bj, u)));
                    }
                }
            }
            let id = k.identity(self.support[i]);
            if self.actions[i * m + i][id] != identity_map(&self.values[i]) {
                return bad(format!("identity of {} acts non-trivially", k.object_name(self.support[i])));
            }
        }
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    let (bi, bj, bl) = (self.support[i], self.support[j], self.support[l]);
                    for u in 0..k.hom_size(bi, bj) {
                        for w in 0..k.hom_size(bj, bl) {
                            let wu = k.compose(bi, bj, bl, w, u);
                            let direct = &self.actions[i * m + l][wu];
                            let fu = &self.actions[i * m + j][u];
                            let fw = &self.actions[j * m + l][w];
                            let composite: SortedMap =
                                fw.iter().zip(fu).map(|(a, b)| a.iter().map(|&x| b[x]).collect()).collect();
                            if &composite != direct {
                                return bad(format!(
                                    "action is not functorial at {} ∘ {}",
                                    k.arrow_name(bj, bl, w),
                                    k.arrow_name(bi, bj, u)
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `∫^{b ∈ B} hom(a, b) × F(b)`.
    pub fn evaluate(&self, a: Obj) -> Result<Evaluated> {
        let k = &self.ambient;
        k.check_object(a)?;
        let base = k.base();
        let site = base.site();
        let m = self.support.len();
        let homs: Vec<usize> = self.support.iter().map(|&b| k.hom_size(a, b)).collect();
        let mut offsets = Vec::new();
        let mut classes = Vec::new();
        let mut reps = Vec::new();
        let mut widths = Vec::new();
        let mut sizes = Vec::new();
        for g in 0..base.sorts() {
            let width: Vec<usize> = self.values.iter().map(|v| v.size(g)).collect();
            let mut off = vec![0; m + 1];
            for i in 0..m {
                off[i + 1] = off[i] + homs[i] * width[i];
            }
            let mut uf = UnionFind::new(off[m]);
            for i in 0..m {
                for j in 0..m {
                    let (bi, bj) = (self.support[i], self.support[j]);
                    for w in 0..k.hom_size(bi, bj) {
                        let fw = &self.actions[i * m + j][w][g];
                        for u in 0..homs[i] {
                            let wu = k.compose(a, bi, bj, w, u);
                            for y in 0..width[j] {
                                uf.union(off[j] + wu * width[j] + y, off[i] + u * width[i] + fw[y]);
                            }
                        }
                    }
                }
            }
            let (of, count) = uf.classes();
            let mut rep = vec![(0, 0, 0); count];
            let mut seen = vec![false; count];
            for i in 0..m {
                for u in 0..homs[i] {
                    for y in 0..width[i] {
                        let c = of[off[i] + u * width[i] + y];
                        if !seen[c] {
                            seen[c] = true;
                            rep[c] = (i, u, y);
                        }
                    }
                }
            }
            sizes.push(count);
            classes.push(of);
            reps.push(rep);
            offsets.push(off);
            widths.push(width);
        }
        let restrict = (0..site.arrow_count())
            .map(|h| {
                let (s, t) = (site.arrow(h).src, site.arrow(h).tgt);
                reps[t]
                    .iter()
                    .map(|&(i, u, y)| classes[s][offsets[s][i] + u * widths[s][i] + self.values[i].restrict(h, y)])
                    .collect()
            })
            .collect();
        let mut ev = Evaluated {
            object: a,
            value: BaseObject::from_parts(base.tag(), sizes, restrict),
            offsets,
            class: classes,
            reps,
            widths,
        };
        if base.tag() == crate::base::BackendTag::Bool2 && ev.value.card() > 1 {
            ev.value = base.constant(1);
            ev.class[0].iter_mut().for_each(|c| *c = 0);
            ev.reps[0].truncate(1);
        }
        Ok(ev)
    }

    pub fn evaluate_value(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.evaluate(a)?.value)
    }

    /// The action `G(u): G(b) -> G(a)` for `u: a -> b`, between evaluations.
    pub fn pull(&self, at_a: &Evaluated, at_b: &Evaluated, u: usize) -> SortedMap {
        let k = &self.ambient;
        let (a, b) = (at_a.object, at_b.object);
        (0..at_b.reps.len())
            .map(|g| {
                at_b.reps[g]
                    .iter()
                    .map(|&(i, w, y)| at_a.class_of(g, i, k.compose(a, b, self.support[i], w, u), y))
                    .collect()
            })
            .collect()
    }

    /// Injection of the certificate value at `b_i` into the evaluation at `b_i`.
    pub fn unit_at(&self, i: usize, at: &Evaluated) -> SortedMap {
        let id = self.ambient.identity(self.support[i]);
        (0..at.reps.len())
            .map(|g| (0..self.values[i].size(g)).map(|y| at.class_of(g, i, id, y)).collect())
            .collect()
    }

    /// Whether each certificate value is already the value of the
    /// extension, i.e. the support is Kan-closed.
    pub fn is_kan_closed(&self) -> Result<bool> {
        for i in 0..self.support.len() {
            let ev = self.evaluate(self.support[i])?;
            let unit = self.unit_at(i, &ev);
            if !is_bijection(&unit, ev.value.sizes()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Replaces the certificate values by the values of the extension.
    pub fn canonicalize(&self) -> Result<SmallPresheaf> {
        if self.is_kan_closed()? {
            return Ok(self.clone());
        }
        let evs: Vec<Evaluated> = self.support.iter().map(|&b| self.evaluate(b)).collect::<Result<_>>()?;
        Ok(self.restrict_to_evaluations(&self.support, &evs))
    }

    /// The certificate with support `objs` and the given evaluations.
    fn restrict_to_evaluations(&self, objs: &[Obj], evs: &[Evaluated]) -> SmallPresheaf {
        let k = &self.ambient;
        let m = objs.len();
        let mut actions = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                actions.push((0..k.hom_size(objs[i], objs[j])).map(|u| self.pull(&evs[i], &evs[j], u)).collect());
            }
        }
        SmallPresheaf {
            ambient: k.clone(),
            support: objs.to_vec(),
            values: evs.iter().map(|e| e.value.clone()).collect(),
            actions,
        }
    }

    /// The same presheaf certified on a larger support.
    pub fn extend_support(&self, extra: &[Obj]) -> Result<SmallPresheaf> {
        let mut objs = self.support.clone();
        for &a in extra {
            if !objs.contains(&a) {
                objs.push(a);
            }
        }
        let evs: Vec<Evaluated> = objs.iter().map(|&b| self.evaluate(b)).collect::<Result<_>>()?;
        Ok(self.restrict_to_evaluations(&objs, &evs))
    }

    fn same_ambient(&self, other: &SmallPresheaf) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(format!(
                "presheaves on {} and {}",
                self.ambient.name(),
                other.ambient.name()
            )));
        }
        Ok(())
    }

    /// `∫_{b ∈ supp F} [F(b), G(b)]`, with its elements.
    pub fn hom(&self, g: &SmallPresheaf, budget: u64) -> Result<PresheafHom> {
        self.same_ambient(g)?;
        let (evaluations, edges) = self.nat_data(g)?;
        let base = self.base();
        let targets: Vec<BaseObject> = evaluations.iter().map(|e| e.value.clone()).collect();
        let hom = crate::base::family_hom(base.site(), base.tag(), &self.values, &targets, &edges, budget)?;
        Ok(PresheafHom { hom, evaluations })
    }

    pub fn hom_object(&self, g: &SmallPresheaf, budget: u64) -> Result<BaseObject> {
        Ok(self.hom(g, budget)?.hom.object)
    }

    /// Morphisms `F -> G` of the underlying category.
    pub fn morphisms(&self, g: &SmallPresheaf, budget: u64, limit: Option<usize>) -> Result<Vec<PresheafMorphism>> {
        self.same_ambient(g)?;
        let (evs, edges) = self.nat_data(g)?;
        let targets: Vec<BaseObject> = evs.into_iter().map(|e| e.value).collect();
        let site = self.base().site().clone();
        let nats = global_nats(&site, &self.values, &targets, &edges, false, budget, limit)?;
        let sorts = self.base().sorts();
        Ok(nats
            .into_iter()
            .map(|a| PresheafMorphism {
                source: self.clone(),
                target: g.clone(),
                components: a.chunks(sorts).map(|c| c.to_vec()).collect(),
            })
            .collect())
    }

    fn nat_data(&self, g: &SmallPresheaf) -> Result<(Vec<Evaluated>, Vec<SortedEdge>)> {
        let k = &self.ambient;
        let m = self.support.len();
        let evs: Vec<Evaluated> = self.support.iter().map(|&b| g.evaluate(b)).collect::<Result<_>>()?;
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for u in 0..k.hom_size(self.support[i], self.support[j]) {
                    let fu = self.action(i, j, u);
                    let gu = g.pull(&evs[i], &evs[j], u);
                    for s in 0..k.base().sorts() {
                        edges.push(SortedEdge { from: j, to: i, sort: s, x_map: fu[s].clone(), y_map: gu[s].clone() });
                    }
                }
            }
        }
        Ok((evs, edges))
    }

    /// Whether the denoted presheaves are isomorphic: an invertible natural
    /// family on the union of the supports.
    pub fn iso(&self, g: &SmallPresheaf, budget: u64) -> Result<bool> {
        self.same_ambient(g)?;
        let mut objs = self.support.clone();
        for &b in &g.support {
            if !objs.contains(&b) {
                objs.push(b);
            }
        }
        let f_ev: Vec<Evaluated> = objs.iter().map(|&b| self.evaluate(b)).collect::<Result<_>>()?;
        let g_ev: Vec<Evaluated> = objs.iter().map(|&b| g.evaluate(b)).collect::<Result<_>>()?;
        if f_ev.iter().zip(&g_ev).any(|(x, y)| x.value.sizes() != y.value.sizes()) {
            return Ok(false);
        }
        let k = &self.ambient;
        let m = objs.len();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for u in 0..k.hom_size(objs[i], objs[j]) {
                    let fu = self.pull(&f_ev[i], &f_ev[j], u);
                    let gu = g.pull(&g_ev[i], &g_ev[j], u);
                    for s in 0..k.base().sorts() {
                        edges.push(SortedEdge { from: j, to: i, sort: s, x_map: fu[s].clone(), y_map: gu[s].clone() });
                    }
                }
            }
        }
        let xs: Vec<BaseObject> = f_ev.into_iter().map(|e| e.value).collect();
        let ys: Vec<BaseObject> = g_ev.into_iter().map(|e| e.value).collect();
        let found = global_nats(k.base().site(), &xs, &ys, &edges, true, budget, Some(1))?;
        Ok(!found.is_empty())
    }

    /// Values of the extension at the given objects, by size.
    pub fn profile(&self, objs: &[Obj]) -> Result<Vec<Vec<usize>>> {
        objs.iter().map(|&a| Ok(self.evaluate(a)?.value.sizes().to_vec())).collect()
    }
}

/// `presheafHom(F, G)` together with `G` evaluated on the support of `F`.
#[derive(Clone, Debug)]
pub struct PresheafHom {
    pub hom: FamilyHom,
    pub evaluations: Vec<Evaluated>,
}

impl PresheafMorphism {
    /// The component at any object, between evaluations.
    pub fn at(&self, a: Obj) -> Result<(Evaluated, Evaluated, SortedMap)> {
        let fa = self.source.evaluate(a)?;
        let ga = self.target.evaluate(a)?;
        let k = self.source.ambient();
        let evs: Vec<Evaluated> =
            self.source.support.iter().map(|&b| self.target.evaluate(b)).collect::<Result<_>>()?;
        let map = (0..fa.reps.len())
            .map(|g| {
                fa.reps[g]
                    .iter()
                    .map(|&(i, u, y)| {
                        let z = self.components[i][g][y];
                        let (j, w, t) = evs[i].rep(g, z);
                        let b = self.source.support[i];
                        ga.class_of(g, j, k.compose(a, b, self.target.support[j], w, u), t)
                    })
                    .collect()
            })
            .collect();
        Ok((fa, ga, map))
    }

    /// `Y(f): Y(a) -> Y(b)` for an arrow `f: a -> b`.
    pub fn yoneda(k: &Category, a: Obj, b: Obj, f: usize) -> Result<PresheafMorphism> {
        let ya = SmallPresheaf::representable(k, a)?;
        let yb = SmallPresheaf::representable(k, b)?;
        let at = yb.evaluate(a)?;
        let id_b = k.identity(b);
        let components = vec![(0..k.base().sorts())
            .map(|g| (0..ya.values[0].size(g)).map(|x| at.class_of(g, 0, k.compose(a, a, b, f, x), id_b)).collect())
            .collect()];
        Ok(PresheafMorphism { source: ya, target: yb, components })
    }

    pub fn identity(f: &SmallPresheaf) -> Result<PresheafMorphism> {
        let components = (0..f.support.len())
            .map(|i| {
                let ev = f.evaluate(f.support[i])?;
                Ok(f.unit_at(i, &ev))
            })
            .collect::<Result<_>>()?;
        Ok(PresheafMorphism { source: f.clone(), target: f.clone(), components })
    }
}

pub(crate) fn identity_map(x: &BaseObject) -> SortedMap {
    x.sizes().iter().map(|&n| (0..n).collect()).collect()
}

pub(crate) fn is_bijection(map: &SortedMap, target_sizes: &[usize]) -> bool {
    map.iter().zip(target_sizes).all(|(m, &n)| {
        let mut seen = vec![false; n];
        m.len() == n && m.iter().all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
    })
}

trait CardOrFirst {
    fn card_or_first(&self) -> usize;
}

impl CardOrFirst for BaseObject {
    /// Size at the first sort; hom objects are constant so every sort agrees.
    fn card_or_first(&self) -> usize {
        self.size(0)
    }
}

#[cfg(test)]
mod tests;
