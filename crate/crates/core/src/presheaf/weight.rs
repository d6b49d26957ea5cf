use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::base::{family_hom, Base, BaseObject, Bifunctor, Diagram, FamilyHom, Shape, SortedEdge, SortedMap};
use crate::bounds::Bounds;
use crate::category::{Category, Obj};
use crate::error::{Error, Result};

use super::certify::{certify, PointwiseSource, Verdict};
use super::{Evaluated, PresheafMorphism, SmallPresheaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A weight on a finite shape: covariant weights index limits,
/// contravariant ones index colimits.
#[derive(Clone, Debug)]
pub struct Weight {
    pub name: String,
    pub domain: Shape,
    pub variance: Variance,
    pub values: Vec<BaseObject>,
    /// For `u: c -> c'`, a map `w(c) -> w(c')` (covariant) or
    /// `w(c') -> w(c)` (contravariant).
    pub maps: Vec<SortedMap>,
}

impl Weight {
    pub fn new(
        base: &Base,
        name: impl Into<String>,
        domain: Shape,
        variance: Variance,
        values: Vec<BaseObject>,
        maps: Vec<SortedMap>,
    ) -> Result<Weight> {
        let w = Weight { name: name.into(), domain, variance, values, maps };
        let shape = match variance {
            Variance::Covariant => w.domain.clone(),
            Variance::Contravariant => w.domain.opposite(),
        };
        base.check_diagram(&shape, &Diagram { objects: w.values.clone(), maps: w.maps.clone() })?;
        Ok(w)
    }

    pub fn constant(_base: &Base, domain: Shape, variance: Variance, x: &BaseObject) -> Weight {
        let d = Diagram::constant(&domain, x);
        Weight { name: format!("const_{}", domain.name()), domain, variance, values: d.objects, maps: d.maps }
    }

    /// The unit weight on the terminal shape.
    pub fn unit(base: &Base, variance: Variance) -> Weight {
        Weight::constant(base, Shape::terminal(), variance, &base.unit()).named("unit")
    }

    pub fn empty(base: &Base, variance: Variance) -> Weight {
        Weight::constant(base, Shape::discrete(0), variance, &base.unit()).named("empty")
    }

    /// Conical (co)products of `n` objects.
    pub fn discrete(base: &Base, n: usize, variance: Variance) -> Weight {
        Weight::constant(base, Shape::discrete(n), variance, &base.unit()).named(format!("discrete{n}"))
    }

    pub fn named(mut self, name: impl Into<String>) -> Weight {
        self.name = name.into();
        self
    }

    pub fn is_conical(&self) -> bool {
        self.values.iter().all(|v| v.sizes().iter().all(|&n| n == 1))
    }

    fn check_variance(&self, wanted: Variance) -> Result<()> {
        if self.variance != wanted && self.domain.arrow_count() != self.domain.object_count() {
            return Err(Error::InvalidDiagram(format!(
                "weight {} has the wrong variance for this use",
                self.name
            )));
        }
        Ok(())
    }
}

/// A functor from a finite shape into small presheaves on one ambient.
#[derive(Clone, Debug)]
pub struct PresheafDiagram {
    pub domain: Shape,
    pub objects: Vec<SmallPresheaf>,
    /// `maps[u]: S(src u) -> S(tgt u)`.
    pub maps: Vec<PresheafMorphism>,
}

fn same_shape(a: &Shape, b: &Shape) -> bool {
    a.object_count() == b.object_count()
        && a.arrow_count() == b.arrow_count()
        && a.arrows().iter().zip(b.arrows()).all(|(x, y)| x.src == y.src && x.tgt == y.tgt)
}

impl PresheafDiagram {
    pub fn new(domain: Shape, objects: Vec<SmallPresheaf>, maps: Vec<PresheafMorphism>) -> Result<Self> {
        let d = PresheafDiagram { domain, objects, maps };
        d.check()?;
        Ok(d)
    }

    pub fn empty(_k: &Category) -> Self {
        PresheafDiagram { domain: Shape::discrete(0), objects: vec![], maps: vec![] }
    }

    pub fn discrete(objects: Vec<SmallPresheaf>) -> Result<Self> {
        let domain = Shape::discrete(objects.len());
        let maps = objects.iter().map(PresheafMorphism::identity).collect::<Result<_>>()?;
        PresheafDiagram::new(domain, objects, maps)
    }

    /// `Y ∘ S` for a functor `S: domain -> K` given by an object per
    /// domain object and an arrow of `K` per domain arrow.
    pub fn representables(k: &Category, domain: Shape, objects: Vec<Obj>, arrows: Vec<usize>) -> Result<Self> {
        if objects.len() != domain.object_count() || arrows.len() != domain.arrow_count() {
            return Err(Error::InvalidDiagram("diagram data does not cover its domain".into()));
        }
        for (u, a) in domain.arrows().iter().enumerate() {
            let (s, t) = (objects[a.src], objects[a.tgt]);
            k.check_object(s)?;
            k.check_object(t)?;
            if arrows[u] >= k.hom_size(s, t) {
                return Err(Error::InvalidDiagram(format!("no arrow {} in the ambient", a.name)));
            }
            if domain.is_identity(u) && arrows[u] != k.identity(s) {
                return Err(Error::InvalidDiagram(format!("identity {} is not sent to an identity", a.name)));
            }
        }
        for f in 0..domain.arrow_count() {
            for g in 0..domain.arrow_count() {
                let (af, ag) = (domain.arrow(f), domain.arrow(g));
                if af.tgt != ag.src {
                    continue;
                }
                let gf = domain.compose(g, f);
                let c = k.compose(objects[af.src], objects[af.tgt], objects[ag.tgt], arrows[g], arrows[f]);
                if c != arrows[gf] {
                    return Err(Error::InvalidDiagram(format!(
                        "diagram does not preserve {} ∘ {}",
                        ag.name, af.name
                    )));
                }
            }
        }
        let objs: Vec<SmallPresheaf> =
            objects.iter().map(|&a| SmallPresheaf::representable(k, a)).collect::<Result<_>>()?;
        let maps = domain
            .arrows()
            .iter()
            .enumerate()
            .map(|(u, a)| PresheafMorphism::yoneda(k, objects[a.src], objects[a.tgt], arrows[u]))
            .collect::<Result<_>>()?;
        Ok(PresheafDiagram { domain, objects: objs, maps })
    }

    pub fn ambient(&self) -> Option<&Category> {
        self.objects.first().map(|o| o.ambient())
    }

    fn check(&self) -> Result<()> {
        let d = &self.domain;
        if self.objects.len() != d.object_count() || self.maps.len() != d.arrow_count() {
            return Err(Error::InvalidDiagram("diagram data does not cover its domain".into()));
        }
        if let Some(k) = self.ambient() {
            for o in &self.objects {
                if o.ambient() != k {
                    return Err(Error::AmbientMismatch("diagram objects live on different ambients".into()));
                }
            }
        }
        for (u, a) in d.arrows().iter().enumerate() {
            if self.maps[u].source != self.objects[a.src] || self.maps[u].target != self.objects[a.tgt] {
                return Err(Error::InvalidDiagram(format!("map of {} has the wrong endpoints", a.name)));
            }
        }
        // functoriality, checked at every support object
        let objs = self.mentioned();
        for &b in &objs {
            let (_, maps) = self.at(b)?;
            for (u, _) in d.arrows().iter().enumerate().filter(|(u, _)| d.is_identity(*u)) {
                if maps[u].iter().any(|m| m.iter().enumerate().any(|(x, &y)| x != y)) {
                    return Err(Error::InvalidDiagram(format!("identity {} acts non-trivially", d.arrow(u).name)));
                }
            }
            for f in 0..d.arrow_count() {
                for g in 0..d.arrow_count() {
                    if d.arrow(f).tgt != d.arrow(g).src {
                        continue;
                    }
                    let gf = d.compose(g, f);
                    let ok = maps[gf]
                        .iter()
                        .zip(maps[f].iter().zip(&maps[g]))
                        .all(|(h, (mf, mg))| h.iter().enumerate().all(|(x, &y)| mg[mf[x]] == y));
                    if !ok {
                        return Err(Error::InvalidDiagram(format!(
                            "diagram does not preserve {} ∘ {}",
                            d.arrow(g).name,
                            d.arrow(f).name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Union of the supports of the diagram objects, in order.
    pub fn mentioned(&self) -> Vec<Obj> {
        let mut out = Vec::new();
        for o in &self.objects {
            for &b in o.support() {
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        out
    }

    /// Evaluations of every `S(c)` at `a`, and the maps `S(u)_a`.
    pub fn at(&self, a: Obj) -> Result<(Vec<Evaluated>, Vec<SortedMap>)> {
        let evs: Vec<Evaluated> = self.objects.iter().map(|o| o.evaluate(a)).collect::<Result<_>>()?;
        let maps = self.maps.iter().map(|m| Ok(m.at(a)?.2)).collect::<Result<_>>()?;
        Ok((evs, maps))
    }
}

fn check_domains(w: &Weight, s: &PresheafDiagram) -> Result<()> {
    if !same_shape(&w.domain, &s.domain) {
        return Err(Error::InvalidDiagram(format!("weight {} and diagram have different domains", w.name)));
    }
    Ok(())
}

/// `w * S`, computed pointwise as `∫^c w(c) × S(c)(b)` on the union of the
/// supports of the diagram.
pub fn weighted_colimit(base: &Base, k: &Category, w: &Weight, s: &PresheafDiagram) -> Result<SmallPresheaf> {
    w.check_variance(Variance::Contravariant)?;
    check_domains(w, s)?;
    if let Some(amb) = s.ambient() {
        if amb != k {
            return Err(Error::AmbientMismatch("diagram is not on the requested ambient".into()));
        }
    }
    let d = &w.domain;
    let n = d.object_count();
    let support = s.mentioned();
    let mut points = Vec::new();
    for &b in &support {
        let (evs, maps) = s.at(b)?;
        let mut values = Vec::with_capacity(n * n);
        for c in 0..n {
            for c2 in 0..n {
                values.push(base.tensor(&w.values[c], &evs[c2].value)?);
            }
        }
        let pair = |x: usize, y: usize, g: usize, c2: usize| x * evs[c2].value.size(g) + y;
        let left = d
            .arrows()
            .iter()
            .enumerate()
            .map(|(u, a)| {
                (0..n)
                    .map(|c2| {
                        (0..base.sorts())
                            .map(|g| {
                                let ny = evs[c2].value.size(g);
                                (0..w.values[a.tgt].size(g) * ny)
                                    .map(|p| pair(w.maps[u][g][p / ny], p % ny, g, c2))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let right = d
            .arrows()
            .iter()
            .enumerate()
            .map(|(u, a)| {
                (0..n)
                    .map(|c| {
                        (0..base.sorts())
                            .map(|g| {
                                let ny = evs[a.src].value.size(g);
                                let nt = evs[a.tgt].value.size(g);
                                (0..w.values[c].size(g) * ny).map(|p| (p / ny) * nt + maps[u][g][p % ny]).collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let t = Bifunctor { values, left, right };
        let colim = base.coend(d, &t)?;
        points.push((evs, colim));
    }
    let m = support.len();
    let mut actions = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let (bi, bj) = (support[i], support[j]);
            let mut per_arrow = Vec::new();
            for v in 0..k.hom_size(bi, bj) {
                let (evs_i, colim_i) = &points[i];
                let (evs_j, colim_j) = &points[j];
                let pulls: Vec<SortedMap> =
                    (0..n).map(|c| s.objects[c].pull(&evs_i[c], &evs_j[c], v)).collect();
                let map: SortedMap = (0..base.sorts())
                    .map(|g| {
                        let mut out = vec![usize::MAX; colim_j.object.size(g)];
                        for c in 0..n {
                            let ny_j = evs_j[c].value.size(g);
                            let ny_i = evs_i[c].value.size(g);
                            for (p, &class) in colim_j.injections[c][g].iter().enumerate() {
                                if out[class] != usize::MAX {
                                    continue;
                                }
                                let (x, y) = (p / ny_j, p % ny_j);
                                out[class] = colim_i.injections[c][g][x * ny_i + pulls[c][g][y]];
                            }
                        }
                        out
                    })
                    .collect();
                per_arrow.push(map);
            }
            actions.push(per_arrow);
        }
    }
    let values = points.into_iter().map(|(_, c)| c.object).collect();
    SmallPresheaf::new(k, support, values, actions)
}

/// One point of a pointwise limit: the end and the evaluations used.
#[derive(Debug)]
struct LimitPoint {
    hom: FamilyHom,
    evs: Vec<Evaluated>,
}

/// `{w, S}(a) = ∫_c [w(c), S(c)(a)]`, evaluated on demand.
#[derive(Debug)]
pub struct LimitSource {
    ambient: Category,
    weight: Weight,
    diagram: PresheafDiagram,
    budget: u64,
    memo: RefCell<HashMap<Obj, Rc<LimitPoint>>>,
}

impl LimitSource {
    pub fn new(k: &Category, w: &Weight, s: &PresheafDiagram, budget: u64) -> Result<Self> {
        w.check_variance(Variance::Covariant)?;
        check_domains(w, s)?;
        if let Some(amb) = s.ambient() {
            if amb != k {
                return Err(Error::AmbientMismatch("diagram is not on the requested ambient".into()));
            }
        }
        for v in &w.values {
            k.base().check(v)?;
        }
        Ok(LimitSource {
            ambient: k.clone(),
            weight: w.clone(),
            diagram: s.clone(),
            budget,
            memo: RefCell::default(),
        })
    }

    fn point(&self, a: Obj) -> Result<Rc<LimitPoint>> {
        if let Some(p) = self.memo.borrow().get(&a) {
            return Ok(p.clone());
        }
        self.ambient.check_object(a)?;
        let (evs, maps) = self.diagram.at(a)?;
        let d = &self.weight.domain;
        let base = self.ambient.base();
        let mut edges = Vec::new();
        for u in d.non_identity_arrows() {
            let arrow = d.arrow(u);
            for g in 0..base.sorts() {
                edges.push(SortedEdge {
                    from: arrow.src,
                    to: arrow.tgt,
                    sort: g,
                    x_map: self.weight.maps[u][g].clone(),
                    y_map: maps[u][g].clone(),
                });
            }
        }
        let targets: Vec<BaseObject> = evs.iter().map(|e| e.value.clone()).collect();
        let hom = family_hom(base.site(), base.tag(), &self.weight.values, &targets, &edges, self.budget)?;
        let p = Rc::new(LimitPoint { hom, evs });
        self.memo.borrow_mut().insert(a, p.clone());
        Ok(p)
    }

    pub fn value_at(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.point(a)?.hom.object.clone())
    }

    /// Components `φ_c: w(c) -> S(c)(a)` of element `k` at sort `g`, at the
    /// identity slot.
    pub fn element(&self, a: Obj, g: usize, k: usize) -> Result<Vec<Vec<usize>>> {
        let p = self.point(a)?;
        let site = self.ambient.base().site();
        let id = site.identity(g);
        Ok((0..self.weight.values.len()).map(|c| p.hom.component(g, k, c, id).to_vec()).collect())
    }
}

impl PointwiseSource for LimitSource {
    fn ambient(&self) -> &Category {
        &self.ambient
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.diagram.mentioned()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        self.value_at(a)
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        let (pa, pb) = (self.point(a)?, self.point(b)?);
        let site = self.ambient.base().site().clone();
        let pulls: Vec<SortedMap> = (0..self.diagram.objects.len())
            .map(|c| self.diagram.objects[c].pull(&pa.evs[c], &pb.evs[c], u))
            .collect();
        Ok((0..site.object_count())
            .map(|g| {
                let slots = pb.hom.into_arrows(g).to_vec();
                pb.hom.elements[g]
                    .iter()
                    .map(|phi| {
                        let moved: Vec<Vec<usize>> = phi
                            .iter()
                            .enumerate()
                            .map(|(idx, comp)| {
                                let (c, slot) = (idx / slots.len(), idx % slots.len());
                                let s = site.arrow(slots[slot]).src;
                                comp.iter().map(|&y| pulls[c][s][y]).collect()
                            })
                            .collect();
                        pa.hom.lookup(g, &moved).expect("pulled family is natural")
                    })
                    .collect()
            })
            .collect())
    }
}

/// A pointwise limit together with its smallness verdict.
#[derive(Debug)]
pub struct LimitOutcome {
    pub source: LimitSource,
    pub verdict: Verdict,
}

pub fn pointwise_limit(k: &Category, w: &Weight, s: &PresheafDiagram, bounds: &Bounds) -> Result<LimitOutcome> {
    let source = LimitSource::new(k, w, s, bounds.iso_budget)?;
    let verdict = certify(&source, bounds)?;
    Ok(LimitOutcome { source, verdict })
}

/// `g ⊗ F`, pointwise.
pub fn base_tensor(g: &BaseObject, f: &SmallPresheaf) -> Result<SmallPresheaf> {
    let base = f.base().clone();
    let w = Weight::constant(&base, Shape::terminal(), Variance::Contravariant, g);
    let s = PresheafDiagram::discrete(vec![f.clone()])?;
    weighted_colimit(&base, f.ambient(), &w, &s)
}

/// `[g, F]`, pointwise, re-certified for smallness.
pub fn base_cotensor(g: &BaseObject, f: &SmallPresheaf, bounds: &Bounds) -> Result<LimitOutcome> {
    let base = f.base().clone();
    let w = Weight::constant(&base, Shape::terminal(), Variance::Covariant, g);
    let s = PresheafDiagram::discrete(vec![f.canonicalize()?])?;
    pointwise_limit(f.ambient(), &w, &s, bounds)
}
