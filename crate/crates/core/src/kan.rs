//! Left Kan extension along functors and its right adjoint, restriction.

use serde::Serialize;

use crate::base::{BaseObject, Diagram, SortedMap, UnionFind};
use crate::bounds::Bounds;
use crate::category::{Category, Functor, FunctorKind, Obj};
use crate::error::{Error, Result};
use crate::presheaf::{
    certify, completeness_check, describe, diagrams_in, limit_vertex, phi_complete_check, pointwise_limit, represents,
    restriction, sample_objects, Completeness, ConeDiagram, FnSource, LimitClass, PointwiseSource, PresheafDiagram,
    SmallPresheaf, Variance, Verdict, Weight, SAMPLE_LIMIT,
};

/// `P F` applied to one presheaf.
#[derive(Clone, Debug)]
pub struct KanImage {
    pub functor: Functor,
    pub input: SmallPresheaf,
    pub output: SmallPresheaf,
}

struct LanEval {
    value: BaseObject,
    class: Vec<Vec<usize>>,
    offsets: Vec<Vec<usize>>,
    widths: Vec<Vec<usize>>,
    reps: Vec<Vec<(usize, usize, usize)>>,
}

impl LanEval {
    fn class_of(&self, sort: usize, i: usize, f: usize, y: usize) -> usize {
        self.class[sort][self.offsets[sort][i] + f * self.widths[sort][i] + y]
    }
}

/// `Lan_F g`, evaluated pointwise as `∫^{b} L(l, F b) × g(b)` over the
/// support of `g`.
struct LanSource<'a> {
    f: &'a Functor,
    g: &'a SmallPresheaf,
}

impl LanSource<'_> {
    fn eval(&self, l: Obj) -> Result<LanEval> {
        let (k, lc) = (self.f.source(), self.f.target());
        lc.check_object(l)?;
        let base = lc.base();
        let site = base.site();
        let support = self.g.support();
        let m = support.len();
        let images: Vec<Obj> = support.iter().map(|&b| self.f.map_object(b)).collect();
        let homs: Vec<usize> = images.iter().map(|&fb| lc.hom_size(l, fb)).collect();
        let (mut class, mut offsets, mut widths, mut reps, mut sizes) = (vec![], vec![], vec![], vec![], vec![]);
        for s in 0..base.sorts() {
            let width: Vec<usize> = (0..m).map(|i| self.g.value(i).size(s)).collect();
            let mut off = vec![0; m + 1];
            for i in 0..m {
                off[i + 1] = off[i] + homs[i] * width[i];
            }
            let mut uf = UnionFind::new(off[m]);
            for i in 0..m {
                for j in 0..m {
                    for w in 0..k.hom_size(support[i], support[j]) {
                        let fw = self.f.map_arrow(support[i], support[j], w);
                        let gw = &self.g.action(i, j, w)[s];
                        for f in 0..homs[i] {
                            let c = lc.compose(l, images[i], images[j], fw, f);
                            for y in 0..width[j] {
                                uf.union(off[j] + c * width[j] + y, off[i] + f * width[i] + gw[y]);
                            }
                        }
                    }
                }
            }
            let (of, count) = uf.classes();
            let mut rep = vec![(0, 0, 0); count];
            let mut seen = vec![false; count];
            for i in 0..m {
                for f in 0..homs[i] {
                    for y in 0..width[i] {
                        let c = of[off[i] + f * width[i] + y];
                        if !std::mem::replace(&mut seen[c], true) {
                            rep[c] = (i, f, y);
                        }
                    }
                }
            }
            sizes.push(count);
            class.push(of);
            offsets.push(off);
            widths.push(width);
            reps.push(rep);
        }
        let restrict = (0..site.arrow_count())
            .map(|h| {
                let (s, t) = (site.arrow(h).src, site.arrow(h).tgt);
                reps[t]
                    .iter()
                    .map(|&(i, f, y)| class[s][offsets[s][i] + f * widths[s][i] + self.g.value(i).restrict(h, y)])
                    .collect()
            })
            .collect();
        let mut ev = LanEval { value: BaseObject::from_parts(base.tag(), sizes, restrict), class, offsets, widths, reps };
        if base.tag() == crate::base::BackendTag::Bool2 && ev.value.card() > 1 {
            ev.value = base.constant(1);
            ev.class[0].iter_mut().for_each(|c| *c = 0);
            ev.reps[0].truncate(1);
        }
        Ok(ev)
    }
}

impl PointwiseSource for LanSource<'_> {
    fn ambient(&self) -> &Category {
        self.f.target()
    }

    fn mentioned(&self) -> Vec<Obj> {
        let mut out = Vec::new();
        for &b in self.g.support() {
            let fb = self.f.map_object(b);
            if !out.contains(&fb) {
                out.push(fb);
            }
        }
        out
    }

    fn value(&self, l: Obj) -> Result<BaseObject> {
        Ok(self.eval(l)?.value)
    }

    fn act(&self, l: Obj, l2: Obj, v: usize) -> Result<SortedMap> {
        let lc = self.f.target();
        let (at, at2) = (self.eval(l)?, self.eval(l2)?);
        let support = self.g.support();
        Ok((0..at2.reps.len())
            .map(|s| {
                at2.reps[s]
                    .iter()
                    .map(|&(i, f, y)| {
                        let fb = self.f.map_object(support[i]);
                        at.class_of(s, i, lc.compose(l, l2, fb, f, v), y)
                    })
                    .collect()
            })
            .collect())
    }
}

/// `P F (g)`, supported on the image of the support of `g`.
pub fn left_kan_along(f: &Functor, g: &SmallPresheaf) -> Result<SmallPresheaf> {
    if f.source() != g.ambient() {
        return Err(Error::AmbientMismatch(format!("{} is not defined on the ambient of the presheaf", f.name())));
    }
    let source = LanSource { f, g };
    restriction(&source, &source.mentioned())
}

pub fn kan_image(f: &Functor, g: &SmallPresheaf) -> Result<KanImage> {
    Ok(KanImage { functor: f.clone(), input: g.clone(), output: left_kan_along(f, g)? })
}

/// Objects of the source whose image could reach `b`; everything the
/// construction `L(F-, b)` refers to.
fn preimage_hint(f: &Functor, b: Obj) -> Vec<Obj> {
    if f.source().is_finite() {
        return f.source().enumerate(usize::MAX);
    }
    match f.kind() {
        FunctorKind::Identity => vec![b],
        FunctorKind::Opposite(inner) => preimage_hint(inner, b),
        FunctorKind::Composite(first, second) => {
            let mut out = Vec::new();
            for c in preimage_hint(second, b) {
                for a in preimage_hint(first, c) {
                    if !out.contains(&a) {
                        out.push(a);
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// `L(F-, b)` as a pointwise presheaf on the source.
fn hom_along(f: &Functor, b: Obj) -> impl PointwiseSource + '_ {
    let (k, l) = (f.source().clone(), f.target().clone());
    let l2 = l.clone();
    FnSource {
        ambient: k,
        mentioned: preimage_hint(f, b),
        uniform: f.is_uniform(),
        value: move |a: Obj| Ok(l.base().constant(l.hom_size(f.map_object(a), b))),
        act: move |a: Obj, a2: Obj, u: usize| {
            let (fa, fa2) = (f.map_object(a), f.map_object(a2));
            let fu = f.map_arrow(a, a2, u);
            let map: Vec<usize> = (0..l2.hom_size(fa2, b)).map(|x| l2.compose(fa, fa2, b, x, fu)).collect();
            Ok(vec![map; l2.base().sorts()])
        },
    }
}

/// The right adjoint to `P F` on `h`, when each `L(F-, b)` is small.
///
/// The certificate is `h ∘ F`, certified on the union of the supports of
/// the `L(F-, b)`.
pub fn restrict_along(f: &Functor, h: &SmallPresheaf, bounds: &Bounds) -> Result<Verdict> {
    if f.target() != h.ambient() {
        return Err(Error::AmbientMismatch(format!("{} does not land in the ambient of the presheaf", f.name())));
    }
    let mut support: Vec<Obj> = Vec::new();
    for &b in h.support() {
        match certify(&hom_along(f, b), bounds)? {
            Verdict::Small { certificate, .. } => {
                for &a in certificate.support() {
                    if !support.contains(&a) {
                        support.push(a);
                    }
                }
            }
            other => return Ok(other),
        }
    }
    let composite = FnSource {
        ambient: f.source().clone(),
        mentioned: support,
        uniform: f.is_uniform(),
        value: |a: Obj| h.evaluate_value(f.map_object(a)),
        act: |a: Obj, a2: Obj, u: usize| {
            let (fa, fa2) = (f.map_object(a), f.map_object(a2));
            Ok(h.pull(&h.evaluate(fa)?, &h.evaluate(fa2)?, f.map_arrow(a, a2, u)))
        },
    };
    certify(&composite, bounds)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionPair {
    pub index: usize,
    /// Sizes of `presheafHom(P F g, h)`.
    pub left: Vec<usize>,
    /// Sizes of `presheafHom(g, restriction of h)`, when it exists.
    pub right: Option<Vec<usize>>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub pairs: Vec<AdjunctionPair>,
    pub failures: Vec<String>,
}

impl AdjunctionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `presheafHom(P F g, h)` with `presheafHom(g, h ∘ F)` on every
/// corpus pair.
pub fn adjunction_check(f: &Functor, corpus: &[(SmallPresheaf, SmallPresheaf)], bounds: &Bounds) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport { pairs: Vec::new(), failures: Vec::new() };
    for (index, (g, h)) in corpus.iter().enumerate() {
        let lan = left_kan_along(f, g)?;
        let left = lan.hom_object(h, bounds.iso_budget)?;
        let (right, ok) = match restrict_along(f, h, bounds)? {
            Verdict::Small { certificate, .. } => {
                let r = g.hom_object(&certificate, bounds.iso_budget)?;
                let ok = f.source().base().iso(&left, &r, bounds.iso_budget)?;
                (Some(r.sizes().to_vec()), ok)
            }
            other => {
                report.failures.push(format!("pair {index}: restriction is {}", other.label()));
                (None, false)
            }
        };
        if !ok && right.is_some() {
            report.failures.push(format!(
                "pair {index}: hom sizes {:?} and {:?} differ",
                left.sizes(),
                right.as_ref().expect("checked")
            ));
        }
        report.pairs.push(AdjunctionPair { index, left: left.sizes().to_vec(), right, ok });
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuitySample {
    pub diagram: String,
    /// Whether `F` sends the limit cone to a limit cone.
    pub functor_preserves: bool,
    /// Whether `P F` sends the pointwise limit of representables to the
    /// pointwise limit of their images.
    pub kan_preserves: bool,
}

impl ContinuitySample {
    pub fn matched(&self) -> bool {
        self.functor_preserves == self.kan_preserves
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub class: LimitClass,
    pub samples: Vec<ContinuitySample>,
    /// Diagrams without a limit among the probes, or without a certified
    /// pointwise limit.
    pub skipped: usize,
}

impl ContinuityReport {
    pub fn unmatched(&self) -> usize {
        self.samples.iter().filter(|s| !s.matched()).count()
    }
}

fn probes_of(k: &Category, bounds: &Bounds) -> Vec<Obj> {
    if k.is_finite() {
        k.enumerate(usize::MAX)
    } else {
        k.enumerate(bounds.probes)
    }
}

fn conical(k: &Category, s: &ConeDiagram) -> Weight {
    let base = k.base();
    Weight::constant(base, s.domain.clone(), Variance::Covariant, &base.unit())
}

/// Per sample, whether `F` preserves a limit and whether `P F` preserves
/// the corresponding pointwise limit in `PK`.
pub fn continuity_check(f: &Functor, class: LimitClass, bounds: &Bounds) -> Result<ContinuityReport> {
    let (k, l) = (f.source(), f.target());
    for c in [k, l] {
        if phi_complete_check(c, class, bounds)?.k_complete == Completeness::Incomplete {
            return Err(Error::PremiseViolated(format!("{} lacks some {} limits", c.name(), class.name())));
        }
    }
    let (kp, lp) = (probes_of(k, bounds), probes_of(l, bounds));
    let mut report = ContinuityReport { class, samples: Vec::new(), skipped: 0 };
    for d in class.shapes(3) {
        for s in diagrams_in(k, &d, &sample_objects(k, bounds), SAMPLE_LIMIT) {
            let Some((x, lambda)) = limit_vertex(k, &s, &kp) else {
                report.skipped += 1;
                continue;
            };
            let fs = ConeDiagram {
                domain: s.domain.clone(),
                objects: s.objects.iter().map(|&a| f.map_object(a)).collect(),
                arrows: s
                    .domain
                    .arrows()
                    .iter()
                    .enumerate()
                    .map(|(u, a)| f.map_arrow(s.objects[a.src], s.objects[a.tgt], s.arrows[u]))
                    .collect(),
            };
            let flambda: Vec<usize> =
                (0..s.objects.len()).map(|i| f.map_arrow(x, s.objects[i], lambda[i])).collect();
            let functor_preserves = represents(l, &fs, f.map_object(x), &flambda, &lp);
            let ys = PresheafDiagram::representables(k, s.domain.clone(), s.objects.clone(), s.arrows.clone())?;
            let Verdict::Small { certificate: lim, .. } = pointwise_limit(k, &conical(k, &s), &ys, bounds)?.verdict else {
                report.skipped += 1;
                continue;
            };
            let image = left_kan_along(f, &lim)?;
            let yfs = PresheafDiagram::representables(l, fs.domain.clone(), fs.objects.clone(), fs.arrows.clone())?;
            let kan_preserves = match pointwise_limit(l, &conical(l, &fs), &yfs, bounds)?.verdict {
                Verdict::Small { certificate, .. } => image.iso(&certificate, bounds.iso_budget)?,
                _ => false,
            };
            report.samples.push(ContinuitySample { diagram: describe(k, &s), functor_preserves, kan_preserves });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Flatness {
    FlatOnProbes,
    NotFlat { sample: String, weighted: usize, limit: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub class: LimitClass,
    pub verdict: Flatness,
    pub samples: usize,
    /// The identity the samples exercise.
    pub statement: &'static str,
}

/// `X * G = ∫^a X(a) × G(a)` for `G` a presheaf on `K^op`.
fn weighted_by(x: &SmallPresheaf, g: &SmallPresheaf) -> Result<usize> {
    let k = x.ambient();
    let support = x.support();
    let m = support.len();
    let evs = support.iter().map(|&b| g.evaluate(b)).collect::<Result<Vec<_>>>()?;
    let gw: Vec<usize> = evs.iter().map(|e| e.value.card()).collect();
    let xw: Vec<usize> = (0..m).map(|i| x.value(i).card()).collect();
    let mut off = vec![0; m + 1];
    for i in 0..m {
        off[i + 1] = off[i] + xw[i] * gw[i];
    }
    let mut uf = UnionFind::new(off[m]);
    for i in 0..m {
        for j in 0..m {
            for u in 0..k.hom_size(support[i], support[j]) {
                let xu = &x.action(i, j, u)[0];
                let gu = &g.pull(&evs[j], &evs[i], u)[0];
                for p in 0..xw[j] {
                    for y in 0..gw[i] {
                        uf.union(off[j] + p * gw[j] + gu[y], off[i] + xu[p] * gw[i] + y);
                    }
                }
            }
        }
    }
    let n = uf.classes().1;
    Ok(if k.base().tag() == crate::base::BackendTag::Bool2 { n.min(1) } else { n })
}

/// Subterminal presheaves of a finite category: indicator functions of sieves.
fn sieves(k: &Category, limit: usize) -> Result<Vec<SmallPresheaf>> {
    let objs = k.enumerate(usize::MAX);
    let n = objs.len();
    let base = k.base();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n.min(16)) {
        if out.len() >= limit {
            break;
        }
        let inside = |a: usize| mask >> a & 1 == 1;
        let closed = (0..n).all(|b| !inside(b) || (0..n).all(|a| k.hom_size(objs[a], objs[b]) == 0 || inside(a)));
        if !closed {
            continue;
        }
        let values: Vec<BaseObject> = (0..n).map(|a| base.constant(inside(a) as usize)).collect();
        let mut actions = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let map = if inside(b) { vec![0] } else { vec![] };
                actions.push((0..k.hom_size(objs[a], objs[b])).map(|_| vec![map.clone(); base.sorts()]).collect());
            }
        }
        out.push(SmallPresheaf::new(k, objs.clone(), values, actions)?);
    }
    Ok(out)
}

fn fail(report: &mut FlatnessReport, sample: String, weighted: usize, limit: usize) {
    if weighted != limit && report.verdict == Flatness::FlatOnProbes {
        report.verdict = Flatness::NotFlat { sample, weighted, limit };
    }
}

/// Whether `g * -: PK -> V` preserves sampled limits of the class.
pub fn flatness_check(g: &SmallPresheaf, class: LimitClass, bounds: &Bounds) -> Result<FlatnessReport> {
    let k = g.ambient().opposite();
    let base = k.base().clone();
    if !base.is_single_sorted() {
        return Err(Error::Unsupported("flatness is checked over single-sorted bases".into()));
    }
    if completeness_check(&k, class, bounds)?.verdict == Completeness::Incomplete {
        return Err(Error::PremiseViolated(format!("small presheaves on {} lack some {} limits", k.name(), class.name())));
    }
    let objects = sample_objects(&k, bounds);
    let mut corpus: Vec<SmallPresheaf> =
        objects.iter().map(|&a| SmallPresheaf::representable(&k, a)).collect::<Result<_>>()?;
    if k.is_finite() {
        corpus.extend(sieves(&k, 64)?);
    }
    let mut report = FlatnessReport {
        class,
        verdict: Flatness::FlatOnProbes,
        samples: 0,
        statement: "(Lan_Y G)(X) = X * G",
    };
    for d in class.shapes(3) {
        if d.arrow_count() == d.object_count() {
            // products of corpus members
            let n = d.object_count();
            let total = corpus.len().checked_pow(n as u32).unwrap_or(usize::MAX).min(SAMPLE_LIMIT);
            for code in 0..total {
                let pick: Vec<usize> = (0..n).map(|i| code / corpus.len().pow(i as u32) % corpus.len()).collect();
                let xs: Vec<SmallPresheaf> = pick.iter().map(|&i| corpus[i].clone()).collect();
                let diagram = PresheafDiagram::discrete(xs.clone())?;
                let w = Weight::constant(&base, d.clone(), Variance::Covariant, &base.unit());
                let Verdict::Small { certificate, .. } = pointwise_limit(&k, &w, &diagram, bounds)?.verdict else {
                    continue;
                };
                report.samples += 1;
                let weighted = weighted_by(&certificate, g)?;
                let parts = xs.iter().map(|x| Ok(base.constant(weighted_by(x, g)?))).collect::<Result<Vec<_>>>()?;
                let limit = base.limit(&d, &Diagram { objects: parts.clone(), maps: parts.iter().map(crate::presheaf::identity_map).collect() })?;
                fail(&mut report, format!("product of corpus members {pick:?}"), weighted, limit.object.card());
            }
        } else {
            for s in diagrams_in(&k, &d, &objects, SAMPLE_LIMIT) {
                let ys = PresheafDiagram::representables(&k, s.domain.clone(), s.objects.clone(), s.arrows.clone())?;
                let Verdict::Small { certificate, .. } = pointwise_limit(&k, &conical(&k, &s), &ys, bounds)?.verdict else {
                    continue;
                };
                report.samples += 1;
                let weighted = weighted_by(&certificate, g)?;
                let evs = s.objects.iter().map(|&a| g.evaluate(a)).collect::<Result<Vec<_>>>()?;
                let maps = d
                    .arrows()
                    .iter()
                    .enumerate()
                    .map(|(u, a)| g.pull(&evs[a.tgt], &evs[a.src], s.arrows[u]))
                    .collect();
                let parts = Diagram { objects: evs.iter().map(|e| e.value.clone()).collect(), maps };
                let limit = base.limit(&d, &parts)?;
                fail(&mut report, describe(&k, &s), weighted, limit.object.card());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
