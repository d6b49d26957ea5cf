//! Classes of conical limits, completeness checks, and closures.

use serde::{Deserialize, Serialize};

use crate::base::Shape;
use crate::bounds::Bounds;
use crate::category::{Category, Obj};
use crate::error::{Error, Result};

use super::certify::{certify, Verdict, Witness};
use super::solution::{solution_set_search, ConeDiagram, ConeSource, SolutionOutcome};
use super::weight::{pointwise_limit, weighted_colimit, PresheafDiagram, Variance, Weight};
use super::{PresheafMorphism, SmallPresheaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitClass {
    FiniteProducts,
    FiniteConnected,
    FiniteLimits,
}

/// Whether a closure adds limits or colimits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureMode {
    Limits,
    Colimits,
}

fn is_connected(d: &Shape) -> bool {
    let n = d.object_count();
    if n == 0 {
        return false;
    }
    let mut uf = crate::base::UnionFind::new(n);
    for a in d.arrows() {
        uf.union(a.src, a.tgt);
    }
    uf.classes().1 == 1
}

impl LimitClass {
    pub const ALL: [LimitClass; 3] = [LimitClass::FiniteProducts, LimitClass::FiniteConnected, LimitClass::FiniteLimits];

    pub fn name(&self) -> &'static str {
        match self {
            LimitClass::FiniteProducts => "FiniteProducts",
            LimitClass::FiniteConnected => "FiniteConnected",
            LimitClass::FiniteLimits => "FiniteLimits",
        }
    }

    pub fn parse(s: &str) -> Option<LimitClass> {
        LimitClass::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn contains_shape(&self, d: &Shape) -> bool {
        match self {
            LimitClass::FiniteProducts => d.arrow_count() == d.object_count(),
            LimitClass::FiniteConnected => is_connected(d),
            LimitClass::FiniteLimits => true,
        }
    }

    /// Conical weights whose domain lies in the class.
    pub fn contains(&self, w: &Weight) -> bool {
        w.is_conical() && self.contains_shape(&w.domain)
    }

    /// Sample shapes of the class with at most `max_objects` objects.
    pub fn shapes(&self, max_objects: usize) -> Vec<Shape> {
        let discrete = (0..=max_objects).map(Shape::discrete);
        let connected = [Shape::terminal(), Shape::walking_arrow(), Shape::parallel_pair(), Shape::cospan(), Shape::span()];
        let all: Vec<Shape> = match self {
            LimitClass::FiniteProducts => discrete.collect(),
            LimitClass::FiniteConnected => connected.into_iter().collect(),
            LimitClass::FiniteLimits => discrete.chain(connected.into_iter().skip(1)).collect(),
        };
        all.into_iter().filter(|d| d.object_count() <= max_objects).collect()
    }

    /// The shapes a closure iterates over: enough to generate the class.
    fn generators(&self, mode: ClosureMode) -> Vec<Shape> {
        let pullback = match mode {
            ClosureMode::Limits => Shape::cospan(),
            ClosureMode::Colimits => Shape::span(),
        };
        match self {
            LimitClass::FiniteProducts => vec![Shape::discrete(0), Shape::discrete(2)],
            LimitClass::FiniteConnected => vec![Shape::parallel_pair(), pullback],
            LimitClass::FiniteLimits => vec![Shape::discrete(0), Shape::discrete(2), Shape::parallel_pair(), pullback],
        }
    }
}

fn is_functor(k: &Category, d: &Shape, objects: &[Obj], arrows: &[usize]) -> bool {
    (0..d.arrow_count()).all(|f| {
        (0..d.arrow_count()).all(|g| {
            let (af, ag) = (d.arrow(f), d.arrow(g));
            af.tgt != ag.src
                || k.compose(objects[af.src], objects[af.tgt], objects[ag.tgt], arrows[g], arrows[f])
                    == arrows[d.compose(g, f)]
        })
    })
}

/// Functors `d -> K` landing in `objects`, in lexicographic order, at most `limit`.
pub fn diagrams_in(k: &Category, d: &Shape, objects: &[Obj], limit: usize) -> Vec<ConeDiagram> {
    let n = d.object_count();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    if n > 0 && objects.is_empty() {
        return out;
    }
    loop {
        if out.len() >= limit {
            break;
        }
        let objs: Vec<Obj> = choice.iter().map(|&i| objects[i]).collect();
        let mut arrows = vec![0usize; d.arrow_count()];
        for (u, a) in d.arrows().iter().enumerate() {
            if d.is_identity(u) {
                arrows[u] = k.identity(objs[a.src]);
            }
        }
        let free: Vec<usize> = d.non_identity_arrows().collect();
        arrow_choices(k, d, &objs, &free, 0, &mut arrows, &mut out, limit);
        // next object tuple
        let mut i = 0;
        while i < n {
            choice[i] += 1;
            if choice[i] < objects.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == n || objects.is_empty() {
            break;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn arrow_choices(
    k: &Category,
    d: &Shape,
    objs: &[Obj],
    free: &[usize],
    at: usize,
    arrows: &mut Vec<usize>,
    out: &mut Vec<ConeDiagram>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if at == free.len() {
        if is_functor(k, d, objs, arrows) {
            out.push(ConeDiagram { domain: d.clone(), objects: objs.to_vec(), arrows: arrows.clone() });
        }
        return;
    }
    let a = d.arrow(free[at]);
    for f in 0..k.hom_size(objs[a.src], objs[a.tgt]) {
        arrows[free[at]] = f;
        arrow_choices(k, d, objs, free, at + 1, arrows, out, limit);
    }
}

pub(crate) fn describe(k: &Category, s: &ConeDiagram) -> String {
    let names: Vec<String> = s.objects.iter().map(|&a| k.object_name(a)).collect();
    format!("{}[{}]", s.domain.name(), names.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Completeness {
    Complete,
    /// No failure on the sampled diagrams of an infinite category.
    CompleteOnProbes,
    Incomplete,
    Unknown,
}

impl Completeness {
    pub fn label(&self) -> &'static str {
        match self {
            Completeness::Complete => "Complete",
            Completeness::CompleteOnProbes => "CompleteOnProbes",
            Completeness::Incomplete => "Incomplete",
            Completeness::Unknown => "Unknown",
        }
    }
}

/// Whether small presheaves on `K` have the class's limits of representables.
#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub class: LimitClass,
    pub verdict: Completeness,
    pub samples: usize,
    pub failure: Option<(String, Witness)>,
    /// Whether every sample's smallness verdict matched the outcome of the
    /// solution-set search on the same diagram.
    pub solution_sets_agree: bool,
}

pub(crate) const SAMPLE_LIMIT: usize = 256;

pub(crate) fn sample_objects(k: &Category, bounds: &Bounds) -> Vec<Obj> {
    if k.is_finite() {
        k.enumerate(usize::MAX)
    } else {
        k.enumerate(bounds.probes.min(3))
    }
}

pub fn completeness_check(k: &Category, class: LimitClass, bounds: &Bounds) -> Result<CompletenessReport> {
    let base = k.base().clone();
    let objects = sample_objects(k, bounds);
    let mut report =
        CompletenessReport { class, verdict: Completeness::Complete, samples: 0, failure: None, solution_sets_agree: true };
    let mut unknown = false;
    for d in class.shapes(3) {
        for s in diagrams_in(k, &d, &objects, SAMPLE_LIMIT) {
            report.samples += 1;
            let yd = PresheafDiagram::representables(k, s.domain.clone(), s.objects.clone(), s.arrows.clone())?;
            let w = Weight::constant(&base, d.clone(), Variance::Covariant, &base.unit());
            let verdict = pointwise_limit(k, &w, &yd, bounds)?.verdict;
            let search = solution_set_search(k, &s, bounds)?;
            let agrees = match (&verdict, &search) {
                (Verdict::NotSmall { .. }, SolutionOutcome::No(_)) => true,
                (Verdict::NotSmall { .. }, _) | (_, SolutionOutcome::No(_)) => false,
                _ => true,
            };
            report.solution_sets_agree &= agrees;
            match verdict {
                Verdict::NotSmall { witness } => {
                    if report.failure.is_none() {
                        report.failure = Some((describe(k, &s), witness));
                    }
                }
                Verdict::Unknown { .. } => unknown = true,
                Verdict::Small { .. } => {}
            }
        }
    }
    report.verdict = if report.failure.is_some() {
        Completeness::Incomplete
    } else if unknown {
        Completeness::Unknown
    } else if k.is_finite() {
        Completeness::Complete
    } else {
        Completeness::CompleteOnProbes
    };
    Ok(report)
}

/// Φ-completeness of `K` itself and of its small presheaves, on samples.
#[derive(Clone, Debug)]
pub struct PhiCompleteReport {
    pub class: LimitClass,
    pub k_complete: Completeness,
    pub pk_complete: Completeness,
    pub samples: usize,
    /// Whether `Y` sent every limit found in `K` to the pointwise limit.
    pub yoneda_preserves: bool,
    pub failure: Option<String>,
}

/// Whether `lambda` at `x` is a limit cone as seen from `objects`.
pub(crate) fn represents(k: &Category, s: &ConeDiagram, x: Obj, lambda: &[usize], objects: &[Obj]) -> bool {
    objects.iter().all(|&a| {
        let cones = s.cones_at(k, a);
        let mut hit = vec![false; cones.len()];
        for f in 0..k.hom_size(a, x) {
            let c: Vec<usize> = (0..s.objects.len()).map(|d| k.compose(a, x, s.objects[d], lambda[d], f)).collect();
            match cones.iter().position(|y| *y == c) {
                Some(i) if !hit[i] => hit[i] = true,
                _ => return false,
            }
        }
        hit.iter().all(|&h| h)
    })
}

/// A vertex among `objects` whose cone represents the cone presheaf on them.
pub(crate) fn limit_vertex(k: &Category, s: &ConeDiagram, objects: &[Obj]) -> Option<(Obj, Vec<usize>)> {
    objects
        .iter()
        .flat_map(|&x| s.cones_at(k, x).into_iter().map(move |l| (x, l)))
        .find(|(x, l)| represents(k, s, *x, l, objects))
}

pub fn phi_complete_check(k: &Category, class: LimitClass, bounds: &Bounds) -> Result<PhiCompleteReport> {
    let base = k.base().clone();
    let objects = sample_objects(k, bounds);
    let probes = if k.is_finite() { objects.clone() } else { k.enumerate(bounds.probes) };
    let mut report = PhiCompleteReport {
        class,
        k_complete: Completeness::Complete,
        pk_complete: Completeness::Complete,
        samples: 0,
        yoneda_preserves: true,
        failure: None,
    };
    let (mut k_fail, mut pk_fail, mut unknown) = (false, false, false);
    for d in class.shapes(3) {
        for s in diagrams_in(k, &d, &objects, SAMPLE_LIMIT) {
            report.samples += 1;
            let yd = PresheafDiagram::representables(k, s.domain.clone(), s.objects.clone(), s.arrows.clone())?;
            let w = Weight::constant(&base, d.clone(), Variance::Covariant, &base.unit());
            let verdict = pointwise_limit(k, &w, &yd, bounds)?.verdict;
            match limit_vertex(k, &s, &probes) {
                Some((x, _)) => {
                    if let Some(cert) = verdict.certificate() {
                        let yx = SmallPresheaf::representable(k, x)?;
                        if !cert.iso(&yx, bounds.iso_budget)? {
                            report.yoneda_preserves = false;
                        }
                    }
                }
                None => {
                    if !k_fail {
                        report.failure = Some(format!("no limit of {} in {}", describe(k, &s), k.name()));
                    }
                    k_fail = true;
                }
            }
            match verdict {
                Verdict::NotSmall { .. } => pk_fail = true,
                Verdict::Unknown { .. } => unknown = true,
                Verdict::Small { .. } => {}
            }
            // the cone presheaf decides the infinite case outright
            if !k.is_finite() && k.decision().is_some() && !k_fail {
                if let Verdict::NotSmall { .. } = certify(&ConeSource::new(k, &s), bounds)? {
                    k_fail = true;
                }
            }
        }
    }
    let settle = |fail: bool| {
        if fail {
            Completeness::Incomplete
        } else if unknown {
            Completeness::Unknown
        } else if k.is_finite() {
            Completeness::Complete
        } else {
            Completeness::CompleteOnProbes
        }
    };
    report.k_complete = settle(k_fail);
    report.pk_complete = settle(pk_fail);
    Ok(report)
}

/// Iso-classes generated from the representables by a class of
/// (co)limits, up to a bound on their number.
#[derive(Clone, Debug)]
pub struct PhiClosure {
    pub members: Vec<SmallPresheaf>,
    /// False when a further non-isomorphic member exceeded the bound.
    pub stable: bool,
}

const MORPHISM_LIMIT: usize = 8;

fn member_diagrams(d: &Shape, members: &[SmallPresheaf], budget: u64) -> Result<Vec<PresheafDiagram>> {
    let n = d.object_count();
    let m = members.len();
    let symmetric = d.arrow_count() == n;
    let mut out = Vec::new();
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    for code in 0..total.min(1 << 16) {
        let pick: Vec<usize> = (0..n).map(|i| (code / m.pow(i as u32)) % m).collect();
        if symmetric && pick.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        let objs: Vec<SmallPresheaf> = pick.iter().map(|&i| members[i].clone()).collect();
        let free: Vec<usize> = d.non_identity_arrows().collect();
        let options: Vec<Vec<PresheafMorphism>> = free
            .iter()
            .map(|&u| {
                let a = d.arrow(u);
                objs[a.src].morphisms(&objs[a.tgt], budget, Some(MORPHISM_LIMIT))
            })
            .collect::<Result<_>>()?;
        let mut idx = vec![0usize; free.len()];
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        loop {
            let mut maps = Vec::with_capacity(d.arrow_count());
            for (u, a) in d.arrows().iter().enumerate() {
                match free.iter().position(|&v| v == u) {
                    Some(p) => maps.push(options[p][idx[p]].clone()),
                    None => maps.push(PresheafMorphism::identity(&objs[a.src])?),
                }
            }
            // equal parallel arrows add nothing new
            let trivial = d.name() == Shape::parallel_pair().name() && idx.len() == 2 && idx[0] >= idx[1];
            if !trivial {
                if let Ok(pd) = PresheafDiagram::new(d.clone(), objs.clone(), maps) {
                    out.push(pd);
                }
            }
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] < options[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Closes the representables of a finite `c` under the class, in rounds,
/// stopping once `bound` iso-classes are present and another would be added.
pub fn phi_closure(c: &Category, class: LimitClass, mode: ClosureMode, bound: usize, bounds: &Bounds) -> Result<PhiClosure> {
    if !c.is_finite() {
        return Err(Error::Unsupported("closures are computed over finite categories".into()));
    }
    let base = c.base().clone();
    let mut members: Vec<SmallPresheaf> = Vec::new();
    let add = |members: &mut Vec<SmallPresheaf>, p: SmallPresheaf| -> Result<Option<bool>> {
        for q in members.iter() {
            if q.iso(&p, bounds.iso_budget)? {
                return Ok(Some(false));
            }
        }
        if members.len() >= bound {
            return Ok(None);
        }
        members.push(p);
        Ok(Some(true))
    };
    for a in c.enumerate(usize::MAX) {
        if add(&mut members, SmallPresheaf::representable(c, a)?)?.is_none() {
            return Ok(PhiClosure { members, stable: false });
        }
    }
    loop {
        let mut grew = false;
        for d in class.generators(mode) {
            let snapshot = members.clone();
            for pd in member_diagrams(&d, &snapshot, bounds.iso_budget)? {
                let p = match mode {
                    ClosureMode::Colimits => {
                        let w = Weight::constant(&base, d.clone(), Variance::Contravariant, &base.unit());
                        weighted_colimit(&base, c, &w, &pd)?
                    }
                    ClosureMode::Limits => {
                        let w = Weight::constant(&base, d.clone(), Variance::Covariant, &base.unit());
                        match pointwise_limit(c, &w, &pd, bounds)?.verdict {
                            Verdict::Small { certificate, .. } => certificate,
                            _ => return Err(Error::Unsupported("limit over a finite category was not certified".into())),
                        }
                    }
                };
                match add(&mut members, p.canonicalize()?)? {
                    None => return Ok(PhiClosure { members, stable: false }),
                    Some(true) => grew = true,
                    Some(false) => {}
                }
            }
        }
        if !grew {
            return Ok(PhiClosure { members, stable: true });
        }
    }
}
