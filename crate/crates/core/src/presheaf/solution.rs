//! Solution sets of cones and their saturation.

use std::collections::{BTreeSet, HashMap};

use crate::base::{Shape, SortedMap, BaseObject};
use crate::bounds::Bounds;
use crate::category::{Category, Obj};
use crate::error::{Error, Result};

use super::certify::{certify, kan_at, PointwiseSource, Verdict, Witness};

/// A diagram `S: D -> K` of objects of `K`.
#[derive(Clone, Debug)]
pub struct ConeDiagram {
    pub domain: Shape,
    pub objects: Vec<Obj>,
    /// An arrow of `K` for each arrow of the domain.
    pub arrows: Vec<usize>,
}

/// A cone with its vertex and one leg per domain object.
pub type Cone = (Obj, Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub objects: Vec<Obj>,
    pub added: Vec<Obj>,
}

#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub cones: Vec<Cone>,
    /// `B_0 ⊆ B_1 ⊆ ...`, ending at the last computed stage.
    pub stages: Vec<Stage>,
    /// Whether the last stage needed no further objects on the probes.
    pub stabilized: bool,
    pub probes: Vec<Obj>,
}

#[derive(Clone, Debug)]
pub enum SolutionOutcome {
    Found(SolutionSet),
    No(Witness),
    Unknown { bounds: Bounds, reason: String },
}

impl ConeDiagram {
    pub fn new(k: &Category, domain: Shape, objects: Vec<Obj>, arrows: Vec<usize>) -> Result<Self> {
        if objects.len() != domain.object_count() || arrows.len() != domain.arrow_count() {
            return Err(Error::InvalidDiagram("diagram data does not cover its domain".into()));
        }
        for (u, a) in domain.arrows().iter().enumerate() {
            k.check_object(objects[a.src])?;
            if arrows[u] >= k.hom_size(objects[a.src], objects[a.tgt]) {
                return Err(Error::InvalidDiagram(format!("no arrow {} in the ambient", a.name)));
            }
        }
        Ok(ConeDiagram { domain, objects, arrows })
    }

    pub fn empty() -> Self {
        ConeDiagram { domain: Shape::discrete(0), objects: vec![], arrows: vec![] }
    }

    /// All cones with vertex `a`, in lexicographic order of legs.
    pub fn cones_at(&self, k: &Category, a: Obj) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut out = Vec::new();
        let mut legs = vec![0; n];
        self.extend(k, a, 0, &mut legs, &mut out);
        out
    }

    fn extend(&self, k: &Category, a: Obj, d: usize, legs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if d == self.objects.len() {
            out.push(legs.clone());
            return;
        }
        for l in 0..k.hom_size(a, self.objects[d]) {
            legs[d] = l;
            let ok = self.domain.non_identity_arrows().all(|u| {
                let arrow = self.domain.arrow(u);
                if arrow.src.max(arrow.tgt) != d {
                    return true;
                }
                let (s, t) = (self.objects[arrow.src], self.objects[arrow.tgt]);
                k.compose(a, s, t, self.arrows[u], legs[arrow.src]) == legs[arrow.tgt]
            });
            if ok {
                self.extend(k, a, d + 1, legs, out);
            }
        }
    }

    /// Whether cone `c` at `a` factors as `beta ∘ f` for `f: a -> v`.
    fn factors(&self, k: &Category, a: Obj, c: &[usize], v: Obj, beta: &[usize]) -> Vec<usize> {
        (0..k.hom_size(a, v))
            .filter(|&f| (0..self.objects.len()).all(|d| k.compose(a, v, self.objects[d], beta[d], f) == c[d]))
            .collect()
    }
}

/// The presheaf of cones `a ↦ Cone(a, S)`.
pub struct ConeSource<'a> {
    k: &'a Category,
    diagram: &'a ConeDiagram,
    cones: std::cell::RefCell<HashMap<Obj, Vec<Vec<usize>>>>,
}

impl<'a> ConeSource<'a> {
    pub fn new(k: &'a Category, diagram: &'a ConeDiagram) -> Self {
        ConeSource { k, diagram, cones: Default::default() }
    }

    fn cones(&self, a: Obj) -> Vec<Vec<usize>> {
        self.cones.borrow_mut().entry(a).or_insert_with(|| self.diagram.cones_at(self.k, a)).clone()
    }
}

impl PointwiseSource for ConeSource<'_> {
    fn ambient(&self) -> &Category {
        self.k
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.diagram.objects.clone()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.k.base().constant(self.cones(a).len()))
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        let at_a = self.cones(a);
        let at_b = self.cones(b);
        let map: Vec<usize> = at_b
            .iter()
            .map(|c| {
                let moved: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .map(|(d, &l)| self.k.compose(a, b, self.diagram.objects[d], l, u))
                    .collect();
                at_a.iter().position(|x| *x == moved).expect("restricted cone")
            })
            .collect();
        let map = if self.k.base().tag() == crate::base::BackendTag::Bool2 { map.iter().map(|_| 0).take(1).collect() } else { map };
        Ok(vec![map; self.k.base().sorts()])
    }
}

fn push_unique(v: &mut Vec<Obj>, a: Obj) {
    if !v.contains(&a) {
        v.push(a);
    }
}

/// A finite set of cones through which every probed cone factors, followed
/// by the saturation `B_0 ⊆ B_1 ⊆ ...` that makes factorizations connected.
pub fn solution_set_search(k: &Category, diagram: &ConeDiagram, bounds: &Bounds) -> Result<SolutionOutcome> {
    let source = ConeSource::new(k, diagram);
    if !k.is_finite() && k.decision().is_some() {
        if let Verdict::NotSmall { witness } = certify(&source, bounds)? {
            return Ok(SolutionOutcome::No(witness));
        }
    }
    let mut probes = k.enumerate(bounds.probes);
    for &a in &diagram.objects {
        push_unique(&mut probes, a);
    }
    // condition (i): greedy cover of all probed cones
    let all: Vec<Cone> = probes
        .iter()
        .flat_map(|&a| diagram.cones_at(k, a).into_iter().map(move |c| (a, c)))
        .collect();
    let covers: Vec<Vec<usize>> = all
        .iter()
        .map(|(v, beta)| {
            (0..all.len())
                .filter(|&i| !diagram.factors(k, all[i].0, &all[i].1, *v, beta).is_empty())
                .collect()
        })
        .collect();
    let mut uncovered: BTreeSet<usize> = (0..all.len()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..all.len())
            .max_by_key(|&i| (covers[i].iter().filter(|x| uncovered.contains(x)).count(), std::cmp::Reverse(i)))
            .expect("cones remain");
        chosen.push(best);
        for x in &covers[best] {
            uncovered.remove(x);
        }
    }
    let cones: Vec<Cone> = chosen.iter().map(|&i| all[i].clone()).collect();
    if !k.is_finite() {
        for a in k.enumerate(2 * bounds.probes) {
            for c in diagram.cones_at(k, a) {
                if !cones.iter().any(|(v, beta)| !diagram.factors(k, a, &c, *v, beta).is_empty()) {
                    return Ok(SolutionOutcome::Unknown {
                        bounds: *bounds,
                        reason: format!("a cone at {} escapes the solution set found on the probes", k.object_name(a)),
                    });
                }
            }
        }
    }
    // condition (ii): saturate until factorizations are connected
    let mut current: Vec<Obj> = Vec::new();
    for (v, _) in &cones {
        push_unique(&mut current, *v);
    }
    let mut stages = vec![Stage { objects: current.clone(), added: current.clone() }];
    let mut memo: HashMap<(Obj, Obj), Option<Obj>> = HashMap::new();
    let mut stabilized = false;
    for _ in 0..=bounds.depth {
        let mut added = Vec::new();
        for &a in &probes {
            if kan_at(&source, &current, a)? {
                continue;
            }
            // adjoin a vertex through which the disconnected factorizations
            // of cones at `a` are joined
            let pick = *memo.entry((a, current.len() as Obj)).or_insert_with(|| {
                probes.iter().copied().find(|&x| {
                    !current.contains(&x) && {
                        let mut trial = current.clone();
                        trial.push(x);
                        kan_at(&source, &trial, a).unwrap_or(false)
                    }
                })
            });
            if let Some(x) = pick {
                if !added.contains(&x) {
                    added.push(x);
                }
            }
        }
        if added.is_empty() {
            stabilized = probes.iter().all(|&a| kan_at(&source, &current, a).unwrap_or(false));
            break;
        }
        if stages.len() > bounds.depth {
            break;
        }
        for &x in &added {
            push_unique(&mut current, x);
        }
        stages.push(Stage { objects: current.clone(), added });
    }
    Ok(SolutionOutcome::Found(SolutionSet { cones, stages, stabilized, probes }))
}
