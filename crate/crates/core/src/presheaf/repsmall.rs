//! Representable smallness of functors into presheaf categories.

use crate::base::{family_hom, BaseObject, SortedEdge, SortedMap};
use crate::bounds::Bounds;
use crate::category::{Category, Obj};
use crate::error::{Error, Result};

use super::certify::{certify, PointwiseSource, Verdict};
use super::weight::{Variance, Weight};
use super::SmallPresheaf;

/// The codomain `M` of `S: K^op -> M`.
#[derive(Clone, Debug)]
pub enum FunctorCategoryTarget {
    /// `M = V`; `s` is a small presheaf on `K`.
    Base,
    /// `M = [C, V]` for finite `C`; `s` is a small presheaf on `K ⊗ C^op`.
    Functors(Category),
}

/// A probe object of the target.
#[derive(Clone, Debug)]
pub enum Probe {
    Base(BaseObject),
    /// A covariant weight on the shape of `C`.
    Functor(Weight),
}

#[derive(Clone, Debug)]
pub struct RepSmallReport {
    /// One verdict per probe, for `M(probe, S-)`.
    pub verdicts: Vec<Verdict>,
}

impl RepSmallReport {
    pub fn all_small(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_small)
    }
}

/// `a ↦ M(probe, S(a))`.
struct HomSource<'a> {
    k: &'a Category,
    s: &'a SmallPresheaf,
    /// `C^op`, or `None` when the target is the base itself.
    cop: Option<Category>,
    probe: Vec<BaseObject>,
    /// For each non-identity arrow `u: c -> c'` of `C`, with `M(u)`.
    arrows: Vec<(Obj, Obj, usize, SortedMap)>,
    budget: u64,
}

impl HomSource<'_> {
    fn nodes(&self) -> usize {
        self.probe.len()
    }

    fn at(&self, a: Obj, c: Obj) -> Result<Obj> {
        match &self.cop {
            None => Ok(a),
            Some(_) => self.s.ambient().pair(a, c),
        }
    }

    fn hom(&self, a: Obj) -> Result<crate::base::FamilyHom> {
        let amb = self.s.ambient();
        let evs: Vec<_> = (0..self.nodes()).map(|c| self.s.evaluate(self.at(a, c as Obj)?)).collect::<Result<_>>()?;
        let ys: Vec<BaseObject> = evs.iter().map(|e| e.value.clone()).collect();
        let mut edges = Vec::new();
        if let Some(cop) = &self.cop {
            for (c, c2, u, mu) in &self.arrows {
                // S(a, u): S(a, c) -> S(a, c') along the arrow (a, c') -> (a, c)
                let arrow = self.k.identity(a) * cop.hom_size(*c2, *c) + *u;
                let su = self.s.pull(&evs[*c2 as usize], &evs[*c as usize], arrow);
                for g in 0..amb.base().sorts() {
                    edges.push(SortedEdge {
                        from: *c as usize,
                        to: *c2 as usize,
                        sort: g,
                        x_map: mu[g].clone(),
                        y_map: su[g].clone(),
                    });
                }
            }
        }
        family_hom(amb.base().site(), amb.base().tag(), &self.probe, &ys, &edges, self.budget)
    }
}

impl PointwiseSource for HomSource<'_> {
    fn ambient(&self) -> &Category {
        self.k
    }

    fn mentioned(&self) -> Vec<Obj> {
        let mut out = Vec::new();
        for &b in self.s.support() {
            let a = match &self.cop {
                None => b,
                Some(_) => self.s.ambient().unpair_object(b).expect("tensor object").0,
            };
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        Ok(self.hom(a)?.object)
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        let (ha, hb) = (self.hom(a)?, self.hom(b)?);
        let site = self.k.base().site().clone();
        let mut out = Vec::with_capacity(site.object_count());
        for g in 0..site.object_count() {
            let slots = hb.into_arrows(g).to_vec();
            let mut pulls = Vec::with_capacity(self.nodes());
            for c in 0..self.nodes() {
                let (pa, pb) = (self.at(a, c as Obj)?, self.at(b, c as Obj)?);
                let arrow = match &self.cop {
                    None => u,
                    Some(cop) => u * cop.hom_size(c as Obj, c as Obj) + cop.identity(c as Obj),
                };
                pulls.push(self.s.pull(&self.s.evaluate(pa)?, &self.s.evaluate(pb)?, arrow));
            }
            let map = hb.elements[g]
                .iter()
                .map(|phi| {
                    let moved = phi
                        .iter()
                        .enumerate()
                        .map(|(slot, comp)| {
                            let (c, p) = (slot / slots.len(), slot % slots.len());
                            let s = site.arrow(slots[p]).src;
                            comp.iter().map(|&y| pulls[c][s][y]).collect()
                        })
                        .collect();
                    ha.lookup(g, &moved).expect("composite of a natural family is natural")
                })
                .collect();
            out.push(map);
        }
        Ok(out)
    }
}

/// Decides, per probe `M`, whether `M(M, S-)` is a small presheaf on `K`.
pub fn representably_small_check(
    k: &Category,
    s: &SmallPresheaf,
    target: &FunctorCategoryTarget,
    probes: &[Probe],
    bounds: &Bounds,
) -> Result<RepSmallReport> {
    let cop = match target {
        FunctorCategoryTarget::Base => {
            if s.ambient() != k {
                return Err(Error::AmbientMismatch("presheaf is not on the source category".into()));
            }
            None
        }
        FunctorCategoryTarget::Functors(c) => {
            if !c.is_finite() {
                return Err(Error::InvalidTarget("functor categories need a finite domain".into()));
            }
            let expected = k.tensor(&c.opposite())?;
            if *s.ambient() != expected {
                return Err(Error::AmbientMismatch("presheaf is not on the source tensored with the target domain".into()));
            }
            Some(c.opposite())
        }
    };
    let mut verdicts = Vec::with_capacity(probes.len());
    for probe in probes {
        let (values, arrows) = match (probe, target) {
            (Probe::Base(x), FunctorCategoryTarget::Base) => {
                k.base().check(x)?;
                (vec![x.clone()], Vec::new())
            }
            (Probe::Functor(w), FunctorCategoryTarget::Functors(c)) => {
                let shape = c.to_shape().expect("finite");
                if w.variance != Variance::Covariant || w.domain.object_count() != shape.object_count() {
                    return Err(Error::InvalidTarget(format!("probe {} is not a functor on {}", w.name, c.name())));
                }
                let arrows = shape
                    .non_identity_arrows()
                    .map(|u| {
                        let a = shape.arrow(u);
                        let idx = shape.hom(a.src, a.tgt).position(|v| v == u).expect("arrow in its hom");
                        (a.src as Obj, a.tgt as Obj, idx, w.maps[u].clone())
                    })
                    .collect();
                (w.values.clone(), arrows)
            }
            _ => return Err(Error::InvalidTarget("probe does not match the target".into())),
        };
        let source = HomSource { k, s, cop: cop.clone(), probe: values, arrows, budget: bounds.iso_budget };
        verdicts.push(certify(&source, bounds)?);
    }
    Ok(RepSmallReport { verdicts })
}
