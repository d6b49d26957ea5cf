//! Smallness certification for presheaves known only pointwise.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::base::{BackendTag, BaseObject, SortedMap, UnionFind};
use crate::bounds::Bounds;
use crate::category::{Category, FamilyDecision, Obj};
use crate::error::Result;

use super::SmallPresheaf;

/// A presheaf `K^op -> V` that can be evaluated at any object.
pub trait PointwiseSource {
    fn ambient(&self) -> &Category;
    /// Every object of the ambient category the construction refers to.
    fn mentioned(&self) -> Vec<Obj>;
    /// Whether the construction is invariant under permutations of the
    /// objects outside [`PointwiseSource::mentioned`] that preserve the
    /// family structure. Registered decisions rely on this.
    fn uniform(&self) -> bool {
        true
    }
    fn value(&self, a: Obj) -> Result<BaseObject>;
    /// `P(u): P(b) -> P(a)` for `u: a -> b`.
    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap>;
}

/// A [`PointwiseSource`] built from closures.
pub struct FnSource<V, A> {
    pub ambient: Category,
    pub mentioned: Vec<Obj>,
    pub uniform: bool,
    pub value: V,
    pub act: A,
}

impl<V, A> PointwiseSource for FnSource<V, A>
where
    V: Fn(Obj) -> Result<BaseObject>,
    A: Fn(Obj, Obj, usize) -> Result<SortedMap>,
{
    fn ambient(&self) -> &Category {
        &self.ambient
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.mentioned.clone()
    }

    fn uniform(&self) -> bool {
        self.uniform
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        (self.value)(a)
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        (self.act)(a, b, u)
    }
}

impl PointwiseSource for SmallPresheaf {
    fn ambient(&self) -> &Category {
        SmallPresheaf::ambient(self)
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.support().to_vec()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        self.evaluate_value(a)
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        Ok(self.pull(&self.evaluate(a)?, &self.evaluate(b)?, u))
    }
}

/// Memoizes values and actions of another source.
pub struct Cached<'a> {
    inner: &'a dyn PointwiseSource,
    values: RefCell<HashMap<Obj, BaseObject>>,
    acts: RefCell<HashMap<(Obj, Obj, usize), SortedMap>>,
}

impl<'a> Cached<'a> {
    pub fn new(inner: &'a dyn PointwiseSource) -> Self {
        Cached { inner, values: RefCell::default(), acts: RefCell::default() }
    }
}

impl PointwiseSource for Cached<'_> {
    fn ambient(&self) -> &Category {
        self.inner.ambient()
    }

    fn mentioned(&self) -> Vec<Obj> {
        self.inner.mentioned()
    }

    fn uniform(&self) -> bool {
        self.inner.uniform()
    }

    fn value(&self, a: Obj) -> Result<BaseObject> {
        if let Some(v) = self.values.borrow().get(&a) {
            return Ok(v.clone());
        }
        let v = self.inner.value(a)?;
        self.values.borrow_mut().insert(a, v.clone());
        Ok(v)
    }

    fn act(&self, a: Obj, b: Obj, u: usize) -> Result<SortedMap> {
        if let Some(m) = self.acts.borrow().get(&(a, b, u)) {
            return Ok(m.clone());
        }
        let m = self.inner.act(a, b, u)?;
        self.acts.borrow_mut().insert((a, b, u), m.clone());
        Ok(m)
    }
}

/// The data a registered decision used to rule out smallness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub family: String,
    pub decision: FamilyDecision,
    /// An object outside every finite support the construction refers to
    /// at which the value is inhabited.
    pub object: Obj,
    pub value: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The presheaf agrees with the extension of its restriction to the
    /// certificate support on every listed probe.
    Small { certificate: SmallPresheaf, probes: Vec<Obj> },
    NotSmall { witness: Witness },
    Unknown { bounds: Bounds, reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Small { .. } => "Small",
            Verdict::NotSmall { .. } => "NotSmall",
            Verdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_small(&self) -> bool {
        matches!(self, Verdict::Small { .. })
    }

    pub fn is_not_small(&self) -> bool {
        matches!(self, Verdict::NotSmall { .. })
    }

    pub fn certificate(&self) -> Option<&SmallPresheaf> {
        match self {
            Verdict::Small { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// Re-checks a `Small` certificate against the source on its probes.
    pub fn reverify(&self, p: &dyn PointwiseSource) -> Result<bool> {
        match self {
            Verdict::Small { certificate, probes } => {
                let support = certificate.support().to_vec();
                for &a in probes {
                    if !kan_at(p, &support, a)? {
                        return Ok(false);
                    }
                    let ev = certificate.evaluate_value(a)?;
                    if ev.sizes() != p.value(a)?.sizes() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(true),
        }
    }
}

fn push_unique(v: &mut Vec<Obj>, a: Obj) {
    if !v.contains(&a) {
        v.push(a);
    }
}

/// Whether the comparison `Lan_B(P|B)(a) -> P(a)` is invertible.
pub(crate) fn kan_at(p: &dyn PointwiseSource, support: &[Obj], a: Obj) -> Result<bool> {
    let k = p.ambient();
    let target = p.value(a)?;
    let values: Vec<BaseObject> = support.iter().map(|&b| p.value(b)).collect::<Result<_>>()?;
    let m = support.len();
    let homs: Vec<usize> = support.iter().map(|&b| k.hom_size(a, b)).collect();
    let legs: Vec<Vec<SortedMap>> = (0..m)
        .map(|i| (0..homs[i]).map(|u| p.act(a, support[i], u)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let inner: Vec<Vec<Vec<SortedMap>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..k.hom_size(support[i], support[j])).map(|w| p.act(support[i], support[j], w)).collect())
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    for g in 0..target.sorts() {
        let width: Vec<usize> = values.iter().map(|v| v.size(g)).collect();
        let mut off = vec![0; m + 1];
        for i in 0..m {
            off[i + 1] = off[i] + homs[i] * width[i];
        }
        let mut uf = UnionFind::new(off[m]);
        for i in 0..m {
            for j in 0..m {
                for (w, fw) in inner[i][j].iter().enumerate() {
                    for u in 0..homs[i] {
                        let wu = k.compose(a, support[i], support[j], w, u);
                        for y in 0..width[j] {
                            uf.union(off[j] + wu * width[j] + y, off[i] + u * width[i] + fw[g][y]);
                        }
                    }
                }
            }
        }
        let (of, count) = uf.classes();
        let n = target.size(g);
        if target.tag() == BackendTag::Bool2 {
            if (count > 0) != (n > 0) {
                return Ok(false);
            }
            continue;
        }
        if count != n {
            return Ok(false);
        }
        let mut hit = vec![usize::MAX; count];
        for i in 0..m {
            for u in 0..homs[i] {
                for y in 0..width[i] {
                    let c = of[off[i] + u * width[i] + y];
                    let image = legs[i][u][g][y];
                    if hit[c] == usize::MAX {
                        hit[c] = image;
                    } else if hit[c] != image {
                        return Ok(false);
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        for &h in &hit {
            if std::mem::replace(&mut seen[h], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn kan_on(p: &dyn PointwiseSource, support: &[Obj], probes: &[Obj]) -> Result<Option<Obj>> {
    for &a in probes {
        if !kan_at(p, support, a)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Drops support objects one at a time while the Kan property survives on
/// the probes.
fn minimize(p: &dyn PointwiseSource, mut support: Vec<Obj>, probes: &[Obj]) -> Result<Vec<Obj>> {
    let mut i = 0;
    while i < support.len() {
        let mut smaller = support.clone();
        smaller.remove(i);
        if kan_on(p, &smaller, probes)?.is_none() {
            support = smaller;
        } else {
            i += 1;
        }
    }
    Ok(support)
}

/// The certificate `P|B` for a support `B`.
pub fn restriction(p: &dyn PointwiseSource, support: &[Obj]) -> Result<SmallPresheaf> {
    let k = p.ambient();
    let m = support.len();
    let values: Vec<BaseObject> = support.iter().map(|&b| p.value(b)).collect::<Result<_>>()?;
    let mut actions = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            actions.push(
                (0..k.hom_size(support[i], support[j]))
                    .map(|u| p.act(support[i], support[j], u))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    SmallPresheaf::new(k, support.to_vec(), values, actions)
}

fn small(p: &dyn PointwiseSource, support: Vec<Obj>, probes: Vec<Obj>) -> Result<Verdict> {
    let support = minimize(p, support, &probes)?;
    Ok(Verdict::Small { certificate: restriction(p, &support)?, probes })
}

/// Decides or bounds the smallness of a pointwise presheaf.
///
/// `NotSmall` only comes from a registered family decision; exhausting the
/// bounds gives `Unknown`.
pub fn certify(p: &dyn PointwiseSource, bounds: &Bounds) -> Result<Verdict> {
    let cached = Cached::new(p);
    let p: &dyn PointwiseSource = &cached;
    let k = p.ambient().clone();
    let mut mentioned = p.mentioned();
    mentioned.sort_unstable();
    mentioned.dedup();
    let mut probes = k.enumerate(bounds.probes);
    for &a in &mentioned {
        push_unique(&mut probes, a);
    }
    if k.is_finite() {
        return small(p, probes.clone(), probes);
    }
    if let (Some(decision), true) = (k.decision(), p.uniform()) {
        let fresh = mentioned.last().map_or(0, |&r| r + 1);
        let top = mentioned.last().copied();
        let candidate: Vec<Obj> = match decision {
            FamilyDecision::Discrete | FamilyDecision::Chain => {
                let v = p.value(fresh)?;
                if !v.is_empty() {
                    let reason = match decision {
                        FamilyDecision::Discrete => {
                            "inhabited at every object outside a finite set of a discrete family; the support is infinite"
                        }
                        _ => "inhabited at every object above a finite set of a chain; small presheaves vanish eventually",
                    };
                    return Ok(Verdict::NotSmall {
                        witness: Witness {
                            family: k.family_tag().unwrap_or_default(),
                            decision,
                            object: fresh,
                            value: v.sizes().to_vec(),
                            reason: reason.into(),
                        },
                    });
                }
                match decision {
                    FamilyDecision::Discrete => {
                        let mut c = Vec::new();
                        for &a in &mentioned {
                            if !p.value(a)?.is_empty() {
                                c.push(a);
                            }
                        }
                        c
                    }
                    _ => top.map_or_else(Vec::new, |t| (0..=t).collect()),
                }
            }
            FamilyDecision::ChainOp => (0..=top.unwrap_or(0)).collect(),
        };
        push_unique(&mut probes, fresh);
        if kan_on(p, &candidate, &probes)?.is_none() {
            return small(p, candidate, probes);
        }
    }
    // bounded growth from the mentioned objects
    let mut support = mentioned.clone();
    for _ in 0..=probes.len() {
        match kan_on(p, &support, &probes)? {
            Some(a) => push_unique(&mut support, a),
            None => {
                let mut wide = k.enumerate(2 * bounds.probes);
                for &a in &probes {
                    push_unique(&mut wide, a);
                }
                if let Some(a) = kan_on(p, &support, &wide)? {
                    return Ok(Verdict::Unknown {
                        bounds: *bounds,
                        reason: format!(
                            "a support covering the first {} probes fails at {}",
                            bounds.probes,
                            k.object_name(a)
                        ),
                    });
                }
                return small(p, support, wide);
            }
        }
    }
    Ok(Verdict::Unknown { bounds: *bounds, reason: "no finite support found among the probes".into() })
}
