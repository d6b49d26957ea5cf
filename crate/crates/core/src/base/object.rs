use serde::Serialize;

use crate::base::shape::Shape;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BackendTag {
    FinSet,
    Bool2,
    FinPresheaf,
}

/// An object of the enrichment base.
///
/// Every backend is stored as a finite presheaf on a site: `FinSet` and
/// `Bool2` use the terminal site, and `Bool2` objects have at most one
/// element. Elements are indices `0..size(sort)`; only isomorphism classes
/// carry meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BaseObject {
    tag: BackendTag,
    sizes: Vec<usize>,
    /// For each site arrow `f: g' -> g`, the action `X(g) -> X(g')`.
    restrict: Vec<Vec<usize>>,
}

impl BaseObject {
    pub(crate) fn from_parts(tag: BackendTag, sizes: Vec<usize>, restrict: Vec<Vec<usize>>) -> Self {
        BaseObject { tag, sizes, restrict }
    }

    pub fn finset(n: usize) -> Self {
        BaseObject { tag: BackendTag::FinSet, sizes: vec![n], restrict: vec![(0..n).collect()] }
    }

    pub fn bool2(value: bool) -> Self {
        let n = usize::from(value);
        BaseObject { tag: BackendTag::Bool2, sizes: vec![n], restrict: vec![(0..n).collect()] }
    }

    /// A finite presheaf on `site`; `restrict[f]` maps the carrier at the
    /// target of `f` to the carrier at its source.
    pub fn presheaf(site: &Shape, sizes: Vec<usize>, restrict: Vec<Vec<usize>>) -> Result<Self> {
        let obj = BaseObject { tag: BackendTag::FinPresheaf, sizes, restrict };
        obj.check_functorial(site)?;
        Ok(obj)
    }

    pub fn tag(&self) -> BackendTag {
        self.tag
    }

    pub fn sorts(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, sort: usize) -> usize {
        self.sizes[sort]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Cardinality of a single-sorted object.
    pub fn card(&self) -> usize {
        debug_assert_eq!(self.sizes.len(), 1);
        self.sizes[0]
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.iter().all(|&n| n == 0)
    }

    pub fn restrict_map(&self, f: usize) -> &[usize] {
        &self.restrict[f]
    }

    pub fn restrict(&self, f: usize, x: usize) -> usize {
        self.restrict[f][x]
    }

    pub(crate) fn check_functorial(&self, site: &Shape) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDiagram(msg));
        if self.sizes.len() != site.object_count() || self.restrict.len() != site.arrow_count() {
            return bad("presheaf arity does not match site".into());
        }
        for (f, arrow) in site.arrows().iter().enumerate() {
            let map = &self.restrict[f];
            if map.len() != self.sizes[arrow.tgt] || map.iter().any(|&y| y >= self.sizes[arrow.src]) {
                return bad(format!("action of {} is not a total map", arrow.name));
            }
            if site.is_identity(f) && map.iter().enumerate().any(|(x, &y)| x != y) {
                return bad(format!("identity {} acts non-trivially", arrow.name));
            }
        }
        for f in 0..site.arrow_count() {
            for g in 0..site.arrow_count() {
                if site.arrow(f).tgt != site.arrow(g).src {
                    continue;
                }
                let gf = site.compose(g, f);
                // X(g∘f) = X(f) ∘ X(g)
                for x in 0..self.sizes[site.arrow(g).tgt] {
                    if self.restrict[gf][x] != self.restrict[f][self.restrict[g][x]] {
                        return bad(format!(
                            "action not functorial at {} ∘ {}",
                            site.arrow(g).name,
                            site.arrow(f).name
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A morphism of the base: a family of maps, one per sort, natural with
/// respect to the site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BaseMorphism {
    pub source: BaseObject,
    pub target: BaseObject,
    pub components: Vec<Vec<usize>>,
}

impl BaseMorphism {
    pub fn new(source: BaseObject, target: BaseObject, components: Vec<Vec<usize>>) -> Result<Self> {
        let m = BaseMorphism { source, target, components };
        m.check_total()?;
        Ok(m)
    }

    /// A single-sorted morphism.
    pub fn function(source: BaseObject, target: BaseObject, map: Vec<usize>) -> Result<Self> {
        BaseMorphism::new(source, target, vec![map])
    }

    pub fn identity(x: &BaseObject) -> Self {
        BaseMorphism {
            source: x.clone(),
            target: x.clone(),
            components: x.sizes.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn apply(&self, sort: usize, x: usize) -> usize {
        self.components[sort][x]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &BaseMorphism) -> BaseMorphism {
        BaseMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            components: other
                .components
                .iter()
                .zip(&self.components)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.components.iter().enumerate().all(|(g, comp)| {
            let mut seen = vec![false; self.target.size(g)];
            comp.len() == seen.len()
                && comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    fn check_total(&self) -> Result<()> {
        if self.components.len() != self.source.sorts() || self.target.sorts() != self.source.sorts() {
            return Err(Error::BackendMismatch("morphism arity".into()));
        }
        for (g, comp) in self.components.iter().enumerate() {
            if comp.len() != self.source.size(g) || comp.iter().any(|&y| y >= self.target.size(g)) {
                return Err(Error::InvalidDiagram(format!("component at sort {g} is not total")));
            }
        }
        Ok(())
    }

    /// Naturality with respect to the site arrows.
    pub fn is_natural(&self, site: &Shape) -> bool {
        site.arrows().iter().enumerate().all(|(f, arrow)| {
            (0..self.source.size(arrow.tgt)).all(|x| {
                self.components[arrow.src][self.source.restrict(f, x)]
                    == self.target.restrict(f, self.components[arrow.tgt][x])
            })
        })
    }
}
