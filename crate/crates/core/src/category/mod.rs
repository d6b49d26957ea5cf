//! Categories enriched in the base, finite or procedurally presented.
//!
//! Hom objects are constant: `hom(a, b)` is the base object on the finite
//! set of arrows `0..hom_size(a, b)`, so over `FinPresheaf(G)` every
//! category is the change of base of an ordinary category.

mod family;
mod functor;
mod validate;

use std::sync::Arc;

use crate::base::{Base, BaseObject, Shape};
use crate::error::{Error, Result};

pub use family::{registered, registered_tags, FamilyDecision, ProceduralFamily, ThinFamily, DISCRETE_NAT, OMEGA_CHAIN};
pub use functor::{Functor, FunctorKind, NatTrans};
pub use validate::ValidationReport;

/// Objects are indices; for procedural families, enumerator positions.
pub type Obj = u64;

#[derive(Clone, Debug)]
pub struct Category(Arc<CatNode>);

#[derive(Debug)]
struct CatNode {
    name: String,
    base: Base,
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Finite(FiniteCat),
    Family(Arc<dyn ProceduralFamily>),
    Opposite(Category),
    Tensor(Category, Category),
    Full { parent: Category, objects: Vec<Obj> },
}

#[derive(Debug)]
struct FiniteCat {
    shape: Shape,
    /// Arrow ids of `hom(a, b)` at `a * n + b`.
    homs: Vec<Vec<usize>>,
    /// Position of each arrow inside its hom.
    local: Vec<usize>,
}

impl FiniteCat {
    fn new(shape: Shape) -> FiniteCat {
        let n = shape.object_count();
        let mut homs = vec![Vec::new(); n * n];
        let mut local = vec![0; shape.arrow_count()];
        for (f, a) in shape.arrows().iter().enumerate() {
            let h = &mut homs[a.src * n + a.tgt];
            local[f] = h.len();
            h.push(f);
        }
        FiniteCat { shape, homs, local }
    }

    fn arrow(&self, a: Obj, b: Obj, f: usize) -> usize {
        self.homs[a as usize * self.shape.object_count() + b as usize][f]
    }
}

fn cantor_pair(a: u64, b: u64) -> u64 {
    (a + b) * (a + b + 1) / 2 + b
}

fn cantor_unpair(z: u64) -> (u64, u64) {
    let mut w = (((8 * z + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

impl PartialEq for Category {
    /// Structural equality; names are ignored.
    fn eq(&self, other: &Category) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.base != other.0.base {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Finite(a), Kind::Finite(b)) => {
                a.shape.object_count() == b.shape.object_count()
                    && a.shape.arrows().iter().zip(b.shape.arrows()).all(|(x, y)| x.src == y.src && x.tgt == y.tgt)
                    && a.shape.arrow_count() == b.shape.arrow_count()
                    && (0..a.shape.arrow_count()).all(|g| {
                        (0..a.shape.arrow_count()).all(|f| {
                            a.shape.arrow(f).tgt != a.shape.arrow(g).src
                                || a.shape.compose(g, f) == b.shape.compose(g, f)
                        })
                    })
            }
            (Kind::Family(a), Kind::Family(b)) => a.tag() == b.tag(),
            (Kind::Opposite(a), Kind::Opposite(b)) => a == b,
            (Kind::Tensor(a, b), Kind::Tensor(c, d)) => a == c && b == d,
            (Kind::Full { parent: p, objects: o }, Kind::Full { parent: q, objects: r }) => p == q && o == r,
            _ => false,
        }
    }
}

impl Category {
    fn make(name: impl Into<String>, base: Base, kind: Kind) -> Category {
        Category(Arc::new(CatNode { name: name.into(), base, kind }))
    }

    /// A finite category. Over `Bool2` every hom must have at most one arrow.
    pub fn finite(name: impl Into<String>, base: Base, shape: Shape) -> Result<Category> {
        let failures = shape.law_failures();
        if let Some(f) = failures.first() {
            return Err(Error::InvalidDiagram(f.clone()));
        }
        if base.tag() == crate::base::BackendTag::Bool2 && !shape.is_thin() {
            return Err(Error::InvalidDiagram("a category over Bool2 must be a preorder".into()));
        }
        Ok(Category::make(name, base, Kind::Finite(FiniteCat::new(shape))))
    }

    pub fn procedural(name: impl Into<String>, base: Base, family: Arc<dyn ProceduralFamily>) -> Category {
        Category::make(name, base, Kind::Family(family))
    }

    /// One of the registered families `DiscreteNat`, `OmegaChain`.
    pub fn builtin(tag: &str, base: Base) -> Result<Category> {
        let family = registered(tag).ok_or_else(|| Error::UnknownFamily(tag.into()))?;
        Ok(Category::procedural(tag, base, Arc::new(family)))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Category {
        let kind = match &self.0.kind {
            Kind::Finite(f) => Kind::Finite(FiniteCat::new(f.shape.clone())),
            Kind::Family(f) => Kind::Family(f.clone()),
            Kind::Opposite(k) => Kind::Opposite(k.clone()),
            Kind::Tensor(a, b) => Kind::Tensor(a.clone(), b.clone()),
            Kind::Full { parent, objects } => Kind::Full { parent: parent.clone(), objects: objects.clone() },
        };
        Category::make(name, self.0.base.clone(), kind)
    }

    pub fn base(&self) -> &Base {
        &self.0.base
    }

    pub fn same(&self, other: &Category) -> bool {
        self == other
    }

    pub fn opposite(&self) -> Category {
        if let Kind::Opposite(k) = &self.0.kind {
            return k.clone();
        }
        Category::make(format!("{}^op", self.name()), self.base().clone(), Kind::Opposite(self.clone()))
    }

    pub fn tensor(&self, other: &Category) -> Result<Category> {
        if self.base() != other.base() {
            return Err(Error::BackendMismatch(format!(
                "tensor of categories over {} and {}",
                self.base().name(),
                other.base().name()
            )));
        }
        Ok(Category::make(
            format!("{}⊗{}", self.name(), other.name()),
            self.base().clone(),
            Kind::Tensor(self.clone(), other.clone()),
        ))
    }

    /// The full subcategory on `objects`, with its inclusion functor.
    pub fn full_subcategory(&self, name: impl Into<String>, objects: &[Obj]) -> Result<(Category, Functor)> {
        for &a in objects {
            self.check_object(a)?;
        }
        let sub = Category::make(
            name,
            self.base().clone(),
            Kind::Full { parent: self.clone(), objects: objects.to_vec() },
        );
        let inc = Functor::inclusion(&sub)?;
        Ok((sub, inc))
    }

    /// Number of objects, `None` for infinite categories.
    pub fn object_count(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Finite(f) => Some(f.shape.object_count() as u64),
            Kind::Family(_) => None,
            Kind::Opposite(k) => k.object_count(),
            Kind::Tensor(a, b) => Some(a.object_count()? * b.object_count()?),
            Kind::Full { objects, .. } => Some(objects.len() as u64),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.object_count().is_some()
    }

    pub fn contains(&self, a: Obj) -> bool {
        match &self.0.kind {
            Kind::Finite(f) => (a as usize) < f.shape.object_count(),
            Kind::Family(_) => true,
            Kind::Opposite(k) => k.contains(a),
            Kind::Tensor(x, y) => {
                let (p, q) = self.unpair(x, y, a);
                x.contains(p) && y.contains(q)
            }
            Kind::Full { objects, .. } => (a as usize) < objects.len(),
        }
    }

    pub fn check_object(&self, a: Obj) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::UnknownObject(format!("{a} in {}", self.name())))
        }
    }

    fn unpair(&self, x: &Category, y: &Category, a: Obj) -> (Obj, Obj) {
        match (x.object_count(), y.object_count()) {
            (Some(_), Some(m)) => (a / m, a % m),
            _ => cantor_unpair(a),
        }
    }

    /// Encodes a pair of objects of a tensor category.
    pub fn pair(&self, p: Obj, q: Obj) -> Result<Obj> {
        match &self.0.kind {
            Kind::Tensor(x, y) => {
                x.check_object(p)?;
                y.check_object(q)?;
                Ok(match (x.object_count(), y.object_count()) {
                    (Some(_), Some(m)) => p * m + q,
                    _ => cantor_pair(p, q),
                })
            }
            _ => Err(Error::InvalidTarget(format!("{} is not a tensor product", self.name()))),
        }
    }

    /// Components of an object of a tensor category.
    pub fn unpair_object(&self, a: Obj) -> Option<(Obj, Obj)> {
        match &self.0.kind {
            Kind::Tensor(x, y) => Some(self.unpair(x, y, a)),
            _ => None,
        }
    }

    /// The first `n` objects in enumerator order (all objects when finite).
    pub fn enumerate(&self, n: usize) -> Vec<Obj> {
        match self.object_count() {
            Some(count) => (0..count).collect(),
            None => {
                let mut out = Vec::with_capacity(n);
                let mut z = 0;
                while out.len() < n {
                    if self.contains(z) {
                        out.push(z);
                    }
                    z += 1;
                }
                out
            }
        }
    }

    pub fn object_name(&self, a: Obj) -> String {
        match &self.0.kind {
            Kind::Finite(f) => f.shape.object_names()[a as usize].clone(),
            Kind::Family(_) => a.to_string(),
            Kind::Opposite(k) => k.object_name(a),
            Kind::Tensor(x, y) => {
                let (p, q) = self.unpair(x, y, a);
                format!("({},{})", x.object_name(p), y.object_name(q))
            }
            Kind::Full { parent, objects } => parent.object_name(objects[a as usize]),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Obj> {
        let name = name.trim();
        match &self.0.kind {
            Kind::Finite(f) => f.shape.object_names().iter().position(|n| n == name).map(|i| i as u64),
            Kind::Family(_) => name.parse().ok(),
            Kind::Opposite(k) => k.lookup(name),
            Kind::Tensor(x, y) => {
                let inner = name.strip_prefix('(')?.strip_suffix(')')?;
                let mut depth = 0;
                let split = inner.char_indices().find(|&(_, ch)| {
                    match ch {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        ',' if depth == 0 => return true,
                        _ => {}
                    }
                    false
                })?;
                let p = x.lookup(&inner[..split.0])?;
                let q = y.lookup(&inner[split.0 + 1..])?;
                self.pair(p, q).ok()
            }
            Kind::Full { parent, objects } => {
                let p = parent.lookup(name)?;
                objects.iter().position(|&o| o == p).map(|i| i as u64)
            }
        }
    }

    pub fn hom_size(&self, a: Obj, b: Obj) -> usize {
        match &self.0.kind {
            Kind::Finite(f) => f.homs[a as usize * f.shape.object_count() + b as usize].len(),
            Kind::Family(fam) => fam.hom_size(a, b),
            Kind::Opposite(k) => k.hom_size(b, a),
            Kind::Tensor(x, y) => {
                let ((p, q), (p2, q2)) = (self.unpair(x, y, a), self.unpair(x, y, b));
                x.hom_size(p, p2) * y.hom_size(q, q2)
            }
            Kind::Full { parent, objects } => parent.hom_size(objects[a as usize], objects[b as usize]),
        }
    }

    pub fn hom_object(&self, a: Obj, b: Obj) -> BaseObject {
        self.base().constant(self.hom_size(a, b))
    }

    pub fn identity(&self, a: Obj) -> usize {
        match &self.0.kind {
            Kind::Finite(f) => f.local[f.shape.identity(a as usize)],
            Kind::Family(fam) => fam.identity(a),
            Kind::Opposite(k) => k.identity(a),
            Kind::Tensor(x, y) => {
                let (p, q) = self.unpair(x, y, a);
                x.identity(p) * y.hom_size(q, q) + y.identity(q)
            }
            Kind::Full { parent, objects } => parent.identity(objects[a as usize]),
        }
    }

    /// `g ∘ f` for `f ∈ hom(a, b)`, `g ∈ hom(b, c)`.
    pub fn compose(&self, a: Obj, b: Obj, c: Obj, g: usize, f: usize) -> usize {
        match &self.0.kind {
            Kind::Finite(fc) => {
                let h = fc.shape.compose(fc.arrow(b, c, g), fc.arrow(a, b, f));
                fc.local[h]
            }
            Kind::Family(fam) => fam.compose(a, b, c, g, f),
            Kind::Opposite(k) => k.compose(c, b, a, f, g),
            Kind::Tensor(x, y) => {
                let ((p, q), (p1, q1), (p2, q2)) = (self.unpair(x, y, a), self.unpair(x, y, b), self.unpair(x, y, c));
                let (m1, m2, m3) = (y.hom_size(q, q1), y.hom_size(q1, q2), y.hom_size(q, q2));
                let xs = x.compose(p, p1, p2, g / m2, f / m1);
                let ys = y.compose(q, q1, q2, g % m2, f % m1);
                xs * m3 + ys
            }
            Kind::Full { parent, objects } => {
                let o = |i: Obj| objects[i as usize];
                parent.compose(o(a), o(b), o(c), g, f)
            }
        }
    }

    /// Name of arrow `f: a -> b`, for diagnostics and printing.
    pub fn arrow_name(&self, a: Obj, b: Obj, f: usize) -> String {
        match &self.0.kind {
            Kind::Finite(fc) => fc.shape.arrow(fc.arrow(a, b, f)).name.clone(),
            Kind::Opposite(k) => k.arrow_name(b, a, f),
            Kind::Full { parent, objects } => parent.arrow_name(objects[a as usize], objects[b as usize], f),
            _ => {
                if self.hom_size(a, b) == 1 {
                    format!("{}->{}", self.object_name(a), self.object_name(b))
                } else {
                    format!("{}->{}#{f}", self.object_name(a), self.object_name(b))
                }
            }
        }
    }

    /// Whether `f: a -> b` has an inverse.
    pub fn is_iso(&self, a: Obj, b: Obj, f: usize) -> bool {
        (0..self.hom_size(b, a)).any(|g| {
            self.compose(a, b, a, g, f) == self.identity(a) && self.compose(b, a, b, f, g) == self.identity(b)
        })
    }

    /// The registered decision procedure of the underlying family.
    pub fn decision(&self) -> Option<FamilyDecision> {
        match &self.0.kind {
            Kind::Family(f) => f.decision(),
            Kind::Opposite(k) => k.decision().map(FamilyDecision::opposite),
            _ => None,
        }
    }

    pub fn family_tag(&self) -> Option<String> {
        match &self.0.kind {
            Kind::Family(f) => Some(f.tag().to_string()),
            Kind::Opposite(k) => k.family_tag().map(|t| format!("opposite({t})")),
            _ => None,
        }
    }

    /// The explicit shape when the category is finite.
    pub fn to_shape(&self) -> Option<Shape> {
        if let Kind::Finite(f) = &self.0.kind {
            return Some(f.shape.clone().with_name(self.name()));
        }
        let n = self.object_count()? as usize;
        let mut arrows = Vec::new();
        let mut start = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                start[a * n + b] = arrows.len();
                for f in 0..self.hom_size(a as u64, b as u64) {
                    arrows.push(crate::base::Arrow { name: self.arrow_name(a as u64, b as u64, f), src: a, tgt: b });
                }
            }
        }
        let identities = (0..n).map(|a| start[a * n + a] + self.identity(a as u64)).collect();
        let names = (0..n).map(|a| self.object_name(a as u64)).collect();
        let arrows2 = arrows.clone();
        Shape::new(self.name(), names, arrows, identities, |g, f| {
            let (a, b, c) = (arrows2[f].src, arrows2[f].tgt, arrows2[g].tgt);
            let h = self.compose(
                a as u64,
                b as u64,
                c as u64,
                g - start[b * n + c],
                f - start[a * n + b],
            );
            Some(start[a * n + c] + h)
        })
        .ok()
    }

    pub fn is_thin(&self) -> Option<bool> {
        let n = self.object_count()?;
        Some((0..n).all(|a| (0..n).all(|b| self.hom_size(a, b) <= 1)))
    }

    pub fn validate(&self, probes: usize) -> ValidationReport {
        validate::validate(self, probes)
    }

    /// A short structural description used in reports.
    pub fn describe(&self) -> String {
        match &self.0.kind {
            Kind::Finite(f) => format!("finite({} objects, {} arrows)", f.shape.object_count(), f.shape.arrow_count()),
            Kind::Family(f) => f.tag().to_string(),
            Kind::Opposite(k) => format!("opposite({})", k.describe()),
            Kind::Tensor(a, b) => format!("tensor({}, {})", a.describe(), b.describe()),
            Kind::Full { parent, objects } => format!("full({}, {:?})", parent.describe(), objects),
        }
    }

    /// The parent and object list of a full subcategory.
    pub fn full_parent(&self) -> Option<(&Category, &[Obj])> {
        match &self.0.kind {
            Kind::Full { parent, objects } => Some((parent, objects)),
            _ => None,
        }
    }

    pub fn opposite_of(&self) -> Option<&Category> {
        match &self.0.kind {
            Kind::Opposite(k) => Some(k),
            _ => None,
        }
    }

    pub fn tensor_factors(&self) -> Option<(&Category, &Category)> {
        match &self.0.kind {
            Kind::Tensor(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_roundtrip() {
        for a in 0..30 {
            for b in 0..30 {
                assert_eq!(cantor_unpair(cantor_pair(a, b)), (a, b));
            }
        }
    }

    #[test]
    fn builtin_homs() {
        let d = Category::builtin("DiscreteNat", Base::finset()).unwrap();
        assert_eq!(d.hom_size(3, 3), 1);
        assert_eq!(d.hom_size(3, 5), 0);
        let w = Category::builtin("OmegaChain", Base::bool2()).unwrap();
        assert_eq!(w.hom_object(2, 7), BaseObject::bool2(true));
        let op = w.opposite();
        assert_eq!(op.hom_size(5, 3), 1);
        assert!((0..20).all(|a| op.hom_size(a, 0) == 1));
        assert_eq!(op.opposite(), w);
        assert!(matches!(Category::builtin("Nope", Base::finset()), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn full_subcategories() {
        let w = Category::builtin("OmegaChain", Base::finset()).unwrap();
        let (sub, _) = w.full_subcategory("s", &[0, 2]).unwrap();
        assert_eq!(sub.hom_size(0, 1), 1);
        assert_eq!(sub.hom_size(1, 0), 0);
        let d = Category::builtin("DiscreteNat", Base::finset()).unwrap();
        let (one, _) = d.full_subcategory("one", &[3]).unwrap();
        assert_eq!(one.object_count(), Some(1));
        assert_eq!(one.object_name(0), "3");
    }

    #[test]
    fn tensor_counts() {
        let b = Base::finset();
        let k = Category::finite("k", b.clone(), Shape::discrete(2)).unwrap();
        let l = Category::finite("l", b.clone(), Shape::chain(3)).unwrap();
        let t = k.tensor(&l).unwrap();
        assert_eq!(t.object_count(), Some(6));
        assert!(t.validate(16).is_valid());
        let s = t.to_shape().unwrap();
        assert!(s.law_failures().is_empty());
    }
}
