use super::{Category, Obj, ValidationReport};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum FunctorKind {
    Identity,
    /// Into a category with one object and one arrow.
    ToTerminal,
    /// A full subcategory into its parent.
    Inclusion,
    /// Finite source; `arrows[a * n + b][f]` is the image of `f: a -> b`.
    Explicit { objects: Vec<Obj>, arrows: Vec<Vec<usize>> },
    Opposite(Box<Functor>),
    /// `second ∘ first`.
    Composite(Box<Functor>, Box<Functor>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Functor {
    name: String,
    source: Category,
    target: Category,
    kind: FunctorKind,
}

impl Functor {
    pub fn identity(k: &Category) -> Functor {
        Functor { name: format!("id_{}", k.name()), source: k.clone(), target: k.clone(), kind: FunctorKind::Identity }
    }

    pub fn to_terminal(k: &Category, terminal: &Category) -> Result<Functor> {
        if terminal.object_count() != Some(1) || terminal.hom_size(0, 0) != 1 {
            return Err(Error::InvalidTarget(format!("{} is not a terminal category", terminal.name())));
        }
        if k.base() != terminal.base() {
            return Err(Error::BackendMismatch("functor between different bases".into()));
        }
        Ok(Functor {
            name: format!("!_{}", k.name()),
            source: k.clone(),
            target: terminal.clone(),
            kind: FunctorKind::ToTerminal,
        })
    }

    pub(super) fn inclusion(sub: &Category) -> Result<Functor> {
        let (parent, _) = sub
            .full_parent()
            .ok_or_else(|| Error::InvalidTarget(format!("{} is not a full subcategory", sub.name())))?;
        Ok(Functor {
            name: format!("incl_{}", sub.name()),
            source: sub.clone(),
            target: parent.clone(),
            kind: FunctorKind::Inclusion,
        })
    }

    /// A functor out of a finite category, given on objects and arrows.
    /// Fails with the first law violation.
    pub fn explicit(
        name: impl Into<String>,
        source: &Category,
        target: &Category,
        objects: Vec<Obj>,
        arrows: Vec<Vec<usize>>,
    ) -> Result<Functor> {
        let f = Functor::explicit_unchecked(name, source, target, objects, arrows)?;
        let report = f.validate(0);
        match report.failures.first() {
            Some(msg) => Err(Error::InvalidDiagram(msg.clone())),
            None => Ok(f),
        }
    }

    /// As [`Functor::explicit`], leaving law checking to [`Functor::validate`].
    pub fn explicit_unchecked(
        name: impl Into<String>,
        source: &Category,
        target: &Category,
        objects: Vec<Obj>,
        arrows: Vec<Vec<usize>>,
    ) -> Result<Functor> {
        let n = source
            .object_count()
            .ok_or_else(|| Error::InvalidDiagram("explicit functors need a finite source".into()))?
            as usize;
        if source.base() != target.base() {
            return Err(Error::BackendMismatch("functor between different bases".into()));
        }
        if objects.len() != n || arrows.len() != n * n {
            return Err(Error::InvalidDiagram("functor data does not cover the source".into()));
        }
        for &o in &objects {
            target.check_object(o)?;
        }
        for a in 0..n {
            for b in 0..n {
                let m = &arrows[a * n + b];
                let limit = target.hom_size(objects[a], objects[b]);
                if m.len() != source.hom_size(a as Obj, b as Obj) || m.iter().any(|&g| g >= limit) {
                    return Err(Error::InvalidDiagram(format!(
                        "no image for an arrow {} -> {}",
                        source.object_name(a as Obj),
                        source.object_name(b as Obj)
                    )));
                }
            }
        }
        Ok(Functor { name: name.into(), source: source.clone(), target: target.clone(), kind: FunctorKind::Explicit { objects, arrows } })
    }

    /// A functor into a thin category, determined by its object map.
    pub fn on_objects(name: impl Into<String>, source: &Category, target: &Category, objects: Vec<Obj>) -> Result<Functor> {
        let n = source.object_count().unwrap_or(0) as usize;
        let mut arrows = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let count = source.hom_size(a as Obj, b as Obj);
                let ok = count == 0 || target.hom_size(objects[a], objects[b]) == 1;
                if !ok {
                    return Err(Error::InvalidDiagram(format!(
                        "object map is not monotone at {} -> {}",
                        source.object_name(a as Obj),
                        source.object_name(b as Obj)
                    )));
                }
                arrows.push(vec![0; count]);
            }
        }
        Functor::explicit(name, source, target, objects, arrows)
    }

    pub fn compose(second: &Functor, first: &Functor) -> Result<Functor> {
        if first.target != second.source {
            return Err(Error::AmbientMismatch(format!("cannot compose {} after {}", second.name, first.name)));
        }
        Ok(Functor {
            name: format!("{}∘{}", second.name, first.name),
            source: first.source.clone(),
            target: second.target.clone(),
            kind: FunctorKind::Composite(Box::new(first.clone()), Box::new(second.clone())),
        })
    }

    pub fn opposite(&self) -> Functor {
        if let FunctorKind::Opposite(f) = &self.kind {
            return (**f).clone();
        }
        Functor {
            name: format!("{}^op", self.name),
            source: self.source.opposite(),
            target: self.target.opposite(),
            kind: FunctorKind::Opposite(Box::new(self.clone())),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Functor {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Category {
        &self.source
    }

    pub fn target(&self) -> &Category {
        &self.target
    }

    pub fn kind(&self) -> &FunctorKind {
        &self.kind
    }

    /// Whether the functor commutes with every permutation of the source
    /// objects that the registered decisions rely on. True for identities,
    /// constant functors, and functors out of finite categories.
    pub fn is_uniform(&self) -> bool {
        match &self.kind {
            FunctorKind::Identity | FunctorKind::ToTerminal => true,
            FunctorKind::Opposite(f) => f.is_uniform(),
            FunctorKind::Composite(f, g) => self.source.is_finite() || (f.is_uniform() && g.is_uniform()),
            _ => self.source.is_finite(),
        }
    }

    pub fn map_object(&self, a: Obj) -> Obj {
        match &self.kind {
            FunctorKind::Identity => a,
            FunctorKind::ToTerminal => 0,
            FunctorKind::Inclusion => self.source.full_parent().expect("inclusion").1[a as usize],
            FunctorKind::Explicit { objects, .. } => objects[a as usize],
            FunctorKind::Opposite(f) => f.map_object(a),
            FunctorKind::Composite(f, g) => g.map_object(f.map_object(a)),
        }
    }

    pub fn map_arrow(&self, a: Obj, b: Obj, f: usize) -> usize {
        match &self.kind {
            FunctorKind::Identity | FunctorKind::Inclusion => f,
            FunctorKind::ToTerminal => 0,
            FunctorKind::Explicit { arrows, objects } => arrows[a as usize * objects.len() + b as usize][f],
            FunctorKind::Opposite(inner) => inner.map_arrow(b, a, f),
            FunctorKind::Composite(first, second) => {
                second.map_arrow(first.map_object(a), first.map_object(b), first.map_arrow(a, b, f))
            }
        }
    }

    /// Identity and composition preservation on all objects of a finite
    /// source, or on the first `probes` objects otherwise.
    pub fn validate(&self, probes: usize) -> ValidationReport {
        let objs = self.source.enumerate(probes);
        let (s, t) = (&self.source, &self.target);
        let mut failures = Vec::new();
        for &a in &objs {
            if self.map_arrow(a, a, s.identity(a)) != t.identity(self.map_object(a)) {
                failures.push(format!("{} does not preserve the identity of {}", self.name, s.object_name(a)));
            }
        }
        for &a in &objs {
            for &b in &objs {
                for &c in &objs {
                    for f in 0..s.hom_size(a, b) {
                        for g in 0..s.hom_size(b, c) {
                            let lhs = self.map_arrow(a, c, s.compose(a, b, c, g, f));
                            let (fa, fb, fc) = (self.map_object(a), self.map_object(b), self.map_object(c));
                            let rhs = t.compose(fa, fb, fc, self.map_arrow(b, c, g), self.map_arrow(a, b, f));
                            if lhs != rhs {
                                failures.push(format!(
                                    "{} does not preserve {} ∘ {}",
                                    self.name,
                                    s.arrow_name(b, c, g),
                                    s.arrow_name(a, b, f)
                                ));
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { failures, probe_bound: (!s.is_finite()).then_some(probes) }
    }

    /// Whether every hom action is a bijection on the probed objects.
    pub fn is_fully_faithful_on(&self, objs: &[Obj]) -> bool {
        objs.iter().all(|&a| {
            objs.iter().all(|&b| {
                let n = self.source.hom_size(a, b);
                if n != self.target.hom_size(self.map_object(a), self.map_object(b)) {
                    return false;
                }
                let mut seen = vec![false; n];
                (0..n).all(|f| !std::mem::replace(&mut seen[self.map_arrow(a, b, f)], true))
            })
        })
    }
}

/// A natural transformation between two functors with finite source.
#[derive(Clone, Debug)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    /// Component at `a`, an arrow `F a -> G a`.
    pub components: Vec<usize>,
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, components: Vec<usize>) -> Result<NatTrans> {
        if source.source() != target.source() || source.target() != target.target() {
            return Err(Error::AmbientMismatch("natural transformation between unrelated functors".into()));
        }
        let t = NatTrans { source, target, components };
        match t.validate().failures.first() {
            Some(m) => Err(Error::InvalidDiagram(m.clone())),
            None => Ok(t),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let k = self.source.source();
        let l = self.source.target();
        let n = k.object_count().unwrap_or(0);
        let mut failures = Vec::new();
        if self.components.len() as u64 != n {
            failures.push("components do not cover the source".into());
            return ValidationReport { failures, probe_bound: None };
        }
        for a in 0..n {
            let (fa, ga) = (self.source.map_object(a), self.target.map_object(a));
            if self.components[a as usize] >= l.hom_size(fa, ga) {
                failures.push(format!("component at {} is not an arrow", k.object_name(a)));
            }
        }
        if !failures.is_empty() {
            return ValidationReport { failures, probe_bound: None };
        }
        for a in 0..n {
            for b in 0..n {
                for f in 0..k.hom_size(a, b) {
                    let (fa, fb, gb) = (self.source.map_object(a), self.source.map_object(b), self.target.map_object(b));
                    let ga = self.target.map_object(a);
                    let lhs = l.compose(fa, fb, gb, self.components[b as usize], self.source.map_arrow(a, b, f));
                    let rhs = l.compose(fa, ga, gb, self.target.map_arrow(a, b, f), self.components[a as usize]);
                    if lhs != rhs {
                        failures.push(format!("naturality square fails at {}", k.arrow_name(a, b, f)));
                    }
                }
            }
        }
        ValidationReport { failures, probe_bound: None }
    }
}
