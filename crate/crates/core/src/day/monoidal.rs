use crate::base::{Shape, UnionFind};
use crate::category::{Category, Obj};
use crate::error::{Error, Result};
use crate::presheaf::{weighted_colimit, PresheafDiagram, PresheafMorphism, SmallPresheaf, Variance, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorRule {
    /// `table[a * n + b]` on a finite category.
    Table(Vec<Obj>),
    Max,
    Min,
    /// A one-object category whose arrows form a commutative monoid.
    Monoid,
}

/// A tensor on the objects of `K`, extended to arrows: by the unique arrow
/// on thin categories, by composition on monoids, and by identities on
/// discrete ones.
#[derive(Clone, Debug)]
pub struct MonoidalStructure {
    pub name: String,
    pub ambient: Category,
    pub rule: TensorRule,
    /// `None` for a semigroup tensor such as `min` on the naturals.
    pub unit: Option<Obj>,
}

impl MonoidalStructure {
    pub fn new(name: impl Into<String>, ambient: &Category, rule: TensorRule, unit: Option<Obj>, probes: usize) -> Result<Self> {
        let m = MonoidalStructure::unchecked(name, ambient, rule, unit);
        if let Some(msg) = m.validate(probes).first() {
            return Err(Error::InvalidMonoidal(msg.clone()));
        }
        Ok(m)
    }

    /// Without law checks; [`MonoidalStructure::validate`] reports them.
    pub fn unchecked(name: impl Into<String>, ambient: &Category, rule: TensorRule, unit: Option<Obj>) -> Self {
        MonoidalStructure { name: name.into(), ambient: ambient.clone(), rule, unit }
    }

    pub fn tensor(&self, a: Obj, b: Obj) -> Obj {
        match &self.rule {
            TensorRule::Table(t) => t[(a * self.ambient.object_count().expect("finite") + b) as usize],
            TensorRule::Max => a.max(b),
            TensorRule::Min => a.min(b),
            TensorRule::Monoid => 0,
        }
    }

    /// `u ⊗ v: a ⊗ b -> a2 ⊗ b2`.
    pub fn tensor_arrow(&self, (a, a2, u): (Obj, Obj, usize), (b, b2, v): (Obj, Obj, usize)) -> usize {
        let k = &self.ambient;
        if self.rule == TensorRule::Monoid {
            return k.compose(0, 0, 0, u, v);
        }
        let (x, y) = (self.tensor(a, b), self.tensor(a2, b2));
        if x == y && u == k.identity(a) && v == k.identity(b) {
            k.identity(x)
        } else {
            0
        }
    }

    fn probes(&self, probes: usize) -> Vec<Obj> {
        let mut objs = self.ambient.enumerate(probes);
        if let Some(i) = self.unit {
            if !objs.contains(&i) {
                objs.push(i);
            }
        }
        objs
    }

    /// Law failures on the probed objects.
    pub fn validate(&self, probes: usize) -> Vec<String> {
        let k = &self.ambient;
        let mut out = Vec::new();
        if let TensorRule::Table(t) = &self.rule {
            match k.object_count() {
                Some(n) if t.len() as u64 == n * n && t.iter().all(|&x| x < n) => {}
                _ => return vec![format!("{} needs a full table of objects of {}", self.name, k.name())],
            }
        }
        if self.rule == TensorRule::Monoid {
            if k.object_count() != Some(1) {
                return vec![format!("{} needs a one-object category", self.name)];
            }
            let n = k.hom_size(0, 0);
            for f in 0..n {
                for g in 0..n {
                    if k.compose(0, 0, 0, f, g) != k.compose(0, 0, 0, g, f) {
                        out.push(format!("{} and {} do not commute", k.arrow_name(0, 0, f), k.arrow_name(0, 0, g)));
                    }
                }
            }
            return out;
        }
        if let Some(i) = self.unit {
            if k.check_object(i).is_err() {
                return vec![format!("unit of {} is not an object", self.name)];
            }
        }
        let objs = self.probes(probes);
        let discrete = objs.iter().all(|&a| objs.iter().all(|&b| k.hom_size(a, b) == usize::from(a == b)));
        let thin = objs.iter().all(|&a| objs.iter().all(|&b| k.hom_size(a, b) <= 1));
        if !thin && !discrete {
            return vec![format!("{} acts on arrows only over thin or discrete categories", self.name)];
        }
        for &a in &objs {
            if let Some(i) = self.unit {
                if self.tensor(i, a) != a || self.tensor(a, i) != a {
                    out.push(format!("{} is not a unit at {}", k.object_name(i), k.object_name(a)));
                }
            }
            for &b in &objs {
                if k.check_object(self.tensor(a, b)).is_err() {
                    out.push(format!("{} ⊗ {} is not an object", k.object_name(a), k.object_name(b)));
                    continue;
                }
                for &c in &objs {
                    let (l, r) = (self.tensor(self.tensor(a, b), c), self.tensor(a, self.tensor(b, c)));
                    if l != r {
                        out.push(format!(
                            "not associative at ({}, {}, {})",
                            k.object_name(a),
                            k.object_name(b),
                            k.object_name(c)
                        ));
                    }
                }
            }
        }
        // functoriality in each variable on a thin category is monotonicity
        for &a in &objs {
            for &a2 in &objs {
                for &b in &objs {
                    for &b2 in &objs {
                        let arrows = k.hom_size(a, a2) > 0 && k.hom_size(b, b2) > 0;
                        if arrows && k.hom_size(self.tensor(a, b), self.tensor(a2, b2)) == 0 {
                            out.push(format!(
                                "{} is not functorial on {} -> {}, {} -> {}",
                                self.name,
                                k.object_name(a),
                                k.object_name(a2),
                                k.object_name(b),
                                k.object_name(b2)
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// A finite directed family of tensors with comparison arrows
/// `a ⊗_i b -> a ⊗_j b` for `i <= j`.
#[derive(Clone, Debug)]
pub struct ApproximatelyMonoidal {
    /// A thin shape.
    pub index: Shape,
    pub members: Vec<MonoidalStructure>,
}

impl ApproximatelyMonoidal {
    pub fn new(index: Shape, members: Vec<MonoidalStructure>) -> Result<Self> {
        let n = index.object_count();
        if n == 0 || members.len() != n || !index.is_thin() {
            return Err(Error::NotDirected("the index must be a nonempty preorder with one member per object".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|t| index.hom(i, t).next().is_some() && index.hom(j, t).next().is_some()) {
                    return Err(Error::NotDirected(format!(
                        "{} and {} have no common upper bound",
                        index.object_names()[i],
                        index.object_names()[j]
                    )));
                }
            }
        }
        let k = &members[0].ambient;
        if members.iter().any(|m| m.ambient != *k) {
            return Err(Error::AmbientMismatch("family members live on different categories".into()));
        }
        Ok(ApproximatelyMonoidal { index, members })
    }
}

/// `P(-; A, B)` as the colimit over stages of `K(-, A ⊗_i B)`, with unit
/// `J` likewise.
#[derive(Clone, Debug)]
pub struct PromonoidalStructure {
    pub ambient: Category,
    pub index: Shape,
    pub stages: Vec<MonoidalStructure>,
    pub unit: Option<SmallPresheaf>,
}

impl PromonoidalStructure {
    pub fn is_monoidal(&self) -> bool {
        self.stages.len() == 1
    }

    /// `x_i -> x_j` for an index arrow `i -> j`.
    pub(crate) fn comparison(&self, x: Obj, y: Obj) -> Result<usize> {
        let k = &self.ambient;
        if x == y {
            Ok(k.identity(x))
        } else if k.hom_size(x, y) == 1 {
            Ok(0)
        } else {
            Err(Error::InvalidMonoidal(format!(
                "no comparison arrow {} -> {}",
                k.object_name(x),
                k.object_name(y)
            )))
        }
    }

    fn colimit_of_stages(&self, objs: Vec<Obj>) -> Result<SmallPresheaf> {
        let k = &self.ambient;
        if objs.len() == 1 {
            return SmallPresheaf::representable(k, objs[0]);
        }
        let d = &self.index;
        let arrows = d
            .arrows()
            .iter()
            .map(|a| self.comparison(objs[a.src], objs[a.tgt]))
            .collect::<Result<Vec<_>>>()?;
        let objects = objs.iter().map(|&x| SmallPresheaf::representable(k, x)).collect::<Result<Vec<_>>>()?;
        let maps = d
            .arrows()
            .iter()
            .enumerate()
            .map(|(u, a)| PresheafMorphism::yoneda(k, objs[a.src], objs[a.tgt], arrows[u]))
            .collect::<Result<Vec<_>>>()?;
        let diagram = PresheafDiagram::new(d.clone(), objects, maps)?;
        let base = k.base();
        let w = Weight::constant(base, d.clone(), Variance::Contravariant, &base.unit());
        weighted_colimit(base, k, &w, &diagram)?.canonicalize()
    }

    /// `P(-; a, b)`.
    pub fn p(&self, a: Obj, b: Obj) -> Result<SmallPresheaf> {
        self.colimit_of_stages(self.stages.iter().map(|m| m.tensor(a, b)).collect())
    }

    /// Representatives of `P(c; a, b)` as `(stage, arrow c -> a ⊗_i b)` and
    /// the class of each pair.
    pub(crate) fn elements(&self, c: Obj, a: Obj, b: Obj) -> Result<StageElements> {
        let k = &self.ambient;
        let xs: Vec<Obj> = self.stages.iter().map(|m| m.tensor(a, b)).collect();
        let mut off = vec![0];
        for &x in &xs {
            off.push(off.last().unwrap() + k.hom_size(c, x));
        }
        let mut uf = UnionFind::new(*off.last().unwrap());
        for a in self.index.arrows() {
            let cmp = self.comparison(xs[a.src], xs[a.tgt])?;
            for z in 0..k.hom_size(c, xs[a.src]) {
                uf.union(off[a.src] + z, off[a.tgt] + k.compose(c, xs[a.src], xs[a.tgt], cmp, z));
            }
        }
        let (class, count) = uf.classes();
        let mut reps = vec![(0, 0); count];
        let mut seen = vec![false; count];
        for (i, w) in off.windows(2).enumerate() {
            for z in 0..w[1] - w[0] {
                let cl = class[w[0] + z];
                if !std::mem::replace(&mut seen[cl], true) {
                    reps[cl] = (i, z);
                }
            }
        }
        let count = if k.base().tag() == crate::base::BackendTag::Bool2 { count.min(1) } else { count };
        reps.truncate(count);
        let truncate = count <= 1;
        Ok(StageElements { off, class: if truncate { vec![0; class.len()] } else { class }, reps })
    }
}

pub(crate) struct StageElements {
    off: Vec<usize>,
    class: Vec<usize>,
    pub reps: Vec<(usize, usize)>,
}

impl StageElements {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, stage: usize, z: usize) -> usize {
        self.class[self.off[stage] + z]
    }
}

pub fn from_monoidal(m: &MonoidalStructure) -> Result<PromonoidalStructure> {
    let k = &m.ambient;
    let unit = m.unit.map(|i| SmallPresheaf::representable(k, i)).transpose()?;
    Ok(PromonoidalStructure { ambient: k.clone(), index: Shape::terminal(), stages: vec![m.clone()], unit })
}

pub fn approximate_colimit(fam: &ApproximatelyMonoidal) -> Result<PromonoidalStructure> {
    let k = fam.members[0].ambient.clone();
    let mut p = PromonoidalStructure { ambient: k, index: fam.index.clone(), stages: fam.members.clone(), unit: None };
    let units: Option<Vec<Obj>> = fam.members.iter().map(|m| m.unit).collect();
    // units without comparison arrows between them leave J undefined
    p.unit = units.and_then(|u| p.colimit_of_stages(u).ok());
    Ok(p)
}
