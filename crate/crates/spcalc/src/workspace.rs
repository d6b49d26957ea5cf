//! Name resolution and validation of a parsed file into engine values.

use std::collections::{BTreeMap, HashMap};

use spcalc_core::base::{Arrow, Base, BaseObject, Shape, SortedMap};
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::day::{approximate_colimit, from_monoidal, ApproximatelyMonoidal, MonoidalStructure, PromonoidalStructure, TensorRule};
use spcalc_core::presheaf::{PresheafDiagram, SmallPresheaf, Variance, Weight};
use spcalc_core::Bounds;

use crate::ast::*;
use crate::lexer::Pos;
use crate::parser::{parse_located, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WorkspaceError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("parse error at {pos}: unknown {kind} `{name}`")]
    Unknown { pos: Pos, kind: &'static str, name: String },
    #[error("parse error at {pos}: `{name}` is declared twice")]
    Duplicate { pos: Pos, name: String },
    #[error("validation error at {pos} in `{decl}`: {message}")]
    Validation { pos: Pos, decl: String, message: String },
}

impl WorkspaceError {
    pub fn kind(&self) -> &'static str {
        match self {
            WorkspaceError::Validation { .. } => "ValidationError",
            _ => "ParseError",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub ambient: Category,
    pub diagram: PresheafDiagram,
    /// Domain objects and ambient arrows, when the diagram is made of
    /// representables on a nonempty domain.
    pub objects: Vec<Obj>,
    pub arrows: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum Monoidal {
    Strict(MonoidalStructure, PromonoidalStructure),
    Approximate(ApproximatelyMonoidal, PromonoidalStructure),
}

impl Monoidal {
    pub fn promonoidal(&self) -> &PromonoidalStructure {
        match self {
            Monoidal::Strict(_, p) | Monoidal::Approximate(_, p) => p,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub file: Option<File>,
    pub bases: BTreeMap<String, Base>,
    pub categories: BTreeMap<String, Category>,
    pub functors: BTreeMap<String, Functor>,
    pub presheaves: BTreeMap<String, SmallPresheaf>,
    pub weights: BTreeMap<String, Weight>,
    pub diagrams: BTreeMap<String, Diagram>,
    pub monoidals: BTreeMap<String, Monoidal>,
    pub bounds: Bounds,
}

pub fn load(text: &str) -> Result<Workspace, WorkspaceError> {
    let (file, positions) = parse_located(text)?;
    let mut ws = Workspace::default();
    ws.bases.insert("FinSet".into(), Base::finset());
    ws.bases.insert("Bool2".into(), Base::bool2());
    let mut seen = std::collections::HashSet::new();
    for (d, &pos) in file.decls.iter().zip(&positions) {
        if let Some(name) = d.name() {
            if !seen.insert(name.to_string()) || (matches!(d, Decl::Base { .. }) && ws.bases.contains_key(name)) {
                return Err(WorkspaceError::Duplicate { pos, name: name.into() });
            }
        }
        let mut cx = Cx { ws: &mut ws, pos, decl: d.name().unwrap_or("bounds").to_string() };
        cx.decl(d)?;
    }
    ws.file = Some(file);
    Ok(ws)
}

struct Cx<'a> {
    ws: &'a mut Workspace,
    pos: Pos,
    decl: String,
}

type R<T> = Result<T, WorkspaceError>;

fn find<'m, T>(map: &'m BTreeMap<String, T>, pos: Pos, kind: &'static str, name: &str) -> R<&'m T> {
    map.get(name).ok_or_else(|| WorkspaceError::Unknown { pos, kind, name: name.into() })
}

impl Cx<'_> {
    fn invalid<T>(&self, message: impl Into<String>) -> R<T> {
        Err(WorkspaceError::Validation { pos: self.pos, decl: self.decl.clone(), message: message.into() })
    }

    fn core<T>(&self, r: spcalc_core::Result<T>) -> R<T> {
        r.or_else(|e| self.invalid(e.to_string()))
    }

    fn unknown<T>(&self, kind: &'static str, name: &str) -> R<T> {
        Err(WorkspaceError::Unknown { pos: self.pos, kind, name: name.into() })
    }

    fn base(&self, name: &str) -> R<Base> {
        find(&self.ws.bases, self.pos, "base", name).cloned()
    }

    fn category(&self, name: &str) -> R<Category> {
        find(&self.ws.categories, self.pos, "category", name).cloned()
    }

    fn object(&self, k: &Category, name: &str) -> R<Obj> {
        match k.lookup(name) {
            Some(a) if k.contains(a) => Ok(a),
            _ => self.unknown("object", name),
        }
    }

    /// A finite category as a shape, for sites and weight domains.
    fn shape(&self, name: &str) -> R<Shape> {
        let k = self.category(name)?;
        match k.to_shape() {
            Some(s) => Ok(s),
            None => self.invalid(format!("{name} is not a finite category")),
        }
    }

    /// The arrow `a -> b` named by `r`.
    fn arrow(&self, k: &Category, a: Obj, b: Obj, name: &str) -> Option<usize> {
        if name == "id" && a == b {
            return Some(k.identity(a));
        }
        (0..k.hom_size(a, b)).find(|&f| k.arrow_name(a, b, f) == name)
    }

    fn decl(&mut self, d: &Decl) -> R<()> {
        match d {
            Decl::Base { name, spec } => {
                let base = match spec {
                    BaseSpec::FinSet => Base::finset(),
                    BaseSpec::Bool2 => Base::bool2(),
                    BaseSpec::FinPresheaf(site) => Base::fin_presheaf(self.shape(site)?),
                };
                self.ws.bases.insert(name.clone(), base);
            }
            Decl::Bounds(kv) => {
                for (k, v) in kv {
                    let Ok(n) = v.parse::<u64>() else { return self.invalid(format!("bound {k} = {v} is not a number")) };
                    if n == 0 && k != "seed" {
                        return self.invalid(format!("bound {k} must be positive"));
                    }
                    let b = &mut self.ws.bounds;
                    match k.as_str() {
                        "probes" => b.probes = n as usize,
                        "depth" => b.depth = n as usize,
                        "budget" => b.iso_budget = n,
                        "seed" => b.seed = n,
                        _ => return self.unknown("bound", k),
                    }
                }
            }
            Decl::Category(c) => {
                let k = self.category_decl(c)?;
                let report = k.validate(self.ws.bounds.probes);
                if let Some(f) = report.failures.first() {
                    return self.invalid(f.clone());
                }
                self.ws.categories.insert(c.name.clone(), k);
            }
            Decl::Functor(f) => {
                let fun = self.functor_decl(f)?;
                self.ws.functors.insert(f.name.clone(), fun);
            }
            Decl::Presheaf(p) => {
                let k = self.category(&p.on)?;
                let g = match &p.body {
                    PresheafBody::Empty => SmallPresheaf::empty(&k),
                    PresheafBody::Representable(a) => {
                        let a = self.object(&k, a)?;
                        self.core(SmallPresheaf::representable(&k, a))?
                    }
                    PresheafBody::Explicit { support, values, actions } => self.presheaf_decl(&k, support, values, actions)?,
                };
                self.ws.presheaves.insert(p.name.clone(), g);
            }
            Decl::Weight(w) => {
                let w2 = self.weight_decl(w)?;
                self.ws.weights.insert(w.name.clone(), w2);
            }
            Decl::Diagram(d) => {
                let d2 = self.diagram_decl(d)?;
                self.ws.diagrams.insert(d.name.clone(), d2);
            }
            Decl::Monoidal(m) => {
                let m2 = self.monoidal_decl(m)?;
                self.ws.monoidals.insert(m.name.clone(), m2);
            }
        }
        Ok(())
    }
}

/// Element names of a carrier, per sort.
type Labels = Vec<Vec<String>>;

fn index_of(labels: &[String], x: &str) -> Option<usize> {
    labels.iter().position(|y| y == x)
}

impl Cx<'_> {
    fn category_decl(&self, c: &CategoryDecl) -> R<Category> {
        let base = |cx: &Self| cx.base(c.base.as_deref().unwrap_or("FinSet"));
        match &c.body {
            CategoryBody::Builtin(tag) => {
                let b = base(self)?;
                Category::builtin(tag, b).or_else(|_| self.unknown("procedural family", tag))
            }
            CategoryBody::Opposite(of) => Ok(self.category(of)?.opposite().with_name(c.name.clone())),
            CategoryBody::Order { objects, relations } => {
                let n = objects.len();
                let mut le = vec![false; n * n];
                for a in 0..n {
                    le[a * n + a] = true;
                }
                for (a, b) in relations {
                    let ia = index_of(objects, a).map_or_else(|| self.unknown("object", a), Ok)?;
                    let ib = index_of(objects, b).map_or_else(|| self.unknown("object", b), Ok)?;
                    le[ia * n + ib] = true;
                }
                for m in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            if le[a * n + m] && le[m * n + b] {
                                le[a * n + b] = true;
                            }
                        }
                    }
                }
                let mut arrows = Vec::new();
                let mut index = vec![usize::MAX; n * n];
                for a in 0..n {
                    index[a * n + a] = arrows.len();
                    arrows.push(Arrow { name: format!("id_{}", objects[a]), src: a, tgt: a });
                }
                for a in 0..n {
                    for b in 0..n {
                        if a != b && le[a * n + b] {
                            index[a * n + b] = arrows.len();
                            arrows.push(Arrow { name: format!("{}_{}", objects[a], objects[b]), src: a, tgt: b });
                        }
                    }
                }
                let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
                let shape = self.core(Shape::new(c.name.clone(), objects.clone(), arrows, (0..n).collect(), |g, f| {
                    Some(index[ends[f].0 * n + ends[g].1])
                }))?;
                self.core(Category::finite(c.name.clone(), base(self)?, shape))
            }
            CategoryBody::Explicit { objects, arrows, composites } => {
                let n = objects.len();
                for (i, o) in objects.iter().enumerate() {
                    if objects[..i].contains(o) {
                        return self.invalid(format!("object {o} is listed twice"));
                    }
                }
                let mut all: Vec<Arrow> =
                    objects.iter().enumerate().map(|(a, o)| Arrow { name: format!("id_{o}"), src: a, tgt: a }).collect();
                for a in arrows {
                    if a.name == "id" || all.iter().any(|b| b.name == a.name) {
                        return self.invalid(format!("arrow name {} is reserved or used twice", a.name));
                    }
                    let src = index_of(objects, &a.src).map_or_else(|| self.unknown("object", &a.src), Ok)?;
                    let tgt = index_of(objects, &a.tgt).map_or_else(|| self.unknown("object", &a.tgt), Ok)?;
                    all.push(Arrow { name: a.name.clone(), src, tgt });
                }
                let named = |name: &str| all.iter().position(|b| b.name == name);
                let mut table = HashMap::new();
                for (g, f, h) in composites {
                    let gi = named(g).map_or_else(|| self.unknown("arrow", g), Ok)?;
                    let fi = named(f).map_or_else(|| self.unknown("arrow", f), Ok)?;
                    let hi = if h == "id" { Some(all[fi].src) } else { named(h) };
                    let hi = hi.map_or_else(|| self.unknown("arrow", h), Ok)?;
                    if table.insert((gi, fi), hi).is_some() {
                        return self.invalid(format!("composite {g} . {f} is given twice"));
                    }
                }
                let shape = Shape::new(c.name.clone(), objects.clone(), all, (0..n).collect(), |g, f| {
                    if g < n {
                        Some(f)
                    } else if f < n {
                        Some(g)
                    } else {
                        table.get(&(g, f)).copied()
                    }
                });
                let shape = self.core(shape)?;
                self.core(Category::finite(c.name.clone(), base(self)?, shape))
            }
        }
    }

    fn functor_decl(&self, f: &FunctorDecl) -> R<Functor> {
        let (src, tgt) = (self.category(&f.source)?, self.category(&f.target)?);
        let fun = match &f.body {
            FunctorBody::Terminal => self.core(Functor::to_terminal(&src, &tgt))?,
            FunctorBody::Identity => {
                if !src.same(&tgt) {
                    return self.invalid("an identity functor needs equal source and target");
                }
                Functor::identity(&src)
            }
            FunctorBody::Inclusion => self.mapped_functor(f, &src, &tgt, &[], true)?,
            FunctorBody::Map(pairs) => self.mapped_functor(f, &src, &tgt, pairs, false)?,
        };
        Ok(fun.with_name(f.name.clone()))
    }

    fn mapped_functor(&self, f: &FunctorDecl, src: &Category, tgt: &Category, pairs: &[(String, String)], same_names: bool) -> R<Functor> {
        let Some(n) = src.object_count() else {
            return self.invalid("mapped functors need a finite source");
        };
        let lookup = |x: &str| pairs.iter().find(|(a, _)| a == x).map(|(_, b)| b.clone());
        for (a, _) in pairs {
            let is_object = src.lookup(a).is_some_and(|o| src.contains(o));
            let is_arrow = (0..n).any(|x| (0..n).any(|y| self.arrow(src, x, y, a).is_some()));
            if !is_object && !is_arrow {
                return self.unknown("object or arrow", a);
            }
        }
        let mut objects = Vec::new();
        for a in 0..n {
            let name = src.object_name(a);
            let image = match lookup(&name) {
                Some(b) => b,
                None if same_names => name.clone(),
                None => return self.invalid(format!("no image for object {name}")),
            };
            objects.push(self.object(tgt, &image)?);
        }
        let mut arrows = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let (fa, fb) = (objects[a as usize], objects[b as usize]);
                let mut images = Vec::new();
                for u in 0..src.hom_size(a, b) {
                    let name = src.arrow_name(a, b, u);
                    let image = if a == b && u == src.identity(a) {
                        Some(tgt.identity(fa))
                    } else if let Some(t) = lookup(&name) {
                        self.arrow(tgt, fa, fb, &t)
                    } else if same_names {
                        self.arrow(tgt, fa, fb, &name).or((tgt.hom_size(fa, fb) == 1).then_some(0))
                    } else {
                        (tgt.hom_size(fa, fb) == 1).then_some(0)
                    };
                    match image {
                        Some(i) => images.push(i),
                        None => return self.invalid(format!("no image for arrow {name} in {}", f.target)),
                    }
                }
                arrows.push(images);
            }
        }
        self.core(Functor::explicit(f.name.clone(), src, tgt, objects, arrows))
    }

    /// A base object from a literal, with element names per sort.
    fn value(&self, base: &Base, v: &ValueLit) -> R<(BaseObject, Labels)> {
        let site = base.site();
        match v {
            ValueLit::Set(xs) if base.sorts() == 1 && site.arrow_count() == 1 => {
                for (i, x) in xs.iter().enumerate() {
                    if xs[..i].contains(x) {
                        return self.invalid(format!("element {x} is listed twice"));
                    }
                }
                if base.tag() == spcalc_core::base::BackendTag::Bool2 {
                    if xs.len() > 1 {
                        return self.invalid("a Bool2 value has at most one element");
                    }
                    return Ok((BaseObject::bool2(xs.len() == 1), vec![xs.clone()]));
                }
                Ok((BaseObject::finset(xs.len()), vec![xs.clone()]))
            }
            ValueLit::Set(_) => self.invalid("values over a presheaf base are written [sort: {..}; arrow: {..}]"),
            ValueLit::Sorted { sorts, restrictions } => {
                if base.sorts() == 1 && site.arrow_count() == 1 {
                    return self.invalid("values over FinSet and Bool2 are written {..}");
                }
                let names = site.object_names();
                let mut labels: Labels = vec![Vec::new(); names.len()];
                for (s, xs) in sorts {
                    let i = index_of(names, s).map_or_else(|| self.unknown("sort", s), Ok)?;
                    labels[i] = xs.clone();
                }
                let mut restrict = Vec::new();
                for (f, arrow) in site.arrows().iter().enumerate() {
                    let given = restrictions.iter().find(|(g, _)| *g == arrow.name);
                    let map = match given {
                        Some((_, m)) => {
                            let MapLit::Pairs(ps) = m else { return self.invalid("a restriction is one map {x -> y}") };
                            self.function(&labels[arrow.tgt], &labels[arrow.src], ps)?
                        }
                        None if site.is_identity(f) => (0..labels[arrow.tgt].len()).collect(),
                        None => return self.invalid(format!("missing restriction along {}", arrow.name)),
                    };
                    restrict.push(map);
                }
                for (g, _) in restrictions {
                    if !site.arrows().iter().any(|a| a.name == *g) {
                        return self.unknown("site arrow", g);
                    }
                }
                let sizes = labels.iter().map(|l| l.len()).collect();
                Ok((self.core(BaseObject::presheaf(site, sizes, restrict))?, labels))
            }
        }
    }

    /// A total function between labelled carriers.
    fn function(&self, from: &[String], to: &[String], pairs: &[(String, String)]) -> R<Vec<usize>> {
        let mut out = vec![usize::MAX; from.len()];
        for (x, y) in pairs {
            let i = index_of(from, x).map_or_else(|| self.unknown("element", x), Ok)?;
            let j = index_of(to, y).map_or_else(|| self.unknown("element", y), Ok)?;
            out[i] = j;
        }
        if let Some(i) = out.iter().position(|&j| j == usize::MAX) {
            return self.invalid(format!("no image for element {}", from[i]));
        }
        Ok(out)
    }

    fn sorted_map(&self, from: &Labels, to: &Labels, m: &MapLit, site_names: &[String]) -> R<SortedMap> {
        match m {
            MapLit::Pairs(ps) if from.len() == 1 => Ok(vec![self.function(&from[0], &to[0], ps)?]),
            MapLit::Pairs(_) => self.invalid("maps over a presheaf base are written [sort: {..}, ..]"),
            MapLit::Sorted(ss) => {
                let mut out = Vec::new();
                for (s, name) in site_names.iter().enumerate() {
                    let ps = ss.iter().find(|(t, _)| t == name).map(|(_, ps)| ps.as_slice()).unwrap_or(&[]);
                    out.push(self.function(&from[s], &to[s], ps)?);
                }
                Ok(out)
            }
        }
    }

    fn matches(&self, k: &Category, r: &ArrowRef, a: Obj, b: Obj, u: usize) -> R<bool> {
        Ok(match r {
            ArrowRef::Named(name) => k.arrow_name(a, b, u) == *name,
            ArrowRef::Between(x, y) => self.object(k, x)? == a && self.object(k, y)? == b && k.hom_size(a, b) == 1,
        })
    }

    fn presheaf_decl(&self, k: &Category, support: &[String], values: &[(String, ValueLit)], actions: &[(ArrowRef, MapLit)]) -> R<SmallPresheaf> {
        let base = k.base().clone();
        let objs = support.iter().map(|s| self.object(k, s)).collect::<R<Vec<_>>>()?;
        let mut vals = Vec::new();
        let mut labels = Vec::new();
        for s in support {
            let Some((_, v)) = values.iter().find(|(t, _)| t == s) else {
                return self.invalid(format!("no value at support object {s}"));
            };
            let (v, l) = self.value(&base, v)?;
            vals.push(v);
            labels.push(l);
        }
        for (t, _) in values {
            if !support.contains(t) {
                return self.invalid(format!("value at {t}, which is not in the support"));
            }
        }
        let site_names = base.site().object_names().to_vec();
        let m = objs.len();
        let mut used = vec![false; actions.len()];
        let mut acts = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let mut per = Vec::new();
                for u in 0..k.hom_size(objs[i], objs[j]) {
                    let mut found = None;
                    for (e, (r, map)) in actions.iter().enumerate() {
                        if self.matches(k, r, objs[i], objs[j], u)? {
                            used[e] = true;
                            found = Some(map);
                        }
                    }
                    let map = match found {
                        Some(map) => self.sorted_map(&labels[j], &labels[i], map, &site_names)?,
                        None if i == j && u == k.identity(objs[i]) => {
                            vals[i].sizes().iter().map(|&n| (0..n).collect()).collect()
                        }
                        None => {
                            return self.invalid(format!("missing action for {}", k.arrow_name(objs[i], objs[j], u)))
                        }
                    };
                    per.push(map);
                }
                acts.push(per);
            }
        }
        if let Some(e) = used.iter().position(|&u| !u) {
            let name = match &actions[e].0 {
                ArrowRef::Named(n) => n.clone(),
                ArrowRef::Between(a, b) => format!("{a} -> {b}"),
            };
            return self.unknown("support arrow", &name);
        }
        self.core(SmallPresheaf::new(k, objs, vals, acts))
    }

    fn weight_decl(&self, w: &WeightDecl) -> R<Weight> {
        let base = self.base(&w.base)?;
        let variance = if w.covariant { Variance::Covariant } else { Variance::Contravariant };
        let Some(dom) = &w.domain else {
            return Ok(Weight::empty(&base, variance).named(w.name.clone()));
        };
        let shape = self.shape(dom)?;
        let names = shape.object_names().to_vec();
        let mut vals = Vec::new();
        let mut labels = Vec::new();
        for d in &names {
            let Some((_, v)) = w.values.iter().find(|(t, _)| t == d) else {
                return self.invalid(format!("no value at {d}"));
            };
            let (v, l) = self.value(&base, v)?;
            vals.push(v);
            labels.push(l);
        }
        let site_names = base.site().object_names().to_vec();
        let mut maps = Vec::new();
        for (u, a) in shape.arrows().iter().enumerate() {
            let (from, to) = if w.covariant { (a.src, a.tgt) } else { (a.tgt, a.src) };
            let given = w.actions.iter().find(|(r, _)| match r {
                ArrowRef::Named(n) => *n == a.name,
                ArrowRef::Between(x, y) => *x == names[a.src] && *y == names[a.tgt] && shape.hom(a.src, a.tgt).count() == 1,
            });
            let map = match given {
                Some((_, m)) => self.sorted_map(&labels[from], &labels[to], m, &site_names)?,
                None if shape.is_identity(u) => vals[from].sizes().iter().map(|&n| (0..n).collect()).collect(),
                None => return self.invalid(format!("missing action for {}", a.name)),
            };
            maps.push(map);
        }
        self.core(Weight::new(&base, w.name.clone(), shape, variance, vals, maps))
    }

    fn diagram_decl(&self, d: &DiagramDecl) -> R<Diagram> {
        let k = self.category(&d.ambient)?;
        let Some(dom) = &d.domain else {
            return Ok(Diagram { diagram: PresheafDiagram::empty(&k), ambient: k, objects: Vec::new(), arrows: Vec::new() });
        };
        let shape = self.shape(dom)?;
        let names = shape.object_names().to_vec();
        let mut objects = Vec::new();
        for x in &names {
            let Some((_, a)) = d.objects.iter().find(|(y, _)| y == x) else {
                return self.invalid(format!("no object for {x}"));
            };
            objects.push(self.object(&k, a)?);
        }
        let mut arrows = Vec::new();
        for (u, a) in shape.arrows().iter().enumerate() {
            let (s, t) = (objects[a.src], objects[a.tgt]);
            let given = d.arrows.iter().find(|(r, _)| match r {
                ArrowRef::Named(n) => *n == a.name,
                ArrowRef::Between(x, y) => *x == names[a.src] && *y == names[a.tgt],
            });
            let image = match given {
                Some((_, f)) => self.arrow(&k, s, t, f),
                None if shape.is_identity(u) => Some(k.identity(s)),
                None => (k.hom_size(s, t) == 1).then_some(0),
            };
            match image {
                Some(i) => arrows.push(i),
                None => return self.invalid(format!("no image for {}", a.name)),
            }
        }
        let diagram = self.core(PresheafDiagram::representables(&k, shape, objects.clone(), arrows.clone()))?;
        Ok(Diagram { ambient: k, diagram, objects, arrows })
    }

    fn monoidal_decl(&self, m: &MonoidalDecl) -> R<Monoidal> {
        let k = self.category(&m.on)?;
        match &m.body {
            MonoidalBody::Approximate(stages) => {
                let mut members = Vec::new();
                for s in stages {
                    match find(&self.ws.monoidals, self.pos, "monoidal structure", s)? {
                        Monoidal::Strict(ms, _) if ms.ambient.same(&k) => members.push(ms.clone()),
                        _ => return self.invalid(format!("stage {s} is not a monoidal structure on {}", m.on)),
                    }
                }
                let fam = self.core(ApproximatelyMonoidal::new(Shape::chain(members.len()), members))?;
                let p = self.core(approximate_colimit(&fam))?;
                Ok(Monoidal::Approximate(fam, p))
            }
            MonoidalBody::Tensor { tensor, unit } => {
                let rule = match tensor {
                    TensorLit::Max => TensorRule::Max,
                    TensorLit::Min => TensorRule::Min,
                    TensorLit::Monoid => TensorRule::Monoid,
                    TensorLit::Table(entries) => {
                        let Some(n) = k.object_count() else {
                            return self.invalid("tensor tables need a finite category");
                        };
                        let mut t = vec![None; (n * n) as usize];
                        for (a, b, c) in entries {
                            let (a, b, c) = (self.object(&k, a)?, self.object(&k, b)?, self.object(&k, c)?);
                            t[(a * n + b) as usize] = Some(c);
                        }
                        match t.iter().position(Option::is_none) {
                            Some(i) => {
                                let (a, b) = (i as u64 / n, i as u64 % n);
                                return self.invalid(format!("no tensor for ({}, {})", k.object_name(a), k.object_name(b)));
                            }
                            None => TensorRule::Table(t.into_iter().map(Option::unwrap).collect()),
                        }
                    }
                };
                let unit = unit.as_ref().map(|u| self.object(&k, u)).transpose()?;
                let ms = self.core(MonoidalStructure::new(m.name.clone(), &k, rule, unit, self.ws.bounds.probes))?;
                let p = self.core(from_monoidal(&ms))?;
                Ok(Monoidal::Strict(ms, p))
            }
        }
    }
}
