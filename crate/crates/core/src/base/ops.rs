use std::collections::HashMap;
use std::sync::Arc;


use crate::base::nat::{family_hom, global_nats, FamilyHom};
use crate::base::object::{BackendTag, BaseMorphism, BaseObject};
use crate::base::shape::Shape;
use crate::base::unionfind::UnionFind;
use crate::error::{Error, Result};

/// A map between two base objects given sort by sort.
pub type SortedMap = Vec<Vec<usize>>;

/// The enrichment base: finite presheaves on a site, with `FinSet` and
/// `Bool2` as the one-sorted special cases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Base {
    tag: BackendTag,
    site: Arc<Shape>,
}

/// A covariant functor from an index shape into the base.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub objects: Vec<BaseObject>,
    /// `maps[u]` sends `objects[src u]` to `objects[tgt u]`.
    pub maps: Vec<SortedMap>,
}

/// A functor `d^op × d -> V`.
#[derive(Clone, Debug)]
pub struct Bifunctor {
    /// `values[c * n + c']` is `T(c, c')`.
    pub values: Vec<BaseObject>,
    /// `left[u][c']: T(tgt u, c') -> T(src u, c')`.
    pub left: Vec<Vec<SortedMap>>,
    /// `right[u][c]: T(c, src u) -> T(c, tgt u)`.
    pub right: Vec<Vec<SortedMap>>,
}

#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: BaseObject,
    /// `injections[c][sort][x]`.
    pub injections: Vec<SortedMap>,
}

#[derive(Clone, Debug)]
pub struct Limit {
    pub object: BaseObject,
    /// `elements[sort][k][c]` is the component at `c` of element `k`.
    pub elements: Vec<Vec<Vec<usize>>>,
}

impl Limit {
    pub fn projection(&self, c: usize) -> SortedMap {
        self.elements.iter().map(|els| els.iter().map(|t| t[c]).collect()).collect()
    }
}

impl Base {
    pub fn finset() -> Base {
        Base { tag: BackendTag::FinSet, site: Arc::new(Shape::terminal()) }
    }

    pub fn bool2() -> Base {
        Base { tag: BackendTag::Bool2, site: Arc::new(Shape::terminal()) }
    }

    pub fn fin_presheaf(site: Shape) -> Base {
        Base { tag: BackendTag::FinPresheaf, site: Arc::new(site) }
    }

    pub fn tag(&self) -> BackendTag {
        self.tag
    }

    pub fn site(&self) -> &Arc<Shape> {
        &self.site
    }

    pub fn sorts(&self) -> usize {
        self.site.object_count()
    }

    pub fn is_single_sorted(&self) -> bool {
        self.tag != BackendTag::FinPresheaf
    }

    pub fn name(&self) -> String {
        match self.tag {
            BackendTag::FinSet => "FinSet".into(),
            BackendTag::Bool2 => "Bool2".into(),
            BackendTag::FinPresheaf => format!("FinPresheaf({})", self.site.name()),
        }
    }

    pub fn check(&self, x: &BaseObject) -> Result<()> {
        if x.tag() != self.tag || x.sorts() != self.sorts() {
            return Err(Error::BackendMismatch(format!(
                "{:?} object with {} sorts used with base {}",
                x.tag(),
                x.sorts(),
                self.name()
            )));
        }
        Ok(())
    }

    /// The constant presheaf on an `n`-element set, truncated for `Bool2`.
    pub fn constant(&self, n: usize) -> BaseObject {
        let n = if self.tag == BackendTag::Bool2 { n.min(1) } else { n };
        let sizes = vec![n; self.sorts()];
        let restrict = (0..self.site.arrow_count()).map(|_| (0..n).collect()).collect();
        BaseObject::from_parts(self.tag, sizes, restrict)
    }

    pub fn unit(&self) -> BaseObject {
        self.constant(1)
    }

    pub fn initial(&self) -> BaseObject {
        self.constant(0)
    }

    pub fn terminal(&self) -> BaseObject {
        self.constant(1)
    }

    pub fn from_bool(&self, b: bool) -> BaseObject {
        self.constant(usize::from(b))
    }

    /// A one-sorted object with `n` elements; for `FinPresheaf` this is the
    /// constant presheaf.
    pub fn object_of_size(&self, n: usize) -> Result<BaseObject> {
        if self.tag == BackendTag::Bool2 && n > 1 {
            return Err(Error::InvalidDiagram(format!("Bool2 carrier of size {n}")));
        }
        Ok(self.constant(n))
    }

    pub fn presheaf(&self, sizes: Vec<usize>, restrict: Vec<Vec<usize>>) -> Result<BaseObject> {
        if self.tag != BackendTag::FinPresheaf {
            return Err(Error::BackendMismatch(format!("presheaf data for base {}", self.name())));
        }
        BaseObject::presheaf(&self.site, sizes, restrict)
    }

    /// Identifies all elements of each carrier for `Bool2`; identity otherwise.
    pub fn truncate(&self, x: BaseObject) -> BaseObject {
        if self.tag == BackendTag::Bool2 && x.card() > 1 {
            self.constant(1)
        } else {
            x
        }
    }

    /// Map from carriers into their truncation.
    fn truncate_map(&self, x: &BaseObject) -> SortedMap {
        if self.tag == BackendTag::Bool2 {
            vec![vec![0; x.card()]]
        } else {
            x.sizes().iter().map(|&n| (0..n).collect()).collect()
        }
    }

    /// Pointwise product; the pair `(a, b)` is encoded as `a * |y| + b`.
    pub fn tensor(&self, x: &BaseObject, y: &BaseObject) -> Result<BaseObject> {
        self.check(x)?;
        self.check(y)?;
        let sizes: Vec<usize> = x.sizes().iter().zip(y.sizes()).map(|(a, b)| a * b).collect();
        let restrict = (0..self.site.arrow_count())
            .map(|f| {
                let ny = y.size(self.site.arrow(f).tgt);
                let nys = y.size(self.site.arrow(f).src);
                (0..sizes[self.site.arrow(f).tgt])
                    .map(|p| x.restrict(f, p / ny) * nys + y.restrict(f, p % ny))
                    .collect()
            })
            .collect();
        Ok(BaseObject::from_parts(self.tag, sizes, restrict))
    }

    pub fn tensor_all(&self, xs: &[&BaseObject]) -> Result<BaseObject> {
        let mut acc = self.unit();
        for x in xs {
            acc = self.tensor(&acc, x)?;
        }
        Ok(acc)
    }

    /// The internal hom `[x, y]` with its elements.
    pub fn hom(&self, x: &BaseObject, y: &BaseObject, budget: u64) -> Result<FamilyHom> {
        self.check(x)?;
        self.check(y)?;
        family_hom(&self.site, self.tag, std::slice::from_ref(x), std::slice::from_ref(y), &[], budget)
    }

    pub fn hom_object(&self, x: &BaseObject, y: &BaseObject, budget: u64) -> Result<BaseObject> {
        Ok(self.hom(x, y, budget)?.object)
    }

    /// Morphisms `x -> y` of the underlying category.
    pub fn morphisms(&self, x: &BaseObject, y: &BaseObject, budget: u64) -> Result<Vec<BaseMorphism>> {
        self.check(x)?;
        self.check(y)?;
        let nats = global_nats(&self.site, std::slice::from_ref(x), std::slice::from_ref(y), &[], false, budget, None)?;
        Ok(nats
            .into_iter()
            .map(|components| BaseMorphism { source: x.clone(), target: y.clone(), components })
            .collect())
    }

    pub fn iso(&self, x: &BaseObject, y: &BaseObject, budget: u64) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        if x.sizes() != y.sizes() {
            return Ok(false);
        }
        if self.tag != BackendTag::FinPresheaf {
            return Ok(true);
        }
        let found = global_nats(&self.site, std::slice::from_ref(x), std::slice::from_ref(y), &[], true, budget, Some(1))?;
        Ok(!found.is_empty())
    }

    pub fn check_diagram(&self, shape: &Shape, d: &Diagram) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if d.objects.len() != shape.object_count() || d.maps.len() != shape.arrow_count() {
            return bad("diagram arity does not match its index shape".into());
        }
        for x in &d.objects {
            self.check(x)?;
        }
        for (u, arrow) in shape.arrows().iter().enumerate() {
            let (s, t) = (&d.objects[arrow.src], &d.objects[arrow.tgt]);
            let m = BaseMorphism::new(s.clone(), t.clone(), d.maps[u].clone())
                .map_err(|_| Error::InvalidDiagram(format!("map of {} is not total", arrow.name)))?;
            if !m.is_natural(&self.site) {
                return bad(format!("map of {} is not a base morphism", arrow.name));
            }
            if shape.is_identity(u) && m != BaseMorphism::identity(s) {
                return bad(format!("identity {} is not sent to an identity", arrow.name));
            }
        }
        for f in 0..shape.arrow_count() {
            for g in 0..shape.arrow_count() {
                if shape.arrow(f).tgt != shape.arrow(g).src {
                    continue;
                }
                let gf = shape.compose(g, f);
                let ok = (0..self.sorts()).all(|k| {
                    d.maps[f][k].iter().enumerate().all(|(x, &y)| d.maps[g][k][y] == d.maps[gf][k][x])
                });
                if !ok {
                    return bad(format!(
                        "diagram does not preserve {} ∘ {}",
                        shape.arrow(g).name,
                        shape.arrow(f).name
                    ));
                }
            }
        }
        Ok(())
    }

    /// Conical colimit: disjoint union modulo the zigzag relation.
    pub fn colimit(&self, shape: &Shape, d: &Diagram) -> Result<Colimit> {
        self.check_diagram(shape, d)?;
        let mut offsets = Vec::new();
        let mut classes = Vec::new();
        let mut sizes = Vec::new();
        for k in 0..self.sorts() {
            let mut off = vec![0; d.objects.len() + 1];
            for (c, x) in d.objects.iter().enumerate() {
                off[c + 1] = off[c] + x.size(k);
            }
            let mut uf = UnionFind::new(off[d.objects.len()]);
            for (u, arrow) in shape.arrows().iter().enumerate() {
                for (x, &y) in d.maps[u][k].iter().enumerate() {
                    uf.union(off[arrow.src] + x, off[arrow.tgt] + y);
                }
            }
            let (of, n) = uf.classes();
            sizes.push(n);
            classes.push(of);
            offsets.push(off);
        }
        let restrict = (0..self.site.arrow_count())
            .map(|f| {
                let (s, t) = (self.site.arrow(f).src, self.site.arrow(f).tgt);
                let mut map = vec![0; sizes[t]];
                for (c, x) in d.objects.iter().enumerate() {
                    for e in 0..x.size(t) {
                        map[classes[t][offsets[t][c] + e]] = classes[s][offsets[s][c] + x.restrict(f, e)];
                    }
                }
                map
            })
            .collect();
        let object = BaseObject::from_parts(self.tag, sizes, restrict);
        let injections = (0..d.objects.len())
            .map(|c| {
                (0..self.sorts())
                    .map(|k| (0..d.objects[c].size(k)).map(|e| classes[k][offsets[k][c] + e]).collect())
                    .collect()
            })
            .collect();
        Ok(self.truncated(Colimit { object, injections }))
    }

    fn truncated(&self, c: Colimit) -> Colimit {
        if self.tag != BackendTag::Bool2 {
            return c;
        }
        let t = self.truncate_map(&c.object);
        Colimit {
            object: self.truncate(c.object),
            injections: c
                .injections
                .into_iter()
                .map(|inj| vec![inj[0].iter().map(|&x| t[0][x]).collect()])
                .collect(),
        }
    }

    /// Conical limit: compatible families in the product.
    pub fn limit(&self, shape: &Shape, d: &Diagram) -> Result<Limit> {
        self.check_diagram(shape, d)?;
        let n = shape.object_count();
        let constraints: Vec<Constraint> = shape
            .non_identity_arrows()
            .map(|u| {
                let a = shape.arrow(u);
                Constraint { first: a.src, second: a.tgt, left: Side::Map(u), right: Side::Id }
            })
            .collect();
        let elements = (0..self.sorts())
            .map(|k| {
                let domains: Vec<usize> = d.objects.iter().map(|x| x.size(k)).collect();
                compatible_families(n, &domains, &constraints, |side, c, x| match side {
                    Side::Map(u) => {
                        debug_assert_eq!(shape.arrow(u).src, c);
                        d.maps[u][k][x]
                    }
                    Side::Id => x,
                    Side::Other(_) => unreachable!(),
                })
            })
            .collect();
        Ok(self.limit_from_elements(elements, |f, c, x| d.objects[c].restrict(f, x)))
    }

    pub fn check_bifunctor(&self, shape: &Shape, t: &Bifunctor) -> Result<()> {
        let n = shape.object_count();
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if t.values.len() != n * n || t.left.len() != shape.arrow_count() || t.right.len() != shape.arrow_count() {
            return bad("bifunctor arity does not match its index shape".into());
        }
        for v in &t.values {
            self.check(v)?;
        }
        for (u, a) in shape.arrows().iter().enumerate() {
            for c in 0..n {
                let l = BaseMorphism::new(t.values[a.tgt * n + c].clone(), t.values[a.src * n + c].clone(), t.left[u][c].clone());
                let r = BaseMorphism::new(t.values[c * n + a.src].clone(), t.values[c * n + a.tgt].clone(), t.right[u][c].clone());
                match (l, r) {
                    (Ok(l), Ok(r)) if l.is_natural(&self.site) && r.is_natural(&self.site) => {
                        if shape.is_identity(u)
                            && (l != BaseMorphism::identity(&l.source) || r != BaseMorphism::identity(&r.source))
                        {
                            return bad(format!("identity {} acts non-trivially", a.name));
                        }
                    }
                    _ => return bad(format!("action of {} is not a base morphism", a.name)),
                }
            }
        }
        // left and right actions commute and compose
        for (u, a) in shape.arrows().iter().enumerate() {
            for (w, b) in shape.arrows().iter().enumerate() {
                for k in 0..self.sorts() {
                    // T(u, -) after T(-, w) equals T(-, w) after T(u, -) on T(tgt u, src w)
                    let x_count = t.values[a.tgt * n + b.src].size(k);
                    for x in 0..x_count {
                        let p = t.right[w][a.src][k][t.left[u][b.src][k][x]];
                        let q = t.left[u][b.tgt][k][t.right[w][a.tgt][k][x]];
                        if p != q {
                            return bad(format!("actions of {} and {} do not commute", a.name, b.name));
                        }
                    }
                }
                if a.tgt == b.src {
                    let wu = shape.compose(w, u);
                    for c in 0..n {
                        for k in 0..self.sorts() {
                            for x in 0..t.values[b.tgt * n + c].size(k) {
                                if t.left[wu][c][k][x] != t.left[u][c][k][t.left[w][c][k][x]] {
                                    return bad(format!("contravariant action fails at {} ∘ {}", b.name, a.name));
                                }
                            }
                            for x in 0..t.values[c * n + a.src].size(k) {
                                if t.right[wu][c][k][x] != t.right[w][c][k][t.right[u][c][k][x]] {
                                    return bad(format!("covariant action fails at {} ∘ {}", b.name, a.name));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `∫_c T(c, c)`: families `t_c` with `T(c, u) t_c = T(u, c') t_c'`.
    pub fn end(&self, shape: &Shape, t: &Bifunctor) -> Result<Limit> {
        self.check_bifunctor(shape, t)?;
        let n = shape.object_count();
        let constraints: Vec<Constraint> = shape
            .non_identity_arrows()
            .map(|u| {
                let a = shape.arrow(u);
                Constraint { first: a.src, second: a.tgt, left: Side::Map(u), right: Side::Other(u) }
            })
            .collect();
        let elements = (0..self.sorts())
            .map(|k| {
                let domains: Vec<usize> = (0..n).map(|c| t.values[c * n + c].size(k)).collect();
                compatible_families(n, &domains, &constraints, |side, c, x| match side {
                    Side::Map(u) => t.right[u][c][k][x],
                    Side::Other(u) => t.left[u][c][k][x],
                    Side::Id => x,
                })
            })
            .collect();
        Ok(self.limit_from_elements(elements, |f, c, x| t.values[c * n + c].restrict(f, x)))
    }

    fn limit_from_elements(
        &self,
        elements: Vec<Vec<Vec<usize>>>,
        restrict_component: impl Fn(usize, usize, usize) -> usize,
    ) -> Limit {
        let index: Vec<HashMap<&Vec<usize>, usize>> = elements
            .iter()
            .map(|els| els.iter().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        let restrict = (0..self.site.arrow_count())
            .map(|f| {
                let (s, t) = (self.site.arrow(f).src, self.site.arrow(f).tgt);
                elements[t]
                    .iter()
                    .map(|e| {
                        let r: Vec<usize> =
                            e.iter().enumerate().map(|(c, &x)| restrict_component(f, c, x)).collect();
                        index[s][&r]
                    })
                    .collect()
            })
            .collect();
        let sizes = elements.iter().map(Vec::len).collect();
        let object = BaseObject::from_parts(self.tag, sizes, restrict);
        drop(index);
        Limit { object, elements }
    }

    /// `∫^c T(c, c)`: the sum of the diagonal modulo
    /// `T(u, c) z ~ T(c', u) z` for `z ∈ T(c', c)`.
    pub fn coend(&self, shape: &Shape, t: &Bifunctor) -> Result<Colimit> {
        self.check_bifunctor(shape, t)?;
        let n = shape.object_count();
        let mut classes = Vec::new();
        let mut offsets = Vec::new();
        let mut sizes = Vec::new();
        for k in 0..self.sorts() {
            let mut off = vec![0; n + 1];
            for c in 0..n {
                off[c + 1] = off[c] + t.values[c * n + c].size(k);
            }
            let mut uf = UnionFind::new(off[n]);
            for u in shape.non_identity_arrows() {
                let (c, c2) = (shape.arrow(u).src, shape.arrow(u).tgt);
                for z in 0..t.values[c2 * n + c].size(k) {
                    uf.union(off[c] + t.left[u][c][k][z], off[c2] + t.right[u][c2][k][z]);
                }
            }
            let (of, count) = uf.classes();
            classes.push(of);
            offsets.push(off);
            sizes.push(count);
        }
        let restrict = (0..self.site.arrow_count())
            .map(|f| {
                let (s, tg) = (self.site.arrow(f).src, self.site.arrow(f).tgt);
                let mut map = vec![0; sizes[tg]];
                for c in 0..n {
                    let x = &t.values[c * n + c];
                    for e in 0..x.size(tg) {
                        map[classes[tg][offsets[tg][c] + e]] = classes[s][offsets[s][c] + x.restrict(f, e)];
                    }
                }
                map
            })
            .collect();
        let object = BaseObject::from_parts(self.tag, sizes, restrict);
        let injections = (0..n)
            .map(|c| {
                (0..self.sorts())
                    .map(|k| (0..t.values[c * n + c].size(k)).map(|e| classes[k][offsets[k][c] + e]).collect())
                    .collect()
            })
            .collect();
        Ok(self.truncated(Colimit { object, injections }))
    }
}

#[derive(Clone, Copy, Debug)]
enum Side {
    Id,
    Map(usize),
    Other(usize),
}

/// `apply(left, first, x_first) == apply(right, second, x_second)`.
#[derive(Clone, Copy, Debug)]
struct Constraint {
    first: usize,
    second: usize,
    left: Side,
    right: Side,
}

/// Backtracking over `Π domains[c]`, checking each constraint as soon as
/// both of its variables are assigned. Results are in lexicographic order.
fn compatible_families(
    n: usize,
    domains: &[usize],
    constraints: &[Constraint],
    apply: impl Fn(Side, usize, usize) -> usize,
) -> Vec<Vec<usize>> {
    // constraints checkable once variable c is assigned
    let mut ready = vec![Vec::new(); n];
    for k in constraints {
        ready[k.first.max(k.second)].push(*k);
    }
    let mut out = Vec::new();
    let mut current = vec![0; n];
    fn go(
        c: usize,
        n: usize,
        domains: &[usize],
        ready: &[Vec<Constraint>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        apply: &dyn Fn(Side, usize, usize) -> usize,
    ) {
        if c == n {
            out.push(current.clone());
            return;
        }
        for x in 0..domains[c] {
            current[c] = x;
            let ok = ready[c].iter().all(|k| {
                apply(k.left, k.first, current[k.first]) == apply(k.right, k.second, current[k.second])
            });
            if ok {
                go(c + 1, n, domains, ready, current, out, apply);
            }
        }
    }
    go(0, n, domains, &ready, &mut current, &mut out, &apply);
    out
}

impl Diagram {
    /// The diagram sending every arrow to the identity of one object.
    pub fn constant(shape: &Shape, x: &BaseObject) -> Diagram {
        let id: SortedMap = x.sizes().iter().map(|&n| (0..n).collect()).collect();
        Diagram { objects: vec![x.clone(); shape.object_count()], maps: vec![id; shape.arrow_count()] }
    }
}

impl Bifunctor {
    /// `T(c, c') = d(c, c')` as a constant base object.
    pub fn hom_functor(base: &Base, shape: &Shape) -> Bifunctor {
        let n = shape.object_count();
        let homs: Vec<Vec<usize>> =
            (0..n * n).map(|p| shape.hom(p / n, p % n).collect()).collect();
        let values = homs.iter().map(|h| base.constant(h.len())).collect();
        let pos = |p: usize, f: usize| homs[p].iter().position(|&x| x == f).expect("arrow in hom");
        let sorts = base.sorts();
        let left = (0..shape.arrow_count())
            .map(|u| {
                let a = shape.arrow(u);
                (0..n)
                    .map(|c| {
                        let map: Vec<usize> = homs[a.tgt * n + c]
                            .iter()
                            .map(|&f| pos(a.src * n + c, shape.compose(f, u)))
                            .collect();
                        vec![map; sorts]
                    })
                    .collect()
            })
            .collect();
        let right = (0..shape.arrow_count())
            .map(|u| {
                let a = shape.arrow(u);
                (0..n)
                    .map(|c| {
                        let map: Vec<usize> = homs[c * n + a.src]
                            .iter()
                            .map(|&f| pos(c * n + a.tgt, shape.compose(u, f)))
                            .collect();
                        vec![map; sorts]
                    })
                    .collect()
            })
            .collect();
        let t = Bifunctor { values, left, right };
        if base.tag() == BackendTag::Bool2 {
            t.truncated()
        } else {
            t
        }
    }

    fn truncated(self) -> Bifunctor {
        let clip = |m: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            m.into_iter().map(|v| v.into_iter().map(|_| 0).take(1).collect()).collect()
        };
        Bifunctor {
            values: self.values,
            left: self.left.into_iter().map(|v| v.into_iter().map(clip).collect()).collect(),
            right: self.right.into_iter().map(|v| v.into_iter().map(clip).collect()).collect(),
        }
    }
}
