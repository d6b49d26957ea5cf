//! Case generators and invariants for each replay suite.

use serde_json::{json, Value};
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::day::{closedness_check, convolve, from_monoidal, internal_hom, Closedness, MonoidalStructure, Side, TensorRule};
use spcalc_core::isbell::dedekind_macneille_fixed_points;
use spcalc_core::kan::{adjunction_check, continuity_check, restrict_along};
use spcalc_core::presheaf::{completeness_check, representably_small_check, Completeness, FunctorCategoryTarget, LimitClass, Probe, SmallPresheaf};
use spcalc_core::Bounds;

use crate::gen;
use crate::replay::{Case, Fault};

fn category_json(k: &Category) -> Value {
    match k.to_shape() {
        Some(s) => {
            let arrows: Vec<(usize, usize)> = s.non_identity_arrows().map(|u| (s.arrow(u).src, s.arrow(u).tgt)).collect();
            json!({ "name": k.name(), "objects": s.object_count(), "arrows": arrows })
        }
        None => json!({ "name": k.name() }),
    }
}

fn card(f: &SmallPresheaf) -> usize {
    f.values().iter().map(|v| v.card()).sum()
}

fn err(e: spcalc_core::Error) -> String {
    format!("engine error: {e}")
}

/// The full subcategory without `drop`, and the restriction of `g` to it.
fn without(k: &Category, g: &SmallPresheaf, drop: Obj) -> Option<(Category, SmallPresheaf)> {
    let keep: Vec<Obj> = k.enumerate(usize::MAX).into_iter().filter(|&b| b != drop).collect();
    if keep.is_empty() {
        return None;
    }
    let (sub, inc) = k.full_subcategory(format!("{}-{drop}", k.name()), &keep).ok()?;
    let r = restrict_along(&inc, g, &Bounds::default()).ok()?;
    Some((sub, r.certificate()?.clone()))
}

pub struct YonedaCase {
    pub k: Category,
    pub g: SmallPresheaf,
    pub a: Obj,
}

impl Case for YonedaCase {
    fn size(&self) -> usize {
        self.k.object_count().unwrap_or(0) as usize + card(&self.g)
    }

    fn describe(&self) -> Value {
        json!({ "category": category_json(&self.k), "presheaf": crate::record::presheaf(&self.g), "at": self.a })
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let y = SmallPresheaf::representable(&self.k, self.a).map_err(err)?;
        let mut hom = y.hom_object(&self.g, bounds.iso_budget).map_err(err)?.card();
        if Fault::fires(fault, self.size()) {
            hom += 1;
        }
        let value = self.g.evaluate_value(self.a).map_err(err)?.card();
        if hom == value {
            Ok(())
        } else {
            Err(format!("hom(Y {}, G) has {hom} elements but G({}) has {value}", self.a, self.a))
        }
    }

    fn shrink(&self) -> Vec<Self> {
        let objs = self.k.enumerate(usize::MAX);
        objs.iter()
            .filter(|&&b| b != self.a)
            .filter_map(|&b| {
                let (k, g) = without(&self.k, &self.g, b)?;
                let a = objs.iter().filter(|&&x| x != b).position(|&x| x == self.a)? as Obj;
                Some(YonedaCase { k, g, a })
            })
            .collect()
    }
}

pub fn yoneda(seed: u64, n: usize) -> Vec<YonedaCase> {
    let mut r = gen::rng(seed, 1);
    (0..n)
        .map(|_| {
            let k = gen::category(&mut r, 4, Base::finset());
            let g = gen::explicit_presheaf(&mut r, &k, 2);
            let a = rand::Rng::gen_range(&mut r, 0..k.object_count().expect("finite"));
            YonedaCase { k, g, a }
        })
        .collect()
}

pub struct LatticeCase {
    pub k: Category,
}

impl Case for LatticeCase {
    fn size(&self) -> usize {
        self.k.object_count().unwrap_or(0) as usize
    }

    fn describe(&self) -> Value {
        category_json(&self.k)
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let r = completeness_check(&self.k, LimitClass::FiniteLimits, bounds).map_err(err)?;
        if Fault::fires(fault, self.size()) {
            return Err("injected: limit reported NotSmall".into());
        }
        match (&r.verdict, &r.failure) {
            (Completeness::Complete, _) => Ok(()),
            (_, Some((d, w))) => Err(format!("limit of {d} is not small: {}", w.reason)),
            (v, None) => Err(format!("completeness is {}", v.label())),
        }
    }
}

pub fn completeness(seed: u64, n: usize) -> Vec<LatticeCase> {
    let mut r = gen::rng(seed, 2);
    (0..n)
        .map(|_| {
            let s = gen::lattice_shape(&mut r, 5);
            LatticeCase { k: Category::finite(s.name().to_string(), Base::finset(), s).expect("lattices are categories") }
        })
        .collect()
}

pub struct InclusionCase {
    pub l: Category,
    pub objects: Vec<Obj>,
}

impl InclusionCase {
    fn functor(&self) -> Result<Functor, String> {
        Ok(self.l.full_subcategory("S", &self.objects).map_err(err)?.1)
    }
}

impl Case for InclusionCase {
    fn size(&self) -> usize {
        self.l.object_count().unwrap_or(0) as usize + self.objects.len()
    }

    fn describe(&self) -> Value {
        json!({ "category": category_json(&self.l), "objects": self.objects })
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let f = self.functor()?;
        let k = f.source().clone();
        let corpus: Vec<(SmallPresheaf, SmallPresheaf)> = representable_pairs(&k, &self.l)?;
        let r = adjunction_check(&f, &corpus, bounds).map_err(err)?;
        if Fault::fires(fault, self.size()) {
            return Err("injected: hom sizes differ".into());
        }
        match r.failures.first() {
            None => Ok(()),
            Some(m) => Err(m.clone()),
        }
    }

    fn shrink(&self) -> Vec<Self> {
        (0..self.objects.len())
            .filter(|_| self.objects.len() > 1)
            .map(|i| {
                let mut objects = self.objects.clone();
                objects.remove(i);
                InclusionCase { l: self.l.clone(), objects }
            })
            .collect()
    }
}

/// Every `(Y a, Y b)` with `a` in `k` and `b` in `l`.
fn representable_pairs(k: &Category, l: &Category) -> Result<Vec<(SmallPresheaf, SmallPresheaf)>, String> {
    let mut out = Vec::new();
    for a in k.enumerate(usize::MAX) {
        for b in l.enumerate(usize::MAX) {
            out.push((SmallPresheaf::representable(k, a).map_err(err)?, SmallPresheaf::representable(l, b).map_err(err)?));
        }
    }
    Ok(out)
}

pub fn adjunction(seed: u64, n: usize) -> Vec<InclusionCase> {
    use rand::Rng;
    let mut r = gen::rng(seed, 3);
    (0..n)
        .map(|_| {
            let l = gen::category(&mut r, 4, Base::finset());
            let all = l.enumerate(usize::MAX);
            let mut objects: Vec<Obj> = all.iter().copied().filter(|_| r.gen_bool(0.6)).collect();
            if objects.is_empty() {
                objects.push(all[r.gen_range(0..all.len())]);
            }
            InclusionCase { l, objects }
        })
        .collect()
}

pub struct MonotoneCase {
    pub f: Functor,
}

impl Case for MonotoneCase {
    fn size(&self) -> usize {
        (self.f.source().object_count().unwrap_or(0) + self.f.target().object_count().unwrap_or(0)) as usize
    }

    fn describe(&self) -> Value {
        let objs: Vec<Obj> = self.f.source().enumerate(usize::MAX).into_iter().map(|a| self.f.map_object(a)).collect();
        json!({ "source": category_json(self.f.source()), "target": category_json(self.f.target()), "objects": objs })
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let r = continuity_check(&self.f, LimitClass::FiniteLimits, bounds).map_err(err)?;
        let mut bad = r.unmatched();
        if Fault::fires(fault, self.size()) {
            bad += 1;
        }
        match bad {
            0 => Ok(()),
            _ => {
                let s = r.samples.iter().find(|s| !s.matched());
                Err(format!("{bad} unmatched samples; first: {}", s.map(|s| s.diagram.as_str()).unwrap_or("injected")))
            }
        }
    }
}

pub fn continuity(seed: u64, n: usize) -> Vec<MonotoneCase> {
    let mut r = gen::rng(seed, 4);
    (0..n)
        .map(|_| {
            let s1 = gen::lattice_shape(&mut r, 5);
            let s2 = gen::lattice_shape(&mut r, 5);
            let l1 = Category::finite("L1", Base::finset(), s1).expect("lattice");
            let l2 = Category::finite("L2", Base::finset(), s2).expect("lattice");
            MonotoneCase { f: gen::monotone_map(&mut r, &l1, &l2) }
        })
        .collect()
}

pub enum ConvolutionCase {
    /// `hom(F ⊗ G, H) ≅ hom(F, [G, H])` on `Z/2` with xor; value sizes of
    /// `F`, `G`, `H` at both objects.
    TensorHom([(usize, usize); 3]),
    /// A named closedness instance and its expected outcome.
    Closed(&'static str),
}

fn z2() -> (Category, spcalc_core::day::PromonoidalStructure) {
    let k = Category::finite("Z2", Base::finset(), Shape::discrete(2)).expect("discrete");
    let m = MonoidalStructure::new("xor", &k, TensorRule::Table(vec![0, 1, 1, 0]), Some(0), 16).expect("xor is monoidal");
    let p = from_monoidal(&m).expect("strict");
    (k, p)
}

fn on_z2(k: &Category, (a, b): (usize, usize)) -> Result<SmallPresheaf, String> {
    SmallPresheaf::from_values(k, vec![0, 1], vec![k.base().constant(a), k.base().constant(b)]).map_err(err)
}

impl Case for ConvolutionCase {
    fn size(&self) -> usize {
        match self {
            ConvolutionCase::TensorHom(v) => v.iter().map(|(a, b)| a + b).sum(),
            ConvolutionCase::Closed(_) => 0,
        }
    }

    fn describe(&self) -> Value {
        match self {
            ConvolutionCase::TensorHom(v) => json!({ "z2_sizes": v }),
            ConvolutionCase::Closed(name) => json!({ "closedness": name }),
        }
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        match self {
            ConvolutionCase::TensorHom([f, g, h]) => {
                let (k, p) = z2();
                let (f, g, h) = (on_z2(&k, *f)?, on_z2(&k, *g)?, on_z2(&k, *h)?);
                let fg = convolve(&f, &g, &p).map_err(err)?;
                let mut left = fg.hom_object(&h, bounds.iso_budget).map_err(err)?.card();
                if Fault::fires(fault, self.size()) {
                    left += 1;
                }
                let v = internal_hom(&g, &h, &p, Side::Right, bounds).map_err(err)?;
                let gh = v.certificate().ok_or_else(|| format!("[G, H] is {}", v.label()))?;
                let right = f.hom_object(gh, bounds.iso_budget).map_err(err)?.card();
                if left == right {
                    Ok(())
                } else {
                    Err(format!("hom(F*G, H) has {left} elements, hom(F, [G,H]) has {right}"))
                }
            }
            ConvolutionCase::Closed(name) => {
                let (verdict, expect_ok) = match *name {
                    "xor" => (closedness_check(&z2().1, bounds).map_err(err)?.verdict, true),
                    "omega-op-max" => {
                        let k = Category::builtin("OmegaChain", Base::bool2()).map_err(err)?.opposite();
                        let m = MonoidalStructure::new("max", &k, TensorRule::Max, Some(0), 8).map_err(err)?;
                        (closedness_check(&from_monoidal(&m).map_err(err)?, bounds).map_err(err)?.verdict, true)
                    }
                    _ => {
                        let k = Category::builtin("DiscreteNat", Base::finset()).map_err(err)?;
                        let m = MonoidalStructure::unchecked("min", &k, TensorRule::Min, None);
                        (closedness_check(&from_monoidal(&m).map_err(err)?, bounds).map_err(err)?.verdict, false)
                    }
                };
                let closed = matches!(verdict, Closedness::Closed | Closedness::ClosedOnProbes);
                if closed == expect_ok && !matches!(verdict, Closedness::Unknown { .. }) {
                    Ok(())
                } else {
                    Err(format!("{name}: closedness {verdict:?}"))
                }
            }
        }
    }
}

/// Exhaustive over sizes at most 2; the count argument is ignored.
pub fn convolution(_seed: u64, _n: usize) -> Vec<ConvolutionCase> {
    let sizes: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for &f in &sizes {
        for &g in &sizes {
            for &h in &sizes {
                out.push(ConvolutionCase::TensorHom([f, g, h]));
            }
        }
    }
    for name in ["xor", "omega-op-max", "discrete-nat-min"] {
        out.push(ConvolutionCase::Closed(name));
    }
    out
}

pub struct PosetCase {
    pub n: usize,
    /// `le[a * n + b]`.
    pub le: Vec<bool>,
}

impl PosetCase {
    fn category(&self) -> Result<Category, String> {
        let n = self.n;
        Category::finite(format!("P{n}"), Base::bool2(), Shape::thin(format!("P{n}"), n, |a, b| self.le[a * n + b])).map_err(err)
    }

    /// Subsets closed under the upper-then-lower bound operator, by brute force.
    fn cut_count(&self) -> usize {
        let n = self.n;
        let le = |a: usize, b: usize| self.le[a * n + b];
        let closure = |s: u32| -> u32 {
            let up = (0..n).filter(|&u| (0..n).all(|x| s >> x & 1 == 0 || le(x, u))).fold(0u32, |m, u| m | 1 << u);
            (0..n).filter(|&l| (0..n).all(|u| up >> u & 1 == 0 || le(l, u))).fold(0u32, |m, l| m | 1 << l)
        };
        (0..1u32 << n).filter(|&s| closure(s) == s).count()
    }
}

impl Case for PosetCase {
    fn size(&self) -> usize {
        self.n
    }

    fn describe(&self) -> Value {
        let n = self.n;
        let rel: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && self.le[a * n + b]).collect();
        json!({ "points": n, "le": rel })
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let k = self.category()?;
        let mut found = dedekind_macneille_fixed_points(&k, bounds).map_err(err)?.fixed_points.len();
        if Fault::fires(fault, self.size()) {
            found -= 1;
        }
        let expected = self.cut_count();
        if found == expected {
            Ok(())
        } else {
            Err(format!("{found} fixed points, {expected} cuts"))
        }
    }

    fn shrink(&self) -> Vec<Self> {
        let n = self.n;
        (0..n)
            .filter(|_| n > 1)
            .map(|drop| {
                let keep: Vec<usize> = (0..n).filter(|&x| x != drop).collect();
                let le = keep.iter().flat_map(|&a| keep.iter().map(move |&b| (a, b))).map(|(a, b)| self.le[a * n + b]).collect();
                PosetCase { n: n - 1, le }
            })
            .collect()
    }
}

pub fn dm(seed: u64, n: usize) -> Vec<PosetCase> {
    use rand::Rng;
    let mut r = gen::rng(seed, 5);
    (0..n)
        .map(|_| {
            let points = r.gen_range(1..=6);
            let s = gen::poset_shape(&mut r, points);
            let le = (0..points).flat_map(|a| (0..points).map(move |b| (a, b))).map(|(a, b)| s.hom(a, b).next().is_some()).collect();
            PosetCase { n: points, le }
        })
        .collect()
}

pub struct RepSmallCase {
    pub k: Category,
    pub s: SmallPresheaf,
}

impl Case for RepSmallCase {
    fn size(&self) -> usize {
        self.k.object_count().unwrap_or(0) as usize + card(&self.s)
    }

    fn describe(&self) -> Value {
        json!({ "category": category_json(&self.k), "presheaf": crate::record::presheaf(&self.s) })
    }

    fn check(&self, bounds: &Bounds, fault: Option<Fault>) -> Result<(), String> {
        let base = self.k.base();
        let probes: Vec<Probe> = (0..3).map(|n| Probe::Base(base.constant(n))).collect();
        let r = representably_small_check(&self.k, &self.s, &FunctorCategoryTarget::Base, &probes, bounds).map_err(err)?;
        if Fault::fires(fault, self.size()) {
            return Err("injected: probe hom reported NotSmall".into());
        }
        match r.verdicts.iter().position(|v| !v.is_small()) {
            None => Ok(()),
            Some(i) => Err(format!("probe of size {i} gives {}", r.verdicts[i].label())),
        }
    }

    fn shrink(&self) -> Vec<Self> {
        self.k
            .enumerate(usize::MAX)
            .into_iter()
            .filter_map(|b| without(&self.k, &self.s, b).map(|(k, s)| RepSmallCase { k, s }))
            .collect()
    }
}

pub fn repsmall(seed: u64, n: usize) -> Vec<RepSmallCase> {
    let mut r = gen::rng(seed, 6);
    (0..n)
        .map(|_| {
            let k = gen::category(&mut r, 4, Base::finset());
            let s = gen::explicit_presheaf(&mut r, &k, 2);
            RepSmallCase { k, s }
        })
        .collect()
}
