//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line with its wall time and limit; expected
//! values come from oracles written here, not from the engine.

use std::collections::BTreeSet;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use spcalc::gen;
use spcalc::replay::{run_suite, Suite};
use spcalc_core::base::{Base, BaseObject, Bifunctor, Diagram, Shape};
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::day::{closedness_check, convolve, from_monoidal, internal_hom, Closedness, MonoidalStructure, Side, TensorRule};
use spcalc_core::isbell::{dedekind_macneille_fixed_points, left_conjugate};
use spcalc_core::kan::{adjunction_check, continuity_check, restrict_along};
use spcalc_core::presheaf::{
    diagrams_in, pointwise_limit, representably_small_check, FunctorCategoryTarget, LimitClass, PresheafDiagram, Probe, SmallPresheaf,
    Variance, Verdict, Weight,
};
use spcalc_core::Bounds;

const SEED: u64 = 0x5eed;

/// Criteria run one at a time so that wall times are not shared.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Prints the criterion line and fails the test on a miss or overrun.
fn report(n: usize, title: &str, limit: Duration, start: Instant, failures: &[String]) {
    let took = start.elapsed();
    let pass = failures.is_empty() && took <= limit;
    println!(
        "criterion {n}: {} {title} ({} ms, limit {} s){}",
        if pass { "PASS" } else { "FAIL" },
        took.as_millis(),
        limit.as_secs(),
        failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
    );
    assert!(failures.is_empty(), "criterion {n}: {} failures, first: {}", failures.len(), failures[0]);
    assert!(took <= limit, "criterion {n}: took {took:?}, limit {limit:?}");
}

fn small(v: &Verdict) -> Option<&SmallPresheaf> {
    v.certificate()
}

fn sizes_at(f: &SmallPresheaf, objs: &[Obj]) -> Vec<usize> {
    objs.iter().map(|&a| f.evaluate_value(a).unwrap().card()).collect()
}

fn le(k: &Category, a: Obj, b: Obj) -> bool {
    k.hom_size(a, b) > 0
}

// ---------------------------------------------------------------- 1

/// Natural transformations `Y a => G` by exhaustive search over all
/// families `α_b: K(b, a) -> G(b)`, for `G` with support every object in
/// index order.
fn yoneda_oracle(k: &Category, g: &SmallPresheaf, a: Obj) -> usize {
    let n = k.object_count().unwrap() as usize;
    assert_eq!(g.support(), (0..n as Obj).collect::<Vec<_>>().as_slice());
    let sizes: Vec<usize> = (0..n).map(|b| g.value(b).card()).collect();
    // slots (b, u) for u in K(b, a)
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|b| (0..k.hom_size(b as Obj, a)).map(move |u| (b, u))).collect();
    let slot = |b: usize, u: usize| slots.iter().position(|&s| s == (b, u)).unwrap();
    let mut count = 0;
    let mut choice = vec![0usize; slots.len()];
    if slots.iter().any(|&(b, _)| sizes[b] == 0) {
        return 0;
    }
    loop {
        let natural = (0..n).all(|c| {
            (0..n).all(|b| {
                (0..k.hom_size(c as Obj, b as Obj)).all(|v| {
                    (0..k.hom_size(b as Obj, a)).all(|u| {
                        let uv = k.compose(c as Obj, b as Obj, a, u, v);
                        // action(c, b, v): G(b) -> G(c)
                        g.action(c, b, v)[0][choice[slot(b, u)]] == choice[slot(c, uv)]
                    })
                })
            })
        });
        count += usize::from(natural);
        let mut i = 0;
        loop {
            if i == slots.len() {
                return count;
            }
            choice[i] += 1;
            if choice[i] < sizes[slots[i].0] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_01_yoneda() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let cases = spcalc::suites::yoneda(SEED, 200);
    for (i, c) in cases.iter().enumerate() {
        let y = SmallPresheaf::representable(&c.k, c.a).unwrap();
        let hom = y.hom_object(&c.g, b.iso_budget).unwrap();
        let value = c.g.evaluate_value(c.a).unwrap();
        let expected = yoneda_oracle(&c.k, &c.g, c.a);
        if hom.card() != expected || value.card() != expected || !c.k.base().iso(&hom, &value, b.iso_budget).unwrap() {
            failures.push(format!("case {i}: hom {} value {} oracle {expected}", hom.card(), value.card()));
        }
    }
    report(1, "Yoneda on 200 triples", Duration::from_secs(10), start, &failures);
}

// ---------------------------------------------------------------- 2

/// Index shapes with at most three objects and no composites other than
/// identities.
fn index_shapes() -> Vec<Shape> {
    vec![
        Shape::discrete(1),
        Shape::discrete(2),
        Shape::discrete(3),
        Shape::walking_arrow(),
        Shape::parallel_pair(),
        Shape::span(),
        Shape::cospan(),
    ]
}

/// Every covariant diagram `d -> FinSet` with carriers of size at most `cap`.
fn all_diagrams(d: &Shape, cap: usize) -> Vec<Diagram> {
    let n = d.object_count();
    let mut out = Vec::new();
    for code in 0..(cap + 1).pow(n as u32) {
        let sizes: Vec<usize> = (0..n).map(|i| code / (cap + 1).pow(i as u32) % (cap + 1)).collect();
        let gens: Vec<usize> = d.non_identity_arrows().collect();
        let counts: Vec<usize> = gens.iter().map(|&u| sizes[d.arrow(u).tgt].pow(sizes[d.arrow(u).src] as u32)).collect();
        let total: usize = counts.iter().product();
        for mut pick in 0..total {
            let mut maps: Vec<Vec<Vec<usize>>> = (0..d.arrow_count()).map(|u| vec![(0..sizes[d.arrow(u).src]).collect()]).collect();
            for (g, &u) in gens.iter().enumerate() {
                let mut f = pick % counts[g];
                pick /= counts[g];
                let (s, t) = (sizes[d.arrow(u).src], sizes[d.arrow(u).tgt]);
                maps[u] = vec![(0..s)
                    .map(|_| {
                        let y = f % t;
                        f /= t;
                        y
                    })
                    .collect()];
            }
            out.push(Diagram { objects: sizes.iter().map(|&s| BaseObject::finset(s)).collect(), maps });
        }
    }
    out
}

/// Connected components of a graph by repeated relaxation of labels.
fn components(nodes: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..nodes).collect();
    loop {
        let mut changed = false;
        for &(x, y) in edges {
            let m = label[x].min(label[y]);
            if label[x] != m || label[y] != m {
                label[x] = m;
                label[y] = m;
                changed = true;
            }
        }
        if !changed {
            return label;
        }
    }
}

/// Pairs of positions that share a class, as a set.
fn same_class(labels: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] == labels[j] {
                out.insert((i, j));
            }
        }
    }
    out
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for s in sizes {
        off.push(off.last().unwrap() + s);
    }
    off
}

/// Colimit check: engine classes against the components of the element graph.
fn check_colimit(base: &Base, d: &Shape, f: &Diagram) -> Result<(), String> {
    let sizes: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let off = offsets(&sizes);
    let mut edges = Vec::new();
    for u in d.non_identity_arrows() {
        let (s, t) = (d.arrow(u).src, d.arrow(u).tgt);
        for x in 0..sizes[s] {
            edges.push((off[s] + x, off[t] + f.maps[u][0][x]));
        }
    }
    let oracle = components(off[sizes.len()], &edges);
    let c = base.colimit(d, f).map_err(|e| e.to_string())?;
    let engine: Vec<usize> = (0..sizes.len()).flat_map(|i| c.injections[i][0].clone()).collect();
    let classes: BTreeSet<usize> = oracle.iter().copied().collect();
    if c.object.card() != classes.len() || same_class(&engine) != same_class(&oracle) {
        return Err(format!("colimit of {sizes:?} on {}: {} classes, oracle {}", d.name(), c.object.card(), classes.len()));
    }
    Ok(())
}

/// Every tuple in the product, filtered by compatibility.
fn product_filter(sizes: &[usize], ok: impl Fn(&[usize]) -> bool) -> BTreeSet<Vec<usize>> {
    let total: usize = sizes.iter().product();
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        let t: Vec<usize> = sizes
            .iter()
            .map(|&s| {
                let x = code % s;
                code /= s;
                x
            })
            .collect();
        if ok(&t) {
            out.insert(t);
        }
    }
    out
}

fn check_limit(base: &Base, d: &Shape, f: &Diagram) -> Result<(), String> {
    let sizes: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let oracle = product_filter(&sizes, |t| d.non_identity_arrows().all(|u| f.maps[u][0][t[d.arrow(u).src]] == t[d.arrow(u).tgt]));
    let l = base.limit(d, f).map_err(|e| e.to_string())?;
    let engine: BTreeSet<Vec<usize>> = l.elements[0].iter().cloned().collect();
    if l.object.card() != oracle.len() || engine != oracle {
        return Err(format!("limit of {sizes:?} on {}: {} elements, oracle {}", d.name(), l.object.card(), oracle.len()));
    }
    Ok(())
}

/// `T(c, c') = G(c) × F(c')` for `G` contravariant, given as a diagram on
/// `d^op` with the same arrow indices.
fn tensor_bifunctor(d: &Shape, g: &Diagram, f: &Diagram) -> Bifunctor {
    let n = d.object_count();
    let gs: Vec<usize> = g.objects.iter().map(|x| x.card()).collect();
    let fs: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let values = (0..n * n).map(|p| BaseObject::finset(gs[p / n] * fs[p % n])).collect();
    let left = (0..d.arrow_count())
        .map(|u| {
            let t = d.arrow(u).tgt;
            (0..n).map(|c2| vec![(0..gs[t] * fs[c2]).map(|z| g.maps[u][0][z / fs[c2]] * fs[c2] + z % fs[c2]).collect()]).collect()
        })
        .collect();
    let right = (0..d.arrow_count())
        .map(|u| {
            let (s, t) = (d.arrow(u).src, d.arrow(u).tgt);
            (0..n).map(|c| vec![(0..gs[c] * fs[s]).map(|z| (z / fs[s]) * fs[t] + f.maps[u][0][z % fs[s]]).collect()]).collect()
        })
        .collect();
    Bifunctor { values, left, right }
}

fn check_coend(base: &Base, d: &Shape, g: &Diagram, f: &Diagram) -> Result<(), String> {
    let n = d.object_count();
    let gs: Vec<usize> = g.objects.iter().map(|x| x.card()).collect();
    let fs: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let diag: Vec<usize> = (0..n).map(|c| gs[c] * fs[c]).collect();
    let off = offsets(&diag);
    let mut edges = Vec::new();
    for u in d.non_identity_arrows() {
        let (s, t) = (d.arrow(u).src, d.arrow(u).tgt);
        for y in 0..gs[t] {
            for x in 0..fs[s] {
                // (G(u) y, x) at s ~ (y, F(u) x) at t
                edges.push((off[s] + g.maps[u][0][y] * fs[s] + x, off[t] + y * fs[t] + f.maps[u][0][x]));
            }
        }
    }
    let oracle = components(off[n], &edges);
    let c = base.coend(d, &tensor_bifunctor(d, g, f)).map_err(|e| e.to_string())?;
    let engine: Vec<usize> = (0..n).flat_map(|i| c.injections[i][0].clone()).collect();
    let classes: BTreeSet<usize> = oracle.iter().copied().collect();
    if c.object.card() != classes.len() || same_class(&engine) != same_class(&oracle) {
        return Err(format!("coend of {gs:?} ⊗ {fs:?} on {}: {} classes, oracle {}", d.name(), c.object.card(), classes.len()));
    }
    Ok(())
}

/// `T(c, c') = FinSet(F c, H c')`, functions coded base `|H c'|`.
fn hom_bifunctor(d: &Shape, f: &Diagram, h: &Diagram) -> Bifunctor {
    let n = d.object_count();
    let fs: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let hs: Vec<usize> = h.objects.iter().map(|x| x.card()).collect();
    let decode = |code: usize, dom: usize, cod: usize| -> Vec<usize> { (0..dom).map(|i| code / cod.pow(i as u32) % cod).collect() };
    let encode = |fun: &[usize], cod: usize| -> usize { fun.iter().enumerate().map(|(i, &y)| y * cod.pow(i as u32)).sum() };
    let size = |c: usize, c2: usize| hs[c2].pow(fs[c] as u32);
    let values = (0..n * n).map(|p| BaseObject::finset(size(p / n, p % n))).collect();
    let left = (0..d.arrow_count())
        .map(|u| {
            let (s, t) = (d.arrow(u).src, d.arrow(u).tgt);
            (0..n)
                .map(|c2| {
                    vec![(0..size(t, c2))
                        .map(|code| {
                            let phi = decode(code, fs[t], hs[c2]);
                            let pre: Vec<usize> = (0..fs[s]).map(|x| phi[f.maps[u][0][x]]).collect();
                            encode(&pre, hs[c2])
                        })
                        .collect()]
                })
                .collect()
        })
        .collect();
    let right = (0..d.arrow_count())
        .map(|u| {
            let (s, t) = (d.arrow(u).src, d.arrow(u).tgt);
            (0..n)
                .map(|c| {
                    vec![(0..size(c, s))
                        .map(|code| {
                            let phi = decode(code, fs[c], hs[s]);
                            let post: Vec<usize> = phi.iter().map(|&y| h.maps[u][0][y]).collect();
                            encode(&post, hs[t])
                        })
                        .collect()]
                })
                .collect()
        })
        .collect();
    Bifunctor { values, left, right }
}

fn check_end(base: &Base, d: &Shape, f: &Diagram, h: &Diagram) -> Result<(), String> {
    let n = d.object_count();
    let fs: Vec<usize> = f.objects.iter().map(|x| x.card()).collect();
    let hs: Vec<usize> = h.objects.iter().map(|x| x.card()).collect();
    let sizes: Vec<usize> = (0..n).map(|c| hs[c].pow(fs[c] as u32)).collect();
    let decode = |code: usize, c: usize| -> Vec<usize> { (0..fs[c]).map(|i| code / hs[c].pow(i as u32) % hs[c]).collect() };
    let oracle = product_filter(&sizes, |t| {
        d.non_identity_arrows().all(|u| {
            let (s, tg) = (d.arrow(u).src, d.arrow(u).tgt);
            let (ps, pt) = (decode(t[s], s), decode(t[tg], tg));
            (0..fs[s]).all(|x| h.maps[u][0][ps[x]] == pt[f.maps[u][0][x]])
        })
    });
    let l = base.end(d, &hom_bifunctor(d, f, h)).map_err(|e| e.to_string())?;
    let engine: BTreeSet<Vec<usize>> = l.elements[0].iter().cloned().collect();
    if l.object.card() != oracle.len() || engine != oracle {
        return Err(format!("end of [{fs:?}, {hs:?}] on {}: {} elements, oracle {}", d.name(), l.object.card(), oracle.len()));
    }
    Ok(())
}

#[test]
fn criterion_02_coend_and_end_oracles() {
    let _serial = serial();
    let start = Instant::now();
    let base = Base::finset();
    let mut failures = Vec::new();
    let mut checked = 0;
    for d in index_shapes() {
        let dop = d.opposite();
        let one = Diagram::constant(&d, &BaseObject::finset(1));
        let one_op = Diagram::constant(&dop, &BaseObject::finset(1));
        let wide = all_diagrams(&d, 3);
        for f in &wide {
            // conical colimit and limit, and the same through the coend and end
            for r in [check_colimit(&base, &d, f), check_limit(&base, &d, f), check_coend(&base, &d, &one_op, f), check_end(&base, &d, &one, f)] {
                checked += 1;
                if let Err(e) = r {
                    failures.push(e);
                }
            }
        }
        // weighted pairs: every weight against every diagram, at carriers
        // of size 2 where size 3 gives more than 100 diagrams
        let cap = if wide.len() <= 100 { 3 } else { 2 };
        let fs = all_diagrams(&d, cap);
        let gs = all_diagrams(&dop, cap);
        for g in &gs {
            for f in &fs {
                checked += 1;
                if let Err(e) = check_coend(&base, &d, g, f) {
                    failures.push(e);
                }
            }
        }
        for f in &fs {
            for h in &fs {
                checked += 1;
                if let Err(e) = check_end(&base, &d, f, h) {
                    failures.push(e);
                }
            }
        }
    }
    println!("criterion 2: {checked} (co)limits and (co)ends compared");
    report(2, "coend and end against brute-force oracles", Duration::from_secs(60), start, &failures);
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_03_counterexample_replay() {
    let _serial = serial();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let start = Instant::now();
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let w = Weight::empty(nat.base(), Variance::Covariant);
    match pointwise_limit(&nat, &w, &PresheafDiagram::empty(&nat), &b).unwrap().verdict {
        Verdict::NotSmall { witness } if witness.family == "DiscreteNat" => {}
        other => failures.push(format!("DiscreteNat: {}", other.label())),
    }
    let first = start.elapsed();
    let start2 = Instant::now();
    let op = Category::builtin("OmegaChain", Base::finset()).unwrap().opposite();
    let w = Weight::empty(op.base(), Variance::Covariant);
    match pointwise_limit(&op, &w, &PresheafDiagram::empty(&op), &b).unwrap().verdict {
        Verdict::Small { certificate, .. } if certificate.support() == [0] => {}
        other => failures.push(format!("opposite(OmegaChain): {}", other.label())),
    }
    if first > Duration::from_secs(1) {
        failures.push(format!("DiscreteNat took {first:?}"));
    }
    report(3, "terminal presheaf: NotSmall on DiscreteNat, Small on opposite(OmegaChain)", Duration::from_secs(1), start2, &failures);
}


// ---------------------------------------------------------------- 4

/// The greatest lower bound of `objs` in a finite lattice, by search.
fn meet(k: &Category, objs: &[Obj]) -> Obj {
    let all = k.enumerate(usize::MAX);
    let lower: Vec<Obj> = all.iter().copied().filter(|&x| objs.iter().all(|&o| le(k, x, o))).collect();
    *lower.iter().find(|&&m| lower.iter().all(|&x| le(k, x, m))).expect("lattices have meets")
}

#[test]
fn criterion_04_completeness_transfer() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    // draw until 50 distinct labelled lattices
    let mut r = gen::rng(SEED, 7);
    let mut distinct = BTreeSet::new();
    let mut lattices = Vec::new();
    for _ in 0..10_000 {
        let s = gen::lattice_shape(&mut r, 5);
        let n = s.object_count();
        let key: Vec<bool> = (0..n * n).map(|p| s.hom(p / n, p % n).next().is_some()).collect();
        if distinct.insert(key) {
            lattices.push(Category::finite(s.name().to_string(), Base::finset(), s).unwrap());
        }
        if lattices.len() == 50 {
            break;
        }
    }
    let mut limits = 0;
    for (i, k) in lattices.iter().enumerate() {
        let objs = k.enumerate(usize::MAX);
        for shape in LimitClass::FiniteLimits.shapes(3) {
            for s in diagrams_in(k, &shape, &objs, usize::MAX) {
                limits += 1;
                let base = k.base();
                let w = Weight::constant(base, s.domain.clone(), Variance::Covariant, &base.unit());
                let yd = PresheafDiagram::representables(k, s.domain.clone(), s.objects.clone(), s.arrows.clone()).unwrap();
                let v = pointwise_limit(k, &w, &yd, &b).unwrap().verdict;
                let m = meet(k, &s.objects);
                let expected: Vec<usize> = objs.iter().map(|&x| usize::from(le(k, x, m))).collect();
                match small(&v) {
                    Some(c) if sizes_at(c, &objs) == expected => {}
                    Some(c) => failures.push(format!("lattice {i}, {:?}: sizes {:?}, expected {expected:?}", s.objects, sizes_at(c, &objs))),
                    None => failures.push(format!("lattice {i}, {:?}: {}", s.objects, v.label())),
                }
            }
        }
    }
    if distinct.len() < 50 {
        failures.push(format!("only {} distinct lattices", distinct.len()));
    }
    println!("criterion 4: {} lattices ({} distinct), {limits} limits", lattices.len(), distinct.len());
    report(4, "finite limits in lattices with at most 5 elements are Small", Duration::from_secs(120), start, &failures);
}

// ---------------------------------------------------------------- 5

#[test]
fn criterion_05_restriction_adjoint() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let cases = spcalc::suites::adjunction(SEED, 20);
    for (i, c) in cases.iter().enumerate() {
        let (k, f) = c.l.full_subcategory("S", &c.objects).unwrap();
        let mut corpus = Vec::new();
        let mut expected = Vec::new();
        for a in k.enumerate(usize::MAX) {
            for y in c.l.enumerate(usize::MAX) {
                corpus.push((SmallPresheaf::representable(&k, a).unwrap(), SmallPresheaf::representable(&c.l, y).unwrap()));
                expected.push(c.l.hom_size(c.objects[a as usize], y));
            }
        }
        let r = adjunction_check(&f, &corpus, &b).unwrap();
        if !r.ok() {
            failures.push(format!("inclusion {i}: {}", r.failures[0]));
        }
        for (p, &e) in r.pairs.iter().zip(&expected) {
            if p.left != [e] || p.right.as_deref() != Some(&[e][..]) {
                failures.push(format!("inclusion {i}, pair {}: {:?} / {:?}, expected {e}", p.index, p.left, p.right));
            }
        }
    }
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let pt = Category::finite("pt", Base::finset(), Shape::terminal()).unwrap();
    let bang = Functor::to_terminal(&nat, &pt).unwrap();
    let terminal = SmallPresheaf::representable(&pt, 0).unwrap();
    match restrict_along(&bang, &terminal, &b).unwrap() {
        Verdict::NotSmall { witness } if witness.family == "DiscreteNat" => {}
        other => failures.push(format!("DiscreteNat -> terminal: {}", other.label())),
    }
    report(5, "adjunction on 20 inclusions; restriction to DiscreteNat is NotSmall", Duration::from_secs(30), start, &failures);
}

// ---------------------------------------------------------------- 6

/// Whether a monotone map between lattices keeps binary meets and the top.
fn preserves_meets(f: &Functor) -> bool {
    let (k, l) = (f.source(), f.target());
    let objs = k.enumerate(usize::MAX);
    let top = |c: &Category| meet(c, &[]);
    f.map_object(top(k)) == top(l)
        && objs.iter().all(|&a| objs.iter().all(|&c| f.map_object(meet(k, &[a, c])) == meet(l, &[f.map_object(a), f.map_object(c)])))
}

#[test]
fn criterion_06_continuity_transfer() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let cases = spcalc::suites::continuity(SEED, 100);
    let mut samples = 0;
    for (i, c) in cases.iter().enumerate() {
        let r = continuity_check(&c.f, LimitClass::FiniteLimits, &b).unwrap();
        samples += r.samples.len();
        if r.unmatched() > 0 {
            let s = r.samples.iter().find(|s| !s.matched()).unwrap();
            failures.push(format!("map {i}: {} unmatched, first {}", r.unmatched(), s.diagram));
        }
        if r.skipped > 0 {
            failures.push(format!("map {i}: {} diagrams skipped", r.skipped));
        }
        let engine = r.samples.iter().all(|s| s.functor_preserves);
        if engine != preserves_meets(&c.f) {
            failures.push(format!("map {i}: engine says preserves = {engine}, meet oracle disagrees"));
        }
    }
    println!("criterion 6: {} maps, {samples} samples", cases.len());
    report(6, "F and P F preserve the same finite limits on 100 monotone maps", Duration::from_secs(120), start, &failures);
}


// ---------------------------------------------------------------- 7

fn z2() -> (Category, spcalc_core::day::PromonoidalStructure) {
    let k = Category::finite("Z2", Base::finset(), Shape::discrete(2)).unwrap();
    let m = MonoidalStructure::new("xor", &k, TensorRule::Table(vec![0, 1, 1, 0]), Some(0), 16).unwrap();
    (k, from_monoidal(&m).unwrap())
}

fn on_z2(k: &Category, v: [usize; 2]) -> SmallPresheaf {
    SmallPresheaf::from_values(k, vec![0, 1], vec![BaseObject::finset(v[0]), BaseObject::finset(v[1])]).unwrap()
}

/// `(F ⊗ G)(c) = Σ_a F(a) G(a xor c)`.
fn xor_tensor(f: [usize; 2], g: [usize; 2]) -> [usize; 2] {
    [0, 1].map(|c| (0..2).map(|a| f[a] * g[a ^ c]).sum())
}

/// `[G, H](a) = Π_b H(a xor b)^G(b)`.
fn xor_hom(g: [usize; 2], h: [usize; 2]) -> [usize; 2] {
    [0, 1].map(|a| (0..2).map(|b| h[a ^ b].pow(g[b] as u32)).product())
}

/// Natural maps between presheaves on the discrete `Z2`.
fn nat_count(f: [usize; 2], h: [usize; 2]) -> usize {
    (0..2).map(|c| h[c].pow(f[c] as u32)).product()
}

/// The join table of a finite lattice, and its bottom.
fn join_table(k: &Category) -> (Vec<Obj>, Obj) {
    let objs = k.enumerate(usize::MAX);
    let join = |a: Obj, b: Obj| {
        let upper: Vec<Obj> = objs.iter().copied().filter(|&u| le(k, a, u) && le(k, b, u)).collect();
        *upper.iter().find(|&&j| upper.iter().all(|&u| le(k, j, u))).unwrap()
    };
    (objs.iter().flat_map(|&a| objs.iter().map(move |&b| join(a, b))).collect(), meet(k, &objs))
}

#[test]
fn criterion_07_convolution() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let (k, p) = z2();
    let c = convolve(&on_z2(&k, [1, 2]), &on_z2(&k, [3, 1]), &p).unwrap();
    if sizes_at(&c, &[0, 1]) != xor_tensor([1, 2], [3, 1]) || sizes_at(&c, &[0, 1]) != [5, 7] {
        failures.push(format!("xor convolution {:?}", sizes_at(&c, &[0, 1])));
    }
    let v = internal_hom(&on_z2(&k, [1, 1]), &on_z2(&k, [2, 3]), &p, Side::Right, &b).unwrap();
    match small(&v).map(|h| sizes_at(h, &[0, 1])) {
        Some(s) if s == xor_hom([1, 1], [2, 3]) && s == [6, 6] => {}
        other => failures.push(format!("xor internal hom {other:?}")),
    }
    // tensor-hom adjunction, exhaustive over values of size at most 2
    let all: Vec<[usize; 2]> = (0..9).map(|i| [i / 3, i % 3]).collect();
    let mut triples = 0;
    for &f in &all {
        for &g in &all {
            for &h in &all {
                triples += 1;
                let fg = convolve(&on_z2(&k, f), &on_z2(&k, g), &p).unwrap();
                let left = fg.hom_object(&on_z2(&k, h), b.iso_budget).unwrap().card();
                let v = internal_hom(&on_z2(&k, g), &on_z2(&k, h), &p, Side::Right, &b).unwrap();
                let right = small(&v).map(|gh| on_z2(&k, f).hom_object(gh, b.iso_budget).unwrap().card());
                let expected = nat_count(xor_tensor(f, g), h);
                if left != expected || right != Some(expected) || expected != nat_count(f, xor_hom(g, h)) {
                    failures.push(format!("F={f:?} G={g:?} H={h:?}: {left} / {right:?}, expected {expected}"));
                }
            }
        }
    }
    // every finite monoidal instance is closed
    let mut finite = vec![("xor".to_string(), p.clone())];
    for n in 1..=4 {
        let c = Category::finite(format!("chain{n}"), Base::finset(), Shape::chain(n)).unwrap();
        let m = MonoidalStructure::new("max", &c, TensorRule::Max, Some(0), 16).unwrap();
        finite.push((format!("max on chain {n}"), from_monoidal(&m).unwrap()));
    }
    let mut r = gen::rng(SEED, 8);
    for i in 0..10 {
        let l = Category::finite(format!("L{i}"), Base::finset(), gen::lattice_shape(&mut r, 5)).unwrap();
        let (table, bottom) = join_table(&l);
        let m = MonoidalStructure::new("join", &l, TensorRule::Table(table), Some(bottom), 16).unwrap();
        finite.push((format!("join on lattice {i}"), from_monoidal(&m).unwrap()));
    }
    for (name, p) in &finite {
        let v = closedness_check(p, &b).unwrap().verdict;
        if !matches!(v, Closedness::Closed) {
            failures.push(format!("{name}: {v:?}"));
        }
    }
    let op = Category::builtin("OmegaChain", Base::finset()).unwrap().opposite();
    let m = MonoidalStructure::new("max", &op, TensorRule::Max, Some(0), 8).unwrap();
    let v = closedness_check(&from_monoidal(&m).unwrap(), &b).unwrap().verdict;
    if !matches!(v, Closedness::ClosedOnProbes) {
        failures.push(format!("opposite(OmegaChain), max: {v:?}"));
    }
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let m = MonoidalStructure::unchecked("min", &nat, TensorRule::Min, None);
    let v = closedness_check(&from_monoidal(&m).unwrap(), &b).unwrap().verdict;
    if !matches!(v, Closedness::ConditionFails { b: 0, d: 0, .. }) {
        failures.push(format!("DiscreteNat, min: {v:?}"));
    }
    println!("criterion 7: {triples} adjunction triples, {} finite closed instances", finite.len());
    report(7, "Z/2 xor example, tensor-hom adjunction and closedness", Duration::from_secs(60), start, &failures);
}

// ---------------------------------------------------------------- 8

/// Subsets `S` with `S = lower(upper(S))`.
fn cuts(k: &Category) -> BTreeSet<Vec<Obj>> {
    let objs = k.enumerate(usize::MAX);
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << objs.len() {
        let s: Vec<Obj> = objs.iter().copied().filter(|&a| mask >> a & 1 == 1).collect();
        let upper: Vec<Obj> = objs.iter().copied().filter(|&u| s.iter().all(|&x| le(k, x, u))).collect();
        let lower: Vec<Obj> = objs.iter().copied().filter(|&l| upper.iter().all(|&u| le(k, l, u))).collect();
        if lower == s {
            out.insert(s);
        }
    }
    out
}

fn conjugate_of_representables(k: &Category, b: &Bounds, failures: &mut Vec<String>) {
    let kop = k.opposite();
    for a in k.enumerate(usize::MAX) {
        let v = left_conjugate(&SmallPresheaf::representable(k, a).unwrap(), b).unwrap();
        let z = SmallPresheaf::representable(&kop, a).unwrap();
        let all: Vec<Obj> = k.enumerate(usize::MAX);
        let expected: Vec<usize> = all.iter().map(|&c| k.base().truncate(BaseObject::finset(k.hom_size(a, c))).card()).collect();
        match small(&v) {
            Some(o) if o.iso(&z, b.iso_budget).unwrap() && sizes_at(o, &all) == expected => {}
            _ => failures.push(format!("{}: O(Y {a}) is not Z {a} ({})", k.name(), v.label())),
        }
    }
}

#[test]
fn criterion_08_isbell_and_dm() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let posets = spcalc::suites::dm(SEED, 100);
    for (i, p) in posets.iter().enumerate() {
        let n = p.n;
        let k = Category::finite(format!("P{i}"), Base::bool2(), Shape::thin("P", n, |a, c| p.le[a * n + c])).unwrap();
        let dm = dedekind_macneille_fixed_points(&k, &b).unwrap();
        let found: BTreeSet<Vec<Obj>> = dm.fixed_points.iter().map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        }).collect();
        let expected = cuts(&k);
        if found != expected || dm.fixed_points.len() != expected.len() {
            failures.push(format!("poset {i}: {} fixed points, {} cuts", dm.fixed_points.len(), expected.len()));
        }
        conjugate_of_representables(&k, &b, &mut failures);
    }
    let antichain = Category::finite("A2", Base::bool2(), Shape::discrete(2)).unwrap();
    let fixed = dedekind_macneille_fixed_points(&antichain, &b).unwrap().fixed_points.len();
    if fixed != 4 {
        failures.push(format!("2-antichain: {fixed} fixed points"));
    }
    for c in spcalc::suites::yoneda(SEED, 30) {
        conjugate_of_representables(&c.k, &b, &mut failures);
    }
    report(8, "Isbell fixed points are the Dedekind-MacNeille cuts; O(Y a) = Z a", Duration::from_secs(120), start, &failures);
}

// ---------------------------------------------------------------- 9

#[test]
fn criterion_09_representable_smallness() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default();
    let mut failures = Vec::new();
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let y3 = SmallPresheaf::representable(&nat, 3).unwrap();
    let probes = [Probe::Base(BaseObject::finset(0)), Probe::Base(BaseObject::finset(1))];
    let r = representably_small_check(&nat, &y3, &FunctorCategoryTarget::Base, &probes, &b).unwrap();
    if !r.verdicts[0].is_not_small() || !r.verdicts[1].is_small() {
        failures.push(format!("Y(3) on DiscreteNat: {} / {}", r.verdicts[0].label(), r.verdicts[1].label()));
    }
    let mut corpus: Vec<(Category, SmallPresheaf)> = spcalc::suites::repsmall(SEED, 20).into_iter().map(|c| (c.k, c.s)).collect();
    let mut rng = gen::rng(SEED, 9);
    for i in 0..10 {
        let k = Category::finite(format!("L{i}"), Base::finset(), gen::lattice_shape(&mut rng, 5)).unwrap();
        let s = gen::presheaf(&mut rng, &k);
        corpus.push((k, s));
    }
    for (i, (k, s)) in corpus.iter().enumerate() {
        let objs = k.enumerate(usize::MAX);
        let probes: Vec<Probe> = (0..=3).map(|n| Probe::Base(BaseObject::finset(n))).collect();
        let r = representably_small_check(k, s, &FunctorCategoryTarget::Base, &probes, &b).unwrap();
        for (n, v) in r.verdicts.iter().enumerate() {
            // FinSet(n, S(a)) has |S(a)|^n elements
            let expected: Vec<usize> = objs.iter().map(|&a| s.evaluate_value(a).unwrap().card().pow(n as u32)).collect();
            match small(v) {
                Some(c) if sizes_at(c, &objs) == expected => {}
                _ => failures.push(format!("corpus {i}, probe {n}: {}", v.label())),
            }
        }
    }
    report(9, "Y(3) on DiscreteNat is not representably small; finite corpus is", Duration::from_secs(10), start, &failures);
}

// ---------------------------------------------------------------- 10

fn counterexample_payloads(b: &Bounds) -> Vec<String> {
    let mut out = Vec::new();
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let op = Category::builtin("OmegaChain", Base::finset()).unwrap().opposite();
    for k in [&nat, &op] {
        let w = Weight::empty(k.base(), Variance::Covariant);
        let v = pointwise_limit(k, &w, &PresheafDiagram::empty(k), b).unwrap().verdict;
        out.push(serde_json::to_string(&spcalc::record::verdict(k, &v)).unwrap());
    }
    let y3 = SmallPresheaf::representable(&nat, 3).unwrap();
    let probes = [Probe::Base(BaseObject::finset(0)), Probe::Base(BaseObject::finset(1))];
    for v in representably_small_check(&nat, &y3, &FunctorCategoryTarget::Base, &probes, b).unwrap().verdicts {
        out.push(serde_json::to_string(&spcalc::record::verdict(&nat, &v)).unwrap());
    }
    out
}

#[test]
fn criterion_10_determinism() {
    let _serial = serial();
    let start = Instant::now();
    let b = Bounds::default().with_seed(SEED);
    let mut failures = Vec::new();
    for suite in Suite::ALL {
        let first = run_suite(suite, SEED, None, &b).record(&b).payload();
        let second = run_suite(suite, SEED, None, &b).record(&b).payload();
        if first != second {
            failures.push(format!("{}: payloads differ", suite.name()));
        }
    }
    if counterexample_payloads(&b) != counterexample_payloads(&b) {
        failures.push("counterexample payloads differ".into());
    }
    report(10, "same seed and bounds give byte-identical payloads", Duration::from_secs(600), start, &failures);
}
