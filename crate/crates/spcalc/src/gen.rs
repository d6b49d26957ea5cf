//! Seeded generators of finite categories, posets, lattices, monotone maps
//! and presheaves. Everything is drawn from a `ChaCha8Rng`, so a seed
//! determines every case.
//!
//! Categories: objects `0..n` with arrows only going up the index order,
//! hom sizes at most two, and a random composition table, rejected until
//! the category laws hold. Lattices: closure systems on a small ground set,
//! that is random families of subsets closed under intersection and
//! containing the whole set, ordered by inclusion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spcalc_core::base::{Arrow, Base, Shape};
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::presheaf::{weighted_colimit, PresheafDiagram, SmallPresheaf, Variance, Weight};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Up to 4 objects; falls back to a chain after 200 rejected tables.
pub fn category(rng: &mut ChaCha8Rng, max_objects: usize, base: Base) -> Category {
    for _ in 0..200 {
        let n = rng.gen_range(1..=max_objects);
        if let Some(shape) = try_shape(rng, n) {
            if let Ok(k) = Category::finite(format!("C{n}"), base.clone(), shape) {
                return k;
            }
        }
    }
    Category::finite("chain", base, Shape::chain(max_objects.min(2))).expect("chains are categories")
}

fn try_shape(rng: &mut ChaCha8Rng, n: usize) -> Option<Shape> {
    let mut arrows: Vec<Arrow> = (0..n).map(|a| Arrow { name: format!("id{a}"), src: a, tgt: a }).collect();
    // an idempotent on some objects
    for a in 0..n {
        if rng.gen_bool(0.25) {
            arrows.push(Arrow { name: format!("e{a}"), src: a, tgt: a });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..rng.gen_range(0..=2) {
                arrows.push(Arrow { name: format!("f{a}{b}_{k}"), src: a, tgt: b });
            }
        }
    }
    let m = arrows.len();
    let hom = |a: usize, b: usize| -> Vec<usize> { (0..m).filter(|&f| arrows[f].src == a && arrows[f].tgt == b).collect() };
    let mut table = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if arrows[f].tgt != arrows[g].src {
                continue;
            }
            table[g * m + f] = Some(if g < n {
                f
            } else if f < n {
                g
            } else if arrows[f].src == arrows[g].tgt && arrows[f].name.starts_with('e') && f == g {
                f
            } else {
                *hom(arrows[f].src, arrows[g].tgt).choose(rng)?
            });
        }
    }
    Shape::new(format!("C{n}"), (0..n).map(|a| a.to_string()).collect(), arrows, (0..n).collect(), |g, f| table[g * m + f]).ok()
}

/// A random partial order on `n` points, as a thin shape: a random DAG
/// along the index order, transitively closed.
pub fn poset_shape(rng: &mut ChaCha8Rng, n: usize) -> Shape {
    let mut le = vec![false; n * n];
    for a in 0..n {
        le[a * n + a] = true;
        for b in a + 1..n {
            le[a * n + b] = rng.gen_bool(0.35);
        }
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
    Shape::thin(format!("P{n}"), n, |a, b| le[a * n + b])
}

/// A closure system on a ground set of 2 or 3 points with at most
/// `max_elements` members, ordered by inclusion and labelled in random order.
pub fn lattice_shape(rng: &mut ChaCha8Rng, max_elements: usize) -> Shape {
    loop {
        let ground = rng.gen_range(2..=3u32);
        let full = (1u32 << ground) - 1;
        let mut family = vec![full];
        for _ in 0..rng.gen_range(0..=4) {
            family.push(rng.gen_range(0..full));
        }
        loop {
            let mut grew = false;
            for i in 0..family.len() {
                for j in 0..family.len() {
                    let x = family[i] & family[j];
                    if !family.contains(&x) {
                        family.push(x);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        family.sort_unstable();
        family.dedup();
        if family.len() <= max_elements {
            family.shuffle(rng);
            return Shape::thin(format!("L{}", family.len()), family.len(), |a, b| family[a] & !family[b] == 0);
        }
    }
}

/// An order-preserving map between thin categories, by rejection.
pub fn monotone_map(rng: &mut ChaCha8Rng, src: &Category, tgt: &Category) -> Functor {
    let n = src.object_count().expect("finite") as usize;
    let m = tgt.object_count().expect("finite");
    let le = |k: &Category, a: Obj, b: Obj| k.hom_size(a, b) > 0;
    for _ in 0..500 {
        let objects: Vec<Obj> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        let ok = (0..n).all(|a| (0..n).all(|b| !le(src, a as Obj, b as Obj) || le(tgt, objects[a], objects[b])));
        if ok {
            return Functor::on_objects("f", src, tgt, objects).expect("monotone");
        }
    }
    let c = rng.gen_range(0..m);
    Functor::on_objects("f", src, tgt, vec![c; n]).expect("constant maps are monotone")
}

/// A coproduct of up to three representables.
pub fn presheaf(rng: &mut ChaCha8Rng, k: &Category) -> SmallPresheaf {
    let objs = k.enumerate(usize::MAX);
    let count = rng.gen_range(0..=3);
    let picks: Vec<Obj> = (0..count).map(|_| *objs.choose(rng).expect("nonempty")).collect();
    coproduct_of_representables(k, &picks)
}

pub fn coproduct_of_representables(k: &Category, objects: &[Obj]) -> SmallPresheaf {
    let base = k.base();
    let m = objects.len();
    let d = PresheafDiagram::representables(k, Shape::discrete(m), objects.to_vec(), (0..m).map(|i| k.identity(objects[i])).collect())
        .expect("discrete diagram");
    let w = Weight::discrete(base, m, Variance::Contravariant);
    weighted_colimit(base, k, &w, &d).expect("coproducts exist")
}

/// A presheaf with support all objects, values of size at most `max_size`
/// and random actions, rejected until functorial; a coproduct of
/// representables after 50 rejections.
pub fn explicit_presheaf(rng: &mut ChaCha8Rng, k: &Category, max_size: usize) -> SmallPresheaf {
    let base = k.base();
    let objs = k.enumerate(usize::MAX);
    let m = objs.len();
    for _ in 0..50 {
        let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=max_size)).collect();
        let mut actions = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let per = (0..k.hom_size(objs[i], objs[j]))
                    .map(|u| {
                        if i == j && u == k.identity(objs[i]) {
                            vec![(0..sizes[i]).collect()]
                        } else {
                            vec![(0..sizes[j]).map(|_| if sizes[i] == 0 { usize::MAX } else { rng.gen_range(0..sizes[i]) }).collect()]
                        }
                    })
                    .collect();
                actions.push(per);
            }
        }
        let values = sizes.iter().map(|&n| base.constant(n)).collect();
        if let Ok(f) = SmallPresheaf::new(k, objs.clone(), values, actions) {
            return f;
        }
    }
    presheaf(rng, k)
}
