use proptest::prelude::*;
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::{Category, Obj};
use spcalc_core::isbell::{
    conjugation_adjunction_check, dedekind_macneille_fixed_points, downset_presheaf, downsets, global_existence_gate, left_conjugate,
};
use spcalc_core::presheaf::SmallPresheaf;
use spcalc_core::Bounds;

mod common;
use common::{poset, thin};

const BUDGET: u64 = 1_000_000;

fn thin_bool(n: usize, le: &[bool]) -> Category {
    Category::finite("P", Base::bool2(), Shape::thin("P", n, |a, b| le[a * n + b])).unwrap()
}

/// Number of subsets equal to the lower bounds of their upper bounds.
fn cuts(n: usize, le: &[bool]) -> usize {
    (0u32..1 << n)
        .filter(|&s| {
            let upper: Vec<usize> = (0..n).filter(|&u| (0..n).all(|a| s >> a & 1 == 0 || le[a * n + u])).collect();
            (0..n).all(|a| (s >> a & 1 == 1) == upper.iter().all(|&u| le[a * n + u]))
        })
        .count()
}

fn antichain(n: usize) -> Vec<bool> {
    (0..n * n).map(|i| i / n == i % n).collect()
}

proptest! {
    #[test]
    fn fixed_points_are_the_cuts((n, le) in poset()) {
        let dm = dedekind_macneille_fixed_points(&thin_bool(n, &le), &Bounds::default()).unwrap();
        prop_assert_eq!(dm.fixed_points.len(), cuts(n, &le));
        for (s, c) in dm.downsets.iter().zip(&dm.closures) {
            prop_assert!(s.iter().all(|a| c.contains(a)), "closure of {:?} is {:?}", s, c);
        }
    }

    #[test]
    fn conjugate_of_a_representable_is_corepresentable((n, le) in poset(), a in 0usize..6) {
        let k = thin(n, &le);
        let a = (a % n) as Obj;
        let v = left_conjugate(&SmallPresheaf::representable(&k, a).unwrap(), &Bounds::default()).unwrap();
        let o = v.certificate().expect("finite conjugates are small");
        prop_assert!(o.iso(&SmallPresheaf::representable(&k.opposite(), a).unwrap(), BUDGET).unwrap());
    }
}

#[test]
fn chains_are_their_own_completion() {
    for n in 1..6 {
        let le: Vec<bool> = (0..n * n).map(|i| i / n <= i % n).collect();
        let dm = dedekind_macneille_fixed_points(&thin_bool(n, &le), &Bounds::default()).unwrap();
        // nonempty downsets of a chain are principal; the empty one closes to {0}
        assert_eq!(dm.fixed_points.len(), n, "chain {n}");
    }
}

#[test]
fn antichains_gain_a_top_and_bottom() {
    for n in 2..5 {
        let dm = dedekind_macneille_fixed_points(&thin_bool(n, &antichain(n)), &Bounds::default()).unwrap();
        assert_eq!(dm.downsets.len(), 1 << n);
        assert_eq!(dm.fixed_points.len(), n + 2, "antichain {n}");
    }
}

#[test]
fn completion_needs_a_finite_poset_over_bool2() {
    let k = Category::finite("c2", Base::finset(), Shape::chain(2)).unwrap();
    assert!(dedekind_macneille_fixed_points(&k, &Bounds::default()).is_err());
}

#[test]
fn conjugation_is_adjoint_on_downsets() {
    let k = thin(3, &antichain(3));
    let corpus: Vec<SmallPresheaf> = downsets(&k).iter().map(|s| downset_presheaf(&k, s).unwrap()).collect();
    let r = conjugation_adjunction_check(&corpus, &Bounds::default()).unwrap();
    assert_eq!(r.members, 8);
    assert!(r.ok(), "{:?}", r.failures);
}

#[test]
fn existence_gate_is_consistent() {
    let b = Bounds::default();
    let c3 = Category::finite("c3", Base::finset(), Shape::chain(3)).unwrap();
    let r = global_existence_gate(&c3, &b).unwrap();
    assert!(r.consistent);
    assert_eq!(r.not_small, 0);
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let r = global_existence_gate(&nat, &b).unwrap();
    assert!(r.consistent, "{r:?}");
    assert!(r.not_small > 0);
}
