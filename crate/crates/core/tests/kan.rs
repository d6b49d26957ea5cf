use proptest::prelude::*;
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::{Category, Functor, Obj};
use spcalc_core::kan::{adjunction_check, continuity_check, flatness_check, left_kan_along, restrict_along, Flatness};
use spcalc_core::presheaf::{LimitClass, SmallPresheaf, Verdict};
use spcalc_core::Bounds;

mod common;
use common::{poset, thin};

const BUDGET: u64 = 1_000_000;

fn chain(n: usize) -> Category {
    Category::finite(format!("c{n}"), Base::finset(), Shape::chain(n)).unwrap()
}

/// `i ↦ floor(i m / n)`, a monotone map between chains.
fn squash(n: usize, m: usize) -> Functor {
    Functor::on_objects("s", &chain(n), &chain(m), (0..n).map(|i| (i * m / n) as Obj).collect()).unwrap()
}

proptest! {
    #[test]
    fn lan_along_the_identity_is_the_input((n, le) in poset(), a in 0usize..6) {
        let k = thin(n, &le);
        let y = SmallPresheaf::representable(&k, (a % n) as Obj).unwrap();
        let lan = left_kan_along(&Functor::identity(&k), &y).unwrap();
        prop_assert!(lan.iso(&y, BUDGET).unwrap());
    }

    #[test]
    fn lan_sends_representables_to_representables(n in 1usize..5, m in 1usize..5) {
        let f = squash(n, m);
        for a in 0..n as Obj {
            let lan = left_kan_along(&f, &SmallPresheaf::representable(f.source(), a).unwrap()).unwrap();
            let y = SmallPresheaf::representable(f.target(), f.map_object(a)).unwrap();
            prop_assert!(lan.iso(&y, BUDGET).unwrap());
        }
    }

    #[test]
    fn restriction_of_representables_counts_homs(n in 1usize..5, m in 1usize..5) {
        let f = squash(n, m);
        let b = Bounds::default();
        for y in 0..m as Obj {
            let v = restrict_along(&f, &SmallPresheaf::representable(f.target(), y).unwrap(), &b).unwrap();
            let r = v.certificate().expect("finite restrictions are small");
            for a in 0..n as Obj {
                prop_assert_eq!(r.evaluate_value(a).unwrap().card(), f.target().hom_size(f.map_object(a), y));
            }
        }
    }

    #[test]
    fn lan_is_left_adjoint_to_restriction(n in 1usize..4, m in 1usize..4) {
        let f = squash(n, m);
        let corpus: Vec<_> = (0..n as Obj)
            .flat_map(|a| (0..m as Obj).map(move |y| (a, y)))
            .map(|(a, y)| (SmallPresheaf::representable(f.source(), a).unwrap(), SmallPresheaf::representable(f.target(), y).unwrap()))
            .collect();
        let r = adjunction_check(&f, &corpus, &Bounds::default()).unwrap();
        prop_assert!(r.ok(), "{:?}", r.failures);
    }
}

#[test]
fn restriction_to_an_infinite_discrete_family_is_not_small() {
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let pt = Category::finite("pt", Base::finset(), Shape::terminal()).unwrap();
    let bang = Functor::to_terminal(&nat, &pt).unwrap();
    let v = restrict_along(&bang, &SmallPresheaf::representable(&pt, 0).unwrap(), &Bounds::default()).unwrap();
    assert!(matches!(v, Verdict::NotSmall { ref witness } if witness.family == "DiscreteNat"));
}

#[test]
fn continuity_agrees_on_chains() {
    let b = Bounds::default();
    for (n, m) in [(2, 3), (3, 2), (3, 3)] {
        let r = continuity_check(&squash(n, m), LimitClass::FiniteLimits, &b).unwrap();
        assert!(!r.samples.is_empty());
        assert_eq!(r.unmatched(), 0, "{n} -> {m}");
    }
}

#[test]
fn representables_are_flat_on_a_chain() {
    let k = chain(3);
    let y = SmallPresheaf::representable(&k.opposite(), 1).unwrap();
    let r = flatness_check(&y, LimitClass::FiniteLimits, &Bounds::default()).unwrap();
    assert_eq!(r.verdict, Flatness::FlatOnProbes, "{r:?}");
    assert!(r.samples > 0);
}
