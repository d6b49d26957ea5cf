use super::*;
use crate::base::{Base, Shape};
use crate::category::Category;

fn finite(name: &str, shape: Shape) -> Category {
    Category::finite(name, Base::finset(), shape).unwrap()
}

#[test]
fn injection_misses_the_terminal() {
    let pt = finite("pt", Shape::terminal());
    let two = finite("two", Shape::discrete(2));
    let f = Functor::explicit("i0", &pt, &two, vec![0], vec![vec![0]]).unwrap();
    let g = SmallPresheaf::representable(&pt, 0).unwrap();
    let img = left_kan_along(&f, &g).unwrap();
    assert_eq!(img.evaluate_value(0).unwrap().card(), 1);
    assert_eq!(img.evaluate_value(1).unwrap().card(), 0);
}

#[test]
fn collapse_adds_values() {
    let pt = finite("pt", Shape::terminal());
    let two = finite("two", Shape::discrete(2));
    let f = Functor::explicit("!", &two, &pt, vec![0, 0], vec![vec![0], vec![], vec![], vec![0]]).unwrap();
    let base = two.base().clone();
    let g = SmallPresheaf::from_values(&two, vec![0, 1], vec![base.constant(1), base.constant(1)]).unwrap();
    assert_eq!(left_kan_along(&f, &g).unwrap().evaluate_value(0).unwrap().card(), 2);
}

#[test]
fn restriction_to_terminal_is_not_small() {
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let pt = finite("pt", Shape::terminal());
    let f = Functor::to_terminal(&nat, &pt).unwrap();
    let h = SmallPresheaf::representable(&pt, 0).unwrap();
    assert!(restrict_along(&f, &h, &Bounds::default()).unwrap().is_not_small());
}

#[test]
fn restriction_along_point_inclusion() {
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let (sub, incl) = nat.full_subcategory("zero", &[0]).unwrap();
    let b = Bounds::default();
    let y5 = SmallPresheaf::representable(&nat, 5).unwrap();
    let r = restrict_along(&incl, &y5, &b).unwrap();
    assert_eq!(r.certificate().unwrap().evaluate_value(0).unwrap().card(), 0);
    let y0 = SmallPresheaf::representable(&nat, 0).unwrap();
    let r = restrict_along(&incl, &y0, &b).unwrap();
    assert_eq!(r.certificate().unwrap().evaluate_value(0).unwrap().card(), 1);
    let g = SmallPresheaf::representable(&sub, 0).unwrap();
    let report = adjunction_check(&incl, &[(g.clone(), y0), (g, y5)], &b).unwrap();
    assert!(report.ok(), "{report:?}");
}

#[test]
fn bottom_of_chain_is_not_continuous_either_way() {
    let pt = finite("pt", Shape::terminal());
    let two = finite("two", Shape::chain(2));
    let f = Functor::on_objects("bot", &pt, &two, vec![0]).unwrap();
    let r = continuity_check(&f, LimitClass::FiniteLimits, &Bounds::default()).unwrap();
    assert_eq!(r.unmatched(), 0);
    assert!(r.samples.iter().any(|s| !s.functor_preserves));
}

#[test]
fn constant_weight_on_two_points_is_not_flat() {
    let two = finite("two", Shape::discrete(2));
    let base = two.base().clone();
    let g = SmallPresheaf::from_values(&two.opposite(), vec![0, 1], vec![base.constant(1), base.constant(1)]).unwrap();
    let r = flatness_check(&g, LimitClass::FiniteProducts, &Bounds::default()).unwrap();
    assert!(matches!(r.verdict, Flatness::NotFlat { .. }));
    let y = SmallPresheaf::representable(&two.opposite(), 0).unwrap();
    let r = flatness_check(&y, LimitClass::FiniteProducts, &Bounds::default()).unwrap();
    assert_eq!(r.verdict, Flatness::FlatOnProbes);
}
