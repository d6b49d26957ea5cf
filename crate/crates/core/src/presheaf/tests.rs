use super::*;
use crate::base::Base;
use crate::bounds::Bounds;
use crate::category::Category;

fn nat() -> Category {
    Category::builtin("DiscreteNat", Base::finset()).unwrap()
}

fn omega_op() -> Category {
    Category::builtin("OmegaChain", Base::bool2()).unwrap().opposite()
}

#[test]
fn representable_evaluates_to_hom() {
    let k = Category::finite("arrow", Base::finset(), crate::base::Shape::walking_arrow()).unwrap();
    let y1 = SmallPresheaf::representable(&k, 1).unwrap();
    assert_eq!(y1.evaluate_value(0).unwrap().card(), 1);
    assert_eq!(y1.evaluate_value(1).unwrap().card(), 1);
    let y0 = SmallPresheaf::representable(&k, 0).unwrap();
    assert_eq!(y0.evaluate_value(1).unwrap().card(), 0);
}

#[test]
fn empty_limit_on_discrete_family_is_not_small() {
    let k = nat();
    let base = k.base().clone();
    let w = Weight::empty(&base, Variance::Covariant);
    let out = pointwise_limit(&k, &w, &PresheafDiagram::empty(&k), &Bounds::default()).unwrap();
    assert!(out.verdict.is_not_small());
}

#[test]
fn empty_limit_on_opposite_chain_is_representable() {
    let k = omega_op();
    let base = k.base().clone();
    let w = Weight::empty(&base, Variance::Covariant);
    let out = pointwise_limit(&k, &w, &PresheafDiagram::empty(&k), &Bounds::default()).unwrap();
    assert_eq!(out.verdict.certificate().unwrap().support(), &[0]);
}

#[test]
fn solution_set_for_terminal_of_opposite_chain() {
    let k = omega_op();
    match solution_set_search(&k, &ConeDiagram::empty(), &Bounds::default()).unwrap() {
        SolutionOutcome::Found(s) => {
            assert_eq!(s.cones, vec![(0, vec![])]);
            assert!(s.stabilized);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(solution_set_search(&nat(), &ConeDiagram::empty(), &Bounds::default()).unwrap(), SolutionOutcome::No(_)));
}

#[test]
fn closures_on_the_point() {
    let c = Category::finite("pt", Base::finset(), crate::base::Shape::terminal()).unwrap();
    let b = Bounds::default();
    let lim = phi_closure(&c, LimitClass::FiniteProducts, ClosureMode::Limits, 8, &b).unwrap();
    assert_eq!(lim.members.len(), 1);
    assert!(lim.stable);
    let colim = phi_closure(&c, LimitClass::FiniteProducts, ClosureMode::Colimits, 4, &b).unwrap();
    let mut sizes: Vec<usize> = colim.members.iter().map(|p| p.evaluate_value(0).unwrap().card()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![0, 1, 2, 3]);
    assert!(!colim.stable);
}

#[test]
fn representable_smallness_into_base() {
    let k = nat();
    let y3 = SmallPresheaf::representable(&k, 3).unwrap();
    let b = Bounds::default();
    let empty = Probe::Base(k.base().constant(0));
    let one = Probe::Base(k.base().constant(1));
    let r = representably_small_check(&k, &y3, &FunctorCategoryTarget::Base, &[empty, one], &b).unwrap();
    assert!(r.verdicts[0].is_not_small());
    assert!(r.verdicts[1].is_small());
}
