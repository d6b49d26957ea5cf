use proptest::prelude::*;
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::{Category, Obj};
use spcalc_core::presheaf::{
    certify, completeness_check, pointwise_limit, weighted_colimit, Completeness, LimitClass, PresheafDiagram, SmallPresheaf, Variance,
    Verdict, Weight,
};
use spcalc_core::Bounds;

mod common;
use common::{poset, thin};

const BUDGET: u64 = 1_000_000;

fn sizes(f: &SmallPresheaf, n: usize) -> Vec<usize> {
    (0..n as Obj).map(|a| f.evaluate_value(a).unwrap().card()).collect()
}

proptest! {
    #[test]
    fn representables_evaluate_to_homs((n, le) in poset()) {
        let k = thin(n, &le);
        for a in 0..n as Obj {
            let y = SmallPresheaf::representable(&k, a).unwrap();
            for b in 0..n as Obj {
                prop_assert_eq!(y.evaluate_value(b).unwrap().card(), k.hom_size(b, a));
            }
        }
    }

    #[test]
    fn yoneda_embedding_is_fully_faithful((n, le) in poset()) {
        let k = thin(n, &le);
        for a in 0..n as Obj {
            for b in 0..n as Obj {
                let (ya, yb) = (SmallPresheaf::representable(&k, a).unwrap(), SmallPresheaf::representable(&k, b).unwrap());
                prop_assert_eq!(ya.hom_object(&yb, BUDGET).unwrap().card(), k.hom_size(a, b));
            }
        }
    }

    #[test]
    fn coproducts_of_representables_add_pointwise((n, le) in poset(), picks in prop::collection::vec(0usize..6, 0..4)) {
        let k = thin(n, &le);
        let objs: Vec<Obj> = picks.iter().map(|&p| (p % n) as Obj).collect();
        let m = objs.len();
        let d = PresheafDiagram::representables(&k, Shape::discrete(m), objs.clone(), objs.iter().map(|&a| k.identity(a)).collect()).unwrap();
        let w = Weight::discrete(k.base(), m, Variance::Contravariant);
        let c = weighted_colimit(k.base(), &k, &w, &d).unwrap();
        let expected: Vec<usize> = (0..n as Obj).map(|b| objs.iter().map(|&a| k.hom_size(b, a)).sum()).collect();
        prop_assert_eq!(sizes(&c, n), expected);
    }

    #[test]
    fn canonical_form_is_isomorphic((n, le) in poset(), a in 0usize..6) {
        let k = thin(n, &le);
        let y = SmallPresheaf::representable(&k, (a % n) as Obj).unwrap();
        let c = y.canonicalize().unwrap();
        prop_assert!(c.iso(&y, BUDGET).unwrap());
        prop_assert!(c.is_kan_closed().unwrap());
    }
}

#[test]
fn finite_presheaves_certify_small() {
    let k = Category::finite("c3", Base::finset(), Shape::chain(3)).unwrap();
    let y = SmallPresheaf::representable(&k, 1).unwrap();
    let v = certify(&y, &Bounds::default()).unwrap();
    let c = v.certificate().expect("small");
    assert!(c.iso(&y, BUDGET).unwrap());
    assert!(v.reverify(&y).unwrap());
}

#[test]
fn terminal_presheaf_depends_on_the_family() {
    let b = Bounds::default();
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let w = Weight::empty(nat.base(), Variance::Covariant);
    let v = pointwise_limit(&nat, &w, &PresheafDiagram::empty(&nat), &b).unwrap().verdict;
    assert!(matches!(v, Verdict::NotSmall { ref witness } if witness.family == "DiscreteNat"), "{}", v.label());
    let op = Category::builtin("OmegaChain", Base::finset()).unwrap().opposite();
    let w = Weight::empty(op.base(), Variance::Covariant);
    let v = pointwise_limit(&op, &w, &PresheafDiagram::empty(&op), &b).unwrap().verdict;
    assert_eq!(v.certificate().expect("small").support(), [0]);
}

#[test]
fn finite_chains_are_complete_and_discrete_nat_is_not() {
    let b = Bounds::default();
    let c = Category::finite("c3", Base::finset(), Shape::chain(3)).unwrap();
    assert_eq!(completeness_check(&c, LimitClass::FiniteLimits, &b).unwrap().verdict, Completeness::Complete);
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let r = completeness_check(&nat, LimitClass::FiniteProducts, &b).unwrap();
    assert_eq!(r.verdict, Completeness::Incomplete);
    assert!(r.solution_sets_agree);
}

#[test]
fn presheaves_with_broken_functoriality_are_rejected() {
    let k = Category::finite("c2", Base::finset(), Shape::chain(2)).unwrap();
    let base = k.base();
    // value 1 at 0, empty at 1: the action F(1) -> F(0) exists, but the
    // identity action at 0 is not an identity
    let actions = vec![vec![vec![vec![0, 0]]], vec![vec![vec![]]], vec![], vec![vec![vec![]]]];
    assert!(SmallPresheaf::new(&k, vec![0, 1], vec![base.constant(2), base.constant(0)], actions).is_err());
}
