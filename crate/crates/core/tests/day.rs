use proptest::prelude::*;
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::{Category, Obj};
use spcalc_core::day::{
    approximate_colimit, closedness_check, coherence_spot_check, convolve, from_monoidal, internal_hom, ApproximatelyMonoidal, Closedness,
    MonoidalStructure, PromonoidalStructure, Side, TensorRule,
};
use spcalc_core::presheaf::SmallPresheaf;
use spcalc_core::Bounds;

const BUDGET: u64 = 1_000_000;

fn xor() -> (Category, PromonoidalStructure) {
    let k = Category::finite("Z2", Base::finset(), Shape::discrete(2)).unwrap();
    let m = MonoidalStructure::new("xor", &k, TensorRule::Table(vec![0, 1, 1, 0]), Some(0), 16).unwrap();
    (k.clone(), from_monoidal(&m).unwrap())
}

fn on_z2(k: &Category, a: usize, b: usize) -> SmallPresheaf {
    SmallPresheaf::from_values(k, vec![0, 1], vec![k.base().constant(a), k.base().constant(b)]).unwrap()
}

fn sizes(f: &SmallPresheaf, n: usize) -> Vec<usize> {
    (0..n as Obj).map(|a| f.evaluate_value(a).unwrap().card()).collect()
}

fn max_chain(n: usize) -> (Category, PromonoidalStructure) {
    let k = Category::finite(format!("c{n}"), Base::finset(), Shape::chain(n)).unwrap();
    let m = MonoidalStructure::new("max", &k, TensorRule::Max, Some(0), 16).unwrap();
    (k.clone(), from_monoidal(&m).unwrap())
}

proptest! {
    #[test]
    fn xor_convolution_is_commutative_and_unital(a in 0usize..4, b in 0usize..4, c in 0usize..4, d in 0usize..4) {
        let (k, p) = xor();
        let (f, g) = (on_z2(&k, a, b), on_z2(&k, c, d));
        let fg = convolve(&f, &g, &p).unwrap();
        let gf = convolve(&g, &f, &p).unwrap();
        prop_assert!(fg.iso(&gf, BUDGET).unwrap());
        prop_assert_eq!(sizes(&fg, 2), vec![a * c + b * d, a * d + b * c]);
        let unit = SmallPresheaf::representable(&k, 0).unwrap();
        prop_assert!(convolve(&f, &unit, &p).unwrap().iso(&f, BUDGET).unwrap());
    }

    #[test]
    fn max_convolution_of_representables_is_representable(n in 1usize..5, a in 0usize..5, b in 0usize..5) {
        let (k, p) = max_chain(n);
        let (a, b) = ((a % n) as Obj, (b % n) as Obj);
        let c = convolve(&SmallPresheaf::representable(&k, a).unwrap(), &SmallPresheaf::representable(&k, b).unwrap(), &p).unwrap();
        prop_assert!(c.iso(&SmallPresheaf::representable(&k, a.max(b)).unwrap(), BUDGET).unwrap());
    }
}

#[test]
fn internal_hom_is_right_adjoint_on_z2() {
    let (k, p) = xor();
    let b = Bounds::default();
    for (g, h, f) in [((1, 1), (2, 3), (1, 0)), ((2, 0), (1, 2), (1, 1)), ((0, 1), (2, 2), (2, 1))] {
        let (g, h, f) = (on_z2(&k, g.0, g.1), on_z2(&k, h.0, h.1), on_z2(&k, f.0, f.1));
        let v = internal_hom(&g, &h, &p, Side::Right, &b).unwrap();
        let gh = v.certificate().expect("finite");
        let left = convolve(&f, &g, &p).unwrap().hom_object(&h, BUDGET).unwrap().card();
        assert_eq!(left, f.hom_object(gh, BUDGET).unwrap().card());
    }
}

#[test]
fn coherence_holds_on_a_corpus() {
    let (k, p) = max_chain(3);
    let corpus: Vec<SmallPresheaf> = (0..3).map(|a| SmallPresheaf::representable(&k, a).unwrap()).collect();
    let r = coherence_spot_check(&p, &corpus, &Bounds::default()).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    assert!(r.triples > 0);
}

#[test]
fn closedness_on_finite_and_infinite_ambients() {
    let b = Bounds::default();
    assert!(matches!(closedness_check(&xor().1, &b).unwrap().verdict, Closedness::Closed));
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let min = MonoidalStructure::unchecked("min", &nat, TensorRule::Min, None);
    let r = closedness_check(&from_monoidal(&min).unwrap(), &b).unwrap();
    assert!(matches!(r.verdict, Closedness::ConditionFails { b: 0, d: 0, .. }));
    assert!(!r.premise_holds);
}

#[test]
fn semigroup_tensor_without_unit_is_rejected_by_the_checked_constructor() {
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    assert!(MonoidalStructure::new("min", &nat, TensorRule::Min, Some(0), 8).is_err());
}

#[test]
fn approximate_colimit_of_a_constant_chain_is_the_stage() {
    let (k, p) = max_chain(2);
    let m = MonoidalStructure::new("max", &k, TensorRule::Max, Some(0), 16).unwrap();
    let fam = ApproximatelyMonoidal::new(Shape::chain(2), vec![m.clone(), m]).unwrap();
    let q = approximate_colimit(&fam).unwrap();
    let (y0, y1) = (SmallPresheaf::representable(&k, 0).unwrap(), SmallPresheaf::representable(&k, 1).unwrap());
    let a = convolve(&y0, &y1, &p).unwrap();
    let b = convolve(&y0, &y1, &q).unwrap();
    assert!(a.iso(&b, BUDGET).unwrap());
}
