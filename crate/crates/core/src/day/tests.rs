use super::*;
use crate::base::{Base, Shape};
use crate::category::Category;

fn z2() -> (Category, PromonoidalStructure) {
    let k = Category::finite("Z2", Base::finset(), Shape::discrete(2)).unwrap();
    let m = MonoidalStructure::new("xor", &k, TensorRule::Table(vec![0, 1, 1, 0]), Some(0), 16).unwrap();
    let p = from_monoidal(&m).unwrap();
    (k, p)
}

fn on_z2(k: &Category, a: usize, b: usize) -> SmallPresheaf {
    let base = k.base();
    SmallPresheaf::from_values(k, vec![0, 1], vec![base.constant(a), base.constant(b)]).unwrap()
}

fn sizes(f: &SmallPresheaf, objs: &[Obj]) -> Vec<usize> {
    objs.iter().map(|&a| f.evaluate_value(a).unwrap().card()).collect()
}

#[test]
fn xor_convolution() {
    let (k, p) = z2();
    let c = convolve(&on_z2(&k, 1, 2), &on_z2(&k, 3, 1), &p).unwrap();
    assert_eq!(sizes(&c, &[0, 1]), vec![5, 7]);
}

#[test]
fn xor_internal_hom() {
    let (k, p) = z2();
    let v = internal_hom(&on_z2(&k, 1, 1), &on_z2(&k, 2, 3), &p, Side::Right, &Bounds::default()).unwrap();
    assert_eq!(sizes(v.certificate().unwrap(), &[0, 1]), vec![6, 6]);
}

#[test]
fn closedness_examples() {
    let b = Bounds::default();
    let op = Category::builtin("OmegaChain", Base::bool2()).unwrap().opposite();
    let m = MonoidalStructure::new("max", &op, TensorRule::Max, Some(0), 8).unwrap();
    let r = closedness_check(&from_monoidal(&m).unwrap(), &b).unwrap();
    assert!(matches!(r.verdict, Closedness::ClosedOnProbes), "{r:?}");
    let nat = Category::builtin("DiscreteNat", Base::finset()).unwrap();
    let m = MonoidalStructure::new("min", &nat, TensorRule::Min, None, 8).unwrap();
    let r = closedness_check(&from_monoidal(&m).unwrap(), &b).unwrap();
    assert!(matches!(r.verdict, Closedness::ConditionFails { b: 0, d: 0, .. }), "{r:?}");
    assert!(!r.premise_holds);
}

#[test]
fn max_on_opposite_chain_is_representable() {
    let op = Category::builtin("OmegaChain", Base::bool2()).unwrap().opposite();
    let m = MonoidalStructure::new("max", &op, TensorRule::Max, Some(0), 8).unwrap();
    let p = from_monoidal(&m).unwrap();
    let y5 = SmallPresheaf::representable(&op, 5).unwrap();
    assert!(p.p(3, 5).unwrap().iso(&y5, 1000).unwrap());
    let y3 = SmallPresheaf::representable(&op, 3).unwrap();
    let c = convolve(&y3, &y5, &p).unwrap();
    assert!(c.iso(&y5, 1000).unwrap());
}

#[test]
fn min_then_max_on_two_chain() {
    let k = Category::finite("2", Base::bool2(), Shape::chain(2)).unwrap();
    let min = MonoidalStructure::new("min", &k, TensorRule::Min, Some(1), 8).unwrap();
    let max = MonoidalStructure::new("max", &k, TensorRule::Max, Some(0), 8).unwrap();
    let fam = ApproximatelyMonoidal::new(Shape::chain(2), vec![min, max]).unwrap();
    let p = approximate_colimit(&fam).unwrap();
    let y1 = SmallPresheaf::representable(&k, 1).unwrap();
    assert!(p.p(0, 1).unwrap().iso(&y1, 1000).unwrap());
}

#[test]
fn associativity_on_z2() {
    let (k, p) = z2();
    let corpus: Vec<SmallPresheaf> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| on_z2(&k, a, b)).collect();
    let r = coherence_spot_check(&p, &corpus[..4], &Bounds::default()).unwrap();
    assert!(r.failures.is_empty());
}
