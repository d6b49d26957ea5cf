use proptest::prelude::*;
use spcalc_core::base::{Base, BaseObject, Diagram, Shape};

const BUDGET: u64 = 1_000_000;

fn bases() -> Vec<Base> {
    vec![Base::finset(), Base::bool2(), Base::fin_presheaf(Shape::walking_arrow())]
}

proptest! {
    #[test]
    fn finset_hom_counts_functions(m in 0usize..4, n in 0usize..4) {
        let b = Base::finset();
        let h = b.hom_object(&b.constant(m), &b.constant(n), BUDGET).unwrap();
        prop_assert_eq!(h.card(), n.pow(m as u32));
    }

    #[test]
    fn tensor_hom_adjunction_on_global_maps(x in 0usize..3, y in 0usize..3, z in 0usize..3) {
        for b in bases() {
            let (x, y, z) = (b.constant(x), b.constant(y), b.constant(z));
            let xy = b.tensor(&x, &y).unwrap();
            let left = b.morphisms(&xy, &z, BUDGET).unwrap().len();
            let yz = b.hom_object(&y, &z, BUDGET).unwrap();
            let right = b.morphisms(&x, &yz, BUDGET).unwrap().len();
            prop_assert_eq!(left, right, "base {}", b.name());
        }
    }

    #[test]
    fn unit_is_neutral(x in 0usize..4) {
        for b in bases() {
            let x = b.constant(x);
            let ux = b.tensor(&b.unit(), &x).unwrap();
            prop_assert!(b.iso(&ux, &x, BUDGET).unwrap());
        }
    }

    #[test]
    fn arrow_diagram_colimit_is_target_and_limit_is_source(
        (m, map) in (0usize..4, 1usize..4).prop_flat_map(|(m, n)| (Just(m), prop::collection::vec(0..n, m).prop_map(move |v| (n, v))))
    ) {
        let b = Base::finset();
        let (n, f) = map;
        let d = Shape::walking_arrow();
        let u = d.non_identity_arrows().next().unwrap();
        let mut maps: Vec<Vec<Vec<usize>>> = (0..d.arrow_count()).map(|a| vec![(0..[m, n][d.arrow(a).src]).collect()]).collect();
        maps[u] = vec![f];
        let diagram = Diagram { objects: vec![BaseObject::finset(m), BaseObject::finset(n)], maps };
        prop_assert_eq!(b.colimit(&d, &diagram).unwrap().object.card(), n);
        prop_assert_eq!(b.limit(&d, &diagram).unwrap().object.card(), m);
    }

    #[test]
    fn coequalizer_of_identical_maps_is_the_target(m in 0usize..4, n in 1usize..4, seed in any::<u64>()) {
        let b = Base::finset();
        let d = Shape::parallel_pair();
        let f: Vec<usize> = (0..m).map(|i| (seed as usize).wrapping_add(i * 7) % n).collect();
        let maps = (0..d.arrow_count())
            .map(|a| if d.is_identity(a) { vec![(0..[m, n][d.arrow(a).src]).collect()] } else { vec![f.clone()] })
            .collect();
        let diagram = Diagram { objects: vec![BaseObject::finset(m), BaseObject::finset(n)], maps };
        prop_assert_eq!(b.colimit(&d, &diagram).unwrap().object.card(), n);
        prop_assert_eq!(b.limit(&d, &diagram).unwrap().object.card(), m);
    }
}

#[test]
fn bool2_truncates_and_homs_are_implication() {
    let b = Base::bool2();
    assert_eq!(b.constant(5).card(), 1);
    assert!(b.object_of_size(2).is_err());
    for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
        let h = b.hom_object(&b.from_bool(x), &b.from_bool(y), BUDGET).unwrap();
        assert_eq!(h.card(), usize::from(!x || y), "{x} -> {y}");
    }
}

#[test]
fn mixing_backends_is_rejected() {
    let b = Base::bool2();
    assert!(b.tensor(&BaseObject::finset(2), &b.unit()).is_err());
}

#[test]
fn hom_functor_coend_counts_objects() {
    // the coend of d(-, -) over a discrete shape has one class per object
    let b = Base::finset();
    for n in 1..4 {
        let d = Shape::discrete(n);
        let t = spcalc_core::base::Bifunctor::hom_functor(&b, &d);
        assert_eq!(b.coend(&d, &t).unwrap().object.card(), n);
        assert_eq!(b.end(&d, &t).unwrap().object.card(), 1);
    }
}

#[test]
fn coend_of_the_hom_functor_on_a_chain_is_one_class_per_object() {
    let b = Base::finset();
    let d = Shape::chain(3);
    let t = spcalc_core::base::Bifunctor::hom_functor(&b, &d);
    assert_eq!(b.coend(&d, &t).unwrap().object.card(), 3);
}
