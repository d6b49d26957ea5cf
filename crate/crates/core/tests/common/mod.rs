#![allow(dead_code)]

use proptest::prelude::*;
use spcalc_core::base::{Base, Shape};
use spcalc_core::category::Category;

/// A random partial order on `n` points, upward along the index order.
pub fn poset() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..6).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n))).prop_map(|(n, bits)| {
        let mut le = vec![false; n * n];
        for a in 0..n {
            le[a * n + a] = true;
            for b in a + 1..n {
                le[a * n + b] = bits[a * n + b];
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
        (n, le)
    })
}

pub fn thin(n: usize, le: &[bool]) -> Category {
    Category::finite("P", Base::finset(), Shape::thin("P", n, |a, b| le[a * n + b])).unwrap()
}
