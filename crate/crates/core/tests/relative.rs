use std::sync::Arc;

use critlab_core::catalog::small_groups;
use critlab_core::group::GroupRef;
use critlab_core::relative::{detect_local_subcritical, disintegrate, is_balanced, relativize, slice, RelativeError};
use critlab_core::subgroup::subgroups;
use critlab_core::subset::{product_set, GroupSubset, PairTag, Side};
use critlab_core::sweep::sweep_pairs;

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).all(|d| n % d != 0)
}

/// Deterministic spread of masks across `1..2^n`.
fn sample_masks(n: usize, count: u64) -> impl Iterator<Item = u64> {
    let full = (1u64 << n) - 1;
    (0..count).map(move |k| (k.wrapping_mul(0x9E37_79B9_7F4A_7C15) % full) + 1)
}

#[test]
fn slices_integrate_to_the_measure() {
    for g in small_groups(12) {
        let g: GroupRef = Arc::new(g);
        for n in subgroups(&g, true) {
            for mask in sample_masks(g.order(), 40) {
                let a = GroupSubset::from_mask(g.clone(), mask);
                let view = disintegrate(&a, &n).unwrap();
                let total: usize = view.slices.iter().map(|s| s.len()).sum();
                assert_eq!(total, a.len(), "{} {mask:b}", g.name());
                assert_eq!(view.integral() * critlab_core::rational::Q::from_integer(g.order() as i64), critlab_core::rational::Q::from_integer(a.len() as i64));
            }
        }
    }
}

#[test]
fn slice_products_land_in_product_slices() {
    for g in small_groups(8) {
        let g: GroupRef = Arc::new(g);
        for n in subgroups(&g, true) {
            let (_, embed) = n.to_group();
            for (ma, mb) in sample_masks(g.order(), 12).zip(sample_masks(g.order(), 12).skip(5)) {
                let a = GroupSubset::from_mask(g.clone(), ma);
                let b = GroupSubset::from_mask(g.clone(), mb);
                let ab = product_set(&a, &b).unwrap();
                for x in g.elements() {
                    for y in g.elements() {
                        let sa = slice(&a, &n, x, Side::Left).unwrap();
                        let sb = slice(&b, &n, y, Side::Right).unwrap();
                        let sab = GroupSubset::from_elements(
                            g.clone(),
                            ab.iter().map(|z| g.mul(g.mul(g.inv(x), z), g.inv(y))).filter(|&z| n.contains(z)),
                        )
                        .unwrap();
                        for s in sa.iter() {
                            for t in sb.iter() {
                                assert!(sab.contains(g.mul(embed[s], embed[t])));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn composite_orders_are_locally_subcritical() {
    for g in small_groups(10).into_iter().filter(|g| !is_prime(g.order())) {
        let g: GroupRef = Arc::new(g);
        let n = g.order();
        let rows = sweep_pairs(&g, |a, b, ab| {
            let tag = PairTag::from_counts(a.count_ones() as usize, b.count_ones() as usize, ab.count_ones() as usize, n);
            (tag == PairTag::CriticalSum).then_some((a, b))
        })
        .unwrap();
        for (a, b) in rows.into_iter().step_by(3) {
            let sa = GroupSubset::from_mask(g.clone(), a);
            let sb = GroupSubset::from_mask(g.clone(), b);
            assert!(detect_local_subcritical(&sa, &sb, true).is_some(), "{} {a:b} {b:b}", g.name());
        }
    }
}

#[test]
fn prime_orders_have_no_local_witness() {
    for g in small_groups(7).into_iter().filter(|g| is_prime(g.order())) {
        let g: GroupRef = Arc::new(g);
        let a = GroupSubset::from_elements(g.clone(), [0, 1]).unwrap();
        assert!(detect_local_subcritical(&a, &a, true).is_none());
    }
}

#[test]
fn relativize_conclusions_hold() {
    for g in small_groups(8) {
        let g: GroupRef = Arc::new(g);
        let n = g.order();
        let normals: Vec<_> = subgroups(&g, true).into_iter().filter(|u| !u.is_trivial() && !u.is_whole()).collect();
        let rows = sweep_pairs(&g, |a, b, ab| {
            let tag = PairTag::from_counts(a.count_ones() as usize, b.count_ones() as usize, ab.count_ones() as usize, n);
            (tag == PairTag::CriticalSum).then_some((a, b))
        })
        .unwrap();
        for (a, b) in rows.into_iter().step_by(2) {
            let sa = GroupSubset::from_mask(g.clone(), a);
            let sb = GroupSubset::from_mask(g.clone(), b);
            for u in &normals {
                if !is_balanced(&sa, u).unwrap() || !is_balanced(&sb, u).unwrap() {
                    continue;
                }
                match relativize(&sa, &sb, u) {
                    Ok(_) => {}
                    Err(RelativeError::ConclusionFails(msg)) => panic!("{} {a:b} {b:b}: {msg}", g.name()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
