use std::sync::Arc;

use critlab_core::catalog::{parse_group, small_groups};
use critlab_core::group::GroupRef;
use critlab_core::hom::homomorphisms;
use critlab_core::reduction::split_characters;
use critlab_core::reduction::{kemperman_reduce, kneser_reduce};
use critlab_core::subset::{classify_pair, GroupSubset, PairTag};
use critlab_core::sweep::{sweep_pairs, MaskGroup};
use proptest::prelude::*;

/// `{h : AB + h = AB}` straight from the table.
fn brute_stabilizer(g: &GroupRef, ab: u64) -> Vec<usize> {
    let mg = MaskGroup::new(g).unwrap();
    (0..g.order()).filter(|&h| mg.translate_right(ab, h) == ab).collect()
}

#[test]
fn kneser_kernel_is_the_stabilizer() {
    for g in small_groups(10).into_iter().filter(|g| g.is_abelian()) {
        let g: GroupRef = Arc::new(g);
        let rows = sweep_pairs(&g, |a, b, ab| {
            let tag = PairTag::from_counts(a.count_ones() as usize, b.count_ones() as usize, ab.count_ones() as usize, g.order());
            matches!(tag, PairTag::SubCritical | PairTag::CriticalSum).then_some((a, b, ab))
        })
        .unwrap();
        for (a, b, ab) in rows.into_iter().step_by(7) {
            let sa = GroupSubset::from_mask(g.clone(), a);
            let sb = GroupSubset::from_mask(g.clone(), b);
            let c = kneser_reduce(&sa, &sb).unwrap();
            assert_eq!(c.kernel.elements().collect::<Vec<_>>(), brute_stabilizer(&g, ab), "{} {a:b} {b:b}", g.name());
            assert!(c.validate(&sa, &sb).structurally_valid());
        }
    }
}

#[test]
fn kemperman_certificates_validate() {
    for g in small_groups(12).into_iter().filter(|g| !g.is_abelian() && g.order() <= 8) {
        let g: GroupRef = Arc::new(g);
        let rows = sweep_pairs(&g, |a, b, ab| {
            let tag = PairTag::from_counts(a.count_ones() as usize, b.count_ones() as usize, ab.count_ones() as usize, g.order());
            (tag == PairTag::SubCritical).then_some((a, b))
        })
        .unwrap();
        assert!(!rows.is_empty());
        for (a, b) in rows.into_iter().step_by(5) {
            let sa = GroupSubset::from_mask(g.clone(), a);
            let sb = GroupSubset::from_mask(g.clone(), b);
            let c = kemperman_reduce(&sa, &sb).unwrap();
            let check = c.validate(&sa, &sb);
            assert!(check.structurally_valid(), "{} {a:b} {b:b} {check:?}", g.name());
            assert!(c.kernel.is_normal());
        }
    }
}

#[test]
fn kneser_refuses_nonabelian_and_supercritical() {
    let d3: GroupRef = Arc::new(parse_group("D3").unwrap());
    let e = GroupSubset::singleton(d3.clone(), 0);
    assert!(kneser_reduce(&e, &e).is_err());
    let z11: GroupRef = Arc::new(parse_group("Z11").unwrap());
    let a = GroupSubset::from_elements(z11.clone(), [0, 1]).unwrap();
    let b = GroupSubset::from_elements(z11.clone(), [0, 3, 7]).unwrap();
    assert_eq!(classify_pair(&a, &b).unwrap().tag, PairTag::SuperCritical);
    assert!(kneser_reduce(&a, &b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn characters_split_into_inverse_halves(n in 3usize..13, m in 3usize..9) {
        let g: GroupRef = Arc::new(parse_group(&format!("Z{n}")).unwrap());
        let t: GroupRef = Arc::new(parse_group(&format!("Z{m}")).unwrap());
        let inv = |table: &[usize]| table.iter().map(|&y| t.inv(y)).collect::<Vec<_>>();
        let chars: Vec<_> = homomorphisms(&g, &t, false)
            .unwrap()
            .into_iter()
            .filter(|c| inv(&c.table()) != c.table())
            .collect();
        let (s, check) = split_characters(&chars).unwrap();
        prop_assert_eq!(s.len(), check.len());
        prop_assert_eq!(2 * s.len(), chars.len());
        let mut seen: Vec<Vec<usize>> = s.iter().chain(check.iter()).map(|c| c.table()).collect();
        seen.sort();
        let mut all: Vec<Vec<usize>> = chars.iter().map(|c| c.table()).collect();
        all.sort();
        prop_assert_eq!(seen, all);
        for (x, y) in s.iter().zip(&check) {
            prop_assert_eq!(inv(&x.table()), y.table());
        }
    }
}
