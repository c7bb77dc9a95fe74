mod common;

use common::*;
use proptest::prelude::*;
use sdcat::analysis::kernel_set;
use sdcat::colimits::{coequalizer_id, local_closure};
use sdcat::limits::connecting_map;
use sdcat::{BlockMap, Caps, CategoryTag, Sym};

fn invariant_maps(f: &BlockMap) -> Vec<BlockMap> {
    (0..256usize)
        .map(|code| {
            let table: Vec<Sym> = (0..8).map(|i| (code >> i & 1) as Sym).collect();
            from_table(f.source(), &full(2), 1, 1, &table).unwrap()
        })
        .filter(|h| BlockMap::maps_equal(&BlockMap::compose(h, f).unwrap(), h).unwrap())
        .collect()
}

fn elementary(code: usize) -> BlockMap {
    let x = full(2);
    BlockMap::new(&x, &x, 1, 1, |w| (code >> (w[0] * 4 + w[1] * 2 + w[2]) & 1) as Sym).unwrap()
}

#[test]
fn coequalizers_are_universal_among_small_invariants() {
    let k3: CategoryTag = "K3".parse().unwrap();
    let caps = Caps { window_cap: 4, ..Caps::default() };
    let rules = [0, 1, 4, 5, 8, 12, 19, 29, 36, 51, 55, 108, 127, 128, 136, 170, 200, 204, 238, 240, 254];
    let mut settled = 0;
    for code in rules {
        let f = elementary(code);
        let c = coequalizer_id(&f, k3, &caps).unwrap();
        if !c.is_exists() {
            continue;
        }
        settled += 1;
        let q = &c.legs[0];
        assert!(BlockMap::maps_equal(&BlockMap::compose(q, &f).unwrap(), q).unwrap(), "rule {code}");
        let trivial = c.object().count_words(1) == 1;
        for h in invariant_maps(&f) {
            if trivial {
                let outputs: std::collections::BTreeSet<Sym> = h.entries().iter().map(|(_, s)| *s).collect();
                assert_eq!(outputs.len(), 1, "rule {code}");
            }
            let u = connecting_map(q, &h, 4);
            assert!(matches!(u, Ok(Some(_))), "rule {code}: {:?} does not factor", h.entries());
        }
    }
    assert!(settled >= 15, "only {settled} coequalizers were settled");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn local_closures_are_equivalences_containing_their_generator(f in binary_ca(), g in binary_ca(), n in 1usize..=3) {
        let small = kernel_set(&f).unwrap();
        let large = kernel_set(&BlockMap::compose(&g, &f).unwrap()).unwrap();
        let a = local_closure(&small, n).unwrap();
        let b = local_closure(&large, n).unwrap();
        prop_assert!(a.relation.is_reflexive().unwrap());
        prop_assert!(a.relation.is_symmetric());
        prop_assert!(a.relation.transitivity_failure(6).unwrap().is_none());
        prop_assert!(small.is_subrelation_of(&a.relation).unwrap());
        prop_assert!(a.relation.is_subrelation_of(&b.relation).unwrap());
    }
}
