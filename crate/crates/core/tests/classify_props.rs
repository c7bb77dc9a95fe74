mod common;

use common::*;
use proptest::prelude::*;
use sdcat::classify::{classify, is_split_epic, is_split_monic};
use sdcat::oracle::{brute_decide, strong_case_refuted, Bounds, Property};
use sdcat::{BlockMap, Caps, CategoryTag, Evidence};

fn onto_image() -> impl Strategy<Value = BlockMap> {
    prop::sample::select(vec![full(2), golden()])
        .prop_flat_map(|x| maps_into_full(x, 2))
        .prop_map(|f| f.retarget(f.source(), &f.image().unwrap()).unwrap())
}

fn cat(tag: &str) -> CategoryTag {
    tag.parse().unwrap()
}

/// The unpointed categories the map belongs to.
fn categories(f: &BlockMap) -> Vec<CategoryTag> {
    ["K2", "K3", "T2", "T3", "M2", "M3"].into_iter().map(cat).filter(|c| c.check_morphism(f).is_ok()).collect()
}

fn caps() -> Caps {
    Caps { p_cap: 3, radius_cap: 2, window_cap: 4, ..Caps::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn split_certificates_compose_to_identities(f in onto_image()) {
        for c in categories(&f) {
            let v = is_split_epic(&f, c, &caps()).unwrap();
            if v.answer.is_yes() {
                let Some(Evidence::Map(g)) = &v.certificate else { panic!("split epic without a section") };
                let fg = BlockMap::compose(&f, g).unwrap();
                prop_assert!(BlockMap::maps_equal(&fg, &BlockMap::identity(f.target())).unwrap());
            }
            let v = is_split_monic(&f, c, &caps()).unwrap();
            if v.answer.is_yes() {
                let Some(Evidence::Map(r)) = &v.certificate else { panic!("split monic without a retraction") };
                let rf = BlockMap::compose(r, &f).unwrap();
                prop_assert!(BlockMap::maps_equal(&rf, &BlockMap::identity(f.source())).unwrap());
            }
        }
    }

    #[test]
    fn classifications_respect_the_implication_lattice(f in onto_image()) {
        for c in categories(&f) {
            let row = classify(&f, c, &caps()).unwrap();
            prop_assert_eq!(row.lattice_violation(), None, "{}", c);
        }
    }

    #[test]
    fn strong_refutations_survive_a_preimage_search(f in onto_image()) {
        let v = is_split_epic(&f, cat("K3"), &caps()).unwrap();
        if let Some(Evidence::Strong(failure)) = &v.witness {
            for case in &failure.cases {
                prop_assert!(strong_case_refuted(&f, case, 8), "{:?}", case);
            }
        }
    }

    #[test]
    fn brute_force_finds_no_section_the_engine_ruled_out(f in maps_into_full(full(2), 2)) {
        if !f.image().unwrap().same_shift(f.target()) {
            return Ok(());
        }
        let v = is_split_epic(&f, cat("K2"), &caps()).unwrap();
        if v.answer.is_no() {
            prop_assert!(!brute_decide(Property::SplitEpic, &f, &Bounds::default()).unwrap());
        }
    }
}
