mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use sdcat::alphabet::all_words;
use sdcat::dynamics::{
    chain_transitive_level, eventual_periodicity, orbit_subshift, power, spreading_nilpotent, EventualPeriodicity,
    POWER_TABLE_LIMIT,
};
use sdcat::{BlockMap, PeriodicPoint, Sym, Word};

fn powers_agree(f: &BlockMap, i: usize, j: usize) -> bool {
    BlockMap::maps_equal(&power(f, i).unwrap(), &power(f, j).unwrap()).unwrap()
}

fn orbit(f: &BlockMap, x: &[Sym], k: usize, p: usize) -> BTreeSet<Word> {
    let n = x.len();
    let mut y = PeriodicPoint::new(x.to_vec());
    for _ in 0..k {
        y = f.apply(&y).unwrap();
    }
    (0..p)
        .map(|_| {
            let w = y.window(0, n);
            y = f.apply(&y).unwrap();
            w
        })
        .collect()
}

fn constant(h: &BlockMap) -> bool {
    h.entries().iter().map(|(_, s)| *s).collect::<BTreeSet<_>>().len() == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eventual_periods_are_least(f in binary_ca()) {
        if let EventualPeriodicity::Found { preperiod: k, period: p } = eventual_periodicity(&f, 6, POWER_TABLE_LIMIT).unwrap() {
            prop_assert!(powers_agree(&f, k + p, k));
            for d in (1..p).filter(|d| p % d == 0) {
                prop_assert!(!powers_agree(&f, k + d, k), "period {} has divisor {}", p, d);
            }
            if k > 0 {
                prop_assert!(!powers_agree(&f, k - 1 + p, k - 1));
            }
        }
    }

    #[test]
    fn orbit_quotients_are_invariant_and_separate_orbits(f in binary_ca()) {
        let EventualPeriodicity::Found { preperiod: k, period: p } = eventual_periodicity(&f, 4, POWER_TABLE_LIMIT).unwrap() else {
            return Ok(());
        };
        let q = orbit_subshift(&f, k, p, 2).unwrap();
        let g = &q.map;
        prop_assert!(BlockMap::maps_equal(&BlockMap::compose(g, &f).unwrap(), g).unwrap());
        for n in 1..=4 {
            for x in all_words(2, n) {
                for y in all_words(2, n) {
                    let gx = g.apply(&PeriodicPoint::new(x.clone())).unwrap().window(0, n);
                    let gy = g.apply(&PeriodicPoint::new(y.clone())).unwrap().window(0, n);
                    prop_assert_eq!(gx == gy, orbit(&f, &x, k, p) == orbit(&f, &y, k, p));
                }
            }
        }
    }

    #[test]
    fn chain_transitivity_is_lost_for_good(f in binary_ca()) {
        let levels: Vec<bool> = (1..=5).map(|n| chain_transitive_level(&f, n).unwrap()).collect();
        for pair in levels.windows(2) {
            prop_assert!(pair[0] || !pair[1]);
        }
    }

    #[test]
    fn spreading_or_nilpotent_rules_have_only_constant_invariants(f in binary_ca()) {
        let report = spreading_nilpotent(&f, 4).unwrap();
        if report.spreading.is_none() && report.nilpotent.is_none() {
            return Ok(());
        }
        let x = f.source();
        for code in 0..256usize {
            let table: Vec<Sym> = (0..8).map(|i| (code >> i & 1) as Sym).collect();
            let h = from_table(x, &full(2), 1, 1, &table).unwrap();
            if BlockMap::maps_equal(&BlockMap::compose(&h, &f).unwrap(), &h).unwrap() {
                prop_assert!(constant(&h), "invariant map {:?}", h.entries());
            }
        }
    }
}
