mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use sdcat::alphabet::all_words;
use sdcat::automata::Graph;
use sdcat::shift::format::{build_bmap, emit_bmap, emit_shift, parse_bmap_text, parse_shift};
use sdcat::{Alphabet, BlockMap, PeriodicPoint, Presentation, Sym, Word};

/// The graph on allowed `(m-1)`-words of an SFT with window `m`, built
/// without going through the library's own construction.
fn de_bruijn(k: usize, forbidden: &[Word]) -> Presentation {
    let m = forbidden.iter().map(Vec::len).max().unwrap_or(1).max(2);
    let clean = |w: &[Sym]| !forbidden.iter().any(|f| w.windows(f.len()).any(|s| s == &f[..]));
    let states: Vec<Word> = all_words(k, m - 1).into_iter().filter(|w| clean(w)).collect();
    let mut g = Graph::new(states.len());
    for (i, u) in states.iter().enumerate() {
        for c in 0..k as Sym {
            let mut w = u.clone();
            w.push(c);
            if clean(&w) {
                let j = states.iter().position(|v| v[..] == w[1..]).unwrap();
                g.add_edge(i, c, j);
            }
        }
    }
    Presentation::from_graph(&Alphabet::numeric(k), &g)
}

fn words(x: &Presentation, n: usize) -> BTreeSet<Word> {
    x.words(n).unwrap().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_and_forbidden_words_give_the_same_language(ws in prop::collection::vec(prop::collection::vec(0..3 as Sym, 1..=3), 0..=3)) {
        let a = Presentation::from_forbidden(&Alphabet::numeric(3), ws.clone()).unwrap();
        let b = de_bruijn(3, &ws);
        for n in 0..=8 {
            prop_assert_eq!(words(&a, n), words(&b, n), "n = {}", n);
        }
    }

    #[test]
    fn maps_commute_with_the_shift(f in binary_ca(), w in prop::collection::vec(0..2 as Sym, 1..=8)) {
        let x = PeriodicPoint::new(w.clone());
        let n = w.len();
        let a = f.apply(&x.shift()).unwrap();
        let b = f.apply(&x).unwrap().shift();
        prop_assert_eq!(a.window(-(n as i64), 3 * n), b.window(-(n as i64), 3 * n));
    }

    #[test]
    fn composition_is_associative(f in binary_ca(), g in binary_ca(), h in binary_ca()) {
        let left = BlockMap::compose(&h, &BlockMap::compose(&g, &f).unwrap()).unwrap();
        let right = BlockMap::compose(&BlockMap::compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert!(BlockMap::maps_equal(&left, &right).unwrap());
    }

    #[test]
    fn mirror_is_an_involutive_functor(f in binary_ca(), g in binary_ca()) {
        let gf = BlockMap::compose(&g, &f).unwrap();
        let mirrored = BlockMap::compose(&g.mirror(), &f.mirror()).unwrap();
        prop_assert!(BlockMap::maps_equal(&gf.mirror(), &mirrored).unwrap());
        prop_assert!(BlockMap::maps_equal(&f.mirror().mirror(), &f).unwrap());
    }

    #[test]
    fn mirror_on_a_restricted_source(f in maps_into_full(golden(), 2)) {
        let back = f.mirror().mirror();
        prop_assert!(BlockMap::maps_equal(&back, &f).unwrap());
        prop_assert!(f.mirror().source().same_shift(&golden().reversed()));
    }

    #[test]
    fn shift_files_round_trip(x in binary_sft()) {
        let back = parse_shift(&emit_shift(&x)).unwrap();
        prop_assert!(back.same_shift(&x));
        let derived = x.reversed();
        prop_assert!(parse_shift(&emit_shift(&derived)).unwrap().same_shift(&derived));
    }

    #[test]
    fn map_files_round_trip(f in maps_into_full(norun3(), 3)) {
        let text = emit_bmap(&f, "x.shift", "y.shift");
        let g = build_bmap(&parse_bmap_text(&text).unwrap(), f.source(), f.target()).unwrap();
        prop_assert_eq!(g.entries(), f.entries());
        prop_assert_eq!((g.memory(), g.anticipation()), (f.memory(), f.anticipation()));
    }
}

#[test]
fn sofic_round_trip_keeps_the_language() {
    let x = even();
    let back = parse_shift(&emit_shift(&x)).unwrap();
    assert!(back.same_shift(&x));
    let pair = Presentation::full(&Alphabet::product(&Alphabet::numeric(2), &Alphabet::numeric(2)));
    let back = parse_shift(&emit_shift(&pair)).unwrap();
    assert_eq!(back.alphabet().names(), pair.alphabet().names());
    assert!(back.same_shift(&pair));
}
