#![allow(dead_code)]

use proptest::prelude::*;
use sdcat::automata::Graph;
use sdcat::{Alphabet, BlockMap, Presentation, Sym, Word};

pub fn full(k: usize) -> Presentation {
    Presentation::full(&Alphabet::numeric(k))
}

pub fn forbidden(k: usize, words: &[&[Sym]]) -> Presentation {
    Presentation::from_forbidden(&Alphabet::numeric(k), words.iter().map(|w| w.to_vec()).collect()).unwrap()
}

pub fn golden() -> Presentation {
    forbidden(2, &[&[1, 1]])
}

pub fn norun3() -> Presentation {
    forbidden(2, &[&[0, 0, 0], &[1, 1, 1]])
}

pub fn even() -> Presentation {
    let mut g = Graph::new(2);
    g.add_edge(0, 0, 0);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 1, 0);
    Presentation::from_graph(&Alphabet::numeric(2), &g)
}

/// The map with window `[-memory, anticipation]` whose rule on the `i`-th
/// source word (in the order of `Presentation::words`) is `table[i]`.
pub fn from_table(x: &Presentation, y: &Presentation, memory: usize, anticipation: usize, table: &[Sym]) -> Option<BlockMap> {
    let words: Vec<Word> = x.words(memory + anticipation + 1).ok()?;
    let rule = |w: &[Sym]| table[words.iter().position(|v| v == w).expect("source word")];
    BlockMap::new(x, y, memory, anticipation, rule).ok()
}

/// Maps from `x` to the full shift on `k` symbols with window `[-m, a]`,
/// `m, a ≤ 1`.
pub fn maps_into_full(x: Presentation, k: usize) -> impl Strategy<Value = BlockMap> {
    (0usize..=1, 0usize..=1).prop_flat_map(move |(m, a)| {
        let x = x.clone();
        let n = x.count_words(m + a + 1) as usize;
        prop::collection::vec(0..k as Sym, n).prop_map(move |t| from_table(&x, &full(k), m, a, &t).expect("full target"))
    })
}

/// Binary cellular automata of radius at most one.
pub fn binary_ca() -> impl Strategy<Value = BlockMap> {
    maps_into_full(full(2), 2)
}

/// Small forbidden-word shifts over two symbols.
pub fn binary_sft() -> impl Strategy<Value = Presentation> {
    prop::collection::vec(prop::collection::vec(0..2 as Sym, 2..=3), 0..=2)
        .prop_map(|ws| Presentation::from_forbidden(&Alphabet::numeric(2), ws).unwrap())
}
