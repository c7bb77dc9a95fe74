mod common;

use common::*;
use proptest::prelude::*;
use sdcat::alphabet::all_words;
use sdcat::Presentation;

fn words_upto(k: usize, n: usize) -> Vec<Vec<u32>> {
    (0..=n).flat_map(|l| all_words(k, l)).collect()
}

fn shifts() -> Vec<Presentation> {
    vec![full(2), golden(), norun3(), even(), forbidden(3, &[&[0, 1], &[2, 2, 2]])]
}

#[test]
fn syntactic_monoids_are_associative() {
    for x in shifts() {
        let m = x.syntactic_monoid().unwrap();
        let n = m.size();
        assert!(n <= 30, "monoid of size {n}");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
                }
            }
        }
        let e = m.identity();
        assert!((0..n).all(|a| m.mul(a, e) == a && m.mul(e, a) == a));
    }
}

#[test]
fn classes_multiply_like_words() {
    for x in shifts() {
        let m = x.syntactic_monoid().unwrap();
        let k = x.alphabet().len();
        let ws = words_upto(k, 4);
        for u in &ws {
            for v in &ws {
                let uv: Vec<u32> = u.iter().chain(v).copied().collect();
                assert_eq!(m.class_of(&uv), m.mul(m.class_of(u), m.class_of(v)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimization_is_idempotent_and_keeps_the_language(x in binary_sft()) {
        let d = x.dfa();
        let once = d.minimize();
        let twice = once.minimize();
        prop_assert_eq!(once.n(), twice.n());
        for w in words_upto(2, 10) {
            prop_assert_eq!(d.accepts(&w), once.accepts(&w));
            prop_assert_eq!(once.accepts(&w), twice.accepts(&w));
        }
    }

    #[test]
    fn idempotent_factors_are_idempotent(x in binary_sft(), w in prop::collection::vec(0..2u32, 1..=12)) {
        let m = x.syntactic_monoid().unwrap();
        let seq: Vec<_> = w.iter().map(|&s| m.generator(s)).collect();
        if let Some((i, j)) = m.find_idempotent_factor(&seq) {
            let e = m.class_of(&w[i..j]);
            prop_assert_eq!(m.mul(e, e), e);
        }
    }
}
