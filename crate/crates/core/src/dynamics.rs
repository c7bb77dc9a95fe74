//! Dynamics of cellular automata `f: X → X`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::alphabet::{Alphabet, Sym, Word};
use crate::analysis::{equalizer_set, fiber_product, is_injective, is_surjective, kernel_set};
use crate::automata::Graph;
use crate::error::{invalid, Error, Result};
use crate::limits::connecting_map;
use crate::shift::{BlockMap, PeriodicPoint, Presentation};
use crate::verdict::{Evidence, Verdict};

fn require_endo(f: &BlockMap) -> Result<()> {
    if !f.is_endomorphism() {
        return invalid("the map is not an endomorphism");
    }
    Ok(())
}

/// `f^n`, with unread outer coordinates dropped.
pub fn power(f: &BlockMap, n: usize) -> Result<BlockMap> {
    require_endo(f)?;
    let mut p = BlockMap::identity(f.source());
    for _ in 0..n {
        p = BlockMap::compose(f, &p)?.minimal_window();
    }
    Ok(p)
}

/// Reversibility (bijectivity); YES carries the inverse when one is found
/// within `radius_cap`.
pub fn is_reversible(f: &BlockMap, radius_cap: usize) -> Result<Verdict> {
    require_endo(f)?;
    let inj = is_injective(f)?;
    if inj.is_no() {
        return Ok(Verdict::no().witness(inj.witness.unwrap()).note("not injective"));
    }
    let sur = is_surjective(f)?;
    if sur.is_no() {
        return Ok(Verdict::no().witness(sur.witness.unwrap()).note("not surjective"));
    }
    let id = BlockMap::identity(f.source());
    match connecting_map(f, &id, radius_cap) {
        Ok(Some(u)) => {
            let g = u.retarget(f.source(), f.source())?;
            Ok(Verdict::yes().certificate(Evidence::Map(g.minimal_window())))
        }
        _ => Ok(Verdict::yes().bound(format!("inverse radius > {radius_cap}")).note("bijective; inverse not constructed")),
    }
}

/// Default cap on the rule table of a power in [`eventual_periodicity`].
pub const POWER_TABLE_LIMIT: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventualPeriodicity {
    /// `f^k = f^{k+p}` with `k` and then `p` minimal.
    Found { preperiod: usize, period: usize },
    NotFoundBelowCap(usize),
    /// `f^power` would need a rule table with more than `table_limit`
    /// entries; no coincidence among the earlier powers.
    TableLimit { power: usize, table_limit: u128 },
}

/// Compares `f^0, f^1, …, f^cap` semantically, stopping early once a power
/// would need a rule table larger than `table_limit`.
pub fn eventual_periodicity(f: &BlockMap, cap: usize, table_limit: u128) -> Result<EventualPeriodicity> {
    require_endo(f)?;
    let mut powers = vec![BlockMap::identity(f.source())];
    for j in 1..=cap {
        let prev = &powers[j - 1];
        if f.source().count_words(prev.width() + f.width() - 1) > table_limit {
            return Ok(EventualPeriodicity::TableLimit { power: j, table_limit });
        }
        let next = BlockMap::compose(f, &powers[j - 1])?.minimal_window();
        for (i, q) in powers.iter().enumerate() {
            if BlockMap::maps_equal(q, &next)? {
                return Ok(EventualPeriodicity::Found { preperiod: i, period: j - i });
            }
        }
        powers.push(next);
    }
    Ok(EventualPeriodicity::NotFoundBelowCap(cap))
}

fn proper_divisors(p: usize) -> Vec<usize> {
    (1..p).filter(|q| p % q == 0).collect()
}

/// Every point has eventual period exactly `p`: the sets
/// `{x : f^k(x) = f^{k+q}(x)}` for proper divisors `q` of `p` are empty.
pub fn is_visibly_eventually_periodic(f: &BlockMap, k: usize, p: usize) -> Result<Verdict> {
    let fk = power(f, k)?;
    for q in proper_divisors(p) {
        let fkq = power(f, k + q)?;
        let e = equalizer_set(&fk, &fkq)?;
        if !e.is_empty() {
            let n = (1..).find(|&n| !e.periodic_words(n).map(|v| v.is_empty()).unwrap_or(true)).unwrap();
            let w = e.periodic_words(n)?.remove(0);
            return Ok(Verdict::no()
                .witness(Evidence::Periodic(f.source().alphabet().clone(), PeriodicPoint::new(w)))
                .note(format!("this point has eventual period dividing {q}")));
        }
    }
    Ok(Verdict::yes())
}

/// The orbit relation `{(x, y) : {f^{k+j}(x)}_j = {f^{k+j}(y)}_j}`.
pub fn orbit_relation(f: &BlockMap, k: usize, p: usize) -> Result<Presentation> {
    let fk = power(f, k)?;
    let mut rel: Option<Presentation> = None;
    for j in 0..p {
        let r = fiber_product(&power(f, k + j)?, &fk)?;
        let pres = r.presentation().clone();
        rel = Some(match rel {
            None => pres,
            Some(acc) => acc.union(&pres)?,
        });
    }
    Ok(rel.expect("p > 0"))
}

/// Output of [`orbit_subshift`].
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    pub object: Presentation,
    pub map: BlockMap,
    /// Half-width of the windows gathered in each orbit symbol.
    pub reach: usize,
}

/// The quotient `g(x) = {f^k(x), …, f^{k+p-1}(x)}`, realized as a block map
/// whose symbol at `i` is the unordered set of the windows
/// `f^{k+j}(x)_{[i-n, i+n]}`. The least `n ≤ reach_cap` with
/// `Ker g` equal to the orbit relation is used.
pub fn orbit_subshift(f: &BlockMap, k: usize, p: usize, reach_cap: usize) -> Result<OrbitQuotient> {
    if p == 0 {
        return invalid("eventual period must be positive");
    }
    let x = f.source();
    let hs: Vec<BlockMap> = (0..p).map(|j| power(f, k + j)).collect::<Result<_>>()?;
    let m = hs.iter().map(|h| h.memory()).max().unwrap();
    let a = hs.iter().map(|h| h.anticipation()).max().unwrap();
    let hs: Vec<BlockMap> = hs.iter().map(|h| h.padded(m, a)).collect::<Result<_>>()?;
    let target_rel = orbit_relation(f, k, p)?;
    let names = x.alphabet();
    for n in 0..=reach_cap {
        let (mm, aa) = (m + n, a + n);
        let width = mm + aa + 1;
        let inner = hs[0].width();
        let symbol_of = |w: &[Sym]| -> BTreeSet<Word> {
            hs.iter()
                .map(|h| w.windows(inner).map(|v| h.rule(v).unwrap()).collect::<Word>())
                .collect()
        };
        let mut ids: HashMap<BTreeSet<Word>, Sym> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        for w in x.words(width)? {
            let s = symbol_of(&w);
            if !ids.contains_key(&s) {
                let label: Vec<String> = s.iter().map(|v| names.render(v).replace(['.', ' '], "_")).collect();
                labels.push(label.join("|"));
                ids.insert(s, ids.len() as Sym);
            }
        }
        if labels.is_empty() {
            labels.push("e".into());
        }
        let alpha = Alphabet::new(&labels)?;
        let full = Presentation::full(&alpha);
        let g = BlockMap::unchecked(x, &full, mm, aa, |w| ids[&symbol_of(w)])?;
        if kernel_set(&g)?.presentation().same_shift(&target_rel) {
            let img = g.image()?;
            let g = g.retarget(x, &img)?;
            return Ok(OrbitQuotient { object: img, map: g, reach: n });
        }
    }
    invalid(format!("no window half-width up to {reach_cap} separates orbits"))
}

/// Strong connectivity of the level-`n` chain graph on `B_n(X)`, where
/// `u → v` iff some point reads `u` on `[0, n)` and its image reads `v`.
pub fn chain_transitive_level(f: &BlockMap, n: usize) -> Result<bool> {
    require_endo(f)?;
    let x = f.source();
    let words = x.words(n)?;
    if words.len() <= 1 {
        return Ok(true);
    }
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let (m, a) = (f.memory(), f.anticipation());
    let mut g = Graph::new(words.len());
    let mut seen = HashSet::new();
    for w in x.words(m + n + a)? {
        let u = &w[m..m + n];
        let v = f.apply_word(&w).unwrap();
        let e = (index[&u.to_vec()], index[&v]);
        if seen.insert(e) {
            g.add_edge(e.0, 0, e.1);
        }
    }
    Ok(g.is_strongly_connected())
}

/// First level `≤ cap` at which chain transitivity fails.
pub fn chain_transitivity_failure(f: &BlockMap, cap: usize) -> Result<Option<usize>> {
    for n in 1..=cap {
        if !chain_transitive_level(f, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadingReport {
    pub spreading: Option<Sym>,
    /// `(n, s)` with `f^n(X) = {∞s∞}`.
    pub nilpotent: Option<(usize, Sym)>,
    /// Set when the image sequence neither stabilized nor collapsed by the
    /// cap.
    pub cap_reached: bool,
}

/// A state `s` spreads when `s` at the centre or at the neighbour on one
/// fixed side forces the output `s`.
pub fn spreading_state(f: &BlockMap) -> Result<Option<Sym>> {
    require_endo(f)?;
    let x = f.source();
    let g = f.padded(f.memory().max(1), f.anticipation().max(1))?;
    let c = g.memory();
    for s in x.uniform_points() {
        for side in [c + 1, c - 1] {
            let ok = g.entries().iter().all(|(w, out)| !(w[c] == s || w[side] == s) || *out == s);
            if ok {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Largest subset construction attempted for one image in the sequence
/// `f^n(X)`; past it the sequence is reported as not settled.
pub const IMAGE_STATE_LIMIT: usize = 1 << 12;

pub fn spreading_nilpotent(f: &BlockMap, cap: usize) -> Result<SpreadingReport> {
    let spreading = spreading_state(f)?;
    let x = f.source();
    let mut y = x.clone();
    let mut cap_reached = true;
    let mut nilpotent = None;
    for n in 1..=cap {
        let restricted = BlockMap::unchecked(&y, x, f.memory(), f.anticipation(), |w| f.rule(w).unwrap())?;
        let next = match restricted.image_within(IMAGE_STATE_LIMIT) {
            Ok(p) => p,
            Err(Error::Budget { .. }) => break,
            Err(e) => return Err(e),
        };
        if next.count_words(1) == 1 && !next.is_empty() {
            nilpotent = Some((n, next.words(1)?[0][0]));
            cap_reached = false;
            break;
        }
        if next.same_shift(&y) {
            cap_reached = false;
            break;
        }
        y = next;
    }
    if x.count_words(1) == 1 && !x.is_empty() {
        nilpotent = Some((0, x.words(1)?[0][0]));
    }
    Ok(SpreadingReport { spreading, nilpotent, cap_reached })
}

/// Visibly blocking test for a set `W` of words of length `ℓ`. The
/// invariance condition is decided exactly; the no-crossing condition is
/// checked for `f^n`, `n ≤ depth`.
pub fn visibly_blocking(f: &BlockMap, w_set: &[Word], depth: usize) -> Result<Verdict> {
    require_endo(f)?;
    let x = f.source();
    let l = match w_set.first() {
        Some(w) => w.len(),
        None => return Ok(Verdict::yes().note("empty word set")),
    };
    if w_set.iter().any(|w| w.len() != l) {
        return invalid("words of the blocking set have different lengths");
    }
    let ws: HashSet<&Word> = w_set.iter().collect();
    let alpha = x.alphabet();
    let (m, a) = (f.memory(), f.anticipation());
    for w in x.words(m + l + a)? {
        if ws.contains(&w[m..m + l].to_vec()) {
            let out = f.apply_word(&w).unwrap();
            if !ws.contains(&out) {
                return Ok(Verdict::no().witness(Evidence::Word(alpha.clone(), w)).note("the window leaves the set"));
            }
        }
    }
    for n in 1..=depth {
        let fn_ = power(f, n)?;
        let (mm, aa) = (fn_.memory(), fn_.anticipation());
        // right side: agree on [0, ∞), compare outputs on [ℓ, mm)
        if mm > l {
            let right_len = mm + aa;
            for r in x.words(right_len.max(l))? {
                if !ws.contains(&r[..l].to_vec()) {
                    continue;
                }
                let lefts: Vec<Word> =
                    x.words(mm)?.into_iter().filter(|u| x.contains_word(&[u.as_slice(), r.as_slice()].concat())).collect();
                let outs: Vec<Word> = lefts
                    .iter()
                    .map(|u| {
                        let full = [u.as_slice(), r.as_slice()].concat();
                        // outputs at positions l..mm, read from windows starting at i
                        (l..mm).map(|i| fn_.rule(&full[i..i + mm + aa + 1]).unwrap()).collect()
                    })
                    .collect();
                if let Some(i) = (1..outs.len()).find(|&i| outs[i] != outs[0]) {
                    return Ok(Verdict::no()
                        .witness(Evidence::Text(format!(
                            "{} and {} before {} differ after {n} steps",
                            alpha.render(&lefts[0]),
                            alpha.render(&lefts[i]),
                            alpha.render(&r)
                        )))
                        .note("information crosses the blocking word from the left"));
                }
            }
        }
        // left side: agree on (-∞, ℓ), compare outputs on [ℓ - aa, 0)
        if aa > l {
            for u in x.words(mm + aa)? {
                if !ws.contains(&u[mm + aa - l..].to_vec()) {
                    continue;
                }
                let rights: Vec<Word> =
                    x.words(aa)?.into_iter().filter(|v| x.contains_word(&[u.as_slice(), v.as_slice()].concat())).collect();
                let outs: Vec<Word> = rights
                    .iter()
                    .map(|v| {
                        let full = [u.as_slice(), v.as_slice()].concat();
                        (0..aa - l).map(|st| fn_.rule(&full[st..st + mm + aa + 1]).unwrap()).collect()
                    })
                    .collect();
                if let Some(i) = (1..outs.len()).find(|&i| outs[i] != outs[0]) {
                    return Ok(Verdict::no()
                        .witness(Evidence::Text(format!(
                            "{} followed by {} or {} differ after {n} steps",
                            alpha.render(&u),
                            alpha.render(&rights[0]),
                            alpha.render(&rights[i])
                        )))
                        .note("information crosses the blocking word from the right"));
                }
            }
        }
    }
    Ok(Verdict::yes().bound(format!("no-crossing checked up to {depth} steps")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIMIT: u128 = POWER_TABLE_LIMIT;

    fn full(k: usize) -> Presentation {
        Presentation::full(&Alphabet::numeric(k))
    }

    fn ca(x: &Presentation, m: usize, a: usize, rule: impl Fn(&[Sym]) -> Sym) -> BlockMap {
        BlockMap::unchecked(x, x, m, a, rule).unwrap()
    }

    #[test]
    fn reversibility() {
        let x = full(2);
        let s = BlockMap::shift(&x);
        let v = is_reversible(&s, 3).unwrap();
        assert!(v.is_yes());
        let inv = v.map_certificate().unwrap();
        let back = BlockMap::compose(inv, &s).unwrap();
        assert!(BlockMap::maps_equal(&back, &BlockMap::identity(&x)).unwrap());

        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        let v = is_reversible(&flip, 3).unwrap();
        assert!(BlockMap::maps_equal(v.map_certificate().unwrap(), &flip).unwrap());

        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        assert!(is_reversible(&xor, 3).unwrap().is_no());
    }

    #[test]
    fn eventual_periods() {
        let x = full(2);
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        assert_eq!(eventual_periodicity(&flip, 8, LIMIT).unwrap(), EventualPeriodicity::Found { preperiod: 0, period: 2 });
        let zero = ca(&x, 0, 0, |_| 0);
        assert_eq!(eventual_periodicity(&zero, 8, LIMIT).unwrap(), EventualPeriodicity::Found { preperiod: 1, period: 1 });
        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        assert_eq!(eventual_periodicity(&xor, 6, LIMIT).unwrap(), EventualPeriodicity::NotFoundBelowCap(6));
        let rot = ca(&full(3), 0, 0, |w| (w[0] + 1) % 3);
        assert_eq!(eventual_periodicity(&rot, 8, LIMIT).unwrap(), EventualPeriodicity::Found { preperiod: 0, period: 3 });
        let xor3 = ca(&x, 1, 1, |w| w[0] ^ w[1] ^ w[2]);
        assert_eq!(eventual_periodicity(&xor3, 16, LIMIT).unwrap(), EventualPeriodicity::TableLimit { power: 8, table_limit: LIMIT });
    }

    #[test]
    fn visible_periodicity() {
        let x = full(2);
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        assert!(is_visibly_eventually_periodic(&flip, 0, 2).unwrap().is_yes());
        assert!(is_visibly_eventually_periodic(&BlockMap::identity(&x), 0, 1).unwrap().is_yes());
        // symbol 2a + b; the first track flips where the second reads 1
        let two = full(4);
        let f = ca(&two, 0, 0, |w| w[0] ^ ((w[0] & 1) << 1));
        assert_eq!(eventual_periodicity(&f, 8, LIMIT).unwrap(), EventualPeriodicity::Found { preperiod: 0, period: 2 });
        let v = is_visibly_eventually_periodic(&f, 0, 2).unwrap();
        assert!(v.is_no());
        match v.witness {
            Some(Evidence::Periodic(_, p)) => assert!(p.word.iter().all(|s| s & 1 == 0)),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn orbit_quotient_of_flip_is_xor() {
        let x = full(2);
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        let q = orbit_subshift(&flip, 0, 2, 3).unwrap();
        let gf = BlockMap::compose(&q.map, &flip).unwrap();
        assert!(BlockMap::maps_equal(&gf, &q.map).unwrap());
        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        assert!(kernel_set(&q.map).unwrap().presentation().same_shift(kernel_set(&xor).unwrap().presentation()));
        assert_eq!(q.reach, 1);
        for n in 1..6 {
            assert_eq!(q.object.count_words(n), 1 << (n + 1));
        }
    }

    #[test]
    fn orbit_quotient_of_rotation_keeps_differences() {
        let x = full(3);
        let rot = ca(&x, 0, 0, |w| (w[0] + 1) % 3);
        let q = orbit_subshift(&rot, 0, 3, 3).unwrap();
        let gf = BlockMap::compose(&q.map, &rot).unwrap();
        assert!(BlockMap::maps_equal(&gf, &q.map).unwrap());
        // points are identified exactly with their rotations, so the
        // quotient keeps the difference sequence and has entropy log 3
        for n in 1..5 {
            assert_eq!(q.object.count_words(n), 3u128.pow(n as u32 + 2 * q.reach as u32 - 1));
        }
        let pts: Vec<Word> = x.periodic_words(2).unwrap();
        for u in &pts {
            for v in &pts {
                let same = (0..3).any(|j| u.iter().map(|s| (s + j) % 3).eq(v.iter().copied()));
                let gu = q.map.apply(&PeriodicPoint::new(u.clone())).unwrap();
                let gv = q.map.apply(&PeriodicPoint::new(v.clone())).unwrap();
                assert_eq!(same, gu.canonical() == gv.canonical(), "{u:?} {v:?}");
            }
        }
    }

    #[test]
    fn identity_orbit_quotient() {
        let x = full(2);
        let q = orbit_subshift(&BlockMap::identity(&x), 0, 1, 2).unwrap();
        assert_eq!(q.reach, 0);
        assert!(q.object.count_words(3) == 8);
    }

    #[test]
    fn chain_levels() {
        let x = full(2);
        let s = BlockMap::shift(&x);
        assert!(chain_transitive_level(&s, 3).unwrap());
        assert!(!chain_transitive_level(&BlockMap::identity(&x), 1).unwrap());
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        assert!(chain_transitive_level(&flip, 1).unwrap());
        assert!(!chain_transitive_level(&flip, 2).unwrap());
        assert_eq!(chain_transitivity_failure(&s, 5).unwrap(), None);
    }

    #[test]
    fn chain_levels_are_antitone() {
        let x = full(2);
        let maps = [
            BlockMap::shift(&x),
            BlockMap::identity(&x),
            ca(&x, 0, 0, |w| 1 - w[0]),
            ca(&x, 0, 1, |w| w[0] ^ w[1]),
            ca(&x, 0, 1, |w| w[0] & w[1]),
            ca(&x, 1, 1, |w| w[0] ^ w[2]),
        ];
        for f in &maps {
            let levels: Vec<bool> = (1..=5).map(|n| chain_transitive_level(f, n).unwrap()).collect();
            for n in 1..levels.len() {
                assert!(levels[n - 1] || !levels[n], "{levels:?}");
            }
        }
    }

    #[test]
    fn spreading_and_nilpotent() {
        let x = full(2);
        let and = ca(&x, 0, 1, |w| w[0] & w[1]);
        let r = spreading_nilpotent(&and, 8).unwrap();
        assert_eq!(r.spreading, Some(0));
        // images forbid 1 0^k 1 for ever longer k and never settle
        assert_eq!(r.nilpotent, None);
        assert!(r.cap_reached);
        let r = spreading_nilpotent(&BlockMap::identity(&x), 8).unwrap();
        assert_eq!((r.spreading, r.nilpotent), (None, None));
        let zero = ca(&x, 0, 0, |_| 0);
        assert_eq!(spreading_nilpotent(&zero, 8).unwrap().nilpotent, Some((1, 0)));
        let f = ca(&full(3), 0, 0, |w| w[0].saturating_sub(1));
        let r = spreading_nilpotent(&f, 8).unwrap();
        assert_eq!(r.nilpotent, Some((2, 0)));
    }

    #[test]
    fn blocking() {
        let x = full(2);
        let id = BlockMap::identity(&x);
        assert!(visibly_blocking(&id, &[vec![0]], 4).unwrap().is_yes());
        let s = BlockMap::shift(&x);
        assert!(visibly_blocking(&s, &[vec![0]], 2).unwrap().is_no());
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        assert!(visibly_blocking(&flip, &[vec![0]], 2).unwrap().is_no());
        // a 0 never changes and a 1 survives only next to another 1
        let g = ca(&x, 1, 1, |w| if w[1] == 0 { 0 } else { w[0] | w[2] });
        assert!(visibly_blocking(&g, &[vec![0]], 3).unwrap().is_yes());
        let v = visibly_blocking(&g, &[vec![1]], 2).unwrap();
        assert!(v.is_no());
    }
}
