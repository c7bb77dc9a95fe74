//! Brute-force reference semantics for small instances.
//!
//! Everything here works at the level of words and explicit eventually
//! periodic points. Nothing calls the automata-based decision procedures,
//! so agreement between the two is a meaningful test.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::alphabet::{all_words, Alphabet, Sym, Word};
use crate::analysis::{is_injective, is_preinjective, is_surjective};
use crate::category::CategoryTag;
use crate::classify::{is_monic, is_regular_monic, StrongCase};
use crate::error::{Error, Result};
use crate::shift::{BlockMap, EventuallyPeriodicPoint, PeriodicPoint, Presentation};
use crate::verdict::{Answer, Caps};

/// Bounds for exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub source: Presentation,
    pub target: Presentation,
    /// Maps have window `[-radius, radius]`.
    pub radius: usize,
    /// Longest period of the periodic tails that are tried.
    pub period_bound: usize,
    /// Longest word (or transient) that is tried.
    pub word_bound: usize,
    /// Largest number of candidates generated before giving up.
    pub budget: usize,
}

impl EnumerationSpec {
    pub fn new(source: &Presentation, target: &Presentation, radius: usize) -> EnumerationSpec {
        EnumerationSpec {
            source: source.clone(),
            target: target.clone(),
            radius,
            period_bound: 3,
            word_bound: 6,
            budget: crate::DEFAULT_BUDGET,
        }
    }
}

/// Every block map with window `[-r, r]` from the source to the target, in
/// lexicographic order of rule tables (the first source word is the most
/// significant digit). Rules whose image leaves the target are skipped.
pub fn enumerate_block_maps(spec: &EnumerationSpec) -> Result<Vec<BlockMap>> {
    let n = 2 * spec.radius + 1;
    let words = spec.source.words_within(n, spec.budget)?;
    let k = spec.target.alphabet().len();
    let total = (k as f64).powi(words.len() as i32);
    if total > spec.budget as f64 {
        return Err(Error::Budget { needed: total.min(usize::MAX as f64) as usize, budget: spec.budget });
    }
    let total = k.pow(words.len() as u32);
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let maps: Vec<Option<BlockMap>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let digits = digits(code, k, words.len());
            BlockMap::new(&spec.source, &spec.target, spec.radius, spec.radius, |w| digits[index[&w.to_vec()]]).ok()
        })
        .collect();
    Ok(maps.into_iter().flatten().collect())
}

fn digits(mut code: usize, k: usize, len: usize) -> Vec<Sym> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = (code % k) as Sym;
        code /= k;
    }
    out
}

/// Properties with a definition-level reference implementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Surjective,
    Injective,
    InjectiveOnPeriodic,
    Preinjective,
    /// Monic in K2, by the test objects that are orbit closures of
    /// eventually periodic points.
    Monic,
    /// Regular monic in K2: injective with an image cut out by its own
    /// `m`-words for some `m ≤ word_bound / 2`.
    RegularMonic,
    SplitEpic,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Surjective,
        Property::Injective,
        Property::InjectiveOnPeriodic,
        Property::Preinjective,
        Property::Monic,
        Property::RegularMonic,
        Property::SplitEpic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Surjective => "epic",
            Property::Injective => "injective",
            Property::InjectiveOnPeriodic => "injective-on-periodic",
            Property::Preinjective => "preinjective",
            Property::Monic => "monic",
            Property::RegularMonic => "regular-monic",
            Property::SplitEpic => "split-epic",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Property> {
        let s = s.trim();
        if s == "surjective" {
            return Ok(Property::Surjective);
        }
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown property '{s}'")))
    }
}

/// Bounds for [`brute_decide`].
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub period: usize,
    pub word: usize,
    /// Word length for the language-level surjectivity check, which is cheap
    /// and needs longer words than the point-level checks (the rule that
    /// outputs 1 on 011, 101, 110 first misses a word of length 8).
    pub factor_word: usize,
    pub radius: usize,
    pub budget: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { period: 3, word: 6, factor_word: 10, radius: 1, budget: 1 << 20 }
    }
}

fn lcm_upto(p: usize) -> usize {
    (1..=p.max(1)).fold(1, |acc, n| acc / crate::alphabet::gcd(acc, n) * n)
}

/// All `∞u.wv∞` in `x` with `|u|, |v| ≤ period` and `|w| ≤ word`.
fn eventually_periodic_points(x: &Presentation, b: &Bounds) -> Result<Vec<EventuallyPeriodicPoint>> {
    let k = x.alphabet().len();
    let mut tails = Vec::new();
    for n in 1..=b.period {
        tails.extend(all_words(k, n).into_iter().filter(|u| x.contains_periodic(u)));
    }
    let mut out = Vec::new();
    for len in 0..=b.word {
        for w in all_words(k, len) {
            for u in &tails {
                for v in &tails {
                    if x.contains_asymptotic(u, &w, v) {
                        out.push(EventuallyPeriodicPoint::new(u.clone(), w.clone(), v.clone()));
                        if out.len() > b.budget {
                            return Err(Error::Budget { needed: out.len(), budget: b.budget });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Values of `f(x)` on a window that determines it among the enumerated
/// points. Windows are `[-P - pad, word + P + pad)` with `P` the lcm of the
/// tail periods, which covers a full period of both tails of `x` and of
/// `f(x)` whenever the map is no wider than `pad`.
fn images(f: &BlockMap, r: &Reference) -> Vec<Word> {
    let (m, w) = (f.memory(), f.width());
    if w > r.pad {
        return images(f, &Reference::with_pad(&r.source, &r.bounds, r.points.clone(), w));
    }
    let k = r.source.alphabet().len();
    let table = dense_rule(f, k);
    let len = r.windows.first().map_or(0, Vec::len);
    r.extended
        .iter()
        .map(|ext| {
            let src = &ext[r.pad - m..r.pad + len + w - 1 - m];
            src.windows(w).map(|s| table[encode(s, k)]).collect()
        })
        .collect()
}

fn encode(s: &[Sym], k: usize) -> usize {
    s.iter().fold(0, |acc, &c| acc * k + c as usize)
}

/// The rule as an array indexed by the base-`k` value of the window.
fn dense_rule(f: &BlockMap, k: usize) -> Vec<Sym> {
    let mut table = vec![Sym::MAX; k.pow(f.width() as u32)];
    for (w, &s) in f.table() {
        table[encode(w, k)] = s;
    }
    table
}

fn brute_surjective(f: &BlockMap, b: &Bounds) -> Result<bool> {
    let n = b.factor_word.max(b.word);
    let (kx, ky) = (f.source().alphabet().len(), f.target().alphabet().len());
    let size = ky.checked_pow(n as u32).filter(|&s| s <= b.budget).ok_or(Error::Budget { needed: usize::MAX, budget: b.budget })?;
    let table = dense_rule(f, kx);
    let mut hit = vec![false; size];
    for w in f.source().words_within(n + f.width() - 1, b.budget)? {
        let image: Word = w.windows(f.width()).map(|s| table[encode(s, kx)]).collect();
        hit[encode(&image, ky)] = true;
    }
    Ok(f.target().words_within(n, b.budget)?.iter().all(|w| hit[encode(w, ky)]))
}

fn brute_injective(f: &BlockMap, r: &Reference) -> bool {
    let mut seen: HashMap<Word, usize> = HashMap::new();
    for (i, image) in images(f, r).into_iter().enumerate() {
        if let Some(j) = seen.insert(image, i) {
            if r.windows[j] != r.windows[i] {
                return false;
            }
        }
    }
    true
}

fn brute_injective_on_periodic(f: &BlockMap, b: &Bounds) -> Result<bool> {
    let x = f.source();
    let m = f.memory() as i64;
    // points of different small periods meet at a common multiple
    for n in 1..=lcm_upto(b.period) {
        let mut seen: HashMap<Word, Word> = HashMap::new();
        for u in all_words(x.alphabet().len(), n) {
            if !x.contains_periodic(&u) {
                continue;
            }
            let p = PeriodicPoint::new(u.clone());
            let img: Word = (0..n as i64).map(|i| f.rule(&p.window(i - m, f.width())).expect("point windows are words")).collect();
            if let Some(prev) = seen.insert(img, u.clone()) {
                if prev != u {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn brute_preinjective(f: &BlockMap, r: &Reference) -> bool {
    let imgs = images(f, r);
    for members in &r.groups {
        let mut seen: HashMap<&Word, usize> = HashMap::new();
        for &i in members {
            if let Some(j) = seen.insert(&imgs[i], i) {
                if r.windows[j] != r.windows[i] {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_regular_monic(f: &BlockMap, r: &Reference) -> Result<bool> {
    let b = &r.bounds;
    if !brute_injective(f, r) {
        return Ok(false);
    }
    let img: HashSet<Word> = f
        .source()
        .words_within(b.word + f.width() - 1, b.budget)?
        .iter()
        .map(|w| f.apply_word(w).expect("source words"))
        .collect();
    let y = f.target();
    // some m such that every target word of length `word` whose m-words
    // are image words is itself an image word; m stays well below `word`
    for m in 1..=b.word / 2 {
        let small: HashSet<Word> = img.iter().flat_map(|w| w.windows(m).map(|s| s.to_vec()).collect::<Vec<_>>()).collect();
        let closed = y
            .words_within(b.word, b.budget)?
            .iter()
            .filter(|w| w.windows(m).all(|s| small.contains(s)))
            .all(|w| img.contains(w));
        if closed {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Backtracking over rule tables of candidate sections; a partial table
/// is rejected as soon as a fully assigned window breaks `f ∘ g = id` or
/// leaves the language of the source.
fn brute_split_epic(f: &BlockMap, b: &Bounds) -> Result<bool> {
    let (x, y) = (f.source(), f.target());
    let xwords: HashSet<Word> = x.words_within(f.width(), b.budget)?.into_iter().collect();
    for r in 0..=b.radius {
        let n = 2 * r + 1;
        let vars = y.words_within(n, b.budget)?;
        let index: HashMap<Word, usize> = vars.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let ctx = y.words_within(n + f.width() - 1, b.budget)?;
        let scopes: Vec<(Vec<usize>, Sym)> = ctx
            .iter()
            .map(|w| ((0..f.width()).map(|t| index[&w[t..t + n]]).collect(), w[f.memory() + r]))
            .collect();
        // constraints become checkable once their last variable is set
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
        for (c, (scope, _)) in scopes.iter().enumerate() {
            due[*scope.iter().max().unwrap()].push(c);
        }
        let mut table: Vec<Sym> = vec![0; vars.len()];
        let mut nodes = 0usize;
        let k = x.alphabet().len() as Sym;
        if split_search(0, &mut table, &due, &scopes, f, &xwords, k, &mut nodes, b.budget)? {
            let g = BlockMap::unchecked(y, x, r, r, |w| table[index[w]])?;
            if g.validate().is_ok() && BlockMap::maps_equal(&BlockMap::compose(f, &g)?, &BlockMap::identity(y))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn split_search(
    v: usize,
    table: &mut Vec<Sym>,
    due: &[Vec<usize>],
    scopes: &[(Vec<usize>, Sym)],
    f: &BlockMap,
    xwords: &HashSet<Word>,
    k: Sym,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    if v == table.len() {
        return Ok(true);
    }
    for s in 0..k {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget { needed: *nodes, budget });
        }
        table[v] = s;
        let ok = due[v].iter().all(|&c| {
            let (scope, centre) = &scopes[c];
            let out: Word = scope.iter().map(|&i| table[i]).collect();
            xwords.contains(&out) && f.rule(&out) == Some(*centre)
        });
        if ok && split_search(v + 1, table, due, scopes, f, xwords, k, nodes, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Reference decider for maps out of one source, with the enumerated
/// eventually periodic points of the source and their windows computed once.
pub struct Reference {
    source: Presentation,
    bounds: Bounds,
    points: Vec<EventuallyPeriodicPoint>,
    pad: usize,
    windows: Vec<Word>,
    extended: Vec<Word>,
    /// Indices of points with the same tails and transient length; these
    /// are asymptotic to each other.
    groups: Vec<Vec<usize>>,
}

impl Reference {
    pub fn new(source: &Presentation, bounds: &Bounds) -> Result<Reference> {
        let mut points = eventually_periodic_points(source, bounds)?;
        // the same point is often listed under several presentations
        let mut seen = HashSet::new();
        points.retain(|x| seen.insert(x.window(-(lcm_upto(bounds.period) as i64), bounds.word + 2 * lcm_upto(bounds.period))));
        Ok(Reference::with_pad(source, bounds, points, 2 * bounds.radius + 1))
    }

    fn with_pad(source: &Presentation, bounds: &Bounds, points: Vec<EventuallyPeriodicPoint>, pad: usize) -> Reference {
        let p = lcm_upto(bounds.period) as i64;
        let lo = -p - pad as i64;
        let len = (bounds.word as i64 + p + pad as i64 - lo) as usize;
        let windows = points.iter().map(|x| x.window(lo, len)).collect();
        let extended = points.iter().map(|x| x.window(lo - pad as i64, len + 2 * pad)).collect();
        let mut by_shape: HashMap<(&Word, usize, &Word), Vec<usize>> = HashMap::new();
        for (i, x) in points.iter().enumerate() {
            by_shape.entry((&x.left, x.center.len(), &x.right)).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = by_shape.into_values().collect();
        groups.sort();
        Reference { source: source.clone(), bounds: *bounds, points, pad, windows, extended, groups }
    }

    pub fn decide(&self, property: Property, f: &BlockMap) -> Result<bool> {
        if !f.source().same_shift(&self.source) {
            return crate::error::mismatch("map from a different source");
        }
        let b = &self.bounds;
        match property {
            Property::Surjective => brute_surjective(f, b),
            Property::Injective | Property::Monic => Ok(brute_injective(f, self)),
            Property::InjectiveOnPeriodic => brute_injective_on_periodic(f, b),
            Property::Preinjective => Ok(brute_preinjective(f, self)),
            Property::RegularMonic => brute_regular_monic(f, self),
            Property::SplitEpic => brute_split_epic(f, b),
        }
    }
}

/// Decides `property` for `f` by exhaustion within `bounds`.
pub fn brute_decide(property: Property, f: &BlockMap, bounds: &Bounds) -> Result<bool> {
    match property {
        Property::Surjective | Property::InjectiveOnPeriodic | Property::SplitEpic => {
            Reference::with_pad(f.source(), bounds, Vec::new(), 1).decide(property, f)
        }
        _ => Reference::new(f.source(), bounds)?.decide(property, f),
    }
}

/// The engine's answer for the same property, read in K2.
pub fn engine_decide(property: Property, f: &BlockMap, caps: &Caps) -> Result<Answer> {
    let k2: CategoryTag = "K2".parse().expect("valid tag");
    Ok(match property {
        Property::Surjective => is_surjective(f)?.answer,
        Property::Injective => is_injective(f)?.answer,
        Property::InjectiveOnPeriodic => crate::analysis::is_injective_on_periodic(f)?.answer,
        Property::Preinjective => is_preinjective(f)?.answer,
        Property::Monic => is_monic(f, k2)?.answer,
        Property::RegularMonic => is_regular_monic(f, k2, caps)?.answer,
        Property::SplitEpic => crate::classify::is_split_epic(f, k2, caps)?.answer,
    })
}

/// Searches preimages of `∞left.w right∞` of the shape
/// `∞g_left w′.w″ w‴ g_right∞` with `|w″| = |w|`, `|w′|` a multiple of
/// `|left|` and `|w‴|` a multiple of `|right|`, both at most `extra`.
/// Returns true when there is none, confirming a failed case of the strong
/// periodic point condition within that bound.
pub fn strong_case_refuted(f: &BlockMap, case: &StrongCase, extra: usize) -> bool {
    let (gl, gr) = (&case.g_left, &case.g_right);
    let y = EventuallyPeriodicPoint::new(case.left.clone(), case.w.clone(), case.right.clone());
    let (m, a) = (f.memory() as i64, f.anticipation() as i64);
    let k = f.source().alphabet().len() as Sym;
    for pre in (0..=extra).step_by(gl.len()) {
        for post in (0..=extra).step_by(gr.len()) {
            let len = pre + case.w.len() + post;
            let target = |t: i64| y.at(t - pre as i64);
            let sym = |s: &[Sym], t: i64| -> Sym {
                if t < 0 {
                    gl[t.rem_euclid(gl.len() as i64) as usize]
                } else if (t as usize) < len {
                    s[t as usize]
                } else {
                    gr[(t as usize - len) % gr.len()]
                }
            };
            let output_ok = |s: &[Sym], t: i64| {
                let window: Word = (t - m..=t + a).map(|i| sym(s, i)).collect();
                f.rule(&window) == Some(target(t))
            };
            // outputs read only from the left tail repeat with its period
            if !(-a - gl.len() as i64..-a).all(|t| output_ok(&[], t)) {
                continue;
            }
            let mut s: Word = Vec::with_capacity(len);
            // the output whose window ends at the newest symbol is determined
            let step_ok = |s: &[Sym]| output_ok(s, s.len() as i64 - 1 - a);
            let done = |s: &[Sym]| {
                (len as i64 - a..len as i64 + m + gr.len() as i64).all(|t| output_ok(s, t))
                    && f.source().contains_asymptotic(gl, s, gr)
            };
            if preimage_search(&mut s, len, k, &step_ok, &done) {
                return false;
            }
        }
    }
    true
}

fn preimage_search(s: &mut Word, len: usize, k: Sym, step_ok: &dyn Fn(&[Sym]) -> bool, done: &dyn Fn(&[Sym]) -> bool) -> bool {
    if s.len() == len {
        return done(s);
    }
    for c in 0..k {
        s.push(c);
        if step_ok(s) && preimage_search(s, len, k, step_ok, done) {
            return true;
        }
        s.pop();
    }
    false
}

/// A periodic point of the target of period at most `max_period` with no
/// preimage of the same period, found by exhaustion.
pub fn periodic_point_without_preimage(f: &BlockMap, max_period: usize) -> Result<Option<PeriodicPoint>> {
    let (x, y) = (f.source(), f.target());
    let m = f.memory() as i64;
    for n in 1..=max_period {
        let images: HashSet<Word> = x
            .periodic_words(n)?
            .into_iter()
            .map(|u| {
                let p = PeriodicPoint::new(u);
                (0..n as i64).map(|i| f.rule(&p.window(i - m, f.width())).expect("point windows are words")).collect()
            })
            .collect();
        if let Some(v) = y.periodic_words(n)?.into_iter().find(|v| !images.contains(v)) {
            return Ok(Some(PeriodicPoint::new(v)));
        }
    }
    Ok(None)
}

/// One map of a census with engine and reference answers.
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub index: usize,
    pub rule: Word,
    pub results: Vec<(Property, Answer, bool)>,
}

impl CensusRow {
    /// Properties where a definite engine answer contradicts the oracle.
    pub fn disagreements(&self) -> Vec<Property> {
        self.results
            .iter()
            .filter(|(_, a, b)| (a.is_yes() && !b) || (a.is_no() && *b))
            .map(|r| r.0)
            .collect()
    }
}

/// Runs engine and oracle on every radius-`radius` endomorphism of the
/// full shift on `alphabet` symbols.
pub fn census(alphabet: usize, radius: usize, properties: &[Property], bounds: &Bounds, caps: &Caps) -> Result<Vec<CensusRow>> {
    let x = Presentation::full(&Alphabet::numeric(alphabet));
    let spec = EnumerationSpec { budget: caps.budget, ..EnumerationSpec::new(&x, &x, radius) };
    let maps = enumerate_block_maps(&spec)?;
    let reference = Reference::new(&x, bounds)?;
    let words = x.words(2 * radius + 1)?;
    maps.par_iter()
        .enumerate()
        .map(|(index, f)| {
            let rule = words.iter().map(|w| f.rule(w).expect("total rule")).collect();
            let results = properties
                .iter()
                .map(|&p| Ok((p, engine_decide(p, f, caps)?, reference.decide(p, f)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(CensusRow { index, rule, results })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> Presentation {
        Presentation::full(&Alphabet::numeric(2))
    }

    fn golden() -> Presentation {
        Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_block_maps(&EnumerationSpec::new(&full2(), &full2(), 0)).unwrap().len(), 4);
        assert_eq!(enumerate_block_maps(&EnumerationSpec::new(&full2(), &full2(), 1)).unwrap().len(), 256);
        let to_golden = enumerate_block_maps(&EnumerationSpec::new(&full2(), &golden(), 0)).unwrap();
        assert_eq!(to_golden.len(), 1);
        assert_eq!(to_golden[0].rule(&[1]), Some(0));
        let small = EnumerationSpec { budget: 100, ..EnumerationSpec::new(&full2(), &full2(), 1) };
        assert!(matches!(enumerate_block_maps(&small), Err(Error::Budget { .. })));
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let maps = enumerate_block_maps(&EnumerationSpec::new(&full2(), &full2(), 0)).unwrap();
        let tables: Vec<(Sym, Sym)> = maps.iter().map(|f| (f.rule(&[0]).unwrap(), f.rule(&[1]).unwrap())).collect();
        assert_eq!(tables, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn three_xor_reference_values() {
        let f = BlockMap::new(&full2(), &full2(), 1, 1, |w| w[0] ^ w[1] ^ w[2]).unwrap();
        let b = Bounds { word: 8, ..Bounds::default() };
        assert!(brute_decide(Property::Surjective, &f, &b).unwrap());
        assert!(!brute_decide(Property::Injective, &f, &b).unwrap());
        assert!(brute_decide(Property::Preinjective, &f, &Bounds::default()).unwrap());
        assert!(!brute_decide(Property::InjectiveOnPeriodic, &f, &Bounds::default()).unwrap());
    }

    #[test]
    fn xor2_has_no_small_section() {
        let f = BlockMap::new(&full2(), &full2(), 0, 1, |w| w[0] ^ w[1]).unwrap();
        let b = Bounds { radius: 2, ..Bounds::default() };
        assert!(!brute_decide(Property::SplitEpic, &f, &b).unwrap());
    }

    #[test]
    fn identity_has_every_property() {
        let id = BlockMap::identity(&golden());
        for p in Property::ALL {
            assert!(brute_decide(p, &id, &Bounds::default()).unwrap(), "{p}");
        }
    }

    #[test]
    fn regular_monic_reference() {
        let i = BlockMap::new(&golden(), &full2(), 0, 0, |w| w[0]).unwrap();
        assert!(brute_decide(Property::RegularMonic, &i, &Bounds::default()).unwrap());
        let a = Alphabet::numeric(2);
        let mut g = crate::automata::Graph::new(2);
        g.add_edge(0, 1, 0);
        g.add_edge(0, 0, 1);
        g.add_edge(1, 0, 0);
        let even = Presentation::from_graph(&a, &g);
        let e = BlockMap::new(&even, &full2(), 0, 0, |w| w[0]).unwrap();
        let b = Bounds { word: 8, ..Bounds::default() };
        assert!(!brute_decide(Property::RegularMonic, &e, &b).unwrap());
    }

    #[test]
    fn binary_radius_one_census_agrees() {
        let props = [Property::Surjective, Property::Injective, Property::Monic, Property::Preinjective, Property::RegularMonic];
        let b = Bounds { word: 5, ..Bounds::default() };
        let rows = census(2, 1, &props, &b, &Caps::default()).unwrap();
        assert_eq!(rows.len(), 256);
        for r in &rows {
            assert!(r.disagreements().is_empty(), "map {} rule {:?}: {:?}", r.index, r.rule, r.disagreements());
            assert!(r.results.iter().all(|(_, a, _)| *a != Answer::Undecided));
        }
        let surjective = rows.iter().filter(|r| r.results[0].2).count();
        let injective = rows.iter().filter(|r| r.results[1].2).count();
        // the injective rules are shifts and flips: x_{i+j} and 1 - x_{i+j}
        assert_eq!(injective, 6);
        assert!(surjective > injective);
    }

    fn run_compression() -> BlockMap {
        let a = Alphabet::new(&["0", "1", "#"]).unwrap();
        let x = Presentation::from_forbidden(&a, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap();
        let y = Presentation::from_forbidden(&a, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        BlockMap::new(&x, &y, 0, 1, |w| if w[0] == 2 { w[1] } else { 2 }).unwrap()
    }

    #[test]
    fn strong_cases_of_run_compression_are_refuted() {
        let f = run_compression();
        let report = crate::classify::strong_condition_upto(&f, 2, 1 << 20).unwrap();
        let failure = report.failure.expect("the condition fails");
        assert!(!failure.cases.is_empty());
        for c in &failure.cases {
            assert!(strong_case_refuted(&f, c, 8), "{c:?}");
        }
        // ∞#.0#0#∞ comes from ∞0.#0#0∞
        let fine = StrongCase { left: vec![2], right: vec![2], g_left: vec![0], g_right: vec![0], w: vec![0, 2, 0] };
        assert!(!strong_case_refuted(&f, &fine, 8));
        let short = StrongCase { w: vec![0], ..fine };
        assert!(!strong_case_refuted(&f, &short, 8));
    }

    #[test]
    fn same_period_preimages() {
        assert!(periodic_point_without_preimage(&run_compression(), 6).unwrap().is_none());
        let i = BlockMap::new(&golden(), &full2(), 0, 0, |w| w[0]).unwrap();
        assert_eq!(periodic_point_without_preimage(&i, 6).unwrap().unwrap().canonical(), vec![1]);
    }

    #[test]
    fn parse_properties() {
        assert_eq!("epic".parse::<Property>().unwrap(), Property::Surjective);
        assert_eq!("surjective".parse::<Property>().unwrap(), Property::Surjective);
        assert!("nonsense".parse::<Property>().is_err());
    }
}
