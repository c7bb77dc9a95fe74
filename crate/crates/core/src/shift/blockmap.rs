//! Sliding block codes between presented subshifts.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::point::PeriodicPoint;
use super::presentation::Presentation;
use super::window::WindowGraph;
use crate::alphabet::{Alphabet, Sym, Word};
use crate::error::{invalid, mismatch, Error, Result};

struct Inner {
    source: Presentation,
    target: Presentation,
    memory: usize,
    anticipation: usize,
    rule: HashMap<Word, Sym>,
}

/// A block map `f(x)_i = F(x_{[i-m, i+a]})` with memory `m` and anticipation
/// `a`. The rule is total on `B_{m+a+1}(source)`.
#[derive(Clone)]
pub struct BlockMap(Arc<Inner>);

impl BlockMap {
    /// Builds and validates a map from a rule function evaluated on every
    /// source window.
    pub fn new(
        source: &Presentation,
        target: &Presentation,
        memory: usize,
        anticipation: usize,
        rule: impl Fn(&[Sym]) -> Sym,
    ) -> Result<BlockMap> {
        let f = BlockMap::unchecked(source, target, memory, anticipation, rule)?;
        f.validate()?;
        Ok(f)
    }

    /// Like [`BlockMap::new`] without checking that the image lies in the
    /// target. Symbols are still range-checked.
    pub fn unchecked(
        source: &Presentation,
        target: &Presentation,
        memory: usize,
        anticipation: usize,
        rule: impl Fn(&[Sym]) -> Sym,
    ) -> Result<BlockMap> {
        let n = memory + anticipation + 1;
        let mut table = HashMap::new();
        for w in source.words(n)? {
            let s = rule(&w);
            if s as usize >= target.alphabet().len() {
                return invalid("rule value outside the target alphabet");
            }
            table.insert(w, s);
        }
        Ok(BlockMap(Arc::new(Inner {
            source: source.clone(),
            target: target.clone(),
            memory,
            anticipation,
            rule: table,
        })))
    }

    /// Builds a map from explicit entries, completed with `default` on the
    /// remaining source windows. Entries outside `B(source)` are rejected.
    pub fn from_entries(
        source: &Presentation,
        target: &Presentation,
        memory: usize,
        anticipation: usize,
        entries: &HashMap<Word, Sym>,
        default: Option<Sym>,
    ) -> Result<BlockMap> {
        let n = memory + anticipation + 1;
        for w in entries.keys() {
            if w.len() != n {
                return invalid(format!("rule word of length {} for window length {n}", w.len()));
            }
            if !source.contains_word(w) {
                return invalid(format!("rule word {} is not in the source language", source.alphabet().render(w)));
            }
        }
        let missing = std::cell::RefCell::new(None);
        let f = BlockMap::unchecked(source, target, memory, anticipation, |w| match entries.get(w).copied().or(default) {
            Some(s) => s,
            None => {
                *missing.borrow_mut() = Some(w.to_vec());
                0
            }
        })?;
        if let Some(w) = missing.into_inner() {
            return invalid(format!("no rule for {} and no default", source.alphabet().render(&w)));
        }
        f.validate()?;
        Ok(f)
    }

    pub fn identity(x: &Presentation) -> BlockMap {
        BlockMap::unchecked(x, x, 0, 0, |w| w[0]).expect("identity is well-formed")
    }

    pub fn constant(x: &Presentation, y: &Presentation, s: Sym) -> Result<BlockMap> {
        BlockMap::new(x, y, 0, 0, |_| s)
    }

    /// Shift map `σ(x)_i = x_{i+1}`.
    pub fn shift(x: &Presentation) -> BlockMap {
        BlockMap::unchecked(x, x, 0, 1, |w| w[1]).expect("shift is well-formed")
    }

    pub fn source(&self) -> &Presentation {
        &self.0.source
    }

    pub fn target(&self) -> &Presentation {
        &self.0.target
    }

    pub fn memory(&self) -> usize {
        self.0.memory
    }

    pub fn anticipation(&self) -> usize {
        self.0.anticipation
    }

    pub fn width(&self) -> usize {
        self.0.memory + self.0.anticipation + 1
    }

    /// `max(memory, anticipation)`.
    pub fn radius(&self) -> usize {
        self.0.memory.max(self.0.anticipation)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source().same_shift(self.target())
    }

    pub fn rule(&self, w: &[Sym]) -> Option<Sym> {
        self.0.rule.get(w).copied()
    }

    /// Rule entries sorted by source word.
    pub fn entries(&self) -> Vec<(Word, Sym)> {
        let mut v: Vec<(Word, Sym)> = self.0.rule.iter().map(|(w, &s)| (w.clone(), s)).collect();
        v.sort();
        v
    }

    pub fn table(&self) -> &HashMap<Word, Sym> {
        &self.0.rule
    }

    /// Checks that the image lies in the target.
    pub fn validate(&self) -> Result<()> {
        let img = self.image()?;
        if let Some(w) = img.word_not_in(self.target())? {
            return invalid(format!(
                "image contains {} which is not a target word",
                self.target().alphabet().render(&w)
            ));
        }
        Ok(())
    }

    /// `f(p(X)) = p(Y)` for the designated points.
    pub fn preserves_point(&self) -> Result<bool> {
        match (self.source().point(), self.target().point()) {
            (Some(p), Some(q)) => {
                let w = vec![p; self.width()];
                Ok(self.rule(&w) == Some(q))
            }
            _ => Err(Error::Invalid("both objects need designated points".into())),
        }
    }

    /// Applies the rule along a finite word, producing `|w| - width + 1`
    /// symbols. `None` when some window is not a source word.
    pub fn apply_word(&self, w: &[Sym]) -> Option<Word> {
        if w.len() < self.width() {
            return Some(Vec::new());
        }
        w.windows(self.width()).map(|x| self.rule(x)).collect()
    }

    pub fn apply(&self, x: &PeriodicPoint) -> Result<PeriodicPoint> {
        if !self.source().contains_periodic(&x.word) {
            return invalid("periodic point is not in the source");
        }
        let n = x.word.len();
        let m = self.memory() as i64;
        let out: Word = (0..n as i64)
            .map(|j| {
                let p = PeriodicPoint::new(x.word.clone());
                self.rule(&p.window(j - m, self.width())).expect("windows of a point are words")
            })
            .collect();
        Ok(PeriodicPoint::with_phase(out, x.phase))
    }

    /// The image subshift `f(X)` over the target alphabet.
    pub fn image(&self) -> Result<Presentation> {
        let wg = WindowGraph::new(self.source(), self.width())?;
        let g = wg.relabel(|w| self.0.rule[w]);
        Ok(Presentation::from_graph(self.target().alphabet(), &g))
    }

    /// [`BlockMap::image`] with a cap on the subset construction.
    pub fn image_within(&self, max_states: usize) -> Result<Presentation> {
        let wg = WindowGraph::new(self.source(), self.width())?;
        let g = wg.relabel(|w| self.0.rule[w]);
        Presentation::from_graph_within(self.target().alphabet(), &g, max_states)
    }

    /// The same map read through a larger window `[-memory, anticipation]`.
    pub fn padded(&self, memory: usize, anticipation: usize) -> Result<BlockMap> {
        if memory < self.memory() || anticipation < self.anticipation() {
            return invalid("padding cannot shrink a window");
        }
        let off = memory - self.memory();
        let n = self.width();
        let rule = &self.0.rule;
        BlockMap::unchecked(self.source(), self.target(), memory, anticipation, |w| rule[&w[off..off + n]])
    }

    /// `g ∘ f`.
    pub fn compose(g: &BlockMap, f: &BlockMap) -> Result<BlockMap> {
        if !f.target().same_shift(g.source()) {
            return mismatch("target of the inner map is not the source of the outer map");
        }
        let nf = f.width();
        let (fr, gr) = (&f.0.rule, &g.0.rule);
        BlockMap::unchecked(
            f.source(),
            g.target(),
            f.memory() + g.memory(),
            f.anticipation() + g.anticipation(),
            |w| {
                let mid: Word = w.windows(nf).map(|x| fr[x]).collect();
                gr[&mid]
            },
        )
    }

    /// Semantic equality: same action on every point.
    pub fn maps_equal(f: &BlockMap, g: &BlockMap) -> Result<bool> {
        if !f.source().same_shift(g.source()) || !f.target().same_shift(g.target()) {
            return mismatch("maps between different objects");
        }
        let m = f.memory().max(g.memory());
        let a = f.anticipation().max(g.anticipation());
        let fp = f.padded(m, a)?;
        let gp = g.padded(m, a)?;
        Ok(fp.0.rule == gp.0.rule)
    }

    /// Drops window coordinates the rule does not read (outer ones only).
    pub fn minimal_window(&self) -> BlockMap {
        let mut cur = self.clone();
        loop {
            let n = cur.width();
            let rule = &cur.0.rule;
            let drop_left = cur.memory() > 0 && {
                let mut by_suffix: HashMap<&[Sym], Sym> = HashMap::new();
                rule.iter().all(|(w, &s)| *by_suffix.entry(&w[1..]).or_insert(s) == s)
            };
            if drop_left {
                let r: HashMap<Word, Sym> = rule.iter().map(|(w, &s)| (w[1..].to_vec(), s)).collect();
                cur = BlockMap(Arc::new(Inner {
                    source: cur.source().clone(),
                    target: cur.target().clone(),
                    memory: cur.memory() - 1,
                    anticipation: cur.anticipation(),
                    rule: r,
                }));
                continue;
            }
            let drop_right = cur.anticipation() > 0 && {
                let mut by_prefix: HashMap<&[Sym], Sym> = HashMap::new();
                rule.iter().all(|(w, &s)| *by_prefix.entry(&w[..n - 1]).or_insert(s) == s)
            };
            if drop_right {
                let r: HashMap<Word, Sym> = rule.iter().map(|(w, &s)| (w[..n - 1].to_vec(), s)).collect();
                cur = BlockMap(Arc::new(Inner {
                    source: cur.source().clone(),
                    target: cur.target().clone(),
                    memory: cur.memory(),
                    anticipation: cur.anticipation() - 1,
                    rule: r,
                }));
                continue;
            }
            return cur;
        }
    }

    /// The map conjugated by reflection `x ↦ (x_{-i})_i`.
    pub fn mirror(&self) -> BlockMap {
        let src = self.source().reversed();
        let tgt = self.target().reversed();
        let rule: HashMap<Word, Sym> = self
            .0
            .rule
            .iter()
            .map(|(w, &s)| (w.iter().rev().copied().collect(), s))
            .collect();
        BlockMap(Arc::new(Inner { source: src, target: tgt, memory: self.anticipation(), anticipation: self.memory(), rule }))
    }

    /// Same rule with new source and target objects (for example after
    /// attaching designated points). The new source must have the same
    /// language.
    pub fn retarget(&self, source: &Presentation, target: &Presentation) -> Result<BlockMap> {
        if !source.same_shift(self.source()) {
            return mismatch("retargeting needs the same source language");
        }
        let f = BlockMap(Arc::new(Inner {
            source: source.clone(),
            target: target.clone(),
            memory: self.memory(),
            anticipation: self.anticipation(),
            rule: self.0.rule.clone(),
        }));
        if !target.same_shift(self.target()) {
            f.validate()?;
        }
        Ok(f)
    }

    /// Rewrites `f` as a symbol map on the higher-block presentation of its
    /// source.
    pub fn recode(&self) -> Result<Recoded> {
        let n = self.width();
        if n == 1 {
            return Ok(Recoded {
                map: self.clone(),
                conj: BlockMap::identity(self.source()),
                conj_inv: BlockMap::identity(self.source()),
            });
        }
        let x = self.source();
        let wg = WindowGraph::new(x, n)?;
        let a = x.alphabet();
        let names: Vec<String> = wg
            .windows
            .iter()
            .map(|w| {
                let s = a.render(w);
                if s.contains('.') {
                    s.replace('.', "_")
                } else {
                    s
                }
            })
            .collect();
        let hb_alpha = Alphabet::new(&names)?;
        let hb = Presentation::from_graph(&hb_alpha, &wg.graph);
        let id_of: HashMap<Word, Sym> = wg.windows.iter().cloned().enumerate().map(|(i, w)| (w, i as Sym)).collect();
        let conj = BlockMap::unchecked(x, &hb, self.memory(), self.anticipation(), |w| id_of[w])?;
        let m = self.memory();
        let windows = wg.windows.clone();
        let conj_inv = BlockMap::unchecked(&hb, x, 0, 0, |w| windows[w[0] as usize][m])?;
        let rule = &self.0.rule;
        let map = BlockMap::unchecked(&hb, self.target(), 0, 0, |w| rule[&windows[w[0] as usize]])?;
        Ok(Recoded { map, conj, conj_inv })
    }
}

/// Output of [`BlockMap::recode`]: `map ∘ conj = f` and `conj_inv ∘ conj = id`.
#[derive(Clone, Debug)]
pub struct Recoded {
    pub map: BlockMap,
    pub conj: BlockMap,
    pub conj_inv: BlockMap,
}

impl fmt::Debug for BlockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockMap{{window: [-{}, {}], entries: {}}}", self.memory(), self.anticipation(), self.0.rule.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> Presentation {
        Presentation::full(&Alphabet::numeric(2))
    }

    fn xor2() -> BlockMap {
        BlockMap::new(&full2(), &full2(), 0, 1, |w| w[0] ^ w[1]).unwrap()
    }

    fn xor3() -> BlockMap {
        BlockMap::new(&full2(), &full2(), 1, 1, |w| w[0] ^ w[1] ^ w[2]).unwrap()
    }

    #[test]
    fn xor3_on_periodic_point() {
        let x = PeriodicPoint::new(vec![0, 1, 1, 0]);
        let y = xor3().apply(&x).unwrap();
        // direct evaluation: x_{i-1}+x_i+x_{i+1} at each phase
        let expect: Word = (0..4i64).map(|i| x.at(i - 1) ^ x.at(i) ^ x.at(i + 1)).collect();
        assert_eq!(y, PeriodicPoint::new(expect.clone()));
        assert_eq!(y.canonical(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn xor2_fixes_zero() {
        let z = xor2().apply(&PeriodicPoint::new(vec![0])).unwrap();
        assert_eq!(z.canonical(), vec![0]);
    }

    #[test]
    fn xor2_squared() {
        let f = xor2();
        let ff = BlockMap::compose(&f, &f).unwrap();
        assert_eq!((ff.memory(), ff.anticipation()), (0, 2));
        for w in full2().words(3).unwrap() {
            assert_eq!(ff.rule(&w), Some(w[0] ^ w[2]));
        }
        let id = BlockMap::identity(&full2());
        assert!(BlockMap::maps_equal(&BlockMap::compose(&id, &f).unwrap(), &f).unwrap());
        assert!(!BlockMap::maps_equal(&f, &id).unwrap());
    }

    #[test]
    fn padding_and_restriction() {
        let f = xor3();
        assert!(BlockMap::maps_equal(&f, &f.padded(2, 3).unwrap()).unwrap());
        // two rules differing only outside the golden mean language
        let g = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        let a = BlockMap::unchecked(&g, &full2(), 0, 1, |w| w[0] & w[1]).unwrap();
        let b = BlockMap::unchecked(&g, &full2(), 0, 1, |_| 0).unwrap();
        assert!(BlockMap::maps_equal(&a, &b).unwrap());
        assert_eq!(a.minimal_window().width(), 1);
    }

    #[test]
    fn image_must_fit_target() {
        let g = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        assert!(BlockMap::new(&full2(), &g, 0, 0, |w| w[0]).is_err());
        assert!(BlockMap::new(&full2(), &g, 0, 0, |_| 0).is_ok());
    }

    #[test]
    fn mirror_is_an_involution() {
        let f = BlockMap::new(&full2(), &full2(), 0, 2, |w| w[0] & (w[1] | w[2])).unwrap();
        let ff = f.mirror().mirror();
        assert!(BlockMap::maps_equal(&f, &ff).unwrap());
        assert_eq!((f.mirror().memory(), f.mirror().anticipation()), (2, 0));
    }

    #[test]
    fn recoding_xor2() {
        let f = xor2();
        let r = f.recode().unwrap();
        assert_eq!(r.map.source().alphabet().len(), 4);
        assert_eq!(r.map.width(), 1);
        let back = BlockMap::compose(&r.map, &r.conj).unwrap();
        assert!(BlockMap::maps_equal(&back, &f).unwrap());
        let id = BlockMap::compose(&r.conj_inv, &r.conj).unwrap();
        assert!(BlockMap::maps_equal(&id, &BlockMap::identity(&full2())).unwrap());
    }

    #[test]
    fn recoding_golden_identity_radius_one() {
        let g = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        let id = BlockMap::new(&g, &g, 1, 1, |w| w[1]).unwrap();
        let r = id.recode().unwrap();
        assert_eq!(r.map.source().alphabet().len(), 5);
        assert_eq!(r.map.image().unwrap(), g);
    }

    #[test]
    fn entries_outside_language_are_rejected() {
        let g = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        let mut e = HashMap::new();
        e.insert(vec![1, 1], 0);
        assert!(BlockMap::from_entries(&g, &g, 0, 1, &e, Some(0)).is_err());
        let mut e = HashMap::new();
        e.insert(vec![0, 1], 0);
        assert!(BlockMap::from_entries(&g, &g, 0, 1, &e, None).is_err());
        assert!(BlockMap::from_entries(&g, &g, 0, 1, &e, Some(0)).is_ok());
    }
}
