//! Finite presentations of SFTs and sofic shifts.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automata::{Dfa, FiniteMonoid, Graph};
use crate::error::{invalid, Error, Result};
use crate::DEFAULT_BUDGET;

/// How a presentation was given, kept so files round-trip in their own form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Forbidden(Vec<Word>),
    Graph { nodes: Vec<String>, edges: Vec<(usize, usize, Sym)> },
    Derived,
}

struct Inner {
    alphabet: Alphabet,
    source: Source,
    point: Option<Sym>,
    dfa: Dfa,
    cover: Graph,
    cover_state: Vec<usize>,
}

/// A subshift given by a finite presentation, together with the minimal
/// acceptor of its factor language and the cover graph used by the analyses.
///
/// The cover is the bi-essential part of the minimal acceptor's state graph.
/// It is deterministic, and its bi-infinite paths are exactly the points.
#[derive(Clone)]
pub struct Presentation(Arc<Inner>);

impl Presentation {
    pub fn from_forbidden(alphabet: &Alphabet, forbidden: Vec<Word>) -> Result<Presentation> {
        if forbidden.iter().any(Vec::is_empty) {
            return invalid("the empty word cannot be forbidden");
        }
        let k = alphabet.len();
        if forbidden.iter().flatten().any(|&s| s as usize >= k) {
            return invalid("forbidden word uses a symbol outside the alphabet");
        }
        let m = forbidden.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let clean = |w: &[Sym]| -> bool {
            forbidden.iter().all(|f| f.len() > w.len() || !w.windows(f.len()).any(|x| x == f.as_slice()))
        };
        // de Bruijn graph on allowed (m-1)-words
        let mut nodes: Vec<Word> = vec![Vec::new()];
        for _ in 0..m - 1 {
            let mut next = Vec::new();
            for w in &nodes {
                for a in alphabet.symbols() {
                    let mut v = w.clone();
                    v.push(a);
                    if clean(&v) {
                        next.push(v);
                    }
                }
            }
            if next.len() > DEFAULT_BUDGET {
                return Err(Error::Budget { needed: next.len(), budget: DEFAULT_BUDGET });
            }
            nodes = next;
        }
        let index: std::collections::HashMap<&Word, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut g = Graph::new(nodes.len());
        for (i, w) in nodes.iter().enumerate() {
            for a in alphabet.symbols() {
                let mut v = w.clone();
                v.push(a);
                if clean(&v) {
                    let t = if m == 1 { 0 } else { index[&v[1..].to_vec()] };
                    g.add_edge(i, a, t);
                }
            }
        }
        Ok(Presentation::build(alphabet, Source::Forbidden(forbidden), &g, None))
    }

    /// Presentation by a labeled graph with named nodes.
    pub fn from_named_graph(
        alphabet: &Alphabet,
        nodes: Vec<String>,
        edges: Vec<(usize, usize, Sym)>,
    ) -> Result<Presentation> {
        let mut g = Graph::new(nodes.len());
        for &(u, v, s) in &edges {
            if u >= nodes.len() || v >= nodes.len() {
                return invalid("edge endpoint is not a node");
            }
            if s as usize >= alphabet.len() {
                return invalid("edge label outside the alphabet");
            }
            g.add_edge(u, s, v);
        }
        Ok(Presentation::build(alphabet, Source::Graph { nodes, edges }, &g, None))
    }

    /// Presentation of the bi-infinite label sequences of `g`.
    pub fn from_graph(alphabet: &Alphabet, g: &Graph) -> Presentation {
        Presentation::build(alphabet, Source::Derived, g, None)
    }

    /// As [`Presentation::from_graph`], failing with a budget error when the
    /// subset construction passes `max_states`.
    pub fn from_graph_within(alphabet: &Alphabet, g: &Graph, max_states: usize) -> Result<Presentation> {
        let k = alphabet.len();
        let (ess, _) = g.essential();
        let dfa = if ess.n() == 0 {
            Dfa::trivial(k, true)
        } else {
            let all: Vec<usize> = (0..ess.n()).collect();
            Dfa::determinize_within(k, &ess, &all, &vec![true; ess.n()], max_states)?.minimize()
        };
        Ok(Presentation::from_dfa(alphabet, Source::Derived, dfa, None))
    }

    pub fn full(alphabet: &Alphabet) -> Presentation {
        let mut g = Graph::new(1);
        for a in alphabet.symbols() {
            g.add_edge(0, a, 0);
        }
        Presentation::build(alphabet, Source::Forbidden(Vec::new()), &g, None)
    }

    pub fn empty(alphabet: &Alphabet) -> Presentation {
        Presentation::build(alphabet, Source::Derived, &Graph::new(0), None)
    }

    /// `{∞0∞}` over the one-symbol alphabet `{0}`.
    pub fn trivial() -> Presentation {
        Presentation::full(&Alphabet::numeric(1))
    }

    fn build(alphabet: &Alphabet, source: Source, g: &Graph, point: Option<Sym>) -> Presentation {
        let k = alphabet.len();
        let (ess, _) = g.essential();
        let dfa = if ess.n() == 0 {
            Dfa::trivial(k, true)
        } else {
            let all: Vec<usize> = (0..ess.n()).collect();
            Dfa::determinize(k, &ess, &all, &vec![true; ess.n()]).minimize()
        };
        Presentation::from_dfa(alphabet, source, dfa, point)
    }

    /// Wraps a minimal factor-language acceptor.
    fn from_dfa(alphabet: &Alphabet, source: Source, dfa: Dfa, point: Option<Sym>) -> Presentation {
        let full = dfa.graph();
        let mask = full.essential_mask();
        let (cover, _) = full.induced(&mask);
        let cover_state = (0..full.n()).filter(|&q| mask[q]).collect();
        Presentation(Arc::new(Inner { alphabet: alphabet.clone(), source, point, dfa, cover, cover_state }))
    }

    /// Same subshift with a designated uniform point.
    pub fn with_point(&self, p: Sym) -> Result<Presentation> {
        if !self.contains_periodic(&[p]) {
            return invalid(format!("∞{}∞ is not a point of the subshift", self.alphabet().name(p)));
        }
        Ok(Presentation(Arc::new(Inner {
            alphabet: self.0.alphabet.clone(),
            source: self.0.source.clone(),
            point: Some(p),
            dfa: self.0.dfa.clone(),
            cover: self.0.cover.clone(),
            cover_state: self.0.cover_state.clone(),
        })))
    }

    pub fn without_point(&self) -> Presentation {
        Presentation::from_dfa(&self.0.alphabet, self.0.source.clone(), self.0.dfa.clone(), None)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn source(&self) -> &Source {
        &self.0.source
    }

    pub fn point(&self) -> Option<Sym> {
        self.0.point
    }

    /// Minimal acceptor of the factor language.
    pub fn dfa(&self) -> &Dfa {
        &self.0.dfa
    }

    /// The bi-essential deterministic cover.
    pub fn cover(&self) -> &Graph {
        &self.0.cover
    }

    /// Acceptor state of each cover vertex.
    pub fn cover_state(&self, v: usize) -> usize {
        self.0.cover_state[v]
    }

    pub fn is_empty(&self) -> bool {
        self.0.cover.n() == 0
    }

    pub fn contains_word(&self, w: &[Sym]) -> bool {
        self.0.dfa.accepts(w)
    }

    pub fn words(&self, n: usize) -> Result<Vec<Word>> {
        self.words_within(n, DEFAULT_BUDGET)
    }

    pub fn words_within(&self, n: usize, budget: usize) -> Result<Vec<Word>> {
        if self.is_empty() {
            return Ok(if n == 0 { vec![Vec::new()] } else { Vec::new() });
        }
        self.0.dfa.defined_words(n, budget)
    }

    pub fn count_words(&self, n: usize) -> u128 {
        if self.is_empty() {
            return u128::from(n == 0);
        }
        self.0.dfa.count_defined(n)
    }

    /// Same alphabet and same factor language (points are ignored).
    pub fn same_shift(&self, other: &Presentation) -> bool {
        self.0.alphabet == other.0.alphabet && self.0.dfa == other.0.dfa
    }

    /// Language inclusion over a common alphabet.
    pub fn is_subshift_of(&self, other: &Presentation) -> Result<bool> {
        if self.0.alphabet != other.0.alphabet {
            return Err(Error::Mismatch("subshifts over different alphabets".into()));
        }
        self.0.dfa.is_subset_of(&other.0.dfa)
    }

    /// A shortest word of `self` missing from `other`.
    pub fn word_not_in(&self, other: &Presentation) -> Result<Option<Word>> {
        if self.0.alphabet != other.0.alphabet {
            return Err(Error::Mismatch("subshifts over different alphabets".into()));
        }
        self.0.dfa.difference_witness(&other.0.dfa)
    }

    pub fn intersect(&self, other: &Presentation) -> Result<Presentation> {
        if self.0.alphabet != other.0.alphabet {
            return Err(Error::Mismatch("subshifts over different alphabets".into()));
        }
        // intersect the covers: bi-infinite paths of the product are the common points
        let g = product_graph(self.cover(), other.cover(), |a, b| (a == b).then_some(a));
        Ok(Presentation::from_graph(self.alphabet(), &g))
    }

    pub fn union(&self, other: &Presentation) -> Result<Presentation> {
        if self.0.alphabet != other.0.alphabet {
            return Err(Error::Mismatch("subshifts over different alphabets".into()));
        }
        let a = self.cover();
        let b = other.cover();
        let mut g = a.clone();
        let off = g.n();
        for _ in 0..b.n() {
            g.add_node();
        }
        for (u, s, v) in b.edges() {
            g.add_edge(u + off, s, v + off);
        }
        Ok(Presentation::from_graph(self.alphabet(), &g))
    }

    /// The mirror image `x ↦ (x_{-i})_i`.
    pub fn reversed(&self) -> Presentation {
        Presentation::from_graph(self.alphabet(), &self.cover().reverse())
    }

    pub fn syntactic_monoid(&self) -> Result<FiniteMonoid> {
        FiniteMonoid::transition(self.dfa(), DEFAULT_BUDGET)
    }

    /// Cover vertices that lie on a left-infinite path labeled `...www`.
    pub fn periodic_states(&self, w: &[Sym]) -> Vec<usize> {
        if w.is_empty() {
            return (0..self.cover().n()).collect();
        }
        let cover = self.cover();
        let step = |q: usize| -> Option<usize> {
            w.iter().try_fold(q, |q, &a| cover.out(q).iter().find(|e| e.0 == a).map(|e| e.1 as usize))
        };
        let mut cur: Vec<usize> = (0..cover.n()).collect();
        loop {
            let mut next: Vec<usize> = cur.iter().filter_map(|&q| step(q)).collect();
            next.sort_unstable();
            next.dedup();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Cover vertices from which `www...` can be read forever.
    pub fn forward_periodic_states(&self, w: &[Sym]) -> Vec<usize> {
        let cover = self.cover();
        if w.is_empty() {
            return (0..cover.n()).collect();
        }
        let step = |q: usize| -> Option<usize> {
            w.iter().try_fold(q, |q, &a| cover.out(q).iter().find(|e| e.0 == a).map(|e| e.1 as usize))
        };
        let n = cover.n();
        // q is good iff its orbit under step never fails; orbits are eventually periodic
        (0..n)
            .filter(|&q| {
                let mut seen = vec![false; n];
                let mut cur = q;
                loop {
                    if seen[cur] {
                        return true;
                    }
                    seen[cur] = true;
                    match step(cur) {
                        Some(t) => cur = t,
                        None => return false,
                    }
                }
            })
            .collect()
    }

    /// Whether `∞w∞` is a point.
    pub fn contains_periodic(&self, w: &[Sym]) -> bool {
        !w.is_empty() && !self.periodic_states(w).is_empty()
    }

    /// Whether `∞u.wv∞` is a point.
    pub fn contains_asymptotic(&self, u: &[Sym], w: &[Sym], v: &[Sym]) -> bool {
        if u.is_empty() || v.is_empty() {
            return false;
        }
        let cover = self.cover();
        let ends = self.forward_periodic_states(v);
        let mut good = vec![false; cover.n()];
        for q in ends {
            good[q] = true;
        }
        self.periodic_states(u).into_iter().any(|q| {
            let mut cur = Some(q);
            for &a in w {
                cur = cur.and_then(|q| cover.out(q).iter().find(|e| e.0 == a).map(|e| e.1 as usize));
            }
            cur.is_some_and(|q| good[q])
        })
    }

    /// Symbols `a` with `∞a∞` a point.
    pub fn uniform_points(&self) -> Vec<Sym> {
        self.alphabet().symbols().filter(|&a| self.contains_periodic(&[a])).collect()
    }

    /// All `∞w∞` with `|w| = n`, as words (every rotation listed separately).
    pub fn periodic_words(&self, n: usize) -> Result<Vec<Word>> {
        Ok(self.words(n)?.into_iter().filter(|w| self.contains_periodic(w)).collect())
    }
}

/// Synchronous product of two labeled graphs; `label` decides which pairs of
/// labels combine and into what.
pub fn product_graph(a: &Graph, b: &Graph, label: impl Fn(Sym, Sym) -> Option<Sym>) -> Graph {
    let nb = b.n();
    let mut g = Graph::new(a.n() * nb);
    for u in 0..a.n() {
        for &(s, u2) in a.out(u) {
            for v in 0..nb {
                for &(t, v2) in b.out(v) {
                    if let Some(l) = label(s, t) {
                        g.add_edge(u * nb + v, l, u2 as usize * nb + v2 as usize);
                    }
                }
            }
        }
    }
    g
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.same_shift(other) && self.0.point == other.0.point
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Presentation{{alphabet: {:?}, states: {}, cover: {}, point: {:?}}}",
            self.alphabet().names(),
            self.dfa().n(),
            self.cover().n(),
            self.point().map(|p| self.alphabet().name(p).to_string())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::numeric(2)
    }

    fn golden() -> Presentation {
        Presentation::from_forbidden(&bin(), vec![vec![1, 1]]).unwrap()
    }

    /// Independent oracle: length-n words avoiding every forbidden factor.
    fn brute_words(k: usize, forbidden: &[Word], n: usize) -> Vec<Word> {
        crate::alphabet::all_words(k, n)
            .into_iter()
            .filter(|w| forbidden.iter().all(|f| !w.windows(f.len()).any(|x| x == f.as_slice())))
            .collect()
    }

    #[test]
    fn golden_mean_two_words() {
        assert_eq!(golden().words(2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn trivial_and_empty() {
        let t = Presentation::trivial();
        assert_eq!(t.words(5).unwrap().len(), 1);
        let e = Presentation::from_forbidden(&bin(), vec![vec![0], vec![1]]).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.words(1).unwrap().len(), 0);
        assert_eq!(e, Presentation::empty(&bin()));
    }

    #[test]
    fn sft_words_match_brute_force() {
        // only extendable words survive, so compare with words extendable by
        // a few symbols on each side
        let forb = vec![vec![0, 0, 0], vec![1, 1, 1]];
        let x = Presentation::from_forbidden(&bin(), forb.clone()).unwrap();
        for n in 0..=8 {
            let brute = brute_words(2, &forb, n);
            assert_eq!(x.words(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn graph_and_forbidden_agree() {
        let g = Presentation::from_named_graph(
            &bin(),
            vec!["a".into(), "b".into()],
            vec![(0, 0, 0), (0, 1, 1), (1, 0, 0)],
        )
        .unwrap();
        assert_eq!(g, golden());
    }

    #[test]
    fn nonextendable_words_are_trimmed() {
        // forbidding 10 leaves only 0...01...1 patterns; 01 is still a word
        let x = Presentation::from_forbidden(&bin(), vec![vec![1, 0]]).unwrap();
        assert!(x.contains_word(&[0, 1]));
        assert!(!x.contains_word(&[1, 0]));
        // forbidding 01 and 10 and 1 leaves {∞0∞}
        let y = Presentation::from_forbidden(&bin(), vec![vec![1]]).unwrap();
        assert_eq!(y.words(3).unwrap(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn periodic_membership() {
        let g = golden();
        assert!(g.contains_periodic(&[0]));
        assert!(g.contains_periodic(&[0, 1]));
        assert!(!g.contains_periodic(&[1]));
        assert!(!g.contains_periodic(&[0, 1, 1]));
        assert!(g.contains_asymptotic(&[0], &[1], &[0]));
        assert!(!g.contains_asymptotic(&[0], &[1], &[1, 0, 1, 1]));
    }

    #[test]
    fn mirror_of_staircase() {
        let a = Alphabet::numeric(3);
        // 0*1*2*
        let x = Presentation::from_forbidden(&a, vec![vec![1, 0], vec![2, 0], vec![2, 1]]).unwrap();
        let y = Presentation::from_forbidden(&a, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(x.reversed(), y);
        assert_eq!(golden().reversed(), golden());
    }

    #[test]
    fn syntactic_monoid_sizes() {
        assert_eq!(Presentation::full(&bin()).syntactic_monoid().unwrap().size(), 1);
        assert_eq!(golden().syntactic_monoid().unwrap().size(), 6);
        assert_eq!(Presentation::empty(&bin()).syntactic_monoid().unwrap().size(), 2);
    }

    #[test]
    fn designated_point_must_exist() {
        assert!(golden().with_point(0).is_ok());
        assert!(golden().with_point(1).is_err());
    }
}
