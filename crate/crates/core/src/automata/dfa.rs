//! Deterministic acceptors with partial transition functions.
//!
//! A missing transition means "rejected from here on". Factor languages of
//! subshifts are represented with every state accepting.

use std::collections::{HashMap, VecDeque};

use super::graph::Graph;
use crate::alphabet::{Sym, Word};
use crate::error::{Error, Result};

pub const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    k: usize,
    init: u32,
    trans: Vec<u32>,
    accept: Vec<bool>,
}

impl Dfa {
    /// Acceptor of `{ε}` alone when `accept` is true, of nothing otherwise.
    pub fn trivial(k: usize, accept: bool) -> Dfa {
        Dfa { k, init: 0, trans: vec![NONE; k], accept: vec![accept] }
    }

    /// Acceptor of every word over `k` symbols.
    pub fn universal(k: usize) -> Dfa {
        Dfa { k, init: 0, trans: vec![0; k], accept: vec![true] }
    }

    pub fn from_parts(k: usize, init: u32, trans: Vec<u32>, accept: Vec<bool>) -> Dfa {
        assert_eq!(trans.len(), k * accept.len());
        Dfa { k, init, trans, accept }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.accept.len()
    }

    pub fn init(&self) -> usize {
        self.init as usize
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accept[q]
    }

    pub fn step(&self, q: usize, a: Sym) -> Option<usize> {
        let t = self.trans[q * self.k + a as usize];
        (t != NONE).then_some(t as usize)
    }

    pub fn run_from(&self, q: usize, w: &[Sym]) -> Option<usize> {
        w.iter().try_fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, w: &[Sym]) -> Option<usize> {
        self.run_from(self.init(), w)
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.run(w).is_some_and(|q| self.accept[q])
    }

    /// The transition structure as a labeled graph.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for q in 0..self.n() {
            for a in 0..self.k {
                if let Some(t) = self.step(q, a as Sym) {
                    g.add_edge(q, a as Sym, t);
                }
            }
        }
        g
    }

    /// Subset construction on a labeled graph with initial and accepting sets.
    pub fn determinize(k: usize, g: &Graph, init: &[usize], accept: &[bool]) -> Dfa {
        Dfa::determinize_within(k, g, init, accept, usize::MAX).expect("unbounded")
    }

    /// Subset construction that gives up once more than `max_states`
    /// subsets have been reached.
    pub fn determinize_within(k: usize, g: &Graph, init: &[usize], accept: &[bool], max_states: usize) -> Result<Dfa> {
        let mut start: Vec<u32> = init.iter().map(|&v| v as u32).collect();
        start.sort_unstable();
        start.dedup();
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut trans = Vec::new();
        let mut acc = Vec::new();
        let mut i = 0;
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
        while i < sets.len() {
            let cur = sets[i].clone();
            acc.push(cur.iter().any(|&v| accept[v as usize]));
            for b in buckets.iter_mut() {
                b.clear();
            }
            for &v in &cur {
                for &(s, t) in g.out(v as usize) {
                    buckets[s as usize].push(t);
                }
            }
            for b in buckets.iter_mut() {
                if b.is_empty() {
                    trans.push(NONE);
                    continue;
                }
                b.sort_unstable();
                b.dedup();
                let next = ids.len() as u32;
                if ids.len() >= max_states && !ids.contains_key(b.as_slice()) {
                    return Err(Error::Budget { needed: ids.len() + 1, budget: max_states });
                }
                let id = *ids.entry(b.clone()).or_insert_with(|| {
                    sets.push(b.clone());
                    next
                });
                trans.push(id);
            }
            i += 1;
        }
        Ok(Dfa { k, init: 0, trans, accept: acc })
    }

    /// Minimal acceptor of the same language with canonical state numbering
    /// (breadth-first from the initial state, symbols in order). Two minimal
    /// acceptors of the same language are equal as values.
    pub fn minimize(&self) -> Dfa {
        let n = self.n();
        let k = self.k;
        // reachable from init
        let g = self.graph();
        let reach = g.reachable(&[self.init()]);
        // co-reachable: can reach an accepting state
        let rev = g.reverse();
        let acc_states: Vec<usize> = (0..n).filter(|&q| self.accept[q]).collect();
        let coreach = rev.reachable(&acc_states);
        let live: Vec<bool> = (0..n).map(|q| reach[q] && coreach[q]).collect();
        if !live[self.init()] {
            return Dfa::trivial(k, false);
        }
        // Moore refinement over live states; dead targets become NONE.
        let mut class: Vec<u32> = (0..n).map(|q| if self.accept[q] { 1 } else { 0 }).collect();
        let mut nclass;
        loop {
            let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut new_class = vec![0u32; n];
            for q in 0..n {
                if !live[q] {
                    continue;
                }
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                for a in 0..k {
                    let t = self.trans[q * k + a];
                    sig.push(if t != NONE && live[t as usize] { class[t as usize] } else { NONE });
                }
                let next = sig_ids.len() as u32;
                new_class[q] = *sig_ids.entry(sig).or_insert(next);
            }
            nclass = sig_ids.len();
            let old_count = {
                let mut c: Vec<u32> = (0..n).filter(|&q| live[q]).map(|q| class[q]).collect();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            class = new_class;
            if nclass == old_count {
                break;
            }
        }
        // quotient with BFS renumbering
        let mut rep = vec![usize::MAX; nclass];
        for q in 0..n {
            if live[q] && rep[class[q] as usize] == usize::MAX {
                rep[class[q] as usize] = q;
            }
        }
        let mut order = vec![NONE; nclass];
        let mut queue = VecDeque::new();
        let c0 = class[self.init()] as usize;
        order[c0] = 0;
        queue.push_back(c0);
        let mut seq = vec![c0];
        while let Some(c) = queue.pop_front() {
            let q = rep[c];
            for a in 0..k {
                let t = self.trans[q * k + a];
                if t != NONE && live[t as usize] {
                    let tc = class[t as usize] as usize;
                    if order[tc] == NONE {
                        order[tc] = seq.len() as u32;
                        seq.push(tc);
                        queue.push_back(tc);
                    }
                }
            }
        }
        let m = seq.len();
        let mut trans = vec![NONE; m * k];
        let mut accept = vec![false; m];
        for (i, &c) in seq.iter().enumerate() {
            let q = rep[c];
            accept[i] = self.accept[q];
            for a in 0..k {
                let t = self.trans[q * k + a];
                if t != NONE && live[t as usize] {
                    trans[i * k + a] = order[class[t as usize] as usize];
                }
            }
        }
        Dfa { k, init: 0, trans, accept }
    }

    fn completed(&self) -> Dfa {
        let n = self.n();
        let k = self.k;
        let sink = n as u32;
        let mut trans: Vec<u32> = self.trans.iter().map(|&t| if t == NONE { sink } else { t }).collect();
        trans.extend(std::iter::repeat(sink).take(k));
        let mut accept = self.accept.clone();
        accept.push(false);
        Dfa { k, init: self.init, trans, accept }
    }

    pub fn complement(&self) -> Dfa {
        let mut c = self.completed();
        for a in c.accept.iter_mut() {
            *a = !*a;
        }
        c.minimize()
    }

    fn product(&self, other: &Dfa, complete: bool, acc: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.k != other.k {
            return Err(Error::Mismatch("acceptors over different alphabets".into()));
        }
        let (a, b) = if complete { (self.completed(), other.completed()) } else { (self.clone(), other.clone()) };
        let k = self.k;
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(a.init, b.init)];
        ids.insert((a.init, b.init), 0);
        let mut trans = Vec::new();
        let mut accept = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            accept.push(acc(a.accept[p as usize], b.accept[q as usize]));
            for s in 0..k {
                let tp = a.trans[p as usize * k + s];
                let tq = b.trans[q as usize * k + s];
                if tp == NONE || tq == NONE {
                    trans.push(NONE);
                    continue;
                }
                let next = pairs.len() as u32;
                let id = *ids.entry((tp, tq)).or_insert_with(|| {
                    pairs.push((tp, tq));
                    next
                });
                trans.push(id);
            }
            i += 1;
        }
        Ok(Dfa { k, init: 0, trans, accept }.minimize())
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, false, |x, y| x && y)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, true, |x, y| x || y)
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.graph().reachable(&[self.init()]);
        !(0..self.n()).any(|q| reach[q] && self.accept[q])
    }

    /// A shortest word leading from the initial state to `q`.
    pub fn word_to(&self, q: usize) -> Option<Word> {
        let mut prev: Vec<Option<(usize, Sym)>> = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        seen[self.init()] = true;
        let mut queue = std::collections::VecDeque::from([self.init()]);
        while let Some(u) = queue.pop_front() {
            if u == q {
                let mut w = Vec::new();
                let mut cur = u;
                while let Some((p, a)) = prev[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..self.k as Sym {
                if let Some(t) = self.step(u, a) {
                    if !seen[t] {
                        seen[t] = true;
                        prev[t] = Some((u, a));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// A shortest word accepted by `self` but not by `other`, if any.
    pub fn difference_witness(&self, other: &Dfa) -> Result<Option<Word>> {
        if self.k != other.k {
            return Err(Error::Mismatch("acceptors over different alphabets".into()));
        }
        let b = other.completed();
        let k = self.k;
        let mut prev: HashMap<(u32, u32), Option<((u32, u32), Sym)>> = HashMap::new();
        let start = (self.init, b.init);
        prev.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            if self.accept[p as usize] && !b.accept[q as usize] {
                let mut w = Vec::new();
                let mut cur = (p, q);
                while let Some(Some((pr, s))) = prev.get(&cur) {
                    w.push(*s);
                    cur = *pr;
                }
                w.reverse();
                return Ok(Some(w));
            }
            for s in 0..k {
                let tp = self.trans[p as usize * k + s];
                if tp == NONE {
                    continue;
                }
                let tq = b.trans[q as usize * k + s];
                let key = (tp, tq);
                if !prev.contains_key(&key) {
                    prev.insert(key, Some(((p, q), s as Sym)));
                    queue.push_back(key);
                }
            }
        }
        Ok(None)
    }

    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference_witness(other)?.is_none())
    }

    /// Every word of length `n` along which the transition function is
    /// defined, in lexicographic order. For a factor-language acceptor this is
    /// `B_n`.
    pub fn defined_words(&self, n: usize, budget: usize) -> Result<Vec<Word>> {
        let mut cur: Vec<(Word, usize)> = vec![(Vec::new(), self.init())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, q) in &cur {
                for a in 0..self.k as Sym {
                    if let Some(t) = self.step(*q, a) {
                        let mut v = w.clone();
                        v.push(a);
                        next.push((v, t));
                    }
                }
                if next.len() > budget {
                    return Err(Error::Budget { needed: next.len(), budget });
                }
            }
            cur = next;
        }
        Ok(cur.into_iter().map(|(w, _)| w).collect())
    }

    /// Number of words of length `n` along which transitions are defined.
    pub fn count_defined(&self, n: usize) -> u128 {
        let mut v = vec![0u128; self.n()];
        v[self.init()] = 1;
        for _ in 0..n {
            let mut nv = vec![0u128; self.n()];
            for q in 0..self.n() {
                if v[q] == 0 {
                    continue;
                }
                for a in 0..self.k as Sym {
                    if let Some(t) = self.step(q, a) {
                        nv[t] = nv[t].saturating_add(v[q]);
                    }
                }
            }
            v = nv;
        }
        v.iter().fold(0u128, |s, &x| s.saturating_add(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_graph() -> Graph {
        // a -0-> a, a -1-> b, b -0-> a
        let mut g = Graph::new(2);
        g.add_edge(0, 0, 0);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 0, 0);
        g
    }

    fn factor_dfa(g: &Graph) -> Dfa {
        let all: Vec<usize> = (0..g.n()).collect();
        Dfa::determinize(2, g, &all, &vec![true; g.n()]).minimize()
    }

    #[test]
    fn golden_factor_acceptor_has_two_states() {
        let d = factor_dfa(&golden_graph());
        assert_eq!(d.n(), 2);
        assert!(d.accepts(&[0, 1, 0, 1]));
        assert!(!d.accepts(&[1, 1]));
    }

    #[test]
    fn minimization_is_idempotent_and_canonical() {
        let d = factor_dfa(&golden_graph());
        assert_eq!(d.minimize(), d);
        // the same language from a redundant presentation
        let mut g = golden_graph();
        let c = g.add_node();
        g.add_edge(1, 0, c);
        g.add_edge(c, 0, 0);
        g.add_edge(c, 1, 1);
        assert_eq!(factor_dfa(&g), d);
    }

    #[test]
    fn empty_language() {
        let d = Dfa::trivial(2, false);
        assert!(d.is_empty());
        let u = Dfa::universal(2);
        assert!(u.intersect(&u.complement()).unwrap().is_empty());
    }

    #[test]
    fn inclusion_and_witness() {
        let gold = factor_dfa(&golden_graph());
        let full = Dfa::universal(2);
        assert!(gold.is_subset_of(&full).unwrap());
        assert_eq!(full.difference_witness(&gold).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn word_counts() {
        let gold = factor_dfa(&golden_graph());
        let fib: Vec<u128> = (0..8).map(|n| gold.count_defined(n)).collect();
        assert_eq!(fib, vec![1, 2, 3, 5, 8, 13, 21, 34]);
        assert_eq!(gold.defined_words(2, 100).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
}
