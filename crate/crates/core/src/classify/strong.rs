//! The strong periodic point condition.
//!
//! The map is first recoded to a symbol map `φ` on a higher block
//! presentation `X′` of the source, so that preimages are read letter by
//! letter on the cover of `X′`. For periodic words `u, v` of the target and
//! candidate preimage words `g, h` the set of good `w` is decided on a
//! product of subset automata:
//!
//! * `A` holds the cover states ending a left-infinite path labeled
//!   `∞g w′` with `φ(w′) ∈ u*`;
//! * `B` holds the cover states starting a right-infinite path labeled
//!   `w‴ h∞` with `φ(w‴) ∈ v*`;
//! * reading `w` moves the target state set of `∞u` and the source state
//!   set `A` in lockstep. A word is bad when the target can still continue
//!   with `v∞` but no source path has reached `B`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automata::Graph;
use crate::error::{Error, Result};
use crate::shift::{BlockMap, Presentation};

/// One failed attempt: the pair of preimage words and a word `w` for which
/// `∞left.w right∞` has no preimage `∞g_left w′.w″ w‴ g_right∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongCase {
    pub left: Word,
    pub right: Word,
    pub g_left: Word,
    pub g_right: Word,
    pub w: Word,
}

/// Why no choice `G` satisfies the strong `p`-periodic point condition.
///
/// For the periodic words `u`, `v` of `Y` and every remaining pair of
/// candidate preimage words, `cases` holds a word `w` with `∞u.wv∞ ∈ Y`
/// (or `∞v.wu∞`) that has no preimage of the required shape. When `u`
/// has no candidate at all, `cases` is empty.
#[derive(Clone, Debug)]
pub struct StrongFailure {
    pub source_alphabet: Alphabet,
    pub target_alphabet: Alphabet,
    pub p: usize,
    pub u: Word,
    pub v: Word,
    pub cases: Vec<StrongCase>,
}

impl StrongFailure {
    pub fn describe(&self) -> String {
        let (s, t) = (&self.source_alphabet, &self.target_alphabet);
        if self.cases.is_empty() {
            return format!("p={} u={}: no candidate G(u)", self.p, t.render(&self.u));
        }
        let cases: Vec<String> = self
            .cases
            .iter()
            .map(|c| {
                format!(
                    "G({})={} G({})={} fails on w={}",
                    t.render(&c.left),
                    s.render(&c.g_left),
                    t.render(&c.right),
                    s.render(&c.g_right),
                    if c.w.is_empty() { "ε".to_string() } else { t.render(&c.w) }
                )
            })
            .collect();
        format!("p={} u={} v={}: {}", self.p, t.render(&self.u), t.render(&self.v), cases.join("; "))
    }
}

/// Result of testing the strong `p`-periodic point condition.
#[derive(Clone, Debug)]
pub struct StrongConditionReport {
    pub p: usize,
    /// A valid `G`, in source letters, when the condition holds.
    pub g: BTreeMap<Word, Word>,
    pub failure: Option<StrongFailure>,
}

impl StrongConditionReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

type Set = Vec<bool>;

fn step(g: &Graph, q: usize, a: Sym) -> Option<usize> {
    g.out(q).iter().find(|e| e.0 == a).map(|e| e.1 as usize)
}

fn to_set(n: usize, states: &[usize]) -> Set {
    let mut s = vec![false; n];
    for &q in states {
        s[q] = true;
    }
    s
}

struct Setup {
    xp: Presentation,
    y: Presentation,
    pre: Vec<Vec<Sym>>,
    central: Vec<Sym>,
}

impl Setup {
    fn new(f: &BlockMap) -> Result<Setup> {
        let rec = f.recode()?;
        let xp = rec.map.source().clone();
        let y = f.target().clone();
        let mut pre = vec![Vec::new(); y.alphabet().len()];
        let mut central = vec![0; xp.alphabet().len()];
        for a in xp.alphabet().symbols() {
            if let Some(b) = rec.map.rule(&[a]) {
                pre[b as usize].push(a);
            }
            if let Some(c) = rec.conj_inv.rule(&[a]) {
                central[a as usize] = c;
            }
        }
        Ok(Setup { xp, y, pre, central })
    }

    /// States reached from `set` along source words whose image is `u`.
    fn read_preimages(&self, set: &Set, u: &[Sym]) -> Set {
        let g = self.xp.cover();
        let mut cur = set.clone();
        for &b in u {
            let mut next = vec![false; g.n()];
            for q in (0..g.n()).filter(|&q| cur[q]) {
                for &a in &self.pre[b as usize] {
                    if let Some(t) = step(g, q, a) {
                        next[t] = true;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    fn left_set(&self, g: &[Sym], u: &[Sym]) -> Set {
        let n = self.xp.cover().n();
        let mut cur = to_set(n, &self.xp.periodic_states(g));
        loop {
            let more = self.read_preimages(&cur, u);
            let next: Set = cur.iter().zip(&more).map(|(a, b)| *a || *b).collect();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn right_set(&self, h: &[Sym], v: &[Sym]) -> Set {
        let n = self.xp.cover().n();
        let mut cur = to_set(n, &self.xp.forward_periodic_states(h));
        loop {
            let mut changed = false;
            for q in 0..n {
                if !cur[q] {
                    let mut single = vec![false; n];
                    single[q] = true;
                    let reach = self.read_preimages(&single, v);
                    if reach.iter().zip(&cur).any(|(a, b)| *a && *b) {
                        cur[q] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Source words `g` with `φ(g) = u` and `∞g∞` a point.
    fn candidates(&self, u: &[Sym], budget: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        let mut stack: Vec<Word> = vec![Vec::new()];
        let mut visited = 0usize;
        while let Some(w) = stack.pop() {
            visited += 1;
            if visited > budget {
                return Err(Error::Budget { needed: visited, budget });
            }
            if w.len() == u.len() {
                if self.xp.contains_periodic(&w) {
                    out.push(w);
                }
                continue;
            }
            for &a in self.pre[u[w.len()] as usize].iter().rev() {
                let mut next = w.clone();
                next.push(a);
                if self.xp.contains_word(&next) {
                    stack.push(next);
                }
            }
        }
        Ok(out)
    }

    /// Shortest `w` with `∞u.w v∞` in the target (entered as the state sets
    /// `ly`, `ry`) and no preimage from `a` into `b`.
    fn bad_word(&self, ly: &Set, a: &Set, ry: &Set, b: &Set, budget: usize) -> Result<Option<Word>> {
        let (xg, yg) = (self.xp.cover(), self.y.cover());
        let is_bad = |s: &Set, p: &Set| {
            s.iter().zip(ry).any(|(x, y)| *x && *y) && !p.iter().zip(b).any(|(x, y)| *x && *y)
        };
        let mut index: HashMap<(Set, Set), usize> = HashMap::new();
        let mut nodes: Vec<(Set, Set, Option<(usize, Sym)>)> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert((ly.clone(), a.clone()), 0);
        nodes.push((ly.clone(), a.clone(), None));
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            let (s, p) = (nodes[i].0.clone(), nodes[i].1.clone());
            if is_bad(&s, &p) {
                let mut w = Vec::new();
                let mut cur = i;
                while let Some((prev, c)) = nodes[cur].2 {
                    w.push(c);
                    cur = prev;
                }
                w.reverse();
                return Ok(Some(w));
            }
            for c in self.y.alphabet().symbols() {
                let mut s2 = vec![false; yg.n()];
                let mut any = false;
                for q in (0..yg.n()).filter(|&q| s[q]) {
                    if let Some(t) = step(yg, q, c) {
                        s2[t] = true;
                        any = true;
                    }
                }
                if !any {
                    continue;
                }
                let mut p2 = vec![false; xg.n()];
                for q in (0..xg.n()).filter(|&q| p[q]) {
                    for &x in &self.pre[c as usize] {
                        if let Some(t) = step(xg, q, x) {
                            p2[t] = true;
                        }
                    }
                }
                let key = (s2, p2);
                if !index.contains_key(&key) {
                    if nodes.len() >= budget {
                        return Err(Error::Budget { needed: nodes.len() + 1, budget });
                    }
                    index.insert(key.clone(), nodes.len());
                    nodes.push((key.0, key.1, Some((i, c))));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        Ok(None)
    }
}

/// Interns state sets so that memo keys stay small.
#[derive(Default)]
struct Interner {
    ids: HashMap<Set, usize>,
}

impl Interner {
    fn id(&mut self, s: &Set) -> usize {
        let n = self.ids.len();
        *self.ids.entry(s.clone()).or_insert(n)
    }
}

struct Var {
    u: Word,
    ly: Set,
    ry: Set,
    ly_id: usize,
    ry_id: usize,
    cands: Vec<Word>,
    a: Vec<(Set, usize)>,
    b: Vec<(Set, usize)>,
}

struct Checker<'a> {
    setup: &'a Setup,
    vars: Vec<Var>,
    memo: HashMap<(usize, usize, usize, usize), Option<Word>>,
    budget: usize,
}

impl Checker<'_> {
    /// Failing `w` for `∞u.w v∞` with `G(u) = cands[i]`, `G(v) = cands[j]`.
    fn check(&mut self, u: usize, i: usize, v: usize, j: usize) -> Result<Option<Word>> {
        let key = (self.vars[u].ly_id, self.vars[u].a[i].1, self.vars[v].ry_id, self.vars[v].b[j].1);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = self.setup.bad_word(
            &self.vars[u].ly,
            &self.vars[u].a[i].0,
            &self.vars[v].ry,
            &self.vars[v].b[j].0,
            self.budget,
        )?;
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    /// Some failing case for the pair, trying both orders.
    fn pair_failure(&mut self, u: usize, i: usize, v: usize, j: usize) -> Result<Option<StrongCase>> {
        if let Some(w) = self.check(u, i, v, j)? {
            return Ok(Some(self.case(u, i, v, j, w)));
        }
        if let Some(w) = self.check(v, j, u, i)? {
            return Ok(Some(self.case(v, j, u, i, w)));
        }
        Ok(None)
    }

    fn case(&self, u: usize, i: usize, v: usize, j: usize, w: Word) -> StrongCase {
        StrongCase {
            left: self.vars[u].u.clone(),
            right: self.vars[v].u.clone(),
            g_left: self.translate(&self.vars[u].cands[i]),
            g_right: self.translate(&self.vars[v].cands[j]),
            w,
        }
    }

    fn translate(&self, g: &[Sym]) -> Word {
        g.iter().map(|&a| self.setup.central[a as usize]).collect()
    }
}

/// Tests the strong `p`-periodic point condition for `f`, deciding the
/// condition over all `w` for every pair `u, v ∈ P_p(Y)`.
pub fn strong_condition(f: &BlockMap, p: usize, budget: usize) -> Result<StrongConditionReport> {
    let setup = Setup::new(f)?;
    let y = setup.y.clone();
    let mut interner = Interner::default();
    let mut vars = Vec::new();
    for n in 1..=p {
        for u in y.periodic_words(n)? {
            let ly = to_set(y.cover().n(), &y.periodic_states(&u));
            let ry = to_set(y.cover().n(), &y.forward_periodic_states(&u));
            let cands = setup.candidates(&u, budget)?;
            let a: Vec<(Set, usize)> = cands
                .iter()
                .map(|g| {
                    let s = setup.left_set(g, &u);
                    let id = interner.id(&s);
                    (s, id)
                })
                .collect();
            let b: Vec<(Set, usize)> = cands
                .iter()
                .map(|g| {
                    let s = setup.right_set(g, &u);
                    let id = interner.id(&s);
                    (s, id)
                })
                .collect();
            let (ly_id, ry_id) = (interner.id(&ly), interner.id(&ry));
            vars.push(Var { u, ly, ry, ly_id, ry_id, cands, a, b });
        }
    }
    let fail = |u: &Word, v: &Word, cases: Vec<StrongCase>| StrongConditionReport {
        p,
        g: BTreeMap::new(),
        failure: Some(StrongFailure {
            source_alphabet: f.source().alphabet().clone(),
            target_alphabet: y.alphabet().clone(),
            p,
            u: u.clone(),
            v: v.clone(),
            cases,
        }),
    };
    let mut ck = Checker { setup: &setup, vars, memo: HashMap::new(), budget };
    let nv = ck.vars.len();

    // G(u) = G(v) when u = v: a unary constraint
    let mut dom: Vec<Vec<usize>> = Vec::with_capacity(nv);
    for u in 0..nv {
        let mut keep = Vec::new();
        let mut cases = Vec::new();
        for i in 0..ck.vars[u].cands.len() {
            match ck.check(u, i, u, i)? {
                None => keep.push(i),
                Some(w) => cases.push(ck.case(u, i, u, i, w)),
            }
        }
        if keep.is_empty() {
            let uw = ck.vars[u].u.clone();
            return Ok(fail(&uw, &uw, cases));
        }
        dom.push(keep);
    }

    // arc consistency on the binary constraints
    let mut queue: VecDeque<(usize, usize)> = (0..nv).flat_map(|u| (0..nv).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    while let Some((u, v)) = queue.pop_front() {
        let mut keep = Vec::new();
        let mut cases = Vec::new();
        for &i in &dom[u] {
            let mut supported = false;
            let mut first = None;
            for &j in &dom[v] {
                match ck.pair_failure(u, i, v, j)? {
                    None => {
                        supported = true;
                        break;
                    }
                    Some(c) => {
                        first.get_or_insert(c);
                    }
                }
            }
            if supported {
                keep.push(i);
            } else {
                cases.extend(first);
            }
        }
        if keep.is_empty() {
            // report every combination, one failing word each
            let mut all = Vec::new();
            for &i in &dom[u] {
                for &j in &dom[v] {
                    all.extend(ck.pair_failure(u, i, v, j)?);
                }
            }
            let (uw, vw) = (ck.vars[u].u.clone(), ck.vars[v].u.clone());
            return Ok(fail(&uw, &vw, all));
        }
        if keep.len() < dom[u].len() {
            dom[u] = keep;
            for t in (0..nv).filter(|&t| t != u && t != v) {
                queue.push_back((t, u));
            }
        }
    }

    // arc consistency does not guarantee a global choice; backtrack
    let mut assign: Vec<usize> = Vec::with_capacity(nv);
    let mut nodes = 0usize;
    if !backtrack(&mut ck, &dom, &mut assign, &mut nodes)? {
        let uw = ck.vars[0].u.clone();
        return Ok(fail(&uw, &uw, Vec::new()));
    }
    let g = assign
        .iter()
        .enumerate()
        .map(|(u, &i)| (ck.vars[u].u.clone(), ck.translate(&ck.vars[u].cands[i])))
        .collect();
    Ok(StrongConditionReport { p, g, failure: None })
}

fn backtrack(ck: &mut Checker<'_>, dom: &[Vec<usize>], assign: &mut Vec<usize>, nodes: &mut usize) -> Result<bool> {
    let u = assign.len();
    if u == dom.len() {
        return Ok(true);
    }
    for &i in &dom[u] {
        *nodes += 1;
        if *nodes > ck.budget {
            return Err(Error::Budget { needed: *nodes, budget: ck.budget });
        }
        let mut ok = true;
        for (v, &j) in assign.iter().enumerate() {
            if ck.pair_failure(u, i, v, j)?.is_some() {
                ok = false;
                break;
            }
        }
        if ok {
            assign.push(i);
            if backtrack(ck, dom, assign, nodes)? {
                return Ok(true);
            }
            assign.pop();
        }
    }
    Ok(false)
}

/// Runs the condition for `p = 1..=p_cap` and returns the first failure,
/// or the report at `p_cap` when every level holds.
pub fn strong_condition_upto(f: &BlockMap, p_cap: usize, budget: usize) -> Result<StrongConditionReport> {
    let mut last = StrongConditionReport { p: 0, g: BTreeMap::new(), failure: None };
    for p in 1..=p_cap {
        last = strong_condition(f, p, budget)?;
        if !last.holds() {
            break;
        }
    }
    Ok(last)
}
