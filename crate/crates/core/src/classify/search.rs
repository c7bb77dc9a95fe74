//! Bounded searches for sections and retractions, phrased as finite
//! constraint problems over the local rule.

use std::collections::HashMap;

use crate::alphabet::{Sym, Word};
use crate::analysis::sft_report;
use crate::error::{invalid, Error, Result};
use crate::shift::{BlockMap, Presentation};

/// A table constraint: the values of `scope` (variables may repeat) must
/// form one of the words in `tables[table]`.
struct Constraint {
    scope: Vec<usize>,
    table: usize,
}

/// Finite-domain constraint problem solved by backtracking with
/// generalized arc consistency after every assignment.
pub struct Csp {
    domains: Vec<u64>,
    tables: Vec<Vec<Word>>,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
}

impl Csp {
    pub fn new(vars: usize, symbols: usize) -> Result<Csp> {
        if symbols > 64 {
            return invalid("constraint search supports at most 64 symbols");
        }
        let full = if symbols == 64 { u64::MAX } else { (1u64 << symbols) - 1 };
        Ok(Csp { domains: vec![full; vars], tables: Vec::new(), constraints: Vec::new(), watch: vec![Vec::new(); vars] })
    }

    pub fn add_table(&mut self, words: Vec<Word>) -> usize {
        self.tables.push(words);
        self.tables.len() - 1
    }

    pub fn add_constraint(&mut self, scope: Vec<usize>, table: usize) {
        let id = self.constraints.len();
        let mut seen = scope.clone();
        seen.sort_unstable();
        seen.dedup();
        for v in seen {
            self.watch[v].push(id);
        }
        self.constraints.push(Constraint { scope, table });
    }

    pub fn restrict(&mut self, var: usize, value: Sym) {
        self.domains[var] &= 1u64 << value;
    }

    /// Prunes unsupported values of constraint `c`. Returns the variables
    /// whose domains shrank, or `None` on a wipe-out.
    fn revise(&self, c: usize, dom: &mut [u64]) -> Option<Vec<usize>> {
        let con = &self.constraints[c];
        let mut support = vec![0u64; con.scope.len()];
        'tuples: for t in &self.tables[con.table] {
            for (i, &v) in con.scope.iter().enumerate() {
                if dom[v] & (1u64 << t[i]) == 0 {
                    continue 'tuples;
                }
                // repeated variables take one value
                if con.scope[..i].iter().zip(t).any(|(&w, &s)| w == v && s != t[i]) {
                    continue 'tuples;
                }
            }
            for (i, s) in support.iter_mut().enumerate() {
                *s |= 1u64 << t[i];
            }
        }
        let mut per_var: HashMap<usize, u64> = HashMap::new();
        for (i, &v) in con.scope.iter().enumerate() {
            *per_var.entry(v).or_insert(u64::MAX) &= support[i];
        }
        let mut changed = Vec::new();
        for (v, s) in per_var {
            let nd = dom[v] & s;
            if nd == 0 {
                return None;
            }
            if nd != dom[v] {
                dom[v] = nd;
                changed.push(v);
            }
        }
        Some(changed)
    }

    fn propagate(&self, dom: &mut [u64], start: Vec<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        let mut queue: Vec<usize> = Vec::new();
        for c in start {
            if !queued[c] {
                queued[c] = true;
                queue.push(c);
            }
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            let Some(changed) = self.revise(c, dom) else {
                return false;
            };
            for v in changed {
                for &d in &self.watch[v] {
                    if !queued[d] {
                        queued[d] = true;
                        queue.push(d);
                    }
                }
            }
        }
        true
    }

    /// First solution in a fixed search order, or `None` when there is none.
    /// The number of search nodes is capped by `budget`.
    pub fn solve(&self, budget: usize) -> Result<Option<Vec<Sym>>> {
        let mut dom = self.domains.clone();
        if dom.iter().any(|&d| d == 0) || !self.propagate(&mut dom, (0..self.constraints.len()).collect()) {
            return Ok(None);
        }
        let mut nodes = 0usize;
        self.search(dom, &mut nodes, budget)
    }

    fn search(&self, dom: Vec<u64>, nodes: &mut usize, budget: usize) -> Result<Option<Vec<Sym>>> {
        // smallest open domain first
        let pick = (0..dom.len()).filter(|&v| dom[v].count_ones() > 1).min_by_key(|&v| dom[v].count_ones());
        let Some(v) = pick else {
            return Ok(Some(dom.iter().map(|d| d.trailing_zeros()).collect()));
        };
        let mut bits = dom[v];
        while bits != 0 {
            let s = bits.trailing_zeros();
            bits &= bits - 1;
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget { needed: *nodes, budget });
            }
            let mut next = dom.clone();
            next[v] = 1u64 << s;
            if self.propagate(&mut next, self.watch[v].clone()) {
                if let Some(sol) = self.search(next, nodes, budget)? {
                    return Ok(Some(sol));
                }
            }
        }
        Ok(None)
    }
}

/// Window length whose allowed words pin down membership in `x`.
fn membership_window(x: &Presentation) -> usize {
    sft_report(x).window.unwrap_or(2).max(1)
}

struct RuleVars {
    index: HashMap<Word, usize>,
    words: Vec<Word>,
}

impl RuleVars {
    fn new(y: &Presentation, radius: usize, budget: usize) -> Result<RuleVars> {
        let words = y.words_within(2 * radius + 1, budget)?;
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Ok(RuleVars { index, words })
    }

    fn scope(&self, w: &[Sym], radius: usize, count: usize) -> Vec<usize> {
        (0..count).map(|t| self.index[&w[t..t + 2 * radius + 1]]).collect()
    }
}

/// Adds "the output lies in `x`" as window constraints on rules of `y`.
fn add_membership(csp: &mut Csp, vars: &RuleVars, y: &Presentation, x: &Presentation, radius: usize, budget: usize) -> Result<()> {
    let l = membership_window(x);
    let table = csp.add_table(x.words_within(l, budget)?);
    for w in y.words_within(2 * radius + l, budget)? {
        csp.add_constraint(vars.scope(&w, radius, l), table);
    }
    Ok(())
}

fn build_rule(y: &Presentation, x: &Presentation, radius: usize, vars: &RuleVars, sol: &[Sym]) -> Option<BlockMap> {
    BlockMap::new(y, x, radius, radius, |w| sol[vars.index[w]]).ok()
}

/// Searches a section `g : Y → X` of `f` with window `[-radius, radius]`,
/// so that `f ∘ g = id`. When `pointed`, `g` must map the designated
/// point of `Y` to that of `X`. The result is re-verified.
pub fn find_section(f: &BlockMap, radius: usize, pointed: bool, budget: usize) -> Result<Option<BlockMap>> {
    let (x, y) = (f.source(), f.target());
    let vars = RuleVars::new(y, radius, budget)?;
    let mut csp = Csp::new(vars.words.len(), x.alphabet().len())?;
    let (m, a) = (f.memory(), f.anticipation());
    let n = m + a + 1;
    let mut by_centre: Vec<Vec<Word>> = vec![Vec::new(); y.alphabet().len()];
    for o in x.words_within(n, budget)? {
        by_centre[f.rule(&o).expect("source word") as usize].push(o);
    }
    let tables: Vec<usize> = by_centre.into_iter().map(|t| csp.add_table(t)).collect();
    for w in y.words_within(2 * radius + n, budget)? {
        let c = w[m + radius];
        csp.add_constraint(vars.scope(&w, radius, n), tables[c as usize]);
    }
    add_membership(&mut csp, &vars, y, x, radius, budget)?;
    if pointed {
        if let (Some(px), Some(py)) = (x.point(), y.point()) {
            if let Some(&v) = vars.index.get(&vec![py; 2 * radius + 1]) {
                csp.restrict(v, px);
            }
        }
    }
    let Some(sol) = csp.solve(budget)? else {
        return Ok(None);
    };
    let Some(g) = build_rule(y, x, radius, &vars, &sol) else {
        return Ok(None);
    };
    let fg = BlockMap::compose(f, &g)?;
    Ok(BlockMap::maps_equal(&fg, &BlockMap::identity(y))?.then_some(g))
}

/// Searches a retraction `h : Y → X` of `f` with window `[-radius, radius]`,
/// so that `h ∘ f = id`. The result is re-verified.
pub fn find_retraction(f: &BlockMap, radius: usize, pointed: bool, budget: usize) -> Result<Option<BlockMap>> {
    let (x, y) = (f.source(), f.target());
    let vars = RuleVars::new(y, radius, budget)?;
    let mut csp = Csp::new(vars.words.len(), x.alphabet().len())?;
    let (m, a) = (f.memory(), f.anticipation());
    // h reads f(x) on [i - r, i + r] and must return x_i
    let mut forced: HashMap<usize, Sym> = HashMap::new();
    for v in x.words_within(2 * radius + m + a + 1, budget)? {
        let u = f.apply_word(&v).expect("source word");
        let var = vars.index[&u];
        let want = v[radius + m];
        match forced.insert(var, want) {
            Some(prev) if prev != want => return Ok(None),
            _ => csp.restrict(var, want),
        }
    }
    add_membership(&mut csp, &vars, y, x, radius, budget)?;
    if pointed {
        if let (Some(px), Some(py)) = (x.point(), y.point()) {
            if let Some(&v) = vars.index.get(&vec![py; 2 * radius + 1]) {
                csp.restrict(v, px);
            }
        }
    }
    let Some(sol) = csp.solve(budget)? else {
        return Ok(None);
    };
    let Some(h) = build_rule(y, x, radius, &vars, &sol) else {
        return Ok(None);
    };
    let hf = BlockMap::compose(&h, f)?;
    Ok(BlockMap::maps_equal(&hf, &BlockMap::identity(x))?.then_some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn full2() -> Presentation {
        Presentation::full(&Alphabet::numeric(2))
    }

    fn golden() -> Presentation {
        Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap()
    }

    #[test]
    fn csp_solves_small_problem() {
        // x0 != x1, x1 != x2, x0 != x2 over three symbols
        let mut csp = Csp::new(3, 3).unwrap();
        let neq: Vec<Word> = (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| vec![a, b])).collect();
        let t = csp.add_table(neq);
        csp.add_constraint(vec![0, 1], t);
        csp.add_constraint(vec![1, 2], t);
        csp.add_constraint(vec![0, 2], t);
        let sol = csp.solve(1000).unwrap().unwrap();
        assert!(sol[0] != sol[1] && sol[1] != sol[2] && sol[0] != sol[2]);
        csp.restrict(0, 0);
        csp.restrict(1, 0);
        assert!(csp.solve(1000).unwrap().is_none());
    }

    #[test]
    fn repeated_variables_agree() {
        let mut csp = Csp::new(1, 2).unwrap();
        let t = csp.add_table(vec![vec![0, 1], vec![1, 0]]);
        csp.add_constraint(vec![0, 0], t);
        assert!(csp.solve(100).unwrap().is_none());
    }

    #[test]
    fn golden_inclusion_has_retraction_at_radius_one() {
        let i = BlockMap::new(&golden(), &full2(), 0, 0, |w| w[0]).unwrap();
        assert!(find_retraction(&i, 0, false, 1 << 20).unwrap().is_none());
        let h = find_retraction(&i, 1, false, 1 << 20).unwrap().expect("retraction");
        let hi = BlockMap::compose(&h, &i).unwrap();
        assert!(BlockMap::maps_equal(&hi, &BlockMap::identity(&golden())).unwrap());
    }

    #[test]
    fn identity_section() {
        let g = find_section(&BlockMap::identity(&golden()), 0, false, 1 << 20).unwrap().unwrap();
        assert!(BlockMap::maps_equal(&g, &BlockMap::identity(&golden())).unwrap());
    }

    #[test]
    fn xor2_has_no_section() {
        let f = BlockMap::new(&full2(), &full2(), 0, 1, |w| w[0] ^ w[1]).unwrap();
        for r in 0..=2 {
            assert!(find_section(&f, r, false, 1 << 20).unwrap().is_none());
        }
    }
}
