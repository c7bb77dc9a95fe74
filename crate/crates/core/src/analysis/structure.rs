//! Shift-level structure: constituents, transitivity, mixing, finite type,
//! countability.

use std::collections::{HashMap, HashSet};

use crate::alphabet::{Sym, Word};
use crate::automata::Graph;
use crate::error::Result;
use crate::shift::Presentation;
use crate::verdict::{Evidence, Verdict};

/// Subgraph of `g` induced by `members`.
pub(crate) fn induced_on(g: &Graph, members: &[usize]) -> Graph {
    let mut keep = vec![false; g.n()];
    for &v in members {
        keep[v] = true;
    }
    g.induced(&keep).0
}

/// `g` with only the edges inside `members`; vertex ids are kept.
pub(crate) fn restrict(g: &Graph, members: &[usize]) -> Graph {
    let mut keep = vec![false; g.n()];
    for &v in members {
        keep[v] = true;
    }
    let mut h = Graph::new(g.n());
    for (u, s, v) in g.edges() {
        if keep[u] && keep[v] {
            h.add_edge(u, s, v);
        }
    }
    h
}

/// Subshifts generated by the nontrivial components of the cover, with the
/// component they come from.
pub fn component_subshifts(x: &Presentation) -> Vec<(Presentation, Vec<usize>)> {
    x.cover()
        .nontrivial_sccs()
        .into_iter()
        .map(|m| (Presentation::from_graph(x.alphabet(), &induced_on(x.cover(), &m)), m))
        .collect()
}

/// Indices of the inclusion-maximal subshifts, one per distinct subshift.
pub(crate) fn maximal_indices(cands: &[Presentation]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    'outer: for (i, p) in cands.iter().enumerate() {
        for (j, q) in cands.iter().enumerate() {
            if i != j && p.is_subshift_of(q)? && (!q.same_shift(p) || j < i) {
                continue 'outer;
            }
        }
        out.push(i);
    }
    Ok(out)
}

/// The constituents (maximal transitive subshifts).
pub fn constituents(x: &Presentation) -> Result<Vec<Presentation>> {
    Ok(constituents_with_components(x)?.into_iter().map(|(p, _)| p).collect())
}

pub(crate) fn constituents_with_components(x: &Presentation) -> Result<Vec<(Presentation, Vec<usize>)>> {
    let mut all = component_subshifts(x);
    let pres: Vec<Presentation> = all.iter().map(|c| c.0.clone()).collect();
    let keep: HashSet<usize> = maximal_indices(&pres)?.into_iter().collect();
    let mut i = 0;
    all.retain(|_| {
        i += 1;
        keep.contains(&(i - 1))
    });
    Ok(all)
}

/// Transitive: empty, or a single constituent equal to the whole shift.
pub fn is_transitive(x: &Presentation) -> Result<bool> {
    if x.is_empty() {
        return Ok(true);
    }
    let c = constituents(x)?;
    Ok(c.len() == 1 && c[0].same_shift(x))
}

/// Merges states of a deterministic graph with equal follower sets.
pub fn follower_quotient(g: &Graph) -> Graph {
    let n = g.n();
    let mut class: Vec<usize> = vec![0; n];
    let mut count = 1;
    loop {
        let mut sig_index: HashMap<(usize, Vec<(Sym, usize)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for v in 0..n {
            let mut sig: Vec<(Sym, usize)> = g.out(v).iter().map(|&(a, t)| (a, class[t as usize])).collect();
            sig.sort_unstable();
            let len = sig_index.len();
            next[v] = *sig_index.entry((class[v], sig)).or_insert(len);
        }
        let new_count = sig_index.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut q = Graph::new(count);
    let mut seen = HashSet::new();
    for (u, a, v) in g.edges() {
        if seen.insert((class[u], a, class[v])) {
            q.add_edge(class[u], a, class[v]);
        }
    }
    q
}

/// Period of a transitive shift: the period of its minimal right-resolving
/// presentation. `None` when `x` is not transitive or empty.
pub fn shift_period(x: &Presentation) -> Result<Option<usize>> {
    if x.is_empty() {
        return Ok(None);
    }
    for (p, m) in constituents_with_components(x)? {
        if p.same_shift(x) {
            let q = follower_quotient(&induced_on(x.cover(), &m));
            return Ok(Some(q.period()));
        }
    }
    Ok(None)
}

/// Mixing: transitive with period 1. The empty shift counts as mixing.
pub fn is_mixing(x: &Presentation) -> Result<bool> {
    if x.is_empty() {
        return Ok(true);
    }
    Ok(shift_period(x)? == Some(1))
}

/// Outcome of the finite-type test.
#[derive(Clone, Debug)]
pub struct SftReport {
    /// Window `m` such that forbidding the missing `m`-words gives the shift.
    pub window: Option<usize>,
    /// When not of finite type: words `prefix · cycle^k` each of which is
    /// a context where one more symbol of memory is needed.
    pub pumping: Option<(Word, Word)>,
}

/// Exact finite-type test on the minimal acceptor of the language.
///
/// With `δ` the acceptor and `ι` its initial state, the shift is an SFT iff
/// only finitely many `v` have a state `p` with `δ(p, v)` defined and
/// different from `δ(ι, v)`.
pub fn sft_report(x: &Presentation) -> SftReport {
    let d = x.dfa();
    if x.is_empty() || d.n() <= 1 {
        return SftReport { window: Some(1), pumping: None };
    }
    let init = d.init();
    // pair graph on unequal pairs (p, q) with q on the initial branch
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut parent: Vec<Option<(usize, Sym)>> = Vec::new();
    let mut root_word: Vec<usize> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for p in 0..d.n() {
        if p != init {
            index.insert((p, init), nodes.len());
            nodes.push((p, init));
            parent.push(None);
            root_word.push(p);
            queue.push_back(nodes.len() - 1);
        }
    }
    let mut edges: Vec<(usize, Sym, usize)> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (p, q) = nodes[i];
        let root = root_word[i];
        for a in 0..d.k() as Sym {
            if let (Some(p2), Some(q2)) = (d.step(p, a), d.step(q, a)) {
                if p2 == q2 {
                    continue;
                }
                let j = *index.entry((p2, q2)).or_insert_with(|| {
                    nodes.push((p2, q2));
                    parent.push(Some((i, a)));
                    root_word.push(root);
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                edges.push((i, a, j));
            }
        }
    }
    let mut pg = Graph::new(nodes.len());
    for &(i, a, j) in &edges {
        pg.add_edge(i, a, j);
    }
    let cyc = pg.nontrivial_sccs();
    if let Some(comp) = cyc.first() {
        // a word reaching the component, then a cycle inside it
        let start = comp[0];
        let mut prefix = Vec::new();
        let mut cur = start;
        while let Some((par, a)) = parent[cur] {
            prefix.push(a);
            cur = par;
        }
        prefix.reverse();
        let reach_p = d.word_to(root_word[cur]).expect("acceptor states are reachable");
        let mut full_prefix = reach_p;
        full_prefix.extend(&prefix);
        let cycle = cycle_through(&pg, comp, start);
        return SftReport { window: None, pumping: Some((full_prefix, cycle)) };
    }
    // longest path in the acyclic pair graph, counted in symbols
    let order = topo_order(&pg);
    let mut longest = vec![0usize; pg.n()];
    for &u in order.iter().rev() {
        for &(_, v) in pg.out(u) {
            longest[u] = longest[u].max(longest[v as usize] + 1);
        }
    }
    let l = longest.into_iter().max().unwrap_or(0);
    SftReport { window: Some(l + 2), pumping: None }
}

fn topo_order(g: &Graph) -> Vec<usize> {
    let mut indeg = vec![0; g.n()];
    for (_, _, v) in g.edges() {
        indeg[v] += 1;
    }
    let mut stack: Vec<usize> = (0..g.n()).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::new();
    while let Some(u) = stack.pop() {
        out.push(u);
        for &(_, v) in g.out(u) {
            indeg[v as usize] -= 1;
            if indeg[v as usize] == 0 {
                stack.push(v as usize);
            }
        }
    }
    out
}

/// Labels of a cycle through `start` inside the component `comp`.
pub(crate) fn cycle_through(g: &Graph, comp: &[usize], start: usize) -> Word {
    let inside: HashSet<usize> = comp.iter().copied().collect();
    // BFS from successors of start back to start
    let mut prev: HashMap<usize, (usize, Sym)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([start]);
    let mut visited = HashSet::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(a, v) in g.out(u) {
            let v = v as usize;
            if !inside.contains(&v) {
                continue;
            }
            if v == start {
                let mut w = vec![a];
                let mut cur = u;
                while cur != start {
                    let (p, b) = prev[&cur];
                    w.push(b);
                    cur = p;
                }
                w.reverse();
                return w;
            }
            if visited.insert(v) {
                prev.insert(v, (u, a));
                queue.push_back(v);
            }
        }
    }
    Vec::new()
}

/// Finite-type verdict with a window certificate or a pumping witness.
pub fn is_sft(x: &Presentation) -> Verdict {
    let r = sft_report(x);
    match (r.window, r.pumping) {
        (Some(m), _) => Verdict::yes().certificate(Evidence::Window(m)),
        (None, Some((prefix, cycle))) => Verdict::no().witness(Evidence::Pumping {
            alphabet: x.alphabet().clone(),
            prefix,
            cycle,
        }),
        (None, None) => unreachable!("non-SFT report always carries a witness"),
    }
}

/// Countable: every component of the cover is a single cycle.
pub fn is_countable(x: &Presentation) -> bool {
    let g = x.cover();
    let (comp, _) = g.sccs();
    (0..g.n()).all(|v| g.out(v).iter().filter(|&&(_, t)| comp[t as usize] == comp[v]).count() <= 1)
}

/// Finite: countable and equal to the union of the periodic orbits carried
/// by the cycles of the cover.
pub fn is_finite(x: &Presentation) -> Result<bool> {
    if !is_countable(x) {
        return Ok(false);
    }
    let mut u = Presentation::empty(x.alphabet());
    for (p, _) in component_subshifts(x) {
        u = u.union(&p)?;
    }
    Ok(u.same_shift(x))
}

/// Positive entropy, which for sofic shifts means uncountable.
pub fn has_positive_entropy(x: &Presentation) -> bool {
    !is_countable(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn golden() -> Presentation {
        Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap()
    }

    pub(crate) fn graph(k: usize, n: usize, edges: &[(usize, Sym, usize)]) -> Presentation {
        let mut g = Graph::new(n);
        for &(u, s, v) in edges {
            g.add_edge(u, s, v);
        }
        Presentation::from_graph(&Alphabet::numeric(k), &g)
    }

    fn even() -> Presentation {
        // 0 loops at a; 1 goes a -> b -> a
        graph(2, 2, &[(0, 0, 0), (0, 1, 1), (1, 1, 0)])
    }

    fn orbit01() -> Presentation {
        graph(2, 2, &[(0, 0, 1), (1, 1, 0)])
    }

    #[test]
    fn golden_structure() {
        let g = golden();
        assert!(is_transitive(&g).unwrap());
        assert!(is_mixing(&g).unwrap());
        assert_eq!(constituents(&g).unwrap().len(), 1);
        assert!(!is_countable(&g));
        assert!(matches!(is_sft(&g).certificate, Some(Evidence::Window(2))));
    }

    #[test]
    fn orbit_is_transitive_not_mixing() {
        let o = orbit01();
        assert!(is_transitive(&o).unwrap());
        assert!(!is_mixing(&o).unwrap());
        assert!(is_finite(&o).unwrap());
    }

    #[test]
    fn disjoint_union_is_not_transitive() {
        let a = graph(4, 1, &[(0, 0, 0), (0, 1, 0)]);
        let b = graph(4, 1, &[(0, 2, 0), (0, 3, 0)]);
        let u = a.union(&b).unwrap();
        assert!(!is_transitive(&u).unwrap());
        assert_eq!(constituents(&u).unwrap().len(), 2);
    }

    #[test]
    fn even_shift_is_not_sft() {
        let v = is_sft(&even());
        assert!(v.is_no());
        if let Some(Evidence::Pumping { prefix, cycle, .. }) = &v.witness {
            assert!(!cycle.is_empty());
            let mut w = prefix.clone();
            w.extend(cycle);
            assert!(even().contains_word(&w));
        } else {
            panic!("missing witness");
        }
        assert!(is_mixing(&even()).unwrap());
    }

    #[test]
    fn full_shift_window_one() {
        let f = Presentation::full(&Alphabet::numeric(2));
        assert!(matches!(is_sft(&f).certificate, Some(Evidence::Window(1))));
    }

    #[test]
    fn gcd_of_fixed_points_is_not_the_period() {
        // two-state graph with labels a,b out of A and a,c out of B
        let x = graph(3, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 2, 0)]);
        assert!(x.contains_periodic(&[0]));
        assert!(is_transitive(&x).unwrap());
        assert!(!is_mixing(&x).unwrap());
    }

    #[test]
    fn zero_one_two_staircase() {
        // 0*1*2*: loops at three states, forward edges
        let x = Presentation::from_forbidden(&Alphabet::numeric(3), vec![vec![1, 0], vec![2, 0], vec![2, 1]]).unwrap();
        assert!(is_countable(&x));
        assert!(!is_finite(&x).unwrap());
        assert_eq!(constituents(&x).unwrap().len(), 3);
    }

    #[test]
    fn sft_window_matches_forbidden_length() {
        let x = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        match is_sft(&x).certificate {
            Some(Evidence::Window(m)) => assert_eq!(m, 3),
            other => panic!("{other:?}"),
        }
    }
}
