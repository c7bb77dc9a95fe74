//! Map-level predicates read off the kernel set: injectivity and its
//! weakenings, preinjectivity, resolvingness, surjectivity.

use std::collections::{HashMap, VecDeque};

use super::relation::{kernel_set, SubshiftRelation};
use super::structure::cycle_through;
use crate::alphabet::{Sym, Word};
use crate::automata::Graph;
use crate::error::Result;
use crate::shift::{BlockMap, EventuallyPeriodicPoint, PeriodicPoint};
use crate::verdict::{Evidence, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InjectivityFamily {
    pub injective: bool,
    pub injective_on_periodic: bool,
    pub injective_on_uniform: bool,
}

/// Diagonal/off-diagonal bookkeeping on the cover of a kernel set.
struct KernelCover<'a> {
    rel: &'a SubshiftRelation,
    g: &'a Graph,
    /// Subgraph of diagonal edges.
    diag: Graph,
    /// States on a cycle of diagonal edges.
    on_diag_cycle: Vec<bool>,
}

impl<'a> KernelCover<'a> {
    fn new(rel: &'a SubshiftRelation) -> KernelCover<'a> {
        let g = rel.presentation().cover();
        let mut diag = Graph::new(g.n());
        for (u, s, v) in g.edges() {
            if rel.is_diagonal_symbol(s) {
                diag.add_edge(u, s, v);
            }
        }
        let mut on_diag_cycle = vec![false; g.n()];
        for comp in diag.nontrivial_sccs() {
            for v in comp {
                on_diag_cycle[v] = true;
            }
        }
        KernelCover { rel, g, diag, on_diag_cycle }
    }

    fn cycle_states(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| self.on_diag_cycle[v]).collect()
    }

    /// States ending a left-infinite diagonal path.
    fn left_diagonal(&self) -> Vec<bool> {
        self.diag.reachable(&self.cycle_states())
    }

    /// States starting a right-infinite diagonal path.
    fn right_diagonal(&self) -> Vec<bool> {
        self.diag.reverse().reachable(&self.cycle_states())
    }

    /// Diagonal cycle word through a state that lies on one.
    fn diag_cycle_at(&self, v: usize) -> Word {
        let (comp, _) = self.diag.sccs();
        let members: Vec<usize> = (0..self.g.n()).filter(|&u| comp[u] == comp[v]).collect();
        cycle_through(&self.diag, &members, v)
    }

    /// Shortest path `from → to` in `h`, as labels.
    fn path(h: &Graph, from: usize, to: usize) -> Option<Word> {
        let mut prev: HashMap<usize, (usize, Sym)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; h.n()];
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut w = Vec::new();
                let mut cur = u;
                while cur != from {
                    let (p, a) = prev[&cur];
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for &(a, t) in h.out(u) {
                let t = t as usize;
                if !seen[t] {
                    seen[t] = true;
                    prev.insert(t, (u, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A left-infinite diagonal tail into `v`: a diagonal cycle word and a
    /// connecting word.
    fn left_tail(&self, v: usize) -> (Word, Word) {
        let rev = self.diag.reverse();
        let seen = rev.reachable(&[v]);
        let c = (0..self.g.n()).find(|&u| seen[u] && self.on_diag_cycle[u]).expect("state has a diagonal past");
        (self.diag_cycle_at(c), KernelCover::path(&self.diag, c, v).unwrap())
    }

    /// A right-infinite diagonal tail from `v`.
    fn right_tail(&self, v: usize) -> (Word, Word) {
        let seen = self.diag.reachable(&[v]);
        let c = (0..self.g.n()).find(|&u| seen[u] && self.on_diag_cycle[u]).expect("state has a diagonal future");
        (KernelCover::path(&self.diag, v, c).unwrap(), self.diag_cycle_at(c))
    }

    /// Any left-infinite path into `v` (cover is essential).
    fn any_left_tail(&self, v: usize) -> (Word, Word) {
        let rev = self.g.reverse();
        let seen = rev.reachable(&[v]);
        for m in self.g.nontrivial_sccs() {
            if seen[m[0]] {
                let c = m[0];
                return (cycle_through(self.g, &m, c), KernelCover::path(self.g, c, v).unwrap());
            }
        }
        unreachable!("essential graphs have infinite pasts")
    }

    fn any_right_tail(&self, v: usize) -> (Word, Word) {
        let seen = self.g.reachable(&[v]);
        for m in self.g.nontrivial_sccs() {
            if seen[m[0]] {
                let c = m[0];
                return (KernelCover::path(self.g, v, c).unwrap(), cycle_through(self.g, &m, c));
            }
        }
        unreachable!("essential graphs have infinite futures")
    }

    fn split_point(&self, left: &Word, center: &Word, right: &Word) -> (EventuallyPeriodicPoint, EventuallyPeriodicPoint) {
        let (l1, l2) = self.rel.unzip(left);
        let (c1, c2) = self.rel.unzip(center);
        let (r1, r2) = self.rel.unzip(right);
        (EventuallyPeriodicPoint::new(l1, c1, r1), EventuallyPeriodicPoint::new(l2, c2, r2))
    }
}

fn injective_on_periodic_witness(k: &SubshiftRelation) -> Option<(PeriodicPoint, PeriodicPoint)> {
    let g = k.presentation().cover();
    let (comp, _) = g.sccs();
    for (u, s, v) in g.edges() {
        if comp[u] == comp[v] && !k.is_diagonal_symbol(s) {
            let members: Vec<usize> = (0..g.n()).filter(|&w| comp[w] == comp[u]).collect();
            let back = KernelCover::path(&super::structure::restrict(g, &members), v, u).unwrap();
            let mut w = vec![s];
            w.extend(back);
            let (a, b) = k.unzip(&w);
            return Some((PeriodicPoint::new(a), PeriodicPoint::new(b)));
        }
    }
    None
}

/// The three injectivity predicates, exact.
pub fn injectivity_family(f: &BlockMap) -> Result<InjectivityFamily> {
    let k = kernel_set(f)?;
    let injective = k.is_within_diagonal();
    let injective_on_periodic = injective_on_periodic_witness(&k).is_none();
    let uni = f.source().uniform_points();
    let images: Vec<Sym> = uni.iter().map(|&a| f.rule(&vec![a; f.width()]).expect("uniform words are words")).collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(InjectivityFamily { injective, injective_on_periodic, injective_on_uniform: sorted.len() == images.len() })
}

/// Injectivity, with two distinct points of equal image as NO witness.
pub fn is_injective(f: &BlockMap) -> Result<Verdict> {
    let k = kernel_set(f)?;
    if k.is_within_diagonal() {
        return Ok(Verdict::yes());
    }
    let kc = KernelCover::new(&k);
    let (u, s, v) = kc.g.edges().find(|&(_, s, _)| !k.is_diagonal_symbol(s)).unwrap();
    let (lc, lp) = kc.any_left_tail(u);
    let (rp, rc) = kc.any_right_tail(v);
    let mut center = lp;
    center.push(s);
    center.extend(rp);
    let (x, y) = kc.split_point(&lc, &center, &rc);
    Ok(Verdict::no().witness(Evidence::AsymptoticPair(f.source().alphabet().clone(), x, y)))
}

pub fn is_injective_on_periodic(f: &BlockMap) -> Result<Verdict> {
    let k = kernel_set(f)?;
    Ok(match injective_on_periodic_witness(&k) {
        None => Verdict::yes(),
        Some((x, y)) => Verdict::no().witness(Evidence::PeriodicPair(f.source().alphabet().clone(), x, y)),
    })
}

/// Preinjectivity: no two distinct points asymptotic in both directions
/// share an image. The search runs on the kernel cover in two layers, the
/// second entered through an off-diagonal edge, from states with a
/// diagonal past to states with a diagonal future.
pub fn is_preinjective(f: &BlockMap) -> Result<Verdict> {
    let k = kernel_set(f)?;
    let kc = KernelCover::new(&k);
    let n = kc.g.n();
    let left = kc.left_diagonal();
    let right = kc.right_diagonal();
    // nodes: (state, layer), index = 2·state + layer
    let mut prev: Vec<Option<(usize, Sym)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if left[v] {
            seen[2 * v] = true;
            queue.push_back(2 * v);
        }
    }
    let mut goal = None;
    while let Some(node) = queue.pop_front() {
        let (v, layer) = (node / 2, node % 2);
        if layer == 1 && right[v] {
            goal = Some(node);
            break;
        }
        for &(s, t) in kc.g.out(v) {
            let diag = k.is_diagonal_symbol(s);
            if layer == 0 && diag && !left[t as usize] {
                continue;
            }
            let next = 2 * t as usize + if diag { layer } else { 1 };
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some((node, s));
                queue.push_back(next);
            }
        }
    }
    let Some(goal) = goal else {
        return Ok(Verdict::yes());
    };
    let mut center = Vec::new();
    let mut cur = goal;
    while let Some((p, s)) = prev[cur] {
        center.push(s);
        cur = p;
    }
    center.reverse();
    let (lc, lp) = kc.left_tail(cur / 2);
    let (rp, rc) = kc.right_tail(goal / 2);
    let mut mid = lp;
    mid.extend(center);
    mid.extend(rp);
    let (x, y) = kc.split_point(&lc, &mid, &rc);
    Ok(Verdict::no().witness(Evidence::AsymptoticPair(f.source().alphabet().clone(), x, y)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolvingness {
    pub right: bool,
    pub left: bool,
}

/// Right resolving: points agreeing on all coordinates `≤ 0` with equal
/// images are equal. Left resolving is the mirror statement.
pub fn resolvingness(f: &BlockMap) -> Result<Resolvingness> {
    let k = kernel_set(f)?;
    let kc = KernelCover::new(&k);
    let left = kc.left_diagonal();
    let right = kc.right_diagonal();
    let mut r = Resolvingness { right: true, left: true };
    for (u, s, v) in kc.g.edges() {
        if k.is_diagonal_symbol(s) {
            continue;
        }
        if left[u] {
            r.right = false;
        }
        if right[v] {
            r.left = false;
        }
    }
    Ok(r)
}

/// Surjectivity onto the target, with a target word missing from the image
/// as NO witness.
pub fn is_surjective(f: &BlockMap) -> Result<Verdict> {
    let img = f.image()?;
    Ok(match f.target().word_not_in(&img)? {
        None => Verdict::yes(),
        Some(w) => Verdict::no().witness(Evidence::Word(f.target().alphabet().clone(), w)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::shift::Presentation;

    fn full(k: usize) -> Presentation {
        Presentation::full(&Alphabet::numeric(k))
    }

    fn xor3() -> BlockMap {
        BlockMap::new(&full(2), &full(2), 1, 1, |w| w[0] ^ w[1] ^ w[2]).unwrap()
    }

    fn check_pair(f: &BlockMap, v: &Verdict) {
        let Some(Evidence::AsymptoticPair(_, x, y)) = &v.witness else { panic!("no pair") };
        let w = f.width();
        let mut differ = false;
        for i in -30i64..30 {
            let (a, b) = (x.window(i, w), y.window(i, w));
            assert!(f.source().contains_word(&a) && f.source().contains_word(&b));
            assert_eq!(f.rule(&a), f.rule(&b), "images differ at {i}");
            differ |= x.at(i) != y.at(i);
        }
        assert!(differ);
    }

    #[test]
    fn identity_is_everything() {
        let x = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        let id = BlockMap::identity(&x);
        let fam = injectivity_family(&id).unwrap();
        assert!(fam.injective && fam.injective_on_periodic && fam.injective_on_uniform);
        assert!(is_preinjective(&id).unwrap().is_yes());
        assert_eq!(resolvingness(&id).unwrap(), Resolvingness { right: true, left: true });
        assert!(is_surjective(&id).unwrap().is_yes());
    }

    #[test]
    fn xor3_family() {
        let f = xor3();
        let fam = injectivity_family(&f).unwrap();
        assert_eq!(
            fam,
            InjectivityFamily { injective: false, injective_on_periodic: false, injective_on_uniform: true }
        );
        assert!(is_preinjective(&f).unwrap().is_yes());
        assert!(is_surjective(&f).unwrap().is_yes());
        let v = is_injective(&f).unwrap();
        check_pair(&f, &v);
    }

    #[test]
    fn xor2_resolving_both_ways() {
        let f = BlockMap::new(&full(2), &full(2), 0, 1, |w| w[0] ^ w[1]).unwrap();
        assert_eq!(resolvingness(&f).unwrap(), Resolvingness { right: true, left: true });
    }

    #[test]
    fn modified_xor_left_only() {
        let f = BlockMap::new(&full(3), &full(3), 0, 1, |w| if w[0] == 2 { 2 } else { (w[0] + w[1]) % 2 }).unwrap();
        assert_eq!(resolvingness(&f).unwrap(), Resolvingness { right: false, left: true });
    }

    #[test]
    fn constant_map_is_not_preinjective() {
        let f = BlockMap::constant(&full(2), &full(2), 0).unwrap();
        let v = is_preinjective(&f).unwrap();
        assert!(v.is_no());
        check_pair(&f, &v);
    }

    #[test]
    fn golden_inclusion_misses_11() {
        let g = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap();
        let i = BlockMap::new(&g, &full(2), 0, 0, |w| w[0]).unwrap();
        let v = is_surjective(&i).unwrap();
        assert!(matches!(v.witness, Some(Evidence::Word(_, ref w)) if w == &vec![1, 1]));
    }

    fn graph(k: usize, n: usize, edges: &[(usize, Sym, usize)]) -> Presentation {
        let mut g = Graph::new(n);
        for &(u, s, v) in edges {
            g.add_edge(u, s, v);
        }
        Presentation::from_graph(&Alphabet::numeric(k), &g)
    }

    #[test]
    fn xor3_kernel_constituents() {
        use crate::analysis::structure::{constituents, is_mixing, shift_period};
        let k = kernel_set(&xor3()).unwrap();
        let c = constituents(k.presentation()).unwrap();
        assert_eq!(c.len(), 2);
        let diag = SubshiftRelation::diagonal(&full(2));
        let (d, other): (Vec<_>, Vec<_>) = c.iter().partition(|p| p.same_shift(diag.presentation()));
        assert_eq!(d.len(), 1);
        assert!(is_mixing(d[0]).unwrap());
        assert_eq!(shift_period(other[0]).unwrap(), Some(3));
    }

    #[test]
    fn xor2_on_no_runs_kernel_has_two_mixing_constituents() {
        use crate::analysis::structure::{constituents, is_mixing};
        let x = Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        let f = BlockMap::new(&x, &full(2), 0, 1, |w| w[0] ^ w[1]).unwrap();
        let c = constituents(kernel_set(&f).unwrap().presentation()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|p| is_mixing(p).unwrap()));
    }

    #[test]
    fn sofic_preinjectivity_counterexample() {
        use crate::analysis::structure::constituents;
        // (0*(1 0* 2 + 3 0* 4))*
        let x = graph(5, 3, &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 2, 0), (0, 3, 2), (2, 0, 2), (2, 4, 0)]);
        let f = BlockMap::new(&x, &full(5), 0, 0, |w| if w[0] == 3 { 1 } else { w[0] }).unwrap();
        let k = kernel_set(&f).unwrap();
        let c = constituents(k.presentation()).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].same_shift(SubshiftRelation::diagonal(&x).presentation()));
        let v = is_preinjective(&f).unwrap();
        assert!(v.is_no());
        check_pair(&f, &v);
    }

    #[test]
    fn t3_example_injective_on_periodic_only() {
        // (0+ 2 1+ 2 + 0+ 3 1+ 3)*; 021 and 031 both map to 001
        let x = graph(
            4,
            6,
            &[(0, 0, 1), (1, 0, 1), (1, 2, 2), (2, 1, 3), (3, 1, 3), (3, 2, 0), (1, 3, 4), (4, 1, 5), (5, 1, 5), (5, 3, 0)],
        );
        let f = BlockMap::new(&x, &full(4), 1, 1, |w| match w {
            [0, 2, 1] | [0, 3, 1] => 0,
            _ => w[1],
        })
        .unwrap();
        let fam = injectivity_family(&f).unwrap();
        assert!(!fam.injective);
        assert!(fam.injective_on_periodic);
        assert!(is_preinjective(&f).unwrap().is_no());
    }
}
