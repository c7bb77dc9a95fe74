//! Edge-labeled directed graphs: trimming, strongly connected components, periods.

use std::collections::VecDeque;

use crate::alphabet::{gcd, Sym};

/// Directed multigraph with symbol-labeled edges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    out: Vec<Vec<(Sym, u32)>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { out: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, sym: Sym, to: usize) {
        self.out[from].push((sym, to as u32));
    }

    pub fn out(&self, v: usize) -> &[(Sym, u32)] {
        &self.out[v]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Sym, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, es)| es.iter().map(move |&(s, v)| (u, s, v as usize)))
    }

    pub fn reverse(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, s, v) in self.edges() {
            g.add_edge(v, s, u);
        }
        g
    }

    pub fn is_deterministic(&self) -> bool {
        self.out.iter().all(|es| {
            let mut syms: Vec<Sym> = es.iter().map(|e| e.0).collect();
            syms.sort_unstable();
            syms.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Induced subgraph on `keep`; returns it with the old-to-new index map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n()];
        let mut m = 0;
        for v in 0..self.n() {
            if keep[v] {
                map[v] = Some(m);
                m += 1;
            }
        }
        let mut g = Graph::new(m);
        for (u, s, v) in self.edges() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.add_edge(a, s, b);
            }
        }
        (g, map)
    }

    /// Vertices lying on some bi-infinite path.
    pub fn essential_mask(&self) -> Vec<bool> {
        let n = self.n();
        let mut alive = vec![true; n];
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        let rev = self.reverse();
        for (u, _, v) in self.edges() {
            outdeg[u] += 1;
            indeg[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(_, w) in self.out(v) {
                let w = w as usize;
                if alive[w] {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push_back(w);
                    }
                }
            }
            for &(_, w) in rev.out(v) {
                let w = w as usize;
                if alive[w] {
                    outdeg[w] -= 1;
                    if outdeg[w] == 0 {
                        queue.push_back(w);
                    }
                }
            }
        }
        alive
    }

    pub fn essential(&self) -> (Graph, Vec<Option<usize>>) {
        self.induced(&self.essential_mask())
    }

    /// Strongly connected components (Tarjan, iterative). Returns the
    /// component of each vertex and the number of components; components are
    /// numbered in reverse topological order.
    pub fn sccs(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut ncomp = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < self.out[v].len() {
                    let w = self.out[v][*i].1 as usize;
                    *i += 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        (comp, ncomp)
    }

    /// Components that carry at least one edge (hence a cycle).
    pub fn nontrivial_sccs(&self) -> Vec<Vec<usize>> {
        let (comp, k) = self.sccs();
        let mut has_edge = vec![false; k];
        for (u, _, v) in self.edges() {
            if comp[u] == comp[v] {
                has_edge[comp[u]] = true;
            }
        }
        let mut members = vec![Vec::new(); k];
        for v in 0..self.n() {
            members[comp[v]].push(v);
        }
        members
            .into_iter()
            .enumerate()
            .filter(|(c, _)| has_edge[*c])
            .map(|(_, m)| m)
            .collect()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n() > 0 && self.sccs().1 == 1
    }

    /// Period (gcd of cycle lengths) of a strongly connected graph; 0 for a
    /// graph without edges.
    pub fn period(&self) -> usize {
        if self.n() == 0 {
            return 0;
        }
        let mut level = vec![usize::MAX; self.n()];
        level[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(_, v) in self.out(u) {
                let v = v as usize;
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0;
        for (u, _, v) in self.edges() {
            if level[u] != usize::MAX && level[v] != usize::MAX {
                let d = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, d);
            }
        }
        g
    }

    /// Vertices reachable from `starts` (including them).
    pub fn reachable(&self, starts: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut stack: Vec<usize> = Vec::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &(_, v) in self.out(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v as usize);
                }
            }
        }
        seen
    }
}
