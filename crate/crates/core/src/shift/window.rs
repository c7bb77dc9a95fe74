//! Higher-block graphs: paths whose edges carry the length-`n` window ending
//! at their position.

use std::collections::HashMap;

use super::presentation::Presentation;
use crate::alphabet::{Sym, Word};
use crate::automata::Graph;
use crate::error::{Error, Result};
use crate::DEFAULT_BUDGET;

#[derive(Clone, Debug)]
pub struct WindowGraph {
    /// Edge labels are indices into `windows`.
    pub graph: Graph,
    pub windows: Vec<Word>,
    pub len: usize,
}

impl WindowGraph {
    /// Window graph of `x` for windows of length `n ≥ 1`. Its bi-infinite
    /// paths correspond to the points of `x`, the edge at position `i`
    /// carrying `x_{[i-n+1, i]}`.
    pub fn new(x: &Presentation, n: usize) -> Result<WindowGraph> {
        assert!(n >= 1, "windows have positive length");
        let cover = x.cover();
        let mut states: Vec<(usize, Word)> = (0..cover.n()).map(|q| (q, Vec::new())).collect();
        for _ in 0..n - 1 {
            let mut next = Vec::new();
            for (q, w) in &states {
                for &(a, t) in cover.out(*q) {
                    let mut v = w.clone();
                    v.push(a);
                    next.push((t as usize, v));
                }
            }
            if next.len() > DEFAULT_BUDGET {
                return Err(Error::Budget { needed: next.len(), budget: DEFAULT_BUDGET });
            }
            states = next;
        }
        states.sort();
        states.dedup();
        let index: HashMap<(usize, Word), usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut graph = Graph::new(states.len());
        let mut windows = Vec::new();
        let mut wid: HashMap<Word, u32> = HashMap::new();
        for (i, (q, w)) in states.iter().enumerate() {
            for &(a, t) in cover.out(*q) {
                let mut full = w.clone();
                full.push(a);
                let next_key = (t as usize, full[1..].to_vec());
                let j = index[&next_key];
                let next_id = wid.len() as u32;
                let id = *wid.entry(full.clone()).or_insert_with(|| {
                    windows.push(full.clone());
                    next_id
                });
                graph.add_edge(i, id, j);
            }
        }
        Ok(WindowGraph { graph, windows, len: n })
    }

    /// The same graph relabeled edge by edge.
    pub fn relabel(&self, f: impl Fn(&Word) -> Sym) -> Graph {
        let labels: Vec<Sym> = self.windows.iter().map(&f).collect();
        let mut g = Graph::new(self.graph.n());
        for (u, id, v) in self.graph.edges() {
            g.add_edge(u, labels[id as usize], v);
        }
        g
    }

    /// Product of two window graphs of the same length, keeping edge pairs
    /// for which `label` returns a symbol.
    pub fn product(&self, other: &WindowGraph, label: impl Fn(&Word, &Word) -> Option<Sym>) -> Graph {
        let nb = other.graph.n();
        let mut g = Graph::new(self.graph.n() * nb);
        let mut cache: HashMap<(u32, u32), Option<Sym>> = HashMap::new();
        for (u, s, u2) in self.graph.edges() {
            for v in 0..nb {
                for &(t, v2) in other.graph.out(v) {
                    let l = *cache
                        .entry((s, t))
                        .or_insert_with(|| label(&self.windows[s as usize], &other.windows[t as usize]));
                    if let Some(l) = l {
                        g.add_edge(u * nb + v, l, u2 * nb + v2 as usize);
                    }
                }
            }
        }
        g
    }
}
