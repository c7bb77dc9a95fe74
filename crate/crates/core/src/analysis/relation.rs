//! Subshift relations `R ⊆ X × Y`, kernel sets, and equalizer sets.

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automata::Graph;
use crate::error::{mismatch, Result};
use crate::shift::{BlockMap, PeriodicPoint, Presentation, WindowGraph};

/// A subshift of `X × Y` presented over the pair alphabet.
#[derive(Clone, Debug)]
pub struct SubshiftRelation {
    pres: Presentation,
    left: Presentation,
    right: Presentation,
}

impl SubshiftRelation {
    /// Wraps a presentation over `alphabet(X) × alphabet(Y)`; checks it lies
    /// in `X × Y`.
    pub fn new(pres: Presentation, left: &Presentation, right: &Presentation) -> Result<SubshiftRelation> {
        let pa = Alphabet::product(left.alphabet(), right.alphabet());
        if *pres.alphabet() != pa {
            return mismatch("relation is not over the pair alphabet");
        }
        let r = SubshiftRelation { pres, left: left.clone(), right: right.clone() };
        let full = SubshiftRelation::product(left, right)?;
        if !r.pres.is_subshift_of(&full.pres)? {
            return mismatch("relation is not contained in the product");
        }
        Ok(r)
    }

    fn raw(pres: Presentation, left: &Presentation, right: &Presentation) -> SubshiftRelation {
        SubshiftRelation { pres, left: left.clone(), right: right.clone() }
    }

    /// `X × Y`.
    pub fn product(left: &Presentation, right: &Presentation) -> Result<SubshiftRelation> {
        SubshiftRelation::from_window_pairs(left, right, 1, |_, _| true)
    }

    /// The pairs `(x, y) ∈ X × Y` all of whose aligned length-`n` windows
    /// satisfy `allowed`.
    pub fn from_window_pairs(
        left: &Presentation,
        right: &Presentation,
        n: usize,
        allowed: impl Fn(&Word, &Word) -> bool,
    ) -> Result<SubshiftRelation> {
        let pa = Alphabet::product(left.alphabet(), right.alphabet());
        let k = right.alphabet().len() as Sym;
        let wl = WindowGraph::new(left, n)?;
        let wr = WindowGraph::new(right, n)?;
        let g = wl.product(&wr, |u, v| allowed(u, v).then(|| u[n - 1] * k + v[n - 1]));
        Ok(SubshiftRelation::raw(Presentation::from_graph(&pa, &g), left, right))
    }

    /// `Δ_X`.
    pub fn diagonal(x: &Presentation) -> SubshiftRelation {
        let pa = Alphabet::product(x.alphabet(), x.alphabet());
        let k = x.alphabet().len() as Sym;
        let cover = x.cover();
        let mut g = Graph::new(cover.n());
        for (u, s, v) in cover.edges() {
            g.add_edge(u, s * k + s, v);
        }
        SubshiftRelation::raw(Presentation::from_graph(&pa, &g), x, x)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn left(&self) -> &Presentation {
        &self.left
    }

    pub fn right(&self) -> &Presentation {
        &self.right
    }

    pub fn pair(&self, a: Sym, b: Sym) -> Sym {
        a * self.right.alphabet().len() as Sym + b
    }

    pub fn split(&self, s: Sym) -> (Sym, Sym) {
        let k = self.right.alphabet().len() as Sym;
        (s / k, s % k)
    }

    pub fn is_diagonal_symbol(&self, s: Sym) -> bool {
        let (a, b) = self.split(s);
        a == b
    }

    /// Pair word from two words of equal length.
    pub fn zip(&self, u: &[Sym], v: &[Sym]) -> Word {
        u.iter().zip(v).map(|(&a, &b)| self.pair(a, b)).collect()
    }

    pub fn unzip(&self, w: &[Sym]) -> (Word, Word) {
        w.iter().map(|&s| self.split(s)).unzip()
    }

    pub fn contains_periodic_pair(&self, u: &[Sym], v: &[Sym]) -> bool {
        u.len() == v.len() && self.pres.contains_periodic(&self.zip(u, v))
    }

    /// Relation with the coordinates exchanged.
    pub fn swapped(&self) -> SubshiftRelation {
        let pa = Alphabet::product(self.right.alphabet(), self.left.alphabet());
        let kl = self.left.alphabet().len() as Sym;
        let mut g = Graph::new(self.pres.cover().n());
        for (u, s, v) in self.pres.cover().edges() {
            let (a, b) = self.split(s);
            g.add_edge(u, b * kl + a, v);
        }
        SubshiftRelation::raw(Presentation::from_graph(&pa, &g), &self.right, &self.left)
    }

    pub fn same_relation(&self, other: &SubshiftRelation) -> bool {
        self.pres.same_shift(&other.pres)
    }

    pub fn is_subrelation_of(&self, other: &SubshiftRelation) -> Result<bool> {
        self.pres.is_subshift_of(&other.pres)
    }

    /// `R ⊆ Δ`.
    pub fn is_within_diagonal(&self) -> bool {
        self.pres.cover().edges().all(|(_, s, _)| self.is_diagonal_symbol(s))
    }

    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.left.same_shift(&self.right) {
            return Ok(false);
        }
        SubshiftRelation::diagonal(&self.left).pres.is_subshift_of(&self.pres)
    }

    pub fn is_symmetric(&self) -> bool {
        self.left.same_shift(&self.right) && self.swapped().pres.same_shift(&self.pres)
    }

    /// Looks for `(x,y), (y,z) ∈ R` with `(x,z) ∉ R` among points of period
    /// dividing `n ≤ max_period`.
    pub fn transitivity_failure(&self, max_period: usize) -> Result<Option<[PeriodicPoint; 3]>> {
        for n in 1..=max_period {
            let words = self.pres.periodic_words(n)?;
            let pairs: Vec<(Word, Word)> = words.iter().map(|w| self.unzip(w)).collect();
            let set: std::collections::HashSet<&(Word, Word)> = pairs.iter().collect();
            for (x, y) in &pairs {
                for (y2, z) in &pairs {
                    if y == y2 && !set.contains(&(x.clone(), z.clone())) {
                        return Ok(Some([
                            PeriodicPoint::new(x.clone()),
                            PeriodicPoint::new(y.clone()),
                            PeriodicPoint::new(z.clone()),
                        ]));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Left and right coordinate projections.
    pub fn projections(&self) -> Result<(BlockMap, BlockMap)> {
        let k = self.right.alphabet().len() as Sym;
        let p1 = BlockMap::unchecked(&self.pres, &self.left, 0, 0, |w| w[0] / k)?;
        let p2 = BlockMap::unchecked(&self.pres, &self.right, 0, 0, |w| w[0] % k)?;
        Ok((p1, p2))
    }
}

/// `Ker f = {(x, x') : f(x) = f(x')}`.
pub fn kernel_set(f: &BlockMap) -> Result<SubshiftRelation> {
    SubshiftRelation::from_window_pairs(f.source(), f.source(), f.width(), |u, v| f.rule(u) == f.rule(v))
}

/// `{x : f(x) = g(x)}`.
pub fn equalizer_set(f: &BlockMap, g: &BlockMap) -> Result<Presentation> {
    if !f.source().same_shift(g.source()) || !f.target().same_shift(g.target()) {
        return mismatch("equalizer of maps that are not parallel");
    }
    let m = f.memory().max(g.memory());
    let a = f.anticipation().max(g.anticipation());
    let (fp, gp) = (f.padded(m, a)?, g.padded(m, a)?);
    let n = fp.width();
    let wg = WindowGraph::new(f.source(), n)?;
    let mut out = Graph::new(wg.graph.n());
    for (u, id, v) in wg.graph.edges() {
        let w = &wg.windows[id as usize];
        if fp.rule(w) == gp.rule(w) {
            out.add_edge(u, w[n - 1], v);
        }
    }
    Ok(Presentation::from_graph(f.source().alphabet(), &out))
}

/// `{(x, y) : f(x) = g(y)}` for `f: X → Z`, `g: Y → Z`.
pub fn fiber_product(f: &BlockMap, g: &BlockMap) -> Result<SubshiftRelation> {
    if !f.target().same_shift(g.target()) {
        return mismatch("fiber product of maps with different targets");
    }
    let m = f.memory().max(g.memory());
    let a = f.anticipation().max(g.anticipation());
    let (fp, gp) = (f.padded(m, a)?, g.padded(m, a)?);
    SubshiftRelation::from_window_pairs(f.source(), g.source(), fp.width(), |u, v| fp.rule(u) == gp.rule(v))
}
