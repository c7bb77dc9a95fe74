//! Period sets `Per(X) = {n ≥ 1 : σⁿx = x for some x ∈ X}`.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::shift::{BlockMap, PeriodicPoint, Presentation};
use crate::verdict::{Evidence, Verdict};

/// An ultimately periodic subset of the positive integers: membership is
/// listed for `n < threshold + modulus` and repeats with period `modulus`
/// from `threshold` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSet {
    table: Vec<bool>,
    threshold: usize,
    modulus: usize,
}

impl PeriodSet {
    pub fn contains(&self, n: usize) -> bool {
        if n == 0 {
            return false;
        }
        if n < self.table.len() {
            return self.table[n];
        }
        let r = (n - self.threshold) % self.modulus;
        self.table[self.threshold + r]
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Members up to `n`.
    pub fn up_to(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&m| self.contains(m)).collect()
    }

    /// Residues modulo `modulus` that are members beyond the threshold.
    pub fn residues(&self) -> Vec<usize> {
        (self.threshold..self.threshold + self.modulus).filter(|&n| self.table[n]).map(|n| n % self.modulus).collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        !(1..self.threshold + self.modulus).any(|n| self.contains(n))
    }

    /// Least `n ∈ self \ other`.
    pub fn first_outside(&self, other: &PeriodSet) -> Option<usize> {
        let bound = self.threshold.max(other.threshold) + lcm(self.modulus, other.modulus);
        (1..=bound).find(|&n| self.contains(n) && !other.contains(n))
    }

    pub fn is_subset_of(&self, other: &PeriodSet) -> bool {
        self.first_outside(other).is_none()
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / crate::alphabet::gcd(a, b) * b
}

/// `Per(X)`. A length-`n` word `w` gives a point `∞w∞` iff the idempotent
/// power of its class in the syntactic monoid is not the zero, so the set
/// follows the sequence `L_n` of classes of length-`n` words, which is
/// ultimately periodic.
pub fn periods(x: &Presentation) -> Result<PeriodSet> {
    let m = x.syntactic_monoid()?;
    let good: Vec<bool> = (0..m.size()).map(|e| Some(m.idempotent_power(e)) != m.zero()).collect();
    let gens: Vec<usize> = m.generators().to_vec();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    // table[0] records L_0 = {identity} and is never reported as a period
    let mut table = Vec::new();
    let mut cur: Vec<usize> = vec![m.identity()];
    let mut n = 0;
    loop {
        if let Some(&first) = seen.get(&cur) {
            // L_n = L_first: membership repeats with period n - first
            let threshold = first.max(1);
            let modulus = n - first;
            while table.len() < threshold + modulus {
                let k = table.len();
                let r = (k - first) % modulus;
                table.push(table[first + r]);
            }
            return Ok(PeriodSet { table, threshold, modulus });
        }
        seen.insert(cur.clone(), n);
        table.push(cur.iter().any(|&e| good[e]));
        let mut next: Vec<usize> = cur.iter().flat_map(|&e| gens.iter().map(move |&g| (e, g))).map(|(e, g)| m.mul(e, g)).collect();
        next.sort_unstable();
        next.dedup();
        cur = next;
        n += 1;
    }
}

/// `X ◁ Y`, read as `Per(X) ⊆ Per(Y)`.
pub fn period_inclusion(x: &Presentation, y: &Presentation) -> Result<Verdict> {
    let (px, py) = (periods(x)?, periods(y)?);
    Ok(match px.first_outside(&py) {
        None => Verdict::yes().note(format!(
            "periods of the source repeat mod {} from {}; target mod {} from {}",
            px.modulus, px.threshold, py.modulus, py.threshold
        )),
        Some(n) => {
            let w = x.periodic_words(n)?.into_iter().next().expect("n is a period of the source");
            Verdict::no()
                .witness(Evidence::Periodic(x.alphabet().clone(), PeriodicPoint::new(w)))
                .note(format!("period {n} occurs in the source but not in the target"))
        }
    })
}

/// A map `f : X → Y` is peric when `Per(Y) ⊆ Per(X)`, the period condition
/// for a map back from `Y` to `X`. The other inclusion holds for every map.
pub fn is_peric(f: &BlockMap) -> Result<Verdict> {
    period_inclusion(f.target(), f.source())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::Graph;

    fn graph(k: usize, n: usize, edges: &[(usize, u32, usize)]) -> Presentation {
        let mut g = Graph::new(n);
        for &(u, s, v) in edges {
            g.add_edge(u, s, v);
        }
        Presentation::from_graph(&Alphabet::numeric(k), &g)
    }

    fn brute(x: &Presentation, n: usize) -> bool {
        !x.periodic_words(n).unwrap().is_empty()
    }

    #[test]
    fn full_shift_has_every_period() {
        let p = periods(&Presentation::full(&Alphabet::numeric(2))).unwrap();
        assert!((1..40).all(|n| p.contains(n)));
    }

    #[test]
    fn orbit_has_even_periods() {
        let o = graph(2, 2, &[(0, 0, 1), (1, 1, 0)]);
        let p = periods(&o).unwrap();
        assert_eq!(p.up_to(10), vec![2, 4, 6, 8, 10]);
        assert_eq!(p.residues(), vec![0]);
        assert_eq!(p.modulus(), 2);
    }

    #[test]
    fn empty_has_no_periods() {
        let p = periods(&Presentation::empty(&Alphabet::numeric(2))).unwrap();
        assert!(p.is_empty());
        assert!(p.up_to(20).is_empty());
    }

    #[test]
    fn agrees_with_enumeration() {
        let shifts = [
            graph(3, 3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0), (0, 0, 0)]),
            graph(2, 5, &[(0, 0, 1), (1, 0, 2), (2, 0, 0), (3, 1, 4), (4, 1, 3)]),
            Presentation::from_forbidden(&Alphabet::numeric(2), vec![vec![1, 1]]).unwrap(),
            graph(2, 3, &[(0, 0, 1), (1, 1, 0), (1, 0, 2), (2, 1, 0)]),
        ];
        for x in &shifts {
            let p = periods(x).unwrap();
            for n in 1..=10 {
                assert_eq!(p.contains(n), brute(x, n), "n = {n}");
            }
        }
    }

    #[test]
    fn peric_examples() {
        let full = Presentation::full(&Alphabet::numeric(2));
        let o = graph(2, 2, &[(0, 0, 1), (1, 1, 0)]);
        assert!(period_inclusion(&o, &full).unwrap().is_yes());
        let v = period_inclusion(&full, &o).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.witness, Some(Evidence::Periodic(_, ref p)) if p.word.len() == 1));
        let e = Presentation::empty(&Alphabet::numeric(2));
        assert!(period_inclusion(&e, &o).unwrap().is_yes());
    }
}
