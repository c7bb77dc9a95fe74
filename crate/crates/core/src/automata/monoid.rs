//! Finite monoids, in particular transition monoids of minimal acceptors
//! (which are the syntactic monoids of their languages).

use std::collections::HashMap;

use super::dfa::Dfa;
use crate::alphabet::Sym;
use crate::error::{Error, Result};

pub type Elem = usize;

#[derive(Clone, Debug)]
enum Repr {
    Table(Vec<Vec<u32>>),
    Maps { elems: Vec<Vec<u32>>, index: HashMap<Vec<u32>, u32> },
}

#[derive(Clone, Debug)]
pub struct FiniteMonoid {
    repr: Repr,
    identity: Elem,
    zero: Option<Elem>,
    gens: Vec<Elem>,
}

impl FiniteMonoid {
    /// A monoid given by its multiplication table. Checks closure,
    /// associativity, and the identity.
    pub fn from_table(table: Vec<Vec<u32>>, identity: Elem) -> Result<FiniteMonoid> {
        let n = table.len();
        if identity >= n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::Invalid("malformed multiplication table".into()));
        }
        for a in 0..n {
            if table[identity][a] as usize != a || table[a][identity] as usize != a {
                return Err(Error::Invalid("identity law fails".into()));
            }
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b] as usize][c];
                    let r = table[a][table[b][c] as usize];
                    if l != r {
                        return Err(Error::Invalid("multiplication is not associative".into()));
                    }
                }
            }
        }
        let zero = (0..n).find(|&z| (0..n).all(|a| table[z][a] as usize == z && table[a][z] as usize == z));
        Ok(FiniteMonoid { repr: Repr::Table(table), identity, zero, gens: Vec::new() })
    }

    /// Transition monoid of `dfa` completed with a sink. Words act on the
    /// right: the element of `uv` sends `q` to `δ(δ(q,u),v)`.
    pub fn transition(dfa: &Dfa, budget: usize) -> Result<FiniteMonoid> {
        let n = dfa.n();
        let sink = n as u32;
        let k = dfa.k();
        let id: Vec<u32> = (0..=n as u32).collect();
        let gen_maps: Vec<Vec<u32>> = (0..k)
            .map(|a| {
                let mut m: Vec<u32> =
                    (0..n).map(|q| dfa.step(q, a as Sym).map_or(sink, |t| t as u32)).collect();
                m.push(sink);
                m
            })
            .collect();
        let mut elems = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut i = 0;
        while i < elems.len() {
            for g in &gen_maps {
                let prod: Vec<u32> = elems[i].iter().map(|&q| g[q as usize]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= budget {
                        return Err(Error::Budget { needed: elems.len() + 1, budget });
                    }
                    index.insert(prod.clone(), elems.len() as u32);
                    elems.push(prod);
                }
            }
            i += 1;
        }
        let gens = gen_maps.iter().map(|g| index[g] as usize).collect();
        let zero_map = vec![sink; n + 1];
        let zero = index.get(&zero_map).map(|&z| z as usize);
        Ok(FiniteMonoid { repr: Repr::Maps { elems, index }, identity: 0, zero, gens })
    }

    pub fn size(&self) -> usize {
        match &self.repr {
            Repr::Table(t) => t.len(),
            Repr::Maps { elems, .. } => elems.len(),
        }
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table(t) => t[a][b] as usize,
            Repr::Maps { elems, index } => {
                let (ea, eb) = (&elems[a], &elems[b]);
                let prod: Vec<u32> = ea.iter().map(|&q| eb[q as usize]).collect();
                index[&prod] as usize
            }
        }
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.mul(a, a) == a
    }

    /// The unique idempotent among the powers of `a`.
    pub fn idempotent_power(&self, a: Elem) -> Elem {
        // the powers of a enter a cycle which contains exactly one idempotent
        let mut p = a;
        for _ in 0..=self.size() {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, a);
        }
        unreachable!("finite monoids have idempotent powers")
    }

    pub fn power(&self, a: Elem, n: usize) -> Elem {
        (0..n).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// Class of a word; only available on transition monoids.
    pub fn class_of(&self, w: &[Sym]) -> Elem {
        assert!(!self.gens.is_empty() || w.is_empty(), "monoid has no generators");
        w.iter().fold(self.identity, |acc, &s| self.mul(acc, self.gens[s as usize]))
    }

    pub fn generator(&self, s: Sym) -> Elem {
        self.gens[s as usize]
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    /// First interval `[i1, i2)` (in lexicographic order) whose product is
    /// idempotent.
    pub fn find_idempotent_factor(&self, seq: &[Elem]) -> Option<(usize, usize)> {
        for i1 in 0..seq.len() {
            let mut p = self.identity;
            for i2 in i1 + 1..=seq.len() {
                p = self.mul(p, seq[i2 - 1]);
                if self.is_idempotent(p) {
                    return Some((i1, i2));
                }
            }
        }
        None
    }

    /// `w` is pumpable when `(w^t) = (w)` for every `t ≥ 1`, and likewise for
    /// an optional second homomorphism given by its monoid and the image of
    /// `w`. Both reduce to idempotency.
    pub fn is_pumpable(&self, w: &[Sym], h: Option<(&FiniteMonoid, Elem)>) -> Result<bool> {
        let c = self.class_of(w);
        if Some(c) == self.zero && !w.is_empty() {
            return Err(Error::Invalid("word is not in the language".into()));
        }
        Ok(self.is_idempotent(c) && h.map_or(true, |(m, e)| m.is_idempotent(e)))
    }

    /// Full multiplication table (for small monoids).
    pub fn table(&self) -> Vec<Vec<u32>> {
        let n = self.size();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b) as u32).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteMonoid {
        FiniteMonoid::from_table(vec![vec![0, 1], vec![1, 0]], 0).unwrap()
    }

    #[test]
    fn idempotent_factor_examples() {
        let m = z2();
        assert_eq!(m.find_idempotent_factor(&[0, 0, 0]), Some((0, 1)));
        assert_eq!(m.find_idempotent_factor(&[1, 1]), Some((0, 2)));
        assert_eq!(m.find_idempotent_factor(&[1]), None);
    }

    #[test]
    fn rejects_nonassociative_table() {
        // a·a = e, a·e = a, e·a = e breaks the identity law
        assert!(FiniteMonoid::from_table(vec![vec![0, 1], vec![0, 0]], 0).is_err());
    }

    #[test]
    fn idempotent_power_in_cyclic_group() {
        let m = z2();
        assert_eq!(m.idempotent_power(1), 0);
    }
}
