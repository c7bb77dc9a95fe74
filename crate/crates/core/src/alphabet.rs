//! Alphabets of named symbols and words over them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

/// A symbol is an index into its alphabet.
pub type Sym = u32;
/// Words are plain symbol vectors; the alphabet is carried separately.
pub type Word = Vec<Sym>;

struct Inner {
    names: Vec<String>,
    index: HashMap<String, Sym>,
    compact: bool,
}

/// Ordered finite set of symbol names.
///
/// When every name is a single character, words render as plain strings
/// (`0110`); otherwise symbols are joined with `.`.
#[derive(Clone)]
pub struct Alphabet(Arc<Inner>);

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet> {
        let mut index = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == '.') {
                return invalid(format!("bad symbol name {n:?}"));
            }
            if index.insert(n.to_string(), i as Sym).is_some() {
                return invalid(format!("duplicate symbol {n:?}"));
            }
            owned.push(n.to_string());
        }
        let compact = owned.iter().all(|n| n.chars().count() == 1);
        Ok(Alphabet(Arc::new(Inner { names: owned, index, compact })))
    }

    /// Alphabet `{0, 1, ..., k-1}` with decimal names.
    pub fn numeric(k: usize) -> Alphabet {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        Alphabet::new(&names).expect("numeric names are valid")
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.0.names[s as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index(&self, name: &str) -> Option<Sym> {
        self.0.index.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.len() as Sym
    }

    pub fn render(&self, w: &[Sym]) -> String {
        let sep = if self.0.compact { "" } else { "." };
        w.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let bad = |t: &str| Error::Invalid(format!("unknown symbol {t:?}"));
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if self.0.compact {
            text.chars()
                .map(|c| {
                    let t = c.to_string();
                    self.index(&t).ok_or_else(|| bad(&t))
                })
                .collect()
        } else {
            text.split('.').map(|t| self.index(t).ok_or_else(|| bad(t))).collect()
        }
    }

    /// Pair alphabet with symbol `(a,b)` at index `a * |b| + b`.
    pub fn product(a: &Alphabet, b: &Alphabet) -> Alphabet {
        let mut names = Vec::with_capacity(a.len() * b.len());
        for x in a.names() {
            for y in b.names() {
                names.push(format!("({x},{y})"));
            }
        }
        Alphabet::new(&names).expect("pair names are distinct")
    }

    pub fn pair(&self, right: &Alphabet, a: Sym, b: Sym) -> Sym {
        a * right.len() as Sym + b
    }

    pub fn ptr_eq(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.0.names == other.0.names
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.0.names)
    }
}

/// All words of length `n` over `k` symbols in lexicographic order.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for w in &out {
            for s in 0..k as Sym {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Least period of a cyclic word (the length of its primitive root).
pub fn primitive_len(w: &[Sym]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (0..n).all(|i| w[i] == w[(i + d) % n]))
        .unwrap_or(0)
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
