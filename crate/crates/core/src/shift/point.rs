//! Periodic and eventually periodic points.

use crate::alphabet::{primitive_len, Alphabet, Sym, Word};

/// The point `x` with `x_i = w[(i + phase) mod |w|]`.
#[derive(Clone, Debug)]
pub struct PeriodicPoint {
    pub word: Word,
    pub phase: usize,
}

impl PeriodicPoint {
    pub fn new(word: Word) -> PeriodicPoint {
        assert!(!word.is_empty(), "a periodic point needs a nonempty word");
        PeriodicPoint { word, phase: 0 }
    }

    pub fn with_phase(word: Word, phase: usize) -> PeriodicPoint {
        let n = word.len();
        assert!(n > 0, "a periodic point needs a nonempty word");
        PeriodicPoint { word, phase: phase % n }
    }

    pub fn at(&self, i: i64) -> Sym {
        let n = self.word.len() as i64;
        self.word[(i + self.phase as i64).rem_euclid(n) as usize]
    }

    /// `x_{[0, n)}`.
    pub fn window(&self, start: i64, len: usize) -> Word {
        (0..len as i64).map(|j| self.at(start + j)).collect()
    }

    pub fn least_period(&self) -> usize {
        primitive_len(&self.word)
    }

    /// The word `x_{[0, p)}` for the least period `p`.
    pub fn canonical(&self) -> Word {
        self.window(0, self.least_period())
    }

    pub fn shift(&self) -> PeriodicPoint {
        PeriodicPoint::with_phase(self.word.clone(), self.phase + 1)
    }

    pub fn render(&self, a: &Alphabet) -> String {
        format!("∞({})∞", a.render(&self.canonical()))
    }
}

impl PartialEq for PeriodicPoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for PeriodicPoint {}

/// The point `∞u.wv∞`: `u` repeated to the left of the origin, then `w`
/// starting at the origin, then `v` repeated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodicPoint {
    pub left: Word,
    pub center: Word,
    pub right: Word,
}

impl EventuallyPeriodicPoint {
    pub fn new(left: Word, center: Word, right: Word) -> EventuallyPeriodicPoint {
        assert!(!left.is_empty() && !right.is_empty(), "tails must be nonempty");
        EventuallyPeriodicPoint { left, center, right }
    }

    pub fn at(&self, i: i64) -> Sym {
        let c = self.center.len() as i64;
        if i < 0 {
            let n = self.left.len() as i64;
            self.left[(i.rem_euclid(n)) as usize]
        } else if i < c {
            self.center[i as usize]
        } else {
            let n = self.right.len() as i64;
            self.right[((i - c) % n) as usize]
        }
    }

    pub fn window(&self, start: i64, len: usize) -> Word {
        (0..len as i64).map(|j| self.at(start + j)).collect()
    }

    pub fn render(&self, a: &Alphabet) -> String {
        format!("∞({}).{}({})∞", a.render(&self.left), a.render(&self.center), a.render(&self.right))
    }
}
