//! Three-valued answers with the evidence behind them.

use std::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::classify::strong::StrongFailure;
use crate::shift::{BlockMap, EventuallyPeriodicPoint, PeriodicPoint, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Undecided,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Undecided => "UNDECIDED",
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn is_no(self) -> bool {
        self == Answer::No
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite data certifying or refuting a claim.
#[derive(Clone, Debug)]
pub enum Evidence {
    Map(BlockMap),
    Object(Presentation),
    Window(usize),
    Period(usize),
    Word(Alphabet, Word),
    /// Every word `prefix · cycle^k` has the property in question.
    Pumping { alphabet: Alphabet, prefix: Word, cycle: Word },
    PeriodicPair(Alphabet, PeriodicPoint, PeriodicPoint),
    AsymptoticPair(Alphabet, EventuallyPeriodicPoint, EventuallyPeriodicPoint),
    Periodic(Alphabet, PeriodicPoint),
    Strong(Box<StrongFailure>),
    Text(String),
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Map(_) => "map",
            Evidence::Object(_) => "object",
            Evidence::Window(_) => "window",
            Evidence::Period(_) => "period",
            Evidence::Word(..) => "word",
            Evidence::Pumping { .. } => "pumping",
            Evidence::PeriodicPair(..) => "periodic-pair",
            Evidence::AsymptoticPair(..) => "asymptotic-pair",
            Evidence::Periodic(..) => "periodic-point",
            Evidence::Strong(_) => "strong-condition",
            Evidence::Text(_) => "text",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Evidence::Map(f) => format!("block map with window [-{}, {}]", f.memory(), f.anticipation()),
            Evidence::Object(x) => format!("subshift with {} cover states", x.cover().n()),
            Evidence::Window(m) => format!("window {m}"),
            Evidence::Period(n) => format!("period {n}"),
            Evidence::Word(a, w) => a.render(w),
            Evidence::Pumping { alphabet, prefix, cycle } => {
                format!("{}({})^k", alphabet.render(prefix), alphabet.render(cycle))
            }
            Evidence::PeriodicPair(a, x, y) => format!("{} ~ {}", x.render(a), y.render(a)),
            Evidence::AsymptoticPair(a, x, y) => format!("{} ~ {}", x.render(a), y.render(a)),
            Evidence::Periodic(a, x) => x.render(a),
            Evidence::Strong(s) => s.describe(),
            Evidence::Text(t) => t.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub certificate: Option<Evidence>,
    pub witness: Option<Evidence>,
    pub bound_used: Option<String>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(answer: Answer) -> Verdict {
        Verdict { answer, certificate: None, witness: None, bound_used: None, note: None }
    }

    pub fn yes() -> Verdict {
        Verdict::new(Answer::Yes)
    }

    pub fn no() -> Verdict {
        Verdict::new(Answer::No)
    }

    pub fn undecided() -> Verdict {
        Verdict::new(Answer::Undecided)
    }

    pub fn from_bool(b: bool) -> Verdict {
        Verdict::new(Answer::from_bool(b))
    }

    pub fn certificate(mut self, e: Evidence) -> Verdict {
        self.certificate = Some(e);
        self
    }

    pub fn witness(mut self, e: Evidence) -> Verdict {
        self.witness = Some(e);
        self
    }

    pub fn bound(mut self, b: impl Into<String>) -> Verdict {
        self.bound_used = Some(b.into());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Verdict {
        self.note = Some(n.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.answer.is_yes()
    }

    pub fn is_no(&self) -> bool {
        self.answer.is_no()
    }

    pub fn map_certificate(&self) -> Option<&BlockMap> {
        match &self.certificate {
            Some(Evidence::Map(f)) => Some(f),
            _ => None,
        }
    }
}

/// Caps for bounded searches. Every UNDECIDED verdict reports the caps it
/// ran into.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Largest period tried in the strong periodic point condition.
    pub p_cap: usize,
    /// Largest radius tried when searching sections, retractions, inverses.
    pub radius_cap: usize,
    /// Largest window tried for local equivalences and subSFT searches.
    pub window_cap: usize,
    /// Largest level tried for chain transitivity.
    pub level_cap: usize,
    /// Largest number of compositions tried for eventual periodicity.
    pub iter_cap: usize,
    /// Cap on the size of a single enumeration.
    pub budget: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { p_cap: 6, radius_cap: 3, window_cap: 6, level_cap: 4, iter_cap: 16, budget: crate::DEFAULT_BUDGET }
    }
}
