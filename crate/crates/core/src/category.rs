//! The twelve categories `(K/T/M/P) × (1/2/3)` and their legality rules.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{has_positive_entropy, is_mixing, is_sft, is_transitive};
use crate::error::{Error, Result};
use crate::shift::{BlockMap, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Restriction {
    /// No restriction.
    K,
    /// Transitive objects.
    T,
    /// Mixing objects.
    M,
    /// Mixing objects with a designated uniform point, preserved by maps.
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CategoryTag {
    pub restriction: Restriction,
    /// 1: positive-entropy SFTs and cellular automata; 2: SFTs; 3: sofic.
    pub level: u8,
}

impl CategoryTag {
    pub const ALL: [&'static str; 12] = ["K1", "K2", "K3", "T1", "T2", "T3", "M1", "M2", "M3", "P1", "P2", "P3"];

    pub fn new(restriction: Restriction, level: u8) -> CategoryTag {
        assert!((1..=3).contains(&level), "levels are 1, 2, 3");
        CategoryTag { restriction, level }
    }

    pub fn all() -> Vec<CategoryTag> {
        CategoryTag::ALL.iter().map(|s| s.parse().unwrap()).collect()
    }

    pub fn is(&self, r: Restriction, level: u8) -> bool {
        self.restriction == r && self.level == level
    }

    pub fn pointed(&self) -> bool {
        self.restriction == Restriction::P
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Category { cat: self.to_string(), msg: msg.into() }
    }

    /// Checks that `x` is an object of the category.
    pub fn check_object(&self, x: &Presentation) -> Result<()> {
        if self.level <= 2 && !is_sft(x).is_yes() {
            return Err(self.err("object is not of finite type"));
        }
        // positive entropy is waived in K1, whose standard example has none
        if self.level == 1 && self.restriction != Restriction::K && !has_positive_entropy(x) {
            return Err(self.err("object has zero entropy"));
        }
        match self.restriction {
            Restriction::K => {}
            Restriction::T => {
                if !is_transitive(x)? {
                    return Err(self.err("object is not transitive"));
                }
            }
            Restriction::M | Restriction::P => {
                if !is_mixing(x)? {
                    return Err(self.err("object is not mixing"));
                }
            }
        }
        if self.pointed() {
            match x.point() {
                None => return Err(self.err("object has no designated uniform point")),
                Some(p) if !x.contains_periodic(&[p]) => return Err(self.err("designated point is not in the object")),
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// Checks that `f` is a morphism of the category.
    pub fn check_morphism(&self, f: &BlockMap) -> Result<()> {
        self.check_object(f.source())?;
        self.check_object(f.target())?;
        if self.level == 1 && !f.is_endomorphism() {
            return Err(self.err("morphisms of level 1 are cellular automata"));
        }
        if self.pointed() && !f.preserves_point()? {
            return Err(self.err("map does not preserve the designated points"));
        }
        Ok(())
    }
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.restriction {
            Restriction::K => 'K',
            Restriction::T => 'T',
            Restriction::M => 'M',
            Restriction::P => 'P',
        };
        write!(f, "{r}{}", self.level)
    }
}

impl FromStr for CategoryTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<CategoryTag> {
        let bad = || Error::Invalid(format!("unknown category '{s}'"));
        let mut ch = s.trim().chars();
        let restriction = match ch.next().map(|c| c.to_ascii_uppercase()) {
            Some('K') => Restriction::K,
            Some('T') => Restriction::T,
            Some('M') => Restriction::M,
            Some('P') => Restriction::P,
            _ => return Err(bad()),
        };
        let level = match (ch.next(), ch.next()) {
            (Some(d @ '1'..='3'), None) => d as u8 - b'0',
            _ => return Err(bad()),
        };
        Ok(CategoryTag { restriction, level })
    }
}
