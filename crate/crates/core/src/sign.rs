//! Bookkeeping for identities that are expected to hold up to one global sign.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "+1" } else { "-1" })
    }
}

/// The signs `ε` for which an identity `lhs = ε·rhs` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSet {
    pub plus: bool,
    pub minus: bool,
}

impl SignSet {
    pub const ALL: SignSet = SignSet { plus: true, minus: true };
    pub const NONE: SignSet = SignSet { plus: false, minus: false };

    pub fn only(s: Sign) -> SignSet {
        SignSet { plus: s == Sign::Plus, minus: s == Sign::Minus }
    }

    /// Tests both signs with `holds(ε)`.
    pub fn probe(mut holds: impl FnMut(i64) -> bool) -> SignSet {
        SignSet { plus: holds(1), minus: holds(-1) }
    }

    pub fn intersect(self, other: SignSet) -> SignSet {
        SignSet { plus: self.plus && other.plus, minus: self.minus && other.minus }
    }

    pub fn is_empty(self) -> bool {
        !self.plus && !self.minus
    }

    pub fn is_all(self) -> bool {
        self.plus && self.minus
    }

    pub fn unique(self) -> Option<Sign> {
        match (self.plus, self.minus) {
            (true, false) => Some(Sign::Plus),
            (false, true) => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum SignVerdict {
    /// every instance allowed both signs (all maps zero or characteristic 2)
    DegeneratePass,
    Pass { sign: Sign },
    /// one global sign exists but it is not the expected one
    Mismatch { expected: Sign, found: Sign },
    /// no single sign works for all instances
    Inconsistent,
}

/// Running intersection of allowed signs across instances.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SignTally {
    pub allowed: SignSet,
    pub instances: usize,
    pub determining_instances: usize,
    /// first instance index that excluded each sign
    pub excluded_plus_by: Option<usize>,
    pub excluded_minus_by: Option<usize>,
}

impl Default for SignTally {
    fn default() -> Self {
        SignTally { allowed: SignSet::ALL, instances: 0, determining_instances: 0, excluded_plus_by: None, excluded_minus_by: None }
    }
}

impl SignTally {
    pub fn record(&mut self, index: usize, s: SignSet) {
        self.instances += 1;
        if !s.is_all() {
            self.determining_instances += 1;
        }
        if !s.plus && self.excluded_plus_by.is_none() {
            self.excluded_plus_by = Some(index);
        }
        if !s.minus && self.excluded_minus_by.is_none() {
            self.excluded_minus_by = Some(index);
        }
        self.allowed = self.allowed.intersect(s);
    }

    pub fn merge(&mut self, other: &SignTally) {
        self.instances += other.instances;
        self.determining_instances += other.determining_instances;
        self.allowed = self.allowed.intersect(other.allowed);
        self.excluded_plus_by = match (self.excluded_plus_by, other.excluded_plus_by) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.excluded_minus_by = match (self.excluded_minus_by, other.excluded_minus_by) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }

    pub fn verdict(&self, expected: Sign) -> SignVerdict {
        if self.allowed.is_empty() {
            SignVerdict::Inconsistent
        } else if self.allowed.is_all() {
            SignVerdict::DegeneratePass
        } else {
            let found = self.allowed.unique().expect("exactly one sign");
            if found == expected {
                SignVerdict::Pass { sign: found }
            } else {
                SignVerdict::Mismatch { expected, found }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_intersects() {
        let mut t = SignTally::default();
        t.record(0, SignSet::ALL);
        assert_eq!(t.verdict(Sign::Plus), SignVerdict::DegeneratePass);
        t.record(1, SignSet::only(Sign::Minus));
        assert_eq!(t.verdict(Sign::Minus), SignVerdict::Pass { sign: Sign::Minus });
        assert_eq!(t.verdict(Sign::Plus), SignVerdict::Mismatch { expected: Sign::Plus, found: Sign::Minus });
        t.record(2, SignSet::only(Sign::Plus));
        assert_eq!(t.verdict(Sign::Plus), SignVerdict::Inconsistent);
        assert_eq!((t.excluded_plus_by, t.excluded_minus_by), (Some(1), Some(2)));
    }
}
