//! Three-valued outcomes with evidence.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Verified,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Conjunction: refuted dominates, then inconclusive.
    pub fn and(self, o: Status) -> Status {
        match (self, o) {
            (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Verified,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status) -> Verdict {
        Verdict { status, evidence: Vec::new() }
    }

    pub fn with(status: Status, note: impl Into<String>) -> Verdict {
        Verdict { status, evidence: vec![note.into()] }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.evidence.push(s.into());
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_table() {
        use Status::*;
        assert_eq!(Verified.and(Verified), Verified);
        assert_eq!(Verified.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Refuted), Refuted);
    }
}
