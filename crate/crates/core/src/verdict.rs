//! Structured outcomes of checking a statement against a concrete set.
//!
//! A verdict separates "hypotheses unmet" (`applicable = false`) from
//! "conclusion failed" (`applicable = true` with a check whose `holds` is
//! false). All numbers are exact rationals.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;

pub type Rational = Ratio<i64>;

/// Statements the engine knows how to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "thm-ball")]
    Ball,
    #[serde(rename = "thm-sztaab")]
    SzonyiBlokhuis,
    #[serde(rename = "thm-m")]
    DirectionBound,
    #[serde(rename = "rem-1mods")]
    OneModS,
    #[serde(rename = "prop-r")]
    RedeiStructure,
    #[serde(rename = "prop-es")]
    QuotientStructure,
    #[serde(rename = "prop-lin")]
    SpanStructure,
    #[serde(rename = "thm-egydim")]
    Extension,
    #[serde(rename = "lin-closure")]
    LinearClosure,
    #[serde(rename = "conj-1")]
    ConjectureSEqualsT,
    #[serde(rename = "conj-2")]
    ConjectureLinearity,
}

impl Statement {
    pub const ALL: [Statement; 11] = [
        Statement::Ball,
        Statement::SzonyiBlokhuis,
        Statement::DirectionBound,
        Statement::OneModS,
        Statement::RedeiStructure,
        Statement::QuotientStructure,
        Statement::SpanStructure,
        Statement::Extension,
        Statement::LinearClosure,
        Statement::ConjectureSEqualsT,
        Statement::ConjectureLinearity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::Ball => "thm-ball",
            Statement::SzonyiBlokhuis => "thm-sztaab",
            Statement::DirectionBound => "thm-m",
            Statement::OneModS => "rem-1mods",
            Statement::RedeiStructure => "prop-r",
            Statement::QuotientStructure => "prop-es",
            Statement::SpanStructure => "prop-lin",
            Statement::Extension => "thm-egydim",
            Statement::LinearClosure => "lin-closure",
            Statement::ConjectureSEqualsT => "conj-1",
            Statement::ConjectureLinearity => "conj-2",
        }
    }

    /// Conjectures may legitimately fail; everything else is a theorem.
    pub fn is_conjecture(self) -> bool {
        matches!(self, Statement::ConjectureSEqualsT | Statement::ConjectureLinearity)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown statement id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    fn eval<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// A compared quantity: an exact rational or a truth value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd)]
pub enum Quantity {
    Num(Rational),
    Bool(bool),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Num(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Quantity::Num(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Quantity::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Quantity,
    pub rel: Relation,
    pub rhs: Quantity,
    pub holds: bool,
}

impl Check {
    pub fn num(name: impl Into<String>, lhs: Rational, rel: Relation, rhs: Rational) -> Check {
        let holds = rel.eval(&lhs, &rhs);
        Check { name: name.into(), lhs: Quantity::Num(lhs), rel, rhs: Quantity::Num(rhs), holds }
    }

    pub fn int(name: impl Into<String>, lhs: i64, rel: Relation, rhs: i64) -> Check {
        Check::num(name, Rational::from_integer(lhs), rel, Rational::from_integer(rhs))
    }

    /// Asserts a boolean property is true.
    pub fn truth(name: impl Into<String>, value: bool) -> Check {
        Check { name: name.into(), lhs: Quantity::Bool(value), rel: Relation::Eq, rhs: Quantity::Bool(true), holds: value }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub statement: Statement,
    pub applicable: bool,
    /// Which alternative of the statement was matched, 1-based.
    pub case: Option<u8>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(statement: Statement) -> Verdict {
        Verdict { statement, applicable: true, case: None, checks: Vec::new(), notes: Vec::new() }
    }

    pub fn inapplicable(statement: Statement, why: impl Into<String>) -> Verdict {
        Verdict { statement, applicable: false, case: None, checks: Vec::new(), notes: vec![why.into()] }
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    /// True when applicable and every check holds.
    pub fn passed(&self) -> bool {
        self.applicable && self.checks.iter().all(|c| c.holds)
    }

    /// True when applicable and at least one check fails.
    pub fn failed(&self) -> bool {
        self.applicable && self.checks.iter().any(|c| !c.holds)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}
