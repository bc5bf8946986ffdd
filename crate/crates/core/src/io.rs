//! Text formats: point-set files and linear set descriptions.
//!
//! A point-set file starts with a `p h` line naming the field, followed by
//! one `a b` line of element codecs per point. Blank lines and anything
//! after `#` are ignored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::geometry::{AffinePoint, AffinePointSet};
use crate::linsets::ProjectiveLinearSpec;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn two_numbers(line: &str, lineno: usize) -> Result<(u32, u32)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Malformed(format!("line {lineno}: expected two integers, got {line:?}")));
    }
    let parse = |s: &str| s.parse::<u32>().map_err(|_| Error::Malformed(format!("line {lineno}: bad integer {s:?}")));
    Ok((parse(parts[0])?, parse(parts[1])?))
}

pub fn parse_point_set(text: &str) -> Result<AffinePointSet> {
    let mut lines = content_lines(text);
    let (lineno, header) = lines.next().ok_or_else(|| Error::Malformed("missing `p h` header".into()))?;
    let (p, h) = two_numbers(header, lineno)?;
    let f = Field::new(p, h)?;
    let mut points = Vec::new();
    for (lineno, line) in lines {
        let (a, b) = two_numbers(line, lineno)?;
        points.push(AffinePoint::new(f.check(a)?, f.check(b)?));
    }
    AffinePointSet::new(&f, points)
}

pub fn read_point_set(path: &std::path::Path) -> Result<AffinePointSet> {
    parse_point_set(&std::fs::read_to_string(path)?)
}

pub fn format_point_set(u: &AffinePointSet) -> String {
    let f = u.field();
    let mut out = format!("{} {}\n", f.characteristic(), f.degree());
    for p in u.points() {
        out.push_str(&format!("{} {}\n", p.a, p.b));
    }
    out
}

/// JSON form of a projection `PG(d,s) → PG(n,q)`, entries as codecs. The
/// optional translate shifts the realised affine set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinsetFile {
    pub p: u32,
    pub h: u32,
    pub s: u32,
    pub d: usize,
    pub n: usize,
    pub projection_matrix: Vec<Vec<u32>>,
    #[serde(default)]
    pub translate: Option<Vec<u32>>,
}

impl LinsetFile {
    pub fn field(&self) -> Result<Field> {
        Field::new(self.p, self.h)
    }

    /// Validates entries, shape and center disjointness.
    pub fn to_spec(&self) -> Result<ProjectiveLinearSpec> {
        let f = self.field()?;
        let matrix = self
            .projection_matrix
            .iter()
            .map(|row| row.iter().map(|&c| f.check(c)).collect::<Result<Vec<Gf>>>())
            .collect::<Result<Vec<_>>>()?;
        ProjectiveLinearSpec::new(&f, self.s, self.d, self.n, matrix)
    }

    /// The translate as field elements, of length `n + 1`.
    pub fn translate(&self) -> Result<Option<Vec<Gf>>> {
        let f = self.field()?;
        match &self.translate {
            None => Ok(None),
            Some(t) if t.len() != self.n + 1 => {
                Err(Error::InvalidSpec(format!("translate must have {} entries", self.n + 1)))
            }
            Some(t) => Ok(Some(t.iter().map(|&c| f.check(c)).collect::<Result<_>>()?)),
        }
    }
}

pub fn parse_linset(text: &str) -> Result<LinsetFile> {
    Ok(serde_json::from_str(text)?)
}
