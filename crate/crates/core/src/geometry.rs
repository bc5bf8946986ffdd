//! Points of AG(2,q), directions on the ideal line, the direction set of a
//! point set, the line-intersection invariant `s`, and affine collineations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};

/// A point `(a, b)` of AG(2,q). Ordered by `(a, b)`, i.e. by its codec
/// `a·q + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePoint {
    pub a: Gf,
    pub b: Gf,
}

impl AffinePoint {
    pub fn new(a: Gf, b: Gf) -> Self {
        AffinePoint { a, b }
    }

    pub fn codec(self, q: u32) -> u32 {
        self.a.0 * q + self.b.0
    }

    pub fn from_codec(code: u32, q: u32) -> Self {
        AffinePoint { a: Gf(code / q), b: Gf(code % q) }
    }
}

/// A point of the ideal line: a slope, or the vertical direction.
/// Slopes sort by codec and `Infinity` sorts last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Slope(Gf),
    Infinity,
}

impl Direction {
    /// Slope codec, or `q` for the vertical direction.
    pub fn codec(self, q: u32) -> u32 {
        match self {
            Direction::Slope(m) => m.0,
            Direction::Infinity => q,
        }
    }

    pub fn from_codec(code: u32, q: u32) -> Self {
        if code == q {
            Direction::Infinity
        } else {
            Direction::Slope(Gf(code))
        }
    }

    /// Homogeneous coordinates `(1, m)` or `(0, 1)`.
    pub fn vector(self) -> [Gf; 2] {
        match self {
            Direction::Slope(m) => [Gf::ONE, m],
            Direction::Infinity => [Gf::ZERO, Gf::ONE],
        }
    }

    /// Direction of a nonzero vector `(da, db)`.
    pub fn of_vector(da: Gf, db: Gf, f: &Field) -> Result<Direction> {
        if da.is_zero() {
            if db.is_zero() {
                return Err(Error::SamePoint);
            }
            Ok(Direction::Infinity)
        } else {
            Ok(Direction::Slope(f.div(db, da)?))
        }
    }

    pub fn slope(self) -> Option<Gf> {
        match self {
            Direction::Slope(m) => Some(m),
            Direction::Infinity => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Slope(m) => write!(f, "{m}"),
            Direction::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Direction::Slope(m) => s.serialize_u32(m.0),
            Direction::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Direction determined by two distinct points; `a/0 = ∞`.
pub fn direction_of(f: &Field, p: AffinePoint, q: AffinePoint) -> Result<Direction> {
    if p == q {
        return Err(Error::SamePoint);
    }
    Direction::of_vector(f.sub(p.a, q.a), f.sub(p.b, q.b), f)
}

/// A set of distinct points of AG(2,q), kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePointSet {
    field: Field,
    points: Vec<AffinePoint>,
}

impl AffinePointSet {
    pub fn new(field: &Field, points: impl IntoIterator<Item = AffinePoint>) -> Result<Self> {
        let q = field.order();
        let mut points: Vec<AffinePoint> = points.into_iter().collect();
        if let Some(bad) = points.iter().find(|p| p.a.0 >= q || p.b.0 >= q) {
            return Err(Error::CodecOutOfRange { codec: bad.a.0.max(bad.b.0) as u64, q });
        }
        points.sort_unstable();
        points.dedup();
        Ok(AffinePointSet { field: field.clone(), points })
    }

    pub fn from_pairs(field: &Field, pairs: &[(u32, u32)]) -> Result<Self> {
        AffinePointSet::new(field, pairs.iter().map(|&(a, b)| AffinePoint::new(Gf(a), Gf(b))))
    }

    /// Builds from point codecs `a·q + b`.
    pub fn from_codecs(field: &Field, codecs: &[u32]) -> Result<Self> {
        let q = field.order();
        if let Some(&bad) = codecs.iter().find(|&&c| c as u64 >= q as u64 * q as u64) {
            return Err(Error::CodecOutOfRange { codec: bad as u64, q });
        }
        AffinePointSet::new(field, codecs.iter().map(|&c| AffinePoint::from_codec(c, q)))
    }

    pub fn empty(field: &Field) -> Self {
        AffinePointSet { field: field.clone(), points: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn codecs(&self) -> Vec<u32> {
        let q = self.field.order();
        self.points.iter().map(|p| p.codec(q)).collect()
    }

    pub fn with_point(&self, p: AffinePoint) -> Self {
        let mut out = self.clone();
        if let Err(i) = out.points.binary_search(&p) {
            out.points.insert(i, p);
        }
        out
    }

    pub fn without_point(&self, p: &AffinePoint) -> Self {
        let mut out = self.clone();
        out.points.retain(|x| x != p);
        out
    }

    /// Every point of the plane not in the set, ascending.
    pub fn complement(&self) -> impl Iterator<Item = AffinePoint> + '_ {
        let q = self.field.order();
        (0..q * q).map(move |c| AffinePoint::from_codec(c, q)).filter(move |p| !self.contains(p))
    }
}

/// The determined directions of a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionSet {
    field: Field,
    determined: BTreeSet<Direction>,
}

impl DirectionSet {
    pub fn new(field: &Field, determined: BTreeSet<Direction>) -> Self {
        DirectionSet { field: field.clone(), determined }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn determined(&self) -> &BTreeSet<Direction> {
        &self.determined
    }

    pub fn len(&self) -> usize {
        self.determined.len()
    }

    pub fn is_empty(&self) -> bool {
        self.determined.is_empty()
    }

    pub fn contains(&self, y: &Direction) -> bool {
        self.determined.contains(y)
    }

    pub fn is_all(&self) -> bool {
        self.determined.len() == self.field.order() as usize + 1
    }

    pub fn iter(&self) -> impl Iterator<Item = Direction> + '_ {
        self.determined.iter().copied()
    }

    /// The ideal points not in the set, ascending.
    pub fn undetermined(&self) -> Vec<Direction> {
        all_directions(&self.field).filter(|y| !self.determined.contains(y)).collect()
    }

    /// Sorted codec list with `inf` for the vertical direction.
    pub fn to_text(&self) -> String {
        self.determined.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl Serialize for DirectionSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.determined.iter())
    }
}

/// All `q + 1` ideal points, `Infinity` last.
pub fn all_directions(f: &Field) -> impl Iterator<Item = Direction> {
    f.elements().map(Direction::Slope).chain(std::iter::once(Direction::Infinity))
}

/// Membership mask over direction codecs `0..=q`.
pub(crate) fn direction_mask(u: &AffinePointSet) -> Vec<bool> {
    let f = &u.field;
    let q = f.order();
    let mut mask = vec![false; q as usize + 1];
    let pts = &u.points;
    for (i, p) in pts.iter().enumerate() {
        for r in &pts[i + 1..] {
            let d = direction_of(f, *p, *r).expect("distinct points");
            mask[d.codec(q) as usize] = true;
        }
    }
    mask
}

pub fn directions_of(u: &AffinePointSet) -> DirectionSet {
    let q = u.field.order();
    let determined = direction_mask(u)
        .into_iter()
        .enumerate()
        .filter(|(_, m)| *m)
        .map(|(c, _)| Direction::from_codec(c as u32, q))
        .collect();
    DirectionSet { field: u.field.clone(), determined }
}

/// Intercept of the line of direction `y` through `p`: `b - y·a` for a slope,
/// `a` for the vertical direction.
pub fn intercept(f: &Field, p: AffinePoint, y: Direction) -> Gf {
    match y {
        Direction::Slope(m) => f.sub(p.b, f.mul(m, p.a)),
        Direction::Infinity => p.a,
    }
}

/// Intersection counts of `u` with the `q` lines of direction `y`, indexed by
/// intercept codec.
pub fn line_profile(u: &AffinePointSet, y: Direction) -> Vec<usize> {
    let f = &u.field;
    let mut counts = vec![0usize; f.order() as usize];
    for &p in &u.points {
        counts[intercept(f, p, y).0 as usize] += 1;
    }
    counts
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `s(y)`: the gcd of all line counts of direction `y` together with `q`,
/// which is automatically a power of `p`.
pub fn s_of_direction(u: &AffinePointSet, y: Direction) -> Result<u32> {
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = line_profile(u, y).into_iter().fold(u.field.order() as usize, gcd);
    Ok(g as u32)
}

/// Per-direction `s(y)` for all `q + 1` directions plus the aggregate `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricInvariants {
    /// `(direction, s(y))` for every ideal point, `Infinity` last.
    pub per_direction: Vec<(Direction, u32)>,
    /// Minimum of `s(y)` over determined directions.
    pub s: u32,
}

impl GeometricInvariants {
    pub fn s_at(&self, y: Direction) -> u32 {
        self.per_direction.iter().find(|(d, _)| *d == y).map(|(_, s)| *s).expect("all directions listed")
    }
}

pub fn s_of_set(u: &AffinePointSet) -> Result<GeometricInvariants> {
    let d = directions_of(u);
    if d.is_empty() {
        return Err(Error::NoDirections);
    }
    let per_direction: Vec<(Direction, u32)> =
        all_directions(&u.field).map(|y| Ok((y, s_of_direction(u, y)?))).collect::<Result<_>>()?;
    let s = per_direction.iter().filter(|(y, _)| d.contains(y)).map(|(_, s)| *s).min().expect("nonempty D");
    Ok(GeometricInvariants { per_direction, s })
}

/// A projective line of PG(2,q): an affine line extended by its direction, or
/// the ideal line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ProjectiveLine {
    Affine { direction: Direction, intercept: Gf },
    Ideal,
}

/// All `q² + q + 1` lines: affine lines by `(slope codec, intercept codec)`
/// with the vertical lines after the sloped ones, the ideal line last.
pub fn projective_lines(f: &Field) -> Vec<ProjectiveLine> {
    let mut out: Vec<ProjectiveLine> = all_directions(f)
        .flat_map(|direction| f.elements().map(move |intercept| ProjectiveLine::Affine { direction, intercept }))
        .collect();
    out.push(ProjectiveLine::Ideal);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LineCheck {
    pub line: ProjectiveLine,
    pub meets: usize,
    pub holds: bool,
}

/// Incidence report for `U ∪ D` against every projective line.
#[derive(Clone, Debug, Serialize)]
pub struct OneModReport {
    pub applicable: bool,
    /// `None` when `U` determines no direction.
    pub s: Option<u32>,
    pub lines: Vec<LineCheck>,
    pub u_size: usize,
    pub d_size: usize,
    /// `|U| ≡ 0 (mod s)`
    pub u_zero_mod_s: bool,
    /// `|D| ≡ 1 (mod s)`
    pub d_one_mod_s: bool,
    pub notes: Vec<String>,
}

impl OneModReport {
    pub fn holds(&self) -> bool {
        !self.applicable || (self.u_zero_mod_s && self.d_one_mod_s && self.lines.iter().all(|l| l.holds))
    }
}

/// Checks that every line meets `U ∪ D` in 0 or `1 (mod s)` points, that
/// `|U| ≡ 0` and `|D| ≡ 1 (mod s)`. Requires `s ≥ p`; for `s = 1` the report
/// is marked not applicable.
pub fn check_one_mod_s(u: &AffinePointSet) -> OneModReport {
    let f = &u.field;
    let d = directions_of(u);
    let mut report = OneModReport {
        applicable: false,
        s: None,
        lines: Vec::new(),
        u_size: u.len(),
        d_size: d.len(),
        u_zero_mod_s: false,
        d_one_mod_s: false,
        notes: Vec::new(),
    };
    let inv = match s_of_set(u) {
        Ok(inv) => inv,
        Err(_) => {
            report.notes.push("set determines no direction; s undefined".into());
            return report;
        }
    };
    let s = inv.s as usize;
    report.s = Some(inv.s);
    if inv.s < f.characteristic() {
        report.notes.push("s = 1: hypothesis s >= p fails".into());
        return report;
    }
    report.applicable = true;
    let ok = |m: usize| m == 0 || m % s == 1 % s;
    for y in all_directions(f) {
        let profile = line_profile(u, y);
        let extra = usize::from(d.contains(&y));
        for (c, &cnt) in profile.iter().enumerate() {
            let meets = cnt + extra;
            report.lines.push(LineCheck {
                line: ProjectiveLine::Affine { direction: y, intercept: Gf(c as u32) },
                meets,
                holds: ok(meets),
            });
        }
    }
    report.lines.push(LineCheck { line: ProjectiveLine::Ideal, meets: d.len(), holds: ok(d.len()) });
    report.u_zero_mod_s = u.len() % s == 0;
    report.d_one_mod_s = d.len() % s == 1 % s;
    report
}

/// The affine map `P ↦ M·P + v` with `det M ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Collineation {
    pub m: [[Gf; 2]; 2],
    pub v: [Gf; 2],
}

impl Collineation {
    pub fn new(f: &Field, m: [[Gf; 2]; 2], v: [Gf; 2]) -> Result<Self> {
        if f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0])).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Collineation { m, v })
    }

    pub fn identity() -> Self {
        Collineation { m: [[Gf::ONE, Gf::ZERO], [Gf::ZERO, Gf::ONE]], v: [Gf::ZERO; 2] }
    }

    /// Exchanges the direction `y` with `∞`: `(1, y) ↦ (0, 1)` and
    /// `(0, 1) ↦ (1, y)`.
    pub fn swap_with_infinity(f: &Field, y: Gf) -> Self {
        let m = [[f.neg(y), Gf::ONE], [f.sub(Gf::ONE, f.mul(y, y)), y]];
        Collineation::new(f, m, [Gf::ZERO; 2]).expect("determinant is -1")
    }

    fn apply_linear(&self, f: &Field, x: [Gf; 2]) -> [Gf; 2] {
        [
            f.add(f.mul(self.m[0][0], x[0]), f.mul(self.m[0][1], x[1])),
            f.add(f.mul(self.m[1][0], x[0]), f.mul(self.m[1][1], x[1])),
        ]
    }

    pub fn apply_point(&self, f: &Field, p: AffinePoint) -> AffinePoint {
        let [a, b] = self.apply_linear(f, [p.a, p.b]);
        AffinePoint::new(f.add(a, self.v[0]), f.add(b, self.v[1]))
    }

    /// The induced permutation of the ideal line.
    pub fn apply_direction(&self, f: &Field, y: Direction) -> Direction {
        let [x0, x1] = self.apply_linear(f, y.vector());
        Direction::of_vector(x0, x1, f).expect("invertible map")
    }

    pub fn apply_set(&self, u: &AffinePointSet) -> AffinePointSet {
        let f = &u.field;
        AffinePointSet::new(f, u.points.iter().map(|&p| self.apply_point(f, p))).expect("in range")
    }
}

/// Image of `u` under a collineation, validating the matrix.
pub fn apply_collineation(u: &AffinePointSet, m: [[Gf; 2]; 2], v: [Gf; 2]) -> Result<(AffinePointSet, Collineation)> {
    let c = Collineation::new(&u.field, m, v)?;
    Ok((c.apply_set(u), c))
}

/// Moves a determined direction to `∞` when `∞` is not determined, swapping
/// `∞` with the determined direction of least codec.
pub fn canonicalize_infinity(u: &AffinePointSet) -> Result<(AffinePointSet, Option<Collineation>)> {
    let d = directions_of(u);
    if d.is_empty() {
        return Err(Error::NoDirections);
    }
    if d.contains(&Direction::Infinity) {
        return Ok((u.clone(), None));
    }
    let y = d.iter().next().and_then(Direction::slope).expect("affine direction");
    let c = Collineation::swap_with_infinity(&u.field, y);
    Ok((c.apply_set(u), Some(c)))
}

/// Moves `∞` out of the direction set by swapping it with the least-codec
/// undetermined direction.
pub fn move_infinity_out(u: &AffinePointSet) -> Result<(AffinePointSet, Option<Collineation>)> {
    let d = directions_of(u);
    if !d.contains(&Direction::Infinity) {
        return Ok((u.clone(), None));
    }
    let y = d.undetermined().first().copied().ok_or(Error::AllDirections)?;
    let c = Collineation::swap_with_infinity(&u.field, y.slope().expect("∞ is determined"));
    Ok((c.apply_set(u), Some(c)))
}

/// All elements of AGL(2,q) in a fixed order.
pub fn affine_group(f: &Field) -> Vec<Collineation> {
    let els: Vec<Gf> = f.elements().collect();
    let mut out = Vec::new();
    for &m00 in &els {
        for &m01 in &els {
            for &m10 in &els {
                for &m11 in &els {
                    let m = [[m00, m01], [m10, m11]];
                    if f.sub(f.mul(m00, m11), f.mul(m01, m10)).is_zero() {
                        continue;
                    }
                    for &v0 in &els {
                        for &v1 in &els {
                            out.push(Collineation { m, v: [v0, v1] });
                        }
                    }
                }
            }
        }
    }
    out
}
