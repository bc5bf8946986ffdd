//! Linear sets over a subfield GF(s) of GF(q).
//!
//! An affine GF(s)-linear set is a translate of the GF(s)-span of vectors of
//! `GF(q)^n`. A projective GF(s)-linear set is the image of the canonical
//! subgeometry `PG(d,s) ⊂ PG(d,q)` under a linear map `GF(q)^(d+1) →
//! GF(q)^(n+1)` whose kernel avoids every GF(s)-rational point; the image is
//! kept with multiplicities.
//!
//! Projective points are normalised so that their first nonzero coordinate
//! is 1. Points of `AG(n,q)` embed as `(1, v)` and directions as `(0, v)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf, Subfield};
use crate::geometry::{directions_of, AffinePoint, AffinePointSet, Direction};
use crate::verdict::{Check, Statement, Verdict};

pub type Vector = Vec<Gf>;

fn vadd(f: &Field, x: &[Gf], y: &[Gf]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect()
}

fn vsub(f: &Field, x: &[Gf], y: &[Gf]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.sub(a, b)).collect()
}

fn vscale(f: &Field, c: Gf, x: &[Gf]) -> Vector {
    x.iter().map(|&a| f.mul(c, a)).collect()
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize(f: &Field, v: &[Gf]) -> Option<Vector> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    let inv = f.inv(lead).expect("nonzero");
    Some(vscale(f, inv, v))
}

/// Rank over GF(q) of the given rows.
pub fn rank(f: &Field, rows: &[Vector]) -> usize {
    let mut m: Vec<Vector> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).expect("pivot");
        m[r] = vscale(f, inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                let scaled = vscale(f, factor, &m[r]);
                m[i] = vsub(f, &m[i], &scaled);
            }
        }
        r += 1;
    }
    r
}

/// All GF(s)-combinations `translate + Σ λ_i g_i`, sorted and deduplicated.
pub fn span_points(f: &Field, sub: &Subfield, generators: &[Vector], translate: &[Gf]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = vec![translate.to_vec()];
    for g in generators {
        let mut next = Vec::with_capacity(pts.len() * sub.elements.len());
        for p in &pts {
            for &lam in &sub.elements {
                next.push(vadd(f, p, &vscale(f, lam, g)));
            }
        }
        next.sort_unstable();
        next.dedup();
        pts = next;
    }
    pts
}

/// Greedy GF(s)-independent subset of `generators`, in order.
pub fn independent_subset(f: &Field, sub: &Subfield, generators: &[Vector]) -> Vec<Vector> {
    let Some(n) = generators.first().map(Vec::len) else { return Vec::new() };
    let mut span: HashSet<Vector> = HashSet::from([vec![Gf::ZERO; n]]);
    let mut basis = Vec::new();
    for g in generators {
        if span.contains(g) {
            continue;
        }
        let mut next = HashSet::with_capacity(span.len() * sub.elements.len());
        for x in &span {
            for &lam in &sub.elements {
                next.insert(vadd(f, x, &vscale(f, lam, g)));
            }
        }
        span = next;
        basis.push(g.clone());
    }
    basis
}

/// `translate + span_GF(s)(generators)` in `AG(n,q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLinearSpec {
    pub field: Field,
    pub s: u32,
    pub generators: Vec<Vector>,
    pub translate: Vector,
}

impl AffineLinearSpec {
    pub fn new(field: &Field, s: u32, generators: Vec<Vector>, translate: Vector) -> Result<Self> {
        field.subfield_degree(s).ok_or(Error::NotSubfield { s, q: field.order() })?;
        let n = translate.len();
        if n == 0 {
            return Err(Error::InvalidSpec("ambient dimension must be positive".into()));
        }
        for v in generators.iter().chain(std::iter::once(&translate)) {
            if v.len() != n {
                return Err(Error::InvalidSpec("vector length differs from ambient dimension".into()));
            }
            for c in v {
                field.check(c.0)?;
            }
        }
        Ok(AffineLinearSpec { field: field.clone(), s, generators, translate })
    }

    pub fn dimension(&self) -> usize {
        self.translate.len()
    }

    pub fn subfield(&self) -> Subfield {
        self.field.subfield(self.s).expect("validated")
    }

    /// GF(s)-rank of the span.
    pub fn rank(&self) -> usize {
        independent_subset(&self.field, &self.subfield(), &self.generators).len()
    }
}

pub fn build_points(spec: &AffineLinearSpec) -> Vec<Vector> {
    span_points(&spec.field, &spec.subfield(), &spec.generators, &spec.translate)
}

/// The linear set of a spec in the plane (`n = 2`).
pub fn build_affine_linear(spec: &AffineLinearSpec) -> Result<AffinePointSet> {
    if spec.dimension() != 2 {
        return Err(Error::InvalidSpec(format!("expected the plane, got dimension {}", spec.dimension())));
    }
    AffinePointSet::new(&spec.field, build_points(spec).into_iter().map(|v| AffinePoint::new(v[0], v[1])))
}

/// Normalised points of the canonical subgeometry `PG(dim, s)`.
pub fn subgeometry_points(f: &Field, sub: &Subfield, dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for lead in 0..=dim {
        // first nonzero coordinate at `lead`, equal to 1
        let mut tails: Vec<Vector> = vec![Vec::new()];
        for _ in lead + 1..=dim {
            tails = tails
                .into_iter()
                .flat_map(|t| {
                    sub.elements.iter().map(move |&c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        for t in tails {
            let mut v = vec![Gf::ZERO; lead];
            v.push(Gf::ONE);
            v.extend(t);
            out.push(v);
        }
    }
    let _ = f;
    out
}

/// A linear map `GF(q)^(d+1) → GF(q)^(n+1)` whose kernel misses the canonical
/// subgeometry `PG(d,s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveLinearSpec {
    pub field: Field,
    pub s: u32,
    pub d: usize,
    pub n: usize,
    /// `n + 1` rows of `d + 1` entries.
    pub matrix: Vec<Vector>,
}

impl ProjectiveLinearSpec {
    /// Validates shape, entries and center disjointness (by enumerating
    /// `PG(d,s)`).
    pub fn new(field: &Field, s: u32, d: usize, n: usize, matrix: Vec<Vector>) -> Result<Self> {
        field.subfield_degree(s).ok_or(Error::NotSubfield { s, q: field.order() })?;
        if matrix.len() != n + 1 || matrix.iter().any(|r| r.len() != d + 1) {
            return Err(Error::InvalidSpec(format!("projection matrix must be {}x{}", n + 1, d + 1)));
        }
        for c in matrix.iter().flatten() {
            field.check(c.0)?;
        }
        let spec = ProjectiveLinearSpec { field: field.clone(), s, d, n, matrix };
        let sub = spec.subfield();
        if subgeometry_points(field, &sub, d).iter().any(|x| spec.apply(x).iter().all(|c| c.is_zero())) {
            return Err(Error::CenterMeetsSubgeometry);
        }
        Ok(spec)
    }

    pub fn subfield(&self) -> Subfield {
        self.field.subfield(self.s).expect("validated")
    }

    pub fn apply(&self, x: &[Gf]) -> Vector {
        let f = &self.field;
        self.matrix.iter().map(|row| row.iter().zip(x).fold(Gf::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    /// Rank of the projection matrix over GF(q).
    pub fn rank(&self) -> usize {
        rank(&self.field, &self.matrix)
    }

    /// Columns of the matrix, i.e. images of the standard basis.
    pub fn columns(&self) -> Vec<Vector> {
        (0..=self.d).map(|j| self.matrix.iter().map(|r| r[j]).collect()).collect()
    }

    /// `(s^(d+1) - 1) / (s - 1)`.
    pub fn expected_weight(&self) -> u64 {
        let s = self.s as u64;
        (s.pow(self.d as u32 + 1) - 1) / (s - 1)
    }
}

/// Projective points with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightedProjectiveSet {
    pub points: BTreeMap<Vector, u64>,
}

impl WeightedProjectiveSet {
    pub fn total_weight(&self) -> u64 {
        self.points.values().sum()
    }

    pub fn support(&self) -> BTreeSet<Vector> {
        self.points.keys().cloned().collect()
    }

    pub fn weight(&self, v: &[Gf]) -> u64 {
        self.points.get(v).copied().unwrap_or(0)
    }
}

pub fn project_subgeometry(spec: &ProjectiveLinearSpec) -> WeightedProjectiveSet {
    let f = &spec.field;
    let mut points = BTreeMap::new();
    for x in subgeometry_points(f, &spec.subfield(), spec.d) {
        let img = normalize(f, &spec.apply(&x)).expect("center is disjoint");
        *points.entry(img).or_insert(0) += 1;
    }
    WeightedProjectiveSet { points }
}

/// Lifts a projective linear set of `PG(n,q)` to an affine GF(s)-linear set
/// of `AG(n+1,q)` whose direction set is its support: the affine part
/// `{(x, 1)}` of `PG(d+1,s)` is mapped by `(x, w) ↦ (Mx, w)`, i.e. onto the
/// GF(s)-span of the columns of `M`, one-to-one.
pub fn realize_direction_set(spec: &ProjectiveLinearSpec) -> Vec<Vector> {
    let f = &spec.field;
    let zero = vec![Gf::ZERO; spec.n + 1];
    span_points(f, &spec.subfield(), &spec.columns(), &zero)
}

/// The lift for `n = 1`, as a set of the plane.
pub fn realize_in_plane(spec: &ProjectiveLinearSpec) -> Result<AffinePointSet> {
    if spec.n != 1 {
        return Err(Error::InvalidSpec("the plane realisation needs target PG(1,q)".into()));
    }
    let pts = realize_direction_set(spec);
    AffinePointSet::new(&spec.field, pts.into_iter().map(|v| AffinePoint::new(v[0], v[1])))
}

/// Normalised direction vectors determined by a set of `AG(n,q)`.
pub fn directions_in_space(f: &Field, points: &[Vector]) -> BTreeSet<Vector> {
    let mut out = BTreeSet::new();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            if let Some(d) = normalize(f, &vsub(f, y, x)) {
                out.insert(d);
            }
        }
    }
    out
}

/// A plane direction as a normalised point of PG(1,q): `(1, m)` or `(0, 1)`.
pub fn direction_vector(y: Direction) -> Vector {
    y.vector().to_vec()
}

pub fn vector_direction(f: &Field, v: &[Gf]) -> Result<Direction> {
    if v.len() != 2 {
        return Err(Error::InvalidSpec("not a point of PG(1,q)".into()));
    }
    Direction::of_vector(v[0], v[1], f)
}

/// Outcome of projecting `PG(r,s)` onto `U ∪ D` for an affine linear set.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    /// Witness projection, homogenising coordinate first.
    #[serde(skip)]
    pub witness: ProjectiveLinearSpec,
    pub witness_matrix: Vec<Vector>,
    pub image: WeightedProjectiveSet,
    /// GF(s)-rank of the linear set.
    pub rank: usize,
    /// GF(q)-dimension of the affine hull.
    pub ambient_rank: usize,
    pub verdict: Verdict,
}

/// Builds the witness map `(w, x) ↦ (w, w·t + Σ x_i a_i)` from `PG(r,s)` and
/// checks that its image is exactly `U ∪ D`, that every point of `U` has
/// multiplicity 1, and that `|D| ≡ 1 (mod s)`.
pub fn closure_is_projective_linear(spec: &AffineLinearSpec) -> Result<ClosureReport> {
    let f = &spec.field;
    let sub = spec.subfield();
    let n = spec.dimension();
    let gens = independent_subset(f, &sub, &spec.generators);
    let r = gens.len();
    let mut matrix = Vec::with_capacity(n + 1);
    let mut head = vec![Gf::ZERO; r + 1];
    head[0] = Gf::ONE;
    matrix.push(head);
    for i in 0..n {
        let mut row = vec![spec.translate[i]];
        row.extend(gens.iter().map(|g| g[i]));
        matrix.push(row);
    }
    let witness = ProjectiveLinearSpec::new(f, spec.s, r, n, matrix.clone())?;
    let image = project_subgeometry(&witness);

    let u = build_points(spec);
    let dirs = directions_in_space(f, &u);
    let mut expected = BTreeSet::new();
    for p in &u {
        let mut v = vec![Gf::ONE];
        v.extend(p.iter().copied());
        expected.insert(v);
    }
    for d in &dirs {
        let mut v = vec![Gf::ZERO];
        v.extend(d.iter().copied());
        expected.insert(v);
    }

    let mut v = Verdict::new(Statement::LinearClosure);
    v.push(Check::truth("image support = U ∪ D", image.support() == expected));
    v.push(Check::int("total weight", image.total_weight() as i64, crate::verdict::Relation::Eq, witness.expected_weight() as i64));
    v.push(Check::truth(
        "points of U have multiplicity 1",
        image.points.iter().filter(|(k, _)| !k[0].is_zero()).all(|(_, &w)| w == 1),
    ));
    v.push(Check::truth(
        "multiple points lie on the ideal hyperplane",
        image.points.iter().filter(|(_, &w)| w > 1).all(|(k, _)| k[0].is_zero()),
    ));
    let s = spec.s as usize;
    v.push(Check::int("|D| mod s", (dirs.len() % s) as i64, crate::verdict::Relation::Eq, (1 % s) as i64));
    let ambient_rank = rank(f, &gens);
    if ambient_rank < n {
        v.note(format!("affine hull has dimension {ambient_rank} < {n}"));
    }
    Ok(ClosureReport { witness, witness_matrix: matrix, image, rank: r, ambient_rank, verdict: v })
}

/// Decides whether `u` is a translate of a GF(s)-subspace; returns a witness
/// spec (translate = least point, greedy generators) when it is.
pub fn is_gf_s_linear(u: &AffinePointSet, s: u32) -> Result<Option<AffineLinearSpec>> {
    let f = u.field();
    let sub = f.subfield(s)?;
    let Some(&base) = u.points().first() else { return Ok(None) };
    let shifted: HashSet<Vector> = u.points().iter().map(|p| vec![f.sub(p.a, base.a), f.sub(p.b, base.b)]).collect();
    let mut ordered: Vec<&Vector> = shifted.iter().collect();
    ordered.sort_unstable();
    let mut span: HashSet<Vector> = HashSet::from([vec![Gf::ZERO; 2]]);
    let mut basis = Vec::new();
    for w in ordered {
        if span.contains(w) {
            continue;
        }
        let mut next = HashSet::with_capacity(span.len() * sub.elements.len());
        for x in &span {
            for &lam in &sub.elements {
                let y = vadd(f, x, &vscale(f, lam, w));
                if !shifted.contains(&y) {
                    return Ok(None);
                }
                next.insert(y);
            }
        }
        span = next;
        basis.push(w.clone());
    }
    if span.len() != shifted.len() {
        return Ok(None);
    }
    Ok(Some(AffineLinearSpec::new(f, s, basis, vec![base.a, base.b])?))
}

/// A basis of GF(q) over GF(s) and the coordinate map for it.
pub struct SubfieldBasis {
    pub basis: Vec<Gf>,
    sub: Subfield,
}

impl SubfieldBasis {
    /// Powers `1, g, ..., g^(m-1)` of the least primitive element.
    pub fn new(f: &Field, s: u32) -> Result<Self> {
        let sub = f.subfield(s)?;
        let m = (f.degree() / sub.degree) as u64;
        let g = f.primitive_element();
        let basis = (0..m).map(|i| f.pow(g, i)).collect();
        Ok(SubfieldBasis { basis, sub })
    }

    pub fn combine(&self, f: &Field, coords: &[Gf]) -> Gf {
        coords.iter().zip(&self.basis).fold(Gf::ZERO, |acc, (&c, &b)| f.add(acc, f.mul(c, b)))
    }
}

/// Every GF(s)-subspace of `GF(q)^n` of GF(s)-dimension `1..=max_rank`, as
/// generator lists (rows of a reduced echelon form over the GF(s)-coordinates).
pub fn gf_s_subspaces(f: &Field, s: u32, n: usize, max_rank: usize) -> Result<Vec<Vec<Vector>>> {
    let sb = SubfieldBasis::new(f, s)?;
    let m = sb.basis.len();
    let big_n = n * m;
    let elems = sb.sub.elements.clone();
    let mut out = Vec::new();
    for k in 1..=max_rank.min(big_n) {
        for pivots in combinations(big_n, k) {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| ((pivots[i] + 1)..big_n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = (elems.len() as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![Gf::ZERO; big_n]; k];
                for (i, &pc) in pivots.iter().enumerate() {
                    rows[i][pc] = Gf::ONE;
                }
                let mut c = code;
                for &(i, col) in &free {
                    rows[i][col] = elems[(c % elems.len() as u64) as usize];
                    c /= elems.len() as u64;
                }
                let gens = rows
                    .iter()
                    .map(|row| (0..n).map(|j| sb.combine(f, &row[j * m..(j + 1) * m])).collect())
                    .collect();
                out.push(gens);
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A uniformly drawn projection `PG(d,s) → PG(n,q)` with disjoint center,
/// by rejection.
pub fn random_projective_spec<R: Rng>(f: &Field, s: u32, d: usize, n: usize, rng: &mut R) -> Result<ProjectiveLinearSpec> {
    let sub = f.subfield(s)?;
    let ratio = (f.degree() / sub.degree) as usize;
    if d + 1 > (n + 1) * ratio {
        return Err(Error::InvalidSpec(format!("PG({d},{s}) cannot embed into PG({n},{})", f.order())));
    }
    loop {
        let matrix: Vec<Vector> =
            (0..=n).map(|_| (0..=d).map(|_| Gf(rng.gen_range(0..f.order()))).collect()).collect();
        match ProjectiveLinearSpec::new(f, s, d, n, matrix) {
            Ok(spec) => return Ok(spec),
            Err(Error::CenterMeetsSubgeometry) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Directions of the plane set as projective points, for comparison with a
/// projected support.
pub fn plane_directions_as_vectors(u: &AffinePointSet) -> BTreeSet<Vector> {
    directions_of(u).iter().map(direction_vector).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(c: &[u32]) -> Vector {
        c.iter().map(|&x| Gf(x)).collect()
    }

    #[test]
    fn e1_as_span() {
        let f = Field::new(2, 2).unwrap();
        let spec = AffineLinearSpec::new(&f, 2, vec![v(&[1, 0]), v(&[0, 1])], v(&[0, 0])).unwrap();
        let u = build_affine_linear(&spec).unwrap();
        assert_eq!(u, AffinePointSet::from_pairs(&f, &[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap());
        let single = AffineLinearSpec::new(&f, 2, vec![], v(&[3, 2])).unwrap();
        assert_eq!(build_affine_linear(&single).unwrap().len(), 1);
        assert!(AffineLinearSpec::new(&f, 3, vec![], v(&[0, 0])).is_err());
    }

    #[test]
    fn gf9_spans() {
        let f = Field::new(3, 2).unwrap();
        let w = f.primitive_element();
        let indep = AffineLinearSpec::new(&f, 3, vec![v(&[1, 0]), v(&[0, 1]), vec![w, w]], v(&[0, 0])).unwrap();
        assert_eq!(build_points(&indep).len(), 27);
        let dep = AffineLinearSpec::new(&f, 3, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])], v(&[0, 0])).unwrap();
        assert_eq!(build_points(&dep).len(), 9);
        assert_eq!(dep.rank(), 2);
    }

    #[test]
    fn identity_projection() {
        let f = Field::new(2, 2).unwrap();
        let spec = ProjectiveLinearSpec::new(&f, 2, 1, 1, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let img = project_subgeometry(&spec);
        assert_eq!(img.total_weight(), 3);
        assert!(img.points.values().all(|&w| w == 1));
        assert_eq!(img.support(), [v(&[0, 1]), v(&[1, 0]), v(&[1, 1])].into_iter().collect());
        let u = realize_in_plane(&spec).unwrap();
        assert_eq!(u.len(), 4);
        assert_eq!(directions_of(&u).to_text(), "0 1 inf");
    }

    #[test]
    fn fano_projected_to_line() {
        let f = Field::new(2, 2).unwrap();
        let w = f.primitive_element();
        // columns 1, ω, ω+1 in the first row are GF(2)-dependent: 1 + ω = ω+1
        let bad = ProjectiveLinearSpec::new(&f, 2, 2, 1, vec![vec![Gf(1), w, Gf(3)], v(&[0, 0, 0])]);
        assert!(matches!(bad, Err(Error::CenterMeetsSubgeometry)));
        let spec = ProjectiveLinearSpec::new(&f, 2, 2, 1, vec![v(&[1, 0, 1]), vec![Gf(0), Gf(1), w]]).unwrap();
        let img = project_subgeometry(&spec);
        assert_eq!(img.total_weight(), 7);
        assert!(img.points.len() <= 5);
        let u = realize_in_plane(&spec).unwrap();
        assert_eq!(u.len(), 8);
        assert_eq!(plane_directions_as_vectors(&u), img.support());
    }

    #[test]
    fn single_point_projection() {
        let f = Field::new(3, 2).unwrap();
        let spec = ProjectiveLinearSpec::new(&f, 3, 0, 1, vec![v(&[1]), v(&[2])]).unwrap();
        let u = realize_in_plane(&spec).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(directions_of(&u).len(), 1);
    }

    #[test]
    fn closure_of_e1_and_rank_three_set() {
        let f = Field::new(2, 2).unwrap();
        let spec = AffineLinearSpec::new(&f, 2, vec![v(&[1, 0]), v(&[0, 1])], v(&[0, 0])).unwrap();
        let rep = closure_is_projective_linear(&spec).unwrap();
        assert!(rep.verdict.passed(), "{:?}", rep.verdict);
        assert_eq!(rep.image.total_weight(), 7);
        assert!(rep.image.points.values().all(|&w| w == 1));

        let w = f.primitive_element();
        let spec3 = AffineLinearSpec::new(&f, 2, vec![v(&[1, 0]), v(&[0, 1]), vec![w, Gf(0)]], v(&[1, 2])).unwrap();
        let rep = closure_is_projective_linear(&spec3).unwrap();
        assert!(rep.verdict.passed(), "{:?}", rep.verdict);
        assert_eq!(rep.rank, 3);
        assert_eq!(rep.image.total_weight(), 15);
        assert!(rep.image.points.values().any(|&w| w > 1));
    }

    #[test]
    fn linearity_decision() {
        let f = Field::new(2, 2).unwrap();
        let e1 = AffinePointSet::from_pairs(&f, &[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let wit = is_gf_s_linear(&e1, 2).unwrap().unwrap();
        assert_eq!(wit.generators, vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(build_affine_linear(&wit).unwrap(), e1);
        let minus = e1.without_point(&AffinePoint::new(Gf(1), Gf(1)));
        assert!(is_gf_s_linear(&minus, 2).unwrap().is_none());
        let single = AffinePointSet::from_pairs(&f, &[(3, 1)]).unwrap();
        assert!(is_gf_s_linear(&single, 4).unwrap().is_some());
        assert!(is_gf_s_linear(&e1, 4).unwrap().is_none());
    }

    fn gaussian_binomial(n: u32, k: u32, s: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= s.pow(n - i) - 1;
            den *= s.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts() {
        for (p, h, s) in [(2, 2, 2), (2, 3, 2), (3, 2, 3), (2, 4, 4)] {
            let f = Field::new(p, h).unwrap();
            let e = f.subfield_degree(s).unwrap();
            let big_n = 2 * h / e;
            let all = gf_s_subspaces(&f, s, 2, 3).unwrap();
            let expected: u64 = (1..=3.min(big_n)).map(|k| gaussian_binomial(big_n, k, s as u64)).sum();
            assert_eq!(all.len() as u64, expected, "q = {}^{} s = {}", p, h, s);
            let sub = f.subfield(s).unwrap();
            let mut seen = HashSet::new();
            for gens in &all {
                assert_eq!(independent_subset(&f, &sub, gens).len(), gens.len());
                assert!(seen.insert(span_points(&f, &sub, gens, &[Gf(0), Gf(0)])));
            }
        }
    }

    #[test]
    fn random_specs_are_valid() {
        let f = Field::new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 0..4 {
            let spec = random_projective_spec(&f, 2, d, 1, &mut rng).unwrap();
            assert_eq!(project_subgeometry(&spec).total_weight(), spec.expected_weight());
        }
        assert!(random_projective_spec(&f, 2, 8, 1, &mut rng).is_err());
    }
}
