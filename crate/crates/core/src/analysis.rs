//! Verdict engines for the direction bounds, the polynomial extension
//! statement, the two conjectures on maximal sets, and the examples
//! separating maximality from linearity.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::geometry::{
    canonicalize_infinity, check_one_mod_s, directions_of, intercept, line_profile, move_infinity_out, s_of_set,
    AffinePoint, AffinePointSet, Direction,
};
use crate::linsets::{build_affine_linear, is_gf_s_linear, AffineLinearSpec};
use crate::poly::Poly;
use crate::redei::{divide_xq, t_of_set};
use crate::search::is_maximal;
use crate::verdict::{Check, Rational, Relation, Statement, Verdict};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn note_collineation(v: &mut Verdict, c: Option<crate::geometry::Collineation>, what: &str) {
    if let Some(c) = c {
        let m = c.m;
        v.note(format!(
            "{what} by the collineation [[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        ));
    }
}

/// Sets of `q` points without the vertical direction: `s = 1` with
/// `(q+3)/2 ≤ |D| ≤ q`, or a proper subfield `GF(s)` with
/// `q/s + 1 ≤ |D| ≤ (q-1)/(s-1)`, or `s = q` with `|D| = 1`; for `s > 2`
/// the set must be GF(s)-linear of rank `log_s q`.
pub fn classify_ball(u: &AffinePointSet) -> Result<Verdict> {
    let f = u.field();
    let q = f.order() as i64;
    if u.len() as i64 != q {
        return Err(Error::Hypothesis(format!("|U| = {} but q = {q}", u.len())));
    }
    let (w, col) = move_infinity_out(u)?;
    let d = directions_of(&w);
    let s = s_of_set(&w)?.s as i64;
    let dn = d.len() as i64;
    let mut v = Verdict::new(Statement::Ball);
    note_collineation(&mut v, col, "∞ moved out of D");
    if s == 1 {
        v.case = Some(1);
        v.push(Check::num("(q+3)/2 <= |D|", rat(q + 3, 2), Relation::Le, int(dn)));
        v.push(Check::int("|D| <= q", dn, Relation::Le, q));
    } else if s == q {
        v.case = Some(3);
        v.push(Check::int("|D| = 1", dn, Relation::Eq, 1));
    } else {
        v.case = Some(2);
        v.push(Check::truth("GF(s) is a subfield of GF(q)", f.subfield_degree(s as u32).is_some()));
        v.push(Check::num("q/s + 1 <= |D|", rat(q, s) + 1, Relation::Le, int(dn)));
        v.push(Check::num("|D| <= (q-1)/(s-1)", int(dn), Relation::Le, rat(q - 1, s - 1)));
    }
    if s > 2 {
        let witness = if f.subfield_degree(s as u32).is_some() { is_gf_s_linear(&w, s as u32)? } else { None };
        v.push(Check::truth("U is GF(s)-linear", witness.is_some()));
        if let Some(spec) = witness {
            let log = (f.degree() / f.subfield_degree(s as u32).expect("subfield")) as i64;
            v.push(Check::int("rank = log_s q", spec.rank() as i64, Relation::Eq, log));
        }
    }
    Ok(v)
}

/// For prime `q = p` and `1 < |U| ≤ p` without the vertical direction:
/// `(|U|+3)/2 ≤ |D| ≤ p`, or `U` collinear with `|D| = 1`.
pub fn classify_szonyi_blokhuis(u: &AffinePointSet) -> Result<Verdict> {
    let f = u.field();
    if f.degree() != 1 {
        return Err(Error::Hypothesis(format!("q = {} is not prime", f.order())));
    }
    let p = f.order() as i64;
    let n = u.len() as i64;
    if n < 2 || n > p {
        return Err(Error::Hypothesis(format!("|U| = {n} outside 1 < |U| <= {p}")));
    }
    let (w, col) = move_infinity_out(u)?;
    let d = directions_of(&w);
    let dn = d.len() as i64;
    let mut v = Verdict::new(Statement::SzonyiBlokhuis);
    note_collineation(&mut v, col, "∞ moved out of D");
    if dn == 1 {
        v.case = Some(2);
        let y = d.iter().next().expect("one direction");
        let collinear = line_profile(&w, y).into_iter().max() == Some(n as usize);
        v.push(Check::truth("U is collinear", collinear));
    } else {
        v.case = Some(1);
        v.push(Check::num("(|U|+3)/2 <= |D|", rat(n + 3, 2), Relation::Le, int(dn)));
        v.push(Check::int("|D| <= p", dn, Relation::Le, p));
        if 2 * dn == n + 3 {
            v.note("sharp: |D| = (|U|+3)/2");
        }
    }
    Ok(v)
}

/// `|D| = (|U|+3)/2` exactly.
pub fn is_sztaab_sharp(u: &AffinePointSet) -> bool {
    2 * directions_of(u).len() == u.len() + 3
}

/// The trichotomy for sets of at most `q` points with `∞ ∈ D`, together with
/// the per-set and per-direction lemmas it rests on. A set without the
/// vertical direction is first moved by the swap of `∞` with its least
/// determined slope.
pub fn classify_thm_m(u: &AffinePointSet) -> Result<Verdict> {
    let f = u.field();
    let q = f.order() as i64;
    if u.len() as i64 > q {
        return Err(Error::TooManyPoints { n: u.len(), q: f.order() });
    }
    if directions_of(u).is_empty() {
        return Err(Error::NoDirections);
    }
    let (w, col) = canonicalize_infinity(u)?;
    let sys = divide_xq(&w)?;
    sys.check_invariants()?;
    let d = directions_of(&w);
    let geo = s_of_set(&w)?;
    let alg = t_of_set(&sys, &d)?;
    let (s, t) = (geo.s as i64, alg.t as i64);
    let n = w.len() as i64;
    let dn = d.len() as i64;
    let mut v = Verdict::new(Statement::DirectionBound);
    note_collineation(&mut v, col, "a determined direction moved to ∞");

    v.push(Check::int("s <= t", s, Relation::Le, t));
    for a in &alg.per_direction {
        let sy = geo.s_at(Direction::Slope(a.y)) as i64;
        v.push(Check::int(format!("s({0}) <= t({0})", a.y), sy, Relation::Le, a.t as i64));
    }

    if t == q {
        v.case = Some(3);
        v.push(Check::truth("D = {∞}", dn == 1 && d.contains(&Direction::Infinity)));
    } else {
        let lower = rat(n - 1, t + 1) + 2;
        v.push(Check::num("(|U|-1)/(t+1) + 2 <= |D|", lower, Relation::Le, int(dn)));
        if s == 1 {
            v.case = Some(1);
            v.push(Check::int("|D| <= q+1", dn, Relation::Le, q + 1));
        } else {
            v.case = Some(2);
            v.push(Check::num("|D| <= (|U|-1)/(s-1)", int(dn), Relation::Le, rat(n - 1, s - 1)));
            v.push(Check::truth("lines through each point of U count |U|-1 others in multiples of s", {
                w.points().iter().all(|&pt| counting_holds(&w, pt, &d, s as usize))
            }));
        }
        v.push(Check::int("t < q", t, Relation::Lt, q));
    }

    let deg_h = sys.deg_x_h().unwrap_or(0) as i64;
    if d.is_all() {
        v.note("every direction is determined; the |D| >= deg_X H + 1 check needs an undetermined one");
    } else if alg.per_direction.is_empty() {
        // H = -X here, and the bound would read |D| >= 2
        v.note("D = {∞}: the |D| >= deg_X H + 1 check needs an affine determined direction");
    } else {
        v.push(Check::int("|D| >= deg_X H + 1", dn, Relation::Ge, deg_h + 1));
    }
    let minus_x = Poly::x().neg(f);
    for a in &alg.per_direction {
        let hy = sys.h_at(a.y);
        if hy.is_constant() || hy == minus_x {
            continue;
        }
        let Some(fy) = &a.f_y_poly else { continue };
        let ty = a.t as i64;
        let deg_f = fy.degree().unwrap_or(0) as i64;
        let deg_hy = hy.degree().unwrap_or(0) as i64;
        let kap = a.kappa as i64;
        let y = a.y;
        v.push(Check::num(
            format!("(κ({y})+t({y}))/(t({y})+1) <= t({y})·deg f_{y}"),
            rat(kap + ty, ty + 1),
            Relation::Le,
            int(ty * deg_f),
        ));
        v.push(Check::int(format!("t({y})·deg f_{y} = deg H(X,{y})"), ty * deg_f, Relation::Eq, deg_hy));
        v.push(Check::int(format!("deg H(X,{y}) <= deg_X H"), deg_hy, Relation::Le, deg_h));
        v.push(Check::int(format!("κ({y}) >= |U|"), kap, Relation::Ge, n));
    }
    if alg.infinity_excluded {
        v.note("t is taken over the affine determined directions");
    }
    Ok(v)
}

fn counting_holds(u: &AffinePointSet, pt: AffinePoint, d: &crate::geometry::DirectionSet, s: usize) -> bool {
    let f = u.field();
    let mut total = 0;
    for y in d.iter() {
        let c = intercept(f, pt, y);
        let on_line = u.points().iter().filter(|&&x| intercept(f, x, y) == c).count();
        if on_line % s != 0 {
            return false;
        }
        total += on_line - 1;
    }
    total == u.len() - 1
}

/// Lines meeting `U ∪ D` in 0 or `1 (mod s)` points, `|U| ≡ 0`, `|D| ≡ 1`.
pub fn classify_one_mod_s(u: &AffinePointSet) -> Verdict {
    let rep = check_one_mod_s(u);
    if !rep.applicable {
        return Verdict::inapplicable(Statement::OneModS, rep.notes.join("; "));
    }
    let s = rep.s.expect("applicable") as i64;
    let mut v = Verdict::new(Statement::OneModS);
    let bad = rep.lines.iter().filter(|l| !l.holds).count() as i64;
    v.push(Check::int("lines meeting U ∪ D in neither 0 nor 1 mod s points", bad, Relation::Eq, 0));
    v.push(Check::int("|U| mod s", rep.u_size as i64 % s, Relation::Eq, 0));
    v.push(Check::int("|D| mod s", rep.d_size as i64 % s, Relation::Eq, 1 % s));
    v
}

/// Evaluates any set-level statement, turning unmet hypotheses into an
/// inapplicable verdict. Soundness alarms are returned as errors.
pub fn evaluate(statement: Statement, u: &AffinePointSet) -> Result<Verdict> {
    let out = match statement {
        Statement::Ball => classify_ball(u),
        Statement::SzonyiBlokhuis => classify_szonyi_blokhuis(u),
        Statement::DirectionBound => classify_thm_m(u),
        Statement::OneModS => Ok(classify_one_mod_s(u)),
        Statement::RedeiStructure => redei_structure_all(u),
        Statement::QuotientStructure => crate::redei::check_prop_es(u),
        Statement::SpanStructure => span_structure(u),
        Statement::LinearClosure => linear_closure_of_set(u),
        Statement::ConjectureSEqualsT => conjecture_s_equals_t(u),
        Statement::ConjectureLinearity => conjecture_linearity(u),
        Statement::Extension => Ok(Verdict::inapplicable(statement, "a polynomial statement, not a set statement")),
    };
    match out {
        Ok(v) => Ok(v),
        Err(e) if e.is_soundness_alarm() => Err(e),
        Err(e) => Ok(Verdict::inapplicable(statement, e.to_string())),
    }
}

fn redei_structure_all(u: &AffinePointSet) -> Result<Verdict> {
    let mut v = Verdict::new(Statement::RedeiStructure);
    for y in u.field().elements() {
        let sub = crate::redei::check_r_structure(u, Direction::Slope(y))?;
        v.checks.extend(sub.checks);
    }
    Ok(v)
}

fn span_structure(u: &AffinePointSet) -> Result<Verdict> {
    if u.len() > u.field().order() as usize {
        return Err(Error::TooManyPoints { n: u.len(), q: u.field().order() });
    }
    let d = directions_of(u);
    if d.is_empty() {
        return Err(Error::NoDirections);
    }
    let sys = divide_xq(u)?;
    let t = t_of_set(&sys, &d)?.t;
    Ok(crate::redei::check_prop_lin(&sys, t))
}

/// For a set that is GF(s)-linear for its largest possible subfield, checks
/// that `U ∪ D` is the projection of a subgeometry.
fn linear_closure_of_set(u: &AffinePointSet) -> Result<Verdict> {
    let f = u.field();
    let mut subs = f.subfields();
    subs.sort_by_key(|s| std::cmp::Reverse(s.order));
    for sub in subs {
        if let Some(spec) = is_gf_s_linear(u, sub.order)? {
            return Ok(crate::linsets::closure_is_projective_linear(&spec)?.verdict);
        }
    }
    Err(Error::Hypothesis("U is not linear over any subfield".into()))
}

/// Instance of the extension statement: `g·f ∈ F[X^s]` with
/// `deg f ≤ s - 1`.
#[derive(Clone, Debug)]
pub struct ExtensionInstance {
    pub field: Field,
    pub s: u32,
    pub q: u32,
    pub g: Poly,
    pub f: Poly,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionOutcome {
    /// A cofactor of least degree, when one exists.
    #[serde(serialize_with = "ser_opt_poly")]
    pub f: Option<Poly>,
    /// `X^q div g`.
    #[serde(serialize_with = "ser_poly")]
    pub quotient: Poly,
    pub verdict: Verdict,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&p.to_text("X"))
}

fn ser_opt_poly<S: serde::Serializer>(p: &Option<Poly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.collect_str(&p.to_text("X")),
        None => s.serialize_none(),
    }
}

fn is_power_of(n: u32, p: u32) -> bool {
    let mut n = n;
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Solves `A x = b`, returning one solution if any.
fn solve(f: &Field, mut a: Vec<Vec<Gf>>, mut b: Vec<Gf>) -> Option<Vec<Gf>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        b.swap(r, piv);
        let inv = f.inv(a[r][c]).expect("pivot");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        b[r] = f.mul(b[r], inv);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let k = a[i][c];
                for j in 0..cols {
                    let t = f.mul(k, a[r][j]);
                    a[i][j] = f.sub(a[i][j], t);
                }
                b[i] = f.sub(b[i], f.mul(k, b[r]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Gf::ZERO; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i];
    }
    Some(x)
}

/// Monic `f` of least degree `≤ s - 1` with `g·f ∈ F[X^s]`.
pub fn find_cofactor(field: &Field, g: &Poly, s: u32) -> Option<Poly> {
    let s = s as usize;
    let dg = g.degree()?;
    for d in 0..s {
        // unknowns f_0..f_{d-1}, f_d = 1
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in (0..=dg + d).filter(|k| k % s != 0) {
            let row: Vec<Gf> = (0..d).map(|j| if k >= j { g.coeff(k - j) } else { Gf::ZERO }).collect();
            a.push(row);
            b.push(field.neg(if k >= d { g.coeff(k - d) } else { Gf::ZERO }));
        }
        let sol = if d == 0 {
            b.iter().all(|x| x.is_zero()).then(Vec::new)
        } else if a.is_empty() {
            Some(vec![Gf::ZERO; d])
        } else {
            solve(field, a, b)
        };
        if let Some(mut coeffs) = sol {
            coeffs.push(Gf::ONE);
            return Some(Poly::new(coeffs));
        }
    }
    None
}

/// Looks for a cofactor `f` and, when one exists, checks that
/// `g·(X^q div g) ∈ F[X^s]`, that the remainder of `X^q` modulo `g·f` lies in
/// `F[X^s]`, and that `X^q div g = f·(X^q div gf)`.
pub fn extension_oracle(field: &Field, g: &Poly, s: u32, q: u32) -> Result<ExtensionOutcome> {
    let p = field.characteristic();
    if !is_power_of(s, p) || !is_power_of(q, p) || s > q {
        return Err(Error::InvalidSpec(format!("need p-powers s <= q for p = {p}, got s = {s}, q = {q}")));
    }
    if g.is_zero() {
        return Err(Error::InvalidSpec("g must be nonzero".into()));
    }
    let xq = Poly::monomial(Gf::ONE, q as usize);
    let (quotient, _) = xq.divrem(g, field)?;
    let Some(f) = find_cofactor(field, g, s) else {
        return Ok(ExtensionOutcome {
            f: None,
            quotient,
            verdict: Verdict::inapplicable(Statement::Extension, "no f with deg f <= s-1 and g·f in F[X^s]"),
        });
    };
    let su = s as usize;
    let gf = g.mul(&f, field);
    let (h, r) = xq.divrem(&gf, field)?;
    let mut v = Verdict::new(Statement::Extension);
    v.push(Check::truth("g·f in F[X^s]", gf.in_power_ring(su)));
    v.push(Check::truth("h = X^q div gf in F[X^s]", h.in_power_ring(su)));
    v.push(Check::truth("r = X^q mod gf in F[X^s]", r.in_power_ring(su)));
    v.push(Check::truth("g·(X^q div g) in F[X^s]", g.mul(&quotient, field).in_power_ring(su)));
    v.push(Check::truth("X^q div g = f·h", quotient == f.mul(&h, field)));
    Ok(ExtensionOutcome { f: Some(f), quotient, verdict: v })
}

/// A random instance: `f` of degree at most `s - 1` and
/// `g = f^(s-1)·m(X^s)`, so that `g·f = f^s·m(X^s) ∈ F[X^s]`.
pub fn random_extension_instance<R: Rng>(field: &Field, s: u32, q: u32, rng: &mut R) -> ExtensionInstance {
    let order = field.order();
    let nonzero = |rng: &mut R| Gf(rng.gen_range(1..order));
    let any = |rng: &mut R| Gf(rng.gen_range(0..order));
    let df = rng.gen_range(0..s as usize);
    let mut fc: Vec<Gf> = (0..df).map(|_| any(rng)).collect();
    fc.push(Gf::ONE);
    let f = Poly::new(fc);
    let km = rng.gen_range(0..=(q / s).max(1) as usize);
    let mut m = vec![Gf::ZERO; km * s as usize + 1];
    for k in 0..km {
        m[k * s as usize] = any(rng);
    }
    m[km * s as usize] = nonzero(rng);
    let g = f.pow(s as u64 - 1, field).mul(&Poly::new(m), field);
    ExtensionInstance { field: field.clone(), s, q, g, f }
}

/// `t(y) = s(y)` at every affine `y ∈ D` with `t(y) > 2`, for maximal sets.
pub fn conjecture_s_equals_t(u: &AffinePointSet) -> Result<Verdict> {
    let st = Statement::ConjectureSEqualsT;
    let f = u.field();
    if u.len() > f.order() as usize {
        return Ok(Verdict::inapplicable(st, "|U| > q"));
    }
    let d = directions_of(u);
    if d.is_empty() {
        return Ok(Verdict::inapplicable(st, "no determined direction"));
    }
    if !is_maximal(u) {
        return Ok(Verdict::inapplicable(st, "U is not maximal"));
    }
    let sys = divide_xq(u)?;
    let alg = t_of_set(&sys, &d)?;
    let geo = s_of_set(u)?;
    let mut v = Verdict::new(st);
    for a in alg.per_direction.iter().filter(|a| a.t > 2) {
        let sy = geo.s_at(Direction::Slope(a.y));
        v.push(Check::int(format!("t({0}) = s({0})", a.y), a.t as i64, Relation::Eq, sy as i64));
    }
    if v.checks.is_empty() {
        v.note("no affine direction with t(y) > 2");
    }
    if alg.infinity_excluded {
        v.note("y = ∞ is not covered");
    }
    Ok(v)
}

/// Maximal sets with `t = s > 2` are GF(s)-linear.
pub fn conjecture_linearity(u: &AffinePointSet) -> Result<Verdict> {
    let st = Statement::ConjectureLinearity;
    let f = u.field();
    if u.len() > f.order() as usize {
        return Ok(Verdict::inapplicable(st, "|U| > q"));
    }
    let d = directions_of(u);
    if d.is_empty() {
        return Ok(Verdict::inapplicable(st, "no determined direction"));
    }
    let sys = divide_xq(u)?;
    let t = t_of_set(&sys, &d)?.t;
    let s = s_of_set(u)?.s;
    if !(s == t && s > 2) {
        return Ok(Verdict::inapplicable(st, format!("needs s = t > 2, got s = {s}, t = {t}")));
    }
    if !is_maximal(u) {
        return Ok(Verdict::inapplicable(st, "U is not maximal"));
    }
    let mut v = Verdict::new(st);
    if f.subfield_degree(s).is_none() {
        v.push(Check::truth("GF(s) is a subfield of GF(q)", false));
        return Ok(v);
    }
    let witness = is_gf_s_linear(u, s)?;
    v.push(Check::truth("U is GF(s)-linear", witness.is_some()));
    if let Some(w) = witness {
        let gens: Vec<String> =
            w.generators.iter().map(|g| format!("({}, {})", g[0], g[1])).collect();
        v.note(format!("generators {}", gens.join(" ")));
    }
    Ok(v)
}

/// Image of a set under the subfield embedding `GF(q) ⊂ GF(Q)`.
pub fn embed_set(u: &AffinePointSet, big: &Field) -> Result<AffinePointSet> {
    let sub = big.subfield(u.field().order())?;
    AffinePointSet::new(big, u.points().iter().map(|p| AffinePoint::new(sub.embed(p.a), sub.embed(p.b))))
}

/// A `q`-set with `s = 1` and `∞ ∉ D`, embedded in a plane over an
/// extension field.
#[derive(Clone, Debug, Serialize)]
pub struct NonLinearMaximal {
    pub q: u32,
    pub big_q: u32,
    pub points: Vec<u32>,
    pub d_size: usize,
    pub s: u32,
    pub maximal_small: bool,
    pub maximal_big: bool,
    /// `(s, linear over GF(s))` for every subfield of the big field with `s > 1`.
    pub linear_over: Vec<(u32, bool)>,
    pub holds: bool,
}

/// A GF(s)-linear set with more than `s^i` points inside a subplane
/// `AG(2,s^i)` of `AG(2,s^(ij))`.
#[derive(Clone, Debug, Serialize)]
pub struct NonMaximalLinear {
    pub s: u32,
    pub i: u32,
    pub j: u32,
    pub points: Vec<u32>,
    pub d_size: usize,
    pub same_directions_as_subplane: bool,
    pub maximal: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalityExamples {
    pub non_linear_maximal: Vec<NonLinearMaximal>,
    pub non_maximal_linear: Vec<NonMaximalLinear>,
}

impl MaximalityExamples {
    pub fn holds(&self) -> bool {
        self.non_linear_maximal.iter().all(|e| e.holds) && self.non_maximal_linear.iter().all(|e| e.holds)
    }
}

/// First `q`-subset in codec order with `∞ ∉ D`, `s = 1` and
/// `|D| ≥ (q+3)/2`.
pub fn find_non_linear_q_set(f: &Field) -> Result<Option<AffinePointSet>> {
    let q = f.order() as usize;
    let total = (q * q) as u32;
    let mut idx: Vec<u32> = (0..q as u32).collect();
    loop {
        let u = AffinePointSet::from_codecs(f, &idx)?;
        let d = directions_of(&u);
        if !d.contains(&Direction::Infinity) && 2 * d.len() >= q + 3 && s_of_set(&u)?.s == 1 {
            return Ok(Some(u));
        }
        // next combination
        let mut i = q;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] < total - (q - i) as u32 {
                break;
            }
        }
        idx[i] += 1;
        for k in i + 1..q {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

fn non_linear_maximal(p: u32, h: u32, m: u32) -> Result<NonLinearMaximal> {
    let small = Field::new(p, h)?;
    let big = Field::new(p, h * m)?;
    let u = find_non_linear_q_set(&small)?
        .ok_or_else(|| Error::Soundness(format!("no q-set with s = 1 in AG(2,{})", small.order())))?;
    let s = s_of_set(&u)?.s;
    let maximal_small = is_maximal(&u);
    let ub = embed_set(&u, &big)?;
    let maximal_big = is_maximal(&ub);
    let mut linear_over = Vec::new();
    for sub in big.subfields().into_iter().filter(|s| s.order > 1) {
        linear_over.push((sub.order, is_gf_s_linear(&ub, sub.order)?.is_some()));
    }
    let d_size = directions_of(&ub).len();
    let holds = s == 1 && maximal_small && maximal_big && linear_over.iter().all(|(_, l)| !l);
    Ok(NonLinearMaximal {
        q: small.order(),
        big_q: big.order(),
        points: ub.codecs(),
        d_size,
        s,
        maximal_small,
        maximal_big,
        linear_over,
        holds,
    })
}

/// The rank-`(i+1)` set spanned by `e_1`, `e_2`, and `g·e_1, ..., g^(i-1)·e_1`
/// over GF(s), where `g` generates `GF(s^i)`: all of `GF(s^i) × GF(s)`.
fn non_maximal_linear(p: u32, e: u32, i: u32, j: u32) -> Result<NonMaximalLinear> {
    let s = p.pow(e);
    let mid = Field::new(p, e * i)?;
    let big = Field::new(p, e * i * j)?;
    let emb = big.subfield(mid.order())?;
    let g = emb.embed(mid.primitive_element());
    let mut gens = vec![vec![Gf::ONE, Gf::ZERO], vec![Gf::ZERO, Gf::ONE]];
    for k in 1..i {
        gens.push(vec![big.pow(g, k as u64), Gf::ZERO]);
    }
    let spec = AffineLinearSpec::new(&big, s, gens, vec![Gf::ZERO, Gf::ZERO])?;
    let u = build_affine_linear(&spec)?;
    let plane = AffinePointSet::new(
        &big,
        mid.elements().flat_map(|a| mid.elements().map(move |b| (a, b))).map(|(a, b)| AffinePoint::new(emb.embed(a), emb.embed(b))),
    )?;
    let du = directions_of(&u);
    let same = du == directions_of(&plane);
    let maximal = is_maximal(&u);
    let holds = u.len() > mid.order() as usize && same && !maximal;
    Ok(NonMaximalLinear { s, i, j, points: u.codecs(), d_size: du.len(), same_directions_as_subplane: same, maximal, holds })
}

/// Builds both examples: non-linear maximal `q`-sets for `q ∈ {4, 5}`
/// embedded in `AG(2,q^2)`, and the rank-3 GF(2)-linear set inside
/// `AG(2,4) ⊂ AG(2,16)`.
pub fn reproduce_maximality_examples() -> Result<MaximalityExamples> {
    Ok(MaximalityExamples {
        non_linear_maximal: vec![non_linear_maximal(2, 2, 2)?, non_linear_maximal(5, 1, 2)?],
        non_maximal_linear: vec![non_maximal_linear(2, 1, 2, 2)?],
    })
}
