//! The Rédei polynomial of a point set and the quotient/remainder pair it
//! induces on `X^q - X`.
//!
//! For `U ⊂ AG(2,q)` with `n = |U| ≤ q`:
//!
//! * `R(X,Y) = ∏_{(a,b)∈U} (X - aY + b)`, monic in `X` of degree `n`;
//! * `Q = (X^q - X) div R` over `GF(q)[Y]`;
//! * `H` is defined by `R·Q = X^q + H`, i.e. `H = -X - ((X^q - X) mod R)`.
//!
//! The algebraic invariant `t(y)` is the largest power of `p` such that
//! `H(X,y)` is a `t(y)`-th power of a polynomial outside `GF(q)[X^p]`. Only
//! affine `y` can be substituted; `t` is the minimum over the affine
//! determined directions and equals `q` when there is none, or when `H(X,y)`
//! is constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::geometry::{directions_of, s_of_set, AffinePointSet, Direction, DirectionSet, GeometricInvariants};
use crate::poly::{BiPoly, Poly};
use crate::verdict::{Check, Statement, Verdict};

/// `R(X,Y)` of a point set.
pub fn redei_polynomial(u: &AffinePointSet) -> Result<BiPoly> {
    let f = u.field();
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    if u.len() > f.order() as usize {
        return Err(Error::TooManyPoints { n: u.len(), q: f.order() });
    }
    let mut r = BiPoly::x_monomial(Gf::ONE, 0);
    for p in u.points() {
        // X + (b - a·Y)
        let factor = BiPoly::new(vec![Poly::new(vec![p.b, f.neg(p.a)]), Poly::one()]);
        r = r.mul(&factor, f);
    }
    Ok(r)
}

pub fn specialize(p: &BiPoly, y: Gf, f: &Field) -> Poly {
    p.specialize(y, f)
}

/// `R`, `Q` and `H` of a point set, with `R·Q = X^q + H`.
#[derive(Clone, Debug)]
pub struct RedeiSystem {
    field: Field,
    pub r: BiPoly,
    pub q: BiPoly,
    pub h: BiPoly,
    pub n: usize,
}

pub fn divide_xq(u: &AffinePointSet) -> Result<RedeiSystem> {
    let f = u.field();
    let order = f.order() as usize;
    let r = redei_polynomial(u)?;
    let numerator = BiPoly::from_x_poly(&Poly::x_pow_minus_x(order, f));
    let (q, rem) = numerator.divrem_monic(&r, f)?;
    let h = rem.add(&BiPoly::x_monomial(Gf::ONE, 1), f).neg(f);
    Ok(RedeiSystem { field: f.clone(), r, q, h, n: u.len() })
}

impl RedeiSystem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.field.order() as usize
    }

    /// `σ_k(Y)`: the coefficient of `X^(n-k)` in `R`.
    pub fn sigma(&self, k: usize) -> Poly {
        if k > self.n {
            return Poly::zero();
        }
        self.r.coeff(self.n - k)
    }

    /// `σ*_k(Y)`: the coefficient of `X^(q-n-k)` in `Q`.
    pub fn sigma_star(&self, k: usize) -> Poly {
        let qn = self.order() - self.n;
        if k > qn {
            return Poly::zero();
        }
        self.q.coeff(qn - k)
    }

    /// `X^q + H`.
    pub fn product(&self) -> BiPoly {
        self.h.add(&BiPoly::x_monomial(Gf::ONE, self.order()), &self.field)
    }

    /// `h_j(Y)`: the coefficient of `X^(q-j)` in `X^q + H`.
    pub fn h_coeff(&self, j: usize) -> Poly {
        if j > self.order() {
            return Poly::zero();
        }
        self.product().coeff(self.order() - j)
    }

    /// `deg_X H`, `None` when `H = 0`.
    pub fn deg_x_h(&self) -> Option<usize> {
        self.h.x_degree()
    }

    pub fn h_at(&self, y: Gf) -> Poly {
        self.h.specialize(y, &self.field)
    }

    /// `X^q + H(X,y)`.
    pub fn product_at(&self, y: Gf) -> Poly {
        self.product().specialize(y, &self.field)
    }

    /// `σ*_1..σ*_(q-n)` solved from `h_j = 0`, `σ*_0 = 1`:
    /// `σ*_j = -Σ_{i=1..j} σ_i σ*_{j-i}`.
    pub fn sigma_star_from_recurrence(&self) -> Vec<Poly> {
        let f = &self.field;
        let qn = self.order() - self.n;
        let mut out = vec![Poly::one()];
        for j in 1..=qn {
            let mut acc = Poly::zero();
            for i in 1..=j {
                acc = acc.add(&self.sigma(i).mul(&out[j - i], f), f);
            }
            out.push(acc.neg(f));
        }
        out
    }

    /// Re-derives every structural identity of the system. Any failure is a
    /// soundness alarm.
    pub fn check_invariants(&self) -> Result<()> {
        let f = &self.field;
        let q = self.order();
        let n = self.n;
        let alarm = |what: &str| Err(Error::Soundness(format!("Redei system: {what}")));
        if self.r.x_degree() != Some(n) || self.r.coeff(n) != Poly::one() {
            return alarm("R is not monic of X-degree n");
        }
        if self.q.x_degree() != Some(q - n) || self.q.coeff(q - n) != Poly::one() {
            return alarm("Q is not monic of X-degree q - n");
        }
        if self.r.mul(&self.q, f) != self.product() {
            return alarm("R·Q != X^q + H");
        }
        // The -X term keeps deg_X H at 1 when n = 1.
        if n >= 2 {
            if self.h.x_degree().is_some_and(|d| d >= n) {
                return alarm("deg_X H >= deg_X R");
            }
            if (1..=q - n).any(|i| !self.h_coeff(i).is_zero()) {
                return alarm("h_i != 0 for some 1 <= i <= q - n");
            }
        }
        for j in 0..=q {
            if self.h_coeff(j).degree().is_some_and(|d| d > j) {
                return alarm("deg h_j > j");
            }
        }
        for k in 0..=n {
            if self.sigma(k).degree().is_some_and(|d| d > k) {
                return alarm("deg σ_k > k");
            }
        }
        let mut rec = self.sigma_star_from_recurrence();
        if n == 1 {
            // the last step of the recurrence would need h_1 = 0
            rec.pop();
        }
        for (k, s) in rec.iter().enumerate() {
            if self.sigma_star(k) != *s {
                return alarm("σ* disagrees with the h_j = 0 recurrence");
            }
            if s.degree().is_some_and(|d| d > k) {
                return alarm("deg σ*_k > k");
            }
        }
        Ok(())
    }
}

/// `t(y)` with the root `f_y`; `f_y` is `None` when `H(X,y)` is constant
/// (then `t(y) = q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub t: u32,
    pub f_y: Option<Poly>,
}

/// `t(y)` for an affine determined direction. Errors when `H(X,y) = -X`,
/// which happens exactly for undetermined `y`.
pub fn t_of_direction(sys: &RedeiSystem, y: Gf) -> Result<PowerDecomposition> {
    let f = &sys.field;
    let q = f.order();
    let p = f.characteristic();
    let hy = sys.h_at(y);
    if hy == Poly::x().neg(f) {
        return Err(Error::UndeterminedDirection(y.to_string()));
    }
    if hy.is_constant() {
        return Ok(PowerDecomposition { t: q, f_y: None });
    }
    let deg = hy.degree().expect("non-constant");
    let mut tau = 1u32;
    while (tau as usize) * (p as usize) <= deg {
        tau *= p;
    }
    while tau >= 1 {
        if hy.in_power_ring(tau as usize) {
            // coefficient-wise tau-th root: c -> c^(q/tau)
            let root_exp = (q / tau) as u64;
            let coeffs: Vec<Gf> = (0..=deg / tau as usize).map(|k| f.pow(hy.coeff(k * tau as usize), root_exp)).collect();
            let fy = Poly::new(coeffs);
            if !fy.in_power_ring(p as usize) {
                if fy.pow(tau as u64, f) != hy {
                    return Err(Error::Soundness(format!("f_y^{tau} != H(X,{y})")));
                }
                return Ok(PowerDecomposition { t: tau, f_y: Some(fy) });
            }
        }
        if tau == 1 {
            break;
        }
        tau /= p;
    }
    Err(Error::Soundness(format!("no admissible power decomposition of H(X,{y})")))
}

/// Number of roots of `X^q + H(X,y)` in GF(q), with multiplicity.
pub fn kappa(sys: &RedeiSystem, y: Gf) -> usize {
    sys.product_at(y).count_roots(&sys.field)
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionAlgebra {
    pub y: Gf,
    pub t: u32,
    /// Sparse text of `f_y`, absent when `H(X,y)` is constant.
    pub f_y: Option<String>,
    #[serde(skip)]
    pub f_y_poly: Option<Poly>,
    pub kappa: usize,
    /// `deg_X H(X,y)`; `None` for `H(X,y) = 0`.
    pub deg_h_y: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicInvariants {
    /// One entry per affine determined direction, ascending.
    pub per_direction: Vec<DirectionAlgebra>,
    pub t: u32,
    pub deg_x_h: Option<usize>,
    /// `∞ ∈ D`: it is excluded from the minimum defining `t`.
    pub infinity_excluded: bool,
}

impl AlgebraicInvariants {
    pub fn at(&self, y: Gf) -> Option<&DirectionAlgebra> {
        self.per_direction.iter().find(|d| d.y == y)
    }
}

pub fn t_of_set(sys: &RedeiSystem, d: &DirectionSet) -> Result<AlgebraicInvariants> {
    if d.is_empty() {
        return Err(Error::NoDirections);
    }
    let f = &sys.field;
    let mut per_direction = Vec::new();
    for y in d.iter().filter_map(Direction::slope) {
        let dec = t_of_direction(sys, y)?;
        per_direction.push(DirectionAlgebra {
            y,
            t: dec.t,
            f_y: dec.f_y.as_ref().map(|p| p.to_text("X")),
            f_y_poly: dec.f_y,
            kappa: kappa(sys, y),
            deg_h_y: sys.h_at(y).degree(),
        });
    }
    let t = per_direction.iter().map(|d| d.t).min().unwrap_or(f.order());
    Ok(AlgebraicInvariants {
        per_direction,
        t,
        deg_x_h: sys.deg_x_h(),
        infinity_excluded: d.contains(&Direction::Infinity),
    })
}

/// Geometric and algebraic invariants of one set side by side.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub directions: DirectionSet,
    pub geometric: GeometricInvariants,
    pub algebraic: AlgebraicInvariants,
    pub s: u32,
    pub t: u32,
    pub deg_x_h: Option<usize>,
    /// `s(y) ≤ t(y)` for every affine determined `y`, and `s ≤ t`.
    pub s_le_t: bool,
}

pub fn invariants(u: &AffinePointSet) -> Result<InvariantReport> {
    let d = directions_of(u);
    let geometric = s_of_set(u)?;
    let sys = divide_xq(u)?;
    let algebraic = t_of_set(&sys, &d)?;
    let s_le_t = geometric.s <= algebraic.t
        && algebraic.per_direction.iter().all(|a| geometric.s_at(Direction::Slope(a.y)) <= a.t);
    Ok(InvariantReport {
        n: u.len(),
        s: geometric.s,
        t: algebraic.t,
        deg_x_h: algebraic.deg_x_h,
        directions: d,
        geometric,
        algebraic,
        s_le_t,
    })
}

/// `R(X,y) ∈ GF(q)[X^s(y)] \ GF(q)[X^(p·s(y))]` for determined `y`, and
/// `R(X,y) | X^q - X` otherwise.
pub fn check_r_structure(u: &AffinePointSet, y: Direction) -> Result<Verdict> {
    let f = u.field();
    let mut v = Verdict::new(Statement::RedeiStructure);
    let Direction::Slope(yv) = y else {
        return Ok(Verdict::inapplicable(Statement::RedeiStructure, "∞ cannot be substituted for Y"));
    };
    let r = redei_polynomial(u)?;
    let ry = r.specialize(yv, f);
    let d = directions_of(u);
    if d.contains(&y) {
        let sy = crate::geometry::s_of_direction(u, y)? as usize;
        let p = f.characteristic() as usize;
        v.case = Some(1);
        v.push(Check::truth(format!("R(X,{y}) in GF(q)[X^{sy}]"), ry.in_power_ring(sy)));
        v.push(Check::truth(format!("R(X,{y}) not in GF(q)[X^{}]", p * sy), !ry.in_power_ring(p * sy)));
    } else {
        v.case = Some(2);
        let (_, rem) = Poly::x_pow_minus_x(f.order() as usize, f).divrem(&ry, f)?;
        v.push(Check::truth(format!("R(X,{y}) divides X^q - X"), rem.is_zero()));
    }
    Ok(v)
}

/// Membership of `Q(X,y)` and `H(X,y)` in `GF(q)[X^s(y)]` for every affine
/// determined `y` (plus `Q(X,y) ∉ GF(q)[X^(p·s(y))]` when `deg R ≤ deg Q`),
/// and `R·Q = X^q - X` with `Q(X,y)` totally reducible for every affine
/// undetermined `y`.
pub fn check_prop_es(u: &AffinePointSet) -> Result<Verdict> {
    if u.is_empty() {
        return Ok(Verdict::inapplicable(Statement::QuotientStructure, "empty set"));
    }
    let f = u.field();
    if u.len() > f.order() as usize {
        return Ok(Verdict::inapplicable(Statement::QuotientStructure, "|U| > q"));
    }
    let sys = divide_xq(u)?;
    let d = directions_of(u);
    let p = f.characteristic() as usize;
    let order = f.order() as usize;
    let xq_minus_x = Poly::x_pow_minus_x(order, f);
    let mut v = Verdict::new(Statement::QuotientStructure);
    for y in f.elements() {
        let dir = Direction::Slope(y);
        let qy = sys.q.specialize(y, f);
        if d.contains(&dir) {
            let sy = crate::geometry::s_of_direction(u, dir)? as usize;
            v.push(Check::truth(format!("Q(X,{y}) in GF(q)[X^{sy}]"), qy.in_power_ring(sy)));
            v.push(Check::truth(format!("H(X,{y}) in GF(q)[X^{sy}]"), sys.h_at(y).in_power_ring(sy)));
            if sys.n <= order - sys.n {
                v.push(Check::truth(format!("Q(X,{y}) not in GF(q)[X^{}]", p * sy), !qy.in_power_ring(p * sy)));
            }
        } else {
            let ry = sys.r.specialize(y, f);
            v.push(Check::truth(format!("R(X,{y})Q(X,{y}) = X^q - X"), ry.mul(&qy, f) == xq_minus_x));
            let distinct_roots = f.elements().filter(|&x| qy.eval(x, f).is_zero()).count();
            v.push(Check::truth(
                format!("Q(X,{y}) totally reducible"),
                qy.degree() == Some(distinct_roots),
            ));
        }
    }
    Ok(v)
}

/// Every `X`-exponent of `X^q + H(X,Y)` lies in `{0, 1} ∪ tℤ`.
pub fn check_prop_lin(sys: &RedeiSystem, t: u32) -> Verdict {
    let mut v = Verdict::new(Statement::SpanStructure);
    let prod = sys.product();
    let bad: Vec<usize> = prod
        .x_coeffs()
        .iter()
        .enumerate()
        .filter(|(i, c)| !c.is_zero() && *i > 1 && *i % t as usize != 0)
        .map(|(i, _)| i)
        .collect();
    v.push(Check::truth(format!("X-exponents of X^q + H in {{0,1}} ∪ {t}Z"), bad.is_empty()));
    if !bad.is_empty() {
        v.note(format!("offending exponents: {bad:?}"));
    }
    v
}
