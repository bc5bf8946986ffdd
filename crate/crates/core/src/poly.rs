//! Dense univariate polynomials over GF(q) and polynomials in `X` whose
//! coefficients are polynomials in `Y`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};

/// Univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Gf::ONE)
    }

    pub fn constant(c: Gf) -> Poly {
        Poly::new(vec![c])
    }

    pub fn x() -> Poly {
        Poly::monomial(Gf::ONE, 1)
    }

    pub fn monomial(c: Gf, deg: usize) -> Poly {
        let mut coeffs = vec![Gf::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Gf>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    /// Whether the polynomial lies in `F[X^m]`.
    pub fn in_power_ring(&self, m: usize) -> bool {
        self.support().all(|i| i % m == 0)
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Gf, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, divisor: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Gf::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            quot[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn eval(&self, x: Gf, f: &Field) -> Gf {
        self.coeffs.iter().rev().fold(Gf::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul_int(c, i as u64)).collect())
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lead()).expect("nonzero lead");
        self.scale(inv, f)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Multiplicity of `x` as a root (0 if not a root). Zero polynomial
    /// has no meaningful multiplicity and returns 0.
    pub fn root_multiplicity(&self, x: Gf, f: &Field) -> usize {
        if self.is_zero() {
            return 0;
        }
        let mut cur = self.coeffs.clone();
        let mut mult = 0;
        loop {
            // synthetic division by (X - x)
            let n = cur.len();
            if n < 2 {
                return mult;
            }
            let mut quot = vec![Gf::ZERO; n - 1];
            let mut acc = Gf::ZERO;
            for i in (0..n).rev() {
                acc = f.add(f.mul(acc, x), cur[i]);
                if i > 0 {
                    quot[i - 1] = acc;
                }
            }
            if !acc.is_zero() {
                return mult;
            }
            mult += 1;
            cur = quot;
        }
    }

    /// Roots in GF(q) counted with multiplicity.
    pub fn count_roots(&self, f: &Field) -> usize {
        f.elements().map(|x| self.root_multiplicity(x, f)).sum()
    }

    /// `X^n - X`.
    pub fn x_pow_minus_x(n: usize, f: &Field) -> Poly {
        let mut c = vec![Gf::ZERO; n + 1];
        c[n] = Gf::ONE;
        c[1] = f.sub(c[1], Gf::ONE);
        Poly::new(c)
    }

    /// Sparse text form `c X^i` with integer codecs, highest degree first.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for i in self.support().collect::<Vec<_>>().into_iter().rev() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = write!(out, "{} {}^{}", self.coeffs[i], var, i);
        }
        out
    }
}

/// Polynomial in `X` over `GF(q)[Y]`; `x_coeffs[i]` multiplies `X^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    x_coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly { x_coeffs: Vec::new() }
    }

    pub fn new(mut x_coeffs: Vec<Poly>) -> BiPoly {
        while x_coeffs.last().is_some_and(|c| c.is_zero()) {
            x_coeffs.pop();
        }
        BiPoly { x_coeffs }
    }

    /// `X^i` with a constant coefficient.
    pub fn x_monomial(c: Gf, i: usize) -> BiPoly {
        let mut v = vec![Poly::zero(); i + 1];
        v[i] = Poly::constant(c);
        BiPoly::new(v)
    }

    /// Lifts a polynomial in `X` with constant coefficients.
    pub fn from_x_poly(p: &Poly) -> BiPoly {
        BiPoly::new(p.coeffs().iter().map(|&c| Poly::constant(c)).collect())
    }

    pub fn x_coeffs(&self) -> &[Poly] {
        &self.x_coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.x_coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.x_coeffs.is_empty()
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.x_coeffs.len().checked_sub(1)
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.x_coeffs.iter().filter_map(Poly::degree).max()
    }

    pub fn add(&self, other: &BiPoly, f: &Field) -> BiPoly {
        let n = self.x_coeffs.len().max(other.x_coeffs.len());
        BiPoly::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i), f)).collect())
    }

    pub fn sub(&self, other: &BiPoly, f: &Field) -> BiPoly {
        let n = self.x_coeffs.len().max(other.x_coeffs.len());
        BiPoly::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i), f)).collect())
    }

    pub fn neg(&self, f: &Field) -> BiPoly {
        BiPoly::new(self.x_coeffs.iter().map(|c| c.neg(f)).collect())
    }

    pub fn mul(&self, other: &BiPoly, f: &Field) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.x_coeffs.len() + other.x_coeffs.len() - 1];
        for (i, a) in self.x_coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.x_coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b, f), f);
            }
        }
        BiPoly::new(out)
    }

    /// Division by a divisor that is monic in `X`; exact over `GF(q)[Y]`.
    pub fn divrem_monic(&self, divisor: &BiPoly, f: &Field) -> Result<(BiPoly, BiPoly)> {
        let dd = divisor.x_degree().ok_or(Error::DivisionByZero)?;
        if divisor.x_coeffs[dd] != Poly::one() {
            return Err(Error::Malformed("divisor is not monic in X".into()));
        }
        let mut rem = self.x_coeffs.clone();
        if rem.len() <= dd {
            return Ok((BiPoly::zero(), self.clone()));
        }
        let mut quot = vec![Poly::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[top]);
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            for (i, d) in divisor.x_coeffs.iter().enumerate().take(dd) {
                if !d.is_zero() {
                    rem[shift + i] = rem[shift + i].sub(&c.mul(d, f), f);
                }
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        Ok((BiPoly::new(quot), BiPoly::new(rem)))
    }

    /// Substitutes `Y = y`.
    pub fn specialize(&self, y: Gf, f: &Field) -> Poly {
        Poly::new(self.x_coeffs.iter().map(|c| c.eval(y, f)).collect())
    }

    /// Nonzero terms `(i, j, c)` of `c X^i Y^j`, sorted by `(i desc, j desc)`.
    pub fn terms(&self) -> Vec<(usize, usize, Gf)> {
        let mut out = Vec::new();
        for (i, c) in self.x_coeffs.iter().enumerate().rev() {
            for j in c.support().collect::<Vec<_>>().into_iter().rev() {
                out.push((i, j, c.coeff(j)));
            }
        }
        out
    }

    /// Sparse text form: `c X^i Y^j` terms joined by ` + `.
    pub fn to_text(&self) -> String {
        let terms = self.terms();
        if terms.is_empty() {
            return "0".into();
        }
        terms.iter().map(|(i, j, c)| format!("{c} X^{i} Y^{j}")).collect::<Vec<_>>().join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u32]) -> Poly {
        Poly::new(v.iter().map(|&c| Gf(c)).collect())
    }

    #[test]
    fn divrem_small() {
        let f = Field::new(2, 2).unwrap();
        // X^4 = (X^3 + X^2)(X + 1) + X^2 in characteristic 2
        let (q, r) = p(&[0, 0, 0, 0, 1]).divrem(&p(&[0, 0, 1, 1]), &f).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert_eq!(r, p(&[0, 0, 1]));
        assert!(p(&[1]).divrem(&Poly::zero(), &f).is_err());
    }

    #[test]
    fn multiplicities() {
        let f = Field::new(2, 2).unwrap();
        // X^4 + X^2 = X^2 (X+1)^2
        let g = p(&[0, 0, 1, 0, 1]);
        assert_eq!(g.root_multiplicity(Gf(0), &f), 2);
        assert_eq!(g.root_multiplicity(Gf(1), &f), 2);
        assert_eq!(g.root_multiplicity(Gf(2), &f), 0);
        assert_eq!(g.count_roots(&f), 4);
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(Poly::monomial(Gf(1), 5).count_roots(&f5), 5);
        assert_eq!(Poly::x_pow_minus_x(5, &f5).count_roots(&f5), 5);
    }

    #[test]
    fn text_forms() {
        assert_eq!(p(&[1, 0, 2]).to_text("X"), "2 X^2 + 1 X^0");
        let b = BiPoly::new(vec![Poly::zero(), p(&[0, 1, 1]), p(&[1, 1, 1])]);
        assert_eq!(b.to_text(), "1 X^2 Y^2 + 1 X^2 Y^1 + 1 X^2 Y^0 + 1 X^1 Y^2 + 1 X^1 Y^1");
        assert_eq!(BiPoly::zero().to_text(), "0");
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0..q, 0..max_len).prop_map(|v| Poly::new(v.into_iter().map(Gf).collect()))
    }

    fn arb_bipoly(q: u32) -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(arb_poly(q, 4), 0..5).prop_map(BiPoly::new)
    }

    proptest! {
        #[test]
        fn division_identity(a in arb_poly(9, 12), b in arb_poly(9, 6)) {
            let f = Field::new(3, 2).unwrap();
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b, &f).unwrap();
            prop_assert_eq!(q.mul(&b, &f).add(&r, &f), a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn specialization_commutes_with_product(a in arb_bipoly(4), b in arb_bipoly(4), y in 0u32..4) {
            let f = Field::new(2, 2).unwrap();
            let lhs = a.mul(&b, &f).specialize(Gf(y), &f);
            let rhs = a.specialize(Gf(y), &f).mul(&b.specialize(Gf(y), &f), &f);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn monic_bivariate_division(a in arb_bipoly(5), mut d in arb_bipoly(5)) {
            let f = Field::new(5, 1).unwrap();
            let mut c = d.x_coeffs().to_vec();
            c.push(Poly::one());
            d = BiPoly::new(c);
            let (q, r) = a.divrem_monic(&d, &f).unwrap();
            prop_assert_eq!(q.mul(&d, &f).add(&r, &f), a);
            prop_assert!(r.x_degree().map_or(true, |x| Some(x) < d.x_degree()));
        }
    }
}
