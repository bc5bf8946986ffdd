//! Exact arithmetic in GF(p^h).
//!
//! Elements are stored as their integer codec: the base-`p` digits of the
//! codec are the coefficients of the element in the polynomial basis
//! `1, X, ..., X^(h-1)` modulo the field's modulus, least significant digit
//! first. The modulus is the lexicographically smallest monic irreducible of
//! degree `h` (coefficients compared from the constant term upwards), so a
//! given `(p, h)` always yields the same field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_MAX: u32 = 1024;

/// A field element in integer-codec form.
///
/// A bare `Gf` does not know its field; every operation goes through a
/// [`Field`]. Use [`FieldElement`] when the owning field must travel with
/// the value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn codec(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1), g the least primitive element.
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

/// The finite field GF(p^h). Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.h == other.inner.h)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.h)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.inner.p, self.inner.h)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in ascending order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) as low-first coefficient vectors; only used while
// building a field.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo a nonzero `m` over GF(p).
fn rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn digits_of(mut k: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (k % p as u64) as u32;
        k /= p as u64;
    }
    out
}

fn is_irreducible_mod_p(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut cand = digits_of(k, p, d);
            cand.push(1);
            if rem_mod_p(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `h` over GF(p),
/// coefficient tuples compared from the constant term upwards.
pub fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    let total = (p as u64).pow(h);
    for k in 0..total {
        // constant term is the most significant position of the scan order
        let mut coeffs = digits_of(k, p, h as usize);
        coeffs.reverse();
        coeffs.push(1);
        if h == 1 || (coeffs[0] != 0 && is_irreducible_mod_p(&coeffs, p)) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn slow_mul(a: u32, b: u32, p: u32, h: usize, modulus: &[u32]) -> u32 {
    let da = digits_of(a as u64, p, h);
    let db = digits_of(b as u64, p, h);
    let mut prod = vec![0u64; 2 * h];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let r = rem_mod_p(&prod, modulus, p);
    let mut code = 0u64;
    for &c in r.iter().rev() {
        code = code * p as u64 + c as u64;
    }
    code as u32
}

fn slow_pow(a: u32, mut e: u64, p: u32, h: usize, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(acc, base, p, h, modulus);
        }
        base = slow_mul(base, base, p, h, modulus);
        e >>= 1;
    }
    acc
}

fn digit_add(a: u32, b: u32, p: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 || b > 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(a: u32, p: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let mut a = a;
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 {
        let d = (p - a % p) % p;
        out += d * place;
        place *= p;
        a /= p;
    }
    out
}

impl Field {
    /// GF(p^h) with the default order bound.
    pub fn new(p: u32, h: u32) -> Result<Field> {
        Field::with_max_order(p, h, DEFAULT_MAX_ORDER)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Field> {
        let p = (2..=q).find(|d| q % d == 0).ok_or(Error::NotPrime(q as u64))?;
        let (mut rest, mut h) = (q, 0);
        while rest % p == 0 {
            rest /= p;
            h += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidSpec(format!("{q} is not a prime power")));
        }
        Field::new(p, h)
    }

    pub fn with_max_order(p: u32, h: u32, max_order: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h < 1 {
            return Err(Error::InvalidDegree(h));
        }
        let q = (p as u64).checked_pow(h).filter(|&q| q <= max_order.min(u32::MAX as u64));
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::OrderTooLarge { p, h, max: max_order }),
        };
        let modulus = smallest_irreducible(p, h);
        let hu = h as usize;

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let is_primitive = |g: u32| factors.iter().all(|&r| slow_pow(g, order / r, p, hu, &modulus) != 1);
        let generator = if q == 2 {
            1
        } else {
            (2..q).find(|&g| is_primitive(g)).expect("GF(q)* is cyclic")
        };

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator, p, hu, &modulus);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }

        let neg: Vec<u32> = (0..q).map(|a| digit_neg(a, p)).collect();
        let add = if q <= ADD_TABLE_MAX {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p);
                }
            }
            t
        } else {
            Vec::new()
        };

        Ok(Field {
            inner: Arc::new(Inner { p, h, q, modulus, exp, log, add, neg }),
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.h
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Coefficients of the modulus over GF(p), constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// All elements in ascending codec order (0 first, 1 second).
    pub fn elements(&self) -> impl Iterator<Item = Gf> + Clone {
        (0..self.inner.q).map(Gf)
    }

    pub fn element(&self, codec: u32) -> Result<FieldElement> {
        Ok(FieldElement { field: self.clone(), value: self.check(codec)? })
    }

    /// Validates an integer codec.
    pub fn check(&self, codec: u32) -> Result<Gf> {
        if codec < self.inner.q {
            Ok(Gf(codec))
        } else {
            Err(Error::CodecOutOfRange { codec: codec as u64, q: self.inner.q })
        }
    }

    /// The least-codec generator of the multiplicative group.
    pub fn primitive_element(&self) -> Gf {
        if self.inner.q == 2 {
            Gf::ONE
        } else {
            Gf(self.inner.exp[1])
        }
    }

    /// Polynomial-basis coefficients of `a`, constant first.
    pub fn digits(&self, a: Gf) -> Vec<u32> {
        digits_of(a.0 as u64, self.inner.p, self.inner.h as usize)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Gf> {
        if digits.len() != self.inner.h as usize || digits.iter().any(|&d| d >= self.inner.p) {
            return Err(Error::Malformed(format!("bad digit vector {digits:?} for GF({self:?})")));
        }
        let code = digits.iter().rev().fold(0u32, |acc, &d| acc * self.inner.p + d);
        Ok(Gf(code))
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.inner.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        let inner = &*self.inner;
        if inner.p == 2 {
            Gf(a.0 ^ b.0)
        } else if !inner.add.is_empty() {
            Gf(inner.add[(a.0 * inner.q + b.0) as usize])
        } else {
            Gf(digit_add(a.0, b.0, inner.p))
        }
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        Gf(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        let inner = &*self.inner;
        Gf(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        let n = inner.q - 1;
        Ok(Gf(inner.exp[((n - inner.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let inner = &*self.inner;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64 * (e % n) % n;
        Gf(inner.exp[l as usize])
    }

    /// Multiplies by a nonnegative integer (repeated addition).
    pub fn mul_int(&self, a: Gf, n: u64) -> Gf {
        self.mul(a, self.from_int((n % self.inner.p as u64) as i64))
    }

    /// `a ∈ GF(s)` for a subfield order `s`, i.e. `a^s = a`.
    pub fn in_subfield(&self, a: Gf, s: u32) -> bool {
        self.pow(a, s as u64) == a
    }

    /// `log_p` of `s` when `s` is the order of a subfield of this field.
    pub fn subfield_degree(&self, s: u32) -> Option<u32> {
        let p = self.inner.p;
        let mut e = 0u32;
        let mut x = 1u64;
        while x < s as u64 {
            x *= p as u64;
            e += 1;
        }
        (x == s as u64 && e >= 1 && self.inner.h % e == 0).then_some(e)
    }

    /// One entry per divisor `e` of `h`, in ascending order.
    pub fn subfields(&self) -> Vec<Subfield> {
        (1..=self.inner.h)
            .filter(|e| self.inner.h % e == 0)
            .map(|e| self.subfield_of_degree(e).expect("divisor of h"))
            .collect()
    }

    /// The subfield of order `s`.
    pub fn subfield(&self, s: u32) -> Result<Subfield> {
        let e = self.subfield_degree(s).ok_or(Error::NotSubfield { s, q: self.order() })?;
        self.subfield_of_degree(e)
    }

    fn subfield_of_degree(&self, e: u32) -> Result<Subfield> {
        let p = self.inner.p;
        let s = p.pow(e);
        let elements: Vec<Gf> = self.elements().filter(|&a| self.in_subfield(a, s)).collect();
        let small = Field::new(p, e)?;
        let embedding = if e == self.inner.h {
            self.elements().collect()
        } else {
            // A root of the small field's modulus inside the fixed field.
            let m = small.modulus();
            let root = elements
                .iter()
                .copied()
                .find(|&b| {
                    let mut acc = Gf::ZERO;
                    for &c in m.iter().rev() {
                        acc = self.add(self.mul(acc, b), Gf(c));
                    }
                    acc.is_zero()
                })
                .expect("subfield modulus splits in the fixed field");
            small
                .elements()
                .map(|x| {
                    let mut acc = Gf::ZERO;
                    for &c in small.digits(x).iter().rev() {
                        acc = self.add(self.mul(acc, root), Gf(c));
                    }
                    acc
                })
                .collect()
        };
        Ok(Subfield { order: s, degree: e, elements, small, embedding })
    }
}

/// A subfield GF(p^e) of a field, as a fixed field of the `p^e`-Frobenius.
#[derive(Clone, Debug)]
pub struct Subfield {
    pub order: u32,
    pub degree: u32,
    /// Members in ascending codec order of the big field.
    pub elements: Vec<Gf>,
    /// GF(p^e) built standalone.
    pub small: Field,
    embedding: Vec<Gf>,
}

impl Subfield {
    /// Image of a standalone GF(p^e) element in the big field.
    pub fn embed(&self, a: Gf) -> Gf {
        self.embedding[a.0 as usize]
    }
}

/// A field element bundled with its field; mixing fields is an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Gf,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Gf {
        self.value
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: Gf) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli() {
        assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // X^2 + 1: -1 is a non-residue mod 3
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // (1,0,1) < (1,1,0) low-degree-first, so X^3 + X^2 + 1
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_first_irreducible_in_scan() {
        // independent scan: a monic quadratic is irreducible iff it has no root
        let mut first = None;
        'outer: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(Field::new(3, 2).unwrap().modulus(), first.unwrap().as_slice());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(2, 0), Err(Error::InvalidDegree(0))));
        assert!(matches!(Field::new(2, 21), Err(Error::OrderTooLarge { .. })));
        assert!(Field::with_max_order(2, 21, 1 << 21).is_ok());
    }

    #[test]
    fn small_identities() {
        let f4 = Field::new(2, 2).unwrap();
        let w = Gf(2);
        assert_eq!(f4.mul(w, w), Gf(3));
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.inv(Gf(2)).unwrap(), Gf(3));
        assert_eq!(f5.pow(Gf::ZERO, 0), Gf::ONE);
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements().skip(1) {
            assert_eq!(f9.pow(a, 8), Gf::ONE);
        }
        assert!(matches!(f9.inv(Gf::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn subfield_lattice() {
        let f4 = Field::new(2, 2).unwrap();
        let orders: Vec<u32> = f4.subfields().iter().map(|s| s.order).collect();
        assert_eq!(orders, vec![2, 4]);
        let f64 = Field::new(2, 6).unwrap();
        let orders: Vec<u32> = f64.subfields().iter().map(|s| s.order).collect();
        assert_eq!(orders, vec![2, 4, 8, 64]);
        let f16 = Field::new(2, 4).unwrap();
        assert_eq!(f16.elements().filter(|&a| f16.pow(a, 4) == a).count(), 4);
        assert!(f16.subfield(8).is_err());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for (p, h, e) in [(2, 4, 2), (3, 2, 1), (2, 6, 3), (2, 6, 2), (3, 4, 2)] {
            let big = Field::new(p, h).unwrap();
            let sub = big.subfield(p.pow(e)).unwrap();
            let small = &sub.small;
            for a in small.elements() {
                assert!(sub.elements.contains(&sub.embed(a)));
                for b in small.elements() {
                    assert_eq!(sub.embed(small.add(a, b)), big.add(sub.embed(a), sub.embed(b)));
                    assert_eq!(sub.embed(small.mul(a, b)), big.mul(sub.embed(a), sub.embed(b)));
                }
            }
        }
    }

    #[test]
    fn field_elements_refuse_mixing() {
        let f4 = Field::new(2, 2).unwrap();
        let f8 = Field::new(2, 3).unwrap();
        let a = f4.element(3).unwrap();
        let b = f8.element(3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch)));
        assert_eq!(a.mul(&a).unwrap().value(), Gf(2));
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(3, 7).unwrap();
        assert!(f.order() > ADD_TABLE_MAX);
        let a = Gf(1234);
        let b = Gf(777);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
    }
}
