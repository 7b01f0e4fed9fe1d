//! Exact arithmetic in GF(p^e), including extension towers GF(q^N) over GF(q).
//!
//! Elements are stored as a packed base-p integer: the coefficient of `x^i`
//! is the i-th base-p digit. [`FieldSpec::coeffs`] and
//! [`FieldSpec::from_coeffs`] convert to and from the coefficient-vector view
//! used by the file format.
//!
//! Fields of order at most [`TABLE_LIMIT`] multiply through exp/log tables
//! built once at construction; larger fields fall back to schoolbook
//! polynomial multiplication with reduction by the modulus.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Largest field order that gets exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// A field element, packed as a base-p integer of its coefficient vector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Packed integer encoding (coefficient of `x^i` is the i-th base-p digit).
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Unchecked construction; callers guarantee `v` is below the field order.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> Elem {
        Elem(v)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    // exp has length 2(order-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Tower {
    base: FieldSpec,
    // A root of the base modulus; the image of the base generator.
    root: Elem,
}

struct Inner {
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    order: u32,
    digit_pow: Vec<u32>,
    primitive: Elem,
    tables: Option<Tables>,
    tower: Option<Tower>,
}

/// Description of GF(p^e) together with its arithmetic kernel.
///
/// Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.modulus == other.inner.modulus
                && self.base_degree() == other.base_degree())
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("degree", &self.inner.degree)
            .field("base_degree", &self.base_degree())
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, e) = (self.inner.p, self.inner.degree);
        match self.base_degree() {
            Some(b) => write!(f, "GF(({p}^{b})^{})", e / b),
            None if e == 1 => write!(f, "GF({p})"),
            None => write!(f, "GF({p}^{e})"),
        }
    }
}

/// Serialized form of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_degree: Option<u32>,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn checked_order(p: u32, e: u32) -> Result<u32, Error> {
    let mut order = 1u64;
    for _ in 0..e {
        order *= u64::from(p);
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, degree: e });
        }
    }
    Ok(order as u32)
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = (u64::from(r[top]) * u64::from(lead_inv) % u64::from(p)) as u32;
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (u64::from(factor) * u64::from(c) % u64::from(p)) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = u64::from(a) % u64::from(p);
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        exp >>= 1;
    }
    result as u32
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    if e <= 1 {
        return e == 1;
    }
    // Trial division by every monic polynomial of degree 1..=e/2.
    for d in 1..=e / 2 {
        let count = u64::from(p).pow(d as u32);
        let mut divisor = vec![0u32; d + 1];
        divisor[d] = 1;
        for v in 0..count {
            let mut rest = v;
            for c in divisor.iter_mut().take(d) {
                *c = (rest % u64::from(p)) as u32;
                rest /= u64::from(p);
            }
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn factor_distinct(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

impl FieldSpec {
    /// GF(p^e) with the smallest monic irreducible modulus of degree `e`,
    /// ordering candidates by the base-p integer of their low coefficients.
    pub fn new(p: u32, e: u32) -> Result<Self, Error> {
        let modulus = smallest_irreducible(p, e)?;
        Self::build(p, modulus, None)
    }

    /// GF(p^e) with an explicit modulus (lowest degree first, monic).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, Error> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidDegree(0));
        }
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic with coefficients below p".into()));
        }
        checked_order(p, (modulus.len() - 1) as u32)?;
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Self::build(p, modulus, None)
    }

    /// GF(q^N) with q = p^b, represented as GF(p^{bN}) with the base field
    /// embedded as the fixed points of the q-Frobenius.
    pub fn tower(p: u32, base_degree: u32, ext_degree: u32) -> Result<Self, Error> {
        if ext_degree < 1 {
            return Err(Error::InvalidDegree(ext_degree));
        }
        let e = base_degree.checked_mul(ext_degree).ok_or(Error::FieldTooLarge { p, degree: u32::MAX })?;
        let modulus = smallest_irreducible(p, e)?;
        Self::build(p, modulus, Some(base_degree))
    }

    /// Tower over an explicit modulus.
    pub fn tower_with_modulus(p: u32, modulus: Vec<u32>, base_degree: u32) -> Result<Self, Error> {
        let flat = Self::with_modulus(p, modulus)?;
        Self::build(p, flat.inner.modulus.clone(), Some(base_degree))
    }

    fn build(p: u32, modulus: Vec<u32>, base_degree: Option<u32>) -> Result<Self, Error> {
        let degree = (modulus.len() - 1) as u32;
        let order = checked_order(p, degree)?;
        let digit_pow = (0..degree).map(|i| p.pow(i)).collect();
        let mut inner = Inner { p, degree, modulus, order, digit_pow, primitive: Elem::ONE, tables: None, tower: None };
        inner.primitive = find_primitive(&inner);
        if u64::from(order) <= TABLE_LIMIT {
            let n = (order - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; order as usize];
            let mut x = Elem::ONE;
            for i in 0..n {
                exp[i] = x.0;
                exp[i + n] = x.0;
                log[x.0 as usize] = i as u32;
                x = mul_slow(&inner, x, inner.primitive);
            }
            if n == 0 {
                exp[0] = 1;
            }
            inner.tables = Some(Tables { exp, log });
        }
        let mut spec = FieldSpec { inner: Arc::new(inner) };
        if let Some(b) = base_degree {
            if b == 0 || !degree.is_multiple_of(b) {
                return Err(Error::InvalidTower { degree, base_degree: b });
            }
            let base = FieldSpec::new(p, b)?;
            let root = spec.find_subfield_root(&base)?;
            let mut inner = Arc::try_unwrap(spec.inner).unwrap_or_else(|_| unreachable!());
            inner.tower = Some(Tower { base, root });
            spec = FieldSpec { inner: Arc::new(inner) };
        }
        Ok(spec)
    }

    fn find_subfield_root(&self, base: &FieldSpec) -> Result<Elem, Error> {
        // Roots of the base modulus live in the order-q subfield, whose
        // multiplicative group is generated by g^((Q-1)/(q-1)).
        let big = u64::from(self.order()) - 1;
        let small = u64::from(base.order()) - 1;
        let gamma = self.pow(self.inner.primitive, big / small);
        if self.eval_base_poly(base.modulus(), Elem::ZERO).is_zero() {
            return Ok(Elem::ZERO);
        }
        let mut x = Elem::ONE;
        for _ in 0..small {
            if self.eval_base_poly(base.modulus(), x).is_zero() {
                return Ok(x);
            }
            x = self.mul(x, gamma);
        }
        Err(Error::InvalidTower { degree: self.degree(), base_degree: base.degree() })
    }

    fn eval_base_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), Elem(c)))
    }

    pub fn from_doc(doc: &FieldDoc) -> Result<Self, Error> {
        if doc.modulus.len() as u32 != doc.degree + 1 {
            return Err(Error::InvalidModulus(format!(
                "modulus has {} coefficients, expected {}",
                doc.modulus.len(),
                doc.degree + 1
            )));
        }
        match doc.base_degree {
            Some(b) => Self::tower_with_modulus(doc.p, doc.modulus.clone(), b),
            None => Self::with_modulus(doc.p, doc.modulus.clone()),
        }
    }

    pub fn to_doc(&self) -> FieldDoc {
        FieldDoc {
            p: self.inner.p,
            degree: self.inner.degree,
            base_degree: self.base_degree(),
            modulus: self.inner.modulus.clone(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn base_degree(&self) -> Option<u32> {
        self.inner.tower.as_ref().map(|t| t.base.degree())
    }

    /// The base field GF(q) of a tower.
    pub fn base(&self) -> Option<&FieldSpec> {
        self.inner.tower.as_ref().map(|t| &t.base)
    }

    /// Extension degree N of a tower GF(q^N) over GF(q).
    pub fn ext_degree(&self) -> Option<u32> {
        self.base_degree().map(|b| self.inner.degree / b)
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        self.inner.primitive
    }

    /// The class of `x` modulo the modulus (equals a constant when e = 1).
    pub fn generator(&self) -> Elem {
        if self.inner.degree == 1 {
            // x mod (x - c) is c.
            let c = (self.inner.p - self.inner.modulus[0]) % self.inner.p;
            Elem(c)
        } else {
            Elem(self.inner.p)
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elem(&self, value: u32) -> Result<Elem, Error> {
        if value < self.inner.order {
            Ok(Elem(value))
        } else {
            Err(Error::ElementOutOfRange { value, order: self.inner.order })
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.inner.order
    }

    /// Embeds the integer `c` through the prime subfield.
    pub fn from_int(&self, c: u64) -> Elem {
        Elem((c % u64::from(self.inner.p)) as u32)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.inner.p;
        let mut v = a.0;
        (0..self.inner.degree)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, Error> {
        if coeffs.len() != self.inner.degree as usize {
            return Err(Error::BadElementLength { got: coeffs.len(), expected: self.inner.degree as usize });
        }
        let p = self.inner.p;
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(Error::ElementOutOfRange { value: c, order: p });
            }
            v = v * p + c;
        }
        Ok(Elem(v))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.inner.order).map(Elem)
    }

    /// Uniform element; draws an integer below p^e (rejection sampling inside `gen_range`).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.inner.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.inner.order))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.inner.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.inner.degree == 1 {
            return Elem((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for &w in &self.inner.digit_pow {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.degree == 1 {
            return Elem((p - a.0) % p);
        }
        let mut x = a.0;
        let mut out = 0u32;
        for &w in &self.inner.digit_pow {
            out += ((p - x % p) % p) * w;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.inner.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => mul_slow(&self.inner, a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, Error> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.order - 1;
        Ok(match &self.inner.tables {
            Some(t) => Elem(t.exp[((n - t.log[a.0 as usize]) % n.max(1)) as usize]),
            None => self.pow(a, u64::from(n) - 1),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a^(q^j)` with q the base-field order of the tower.
    pub fn frobenius(&self, a: Elem, power: u32) -> Result<Elem, Error> {
        let b = self.base_degree().ok_or(Error::NotATower)?;
        if a.is_zero() {
            return Ok(a);
        }
        // a^(Q-1) = 1, so the exponent reduces modulo Q - 1.
        let modulo = u64::from(self.inner.order) - 1;
        if modulo == 0 {
            return Ok(a);
        }
        let q = u64::from(self.inner.p).pow(b) % modulo;
        let mut e = 1u64;
        for _ in 0..power {
            e = ((u128::from(e) * u128::from(q)) % u128::from(modulo)) as u64;
        }
        Ok(self.pow(a, e))
    }

    /// Lifts an element of the tower's base field into the tower.
    pub fn embed(&self, a: Elem, sub: &FieldSpec) -> Result<Elem, Error> {
        let tower = self.inner.tower.as_ref().ok_or(Error::NotATower)?;
        if &tower.base != sub {
            return Err(Error::IncompatibleFields);
        }
        if !sub.contains(a) {
            return Err(Error::ElementOutOfRange { value: a.0, order: sub.order() });
        }
        let coeffs = sub.coeffs(a);
        Ok(self.eval_base_poly(&coeffs, tower.root))
    }

    /// Image of the base generator under [`FieldSpec::embed`].
    pub fn embedding_root(&self) -> Option<Elem> {
        self.inner.tower.as_ref().map(|t| t.root)
    }
}

fn smallest_irreducible(p: u32, e: u32) -> Result<Vec<u32>, Error> {
    if !is_prime(u64::from(p)) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::InvalidDegree(e));
    }
    let count = checked_order(p, e)?;
    let mut modulus = vec![0u32; e as usize + 1];
    modulus[e as usize] = 1;
    for v in 0..count {
        let mut rest = v;
        for c in modulus.iter_mut().take(e as usize) {
            *c = rest % p;
            rest /= p;
        }
        if is_irreducible(&modulus, p) {
            return Ok(modulus);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn mul_slow(inner: &Inner, a: Elem, b: Elem) -> Elem {
    let p = inner.p;
    let e = inner.degree as usize;
    let digits = |mut v: u32| {
        (0..e)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect::<Vec<_>>()
    };
    let (x, y) = (digits(a.0), digits(b.0));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(xi) * u64::from(yj)) % u64::from(p);
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let rem = poly_rem(&prod, &inner.modulus, p);
    let mut v = 0u32;
    for &c in rem.iter().rev() {
        v = v * p + c;
    }
    Elem(v)
}

fn pow_slow(inner: &Inner, a: Elem, mut exp: u64) -> Elem {
    let mut base = a;
    let mut acc = Elem::ONE;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_slow(inner, acc, base);
        }
        base = mul_slow(inner, base, base);
        exp >>= 1;
    }
    acc
}

fn find_primitive(inner: &Inner) -> Elem {
    let n = u64::from(inner.order) - 1;
    if n <= 1 {
        return Elem::ONE;
    }
    let primes = factor_distinct(n);
    (2..inner.order)
        .map(Elem)
        .find(|&g| primes.iter().all(|&f| pow_slow(inner, g, n / f) != Elem::ONE))
        .expect("multiplicative group is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn prime_fields_and_quadratics() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_matches_exhaustive_scan() {
        // Oracle: a monic quadratic over GF(3) is irreducible iff it has no root.
        let mut smallest = None;
        for v in 0..9u32 {
            let (c0, c1) = (v % 3, v / 3);
            let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
            if !has_root {
                smallest = Some(vec![c0, c1, 1]);
                break;
            }
        }
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(Some(f9.modulus().to_vec()), smallest);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn conventional_binary_moduli() {
        assert_eq!(FieldSpec::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::new(2, 8).unwrap().modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::new(2, 0), Err(Error::InvalidDegree(0))));
        assert!(matches!(FieldSpec::new(2, 32), Err(Error::FieldTooLarge { .. })));
        assert!(FieldSpec::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn gf4_square_of_x() {
        let f = FieldSpec::new(2, 2).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.coeffs(f.mul(x, x)), vec![1, 1]);
    }

    #[test]
    fn gf5_inverse() {
        let f = FieldSpec::new(5, 1).unwrap();
        let two = f.from_coeffs(&[2]).unwrap();
        assert_eq!(f.coeffs(f.inv(two).unwrap()), vec![3]);
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn slow_and_table_multiplication_agree() {
        for (p, e) in [(2, 5), (3, 3), (7, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), mul_slow(&f.inner, a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(2, 21).unwrap();
        assert!(f.inner.tables.is_none());
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = f.random_nonzero(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            assert_eq!(f.mul(f.mul(a, b), f.inv(a).unwrap()), b);
        }
    }

    #[test]
    fn frobenius_basics() {
        let t = FieldSpec::tower(2, 1, 2).unwrap();
        let x = t.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(t.coeffs(t.frobenius(x, 1).unwrap()), vec![1, 1]);
        assert_eq!(t.frobenius(x, 0).unwrap(), x);
        let flat = FieldSpec::new(2, 2).unwrap();
        assert!(matches!(flat.frobenius(x, 1), Err(Error::NotATower)));
    }

    #[test]
    fn embed_prime_subfield() {
        let t = FieldSpec::tower(2, 1, 3).unwrap();
        let base = t.base().unwrap().clone();
        let one = base.from_coeffs(&[1]).unwrap();
        assert_eq!(t.coeffs(t.embed(one, &base).unwrap()), vec![1, 0, 0]);
        let other = FieldSpec::new(2, 2).unwrap();
        assert!(matches!(t.embed(one, &other), Err(Error::IncompatibleFields)));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn doc_round_trip() {
        let t = FieldSpec::tower(3, 2, 2).unwrap();
        let back = FieldSpec::from_doc(&t.to_doc()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.embedding_root(), t.embedding_root());
    }
}
