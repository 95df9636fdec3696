//! Exact arithmetic in prime fields and their extensions.
//!
//! A field of order `p^d` is realized as `F_p[x]/(m)` where `m` is the
//! lexicographically least monic irreducible polynomial of degree `d`,
//! comparing coefficient vectors constant term first. Elements are stored as
//! their canonical index `sum c_i p^i`, so enumeration order, tie-breaking and
//! serialization all come from the same integer.
//!
//! Characteristic two uses a bit-packed carry-less representation of the same
//! coefficient vector; odd characteristic unpacks into digit arrays.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on `p^d` for [`build_field`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 26;

/// Hard ceiling for any cap: products of two elements must fit in a `u64`.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

const MAX_DIGITS: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{d} exceeds the size cap {cap}")]
    TooLarge { p: u64, d: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of the field of order {found} used with the field of order {expected}")]
    Mismatch { expected: u64, found: u64 },
    #[error("index {index} out of range for a field of order {order}")]
    OutOfRange { index: u64, order: u64 },
    #[error("expected {expected} coefficients, got {found}")]
    BadLength { expected: usize, found: usize },
    #[error("cannot embed F_{p}^{sub} into F_{q}^{big}")]
    NotASubfield { p: u64, sub: u32, q: u64, big: u32 },
    #[error("no root of the subfield modulus in the field of order {0}; tables are corrupt")]
    NoRoot(u64),
}

/// `(p, d, modulus)`; the modulus is present only for `d >= 2` and lists all
/// `d + 1` coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldDescriptor {
    pub fn order(&self) -> u64 {
        self.p.pow(self.d)
    }
}

/// An element of some `F_{p^d}`, identified by its canonical index.
///
/// The field order travels with the element so mixing fields is caught; since
/// the modulus is a function of `(p, d)`, the order identifies the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u64,
    order: u64,
}

impl FieldElement {
    pub fn index(self) -> u64 {
        self.index
    }

    pub fn field_order(self) -> u64 {
        self.order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Prime,
    /// Full modulus as a bit mask, including the `x^d` bit.
    Binary { modulus: u64 },
    /// Low `d` coefficients of the monic modulus.
    Extension { low: Vec<u64> },
}

/// A constructed field: descriptor plus the tables arithmetic needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    desc: FieldDescriptor,
    order: u64,
    repr: Repr,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Builds `F_{p^d}` with the deterministic least modulus.
pub fn build_field(p: u64, d: u32, cap: u64) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if d < 1 {
        return Err(FieldError::ZeroDegree);
    }
    let cap = cap.min(MAX_FIELD_ORDER);
    let order = p
        .checked_pow(d)
        .filter(|&o| o <= cap)
        .ok_or(FieldError::TooLarge { p, d, cap })?;
    if d == 1 {
        return Ok(Field {
            desc: FieldDescriptor { p, d, modulus: None },
            order,
            repr: Repr::Prime,
        });
    }
    let modulus = least_irreducible(p, d as usize);
    Ok(Field::from_modulus(p, d, modulus, order))
}

/// Scans monic degree-`d` polynomials in constant-term-major lexicographic
/// order and returns the first irreducible one (full coefficient list).
fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    let span = p.pow(d as u32);
    let lead = p.pow(d as u32 - 1);
    // every candidate with zero constant term is divisible by x
    let mut t = lead;
    while t < span {
        let mut low = vec![0u64; d];
        let mut rest = t;
        for i in (0..d).rev() {
            low[i] = rest % p;
            rest /= p;
        }
        let mut full = low;
        full.push(1);
        if poly::is_irreducible(&full, p) {
            return full;
        }
        t += 1;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn from_modulus(p: u64, d: u32, modulus: Vec<u64>, order: u64) -> Field {
        let repr = if p == 2 {
            let bits = modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i));
            Repr::Binary { modulus: bits }
        } else {
            Repr::Extension {
                low: modulus[..d as usize].to_vec(),
            }
        };
        Field {
            desc: FieldDescriptor {
                p,
                d,
                modulus: Some(modulus),
            },
            order,
            repr,
        }
    }

    /// Rebuilds a field from a serialized descriptor, checking that it is the
    /// canonical one for its `(p, d)`.
    pub fn from_descriptor(desc: &FieldDescriptor, cap: u64) -> Result<Field, FieldError> {
        let field = build_field(desc.p, desc.d, cap)?;
        if field.desc != *desc {
            return Err(FieldError::Mismatch {
                expected: field.order,
                found: desc.order(),
            });
        }
        Ok(field)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn characteristic(&self) -> u64 {
        self.desc.p
    }

    pub fn degree(&self) -> u32 {
        self.desc.d
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The class of `x`; equals `one()` in a prime field.
    pub fn generator(&self) -> FieldElement {
        if self.desc.d == 1 {
            self.one()
        } else {
            self.wrap(self.desc.p)
        }
    }

    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index >= self.order {
            return Err(FieldError::OutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(self.wrap(index))
    }

    /// Element from a constant-term-first coefficient list; entries are
    /// reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let d = self.desc.d as usize;
        if coeffs.len() != d {
            return Err(FieldError::BadLength {
                expected: d,
                found: coeffs.len(),
            });
        }
        let p = self.desc.p;
        let index = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        Ok(self.wrap(index))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        self.check(a);
        let mut digits = [0u64; MAX_DIGITS];
        self.unpack(a.index, &mut digits);
        digits[..self.desc.d as usize].to_vec()
    }

    /// Every element, in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |i| self.wrap(i))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.add_raw(a.index, b.index))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.sub_raw(a.index, b.index))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.wrap(self.neg_raw(a.index))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.mul_raw(a.index, b.index))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        self.check(a);
        self.wrap(self.pow_raw(a.index, k))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(a)?;
        if a.index == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.wrap(self.pow_raw(a.index, self.order - 2)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(a)?;
        let inv = self.inv(b)?;
        Ok(self.wrap(self.mul_raw(a.index, inv.index)))
    }

    /// Checked binary operation; reports mismatched fields instead of
    /// panicking.
    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        self.check_same(a)?;
        self.check_same(b)?;
        match op {
            ArithOp::Add => Ok(self.wrap(self.add_raw(a.index, b.index))),
            ArithOp::Sub => Ok(self.wrap(self.sub_raw(a.index, b.index))),
            ArithOp::Mul => Ok(self.wrap(self.mul_raw(a.index, b.index))),
            ArithOp::Div => self.div(a, b),
        }
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> FieldElement {
        self.check(a);
        self.wrap(self.frobenius_raw(a.index, e))
    }

    /// Human-readable polynomial in `symbol`, e.g. `a^2 + 2*a + 1`.
    pub fn format(&self, a: FieldElement, symbol: &str) -> String {
        let coeffs = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => symbol.to_string(),
                (1, c) => format!("{c}*{symbol}"),
                (i, 1) => format!("{symbol}^{i}"),
                (i, c) => format!("{c}*{symbol}^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn wrap(&self, index: u64) -> FieldElement {
        FieldElement {
            index,
            order: self.order,
        }
    }

    fn check(&self, a: FieldElement) {
        if let Err(e) = self.check_same(a) {
            panic!("{e}");
        }
    }

    fn check_same(&self, a: FieldElement) -> Result<(), FieldError> {
        if a.order != self.order {
            return Err(FieldError::Mismatch {
                expected: self.order,
                found: a.order,
            });
        }
        Ok(())
    }

    fn unpack(&self, mut index: u64, digits: &mut [u64; MAX_DIGITS]) {
        let p = self.desc.p;
        for slot in digits.iter_mut().take(self.desc.d as usize) {
            *slot = index % p;
            index /= p;
        }
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        let p = self.desc.p;
        digits[..self.desc.d as usize]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + c)
    }

    // Raw index arithmetic. Callers guarantee indices are in range.

    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Binary { .. } => a ^ b,
            Repr::Prime => {
                let p = self.desc.p;
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            }
            Repr::Extension { .. } => {
                let p = self.desc.p;
                let (mut x, mut y) = ([0u64; MAX_DIGITS], [0u64; MAX_DIGITS]);
                self.unpack(a, &mut x);
                self.unpack(b, &mut y);
                for i in 0..self.desc.d as usize {
                    x[i] = (x[i] + y[i]) % p;
                }
                self.pack(&x)
            }
        }
    }

    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        match &self.repr {
            Repr::Binary { .. } => a,
            Repr::Prime => {
                if a == 0 {
                    0
                } else {
                    self.desc.p - a
                }
            }
            Repr::Extension { .. } => {
                let p = self.desc.p;
                let mut x = [0u64; MAX_DIGITS];
                self.unpack(a, &mut x);
                for c in x.iter_mut().take(self.desc.d as usize) {
                    *c = (p - *c) % p;
                }
                self.pack(&x)
            }
        }
    }

    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Prime => ((a as u128 * b as u128) % self.desc.p as u128) as u64,
            Repr::Binary { modulus } => {
                let d = self.desc.d;
                let mut prod = 0u64;
                let mut x = a;
                let mut y = b;
                while y != 0 {
                    if y & 1 == 1 {
                        prod ^= x;
                    }
                    x <<= 1;
                    y >>= 1;
                }
                let mut top = 2 * d;
                while top > d {
                    top -= 1;
                    if prod >> top & 1 == 1 {
                        prod ^= modulus << (top - d);
                    }
                }
                prod
            }
            Repr::Extension { low } => {
                let p = self.desc.p;
                let d = self.desc.d as usize;
                let (mut x, mut y) = ([0u64; MAX_DIGITS], [0u64; MAX_DIGITS]);
                self.unpack(a, &mut x);
                self.unpack(b, &mut y);
                let mut r = [0u64; MAX_DIGITS];
                for i in 0..d {
                    if x[i] == 0 {
                        continue;
                    }
                    for j in 0..d {
                        r[i + j] += x[i] * y[j];
                    }
                }
                for c in r.iter_mut().take(2 * d - 1) {
                    *c %= p;
                }
                for top in (d..2 * d - 1).rev() {
                    let c = r[top];
                    if c == 0 {
                        continue;
                    }
                    r[top] = 0;
                    // x^d = -sum low_j x^j
                    for (j, &m) in low.iter().enumerate() {
                        r[top - d + j] = (r[top - d + j] + c * ((p - m) % p)) % p;
                    }
                }
                self.pack(&r)
            }
        }
    }

    pub(crate) fn pow_raw(&self, a: u64, mut k: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }

    pub(crate) fn frobenius_raw(&self, a: u64, e: u32) -> u64 {
        let e = e % self.desc.d;
        let mut x = a;
        for _ in 0..e {
            x = self.pow_raw(x, self.desc.p);
        }
        x
    }
}

/// An injective ring map `F_{p^s} -> F_{p^t}` fixed by the image of the
/// source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingMap {
    source: Field,
    target: Field,
    image_of_generator: FieldElement,
    /// Images of `1, x, ..., x^(s-1)`.
    basis_images: Vec<u64>,
}

impl EmbeddingMap {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn image_of_generator(&self) -> FieldElement {
        self.image_of_generator
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        let coeffs = self.source.coeffs(a);
        let t = &self.target;
        let mut acc = 0u64;
        for (&c, &img) in coeffs.iter().zip(&self.basis_images) {
            if c != 0 {
                acc = t.add_raw(acc, t.mul_raw(c % t.desc.p, img));
            }
        }
        t.wrap(acc)
    }
}

/// Deterministic embedding: the source generator goes to the root of the
/// source modulus with least canonical index.
pub fn embed_subfield(sub: &Field, big: &Field) -> Result<EmbeddingMap, FieldError> {
    let (sd, bd) = (sub.desc.d, big.desc.d);
    if sub.desc.p != big.desc.p || bd % sd != 0 {
        return Err(FieldError::NotASubfield {
            p: sub.desc.p,
            sub: sd,
            q: big.desc.p,
            big: bd,
        });
    }
    let root = match &sub.desc.modulus {
        None => 1,
        Some(m) => (0..big.order)
            .find(|&y| {
                let v = m
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &c| big.add_raw(big.mul_raw(acc, y), c));
                v == 0
            })
            .ok_or(FieldError::NoRoot(big.order))?,
    };
    let mut basis_images = Vec::with_capacity(sd as usize);
    let mut cur = 1u64;
    for _ in 0..sd {
        basis_images.push(cur);
        cur = big.mul_raw(cur, root);
    }
    Ok(EmbeddingMap {
        source: sub.clone(),
        target: big.clone(),
        image_of_generator: big.wrap(root),
        basis_images,
    })
}

/// Dense polynomials over `F_p`, constant term first, no trailing zeros.
pub(crate) mod poly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        // p prime, a != 0
        let mut r = 1u128;
        let mut b = a as u128;
        let m = p as u128;
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            k >>= 1;
        }
        r as u64
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                let sub = c * mj % p;
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y % p) % p;
            }
        }
        rem(&r, m, p)
    }

    pub fn pow_mod(a: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, m, p);
        while k > 0 {
            if k & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            k >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or: `f` of degree `d` is irreducible iff
    /// `gcd(x^(p^i) - x, f) = 1` for `1 <= i <= d/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        let mut xp = vec![0u64, 1];
        for _ in 0..d / 2 {
            xp = pow_mod(&xp, p, f, p);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, d: u32) -> Field {
        build_field(p, d, DEFAULT_FIELD_CAP).unwrap()
    }

    /// Brute-force factor scan, independent of the Ben-Or test.
    fn irreducible_by_scan(m: &[u64], p: u64) -> bool {
        let d = m.len() - 1;
        for deg in 1..=d / 2 {
            for t in 0..p.pow(deg as u32) {
                let mut g: Vec<u64> = (0..deg).map(|i| t / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly::rem(m, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Lexicographic scan over all monic polynomials, constant term major.
    fn least_by_scan(p: u64, d: u32) -> Vec<u64> {
        let mut cands: Vec<Vec<u64>> = (0..p.pow(d))
            .map(|t| {
                let mut c: Vec<u64> = (0..d).map(|i| t / p.pow(i) % p).collect();
                c.push(1);
                c
            })
            .filter(|c| irreducible_by_scan(c, p))
            .collect();
        cands.sort();
        cands.remove(0)
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let k = f(2, 1);
        assert_eq!(k.descriptor().modulus, None);
        assert_eq!(k.order(), 2);
    }

    #[test]
    fn small_moduli_match_scan() {
        assert_eq!(f(2, 2).descriptor().modulus, Some(vec![1, 1, 1]));
        assert_eq!(f(3, 2).descriptor().modulus, Some(vec![1, 0, 1]));
        for (p, d) in [(2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (5, 2), (5, 3), (7, 2)] {
            assert_eq!(
                f(p, d).descriptor().modulus,
                Some(least_by_scan(p, d)),
                "p={p} d={d}"
            );
        }
    }

    #[test]
    fn build_errors() {
        assert_eq!(build_field(4, 1, 100), Err(FieldError::NotPrime(4)));
        assert_eq!(build_field(2, 0, 100), Err(FieldError::ZeroDegree));
        assert!(matches!(
            build_field(2, 10, 512),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn build_is_deterministic() {
        assert_eq!(f(2, 12), f(2, 12));
        assert_eq!(f(3, 5).descriptor(), f(3, 5).descriptor());
    }

    #[test]
    fn f4_examples() {
        let k = f(2, 2);
        let a = k.generator();
        let a1 = k.add(a, k.one());
        assert_eq!(k.mul(a, a1), k.one());
        assert_eq!(k.inv(a).unwrap(), a1);
        assert_eq!(k.pow(a, 3), k.one());
        assert_eq!(k.frobenius(a, 1), a1);
        for x in k.elements() {
            assert_eq!(k.frobenius(k.frobenius(x, 1), 1), x);
        }
        assert_eq!(k.frobenius(k.one(), 1), k.one());
        assert_eq!(k.format(a1, "a"), "a + 1");
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let k = f(2, 2);
        let k8 = f(2, 3);
        assert_eq!(k.inv(k.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(
            k.arith(k.one(), k.zero(), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            k.arith(k.one(), k8.one(), ArithOp::Add),
            Err(FieldError::Mismatch { .. })
        ));
    }

    #[test]
    fn enumerate_in_index_order() {
        let k = f(2, 2);
        let names: Vec<String> = k.elements().map(|x| k.format(x, "a")).collect();
        assert_eq!(names, ["0", "1", "a", "a + 1"]);
        assert_eq!(f(3, 2).elements().count(), 9);
        for (i, x) in f(5, 2).elements().enumerate() {
            assert_eq!(x.index(), i as u64);
        }
    }

    #[test]
    fn fermat_and_frobenius_closure() {
        for (p, d) in [(2, 4), (3, 3), (5, 2), (7, 1), (2, 7)] {
            let k = f(p, d);
            for x in k.elements() {
                assert_eq!(k.pow(x, k.order()), x);
                assert_eq!(k.frobenius(x, d), x);
                if x != k.zero() {
                    assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
                }
            }
        }
    }

    #[test]
    fn embeddings() {
        let f2 = f(2, 1);
        let f4 = f(2, 2);
        let f8 = f(2, 3);
        let f16 = f(2, 4);
        let e = embed_subfield(&f2, &f4).unwrap();
        assert_eq!(e.apply(f2.zero()), f4.zero());
        assert_eq!(e.apply(f2.one()), f4.one());

        let e = embed_subfield(&f4, &f16).unwrap();
        // least-index root of x^2 + x + 1 in F_16, by scan
        let root = f16
            .elements()
            .find(|&y| {
                let y2 = f16.mul(y, y);
                f16.add(f16.add(y2, y), f16.one()) == f16.zero()
            })
            .unwrap();
        assert_eq!(e.image_of_generator(), root);

        assert!(matches!(
            embed_subfield(&f4, &f8),
            Err(FieldError::NotASubfield { .. })
        ));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for (sub, big) in [((2, 2), (2, 6)), ((3, 2), (3, 4)), ((5, 1), (5, 3))] {
            let s = f(sub.0, sub.1);
            let b = f(big.0, big.1);
            let e = embed_subfield(&s, &b).unwrap();
            for x in s.elements() {
                for y in s.elements() {
                    assert_eq!(e.apply(s.add(x, y)), b.add(e.apply(x), e.apply(y)));
                    assert_eq!(e.apply(s.mul(x, y)), b.mul(e.apply(x), e.apply(y)));
                }
            }
        }
    }
}
