//! Exact arithmetic in GF(q), q = p^l, for q up to 2^16.
//!
//! Elements are encoded canonically as integers whose base-p digits are the
//! coefficients of the GF(p)[x] representative, least significant digit
//! first. Multiplication and inversion go through exp/log tables built from
//! a primitive element found at construction time.

mod extension;
pub mod poly;

pub use extension::Extension;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Odd-characteristic fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// A field element in canonical integer encoding.
///
/// `Elem::ERASED` is an out-of-alphabet marker used by words that carry
/// erasures; it is never a valid operand for arithmetic.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);
    pub const ERASED: Elem = Elem(u32::MAX);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_erased(self) -> bool {
        self == Elem::ERASED
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_erased() {
            f.write_str("*")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Field description as found in code-spec JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub l: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

/// Arithmetic context for GF(p^l). Immutable after construction.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    l: u32,
    q: u32,
    /// Monic modulus, base-p digits low-to-high, length l + 1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1), so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("l", &self.l)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.l == other.l && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^l). Without an explicit modulus the smallest irreducible
    /// monic polynomial of degree `l` is used, where candidates are ordered
    /// by their canonical integer encoding.
    pub fn new(p: u32, l: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::BadParameters(
                "extension degree must be positive".into(),
            ));
        }
        let q = (p as u64)
            .checked_pow(l)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Error::TooLarge { p, l })? as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != l as usize + 1 || m[l as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(m.to_vec()));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::Reducible(m.to_vec()));
                }
                m.to_vec()
            }
            None => default_modulus(p, l),
        };

        let (exp, log) =
            build_tables(p, l, q, &modulus).ok_or_else(|| Error::Reducible(modulus.clone()))?;

        let mut ctx = FieldCtx {
            p,
            l,
            q,
            modulus,
            exp,
            log,
            neg: Vec::new(),
            add_table: None,
        };
        ctx.neg = (0..q).map(|a| ctx.digit_neg(a)).collect();
        if p != 2 && l > 1 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.digit_add(a, b);
                }
            }
            ctx.add_table = Some(table);
        }
        Ok(ctx)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.l, spec.modulus.as_deref())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            l: self.l,
            modulus: Some(self.modulus.clone()),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element the tables are built on.
    pub fn generator(&self) -> Elem {
        Elem(self.exp[1])
    }

    pub fn elem(&self, v: u32) -> Result<Elem> {
        if v < self.q {
            Ok(Elem(v))
        } else {
            Err(Error::OutOfRange {
                value: v as u64,
                bound: self.q as u64,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            Elem(a.0 ^ b.0)
        } else if self.l == 1 {
            let s = a.0 + b.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.add_table {
            Elem(t[(a.0 * self.q + b.0) as usize])
        } else {
            Elem(self.digit_add(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            Elem::ZERO
        } else {
            Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(Elem(
            self.exp[((order - self.log[a.index()]) % order) as usize],
        ))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let r = (self.log[a.index()] as u64 * (e % order)) % order;
        Elem(self.exp[r as usize])
    }

    /// Discrete log base [`generator`](Self::generator); `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.index()])
    }

    pub fn exp(&self, i: u64) -> Elem {
        Elem(self.exp[(i % (self.q as u64 - 1)) as usize])
    }

    /// Embeds a prime-field scalar `c < p`.
    #[inline]
    pub fn from_prime(&self, c: u32) -> Elem {
        Elem(c % self.p)
    }

    /// Horner evaluation of `sum coeffs[i] x^i`.
    pub fn poly_eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        to_digits(a.0, self.p, self.l)
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.l {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn digit_neg(&self, a: u32) -> u32 {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.l {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }
}

pub(crate) fn to_digits(mut v: u32, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

pub(crate) fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two residues modulo the monic `modulus`, computed by schoolbook
/// multiplication and long division over GF(p).
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let l = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p64) as u32;
        }
    }
    for top in (l..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for k in 0..=l {
            let sub = (c as u64 * modulus[k] as u64 % p64) as u32;
            prod[top - l + k] = (prod[top - l + k] + p - sub) % p;
        }
    }
    prod.truncate(l);
    prod.resize(l, 0);
    prod
}

/// Remainder of `a` modulo the monic `b` over GF(p).
fn rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return r;
    }
    for top in (db..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for k in 0..=db {
            let sub = (c as u64 * b[k] as u64 % p as u64) as u32;
            r[top - db + k] = (r[top - db + k] + p - sub) % p;
        }
    }
    r.truncate(db);
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let l = modulus.len() - 1;
    for d in 1..=l / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = to_digits(low as u32, p, d as u32);
            divisor.push(1);
            if rem_monic(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, l: u32) -> Vec<u32> {
    let count = p.pow(l);
    (0..count)
        .map(|low| {
            let mut m = to_digits(low, p, l);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}

/// Searches for a primitive element and fills exp/log. Returns `None` when no
/// element of order q - 1 exists, which happens exactly when the modulus is
/// reducible.
fn build_tables(p: u32, l: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let order = (q - 1) as usize;
    let one = to_digits(1, p, l);
    for cand in 1..q {
        let g = to_digits(cand, p, l);
        let mut exp = Vec::with_capacity(2 * order);
        let mut x = one.clone();
        let mut ok = true;
        for step in 0..order {
            let v = from_digits(&x, p);
            if v == 0 || (step > 0 && v == 1) {
                ok = false;
                break;
            }
            exp.push(v);
            x = mul_mod(&x, &g, modulus, p);
        }
        if !ok || from_digits(&x, p) != 1 {
            continue;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        exp.extend_from_within(..);
        return Some((exp, log));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-free multiplication oracle, independent of the tables.
    fn naive_mul(ctx: &FieldCtx, a: Elem, b: Elem) -> Elem {
        let da = ctx.digits(a);
        let db = ctx.digits(b);
        Elem(from_digits(
            &mul_mod(&da, &db, ctx.modulus(), ctx.p()),
            ctx.p(),
        ))
    }

    #[test]
    fn prime_field_gf2() {
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.mul(Elem(1), Elem(1)), Elem(1));
        assert_eq!(f.add(Elem(1), Elem(1)), Elem(0));
    }

    #[test]
    fn gf4_default_modulus_is_x2_x_1() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // the only irreducible monic quadratic over GF(2), by trial division
        let irreducible: Vec<u32> = (0..4)
            .filter(|&low| {
                let mut m = to_digits(low, 2, 2);
                m.push(1);
                is_irreducible(&m, 2)
            })
            .collect();
        assert_eq!(irreducible, vec![3]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(
            FieldCtx::new(2, 17, None),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            FieldCtx::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::Reducible(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 2, Some(&[1, 1])),
            Err(Error::BadModulus(_))
        ));
        assert!(FieldCtx::new(2, 16, None).is_ok());
    }

    #[test]
    fn gf4_product_and_gf5_inverse() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(f4.mul(Elem(2), Elem(3)), Elem(1));
        assert_eq!(naive_mul(&f4, Elem(2), Elem(3)), Elem(1));

        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let brute = (0..5).find(|&b| (2 * b) % 5 == 1).unwrap();
        assert_eq!(brute, 3);
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert!(matches!(f5.inv(Elem(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn char2_self_addition_vanishes() {
        for l in 1..=8 {
            let f = FieldCtx::new(2, l, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, a), Elem::ZERO);
            }
        }
    }

    #[test]
    fn poly_eval_examples() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        for x in f.elements() {
            assert_eq!(f.poly_eval(&[Elem(2)], x), Elem(2));
        }
        assert_eq!(f.poly_eval(&[Elem(0), Elem(1)], Elem(3)), Elem(3));
        assert_eq!(f.poly_eval(&[Elem(1), Elem(0), Elem(1)], Elem(2)), Elem(2));
    }

    #[test]
    fn tables_match_naive_multiplication() {
        for (p, l) in [(2, 3), (3, 2), (2, 4), (5, 2), (7, 1), (3, 3)] {
            let f = FieldCtx::new(p, l, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), naive_mul(&f, a, b), "GF({p}^{l}) {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn fermat_and_frobenius() {
        for (p, l) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (2, 8), (5, 3)] {
            let f = FieldCtx::new(p, l, None).unwrap();
            let q = f.q() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
                if a != Elem::ZERO {
                    assert_eq!(f.pow(a, q - 1), Elem::ONE);
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn add_sub_round_trip_small_fields() {
        for (p, l) in [(2, 4), (3, 2), (5, 1), (7, 1), (2, 3), (13, 1)] {
            let f = FieldCtx::new(p, l, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn large_odd_field_without_add_table() {
        let f = FieldCtx::new(3, 6, None).unwrap();
        assert!(f.add_table.is_none());
        let a = Elem(500);
        let b = Elem(321);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
    }

    #[test]
    fn custom_modulus_gf8() {
        let f = FieldCtx::new(2, 3, Some(&[1, 0, 1, 1])).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
        // x * x^2 = x^3 = x^2 + 1 under x^3 + x^2 + 1
        assert_eq!(f.mul(Elem(2), Elem(4)), Elem(5));
        assert_eq!(FieldCtx::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
    }
}
