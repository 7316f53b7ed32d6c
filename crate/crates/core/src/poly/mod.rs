//! Exact univariate polynomials and rational functions over a base field.

mod factor;
mod fp_factor;
mod parse;
mod ratfunc;
mod zassenhaus;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{FieldError, FieldOps};

pub use factor::{factor, factor_seeded, is_irreducible, squarefree_part, Factorable, Factorization, DEFAULT_SEED, MAX_FACTOR_DEGREE};
pub use parse::{parse_poly, parse_rational_function};
pub use ratfunc::{local_unit, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero rational function")]
    ZeroFunction,
    #[error("degree {degree} exceeds the factorization limit {limit}")]
    DegreeLimitExceeded { degree: usize, limit: usize },
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("modulus is not irreducible")]
    ReducibleModulus,
    #[error("element is not invertible modulo the given polynomial")]
    NotInvertible,
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("operation unsupported over {0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial in one variable `t` with coefficients in `K`, stored
/// low-degree first. The leading coefficient is nonzero unless the
/// polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K: FieldOps> {
    k: K,
    c: Vec<K::Elem>,
}

impl<K: FieldOps> Poly<K> {
    pub fn new(k: &K, coeffs: Vec<K::Elem>) -> Self {
        let mut p = Poly { k: k.clone(), c: coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(k: &K, coeffs: &[i64]) -> Self {
        Self::new(k, coeffs.iter().map(|&n| k.from_i64(n)).collect())
    }

    pub fn zero(k: &K) -> Self {
        Poly { k: k.clone(), c: Vec::new() }
    }

    pub fn one(k: &K) -> Self {
        Self::constant(k, k.one())
    }

    pub fn constant(k: &K, a: K::Elem) -> Self {
        Self::new(k, vec![a])
    }

    /// The variable `t`.
    pub fn x(k: &K) -> Self {
        Self::new(k, vec![k.zero(), k.one()])
    }

    pub fn monomial(k: &K, a: K::Elem, n: usize) -> Self {
        let mut c = vec![k.zero(); n + 1];
        c[n] = a;
        Self::new(k, c)
    }

    fn trim(&mut self) {
        while let Some(last) = self.c.last() {
            if self.k.is_zero(last) {
                self.c.pop();
            } else {
                break;
            }
        }
    }

    pub fn field(&self) -> &K {
        &self.k
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<K::Elem> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.k.is_one(&self.c[0])
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&K::Elem> {
        self.c.last()
    }

    pub fn coeff(&self, i: usize) -> K::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.k.zero())
    }

    pub fn scale(&self, a: &K::Elem) -> Self {
        Self::new(&self.k, self.c.iter().map(|x| self.k.mul(x, a)).collect())
    }

    /// Multiplies by `t^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.k.zero(); n];
        c.extend(self.c.iter().cloned());
        Poly { k: self.k.clone(), c }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.k.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(|l| self.k.is_one(l)).unwrap_or(false)
    }

    pub fn map_coeffs<L: FieldOps>(&self, l: &L, f: impl Fn(&K::Elem) -> L::Elem) -> Poly<L> {
        Poly::new(l, self.c.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        let k = &self.k;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| k.mul(&k.from_i64(i as i64), a))
            .collect();
        Self::new(k, c)
    }

    pub fn eval(&self, x: &K::Elem) -> K::Elem {
        let k = &self.k;
        self.c.iter().rev().fold(k.zero(), |acc, a| k.add(&k.mul(&acc, x), a))
    }

    /// `self(other(t))`.
    pub fn compose(&self, other: &Poly<K>) -> Self {
        let mut acc = Poly::zero(&self.k);
        for a in self.c.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(&self.k, a.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Division with remainder by a nonzero divisor.
    pub fn divrem(&self, d: &Poly<K>) -> Result<(Self, Self), PolyError> {
        let k = &self.k;
        let dl = d.leading().ok_or(PolyError::ZeroPolynomial)?;
        let inv = k.inv(dl).expect("nonzero leading coefficient");
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(k), self.clone()));
        }
        let dn = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut q = vec![k.zero(); self.c.len() - dn];
        for i in (0..q.len()).rev() {
            let coef = k.mul(&r[i + dn], &inv);
            if !k.is_zero(&coef) {
                for j in 0..=dn {
                    let t = k.mul(&coef, &d.c[j]);
                    r[i + j] = k.sub(&r[i + j], &t);
                }
            }
            q[i] = coef;
        }
        r.truncate(dn);
        Ok((Self::new(k, q), Self::new(k, r)))
    }

    pub fn rem(&self, d: &Poly<K>) -> Result<Self, PolyError> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient, asserting that the division is exact.
    pub fn exact_div(&self, d: &Poly<K>) -> Result<Self, PolyError> {
        let (q, r) = self.divrem(d)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    pub fn divides(&self, f: &Poly<K>) -> bool {
        f.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly<K>) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Poly<K>) -> (Self, Self, Self) {
        let k = &self.k;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = k.inv(lc).unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse of `self` modulo `m`, if the two are coprime.
    pub fn inverse_mod(&self, m: &Poly<K>) -> Option<Self> {
        let a = self.rem(m).ok()?;
        let (g, s, _) = a.ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m).ok()?)
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &Poly<K>, m: &Poly<K>) -> Self {
        (self * other).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Poly<K>) -> Self {
        let mut acc = Poly::one(&self.k).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Multiplicity of `g` in `self` (for nonconstant `g`) and the cofactor.
    pub fn valuation(&self, g: &Poly<K>) -> Result<(u32, Self), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(g)?;
            if !r.is_zero() {
                return Ok((v, cur));
            }
            cur = q;
            v += 1;
        }
    }

    /// Resultant `Res(self, other)` by the Euclidean algorithm.
    pub fn resultant(&self, other: &Poly<K>) -> K::Elem {
        let k = &self.k;
        if self.is_zero() || other.is_zero() {
            return k.zero();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut res = k.one();
        loop {
            let da = a.degree().unwrap();
            let db = match b.degree() {
                None => return k.zero(),
                Some(d) => d,
            };
            if db == 0 {
                return k.mul(&res, &k.pow(b.leading().unwrap(), da as u64));
            }
            let r = a.rem(&b).unwrap();
            if r.is_zero() {
                return k.zero();
            }
            let dr = r.degree().unwrap();
            // Res(a, b) = (-1)^{da*db} lc(b)^{da - dr} Res(b, r)
            if (da * db) % 2 == 1 {
                res = k.neg(&res);
            }
            res = k.mul(&res, &k.pow(b.leading().unwrap(), (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<K::Elem, PolyError> {
        let k = &self.k;
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(PolyError::DegreeTooSmall),
        };
        let r = self.resultant(&self.derivative());
        let r = if (n * (n - 1) / 2) % 2 == 1 { k.neg(&r) } else { r };
        Ok(k.div(&r, self.leading().unwrap()).unwrap())
    }

    /// Squarefree decomposition `f = lc * prod g_i^{e_i}` with monic,
    /// squarefree, pairwise coprime `g_i`. Prime fields use the p-th root
    /// step for inseparable parts.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.monic();
        let mut out = Vec::new();
        sqf_rec(&f, 1, &mut out);
        out.sort_by_key(|a| a.1);
        Ok(out)
    }

    /// Stable ordering key: degree first, then coefficients from the top.
    pub fn sort_key(&self) -> (usize, Vec<K::Elem>) {
        (self.c.len(), self.c.iter().rev().cloned().collect())
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let k = &self.k;
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if k.is_zero(a) {
                continue;
            }
            let s = k.format(a);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn pth_root<K: FieldOps>(f: &Poly<K>, p: usize) -> Poly<K> {
    // In a prime field every element is its own p-th root.
    let c = f.c.iter().step_by(p).cloned().collect();
    Poly::new(&f.k, c)
}

fn sqf_rec<K: FieldOps>(f: &Poly<K>, mult: u32, out: &mut Vec<(Poly<K>, u32)>) {
    if f.is_constant() {
        return;
    }
    let p = f.k.characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        sqf_rec(&pth_root(f, p), mult * p as u32, out);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).unwrap();
        if !z.is_constant() {
            out.push((z.monic(), i * mult));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if !c.is_constant() {
        // Only reachable in positive characteristic: c is a p-th power.
        sqf_rec(&pth_root(&c.monic(), p), mult * p as u32, out);
    }
}

impl<K: FieldOps> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl<'a, K: FieldOps> Add<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &'a Poly<K>) -> Poly<K> {
        let k = &self.k;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(k, c)
    }
}

impl<'a, K: FieldOps> Sub<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &'a Poly<K>) -> Poly<K> {
        self + &(-rhs)
    }
}

impl<K: FieldOps> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { k: self.k.clone(), c: self.c.iter().map(|a| self.k.neg(a)).collect() }
    }
}

impl<'a, K: FieldOps> Mul<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &'a Poly<K>) -> Poly<K> {
        let k = &self.k;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(k);
        }
        let mut c = vec![k.zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] = k.add(&c[i + j], &k.mul(a, b));
            }
        }
        Poly::new(k, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn qp(c: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(&Rationals, c)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn arithmetic_and_division() {
        let f = qp(&[-1, 0, 1]);
        let g = qp(&[-1, 1]);
        let (quo, r) = f.divrem(&g).unwrap();
        assert_eq!(quo, qp(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(&(&quo * &g) - &f, Poly::zero(&Rationals));
        assert_eq!(f.gcd(&qp(&[1, 1])), qp(&[1, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = qp(&[1, 0, 1]);
        let b = qp(&[0, 1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert!(g.is_one());
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn discriminant_examples() {
        // t^2 + b t + c -> b^2 - 4c
        let f = qp(&[7, 3, 1]);
        assert_eq!(f.discriminant().unwrap(), q(9 - 28));
        assert_eq!(qp(&[1, -2, 1]).discriminant().unwrap(), q(0));
        assert_eq!(qp(&[0, -1, 0, 1]).discriminant().unwrap(), q(4));
        assert_eq!(qp(&[5]).discriminant(), Err(PolyError::DegreeTooSmall));
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        // Res(t^3 - t, 3t^2 - 1) from the 5x5 Sylvester matrix
        let f = qp(&[0, -1, 0, 1]);
        let g = f.derivative();
        let syl: Vec<Vec<i64>> = vec![
            vec![1, 0, -1, 0, 0],
            vec![0, 1, 0, -1, 0],
            vec![3, 0, -1, 0, 0],
            vec![0, 3, 0, -1, 0],
            vec![0, 0, 3, 0, -1],
        ];
        let det = crate::linalg::tests_support::int_det(&syl);
        assert_eq!(f.resultant(&g), q(det));
    }

    #[test]
    fn squarefree_decomposition_char_zero() {
        // (t-1)^2 (t+2)
        let f = &qp(&[-1, 1]).pow(2) * &qp(&[2, 1]);
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d, vec![(qp(&[2, 1]), 1), (qp(&[-1, 1]), 2)]);
    }

    #[test]
    fn squarefree_decomposition_char_p() {
        let k = PrimeField::new(3).unwrap();
        // (t^3 + 1) = (t + 1)^3 in F_3, times (t + 2)
        let f = &Poly::from_i64s(&k, &[1, 0, 0, 1]) * &Poly::from_i64s(&k, &[2, 1]);
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d, vec![(Poly::from_i64s(&k, &[2, 1]), 1), (Poly::from_i64s(&k, &[1, 1]), 3)]);
    }

    #[test]
    fn pow_mod_fermat() {
        let k = PrimeField::new(5).unwrap();
        let m = Poly::from_i64s(&k, &[2, 0, 1]); // t^2 + 2 irreducible mod 5
        let t = Poly::x(&k);
        // t^(25) = t in F_25
        assert_eq!(t.pow_mod(&BigUint::from(25u32), &m), t);
    }

    #[test]
    fn display() {
        assert_eq!(qp(&[-1, 0, 1]).to_string(), "t^2 - 1");
        let f = Poly::new(&Rationals, vec![q(0), q(0), q(0), BigRational::new(1.into(), 2.into())]);
        assert_eq!(f.to_string(), "1/2*t^3");
        assert_eq!(qp(&[3, -1]).to_string(), "-t + 3");
    }
}
