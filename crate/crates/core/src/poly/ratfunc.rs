use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{factor::is_irreducible, Factorable, Poly, PolyError};
use crate::field::FieldOps;

/// A reduced fraction `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction<K: FieldOps> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: FieldOps> RationalFunction<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let k = num.field().clone();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(&k) });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let inv = k.inv(den.leading().unwrap()).unwrap();
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        let k = p.field().clone();
        RationalFunction { num: p, den: Poly::one(&k) }
    }

    pub fn constant(k: &K, a: K::Elem) -> Self {
        Self::from_poly(Poly::constant(k, a))
    }

    pub fn x(k: &K) -> Self {
        Self::from_poly(Poly::x(k))
    }

    pub fn field(&self) -> &K {
        self.num.field()
    }

    pub fn numer(&self) -> &Poly<K> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree as a map P^1 -> P^1: `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn as_poly(&self) -> Option<&Poly<K>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroFunction);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::ZeroFunction);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn pow(&self, e: i32) -> Result<Self, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).unwrap()
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Result<Self, PolyError> {
        let horner = |p: &Poly<K>| {
            let k = p.field();
            let mut acc = RationalFunction::constant(k, k.zero());
            for a in p.coeffs().iter().rev() {
                acc = &(&acc * g) + &RationalFunction::constant(k, a.clone());
            }
            acc
        };
        horner(&self.num).div(&horner(&self.den))
    }

    /// Valuation at the irreducible `g` and the residue of the unit part in
    /// `k[T]/(g)`. The caller guarantees that `g` is irreducible.
    pub fn local_unit_unchecked(&self, g: &Poly<K>) -> Result<(i64, Poly<K>), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroFunction);
        }
        let (a, n) = self.num.valuation(g)?;
        let (b, d) = self.den.valuation(g)?;
        let dinv = d.inverse_mod(g).ok_or(PolyError::NotInvertible)?;
        Ok((a as i64 - b as i64, n.mul_mod(&dinv, g)))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.to_string_in(var);
        }
        format!("({})/({})", self.num.to_string_in(var), self.den.to_string_in(var))
    }
}

/// `(v, u)` with `f = g^v * u`, `u` a g-adic unit, and `u mod g` returned.
pub fn local_unit<K: Factorable>(f: &RationalFunction<K>, g: &Poly<K>) -> Result<(i64, Poly<K>), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroFunction);
    }
    if !g.is_monic() || !is_irreducible(g)? {
        return Err(PolyError::ReducibleModulus);
    }
    f.local_unit_unchecked(g)
}

impl<K: FieldOps> fmt::Display for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl<'a, K: FieldOps> Add<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn add(self, rhs: &'a RationalFunction<K>) -> RationalFunction<K> {
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl<'a, K: FieldOps> Sub<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn sub(self, rhs: &'a RationalFunction<K>) -> RationalFunction<K> {
        self + &(-rhs)
    }
}

impl<K: FieldOps> Neg for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn neg(self) -> RationalFunction<K> {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a, K: FieldOps> Mul<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn mul(self, rhs: &'a RationalFunction<K>) -> RationalFunction<K> {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}
