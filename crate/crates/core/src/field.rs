//! Base fields, square classes and local Hilbert symbols.
//!
//! Three base fields are supported: the rationals, prime fields of odd
//! characteristic, and a real closed field whose elements are entered as
//! rationals. Everything downstream indexes generators `<a>` of GW(k) by the
//! [`SquareClass`] of `a`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no square class")]
    ZeroElement,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not invertible in the base field")]
    NotInvertible(String),
    #[error("cannot parse field descriptor {0:?} (expected Q, R or Fp:<p>)")]
    BadDescriptor(String),
    #[error("square classes from different fields")]
    Mismatch,
}

/// Runtime descriptor of a base field of characteristic different from 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Finite(u64),
    RealClosed,
}

impl Field {
    pub fn finite(p: u64) -> Result<Field, FieldError> {
        if p == 2 || p >= 1 << 62 || !arith::is_prime_u64(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(Field::Finite(p))
    }

    pub fn parse(s: &str) -> Result<Field, FieldError> {
        let t = s.trim();
        match t {
            "Q" | "q" | "QQ" => Ok(Field::Rational),
            "R" | "r" | "RR" => Ok(Field::RealClosed),
            _ => {
                let rest = t
                    .strip_prefix("Fp:")
                    .or_else(|| t.strip_prefix("fp:"))
                    .or_else(|| t.strip_prefix("F:"))
                    .ok_or_else(|| FieldError::BadDescriptor(s.to_string()))?;
                let p: u64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| FieldError::BadDescriptor(s.to_string()))?;
                Field::finite(p)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Finite(p) => *p,
            _ => 0,
        }
    }

    pub fn one_class(&self) -> SquareClass {
        match self {
            Field::Rational => SquareClass::Rational(RatClass::one()),
            Field::Finite(_) => SquareClass::Finite(FpClass::One),
            Field::RealClosed => SquareClass::Real(RealClass::Pos),
        }
    }

    pub fn minus_one_class(&self) -> SquareClass {
        normalize_square_class(*self, &BigRational::from_integer(BigInt::from(-1)))
            .expect("-1 is nonzero in odd characteristic")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Finite(p) => write!(f, "Fp:{p}"),
            Field::RealClosed => write!(f, "R"),
        }
    }
}

/// A square class of Q: the squarefree integer `sign * prod(primes)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatClass {
    negative: bool,
    primes: Vec<BigUint>,
}

impl RatClass {
    pub fn one() -> Self {
        RatClass { negative: false, primes: Vec::new() }
    }

    /// Builds a class from a sign and a set of primes; the primes are sorted
    /// and must be distinct.
    pub fn from_parts(negative: bool, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        debug_assert!(primes.windows(2).all(|w| w[0] != w[1]));
        RatClass { negative, primes }
    }

    /// Class of a nonzero integer (factors it).
    pub fn of_integer(n: &BigInt) -> Result<Self, FieldError> {
        if n.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(RatClass { negative: n.is_negative(), primes: arith::odd_primes_of(n) })
    }

    pub fn of_rational(q: &BigRational) -> Result<Self, FieldError> {
        if q.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        // factoring the two halves separately keeps each under 128 bits far more often
        Ok(Self::of_integer(q.numer())?.mul(&Self::of_integer(q.denom())?))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn value(&self) -> BigInt {
        let mag = self.primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        let v = BigInt::from(mag);
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    /// Product of two classes: signs multiply, primes cancel in pairs.
    pub fn mul(&self, other: &RatClass) -> RatClass {
        let mut out = Vec::with_capacity(self.primes.len() + other.primes.len());
        let (mut i, mut j) = (0, 0);
        while i < self.primes.len() && j < other.primes.len() {
            match self.primes[i].cmp(&other.primes[j]) {
                Ordering::Less => {
                    out.push(self.primes[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.primes[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.primes[i..]);
        out.extend_from_slice(&other.primes[j..]);
        RatClass { negative: self.negative != other.negative, primes: out }
    }

    pub fn neg(&self) -> RatClass {
        RatClass { negative: !self.negative, primes: self.primes.clone() }
    }
}

impl PartialOrd for RatClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpClass {
    One,
    NonSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealClass {
    Pos,
    Neg,
}

/// Canonical representative of `k^x / (k^x)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    Rational(RatClass),
    Finite(FpClass),
    Real(RealClass),
}

impl SquareClass {
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass, FieldError> {
        use SquareClass::*;
        Ok(match (self, other) {
            (Rational(a), Rational(b)) => Rational(a.mul(b)),
            (Finite(a), Finite(b)) => Finite(if a == b { FpClass::One } else { FpClass::NonSquare }),
            (Real(a), Real(b)) => Real(if a == b { RealClass::Pos } else { RealClass::Neg }),
            _ => return Err(FieldError::Mismatch),
        })
    }

    pub fn is_one(&self) -> bool {
        match self {
            SquareClass::Rational(r) => r.is_one(),
            SquareClass::Finite(c) => *c == FpClass::One,
            SquareClass::Real(c) => *c == RealClass::Pos,
        }
    }

    pub fn belongs_to(&self, field: Field) -> bool {
        matches!(
            (self, field),
            (SquareClass::Rational(_), Field::Rational)
                | (SquareClass::Finite(_), Field::Finite(_))
                | (SquareClass::Real(_), Field::RealClosed)
        )
    }

    /// Sign under the real embedding, where one exists.
    pub fn real_sign(&self) -> Option<i32> {
        match self {
            SquareClass::Rational(r) => Some(if r.is_negative() { -1 } else { 1 }),
            SquareClass::Real(RealClass::Pos) => Some(1),
            SquareClass::Real(RealClass::Neg) => Some(-1),
            SquareClass::Finite(_) => None,
        }
    }

    /// Text form used in the JSON encoding and in printed elements.
    pub fn encoding(&self) -> String {
        match self {
            SquareClass::Rational(r) => r.value().to_string(),
            SquareClass::Finite(FpClass::One) => "1".into(),
            SquareClass::Finite(FpClass::NonSquare) => "ns".into(),
            SquareClass::Real(RealClass::Pos) => "+".into(),
            SquareClass::Real(RealClass::Neg) => "-".into(),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// Reduces a rational into a prime field, failing when the denominator
/// vanishes mod p.
pub fn rational_mod_p(a: &BigRational, p: u64) -> Result<u64, FieldError> {
    let pb = BigInt::from(p);
    let num = a.numer().mod_floor(&pb).to_u64().unwrap();
    let den = a.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return Err(FieldError::NotInvertible(a.to_string()));
    }
    let inv = arith::pow_mod(den, p - 2, p);
    Ok((num as u128 * inv as u128 % p as u128) as u64)
}

/// Canonical square class of a nonzero element given as a rational number.
pub fn normalize_square_class(f: Field, a: &BigRational) -> Result<SquareClass, FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    match f {
        Field::Rational => Ok(SquareClass::Rational(RatClass::of_rational(a)?)),
        Field::RealClosed => Ok(SquareClass::Real(if a.is_negative() {
            RealClass::Neg
        } else {
            RealClass::Pos
        })),
        Field::Finite(p) => {
            let r = rational_mod_p(a, p)?;
            fp_class(r, p)
        }
    }
}

fn fp_class(r: u64, p: u64) -> Result<SquareClass, FieldError> {
    match arith::legendre_u64(r, p) {
        0 => Err(FieldError::ZeroElement),
        1 => Ok(SquareClass::Finite(FpClass::One)),
        _ => Ok(SquareClass::Finite(FpClass::NonSquare)),
    }
}

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    RealPlace,
    Prime(BigUint),
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(BigUint::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::RealPlace => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn mod_small(n: &BigInt, m: u32) -> u32 {
    n.mod_floor(&BigInt::from(m)).to_u32().unwrap()
}

/// Hilbert symbol `(a, b)_v` of two nonzero integers.
pub fn hilbert_int(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "hilbert symbol of zero");
    match v {
        Place::RealPlace => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = arith::valuation(a, p);
            let (beta, w) = arith::valuation(b, p);
            if p == &BigUint::from(2u32) {
                let eps = |x: &BigInt| (mod_small(x, 4) == 3) as u32;
                let omega = |x: &BigInt| {
                    let r = mod_small(x, 8);
                    (r == 3 || r == 5) as u32
                };
                let e = eps(&u) * eps(&w) + (alpha % 2) * omega(&w) + (beta % 2) * omega(&u);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let mut s: i8 = 1;
                if alpha % 2 == 1 && beta % 2 == 1 && mod_small(&BigInt::from(p.clone()), 4) == 3 {
                    s = -s;
                }
                if beta % 2 == 1 {
                    s *= arith::jacobi(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= arith::jacobi(&w, p);
                }
                s
            }
        }
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: &Place) -> Result<i8, FieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    Ok(hilbert_int(&ai, &bi, v))
}

/// Hilbert symbol of two square classes of Q.
pub fn hilbert_class(a: &RatClass, b: &RatClass, v: &Place) -> i8 {
    hilbert_int(&a.value(), &b.value(), v)
}

/// Whether the squarefree class `d` is a square in the completion at `v`.
pub fn is_local_square(d: &RatClass, v: &Place) -> bool {
    match v {
        Place::RealPlace => !d.is_negative(),
        Place::Prime(p) => {
            if d.primes().contains(p) {
                return false;
            }
            let val = d.value();
            if p == &BigUint::from(2u32) {
                mod_small(&val, 8) == 1
            } else {
                arith::jacobi(&val, p) == 1
            }
        }
    }
}

/// Compile-time arithmetic of a base field. `Elem` is the exact element type.
pub trait FieldOps: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Ord + Hash + Send + Sync;

    fn field(&self) -> Field;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn square_class(&self, a: &Self::Elem) -> Result<SquareClass, FieldError>;
    /// Exact rational value for fields whose elements are rationals.
    fn to_rational(&self, a: &Self::Elem) -> Option<BigRational>;
    fn format(&self, a: &Self::Elem) -> String;

    fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

/// A real closed field, with elements entered and stored as rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Reals;

/// The prime field F_p for an odd prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        Field::finite(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

macro_rules! rational_ops {
    ($t:ty, $field:expr, $class:expr) => {
        impl FieldOps for $t {
            type Elem = BigRational;

            fn field(&self) -> Field {
                $field
            }
            fn zero(&self) -> BigRational {
                BigRational::zero()
            }
            fn one(&self) -> BigRational {
                BigRational::one()
            }
            fn from_i64(&self, n: i64) -> BigRational {
                BigRational::from_integer(BigInt::from(n))
            }
            fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
                Ok(q.clone())
            }
            fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
                a + b
            }
            fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
                a - b
            }
            fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
                a * b
            }
            fn neg(&self, a: &BigRational) -> BigRational {
                -a
            }
            fn inv(&self, a: &BigRational) -> Option<BigRational> {
                if a.is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            fn is_zero(&self, a: &BigRational) -> bool {
                a.is_zero()
            }
            fn square_class(&self, a: &BigRational) -> Result<SquareClass, FieldError> {
                $class(a)
            }
            fn to_rational(&self, a: &BigRational) -> Option<BigRational> {
                Some(a.clone())
            }
            fn format(&self, a: &BigRational) -> String {
                a.to_string()
            }
        }
    };
}

rational_ops!(Rationals, Field::Rational, |a: &BigRational| normalize_square_class(
    Field::Rational,
    a
));
rational_ops!(Reals, Field::RealClosed, |a: &BigRational| normalize_square_class(
    Field::RealClosed,
    a
));

impl FieldOps for PrimeField {
    type Elem = u64;

    fn field(&self) -> Field {
        Field::Finite(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        rational_mod_p(q, self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(arith::pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn square_class(&self, a: &u64) -> Result<SquareClass, FieldError> {
        fp_class(*a, self.p)
    }
    fn to_rational(&self, _a: &u64) -> Option<BigRational> {
        None
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}
