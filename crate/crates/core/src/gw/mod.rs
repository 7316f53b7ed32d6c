//! The Grothendieck–Witt ring GW(k) of a base field.
//!
//! Elements are finite integer combinations of generators `<a>` indexed by
//! square classes. Equality in GW(k) is decided through Witt cancellation and
//! the classical invariants (see [`gw_equal`]).

mod classify;
mod expr;
mod form;
mod gram;
mod json;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use thiserror::Error;

use crate::field::{normalize_square_class, Field, FieldError, FpClass, RatClass, RealClass, SquareClass};

pub use expr::parse_gw;
pub use form::{
    anisotropic_place, find_isotropic_vector_fp, gw_equal, invariants, is_hyperbolic, normal_form, witt_decompose,
    GWInvariants, NormalForm, QuadForm,
};
pub use gram::gram_class;
pub use json::{from_json, invariants_json, to_json};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("elements live over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid JSON encoding: {0}")]
    Json(String),
    #[error("degenerate quadratic form")]
    Degenerate,
    #[error("a quadratic form needs at least one entry")]
    EmptyForm,
}

/// An element of GW(k): a formal sum `sum c_a <a>` with nonzero integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GWElement {
    field: Field,
    terms: BTreeMap<SquareClass, i64>,
}

impl GWElement {
    pub fn zero(field: Field) -> Self {
        GWElement { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    /// `n <1>`.
    pub fn from_i64(field: Field, n: i64) -> Self {
        Self::zero(field).with_term(field.one_class(), n)
    }

    /// The generator `<a>` for a class of `field`.
    pub fn class(field: Field, a: SquareClass) -> Result<Self, GwError> {
        if !a.belongs_to(field) {
            return Err(GwError::FieldMismatch);
        }
        Ok(Self::zero(field).with_term(a, 1))
    }

    /// `<a>` for a nonzero element given as a rational number.
    pub fn from_rational(field: Field, a: &BigRational) -> Result<Self, GwError> {
        Self::class(field, normalize_square_class(field, a)?)
    }

    pub fn from_int(field: Field, a: i64) -> Result<Self, GwError> {
        Self::from_rational(field, &BigRational::from_integer(a.into()))
    }

    /// `sum c_i <a_i>` from explicit pairs.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (SquareClass, i64)>) -> Result<Self, GwError> {
        let mut x = Self::zero(field);
        for (a, c) in terms {
            if !a.belongs_to(field) {
                return Err(GwError::FieldMismatch);
            }
            x = x.with_term(a, c);
        }
        Ok(x)
    }

    /// `<-1>`.
    pub fn minus_one(field: Field) -> Self {
        Self::zero(field).with_term(field.minus_one_class(), 1)
    }

    /// The hyperbolic form `h = <1> + <-1>`.
    pub fn hyperbolic(field: Field) -> Self {
        &Self::one(field) + &Self::minus_one(field)
    }

    /// `epsilon = -<-1>`.
    pub fn epsilon(field: Field) -> Self {
        -&Self::minus_one(field)
    }

    /// `n_eps = sum_{i<n} <-1>^i`.
    pub fn n_epsilon(field: Field, n: u64) -> Self {
        let plus = n.div_ceil(2) as i64;
        let minus = (n / 2) as i64;
        Self::zero(field).with_term(field.one_class(), plus).with_term(field.minus_one_class(), minus)
    }

    fn with_term(mut self, a: SquareClass, c: i64) -> Self {
        if c != 0 {
            let e = self.terms.entry(a.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                self.terms.remove(&a);
            }
        }
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SquareClass, i64)> {
        self.terms.iter().map(|(a, c)| (a, *c))
    }

    pub fn coeff(&self, a: &SquareClass) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GwError> {
        if self.field != other.field {
            return Err(GwError::FieldMismatch);
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out = out.with_term(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GwError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GwError> {
        if self.field != other.field {
            return Err(GwError::FieldMismatch);
        }
        let mut out = Self::zero(self.field);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out = out.with_term(a.mul(b)?, c * d);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero(self.field);
        for (a, c) in &self.terms {
            out = out.with_term(a.clone(), c * n);
        }
        out
    }

    /// Multiplication by the generator `<u>`.
    pub fn mul_class(&self, u: &SquareClass) -> Result<Self, GwError> {
        let mut out = Self::zero(self.field);
        for (a, c) in &self.terms {
            out = out.with_term(a.mul(u)?, *c);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.field), |acc, _| &acc * self)
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Signature under the real embedding; `None` over finite fields.
    pub fn signature(&self) -> Option<i64> {
        let mut s = 0;
        for (a, c) in &self.terms {
            s += c * a.real_sign()? as i64;
        }
        Some(s)
    }

    /// Discriminant: the class of the product of the entries.
    pub fn disc(&self) -> SquareClass {
        let mut d = self.field.one_class();
        for (a, c) in &self.terms {
            if c.rem_euclid(2) == 1 {
                d = d.mul(a).expect("classes of one field");
            }
        }
        d
    }

    /// Image under the ring map induced by a field extension or reduction:
    /// Q -> R by sign, Q -> F_p by reduction (classes must be p-adic units).
    pub fn base_change(&self, target: Field) -> Result<Self, GwError> {
        if target == self.field {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target);
        for (a, c) in &self.terms {
            let b = match (a, target) {
                (SquareClass::Rational(r), Field::RealClosed) => {
                    SquareClass::Real(if r.is_negative() { RealClass::Neg } else { RealClass::Pos })
                }
                (SquareClass::Rational(r), Field::Finite(_)) => {
                    normalize_square_class(target, &BigRational::from_integer(r.value()))?
                }
                _ => return Err(GwError::FieldMismatch),
            };
            out = out.with_term(b, *c);
        }
        Ok(out)
    }

    /// Entries of the effective part `sum_{c>0} c <a>`, with multiplicity.
    pub(crate) fn positive_entries(&self) -> Vec<SquareClass> {
        self.terms
            .iter()
            .filter(|(_, c)| **c > 0)
            .flat_map(|(a, c)| std::iter::repeat_n(a.clone(), *c as usize))
            .collect()
    }

    pub(crate) fn negative_entries(&self) -> Vec<SquareClass> {
        (-self).positive_entries()
    }

    /// Term-by-term text without normalization, e.g. `<1> - <-1>`.
    pub fn to_raw_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (a, c) in &self.terms {
            push_term(&mut out, *c, &format!("⟨{}⟩", a.encoding()));
        }
        out
    }
}

fn push_term(out: &mut String, c: i64, sym: &str) {
    if c == 0 {
        return;
    }
    if out.is_empty() {
        if c < 0 {
            out.push('-');
        }
    } else {
        out.push_str(if c < 0 { " - " } else { " + " });
    }
    if c.abs() != 1 {
        out.push_str(&c.abs().to_string());
    }
    out.push_str(sym);
}

/// Normalized text `A + m h`, `A` an anisotropic diagonal form.
impl fmt::Display for GWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nf = normal_form(self);
        let mut out = String::new();
        let mut grouped: BTreeMap<&SquareClass, i64> = BTreeMap::new();
        for a in &nf.anisotropic {
            *grouped.entry(a).or_insert(0) += 1;
        }
        for (a, c) in grouped {
            push_term(&mut out, c, &format!("⟨{}⟩", a.encoding()));
        }
        push_term(&mut out, nf.hyperbolic, "h");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl<'a> Add<&'a GWElement> for &'a GWElement {
    type Output = GWElement;
    fn add(self, rhs: &'a GWElement) -> GWElement {
        self.try_add(rhs).expect("GW elements over different fields")
    }
}

impl<'a> Sub<&'a GWElement> for &'a GWElement {
    type Output = GWElement;
    fn sub(self, rhs: &'a GWElement) -> GWElement {
        self.try_sub(rhs).expect("GW elements over different fields")
    }
}

impl<'a> Mul<&'a GWElement> for &'a GWElement {
    type Output = GWElement;
    fn mul(self, rhs: &'a GWElement) -> GWElement {
        self.try_mul(rhs).expect("GW elements over different fields")
    }
}

impl Neg for &GWElement {
    type Output = GWElement;
    fn neg(self) -> GWElement {
        self.scale(-1)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GWElement> for GWElement {
            type Output = GWElement;
            fn $m(self, rhs: GWElement) -> GWElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for GWElement {
    type Output = GWElement;
    fn neg(self) -> GWElement {
        self.scale(-1)
    }
}

/// Class of the nonsquare generator in F_p, for convenience.
pub fn fp_nonsquare() -> SquareClass {
    SquareClass::Finite(FpClass::NonSquare)
}

/// Class of a squarefree integer over Q.
pub fn rat_class(n: i64) -> SquareClass {
    SquareClass::Rational(RatClass::of_integer(&n.into()).expect("nonzero"))
}
