//! Diagonal quadratic forms, their invariants, Witt decomposition, and the
//! equality test in GW(k).

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::classify::{comparison_places, hasse_at, RatInvariants};
use super::{GWElement, GwError};
use crate::field::{normalize_square_class, Field, Place, RatClass, RealClass, SquareClass};

/// A nondegenerate diagonal form `<a_1, ..., a_n>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    field: Field,
    diag: Vec<SquareClass>,
}

impl QuadForm {
    pub fn new(field: Field, diag: Vec<SquareClass>) -> Result<Self, GwError> {
        if diag.is_empty() {
            return Err(GwError::EmptyForm);
        }
        if diag.iter().any(|a| !a.belongs_to(field)) {
            return Err(GwError::FieldMismatch);
        }
        Ok(QuadForm { field, diag })
    }

    pub fn from_rationals(field: Field, entries: &[BigRational]) -> Result<Self, GwError> {
        let diag = entries.iter().map(|a| normalize_square_class(field, a)).collect::<Result<_, _>>()?;
        Self::new(field, diag)
    }

    pub fn from_ints(field: Field, entries: &[i64]) -> Result<Self, GwError> {
        let q: Vec<BigRational> = entries.iter().map(|&a| BigRational::from_integer(a.into())).collect();
        Self::from_rationals(field, &q)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn diag(&self) -> &[SquareClass] {
        &self.diag
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn to_element(&self) -> GWElement {
        GWElement::from_terms(self.field, self.diag.iter().map(|a| (a.clone(), 1))).expect("classes checked")
    }

    fn rat_diag(&self) -> Vec<RatClass> {
        rat_entries(&self.diag)
    }
}

fn rat_entries(diag: &[SquareClass]) -> Vec<RatClass> {
    diag.iter()
        .map(|a| match a {
            SquareClass::Rational(r) => r.clone(),
            _ => unreachable!("rational form expected"),
        })
        .collect()
}

fn product(field: Field, diag: &[SquareClass]) -> SquareClass {
    diag.iter().fold(field.one_class(), |acc, a| acc.mul(a).expect("one field"))
}

fn signature_of(diag: &[SquareClass]) -> Option<i64> {
    diag.iter().map(|a| a.real_sign().map(i64::from)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWInvariants {
    pub rank: usize,
    pub disc: SquareClass,
    pub signature: Option<i64>,
    /// Places of Q where the Hasse invariant is -1; empty over other fields.
    pub hasse: Vec<(Place, i8)>,
    pub witt_index: usize,
}

pub fn invariants(q: &QuadForm) -> GWInvariants {
    let hasse = match q.field {
        Field::Rational => RatInvariants::of_diag(&q.rat_diag()).hasse.into_iter().map(|v| (v, -1)).collect(),
        _ => Vec::new(),
    };
    GWInvariants {
        rank: q.rank(),
        disc: product(q.field, &q.diag),
        signature: signature_of(&q.diag),
        hasse,
        witt_index: witt_decompose(q).1,
    }
}

/// Splits `q = A + m h` with `A` anisotropic (`None` when `q` is hyperbolic).
/// When `q` is already anisotropic, `A` is `q` itself.
pub fn witt_decompose(q: &QuadForm) -> (Option<QuadForm>, usize) {
    let (a, m) = decompose_entries(q.field, &q.diag);
    let a = if a.is_empty() { None } else { Some(QuadForm { field: q.field, diag: a }) };
    (a, m)
}

fn decompose_entries(field: Field, diag: &[SquareClass]) -> (Vec<SquareClass>, usize) {
    match field {
        Field::Rational => {
            let inv = RatInvariants::of_diag(&rat_entries(diag));
            let mut cur = inv.clone();
            let mut m = 0;
            while cur.is_isotropic() {
                cur = cur.split_hyperbolic();
                m += 1;
            }
            if m == 0 {
                return (diag.to_vec(), 0);
            }
            (cur.realize().into_iter().map(SquareClass::Rational).collect(), m)
        }
        Field::Finite(_) => {
            let minus = field.minus_one_class();
            let mut n = diag.len();
            let mut d = product(field, diag);
            let mut m = 0;
            while n >= 3 || (n == 2 && d == minus) {
                n -= 2;
                d = d.mul(&minus).unwrap();
                m += 1;
            }
            if m == 0 {
                return (diag.to_vec(), 0);
            }
            let a = match n {
                0 => vec![],
                1 => vec![d],
                _ => vec![field.one_class(), d],
            };
            (a, m)
        }
        Field::RealClosed => {
            let s = signature_of(diag).unwrap();
            let m = (diag.len() - s.unsigned_abs() as usize) / 2;
            let c = SquareClass::Real(if s < 0 { RealClass::Neg } else { RealClass::Pos });
            (vec![c; s.unsigned_abs() as usize], m)
        }
    }
}

/// A place where an anisotropic rational form stays anisotropic, which
/// certifies anisotropy by Hasse–Minkowski. `None` if `q` is isotropic.
pub fn anisotropic_place(q: &QuadForm) -> Option<Place> {
    if q.field != Field::Rational {
        return None;
    }
    RatInvariants::of_diag(&q.rat_diag()).anisotropic_place()
}

/// Exhaustive search for a nonzero `x` in F_p^n with `sum a_i x_i^2 = 0`.
pub fn find_isotropic_vector_fp(diag: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = diag.len();
    // normalize the first nonzero coordinate to 1
    for lead in 0..n {
        let rest = n - lead - 1;
        let total = p.checked_pow(rest as u32).expect("search space too large");
        for idx in 0..total {
            let mut x = vec![0u64; n];
            x[lead] = 1;
            let mut t = idx;
            for slot in x.iter_mut().skip(lead + 1) {
                *slot = t % p;
                t /= p;
            }
            let val = diag.iter().zip(&x).fold(0u128, |acc, (a, xi)| {
                (acc + *a as u128 % p as u128 * (*xi as u128 * *xi as u128 % p as u128)) % p as u128
            });
            if val == 0 {
                return Some(x);
            }
        }
    }
    None
}

/// Representative in `{1, .., p-1}` of an F_p square class.
#[cfg(test)]
pub(crate) fn fp_rep(c: &SquareClass, p: u64) -> u64 {
    use crate::arith;
    use crate::field::FpClass;
    match c {
        SquareClass::Finite(FpClass::One) => 1,
        SquareClass::Finite(FpClass::NonSquare) => (2..p).find(|&a| arith::legendre_u64(a, p) == -1).unwrap(),
        _ => unreachable!(),
    }
}

/// `x = A + m h` with `A` a diagonal anisotropic form (listed with
/// multiplicity) and `m` possibly negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub anisotropic: Vec<SquareClass>,
    pub hyperbolic: i64,
}

pub fn normal_form(x: &GWElement) -> NormalForm {
    let field = x.field();
    let minus = field.minus_one_class();
    let mut m: i64 = 0;
    let mut counts: BTreeMap<SquareClass, i64> = BTreeMap::new();
    for (a, c) in x.terms() {
        if c > 0 {
            *counts.entry(a.clone()).or_insert(0) += c;
        } else {
            // -<a> = <-a> - h
            *counts.entry(a.mul(&minus).unwrap()).or_insert(0) += -c;
            m += c;
        }
    }
    // <a> + <-a> = h
    let keys: Vec<SquareClass> = counts.keys().cloned().collect();
    for a in keys {
        let b = a.mul(&minus).unwrap();
        if b <= a {
            continue;
        }
        let k = counts[&a].min(counts.get(&b).copied().unwrap_or(0));
        if k > 0 {
            *counts.get_mut(&a).unwrap() -= k;
            *counts.get_mut(&b).unwrap() -= k;
            m += k;
        }
    }
    let entries: Vec<SquareClass> =
        counts.into_iter().flat_map(|(a, c)| std::iter::repeat_n(a, c as usize)).collect();
    if entries.is_empty() {
        return NormalForm { anisotropic: entries, hyperbolic: m };
    }
    let (mut a, w) = decompose_entries(field, &entries);
    a.sort();
    NormalForm { anisotropic: a, hyperbolic: m + w as i64 }
}

/// Equality in GW(k). Writing `x - y = P - N` with `P`, `N` effective, Witt
/// cancellation reduces the question to `P` and `N` being isometric, which
/// the classical invariants decide.
pub fn gw_equal(x: &GWElement, y: &GWElement) -> Result<bool, GwError> {
    if x.field() != y.field() {
        return Err(GwError::FieldMismatch);
    }
    let z = x.try_sub(y)?;
    if z.rank() != 0 {
        return Ok(false);
    }
    if z.is_zero() {
        return Ok(true);
    }
    let p = z.positive_entries();
    let n = z.negative_entries();
    let field = x.field();
    if product(field, &p) != product(field, &n) {
        return Ok(false);
    }
    match field {
        Field::Finite(_) => Ok(true),
        Field::RealClosed => Ok(z.signature() == Some(0)),
        Field::Rational => {
            if z.signature() != Some(0) {
                return Ok(false);
            }
            let (pr, nr) = (rat_entries(&p), rat_entries(&n));
            Ok(comparison_places(&pr, &nr).iter().all(|v| hasse_at(&pr, v) == hasse_at(&nr, v)))
        }
    }
}

/// Whether `x` is an integer multiple of `h`.
pub fn is_hyperbolic(x: &GWElement) -> bool {
    let r = x.rank();
    r % 2 == 0 && gw_equal(x, &GWElement::hyperbolic(x.field()).scale(r / 2)).unwrap()
}
