//! Étale algebras `k[T]/(g)` and the trace transfer to GW(k).

use thiserror::Error;

use crate::field::FieldOps;
use crate::gw::{gram_class, GWElement, GwError};
use crate::linalg::Matrix;
use crate::poly::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("modulus is not separable")]
    NotSeparable,
    #[error("scale is not invertible in the algebra")]
    NonInvertibleScale,
    #[error("residue elements live over different algebras")]
    FieldMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Gw(#[from] GwError),
}

/// `k[T]/(g)` for a separable monic `g`, with basis `1, T, ..., T^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra<K: FieldOps> {
    modulus: Poly<K>,
    /// `Tr(T^i)` for `i < d`.
    power_traces: Vec<K::Elem>,
}

/// Validates `g` (made monic) as the modulus of an étale algebra.
pub fn etale_algebra<K: FieldOps>(g: &Poly<K>) -> Result<EtaleAlgebra<K>, TransferError> {
    let d = g.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(PolyError::DegreeTooSmall.into());
    }
    let g = g.monic();
    let k = g.field().clone();
    if k.is_zero(&g.discriminant()?) {
        return Err(TransferError::NotSeparable);
    }
    // Newton's identities: p_i + c_{d-1} p_{i-1} + ... + c_{d-i+1} p_1 + i c_{d-i} = 0
    let c = g.coeffs();
    let mut p = vec![k.from_i64(d as i64)];
    for i in 1..d {
        let mut s = k.mul(&k.from_i64(i as i64), &c[d - i]);
        for j in 1..i {
            s = k.add(&s, &k.mul(&c[d - j], &p[i - j]));
        }
        p.push(k.neg(&s));
    }
    Ok(EtaleAlgebra { modulus: g, power_traces: p })
}

impl<K: FieldOps> EtaleAlgebra<K> {
    pub fn field(&self) -> &K {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly<K> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.power_traces.len()
    }

    /// Reduces a polynomial into the algebra.
    pub fn reduce(&self, a: &Poly<K>) -> Poly<K> {
        a.rem(&self.modulus).expect("nonzero modulus")
    }

    pub fn is_unit(&self, u: &Poly<K>) -> bool {
        let r = self.reduce(u);
        !r.is_zero() && r.gcd(&self.modulus).is_one()
    }

    /// `Tr_{A/k}(a)`.
    pub fn trace(&self, a: &Poly<K>) -> K::Elem {
        let k = self.field();
        self.reduce(a)
            .coeffs()
            .iter()
            .zip(&self.power_traces)
            .fold(k.zero(), |acc, (x, t)| k.add(&acc, &k.mul(x, t)))
    }

    /// Gram matrix `Tr(u T^{i+j})` of the scaled trace form.
    pub fn trace_gram(&self, u: &Poly<K>) -> Matrix<K::Elem> {
        let d = self.degree();
        let t = Poly::x(self.field());
        let mut w = self.reduce(u);
        let mut tr = Vec::with_capacity(2 * d - 1);
        for _ in 0..2 * d - 1 {
            tr.push(self.trace(&w));
            w = self.reduce(&(&w * &t));
        }
        (0..d).map(|i| (0..d).map(|j| tr[i + j].clone()).collect()).collect()
    }
}

/// Class in GW(k) of `(x, y) -> Tr_{A/k}(u x y)`.
pub fn scaled_trace_form<K: FieldOps>(a: &EtaleAlgebra<K>, u: &Poly<K>) -> Result<GWElement, TransferError> {
    if !a.is_unit(u) {
        return Err(TransferError::NonInvertibleScale);
    }
    Ok(gram_class(a.field(), &a.trace_gram(u))?)
}

/// A formal combination `sum c_i <u_i>` of unit classes of an étale algebra.
/// It is never normalized; it only exists to be transferred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueGWElement<K: FieldOps> {
    algebra: EtaleAlgebra<K>,
    terms: Vec<(i64, Poly<K>)>,
}

impl<K: FieldOps> ResidueGWElement<K> {
    pub fn new(algebra: &EtaleAlgebra<K>, terms: Vec<(i64, Poly<K>)>) -> Result<Self, TransferError> {
        let mut out = Vec::with_capacity(terms.len());
        for (c, u) in terms {
            if !algebra.is_unit(&u) {
                return Err(TransferError::NonInvertibleScale);
            }
            if c != 0 {
                out.push((c, algebra.reduce(&u)));
            }
        }
        Ok(ResidueGWElement { algebra: algebra.clone(), terms: out })
    }

    pub fn unit(algebra: &EtaleAlgebra<K>, u: &Poly<K>) -> Result<Self, TransferError> {
        Self::new(algebra, vec![(1, u.clone())])
    }

    pub fn algebra(&self) -> &EtaleAlgebra<K> {
        &self.algebra
    }

    pub fn terms(&self) -> &[(i64, Poly<K>)] {
        &self.terms
    }

    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|(c, _)| c).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self, TransferError> {
        if self.algebra != other.algebra {
            return Err(TransferError::FieldMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(ResidueGWElement { algebra: self.algebra.clone(), terms })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TransferError> {
        if self.algebra != other.algebra {
            return Err(TransferError::FieldMismatch);
        }
        let g = self.algebra.modulus();
        let mut terms = Vec::new();
        for (c, u) in &self.terms {
            for (d, v) in &other.terms {
                terms.push((c * d, u.mul_mod(v, g)));
            }
        }
        Ok(ResidueGWElement { algebra: self.algebra.clone(), terms })
    }

    /// `<v> * self`.
    pub fn scale_unit(&self, v: &Poly<K>) -> Result<Self, TransferError> {
        self.mul(&Self::unit(&self.algebra, v)?)
    }
}

/// `sum c_i Tr(<u_i>)`, linear in the residue element.
pub fn transfer<K: FieldOps>(x: &ResidueGWElement<K>) -> Result<GWElement, TransferError> {
    let mut acc = GWElement::zero(x.algebra.field().field());
    for (c, u) in &x.terms {
        acc = acc.try_add(&scaled_trace_form(&x.algebra, u)?.scale(*c))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField, Rationals};
    use crate::gw::{gw_equal, parse_gw};
    use crate::linalg::determinant;
    use crate::poly::factor;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(&Rationals, c)
    }

    fn g(s: &str) -> GWElement {
        parse_gw(Field::Rational, s).unwrap()
    }

    fn alg(c: &[i64]) -> EtaleAlgebra<Rationals> {
        etale_algebra(&qp(c)).unwrap()
    }

    #[test]
    fn algebra_validation() {
        assert_eq!(alg(&[1, 0, 1]).degree(), 2);
        assert_eq!(alg(&[1, 0, 0, 1]).degree(), 3);
        assert_eq!(etale_algebra(&qp(&[1, -2, 1])), Err(TransferError::NotSeparable));
        let k = PrimeField::new(3).unwrap();
        // t^3 - 1 = (t - 1)^3 in characteristic 3
        assert_eq!(etale_algebra(&Poly::from_i64s(&k, &[-1, 0, 0, 1])), Err(TransferError::NotSeparable));
    }

    #[test]
    fn trace_form_examples() {
        let one = qp(&[1]);
        assert!(gw_equal(&scaled_trace_form(&alg(&[1, 0, 1]), &one).unwrap(), &g("h")).unwrap());
        assert!(gw_equal(&scaled_trace_form(&alg(&[1, 0, 0, 1]), &one).unwrap(), &g("h + <3>")).unwrap());
        assert!(gw_equal(&scaled_trace_form(&alg(&[-1, 0, 1]), &one).unwrap(), &g("<1,1>")).unwrap());
        assert_eq!(scaled_trace_form(&alg(&[1, 0, 1]), &qp(&[0])), Err(TransferError::NonInvertibleScale));
        // split algebra t^2 - 1: t + 1 vanishes at -1
        assert_eq!(scaled_trace_form(&alg(&[-1, 0, 1]), &qp(&[1, 1])), Err(TransferError::NonInvertibleScale));
    }

    #[test]
    fn transfer_examples() {
        let a = alg(&[-3, 1]);
        let x = ResidueGWElement::unit(&a, &qp(&[1])).unwrap();
        assert_eq!(transfer(&x).unwrap(), g("<1>"));
        let b = alg(&[1, 0, 1]);
        // <2 F'(T)> with F' = 2T
        let x = ResidueGWElement::unit(&b, &qp(&[0, 4])).unwrap();
        assert!(gw_equal(&transfer(&x).unwrap(), &g("h")).unwrap());
        let x = ResidueGWElement::new(&b, vec![(2, qp(&[1]))]).unwrap();
        assert!(gw_equal(&transfer(&x).unwrap(), &g("2h")).unwrap());
    }

    #[test]
    fn traces_over_fp() {
        let k = PrimeField::new(7).unwrap();
        let a = etale_algebra(&Poly::from_i64s(&k, &[1, 0, 1])).unwrap();
        // t^2 + 1 is irreducible mod 7; Tr(1) = 2, Tr(T) = 0, Tr(T^2) = -2
        assert_eq!(a.trace_gram(&Poly::one(&k)), vec![vec![2, 0], vec![0, 5]]);
    }

    /// Signature by Jacobi's rule from leading principal minors.
    fn minor_signature(m: &Matrix<BigRational>) -> Option<i64> {
        let n = m.len();
        let mut prev = BigRational::from_integer(1.into());
        let mut sig = 0;
        for k in 1..=n {
            let sub: Matrix<BigRational> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            let det = determinant(&Rationals, &sub);
            if det.is_zero() {
                return None;
            }
            sig += if (det.is_positive()) == (prev.is_positive()) { 1 } else { -1 };
            prev = det;
        }
        Some(sig)
    }

    fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..=4, 1..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn trace_form_invariants(gc in poly_strategy(5), uc in poly_strategy(4), vc in poly_strategy(4)) {
            let mut gc = gc;
            gc.push(1);
            let Ok(a) = etale_algebra(&qp(&gc)) else { return Ok(()) };
            let (u, v) = (qp(&uc), qp(&vc));
            prop_assume!(a.is_unit(&u) && a.is_unit(&v));
            let d = a.degree() as i64;
            let tu = scaled_trace_form(&a, &u).unwrap();
            prop_assert_eq!(tu.rank(), d);
            // discriminant and signature against the Gram matrix directly
            let gram = a.trace_gram(&u);
            let det = determinant(&Rationals, &gram);
            prop_assert_eq!(tu.disc(), crate::field::normalize_square_class(Field::Rational, &det).unwrap());
            if let Some(s) = minor_signature(&gram) {
                prop_assert_eq!(tu.signature(), Some(s));
            }
            // additivity, rank, and hyperbolic transfers
            let x = ResidueGWElement::new(&a, vec![(2, u.clone()), (-1, v.clone())]).unwrap();
            let y = ResidueGWElement::unit(&a, &v).unwrap();
            let tx = transfer(&x).unwrap();
            prop_assert_eq!(tx.rank(), d * x.rank());
            prop_assert!(gw_equal(&transfer(&x.add(&y).unwrap()).unwrap(), &(&tx + &transfer(&y).unwrap())).unwrap());
            let hyp = ResidueGWElement::new(&a, vec![(1, u.clone()), (1, -&u)]).unwrap();
            prop_assert!(gw_equal(&transfer(&hyp).unwrap(), &GWElement::hyperbolic(Field::Rational).scale(d)).unwrap());
            // factor-then-sum agrees with the transfer over the whole algebra
            let mut sum = GWElement::zero(Field::Rational);
            for (h, _) in factor(a.modulus()).unwrap().factors {
                let b = etale_algebra(&h).unwrap();
                sum = &sum + &scaled_trace_form(&b, &u).unwrap();
            }
            prop_assert!(gw_equal(&sum, &tu).unwrap());
        }

        #[test]
        fn split_algebra_is_a_sum_of_values(roots in prop::collection::btree_set(-6i64..=6, 1..5), uc in poly_strategy(3)) {
            let g = roots.iter().fold(qp(&[1]), |acc, r| &acc * &qp(&[-r, 1]));
            let a = etale_algebra(&g).unwrap();
            let u = qp(&uc);
            prop_assume!(a.is_unit(&u));
            let mut expected = GWElement::zero(Field::Rational);
            for r in &roots {
                let val = u.eval(&BigRational::from_integer((*r).into()));
                expected = &expected + &GWElement::from_rational(Field::Rational, &val).unwrap();
            }
            prop_assert!(gw_equal(&scaled_trace_form(&a, &u).unwrap(), &expected).unwrap());
        }

        #[test]
        fn fp_trace_forms_reduce_from_q(gc in poly_strategy(4), pi in 0usize..3) {
            let p = [5u64, 7, 11][pi];
            let mut gc = gc;
            gc.push(1);
            let Ok(a) = etale_algebra(&qp(&gc)) else { return Ok(()) };
            let k = PrimeField::new(p).unwrap();
            let Ok(ap) = etale_algebra(&Poly::from_i64s(&k, &gc)) else { return Ok(()) };
            let tq = scaled_trace_form(&a, &qp(&[1])).unwrap();
            let tp = scaled_trace_form(&ap, &Poly::one(&k)).unwrap();
            // the discriminant of g is a p-adic unit, so the trace lattice is unimodular at p
            let reduced = tq.base_change(k.field());
            if let Ok(r) = reduced {
                prop_assert!(gw_equal(&r, &tp).unwrap());
            }
        }
    }
}
