//! Local Euler indices of isolated zeros, as unit classes over the residue
//! algebra of the zero. Callers transfer them to the base field.

use thiserror::Error;

use crate::field::FieldOps;
use crate::linalg::{berkowitz_det, CommRing, Matrix};
use crate::poly::{is_irreducible, Factorable, Poly, PolyError, RationalFunction};
use crate::transfer::{EtaleAlgebra, ResidueGWElement, TransferError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalIndexError {
    #[error("exponents must be at least 1 and prime to the characteristic")]
    BadExponent,
    #[error("unit is not invertible in the residue algebra")]
    NonInvertibleUnit,
    #[error("matrix is singular at the point")]
    SingularMatrix,
    #[error("critical point is degenerate")]
    DegenerateCriticalPoint,
    #[error("modulus is not irreducible")]
    ReducibleModulus,
    #[error("units and exponents must be nonempty lists of equal length")]
    LengthMismatch,
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Data of a locally diagonalizable zero: `s_i = u_i t_i^{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalZeroDatum<K: FieldOps> {
    pub residue: EtaleAlgebra<K>,
    pub units: Vec<Poly<K>>,
    pub exponents: Vec<u64>,
}

fn check_exponent<K: FieldOps>(k: &K, n: u64) -> Result<(), LocalIndexError> {
    let p = k.characteristic();
    if n == 0 || (p != 0 && n.is_multiple_of(p)) {
        return Err(LocalIndexError::BadExponent);
    }
    Ok(())
}

fn check_unit<K: FieldOps>(a: &EtaleAlgebra<K>, u: &Poly<K>) -> Result<(), LocalIndexError> {
    if a.is_unit(u) {
        Ok(())
    } else {
        Err(LocalIndexError::NonInvertibleUnit)
    }
}

/// `<u> * (c_plus + c_minus <-1>)` as a residue element.
fn signed_unit<K: FieldOps>(
    a: &EtaleAlgebra<K>,
    u: &Poly<K>,
    c_plus: i64,
    c_minus: i64,
) -> Result<ResidueGWElement<K>, LocalIndexError> {
    Ok(ResidueGWElement::new(a, vec![(c_plus, u.clone()), (c_minus, -u)])?)
}

/// `n_eps = ceil(n/2) + floor(n/2) <-1>`, as `(plus, minus)` counts.
fn n_eps(n: u64) -> (i64, i64) {
    (n.div_ceil(2) as i64, (n / 2) as i64)
}

/// Index `<u> n_eps` of a zero of order `n` of a section of a line bundle.
pub fn line_local_index<K: FieldOps>(
    a: &EtaleAlgebra<K>,
    u: &Poly<K>,
    n: u64,
) -> Result<ResidueGWElement<K>, LocalIndexError> {
    check_exponent(a.field(), n)?;
    check_unit(a, u)?;
    let (p, m) = n_eps(n);
    signed_unit(a, u, p, m)
}

/// Index `<prod u_i> prod (n_i)_eps` of a locally diagonalizable zero.
pub fn diag_local_index<K: FieldOps>(d: &LocalZeroDatum<K>) -> Result<ResidueGWElement<K>, LocalIndexError> {
    if d.units.is_empty() || d.units.len() != d.exponents.len() {
        return Err(LocalIndexError::LengthMismatch);
    }
    let a = &d.residue;
    let k = a.field();
    let mut u = Poly::one(k);
    // coefficients of <1> and <-1> in the running product of n_eps
    let (mut cp, mut cm) = (1i64, 0i64);
    for (ui, &ni) in d.units.iter().zip(&d.exponents) {
        check_exponent(k, ni)?;
        check_unit(a, ui)?;
        u = u.mul_mod(ui, a.modulus());
        let (p, m) = n_eps(ni);
        (cp, cm) = (cp * p + cm * m, cp * m + cm * p);
    }
    signed_unit(a, &u, cp, cm)
}

/// Ring operations of the residue algebra, for division-free determinants.
struct Residue<'a, K: FieldOps>(&'a EtaleAlgebra<K>);

impl<K: FieldOps> CommRing for Residue<'_, K> {
    type E = Poly<K>;
    fn zero(&self) -> Poly<K> {
        Poly::zero(self.0.field())
    }
    fn one(&self) -> Poly<K> {
        Poly::one(self.0.field())
    }
    fn add(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        a + b
    }
    fn mul(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        a.mul_mod(b, self.0.modulus())
    }
    fn neg(&self, a: &Poly<K>) -> Poly<K> {
        -a
    }
}

/// Determinant over the residue algebra.
pub fn residue_det<K: FieldOps>(a: &EtaleAlgebra<K>, m: &Matrix<Poly<K>>) -> Poly<K> {
    let reduced: Matrix<Poly<K>> = m.iter().map(|r| r.iter().map(|x| a.reduce(x)).collect()).collect();
    a.reduce(&berkowitz_det(&Residue(a), &reduced))
}

/// `<det J>` for a nondegenerate zero with Jacobian `J`.
pub fn nondeg_local_index<K: FieldOps>(
    a: &EtaleAlgebra<K>,
    j: &Matrix<Poly<K>>,
) -> Result<ResidueGWElement<K>, LocalIndexError> {
    if j.is_empty() || j.iter().any(|r| r.len() != j.len()) {
        return Err(LocalIndexError::LengthMismatch);
    }
    let det = residue_det(a, j);
    if !a.is_unit(&det) {
        return Err(LocalIndexError::SingularMatrix);
    }
    Ok(ResidueGWElement::unit(a, &det)?)
}

/// Hessian of a quadratic jet `sum_{i<=j} a_ij x_i x_j`: `2 a_ii` on the
/// diagonal, `a_ij` off it. Only entries with `i <= j` are read.
pub fn hessian_matrix<K: FieldOps>(a: &EtaleAlgebra<K>, jet: &Matrix<Poly<K>>) -> Matrix<Poly<K>> {
    let n = jet.len();
    let two = Poly::constant(a.field(), a.field().from_i64(2));
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => &two * &jet[i][i],
                    std::cmp::Ordering::Less => jet[i][j].clone(),
                    std::cmp::Ordering::Greater => jet[j][i].clone(),
                })
                .collect()
        })
        .collect()
}

/// `<det H>` for a nondegenerate critical point with quadratic jet `jet`.
pub fn hessian_index<K: FieldOps>(
    a: &EtaleAlgebra<K>,
    jet: &Matrix<Poly<K>>,
) -> Result<ResidueGWElement<K>, LocalIndexError> {
    if jet.is_empty() || jet.iter().any(|r| r.len() != jet.len()) {
        return Err(LocalIndexError::LengthMismatch);
    }
    match nondeg_local_index(a, &hessian_matrix(a, jet)) {
        Err(LocalIndexError::SingularMatrix) => Err(LocalIndexError::DegenerateCriticalPoint),
        r => r,
    }
}

/// A closed point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P1Point<K: FieldOps> {
    /// The zero locus of a monic irreducible polynomial.
    Finite(Poly<K>),
    Infinity,
}

/// Sign of the normalized parameter at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InfinityConvention {
    /// `-1/t`, the convention under which the Riemann–Hurwitz identity holds.
    #[default]
    MinusInverse,
    /// `+1/t`, kept only to show that it breaks the identity.
    PlusInverse,
}

/// The normalized parameter: `g / g'` at a finite point, `-1/t` at infinity.
pub fn normalized_parameter_p1<K: Factorable>(
    x: &P1Point<K>,
    k: &K,
    conv: InfinityConvention,
) -> Result<RationalFunction<K>, LocalIndexError> {
    match x {
        P1Point::Finite(g) => {
            if !is_irreducible(g)? {
                return Err(LocalIndexError::ReducibleModulus);
            }
            Ok(RationalFunction::new(g.clone(), g.derivative())?)
        }
        P1Point::Infinity => {
            let c = match conv {
                InfinityConvention::MinusInverse => k.from_i64(-1),
                InfinityConvention::PlusInverse => k.one(),
            };
            Ok(RationalFunction::new(Poly::constant(k, c), Poly::x(k))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField, Rationals};
    use crate::gw::{gw_equal, parse_gw, GWElement};
    use crate::transfer::{etale_algebra, transfer};
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(&Rationals, c)
    }

    fn point() -> EtaleAlgebra<Rationals> {
        etale_algebra(&qp(&[0, 1])).unwrap()
    }

    fn g(s: &str) -> GWElement {
        parse_gw(Field::Rational, s).unwrap()
    }

    fn tr(x: &ResidueGWElement<Rationals>) -> GWElement {
        transfer(x).unwrap()
    }

    fn datum(units: &[i64], exps: &[u64]) -> LocalZeroDatum<Rationals> {
        LocalZeroDatum { residue: point(), units: units.iter().map(|&u| qp(&[u])).collect(), exponents: exps.to_vec() }
    }

    #[test]
    fn line_index_examples() {
        let a = point();
        assert_eq!(tr(&line_local_index(&a, &qp(&[1]), 1).unwrap()), g("<1>"));
        assert!(gw_equal(&tr(&line_local_index(&a, &qp(&[7]), 2).unwrap()), &g("h")).unwrap());
        assert!(gw_equal(&tr(&line_local_index(&a, &qp(&[3]), 3).unwrap()), &g("<3> + h")).unwrap());
        assert_eq!(line_local_index(&a, &qp(&[3]), 0), Err(LocalIndexError::BadExponent));
        assert_eq!(line_local_index(&a, &qp(&[0]), 1), Err(LocalIndexError::NonInvertibleUnit));
        let k = PrimeField::new(5).unwrap();
        let ap = etale_algebra(&Poly::x(&k)).unwrap();
        assert_eq!(line_local_index(&ap, &Poly::one(&k), 5), Err(LocalIndexError::BadExponent));
    }

    #[test]
    fn diag_index_examples() {
        assert_eq!(tr(&diag_local_index(&datum(&[1, 1], &[1, 1])).unwrap()), g("<1>"));
        assert_eq!(tr(&diag_local_index(&datum(&[2, 3], &[1, 1])).unwrap()), g("<6>"));
        assert!(gw_equal(&tr(&diag_local_index(&datum(&[2, 3], &[1, 3])).unwrap()), &g("<6> + h")).unwrap());
        assert_eq!(diag_local_index(&datum(&[2], &[1, 1])), Err(LocalIndexError::LengthMismatch));
    }

    #[test]
    fn nondeg_and_hessian_examples() {
        let a = point();
        let m = |rows: &[&[i64]]| -> Matrix<Poly<Rationals>> {
            rows.iter().map(|r| r.iter().map(|&x| qp(&[x])).collect()).collect()
        };
        assert_eq!(tr(&nondeg_local_index(&a, &m(&[&[1, 0], &[0, 1]])).unwrap()), g("<1>"));
        assert_eq!(tr(&nondeg_local_index(&a, &m(&[&[0, 1], &[1, 0]])).unwrap()), g("<-1>"));
        assert_eq!(tr(&nondeg_local_index(&a, &m(&[&[2, 0], &[0, 3]])).unwrap()), g("<6>"));
        assert_eq!(nondeg_local_index(&a, &m(&[&[1, 2], &[2, 4]])), Err(LocalIndexError::SingularMatrix));
        assert_eq!(tr(&hessian_index(&a, &m(&[&[5]])).unwrap()), g("<10>"));
        assert_eq!(tr(&hessian_index(&a, &m(&[&[0, 1], &[0, 0]])).unwrap()), g("<-1>"));
        assert_eq!(tr(&hessian_index(&a, &m(&[&[1, 0], &[0, 1]])).unwrap()), g("<1>"));
        assert_eq!(hessian_index(&a, &m(&[&[1, 2], &[0, 1]])), Err(LocalIndexError::DegenerateCriticalPoint));
    }

    #[test]
    fn normalized_parameters() {
        let k = Rationals;
        let c = InfinityConvention::MinusInverse;
        assert_eq!(
            normalized_parameter_p1(&P1Point::Finite(qp(&[-4, 1])), &k, c).unwrap(),
            RationalFunction::from_poly(qp(&[-4, 1]))
        );
        assert_eq!(
            normalized_parameter_p1(&P1Point::Finite(qp(&[1, 0, 1])), &k, c).unwrap(),
            RationalFunction::new(qp(&[1, 0, 1]), qp(&[0, 2])).unwrap()
        );
        assert_eq!(
            normalized_parameter_p1(&P1Point::Infinity, &k, c).unwrap(),
            RationalFunction::new(qp(&[-1]), qp(&[0, 1])).unwrap()
        );
        assert_eq!(
            normalized_parameter_p1(&P1Point::Finite(qp(&[-1, 0, 1])), &k, c),
            Err(LocalIndexError::ReducibleModulus)
        );
    }

    fn residue_algebra() -> impl Strategy<Value = EtaleAlgebra<Rationals>> {
        prop::sample::select(vec![vec![0i64, 1], vec![1, 0, 1], vec![-2, 0, 1], vec![1, 1, 1], vec![-2, 0, 0, 1]])
            .prop_map(|c| etale_algebra(&qp(&c)).unwrap())
    }

    fn elem() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..=5, 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn unit_exponents_give_jacobian_class(a in residue_algebra(), us in prop::collection::vec(elem(), 1..4)) {
            let units: Vec<_> = us.iter().map(|c| qp(c)).collect();
            prop_assume!(units.iter().all(|u| a.is_unit(u)));
            let d = LocalZeroDatum { residue: a.clone(), units: units.clone(), exponents: vec![1; units.len()] };
            let n = units.len();
            let j: Matrix<Poly<Rationals>> = (0..n).map(|i| (0..n).map(|c| if c == i { units[i].clone() } else { qp(&[0]) }).collect()).collect();
            let lhs = tr(&diag_local_index(&d).unwrap());
            let rhs = tr(&nondeg_local_index(&a, &j).unwrap());
            prop_assert!(gw_equal(&lhs, &rhs).unwrap());
        }

        #[test]
        fn even_exponents_are_hyperbolic(a in residue_algebra(), u in elem(), half in 1u64..5) {
            let u = qp(&u);
            prop_assume!(a.is_unit(&u));
            let x = tr(&line_local_index(&a, &u, 2 * half).unwrap());
            prop_assert!(gw_equal(&x, &GWElement::hyperbolic(Field::Rational).scale(half as i64 * a.degree() as i64)).unwrap());
        }

        #[test]
        fn hessian_congruence_invariance(a in residue_algebra(), seed in prop::collection::vec(elem(), 8)) {
            let jet: Matrix<Poly<Rationals>> = vec![vec![qp(&seed[0]), qp(&seed[1])], vec![qp(&[0]), qp(&seed[2])]];
            let Ok(x) = hessian_index(&a, &jet) else { return Ok(()) };
            let p: Matrix<Poly<Rationals>> = vec![vec![qp(&seed[3]), qp(&seed[4])], vec![qp(&seed[5]), qp(&seed[6])]];
            prop_assume!(a.is_unit(&residue_det(&a, &p)));
            let h = hessian_matrix(&a, &jet);
            // P^T H P
            let m = a.modulus();
            let ph: Matrix<Poly<Rationals>> = (0..2).map(|r| (0..2).map(|c| {
                (0..2).fold(qp(&[0]), |acc, k| &acc + &p[k][r].mul_mod(&h[k][c], m))
            }).collect()).collect();
            let php: Matrix<Poly<Rationals>> = (0..2).map(|r| (0..2).map(|c| {
                (0..2).fold(qp(&[0]), |acc, k| &acc + &ph[r][k].mul_mod(&p[k][c], m))
            }).collect()).collect();
            let y = nondeg_local_index(&a, &php).unwrap();
            prop_assert!(gw_equal(&tr(&x), &tr(&y)).unwrap());
        }

        // A coordinate change t -> v t turns s = u t^n into (u v^{-n}) t^n and
        // twists the orientation by <v>, so the class is unchanged under
        // u -> u v^{n+1} (equivalently u v^{1-n}).
        #[test]
        fn exponent_scaling(a in residue_algebra(), u in elem(), v in elem(), n in 1u64..6) {
            let (u, v) = (qp(&u), qp(&v));
            prop_assume!(a.is_unit(&u) && a.is_unit(&v));
            let scaled = u.mul_mod(&v.pow(n as u32 + 1), a.modulus());
            let x = tr(&line_local_index(&a, &u, n).unwrap());
            let y = tr(&line_local_index(&a, &scaled, n).unwrap());
            prop_assert!(gw_equal(&x, &y).unwrap());
        }
    }
}
