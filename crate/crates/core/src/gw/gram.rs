//! Class in GW(k) of a symmetric Gram matrix.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::classify::{hasse_at_ints, RatInvariants};
use super::{GWElement, GwError};
use crate::arith;
use crate::field::{Field, FieldOps, Place, RatClass, SquareClass};
use crate::linalg::{diagonalize_symmetric, Matrix};

/// Entries above this many bits are not factored directly.
const DIRECT_BITS: u64 = 100;

/// The class of the bilinear form with Gram matrix `gram`.
pub fn gram_class<K: FieldOps>(k: &K, gram: &Matrix<K::Elem>) -> Result<GWElement, GwError> {
    let n = gram.len();
    if n == 0 {
        return Ok(GWElement::zero(k.field()));
    }
    if gram.iter().any(|r| r.len() != n) {
        return Err(GwError::Degenerate);
    }
    let d = diagonalize_symmetric(k, gram);
    if d.iter().any(|x| k.is_zero(x)) {
        return Err(GwError::Degenerate);
    }
    if k.field() != Field::Rational {
        let classes = d.iter().map(|x| k.square_class(x)).collect::<Result<Vec<_>, _>>()?;
        return GWElement::from_terms(k.field(), classes.into_iter().map(|a| (a, 1)));
    }
    let q: Vec<BigRational> = d.iter().map(|x| k.to_rational(x).unwrap()).collect();
    let small = q.iter().all(|x| x.numer().bits() <= DIRECT_BITS && x.denom().bits() <= DIRECT_BITS);
    let classes = if small {
        q.iter().map(RatClass::of_rational).collect::<Result<Vec<_>, _>>()?
    } else {
        let entries: Vec<Vec<BigRational>> =
            gram.iter().map(|r| r.iter().map(|x| k.to_rational(x).unwrap()).collect()).collect();
        realize_from_huge_diagonal(&entries, &q)
    };
    GWElement::from_terms(Field::Rational, classes.into_iter().map(|a| (SquareClass::Rational(a), 1)))
}

/// When the diagonal entries are too large to factor, the form is rebuilt
/// from its invariants. The determinant is small, and after clearing
/// denominators the form is unimodular at every odd prime not dividing
/// the determinant or the denominators, so its Hasse invariant is trivial
/// there. The Hasse invariant at the remaining places needs only
/// valuations and residue symbols of the large entries.
fn realize_from_huge_diagonal(gram: &[Vec<BigRational>], diag: &[BigRational]) -> Vec<RatClass> {
    let det = diag.iter().fold(BigRational::one(), |acc, x| acc * x);
    let lambda = gram.iter().flatten().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mags: Vec<BigUint> = [det.numer().abs(), det.denom().clone(), lambda]
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.magnitude().clone())
        .collect();
    let mut places: BTreeSet<Place> = arith::prime_support(&mags).into_iter().map(Place::Prime).collect();
    places.insert(Place::prime(2));
    places.insert(Place::RealPlace);
    let ints: Vec<_> = diag.iter().map(|x| x.numer() * x.denom()).collect();
    let hasse = places.into_iter().filter(|v| hasse_at_ints(&ints, v) == -1).collect();
    let sigma = diag.iter().map(|x| if x.is_negative() { -1 } else { 1 }).sum();
    let inv = RatInvariants { n: diag.len(), d: RatClass::of_rational(&det).unwrap(), sigma, hasse };
    inv.realize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::gw::{gw_equal, QuadForm};
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn hyperbolic_plane() {
        let g = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        let x = gram_class(&Rationals, &g).unwrap();
        assert!(gw_equal(&x, &GWElement::hyperbolic(Field::Rational)).unwrap());
        let k = PrimeField::new(7).unwrap();
        let x = gram_class(&k, &vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(gw_equal(&x, &GWElement::hyperbolic(k.field())).unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        let g = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert_eq!(gram_class(&Rationals, &g), Err(GwError::Degenerate));
    }

    #[test]
    fn huge_route_agrees_with_direct_route() {
        // conjugate a small diagonal form by a matrix with large entries
        let base = [3i64, -5, 7, 2];
        let big = BigInt::from(10u32).pow(40) + 7;
        let n = base.len();
        let mut p: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                p[i][j] = BigRational::from_integer(&big * BigInt::from((i * 3 + j) as i64) + 1);
            }
        }
        // G = P^T D P
        let g: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(q(0), |acc, k| acc + &p[k][r] * q(base[k]) * &p[k][c]))
                    .collect()
            })
            .collect();
        let d = diagonalize_symmetric(&Rationals, &g);
        let classes = realize_from_huge_diagonal(&g, &d);
        let x = GWElement::from_terms(Field::Rational, classes.into_iter().map(|a| (SquareClass::Rational(a), 1)))
            .unwrap();
        let y = QuadForm::from_ints(Field::Rational, &base).unwrap().to_element();
        assert!(gw_equal(&x, &y).unwrap());
        assert!(gw_equal(&gram_class(&Rationals, &g).unwrap(), &y).unwrap());
    }
}
