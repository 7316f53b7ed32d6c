use num_rational::BigRational;

use super::{fp_factor, zassenhaus, Poly, PolyError};
use crate::field::{FieldOps, PrimeField, Rationals, Reals};

/// Largest degree accepted by [`factor`].
pub const MAX_FACTOR_DEGREE: usize = 64;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// `unit * prod(f_i^e_i)` with monic irreducible, pairwise coprime `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<K: FieldOps> {
    pub unit: K::Elem,
    pub factors: Vec<(Poly<K>, u32)>,
}

impl<K: FieldOps> Factorization<K> {
    pub fn expand(&self, k: &K) -> Poly<K> {
        self.factors
            .iter()
            .fold(Poly::constant(k, self.unit.clone()), |acc, (f, e)| &acc * &f.pow(*e))
    }
}

/// Fields over which squarefree polynomials can be split into irreducibles.
pub trait Factorable: FieldOps {
    /// Monic irreducible factors of a monic squarefree polynomial of
    /// positive degree.
    fn split_squarefree(f: &Poly<Self>, seed: u64) -> Vec<Poly<Self>>;
}

impl Factorable for PrimeField {
    fn split_squarefree(f: &Poly<Self>, seed: u64) -> Vec<Poly<Self>> {
        fp_factor::factor_squarefree(f, seed)
    }
}

impl Factorable for Rationals {
    fn split_squarefree(f: &Poly<Self>, seed: u64) -> Vec<Poly<Self>> {
        zassenhaus::factor_squarefree(f, seed)
    }
}

// Real closed inputs have rational coefficients; they are split over Q.
impl Factorable for Reals {
    fn split_squarefree(f: &Poly<Self>, seed: u64) -> Vec<Poly<Self>> {
        let fq = f.map_coeffs(&Rationals, |c: &BigRational| c.clone());
        zassenhaus::factor_squarefree(&fq, seed)
            .into_iter()
            .map(|g| g.map_coeffs(&Reals, |c| c.clone()))
            .collect()
    }
}

pub fn factor<K: Factorable>(f: &Poly<K>) -> Result<Factorization<K>, PolyError> {
    factor_seeded(f, DEFAULT_SEED)
}

/// Complete factorization; the seed drives the randomized splitting over F_p.
pub fn factor_seeded<K: Factorable>(f: &Poly<K>, seed: u64) -> Result<Factorization<K>, PolyError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if n > MAX_FACTOR_DEGREE {
        return Err(PolyError::DegreeLimitExceeded { degree: n, limit: MAX_FACTOR_DEGREE });
    }
    let unit = f.leading().unwrap().clone();
    let mut factors = Vec::new();
    for (g, e) in f.squarefree_decomposition()? {
        for h in K::split_squarefree(&g, seed) {
            factors.push((h, e));
        }
    }
    factors.sort_by_key(|(g, e)| (g.sort_key(), *e));
    Ok(Factorization { unit, factors })
}

/// Product of the distinct monic irreducible factors of `f`.
pub fn squarefree_part<K: FieldOps>(f: &Poly<K>) -> Result<Poly<K>, PolyError> {
    let k = f.field().clone();
    Ok(f.squarefree_decomposition()?
        .into_iter()
        .fold(Poly::one(&k), |acc, (g, _)| &acc * &g))
}

pub fn is_irreducible<K: Factorable>(f: &Poly<K>) -> Result<bool, PolyError> {
    match f.degree() {
        None => Err(PolyError::ZeroPolynomial),
        Some(0) => Ok(false),
        Some(_) => {
            let fac = factor(f)?;
            Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(&Rationals, c)
    }

    #[test]
    fn spec_factor_examples() {
        let f = factor(&qp(&[-1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(qp(&[-1, 1]), 1), (qp(&[1, 1]), 1)]);
        let k = PrimeField::new(5).unwrap();
        let f = factor(&Poly::from_i64s(&k, &[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            f.factors,
            vec![(Poly::from_i64s(&k, &[2, 0, 1]), 1), (Poly::from_i64s(&k, &[3, 0, 1]), 1)]
        );
        assert!(is_irreducible(&qp(&[-2, 0, 1])).unwrap());
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(&qp(&[0, 0, 1])).unwrap(), qp(&[0, 1]));
        let f = &qp(&[-1, 1]).pow(2) * &qp(&[2, 1]);
        assert_eq!(squarefree_part(&f).unwrap(), &qp(&[-1, 1]) * &qp(&[2, 1]));
        // t^4 + 2t^2 + 1 against gcd(f, f') computed by hand: f/gcd = t^2 + 1
        assert_eq!(squarefree_part(&qp(&[1, 0, 2, 0, 1])).unwrap(), qp(&[1, 0, 1]));
        assert_eq!(squarefree_part(&Poly::zero(&Rationals)), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn degree_limit() {
        let mut c = vec![0i64; 66];
        c[65] = 1;
        assert!(matches!(factor(&qp(&c)), Err(PolyError::DegreeLimitExceeded { .. })));
    }

    #[test]
    fn real_closed_uses_rational_splitting() {
        let f = Poly::from_i64s(&Reals, &[-2, 0, 1]);
        assert_eq!(factor(&f).unwrap().factors.len(), 1);
    }

    fn small_coeffs(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..=5, 1..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn multiply_back_over_q(c in small_coeffs(12)) {
            let f = qp(&c);
            prop_assume!(!f.is_zero());
            let fac = factor(&f).unwrap();
            prop_assert_eq!(fac.expand(&Rationals), f);
            for (g, _) in &fac.factors {
                prop_assert!(g.is_monic());
            }
        }

        #[test]
        fn multiply_back_over_fp(c in small_coeffs(12), pi in 0usize..4) {
            let p = [3u64, 5, 7, 13][pi];
            let k = PrimeField::new(p).unwrap();
            let f = Poly::from_i64s(&k, &c);
            prop_assume!(!f.is_zero());
            let fac = factor(&f).unwrap();
            prop_assert_eq!(fac.expand(&k), f);
            for (g, _) in &fac.factors {
                // irreducible: no proper factor found by distinct-degree splitting
                prop_assert_eq!(PrimeField::split_squarefree(g, 99).len(), 1);
            }
        }

        #[test]
        fn rational_factors_refine_mod_p(c in small_coeffs(10)) {
            let f = qp(&c);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let fac = factor(&f).unwrap();
            let sqf = squarefree_part(&f).unwrap();
            let disc = sqf.discriminant().unwrap();
            for p in [5u64, 7, 11, 13] {
                let k = PrimeField::new(p).unwrap();
                let red = |g: &Poly<Rationals>| -> Option<Poly<PrimeField>> {
                    let c: Result<Vec<u64>, _> = g.coeffs().iter().map(|x| k.from_rational(x)).collect();
                    c.ok().map(|c| Poly::new(&k, c))
                };
                let Ok(dp) = k.from_rational(&disc) else { continue };
                let Some(sp) = red(&sqf) else { continue };
                let reds: Option<Vec<Poly<PrimeField>>> = fac.factors.iter().map(|(g, _)| red(g)).collect();
                let Some(reds) = reds else { continue };
                if dp == 0 {
                    continue;
                }
                // each rational factor's reduction is a product of F_p factors
                let mut total = 0;
                for ((g, _), gp) in fac.factors.iter().zip(&reds) {
                    let sub = factor(gp).unwrap();
                    let deg: usize = sub.factors.iter().map(|(h, e)| h.degree().unwrap() * *e as usize).sum();
                    prop_assert_eq!(deg, g.degree().unwrap());
                    total += sub.factors.len();
                }
                let whole = factor(&sp).unwrap();
                prop_assert_eq!(total, whole.factors.len());
            }
        }

        #[test]
        fn squarefree_part_divides_and_is_separable(c in small_coeffs(6), e in 1u32..3) {
            let f = qp(&c).pow(e);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let s = squarefree_part(&f).unwrap();
            prop_assert!(s.divides(&f));
            prop_assert!(!s.discriminant().unwrap().eq(&BigRational::from_integer(0.into())));
        }
    }
}
