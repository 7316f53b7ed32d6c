//! Cantor–Zassenhaus factorization of squarefree polynomials over F_p.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::field::PrimeField;

/// Monic irreducible factors of a monic squarefree polynomial.
pub(crate) fn factor_squarefree(f: &Poly<PrimeField>, seed: u64) -> Vec<Poly<PrimeField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f) {
        equal_degree(&g, d, &mut rng, &mut out);
    }
    out
}

/// Splits `f` into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly<PrimeField>) -> Vec<(Poly<PrimeField>, usize)> {
    let k = f.field();
    let p = BigUint::from(k.modulus());
    let x = Poly::x(k);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.pow_mod(&p, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
    }
    if let Some(d) = rest.degree() {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

fn random_poly(k: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Poly<PrimeField> {
    let c = (0..n).map(|_| rng.gen_range(0..k.modulus())).collect();
    Poly::new(k, c)
}

fn equal_degree(
    g: &Poly<PrimeField>,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<PrimeField>>,
) {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.monic());
        return;
    }
    let k = g.field();
    let q = BigUint::from(k.modulus()).pow(d as u32);
    let e = (q - BigUint::one()) >> 1;
    let one = Poly::one(k);
    loop {
        let a = random_poly(k, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = &a.pow_mod(&e, g) - &one;
        let h = b.gcd(g);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let other = g.exact_div(&h).unwrap();
            equal_degree(&h, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}
