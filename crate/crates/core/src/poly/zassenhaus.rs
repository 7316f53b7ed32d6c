//! Factorization over Q: reduction mod p, quadratic Hensel lifting along a
//! factor tree, and brute-force recombination of the lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fp_factor, Poly};
use crate::arith;
use crate::field::{FieldOps, PrimeField, Rationals};

type ZPoly = Vec<BigInt>;

const PRIME_TRIALS: usize = 3;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsym(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    ztrim(c)
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = zmod(a, m);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mod_floor(m);
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] = (&r[i + j] - &c * &b[j]).mod_floor(m);
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (ztrim(q), ztrim(r))
}

fn to_fp(a: &[BigInt], k: &PrimeField) -> Poly<PrimeField> {
    let p = BigInt::from(k.modulus());
    Poly::new(k, a.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

fn from_fp(a: &Poly<PrimeField>) -> ZPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> ZPoly {
    let c = content(a);
    let sign = if a.last().map(|x| x.is_negative()).unwrap_or(false) { -BigInt::one() } else { BigInt::one() };
    let c = c * sign;
    a.iter().map(|x| x / &c).collect()
}

/// Primitive integer polynomial with positive leading coefficient,
/// proportional to `f`.
fn integer_primitive(f: &Poly<Rationals>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let z: ZPoly = f.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&z)
}

fn to_q(a: &[BigInt]) -> Poly<Rationals> {
    Poly::new(&Rationals, a.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn eval0(a: &[BigInt]) -> BigInt {
    a.first().cloned().unwrap_or_else(BigInt::zero)
}

/// One quadratic Hensel step (f = g h, s g + t h = 1) taken modulo `m`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(f: &ZPoly, g: &ZPoly, h: &ZPoly, s: &ZPoly, t: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zmod(&zsub(f, &zmul(g, h)), m);
    let (q, r) = zdivrem(&zmul(s, &e), h, m);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m);
    let h2 = zmod(&zadd(h, &r), m);
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &[BigInt::one()]), m);
    let (c, d) = zdivrem(&zmul(s, &b), &h2, m);
    let s2 = zmod(&zsub(s, &d), m);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), m);
    (g2, h2, s2, t2)
}

/// Lifts `f = lc * prod(facs) mod p` to monic factors modulo `target`.
fn lift_tree(f: &ZPoly, lc: &BigInt, facs: &[Poly<PrimeField>], k: &PrimeField, target: &BigInt) -> Vec<ZPoly> {
    if facs.len() == 1 {
        let inv = lc.mod_floor(target).modinv(target).expect("leading coefficient prime to p");
        let u: ZPoly = f.iter().map(|c| c * &inv).collect();
        return vec![zmod(&u, target)];
    }
    let (a, b) = facs.split_at(facs.len() / 2);
    let prod = |fs: &[Poly<PrimeField>]| fs.iter().fold(Poly::one(k), |acc, x| &acc * x);
    let lc_p = k.from_rational(&BigRational::from_integer(lc.clone())).unwrap();
    let g0 = prod(a).scale(&lc_p);
    let h0 = prod(b);
    let (one, s0, t0) = g0.ext_gcd(&h0);
    debug_assert!(one.is_one());
    let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0), from_fp(&t0));
    let mut m = BigInt::from(k.modulus());
    while &m < target {
        let m2 = (&m * &m).min(target.clone());
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m2);
        m = m2;
    }
    let mut out = lift_tree(&g, lc, a, k, target);
    out.extend(lift_tree(&h, &BigInt::one(), b, k, target));
    out
}

fn divides_exactly(g: &ZPoly, f: &ZPoly) -> Option<ZPoly> {
    let (q, r) = to_q(f).divrem(&to_q(g)).ok()?;
    if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    for i in (0..s).rev() {
        if idx[i] < n - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn recombine(f: &ZPoly, lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut rest = lifted;
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= rest.len() {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc = f.last().unwrap().clone();
            let f0 = eval0(&f);
            let c0 = idx.iter().fold(lc.clone(), |acc, &i| (acc * eval0(&rest[i])).mod_floor(modulus));
            let c0 = zsym(&[c0], modulus).pop().unwrap_or_else(BigInt::zero);
            let plausible = if f0.is_zero() { true } else { !c0.is_zero() && (&lc * &f0).is_multiple_of(&c0) };
            if plausible {
                let cand = idx.iter().fold(vec![lc.clone()], |acc, &i| zmod(&zmul(&acc, &rest[i]), modulus));
                let g = primitive(&zsym(&cand, modulus));
                if g.len() > 1 {
                    if let Some(q) = divides_exactly(&g, &f) {
                        found.push(g);
                        f = primitive(&q);
                        for &i in idx.iter().rev() {
                            rest.remove(i);
                        }
                        continue 'outer;
                    }
                }
            }
            if !next_combination(&mut idx, rest.len()) {
                break;
            }
        }
        s += 1;
    }
    if f.len() > 1 {
        found.push(f);
    }
    found
}

/// Monic irreducible factors over Q of a monic squarefree polynomial.
pub(crate) fn factor_squarefree(f: &Poly<Rationals>, seed: u64) -> Vec<Poly<Rationals>> {
    if f.degree().unwrap_or(0) <= 1 {
        return vec![f.monic()];
    }
    let fz = integer_primitive(f);
    let lc = fz.last().unwrap().clone();
    let mut best: Option<(PrimeField, Vec<Poly<PrimeField>>)> = None;
    let mut tried = 0;
    for p in arith::primes().skip(1) {
        if tried >= PRIME_TRIALS {
            break;
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let k = PrimeField::new(p).unwrap();
        let fp = to_fp(&fz, &k);
        if !fp.gcd(&fp.derivative()).is_one() {
            continue;
        }
        tried += 1;
        let facs = fp_factor::factor_squarefree(&fp.monic(), seed ^ p);
        if best.as_ref().map(|(_, b)| facs.len() < b.len()).unwrap_or(true) {
            best = Some((k, facs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (k, facs) = best.expect("some prime keeps f squarefree");
    if facs.len() == 1 {
        return vec![f.monic()];
    }
    let n = fz.len() - 1;
    let norm2: BigInt = fz.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32) * lc.abs();
    let p = BigInt::from(k.modulus());
    let mut target = p.clone();
    while target <= &bound * 2u32 {
        target *= &p;
    }
    let lifted = lift_tree(&fz, &lc, &facs, &k, &target);
    recombine(&fz, lifted, &target)
        .into_iter()
        .map(|g| to_q(&g).monic())
        .collect()
}
