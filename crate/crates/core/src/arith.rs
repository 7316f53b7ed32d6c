//! Integer number theory used by the square-class machinery: primality,
//! factorization, Jacobi symbols and modular square roots.
//!
//! Factorization is the one place where exact GW(Q) arithmetic can become
//! expensive, so callers that hold several related integers should go through
//! [`prime_support`], which splits them into a coprime base by gcds before any
//! actual factoring happens.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32)
            .collect()
    })
}

/// Iterator over the primes 2, 3, 5, ... (unbounded; beyond the sieve it
/// falls back to primality testing).
pub fn primes() -> impl Iterator<Item = u64> {
    let sieved = small_primes().iter().map(|&p| p as u64);
    let tail = (TRIAL_LIMIT as u64 + 1..).filter(|&n| is_prime_u64(n));
    sieved.chain(tail)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` on machine words.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary-precision integers. Deterministic below 2^64,
/// a strong probable-prime test (Miller-Rabin plus strong Lucas) above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    num_prime::nt_funcs::is_prime(n, None).probably()
}

/// Legendre symbol `(a|p)` for an odd prime `p` on machine words.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Jacobi symbol `(a|n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i8 {
    assert!(n.is_odd(), "jacobi symbol needs an odd modulus");
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("nonnegative");
    let mut n = n.clone();
    let mut result = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let n_mod8 = (&n % 8u32).to_u32().unwrap();
            if tz % 2 == 1 && (n_mod8 == 3 || n_mod8 == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Square root modulo an odd prime by Tonelli-Shanks. Returns `None` for
/// non-residues; `Some(0)` for `a = 0`.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// `p`-adic valuation of a nonzero integer and the cofactor.
pub fn valuation(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// If `n = r^k` for some `k >= 2`, returns the smallest such root with its
/// exponent.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    let mut best: Option<(BigUint, u32)> = None;
    for k in 2..=bits {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *n {
            best = Some((r, k));
        }
    }
    best
}

fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
/// divisor of the odd composite `n`, or `None` if the iteration budget runs
/// out for every tried polynomial.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        let mut steps: u64 = 0;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = gcd_big(&q, n);
                k += m;
            }
            r *= 2;
            steps += r;
            if steps > 1 << 26 {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = gcd_big(&diff, n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

fn factor_into(n: BigUint, out: &mut Vec<(BigUint, u32)>, mult: u32) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push((n, mult));
        return;
    }
    if let Some((root, k)) = perfect_power(&n) {
        factor_into(root, out, mult * k);
        return;
    }
    if let Some(small) = n.to_u128() {
        for (p, e) in num_prime::nt_funcs::factorize128(small) {
            out.push((BigUint::from(p), mult * e as u32));
        }
        return;
    }
    let d = pollard_brent(&n).unwrap_or_else(|| {
        // Fall back to the general-purpose search in num-prime.
        num_prime::nt_funcs::factorize(n.clone())
            .into_keys()
            .next()
            .expect("composite has a prime factor")
    });
    let other = &n / &d;
    factor_into(d, out, mult);
    factor_into(other, out, mult);
}

fn merge_factors(raw: Vec<(BigUint, u32)>) -> Vec<(BigUint, u32)> {
    let mut raw = raw;
    raw.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in raw {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    merged
}

/// Complete factorization of a positive integer, sorted by prime.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut n = n.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        let p = BigUint::from(p);
        if &p * &p > n {
            break;
        }
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    factor_into(n, &mut out, 1);
    merge_factors(out)
}

/// Refines a list of positive integers into pairwise coprime factors whose
/// products generate every input.
pub fn coprime_base(ns: &[BigUint]) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = ns.iter().filter(|n| !n.is_one() && !n.is_zero()).cloned().collect();
    base.sort();
    base.dedup();
    loop {
        let mut split = None;
        'search: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'search;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = &base[i] / &g;
        let b = &base[j] / &g;
        base.remove(j);
        base.remove(i);
        for x in [a, b, g] {
            if !x.is_one() {
                base.push(x);
            }
        }
        base.sort();
        base.dedup();
    }
    base
}

/// The set of primes dividing any of the given integers.
pub fn prime_support(ns: &[BigUint]) -> BTreeSet<BigUint> {
    coprime_base(ns)
        .into_iter()
        .flat_map(|b| factor(&b).into_iter().map(|(p, _)| p))
        .collect()
}

/// Primes dividing a nonzero integer to an odd power, ascending.
pub fn odd_primes_of(n: &BigInt) -> Vec<BigUint> {
    let mag = n.magnitude();
    factor(mag)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .collect()
}

/// Sign of a nonzero integer as a boolean (`true` for negative).
pub fn is_negative(n: &BigInt) -> bool {
    n.sign() == Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sqrt(a: u64, p: u64) -> Option<u64> {
        (0..p).find(|x| x * x % p == a % p)
    }

    #[test]
    fn sqrt_mod_matches_square_tables() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 101] {
            for a in 0..p {
                let r = sqrt_mod(a, p);
                assert_eq!(r.is_some(), brute_sqrt(a, p).is_some(), "a={a} p={p}");
                if let Some(r) = r {
                    assert_eq!(r * r % p, a);
                }
            }
        }
        assert!(matches!(sqrt_mod(4, 5), Some(2) | Some(3)));
        assert!(matches!(sqrt_mod(2, 7), Some(3) | Some(4)));
        assert_eq!(sqrt_mod(3, 5), None);
    }

    #[test]
    fn jacobi_agrees_with_legendre() {
        for p in [3u64, 5, 7, 11, 13, 10007] {
            for a in -30i64..30 {
                let l = legendre_u64(a.rem_euclid(p as i64) as u64, p);
                assert_eq!(jacobi(&BigInt::from(a), &BigUint::from(p)), l);
            }
        }
    }

    #[test]
    fn factor_reassembles() {
        let cases = ["1", "2", "360", "1000000007", "123456789012345678901234567890123"];
        for s in cases {
            let n: BigUint = s.parse().unwrap();
            let f = factor(&n);
            let prod = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, n);
            assert!(f.iter().all(|(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn factor_handles_large_prime_powers() {
        let p: BigUint = "1000000000000000000000000000057".parse().unwrap();
        let n = p.pow(3) * BigUint::from(12u32);
        let f = factor(&n);
        assert_eq!(f.last().unwrap(), &(p, 3));
    }

    #[test]
    fn coprime_base_splits_shared_factors() {
        let a = BigUint::from(2u32 * 3 * 3 * 5);
        let b = BigUint::from(3u32 * 7);
        let base = coprime_base(&[a, b]);
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                assert!(base[i].gcd(&base[j]).is_one());
            }
        }
        let support = prime_support(&[BigUint::from(90u32), BigUint::from(21u32)]);
        let expect: BTreeSet<BigUint> = [2u32, 3, 5, 7].into_iter().map(BigUint::from).collect();
        assert_eq!(support, expect);
    }
}
