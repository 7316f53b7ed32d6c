//! Classification of nondegenerate forms over Q by rank, discriminant,
//! signature and Hasse invariants, and realization of a diagonal form from
//! a consistent set of invariants.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith;
use crate::field::{hilbert_class, is_local_square, Place, RatClass};

/// Complete invariants of a nondegenerate form over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatInvariants {
    pub n: usize,
    pub d: RatClass,
    pub sigma: i64,
    /// Places where the Hasse invariant is -1.
    pub hasse: BTreeSet<Place>,
}

fn two() -> Place {
    Place::prime(2)
}

fn minus_one() -> RatClass {
    RatClass::one().neg()
}

fn sign_class(negative: bool) -> RatClass {
    if negative {
        minus_one()
    } else {
        RatClass::one()
    }
}

fn places_of(classes: &[&RatClass]) -> BTreeSet<Place> {
    let mut s = BTreeSet::from([Place::RealPlace, two()]);
    for c in classes {
        for p in c.primes() {
            s.insert(Place::Prime(p.clone()));
        }
    }
    s
}

/// Hasse invariant `prod_{i<j} (a_i, a_j)_v` of a diagonal form at `v`.
pub(crate) fn hasse_at(diag: &[RatClass], v: &Place) -> i8 {
    let mut eps = 1;
    let mut acc = RatClass::one();
    for (k, a) in diag.iter().enumerate() {
        if k > 0 {
            eps *= hilbert_class(&acc, a, v);
        }
        acc = acc.mul(a);
    }
    eps
}

impl RatInvariants {
    pub fn of_diag(diag: &[RatClass]) -> Self {
        let d = diag.iter().fold(RatClass::one(), |acc, a| acc.mul(a));
        let sigma = diag.iter().map(|a| if a.is_negative() { -1 } else { 1 }).sum();
        let places = places_of(&diag.iter().collect::<Vec<_>>());
        let hasse = places.into_iter().filter(|v| hasse_at(diag, v) == -1).collect();
        RatInvariants { n: diag.len(), d, sigma, hasse }
    }

    pub fn eps(&self, v: &Place) -> i8 {
        if self.hasse.contains(v) {
            -1
        } else {
            1
        }
    }

    /// Places outside of which every local condition is automatic.
    fn bad_places(&self) -> BTreeSet<Place> {
        let mut s = places_of(&[&self.d]);
        s.extend(self.hasse.iter().cloned());
        s
    }

    /// Whether the form represents zero over the completion at `v`.
    pub fn isotropic_at(&self, v: &Place) -> bool {
        if self.n < 2 {
            return false;
        }
        if *v == Place::RealPlace {
            return self.sigma.unsigned_abs() < self.n as u64;
        }
        let eps = self.eps(v);
        match self.n {
            2 => is_local_square(&self.d.neg(), v),
            3 => hilbert_class(&minus_one(), &self.d.neg(), v) == eps,
            4 => !is_local_square(&self.d, v) || eps == hilbert_class(&minus_one(), &minus_one(), v),
            _ => true,
        }
    }

    /// Hasse–Minkowski: isotropic over Q iff isotropic everywhere.
    pub fn is_isotropic(&self) -> bool {
        match self.n {
            0 | 1 => false,
            2 => self.d.neg().is_one(),
            _ => self.bad_places().iter().all(|v| self.isotropic_at(v)),
        }
    }

    /// A place where the form is anisotropic, if the form is anisotropic.
    pub fn anisotropic_place(&self) -> Option<Place> {
        if self.n == 1 {
            return Some(Place::RealPlace);
        }
        self.bad_places().into_iter().find(|v| !self.isotropic_at(v))
    }

    /// Invariants of `q'` where `q = q' + h`.
    pub fn split_hyperbolic(&self) -> Self {
        assert!(self.n >= 2);
        let d = self.d.neg();
        let mut places = self.bad_places();
        places.extend(places_of(&[&d]));
        let hasse = places.into_iter().filter(|v| self.eps(v) * hilbert_class(&d, &minus_one(), v) == -1).collect();
        RatInvariants { n: self.n - 2, d, sigma: self.sigma, hasse }
    }

    /// Invariants of `q'` where `q = <a> + q'`.
    fn peel(&self, a: &RatClass) -> Self {
        let d = self.d.mul(a);
        let sigma = self.sigma - if a.is_negative() { -1 } else { 1 };
        let mut places = self.bad_places();
        places.extend(places_of(&[a, &d]));
        let hasse = places.into_iter().filter(|v| self.eps(v) * hilbert_class(a, &d, v) == -1).collect();
        RatInvariants { n: self.n - 1, d, sigma, hasse }
    }

    /// A diagonal form with these invariants. Panics if the invariants are
    /// inconsistent, which cannot happen for invariants of an actual form.
    pub fn realize(&self) -> Vec<RatClass> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.d.clone()],
            2 => self.realize_binary(),
            3 => {
                let a = self.ternary_head();
                let mut out = vec![a.clone()];
                out.extend(self.peel(&a).realize());
                out
            }
            n => {
                let s = sign_class(self.sigma <= -(n as i64));
                let mut out = vec![s.clone()];
                out.extend(self.peel(&s).realize());
                out
            }
        }
    }

    /// First entry of a ternary form, chosen so the remaining binary form
    /// exists: at each bad place `-a d` must avoid the one excluded class.
    fn ternary_head(&self) -> RatClass {
        let mut s = self.bad_places();
        s.insert(two());
        let mut primes = Vec::new();
        let mut even = false;
        for v in &s {
            if let Place::Prime(p) = v {
                if *p == BigUint::from(2u32) {
                    even = !self.d.primes().contains(p);
                } else if !self.d.primes().contains(p) {
                    primes.push(p.clone());
                }
            }
        }
        if even {
            primes.push(BigUint::from(2u32));
        }
        RatClass::from_parts(self.sigma < 0, primes)
    }

    /// `<b, b d>` with `(b, -d)_v = eps_v` at every place, found by linear
    /// algebra over F_2 on the Hilbert symbols of a generating set.
    fn realize_binary(&self) -> Vec<RatClass> {
        let md = self.d.neg();
        let places: Vec<Place> = self.bad_places().into_iter().collect();
        let mut gens: Vec<RatClass> = vec![minus_one()];
        for v in &places {
            if let Place::Prime(p) = v {
                gens.push(RatClass::from_parts(false, vec![p.clone()]));
            }
        }
        let target: Vec<bool> = places.iter().map(|v| self.eps(v) == -1).collect();
        let column = |g: &RatClass| places.iter().map(|v| hilbert_class(g, &md, v) == -1).collect::<Vec<bool>>();
        let mut cols: Vec<Vec<bool>> = gens.iter().map(column).collect();
        let mut aux = arith::primes().skip(1);
        let bad: BTreeSet<BigUint> = places
            .iter()
            .filter_map(|v| if let Place::Prime(p) = v { Some(p.clone()) } else { None })
            .collect();
        for _ in 0..10_000 {
            if let Some(x) = solve_f2(&cols, &target) {
                let b = gens.iter().zip(&x).filter(|(_, &on)| on).fold(RatClass::one(), |acc, (g, _)| acc.mul(g));
                let bd = b.mul(&self.d);
                return vec![b, bd];
            }
            // an auxiliary prime q with -d a square mod q only affects places
            // in `places` (and is trivial at q itself)
            loop {
                let q = BigUint::from(aux.next().unwrap());
                if bad.contains(&q) || arith::jacobi(&md.value(), &q) != 1 {
                    continue;
                }
                let g = RatClass::from_parts(false, vec![q]);
                cols.push(column(&g));
                gens.push(g);
                break;
            }
        }
        panic!("inconsistent invariants for a binary form: {self:?}");
    }
}

/// Solves `sum x_j cols_j = target` over F_2.
fn solve_f2(cols: &[Vec<bool>], target: &[bool]) -> Option<Vec<bool>> {
    let m = target.len();
    let n = cols.len();
    // rows of the augmented matrix
    let mut rows: Vec<Vec<bool>> = (0..m)
        .map(|i| {
            let mut r: Vec<bool> = cols.iter().map(|c| c[i]).collect();
            r.push(target[i]);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        for i in 0..m {
            if i != r && rows[i][c] {
                let src = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&src) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n]) {
        return None;
    }
    let mut x = vec![false; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n];
    }
    Some(x)
}

/// Places relevant to comparing two diagonal forms.
pub(crate) fn comparison_places(a: &[RatClass], b: &[RatClass]) -> BTreeSet<Place> {
    let all: Vec<&RatClass> = a.iter().chain(b).collect();
    places_of(&all)
}

/// Integer representative of a huge diagonal entry is fine for Hilbert
/// symbols: only valuations and residues matter.
pub(crate) fn hasse_at_ints(diag: &[BigInt], v: &Place) -> i8 {
    let mut eps = 1;
    let mut acc = BigInt::one();
    for (k, a) in diag.iter().enumerate() {
        if k > 0 {
            eps *= crate::field::hilbert_int(&acc, a, v);
        }
        acc *= a;
    }
    eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rc(n: i64) -> RatClass {
        RatClass::of_integer(&n.into()).unwrap()
    }

    fn diag(v: &[i64]) -> Vec<RatClass> {
        v.iter().map(|&x| rc(x)).collect()
    }

    /// Isotropy by search over small integer vectors; only a one-sided oracle.
    fn small_zero(v: &[i64], bound: i64) -> bool {
        let n = v.len();
        let mut x = vec![-bound; n];
        loop {
            if x.iter().any(|&t| t != 0) && x.iter().zip(v).map(|(a, b)| a * a * b).sum::<i64>() == 0 {
                return true;
            }
            let mut i = 0;
            while i < n {
                x[i] += 1;
                if x[i] <= bound {
                    break;
                }
                x[i] = -bound;
                i += 1;
            }
            if i == n {
                return false;
            }
        }
    }

    #[test]
    fn classical_examples() {
        assert!(RatInvariants::of_diag(&diag(&[1, -1])).is_isotropic());
        assert!(!RatInvariants::of_diag(&diag(&[1, 1, 1])).is_isotropic());
        // x^2 + y^2 - 3 z^2 has no rational zero (3 is not a sum of two squares)
        assert!(!RatInvariants::of_diag(&diag(&[1, 1, -3])).is_isotropic());
        assert!(RatInvariants::of_diag(&diag(&[1, 1, -2])).is_isotropic());
        assert!(!RatInvariants::of_diag(&diag(&[1, 1, 1, -7])).is_isotropic());
        assert!(RatInvariants::of_diag(&diag(&[1, 1, 1, -1, 5])).is_isotropic());
    }

    #[test]
    fn ternary_isotropy_matches_search() {
        let vals = [-7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7];
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    let inv = RatInvariants::of_diag(&diag(&[a, b, c]));
                    if small_zero(&[a, b, c], 12) {
                        assert!(inv.is_isotropic(), "{a} {b} {c}");
                    } else {
                        // Legendre: a solution exists with |x| <= sqrt(|bc|) etc.
                        assert!(!inv.is_isotropic(), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn realization_reproduces_invariants(v in prop::collection::vec(prop::sample::select(vec![-15i64, -10, -7, -6, -3, -2, -1, 1, 2, 3, 5, 6, 7, 11, 13, 30]), 1..7)) {
            let inv = RatInvariants::of_diag(&diag(&v));
            let r = inv.realize();
            prop_assert_eq!(RatInvariants::of_diag(&r), inv);
        }

        #[test]
        fn splitting_then_adding_h(v in prop::collection::vec(prop::sample::select(vec![-5i64, -3, -2, -1, 1, 2, 3, 5, 7]), 2..7)) {
            let inv = RatInvariants::of_diag(&diag(&v));
            prop_assume!(inv.is_isotropic());
            let mut r = inv.split_hyperbolic().realize();
            r.push(rc(1));
            r.push(rc(-1));
            prop_assert_eq!(RatInvariants::of_diag(&r), inv);
        }
    }
}
