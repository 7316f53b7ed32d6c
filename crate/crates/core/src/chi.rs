//! GW-valued Euler characteristics.
//!
//! Closed forms for projective spaces, cellular schemes, curves, quadrics and
//! diagonal hypersurfaces, the formal properties of χ as combinators, and a
//! second, independent computation of χ for diagonal hypersurfaces by
//! degenerating along a pencil and transferring the local contributions.

use thiserror::Error;

use crate::field::{Field, FieldError, FieldOps};
use crate::gw::{GWElement, GwError};
use crate::poly::Poly;
use crate::transfer::{etale_algebra, scaled_trace_form, transfer, ResidueGWElement, TransferError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChiError {
    #[error("characteristic {char} divides 2m = {}", 2 * m)]
    CharDividesDegree { char: u64, m: u64 },
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("{0}")]
    BadParameter(&'static str),
    #[error("difference of top Chern degrees {0} is odd")]
    OddDifference(i64),
    #[error("integer overflow")]
    Overflow,
    #[error("recursion produced rank {got}, expected {want} up to an even number")]
    RankParity { got: i64, want: i64 },
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

/// χ(ℙⁿ): `(n+1)/2 h` for odd `n`, `<1> + n/2 h` for even `n`.
pub fn chi_pn(field: Field, n: u64) -> GWElement {
    let h = GWElement::hyperbolic(field);
    if n % 2 == 1 {
        h.scale(n.div_ceil(2) as i64)
    } else {
        &GWElement::one(field) + &h.scale((n / 2) as i64)
    }
}

/// A filtration by closed subschemes whose successive differences are
/// disjoint unions of affine spaces; `counts[i]` cells of dimension `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStructure {
    counts: Vec<u64>,
}

impl CellStructure {
    pub fn new(counts: Vec<u64>) -> Result<Self, ChiError> {
        if counts.is_empty() {
            return Err(ChiError::BadParameter("a cell structure needs at least one count"));
        }
        Ok(CellStructure { counts })
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

/// `sum_i m_i <-1>^{n-i}`.
pub fn chi_cellular(field: Field, c: &CellStructure) -> GWElement {
    let n = c.dim();
    let (one, minus) = (GWElement::one(field), GWElement::minus_one(field));
    c.counts.iter().enumerate().fold(GWElement::zero(field), |acc, (i, &m)| {
        let unit = if (n - i).is_multiple_of(2) { &one } else { &minus };
        &acc + &unit.scale(m as i64)
    })
}

/// `(1 - g) h` for a smooth projective curve of genus `g`.
pub fn chi_curve(field: Field, genus: u64) -> GWElement {
    GWElement::hyperbolic(field).scale(1 - genus as i64)
}

/// `(-1)^p <-1>^q` for the motivic sphere `S^{p,q}`.
pub fn chi_sphere(field: Field, p: i64, q: i64) -> GWElement {
    let unit = if q.rem_euclid(2) == 0 { GWElement::one(field) } else { GWElement::minus_one(field) };
    unit.scale(if p.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// The formal properties of χ. The geometric hypotheses (local triviality
/// of the bundle, codimension of the blown-up center) are the caller's
/// responsibility; only the classes are combined here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combinator {
    /// χ(Y) = χ(X)·χ(F) for a fiber bundle with fiber F. Arguments `[X, F]`.
    Product,
    /// χ(Th V) = <-1>^r χ(X) for a rank `r` bundle. Arguments `[X]`.
    Thom(u64),
    /// χ(ℙ(V)) = r_ε χ(X). Arguments `[X]`.
    ProjBundle(u64),
    /// χ(blowup) = χ(X) + <-1>(c-1)_ε χ(Z) along a center of codimension `c`.
    /// Arguments `[X, Z]`.
    Blowup(u64),
}

pub fn chi_combinator(kind: Combinator, args: &[GWElement]) -> Result<GWElement, ChiError> {
    let arity = match kind {
        Combinator::Product | Combinator::Blowup(_) => 2,
        _ => 1,
    };
    if args.len() != arity {
        return Err(ChiError::BadParameter("wrong number of arguments for combinator"));
    }
    let x = &args[0];
    let field = x.field();
    Ok(match kind {
        Combinator::Product => x.try_mul(&args[1])?,
        Combinator::Thom(r) => {
            if r < 1 {
                return Err(ChiError::BadParameter("bundle rank must be at least 1"));
            }
            x.try_mul(&GWElement::minus_one(field).pow((r % 2) as u32))?
        }
        Combinator::ProjBundle(r) => {
            if r < 1 {
                return Err(ChiError::BadParameter("bundle rank must be at least 1"));
            }
            x.try_mul(&GWElement::n_epsilon(field, r))?
        }
        Combinator::Blowup(c) => {
            if c < 1 {
                return Err(ChiError::BadParameter("codimension must be at least 1"));
            }
            let corr = &GWElement::minus_one(field) * &GWElement::n_epsilon(field, c - 1);
            x.try_add(&corr.try_mul(&args[1])?)?
        }
    })
}

/// `(-<-1>)^r x`, relating the Euler classes of a rank `r` bundle and its dual.
pub fn euler_dual_transform(x: &GWElement, r: u64) -> GWElement {
    if r.is_multiple_of(2) {
        x.clone()
    } else {
        x * &GWElement::epsilon(x.field())
    }
}

/// Degree of the top Chern class of a smooth degree `m` hypersurface in
/// ℙ^{n+1}: `m * sum_{i=0}^{n} (-m)^i C(n+2, n-i)`.
pub fn chern_degree_hypersurface(n: u64, m: u64) -> Result<i64, ChiError> {
    let m = i128::from(m);
    let mut binom: i128 = 1; // C(n+2, n-i), walked from i = n down to 0
    let mut total: i128 = 0;
    for i in (0..=n).rev() {
        let term = (-m).checked_pow(i as u32).and_then(|p| p.checked_mul(binom)).ok_or(ChiError::Overflow)?;
        total = total.checked_add(term).ok_or(ChiError::Overflow)?;
        // C(n+2, k+1) = C(n+2, k) (n+2-k)/(k+1) with k = n-i
        let k = (n - i) as i128;
        binom = binom.checked_mul(n as i128 + 2 - k).ok_or(ChiError::Overflow)? / (k + 1);
    }
    let out = total.checked_mul(m).ok_or(ChiError::Overflow)?;
    i64::try_from(out).map_err(|_| ChiError::Overflow)
}

/// `X(a_0, ..., a_{n+1}; m) : sum a_i X_i^m = 0` in ℙ^{n+1}.
#[derive(Clone, Debug)]
pub struct DiagonalHypersurface<K: FieldOps> {
    field: K,
    m: u64,
    coeffs: Vec<K::Elem>,
}

impl<K: FieldOps> DiagonalHypersurface<K> {
    pub fn new(k: &K, m: u64, coeffs: Vec<K::Elem>) -> Result<Self, ChiError> {
        if m < 1 {
            return Err(ChiError::BadParameter("degree must be at least 1"));
        }
        if coeffs.len() < 2 {
            return Err(ChiError::BadParameter("need at least two coefficients"));
        }
        let p = k.characteristic();
        if p != 0 && (2 * m).is_multiple_of(p) {
            return Err(ChiError::CharDividesDegree { char: p, m });
        }
        if let Some(i) = coeffs.iter().position(|a| k.is_zero(a)) {
            return Err(ChiError::ZeroCoefficient(i));
        }
        Ok(DiagonalHypersurface { field: k.clone(), m, coeffs })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn degree(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 2
    }

    /// Product of all coefficients.
    pub fn delta(&self) -> K::Elem {
        product(&self.field, &self.coeffs)
    }
}

fn product<K: FieldOps>(k: &K, xs: &[K::Elem]) -> K::Elem {
    xs.iter().fold(k.one(), |acc, a| k.mul(&acc, a))
}

fn unit_of<K: FieldOps>(k: &K, a: &K::Elem) -> Result<GWElement, ChiError> {
    Ok(GWElement::class(k.field(), k.square_class(a)?)?)
}

/// `A h`, `A h + <m>` or `A h + <m> + <-m δ>` for (n odd), (n even, m odd),
/// (n, m even), with `A` fixed by the rank.
pub fn chi_diagonal_closed<K: FieldOps>(x: &DiagonalHypersurface<K>) -> Result<GWElement, ChiError> {
    let k = &x.field;
    let (n, m) = (x.dim() as u64, x.m);
    let deg = chern_degree_hypersurface(n, m)?;
    let f = k.field();
    let h = GWElement::hyperbolic(f);
    let mm = k.from_i64(m as i64);
    if n % 2 == 1 {
        return Ok(h.scale(deg / 2));
    }
    let unit_m = unit_of(k, &mm)?;
    if m % 2 == 1 {
        return Ok(&h.scale((deg - 1) / 2) + &unit_m);
    }
    let other = unit_of(k, &k.neg(&k.mul(&mm, &x.delta())))?;
    Ok(&(&h.scale((deg - 2) / 2) + &unit_m) + &other)
}

/// `(n+1)/2 h` for odd `n`, `n/2 h + <2> + <-2 δ>` for even `n`, where the
/// quadric lives in ℙ^{n+1} and `δ` is the discriminant of the form.
pub fn chi_quadric<K: FieldOps>(k: &K, coeffs: &[K::Elem]) -> Result<GWElement, ChiError> {
    if k.characteristic() == 2 {
        return Err(ChiError::CharDividesDegree { char: 2, m: 2 });
    }
    if coeffs.len() < 2 {
        return Err(ChiError::BadParameter("need at least two coefficients"));
    }
    if let Some(i) = coeffs.iter().position(|a| k.is_zero(a)) {
        return Err(ChiError::ZeroCoefficient(i));
    }
    let n = (coeffs.len() - 2) as i64;
    let h = GWElement::hyperbolic(k.field());
    if n % 2 == 1 {
        return Ok(h.scale((n + 1) / 2));
    }
    let two = k.from_i64(2);
    let disc = k.neg(&k.mul(&two, &product(k, coeffs)));
    Ok(&(&h.scale(n / 2) + &unit_of(k, &two)?) + &unit_of(k, &disc)?)
}

/// χ by induction on the dimension.
///
/// For even `n ≥ 2`, blow up `X` along `Z = X(a_0..a_{n-1})` and fiber the
/// blowup over ℙ¹ by `(x_n : x_{n+1})`. The critical points form the étale
/// scheme `T^m + a_{n+1}/a_n = 0`, where the differential is diagonal with
/// local index `<(-1/(a_n T^{m-1}))^n prod_{i<n} a_i> ((m-1)_ε)^n`. Its
/// transfer, minus `<-1> χ(Z)`, determines χ(X) up to a multiple of `h`
/// that is then fixed by the rank. Odd `n` gives a hyperbolic form.
pub fn chi_diagonal_recursive<K: FieldOps>(x: &DiagonalHypersurface<K>) -> Result<GWElement, ChiError> {
    let k = &x.field;
    let n = x.dim();
    let want = chern_degree_hypersurface(n as u64, x.m)?;
    let h = GWElement::hyperbolic(k.field());
    if n % 2 == 1 {
        if want % 2 != 0 {
            return Err(ChiError::RankParity { got: 0, want });
        }
        return Ok(h.scale(want / 2));
    }
    let c = &x.coeffs;
    // the critical scheme k[T]/(T^m + a_{n+1}/a_n)
    let ratio = k.div(&c[n + 1], &c[n]).expect("coefficients are nonzero");
    let g = &Poly::monomial(k, k.one(), x.m as usize) + &Poly::constant(k, ratio);
    let alg = etale_algebra(&g)?;
    if n == 0 {
        return Ok(scaled_trace_form(&alg, &Poly::one(k))?);
    }

    let z = DiagonalHypersurface { field: k.clone(), m: x.m, coeffs: c[..n].to_vec() };
    let chi_z = chi_diagonal_recursive(&z)?;

    // -1/(a_n T^{m-1}) in k[T]/(g)
    let an_t = Poly::monomial(k, c[n].clone(), x.m as usize - 1);
    let inv = an_t.inverse_mod(alg.modulus()).ok_or(TransferError::NonInvertibleScale)?;
    let base = inv.scale(&k.neg(&k.one()));
    let u = base.pow_mod(&(n as u64).into(), alg.modulus()).scale(&product(k, &c[..n]));
    // ((m-1)_ε)^n = p<1> + q<-1>
    // (m-1)_ε has ceil((m-1)/2) copies of <1> and floor((m-1)/2) copies of <-1>
    let (one_count, minus_count) = (x.m as i64 / 2, (x.m as i64 - 1) / 2);
    let (mut p, mut q) = (1i64, 0i64);
    for _ in 0..n {
        let mix = |a: i64, b: i64| a.checked_mul(one_count)?.checked_add(b.checked_mul(minus_count)?);
        let np = mix(p, q).ok_or(ChiError::Overflow)?;
        let nq = mix(q, p).ok_or(ChiError::Overflow)?;
        (p, q) = (np, nq);
    }
    let local = ResidueGWElement::new(&alg, vec![(p, u.clone()), (q, u.scale(&k.neg(&k.one())))])?;
    let local = euler_dual_transform(&transfer(&local)?, n as u64);

    let partial = local.try_sub(&(&GWElement::minus_one(k.field()) * &chi_z))?;
    let gap = want - partial.rank();
    if gap % 2 != 0 {
        return Err(ChiError::RankParity { got: partial.rank(), want });
    }
    Ok(&partial + &h.scale(gap / 2))
}

/// `D(f) = (deg_twisted - deg_untwisted) / 2`, which must be an integer.
pub fn d_invariant(deg_twisted: i64, deg_untwisted: i64) -> Result<i64, ChiError> {
    let diff = deg_twisted.checked_sub(deg_untwisted).ok_or(ChiError::Overflow)?;
    if diff % 2 != 0 {
        return Err(ChiError::OddDifference(diff));
    }
    Ok(diff / 2)
}

/// The hyperbolic correction `(sum_i d_i) h` between the Euler classes of
/// `V ⊗ L` and the twisted `V`, where `d_i = deg(c_1(M) c_{r-i}(V) c_1(L)^{i-1})`
/// for `i = 1..r` are supplied by the caller.
pub fn twist_correction(field: Field, r: usize, intersection_numbers: &[i64]) -> Result<GWElement, ChiError> {
    if intersection_numbers.len() != r {
        return Err(ChiError::BadParameter("need exactly r intersection numbers"));
    }
    let total = intersection_numbers.iter().try_fold(0i64, |acc, d| acc.checked_add(*d)).ok_or(ChiError::Overflow)?;
    Ok(GWElement::hyperbolic(field).scale(total))
}

/// Whether the Euler class of a bundle of rank `rank` is effective: the
/// rank must be even, the correction degree nonpositive and the bundle must
/// have a section with isolated zeros.
pub fn effectivity_check(rank: u64, correction_degree: i64, has_isolated_section: bool) -> bool {
    rank.is_multiple_of(2) && correction_degree <= 0 && has_isolated_section
}
