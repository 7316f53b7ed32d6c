//! Dense exact linear algebra: symmetric congruence diagonalization,
//! determinants, and linear dependencies.

use crate::field::FieldOps;

pub type Matrix<E> = Vec<Vec<E>>;

/// Diagonalizes a symmetric matrix by simultaneous row and column
/// operations. The returned diagonal is congruent to the input; zero
/// entries appear only for a degenerate input.
pub fn diagonalize_symmetric<K: FieldOps>(k: &K, m: &Matrix<K::Elem>) -> Vec<K::Elem> {
    let n = m.len();
    let mut a = m.clone();
    for i in 0..n {
        if k.is_zero(&a[i][i]) {
            if let Some(j) = (i + 1..n).find(|&j| !k.is_zero(&a[j][j])) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !k.is_zero(&a[i][j])) {
                // e_i <- e_i + e_j; the new pivot is 2 a_ij
                for c in 0..n {
                    let v = k.add(&a[i][c], &a[j][c]);
                    a[i][c] = v;
                }
                for r in 0..n {
                    let v = k.add(&a[r][i], &a[r][j]);
                    a[r][i] = v;
                }
            } else {
                continue;
            }
        }
        let pinv = k.inv(&a[i][i]).expect("nonzero pivot");
        for j in i + 1..n {
            if k.is_zero(&a[j][i]) {
                continue;
            }
            let f = k.mul(&a[j][i], &pinv);
            for c in i..n {
                let v = k.sub(&a[j][c], &k.mul(&f, &a[i][c]));
                a[j][c] = v;
            }
            for r in i..n {
                let v = k.sub(&a[r][j], &k.mul(&f, &a[r][i]));
                a[r][j] = v;
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

/// Determinant by Gaussian elimination over a field.
pub fn determinant<K: FieldOps>(k: &K, m: &Matrix<K::Elem>) -> K::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut det = k.one();
    for i in 0..n {
        let Some(p) = (i..n).find(|&r| !k.is_zero(&a[r][i])) else {
            return k.zero();
        };
        if p != i {
            a.swap(p, i);
            det = k.neg(&det);
        }
        det = k.mul(&det, &a[i][i]);
        let inv = k.inv(&a[i][i]).unwrap();
        for r in i + 1..n {
            if k.is_zero(&a[r][i]) {
                continue;
            }
            let f = k.mul(&a[r][i], &inv);
            for c in i..n {
                let v = k.sub(&a[r][c], &k.mul(&f, &a[i][c]));
                a[r][c] = v;
            }
        }
    }
    det
}

/// Commutative ring interface for division-free determinants.
pub trait CommRing {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

/// Determinant by Berkowitz's algorithm; uses only ring operations.
pub fn berkowitz_det<R: CommRing>(r: &R, a: &Matrix<R::E>) -> R::E {
    let n = a.len();
    if n == 0 {
        return r.one();
    }
    // characteristic polynomial coefficients, leading first
    let mut vect = vec![r.one(), r.neg(&a[0][0])];
    for s in 1..n {
        let row: Vec<R::E> = a[s][..s].to_vec();
        let mut col: Vec<R::E> = (0..s).map(|i| a[i][s].clone()).collect();
        // toeplitz column: 1, -a_ss, -R C, -R M C, ..., -R M^{s-1} C
        let mut tc = vec![r.one(), r.neg(&a[s][s])];
        for _ in 0..s {
            let dot = row.iter().zip(&col).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
            tc.push(r.neg(&dot));
            col = (0..s)
                .map(|i| (0..s).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[i][j], &col[j]))))
                .collect();
        }
        let mut next = Vec::with_capacity(s + 2);
        for i in 0..s + 2 {
            let mut acc = r.zero();
            for (j, v) in vect.iter().enumerate() {
                if i >= j {
                    acc = r.add(&acc, &r.mul(&tc[i - j], v));
                }
            }
            next.push(acc);
        }
        vect = next;
    }
    let c = vect[n].clone();
    if n % 2 == 1 {
        r.neg(&c)
    } else {
        c
    }
}

/// Finds the first vector in the sequence that is a linear combination of
/// the earlier ones. Returns `(j, c)` with `v_j = sum_{i<j} c_i v_i`.
pub fn first_dependency<K: FieldOps>(
    k: &K,
    vectors: impl IntoIterator<Item = Vec<K::Elem>>,
) -> Option<(usize, Vec<K::Elem>)> {
    // echelon rows with their expression in terms of the inputs
    let mut basis: Vec<(usize, Vec<K::Elem>, Vec<K::Elem>)> = Vec::new();
    for (j, v) in vectors.into_iter().enumerate() {
        let mut v = v;
        let mut combo = vec![k.zero(); j + 1];
        combo[j] = k.one();
        for (piv, row, rc) in &basis {
            if k.is_zero(&v[*piv]) {
                continue;
            }
            let f = k.div(&v[*piv], &row[*piv]).unwrap();
            for (x, y) in v.iter_mut().zip(row) {
                *x = k.sub(x, &k.mul(&f, y));
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                *x = k.sub(x, &k.mul(&f, y));
            }
        }
        match v.iter().position(|x| !k.is_zero(x)) {
            Some(piv) => basis.push((piv, v, combo)),
            None => {
                // combo . inputs = 0 with combo_j = 1
                let c = combo[..j].iter().map(|x| k.neg(x)).collect();
                return Some((j, c));
            }
        }
    }
    None
}
