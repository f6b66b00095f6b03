//! Dense complex matrix kernels.
//!
//! Everything here works on small row-major matrices (a few dozen rows at
//! most): partial-pivot LU for determinants and solves, cyclic Jacobi for the
//! Hermitian eigenproblem, and one-sided Jacobi for the SVD.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries. Panics if the length is not
    /// `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    }

    /// Copy of the block starting at (`r0`, `c0`) with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self + s * I`.
    pub fn shift(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += s;
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `self^k` by repeated multiplication (`k = 0` gives the identity).
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        if self.rows == 1 || self.cols == 1 {
            return self.frobenius_norm();
        }
        svd(self).singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `‖A − A*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.im.abs() <= tol)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Partial-pivot LU factorisation `P A = L U` stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Self { lu, perm, sign }
    }

    pub fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for i in 0..self.lu.rows {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn is_singular(&self) -> bool {
        (0..self.lu.rows).any(|i| self.lu[(i, i)] == ZERO)
    }

    /// Solves `A x = b`. Returns `None` for an exactly singular factor.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.is_singular() {
            return None;
        }
        let n = self.lu.rows;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        Some(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Option<ComplexMatrix> {
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(ComplexMatrix::from_columns(b.rows, &cols))
    }
}

/// Determinant by partial-pivot LU.
pub fn lu_det(a: &ComplexMatrix) -> Complex64 {
    match a.rows {
        0 => ONE,
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => Lu::new(a).det(),
    }
}

/// Parameters of a complex Jacobi rotation annihilating the (p, q) entry of
/// a 2×2 Hermitian block `[[app, apq], [conj(apq), aqq]]`.
///
/// The rotation is `V = [[c, s], [-s·conj(e), c·conj(e)]]` with `e` the
/// phase of `apq`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    e: Complex64,
}

impl Rotation {
    fn annihilating(app: f64, aqq: f64, apq: Complex64) -> Self {
        let g = apq.norm();
        let e = apq / g;
        let theta = (aqq - app) / (2.0 * g);
        let t = if theta == 0.0 {
            1.0
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Self { c, s: t * c, e }
    }

    /// Replaces columns p and q of `m` by `m·V`.
    fn apply_columns(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let ec = self.e.conj();
        for i in 0..m.rows {
            let xp = m[(i, p)];
            let xq = m[(i, q)];
            m[(i, p)] = xp * self.c - xq * ec * self.s;
            m[(i, q)] = xp * self.s + xq * ec * self.c;
        }
    }

    /// Replaces rows p and q of `m` by `V*·m`.
    fn apply_rows(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for j in 0..m.cols {
            let xp = m[(p, j)];
            let xq = m[(q, j)];
            m[(p, j)] = xp * self.c - xq * self.e * self.s;
            m[(q, j)] = xp * self.s + xq * self.e * self.c;
        }
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` pairs with `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("hermitian_eig needs a square matrix".into()));
    }
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > 1e-10 * (1.0 + norm) {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.rows;
    // Symmetrise so rounding in the input does not leak into the rotations.
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    let mut q = ComplexMatrix::identity(n);
    let target = 1e-12 * norm;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apq = m[(p, r)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let rot = Rotation::annihilating(m[(p, p)].re, m[(r, r)].re, apq);
                rot.apply_columns(&mut m, p, r);
                rot.apply_rows(&mut m, p, r);
                rot.apply_columns(&mut q, p, r);
                m[(p, r)] = ZERO;
                m[(r, p)] = ZERO;
                m[(p, p)].im = 0.0;
                m[(r, r)].im = 0.0;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| q[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix; closed form for n ≤ 2.
pub fn hermitian_min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    match a.rows {
        1 => Ok(a[(0, 0)].re),
        2 => {
            let p = a[(0, 0)].re;
            let r = a[(1, 1)].re;
            let b = (a[(0, 1)] + a[(1, 0)].conj()) * 0.5;
            let half = 0.5 * (p - r);
            Ok(0.5 * (p + r) - (half * half + b.norm_sqr()).sqrt())
        }
        _ => Ok(hermitian_eig(a)?.values[0]),
    }
}

#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × cols`; columns with nonzero singular value are orthonormal.
    pub u: ComplexMatrix,
    /// Nonincreasing, one per column of the input.
    pub singular_values: Vec<f64>,
    /// `cols × cols` unitary.
    pub v: ComplexMatrix,
}

/// One-sided (Hestenes) Jacobi SVD: `A = U Σ V*`.
pub fn svd(a: &ComplexMatrix) -> Svd {
    let n = a.cols;
    let mut u = a.clone();
    let mut v = ComplexMatrix::identity(n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..u.rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    alpha += up.norm_sqr();
                    beta += uq.norm_sqr();
                    gamma += up.conj() * uq;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_columns(&mut u, p, q);
                rot.apply_columns(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&u.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u_sorted = ComplexMatrix::from_fn(a.rows, n, |i, k| {
        let s = norms[order[k]];
        if s > 0.0 {
            u[(i, order[k])] / s
        } else {
            ZERO
        }
    });
    let v_sorted = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Svd {
        u: u_sorted,
        singular_values,
        v: v_sorted,
    }
}

/// Rank threshold policy for [`svd_rank`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTol {
    /// `max(rows, cols) · σ_max · 1e-10`.
    Auto,
    /// `rel · σ_max`.
    Relative(f64),
    Absolute(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub tol_used: f64,
    /// `σ_rank / σ_{rank+1}`; infinite when there is no next value or it is 0.
    pub gap: f64,
}

impl RankReport {
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub fn svd_rank(a: &ComplexMatrix, tol: RankTol) -> RankReport {
    let k = a.rows.min(a.cols);
    let mut sv = svd(a).singular_values;
    sv.truncate(k);
    rank_from_singular_values(sv, a.rows.max(a.cols), tol)
}

pub(crate) fn rank_from_singular_values(sv: Vec<f64>, max_dim: usize, tol: RankTol) -> RankReport {
    let smax = sv.first().copied().unwrap_or(0.0);
    let tol_used = match tol {
        RankTol::Auto => max_dim as f64 * smax * 1e-10,
        RankTol::Relative(r) => r * smax,
        RankTol::Absolute(t) => t,
    };
    let rank = sv.iter().filter(|&&s| s > tol_used).count();
    let gap = if rank == 0 || rank >= sv.len() || sv[rank] == 0.0 {
        f64::INFINITY
    } else {
        sv[rank - 1] / sv[rank]
    };
    RankReport {
        singular_values: sv,
        rank,
        tol_used,
        gap,
    }
}

/// Orthonormal basis (as columns) of the null space of `a`, taking the
/// `dim` right singular vectors with the smallest singular values.
pub fn null_space(a: &ComplexMatrix, dim: usize) -> Vec<Vec<Complex64>> {
    let s = svd(a);
    let n = a.cols;
    (n - dim.min(n)..n).map(|j| s.v.column(j)).collect()
}

/// Orthonormal basis of the span of `vectors`, dropping directions whose
/// singular value is below `rel_tol` times the largest.
pub fn orthonormal_span(vectors: &[Vec<Complex64>], dim: usize, rel_tol: f64) -> Vec<Vec<Complex64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = ComplexMatrix::from_columns(dim, vectors);
    let s = svd(&m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    s.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv > rel_tol * smax && sv > 0.0)
        .map(|(j, _)| s.u.column(j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut impl Rng, r: usize, cc: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, cc, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn cofactor_det(a: &ComplexMatrix) -> Complex64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        let mut total = ZERO;
        for j in 0..n {
            let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, k| a[(r + 1, if k < j { k } else { k + 1 })]);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += a[(0, j)] * cofactor_det(&minor) * sign;
        }
        total
    }

    #[test]
    fn det_of_identity_and_diagonal() {
        assert_eq!(lu_det(&ComplexMatrix::identity(3)), ONE);
        let d = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert!((lu_det(&d) - c(6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 4);
            let want = cofactor_det(&a);
            let got = Lu::new(&a).det();
            assert!((got - want).norm() <= 1e-10 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 4);
            let b = random_matrix(&mut rng, 4, 4);
            let lhs = lu_det(&a.mul(&b));
            let rhs = lu_det(&a) * lu_det(&b);
            assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm());
        }
    }

    #[test]
    fn lu_solve_recovers_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 5, 5);
        let x: Vec<Complex64> = (0..5).map(|i| c(i as f64, 1.0)).collect();
        let b = a.mul_vec(&x);
        let got = Lu::new(&a).solve(&b).unwrap();
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).norm() < 1e-10);
        }
    }

    #[test]
    fn hermitian_eig_small_cases() {
        let e = hermitian_eig(&ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
        let e = hermitian_eig(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eig_reconstructs_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let b = random_matrix(&mut rng, 5, 5);
            let a = b.add(&b.adjoint()).scale(c(0.5, 0.0));
            let e = hermitian_eig(&a).unwrap();
            let lambda = ComplexMatrix::from_diagonal(&e.values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
            let rec = e.vectors.mul(&lambda).mul(&e.vectors.adjoint());
            assert!(rec.sub(&a).frobenius_norm() <= 1e-9 * (1.0 + a.frobenius_norm()));
            let sum: f64 = e.values.iter().sum();
            assert!((sum - a.trace().re).abs() <= 1e-10 * (1.0 + a.trace().norm()));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn min_eigenvalue_closed_form_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let b = random_matrix(&mut rng, 2, 2);
            let a = b.add(&b.adjoint());
            let fast = hermitian_min_eigenvalue(&a).unwrap();
            let slow = hermitian_eig(&a).unwrap().values[0];
            assert!((fast - slow).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_rank_examples() {
        let r = svd_rank(&ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 0.0]]), RankTol::Auto);
        assert_eq!(r.singular_values, vec![3.0, 0.0]);
        assert_eq!(r.rank, 1);
        assert_eq!(svd_rank(&ComplexMatrix::identity(4), RankTol::Auto).rank, 4);
    }

    #[test]
    fn outer_product_has_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_matrix(&mut rng, 4, 1);
        let y = random_matrix(&mut rng, 4, 1);
        let a = x.mul(&y.adjoint());
        let r = svd_rank(&a, RankTol::Auto);
        assert_eq!(r.rank, 1);
        // Gram determinant of any two columns vanishes for a rank-one matrix.
        let c0 = a.column(0);
        let c1 = a.column(1);
        let gram = dot(&c0, &c0) * dot(&c1, &c1) - dot(&c0, &c1) * dot(&c1, &c0);
        assert!(gram.norm() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_and_norms_are_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 4);
            let s = svd(&a);
            let sigma = ComplexMatrix::from_diagonal(&s.singular_values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
            let rec = s.u.mul(&sigma).mul(&s.v.adjoint());
            assert!(rec.sub(&a).frobenius_norm() < 1e-10);
            let two = s.singular_values[0];
            let fro = a.frobenius_norm();
            assert!(two <= fro + 1e-12 && fro <= 2.0 * two + 1e-12);
        }
    }

    #[test]
    fn unitary_matrix_has_unit_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let b = random_matrix(&mut rng, 5, 5);
        let h = b.add(&b.adjoint());
        let q = hermitian_eig(&h).unwrap().vectors;
        for s in svd_rank(&q, RankTol::Auto).singular_values {
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], &[1.0, 0.0, 1.0]]);
        let ns = null_space(&a, 1);
        let img = a.mul_vec(&ns[0]);
        assert!(vec_norm(&img) < 1e-12);
    }
}
