//! Numerical range `W(u) = {λ : x*P_u(λ)x = 0 for some unit x}` and the joint
//! numerical range of the coefficient tuple.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, IndicatorGrid};
use crate::linalg::{dot, hermitian_min_eigenvalue, ComplexMatrix};
use crate::model::{evaluate_coeffs, Family, MatrixPolynomial, ParamPoint};
use crate::poly::{aberth_roots, ScalarPoly, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use crate::rng;

pub const DEFAULT_ANGLES: usize = 64;
const REFINE_STEPS: usize = 30;
const MARGIN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FovQuery {
    pub matrix: ComplexMatrix,
    pub angle_count: usize,
}

impl FovQuery {
    pub fn new(matrix: ComplexMatrix) -> Self {
        Self {
            matrix,
            angle_count: DEFAULT_ANGLES,
        }
    }
}

fn rotated_min(a: &ComplexMatrix, theta: f64) -> f64 {
    let r = a.scale(Complex64::from_polar(1.0, theta));
    let h = r.add(&r.adjoint()).scale(Complex64::new(0.5, 0.0));
    hermitian_min_eigenvalue(&h).expect("Hermitian part is Hermitian")
}

/// `max_θ λ_min(Herm(e^{iθ}A))`: the distance from 0 to the field of values
/// when positive, minus the depth of 0 inside it otherwise.
///
/// Coarse sweep over `angle_count` angles, then golden-section refinement
/// on the bracket around the best one.
pub fn fov_margin(a: &ComplexMatrix, angle_count: usize) -> f64 {
    let count = angle_count.max(8);
    let step = 2.0 * PI / count as f64;
    let (mut best_theta, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..count {
        let theta = k as f64 * step;
        let v = rotated_min(a, theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = rotated_min(a, x1);
    let mut f2 = rotated_min(a, x2);
    for _ in 0..REFINE_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = rotated_min(a, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = rotated_min(a, x1);
        }
    }
    best.max(f1).max(f2)
}

/// `0 ∈ F(A)`; reports non-membership only when some rotation separates 0
/// from the field of values by more than `1e-10`.
pub fn fov_contains_zero(q: &FovQuery) -> bool {
    fov_margin(&q.matrix, q.angle_count) <= MARGIN_TOL
}

fn check_leading(p: &MatrixPolynomial) -> Result<()> {
    if !p.is_monic() && fov_contains_zero(&FovQuery::new(p.coeffs()[p.d()].clone())) {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    Ok(())
}

/// `λ ∈ W(u)`.
pub fn numrange_membership(f: &Family, u: &ParamPoint, lambda: Complex64) -> Result<bool> {
    let p = evaluate_coeffs(f, u)?;
    check_leading(&p)?;
    Ok(fov_contains_zero(&FovQuery::new(p.eval(lambda))))
}

/// Radius `1 + max_k ‖A_k‖₂` of a disk containing `W` of a monic polynomial.
pub fn numrange_bound(p: &MatrixPolynomial) -> f64 {
    1.0 + p.coeffs()[..p.d()].iter().map(|a| a.spectral_norm()).fold(0.0, f64::max)
}

/// `W(u)` on a grid. A cell is a member when the field-of-values margin of
/// `P_u` at its centre is within the Lipschitz bound
/// `Σ_k ‖A_k‖₂·k·R^{k−1}·r` of the margin over the disk of radius `r`
/// (half the cell diagonal) around the centre, so every cell meeting `W` is
/// kept. `values` holds the margin at the centre.
pub fn numrange_grid(f: &Family, u: &ParamPoint, spec: &GridSpec) -> Result<IndicatorGrid> {
    let p = evaluate_coeffs(f, u)?;
    check_leading(&p)?;
    let norms: Vec<f64> = p.coeffs().iter().map(|a| a.spectral_norm()).collect();
    let r = 0.5 * spec.cell_diagonal();
    let mut member = Vec::with_capacity(spec.len());
    let mut values = Vec::with_capacity(spec.len());
    for k in 0..spec.len() {
        let c = spec.center(k);
        let big_r = c.norm() + r;
        let lipschitz: f64 = norms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * k as f64 * big_r.powi(k as i32 - 1) * r)
            .sum();
        let margin = fov_margin(&p.eval(c), DEFAULT_ANGLES);
        member.push(margin <= lipschitz + MARGIN_TOL);
        values.push(margin);
    }
    let symmetric = crate::pseudo::sampled_conjugate_symmetry(f, u, 0.0, 0)?;
    Ok(IndicatorGrid::from_membership(*spec, member, values, symmetric))
}

/// `(x*A_0x, …, x*A_dx)`.
pub fn jw_point(p: &MatrixPolynomial, x: &[Complex64]) -> Vec<Complex64> {
    p.coeffs().iter().map(|a| dot(x, &a.mul_vec(x))).collect()
}

/// Sampled joint numerical range.
#[derive(Debug, Clone, Serialize)]
pub struct JwCloud {
    pub points: Vec<Vec<Complex64>>,
    /// The unit vector behind each point.
    pub vectors: Vec<Vec<Complex64>>,
    pub sphere_samples: usize,
    pub seed: u64,
}

/// Points of `JW(u)` for the `n` standard basis vectors followed by
/// `n_samples` uniform unit vectors.
pub fn jw_sample(f: &Family, u: &ParamPoint, n_samples: usize, seed: u64) -> Result<JwCloud> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let p = evaluate_coeffs(f, u)?;
    let n = f.n();
    let mut vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut r = rng::stream(seed, "jw");
    for _ in 0..n_samples {
        vectors.push(rng::complex_unit_vector(&mut r, n));
    }
    Ok(JwCloud {
        points: vectors.iter().map(|x| jw_point(&p, x)).collect(),
        vectors,
        sphere_samples: n_samples,
        seed,
    })
}

/// `x*P(·)x` as a scalar polynomial.
pub fn scalar_section(coeffs: &[Complex64]) -> Result<ScalarPoly> {
    let lead = coeffs.last().copied().unwrap_or_default();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lead.norm() <= 1e-14 * scale || lead.norm() == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    ScalarPoly::new(coeffs.to_vec())
}

/// `W` recovered from the cloud: roots of `Σ a_k λ^k` for every sampled
/// `(a_0, …, a_d)`.
pub fn reconstruct_w_from_jw(c: &JwCloud) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for a in &c.points {
        let q = scalar_section(a)?;
        out.extend(aberth_roots(&q, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)?.roots);
    }
    Ok(out)
}

/// Hausdorff distance between point clouds in `ℂ^{d+1}` with the max-modulus
/// norm.
pub fn jw_hausdorff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let dist = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    let one_sided = |s: &[Vec<Complex64>], t: &[Vec<Complex64>]| {
        s.iter()
            .map(|x| t.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(one_sided(a, b).max(one_sided(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Region;
    use crate::linalg::vec_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fov_examples() {
        assert!(!fov_contains_zero(&FovQuery::new(ComplexMatrix::identity(3))));
        assert!(fov_contains_zero(&FovQuery::new(ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]))));
        // W of a Jordan block is the disk of radius 1/2
        let j = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!((fov_margin(&j.shift(c(-0.7, 0.0)), 64) - 0.2).abs() < 1e-9);
        assert!((fov_margin(&j.shift(c(0.0, 0.3)), 64) + 0.2).abs() < 1e-9);
    }

    #[test]
    fn fov_agrees_with_sphere_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = ComplexMatrix::from_fn(3, 3, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .shift(c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
            let margin = fov_margin(&a, 64);
            // the numerical range is the set of x*Ax; its distance to 0 is the margin
            let mut nearest = f64::INFINITY;
            let mut r = rng::stream(1, "fov");
            for _ in 0..20000 {
                let x = rng::complex_unit_vector(&mut r, 3);
                nearest = nearest.min(dot(&x, &a.mul_vec(&x)).norm());
            }
            if margin > 1e-3 {
                assert!(nearest >= margin - 1e-9 && nearest <= margin + 0.05, "{nearest} vs {margin}");
            } else if margin < -1e-3 {
                assert!(nearest < 0.05);
            }
        }
    }

    fn linear(a: ComplexMatrix) -> Family {
        let n = a.rows();
        Family::constant(&[a.scale(c(-1.0, 0.0)), ComplexMatrix::identity(n)]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let f = linear(ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]));
        let u = ParamPoint::origin(1);
        assert!(numrange_membership(&f, &u, c(0.5, 0.0)).unwrap());
        assert!(!numrange_membership(&f, &u, c(2.0, 0.0)).unwrap());
        assert!(!numrange_membership(&f, &u, c(0.5, 0.1)).unwrap());

        // scalar case: W = σ
        let g = Family::from_exprs(1, &[vec![vec!["-1"]], vec![vec!["0"]], vec![vec!["1"]]]).unwrap();
        assert!(numrange_membership(&g, &u, c(1.0, 0.0)).unwrap());
        assert!(!numrange_membership(&g, &u, c(0.9, 0.0)).unwrap());
    }

    #[test]
    fn degenerate_leading_coefficient() {
        let f = Family::from_exprs(1, &[
            vec![vec!["1", "0"], vec!["0", "1"]],
            vec![vec!["1", "0"], vec!["0", "-1"]],
        ])
        .unwrap();
        assert!(matches!(
            numrange_membership(&f, &ParamPoint::origin(1), c(0.0, 0.0)),
            Err(Error::DegenerateLeadingCoefficient)
        ));
    }

    #[test]
    fn segment_grid() {
        let f = linear(ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]));
        let spec = GridSpec::new(Region::new(-1.0, 2.0, -1.0, 1.0).unwrap(), 31, 21).unwrap();
        let g = numrange_grid(&f, &ParamPoint::origin(1), &spec).unwrap();
        assert_eq!(g.components, 1);
        for k in 0..spec.len() {
            let z = spec.center(k);
            let dist = if z.re < 0.0 { z.norm() } else if z.re > 1.0 { (z - 1.0).norm() } else { z.im.abs() };
            if g.member[k] {
                assert!(dist <= spec.cell_diagonal());
            }
            if dist < 1e-12 {
                assert!(g.member[k]);
            }
        }
    }

    #[test]
    fn scalar_quadratic_grid_has_two_components() {
        let f = Family::from_exprs(1, &[vec![vec!["-1"]], vec![vec!["0"]], vec![vec!["1"]]]).unwrap();
        let spec = GridSpec::new(Region::square(2.0), 41, 41).unwrap();
        let g = numrange_grid(&f, &ParamPoint::origin(1), &spec).unwrap();
        assert_eq!(g.components, 2);
        assert!(g.covers(c(1.0, 0.0)) && g.covers(c(-1.0, 0.0)));
    }

    #[test]
    fn jw_examples() {
        let f = Family::from_exprs(1, &[vec![vec!["2"]], vec![vec!["1"]]]).unwrap();
        let cloud = jw_sample(&f, &ParamPoint::origin(1), 20, 0).unwrap();
        for p in &cloud.points {
            assert!((p[0] - c(2.0, 0.0)).norm() < 1e-12 && (p[1] - c(1.0, 0.0)).norm() < 1e-12);
        }
        let w = reconstruct_w_from_jw(&cloud).unwrap();
        assert!(w.iter().all(|z| (z - c(-2.0, 0.0)).norm() < 1e-12));

        let f = linear(ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, -1.0]]));
        let cloud = jw_sample(&f, &ParamPoint::origin(1), 10000, 1).unwrap();
        let firsts: Vec<f64> = cloud.points.iter().map(|p| p[0].re).collect();
        assert!(firsts.iter().cloned().fold(f64::INFINITY, f64::min) <= 0.01);
        assert!(firsts.iter().cloned().fold(0.0, f64::max) >= 0.99);
        for (p, x) in cloud.points.iter().zip(&cloud.vectors) {
            assert!((p[1] - c(1.0, 0.0)).norm() <= 1e-12);
            assert!((vec_norm(x) - 1.0).abs() < 1e-12);
        }
        // basis vectors reproduce the diagonal
        let w = reconstruct_w_from_jw(&cloud).unwrap();
        assert!(w[0].norm() < 1e-12 && (w[1] + c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_section() {
        assert!(matches!(scalar_section(&[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::DegenerateLeadingCoefficient)));
    }
}
