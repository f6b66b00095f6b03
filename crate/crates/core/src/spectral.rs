//! Spectra of matrix polynomials, companion linearization, Hausdorff
//! distance and the perturbation certificates for the spectrum.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Lu};
use crate::model::{evaluate_coeffs, Family, MatrixPolynomial, ParamPoint};
use crate::poly::{
    aberth_roots, circle_nodes, cluster_roots, interpolate_with_leading, Cluster, ScalarPoly, DEFAULT_CLUSTER_TOL,
    DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL,
};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub root_tol: f64,
    pub max_iter: usize,
    pub cluster_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            root_tol: DEFAULT_ROOT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

/// Distinct eigenvalues with multiplicities.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSet {
    pub eigenvalues: Vec<Cluster>,
    pub total: usize,
}

impl SpectrumSet {
    pub fn values(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|c| c.value).collect()
    }

    pub fn distinct(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Distance from `z` to the nearest eigenvalue.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|c| (c.value - z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Block companion matrix: identity blocks on the superdiagonal and bottom
/// block row `(−A_0, …, −A_{d−1})`, after scaling by `A_d^{-1}` when the
/// polynomial is not monic.
pub fn companion_matrix(p: &MatrixPolynomial) -> Result<ComplexMatrix> {
    let n = p.n();
    let d = p.d();
    let big = n * d;
    let scaled: Vec<ComplexMatrix> = if p.is_monic() {
        p.coeffs()[..d].to_vec()
    } else {
        p.require_nonsingular_leading()?;
        let lu = Lu::new(&p.coeffs()[d]);
        p.coeffs()[..d]
            .iter()
            .map(|a| {
                lu.solve_matrix(a).ok_or(Error::SingularLeadingCoefficient {
                    det_abs: p.leading_det().norm(),
                })
            })
            .collect::<Result<_>>()?
    };
    let mut c = ComplexMatrix::zeros(big, big);
    for b in 0..d.saturating_sub(1) {
        c.set_block(b * n, (b + 1) * n, &ComplexMatrix::identity(n));
    }
    for (k, a) in scaled.iter().enumerate() {
        c.set_block((d - 1) * n, k * n, &a.scale(Complex64::new(-1.0, 0.0)));
    }
    Ok(c)
}

/// Coefficients of `det P(λ)` recovered from `dn + 1` samples on the circle of
/// radius `1 + max_k ‖A_k‖_F`, together with an estimate of the absolute
/// error of its values.
pub fn det_polynomial(p: &MatrixPolynomial) -> Result<(ScalarPoly, f64)> {
    let degree = p.n() * p.d();
    let rho = 1.0 + p.max_coeff_frobenius();
    let nodes = circle_nodes(degree + 1, rho);
    let values: Vec<Complex64> = nodes.iter().map(|&z| p.det_at(z)).collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let poly = interpolate_with_leading(&values, rho, p.leading_det())?;
    let noise = 64.0 * EPS * (degree + 1) as f64 * scale;
    Ok((poly, noise))
}

/// Newton step `det P / (det P)′ = 1 / tr(P^{-1}P′)` on the true determinant;
/// keeps the iterate with the smallest `|det P|`.
fn polish(p: &MatrixPolynomial, z0: Complex64, radius: f64) -> Complex64 {
    let mut best = z0;
    let mut best_val = p.det_at(z0).norm();
    let mut z = z0;
    for _ in 0..8 {
        if best_val == 0.0 {
            break;
        }
        let lu = Lu::new(&p.eval(z));
        let Some(x) = lu.solve_matrix(&p.taylor_coeff(z, 1)) else { break };
        let tr = x.trace();
        if tr.norm() == 0.0 {
            break;
        }
        let next = z - 1.0 / tr;
        if !(next.re.is_finite() && next.im.is_finite()) || (next - z0).norm() > radius {
            break;
        }
        let val = p.det_at(next).norm();
        z = next;
        if val < best_val {
            best = next;
            best_val = val;
        } else {
            break;
        }
    }
    best
}

/// Eigenvalues of `P` from the roots of `det P(λ)`.
///
/// Simple eigenvalues are refined by Newton's method on the determinant
/// evaluated directly from `P`; clustered ones are reported as the cluster
/// mean.
pub fn spectrum_with(p: &MatrixPolynomial, opts: &SpectrumOptions) -> Result<SpectrumSet> {
    p.require_nonsingular_leading()?;
    let (poly, noise) = det_polynomial(p)?;
    let mut roots = aberth_roots(&poly, opts.root_tol, opts.max_iter)?;
    roots.noise = noise;
    let mut clusters = cluster_roots(&roots, opts.cluster_tol);
    let values: Vec<Complex64> = clusters.iter().map(|c| c.value).collect();
    for (i, c) in clusters.iter_mut().enumerate() {
        if c.multiplicity != 1 {
            continue;
        }
        let gap = values
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| (v - c.value).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (0.25 * gap).min(1e-3 * (1.0 + c.value.norm()));
        c.value = polish(p, c.value, radius);
    }
    clusters.sort_by(|x, y| x.value.re.total_cmp(&y.value.re).then(x.value.im.total_cmp(&y.value.im)));
    Ok(SpectrumSet {
        total: clusters.iter().map(|c| c.multiplicity).sum(),
        eigenvalues: clusters,
    })
}

pub fn spectrum(p: &MatrixPolynomial) -> Result<SpectrumSet> {
    spectrum_with(p, &SpectrumOptions::default())
}

/// `σ(u)` for a family.
pub fn spectrum_at(f: &Family, u: &ParamPoint) -> Result<SpectrumSet> {
    spectrum(&evaluate_coeffs(f, u)?)
}

pub fn spectral_radius(s: &SpectrumSet) -> f64 {
    s.eigenvalues.iter().map(|c| c.value.norm()).fold(0.0, f64::max)
}

/// `sup_{a∈A} dist(a, B)`.
pub fn deviation(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(a.iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between finite sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    Ok(deviation(a, b)?.max(deviation(b, a)?))
}

/// Numerical check of the two inequalities linking the distance to the
/// perturbed spectrum, the determinant, and the coefficient perturbation.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationCertificate {
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub lambda: Complex64,
    /// `|det A_d(u′)|·dist(λ, σ(u′))^{dn}`; the factor is 1 for monic
    /// families.
    pub dist_pow: f64,
    /// `|det P_{u′}(λ)|`.
    pub det_val: f64,
    /// `n·max(‖P_u(λ)‖₂, ‖P_{u′}(λ)‖₂)^{n−1}·‖P_u(λ) − P_{u′}(λ)‖₂`.
    pub det_bound: f64,
    pub holds: (bool, bool),
}

impl PerturbationCertificate {
    pub fn all_hold(&self) -> bool {
        self.holds.0 && self.holds.1
    }
}

fn within_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + 1e-8) + 1e-12
}

pub fn verify_spectrum_perturbation(
    f: &Family,
    u: &ParamPoint,
    u_prime: &ParamPoint,
    lambda: Complex64,
) -> Result<PerturbationCertificate> {
    let p = evaluate_coeffs(f, u)?;
    let q = evaluate_coeffs(f, u_prime)?;
    let sigma = spectrum(&p)?;
    let distance = sigma.distance_to(lambda);
    if distance > DEFAULT_CLUSTER_TOL * (1.0 + lambda.norm()) {
        return Err(Error::NotAnEigenvalue { value: lambda, distance });
    }
    let sigma_prime = spectrum(&q)?;
    let dn = (f.n() * f.d()) as i32;
    let dist_pow = q.leading_det().norm() * sigma_prime.distance_to(lambda).powi(dn);
    let pu = p.eval(lambda);
    let pv = q.eval(lambda);
    let det_val = crate::linalg::lu_det(&pv).norm();
    let big = pu.spectral_norm().max(pv.spectral_norm());
    let det_bound = f.n() as f64 * big.powi(f.n() as i32 - 1) * pu.sub(&pv).spectral_norm();
    Ok(PerturbationCertificate {
        u: u.coords.clone(),
        u_prime: u_prime.coords.clone(),
        lambda,
        dist_pow,
        det_val,
        det_bound,
        holds: (within_slack(dist_pow, det_val), within_slack(det_val, det_bound)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar(coeffs: &[f64]) -> MatrixPolynomial {
        MatrixPolynomial::new(coeffs.iter().map(|&x| ComplexMatrix::from_real_rows(&[&[x]])).collect())
    }

    #[test]
    fn companion_examples() {
        let (a, b) = (c(0.5, 1.0), c(-2.0, 0.25));
        let p = MatrixPolynomial::new(vec![
            ComplexMatrix::from_diagonal(&[b]),
            ComplexMatrix::from_diagonal(&[a]),
            ComplexMatrix::identity(1),
        ]);
        let cm = companion_matrix(&p).unwrap();
        assert_eq!(
            cm,
            ComplexMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), -b, -a])
        );
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let p = MatrixPolynomial::new(vec![a.scale(c(-1.0, 0.0)), ComplexMatrix::identity(2)]);
        assert_eq!(companion_matrix(&p).unwrap(), a);
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&scalar(&[2.0, 1.0])).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert!((s.eigenvalues[0].value - c(-2.0, 0.0)).norm() < 1e-12);

        let z = ComplexMatrix::zeros(2, 2);
        let s = spectrum(&MatrixPolynomial::new(vec![z.clone(), z, ComplexMatrix::identity(2)])).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert_eq!(s.eigenvalues[0].multiplicity, 4);
        assert!(s.eigenvalues[0].value.norm() < 1e-6);

        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[4.0, 0.0]]);
        let s = spectrum(&MatrixPolynomial::new(vec![a.scale(c(-1.0, 0.0)), ComplexMatrix::identity(2)])).unwrap();
        let v = s.values();
        assert_eq!(v.len(), 2);
        assert!((v[0] - c(-2.0, 0.0)).norm() < 1e-12 && (v[1] - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(spectral_radius(&s), v[1].norm().max(v[0].norm()));
        assert!((spectral_radius(&s) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_monic_spectrum_uses_leading_determinant() {
        // 2λ − 4 has its root at 2
        let s = spectrum(&scalar(&[-4.0, 2.0])).unwrap();
        assert!((s.values()[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!(matches!(spectrum(&scalar(&[1.0, 0.0])), Err(Error::SingularLeadingCoefficient { .. })));
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff(&[c(0.0, 0.0)], &[c(1.0, 0.0)]).unwrap(), 1.0);
        assert_eq!(hausdorff(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0)]).unwrap(), 1.0);
        assert!(matches!(hausdorff(&[], &[c(0.0, 0.0)]), Err(Error::EmptySet)));
    }

    #[test]
    fn certificate_closed_forms() {
        let f = Family::from_exprs(1, &[vec![vec!["t1"]], vec![vec!["1"]]]).unwrap();
        let u = ParamPoint::new(vec![0.0]);
        let cert = verify_spectrum_perturbation(&f, &u, &u, c(0.0, 0.0)).unwrap();
        assert_eq!((cert.dist_pow, cert.det_val), (0.0, 0.0));
        assert!(cert.all_hold());
        let cert = verify_spectrum_perturbation(&f, &u, &ParamPoint::new(vec![1.0]), c(0.0, 0.0)).unwrap();
        assert!((cert.dist_pow - 1.0).abs() < 1e-12 && (cert.det_val - 1.0).abs() < 1e-12);
        assert!(cert.all_hold());
        assert!(matches!(
            verify_spectrum_perturbation(&f, &u, &u, c(0.5, 0.0)),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    fn entry() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
    }

    fn monic(n: usize, d: usize) -> impl Strategy<Value = MatrixPolynomial> {
        proptest::collection::vec(entry(), n * n * d).prop_map(move |v| {
            let mut coeffs: Vec<ComplexMatrix> = v.chunks(n * n).map(|ch| ComplexMatrix::from_row_major(n, n, ch.to_vec())).collect();
            coeffs.push(ComplexMatrix::identity(n));
            MatrixPolynomial::new(coeffs)
        })
    }

    fn companion_char_roots(c: &ComplexMatrix) -> Vec<Complex64> {
        let k = c.rows();
        let p = MatrixPolynomial::new(vec![c.scale(Complex64::new(-1.0, 0.0)), ComplexMatrix::identity(k)]);
        spectrum(&p).unwrap().values()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplicities_sum_to_dn(p in (1usize..4, 1usize..4).prop_flat_map(|(n, d)| monic(n, d))) {
            let s = spectrum(&p).unwrap();
            prop_assert_eq!(s.total, p.n() * p.d());
        }

        #[test]
        fn companion_eigenvalues_match_spectrum(p in (1usize..4, 1usize..4).prop_flat_map(|(n, d)| monic(n, d))) {
            let s = spectrum(&p).unwrap();
            let cm = companion_matrix(&p).unwrap();
            let h = hausdorff(&s.values(), &companion_char_roots(&cm)).unwrap();
            prop_assert!(h <= 1e-6, "hausdorff {}", h);
        }

        #[test]
        fn real_polynomials_have_conjugate_closed_spectra(v in proptest::collection::vec(-1.0f64..1.0, 8)) {
            let coeffs = vec![
                ComplexMatrix::from_real_rows(&[&v[0..2], &v[2..4]]),
                ComplexMatrix::from_real_rows(&[&v[4..6], &v[6..8]]),
                ComplexMatrix::identity(2),
            ];
            let s = spectrum(&MatrixPolynomial::new(coeffs)).unwrap();
            for z in s.values() {
                prop_assert!(s.distance_to(z.conj()) <= 1e-6 * (1.0 + z.norm()));
            }
        }

        #[test]
        fn hausdorff_matches_pairwise(a in proptest::collection::vec(entry(), 6), b in proptest::collection::vec(entry(), 6)) {
            let mut worst: f64 = 0.0;
            for x in &a {
                let mut best = f64::INFINITY;
                for y in &b { best = best.min((x - y).norm()); }
                worst = worst.max(best);
            }
            for y in &b {
                let mut best = f64::INFINITY;
                for x in &a { best = best.min((x - y).norm()); }
                worst = worst.max(best);
            }
            prop_assert_eq!(hausdorff(&a, &b).unwrap(), worst);
        }
    }
}
