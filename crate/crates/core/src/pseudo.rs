//! Structured ε-pseudospectra: the union of `σ(v)` over parameters `v` in the
//! Euclidean ball `B(u, ε)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{label_components, GridSpec, IndicatorGrid};
use crate::linalg::{lu_det, svd};
use crate::model::{evaluate_coeffs, Family, MatrixPolynomial, ParamPoint};
use crate::rng;
use crate::search::{compass_search, project_ball, SearchOptions};
use crate::spectral::{spectrum, SpectrumSet};

/// Parameter point with `‖v − u‖ ≤ ε` at which `λ` is (numerically) an
/// eigenvalue.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub v: Vec<f64>,
    pub lambda: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Witness>,
    /// Smallest `|det P_v(λ)|` found.
    pub best_residual: f64,
}

/// `1e-8·(1 + (1 + |λ|)^{dn})`.
pub fn default_tol(f: &Family, lambda: Complex64) -> f64 {
    1e-8 * (1.0 + (1.0 + lambda.norm()).powi(f.spectrum_size() as i32))
}

const INTERIOR_STARTS: usize = 8;

fn det_at(f: &Family, v: &[f64], lambda: Complex64) -> f64 {
    // v always has the family's length here
    let p = evaluate_coeffs(f, &ParamPoint::new(v.to_vec())).expect("parameter length checked");
    lu_det(&p.eval(lambda)).norm()
}

/// Start points in the unit ball of `ℝ^m`: the centre, the `2m` axis points on
/// the sphere, then seeded interior points.
fn ball_starts(m: usize, seed: u64, label: &str) -> Vec<Vec<f64>> {
    let mut starts = vec![vec![0.0; m]];
    for i in 0..m {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; m];
            e[i] = s;
            starts.push(e);
        }
    }
    let mut r = rng::stream(seed, label);
    for _ in 0..INTERIOR_STARTS {
        starts.push(rng::ball_point(&mut r, m));
    }
    starts
}

/// Decides `λ ∈ Λ_ε(u)` by minimizing `|det P_v(λ)|` over `B(u, ε)` with a
/// multi-start compass search; `tol` defaults to [`default_tol`].
pub fn pseudo_membership(f: &Family, u: &ParamPoint, eps: f64, lambda: Complex64, tol: Option<f64>) -> Result<Membership> {
    f.check_point(u)?;
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let tol = tol.unwrap_or_else(|| default_tol(f, lambda));
    let m = f.m();
    let to_v = |z: &[f64]| -> Vec<f64> { u.coords.iter().zip(z).map(|(a, b)| a + eps * b).collect() };
    let mut best: (f64, Vec<f64>) = (det_at(f, &u.coords, lambda), u.coords.clone());
    if best.0 > tol && eps > 0.0 {
        let opts = SearchOptions {
            initial_step: 0.5,
            min_step: 1e-11,
            max_evals: 400,
            target: tol,
        };
        for z0 in ball_starts(m, 0, "membership") {
            let r = compass_search(|z| det_at(f, &to_v(z), lambda), |z| project_ball(z, 1.0), &z0, &opts);
            if r.value < best.0 {
                best = (r.value, to_v(&r.x));
            }
            if best.0 <= tol {
                break;
            }
        }
    }
    let member = best.0 <= tol;
    Ok(Membership {
        member,
        witness: member.then(|| Witness {
            v: best.1.clone(),
            lambda,
            residual: best.0,
        }),
        best_residual: best.0,
    })
}

/// An eigenvalue of `P_v` for a sampled `v`.
#[derive(Debug, Clone, Serialize)]
pub struct CloudPoint {
    pub v: Vec<f64>,
    pub lambda: Complex64,
}

/// Eigenvalues of `P_v` for `v = u`, the `2m` points `u ± ε e_i`, and
/// `n_samples` points drawn uniformly from `B(u, ε)`.
pub fn eigenvalue_cloud(f: &Family, u: &ParamPoint, eps: f64, n_samples: usize, seed: u64) -> Result<Vec<CloudPoint>> {
    f.check_point(u)?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let mut vs = vec![u.coords.clone()];
    if eps > 0.0 {
        for i in 0..f.m() {
            for s in [1.0, -1.0] {
                let mut v = u.coords.clone();
                v[i] += s * eps;
                vs.push(v);
            }
        }
        let mut r = rng::stream(seed, "cloud");
        for _ in 0..n_samples {
            let z = rng::ball_point(&mut r, f.m());
            vs.push(u.coords.iter().zip(&z).map(|(a, b)| a + eps * b).collect());
        }
    }
    let mut out = Vec::new();
    for v in vs {
        let p = evaluate_coeffs(f, &ParamPoint::new(v.clone()))?;
        let s = match spectrum(&p) {
            Ok(s) => s,
            Err(Error::SingularLeadingCoefficient { .. }) => continue,
            Err(e) => return Err(e),
        };
        out.extend(s.values().into_iter().map(|lambda| CloudPoint { v: v.clone(), lambda }));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudoQuery {
    pub eps: f64,
    pub spec: GridSpec,
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub cloud_samples: usize,
    pub seed: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            cloud_samples: 200,
            seed: 0,
        }
    }
}

/// Whether every coefficient matrix is real at every sampled `v`, or Hermitian
/// at every sampled `v`.
fn conjugate_symmetric_on(f: &Family, samples: &[Vec<f64>]) -> Result<bool> {
    if f.has_real_coefficients() {
        return Ok(true);
    }
    for v in samples {
        let p = evaluate_coeffs(f, &ParamPoint::new(v.clone()))?;
        for a in p.coeffs() {
            if a.hermitian_defect() > 1e-12 * (1.0 + a.frobenius_norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn sampled_conjugate_symmetry(f: &Family, u: &ParamPoint, radius: f64, seed: u64) -> Result<bool> {
    let mut samples = vec![u.coords.clone()];
    let mut r = rng::stream(seed, "symmetry-probe");
    for _ in 0..16 {
        let z = rng::ball_point(&mut r, f.m());
        samples.push(u.coords.iter().zip(&z).map(|(a, b)| a + radius * b).collect());
    }
    conjugate_symmetric_on(f, &samples)
}

/// `‖A_k(v) − A_k(u)‖₂` bounds over `B(u, ε)` from entrywise bounds.
fn coefficient_variation(f: &Family, u: &ParamPoint, eps: f64) -> Vec<f64> {
    f.coeff_maps()
        .iter()
        .enumerate()
        .map(|(k, entries)| {
            if k == f.d() && f.is_monic() {
                return 0.0;
            }
            entries
                .iter()
                .map(|p| p.variation_bound(&u.coords, eps).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Lower bound of `σ_min(P_v(μ))` over `v ∈ B(u, ε)` and `|μ − c| ≤ r`, from
/// `σ_min(P_u(c))` minus a bound on `‖P_v(μ) − P_u(c)‖₂`.
struct ExclusionBound {
    p: MatrixPolynomial,
    norms: Vec<f64>,
    variation: Vec<f64>,
}

impl ExclusionBound {
    fn margin(&self, c: Complex64, r: f64) -> f64 {
        let big_r = c.norm() + r;
        let mut delta = 0.0;
        for (k, (&dk, &ak)) in self.variation.iter().zip(&self.norms).enumerate() {
            delta += dk * big_r.powi(k as i32);
            if k > 0 {
                delta += ak * k as f64 * big_r.powi(k as i32 - 1) * r;
            }
        }
        let smin = svd(&self.p.eval(c)).singular_values.last().copied().unwrap_or(0.0);
        smin - delta
    }
}

/// Distance from `z` to the closed box of half-widths `(hx, hy)` around `c`.
fn box_distance(z: Complex64, c: Complex64, hx: f64, hy: f64) -> f64 {
    let dx = ((z.re - c.re).abs() - hx).max(0.0);
    let dy = ((z.im - c.im).abs() - hy).max(0.0);
    dx.hypot(dy)
}

/// `Λ_ε(u)` on a grid. A cell is a member when its closed box meets `Λ_ε(u)`,
/// that is, when some `P_v` with `v ∈ B(u, ε)` has an eigenvalue in the box.
/// Decided in three stages:
///
/// 1. cells touching an eigenvalue of a sampled `P_v` are members;
/// 2. cells where a perturbation bound keeps `P_v(μ)` nonsingular for all `v`
///    in the ball and `μ` in the box are excluded;
/// 3. for the rest, a multi-start compass search over the ball minimizes the
///    distance from `σ(v)` to the box, and a zero makes the cell a member.
///
/// `values` holds a nonnegative margin: zero for members, the certified
/// singular-value gap for excluded cells, and the smallest distance found
/// for searched non-members.
pub fn pseudospectrum_grid(f: &Family, u: &ParamPoint, q: &PseudoQuery, opts: &GridOptions) -> Result<IndicatorGrid> {
    f.check_point(u)?;
    if !(q.eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {}", q.eps)));
    }
    let spec = q.spec;
    let eps = q.eps;
    let m = f.m();
    let p = evaluate_coeffs(f, u)?;
    p.require_nonsingular_leading()?;
    let bound = ExclusionBound {
        norms: p.coeffs().iter().map(|a| a.spectral_norm()).collect(),
        variation: coefficient_variation(f, u, eps),
        p,
    };
    let cloud = eigenvalue_cloud(f, u, eps, opts.cloud_samples, opts.seed)?;
    let mut member = vec![false; spec.len()];
    let mut values = vec![f64::INFINITY; spec.len()];
    for cp in &cloud {
        for k in spec.cells_touching(cp.lambda) {
            member[k] = true;
            values[k] = 0.0;
        }
    }

    let (hx, hy) = (0.5 * spec.h_re(), 0.5 * spec.h_im());
    let half_diag = hx.hypot(hy);
    let starts = ball_starts(m, opts.seed, "grid");
    let search = SearchOptions {
        initial_step: 0.5,
        min_step: 1e-7,
        max_evals: 150,
        target: 0.0,
    };
    let to_v = |z: &[f64]| -> ParamPoint { ParamPoint::new(u.coords.iter().zip(z).map(|(a, b)| a + eps * b).collect()) };
    for k in 0..spec.len() {
        if member[k] {
            continue;
        }
        let c = spec.center(k);
        let margin = bound.margin(c, half_diag);
        if margin > 0.0 || eps == 0.0 {
            values[k] = margin.max(0.0);
            continue;
        }
        let objective = |z: &[f64]| -> f64 {
            let Ok(p) = evaluate_coeffs(f, &to_v(z)) else { return f64::INFINITY };
            match spectrum(&p) {
                Ok(s) => s
                    .eigenvalues
                    .iter()
                    .map(|e| box_distance(e.value, c, hx, hy))
                    .fold(f64::INFINITY, f64::min),
                Err(_) => f64::INFINITY,
            }
        };
        let mut initial: Vec<Vec<f64>> = Vec::new();
        if let Some(cp) = cloud
            .iter()
            .min_by(|a, b| box_distance(a.lambda, c, hx, hy).total_cmp(&box_distance(b.lambda, c, hx, hy)))
        {
            initial.push(cp.v.iter().zip(&u.coords).map(|(v, w)| (v - w) / eps).collect());
        }
        initial.extend(starts.iter().cloned());
        let mut best = f64::INFINITY;
        for z0 in initial {
            let r = compass_search(objective, |z| project_ball(z, 1.0), &z0, &search);
            best = best.min(r.value);
            if best == 0.0 {
                break;
            }
        }
        member[k] = best == 0.0;
        values[k] = best;
    }
    let symmetric = sampled_conjugate_symmetry(f, u, eps, opts.seed)?;
    Ok(IndicatorGrid::from_membership(spec, member, values, symmetric))
}

/// For each connected component of the grid, the number of eigenvalues
/// (with multiplicity) of `s` lying in it.
pub fn eigenvalues_per_component(g: &IndicatorGrid, s: &SpectrumSet) -> Vec<usize> {
    let (count, labels) = label_components(&g.member, g.spec.n_re, g.spec.n_im);
    let mut out = vec![0; count];
    for c in &s.eigenvalues {
        if let Some(k) = g.spec.cells_touching(c.value).into_iter().find(|&k| g.member[k]) {
            out[labels[k]] += c.multiplicity;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_axis_symmetry, Region};
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn linear_real() -> Family {
        Family::from_exprs(1, &[vec![vec!["t1"]], vec![vec!["1"]]]).unwrap()
    }

    fn linear_complex() -> Family {
        Family::from_exprs(2, &[vec![vec!["t1 + i*t2"]], vec![vec!["1"]]]).unwrap()
    }

    fn diag2() -> Family {
        Family::from_exprs(2, &[
            vec![vec!["t1", "0"], vec!["0", "t2"]],
            vec![vec!["1", "0"], vec!["0", "1"]],
        ])
        .unwrap()
    }

    #[test]
    fn eps_zero_is_the_spectrum() {
        let r = pseudo_membership(&linear_real(), &ParamPoint::new(vec![2.0]), 0.0, c(-2.0, 0.0), None).unwrap();
        assert!(r.member);
        assert_eq!(r.witness.unwrap().v, vec![2.0]);
    }

    #[test]
    fn unit_disk_membership() {
        let f = linear_complex();
        let u = ParamPoint::origin(2);
        let r = pseudo_membership(&f, &u, 1.0, c(0.5, 0.0), None).unwrap();
        assert!(r.member);
        let w = r.witness.unwrap();
        assert!(ParamPoint::new(w.v).distance(&u) <= 1.0 + 1e-12);
        assert!(!pseudo_membership(&f, &u, 1.0, c(1.5, 0.0), None).unwrap().member);
        assert!(pseudo_membership(&f, &u, 1.0, c(0.3, -0.6), None).unwrap().member);
    }

    #[test]
    fn real_parameter_gives_segment() {
        let f = linear_real();
        let u = ParamPoint::origin(1);
        assert!(pseudo_membership(&f, &u, 1.0, c(0.5, 0.0), None).unwrap().member);
        assert!(!pseudo_membership(&f, &u, 1.0, c(0.5, 0.1), None).unwrap().member);
    }

    #[test]
    fn cloud_examples() {
        let f = linear_real();
        let cloud = eigenvalue_cloud(&f, &ParamPoint::new(vec![2.0]), 0.0, 10, 0).unwrap();
        assert_eq!(cloud.len(), 1);
        assert!((cloud[0].lambda - c(-2.0, 0.0)).norm() < 1e-12);

        let cloud = eigenvalue_cloud(&linear_complex(), &ParamPoint::origin(2), 1.0, 1000, 3).unwrap();
        let max = cloud.iter().map(|p| p.lambda.norm()).fold(0.0, f64::max);
        assert!(max <= 1.0 + 1e-12 && max >= 0.99);
    }

    #[test]
    fn diagonal_family_agrees_with_cloud_oracle() {
        let f = diag2();
        let u = ParamPoint::new(vec![0.0, 3.0]);
        let eps = 0.5;
        // σ(v) = {−v1, −v2}: Λ_ε(u) is the union of real segments [−ε, ε] and
        // [−3 − ε, −3 + ε]
        let mut r = crate::rng::stream(5, "probe");
        for _ in 0..100 {
            let x: f64 = r.gen_range(-4.0..1.0);
            let lambda = c(x, 0.0);
            let expected = x.abs() <= eps || (x + 3.0).abs() <= eps;
            let margin = (x.abs() - eps).abs().min(((x + 3.0).abs() - eps).abs());
            if margin < 1e-6 {
                continue;
            }
            let got = pseudo_membership(&f, &u, eps, lambda, None).unwrap().member;
            assert_eq!(got, expected, "λ = {x}");
        }
    }

    fn disk_query(n: usize) -> PseudoQuery {
        PseudoQuery {
            eps: 1.0,
            spec: GridSpec::new(Region::square(2.0), n, n).unwrap(),
        }
    }

    #[test]
    fn disk_grid_matches_cell_oracle() {
        let f = linear_complex();
        let q = disk_query(41);
        let g = pseudospectrum_grid(&f, &ParamPoint::origin(2), &q, &GridOptions::default()).unwrap();
        let (hx, hy) = (0.5 * q.spec.h_re(), 0.5 * q.spec.h_im());
        for k in 0..q.spec.len() {
            let z = q.spec.center(k);
            // distance from the origin to the closed cell box
            let dx = (z.re.abs() - hx).max(0.0);
            let dy = (z.im.abs() - hy).max(0.0);
            let nearest = dx.hypot(dy);
            if (nearest - 1.0).abs() > 1e-6 {
                assert_eq!(g.member[k], nearest <= 1.0, "cell {z}");
            }
        }
        assert_eq!(g.components, 1);
        // symmetric as a set, but the family has a complex coefficient
        assert!(matches!(check_axis_symmetry(&g), Err(Error::NotConjugateSymmetric)));
    }

    #[test]
    fn eps_zero_grid_marks_eigenvalue_cells() {
        let f = diag2();
        let u = ParamPoint::new(vec![0.35, -0.75]);
        let q = PseudoQuery {
            eps: 0.0,
            spec: GridSpec::new(Region::square(2.0), 21, 21).unwrap(),
        };
        let g = pseudospectrum_grid(&f, &u, &q, &GridOptions::default()).unwrap();
        assert_eq!(g.components, 2);
        assert_eq!(g.member_count(), 2);
        assert!(g.covers(c(-0.35, 0.0)) && g.covers(c(0.75, 0.0)));
    }

    #[test]
    fn separated_disks_are_two_components() {
        let f = diag2();
        let u = ParamPoint::new(vec![0.0, 3.0]);
        let q = PseudoQuery {
            eps: 0.2,
            spec: GridSpec::new(Region::new(-4.0, 1.0, -1.0, 1.0).unwrap(), 51, 21).unwrap(),
        };
        let g = pseudospectrum_grid(&f, &u, &q, &GridOptions::default()).unwrap();
        assert_eq!(g.components, 2);
        let s = crate::spectral::spectrum_at(&f, &u).unwrap();
        assert_eq!(eigenvalues_per_component(&g, &s), vec![1, 1]);
    }

    #[test]
    fn hermitian_family_is_flagged_symmetric() {
        let f = Family::from_exprs(2, &[
            vec![vec!["t1", "i"], vec!["-i", "t2"]],
            vec![vec!["1", "0"], vec!["0", "1"]],
        ])
        .unwrap();
        assert!(sampled_conjugate_symmetry(&f, &ParamPoint::new(vec![0.1, 0.2]), 0.5, 0).unwrap());
        let g = Family::from_exprs(1, &[vec![vec!["i*t1"]], vec![vec!["1"]]]).unwrap();
        assert!(!sampled_conjugate_symmetry(&g, &ParamPoint::new(vec![0.5]), 0.5, 0).unwrap());
    }
}
