//! Scalar complex polynomials: evaluation, coefficient recovery from samples
//! on a circle, simultaneous root finding and root clustering.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Polynomial with coefficients indexed by power; the leading coefficient is
/// nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly {
    coeffs: Vec<Complex64>,
}

impl ScalarPoly {
    /// Trims exactly-zero leading coefficients. Fails on the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `leading · Π (z − r)`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner_eval(self, z)
    }

    pub fn derivative(&self) -> Option<ScalarPoly> {
        if self.degree() == 0 {
            return None;
        }
        Some(Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        })
    }

    /// `Σ |c_k| |z|^k`, the scale of rounding error in evaluating at `z`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }
}

pub fn horner_eval(p: &ScalarPoly, z: Complex64) -> Complex64 {
    p.coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// The `count` interpolation nodes `ρ·exp(2πij/count)`.
pub fn circle_nodes(count: usize, rho: f64) -> Vec<Complex64> {
    (0..count)
        .map(|j| Complex64::from_polar(rho, 2.0 * PI * j as f64 / count as f64))
        .collect()
}

/// Recovers the degree-`values.len() − 1` interpolant from samples at
/// [`circle_nodes`] of radius `rho`, then checks the leading coefficient
/// against `expected_leading`.
pub fn interpolate_with_leading(values: &[Complex64], rho: f64, expected_leading: Complex64) -> Result<ScalarPoly> {
    let count = values.len();
    if count == 0 {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let degree = count - 1;
    let mut coeffs = Vec::with_capacity(count);
    let mut rho_k = 1.0;
    for k in 0..count {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let idx = (j * k) % count;
            acc += v * Complex64::from_polar(1.0, -2.0 * PI * idx as f64 / count as f64);
        }
        coeffs.push(acc / (count as f64 * rho_k));
        rho_k *= rho;
    }
    let got = coeffs[degree];
    if (got - expected_leading).norm() > 1e-6 * expected_leading.norm().max(1.0) {
        return Err(Error::InterpolationConditioning {
            got,
            expected: expected_leading,
        });
    }
    coeffs[degree] = expected_leading;
    ScalarPoly::new(coeffs)
}

/// Monic interpolant of degree `values.len() − 1`.
pub fn interpolate_monic(values: &[Complex64], rho: f64) -> Result<ScalarPoly> {
    interpolate_with_leading(values, rho, Complex64::new(1.0, 0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct RootMultiset {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Leading coefficient of the polynomial the roots came from.
    pub leading: Complex64,
    /// Absolute uncertainty in the polynomial's values near its roots, used to
    /// size clusters of multiple roots. Zero when the coefficients are exact.
    pub noise: f64,
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;
const INITIAL_ANGLE: f64 = 0.37;

/// Simultaneous Aberth–Ehrlich iteration with Gauss–Seidel updates.
///
/// A root stops moving once its residual is at the rounding level of the
/// evaluation or its correction is below machine precision. The accepted
/// residual is the larger of `tol·(1 + ‖p‖∞)` and sixteen times the rounding
/// level at that root.
pub fn aberth_roots(p: &ScalarPoly, tol: f64, max_iter: usize) -> Result<RootMultiset> {
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::InvalidArgument("aberth_roots needs degree ≥ 1".into()));
    }
    let lead = p.leading();
    let mut roots = if degree == 1 {
        vec![-p.coeffs[0] / lead]
    } else {
        let radius = 1.0 + p.coeffs[..degree].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
        (0..degree)
            .map(|k| Complex64::from_polar(radius, INITIAL_ANGLE + 2.0 * PI * k as f64 / degree as f64))
            .collect::<Vec<_>>()
    };
    let dp = p.derivative().expect("degree ≥ 1");
    let accept = tol * (1.0 + p.norm_inf());
    let mut iterations = 0;
    if degree > 1 {
        let mut frozen = vec![false; degree];
        while iterations < max_iter && frozen.iter().any(|f| !f) {
            iterations += 1;
            for i in 0..degree {
                if frozen[i] {
                    continue;
                }
                let z = roots[i];
                let pz = p.eval(z);
                let floor = 4.0 * EPS * p.abs_eval(z);
                if pz.norm() <= floor {
                    frozen[i] = true;
                    continue;
                }
                let ratio = pz / dp.eval(z);
                let mut s = Complex64::new(0.0, 0.0);
                for (j, &w) in roots.iter().enumerate() {
                    if j != i {
                        let diff = z - w;
                        if diff.norm() > 0.0 {
                            s += 1.0 / diff;
                        }
                    }
                }
                let mut step = ratio / (1.0 - ratio * s);
                if !step.re.is_finite() || !step.im.is_finite() {
                    // derivative vanished: nudge off the critical point
                    step = Complex64::new(1e-8 * (1.0 + z.norm()), 1e-8);
                }
                roots[i] = z - step;
                if step.norm() <= 2.0 * EPS * (1.0 + z.norm()) {
                    frozen[i] = true;
                }
            }
        }
    }
    let residuals: Vec<f64> = roots.iter().map(|&z| p.eval(z).norm()).collect();
    let mut worst = 0.0f64;
    let mut failed = false;
    for (&z, &r) in roots.iter().zip(&residuals) {
        let allowed = accept.max(16.0 * EPS * p.abs_eval(z));
        if !(r <= allowed) {
            failed = true;
        }
        worst = worst.max(r);
    }
    if failed {
        return Err(Error::NonConvergence {
            iterations,
            worst_residual: worst,
            best: roots,
        });
    }
    Ok(RootMultiset {
        roots,
        residuals,
        leading: lead,
        noise: 0.0,
    })
}

/// A distinct value with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Default clustering radius `1e-6·(1 + |z|)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Groups roots by single linkage: two roots are linked when
/// `|a − b| ≤ cluster_tol·(1 + max(|a|, |b|))`. Each cluster is represented by
/// its mean.
///
/// When `r.noise > 0`, clusters are merged further while the merged cluster
/// stays within the spread a μ-fold root acquires from that noise,
/// `4·(noise / |q(z̄)|)^{1/μ}` where `q` is the cofactor of the cluster.
/// Output is sorted by real part, then imaginary part.
pub fn cluster_roots(r: &RootMultiset, cluster_tol: f64) -> Vec<Cluster> {
    let roots = &r.roots;
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + roots[i].norm().max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= cluster_tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if label[root] == usize::MAX {
            label[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[label[root]].push(i);
    }

    if r.noise > 0.0 {
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for a in 0..groups.len() {
                for b in a + 1..groups.len() {
                    let d = groups[a]
                        .iter()
                        .flat_map(|&i| groups[b].iter().map(move |&j| (roots[i] - roots[j]).norm()))
                        .fold(f64::INFINITY, f64::min);
                    if best.map_or(true, |(bd, _, _)| d < bd) {
                        best = Some((d, a, b));
                    }
                }
            }
            let Some((_, a, b)) = best else { break };
            let merged: Vec<usize> = groups[a].iter().chain(&groups[b]).copied().collect();
            if !noise_admits(r, &merged) {
                break;
            }
            groups[a] = merged;
            groups.remove(b);
        }
    }

    let mut clusters: Vec<Cluster> = groups
        .iter()
        .map(|g| Cluster {
            value: g.iter().map(|&i| roots[i]).sum::<Complex64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect();
    clusters.sort_by(|x, y| x.value.re.total_cmp(&y.value.re).then(x.value.im.total_cmp(&y.value.im)));
    clusters
}

fn noise_admits(r: &RootMultiset, members: &[usize]) -> bool {
    let mu = members.len() as f64;
    let center = members.iter().map(|&i| r.roots[i]).sum::<Complex64>() / mu;
    let spread = members
        .iter()
        .map(|&i| (r.roots[i] - center).norm())
        .fold(0.0, f64::max);
    let cofactor = r
        .roots
        .iter()
        .enumerate()
        .filter(|(i, _)| !members.contains(i))
        .fold(r.leading.norm(), |acc, (_, &z)| acc * (center - z).norm());
    if cofactor == 0.0 {
        return false;
    }
    spread <= 4.0 * (r.noise / cofactor).powf(1.0 / mu)
}
