//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use parapoly::linalg::ComplexMatrix;
use parapoly::model::{Family, MatrixPolynomial};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn coef<R: Rng>(r: &mut R) -> f64 {
    (r.gen_range(-1.0f64..1.0) * 1000.0).round() / 1000.0
}

/// Random polynomial in `t1..tm` of total degree at most `deg`, as text,
/// with at least one non-constant term.
pub fn random_entry<R: Rng>(r: &mut R, m: usize, deg: u32) -> String {
    let mut terms = vec![format!("{}", coef(r))];
    for _ in 0..r.gen_range(1..=3) {
        let k = r.gen_range(1..=deg.max(1));
        let mut mono = Vec::new();
        for _ in 0..k {
            mono.push(format!("t{}", r.gen_range(1..=m)));
        }
        terms.push(format!("({})*{}", coef(r), mono.join("*")));
    }
    terms.join(" + ")
}

/// Monic family `λ^d I + Σ_{k<d} A_k(t) λ^k` with random polynomial entries.
pub fn random_monic<R: Rng>(r: &mut R, n: usize, d: usize, m: usize, deg: u32) -> Family {
    let mut exprs = Vec::new();
    for _ in 0..d {
        exprs.push((0..n).map(|_| (0..n).map(|_| random_entry(r, m, deg)).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    exprs.push(
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { "1".to_string() } else { "0".to_string() }).collect())
            .collect(),
    );
    Family::from_exprs(m, &exprs).expect("generated family parses")
}

pub fn random_point<R: Rng>(r: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| r.gen_range(-1.0..1.0)).collect()
}

pub fn random_complex_matrix<R: Rng>(r: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c(scale * r.gen_range(-1.0..1.0), scale * r.gen_range(-1.0..1.0)))
}

type Poly = Vec<Complex64>;

fn padd(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn cofactor(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![Complex64::new(0.0, 0.0)];
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let mut term = pmul(&m[0][j], &cofactor(&minor));
        if j % 2 == 1 {
            term.iter_mut().for_each(|x| *x = -*x);
        }
        acc = padd(&acc, &term);
    }
    acc
}

/// Coefficients (ascending) of `det P(λ)` by cofactor expansion over the
/// polynomial entries.
pub fn cofactor_det(p: &MatrixPolynomial) -> Vec<Complex64> {
    let n = p.n();
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| p.coeffs().iter().map(|a| a[(i, j)]).collect()).collect())
        .collect();
    let mut q = cofactor(&entries);
    while q.len() > 1 && q.last().unwrap().norm() == 0.0 {
        q.pop();
    }
    q
}

fn horner(q: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let (mut v, mut dv) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for a in q.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// Roots of a scalar polynomial from the eigenvalues of its companion
/// matrix, polished by Newton steps on the polynomial itself.
pub fn roots_oracle(q: &[Complex64]) -> Vec<Complex64> {
    let deg = q.len() - 1;
    let lead = q[deg];
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -q[i] / lead;
    }
    let (_, t) = Schur::try_new(comp, f64::EPSILON, 10_000).expect("Schur converges").unpack();
    (0..deg)
        .map(|i| {
            let z0 = t[(i, i)];
            let mut z = z0;
            for _ in 0..4 {
                let (v, dv) = horner(q, z);
                if dv.norm() < 1e-300 {
                    break;
                }
                let step = v / dv;
                if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Convex hull (counter-clockwise, no repeated vertex) by monotone chain.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if p.len() < 3 {
        return p;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &z in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], z) <= 0.0 {
                hull.pop();
            }
            hull.push(z);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Distance from `z` to the convex polygon `hull` (0 inside).
pub fn hull_distance(hull: &[Complex64], z: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => segment_distance(z, hull[0], hull[1]),
        k => {
            let inside = (0..k).all(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % k]);
                (b - a).re * (z - a).im - (b - a).im * (z - a).re >= 0.0
            });
            if inside {
                0.0
            } else {
                (0..k).map(|i| segment_distance(z, hull[i], hull[(i + 1) % k])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// `max_θ min_k Re(e^{iθ} x_k*A x_k)` over sampled unit vectors: positive
/// when a direction separates 0 from all sampled points.
pub fn sampled_fov_margin<R: Rng>(r: &mut R, a: &ComplexMatrix, samples: usize, angles: usize) -> f64 {
    let n = a.rows();
    let mut pts = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut x: Vec<Complex64> = (0..n)
            .map(|_| c(r.sample(rand_distr::StandardNormal), r.sample(rand_distr::StandardNormal)))
            .collect();
        let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let ax = a.mul_vec(&x);
        pts.push(x.iter().zip(&ax).map(|(xi, yi)| xi.conj() * yi).sum::<Complex64>());
    }
    (0..angles)
        .map(|k| {
            let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / angles as f64);
            pts.iter().map(|z| (rot * z).re).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `S·J·S^{-1}` for the given Jordan blocks `(eigenvalue, size)`.
pub fn similar_jordan(blocks: &[(Complex64, usize)], s: &ComplexMatrix) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.1).sum();
    let mut j = ComplexMatrix::zeros(n, n);
    let mut at = 0;
    for &(lambda, size) in blocks {
        for k in 0..size {
            j[(at + k, at + k)] = lambda;
            if k + 1 < size {
                j[(at + k, at + k + 1)] = c(1.0, 0.0);
            }
        }
        at += size;
    }
    let sinv = parapoly::linalg::Lu::new(s)
        .solve_matrix(&ComplexMatrix::identity(n))
        .expect("S invertible");
    s.mul(&j).mul(&sinv)
}
