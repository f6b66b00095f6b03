//! Deterministic random streams. Each task draws from its own generator keyed
//! by `(seed, label)`, so results do not depend on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Uniform point on the unit sphere of `ℝ^m`.
pub fn unit_vector<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point in the closed unit ball of `ℝ^m`.
pub fn ball_point<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let dir = unit_vector(rng, m);
    let r: f64 = rng.gen::<f64>().powf(1.0 / m as f64);
    dir.into_iter().map(|x| x * r).collect()
}

/// Uniform point on the unit sphere of `ℂ^n`.
pub fn complex_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
