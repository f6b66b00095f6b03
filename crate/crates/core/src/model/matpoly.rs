use num_complex::Complex64;

use super::{Family, ParamPoint};
use crate::error::{Error, Result};
use crate::linalg::{lu_det, ComplexMatrix};

/// `P(λ) = Σ_k coeffs[k] λ^k` at a fixed parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    coeffs: Vec<ComplexMatrix>,
    monic: bool,
    leading_det: Complex64,
    leading_singular: bool,
}

/// `|det A_d| < 1e-10·max(1, ‖A_d‖_F^n)` marks a singular leading coefficient.
fn singular_leading(a: &ComplexMatrix, det: Complex64) -> bool {
    let n = a.rows() as i32;
    det.norm() < 1e-10 * a.frobenius_norm().powi(n).max(1.0)
}

impl MatrixPolynomial {
    /// Panics unless all coefficients are square of the same size and there
    /// are at least two of them.
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Self {
        assert!(coeffs.len() >= 2, "need degree at least 1");
        let n = coeffs[0].rows();
        assert!(
            coeffs.iter().all(|a| a.rows() == n && a.cols() == n),
            "coefficients must be square of equal size"
        );
        let lead = coeffs.last().unwrap();
        let monic = *lead == ComplexMatrix::identity(n);
        let leading_det = if monic { Complex64::new(1.0, 0.0) } else { lu_det(lead) };
        let leading_singular = !monic && singular_leading(lead, leading_det);
        Self {
            n,
            coeffs,
            monic,
            leading_det,
            leading_singular,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn leading_det(&self) -> Complex64 {
        self.leading_det
    }

    /// Set when the leading coefficient fails the nonsingularity guard.
    pub fn leading_singular(&self) -> bool {
        self.leading_singular
    }

    pub fn require_nonsingular_leading(&self) -> Result<()> {
        if self.leading_singular {
            return Err(Error::SingularLeadingCoefficient {
                det_abs: self.leading_det.norm(),
            });
        }
        Ok(())
    }

    /// Horner evaluation of `P(λ)`.
    pub fn eval(&self, lambda: Complex64) -> ComplexMatrix {
        let d = self.d();
        let mut acc = self.coeffs[d].clone();
        for k in (0..d).rev() {
            acc = acc.scale(lambda).add(&self.coeffs[k]);
        }
        acc
    }

    /// `P^{(j)}(λ) / j!`.
    pub fn taylor_coeff(&self, lambda: Complex64, j: usize) -> ComplexMatrix {
        let d = self.d();
        let mut acc = ComplexMatrix::zeros(self.n, self.n);
        if j > d {
            return acc;
        }
        for k in (j..=d).rev() {
            let binom = binomial(k, j);
            acc = acc.scale(lambda).add(&self.coeffs[k].scale(Complex64::new(binom, 0.0)));
        }
        acc
    }

    pub fn det_at(&self, lambda: Complex64) -> Complex64 {
        lu_det(&self.eval(lambda))
    }

    /// `max_k ‖A_k‖_F`.
    pub fn max_coeff_frobenius(&self) -> f64 {
        self.coeffs.iter().map(|a| a.frobenius_norm()).fold(0.0, f64::max)
    }

    /// `max_k ‖A_k‖₂`.
    pub fn max_coeff_spectral(&self) -> f64 {
        self.coeffs.iter().map(|a| a.spectral_norm()).fold(0.0, f64::max)
    }
}

fn binomial(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// `A_k(u)` for every `k`. Monic families get an exact identity leading
/// coefficient; for other families the nonsingularity of `A_d(u)` is
/// recorded in the result.
pub fn evaluate_coeffs(f: &Family, u: &ParamPoint) -> Result<MatrixPolynomial> {
    f.check_point(u)?;
    let n = f.n();
    let coeffs = f
        .coeff_maps()
        .iter()
        .enumerate()
        .map(|(k, entries)| {
            if k == f.d() && f.is_monic() {
                ComplexMatrix::identity(n)
            } else {
                ComplexMatrix::from_row_major(n, n, entries.iter().map(|p| p.eval(&u.coords)).collect())
            }
        })
        .collect();
    Ok(MatrixPolynomial::new(coeffs))
}

pub fn evaluate_at(p: &MatrixPolynomial, lambda: Complex64) -> ComplexMatrix {
    p.eval(lambda)
}
