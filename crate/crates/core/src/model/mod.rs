//! Parameterized matrix polynomials: families, parameter points and
//! evaluation.

mod expr;
mod matpoly;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

pub use expr::{parse_expression, ExprError, Polynomial};
pub use matpoly::{evaluate_at, evaluate_coeffs, MatrixPolynomial};

use crate::error::{Error, Result};

/// A point `t ∈ ℝ^m` of parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    pub coords: Vec<f64>,
}

impl ParamPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn origin(m: usize) -> Self {
        Self { coords: vec![0.0; m] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `self + s·dir`.
    pub fn offset(&self, dir: &[f64], s: f64) -> Self {
        Self {
            coords: self.coords.iter().zip(dir).map(|(a, b)| a + s * b).collect(),
        }
    }

    pub fn distance(&self, other: &ParamPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for ParamPoint {
    fn from(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// `P_t(λ) = Σ_k A_k(t) λ^k` with polynomial entries in `t ∈ ℝ^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    n: usize,
    d: usize,
    m: usize,
    /// `coeff_maps[k]` holds `A_k` row-major.
    coeff_maps: Vec<Vec<Polynomial>>,
    monic: bool,
}

impl Family {
    /// Builds a family from `d + 1` row-major `n × n` coefficient maps.
    pub fn new(n: usize, m: usize, coeff_maps: Vec<Vec<Polynomial>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("n and m must be positive".into()));
        }
        if coeff_maps.len() < 2 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        for (k, a) in coeff_maps.iter().enumerate() {
            if a.len() != n * n {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {k} has {} entries, expected {}",
                    a.len(),
                    n * n
                )));
            }
            if a.iter().any(|p| p.num_params() != m) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {k} uses a parameter count other than {m}"
                )));
            }
        }
        let d = coeff_maps.len() - 1;
        let one = Complex64::new(1.0, 0.0);
        let monic = coeff_maps[d]
            .iter()
            .enumerate()
            .all(|(idx, p)| if idx / n == idx % n { p.is_constant(one) } else { p.is_zero() });
        Ok(Self {
            n,
            d,
            m,
            coeff_maps,
            monic,
        })
    }

    /// Builds a family from expression strings: `exprs[k][i][j]` is entry
    /// `(i, j)` of `A_k`.
    pub fn from_exprs<S: AsRef<str>>(m: usize, exprs: &[Vec<Vec<S>>]) -> Result<Self> {
        let n = exprs.first().map_or(0, |a| a.len());
        let mut maps = Vec::with_capacity(exprs.len());
        for (k, a) in exprs.iter().enumerate() {
            let mut entries = Vec::with_capacity(n * n);
            for row in a {
                if row.len() != n || a.len() != n {
                    return Err(Error::InvalidArgument(format!("coefficient {k} is not {n}×{n}")));
                }
                for s in row {
                    let p = parse_expression(s.as_ref(), m).map_err(|e| match e {
                        ExprError::Syntax { offset, message } => Error::Syntax {
                            line: 1,
                            column: offset + 1,
                            message,
                        },
                        ExprError::UndeclaredParameter { offset, index } => Error::UndeclaredParameter {
                            index,
                            m,
                            line: 1,
                            column: offset + 1,
                        },
                    })?;
                    entries.push(p);
                }
            }
            maps.push(entries);
        }
        Self::new(n, m, maps)
    }

    /// Constant family with the given coefficient matrices (one dummy
    /// parameter).
    pub fn constant(coeffs: &[crate::linalg::ComplexMatrix]) -> Result<Self> {
        let n = coeffs.first().map_or(0, |a| a.rows());
        let maps = coeffs
            .iter()
            .map(|a| a.entries().iter().map(|&c| Polynomial::constant(1, c)).collect())
            .collect();
        Self::new(n, 1, maps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn coeff_maps(&self) -> &[Vec<Polynomial>] {
        &self.coeff_maps
    }

    /// Entry `(i, j)` of `A_k`.
    pub fn entry(&self, k: usize, i: usize, j: usize) -> &Polynomial {
        &self.coeff_maps[k][i * self.n + j]
    }

    /// `dn`, the number of eigenvalues counted with multiplicity.
    pub fn spectrum_size(&self) -> usize {
        self.d * self.n
    }

    /// All expression coefficients are real, so `A_k(t)` is real for real `t`.
    pub fn has_real_coefficients(&self) -> bool {
        self.coeff_maps.iter().flatten().all(|p| p.has_real_coefficients())
    }

    pub fn check_point(&self, u: &ParamPoint) -> Result<()> {
        if u.dim() != self.m {
            return Err(Error::ParamLength {
                expected: self.m,
                got: u.dim(),
            });
        }
        Ok(())
    }

    /// Serializes to the TOML family format read by [`parse_family`].
    pub fn to_toml(&self) -> String {
        let mut s = format!("n = {}\nd = {}\nm = {}\ncoeff = [\n", self.n, self.d, self.m);
        for a in &self.coeff_maps {
            s.push_str("  [\n");
            for i in 0..self.n {
                let row: Vec<String> = (0..self.n).map(|j| format!("\"{}\"", a[i * self.n + j])).collect();
                s.push_str(&format!("    [{}],\n", row.join(", ")));
            }
            s.push_str("  ],\n");
        }
        s.push_str("]\n");
        s
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    n: Spanned<i64>,
    d: Spanned<i64>,
    m: Spanned<i64>,
    coeff: Spanned<Vec<Spanned<Vec<Spanned<Vec<Spanned<String>>>>>>>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |p| offset - p - 1) + 1;
    (line, column)
}

fn positive(text: &str, v: &Spanned<i64>, name: &str) -> Result<usize> {
    if *v.get_ref() < 1 {
        let (line, column) = line_col(text, v.span().start);
        return Err(Error::Syntax {
            line,
            column,
            message: format!("{name} must be a positive integer"),
        });
    }
    Ok(*v.get_ref() as usize)
}

/// Parses a family description:
///
/// ```toml
/// n = 1
/// d = 1
/// m = 1
/// coeff = [ [["t1"]], [["1"]] ]   # A_0, A_1
/// ```
pub fn parse_family(text: &str) -> Result<Family> {
    let raw: RawFamily = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        Error::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let n = positive(text, &raw.n, "n")?;
    let d = positive(text, &raw.d, "d")?;
    let m = positive(text, &raw.m, "m")?;
    let mismatch = |offset: usize, message: String| {
        let (line, column) = line_col(text, offset);
        Error::DimensionMismatch { line, column, message }
    };
    let mats = raw.coeff.get_ref();
    if mats.len() != d + 1 {
        return Err(mismatch(
            raw.coeff.span().start,
            format!("expected {} coefficient matrices, found {}", d + 1, mats.len()),
        ));
    }
    let mut maps = Vec::with_capacity(d + 1);
    for (k, mat) in mats.iter().enumerate() {
        let rows = mat.get_ref();
        if rows.len() != n {
            return Err(mismatch(
                mat.span().start,
                format!("coefficient {k} has {} rows, expected {n}", rows.len()),
            ));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.get_ref().len() != n {
                return Err(mismatch(
                    row.span().start,
                    format!("row {i} of coefficient {k} has {} entries, expected {n}", row.get_ref().len()),
                ));
            }
            for cell in row.get_ref() {
                // +1 skips the opening quote
                let base = cell.span().start + 1;
                let p = parse_expression(cell.get_ref(), m).map_err(|e| match e {
                    ExprError::Syntax { offset, message } => {
                        let (line, column) = line_col(text, base + offset);
                        Error::Syntax { line, column, message }
                    }
                    ExprError::UndeclaredParameter { offset, index } => {
                        let (line, column) = line_col(text, base + offset);
                        Error::UndeclaredParameter {
                            index,
                            m,
                            line,
                            column,
                        }
                    }
                })?;
                entries.push(p);
            }
        }
        maps.push(entries);
    }
    Family::new(n, m, maps)
}
