//! Empirical Hölder exponents of the set-valued maps `u ↦ σ(u)`, `Λ_ε(u)`,
//! `W(u)`, `JW(u)` and of the spectral radius.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Family, ParamPoint};
use crate::pseudo::eigenvalue_cloud;
use crate::ranges::{jw_hausdorff, jw_sample, reconstruct_w_from_jw};
use crate::rng;
use crate::spectral::{hausdorff, spectral_radius, spectrum_at};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapKind {
    Spectrum,
    Pseudospectrum { eps: f64, samples: usize },
    Numrange { samples: usize },
    Jointnr { samples: usize },
    Specradius,
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Spectrum => "spectrum",
            MapKind::Pseudospectrum { .. } => "pseudospectrum",
            MapKind::Numrange { .. } => "numrange",
            MapKind::Jointnr { .. } => "jointnr",
            MapKind::Specradius => "specradius",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalePair {
    pub h: f64,
    pub dist: f64,
}

/// Pairs for one map together with the noise floor suited to it.
#[derive(Debug, Clone, Serialize)]
pub struct ScaleSeries {
    pub map_kind: MapKind,
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
    pub pairs: Vec<ScalePair>,
    pub noise_floor: f64,
}

pub const BASE_NOISE_FLOOR: f64 = 1e-9;

/// `h_0, h_0·q, …` with `count` terms.
pub fn geometric_scales(h0: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| h0 * ratio.powi(k as i32)).collect()
}

/// Seeded random unit direction in parameter space.
pub fn random_direction(m: usize, seed: u64) -> Vec<f64> {
    rng::unit_vector(&mut rng::stream(seed, "direction"), m)
}

/// Distances between the map at `base` and at `base + h·direction` for each
/// scale. Set-valued maps other than the spectrum are represented by sampled
/// point clouds drawn with the same seed at both points: eigenvalues of
/// `P_{u+εz}` for `Λ_ε`, roots of `x*P(λ)x` for `W`, and the tuples
/// `(x*A_k x)` for `JW`. Matching the samples keeps the sampling error out of
/// the distance, which a grid would quantize to a cell.
pub fn sample_scale_pairs(
    f: &Family,
    base: &ParamPoint,
    kind: MapKind,
    direction: Option<&[f64]>,
    scales: &[f64],
    seed: u64,
) -> Result<ScaleSeries> {
    f.check_point(base)?;
    if scales.len() < 6 {
        return Err(Error::InvalidArgument(format!("need at least 6 scales, got {}", scales.len())));
    }
    if scales.iter().any(|&h| !(h > 0.0)) || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("scales must be positive and decreasing".into()));
    }
    let direction = match direction {
        Some(d) => {
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if d.len() != f.m() || !(norm > 0.0) {
                return Err(Error::InvalidArgument("direction must be a nonzero vector of length m".into()));
            }
            d.iter().map(|x| x / norm).collect()
        }
        None => random_direction(f.m(), seed),
    };
    let pairs = match kind {
        MapKind::Spectrum => {
            let s0 = spectrum_at(f, base)?.values();
            scales
                .iter()
                .map(|&h| {
                    let s1 = spectrum_at(f, &base.offset(&direction, h))?.values();
                    Ok(ScalePair { h, dist: hausdorff(&s0, &s1)? })
                })
                .collect::<Result<Vec<_>>>()?
        }
        MapKind::Specradius => {
            let r0 = spectral_radius(&spectrum_at(f, base)?);
            scales
                .iter()
                .map(|&h| {
                    let r1 = spectral_radius(&spectrum_at(f, &base.offset(&direction, h))?);
                    Ok(ScalePair { h, dist: (r0 - r1).abs() })
                })
                .collect::<Result<Vec<_>>>()?
        }
        MapKind::Jointnr { samples } => {
            let c0 = jw_sample(f, base, samples, seed)?;
            scales
                .iter()
                .map(|&h| {
                    let c1 = jw_sample(f, &base.offset(&direction, h), samples, seed)?;
                    Ok(ScalePair { h, dist: jw_hausdorff(&c0.points, &c1.points)? })
                })
                .collect::<Result<Vec<_>>>()?
        }
        MapKind::Pseudospectrum { eps, samples } => {
            let cloud = |v: &ParamPoint| -> Result<Vec<Complex64>> {
                Ok(eigenvalue_cloud(f, v, eps, samples, seed)?.into_iter().map(|c| c.lambda).collect())
            };
            let c0 = cloud(base)?;
            scales
                .iter()
                .map(|&h| Ok(ScalePair { h, dist: hausdorff(&c0, &cloud(&base.offset(&direction, h))?)? }))
                .collect::<Result<Vec<_>>>()?
        }
        MapKind::Numrange { samples } => {
            let w0 = reconstruct_w_from_jw(&jw_sample(f, base, samples, seed)?)?;
            scales
                .iter()
                .map(|&h| {
                    let w1 = reconstruct_w_from_jw(&jw_sample(f, &base.offset(&direction, h), samples, seed)?)?;
                    Ok(ScalePair { h, dist: hausdorff(&w0, &w1)? })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(ScaleSeries {
        map_kind: kind,
        base: base.coords.clone(),
        direction,
        pairs,
        noise_floor: BASE_NOISE_FLOOR,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HoelderFit {
    pub c_hat: Option<f64>,
    pub alpha_hat: Option<f64>,
    pub r2: Option<f64>,
    pub n_pairs: usize,
    /// Fewer than four distances above the noise floor; no exponent.
    pub degenerate: bool,
}

/// Least-squares line through `(log h, log dist)` over pairs with
/// `dist > noise_floor`.
pub fn fit_holder(pairs: &[ScalePair], noise_floor: f64) -> Result<HoelderFit> {
    if pairs.len() < 4 {
        return Err(Error::InsufficientData {
            usable: pairs.len(),
            required: 4,
        });
    }
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|p| p.dist > noise_floor && p.h > 0.0)
        .map(|p| (p.h.ln(), p.dist.ln()))
        .collect();
    if pts.len() < 4 {
        return Ok(HoelderFit {
            c_hat: None,
            alpha_hat: None,
            r2: None,
            n_pairs: pts.len(),
            degenerate: true,
        });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            usable: 1,
            required: 4,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(HoelderFit {
        c_hat: Some(intercept.exp()),
        alpha_hat: Some(slope),
        r2: Some(r2),
        n_pairs: pts.len(),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericityReport {
    /// Distinct eigenvalue counts at the base point and the `2m` probes.
    pub distinct_counts: Vec<usize>,
    pub count_stable: bool,
    pub radius_fit: HoelderFit,
    pub lipschitz_consistent: bool,
    pub verdict: &'static str,
}

pub const PROBE_RADIUS: f64 = 1e-4;

/// Checks whether `u` looks like a point of the open dense stratum: the
/// number of distinct eigenvalues is constant on `u ± 1e-4·e_i`, and the
/// spectral radius decays at least linearly along a seeded direction.
pub fn genericity_probe(f: &Family, u: &ParamPoint) -> Result<GenericityReport> {
    f.check_point(u)?;
    let mut counts = vec![spectrum_at(f, u)?.distinct()];
    for i in 0..f.m() {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; f.m()];
            e[i] = s;
            counts.push(spectrum_at(f, &u.offset(&e, PROBE_RADIUS))?.distinct());
        }
    }
    let count_stable = counts.iter().all(|&c| c == counts[0]);
    let scales = geometric_scales(1e-2, 0.5, 8);
    let series = sample_scale_pairs(f, u, MapKind::Specradius, None, &scales, 0)?;
    let radius_fit = fit_holder(&series.pairs, BASE_NOISE_FLOOR)?;
    let lipschitz_consistent = radius_fit.alpha_hat.map_or(true, |a| a >= 0.95);
    let verdict = if count_stable && lipschitz_consistent {
        "apparently generic"
    } else {
        "near stratum boundary"
    };
    Ok(GenericityReport {
        distinct_counts: counts,
        count_stable,
        radius_fit,
        lipschitz_consistent,
        verdict,
    })
}
