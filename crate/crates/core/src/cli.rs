//! Batch runs: one command on one family file, writing CSV data, a JSON
//! report, SVG plots and a manifest into an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::{check_axis_symmetry, GridSpec, IndicatorGrid, Region};
use crate::jordan::{jordan_pair, stratify, Slice, SliceAxis, GAP_THRESHOLD, UNDETERMINED};
use crate::linalg::ComplexMatrix;
use crate::model::{evaluate_coeffs, parse_family, Family, ParamPoint};
use crate::pseudo::{eigenvalue_cloud, eigenvalues_per_component, pseudospectrum_grid, GridOptions, PseudoQuery};
use crate::ranges::{jw_sample, numrange_grid, reconstruct_w_from_jw};
use crate::regularity::{fit_holder, genericity_probe, geometric_scales, sample_scale_pairs, MapKind};
use crate::spectral::{spectral_radius, spectrum_with, verify_spectrum_perturbation, SpectrumOptions, SpectrumSet};
use crate::svg::{emit_svg, Layer, Viewport, PALETTE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Pseudo,
    Numrange,
    Jointnr,
    Holder,
    Jordan,
    Stratify,
    Certify,
}

/// Set-valued map analysed by the `holder` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapName {
    Spectrum,
    Pseudo,
    Numrange,
    Jointnr,
    Specradius,
}

/// `count` nodes on `[lo, hi]` along parameter `param` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: usize,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub family_path: PathBuf,
    pub command: Command,
    /// Parameter point; empty means the origin.
    #[serde(default)]
    pub at: Vec<f64>,
    /// Second parameter point for `certify`.
    #[serde(default)]
    pub to: Option<Vec<f64>>,
    #[serde(default)]
    pub eps: Option<f64>,
    /// `[re_min, re_max, im_min, im_max]`.
    #[serde(default)]
    pub region: Option<[f64; 4]>,
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub scales: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: u64,
    /// Clustering radius for `spectrum`, noise floor for `holder`.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub map: Option<MapName>,
    #[serde(default)]
    pub direction: Option<Vec<f64>>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub axes: Vec<AxisSpec>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(family_path: impl Into<PathBuf>, command: Command, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            family_path: family_path.into(),
            command,
            at: Vec::new(),
            to: None,
            eps: None,
            region: None,
            resolution: None,
            scales: None,
            seed: 0,
            tol: None,
            map: None,
            direction: None,
            samples: None,
            axes: Vec::new(),
            out_dir: out_dir.into(),
        }
    }
}

/// What a successful run wrote.
#[derive(Debug, Clone)]
pub struct RunSummary {
    /// File names relative to the output directory, sorted.
    pub files: Vec<String>,
    pub report: Value,
}

pub const DEFAULT_RESOLUTION: usize = 101;
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_SAMPLES: usize = 500;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Writer {
    dir: PathBuf,
    files: Vec<String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_path(self.dir.join(name))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        fs::write(self.dir.join(name), body)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<()> {
        let mut body = serde_json::to_string_pretty(v)?;
        body.push('\n');
        self.text(name, &body)
    }
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(a: &ComplexMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| Value::Array((0..a.cols()).map(|j| cplx(a[(i, j)])).collect()))
            .collect(),
    )
}

fn region_json(r: &Region) -> Value {
    json!([r.re_min, r.re_max, r.im_min, r.im_max])
}

fn base_point(f: &Family, at: &[f64]) -> Result<ParamPoint> {
    let u = if at.is_empty() {
        ParamPoint::origin(f.m())
    } else {
        ParamPoint::new(at.to_vec())
    };
    f.check_point(&u)?;
    Ok(u)
}

fn square_spec(region: Region, res: usize) -> Result<GridSpec> {
    GridSpec::new(region, res, res)
}

fn padded_region(points: &[Complex64]) -> Result<Region> {
    let tight = Region::bounding(points, 1.0)?;
    let extent = (tight.re_max - tight.re_min).max(tight.im_max - tight.im_min) - 2.0;
    Region::bounding(points, 0.25 * extent.max(0.5))
}

fn region_from(cfg: &[f64; 4]) -> Result<Region> {
    Region::new(cfg[0], cfg[1], cfg[2], cfg[3])
}

fn grid_rows(g: &IndicatorGrid) -> Vec<Vec<String>> {
    (0..g.spec.len())
        .map(|idx| {
            let z = g.spec.center(idx);
            vec![
                (idx % g.spec.n_re).to_string(),
                (idx / g.spec.n_re).to_string(),
                fmt_f64(z.re),
                fmt_f64(z.im),
                u8::from(g.member[idx]).to_string(),
                fmt_f64(g.values[idx]),
            ]
        })
        .collect()
}

fn boundary_rows(g: &IndicatorGrid) -> Vec<Vec<String>> {
    g.boundary
        .iter()
        .enumerate()
        .flat_map(|(k, line)| {
            line.iter()
                .enumerate()
                .map(move |(v, z)| vec![k.to_string(), v.to_string(), fmt_f64(z.re), fmt_f64(z.im)])
        })
        .collect()
}

fn grid_layers(g: &IndicatorGrid, label: &str, eigen: &[Complex64]) -> Vec<Layer> {
    vec![
        Layer::Cells {
            label: label.to_string(),
            color: PALETTE[0].into(),
            centers: g.member_points(),
            cell_w: g.spec.h_re(),
            cell_h: g.spec.h_im(),
        },
        Layer::Polylines {
            label: "boundary".into(),
            color: PALETTE[3].into(),
            lines: g.boundary.clone(),
        },
        Layer::Points {
            label: "eigenvalues".into(),
            color: "black".into(),
            points: eigen.to_vec(),
        },
    ]
}

fn uncovered_eigenvalues(g: &IndicatorGrid, s: &SpectrumSet) -> Vec<Complex64> {
    s.values()
        .into_iter()
        .filter(|&z| g.spec.region.contains(z) && !g.covers(z))
        .collect()
}

/// Runs one command. Output files are written before an invariant
/// violation is reported, so the evidence stays on disk.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let text = fs::read_to_string(&config.family_path)?;
    let f = parse_family(&text)?;
    let mut resolved = config.clone();
    let u = base_point(&f, &config.at)?;
    resolved.at = u.coords.clone();
    let mut w = Writer::new(&config.out_dir)?;
    let mut violation: Option<String> = None;

    let mut report = match config.command {
        Command::Spectrum => {
            let mut opts = SpectrumOptions::default();
            if let Some(t) = config.tol {
                opts.cluster_tol = t;
            }
            let s = spectrum_with(&evaluate_coeffs(&f, &u)?, &opts)?;
            if f.is_monic() && s.total != f.spectrum_size() {
                violation = Some(format!("spectrum has {} points, expected {}", s.total, f.spectrum_size()));
            }
            let rows: Vec<Vec<String>> = s
                .eigenvalues
                .iter()
                .map(|c| vec![fmt_f64(c.value.re), fmt_f64(c.value.im), c.multiplicity.to_string()])
                .collect();
            w.csv("spectrum.csv", &["re", "im", "multiplicity"], &rows)?;
            let pts = s.values();
            let vp = Viewport::new(padded_region(&pts)?, 480.0);
            let layers = [Layer::Points {
                label: "eigenvalues".into(),
                color: "black".into(),
                points: pts,
            }];
            w.text("spectrum.svg", &emit_svg("spectrum", &layers, &vp))?;
            let verdict = genericity_probe(&f, &u).map(|g| g.verdict).unwrap_or(UNDETERMINED);
            json!({
                "total": s.total,
                "distinct": s.distinct(),
                "spectral_radius": spectral_radius(&s),
                "eigenvalues": s.eigenvalues.iter().map(|c| json!({"value": cplx(c.value), "multiplicity": c.multiplicity})).collect::<Vec<_>>(),
                "genericity": verdict,
            })
        }
        Command::Pseudo => {
            let eps = config.eps.unwrap_or(DEFAULT_EPS);
            let res = config.resolution.unwrap_or(DEFAULT_RESOLUTION);
            let region = match &config.region {
                Some(r) => region_from(r)?,
                None => {
                    let cloud = eigenvalue_cloud(&f, &u, eps, 400, config.seed)?;
                    padded_region(&cloud.iter().map(|c| c.lambda).collect::<Vec<_>>())?
                }
            };
            resolved.eps = Some(eps);
            resolved.resolution = Some(res);
            resolved.region = Some([region.re_min, region.re_max, region.im_min, region.im_max]);
            let q = PseudoQuery {
                eps,
                spec: square_spec(region, res)?,
            };
            let opts = GridOptions {
                seed: config.seed,
                ..Default::default()
            };
            let g = pseudospectrum_grid(&f, &u, &q, &opts)?;
            let s = spectrum_with(&evaluate_coeffs(&f, &u)?, &SpectrumOptions::default())?;
            let missing = uncovered_eigenvalues(&g, &s);
            if !missing.is_empty() {
                violation = Some(format!("{} eigenvalues not covered by the grid", missing.len()));
            }
            w.csv("pseudo_grid.csv", &["i", "j", "re", "im", "member", "value"], &grid_rows(&g))?;
            w.csv("pseudo_boundary.csv", &["polyline", "vertex", "re", "im"], &boundary_rows(&g))?;
            let vp = Viewport::new(region, 520.0);
            let title = format!("structured pseudospectrum, eps = {eps}");
            w.text("pseudo.svg", &emit_svg(&title, &grid_layers(&g, "member cells", &s.values()), &vp))?;
            let symmetry = check_axis_symmetry(&g).ok().map(|r| json!({"symmetric": r.symmetric, "interior_mismatches": r.interior_mismatches}));
            json!({
                "eps": eps,
                "region": region_json(&region),
                "resolution": res,
                "cell_diagonal": g.spec.cell_diagonal(),
                "member_count": g.member_count(),
                "components": g.components,
                "eigenvalues_per_component": eigenvalues_per_component(&g, &s),
                "touches_frame": g.touches_frame(),
                "symmetry": symmetry,
            })
        }
        Command::Numrange => {
            let res = config.resolution.unwrap_or(DEFAULT_RESOLUTION);
            let region = match &config.region {
                Some(r) => region_from(r)?,
                None => padded_region(&reconstruct_w_from_jw(&jw_sample(&f, &u, DEFAULT_SAMPLES, config.seed)?)?)?,
            };
            resolved.resolution = Some(res);
            resolved.region = Some([region.re_min, region.re_max, region.im_min, region.im_max]);
            let g = numrange_grid(&f, &u, &square_spec(region, res)?)?;
            let s = spectrum_with(&evaluate_coeffs(&f, &u)?, &SpectrumOptions::default())?;
            let missing = uncovered_eigenvalues(&g, &s);
            if !missing.is_empty() {
                violation = Some(format!("{} eigenvalues outside the numerical range grid", missing.len()));
            }
            w.csv("numrange_grid.csv", &["i", "j", "re", "im", "member", "value"], &grid_rows(&g))?;
            w.csv("numrange_boundary.csv", &["polyline", "vertex", "re", "im"], &boundary_rows(&g))?;
            let vp = Viewport::new(region, 520.0);
            w.text("numrange.svg", &emit_svg("numerical range", &grid_layers(&g, "member cells", &s.values()), &vp))?;
            json!({
                "region": region_json(&region),
                "resolution": res,
                "cell_diagonal": g.spec.cell_diagonal(),
                "member_count": g.member_count(),
                "components": g.components,
                "touches_frame": g.touches_frame(),
            })
        }
        Command::Jointnr => {
            let samples = config.samples.unwrap_or(DEFAULT_SAMPLES);
            resolved.samples = Some(samples);
            let cloud = jw_sample(&f, &u, samples, config.seed)?;
            let d = f.d();
            let max_last = if f.is_monic() {
                cloud.points.iter().map(|p| (p[d] - Complex64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
            } else {
                f64::NAN
            };
            if f.is_monic() && max_last > 1e-12 {
                violation = Some(format!("last joint coordinate deviates from 1 by {max_last:e}"));
            }
            let mut header = vec!["sample".to_string()];
            for k in 0..=d {
                header.push(format!("re{k}"));
                header.push(format!("im{k}"));
            }
            let rows: Vec<Vec<String>> = cloud
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let mut r = vec![i.to_string()];
                    for z in p {
                        r.push(fmt_f64(z.re));
                        r.push(fmt_f64(z.im));
                    }
                    r
                })
                .collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            w.csv("jointnr.csv", &header_refs, &rows)?;
            let wpts = reconstruct_w_from_jw(&cloud)?;
            let rows: Vec<Vec<String>> = wpts.iter().map(|z| vec![fmt_f64(z.re), fmt_f64(z.im)]).collect();
            w.csv("jointnr_w.csv", &["re", "im"], &rows)?;
            let s = spectrum_with(&evaluate_coeffs(&f, &u)?, &SpectrumOptions::default())?;
            let mut all = wpts.clone();
            all.extend(s.values());
            let vp = Viewport::new(padded_region(&all)?, 520.0);
            let layers = [
                Layer::Points {
                    label: "roots of sampled sections".into(),
                    color: PALETTE[0].into(),
                    points: wpts.clone(),
                },
                Layer::Points {
                    label: "eigenvalues".into(),
                    color: "black".into(),
                    points: s.values(),
                },
            ];
            w.text("jointnr.svg", &emit_svg("numerical range from joint samples", &layers, &vp))?;
            json!({
                "samples": cloud.points.len(),
                "sphere_samples": cloud.sphere_samples,
                "max_last_coordinate_deviation": if max_last.is_nan() { Value::Null } else { json!(max_last) },
                "reconstructed_points": wpts.len(),
            })
        }
        Command::Holder => {
            let map = config.map.unwrap_or(MapName::Spectrum);
            let (kind, default_scales) = match map {
                MapName::Spectrum => (MapKind::Spectrum, geometric_scales(0.1, 0.5, 8)),
                MapName::Specradius => (MapKind::Specradius, geometric_scales(0.1, 0.5, 8)),
                MapName::Jointnr => (
                    MapKind::Jointnr {
                        samples: config.samples.unwrap_or(200),
                    },
                    geometric_scales(0.1, 0.5, 8),
                ),
                MapName::Pseudo => (
                    MapKind::Pseudospectrum {
                        eps: config.eps.unwrap_or(DEFAULT_EPS),
                        samples: config.samples.unwrap_or(200),
                    },
                    geometric_scales(0.1, 0.5, 8),
                ),
                MapName::Numrange => (
                    MapKind::Numrange {
                        samples: config.samples.unwrap_or(200),
                    },
                    geometric_scales(0.1, 0.5, 8),
                ),
            };
            let scales = config.scales.clone().unwrap_or(default_scales);
            resolved.map = Some(map);
            resolved.scales = Some(scales.clone());
            let series = sample_scale_pairs(&f, &u, kind, config.direction.as_deref(), &scales, config.seed)?;
            resolved.direction = Some(series.direction.clone());
            let floor = config.tol.unwrap_or(series.noise_floor);
            resolved.tol = Some(floor);
            let fit = fit_holder(&series.pairs, floor)?;
            let rows: Vec<Vec<String>> = series.pairs.iter().map(|p| vec![fmt_f64(p.h), fmt_f64(p.dist)]).collect();
            w.csv("holder_pairs.csv", &["h", "dist"], &rows)?;
            let genericity = genericity_probe(&f, &u).ok();
            json!({
                "map": kind,
                "direction": series.direction,
                "noise_floor": floor,
                "pairs": series.pairs,
                "c_hat": fit.c_hat,
                "alpha_hat": fit.alpha_hat,
                "r2": fit.r2,
                "n_pairs": fit.n_pairs,
                "degenerate": fit.degenerate,
                "genericity": genericity,
            })
        }
        Command::Jordan => {
            let pair = jordan_pair(&f, &u)?;
            let rows: Vec<Vec<String>> = pair
                .structure
                .iter()
                .map(|e| {
                    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
                    vec![
                        fmt_f64(e.eigenvalue.re),
                        fmt_f64(e.eigenvalue.im),
                        e.multiplicity.to_string(),
                        join(&e.partition),
                        join(&e.ranks.ranks),
                        fmt_f64(e.ranks.min_gap()),
                    ]
                })
                .collect();
            w.csv("jordan.csv", &["re", "im", "multiplicity", "partition", "ranks", "min_gap"], &rows)?;
            let entries = |a: &ComplexMatrix| -> Vec<Vec<String>> {
                (0..a.rows())
                    .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
                    .map(|(i, j)| vec![i.to_string(), j.to_string(), fmt_f64(a[(i, j)].re), fmt_f64(a[(i, j)].im)])
                    .collect()
            };
            w.csv("jordan_x.csv", &["row", "col", "re", "im"], &entries(&pair.x))?;
            w.csv("jordan_j.csv", &["row", "col", "re", "im"], &entries(&pair.j))?;
            json!({
                "signature": pair.signature.text(),
                "hash": pair.signature.hash(),
                "k": pair.signature.k(),
                "determined": pair.min_gap >= GAP_THRESHOLD,
                "min_gap": pair.min_gap,
                "max_residual": pair.max_residual,
                "x": matrix_json(&pair.x),
                "j": matrix_json(&pair.j),
            })
        }
        Command::Stratify => {
            if config.axes.is_empty() || config.axes.len() > 2 {
                return Err(Error::InvalidArgument("stratify needs one or two --axis specifications".into()));
            }
            let mut axes = Vec::new();
            for a in &config.axes {
                if a.param >= f.m() {
                    return Err(Error::InvalidArgument(format!("axis parameter {} outside 0..{}", a.param, f.m())));
                }
                axes.push(SliceAxis::coordinate(f.m(), a.param, a.lo, a.hi, a.count));
            }
            let slice = Slice { base: u.clone(), axes };
            let map = stratify(&f, &slice, GAP_THRESHOLD)?;
            let two_d = slice.axes.len() == 2;
            let rows: Vec<Vec<String>> = map
                .nodes
                .iter()
                .enumerate()
                .map(|(idx, n)| {
                    let mut r = vec![idx.to_string()];
                    r.extend(n.slice_coords.iter().map(|&x| fmt_f64(x)));
                    r.extend([n.hash.clone(), n.text.clone(), n.region.to_string()]);
                    r
                })
                .collect();
            let header: &[&str] = if two_d {
                &["node", "s1", "s2", "hash", "signature", "region"]
            } else {
                &["node", "s1", "hash", "signature", "region"]
            };
            w.csv("strata.csv", header, &rows)?;
            let a0 = &slice.axes[0];
            let h0 = if a0.count > 1 { (a0.hi - a0.lo) / (a0.count - 1) as f64 } else { 1.0 };
            let (h1, im_lo, im_hi) = match slice.axes.get(1) {
                Some(a1) => {
                    let h1 = if a1.count > 1 { (a1.hi - a1.lo) / (a1.count - 1) as f64 } else { 1.0 };
                    (h1, a1.lo - 0.5 * h1, a1.hi + 0.5 * h1)
                }
                None => (h0.max(1e-3), -0.5 * h0.max(1e-3), 0.5 * h0.max(1e-3)),
            };
            let region = Region::new(a0.lo - 0.5 * h0, a0.hi + 0.5 * h0, im_lo, im_hi)?;
            let layers: Vec<Layer> = map
                .legend
                .iter()
                .enumerate()
                .map(|(k, (text, hash))| Layer::Cells {
                    label: format!("{hash} {text}"),
                    color: if text == UNDETERMINED { "#ffffff".into() } else { PALETTE[k % PALETTE.len()].into() },
                    centers: map
                        .nodes
                        .iter()
                        .filter(|n| &n.text == text)
                        .map(|n| Complex64::new(n.slice_coords[0], n.slice_coords.get(1).copied().unwrap_or(0.0)))
                        .collect(),
                    cell_w: h0,
                    cell_h: h1,
                })
                .collect();
            let vp = Viewport::new(region, 640.0);
            w.text("strata.svg", &emit_svg("Jordan signature strata", &layers, &vp))?;
            let counts: serde_json::Map<String, Value> = map
                .legend
                .keys()
                .map(|t| (t.clone(), json!(map.nodes.iter().filter(|n| &n.text == t).count())))
                .collect();
            json!({
                "shape": [map.shape.0, map.shape.1],
                "region_count": map.region_count,
                "stratum_count": map.stratum_count(),
                "legend": map.legend,
                "node_counts": counts,
            })
        }
        Command::Certify => {
            let to = config
                .to
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("certify needs --to".into()))?;
            let v = ParamPoint::new(to.clone());
            f.check_point(&v)?;
            let s = spectrum_with(&evaluate_coeffs(&f, &u)?, &SpectrumOptions::default())?;
            let mut certs = Vec::new();
            for lambda in s.values() {
                certs.push(verify_spectrum_perturbation(&f, &u, &v, lambda)?);
            }
            let failed = certs.iter().filter(|c| !c.all_hold()).count();
            if failed > 0 {
                violation = Some(format!("{failed} certificates fail"));
            }
            let rows: Vec<Vec<String>> = certs
                .iter()
                .map(|c| {
                    vec![
                        fmt_f64(c.lambda.re),
                        fmt_f64(c.lambda.im),
                        fmt_f64(c.dist_pow),
                        fmt_f64(c.det_val),
                        fmt_f64(c.det_bound),
                        c.holds.0.to_string(),
                        c.holds.1.to_string(),
                    ]
                })
                .collect();
            w.csv(
                "certificates.csv",
                &["re", "im", "dist_pow", "det_val", "det_bound", "lower_holds", "upper_holds"],
                &rows,
            )?;
            json!({
                "to": to,
                "certificates": certs.len(),
                "failed": failed,
            })
        }
    };

    if let Value::Object(m) = &mut report {
        m.insert("command".into(), json!(config.command));
        m.insert("n".into(), json!(f.n()));
        m.insert("d".into(), json!(f.d()));
        m.insert("m".into(), json!(f.m()));
        m.insert("at".into(), json!(u.coords));
        m.insert("violation".into(), json!(violation));
    }
    w.json("report.json", &report)?;
    let mut files = w.files.clone();
    files.push("manifest.json".into());
    files.sort();
    let manifest = json!({
        "config": resolved,
        "seed": config.seed,
        "files": files,
    });
    w.json("manifest.json", &manifest)?;
    if let Some(msg) = violation {
        return Err(Error::InvariantViolation(msg));
    }
    Ok(RunSummary { files, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family_file(dir: &Path, body: &str) -> PathBuf {
        let p = dir.join("family.toml");
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn spectrum_of_shift() {
        let dir = tempfile::tempdir().unwrap();
        let fam = family_file(dir.path(), "n = 1\nd = 1\nm = 1\ncoeff = [ [[\"t1\"]], [[\"1\"]] ]\n");
        let mut cfg = RunConfig::new(&fam, Command::Spectrum, dir.path().join("out"));
        cfg.at = vec![2.0];
        let s = run(&cfg).unwrap();
        let csv = fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], format!("{},{},1", fmt_f64(-2.0), fmt_f64(0.0)));
        assert!(s.files.contains(&"manifest.json".to_string()));
    }

    #[test]
    fn manifest_lists_every_file() {
        let dir = tempfile::tempdir().unwrap();
        let fam = family_file(dir.path(), "n = 1\nd = 1\nm = 1\ncoeff = [ [[\"t1\"]], [[\"1\"]] ]\n");
        let out = dir.path().join("out");
        let cfg = RunConfig::new(&fam, Command::Jointnr, &out);
        let s = run(&cfg).unwrap();
        let mut on_disk: Vec<String> = fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        on_disk.sort();
        assert_eq!(on_disk, s.files);
    }

    #[test]
    fn config_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let fam = family_file(dir.path(), "n = 1\nd = 1\nm = 1\ncoeff = [ [[\"t2\"]], [[\"1\"]] ]\n");
        let cfg = RunConfig::new(&fam, Command::Spectrum, dir.path().join("out"));
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);

        let fam = family_file(dir.path(), "n = 1\nd = 1\nm = 1\ncoeff = [ [[\"t1\"]], [[\"1\"]] ]\n");
        let cfg = RunConfig::new(&fam, Command::Certify, dir.path().join("out"));
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn singular_leading_exits_three() {
        let dir = tempfile::tempdir().unwrap();
        let fam = family_file(dir.path(), "n = 1\nd = 1\nm = 1\ncoeff = [ [[\"1\"]], [[\"t1\"]] ]\n");
        let cfg = RunConfig::new(&fam, Command::Spectrum, dir.path().join("out"));
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 3);
    }
}
