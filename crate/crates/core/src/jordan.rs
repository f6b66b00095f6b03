//! Jordan structure of `P_u(λ)` through its companion linearization: rank
//! sequences, block partitions, Jordan chains and pairs, and sampled
//! stratification of parameter slices by Jordan signature.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormal_span, rank_from_singular_values, svd, vec_norm, ComplexMatrix, RankTol};
use crate::model::{evaluate_coeffs, Family, MatrixPolynomial, ParamPoint};
use crate::poly::{cluster_roots, Cluster, RootMultiset, DEFAULT_CLUSTER_TOL};
use crate::spectral::companion_matrix;

/// Relative rank tolerance for Jordan analysis.
pub const RANK_TOL: f64 = 1e-7;
/// Minimum `σ_rank / σ_{rank+1}` for a rank decision to count as determined.
pub const GAP_THRESHOLD: f64 = 1e3;
const CHAIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct RankSequence {
    pub eigenvalue: Complex64,
    /// `rank (λ0·I − C)^j` for `j = 1, 2, …`.
    pub ranks: Vec<usize>,
    pub algebraic_multiplicity: usize,
    /// Singular value gap at each rank decision.
    pub gaps: Vec<f64>,
}

impl RankSequence {
    pub fn min_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Nested kernels `K_j = ker (λ0·I − C)^j`, each found as
/// `ker (I − Q_{j−1}Q_{j−1}*)·M` with `M = λ0·I − C` and `Q_{j−1}` an
/// orthonormal basis of `K_{j−1}`, so every rank decision is made on a single
/// application of `M`.
struct Staircase {
    m: ComplexMatrix,
    threshold: f64,
    kernels: Vec<Vec<Vec<Complex64>>>,
    gaps: Vec<f64>,
}

impl Staircase {
    fn new(c: &ComplexMatrix, lambda0: Complex64, tol: RankTol) -> Self {
        let n = c.rows();
        let m = ComplexMatrix::identity(n).scale(lambda0).sub(c);
        let base = m.spectral_norm().max(c.spectral_norm());
        let threshold = match tol {
            RankTol::Auto => n as f64 * base * 1e-10,
            RankTol::Relative(r) => r * base,
            RankTol::Absolute(t) => t,
        };
        Self {
            m,
            threshold,
            kernels: Vec::new(),
            gaps: Vec::new(),
        }
    }

    /// Computes the next kernel and returns its dimension.
    fn step(&mut self) -> usize {
        let n = self.m.rows();
        let b = match self.kernels.last() {
            None => self.m.clone(),
            Some(q) => {
                let qm = ComplexMatrix::from_columns(n, q);
                self.m.sub(&qm.mul(&qm.adjoint().mul(&self.m)))
            }
        };
        let s = svd(&b);
        let report = rank_from_singular_values(s.singular_values, n, RankTol::Absolute(self.threshold));
        self.gaps.push(report.gap);
        let kernel: Vec<Vec<Complex64>> = (report.rank..n).map(|j| s.v.column(j)).collect();
        let dim = kernel.len();
        self.kernels.push(kernel);
        dim
    }
}

/// Ranks of `(λ0·I − C)^j` until the nullity reaches `mult` (at most `mult`
/// powers). A relative tolerance is taken against
/// `max(‖λ0·I − C‖₂, ‖C‖₂)`.
pub fn rank_sequence(c: &ComplexMatrix, lambda0: Complex64, mult: usize, tol: RankTol) -> Result<RankSequence> {
    let n = c.rows();
    if mult == 0 || mult > n {
        return Err(Error::InvalidArgument(format!("multiplicity {mult} outside 1..={n}")));
    }
    let mut stair = Staircase::new(c, lambda0, tol);
    let mut ranks = Vec::new();
    let mut prev = 0;
    for j in 1..=mult {
        let nullity = stair.step();
        ranks.push(n - nullity);
        if nullity > mult || nullity == prev {
            return Err(Error::RankInconsistency {
                multiplicity: mult,
                nullity,
                power: j,
            });
        }
        if nullity == mult {
            return Ok(RankSequence {
                eigenvalue: lambda0,
                ranks,
                algebraic_multiplicity: mult,
                gaps: stair.gaps,
            });
        }
        prev = nullity;
    }
    Err(Error::RankInconsistency {
        multiplicity: mult,
        nullity: prev,
        power: mult,
    })
}

/// Block sizes from the nullities `N − r_j`: `γ_j` blocks have size `≥ j`.
pub fn partition_from_ranks(rs: &RankSequence, n: usize) -> Result<Vec<usize>> {
    let invalid = || Error::InvalidGamma { ranks: rs.ranks.clone() };
    let mut gamma = Vec::with_capacity(rs.ranks.len());
    let mut prev_nullity = 0usize;
    for &r in &rs.ranks {
        if r > n {
            return Err(invalid());
        }
        let nullity = n - r;
        if nullity < prev_nullity {
            return Err(invalid());
        }
        gamma.push(nullity - prev_nullity);
        prev_nullity = nullity;
    }
    if gamma.first().map_or(true, |&g| g == 0) || gamma.windows(2).any(|w| w[1] > w[0]) {
        return Err(invalid());
    }
    let mut partition = Vec::new();
    for s in (1..=gamma.len()).rev() {
        let next = gamma.get(s).copied().unwrap_or(0);
        partition.extend(std::iter::repeat(s).take(gamma[s - 1] - next));
    }
    if partition.iter().sum::<usize>() != rs.algebraic_multiplicity {
        return Err(invalid());
    }
    Ok(partition)
}

/// Jordan chains of `C` at `λ0`, one per block of `partition` (nonincreasing).
/// Chain `[v_0, …, v_{s−1}]` satisfies `C·v_i = λ0·v_i + v_{i−1}` with
/// `v_{−1} = 0`; each chain is scaled so its longest vector has unit norm.
pub fn jordan_chains(c: &ComplexMatrix, lambda0: Complex64, partition: &[usize]) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let n = c.rows();
    let s_max = partition.iter().copied().max().unwrap_or(0);
    let mut stair = Staircase::new(c, lambda0, RankTol::Relative(RANK_TOL));
    for s in 1..=s_max {
        let expected = partition.iter().map(|&b| b.min(s)).sum::<usize>();
        let got = stair.step();
        if got != expected {
            return Err(Error::NumericalDeficiency(format!(
                "kernel of power {s} at {lambda0} has dimension {got}, expected {expected}"
            )));
        }
    }
    let nil = stair.m.scale(Complex64::new(-1.0, 0.0));
    let apply = |v: &[Complex64], times: usize| (0..times).fold(v.to_vec(), |x, _| nil.mul_vec(&x));
    let mut generators: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for s in (1..=s_max).rev() {
        let count = partition.iter().filter(|&&b| b == s).count();
        if count == 0 {
            continue;
        }
        let mut w: Vec<Vec<Complex64>> = if s > 1 { stair.kernels[s - 2].clone() } else { Vec::new() };
        for (t, g) in &generators {
            w.push(apply(g, t - s));
        }
        let q = orthonormal_span(&w, n, 1e-10);
        let projected: Vec<Vec<Complex64>> = stair.kernels[s - 1]
            .iter()
            .map(|v| {
                let mut p = v.clone();
                for b in &q {
                    let coef = dot(b, &p);
                    p.iter_mut().zip(b).for_each(|(x, y)| *x -= coef * y);
                }
                p
            })
            .collect();
        let sv = svd(&ComplexMatrix::from_columns(n, &projected));
        let usable = sv.singular_values.iter().filter(|&&x| x > 1e-6).count();
        if usable < count {
            return Err(Error::NumericalDeficiency(format!(
                "found {usable} of {count} chain generators of length {s} at {lambda0}"
            )));
        }
        for j in 0..count {
            generators.push((s, sv.u.column(j)));
        }
    }
    let bound = CHAIN_TOL * (1.0 + c.spectral_norm());
    let mut chains = Vec::with_capacity(generators.len());
    for (s, g) in generators {
        let mut chain: Vec<Vec<Complex64>> = (0..s).rev().map(|k| apply(&g, k)).collect();
        let scale = chain.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
        if !(scale > 0.0) {
            return Err(Error::NumericalDeficiency(format!("vanishing chain at {lambda0}")));
        }
        chain.iter_mut().for_each(|v| v.iter_mut().for_each(|x| *x /= scale));
        for (i, v) in chain.iter().enumerate() {
            let mut r = nil.mul_vec(v);
            if i > 0 {
                r.iter_mut().zip(&chain[i - 1]).for_each(|(x, y)| *x -= y);
            }
            if vec_norm(&r) > bound {
                return Err(Error::NumericalDeficiency(format!(
                    "chain residual {:e} at {lambda0}",
                    vec_norm(&r)
                )));
            }
        }
        chains.push(chain);
    }
    Ok(chains)
}

/// Eigenvalues of `C` from a complex Schur decomposition, grouped only when
/// they agree to `DEFAULT_CLUSTER_TOL`; [`consolidate_clusters`] does the
/// structural merging.
pub fn matrix_eigenvalues(c: &ComplexMatrix) -> Result<Vec<Cluster>> {
    let n = c.rows();
    let m = DMatrix::from_fn(n, n, |i, j| c[(i, j)]);
    let schur = Schur::try_new(m, f64::EPSILON, 10_000).ok_or(Error::NonConvergence {
        iterations: 10_000,
        worst_residual: f64::NAN,
        best: Vec::new(),
    })?;
    let (_, t) = schur.unpack();
    let roots: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let set = RootMultiset {
        residuals: vec![0.0; n],
        roots,
        leading: Complex64::new(1.0, 0.0),
        noise: 0.0,
    };
    Ok(cluster_roots(&set, DEFAULT_CLUSTER_TOL))
}

/// Merges nearby clusters while the merged value `z̄` with multiplicity `μ`
/// admits a consistent rank sequence (nullity grows at every power and
/// reaches `μ`), then moves each value
/// to the trace mean of `C` on that subspace.
pub fn consolidate_clusters(c: &ComplexMatrix, clusters: &[Cluster]) -> Vec<Cluster> {
    let reach = 0.1 * (1.0 + c.spectral_norm());
    let mut groups: Vec<Cluster> = clusters.to_vec();
    loop {
        let mut candidates = Vec::new();
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let d = (groups[a].value - groups[b].value).norm();
                if d <= reach {
                    candidates.push((d, a, b));
                }
            }
        }
        candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
        let merged = candidates.into_iter().find_map(|(_, a, b)| {
            let mu = groups[a].multiplicity + groups[b].multiplicity;
            let z = (groups[a].value * groups[a].multiplicity as f64 + groups[b].value * groups[b].multiplicity as f64)
                / mu as f64;
            let ok = rank_sequence(c, z, mu, RankTol::Relative(RANK_TOL)).is_ok_and(|rs| partition_from_ranks(&rs, c.rows()).is_ok());
            ok.then_some((a, b, Cluster { value: z, multiplicity: mu }))
        });
        let Some((a, b, cl)) = merged else { break };
        groups[a] = cl;
        groups.remove(b);
    }
    for g in groups.iter_mut().filter(|g| g.multiplicity > 1) {
        let mut stair = Staircase::new(c, g.value, RankTol::Relative(RANK_TOL));
        while stair.step() < g.multiplicity && stair.kernels.len() < g.multiplicity {}
        let kernel = stair.kernels.last().cloned().unwrap_or_default();
        if kernel.len() != g.multiplicity {
            continue;
        }
        let q = ComplexMatrix::from_columns(c.rows(), &kernel);
        g.value = q.adjoint().mul(c).mul(&q).trace() / g.multiplicity as f64;
    }
    groups.sort_by(|x, y| x.value.re.total_cmp(&y.value.re).then(x.value.im.total_cmp(&y.value.im)));
    groups
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenStructure {
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
    pub ranks: RankSequence,
    pub partition: Vec<usize>,
    pub chains: Vec<Vec<Vec<Complex64>>>,
}

/// Rank sequences, partitions and chains of `C` for the given clusters.
pub fn jordan_structure(c: &ComplexMatrix, clusters: &[Cluster]) -> Result<Vec<EigenStructure>> {
    let n = c.rows();
    consolidate_clusters(c, clusters)
        .into_iter()
        .map(|cl| {
            let ranks = rank_sequence(c, cl.value, cl.multiplicity, RankTol::Relative(RANK_TOL))?;
            let partition = partition_from_ranks(&ranks, n)?;
            let chains = jordan_chains(c, cl.value, &partition)?;
            Ok(EigenStructure {
                eigenvalue: cl.value,
                multiplicity: cl.multiplicity,
                ranks,
                partition,
                chains,
            })
        })
        .collect()
}

/// Block sizes per distinct eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanSignature {
    pub blocks: Vec<(Complex64, Vec<usize>)>,
}

impl JordanSignature {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().flat_map(|(_, p)| p).sum()
    }

    /// Eigenvalue-free canonical text, e.g. `k=2 [2] [1]`.
    pub fn text(&self) -> String {
        let mut parts: Vec<&Vec<usize>> = self.blocks.iter().map(|(_, p)| p).collect();
        parts.sort_by(|a, b| b.cmp(a));
        let body: Vec<String> = parts
            .iter()
            .map(|p| format!("[{}]", p.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("k={} {}", self.k(), body.join(" "))
    }

    pub fn hash(&self) -> String {
        signature_hash(&self.text())
    }
}

/// First 8 bytes of the SHA-256 of the text, in hex.
pub fn signature_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn signature_of(structure: &[EigenStructure]) -> JordanSignature {
    JordanSignature {
        blocks: structure.iter().map(|e| (e.eigenvalue, e.partition.clone())).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct JordanPair {
    /// `n × dn`; columns grouped by eigenvalue, then chain.
    pub x: ComplexMatrix,
    /// Block diagonal, ones on the superdiagonal inside each block.
    pub j: ComplexMatrix,
    pub signature: JordanSignature,
    pub structure: Vec<EigenStructure>,
    /// Largest relative residual of the matrix-polynomial chain relation.
    pub max_residual: f64,
    /// Smallest singular value gap seen in the rank decisions.
    pub min_gap: f64,
}

/// Jordan pair `(X, J)` of `P_u` from the Jordan chains of its companion
/// matrix; `X` is the top block row of the chain matrix.
pub fn jordan_pair(f: &Family, u: &ParamPoint) -> Result<JordanPair> {
    let p = evaluate_coeffs(f, u)?;
    jordan_pair_of(&p)
}

pub fn jordan_pair_of(p: &MatrixPolynomial) -> Result<JordanPair> {
    let n = p.n();
    let big = n * p.d();
    let c = companion_matrix(p)?;
    let clusters = matrix_eigenvalues(&c)?;
    let structure = jordan_structure(&c, &clusters)?;
    let total: usize = structure.iter().map(|e| e.multiplicity).sum();
    if total != big {
        return Err(Error::InvariantViolation(format!("partition sums to {total}, expected {big}")));
    }
    let mut x = ComplexMatrix::zeros(n, big);
    let mut j = ComplexMatrix::zeros(big, big);
    let mut col = 0;
    let mut max_residual: f64 = 0.0;
    for e in &structure {
        let scale: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.spectral_norm() * (1.0 + e.eigenvalue.norm()).powi(k as i32))
            .sum();
        let taylor: Vec<ComplexMatrix> = (0..=big).map(|k| p.taylor_coeff(e.eigenvalue, k)).collect();
        for chain in &e.chains {
            let phis: Vec<Vec<Complex64>> = chain.iter().map(|v| v[..n].to_vec()).collect();
            let phi_scale = phis.iter().map(|v| vec_norm(v)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            for (i, phi) in phis.iter().enumerate() {
                x.set_column(col + i, phi);
                j[(col + i, col + i)] = e.eigenvalue;
                if i > 0 {
                    j[(col + i - 1, col + i)] = Complex64::new(1.0, 0.0);
                }
                let mut r = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..=i {
                    let t = taylor[k].mul_vec(&phis[i - k]);
                    r.iter_mut().zip(&t).for_each(|(a, b)| *a += b);
                }
                let rel = vec_norm(&r) / (scale * phi_scale);
                if rel > CHAIN_TOL {
                    return Err(Error::ChainResidual {
                        residual: rel,
                        column: col + i,
                    });
                }
                max_residual = max_residual.max(rel);
            }
            col += chain.len();
        }
    }
    let min_gap = structure.iter().map(|e| e.ranks.min_gap()).fold(f64::INFINITY, f64::min);
    Ok(JordanPair {
        x,
        j,
        signature: signature_of(&structure),
        structure,
        max_residual,
        min_gap,
    })
}

/// One axis of a parameter slice: `s·direction` for `count` evenly spaced
/// `s` in `[lo, hi]`.
#[derive(Debug, Clone, Serialize)]
pub struct SliceAxis {
    pub direction: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl SliceAxis {
    /// Axis along coordinate `index`.
    pub fn coordinate(m: usize, index: usize, lo: f64, hi: f64, count: usize) -> Self {
        let mut direction = vec![0.0; m];
        direction[index] = 1.0;
        Self { direction, lo, hi, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct Slice {
    pub base: ParamPoint,
    pub axes: Vec<SliceAxis>,
}

impl Slice {
    pub fn shape(&self) -> (usize, usize) {
        (self.axes[0].count, self.axes.get(1).map_or(1, |a| a.count))
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slice coordinates of node `idx = j·n_0 + i`.
    pub fn slice_coords(&self, idx: usize) -> Vec<f64> {
        let (nx, _) = self.shape();
        let mut out = vec![self.axes[0].value(idx % nx)];
        if let Some(a) = self.axes.get(1) {
            out.push(a.value(idx / nx));
        }
        out
    }

    pub fn point(&self, idx: usize) -> ParamPoint {
        let s = self.slice_coords(idx);
        let mut p = self.base.clone();
        for (axis, v) in self.axes.iter().zip(s) {
            p = p.offset(&axis.direction, v);
        }
        p
    }
}

pub const UNDETERMINED: &str = "undetermined";

#[derive(Debug, Clone, Serialize)]
pub struct StratumNode {
    pub slice_coords: Vec<f64>,
    pub coords: Vec<f64>,
    pub signature: Option<JordanSignature>,
    pub text: String,
    pub hash: String,
    pub region: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratificationMap {
    pub shape: (usize, usize),
    pub nodes: Vec<StratumNode>,
    pub region_count: usize,
    /// Signature text to hash, for every text that occurs.
    pub legend: BTreeMap<String, String>,
}

impl StratificationMap {
    /// Number of distinct determined signatures.
    pub fn stratum_count(&self) -> usize {
        self.legend.keys().filter(|t| t.as_str() != UNDETERMINED).count()
    }
}

/// Signature at one parameter point, or `None` when the computation fails or
/// a rank decision has a gap below `gap_threshold`.
pub fn node_signature(f: &Family, u: &ParamPoint, gap_threshold: f64) -> Option<JordanSignature> {
    let pair = jordan_pair(f, u).ok()?;
    (pair.min_gap >= gap_threshold).then_some(pair.signature)
}

/// Jordan signature at every node of a one- or two-dimensional slice, with
/// nodes grouped into 4-connected regions of equal signature text.
pub fn stratify(f: &Family, slice: &Slice, gap_threshold: f64) -> Result<StratificationMap> {
    if slice.axes.is_empty() || slice.axes.len() > 2 {
        return Err(Error::InvalidArgument("slice must have one or two axes".into()));
    }
    f.check_point(&slice.base)?;
    for a in &slice.axes {
        if a.direction.len() != f.m() || a.count == 0 || !(a.lo <= a.hi) {
            return Err(Error::InvalidArgument("invalid slice axis".into()));
        }
    }
    let total = slice.len();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(total.max(1));
    let chunk = total.div_ceil(workers);
    let mut signatures: Vec<Option<JordanSignature>> = vec![None; total];
    std::thread::scope(|scope| {
        for (w, out) in signatures.chunks_mut(chunk).enumerate() {
            scope.spawn(move || {
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = node_signature(f, &slice.point(w * chunk + k), gap_threshold);
                }
            });
        }
    });
    let texts: Vec<String> = signatures
        .iter()
        .map(|s| s.as_ref().map_or_else(|| UNDETERMINED.to_string(), |s| s.text()))
        .collect();
    let (nx, ny) = slice.shape();
    let (region_count, regions) = label_by_value(&texts, nx, ny);
    let legend: BTreeMap<String, String> = texts.iter().map(|t| (t.clone(), signature_hash(t))).collect();
    let nodes = signatures
        .into_iter()
        .zip(texts)
        .enumerate()
        .map(|(idx, (signature, text))| StratumNode {
            slice_coords: slice.slice_coords(idx),
            coords: slice.point(idx).coords,
            hash: legend[&text].clone(),
            signature,
            text,
            region: regions[idx],
        })
        .collect();
    Ok(StratificationMap {
        shape: (nx, ny),
        nodes,
        region_count,
        legend,
    })
}

/// 4-connected components of equal values on an `nx × ny` grid.
fn label_by_value<T: PartialEq>(values: &[T], nx: usize, ny: usize) -> (usize, Vec<usize>) {
    let mut label = vec![usize::MAX; values.len()];
    let mut count = 0;
    for start in 0..values.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        let mut stack = vec![start];
        while let Some(idx) = stack.pop() {
            let (i, j) = (idx % nx, idx / nx);
            let mut nbrs = Vec::with_capacity(4);
            if i > 0 {
                nbrs.push(idx - 1);
            }
            if i + 1 < nx {
                nbrs.push(idx + 1);
            }
            if j > 0 {
                nbrs.push(idx - nx);
            }
            if j + 1 < ny {
                nbrs.push(idx + nx);
            }
            for nb in nbrs {
                if label[nb] == usize::MAX && values[nb] == values[start] {
                    label[nb] = count;
                    stack.push(nb);
                }
            }
        }
        count += 1;
    }
    (count, label)
}
