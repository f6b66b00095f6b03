//! Rectangular λ-plane grids of membership flags: connected components,
//! boundary polylines and mirror symmetry.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidArgument(format!(
                "empty or non-finite region [{re_min}, {re_max}] × [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Square `[-r, r]²`.
    pub fn square(r: f64) -> Self {
        Self {
            re_min: -r,
            re_max: r,
            im_min: -r,
            im_max: r,
        }
    }

    /// Smallest region containing the points, padded by `pad` on every side.
    pub fn bounding(points: &[Complex64], pad: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut r = Self {
            re_min: f64::INFINITY,
            re_max: f64::NEG_INFINITY,
            im_min: f64::INFINITY,
            im_max: f64::NEG_INFINITY,
        };
        for z in points {
            r.re_min = r.re_min.min(z.re);
            r.re_max = r.re_max.max(z.re);
            r.im_min = r.im_min.min(z.im);
            r.im_max = r.im_max.max(z.im);
        }
        Self::new(r.re_min - pad, r.re_max + pad, r.im_min - pad, r.im_max + pad)
    }

    /// Widens the imaginary range so the region is symmetric about the real
    /// axis.
    pub fn symmetrized(&self) -> Self {
        let h = self.im_max.abs().max(self.im_min.abs());
        Self {
            im_min: -h,
            im_max: h,
            ..*self
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn is_axis_symmetric(&self) -> bool {
        let scale = 1.0 + self.im_max.abs().max(self.im_min.abs());
        (self.im_min + self.im_max).abs() <= 1e-12 * scale
    }
}

/// Cell-centred sampling: `n_re × n_im` nodes spanning the region including
/// its edges, each node the centre of a cell of size `h_re × h_im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub region: Region,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(region: Region, n_re: usize, n_im: usize) -> Result<Self> {
        if n_re < 2 || n_im < 2 {
            return Err(Error::InvalidArgument("grid resolution must be at least 2".into()));
        }
        Ok(Self { region, n_re, n_im })
    }

    pub fn h_re(&self) -> f64 {
        (self.region.re_max - self.region.re_min) / (self.n_re - 1) as f64
    }

    pub fn h_im(&self) -> f64 {
        (self.region.im_max - self.region.im_min) / (self.n_im - 1) as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.h_re().hypot(self.h_im())
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index with the imaginary index outermost.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_re + i
    }

    /// Node coordinates for possibly out-of-range (padded) indices.
    pub fn node(&self, i: isize, j: isize) -> Complex64 {
        Complex64::new(
            self.region.re_min + i as f64 * self.h_re(),
            self.region.im_min + j as f64 * self.h_im(),
        )
    }

    pub fn center(&self, idx: usize) -> Complex64 {
        self.node((idx % self.n_re) as isize, (idx / self.n_re) as isize)
    }

    /// Index of the cell whose closed box contains `z`, if any.
    pub fn cell_of(&self, z: Complex64) -> Option<usize> {
        let fi = ((z.re - self.region.re_min) / self.h_re()).round();
        let fj = ((z.im - self.region.im_min) / self.h_im()).round();
        if fi < 0.0 || fj < 0.0 || fi >= self.n_re as f64 || fj >= self.n_im as f64 {
            return None;
        }
        Some(self.index(fi as usize, fj as usize))
    }

    /// Indices of every cell whose closed box contains `z` (more than one on
    /// shared edges).
    pub fn cells_touching(&self, z: Complex64) -> Vec<usize> {
        let fi = (z.re - self.region.re_min) / self.h_re();
        let fj = (z.im - self.region.im_min) / self.h_im();
        let slack = 1e-9;
        let span = |f: f64, n: usize| -> Vec<usize> {
            let lo = (f - 0.5 - slack).ceil().max(0.0) as i64;
            let hi = (f + 0.5 + slack).floor().min(n as f64 - 1.0) as i64;
            (lo..=hi).map(|k| k as usize).collect()
        };
        let mut out = Vec::new();
        for j in span(fj, self.n_im) {
            for i in span(fi, self.n_re) {
                out.push(self.index(i, j));
            }
        }
        out
    }
}

/// Membership flags on a grid with derived boundary and component count.
#[derive(Debug, Clone, Serialize)]
pub struct IndicatorGrid {
    pub spec: GridSpec,
    pub member: Vec<bool>,
    /// Per-cell scalar: the meaning depends on the producer.
    pub values: Vec<f64>,
    pub boundary: Vec<Vec<Complex64>>,
    pub components: usize,
    /// The sampled family is real or Hermitian, so the set should be
    /// symmetric about the real axis.
    pub conjugate_symmetric_family: bool,
}

impl IndicatorGrid {
    pub fn from_membership(spec: GridSpec, member: Vec<bool>, values: Vec<f64>, conjugate_symmetric_family: bool) -> Self {
        let (components, _) = label_components(&member, spec.n_re, spec.n_im);
        let boundary = marching_squares(&spec, &member);
        Self {
            spec,
            member,
            values,
            boundary,
            components,
            conjugate_symmetric_family,
        }
    }

    pub fn member_count(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    /// Centres of member cells.
    pub fn member_points(&self) -> Vec<Complex64> {
        (0..self.spec.len())
            .filter(|&k| self.member[k])
            .map(|k| self.spec.center(k))
            .collect()
    }

    /// Whether the cell at `z` (or any cell whose box touches `z`) is a member.
    pub fn covers(&self, z: Complex64) -> bool {
        self.spec.cells_touching(z).into_iter().any(|k| self.member[k])
    }

    /// Whether membership touches the outer frame of the grid.
    pub fn touches_frame(&self) -> bool {
        let (nx, ny) = (self.spec.n_re, self.spec.n_im);
        (0..nx).any(|i| self.member[self.spec.index(i, 0)] || self.member[self.spec.index(i, ny - 1)])
            || (0..ny).any(|j| self.member[self.spec.index(0, j)] || self.member[self.spec.index(nx - 1, j)])
    }
}

/// Labels 4-connected components of `true` cells; returns the count and a
/// per-cell label (`usize::MAX` for non-members).
pub fn label_components(member: &[bool], nx: usize, ny: usize) -> (usize, Vec<usize>) {
    let mut label = vec![usize::MAX; member.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..member.len() {
        if !member[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (i, j) = (k % nx, k / nx);
            let mut visit = |q: usize| {
                if member[q] && label[q] == usize::MAX {
                    label[q] = count;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
        count += 1;
    }
    (count, label)
}

/// Edge of the (padded) node lattice: horizontal edges join `(i, j)` and
/// `(i+1, j)`, vertical ones `(i, j)` and `(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(isize, isize),
    V(isize, isize),
}

/// Boundary of the member set as polylines through edge midpoints between
/// member and non-member nodes. The field is padded with non-members so all
/// curves close. Diagonal member pairs are treated as disconnected,
/// matching 4-connectivity.
pub fn marching_squares(spec: &GridSpec, member: &[bool]) -> Vec<Vec<Complex64>> {
    let (nx, ny) = (spec.n_re as isize, spec.n_im as isize);
    let at = |i: isize, j: isize| -> bool {
        i >= 0 && j >= 0 && i < nx && j < ny && member[spec.index(i as usize, j as usize)]
    };
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in -1..ny {
        for i in -1..nx {
            let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
            let bottom = Edge::H(i, j);
            let right = Edge::V(i + 1, j);
            let top = Edge::H(i, j + 1);
            let left = Edge::V(i, j);
            let case = (a as u8) | (b as u8) << 1 | (c as u8) << 2 | (d as u8) << 3;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                // saddles: cut off each member corner separately
                5 => {
                    segments.push((left, bottom));
                    segments.push((right, top));
                }
                10 => {
                    segments.push((bottom, right));
                    segments.push((left, top));
                }
                _ => unreachable!(),
            }
        }
    }
    let midpoint = |e: Edge| -> Complex64 {
        match e {
            Edge::H(i, j) => (spec.node(i, j) + spec.node(i + 1, j)) * 0.5,
            Edge::V(i, j) => (spec.node(i, j) + spec.node(i, j + 1)) * 0.5,
        }
    };
    let mut adjacency: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (s, &(e1, e2)) in segments.iter().enumerate() {
        adjacency.entry(e1).or_default().push(s);
        adjacency.entry(e2).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    // open chains cannot occur with padding, but starting from degree-1
    // edges first keeps the walk correct regardless
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&s| {
        let (e1, e2) = segments[s];
        let odd = adjacency[&e1].len() == 1 || adjacency[&e2].len() == 1;
        (!odd, s)
    });
    for s0 in order {
        if used[s0] {
            continue;
        }
        used[s0] = true;
        let (start, mut cur) = segments[s0];
        let mut chain = vec![start, cur];
        loop {
            let next = adjacency[&cur].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (e1, e2) = segments[s];
            cur = if e1 == cur { e2 } else { e1 };
            chain.push(cur);
        }
        lines.push(chain.into_iter().map(midpoint).collect());
    }
    lines
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub mismatches: usize,
    /// Mismatches where neither the cell nor its mirror borders a change of
    /// membership.
    pub interior_mismatches: usize,
}

/// Compares the member field with its mirror image about the real axis.
pub fn check_axis_symmetry(g: &IndicatorGrid) -> Result<SymmetryReport> {
    if !g.spec.region.is_axis_symmetric() {
        return Err(Error::RegionNotSymmetric);
    }
    if !g.conjugate_symmetric_family {
        return Err(Error::NotConjugateSymmetric);
    }
    let (nx, ny) = (g.spec.n_re, g.spec.n_im);
    let on_edge = |i: usize, j: usize| -> bool {
        let me = g.member[g.spec.index(i, j)];
        let mut nb = Vec::with_capacity(4);
        if i > 0 {
            nb.push((i - 1, j));
        }
        if i + 1 < nx {
            nb.push((i + 1, j));
        }
        if j > 0 {
            nb.push((i, j - 1));
        }
        if j + 1 < ny {
            nb.push((i, j + 1));
        }
        nb.into_iter().any(|(a, b)| g.member[g.spec.index(a, b)] != me)
    };
    let mut mismatches = 0;
    let mut interior = 0;
    for j in 0..ny {
        for i in 0..nx {
            let jm = ny - 1 - j;
            if g.member[g.spec.index(i, j)] != g.member[g.spec.index(i, jm)] {
                mismatches += 1;
                if !on_edge(i, j) && !on_edge(i, jm) {
                    interior += 1;
                }
            }
        }
    }
    Ok(SymmetryReport {
        symmetric: mismatches == 0,
        mismatches,
        interior_mismatches: interior,
    })
}
