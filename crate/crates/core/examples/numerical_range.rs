//! Numerical range of a Hermitian family and the field-of-values test it is
//! built on.

use parapoly::grid::{GridSpec, Region};
use parapoly::linalg::ComplexMatrix;
use parapoly::model::{parse_family, ParamPoint};
use parapoly::ranges::{fov_contains_zero, fov_margin, numrange_grid, FovQuery, DEFAULT_ANGLES};
use parapoly::spectral::spectrum_at;

fn main() -> parapoly::Result<()> {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]);
    println!(
        "0 in F(A): {} (margin {:.4})",
        fov_contains_zero(&FovQuery::new(a.clone())),
        fov_margin(&a, DEFAULT_ANGLES)
    );

    let f = parse_family(include_str!("../data/hermitian.toml"))?;
    let u = ParamPoint::new(vec![0.5]);
    let spec = GridSpec::new(Region::new(-2.5, 2.5, -1.0, 1.0)?, 101, 41)?;
    let g = numrange_grid(&f, &u, &spec)?;
    println!("eigenvalues {:?}", spectrum_at(&f, &u)?.values());
    let pts = g.member_points();
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(z.re), b.max(z.re)));
    println!("W spans [{lo:.3}, {hi:.3}] on the real axis, {} cells", pts.len());
    Ok(())
}
