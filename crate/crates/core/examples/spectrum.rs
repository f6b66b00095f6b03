//! Eigenvalues of a two-parameter quadratic family at a few points.

use parapoly::model::{parse_family, ParamPoint};
use parapoly::spectral::{companion_matrix, spectral_radius, spectrum_at};
use parapoly::model::evaluate_coeffs;

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/quadratic.toml"))?;
    for at in [[0.0, 0.0], [0.3, -0.2], [1.0, 1.0]] {
        let u = ParamPoint::new(at.to_vec());
        let s = spectrum_at(&f, &u)?;
        println!("t = {at:?}: {} eigenvalues, radius {:.6}", s.total, spectral_radius(&s));
        for c in &s.eigenvalues {
            println!("  {:+.10} {:+.10}i  (x{})", c.value.re, c.value.im, c.multiplicity);
        }
    }

    // same numbers from the companion matrix, for comparison
    let p = evaluate_coeffs(&f, &ParamPoint::new(vec![0.3, -0.2]))?;
    let c = companion_matrix(&p)?;
    println!("companion is {}x{}, trace {:.10}", c.rows(), c.cols(), c.trace());
    Ok(())
}
