//! How far can an eigenvalue move when the parameter moves? The determinant
//! sandwiches the distance between the two spectra.

use parapoly::model::{parse_family, ParamPoint};
use parapoly::spectral::{hausdorff, spectrum_at, verify_spectrum_perturbation};

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/quadratic.toml"))?;
    let u = ParamPoint::new(vec![0.3, -0.2]);
    for step in [1e-1, 1e-2, 1e-3] {
        let v = u.offset(&[0.6, 0.8], step);
        let h = hausdorff(&spectrum_at(&f, &u)?.values(), &spectrum_at(&f, &v)?.values())?;
        println!("|u - u'| = {step:e}, Hausdorff distance {h:.3e}");
        for lambda in spectrum_at(&f, &u)?.values() {
            let c = verify_spectrum_perturbation(&f, &u, &v, lambda)?;
            println!(
                "  dist^(dn) {:.3e} <= |det| {:.3e} <= bound {:.3e}  {}",
                c.dist_pow,
                c.det_val,
                c.det_bound,
                if c.all_hold() { "ok" } else { "FAILED" }
            );
        }
    }
    Ok(())
}
