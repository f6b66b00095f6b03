//! Empirical Hölder exponents: 1/2 for the spectrum of λI − [[0, 1], [t, 0]]
//! at t = 0, and close to 1 away from it.

use parapoly::model::{parse_family, ParamPoint};
use parapoly::regularity::{fit_holder, genericity_probe, geometric_scales, sample_scale_pairs, MapKind};

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/sqrt.toml"))?;
    let scales = geometric_scales(0.1, 0.5, 8);
    for t in [0.0, 1.0] {
        let u = ParamPoint::new(vec![t]);
        println!("t = {t}: {}", genericity_probe(&f, &u)?.verdict);
        for kind in [
            MapKind::Spectrum,
            MapKind::Specradius,
            MapKind::Pseudospectrum { eps: 0.1, samples: 100 },
            MapKind::Numrange { samples: 200 },
        ] {
            let s = sample_scale_pairs(&f, &u, kind, Some(&[1.0]), &scales, 0)?;
            let fit = fit_holder(&s.pairs, s.noise_floor)?;
            println!("  {:<15} alpha = {:?}", kind.name(), fit.alpha_hat.map(|a| (a * 1000.0).round() / 1000.0));
        }
    }
    Ok(())
}
