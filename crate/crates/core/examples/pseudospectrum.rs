//! Structured pseudospectrum of λ + t with one complex parameter: the set of
//! eigenvalues reachable within distance ε is the disk of radius ε.

use parapoly::grid::{GridSpec, Region};
use parapoly::model::{parse_family, ParamPoint};
use parapoly::pseudo::{pseudo_membership, pseudospectrum_grid, GridOptions, PseudoQuery};
use parapoly::svg::{emit_svg, Layer, Viewport, PALETTE};
use num_complex::Complex64;

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/disk.toml"))?;
    let u = ParamPoint::origin(2);

    let m = pseudo_membership(&f, &u, 1.0, Complex64::new(0.6, -0.5), None)?;
    println!("0.6-0.5i member: {} (witness {:?})", m.member, m.witness.map(|w| w.v));

    let spec = GridSpec::new(Region::square(2.0), 61, 61)?;
    let g = pseudospectrum_grid(&f, &u, &PseudoQuery { eps: 1.0, spec }, &GridOptions::default())?;
    println!("{} of {} cells, {} component(s)", g.member_count(), spec.len(), g.components);

    let svg = emit_svg(
        "eps = 1",
        &[
            Layer::Cells {
                label: "member cells".into(),
                color: PALETTE[0].into(),
                centers: g.member_points(),
                cell_w: spec.h_re(),
                cell_h: spec.h_im(),
            },
            Layer::Polylines {
                label: "boundary".into(),
                color: PALETTE[3].into(),
                lines: g.boundary.clone(),
            },
        ],
        &Viewport::new(spec.region, 480.0),
    );
    let path = std::env::temp_dir().join("pseudospectrum.svg");
    std::fs::write(&path, svg)?;
    println!("wrote {}", path.display());
    Ok(())
}
