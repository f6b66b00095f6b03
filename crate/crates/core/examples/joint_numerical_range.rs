//! Joint numerical range samples and the numerical range recovered from them.

use parapoly::model::{parse_family, ParamPoint};
use parapoly::ranges::{jw_sample, reconstruct_w_from_jw};

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/quadratic.toml"))?;
    let u = ParamPoint::new(vec![0.3, -0.2]);
    let cloud = jw_sample(&f, &u, 400, 7)?;
    for p in cloud.points.iter().take(3) {
        println!("{:.4?}", p);
    }
    let w = reconstruct_w_from_jw(&cloud)?;
    let r = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("{} points of W, all within |λ| <= {r:.4}", w.len());
    Ok(())
}
