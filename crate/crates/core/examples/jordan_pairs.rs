//! Jordan pair of (λ − 1)² and of λI − [[0, 1], [t, 0]] at t = 0.

use parapoly::model::{parse_family, Family, ParamPoint};
use parapoly::jordan::jordan_pair;

fn show(f: &Family, u: &ParamPoint) -> parapoly::Result<()> {
    let pair = jordan_pair(f, u)?;
    println!("signature {} ({})", pair.signature.text(), pair.signature.hash());
    for i in 0..pair.j.rows() {
        let row: Vec<String> = (0..pair.j.cols()).map(|k| format!("{:5.2}", pair.j[(i, k)].re)).collect();
        println!("  J | {}", row.join(" "));
    }
    println!("  chain residual {:.1e}", pair.max_residual);
    Ok(())
}

fn main() -> parapoly::Result<()> {
    let double = Family::from_exprs(1, &[vec![vec!["1"]], vec![vec!["-2"]], vec![vec!["1"]]])?;
    show(&double, &ParamPoint::origin(1))?;
    show(&parse_family(include_str!("../data/sqrt.toml"))?, &ParamPoint::origin(1))?;
    Ok(())
}
