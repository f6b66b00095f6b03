//! Jordan signature over the plane for λI − [[t1, 1], [0, t2]]: a 2-block on
//! the diagonal t1 = t2, two simple eigenvalues elsewhere.

use parapoly::jordan::{stratify, Slice, SliceAxis, GAP_THRESHOLD};
use parapoly::model::{parse_family, ParamPoint};

fn main() -> parapoly::Result<()> {
    let f = parse_family(include_str!("../data/triangular.toml"))?;
    let slice = Slice {
        base: ParamPoint::origin(2),
        axes: vec![
            SliceAxis::coordinate(2, 0, -1.0, 1.0, 11),
            SliceAxis::coordinate(2, 1, -1.0, 1.0, 11),
        ],
    };
    let map = stratify(&f, &slice, GAP_THRESHOLD)?;
    for (text, hash) in &map.legend {
        println!("{hash}  {text}");
    }
    for j in (0..11).rev() {
        let row: String = (0..11)
            .map(|i| if map.nodes[j * 11 + i].text.starts_with("k=1") { '#' } else { '.' })
            .collect();
        println!("{row}");
    }
    println!("{} regions", map.region_count);
    Ok(())
}
