use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use parapoly::cli::{run, AxisSpec, Command, MapName, RunConfig};
use parapoly::Error;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn configs(out: &Path) -> Vec<RunConfig> {
    let mut v = Vec::new();

    let mut c = RunConfig::new(data("quadratic.toml"), Command::Spectrum, out.join("spectrum"));
    c.at = vec![0.3, -0.2];
    v.push(c);

    let mut c = RunConfig::new(data("disk.toml"), Command::Pseudo, out.join("pseudo"));
    c.eps = Some(0.5);
    c.region = Some([-1.0, 1.0, -1.0, 1.0]);
    c.resolution = Some(31);
    v.push(c);

    let mut c = RunConfig::new(data("hermitian.toml"), Command::Numrange, out.join("numrange"));
    c.at = vec![0.5];
    c.resolution = Some(31);
    v.push(c);

    let mut c = RunConfig::new(data("quadratic.toml"), Command::Jointnr, out.join("jointnr"));
    c.samples = Some(50);
    c.seed = 11;
    v.push(c);

    let mut c = RunConfig::new(data("sqrt.toml"), Command::Holder, out.join("holder"));
    c.map = Some(MapName::Spectrum);
    v.push(c);

    let mut c = RunConfig::new(data("sqrt.toml"), Command::Jordan, out.join("jordan"));
    c.at = vec![0.0];
    v.push(c);

    let mut c = RunConfig::new(data("sqrt.toml"), Command::Stratify, out.join("stratify"));
    c.axes = vec![AxisSpec { param: 0, lo: -1.0, hi: 1.0, count: 21 }];
    v.push(c);

    let mut c = RunConfig::new(data("quadratic.toml"), Command::Certify, out.join("certify"));
    c.at = vec![0.1, 0.2];
    c.to = Some(vec![0.15, 0.18]);
    v.push(c);
    v
}

#[test]
fn every_command_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in configs(dir.path()) {
        run(&cfg).unwrap_or_else(|e| panic!("{:?}: {e}", cfg.command));
        let first = read_dir(&cfg.out_dir);
        run(&cfg).unwrap();
        let second = read_dir(&cfg.out_dir);
        assert_eq!(first.keys().collect::<Vec<_>>(), second.keys().collect::<Vec<_>>());
        for (name, bytes) in &first {
            assert!(bytes == &second[name], "{:?}: {name} differs between runs", cfg.command);
        }
    }
}

#[test]
fn manifest_matches_directory_and_config() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in configs(dir.path()) {
        let summary = run(&cfg).unwrap();
        let on_disk: Vec<String> = read_dir(&cfg.out_dir).into_keys().collect();
        assert_eq!(summary.files, on_disk);
        let manifest: serde_json::Value = serde_json::from_slice(&fs::read(cfg.out_dir.join("manifest.json")).unwrap()).unwrap();
        let listed: Vec<String> = manifest["files"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect();
        assert_eq!(listed, on_disk);
        assert_eq!(manifest["seed"], cfg.seed);
        let resolved: RunConfig = serde_json::from_value(manifest["config"].clone()).unwrap();
        assert_eq!(resolved.command, cfg.command);
        let report: serde_json::Value = serde_json::from_slice(&fs::read(cfg.out_dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(report["violation"], serde_json::Value::Null);
    }
}

#[test]
fn svg_outputs_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let mut count = 0;
    for cfg in configs(dir.path()) {
        let summary = run(&cfg).unwrap();
        for name in summary.files.iter().filter(|f| f.ends_with(".svg")) {
            let text = fs::read_to_string(cfg.out_dir.join(name)).unwrap();
            let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let root = doc.root_element();
            assert_eq!(root.tag_name().name(), "svg");
            assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
            assert!(root.attribute("viewBox").is_some());
            for node in doc.descendants().filter(|n| n.is_element()) {
                for attr in node.attributes() {
                    if matches!(attr.name(), "x" | "y" | "cx" | "cy" | "width" | "height") {
                        let v: f64 = attr.value().parse().unwrap();
                        assert!(v.is_finite(), "{name}: {}={}", attr.name(), attr.value());
                    }
                }
            }
            count += 1;
        }
    }
    assert!(count >= 5);
}

/// Closed cells of side 0.04 meet the unit disk exactly when the nearest
/// point of the cell is within distance 1 of the origin.
#[test]
fn disk_pseudospectrum_matches_closed_cell_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(data("disk.toml"), Command::Pseudo, dir.path().join("out"));
    cfg.eps = Some(1.0);
    cfg.region = Some([-2.0, 2.0, -2.0, 2.0]);
    cfg.resolution = Some(101);
    let s = run(&cfg).unwrap();
    let h = 4.0 / 101.0;
    let mut expected = 0;
    let mut rows = 0;
    let mut rdr = csv::Reader::from_path(cfg.out_dir.join("pseudo_grid.csv")).unwrap();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let re: f64 = rec[2].parse().unwrap();
        let im: f64 = rec[3].parse().unwrap();
        let member = &rec[4] == "1" || &rec[4] == "true";
        let nx = (re.abs() - h / 2.0).max(0.0);
        let ny = (im.abs() - h / 2.0).max(0.0);
        let oracle = nx.hypot(ny) <= 1.0;
        // cells touching the circle only along a sliver are left to rounding
        let slack = (nx.hypot(ny) - 1.0).abs() > 1e-9;
        if slack {
            assert_eq!(member, oracle, "cell at {re}, {im}");
        }
        expected += oracle as usize;
        rows += 1;
    }
    assert_eq!(rows, 101 * 101);
    assert_eq!(s.report["member_count"].as_u64().unwrap() as usize, expected);
    assert_eq!(s.report["components"], 1);
}

#[test]
fn holder_on_square_root_family() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(data("sqrt.toml"), Command::Holder, dir.path().join("out"));
    cfg.map = Some(MapName::Spectrum);
    cfg.at = vec![0.0];
    let s = run(&cfg).unwrap();
    let alpha = s.report["alpha_hat"].as_f64().unwrap();
    assert!((alpha - 0.5).abs() < 0.02, "alpha {alpha}");
    let csv = fs::read_to_string(cfg.out_dir.join("holder_pairs.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
}

#[test]
fn error_classes_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = RunConfig::new(dir.path().join("nope.toml"), Command::Spectrum, dir.path().join("a"));
    assert_eq!(run(&missing).unwrap_err().exit_code(), 2);

    let mut wrong_len = RunConfig::new(data("quadratic.toml"), Command::Spectrum, dir.path().join("b"));
    wrong_len.at = vec![1.0];
    assert!(matches!(run(&wrong_len), Err(Error::ParamLength { .. })));

    let no_target = RunConfig::new(data("quadratic.toml"), Command::Certify, dir.path().join("c"));
    assert_eq!(run(&no_target).unwrap_err().exit_code(), 2);

    let mut three_axes = RunConfig::new(data("quadratic.toml"), Command::Stratify, dir.path().join("d"));
    three_axes.axes = vec![AxisSpec { param: 0, lo: 0.0, hi: 1.0, count: 3 }; 3];
    assert_eq!(run(&three_axes).unwrap_err().exit_code(), 2);
}

#[test]
fn csv_floats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(data("quadratic.toml"), Command::Spectrum, dir.path().join("out"));
    cfg.at = vec![0.3, -0.2];
    run(&cfg).unwrap();
    let f = parapoly::model::parse_family(&fs::read_to_string(data("quadratic.toml")).unwrap()).unwrap();
    let s = parapoly::spectral::spectrum_at(&f, &parapoly::model::ParamPoint::new(cfg.at.clone())).unwrap();
    let mut rdr = csv::Reader::from_path(cfg.out_dir.join("spectrum.csv")).unwrap();
    let parsed: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    let exact: Vec<(f64, f64)> = s.eigenvalues.iter().map(|c| (c.value.re, c.value.im)).collect();
    assert_eq!(parsed, exact);
}
