use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parapoly::cli::{run, AxisSpec, Command, MapName, RunConfig};

#[derive(Parser)]
#[command(name = "parapoly", version, about = "Spectral sets of parameter-dependent matrix polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalues with multiplicities
    Spectrum(Common),
    /// Structured ε-pseudospectrum on a grid
    Pseudo(Common),
    /// Numerical range on a grid
    Numrange(Common),
    /// Samples of the joint numerical range
    Jointnr(Common),
    /// Empirical Hölder exponent of a set-valued map
    Holder(Common),
    /// Jordan pair of the linearization
    Jordan(Common),
    /// Jordan signature map over a parameter slice
    Stratify(Common),
    /// Perturbation inequalities between two parameter points
    Certify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Spectrum,
    Pseudo,
    Numrange,
    Jointnr,
    Specradius,
}

#[derive(Args)]
struct Common {
    /// Family description (TOML)
    family: PathBuf,
    /// Parameter point, comma separated
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    at: Vec<f64>,
    /// Second parameter point (certify)
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    to: Option<Vec<f64>>,
    #[arg(long)]
    eps: Option<f64>,
    /// re_min,re_max,im_min,im_max
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    region: Option<Vec<f64>>,
    /// Grid nodes per axis
    #[arg(long = "res")]
    resolution: Option<usize>,
    /// Decreasing step sizes (holder)
    #[arg(long, value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Clustering radius (spectrum) or noise floor (holder)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    map: Option<MapArg>,
    /// Perturbation direction (holder), comma separated
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    direction: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    /// param:lo:hi:count, once or twice (stratify)
    #[arg(long = "axis", allow_hyphen_values = true, value_parser = parse_axis)]
    axes: Vec<AxisSpec>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err("expected param:lo:hi:count".into());
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p}: {e}"));
    let int = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("{p}: {e}"));
    Ok(AxisSpec {
        param: int(parts[0])?,
        lo: num(parts[1])?,
        hi: num(parts[2])?,
        count: int(parts[3])?,
    })
}

fn config(command: Command, c: Common) -> Result<RunConfig, String> {
    let region = match c.region {
        Some(r) if r.len() == 4 => Some([r[0], r[1], r[2], r[3]]),
        Some(r) => return Err(format!("--region needs 4 values, got {}", r.len())),
        None => None,
    };
    let mut cfg = RunConfig::new(c.family, command, c.out);
    cfg.at = c.at;
    cfg.to = c.to;
    cfg.eps = c.eps;
    cfg.region = region;
    cfg.resolution = c.resolution;
    cfg.scales = c.scales;
    cfg.seed = c.seed;
    cfg.tol = c.tol;
    cfg.map = c.map.map(|m| match m {
        MapArg::Spectrum => MapName::Spectrum,
        MapArg::Pseudo => MapName::Pseudo,
        MapArg::Numrange => MapName::Numrange,
        MapArg::Jointnr => MapName::Jointnr,
        MapArg::Specradius => MapName::Specradius,
    });
    cfg.direction = c.direction;
    cfg.samples = c.samples;
    cfg.axes = c.axes;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Cmd::Spectrum(c) => config(Command::Spectrum, c),
        Cmd::Pseudo(c) => config(Command::Pseudo, c),
        Cmd::Numrange(c) => config(Command::Numrange, c),
        Cmd::Jointnr(c) => config(Command::Jointnr, c),
        Cmd::Holder(c) => config(Command::Holder, c),
        Cmd::Jordan(c) => config(Command::Jordan, c),
        Cmd::Stratify(c) => config(Command::Stratify, c),
        Cmd::Certify(c) => config(Command::Certify, c),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", cfg.out_dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
