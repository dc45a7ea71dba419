//! Command-line front end: one subcommand per library operation, JSON on
//! stdout, optional side files in `--out-dir`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use sheafdyn::catalog::{classify_bifurcation, invariance_for_config, isolating_windows, ConjugacyTransform};
use sheafdyn::config::AnalysisConfig;
use sheafdyn::dynamics::{attractor_lattice, portrait};
use sheafdyn::lattice::{join_irreducibles, validate_lattice};
use sheafdyn::report::{bifurcation_csv, to_canonical_json, Report};
use sheafdyn::rings::Functor;
use sheafdyn::sheaf::{detect_bifurcations, Analysis, ParamSubset};
use sheafdyn::Execution;

#[derive(Parser, Debug)]
#[command(
    name = "sheafdyn",
    version,
    about = "Attractor-lattice sheaves and bifurcation cohomology for scalar flows"
)]
struct Cli {
    /// Analysis configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Ring functor: boolean or free. Defaults to the first one in the config.
    #[arg(long, global = true)]
    functor: Option<Functor>,

    /// Directory for JSON, DOT and CSV files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    tol_x: Option<f64>,

    #[arg(long, global = true)]
    tol_lambda: Option<f64>,

    /// Number of parameter grid points used for detection.
    #[arg(long, global = true)]
    grid: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equilibria and flow directions at one parameter value.
    Portrait {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Attractor lattice at one parameter value.
    Lattice {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Bifurcation values and signature regions over the parameter range.
    Bifurcations,
    /// Stalks and restriction maps.
    Sheaf,
    /// H^0 and H^1 for one functor.
    Cohomology,
    /// Cohomology relative to a closed subset, e.g. "right-ray 1.0".
    Relative {
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
    },
    /// Matches the bifurcation near a value against the catalog.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        /// Half-width of the window; defaults to half the distance to the nearest neighbour.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Compares all dims with those of a conjugate system,
    /// e.g. "shift=0,0.5 reparam=0,1,0,1".
    Invariance {
        #[arg(long, allow_hyphen_values = true)]
        transform: String,
    },
    /// Full report with DOT and CSV side files.
    Report,
}

#[derive(Debug)]
struct Unwritable(PathBuf, std::io::Error);

impl std::fmt::Display for Unwritable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot write {}: {}", self.0.display(), self.1)
    }
}

impl std::error::Error for Unwritable {}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<sheafdyn::Error>() {
            return if err.is_numerical() { 3 } else { 2 };
        }
        if cause.downcast_ref::<Unwritable>().is_some() {
            return 1;
        }
    }
    2
}

fn execution() -> Result<Execution> {
    let Ok(raw) = std::env::var("SHEAFDYN_THREADS") else {
        return Ok(Execution::default());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            sheafdyn::Error::InvalidConfig(format!("SHEAFDYN_THREADS={raw:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the worker pool")?;
    Ok(if n == 1 {
        Execution::Sequential
    } else {
        Execution::default()
    })
}

fn load_config(cli: &Cli) -> Result<AnalysisConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| sheafdyn::Error::InvalidConfig("--config is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| sheafdyn::Error::InvalidConfig(format!("reading {}: {e}", path.display())))?;
    let mut config = AnalysisConfig::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    if let Some(t) = cli.tol_x {
        config.parameter.tol_x = t;
    }
    if let Some(t) = cli.tol_lambda {
        config.parameter.tol_lambda = t;
    }
    if let Some(g) = cli.grid {
        config.parameter.grid = g;
    }
    config.validate()?;
    Ok(config)
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Unwritable(dir.to_path_buf(), e))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| Unwritable(path, e))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let exec = execution()?;
    let config = load_config(cli)?;
    let mut opts = config.options();
    opts.exec = exec;
    let p = &config.parameter;
    let functor = cli.functor.unwrap_or(config.functors[0]);
    let stem = &config.output.stem;
    let analysis = || Analysis::run(&config.system, p.topology, p.range, &p.pinned, &p.refine, &opts);
    let mut side: Vec<(String, String)> = Vec::new();

    let out: Value = match &cli.command {
        Command::Portrait { lambda } => serde_json::to_value(portrait(&config.system, *lambda, p.tol_x)?)?,
        Command::Lattice { lambda } => {
            let l = attractor_lattice(&portrait(&config.system, *lambda, p.tol_x)?)?;
            let j = join_irreducibles(&l.lattice);
            if config.output.dot {
                side.push(("lattice.dot".into(), l.lattice.to_dot(&format!("λ={lambda}"))));
            }
            json!({
                "stalk": l,
                "size": l.len(),
                "join_irreducibles": j.members.iter().map(|&m| l.lattice.label(m)).collect::<Vec<_>>(),
                "validation": validate_lattice(&l.lattice),
            })
        }
        Command::Bifurcations => {
            let a = analysis()?;
            if config.output.csv {
                side.push(("bifurcations.csv".into(), bifurcation_csv(&a)));
            }
            serde_json::to_value(&a.detection)?
        }
        Command::Sheaf => {
            let a = analysis()?;
            if config.output.dot {
                side.push(("sheaf.dot".into(), a.lattices.to_dot()));
            }
            let restrictions: Vec<Value> = a
                .lattices
                .restrictions
                .iter()
                .map(|r| json!({ "incidence": r.incidence, "map": r.hom.table() }))
                .collect();
            json!({
                "complex": a.complex,
                "vertex_stalks": a.lattices.vertex_stalks,
                "edge_stalks": a.lattices.edge_stalks,
                "restrictions": restrictions,
                "abelian": a.abelian(functor)?,
            })
        }
        Command::Cohomology => serde_json::to_value(analysis()?.cohomology(functor)?)?,
        Command::Relative { sub } => {
            let sub = ParamSubset::parse(sub)?;
            serde_json::to_value(analysis()?.relative(functor, &sub)?)?
        }
        Command::Classify { at, window } => {
            let window = match window {
                Some(w) => *w,
                None => {
                    let det = detect_bifurcations(&config.system, p.topology, p.range, &p.pinned, &opts)?;
                    let values = det.values();
                    let windows = isolating_windows(&values, p.topology, p.range);
                    values
                        .iter()
                        .zip(&windows)
                        .min_by(|a, b| (a.0 - at).abs().total_cmp(&(b.0 - at).abs()))
                        .map(|(_, w)| *w)
                        .ok_or(sheafdyn::Error::NoBifurcation {
                            lambda: *at,
                            lo: p.range.0,
                            hi: p.range.1,
                        })?
                }
            };
            serde_json::to_value(classify_bifurcation(&config.system, *at, window, &p.pinned, &opts)?)?
        }
        Command::Invariance { transform } => {
            let t = ConjugacyTransform::parse(transform)?;
            serde_json::to_value(invariance_for_config(&config, &t, &opts)?)?
        }
        Command::Report => {
            let report = Report::build(&config, exec)?;
            if let Some(dir) = &cli.out_dir {
                let written = report
                    .write(dir, &config)
                    .map_err(|e| anyhow!(Unwritable(dir.clone(), e)))?;
                json!({ "written": written })
            } else {
                report.value
            }
        }
    };

    let text = to_canonical_json(&out);
    if let Some(dir) = &cli.out_dir {
        let name = match &cli.command {
            Command::Report => None,
            c => Some(format!("{stem}.{}.json", command_name(c))),
        };
        if let Some(name) = name {
            write_file(dir, &name, &text)?;
        }
        for (suffix, body) in &side {
            write_file(dir, &format!("{stem}.{suffix}"), body)?;
        }
    }
    print!("{text}");
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Portrait { .. } => "portrait",
        Command::Lattice { .. } => "lattice",
        Command::Bifurcations => "bifurcations",
        Command::Sheaf => "sheaf",
        Command::Cohomology => "cohomology",
        Command::Relative { .. } => "relative",
        Command::Classify { .. } => "classify",
        Command::Invariance { .. } => "invariance",
        Command::Report => "report",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
