//! Command-line front end: curvature, symmetry, conservation-law and
//! numerical checks with text and JSON reports.
//!
//! Exit codes: 0 when every required check passes, 1 when one fails, 2 on a
//! usage or configuration error.

mod curvature;
mod report;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use kgsphere::equation::FSpec;
use kgsphere::geom::ChartMetric;
use kgsphere::noether::{
    canonical_currents, generated_currents, reference_current, reference_generators, CurrentExport,
};
use kgsphere::numerics::RunConfig;
use kgsphere::symcore::{seeded_rng, DEFAULT_SEED};

use report::RunReport;

#[derive(Parser)]
#[command(
    name = "kgsphere",
    version,
    about = "Verify symmetries and conservation laws of u_tt = Δu + f(u) on S^2 x R"
)]
struct Cli {
    /// Source term: arbitrary, zero, linear[:C], constant[:K] or an expression in u.
    #[arg(long = "f", global = true, default_value = "arbitrary")]
    f: String,
    /// Seed for the randomized zero probes.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the report as JSON to this path (`-` for stdout instead of text).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Christoffel symbols, Ricci tensor, scalar and sectional curvature.
    Curvature {
        #[arg(long, conflicts_with = "metric")]
        preset: Option<String>,
        /// TOML metric file.
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Symbolic checks of the bundled generators and currents.
    Verify {
        #[arg(value_enum, default_value = "all")]
        what: What,
        #[arg(long, value_enum, default_value = "generated")]
        source: Source,
    },
    /// Finite-difference run from a TOML config or a preset.
    Simulate {
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Write the monitor time series as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print conserved currents as JSON with infix and LaTeX forms.
    ExportCurrents {
        #[arg(long, value_enum, default_value = "generated")]
        source: ExportSource,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum What {
    All,
    Killing,
    Symmetry,
    Noether,
    Currents,
    Algebra,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Generated,
    Reference,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportSource {
    Generated,
    Canonical,
    Reference,
}

fn spec(cli: &Cli) -> anyhow::Result<FSpec> {
    cli.f.parse().with_context(|| format!("--f {}", cli.f))
}

fn execute(cli: &Cli) -> anyhow::Result<Option<RunReport>> {
    let mut rng = seeded_rng(cli.seed);
    let seed = cli.seed.to_string();
    match &cli.command {
        Command::Curvature { preset, metric } => {
            let mut r = RunReport::new("curvature", cli.timings);
            let (m, s2xr) = match (preset, metric) {
                (_, Some(path)) => {
                    r.input("metric", path.display());
                    (ChartMetric::from_file(path)?, false)
                }
                (p, None) => {
                    let name = p.as_deref().unwrap_or("s2xr");
                    r.input("preset", name);
                    (ChartMetric::preset(name)?, name == "s2xr")
                }
            };
            curvature::run(&mut r, &m, s2xr)?;
            Ok(Some(r))
        }
        Command::Verify { what, source } => {
            let spec = spec(cli)?;
            let name = format!(
                "verify {}",
                what.to_possible_value().expect("named").get_name()
            );
            let mut r = RunReport::new(&name, cli.timings);
            r.input("f", &spec);
            r.input("seed", &seed);
            let all = *what == What::All;
            if all || *what == What::Killing {
                verify::killing(&mut r, &mut rng)?;
            }
            if all || *what == What::Symmetry {
                verify::symmetry(&mut r, &spec, &mut rng);
            }
            if all || *what == What::Noether {
                verify::noether(&mut r, &spec, &mut rng)?;
            }
            if all || *what == What::Currents {
                let s = match source {
                    Source::Generated => "generated",
                    Source::Reference => "reference",
                };
                r.input("source", s);
                verify::currents(&mut r, &spec, s, &mut rng)?;
            }
            if all || *what == What::Algebra {
                verify::algebra(&mut r);
            }
            Ok(Some(r))
        }
        Command::Simulate {
            config,
            preset,
            csv,
        } => {
            let mut r = RunReport::new("simulate", cli.timings);
            let cfg = match (config, preset) {
                (Some(path), _) => {
                    r.input("config", path.display());
                    let text = std::fs::read_to_string(path)
                        .with_context(|| path.display().to_string())?;
                    RunConfig::from_toml_str(&text)?
                }
                (None, Some(p)) => {
                    r.input("preset", p);
                    RunConfig::preset(p).with_context(|| {
                        format!(
                            "unknown preset `{p}`; available: {}",
                            kgsphere::numerics::PRESETS.join(", ")
                        )
                    })?
                }
                (None, None) => anyhow::bail!("give a config file or --preset"),
            };
            r.data("config", &cfg);
            simulate::simulate(&mut r, &cfg, csv.as_deref())?;
            Ok(Some(r))
        }
        Command::ExportCurrents { source } => {
            let spec = spec(cli)?;
            let currents = match source {
                ExportSource::Generated => generated_currents(&spec, &mut rng)?,
                ExportSource::Canonical => canonical_currents(&spec)?,
                ExportSource::Reference => reference_generators()
                    .filter_map(reference_current)
                    .collect(),
            };
            let out: Vec<CurrentExport> = currents.iter().map(CurrentExport::from).collect();
            let text = serde_json::to_string_pretty(&out)? + "\n";
            match &cli.json {
                Some(p) if p.as_os_str() != "-" => std::fs::write(p, text)?,
                _ => print!("{text}"),
            }
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = match execute(&cli) {
        Ok(Some(r)) => r,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    report.finish();
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            print!("{}", report.to_text());
            if let Err(e) = std::fs::write(p, report.to_json()) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_text()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
