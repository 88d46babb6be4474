use clap::{Args, Parser, Subcommand};
use cp2bands::config::RunConfig;
use cp2bands::run;
use std::path::PathBuf;
use std::process::ExitCode;

/// Band topology of the semi-quantum vibronic model on CP^2.
#[derive(Parser)]
#[command(name = "cp2bands", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config file; flags override its keys one for one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Polyad quantum number.
    #[arg(long)]
    n: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep lambda and write spectrum.csv + bands.json.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Number of lambda grid points.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Check index-formula level counts against diagonalization (verify.json).
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Measure the Chern invariants of a band subset (chern.json).
    Chern {
        #[command(flatten)]
        common: Common,
        /// Coupling strength lambda.
        #[arg(long)]
        lambda: f64,
        /// Band subset, comma separated (1 = lowest), e.g. "1,2".
        #[arg(long, value_delimiter = ',')]
        bands: Vec<usize>,
    },
    /// Locate the degeneracy lambda-window of a band pair (degeneracy.json).
    Degeneracy {
        #[command(flatten)]
        common: Common,
        /// Band pair, e.g. "2,3".
        #[arg(long, value_delimiter = ',')]
        pair: Vec<usize>,
    },
    /// Branching table of both bands for one polyad (symmetry.json).
    Symmetry {
        #[command(flatten)]
        common: Common,
    },
}

fn load_config(common: &Common) -> Result<RunConfig, run::RunError> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = common.n {
        config.n = n;
    }
    if let Some(out) = &common.out {
        config.out = out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<bool, run::RunError> {
    match cli.command {
        Command::Spectrum { common, steps } => {
            let mut config = load_config(&common)?;
            if let Some(steps) = steps {
                config.lambda_steps = steps;
            }
            let report = run::cmd_spectrum(&config)?;
            println!(
                "spectrum: N={} levels={} lambdas={} -> {}",
                report.n,
                report.levels_per_lambda,
                report.bands.len(),
                config.out.display()
            );
            Ok(true)
        }
        Command::Verify { common } => {
            let config = load_config(&common)?;
            let report = run::cmd_verify(&config)?;
            for section in &report.sections {
                for record in &section.records {
                    println!(
                        "verify: lambda={} band={} predicted={:?} observed={:?} match={}",
                        section.lambda,
                        record.band,
                        record.predicted,
                        record.observed,
                        record.matches
                    );
                }
            }
            Ok(report.all_match)
        }
        Command::Chern {
            common,
            lambda,
            bands,
        } => {
            let config = load_config(&common)?;
            let report = run::cmd_chern(&config, lambda, &bands)?;
            println!(
                "chern: lambda={} bands={:?} -> (r={}, A={}, B={}) residuals ({:.2e}, {:.2e})",
                lambda,
                report.bands,
                report.r,
                report.a,
                report.b,
                report.residuals.first_chern,
                report.residuals.second_chern
            );
            Ok(true)
        }
        Command::Degeneracy { common, pair } => {
            let config = load_config(&common)?;
            let low = match pair.as_slice() {
                [k] => *k,
                [k, l] if *l == *k + 1 => *k,
                _ => {
                    eprintln!("--pair must be 1,2 or 2,3");
                    return Ok(false);
                }
            };
            let report = run::cmd_degeneracy(&config, low)?;
            println!(
                "degeneracy: pair=({},{}) windows={:?}",
                report.pair.0, report.pair.1, report.windows
            );
            Ok(true)
        }
        Command::Symmetry { common } => {
            let config = load_config(&common)?;
            let report = run::cmd_symmetry(&config, config.n)?;
            for band in &report.bands {
                let td: Vec<String> = band
                    .td
                    .iter()
                    .map(|(ir, c)| {
                        if *c == 1 {
                            ir.clone()
                        } else {
                            format!("{c}{ir}")
                        }
                    })
                    .collect();
                println!(
                    "symmetry: N={} {} dim={} td=[{}] o3=[{}]",
                    report.n,
                    band.band,
                    band.dimension,
                    td.join(","),
                    band.o3.join(",")
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{{\"error\":{{\"code\":\"{}\",\"message\":\"{}\"}}}}", e.code(), e);
            ExitCode::FAILURE
        }
    }
}
