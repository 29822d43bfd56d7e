//! Command-line interface of the `cutstokes` binary.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::diagnostics::infsup_estimate;
use crate::error::{Error, Result};
use crate::experiment::{
    contrast_ladder, preset, run, write_outputs, CaseName, ExampleId, ExperimentConfig, ExtensionConfig, OutputConfig,
    Preset, QuadratureConfig,
};
use crate::extension::ExtensionSpace;
use crate::fespace::ElementPair;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CUTSTOKES_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cutstokes", version, about = "Unfitted finite elements for two-phase Stokes flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a configured experiment or a preset.
    Run(RunArgs),
    /// Errors of a manufactured case for a ladder of viscosity contrasts.
    ViscositySweep(ViscosityArgs),
    /// Boundedness ratios of the discrete extension operator.
    ExtensionSweep(ExtensionArgs),
    /// Discrete inf-sup constant of a pair on meshes without interface.
    Infsup(InfsupArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// CSV output file; the table goes to stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Gnuplot-ready copy of the table.
    #[arg(long)]
    pub dat: Option<PathBuf>,
    /// Record wall-clock seconds per level.
    #[arg(long)]
    pub runtime: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML experiment file.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// One of ex1a, ex1b, ex2, ex3, ex4.
    #[arg(long, requires = "pair")]
    pub preset: Option<Preset>,
    /// Element pair of the preset: mini or p2p0.
    #[arg(long)]
    pub pair: Option<ElementPair>,
    /// Comma-separated mesh sizes replacing the preset's levels.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ViscosityArgs {
    #[arg(long, default_value = "p2p0")]
    pub pair: ElementPair,
    /// rotational-minus or rotational-plus.
    #[arg(long, default_value = "rotational-minus", value_parser = parse_case)]
    pub case: CaseName,
    /// Mesh size of the shared discretization.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtensionArgs {
    /// p1, mini or p2.
    #[arg(long, default_value = "p1")]
    pub space: ExtensionSpace,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InfsupArgs {
    #[arg(long, default_value = "mini")]
    pub pair: ElementPair,
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    pub levels: Vec<usize>,
}

fn parse_case(s: &str) -> std::result::Result<CaseName, String> {
    match s {
        "rotational-minus" => Ok(CaseName::RotationalMinus),
        "rotational-plus" => Ok(CaseName::RotationalPlus),
        "pressure-jump" => Ok(CaseName::PressureJump),
        other => Err(format!("unknown case {other:?}")),
    }
}

/// Builds the global thread pool, honouring [`THREADS_ENV`].
pub fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| Error::InvalidParameter {
        name: "CUTSTOKES_THREADS",
        msg: format!("expected a positive integer, got {value:?}"),
    })?;
    if threads == 0 {
        return Err(Error::InvalidParameter {
            name: "CUTSTOKES_THREADS",
            msg: "must be at least 1".into(),
        });
    }
    // A pool that already exists (for instance in tests) is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Executes a parsed command, writing tables and summaries to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let mut config = match (&args.config, args.preset) {
                (Some(path), _) => ExperimentConfig::load(path)?,
                (None, Some(which)) => preset(which, args.pair.expect("clap requires --pair")),
                (None, None) => {
                    return Err(Error::InvalidParameter {
                        name: "run",
                        msg: "either --config or --preset is required".into(),
                    })
                }
            };
            if let Some(levels) = args.levels {
                config.levels = levels;
            }
            apply_output(&mut config.output, &args.output);
            finish(&config, out)
        }
        Command::ViscositySweep(args) => {
            let mut config = preset(Preset::Ex1a, args.pair);
            config.example = ExampleId::ViscositySweep;
            config.case = args.case;
            config.levels = vec![args.n];
            config.viscosities = contrast_ladder();
            apply_output(&mut config.output, &args.output);
            finish(&config, out)
        }
        Command::ExtensionSweep(args) => {
            let mut config = preset(Preset::Ex1a, ElementPair::Mini);
            config.example = ExampleId::ExtensionSweep;
            config.levels = args.levels;
            config.quadrature = QuadratureConfig { depth: 4, order: None };
            config.extension = Some(ExtensionConfig {
                space: args.space,
                trials: args.trials,
                seed: args.seed,
                ..ExtensionConfig::default()
            });
            apply_output(&mut config.output, &args.output);
            finish(&config, out)
        }
        Command::Infsup(args) => {
            writeln!(out, "{:>5} {:>10} {:>6}", "n", "xi", "zeros")?;
            for n in args.levels {
                let e = infsup_estimate(n, args.pair)?;
                writeln!(out, "{:>5} {:>10.6} {:>6}", e.n, e.xi, e.zero_modes)?;
            }
            Ok(())
        }
    }
}

fn apply_output(config: &mut OutputConfig, args: &OutputArgs) {
    if args.csv.is_some() {
        config.csv = args.csv.clone();
    }
    if args.dat.is_some() {
        config.dat = args.dat.clone();
    }
    config.record_runtime |= args.runtime;
}

fn finish(config: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let output = run(config)?;
    // Without a CSV file the table itself goes to stdout, so the summary
    // moves to stderr to keep stdout machine-readable.
    if config.output.csv.is_none() {
        eprint!("{}", output.summary());
        output.write_csv(&mut *out)?;
    } else {
        write!(out, "{}", output.summary())?;
    }
    write_outputs(config, &output)
}

/// Entry point of the binary.
pub fn main() -> Result<()> {
    init_threads()?;
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    execute(cli, &mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidParameter {
            name: "args",
            msg: e.to_string(),
        })?;
        let mut out = Vec::new();
        execute(cli, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn preset_run_prints_a_table() {
        let text = exec(&["cutstokes", "run", "--preset", "ex2", "--pair", "mini", "--levels", "8,16"]).unwrap();
        assert!(text.contains("dofs,h,e_u,r_u"));
    }

    #[test]
    fn preset_needs_a_pair() {
        assert!(exec(&["cutstokes", "run", "--preset", "ex2"]).is_err());
        assert!(exec(&["cutstokes", "run"]).is_err());
    }

    #[test]
    fn config_file_with_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = preset(Preset::Ex3, ElementPair::P2P0);
        config.levels = vec![8];
        let path = dir.path().join("ex3.toml");
        std::fs::write(&path, config.to_toml()).unwrap();
        let csv = dir.path().join("out.csv");
        let dat = dir.path().join("out.dat");
        exec(&[
            "cutstokes",
            "run",
            "--config",
            path.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
            "--dat",
            dat.to_str().unwrap(),
        ])
        .unwrap();
        assert!(std::fs::read_to_string(csv).unwrap().starts_with("dofs,"));
        assert!(std::fs::read_to_string(dat).unwrap().starts_with("# dofs"));
    }

    #[test]
    fn infsup_and_extension_commands() {
        let text = exec(&["cutstokes", "infsup", "--pair", "p2p0", "--levels", "4"]).unwrap();
        assert_eq!(text.lines().count(), 2);
        let text = exec(&["cutstokes", "extension-sweep", "--levels", "8,16", "--trials", "2"]).unwrap();
        assert!(text.contains("level,offset_x,offset_y,ratio"));
    }

    #[test]
    fn viscosity_command() {
        let text = exec(&["cutstokes", "viscosity-sweep", "--pair", "mini", "--n", "8"]).unwrap();
        assert!(text.contains("nu_minus,nu_plus"));
    }
}
