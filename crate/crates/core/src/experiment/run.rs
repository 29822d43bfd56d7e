//! Running a configured experiment.

use std::time::Instant;

use crate::cases::validate_case;
use crate::diagnostics::{viscosity_sweep, SolveContracts, ViscosityRow, ViscosityStudy};
use crate::error::{Error, Result};
use crate::extension::{extension_sweep, ExtensionReport, SweepConfig};
use crate::mesh::build_uniform_diagonal_mesh;
use crate::norms::{compute_errors, ErrorReport};
use crate::problem::Problem;

use super::config::{ExampleId, ExperimentConfig};

/// Sample count and seed of the manufactured-data check run before assembly.
pub const VALIDATION_SAMPLES: usize = 200;
pub const VALIDATION_SEED: u64 = 17;

/// Errors and solver data of one mesh level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelResult {
    pub n: usize,
    pub errors: ErrorReport,
    pub contracts: SolveContracts,
    pub krylov_iterations: usize,
    pub runtime_s: f64,
}

/// Which error quantities a convergence table reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantities {
    /// `e_u` and `e_p`.
    Energy,
    /// Also the divergence and maximum-norm errors.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRun {
    pub quantities: Quantities,
    pub levels: Vec<LevelResult>,
    /// Whether `runtime_s` is written.
    pub record_runtime: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Convergence(ConvergenceRun),
    Viscosity(Vec<ViscosityRow>),
    Extension(ExtensionReport),
}

impl RunOutput {
    /// Every solve contract of the run; empty for extension sweeps.
    pub fn contracts(&self) -> Vec<SolveContracts> {
        match self {
            RunOutput::Convergence(run) => run.levels.iter().map(|l| l.contracts).collect(),
            RunOutput::Viscosity(rows) => rows.iter().map(|r| r.contracts).collect(),
            RunOutput::Extension(_) => Vec::new(),
        }
    }
}

/// Runs the experiment described by `config`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate("<config>")?;
    match config.example {
        ExampleId::ExtensionSweep => {
            let ext = config.extension.unwrap_or_default();
            let report = extension_sweep(&SweepConfig {
                space: ext.space,
                levels: config.levels.clone(),
                trials: ext.trials,
                max_offset: ext.max_offset,
                seed: ext.seed,
                depth: config.quadrature.depth,
            })?;
            Ok(RunOutput::Extension(report))
        }
        _ if config.is_viscosity_study() => {
            for nu in &config.viscosities {
                validate_case(&config.case(*nu), VALIDATION_SAMPLES, VALIDATION_SEED)?;
            }
            let study = ViscosityStudy {
                kind: config.case.kind(),
                pair: config.pair,
                n: config.levels[0],
                params: config.params([1.0, 1.0]),
                depth: config.quadrature.depth,
                order: config.quadrature.order,
            };
            let pairs: Vec<(f64, f64)> = config.viscosities.iter().map(|v| (v[0], v[1])).collect();
            Ok(RunOutput::Viscosity(viscosity_sweep(&study, &pairs)?))
        }
        _ => run_convergence(config).map(RunOutput::Convergence),
    }
}

fn run_convergence(config: &ExperimentConfig) -> Result<ConvergenceRun> {
    let nu = config.nu.ok_or_else(|| Error::Config {
        path: "<config>".into(),
        msg: format!("{} needs nu", config.example),
    })?;
    let case = config.case(nu);
    if config.level_set.is_none() {
        validate_case(&case, VALIDATION_SAMPLES, VALIDATION_SEED)?;
    }
    let level_set = config.level_set()?;
    let params = config.params(nu);
    let quantities = match config.example {
        ExampleId::Ex4 | ExampleId::Custom => Quantities::All,
        _ => Quantities::Energy,
    };
    let mut levels = Vec::with_capacity(config.levels.len());
    for &n in &config.levels {
        let start = Instant::now();
        let level = (|| {
            let mesh = build_uniform_diagonal_mesh(case.domain(), n)?;
            let problem = Problem::new(mesh, level_set.clone(), config.pair, config.quadrature.depth, config.quadrature.order)?;
            let solved = problem.solve(&params, &case)?;
            let errors = compute_errors(&problem, &solved.velocity, &solved.pressure, Some(&case), params.nu)?;
            Ok::<_, Error>((errors, SolveContracts::of(&solved), solved.solution.stats.krylov_iterations))
        })()
        .map_err(|e| Error::Level { n, source: Box::new(e) })?;
        levels.push(LevelResult {
            n,
            errors: level.0,
            contracts: level.1,
            krylov_iterations: level.2,
            runtime_s: start.elapsed().as_secs_f64(),
        });
    }
    Ok(ConvergenceRun {
        quantities,
        levels,
        record_runtime: config.output.record_runtime,
    })
}
