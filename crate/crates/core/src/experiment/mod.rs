//! Experiment drivers: configuration, presets, execution and tabular output.

mod config;
mod output;
mod run;

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

pub use config::{
    contrast_ladder, preset, preset_table, CaseName, ExampleId, ExperimentConfig, ExtensionConfig, OutputConfig,
    PerPhase, Preset, QuadratureConfig, Stabilization, CONVERGENCE_LEVELS,
};
pub use output::CONVERGENCE_COLUMNS;
pub use run::{run, ConvergenceRun, LevelResult, Quantities, RunOutput, VALIDATION_SAMPLES, VALIDATION_SEED};

use crate::error::Result;

/// Writes the CSV and `.dat` files requested by the config's output section.
pub fn write_outputs(config: &ExperimentConfig, output: &RunOutput) -> Result<()> {
    if let Some(path) = &config.output.csv {
        output.write_csv(create(path)?)?;
    }
    if let Some(path) = &config.output.dat {
        output.write_dat(create(path)?)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}
