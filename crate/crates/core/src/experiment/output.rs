//! CSV tables, gnuplot data files and console summaries of a run.

use std::fmt::Write as _;
use std::io::Write;

use crate::diagnostics::write_viscosity_csv;
use crate::error::Result;
use crate::extension::EXTENSION_NOTE;
use crate::norms::convergence_rates;

use super::run::{ConvergenceRun, Quantities, RunOutput};

/// Column order of convergence tables.
pub const CONVERGENCE_COLUMNS: [&str; 13] = [
    "dofs", "h", "e_u", "r_u", "e_p", "r_p", "e_div", "r_div", "e_inf_u", "r_inf_u", "e_inf_p", "r_inf_p", "runtime_s",
];

impl ConvergenceRun {
    /// One error sequence with its rates, or `None` when not reported.
    fn series(&self, quantity: &str) -> Option<(Vec<f64>, Vec<Option<f64>>)> {
        let values: Vec<f64> = self
            .levels
            .iter()
            .map(|l| match quantity {
                "e_u" => l.errors.e_u,
                "e_p" => l.errors.e_p,
                "e_div" => l.errors.e_div,
                "e_inf_u" => l.errors.e_inf_u,
                "e_inf_p" => l.errors.e_inf_p,
                other => unreachable!("quantity {other}"),
            })
            .collect();
        if self.quantities == Quantities::Energy && !matches!(quantity, "e_u" | "e_p") {
            return None;
        }
        let hs: Vec<f64> = self.levels.iter().map(|l| l.errors.h).collect();
        let rates = if values.len() < 2 {
            vec![None; values.len()]
        } else {
            convergence_rates(&values, &hs).unwrap_or_else(|_| vec![None; values.len()])
        };
        Some((values, rates))
    }

    /// Rates of `quantity` (`e_u`, `e_p`, `e_div`, `e_inf_u`, `e_inf_p`);
    /// the first level has none.
    pub fn rates(&self, quantity: &str) -> Vec<Option<f64>> {
        self.series(quantity).map(|(_, r)| r).unwrap_or_default()
    }

    /// Table cells as strings; absent entries are empty.
    pub fn cells(&self) -> Vec<Vec<String>> {
        let series: Vec<Option<(Vec<f64>, Vec<Option<f64>>)>> =
            ["e_u", "e_p", "e_div", "e_inf_u", "e_inf_p"].iter().map(|q| self.series(q)).collect();
        self.levels
            .iter()
            .enumerate()
            .map(|(i, level)| {
                let mut row = vec![level.errors.dofs.to_string(), format!("{:.6e}", level.errors.h)];
                for s in &series {
                    match s {
                        Some((values, rates)) => {
                            row.push(format!("{:.6e}", values[i]));
                            row.push(rates[i].map(|r| format!("{r:.3}")).unwrap_or_default());
                        }
                        None => row.extend([String::new(), String::new()]),
                    }
                }
                row.push(if self.record_runtime {
                    format!("{:.3}", level.runtime_s)
                } else {
                    String::new()
                });
                row
            })
            .collect()
    }
}

impl RunOutput {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        match self {
            RunOutput::Convergence(run) => {
                let mut csv = csv::Writer::from_writer(writer);
                csv.write_record(CONVERGENCE_COLUMNS)?;
                for row in run.cells() {
                    csv.write_record(&row)?;
                }
                csv.flush()?;
            }
            RunOutput::Viscosity(rows) => write_viscosity_csv(rows, writer)?,
            RunOutput::Extension(report) => report.write_csv(writer)?,
        }
        Ok(())
    }

    /// Whitespace-separated table with a `#` header; missing values are
    /// `NaN`, which gnuplot skips.
    pub fn write_dat<W: Write>(&self, mut writer: W) -> Result<()> {
        let (header, rows): (Vec<String>, Vec<Vec<String>>) = match self {
            RunOutput::Convergence(run) => (
                CONVERGENCE_COLUMNS.iter().map(|s| s.to_string()).collect(),
                run.cells(),
            ),
            RunOutput::Viscosity(rows) => (
                ["nu_minus", "nu_plus", "dofs", "e_u", "e_p"].map(String::from).to_vec(),
                rows.iter()
                    .map(|r| {
                        vec![
                            format!("{:e}", r.nu_minus),
                            format!("{:e}", r.nu_plus),
                            r.dofs.to_string(),
                            format!("{:e}", r.e_u),
                            format!("{:e}", r.e_p),
                        ]
                    })
                    .collect(),
            ),
            RunOutput::Extension(report) => {
                writeln!(writer, "# {EXTENSION_NOTE}")?;
                (
                    ["level", "offset_x", "offset_y", "ratio"].map(String::from).to_vec(),
                    report
                        .trials
                        .iter()
                        .map(|t| {
                            vec![
                                t.level.to_string(),
                                format!("{:e}", t.offset_x),
                                format!("{:e}", t.offset_y),
                                format!("{:e}", t.ratio),
                            ]
                        })
                        .collect(),
                )
            }
        };
        writeln!(writer, "# {}", header.join(" "))?;
        for row in rows {
            let cells: Vec<&str> = row.iter().map(|c| if c.is_empty() { "NaN" } else { c.as_str() }).collect();
            writeln!(writer, "{}", cells.join(" "))?;
        }
        Ok(())
    }

    /// Human-readable summary for the console.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        match self {
            RunOutput::Convergence(run) => {
                let _ = writeln!(out, "{:>9} {:>10} {:>11} {:>6} {:>11} {:>6}", "dofs", "h", "e(u)", "r(u)", "e(p)", "r(p)");
                let ru = run.rates("e_u");
                let rp = run.rates("e_p");
                let rate = |r: Option<f64>| r.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
                for (i, l) in run.levels.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:>9} {:>10.4e} {:>11.4e} {:>6} {:>11.4e} {:>6}",
                        l.errors.dofs,
                        l.errors.h,
                        l.errors.e_u,
                        rate(ru[i]),
                        l.errors.e_p,
                        rate(rp[i])
                    );
                }
            }
            RunOutput::Viscosity(rows) => {
                let _ = writeln!(out, "{:>9} {:>9} {:>9} {:>12} {:>12}", "nu-", "nu+", "dofs", "e(u)", "e(p)");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{:>9.0e} {:>9.0e} {:>9} {:>12.5e} {:>12.5e}",
                        r.nu_minus, r.nu_plus, r.dofs, r.e_u, r.e_p
                    );
                }
            }
            RunOutput::Extension(report) => {
                let _ = writeln!(out, "{EXTENSION_NOTE}");
                let _ = writeln!(out, "space {}, {} redrawn offsets", report.space, report.rejected_offsets);
                for (level, max) in report.max_ratios() {
                    let _ = writeln!(out, "n = {level:>4}: max ratio {max:.5}");
                }
                for q in report.level_quotients() {
                    let _ = writeln!(out, "level quotient {q:.4}");
                }
            }
        }
        out
    }
}
