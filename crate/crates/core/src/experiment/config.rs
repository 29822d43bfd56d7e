//! Experiment configuration files and the frozen presets.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cases::{CaseKind, ManufacturedCase};
use crate::error::{Error, Result};
use crate::extension::ExtensionSpace;
use crate::fespace::ElementPair;
use crate::forms::FormParams;
use crate::geometry::{LevelSet, Phase};

/// What an experiment computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleId {
    Ex1a,
    Ex1b,
    Ex2,
    Ex3,
    Ex4,
    ExtensionSweep,
    ViscositySweep,
    Custom,
}

impl ExampleId {
    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Ex1a => "ex1a",
            ExampleId::Ex1b => "ex1b",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
            ExampleId::ExtensionSweep => "extension-sweep",
            ExampleId::ViscositySweep => "viscosity-sweep",
            ExampleId::Custom => "custom",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The examples with a frozen preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Ex1a,
    Ex1b,
    Ex2,
    Ex3,
    Ex4,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Ex1a, Preset::Ex1b, Preset::Ex2, Preset::Ex3, Preset::Ex4];

    pub fn example(self) -> ExampleId {
        match self {
            Preset::Ex1a => ExampleId::Ex1a,
            Preset::Ex1b => ExampleId::Ex1b,
            Preset::Ex2 => ExampleId::Ex2,
            Preset::Ex3 => ExampleId::Ex3,
            Preset::Ex4 => ExampleId::Ex4,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.example().name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.example().name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter {
                name: "preset",
                msg: format!("unknown preset {s:?} (expected ex1a, ex1b, ex2, ex3 or ex4)"),
            })
    }
}

/// Manufactured solution selected by a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseName {
    /// Rotational flow with the minus phase as the inclusion.
    RotationalMinus,
    /// Rotational flow with the plus phase as the inclusion.
    RotationalPlus,
    /// Trigonometric flow with a pressure jump and nonzero stress jump.
    PressureJump,
}

impl CaseName {
    pub fn kind(self) -> CaseKind {
        match self {
            CaseName::RotationalMinus => CaseKind::Rotational { inclusion: Phase::Minus },
            CaseName::RotationalPlus => CaseKind::Rotational { inclusion: Phase::Plus },
            CaseName::PressureJump => CaseKind::PressureJump,
        }
    }
}

/// A penalty given once for both phases or as `[minus, plus]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerPhase {
    Same(f64),
    Each([f64; 2]),
}

impl PerPhase {
    pub fn values(self) -> [f64; 2] {
        match self {
            PerPhase::Same(v) => [v, v],
            PerPhase::Each(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stabilization {
    pub gamma: f64,
    pub gamma_u: PerPhase,
    pub gamma_p: PerPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Recursive subdivision depth of cut elements.
    pub depth: usize,
    /// Gauss order on subdomain pieces; the pair's default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Gnuplot-ready whitespace-separated copy of the table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dat: Option<PathBuf>,
    /// Wall-clock seconds per level; off keeps reruns byte-identical.
    #[serde(default)]
    pub record_runtime: bool,
}

/// Settings of an extension sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionConfig {
    pub space: ExtensionSpace,
    pub trials: usize,
    pub max_offset: f64,
    pub seed: u64,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        Self {
            space: ExtensionSpace::P1,
            trials: 20,
            max_offset: 0.25,
            seed: 2024,
        }
    }
}

/// One experiment. Convergence runs use `nu` on every level; viscosity runs
/// use the first level and every pair in `viscosities`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub example: ExampleId,
    pub pair: ElementPair,
    pub case: CaseName,
    pub levels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub viscosities: Vec<[f64; 2]>,
    /// Overrides the case's interface, for custom runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_set: Option<String>,
    pub stabilization: Stabilization,
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Viscosity pairs `(10^-k, 10^k)`, `k = 1..4`.
pub fn contrast_ladder() -> Vec<[f64; 2]> {
    (1..=4).map(|k| [10f64.powi(-k), 10f64.powi(k)]).collect()
}

/// Levels of the convergence presets.
pub const CONVERGENCE_LEVELS: [usize; 6] = [8, 16, 32, 64, 128, 256];

fn stabilization(gamma: f64, gamma_u: f64, gamma_p: f64) -> Stabilization {
    Stabilization {
        gamma,
        gamma_u: PerPhase::Same(gamma_u),
        gamma_p: PerPhase::Same(gamma_p),
    }
}

/// The frozen parameter choices of each example.
pub fn preset(which: Preset, pair: ElementPair) -> ExperimentConfig {
    let mini = pair == ElementPair::Mini;
    let (case, levels, nu, viscosities, stab) = match which {
        Preset::Ex1a | Preset::Ex1b => {
            let case = if which == Preset::Ex1a {
                CaseName::RotationalMinus
            } else {
                CaseName::RotationalPlus
            };
            let (n, stab) = if mini {
                (150, stabilization(25.0, 15.0, 20.0))
            } else {
                (128, stabilization(20.0, 10.0, 15.0))
            };
            (case, vec![n], None, contrast_ladder(), stab)
        }
        Preset::Ex2 => (
            CaseName::RotationalMinus,
            CONVERGENCE_LEVELS.to_vec(),
            Some([0.5, 20.0]),
            Vec::new(),
            stabilization(20.0, 10.0, 15.0),
        ),
        Preset::Ex3 => (
            CaseName::PressureJump,
            CONVERGENCE_LEVELS.to_vec(),
            Some([0.5, 2.0]),
            Vec::new(),
            if mini {
                stabilization(30.0, 25.0, 25.0)
            } else {
                stabilization(30.0, 25.0, 20.0)
            },
        ),
        Preset::Ex4 => (
            CaseName::PressureJump,
            CONVERGENCE_LEVELS.to_vec(),
            Some([0.5, 20.0]),
            Vec::new(),
            if mini {
                stabilization(30.0, 15.0, 5.0)
            } else {
                stabilization(20.0, 10.0, 15.0)
            },
        ),
    };
    ExperimentConfig {
        example: which.example(),
        pair,
        case,
        levels,
        nu,
        viscosities,
        level_set: None,
        stabilization: stab,
        quadrature: QuadratureConfig { depth: 3, order: None },
        extension: None,
        output: OutputConfig::default(),
    }
}

/// Every preset for both pairs, in a fixed order, as TOML.
pub fn preset_table() -> String {
    let mut out = String::new();
    for which in Preset::ALL {
        for pair in ElementPair::ALL {
            let config = preset(which, pair);
            out.push_str(&format!("# {} {}\n", which.example(), pair));
            out.push_str(&config.to_toml());
            out.push('\n');
        }
    }
    out
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, path: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config {
            path: path.to_string(),
            msg: e.to_string(),
        })?;
        config.validate(path)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn is_viscosity_study(&self) -> bool {
        matches!(
            self.example,
            ExampleId::Ex1a | ExampleId::Ex1b | ExampleId::ViscositySweep
        )
    }

    /// Checks the fields each example needs.
    pub fn validate(&self, path: &str) -> Result<()> {
        let fail = |msg: String| Err(Error::Config {
            path: path.to_string(),
            msg,
        });
        if self.levels.is_empty() || self.levels.contains(&0) {
            return fail("levels must be a nonempty list of positive mesh sizes".into());
        }
        if self.quadrature.depth == 0 {
            return fail("quadrature.depth must be at least 1".into());
        }
        if self.level_set.is_some() && self.example != ExampleId::Custom {
            return fail("level_set may only be set for custom runs".into());
        }
        if let Some(spec) = &self.level_set {
            if let Err(e) = spec.parse::<LevelSet>() {
                return fail(format!("level_set: {e}"));
            }
        }
        match self.example {
            ExampleId::ExtensionSweep => {}
            _ if self.is_viscosity_study() => {
                if self.viscosities.is_empty() {
                    return fail(format!("{} needs a nonempty viscosities list", self.example));
                }
                for nu in &self.viscosities {
                    if let Err(e) = self.params(*nu).validate() {
                        return fail(e.to_string());
                    }
                }
            }
            _ => match self.nu {
                None => return fail(format!("{} needs nu = [minus, plus]", self.example)),
                Some(nu) => {
                    if let Err(e) = self.params(nu).validate() {
                        return fail(e.to_string());
                    }
                }
            },
        }
        Ok(())
    }

    pub fn params(&self, nu: [f64; 2]) -> FormParams {
        let mut p = FormParams::new(nu[0], nu[1], self.stabilization.gamma, 0.0, 0.0);
        p.gamma_u = self.stabilization.gamma_u.values();
        p.gamma_p = self.stabilization.gamma_p.values();
        p
    }

    pub fn case(&self, nu: [f64; 2]) -> ManufacturedCase {
        ManufacturedCase::new(self.case.kind(), nu[0], nu[1])
    }

    /// The interface: the override of a custom run or the case's own.
    pub fn level_set(&self) -> Result<LevelSet> {
        match &self.level_set {
            Some(spec) => spec.parse(),
            None => Ok(self.case([1.0, 1.0]).level_set()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    /// SHA-256 of [`preset_table`]. Changing any preset changes this value.
    const PRESET_CHECKSUM: &str = "9304d6037597432dd4bd10a62c0896e3bb77f2bf86d305a12186571e7484eb61";

    #[test]
    fn presets_are_frozen() {
        let digest = Sha256::digest(preset_table().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, PRESET_CHECKSUM, "preset table:\n{}", preset_table());
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for which in Preset::ALL {
            for pair in ElementPair::ALL {
                let config = preset(which, pair);
                let back = ExperimentConfig::from_toml(&config.to_toml(), "preset").unwrap();
                assert_eq!(back, config);
            }
        }
    }

    #[test]
    fn example_3_mini_parameters() {
        let c = preset(Preset::Ex3, ElementPair::Mini);
        let p = c.params(c.nu.unwrap());
        assert_eq!(p.nu, [0.5, 2.0]);
        assert_eq!((p.gamma, p.gamma_u, p.gamma_p), (30.0, [25.0; 2], [25.0; 2]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut text = preset(Preset::Ex2, ElementPair::P2P0).to_toml();
        text.push_str("\n[extra]\nfoo = 1\n");
        let err = ExperimentConfig::from_toml(&text, "bad.toml").unwrap_err();
        assert!(matches!(err, Error::Config { .. }), "{err}");
        let text = "example = \"ex2\"\npair = \"mini\"\ncase = \"pressure-jump\"\nlevels = [8]\nnu = [1.0, 1.0]\nspeed = 3\n";
        let err = ExperimentConfig::from_toml(text, "bad.toml").unwrap_err().to_string();
        assert!(err.contains("speed"), "{err}");
    }

    #[test]
    fn missing_fields_are_reported() {
        let mut c = preset(Preset::Ex2, ElementPair::P2P0);
        c.nu = None;
        assert!(c.validate("x").is_err());
        let mut c = preset(Preset::Ex1a, ElementPair::P2P0);
        c.viscosities.clear();
        assert!(c.validate("x").is_err());
        let mut c = preset(Preset::Ex2, ElementPair::P2P0);
        c.level_set = Some("circle{0,0,0.5}".into());
        assert!(c.validate("x").is_err());
        c.example = ExampleId::Custom;
        assert!(c.validate("x").is_ok());
        c.level_set = Some("ellipse{1}".into());
        assert!(c.validate("x").is_err());
    }

    #[test]
    fn per_phase_penalties() {
        let text = "example = \"custom\"\npair = \"p2p0\"\ncase = \"pressure-jump\"\nlevels = [8]\nnu = [1.0, 2.0]\n\
                    [stabilization]\ngamma = 20.0\ngamma_u = [5.0, 10.0]\ngamma_p = 15.0\n[quadrature]\ndepth = 2\n";
        let c = ExperimentConfig::from_toml(text, "c.toml").unwrap();
        let p = c.params([1.0, 2.0]);
        assert_eq!(p.gamma_u, [5.0, 10.0]);
        assert_eq!(p.gamma_p, [15.0, 15.0]);
        assert_eq!(c.output, OutputConfig::default());
    }

    #[test]
    fn preset_names_parse() {
        for which in Preset::ALL {
            assert_eq!(which.example().name().parse::<Preset>().unwrap(), which);
        }
        assert!("ex5".parse::<Preset>().is_err());
    }
}
