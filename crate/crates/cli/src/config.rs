//! Run configuration: a JSON document with every field optional. Command-line
//! flags are applied on top of whatever the file provides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ptcycle_core::numerics::{Plane, Window};
use ptcycle_core::reproduce::PaperConstants;
use ptcycle_core::{ModelParams, NumericsConfig, TimeDependence};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKindArg {
    Tlambda,
    Carnot,
    CarnotSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlaneArg {
    LambdaT,
    NuT,
    TimeT,
}

impl From<PlaneArg> for Plane {
    fn from(p: PlaneArg) -> Plane {
        match p {
            PlaneArg::LambdaT => Plane::LambdaT,
            PlaneArg::NuT => Plane::NuT,
            PlaneArg::TimeT => Plane::TimeT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Vary {
    Nu,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    #[serde(rename = "N")]
    pub n: u32,
    pub nu: f64,
    pub lambda: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { n: 160, nu: 12.0, lambda: -24.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub precision: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { format: Format::Csv, path: None, precision: 9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub tmin: f64,
    pub tmax: f64,
    pub steps: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { tmin: 0.5, tmax: 10.0, steps: 100 }
    }
}

/// Corner data for `cycle`. Windows left unset are derived from the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleSection {
    pub kind: CycleKindArg,
    pub t_cold: f64,
    pub t_hot: f64,
    pub lambda1_window: Option<(f64, f64)>,
    pub lambda2_window: Option<(f64, f64)>,
    pub s2: Option<f64>,
    pub s_low: f64,
    pub s_high: f64,
    pub lambda_window: Option<(f64, f64)>,
    pub trace_steps: usize,
}

impl Default for CycleSection {
    fn default() -> Self {
        CycleSection {
            kind: CycleKindArg::Tlambda,
            t_cold: 5.53240,
            t_hot: 5.91528,
            lambda1_window: None,
            lambda2_window: None,
            s2: Some(3.16977),
            s_low: 4.7726,
            s_high: 6.0,
            lambda_window: None,
            trace_steps: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourSection {
    pub plane: PlaneArg,
    pub level: f64,
    /// Defaults: `T ∈ [tmin, tmax]`; t over one period of μ, λ over
    /// `[−80, ν²/N]`, ν over `[max(√(Nλ), 0) + 0.1, 3ν]`.
    pub window: Option<Window>,
    /// `(cells along the scanned variable, scanlines in T)`.
    pub resolution: (usize, usize),
}

impl Default for ContourSection {
    fn default() -> Self {
        ContourSection { plane: PlaneArg::TimeT, level: -2.51338, window: None, resolution: (2000, 200) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseSection {
    #[serde(rename = "T")]
    pub t: f64,
    pub branch: u32,
}

impl Default for PhaseSection {
    fn default() -> Self {
        PhaseSection { t: 5.0, branch: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsentropeSection {
    pub vary: Vary,
    /// Entropy level; defaults to `S` at `(tmin, model)`.
    pub level: Option<f64>,
    pub lambda_window: Option<(f64, f64)>,
}

impl Default for IsentropeSection {
    fn default() -> Self {
        IsentropeSection { vary: Vary::Nu, level: None, lambda_window: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub time: Option<TimeDependence>,
    pub numerics: NumericsConfig,
    pub output: OutputSection,
    pub sweep: SweepSection,
    pub cycle: CycleSection,
    pub contour: ContourSection,
    pub phase: PhaseSection,
    pub isentrope: IsentropeSection,
    /// Reference values for `verify`; overriding one makes verification fail.
    pub verify: Option<PaperConstants>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.model.n, self.model.nu, self.model.lambda)?)
    }

    pub fn time_dependence(&self) -> Result<TimeDependence, CliError> {
        self.time
            .ok_or_else(|| CliError::Config("this command needs c1 (--c1 or time.c1)".into()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(6..=17).contains(&self.output.precision) {
            return Err(CliError::Config(format!("precision must be in [6, 17], got {}", self.output.precision)));
        }
        self.numerics.validate()?;
        self.model()?;
        let s = &self.sweep;
        if !(s.tmin > 0.0 && s.tmax >= s.tmin && s.tmax.is_finite()) {
            return Err(CliError::Config(format!("need 0 < tmin <= tmax, got [{}, {}]", s.tmin, s.tmax)));
        }
        if s.steps == 0 {
            return Err(CliError::Config("steps must be at least 1".into()));
        }
        if let Some(td) = self.time {
            if td.c1 == 0.0 || !td.c1.is_finite() || !td.c2.is_finite() {
                return Err(CliError::Config("c1 must be finite and non-zero".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn partial_sections() {
        let c: RunConfig =
            serde_json::from_str(r#"{"model":{"nu":25},"output":{"precision":12},"time":{"c1":6}}"#).unwrap();
        assert_eq!(c.model.nu, 25.0);
        assert_eq!(c.model.n, 160);
        assert_eq!(c.output.precision, 12);
        assert_eq!(c.time.unwrap().c2, 0.0);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_precision() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"modle":{}}"#).is_err());
        let mut c = RunConfig::default();
        c.output.precision = 5;
        assert!(c.validate().is_err());
    }
}
