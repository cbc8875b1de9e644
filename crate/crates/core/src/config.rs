//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "coin": { "xi": 0, "theta": 45, "zeta": 0, "unit": "degrees" },
//!   "steps": 40,
//!   "walker": { "ensemble": { "M": 40, "profile": "SF" } },
//!   "noise": { "kind": "PhaseFlip", "p": 0.02 },
//!   "outputs": ["profile", "moments", "uniformity"],
//!   "analysis": { "uniformity_window": [-20, 20] },
//!   "emit": { "csv_path": "sf.csv", "json_path": "sf.json" }
//! }
//! ```
//!
//! Only `steps` is required. A parsed config has every default filled in and
//! its angles converted to radians, so serializing it gives a complete,
//! re-parseable record of the run.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::coin::CoinParams;
use crate::distribution::SiteInterval;
use crate::ensemble::{EnsembleSpec, InitialProfile};
use crate::error::{Result, WalkError};
use crate::noise::{NoiseKind, NoiseModel, NoiseOrder};

pub const DEFAULT_SUPPORT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleUnit {
    Radians,
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinSpec {
    #[serde(default)]
    pub xi: f64,
    #[serde(default = "default_theta_placeholder")]
    pub theta: f64,
    #[serde(default)]
    pub zeta: f64,
    pub unit: AngleUnit,
}

// NaN marks "not given"; resolved to π/4 in whichever unit was chosen
fn default_theta_placeholder() -> f64 {
    f64::NAN
}

impl Default for CoinSpec {
    fn default() -> Self {
        let h = CoinParams::hadamard();
        CoinSpec {
            xi: h.xi(),
            theta: h.theta(),
            zeta: h.zeta(),
            unit: AngleUnit::Radians,
        }
    }
}

impl CoinSpec {
    pub fn params(&self) -> Result<CoinParams> {
        let theta = if self.theta.is_nan() {
            match self.unit {
                AngleUnit::Radians => std::f64::consts::FRAC_PI_4,
                AngleUnit::Degrees => 45.0,
            }
        } else {
            self.theta
        };
        match self.unit {
            AngleUnit::Radians => CoinParams::new(self.xi, theta, self.zeta),
            AngleUnit::Degrees => CoinParams::from_degrees(self.xi, theta, self.zeta),
        }
    }

    pub fn from_params(params: &CoinParams) -> Self {
        CoinSpec {
            xi: params.xi(),
            theta: params.theta(),
            zeta: params.zeta(),
            unit: AngleUnit::Radians,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WalkerMode {
    Single {
        #[serde(default)]
        j0: i64,
    },
    Ensemble {
        #[serde(rename = "M")]
        atoms: AtomCount,
        profile: InitialProfile,
    },
}

impl Default for WalkerMode {
    fn default() -> Self {
        WalkerMode::Single { j0: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct AtomCount(usize);

impl AtomCount {
    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for AtomCount {
    type Error = String;

    fn try_from(m: usize) -> std::result::Result<Self, String> {
        if m == 0 {
            Err("atom count M must be at least 1".into())
        } else {
            Ok(AtomCount(m))
        }
    }
}

impl From<AtomCount> for usize {
    fn from(m: AtomCount) -> usize {
        m.0
    }
}

/// A noise strength checked to lie in `[0, 1]` while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = String;

    fn try_from(p: f64) -> std::result::Result<Self, String> {
        if (0.0..=1.0).contains(&p) {
            Ok(Probability(p))
        } else {
            Err(format!("noise strength p must lie in [0, 1], got {p}"))
        }
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub kind: NoiseKind,
    #[serde(default)]
    pub p: Probability,
    #[serde(default)]
    pub order: NoiseOrder,
}

impl NoiseSpec {
    pub fn model(&self) -> NoiseModel {
        NoiseModel {
            kind: self.kind,
            p: self.p.get(),
            order: self.order,
        }
    }

    pub fn from_model(model: &NoiseModel) -> Result<Self> {
        model.validate()?;
        Ok(NoiseSpec {
            kind: model.kind,
            p: Probability(model.p),
            order: model.order,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Distribution,
    Profile,
    Moments,
    ScalingFit,
    Support,
    Uniformity,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity_window: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_steps: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<PathBuf>,
    /// Keep structurally zero rows (opposite-parity sites) in the CSV.
    #[serde(default)]
    pub include_zero_rows: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub coin: CoinSpec,
    pub steps: usize,
    #[serde(default)]
    pub walker: WalkerMode,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
    #[serde(default)]
    pub analysis: AnalysisSpec,
    #[serde(default)]
    pub emit: EmitSpec,
}

/// Parses and validates a config, materializing all defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: ExperimentConfig = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        WalkError::Config {
            field: if path == "." { "<root>".into() } else { path },
            line: inner.line(),
            column: inner.column(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    raw.resolve().map_err(|err| match err {
        WalkError::Config { field, message, .. } => {
            let line = line_of_key(text, field.split('.').next().unwrap_or(&field));
            WalkError::Config {
                field,
                line,
                column: 0,
                message,
            }
        }
        other => other,
    })
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

/// 1-based line of the first `"key"` in `text`, 0 if absent.
fn line_of_key(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|line| line.contains(&needle))
        .map(|i| i + 1)
        .unwrap_or(0)
}

fn config_error(field: &str, message: impl Into<String>) -> WalkError {
    WalkError::Config {
        field: field.into(),
        line: 0,
        column: 0,
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// A single walker from the origin with the given coin, everything else default.
    pub fn single(coin: CoinParams, steps: usize) -> Self {
        ExperimentConfig {
            coin: CoinSpec::from_params(&coin),
            steps,
            walker: WalkerMode::Single { j0: 0 },
            noise: NoiseSpec::default(),
            outputs: Vec::new(),
            analysis: AnalysisSpec::default(),
            emit: EmitSpec::default(),
        }
    }

    pub fn ensemble(
        coin: CoinParams,
        atoms: usize,
        profile: InitialProfile,
        steps: usize,
    ) -> Result<Self> {
        let atoms = AtomCount::try_from(atoms).map_err(WalkError::InvalidParameter)?;
        Ok(ExperimentConfig {
            walker: WalkerMode::Ensemble { atoms, profile },
            ..ExperimentConfig::single(coin, steps)
        })
    }

    pub fn with_noise(mut self, model: NoiseModel) -> Result<Self> {
        self.noise = NoiseSpec::from_model(&model)?;
        Ok(self)
    }

    pub fn with_outputs(mut self, outputs: &[OutputKind]) -> Self {
        self.outputs = outputs.to_vec();
        self
    }

    pub fn coin_params(&self) -> Result<CoinParams> {
        self.coin.params()
    }

    pub fn noise_model(&self) -> NoiseModel {
        self.noise.model()
    }

    pub fn ensemble_spec(&self) -> Result<Option<EnsembleSpec>> {
        match self.walker {
            WalkerMode::Single { .. } => Ok(None),
            WalkerMode::Ensemble { atoms, profile } => {
                EnsembleSpec::new(atoms.get(), profile).map(Some)
            }
        }
    }

    pub fn is_ensemble(&self) -> bool {
        matches!(self.walker, WalkerMode::Ensemble { .. })
    }

    pub fn support_epsilon(&self) -> f64 {
        self.analysis
            .support_epsilon
            .unwrap_or(DEFAULT_SUPPORT_EPSILON)
    }

    pub fn uniformity_window(&self) -> SiteInterval {
        if let Some([lo, hi]) = self.analysis.uniformity_window {
            return SiteInterval { lo, hi };
        }
        match self.walker {
            WalkerMode::Single { j0 } => SiteInterval {
                lo: j0 - self.steps as i64,
                hi: j0 + self.steps as i64,
            },
            WalkerMode::Ensemble { atoms, .. } => SiteInterval::centered(atoms.get() as u64 / 2),
        }
    }

    pub fn scaling_steps(&self) -> Vec<usize> {
        self.analysis.scaling_steps.clone().unwrap_or_else(|| {
            let n = self.steps;
            vec![n / 4, n / 2, 3 * n / 4, n]
        })
    }

    /// Validates cross-field constraints and fills in every default.
    pub fn resolve(mut self) -> Result<Self> {
        let params = self
            .coin
            .params()
            .map_err(|e| config_error("coin", e.to_string()))?;
        self.coin = CoinSpec::from_params(&params);

        if self.outputs.is_empty() {
            self.outputs = if self.is_ensemble() {
                vec![OutputKind::Profile, OutputKind::Moments]
            } else {
                vec![OutputKind::Distribution, OutputKind::Moments]
            };
        }
        let mut seen = Vec::new();
        self.outputs.retain(|o| {
            let fresh = !seen.contains(o);
            seen.push(*o);
            fresh
        });

        for output in &self.outputs {
            match (output, self.is_ensemble()) {
                (OutputKind::Distribution, true) => {
                    return Err(config_error(
                        "outputs",
                        "`distribution` needs a single walker; use `profile` for ensembles",
                    ))
                }
                (OutputKind::Profile, false) => return Err(config_error(
                    "outputs",
                    "`profile` needs an ensemble walker; use `distribution` for a single walker",
                )),
                (OutputKind::ScalingFit, true) => {
                    return Err(config_error(
                        "outputs",
                        "`scaling_fit` requires single walker mode",
                    ))
                }
                _ => {}
            }
        }

        let wants = |k| self.outputs.contains(&k);
        if wants(OutputKind::ScalingFit) {
            if !self.noise.model().is_noiseless() {
                return Err(config_error(
                    "outputs",
                    "`scaling_fit` is defined for noiseless walks only",
                ));
            }
            let steps = self.scaling_steps();
            let mut distinct = steps.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < 3 || distinct.last().copied().unwrap_or(0) < 50 {
                return Err(config_error(
                    "analysis.scaling_steps",
                    format!("scaling fit needs at least 3 distinct step counts with max >= 50, got {steps:?}"),
                ));
            }
            self.analysis.scaling_steps = Some(steps);
        }
        if wants(OutputKind::Support) {
            let eps = self.support_epsilon();
            if !(eps > 0.0 && eps < 1.0) {
                return Err(config_error(
                    "analysis.support_epsilon",
                    format!("support epsilon must lie in (0, 1), got {eps}"),
                ));
            }
            self.analysis.support_epsilon = Some(eps);
        }
        if wants(OutputKind::Uniformity) {
            let window = self.uniformity_window();
            if window.lo > window.hi {
                return Err(config_error(
                    "analysis.uniformity_window",
                    format!("empty window [{}, {}]", window.lo, window.hi),
                ));
            }
            self.analysis.uniformity_window = Some([window.lo, window.hi]);
        }
        Ok(self)
    }
}
