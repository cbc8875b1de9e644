//! Running configs and the figure presets.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{moments, variance_scaling_fit_for, MomentReport, ScalingFit};
use crate::coin::CoinParams;
use crate::config::{ExperimentConfig, OutputKind, WalkerMode};
use crate::distribution::{PositionDistribution, SiteInterval};
use crate::ensemble::{
    ensemble_profile, profile_support, uniformity, DensityProfile, InitialProfile,
};
use crate::error::{Result, WalkError};
use crate::noise::{DensityWalkerState, NoiseKind, NoiseModel};
use crate::walk::{symmetric_coin_state, PureWalkerState};

/// Everything one config produced. Fields not requested in `outputs` are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub label: String,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<PositionDistribution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<DensityProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_fit: Option<ScalingFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SiteInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<f64>,
}

/// Series a run contributes to CSV output: `(j, value)` pairs.
pub enum Series<'a> {
    Distribution(&'a PositionDistribution),
    Profile(&'a DensityProfile),
}

impl RunResult {
    pub fn series(&self) -> Option<Series<'_>> {
        self.distribution
            .as_ref()
            .map(Series::Distribution)
            .or(self.profile.as_ref().map(Series::Profile))
    }
}

fn single_distribution(config: &ExperimentConfig, j0: i64) -> Result<PositionDistribution> {
    let coin = config.coin_params()?.matrix();
    let radius = j0.unsigned_abs() as usize + config.steps;
    let initial = PureWalkerState::localized(j0, symmetric_coin_state(), radius)?;
    let noise = config.noise_model();
    noise.validate()?;
    if noise.is_noiseless() {
        Ok(initial.evolve(&coin, config.steps)?.position_distribution())
    } else {
        Ok(DensityWalkerState::from_pure(&initial)
            .evolve(&coin, &noise, config.steps)?
            .position_distribution())
    }
}

/// Runs one config and computes every requested output.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunResult> {
    run_labelled("run", config)
}

pub fn run_labelled(label: &str, config: &ExperimentConfig) -> Result<RunResult> {
    let config = config.clone().resolve()?;
    let wants = |k| config.outputs.contains(&k);

    // the walk itself, as a profile so support/uniformity share one code path
    let (distribution, profile) = match config.walker {
        WalkerMode::Single { j0 } => {
            let dist = single_distribution(&config, j0)?;
            let as_profile = DensityProfile::new(dist.radius(), dist.probs().to_vec())?;
            (Some(dist), as_profile)
        }
        WalkerMode::Ensemble { .. } => {
            let spec = config.ensemble_spec()?.expect("ensemble mode");
            let profile = ensemble_profile(
                &spec,
                &config.coin_params()?,
                &config.noise_model(),
                config.steps,
            )?;
            (None, profile)
        }
    };

    let moments = if wants(OutputKind::Moments) {
        Some(match &distribution {
            Some(d) => moments(d),
            None => moments(&profile.normalized()?),
        })
    } else {
        None
    };
    let scaling_fit = if wants(OutputKind::ScalingFit) {
        Some(variance_scaling_fit_for(
            &config.coin_params()?,
            &config.scaling_steps(),
        )?)
    } else {
        None
    };
    let support = if wants(OutputKind::Support) {
        Some(profile_support(&profile, config.support_epsilon())?)
    } else {
        None
    };
    let uniformity = if wants(OutputKind::Uniformity) {
        Some(uniformity(&profile, config.uniformity_window())?)
    } else {
        None
    };

    Ok(RunResult {
        label: label.to_string(),
        distribution: distribution.filter(|_| wants(OutputKind::Distribution)),
        profile: config
            .is_ensemble()
            .then_some(profile)
            .filter(|_| wants(OutputKind::Profile)),
        moments,
        scaling_fit,
        support,
        uniformity,
        config,
    })
}

/// Results of a named preset, runs in preset order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetResult {
    pub preset: String,
    pub runs: Vec<RunResult>,
}

pub const PRESET_NAMES: &[&str] = &[
    "fig1",
    "fig2",
    "fig3-mi",
    "fig3-sf",
    "fig4",
    "fig5",
    "fig-multi1",
    "fig-multi2",
];

fn deg(x: f64) -> f64 {
    x.to_radians()
}

/// The labelled configs behind a preset.
///
/// | preset       | content                                                      |
/// |--------------|--------------------------------------------------------------|
/// | `fig1`       | single walker, `B(0, θ, 0)`, θ ∈ {π/12, π/4, 5π/12}, N = 100 |
/// | `fig2`       | single walker, biased coins (ξ, θ, ζ), N = 100               |
/// | `fig3-mi`    | MI, M = 40, Hadamard, N ∈ {0, 10, 25, 40}                    |
/// | `fig3-sf`    | SF, M = 40, Hadamard, N ∈ {0, 10, 25, 40}                    |
/// | `fig4`       | MI, N = M = 40, noiseless / phase flip 0.02, 0.1 / damping 0.2 |
/// | `fig5`       | SF, same noise runs as `fig4`                                |
/// | `fig-multi1` | MI, N = M = 40, θ ∈ {30°, 45°, 60°}                          |
/// | `fig-multi2` | SF, N = M = 40, θ ∈ {30°, 45°, 60°}                          |
pub fn preset_configs(name: &str) -> Result<Vec<(String, ExperimentConfig)>> {
    use OutputKind::*;
    let single_outputs = [Distribution, Moments, Support];
    let ensemble_outputs = [Profile, Moments, Support, Uniformity];
    let ensemble = |profile, theta_deg: f64, steps| -> Result<ExperimentConfig> {
        Ok(
            ExperimentConfig::ensemble(CoinParams::unbiased(deg(theta_deg))?, 40, profile, steps)?
                .with_outputs(&ensemble_outputs),
        )
    };
    let noise_runs = |profile| -> Result<Vec<(String, ExperimentConfig)>> {
        let models = [
            ("noiseless", NoiseModel::noiseless()),
            (
                "phaseflip_0.02",
                NoiseModel::new(NoiseKind::PhaseFlip, 0.02)?,
            ),
            ("phaseflip_0.1", NoiseModel::new(NoiseKind::PhaseFlip, 0.1)?),
            (
                "ampdamp_0.2",
                NoiseModel::new(NoiseKind::AmplitudeDamping, 0.2)?,
            ),
        ];
        models
            .into_iter()
            .map(|(label, model)| {
                Ok((
                    label.to_string(),
                    ensemble(profile, 45.0, 40)?.with_noise(model)?,
                ))
            })
            .collect()
    };

    match name {
        "fig1" => [
            ("theta_15deg", PI / 12.0),
            ("theta_45deg", PI / 4.0),
            ("theta_75deg", 5.0 * PI / 12.0),
        ]
        .into_iter()
        .map(|(label, theta)| {
            Ok((
                label.to_string(),
                ExperimentConfig::single(CoinParams::unbiased(theta)?, 100)
                    .with_outputs(&single_outputs),
            ))
        })
        .collect(),
        "fig2" => [
            ("a_xi30_theta30", (PI / 6.0, PI / 6.0, 0.0)),
            ("b_theta30_zeta30", (0.0, PI / 6.0, PI / 6.0)),
            ("c_xi75_theta60", (5.0 * PI / 12.0, PI / 3.0, 0.0)),
            ("d_theta60_zeta75", (0.0, PI / 3.0, 5.0 * PI / 12.0)),
        ]
        .into_iter()
        .map(|(label, (xi, theta, zeta))| {
            Ok((
                label.to_string(),
                ExperimentConfig::single(CoinParams::new(xi, theta, zeta)?, 100)
                    .with_outputs(&single_outputs),
            ))
        })
        .collect(),
        "fig3-mi" | "fig3-sf" => {
            let profile = if name == "fig3-mi" {
                InitialProfile::MottInsulator
            } else {
                InitialProfile::Superfluid
            };
            [0usize, 10, 25, 40]
                .into_iter()
                .map(|steps| Ok((format!("steps_{steps}"), ensemble(profile, 45.0, steps)?)))
                .collect()
        }
        "fig4" => noise_runs(InitialProfile::MottInsulator),
        "fig5" => noise_runs(InitialProfile::Superfluid),
        "fig-multi1" | "fig-multi2" => {
            let profile = if name == "fig-multi1" {
                InitialProfile::MottInsulator
            } else {
                InitialProfile::Superfluid
            };
            [30.0, 45.0, 60.0]
                .into_iter()
                .map(|theta| Ok((format!("theta_{theta}deg"), ensemble(profile, theta, 40)?)))
                .collect()
        }
        other => Err(WalkError::InvalidParameter(format!(
            "unknown preset `{other}`; expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// Runs every config of a preset; independent runs execute in parallel and
/// are returned in preset order.
pub fn run_preset(name: &str) -> Result<PresetResult> {
    let configs = preset_configs(name)?;
    let runs = configs
        .par_iter()
        .map(|(label, config)| run_labelled(label, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(PresetResult {
        preset: name.to_string(),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_single_run() {
        let cfg = crate::config::parse_config(r#"{"steps":3}"#).unwrap();
        let r = run_experiment(&cfg).unwrap();
        let d = r.distribution.unwrap();
        assert_eq!(d.radius(), 3);
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert!(r.moments.is_some());
        assert!(r.profile.is_none());
    }

    #[test]
    fn shifted_single_walker_is_translated() {
        let at_origin =
            run_experiment(&crate::config::parse_config(r#"{"steps":8}"#).unwrap()).unwrap();
        let shifted = run_experiment(
            &crate::config::parse_config(r#"{"steps":8,"walker":{"single":{"j0":-3}}}"#).unwrap(),
        )
        .unwrap();
        let a = at_origin.distribution.unwrap();
        let b = shifted.distribution.unwrap();
        for (j, p) in a.iter() {
            assert_eq!(b.prob(j - 3), p);
        }
        let ma = at_origin.moments.unwrap();
        let mb = shifted.moments.unwrap();
        assert!((mb.mean - (ma.mean - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn every_preset_resolves() {
        for name in PRESET_NAMES {
            let configs = preset_configs(name).unwrap();
            assert!(!configs.is_empty());
            for (_, c) in configs {
                c.resolve().unwrap();
            }
        }
        assert!(preset_configs("fig99").is_err());
    }

    #[test]
    fn fig5_runs_carry_caption_noise_levels() {
        let configs = preset_configs("fig5").unwrap();
        let levels: Vec<_> = configs
            .iter()
            .map(|(_, c)| (c.noise.kind, c.noise.p.get()))
            .collect();
        assert_eq!(
            levels,
            vec![
                (NoiseKind::None, 0.0),
                (NoiseKind::PhaseFlip, 0.02),
                (NoiseKind::PhaseFlip, 0.1),
                (NoiseKind::AmplitudeDamping, 0.2),
            ]
        );
        assert!(configs
            .iter()
            .all(|(_, c)| c.steps == 40 && c.is_ensemble()));
    }
}
