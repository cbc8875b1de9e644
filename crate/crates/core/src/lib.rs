//! Discrete-time quantum walks on a one-dimensional lattice.
//!
//! A walker carries a two-level coin (internal state `|0⟩`, `|1⟩`) and a
//! lattice position. Each step applies the SU(2) coin `B(ξ, θ, ζ)` to the
//! internal state and then moves the `|0⟩` component one site left and the
//! `|1⟩` component one site right.
//!
//! The crate provides
//!
//! - pure-state evolution ([`walk`]) and its position marginals ([`distribution`]),
//! - density-matrix evolution under bit-flip, phase-flip and amplitude-damping
//!   channels on the coin ([`noise`]),
//! - Mott-insulator and superfluid atom ensembles aggregated into lattice
//!   density profiles ([`ensemble`]),
//! - moments, variance-scaling fits and the classical random-walk baseline
//!   ([`analytics`]),
//! - JSON experiment configs, figure presets and CSV/JSON/gnuplot output
//!   ([`config`], [`experiment`], [`emit`]).

pub mod analytics;
pub mod coin;
pub mod config;
pub mod distribution;
pub mod emit;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod noise;
pub mod walk;

pub use analytics::{
    crw_distribution, moments, speedup_report, variance_scaling_fit, MomentReport, ScalingFit,
    SpeedupReport,
};
pub use coin::{make_coin, CoinMatrix, CoinParams};
pub use distribution::{PositionDistribution, SiteInterval};
pub use ensemble::{
    ensemble_profile, ensemble_profile_per_atom, init_ensemble, min_steps_full_overlap,
    profile_support, uniformity, DensityProfile, EnsembleSpec, InitialProfile,
};
pub use error::{Result, WalkError};
pub use noise::{
    evolve_density, init_density_walker, kraus_for, position_distribution_density, step_density,
    DensityWalkerState, KrausSet, NoiseKind, NoiseModel, NoiseOrder,
};
pub use walk::{
    evolve_pure, init_pure_walker, position_distribution, step_pure, symmetric_coin_state,
    PureWalkerState,
};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
