//! Moments, variance-scaling fits and the classical random-walk baseline.

use serde::{Deserialize, Serialize};

use crate::coin::CoinParams;
use crate::distribution::PositionDistribution;
use crate::ensemble::min_steps_full_overlap;
use crate::error::{Result, WalkError};
use crate::walk::{symmetric_coin_state, PureWalkerState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    /// `μ₄/σ⁴ − 3`; `None` when the variance vanishes.
    pub excess_kurtosis: Option<f64>,
}

pub fn moments(dist: &PositionDistribution) -> MomentReport {
    let mean: f64 = dist.iter().map(|(j, p)| j as f64 * p).sum();
    let (m2, m4) = dist.iter().fold((0.0, 0.0), |(m2, m4), (j, p)| {
        let d2 = (j as f64 - mean).powi(2);
        (m2 + d2 * p, m4 + d2 * d2 * p)
    });
    let variance = m2.max(0.0);
    let excess_kurtosis = (variance > 0.0).then(|| m4 / (variance * variance) - 3.0);
    MomentReport {
        mean,
        variance,
        excess_kurtosis,
    }
}

/// Second moment about the site `origin`, `Σ (j − origin)² P(j)`.
pub fn spread_about(dist: &PositionDistribution, origin: i64) -> f64 {
    dist.iter()
        .map(|(j, p)| ((j - origin) as f64).powi(2) * p)
        .sum()
}

/// Least-squares fit of `σ² = c·N²` through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub theta: f64,
    pub slope: f64,
    /// Uncentered coefficient of determination of the through-origin model.
    pub r_squared: f64,
}

impl ScalingFit {
    /// `1 − sin θ`.
    pub fn predicted_slope(&self) -> f64 {
        1.0 - self.theta.sin()
    }
}

/// Fits `variance(N) = c·N²` for the walk `B(0, θ, 0)` started at the origin in
/// `(|0⟩ + i|1⟩)/√2`.
pub fn variance_scaling_fit(theta: f64, steps: &[usize]) -> Result<ScalingFit> {
    variance_scaling_fit_for(&CoinParams::unbiased(theta)?, steps)
}

pub fn variance_scaling_fit_for(coin: &CoinParams, steps: &[usize]) -> Result<ScalingFit> {
    let mut sorted = steps.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 3 {
        return Err(WalkError::Fit(format!(
            "need at least 3 distinct step counts, got {}",
            sorted.len()
        )));
    }
    let max = *sorted.last().unwrap();
    if max < 50 {
        return Err(WalkError::Fit(format!(
            "largest step count must be at least 50, got {max}"
        )));
    }

    let mut variances = Vec::with_capacity(sorted.len());
    let mut wanted = sorted.iter().peekable();
    let initial = PureWalkerState::localized(0, symmetric_coin_state(), max)?;
    if wanted.peek() == Some(&&0) {
        variances.push((0usize, 0.0));
        wanted.next();
    }
    initial.evolve_with(&coin.matrix(), max, |step, state| {
        if wanted.peek() == Some(&&step) {
            wanted.next();
            variances.push((step, moments(&state.position_distribution()).variance));
        }
    })?;

    let (sxy, sxx, syy) = variances
        .iter()
        .fold((0.0, 0.0, 0.0), |(sxy, sxx, syy), &(n, v)| {
            let x = (n * n) as f64;
            (sxy + x * v, sxx + x * x, syy + v * v)
        });
    let slope = sxy / sxx;
    let residual: f64 = variances
        .iter()
        .map(|&(n, v)| (v - slope * (n * n) as f64).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - residual / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ScalingFit {
        theta: coin.theta(),
        slope,
        r_squared,
    })
}

/// Unbiased ±1 random walk after `steps` steps:
/// `P(j) = C(N, (N + j)/2) / 2^N` for `j ≡ N (mod 2)`.
pub fn crw_distribution(steps: usize) -> PositionDistribution {
    // Pascal's rule with halving keeps every entry a probability
    let mut probs = vec![0.0; 2 * steps + 1];
    probs[steps] = 1.0;
    let mut next = probs.clone();
    for _ in 0..steps {
        next.fill(0.0);
        for (i, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            next[i - 1] += 0.5 * p;
            next[i + 1] += 0.5 * p;
        }
        std::mem::swap(&mut probs, &mut next);
    }
    PositionDistribution::from_raw(steps, probs)
}

/// Walk steps needed to spread an `M`-atom ensemble over `±M/2`, quantum vs
/// classical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    pub atom_count: usize,
    pub theta: f64,
    /// `⌈(M/2)/cos θ⌉`
    pub quantum_steps: u64,
    /// `M²`
    pub classical_steps: u64,
    /// `classical_steps / quantum_steps`
    pub ratio: f64,
}

pub fn speedup_report(atom_count: usize, theta: f64) -> Result<SpeedupReport> {
    if atom_count < 2 {
        return Err(WalkError::InvalidParameter(format!(
            "speedup needs at least 2 atoms, got {atom_count}"
        )));
    }
    let quantum_steps = min_steps_full_overlap(atom_count, theta)?;
    let classical_steps = (atom_count as u64).pow(2);
    Ok(SpeedupReport {
        atom_count,
        theta,
        quantum_steps,
        classical_steps,
        ratio: classical_steps as f64 / quantum_steps as f64,
    })
}
