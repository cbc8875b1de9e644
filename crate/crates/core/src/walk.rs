//! Pure-state (noiseless) walk evolution.
//!
//! One step is `W = S (B ⊗ 1)`: the coin acts on every position column, then
//! the conditional shift sends the `|0⟩` row one site left and the `|1⟩` row
//! one site right. The lattice is finite with radius `R`; a step that would
//! push amplitude past `±R` is refused rather than wrapped.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::coin::CoinMatrix;
use crate::distribution::{site_index, PositionDistribution};
use crate::error::{Result, WalkError};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Coin state tolerance for silent renormalization.
pub const COIN_NORM_TOLERANCE: f64 = 1e-6;

/// `(|0⟩ + i|1⟩)/√2`.
pub fn symmetric_coin_state() -> [C64; 2] {
    [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)]
}

/// Amplitudes over coin ⊗ position. `amplitudes[c][j + R]` is the amplitude of
/// `|c⟩ ⊗ |j⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureWalkerState {
    radius: usize,
    amplitudes: [Vec<C64>; 2],
}

pub(crate) fn normalize_coin_state(coin_state: [C64; 2]) -> Result<[C64; 2]> {
    let norm_sqr = coin_state[0].norm_sqr() + coin_state[1].norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr.sqrt() - 1.0).abs() > COIN_NORM_TOLERANCE {
        return Err(WalkError::InvalidParameter(format!(
            "coin state norm {} is not within {COIN_NORM_TOLERANCE} of 1",
            norm_sqr.sqrt()
        )));
    }
    let scale = norm_sqr.sqrt().recip();
    Ok(coin_state.map(|a| a * scale))
}

/// Places `coin_state ⊗ |j0⟩` on a lattice of radius `radius`.
pub fn init_pure_walker(j0: i64, coin_state: [C64; 2], radius: usize) -> Result<PureWalkerState> {
    PureWalkerState::localized(j0, coin_state, radius)
}

pub fn step_pure(state: &PureWalkerState, coin: &CoinMatrix) -> Result<PureWalkerState> {
    state.step(coin)
}

pub fn evolve_pure(
    state: &PureWalkerState,
    coin: &CoinMatrix,
    steps: usize,
) -> Result<PureWalkerState> {
    state.evolve(coin, steps)
}

pub fn position_distribution(state: &PureWalkerState) -> PositionDistribution {
    state.position_distribution()
}

impl PureWalkerState {
    pub fn localized(j0: i64, coin_state: [C64; 2], radius: usize) -> Result<Self> {
        let coin_state = normalize_coin_state(coin_state)?;
        let idx = site_index(radius, j0).map_err(|_| {
            WalkError::Capacity(format!(
                "initial site {j0} does not fit in a lattice of radius {radius}"
            ))
        })?;
        let mut amplitudes = [vec![ZERO; 2 * radius + 1], vec![ZERO; 2 * radius + 1]];
        amplitudes[0][idx] = coin_state[0];
        amplitudes[1][idx] = coin_state[1];
        Ok(PureWalkerState { radius, amplitudes })
    }

    /// `coin_state ⊗ (Σ_s |s⟩)/√n` for the given sites, all with zero relative
    /// phase.
    pub fn uniform_superposition(
        sites: impl IntoIterator<Item = i64>,
        coin_state: [C64; 2],
        radius: usize,
    ) -> Result<Self> {
        let coin_state = normalize_coin_state(coin_state)?;
        let indices = sites
            .into_iter()
            .map(|s| site_index(radius, s))
            .collect::<Result<Vec<_>>>()?;
        if indices.is_empty() {
            return Err(WalkError::InvalidParameter(
                "superposition needs at least one site".into(),
            ));
        }
        let mut amplitudes = [vec![ZERO; 2 * radius + 1], vec![ZERO; 2 * radius + 1]];
        let weight = (indices.len() as f64).sqrt().recip();
        for idx in indices {
            if amplitudes[0][idx] != ZERO || amplitudes[1][idx] != ZERO {
                return Err(WalkError::InvalidParameter(
                    "superposition sites must be distinct".into(),
                ));
            }
            amplitudes[0][idx] = coin_state[0] * weight;
            amplitudes[1][idx] = coin_state[1] * weight;
        }
        Ok(PureWalkerState { radius, amplitudes })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Amplitude of `|coin⟩ ⊗ |site⟩`, zero off-lattice.
    pub fn amplitude(&self, coin: usize, site: i64) -> C64 {
        site_index(self.radius, site)
            .map(|i| self.amplitudes[coin][i])
            .unwrap_or(ZERO)
    }

    pub fn amplitudes(&self) -> &[Vec<C64>; 2] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Smallest and largest occupied sites, `None` for the zero vector.
    pub fn support(&self) -> Option<(i64, i64)> {
        let r = self.radius as i64;
        let occupied = |i: &usize| self.amplitudes[0][*i] != ZERO || self.amplitudes[1][*i] != ZERO;
        let n = 2 * self.radius + 1;
        let lo = (0..n).find(occupied)?;
        let hi = (0..n).rev().find(occupied)?;
        Some((lo as i64 - r, hi as i64 - r))
    }

    fn check_capacity(&self) -> Result<()> {
        let last = 2 * self.radius;
        let touches = |i: usize| self.amplitudes[0][i] != ZERO || self.amplitudes[1][i] != ZERO;
        if touches(0) || touches(last) {
            return Err(WalkError::Capacity(format!(
                "walker support reaches the lattice edge ±{}; allocate a larger radius",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn step(&self, coin: &CoinMatrix) -> Result<Self> {
        let mut next = PureWalkerState {
            radius: self.radius,
            amplitudes: [
                vec![ZERO; self.amplitudes[0].len()],
                vec![ZERO; self.amplitudes[1].len()],
            ],
        };
        self.step_into(coin, &mut next)?;
        Ok(next)
    }

    fn step_into(&self, coin: &CoinMatrix, out: &mut PureWalkerState) -> Result<()> {
        self.check_capacity()?;
        let n = self.amplitudes[0].len();
        let [left, right] = &mut out.amplitudes;
        left[n - 1] = ZERO;
        right[0] = ZERO;
        for p in 0..n {
            let [a0, a1] = coin.apply([self.amplitudes[0][p], self.amplitudes[1][p]]);
            // |0⟩ moves to j-1, |1⟩ to j+1; the edge columns are zero
            if p > 0 {
                left[p - 1] = a0;
            }
            if p + 1 < n {
                right[p + 1] = a1;
            }
        }
        Ok(())
    }

    /// `steps` applications of [`PureWalkerState::step`].
    pub fn evolve(&self, coin: &CoinMatrix, steps: usize) -> Result<Self> {
        let mut current = self.clone();
        let mut scratch = self.clone();
        for _ in 0..steps {
            current.step_into(coin, &mut scratch)?;
            std::mem::swap(&mut current, &mut scratch);
        }
        Ok(current)
    }

    /// Evolves step by step, handing each intermediate state (starting with
    /// step 1) to `visit`.
    pub fn evolve_with<F>(&self, coin: &CoinMatrix, steps: usize, mut visit: F) -> Result<Self>
    where
        F: FnMut(usize, &PureWalkerState),
    {
        let mut current = self.clone();
        let mut scratch = self.clone();
        for step in 1..=steps {
            current.step_into(coin, &mut scratch)?;
            std::mem::swap(&mut current, &mut scratch);
            visit(step, &current);
        }
        Ok(current)
    }

    /// `P(j) = |β_j|² + |γ_j|²`.
    pub fn position_distribution(&self) -> PositionDistribution {
        let probs = self.amplitudes[0]
            .iter()
            .zip(&self.amplitudes[1])
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        PositionDistribution::from_raw(self.radius, probs)
    }
}
