//! Noisy walks: density-matrix evolution with a Kraus channel on the coin.
//!
//! One step maps `ρ → Σ_k (K_k W) ρ (K_k W)†` with `W = S (B ⊗ 1)` and the
//! Kraus operators acting as `K_k ⊗ 1_position`. [`NoiseOrder::BeforeStep`]
//! applies the channel ahead of `W` instead.
//!
//! The noise strength `p` is the per-step probability of the flip (or the
//! damping probability of `|1⟩`), so `p = 0` is the noiseless walk.
//!
//! `ρ` is stored dense and row-major with basis index `2·(j + R) + c`. Both
//! the unitary and the channel are block-local in position, so a step costs
//! `O(d²)` rather than a full matrix product.

use serde::{Deserialize, Serialize};

use crate::coin::CoinMatrix;
use crate::distribution::PositionDistribution;
use crate::error::{Result, WalkError};
use crate::walk::PureWalkerState;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum NoiseKind {
    #[default]
    None,
    BitFlip,
    PhaseFlip,
    AmplitudeDamping,
}

/// Where the channel sits relative to the unitary step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseOrder {
    #[default]
    AfterStep,
    BeforeStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
    #[serde(default)]
    pub order: NoiseOrder,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        let model = NoiseModel {
            kind,
            p,
            order: NoiseOrder::AfterStep,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn noiseless() -> Self {
        NoiseModel::default()
    }

    pub fn with_order(mut self, order: NoiseOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(WalkError::InvalidParameter(format!(
                "noise strength p must lie in [0, 1], got {}",
                self.p
            )));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.kind == NoiseKind::None || self.p == 0.0
    }
}

/// Kraus operators on the coin space. Operators with zero weight are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSet {
    operators: Vec<CoinMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CoinMatrix>) -> Result<Self> {
        let set = KrausSet { operators };
        let err = set.completeness_error();
        if set.operators.is_empty() || err > 1e-12 {
            return Err(WalkError::InvalidParameter(format!(
                "Kraus operators are not trace preserving (deviation {err:e})"
            )));
        }
        Ok(set)
    }

    pub fn identity() -> Self {
        KrausSet {
            operators: vec![CoinMatrix::identity()],
        }
    }

    pub fn operators(&self) -> &[CoinMatrix] {
        &self.operators
    }

    /// Max entry-wise deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        self.operators
            .iter()
            .map(|k| k.adjoint() * *k)
            .fold(CoinMatrix::zero(), |acc, m| acc + m)
            .max_abs_diff(&CoinMatrix::identity())
    }

    pub fn is_identity(&self) -> bool {
        self.operators.len() == 1 && self.operators[0] == CoinMatrix::identity()
    }
}

/// Kraus operators for a noise model.
pub fn kraus_for(model: &NoiseModel) -> Result<KrausSet> {
    model.validate()?;
    let p = model.p;
    let keep = (1.0 - p).sqrt();
    let flip = p.sqrt();
    let operators = match model.kind {
        NoiseKind::None => vec![CoinMatrix::identity()],
        NoiseKind::BitFlip => vec![
            CoinMatrix::identity().scale(keep),
            CoinMatrix::pauli_x().scale(flip),
        ],
        NoiseKind::PhaseFlip => vec![
            CoinMatrix::identity().scale(keep),
            CoinMatrix::pauli_z().scale(flip),
        ],
        NoiseKind::AmplitudeDamping => vec![
            CoinMatrix::from_real([[1.0, 0.0], [0.0, keep]]),
            CoinMatrix::from_real([[0.0, flip], [0.0, 0.0]]),
        ],
    };
    let operators: Vec<_> = operators.into_iter().filter(|k| !k.is_zero()).collect();
    Ok(KrausSet { operators })
}

/// Dense density matrix over coin ⊗ position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityWalkerState {
    radius: usize,
    rho: Vec<C64>,
}

pub fn init_density_walker(pure: &PureWalkerState) -> DensityWalkerState {
    DensityWalkerState::from_pure(pure)
}

pub fn step_density(
    state: &DensityWalkerState,
    coin: &CoinMatrix,
    kraus: &KrausSet,
) -> Result<DensityWalkerState> {
    let mut next = state.clone();
    next.step_mut(coin, kraus, NoiseOrder::AfterStep)?;
    Ok(next)
}

pub fn evolve_density(
    state: &DensityWalkerState,
    coin: &CoinMatrix,
    model: &NoiseModel,
    steps: usize,
) -> Result<DensityWalkerState> {
    state.evolve(coin, model, steps)
}

pub fn position_distribution_density(state: &DensityWalkerState) -> PositionDistribution {
    state.position_distribution()
}

impl DensityWalkerState {
    /// `ρ = |ψ⟩⟨ψ|`.
    pub fn from_pure(pure: &PureWalkerState) -> Self {
        let radius = pure.radius();
        let [a0, a1] = pure.amplitudes();
        let psi: Vec<C64> = a0.iter().zip(a1).flat_map(|(x, y)| [*x, *y]).collect();
        let d = psi.len();
        let mut rho = vec![ZERO; d * d];
        for (row, amp) in rho.chunks_exact_mut(d).zip(&psi) {
            if *amp == ZERO {
                continue;
            }
            for (cell, other) in row.iter_mut().zip(&psi) {
                *cell = amp * other.conj();
            }
        }
        DensityWalkerState { radius, rho }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn dim(&self) -> usize {
        2 * (2 * self.radius + 1)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.rho
    }

    /// `ρ[(c, j), (c', j')]`.
    pub fn element(&self, coin_row: usize, site_row: i64, coin_col: usize, site_col: i64) -> C64 {
        let r = self.radius as i64;
        let index = |c: usize, j: i64| (2 * (j + r)) as usize + c;
        self.rho[index(coin_row, site_row) * self.dim() + index(coin_col, site_col)]
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i]).sum()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // ρ is Hermitian, so tr(ρ²) = Σ |ρ_ij|²
        self.rho.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Largest `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.rho[i * d + j] - self.rho[j * d + i].conj()).norm());
            }
        }
        worst
    }

    fn check_capacity(&self) -> Result<()> {
        let d = self.dim();
        let edge_rows = [0, 1, d - 2, d - 1];
        let touched = edge_rows
            .iter()
            .any(|&r| self.rho[r * d..(r + 1) * d].iter().any(|x| *x != ZERO));
        if touched {
            return Err(WalkError::Capacity(format!(
                "density matrix support reaches the lattice edge ±{}; allocate a larger radius",
                self.radius
            )));
        }
        Ok(())
    }

    /// Left-multiplies by `(K ⊗ 1)` followed, if `shift`, by the conditional shift.
    fn apply_rows(&self, op: &CoinMatrix, shift: bool, out: &mut [C64]) {
        let d = self.dim();
        let sites = d / 2;
        out.fill(ZERO);
        for p in 0..sites {
            let row0 = &self.rho[(2 * p) * d..(2 * p + 1) * d];
            let row1 = &self.rho[(2 * p + 1) * d..(2 * p + 2) * d];
            let (dest0, dest1) = if shift {
                (p.checked_sub(1), (p + 1 < sites).then_some(p + 1))
            } else {
                (Some(p), Some(p))
            };
            for (c, dest) in [(0, dest0), (1, dest1)] {
                let Some(q) = dest else { continue };
                let (w0, w1) = (op.get(c, 0), op.get(c, 1));
                if w0 == ZERO && w1 == ZERO {
                    continue;
                }
                let target = &mut out[(2 * q + c) * d..(2 * q + c + 1) * d];
                for ((t, x0), x1) in target.iter_mut().zip(row0).zip(row1) {
                    *t += w0 * x0 + w1 * x1;
                }
            }
        }
    }

    /// Right-multiplies `src` by `((K ⊗ 1)` then shift`)†`, accumulating into `out`.
    fn apply_cols_acc(src: &[C64], d: usize, op: &CoinMatrix, shift: bool, out: &mut [C64]) {
        // (M A†)[r, :] is A applied to conj(M[r, :]), conjugated back; for a real
        // shift that equals conj(A) acting on the row directly.
        let op = op.conj();
        let sites = d / 2;
        for (src_row, out_row) in src.chunks_exact(d).zip(out.chunks_exact_mut(d)) {
            for p in 0..sites {
                let v = [src_row[2 * p], src_row[2 * p + 1]];
                if v[0] == ZERO && v[1] == ZERO {
                    continue;
                }
                let [a0, a1] = op.apply(v);
                if shift {
                    if p > 0 {
                        out_row[2 * (p - 1)] += a0;
                    }
                    if p + 1 < sites {
                        out_row[2 * (p + 1) + 1] += a1;
                    }
                } else {
                    out_row[2 * p] += a0;
                    out_row[2 * p + 1] += a1;
                }
            }
        }
    }

    fn conjugate_by(&mut self, op: &CoinMatrix, shift: bool, scratch: &mut [C64]) {
        let d = self.dim();
        self.apply_rows(op, shift, scratch);
        self.rho.fill(ZERO);
        Self::apply_cols_acc(scratch, d, op, shift, &mut self.rho);
    }

    fn apply_channel(&mut self, kraus: &KrausSet, scratch: &mut [C64], acc: &mut Vec<C64>) {
        if kraus.is_identity() {
            return;
        }
        let d = self.dim();
        acc.clear();
        acc.resize(d * d, ZERO);
        for k in kraus.operators() {
            self.apply_rows(k, false, scratch);
            Self::apply_cols_acc(scratch, d, k, false, acc);
        }
        std::mem::swap(&mut self.rho, acc);
    }

    fn step_with(
        &mut self,
        coin: &CoinMatrix,
        kraus: &KrausSet,
        order: NoiseOrder,
        scratch: &mut [C64],
        acc: &mut Vec<C64>,
    ) -> Result<()> {
        self.check_capacity()?;
        match order {
            NoiseOrder::AfterStep => {
                self.conjugate_by(coin, true, scratch);
                self.apply_channel(kraus, scratch, acc);
            }
            NoiseOrder::BeforeStep => {
                self.apply_channel(kraus, scratch, acc);
                self.conjugate_by(coin, true, scratch);
            }
        }
        Ok(())
    }

    pub fn step_mut(
        &mut self,
        coin: &CoinMatrix,
        kraus: &KrausSet,
        order: NoiseOrder,
    ) -> Result<()> {
        let mut scratch = vec![ZERO; self.rho.len()];
        let mut acc = Vec::new();
        self.step_with(coin, kraus, order, &mut scratch, &mut acc)
    }

    pub fn evolve(&self, coin: &CoinMatrix, model: &NoiseModel, steps: usize) -> Result<Self> {
        let kraus = kraus_for(model)?;
        let mut current = self.clone();
        let mut scratch = vec![ZERO; self.rho.len()];
        let mut acc = Vec::with_capacity(self.rho.len());
        for _ in 0..steps {
            current.step_with(coin, &kraus, model.order, &mut scratch, &mut acc)?;
        }
        Ok(current)
    }

    /// `P(j) = Σ_c ρ[(c, j), (c, j)]`.
    pub fn position_distribution(&self) -> PositionDistribution {
        let d = self.dim();
        let probs = (0..d / 2)
            .map(|p| {
                let a = self.rho[(2 * p) * d + 2 * p].re;
                let b = self.rho[(2 * p + 1) * d + 2 * p + 1].re;
                assert!(
                    a >= -1e-10 && b >= -1e-10,
                    "density matrix has a negative diagonal entry at site index {p}"
                );
                (a + b).max(0.0)
            })
            .collect();
        PositionDistribution::from_raw(self.radius, probs)
    }
}
