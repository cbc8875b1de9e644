//! The SU(2) coin `B(ξ, θ, ζ)`.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::C64;

/// Coin angles in radians, stored in the canonical range `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoinParams")]
pub struct CoinParams {
    xi: f64,
    theta: f64,
    zeta: f64,
}

#[derive(Deserialize)]
struct RawCoinParams {
    xi: f64,
    theta: f64,
    zeta: f64,
}

impl TryFrom<RawCoinParams> for CoinParams {
    type Error = WalkError;

    fn try_from(raw: RawCoinParams) -> Result<Self> {
        CoinParams::new(raw.xi, raw.theta, raw.zeta)
    }
}

fn canonical_angle(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(WalkError::InvalidParameter(format!(
            "coin angle {name} must be finite, got {value}"
        )));
    }
    let wrapped = value.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    Ok(if wrapped >= TAU { 0.0 } else { wrapped })
}

impl CoinParams {
    pub fn new(xi: f64, theta: f64, zeta: f64) -> Result<Self> {
        Ok(CoinParams {
            xi: canonical_angle("xi", xi)?,
            theta: canonical_angle("theta", theta)?,
            zeta: canonical_angle("zeta", zeta)?,
        })
    }

    pub fn from_degrees(xi: f64, theta: f64, zeta: f64) -> Result<Self> {
        CoinParams::new(xi.to_radians(), theta.to_radians(), zeta.to_radians())
    }

    /// `B(0, π/4, 0)`.
    pub fn hadamard() -> Self {
        CoinParams {
            xi: 0.0,
            theta: FRAC_PI_4,
            zeta: 0.0,
        }
    }

    /// `B(0, θ, 0)`, the unbiased family.
    pub fn unbiased(theta: f64) -> Result<Self> {
        CoinParams::new(0.0, theta, 0.0)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn matrix(&self) -> CoinMatrix {
        let (s, c) = self.theta.sin_cos();
        let e_xi = C64::from_polar(1.0, self.xi);
        let e_zeta = C64::from_polar(1.0, self.zeta);
        CoinMatrix {
            entries: [
                [e_xi * c, e_zeta * s],
                [e_zeta.conj() * s, -e_xi.conj() * c],
            ],
        }
    }
}

impl Default for CoinParams {
    fn default() -> Self {
        CoinParams::hadamard()
    }
}

/// Builds `B(ξ, θ, ζ) = [[e^{iξ}cosθ, e^{iζ}sinθ], [e^{−iζ}sinθ, −e^{−iξ}cosθ]]`.
pub fn make_coin(params: &CoinParams) -> CoinMatrix {
    params.matrix()
}

/// A 2×2 complex matrix acting on the coin space, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinMatrix {
    pub entries: [[C64; 2]; 2],
}

impl CoinMatrix {
    pub const fn new(entries: [[C64; 2]; 2]) -> Self {
        CoinMatrix { entries }
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Self {
        CoinMatrix {
            entries: entries.map(|row| row.map(|x| C64::new(x, 0.0))),
        }
    }

    pub fn identity() -> Self {
        CoinMatrix::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn zero() -> Self {
        CoinMatrix::from_real([[0.0, 0.0], [0.0, 0.0]])
    }

    pub fn pauli_x() -> Self {
        CoinMatrix::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        CoinMatrix::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn scale(&self, factor: f64) -> Self {
        CoinMatrix {
            entries: self.entries.map(|row| row.map(|x| x * factor)),
        }
    }

    /// Entry-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        CoinMatrix {
            entries: self.entries.map(|row| row.map(|x| x.conj())),
        }
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        CoinMatrix {
            entries: [
                [e[0][0].conj(), e[1][0].conj()],
                [e[0][1].conj(), e[1][1].conj()],
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|x| *x == C64::new(0.0, 0.0))
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation of `B†B` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&CoinMatrix::identity())
    }

    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let e = &self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CoinMatrix { entries: out }
    }
}

impl std::ops::Add for CoinMatrix {
    type Output = CoinMatrix;

    fn add(self, rhs: CoinMatrix) -> CoinMatrix {
        let mut out = self.entries;
        for (row, rrow) in out.iter_mut().zip(rhs.entries.iter()) {
            for (cell, r) in row.iter_mut().zip(rrow.iter()) {
                *cell += r;
            }
        }
        CoinMatrix { entries: out }
    }
}
