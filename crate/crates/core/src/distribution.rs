//! Probability distributions over lattice sites `j ∈ [−R, R]`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Position marginal of a walker, `probs[j + R] = P(j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionDistribution {
    radius: usize,
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn new(radius: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 2 * radius + 1 {
            return Err(WalkError::InvalidParameter(format!(
                "distribution of radius {radius} needs {} entries, got {}",
                2 * radius + 1,
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(WalkError::InvalidParameter(format!(
                "probabilities must be finite and non-negative, got {bad}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(WalkError::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(PositionDistribution { radius, probs })
    }

    pub(crate) fn from_raw(radius: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 2 * radius + 1);
        PositionDistribution { radius, probs }
    }

    /// All mass on `site`.
    pub fn delta(radius: usize, site: i64) -> Result<Self> {
        let idx = site_index(radius, site)?;
        let mut probs = vec![0.0; 2 * radius + 1];
        probs[idx] = 1.0;
        Ok(PositionDistribution { radius, probs })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(j)`, zero outside the allocated lattice.
    pub fn prob(&self, site: i64) -> f64 {
        site_index(self.radius, site)
            .map(|i| self.probs[i])
            .unwrap_or(0.0)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        let r = self.radius as i64;
        -r..=r
    }

    /// `(j, P(j))` pairs in ascending site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.sites().zip(self.probs.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability mass on sites with `lo <= j <= hi`.
    pub fn mass_within(&self, lo: i64, hi: i64) -> f64 {
        self.iter()
            .filter(|(j, _)| (lo..=hi).contains(j))
            .map(|(_, p)| p)
            .sum()
    }
}

pub(crate) fn site_index(radius: usize, site: i64) -> Result<usize> {
    let r = radius as i64;
    if site < -r || site > r {
        return Err(WalkError::Capacity(format!(
            "site {site} lies outside the lattice [-{radius}, {radius}]"
        )));
    }
    Ok((site + r) as usize)
}

/// Closed interval of lattice sites `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteInterval {
    pub lo: i64,
    pub hi: i64,
}

impl SiteInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(WalkError::InvalidParameter(format!(
                "empty site interval [{lo}, {hi}]"
            )));
        }
        Ok(SiteInterval { lo, hi })
    }

    /// `[-half_width, half_width]`.
    pub fn centered(half_width: u64) -> Self {
        let h = half_width as i64;
        SiteInterval { lo: -h, hi: h }
    }

    /// Number of sites covered.
    pub fn len(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, site: i64) -> bool {
        (self.lo..=self.hi).contains(&site)
    }

    pub fn is_within(&self, other: &SiteInterval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }
}
