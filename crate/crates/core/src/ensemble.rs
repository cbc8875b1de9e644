//! Atom ensembles on the lattice and their density profiles `n_j`.
//!
//! Atoms walk independently. A Mott-insulator ensemble has one atom on each
//! of `M` consecutive sites; every superfluid atom is delocalized uniformly
//! over the same sites. All atoms start in the coin state `(|0⟩ + i|1⟩)/√2`
//! and both coin states are summed into `n_j`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::CoinParams;
use crate::distribution::{PositionDistribution, SiteInterval};
use crate::error::{Result, WalkError};
use crate::noise::{DensityWalkerState, NoiseModel};
use crate::walk::{symmetric_coin_state, PureWalkerState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialProfile {
    #[serde(rename = "MI", alias = "MottInsulator")]
    MottInsulator,
    #[serde(rename = "SF", alias = "Superfluid")]
    Superfluid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    atom_count: usize,
    profile: InitialProfile,
    occupied: SiteInterval,
}

/// `M` atoms on sites `−⌈M/2⌉+1 ..= ⌊M/2⌋`.
pub fn init_ensemble(atom_count: usize, profile: InitialProfile) -> Result<EnsembleSpec> {
    EnsembleSpec::new(atom_count, profile)
}

impl EnsembleSpec {
    pub fn new(atom_count: usize, profile: InitialProfile) -> Result<Self> {
        if atom_count < 1 {
            return Err(WalkError::InvalidParameter(
                "an ensemble needs at least one atom".into(),
            ));
        }
        let m = atom_count as i64;
        let hi = m / 2;
        let lo = hi - m + 1;
        Ok(EnsembleSpec {
            atom_count,
            profile,
            occupied: SiteInterval { lo, hi },
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn profile(&self) -> InitialProfile {
        self.profile
    }

    pub fn occupied_sites(&self) -> SiteInterval {
        self.occupied
    }

    fn max_abs_site(&self) -> usize {
        self.occupied
            .lo
            .unsigned_abs()
            .max(self.occupied.hi.unsigned_abs()) as usize
    }

    /// Smallest lattice radius that holds every atom after `steps` steps.
    pub fn radius_for(&self, steps: usize) -> usize {
        self.max_abs_site() + steps
    }

    /// Initial single-atom state of the atom assigned to `site` (ignored for SF,
    /// where every atom shares one state).
    fn atom_state(&self, site: i64, radius: usize) -> Result<PureWalkerState> {
        match self.profile {
            InitialProfile::MottInsulator => {
                PureWalkerState::localized(site, symmetric_coin_state(), radius)
            }
            InitialProfile::Superfluid => PureWalkerState::uniform_superposition(
                self.occupied.lo..=self.occupied.hi,
                symmetric_coin_state(),
                radius,
            ),
        }
    }
}

/// Expected atom number per site, `n[j + R]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    radius: usize,
    n: Vec<f64>,
}

impl DensityProfile {
    pub fn new(radius: usize, n: Vec<f64>) -> Result<Self> {
        if n.len() != 2 * radius + 1 {
            return Err(WalkError::InvalidParameter(format!(
                "profile of radius {radius} needs {} entries, got {}",
                2 * radius + 1,
                n.len()
            )));
        }
        if let Some(bad) = n.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(WalkError::InvalidParameter(format!(
                "atom numbers must be finite and non-negative, got {bad}"
            )));
        }
        Ok(DensityProfile { radius, n })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[f64] {
        &self.n
    }

    pub fn at(&self, site: i64) -> f64 {
        let r = self.radius as i64;
        if site < -r || site > r {
            0.0
        } else {
            self.n[(site + r) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let r = self.radius as i64;
        (-r..=r).zip(self.n.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.n.iter().sum()
    }

    /// The profile scaled to unit mass.
    pub fn normalized(&self) -> Result<PositionDistribution> {
        let total = self.total();
        if total <= 0.0 {
            return Err(WalkError::Undefined("profile carries no atoms".into()));
        }
        Ok(PositionDistribution::from_raw(
            self.radius,
            self.n.iter().map(|x| x / total).collect(),
        ))
    }
}

/// Position marginal of one walker, pure or noisy, from `initial`.
fn single_walker_distribution(
    initial: &PureWalkerState,
    coin: &CoinParams,
    noise: &NoiseModel,
    steps: usize,
) -> Result<PositionDistribution> {
    noise.validate()?;
    let matrix = coin.matrix();
    if noise.is_noiseless() {
        Ok(initial.evolve(&matrix, steps)?.position_distribution())
    } else {
        Ok(DensityWalkerState::from_pure(initial)
            .evolve(&matrix, noise, steps)?
            .position_distribution())
    }
}

/// Lattice density profile after `steps` walk steps.
///
/// Mott-insulator ensembles evolve a single walker from the origin and sum
/// shifted copies of its distribution over the occupied sites; both the walk
/// and the coin channel are translation invariant, so this equals evolving
/// every atom separately. Superfluid atoms share one initial state, so
/// `n_j = M · P(j)`.
pub fn ensemble_profile(
    spec: &EnsembleSpec,
    coin: &CoinParams,
    noise: &NoiseModel,
    steps: usize,
) -> Result<DensityProfile> {
    let radius = spec.radius_for(steps);
    let r = radius as i64;
    let mut n = vec![0.0; 2 * radius + 1];
    match spec.profile {
        InitialProfile::MottInsulator => {
            let origin = PureWalkerState::localized(0, symmetric_coin_state(), steps)?;
            let base = single_walker_distribution(&origin, coin, noise, steps)?;
            for site in spec.occupied.lo..=spec.occupied.hi {
                for (x, p) in base.iter() {
                    n[(site + x + r) as usize] += p;
                }
            }
        }
        InitialProfile::Superfluid => {
            let initial = spec.atom_state(0, radius)?;
            let dist = single_walker_distribution(&initial, coin, noise, steps)?;
            let m = spec.atom_count as f64;
            for (cell, p) in n.iter_mut().zip(dist.probs()) {
                *cell = m * p;
            }
        }
    }
    Ok(DensityProfile { radius, n })
}

/// Reference path for [`ensemble_profile`]: evolves every atom on its own and
/// sums the per-atom distributions in site order.
pub fn ensemble_profile_per_atom(
    spec: &EnsembleSpec,
    coin: &CoinParams,
    noise: &NoiseModel,
    steps: usize,
) -> Result<DensityProfile> {
    let radius = spec.radius_for(steps);
    let per_atom = (spec.occupied.lo..=spec.occupied.hi)
        .into_par_iter()
        .map(|site| {
            let initial = spec.atom_state(site, radius)?;
            single_walker_distribution(&initial, coin, noise, steps)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut n = vec![0.0; 2 * radius + 1];
    for dist in &per_atom {
        for (cell, p) in n.iter_mut().zip(dist.probs()) {
            *cell += p;
        }
    }
    Ok(DensityProfile { radius, n })
}

/// `⌈(M/2) / cos θ⌉`, the step count after which every atom's amplitude
/// overlaps the lattice centre.
pub fn min_steps_full_overlap(atom_count: usize, theta: f64) -> Result<u64> {
    if !theta.is_finite() || !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(WalkError::Undefined(format!(
            "overlap step count needs 0 <= theta < pi/2, got {theta}"
        )));
    }
    let cos = theta.cos();
    if cos < 1e-12 {
        return Err(WalkError::Undefined(format!(
            "cos(theta) vanishes at theta = {theta}"
        )));
    }
    let raw = (atom_count as f64 / 2.0) / cos;
    // absorb rounding noise on exact integers, e.g. cos(0) paths
    let nearest = raw.round();
    let steps = if (raw - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        raw.ceil()
    };
    Ok(steps as u64)
}

/// Shortest window `[lo, hi]` holding at least `(1 − ε)` of the atom mass.
/// Among equally short windows the one whose centre is closest to the profile
/// mean wins, then the leftmost.
pub fn profile_support(profile: &DensityProfile, epsilon: f64) -> Result<SiteInterval> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(WalkError::InvalidParameter(format!(
            "support epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let total = profile.total();
    if total <= 0.0 {
        return Err(WalkError::Undefined("profile carries no atoms".into()));
    }
    let target = (1.0 - epsilon) * total;
    let n = &profile.n;
    let r = profile.radius as i64;
    let mean: f64 = profile.iter().map(|(j, x)| j as f64 * x).sum::<f64>() / total;

    let mut prefix = Vec::with_capacity(n.len() + 1);
    prefix.push(0.0);
    for x in n {
        prefix.push(prefix.last().unwrap() + x);
    }

    let mut best: Option<(usize, f64, usize)> = None;
    let mut hi = 0;
    for lo in 0..n.len() {
        if hi < lo {
            hi = lo;
        }
        while hi < n.len() && prefix[hi + 1] - prefix[lo] < target {
            hi += 1;
        }
        if hi == n.len() {
            break;
        }
        let width = hi - lo;
        let centre = (lo + hi) as f64 / 2.0 - r as f64;
        let offset = (centre - mean).abs();
        let better = match best {
            None => true,
            Some((w, o, _)) => width < w || (width == w && offset < o - 1e-12),
        };
        if better {
            best = Some((width, offset, lo));
        }
    }
    let (width, _, lo) = best.expect("total mass reaches the target on the full lattice");
    let lo = lo as i64 - r;
    Ok(SiteInterval {
        lo,
        hi: lo + width as i64,
    })
}

/// Coefficient of variation (population stddev / mean) of `n_j` over `window`.
pub fn uniformity(profile: &DensityProfile, window: SiteInterval) -> Result<f64> {
    let r = profile.radius as i64;
    if window.lo > window.hi {
        return Err(WalkError::Undefined("empty uniformity window".into()));
    }
    if window.lo < -r || window.hi > r {
        return Err(WalkError::InvalidParameter(format!(
            "window [{}, {}] exceeds the profile radius {r}",
            window.lo, window.hi
        )));
    }
    let values: Vec<f64> = (window.lo..=window.hi).map(|j| profile.at(j)).collect();
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    if mean <= 0.0 {
        return Err(WalkError::Undefined(
            "uniformity is undefined for a window with zero mean".into(),
        ));
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / count;
    Ok(var.sqrt() / mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseKind;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn hadamard() -> CoinParams {
        CoinParams::hadamard()
    }

    #[test]
    fn mott_sites_for_even_and_odd_counts() {
        let e = init_ensemble(40, InitialProfile::MottInsulator).unwrap();
        assert_eq!(e.occupied_sites(), SiteInterval { lo: -19, hi: 20 });
        let one = init_ensemble(1, InitialProfile::MottInsulator).unwrap();
        assert_eq!(one.occupied_sites(), SiteInterval { lo: 0, hi: 0 });
        let five = init_ensemble(5, InitialProfile::MottInsulator).unwrap();
        assert_eq!(five.occupied_sites(), SiteInterval { lo: -2, hi: 2 });
        assert!(init_ensemble(0, InitialProfile::Superfluid).is_err());
    }

    #[test]
    fn superfluid_atom_amplitudes() {
        let e = init_ensemble(40, InitialProfile::Superfluid).unwrap();
        let s = e.atom_state(0, 25).unwrap();
        let expected = (0.5f64 / 40.0).sqrt();
        for j in -19..=20 {
            assert!((s.amplitude(0, j).re - expected).abs() < 1e-15);
            assert!((s.amplitude(1, j).im - expected).abs() < 1e-15);
        }
        assert_eq!(s.position_distribution().prob(-20), 0.0);
        let site_amp = (s.amplitude(0, 3).norm_sqr() + s.amplitude(1, 3).norm_sqr()).sqrt();
        assert!((site_amp - 40f64.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn zero_steps_reproduces_initial_occupation() {
        for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
            let e = init_ensemble(40, profile).unwrap();
            let n = ensemble_profile(&e, &hadamard(), &NoiseModel::noiseless(), 0).unwrap();
            for (j, x) in n.iter() {
                let expected = if (-19..=20).contains(&j) { 1.0 } else { 0.0 };
                assert!((x - expected).abs() < 1e-12, "site {j}: {x}");
            }
        }
    }

    #[test]
    fn fast_path_matches_per_atom_for_small_ensembles() {
        let noises = [
            NoiseModel::noiseless(),
            NoiseModel::new(NoiseKind::PhaseFlip, 0.1).unwrap(),
            NoiseModel::new(NoiseKind::AmplitudeDamping, 0.2).unwrap(),
        ];
        for m in 1..=5 {
            for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
                let e = init_ensemble(m, profile).unwrap();
                for noise in &noises {
                    for steps in 0..=10 {
                        let fast = ensemble_profile(&e, &hadamard(), noise, steps).unwrap();
                        let slow =
                            ensemble_profile_per_atom(&e, &hadamard(), noise, steps).unwrap();
                        assert_eq!(fast.radius(), slow.radius());
                        for (a, b) in fast.values().iter().zip(slow.values()) {
                            assert!(
                                (a - b).abs() < 1e-12,
                                "m={m} {profile:?} {noise:?} N={steps}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn overlap_steps() {
        assert_eq!(min_steps_full_overlap(40, FRAC_PI_4).unwrap(), 29);
        assert_eq!(min_steps_full_overlap(0, 0.3).unwrap(), 0);
        assert_eq!(min_steps_full_overlap(40, 0.0).unwrap(), 20);
        assert_eq!(min_steps_full_overlap(3, 0.0).unwrap(), 2);
        assert!(matches!(
            min_steps_full_overlap(40, FRAC_PI_2),
            Err(WalkError::Undefined(_))
        ));
        assert!(min_steps_full_overlap(40, -0.1).is_err());
    }

    #[test]
    fn support_of_delta_profile() {
        let mut n = vec![0.0; 11];
        n[7] = 3.0;
        let p = DensityProfile::new(5, n).unwrap();
        for eps in [0.001, 0.1, 0.9] {
            assert_eq!(
                profile_support(&p, eps).unwrap(),
                SiteInterval { lo: 2, hi: 2 }
            );
        }
        assert!(profile_support(&p, 0.0).is_err());
        assert!(profile_support(&p, 1.0).is_err());
    }

    #[test]
    fn support_prefers_window_around_mean() {
        // peaks at ±2 and a small centre: [-2, 0] and [0, 2] tie on width and
        // on distance from the mean, so the leftmost wins
        let p = DensityProfile::new(3, vec![0.0, 1.0, 0.0, 0.2, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            profile_support(&p, 0.5).unwrap(),
            SiteInterval { lo: -2, hi: 0 }
        );
        let skewed = DensityProfile::new(3, vec![0.0, 1.0, 0.0, 0.2, 0.0, 1.5, 0.0]).unwrap();
        assert_eq!(
            profile_support(&skewed, 0.4).unwrap(),
            SiteInterval { lo: 0, hi: 2 }
        );
        let all = profile_support(&p, 0.01).unwrap();
        assert_eq!(all, SiteInterval { lo: -2, hi: 2 });
    }

    #[test]
    fn uniformity_values() {
        let flat = DensityProfile::new(20, vec![2.0; 41]).unwrap();
        assert!(uniformity(&flat, SiteInterval::centered(20)).unwrap().abs() < 1e-15);
        let mut n = vec![0.0; 41];
        n[20] = 1.0;
        let spike = DensityProfile::new(20, n).unwrap();
        let cv = uniformity(&spike, SiteInterval::centered(20)).unwrap();
        assert!((cv - 40f64.sqrt()).abs() < 1e-12);
        assert!(uniformity(&spike, SiteInterval::centered(21)).is_err());
        let empty = DensityProfile::new(2, vec![0.0; 5]).unwrap();
        assert!(matches!(
            uniformity(&empty, SiteInterval::centered(1)),
            Err(WalkError::Undefined(_))
        ));
    }

    #[test]
    fn profile_validation() {
        assert!(DensityProfile::new(1, vec![0.0; 2]).is_err());
        assert!(DensityProfile::new(1, vec![0.0, -1.0, 0.0]).is_err());
    }
}
