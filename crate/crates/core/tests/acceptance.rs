//! Acceptance criteria. Each test prints one PASS/FAIL line and asserts.
//!
//! Run with `cargo test -p qwalk --test acceptance -- --nocapture` to see the
//! report lines.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use qwalk::analytics::spread_about;
use qwalk::config::{ExperimentConfig, OutputKind};
use qwalk::emit::{csv_string, json_string};
use qwalk::experiment::run_preset;
use qwalk::*;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {id:>2} {name}: {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn single_walk(params: CoinParams, steps: usize) -> (PositionDistribution, Duration) {
    let start = Instant::now();
    let initial = init_pure_walker(0, symmetric_coin_state(), steps).unwrap();
    let dist = evolve_pure(&initial, &make_coin(&params), steps)
        .unwrap()
        .position_distribution();
    (dist, start.elapsed())
}

#[test]
fn criterion_01_variance_scaling() {
    let mut ok = true;
    let mut detail = Vec::new();
    for theta in [PI / 12.0, PI / 4.0, 5.0 * PI / 12.0] {
        let (dist, elapsed) = single_walk(CoinParams::unbiased(theta).unwrap(), 100);
        // slope of σ² = c·N² from the N = 100 walk
        let slope = moments(&dist).variance / 100f64.powi(2);
        let target = 1.0 - theta.sin();
        let rel = (slope / target - 1.0).abs();
        ok &= rel <= 0.15 && elapsed < Duration::from_secs(1);
        detail.push(format!(
            "θ={theta:.4} slope={slope:.4} target={target:.4} rel={rel:.4} t={elapsed:?}"
        ));
        let fit = variance_scaling_fit(theta, &[25, 50, 75, 100]).unwrap();
        ok &= (fit.slope / target - 1.0).abs() <= 0.15;
    }
    report(1, "variance scaling", ok, detail.join("; "));
}

#[test]
fn criterion_02_support_interval() {
    let n = 100usize;
    let theta = FRAC_PI_4;
    let (dist, elapsed) = single_walk(CoinParams::hadamard(), n);
    let half = (n as f64 * theta.cos()).ceil() as i64 + 5;
    let inside = dist.mass_within(-half, half);
    let outside_n: f64 = dist
        .iter()
        .filter(|(j, _)| j.abs() > n as i64)
        .map(|(_, p)| p)
        .sum();
    let ok = inside >= 0.99 && outside_n == 0.0 && elapsed < Duration::from_secs(1);
    report(
        2,
        "support interval",
        ok,
        format!(
            "mass within ±{half} = {inside:.6}, mass beyond ±{n} = {:e}, t={elapsed:?}",
            outside_n.abs()
        ),
    );
}

#[test]
fn criterion_03_hand_oracle_distributions() {
    let (one, _) = single_walk(CoinParams::hadamard(), 1);
    let (two, _) = single_walk(CoinParams::hadamard(), 2);
    let expected_one = [(-1, 0.5), (1, 0.5)];
    let expected_two = [(-2, 0.25), (0, 0.5), (2, 0.25)];
    let err = |d: &PositionDistribution, expected: &[(i64, f64)]| {
        d.iter()
            .map(|(j, p)| {
                let e = expected
                    .iter()
                    .find(|(k, _)| *k == j)
                    .map(|(_, q)| *q)
                    .unwrap_or(0.0);
                (p - e).abs()
            })
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(&one, &expected_one), err(&two, &expected_two));
    report(
        3,
        "hand-oracle distributions",
        e1 <= 1e-12 && e2 <= 1e-12,
        format!("max error N=1 {e1:e}, N=2 {e2:e}"),
    );
}

#[test]
fn criterion_04_noiseless_density_equivalence() {
    let radius = 60;
    let n = 50;
    let coin = make_coin(&CoinParams::hadamard());
    let pure = init_pure_walker(0, symmetric_coin_state(), radius).unwrap();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for model in [
        NoiseModel::noiseless(),
        NoiseModel::new(NoiseKind::PhaseFlip, 0.0).unwrap(),
    ] {
        let rho = evolve_density(&init_density_walker(&pure), &coin, &model, n).unwrap();
        let a = position_distribution_density(&rho);
        let b = evolve_pure(&pure, &coin, n)
            .unwrap()
            .position_distribution();
        worst = worst.max(
            a.probs()
                .iter()
                .zip(b.probs())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        );
    }
    let elapsed = start.elapsed();
    report(
        4,
        "noiseless density equivalence",
        worst <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("max |ΔP| = {worst:e} at N={n}, R={radius}, t={elapsed:?}"),
    );
}

#[test]
fn criterion_05_kraus_completeness_and_trace() {
    let kinds = [
        NoiseKind::BitFlip,
        NoiseKind::PhaseFlip,
        NoiseKind::AmplitudeDamping,
    ];
    let mut worst_completeness = 0.0f64;
    for kind in kinds {
        for i in 0..=10 {
            let k = kraus_for(&NoiseModel::new(kind, i as f64 / 10.0).unwrap()).unwrap();
            worst_completeness = worst_completeness.max(k.completeness_error());
        }
    }
    let coin = make_coin(&CoinParams::hadamard());
    let rho0 = init_density_walker(&init_pure_walker(0, symmetric_coin_state(), 40).unwrap());
    let mut worst_trace = 0.0f64;
    for kind in kinds {
        for p in [0.02, 0.1, 0.5, 1.0] {
            let rho = evolve_density(&rho0, &coin, &NoiseModel::new(kind, p).unwrap(), 40).unwrap();
            worst_trace = worst_trace.max((rho.trace() - 1.0).norm());
        }
    }
    report(
        5,
        "Kraus completeness and trace preservation",
        worst_completeness <= 1e-12 && worst_trace <= 1e-10,
        format!("max ‖ΣK†K − I‖ = {worst_completeness:e}, max |tr ρ − 1| = {worst_trace:e}"),
    );
}

#[test]
fn criterion_06_noise_phenomenology() {
    let coin = make_coin(&CoinParams::hadamard());
    let n = 40;
    let rho0 = init_density_walker(&init_pure_walker(0, symmetric_coin_state(), n).unwrap());
    let run = |kind, p| {
        let rho = evolve_density(&rho0, &coin, &NoiseModel::new(kind, p).unwrap(), n).unwrap();
        moments(&position_distribution_density(&rho))
    };
    let flips: Vec<MomentReport> = [0.0, 0.02, 0.1, 0.5]
        .iter()
        .map(|&p| run(NoiseKind::PhaseFlip, p))
        .collect();
    let decreasing = flips.windows(2).all(|w| w[0].variance > w[1].variance);
    let k002 = flips[1].excess_kurtosis.unwrap();
    let k01 = flips[2].excess_kurtosis.unwrap();
    let damped = run(NoiseKind::AmplitudeDamping, 0.2);
    let clean = run(NoiseKind::None, 0.0);

    // the same ordering on the N = M = 40 ensembles the figures show
    let mut ensemble_ok = true;
    for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
        let spec = init_ensemble(40, profile).unwrap();
        let var = |p| {
            let prof = ensemble_profile(
                &spec,
                &CoinParams::hadamard(),
                &NoiseModel::new(NoiseKind::PhaseFlip, p).unwrap(),
                40,
            )
            .unwrap();
            moments(&prof.normalized().unwrap()).variance
        };
        let v: Vec<f64> = [0.0, 0.02, 0.1, 0.5].iter().map(|&p| var(p)).collect();
        ensemble_ok &= v.windows(2).all(|w| w[0] > w[1]);
    }

    let ok = decreasing
        && k01 > k002
        && damped.mean.abs() > 0.5
        && clean.mean.abs() < 1e-8
        && ensemble_ok;
    let variances: Vec<String> = flips.iter().map(|m| format!("{:.2}", m.variance)).collect();
    report(
        6,
        "noise phenomenology",
        ok,
        format!(
            "phase-flip variances [{}], kurtosis p=0.02 {k002:.4} < p=0.1 {k01:.4}, damped mean {:.4}, clean mean {:e}, ensembles ordered {ensemble_ok}",
            variances.join(", "),
            damped.mean,
            clean.mean
        ),
    );
}

#[test]
fn criterion_07_ensemble_conservation_and_fast_path() {
    let coin = CoinParams::hadamard();
    let noiseless = NoiseModel::noiseless();
    let mut worst_mass = 0.0f64;
    for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
        let spec = init_ensemble(40, profile).unwrap();
        for n in [0, 10, 25, 40] {
            for noise in [
                noiseless,
                NoiseModel::new(NoiseKind::PhaseFlip, 0.1).unwrap(),
            ] {
                let prof = ensemble_profile(&spec, &coin, &noise, n).unwrap();
                worst_mass = worst_mass.max((prof.total() - 40.0).abs());
            }
        }
    }
    let diff = |spec: &EnsembleSpec, noise: &NoiseModel, n| {
        let fast = ensemble_profile(spec, &coin, noise, n).unwrap();
        let slow = ensemble_profile_per_atom(spec, &coin, noise, n).unwrap();
        fast.values()
            .iter()
            .zip(slow.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let noises = [
        noiseless,
        NoiseModel::new(NoiseKind::BitFlip, 0.05).unwrap(),
        NoiseModel::new(NoiseKind::AmplitudeDamping, 0.2).unwrap(),
    ];
    let mut worst_fast = 0.0f64;
    for m in 1..=5 {
        for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
            let spec = init_ensemble(m, profile).unwrap();
            for noise in &noises {
                for n in 0..=10 {
                    worst_fast = worst_fast.max(diff(&spec, noise, n));
                }
            }
        }
    }
    for profile in [InitialProfile::MottInsulator, InitialProfile::Superfluid] {
        let spec = init_ensemble(40, profile).unwrap();
        worst_fast = worst_fast.max(diff(&spec, &noiseless, 40));
    }
    let mi40 = init_ensemble(40, InitialProfile::MottInsulator).unwrap();
    worst_fast = worst_fast.max(diff(
        &mi40,
        &NoiseModel::new(NoiseKind::PhaseFlip, 0.1).unwrap(),
        25,
    ));
    report(
        7,
        "ensemble conservation and fast path",
        worst_mass <= 1e-8 && worst_fast <= 1e-12,
        format!("max |Σn − M| = {worst_mass:e}, max |fast − per-atom| = {worst_fast:e}"),
    );
}

#[test]
fn criterion_08_superfluid_uniformity_and_mott_spread() {
    const TAU_THRESHOLD: f64 = 0.25;
    let coin = CoinParams::hadamard();
    let sf = init_ensemble(40, InitialProfile::Superfluid).unwrap();
    let prof = ensemble_profile(&sf, &coin, &NoiseModel::noiseless(), 25).unwrap();
    let cv = uniformity(&prof, SiteInterval::centered(20)).unwrap();

    let mi = init_ensemble(40, InitialProfile::MottInsulator).unwrap();
    let widths: Vec<u64> = [0, 10, 25, 40]
        .iter()
        .map(|&n| {
            let p = ensemble_profile(&mi, &coin, &NoiseModel::noiseless(), n).unwrap();
            profile_support(&p, 0.02).unwrap().len()
        })
        .collect();
    let monotone = widths.windows(2).all(|w| w[1] >= w[0]) && widths.last() > widths.first();
    report(
        8,
        "SF uniformity and MI spread",
        cv <= TAU_THRESHOLD && monotone,
        format!(
            "SF N=25 CV over ±20 = {cv:.4} (τ = {TAU_THRESHOLD}), MI support widths {widths:?}"
        ),
    );
}

#[test]
fn criterion_09_bias_directions() {
    let (left, _) = single_walk(CoinParams::new(PI / 6.0, PI / 6.0, 0.0).unwrap(), 100);
    let (right, _) = single_walk(CoinParams::new(0.0, PI / 6.0, PI / 6.0).unwrap(), 100);
    let (biased, _) = single_walk(CoinParams::new(PI / 6.0, FRAC_PI_4, 0.0).unwrap(), 100);
    let (plain, _) = single_walk(CoinParams::hadamard(), 100);
    let (ml, mr) = (moments(&left).mean, moments(&right).mean);
    let shift = (moments(&biased).variance / moments(&plain).variance - 1.0).abs();
    let raw_shift = (spread_about(&biased, 0) / spread_about(&plain, 0) - 1.0).abs();
    report(
        9,
        "bias directions",
        ml < 0.0 && 0.0 < mr && shift <= 0.05,
        format!(
            "mean(π/6,π/6,0) = {ml:.4}, mean(0,π/6,π/6) = {mr:.4}, variance shift ξ=π/6 vs 0 = {shift:.4} (limit 0.05; second moment about the start site shifts {raw_shift:.2e})"
        ),
    );
}

#[test]
fn criterion_10_speedup_and_crw() {
    let r = speedup_report(40, FRAC_PI_4).unwrap();
    let worst = (0..=200)
        .map(|n| (moments(&crw_distribution(n)).variance - n as f64).abs())
        .fold(0.0, f64::max);
    report(
        10,
        "speedup and classical baseline",
        r.quantum_steps == 29 && r.classical_steps == 1600 && worst <= 1e-9,
        format!(
            "QW {} vs CRW {} steps (ratio {:.2}), max |Var_crw(N) − N| = {worst:e}",
            r.quantum_steps, r.classical_steps, r.ratio
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    let mut identical = true;
    let mut compared = 0;
    for name in ["fig1", "fig3-mi", "fig5"] {
        let a = run_preset(name).unwrap();
        let b = run_preset(name).unwrap();
        identical &= json_string(&a) == json_string(&b);
        for (x, y) in a.runs.iter().zip(&b.runs) {
            identical &= csv_string(x, false) == csv_string(y, false);
            compared += 1;
        }
    }
    let cfg = ExperimentConfig::single(CoinParams::hadamard(), 60).with_outputs(&[
        OutputKind::Distribution,
        OutputKind::ScalingFit,
        OutputKind::Support,
    ]);
    let x = qwalk::experiment::run_experiment(&cfg).unwrap();
    let y = qwalk::experiment::run_experiment(&cfg).unwrap();
    identical &= json_string(&x) == json_string(&y);
    report(
        11,
        "determinism",
        identical,
        format!("{compared} preset runs and one config rerun compared byte-for-byte"),
    );
}
