use std::f64::consts::{FRAC_PI_2, PI};

use geoment_core::hierarchy::{
    egk_absolute, full_hierarchy, sweep_eta, HierarchyConfig, SweepFamily, SweepTarget,
};
use geoment_core::state::{asym_w, cluster4, ghz, magnon, w, StateRecipe};
use geoment_core::{OptimizerConfig, PureState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick() -> HierarchyConfig {
    HierarchyConfig {
        optimizer: OptimizerConfig {
            restarts: 12,
            ..OptimizerConfig::default()
        },
        ..HierarchyConfig::default()
    }
}

#[test]
fn hierarchies_are_monotone_for_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let n = 3 + i % 3;
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = PureState::normalized(n, amps).unwrap();
        let r = full_hierarchy(&psi, &quick()).unwrap();
        assert!(r.monotone, "{:?}", r.violations);
    }
}

#[test]
fn hierarchies_are_monotone_for_families() {
    let states = [
        w(3).unwrap(),
        w(6).unwrap(),
        ghz(5).unwrap(),
        cluster4(),
        magnon(4, 2).unwrap(),
        magnon(6, 3).unwrap(),
        StateRecipe::WghzSuperposition { n: 5, eta: 0.7 }.build().unwrap(),
        asym_w(&[0.3, 0.9, 0.5, 1.0], &[0.0, 1.0, 2.0, 3.0]).unwrap(),
    ];
    for psi in &states {
        let r = full_hierarchy(psi, &HierarchyConfig::default()).unwrap();
        assert!(r.monotone && r.violations.is_empty());
    }
}

#[test]
fn phase_independence_of_biseparable_measure() {
    let cfg = HierarchyConfig::default();
    for eta in [0.3, 0.8, 1.2] {
        let values: Vec<f64> = [0.0, FRAC_PI_2, PI]
            .iter()
            .map(|&phi| {
                sweep_eta(SweepFamily::WGhz3 { phi }, &[eta], &SweepTarget::Absolute(2), &cfg)
                    .unwrap()[0]
                    .1
            })
            .collect();
        assert!(values.iter().all(|v| (v - values[0]).abs() < 1e-7), "{values:?}");
    }
}

#[test]
fn asymmetric_phases_are_irrelevant() {
    let cfg = HierarchyConfig::default();
    let gamma = [0.4, 0.8, 0.6, 0.2];
    let flat = asym_w(&gamma, &[0.0; 4]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let xi: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let twisted = asym_w(&gamma, &xi).unwrap();
    for k in 2..=4 {
        let a = egk_absolute(&flat, k, &cfg).unwrap().absolute_e;
        let b = egk_absolute(&twisted, k, &cfg).unwrap().absolute_e;
        assert!((a - b).abs() < 1e-7, "K={k}");
    }
}

#[test]
fn cluster_degeneracy() {
    let r = full_hierarchy(&cluster4(), &HierarchyConfig::default()).unwrap();
    let two = r.level(2).unwrap();
    assert_eq!(
        two.argmin_partitions,
        ["1|2,3,4", "2|1,3,4", "3|1,2,4", "4|1,2,3", "1,2|3,4"]
    );
    assert!(!r.level(3).unwrap().argmin_partitions.is_empty());
    assert!((r.absolute(4).unwrap() - 0.75).abs() < 1e-9);
}
