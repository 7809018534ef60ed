//! Absolute measures `E_G^(K)`, full `K = 2..N` hierarchies, and the
//! structural checks built on them (symmetry, monotonicity, scale
//! invariance, mixing-angle sweeps).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::optimizer::{best_overlap, OptimizerConfig, OverlapResult};
use crate::partition::{set_partitions, shapes, Partition, Shape};
use crate::state::{self, PureState, StateRecipe};

/// Amplitude tolerance for permutation symmetry.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Values within this of the minimum count as minimizers.
pub const ARGMIN_TOL: f64 = 1e-9;

/// Slack allowed before `E^(K−1) > E^(K)` counts as a violation.
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HierarchyConfig {
    pub optimizer: OptimizerConfig,
    /// Largest `N` for which every set partition is scanned.
    pub full_scan_cap: usize,
    /// Largest `N` for which one partition per shape is scanned.
    pub shape_scan_cap: usize,
    /// Scan shapes only, even for states that are not symmetric.
    pub shapes_only: bool,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            full_scan_cap: 8,
            shape_scan_cap: 14,
            shapes_only: false,
        }
    }
}

/// True when `ψ` is unchanged by every adjacent transposition of qubits.
pub fn is_symmetric(psi: &PureState) -> bool {
    let n = psi.num_qubits();
    (0..n.saturating_sub(1)).all(|p| {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.swap(p, p + 1);
        let swapped = state::permute_qubits(psi, &sigma).expect("valid transposition");
        psi.max_abs_diff(&swapped).expect("same size") <= SYMMETRY_TOL
    })
}

/// Relative measure `E(Q_1|…|Q_K)` for one partition.
pub fn egk_relative(
    psi: &PureState,
    partition: &Partition,
    config: &OptimizerConfig,
) -> Result<OverlapResult> {
    best_overlap(psi, partition, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scan {
    /// Every set partition with `K` blocks.
    Partitions,
    /// One contiguous representative per shape.
    Shapes,
}

#[derive(Debug, Clone)]
pub struct RelativeEntry {
    /// Shape label for shape scans, partition label otherwise.
    pub label: String,
    pub partition: Partition,
    pub e: f64,
}

#[derive(Debug, Clone)]
pub struct AbsoluteResult {
    pub k: usize,
    pub absolute_e: f64,
    pub argmin: Vec<Partition>,
    pub relative: Vec<RelativeEntry>,
    pub scan: Scan,
}

impl AbsoluteResult {
    pub fn argmin_labels(&self) -> Vec<String> {
        self.argmin.iter().map(ToString::to_string).collect()
    }
}

fn choose_scan(psi: &PureState, config: &HierarchyConfig) -> Result<Scan> {
    let n = psi.num_qubits();
    let scan = if config.shapes_only || is_symmetric(psi) {
        Scan::Shapes
    } else {
        Scan::Partitions
    };
    match scan {
        Scan::Partitions if n > config.full_scan_cap => Err(Error::Cap(format!(
            "full partition scan limited to N <= {}, state has N = {n}; \
             use a shape-only scan (--shapes-only) for larger states",
            config.full_scan_cap
        ))),
        Scan::Shapes if n > config.shape_scan_cap => Err(Error::Cap(format!(
            "shape scan limited to N <= {}, state has N = {n}",
            config.shape_scan_cap
        ))),
        s => Ok(s),
    }
}

fn candidates(n: usize, k: usize, scan: Scan) -> Result<Vec<(String, Partition)>> {
    Ok(match scan {
        Scan::Shapes => shapes(n, k)?
            .into_iter()
            .map(|s| (s.to_string(), s.contiguous_partition()))
            .collect(),
        Scan::Partitions => set_partitions(n, k)?
            .map(|p| (p.to_string(), p))
            .collect(),
    })
}

fn absolute_from(k: usize, scan: Scan, relative: Vec<RelativeEntry>) -> AbsoluteResult {
    let absolute_e = relative.iter().map(|r| r.e).fold(f64::INFINITY, f64::min);
    let mut argmin: Vec<Partition> = relative
        .iter()
        .filter(|r| r.e <= absolute_e + ARGMIN_TOL)
        .map(|r| r.partition.clone())
        .collect();
    argmin.sort_by(|a, b| {
        let key = |p: &Partition| (p.shape().sizes().to_vec(), p.blocks().to_vec());
        key(a).cmp(&key(b))
    });
    AbsoluteResult {
        k,
        absolute_e,
        argmin,
        relative,
        scan,
    }
}

fn scan_level(
    psi: &PureState,
    k: usize,
    scan: Scan,
    config: &OptimizerConfig,
) -> Result<AbsoluteResult> {
    let cands = candidates(psi.num_qubits(), k, scan)?;
    let relative = cands
        .into_par_iter()
        .map(|(label, partition)| {
            let r = egk_relative(psi, &partition, config)?;
            Ok(RelativeEntry {
                label,
                partition,
                e: r.e_g,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(absolute_from(k, scan, relative))
}

/// `E_G^(K)`: minimum of the relative measure over all `K`-block
/// partitions, or over one partition per shape for symmetric states.
pub fn egk_absolute(psi: &PureState, k: usize, config: &HierarchyConfig) -> Result<AbsoluteResult> {
    let n = psi.num_qubits();
    if k < 2 || k > n {
        return Err(domain(format!("need 2 <= K <= N, got K={k}, N={n}")));
    }
    let scan = choose_scan(psi, config)?;
    scan_level(psi, k, scan, &config.optimizer)
}

/// Minimum of the relative measure over the partitions of one shape.
pub fn egk_shape(psi: &PureState, shape: &Shape, config: &HierarchyConfig) -> Result<AbsoluteResult> {
    let n = psi.num_qubits();
    if shape.num_qubits() != n {
        return Err(domain(format!("shape {shape} does not cover {n} qubits")));
    }
    let k = shape.num_blocks();
    let scan = choose_scan(psi, config)?;
    let cands = match scan {
        Scan::Shapes => vec![(shape.to_string(), shape.contiguous_partition())],
        Scan::Partitions => set_partitions(n, k)?
            .filter(|p| &p.shape() == shape)
            .map(|p| (p.to_string(), p))
            .collect(),
    };
    let relative = cands
        .into_par_iter()
        .map(|(label, partition)| {
            let r = egk_relative(psi, &partition, &config.optimizer)?;
            Ok(RelativeEntry {
                label,
                partition,
                e: r.e_g,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(absolute_from(k, scan, relative))
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub absolute_e: f64,
    pub argmin_partitions: Vec<String>,
    pub relative: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyReport {
    pub n: usize,
    pub symmetric: bool,
    pub scan: Scan,
    pub levels: Vec<LevelReport>,
    pub monotone: bool,
    /// Remaining violations of `E^(K−1) ≤ E^(K)`, reported at the upper `K`.
    pub violations: Vec<Violation>,
    /// Levels that were recomputed with more restarts.
    pub reruns: Vec<usize>,
}

impl HierarchyReport {
    pub fn level(&self, k: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.k == k)
    }

    pub fn absolute(&self, k: usize) -> Option<f64> {
        self.level(k).map(|l| l.absolute_e)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn first_violation(levels: &[AbsoluteResult]) -> Option<usize> {
    levels
        .windows(2)
        .position(|w| w[0].absolute_e > w[1].absolute_e + MONOTONE_TOL)
}

/// `E_G^(K)` for `K = 2..N`. A level that breaks monotonicity is recomputed
/// once with four times the restarts, keeping the better value per
/// partition; violations that survive are reported.
pub fn full_hierarchy(psi: &PureState, config: &HierarchyConfig) -> Result<HierarchyReport> {
    let n = psi.num_qubits();
    let symmetric = is_symmetric(psi);
    let scan = choose_scan(psi, config)?;
    let mut levels = (2..=n)
        .map(|k| scan_level(psi, k, scan, &config.optimizer))
        .collect::<Result<Vec<_>>>()?;
    let mut reruns = Vec::new();
    let boosted = config.optimizer.with_restarts(config.optimizer.restarts * 4);
    // the lower level of a violating pair is the one whose overlap fell short
    while let Some(i) = first_violation(&levels) {
        let k = levels[i].k;
        if reruns.contains(&k) {
            break;
        }
        reruns.push(k);
        let again = scan_level(psi, k, scan, &boosted)?;
        let merged = levels[i]
            .relative
            .iter()
            .zip(again.relative)
            .map(|(old, new)| if new.e < old.e { new } else { old.clone() })
            .collect();
        levels[i] = absolute_from(k, scan, merged);
    }
    let violations: Vec<Violation> = levels
        .windows(2)
        .filter(|w| w[0].absolute_e > w[1].absolute_e + MONOTONE_TOL)
        .map(|w| Violation {
            k: w[1].k,
            lower: w[0].absolute_e,
            upper: w[1].absolute_e,
        })
        .collect();
    reruns.sort_unstable();
    Ok(HierarchyReport {
        n,
        symmetric,
        scan,
        monotone: violations.is_empty(),
        violations,
        reruns,
        levels: levels
            .into_iter()
            .map(|l| LevelReport {
                k: l.k,
                absolute_e: l.absolute_e,
                argmin_partitions: l.argmin_labels(),
                relative: l.relative.into_iter().map(|r| (r.label, r.e)).collect(),
            })
            .collect(),
    })
}

/// State families with a scale-invariant measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleFamily {
    W,
    Magnon2,
    Wghz { eta: f64 },
}

impl ScaleFamily {
    pub fn build(&self, n: usize) -> Result<PureState> {
        match *self {
            ScaleFamily::W => state::w(n),
            ScaleFamily::Magnon2 => state::magnon(n, 2),
            ScaleFamily::Wghz { eta } => StateRecipe::WghzSuperposition { n, eta }.build(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleComparison {
    pub shape: String,
    pub scaled_shape: String,
    pub e: f64,
    pub e_scaled: f64,
    pub difference: f64,
}

/// Relative measure of `shape` on the `N`-qubit family member against that
/// of the `L`-scaled shape on the `L·N`-qubit member.
pub fn scale_invariance_check(
    family: ScaleFamily,
    shape: &Shape,
    factor: usize,
    config: &HierarchyConfig,
) -> Result<ScaleComparison> {
    let scaled = shape.scale(factor)?;
    if scaled.num_qubits() > config.shape_scan_cap {
        return Err(Error::Cap(format!(
            "scaled state has {} qubits, limit is {}",
            scaled.num_qubits(),
            config.shape_scan_cap
        )));
    }
    let e_of = |s: &Shape| -> Result<f64> {
        let psi = family.build(s.num_qubits())?;
        Ok(egk_relative(&psi, &s.contiguous_partition(), &config.optimizer)?.e_g)
    };
    let e = e_of(shape)?;
    let e_scaled = e_of(&scaled)?;
    Ok(ScaleComparison {
        shape: shape.to_string(),
        scaled_shape: scaled.to_string(),
        e,
        e_scaled,
        difference: (e - e_scaled).abs(),
    })
}

/// Families swept over the mixing angle `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    /// `cos η |W⟩ + e^{iφ} sin η |W̃⟩`, three qubits.
    WWTilde { phi: f64 },
    /// `cos η |W⟩ + e^{iφ} sin η |GHZ⟩`, three qubits.
    WGhz3 { phi: f64 },
    /// `cos η |W⟩ + sin η |GHZ⟩` on `n` qubits.
    Wghz { n: usize },
}

impl SweepFamily {
    pub fn num_qubits(&self) -> usize {
        match self {
            SweepFamily::Wghz { n } => *n,
            _ => 3,
        }
    }

    pub fn build(&self, eta: f64) -> Result<PureState> {
        match *self {
            SweepFamily::WWTilde { phi } => StateRecipe::WWTildeSuperposition { eta, phi }.build(),
            SweepFamily::WGhz3 { phi } => StateRecipe::WGhz3Superposition { eta, phi }.build(),
            SweepFamily::Wghz { n } => StateRecipe::WghzSuperposition { n, eta }.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepTarget {
    Absolute(usize),
    Relative(Partition),
}

/// `(η, E)` pairs along the grid.
pub fn sweep_eta(
    family: SweepFamily,
    etas: &[f64],
    target: &SweepTarget,
    config: &HierarchyConfig,
) -> Result<Vec<(f64, f64)>> {
    if let Some(e) = etas.iter().find(|e| !(0.0..=std::f64::consts::FRAC_PI_2).contains(*e)) {
        return Err(domain(format!("mixing angle {e} outside [0, π/2]")));
    }
    etas.par_iter()
        .map(|&eta| {
            let psi = family.build(eta)?;
            let e = match target {
                SweepTarget::Absolute(k) => egk_absolute(&psi, *k, config)?.absolute_e,
                SweepTarget::Relative(p) => egk_relative(&psi, p, &config.optimizer)?.e_g,
            };
            Ok((eta, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{asym_w, cluster4, ghz, magnon, w};

    fn cfg() -> HierarchyConfig {
        HierarchyConfig::default()
    }

    #[test]
    fn symmetry_detection() {
        assert!(is_symmetric(&w(5).unwrap()));
        assert!(is_symmetric(&ghz(4).unwrap()));
        assert!(!is_symmetric(&cluster4()));
        assert!(!is_symmetric(&asym_w(&[0.5, 0.5, 1.0], &[0.0; 3]).unwrap()));
    }

    #[test]
    fn relative_examples() {
        let c = OptimizerConfig::default();
        let w6 = w(6).unwrap();
        let e = |t: &str| {
            let p = t.parse::<Shape>().unwrap().contiguous_partition();
            egk_relative(&w6, &p, &c).unwrap().e_g
        };
        assert!((e("2|4") - 1.0 / 3.0).abs() < 1e-9);
        assert!((e("1|2|3") - 0.5).abs() < 1e-9);
        let p = "1|1|2".parse::<Shape>().unwrap().contiguous_partition();
        let m = egk_relative(&magnon(4, 2).unwrap(), &p, &c).unwrap().e_g;
        assert!((m - 7.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn absolute_examples() {
        let r = egk_absolute(&w(4).unwrap(), 2, &cfg()).unwrap();
        assert!((r.absolute_e - 0.25).abs() < 1e-9);
        assert_eq!(r.scan, Scan::Shapes);
        assert_eq!(r.argmin_labels(), ["1|2,3,4"]);
        let r = egk_absolute(&cluster4(), 3, &cfg()).unwrap();
        assert!((r.absolute_e - 0.5).abs() < 1e-9);
        assert_eq!(r.scan, Scan::Partitions);
        for k in 2..=5 {
            let r = egk_absolute(&ghz(5).unwrap(), k, &cfg()).unwrap();
            assert!((r.absolute_e - 0.5).abs() < 1e-9);
        }
        assert!(egk_absolute(&w(4).unwrap(), 5, &cfg()).is_err());
        assert!(egk_absolute(&w(4).unwrap(), 1, &cfg()).is_err());
    }

    #[test]
    fn shape_minimum() {
        let s = |t: &str| t.parse::<Shape>().unwrap();
        let r = egk_shape(&cluster4(), &s("2|2"), &cfg()).unwrap();
        assert_eq!(r.relative.len(), 3);
        assert!((r.absolute_e - 0.5).abs() < 1e-9);
        assert_eq!(r.argmin_labels(), ["1,2|3,4"]);
        let r = egk_shape(&w(5).unwrap(), &s("1|2|2"), &cfg()).unwrap();
        assert_eq!(r.relative.len(), 1);
        assert!((r.absolute_e - 19.0 / 35.0).abs() < 1e-9);
        assert!(egk_shape(&w(5).unwrap(), &s("1|2"), &cfg()).is_err());
    }

    #[test]
    fn shape_scan_agrees_with_full_scan() {
        for psi in [w(4).unwrap(), magnon(4, 2).unwrap()] {
            for k in 2..=4 {
                let shapes = scan_level(&psi, k, Scan::Shapes, &OptimizerConfig::default()).unwrap();
                let full = scan_level(&psi, k, Scan::Partitions, &OptimizerConfig::default()).unwrap();
                assert!((shapes.absolute_e - full.absolute_e).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hierarchies() {
        let r = full_hierarchy(&w(5).unwrap(), &cfg()).unwrap();
        let want = [0.2, 0.4, 0.559, 0.590];
        for (k, want) in (2..=5).zip(want) {
            assert!((r.absolute(k).unwrap() - want).abs() < 5e-4, "K={k}");
        }
        assert!(r.monotone && r.symmetric);
        let r = full_hierarchy(&cluster4(), &cfg()).unwrap();
        for (k, want) in [(2, 0.5), (3, 0.5), (4, 0.75)] {
            assert!((r.absolute(k).unwrap() - want).abs() < 1e-9);
        }
        let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        let lvl = &json["levels"][0];
        assert_eq!(lvl["k"], 2);
        assert!(lvl["argmin_partitions"].as_array().unwrap().len() >= 2);
        assert_eq!(lvl["relative"].as_object().unwrap().len(), 7);
        let r = full_hierarchy(&ghz(4).unwrap(), &cfg()).unwrap();
        assert!(r.levels.iter().all(|l| (l.absolute_e - 0.5).abs() < 1e-9));
    }

    #[test]
    fn caps() {
        let small = HierarchyConfig {
            full_scan_cap: 3,
            ..cfg()
        };
        assert!(matches!(full_hierarchy(&cluster4(), &small), Err(Error::Cap(_))));
        let shapes_only = HierarchyConfig {
            shapes_only: true,
            ..small
        };
        let r = full_hierarchy(&cluster4(), &shapes_only).unwrap();
        assert_eq!(r.scan, Scan::Shapes);
    }

    #[test]
    fn relative_measures_need_not_be_ordered() {
        let w6 = w(6).unwrap();
        let c = OptimizerConfig::default();
        let p = |t: &str| t.parse::<Shape>().unwrap().contiguous_partition();
        let a = egk_relative(&w6, &p("2|2|2"), &c).unwrap().e_g;
        let b = egk_relative(&w6, &p("1|1|1|3"), &c).unwrap().e_g;
        assert!((a - 5.0 / 9.0).abs() < 1e-9 && (b - 0.5).abs() < 1e-9);
        assert!(a > b);
    }

    #[test]
    fn scale_invariance() {
        let s = |t: &str| t.parse::<Shape>().unwrap();
        let c = scale_invariance_check(ScaleFamily::W, &s("1|2"), 2, &cfg()).unwrap();
        assert!((c.e - 1.0 / 3.0).abs() < 1e-9 && c.difference < 1e-7);
        let c = scale_invariance_check(ScaleFamily::W, &s("1|1|1"), 2, &cfg()).unwrap();
        assert!((c.e_scaled - 5.0 / 9.0).abs() < 1e-9 && c.difference < 1e-7);
        let c = scale_invariance_check(ScaleFamily::Magnon2, &s("1|3"), 1, &cfg()).unwrap();
        assert_eq!(c.difference, 0.0);
        assert!(scale_invariance_check(ScaleFamily::W, &s("1|3"), 4, &cfg()).is_err());
    }

    #[test]
    fn eta_sweeps() {
        let ends = [0.0, std::f64::consts::FRAC_PI_2];
        let r = sweep_eta(SweepFamily::WWTilde { phi: 0.3 }, &ends, &SweepTarget::Absolute(3), &cfg())
            .unwrap();
        assert!(r.iter().all(|(_, e)| (e - 5.0 / 9.0).abs() < 1e-9));
        let r = sweep_eta(SweepFamily::WGhz3 { phi: 1.0 }, &[0.0], &SweepTarget::Absolute(3), &cfg())
            .unwrap();
        assert!((r[0].1 - 5.0 / 9.0).abs() < 1e-9);
        assert!(sweep_eta(SweepFamily::Wghz { n: 4 }, &[2.0], &SweepTarget::Absolute(2), &cfg()).is_err());
    }
}
