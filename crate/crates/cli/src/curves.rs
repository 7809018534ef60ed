//! Datasets behind the mixing-angle curves and the asymmetric-W surfaces.

use std::f64::consts::{FRAC_PI_2, PI};

use geoment_core::closed_form::{asym_w_bisep, wghz_bisep_reduced};
use geoment_core::hierarchy::{
    egk_absolute, egk_relative, sweep_eta, HierarchyConfig, SweepFamily, SweepTarget,
};
use geoment_core::partition::set_partitions;
use geoment_core::state::asym_w;
use geoment_core::{Partition, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::output::{fmt_opt, fmt_sig};

/// Largest `N` for which the mixing-angle curves are also computed numerically.
pub const NUMERIC_CURVE_MAX_N: usize = 12;

pub const DEFAULT_CURVE_NS: [usize; 14] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 100];

#[derive(Debug, Clone)]
pub struct CurveOptions {
    /// Points on the `η` grid over `[0, π/2]`.
    pub points: usize,
    /// Points per axis on the `(γ1, γ2)` grid over `[0, 1]²`.
    pub grid: usize,
    /// Qubit counts for the `1|N−1` curves.
    pub ns: Vec<usize>,
    /// Seed for the random relative phases.
    pub seed: u64,
    /// Skip the optimizer where an analytic value exists.
    pub closed_form_only: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            points: 101,
            grid: 61,
            ns: DEFAULT_CURVE_NS.to_vec(),
            seed: 0,
            closed_form_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| if i + 1 == points { hi } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 })
            .collect(),
    }
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn column(family: SweepFamily, etas: &[f64], k: usize, config: &HierarchyConfig) -> Result<Vec<f64>> {
    Ok(sweep_eta(family, etas, &SweepTarget::Absolute(k), config)?
        .into_iter()
        .map(|(_, e)| e)
        .collect())
}

/// Random phases in `[0, π]`, one per grid point.
pub fn random_phases(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..=PI)).collect()
}

/// `E^(3)` of both three-qubit superpositions against `η`.
pub fn figure1(opts: &CurveOptions, config: &HierarchyConfig) -> Result<Dataset> {
    let etas = linspace(0.0, FRAC_PI_2, opts.points);
    let tilde = column(SweepFamily::WWTilde { phi: 0.0 }, &etas, 3, config)?;
    let zero = column(SweepFamily::WGhz3 { phi: 0.0 }, &etas, 3, config)?;
    let pi = column(SweepFamily::WGhz3 { phi: PI }, &etas, 3, config)?;
    let phases = random_phases(opts.seed, etas.len());
    let random = etas
        .par_iter()
        .zip(&phases)
        .map(|(&eta, &phi)| {
            Ok(sweep_eta(SweepFamily::WGhz3 { phi }, &[eta], &SweepTarget::Absolute(3), config)?[0].1)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Dataset {
        header: header(&["eta", "w_wtilde", "w_ghz_phi0", "w_ghz_phipi", "phi_random", "w_ghz_phirandom"]),
        rows: (0..etas.len())
            .map(|i| {
                [etas[i], tilde[i], zero[i], pi[i], phases[i], random[i]]
                    .iter()
                    .map(|&x| fmt_sig(x))
                    .collect()
            })
            .collect(),
    })
}

/// `E^(2)` of both three-qubit superpositions against `η`.
pub fn figure2(opts: &CurveOptions, config: &HierarchyConfig) -> Result<Dataset> {
    let etas = linspace(0.0, FRAC_PI_2, opts.points);
    let mut cols = vec![column(SweepFamily::WWTilde { phi: 0.0 }, &etas, 2, config)?];
    for phi in [0.0, FRAC_PI_2, PI] {
        cols.push(column(SweepFamily::WGhz3 { phi }, &etas, 2, config)?);
    }
    Ok(Dataset {
        header: header(&["eta", "w_wtilde", "w_ghz_phi0", "w_ghz_phihalfpi", "w_ghz_phipi"]),
        rows: (0..etas.len())
            .map(|i| {
                std::iter::once(etas[i])
                    .chain(cols.iter().map(|c| c[i]))
                    .map(fmt_sig)
                    .collect()
            })
            .collect(),
    })
}

/// `E^(2)(1|N−1)` of `cos η |W⟩ + sin η |GHZ⟩` for each requested `N`.
pub fn figure3(opts: &CurveOptions, config: &HierarchyConfig) -> Result<Dataset> {
    let etas = linspace(0.0, FRAC_PI_2, opts.points);
    let mut rows = Vec::new();
    for &n in &opts.ns {
        if n < 2 {
            return Err(geoment_core::Error::Domain(format!("N = {n} is too small for a 1|N-1 cut")));
        }
        let closed = etas
            .iter()
            .map(|&eta| Ok(wghz_bisep_reduced(eta, 1, n - 1)?.e_g))
            .collect::<Result<Vec<f64>>>()?;
        let numeric = if opts.closed_form_only || n > NUMERIC_CURVE_MAX_N {
            vec![None; etas.len()]
        } else {
            let cut = Partition::new(vec![vec![0], (1..n).collect()], n)?;
            sweep_eta(SweepFamily::Wghz { n }, &etas, &SweepTarget::Relative(cut), config)?
                .into_iter()
                .map(|(_, e)| Some(e))
                .collect()
        };
        for i in 0..etas.len() {
            rows.push(vec![
                n.to_string(),
                fmt_sig(etas[i]),
                fmt_sig(closed[i]),
                fmt_opt(numeric[i]),
            ]);
        }
    }
    Ok(Dataset {
        header: header(&["n", "eta", "e_closed_form", "e_numeric"]),
        rows,
    })
}

#[derive(Debug, Clone, Copy)]
enum Surface {
    /// Relative measure for a fixed 0-based first block.
    Relative(&'static [usize]),
    /// Minimum over all bipartitions.
    Absolute,
}

fn surface(
    opts: &CurveOptions,
    config: &HierarchyConfig,
    tail: &[f64],
    kind: Surface,
) -> Result<Dataset> {
    let axis = linspace(0.0, 1.0, opts.grid);
    let n = 2 + tail.len();
    let points: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&g1| axis.iter().map(move |&g2| (g1, g2)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(g1, g2)| {
            let mut gamma = vec![g1, g2];
            gamma.extend_from_slice(tail);
            let closed = match kind {
                Surface::Relative(block) => asym_w_bisep(&gamma, block)?.e_g,
                Surface::Absolute => set_partitions(n, 2)?
                    .map(|p| Ok(asym_w_bisep(&gamma, &p.blocks()[0])?.e_g))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min),
            };
            let numeric = if opts.closed_form_only {
                None
            } else {
                let psi = asym_w(&gamma, &vec![0.0; n])?;
                Some(match kind {
                    Surface::Relative(block) => {
                        let rest = (0..n).filter(|q| !block.contains(q)).collect();
                        let p = Partition::new(vec![block.to_vec(), rest], n)?;
                        egk_relative(&psi, &p, &config.optimizer)?.e_g
                    }
                    Surface::Absolute => egk_absolute(&psi, 2, config)?.absolute_e,
                })
            };
            Ok(vec![fmt_sig(g1), fmt_sig(g2), fmt_sig(closed), fmt_opt(numeric)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        header: header(&["gamma1", "gamma2", "e_closed_form", "e_numeric"]),
        rows,
    })
}

pub fn figure(id: u8, opts: &CurveOptions, config: &HierarchyConfig) -> Result<Dataset> {
    if opts.points < 2 || opts.grid < 2 {
        return Err(geoment_core::Error::Domain("grid resolution must be at least 2".into()));
    }
    match id {
        1 => figure1(opts, config),
        2 => figure2(opts, config),
        3 => figure3(opts, config),
        4 => surface(opts, config, &[0.5], Surface::Relative(&[0])),
        5 => surface(opts, config, &[0.5], Surface::Absolute),
        6 => surface(opts, config, &[2.0 / 3.0, 1.0 / 6.0], Surface::Relative(&[0])),
        7 => surface(opts, config, &[2.0 / 3.0, 1.0 / 6.0], Surface::Relative(&[0, 1])),
        _ => Err(geoment_core::Error::Domain(format!("unknown figure {id}, expected 1-7"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 3), [0.0, 0.5, 1.0]);
        let e = linspace(0.0, FRAC_PI_2, 101);
        assert_eq!(e.len(), 101);
        assert_eq!(e[100], FRAC_PI_2);
    }

    #[test]
    fn phases_are_reproducible() {
        let a = random_phases(4, 10);
        assert_eq!(a, random_phases(4, 10));
        assert!(a.iter().all(|p| (0.0..=PI).contains(p)));
        assert_ne!(a, random_phases(5, 10));
    }
}
