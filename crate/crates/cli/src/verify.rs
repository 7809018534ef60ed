//! Self-check suite: published tables, analytic values, structural laws and
//! oracle agreement. Reports are plain text and contain no timings, so runs
//! with the same seed produce identical bytes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::fmt::Write as _;

use geoment_core::closed_form::{
    cascade_f, cascade_max_f, ghz_egk, line_max, magnon2_bisep, magnon2_bisep_lambda2_alt,
    w_full_separable, wghz_bisep_reduced,
};
use geoment_core::hierarchy::{
    egk_absolute, egk_relative, full_hierarchy, scale_invariance_check, sweep_eta,
    HierarchyConfig, HierarchyReport, ScaleFamily, SweepFamily, SweepTarget,
};
use geoment_core::optimizer::{best_overlap, grid_oracle};
use geoment_core::partition::set_partitions;
use geoment_core::state::{asym_w, cluster4, ghz, magnon, w, StateRecipe};
use geoment_core::{Partition, PureState, Result, Shape};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curves::linspace;
use crate::output::fmt_sig;
use crate::tables::{self, TableId};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces the tolerances of the table comparisons.
    pub numeric_tolerance: Option<f64>,
    /// Random four- and five-qubit states for the monotonicity suite.
    pub random_states: usize,
    /// Random three-qubit states compared against the grid oracle.
    pub oracle_states: usize,
    /// Points on the mixing-angle grids.
    pub eta_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            numeric_tolerance: None,
            random_states: 200,
            oracle_states: 20,
            eta_points: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: String,
}

impl Check {
    fn new(suite: impl Into<String>, name: impl Into<String>, value: f64, reference: f64, tol: f64) -> Self {
        let diff = (value - reference).abs();
        Self {
            suite: suite.into(),
            name: name.into(),
            value,
            reference,
            tol,
            pass: diff <= tol,
            note: String::new(),
        }
    }

    /// A check on a nonnegative defect (violation size, deviation spread).
    fn bound(suite: impl Into<String>, name: impl Into<String>, defect: f64, tol: f64) -> Self {
        let mut c = Self::new(suite, name, defect, 0.0, tol);
        c.pass = defect <= tol;
        c
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn diff(&self) -> f64 {
        (self.value - self.reference).abs()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(
                out,
                "{} {} {} value={} reference={} diff={} tol={:e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                fmt_sig(c.value),
                fmt_sig(c.reference),
                fmt_sig(c.diff()),
                c.tol
            );
            if !c.note.is_empty() {
                let _ = write!(out, " ({})", c.note);
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "checks: {}, failed: {}", self.checks.len(), failed);
        out
    }
}

pub fn table_checks(table: TableId, config: &HierarchyConfig, tol: Option<f64>) -> Result<Vec<Check>> {
    let suite = format!("table-{}", table.label());
    let mut checks = Vec::new();
    for row in tables::compute(table, config)? {
        let label = format!("{} {}", row.state, row.shape);
        let published_tol = tol.unwrap_or(row.published.tolerance());
        checks.push(
            Check::new(&suite, format!("{label} vs published"), row.numeric, row.published.value, published_tol)
                .with_note(format!("published {}", row.published.text)),
        );
        if let Some(cf) = &row.closed_form {
            checks.push(
                Check::new(&suite, format!("{label} vs formula"), row.numeric, cf.e_g, tol.unwrap_or(tables::REDUCED_TOL))
                    .with_note(cf.formula.tag()),
            );
        }
        if let Some(agrees) = row.exact_agrees() {
            let mut c = Check::new(&suite, format!("{label} exact"), row.closed_form.as_ref().unwrap().e_g, row.published.value, 0.0);
            c.pass = agrees;
            checks.push(c.with_note(format!("{} = {}", row.exact_str().unwrap_or_default(), row.published.text)));
        }
    }
    if table == TableId::IV {
        checks.push(cluster_degeneracy(config)?);
    }
    Ok(checks)
}

/// Distinct shapes realizing the minimum at `K = 2` and `K = 3` for the
/// cluster state; three are expected (`1|3`, `2|2`, `1|1|2`).
fn cluster_degeneracy(config: &HierarchyConfig) -> Result<Check> {
    let r = full_hierarchy(&cluster4(), config)?;
    let mut found = Vec::new();
    let mut listed = Vec::new();
    for k in [2, 3] {
        let level = r.level(k).expect("level present");
        for p in &level.argmin_partitions {
            let shape = Partition::parse(p, 4)?.shape().to_string();
            if !found.contains(&shape) {
                found.push(shape);
            }
            listed.push(p.clone());
        }
    }
    let at_half = [2, 3].iter().all(|&k| (r.absolute(k).unwrap() - 0.5).abs() <= tables::EXACT_TOL);
    let mut c = Check::new("table-IV", "cluster4 minimizing shapes", found.len() as f64, 3.0, 0.0);
    c.pass &= at_half;
    Ok(c.with_note(listed.join(" ")))
}

pub fn separability_checks(config: &HierarchyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 3..=8 {
        let full = Shape::new(vec![1; n])?.contiguous_partition();
        let e = egk_relative(&w(n)?, &full, &config.optimizer)?.e_g;
        let cf = w_full_separable(n)?;
        checks.push(
            Check::new("separability", format!("w{n} full"), e, cf.e_g, 1e-7)
                .with_note(cf.exact_str().unwrap_or_default()),
        );
    }
    for n in 2..=8 {
        let psi = ghz(n)?;
        for k in 2..=n {
            let e = egk_absolute(&psi, k, config)?.absolute_e;
            checks.push(Check::new("separability", format!("ghz{n} K={k}"), e, ghz_egk(n, k)?.e_g, 1e-9));
        }
    }
    Ok(checks)
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> PureState {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PureState::normalized(n, amps).expect("random amplitudes are nonzero")
}

/// Largest `E^(K−1) − E^(K)` in a report, zero when the law holds.
fn worst_violation(r: &HierarchyReport) -> f64 {
    r.levels
        .windows(2)
        .map(|w| w[0].absolute_e - w[1].absolute_e)
        .fold(0.0, f64::max)
}

pub fn family_states() -> Result<Vec<(String, PureState)>> {
    let mut out = Vec::new();
    for n in 3..=6 {
        out.push((format!("w{n}"), w(n)?));
        out.push((format!("ghz{n}"), ghz(n)?));
        out.push((format!("wghz{n} eta=pi/6"), StateRecipe::WghzSuperposition { n, eta: FRAC_PI_6 }.build()?));
    }
    for n in 4..=6 {
        out.push((format!("magnon{n}_2"), magnon(n, 2)?));
    }
    out.push(("magnon6_3".into(), magnon(6, 3)?));
    out.push(("cluster4".into(), cluster4()));
    out.push(("w_wtilde eta=pi/4".into(), StateRecipe::WWTildeSuperposition { eta: PI / 4.0, phi: 0.0 }.build()?));
    out.push(("w_ghz3 eta=pi/3 phi=pi/2".into(), StateRecipe::WGhz3Superposition { eta: PI / 3.0, phi: FRAC_PI_2 }.build()?));
    out.push(("asym_w3".into(), asym_w(&[0.5, 0.5, 1.0], &[0.0; 3])?));
    out.push(("asym_w4".into(), asym_w(&[0.5, 0.9, 2.0 / 3.0, 1.0 / 6.0], &[0.0, 1.0, 2.0, 3.0])?));
    Ok(out)
}

pub fn monotonicity_checks(config: &HierarchyConfig, seed: u64, random_states: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, psi) in family_states()? {
        let r = full_hierarchy(&psi, config)?;
        checks.push(Check::bound("monotonicity", name, worst_violation(&r), 1e-9));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<PureState> = (0..random_states).map(|i| random_state(4 + i % 2, &mut rng)).collect();
    let worst = states
        .par_iter()
        .map(|psi| Ok(worst_violation(&full_hierarchy(psi, config)?)))
        .collect::<Result<Vec<f64>>>()?;
    let offenders: Vec<String> = worst
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 1e-9)
        .map(|(i, v)| format!("state {i}: {}", fmt_sig(*v)))
        .collect();
    checks.push(
        Check::bound(
            "monotonicity",
            format!("{random_states} random states"),
            worst.iter().copied().fold(0.0, f64::max),
            1e-9,
        )
        .with_note(offenders.join("; ")),
    );
    Ok(checks)
}

pub fn scale_checks(config: &HierarchyConfig) -> Result<Vec<Check>> {
    let cases = [
        ("w", ScaleFamily::W, "1|2"),
        ("w", ScaleFamily::W, "1|1|1"),
        ("w", ScaleFamily::W, "1|3"),
        ("magnon2", ScaleFamily::Magnon2, "1|3"),
        ("wghz eta=pi/6", ScaleFamily::Wghz { eta: FRAC_PI_6 }, "1|2"),
    ];
    cases
        .iter()
        .map(|&(name, family, shape)| {
            let c = scale_invariance_check(family, &shape.parse()?, 2, config)?;
            Ok(Check::new(
                "scale-invariance",
                format!("{name} {} vs {}", c.shape, c.scaled_shape),
                c.e_scaled,
                c.e,
                1e-7,
            ))
        })
        .collect()
}

/// Largest drop between consecutive values, zero for a non-decreasing list.
fn worst_drop(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
}

pub fn curve_checks(config: &HierarchyConfig, eta_points: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let e3 = |family: SweepFamily, eta: f64| -> Result<f64> {
        Ok(sweep_eta(family, &[eta], &SweepTarget::Absolute(3), config)?[0].1)
    };
    for (name, family) in [
        ("w_wtilde", SweepFamily::WWTilde { phi: 0.0 }),
        ("w_ghz phi=0", SweepFamily::WGhz3 { phi: 0.0 }),
        ("w_ghz phi=pi", SweepFamily::WGhz3 { phi: PI }),
    ] {
        checks.push(Check::new("curves", format!("{name} E3 at eta=0"), e3(family, 0.0)?, 5.0 / 9.0, 1e-6));
    }
    checks.push(Check::new(
        "curves",
        "w_wtilde E3 at eta=pi/2",
        e3(SweepFamily::WWTilde { phi: 0.0 }, FRAC_PI_2)?,
        5.0 / 9.0,
        1e-6,
    ));

    let etas = linspace(0.0, FRAC_PI_2, eta_points.min(21).max(2));
    let by_phi = [0.0, FRAC_PI_2, PI]
        .iter()
        .map(|&phi| {
            Ok(sweep_eta(SweepFamily::WGhz3 { phi }, &etas, &SweepTarget::Absolute(2), config)?
                .into_iter()
                .map(|(_, e)| e)
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let spread = (0..etas.len())
        .map(|i| {
            let col = by_phi.iter().map(|c| c[i]);
            col.clone().fold(f64::NEG_INFINITY, f64::max) - col.fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    checks.push(Check::bound("curves", "w_ghz E2 spread over phi in {0, pi/2, pi}", spread, 1e-7));

    let etas = linspace(0.0, FRAC_PI_2, eta_points.max(2));
    for n in 4..=10 {
        let cut = Partition::new(vec![vec![0], (1..n).collect()], n)?;
        let curve: Vec<f64> = sweep_eta(SweepFamily::Wghz { n }, &etas, &SweepTarget::Relative(cut), config)?
            .into_iter()
            .map(|(_, e)| e)
            .collect();
        checks.push(Check::bound("curves", format!("wghz{n} 1|{} monotone", n - 1), worst_drop(&curve), 1e-9));
        checks.push(Check::new("curves", format!("wghz{n} 1|{} at eta=0", n - 1), curve[0], 1.0 / n as f64, 1e-6));
        checks.push(Check::new("curves", format!("wghz{n} 1|{} at eta=pi/2", n - 1), *curve.last().unwrap(), 0.5, 1e-6));
        let formula_gap = etas
            .iter()
            .zip(&curve)
            .map(|(&eta, &e)| Ok((wghz_bisep_reduced(eta, 1, n - 1)?.e_g - e).abs()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::bound("curves", format!("wghz{n} 1|{} vs formula", n - 1), formula_gap, 1e-7));
    }
    Ok(checks)
}

pub fn oracle_checks(config: &HierarchyConfig, seed: u64, count: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0ac1e);
    let states: Vec<PureState> = (0..count).map(|_| random_state(3, &mut rng)).collect();
    let resolution = config.optimizer.grid_resolution;
    states
        .par_iter()
        .enumerate()
        .map(|(i, psi)| {
            let mut worst: f64 = 0.0;
            for p in set_partitions(3, 2)? {
                let ascent = best_overlap(psi, &p, &config.optimizer)?.lambda2;
                let grid = grid_oracle(psi, &p, resolution)?.lambda2;
                worst = worst.max((ascent - grid).abs());
            }
            Ok(Check::bound("oracle", format!("random state {i}"), worst, 1e-3))
        })
        .collect()
}

/// Coarse full grid of the cascade function followed by golden-section
/// coordinate sweeps.
pub fn cascade_grid_max(m: usize) -> f64 {
    let res: usize = match m {
        1 => 400,
        2 => 200,
        3 => 60,
        4 => 24,
        _ => 10,
    };
    let pts = linspace(0.0, FRAC_PI_2, res);
    let mut idx = vec![0usize; m];
    let mut best = (f64::NEG_INFINITY, vec![0.0; m]);
    'grid: loop {
        let x: Vec<f64> = idx.iter().map(|&i| pts[i]).collect();
        let v = cascade_f(&x);
        if v > best.0 {
            best = (v, x);
        }
        for d in 0..m {
            idx[d] += 1;
            if idx[d] < res {
                continue 'grid;
            }
            idx[d] = 0;
        }
        break;
    }
    let (mut value, mut x) = best;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        for i in 0..m {
            let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
            for _ in 0..80 {
                let a = hi - ratio * (hi - lo);
                let b = lo + ratio * (hi - lo);
                x[i] = a;
                let fa = cascade_f(&x);
                x[i] = b;
                let fb = cascade_f(&x);
                if fa > fb {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            x[i] = 0.5 * (lo + hi);
            value = value.max(cascade_f(&x));
        }
    }
    value
}

pub fn lemma_checks(config: &HierarchyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 1..=6 {
        let (max, _) = cascade_max_f(m);
        checks.push(Check::new("lemmas", format!("cascade M={m} squared"), max * max, m as f64, 1e-12));
        let grid = cascade_grid_max(m);
        checks.push(Check::new("lemmas", format!("cascade M={m} vs grid"), grid * grid, m as f64, 1e-6));
    }
    let (mut value_defect, mut attained_defect): (f64, f64) = (0.0, 0.0);
    for (x, y) in [(1.0, 0.0), (0.0, 1.0), (3.0, 4.0), (0.3, 0.7), (-0.2, 0.9), (1e-3, 2.5)] {
        let (v, a) = line_max(x, y);
        let direct = (x * x + y * y).sqrt();
        value_defect = value_defect.max((v - direct).abs());
        attained_defect = attained_defect.max((x * a.cos() + y * a.sin() - direct).abs());
    }
    checks.push(Check::bound("lemmas", "line maximum value", value_defect, 0.0));
    checks.push(Check::bound("lemmas", "line maximum argument", attained_defect, 1e-14));
    for (m, n) in [(1, 4), (2, 4), (1, 5), (2, 5), (2, 6), (3, 6)] {
        let p = Shape::new(vec![m, n - m])?.contiguous_partition();
        let numeric = egk_relative(&magnon(n, 2)?, &p, &config.optimizer)?.lambda2;
        let lambda2 = 1.0 - magnon2_bisep(m, n)?.e_g;
        checks.push(Check::new("lemmas", format!("magnon{n}_2 {m}|{} pair count", n - m), numeric, lambda2, 1e-7));
        let exact = magnon2_bisep(m, n)?.exact.expect("rational formula");
        let mut c = Check::new("lemmas", format!("magnon{n}_2 {m}|{} two forms", n - m), lambda2, lambda2, 0.0);
        c.pass = BigRational::one() - exact == magnon2_bisep_lambda2_alt(m, n);
        checks.push(c);
    }
    Ok(checks)
}

pub fn run(config: &HierarchyConfig, opts: &VerifyOptions) -> Result<Report> {
    let mut checks = Vec::new();
    for t in TableId::ALL {
        checks.extend(table_checks(t, config, opts.numeric_tolerance)?);
    }
    checks.extend(separability_checks(config)?);
    checks.extend(monotonicity_checks(config, opts.seed, opts.random_states)?);
    checks.extend(scale_checks(config)?);
    checks.extend(curve_checks(config, opts.eta_points)?);
    checks.extend(oracle_checks(config, opts.seed, opts.oracle_states)?);
    checks.extend(lemma_checks(config)?);
    Ok(Report { checks })
}
