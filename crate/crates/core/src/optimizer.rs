//! Maximization of `|⟨Φ|Ψ⟩|²` over product states `Φ` aligned with a fixed
//! partition.
//!
//! Each restart runs alternating ascent: one block factor at a time is set
//! to the normalized contraction of `Ψ` with the other factors, which is the
//! exact optimum for that block. The overlap never decreases. Restarts run
//! on the rayon pool and the winner is picked by a deterministic fold, so
//! results do not depend on the number of workers.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::partition::Partition;
use crate::state::PureState;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Contractions with a norm below this are treated as zero.
const DEGENERATE_NORM: f64 = 1e-14;

/// Amplitudes below this are skipped when fixing the factor phase.
const GAUGE_EPS: f64 = 1e-12;

/// Largest number of gridded real parameters accepted by [`grid_oracle`].
pub const GRID_MAX_PARAMS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    partition: Partition,
    factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    pub fn new(partition: Partition, factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.len() != partition.num_blocks() {
            return Err(Error::Shape(format!(
                "{} factors for {} blocks",
                factors.len(),
                partition.num_blocks()
            )));
        }
        for (s, (f, b)) in factors.iter().zip(partition.blocks()).enumerate() {
            if f.len() != 1 << b.len() {
                return Err(Error::Shape(format!(
                    "factor {s} has dimension {}, block needs {}",
                    f.len(),
                    1usize << b.len()
                )));
            }
            let n2 = f.iter().map(Complex64::norm_sqr).sum::<f64>();
            if (n2 - 1.0).abs() > 1e-12 {
                return Err(domain(format!("factor {s} has norm² {n2}")));
            }
        }
        Ok(Self { partition, factors })
    }

    /// Product of uniform superpositions.
    pub fn uniform(partition: &Partition) -> Self {
        let factors = partition
            .blocks()
            .iter()
            .map(|b| {
                let d = 1usize << b.len();
                vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d]
            })
            .collect();
        Self {
            partition: partition.clone(),
            factors,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn factor(&self, s: usize) -> &[Complex64] {
        &self.factors[s]
    }

    /// Full `2^N` amplitude vector of the product.
    pub fn to_state(&self) -> Result<PureState> {
        let n = self.partition.num_qubits();
        let index = BlockIndex::dense(n, &self.partition);
        let k = self.factors.len();
        let amps = (0..1usize << n)
            .map(|j| {
                (0..k)
                    .map(|s| self.factors[s][index.loc[j * k + s] as usize])
                    .product()
            })
            .collect();
        PureState::normalized(n, amps)
    }

    /// `⟨Φ|Ψ⟩`.
    pub fn overlap(&self, psi: &PureState) -> Result<Complex64> {
        check_inputs(psi, &self.partition)?;
        let index = BlockIndex::new(psi, &self.partition);
        Ok(index.overlap(&self.factors))
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub grid_resolution: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 10_000,
            tolerance: 1e-12,
            seed: 0,
            grid_resolution: 40,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.grid_resolution < 2 {
            return Err(domain("restarts and iterations must be positive, grid resolution >= 2"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(domain(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(())
    }

    pub fn with_restarts(&self, restarts: usize) -> Self {
        Self {
            restarts,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapResult {
    pub lambda2: f64,
    pub e_g: f64,
    pub argmax: ProductState,
    pub partition: Partition,
    /// Sweeps taken by the winning restart.
    pub iterations: usize,
    pub converged: bool,
    /// Index of the winning restart.
    pub restart: usize,
    /// Zero-contraction steps replaced by random factors, over all restarts.
    pub degenerate_steps: usize,
}

impl OverlapResult {
    fn from_lambda2(lambda2: f64, argmax: ProductState) -> Self {
        let lambda2 = lambda2.clamp(0.0, 1.0);
        Self {
            lambda2,
            e_g: 1.0 - lambda2,
            partition: argmax.partition.clone(),
            argmax,
            iterations: 0,
            converged: true,
            restart: 0,
            degenerate_steps: 0,
        }
    }
}

/// Block-local indices of the nonzero amplitudes of `Ψ`.
#[derive(Debug, Clone)]
struct BlockIndex {
    k: usize,
    dims: Vec<usize>,
    amps: Vec<Complex64>,
    /// `loc[i * k + s]`: index of support entry `i` inside block `s`.
    loc: Vec<u32>,
}

impl BlockIndex {
    fn local_indices(n: usize, partition: &Partition, j: usize, out: &mut Vec<u32>) {
        for block in partition.blocks() {
            let mut l = 0u32;
            for &q in block {
                l = (l << 1) | ((j >> (n - 1 - q)) & 1) as u32;
            }
            out.push(l);
        }
    }

    fn new(psi: &PureState, partition: &Partition) -> Self {
        let n = psi.num_qubits();
        let k = partition.num_blocks();
        let mut amps = Vec::new();
        let mut loc = Vec::new();
        for (j, &a) in psi.amplitudes().iter().enumerate() {
            if a != ZERO {
                amps.push(a);
                Self::local_indices(n, partition, j, &mut loc);
            }
        }
        Self {
            k,
            dims: partition.blocks().iter().map(|b| 1 << b.len()).collect(),
            amps,
            loc,
        }
    }

    fn dense(n: usize, partition: &Partition) -> Self {
        let mut loc = Vec::with_capacity(partition.num_blocks() << n);
        for j in 0..1usize << n {
            Self::local_indices(n, partition, j, &mut loc);
        }
        Self {
            k: partition.num_blocks(),
            dims: partition.blocks().iter().map(|b| 1 << b.len()).collect(),
            amps: Vec::new(),
            loc,
        }
    }

    /// `Σ_j ψ_j Π_{t≠s} conj(φ_t)` as a vector over block `s`.
    fn contract(&self, factors: &[Vec<Complex64>], s: usize, out: &mut Vec<Complex64>) {
        out.clear();
        out.resize(self.dims[s], ZERO);
        let k = self.k;
        for (i, &a) in self.amps.iter().enumerate() {
            let row = &self.loc[i * k..(i + 1) * k];
            let mut w = a;
            for (t, &l) in row.iter().enumerate() {
                if t != s {
                    w *= factors[t][l as usize].conj();
                }
            }
            out[row[s] as usize] += w;
        }
    }

    fn overlap(&self, factors: &[Vec<Complex64>]) -> Complex64 {
        let k = self.k;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let row = &self.loc[i * k..(i + 1) * k];
                row.iter()
                    .enumerate()
                    .fold(a, |w, (t, &l)| w * factors[t][l as usize].conj())
            })
            .sum()
    }
}

fn check_inputs(psi: &PureState, partition: &Partition) -> Result<()> {
    if partition.num_qubits() != psi.num_qubits() {
        return Err(domain(format!(
            "partition covers {} qubits, state has {}",
            partition.num_qubits(),
            psi.num_qubits()
        )));
    }
    let n2 = psi.norm_sqr();
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(domain(format!("state norm² is {n2}, expected 1")));
    }
    Ok(())
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Rotates the vector so its first non-negligible entry is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    if let Some(a) = v.iter().find(|a| a.norm() > GAUGE_EPS).copied() {
        let rot = a.conj() / a.norm();
        for x in v.iter_mut() {
            *x *= rot;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorUpdate {
    pub factor: Vec<Complex64>,
    /// `|⟨Φ|Ψ⟩|` after the update.
    pub modulus: f64,
    pub degenerate: bool,
}

fn update_in_place(
    index: &BlockIndex,
    factors: &mut [Vec<Complex64>],
    s: usize,
    scratch: &mut Vec<Complex64>,
    rng: &mut ChaCha8Rng,
) -> (f64, bool) {
    index.contract(factors, s, scratch);
    let norm = scratch.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if norm < DEGENERATE_NORM {
        factors[s] = random_unit(index.dims[s], rng);
        fix_phase(&mut factors[s]);
        return (norm, true);
    }
    let f = &mut factors[s];
    for (x, c) in f.iter_mut().zip(scratch.iter()) {
        *x = c / norm;
    }
    fix_phase(f);
    (norm, false)
}

/// Optimal replacement of factor `s` given all other factors.
pub fn update_factor(
    psi: &PureState,
    product: &ProductState,
    s: usize,
    rng: &mut ChaCha8Rng,
) -> Result<FactorUpdate> {
    check_inputs(psi, &product.partition)?;
    if s >= product.factors.len() {
        return Err(Error::Index {
            index: s,
            bound: product.factors.len(),
        });
    }
    let index = BlockIndex::new(psi, &product.partition);
    let mut factors = product.factors.clone();
    let mut scratch = Vec::new();
    let (modulus, degenerate) = update_in_place(&index, &mut factors, s, &mut scratch, rng);
    Ok(FactorUpdate {
        factor: factors.swap_remove(s),
        modulus,
        degenerate,
    })
}

struct RestartOutcome {
    lambda2: f64,
    factors: Vec<Vec<Complex64>>,
    iterations: usize,
    converged: bool,
    degenerate_steps: usize,
}

/// Support indices of `Ψ` by decreasing modulus, ties by index.
fn ranked_support(psi: &PureState) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..psi.dim()).filter(|&j| psi.amplitude(j) != ZERO).collect();
    idx.sort_by(|&a, &b| {
        psi.amplitude(b)
            .norm_sqr()
            .total_cmp(&psi.amplitude(a).norm_sqr())
            .then(a.cmp(&b))
    });
    idx
}

fn initial_factors(
    psi: &PureState,
    partition: &Partition,
    ranked: &[usize],
    restart: usize,
    deterministic: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Complex64>> {
    if restart == 0 {
        return ProductState::uniform(partition).factors;
    }
    if restart < deterministic && restart - 1 < ranked.len() {
        // computational-basis product through a large amplitude of Ψ
        let mut loc = Vec::new();
        BlockIndex::local_indices(psi.num_qubits(), partition, ranked[restart - 1], &mut loc);
        return partition
            .blocks()
            .iter()
            .zip(loc)
            .map(|(b, l)| {
                let mut f = vec![ZERO; 1 << b.len()];
                f[l as usize] = Complex64::new(1.0, 0.0);
                f
            })
            .collect();
    }
    partition
        .blocks()
        .iter()
        .map(|b| random_unit(1 << b.len(), rng))
        .collect()
}

fn run_restart(
    psi: &PureState,
    partition: &Partition,
    index: &BlockIndex,
    ranked: &[usize],
    config: &OptimizerConfig,
    restart: usize,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let deterministic = config.restarts.div_ceil(2);
    let mut factors = initial_factors(psi, partition, ranked, restart, deterministic, &mut rng);
    let k = factors.len();
    let mut scratch = Vec::new();
    let mut lambda2 = index.overlap(&factors).norm_sqr();
    let mut degenerate_steps = 0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let before = lambda2;
        let mut reinjected = false;
        for s in 0..k {
            let (modulus, degenerate) =
                update_in_place(index, &mut factors, s, &mut scratch, &mut rng);
            if degenerate {
                degenerate_steps += 1;
                reinjected = true;
                lambda2 = index.overlap(&factors).norm_sqr();
            } else {
                lambda2 = modulus * modulus;
            }
        }
        debug_assert!(reinjected || lambda2 >= before - 1e-12, "ascent lost {before} -> {lambda2}");
        if !reinjected && lambda2 - before < config.tolerance {
            converged = true;
            break;
        }
    }
    RestartOutcome {
        lambda2,
        factors,
        iterations,
        converged,
        degenerate_steps,
    }
}

/// Largest `|⟨Φ|Ψ⟩|²` found over the configured restarts.
pub fn best_overlap(
    psi: &PureState,
    partition: &Partition,
    config: &OptimizerConfig,
) -> Result<OverlapResult> {
    config.validate()?;
    check_inputs(psi, partition)?;
    let index = BlockIndex::new(psi, partition);
    let ranked = ranked_support(psi);
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(psi, partition, &index, &ranked, config, r))
        .collect();
    let degenerate_steps = outcomes.iter().map(|o| o.degenerate_steps).sum();
    let (restart, best) = outcomes
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.lambda2 > a.1.lambda2 { b } else { a })
        .expect("at least one restart");
    let argmax = ProductState {
        partition: partition.clone(),
        factors: best.factors,
    };
    let mut result = OverlapResult::from_lambda2(best.lambda2, argmax);
    result.iterations = best.iterations;
    result.converged = best.converged;
    result.restart = restart;
    result.degenerate_steps = degenerate_steps;
    Ok(result)
}

/// Unit vector from hyperspherical angles and phases (`φ_0 = 0`).
fn grid_vector(angles: &[f64], phases: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut prefix = 1.0;
    for (l, &a) in angles.iter().enumerate() {
        let r = prefix * a.cos();
        out.push(if l == 0 { Complex64::new(r, 0.0) } else { Complex64::from_polar(r, phases[l - 1]) });
        prefix *= a.sin();
    }
    out.push(match angles.len() {
        0 => Complex64::new(1.0, 0.0),
        d => Complex64::from_polar(prefix, phases[d - 1]),
    });
    out
}

/// Reshaped amplitude matrix of `Ψ` across a bipartition, `rows[a][b]`.
fn bipartite_rows(psi: &PureState, small: &[usize], large: &[usize]) -> Vec<Vec<Complex64>> {
    let n = psi.num_qubits();
    let bit = |j: usize, q: usize| (j >> (n - 1 - q)) & 1;
    let mut rows = vec![vec![ZERO; 1 << large.len()]; 1 << small.len()];
    for (j, &amp) in psi.amplitudes().iter().enumerate() {
        let a = small.iter().fold(0, |acc, &q| (acc << 1) | bit(j, q));
        let b = large.iter().fold(0, |acc, &q| (acc << 1) | bit(j, q));
        rows[a][b] = amp;
    }
    rows
}

struct GridSearch<'a> {
    rows: &'a [Vec<Complex64>],
    res: usize,
    angle_grid: Vec<(f64, f64)>,
    phase_grid: Vec<Complex64>,
    best: f64,
    best_at: Vec<usize>,
    path: Vec<usize>,
}

impl GridSearch<'_> {
    /// Nested loops over `δ_0, (φ_1, δ_1), …, φ_{d−1}`, accumulating the
    /// partial contraction `Σ_a conj(v_a) · row_a` level by level.
    fn descend(&mut self, level: usize, prefix: f64, partial: &[Complex64]) {
        let d = self.rows.len();
        let last = d - 1;
        if level == last {
            // v_{d−1} = prefix · e^{iφ_{d−1}}; level 0 has no phase when d = 1
            let phases = if last == 0 { 1 } else { self.res };
            for p in 0..phases {
                let w = if last == 0 {
                    Complex64::new(prefix, 0.0)
                } else {
                    self.phase_grid[p].conj() * prefix
                };
                let value: f64 = partial
                    .iter()
                    .zip(&self.rows[last])
                    .map(|(c, r)| (c + w * r).norm_sqr())
                    .sum();
                if value > self.best {
                    self.best = value;
                    self.best_at = self.path.clone();
                    if last > 0 {
                        self.best_at.push(p);
                    }
                }
            }
            return;
        }
        let phases = if level == 0 { 1 } else { self.res };
        let mut next = vec![ZERO; partial.len()];
        for p in 0..phases {
            for a in 0..self.res {
                let (cos, sin) = self.angle_grid[a];
                let w = if level == 0 {
                    Complex64::new(prefix * cos, 0.0)
                } else {
                    self.phase_grid[p].conj() * (prefix * cos)
                };
                for ((x, c), r) in next.iter_mut().zip(partial).zip(&self.rows[level]) {
                    *x = c + w * r;
                }
                if level > 0 {
                    self.path.push(p);
                }
                self.path.push(a);
                self.descend(level + 1, prefix * sin, &next);
                self.path.pop();
                if level > 0 {
                    self.path.pop();
                }
            }
        }
    }
}

/// Brute-force reference maximizer for bipartitions: the smaller block is
/// gridded in hyperspherical angles and phases, the larger block is solved
/// exactly, and the best grid point is polished by pattern search.
pub fn grid_oracle(psi: &PureState, partition: &Partition, resolution: usize) -> Result<OverlapResult> {
    check_inputs(psi, partition)?;
    if partition.num_blocks() != 2 {
        return Err(Error::Cap("grid oracle handles bipartitions only".into()));
    }
    if resolution < 2 {
        return Err(domain("grid resolution must be at least 2"));
    }
    let (small, large) = (&partition.blocks()[0], &partition.blocks()[1]);
    let d = 1usize << small.len();
    let params = 2 * (d - 1);
    if params > GRID_MAX_PARAMS {
        return Err(Error::Cap(format!(
            "grid oracle over {params} parameters exceeds the limit of {GRID_MAX_PARAMS}"
        )));
    }
    let rows = bipartite_rows(psi, small, large);
    let angle_grid = (0..resolution)
        .map(|i| {
            let a = FRAC_PI_2 * i as f64 / (resolution - 1) as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let phase_grid = (0..resolution)
        .map(|i| Complex64::from_polar(1.0, TAU * i as f64 / resolution as f64))
        .collect();
    let mut search = GridSearch {
        rows: &rows,
        res: resolution,
        angle_grid,
        phase_grid,
        best: f64::NEG_INFINITY,
        best_at: Vec::new(),
        path: Vec::new(),
    };
    let zero = vec![ZERO; rows[0].len()];
    search.descend(0, 1.0, &zero);

    // decode path [δ_0, (φ_1, δ_1), …, φ_{d−1}] into angle and phase lists
    let angle_step = FRAC_PI_2 / (resolution - 1) as f64;
    let phase_step = TAU / resolution as f64;
    let mut angles = Vec::with_capacity(d - 1);
    let mut phases = Vec::with_capacity(d - 1);
    let mut it = search.best_at.iter();
    for level in 0..d - 1 {
        if level > 0 {
            phases.push(*it.next().unwrap() as f64 * phase_step);
        }
        angles.push(*it.next().unwrap() as f64 * angle_step);
    }
    if d > 1 {
        phases.push(*it.next().unwrap() as f64 * phase_step);
    }

    let value_of = |angles: &[f64], phases: &[f64]| -> f64 {
        let v = grid_vector(angles, phases);
        (0..rows[0].len())
            .map(|b| {
                v.iter()
                    .zip(&rows)
                    .map(|(x, row)| x.conj() * row[b])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    };
    let mut value = value_of(&angles, &phases);
    let mut step = angle_step.max(phase_step);
    while step > 1e-10 {
        let mut improved = false;
        for p in 0..params {
            for sign in [1.0, -1.0] {
                let (mut a, mut ph) = (angles.clone(), phases.clone());
                if p < angles.len() {
                    a[p] = (a[p] + sign * step).clamp(0.0, FRAC_PI_2);
                } else {
                    ph[p - angles.len()] += sign * step;
                }
                let v = value_of(&a, &ph);
                if v > value {
                    value = v;
                    angles = a;
                    phases = ph;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let small_factor = grid_vector(&angles, &phases);
    let mut large_factor: Vec<Complex64> = (0..rows[0].len())
        .map(|b| small_factor.iter().zip(&rows).map(|(x, row)| x.conj() * row[b]).sum())
        .collect();
    let norm = value.sqrt();
    if norm > DEGENERATE_NORM {
        for x in &mut large_factor {
            *x /= norm;
        }
    } else {
        large_factor = vec![ZERO; large_factor.len()];
        large_factor[0] = Complex64::new(1.0, 0.0);
    }
    let argmax = ProductState {
        partition: partition.clone(),
        factors: vec![small_factor, large_factor],
    };
    Ok(OverlapResult::from_lambda2(value, argmax))
}
