//! Analytic overlaps `Λ²` and measures `E = 1 − Λ²` for the solvable state
//! families. These serve as oracles for the numerical optimizer.
//!
//! Where the value is rational in the block sizes it is computed exactly
//! with big-integer rationals. The reduced forms for general `K` leave a
//! maximization over `K` (or four) angles, solved here by a small
//! multistart coordinate ascent with exact line maximization.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::partition::{Partition, Shape};

/// Which analytic result produced a [`ClosedFormValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    GhzConstant,
    WFullSeparable,
    WBiseparable,
    /// Three blocks, largest block at least the sum of the other two.
    WTriseparableDominant,
    /// Three blocks, largest block at most the sum of the other two.
    WTriseparableBalanced,
    WReduced,
    Magnon2Biseparable,
    AsymWBiseparable,
    AsymWReduced,
    WghzReducedBiseparable,
}

impl Formula {
    pub fn tag(&self) -> &'static str {
        match self {
            Formula::GhzConstant => "ghz-constant",
            Formula::WFullSeparable => "w-full-separable",
            Formula::WBiseparable => "w-biseparable",
            Formula::WTriseparableDominant => "w-triseparable-dominant",
            Formula::WTriseparableBalanced => "w-triseparable-balanced",
            Formula::WReduced => "w-reduced-k",
            Formula::Magnon2Biseparable => "magnon2-biseparable",
            Formula::AsymWBiseparable => "asym-w-biseparable",
            Formula::AsymWReduced => "asym-w-reduced-k",
            Formula::WghzReducedBiseparable => "wghz-reduced-biseparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormValue {
    pub lambda2: f64,
    pub e_g: f64,
    /// Exact value of `e_g`, when the formula is rational.
    pub exact: Option<BigRational>,
    pub formula: Formula,
}

impl ClosedFormValue {
    fn exact(lambda2: BigRational, formula: Formula) -> Self {
        let e = BigRational::one() - &lambda2;
        Self {
            lambda2: lambda2.to_f64().expect("finite rational"),
            e_g: e.to_f64().expect("finite rational"),
            exact: Some(e),
            formula,
        }
    }

    fn numeric(lambda2: f64, formula: Formula) -> Self {
        let lambda2 = lambda2.clamp(0.0, 1.0);
        Self {
            lambda2,
            e_g: 1.0 - lambda2,
            exact: None,
            formula,
        }
    }

    /// `p/q` form of the exact value, if any.
    pub fn exact_str(&self) -> Option<String> {
        self.exact.as_ref().map(|r| format!("{}/{}", r.numer(), r.denom()))
    }
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// GHZ states sit at distance 1/2 from every K-separable set.
pub fn ghz_egk(n: usize, k: usize) -> Result<ClosedFormValue> {
    if k < 2 || k > n {
        return Err(domain(format!("need 2 <= K <= N, got K={k}, N={n}")));
    }
    Ok(ClosedFormValue::exact(ratio(1, 2), Formula::GhzConstant))
}

/// Full separability of `W^(N)`: `Λ² = ((N−1)/N)^{N−1}`.
pub fn w_full_separable(n: usize) -> Result<ClosedFormValue> {
    if n < 2 {
        return Err(domain("W state needs N >= 2"));
    }
    let exp = (n - 1) as u32;
    let num = BigInt::from(n - 1).pow(exp);
    let den = BigInt::from(n).pow(exp);
    Ok(ClosedFormValue::exact(
        BigRational::new(num, den),
        Formula::WFullSeparable,
    ))
}

/// `W^(N)` against the bipartition `M|N−M`: `E = M/N`.
pub fn w_bisep(m: usize, n: usize) -> Result<ClosedFormValue> {
    if m == 0 || 2 * m > n {
        return Err(domain(format!("need 1 <= M <= N-M, got M={m}, N={n}")));
    }
    Ok(ClosedFormValue::exact(
        ratio((n - m) as u64, n as u64),
        Formula::WBiseparable,
    ))
}

fn trisep_dominant(m3: u64, n: u64) -> BigRational {
    ratio(m3, n)
}

fn trisep_balanced(m1: u64, m2: u64, m3: u64) -> BigRational {
    let n = m1 + m2 + m3;
    let (a, b, c) = (m1 as i64, m2 as i64, m3 as i64);
    let sigma = 2 * (a * b + a * c + b * c) - a * a - b * b - c * c;
    BigRational::new(
        BigInt::from(4 * m1 * m2 * m3),
        BigInt::from(n as i64 * sigma),
    )
}

/// `W^(N)` against three blocks `M1 ≤ M2 ≤ M3`.
pub fn w_trisep(m1: usize, m2: usize, m3: usize) -> Result<ClosedFormValue> {
    if m1 == 0 || m1 > m2 || m2 > m3 {
        return Err(domain(format!(
            "need 1 <= M1 <= M2 <= M3, got {m1}|{m2}|{m3}"
        )));
    }
    let n = (m1 + m2 + m3) as u64;
    let (m1, m2, m3) = (m1 as u64, m2 as u64, m3 as u64);
    Ok(if m3 >= m1 + m2 {
        ClosedFormValue::exact(trisep_dominant(m3, n), Formula::WTriseparableDominant)
    } else {
        ClosedFormValue::exact(trisep_balanced(m1, m2, m3), Formula::WTriseparableBalanced)
    })
}

/// Both branches of the three-block formula, for continuity checks.
pub fn w_trisep_branches(m1: usize, m2: usize, m3: usize) -> (BigRational, BigRational) {
    let n = (m1 + m2 + m3) as u64;
    (
        BigRational::one() - trisep_dominant(m3 as u64, n),
        BigRational::one() - trisep_balanced(m1 as u64, m2 as u64, m3 as u64),
    )
}

/// `max Σ_s w_s sin δ_s Π_{t≠s} cos δ_t` over `δ ∈ [0, π/2]^K`, returning
/// the maximum and its argument.
pub fn max_weighted_single_excitation(weights: &[f64]) -> (f64, Vec<f64>) {
    let k = weights.len();
    let objective = |x: &[f64]| {
        let (cos, sin): (Vec<f64>, Vec<f64>) = x.iter().map(|a| (a.cos(), a.sin())).unzip();
        (0..k)
            .map(|s| {
                weights[s]
                    * sin[s]
                    * (0..k).filter(|&t| t != s).map(|t| cos[t]).product::<f64>()
            })
            .sum::<f64>()
    };
    AngleAscent::default().maximize(k, objective)
}

/// `W^(N)` against an arbitrary shape, through the reduced `K`-angle form.
pub fn w_ksep_reduced(shape: &Shape) -> ClosedFormValue {
    let weights: Vec<f64> = shape.sizes().iter().map(|&m| (m as f64).sqrt()).collect();
    let (best, _) = max_weighted_single_excitation(&weights);
    ClosedFormValue::numeric(best * best / shape.num_qubits() as f64, Formula::WReduced)
}

/// Two-excitation magnon state against `M|N−M`, in the
/// `max{C(N−M, 2), M(N−M)} / C(N, 2)` form.
pub fn magnon2_bisep(m: usize, n: usize) -> Result<ClosedFormValue> {
    if n < 4 {
        return Err(domain(format!("two-magnon formula needs N >= 4, got {n}")));
    }
    if m == 0 || 2 * m > n {
        return Err(domain(format!("need 1 <= M <= N-M, got M={m}, N={n}")));
    }
    let m2 = (n - m) as u64;
    let pairs_in_large = m2 * (m2 - 1) / 2;
    let cross = m as u64 * m2;
    let total = (n * (n - 1) / 2) as u64;
    Ok(ClosedFormValue::exact(
        ratio(pairs_in_large.max(cross), total),
        Formula::Magnon2Biseparable,
    ))
}

/// The same value written as `max{(N−M)(N−M−1), 2M(N−M)} / (N(N−1))`.
pub fn magnon2_bisep_lambda2_alt(m: usize, n: usize) -> BigRational {
    let (m, n) = (m as u64, n as u64);
    ratio(((n - m) * (n - m - 1)).max(2 * m * (n - m)), n * (n - 1))
}

fn check_block(len: usize, block: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; len];
    for &q in block {
        if q >= len || inside[q] {
            return Err(domain(format!("invalid block {block:?} for {len} qubits")));
        }
        inside[q] = true;
    }
    if block.is_empty() || block.len() == len {
        return Err(domain("block must be a nonempty proper subset"));
    }
    Ok(inside)
}

/// Asymmetric W-like state against the bipartition `A | rest`, with exact
/// rational weights. `block` lists 0-based qubits of `A`.
pub fn asym_w_bisep_exact(gamma: &[BigRational], block: &[usize]) -> Result<ClosedFormValue> {
    let inside = check_block(gamma.len(), block)?;
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for (g, &is_in) in gamma.iter().zip(&inside) {
        let sq = g * g;
        if is_in {
            a += sq;
        } else {
            b += sq;
        }
    }
    let total = &a + &b;
    if total.is_zero() {
        return Err(domain("all weights are zero"));
    }
    Ok(ClosedFormValue::exact(
        a.max(b) / total,
        Formula::AsymWBiseparable,
    ))
}

/// Float-weight variant; each `f64` weight is converted to the rational it
/// represents exactly.
pub fn asym_w_bisep(gamma: &[f64], block: &[usize]) -> Result<ClosedFormValue> {
    let exact = gamma
        .iter()
        .map(|&g| BigRational::from_float(g).ok_or_else(|| domain(format!("weight {g} is not finite"))))
        .collect::<Result<Vec<_>>>()?;
    asym_w_bisep_exact(&exact, block)
}

/// Asymmetric W-like state against any partition: each block contributes
/// the root of its summed squared weights to the reduced `K`-angle form.
pub fn asym_w_ksep_reduced(gamma: &[f64], partition: &Partition) -> Result<ClosedFormValue> {
    if partition.num_qubits() != gamma.len() {
        return Err(domain(format!(
            "partition covers {} qubits, weights cover {}",
            partition.num_qubits(),
            gamma.len()
        )));
    }
    let total: f64 = gamma.iter().map(|g| g * g).sum();
    if total == 0.0 {
        return Err(domain("all weights are zero"));
    }
    let weights: Vec<f64> = partition
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&q| gamma[q] * gamma[q]).sum::<f64>().sqrt())
        .collect();
    let (best, _) = max_weighted_single_excitation(&weights);
    Ok(ClosedFormValue::numeric(best * best / total, Formula::AsymWReduced))
}

/// `cos η |W^(N)⟩ + sin η |GHZ^(N)⟩` against `M1|M2`, through the reduced
/// form in which each block keeps only its `|0…0⟩`, `|1…1⟩` and
/// single-excitation weights.
pub fn wghz_bisep_reduced(eta: f64, m1: usize, m2: usize) -> Result<ClosedFormValue> {
    if !(0.0..=FRAC_PI_2).contains(&eta) {
        return Err(domain(format!("mixing angle {eta} outside [0, π/2]")));
    }
    if m1 == 0 || m2 == 0 {
        return Err(domain("blocks must be nonempty"));
    }
    let n = (m1 + m2) as f64;
    let cw = eta.cos() / n.sqrt();
    let cg = eta.sin() * FRAC_1_SQRT_2;
    let blocks = [m1, m2];
    // angle offsets: a size-1 block has one angle (|1⟩ is both the all-ones
    // and the single-excitation ket), larger blocks have two
    let widths: Vec<usize> = blocks.iter().map(|&m| if m == 1 { 1 } else { 2 }).collect();
    let dim = widths[0] + widths[1];
    let objective = |x: &[f64]| {
        let mut parts = [(0.0, 0.0, 0.0); 2];
        let mut off = 0;
        for (s, &m) in blocks.iter().enumerate() {
            let (c0, s0) = (x[off].cos(), x[off].sin());
            parts[s] = if m == 1 {
                (c0, s0, s0)
            } else {
                let (c1, s1) = (x[off + 1].cos(), x[off + 1].sin());
                (c0, s0 * c1, s0 * s1 * (m as f64).sqrt())
            };
            off += widths[s];
        }
        let [(a1, g1, w1), (a2, g2, w2)] = parts;
        cw * (a1 * w2 + a2 * w1) + cg * (a1 * a2 + g1 * g2)
    };
    let (best, _) = AngleAscent::default().maximize(dim, objective);
    Ok(ClosedFormValue::numeric(best * best, Formula::WghzReducedBiseparable))
}

/// Evaluates `f(δ_1..δ_M) = cos δ_1 + sin δ_1 [cos δ_2 + sin δ_2 [… cos δ_M]]`.
pub fn cascade_f(angles: &[f64]) -> f64 {
    let Some((&last, rest)) = angles.split_last() else {
        return 0.0;
    };
    rest.iter()
        .rev()
        .fold(last.cos(), |inner, a| a.cos() + a.sin() * inner)
}

/// Maximum `√M` of [`cascade_f`] and its argument
/// `δ_{M−h} = arcsin √(h/(1+h))`, `h = 0..M−1`.
pub fn cascade_max_f(m: usize) -> (f64, Vec<f64>) {
    let angles = (1..=m)
        .map(|i| {
            let h = (m - i) as f64;
            (h / (1.0 + h)).sqrt().asin()
        })
        .collect();
    ((m as f64).sqrt(), angles)
}

/// `max_δ x cos δ + y sin δ = √(x² + y²)`, attained at `atan2(y, x)`.
pub fn line_max(x: f64, y: f64) -> (f64, f64) {
    ((x * x + y * y).sqrt(), y.atan2(x))
}

/// Maximum of `x cos δ + y sin δ` restricted to `δ ∈ [0, π/2]`.
pub(crate) fn line_max_quadrant(x: f64, y: f64) -> (f64, f64) {
    let (value, angle) = line_max(x, y);
    if (0.0..=FRAC_PI_2).contains(&angle) {
        (value, angle)
    } else if x >= y {
        (x, 0.0)
    } else {
        (y, FRAC_PI_2)
    }
}

/// Multistart coordinate ascent over `[0, π/2]^d` for objectives of the
/// form `c + p cos x_i + q sin x_i` in every coordinate `i`.
#[derive(Debug, Clone)]
pub(crate) struct AngleAscent {
    pub starts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for AngleAscent {
    fn default() -> Self {
        Self {
            starts: 32,
            tol: 1e-12,
            max_sweeps: 20_000,
            seed: 0x5eed_a11e,
        }
    }
}

impl AngleAscent {
    fn climb<F: Fn(&[f64]) -> f64>(&self, f: &F, x: &mut [f64], tol: f64) -> f64 {
        let mut value = f(x);
        for _ in 0..self.max_sweeps {
            let before = value;
            for i in 0..x.len() {
                // f = c + p cos x_i + q sin x_i along the coordinate
                let keep = x[i];
                x[i] = 0.0;
                let at_zero = f(x);
                x[i] = PI;
                let at_pi = f(x);
                x[i] = FRAC_PI_2;
                let at_right = f(x);
                let c = 0.5 * (at_zero + at_pi);
                let (v, a) = line_max_quadrant(at_zero - c, at_right - c);
                let v = v + c;
                if v >= value {
                    x[i] = a;
                    value = v;
                } else {
                    x[i] = keep;
                }
            }
            if value - before <= tol {
                break;
            }
        }
        value
    }

    pub fn maximize<F: Fn(&[f64]) -> f64>(&self, dim: usize, f: F) -> (f64, Vec<f64>) {
        if dim == 0 {
            return (f(&[]), Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut best = (f64::NEG_INFINITY, vec![0.0; dim]);
        for start in 0..self.starts.max(1) {
            let mut x: Vec<f64> = match start {
                0 => vec![FRAC_PI_4; dim],
                s if s <= dim => (0..dim)
                    .map(|i| if i == s - 1 { FRAC_PI_2 * 0.9 } else { 0.1 })
                    .collect(),
                _ => (0..dim).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect(),
            };
            let v = self.climb(&f, &mut x, self.tol);
            if v > best.0 {
                best = (v, x);
            }
        }
        let (mut value, mut x) = best;
        value = self.refine(&f, &mut x, value);
        (value, x)
    }

    /// Local pattern search around the winner on shrinking scales, followed
    /// by further ascent whenever a better point turns up.
    fn refine<F: Fn(&[f64]) -> f64>(&self, f: &F, x: &mut Vec<f64>, mut value: f64) -> f64 {
        let dim = x.len();
        let mut step = 1e-2;
        while step >= 1e-7 {
            let mut improved = false;
            for i in 0..dim {
                for j in i..dim {
                    for (di, dj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        let mut y = x.clone();
                        y[i] = (y[i] + di * step).clamp(0.0, FRAC_PI_2);
                        if j != i {
                            y[j] = (y[j] + dj * step).clamp(0.0, FRAC_PI_2);
                        }
                        let v = f(&y);
                        if v > value {
                            value = self.climb(f, &mut y, 1e-15).max(v);
                            *x = y;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.1;
            }
        }
        value
    }
}
