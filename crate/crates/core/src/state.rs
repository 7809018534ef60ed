//! Dense N-qubit pure states and the state families studied here.
//!
//! Amplitudes are indexed by the binary multi-index `J`: qubit `p`
//! (0-based, left to right in the ket) carries bit weight `2^(N-1-p)`, so
//! `|q_0 q_1 … q_{N-1}⟩` has index `Σ_p q_p 2^(N-1-p)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance on `Σ|c_J|² = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// Default upper bound on the number of qubits of a dense state.
pub const MAX_QUBITS: usize = 20;

const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from raw amplitudes, rejecting wrong lengths and
    /// non-unit norms.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::Shape(format!(
                "{} amplitudes given, expected 2^{} = {}",
                amplitudes.len(),
                num_qubits,
                dim
            )));
        }
        let norm2 = norm_sqr(&amplitudes);
        if !norm2.is_finite() || (norm2 - 1.0).abs() > NORM_TOL {
            return Err(domain(format!("state norm² is {norm2}, expected 1")));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state from amplitudes after rescaling them to unit norm.
    pub fn normalized(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::Shape(format!(
                "{} amplitudes given, expected {}",
                amplitudes.len(),
                dim
            )));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::Degenerate("zero amplitude vector".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Number of amplitudes with modulus above `eps`.
    pub fn support_size(&self, eps: f64) -> usize {
        self.amplitudes.iter().filter(|c| c.norm() > eps).count()
    }

    /// Largest amplitude-wise distance to another state of the same size.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        same_size(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("a state needs at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::Cap(format!(
            "{n} qubits exceeds the dense-state limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum()
}

fn same_size(a: &PureState, b: &PureState) -> Result<()> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::Shape(format!(
            "states have {} and {} qubits",
            a.num_qubits, b.num_qubits
        )));
    }
    Ok(())
}

/// Bit of qubit `p` in index `j` of an `n`-qubit register.
#[inline]
pub fn qubit_bit(j: usize, n: usize, p: usize) -> usize {
    (j >> (n - 1 - p)) & 1
}

pub fn basis_ket(n: usize, index: usize) -> Result<PureState> {
    check_qubits(n)?;
    let dim = 1usize << n;
    if index >= dim {
        return Err(Error::Index { index, bound: dim });
    }
    let mut amps = vec![C0; dim];
    amps[index] = C1;
    PureState::new(n, amps)
}

fn min_two(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("{what} needs at least two qubits, got {n}")));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<PureState> {
    min_two(n, "GHZ state")?;
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut amps = vec![C0; dim];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(n, amps)
}

/// Uniform superposition of the `n` single-excitation kets.
pub fn w(n: usize) -> Result<PureState> {
    min_two(n, "W state")?;
    magnon(n, 1)
}

/// `(|110⟩ + |101⟩ + |011⟩)/√3`.
pub fn w_tilde3() -> PureState {
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = vec![C0; 8];
    for j in [3, 5, 6] {
        amps[j] = a;
    }
    PureState::new(3, amps).expect("W-tilde is normalized")
}

/// Four-qubit linear cluster state `(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2`.
pub fn cluster4() -> PureState {
    let mut amps = vec![C0; 16];
    amps[0] = Complex64::new(0.5, 0.0);
    amps[3] = Complex64::new(0.5, 0.0);
    amps[12] = Complex64::new(0.5, 0.0);
    amps[15] = Complex64::new(-0.5, 0.0);
    PureState::new(4, amps).expect("cluster state is normalized")
}

/// Symmetric `k`-excitation (Dicke) state on `n` qubits.
pub fn magnon(n: usize, k: usize) -> Result<PureState> {
    check_qubits(n)?;
    if k == 0 || k >= n {
        return Err(domain(format!(
            "excitation count must satisfy 1 <= k <= n-1, got k={k}, n={n}"
        )));
    }
    let dim = 1usize << n;
    let support = binomial(n, k);
    let a = Complex64::new(1.0 / (support as f64).sqrt(), 0.0);
    let amps = (0..dim)
        .map(|j| if j.count_ones() as usize == k { a } else { C0 })
        .collect();
    PureState::new(n, amps)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `a·ψ1 + b·e^{i·phase}·ψ2`, renormalized.
pub fn superpose(
    a: f64,
    psi1: &PureState,
    b: f64,
    phase: f64,
    psi2: &PureState,
) -> Result<PureState> {
    same_size(psi1, psi2)?;
    let rot = Complex64::from_polar(b, phase);
    let amps: Vec<Complex64> = psi1
        .amplitudes
        .iter()
        .zip(&psi2.amplitudes)
        .map(|(x, y)| x * a + y * rot)
        .collect();
    if norm_sqr(&amps) < 1e-24 {
        return Err(Error::Degenerate("superposition vanishes".into()));
    }
    PureState::normalized(psi1.num_qubits, amps)
}

/// Asymmetric W-like state `𝒩 Σ_i γ_i e^{iξ_i} |e_i⟩`, where `|e_i⟩` has its
/// single excitation on qubit `i` (0-based here, index `2^(N-1-i)`).
pub fn asym_w(gamma: &[f64], xi: &[f64]) -> Result<PureState> {
    let n = gamma.len();
    min_two(n, "asymmetric W state")?;
    check_qubits(n)?;
    if xi.len() != n {
        return Err(Error::Shape(format!(
            "{} weights but {} phases",
            n,
            xi.len()
        )));
    }
    if let Some(g) = gamma.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(domain(format!("weight {g} outside [0, 1]")));
    }
    if let Some(x) = xi.iter().find(|x| !(0.0..=2.0 * PI).contains(*x)) {
        return Err(domain(format!("phase {x} outside [0, 2π]")));
    }
    let total: f64 = gamma.iter().map(|g| g * g).sum();
    if total == 0.0 {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    let norm = total.sqrt();
    let mut amps = vec![C0; 1 << n];
    for (i, (&g, &x)) in gamma.iter().zip(xi).enumerate() {
        amps[1 << (n - 1 - i)] = Complex64::from_polar(g / norm, x);
    }
    PureState::new(n, amps)
}

/// `⟨φ|ψ⟩ = Σ_J conj(φ_J) ψ_J`.
pub fn overlap(psi: &PureState, phi: &PureState) -> Result<Complex64> {
    same_size(psi, phi)?;
    Ok(phi
        .amplitudes
        .iter()
        .zip(&psi.amplitudes)
        .map(|(p, s)| p.conj() * s)
        .sum())
}

/// Relabels qubits: qubit `p` of `psi` becomes qubit `sigma[p]` of the result.
pub fn permute_qubits(psi: &PureState, sigma: &[usize]) -> Result<PureState> {
    let n = psi.num_qubits;
    check_permutation(sigma, n)?;
    let mut amps = vec![C0; psi.dim()];
    for (j, &c) in psi.amplitudes.iter().enumerate() {
        let mut target = 0usize;
        for (p, &dest) in sigma.iter().enumerate() {
            target |= qubit_bit(j, n, p) << (n - 1 - dest);
        }
        amps[target] = c;
    }
    Ok(PureState {
        num_qubits: n,
        amplitudes: amps,
    })
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(domain(format!(
            "permutation has {} entries for {} qubits",
            sigma.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &d in sigma {
        if d >= n || seen[d] {
            return Err(domain(format!("{sigma:?} is not a permutation of 0..{n}")));
        }
        seen[d] = true;
    }
    Ok(())
}

/// Splits `j` into `(j1, j2)` with `j = 2^m2·j1 + j2`.
pub fn split_index(j: usize, m1: usize, m2: usize) -> Result<(usize, usize)> {
    let bound = 1usize
        .checked_shl((m1 + m2) as u32)
        .filter(|_| m1 + m2 < usize::BITS as usize)
        .ok_or_else(|| domain("block sizes too large"))?;
    if j >= bound {
        return Err(Error::Index { index: j, bound });
    }
    Ok((j >> m2, j & ((1usize << m2) - 1)))
}

/// Parametrized description of a state, echoed into state files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateRecipe {
    Ghz { n: usize },
    W { n: usize },
    WTilde,
    Cluster4,
    Magnon { n: usize, k: usize },
    /// `cos η |W⟩ + sin η |GHZ⟩` on `n` qubits.
    WghzSuperposition { n: usize, eta: f64 },
    /// `cos η |W⟩ + e^{iφ} sin η |W̃⟩` on three qubits.
    WWTildeSuperposition { eta: f64, phi: f64 },
    /// `cos η |W⟩ + e^{iφ} sin η |GHZ⟩` on three qubits.
    WGhz3Superposition { eta: f64, phi: f64 },
    AsymW { gamma: Vec<f64>, xi: Vec<f64> },
    Explicit { n: usize, amplitudes: Vec<[f64; 2]> },
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&eta) {
        return Err(domain(format!("mixing angle {eta} outside [0, π/2]")));
    }
    Ok(())
}

fn check_phase(phi: f64) -> Result<()> {
    if !(0.0..=2.0 * PI).contains(&phi) {
        return Err(domain(format!("phase {phi} outside [0, 2π]")));
    }
    Ok(())
}

impl StateRecipe {
    pub fn build(&self) -> Result<PureState> {
        match self {
            StateRecipe::Ghz { n } => ghz(*n),
            StateRecipe::W { n } => w(*n),
            StateRecipe::WTilde => Ok(w_tilde3()),
            StateRecipe::Cluster4 => Ok(cluster4()),
            StateRecipe::Magnon { n, k } => magnon(*n, *k),
            StateRecipe::WghzSuperposition { n, eta } => {
                check_eta(*eta)?;
                superpose(eta.cos(), &w(*n)?, eta.sin(), 0.0, &ghz(*n)?)
            }
            StateRecipe::WWTildeSuperposition { eta, phi } => {
                check_eta(*eta)?;
                check_phase(*phi)?;
                superpose(eta.cos(), &w(3)?, eta.sin(), *phi, &w_tilde3())
            }
            StateRecipe::WGhz3Superposition { eta, phi } => {
                check_eta(*eta)?;
                check_phase(*phi)?;
                superpose(eta.cos(), &w(3)?, eta.sin(), *phi, &ghz(3)?)
            }
            StateRecipe::AsymW { gamma, xi } => asym_w(gamma, xi),
            StateRecipe::Explicit { n, amplitudes } => PureState::normalized(
                *n,
                amplitudes
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            ),
        }
    }
}

/// On-disk JSON layout: `{ "n": N, "amplitudes": [[re, im], ...], "recipe": ... }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<StateRecipe>,
}

impl StateFile {
    pub fn from_state(psi: &PureState, recipe: Option<StateRecipe>) -> Self {
        Self {
            n: psi.num_qubits,
            amplitudes: psi.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
            recipe,
        }
    }

    /// Validates length and normalization.
    pub fn to_state(&self) -> Result<PureState> {
        PureState::new(
            self.n,
            self.amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_support(psi: &PureState, expected: &[(usize, f64)]) {
        for (j, c) in psi.amplitudes().iter().enumerate() {
            let want = expected
                .iter()
                .find(|(k, _)| *k == j)
                .map_or(0.0, |(_, v)| *v);
            assert!(
                (c.re - want).abs() < 1e-15 && c.im.abs() < 1e-15,
                "J={j}: got {c}, want {want}"
            );
        }
    }

    #[test]
    fn basis_kets() {
        assert_support(&basis_ket(3, 0).unwrap(), &[(0, 1.0)]);
        assert_support(&basis_ket(3, 7).unwrap(), &[(7, 1.0)]);
        assert_support(&basis_ket(1, 1).unwrap(), &[(1, 1.0)]);
        assert!(matches!(
            basis_ket(3, 8),
            Err(Error::Index { index: 8, bound: 8 })
        ));
    }

    #[test]
    fn ghz_and_w_supports() {
        let h = FRAC_1_SQRT_2;
        assert_support(&ghz(2).unwrap(), &[(0, h), (3, h)]);
        assert_support(&ghz(3).unwrap(), &[(0, h), (7, h)]);
        assert_support(&ghz(4).unwrap(), &[(0, h), (15, h)]);
        let t = 1.0 / 3f64.sqrt();
        assert_support(&w(3).unwrap(), &[(1, t), (2, t), (4, t)]);
        assert_support(&w(4).unwrap(), &[(1, 0.5), (2, 0.5), (4, 0.5), (8, 0.5)]);
        assert_support(&w(2).unwrap(), &[(1, h), (2, h)]);
        assert!(ghz(1).is_err());
        assert!(w(1).is_err());
    }

    #[test]
    fn w_tilde_is_bit_flipped_w() {
        let wt = w_tilde3();
        let t = 1.0 / 3f64.sqrt();
        assert_support(&wt, &[(3, t), (5, t), (6, t)]);
        assert!(overlap(&wt, &w(3).unwrap()).unwrap().norm() < 1e-15);
        let w3 = w(3).unwrap();
        let flipped: Vec<Complex64> = (0..8).map(|j| w3.amplitude(7 - j)).collect();
        assert_eq!(flipped, wt.amplitudes());
    }

    #[test]
    fn cluster_state() {
        let c = cluster4();
        assert_support(&c, &[(0, 0.5), (3, 0.5), (12, 0.5), (15, -0.5)]);
        assert!((c.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(overlap(&c, &ghz(4).unwrap()).unwrap().norm() < 1e-15);
    }

    #[test]
    fn magnons() {
        for n in 2..8 {
            let m = magnon(n, 1).unwrap();
            assert!(m.max_abs_diff(&w(n).unwrap()).unwrap() < 1e-15);
        }
        let s = 1.0 / 6f64.sqrt();
        assert_support(
            &magnon(4, 2).unwrap(),
            &[(3, s), (5, s), (6, s), (9, s), (10, s), (12, s)],
        );
        let m = magnon(7, 3).unwrap();
        for (j, c) in m.amplitudes().iter().enumerate() {
            if c.norm() > 0.0 {
                assert_eq!(j.count_ones(), 3);
            }
        }
        assert!(magnon(4, 0).is_err());
        assert!(magnon(4, 4).is_err());
    }

    #[test]
    fn superposition_endpoints() {
        for n in 3..6 {
            let (wn, g) = (w(n).unwrap(), ghz(n).unwrap());
            let at0 = superpose(0f64.cos(), &wn, 0f64.sin(), 0.0, &g).unwrap();
            assert!(at0.max_abs_diff(&wn).unwrap() < 1e-15);
            let e = FRAC_PI_2;
            let at1 = superpose(e.cos(), &wn, e.sin(), 0.0, &g).unwrap();
            assert!(at1.max_abs_diff(&g).unwrap() < 1e-15);
        }
        let eta: f64 = 0.3;
        let phi: f64 = 1.1;
        let s = superpose(eta.cos(), &w(3).unwrap(), eta.sin(), phi, &w_tilde3()).unwrap();
        let want = Complex64::from_polar(eta.sin() / 3f64.sqrt(), phi);
        assert!((s.amplitude(6) - want).norm() < 1e-15);
        assert!(superpose(1.0, &w(3).unwrap(), 1.0, 0.0, &w(4).unwrap()).is_err());
        let w3 = w(3).unwrap();
        assert!(matches!(
            superpose(1.0, &w3, -1.0, 0.0, &w3),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn asymmetric_w() {
        let u = asym_w(&[1.0; 3], &[0.0; 3]).unwrap();
        assert_eq!(u.amplitudes(), w(3).unwrap().amplitudes());
        let single = asym_w(&[1.0, 0.0, 0.0], &[0.0; 3]).unwrap();
        assert_eq!(single, basis_ket(3, 4).unwrap());
        let g = [0.5, 0.5, 2.0 / 3.0, 1.0 / 6.0];
        let s = asym_w(&g, &[0.0; 4]).unwrap();
        let norm = (35.0f64 / 36.0).powf(-0.5);
        for (i, j) in [8usize, 4, 2, 1].into_iter().enumerate() {
            assert!((s.amplitude(j).re - norm * g[i]).abs() < 1e-15);
        }
        assert_eq!(s.support_size(0.0), 4);
        assert!(matches!(
            asym_w(&[0.0; 3], &[0.0; 3]),
            Err(Error::Degenerate(_))
        ));
        assert!(asym_w(&[1.5, 0.2, 0.1], &[0.0; 3]).is_err());
    }

    #[test]
    fn overlaps() {
        let w3 = w(3).unwrap();
        assert!((overlap(&w3, &w3).unwrap() - 1.0).norm() < 1e-15);
        assert!(overlap(&w3, &ghz(3).unwrap()).unwrap().norm() < 1e-15);
        // uniform product with sin Γ = 1/√3 on every qubit
        let (c, s) = ((2.0f64 / 3.0).sqrt(), 1.0 / 3f64.sqrt());
        let amps: Vec<Complex64> = (0..8)
            .map(|j: usize| {
                let ones = j.count_ones() as i32;
                Complex64::new(s.powi(ones) * c.powi(3 - ones), 0.0)
            })
            .collect();
        let prod = PureState::new(3, amps).unwrap();
        let o = overlap(&w3, &prod).unwrap().norm_sqr();
        assert!((o - 4.0 / 9.0).abs() < 1e-15);
        assert!(overlap(&w3, &w(4).unwrap()).is_err());
    }

    #[test]
    fn permutations() {
        let c = cluster4();
        let swapped = permute_qubits(&c, &[2, 1, 0, 3]).unwrap();
        // |0011⟩ (J=3) becomes |1001⟩ (J=9)
        assert!((swapped.amplitude(9).re - 0.5).abs() < 1e-15);
        assert_eq!(swapped.amplitude(3), C0);
        assert_ne!(swapped, c);
        assert_eq!(permute_qubits(&c, &[0, 1, 2, 3]).unwrap(), c);
        assert!(permute_qubits(&c, &[0, 0, 1, 2]).is_err());
        assert!(permute_qubits(&c, &[0, 1, 2]).is_err());
    }

    #[test]
    fn symmetric_families_survive_transpositions() {
        let states: Vec<PureState> = (2..7)
            .flat_map(|n| {
                let mut v = vec![w(n).unwrap(), ghz(n).unwrap()];
                v.extend((1..n).map(|k| magnon(n, k).unwrap()));
                v
            })
            .collect();
        for psi in states {
            let n = psi.num_qubits();
            for a in 0..n {
                for b in a + 1..n {
                    let mut sigma: Vec<usize> = (0..n).collect();
                    sigma.swap(a, b);
                    let t = permute_qubits(&psi, &sigma).unwrap();
                    assert!(t.max_abs_diff(&psi).unwrap() < 1e-14);
                }
            }
        }
        let c = cluster4();
        let t = permute_qubits(&c, &[0, 2, 1, 3]).unwrap();
        assert!(t.max_abs_diff(&c).unwrap() > 0.1);
    }

    #[test]
    fn index_splitting() {
        assert_eq!(split_index(5, 1, 2).unwrap(), (1, 1));
        assert_eq!(split_index(0, 3, 4).unwrap(), (0, 0));
        assert!(split_index(8, 1, 2).is_err());
        for m1 in 0..=5 {
            for m2 in 0..=(10 - m1).min(5) {
                for a in 0..1usize << m1 {
                    for b in 0..1usize << m2 {
                        let j = (a << m2) + b;
                        assert_eq!(split_index(j, m1, m2).unwrap(), (a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip_validates() {
        let recipe = StateRecipe::Magnon { n: 4, k: 2 };
        let psi = recipe.build().unwrap();
        let file = StateFile::from_state(&psi, Some(recipe.clone()));
        let text = file.to_json().unwrap();
        let back = StateFile::from_json(&text).unwrap();
        assert_eq!(back.recipe, Some(recipe));
        assert_eq!(back.to_state().unwrap(), psi);

        let short = r#"{"n": 2, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(
            StateFile::from_json(short).unwrap().to_state(),
            Err(Error::Shape(_))
        ));
        let unnormalized = r#"{"n": 1, "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}"#;
        assert!(matches!(
            StateFile::from_json(unnormalized).unwrap().to_state(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn recipe_parameter_ranges() {
        assert!(StateRecipe::WghzSuperposition { n: 4, eta: 2.0 }
            .build()
            .is_err());
        assert!(StateRecipe::WGhz3Superposition { eta: 0.1, phi: 7.0 }
            .build()
            .is_err());
        let e = StateRecipe::Explicit {
            n: 1,
            amplitudes: vec![[3.0, 0.0], [0.0, 4.0]],
        }
        .build()
        .unwrap();
        assert!((e.amplitude(1).im - 0.8).abs() < 1e-15);
    }
}
