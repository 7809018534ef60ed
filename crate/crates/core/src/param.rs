//! Hyperspherical coordinates for nonnegative unit vectors.
//!
//! A vector `v` of dimension `d` is generated by `d−1` angles in `[0, π/2]`:
//! `v_0 = cos δ_0`, `v_L = sin δ_0 ⋯ sin δ_{L−1} cos δ_L`, and the last entry
//! is the full product of sines.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

/// Tail products of sines below this are treated as zero by the inverse map.
const SIN_PREFIX_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector {
    delta: Vec<f64>,
}

impl AngleVector {
    pub fn new(delta: Vec<f64>) -> Result<Self> {
        if let Some(a) = delta.iter().find(|a| !(0.0..=FRAC_PI_2).contains(*a)) {
            return Err(domain(format!("angle {a} outside [0, π/2]")));
        }
        Ok(Self { delta })
    }

    pub fn angles(&self) -> &[f64] {
        &self.delta
    }

    /// Dimension of the generated vector.
    pub fn dim(&self) -> usize {
        self.delta.len() + 1
    }
}

pub fn angles_to_amplitudes(angles: &AngleVector) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.dim());
    let mut prefix = 1.0;
    for &a in &angles.delta {
        out.push(prefix * a.cos());
        prefix *= a.sin();
    }
    out.push(prefix);
    out
}

/// Inverse of [`angles_to_amplitudes`]. Angles past a vanishing sine prefix
/// are set to zero.
pub fn amplitudes_to_angles(v: &[f64]) -> Result<AngleVector> {
    if v.is_empty() {
        return Err(domain("empty vector"));
    }
    if let Some(x) = v.iter().find(|x| **x < 0.0 || !x.is_finite()) {
        return Err(domain(format!("entry {x} is not a nonnegative number")));
    }
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(domain(format!("vector norm² is {norm2}, expected 1")));
    }
    let d = v.len();
    let mut delta = Vec::with_capacity(d - 1);
    let mut prefix = 1.0;
    for l in 0..d - 1 {
        if prefix < SIN_PREFIX_FLOOR {
            delta.push(0.0);
            continue;
        }
        // tail norm of v[l..] equals the current sine prefix
        let tail: f64 = v[l + 1..].iter().map(|x| x * x).sum::<f64>().sqrt();
        let angle = tail.atan2(v[l]).clamp(0.0, FRAC_PI_2);
        delta.push(angle);
        prefix *= angle.sin();
    }
    Ok(AngleVector { delta })
}

/// Bijection between hyperspherical slots `L` and amplitude indices `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMapping {
    slot_to_index: Vec<usize>,
}

impl IndexMapping {
    pub fn identity(dim: usize) -> Self {
        Self {
            slot_to_index: (0..dim).collect(),
        }
    }

    pub fn from_slots(slot_to_index: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; slot_to_index.len()];
        for &j in &slot_to_index {
            if j >= seen.len() || seen[j] {
                return Err(domain(format!("{slot_to_index:?} is not a permutation")));
            }
            seen[j] = true;
        }
        Ok(Self { slot_to_index })
    }

    pub fn dim(&self) -> usize {
        self.slot_to_index.len()
    }

    pub fn index_of_slot(&self, slot: usize) -> usize {
        self.slot_to_index[slot]
    }

    pub fn slots(&self) -> &[usize] {
        &self.slot_to_index
    }

    /// Places slot-ordered values `v_L` at their amplitude indices `J`.
    pub fn to_amplitude_order(&self, slot_values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (l, &x) in slot_values.iter().enumerate() {
            out[self.slot_to_index[l]] = x;
        }
        out
    }
}

/// Slots in order of growing excitation number: `|0…0⟩`, then the single
/// excitations `2^p` for increasing `p`, then the two-excitation kets, and
/// so on, ties broken by increasing `J`.
pub fn excitation_order_mapping(m: usize) -> IndexMapping {
    let mut order: Vec<usize> = (0..1usize << m).collect();
    order.sort_by_key(|&j| (j.count_ones(), j));
    IndexMapping {
        slot_to_index: order,
    }
}
