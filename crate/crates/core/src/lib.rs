//! Generalized geometric entanglement of N-qubit pure states.
//!
//! For a pure state |Ψ⟩ and a partition of its qubits into K blocks, the
//! relative measure is `E = 1 − Λ²`, where `Λ²` is the largest squared
//! overlap between |Ψ⟩ and a product of K block states. Minimizing over all
//! K-block partitions gives the absolute measure `E_G^(K)`; the sequence
//! `K = 2..N` is non-decreasing and ends at the fully separable measure.
//!
//! - [`state`]: dense state vectors and the standard families (GHZ, W,
//!   Dicke/magnon, cluster, asymmetric W, superpositions).
//! - [`partition`]: integer partitions (shapes) and lazy set-partition
//!   enumeration.
//! - [`param`]: hyperspherical coordinates for nonnegative unit vectors.
//! - [`closed_form`]: analytic values used as oracles for the optimizer.
//! - [`optimizer`]: multistart alternating ascent over product states.
//! - [`hierarchy`]: absolute measures, full hierarchies, structural checks.

pub mod closed_form;
pub mod error;
pub mod hierarchy;
pub mod optimizer;
pub mod param;
pub mod partition;
pub mod state;

pub use error::{Error, Result};
pub use hierarchy::{HierarchyConfig, HierarchyReport};
pub use optimizer::{OptimizerConfig, OverlapResult, ProductState};
pub use partition::{Partition, Shape};
pub use state::PureState;
