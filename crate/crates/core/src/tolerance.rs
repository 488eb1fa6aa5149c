//! Numerical thresholds used throughout the crate.

use serde::{Deserialize, Serialize};

/// Largest Hilbert-space dimension a tensor product may produce by default.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Every comparison threshold in one place. `Default` gives the values the
/// library is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of `Σ|amp|²` from 1 for a constructed state.
    pub normalization: f64,
    /// Max-abs deviation of `M - M†` accepted as Hermitian.
    pub hermitian: f64,
    /// Relative gap below which eigenvalues are merged into one cluster.
    pub cluster: f64,
    /// An outcome with probability `>= 1 - certainty` is an element of reality.
    pub certainty: f64,
    /// ABL denominators at or below this are treated as zero.
    pub zero_denominator: f64,
    /// Max-abs norm of `[A, B]` accepted as commuting.
    pub commute: f64,
    /// Accepted deviation of an operator product from `±I`.
    pub signed_identity: f64,
    /// Outcomes below this probability cannot be collapsed onto.
    pub min_collapse_probability: f64,
    /// Unit-norm and orthogonality tolerance for directions.
    pub direction: f64,
    /// Two element-of-reality values closer than this are equal.
    pub value_match: f64,
    /// Residual `‖Av - av‖` accepted for an eigenvector.
    pub eigen_residual: f64,
    pub max_jacobi_sweeps: usize,
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            normalization: 1e-9,
            hermitian: 1e-10,
            cluster: 1e-8,
            certainty: 1e-9,
            zero_denominator: 1e-24,
            commute: 1e-10,
            signed_identity: 1e-8,
            min_collapse_probability: 1e-12,
            direction: 1e-9,
            value_match: 1e-9,
            eigen_residual: 1e-10,
            max_jacobi_sweeps: 100,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl Tolerances {
    pub fn with_certainty(mut self, certainty: f64) -> Self {
        self.certainty = certainty;
        self
    }
}
