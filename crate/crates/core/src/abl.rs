//! Outcome probabilities for an intermediate measurement on a pre- and
//! post-selected system (the ABL rule), the Born rule with collapse for
//! systems without post-selection, and element-of-reality extraction.
//!
//! For an observable with spectral projectors `Pₖ`, pre-state `|ψ₁⟩` and
//! post-state `|ψ₂⟩`:
//!
//! ```text
//! p(A = aₙ) = |⟨ψ₂|Pₙ|ψ₁⟩|² / Σₖ |⟨ψ₂|Pₖ|ψ₁⟩|²
//! ```
//!
//! The Hamiltonian between the three times is taken to be zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpectralDecomposition, StateVector, C64};
use crate::observables::Observable;
use crate::tolerance::Tolerances;

/// A pre-selected state and an optional post-selected state of equal dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrePostSelection {
    pre: StateVector,
    post: Option<StateVector>,
}

impl PrePostSelection {
    pub fn new(pre: StateVector, post: Option<StateVector>) -> Result<Self> {
        if let Some(post) = &post {
            if post.dim() != pre.dim() {
                return Err(Error::DimensionMismatch {
                    expected: pre.dim(),
                    found: post.dim(),
                });
            }
        }
        Ok(PrePostSelection { pre, post })
    }

    pub fn pre_only(pre: StateVector) -> Self {
        PrePostSelection { pre, post: None }
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> Option<&StateVector> {
        self.post.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    /// The time-reversed selection, `post` becoming the pre-state.
    pub fn reversed(&self) -> Option<PrePostSelection> {
        self.post.as_ref().map(|post| PrePostSelection {
            pre: post.clone(),
            post: Some(self.pre.clone()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub probability: f64,
}

/// Eigenvalue → probability, ascending by eigenvalue. Zero-probability
/// outcomes are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    fn from_weights(sd: &SpectralDecomposition, weights: Vec<f64>, total: f64) -> Self {
        let outcomes = sd
            .eigenvalues()
            .iter()
            .zip(weights)
            .map(|(&eigenvalue, w)| Outcome {
                eigenvalue,
                probability: (w / total).clamp(0.0, 1.0),
            })
            .collect();
        OutcomeDistribution { outcomes }
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability of the outcome within `tol` of `value`; 0 if `value` is
    /// not in the spectrum.
    pub fn probability_of(&self, value: f64, tol: f64) -> f64 {
        self.outcomes
            .iter()
            .find(|o| (o.eigenvalue - value).abs() <= tol)
            .map_or(0.0, |o| o.probability)
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// The outcome with probability at least `1 - certainty_tol`, if any.
    pub fn certain_outcome(&self, certainty_tol: f64) -> Option<Outcome> {
        self.outcomes
            .iter()
            .copied()
            .find(|o| o.probability >= 1.0 - certainty_tol)
    }
}

/// An outcome predicted (or retrodicted) with probability one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementOfReality {
    pub observable_label: String,
    pub value: f64,
    pub probability: f64,
}

/// The ABL rule over an already computed spectral decomposition.
pub fn abl_from_decomposition(
    pre: &StateVector,
    post: &StateVector,
    sd: &SpectralDecomposition,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    let weights = sd
        .projectors()
        .iter()
        .map(|p| Ok(p.sandwich(post, pre)?.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    if total <= tol.zero_denominator {
        return Err(Error::ZeroDenominator { total });
    }
    Ok(OutcomeDistribution::from_weights(sd, weights, total))
}

/// ABL probabilities for measuring `obs` between the pre- and post-selection.
pub fn abl_distribution(
    pps: &PrePostSelection,
    obs: &Observable,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    let post = pps.post().ok_or(Error::MissingPostSelection)?;
    check_obs_dim(pps.pre(), obs)?;
    abl_from_decomposition(pps.pre(), post, &obs.decompose(tol)?, tol)
}

fn check_obs_dim(state: &StateVector, obs: &Observable) -> Result<()> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: obs.dim(),
        });
    }
    Ok(())
}

/// Born probabilities `⟨ψ|Pₙ|ψ⟩`.
pub fn born_distribution(
    state: &StateVector,
    obs: &Observable,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    check_obs_dim(state, obs)?;
    let sd = obs.decompose(tol)?;
    let weights = sd
        .projectors()
        .iter()
        .map(|p| Ok(p.sandwich(state, state)?.re))
        .collect::<Result<Vec<f64>>>()?;
    Ok(OutcomeDistribution::from_weights(&sd, weights, 1.0))
}

/// ABL when a post-selection is present, Born otherwise.
pub fn distribution(
    pps: &PrePostSelection,
    obs: &Observable,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    match pps.post() {
        Some(_) => abl_distribution(pps, obs, tol),
        None => born_distribution(pps.pre(), obs, tol),
    }
}

fn projector_for(obs: &Observable, eigenvalue: f64, tol: &Tolerances) -> Result<Matrix> {
    let sd = obs.decompose(tol)?;
    let window = tol.cluster * obs.matrix().max_abs().max(1.0);
    sd.find(eigenvalue, window)
        .map(|k| sd.projectors()[k].clone())
        .ok_or_else(|| Error::NoSuchEigenvalue {
            label: obs.label().to_string(),
            eigenvalue,
        })
}

/// The normalized post-measurement state `Pₙψ/‖Pₙψ‖`.
pub fn collapse(
    state: &StateVector,
    obs: &Observable,
    eigenvalue: f64,
    tol: &Tolerances,
) -> Result<StateVector> {
    check_obs_dim(state, obs)?;
    let p = projector_for(obs, eigenvalue, tol)?;
    let projected = p.apply_state(state)?;
    let probability = crate::linalg::norm_sqr(&projected);
    if probability <= tol.min_collapse_probability {
        return Err(Error::ZeroProbabilityOutcome {
            eigenvalue,
            probability,
        });
    }
    StateVector::normalized(projected)
}

/// Born probability that commuting observables jointly yield the given
/// eigenvalues: `⟨ψ|Π Pᵢ|ψ⟩`.
pub fn joint_probability(
    state: &StateVector,
    outcomes: &[(&Observable, f64)],
    tol: &Tolerances,
) -> Result<f64> {
    for (i, (a, _)) in outcomes.iter().enumerate() {
        check_obs_dim(state, a)?;
        for (b, _) in &outcomes[i + 1..] {
            a.ensure_commutes(b, tol)?;
        }
    }
    let mut v = state.amps().to_vec();
    for (obs, value) in outcomes {
        v = projector_for(obs, *value, tol)?.apply(&v)?;
    }
    Ok(crate::linalg::inner_slice(state.amps(), &v).re.clamp(0.0, 1.0))
}

/// `{A}`: the outcome of `obs` certain under `pps`, if there is one.
pub fn element_of_reality(
    pps: &PrePostSelection,
    obs: &Observable,
    tol: &Tolerances,
) -> Result<Option<ElementOfReality>> {
    let dist = distribution(pps, obs, tol)?;
    Ok(element_from_distribution(obs.label(), &dist, tol))
}

pub fn element_from_distribution(
    label: &str,
    dist: &OutcomeDistribution,
    tol: &Tolerances,
) -> Option<ElementOfReality> {
    dist.certain_outcome(tol.certainty).map(|o| ElementOfReality {
        observable_label: label.to_string(),
        value: o.eigenvalue,
        probability: o.probability,
    })
}

/// `f(A) = Σ f(aₖ) Pₖ`, relabeling the eigenvalue clusters of `obs`.
pub fn coarse_grain(
    obs: &Observable,
    f: &dyn Fn(f64) -> f64,
    label: impl Into<String>,
    tol: &Tolerances,
) -> Result<Observable> {
    let sd = obs.decompose(tol)?;
    let m = sd.apply_function(f);
    // f of a Hermitian operator is Hermitian up to rounding in the projectors
    let symmetric = m.linear_combination(C64::new(0.5, 0.0), &m.adjoint(), C64::new(0.5, 0.0))?;
    Observable::with_tolerance(label, symmetric, tol.hermitian)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsistencyStatus {
    /// `{A}` exists and `{f(A)} = f({A})`.
    Consistent,
    /// `{A}` does not exist, so nothing is implied.
    Vacuous,
    /// `{A}` exists but `{f(A)}` is missing or differs from `f({A})`.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub element: Option<ElementOfReality>,
    pub mapped: Observable,
    pub mapped_distribution: OutcomeDistribution,
    pub mapped_element: Option<ElementOfReality>,
    pub status: ConsistencyStatus,
}

/// Checks that `{A} = a` implies `{f(A)} = f(a)`.
pub fn check_functional_consistency(
    pps: &PrePostSelection,
    obs: &Observable,
    f: &dyn Fn(f64) -> f64,
    f_label: &str,
    tol: &Tolerances,
) -> Result<ConsistencyReport> {
    let element = element_of_reality(pps, obs, tol)?;
    let mapped = coarse_grain(obs, f, format!("{f_label}({})", obs.label()), tol)?;
    let mapped_distribution = distribution(pps, &mapped, tol)?;
    let mapped_element = element_from_distribution(mapped.label(), &mapped_distribution, tol);
    let status = match (&element, &mapped_element) {
        (None, _) => ConsistencyStatus::Vacuous,
        (Some(a), Some(fa)) if (f(a.value) - fa.value).abs() <= tol.value_match => {
            ConsistencyStatus::Consistent
        }
        _ => ConsistencyStatus::Violated,
    };
    Ok(ConsistencyReport {
        element,
        mapped,
        mapped_distribution,
        mapped_element,
        status,
    })
}
