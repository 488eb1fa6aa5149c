//! Sum-rule and product-rule verdicts for commuting pairs of observables.
//!
//! Given elements of reality `{A} = a` and `{B} = b`, the sum rule asks for
//! `{r₁A + r₂B} = r₁a + r₂b` and the product rule for `{AB} = ab`. Under a
//! pre- and post-selection either can fail even when both components are
//! certain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abl::{distribution, element_from_distribution, ElementOfReality, OutcomeDistribution, PrePostSelection};
use crate::error::{Error, Result};
use crate::linalg::{StateVector, TensorProduct};
use crate::observables::{on_site, pauli, product_with_tolerance, weighted_sum, Axis, Observable};
use crate::states::{singlet, spin_eigenstate, spin_up};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Rule {
    Sum { r1: f64, r2: f64 },
    Product,
}

impl Rule {
    /// The value the rule predicts for the combined observable.
    pub fn combine(&self, a: f64, b: f64) -> f64 {
        match *self {
            Rule::Sum { r1, r2 } => r1 * a + r2 * b,
            Rule::Product => a * b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// All three elements exist and the combined value equals the combination.
    Holds,
    /// Both components are elements of reality, the combination is not.
    CombinedNotElement,
    /// The combination is certain but with a different value.
    ValueMismatch,
    /// At least one component is not an element of reality.
    ComponentsNotElements,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: Rule,
    pub a: String,
    pub b: String,
    pub eor_a: Option<ElementOfReality>,
    pub eor_b: Option<ElementOfReality>,
    pub combined_label: String,
    pub combined: OutcomeDistribution,
    pub eor_combined: Option<ElementOfReality>,
    pub verdict: Verdict,
}

/// The verdict implied by three element-of-reality evaluations.
pub fn verdict_for(
    rule: Rule,
    eor_a: Option<&ElementOfReality>,
    eor_b: Option<&ElementOfReality>,
    eor_combined: Option<&ElementOfReality>,
    value_tol: f64,
) -> Verdict {
    match (eor_a, eor_b, eor_combined) {
        (Some(a), Some(b), Some(c)) => {
            if (c.value - rule.combine(a.value, b.value)).abs() <= value_tol {
                Verdict::Holds
            } else {
                Verdict::ValueMismatch
            }
        }
        (Some(_), Some(_), None) => Verdict::CombinedNotElement,
        _ => Verdict::ComponentsNotElements,
    }
}

fn check_rule(
    pps: &PrePostSelection,
    a: &Observable,
    b: &Observable,
    rule: Rule,
    tol: &Tolerances,
) -> Result<RuleReport> {
    a.ensure_commutes(b, tol)?;
    let combined_obs = match rule {
        Rule::Sum { r1, r2 } => weighted_sum(r1, a, r2, b)?,
        Rule::Product => product_with_tolerance(a, b, tol)?,
    };
    let dist_a = distribution(pps, a, tol)?;
    let dist_b = distribution(pps, b, tol)?;
    let combined = distribution(pps, &combined_obs, tol)?;
    let eor_a = element_from_distribution(a.label(), &dist_a, tol);
    let eor_b = element_from_distribution(b.label(), &dist_b, tol);
    let eor_combined = element_from_distribution(combined_obs.label(), &combined, tol);
    let verdict = verdict_for(
        rule,
        eor_a.as_ref(),
        eor_b.as_ref(),
        eor_combined.as_ref(),
        tol.value_match,
    );
    Ok(RuleReport {
        rule,
        a: a.label().to_string(),
        b: b.label().to_string(),
        eor_a,
        eor_b,
        combined_label: combined_obs.label().to_string(),
        combined,
        eor_combined,
        verdict,
    })
}

pub fn check_product_rule(
    pps: &PrePostSelection,
    a: &Observable,
    b: &Observable,
    tol: &Tolerances,
) -> Result<RuleReport> {
    check_rule(pps, a, b, Rule::Product, tol)
}

pub fn check_sum_rule(
    pps: &PrePostSelection,
    a: &Observable,
    b: &Observable,
    r1: f64,
    r2: f64,
    tol: &Tolerances,
) -> Result<RuleReport> {
    check_rule(pps, a, b, Rule::Sum { r1, r2 }, tol)
}

/// One post-selection and the observable pair to test against it.
#[derive(Debug, Clone)]
pub struct SweepCase {
    pub label: String,
    pub post: StateVector,
    pub a: Observable,
    pub b: Observable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SweepResult {
    Evaluated { sum: RuleReport, product: RuleReport },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub post_label: String,
    pub a: String,
    pub b: String,
    pub result: SweepResult,
}

impl SweepEntry {
    /// Both rules fail for this post-selection (false when skipped).
    pub fn both_violated(&self) -> bool {
        match &self.result {
            SweepResult::Evaluated { sum, product } => !sum.verdict.holds() && !product.verdict.holds(),
            SweepResult::Skipped { .. } => false,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.result, SweepResult::Skipped { .. })
    }
}

/// Runs the sum rule (`r₁ = r₂ = 1`) and the product rule for every case.
/// Cases whose ABL denominator vanishes are recorded as skipped; other errors
/// abort the sweep. Output order follows `cases`.
pub fn sweep_postselections(
    pre: &StateVector,
    cases: &[SweepCase],
    tol: &Tolerances,
) -> Result<Vec<SweepEntry>> {
    cases
        .par_iter()
        .map(|case| {
            let pps = PrePostSelection::new(pre.clone(), Some(case.post.clone()))?;
            let evaluated = check_sum_rule(&pps, &case.a, &case.b, 1.0, 1.0, tol).and_then(|sum| {
                check_product_rule(&pps, &case.a, &case.b, tol).map(|product| (sum, product))
            });
            let result = match evaluated {
                Ok((sum, product)) => SweepResult::Evaluated { sum, product },
                Err(e @ Error::ZeroDenominator { .. }) => SweepResult::Skipped {
                    reason: e.to_string(),
                },
                Err(e) => return Err(e),
            };
            Ok(SweepEntry {
                post_label: case.label.clone(),
                a: case.a.label().to_string(),
                b: case.b.label().to_string(),
                result,
            })
        })
        .collect()
}

/// Spin component of particle `site + 1` of a pair, labeled like `s1y`.
pub fn pair_spin(axis: Axis, site: usize) -> Observable {
    on_site(&pauli(axis), site, 2)
        .and_then(|o| o.relabel(format!("s{}{}", site + 1, axis)))
        .expect("site < 2")
}

fn post_label(a: Axis, b: Axis) -> String {
    format!("|up_1{a} up_2{b}>")
}

/// Post-selections `|↑₁ₐ↑₂ᵦ⟩` each tested on the pair `(σ₁ᵦ, σ₂ₐ)`: the
/// components whose values the singlet correlations retrodict from the
/// post-selection. For `(a, b) = (x, y)` this is `(σ₁ᵧ, σ₂ₓ)`.
pub fn crossed_pair_cases(axes_a: &[Axis], axes_b: &[Axis]) -> Vec<SweepCase> {
    axes_a
        .iter()
        .flat_map(|&a| axes_b.iter().map(move |&b| (a, b)))
        .map(|(a, b)| SweepCase {
            label: post_label(a, b),
            post: spin_up(a).tensor(&spin_up(b)).expect("dim 4"),
            a: pair_spin(b, 0),
            b: pair_spin(a, 1),
        })
        .collect()
}

/// Post-selections `|↑₁ₐ↑₂ᵦ⟩` all tested on the fixed pair `(σ₁ᵧ, σ₂ₓ)`.
pub fn fixed_pair_cases(axes_a: &[Axis], axes_b: &[Axis]) -> Vec<SweepCase> {
    axes_a
        .iter()
        .flat_map(|&a| axes_b.iter().map(move |&b| (a, b)))
        .map(|(a, b)| SweepCase {
            label: post_label(a, b),
            post: spin_up(a).tensor(&spin_up(b)).expect("dim 4"),
            a: pair_spin(Axis::Y, 0),
            b: pair_spin(Axis::X, 1),
        })
        .collect()
}

/// The four joint outcomes of `σ₁ₓ, σ₂ᵧ` as post-selections, tested on
/// `(σ₁ᵧ, σ₂ₓ)`.
pub fn outcome_sign_cases() -> Vec<SweepCase> {
    let mut cases = Vec::with_capacity(4);
    for s1 in [true, false] {
        for s2 in [true, false] {
            let sign = |up: bool| if up { '+' } else { '-' };
            cases.push(SweepCase {
                label: format!("|{}_1x {}_2y>", sign(s1), sign(s2)),
                post: spin_eigenstate(Axis::X, s1)
                    .tensor(&spin_eigenstate(Axis::Y, s2))
                    .expect("dim 4"),
                a: pair_spin(Axis::Y, 0),
                b: pair_spin(Axis::X, 1),
            });
        }
    }
    cases
}

/// Singlet pre-selection swept over `|↑₁ₐ↑₂ᵦ⟩` post-selections for every
/// `a ∈ axes_a`, `b ∈ axes_b` (a-major), using [`crossed_pair_cases`].
pub fn sweep_product_postselections(axes_a: &[Axis], axes_b: &[Axis], tol: &Tolerances) -> Vec<SweepEntry> {
    sweep_postselections(&singlet(), &crossed_pair_cases(axes_a, axes_b), tol)
        .expect("local spin components on different particles always commute")
}
