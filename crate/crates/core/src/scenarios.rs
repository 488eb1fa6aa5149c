//! Built-in pre/post-selection scenarios and the facts each is expected to
//! satisfy, plus the scenario file format.
//!
//! Facts are plain data. Each one carries a provenance tag and its own
//! tolerance, so reports can say where an expected value came from.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abl::{
    born_distribution, collapse, distribution, element_from_distribution, joint_probability,
    OutcomeDistribution, PrePostSelection,
};
use crate::contextuality::{
    exhaustive_assignment_search, extract_state_parity_constraints, ghz3_sets, ghz3_state, ks_coloring_search,
    KsInstance,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, StateVector, TensorProduct, C64};
use crate::observables::{
    joint_spectrum, on_site, parse_pauli_string, pauli, product, spin1_operators, spin_along, weighted_sum, Axis,
    Direction, Observable,
};
use crate::rules::pair_spin;
use crate::states::{signed_pair, singlet, spin_up};
use crate::tolerance::Tolerances;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// A number stated in the source literature.
    #[serde(rename = "[PAPER]")]
    Paper,
    /// Follows from definitions alone.
    #[serde(rename = "[TRIVIAL]")]
    Trivial,
    /// Computed beforehand by an independent hand or brute-force evaluation.
    #[serde(rename = "[DERIVED]")]
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Provenance::Paper => "[PAPER]",
            Provenance::Trivial => "[TRIVIAL]",
            Provenance::Derived => "[DERIVED]",
        };
        f.write_str(tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ProbabilityExpectation {
    Exactly(f64),
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CertaintyExpectation {
    Certain(f64),
    /// Every outcome has probability strictly between 0 and 1.
    Uncertain,
}

/// A machine-checkable expectation about a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum FactKind {
    /// ABL (or Born, without post-selection) distribution of an observable.
    Distribution { observable: String, expected: Vec<(f64, f64)> },
    /// `{A}` with the given value, or no element of reality when `None`.
    ElementOfReality { observable: String, value: Option<f64> },
    /// The pre-state is an eigenvector with this eigenvalue.
    Eigenvalue { observable: String, eigenvalue: f64 },
    /// `⟨pre|A|pre⟩`.
    Expectation { observable: String, value: f64 },
    /// The operator equals `scalar · I`.
    ScalarIdentity { observable: String, scalar: f64 },
    Commute { a: String, b: String },
    /// Every joint eigenspace of the family carries a permutation of `values`.
    JointSpectrumPermutations { observables: Vec<String>, values: Vec<f64> },
    /// Born probability on the pre-state of a joint outcome.
    JointProbability {
        outcomes: Vec<(String, f64)>,
        expected: ProbabilityExpectation,
    },
    /// Measure `given`, collapse onto `outcome`, then inspect `target`.
    AfterCollapse {
        given: String,
        outcome: f64,
        target: String,
        expected: CertaintyExpectation,
    },
    /// Parity constraints from sets of observables (signs from the pre-state
    /// eigenvalues), searched exhaustively.
    ParityAssignmentCount {
        sets: Vec<Vec<String>>,
        count: u64,
        search_space: u64,
    },
    KsColoringCount {
        directions: Vec<[f64; 3]>,
        triads: Vec<[usize; 3]>,
        count: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    #[serde(flatten)]
    pub kind: FactKind,
    pub provenance: Provenance,
    pub tolerance: f64,
}

impl Fact {
    fn new(kind: FactKind, provenance: Provenance, tolerance: f64) -> Self {
        Fact {
            kind,
            provenance,
            tolerance,
        }
    }

    /// Names of every observable the fact refers to.
    pub fn references(&self) -> Vec<&str> {
        match &self.kind {
            FactKind::Distribution { observable, .. }
            | FactKind::ElementOfReality { observable, .. }
            | FactKind::Eigenvalue { observable, .. }
            | FactKind::Expectation { observable, .. }
            | FactKind::ScalarIdentity { observable, .. } => vec![observable],
            FactKind::Commute { a, b } => vec![a, b],
            FactKind::JointSpectrumPermutations { observables, .. } => {
                observables.iter().map(String::as_str).collect()
            }
            FactKind::JointProbability { outcomes, .. } => outcomes.iter().map(|(o, _)| o.as_str()).collect(),
            FactKind::AfterCollapse { given, target, .. } => vec![given, target],
            FactKind::ParityAssignmentCount { sets, .. } => sets.iter().flatten().map(String::as_str).collect(),
            FactKind::KsColoringCount { .. } => vec![],
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            FactKind::Distribution { observable, .. } => format!("distribution of {observable}"),
            FactKind::ElementOfReality { observable, .. } => format!("element of reality {{{observable}}}"),
            FactKind::Eigenvalue { observable, .. } => format!("pre-state eigenvalue of {observable}"),
            FactKind::Expectation { observable, .. } => format!("<{observable}> on the pre-state"),
            FactKind::ScalarIdentity { observable, .. } => format!("{observable} is a multiple of I"),
            FactKind::Commute { a, b } => format!("[{a}, {b}] = 0"),
            FactKind::JointSpectrumPermutations { observables, .. } => {
                format!("joint spectrum of ({})", observables.join(", "))
            }
            FactKind::JointProbability { outcomes, .. } => {
                let parts: Vec<String> = outcomes.iter().map(|(o, v)| format!("{o}={v}")).collect();
                format!("p({})", parts.join(", "))
            }
            FactKind::AfterCollapse {
                given, outcome, target, ..
            } => format!("{target} after {given}={outcome}"),
            FactKind::ParityAssignmentCount { .. } => "satisfying parity assignments".to_string(),
            FactKind::KsColoringCount { .. } => "KS colorings".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactResult {
    pub description: String,
    pub provenance: Provenance,
    pub expected: String,
    pub actual: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distribution: Option<OutcomeDistribution>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub dim_per_site: usize,
    pub n_sites: usize,
    selection: PrePostSelection,
    observables: Vec<Observable>,
    facts: Vec<Fact>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        dim_per_site: usize,
        n_sites: usize,
        selection: PrePostSelection,
        observables: Vec<Observable>,
        facts: Vec<Fact>,
    ) -> Result<Self> {
        let dim = checked_dim(dim_per_site, n_sites)?;
        if selection.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: selection.dim(),
            });
        }
        for (i, o) in observables.iter().enumerate() {
            if o.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: o.dim(),
                });
            }
            if observables[..i].iter().any(|p| p.label() == o.label()) {
                return Err(Error::LabelConflict(o.label().to_string()));
            }
        }
        let scenario = Scenario {
            name: name.into(),
            description: description.into(),
            dim_per_site,
            n_sites,
            selection,
            observables,
            facts,
        };
        for fact in &scenario.facts {
            for r in fact.references() {
                scenario.observable(r)?;
            }
        }
        Ok(scenario)
    }

    pub fn selection(&self) -> &PrePostSelection {
        &self.selection
    }

    pub fn pre(&self) -> &StateVector {
        self.selection.pre()
    }

    pub fn post(&self) -> Option<&StateVector> {
        self.selection.post()
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn observable(&self, name: &str) -> Result<&Observable> {
        self.observables
            .iter()
            .find(|o| o.label() == name)
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))
    }

    pub fn check_facts(&self, tol: &Tolerances) -> Result<Vec<FactResult>> {
        self.facts.iter().map(|f| self.check_fact(f, tol)).collect()
    }

    fn check_fact(&self, fact: &Fact, tol: &Tolerances) -> Result<FactResult> {
        let eps = fact.tolerance;
        let mut dist_out = None;
        let (expected, actual, passed) = match &fact.kind {
            FactKind::Distribution { observable, expected } => {
                let d = distribution(&self.selection, self.observable(observable)?, tol)?;
                let listed = expected
                    .iter()
                    .all(|&(v, p)| (d.probability_of(v, tol.value_match) - p).abs() <= eps);
                let unlisted = d.outcomes().iter().all(|o| {
                    expected.iter().any(|&(v, _)| (v - o.eigenvalue).abs() <= tol.value_match)
                        || o.probability <= eps
                });
                let actual = render_distribution(&d);
                dist_out = Some(d);
                (render_pairs(expected), actual, listed && unlisted)
            }
            FactKind::ElementOfReality { observable, value } => {
                let d = distribution(&self.selection, self.observable(observable)?, tol)?;
                let e = element_from_distribution(observable, &d, tol).map(|e| e.value);
                let passed = match (value, e) {
                    (Some(want), Some(got)) => (want - got).abs() <= eps,
                    (None, None) => true,
                    _ => false,
                };
                (render_option(*value), render_option(e), passed)
            }
            FactKind::Eigenvalue { observable, eigenvalue } => {
                let image = self.observable(observable)?.matrix().apply_state(self.pre())?;
                let residual = image
                    .iter()
                    .zip(self.pre().amps())
                    .map(|(x, s)| (x - s * eigenvalue).norm())
                    .fold(0.0, f64::max);
                let actual = crate::linalg::inner_slice(self.pre().amps(), &image).re;
                (eigenvalue.to_string(), actual.to_string(), residual <= eps)
            }
            FactKind::Expectation { observable, value } => {
                let m = self.observable(observable)?.matrix();
                let actual = m.sandwich(self.pre(), self.pre())?.re;
                (value.to_string(), actual.to_string(), (actual - value).abs() <= eps)
            }
            FactKind::ScalarIdentity { observable, scalar } => {
                let m = self.observable(observable)?.matrix();
                let dev = m.distance(&Matrix::identity(m.dim()).scale(C64::new(*scalar, 0.0)));
                (format!("{scalar}*I"), format!("max deviation {dev:e}"), dev <= eps)
            }
            FactKind::Commute { a, b } => {
                let norm = self.observable(a)?.commutator_norm(self.observable(b)?)?;
                ("0".to_string(), format!("{norm:e}"), norm <= eps)
            }
            FactKind::JointSpectrumPermutations { observables, values } => {
                let family = observables
                    .iter()
                    .map(|o| self.observable(o).cloned())
                    .collect::<Result<Vec<_>>>()?;
                let joint = joint_spectrum(&family, tol)?;
                let mut want = values.clone();
                want.sort_by(f64::total_cmp);
                let mut total = 0;
                let mut ok = true;
                let mut seen = Vec::new();
                for j in &joint {
                    total += j.multiplicity;
                    let mut got = j.values.clone();
                    seen.push(render_list(&got));
                    got.sort_by(f64::total_cmp);
                    ok &= got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= eps);
                }
                ok &= total == self.pre().dim();
                (
                    format!("permutations of {}", render_list(values)),
                    seen.join(" "),
                    ok,
                )
            }
            FactKind::JointProbability { outcomes, expected } => {
                let obs = outcomes
                    .iter()
                    .map(|(o, v)| Ok((self.observable(o)?, *v)))
                    .collect::<Result<Vec<_>>>()?;
                let p = joint_probability(self.pre(), &obs, tol)?;
                match expected {
                    ProbabilityExpectation::Exactly(want) => (want.to_string(), p.to_string(), (p - want).abs() <= eps),
                    ProbabilityExpectation::Positive => ("> 0".to_string(), p.to_string(), p > eps),
                }
            }
            FactKind::AfterCollapse {
                given,
                outcome,
                target,
                expected,
            } => {
                let collapsed = collapse(self.pre(), self.observable(given)?, *outcome, tol)?;
                let d = born_distribution(&collapsed, self.observable(target)?, tol)?;
                let (want, ok) = match expected {
                    CertaintyExpectation::Certain(v) => (
                        format!("certain {v}"),
                        (d.probability_of(*v, tol.value_match) - 1.0).abs() <= eps,
                    ),
                    CertaintyExpectation::Uncertain => (
                        "no certain outcome".to_string(),
                        d.outcomes()
                            .iter()
                            .filter(|o| o.probability > eps)
                            .all(|o| o.probability < 1.0 - eps)
                            && d.outcomes().iter().filter(|o| o.probability > eps).count() >= 2,
                    ),
                };
                let actual = render_distribution(&d);
                dist_out = Some(d);
                (want, actual, ok)
            }
            FactKind::ParityAssignmentCount {
                sets,
                count,
                search_space,
            } => {
                let sets = sets
                    .iter()
                    .map(|s| s.iter().map(|o| self.observable(o).cloned()).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let sys = extract_state_parity_constraints(&sets, self.pre(), tol)?;
                let r = exhaustive_assignment_search(&sys)?;
                (
                    format!("{count} of {search_space}"),
                    format!("{} of {}", r.count, r.search_space),
                    r.count == *count && r.search_space == *search_space,
                )
            }
            FactKind::KsColoringCount {
                directions,
                triads,
                count,
            } => {
                let dirs = directions
                    .iter()
                    .map(|&[x, y, z]| Direction::normalized(x, y, z))
                    .collect::<Result<Vec<_>>>()?;
                let r = ks_coloring_search(&KsInstance::new(dirs, triads.clone(), tol)?)?;
                (count.to_string(), r.count.to_string(), r.count == *count)
            }
        };
        Ok(FactResult {
            description: fact.describe(),
            provenance: fact.provenance,
            expected,
            actual,
            distribution: dist_out,
            passed,
        })
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            dim_per_site: self.dim_per_site,
            n_sites: self.n_sites,
            pre: pairs_of(self.pre()),
            post: self.post().map(pairs_of),
            observables: self
                .observables
                .iter()
                .map(|o| ObservableSpec {
                    name: o.label().to_string(),
                    pauli_string: None,
                    matrix: Some(o.matrix().rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data")
    }
}

fn checked_dim(dim_per_site: usize, n_sites: usize) -> Result<usize> {
    if dim_per_site == 0 || n_sites == 0 {
        return Err(Error::EmptyDimension);
    }
    let cap = Tolerances::default().max_dim;
    let n = u32::try_from(n_sites).map_err(|_| Error::DimensionCap { dim: usize::MAX, cap })?;
    match dim_per_site.checked_pow(n) {
        Some(d) if d <= cap => Ok(d),
        Some(d) => Err(Error::DimensionCap { dim: d, cap }),
        None => Err(Error::DimensionCap { dim: usize::MAX, cap }),
    }
}

fn pairs_of(s: &StateVector) -> Vec<[f64; 2]> {
    s.amps().iter().map(|z| [z.re, z.im]).collect()
}

fn render_pairs(pairs: &[(f64, f64)]) -> String {
    let parts: Vec<String> = pairs.iter().map(|(v, p)| format!("{v}: {p}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn render_distribution(d: &OutcomeDistribution) -> String {
    let pairs: Vec<(f64, f64)> = d
        .outcomes()
        .iter()
        .map(|o| (clean_zero(o.eigenvalue), o.probability))
        .collect();
    render_pairs(&pairs)
}

fn render_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{}", clean_zero((v * 1e9).round() / 1e9))).collect();
    format!("({})", parts.join(", "))
}

fn render_option(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

// Avoids printing "-0".
fn clean_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// The scenario file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dim_per_site: usize,
    pub n_sites: usize,
    pub pre: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<Vec<[f64; 2]>>,
    pub observables: Vec<ObservableSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_string: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn state_from_pairs(pairs: &[[f64; 2]], dim: usize, what: &str) -> Result<StateVector> {
    if pairs.len() != dim {
        return Err(Error::Schema(format!("{what} has {} amplitudes, expected {dim}", pairs.len())));
    }
    let amps: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
    StateVector::new(amps.clone()).or_else(|_| StateVector::normalized(amps))
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Validates the file and builds a fact-free scenario named `name`.
    /// Amplitudes are normalized if needed.
    pub fn into_scenario(self, name: &str) -> Result<Scenario> {
        let dim = checked_dim(self.dim_per_site, self.n_sites)?;
        let pre = state_from_pairs(&self.pre, dim, "pre")?;
        let post = self.post.as_deref().map(|p| state_from_pairs(p, dim, "post")).transpose()?;
        let observables = self
            .observables
            .into_iter()
            .map(|spec| match (spec.pauli_string, spec.matrix) {
                (Some(s), None) => {
                    if self.dim_per_site != 2 {
                        return Err(Error::Schema("pauli_string needs dim_per_site = 2".into()));
                    }
                    parse_pauli_string(&s, self.n_sites)?.relabel(spec.name)
                }
                (None, Some(rows)) => {
                    let rows: Vec<Vec<C64>> = rows
                        .into_iter()
                        .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                        .collect();
                    if rows.len() != dim {
                        return Err(Error::Schema(format!(
                            "observable '{}' has {} rows, expected {dim}",
                            spec.name,
                            rows.len()
                        )));
                    }
                    Observable::new(spec.name, Matrix::from_rows(rows)?)
                }
                _ => Err(Error::Schema(format!(
                    "observable '{}' needs exactly one of pauli_string or matrix",
                    spec.name
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(
            name,
            "loaded from file",
            self.dim_per_site,
            self.n_sites,
            PrePostSelection::new(pre, post)?,
            observables,
            vec![],
        )
    }
}

pub const CATALOG: [&str; 5] = ["epr-bohm-vaidman", "ghz3", "ghz4", "hardy", "spin1-ks"];

pub fn build(name: &str) -> Result<Scenario> {
    match name {
        "epr-bohm-vaidman" => Ok(build_epr_bohm_vaidman()),
        "ghz3" => Ok(build_ghz3()),
        "ghz4" => Ok(build_ghz4()),
        "hardy" => build_hardy(&HardyParameters::symmetric()),
        "spin1-ks" => Ok(build_spin1_ks()),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

const EXACT: f64 = 1e-12;
const PROB: f64 = 1e-9;

/// Singlet pre-selection, `|↑₁ₓ↑₂ᵧ⟩` post-selection, and the pair
/// `σ₁ᵧ, σ₂ₓ` with its sum and product.
pub fn build_epr_bohm_vaidman() -> Scenario {
    let post = spin_up(Axis::X).tensor(&spin_up(Axis::Y)).expect("dim 4");
    let s1y = pair_spin(Axis::Y, 0);
    let s2x = pair_spin(Axis::X, 1);
    let prod = product(&s1y, &s2x).expect("commuting");
    let sum = weighted_sum(1.0, &s1y, 1.0, &s2x).expect("same dim");
    let dist = |o: &Observable, expected: Vec<(f64, f64)>| {
        Fact::new(
            FactKind::Distribution {
                observable: o.label().to_string(),
                expected,
            },
            Provenance::Paper,
            PROB,
        )
    };
    let facts = vec![
        dist(&s1y, vec![(-1.0, 1.0), (1.0, 0.0)]),
        dist(&s2x, vec![(-1.0, 1.0), (1.0, 0.0)]),
        dist(&prod, vec![(-1.0, 1.0), (1.0, 0.0)]),
        dist(&sum, vec![(-2.0, 1.0 / 6.0), (0.0, 2.0 / 3.0), (2.0, 1.0 / 6.0)]),
        Fact::new(
            FactKind::ElementOfReality {
                observable: sum.label().to_string(),
                value: None,
            },
            Provenance::Paper,
            PROB,
        ),
    ];
    Scenario::new(
        "epr-bohm-vaidman",
        "singlet pre-selected, |up_1x up_2y> post-selected; sum and product rules for s1y, s2x",
        2,
        2,
        PrePostSelection::new(singlet(), Some(post)).expect("dims agree"),
        vec![s1y, s2x, prod, sum],
        facts,
    )
    .expect("consistent literal")
}

/// `(|↑↑↑⟩ − |↓↓↓⟩)/√2` with `XYY, YXY, YYX, XXX` and their site factors.
pub fn build_ghz3() -> Scenario {
    let words = ["XYY", "YXY", "YYX", "XXX"];
    let eigen = [1.0, 1.0, 1.0, -1.0];
    let mut observables: Vec<Observable> =
        words.iter().map(|w| parse_pauli_string(w, 3).expect("literal")).collect();
    let sets = ghz3_sets();
    for set in &sets {
        for o in set {
            if !observables.iter().any(|p| p.label() == o.label()) {
                observables.push(o.clone());
            }
        }
    }
    let mut facts: Vec<Fact> = words
        .iter()
        .zip(eigen)
        .map(|(w, e)| {
            Fact::new(
                FactKind::Eigenvalue {
                    observable: w.to_string(),
                    eigenvalue: e,
                },
                Provenance::Paper,
                EXACT,
            )
        })
        .collect();
    facts.push(Fact::new(
        FactKind::ParityAssignmentCount {
            sets: sets
                .iter()
                .map(|s| s.iter().map(|o| o.label().to_string()).collect())
                .collect(),
            count: 0,
            search_space: 64,
        },
        Provenance::Derived,
        0.0,
    ));
    Scenario::new(
        "ghz3",
        "three-particle GHZ state; four triple products and the parity contradiction",
        2,
        3,
        PrePostSelection::pre_only(ghz3_state()),
        observables,
        facts,
    )
    .expect("consistent literal")
}

/// `(|↑↑↓↓⟩ − |↓↓↑↑⟩)/√2`.
pub fn ghz4_state() -> StateVector {
    signed_pair(16, 0b0011, 0b1100).expect("dim 16")
}

/// GHZ4 at all azimuthal angles zero.
pub fn build_ghz4() -> Scenario {
    build_ghz4_with_angles([0.0; 4]).expect("finite angles")
}

/// GHZ4 with in-plane spin `σ_φ = cos φ σₓ + sin φ σᵧ` on each particle. The
/// expected correlation is `−cos(φ₁ + φ₂ − φ₃ − φ₄)`.
pub fn build_ghz4_with_angles(phis: [f64; 4]) -> Result<Scenario> {
    let mut observables = Vec::with_capacity(5);
    let mut prod = Matrix::identity(16);
    for (k, &phi) in phis.iter().enumerate() {
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        let o = on_site(&spin_along(&Direction::azimuthal(phi)), k, 4)?.relabel(format!("sphi{}", k + 1))?;
        prod = prod.matmul(o.matrix())?;
        observables.push(o);
    }
    let label = "sphi1*sphi2*sphi3*sphi4";
    observables.push(Observable::new(label, prod)?);
    let facts = vec![Fact::new(
        FactKind::Expectation {
            observable: label.to_string(),
            value: -(phis[0] + phis[1] - phis[2] - phis[3]).cos(),
        },
        Provenance::Derived,
        EXACT,
    )];
    Scenario::new(
        "ghz4",
        "four-particle GHZ state with co-planar spin measurements",
        2,
        4,
        PrePostSelection::pre_only(ghz4_state()),
        observables,
        facts,
    )
}

/// Amplitudes of `a|v₁v₂⟩ + b₁|u₁v₂⟩ + b₂|v₁u₂⟩`, normalized on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyParameters {
    a: C64,
    b1: C64,
    b2: C64,
}

impl HardyParameters {
    pub fn new(a: C64, b1: C64, b2: C64) -> Result<Self> {
        let norm = (a.norm_sqr() + b1.norm_sqr() + b2.norm_sqr()).sqrt();
        if !norm.is_finite() || norm <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateHardyParameters);
        }
        let (a, b1, b2) = (a / norm, b1 / norm, b2 / norm);
        if [a, b1, b2].iter().any(|z| z.norm() <= 1e-12) {
            return Err(Error::DegenerateHardyParameters);
        }
        Ok(HardyParameters { a, b1, b2 })
    }

    /// `a = b₁ = b₂ = 1/√3`.
    pub fn symmetric() -> Self {
        let one = C64::new(1.0, 0.0);
        Self::new(one, one, one).expect("nonzero")
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b1(&self) -> C64 {
        self.b1
    }

    pub fn b2(&self) -> C64 {
        self.b2
    }

    /// Basis per particle is `{|v⟩, |u⟩}` = indices `{0, 1}`.
    pub fn state(&self) -> StateVector {
        let zero = C64::new(0.0, 0.0);
        // |v1 v2> = 0, |v1 u2> = 1, |u1 v2> = 2, |u1 u2> = 3
        StateVector::new(vec![self.a, self.b2, self.b1, zero]).expect("normalized on construction")
    }

    /// `|wᵢ⟩ ∝ a|v⟩ + bᵢ|u⟩` for particle `i ∈ {1, 2}`.
    pub fn w(&self, particle: usize) -> StateVector {
        let b = if particle == 1 { self.b1 } else { self.b2 };
        StateVector::normalized(vec![self.a, b]).expect("a is nonzero")
    }
}

fn projector_observable(label: &str, v: &StateVector, site: usize) -> Result<Observable> {
    let local = Observable::new(label, v.projector())?;
    on_site(&local, site, 2)?.relabel(label)
}

/// Hardy's two-particle state with `Uᵢ = |uᵢ⟩⟨uᵢ|` and `Wᵢ = |wᵢ⟩⟨wᵢ|`.
pub fn build_hardy(p: &HardyParameters) -> Result<Scenario> {
    let u = StateVector::basis(2, 1)?;
    let observables = vec![
        projector_observable("U1", &u, 0)?,
        projector_observable("U2", &u, 1)?,
        projector_observable("W1", &p.w(1), 0)?,
        projector_observable("W2", &p.w(2), 1)?,
    ];
    let ab = |o: &str, v: f64| (o.to_string(), v);
    let after = |given: &str, outcome: f64, target: &str, expected: CertaintyExpectation| {
        Fact::new(
            FactKind::AfterCollapse {
                given: given.into(),
                outcome,
                target: target.into(),
                expected,
            },
            Provenance::Paper,
            PROB,
        )
    };
    let facts = vec![
        Fact::new(
            FactKind::JointProbability {
                outcomes: vec![ab("U1", 1.0), ab("U2", 1.0)],
                expected: ProbabilityExpectation::Exactly(0.0),
            },
            Provenance::Paper,
            EXACT,
        ),
        after("U2", 0.0, "W1", CertaintyExpectation::Certain(1.0)),
        after("U1", 0.0, "W2", CertaintyExpectation::Certain(1.0)),
        Fact::new(
            FactKind::JointProbability {
                outcomes: vec![ab("W1", 0.0), ab("W2", 0.0)],
                expected: ProbabilityExpectation::Positive,
            },
            Provenance::Paper,
            EXACT,
        ),
        Fact::new(
            FactKind::JointProbability {
                outcomes: vec![ab("W1", 0.0), ab("W2", 0.0)],
                expected: ProbabilityExpectation::Exactly(hardy_w_zero_probability(p)),
            },
            Provenance::Derived,
            PROB,
        ),
        after("U2", 1.0, "U1", CertaintyExpectation::Certain(0.0)),
        after("U2", 1.0, "W1", CertaintyExpectation::Uncertain),
        after("U2", 1.0, "W2", CertaintyExpectation::Uncertain),
    ];
    Scenario::new(
        "hardy",
        "Hardy-Goldstein two-particle state",
        2,
        2,
        PrePostSelection::pre_only(p.state()),
        observables,
        facts,
    )
}

/// Closed form `|a b₁ b₂|² / ((|a|² + |b₁|²)(|a|² + |b₂|²))` for
/// `p(W₁ = 0, W₂ = 0)`; `1/12` at the symmetric point.
pub fn hardy_w_zero_probability(p: &HardyParameters) -> f64 {
    let (a, b1, b2) = (p.a.norm_sqr(), p.b1.norm_sqr(), p.b2.norm_sqr());
    a * b1 * b2 / ((a + b1) * (a + b2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    /// (i) `p(U₁ = 1, U₂ = 1)`.
    pub p_u1_u2_both_one: f64,
    /// (ii) `W₁` after collapsing on `U₂ = 0`.
    pub w1_after_u2_zero: OutcomeDistribution,
    /// (ii) `W₂` after collapsing on `U₁ = 0`.
    pub w2_after_u1_zero: OutcomeDistribution,
    /// (iii) `p(W₁ = 0, W₂ = 0)`.
    pub p_w1_w2_both_zero: f64,
    /// The `U₂ = 1` branch: `U₁`, `W₁`, `W₂` on the collapsed state.
    pub u1_after_u2_one: OutcomeDistribution,
    pub w1_after_u2_one: OutcomeDistribution,
    pub w2_after_u2_one: OutcomeDistribution,
    pub all_hold: bool,
}

pub fn hardy_facts(p: &HardyParameters, tol: &Tolerances) -> Result<HardyReport> {
    let s = build_hardy(p)?;
    let obs = |n: &str| s.observable(n).expect("built above");
    let psi = s.pre();
    let p_u1_u2_both_one = joint_probability(psi, &[(obs("U1"), 1.0), (obs("U2"), 1.0)], tol)?;
    let u2_zero = collapse(psi, obs("U2"), 0.0, tol)?;
    let u1_zero = collapse(psi, obs("U1"), 0.0, tol)?;
    let u2_one = collapse(psi, obs("U2"), 1.0, tol)?;
    let w1_after_u2_zero = born_distribution(&u2_zero, obs("W1"), tol)?;
    let w2_after_u1_zero = born_distribution(&u1_zero, obs("W2"), tol)?;
    let p_w1_w2_both_zero = joint_probability(psi, &[(obs("W1"), 0.0), (obs("W2"), 0.0)], tol)?;
    let u1_after_u2_one = born_distribution(&u2_one, obs("U1"), tol)?;
    let w1_after_u2_one = born_distribution(&u2_one, obs("W1"), tol)?;
    let w2_after_u2_one = born_distribution(&u2_one, obs("W2"), tol)?;
    let all_hold = s.check_facts(tol)?.iter().all(|f| f.passed);
    Ok(HardyReport {
        p_u1_u2_both_one,
        w1_after_u2_zero,
        w2_after_u1_zero,
        p_w1_w2_both_zero,
        u1_after_u2_one,
        w1_after_u2_one,
        w2_after_u2_one,
        all_hold,
    })
}

/// Spin 1 with the squared components along the coordinate axes.
pub fn build_spin1_ks() -> Scenario {
    let (jx, jy, jz) = spin1_operators();
    let sq = |o: &Observable, l: &str| o.squared().relabel(l).expect("nonempty");
    let (jx2, jy2, jz2) = (sq(&jx, "Jx2"), sq(&jy, "Jy2"), sq(&jz, "Jz2"));
    let total = jx2
        .matrix()
        .add(jy2.matrix())
        .and_then(|m| m.add(jz2.matrix()))
        .and_then(|m| Observable::new("J2", m))
        .expect("3x3 operands");
    let names = ["Jx2", "Jy2", "Jz2", "J2"];
    let mut facts = vec![Fact::new(
        FactKind::ScalarIdentity {
            observable: "J2".into(),
            scalar: 2.0,
        },
        Provenance::Paper,
        EXACT,
    )];
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            facts.push(Fact::new(
                FactKind::Commute {
                    a: names[i].into(),
                    b: names[j].into(),
                },
                Provenance::Paper,
                EXACT,
            ));
        }
    }
    facts.push(Fact::new(
        FactKind::JointSpectrumPermutations {
            observables: vec!["Jx2".into(), "Jy2".into(), "Jz2".into()],
            values: vec![0.0, 1.0, 1.0],
        },
        Provenance::Paper,
        PROB,
    ));
    facts.push(Fact::new(
        FactKind::KsColoringCount {
            directions: vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            triads: vec![[0, 1, 2]],
            count: 3,
        },
        Provenance::Trivial,
        0.0,
    ));
    let h = FRAC_1_SQRT_2;
    let pre = StateVector::from_real(&[h, 0.0, h]).expect("nonzero");
    Scenario::new(
        "spin1-ks",
        "spin-1 squared components: J^2 = Jx^2 + Jy^2 + Jz^2 = 2",
        3,
        1,
        PrePostSelection::pre_only(pre),
        vec![jx2, jy2, jz2, total],
        facts,
    )
    .expect("consistent literal")
}

/// All single-site Pauli observables on every site, named like `X_1`; handy
/// for files built by hand.
pub fn pauli_site_observables(n_sites: usize) -> Result<Vec<Observable>> {
    let mut out = Vec::with_capacity(3 * n_sites);
    for site in 0..n_sites {
        for axis in Axis::ALL {
            out.push(on_site(&pauli(axis), site, n_sites)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn every_builtin_passes() {
        for name in CATALOG {
            let s = build(name).unwrap();
            for r in s.check_facts(&tol()).unwrap() {
                assert!(r.passed, "{name}: {} expected {} got {}", r.description, r.expected, r.actual);
            }
        }
    }

    #[test]
    fn unknown_scenario() {
        assert_eq!(build("nope").unwrap_err(), Error::UnknownScenario("nope".into()));
    }

    #[test]
    fn vaidman_post_overlaps_pre() {
        // <up_1x up_2y | singlet> = (1/2)(1, i, 1, i)^* . (0, 1, -1, 0)/sqrt2 = (-i - 1)/(2 sqrt 2)
        let s = build_epr_bohm_vaidman();
        let ip = s.post().unwrap().inner(s.pre()).unwrap();
        let want = C64::new(-1.0, -1.0) / (2.0 * std::f64::consts::SQRT_2);
        assert!((ip - want).norm() < 1e-15);
    }

    #[test]
    fn file_round_trip_is_byte_identical() {
        for name in CATALOG {
            let s = build(name).unwrap();
            let json = s.to_json();
            let back = ScenarioFile::from_json(&json).unwrap().into_scenario(name).unwrap();
            assert_eq!(back.pre(), s.pre());
            assert_eq!(back.post(), s.post());
            assert_eq!(back.observables(), s.observables());
            assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn file_schema_errors() {
        let bad_len = r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[1,0]], "observables": []}"#;
        assert!(matches!(
            ScenarioFile::from_json(bad_len).unwrap().into_scenario("f"),
            Err(Error::Schema(_))
        ));
        let both = r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[1,0],[0,0]],
            "observables": [{"name": "z", "pauli_string": "Z", "matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]}]}"#;
        assert!(matches!(
            ScenarioFile::from_json(both).unwrap().into_scenario("f"),
            Err(Error::Schema(_))
        ));
        let extra = r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[1,0],[0,0]], "observables": [], "bogus": 1}"#;
        assert!(ScenarioFile::from_json(extra).is_err());
        let non_herm = r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[1,0],[0,0]],
            "observables": [{"name": "m", "matrix": [[[0,0],[1,0]],[[0,0],[0,0]]]}]}"#;
        assert!(matches!(
            ScenarioFile::from_json(non_herm).unwrap().into_scenario("f"),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn file_pre_is_normalized() {
        let text = r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[3,0],[4,0]],
            "observables": [{"name": "x", "pauli_string": "X"}]}"#;
        let s = ScenarioFile::from_json(text).unwrap().into_scenario("f").unwrap();
        assert!((s.pre().amps()[0].re - 0.6).abs() < 1e-15);
        assert!(s.post().is_none());
    }

    #[test]
    fn ghz3_eigenvalues() {
        let s = build_ghz3();
        for (w, e) in [("XYY", 1.0), ("YXY", 1.0), ("YYX", 1.0), ("XXX", -1.0)] {
            let image = s.observable(w).unwrap().matrix().apply_state(s.pre()).unwrap();
            for (x, p) in image.iter().zip(s.pre().amps()) {
                assert!((x - p * e).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn ghz4_zero_angle_correlation() {
        // XXXX maps |0011> to |1100>; <psi|XXXX|psi> = (1/2)(-1 - 1) = -1
        let s = build_ghz4();
        let m = s.observable("sphi1*sphi2*sphi3*sphi4").unwrap().matrix();
        let e = m.sandwich(s.pre(), s.pre()).unwrap();
        assert!((e.re + 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
    }

    #[test]
    fn ghz4_general_angles() {
        let s = build_ghz4_with_angles([0.3, -1.1, 0.7, 2.0]).unwrap();
        assert!(s.check_facts(&tol()).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn hardy_symmetric_point() {
        let p = HardyParameters::symmetric();
        assert!((hardy_w_zero_probability(&p) - 1.0 / 12.0).abs() < 1e-15);
        let r = hardy_facts(&p, &tol()).unwrap();
        assert!(r.all_hold);
        assert!(r.p_u1_u2_both_one.abs() < 1e-12);
        assert!((r.p_w1_w2_both_zero - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn hardy_collapse_is_w1_v2() {
        let p = HardyParameters::symmetric();
        let s = build_hardy(&p).unwrap();
        let c = collapse(s.pre(), s.observable("U2").unwrap(), 0.0, &tol()).unwrap();
        let v = StateVector::basis(2, 0).unwrap();
        let w1v2 = p.w(1).tensor(&v).unwrap();
        assert!(c.same_ray(&w1v2, 1e-12));
    }

    #[test]
    fn degenerate_hardy_rejected() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        assert_eq!(HardyParameters::new(one, zero, one), Err(Error::DegenerateHardyParameters));
        assert_eq!(HardyParameters::new(zero, zero, zero), Err(Error::DegenerateHardyParameters));
    }

    #[test]
    fn facts_must_reference_declared_observables() {
        let fact = Fact::new(
            FactKind::Expectation {
                observable: "missing".into(),
                value: 0.0,
            },
            Provenance::Trivial,
            0.0,
        );
        let err = Scenario::new(
            "x",
            "",
            2,
            1,
            PrePostSelection::pre_only(spin_up(Axis::Z)),
            vec![pauli(Axis::Z)],
            vec![fact],
        );
        assert_eq!(err.unwrap_err(), Error::UnknownObservable("missing".into()));
    }

    #[test]
    fn failing_fact_reports_values() {
        let fact = Fact::new(
            FactKind::Expectation {
                observable: "Z".into(),
                value: -1.0,
            },
            Provenance::Trivial,
            1e-12,
        );
        let s = Scenario::new(
            "x",
            "",
            2,
            1,
            PrePostSelection::pre_only(spin_up(Axis::Z)),
            vec![pauli(Axis::Z)],
            vec![fact],
        )
        .unwrap();
        let r = &s.check_facts(&tol()).unwrap()[0];
        assert!(!r.passed);
        assert_eq!((r.expected.as_str(), r.actual.as_str()), ("-1", "1"));
    }

    #[test]
    fn pauli_site_observables_are_labeled() {
        let obs = pauli_site_observables(2).unwrap();
        let labels: Vec<&str> = obs.iter().map(|o| o.label()).collect();
        assert_eq!(labels, ["X_1", "Y_1", "Z_1", "X_2", "Y_2", "Z_2"]);
    }
}
