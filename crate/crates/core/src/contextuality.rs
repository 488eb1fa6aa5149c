//! Hidden-variable assignment checks.
//!
//! A noncontextual hidden variable `λ` assigns each ±1-valued observable a
//! definite value `{A}(λ)`. When a family of commuting observables multiplies
//! to `±I`, or has a known state as a `±1` eigenvector, substituting values
//! for operators turns the family into a parity constraint. This module
//! extracts those constraints numerically, enumerates all assignments, counts
//! spin-1 Kochen–Specker colorings, and evaluates discrete LHV correlations
//! against quantum ones.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, StateVector};
use crate::observables::{on_site, parse_pauli_string, pauli, spin_along, Axis, Direction, Observable};
use crate::tolerance::Tolerances;

pub const MAX_SEARCH_VARIABLES: usize = 30;
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn from_real(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

/// `Π {Aᵢ} = sign` over the listed variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityConstraint {
    pub vars: Vec<String>,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConstraintSystem")]
pub struct ConstraintSystem {
    variables: Vec<String>,
    constraints: Vec<ParityConstraint>,
}

#[derive(Deserialize)]
struct RawConstraintSystem {
    variables: Vec<String>,
    constraints: Vec<ParityConstraint>,
}

impl TryFrom<RawConstraintSystem> for ConstraintSystem {
    type Error = Error;

    fn try_from(raw: RawConstraintSystem) -> Result<Self> {
        ConstraintSystem::new(raw.variables, raw.constraints)
    }
}

impl ConstraintSystem {
    pub fn new(variables: Vec<String>, constraints: Vec<ParityConstraint>) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::Schema(format!("variable '{v}' declared twice")));
            }
        }
        for (k, c) in constraints.iter().enumerate() {
            for (i, v) in c.vars.iter().enumerate() {
                if !variables.contains(v) {
                    return Err(Error::UnknownVariable(v.clone()));
                }
                if c.vars[..i].contains(v) {
                    return Err(Error::RepeatedVariable(k));
                }
            }
        }
        Ok(ConstraintSystem {
            variables,
            constraints,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[ParityConstraint] {
        &self.constraints
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    fn index_of(&self, label: &str) -> usize {
        self.variables
            .iter()
            .position(|v| v == label)
            .expect("validated on construction")
    }

    /// Whether `values` (aligned with [`variables`](Self::variables)) meets
    /// every constraint.
    pub fn satisfied_by(&self, values: &[i8]) -> bool {
        self.constraints.iter().all(|c| {
            let prod: i8 = c.vars.iter().map(|v| values[self.index_of(v)]).product();
            prod == c.sign.value()
        })
    }
}

/// Certifies unsatisfiability without search: every variable occurs an even
/// number of times across all constraints, so the product of all left-hand
/// sides is `+1` for any assignment, while the product of the signs is `−1`.
pub fn parity_obstruction(system: &ConstraintSystem) -> bool {
    let mut occurrences = vec![0usize; system.variables.len()];
    for c in &system.constraints {
        for v in &c.vars {
            occurrences[system.index_of(v)] += 1;
        }
    }
    let sign: i8 = system.constraints.iter().map(|c| c.sign.value()).product();
    occurrences.iter().all(|n| n % 2 == 0) && sign == -1
}

fn validate_sets(sets: &[Vec<Observable>], tol: &Tolerances) -> Result<Vec<String>> {
    let mut variables: Vec<String> = Vec::new();
    let mut seen: BTreeMap<String, Matrix> = BTreeMap::new();
    for set in sets {
        for (i, a) in set.iter().enumerate() {
            let id = Matrix::identity(a.dim());
            if a.matrix().matmul(a.matrix())?.distance(&id) > tol.hermitian {
                return Err(Error::NotInvolution {
                    label: a.label().to_string(),
                });
            }
            match seen.get(a.label()) {
                Some(m) if m.distance(a.matrix()) > tol.hermitian => {
                    return Err(Error::LabelConflict(a.label().to_string()))
                }
                Some(_) => {}
                None => {
                    seen.insert(a.label().to_string(), a.matrix().clone());
                    variables.push(a.label().to_string());
                }
            }
            for b in &set[i + 1..] {
                a.ensure_commutes(b, tol)?;
            }
        }
    }
    Ok(variables)
}

fn set_product(set: &[Observable]) -> Result<Matrix> {
    let (first, rest) = set.split_first().ok_or(Error::EmptyDimension)?;
    rest.iter()
        .try_fold(first.matrix().clone(), |acc, o| acc.matmul(o.matrix()))
}

fn constraint_vars(set: &[Observable], k: usize) -> Result<Vec<String>> {
    let vars: Vec<String> = set.iter().map(|o| o.label().to_string()).collect();
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::RepeatedVariable(k));
        }
    }
    Ok(vars)
}

/// One constraint per set of commuting involutions whose ordered product is
/// `+I` or `−I`.
///
/// A set may repeat an observable (its square is `I`); repeated labels are
/// dropped pairwise from the emitted constraint.
pub fn extract_parity_constraints(sets: &[Vec<Observable>], tol: &Tolerances) -> Result<ConstraintSystem> {
    let variables = validate_sets(sets, tol)?;
    let mut constraints = Vec::with_capacity(sets.len());
    for (k, set) in sets.iter().enumerate() {
        let prod = set_product(set)?;
        let id = Matrix::identity(prod.dim());
        let plus = prod.distance(&id);
        let minus = prod.distance(&id.scale(crate::linalg::C64::new(-1.0, 0.0)));
        let sign = if plus <= tol.signed_identity {
            Sign::Plus
        } else if minus <= tol.signed_identity {
            Sign::Minus
        } else {
            return Err(Error::ProductNotSignedIdentity {
                set: k,
                deviation: plus.min(minus),
            });
        };
        constraints.push(ParityConstraint {
            vars: cancel_pairs(set),
            sign,
        });
    }
    ConstraintSystem::new(variables, constraints)
}

fn cancel_pairs(set: &[Observable]) -> Vec<String> {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for o in set {
        match counts.iter_mut().find(|(l, _)| l == o.label()) {
            Some((_, n)) => *n += 1,
            None => counts.push((o.label().to_string(), 1)),
        }
    }
    counts
        .into_iter()
        .filter(|(_, n)| n % 2 == 1)
        .map(|(l, _)| l)
        .collect()
}

/// One constraint per set of commuting involutions whose product has `state`
/// as a `±1` eigenvector; the eigenvalue is the constraint sign.
pub fn extract_state_parity_constraints(
    sets: &[Vec<Observable>],
    state: &StateVector,
    tol: &Tolerances,
) -> Result<ConstraintSystem> {
    let variables = validate_sets(sets, tol)?;
    let mut constraints = Vec::with_capacity(sets.len());
    for (k, set) in sets.iter().enumerate() {
        let prod = set_product(set)?;
        let image = prod.apply_state(state)?;
        let eigen = crate::linalg::inner_slice(state.amps(), &image);
        let residual = image
            .iter()
            .zip(state.amps())
            .map(|(x, s)| (x - eigen * s).norm())
            .fold(0.0, f64::max);
        if residual > tol.signed_identity || (eigen.norm() - 1.0).abs() > tol.signed_identity || eigen.im.abs() > tol.signed_identity {
            return Err(Error::ProductNotStateEigen { set: k });
        }
        constraints.push(ParityConstraint {
            vars: constraint_vars(set, k)?,
            sign: Sign::from_real(eigen.re),
        });
    }
    ConstraintSystem::new(variables, constraints)
}

/// A ±1 assignment. `index` has bit `i` set when variable `i` is −1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub index: u64,
    pub values: Vec<i8>,
}

impl Assignment {
    fn from_index(index: u64, n: usize) -> Self {
        Assignment {
            index,
            values: (0..n).map(|i| if index >> i & 1 == 1 { -1 } else { 1 }).collect(),
        }
    }

    pub fn to_map<'a>(&self, variables: &'a [String]) -> BTreeMap<&'a str, i8> {
        variables.iter().map(String::as_str).zip(self.values.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub variables: Vec<String>,
    pub search_space: u64,
    pub count: u64,
    /// The first satisfying assignments in index order, at most 16.
    pub witnesses: Vec<Assignment>,
}

const CHUNK_BITS: u32 = 16;

/// Counts every ±1 assignment meeting all constraints. The work is split
/// across threads; the count and the witness list do not depend on how.
pub fn exhaustive_assignment_search(system: &ConstraintSystem) -> Result<SearchResult> {
    let n = system.variables.len();
    if n > MAX_SEARCH_VARIABLES {
        return Err(Error::TooManyVariables {
            count: n,
            max: MAX_SEARCH_VARIABLES,
        });
    }
    // constraint as (bitmask of its variables, required parity of −1 count)
    let masks: Vec<(u64, u32)> = system
        .constraints
        .iter()
        .map(|c| {
            let mask = c.vars.iter().fold(0u64, |m, v| m | 1 << system.index_of(v));
            (mask, u32::from(c.sign == Sign::Minus))
        })
        .collect();
    let satisfies = |index: u64| masks.iter().all(|&(m, p)| (index & m).count_ones() & 1 == p);

    let space = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let partials: Vec<(u64, Vec<u64>)> = (0..space / chunk)
        .into_par_iter()
        .map(|c| {
            let mut count = 0;
            let mut found = Vec::new();
            for index in c * chunk..(c + 1) * chunk {
                if satisfies(index) {
                    count += 1;
                    if found.len() < MAX_WITNESSES {
                        found.push(index);
                    }
                }
            }
            (count, found)
        })
        .collect();

    let count = partials.iter().map(|(c, _)| c).sum();
    let witnesses = partials
        .into_iter()
        .flat_map(|(_, w)| w)
        .take(MAX_WITNESSES)
        .map(|i| Assignment::from_index(i, n))
        .collect();
    Ok(SearchResult {
        variables: system.variables.clone(),
        search_space: space,
        count,
        witnesses,
    })
}

fn labeled(o: Observable, label: &str) -> Observable {
    o.relabel(label).expect("nonempty label")
}

/// The GHZ operator families `XYY, YXY, YYX, XXX` split into site factors,
/// with variables `x1, y1, x2, y2, x3, y3`.
pub fn ghz3_sets() -> Vec<Vec<Observable>> {
    let site = |axis: Axis, k: usize| {
        labeled(
            on_site(&pauli(axis), k, 3).expect("site < 3"),
            &format!("{axis}{}", k + 1),
        )
    };
    ["XYY", "YXY", "YYX", "XXX"]
        .iter()
        .map(|word| {
            word.chars()
                .enumerate()
                .map(|(k, c)| site(Axis::try_from(c).expect("pauli letter"), k))
                .collect()
        })
        .collect()
}

/// `(|↑↑↑⟩ − |↓↓↓⟩)/√2`.
pub fn ghz3_state() -> StateVector {
    crate::states::signed_pair(8, 0, 7).expect("dim 8")
}

pub fn ghz3_constraints(tol: &Tolerances) -> Result<ConstraintSystem> {
    extract_state_parity_constraints(&ghz3_sets(), &ghz3_state(), tol)
}

/// Two-qubit observables of the magic square, row-major.
pub const MERMIN_SQUARE: [[&str; 3]; 3] = [["XI", "IX", "XX"], ["IY", "YI", "YY"], ["XY", "YX", "ZZ"]];

/// Three rows then three columns of the magic square.
pub fn mermin_square_sets() -> Vec<Vec<Observable>> {
    let cell = |r: usize, c: usize| parse_pauli_string(MERMIN_SQUARE[r][c], 2).expect("valid literal");
    let rows = (0..3).map(|r| (0..3).map(|c| cell(r, c)).collect());
    let cols = (0..3).map(|c| (0..3).map(|r| cell(r, c)).collect());
    rows.chain(cols).collect()
}

pub fn mermin_square_constraints(tol: &Tolerances) -> Result<ConstraintSystem> {
    extract_parity_constraints(&mermin_square_sets(), tol)
}

/// Directions and orthogonal triads for a spin-1 coloring problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsInstance {
    directions: Vec<Direction>,
    triads: Vec<[usize; 3]>,
}

#[derive(Deserialize)]
struct RawKsInstance {
    directions: Vec<[f64; 3]>,
    triads: Vec<[usize; 3]>,
}

impl KsInstance {
    pub fn new(directions: Vec<Direction>, triads: Vec<[usize; 3]>, tol: &Tolerances) -> Result<Self> {
        for (index, t) in triads.iter().enumerate() {
            if t.iter().any(|&i| i >= directions.len()) {
                return Err(Error::InvalidTriad {
                    index,
                    reason: "direction index out of range".into(),
                });
            }
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(Error::InvalidTriad {
                    index,
                    reason: "repeated direction".into(),
                });
            }
            let [a, b, c] = t.map(|i| directions[i]);
            if a.dot(&b).abs() > tol.direction || a.dot(&c).abs() > tol.direction || b.dot(&c).abs() > tol.direction {
                return Err(Error::NonOrthogonalTriad { index });
            }
        }
        Ok(KsInstance { directions, triads })
    }

    /// Parses `{"directions": [[x,y,z]], "triads": [[i,j,k]]}`; directions
    /// are normalized.
    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        let raw: RawKsInstance = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let directions = raw
            .directions
            .iter()
            .map(|&[x, y, z]| Direction::normalized(x, y, z))
            .collect::<Result<Vec<_>>>()?;
        Self::new(directions, raw.triads, tol)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn triads(&self) -> &[[usize; 3]] {
        &self.triads
    }

    /// Every triad has exactly one 0 and two 1s under `colors`.
    pub fn is_valid_coloring(&self, colors: &[u8]) -> bool {
        self.triads
            .iter()
            .all(|t| t.iter().filter(|&&i| colors[i] == 0).count() == 1 && t.iter().all(|&i| colors[i] <= 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringResult {
    pub directions: usize,
    pub search_space: u64,
    pub count: u64,
    /// At most 16 colorings; directions in some triad vary slowest, in index
    /// order, with 0 tried before 1.
    pub witnesses: Vec<Vec<u8>>,
}

struct Colorer<'a> {
    instance: &'a KsInstance,
    triads_of: Vec<Vec<usize>>,
    order: Vec<usize>,
    free: Vec<usize>,
    colors: Vec<Option<u8>>,
    count: u64,
    witnesses: Vec<Vec<u8>>,
}

impl Colorer<'_> {
    fn consistent(&self, dir: usize) -> bool {
        self.triads_of[dir].iter().all(|&t| {
            let members = self.instance.triads[t];
            let zeros = members.iter().filter(|&&i| self.colors[i] == Some(0)).count();
            let ones = members.iter().filter(|&&i| self.colors[i] == Some(1)).count();
            zeros <= 1 && ones <= 2
        })
    }

    // A triad with a 0 forces its open members to 1; one with two 1s forces 0.
    fn forced(&self, dir: usize) -> Option<u8> {
        self.triads_of[dir].iter().find_map(|&t| {
            let members = self.instance.triads[t];
            let zeros = members.iter().filter(|&&i| self.colors[i] == Some(0)).count();
            let ones = members.iter().filter(|&&i| self.colors[i] == Some(1)).count();
            match (zeros, ones) {
                (1, _) => Some(1),
                (0, 2) => Some(0),
                _ => None,
            }
        })
    }

    fn search(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.record();
            return;
        }
        let dir = self.order[depth];
        let candidates: &[u8] = match self.forced(dir) {
            Some(0) => &[0],
            Some(_) => &[1],
            None => &[0, 1],
        };
        for &c in candidates {
            self.colors[dir] = Some(c);
            if self.consistent(dir) {
                self.search(depth + 1);
            }
        }
        self.colors[dir] = None;
    }

    fn record(&mut self) {
        let free = self.free.len() as u32;
        self.count += 1u64 << free;
        let base: Vec<u8> = self.colors.iter().map(|c| c.unwrap_or(0)).collect();
        let mut bits = 0u64;
        while self.witnesses.len() < MAX_WITNESSES && bits < 1u64 << free {
            let mut w = base.clone();
            for (k, &d) in self.free.iter().enumerate() {
                // free directions vary fastest, last free index least significant
                w[d] = (bits >> (self.free.len() - 1 - k) & 1) as u8;
            }
            self.witnesses.push(w);
            bits += 1;
        }
    }
}

/// Counts `{0,1}` colorings of the directions in which every triad has
/// exactly one 0 and two 1s, by backtracking with forced-value propagation.
pub fn ks_coloring_search(instance: &KsInstance) -> Result<ColoringResult> {
    let n = instance.directions.len();
    if n > MAX_SEARCH_VARIABLES {
        return Err(Error::TooManyDirections {
            count: n,
            max: MAX_SEARCH_VARIABLES,
        });
    }
    let mut triads_of = vec![Vec::new(); n];
    for (t, members) in instance.triads.iter().enumerate() {
        for &i in members {
            triads_of[i].push(t);
        }
    }
    let (order, free): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| !triads_of[i].is_empty());
    let mut colorer = Colorer {
        instance,
        triads_of,
        order,
        free,
        colors: vec![None; n],
        count: 0,
        witnesses: Vec::new(),
    };
    colorer.search(0);
    Ok(ColoringResult {
        directions: n,
        search_space: 1u64 << n,
        count: colorer.count,
        witnesses: colorer.witnesses,
    })
}

/// Discrete hidden-variable model: weighted deterministic ±1 assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvModel {
    variables: Vec<String>,
    assignments: Vec<(Vec<i8>, f64)>,
}

impl LhvModel {
    pub fn new(variables: Vec<String>, assignments: Vec<(Vec<i8>, f64)>) -> Result<Self> {
        if assignments.is_empty() {
            return Err(Error::InvalidModel("no assignments".into()));
        }
        let mut total = 0.0;
        for (values, weight) in &assignments {
            if values.len() != variables.len() {
                return Err(Error::InvalidModel("assignment is not total over the variables".into()));
            }
            if values.iter().any(|v| v.abs() != 1) {
                return Err(Error::InvalidModel("values must be +1 or -1".into()));
            }
            if !(*weight >= 0.0) {
                return Err(Error::InvalidModel("negative weight".into()));
            }
            total += weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidModel(format!("weights sum to {total}")));
        }
        Ok(LhvModel {
            variables,
            assignments,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn assignments(&self) -> &[(Vec<i8>, f64)] {
        &self.assignments
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// `Σ_λ ρ(λ) m_λ(a) m_λ(b)`.
pub fn lhv_correlation(model: &LhvModel, a: &str, b: &str) -> Result<f64> {
    let (ia, ib) = (model.index_of(a)?, model.index_of(b)?);
    Ok(model
        .assignments
        .iter()
        .map(|(m, w)| w * f64::from(m[ia] * m[ib]))
        .sum())
}

/// `Re⟨ψ|AB|ψ⟩` for commuting `A`, `B`.
pub fn quantum_correlation(state: &StateVector, a: &Observable, b: &Observable, tol: &Tolerances) -> Result<f64> {
    a.ensure_commutes(b, tol)?;
    Ok(a.matrix().matmul(b.matrix())?.sandwich(state, state)?.re)
}

pub fn particle_label(particle: usize, axis: usize) -> String {
    format!("s{particle}[{axis}]")
}

/// Uniform mixture of every assignment with `{σ₂ₙ} = −{σ₁ₙ}` on each axis.
/// Variables are `s1[k]`, `s2[k]` for axis `k`.
pub fn perfect_anticorrelation_model(axes: &[Direction]) -> Result<LhvModel> {
    let k = axes.len();
    if k == 0 {
        return Err(Error::InvalidModel("at least one axis required".into()));
    }
    if k > 20 {
        return Err(Error::TooManyVariables { count: 2 * k, max: 40 });
    }
    let variables = (1..=2)
        .flat_map(|p| (0..k).map(move |i| particle_label(p, i)))
        .collect();
    let weight = 1.0 / (1u64 << k) as f64;
    let assignments = (0..1u64 << k)
        .map(|bits| {
            let first: Vec<i8> = (0..k).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
            let second = first.iter().map(|v| -v);
            (first.iter().copied().chain(second).collect(), weight)
        })
        .collect();
    LhvModel::new(variables, assignments)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub axis_1: usize,
    pub axis_2: usize,
    pub lhv: f64,
    pub quantum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnticorrelationReport {
    /// Uniform anticorrelated model against the singlet, every axis pair.
    pub pairs: Vec<PairComparison>,
    /// `min` over deterministic anticorrelated assignments of the largest
    /// `|lhv − quantum|` across pairs. Zero exactly when some single
    /// assignment reproduces every singlet correlation.
    pub best_deterministic_mismatch: f64,
}

/// Compares the anticorrelated hidden-variable models on `axes` with the
/// singlet correlations `⟨σ₁ₙᵢ σ₂ₙⱼ⟩`.
pub fn compare_anticorrelation_with_singlet(axes: &[Direction], tol: &Tolerances) -> Result<AnticorrelationReport> {
    let model = perfect_anticorrelation_model(axes)?;
    let singlet = crate::states::singlet();
    let k = axes.len();
    let mut quantum = vec![vec![0.0; k]; k];
    let mut pairs = Vec::with_capacity(k * k);
    for i in 0..k {
        let a = on_site(&spin_along(&axes[i]), 0, 2)?;
        for j in 0..k {
            let b = on_site(&spin_along(&axes[j]), 1, 2)?;
            quantum[i][j] = quantum_correlation(&singlet, &a, &b, tol)?;
            pairs.push(PairComparison {
                axis_1: i,
                axis_2: j,
                lhv: lhv_correlation(&model, &particle_label(1, i), &particle_label(2, j))?,
                quantum: quantum[i][j],
            });
        }
    }
    let best_deterministic_mismatch = (0..1u64 << k)
        .map(|bits| {
            let m = |i: usize| if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
            let mut worst = 0.0f64;
            for (i, row) in quantum.iter().enumerate() {
                for (j, q) in row.iter().enumerate() {
                    worst = worst.max((-m(i) * m(j) - q).abs());
                }
            }
            worst
        })
        .fold(f64::INFINITY, f64::min);
    Ok(AnticorrelationReport {
        pairs,
        best_deterministic_mismatch,
    })
}
