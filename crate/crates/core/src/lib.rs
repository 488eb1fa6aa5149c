pub mod abl;
pub mod contextuality;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod rules;
pub mod scenarios;
pub mod states;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{C64, Matrix, SpectralDecomposition, StateVector, TensorProduct};
pub use tolerance::Tolerances;
pub use abl::{ElementOfReality, Outcome, OutcomeDistribution, PrePostSelection};
pub use contextuality::{ConstraintSystem, KsInstance, LhvModel, ParityConstraint, Sign};
pub use observables::{Axis, Direction, Observable};
pub use rules::{Rule, RuleReport, Verdict};
pub use scenarios::{Fact, FactResult, HardyParameters, Provenance, Scenario, ScenarioFile};
