//! Frequently used spin-1/2 states.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::linalg::{StateVector, TensorProduct, C64};
use crate::observables::Axis;

/// `|↑ₐ⟩` (sign +1) or `|↓ₐ⟩` (sign −1) along a coordinate axis.
pub fn spin_eigenstate(axis: Axis, up: bool) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let s = if up { 1.0 } else { -1.0 };
    let amps = match (axis, up) {
        (Axis::Z, true) => vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        (Axis::Z, false) => vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        (Axis::X, _) => vec![C64::new(h, 0.0), C64::new(s * h, 0.0)],
        (Axis::Y, _) => vec![C64::new(h, 0.0), C64::new(0.0, s * h)],
    };
    StateVector::new(amps).expect("unit literal")
}

pub fn spin_up(axis: Axis) -> StateVector {
    spin_eigenstate(axis, true)
}

/// `(|↑↓⟩ − |↓↑⟩)/√2`.
pub fn singlet() -> StateVector {
    let up = spin_up(Axis::Z);
    let down = spin_eigenstate(Axis::Z, false);
    let one = C64::new(1.0, 0.0);
    StateVector::superpose(&[
        (one, &up.tensor(&down).expect("dim 4")),
        (-one, &down.tensor(&up).expect("dim 4")),
    ])
    .expect("nonzero superposition")
}

/// `|s₁⟩⊗|s₂⟩⊗…`.
pub fn product_state(factors: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or(crate::error::Error::EmptyDimension)?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
}

/// `(|0…0⟩ − |1…1⟩)/√2` style superposition of two computational basis
/// indices with a relative minus sign.
pub fn signed_pair(dim: usize, plus: usize, minus: usize) -> Result<StateVector> {
    let a = StateVector::basis(dim, plus)?;
    let b = StateVector::basis(dim, minus)?;
    StateVector::superpose(&[(C64::new(1.0, 0.0), &a), (C64::new(-1.0, 0.0), &b)])
}
