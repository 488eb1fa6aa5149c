//! Operator constructors: Pauli matrices, spin components along arbitrary
//! directions, site embeddings, sums and products of commuting observables,
//! and the spin-1 angular-momentum operators.
//!
//! Conventions: single-site basis `|↑⟩, |↓⟩` for spin-1/2, `|m=+1⟩, |0⟩, |−1⟩`
//! for spin-1, `ħ = 1`, and `σ_y = [[0, −i], [i, 0]]`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecomposition, Matrix, SpectralDecomposition, C64, I, ONE, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Axis::X => Direction { x: 1.0, y: 0.0, z: 0.0 },
            Axis::Y => Direction { x: 0.0, y: 1.0, z: 0.0 },
            Axis::Z => Direction { x: 0.0, y: 0.0, z: 1.0 },
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl TryFrom<char> for Axis {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_lowercase() {
            'x' => Ok(Axis::X),
            'y' => Ok(Axis::Y),
            'z' => Ok(Axis::Z),
            _ => Err(Error::Schema(format!("unknown axis '{c}'"))),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Axis::try_from(c),
            _ => Err(Error::Schema(format!("unknown axis '{s}'"))),
        }
    }
}

/// Unit vector in real 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// Accepts components whose norm is 1 within `1e-9`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Tolerances::default().direction {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(Direction { x, y, z })
    }

    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= f64::MIN_POSITIVE {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(Direction {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn spherical(theta: f64, phi: f64) -> Self {
        Direction {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// In-plane direction at azimuth `phi` in the x–y plane.
    pub fn azimuthal(phi: f64) -> Self {
        Direction::spherical(std::f64::consts::FRAC_PI_2, phi)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// A labeled Hermitian operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    label: String,
    matrix: Matrix,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: Matrix) -> Result<Self> {
        Self::with_tolerance(label, matrix, Tolerances::default().hermitian)
    }

    pub fn with_tolerance(label: impl Into<String>, matrix: Matrix, tol: f64) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(Error::EmptyLabel);
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NonHermitian { deviation });
        }
        Ok(Observable { label, matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(Error::EmptyLabel);
        }
        self.label = label;
        Ok(self)
    }

    pub fn decompose(&self, tol: &Tolerances) -> Result<SpectralDecomposition> {
        hermitian_eigendecomposition(&self.matrix, tol)
    }

    pub fn commutator_norm(&self, other: &Observable) -> Result<f64> {
        Ok(self.matrix.commutator(&other.matrix)?.max_abs())
    }

    pub fn ensure_commutes(&self, other: &Observable, tol: &Tolerances) -> Result<()> {
        let norm = self.commutator_norm(other)?;
        if norm > tol.commute {
            return Err(Error::NonCommuting {
                a: self.label.clone(),
                b: other.label.clone(),
                norm,
            });
        }
        Ok(())
    }

    pub fn squared(&self) -> Observable {
        let m = self.matrix.matmul(&self.matrix).expect("square matrix");
        Observable {
            label: format!("({})^2", self.label),
            matrix: m,
        }
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pauli_matrix(axis: Axis) -> Matrix {
    let rows = match axis {
        Axis::X => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        Axis::Y => vec![vec![ZERO, -I], vec![I, ZERO]],
        Axis::Z => vec![vec![ONE, ZERO], vec![ZERO, -ONE]],
    };
    Matrix::from_rows(rows).expect("2x2 literal")
}

/// Single-site Pauli operator labeled `X`, `Y` or `Z`.
pub fn pauli(axis: Axis) -> Observable {
    Observable {
        label: axis.as_char().to_ascii_uppercase().to_string(),
        matrix: pauli_matrix(axis),
    }
}

/// `n·σ`.
pub fn spin_along(n: &Direction) -> Observable {
    let [x, y, z] = n.components();
    let m = pauli_matrix(Axis::X)
        .linear_combination(real(x), &pauli_matrix(Axis::Y), real(y))
        .and_then(|m| m.linear_combination(ONE, &pauli_matrix(Axis::Z), real(z)))
        .expect("2x2 operands");
    Observable {
        label: format!("s({x:.6},{y:.6},{z:.6})"),
        matrix: m,
    }
}

/// Embeds a single-site observable at `site` among `n_sites` identical sites.
pub fn on_site(o: &Observable, site: usize, n_sites: usize) -> Result<Observable> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let id = Matrix::identity(o.dim());
    let factors: Vec<Matrix> = (0..n_sites)
        .map(|k| if k == site { o.matrix.clone() } else { id.clone() })
        .collect();
    Ok(Observable {
        label: format!("{}_{}", o.label, site + 1),
        matrix: Matrix::tensor_all(&factors)?,
    })
}

fn coefficient_label(r: f64, label: &str) -> String {
    if r == 1.0 {
        label.to_string()
    } else if r == -1.0 {
        format!("-{label}")
    } else {
        format!("{r}*{label}")
    }
}

/// `r1·A + r2·B`.
pub fn weighted_sum(r1: f64, a: &Observable, r2: f64, b: &Observable) -> Result<Observable> {
    let matrix = a.matrix.linear_combination(real(r1), &b.matrix, real(r2))?;
    let rhs = coefficient_label(r2, &b.label);
    let label = match rhs.strip_prefix('-') {
        Some(rest) => format!("{}-{}", coefficient_label(r1, &a.label), rest),
        None => format!("{}+{}", coefficient_label(r1, &a.label), rhs),
    };
    Ok(Observable { label, matrix })
}

/// `AB`, rejected unless Hermitian (which holds exactly when `A` and `B` commute).
pub fn product(a: &Observable, b: &Observable) -> Result<Observable> {
    product_with_tolerance(a, b, &Tolerances::default())
}

pub fn product_with_tolerance(a: &Observable, b: &Observable, tol: &Tolerances) -> Result<Observable> {
    let matrix = a.matrix.matmul(&b.matrix)?;
    let deviation = matrix.hermitian_deviation();
    if deviation > tol.hermitian {
        return Err(Error::NonHermitianProduct {
            a: a.label.clone(),
            b: b.label.clone(),
            deviation,
        });
    }
    Ok(Observable {
        label: format!("{}*{}", a.label, b.label),
        matrix,
    })
}

/// `(Jx, Jy, Jz)` for spin 1.
pub fn spin1_operators() -> (Observable, Observable, Observable) {
    let h = FRAC_1_SQRT_2;
    let jx = Matrix::from_rows(vec![
        vec![ZERO, real(h), ZERO],
        vec![real(h), ZERO, real(h)],
        vec![ZERO, real(h), ZERO],
    ])
    .expect("3x3 literal");
    let jy = Matrix::from_rows(vec![
        vec![ZERO, C64::new(0.0, -h), ZERO],
        vec![C64::new(0.0, h), ZERO, C64::new(0.0, -h)],
        vec![ZERO, C64::new(0.0, h), ZERO],
    ])
    .expect("3x3 literal");
    let jz = Matrix::from_diagonal(&[1.0, 0.0, -1.0]);
    (
        Observable { label: "Jx".into(), matrix: jx },
        Observable { label: "Jy".into(), matrix: jy },
        Observable { label: "Jz".into(), matrix: jz },
    )
}

/// `(n·J)²` for spin 1.
pub fn spin1_component_squared(n: &Direction) -> Observable {
    let (jx, jy, jz) = spin1_operators();
    let [x, y, z] = n.components();
    let nj = jx
        .matrix
        .linear_combination(real(x), &jy.matrix, real(y))
        .and_then(|m| m.linear_combination(ONE, &jz.matrix, real(z)))
        .expect("3x3 operands");
    Observable {
        label: format!("(J.n)^2 n=({x:.6},{y:.6},{z:.6})"),
        matrix: nj.matmul(&nj).expect("3x3 operands"),
    }
}

/// Tensor product of single-site `X`, `Y`, `Z`, `I` named by the characters
/// of `s`, site 1 leftmost.
pub fn parse_pauli_string(s: &str, n_sites: usize) -> Result<Observable> {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != n_sites || n_sites == 0 {
        return Err(Error::InvalidPauliString(s.to_string()));
    }
    let factors = chars
        .iter()
        .map(|&c| match c {
            'X' => Ok(pauli_matrix(Axis::X)),
            'Y' => Ok(pauli_matrix(Axis::Y)),
            'Z' => Ok(pauli_matrix(Axis::Z)),
            'I' => Ok(Matrix::identity(2)),
            _ => Err(Error::InvalidPauliString(s.to_string())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Observable {
        label: s.to_string(),
        matrix: Matrix::tensor_all(&factors)?,
    })
}

/// One joint eigenspace of a commuting family: the value of each observable
/// there, and the eigenspace dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointEigenvalue {
    pub values: Vec<f64>,
    pub multiplicity: usize,
}

/// Simultaneously diagonalizes pairwise-commuting observables.
///
/// A generic real combination `Σ cᵢ Oᵢ` with incommensurate weights is
/// decomposed; each of its eigenspaces is a joint eigenspace of the family.
pub fn joint_spectrum(observables: &[Observable], tol: &Tolerances) -> Result<Vec<JointEigenvalue>> {
    let first = observables.first().ok_or(Error::EmptyDimension)?;
    for (i, a) in observables.iter().enumerate() {
        for b in &observables[i + 1..] {
            a.ensure_commutes(b, tol)?;
        }
    }
    const WEIGHTS: [f64; 8] = [
        1.0,
        std::f64::consts::SQRT_2,
        1.732_050_807_568_877_2,
        2.236_067_977_499_79,
        std::f64::consts::PI,
        std::f64::consts::E,
        0.577_215_664_901_532_9,
        1.618_033_988_749_895,
    ];
    let mut combo = Matrix::zeros(first.dim());
    for (k, o) in observables.iter().enumerate() {
        let w = WEIGHTS[k % WEIGHTS.len()] * (1.0 + (k / WEIGHTS.len()) as f64 * 0.1);
        combo = combo.linear_combination(ONE, &o.matrix, real(w))?;
    }
    let sd = hermitian_eigendecomposition(&combo, tol)?;
    let mut out = Vec::with_capacity(sd.len());
    for p in sd.projectors() {
        let rank = p.trace().re;
        let values = observables
            .iter()
            .map(|o| Ok(p.matmul(&o.matrix)?.trace().re / rank))
            .collect::<Result<Vec<f64>>>()?;
        out.push(JointEigenvalue {
            values,
            multiplicity: rank.round() as usize,
        });
    }
    Ok(out)
}
