//! Dense complex vectors and matrices, tensor products, and Hermitian
//! spectral decomposition into eigenvalue-cluster projectors.
//!
//! Composite systems follow one ordering convention everywhere: in `a ⊗ b`
//! the first operand is the slow (leftmost) index, so for two spin-1/2
//! particles the basis runs `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{Tolerances, DEFAULT_MAX_DIM};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

fn all_finite(values: &[C64]) -> bool {
    values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Squared Euclidean norm of an amplitude slice.
pub fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner_slice(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Kronecker product with the tensor trait's ordering convention.
pub trait TensorProduct: Sized {
    fn dim(&self) -> usize;

    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self>;

    fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_capped(other, DEFAULT_MAX_DIM)
    }
}

/// `a ⊗ b` for two vectors or two matrices.
pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

fn checked_product_dim(a: usize, b: usize, cap: usize) -> Result<usize> {
    match a.checked_mul(b) {
        Some(dim) if dim <= cap => Ok(dim),
        Some(dim) => Err(Error::DimensionCap { dim, cap }),
        None => Err(Error::DimensionCap { dim: usize::MAX, cap }),
    }
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized within `1e-9`.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(amps, Tolerances::default().normalization)
    }

    pub fn with_tolerance(amps: Vec<C64>, tol: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        let norm_sq = norm_sqr(&amps);
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(StateVector { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        let norm = norm_sqr(&amps).sqrt();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(StateVector { amps })
    }

    /// Normalized superposition `Σ cᵢ|ψᵢ⟩`.
    pub fn superpose(terms: &[(C64, &StateVector)]) -> Result<Self> {
        let dim = terms.first().ok_or(Error::EmptyDimension)?.1.dim();
        let mut amps = vec![ZERO; dim];
        for (c, psi) in terms {
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            for (acc, a) in amps.iter_mut().zip(&psi.amps) {
                *acc += c * a;
            }
        }
        Self::normalized(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_slice(&self.amps, &other.amps))
    }

    /// Equality up to a global phase: `|⟨a|b⟩| ≥ 1 - tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && inner_slice(&self.amps, &other.amps).norm() >= 1.0 - tol
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Matrix {
        Matrix::outer(&self.amps)
    }
}

impl TensorProduct for StateVector {
    fn dim(&self) -> usize {
        self.amps.len()
    }

    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        checked_product_dim(self.dim(), other.dim(), cap)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { amps })
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        check_dim(dim * dim, data.len())?;
        if !all_finite(&data) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dim(dim, row.len())?;
            data.extend(row);
        }
        Self::new(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily normalized) vector.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Matrix { dim: n, data }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `M|v⟩`, un-normalized.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim, v.len())?;
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<Vec<C64>> {
        self.apply(psi.amps())
    }

    /// `⟨u|M|v⟩`.
    pub fn sandwich(&self, u: &StateVector, v: &StateVector) -> Result<C64> {
        check_dim(self.dim, u.dim())?;
        Ok(inner_slice(u.amps(), &self.apply_state(v)?))
    }

    pub fn linear_combination(&self, a: C64, other: &Matrix, b: C64) -> Result<Matrix> {
        check_dim(self.dim, other.dim)?;
        Ok(Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.linear_combination(ONE, other, ONE)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.linear_combination(ONE, other, -ONE)
    }

    pub fn scale(&self, c: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Largest entry magnitude; the norm used by every tolerance check.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` entrywise; infinite on dimension mismatch.
    pub fn distance(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// `a⊗b⊗…` over a list of factors.
    pub fn tensor_all(factors: &[Matrix]) -> Result<Matrix> {
        let (first, rest) = factors.split_first().ok_or(Error::EmptyDimension)?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.tensor(m))
    }
}

impl TensorProduct for Matrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let dim = checked_product_dim(self.dim, other.dim, cap)?;
        let (n, m) = (self.dim, other.dim);
        let mut data = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        Ok(Matrix { dim, data })
    }
}

/// Eigenvalue clusters of a Hermitian matrix with their orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<Matrix>,
}

impl SpectralDecomposition {
    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Matrix] {
        &self.projectors
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Matrix)> {
        self.eigenvalues.iter().copied().zip(&self.projectors)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Dimension of each eigenspace.
    pub fn ranks(&self) -> Vec<usize> {
        self.projectors
            .iter()
            .map(|p| p.trace().re.round() as usize)
            .collect()
    }

    /// Index of the cluster whose eigenvalue lies within `tol` of `value`.
    pub fn find(&self, value: f64, tol: f64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .position(|&a| (a - value).abs() <= tol)
    }

    /// `Σ f(aₖ) Pₖ`: the operator `f(M)` built on the same projectors.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let dim = self.projectors[0].dim();
        self.iter().fold(Matrix::zeros(dim), |acc, (a, p)| {
            acc.linear_combination(ONE, p, C64::new(f(a), 0.0))
                .expect("projectors share one dimension")
        })
    }
}

/// Eigenvalues (unsorted) and eigenvector columns of a Hermitian matrix by
/// cyclic complex Jacobi rotations.
pub fn jacobi_eigen(m: &Matrix, tol: &Tolerances) -> Result<(Vec<f64>, Matrix)> {
    let deviation = m.hermitian_deviation();
    if deviation > tol.hermitian {
        return Err(Error::NonHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let scale: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..tol.max_jacobi_sweeps {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a.data[p * n + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: tol.max_jacobi_sweeps,
        });
    }
    let eigenvalues = (0..n).map(|i| a.data[i * n + i].re).collect();
    Ok((eigenvalues, v))
}

// Annihilates a[p][q] with J = [[c, s·e^{iφ}], [-s·e^{-iφ}, c]] on the (p, q)
// plane, where a[p][q] = r·e^{iφ}; updates a ← J†aJ and v ← vJ.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.data[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let j_pp = C64::new(c, 0.0);
    let j_qq = j_pp;
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;

    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * j_pp + akq * j_qp;
        a.data[k * n + q] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a.data[q * n + k] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * j_pp + vkq * j_qp;
        v.data[k * n + q] = vkp * j_pq + vkq * j_qq;
    }
}

/// Spectral decomposition with eigenvalues merged when consecutive gaps are at
/// most `tol.cluster · max(1, ‖m‖)`.
pub fn hermitian_eigendecomposition(m: &Matrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let (values, vectors) = jacobi_eigen(m, tol)?;
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let gap = tol.cluster * m.max_abs().max(1.0);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(cluster) if values[idx] - values[*cluster.last().unwrap()] <= gap => {
                cluster.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projectors = Vec::with_capacity(clusters.len());
    for cluster in clusters {
        let mean = cluster.iter().map(|&i| values[i]).sum::<f64>() / cluster.len() as f64;
        let mut proj = Matrix::zeros(n);
        for &col in &cluster {
            let column: Vec<C64> = (0..n).map(|row| vectors.get(row, col)).collect();
            for (x, y) in proj.data.iter_mut().zip(Matrix::outer(&column).data) {
                *x += y;
            }
        }
        eigenvalues.push(mean);
        projectors.push(proj);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
    })
}
