//! Random generators and closed-form oracles shared by the integration tests.
//! The oracles never call the eigensolver; `assert_spectral_invariants` is
//! the one helper that exercises it.

#![allow(dead_code)]

use ablkit::linalg::hermitian_eigendecomposition;
use ablkit::{Axis, Direction, HardyParameters, Matrix, Observable, StateVector, Tolerances, Verdict, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_amps(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    loop {
        if let Ok(s) = StateVector::normalized(random_amps(rng, dim)) {
            return s;
        }
    }
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Matrix {
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        data[i * dim + i] = c(rng.gen_range(-3.0..3.0), 0.0);
        for j in i + 1..dim {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            data[i * dim + j] = z;
            data[j * dim + i] = z.conj();
        }
    }
    Matrix::new(dim, data).unwrap()
}

/// Columns of a random unitary, by Gram-Schmidt.
pub fn random_orthonormal_basis(rng: &mut impl Rng, dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = random_amps(rng, dim);
        for b in &basis {
            let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// `Σ λᵢ |eᵢ⟩⟨eᵢ|` for a given basis.
pub fn with_spectrum(basis: &[Vec<C64>], values: &[f64]) -> Matrix {
    let dim = basis.len();
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for (e, &l) in basis.iter().zip(values) {
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] += e[i] * e[j].conj() * l;
            }
        }
    }
    Matrix::new(dim, data).unwrap()
}

pub fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Naive ABL over eigenbasis vectors grouped by eigenvalue.
pub fn abl_oracle(pre: &[C64], post: &[C64], basis: &[Vec<C64>], values: &[f64]) -> Vec<(f64, f64)> {
    let mut groups: Vec<(f64, C64)> = Vec::new();
    for (e, &l) in basis.iter().zip(values) {
        let amp = dot(post, e) * dot(e, pre);
        match groups.iter_mut().find(|(v, _)| (v - l).abs() < 1e-9) {
            Some(g) => g.1 += amp,
            None => groups.push((l, amp)),
        }
    }
    let total: f64 = groups.iter().map(|(_, a)| a.norm_sqr()).sum();
    let mut out: Vec<(f64, f64)> = groups.into_iter().map(|(v, a)| (v, a.norm_sqr() / total)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `(I ± n·σ)/2` in closed form.
pub fn qubit_projector(n: [f64; 3], sign: f64) -> [[C64; 2]; 2] {
    let [x, y, z] = n;
    [
        [c((1.0 + sign * z) / 2.0, 0.0), c(sign * x / 2.0, -sign * y / 2.0)],
        [c(sign * x / 2.0, sign * y / 2.0), c((1.0 - sign * z) / 2.0, 0.0)],
    ]
}

pub fn axis_vec(a: Axis) -> [f64; 3] {
    match a {
        Axis::X => [1.0, 0.0, 0.0],
        Axis::Y => [0.0, 1.0, 0.0],
        Axis::Z => [0.0, 0.0, 1.0],
    }
}

/// `⟨post| P₁ ⊗ P₂ |pre⟩` on two qubits, first factor slowest.
pub fn two_qubit_amp(post: &[C64], p1: &[[C64; 2]; 2], p2: &[[C64; 2]; 2], pre: &[C64]) -> C64 {
    let mut acc = c(0.0, 0.0);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    acc += post[2 * i1 + i2].conj() * p1[i1][j1] * p2[i2][j2] * pre[2 * j1 + j2];
                }
            }
        }
    }
    acc
}

/// `|↑ₙ⟩` as raw amplitudes.
pub fn up_amps(a: Axis) -> [C64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match a {
        Axis::X => [c(h, 0.0), c(h, 0.0)],
        Axis::Y => [c(h, 0.0), c(0.0, h)],
        Axis::Z => [c(1.0, 0.0), c(0.0, 0.0)],
    }
}

pub fn kron_amps(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn singlet_amps() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]
}

pub fn random_direction(rng: &mut impl Rng) -> Direction {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2 = v.iter().map(|x| x * x).sum::<f64>();
        if (1e-4..=1.0).contains(&n2) {
            return Direction::normalized(v[0], v[1], v[2]).unwrap();
        }
    }
}

pub fn observable(label: &str, m: Matrix) -> Observable {
    Observable::new(label, m).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Checks reconstruction, idempotence, orthogonality, completeness and the
/// trace moments `tr A = Σ λ rank`, `tr A² = Σ λ² rank`.
pub fn assert_spectral_invariants(a: &Matrix, tol: &Tolerances) {
    let sd = hermitian_eigendecomposition(a, tol).unwrap();
    let n = a.dim();
    let scale = a.max_abs().max(1.0);
    let eps = 1e-9 * scale;
    let mut sum = Matrix::zeros(n);
    let mut recon = Matrix::zeros(n);
    for (k, (l, p)) in sd.iter().enumerate() {
        assert!(p.matmul(p).unwrap().distance(p) < 1e-9, "P^2 != P");
        assert!(p.hermitian_deviation() < 1e-9);
        for q in &sd.projectors()[k + 1..] {
            assert!(p.matmul(q).unwrap().max_abs() < 1e-9, "projectors not orthogonal");
        }
        sum = sum.add(p).unwrap();
        recon = recon.add(&p.scale(C64::new(l, 0.0))).unwrap();
    }
    assert!(sum.distance(&Matrix::identity(n)) < 1e-9, "projectors incomplete");
    assert!(recon.distance(a) < eps, "reconstruction off by {}", recon.distance(a));
    for w in sd.eigenvalues().windows(2) {
        assert!(w[0] < w[1]);
    }
    let ranks = sd.ranks();
    assert_eq!(ranks.iter().sum::<usize>(), n);
    let t1: f64 = sd.eigenvalues().iter().zip(&ranks).map(|(l, r)| l * *r as f64).sum();
    let t2: f64 = sd.eigenvalues().iter().zip(&ranks).map(|(l, r)| l * l * *r as f64).sum();
    assert!(close(t1, a.trace().re, eps));
    assert!(close(t2, a.matmul(a).unwrap().trace().re, eps * scale * n as f64));
}

/// Closed-form ABL for two-qubit sum and product of `σ₁ₐ`, `σ₂ᵦ`.
pub struct PairOracle {
    pub eor_a: Option<f64>,
    pub eor_b: Option<f64>,
    pub eor_sum: Option<f64>,
    pub eor_prod: Option<f64>,
    pub denominator: f64,
}

pub fn certain(weights: &[(f64, f64)]) -> Option<f64> {
    let total: f64 = weights.iter().map(|w| w.1).sum();
    weights.iter().find(|w| w.1 / total >= 1.0 - 1e-9).map(|w| w.0)
}

pub fn pair_oracle(pre: &[C64], post: &[C64], a: Axis, b: Axis) -> PairOracle {
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let pa = |s: f64| qubit_projector(axis_vec(a), s);
    let pb = |s: f64| qubit_projector(axis_vec(b), s);
    let amp = |s1: f64, s2: f64| two_qubit_amp(post, &pa(s1), &pb(s2), pre);
    let joint = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].map(|(s1, s2)| (s1, s2, amp(s1, s2)));
    let sq = |z: C64| z.norm_sqr();
    let w_a: Vec<(f64, f64)> = [1.0, -1.0].iter().map(|&s| (s, sq(two_qubit_amp(post, &pa(s), &id, pre)))).collect();
    let w_b: Vec<(f64, f64)> = [1.0, -1.0].iter().map(|&s| (s, sq(two_qubit_amp(post, &id, &pb(s), pre)))).collect();
    let mut w_sum: Vec<(f64, C64)> = vec![(2.0, c(0.0, 0.0)), (0.0, c(0.0, 0.0)), (-2.0, c(0.0, 0.0))];
    let mut w_prod: Vec<(f64, C64)> = vec![(1.0, c(0.0, 0.0)), (-1.0, c(0.0, 0.0))];
    for (s1, s2, z) in joint {
        w_sum.iter_mut().find(|w| w.0 == s1 + s2).unwrap().1 += z;
        w_prod.iter_mut().find(|w| w.0 == s1 * s2).unwrap().1 += z;
    }
    let w_sum: Vec<(f64, f64)> = w_sum.into_iter().map(|(v, z)| (v, sq(z))).collect();
    let w_prod: Vec<(f64, f64)> = w_prod.into_iter().map(|(v, z)| (v, sq(z))).collect();
    let total = |w: &[(f64, f64)]| w.iter().map(|x| x.1).sum::<f64>();
    let denominator = [total(&w_a), total(&w_b), total(&w_sum), total(&w_prod)].into_iter().fold(f64::INFINITY, f64::min);
    PairOracle {
        eor_a: certain(&w_a),
        eor_b: certain(&w_b),
        eor_sum: certain(&w_sum),
        eor_prod: certain(&w_prod),
        denominator,
    }
}

pub fn oracle_verdict(a: Option<f64>, b: Option<f64>, combined: Option<f64>, f: impl Fn(f64, f64) -> f64) -> Verdict {
    match (a, b, combined) {
        (Some(x), Some(y), Some(z)) if (f(x, y) - z).abs() < 1e-9 => Verdict::Holds,
        (Some(_), Some(_), Some(_)) => Verdict::ValueMismatch,
        (Some(_), Some(_), None) => Verdict::CombinedNotElement,
        _ => Verdict::ComponentsNotElements,
    }
}

/// Amplitude of `|w₁⊥ w₂⊥⟩` in the Hardy state, straight from the basis
/// expansion: `w⊥ ∝ −b̄ᵢ|v⟩ + ā|u⟩`.
pub fn w_perp_overlap_sq(p: &HardyParameters) -> f64 {
    let (a, b1, b2) = (p.a(), p.b1(), p.b2());
    let perp = |b: C64| {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        [-b.conj() / n, a.conj() / n]
    };
    let (w1, w2) = (perp(b1), perp(b2));
    let psi = [a, b2, b1, c(0.0, 0.0)];
    let phi = kron_amps(&w1, &w2);
    dot(&phi, &psi).norm_sqr()
}

pub fn random_hardy(r: &mut impl Rng) -> HardyParameters {
    loop {
        let mut z = || c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        if let Ok(p) = HardyParameters::new(z(), z(), z()) {
            if [p.a(), p.b1(), p.b2()].iter().all(|x| x.norm() > 1e-3) {
                return p;
            }
        }
    }
}
