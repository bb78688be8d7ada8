//! Seeded random generators used by tests, property suites, and the
//! multi-start optimizers: Ginibre density matrices, Haar-ish pure states,
//! Bloch directions, and canonical three-qubit states.
//!
//! Everything flows through `ChaCha8Rng` so that any draw is reproducible
//! from a `u64` seed alone.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{tensor, ComplexMatrix, DensityMatrix, C64};
use crate::states::Canonical3Q;
use crate::Result;

/// The crate-wide deterministic generator for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform direction on the unit sphere (normalized Gaussian triple).
pub fn unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Random point inside the closed Bloch ball (uniform in volume).
pub fn bloch_point(rng: &mut impl Rng) -> [f64; 3] {
    let dir = unit_vector(rng);
    let r = rng.random_range(0.0..1.0f64).cbrt();
    [r * dir[0], r * dir[1], r * dir[2]]
}

/// Normalized random state vector with Gaussian components.
pub fn pure_state(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| C64::new(normal(rng), normal(rng))).collect();
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Ginibre-ensemble density matrix: ρ = GG†/Tr[GG†].
pub fn density(rng: &mut impl Rng, dim: usize) -> Result<DensityMatrix> {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = C64::new(normal(rng), normal(rng));
        }
    }
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_re(1.0 / tr))
}

/// Seeded convenience wrapper around [`density`].
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    density(&mut seeded_rng(seed), dim)
}

/// Product state ρ_A ⊗ ρ_B from two random Bloch-ball points (separable by
/// construction; used to exercise classical bounds).
pub fn product_state(rng: &mut impl Rng) -> Result<DensityMatrix> {
    let single = |r: [f64; 3]| {
        let mut m = ComplexMatrix::identity(2).scale_re(0.5);
        m[(0, 0)] += C64::new(r[2] / 2.0, 0.0);
        m[(1, 1)] -= C64::new(r[2] / 2.0, 0.0);
        m[(0, 1)] += C64::new(r[0] / 2.0, -r[1] / 2.0);
        m[(1, 0)] += C64::new(r[0] / 2.0, r[1] / 2.0);
        m
    };
    let a = single(bloch_point(rng));
    let b = single(bloch_point(rng));
    DensityMatrix::new(tensor(&a, &b))
}

/// Random canonical three-qubit state: non-negative normalized amplitudes
/// and a uniform phase in [0, π].
pub fn canonical(rng: &mut impl Rng) -> Canonical3Q {
    loop {
        let raw: Vec<f64> = (0..5).map(|_| normal(rng).abs()).collect();
        let n: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-6 {
            continue;
        }
        let lambda = [raw[0] / n, raw[1] / n, raw[2] / n, raw[3] / n, raw[4] / n];
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        if let Ok(c) = Canonical3Q::new(lambda, theta) {
            return c;
        }
    }
}
