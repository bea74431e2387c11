use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::domain::in_octahedron;
use super::params::{ChartParams, RotationForm};
use crate::linalg::ComplexMatrix;

const TWO_PI: f64 = 2.0 * PI;

/// Seeded sampler for in-domain chart parameters.
#[derive(Debug, Clone)]
pub struct ChartSampler {
    rng: ChaCha8Rng,
    proposals: u64,
    accepted: u64,
}

impl ChartSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), proposals: 0, accepted: 0 }
    }

    /// Uniform point of the open octahedron `|x₁|+|x₂|+|x₃| < 2π`, by
    /// rejection from the cube (−2π, 2π)³.
    pub fn octahedron_point(&mut self) -> [f64; 3] {
        loop {
            self.proposals += 1;
            let x: [f64; 3] = std::array::from_fn(|_| self.rng.random_range(-TWO_PI..TWO_PI));
            if in_octahedron(x) {
                self.accepted += 1;
                return x;
            }
        }
    }

    /// Uniform point on the octahedron surface `|x₁|+|x₂|+|x₃| = 2π`.
    pub fn octahedron_boundary_point(&mut self) -> [f64; 3] {
        let e: [f64; 3] = std::array::from_fn(|_| -self.rng.random::<f64>().max(f64::MIN_POSITIVE).ln());
        let total: f64 = e.iter().sum();
        std::array::from_fn(|k| {
            let sign = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
            sign * TWO_PI * e[k] / total
        })
    }

    pub fn unit_vector(&mut self) -> [f64; 3] {
        loop {
            let g: [f64; 3] = std::array::from_fn(|_| self.rng.sample(StandardNormal));
            let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            if n > 1e-12 {
                return g.map(|x| x / n);
            }
        }
    }

    pub fn rotation_form(&mut self) -> RotationForm {
        let phi = self.rng.random_range(0.0..2.0 * TWO_PI);
        let n = self.unit_vector();
        let psi = self.rng.random_range(0.0..2.0 * TWO_PI);
        let m = self.unit_vector();
        RotationForm { phi, n, psi, m }
    }

    pub fn sample(&mut self) -> ChartParams {
        let (u, v) = self.rotation_form().to_uv();
        let alpha = self.octahedron_point();
        let beta = self.octahedron_point();
        let theta = self.octahedron_point();
        ChartParams { u, v, alpha, beta, theta }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }
}

pub fn sample_chart(seed: u64) -> ChartParams {
    ChartSampler::new(seed).sample()
}

/// Haar-random SU(4) element drawn from `rng`.
pub fn haar_su4_from<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let z = DMatrix::from_fn(4, 4, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..4 {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    // any fourth root of det works; the principal one keeps this deterministic
    let root = Complex64::from_polar(1.0, det.arg() / 4.0);
    ComplexMatrix::from_dmatrix(q / root)
}

pub fn sample_haar_su4(seed: u64) -> ComplexMatrix {
    haar_su4_from(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// `n` Haar elements from one seeded stream.
pub fn sample_haar_batch(n: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| haar_su4_from(&mut rng)).collect()
}
