use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hadamard::hadamards;
use super::params::{ChartParams, RotationForm};
use crate::algebra::{pauli, FanoBasis, LAMBDA_A, LAMBDA_A_PRIME};
use crate::linalg::{expm, ComplexMatrix, LinalgError};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn magic_matrix() -> ComplexMatrix {
    let o = c(0.0, 0.0);
    let entries = [
        c(1.0, 0.0), o, o, c(0.0, -1.0),
        o, c(0.0, -1.0), c(-1.0, 0.0), o,
        o, c(0.0, -1.0), c(1.0, 0.0), o,
        c(1.0, 0.0), o, o, c(0.0, 1.0),
    ];
    ComplexMatrix::from_row_slice(4, &entries)
        .expect("4x4 literal")
        .scale_real(FRAC_1_SQRT_2)
}

/// `exp(−(i/2) w·σ)` for a rotation vector `w = φ·n`.
pub fn su2_rotation(w: [f64; 3]) -> ComplexMatrix {
    let angle = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let half = angle / 2.0;
    // sin(φ/2)/φ, continuous at 0
    let s = if angle < 1e-8 { 0.5 - angle * angle / 48.0 } else { half.sin() / angle };
    let mut out = ComplexMatrix::identity(2).scale_real(half.cos());
    for (k, wk) in w.iter().enumerate() {
        out = out + pauli(k + 1).scale(c(0.0, -s * wk));
    }
    out
}

/// K from its rotation form, `R†(U(φ, n) ⊗ U(ψ, m))R`.
pub fn k_from_rotation(rf: &RotationForm) -> ComplexMatrix {
    let r = magic_matrix();
    let inner = su2_rotation(rf.phi_vector()).kron(&su2_rotation(rf.psi_vector()));
    &(&r.adjoint() * &inner) * &r
}

pub fn compose_k(p: &ChartParams) -> ComplexMatrix {
    k_from_rotation(&RotationForm::from_params(p))
}

pub fn compose_k_via_expm(p: &ChartParams) -> Result<ComplexMatrix, LinalgError> {
    expm(&p.k_element().to_matrix())
}

pub fn d_matrix(x: [f64; 3]) -> ComplexMatrix {
    let [x1, x2, x3] = x;
    let phases = [
        -(x1 + x2 + x3),
        x1 + x2 - x3,
        x1 - x2 + x3,
        -x1 + x2 + x3,
    ];
    let diag: Vec<Complex64> = phases.iter().map(|p| Complex64::from_polar(1.0, p / 2.0)).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// `exp(θ₃λ₃ + θ₆λ₆ + θ₁₅λ₁₅)`. The generators λ₃, λ₆, λ₁₅ act on D's
/// arguments in reverse order, so this is `D(θ₁₅, θ₆, θ₃)`.
pub fn torus_factor(theta: [f64; 3]) -> ComplexMatrix {
    d_matrix([theta[2], theta[1], theta[0]])
}

pub fn a_factor(alpha: [f64; 3], beta: [f64; 3]) -> (ComplexMatrix, ComplexMatrix) {
    let hs = hadamards();
    let conj = |h: ComplexMatrix, x: [f64; 3]| &(&h * &d_matrix(x)) * &h.transpose();
    (conj(hs.h1.to_complex(), alpha), conj(hs.h2.to_complex(), beta))
}

/// Coefficients `(x₀, x₁, x₂, x₃)` of 𝒜₁ on `(λ₀, λ₁, λ₄, λ₇)`, with
/// λ₀ = I/(2i). The same functions of β give 𝒜₂ on `(λ₀, λ₉, λ₁₁, λ₁₃)`.
pub fn a1_coefficients(alpha: [f64; 3]) -> [Complex64; 4] {
    let (s1, c1) = (alpha[0] / 2.0).sin_cos();
    let (s2, c2) = (alpha[1] / 2.0).sin_cos();
    let (s3, c3) = (alpha[2] / 2.0).sin_cos();
    [
        2.0 * I * c(c1 * c2 * c3, s1 * s2 * s3),
        2.0 * c(s1 * c2 * c3, -c1 * s2 * s3),
        2.0 * c(c1 * s2 * c3, -s1 * c2 * s3),
        2.0 * c(c1 * c2 * s3, -s1 * s2 * c3),
    ]
}

pub fn assemble(x: &[Complex64; 4], indices: [usize; 3]) -> ComplexMatrix {
    let basis = FanoBasis::get();
    let mut out = basis.lambda0().scale(x[0]);
    for (xk, &idx) in x[1..].iter().zip(indices.iter()) {
        out = out + basis.lambda(idx).scale(*xk);
    }
    out
}

pub fn assemble_a1(x: &[Complex64; 4]) -> ComplexMatrix {
    assemble(x, LAMBDA_A)
}

pub fn assemble_a2(y: &[Complex64; 4]) -> ComplexMatrix {
    assemble(y, LAMBDA_A_PRIME)
}

/// Coefficients `M₀..M₁₅` of 𝒜₁𝒜₂ on `(λ₀, λ₁, ..., λ₁₅)`.
pub fn product_expansion(x: &[Complex64; 4], y: &[Complex64; 4]) -> [Complex64; 16] {
    let [x0, x1, x2, x3] = *x;
    let [y0, y1, y2, y3] = *y;
    let raw = [
        x0 * y0,
        x1 * y0,
        -I * x3 * y3,
        x2 * y3,
        x2 * y0,
        -I * x3 * y1,
        x1 * y1,
        x3 * y0,
        -I * x2 * y1,
        x0 * y1,
        -I * x1 * y3,
        x0 * y2,
        I * x2 * y2,
        x0 * y3,
        I * x1 * y2,
        -x3 * y2,
    ];
    raw.map(|m| -0.5 * I * m)
}

pub fn assemble_product(m: &[Complex64; 16]) -> ComplexMatrix {
    let basis = FanoBasis::get();
    let mut out = basis.lambda0().scale(m[0]);
    for (k, mk) in m.iter().enumerate().skip(1) {
        out = out + basis.lambda(k).scale(*mk);
    }
    out
}

/// Factor order of the composed element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grouping {
    /// `K·𝒜₁·𝒜₂·T`
    #[default]
    Kat,
    /// `K·H·D(α)·H′·D(β)·H″·T`
    Hadamard,
}

#[derive(Debug, Clone)]
pub struct KATFactors {
    pub k: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub t: ComplexMatrix,
    pub g: ComplexMatrix,
}

pub fn compose(p: &ChartParams) -> KATFactors {
    let k = compose_k(p);
    let (a1, a2) = a_factor(p.alpha, p.beta);
    let t = torus_factor(p.theta);
    let g = &(&(&k * &a1) * &a2) * &t;
    KATFactors { k, a1, a2, t, g }
}

pub fn compose_hadamard(p: &ChartParams) -> ComplexMatrix {
    let hs = hadamards();
    let mut g = compose_k(p);
    for m in [
        hs.h.to_complex(),
        d_matrix(p.alpha),
        hs.hp.to_complex(),
        d_matrix(p.beta),
        hs.hpp.to_complex(),
        torus_factor(p.theta),
    ] {
        g = g * &m;
    }
    g
}

pub fn compose_with(p: &ChartParams, grouping: Grouping) -> ComplexMatrix {
    match grouping {
        Grouping::Kat => compose(p).g,
        Grouping::Hadamard => compose_hadamard(p),
    }
}

/// Independent evaluation: one matrix exponential per factor.
pub fn compose_via_expm(p: &ChartParams) -> Result<KATFactors, LinalgError> {
    let k = expm(&p.k_element().to_matrix())?;
    let a1 = expm(&p.a_element().to_matrix())?;
    let a2 = expm(&p.a_prime_element().to_matrix())?;
    let t = expm(&p.t_element().to_matrix())?;
    let g = &(&(&k * &a1) * &a2) * &t;
    Ok(KATFactors { k, a1, a2, t, g })
}
