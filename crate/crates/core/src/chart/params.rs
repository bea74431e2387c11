use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    AlgebraElement, LAMBDA_A, LAMBDA_A_PRIME, LAMBDA_K_U, LAMBDA_K_V, LAMBDA_T,
};

/// The 15 real coordinates of the KAT logarithmic chart.
///
/// `u`, `v` are the coefficients of the 𝔨 element on (λ₂, λ₈, λ₁₄) and
/// (λ₅, λ₁₀, λ₁₂); `alpha`, `beta`, `theta` are the coefficients on
/// (λ₁, λ₄, λ₇), (λ₉, λ₁₁, λ₁₃) and (λ₃, λ₆, λ₁₅). Values outside the chart
/// domain are representable; see [`super::validate_domain`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChartParams {
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub theta: [f64; 3],
}

pub const PARAM_COUNT: usize = 15;

impl ChartParams {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_theta(theta: [f64; 3]) -> Self {
        Self {
            theta,
            ..Self::zero()
        }
    }

    /// Flat layout `[u, v, alpha, beta, theta]` used by the optimizer.
    pub fn to_vec(&self) -> [f64; PARAM_COUNT] {
        let mut out = [0.0; PARAM_COUNT];
        for (chunk, triple) in out
            .chunks_exact_mut(3)
            .zip([self.u, self.v, self.alpha, self.beta, self.theta])
        {
            chunk.copy_from_slice(&triple);
        }
        out
    }

    pub fn from_slice(values: &[f64]) -> Self {
        assert_eq!(values.len(), PARAM_COUNT, "expected 15 chart parameters");
        let t = |k: usize| [values[3 * k], values[3 * k + 1], values[3 * k + 2]];
        Self {
            u: t(0),
            v: t(1),
            alpha: t(2),
            beta: t(3),
            theta: t(4),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_vec().iter().all(|x| x.is_finite())
    }

    pub fn k_element(&self) -> AlgebraElement {
        AlgebraElement::from_triple(LAMBDA_K_U, self.u)
            .add(&AlgebraElement::from_triple(LAMBDA_K_V, self.v))
    }

    pub fn a_element(&self) -> AlgebraElement {
        AlgebraElement::from_triple(LAMBDA_A, self.alpha)
    }

    pub fn a_prime_element(&self) -> AlgebraElement {
        AlgebraElement::from_triple(LAMBDA_A_PRIME, self.beta)
    }

    pub fn t_element(&self) -> AlgebraElement {
        AlgebraElement::from_triple(LAMBDA_T, self.theta)
    }

    /// Sum of all four components as a single su(4) element.
    pub fn algebra_element(&self) -> AlgebraElement {
        self.k_element()
            .add(&self.a_element())
            .add(&self.a_prime_element())
            .add(&self.t_element())
    }
}

/// Conventional SU(2)×SU(2) description of the K factor: two rotation angles
/// with unit axes, `K = R†(U(φ, n) ⊗ U(ψ, m))R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationForm {
    pub phi: f64,
    pub n: [f64; 3],
    pub psi: f64,
    pub m: [f64; 3],
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn split_rotation(w: [f64; 3]) -> (f64, [f64; 3]) {
    let angle = norm3(w);
    if angle == 0.0 {
        (0.0, [1.0, 0.0, 0.0])
    } else {
        (angle, w.map(|x| x / angle))
    }
}

impl RotationForm {
    /// Rotation vectors `φ·n = (v₅, v₁₂, v₁₀)` and `ψ·m = (u₁₄, −u₂, u₈)`, the
    /// ordering fixed by conjugating λ₁..λ₆ with the magic matrix.
    pub fn from_uv(u: [f64; 3], v: [f64; 3]) -> Self {
        let (phi, n) = split_rotation([v[0], v[2], v[1]]);
        let (psi, m) = split_rotation([u[2], -u[0], u[1]]);
        Self { phi, n, psi, m }
    }

    pub fn from_params(p: &ChartParams) -> Self {
        Self::from_uv(p.u, p.v)
    }

    pub fn phi_vector(&self) -> [f64; 3] {
        self.n.map(|x| x * self.phi)
    }

    pub fn psi_vector(&self) -> [f64; 3] {
        self.m.map(|x| x * self.psi)
    }

    /// Inverse of [`RotationForm::from_uv`]; returns `(u, v)`.
    pub fn to_uv(&self) -> ([f64; 3], [f64; 3]) {
        let a = self.phi_vector();
        let b = self.psi_vector();
        ([-b[1], b[2], b[0]], [a[0], a[2], a[1]])
    }

    pub fn axes_are_unit(&self, tol: f64) -> bool {
        (norm3(self.n) - 1.0).abs() <= tol && (norm3(self.m) - 1.0).abs() <= tol
    }

    /// Representative for comparisons: each angle reduced to [0, 2π] using
    /// `(φ, n) ≡ (φ + 4π, n) ≡ (4π − φ, −n)`. At φ = 0 the axis is irrelevant
    /// and set to x̂; at φ = 2π the factor is −I for every axis, so the axis is
    /// sign-normalized (first nonzero component positive).
    pub fn canonical(&self) -> Self {
        let (phi, n) = canonical_rotation(self.phi, self.n);
        let (psi, m) = canonical_rotation(self.psi, self.m);
        Self { phi, n, psi, m }
    }
}

fn canonical_rotation(angle: f64, axis: [f64; 3]) -> (f64, [f64; 3]) {
    let full = 4.0 * PI;
    let mut a = angle.rem_euclid(full);
    let mut ax = axis;
    if a > 2.0 * PI {
        a = full - a;
        ax = ax.map(|x| -x);
    }
    const EPS: f64 = 1e-12;
    if a < EPS {
        return (0.0, [1.0, 0.0, 0.0]);
    }
    if (a - 2.0 * PI).abs() < EPS {
        if let Some(first) = ax.iter().find(|x| x.abs() > EPS) {
            if *first < 0.0 {
                ax = ax.map(|x| -x);
            }
        }
    }
    (a, ax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_layout_round_trips() {
        let p = ChartParams {
            u: [1.0, 2.0, 3.0],
            v: [4.0, 5.0, 6.0],
            alpha: [7.0, 8.0, 9.0],
            beta: [10.0, 11.0, 12.0],
            theta: [13.0, 14.0, 15.0],
        };
        let flat = p.to_vec();
        assert_eq!(flat[0], 1.0);
        assert_eq!(flat[14], 15.0);
        assert_eq!(ChartParams::from_slice(&flat), p);
    }

    #[test]
    fn rotation_form_round_trips() {
        let u = [0.3, -1.1, 2.0];
        let v = [-0.7, 0.2, 1.4];
        let rf = RotationForm::from_uv(u, v);
        assert!(rf.axes_are_unit(1e-12));
        let (u2, v2) = rf.to_uv();
        for (a, b) in u.iter().chain(&v).zip(u2.iter().chain(&v2)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_form_of_zero_uses_default_axis() {
        let rf = RotationForm::from_uv([0.0; 3], [0.0; 3]);
        assert_eq!(rf.phi, 0.0);
        assert_eq!(rf.n, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn canonical_form_identifies_antipodes() {
        let n = [0.0, 0.6, 0.8];
        let a = RotationForm { phi: 1.0, n, psi: 0.5, m: n };
        let b = RotationForm {
            phi: 4.0 * PI - 1.0,
            n: n.map(|x| -x),
            psi: 0.5 + 4.0 * PI,
            m: n,
        };
        let (ca, cb) = (a.canonical(), b.canonical());
        assert!((ca.phi - cb.phi).abs() < 1e-12 && (ca.psi - cb.psi).abs() < 1e-12);
        for k in 0..3 {
            assert!((ca.n[k] - cb.n[k]).abs() < 1e-12);
            assert!((ca.m[k] - cb.m[k]).abs() < 1e-12);
        }
        let c = RotationForm { phi: 2.0 * PI, n: [-1.0, 0.0, 0.0], psi: 0.0, m: n }.canonical();
        assert_eq!(c.n, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn element_slices_use_the_right_indices() {
        let p = ChartParams {
            u: [1.0, 2.0, 3.0],
            v: [4.0, 5.0, 6.0],
            alpha: [7.0, 8.0, 9.0],
            beta: [10.0, 11.0, 12.0],
            theta: [13.0, 14.0, 15.0],
        };
        let e = p.algebra_element();
        assert_eq!(e.coeff(2), 1.0);
        assert_eq!(e.coeff(14), 3.0);
        assert_eq!(e.coeff(10), 5.0);
        assert_eq!(e.coeff(4), 8.0);
        assert_eq!(e.coeff(13), 12.0);
        assert_eq!(e.coeff(15), 15.0);
    }
}
