//! The so(6) side of the double cover SU(4) → SO(6).

use std::f64::consts::PI;

use nalgebra::Matrix6;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{structure_constants, AlgebraElement, FanoBasis, DIM};
use crate::chart::{compose, ChartParams, ChartSampler};
use crate::factorizer::{factorize, SolverOptions};
use crate::linalg::{expm, ComplexMatrix, LinalgError};

pub type IntMatrix6 = [[i32; 6]; 6];

#[derive(Debug, Error)]
pub enum Spin6Error {
    #[error("plane indices ({i}, {j}) must be distinct and in 1..=6")]
    Index { i: usize, j: usize },
    #[error("rotation block is not in SO(4) (defect {defect:.3e})")]
    InvalidSO4Block { defect: f64 },
    #[error("angle {value} outside [-pi, pi]")]
    AngleOutOfRange { value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `L(i,j)` with +1 at (i, j) and −1 at (j, i), 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct So6Generator {
    pub i: usize,
    pub j: usize,
    pub matrix: IntMatrix6,
}

pub fn so6_generator(i: usize, j: usize) -> Result<So6Generator, Spin6Error> {
    if i == j || !(1..=6).contains(&i) || !(1..=6).contains(&j) {
        return Err(Spin6Error::Index { i, j });
    }
    let mut matrix = [[0; 6]; 6];
    matrix[i - 1][j - 1] = 1;
    matrix[j - 1][i - 1] = -1;
    Ok(So6Generator { i, j, matrix })
}

fn generator(i: usize, j: usize) -> IntMatrix6 {
    so6_generator(i, j).expect("valid plane").matrix
}

pub fn int_commutator(a: &IntMatrix6, b: &IntMatrix6) -> IntMatrix6 {
    let mut out = [[0; 6]; 6];
    for r in 0..6 {
        for c in 0..6 {
            out[r][c] = (0..6).map(|k| a[r][k] * b[k][c] - b[r][k] * a[k][c]).sum();
        }
    }
    out
}

fn add_scaled(acc: &mut IntMatrix6, m: &IntMatrix6, s: i32) {
    for r in 0..6 {
        for c in 0..6 {
            acc[r][c] += s * m[r][c];
        }
    }
}

/// `[L(m,n), L(p,q)] = δ_np L(m,q) + δ_mq L(n,p) − δ_nq L(m,p) − δ_mp L(n,q)`,
/// with `L(a,a) = 0`.
pub fn so6_commutator_formula(m: usize, n: usize, p: usize, q: usize) -> IntMatrix6 {
    let l = |a: usize, b: usize| if a == b { [[0; 6]; 6] } else { generator(a, b) };
    let mut out = [[0; 6]; 6];
    for (cond, a, b, s) in [(n == p, m, q, 1), (m == q, n, p, 1), (n == q, m, p, -1), (m == p, n, q, -1)] {
        if cond {
            add_scaled(&mut out, &l(a, b), s);
        }
    }
    out
}

/// λ index (1..=15) to the plane of its so(6) partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaLMap {
    pub table: [(usize, usize); DIM],
}

pub const LAMBDA_L_TABLE: [(usize, usize); DIM] = [
    (1, 5),
    (1, 3),
    (3, 5),
    (2, 4),
    (4, 6),
    (2, 6),
    (3, 6),
    (3, 2),
    (4, 3),
    (6, 5),
    (2, 5),
    (5, 4),
    (6, 1),
    (2, 1),
    (1, 4),
];

impl Default for LambdaLMap {
    fn default() -> Self {
        Self { table: LAMBDA_L_TABLE }
    }
}

impl LambdaLMap {
    pub fn plane(&self, lambda: usize) -> (usize, usize) {
        self.table[lambda - 1]
    }

    pub fn generator(&self, lambda: usize) -> IntMatrix6 {
        let (i, j) = self.plane(lambda);
        generator(i, j)
    }

    /// Every unordered plane is hit exactly once.
    pub fn is_bijective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.table.iter().all(|&(i, j)| i != j && seen.insert((i.min(j), i.max(j))))
            && seen.len() == DIM
    }

    /// The list of λ pairs (i < j) whose bracket is not preserved.
    pub fn bracket_failures(&self) -> Vec<(usize, usize)> {
        let sc = structure_constants();
        let mut failures = Vec::new();
        for i in 1..=DIM {
            for j in i + 1..=DIM {
                let mut lhs = [[0; 6]; 6];
                for (k, f) in sc.commutator_terms(i, j) {
                    add_scaled(&mut lhs, &self.generator(k), i32::from(f));
                }
                let rhs = int_commutator(&self.generator(i), &self.generator(j));
                if lhs != rhs {
                    failures.push((i, j));
                }
            }
        }
        failures
    }
}

pub fn algebra_iso(x: &AlgebraElement) -> Matrix6<f64> {
    algebra_iso_with(&LambdaLMap::default(), x)
}

pub fn algebra_iso_with(map: &LambdaLMap, x: &AlgebraElement) -> Matrix6<f64> {
    let mut out = Matrix6::zeros();
    for k in 1..=DIM {
        let c = x.coeff(k);
        if c != 0.0 {
            let g = map.generator(k);
            out += Matrix6::from_fn(|r, s| f64::from(g[r][s])) * c;
        }
    }
    out
}

/// Exponential of a real skew-symmetric 6×6 matrix.
pub fn expm_so6(x: &Matrix6<f64>) -> Result<Matrix6<f64>, LinalgError> {
    let cx = ComplexMatrix::from_fn(6, |r, c| x[(r, c)].into());
    let e = expm(&cx)?;
    Ok(Matrix6::from_fn(|r, c| e.get(r, c).re))
}

#[derive(Debug, Clone, PartialEq)]
pub struct So6Element {
    pub matrix: Matrix6<f64>,
    pub source: Option<ChartParams>,
}

impl So6Element {
    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix * self.matrix.transpose() - Matrix6::identity()).norm()
    }

    pub fn det_defect(&self) -> f64 {
        (self.matrix.determinant() - 1.0).abs()
    }

    pub fn is_special_orthogonal(&self, tol: f64) -> bool {
        self.orthogonality_defect() < tol && self.det_defect() < tol
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..6).map(|r| (0..6).map(|c| self.matrix[(r, c)]).collect()).collect()
    }
}

/// `exp(φ(k))·exp(φ(a))·exp(φ(a′))·exp(φ(t))` on the chart's algebra
/// elements. Agrees with the covering homomorphism evaluated at
/// `compose(p).g` for every p, in or out of the domain.
pub fn cover_map(p: &ChartParams) -> Result<So6Element, LinalgError> {
    let mut m = Matrix6::identity();
    for x in [p.k_element(), p.a_element(), p.a_prime_element(), p.t_element()] {
        m *= expm_so6(&algebra_iso(&x))?;
    }
    Ok(So6Element { matrix: m, source: Some(*p) })
}

/// `max_X ‖ρ φ(X) ρᵀ − φ(g X g†)‖` over the basis, for `ρ = cover_map(p)` and
/// `g = compose(p).g`. Zero exactly when ρ is the adjoint image of g.
pub fn adjoint_defect(p: &ChartParams) -> Result<f64, Spin6Error> {
    let rho = cover_map(p)?.matrix;
    let g = compose(p).g;
    let basis = FanoBasis::get();
    let mut worst: f64 = 0.0;
    for k in 1..=DIM {
        let conj = &(&g * basis.lambda(k)) * &g.adjoint();
        let x = crate::algebra::project_with_tol(&conj, 1e-8)
            .map_err(|_| Spin6Error::Linalg(LinalgError::NonSkewHermitian { defect: f64::NAN }))?;
        let lhs = rho * algebra_iso(&AlgebraElement::basis(k)) * rho.transpose();
        worst = worst.max((lhs - algebra_iso(&x)).norm());
    }
    Ok(worst)
}

/// `(C_π)_{ab} = δ_{a, π(b)}` for a permutation given in cycle notation.
/// With this reading the 6-cycle π″ is odd, so the product form below has
/// determinant −1.
pub fn cycle_permutation(cycle: &[usize]) -> Matrix6<f64> {
    let mut image: [usize; 6] = std::array::from_fn(|b| b + 1);
    for (k, &from) in cycle.iter().enumerate() {
        image[from - 1] = cycle[(k + 1) % cycle.len()];
    }
    Matrix6::from_fn(|a, b| if image[b] == a + 1 { 1.0 } else { 0.0 })
}

pub const PI_DOUBLE_PRIME: [usize; 6] = [1, 6, 3, 2, 4, 5];
pub const PI_PRIME: [usize; 5] = [1, 4, 3, 5, 6];
pub const PI_PLAIN: [usize; 5] = [1, 4, 5, 3, 6];

/// Rotations by χ₁, χ₂, χ₃ in the planes (1,2), (3,4), (5,6).
pub fn block_rotation(chi: [f64; 3]) -> Matrix6<f64> {
    let mut m = Matrix6::identity();
    for (k, x) in chi.iter().enumerate() {
        let (s, c) = x.sin_cos();
        let o = 2 * k;
        m[(o, o)] = c;
        m[(o, o + 1)] = -s;
        m[(o + 1, o)] = s;
        m[(o + 1, o + 1)] = c;
    }
    m
}

pub fn so4_block_defect(m: &Matrix6<f64>) -> f64 {
    let block = m.fixed_view::<4, 4>(0, 0).into_owned();
    let orth = (block * block.transpose() - nalgebra::Matrix4::identity()).norm();
    let det = (block.determinant() - 1.0).abs();
    let mut rest = m.clone_owned();
    rest.fixed_view_mut::<4, 4>(0, 0).fill(0.0);
    let outside = (rest - Matrix6::from_diagonal(&nalgebra::Vector6::new(0.0, 0.0, 0.0, 0.0, 1.0, 1.0))).norm();
    orth.max(det).max(outside)
}

/// `R_SO(4)·C_{π″}·O(α)·C_{π′}·O(β)·C_π·O(θ)`, transcribed factor by factor.
pub fn ort6_build(
    so4_part: &Matrix6<f64>,
    alpha: [f64; 3],
    beta: [f64; 3],
    theta: [f64; 3],
) -> Result<So6Element, Spin6Error> {
    let defect = so4_block_defect(so4_part);
    if !(defect < 1e-10) {
        return Err(Spin6Error::InvalidSO4Block { defect });
    }
    for &value in alpha.iter().chain(&beta).chain(&theta) {
        if !(-PI..=PI).contains(&value) {
            return Err(Spin6Error::AngleOutOfRange { value });
        }
    }
    let matrix = so4_part
        * cycle_permutation(&PI_DOUBLE_PRIME)
        * block_rotation(alpha)
        * cycle_permutation(&PI_PRIME)
        * block_rotation(beta)
        * cycle_permutation(&PI_PLAIN)
        * block_rotation(theta);
    Ok(So6Element { matrix, source: None })
}

/// Distance between the factorized orthogonal form and the cover map on
/// θ-only parameters. Reported, not asserted.
#[derive(Debug, Clone, Serialize)]
pub struct Ort6Comparison {
    pub theta: [f64; 3],
    pub distance: f64,
    pub ort6_orthogonality_defect: f64,
    pub ort6_determinant: f64,
}

pub fn compare_ort6_with_cover(theta: [f64; 3]) -> Result<Ort6Comparison, Spin6Error> {
    let o = ort6_build(&Matrix6::identity(), [0.0; 3], [0.0; 3], theta)?;
    let c = cover_map(&ChartParams::with_theta(theta))?;
    Ok(Ort6Comparison {
        theta,
        distance: (o.matrix - c.matrix).norm(),
        ort6_orthogonality_defect: o.orthogonality_defect(),
        ort6_determinant: o.matrix.determinant(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubleCoverReport {
    pub samples: usize,
    pub max_orthogonality_defect: f64,
    pub max_det_defect: f64,
    pub max_adjoint_defect: f64,
    /// ‖Cover(p₁)Cover(p₂) − Cover(p₃)‖ where compose(p₃) = compose(p₁)·compose(p₂).
    pub max_product_defect: f64,
    pub product_pairs: usize,
    pub product_pairs_skipped: usize,
    /// ‖Cover(p) − Cover(p′)‖ with p′ = p + 2π on θ₃, so compose(p′) = −compose(p).
    pub max_sign_pair_defect: f64,
    pub max_sign_pair_group_defect: f64,
    pub kernel_identity_distance: f64,
    pub kernel_minus_identity_distance: f64,
    pub kernel_cover_distances: [f64; 2],
}

impl DoubleCoverReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_orthogonality_defect < tol
            && self.max_det_defect < tol
            && self.max_adjoint_defect < tol
            && self.max_product_defect < 1e-7
            && self.max_sign_pair_defect < 1e-9
            && self.max_sign_pair_group_defect < 1e-12
            && self.kernel_identity_distance < tol
            && self.kernel_minus_identity_distance < tol
            && self.kernel_cover_distances.iter().all(|d| *d < tol)
    }
}

const PRODUCT_PAIR_LIMIT: usize = 10;

pub fn verify_double_cover(n: usize, seed: u64) -> Result<DoubleCoverReport, Spin6Error> {
    let mut sampler = ChartSampler::new(seed);
    let mut report = DoubleCoverReport {
        samples: n,
        max_orthogonality_defect: 0.0,
        max_det_defect: 0.0,
        max_adjoint_defect: 0.0,
        max_product_defect: 0.0,
        product_pairs: 0,
        product_pairs_skipped: 0,
        max_sign_pair_defect: 0.0,
        max_sign_pair_group_defect: 0.0,
        kernel_identity_distance: 0.0,
        kernel_minus_identity_distance: 0.0,
        kernel_cover_distances: [0.0; 2],
    };
    let mut previous: Option<(ChartParams, So6Element)> = None;
    for index in 0..n {
        let p = sampler.sample();
        let cover = cover_map(&p)?;
        report.max_orthogonality_defect = report.max_orthogonality_defect.max(cover.orthogonality_defect());
        report.max_det_defect = report.max_det_defect.max(cover.det_defect());
        report.max_adjoint_defect = report.max_adjoint_defect.max(adjoint_defect(&p)?);

        let mut shifted = p;
        shifted.theta[0] += 2.0 * PI;
        let g = compose(&p).g;
        report.max_sign_pair_group_defect = report
            .max_sign_pair_group_defect
            .max((&compose(&shifted).g + &g).frobenius_norm());
        report.max_sign_pair_defect = report
            .max_sign_pair_defect
            .max((cover_map(&shifted)?.matrix - cover.matrix).norm());

        if index < PRODUCT_PAIR_LIMIT {
            if let Some((q, q_cover)) = &previous {
                let product = &compose(q).g * &g;
                let opts = SolverOptions { seed: seed.wrapping_add(index as u64), ..SolverOptions::default() };
                match factorize(&product, &opts) {
                    Ok(r) => {
                        let d = (q_cover.matrix * cover.matrix - cover_map(&r.params)?.matrix).norm();
                        report.max_product_defect = report.max_product_defect.max(d);
                        report.product_pairs += 1;
                    }
                    Err(_) => report.product_pairs_skipped += 1,
                }
            }
        }
        previous = Some((p, cover));
    }

    let minus = ChartParams::with_theta([2.0 * PI, 0.0, 0.0]);
    let id4 = ComplexMatrix::identity(4);
    report.kernel_identity_distance = compose(&ChartParams::zero()).g.distance(&id4);
    report.kernel_minus_identity_distance = compose(&minus).g.distance(&id4.scale_real(-1.0));
    for (slot, q) in [ChartParams::zero(), minus].iter().enumerate() {
        report.kernel_cover_distances[slot] = (cover_map(q)?.matrix - Matrix6::identity()).norm();
    }
    Ok(report)
}

/// Seeded batch of cover-map images, for SO(6) membership sweeps.
pub fn sample_covers(n: usize, seed: u64) -> Result<Vec<So6Element>, LinalgError> {
    let mut sampler = ChartSampler::new(seed);
    (0..n).map(|_| cover_map(&sampler.sample())).collect()
}
