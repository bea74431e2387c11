use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use super::params::{ChartParams, RotationForm};

const TWO_PI: f64 = 2.0 * PI;
const FOUR_PI: f64 = 4.0 * PI;

/// Sign patterns of the four octahedron faces `|±x₁ ± x₂ ± x₃| < 2π`.
pub const OCTAHEDRON_SIGNS: [[i8; 3]; 4] = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleTriple {
    Alpha,
    Beta,
    Theta,
}

impl fmt::Display for AngleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleTriple::Alpha => "alpha",
            AngleTriple::Beta => "beta",
            AngleTriple::Theta => "theta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Octahedron { triple: AngleTriple, signs: [i8; 3] },
    PhiRange,
    PsiRange,
    KEigenphase,
    NonFinite,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Octahedron { triple, signs } => {
                let s = signs.map(|x| if x > 0 { '+' } else { '-' });
                write!(f, "{triple} octahedron ({}{}{})", s[0], s[1], s[2])
            }
            Constraint::PhiRange => f.write_str("phi in [0, 4pi)"),
            Constraint::PsiRange => f.write_str("psi in [0, 4pi)"),
            Constraint::KEigenphase => f.write_str("phi + psi < 2pi"),
            Constraint::NonFinite => f.write_str("finite parameters"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainViolation {
    pub constraint: Constraint,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainReport {
    pub valid: bool,
    pub violations: Vec<DomainViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DomainOptions {
    /// Also require the 𝔨 element's eigenphases to be principal.
    pub strict_k_eigenphases: bool,
}

pub fn octahedron_value(x: [f64; 3], signs: [i8; 3]) -> f64 {
    (0..3).map(|k| f64::from(signs[k]) * x[k]).sum::<f64>().abs()
}

pub fn in_octahedron(x: [f64; 3]) -> bool {
    OCTAHEDRON_SIGNS.iter().all(|s| octahedron_value(x, *s) < TWO_PI)
}

pub fn validate_domain(p: &ChartParams) -> DomainReport {
    validate_domain_with(p, DomainOptions::default())
}

pub fn validate_domain_with(p: &ChartParams, opts: DomainOptions) -> DomainReport {
    if !p.is_finite() {
        let v = DomainViolation { constraint: Constraint::NonFinite, value: f64::NAN, bound: 0.0 };
        return DomainReport { valid: false, violations: vec![v] };
    }
    let mut violations = Vec::new();
    for (triple, x) in [
        (AngleTriple::Alpha, p.alpha),
        (AngleTriple::Beta, p.beta),
        (AngleTriple::Theta, p.theta),
    ] {
        for signs in OCTAHEDRON_SIGNS {
            let value = octahedron_value(x, signs);
            if value >= TWO_PI {
                violations.push(DomainViolation {
                    constraint: Constraint::Octahedron { triple, signs },
                    value,
                    bound: TWO_PI,
                });
            }
        }
    }
    let rf = RotationForm::from_params(p);
    for (constraint, angle) in [(Constraint::PhiRange, rf.phi), (Constraint::PsiRange, rf.psi)] {
        if !(0.0..FOUR_PI).contains(&angle) {
            violations.push(DomainViolation { constraint, value: angle, bound: FOUR_PI });
        }
    }
    if opts.strict_k_eigenphases && rf.phi + rf.psi >= TWO_PI {
        violations.push(DomainViolation {
            constraint: Constraint::KEigenphase,
            value: rf.phi + rf.psi,
            bound: TWO_PI,
        });
    }
    DomainReport { valid: violations.is_empty(), violations }
}

fn reduce_symmetric(x: f64) -> f64 {
    // into (−2π, 2π]
    let r = x.rem_euclid(FOUR_PI);
    if r > TWO_PI {
        r - FOUR_PI
    } else {
        r
    }
}

/// Shifts `x + 2π·n`, which change D(x) only by the sign `(−1)^{n₁+n₂+n₃}`.
/// Returned with that exponent mod 2.
fn center_shifts() -> Vec<([f64; 3], i32)> {
    let mut out = Vec::new();
    for n1 in -3i32..=3 {
        for n2 in -3i32..=3 {
            for n3 in -3i32..=3 {
                let shift = [n1, n2, n3].map(|n| TWO_PI * f64::from(n));
                out.push((shift, (n1 + n2 + n3).rem_euclid(2)));
            }
        }
    }
    out
}

fn shifted_candidates(x: [f64; 3]) -> Vec<([f64; 3], i32)> {
    let base = x.map(reduce_symmetric);
    // the 4π reduction above leaves D unchanged
    center_shifts()
        .into_iter()
        .map(|(s, e)| ([base[0] + s[0], base[1] + s[1], base[2] + s[2]], e))
        .filter(|(y, _)| in_octahedron(*y))
        .collect()
}

fn norm1(x: [f64; 3]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Parameters describing the same group element with α, β, θ moved into
/// their octahedra and φ, ψ reduced into [0, 4π). Signs picked up by the
/// shifts are absorbed into K. Returns `None` when some triple lies on an
/// octahedron face after every shift.
pub fn canonical_representative(p: &ChartParams) -> Option<ChartParams> {
    if !p.is_finite() {
        return None;
    }
    let alpha = shifted_candidates(p.alpha);
    let beta = shifted_candidates(p.beta);
    let theta = shifted_candidates(p.theta);
    if alpha.is_empty() || beta.is_empty() || theta.is_empty() {
        return None;
    }
    let mut best: Option<(f64, [f64; 3], [f64; 3], [f64; 3], i32)> = None;
    for (a, ea) in &alpha {
        for (b, eb) in &beta {
            for (t, et) in &theta {
                let e = (ea + eb + et) % 2;
                let cost = norm1(*a) + norm1(*b) + norm1(*t);
                if best.as_ref().is_none_or(|(c, ..)| cost < *c - 1e-12) {
                    best = Some((cost, *a, *b, *t, e));
                }
            }
        }
    }
    let (_, alpha, beta, theta, e) = best?;
    let mut rf = RotationForm::from_params(p);
    if e == 1 {
        // group element picked up −I; compensate with φ → φ + 2π
        rf.phi += TWO_PI;
    }
    rf.phi = rf.phi.rem_euclid(FOUR_PI);
    rf.psi = rf.psi.rem_euclid(FOUR_PI);
    let (u, v) = rf.to_uv();
    Some(ChartParams { u, v, alpha, beta, theta })
}
