//! Numerical inverse of the chart: multi-start Levenberg–Marquardt on the
//! 32 real components of `compose(p).g − g`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chart::{
    canonical_representative, compose, haar_su4_from, validate_domain, ChartParams, ChartSampler,
    PARAM_COUNT,
};
use crate::linalg::{check_special_unitary, ComplexMatrix};

pub const TARGET_UNITARY_TOL: f64 = 1e-8;
pub const FD_STEP: f64 = 1e-6;
const RESIDUAL_LEN: usize = 32;
const MAX_DAMPING: f64 = 1e12;
const MIN_DAMPING: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_starts: usize,
    pub max_iters_per_start: usize,
    pub seed: u64,
    pub damping_init: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_starts: 64, max_iters_per_start: 500, seed: 0, damping_init: 1e-3 }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), FactorizeError> {
        let ok = self.tol > 0.0
            && self.tol.is_finite()
            && self.max_starts > 0
            && self.max_iters_per_start > 0
            && self.damping_init > 0.0
            && self.damping_init.is_finite();
        if ok {
            Ok(())
        } else {
            Err(FactorizeError::InvalidOptions)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationResult {
    pub params: ChartParams,
    pub residual: f64,
    pub iterations: usize,
    pub starts_used: usize,
    pub converged: bool,
}

#[derive(Debug, Error)]
pub enum FactorizeError {
    #[error("target is not special unitary (defect {defect:.3e})")]
    TargetNotUnitary { defect: f64 },
    #[error("no start converged; best residual {:.3e}", best.residual)]
    NoConvergence { best: Box<FactorizationResult> },
    #[error("solver options must be positive and finite")]
    InvalidOptions,
}

fn check_target(g: &ComplexMatrix) -> Result<(), FactorizeError> {
    if g.dim() != 4 {
        return Err(FactorizeError::TargetNotUnitary { defect: f64::INFINITY });
    }
    let report = check_special_unitary(g, TARGET_UNITARY_TOL);
    if report.passed {
        Ok(())
    } else {
        Err(FactorizeError::TargetNotUnitary {
            defect: report.unitarity_defect.max(report.det_defect),
        })
    }
}

/// Stacked real and imaginary parts of `compose(p).g − g`.
pub fn residual_vector(p: &ChartParams, g: &ComplexMatrix) -> DVector<f64> {
    let diff = &compose(p).g - g;
    let entries = diff.as_dmatrix();
    DVector::from_iterator(
        RESIDUAL_LEN,
        entries.iter().map(|z| z.re).chain(entries.iter().map(|z| z.im)),
    )
}

pub fn residual(p: &ChartParams, g: &ComplexMatrix) -> Result<f64, FactorizeError> {
    check_target(g)?;
    Ok(residual_vector(p, g).norm())
}

/// Central-difference Jacobian of [`residual_vector`] (32 × 15).
pub fn jacobian(p: &ChartParams, g: &ComplexMatrix, step: f64) -> DMatrix<f64> {
    let base = p.to_vec();
    let mut jac = DMatrix::zeros(RESIDUAL_LEN, PARAM_COUNT);
    for k in 0..PARAM_COUNT {
        let mut plus = base;
        let mut minus = base;
        plus[k] += step;
        minus[k] -= step;
        let rp = residual_vector(&ChartParams::from_slice(&plus), g);
        let rm = residual_vector(&ChartParams::from_slice(&minus), g);
        jac.set_column(k, &((rp - rm) / (2.0 * step)));
    }
    jac
}

/// Outcome of one solver start, with the residual after every accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub params: ChartParams,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

pub fn solve_from(start: &ChartParams, g: &ComplexMatrix, opts: &SolverOptions) -> StartOutcome {
    let target = opts.tol * 1e-2;
    let mut p = DVector::from_row_slice(&start.to_vec());
    let params = |v: &DVector<f64>| ChartParams::from_slice(v.as_slice());
    let mut r = residual_vector(&params(&p), g);
    let mut cost = r.norm_squared();
    let mut mu = opts.damping_init;
    let mut history = vec![cost.sqrt()];
    let mut iterations = 0;

    while iterations < opts.max_iters_per_start && cost.sqrt() > target {
        iterations += 1;
        let jac = jacobian(&params(&p), g, FD_STEP);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        let mut accepted = false;
        while mu <= MAX_DAMPING {
            let mut lhs = jtj.clone();
            for d in 0..PARAM_COUNT {
                lhs[(d, d)] += mu;
            }
            let Some(chol) = lhs.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let trial = &p - chol.solve(&grad);
            let r_trial = residual_vector(&params(&trial), g);
            let cost_trial = r_trial.norm_squared();
            if cost_trial.is_finite() && cost_trial < cost {
                let gain = cost - cost_trial;
                p = trial;
                r = r_trial;
                cost = cost_trial;
                mu = (mu / 10.0).max(MIN_DAMPING);
                history.push(cost.sqrt());
                accepted = true;
                // converged but no longer improving at floating-point scale
                if cost.sqrt() <= opts.tol && gain <= cost * 1e-6 {
                    return StartOutcome { params: params(&p), residual: cost.sqrt(), iterations, history };
                }
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    StartOutcome { params: params(&p), residual: cost.sqrt(), iterations, history }
}

/// Start points in order: the origin, then seeded in-domain samples.
pub fn start_points(opts: &SolverOptions) -> impl Iterator<Item = ChartParams> {
    let mut sampler = ChartSampler::new(opts.seed);
    std::iter::once(ChartParams::zero())
        .chain(std::iter::repeat_with(move || sampler.sample()))
        .take(opts.max_starts)
}

pub fn factorize(g: &ComplexMatrix, opts: &SolverOptions) -> Result<FactorizationResult, FactorizeError> {
    opts.validate()?;
    check_target(g)?;
    let mut best: Option<FactorizationResult> = None;
    let mut iterations = 0;
    for (index, start) in start_points(opts).enumerate() {
        let outcome = solve_from(&start, g, opts);
        iterations += outcome.iterations;
        let (params, res) = match canonical_representative(&outcome.params) {
            Some(q) => (q, residual_vector(&q, g).norm()),
            None => (outcome.params, outcome.residual),
        };
        let converged = res <= opts.tol && validate_domain(&params).valid;
        let candidate = FactorizationResult {
            params,
            residual: res,
            iterations,
            starts_used: index + 1,
            converged,
        };
        if converged {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| candidate.residual < b.residual) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("at least one start");
    best.iterations = iterations;
    best.starts_used = opts.max_starts;
    Err(FactorizeError::NoConvergence { best: Box::new(best) })
}

/// Solver outcome regardless of convergence.
pub fn factorize_best_effort(
    g: &ComplexMatrix,
    opts: &SolverOptions,
) -> Result<FactorizationResult, FactorizeError> {
    match factorize(g, opts) {
        Err(FactorizeError::NoConvergence { best }) => Ok(*best),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchStats {
    pub count: usize,
    pub converged: usize,
    pub convergence_rate: f64,
    pub residual_min: f64,
    pub residual_median: f64,
    pub residual_p90: f64,
    pub residual_max: f64,
    pub mean_iterations: f64,
    pub mean_starts: f64,
}

impl BatchStats {
    fn from_results(results: &[FactorizationResult]) -> Self {
        let count = results.len();
        let mut residuals: Vec<f64> = results.iter().map(|r| r.residual).collect();
        residuals.sort_by(f64::total_cmp);
        let q = |f: f64| residuals[((count - 1) as f64 * f).round() as usize];
        let converged = results.iter().filter(|r| r.converged).count();
        let mean = |f: &dyn Fn(&FactorizationResult) -> usize| {
            results.iter().map(|r| f(r) as f64).sum::<f64>() / count as f64
        };
        Self {
            count,
            converged,
            convergence_rate: converged as f64 / count as f64,
            residual_min: q(0.0),
            residual_median: q(0.5),
            residual_p90: q(0.9),
            residual_max: q(1.0),
            mean_iterations: mean(&|r| r.iterations),
            mean_starts: mean(&|r| r.starts_used),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub seed: u64,
    /// compose → factorize → compose on sampled charts; residual is measured
    /// against the original composition.
    pub chart: BatchStats,
    pub haar: BatchStats,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

pub fn roundtrip_report(
    charts: usize,
    haar_targets: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<RoundtripReport, FactorizeError> {
    if charts == 0 || haar_targets == 0 {
        return Err(FactorizeError::InvalidOptions);
    }
    let started = Instant::now();
    let mut sampler = ChartSampler::new(seed);
    let mut chart = Vec::with_capacity(charts);
    for _ in 0..charts {
        let g = compose(&sampler.sample()).g;
        let mut r = factorize_best_effort(&g, opts)?;
        r.residual = residual_vector(&r.params, &g).norm();
        chart.push(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut haar = Vec::with_capacity(haar_targets);
    for _ in 0..haar_targets {
        haar.push(factorize_best_effort(&haar_su4_from(&mut rng), opts)?);
    }
    Ok(RoundtripReport {
        seed,
        chart: BatchStats::from_results(&chart),
        haar: BatchStats::from_results(&haar),
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}
