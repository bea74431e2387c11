//! Named self-check suites behind `su4kat verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{
    compute_structure_constants, project, structure_constants, verify_inclusions, verify_table1,
    verify_table2, AlgebraElement, CommutatorTable, FanoBasis, DIM, LAMBDA_A, LAMBDA_A_PRIME, LAMBDA_T,
};
use crate::chart::{
    a1_coefficients, a_factor, assemble_a1, assemble_a2, assemble_product, compose, compose_hadamard,
    compose_k, compose_k_via_expm, compose_via_expm, hadamards, magic_matrix, product_expansion, torus_factor,
    validate_domain, verify_hadamards, ChartParams, ChartSampler, RotationForm,
};
use crate::io::{MatrixFile, MatrixKind};
use crate::linalg::{check_special_unitary, expm, logm_principal, LinalgError};
use crate::spin6::{
    cover_map, compare_ort6_with_cover, int_commutator, so6_commutator_formula, so6_generator,
    verify_double_cover, LambdaLMap,
};

pub const VERIFY_SEED: u64 = 20_240_601;
pub const VERIFY_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Algebra,
    Chart,
    Hadamard,
    Spin6,
    All,
}

impl FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "algebra" => Ok(Scope::Algebra),
            "chart" => Ok(Scope::Chart),
            "hadamard" => Ok(Scope::Hadamard),
            "spin6" => Ok(Scope::Spin6),
            "all" => Ok(Scope::All),
            other => Err(format!("unknown scope `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}/{}: {}", self.suite, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Known discrepancies that are reported rather than failed.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, suite: &'static str, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { suite, name: name.to_string(), passed, detail });
    }

    fn bound(&mut self, suite: &'static str, name: &str, worst: f64, tol: f64) {
        self.push(suite, name, worst < tol, format!("max defect {worst:.3e} (tol {tol:.0e})"));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str("[NOTE] ");
            out.push_str(n);
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        out
    }
}

pub fn run(scope: Scope) -> VerifyReport {
    let mut r = VerifyReport::default();
    let all = scope == Scope::All;
    if all || scope == Scope::Algebra {
        algebra_suite(&mut r);
    }
    if all || scope == Scope::Chart {
        chart_suite(&mut r);
    }
    if all || scope == Scope::Hadamard {
        hadamard_suite(&mut r);
    }
    if all || scope == Scope::Spin6 {
        spin6_suite(&mut r);
    }
    r
}

fn algebra_suite(r: &mut VerifyReport) {
    const S: &str = "algebra";
    let basis = FanoBasis::get();
    let mut worst: f64 = 0.0;
    for i in 1..=DIM {
        for j in 1..=DIM {
            let want = if i == j { -1.0 } else { 0.0 };
            worst = worst.max((( basis.lambda(i) * basis.lambda(j)).trace() - want).norm());
        }
    }
    r.bound(S, "orthonormality", worst, 1e-14);

    match compute_structure_constants() {
        Ok(_) => r.push(S, "integral-constants", true, "f and d are integers".into()),
        Err(e) => r.push(S, "integral-constants", false, e.to_string()),
    }
    let sc = structure_constants();

    let table = CommutatorTable::shipped();
    let mismatches = verify_table1(sc);
    let unflagged = mismatches.iter().filter(|m| !m.flagged).count();
    r.push(
        S,
        "table1",
        unflagged == 0,
        format!(
            "{} printed cells, {} disagree, {} of them unexplained",
            table.nonzero_cells(),
            mismatches.len(),
            unflagged
        ),
    );
    for m in mismatches.iter().filter(|m| m.flagged) {
        r.notes.push(format!(
            "table1 cell [lambda{}, lambda{}]: printed {:?}, computed {:?} (printed table not antisymmetric here)",
            m.i, m.j, m.printed, m.computed
        ));
    }

    let t2 = verify_table2(sc);
    r.push(S, "table2", t2.is_empty(), format!("{} mismatches", t2.len()));

    let p1 = verify_inclusions(sc);
    r.push(
        S,
        "inclusions",
        p1.passed(),
        format!("{} pairs, {} violations", p1.pairs_checked, p1.violations.len()),
    );

    let mut jacobi = 0;
    for i in 1..=DIM {
        for j in 1..=DIM {
            for k in 1..=DIM {
                let (x, y, z) = (AlgebraElement::basis(i), AlgebraElement::basis(j), AlgebraElement::basis(k));
                let total = sc
                    .bracket(&x, &sc.bracket(&y, &z))
                    .add(&sc.bracket(&y, &sc.bracket(&z, &x)))
                    .add(&sc.bracket(&z, &sc.bracket(&x, &y)));
                if total.norm() != 0.0 {
                    jacobi += 1;
                }
            }
        }
    }
    r.push(S, "jacobi", jacobi == 0, format!("{jacobi} failing triples of 3375"));
}

/// Worst-case defects of the closed forms against independent evaluations.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ChartDefects {
    pub samples: usize,
    pub k_closed_form: f64,
    pub a1_hadamard: f64,
    pub a2_hadamard: f64,
    pub a1_assembly: f64,
    pub a2_assembly: f64,
    pub product_expansion: f64,
    pub grouping: f64,
    pub four_factor_oracle: f64,
    pub unitarity: f64,
    pub factor_unitarity: f64,
}

pub fn chart_defects(n: usize, seed: u64) -> Result<ChartDefects, LinalgError> {
    let mut s = ChartSampler::new(seed);
    let mut d = ChartDefects { samples: n, ..ChartDefects::default() };
    let up = |slot: &mut f64, v: f64| *slot = slot.max(v);
    for _ in 0..n {
        let p = s.sample();
        let f = compose(&p);
        up(&mut d.k_closed_form, compose_k(&p).distance(&compose_k_via_expm(&p)?));
        let e1 = expm(&p.a_element().to_matrix())?;
        let e2 = expm(&p.a_prime_element().to_matrix())?;
        let (a1, a2) = a_factor(p.alpha, p.beta);
        up(&mut d.a1_hadamard, a1.distance(&e1));
        up(&mut d.a2_hadamard, a2.distance(&e2));
        let (x, y) = (a1_coefficients(p.alpha), a1_coefficients(p.beta));
        up(&mut d.a1_assembly, assemble_a1(&x).distance(&e1));
        up(&mut d.a2_assembly, assemble_a2(&y).distance(&e2));
        up(&mut d.product_expansion, assemble_product(&product_expansion(&x, &y)).distance(&(&a1 * &a2)));
        up(&mut d.grouping, f.g.distance(&compose_hadamard(&p)));
        up(&mut d.four_factor_oracle, f.g.distance(&compose_via_expm(&p)?.g));
        let su = check_special_unitary(&f.g, 1.0);
        up(&mut d.unitarity, su.unitarity_defect.max(su.det_defect));
        for m in [&f.k, &f.a1, &f.a2, &f.t] {
            let c = check_special_unitary(m, 1.0);
            up(&mut d.factor_unitarity, c.unitarity_defect.max(c.det_defect));
        }
    }
    Ok(d)
}

pub fn magic_defect() -> f64 {
    let b = FanoBasis::get();
    let r = magic_matrix();
    let targets: [(usize, f64); 6] = [(5, 1.0), (12, 1.0), (10, 1.0), (14, 1.0), (2, -1.0), (8, 1.0)];
    targets
        .iter()
        .enumerate()
        .map(|(i, (t, sign))| {
            let conj = &(&r.adjoint() * b.lambda(i + 1)) * &r;
            conj.distance(&b.lambda(*t).scale_real(*sign))
        })
        .fold(0.0, f64::max)
}

/// Largest change of compose(p).g when one angle moves by 4π. The angles
/// are φ, ψ of the rotation form and the nine abelian coordinates.
pub fn periodicity_defect(probes_per_angle: usize, seed: u64) -> f64 {
    let mut s = ChartSampler::new(seed);
    let mut worst: f64 = 0.0;
    for angle in 0..11 {
        for _ in 0..probes_per_angle {
            let p = s.sample();
            let mut q = p;
            match angle {
                0 | 1 => {
                    let mut rf = RotationForm::from_params(&p);
                    if angle == 0 {
                        rf.phi += 4.0 * PI;
                    } else {
                        rf.psi += 4.0 * PI;
                    }
                    (q.u, q.v) = rf.to_uv();
                }
                k => {
                    let mut v = p.to_vec();
                    v[k + 4] += 4.0 * PI;
                    q = ChartParams::from_slice(&v);
                }
            }
            worst = worst.max(compose(&q).g.distance(&compose(&p).g));
        }
    }
    worst
}

/// Logs of the in-domain factors: the abelian factors must return their own
/// chart coordinates; K only has to admit a principal logarithm.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BranchSummary {
    pub interior_samples: usize,
    pub interior_failures: usize,
    pub interior_recovery_defect: f64,
    pub boundary_points: usize,
    pub boundary_branch_points: usize,
}

pub fn branch_summary(interior: usize, boundary: usize, seed: u64) -> BranchSummary {
    let mut s = ChartSampler::new(seed);
    let mut out = BranchSummary { interior_samples: interior, boundary_points: boundary, ..BranchSummary::default() };
    for _ in 0..interior {
        let p = s.sample();
        let f = compose(&p);
        let mut ok = logm_principal(&f.k).is_ok();
        for (m, idx, coords) in [(&f.a1, LAMBDA_A, p.alpha), (&f.a2, LAMBDA_A_PRIME, p.beta), (&f.t, LAMBDA_T, p.theta)] {
            match logm_principal(m).ok().and_then(|x| project(&x).ok()) {
                Some(e) => {
                    let got = e.triple(idx);
                    let d = (0..3).map(|k| (got[k] - coords[k]).abs()).fold(0.0, f64::max);
                    out.interior_recovery_defect = out.interior_recovery_defect.max(d);
                }
                None => ok = false,
            }
        }
        if !ok {
            out.interior_failures += 1;
        }
    }
    let vertices: [[f64; 3]; 6] = [
        [2.0 * PI, 0.0, 0.0],
        [-2.0 * PI, 0.0, 0.0],
        [0.0, 2.0 * PI, 0.0],
        [0.0, -2.0 * PI, 0.0],
        [0.0, 0.0, 2.0 * PI],
        [0.0, 0.0, -2.0 * PI],
    ];
    for k in 0..boundary {
        let x = if k < vertices.len() { vertices[k] } else { s.octahedron_boundary_point() };
        // rotate which factor sits on the boundary
        let (a1, a2) = a_factor(x, x);
        let m = match k % 3 {
            0 => a1,
            1 => a2,
            _ => torus_factor(x),
        };
        if matches!(logm_principal(&m), Err(LinalgError::BranchPoint { .. })) {
            out.boundary_branch_points += 1;
        }
    }
    out
}

fn chart_suite(r: &mut VerifyReport) {
    const S: &str = "chart";
    r.bound(S, "magic-conjugations", magic_defect(), 1e-14);
    match chart_defects(VERIFY_SAMPLES, VERIFY_SEED) {
        Ok(d) => {
            r.bound(S, "k-closed-form", d.k_closed_form, 1e-12);
            r.bound(S, "a1-hadamard", d.a1_hadamard, 1e-12);
            r.bound(S, "a2-hadamard", d.a2_hadamard, 1e-12);
            r.bound(S, "a1-coefficients", d.a1_assembly, 1e-12);
            r.bound(S, "a2-coefficients", d.a2_assembly, 1e-12);
            r.bound(S, "product-expansion", d.product_expansion, 1e-12);
            r.bound(S, "grouping", d.grouping, 1e-12);
            r.bound(S, "expm-oracle", d.four_factor_oracle, 1e-11);
            r.bound(S, "special-unitary", d.unitarity, 1e-11);
            r.bound(S, "factor-special-unitary", d.factor_unitarity, 1e-10);
        }
        Err(e) => r.push(S, "closed-forms", false, e.to_string()),
    }
    r.bound(S, "periodicity", periodicity_defect(4, VERIFY_SEED), 1e-12);
    let b = branch_summary(VERIFY_SAMPLES, 30, VERIFY_SEED);
    r.push(
        S,
        "interior-logs",
        b.interior_failures == 0 && b.interior_recovery_defect < 1e-10,
        format!(
            "{} samples, {} failures, coordinate recovery {:.3e}",
            b.interior_samples, b.interior_failures, b.interior_recovery_defect
        ),
    );
    r.push(
        S,
        "boundary-branch-points",
        b.boundary_branch_points == b.boundary_points,
        format!("{} of {} boundary points", b.boundary_branch_points, b.boundary_points),
    );
    let mut s = ChartSampler::new(VERIFY_SEED);
    let invalid = (0..VERIFY_SAMPLES).filter(|_| !validate_domain(&s.sample()).valid).count();
    r.push(S, "sampler-domain", invalid == 0, format!("{invalid} of {VERIFY_SAMPLES} samples outside"));
}

fn hadamard_suite(r: &mut VerifyReport) {
    const S: &str = "hadamard";
    let h = verify_hadamards(&hadamards());
    let flag = |b: bool| if b { "exact" } else { "violated" }.to_string();
    r.push(S, "orthogonal", h.all_orthogonal, flag(h.all_orthogonal));
    r.push(S, "sign-entries", h.all_sign_entries, flag(h.all_sign_entries));
    r.push(S, "h-equals-h1", h.h_is_h1, flag(h.h_is_h1));
    r.push(S, "hp-equals-h1t-h2", h.hp_is_h1t_h2, flag(h.hp_is_h1t_h2));
    r.push(S, "hpp-equals-h2t", h.hpp_is_h2t, flag(h.hpp_is_h2t));
    r.push(S, "h1-sylvester", h.h1_from_sylvester, flag(h.h1_from_sylvester));
    r.push(S, "h2-sylvester", h.h2_from_sylvester, flag(h.h2_from_sylvester));
}

fn spin6_suite(r: &mut VerifyReport) {
    const S: &str = "spin6";
    let map = LambdaLMap::default();
    r.push(S, "bijective", map.is_bijective(), "15 planes".into());
    let failures = map.bracket_failures();
    r.push(S, "brackets", failures.is_empty(), format!("105 pairs, {} not preserved", failures.len()));

    let mut formula = 0;
    for m in 1..=6 {
        for n in (1..=6).filter(|&n| n != m) {
            for p in 1..=6 {
                for q in (1..=6).filter(|&q| q != p) {
                    let direct = int_commutator(
                        &so6_generator(m, n).expect("plane").matrix,
                        &so6_generator(p, q).expect("plane").matrix,
                    );
                    if direct != so6_commutator_formula(m, n, p, q) {
                        formula += 1;
                    }
                }
            }
        }
    }
    r.push(S, "commutator-formula", formula == 0, format!("{formula} of 900 index tuples differ"));

    match verify_double_cover(VERIFY_SAMPLES, VERIFY_SEED) {
        Ok(d) => {
            r.bound(S, "orthogonality", d.max_orthogonality_defect, 1e-10);
            r.bound(S, "determinant", d.max_det_defect, 1e-10);
            r.bound(S, "adjoint", d.max_adjoint_defect, 1e-10);
            r.push(
                S,
                "products",
                d.max_product_defect < 1e-7 && d.product_pairs > 0,
                format!("{} pairs, max defect {:.3e}", d.product_pairs, d.max_product_defect),
            );
            r.bound(S, "sign-pairs", d.max_sign_pair_defect, 1e-9);
            let kernel = d.kernel_identity_distance
                .max(d.kernel_minus_identity_distance)
                .max(d.kernel_cover_distances[0])
                .max(d.kernel_cover_distances[1]);
            r.bound(S, "kernel", kernel, 1e-10);
        }
        Err(e) => r.push(S, "double-cover", false, e.to_string()),
    }
    if let Ok(c) = compare_ort6_with_cover([0.4, -1.1, 2.5]) {
        r.notes.push(format!(
            "ort6 product form vs cover map at theta = {:?}: distance {:.6}, det {:.1}",
            c.theta, c.distance, c.ort6_determinant
        ));
    }
    let id = cover_map(&ChartParams::zero()).map(|c| c.matrix == nalgebra::Matrix6::identity());
    r.push(S, "origin", id.unwrap_or(false), "cover of the origin is I6".into());
}

/// Checks a matrix read from a file for membership in its group.
pub fn check_matrix(data: &MatrixFile, tol: f64) -> Check {
    match data.kind {
        MatrixKind::Complex4 => {
            let rep = check_special_unitary(&data.to_complex(), tol);
            Check {
                suite: "file",
                name: "special-unitary".into(),
                passed: rep.passed,
                detail: format!("unitarity {:.3e}, det {:.3e}", rep.unitarity_defect, rep.det_defect),
            }
        }
        MatrixKind::Complex6 => {
            let d = data.to_complex().unitarity_defect();
            Check { suite: "file", name: "unitary".into(), passed: d < tol, detail: format!("unitarity {d:.3e}") }
        }
        MatrixKind::Real6 => {
            let m = data.to_real6().expect("real6");
            let orth = (m * m.transpose() - nalgebra::Matrix6::identity()).norm();
            let det = (m.determinant() - 1.0).abs();
            Check {
                suite: "file",
                name: "special-orthogonal".into(),
                passed: orth < tol && det < tol,
                detail: format!("orthogonality {orth:.3e}, det {det:.3e}"),
            }
        }
    }
}
