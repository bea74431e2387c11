//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use su4kat::algebra::{
    structure_constants, table2_entries, verify_table1, verify_table2, Subspace, DIM,
};
use su4kat::chart::{hadamards, verify_hadamards};
use su4kat::factorizer::roundtrip_report;
use su4kat::spin6::{verify_double_cover, LambdaLMap};
use su4kat::verify::{branch_summary, chart_defects, magic_defect, periodicity_defect};
use su4kat::{compose, cover_map, ChartParams, ComplexMatrix, Matrix6, SolverOptions};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn structure_tables() -> Outcome {
    let start = Instant::now();
    let sc = structure_constants();
    let t1 = verify_table1(sc);
    let unflagged = t1.iter().filter(|m| !m.flagged).count();
    let flagged = t1.len() - unflagged;
    let t2 = verify_table2(sc);
    let entries = table2_entries();
    let printed_plus = entries.iter().filter(|e| e.value == 1).count();
    let printed_minus = entries.iter().filter(|e| e.value == -1).count();
    let (mut plus, mut minus) = (0, 0);
    for i in 1..=DIM {
        for j in i..=DIM {
            for k in j..=DIM {
                match sc.d(i, j, k) {
                    1 => plus += 1,
                    -1 => minus += 1,
                    0 => {}
                    _ => minus += 100,
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        unflagged == 0
            && t2.is_empty()
            && (plus, minus) == (12, 3)
            && (printed_plus, printed_minus) == (12, 3)
            && secs < 1.0,
        format!(
            "table1 {unflagged} unexplained, {flagged} flagged typo cells; d nonzero +1:{plus} -1:{minus}, \
             table2 mismatches {}; {secs:.3}s",
            t2.len()
        ),
    )
}

fn inclusions() -> Outcome {
    use Subspace::*;
    let sc = structure_constants();
    let mut violations = 0;
    let mut scanned = 0;
    for i in 1..=DIM {
        for j in 1..=DIM {
            scanned += 1;
            let allowed: Option<&[Subspace]> = match (Subspace::of(i), Subspace::of(j)) {
                (A, A) | (APrime, APrime) | (T, T) => Some(&[]),
                (APrime, A) | (A, APrime) | (K, K) | (T, A) | (A, T) | (T, APrime) | (APrime, T) => Some(&[K]),
                (K, T) | (T, K) => Some(&[A, APrime]),
                _ => None,
            };
            if let Some(allowed) = allowed {
                violations += sc
                    .commutator_terms(i, j)
                    .iter()
                    .filter(|(k, _)| !allowed.contains(&Subspace::of(*k)))
                    .count();
            }
        }
    }
    outcome(violations == 0, format!("{scanned} brackets scanned, {violations} violations"))
}

fn closed_forms_and_grouping() -> (Outcome, Outcome) {
    let start = Instant::now();
    let d = chart_defects(1000, 3).expect("oracle evaluation");
    let secs = start.elapsed().as_secs_f64();
    let worst = d.a1_hadamard.max(d.a2_hadamard).max(d.k_closed_form).max(d.a1_assembly).max(d.a2_assembly);
    let c3 = outcome(
        worst < 1e-12 && secs < 10.0,
        format!(
            "1000 samples: A1 {:.2e}, A2 {:.2e}, K {:.2e}, coefficients {:.2e}/{:.2e}; {secs:.2}s",
            d.a1_hadamard, d.a2_hadamard, d.k_closed_form, d.a1_assembly, d.a2_assembly
        ),
    );
    let h = verify_hadamards(&hadamards());
    let exact = h.h_is_h1 && h.hp_is_h1t_h2 && h.hpp_is_h2t && h.all_orthogonal && h.all_sign_entries;
    let c4 = outcome(
        d.grouping < 1e-12 && exact,
        format!("1000 samples: max grouping defect {:.2e}; Hadamard identities exact: {exact}", d.grouping),
    );
    (c3, c4)
}

fn magic() -> Outcome {
    let d = magic_defect();
    outcome(d < 1e-14, format!("six conjugations, max defect {d:.2e}"))
}

fn branches() -> Outcome {
    let b = branch_summary(1000, 100, 6);
    outcome(
        b.interior_failures == 0 && b.boundary_branch_points == b.boundary_points,
        format!(
            "{} interior samples, {} without principal log; {} of {} boundary points raise BranchPoint",
            b.interior_samples, b.interior_failures, b.boundary_branch_points, b.boundary_points
        ),
    )
}

fn round_trip() -> Outcome {
    let opts = SolverOptions::default();
    let r = roundtrip_report(100, 500, 7, &opts).expect("valid options");
    let rate = r.haar.convergence_rate;
    outcome(
        r.chart.residual_max < 1e-9 && r.chart.converged == r.chart.count && rate >= 0.99 && r.wall_time_secs < 300.0,
        format!(
            "100 charts max residual {:.2e}; Haar {}/{} converged ({:.1}%); {:.1}s",
            r.chart.residual_max,
            r.haar.converged,
            r.haar.count,
            100.0 * rate,
            r.wall_time_secs
        ),
    )
}

fn double_cover() -> Outcome {
    let failures = LambdaLMap::default().bracket_failures().len();
    let d = verify_double_cover(1000, 8).expect("cover evaluation");
    let at = ChartParams::with_theta([2.0 * PI, 0.0, 0.0]);
    let minus = compose(&at).g.distance(&ComplexMatrix::identity(4).scale_real(-1.0));
    let image = cover_map(&at).expect("cover");
    let plus = (image.matrix - Matrix6::identity()).norm();
    let membership = d.max_orthogonality_defect.max(d.max_det_defect);
    outcome(
        failures == 0 && membership < 1e-10 && minus < 1e-10 && plus < 1e-10,
        format!(
            "{failures} of 105 brackets broken; 1000 samples SO(6) defect {membership:.2e}; \
             compose(2pi,0,0)+I4 {minus:.2e}, cover-I6 {plus:.2e}"
        ),
    )
}

fn periodicity() -> Outcome {
    let d = periodicity_defect(20, 9);
    outcome(d < 1e-12, format!("11 angles x 20 probes, max defect {d:.2e}"))
}

fn run(args: &[&str], stdin: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_su4kat"));
    cmd.args(args).env_remove("SU4KAT_SEED");
    if let Some(p) = stdin {
        cmd.stdin(std::fs::File::open(p).expect("stdin file"));
    }
    cmd.output().expect("binary runs")
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = |name: &str| dir.path().join(name);
    let s = |p: &Path| p.to_str().expect("utf-8 path").to_string();

    let sample = run(&["sample", "--kind", "chart", "-n", "1", "--seed", "11"], None);
    let text = String::from_utf8(sample.stdout).expect("utf-8");
    let first = text.trim().trim_start_matches('[').trim_end_matches(']').to_string();
    std::fs::write(path("p.json"), &first).expect("write");
    let g = run(&["compose", &s(&path("p.json"))], None);
    std::fs::write(path("g.json"), &g.stdout).expect("write");
    std::fs::write(path("bad.json"), "{\"u\": [1, 2,").expect("write");
    let mut wide: serde_json::Value = serde_json::from_str(&first).expect("params");
    wide["alpha"] = serde_json::json!([7.0, 0.0, 0.0]);
    std::fs::write(path("wide.json"), wide.to_string()).expect("write");
    let doubled = String::from_utf8(g.stdout.clone()).expect("utf-8").replacen("e-1", "e0", 3);
    std::fs::write(path("skew.json"), doubled).expect("write");

    let (p, gm) = (s(&path("p.json")), s(&path("g.json")));
    let commands: Vec<Vec<&str>> = vec![
        vec!["compose", &p, "--factors"],
        vec!["compose", &p, "--grouping", "hadamard", "--format", "pretty"],
        vec!["factorize", &gm, "--seed", "5"],
        vec!["verify", "--scope", "all"],
        vec!["verify", &gm, "--format", "pretty"],
        vec!["sample", "--kind", "chart", "-n", "3", "--seed", "7"],
        vec!["sample", "--kind", "haar", "-n", "3", "--seed", "7"],
        vec!["cover", &p, "--check-kernel"],
    ];
    let mut nondeterministic = Vec::new();
    for c in &commands {
        let (a, b) = (run(c, None), run(c, None));
        if a.stdout != b.stdout || a.status.code() != Some(0) || b.status.code() != Some(0) {
            nondeterministic.push(c[0]);
        }
    }
    let (bad, wide, skew) = (s(&path("bad.json")), s(&path("wide.json")), s(&path("skew.json")));
    let expected_codes: Vec<(Vec<&str>, i32)> = vec![
        (vec!["compose", &p], 0),
        (vec!["compose", &bad], 2),
        (vec!["compose", &wide, "--require-domain"], 3),
        (vec!["factorize", &gm, "--tol", "1e-300", "--starts", "1"], 4),
        (vec!["factorize", &skew], 5),
    ];
    let mut wrong = Vec::new();
    for (c, code) in &expected_codes {
        let got = run(c, None).status.code();
        if got != Some(*code) {
            wrong.push(format!("{} expected {code} got {got:?}", c.join(" ")));
        }
    }
    let piped = run(&["compose", "-"], Some(&path("p.json")));
    let piped_ok = piped.stdout == g.stdout;
    outcome(
        nondeterministic.is_empty() && wrong.is_empty() && piped_ok,
        format!(
            "{} commands run twice, {} differ; exit codes 0/2/3/4/5 {}; stdin pipeline {}",
            commands.len(),
            nondeterministic.len(),
            if wrong.is_empty() { "as contracted".to_string() } else { wrong.join("; ") },
            if piped_ok { "matches" } else { "differs" }
        ),
    )
}

fn main() {
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    results.push((1, "structure-constant tables", structure_tables()));
    results.push((2, "subalgebra inclusions", inclusions()));
    let (c3, c4) = closed_forms_and_grouping();
    results.push((3, "closed forms vs expm", c3));
    results.push((4, "grouping equivalence", c4));
    results.push((5, "magic-basis conjugations", magic()));
    results.push((6, "domain and branch points", branches()));
    results.push((7, "factorizer round trip", round_trip()));
    results.push((8, "double cover", double_cover()));
    results.push((9, "4pi periodicity", periodicity()));
    results.push((10, "CLI determinism and exit codes", cli_contract()));

    let mut failed = 0;
    for (n, name, o) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("acceptance {n:>2} [{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
