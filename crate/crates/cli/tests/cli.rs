use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_su4kat"));
    c.env_remove("SU4KAT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn zero_params() -> String {
    json!({"u": [0.0, 0.0, 0.0], "v": [0.0, 0.0, 0.0], "alpha": [0.0, 0.0, 0.0],
           "beta": [0.0, 0.0, 0.0], "theta": [0.0, 0.0, 0.0]})
    .to_string()
}

fn sample_params(seed: &str) -> String {
    let out = run(&["sample", "--kind", "chart", "-n", "1", "--seed", seed]);
    json_of(&out)[0].to_string()
}

fn entries(v: &Value) -> Vec<(f64, f64)> {
    v["data"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter().map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())))
        .collect()
}

fn max_diff(a: &Value, b: &Value) -> f64 {
    entries(a)
        .iter()
        .zip(entries(b))
        .map(|(x, y)| (x.0 - y.0).hypot(x.1 - y.1))
        .fold(0.0, f64::max)
}

#[test]
fn compose_zero_is_identity() {
    let out = run_stdin(&["compose", "-"], &zero_params());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "complex4");
    for (k, (re, im)) in entries(&v).into_iter().enumerate() {
        let want = if k % 5 == 0 { 1.0 } else { 0.0 };
        assert!((re - want).abs() < 1e-15 && im.abs() < 1e-15, "{k}: {re} {im}");
    }
}

#[test]
fn compose_groupings_agree() {
    let p = sample_params("4");
    let kat = json_of(&run_stdin(&["compose"], &p));
    let had = json_of(&run_stdin(&["compose", "--grouping", "hadamard"], &p));
    assert_eq!(had["meta"]["grouping"], "hadamard");
    assert!(max_diff(&kat, &had) < 1e-12);
}

#[test]
fn compose_factors_land_in_meta() {
    let out = run_stdin(&["compose", "--factors"], &sample_params("5"));
    let v = json_of(&out);
    for k in ["k", "a1", "a2", "t"] {
        assert_eq!(v["meta"]["factors"][k].as_array().unwrap().len(), 4, "{k}");
    }
}

#[test]
fn compose_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", &sample_params("6"));
    let g = dir.path().join("g.json");
    let out = run(&["compose", params.to_str().unwrap(), "-o", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let check = run(&["verify", g.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));
    assert_eq!(json_of(&check)["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn factorize_round_trip_and_identity() {
    let g = run_stdin(&["compose"], &sample_params("7")).stdout;
    let out = run_stdin(&["factorize"], std::str::from_utf8(&g).unwrap());
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert!(r["converged"].as_bool().unwrap());
    assert!(r["residual"].as_f64().unwrap() < 1e-9);
    let back = run_stdin(&["compose"], &r["params"].to_string());
    let g0: Value = serde_json::from_slice(&g).unwrap();
    assert!(max_diff(&g0, &json_of(&back)) < 1e-9);

    let id = run_stdin(&["compose"], &zero_params()).stdout;
    let out = run_stdin(&["factorize"], std::str::from_utf8(&id).unwrap());
    assert_eq!(out.status.code(), Some(0));
    let p = &json_of(&out)["params"];
    for key in ["u", "v", "alpha", "beta", "theta"] {
        for x in p[key].as_array().unwrap() {
            assert!(x.as_f64().unwrap().abs() < 1e-6);
        }
    }
}

#[test]
fn factorize_seed_comes_from_env() {
    let g = String::from_utf8(run_stdin(&["compose"], &sample_params("8")).stdout).unwrap();
    let mut c = bin();
    c.env("SU4KAT_SEED", "42").arg("factorize").stdin(Stdio::piped()).stdout(Stdio::piped());
    let mut child = c.spawn().unwrap();
    child.stdin.take().unwrap().write_all(g.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json_of(&out)["seed"], 42);
    let explicit = run_stdin(&["factorize", "--seed", "42"], &g);
    assert_eq!(out.stdout, explicit.stdout);
}

#[test]
fn parse_errors_exit_two_with_location() {
    let out = run_stdin(&["compose"], "{\n  \"u\": [1, 2,\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let mut p: Value = serde_json::from_str(&zero_params()).unwrap();
    p["theta"] = json!([0.0, "x", 0.0]);
    let out = run_stdin(&["compose"], &p.to_string());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta"));

    assert_eq!(run(&["sample", "--kind", "chart", "-n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--kind", "cube"]).status.code(), Some(2));
    assert_eq!(run(&["compose", "/nonexistent/params.json"]).status.code(), Some(2));
    let id = String::from_utf8(run_stdin(&["compose"], &zero_params()).stdout).unwrap();
    assert_eq!(run_stdin(&["factorize", "--tol=0"], &id).status.code(), Some(2));
}

#[test]
fn domain_failure_exits_three_only_when_required() {
    let mut p: Value = serde_json::from_str(&zero_params()).unwrap();
    p["alpha"] = json!([2.0 * std::f64::consts::PI, 0.0, 0.0]);
    let text = p.to_string();
    assert_eq!(run_stdin(&["compose"], &text).status.code(), Some(0));
    let out = run_stdin(&["compose", "--require-domain"], &text);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn no_convergence_exits_four_and_still_writes() {
    let g = String::from_utf8(run_stdin(&["compose"], &sample_params("9")).stdout).unwrap();
    let out = run_stdin(&["factorize", "--tol", "1e-300", "--starts", "1"], &g);
    assert_eq!(out.status.code(), Some(4));
    let r = json_of(&out);
    assert_eq!(r["converged"], false);
    assert_eq!(r["starts_used"], 1);
}

#[test]
fn non_unitary_exits_five_naming_the_defect() {
    let mut g: Value = serde_json::from_slice(&run_stdin(&["compose"], &zero_params()).stdout).unwrap();
    g["data"][0][0] = json!([2.0, 0.0]);
    let out = run_stdin(&["factorize"], &g.to_string());
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("‖g†g − I‖_F"));
    assert_eq!(run_stdin(&["verify", "-"], &g.to_string()).status.code(), Some(1));
}

#[test]
fn verify_scopes_pass() {
    for scope in ["algebra", "hadamard", "spin6"] {
        let out = run(&["verify", "--scope", scope, "--format", "pretty"]);
        assert_eq!(out.status.code(), Some(0), "{scope}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("[FAIL]"), "{text}");
    }
    let spin6 = String::from_utf8(run(&["verify", "--scope", "spin6", "--format", "pretty"]).stdout).unwrap();
    assert!(spin6.contains("105 pairs, 0 not preserved"));
}

#[test]
fn samples_are_deterministic_and_valid() {
    let a = run(&["sample", "--kind", "chart", "-n", "3", "--seed", "7"]);
    let b = run(&["sample", "--kind", "chart", "-n", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    for p in json_of(&a).as_array().unwrap() {
        let out = run_stdin(&["compose", "--require-domain"], &p.to_string());
        assert_eq!(out.status.code(), Some(0));
    }
    let haar = run(&["sample", "--kind", "haar", "-n", "3", "--seed", "7"]);
    for m in json_of(&haar).as_array().unwrap() {
        assert_eq!(run_stdin(&["verify", "-"], &m.to_string()).status.code(), Some(0));
    }
}

#[test]
fn cover_kernel_demonstration() {
    let out = run_stdin(&["cover", "--check-kernel"], &zero_params());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "real6");
    let k = &v["meta"]["kernel"];
    assert!(k["compose_plus_identity"].as_f64().unwrap() < 1e-10);
    assert!(k["cover_minus_identity"].as_f64().unwrap() < 1e-10);
    let check = run_stdin(&["verify", "-"], &String::from_utf8(out.stdout).unwrap());
    assert_eq!(check.status.code(), Some(0));
}
