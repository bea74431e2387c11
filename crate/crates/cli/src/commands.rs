use std::f64::consts::PI;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde_json::{json, Map, Value};
use su4kat::chart::{compose_with, sample_haar_batch, ChartSampler};
use su4kat::factorizer::factorize_best_effort;
use su4kat::io::{parse_chart_params, serialize_canonical, to_canonical_json};
use su4kat::linalg::check_special_unitary;
use su4kat::verify::{self, Check, Scope, VerifyReport};
use su4kat::{
    cover_map, validate_domain, ChartParams, ComplexMatrix, FactorizeError, Grouping,
    Matrix6, MatrixFile, MatrixKind, OutputFormat, SolverOptions,
};

const VERIFY_FILE_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("{0}")]
    NonUnitary(String),
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    let res = if path == Path::new("-") {
        io::stdout().lock().write_all(text.as_bytes())
    } else {
        fs::write(path, text)
    };
    res.map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

fn emit(path: &Path, value: &Value, format: OutputFormat) -> Result<(), CliError> {
    let text = to_canonical_json(value, format).map_err(|e| CliError::Failed(e.to_string()))?;
    write_output(path, &text)
}

fn read_params(path: &Path) -> Result<ChartParams, CliError> {
    let text = read_input(path)?;
    parse_chart_params(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn matrix_data(m: &ComplexMatrix) -> Value {
    MatrixFile::from_complex(m).to_value()["data"].clone()
}

fn tool_meta() -> Value {
    Value::from(format!("su4kat {}", env!("CARGO_PKG_VERSION")))
}

pub fn compose(
    params: &Path,
    output: &Path,
    factors: bool,
    grouping: Grouping,
    require_domain: bool,
    format: OutputFormat,
) -> Result<(), CliError> {
    let p = read_params(params)?;
    if require_domain {
        let report = validate_domain(&p);
        if !report.valid {
            let list: Vec<String> = report
                .violations
                .iter()
                .map(|v| format!("{} (value {:.6}, bound {:.6})", v.constraint, v.value, v.bound))
                .collect();
            return Err(CliError::Domain(format!("parameters outside the chart domain: {}", list.join("; "))));
        }
    }
    let g = compose_with(&p, grouping);
    let grouping_name = match grouping {
        Grouping::Kat => "kat",
        Grouping::Hadamard => "hadamard",
    };
    let mut file = MatrixFile::from_complex(&g)
        .with_meta("grouping", Value::from(grouping_name))
        .with_meta("tool", tool_meta());
    if factors {
        let f = su4kat::compose(&p);
        let all = json!({
            "k": matrix_data(&f.k),
            "a1": matrix_data(&f.a1),
            "a2": matrix_data(&f.a2),
            "t": matrix_data(&f.t),
        });
        file = file.with_meta("factors", all);
    }
    emit(output, &file.to_value(), format)
}

pub fn factorize(matrix: &Path, output: &Path, opts: &SolverOptions, format: OutputFormat) -> Result<(), CliError> {
    let text = read_input(matrix)?;
    let file = MatrixFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", matrix.display())))?;
    if file.kind != MatrixKind::Complex4 {
        return Err(CliError::Input(format!("{}: expected a complex4 matrix", matrix.display())));
    }
    let g = file.to_complex();
    let result = match factorize_best_effort(&g, opts) {
        Ok(r) => r,
        Err(FactorizeError::TargetNotUnitary { .. }) => {
            let rep = check_special_unitary(&g, 1e-8);
            return Err(CliError::NonUnitary(format!(
                "input is not special unitary: ‖g†g − I‖_F = {:.3e}, |det g − 1| = {:.3e}",
                rep.unitarity_defect, rep.det_defect
            )));
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let mut value = serde_json::to_value(&result).map_err(|e| CliError::Failed(e.to_string()))?;
    value["tol"] = Value::from(opts.tol);
    value["seed"] = Value::from(opts.seed);
    emit(output, &value, format)?;
    if result.converged {
        Ok(())
    } else {
        Err(CliError::NoConvergence(format!(
            "no start reached tolerance {:.1e}; best residual {:.3e} after {} starts",
            opts.tol, result.residual, result.starts_used
        )))
    }
}

pub fn verify(file: Option<&Path>, scope: Option<Scope>, format: OutputFormat) -> Result<(), CliError> {
    let mut report = VerifyReport::default();
    if let Some(path) = file {
        let text = read_input(path)?;
        let m = MatrixFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let check: Check = verify::check_matrix(&m, VERIFY_FILE_TOL);
        report.checks.push(check);
    }
    let scope = scope.or(if file.is_none() { Some(Scope::All) } else { None });
    if let Some(scope) = scope {
        let suites = verify::run(scope);
        report.checks.extend(suites.checks);
        report.notes.extend(suites.notes);
    }
    let text = match format {
        OutputFormat::Pretty => report.render(),
        OutputFormat::Json => serialize_canonical(&report, format).map_err(|e| CliError::Failed(e.to_string()))?,
    };
    write_output(Path::new("-"), &text)?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}/{}", c.suite, c.name))
            .collect();
        Err(CliError::Failed(format!("failed checks: {}", failed.join(", "))))
    }
}

pub fn sample(haar: bool, count: usize, seed: u64, output: &Path, format: OutputFormat) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Input("-n must be at least 1".into()));
    }
    let items: Vec<Value> = if haar {
        sample_haar_batch(count, seed).iter().map(|g| MatrixFile::from_complex(g).to_value()).collect()
    } else {
        let mut s = ChartSampler::new(seed);
        (0..count)
            .map(|_| serde_json::to_value(s.sample()).map_err(|e| CliError::Failed(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    emit(output, &Value::Array(items), format)
}

pub fn cover(params: &Path, output: &Path, check_kernel: bool, format: OutputFormat) -> Result<(), CliError> {
    let p = read_params(params)?;
    let c = cover_map(&p).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut file = MatrixFile::from_real6(&c.matrix)
        .with_meta("orthogonality_defect", Value::from(c.orthogonality_defect()))
        .with_meta("det_defect", Value::from(c.det_defect()))
        .with_meta("tool", tool_meta());
    if check_kernel {
        let minus = ChartParams::with_theta([2.0 * PI, 0.0, 0.0]);
        let g = su4kat::compose(&minus).g;
        let image = cover_map(&minus).map_err(|e| CliError::Failed(e.to_string()))?;
        let id4 = ComplexMatrix::identity(4);
        let mut kernel = Map::new();
        kernel.insert("theta".into(), json!([2.0 * PI, 0.0, 0.0]));
        kernel.insert("compose".into(), matrix_data(&g));
        kernel.insert("compose_plus_identity".into(), Value::from(g.distance(&id4.scale_real(-1.0))));
        kernel.insert("cover".into(), MatrixFile::from_real6(&image.matrix).to_value()["data"].clone());
        kernel.insert(
            "cover_minus_identity".into(),
            Value::from((image.matrix - Matrix6::identity()).norm()),
        );
        file = file.with_meta("kernel", Value::Object(kernel));
    }
    emit(output, &file.to_value(), format)
}
