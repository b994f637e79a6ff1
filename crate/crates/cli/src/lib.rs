//! Batch front end: reads JSON inputs, runs one analysis, writes a report.
//!
//! Reports are JSON objects with sorted keys and the fields `command`,
//! `inputs`, `results`, `residuals`, `tolerances` and `elapsed_ms`; failed
//! runs carry `error` in place of `results` and `residuals`. Exit codes are
//! 0 on success, 1 on a domain error and 2 on malformed input.

pub mod schema;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use opalg::elemcalc::{jordan_parts, polar_factorise, positive_sqrt};
use opalg::gelfand::{characters, hermitian_defect, wiener_invert};
use opalg::gnsrep::{functional_diagnostics, gns_construct, Functional, Representation};
use opalg::linops::{eig, hermitian_eig};
use opalg::specanalysis::{hermitian_probe, positive_test, ptak, spectral_radius, ProbeVerdict};
use opalg::unbounded::{cayley_pair, evolve, generator_check};
use opalg::vonneumann::{
    bicommutant, commutant, diagonalise_cyclic, find_separating_vector, irreducibility_report, OperatorSet,
};
use opalg::{CMat, Error, Violation};

use schema::{
    from_c64, from_vec, to_vec, AlgebraJson, EvolutionJson, MatrixJson, MatrixSetJson, SequenceJson, ValuesJson,
};

const PROBE_SAMPLES: usize = 32;
const RADIUS_SQUARINGS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "opalg", version, about = "Spectral analysis of finite-dimensional *-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = opalg::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time in `elapsed_ms` (otherwise 0, keeping
    /// reports byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues, spectral radius, norm and Pták function of a matrix.
    Spectrum { matrix: PathBuf },
    /// Positivity test of a matrix.
    Positivity { matrix: PathBuf },
    /// Positive square root.
    Sqrt { matrix: PathBuf },
    /// Polar decomposition, plus Jordan parts for Hermitian input.
    Polar { matrix: PathBuf },
    /// Character table of a commutative algebra.
    Gelfand { algebra: PathBuf },
    /// GNS representation of a positive functional.
    Gns { algebra: PathBuf, functional: PathBuf },
    /// Commutant and bicommutant of a set of matrices.
    Commutant { set: PathBuf },
    /// Spectral representation of a cyclic commutative representation.
    Diagonalize { set: PathBuf, vector: PathBuf },
    /// Unitary group and generator of a diagonal self-adjoint operator.
    Evolve { config: PathBuf },
    /// Inverse in the Wiener algebra of a finitely supported sequence.
    Wiener { sequence: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Positivity { .. } => "positivity",
            Command::Sqrt { .. } => "sqrt",
            Command::Polar { .. } => "polar",
            Command::Gelfand { .. } => "gelfand",
            Command::Gns { .. } => "gns",
            Command::Commutant { .. } => "commutant",
            Command::Diagonalize { .. } => "diagonalize",
            Command::Evolve { .. } => "evolve",
            Command::Wiener { .. } => "wiener",
        }
    }
}

/// Exit code and the text destined for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

struct Failure {
    code: i32,
    error: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidShape(_) | Error::InvalidInput(_) => 2,
            _ => 1,
        };
        Failure { code, error: error_payload(&e) }
    }
}

fn malformed(kind: &str, fields: Value) -> Failure {
    let mut v = fields;
    v["kind"] = json!(kind);
    Failure { code: 2, error: v }
}

/// Serializes a domain error as `{"kind": …, payload fields…}`.
pub fn error_payload(e: &Error) -> Value {
    let mut v = match e {
        Error::InvalidShape(m) | Error::InvalidInput(m) => json!({ "message": m }),
        Error::NoConvergence { iterations } => json!({ "iterations": iterations }),
        Error::AlgebraViolations(vs) => json!({ "violations": vs.iter().map(violation_payload).collect::<Vec<_>>() }),
        Error::SpectralRadiusTooLarge { radius } => json!({ "radius": radius }),
        Error::PoleOnSpectrum { root, nearest, distance } => {
            json!({ "root": from_c64(root), "nearest": from_c64(nearest), "distance": distance })
        }
        Error::NotPositive { min_eigenvalue } => json!({ "min_eigenvalue": min_eigenvalue }),
        Error::NotInvertible { min_singular_value } => json!({ "min_singular_value": min_singular_value }),
        Error::NotHermitian { defect } | Error::NotNormal { defect } => json!({ "defect": defect }),
        Error::MuTooSmall { mu, radius } => json!({ "mu": mu, "radius": radius }),
        Error::NotCommutative { i, j, residual } => json!({ "i": i, "j": j, "residual": residual }),
        Error::TransformVanishes { t, modulus } => json!({ "t": t, "modulus": modulus }),
        Error::GammaTooSmall { variation } => json!({ "variation": variation }),
        Error::NotAState { index } => json!({ "index": index }),
        Error::MissingPoint { label } => json!({ "label": from_c64(label) }),
        Error::NotCyclic { rank, dim } => json!({ "rank": rank, "dim": dim }),
        Error::NoSeparatingVector { draws } => json!({ "draws": draws }),
        Error::SupportExceedsTruncation { support, truncation } => {
            json!({ "support": support, "truncation": truncation })
        }
        Error::DegreeTooLarge { n, max } => json!({ "n": n, "max": max }),
        Error::NoUnit
        | Error::NotSemisimple
        | Error::ZeroFunctional
        | Error::InfiniteVariation
        | Error::ZeroRepresentation
        | Error::ZeroVector => json!({}),
    };
    v["kind"] = json!(e.kind());
    v["message"] = json!(e.to_string());
    v
}

fn violation_payload(v: &Violation) -> Value {
    match v {
        Violation::Associativity { i, j, k, residual } => {
            json!({ "kind": "Associativity", "i": i, "j": j, "k": k, "residual": residual })
        }
        Violation::Involution { i, j, residual } => json!({ "kind": "Involution", "i": i, "j": j, "residual": residual }),
        Violation::NotInvolutive { i, residual } => json!({ "kind": "NotInvolutive", "i": i, "residual": residual }),
        Violation::Norm { i, j, lhs, rhs } => json!({ "kind": "Norm", "i": i, "j": j, "lhs": lhs, "rhs": rhs }),
        Violation::Unit { index, residual } => json!({ "kind": "Unit", "index": index, "residual": residual }),
        Violation::Realization { detail } => json!({ "kind": "Realization", "detail": detail }),
    }
}

/// Parsed inputs, echoed into the report under their role names.
#[derive(Default)]
struct Inputs(Map<String, Value>);

impl Inputs {
    fn load<T: DeserializeOwned + Serialize>(&mut self, role: &str, path: &Path) -> Result<T, Failure> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path)
            .map_err(|e| malformed("Io", json!({ "path": shown, "message": e.to_string() })))?;
        let value: T = serde_json::from_str(&text).map_err(|e| {
            let kind = match e.classify() {
                serde_json::error::Category::Data => "InvalidSchema",
                _ => "MalformedJson",
            };
            malformed(kind, json!({ "path": shown, "line": e.line(), "column": e.column(), "message": e.to_string() }))
        })?;
        let echo = serde_json::to_value(&value).expect("schema types serialize");
        self.0.insert(role.to_string(), json!({ "path": shown, "value": echo }));
        Ok(value)
    }
}

struct Computed {
    results: Value,
    residuals: Value,
}

/// Runs one invocation; writes the report to `--out` when given.
pub fn dispatch<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> =
        std::iter::once("opalg".into()).chain(argv.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            let kind = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => "UnknownCommand",
                _ => "InvalidArguments",
            };
            let report = json!({ "command": Value::Null, "error": { "kind": kind, "message": e.to_string() } });
            return Outcome { code: 2, stdout: render(&report, Format::Json) };
        }
    };

    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = run(&cli, &mut inputs);
    let elapsed = if cli.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };

    let mut report = json!({
        "command": cli.command.name(),
        "inputs": { "files": Value::Object(inputs.0), "seed": cli.seed },
        "tolerances": { "tol": cli.tol },
        "elapsed_ms": elapsed,
    });
    let code = match outcome {
        Ok(c) => {
            report["results"] = c.results;
            report["residuals"] = c.residuals;
            0
        }
        Err(f) => {
            report["error"] = f.error;
            f.code
        }
    };
    let text = render(&report, cli.format);
    match &cli.out {
        None => Outcome { code, stdout: text },
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new() },
            Err(e) => {
                let report = json!({
                    "command": cli.command.name(),
                    "error": { "kind": "Io", "path": path.display().to_string(), "message": e.to_string() },
                });
                Outcome { code: 2, stdout: render(&report, Format::Json) }
            }
        },
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Computed, Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(malformed("InvalidArguments", json!({ "message": "--tol must be positive and finite" })));
    }
    let matrix = |inputs: &mut Inputs, path: &Path| -> Result<CMat, Failure> {
        let m: MatrixJson = inputs.load("matrix", path)?;
        m.to_cmat().map_err(|msg| Failure::from(Error::InvalidShape(msg)))
    };
    match &cli.command {
        Command::Spectrum { matrix: p } => spectrum(&matrix(inputs, p)?, tol),
        Command::Positivity { matrix: p } => positivity(&matrix(inputs, p)?, tol),
        Command::Sqrt { matrix: p } => sqrt(&matrix(inputs, p)?, tol),
        Command::Polar { matrix: p } => polar(&matrix(inputs, p)?, tol),
        Command::Gelfand { algebra } => {
            let a: AlgebraJson = inputs.load("algebra", algebra)?;
            gelfand(&a, tol, cli.seed)
        }
        Command::Gns { algebra, functional } => {
            let a: AlgebraJson = inputs.load("algebra", algebra)?;
            let f: ValuesJson = inputs.load("functional", functional)?;
            gns(&a, &f, tol)
        }
        Command::Commutant { set } => {
            let s: MatrixSetJson = inputs.load("set", set)?;
            commutant_cmd(&s, tol, cli.seed)
        }
        Command::Diagonalize { set, vector } => {
            let s: MatrixSetJson = inputs.load("set", set)?;
            let v: ValuesJson = inputs.load("vector", vector)?;
            diagonalize(&s, &v, tol)
        }
        Command::Evolve { config } => {
            let c: EvolutionJson = inputs.load("config", config)?;
            evolve_cmd(&c)
        }
        Command::Wiener { sequence } => {
            let s: SequenceJson = inputs.load("sequence", sequence)?;
            wiener(&s, tol)
        }
    }
}

fn square(m: &CMat) -> Result<usize, Failure> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(Error::InvalidShape(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())).into())
    }
}

fn mat(m: &CMat) -> Value {
    serde_json::to_value(MatrixJson::from_cmat(m)).expect("matrix serializes")
}

fn spectrum(a: &CMat, tol: f64) -> Result<Computed, Failure> {
    square(a)?;
    let dec = eig(a, tol)?;
    let sr = spectral_radius(a, RADIUS_SQUARINGS)?;
    Ok(Computed {
        results: json!({
            "eigenvalues": from_vec(&dec.values),
            "normal": dec.normal,
            "op_norm": a.op_norm()?,
            "ptak": ptak(a)?,
            "spectral_radius": sr.radius,
        }),
        residuals: json!({ "eigen": dec.residual, "gelfand_limit": sr.eig_gap }),
    })
}

fn positivity(a: &CMat, tol: f64) -> Result<Computed, Failure> {
    square(a)?;
    let positive = positive_test(a, tol)?;
    let h = (a + &a.adjoint()).scale_real(0.5);
    let min = hermitian_eig(&h)?.0.first().copied().unwrap_or(0.0);
    Ok(Computed {
        results: json!({ "positive": positive, "min_eigenvalue_hermitian_part": min }),
        residuals: json!({ "hermitian_defect": a.hermitian_defect() }),
    })
}

fn sqrt(a: &CMat, tol: f64) -> Result<Computed, Failure> {
    square(a)?;
    let s = positive_sqrt(a, tol)?;
    Ok(Computed { results: json!({ "sqrt": mat(&s) }), residuals: json!({ "square": (&s * &s).dist(a) }) })
}

fn polar(a: &CMat, tol: f64) -> Result<Computed, Failure> {
    let n = square(a)?;
    let p = polar_factorise(a, tol)?;
    let mut results = json!({ "u": mat(&p.u), "abs": mat(&p.p) });
    let mut residuals = json!({
        "factorisation": (&p.u * &p.p).dist(a),
        "unitarity": (&p.u.adjoint() * &p.u).dist(&CMat::identity(n)),
    });
    if a.hermitian_defect() <= tol * a.norm().max(f64::MIN_POSITIVE) {
        let j = jordan_parts(a, tol)?;
        results["jordan"] = json!({ "plus": mat(&j.plus), "minus": mat(&j.minus) });
        residuals["jordan_orthogonality"] = json!((&j.plus * &j.minus).norm());
        residuals["jordan_sum"] = json!((&j.plus - &j.minus).dist(a));
    }
    Ok(Computed { results, residuals })
}

fn gelfand(a: &AlgebraJson, tol: f64, seed: u64) -> Result<Computed, Failure> {
    let alg = a.build()?;
    let table = characters(&alg, tol)?;
    let probe = match hermitian_probe(&alg, PROBE_SAMPLES, seed)? {
        ProbeVerdict::NoCounterexample => json!({ "counterexample": false }),
        ProbeVerdict::Counterexample { coeffs, reason } => {
            json!({ "counterexample": true, "coeffs": from_vec(&coeffs), "reason": reason })
        }
    };
    let rows: Vec<Value> = (0..table.len()).map(|t| json!(from_vec(table.row(t)))).collect();
    Ok(Computed {
        results: json!({ "characters": rows, "count": table.len(), "hermitian_probe": probe }),
        residuals: json!({
            "hermitian": hermitian_defect(&alg, &table),
            "multiplicativity": table.multiplicativity_residual,
        }),
    })
}

fn gns(a: &AlgebraJson, f: &ValuesJson, tol: f64) -> Result<Computed, Failure> {
    let alg = a.build()?;
    let phi = Functional::new(to_vec(&f.values));
    let diag = functional_diagnostics(&alg, &phi, tol)?;
    let g = gns_construct(&alg, &phi, tol)?;
    let irr = irreducibility_report(&g.rep, tol)?;
    Ok(Computed {
        results: json!({
            "commutant_dim": irr.commutant_dim,
            "cyclic_vector": from_vec(&g.cyclic),
            "hermitian": diag.hermitian,
            "irreducible": irr.irreducible,
            "quotient_dim": g.quotient_dim,
            "representation": g.rep.mats.iter().map(mat).collect::<Vec<_>>(),
            "variation": diag.variation,
        }),
        residuals: json!({
            "representation": g.rep.defect(&alg),
            "reproducing_vector": g.reproducing_residual,
            "reproduction": g.reproduction_defect(&phi),
        }),
    })
}

fn operator_set(s: &MatrixSetJson, star_closed: bool) -> Result<OperatorSet, Failure> {
    let mats = s.to_cmats().map_err(|m| Failure::from(Error::InvalidShape(m)))?;
    let n = mats.first().map(CMat::rows).ok_or_else(|| Failure::from(Error::InvalidInput("empty matrix set".into())))?;
    Ok(OperatorSet::new(n, mats, star_closed)?)
}

fn commutant_cmd(s: &MatrixSetJson, tol: f64, seed: u64) -> Result<Computed, Failure> {
    let set = operator_set(s, false)?;
    let c = commutant(&set, tol);
    let cc = bicommutant(&set, tol);
    let defect = c
        .mats
        .iter()
        .flat_map(|x| set.mats.iter().map(move |m| x.commutator(m).norm()))
        .fold(0.0, f64::max);
    let separating = match find_separating_vector(&c, seed, tol) {
        Ok(v) => json!(from_vec(&v)),
        Err(Error::NoSeparatingVector { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(Computed {
        results: json!({
            "bicommutant_dim": cc.mats.len(),
            "commutant": c.mats.iter().map(mat).collect::<Vec<_>>(),
            "commutant_dim": c.mats.len(),
            "commutant_is_commutative": c.commutation_defect() <= tol.sqrt(),
            "separating_vector_for_commutant": separating,
            "span_dim": set.span_dim(tol),
        }),
        residuals: json!({ "commutation": defect }),
    })
}

fn diagonalize(s: &MatrixSetJson, v: &ValuesJson, tol: f64) -> Result<Computed, Failure> {
    let set = operator_set(s, false)?;
    let rep = Representation { dim: set.carrier_dim, mats: set.mats };
    let c = to_vec(&v.values);
    if c.len() != rep.dim {
        return Err(Error::InvalidShape("vector length differs from the carrier dimension".into()).into());
    }
    let d = diagonalise_cyclic(&rep, &c, tol)?;
    let k = d.unitary.rows();
    let rows: Vec<Value> = (0..d.characters.len()).map(|t| json!(from_vec(d.characters.row(t)))).collect();
    Ok(Computed {
        results: json!({
            "characters": rows,
            "measure": d.measure.iter().map(|m| m.1).collect::<Vec<_>>(),
            "unitary": mat(&d.unitary),
        }),
        residuals: json!({
            "intertwining": d.intertwining_residual,
            "unitarity": (&d.unitary * &d.unitary.adjoint()).dist(&CMat::identity(k)),
        }),
    })
}

fn evolve_cmd(c: &EvolutionJson) -> Result<Computed, Failure> {
    let a = c.operator()?;
    let x = to_vec(&c.vector);
    let x_norm = a.norm(&x)?;
    let mut states = Vec::with_capacity(c.times.len());
    let mut norm_defect: f64 = 0.0;
    for &t in &c.times {
        let y = evolve(&a, t, &x)?;
        norm_defect = norm_defect.max((a.norm(&y)? - x_norm).abs());
        states.push(json!({ "t": t, "vector": from_vec(&y) }));
    }
    let mut generator = Vec::with_capacity(c.steps.len());
    for &h in &c.steps {
        let g = generator_check(&a, &x, h)?;
        generator.push(json!({ "h": h, "residual": g.residual, "constant": g.constant }));
    }
    let cayley = cayley_pair(&a);
    Ok(Computed {
        results: json!({
            "cayley_distance_from_one": cayley.distance_from_one,
            "generator": generator,
            "states": states,
            "truncation": a.truncation,
        }),
        residuals: json!({ "cayley_roundtrip": cayley.roundtrip_residual, "norm": norm_defect }),
    })
}

fn wiener(s: &SequenceJson, tol: f64) -> Result<Computed, Failure> {
    let w = wiener_invert(&s.element(), s.truncation, s.grid, tol)?;
    Ok(Computed {
        results: json!({
            "grid": w.grid,
            "inverse": { "offset": w.b.offset(), "coeffs": from_vec(w.b.coeffs()) },
            "min_modulus": w.min_modulus,
            "tail": w.tail,
            "tail_ok": w.tail_ok,
        }),
        residuals: json!({ "convolution": w.residual }),
    })
}

/// Rebuilds every object with its keys in sorted order.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

fn render(report: &Value, format: Format) -> String {
    let report = canonical(report);
    match format {
        Format::Json => {
            let mut s = String::new();
            write_json(&report, 0, &mut s);
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &report, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

/// Indented JSON with arrays of scalars (or of scalar arrays, such as
/// complex pairs) kept on one line.
fn write_json(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    let flat = |x: &Value| match x {
        Value::Array(a) => a.iter().all(|y| !y.is_object() && !y.is_array()),
        Value::Object(_) => false,
        _ => true,
    };
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(a) if !a.iter().all(flat) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_json(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        _ => out.push(format!("{prefix} = {v}")),
    }
}
