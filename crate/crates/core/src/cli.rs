//! Command-line front end. `main` parses [`Cli`] and calls [`run`].

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kfunc::{interp_norm_bounds, k_lower, k_upper_truncation};
use crate::norms::{approx_space_norm, lorentz_norm, lp_norm, weak_lorentz_norm, QuadratureSpec};
use crate::profile::{parse_exponent, NormParams, RearrangementProfile};
use crate::stepfn::{SampledFunction, StepFunction};
use crate::theorems::{builtin_suite, user_suite, CheckReport};

#[derive(Debug, Parser)]
#[command(
    name = "lorentz-approx",
    version,
    about = "Best approximation errors, Lorentz and approximation-space norms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// L_p, weak-L_{p1}, Lorentz L_{p,q}, L_{p1,q} and A^alpha_{p,q} norms of the input
    Norm,
    /// Table sigma, E_sigma(f)_p, sigma^alpha E_sigma(f)_p on a geometric grid
    ErrorDecay,
    /// Best approximant of a step function from functions of support <= sigma
    BestApprox,
    /// K-functional bracket on t = 2^j, |j| <= 20, and the interpolation-norm bracket
    Kfunc,
    /// Inequality checks over the seeded family, or over the functions in --input
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Profile JSON ({"pieces":...}), step JSON ({"atoms":...}), a JSON array of
    /// either, or an "x,value" CSV of uniform samples
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Default: csv for error-decay and kfunc, json otherwise
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,
    /// Accepts "inf"
    #[arg(long, global = true, default_value = "inf", value_parser = parse_q)]
    pub q: f64,
    /// Default 0.5 unless --p1 is given
    #[arg(long, global = true, conflicts_with = "p1")]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub p1: Option<f64>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of the adaptive quadrature
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Interpolation parameter for the kfunc bracket
    #[arg(long, global = true, default_value_t = 0.5)]
    pub theta: f64,
}

fn parse_q(s: &str) -> std::result::Result<f64, String> {
    parse_exponent(s).map_err(|e| e.to_string())
}

impl Options {
    pub fn params(&self) -> Result<NormParams> {
        match self.p1 {
            Some(p1) => NormParams::from_p1(self.p, self.q, p1),
            None => NormParams::from_alpha(self.p, self.q, self.alpha.unwrap_or(0.5)),
        }
    }

    pub fn quad(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.tol, QuadratureSpec::default().max_depth)
    }
}

/// A function read from `--input`.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Profile(RearrangementProfile),
    Step(StepFunction),
}

impl Input {
    pub fn profile(&self) -> RearrangementProfile {
        match self {
            Input::Profile(p) => p.clone(),
            Input::Step(s) => s.rearrange(),
        }
    }

    fn from_value(v: Value) -> Result<Self> {
        if v.get("pieces").is_some() {
            Ok(Input::Profile(serde_json::from_value(v)?))
        } else if v.get("atoms").is_some() {
            Ok(Input::Step(serde_json::from_value(v)?))
        } else {
            Err(Error::Parse(
                "expected an object with \"pieces\" or \"atoms\"".into(),
            ))
        }
    }
}

/// Reads one function, or a list of them from a JSON array.
pub fn load_inputs(path: &Path) -> Result<Vec<Input>> {
    let file = BufReader::new(File::open(path)?);
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        let sampled = SampledFunction::from_csv(file)?;
        return Ok(vec![Input::Step(sampled.ingest(0.0)?)]);
    }
    let value: Value = serde_json::from_reader(file).map_err(|e| Error::Parse(e.to_string()))?;
    let inputs = match value {
        Value::Array(items) => items
            .into_iter()
            .map(Input::from_value)
            .collect::<Result<Vec<_>>>(),
        other => Input::from_value(other).map(|i| vec![i]),
    };
    inputs.map_err(|e| match e {
        Error::Json(j) => Error::Parse(j.to_string()),
        other => other,
    })
}

fn load_single(opts: &Options) -> Result<Input> {
    let path = opts
        .input
        .as_deref()
        .ok_or_else(|| Error::Parse("--input is required".into()))?;
    let mut inputs = load_inputs(path)?;
    if inputs.len() != 1 {
        return Err(Error::Parse(format!(
            "expected one function, found {}",
            inputs.len()
        )));
    }
    Ok(inputs.remove(0))
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ChecksFailed,
}

/// 17 significant digits, `inf`/`-inf`/`nan` for non-finite values.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number, or a string for non-finite values.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(fmt_num(v))
    }
}

fn params_json(params: &NormParams) -> Value {
    json!({"p": num(params.p()), "q": num(params.q()), "alpha": num(params.alpha()), "p1": num(params.p1())})
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Executes the command, writing its report to `--output` or `out`.
pub fn run(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<Status> {
    let opts = &cli.opts;
    let params = opts.params()?;
    let quad = opts.quad()?;
    let default_format = match cli.command {
        Command::ErrorDecay | Command::Kfunc => Format::Csv,
        _ => Format::Json,
    };
    let format = opts.format.unwrap_or(default_format);
    let (text, status) = match cli.command {
        Command::Norm => (
            norm(&load_single(opts)?.profile(), &params, &quad, format)?,
            Status::Ok,
        ),
        Command::ErrorDecay => (
            error_decay(&load_single(opts)?.profile(), &params, format)?,
            Status::Ok,
        ),
        Command::BestApprox => (best_approx(opts, &params, format, diag)?, Status::Ok),
        Command::Kfunc => (
            kfunc(
                &load_single(opts)?.profile(),
                opts.theta,
                &params,
                format,
                diag,
            )?,
            Status::Ok,
        ),
        Command::Verify => verify(opts, &params, &quad, format, diag)?,
    };
    match &opts.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(status)
}

fn norm(
    profile: &RearrangementProfile,
    params: &NormParams,
    quad: &QuadratureSpec,
    format: Format,
) -> Result<String> {
    let (p, q, p1) = (params.p(), params.q(), params.p1());
    let rows = [
        ("lp", lp_norm(profile, p)?),
        ("weak_lorentz", weak_lorentz_norm(profile, p1)?),
        ("lorentz", lorentz_norm(profile, p, q)?),
        ("lorentz_p1", lorentz_norm(profile, p1, q)?),
        ("approx_space", approx_space_norm(profile, params, quad)?),
    ];
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in rows {
                obj.insert(k.into(), num(v));
            }
            obj.insert("params".into(), params_json(params));
            Ok(json_text(&Value::Object(obj)))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(k, v)| vec![(*k).to_owned(), fmt_num(*v)])
                .collect();
            csv_table(&["norm", "value"], &rows)
        }
    }
}

/// `σ = 2^{k/4}`, `k = −40..=80`.
pub fn decay_grid() -> impl Iterator<Item = f64> {
    (-40..=80).map(|k| 2f64.powf(f64::from(k) / 4.0))
}

fn error_decay(
    profile: &RearrangementProfile,
    params: &NormParams,
    format: Format,
) -> Result<String> {
    let (p, alpha) = (params.p(), params.alpha());
    let mut rows = Vec::new();
    for sigma in decay_grid() {
        let e = profile.approx_error(sigma, p)?;
        rows.push((sigma, e, sigma.powf(alpha) * e));
    }
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|&(s, e, w)| vec![fmt_num(s), fmt_num(e), fmt_num(w)])
                .collect();
            csv_table(&["sigma", "error", "sigma_alpha_error"], &rows)
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|&(s, e, w)| json!({"sigma": num(s), "error": num(e), "sigma_alpha_error": num(w)}))
                .collect();
            Ok(json_text(
                &json!({"params": params_json(params), "rows": rows}),
            ))
        }
    }
}

fn best_approx(
    opts: &Options,
    params: &NormParams,
    format: Format,
    diag: &mut dyn Write,
) -> Result<String> {
    let step = match load_single(opts)? {
        Input::Step(s) => s,
        Input::Profile(_) => {
            return Err(Error::Parse(
                "best-approx needs a step function ({\"atoms\": ...})".into(),
            ))
        }
    };
    let sigma = opts
        .sigma
        .ok_or_else(|| Error::Parse("best-approx needs --sigma".into()))?;
    let best = step.best_approx(sigma, params.p())?;
    match format {
        Format::Json => Ok(json_text(&json!({
            "sigma": num(sigma),
            "p": num(params.p()),
            "support": best.support,
            "approximant": best.approximant,
            "error": num(best.error),
        }))),
        Format::Csv => {
            writeln!(diag, "residual_error={}", fmt_num(best.error))?;
            let rows: Vec<Vec<String>> = best
                .approximant
                .atoms()
                .iter()
                .map(|a| vec![fmt_num(a.a), fmt_num(a.b), fmt_num(a.value)])
                .collect();
            csv_table(&["a", "b", "v"], &rows)
        }
    }
}

fn kfunc(
    profile: &RearrangementProfile,
    theta: f64,
    params: &NormParams,
    format: Format,
    diag: &mut dyn Write,
) -> Result<String> {
    let mut rows = Vec::new();
    for j in -20..=20 {
        let t = 2f64.powi(j);
        let up = k_upper_truncation(profile, t, params)?;
        rows.push((t, k_lower(profile, t, params)?, up.upper));
    }
    let bracket = interp_norm_bounds(profile, theta, params.q(), params)?;
    let interp = json!({
        "theta": num(theta),
        "q": num(params.q()),
        "lower": num(bracket.lower),
        "upper": num(bracket.upper),
        "witness": bracket.witness.to_string(),
    });
    match format {
        Format::Csv => {
            writeln!(diag, "{}", serde_json::to_string(&interp)?)?;
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|&(t, lo, up)| vec![fmt_num(t), fmt_num(lo), fmt_num(up)])
                .collect();
            csv_table(&["t", "k_lower", "k_upper"], &rows)
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|&(t, lo, up)| json!({"t": num(t), "k_lower": num(lo), "k_upper": num(up)}))
                .collect();
            Ok(json_text(
                &json!({"params": params_json(params), "rows": rows, "interp": interp}),
            ))
        }
    }
}

fn verify(
    opts: &Options,
    params: &NormParams,
    quad: &QuadratureSpec,
    format: Format,
    diag: &mut dyn Write,
) -> Result<(String, Status)> {
    let reports = match &opts.input {
        Some(path) => {
            let profiles: Vec<RearrangementProfile> =
                load_inputs(path)?.iter().map(Input::profile).collect();
            user_suite(&profiles, params, quad)?
        }
        None => builtin_suite(opts.seed, params.q(), quad)?,
    };
    let failed = reports.iter().filter(|r| !r.pass).count();
    for rep in reports.iter().filter(|r| !r.pass) {
        writeln!(
            diag,
            "FAIL {}: lhs={} rhs={} ({})",
            rep.name,
            fmt_num(rep.lhs),
            fmt_num(rep.rhs),
            rep.inputs
        )?;
    }
    writeln!(diag, "{} checks, {} failed", reports.len(), failed)?;
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&reports)?;
            s.push('\n');
            s
        }
        Format::Csv => reports_csv(&reports)?,
    };
    Ok((
        text,
        if failed == 0 {
            Status::Ok
        } else {
            Status::ChecksFailed
        },
    ))
}

fn reports_csv(reports: &[CheckReport]) -> Result<String> {
    let header = [
        "name",
        "lhs",
        "rhs",
        "ratio",
        "constant_claimed",
        "pass",
        "inputs",
        "min_ratio",
        "max_ratio",
        "n",
    ];
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let (lo, hi, n) = r
                .aggregate
                .map_or((String::new(), String::new(), String::new()), |a| {
                    (fmt_num(a.min_ratio), fmt_num(a.max_ratio), a.n.to_string())
                });
            vec![
                r.name.clone(),
                fmt_num(r.lhs),
                fmt_num(r.rhs),
                fmt_num(r.ratio),
                r.constant_claimed.map_or("unspecified".into(), fmt_num),
                r.pass.to_string(),
                r.inputs.clone(),
                lo,
                hi,
                n,
            ]
        })
        .collect();
    csv_table(&header, &rows)
}

/// Exit code for a finished run: `0` on success, `1` when a check failed, `2`
/// for input or parameter errors.
pub fn exit_code(result: &Result<Status>) -> i32 {
    match result {
        Ok(Status::Ok) => 0,
        Ok(Status::ChecksFailed) => 1,
        Err(_) => 2,
    }
}

/// Runs with process stdout/stderr.
pub fn main_with(cli: &Cli) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let result = run(cli, &mut stdout.lock(), &mut stderr.lock());
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}
