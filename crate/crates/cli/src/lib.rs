//! Subcommands of the `abeliant` binary. Each command returns its JSON report
//! and the process exit code.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use abeliant::abeliant::{abeliant, abeliant_def_scalar, abeliant_expand, discriminant, EXPAND_MAX_N};
use abeliant::curve::{Curve, CurvePoint};
use abeliant::elliptic_numeric::Lattice;
use abeliant::identities::check_identities;
use abeliant::io::{curve_from_json, curve_to_json, family_from_json, jacobi_to_json, mat_to_json};
use abeliant::jacobian::{abel_point, add_points, negate_form, point_class, JacobianConfig, add_forms};
use abeliant::segre::{abstract_abel, proportional, k_equivalent};
use abeliant::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Truncation radius of the lattice products in `numeric-elliptic`.
pub const NUMERIC_TRUNCATION: usize = 25;

#[derive(Parser, Debug)]
#[command(name = "abeliant", version, about = "Abeliants, abstract Abel maps and Jacobian arithmetic")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Abeliant and discriminant of a family read from JSON.
    Abeliant {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Randomized check of the abeliant identities.
    CheckIdentities(IdentityArgs),
    /// Add two points of an elliptic curve through Jacobi matrices.
    JacobianDemo(JacobianArgs),
    /// Numerical residuals of the sigma-function identities.
    NumericElliptic(NumericArgs),
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1009)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct JacobianArgs {
    /// JSON file `{"p": prime, "f": [c0, c1, c2, 1]}`.
    #[arg(long)]
    pub curve: PathBuf,
    /// First point as `x,y`.
    #[arg(long)]
    pub p1: String,
    /// Second point as `x,y`.
    #[arg(long)]
    pub p2: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct NumericArgs {
    /// First period as `re,im`.
    #[arg(long, default_value = "1,0")]
    pub omega1: String,
    /// Second period as `re,im`.
    #[arg(long, default_value = "0.2,1.1")]
    pub omega2: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Dimension(_) | Error::FieldMismatch => EXIT_INPUT,
            _ => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

pub type Outcome = Result<(Value, i32), Failure>;

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("malformed JSON in {}: {e}", path.display())))
}

fn parse_pair(s: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::input(format!("expected two comma-separated numbers, got {s:?}")));
    }
    let num = |t: &str| t.parse::<f64>().map_err(|_| Failure::input(format!("not a number: {t:?}")));
    Ok((num(parts[0])?, num(parts[1])?))
}

fn parse_int_pair(s: &str) -> Result<(i64, i64), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::input(format!("expected a point as x,y, got {s:?}")));
    }
    let num = |t: &str| t.parse::<i64>().map_err(|_| Failure::input(format!("not an integer: {t:?}")));
    Ok((num(parts[0])?, num(parts[1])?))
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match &cfg.command {
        Command::Abeliant { input } => cmd_abeliant(&read_json(input)?),
        Command::CheckIdentities(a) => cmd_check_identities(a),
        Command::JacobianDemo(a) => cmd_jacobian_demo(&read_json(&a.curve)?, &a.p1, &a.p2, a.seed),
        Command::NumericElliptic(a) => cmd_numeric_elliptic(a),
    }
}

/// Abeliant by every applicable algorithm, plus the discriminant of members `1..=n+1`.
pub fn cmd_abeliant(input: &Value) -> Outcome {
    let (p, fam) = family_from_json(input)?;
    let def = abeliant_def_scalar(&fam)?;
    let n = def.rows();
    let contracted = abeliant(&fam)?;
    let mut agree = def == contracted;
    let mut algorithms = vec!["definition", "contracted"];
    if n <= EXPAND_MAX_N {
        agree &= abeliant_expand(&fam)? == def;
        algorithms.push("expansion");
    }
    let report = json!({
        "p": p,
        "n": n,
        "abeliant": mat_to_json(&def),
        "discriminant": discriminant(&fam[1..])?.value(),
        "algorithms": algorithms,
        "algorithms_agree": agree,
    });
    Ok((report, if agree { EXIT_OK } else { EXIT_IDENTITY_FAILURE }))
}

pub fn cmd_check_identities(a: &IdentityArgs) -> Outcome {
    if !(2..=3).contains(&a.n) {
        return Err(Failure::input("--n must be 2 or 3"));
    }
    if a.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    let report = check_identities(a.seed, a.p, a.n, a.trials).map_err(|e| match e {
        Error::Precondition(m) => Failure::input(m),
        other => other.into(),
    })?;
    let code = if report.all_hold() { EXIT_OK } else { EXIT_IDENTITY_FAILURE };
    Ok((report.to_json(), code))
}

fn point_json(pt: &CurvePoint) -> Value {
    match pt {
        CurvePoint::Infinity => json!("infinity"),
        CurvePoint::Affine { x, y } => json!([x.value(), y.value()]),
    }
}

/// Sum of two points through Jacobi matrices, compared with chord-tangent addition.
pub fn cmd_jacobian_demo(curve_json: &Value, p1: &str, p2: &str, seed: u64) -> Outcome {
    let curve: Curve = curve_from_json(curve_json)?;
    if curve.genus() != 1 {
        return Err(Failure { code: EXIT_DOMAIN, message: "the demo needs a curve of genus 1".into() });
    }
    let point = |s: &str| -> Result<CurvePoint, Failure> {
        let (x, y) = parse_int_pair(s)?;
        Ok(curve.point(curve.fp(x), curve.fp(y))?)
    };
    let (pa, pb) = (point(p1)?, point(p2)?);
    let cfg = JacobianConfig::new(&curve)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracle = curve.chord_tangent(&pa, &pb)?;
    let za = abel_point(&point_class(&pa), &cfg)?;
    let zb = abel_point(&point_class(&pb), &cfg)?;
    let z_oracle = abel_point(&point_class(&oracle), &cfg)?;
    let z0 = abel_point(&point_class(&CurvePoint::Infinity), &cfg)?;
    let sum = add_points(&za, &zb, &cfg, &mut rng)?;
    let xa = cfg.point_form(&pa)?;
    let xb = cfg.point_form(&pb)?;
    let checks = json!({
        "sum_matches_oracle": proportional(sum.mat(), z_oracle.mat()),
        "commutativity": proportional(add_points(&zb, &za, &cfg, &mut rng)?.mat(), sum.mat()),
        "identity": proportional(add_points(&za, &z0, &cfg, &mut rng)?.mat(), za.mat()),
        "inverse_is_transpose": proportional(abel_point(&point_class(&curve.negate(&pa)), &cfg)?.mat(), &za.mat().transpose()),
        "inverse_sums_to_zero": k_equivalent(&add_forms(&xa, &negate_form(&xa), &cfg)?, &cfg.class_form(&Default::default())?)?,
        "forms_agree_with_points": proportional(abstract_abel(&add_forms(&xa, &xb, &cfg)?)?.mat(), sum.mat()),
    });
    let all = checks.as_object().unwrap().values().all(|v| v.as_bool() == Some(true));
    let report = json!({
        "curve": curve_to_json(&curve),
        "p1": point_json(&pa),
        "p2": point_json(&pb),
        "oracle_sum": point_json(&oracle),
        "sum_is_zero_class": oracle == CurvePoint::Infinity && proportional(sum.mat(), z0.mat()),
        "sum_matches_oracle": checks["sum_matches_oracle"],
        "checks": checks,
        "all_pass": all,
        "jacobi_matrices": {
            "p1": jacobi_to_json(&za)?,
            "p2": jacobi_to_json(&zb)?,
            "sum": jacobi_to_json(&sum)?,
        },
    });
    Ok((report, if all { EXIT_OK } else { EXIT_IDENTITY_FAILURE }))
}

fn sample(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Residual table for the determinant identity and, at `n = 2`, the abeliant identity.
pub fn cmd_numeric_elliptic(a: &NumericArgs) -> Outcome {
    if !(2..=4).contains(&a.n) {
        return Err(Failure::input("--n must lie in 2..=4"));
    }
    if a.samples == 0 || !(a.tol > 0.0) {
        return Err(Failure::input("--samples must be positive and --tol must be a positive number"));
    }
    let (w1, w2) = (parse_pair(&a.omega1)?, parse_pair(&a.omega2)?);
    let lat = Lattice::new(Complex64::new(w1.0, w1.1), Complex64::new(w2.0, w2.1), NUMERIC_TRUNCATION)
        .map_err(|e| Failure { code: EXIT_DOMAIN, message: e.to_string() })?;
    let scale = 0.3 * lat.min_norm();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::with_capacity(a.samples);
    let mut worst: f64 = 0.0;
    for k in 0..a.samples {
        let zs: Vec<Complex64> = (0..a.n).map(|_| sample(&mut rng, scale)).collect();
        let frob = lat.frobstick_residual(&zs)?;
        worst = worst.max(frob);
        let mut row = json!({ "sample": k, "frobstick_residual": frob });
        if a.n == 2 {
            let t = sample(&mut rng, scale);
            let ws: Vec<Complex64> = (0..a.n + 2).map(|_| sample(&mut rng, scale)).collect();
            let (i, j) = (rng.gen_range(1..=a.n), rng.gen_range(1..=a.n));
            let big = lat.big_identity_residual(t, &ws, i, j)?;
            worst = worst.max(big);
            row["big_identity_residual"] = json!(big);
            row["entry"] = json!([i, j]);
        }
        row["pass"] = json!(row["frobstick_residual"].as_f64().unwrap() < a.tol
            && row.get("big_identity_residual").and_then(Value::as_f64).map_or(true, |r| r < a.tol));
        rows.push(row);
    }
    let all = rows.iter().all(|r| r["pass"] == json!(true));
    let report = json!({
        "omega1": [w1.0, w1.1],
        "omega2": [w2.0, w2.1],
        "truncation": NUMERIC_TRUNCATION,
        "n": a.n,
        "tol": a.tol,
        "max_residual": worst,
        "all_pass": all,
        "samples": rows,
    });
    Ok((report, if all { EXIT_OK } else { EXIT_IDENTITY_FAILURE }))
}
