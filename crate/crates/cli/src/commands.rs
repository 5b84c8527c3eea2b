use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use dioph::arith::parse_rational;
use dioph::contfrac::ProgrammaticReal;
use dioph::engine::{certify_scan, explore_exponent_identity, theta_estimate, verify_exponent_identity};
use dioph::factory::{make_prescribed_psi, verify_membership};
use dioph::format::{curve_to_text, parse_curve, parse_psi, parse_real};
use dioph::polycurve::{dimension_bounds, integerize, normalize, profile, Curve, DimensionBounds, TransformMatrix};
use dioph::report::{fmt_f64, fmt_rat};

use crate::report::{write_json, ManifestBuilder};
use crate::{Command, Outputs};

/// Human-readable summary line; a closed stdout (for example `| head`) is not an error.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: dioph::Error },
    #[error("{0}")]
    Lib(#[from] dioph::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    /// A check that should never fail did fail.
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use dioph::Error as E;
        let lib = match self {
            CliError::Input { source, .. } => source,
            CliError::Lib(e) => e,
            CliError::Io { .. } | CliError::Usage(_) => return 1,
            CliError::CheckFailed(_) => return 4,
        };
        match lib {
            E::Parse { .. }
            | E::DimensionMismatch(..)
            | E::FirstCoordinate
            | E::IndexOutOfRange { .. }
            | E::InvalidParameter(_) => 1,
            E::Precondition(_) | E::Hypothesis(_) | E::Infeasible { .. } | E::SingularMatrix => 2,
            E::Enclosure { .. } | E::InsufficientDepth(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_curve(path: &Path) -> Result<Curve> {
    let src = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_curve(&src).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn rational_arg(name: &str, s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("--{name}: cannot parse \"{s}\" as a rational")))
}

fn real_arg(s: &str) -> Result<ProgrammaticReal> {
    parse_real(s).map_err(|e| CliError::Usage(format!("--real: {e}")))
}

/// `v`, `a..b` (unit step) or `a..b:step`, all endpoints included.
fn lambda_values(s: &str) -> Result<Vec<BigRational>> {
    let Some((a, rest)) = s.split_once("..") else {
        return Ok(vec![rational_arg("lambda", s)?]);
    };
    let (b, step) = match rest.split_once(':') {
        Some((b, st)) => (b, rational_arg("lambda", st)?),
        None => (rest, BigRational::one()),
    };
    let (a, b) = (rational_arg("lambda", a)?, rational_arg("lambda", b)?);
    if step <= BigRational::zero() || a > b {
        return Err(CliError::Usage(format!("--lambda: invalid range \"{s}\"")));
    }
    let count = ((&b - &a) / &step).floor().to_integer();
    if count > BigInt::from(10_000) {
        return Err(CliError::Usage("--lambda: range has more than 10000 values".into()));
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b {
        out.push(x.clone());
        x += &step;
    }
    Ok(out)
}

fn write_csv(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> dioph::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    fs::write(path, buf).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_at(path: Option<&PathBuf>) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.cloned().unwrap_or_default(),
        source,
    }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct NormalForm {
    curve: Vec<String>,
    matrix: TransformMatrix,
    constants: Vec<String>,
    nonzero_coordinates: usize,
}

#[derive(Serialize)]
struct Analysis {
    k: usize,
    type_vec: Vec<usize>,
    diameter: usize,
    d_max: usize,
    delta: String,
    d: String,
    k_total: String,
    k_j: Vec<String>,
    degenerate: bool,
    normalized_type: Vec<usize>,
    normalized_diameter: usize,
    normal_form: NormalForm,
}

fn normal_form(curve: &Curve) -> NormalForm {
    let n = normalize(curve);
    NormalForm {
        curve: curve_to_text(&n.curve).lines().map(str::to_owned).collect(),
        matrix: n.matrix,
        constants: n.constants.iter().map(fmt_rat).collect(),
        nonzero_coordinates: n.m,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    strings(v).join(",")
}

#[derive(Serialize)]
struct PredictRow {
    #[serde(serialize_with = "dioph::report::ser_rat")]
    lambda: BigRational,
    #[serde(flatten)]
    bounds: DimensionBounds,
}

#[derive(Serialize)]
struct ConstructResult {
    construction: dioph::factory::Construction,
    membership: dioph::factory::MembershipReport,
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze { curve: path, out } => {
            let curve = read_curve(&path)?;
            let prof = profile(&curve);
            let ic = integerize(&curve);
            let result = Analysis {
                k: prof.k,
                type_vec: prof.type_vec.clone(),
                diameter: prof.diameter,
                d_max: prof.d_max,
                delta: ic.delta.to_string(),
                d: ic.d.to_string(),
                k_total: ic.k_total.to_string(),
                k_j: strings(&ic.k_j),
                degenerate: prof.degenerate,
                normalized_type: prof.normalized_type.clone(),
                normalized_diameter: prof.normalized_diameter,
                normal_form: normal_form(&curve),
            };
            say!("type ({}) diameter {} d_max {}", join(&result.type_vec), result.diameter, result.d_max);
            say!("Delta {} D {} K {}", result.delta, result.d, result.k_total);
            say!("degenerate {}", result.degenerate);
            say!(
                "normalized type ({}) diameter {}",
                join(&result.normalized_type),
                result.normalized_diameter
            );
            for line in &result.normal_form.curve {
                say!("  {line}");
            }
            say!("transform");
            for row in result.normal_form.matrix.rows() {
                say!("  [{}]", row.iter().map(fmt_rat).collect::<Vec<_>>().join(", "));
            }
            let manifest = ManifestBuilder::new("analyze").curve(&path, &curve).build(out.json.as_ref(), None);
            write_json(out.json.as_ref(), &manifest, &result).map_err(io_at(out.json.as_ref()))
        }
        Command::Normalize { curve: path, out } => {
            let curve = read_curve(&path)?;
            let result = normal_form(&curve);
            for line in &result.curve {
                say!("{line}");
            }
            let manifest = ManifestBuilder::new("normalize").curve(&path, &curve).build(out.json.as_ref(), None);
            write_json(out.json.as_ref(), &manifest, &result).map_err(io_at(out.json.as_ref()))
        }
        Command::Predict { curve: path, lambda, out } => {
            let curve = read_curve(&path)?;
            let prof = profile(&curve);
            let rows = lambda_values(&lambda)?
                .into_iter()
                .map(|l| {
                    let bounds = dimension_bounds(&prof, &l)?;
                    Ok(PredictRow { lambda: l, bounds })
                })
                .collect::<Result<Vec<_>>>()?;
            for r in &rows {
                say!(
                    "lambda {}: [{}, {}]{} via {:?}",
                    fmt_rat(&r.lambda),
                    fmt_rat(&r.bounds.lower),
                    fmt_rat(&r.bounds.upper),
                    if r.bounds.exact { " exact" } else { "" },
                    r.bounds.provenance
                );
            }
            if let Some(p) = &out.csv {
                write_csv(p, |buf| predict_csv(buf, &rows))?;
            }
            let manifest = ManifestBuilder::new("predict")
                .curve(&path, &curve)
                .param("lambda", &lambda)
                .build(out.json.as_ref(), out.csv.as_ref());
            write_json(out.json.as_ref(), &manifest, &rows).map_err(io_at(out.json.as_ref()))
        }
        Command::Exponent {
            curve: path,
            real,
            depth,
            qmax,
            out,
        } => {
            let curve = read_curve(&path)?;
            let zeta = real_arg(&real)?;
            let report = theta_estimate(&curve, &zeta, depth, qmax)?;
            say!(
                "theta estimate {} from {} records",
                report.theta_estimate.map(fmt_f64).unwrap_or_else(|| "none".into()),
                report.records.len()
            );
            if let Some(p) = &out.csv {
                write_csv(p, |buf| report.write_csv(buf))?;
            }
            let manifest = ManifestBuilder::new("exponent")
                .curve(&path, &curve)
                .real(zeta.to_spec())
                .param("depth", depth)
                .param("qmax", qmax)
                .build(out.json.as_ref(), out.csv.as_ref());
            write_json(out.json.as_ref(), &manifest, &report).map_err(io_at(out.json.as_ref()))
        }
        Command::Certify {
            curve: path,
            real,
            qmax,
            tau,
            out,
        } => {
            let curve = read_curve(&path)?;
            let zeta = real_arg(&real)?;
            let tau = tau.as_deref().map(|t| rational_arg("tau", t)).transpose()?;
            let summary = certify_scan(&curve, &zeta, qmax, tau.as_ref())?;
            say!(
                "not-applicable {} pass {} VIOLATION {} convergent-failures {} growth-failures {}",
                summary.not_applicable,
                summary.pass,
                summary.violation,
                summary.convergent_failures,
                summary.growth_failures
            );
            if let Some(p) = &out.csv {
                write_csv(p, |buf| certify_csv(buf, &summary))?;
            }
            let mut mb = ManifestBuilder::new("certify")
                .curve(&path, &curve)
                .real(zeta.to_spec())
                .param("qmax", qmax);
            if let Some(t) = &tau {
                mb = mb.param("tau", fmt_rat(t));
            }
            let manifest = mb.build(out.json.as_ref(), out.csv.as_ref());
            write_json(out.json.as_ref(), &manifest, &summary).map_err(io_at(out.json.as_ref()))?;
            if summary.violation > 0 {
                return Err(CliError::CheckFailed(format!(
                    "{} certificate violations",
                    summary.violation
                )));
            }
            Ok(())
        }
        Command::Verify {
            curve,
            lambda1,
            depth,
            qmax,
            explore,
            out,
        } => identity(curve, &lambda1, depth, qmax, explore, out),
        Command::Explore {
            curve,
            lambda1,
            depth,
            qmax,
            out,
        } => identity(curve, &lambda1, depth, qmax, true, out),
        Command::Construct {
            curve: path,
            psi,
            c,
            depth,
            qmax,
            out,
        } => {
            let curve = read_curve(&path)?;
            let psi_spec = parse_psi(&psi).map_err(|e| CliError::Usage(format!("--psi: {e}")))?;
            let c_val = rational_arg("c", &c)?;
            let construction = make_prescribed_psi(&curve, &psi_spec, &c_val, depth, 2)?;
            let membership = verify_membership(&curve, &construction.zeta, &psi_spec, &c_val, qmax, &construction.witnesses)?;
            say!("zeta {}", construction.zeta);
            say!(
                "{} witnesses, all sandwiched {}, achieved c' {}",
                construction.witnesses.len(),
                construction.all_sandwiched(),
                fmt_f64(construction.achieved_c)
            );
            say!(
                "membership window 2..={}: {} foreign q",
                membership.q_window,
                membership.foreign.len()
            );
            let passed = construction.all_sandwiched() && membership.passes();
            let result = ConstructResult {
                construction,
                membership,
            };
            let manifest = ManifestBuilder::new("construct")
                .curve(&path, &curve)
                .param("psi", psi_spec)
                .param("c", fmt_rat(&c_val))
                .param("depth", depth)
                .param("qmax", qmax)
                .build(out.json.as_ref(), None);
            write_json(out.json.as_ref(), &manifest, &result).map_err(io_at(out.json.as_ref()))?;
            if !passed {
                return Err(CliError::CheckFailed("construction did not verify".into()));
            }
            Ok(())
        }
    }
}

fn identity(path: PathBuf, lambda1: &str, depth: usize, qmax: u64, explore: bool, out: Outputs) -> Result<()> {
    let curve = read_curve(&path)?;
    let l = rational_arg("lambda1", lambda1)?;
    let report = if explore {
        explore_exponent_identity(&curve, &l, depth, qmax)?
    } else {
        verify_exponent_identity(&curve, &l, depth, qmax)?
    };
    say!(
        "predicted {} measured {} deviation {}{}",
        fmt_rat(&report.predicted),
        fmt_f64(report.measured),
        fmt_f64(report.deviation),
        if explore { " (exploratory)" } else { "" }
    );
    let manifest = ManifestBuilder::new(if explore { "explore" } else { "verify" })
        .curve(&path, &curve)
        .real(report.zeta.to_spec())
        .param("lambda1", fmt_rat(&l))
        .param("depth", depth)
        .param("qmax", qmax)
        .build(out.json.as_ref(), None);
    write_json(out.json.as_ref(), &manifest, &report).map_err(io_at(out.json.as_ref()))
}

fn csv_err(e: csv::Error) -> dioph::Error {
    dioph::Error::InvalidParameter(format!("csv output: {e}"))
}

fn predict_csv(buf: &mut Vec<u8>, rows: &[PredictRow]) -> dioph::Result<()> {
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["lambda", "lower", "upper", "exact", "provenance", "d_r"]).map_err(csv_err)?;
    for r in rows {
        let prov = serde_json::to_value(r.bounds.provenance).expect("enum serializes");
        w.write_record([
            fmt_rat(&r.lambda),
            fmt_rat(&r.bounds.lower),
            fmt_rat(&r.bounds.upper),
            r.bounds.exact.to_string(),
            prov.as_str().unwrap_or_default().to_string(),
            r.bounds.d_r.map(|d| d.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| dioph::Error::InvalidParameter(format!("csv output: {e}")))
}

fn certify_csv(buf: &mut Vec<u8>, s: &dioph::engine::CertifySummary) -> dioph::Result<()> {
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["q", "status", "x0", "y0", "x1", "err_num", "err_den", "convergent_image", "growth"])
        .map_err(csv_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for c in &s.certified {
        let cert = &c.certificate;
        w.write_record([
            cert.q.to_string(),
            cert.status.to_string(),
            opt(cert.x0.as_ref().map(ToString::to_string)),
            opt(cert.y0.as_ref().map(ToString::to_string)),
            opt(cert.x1.as_ref().map(ToString::to_string)),
            cert.err.value.numer().to_string(),
            cert.err.value.denom().to_string(),
            opt(c.convergent_image.map(|b| b.to_string())),
            opt(c.growth.as_ref().map(|g| g.all_hold().to_string())),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| dioph::Error::InvalidParameter(format!("csv output: {e}")))
}
