//! The `screwsr` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! errors and violated preconditions.

use crate::algebra::Mat;
use crate::compactgroups::CompactGroupId;
use crate::controllability::{
    bracket_generating_rank_with, default_groups, space_form_report, ControllabilityReport, DEFAULT_LAMBDA_GRID,
};
use crate::dualspace::so2_orbit_table;
use crate::error::{Result, ScrewError};
use crate::geodesics::{
    certify_sample, cross_model_residual, degeneration_check, sample, uniform_grid, GeodesicSpec, DEFAULT_SAMPLES,
    DEFAULT_T_MAX,
};
use crate::octonion::{self, certify_octo_momentum, octo_controllability, octo_sample, Vec7};
use crate::report::{csv_table, emit, json_document, Cell, Format};
use crate::screwcore::{Curvature, ScrewSystem};
use crate::spaceform;
use crate::tolerances::{self, Tolerances, TOL_ENV};
use crate::verify::{verify_all, VerifyOptions};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "screwsr", version, about = "Screw-motion control systems on Lie groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket-generating rank test for one system or a sweep.
    Controllability(RunConfig),
    /// Sample and certify a closed-form geodesic.
    Geodesic(RunConfig),
    /// Run every verification suite.
    VerifyAll(RunConfig),
    /// Tabulate the SO(2,C) orbit of +1 or -1 in the unit circle.
    Orbit(OrbitConfig),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Compact group such as SU:2, SO3 or Sp(1). Omit for a sweep over the default groups.
    #[arg(long, conflicts_with_all = ["octonion", "space_form"])]
    pub group: Option<String>,
    /// The octonionic system on R^7 x SO(7).
    #[arg(long, conflicts_with = "space_form")]
    pub octonion: bool,
    /// The rigid body on the three-dimensional space form of curvature --kappa.
    #[arg(long)]
    pub space_form: bool,
    /// Curvature sign of the symmetric pair: 1, -1 or 0.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Space-form curvature: 1, -1 or 0.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<i64>,
    /// Pitch.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda_grid")]
    pub lambda: Option<f64>,
    /// `default` or a comma-separated list of pitches.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_grid: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override for every check.
    #[arg(long, env = TOL_ENV)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Comma-separated components of x (octonionic or space-form geodesics).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Comma-separated components of y.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Use Y proportional to X, so that the geodesic degenerates.
    #[arg(long)]
    pub commuting: bool,
    /// Random geodesics per system in verify-all.
    #[arg(long, default_value_t = 100)]
    pub geodesic_seeds: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Replace one octonion table entry (mutation test of verify-all).
    #[arg(long, hide = true)]
    pub inject_table_typo: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitConfig {
    /// Base point, 1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub epsilon: i8,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

impl RunConfig {
    fn format(&self) -> Result<Format> {
        self.format.parse()
    }

    fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ScrewError::Domain(format!("--tol must be positive, got {v}")));
            }
            t.equality = v;
            t.override_all = Some(v);
        }
        Ok(t)
    }

    fn group(&self) -> Result<Option<CompactGroupId>> {
        self.group.as_deref().map(str::parse).transpose()
    }

    fn lambdas(&self) -> Result<Vec<f64>> {
        if let Some(l) = self.lambda {
            return finite(l, "lambda").map(|l| vec![l]);
        }
        match self.lambda_grid.as_deref() {
            None | Some("default") => Ok(DEFAULT_LAMBDA_GRID.to_vec()),
            Some(list) => parse_list(list, "lambda-grid"),
        }
    }

    fn single_lambda(&self) -> Result<f64> {
        match self.lambdas()?.as_slice() {
            [l] if self.lambda.is_some() || self.lambda_grid.is_some() => Ok(*l),
            _ => Err(ScrewError::Domain("this command needs a single --lambda".into())),
        }
    }

    fn curvatures(&self) -> Result<Vec<Curvature>> {
        match self.k {
            Some(k) => Ok(vec![Curvature::from_sign(k)?]),
            None => Ok(Curvature::ALL.to_vec()),
        }
    }

    fn kappa(&self) -> Result<i64> {
        let k = self.kappa.or(self.k).ok_or_else(|| ScrewError::Domain("--space-form needs --kappa".into()))?;
        Curvature::from_sign(k)?;
        Ok(k)
    }
}

fn finite(v: f64, name: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ScrewError::Domain(format!("{name} must be finite")))
    }
}

fn parse_list(s: &str, name: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| ScrewError::Domain(format!("bad number '{t}' in --{name}")))
                .and_then(|v| finite(v, name))
        })
        .collect()
}

fn parse_fixed<const N: usize>(s: &str, name: &str) -> Result<[f64; N]> {
    let v = parse_list(s, name)?;
    v.try_into()
        .map_err(|v: Vec<f64>| ScrewError::Domain(format!("--{name} needs {N} components, got {}", v.len())))
}

/// Runs the command line and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Controllability(cfg) => cmd_controllability(cfg),
        Command::Geodesic(cfg) => cmd_geodesic(cfg),
        Command::VerifyAll(cfg) => cmd_verify_all(cfg),
        Command::Orbit(cfg) => cmd_orbit(cfg),
    }
}

#[derive(Serialize)]
struct ControllabilityDoc<'a> {
    cases: usize,
    controllable: usize,
    inconsistent: usize,
    discrepancies: usize,
    reports: &'a [ControllabilityReport],
}

pub fn cmd_controllability(cfg: &RunConfig) -> Result<i32> {
    let format = cfg.format()?;
    let tol = cfg.tolerances()?.rank_relative;
    let lambdas = cfg.lambdas()?;
    let mut reports = Vec::new();
    if cfg.octonion {
        reports.extend(lambdas.iter().map(|&l| octo_controllability(l)));
    } else if cfg.space_form {
        let kappa = cfg.kappa()?;
        for &l in &lambdas {
            reports.push(space_form_report(kappa, l)?);
        }
    } else {
        let groups = match cfg.group()? {
            Some(g) => vec![g],
            None => default_groups(),
        };
        let ks = cfg.curvatures()?;
        for g in groups {
            for &k in &ks {
                for &l in &lambdas {
                    reports.push(bracket_generating_rank_with(&ScrewSystem::new(g, k, l)?, tol));
                }
            }
        }
    }
    for r in reports.iter().filter(|r| r.discrepancy) {
        eprintln!(
            "warning: {}: alternate criterion says {:?}, rank {} of {}",
            r.system, r.alternate_predicate, r.dim_span, r.dim_g
        );
    }
    let inconsistent = reports.iter().filter(|r| !r.consistent()).count();
    let content = match format {
        Format::Json => json_document(
            "controllability",
            &ControllabilityDoc {
                cases: reports.len(),
                controllable: reports.iter().filter(|r| r.observed).count(),
                inconsistent,
                discrepancies: reports.iter().filter(|r| r.discrepancy).count(),
                reports: &reports,
            },
        )?,
        Format::Csv => csv_table(
            &[
                "system", "model", "group", "k", "kappa", "lambda", "dim_g", "dim_span", "predicted", "observed",
                "kept_eigenvalue_ratio", "dropped_eigenvalue_ratio", "cross_check_rank", "alternate_predicate",
                "discrepancy",
            ],
            &reports
                .iter()
                .map(|r| {
                    vec![
                        r.system.clone().into(),
                        r.model.clone().into(),
                        r.group.clone().into(),
                        r.k.into(),
                        r.kappa.into(),
                        r.lambda.into(),
                        r.dim_g.into(),
                        r.dim_span.into(),
                        r.predicted.into(),
                        r.observed.into(),
                        r.kept_eigenvalue_ratio.into(),
                        r.dropped_eigenvalue_ratio.into(),
                        r.cross_check_rank.into(),
                        r.alternate_predicate.into(),
                        r.discrepancy.into(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(cfg.out.as_deref(), &content)?;
    Ok(if inconsistent == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct SampleRow {
    t: f64,
    point: Vec<f64>,
    velocity: Vec<f64>,
}

#[derive(Serialize)]
struct Certification {
    tolerance: f64,
    passed: bool,
    residuals: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    degeneration: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct GeodesicDoc {
    model: String,
    system: String,
    lambda: f64,
    seed: u64,
    t_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<serde_json::Value>,
    certification: Certification,
    samples: Vec<SampleRow>,
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

pub fn cmd_geodesic(cfg: &RunConfig) -> Result<i32> {
    let format = cfg.format()?;
    let tol = cfg.tolerances()?.equality;
    if cfg.samples == 0 || !(cfg.t_max >= 0.0 && cfg.t_max.is_finite()) {
        return Err(ScrewError::Domain("need --samples >= 1 and a finite --t-max >= 0".into()));
    }
    let lambda = cfg.single_lambda()?;
    let doc = if cfg.octonion {
        octonion_geodesic(cfg, lambda, tol)?
    } else if cfg.space_form {
        space_form_geodesic(cfg, lambda, tol)?
    } else {
        kk_geodesic(cfg, lambda, tol)?
    };
    let passed = doc.certification.passed;
    let content = match format {
        Format::Json => json_document("geodesic", &doc)?,
        Format::Csv => {
            let width = doc.samples.first().map_or(0, |s| s.point.len());
            let vwidth = doc.samples.first().map_or(0, |s| s.velocity.len());
            let mut header = vec!["t".to_string()];
            header.extend((0..width).map(|i| format!("p{i}")));
            header.extend((0..vwidth).map(|i| format!("v{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<Cell>> = doc
                .samples
                .iter()
                .map(|s| {
                    std::iter::once(Cell::Num(s.t))
                        .chain(s.point.iter().chain(&s.velocity).map(|&v| Cell::Num(v)))
                        .collect()
                })
                .collect();
            csv_table(&header, &rows)
        }
    };
    emit(cfg.out.as_deref(), &content)?;
    eprintln!(
        "{}: certification {} at tolerance {:e}",
        doc.system,
        if passed { "passed" } else { "FAILED" },
        tol
    );
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn kk_geodesic(cfg: &RunConfig, lambda: f64, tol: f64) -> Result<GeodesicDoc> {
    let group = cfg
        .group()?
        .ok_or_else(|| ScrewError::Domain("geodesic needs --group, --octonion or --space-form".into()))?;
    let k = Curvature::from_sign(cfg.k.ok_or_else(|| ScrewError::Domain("geodesic needs --k".into()))?)?;
    let sys = ScrewSystem::new(group, k, lambda)?;
    let mut spec = GeodesicSpec::random(sys.clone(), cfg.seed, 1.0)?;
    if cfg.commuting {
        spec = GeodesicSpec::new(sys.clone(), spec.x().clone(), spec.x().scale(0.6))?;
    }
    let s = sample(&spec, cfg.t_max, cfg.samples)?;
    let cert = certify_sample(&spec, &s);
    let degeneration = degeneration_check(&spec, &uniform_grid(cfg.t_max, cfg.samples.min(21)))?;
    if degeneration.single_exponential {
        eprintln!("note: [X, Y] = 0, the geodesic is the one-parameter subgroup exp(t(X + lambda L_X))");
    }
    let passed = cert.passes(tol) && degeneration.consistent();
    let samples = s
        .times
        .iter()
        .zip(&s.points)
        .zip(&s.left_log_derivatives)
        .map(|((&t, p), v)| SampleRow {
            t,
            point: p.components(),
            velocity: v.to_stacked().components(),
        })
        .collect();
    Ok(GeodesicDoc {
        model: "kk".into(),
        system: sys.to_string(),
        lambda,
        seed: cfg.seed,
        t_max: cfg.t_max,
        generators: Some(serde_json::json!({
            "x": spec.x().components(),
            "y": spec.y().components(),
        })),
        certification: Certification {
            tolerance: tol,
            passed,
            residuals: to_json(&cert),
            degeneration: Some(to_json(&degeneration)),
        },
        samples,
    })
}

fn octonion_geodesic(cfg: &RunConfig, lambda: f64, tol: f64) -> Result<GeodesicDoc> {
    let (x, y): (Vec7, Vec7) = match (&cfg.x, &cfg.y) {
        (Some(x), Some(y)) => (parse_fixed(x, "x")?, parse_fixed(y, "y")?),
        (None, None) => octonion::random_orthogonal_pair(cfg.seed),
        _ => return Err(ScrewError::Domain("give both --x and --y, or neither".into())),
    };
    let times = uniform_grid(cfg.t_max, cfg.samples);
    let (points, cert) = octo_sample(&x, &y, lambda, &times)?;
    let momentum = certify_octo_momentum(&x, &y, lambda)?;
    let passed = cert.max_residual() <= tol && cert.initial_velocity <= tolerances::TIGHT.max(tol) && momentum.passes(tol);
    let mut samples = Vec::with_capacity(times.len());
    for (&t, p) in times.iter().zip(&points) {
        let v = octonion::octo_left_log_derivative(&x, &y, lambda, t)?;
        samples.push(SampleRow {
            t,
            point: p.coords().to_vec(),
            velocity: v.coords().to_vec(),
        });
    }
    Ok(GeodesicDoc {
        model: "octonion".into(),
        system: format!("R7 x SO(7) lambda={lambda}"),
        lambda,
        seed: cfg.seed,
        t_max: cfg.t_max,
        generators: Some(serde_json::json!({ "x": x, "y": y, "c": momentum.c, "d": momentum.d })),
        certification: Certification {
            tolerance: tol,
            passed,
            residuals: serde_json::json!({ "curve": to_json(&cert), "momentum": to_json(&momentum) }),
            degeneration: None,
        },
        samples,
    })
}

fn space_form_geodesic(cfg: &RunConfig, lambda: f64, tol: f64) -> Result<GeodesicDoc> {
    let kappa = cfg.kappa()?;
    let (x, y): ([f64; 3], [f64; 3]) = match (&cfg.x, &cfg.y) {
        (Some(x), Some(y)) => (parse_fixed(x, "x")?, parse_fixed(y, "y")?),
        (None, None) => {
            let v = crate::rng::gaussian_vec(&mut crate::rng::seeded(cfg.seed), 6);
            ([v[0], v[1], v[2]], [v[3], v[4], v[5]])
        }
        _ => return Err(ScrewError::Domain("give both --x and --y, or neither".into())),
    };
    let times = uniform_grid(cfg.t_max, cfg.samples);
    let mut samples = Vec::with_capacity(times.len());
    let mut group = 0.0f64;
    for &t in &times {
        let g: Mat = spaceform::space_form_geodesic(kappa, lambda, x, y, t)?;
        group = group.max(spaceform::group_residual(&g, kappa));
        samples.push(SampleRow {
            t,
            point: g.components(),
            velocity: Vec::new(),
        });
    }
    let cross = cross_model_residual(kappa, lambda, x, y, &times)?;
    let passed = group <= tol && cross <= tolerances::CROSS_MODEL.max(tol);
    Ok(GeodesicDoc {
        model: "space_form".into(),
        system: format!("space form kappa={kappa} lambda={lambda}"),
        lambda,
        seed: cfg.seed,
        t_max: cfg.t_max,
        generators: Some(serde_json::json!({ "x": x, "y": y })),
        certification: Certification {
            tolerance: tol,
            passed,
            residuals: serde_json::json!({ "group_relation": group, "cross_model": cross }),
            degeneration: None,
        },
        samples,
    })
}

pub fn cmd_verify_all(cfg: &RunConfig) -> Result<i32> {
    let format = cfg.format()?;
    let summary = verify_all(&VerifyOptions {
        tolerances: cfg.tolerances()?,
        geodesic_seeds: cfg.geodesic_seeds,
        seed: cfg.seed,
        inject_table_typo: cfg.inject_table_typo,
    });
    for c in &summary.checks {
        let tag = match (c.passed, c.tolerance_bound) {
            (true, _) => "PASS",
            (false, true) => "FAIL (tolerance-bound)",
            (false, false) => "FAIL",
        };
        eprintln!("{tag:<22} {:<44} {:.3e} <= {:.1e}", c.name, c.residual, c.tolerance);
    }
    eprintln!(
        "{} checks: {} passed, {} failed ({} tolerance-bound)",
        summary.total, summary.passed, summary.failed, summary.tolerance_bound
    );
    let content = match format {
        Format::Json => json_document("verify-all", &summary)?,
        Format::Csv => csv_table(
            &["name", "residual", "tolerance", "passed", "tolerance_bound"],
            &summary
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone().into(),
                        c.residual.into(),
                        c.tolerance.into(),
                        c.passed.into(),
                        c.tolerance_bound.into(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    if cfg.out.is_some() {
        emit(cfg.out.as_deref(), &content)?;
    }
    Ok(if summary.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn cmd_orbit(cfg: &OrbitConfig) -> Result<i32> {
    let format: Format = cfg.format.parse()?;
    if cfg.samples == 0 || !cfg.t_max.is_finite() {
        return Err(ScrewError::Domain("need --samples >= 1 and a finite --t-max".into()));
    }
    let ts: Vec<f64> = if cfg.samples == 1 {
        vec![0.0]
    } else {
        (0..cfg.samples)
            .map(|i| -cfg.t_max + 2.0 * cfg.t_max * i as f64 / (cfg.samples - 1) as f64)
            .collect()
    };
    let table = so2_orbit_table(&[0.0], &ts, cfg.epsilon)?;
    let worst = table.iter().map(|p| p.gap()).fold(0.0, f64::max);
    let content = match format {
        Format::Csv => csv_table(
            &["s", "t", "epsilon", "closed_re", "closed_im", "matrix_re", "matrix_im", "gap"],
            &table
                .iter()
                .map(|p| {
                    vec![
                        p.s.into(),
                        p.t.into(),
                        (p.epsilon as i64).into(),
                        p.closed_form.re.into(),
                        p.closed_form.im.into(),
                        p.matrix_route.re.into(),
                        p.matrix_route.im.into(),
                        p.gap().into(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "s": p.s, "t": p.t, "epsilon": p.epsilon,
                        "closed_form": [p.closed_form.re, p.closed_form.im],
                        "matrix_route": [p.matrix_route.re, p.matrix_route.im],
                    })
                })
                .collect();
            json_document("so2-orbit", &serde_json::json!({ "max_gap": worst, "rows": rows }))?
        }
    };
    emit(cfg.out.as_deref(), &content)?;
    Ok(if worst <= tolerances::EQUALITY { EXIT_OK } else { EXIT_CHECK_FAILED })
}
