use crate::config::{GridSpec, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};
use jackson_core::nevanlinna::{
    log_order_from_counting, log_order_from_nu, log_order_of_model, samples_to_csv, sweep, MeroModel, ModelKind,
    ModelSpec, OrderEstimate, RadialGrid, Target,
};
use jackson_core::qcore::{QParam, TruncatedSeries};
use jackson_core::qode::{residual, solve_series, ProblemFile};
use jackson_core::qspecial::{etilde_product, etilde_q, exp_q, phi_rs, sinq_cosq, E_q, E_q_product, PhiParams};
use jackson_core::Complex64;
use serde_json::json;
use std::path::Path;

/// Text to emit plus whether a check inside the command failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
    /// One-line summary for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failed: false,
            summary: None,
        }
    }
}

pub const DEFAULT_SERIES_ORDER: usize = 60;
const PRODUCT_TOL: f64 = 1e-17;

fn qparam(cfg: &RunConfig, default: f64) -> Result<QParam, CliError> {
    Ok(QParam::new(cfg.q.unwrap_or(Complex64::new(default, 0.0)))?)
}

fn radial_grid(cfg: &RunConfig, default: GridSpec) -> Result<RadialGrid, CliError> {
    let g = cfg.grid.unwrap_or(default);
    Ok(RadialGrid::log_spaced(g.rmin, g.rmax, g.points, cfg.nodes)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalPath {
    Series,
    Product,
}

/// Parameters of `eval` beyond the run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub function: String,
    pub points: Vec<Complex64>,
    pub path: EvalPath,
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
}

/// Values of a q-special function with an error estimate per point.
///
/// Series path: the estimate is the size of the last retained term.
/// Product path: a rounding bound relative to the value.
pub fn cmd_eval(req: &EvalRequest, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let qp = qparam(cfg, 0.5)?;
    let n = cfg.n.unwrap_or(DEFAULT_SERIES_ORDER);
    let mut points = req.points.clone();
    if let Some(g) = cfg.grid {
        let grid = RadialGrid::log_spaced(g.rmin, g.rmax, g.points, jackson_core::nevanlinna::MIN_NODES)?;
        points.extend(grid.radii().iter().map(|&r| Complex64::new(r, 0.0)));
    }
    if points.is_empty() {
        return Err(CliError::Usage("eval needs --z or --grid".into()));
    }
    let name = req.function.as_str();
    if !matches!(name, "exp_q" | "etilde_q" | "E_q" | "sin_q" | "cos_q" | "phi_rs") {
        return Err(CliError::UnknownFunction(name.to_string()));
    }
    let mut table = Table::new(&["z_re", "z_im", "value_re", "value_im", "error_estimate"]);
    match req.path {
        EvalPath::Product => {
            let f: Box<dyn Fn(Complex64) -> jackson_core::Result<Complex64>> = match name {
                "etilde_q" if qp.modulus() > 1.0 => Box::new(|z| etilde_product(z, &qp, PRODUCT_TOL)),
                "E_q" if qp.modulus() < 1.0 => Box::new(|z| E_q_product(z, &qp, PRODUCT_TOL)),
                "etilde_q" => return Err(CliError::RegimeMismatch("the etilde_q product needs |q| > 1".into())),
                "E_q" => return Err(CliError::RegimeMismatch("the E_q product needs |q| < 1".into())),
                _ => return Err(CliError::RegimeMismatch(format!("{name} has no product path"))),
            };
            for z in points {
                let v = f(z)?;
                table.push(vec![
                    z.re.into(),
                    z.im.into(),
                    v.re.into(),
                    v.im.into(),
                    (64.0 * f64::EPSILON * v.norm()).into(),
                ]);
            }
        }
        EvalPath::Series => {
            let s = match name {
                "exp_q" => exp_q(&qp, n),
                "etilde_q" => etilde_q(&qp, n),
                "E_q" => E_q(&qp, n),
                "sin_q" => sinq_cosq(&qp, n).0,
                "cos_q" => sinq_cosq(&qp, n).1,
                _ => {
                    if req.alpha.is_empty() && req.beta.is_empty() {
                        return Err(CliError::Usage("phi_rs needs --alpha and/or --beta".into()));
                    }
                    phi_rs(
                        &PhiParams {
                            alpha: req.alpha.clone(),
                            beta: req.beta.clone(),
                            qp,
                        },
                        n,
                    )?
                }
            };
            for z in points {
                let v = s.eval(z)?;
                let err = s.coeff(n).norm() * z.norm().powi(n as i32);
                table.push(vec![z.re.into(), z.im.into(), v.re.into(), v.im.into(), err.into()]);
            }
        }
    }
    Ok(Outcome::ok(table.render(cfg.format)))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Series solution of a problem file with its coefficient residual;
/// fails when the residual exceeds `1e-8` times the coefficient scale.
pub fn cmd_solve(path: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = read(path)?;
    let pf = ProblemFile::from_json(&text).map_err(|e| CliError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let n = cfg.n.unwrap_or(pf.n);
    let prob = pf.to_problem()?;
    let sol = solve_series(&prob, n)?;
    let (_, res) = residual(&prob, &sol.series)?;
    let scale = sol.series.max_abs().max(1.0);
    let tol = cfg.tol.unwrap_or(1e-8);
    let failed = !(res <= tol * scale);
    let summary = format!(
        "residual {res:.3e} (limit {:.3e}){}{}",
        tol * scale,
        if sol.formal { ", formal series" } else { "" },
        if sol.warnings.is_empty() {
            String::new()
        } else {
            format!(", {} conditioning warnings", sol.warnings.len())
        }
    );
    let text = match cfg.format {
        crate::config::Format::Csv => {
            let mut t = Table::new(&["n", "re", "im"]);
            for (i, c) in sol.series.coeffs().iter().enumerate().take(n + 1) {
                t.push(vec![i.into(), c.re.into(), c.im.into()]);
            }
            t.to_csv()
        }
        crate::config::Format::Json => {
            let coeffs: Vec<[f64; 2]> = sol.series.coeffs().iter().take(n + 1).map(|c| [c.re, c.im]).collect();
            let v = json!({
                "coeffs": coeffs,
                "residual": res,
                "formal": sol.formal,
                "warnings": sol.warnings.iter().map(|w| json!({"n": w.order, "bracket_product": w.bracket_product})).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    };
    Ok(Outcome {
        text,
        failed,
        summary: Some(summary),
    })
}

/// A model named on the command line: `etilde_q`, `E_q`,
/// `poly:c0,c1,...` (real, ascending) or a model file path.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelChoice {
    Etilde,
    EProduct,
    Spec(ModelSpec),
}

pub fn parse_model(text: &str) -> Result<ModelChoice, CliError> {
    if text == "etilde_q" {
        return Ok(ModelChoice::Etilde);
    }
    if text == "E_q" {
        return Ok(ModelChoice::EProduct);
    }
    if let Some(list) = text.strip_prefix("poly:") {
        let coeffs = list
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("bad polynomial coefficients '{list}'")))?;
        return Ok(ModelChoice::Spec(ModelSpec::polynomial(&coeffs, None)));
    }
    let path = Path::new(text);
    if path.extension().is_some_and(|e| e == "json") {
        let spec = ModelSpec::from_json(&read(path)?).map_err(|e| CliError::Schema {
            path: text.to_string(),
            message: e.to_string(),
        })?;
        return Ok(ModelChoice::Spec(spec));
    }
    Err(CliError::Usage(format!(
        "unknown model '{text}' (expected etilde_q, E_q, poly:c0,c1,... or a .json model file)"
    )))
}

fn build_model(choice: &ModelChoice, cfg: &RunConfig) -> Result<MeroModel, CliError> {
    Ok(match choice {
        ModelChoice::Etilde => MeroModel::etilde_product(qparam(cfg, 2.0)?)?,
        ModelChoice::EProduct => MeroModel::E_q_product(qparam(cfg, 0.5)?)?,
        ModelChoice::Spec(s) => {
            let m = s.to_model()?;
            match (cfg.q, m.qp()) {
                (Some(q), None) => m.with_q(QParam::new(q)?),
                _ => m,
            }
        }
    })
}

pub const DEFAULT_ORDER_GRID: GridSpec = GridSpec {
    rmin: 1e2,
    rmax: 1e6,
    points: 13,
};

/// One logarithmic-order estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderRow {
    pub estimator: &'static str,
    pub estimate: OrderEstimate,
}

/// Logarithmic-order estimates for a model.
///
/// `characteristic` regresses `log T`; `zero-counting` regresses the
/// lattice `log N(r, 0)`; `central-index` regresses `log ν` of the series.
pub fn order_estimates(choice: &ModelChoice, cfg: &RunConfig) -> Result<Vec<OrderRow>, CliError> {
    let grid = radial_grid(cfg, DEFAULT_ORDER_GRID)?;
    let n = cfg.n.unwrap_or(DEFAULT_SERIES_ORDER);
    let model = build_model(choice, cfg)?;
    let mut rows = Vec::new();
    let lattice = match choice {
        ModelChoice::Etilde => Some((true, qparam(cfg, 2.0)?)),
        ModelChoice::EProduct => Some((false, qparam(cfg, 0.5)?)),
        ModelChoice::Spec(ModelSpec::EtildeQ { .. }) => model.qp().map(|qp| (true, qp)),
        ModelChoice::Spec(ModelSpec::EQ { .. }) => model.qp().map(|qp| (false, qp)),
        ModelChoice::Spec(_) => None,
    };
    let series: Option<TruncatedSeries> = match (lattice, choice) {
        (Some((true, qp)), _) => Some(etilde_q(&qp, n)),
        (Some((false, qp)), _) => Some(E_q(&qp, n)),
        (None, ModelChoice::Spec(s)) => match (s.as_polynomial()?, model.kind()) {
            (Some(p), _) => Some(TruncatedSeries::polynomial(p.coeffs().to_vec())),
            (None, ModelKind::EntireSeries(s)) => Some(s.clone()),
            _ => None,
        },
        (None, _) => None,
    };
    if lattice.is_some() {
        rows.push(OrderRow {
            estimator: "zero-counting",
            estimate: log_order_from_counting(&model, grid.radii(), Target::zero())?,
        });
    }
    if let Some(s) = &series {
        rows.push(OrderRow {
            estimator: "central-index",
            estimate: log_order_from_nu(s, &grid)?,
        });
    }
    rows.push(OrderRow {
        estimator: "characteristic",
        estimate: log_order_of_model(&model, &grid)?,
    });
    Ok(rows)
}

pub fn cmd_order(model: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = order_estimates(&parse_model(model)?, cfg)?;
    let mut t = Table::new(&["estimator", "sigma_log", "half_width"]);
    for r in rows {
        t.push(vec![
            r.estimator.into(),
            r.estimate.value.into(),
            Cell::Num(r.estimate.half_width),
        ]);
    }
    Ok(Outcome::ok(t.render(cfg.format)))
}

pub const DEFAULT_SAMPLE_GRID: GridSpec = GridSpec {
    rmin: 1.0,
    rmax: 1e4,
    points: 9,
};

/// A Nevanlinna sweep over the grid in the sample CSV schema.
pub fn cmd_sample(model: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = build_model(&parse_model(model)?, cfg)?;
    let grid = radial_grid(cfg, DEFAULT_SAMPLE_GRID)?;
    let samples = sweep(&model, &grid)?;
    let text = match cfg.format {
        crate::config::Format::Csv => samples_to_csv(&samples),
        crate::config::Format::Json => {
            let mut t = Table::new(&["r", "m", "N_0", "N_inf", "T", "nJ_0", "nJ_inf", "quad_err"]);
            let opt = |x: Option<f64>| Cell::Num(x.unwrap_or(f64::NAN));
            for s in &samples {
                t.push(vec![
                    s.r.into(),
                    s.m.into(),
                    opt(s.n_zero),
                    s.n_inf.into(),
                    s.t.into(),
                    opt(s.ntilde_zero),
                    opt(s.ntilde_inf),
                    s.quad_err.into(),
                ]);
            }
            t.render(crate::config::Format::Json)
        }
    };
    Ok(Outcome::ok(text))
}

/// Runs a property suite and tabulates each check against its limit.
pub fn cmd_verify(suite: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = crate::verify::run_suite(suite, cfg.seed, cfg.tol)
        .ok_or_else(|| CliError::UnknownSuite(suite.to_string()))??;
    let mut t = Table::new(&["suite", "check", "value", "limit", "pass"]);
    let failures = rows.iter().filter(|r| !r.passed()).count();
    for r in &rows {
        let limit = if r.lower_bound {
            format!(">= {:e}", r.limit)
        } else {
            format!("<= {:e}", r.limit)
        };
        t.push(vec![
            r.suite.into(),
            r.check.clone().into(),
            r.value.into(),
            limit.into(),
            r.passed().into(),
        ]);
    }
    Ok(Outcome {
        text: t.render(cfg.format),
        failed: failures > 0,
        summary: Some(format!(
            "{suite}: {} of {} checks passed",
            rows.len() - failures,
            rows.len()
        )),
    })
}
