use super::functionals::{
    counting_from_points, counting_n, positive_part_mean, proximity_with, sweep, NevanlinnaSample,
};
use super::grid::RadialGrid;
use super::model::{MeroModel, ModelKind, Target};
use super::order::{central_index, log_order_from_t, max_modulus_point, OrderEstimate};
use super::truncated::JacksonCounter;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qcore::{QParam, TruncatedSeries};
use crate::qoperator::closed_form_from_orbit;
use num_complex::Complex64;

/// `D_q^k f(z) / f(z)` from the shift ratios `f(q^j z) / f(z)`.
pub fn log_derivative(model: &MeroModel, z: Complex64, qp: &QParam, k: usize) -> Result<Complex64> {
    let q = qp.q();
    let mut orbit = Vec::with_capacity(k + 1);
    // closed_form_from_orbit expects f(q^{k-j} z) at position j
    for j in 0..=k {
        let w = z * q.powi((k - j) as i32);
        orbit.push(if j == k {
            Complex64::new(1.0, 0.0)
        } else {
            model.ratio(w, z)?
        });
    }
    closed_form_from_orbit(&orbit, z, qp)
}

fn moduli_with_images(model: &MeroModel, qp: &QParam, k: usize, rmax: f64) -> Vec<f64> {
    let base = model.singular_moduli(rmax * qp.modulus().max(1.0).powi(k as i32) * 1.01);
    let qm = qp.modulus();
    let mut out = Vec::new();
    for m in base {
        for j in 0..=k as i32 {
            out.push(m * qm.powi(-j));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// One row of the logarithmic difference check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivRow {
    pub r: f64,
    /// `m(r, D_q^k f / f)`.
    pub m: f64,
    pub t: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogDerivReport {
    pub rows: Vec<LogDerivRow>,
    /// Whether `ratio` is nonincreasing over the top decade of the grid.
    pub decreasing_top_decade: bool,
}

/// `m(r, D_q^k f/f) / T(r, f)` over the grid.
pub fn logderiv_lemma_check(model: &MeroModel, qp: &QParam, k: usize, grid: &RadialGrid) -> Result<LogDerivReport> {
    if model.is_constant() {
        return Err(Error::InvalidArgument(
            "the logarithmic difference check needs a nonconstant f".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let rmax = *grid.radii().last().unwrap();
    let grid = grid.nudged(&moduli_with_images(model, qp, k, rmax));
    let samples = sweep(model, &grid)?;
    let nodes = grid.nodes();
    let rows = grid
        .exec()
        .map(&samples, |s| -> Result<LogDerivRow> {
            let m = positive_part_mean(s.r, nodes, Exec::Sequential, |z| {
                Ok(log_derivative(model, z, qp, k)?.norm().ln())
            })?
            .value;
            Ok(LogDerivRow {
                r: s.r,
                m,
                t: s.t,
                ratio: m / s.t,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let top: Vec<&LogDerivRow> = rows.iter().filter(|row| row.r >= rmax / 10.0 * (1.0 - 1e-9)).collect();
    let decreasing_top_decade = top.windows(2).all(|w| w[1].ratio <= w[0].ratio + 1e-12);
    Ok(LogDerivReport {
        rows,
        decreasing_top_decade,
    })
}

/// One row of the second main theorem check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SftRow {
    pub r: f64,
    pub t: f64,
    /// `sum Ñ_J(r, f = a_j) - (p - 2) T(r, f)`.
    pub margin: f64,
    /// `sum N(r, f = a_j) - N_J(r) - log r - (p - 2) T(r, f)`, with
    /// `N_J = 2 N(r, f) - N(r, D_q f) + N(r, 1/D_q f)`.
    pub sharp_margin: f64,
}

/// Margins of `(p - 2) T <= sum Ñ_J + o(T)` for a rational `f`.
pub fn sft_check(f: &MeroModel, targets: &[Target], qp: &QParam, grid: &RadialGrid) -> Result<Vec<SftRow>> {
    let rf = f
        .as_rational()
        .ok_or_else(|| Error::InvalidArgument("the second main theorem check needs a rational model".into()))?;
    let p = targets.len();
    if p < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 targets, got {p}")));
    }
    for (i, a) in targets.iter().enumerate() {
        if targets[..i].contains(a) {
            return Err(Error::InvalidArgument(format!("target {a} repeated")));
        }
    }
    let counters = targets
        .iter()
        .map(|&a| JacksonCounter::new(rf, a, qp))
        .collect::<Result<Vec<_>>>()?;
    let d = MeroModel::rational(rf.jackson_derivative(qp)?);
    let model = f.clone().with_q(*qp);
    let rmax = *grid.radii().last().unwrap();
    let mut moduli = model.singular_moduli(rmax * 1.01);
    moduli.extend(d.singular_moduli(rmax * 1.01));
    for c in &counters {
        moduli.extend(c.weighted_points().iter().map(|p| p.0.norm()));
    }
    let grid = grid.nudged(&moduli);
    let nodes = grid.nodes();
    grid.exec()
        .map(grid.radii(), |&r| -> Result<SftRow> {
            let t =
                proximity_with(&model, r, nodes, Exec::Sequential)?.value + counting_n(&model, r, Target::Infinity)?;
            let trunc: f64 = counters.iter().map(|c| c.counting(r)).sum();
            let full: f64 = targets.iter().map(|&a| counting_n(&model, r, a)).sum::<Result<f64>>()?;
            let nj = 2.0 * counting_n(&model, r, Target::Infinity)? - counting_n(&d, r, Target::Infinity)?
                + if d.is_constant() {
                    0.0
                } else {
                    counting_n(&d, r, Target::zero())?
                };
            let excess = (p as f64 - 2.0) * t;
            Ok(SftRow {
                r,
                t,
                margin: trunc - excess,
                sharp_margin: full - nj - r.ln() - excess,
            })
        })
        .into_iter()
        .collect()
}

/// Finite-radius defect proxies for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub target: Target,
    pub r: f64,
    /// `1 - N(r, f = a) / T`.
    pub delta: f64,
    /// `(N(r, f = a) - Ñ_J(r, f = a)) / T`.
    pub vartheta_j: f64,
    /// `1 - Ñ_J(r, f = a) / T`.
    pub theta_j: f64,
    /// Slope of the `Θ_J` proxy against `log r` over the top half of the grid.
    pub theta_trend: f64,
    /// Set when an unclamped proxy left `[-0.1, 1.1]`.
    pub out_of_range: bool,
    pub radii: Vec<f64>,
}

const CLAMP: (f64, f64) = (-0.1, 1.1);

/// `δ`, `ϑ_J` and `Θ_J` proxies at the largest grid radius.
pub fn defect_estimates(f: &MeroModel, grid: &RadialGrid, targets: &[Target]) -> Result<Vec<DefectReport>> {
    let rf = f
        .as_rational()
        .ok_or_else(|| Error::InvalidArgument("defect estimates need a rational model".into()))?;
    let qp = f
        .qp()
        .ok_or_else(|| Error::InvalidArgument("defect estimates need a base q on the model".into()))?;
    let rmax = *grid.radii().last().unwrap();
    let mut moduli = f.singular_moduli(rmax * 1.01);
    for &a in targets {
        if let Ok(p) = f.points(a, rmax * 1.01) {
            moduli.extend(p.iter().map(|p| p.0.norm()));
        }
    }
    let grid = grid.nudged(&moduli);
    let samples: Vec<NevanlinnaSample> = sweep(f, &grid)?;
    targets
        .iter()
        .map(|&a| {
            let c = JacksonCounter::new(rf, a, &qp)?;
            let pts = f.points(a, rmax * 2.0)?;
            let theta = |s: &NevanlinnaSample| 1.0 - c.counting(s.r) / s.t;
            let last = samples.last().unwrap();
            let n = counting_from_points(&pts, last.r);
            let nt = c.counting(last.r);
            let raw = [1.0 - n / last.t, (n - nt) / last.t, 1.0 - nt / last.t];
            let out_of_range = raw.iter().any(|v| *v < CLAMP.0 || *v > CLAMP.1);
            let clamp = |v: f64| v.clamp(CLAMP.0, CLAMP.1);
            let top = &samples[samples.len() / 2..];
            let theta_trend = if top.len() >= 2 {
                let x: Vec<f64> = top.iter().map(|s| s.r.ln()).collect();
                let y: Vec<f64> = top.iter().map(theta).collect();
                let mx = x.iter().sum::<f64>() / x.len() as f64;
                let my = y.iter().sum::<f64>() / y.len() as f64;
                let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
                let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
                sxy / sxx
            } else {
                0.0
            };
            Ok(DefectReport {
                target: a,
                r: last.r,
                delta: clamp(raw[0]),
                vartheta_j: clamp(raw[1]),
                theta_j: clamp(raw[2]),
                theta_trend,
                out_of_range,
                radii: grid.radii().to_vec(),
            })
        })
        .collect()
}

/// One row of the Wiman–Valiron shift check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WimanValironRow {
    pub sample: super::order::WimanValironSample,
    /// `ln |f(q^k z) / f(z)|` at the max-modulus point.
    pub log_ratio: f64,
    /// `k ν ln |q|`.
    pub predicted: f64,
    /// `(q^k - 1) ν`, the exponent as printed in the lemma's proof.
    pub printed_exponent: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WimanValironReport {
    pub rows: Vec<WimanValironRow>,
    /// Whether the deviation decreases strictly over the top three radii.
    pub decreasing_top3: bool,
}

/// Compares `ln |f(q^k z*) / f(z*)|` with `k ν(r) ln |q|` at the
/// max-modulus point `z*` of each grid circle.
pub fn wiman_valiron_check(
    f: &TruncatedSeries,
    qp: &QParam,
    k: usize,
    grid: &RadialGrid,
) -> Result<WimanValironReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let safe = f.safe_radius().radius().unwrap_or(0.0);
    let shift = qp.q().powi(k as i32);
    let reach = grid.radii().last().unwrap() * shift.norm().max(1.0);
    if reach > safe * (1.0 + 1e-12) {
        return Err(Error::OutsideSafeRadius {
            modulus: reach,
            radius: safe,
        });
    }
    let rows = grid
        .exec()
        .map(grid.radii(), |&r| -> Result<WimanValironRow> {
            let (nu, lmu) = central_index(f, r)?;
            let z = max_modulus_point(f, r)?;
            let ratio = f.eval_unchecked(shift * z) / f.eval_unchecked(z);
            let log_ratio = ratio.norm().ln();
            let predicted = k as f64 * nu as f64 * qp.modulus().ln();
            let deviation = (log_ratio - predicted).abs() / predicted.abs().max(f64::MIN_POSITIVE);
            Ok(WimanValironRow {
                sample: super::order::WimanValironSample {
                    r,
                    mu: lmu.exp(),
                    nu,
                    max_modulus_point: z,
                    ratio_check: ratio,
                },
                log_ratio,
                predicted,
                printed_exponent: ((shift - 1.0) * nu as f64).re,
                deviation,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len();
    let decreasing_top3 = n >= 3 && rows[n - 3..].windows(2).all(|w| w[1].deviation < w[0].deviation);
    Ok(WimanValironReport { rows, decreasing_top3 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// `None` when the check is skipped.
    pub sigma_a: Option<OrderEstimate>,
    pub sigma_f: Option<OrderEstimate>,
    /// `σ_log(f) - σ_log(A) - 1`.
    pub gap: Option<f64>,
    pub half_width: f64,
    /// Largest relative residual of `D_q^k f + A f` seen on the grid circles.
    pub residual: f64,
    pub skipped: Option<String>,
}

const GROWTH_RESIDUAL_TOL: f64 = 1e-6;

/// Estimates `σ_log(A)` and `σ_log(f)` for a solution `f` of
/// `D_q^k f + A f = 0` and reports `σ_log(f) - σ_log(A) - 1`.
pub fn growth_lower_bound_check(
    a: &MeroModel,
    f: &MeroModel,
    qp: &QParam,
    k: usize,
    grid: &RadialGrid,
) -> Result<GrowthReport> {
    if matches!(f.kind(), ModelKind::Rational(_)) {
        return Ok(GrowthReport {
            sigma_a: None,
            sigma_f: None,
            gap: None,
            half_width: 0.0,
            residual: 0.0,
            skipped: Some("f is rational, not transcendental".into()),
        });
    }
    let rmax = *grid.radii().last().unwrap();
    let mut moduli = moduli_with_images(f, qp, k, rmax);
    moduli.extend(a.singular_moduli(rmax * 1.01));
    let grid = grid.nudged(&moduli);
    let mut residual: f64 = 0.0;
    for &r in grid.radii() {
        for j in 0..8 {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * (j as f64 + 0.37) / 8.0);
            let lhs = log_derivative(f, z, qp, k)?;
            let av = a.eval(z)?;
            residual = residual.max((lhs + av).norm() / (lhs.norm() + av.norm()).max(f64::MIN_POSITIVE));
        }
    }
    if residual > GROWTH_RESIDUAL_TOL {
        return Err(Error::InvalidArgument(format!(
            "f does not satisfy the equation on the grid: relative residual {residual:.3e}"
        )));
    }
    let sa = log_order_from_t(&sweep(a, &grid)?)?;
    let sf = log_order_from_t(&sweep(f, &grid)?)?;
    Ok(GrowthReport {
        sigma_a: Some(sa),
        sigma_f: Some(sf),
        gap: Some(sf.value - sa.value - 1.0),
        half_width: sa.half_width + sf.half_width,
        residual,
        skipped: None,
    })
}
