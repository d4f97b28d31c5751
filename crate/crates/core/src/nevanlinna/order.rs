use super::functionals::{counting_n, sweep, NevanlinnaSample};
use super::grid::RadialGrid;
use super::model::{MeroModel, Target};
use crate::error::{Error, Result};
use crate::qcore::TruncatedSeries;
use num_complex::Complex64;

/// A regression proxy for a limsup, with a two-standard-error half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEstimate {
    pub value: f64,
    pub half_width: f64,
}

const MIN_RADII: usize = 6;
const MIN_DECADES: f64 = 3.0;

fn check_span(radii: &[f64]) -> Result<()> {
    if radii.len() < MIN_RADII {
        return Err(Error::InsufficientGrid(format!(
            "{} radii, need at least {MIN_RADII}",
            radii.len()
        )));
    }
    let span = (radii[radii.len() - 1] / radii[0]).log10();
    if !(span >= MIN_DECADES - 1e-9) {
        return Err(Error::InsufficientGrid(format!(
            "radii span {span:.2} decades, need {MIN_DECADES}"
        )));
    }
    Ok(())
}

/// Least-squares slope of `y` against `x` and its standard error.
fn slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    if x.len() <= 2 {
        return (b, 0.0);
    }
    let sse: f64 = x.iter().zip(y).map(|(a, c)| (c - my - b * (a - mx)).powi(2)).sum();
    (b, (sse / (n - 2.0) / sxx).sqrt())
}

/// Slope of `log y` against `log log r` over the top half of the radii.
fn loglog_slope(radii: &[f64], values: &[f64], what: &str) -> Result<OrderEstimate> {
    check_span(radii)?;
    let start = radii.len() / 2;
    let (r, v) = (&radii[start..], &values[start..]);
    if r[0] <= std::f64::consts::E {
        return Err(Error::InsufficientGrid(format!(
            "the top half of the grid must lie beyond r = e, starts at {}",
            r[0]
        )));
    }
    if v.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::DegenerateGrowth(format!(
            "{what} is not positive on the top half of the grid"
        )));
    }
    let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |a, &t| (a.0.min(t), a.1.max(t)));
    if hi - lo <= 1e-12 * hi {
        return Err(Error::DegenerateGrowth(format!("{what} is constant over the grid")));
    }
    let x: Vec<f64> = r.iter().map(|r| r.ln().ln()).collect();
    let y: Vec<f64> = v.iter().map(|t| t.ln()).collect();
    let (b, se) = slope(&x, &y);
    Ok(OrderEstimate {
        value: b,
        half_width: 2.0 * se,
    })
}

/// `σ_log ≈ slope of log T against log log r` from a sweep.
pub fn log_order_from_t(samples: &[NevanlinnaSample]) -> Result<OrderEstimate> {
    let r: Vec<f64> = samples.iter().map(|s| s.r).collect();
    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
    loglog_slope(&r, &t, "T(r)")
}

/// Sweeps the model over the grid, then applies [`log_order_from_t`].
pub fn log_order_of_model(model: &MeroModel, grid: &RadialGrid) -> Result<OrderEstimate> {
    check_span(grid.radii())?;
    log_order_from_t(&sweep(model, grid)?)
}

/// The same regression on `N(r, f = a)`, for models whose `a`-points
/// dominate the characteristic.
pub fn log_order_from_counting(model: &MeroModel, radii: &[f64], target: Target) -> Result<OrderEstimate> {
    check_span(radii)?;
    let n = radii
        .iter()
        .map(|&r| counting_n(model, r, target))
        .collect::<Result<Vec<_>>>()?;
    loglog_slope(radii, &n, "N(r)")
}

/// Maximum term and central index of a power series on `|z| = r`, plus
/// the point of maximum modulus and the shift ratio of the check that
/// uses it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WimanValironSample {
    pub r: f64,
    pub mu: f64,
    pub nu: usize,
    pub max_modulus_point: Complex64,
    /// `f(q^k z) / f(z)` at `max_modulus_point`.
    pub ratio_check: Complex64,
}

/// `(ν, ln μ)`: the largest index maximizing `ln|c_n| + n ln r`.
pub fn central_index(f: &TruncatedSeries, r: f64) -> Result<(usize, f64)> {
    let lr = r.ln();
    let mut best: Option<(usize, f64)> = None;
    for (n, c) in f.coeffs().iter().enumerate() {
        let a = c.norm();
        if a == 0.0 {
            continue;
        }
        let v = a.ln() + n as f64 * lr;
        if best.is_none_or(|(_, b)| v >= b - 1e-13 * b.abs().max(1.0)) {
            best = Some((n, v));
        }
    }
    let (nu, lmu) = best.ok_or_else(|| Error::InvalidArgument("the zero series has no maximum term".into()))?;
    let order = f.trunc_order();
    if 2 * nu >= order && !f.is_polynomial() {
        return Err(Error::TruncationTooShort { nu, order });
    }
    Ok((nu, lmu))
}

/// `μ(r)` and `ν(r)` with the max-modulus point found by an angular scan;
/// `ratio_check` is left at zero.
pub fn max_term_central_index(f: &TruncatedSeries, r: f64) -> Result<WimanValironSample> {
    let (nu, lmu) = central_index(f, r)?;
    Ok(WimanValironSample {
        r,
        mu: lmu.exp(),
        nu,
        max_modulus_point: max_modulus_point(f, r)?,
        ratio_check: Complex64::default(),
    })
}

const SCAN_NODES: usize = 4096;

/// The point of `|z| = r` where `|f|` is largest.
pub fn max_modulus_point(f: &TruncatedSeries, r: f64) -> Result<Complex64> {
    let z = |j: f64| Complex64::from_polar(r, std::f64::consts::TAU * j / SCAN_NODES as f64);
    let vals: Vec<f64> = (0..SCAN_NODES).map(|j| f.eval_unchecked(z(j as f64)).norm()).collect();
    let (jmax, &vmax) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty scan");
    // a second local maximum of the same height elsewhere on the circle
    for j in 0..SCAN_NODES {
        let d = (j as isize - jmax as isize).rem_euclid(SCAN_NODES as isize) as usize;
        let far = d.min(SCAN_NODES - d) > 8;
        let prev = vals[(j + SCAN_NODES - 1) % SCAN_NODES];
        let next = vals[(j + 1) % SCAN_NODES];
        if far && vals[j] >= prev && vals[j] >= next && vals[j] >= vmax * (1.0 - 1e-9) {
            return Err(Error::MaxModulusAmbiguous(r));
        }
    }
    // golden-section refinement between neighbouring nodes
    let (mut a, mut b) = (jmax as f64 - 1.0, jmax as f64 + 1.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f.eval_unchecked(z(c)).norm() >= f.eval_unchecked(z(d)).norm() {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(z(0.5 * (a + b)))
}

/// `σ_log ≈ 1 + slope of log ν against log log r`.
pub fn log_order_from_nu(f: &TruncatedSeries, grid: &RadialGrid) -> Result<OrderEstimate> {
    let radii = grid.radii();
    check_span(radii)?;
    let nus = radii
        .iter()
        .map(|&r| central_index(f, r).map(|c| c.0 as f64))
        .collect::<Result<Vec<_>>>()?;
    let start = radii.len() / 2;
    let top = &nus[start..];
    if top.iter().all(|&v| v == top[0]) && top[0] > 0.0 {
        return Ok(OrderEstimate {
            value: 1.0,
            half_width: 0.0,
        });
    }
    let est = loglog_slope(radii, &nus, "ν(r)")?;
    Ok(OrderEstimate {
        value: est.value + 1.0,
        half_width: est.half_width,
    })
}
