use super::grid::{RadialGrid, NUDGE_TRIGGER};
use super::model::{MeroModel, ModelKind, Target};
use super::truncated::JacksonCounter;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qcore::TruncatedSeries;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// A circle average and an estimate of its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// `(1/M) sum g(r e^{2 pi i j / M})`, with `|I_M - I_{M/2}|` plus a rounding
/// floor as the error estimate.
pub fn circle_mean<G>(r: f64, nodes: usize, exec: Exec, g: G) -> Result<Quadrature>
where
    G: Fn(Complex64) -> Result<f64> + Sync + Send,
{
    let vals = node_values(r, nodes, exec, g)?;
    let value = vals.iter().sum::<f64>() / nodes as f64;
    let half = vals.iter().step_by(2).sum::<f64>() / nodes.div_ceil(2) as f64;
    Ok(Quadrature {
        value,
        error: (value - half).abs() + rounding_floor(value, nodes),
    })
}

/// Circle mean of `max(g, 0)` for a smooth `g`.
///
/// On each panel where `g` changes sign the positive part of the linear
/// interpolant is integrated exactly. A plain trapezoid rule there has an
/// error that jumps with the position of the kink between nodes, which
/// makes `|I_M - I_{M/2}|` unreliable; with the kink resolved the error
/// varies smoothly with `M` and the two-level difference bounds it.
pub fn positive_part_mean<G>(r: f64, nodes: usize, exec: Exec, g: G) -> Result<Quadrature>
where
    G: Fn(Complex64) -> Result<f64> + Sync + Send,
{
    let vals = node_values(r, nodes, exec, g)?;
    let value = positive_part_rule(&vals, 1);
    let half = positive_part_rule(&vals, 2);
    let quarter = positive_part_rule(&vals, 4);
    Ok(Quadrature {
        value,
        error: (value - half).abs().max((value - quarter).abs()) + rounding_floor(value, nodes),
    })
}

fn node_values<G>(r: f64, nodes: usize, exec: Exec, g: G) -> Result<Vec<f64>>
where
    G: Fn(Complex64) -> Result<f64> + Sync + Send,
{
    let idx: Vec<usize> = (0..nodes).collect();
    let vals = exec.map(&idx, |&j| g(Complex64::from_polar(r, TAU * j as f64 / nodes as f64)));
    vals.into_iter()
        .enumerate()
        .map(|(j, v)| match v {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(Error::Domain(format!(
                "non-finite integrand at r = {r}, node {j} of {nodes}"
            ))),
            Err(e) => Err(e),
        })
        .collect()
}

fn rounding_floor(value: f64, nodes: usize) -> f64 {
    4.0 * f64::EPSILON * (1.0 + value.abs()) * (nodes as f64).sqrt()
}

/// Mean over panels of every `stride`-th node of the positive part of the
/// piecewise linear interpolant.
fn positive_part_rule(vals: &[f64], stride: usize) -> f64 {
    let idx: Vec<usize> = (0..vals.len()).step_by(stride).collect();
    let panel = |a: f64, b: f64| {
        if a >= 0.0 && b >= 0.0 {
            0.5 * (a + b)
        } else if a <= 0.0 && b <= 0.0 {
            0.0
        } else {
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            0.5 * hi * hi / (hi - lo)
        }
    };
    let sum: f64 = idx
        .iter()
        .zip(idx.iter().cycle().skip(1))
        .map(|(&i, &j)| panel(vals[i], vals[j]))
        .sum();
    sum / idx.len() as f64
}

fn check_poles_off_circle(model: &MeroModel, r: f64) -> Result<()> {
    if let Ok(poles) = model.points(Target::Infinity, r * (1.0 + 2.0 * NUDGE_TRIGGER)) {
        if let Some(p) = poles.iter().find(|p| (p.0.norm() - r).abs() <= NUDGE_TRIGGER * r) {
            return Err(Error::PoleOnCircle { radius: r, pole: p.0 });
        }
    }
    Ok(())
}

/// `m(r, f) = (1/2pi) int log+ |f(r e^{it})| dt`.
pub fn proximity(model: &MeroModel, r: f64, nodes: usize) -> Result<Quadrature> {
    proximity_with(model, r, nodes, Exec::default())
}

pub fn proximity_with(model: &MeroModel, r: f64, nodes: usize, exec: Exec) -> Result<Quadrature> {
    check_poles_off_circle(model, r)?;
    positive_part_mean(r, nodes, exec, |z| model.ln_abs(z))
}

/// `N(r) = sum_{0 < |z_i| <= r} m_i log(r / |z_i|) + n(0) log r`.
pub fn counting_from_points(points: &[(Complex64, u32)], r: f64) -> f64 {
    let lr = r.ln();
    points
        .iter()
        .filter(|p| p.0.norm() <= r)
        .map(|&(z, m)| {
            let a = z.norm();
            m as f64 * if a == 0.0 { lr } else { lr - a.ln() }
        })
        .fold(0.0, |s, x| s + x)
}

/// `n(r)`: points with modulus at most `r`, counted with multiplicity.
pub fn count_within(points: &[(Complex64, u32)], r: f64) -> u32 {
    points.iter().filter(|p| p.0.norm() <= r).map(|p| p.1).sum()
}

/// `a`-points with multiplicity up to modulus `r`, from exact data or, for
/// series models and `a = 0`, from the argument principle.
pub fn target_points(model: &MeroModel, r: f64, target: Target) -> Result<Vec<(Complex64, u32)>> {
    match (model.kind(), target) {
        (ModelKind::EntireSeries(s), Target::Value(a)) if a == Complex64::default() => series_zeros(s, r),
        (ModelKind::EntireSeries(_), Target::Value(_)) => {
            Err(Error::TargetUnsupported("series models count zeros only".into()))
        }
        (ModelKind::QProduct(p), t) => {
            let mut pts = model.points(t, r)?;
            let origin = match t {
                Target::Infinity => (-p.origin.1).max(0),
                _ => p.origin.1.max(0),
            };
            if origin > 0 {
                pts.push((Complex64::default(), origin as u32));
            }
            Ok(pts)
        }
        _ => model.points(target, r),
    }
}

/// `N(r, f = a)`.
pub fn counting_n(model: &MeroModel, r: f64, target: Target) -> Result<f64> {
    Ok(counting_from_points(&target_points(model, r, target)?, r))
}

/// One row of a Nevanlinna sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NevanlinnaSample {
    pub r: f64,
    pub m: f64,
    /// `N(r, 1/f)`, when the zeros are available.
    pub n_zero: Option<f64>,
    /// `N(r, f)`.
    pub n_inf: f64,
    pub t: f64,
    /// `ñ_J(r, f = 0)` and `ñ_J(r, f = ∞)`, rational models with a base `q` only.
    pub ntilde_zero: Option<f64>,
    pub ntilde_inf: Option<f64>,
    pub quad_err: f64,
}

/// `T(r, f) = m(r, f) + N(r, f)` with the auxiliary counts.
pub fn characteristic(model: &MeroModel, r: f64, nodes: usize) -> Result<NevanlinnaSample> {
    let counters = JacksonPair::build(model)?;
    sample_at(model, r, nodes, Exec::default(), &counters)
}

pub(crate) struct JacksonPair {
    zero: Option<JacksonCounter>,
    inf: Option<JacksonCounter>,
}

impl JacksonPair {
    pub(crate) fn build(model: &MeroModel) -> Result<Self> {
        match (model.as_rational(), model.qp()) {
            (Some(f), Some(qp)) if !f.is_constant() => Ok(JacksonPair {
                zero: Some(JacksonCounter::new(f, Target::zero(), &qp)?),
                inf: Some(JacksonCounter::new(f, Target::Infinity, &qp)?),
            }),
            _ => Ok(JacksonPair { zero: None, inf: None }),
        }
    }
}

fn sample_at(model: &MeroModel, r: f64, nodes: usize, exec: Exec, jc: &JacksonPair) -> Result<NevanlinnaSample> {
    let q = proximity_with(model, r, nodes, exec)?;
    let n_inf = counting_n(model, r, Target::Infinity)?;
    let n_zero = match counting_n(model, r, Target::zero()) {
        Ok(v) => Some(v),
        Err(Error::TargetUnsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(NevanlinnaSample {
        r,
        m: q.value,
        n_zero,
        n_inf,
        t: q.value + n_inf,
        ntilde_zero: jc.zero.as_ref().map(|c| c.n_tilde(r) as f64),
        ntilde_inf: jc.inf.as_ref().map(|c| c.n_tilde(r) as f64),
        quad_err: q.error,
    })
}

/// Samples at every grid radius, after moving radii off known zeros and poles.
pub fn sweep(model: &MeroModel, grid: &RadialGrid) -> Result<Vec<NevanlinnaSample>> {
    let rmax = grid.radii().last().copied().unwrap_or(0.0) * 1.01;
    let grid = grid.nudged(&model.singular_moduli(rmax));
    let jc = JacksonPair::build(model)?;
    let nodes = grid.nodes();
    grid.exec()
        .map(grid.radii(), |&r| sample_at(model, r, nodes, Exec::Sequential, &jc))
        .into_iter()
        .collect()
}

/// `|(1/2pi) int log|f| - log|c_l| - N(r, 1/f) + N(r, f)|` with `f ~ c_l z^l` at the origin.
pub fn jensen_residual(model: &MeroModel, r: f64, nodes: usize) -> Result<f64> {
    check_poles_off_circle(model, r)?;
    let (c, _) = model.origin_leading()?;
    let i = circle_mean(r, nodes, Exec::default(), |z| model.ln_abs(z))?;
    let n0 = counting_n(model, r, Target::zero())?;
    let ninf = counting_n(model, r, Target::Infinity)?;
    Ok((i.value - c.norm().ln() - n0 + ninf).abs())
}

pub const CSV_HEADER: &str = "r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err";

/// One line per sample in [`CSV_HEADER`] order, 17 significant digits,
/// `NaN` where a value is not available.
pub fn samples_to_csv(samples: &[NevanlinnaSample]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let f = |x: Option<f64>| format!("{:.16e}", x.unwrap_or(f64::NAN));
    for s in samples {
        let row = [
            f(Some(s.r)),
            f(Some(s.m)),
            f(s.n_zero),
            f(Some(s.n_inf)),
            f(Some(s.t)),
            f(s.ntilde_zero),
            f(s.ntilde_inf),
            f(Some(s.quad_err)),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

const WIND_MIN_NODES: usize = 256;
const WIND_MAX_NODES: usize = 1 << 17;

/// Winding number of `f` around `|z| = r` with the node count that
/// resolves it, or `None` when no count up to the cap does.
fn winding(f: &TruncatedSeries, r: f64) -> Option<(i64, usize)> {
    let mut nodes = WIND_MIN_NODES;
    while nodes <= WIND_MAX_NODES {
        let vals: Vec<Complex64> = (0..nodes)
            .map(|j| f.eval_unchecked(Complex64::from_polar(r, TAU * j as f64 / nodes as f64)))
            .collect();
        if vals.iter().any(|v| v.norm() == 0.0 || !v.re.is_finite()) {
            return None;
        }
        let mut total = 0.0;
        let mut smooth = true;
        for j in 0..nodes {
            let d = (vals[(j + 1) % nodes] / vals[j]).arg();
            if d.abs() > 0.5 {
                smooth = false;
                break;
            }
            total += d;
        }
        if smooth {
            return Some(((total / TAU).round() as i64, nodes));
        }
        nodes *= 2;
    }
    None
}

/// Power sums `sum z_i^p`, `p = 1..=k`, of the zeros inside `|z| = r`.
fn power_sums(f: &TruncatedSeries, df: &TruncatedSeries, r: f64, k: usize, start_nodes: usize) -> Vec<Complex64> {
    let mean = |nodes: usize| -> Vec<Complex64> {
        let mut acc = vec![Complex64::default(); k];
        for j in 0..nodes {
            let z = Complex64::from_polar(r, TAU * j as f64 / nodes as f64);
            let w = z * df.eval_unchecked(z) / f.eval_unchecked(z);
            let mut zp = Complex64::new(1.0, 0.0);
            for a in acc.iter_mut() {
                zp *= z;
                *a += zp * w;
            }
        }
        acc.into_iter().map(|a| a / nodes as f64).collect()
    };
    let mut nodes = start_nodes;
    let mut prev = mean(nodes);
    while nodes < WIND_MAX_NODES {
        nodes *= 2;
        let cur = mean(nodes);
        let scale = r.powi(k as i32).max(1.0) * k as f64;
        let diff = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prev = cur;
        if diff <= 1e-13 * scale {
            break;
        }
    }
    prev
}

/// Roots of the monic polynomial with the given power sums (Newton's identities).
fn roots_from_power_sums(s: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = s.len();
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for n in 1..=k {
        let mut acc = Complex64::default();
        for i in 1..=n {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[n - i] * s[i - 1];
        }
        e.push(acc / n as f64);
    }
    // prod (z - z_i) = sum_n (-1)^n e_n z^{k-n}
    let coeffs: Vec<Complex64> = (0..=k).rev().map(|n| if n % 2 == 0 { e[n] } else { -e[n] }).collect();
    crate::poly::Poly::new(coeffs).roots()
}

fn newton_on_series(f: &TruncatedSeries, df: &TruncatedSeries, z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut fz = f.eval_unchecked(z).norm();
    for _ in 0..40 {
        let d = df.eval_unchecked(z);
        if fz == 0.0 || d.norm() == 0.0 {
            break;
        }
        let cand = z - f.eval_unchecked(z) / d;
        let fc = f.eval_unchecked(cand).norm();
        if !(fc < fz) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

fn derivative_series(f: &TruncatedSeries) -> TruncatedSeries {
    let c: Vec<Complex64> = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * n as f64)
        .collect();
    TruncatedSeries::uncertified(if c.is_empty() { vec![Complex64::default()] } else { c })
}

/// Zeros of an entire series in `|z| <= r`.
///
/// Winding numbers on circles with ratio 1.5 split the disc into annuli;
/// the zeros in each annulus come from contour power sums and are then
/// polished by Newton steps on the series.
pub fn series_zeros(f: &TruncatedSeries, r: f64) -> Result<Vec<(Complex64, u32)>> {
    let safe = f.safe_radius().radius().unwrap_or(0.0);
    if r > safe * (1.0 + 1e-12) {
        return Err(Error::OutsideSafeRadius {
            modulus: r,
            radius: safe,
        });
    }
    let lambda = f
        .coeffs()
        .iter()
        .position(|c| c.norm() != 0.0)
        .ok_or_else(|| Error::InvalidArgument("the zero series has no isolated zeros".into()))?;
    let df = derivative_series(f);
    let wind_near = |rho: f64| -> Result<(f64, i64, usize)> {
        for t in [0.0, 0.013, -0.011, 0.029, -0.027, 0.047] {
            let rr = (rho * (1.0 + t)).min(safe);
            if let Some((w, n)) = winding(f, rr) {
                return Ok((rr, w, n));
            }
        }
        Err(Error::RootFindingFailed(format!(
            "cannot resolve the winding number near r = {rho}"
        )))
    };
    let mut circles = Vec::new();
    let mut rho = r;
    let inner = r * 1e-6;
    while rho > inner {
        circles.push(rho);
        rho /= 1.5;
    }
    circles.reverse();
    let mut out: Vec<(Complex64, u32)> = Vec::new();
    if lambda > 0 {
        out.push((Complex64::default(), lambda as u32));
    }
    let mut prev: Option<(f64, i64, Vec<Complex64>)> = None;
    for &c in &circles {
        let (rr, w, nodes) = wind_near(c)?;
        let inside = (w - lambda as i64).max(0) as usize;
        let sums = if inside > 0 {
            power_sums(f, &df, rr, inside, nodes)
        } else {
            Vec::new()
        };
        let (prev_count, prev_sums) = match &prev {
            Some((_, pw, ps)) => ((*pw - lambda as i64).max(0) as usize, ps.clone()),
            None => (0, Vec::new()),
        };
        if inside < prev_count {
            return Err(Error::RootFindingFailed(format!("winding count decreased at r = {rr}")));
        }
        let k = inside - prev_count;
        if k > 0 {
            // power sums of the annulus zeros up to order k
            let mut ann: Vec<Complex64> = (0..k).map(|p| sums[p]).collect();
            if prev_count > 0 {
                let inner_sums = power_sums_upto(f, &df, prev.as_ref().unwrap().0, k, &prev_sums);
                for (a, b) in ann.iter_mut().zip(inner_sums) {
                    *a -= b;
                }
            }
            for z in roots_from_power_sums(&ann)? {
                out.push((newton_on_series(f, &df, z), 1));
            }
        }
        prev = Some((rr, w, sums));
    }
    let outer = prev.map(|p| p.0).unwrap_or(r);
    // the last circle may sit slightly inside or outside r
    let mut zeros = merge_close(out);
    if outer < r {
        if let Some((w, _)) = winding(f, r) {
            let have: u32 = zeros.iter().map(|z| z.1).sum();
            if w as u32 != have {
                return Err(Error::RootFindingFailed(format!("lost zeros between {outer} and {r}")));
            }
        }
    }
    zeros.retain(|z| z.0.norm() <= r);
    Ok(zeros)
}

fn power_sums_upto(f: &TruncatedSeries, df: &TruncatedSeries, r: f64, k: usize, have: &[Complex64]) -> Vec<Complex64> {
    if have.len() >= k {
        return have[..k].to_vec();
    }
    power_sums(f, df, r, k, WIND_MIN_NODES)
}

fn merge_close(mut pts: Vec<(Complex64, u32)>) -> Vec<(Complex64, u32)> {
    pts.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()));
    let mut out: Vec<(Complex64, u32)> = Vec::new();
    for (z, m) in pts {
        match out
            .iter_mut()
            .find(|(w, _)| (*w - z).norm() <= 1e-7 * w.norm().max(1.0))
        {
            Some(e) => e.1 += m,
            None => out.push((z, m)),
        }
    }
    out
}

/// Number of zeros minus poles inside `|z| = r` for a series model.
pub fn series_winding(f: &TruncatedSeries, r: f64) -> Result<i64> {
    winding(f, r)
        .map(|w| w.0)
        .ok_or_else(|| Error::RootFindingFailed(format!("cannot resolve the winding number at r = {r}")))
}
