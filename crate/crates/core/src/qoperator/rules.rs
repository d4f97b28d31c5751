//! Pointwise residuals of the Jackson calculus rules.
//!
//! Each function returns `|lhs - rhs| / max(1, |lhs|, |rhs|)`; a value near
//! machine precision means the rule holds at that point.

use super::{dq_sample, jackson_integral, Sampler};
use crate::error::Result;
use crate::qcore::QParam;
use num_complex::Complex64;

fn rel(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0)
}

fn product(f: &Sampler, g: &Sampler) -> Sampler {
    let (f, g) = (f.clone(), g.clone());
    Sampler::new(move |z| f.eval(z).unwrap_or(z * f64::NAN) * g.eval(z).unwrap_or(z * f64::NAN))
}

/// Both forms of the product rule:
/// `D(fg)(z) = f(qz) Dg(z) + g(z) Df(z) = f(z) Dg(z) + g(qz) Df(z)`.
pub fn product_rule(f: &Sampler, g: &Sampler, z: Complex64, qp: &QParam) -> Result<f64> {
    let q = qp.q();
    let lhs = dq_sample(&product(f, g), z, qp)?;
    let (df, dg) = (dq_sample(f, z, qp)?, dq_sample(g, z, qp)?);
    let r1 = f.eval(q * z)? * dg + g.eval(z)? * df;
    let r2 = f.eval(z)? * dg + g.eval(q * z)? * df;
    Ok(rel(lhs, r1).max(rel(lhs, r2)))
}

/// `D(f/g)(z) = (g(z) Df(z) - f(z) Dg(z)) / (g(z) g(qz))`.
pub fn quotient_rule(f: &Sampler, g: &Sampler, z: Complex64, qp: &QParam) -> Result<f64> {
    let q = qp.q();
    let (fc, gc) = (f.clone(), g.clone());
    let ratio = Sampler::new(move |w| fc.eval(w).unwrap_or(w * f64::NAN) / gc.eval(w).unwrap_or(w * f64::NAN));
    let lhs = dq_sample(&ratio, z, qp)?;
    let (gz, gqz) = (g.eval(z)?, g.eval(q * z)?);
    let rhs = (gz * dq_sample(f, z, qp)? - f.eval(z)? * dq_sample(g, z, qp)?) / (gz * gqz);
    Ok(rel(lhs, rhs))
}

/// Chain rule on the image lattice:
/// `D(f o g)(z) = [(f(g(qz)) - f(g(z))) / (g(qz) - g(z))] Dg(z)`.
///
/// Returns `None` where `g(qz) = g(z)`, since the divided difference is undefined there.
pub fn chain_rule(f: &Sampler, g: &Sampler, z: Complex64, qp: &QParam) -> Result<Option<f64>> {
    let q = qp.q();
    let (gz, gqz) = (g.eval(z)?, g.eval(q * z)?);
    if (gqz - gz).norm() <= 1e-12 * gz.norm().max(1.0) {
        return Ok(None);
    }
    let (fc, gc) = (f.clone(), g.clone());
    let comp = Sampler::new(move |w| {
        gc.eval(w)
            .and_then(|v| fc.eval(v))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    });
    let lhs = dq_sample(&comp, z, qp)?;
    let dd = (f.eval(gqz)? - f.eval(gz)?) / (gqz - gz);
    Ok(Some(rel(lhs, dd * dq_sample(g, z, qp)?)))
}

/// Inverse rule for `y = z^n` with inverse `y^{1/n}` on the image lattice:
/// the divided difference of the inverse over `{y(z), y(qz)}` equals `1 / D_q y(z)`.
pub fn inverse_rule_monomial(n: u32, z: Complex64, qp: &QParam) -> Result<f64> {
    let q = qp.q();
    let y = Sampler::new(move |w| w.powu(n));
    let (yz, yqz) = (z.powu(n), (q * z).powu(n));
    // principal roots can land on another branch, so pull the preimages back
    // onto z and qz directly
    let inv = |v: Complex64, target: Complex64| -> Complex64 {
        let base = v.powf(1.0 / n as f64);
        (0..n.max(1))
            .map(|k| base * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
            .unwrap_or(base)
    };
    let lhs = (inv(yqz, q * z) - inv(yz, z)) / (yqz - yz);
    Ok(rel(lhs, dq_sample(&y, z, qp)?.inv()))
}

/// `D_q (int_0^z f) = f(z)` and `int_0^z D_q f = f(z) - f(0)`, for `|q| < 1`.
pub fn integral_rules(f: &Sampler, z: Complex64, qp: &QParam, tol: f64) -> Result<(f64, f64)> {
    let zero = Complex64::default();
    let (fc, qc) = (f.clone(), *qp);
    let big_f =
        Sampler::new(move |w| jackson_integral(&fc, zero, w, &qc, tol).unwrap_or(Complex64::new(f64::NAN, f64::NAN)));
    let r1 = rel(dq_sample(&big_f, z, qp)?, f.eval(z)?);
    let (fc, qc) = (f.clone(), *qp);
    // D_q f is continuous at 0 for analytic f, so the removable point takes the limit
    let f0 = f.eval(zero)?;
    let df = Sampler::new(move |w| {
        if w.norm() == 0.0 {
            let h = Complex64::new(1e-6, 0.0);
            dq_sample(&fc, h, &qc).unwrap_or(w * f64::NAN)
        } else {
            dq_sample(&fc, w, &qc).unwrap_or(w * f64::NAN)
        }
    });
    let r2 = rel(jackson_integral(&df, zero, z, qp, tol)?, f.eval(z)? - f0);
    Ok((r1, r2))
}

/// Integration by parts on `[0, 1]`:
/// `int_0^1 f Dg = f(1)g(1) - f(0)g(0) - int_0^1 g(qz) Df(z)`.
pub fn integration_by_parts(f: &Sampler, g: &Sampler, qp: &QParam, tol: f64) -> Result<f64> {
    let zero = Complex64::default();
    let one = Complex64::new(1.0, 0.0);
    let q = qp.q();
    let (fc, gc, qc) = (f.clone(), g.clone(), *qp);
    let lhs_int = Sampler::new(move |w| {
        let d = dq_sample(&gc, w, &qc).unwrap_or(w * f64::NAN);
        fc.eval(w).unwrap_or(w * f64::NAN) * d
    });
    let (fc, gc, qc) = (f.clone(), g.clone(), *qp);
    let rhs_int = Sampler::new(move |w| {
        let d = dq_sample(&fc, w, &qc).unwrap_or(w * f64::NAN);
        gc.eval(q * w).unwrap_or(w * f64::NAN) * d
    });
    let lhs = jackson_integral(&lhs_int, zero, one, qp, tol)?;
    let rhs =
        f.eval(one)? * g.eval(one)? - f.eval(zero)? * g.eval(zero)? - jackson_integral(&rhs_int, zero, one, qp, tol)?;
    Ok(rel(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> Sampler {
        Sampler::polynomial(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn rules_hold_for_simple_polynomials() {
        let qp = QParam::real(0.6).unwrap();
        let f = poly(&[1.0, -2.0, 0.5, 0.25]);
        let g = poly(&[2.0, 1.0, 1.0]);
        let z = Complex64::new(0.7, 0.3);
        assert!(product_rule(&f, &g, z, &qp).unwrap() < 1e-12);
        assert!(quotient_rule(&f, &g, z, &qp).unwrap() < 1e-12);
        assert!(chain_rule(&f, &g, z, &qp).unwrap().unwrap() < 1e-12);
        assert!(inverse_rule_monomial(3, z, &qp).unwrap() < 1e-12);
        let (a, b) = integral_rules(&f, z, &qp, 1e-15).unwrap();
        assert!(a < 1e-10 && b < 1e-10, "{a} {b}");
        assert!(integration_by_parts(&f, &g, &qp, 1e-15).unwrap() < 1e-12);
    }

    #[test]
    fn chain_rule_skips_degenerate_points() {
        let qp = QParam::real(-1.5).unwrap();
        let g = poly(&[0.0, 0.0, 1.0]);
        let k = poly(&[3.0]);
        assert!(chain_rule(&g, &k, Complex64::new(1.0, 0.0), &qp).unwrap().is_none());
        assert!(chain_rule(&k, &g, Complex64::new(1.0, 0.0), &qp).unwrap().is_some());
    }
}
