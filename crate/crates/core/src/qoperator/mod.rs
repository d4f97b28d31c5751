//! Jackson difference operators, the Jackson integral and the Jackson
//! q-Casorati determinant.
//!
//! `D_q f(z) = (f(qz) - f(z)) / ((q - 1) z)`. On series it acts on
//! monomials by `D_q z^n = [n]_q z^{n-1}`; on samplers it is the difference
//! quotient, which is undefined at `z = 0`.

pub mod rules;
mod sampler;

pub use sampler::Sampler;

use crate::error::{Error, Result};
use crate::qcore::{q_binomial, q_bracket, QParam, TruncatedSeries};
use num_complex::Complex64;

/// Number of orbit samples used for the sup-norm estimate of the Jackson integral.
const ORBIT_SUP_SAMPLES: usize = 200;
const MAX_ORBIT_TERMS: usize = 1_000_000;

/// `D_q f` on coefficients: `b_n = [n+1]_q c_{n+1}`, truncated at `N - 1`.
///
/// A series of order 0 maps to the zero series of order 0.
pub fn dq_series(f: &TruncatedSeries, qp: &QParam) -> TruncatedSeries {
    dqk_series(f, qp, 1)
}

/// `D_q^k f` on coefficients: `b_n = c_{n+k} prod_{j=1}^{k} [n+j]_q`.
pub fn dqk_series(f: &TruncatedSeries, qp: &QParam, k: usize) -> TruncatedSeries {
    let n_top = f.trunc_order();
    if k == 0 {
        return f.clone();
    }
    if n_top < k {
        return TruncatedSeries::zero(0);
    }
    let brackets: Vec<Complex64> = (0..=n_top).map(|n| q_bracket(n, qp)).collect();
    let coeffs: Vec<Complex64> = (0..=n_top - k)
        .map(|n| {
            let factor: Complex64 = (1..=k).map(|j| brackets[n + j]).product();
            f.coeff(n + k) * factor
        })
        .collect();
    if f.is_polynomial() {
        TruncatedSeries::polynomial(coeffs)
    } else {
        TruncatedSeries::new(coeffs)
    }
}

/// Difference quotient `(f(qz) - f(z)) / ((q - 1) z)` for `z != 0`.
pub fn dq_sample(f: &Sampler, z: Complex64, qp: &QParam) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::OriginSingular);
    }
    let q = qp.q();
    Ok((f.eval(q * z)? - f.eval(z)?) / ((q - 1.0) * z))
}

/// `D_q^k f(z)` via the alternating q-binomial sum
/// `(q-1)^{-k} z^{-k} q^{-k(k-1)/2} sum_j (-1)^j [k,j]_q q^{j(j-1)/2} f(q^{k-j} z)`.
pub fn dqk_closed_form(f: &Sampler, z: Complex64, qp: &QParam, k: usize) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::OriginSingular);
    }
    let values = (0..=k)
        .map(|j| f.eval(qp.pow((k - j) as i64) * z))
        .collect::<Result<Vec<_>>>()?;
    closed_form_from_orbit(&values, z, qp)
}

/// Closed form given `values[j] = f(q^{k-j} z)`, `j = 0..=k`.
pub(crate) fn closed_form_from_orbit(values: &[Complex64], z: Complex64, qp: &QParam) -> Result<Complex64> {
    let k = values.len() - 1;
    let q = qp.q();
    let mut sum = Complex64::default();
    for (j, v) in values.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let tri = q.powi((j * j.saturating_sub(1) / 2) as i32);
        sum += sign * q_binomial(k as i64, j as i64, qp)? * tri * v;
    }
    let pre = ((q - 1.0) * z).powi(-(k as i32)) * q.powi(-((k * k.saturating_sub(1) / 2) as i32));
    Ok(pre * sum)
}

/// Jackson integral `(z - a)(1 - q) sum_{j>=0} q^j f(a + q^j (z - a))`, `|q| < 1`.
///
/// The sum stops once `|q|^j S |1-q| / (1-|q|) < tol`, where `S` is the
/// largest `|f|` among the first 200 orbit points, so the truncation error
/// is at most `tol |z - a|` when `S` bounds `f` on the orbit.
pub fn jackson_integral(f: &Sampler, a: Complex64, z: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    let qm = qp.modulus();
    if qm >= 1.0 {
        return Err(Error::Domain(format!(
            "the Jackson integral needs |q| < 1, got |q| = {qm}"
        )));
    }
    let q = qp.q();
    let d = z - a;
    let mut orbit = Vec::with_capacity(ORBIT_SUP_SAMPLES);
    let mut qj = Complex64::new(1.0, 0.0);
    for _ in 0..ORBIT_SUP_SAMPLES {
        let v = f.eval(a + qj * d)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonconvergentSample(format!(
                "non-finite value at {}",
                a + qj * d
            )));
        }
        orbit.push(v);
        qj *= q;
    }
    let sup = orbit.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let weighted: Vec<f64> = orbit
        .iter()
        .enumerate()
        .map(|(j, v)| qm.powi(j as i32) * v.norm())
        .collect();
    let head = weighted[..ORBIT_SUP_SAMPLES / 2].iter().cloned().fold(0.0, f64::max);
    let tail = weighted[ORBIT_SUP_SAMPLES / 2..].iter().cloned().fold(0.0, f64::max);
    let gain = (1.0 - q).norm() / (1.0 - qm);
    let needs_more = sup * gain * qm.powi(ORBIT_SUP_SAMPLES as i32) >= tol;
    if needs_more && head > 0.0 && tail >= 0.5 * head {
        return Err(Error::NonconvergentSample(format!(
            "weighted orbit terms stall near {tail:e}"
        )));
    }
    let mut sum = Complex64::default();
    let mut qj = Complex64::new(1.0, 0.0);
    for j in 0..MAX_ORBIT_TERMS {
        if qm.powi(j as i32) * sup * gain < tol {
            return Ok(d * (1.0 - q) * sum);
        }
        let v = match orbit.get(j) {
            Some(v) => *v,
            None => f.eval(a + qj * d)?,
        };
        sum += qj * v;
        qj *= q;
    }
    Err(Error::NonconvergentSample(format!(
        "tolerance not reached after {MAX_ORBIT_TERMS} orbit terms"
    )))
}

/// An operand of the Casorati determinant.
#[derive(Debug, Clone)]
pub enum Operand {
    Series(TruncatedSeries),
    Sampled(Sampler),
}

impl Operand {
    fn to_sampler(&self) -> Sampler {
        match self {
            Operand::Series(s) => Sampler::from_series(s),
            Operand::Sampled(s) => s.clone(),
        }
    }
}

/// Two functions sharing a base `q`.
#[derive(Debug, Clone)]
pub struct CasoratiPair {
    pub f1: Operand,
    pub f2: Operand,
    pub qp: QParam,
}

impl CasoratiPair {
    pub fn series(f1: TruncatedSeries, f2: TruncatedSeries, qp: QParam) -> Self {
        CasoratiPair {
            f1: Operand::Series(f1),
            f2: Operand::Series(f2),
            qp,
        }
    }

    pub fn sampled(f1: Sampler, f2: Sampler, qp: QParam) -> Self {
        CasoratiPair {
            f1: Operand::Sampled(f1),
            f2: Operand::Sampled(f2),
            qp,
        }
    }
}

/// `C_J(f1, f2) = f1 D_q f2 - f2 D_q f1`.
///
/// Two series give a series truncated at `N - 1`; any sampled operand
/// gives a sampler that, like every sampled `D_q`, rejects `z = 0`.
pub fn casorati(pair: &CasoratiPair) -> Result<Operand> {
    for f in [&pair.f1, &pair.f2] {
        if let Operand::Series(s) = f {
            if s.coeffs()[1..].iter().all(|c| c.norm() == 0.0) {
                return Err(Error::InvalidArgument("Casorati operands must be nonconstant".into()));
            }
        }
    }
    match (&pair.f1, &pair.f2) {
        (Operand::Series(f1), Operand::Series(f2)) => Ok(Operand::Series(casorati_series(f1, f2, &pair.qp))),
        _ => {
            let f1 = pair.f1.to_sampler();
            let f2 = pair.f2.to_sampler();
            let qp = pair.qp;
            let mut domain = [f1.domain_radius(), f2.domain_radius()]
                .into_iter()
                .flatten()
                .fold(f64::INFINITY, f64::min);
            // D_q reads f(qz), so the usable disc shrinks when |q| > 1
            domain /= qp.modulus().max(1.0);
            let c = Sampler::new(move |z| {
                let d1 = dq_sample(&f1, z, &qp);
                let d2 = dq_sample(&f2, z, &qp);
                match (d1, d2, f1.eval(z), f2.eval(z)) {
                    (Ok(d1), Ok(d2), Ok(v1), Ok(v2)) => v1 * d2 - v2 * d1,
                    _ => Complex64::new(f64::NAN, f64::NAN),
                }
            });
            Ok(Operand::Sampled(if domain.is_finite() {
                c.with_domain_radius(domain)
            } else {
                c
            }))
        }
    }
}

pub fn casorati_series(f1: &TruncatedSeries, f2: &TruncatedSeries, qp: &QParam) -> TruncatedSeries {
    let d1 = dq_series(f1, qp);
    let d2 = dq_series(f2, qp);
    &f1.mul(&d2) - &f2.mul(&d1)
}

/// True when every coefficient of `D_q f` is below `tol max(1, max |c_n|)`.
pub fn kernel_check(f: &TruncatedSeries, qp: &QParam, tol: f64) -> bool {
    let scale = f.max_abs().max(1.0);
    dq_series(f, qp).coeffs().iter().all(|c| c.norm() < tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::q_factorial;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constants_are_in_the_kernel() {
        let qp = QParam::real(2.0).unwrap();
        let f = TruncatedSeries::constant(c(3.5), 6);
        assert!(dq_series(&f, &qp).coeffs().iter().all(|b| b.norm() == 0.0));
        assert!(kernel_check(&f, &qp, 1e-12));
        assert!(!kernel_check(&TruncatedSeries::from_real(&[0.0, 1.0]), &qp, 1e-12));
    }

    #[test]
    fn cube_at_q_two() {
        let qp = QParam::real(2.0).unwrap();
        let f = TruncatedSeries::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(dq_series(&f, &qp).coeffs(), &[c(0.0), c(0.0), c(7.0)]);
    }

    #[test]
    fn exp_q_is_a_fixed_point() {
        let qp = QParam::real(0.5).unwrap();
        let e = TruncatedSeries::new((0..=30).map(|n| q_factorial(n, &qp).inv()).collect());
        let d = dq_series(&e, &qp);
        for n in 0..30 {
            assert!((d.coeff(n) - e.coeff(n)).norm() <= 1e-15 * e.coeff(n).norm());
        }
    }

    #[test]
    fn sample_values() {
        let qp = QParam::real(2.0).unwrap();
        let id = Sampler::new(|z| z);
        assert!((dq_sample(&id, Complex64::new(0.3, -2.0), &qp).unwrap() - 1.0).norm() < 1e-15);
        let p = Sampler::new(|z| z.powi(5) + 1.0);
        assert_eq!(dq_sample(&p, c(1.0), &qp).unwrap(), c(31.0));
        let k = Sampler::new(|_| c(4.0));
        assert_eq!(dq_sample(&k, c(1.5), &qp).unwrap(), c(0.0));
        assert_eq!(dq_sample(&id, c(0.0), &qp), Err(Error::OriginSingular));
    }

    #[test]
    fn closed_form_k1_is_the_quotient() {
        let qp = QParam::new(Complex64::new(0.4, 0.7)).unwrap();
        let f = Sampler::new(|z| z.exp() * z);
        let z = Complex64::new(0.8, -0.1);
        let a = dqk_closed_form(&f, z, &qp, 1).unwrap();
        let b = dq_sample(&f, z, &qp).unwrap();
        assert!((a - b).norm() < 1e-13 * b.norm());
    }

    #[test]
    fn closed_form_annihilates_low_degree() {
        let qp = QParam::real(2.0).unwrap();
        let p = Sampler::polynomial(vec![c(1.0), c(-2.0), c(0.5)]);
        let z = Complex64::new(0.7, 0.2);
        let scale = (0..=3)
            .map(|j| p.eval(qp.pow(j) * z).unwrap().norm())
            .fold(0.0, f64::max);
        assert!(dqk_closed_form(&p, z, &qp, 3).unwrap().norm() < 1e-10 * scale);
    }

    #[test]
    fn jackson_integral_of_one_and_identity() {
        let qp = QParam::real(0.5).unwrap();
        let z = Complex64::new(1.3, -0.4);
        let one = Sampler::new(|_| c(1.0));
        let v = jackson_integral(&one, c(0.0), z, &qp, 1e-15).unwrap();
        assert!((v - z).norm() < 1e-14);
        let id = Sampler::new(|t| t);
        let v = jackson_integral(&id, c(0.0), z, &qp, 1e-15).unwrap();
        let expect = z * z / q_bracket(2, &qp);
        assert!((v - expect).norm() < 1e-14);
        assert!(jackson_integral(&one, c(0.0), z, &QParam::real(2.0).unwrap(), 1e-12).is_err());
    }

    #[test]
    fn jackson_integral_detects_pole_at_the_base_point() {
        let qp = QParam::real(0.5).unwrap();
        let f = Sampler::new(|t| t.inv());
        assert!(matches!(
            jackson_integral(&f, c(0.0), c(1.0), &qp, 1e-12),
            Err(Error::NonconvergentSample(_))
        ));
    }

    #[test]
    fn casorati_trivial_cases() {
        let qp = QParam::real(2.0).unwrap();
        let one = TruncatedSeries::from_real(&[1.0, 0.0, 0.0]);
        let z = TruncatedSeries::from_real(&[0.0, 1.0, 0.0]);
        assert!(casorati(&CasoratiPair::series(one, z.clone(), qp)).is_err());
        let c1 = casorati_series(&TruncatedSeries::from_real(&[1.0, 0.0, 0.0]), &z, &qp);
        assert_eq!(c1.coeffs(), &[c(1.0), c(0.0)]);
        let f = TruncatedSeries::from_real(&[1.0, 2.0, -1.0, 4.0]);
        let g = f.scale(c(-3.0));
        match casorati(&CasoratiPair::series(f, g, qp)).unwrap() {
            Operand::Series(s) => assert!(s.max_abs() < 1e-12),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sampled_casorati_matches_series() {
        let qp = QParam::real(0.5).unwrap();
        let f = TruncatedSeries::from_real(&[1.0, 2.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0]);
        let g = TruncatedSeries::from_real(&[0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let series = casorati_series(&f, &g, &qp);
        let pair = CasoratiPair::sampled(Sampler::from_series(&f), Sampler::from_series(&g), qp);
        let Operand::Sampled(s) = casorati(&pair).unwrap() else {
            unreachable!()
        };
        let z = Complex64::new(0.4, 0.9);
        let a = s.eval(z).unwrap();
        let b = series.eval(z).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }
}
