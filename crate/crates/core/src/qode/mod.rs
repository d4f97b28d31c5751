//! Series solutions of linear Jackson q-difference equations
//! `D_q^k f + A f = B` with rational coefficients.

mod problem_file;
mod rational;

pub use problem_file::{ProblemFile, RationalSpec};
pub use rational::{RationalFunction, COPRIME_TOL};

use crate::error::{Error, Result};
use crate::qcore::{q_bracket, QParam, TruncatedSeries, ROOT_OF_UNITY_GUARD};
use crate::qoperator::{dqk_closed_form, dqk_series, Sampler};
use num_complex::Complex64;

/// Extra orders kept in the origin expansions of `A` and `B`.
const EXPANSION_MARGIN: usize = 5;
/// Bracket products below this are solved but flagged.
const CONDITIONING_THRESHOLD: f64 = 1e-6;

/// `D_q^k f + A f = B` with initial coefficients `c_0..c_{k-1}`.
#[derive(Debug, Clone)]
pub struct QdeProblem {
    pub k: usize,
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub qp: QParam,
    pub initial: Vec<Complex64>,
}

impl QdeProblem {
    pub fn new(
        k: usize,
        a: RationalFunction,
        b: RationalFunction,
        qp: QParam,
        initial: Vec<Complex64>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("equation order k must be at least 1".into()));
        }
        if initial.len() != k {
            return Err(Error::InvalidArgument(format!(
                "expected {k} initial coefficients, got {}",
                initial.len()
            )));
        }
        Ok(QdeProblem { k, a, b, qp, initial })
    }

    /// Homogeneous problem `D_q^k f + A f = 0`.
    pub fn homogeneous(k: usize, a: RationalFunction, qp: QParam, initial: Vec<Complex64>) -> Result<Self> {
        Self::new(k, a, RationalFunction::zero(), qp, initial)
    }

    pub fn with_initial(&self, initial: Vec<Complex64>) -> Result<Self> {
        Self::new(self.k, self.a.clone(), self.b.clone(), self.qp, initial)
    }
}

/// A coefficient whose bracket product was small but above the guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditioningWarning {
    pub order: usize,
    pub bracket_product: f64,
}

#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub series: TruncatedSeries,
    pub warnings: Vec<ConditioningWarning>,
    /// `|q| < 1` with a nonzero polynomial `A`: the coefficients solve the
    /// recurrence but need not define an entire function.
    pub formal: bool,
}

/// Solves `c_{n+k} prod_{j=1}^{k} [n+j]_q = b_n - sum_m a_m c_{n-m}` for `n = 0..=N-k`.
pub fn solve_series(prob: &QdeProblem, n_order: usize) -> Result<SeriesSolution> {
    let k = prob.k;
    if n_order < k {
        return Err(Error::InvalidArgument(format!(
            "truncation order {n_order} is below the equation order {k}"
        )));
    }
    let expand = n_order + k + EXPANSION_MARGIN;
    let a = prob.a.origin_series(expand)?;
    let b = prob.b.origin_series(expand)?;
    let brackets: Vec<Complex64> = (0..=n_order).map(|n| q_bracket(n, &prob.qp)).collect();
    let mut c = prob.initial.clone();
    c.resize(n_order + 1, Complex64::default());
    let mut warnings = Vec::new();
    for n in 0..=n_order - k {
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 1..=k {
            if brackets[n + j].norm() < ROOT_OF_UNITY_GUARD {
                return Err(Error::BracketUnderflow { order: n + j });
            }
            prod *= brackets[n + j];
        }
        if prod.norm() < CONDITIONING_THRESHOLD {
            warnings.push(ConditioningWarning {
                order: n + k,
                bracket_product: prod.norm(),
            });
        }
        let conv: Complex64 = (0..=n).map(|m| a.coeff(m) * c[n - m]).sum();
        c[n + k] = (b.coeff(n) - conv) / prod;
    }
    let formal = prob.qp.inside_unit_disc() && prob.a.is_polynomial() && !prob.a.is_zero();
    Ok(SeriesSolution {
        series: TruncatedSeries::new(c),
        warnings,
        formal,
    })
}

/// Coefficients of `D_q^k f + A f - B` through order `N - k`, and their largest modulus.
pub fn residual(prob: &QdeProblem, f: &TruncatedSeries) -> Result<(TruncatedSeries, f64)> {
    let n = f.trunc_order();
    if n < prob.k {
        return Err(Error::InvalidArgument(format!(
            "series order {n} is below the equation order {}",
            prob.k
        )));
    }
    let top = n - prob.k;
    let d = dqk_series(f, &prob.qp, prob.k);
    let a = prob.a.origin_series(n)?;
    let b = prob.b.origin_series(n)?;
    let af = a.mul(&TruncatedSeries::uncertified(f.coeffs().to_vec()));
    let coeffs: Vec<Complex64> = (0..=top).map(|i| d.coeff(i) + af.coeff(i) - b.coeff(i)).collect();
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok((TruncatedSeries::uncertified(coeffs), max))
}

/// Residual of the equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResidual {
    pub z: Complex64,
    pub abs: f64,
    /// `abs` over the largest of `|D_q^k f|`, `|A f|`, `|B|`.
    pub rel: f64,
}

/// `|D_q^k f + A f - B|` at each point, with `D_q^k` in closed form.
pub fn verify_pointwise(prob: &QdeProblem, f: &Sampler, points: &[Complex64]) -> Result<Vec<PointResidual>> {
    points
        .iter()
        .map(|&z| {
            let d = dqk_closed_form(f, z, &prob.qp, prob.k)?;
            let af = prob.a.eval(z) * f.eval(z)?;
            let b = prob.b.eval(z);
            let abs = (d + af - b).norm();
            let scale = d.norm().max(af.norm()).max(b.norm()).max(f64::MIN_POSITIVE);
            Ok(PointResidual {
                z,
                abs,
                rel: abs / scale,
            })
        })
        .collect()
}

/// Whether `deg P2 - deg P1 = k` for `A = P1/P2`, the degree relation a
/// polynomial solution of the homogeneous equation must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCondition {
    pub deg_num: usize,
    pub deg_den: usize,
    pub k: usize,
    pub polynomial_admissible: bool,
}

pub fn polynomial_degree_condition(prob: &QdeProblem) -> DegreeCondition {
    let deg_num = prob.a.num().degree();
    let deg_den = prob.a.den().degree();
    DegreeCondition {
        deg_num,
        deg_den,
        k: prob.k,
        polynomial_admissible: !prob.a.is_zero() && deg_den as i64 - deg_num as i64 == prob.k as i64,
    }
}

/// Entire solution of `D_q f = P(z) f(qz)`, `|q| < 1`:
/// `f(0) prod_{j>=0} (1 + (1-q) q^j z P(q^j z))`.
///
/// Factors are taken until `|(1-q) q^j z P(q^j z)| < tol (1 - |q|)`.
pub fn product_solution(
    p: &crate::poly::Poly,
    f0: Complex64,
    qp: &QParam,
    z: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let m = qp.modulus();
    if m >= 1.0 {
        return Err(Error::Domain(format!(
            "the product solution needs |q| < 1, got |q| = {m}"
        )));
    }
    let q = qp.q();
    let mut acc = f0;
    let mut qj = Complex64::new(1.0, 0.0);
    for _ in 0..10_000_000 {
        let w = qj * z;
        let t = (1.0 - q) * w * p.eval(w);
        if t.norm() < tol * (1.0 - m) && (qj.norm() * z.norm()) < 1.0 {
            return Ok(acc);
        }
        acc *= 1.0 + t;
        qj *= q;
    }
    Err(Error::Domain("product solution did not reach tolerance".into()))
}

/// Direct recurrence for `D_q^k f + A(z) f(q^k z) = 0`:
/// `c_{n+k} prod [n+j]_q = -sum_m a_m q^{k(n-m)} c_{n-m}`.
pub fn solve_series_shifted(prob: &QdeProblem, n_order: usize) -> Result<TruncatedSeries> {
    let k = prob.k;
    let a = prob.a.origin_series(n_order + k + EXPANSION_MARGIN)?;
    let qk = prob.qp.pow(k as i64);
    let brackets: Vec<Complex64> = (0..=n_order).map(|n| q_bracket(n, &prob.qp)).collect();
    let mut c = prob.initial.clone();
    c.resize(n_order + 1, Complex64::default());
    for n in 0..=n_order.saturating_sub(k) {
        let prod: Complex64 = (1..=k).map(|j| brackets[n + j]).product();
        if prod.norm() < ROOT_OF_UNITY_GUARD {
            return Err(Error::BracketUnderflow { order: n + k });
        }
        let conv: Complex64 = (0..=n).map(|m| a.coeff(m) * qk.powi((n - m) as i32) * c[n - m]).sum();
        c[n + k] = -conv / prod;
    }
    Ok(TruncatedSeries::new(c))
}

/// Rewrites `D_q^k f + A(z) f(q^k z) = 0` in base `1/q`.
///
/// With `D_q^k f(z) = q^{k(k-1)/2} (D_{1/q}^k f)(q^k z)` and `w = q^k z`
/// the equation becomes `D_{1/q}^k f(w) + q^{-k(k-1)/2} A(q^{-k} w) f(w) = 0`,
/// a problem of the standard form solved by [`solve_series`].
pub fn shifted_to_inverse_base(prob: &QdeProblem) -> Result<QdeProblem> {
    let k = prob.k as i64;
    let inv = prob.qp.inverse();
    let a = prob.a.scale_arg(prob.qp.pow(-k)).scale(prob.qp.pow(-(k * (k - 1) / 2)));
    QdeProblem::new(prob.k, a, prob.b.clone(), inv, prob.initial.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::qcore::q_pochhammer;
    use crate::qspecial::{exp_q, sinq_cosq};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn konst(x: f64) -> RationalFunction {
        RationalFunction::constant(c(x))
    }

    /// `A = -[5]_q z^4 / (z^5 + 1)` for the first-order equation of `z^5 + 1`.
    fn quintic_first_order(qp: QParam) -> QdeProblem {
        let q = qp.q();
        let mut num = vec![c(0.0); 5];
        num[4] = -(q.powi(5) - 1.0) / (q - 1.0);
        let a = RationalFunction::from_polys(Poly::new(num), Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        QdeProblem::homogeneous(1, a, qp, vec![c(1.0)]).unwrap()
    }

    #[test]
    fn exp_q_problem() {
        let qp = QParam::real(0.5).unwrap();
        let prob = QdeProblem::homogeneous(1, konst(-1.0), qp, vec![c(1.0)]).unwrap();
        let sol = solve_series(&prob, 30).unwrap();
        assert!((sol.series.coeff(2) - c(2.0 / 3.0)).norm() < 1e-15);
        for n in 0..=30 {
            let expect = c(0.5f64.powi(n as i32)) / q_pochhammer(qp.q(), &qp, n);
            assert!((sol.series.coeff(n) - expect).norm() <= 1e-12 * expect.norm());
        }
        assert!(sol.formal);
        let (_, r) = residual(&prob, &exp_q(&qp, 30)).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn sine_and_cosine() {
        let qp = QParam::real(2.0).unwrap();
        let (s, co) = sinq_cosq(&qp, 30);
        let prob = QdeProblem::homogeneous(2, konst(1.0), qp, vec![c(0.0), c(1.0)]).unwrap();
        let fs = solve_series(&prob, 30).unwrap().series;
        let fc = solve_series(&prob.with_initial(vec![c(1.0), c(0.0)]).unwrap(), 30)
            .unwrap()
            .series;
        for n in 0..=30 {
            assert!((fs.coeff(n) - s.coeff(n)).norm() <= 1e-12 * s.coeff(n).norm().max(1e-300));
            assert!((fc.coeff(n) - co.coeff(n)).norm() <= 1e-12 * co.coeff(n).norm().max(1e-300));
        }
    }

    #[test]
    fn quintic_is_recovered() {
        for qv in [2.0, 0.5] {
            let prob = quintic_first_order(QParam::real(qv).unwrap());
            let f = solve_series(&prob, 20).unwrap().series;
            for n in 0..=20 {
                let expect = if n == 0 || n == 5 { 1.0 } else { 0.0 };
                assert!((f.coeff(n) - c(expect)).norm() < 1e-12, "q={qv} n={n} {}", f.coeff(n));
            }
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let qp = QParam::real(0.5).unwrap();
        let prob = QdeProblem::homogeneous(1, konst(-1.0), qp, vec![c(1.0)]).unwrap();
        let f = solve_series(&prob, 20).unwrap().series;
        let mut coeffs = f.coeffs().to_vec();
        coeffs[7] += 1e-3;
        let (_, r) = residual(&prob, &TruncatedSeries::new(coeffs)).unwrap();
        assert!(r >= 1e-4);
    }

    #[test]
    fn errors() {
        let qp = QParam::real(2.0).unwrap();
        let pole = RationalFunction::from_polys(Poly::constant(c(1.0)), Poly::from_real(&[0.0, 1.0])).unwrap();
        let prob = QdeProblem::homogeneous(1, pole, qp, vec![c(1.0)]).unwrap();
        assert_eq!(solve_series(&prob, 10).unwrap_err(), Error::CoefficientPoleAtOrigin);
        assert!(QdeProblem::homogeneous(2, konst(1.0), qp, vec![c(1.0)]).is_err());
    }

    #[test]
    fn degree_condition() {
        let first = quintic_first_order(QParam::real(2.0).unwrap());
        let d = polynomial_degree_condition(&first);
        assert_eq!((d.deg_num, d.deg_den, d.polynomial_admissible), (4, 5, true));
        let qp = QParam::real(2.0).unwrap();
        let a2 = RationalFunction::from_polys(
            Poly::new(vec![c(0.0), c(0.0), c(0.0), c(-31.0 * 15.0)]),
            Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        let second = QdeProblem::homogeneous(2, a2, qp, vec![c(1.0), c(0.0)]).unwrap();
        let d = polynomial_degree_condition(&second);
        assert_eq!((d.deg_num, d.deg_den, d.polynomial_admissible), (3, 5, true));
        let poly_a = QdeProblem::homogeneous(2, konst(3.0), QParam::real(2.0).unwrap(), vec![c(1.0), c(0.0)]).unwrap();
        assert!(!polynomial_degree_condition(&poly_a).polynomial_admissible);
    }

    #[test]
    fn product_solution_matches_exp_inverse_q() {
        let qp = QParam::real(0.5).unwrap();
        let a = c(0.7);
        let p = Poly::constant(a);
        let e = exp_q(&qp.inverse(), 60);
        for z in [c(0.0), c(1.3), Complex64::new(-2.0, 0.5)] {
            let v = product_solution(&p, c(1.0), &qp, z, 1e-17).unwrap();
            let s = e.eval(a * z).unwrap();
            assert!((v - s).norm() < 1e-9 * s.norm(), "{v} {s}");
        }
    }

    #[test]
    fn shifted_equation_two_ways() {
        let qp = QParam::real(0.5).unwrap();
        let a = RationalFunction::polynomial(Poly::from_real(&[1.0, -0.5])).unwrap();
        for k in 1..=3 {
            let init: Vec<Complex64> = (0..k).map(|j| c(1.0 + j as f64)).collect();
            let prob = QdeProblem::homogeneous(k, a.clone(), qp, init).unwrap();
            let direct = solve_series_shifted(&prob, 25).unwrap();
            let via = solve_series(&shifted_to_inverse_base(&prob).unwrap(), 25)
                .unwrap()
                .series;
            for n in 0..=25 {
                let scale = direct.coeff(n).norm().max(1e-300);
                assert!((direct.coeff(n) - via.coeff(n)).norm() <= 1e-10 * scale, "k={k} n={n}");
            }
        }
    }
}
