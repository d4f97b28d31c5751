//! q-special functions in series and product form, and the basic
//! hypergeometric series `_r phi_s`.

use crate::error::{Error, Result};
use crate::qcore::{q_factorial, q_pochhammer_inf, QParam, TruncatedSeries, ROOT_OF_UNITY_GUARD};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters of `_r phi_s(alpha; beta; q, z)`.
#[derive(Debug, Clone)]
pub struct PhiParams {
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
    pub qp: QParam,
}

/// Coefficients of `_r phi_s` in `z` up to order `n`:
/// `t_j = prod (alpha_i;q)_j / prod (beta_i;q)_j [(-1)^j q^{j(j-1)/2}]^{1+s-r} / (q;q)_j`.
///
/// Built through the term ratio `t_{j+1}/t_j`, which avoids the overflow of
/// the separate Pochhammer products.
pub fn phi_rs(params: &PhiParams, n: usize) -> Result<TruncatedSeries> {
    let q = params.qp.q();
    let excess = 1 + params.beta.len() as i32 - params.alpha.len() as i32;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = ONE;
    let mut qj = ONE;
    coeffs.push(t);
    for j in 0..n {
        let mut num: Complex64 = params.alpha.iter().map(|a| ONE - a * qj).product();
        let mut den = ONE;
        for b in &params.beta {
            let f = ONE - b * qj;
            if f.norm() < ROOT_OF_UNITY_GUARD {
                return Err(Error::DenominatorPochhammerZero { order: j + 1 });
            }
            den *= f;
        }
        let qq = ONE - qj * q;
        if qq.norm() < ROOT_OF_UNITY_GUARD {
            return Err(Error::DenominatorPochhammerZero { order: j + 1 });
        }
        den *= qq;
        num *= (-qj).powi(excess);
        t = t * num / den;
        coeffs.push(t);
        qj *= q;
    }
    Ok(TruncatedSeries::new(coeffs))
}

/// `exp_q(z) = sum_{n>=0} z^n / [n]_q!`, the solution of `D_q f = f` with `f(0) = 1`.
pub fn exp_q(qp: &QParam, n: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = ONE;
    coeffs.push(ONE);
    for k in 1..=n {
        t = t / crate::qcore::q_bracket(k, qp);
        coeffs.push(t);
    }
    TruncatedSeries::new(coeffs)
}

/// `etilde_q(z) = sum z^n / (q;q)_n`.
pub fn etilde_q(qp: &QParam, n: usize) -> TruncatedSeries {
    let q = qp.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = ONE;
    let mut qk = ONE;
    coeffs.push(ONE);
    for _ in 1..=n {
        qk *= q;
        t = t * ONE / (ONE - qk);
        coeffs.push(t);
    }
    TruncatedSeries::new(coeffs)
}

/// `E_q(z) = sum q^{n(n-1)/2} z^n / (q;q)_n`.
#[allow(non_snake_case)]
pub fn E_q(qp: &QParam, n: usize) -> TruncatedSeries {
    let q = qp.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = ONE;
    let mut qk = ONE;
    coeffs.push(ONE);
    for _ in 1..=n {
        // t_{k+1}/t_k = q^k / (1 - q^{k+1})
        let ratio = qk / (ONE - qk * q);
        t *= ratio;
        qk *= q;
        coeffs.push(t);
    }
    TruncatedSeries::new(coeffs)
}

/// `(sin_q, cos_q)` from `exp_q(±iz)`.
pub fn sinq_cosq(qp: &QParam, n: usize) -> (TruncatedSeries, TruncatedSeries) {
    let e = exp_q(qp, n);
    let i = Complex64::new(0.0, 1.0);
    let ep = e.scale_arg(i);
    let em = e.scale_arg(-i);
    let cos = (&ep + &em).scale(Complex64::new(0.5, 0.0));
    let sin = (&ep - &em).scale(Complex64::new(0.0, -0.5));
    // the odd/even split is exact; clear rounding residue in the vanishing half
    let clean = |s: TruncatedSeries, parity: usize| {
        let c: Vec<Complex64> = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == parity { *c } else { Complex64::default() })
            .collect();
        TruncatedSeries::new(c)
    };
    (clean(sin, 1), clean(cos, 0))
}

/// Multiplicity of the `n`-th point of a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplicity {
    Constant(u32),
    /// `base + step n`
    Linear {
        base: u32,
        step: u32,
    },
}

impl Multiplicity {
    pub fn at(&self, n: usize) -> u32 {
        match *self {
            Multiplicity::Constant(m) => m,
            Multiplicity::Linear { base, step } => base + step * n as u32,
        }
    }
}

/// The geometric point set `{first ratio^n : n >= 0}` with multiplicities.
/// `|ratio| > 1`, so moduli increase without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub first: Complex64,
    pub ratio: Complex64,
    pub multiplicity: Multiplicity,
}

impl Lattice {
    pub fn simple(first: Complex64, ratio: Complex64) -> Self {
        Lattice {
            first,
            ratio,
            multiplicity: Multiplicity::Constant(1),
        }
    }

    /// Points with modulus at most `r`, with their multiplicities.
    pub fn points_within(&self, r: f64) -> Vec<(Complex64, u32)> {
        let mut out = Vec::new();
        let mut p = self.first;
        let mut n = 0;
        while p.norm() <= r && n < 100_000 {
            out.push((p, self.multiplicity.at(n)));
            p *= self.ratio;
            n += 1;
        }
        out
    }
}

fn require_modulus(qp: &QParam, above_one: bool, what: &str) -> Result<()> {
    if qp.inside_unit_disc() == above_one {
        let need = if above_one { "|q| > 1" } else { "|q| < 1" };
        return Err(Error::Domain(format!(
            "{what} needs {need}, got |q| = {}",
            qp.modulus()
        )));
    }
    Ok(())
}

/// `etilde_q(z) = prod_{n>=1} (1 - q^{-n} z)` for `|q| > 1`.
pub fn etilde_product(z: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    require_modulus(qp, true, "the etilde_q product")?;
    let inv = qp.inverse();
    q_pochhammer_inf(z * inv.q(), &inv, tol)
}

/// Zeros `{q^n : n >= 1}` of `etilde_q`, `|q| > 1`.
pub fn etilde_zero_lattice(qp: &QParam) -> Result<Lattice> {
    require_modulus(qp, true, "the etilde_q product")?;
    Ok(Lattice::simple(qp.q(), qp.q()))
}

/// `E_q(z) = (-z; q)_inf = prod_{n>=0} (1 + q^n z)` for `|q| < 1`.
#[allow(non_snake_case)]
pub fn E_q_product(z: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    require_modulus(qp, false, "the E_q product")?;
    q_pochhammer_inf(-z, qp, tol)
}

/// Zeros `{-q^{-n} : n >= 0}` of `E_q`, `|q| < 1`.
#[allow(non_snake_case)]
pub fn E_q_zero_lattice(qp: &QParam) -> Result<Lattice> {
    require_modulus(qp, false, "the E_q product")?;
    Ok(Lattice::simple(-ONE, qp.inverse().q()))
}

/// `sum_{n>=0} ln(1 - a p^n)` for `|p| < 1`: a logarithm of `(a; p)_inf`
/// that stays finite where the product itself overflows.
pub fn ln_pochhammer_inf(a: Complex64, p: Complex64, tol: f64) -> Complex64 {
    let m = p.norm();
    let mut s = Complex64::default();
    let mut ap = a;
    let mut n = 0;
    while ap.norm() >= tol * (1.0 - m) && n < 10_000_000 {
        s += (ONE - ap).ln();
        ap *= p;
        n += 1;
    }
    s
}

/// Natural log of `etilde_q` through its product, `|q| > 1`.
pub fn etilde_product_ln(z: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    require_modulus(qp, true, "the etilde_q product")?;
    let p = qp.inverse().q();
    Ok(ln_pochhammer_inf(z * p, p, tol))
}

/// Natural log of `E_q` through its product, `|q| < 1`.
#[allow(non_snake_case)]
pub fn E_q_product_ln(z: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    require_modulus(qp, false, "the E_q product")?;
    Ok(ln_pochhammer_inf(-z, qp.q(), tol))
}

/// `1/[n]_q!` for callers that need a single coefficient.
pub fn exp_q_coeff(n: usize, qp: &QParam) -> Complex64 {
    q_factorial(n, qp).inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::q_pochhammer;
    use crate::qoperator::dq_series;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn phi_examples() {
        let qp = QParam::real(0.5).unwrap();
        let p00 = phi_rs(
            &PhiParams {
                alpha: vec![],
                beta: vec![],
                qp,
            },
            20,
        )
        .unwrap();
        let e = E_q(&qp, 20);
        // E_q(z) = 0phi0(-;-;q,-z)
        for j in 0..=20 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(p00.coeff(j) * sign, e.coeff(j), 1e-14));
        }
        let p10 = phi_rs(
            &PhiParams {
                alpha: vec![c(0.0)],
                beta: vec![],
                qp,
            },
            20,
        )
        .unwrap();
        let et = etilde_q(&qp, 20);
        assert_eq!(p10.coeffs(), et.coeffs());
        let p = phi_rs(
            &PhiParams {
                alpha: vec![c(0.3), c(2.0)],
                beta: vec![c(0.7)],
                qp,
            },
            5,
        )
        .unwrap();
        assert_eq!(p.coeff(0), ONE);
    }

    #[test]
    fn phi_denominator_zero() {
        let qp = QParam::real(0.5).unwrap();
        let r = phi_rs(
            &PhiParams {
                alpha: vec![],
                beta: vec![c(4.0)],
                qp,
            },
            10,
        );
        assert_eq!(r, Err(Error::DenominatorPochhammerZero { order: 3 }));
    }

    #[test]
    fn exp_q_forms() {
        let qp = QParam::real(0.5).unwrap();
        let e = exp_q(&qp, 30);
        assert_eq!(e.coeff(0), ONE);
        assert_eq!(e.coeff(1), ONE);
        for n in 0..=30 {
            let cross = c(0.5f64.powi(n as i32)) / q_pochhammer(qp.q(), &qp, n);
            assert!(close(e.coeff(n), cross, 1e-12));
        }
        let d = dq_series(&e, &qp);
        for n in 0..30 {
            assert!(close(d.coeff(n), e.coeff(n), 1e-14));
        }
    }

    #[test]
    fn etilde_rescales_to_exp_q() {
        let qp = QParam::real(0.5).unwrap();
        let a = exp_q(&qp, 30);
        let b = etilde_q(&qp, 30).scale_arg(c(0.5));
        for n in 0..=30 {
            assert!(close(a.coeff(n), b.coeff(n), 1e-12));
        }
    }

    #[test]
    fn etilde_first_order_equation_at_q_two() {
        let qp = QParam::real(2.0).unwrap();
        let f = etilde_q(&qp, 30);
        let d = dq_series(&f, &qp);
        for n in 0..30 {
            assert!((d.coeff(n) + f.coeff(n) / (qp.q() - 1.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn e_q_leading_coefficients() {
        let qp = QParam::real(0.25).unwrap();
        let e = E_q(&qp, 4);
        assert_eq!(e.coeff(0), ONE);
        assert!(close(e.coeff(1), c(1.0 / 0.75), 1e-15));
        assert!(close(
            e.coeff(3),
            c(0.25f64.powi(3)) / q_pochhammer(qp.q(), &qp, 3),
            1e-14
        ));
    }

    #[test]
    fn sin_cos_structure() {
        let qp = QParam::real(2.0).unwrap();
        let (s, co) = sinq_cosq(&qp, 30);
        assert_eq!(s.coeff(0), c(0.0));
        assert_eq!(co.coeff(0), ONE);
        for n in 0..=30 {
            if n % 2 == 0 {
                assert_eq!(s.coeff(n), c(0.0));
            } else {
                assert_eq!(co.coeff(n), c(0.0));
            }
        }
        let ds = dq_series(&s, &qp);
        let dc = dq_series(&co, &qp);
        for n in 0..30 {
            assert!((ds.coeff(n) - co.coeff(n)).norm() < 1e-12);
            assert!((dc.coeff(n) + s.coeff(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn products_vanish_on_their_lattices() {
        let q2 = QParam::real(2.0).unwrap();
        assert_eq!(etilde_product(c(0.0), &q2, 1e-16).unwrap(), ONE);
        assert!(etilde_product(c(2.0), &q2, 1e-16).unwrap().norm() < 1e-15);
        let qh = QParam::real(0.5).unwrap();
        assert_eq!(E_q_product(c(0.0), &qh, 1e-16).unwrap(), ONE);
        assert!(E_q_product(c(-1.0), &qh, 1e-16).unwrap().norm() < 1e-15);
        assert!(etilde_product(c(1.0), &qh, 1e-16).is_err());
        assert!(E_q_product(c(1.0), &q2, 1e-16).is_err());
        let lat = E_q_zero_lattice(&qh).unwrap();
        let pts: Vec<_> = lat.points_within(10.0).into_iter().map(|p| p.0).collect();
        assert_eq!(pts, vec![c(-1.0), c(-2.0), c(-4.0), c(-8.0)]);
    }

    #[test]
    fn product_and_series_agree() {
        let q2 = QParam::real(2.0).unwrap();
        let s = etilde_q(&q2, 60);
        for z in [c(1.5), Complex64::new(-0.7, 1.1), Complex64::new(0.2, -1.3)] {
            let p = etilde_product(z, &q2, 1e-17).unwrap();
            assert!(close(s.eval(z).unwrap(), p, 1e-9));
            assert!(close(etilde_product_ln(z, &q2, 1e-17).unwrap().exp(), p, 1e-12));
        }
        let qh = QParam::real(0.5).unwrap();
        let s = E_q(&qh, 80);
        for z in [c(0.9), Complex64::new(-0.3, 0.8)] {
            let p = E_q_product(z, &qh, 1e-17).unwrap();
            let v = s.eval(z);
            assert!(
                close(v.clone().unwrap(), p, 1e-9),
                "{z} {v:?} {p} {:?}",
                s.safe_radius()
            );
        }
    }
}
