//! q-arithmetic: brackets, q-factorials, q-Pochhammer symbols and
//! Gaussian binomials.
//!
//! Everything is computed multiplicatively. The `Extended` precision path
//! redoes the products in double-double arithmetic, which matters when
//! `|q|` is close to 1 and the factors `1 - q^j` cancel badly.

use super::ddouble::DdComplex;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `|q^n - 1|` must exceed this for every order that enters a denominator.
pub const ROOT_OF_UNITY_GUARD: f64 = 1e-9;

/// Hard cap on the number of factors in an infinite product.
const MAX_PRODUCT_FACTORS: usize = 10_000_000;

/// The base `q` of the Jackson calculus.
///
/// Construction rejects `q = 0` and `|q| = 1`. Both regimes `|q| < 1` and
/// `|q| > 1` are accepted; individual operations check the one they need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    q: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Double-double intermediates, roughly 32 significant digits.
    Extended,
}

impl QParam {
    pub fn new(q: Complex64) -> Result<Self> {
        let m = q.norm();
        if !m.is_finite() || m == 0.0 || m == 1.0 {
            return Err(Error::InvalidQ(q));
        }
        Ok(QParam { q })
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    /// Like [`QParam::new`], additionally checking the root-of-unity guard
    /// up to `order`.
    pub fn with_order(q: Complex64, order: usize) -> Result<Self> {
        let qp = Self::new(q)?;
        qp.check_order(order)?;
        Ok(qp)
    }

    /// Checks `|q^n - 1| > ROOT_OF_UNITY_GUARD` for `1 <= n <= order`.
    pub fn check_order(&self, order: usize) -> Result<()> {
        let mut p = Complex64::new(1.0, 0.0);
        for n in 1..=order {
            p *= self.q;
            if (p - 1.0).norm() <= ROOT_OF_UNITY_GUARD {
                return Err(Error::NearRootOfUnity {
                    q: self.q,
                    order: n,
                    guard: ROOT_OF_UNITY_GUARD,
                });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn q(&self) -> Complex64 {
        self.q
    }

    #[inline]
    pub fn modulus(&self) -> f64 {
        self.q.norm()
    }

    #[inline]
    pub fn inside_unit_disc(&self) -> bool {
        self.q.norm() < 1.0
    }

    /// The base `1/q`.
    pub fn inverse(&self) -> QParam {
        QParam { q: self.q.inv() }
    }

    /// `q^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Complex64 {
        self.q.powi(n as i32)
    }
}

/// `[n]_q = (q^n - 1)/(q - 1)`.
pub fn q_bracket(n: usize, qp: &QParam) -> Complex64 {
    let q = qp.q();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    // the geometric sum avoids the cancellation in (q^n - 1)/(q - 1) near q = 1
    if (q - 1.0).norm() < 0.5 && n <= 256 {
        let mut s = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            s = s * q + 1.0;
        }
        return s;
    }
    (q.powi(n as i32) - 1.0) / (q - 1.0)
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: usize, qp: &QParam) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * q_bracket(j, qp))
}

/// `(a; q)_n = (1 - a)(1 - aq)...(1 - aq^{n-1})`.
pub fn q_pochhammer(a: Complex64, qp: &QParam, n: usize) -> Complex64 {
    let q = qp.q();
    let mut aq = a;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= Complex64::new(1.0, 0.0) - aq;
        aq *= q;
    }
    acc
}

/// `(a; q)_inf` for `|q| < 1`.
///
/// Factors are multiplied until `|a q^n| < tol (1 - |q|)`; the neglected
/// tail changes the product by a factor within `exp(±2 tol)`.
pub fn q_pochhammer_inf(a: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    let m = qp.modulus();
    if m >= 1.0 {
        return Err(Error::Domain(format!("(a; q)_inf needs |q| < 1, got |q| = {m}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let stop = tol * (1.0 - m);
    let q = qp.q();
    let mut aq = a;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..MAX_PRODUCT_FACTORS {
        if aq.norm() < stop {
            return Ok(acc);
        }
        acc *= Complex64::new(1.0, 0.0) - aq;
        aq *= q;
    }
    Err(Error::Domain(format!(
        "(a; q)_inf did not reach tolerance within {MAX_PRODUCT_FACTORS} factors"
    )))
}

/// Gaussian binomial `[n, j]_q = (q;q)_n / ((q;q)_j (q;q)_{n-j})`, built as
/// `prod_{i=1}^{j} (1 - q^{n-j+i}) / (1 - q^i)`.
pub fn q_binomial(n: i64, j: i64, qp: &QParam) -> Result<Complex64> {
    if j < 0 || j > n {
        return Err(Error::Domain(format!(
            "q-binomial needs 0 <= j <= n, got n = {n}, j = {j}"
        )));
    }
    let j = j.min(n - j) as usize;
    let n = n as usize;
    let q = qp.q();
    let one = Complex64::new(1.0, 0.0);
    let mut qi = one;
    let mut qtop = q.powi((n - j) as i32);
    let mut acc = one;
    for _ in 1..=j {
        qi *= q;
        qtop *= q;
        acc *= (one - qtop) / (one - qi);
    }
    Ok(acc)
}

pub fn q_factorial_with(n: usize, qp: &QParam, prec: Precision) -> Complex64 {
    match prec {
        Precision::Double => q_factorial(n, qp),
        Precision::Extended => {
            let q = DdComplex::from_c64(qp.q());
            let one = DdComplex::ONE;
            let mut qj = one;
            let mut acc = one;
            let den = one - q;
            for _ in 1..=n {
                qj = qj * q;
                acc = acc * ((one - qj) / den);
            }
            acc.to_c64()
        }
    }
}

pub fn q_pochhammer_with(a: Complex64, qp: &QParam, n: usize, prec: Precision) -> Complex64 {
    match prec {
        Precision::Double => q_pochhammer(a, qp, n),
        Precision::Extended => {
            let q = DdComplex::from_c64(qp.q());
            let one = DdComplex::ONE;
            let mut aq = DdComplex::from_c64(a);
            let mut acc = one;
            for _ in 0..n {
                acc = acc * (one - aq);
                aq = aq * q;
            }
            acc.to_c64()
        }
    }
}

pub fn q_binomial_with(n: i64, j: i64, qp: &QParam, prec: Precision) -> Result<Complex64> {
    match prec {
        Precision::Double => q_binomial(n, j, qp),
        Precision::Extended => {
            if j < 0 || j > n {
                return Err(Error::Domain(format!(
                    "q-binomial needs 0 <= j <= n, got n = {n}, j = {j}"
                )));
            }
            let j = j.min(n - j) as usize;
            let n = n as usize;
            let q = DdComplex::from_c64(qp.q());
            let one = DdComplex::ONE;
            let mut qtop = one;
            for _ in 0..(n - j) {
                qtop = qtop * q;
            }
            let mut qi = one;
            let mut acc = one;
            for _ in 1..=j {
                qi = qi * q;
                qtop = qtop * q;
                acc = acc * ((one - qtop) / (one - qi));
            }
            Ok(acc.to_c64())
        }
    }
}
