//! Truncated power series about the origin with complex coefficients.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Default absolute bound on the neglected tail inside the certified disc.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
/// Coefficients below this magnitude are treated as underflowed.
const UNDERFLOW_MAGNITUDE: f64 = 1e-290;

/// Radius inside which evaluation of the stored truncation is trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SafeRadius {
    /// Coefficients do not show decay; evaluation is unchecked.
    Unknown,
    /// Tail bound holds for `|z| <= r`.
    Certified(f64),
    /// The series is an exact polynomial.
    Unbounded,
}

impl SafeRadius {
    pub fn radius(&self) -> Option<f64> {
        match self {
            SafeRadius::Unknown => None,
            SafeRadius::Certified(r) => Some(*r),
            SafeRadius::Unbounded => Some(f64::INFINITY),
        }
    }
}

/// Coefficients `c_0..c_N` of `sum c_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    safe_radius: SafeRadius,
}

impl TruncatedSeries {
    /// Builds a series and certifies its safe radius from the coefficient
    /// decay with [`DEFAULT_TAIL_TOL`].
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self::with_tail_tol(coeffs, DEFAULT_TAIL_TOL)
    }

    pub fn with_tail_tol(coeffs: Vec<Complex64>, tail_tol: f64) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        let safe_radius = certify_radius(&coeffs, tail_tol);
        TruncatedSeries { coeffs, safe_radius }
    }

    /// An exact polynomial; evaluation is allowed everywhere.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries {
            coeffs,
            safe_radius: SafeRadius::Unbounded,
        }
    }

    /// A series without a radius certificate.
    pub fn uncertified(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries {
            coeffs,
            safe_radius: SafeRadius::Unknown,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0); order + 1])
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); order + 1];
        v[0] = c;
        Self::polynomial(v)
    }

    /// `c z^k` stored to order `order` (coefficients past `order` are dropped).
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); order + 1];
        if k <= order {
            v[k] = c;
        }
        Self::polynomial(v)
    }

    #[inline]
    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `c_n`, zero past the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn safe_radius(&self) -> SafeRadius {
        self.safe_radius
    }

    pub fn is_polynomial(&self) -> bool {
        self.safe_radius == SafeRadius::Unbounded
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Keeps `c_0..c_order`.
    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        let dropped_nonzero = self.coeffs[n..].iter().any(|c| *c != Complex64::default());
        self.derived(self.coeffs[..n].to_vec(), self.is_polynomial() && !dropped_nonzero)
    }

    fn derived(&self, coeffs: Vec<Complex64>, exact: bool) -> Self {
        if exact {
            Self::polynomial(coeffs)
        } else {
            Self::new(coeffs)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let v = self.coeffs.iter().map(|x| x * c).collect();
        self.derived(v, self.is_polynomial())
    }

    /// `f(c z)`: coefficient `c_n` becomes `c^n c_n`.
    pub fn scale_arg(&self, c: Complex64) -> Self {
        let mut p = Complex64::new(1.0, 0.0);
        let v = self
            .coeffs
            .iter()
            .map(|x| {
                let y = x * p;
                p *= c;
                y
            })
            .collect();
        self.derived(v, self.is_polynomial())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let v = (0..n).map(|i| f(self.coeffs[i], other.coeffs[i])).collect();
        let exact = self.is_polynomial()
            && other.is_polynomial()
            && self.coeffs[n..]
                .iter()
                .chain(&other.coeffs[n..])
                .all(|c| c.norm() == 0.0);
        self.derived(v, exact)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut v = vec![Complex64::default(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let exact = self.is_polynomial() && other.is_polynomial() && degree(&self.coeffs) + degree(&other.coeffs) < n;
        self.derived(v, exact)
    }

    /// `self / other`; needs `other.c_0 != 0`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let g0 = other.coeffs[0];
        if g0.norm() == 0.0 {
            return Err(Error::DivisorSingular);
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut h: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for m in 1..=k {
                acc -= other.coeffs[m] * h[k - m];
            }
            h.push(acc / g0);
        }
        Ok(Self::new(h))
    }

    /// Horner evaluation; rejects `|z|` beyond a certified radius.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if let Some(r) = self.safe_radius.radius() {
            let m = z.norm();
            if m > r * (1.0 + 1e-12) {
                return Err(Error::OutsideSafeRadius { modulus: m, radius: r });
            }
        }
        Ok(self.eval_unchecked(z))
    }

    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * z + c)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

fn degree(c: &[Complex64]) -> usize {
    c.iter().rposition(|x| x.norm() != 0.0).unwrap_or(0)
}

/// Ratio test on the last quarter of the stored coefficients.
///
/// The decay rate `t` is the largest per-step ratio between consecutive
/// nonzero coefficients there. Extrapolating `|c_n| <= |c_L| t^{n-L}` past
/// the truncation, the radius is the largest `rho` whose geometric tail
/// bound stays below `tail_tol`. An all-zero last quarter means the
/// coefficients decayed past the representable range.
pub(crate) fn certify_radius(coeffs: &[Complex64], tail_tol: f64) -> SafeRadius {
    let n_top = coeffs.len() - 1;
    if n_top == 0 {
        return SafeRadius::Unbounded;
    }
    // a tail that decayed into subnormals or zeros is not an exact polynomial
    if let Some(last) = coeffs.iter().rposition(|c| c.norm() >= UNDERFLOW_MAGNITUDE) {
        if last > 0 && last < n_top && coeffs[last].norm() < 1e40 * UNDERFLOW_MAGNITUDE {
            return certify_radius(&coeffs[..=last], tail_tol);
        }
    }
    let start = n_top - (n_top + 1) / 4;
    let window: Vec<(usize, f64)> = (start..=n_top)
        .map(|i| (i, coeffs[i].norm()))
        .filter(|&(_, m)| m > 0.0)
        .collect();
    if window.is_empty() {
        return SafeRadius::Unbounded;
    }
    if window.len() == 1 {
        let (i, _) = window[0];
        return if i == n_top {
            SafeRadius::Unknown
        } else {
            SafeRadius::Unbounded
        };
    }
    let mut log_t = f64::NEG_INFINITY;
    for w in window.windows(2) {
        let (i, a) = w[0];
        let (j, b) = w[1];
        log_t = log_t.max((b.ln() - a.ln()) / (j - i) as f64);
    }
    let (last, c_last) = *window.last().unwrap();
    if !log_t.is_finite() {
        return SafeRadius::Unknown;
    }
    // log of the tail bound |c_L| rho^L (rho t)^{N+1-L} / (1 - rho t)
    let gap = (n_top + 1 - last) as f64;
    let log_bound = |log_rho: f64| {
        let lrt = log_rho + log_t;
        if lrt >= 0.0 {
            return f64::INFINITY;
        }
        c_last.ln() + last as f64 * log_rho + gap * lrt - (-lrt.exp()).ln_1p()
    };
    let target = tail_tol.ln();
    let mut hi = -log_t;
    let mut lo = hi - 800.0;
    if log_bound(lo) > target {
        return SafeRadius::Unknown;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_bound(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = lo.exp();
    if r > 0.0 && r.is_finite() {
        SafeRadius::Certified(r)
    } else {
        SafeRadius::Unknown
    }
}
