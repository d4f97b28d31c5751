use crate::error::{Error, Result};
use crate::qcore::TruncatedSeries;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

type ComplexFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// A function given only by pointwise evaluation.
///
/// `eval` must be deterministic and re-entrant. Calls outside the domain
/// radius are rejected before reaching it. An optional complex-log
/// evaluator lets ratios `f(w)/f(z)` be formed for values that would
/// overflow or underflow a double.
#[derive(Clone)]
pub struct Sampler {
    eval: Arc<ComplexFn>,
    log_eval: Option<Arc<ComplexFn>>,
    domain_radius: Option<f64>,
    poles: Vec<(Complex64, u32)>,
}

impl fmt::Debug for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sampler")
            .field("domain_radius", &self.domain_radius)
            .field("poles", &self.poles)
            .field("has_log_eval", &self.log_eval.is_some())
            .finish()
    }
}

impl Sampler {
    pub fn new(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Sampler {
            eval: Arc::new(f),
            log_eval: None,
            domain_radius: None,
            poles: Vec::new(),
        }
    }

    pub fn with_domain_radius(mut self, r: f64) -> Self {
        self.domain_radius = Some(r);
        self
    }

    pub fn with_poles(mut self, poles: Vec<(Complex64, u32)>) -> Self {
        self.poles = poles;
        self
    }

    /// Attaches a complex logarithm of `f` (any branch).
    pub fn with_log(mut self, g: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.log_eval = Some(Arc::new(g));
        self
    }

    /// Polynomial with ascending coefficients.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Sampler::new(move |z| coeffs.iter().rev().fold(Complex64::default(), |acc, c| acc * z + c))
    }

    /// Evaluates a series inside its certified disc.
    pub fn from_series(f: &TruncatedSeries) -> Self {
        let s = f.clone();
        let mut out = Sampler::new(move |z| s.eval_unchecked(z));
        out.domain_radius = f.safe_radius().radius().filter(|r| r.is_finite());
        out
    }

    pub fn domain_radius(&self) -> Option<f64> {
        self.domain_radius
    }

    pub fn poles(&self) -> &[(Complex64, u32)] {
        &self.poles
    }

    pub fn has_log(&self) -> bool {
        self.log_eval.is_some()
    }

    fn check(&self, z: Complex64) -> Result<()> {
        match self.domain_radius {
            Some(r) if z.norm() > r * (1.0 + 1e-12) => Err(Error::OutsideDomain(z)),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok((self.eval)(z))
    }

    /// A complex logarithm of `f(z)`; falls back to `ln(f(z))`.
    pub fn ln(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(match &self.log_eval {
            Some(g) => g(z),
            None => (self.eval)(z).ln(),
        })
    }

    /// `ln |f(z)|`, overflow-safe when a log evaluator is attached.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        self.check(z)?;
        Ok(match &self.log_eval {
            Some(g) => g(z).re,
            None => (self.eval)(z).norm().ln(),
        })
    }

    /// `f(w)/f(z)` computed through logs when available.
    pub fn ratio(&self, w: Complex64, z: Complex64) -> Result<Complex64> {
        if self.log_eval.is_some() {
            Ok((self.ln(w)? - self.ln(z)?).exp())
        } else {
            Ok(self.eval(w)? / self.eval(z)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_enforced() {
        let s = Sampler::new(|z| z * z).with_domain_radius(1.0);
        assert!(s.eval(Complex64::new(0.5, 0.5)).is_ok());
        assert_eq!(
            s.eval(Complex64::new(2.0, 0.0)),
            Err(Error::OutsideDomain(Complex64::new(2.0, 0.0)))
        );
    }

    #[test]
    fn log_ratio_matches_direct_ratio() {
        let s = Sampler::new(|z| z.exp()).with_log(|z| z);
        let r = s.ratio(Complex64::new(800.0, 0.0), Complex64::new(799.0, 0.0)).unwrap();
        assert!((r.re - 1f64.exp()).abs() < 1e-12);
    }
}
