use crate::error::{Error, Result};
use crate::poly::{Poly, CLUSTER_TOL};
use crate::qcore::{QParam, TruncatedSeries};
use num_complex::Complex64;

/// Numerator and denominator roots closer than this are treated as a common factor.
pub const COPRIME_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `P1 / P2` in lowest terms, with cached zeros and poles.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    zeros: Vec<(Complex64, u32)>,
    poles: Vec<(Complex64, u32)>,
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

impl RationalFunction {
    /// Rejects a zero denominator and common roots within [`COPRIME_TOL`].
    pub fn from_polys(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("denominator is identically zero".into()));
        }
        let zeros = if num.is_zero() {
            Vec::new()
        } else {
            num.roots_with_multiplicity()?
        };
        let poles = den.roots_with_multiplicity()?;
        for &(z, _) in &zeros {
            if poles.iter().any(|&(p, _)| close(z, p, COPRIME_TOL)) {
                return Err(Error::NotCoprime(z));
            }
        }
        Ok(RationalFunction { num, den, zeros, poles })
    }

    /// `lead prod (z - z_i)^{m_i} / prod (z - p_j)^{n_j}`; common factors cancel.
    pub fn from_roots(lead: Complex64, zeros: &[(Complex64, u32)], poles: &[(Complex64, u32)]) -> Self {
        let mut zeros = merge(zeros);
        let mut poles = merge(poles);
        cancel(&mut zeros, &mut poles, CLUSTER_TOL);
        RationalFunction {
            num: Poly::from_roots(lead, &zeros),
            den: Poly::from_roots(ONE, &poles),
            zeros: if lead == ZERO { Vec::new() } else { zeros },
            poles,
        }
    }

    pub fn polynomial(p: Poly) -> Result<Self> {
        Self::from_polys(p, Poly::constant(ONE))
    }

    pub fn constant(c: Complex64) -> Self {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::constant(ONE),
            zeros: Vec::new(),
            poles: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn zeros(&self) -> &[(Complex64, u32)] {
        &self.zeros
    }

    pub fn poles(&self) -> &[(Complex64, u32)] {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    /// `max(deg P1, deg P2)`, the number of poles counted at infinity too.
    pub fn degree(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.num.degree().max(self.den.degree())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Origin Taylor coefficients `0..=order`.
    pub fn origin_series(&self, order: usize) -> Result<TruncatedSeries> {
        if self.den.coeffs()[0] == ZERO {
            return Err(Error::CoefficientPoleAtOrigin);
        }
        let pad = |p: &Poly| {
            let mut c: Vec<Complex64> = p.coeffs().iter().copied().take(order + 1).collect();
            c.resize(order + 1, ZERO);
            c
        };
        if self.is_polynomial() {
            let d = self.den.coeffs()[0];
            let c: Vec<Complex64> = pad(&self.num).into_iter().map(|x| x / d).collect();
            return Ok(if self.num.degree() <= order {
                TruncatedSeries::polynomial(c)
            } else {
                TruncatedSeries::new(c)
            });
        }
        let n = TruncatedSeries::uncertified(pad(&self.num));
        let d = TruncatedSeries::uncertified(pad(&self.den));
        let s = n.div(&d)?;
        Ok(TruncatedSeries::new(s.into_coeffs()))
    }

    /// `f - a`.
    pub fn sub_const(&self, a: Complex64) -> Result<Self> {
        Self::from_polys(self.num.sub(&self.den.scale(a)), self.den.clone())
    }

    /// `1/f`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of the zero function".into()));
        }
        Ok(RationalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
            zeros: self.poles.clone(),
            poles: self.zeros.clone(),
        })
    }

    /// `f(cz)`.
    pub fn scale_arg(&self, c: Complex64) -> Self {
        let ci = c.inv();
        RationalFunction {
            num: self.num.scale_arg(c),
            den: self.den.scale_arg(c),
            zeros: self.zeros.iter().map(|&(z, m)| (z * ci, m)).collect(),
            poles: self.poles.iter().map(|&(p, m)| (p * ci, m)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == ZERO {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            ..self.clone()
        }
    }

    /// `D_q f = (P(qz) Q(z) - P(z) Q(qz)) / ((q - 1) z Q(z) Q(qz))` in lowest terms.
    ///
    /// The numerator vanishes at the origin exactly, so the factor `z`
    /// cancels before root finding. Poles of the result lie in
    /// `poles(f) ∪ poles(f)/q`, which are taken from the cached pole list.
    pub fn jackson_derivative(&self, qp: &QParam) -> Result<Self> {
        let q = qp.q();
        let (p, d) = (&self.num, &self.den);
        let (left, right) = (p.scale_arg(q).mul(d), p.mul(&d.scale_arg(q)));
        let scale = left
            .coeffs()
            .iter()
            .chain(right.coeffs())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let raw = left.sub(&right);
        let num = Poly::new(raw.coeffs().iter().skip(1).copied().collect()).trimmed(1e-13);
        if num.coeffs().iter().all(|c| c.norm() <= 1e-13 * scale) {
            return Ok(Self::zero());
        }
        let zeros = num.roots_with_multiplicity()?;
        let qi = q.inv();
        let mut poles = self.poles.clone();
        poles.extend(self.poles.iter().map(|&(p, m)| (p * qi, m)));
        let dl = d.lead();
        let lead = num.lead() / ((q - 1.0) * dl * dl * q.powi(d.degree() as i32));
        Ok(Self::from_roots(lead, &zeros, &poles))
    }
}

fn merge(pts: &[(Complex64, u32)]) -> Vec<(Complex64, u32)> {
    let mut out: Vec<(Complex64, u32)> = Vec::new();
    for &(z, m) in pts {
        if m == 0 {
            continue;
        }
        match out.iter_mut().find(|(w, _)| close(*w, z, CLUSTER_TOL)) {
            Some(e) => e.1 += m,
            None => out.push((z, m)),
        }
    }
    out
}

fn cancel(zeros: &mut Vec<(Complex64, u32)>, poles: &mut Vec<(Complex64, u32)>, tol: f64) {
    for z in zeros.iter_mut() {
        for p in poles.iter_mut() {
            if z.1 > 0 && p.1 > 0 && close(z.0, p.0, tol) {
                let k = z.1.min(p.1);
                z.1 -= k;
                p.1 -= k;
            }
        }
    }
    zeros.retain(|e| e.1 > 0);
    poles.retain(|e| e.1 > 0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn coprimality_is_enforced() {
        let num = Poly::from_roots(ONE, &[(c(1.0), 1), (c(2.0), 1)]);
        let den = Poly::from_roots(ONE, &[(c(2.0), 1)]);
        assert!(matches!(
            RationalFunction::from_polys(num, den),
            Err(Error::NotCoprime(_))
        ));
        assert!(RationalFunction::from_polys(Poly::constant(ONE), Poly::constant(ZERO)).is_err());
    }

    #[test]
    fn origin_series_of_geometric() {
        let f = RationalFunction::from_polys(Poly::constant(ONE), Poly::from_real(&[1.0, -1.0])).unwrap();
        let s = f.origin_series(10).unwrap();
        assert!(s.coeffs().iter().all(|x| (x - ONE).norm() < 1e-15));
        let g = RationalFunction::from_polys(Poly::constant(ONE), Poly::from_real(&[0.0, 1.0])).unwrap();
        assert_eq!(g.origin_series(4), Err(Error::CoefficientPoleAtOrigin));
    }

    #[test]
    fn jackson_derivative_of_polynomial() {
        let qp = QParam::real(2.0).unwrap();
        let f = RationalFunction::polynomial(Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        let d = f.jackson_derivative(&qp).unwrap();
        assert!(d.is_polynomial());
        assert_eq!(d.zeros(), &[(c(0.0), 4)]);
        assert!((d.eval(c(1.0)) - c(31.0)).norm() < 1e-12);
        let z2 = RationalFunction::polynomial(Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let d = z2.jackson_derivative(&qp).unwrap();
        assert_eq!(d.zeros(), &[(c(0.0), 1)]);
        let k = RationalFunction::constant(c(3.0));
        assert!(k.jackson_derivative(&qp).unwrap().is_zero());
    }

    #[test]
    fn jackson_derivative_matches_difference_quotient() {
        let qp = QParam::new(Complex64::new(0.5, 0.3)).unwrap();
        let f = RationalFunction::from_roots(c(2.0), &[(c(1.0), 1), (c(3.0), 1)], &[(c(-2.0), 1)]);
        let d = f.jackson_derivative(&qp).unwrap();
        let q = qp.q();
        for z in [Complex64::new(0.4, 1.2), c(-5.0), Complex64::new(2.0, -0.7)] {
            let direct = (f.eval(q * z) - f.eval(z)) / ((q - 1.0) * z);
            assert!((d.eval(z) - direct).norm() < 1e-11 * direct.norm().max(1.0));
        }
        assert_eq!(d.poles().len(), 2);
    }

    #[test]
    fn reciprocal_swaps_roots() {
        let f = RationalFunction::from_roots(c(1.0), &[(c(1.0), 2)], &[(c(-1.0), 1)]);
        let g = f.reciprocal().unwrap();
        assert_eq!(g.zeros(), f.poles());
        assert_eq!(g.poles(), f.zeros());
        assert_eq!(f.degree(), 2);
    }
}
