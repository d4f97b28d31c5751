use super::model::Target;
use crate::error::{Error, Result};
use crate::poly::CLUSTER_TOL;
use crate::qcore::QParam;
use crate::qode::RationalFunction;
use num_complex::Complex64;

/// Jackson truncated counting for a rational `f` and one target `a`.
///
/// Each `a`-point of multiplicity `h` contributes `h - min(h, k')`, where
/// `k'` is the order of the zero of `D_q f` there, or of `D_q(1/f)` when
/// `a = ∞`.
#[derive(Debug, Clone)]
pub struct JacksonCounter {
    /// `a`-points with their truncated weights.
    weighted: Vec<(Complex64, u32)>,
    /// `a`-points with their full multiplicities.
    points: Vec<(Complex64, u32)>,
}

fn zero_order_at(g: &RationalFunction, z: Complex64) -> u32 {
    let tol = 1e3 * CLUSTER_TOL * z.norm().max(1.0);
    g.zeros()
        .iter()
        .filter(|(w, _)| (*w - z).norm() <= tol)
        .map(|p| p.1)
        .sum()
}

impl JacksonCounter {
    pub fn new(f: &RationalFunction, target: Target, qp: &QParam) -> Result<Self> {
        if f.is_constant() {
            return Err(Error::InvalidArgument(
                "truncated counting needs a nonconstant f".into(),
            ));
        }
        let (points, d) = match target {
            Target::Infinity => (f.poles().to_vec(), f.reciprocal()?.jackson_derivative(qp)?),
            Target::Value(a) => {
                let pts = if a == Complex64::default() {
                    f.zeros().to_vec()
                } else {
                    f.sub_const(a)?.zeros().to_vec()
                };
                (pts, f.jackson_derivative(qp)?)
            }
        };
        let weighted = points
            .iter()
            .map(|&(z, h)| (z, h - h.min(zero_order_at(&d, z))))
            .collect();
        Ok(JacksonCounter { weighted, points })
    }

    /// `ñ_J(r, f = a)`.
    pub fn n_tilde(&self, r: f64) -> u32 {
        self.weighted.iter().filter(|p| p.0.norm() <= r).map(|p| p.1).sum()
    }

    /// `n(r, f = a)`.
    pub fn n(&self, r: f64) -> u32 {
        self.points.iter().filter(|p| p.0.norm() <= r).map(|p| p.1).sum()
    }

    /// `Ñ_J(r, f = a)`, the integrated form of [`Self::n_tilde`].
    pub fn counting(&self, r: f64) -> f64 {
        super::functionals::counting_from_points(&self.weighted, r)
    }

    /// `a`-points paired with their truncated weights.
    pub fn weighted_points(&self) -> &[(Complex64, u32)] {
        &self.weighted
    }
}

/// `ñ_J(r, f = a)` and `Ñ_J(r, f = a)` for a rational `f`.
pub fn jackson_truncated_counting(f: &RationalFunction, r: f64, target: Target, qp: &QParam) -> Result<(u32, f64)> {
    let c = JacksonCounter::new(f, target, qp)?;
    Ok((c.n_tilde(r), c.counting(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn poly(c: &[f64]) -> RationalFunction {
        RationalFunction::polynomial(Poly::from_real(c)).unwrap()
    }

    #[test]
    fn square_at_zero() {
        let q2 = QParam::real(2.0).unwrap();
        let (n, big) = jackson_truncated_counting(&poly(&[0.0, 0.0, 1.0]), 5.0, Target::zero(), &q2).unwrap();
        assert_eq!(n, 1);
        assert!((big - 5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn simple_points_count_fully() {
        let q2 = QParam::real(2.0).unwrap();
        let f = poly(&[0.0, 0.0, 1.0]);
        let c = JacksonCounter::new(&f, Target::real(1.0), &q2).unwrap();
        assert_eq!(c.n_tilde(2.0), 2);
        assert_eq!(c.n(2.0), 2);
        let z = poly(&[0.0, 1.0]);
        assert_eq!(JacksonCounter::new(&z, Target::zero(), &q2).unwrap().n_tilde(1.0), 1);
    }

    #[test]
    fn poles_use_the_reciprocal() {
        // 1/z^2: D_q(z^2) = [2]_q z vanishes simply at the double pole
        let q = QParam::real(0.5).unwrap();
        let f = RationalFunction::from_polys(Poly::from_real(&[1.0]), Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let c = JacksonCounter::new(&f, Target::Infinity, &q).unwrap();
        assert_eq!(c.n(1.0), 2);
        assert_eq!(c.n_tilde(1.0), 1);
    }

    #[test]
    fn constants_are_rejected() {
        let q = QParam::real(0.5).unwrap();
        assert!(JacksonCounter::new(&poly(&[3.0]), Target::zero(), &q).is_err());
    }
}
