use crate::error::{Error, Result};
use crate::qcore::{QParam, SafeRadius, TruncatedSeries};
use crate::qode::RationalFunction;
use crate::qoperator::Sampler;
use crate::qspecial::{
    etilde_product, etilde_product_ln, etilde_zero_lattice, E_q_product, E_q_product_ln, E_q_zero_lattice, Lattice,
};
use num_complex::Complex64;
use std::fmt;

/// Truncation tolerance for the built-in product evaluators.
const PRODUCT_TOL: f64 = 1e-17;

/// A value `a` in the extended plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Value(Complex64),
    Infinity,
}

impl Target {
    pub fn zero() -> Self {
        Target::Value(Complex64::default())
    }

    pub fn real(x: f64) -> Self {
        Target::Value(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Infinity => write!(f, "inf"),
            Target::Value(a) if a.im == 0.0 => write!(f, "{}", a.re),
            Target::Value(a) => write!(f, "{}{:+}i", a.re, a.im),
        }
    }
}

/// A meromorphic function known through a sampler plus exact lattices of
/// zeros and poles.
#[derive(Debug, Clone)]
pub struct ProductModel {
    pub sampler: Sampler,
    /// `None` when the zeros are not known in closed form.
    pub zeros: Option<Vec<Lattice>>,
    pub poles: Vec<Lattice>,
    /// Leading Laurent coefficient and order at the origin.
    pub origin: (Complex64, i32),
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    Rational(RationalFunction),
    EntireSeries(TruncatedSeries),
    QProduct(ProductModel),
}

/// A meromorphic function with the data needed for Nevanlinna functionals.
#[derive(Debug, Clone)]
pub struct MeroModel {
    kind: ModelKind,
    qp: Option<QParam>,
}

impl MeroModel {
    pub fn rational(f: RationalFunction) -> Self {
        MeroModel {
            kind: ModelKind::Rational(f),
            qp: None,
        }
    }

    /// An entire function through its series; the series must carry a
    /// certified or unbounded safe radius.
    pub fn series(f: TruncatedSeries) -> Result<Self> {
        if f.safe_radius() == SafeRadius::Unknown {
            return Err(Error::InvalidArgument(
                "series model needs a certified safe radius".into(),
            ));
        }
        Ok(MeroModel {
            kind: ModelKind::EntireSeries(f),
            qp: None,
        })
    }

    pub fn product(p: ProductModel) -> Self {
        MeroModel {
            kind: ModelKind::QProduct(p),
            qp: None,
        }
    }

    /// `etilde_q` through its product, `|q| > 1`.
    pub fn etilde_product(qp: QParam) -> Result<Self> {
        let lattice = etilde_zero_lattice(&qp)?;
        let s =
            Sampler::new(move |z| etilde_product(z, &qp, PRODUCT_TOL).unwrap_or(Complex64::new(f64::NAN, f64::NAN)))
                .with_log(move |z| {
                    etilde_product_ln(z, &qp, PRODUCT_TOL).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                });
        Ok(Self::product(ProductModel {
            sampler: s,
            zeros: Some(vec![lattice]),
            poles: Vec::new(),
            origin: (Complex64::new(1.0, 0.0), 0),
        })
        .with_q(qp))
    }

    /// `E_q` through its product, `|q| < 1`.
    #[allow(non_snake_case)]
    pub fn E_q_product(qp: QParam) -> Result<Self> {
        let lattice = E_q_zero_lattice(&qp)?;
        let s = Sampler::new(move |z| E_q_product(z, &qp, PRODUCT_TOL).unwrap_or(Complex64::new(f64::NAN, f64::NAN)))
            .with_log(move |z| E_q_product_ln(z, &qp, PRODUCT_TOL).unwrap_or(Complex64::new(f64::NAN, f64::NAN)));
        Ok(Self::product(ProductModel {
            sampler: s,
            zeros: Some(vec![lattice]),
            poles: Vec::new(),
            origin: (Complex64::new(1.0, 0.0), 0),
        })
        .with_q(qp))
    }

    pub fn with_q(mut self, qp: QParam) -> Self {
        self.qp = Some(qp);
        self
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn qp(&self) -> Option<QParam> {
        self.qp
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match &self.kind {
            ModelKind::Rational(f) => Some(f),
            _ => None,
        }
    }

    /// Largest radius at which the model may be evaluated.
    pub fn max_radius(&self) -> f64 {
        match &self.kind {
            ModelKind::EntireSeries(s) => s.safe_radius().radius().unwrap_or(0.0),
            ModelKind::QProduct(p) => p.sampler.domain_radius().unwrap_or(f64::INFINITY),
            ModelKind::Rational(_) => f64::INFINITY,
        }
    }

    pub fn is_constant(&self) -> bool {
        match &self.kind {
            ModelKind::Rational(f) => f.is_constant(),
            ModelKind::EntireSeries(s) => s.coeffs()[1..].iter().all(|c| c.norm() == 0.0),
            ModelKind::QProduct(p) => {
                p.zeros.as_ref().is_some_and(|z| z.is_empty()) && p.poles.is_empty() && p.origin.1 == 0 && {
                    let a = p.sampler.eval(Complex64::new(0.5, 0.25));
                    let b = p.sampler.eval(Complex64::new(-0.75, 0.5));
                    matches!((a, b), (Ok(a), Ok(b)) if a == b)
                }
            }
        }
    }

    fn check_radius(&self, z: Complex64) -> Result<()> {
        let r = self.max_radius();
        if z.norm() > r * (1.0 + 1e-12) {
            return Err(match &self.kind {
                ModelKind::EntireSeries(_) => Error::OutsideSafeRadius {
                    modulus: z.norm(),
                    radius: r,
                },
                _ => Error::OutsideDomain(z),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_radius(z)?;
        Ok(match &self.kind {
            ModelKind::Rational(f) => f.eval(z),
            ModelKind::EntireSeries(s) => s.eval_unchecked(z),
            ModelKind::QProduct(p) => p.sampler.eval(z)?,
        })
    }

    /// `ln |f(z)|`, in log space for product models.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        self.check_radius(z)?;
        Ok(match &self.kind {
            ModelKind::Rational(f) => f.num().eval(z).norm().ln() - f.den().eval(z).norm().ln(),
            ModelKind::EntireSeries(s) => s.eval_unchecked(z).norm().ln(),
            ModelKind::QProduct(p) => p.sampler.ln_abs(z)?,
        })
    }

    /// `f(w) / f(z)`, through logs for product models.
    pub fn ratio(&self, w: Complex64, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            ModelKind::QProduct(p) => {
                self.check_radius(w)?;
                self.check_radius(z)?;
                p.sampler.ratio(w, z)
            }
            _ => Ok(self.eval(w)? / self.eval(z)?),
        }
    }

    /// Leading Laurent coefficient `c` and order `l` at the origin: `f ~ c z^l`.
    pub fn origin_leading(&self) -> Result<(Complex64, i32)> {
        match &self.kind {
            ModelKind::Rational(f) => {
                if f.is_zero() {
                    return Err(Error::InvalidArgument("the zero function has no leading term".into()));
                }
                let lowest = |c: &[Complex64]| c.iter().position(|x| x.norm() != 0.0).unwrap();
                let (ln, ld) = (lowest(f.num().coeffs()), lowest(f.den().coeffs()));
                Ok((f.num().coeffs()[ln] / f.den().coeffs()[ld], ln as i32 - ld as i32))
            }
            ModelKind::EntireSeries(s) => s
                .coeffs()
                .iter()
                .position(|x| x.norm() != 0.0)
                .map(|i| (s.coeff(i), i as i32))
                .ok_or_else(|| Error::InvalidArgument("the zero function has no leading term".into())),
            ModelKind::QProduct(p) => Ok(p.origin),
        }
    }

    /// Exact `a`-points with multiplicity and modulus at most `rmax`.
    ///
    /// Rational models support every target; product models support
    /// `0` (when the zero lattices are known) and `∞`. Series models
    /// count zeros by winding numbers instead, see [`super::series_zeros`].
    pub fn points(&self, target: Target, rmax: f64) -> Result<Vec<(Complex64, u32)>> {
        let within = |v: Vec<(Complex64, u32)>| v.into_iter().filter(|p| p.0.norm() <= rmax).collect();
        match (&self.kind, target) {
            (ModelKind::Rational(f), Target::Infinity) => Ok(within(f.poles().to_vec())),
            (ModelKind::Rational(f), Target::Value(a)) => {
                if a == Complex64::default() {
                    Ok(within(f.zeros().to_vec()))
                } else {
                    Ok(within(f.sub_const(a)?.zeros().to_vec()))
                }
            }
            (ModelKind::QProduct(p), Target::Infinity) => Ok(lattice_points(&p.poles, rmax)),
            (ModelKind::QProduct(p), Target::Value(a)) if a == Complex64::default() => match &p.zeros {
                Some(z) => Ok(lattice_points(z, rmax)),
                None => Err(Error::TargetUnsupported(
                    "zeros of this product model are not known".into(),
                )),
            },
            (ModelKind::EntireSeries(_), Target::Infinity) => Ok(Vec::new()),
            (_, t) => Err(Error::TargetUnsupported(format!(
                "no exact {t}-points for this model kind"
            ))),
        }
    }

    /// Moduli of the known zeros and poles up to `rmax`.
    pub fn singular_moduli(&self, rmax: f64) -> Vec<f64> {
        let mut out: Vec<f64> = [Target::zero(), Target::Infinity]
            .into_iter()
            .filter_map(|t| self.points(t, rmax).ok())
            .flatten()
            .map(|p| p.0.norm())
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

fn lattice_points(lattices: &[Lattice], rmax: f64) -> Vec<(Complex64, u32)> {
    lattices.iter().flat_map(|l| l.points_within(rmax)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn rational_leading_term_and_points() {
        let f = RationalFunction::from_polys(Poly::from_real(&[0.0, 0.0, 3.0]), Poly::from_real(&[2.0, 1.0])).unwrap();
        let m = MeroModel::rational(f);
        assert_eq!(m.origin_leading().unwrap(), (Complex64::new(1.5, 0.0), 2));
        assert_eq!(m.points(Target::Infinity, 10.0).unwrap().len(), 1);
        assert_eq!(m.points(Target::zero(), 10.0).unwrap(), vec![(Complex64::default(), 2)]);
        assert_eq!(m.points(Target::real(3.0), 100.0).unwrap().len(), 2);
    }

    #[test]
    fn product_models() {
        let m = MeroModel::E_q_product(QParam::real(0.5).unwrap()).unwrap();
        assert_eq!(m.points(Target::zero(), 10.0).unwrap().len(), 4);
        assert!(m.points(Target::real(1.0), 10.0).is_err());
        assert!(
            (m.ln_abs(Complex64::new(3.0, 0.0)).unwrap() - m.eval(Complex64::new(3.0, 0.0)).unwrap().norm().ln()).abs()
                < 1e-12
        );
        assert!(MeroModel::etilde_product(QParam::real(0.5).unwrap()).is_err());
    }

    #[test]
    fn series_models_need_a_radius() {
        assert!(MeroModel::series(TruncatedSeries::uncertified(vec![Complex64::new(1.0, 0.0); 4])).is_err());
        let m = MeroModel::series(TruncatedSeries::from_real(&[1.0, 1.0])).unwrap();
        assert!(m.points(Target::zero(), 1.0).is_err());
        assert!(m.points(Target::Infinity, 1.0).unwrap().is_empty());
    }
}
