use super::model::MeroModel;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qcore::{QParam, TruncatedSeries};
use crate::qode::{RationalFunction, RationalSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// On-disk description of a [`MeroModel`].
///
/// ```json
/// {"kind": "rational", "num": [[-1, 0], [0, 0], [1, 0]], "den": [[0, 0], [1, 0]], "q": [0.5, 0]}
/// {"kind": "etilde_q", "q": [2, 0]}
/// {"kind": "E_q", "q": [0.5, 0]}
/// {"kind": "series", "coeffs": [[1, 0], [1, 0], [0.5, 0]], "exact": true}
/// ```
///
/// A `series` without `"exact": true` must show enough coefficient decay
/// to certify a safe radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ModelSpec {
    #[serde(rename = "rational")]
    Rational {
        num: Vec<[f64; 2]>,
        #[serde(default = "one")]
        den: Vec<[f64; 2]>,
        #[serde(default)]
        q: Option<[f64; 2]>,
    },
    #[serde(rename = "series")]
    Series {
        coeffs: Vec<[f64; 2]>,
        #[serde(default)]
        exact: bool,
        #[serde(default)]
        q: Option<[f64; 2]>,
    },
    #[serde(rename = "etilde_q")]
    EtildeQ { q: [f64; 2] },
    #[serde(rename = "E_q")]
    EQ { q: [f64; 2] },
}

fn one() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

fn qparam(q: [f64; 2]) -> Result<QParam> {
    QParam::new(Complex64::new(q[0], q[1]))
}

impl ModelSpec {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// A real polynomial with ascending coefficients.
    pub fn polynomial(coeffs: &[f64], q: Option<f64>) -> Self {
        ModelSpec::Rational {
            num: coeffs.iter().map(|&c| [c, 0.0]).collect(),
            den: one(),
            q: q.map(|q| [q, 0.0]),
        }
    }

    pub fn to_model(&self) -> Result<MeroModel> {
        match self {
            ModelSpec::Rational { q, .. } => {
                let m = MeroModel::rational(self.rational()?.expect("rational kind"));
                Ok(match q {
                    Some(q) => m.with_q(qparam(*q)?),
                    None => m,
                })
            }
            ModelSpec::Series { coeffs, exact, q } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidArgument("series needs at least one coefficient".into()));
                }
                let c: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
                let s = if *exact {
                    TruncatedSeries::polynomial(c)
                } else {
                    TruncatedSeries::new(c)
                };
                let m = MeroModel::series(s)?;
                Ok(match q {
                    Some(q) => m.with_q(qparam(*q)?),
                    None => m,
                })
            }
            ModelSpec::EtildeQ { q } => MeroModel::etilde_product(qparam(*q)?),
            ModelSpec::EQ { q } => MeroModel::E_q_product(qparam(*q)?),
        }
    }

    /// The model's rational function when it is one.
    pub fn rational(&self) -> Result<Option<RationalFunction>> {
        match self {
            ModelSpec::Rational { num, den, .. } => RationalSpec {
                num: num.clone(),
                den: den.clone(),
            }
            .to_rational()
            .map(Some),
            _ => Ok(None),
        }
    }

    /// The model as a polynomial, when it is one.
    pub fn as_polynomial(&self) -> Result<Option<Poly>> {
        Ok(self
            .rational()?
            .filter(|r| r.is_polynomial())
            .map(|r| r.num().scale(r.den().coeffs()[0].inv())))
    }
}
