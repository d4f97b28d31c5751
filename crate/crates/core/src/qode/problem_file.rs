use super::{QdeProblem, RationalFunction};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qcore::QParam;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `num / den` as ascending `[re, im]` coefficient lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    pub num: Vec<[f64; 2]>,
    #[serde(default = "one")]
    pub den: Vec<[f64; 2]>,
}

fn one() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

/// On-disk form of a [`QdeProblem`] plus its truncation order.
///
/// ```json
/// {"k": 1, "q": [0.5, 0], "A": {"num": [[-1, 0]], "den": [[1, 0]]},
///  "B": {"num": [[0, 0]]}, "initial": [[1, 0]], "N": 30}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: usize,
    pub q: [f64; 2],
    #[serde(rename = "A")]
    pub a: RationalSpec,
    #[serde(rename = "B", default)]
    pub b: Option<RationalSpec>,
    pub initial: Vec<[f64; 2]>,
    #[serde(rename = "N")]
    pub n: usize,
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl RationalSpec {
    pub fn to_rational(&self) -> Result<RationalFunction> {
        if self.num.is_empty() || self.den.is_empty() {
            return Err(Error::InvalidArgument("coefficient lists must be nonempty".into()));
        }
        RationalFunction::from_polys(Poly::new(complexes(&self.num)), Poly::new(complexes(&self.den)))
    }
}

impl ProblemFile {
    /// Parses JSON; the error text carries serde's line and column.
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_problem(&self) -> Result<QdeProblem> {
        let qp = QParam::with_order(Complex64::new(self.q[0], self.q[1]), self.n)?;
        let b = match &self.b {
            Some(b) => b.to_rational()?,
            None => RationalFunction::zero(),
        };
        QdeProblem::new(self.k, self.a.to_rational()?, b, qp, complexes(&self.initial))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_example() {
        let text = r#"{"k": 1, "q": [0.5, 0], "A": {"num": [[-1, 0]], "den": [[1, 0]]},
                       "B": {"num": [[0, 0]]}, "initial": [[1, 0]], "N": 30}"#;
        let pf = ProblemFile::from_json(text).unwrap();
        assert_eq!(pf.n, 30);
        let prob = pf.to_problem().unwrap();
        assert_eq!(prob.k, 1);
        assert!(prob.b.is_zero());
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = ProblemFile::from_json("{\"k\": 1,\n \"q\": [0.5]}").unwrap_err();
        assert_eq!(err.line(), 2);
        assert!(ProblemFile::from_json(r#"{"k": 1, "bogus": 2}"#).is_err());
    }
}
