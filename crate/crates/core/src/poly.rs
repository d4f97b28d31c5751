//! Dense complex polynomials and their roots.
//!
//! Roots come from the eigenvalues of the companion matrix (complex Schur
//! form), polished by Newton steps on the original coefficients. Nearby
//! eigenvalues are grouped into multiple roots when the group passes a
//! backward-error test.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Roots closer than this (relative to `max(1, |z|)`) are one root.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Eigenvalue spread of a multiple root can reach this before it is
/// treated as a set of distinct roots.
const WIDE_CLUSTER_TOL: f64 = 2e-3;
const MERGE_BACKWARD: f64 = 1e4 * f64::EPSILON;
const SPLIT_BACKWARD: f64 = 1e7 * f64::EPSILON;

/// `sum coeffs[i] z^i`, with no trailing zero coefficients (the zero
/// polynomial is `[0]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Poly { coeffs }
    }

    pub fn from_real(c: &[f64]) -> Self {
        Poly::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    /// `lead prod (z - r_i)^{m_i}`.
    pub fn from_roots(lead: Complex64, roots: &[(Complex64, u32)]) -> Self {
        let mut p = Poly::constant(lead);
        for &(r, m) in roots {
            for _ in 0..m {
                p = p.mul(&Poly::new(vec![-r, ONE]));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn lead(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// `sum |c_i| |z|^i`, the scale of rounding errors in `eval`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(ZERO) + o.coeffs.get(i).copied().unwrap_or(ZERO))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-ONE))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `P(cz)`.
    pub fn scale_arg(&self, c: Complex64) -> Poly {
        let mut ck = ONE;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            out.push(x * ck);
            ck *= c;
        }
        Poly::new(out)
    }

    /// Drops leading coefficients below `tol` times the largest one.
    pub fn trimmed(&self, tol: f64) -> Poly {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().unwrap().norm() <= tol * scale {
            c.pop();
        }
        Poly::new(c)
    }

    /// Divides out `z^k` when the `k` lowest coefficients vanish exactly.
    pub fn strip_origin(&self) -> (Poly, usize) {
        let k = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        if k == self.coeffs.len() {
            return (self.clone(), 0);
        }
        (Poly::new(self.coeffs[k..].to_vec()), k)
    }

    /// All roots, with repetition, polished by Newton steps.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::RootFindingFailed(
                "the zero polynomial has every point as a root".into(),
            ));
        }
        let (p, k) = self.strip_origin();
        let mut out = vec![ZERO; k];
        let n = p.degree();
        if n == 0 {
            return Ok(out);
        }
        if n == 1 {
            out.push(-p.coeffs[0] / p.coeffs[1]);
            return Ok(out);
        }
        let lead = p.lead();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = ONE;
        }
        for i in 0..n {
            m[(i, n - 1)] = -p.coeffs[i] / lead;
        }
        let eig = Schur::try_new(m, f64::EPSILON, 100_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| Error::RootFindingFailed(format!("no Schur convergence at degree {n}")))?;
        let dp = p.derivative();
        for z in eig.iter() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::RootFindingFailed(format!("non-finite eigenvalue {z}")));
            }
            out.push(newton_polish(&p, &dp, *z));
        }
        Ok(out)
    }

    /// Distinct roots with multiplicities.
    pub fn roots_with_multiplicity(&self) -> Result<Vec<(Complex64, u32)>> {
        let raw = self.roots()?;
        cluster_roots(self, &raw)
    }
}

fn newton_polish(p: &Poly, dp: &Poly, z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut fz = p.eval(z).norm();
    for _ in 0..50 {
        if fz == 0.0 {
            break;
        }
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(z) / d;
        let cand = z - step;
        let fc = p.eval(cand).norm();
        if !(fc < fz) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// Single-linkage groups of indices with pairwise links below `tol`.
fn components(roots: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if near(roots[i], roots[j], tol) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}

enum Verdict {
    Multiple(Complex64),
    Distinct,
    Ambiguous(Complex64),
}

/// Tests whether `m` nearby eigenvalues are one root of multiplicity `m`.
///
/// The root of `p^{(m-1)}` near the centroid is a simple root for a true
/// `m`-fold root of `p`; `p` then vanishes there to rounding level.
fn validate_multiple(p: &Poly, members: &[Complex64]) -> Verdict {
    let m = members.len();
    let centroid = members.iter().sum::<Complex64>() / m as f64;
    let mut d = p.clone();
    for _ in 0..m - 1 {
        d = d.derivative();
    }
    let c = newton_polish(&d, &d.derivative(), centroid);
    let backward = p.eval(c).norm() / p.eval_abs(c).max(f64::MIN_POSITIVE);
    if backward <= MERGE_BACKWARD {
        Verdict::Multiple(c)
    } else if backward >= SPLIT_BACKWARD {
        Verdict::Distinct
    } else {
        Verdict::Ambiguous(c)
    }
}

fn cluster_roots(p: &Poly, raw: &[Complex64]) -> Result<Vec<(Complex64, u32)>> {
    let mut out = Vec::new();
    for group in components(raw, WIDE_CLUSTER_TOL) {
        let members: Vec<Complex64> = group.iter().map(|&i| raw[i]).collect();
        if members.len() == 1 {
            out.push((members[0], 1));
            continue;
        }
        match validate_multiple(p, &members) {
            Verdict::Multiple(c) => out.push((c, members.len() as u32)),
            Verdict::Ambiguous(c) => return Err(Error::MultiplicityAmbiguous(c)),
            Verdict::Distinct => {
                for tight in components(&members, CLUSTER_TOL) {
                    let sub: Vec<Complex64> = tight.iter().map(|&i| members[i]).collect();
                    let c = sub.iter().sum::<Complex64>() / sub.len() as f64;
                    out.push((c, sub.len() as u32));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()).then(a.0.arg().total_cmp(&b.0.arg())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn has_root(roots: &[(Complex64, u32)], z: Complex64, m: u32, tol: f64) -> bool {
        roots.iter().any(|(r, k)| *k == m && (r - z).norm() < tol)
    }

    #[test]
    fn simple_roots() {
        let p = Poly::from_real(&[-6.0, 11.0, -6.0, 1.0]);
        let r = p.roots_with_multiplicity().unwrap();
        assert_eq!(r.len(), 3);
        for z in [1.0, 2.0, 3.0] {
            assert!(has_root(&r, c(z), 1, 1e-12));
        }
    }

    #[test]
    fn multiple_roots_are_merged() {
        let p = Poly::from_roots(
            c(2.0),
            &[(c(1.0), 3), (Complex64::new(-0.5, 2.0), 2), (c(0.0), 2), (c(4.0), 1)],
        );
        let r = p.roots_with_multiplicity().unwrap();
        assert_eq!(r.len(), 4, "{r:?}");
        assert!(has_root(&r, c(1.0), 3, 1e-9));
        assert!(has_root(&r, Complex64::new(-0.5, 2.0), 2, 1e-9));
        assert!(has_root(&r, c(0.0), 2, 1e-300));
        assert!(has_root(&r, c(4.0), 1, 1e-12));
    }

    #[test]
    fn close_distinct_roots_stay_apart() {
        let p = Poly::from_roots(ONE, &[(c(1.0), 1), (c(1.0005), 1), (c(-2.0), 1)]);
        let r = p.roots_with_multiplicity().unwrap();
        assert_eq!(r.len(), 3, "{r:?}");
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(Poly::constant(ZERO).roots().is_err());
        assert!(Poly::constant(c(3.0)).roots().unwrap().is_empty());
    }

    #[test]
    fn arithmetic() {
        let p = Poly::from_real(&[1.0, 2.0]);
        let q = Poly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.mul(&q), Poly::from_real(&[-1.0, -2.0, 1.0, 2.0]));
        assert_eq!(q.sub(&q), Poly::constant(ZERO));
        assert_eq!(q.derivative(), Poly::from_real(&[0.0, 2.0]));
        assert_eq!(q.scale_arg(c(2.0)), Poly::from_real(&[-1.0, 0.0, 4.0]));
        assert_eq!(Poly::from_real(&[1.0, 1.0, 1e-20]).trimmed(1e-14).degree(), 1);
    }
}
