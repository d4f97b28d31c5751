//! Seeded test sets shared by the `verify` suites and the acceptance tests.

use jackson_core::nevanlinna::{MeroModel, ProductModel};
use jackson_core::poly::Poly;
use jackson_core::qcore::{QParam, TruncatedSeries};
use jackson_core::qode::RationalFunction;
use jackson_core::qoperator::Sampler;
use jackson_core::qspecial::{etilde_q, ln_pochhammer_inf, E_q, E_q_product, E_q_product_ln, Lattice, Multiplicity};
use jackson_core::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

const PRODUCT_TOL: f64 = 1e-17;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_point(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex64 {
    let r = (rng.random_range(rmin.ln()..rmax.ln())).exp();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random rational functions with simple zeros and poles of moduli in
/// `[0.2, 50]`, numerator and denominator degrees at most `max_degree`.
pub fn random_rationals(seed: u64, count: usize, max_degree: usize) -> Vec<RationalFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let dn = rng.random_range(0..=max_degree);
            let dd = rng.random_range(0..=max_degree);
            if dn + dd == 0 {
                continue;
            }
            let zeros: Vec<(Complex64, u32)> = (0..dn).map(|_| (random_point(&mut rng, 0.2, 50.0), 1)).collect();
            let poles: Vec<(Complex64, u32)> = (0..dd).map(|_| (random_point(&mut rng, 0.2, 50.0), 1)).collect();
            let lead = random_point(&mut rng, 0.5, 2.0);
            let f = RationalFunction::from_roots(lead, &zeros, &poles);
            if !f.is_constant() {
                break f;
            }
        })
        .collect()
}

/// Rational functions of total degree at most `max_degree` with real
/// coefficients drawn from `[-2, 2]`; used where exact multiplicities
/// and coprimality come from the root finder.
pub fn random_real_rationals(seed: u64, count: usize, max_degree: usize) -> Vec<RationalFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let deg = rng.random_range(1..=max_degree);
        let dd = rng.random_range(0..=deg);
        let dn = if dd == deg {
            deg - rng.random_range(0..=deg)
        } else {
            deg
        };
        let mut coeffs = |d: usize| -> Vec<f64> {
            let mut v: Vec<f64> = (0..=d).map(|_| rng.random_range(-2.0..2.0)).collect();
            if v[d].abs() < 0.25 {
                v[d] = 1.0;
            }
            v
        };
        let (num, den) = (coeffs(dn), coeffs(dd));
        if let Ok(f) = RationalFunction::from_polys(Poly::from_real(&num), Poly::from_real(&den)) {
            if !f.is_constant() && f.degree() <= max_degree {
                out.push(f);
            }
        }
    }
    out
}

/// `ẽ_q` truncated at order 60, for `|q| > 1`.
pub fn etilde_series(qp: &QParam) -> TruncatedSeries {
    etilde_q(qp, 60)
}

/// `E_q` truncated at order 60, for `|q| < 1`.
#[allow(non_snake_case)]
pub fn E_series(qp: &QParam) -> TruncatedSeries {
    E_q(qp, 60)
}

/// Entire series with `|q|^{-n^2/2}`-type coefficient decay, each paired
/// with the base of the shift `z -> q^k z` used by the central-index check.
pub fn wiman_valiron_set() -> Vec<(&'static str, TruncatedSeries, QParam)> {
    let q2 = QParam::real(2.0).unwrap();
    let qh = QParam::real(0.5).unwrap();
    vec![
        ("etilde_2, shift 2", etilde_series(&q2), q2),
        ("etilde_2, shift 1/2", etilde_series(&q2), qh),
        ("E_1/2, shift 1/2", E_series(&qh), qh),
    ]
}

/// Radii `sqrt(2) 2^m`, `m = lo..=hi`: a fixed phase against the doubling
/// lattices of the central index.
pub fn dyadic_radii(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|m| std::f64::consts::SQRT_2 * 2f64.powi(m)).collect()
}

/// Solution of `D_q f + z f = 0`, `|q| > 1`, `f(0) = 1`:
/// `f(z) = prod_{j>=1} (1 - (q-1) z^2 q^{-2j})`.
pub fn quadratic_lattice_solution(qp: QParam) -> MeroModel {
    let q = qp.q();
    let root = q / (q - 1.0).sqrt();
    let p = qp.inverse().q() * qp.inverse().q();
    let ln = move |z: Complex64| ln_pochhammer_inf((q - 1.0) * z * z * p, p, PRODUCT_TOL);
    let sampler = Sampler::new(move |z| ln(z).exp()).with_log(ln);
    MeroModel::product(ProductModel {
        sampler,
        zeros: Some(vec![Lattice::simple(root, q), Lattice::simple(-root, q)]),
        poles: Vec::new(),
        origin: (c(1.0), 0),
    })
    .with_q(qp)
}

/// `A(z) = z`.
pub fn identity_coefficient() -> MeroModel {
    MeroModel::rational(RationalFunction::polynomial(Poly::from_real(&[0.0, 1.0])).unwrap())
}

/// The pair `A = (1 - E_q(z)) / ((q - 1) z)`, `f = prod_{j>=0} 1/E_q(q^j z)`
/// for `0 < q < 1`: `f` solves `D_q f + A f = 0`, `A` has logarithmic
/// order two and `f` has poles `-q^{-m}` of multiplicity `m + 1`.
pub fn double_product_pair(qp: QParam) -> Result<(MeroModel, MeroModel)> {
    let q = qp.q();
    E_q_product(c(0.0), &qp, PRODUCT_TOL)?;
    let a_at = move |z: Complex64| {
        if z.norm() < 1e-8 {
            // series limit as z -> 0
            return -1.0 / ((1.0 - q) * (q - 1.0));
        }
        (1.0 - E_q_product(z, &qp, PRODUCT_TOL).unwrap()) / ((q - 1.0) * z)
    };
    let a = MeroModel::product(ProductModel {
        sampler: Sampler::new(a_at),
        zeros: None,
        poles: Vec::new(),
        origin: (a_at(c(0.0)), 0),
    })
    .with_q(qp);
    // ln f = -sum_m (m + 1) ln(1 + q^m z)
    let ln_f = move |z: Complex64| {
        let mut s = Complex64::default();
        let mut w = z;
        let mut m = 0u32;
        while (m as f64 + 1.0) * w.norm() >= PRODUCT_TOL && m < 100_000 {
            s -= (m as f64 + 1.0) * (1.0 + w).ln();
            w *= q;
            m += 1;
        }
        s
    };
    let f = MeroModel::product(ProductModel {
        sampler: Sampler::new(move |z| ln_f(z).exp()).with_log(ln_f),
        zeros: Some(Vec::new()),
        poles: vec![Lattice {
            first: c(-1.0),
            ratio: qp.inverse().q(),
            multiplicity: Multiplicity::Linear { base: 1, step: 1 },
        }],
        origin: (c(1.0), 0),
    })
    .with_q(qp);
    Ok((a, f))
}

/// Zero-order models for the logarithmic difference check, each with the
/// base `q` it is checked against.
pub fn zero_order_set(seed: u64) -> Vec<(String, MeroModel, QParam)> {
    let q2 = QParam::real(2.0).unwrap();
    let qh = QParam::real(0.5).unwrap();
    let mut out: Vec<(String, MeroModel, QParam)> = random_rationals(seed, 5, 3)
        .into_iter()
        .enumerate()
        .map(|(i, f)| (format!("rational #{i}"), MeroModel::rational(f), q2))
        .collect();
    out.push(("E_1/2 product".into(), MeroModel::E_q_product(qh).unwrap(), qh));
    out.push(("etilde_2 product".into(), MeroModel::etilde_product(q2).unwrap(), q2));
    out
}

/// `ln|E_q(z)|` through the product, for oracles in tests.
#[allow(non_snake_case)]
pub fn ln_abs_E(z: Complex64, qp: &QParam) -> f64 {
    E_q_product_ln(z, qp, PRODUCT_TOL).map(|v| v.re).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jackson_core::nevanlinna::log_derivative;

    #[test]
    fn random_sets_are_reproducible() {
        let a = random_rationals(7, 4, 4);
        let b = random_rationals(7, 4, 4);
        for (f, g) in a.iter().zip(&b) {
            assert_eq!(f.num().coeffs(), g.num().coeffs());
        }
        assert_eq!(random_real_rationals(3, 10, 4).len(), 10);
    }

    #[test]
    fn growth_pairs_solve_their_equations() {
        let q2 = QParam::real(2.0).unwrap();
        let f = quadratic_lattice_solution(q2);
        let z = Complex64::new(3.3, 1.2);
        let d = log_derivative(&f, z, &q2, 1).unwrap();
        assert!((d + z).norm() < 1e-12 * z.norm());
        let qh = QParam::real(0.5).unwrap();
        let (a, f) = double_product_pair(qh).unwrap();
        for z in [Complex64::new(0.3, 0.1), Complex64::new(40.0, -7.0)] {
            let d = log_derivative(&f, z, &qh, 1).unwrap();
            let av = a.eval(z).unwrap();
            assert!((d + av).norm() < 1e-10 * av.norm(), "{d} {av}");
        }
    }
}
