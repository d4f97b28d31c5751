use jackson_core::qcore::{QParam, TruncatedSeries};
use jackson_core::qspecial::{etilde_product, etilde_q, exp_q, phi_rs, E_q, E_q_product, PhiParams};
use jackson_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest `|(f g)_n - δ_{n0}|`.
fn product_defect(f: &TruncatedSeries, g: &TruncatedSeries) -> f64 {
    let p = f.mul(g);
    (0..=p.trunc_order())
        .map(|n| (p.coeff(n) - if n == 0 { ONE } else { Complex64::default() }).norm())
        .fold(0.0, f64::max)
}

/// `|a - b|` over the sum of the series term moduli at `z`.
fn series_rel(s: &TruncatedSeries, z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let scale: f64 = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.norm() * z.norm().powi(n as i32))
        .sum();
    (a - b).norm() / scale
}

proptest! {
    #[test]
    fn exp_q_times_exp_inverse_at_minus_z(arg in 0.0f64..TAU) {
        let qp = QParam::new(Complex64::from_polar(2.0, arg)).unwrap();
        let f = exp_q(&qp, 30);
        let g = exp_q(&qp.inverse(), 30).scale_arg(-ONE);
        prop_assert!(product_defect(&f, &g) < 1e-9);
    }

    #[test]
    fn etilde_times_inverse_base(m in prop_oneof![0.3f64..0.8, 1.25f64..3.0], arg in 0.0f64..TAU) {
        let qp = QParam::new(Complex64::from_polar(m, arg)).unwrap();
        let f = etilde_q(&qp, 30);
        let g = etilde_q(&qp.inverse(), 30).scale_arg(qp.inverse().q());
        prop_assert!(product_defect(&f, &g) < 1e-9);
    }

    #[test]
    fn etilde_product_matches_series(m in 1.5f64..3.0, arg in -0.5f64..0.5, r in 0.0f64..50.0, t in 0.0f64..TAU) {
        let qp = QParam::new(Complex64::from_polar(m, arg)).unwrap();
        let s = etilde_q(&qp, 80);
        let z = Complex64::from_polar(r, t);
        prop_assume!(s.safe_radius().radius().is_some_and(|rad| z.norm() < rad));
        let (a, b) = (s.eval(z).unwrap(), etilde_product(z, &qp, 1e-17).unwrap());
        prop_assert!(series_rel(&s, z, a, b) < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn e_q_product_matches_series(m in 0.3f64..0.7, arg in -0.5f64..0.5, r in 0.0f64..50.0, t in 0.0f64..TAU) {
        let qp = QParam::new(Complex64::from_polar(m, arg)).unwrap();
        let s = E_q(&qp, 80);
        let z = Complex64::from_polar(r, t);
        prop_assume!(s.safe_radius().radius().is_some_and(|rad| z.norm() < rad));
        let (a, b) = (s.eval(z).unwrap(), E_q_product(z, &qp, 1e-17).unwrap());
        prop_assert!(series_rel(&s, z, a, b) < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn phi_one_zero_with_zero_alpha_is_etilde(m in prop_oneof![0.3f64..0.8, 1.25f64..3.0], arg in 0.0f64..TAU) {
        let qp = QParam::new(Complex64::from_polar(m, arg)).unwrap();
        let phi = phi_rs(&PhiParams { alpha: vec![Complex64::default()], beta: vec![], qp }, 30).unwrap();
        let e = etilde_q(&qp, 30);
        prop_assert_eq!(phi.coeffs(), e.coeffs());
    }
}
