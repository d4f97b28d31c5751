//! Named property suites run by `jackson verify`.

use crate::fixtures;
use jackson_core::nevanlinna::{
    defect_estimates, growth_lower_bound_check, jensen_residual, logderiv_lemma_check, nudge, sft_check,
    wiman_valiron_check, MeroModel, RadialGrid, Target,
};
use jackson_core::poly::Poly;
use jackson_core::qcore::{QParam, TruncatedSeries};
use jackson_core::qode::{solve_series, verify_pointwise, QdeProblem, RationalFunction};
use jackson_core::qoperator::{casorati_series, dq_series, kernel_check, rules, Sampler};
use jackson_core::qspecial::{etilde_q, exp_q, sinq_cosq, E_q};
use jackson_core::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITES: &[&str] = &[
    "identities",
    "lemma4.1",
    "casorati",
    "solver",
    "jensen",
    "sft",
    "logderiv",
    "wiman-valiron",
    "growth",
];

/// One line of a suite's pass/fail table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: String,
    pub value: f64,
    /// The bound `value` is compared against.
    pub limit: f64,
    /// `true` when `value >= limit` is required instead of `value <= limit`.
    pub lower_bound: bool,
}

impl CheckRow {
    fn at_most(suite: &'static str, check: impl Into<String>, value: f64, limit: f64) -> Self {
        CheckRow {
            suite,
            check: check.into(),
            value,
            limit,
            lower_bound: false,
        }
    }

    fn at_least(suite: &'static str, check: impl Into<String>, value: f64, limit: f64) -> Self {
        CheckRow {
            suite,
            check: check.into(),
            value,
            limit,
            lower_bound: true,
        }
    }

    fn flag(suite: &'static str, check: impl Into<String>, ok: bool) -> Self {
        Self::at_least(suite, check, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

/// Runs one suite, or every suite for `"all"`; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, tol: Option<f64>) -> Option<Result<Vec<CheckRow>>> {
    let one = |s: &str| -> Result<Vec<CheckRow>> {
        match s {
            "identities" => identities(tol.unwrap_or(1e-9)),
            "lemma4.1" => operator_rules(seed, tol.unwrap_or(1e-9)),
            "casorati" => casorati(tol.unwrap_or(1e-8)),
            "solver" => solver(seed, tol.unwrap_or(1e-9)),
            "jensen" => jensen(seed, tol.unwrap_or(1e-6)),
            "sft" => sft(seed),
            "logderiv" => logderiv(seed),
            "wiman-valiron" => wiman_valiron(),
            "growth" => growth(),
            _ => unreachable!(),
        }
    };
    if name == "all" {
        return Some(
            SUITES
                .iter()
                .map(|s| one(s))
                .collect::<Result<Vec<_>>>()
                .map(|v| v.concat()),
        );
    }
    SUITES.contains(&name).then(|| one(name))
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn bases() -> Vec<QParam> {
    [c(2.0), c(0.5), Complex64::new(1.0, 0.5)]
        .into_iter()
        .map(|q| QParam::new(q).unwrap())
        .collect()
}

/// Largest `|(f g)_n - δ_{n0}|` relative to `sum_j |f_j g_{n-j}|`.
fn product_is_one(f: &TruncatedSeries, g: &TruncatedSeries) -> f64 {
    let n = f.trunc_order().min(g.trunc_order());
    (0..=n)
        .map(|k| {
            let (mut s, mut mag) = (Complex64::default(), 0.0);
            for j in 0..=k {
                let t = f.coeff(j) * g.coeff(k - j);
                s += t;
                mag += t.norm();
            }
            let target = if k == 0 { c(1.0) } else { c(0.0) };
            (s - target).norm() / mag.max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Largest relative coefficient difference, with exact zeros required to match.
fn coeff_distance(a: &TruncatedSeries, b: &TruncatedSeries, n: usize) -> f64 {
    (0..=n)
        .map(|k| {
            let (x, y) = (a.coeff(k), b.coeff(k));
            (x - y).norm() / x.norm().max(y.norm()).max(f64::MIN_POSITIVE)
        })
        .map(|d| if d.is_nan() { 0.0 } else { d })
        .fold(0.0, f64::max)
}

fn identities(tol: f64) -> Result<Vec<CheckRow>> {
    const S: &str = "identities";
    let n = 30;
    let mut rows = Vec::new();
    for qp in bases() {
        let q = qp.q();
        let inv = qp.inverse();
        let e = exp_q(&qp, n);
        let e_inv = exp_q(&inv, n).scale_arg(c(-1.0));
        rows.push(CheckRow::at_most(
            S,
            format!("e_q(z) e_1/q(-z) = 1, q={q}"),
            product_is_one(&e, &e_inv),
            tol,
        ));
        let big = E_q(&qp, n).scale_arg(c(-1.0));
        rows.push(CheckRow::at_most(
            S,
            format!("etilde_q(z) E_q(-z) = 1, q={q}"),
            product_is_one(&etilde_q(&qp, n), &big),
            tol,
        ));
        let (s, co) = sinq_cosq(&qp, n);
        rows.push(CheckRow::at_most(
            S,
            format!("D_q sin_q = cos_q, q={q}"),
            coeff_distance(&dq_series(&s, &qp), &co, n - 1),
            tol,
        ));
        rows.push(CheckRow::at_most(
            S,
            format!("D_q cos_q = -sin_q, q={q}"),
            coeff_distance(&dq_series(&co, &qp), &s.scale(c(-1.0)), n - 1),
            tol,
        ));
    }
    Ok(rows)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Sampler {
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Sampler::polynomial(coeffs)
}

fn random_z(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.3..1.5), rng.random_range(0.0..std::f64::consts::TAU))
}

fn operator_rules(seed: u64, tol: f64) -> Result<Vec<CheckRow>> {
    const S: &str = "lemma4.1";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for qv in [0.5, 2.0] {
        let qp = QParam::real(qv)?;
        let (mut prod, mut quot, mut chain, mut inv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 4);
            let g = random_poly(&mut rng, 3);
            let z = random_z(&mut rng);
            prod = prod.max(rules::product_rule(&f, &g, z, &qp)?);
            quot = quot.max(rules::quotient_rule(&f, &g, z, &qp)?);
            if let Some(r) = rules::chain_rule(&f, &g, z, &qp)? {
                chain = chain.max(r);
            }
            inv = inv.max(rules::inverse_rule_monomial(rng.random_range(1..6), z, &qp)?);
        }
        rows.push(CheckRow::at_most(S, format!("product rule, q={qv}"), prod, tol));
        rows.push(CheckRow::at_most(S, format!("quotient rule, q={qv}"), quot, tol));
        rows.push(CheckRow::at_most(S, format!("chain rule, q={qv}"), chain, tol));
        rows.push(CheckRow::at_most(S, format!("inverse rule, q={qv}"), inv, tol));
    }
    let qp = QParam::real(0.5)?;
    let (mut fund, mut by_parts) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let f = random_poly(&mut rng, 4);
        let g = random_poly(&mut rng, 3);
        let (r1, r2) = rules::integral_rules(&f, random_z(&mut rng), &qp, 1e-15)?;
        fund = fund.max(r1).max(r2);
        by_parts = by_parts.max(rules::integration_by_parts(&f, &g, &qp, 1e-15)?);
    }
    rows.push(CheckRow::at_most(S, "fundamental theorem, q=0.5", fund, tol));
    rows.push(CheckRow::at_most(S, "integration by parts, q=0.5", by_parts, tol));
    Ok(rows)
}

fn casorati(tol: f64) -> Result<Vec<CheckRow>> {
    const S: &str = "casorati";
    let qp = QParam::real(2.0)?;
    let n = 30;
    let (s, co) = sinq_cosq(&qp, n);
    let cj = casorati_series(&s, &co, &qp);
    let mut rows = vec![CheckRow::flag(
        S,
        "C_J(sin_q, cos_q) is not in the kernel of D_q",
        !kernel_check(&cj, &qp, 1e-12),
    )];
    // D_q C = A (q - 1) z C with A = 1
    let lhs = dq_series(&cj, &qp);
    let top = lhs.trunc_order();
    let scale = cj.max_abs().max(1.0);
    let res = (0..=top)
        .map(|k| {
            let rhs = if k == 0 {
                c(0.0)
            } else {
                (qp.q() - 1.0) * cj.coeff(k - 1)
            };
            (lhs.coeff(k) - rhs).norm() / scale
        })
        .fold(0.0, f64::max);
    rows.push(CheckRow::at_most(S, "D_q C_J = (q-1) z C_J", res, tol));
    Ok(rows)
}

/// `A = -[5]_q z^4 / (z^5 + 1)` (first order) and `-[5]_q [4]_q z^3 / (z^5 + 1)`
/// (second order): both have `z^5 + 1` as a solution.
pub fn quintic_problems(qp: QParam) -> Result<[QdeProblem; 2]> {
    let q = qp.q();
    let b5 = (q.powi(5) - 1.0) / (q - 1.0);
    let b4 = (q.powi(4) - 1.0) / (q - 1.0);
    let den = Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let mono = |c: Complex64, k: usize| {
        let mut v = vec![Complex64::default(); k + 1];
        v[k] = c;
        Poly::new(v)
    };
    let a1 = RationalFunction::from_polys(mono(-b5, 4), den.clone())?;
    let a2 = RationalFunction::from_polys(mono(-b5 * b4, 3), den)?;
    Ok([
        QdeProblem::homogeneous(1, a1, qp, vec![c(1.0)])?,
        QdeProblem::homogeneous(2, a2, qp, vec![c(1.0), c(0.0)])?,
    ])
}

fn solver(seed: u64, tol: f64) -> Result<Vec<CheckRow>> {
    const S: &str = "solver";
    let mut rows = Vec::new();
    let qp = QParam::real(0.5)?;
    let prob = QdeProblem::homogeneous(1, RationalFunction::constant(c(-1.0)), qp, vec![c(1.0)])?;
    let sol = solve_series(&prob, 30)?.series;
    let mut poch = c(1.0);
    let mut worst = 0.0f64;
    for n in 0..=30 {
        if n > 0 {
            poch *= 1.0 - qp.q().powi(n as i32);
        }
        let expect = c(0.5f64.powi(n as i32)) / poch;
        worst = worst.max((sol.coeff(n) - expect).norm() / expect.norm());
    }
    rows.push(CheckRow::at_most(
        S,
        "D_q f = f, q=0.5: c_n = (1-q)^n/(q;q)_n",
        worst,
        1e-12,
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for qv in [2.0, 0.5] {
        for (k, p) in quintic_problems(QParam::real(qv)?)?.into_iter().enumerate() {
            let f = solve_series(&p, 20)?.series;
            let stray = (0..=20)
                .filter(|&n| n != 0 && n != 5)
                .map(|n| f.coeff(n).norm())
                .chain([(f.coeff(0) - 1.0).norm(), (f.coeff(5) - 1.0).norm()])
                .fold(0.0, f64::max);
            rows.push(CheckRow::at_most(
                S,
                format!("order {} quintic coefficients, q={qv}", k + 1),
                stray,
                1e-12,
            ));
            let pts: Vec<Complex64> = (0..20)
                .map(|_| {
                    Complex64::from_polar(
                        2.0 * rng.random_range(0.0f64..1.0).sqrt(),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            let sampler = Sampler::polynomial(f.coeffs().to_vec());
            let res = verify_pointwise(&p, &sampler, &pts)?
                .iter()
                .map(|r| r.rel)
                .fold(0.0, f64::max);
            rows.push(CheckRow::at_most(
                S,
                format!("order {} quintic pointwise, q={qv}", k + 1),
                res,
                tol,
            ));
        }
    }
    Ok(rows)
}

pub const JENSEN_RADII: [f64; 3] = [2.0, 10.0, 100.0];
pub const JENSEN_NODES: usize = 4096;

fn jensen(seed: u64, tol: f64) -> Result<Vec<CheckRow>> {
    const S: &str = "jensen";
    let mut rows = Vec::new();
    for r0 in JENSEN_RADII {
        let mut worst = 0.0f64;
        for f in fixtures::random_rationals(seed, 20, 4) {
            let m = MeroModel::rational(f);
            let r = nudge(r0, &m.singular_moduli(2.0 * r0));
            worst = worst.max(jensen_residual(&m, r, JENSEN_NODES)?);
        }
        rows.push(CheckRow::at_most(S, format!("20 rationals, r={r0}"), worst, tol));
    }
    Ok(rows)
}

pub fn sft_targets() -> [Target; 4] {
    [Target::zero(), Target::real(1.0), Target::real(-1.0), Target::Infinity]
}

fn sft(seed: u64) -> Result<Vec<CheckRow>> {
    const S: &str = "sft";
    let qp = QParam::real(0.5)?;
    let grid = RadialGrid::log_spaced(10.0, 1e4, 7, 1024)?;
    let (mut lowest, mut top_ratio, mut theta_sum) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for f in fixtures::random_real_rationals(seed, 10, 4) {
        let m = MeroModel::rational(f).with_q(qp);
        let rows = sft_check(&m, &sft_targets(), &qp, &grid)?;
        lowest = rows.iter().map(|r| r.margin).fold(lowest, f64::min);
        let last = rows.last().unwrap();
        top_ratio = top_ratio.min(last.margin / last.t);
        let d = defect_estimates(&m, &grid, &sft_targets())?;
        theta_sum = theta_sum.max(d.iter().map(|d| d.theta_j).sum());
    }
    Ok(vec![
        CheckRow::at_least(S, "smallest margin over 10..1e4", lowest, -10.0),
        CheckRow::at_least(S, "margin / T at r = 1e4", top_ratio, -0.05),
        CheckRow::at_most(S, "largest sum of Theta_J proxies at r = 1e4", theta_sum, 2.1),
    ])
}

fn logderiv(seed: u64) -> Result<Vec<CheckRow>> {
    const S: &str = "logderiv";
    let grid = RadialGrid::log_spaced(10.0, 1e4, 7, 1024)?;
    let mut rows = Vec::new();
    for (name, m, qp) in fixtures::zero_order_set(seed) {
        let rep = logderiv_lemma_check(&m, &qp, 1, &grid)?;
        rows.push(CheckRow::at_most(
            S,
            format!("m(r, D_q f/f)/T at r = 1e4, {name}"),
            rep.rows.last().unwrap().ratio,
            0.2,
        ));
        rows.push(CheckRow::flag(
            S,
            format!("ratio nonincreasing over the top decade, {name}"),
            rep.decreasing_top_decade,
        ));
    }
    Ok(rows)
}

fn wiman_valiron() -> Result<Vec<CheckRow>> {
    const S: &str = "wiman-valiron";
    let grid = RadialGrid::new(fixtures::dyadic_radii(8, 19), 64)?;
    let mut rows = Vec::new();
    for (name, f, qp) in fixtures::wiman_valiron_set() {
        let rep = wiman_valiron_check(&f, &qp, 1, &grid)?;
        rows.push(CheckRow::flag(
            S,
            format!("deviation decreasing over the top three radii, {name}"),
            rep.decreasing_top3,
        ));
        rows.push(CheckRow::at_most(
            S,
            format!("final deviation, {name}"),
            rep.rows.last().unwrap().deviation,
            0.3,
        ));
    }
    Ok(rows)
}

fn growth() -> Result<Vec<CheckRow>> {
    const S: &str = "growth";
    let grid = RadialGrid::log_spaced(1e2, 1e6, 13, 1024)?;
    let q2 = QParam::real(2.0)?;
    let rep = growth_lower_bound_check(
        &fixtures::identity_coefficient(),
        &fixtures::quadratic_lattice_solution(q2),
        &q2,
        1,
        &grid,
    )?;
    let qh = QParam::real(0.5)?;
    let (a, f) = fixtures::double_product_pair(qh)?;
    let rep2 = growth_lower_bound_check(&a, &f, &qh, 1, &grid)?;
    Ok(vec![
        CheckRow::at_most(S, "|gap|, A = z, q = 2", rep.gap.unwrap_or(f64::NAN).abs(), 0.3),
        CheckRow::at_least(
            S,
            "gap, double q-product pair, q = 1/2",
            rep2.gap.unwrap_or(f64::NAN),
            -0.3,
        ),
    ])
}
