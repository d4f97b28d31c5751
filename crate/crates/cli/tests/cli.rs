use std::path::PathBuf;
use std::process::{Command, Output};

fn jackson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jackson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "problems", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Second row of a CSV table, split into fields.
fn first_row(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .nth(1)
        .expect("a data row")
        .split(',')
        .map(str::to_string)
        .collect()
}

#[test]
fn exp_q_at_origin_is_one() {
    let o = jackson(&["eval", "exp_q", "--q", "0.5", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let row = first_row(&o);
    assert_eq!(row[2].parse::<f64>().unwrap(), 1.0);
    assert_eq!(row[3].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn big_e_q_vanishes_at_minus_one() {
    let o = jackson(&["eval", "E_q", "--q", "0.5", "--z=-1"]);
    assert_eq!(o.status.code(), Some(0));
    let row = first_row(&o);
    assert!(row[2].parse::<f64>().unwrap().abs() < 1e-15);
}

#[test]
fn etilde_product_matches_series() {
    let series = first_row(&jackson(&["eval", "etilde_q", "--q", "2", "--z", "1"]));
    let product = first_row(&jackson(&[
        "eval", "etilde_q", "--q", "2", "--z", "1", "--path", "product",
    ]));
    let (a, b) = (series[2].parse::<f64>().unwrap(), product[2].parse::<f64>().unwrap());
    assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} vs {b}");
}

#[test]
fn product_path_outside_its_regime_is_a_usage_error() {
    let o = jackson(&["eval", "E_q", "--q", "2", "--z", "1", "--path", "product"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_function_is_a_usage_error() {
    assert_eq!(jackson(&["eval", "gamma_q", "--z", "1"]).status.code(), Some(2));
}

#[test]
fn solve_reproduces_the_exponential_coefficients() {
    let o = jackson(&["solve", &problem("dq_exp_half.json")]);
    assert_eq!(o.status.code(), Some(0));
    let q: f64 = 0.5;
    let mut poch = 1.0;
    for (n, line) in stdout(&o).lines().skip(1).enumerate() {
        if n > 0 {
            poch *= 1.0 - q.powi(n as i32);
        }
        let re: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let expect = (1.0 - q).powi(n as i32) / poch;
        assert!((re - expect).abs() <= 1e-12 * expect, "n = {n}");
    }
}

#[test]
fn solve_recovers_the_quintic() {
    let o = jackson(&["solve", &problem("quintic_q2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coeffs = v["coeffs"].as_array().unwrap();
    for (n, c) in coeffs.iter().enumerate() {
        let expect = if n == 0 || n == 5 { 1.0 } else { 0.0 };
        assert!((c[0].as_f64().unwrap() - expect).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn malformed_problem_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"k\": 1,\n \"q\": [0.5, 0],\n \"A\": oops}").unwrap();
    let o = jackson(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn residual_above_tolerance_is_a_check_failure() {
    let o = jackson(&["solve", &problem("dq_exp_half.json"), "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn order_of_named_models() {
    for (model, q, lo, hi) in [("etilde_q", "2", 1.8, 2.2), ("E_q", "0.5", 1.8, 2.2)] {
        let o = jackson(&["order", model, "--q", q]);
        assert_eq!(o.status.code(), Some(0));
        let row = first_row(&o);
        assert_eq!(row[0], "zero-counting");
        let sigma: f64 = row[1].parse().unwrap();
        assert!((lo..=hi).contains(&sigma), "{model}: {sigma}");
    }
    let row = first_row(&jackson(&["order", "poly:1,-2,0.5,3"]));
    assert_eq!(row[0], "central-index");
    assert!((0.9..=1.1).contains(&row[1].parse::<f64>().unwrap()));
}

#[test]
fn sample_csv_is_byte_stable() {
    let args = ["sample", "etilde_q", "--q", "2", "--grid", "10:1e4:5"];
    let (a, b) = (jackson(&args), jackson(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a).lines().next().unwrap(),
        "r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err"
    );
    assert_eq!(stdout(&a).lines().count(), 6);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = jackson(&[
        "sample",
        "poly:1,1",
        "--grid",
        "1:100:4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("r,m,"));
}

#[test]
fn verify_suites() {
    for suite in ["identities", "lemma4.1"] {
        let o = jackson(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
    }
    assert_eq!(jackson(&["verify", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    assert_eq!(
        jackson(&["verify", "identities", "--tol", "1e-30"]).status.code(),
        Some(1)
    );
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        jackson(&["order", "etilde_q", "--grid", "10:1e4:3"]).status.code(),
        Some(2)
    );
    assert_eq!(jackson(&["order", "etilde_q", "--q", "1+2j"]).status.code(), Some(2));
    assert_eq!(jackson(&["order", "etilde_q", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(jackson(&["order", "etilde_q", "--q", "1"]).status.code(), Some(2));
}
