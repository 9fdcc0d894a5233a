use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammaseries"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

const FIELDS: [&str; 7] = ["command", "inputs", "value", "terms_used", "stop_reason", "error_estimate", "extra"];

#[test]
fn taylor_coefficients_as_csv() {
    let o = run(&["taylor-coeffs", "--m", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "k,coefficient\n0,1\n1,17/36\n2,-7/12\n3,1/9\n");
}

#[test]
fn oeis_bfile() {
    let o = run(&["oeis", "--seq", "A360092", "--count", "4", "--bfile"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 3\n2 31\n3 517\n4 322537\n");
    let o = run(&["oeis", "--seq", "A360091", "--count", "3", "--bfile"]);
    assert_eq!(stdout(&o), "1 4\n2 108\n3 3456\n");
}

#[test]
fn reciprocal_gamma_at_one_half() {
    let o = run(&["recip-gamma", "--x", "1/2", "--max-terms", "4096", "--tol", "1e-10", "--format", "json"]);
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 1);
    let v = recs[0]["value"].as_f64().unwrap();
    let two_over_sqrt_pi = std::f64::consts::FRAC_2_SQRT_PI;
    // the series converges slowly; 4096 terms leave about 8e-6
    assert!((v - two_over_sqrt_pi).abs() < 1e-5, "{v}");
    assert_eq!(recs[0]["inputs"]["x"], "1/2");
    assert_eq!(recs[0]["stop_reason"], "max_terms");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exact_inputs_give_exact_values() {
    let recs = json_lines(&run(&["gamma", "--x", "5", "--format", "json"]));
    assert_eq!(recs[0]["value"], "24");
    assert_eq!(recs[0]["stop_reason"], "exact_termination");
    let recs = json_lines(&run(&["recip-gamma", "--x", "4", "--format", "json"]));
    assert_eq!(recs[0]["value"], "1/24");
    // decimal input takes the float path
    let recs = json_lines(&run(&["recip-gamma", "--x", "4.0", "--format", "json"]));
    assert!((recs[0]["value"].as_f64().unwrap() - 1.0 / 24.0).abs() < 1e-15);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let o = run(&["alpha", "--format", "json"]);
    let line = stdout(&o);
    let rec: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    let raw = line.split("\"value\":").nth(1).unwrap().split(',').next().unwrap();
    let mantissa: String = raw.split(['e', 'E']).next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
    assert_eq!(mantissa.len(), 17, "{raw}");
    assert!((rec["value"].as_f64().unwrap() - 1.461_632_144_968_362).abs() < 1e-12);
}

#[test]
fn every_command_emits_output_records() {
    let cases: &[&[&str]] = &[
        &["recip-gamma", "--x", "3"],
        &["taylor-coeffs", "--m", "4"],
        &["gamma", "--x", "3/2", "--method", "product", "--max-terms", "64"],
        &["gamma", "--x", "2.5", "--method", "reference"],
        &["digamma", "--x", "2"],
        &["euler-gamma", "--series", "laguerre", "--terms", "10"],
        &["euler-gamma", "--series", "kk", "--terms", "6", "--list"],
        &["oeis", "--seq", "A360091", "--count", "3"],
        &["lambda", "--x", "-3"],
        &["inv-gamma", "--x", "24", "--oracle"],
        &["alpha"],
        &["inv-coeffs", "--count", "4", "--oracle"],
        &["divergence-demo", "--count", "5"],
        &["plot-recip-gamma", "--points", "5"],
        &["plot-lambda", "--points", "5"],
        &["invgamma-scan", "--points", "3", "--max-terms", "64"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let o = run(&full);
        assert!(matches!(o.status.code(), Some(0) | Some(3)), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let recs = json_lines(&o);
        assert!(!recs.is_empty(), "{args:?}");
        for r in recs {
            let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
            let mut expected = FIELDS.to_vec();
            keys.sort_unstable();
            expected.sort_unstable();
            assert_eq!(keys, expected, "{args:?}");
            assert_eq!(r["command"], args[0]);
        }
    }
}

#[test]
fn lambda_at_negative_integers() {
    let recs = json_lines(&run(&["lambda", "--x", "-3", "--format", "json"]));
    assert!((recs[0]["value"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["gamma"]).status.code(), Some(1));
    assert_eq!(run(&["gamma", "--x", "abc"]).status.code(), Some(1));
    assert_eq!(run(&["taylor-coeffs", "--m", "2", "--kmax", "3"]).status.code(), Some(1));
    assert_eq!(run(&["recip-gamma", "--x", "1", "--max-terms", "0"]).status.code(), Some(1));
    assert_eq!(run(&["inv-gamma", "--x", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["gamma", "--x", "1/2", "--method", "newton"]).status.code(), Some(2));
    assert_eq!(run(&["digamma", "--x", "-1/2"]).status.code(), Some(2));
    assert_eq!(run(&["digamma", "--x", "1/2", "--max-terms", "50"]).status.code(), Some(3));
    assert_eq!(run(&["digamma", "--x", "1/2", "--max-terms", "50", "--tol", "1"]).status.code(), Some(0));
    assert_eq!(run(&["gamma", "--x", "4"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn partial_sums_on_request() {
    let recs = json_lines(&run(&["digamma", "--x", "3", "--partial-sums", "--format", "json"]));
    let ps = recs[0]["extra"]["partial_sums"].as_array().unwrap();
    assert_eq!(ps.len(), 3);
    let o = run(&["digamma", "--x", "3", "--partial-sums", "--format", "csv"]);
    assert!(stdout(&o).lines().next().unwrap().ends_with(",partial_sums"));
}

#[test]
fn csv_has_header_and_lf_endings() {
    let o = run(&["plot-lambda", "--points", "9", "--format", "csv"]);
    let s = stdout(&o);
    assert!(!s.contains('\r'));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "x,lambda,ln_lambda,terms_used,stop_reason,ln_second_difference");
    assert_eq!(lines.len(), 10);
    // Λ(4) = 24 at the right end of the default range
    let last: Vec<&str> = lines[9].split(',').collect();
    assert!((last[1].parse::<f64>().unwrap() - 24.0).abs() < 1e-10);
}

#[test]
fn grids_are_deterministic_across_thread_counts() {
    for cmd in ["plot-recip-gamma", "plot-lambda", "invgamma-scan"] {
        let mut outs = vec![];
        for threads in ["1", "2", "7"] {
            let mut args = vec![cmd, "--format", "csv", "--threads", threads];
            if cmd == "invgamma-scan" {
                args.extend(["--points", "12", "--max-terms", "200"]);
            }
            outs.push(run(&args).stdout);
        }
        outs.push(run(&[cmd, "--format", "csv"]).stdout);
        if cmd == "invgamma-scan" {
            outs.pop();
        }
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{cmd}");
    }
}

#[test]
fn table_format_is_default() {
    let o = run(&["alpha"]);
    let s = stdout(&o);
    assert!(s.starts_with("value"));
    assert_eq!(s.lines().count(), 2);
}
