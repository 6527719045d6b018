//! End-to-end tests of the binary: subcommand output, exit codes, and
//! byte-determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectract"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn toy_example_one_table() {
    let text = stdout(&["toy", "--example", "1", "--dims", "1..12", "--epsilon", "0.5"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,n_entire,n_sym,n_antisym"));
    for (i, line) in lines.enumerate() {
        let d = i + 1;
        let ent = 1u64 << d;
        let sym = d as u64 + 1;
        let asy = 3u64.saturating_sub(d as u64);
        assert_eq!(line, format!("{d},{ent},{sym},{asy}"));
    }
}

#[test]
fn toy_example_two_table() {
    let text = stdout(&["toy", "--example", "2", "--m", "5", "--dims", "1..6"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows[2], "3,125,35,10"); // 5^3, C(7,3), C(5,3)
    assert_eq!(rows[5], "6,15625,210,0");
}

#[test]
fn complexity_grid_with_symmetry_flag() {
    let text = stdout(&[
        "complexity",
        "--spectrum",
        r#"{"family":"finite","params":{"values":[1.0,1.0]}}"#,
        "--symmetry",
        "full-sym",
        "--dims",
        "1..4",
        "--epsilons",
        "0.5",
    ]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[3].starts_with("4,"));
    assert!(rows[3].contains(",5,false"));
}

#[test]
fn complexity_output_is_deterministic_and_order_preserving() {
    let args = [
        "complexity",
        "--spectrum",
        r#"{"family":"geometric","params":{"c":0.9,"q":0.5}}"#,
        "--dims",
        "1..6",
        "--epsilons",
        "0.5,0.25,0.125",
        "--jobs",
        "4",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b, "byte-identical across runs");
    let serial = stdout(&args[..args.len() - 2]);
    assert_eq!(a, serial, "jobs must not change the row order");
}

#[test]
fn error_reports_initial_error_at_n_zero() {
    let text = stdout(&[
        "error",
        "--spectrum",
        r#"{"family":"geometric","params":{"c":0.5,"q":0.5}}"#,
        "--d",
        "2",
        "--n",
        "0",
    ]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let minimal: Vec<&str> = rows[0].split(',').collect();
    let initial: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(minimal[0], "minimal_error");
    assert_eq!(initial[0], "initial_error");
    assert_eq!(minimal[4], initial[4]);
}

#[test]
fn error_plan_lists_indices() {
    let text = stdout(&[
        "error",
        "--spectrum",
        r#"{"family":"finite","params":{"values":[1.0,0.5]}}"#,
        "--symmetry",
        "full-antisym",
        "--d",
        "2",
        "--n",
        "1",
        "--plan",
    ]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "rank,index,normalization");
    assert!(rows[1].starts_with("1,1 2,1.414213"), "{}", rows[1]);
}

#[test]
fn error_avg_not_trace_class_exits_4() {
    let out = run(&[
        "error",
        "--spectrum",
        r#"{"family":"power-law","params":{"c":1.0,"beta":1.0}}"#,
        "--d",
        "2",
        "--avg",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn malformed_spectrum_exits_2() {
    let out = run(&["complexity", "--spectrum", r#"{"family":"nope"}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["complexity"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overflow_exits_3_unless_allowed() {
    // lambda_1 > 1 with 40 dimensions: astronomically many products above
    // the threshold
    let args_base = [
        "complexity",
        "--spectrum",
        r#"{"family":"geometric","params":{"c":2.0,"q":0.5}}"#,
        "--dims",
        "40",
        "--epsilons",
        "0.5",
        "--node-cap",
        "200000",
    ];
    let out = run(&args_base);
    assert_eq!(out.status.code(), Some(3));

    let mut args = args_base.to_vec();
    args.push("--allow-overflow");
    let text = stdout(&args);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].ends_with(",,true"), "{}", rows[0]);
}

#[test]
fn classify_scaled_normalized_matches_plain() {
    let base = [
        "classify",
        "--spectrum",
        r#"{"family":"power-law","params":{"c":1.0,"beta":2.0}}"#,
        "--criterion",
        "norm",
        "--format",
        "json",
    ];
    let plain = stdout(&base);
    let mut with_scaling = base.to_vec();
    with_scaling.extend(["--scaling", r#"{"family":"geometric-scale","params":{"r":0.25}}"#]);
    let scaled = stdout(&with_scaling);
    let class_of = |text: &str| {
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        v[0]["class"].as_str().unwrap().to_string()
    };
    assert_eq!(class_of(&plain), class_of(&scaled));
    assert_eq!(class_of(&plain), "wt");
}

#[test]
fn classify_antisym_log_decay() {
    let text = stdout(&[
        "classify",
        "--spectrum",
        r#"{"family":"log-decay","params":{"lambda1":1.0}}"#,
        "--growth",
        r#"{"family":"full-antisym"}"#,
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["class"], "polynomially-intractable");
}

#[test]
fn rkhs_examples() {
    let text = stdout(&["rkhs", "--kernel", "anchored-min", "--gammas", "3"]);
    assert!(text.contains("1.41421356237e0"), "{text}");

    let text = stdout(&["rkhs", "--moment", "--k", "7", "--p", "2", "--exact"]);
    assert!(text.contains("5.83333333333e-1"), "{text}"); // 7/12

    let text = stdout(&["rkhs", "--block-size", "--p", "2", "--l", "1"]);
    assert!(text.lines().nth(1).unwrap().ends_with(",12"), "{text}");

    // seeded Monte Carlo is reproducible byte for byte
    let args = ["rkhs", "--moment", "--k", "2", "--p", "1.5", "--samples", "20000", "--seed", "7"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn rkhs_rule_from_csv_file() {
    let dir = std::env::temp_dir().join("spectract-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rule.csv");
    std::fs::write(&path, "0.5,1.0\n").unwrap();
    let text = stdout(&[
        "rkhs",
        "--kernel",
        "anchored-min",
        "--gammas",
        "1",
        "--rule",
        path.to_str().unwrap(),
    ]);
    // one point at 1/2 with weight 1 beats the empty rule's 2/sqrt(3)
    let value: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(value < 2.0 / 3.0_f64.sqrt());
}

#[test]
fn error_top_dumps_enumeration() {
    let text = stdout(&[
        "error",
        "--spectrum",
        r#"{"family":"geometric","params":{"c":0.5,"q":0.5}}"#,
        "--d",
        "2",
        "--top",
        "3",
    ]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "value,logvalue,index");
    assert!(rows[1].starts_with("2.50000000000e-1,") && rows[1].ends_with(",1 1"), "{}", rows[1]);
    assert!(rows[2].ends_with(",1 2"));
}

#[test]
fn bounds_expand_lists_generators() {
    let text = stdout(&[
        "bounds",
        "--weights",
        r#"{"family":"power-gen","params":{"beta":1.0},"c_gamma":1.0}"#,
        "--dims",
        "3",
        "--expand",
    ]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "j,gamma");
    assert_eq!(rows.len(), 4);
    assert!(rows[2].starts_with("2,5.0000000"), "{}", rows[2]);
}

#[test]
fn bounds_examples() {
    let text = stdout(&[
        "bounds",
        "--weights",
        r#"{"family":"uniform","params":{"g":1.0},"c_gamma":1.0}"#,
        "--dims",
        "10",
        "--lower",
    ]);
    assert!(text.lines().nth(1).unwrap().starts_with("10,5,32,"), "{text}");

    let text = stdout(&[
        "bounds",
        "--weights",
        r#"{"family":"power-gen","params":{"beta":0.5},"c_gamma":1.0}"#,
        "--wt",
        "--kappa",
        "0.9",
    ]);
    assert!(text.lines().nth(1).unwrap().ends_with(",true"), "{text}");

    let text = stdout(&[
        "bounds",
        "--weights",
        r#"{"family":"power-gen","params":{"beta":2.0},"c_gamma":1.0}"#,
        "--dims",
        "5",
        "--upper",
        "--eps",
        "0.1",
    ]);
    assert_eq!(text.lines().next().unwrap(), "d,eps,tau,bound");
    assert!(text.lines().nth(1).unwrap().starts_with("5,"));
}

#[test]
fn spec_file_round_trip() {
    let dir = std::env::temp_dir().join("spectract-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("problem.json");
    std::fs::write(
        &path,
        r#"{
            "spectrum": {"family": "finite", "params": {"values": [1.0, 0.25]}},
            "d": 2,
            "symmetry": {"d": 2, "groups": [{"coords": [1, 2], "kind": "antisym"}]},
            "criterion": "absolute"
        }"#,
    )
    .unwrap();
    let text = stdout(&["error", "--spec", path.to_str().unwrap()]);
    // initial error sqrt(lambda_1 lambda_2) = 0.5
    let initial = text.lines().nth(2).unwrap();
    assert!(initial.contains("5.00000000000e-1"), "{initial}");
}
