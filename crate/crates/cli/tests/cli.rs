use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    dir.join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmcsynth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Report without `# time:` lines.
fn stable(out: &Output) -> String {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with("# time:"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn check_reports_probability_and_verdict() {
    let ky = model("knuth_yao.pmc");
    let out = run(&[
        "check",
        "--model",
        &ky,
        "--valuation",
        "x=1/2,y=1/2",
        "--spec",
        "reach >= 3/20",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "1/6, SAT");

    let out = run(&[
        "check",
        "--model",
        &ky,
        "--valuation",
        "x=1/2,y=1/2",
        "--spec",
        "reach >= 1/5",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "1/6, UNSAT");

    let out = run(&[
        "check",
        "--model",
        &ky,
        "--valuation",
        "x=2,y=1/2",
        "--spec",
        "reach >= 3/20",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid instantiation"));

    let ping_pong = model("ping_pong.pmc");
    let out = run(&[
        "check",
        "--model",
        &ping_pong,
        "--valuation",
        "x=4/5,y=2/5",
        "--spec",
        "reach <= 4/5",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "22/35, SAT");
}

#[test]
fn check_json_mirror() {
    let ky = model("knuth_yao.pmc");
    let out = run(&[
        "--json",
        "check",
        "--model",
        &ky,
        "--valuation",
        "x=1/2,y=1/2",
        "--spec",
        "reach >= 3/20",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["probability"], "1/6");
    assert_eq!(v["result"], "SAT");
}

#[test]
fn solfun_prints_normalized_function() {
    let out = run(&["solfun", "--model", &model("coupled_coins.pmc")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stable(&out), "(x - x*y) / (1 - x*y)");

    let out = run(&[
        "solfun",
        "--model",
        &model("knuth_yao.pmc"),
        "--order",
        "minsize",
    ]);
    assert_eq!(stable(&out), "(x - x*y - x^2 + x^2*y) / (1 - x*y)");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("const.pmc");
    std::fs::write(
        &path,
        "pmc\nstate a init\nstate b target\nstate c\ntrans a b : 1/3\ntrans a c : 2/3\n\
         trans b b : 1\ntrans c c : 1\n",
    )
    .unwrap();
    let out = run(&["solfun", "--model", path.to_str().unwrap(), "--no-gcd"]);
    assert_eq!(stable(&out), "1/3");
}

#[test]
fn verify_exit_codes_follow_verdict() {
    let ping_pong = model("ping_pong.pmc");
    let region = model("ping_pong.region");
    let out = run(&[
        "verify",
        "--model",
        &ping_pong,
        "--region",
        &region,
        "--spec",
        "reach <= 4/5",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stable(&out), "ACCEPTING (bounds [23/120, 47/60])");

    let out = run(&[
        "verify",
        "--model",
        &ping_pong,
        "--region",
        &region,
        "--spec",
        "reach <= 1/2",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stable(&out).starts_with("INCONCLUSIVE"));

    let out = run(&[
        "verify",
        "--model",
        &model("knuth_yao.pmc"),
        "--region",
        &model("knuth_yao_reject.region"),
        "--spec",
        "reach >= 3/20",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stable(&out).starts_with("REJECTING"));

    let out = run(&[
        "verify",
        "--model",
        &ping_pong,
        "--region",
        "x in [0, 1/2]; y in [1/3, 1/2]",
        "--spec",
        "reach <= 4/5",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn input_errors_exit_two() {
    let coupled = model("coupled_coins.pmc");
    assert_eq!(code(&run(&["solfun", "--model", "/nonexistent.pmc"])), 2);
    let bad_spec = run(&["verify", "--model", &coupled, "--spec", "reach => 1/2"]);
    assert_eq!(code(&bad_spec), 2);
    let bad_valuation = run(&[
        "check",
        "--model",
        &coupled,
        "--valuation",
        "x=1/2",
        "--spec",
        "reach >= 0",
    ]);
    assert_eq!(code(&bad_valuation), 2);
    let unknown_param = run(&[
        "verify",
        "--model",
        &coupled,
        "--region",
        "z in [0, 1]",
        "--spec",
        "reach >= 0",
    ]);
    assert_eq!(code(&unknown_param), 2);
    // clap's own usage errors share the input-error code
    assert_eq!(code(&run(&["check", "--model", &coupled])), 2);
}

#[test]
fn partition_writes_outputs_and_covers() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("ky");
    let out = run(&[
        "partition",
        "--model",
        &model("knuth_yao.pmc"),
        "--region",
        "x in [1/100, 99/100]; y in [1/100, 99/100]",
        "--spec",
        "reach < 3/20",
        "--eta",
        "95/100",
        "--out",
        prefix.to_str().unwrap(),
        "--format",
        "csv",
        "--format",
        "svg",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let approx: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("coverage_approx: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(approx >= 0.95);
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert!(csv.starts_with("x_lo,x_hi,y_lo,y_hi,verdict"));
    assert!(csv.contains(",accepting") && csv.contains(",rejecting"));
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<rect"));
    let json: Value =
        serde_json::from_str(&std::fs::read_to_string(prefix.with_extension("json")).unwrap())
            .unwrap();
    assert!(!json["accepted"].as_array().unwrap().is_empty());
}

#[test]
fn partition_budget_exhaustion_keeps_partial_result() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("partial");
    let out = run(&[
        "partition",
        "--model",
        &model("knuth_yao.pmc"),
        "--spec",
        "reach < 3/20",
        "--budget",
        "20",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert!(stdout(&out).contains("coverage: "));
    assert!(prefix.with_extension("csv").exists());
    assert!(prefix.with_extension("svg").exists());
}

#[test]
fn partition_rejects_svg_for_one_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("one");
    let out = run(&[
        "partition",
        "--model",
        &model("triple_toss.pmc"),
        "--spec",
        "reach <= 1/10",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(prefix.with_extension("csv").exists());
    assert!(!prefix.with_extension("svg").exists());
    let forced = run(&[
        "partition",
        "--model",
        &model("triple_toss.pmc"),
        "--spec",
        "reach <= 1/10",
        "--out",
        prefix.to_str().unwrap(),
        "--format",
        "svg",
    ]);
    assert_eq!(code(&forced), 2);
}

#[test]
fn feasible_methods_find_witnesses() {
    let triple = model("triple_toss.pmc");
    for method in ["scp", "pso", "sample"] {
        let out = run(&[
            "feasible",
            "--model",
            &triple,
            "--spec",
            "reach <= 1/10",
            "--method",
            method,
        ]);
        assert_eq!(code(&out), 0, "{method}");
        assert!(stdout(&out).starts_with("witness: x="));
    }
    let out = run(&[
        "feasible",
        "--model",
        &model("coupled_coins.pmc"),
        "--spec",
        "reach >= 3/4",
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&[
        "feasible",
        "--model",
        &model("coupled_coins.pmc"),
        "--spec",
        "reach >= 1",
        "--method",
        "sample",
        "--samples",
        "30",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn feasible_honors_simplex_groups() {
    let dir = tempfile::tempdir().unwrap();
    let pmc = dir.path().join("policy.pmc");
    let out = run(&[
        "pomdp-translate",
        "--model",
        &model("colors.pomdp"),
        "--out",
        pmc.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "--json",
        "feasible",
        "--model",
        pmc.to_str().unwrap(),
        "--spec",
        "reach >= 9/10",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let val = &v["valuation"];
    let get = |k: &str| pmc_synth::scalar::parse_rational(val[k].as_str().unwrap()).unwrap();
    let blue = get("blue_a1") + get("blue_a2") + get("blue_a3");
    let red = get("red_a1") + get("red_a2");
    assert_eq!(blue, pmc_synth::scalar::ratio(1, 1));
    assert_eq!(red, pmc_synth::scalar::ratio(1, 1));
    // lifting-based commands need a box
    let out = run(&[
        "verify",
        "--model",
        pmc.to_str().unwrap(),
        "--spec",
        "reach >= 1/2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn etr_to_file_and_stdout() {
    let coupled = model("coupled_coins.pmc");
    let out = run(&["etr", "--model", &coupled, "--spec", "reach >= 3/4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("(set-logic QF_NRA)"));
    assert!(text.contains("(assert (>= p_s1 (/ 3 4)))"));
    assert!(text.contains("(assert (= p_s3 1))"));
    assert!(text.contains("(assert (= p_s2 (+ (* y p_s1) (* (+ 1 (- y)) p_s3))))"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coupled.smt2");
    let out = run(&[
        "etr",
        "--model",
        &coupled,
        "--spec",
        "reach >= 3/4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap().trim_end(),
        text.trim_end()
    );
}

#[test]
fn pomdp_commands() {
    let colors = model("colors.pomdp");
    let out = run(&["pomdp-translate", "--model", &colors]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("simplex blue_a1 blue_a2 blue_a3"));
    assert!(text.contains("trans s0 s3 : blue_a3 + 1/2*blue_a2"));

    // three-action groups have no box form
    assert_eq!(
        code(&run(&[
            "pomdp-translate",
            "--model",
            &colors,
            "--desimplex"
        ])),
        2
    );

    let out = run(&["pomdp-unfold", "--model", &colors, "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("state "))
            .count(),
        8
    );
    assert_eq!(
        code(&run(&["pomdp-unfold", "--model", &colors, "--k", "0"])),
        2
    );
}

#[test]
fn reports_are_deterministic() {
    let ky = model("knuth_yao.pmc");
    let coupled = model("coupled_coins.pmc");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "feasible",
            "--model",
            &coupled,
            "--spec",
            "reach >= 3/4",
            "--method",
            "pso",
            "--seed",
            "11",
        ],
        vec![
            "feasible",
            "--model",
            &coupled,
            "--spec",
            "reach >= 9/10",
            "--seed",
            "5",
            "--threads",
            "3",
        ],
        vec![
            "feasible",
            "--model",
            &ky,
            "--spec",
            "reach >= 1/6",
            "--method",
            "sample",
            "--seed",
            "2",
        ],
        vec![
            "partition",
            "--model",
            &ky,
            "--spec",
            "reach < 3/20",
            "--budget",
            "60",
            "--threads",
            "2",
        ],
        vec!["solfun", "--model", &ky],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(stable(&a), stable(&b), "{args:?}");
    }
    // thread count does not change SCP results
    let one = run(&[
        "feasible",
        "--model",
        &coupled,
        "--spec",
        "reach >= 9/10",
        "--seed",
        "5",
    ]);
    let many = run(&[
        "feasible",
        "--model",
        &coupled,
        "--spec",
        "reach >= 9/10",
        "--seed",
        "5",
        "--threads",
        "4",
    ]);
    assert_eq!(stable(&one), stable(&many));
}
