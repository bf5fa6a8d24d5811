use std::path::Path;

use diffinv::cli::{run_with_env, EXIT_INVALID, EXIT_NONE, EXIT_USAGE, EXIT_VALID};
use serde_json::Value;

fn problem(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(name).display().to_string()
}

fn run(args: &[&str]) -> diffinv::cli::Outcome {
    let mut full = vec!["diffinv"];
    full.extend_from_slice(args);
    run_with_env(full, None)
}

#[test]
fn derive_examples() {
    let cases = [
        ("rotation.div", "x^2+y^2 >= p^2", "0 >= 0"),
        ("damped_oscillator.div", "w^2*x^2+y^2 <= c^2", "-4*d*w*y^2 <= 0"),
        ("diagonal.div", "-(x-y)^2 >= 0", "2*x*y - 2*y^2 - 2*x + 2*y >= 0"),
    ];
    for (file, f, want) in cases {
        let out = run(&["derive", &problem(file), "--formula", f]);
        assert_eq!(out.code, EXIT_VALID, "{}", out.stderr);
        assert_eq!(out.stdout.trim(), want);
        assert!(out.stderr.is_empty());
    }
    let out = run(&["derive", &problem("diagonal.div"), "--formula", "-(x-y)^2 >= 0"]);
    let expected = diffinv::formulas::fml("-2*(x-y)*(1-y) >= 0");
    assert_eq!(diffinv::formulas::fml(out.stdout.trim()), expected);
    assert_eq!(run(&["derive", &problem("rotation.div"), "--formula", "x >="]).code, EXIT_USAGE);
}

#[test]
fn check_examples() {
    let out = run(&["check", &problem("rotation.div"), "--proof", &problem("rotation.prf")]);
    assert_eq!(out.code, EXIT_VALID);
    assert!(out.stdout.contains("⊢ 0 >= 0  [valid"), "{}", out.stdout);
    let out = run(&["check", &problem("accelerated_quadrant.div"), "--proof", &problem("accelerated_quadrant.prf")]);
    assert_eq!(out.code, EXIT_VALID);
    let out = run(&["check", &problem("decay_positive.div"), "--proof", &problem("decay_positive.prf")]);
    assert_eq!(out.code, EXIT_VALID);
    let out = run(&["check", &problem("diagonal.div"), "--proof", &problem("diagonal.prf")]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stdout.contains("counterexample"));
    let out = run(&["check", &problem("rotation.div"), "--proof", &problem("accelerated_quadrant.prf")]);
    assert_eq!(out.code, EXIT_INVALID);
    let out = run(&["check", &problem("rotation.div"), "--proof", &problem("missing.prf")]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
}

#[test]
fn strict_derivatives_are_opt_in() {
    let rot = problem("rotation.div");
    assert_eq!(run(&["derive", &rot, "--formula", "x > 0"]).stdout, "y >= 0\n");
    assert_eq!(run(&["derive", &rot, "--formula", "x > 0", "--strict"]).stdout, "y > 0\n");
    let args = ["check", &problem("drift_strict.div"), "--proof", &problem("drift_strict.prf"), "--strict"];
    assert_eq!(run(&args).code, EXIT_VALID);
}

#[test]
fn prove_examples() {
    let fig = problem("accelerated_quadrant.div");
    let out = run(&["prove", &fig, "--class", "geq,and", "--max-degree", "1", "--coeffs", "-1,0,1", "--cuts", "1"]);
    assert_eq!(out.code, EXIT_VALID);
    assert_eq!(out.stdout.trim(), "cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }");
    let out = run(&["prove", &fig, "--class", "geq,and", "--max-degree", "3", "--coeffs", "-2..2", "--cuts", "0"]);
    assert_eq!(out.code, EXIT_NONE);
    let out = run(&["prove", &problem("drift_weak.div"), "--class", "eq", "--max-degree", "3", "--coeffs", "-2..2"]);
    assert_eq!(out.code, EXIT_NONE);
    assert_eq!(run(&["prove", &fig, "--class", "leq"]).code, EXIT_USAGE);
    assert_eq!(run(&["prove", &fig, "--budget", "0"]).code, EXIT_USAGE);
}

#[test]
fn proved_scripts_replay_with_the_same_hash() {
    let dir = std::env::temp_dir().join(format!("diffinv-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases: [(&str, &[&str]); 3] = [
        ("accelerated_quadrant.div", &["--class", "geq,and", "--max-degree", "1", "--cuts", "1"]),
        ("rotation_circle.div", &["--class", "eq", "--max-degree", "2"]),
        ("decay_positive.div", &["--class", "gt", "--max-degree", "1", "--da-degree", "1"]),
    ];
    for (file, flags) in cases {
        let p = problem(file);
        let mut args = vec!["prove", p.as_str(), "--json"];
        args.extend_from_slice(flags);
        let out = run(&args);
        assert_eq!(out.code, EXIT_VALID, "{file}: {}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        let script_path = dir.join(format!("{file}.prf"));
        std::fs::write(&script_path, doc["script"].as_str().unwrap()).unwrap();
        let check = run(&["check", &p, "--proof", &script_path.display().to_string(), "--json"]);
        assert_eq!(check.code, EXIT_VALID, "{file}");
        let replayed: Value = serde_json::from_str(&check.stdout).unwrap();
        assert_eq!(replayed["hash"], doc["hash"], "{file}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_trees_carry_rules_and_verdicts() {
    let out = run(&["check", &problem("accelerated_quadrant.div"), "--proof", &problem("accelerated_quadrant.prf"), "--json"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["verdict"]["verdict"], "valid");
    let tree = &doc["tree"];
    assert_eq!(tree["rule"], "dc");
    assert_eq!(tree["instantiation"]["cut"], "y >= 0");
    assert_eq!(tree["path"], "root");
    let di = &tree["premises"][1];
    assert_eq!(di["rule"], "di");
    assert_eq!(di["premises"][0]["leaf"]["verdict"], "valid");
    assert_eq!(doc["hash"].as_str().unwrap().len(), 64);

    let out = run(&["check", &problem("diagonal.div"), "--proof", &problem("diagonal.prf"), "--json"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["verdict"]["verdict"], "invalid");
    assert_eq!(doc["verdict"]["path"], "root.0");
    assert!(doc["verdict"]["witness"].is_object());
}

#[test]
fn falsify_examples() {
    let out = run(&["falsify", &problem("drift_down.div"), "--box", "1,5", "--json"]);
    assert_eq!(out.code, EXIT_VALID);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["initial"]["x"], "1");
    assert!((doc["exit_time"].as_f64().unwrap() - 1.0).abs() < 0.01);
    let out = run(&["falsify", &problem("damped_unit.div"), "--samples", "200"]);
    assert_eq!(out.code, EXIT_NONE);
    let out = run(&["falsify", &problem("rotation_gap.div")]);
    assert_eq!(out.code, EXIT_VALID);
    assert_eq!(run(&["falsify", &problem("rotation_gap.div"), "--box", "3,1"]).code, EXIT_USAGE);
    assert_eq!(run(&["falsify", &problem("rotation_gap.div"), "--step", "0"]).code, EXIT_USAGE);
}

#[test]
fn seeds_come_from_the_environment() {
    let (d, p) = (problem("diagonal.div"), problem("diagonal.prf"));
    let args = ["diffinv", "check", d.as_str(), "--proof", p.as_str(), "--json"];
    let a = run_with_env(args, Some("42"));
    let b = run_with_env(args, Some("42"));
    assert_eq!(a, b);
    let explicit = run_with_env(["diffinv", "check", d.as_str(), "--proof", p.as_str(), "--json", "--seed", "42"], None);
    assert_eq!(a, explicit);
}
