//! End-to-end tests of the binary: output schema, reference values, exit
//! codes and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bochner-opt"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

#[test]
fn solve_reports_cone_face_with_zero_sup() {
    let out = run(&[
        "solve",
        "Phi",
        "--set",
        "K",
        "--problem",
        "problems/ray_cone.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["command"], "solve");
    assert_eq!(doc["result"]["kind"], "cone_face");
    assert_eq!(doc["result"]["active_generators"], serde_json::json!([0]));
    assert_eq!(doc["sup_value"].as_f64(), Some(0.0));
}

#[test]
fn solve_unbounded_reports_infinity() {
    let out = run(&[
        "solve",
        "Upsilon",
        "--set",
        "K",
        "--problem",
        "problems/ray_cone.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["kind"], "empty");
    assert_eq!(doc["sup_value"], "infinity");
}

#[test]
fn pair_of_zero_functional_is_zero() {
    let out = run(&[
        "pair",
        "theta_star",
        "u",
        "--problem",
        "problems/ray_cone.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["value"].as_f64(), Some(0.0));
}

#[test]
fn project_inside_ball_returns_the_point() {
    let out = run(&[
        "project",
        "x_small",
        "--set",
        "B",
        "--kind",
        "metric",
        "--problem",
        "problems/single_atom_ball_projections.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["method"], "closed_form");
    assert_eq!(doc["result"]["approximate"], false);
    let values = doc["result"]["function"]["values"][0]
        .as_array()
        .expect("coordinates");
    let expected = [0.2, 0.1, -0.05];
    for (v, e) in values.iter().zip(expected) {
        assert!((v.as_f64().unwrap() - e).abs() < 1e-15);
    }
}

#[test]
fn project_with_oracle_attaches_certificate() {
    let out = run(&[
        "project",
        "x_big",
        "--set",
        "B",
        "--kind",
        "gpi",
        "--oracle",
        "--problem",
        "problems/single_atom_ball_projections.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["certificate"]["holds"], true);
    let sampled = doc["result"]["oracle"]["objective"].as_f64().unwrap();
    let analytic = doc["result"]["oracle"]["analytic_objective"]
        .as_f64()
        .unwrap();
    assert!(sampled <= analytic + 1e-9);
}

#[test]
fn member_and_domain_errors() {
    let out = run(&[
        "member",
        "xstar",
        "h25",
        "--set",
        "C25",
        "--problem",
        "problems/subdomain_ball.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["member"], true);
    assert_eq!(doc["sup_value"].as_f64(), Some(2.5));

    // h25 violates the tighter bound: precondition failure, exit code 2.
    let out = run(&[
        "member",
        "xstar",
        "h25",
        "--set",
        "C1",
        "--problem",
        "problems/subdomain_ball.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_boundary_and_outside() {
    let out = run(&[
        "classify",
        "g",
        "--set",
        "B",
        "--problem",
        "problems/single_atom_sphere.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["class"], "optimal");

    let out = run(&[
        "classify",
        "x_big",
        "--set",
        "B",
        "--problem",
        "problems/single_atom_ball_projections.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inverse_image_star_flag() {
    let out = run(&[
        "inverse-image",
        "g",
        "--set",
        "B",
        "--star",
        "--problem",
        "problems/single_atom_sphere.json",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["kind"], "primal_ray");
    assert_eq!(doc["result"]["direction"]["kind"], "primal");
}

#[test]
fn unparseable_file_exits_1_with_location() {
    let dir = std::env::temp_dir().join("bochner_opt_cli_bad");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"space\": nope").unwrap();
    let out = run(&["norm", "u", "--problem", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "diagnostic missing: {stderr}");
}

#[test]
fn unknown_names_exit_1() {
    let out = run(&["norm", "nope", "--problem", "problems/ray_cone.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "solve",
        "Phi",
        "--set",
        "nope",
        "--problem",
        "problems/ray_cone.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "solve",
        "lambda",
        "--set",
        "C",
        "--problem",
        "problems/polytope_faces.json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    // And it re-parses with bit-identical floats.
    let doc = stdout_json(&a);
    assert_eq!(doc["result"]["vertex_indices"], serde_json::json!([0, 2]));
    assert_eq!(doc["sup_value"].as_f64(), Some(1.0));
}

#[test]
fn verify_paper_suite_passes() {
    let out = run(&["verify", "--suite", "paper"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["failed"].as_u64(), Some(0));
    assert!(doc["result"]["passed"].as_u64().unwrap() >= 25);
}

#[test]
fn verify_detects_tampered_reference_file() {
    let dir = std::env::temp_dir().join("bochner_opt_cli_tampered");
    std::fs::create_dir_all(&dir).unwrap();
    for f in [
        "segment_counterexample.json",
        "polytope_faces.json",
        "subdomain_ball.json",
        "single_atom_sphere.json",
        "single_atom_ball_projections.json",
    ] {
        std::fs::copy(workspace_root().join("problems").join(f), dir.join(f)).unwrap();
    }
    let text = std::fs::read_to_string(workspace_root().join("problems/ray_cone.json")).unwrap();
    // Break one coefficient of u.
    std::fs::write(dir.join("ray_cone.json"), text.replace("77", "78")).unwrap();

    let out = run(&[
        "verify",
        "--suite",
        "paper",
        "--problems-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["result"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = run(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn env_var_seed_matches_explicit_flag() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_bochner-opt"))
        .args(["verify", "--suite", "balls", "--samples", "500"])
        .env("BOCHNER_OPT_SEED", "42")
        .current_dir(workspace_root())
        .output()
        .expect("binary runs");
    let with_flag = run(&[
        "verify",
        "--suite",
        "balls",
        "--samples",
        "500",
        "--seed",
        "42",
    ]);
    assert!(with_env.status.success() && with_flag.status.success());
    assert_eq!(with_env.stdout, with_flag.stdout);
}

#[test]
fn verify_all_suites_pass_at_reduced_effort() {
    let out = run(&["verify", "--suite", "all", "--samples", "2000"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["failed"].as_u64(), Some(0));
}

#[test]
fn demo_nonconvexity_prints_report() {
    let out = run(&["demo", "nonconvexity"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["u_certifies_g"], true);
    assert_eq!(doc["result"]["v_certifies_g"], true);
    assert_eq!(doc["result"]["h_certifies_g"], false);
    let c4 = 4f64.cbrt();
    let got = doc["result"]["pairing_dual_map_h_with_g"].as_f64().unwrap();
    assert!((got + 14.0 * c4).abs() < 1e-9);
}
