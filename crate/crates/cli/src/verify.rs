//! The `verify` subcommand: named suites of checks with a JSON report.
//!
//! The `paper` suite loads the problem files shipped under the problems
//! directory and re-derives their published reference values; the remaining
//! suites run the randomized library suites at the requested sampling effort.

use std::path::Path;

use serde_json::json;

use bochner_opt::suites::{self, SuiteReport};
use bochner_opt::{
    gpi_ball, inverse_image_ball, metric_proj_ball, pi_ball, DualSimpleFunction, SimpleFunction,
    ToleranceConfig,
};

use crate::output::{tolerances_value, OutputDoc};
use crate::problem::Problem;
use crate::CliError;

pub fn run(
    suite: &str,
    samples: usize,
    seed: u64,
    problems_dir: &Path,
) -> Result<(OutputDoc, bool), CliError> {
    let tol = ToleranceConfig::default();
    let mut reports: Vec<SuiteReport> = Vec::new();
    let mut run_suite = |name: &str| -> Result<(), CliError> {
        let report = match name {
            "paper" => paper_suite(problems_dir)?,
            "duality" => suites::duality_suite(samples, seed, &tol),
            "projections" => suites::projection_suite(200, samples, seed, &tol),
            "balls" => suites::ball_suite(50, samples, seed, &tol),
            "cones" => suites::cone_subspace_suite(100, seed, &tol),
            "oracle" => suites::oracle_suite(samples, seed, &tol),
            other => {
                return Err(CliError::Validation(format!(
                    "unknown suite {other:?}; expected one of paper, duality, projections, balls, cones, oracle, all"
                )))
            }
        };
        reports.push(report);
        Ok(())
    };

    if suite == "all" {
        for name in [
            "paper",
            "duality",
            "projections",
            "balls",
            "cones",
            "oracle",
        ] {
            run_suite(name)?;
        }
    } else {
        run_suite(suite)?;
    }

    let mut checks = Vec::new();
    let mut passed = 0usize;
    let mut failed = 0usize;
    for report in &reports {
        for check in &report.checks {
            if check.passed {
                passed += 1;
            } else {
                failed += 1;
            }
            checks.push(json!({
                "suite": report.suite,
                "name": check.name,
                "passed": check.passed,
                "detail": check.detail,
            }));
        }
    }

    let inputs = json!({
        "suite": suite,
        "samples": samples,
        "seed": seed,
        "truncation": bochner_opt::DEFAULT_TRUNCATION,
        "problems_dir": problems_dir.display().to_string(),
    });
    let result = json!({
        "checks": checks,
        "passed": passed,
        "failed": failed,
    });
    let mut doc = OutputDoc::new("verify", inputs, result, &tol);
    doc.tolerances = tolerances_value(&tol);
    Ok((doc, failed == 0))
}

fn load(problems_dir: &Path, file: &str) -> Result<Problem, CliError> {
    Problem::load(&problems_dir.join(file))
}

/// Checks over the shipped problem files.
fn paper_suite(problems_dir: &Path) -> Result<SuiteReport, CliError> {
    let tol = ToleranceConfig::default();
    let mut report = SuiteReport::new("paper");

    // Ray cone: pairings 0 / -302 / 373 and the three solution kinds.
    {
        let p = load(problems_dir, "ray_cone.json")?;
        let u = p.primal("u")?;
        let cone = p.set("K")?;
        suites::check_ray_cone(
            &mut report,
            &tol,
            u,
            p.dual("Phi")?,
            p.dual("Psi")?,
            p.dual("Upsilon")?,
            cone,
        );
    }

    // Segment counterexample: file functions must match the canonical
    // instance, and the canonical checks must pass.
    {
        let p = load(problems_dir, "segment_counterexample.json")?;
        let canonical = bochner_opt::nonconvexity_report(&tol)?;
        let file_matches = |name: &str, expected: &SimpleFunction| -> bool {
            p.primal(name)
                .map(|f| {
                    f.values()
                        .iter()
                        .zip(expected.values())
                        .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9))
                })
                .unwrap_or(false)
        };
        report.push(
            "segment counterexample: file matches the canonical instance",
            file_matches("g", &canonical.g)
                && file_matches("u", &canonical.u)
                && file_matches("v", &canonical.v)
                && file_matches("h", &canonical.h),
            String::new(),
        );
        suites::segment_counterexample_checks(&mut report, &tol);
    }

    // Polytope faces.
    {
        let p = load(problems_dir, "polytope_faces.json")?;
        let set = p.set("C")?;
        let functionals: Vec<(String, DualSimpleFunction, Vec<usize>)> = vec![
            ("phi".into(), p.dual("phi")?.clone(), vec![0, 1, 2]),
            ("psi".into(), p.dual("psi")?.clone(), vec![0, 1]),
            ("gamma".into(), p.dual("gamma")?.clone(), vec![0]),
            ("lambda".into(), p.dual("lambda")?.clone(), vec![0, 2]),
        ];
        suites::check_polytope_faces(&mut report, &tol, set, &functionals);
    }

    // Sub-domain balls with bounds 1 and 2.5.
    {
        let p = load(problems_dir, "subdomain_ball.json")?;
        let phi = p.dual("xstar")?;
        suites::check_subdomain_ball(&mut report, &tol, p.set("C1")?, phi, 1.0);
        suites::check_subdomain_ball(&mut report, &tol, p.set("C25")?, phi, 2.5);
    }

    // Single-atom sphere: the inverse image is the dual tensor ray.
    {
        let p = load(problems_dir, "single_atom_sphere.json")?;
        let g = p.primal("g")?;
        let ball = p.ball("B")?;
        let r = ball.radius();
        report.push(
            "single atom sphere: g lies on the sphere",
            (g.norm() - r).abs() <= tol.ball_slack(r),
            format!("norm {} radius {r}", g.norm()),
        );
        match inverse_image_ball(g, r, &tol) {
            Ok(ray) => {
                let tensor = p.dual("xstar_ray")?;
                let on_ray = [0.0, 0.5, 1.0, 10.0]
                    .iter()
                    .all(|&t| ray.contains(&tensor.scaled(t), &tol));
                report.push(
                    "single atom sphere: inverse image is the dual tensor ray",
                    on_ray,
                    String::new(),
                );
            }
            Err(e) => report.push("single atom sphere: inverse image", false, e.to_string()),
        }
    }

    // Single-atom ball projections: all six branch formulas on tensors.
    {
        let p = load(problems_dir, "single_atom_ball_projections.json")?;
        let ball = p.ball("B")?;
        let r = ball.radius();
        let space = &p.space;

        let small = p.dual("ystar_small")?;
        let expected = SimpleFunction::indicator(
            space.clone(),
            &["a1"],
            &space.x().duality_map_inv(small.value(0)),
        )
        .map_err(CliError::Core)?;
        report.push(
            "single atom projections: small dual tensor maps through the inverse duality image",
            pi_ball(small, r).sub(&expected).norm() <= 1e-9,
            String::new(),
        );

        let big = p.dual("ystar_big")?;
        let expected = SimpleFunction::indicator(
            space.clone(),
            &["a1"],
            &space.x().duality_map_inv(big.value(0)),
        )
        .map_err(CliError::Core)?
        .scaled(r / big.norm());
        report.push(
            "single atom projections: large dual tensor is radially rescaled",
            pi_ball(big, r).sub(&expected).norm() <= 1e-9,
            String::new(),
        );

        let x_small = p.primal("x_small")?;
        report.push(
            "single atom projections: tensors inside the ball are fixed",
            gpi_ball(x_small, r) == *x_small && metric_proj_ball(x_small, ball) == *x_small,
            String::new(),
        );

        let x_big = p.primal("x_big")?;
        let expected = x_big.scaled(r / x_big.norm());
        report.push(
            "single atom projections: tensors outside the ball are radially rescaled",
            gpi_ball(x_big, r).sub(&expected).norm() <= 1e-9
                && metric_proj_ball(x_big, ball).sub(&expected).norm() <= 1e-9,
            String::new(),
        );
    }

    Ok(report)
}
