//! Execution of the data-driven subcommands against a loaded problem.

use serde_json::json;

use bochner_opt::{
    brute_lyapunov_min, brute_metric_proj, certify_generalized_metric_projection,
    certify_generalized_projection, certify_metric_projection, classify_ball_point, gpi_ball,
    inverse_image_ball, inverse_image_star_ball, lyapunov_v, membership_in_solution,
    metric_proj_ball, nonconvexity_report, pi_ball, sample_ball, solve, ConvexSet, OptimalClass,
    SampleBudget, SimpleFunction, ToleranceConfig,
};

use crate::output::{
    certificate_value, dual_value, primal_value, solution_value, sup_to_value, OutputDoc,
};
use crate::problem::Problem;
use crate::CliError;

pub fn norm(problem: &Problem, name: &str, path: &str) -> Result<OutputDoc, CliError> {
    let inputs = json!({ "problem": path, "function": name });
    if let Ok(f) = problem.primal(name) {
        let result = json!({ "value": f.norm(), "kind": "primal" });
        return Ok(OutputDoc::new("norm", inputs, result, &problem.tol));
    }
    let phi = problem.dual(name).map_err(|_| {
        CliError::Validation(format!("no function named {name:?} in the problem file"))
    })?;
    let result = json!({ "value": phi.norm(), "kind": "dual" });
    Ok(OutputDoc::new("norm", inputs, result, &problem.tol))
}

pub fn pair(problem: &Problem, dual: &str, f: &str, path: &str) -> Result<OutputDoc, CliError> {
    let phi = problem.dual(dual)?;
    let func = problem.primal(f)?;
    let value = phi.pair(func)?;
    let inputs = json!({ "problem": path, "dual": dual, "function": f });
    Ok(OutputDoc::new(
        "pair",
        inputs,
        json!({ "value": value }),
        &problem.tol,
    ))
}

pub fn dualmap(problem: &Problem, name: &str, path: &str) -> Result<OutputDoc, CliError> {
    let f = problem.primal(name)?;
    let inputs = json!({ "problem": path, "function": name });
    let result = json!({ "function": dual_value(&f.duality_map()) });
    Ok(OutputDoc::new("dualmap", inputs, result, &problem.tol))
}

pub fn dualmap_inv(problem: &Problem, name: &str, path: &str) -> Result<OutputDoc, CliError> {
    let phi = problem.dual(name)?;
    let inputs = json!({ "problem": path, "function": name });
    let result = json!({ "function": primal_value(&phi.duality_map_inv()) });
    Ok(OutputDoc::new("dualmap-inv", inputs, result, &problem.tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionKind {
    Metric,
    Pi,
    Gpi,
}

pub fn project(
    problem: &Problem,
    name: &str,
    set_name: &str,
    kind: ProjectionKind,
    with_oracle: bool,
    seed: u64,
    path: &str,
) -> Result<OutputDoc, CliError> {
    let tol = problem.tol;
    let ball = problem.ball(set_name)?;
    let budget = SampleBudget::new(10_000, seed);
    let kind_name = match kind {
        ProjectionKind::Metric => "metric",
        ProjectionKind::Pi => "pi",
        ProjectionKind::Gpi => "gpi",
    };
    let inputs = json!({
        "problem": path,
        "function": name,
        "set": set_name,
        "kind": kind_name,
        "oracle": with_oracle,
    });

    // The Lyapunov functional driving pi/gpi; the metric projection is driven
    // by the distance instead.
    let (projection, method, objective_phi): (SimpleFunction, &str, Option<_>) = match kind {
        ProjectionKind::Metric => {
            let g = problem.primal(name)?;
            (metric_proj_ball(g, ball), "closed_form", None)
        }
        ProjectionKind::Pi => {
            let phi = problem.dual(name)?;
            if ball.is_origin_centered(&tol) {
                (
                    pi_ball(phi, ball.radius()),
                    "closed_form",
                    Some(phi.clone()),
                )
            } else {
                // No closed form for shifted centers: numerical V-minimizer.
                let y = brute_lyapunov_min(phi, ball, &budget, &[], &tol)?;
                (y, "oracle_v_minimizer", Some(phi.clone()))
            }
        }
        ProjectionKind::Gpi => {
            let g = problem.primal(name)?;
            let phi = g.duality_map();
            if ball.is_origin_centered(&tol) {
                (gpi_ball(g, ball.radius()), "closed_form", Some(phi))
            } else {
                let y = brute_lyapunov_min(&phi, ball, &budget, &[], &tol)?;
                (y, "oracle_v_minimizer", Some(phi))
            }
        }
    };

    let mut result = json!({
        "function": primal_value(&projection),
        "method": method,
        "approximate": method != "closed_form",
    });

    let mut doc_certificate = None;
    if with_oracle {
        // Cross-check with the sampling oracle, injecting the answer above,
        // and certify the variational inequality over sampled ball points.
        let candidates = std::slice::from_ref(&projection);
        let zs = sample_ball(ball, budget.n, budget.seed);
        match kind {
            ProjectionKind::Metric => {
                let g = problem.primal(name)?;
                let set = ConvexSet::Ball(ball.clone());
                let best = brute_metric_proj(g, &set, &budget, candidates, &tol)?;
                result["oracle"] = json!({
                    "point": primal_value(&best),
                    "objective": g.distance(&best),
                    "analytic_objective": g.distance(&projection),
                    "samples": budget.n,
                    "seed": budget.seed,
                });
                doc_certificate = Some(certify_metric_projection(g, &projection, &zs, &tol));
            }
            ProjectionKind::Pi => {
                let phi = objective_phi.as_ref().expect("set above");
                let best = brute_lyapunov_min(phi, ball, &budget, candidates, &tol)?;
                result["oracle"] = json!({
                    "point": primal_value(&best),
                    "objective": lyapunov_v(phi, &best)?,
                    "analytic_objective": lyapunov_v(phi, &projection)?,
                    "samples": budget.n,
                    "seed": budget.seed,
                });
                doc_certificate = Some(certify_generalized_projection(phi, &projection, &zs, &tol));
            }
            ProjectionKind::Gpi => {
                let g = problem.primal(name)?;
                let phi = objective_phi.as_ref().expect("set above");
                let best = brute_lyapunov_min(phi, ball, &budget, candidates, &tol)?;
                result["oracle"] = json!({
                    "point": primal_value(&best),
                    "objective": lyapunov_v(phi, &best)?,
                    "analytic_objective": lyapunov_v(phi, &projection)?,
                    "samples": budget.n,
                    "seed": budget.seed,
                });
                doc_certificate = Some(certify_generalized_metric_projection(
                    g,
                    &projection,
                    &zs,
                    &tol,
                ));
            }
        }
    }

    let mut doc = OutputDoc::new("project", inputs, result, &tol);
    if let Some(cert) = doc_certificate {
        doc.certificate = Some(certificate_value(&cert));
    }
    Ok(doc)
}

pub fn solve_cmd(
    problem: &Problem,
    dual: &str,
    set_name: &str,
    path: &str,
) -> Result<OutputDoc, CliError> {
    let phi = problem.dual(dual)?;
    let set = problem.set(set_name)?;
    let solution = solve(phi, set, &problem.tol)?;
    let inputs = json!({ "problem": path, "dual": dual, "set": set_name });
    let mut doc = OutputDoc::new("solve", inputs, solution_value(&solution), &problem.tol);
    doc.sup_value = Some(sup_to_value(&solution.sup));
    Ok(doc)
}

pub fn member(
    problem: &Problem,
    dual: &str,
    f: &str,
    set_name: &str,
    path: &str,
) -> Result<OutputDoc, CliError> {
    let phi = problem.dual(dual)?;
    let g = problem.primal(f)?;
    let set = problem.set(set_name)?;
    let is_member = membership_in_solution(phi, g, set, &problem.tol)?;
    let solution = solve(phi, set, &problem.tol)?;
    let inputs = json!({ "problem": path, "dual": dual, "function": f, "set": set_name });
    let result = json!({
        "member": is_member,
        "pair": phi.pair(g)?,
    });
    let mut doc = OutputDoc::new("member", inputs, result, &problem.tol);
    doc.sup_value = Some(sup_to_value(&solution.sup));
    Ok(doc)
}

fn origin_ball_radius(problem: &Problem, set_name: &str) -> Result<f64, CliError> {
    let ball = problem.ball(set_name)?;
    if !ball.is_origin_centered(&problem.tol) {
        return Err(CliError::Validation(format!(
            "set {set_name:?} must be a ball centered at the origin for this command"
        )));
    }
    Ok(ball.radius())
}

pub fn inverse_image(
    problem: &Problem,
    f: &str,
    set_name: &str,
    star: bool,
    path: &str,
) -> Result<OutputDoc, CliError> {
    let g = problem.primal(f)?;
    let r = origin_ball_radius(problem, set_name)?;
    let inputs = json!({ "problem": path, "function": f, "set": set_name, "star": star });
    let result = if star {
        let ray = inverse_image_star_ball(g, r, &problem.tol)?;
        json!({ "kind": "primal_ray", "direction": primal_value(&ray.direction) })
    } else {
        let ray = inverse_image_ball(g, r, &problem.tol)?;
        json!({ "kind": "dual_ray", "direction": dual_value(&ray.direction) })
    };
    Ok(OutputDoc::new(
        "inverse-image",
        inputs,
        result,
        &problem.tol,
    ))
}

pub fn classify(
    problem: &Problem,
    f: &str,
    set_name: &str,
    path: &str,
) -> Result<OutputDoc, CliError> {
    let g = problem.primal(f)?;
    let r = origin_ball_radius(problem, set_name)?;
    let class = classify_ball_point(g, r, &problem.tol)?;
    let inputs = json!({ "problem": path, "function": f, "set": set_name });
    let result = json!({
        "class": match class {
            OptimalClass::Optimal => "optimal",
            OptimalClass::NoneOptimal => "none_optimal",
        }
    });
    Ok(OutputDoc::new("classify", inputs, result, &problem.tol))
}

pub fn demo_nonconvexity() -> Result<OutputDoc, CliError> {
    let tol = ToleranceConfig::default();
    let report = nonconvexity_report(&tol)?;
    let result = json!({
        "g": primal_value(&report.g),
        "u": primal_value(&report.u),
        "v": primal_value(&report.v),
        "h": primal_value(&report.h),
        "dual_map_u_coefficients": report.j_u_coefficients,
        "dual_map_v_coefficients": report.j_v_coefficients,
        "dual_map_h_coefficients": report.j_h_coefficients,
        "pairing_dual_map_u_with_g": report.pairing_j_u_g,
        "pairing_dual_map_v_with_g": report.pairing_j_v_g,
        "pairing_dual_map_h_with_g": report.pairing_j_h_g,
        "u_certifies_g": report.u_certifies_g,
        "v_certifies_g": report.v_certifies_g,
        "h_certifies_g": report.h_certifies_g,
    });
    let inputs = json!({ "demo": "nonconvexity" });
    Ok(OutputDoc::new("demo", inputs, result, &tol))
}
