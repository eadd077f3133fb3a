//! A worked counterexample showing that the set of functions whose duality
//! image is maximized at a fixed point of a convex set need not be convex.
//!
//! The instance lives in the cube-exponent space over three unit-mass atoms
//! with scaled basis vectors as atom values. Two functions `u` and `v` both
//! have duality images orthogonal to the segment `[0, g]`, so both certify
//! `g`; their convex combination `h = (2/3) u + (1/3) v` does not.

use crate::bochner::{BochnerSpace, DualSimpleFunction, MeasureSpace, SimpleFunction};
use crate::error::Result;
use crate::optimize::{membership_in_solution, ConvexSet};
use crate::tol::ToleranceConfig;
use crate::xspace::XSpace;
use std::sync::Arc;

/// The fully evaluated counterexample.
#[derive(Debug, Clone)]
pub struct NonconvexityReport {
    pub space: Arc<BochnerSpace>,
    pub g: SimpleFunction,
    pub u: SimpleFunction,
    pub v: SimpleFunction,
    pub h: SimpleFunction,
    pub j_u: DualSimpleFunction,
    pub j_v: DualSimpleFunction,
    pub j_h: DualSimpleFunction,
    /// Per-atom coefficients of the duality images in the basis directions.
    pub j_u_coefficients: Vec<f64>,
    pub j_v_coefficients: Vec<f64>,
    pub j_h_coefficients: Vec<f64>,
    pub pairing_j_u_g: f64,
    pub pairing_j_v_g: f64,
    pub pairing_j_h_g: f64,
    pub u_certifies_g: bool,
    pub v_certifies_g: bool,
    pub h_certifies_g: bool,
}

fn basis_function(space: &Arc<BochnerSpace>, coeffs: &[f64]) -> SimpleFunction {
    let values = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mut v = vec![0.0; space.dim()];
            v[i] = c;
            v
        })
        .collect();
    SimpleFunction::new(space.clone(), values).expect("static shape")
}

fn basis_coefficients(phi: &DualSimpleFunction) -> Vec<f64> {
    (0..phi.space().atom_count())
        .map(|i| phi.value(i)[i])
        .collect()
}

/// Build and evaluate the counterexample.
pub fn nonconvexity_report(tol: &ToleranceConfig) -> Result<NonconvexityReport> {
    let space = BochnerSpace::new(MeasureSpace::unit(3)?, XSpace::new(3, 2.0)?, 3.0)?;

    let g = basis_function(&space, &[25.0, 37.0, 77.0]);
    let u = basis_function(&space, &[3.0, -2.0, -1.0]);
    let v = basis_function(&space, &[1.0, -3.0, 2.0]);
    let h = SimpleFunction::linear_combine(&[2.0 / 3.0, 1.0 / 3.0], &[&u, &v])?;

    let j_u = u.duality_map();
    let j_v = v.duality_map();
    let j_h = h.duality_map();

    // The segment [0, g] as a two-vertex hull.
    let segment = ConvexSet::polytope(vec![SimpleFunction::zero(space.clone()), g.clone()])?;

    Ok(NonconvexityReport {
        pairing_j_u_g: j_u.pair(&g)?,
        pairing_j_v_g: j_v.pair(&g)?,
        pairing_j_h_g: j_h.pair(&g)?,
        u_certifies_g: membership_in_solution(&j_u, &g, &segment, tol)?,
        v_certifies_g: membership_in_solution(&j_v, &g, &segment, tol)?,
        h_certifies_g: membership_in_solution(&j_h, &g, &segment, tol)?,
        j_u_coefficients: basis_coefficients(&j_u),
        j_v_coefficients: basis_coefficients(&j_v),
        j_h_coefficients: basis_coefficients(&j_h),
        space,
        g,
        u,
        v,
        h,
        j_u,
        j_v,
        j_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_matches_closed_form_values() {
        let tol = ToleranceConfig::default();
        let r = nonconvexity_report(&tol).unwrap();
        let c36 = 36f64.cbrt();
        let c4 = 4f64.cbrt();

        let expect_u = [9.0 / c36, -4.0 / c36, -1.0 / c36];
        let expect_v = [1.0 / c36, -9.0 / c36, 4.0 / c36];
        let expect_h = [7.0 * c4 / 6.0, -7.0 * c4 / 6.0, 0.0];
        for i in 0..3 {
            assert!((r.j_u_coefficients[i] - expect_u[i]).abs() < 1e-9);
            assert!((r.j_v_coefficients[i] - expect_v[i]).abs() < 1e-9);
            assert!((r.j_h_coefficients[i] - expect_h[i]).abs() < 1e-9);
        }

        assert!(r.pairing_j_u_g.abs() < 1e-9);
        assert!(r.pairing_j_v_g.abs() < 1e-9);
        assert!((r.pairing_j_h_g + 14.0 * c4).abs() < 1e-9);

        assert!(r.u_certifies_g);
        assert!(r.v_certifies_g);
        assert!(!r.h_certifies_g);
    }
}
