//! Exact optimization machinery for vector-valued `L_p` models over finite
//! atomic measure spaces.
//!
//! The model space assigns each atom a value in `X = (R^d, l_{p_x})`; with
//! function space exponent `p` this inherits the geometry of a uniformly
//! convex and uniformly smooth space, where normalized duality mappings are
//! single-valued bijections with pointwise closed forms. On top of that the
//! crate provides:
//!
//! * duality mappings at the vector and function level ([`xspace`],
//!   [`bochner`]),
//! * the Lyapunov functional and the three projections onto closed balls,
//!   with sampled variational-inequality certificates ([`projections`]),
//! * exact maximization of dual pairings over balls, sub-domain balls,
//!   polytopes, finitely generated cones and subspaces, together with inverse
//!   images of solution sets and the optimal/none-optimal classification of
//!   ball points ([`optimize`]),
//! * a deterministic sampling oracle that cross-checks every closed form
//!   ([`oracle`]),
//! * ready-made verification suites ([`suites`]).
//!
//! ```
//! use bochner_opt::{
//!     solve, BochnerSpace, ConvexSet, MeasureSpace, SimpleFunction, SolutionKind,
//!     ToleranceConfig, XSpace,
//! };
//!
//! let space = BochnerSpace::new(MeasureSpace::unit(3)?, XSpace::new(3, 3.0)?, 3.0)?;
//! let f = SimpleFunction::new(
//!     space.clone(),
//!     vec![
//!         vec![25.0, 0.0, 0.0],
//!         vec![0.0, 37.0, 0.0],
//!         vec![0.0, 0.0, 77.0],
//!     ],
//! )?;
//! let phi = f.duality_map();
//! assert!((phi.pair(&f)? - f.norm().powi(2)).abs() < 1e-9);
//!
//! let ball = ConvexSet::ball(SimpleFunction::zero(space.clone()), 1.0)?;
//! let solution = solve(&phi, &ball, &ToleranceConfig::default())?;
//! assert!(matches!(solution.kind, SolutionKind::Singleton(_)));
//! # Ok::<(), bochner_opt::Error>(())
//! ```

pub mod bochner;
pub mod error;
mod linalg;
pub mod nonconvexity;
pub mod optimize;
pub mod oracle;
pub mod projections;
pub mod suites;
pub mod tol;
pub mod xspace;

pub use bochner::{Atom, BochnerSpace, DualSimpleFunction, MeasureSpace, SimpleFunction};
pub use error::{Error, ErrorKind, Result};
pub use nonconvexity::{nonconvexity_report, NonconvexityReport};
pub use optimize::{
    classify_ball_point, inverse_image_ball, inverse_image_star_ball, is_self_optimal,
    membership_in_solution, perp_function, perp_set, solve, sup_value, ConvexSet, DualRay,
    OptimalClass, PrimalRay, Solution, SolutionKind, SupValue,
};
pub use oracle::{
    brute_lyapunov_min, brute_metric_proj, brute_sup, sample_point, sample_set, SampleBudget,
    SupEstimate, DEFAULT_TRUNCATION,
};
pub use projections::{
    certify_generalized_metric_projection, certify_generalized_projection,
    certify_metric_projection, gpi_ball, lyapunov_v, metric_proj_ball, pi_ball, sample_ball,
    sample_ball_point, BallSpec, ViCertificate,
};
pub use tol::ToleranceConfig;
pub use xspace::{ExponentPair, XSpace};
