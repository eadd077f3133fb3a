//! Lyapunov functional, closed-form projections onto closed balls and
//! sampling-based certificates for their variational inequalities.
//!
//! Three projections are provided for a ball `B(c, r)`:
//! * the generalized projection `pi` of a dual argument (Lyapunov minimizer),
//! * the generalized metric projection `Pi = pi . J` of a primal argument,
//! * the metric projection `P` (nearest point).
//!
//! For balls centered at the origin all three have closed forms; the metric
//! projection also has one for shifted centers by translation invariance of
//! the norm. Shifted-center `pi`/`Pi` have no closed form here and are served
//! numerically by the oracle module.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bochner::{BochnerSpace, DualSimpleFunction, SimpleFunction};
use crate::error::{Error, Result};
use crate::tol::ToleranceConfig;
use std::sync::Arc;

/// A closed ball `{ f : ||f - center|| <= radius }`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    center: SimpleFunction,
    radius: f64,
}

impl BallSpec {
    pub fn new(center: SimpleFunction, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(BallSpec { center, radius })
    }

    /// Ball centered at the origin of `space`.
    pub fn origin(space: Arc<BochnerSpace>, radius: f64) -> Result<Self> {
        Self::new(SimpleFunction::zero(space), radius)
    }

    pub fn center(&self) -> &SimpleFunction {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn space(&self) -> &Arc<BochnerSpace> {
        self.center.space()
    }

    pub fn is_origin_centered(&self, tol: &ToleranceConfig) -> bool {
        tol.is_zero(self.center.norm())
    }

    pub fn contains(&self, f: &SimpleFunction, tol: &ToleranceConfig) -> bool {
        f.sub(&self.center).norm() <= self.radius + tol.ball_slack(self.radius)
    }
}

/// Lyapunov functional `V(phi, f) = ||phi||^2 - 2 <phi, f> + ||f||^2`.
///
/// Nonnegative, and zero exactly when `phi` is the duality image of `f`.
pub fn lyapunov_v(phi: &DualSimpleFunction, f: &SimpleFunction) -> Result<f64> {
    let pairing = phi.pair(f)?;
    let np = phi.norm();
    let nf = f.norm();
    Ok(np * np - 2.0 * pairing + nf * nf)
}

/// Generalized projection of a dual argument onto the origin-centered ball of
/// radius `r`: the inverse duality image, radially rescaled when it falls
/// outside.
pub fn pi_ball(phi: &DualSimpleFunction, r: f64) -> SimpleFunction {
    let n = phi.norm();
    let g = phi.duality_map_inv();
    if n <= r {
        g
    } else {
        g.scaled(r / n)
    }
}

/// Generalized metric projection of a primal argument onto the
/// origin-centered ball: identity inside, radial rescaling outside.
pub fn gpi_ball(g: &SimpleFunction, r: f64) -> SimpleFunction {
    let n = g.norm();
    if n <= r {
        g.clone()
    } else {
        g.scaled(r / n)
    }
}

/// Metric (nearest-point) projection onto a ball with arbitrary center.
pub fn metric_proj_ball(g: &SimpleFunction, ball: &BallSpec) -> SimpleFunction {
    let w = g.sub(ball.center());
    let n = w.norm();
    if n <= ball.radius() {
        g.clone()
    } else {
        ball.center().add(&w.scaled(ball.radius() / n))
    }
}

/// Outcome of checking a variational inequality against sampled points.
#[derive(Debug, Clone)]
pub struct ViCertificate {
    pub holds: bool,
    /// Smallest test value seen over the samples (`+inf` when no samples).
    pub worst_violation: f64,
    /// A violating sample when the certificate fails.
    pub witness: Option<SimpleFunction>,
}

fn certify_linear(
    psi: &DualSimpleFunction,
    y: &SimpleFunction,
    zs: &[SimpleFunction],
    tol: &ToleranceConfig,
) -> ViCertificate {
    let base = psi.pair(y).unwrap_or(f64::NAN);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for z in zs {
        let value = base - psi.pair(z).unwrap_or(f64::NAN);
        if value < worst {
            worst = value;
            if value < -tol.certificate {
                witness = Some(z.clone());
            }
        }
    }
    ViCertificate {
        holds: worst >= -tol.certificate,
        worst_violation: worst,
        witness,
    }
}

/// Certificate for the metric projection inequality
/// `<J(x - y), y - z> >= 0` over the sampled points `zs` of the target set.
pub fn certify_metric_projection(
    x: &SimpleFunction,
    y: &SimpleFunction,
    zs: &[SimpleFunction],
    tol: &ToleranceConfig,
) -> ViCertificate {
    certify_linear(&x.sub(y).duality_map(), y, zs, tol)
}

/// Certificate for the generalized projection inequality
/// `<phi - J y, y - z> >= 0`.
pub fn certify_generalized_projection(
    phi: &DualSimpleFunction,
    y: &SimpleFunction,
    zs: &[SimpleFunction],
    tol: &ToleranceConfig,
) -> ViCertificate {
    certify_linear(&phi.sub(&y.duality_map()), y, zs, tol)
}

/// Certificate for the generalized metric projection inequality
/// `<J x - J y, y - z> >= 0`.
pub fn certify_generalized_metric_projection(
    x: &SimpleFunction,
    y: &SimpleFunction,
    zs: &[SimpleFunction],
    tol: &ToleranceConfig,
) -> ViCertificate {
    certify_linear(&x.duality_map().sub(&y.duality_map()), y, zs, tol)
}

/// Deterministic ball sample: componentwise standard normal direction per
/// atom, normalized, scaled by a radius `r * sqrt(U)`. Index `i` draws from
/// its own RNG stream, so samples are order-independent and any prefix of a
/// larger budget reproduces a smaller one.
pub fn sample_ball_point(ball: &BallSpec, index: u64, seed: u64) -> SimpleFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    let space = ball.space().clone();
    loop {
        let values: Vec<Vec<f64>> = (0..space.atom_count())
            .map(|_| {
                (0..space.dim())
                    .map(|_| rng.sample(StandardNormal))
                    .collect()
            })
            .collect();
        let direction = SimpleFunction::new(space.clone(), values).expect("shape by construction");
        let n = direction.norm();
        if n == 0.0 {
            continue;
        }
        let u: f64 = rng.gen();
        let radius = ball.radius() * u.sqrt();
        return ball.center().add(&direction.scaled(radius / n));
    }
}

/// First `n` points of the deterministic ball sample stream.
pub fn sample_ball(ball: &BallSpec, n: usize, seed: u64) -> Vec<SimpleFunction> {
    (0..n as u64)
        .map(|i| sample_ball_point(ball, i, seed))
        .collect()
}
