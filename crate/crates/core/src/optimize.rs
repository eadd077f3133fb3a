//! Maximization of a dual pairing `f -> <phi, f>` over closed convex sets,
//! with exact solution-set descriptions, inverse images on balls, and the
//! optimal/none-optimal classification of ball points.

use std::sync::Arc;

use crate::bochner::{same_space, BochnerSpace, DualSimpleFunction, SimpleFunction};
use crate::error::{Error, Result};
use crate::linalg;
use crate::projections::BallSpec;
use crate::tol::ToleranceConfig;

/// A closed convex subset of the function space, restricted to the kinds for
/// which exact solvers exist.
#[derive(Debug, Clone)]
pub enum ConvexSet {
    /// `{ f : ||f - center|| <= r }`.
    Ball(BallSpec),
    /// `{ f : (sum_{i in atoms} mass_i ||f_i||^p)^{1/p} <= bound }`,
    /// unconstrained on the remaining atoms.
    SubdomainBall {
        space: Arc<BochnerSpace>,
        atoms: Vec<usize>,
        bound: f64,
    },
    /// Convex hull of finitely many points.
    Polytope { vertices: Vec<SimpleFunction> },
    /// `vertex + { nonnegative combinations of generators }`.
    Cone {
        vertex: SimpleFunction,
        generators: Vec<SimpleFunction>,
    },
    /// Linear span of the generators.
    Subspace { generators: Vec<SimpleFunction> },
}

impl ConvexSet {
    pub fn ball(center: SimpleFunction, radius: f64) -> Result<Self> {
        Ok(ConvexSet::Ball(BallSpec::new(center, radius)?))
    }

    pub fn subdomain_ball(space: Arc<BochnerSpace>, atom_ids: &[&str], bound: f64) -> Result<Self> {
        if atom_ids.is_empty() {
            return Err(Error::EmptySelection("atom subset"));
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidRadius(bound));
        }
        let mut atoms = Vec::with_capacity(atom_ids.len());
        for id in atom_ids {
            let i = space
                .measure()
                .index_of(id)
                .ok_or_else(|| Error::UnknownAtom(id.to_string()))?;
            if atoms.contains(&i) {
                return Err(Error::DuplicateAtom(id.to_string()));
            }
            atoms.push(i);
        }
        Ok(ConvexSet::SubdomainBall {
            space,
            atoms,
            bound,
        })
    }

    pub fn polytope(vertices: Vec<SimpleFunction>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or(Error::EmptySelection("vertex list"))?;
        if !vertices.iter().all(|v| v.same_space(first)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(ConvexSet::Polytope { vertices })
    }

    pub fn cone(vertex: SimpleFunction, generators: Vec<SimpleFunction>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptySelection("generator list"));
        }
        if !generators.iter().all(|g| g.same_space(&vertex)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(ConvexSet::Cone { vertex, generators })
    }

    pub fn subspace(generators: Vec<SimpleFunction>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or(Error::EmptySelection("generator list"))?;
        if !generators.iter().all(|g| g.same_space(first)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(ConvexSet::Subspace { generators })
    }

    pub fn space(&self) -> &Arc<BochnerSpace> {
        match self {
            ConvexSet::Ball(b) => b.space(),
            ConvexSet::SubdomainBall { space, .. } => space,
            ConvexSet::Polytope { vertices } => vertices[0].space(),
            ConvexSet::Cone { vertex, .. } => vertex.space(),
            ConvexSet::Subspace { generators } => generators[0].space(),
        }
    }

    /// Whether the set is bounded (so suprema are always attained).
    pub fn is_bounded(&self) -> bool {
        match self {
            ConvexSet::Ball(_) | ConvexSet::Polytope { .. } => true,
            ConvexSet::SubdomainBall { space, atoms, .. } => atoms.len() == space.atom_count(),
            ConvexSet::Cone { .. } | ConvexSet::Subspace { .. } => false,
        }
    }

    /// Membership test at tolerance. Cone and polytope membership reduce to
    /// small nonnegative least-squares fits on mass-weighted coordinates.
    pub fn contains(&self, f: &SimpleFunction, tol: &ToleranceConfig) -> Result<bool> {
        if !same_space(self.space(), f.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(match self {
            ConvexSet::Ball(ball) => ball.contains(f, tol),
            ConvexSet::SubdomainBall { atoms, bound, .. } => {
                restricted_norm(f, atoms) <= bound + tol.ball_slack(*bound)
            }
            ConvexSet::Polytope { vertices } => {
                // Convex combination: nonnegative weights plus a sum-to-one row.
                let cols: Vec<Vec<f64>> = vertices
                    .iter()
                    .map(|v| {
                        let mut c = flatten(v);
                        c.push(1.0);
                        c
                    })
                    .collect();
                let mut rhs = flatten(f);
                rhs.push(1.0);
                let scale = 1.0 + linalg::norm(&rhs);
                let t = linalg::nnls(&cols, &rhs);
                let r = linalg::norm(&linalg::residual_vec(&cols, &t, &rhs));
                r <= tol.abs.max(1e-10) * scale
            }
            ConvexSet::Cone { vertex, generators } => {
                let cols: Vec<Vec<f64>> = generators.iter().map(flatten).collect();
                let rhs = flatten(&f.sub(vertex));
                let scale = 1.0 + linalg::norm(&rhs);
                let t = linalg::nnls(&cols, &rhs);
                let r = linalg::norm(&linalg::residual_vec(&cols, &t, &rhs));
                r <= tol.abs.max(1e-10) * scale
            }
            ConvexSet::Subspace { generators } => {
                let cols: Vec<Vec<f64>> = generators.iter().map(flatten).collect();
                let rhs = flatten(f);
                let scale = 1.0 + linalg::norm(&rhs);
                linalg::span_residual(&cols, &rhs) <= tol.abs.max(1e-10) * scale
            }
        })
    }
}

/// Mass-weighted flat coordinates `sqrt(mass_i) * f_i`, the natural Euclidean
/// embedding used for exact-membership linear algebra.
fn flatten(f: &SimpleFunction) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.space().atom_count() * f.space().dim());
    for (i, v) in f.values().iter().enumerate() {
        let w = f.space().measure().mass(i).sqrt();
        out.extend(v.iter().map(|c| c * w));
    }
    out
}

pub(crate) fn restricted_norm(f: &SimpleFunction, atoms: &[usize]) -> f64 {
    let p = f.space().exponents().p();
    let sum: f64 = atoms
        .iter()
        .map(|&i| f.space().measure().mass(i) * f.space().x().norm(f.value(i)).powf(p))
        .sum();
    sum.powf(1.0 / p)
}

fn restricted_dual_norm(phi: &DualSimpleFunction, atoms: &[usize]) -> f64 {
    let q = phi.space().exponents().q();
    let sum: f64 = atoms
        .iter()
        .map(|&i| phi.space().measure().mass(i) * phi.space().x().dual_norm(phi.value(i)).powf(q))
        .sum();
    sum.powf(1.0 / q)
}

/// Supremum of the pairing over a set: finite, or `+inf` when unattained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupValue {
    Finite(f64),
    PlusInfinity,
}

impl SupValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            SupValue::Finite(v) => Some(*v),
            SupValue::PlusInfinity => None,
        }
    }
}

/// Structured description of a solution set.
#[derive(Debug, Clone)]
pub enum SolutionKind {
    /// The supremum is not attained.
    Empty,
    /// Every point of the set is a solution.
    WholeSet,
    /// A single maximizer. For strictly convex balls it is the unique one;
    /// for sub-domain balls it is one point of a larger solution face, with
    /// membership of other candidates decided by `membership_in_solution`.
    Singleton(SimpleFunction),
    /// The face of the polytope spanned by the listed vertices.
    PolytopeFace(Vec<usize>),
    /// The sub-cone through the vertex spanned by the listed generators.
    ConeFace {
        vertex: SimpleFunction,
        active: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub kind: SolutionKind,
    pub sup: SupValue,
}

impl Solution {
    pub fn is_empty(&self) -> bool {
        matches!(self.kind, SolutionKind::Empty)
    }
}

/// Ray `{ t * direction : t >= 0 }` in the dual space; the degenerate
/// direction zero encodes the trivial set `{0}`.
#[derive(Debug, Clone)]
pub struct DualRay {
    pub direction: DualSimpleFunction,
}

/// Ray `{ t * direction : t >= 0 }` in the primal space.
#[derive(Debug, Clone)]
pub struct PrimalRay {
    pub direction: SimpleFunction,
}

impl DualRay {
    /// Does `phi` lie on the ray within tolerance?
    pub fn contains(&self, phi: &DualSimpleFunction, tol: &ToleranceConfig) -> bool {
        let dn = self.direction.norm();
        if tol.is_zero(dn) {
            return tol.is_zero(phi.norm());
        }
        // Projection coefficient in the flat mass-weighted metric.
        let num: f64 = weighted_dot_dual(phi, &self.direction);
        let den: f64 = weighted_dot_dual(&self.direction, &self.direction);
        let t = num / den;
        if t < -tol.rel {
            return false;
        }
        let residual = phi.sub(&self.direction.scaled(t.max(0.0))).norm();
        residual <= tol.abs + tol.rel * (1.0 + phi.norm())
    }
}

impl PrimalRay {
    pub fn contains(&self, f: &SimpleFunction, tol: &ToleranceConfig) -> bool {
        let dn = self.direction.norm();
        if tol.is_zero(dn) {
            return tol.is_zero(f.norm());
        }
        let num: f64 = weighted_dot(f, &self.direction);
        let den: f64 = weighted_dot(&self.direction, &self.direction);
        let t = num / den;
        if t < -tol.rel {
            return false;
        }
        let residual = f.sub(&self.direction.scaled(t.max(0.0))).norm();
        residual <= tol.abs + tol.rel * (1.0 + f.norm())
    }
}

fn weighted_dot(a: &SimpleFunction, b: &SimpleFunction) -> f64 {
    weighted_dot_values(a.space(), a.values(), b.values())
}

fn weighted_dot_dual(a: &DualSimpleFunction, b: &DualSimpleFunction) -> f64 {
    weighted_dot_values(a.space(), a.values(), b.values())
}

fn weighted_dot_values(space: &BochnerSpace, a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| space.measure().mass(i) * linalg::dot(x, y))
        .sum()
}

/// Maximize `<phi, .>` over the set and describe the solution set exactly.
pub fn solve(phi: &DualSimpleFunction, set: &ConvexSet, tol: &ToleranceConfig) -> Result<Solution> {
    if !same_space(phi.space(), set.space()) {
        return Err(Error::SpaceMismatch);
    }
    // The zero functional is maximized everywhere.
    if tol.is_zero(phi.norm()) {
        return Ok(Solution {
            kind: SolutionKind::WholeSet,
            sup: SupValue::Finite(0.0),
        });
    }
    match set {
        ConvexSet::Ball(ball) => {
            let n = phi.norm();
            let direction = phi.duality_map_inv().scaled(ball.radius() / n);
            let maximizer = ball.center().add(&direction);
            let sup = phi.pair_unchecked(ball.center()) + ball.radius() * n;
            Ok(Solution {
                kind: SolutionKind::Singleton(maximizer),
                sup: SupValue::Finite(sup),
            })
        }
        ConvexSet::SubdomainBall { atoms, bound, .. } => {
            let support = phi.support_indices(tol);
            if support.iter().any(|i| !atoms.contains(i)) {
                // The functional sees an unconstrained atom: no finite sup.
                return Ok(Solution {
                    kind: SolutionKind::Empty,
                    sup: SupValue::PlusInfinity,
                });
            }
            let restricted = phi.restrict(atoms);
            let rn = restricted_dual_norm(&restricted, atoms);
            if rn == 0.0 {
                // Sub-tolerance values off the constrained atoms and exact
                // zeros on them: the functional acts as zero.
                return Ok(Solution {
                    kind: SolutionKind::WholeSet,
                    sup: SupValue::Finite(0.0),
                });
            }
            let direction = restricted.duality_map_inv();
            let maximizer = direction.scaled(*bound / direction.norm());
            Ok(Solution {
                kind: SolutionKind::Singleton(maximizer),
                sup: SupValue::Finite(bound * rn),
            })
        }
        ConvexSet::Polytope { vertices } => {
            let values: Vec<f64> = vertices.iter().map(|v| phi.pair_unchecked(v)).collect();
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let face: Vec<usize> = values
                .iter()
                .enumerate()
                .filter(|(_, &v)| (v - max).abs() <= tol.pairing)
                .map(|(i, _)| i)
                .collect();
            Ok(Solution {
                kind: SolutionKind::PolytopeFace(face),
                sup: SupValue::Finite(max),
            })
        }
        ConvexSet::Cone { vertex, generators } => {
            let pairings: Vec<f64> = generators.iter().map(|d| phi.pair_unchecked(d)).collect();
            if pairings.iter().any(|&v| v > tol.pairing) {
                return Ok(Solution {
                    kind: SolutionKind::Empty,
                    sup: SupValue::PlusInfinity,
                });
            }
            let active: Vec<usize> = pairings
                .iter()
                .enumerate()
                .filter(|(_, &v)| v.abs() <= tol.pairing)
                .map(|(i, _)| i)
                .collect();
            Ok(Solution {
                kind: SolutionKind::ConeFace {
                    vertex: vertex.clone(),
                    active,
                },
                sup: SupValue::Finite(phi.pair_unchecked(vertex)),
            })
        }
        ConvexSet::Subspace { generators } => {
            let perp = generators
                .iter()
                .all(|d| phi.pair_unchecked(d).abs() <= tol.pairing);
            if perp {
                Ok(Solution {
                    kind: SolutionKind::WholeSet,
                    sup: SupValue::Finite(0.0),
                })
            } else {
                Ok(Solution {
                    kind: SolutionKind::Empty,
                    sup: SupValue::PlusInfinity,
                })
            }
        }
    }
}

/// Supremum of the pairing over the set.
pub fn sup_value(
    phi: &DualSimpleFunction,
    set: &ConvexSet,
    tol: &ToleranceConfig,
) -> Result<SupValue> {
    Ok(solve(phi, set, tol)?.sup)
}

/// Is `g` a maximizer of `<phi, .>` over the set? `g` must belong to the set.
pub fn membership_in_solution(
    phi: &DualSimpleFunction,
    g: &SimpleFunction,
    set: &ConvexSet,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if !set.contains(g, tol)? {
        return Err(Error::NotInSet("membership_in_solution argument".into()));
    }
    match sup_value(phi, set, tol)? {
        SupValue::PlusInfinity => Ok(false),
        SupValue::Finite(sup) => {
            let attained = phi.pair(g)?;
            Ok(attained >= sup - tol.pairing * (1.0 + sup.abs()))
        }
    }
}

/// All dual functionals maximized at `g` over the origin-centered ball of
/// radius `r`: the ray through the duality image for boundary points, the
/// trivial ray for interior points.
pub fn inverse_image_ball(g: &SimpleFunction, r: f64, tol: &ToleranceConfig) -> Result<DualRay> {
    match locate_in_ball(g, r, tol)? {
        BallLocation::Sphere => Ok(DualRay {
            direction: g.duality_map(),
        }),
        BallLocation::Interior => Ok(DualRay {
            direction: DualSimpleFunction::zero(g.space().clone()),
        }),
    }
}

/// All primal functions whose duality image is maximized at `g`: the ray
/// through `g` itself for boundary points, the trivial ray for interior ones.
pub fn inverse_image_star_ball(
    g: &SimpleFunction,
    r: f64,
    tol: &ToleranceConfig,
) -> Result<PrimalRay> {
    match locate_in_ball(g, r, tol)? {
        BallLocation::Sphere => Ok(PrimalRay {
            direction: g.clone(),
        }),
        BallLocation::Interior => Ok(PrimalRay {
            direction: SimpleFunction::zero(g.space().clone()),
        }),
    }
}

/// Optimal points admit a nonzero maximizing functional; none-optimal points
/// only the zero one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalClass {
    Optimal,
    NoneOptimal,
}

/// On an origin-centered ball the optimal points are exactly the boundary.
pub fn classify_ball_point(
    g: &SimpleFunction,
    r: f64,
    tol: &ToleranceConfig,
) -> Result<OptimalClass> {
    Ok(match locate_in_ball(g, r, tol)? {
        BallLocation::Sphere => OptimalClass::Optimal,
        BallLocation::Interior => OptimalClass::NoneOptimal,
    })
}

enum BallLocation {
    Sphere,
    Interior,
}

fn locate_in_ball(g: &SimpleFunction, r: f64, tol: &ToleranceConfig) -> Result<BallLocation> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    let n = g.norm();
    let slack = tol.ball_slack(r);
    if n > r + slack {
        return Err(Error::OutsideBall { norm: n, radius: r });
    }
    if (n - r).abs() <= slack {
        Ok(BallLocation::Sphere)
    } else {
        Ok(BallLocation::Interior)
    }
}

/// Is `g` a maximizer of its own duality image over the set?
pub fn is_self_optimal(g: &SimpleFunction, set: &ConvexSet, tol: &ToleranceConfig) -> Result<bool> {
    if !set.contains(g, tol)? {
        return Err(Error::NotInSet("is_self_optimal argument".into()));
    }
    let n = g.norm();
    match sup_value(&g.duality_map(), set, tol)? {
        SupValue::PlusInfinity => Ok(false),
        SupValue::Finite(sup) => Ok(n * n >= sup - tol.pairing * (1.0 + sup.abs())),
    }
}

/// Orthogonality of a functional against a single function.
pub fn perp_function(
    phi: &DualSimpleFunction,
    f: &SimpleFunction,
    tol: &ToleranceConfig,
) -> Result<bool> {
    Ok(tol.pairing_zero(phi.pair(f)?))
}

/// Orthogonality of a functional against a whole set: every pairing with the
/// set's points vanishes. For cones the test applies to the set offset by its
/// vertex, i.e. to the generators.
pub fn perp_set(phi: &DualSimpleFunction, set: &ConvexSet, tol: &ToleranceConfig) -> Result<bool> {
    if !same_space(phi.space(), set.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(match set {
        // A solid ball spans every direction, so only the zero functional is
        // orthogonal to it.
        ConvexSet::Ball(_) | ConvexSet::SubdomainBall { .. } => phi.norm() <= tol.pairing,
        ConvexSet::Polytope { vertices } => vertices
            .iter()
            .all(|v| tol.pairing_zero(phi.pair_unchecked(v))),
        ConvexSet::Cone { generators, .. } => generators
            .iter()
            .all(|d| tol.pairing_zero(phi.pair_unchecked(d))),
        ConvexSet::Subspace { generators } => generators
            .iter()
            .all(|d| tol.pairing_zero(phi.pair_unchecked(d))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bochner::{MeasureSpace, SimpleFunction};
    use crate::xspace::XSpace;

    fn unit_space(atoms: usize, dim: usize, p: f64, p_x: f64) -> Arc<BochnerSpace> {
        BochnerSpace::new(
            MeasureSpace::unit(atoms).unwrap(),
            XSpace::new(dim, p_x).unwrap(),
            p,
        )
        .unwrap()
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
        SimpleFunction::new(space.clone(), values).unwrap()
    }

    fn basis_dual(space: &Arc<BochnerSpace>, coeffs: &[f64]) -> DualSimpleFunction {
        let f = basis_function(space, coeffs);
        DualSimpleFunction::new(f.space().clone(), f.values().to_vec()).unwrap()
    }

    #[test]
    fn zero_functional_solves_to_whole_set() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.0, 2.0);
        let set = ConvexSet::ball(SimpleFunction::zero(s.clone()), 1.0).unwrap();
        let sol = solve(&DualSimpleFunction::zero(s), &set, &tol).unwrap();
        assert!(matches!(sol.kind, SolutionKind::WholeSet));
        assert_eq!(sol.sup, SupValue::Finite(0.0));
    }

    #[test]
    fn ball_solution_is_rescaled_inverse_image() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 3.0, 2.0);
        let g = SimpleFunction::new(s.clone(), vec![vec![1.0, -0.5], vec![0.25, 2.0]]).unwrap();
        let g = g.scaled(1.0 / g.norm());
        let phi = g.duality_map();
        let set = ConvexSet::ball(SimpleFunction::zero(s), 1.0).unwrap();
        let sol = solve(&phi, &set, &tol).unwrap();
        let SolutionKind::Singleton(m) = &sol.kind else {
            panic!("expected singleton");
        };
        assert!(m.sub(&g).norm() < 1e-9);
        assert!((sol.sup.finite().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shifted_ball_solution() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.5, 3.0);
        let v = SimpleFunction::new(s.clone(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let phi = basis_dual(&s, &[2.0, -1.0]);
        let r = 0.75;
        let set = ConvexSet::ball(v.clone(), r).unwrap();
        let sol = solve(&phi, &set, &tol).unwrap();
        let SolutionKind::Singleton(m) = &sol.kind else {
            panic!("expected singleton");
        };
        let expected_sup = phi.pair(&v).unwrap() + r * phi.norm();
        assert!((sol.sup.finite().unwrap() - expected_sup).abs() < 1e-9);
        assert!((phi.pair(m).unwrap() - expected_sup).abs() < 1e-9);
        assert!((m.sub(&v).norm() - r).abs() < 1e-9);
    }

    #[test]
    fn polytope_faces() {
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 3, 2.0, 2.0);
        let vertices: Vec<SimpleFunction> = (0..3)
            .map(|i| {
                let mut coeffs = [0.0; 3];
                coeffs[i] = 1.0;
                basis_function(&s, &coeffs)
            })
            .collect();
        let set = ConvexSet::polytope(vertices).unwrap();

        let phi = basis_dual(&s, &[1.0, 1.0, 1.0]);
        let psi = basis_dual(&s, &[1.0, 1.0, 0.0]);
        let gamma = basis_dual(&s, &[1.0, 0.0, 0.0]);
        let lambda = basis_dual(&s, &[1.0, -1.0, 1.0]);

        let cases: [(&DualSimpleFunction, &[usize]); 4] = [
            (&phi, &[0, 1, 2]),
            (&psi, &[0, 1]),
            (&gamma, &[0]),
            (&lambda, &[0, 2]),
        ];
        for (functional, expected) in cases {
            let sol = solve(functional, &set, &tol).unwrap();
            let SolutionKind::PolytopeFace(face) = &sol.kind else {
                panic!("expected face");
            };
            assert_eq!(face.as_slice(), expected);
            assert!((sol.sup.finite().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ray_cone_cases() {
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 3, 3.0, 3.0);
        let u = basis_function(&s, &[25.0, 37.0, 77.0]);
        let k = ConvexSet::cone(SimpleFunction::zero(s.clone()), vec![u.clone()]).unwrap();

        let phi = basis_dual(&s, &[-9.0, 4.0, 1.0]);
        let sol = solve(&phi, &k, &tol).unwrap();
        let SolutionKind::ConeFace { active, .. } = &sol.kind else {
            panic!("expected cone face");
        };
        assert_eq!(active.as_slice(), &[0]);
        assert_eq!(sol.sup, SupValue::Finite(0.0));

        let psi = basis_dual(&s, &[-9.0, 0.0, -1.0]);
        let sol = solve(&psi, &k, &tol).unwrap();
        let SolutionKind::ConeFace { active, .. } = &sol.kind else {
            panic!("expected cone face");
        };
        assert!(active.is_empty());
        assert_eq!(sol.sup, SupValue::Finite(0.0));

        let upsilon = basis_dual(&s, &[9.0, 4.0, 0.0]);
        let sol = solve(&upsilon, &k, &tol).unwrap();
        assert!(sol.is_empty());
        assert_eq!(sol.sup, SupValue::PlusInfinity);
    }

    #[test]
    fn subspace_dichotomy() {
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 2, 2.0, 2.0);
        let d1 = SimpleFunction::indicator(s.clone(), &["a1"], &[1.0, 0.0]).unwrap();
        let d2 = SimpleFunction::indicator(s.clone(), &["a2"], &[0.0, 1.0]).unwrap();
        let set = ConvexSet::subspace(vec![d1, d2]).unwrap();

        // Supported on the remaining atom: orthogonal to the subspace.
        let phi = DualSimpleFunction::indicator(s.clone(), &["a3"], &[1.0, 2.0]).unwrap();
        let sol = solve(&phi, &set, &tol).unwrap();
        assert!(matches!(sol.kind, SolutionKind::WholeSet));

        let psi = DualSimpleFunction::indicator(s, &["a1"], &[1.0, 0.0]).unwrap();
        let sol = solve(&psi, &set, &tol).unwrap();
        assert!(sol.is_empty());
    }

    #[test]
    fn subdomain_ball_cases() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.0, 2.0);
        let set = ConvexSet::subdomain_ball(s.clone(), &["a1"], 2.5).unwrap();

        // Functional escaping the constrained atoms: unbounded.
        let psi = DualSimpleFunction::indicator(s.clone(), &["a2"], &[1.0, 0.0]).unwrap();
        let sol = solve(&psi, &set, &tol).unwrap();
        assert!(sol.is_empty());
        assert_eq!(sol.sup, SupValue::PlusInfinity);

        // Unit functional on the constrained atom: sup is the bound.
        let phi = DualSimpleFunction::indicator(s.clone(), &["a1"], &[1.0, 0.0]).unwrap();
        let sol = solve(&phi, &set, &tol).unwrap();
        assert!((sol.sup.finite().unwrap() - 2.5).abs() < 1e-12);
        let SolutionKind::Singleton(m) = &sol.kind else {
            panic!("expected maximizer");
        };
        assert!((phi.pair(m).unwrap() - 2.5).abs() < 1e-12);
        assert!(set.contains(m, &tol).unwrap());

        // The maximizer stays optimal after adding mass on the free atom.
        let free = SimpleFunction::indicator(s, &["a2"], &[5.0, -3.0]).unwrap();
        let shifted = m.add(&free);
        assert!(membership_in_solution(&phi, &shifted, &set, &tol).unwrap());
    }

    #[test]
    fn membership_checks_set_first() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.0, 2.0);
        let set = ConvexSet::ball(SimpleFunction::zero(s.clone()), 1.0).unwrap();
        let phi = basis_dual(&s, &[1.0, 0.0]);
        let outside = basis_function(&s, &[3.0, 0.0]);
        assert!(matches!(
            membership_in_solution(&phi, &outside, &set, &tol),
            Err(Error::NotInSet(_))
        ));

        let theta = SimpleFunction::zero(s.clone());
        assert!(!membership_in_solution(&phi, &theta, &set, &tol).unwrap());
        assert!(membership_in_solution(&DualSimpleFunction::zero(s), &theta, &set, &tol).unwrap());
    }

    #[test]
    fn inverse_images_on_the_ball() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 3.0, 2.0);
        let g = SimpleFunction::new(s.clone(), vec![vec![1.0, 1.0], vec![-0.5, 0.25]]).unwrap();
        let r = g.norm();

        let ray = inverse_image_ball(&g, r, &tol).unwrap();
        let jg = g.duality_map();
        for t in [0.0, 0.5, 1.0, 10.0] {
            assert!(ray.contains(&jg.scaled(t), &tol));
        }
        assert!(!ray.contains(&jg.scaled(-1.0), &tol));

        let star = inverse_image_star_ball(&g, r, &tol).unwrap();
        for t in [0.0f64, 0.5, 1.0, 10.0] {
            assert!(star.contains(&g.scaled(t), &tol));
            // Image of each member under the duality map lies on the dual ray.
            assert!(ray.contains(&g.scaled(t).duality_map(), &tol));
        }

        // Interior points get the trivial rays.
        let inner = g.scaled(0.5);
        assert!(tol.is_zero(
            inverse_image_ball(&inner, r, &tol)
                .unwrap()
                .direction
                .norm()
        ));
        assert!(tol.is_zero(
            inverse_image_star_ball(&inner, r, &tol)
                .unwrap()
                .direction
                .norm()
        ));

        assert!(matches!(
            inverse_image_ball(&g.scaled(2.0), r, &tol),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn single_atom_inverse_image_direction() {
        // One atom of mass m, g = 1_A (x) x on the sphere of radius
        // m^{1/p} ||x||: the inverse image is the ray through 1_A (x) J_X x.
        let tol = ToleranceConfig::default();
        let s = BochnerSpace::new(
            MeasureSpace::new(vec![crate::bochner::Atom {
                id: "a".into(),
                mass: 2.0,
            }])
            .unwrap(),
            XSpace::new(3, 3.0).unwrap(),
            3.0,
        )
        .unwrap();
        let x = [3.0, 0.0, 0.0];
        let g = SimpleFunction::indicator(s.clone(), &["a"], &x).unwrap();
        let r = g.norm();
        let ray = inverse_image_ball(&g, r, &tol).unwrap();
        let tensor =
            DualSimpleFunction::indicator(s.clone(), &["a"], &s.x().duality_map(&x)).unwrap();
        for t in [0.0, 0.5, 2.0] {
            assert!(ray.contains(&tensor.scaled(t), &tol));
        }
    }

    #[test]
    fn classification_on_the_ball() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.5, 2.0);
        let g = basis_function(&s, &[1.0, 1.0]);
        let r = g.norm();
        assert_eq!(
            classify_ball_point(&g, r, &tol).unwrap(),
            OptimalClass::Optimal
        );
        assert_eq!(
            classify_ball_point(&SimpleFunction::zero(s.clone()), r, &tol).unwrap(),
            OptimalClass::NoneOptimal
        );
        assert_eq!(
            classify_ball_point(&g.scaled(0.5), r, &tol).unwrap(),
            OptimalClass::NoneOptimal
        );
        assert!(classify_ball_point(&g.scaled(2.0), r, &tol).is_err());

        // No nonzero functional is maximized at an interior point.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ball = ConvexSet::ball(SimpleFunction::zero(s.clone()), r).unwrap();
        let half = g.scaled(0.5);
        for _ in 0..100 {
            let values: Vec<Vec<f64>> = (0..2)
                .map(|_| (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let phi = DualSimpleFunction::new(s.clone(), values).unwrap();
            if phi.norm() <= 1e-6 {
                continue;
            }
            assert!(!membership_in_solution(&phi, &half, &ball, &tol).unwrap());
        }
    }

    #[test]
    fn self_optimality_on_the_ball() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 3.0, 2.0);
        let g = basis_function(&s, &[0.6, -0.8]);
        let r = g.norm();
        let ball = ConvexSet::ball(SimpleFunction::zero(s.clone()), r).unwrap();
        assert!(is_self_optimal(&g, &ball, &tol).unwrap());
        assert!(!is_self_optimal(&g.scaled(0.5), &ball, &tol).unwrap());

        let theta = SimpleFunction::zero(s.clone());
        let segment = ConvexSet::polytope(vec![theta.clone(), g.clone()]).unwrap();
        assert!(is_self_optimal(&theta, &segment, &tol).unwrap());
    }

    #[test]
    fn orthogonality_tests() {
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 3, 3.0, 3.0);
        let g = basis_function(&s, &[25.0, 37.0, 77.0]);
        let u = basis_function(&s, &[3.0, -2.0, -1.0]);
        let theta_star = DualSimpleFunction::zero(s.clone());

        assert!(perp_function(&theta_star, &g, &tol).unwrap());
        assert!(perp_function(&u.duality_map(), &g, &tol).unwrap());

        let d = SimpleFunction::indicator(s.clone(), &["a1"], &[1.0, 0.0, 0.0]).unwrap();
        let sub = ConvexSet::subspace(vec![d]).unwrap();
        let off = DualSimpleFunction::indicator(s, &["a2"], &[0.0, 1.0, 0.0]).unwrap();
        assert!(perp_set(&off, &sub, &tol).unwrap());
        assert!(perp_set(&theta_star, &sub, &tol).unwrap());
    }

    #[test]
    fn solution_sets_are_convex() {
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 3, 2.5, 2.0);
        let vertices: Vec<SimpleFunction> = (0..3)
            .map(|i| {
                let mut coeffs = [0.0; 3];
                coeffs[i] = 1.0;
                basis_function(&s, &coeffs)
            })
            .collect();
        let hull = ConvexSet::polytope(vertices.clone()).unwrap();
        let psi = basis_dual(&s, &[1.0, 1.0, 0.0]);
        let sol = solve(&psi, &hull, &tol).unwrap();
        let SolutionKind::PolytopeFace(face) = &sol.kind else {
            panic!("expected face");
        };
        assert_eq!(face.as_slice(), &[0, 1]);
        for t in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let mix = vertices[0].scaled(t).add(&vertices[1].scaled(1.0 - t));
            assert!(membership_in_solution(&psi, &mix, &hull, &tol).unwrap());
        }

        // Cone face: the vertex plus combinations of active generators.
        let vertex = basis_function(&s, &[0.1, 0.1, 0.1]);
        let d1 = basis_function(&s, &[1.0, -1.0, 0.0]);
        let d2 = basis_function(&s, &[0.0, 0.0, -1.0]);
        let cone = ConvexSet::cone(vertex.clone(), vec![d1.clone(), d2]).unwrap();
        let phi = basis_dual(&s, &[1.0, 1.0, 1.0]);
        let sol = solve(&phi, &cone, &tol).unwrap();
        let SolutionKind::ConeFace { active, .. } = &sol.kind else {
            panic!("expected cone face");
        };
        assert_eq!(active.as_slice(), &[0]);
        for (t1, t2) in [(0.0, 1.0), (2.0, 3.0), (0.5, 0.0)] {
            let m1 = vertex.add(&d1.scaled(t1));
            let m2 = vertex.add(&d1.scaled(t2));
            let mix = m1.scaled(0.5).add(&m2.scaled(0.5));
            assert!(membership_in_solution(&phi, &mix, &cone, &tol).unwrap());
        }
    }

    #[test]
    fn certifying_functionals_form_a_cone() {
        // Two functionals maximized at the same point stay maximized there
        // under nonnegative combinations.
        let tol = ToleranceConfig::default();
        let s = unit_space(3, 3, 3.0, 3.0);
        let vertices: Vec<SimpleFunction> = (0..3)
            .map(|i| {
                let mut coeffs = [0.0; 3];
                coeffs[i] = 1.0;
                basis_function(&s, &coeffs)
            })
            .collect();
        let hull = ConvexSet::polytope(vertices.clone()).unwrap();
        let gamma = basis_dual(&s, &[1.0, 0.0, 0.0]);
        let lambda = basis_dual(&s, &[1.0, -1.0, 1.0]);
        let g = &vertices[0];
        assert!(membership_in_solution(&gamma, g, &hull, &tol).unwrap());
        assert!(membership_in_solution(&lambda, g, &hull, &tol).unwrap());
        for (a, b) in [(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (1.5, 0.25), (3.0, 7.0)] {
            let combo = gamma.scaled(a).add(&lambda.scaled(b));
            assert!(
                membership_in_solution(&combo, g, &hull, &tol).unwrap(),
                "a={a} b={b}"
            );
        }
    }

    #[test]
    fn cone_membership_via_nnls() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.0, 2.0);
        let d1 = basis_function(&s, &[1.0, 0.0]);
        let d2 = basis_function(&s, &[0.0, 1.0]);
        let v = basis_function(&s, &[0.5, 0.5]);
        let k = ConvexSet::cone(v.clone(), vec![d1.clone(), d2.clone()]).unwrap();
        assert!(k.contains(&v, &tol).unwrap());
        assert!(k
            .contains(&v.add(&d1.scaled(2.0)).add(&d2.scaled(0.1)), &tol)
            .unwrap());
        assert!(!k.contains(&v.sub(&d1), &tol).unwrap());
    }

    #[test]
    fn polytope_membership_via_nnls() {
        let tol = ToleranceConfig::default();
        let s = unit_space(2, 2, 2.0, 2.0);
        let a = basis_function(&s, &[1.0, 0.0]);
        let b = basis_function(&s, &[0.0, 1.0]);
        let hull = ConvexSet::polytope(vec![a.clone(), b.clone()]).unwrap();
        let mid = a.scaled(0.3).add(&b.scaled(0.7));
        assert!(hull.contains(&mid, &tol).unwrap());
        assert!(!hull.contains(&a.scaled(1.5), &tol).unwrap());
        assert!(!hull.contains(&SimpleFunction::zero(s), &tol).unwrap());
    }
}
