//! Vector-valued simple functions over a finite atomic measure space.
//!
//! The space is a finite list of disjoint atoms with positive mass. A simple
//! function assigns one `X` value per atom (zero on the rest of the underlying
//! set, which contributes nothing to norms or pairings). With exponent `p`
//! this models the function space `L_p` with values in `X = (R^d, l_{p_x})`;
//! dual functions carry `X*` values and the conjugate exponent `q`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tol::ToleranceConfig;
use crate::xspace::{dot, ExponentPair, XSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub id: String,
    pub mass: f64,
}

/// Finite positive atomic measure space: disjoint atoms with `0 < mass < inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
}

impl MeasureSpace {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptySelection("atom list"));
        }
        for atom in &atoms {
            if !(atom.mass.is_finite() && atom.mass > 0.0) {
                return Err(Error::InvalidMass {
                    id: atom.id.clone(),
                    mass: atom.mass,
                });
            }
        }
        for (i, atom) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|a| a.id == atom.id) {
                return Err(Error::DuplicateAtom(atom.id.clone()));
            }
        }
        Ok(MeasureSpace { atoms })
    }

    /// Unit-mass atoms named `a1..an`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(
            (1..=n)
                .map(|i| Atom {
                    id: format!("a{i}"),
                    mass: 1.0,
                })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass(&self, index: usize) -> f64 {
        self.atoms[index].mass
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.id == id)
    }
}

/// The full problem setting: measure space, model space `X` and the function
/// space exponent. Every simple function holds a shared reference to one of
/// these; two functions interoperate iff their settings are structurally
/// equal.
#[derive(Debug, Clone, PartialEq)]
pub struct BochnerSpace {
    measure: MeasureSpace,
    x: XSpace,
    exponents: ExponentPair,
}

impl BochnerSpace {
    pub fn new(measure: MeasureSpace, x: XSpace, p: f64) -> Result<Arc<Self>> {
        Ok(Arc::new(BochnerSpace {
            measure,
            x,
            exponents: ExponentPair::new(p)?,
        }))
    }

    pub fn measure(&self) -> &MeasureSpace {
        &self.measure
    }

    pub fn x(&self) -> &XSpace {
        &self.x
    }

    /// Function space exponent pair `(p, q)`.
    pub fn exponents(&self) -> ExponentPair {
        self.exponents
    }

    pub fn atom_count(&self) -> usize {
        self.measure.len()
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

pub(crate) fn same_space(a: &Arc<BochnerSpace>, b: &Arc<BochnerSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_values(space: &BochnerSpace, values: &[Vec<f64>]) -> Result<()> {
    if values.len() != space.atom_count() {
        return Err(Error::ValueCountMismatch {
            atoms: space.atom_count(),
            got: values.len(),
        });
    }
    for v in values {
        if v.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: v.len(),
            });
        }
    }
    Ok(())
}

fn weighted_norm(
    space: &BochnerSpace,
    values: &[Vec<f64>],
    atom_norm: impl Fn(&[f64]) -> f64,
    e: f64,
) -> f64 {
    let sum: f64 = values
        .iter()
        .enumerate()
        .map(|(i, v)| space.measure.mass(i) * atom_norm(v).powf(e))
        .sum();
    sum.powf(1.0 / e)
}

/// A simple function: one `X` value per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    space: Arc<BochnerSpace>,
    values: Vec<Vec<f64>>,
}

/// A dual simple function: one `X*` value per atom, paired against
/// `SimpleFunction` through mass-weighted evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSimpleFunction {
    space: Arc<BochnerSpace>,
    values: Vec<Vec<f64>>,
}

impl SimpleFunction {
    pub fn new(space: Arc<BochnerSpace>, values: Vec<Vec<f64>>) -> Result<Self> {
        check_values(&space, &values)?;
        Ok(SimpleFunction { space, values })
    }

    pub fn zero(space: Arc<BochnerSpace>) -> Self {
        let values = vec![vec![0.0; space.dim()]; space.atom_count()];
        SimpleFunction { space, values }
    }

    /// Raw tensor `1_A (x) x`: value `x` on every listed atom, zero elsewhere.
    pub fn indicator(space: Arc<BochnerSpace>, atom_ids: &[&str], x: &[f64]) -> Result<Self> {
        let mut f = Self::zero(space);
        if x.len() != f.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.space.dim(),
                got: x.len(),
            });
        }
        for id in atom_ids {
            let i = f
                .space
                .measure()
                .index_of(id)
                .ok_or_else(|| Error::UnknownAtom(id.to_string()))?;
            f.values[i] = x.to_vec();
        }
        Ok(f)
    }

    /// Isometric embedding of an `X` vector: `m^{-1/p} (1_A (x) x)` where `m`
    /// is the total mass of the selected atoms, so the result has norm
    /// `||x||_X`.
    pub fn embed(space: Arc<BochnerSpace>, atom_ids: &[&str], x: &[f64]) -> Result<Self> {
        if atom_ids.is_empty() {
            return Err(Error::EmptySelection("atom subset"));
        }
        let mut f = Self::indicator(space, atom_ids, x)?;
        let mass: f64 = atom_ids
            .iter()
            .map(|id| {
                let i = f.space.measure().index_of(id).expect("checked above");
                f.space.measure().mass(i)
            })
            .sum();
        let scale = mass.powf(-1.0 / f.space.exponents().p());
        for v in &mut f.values {
            for c in v.iter_mut() {
                *c *= scale;
            }
        }
        Ok(f)
    }

    pub fn space(&self) -> &Arc<BochnerSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &[f64] {
        &self.values[atom]
    }

    pub fn same_space(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space)
    }

    /// Function space norm `(sum_i mass_i ||f_i||_X^p)^{1/p}`.
    pub fn norm(&self) -> f64 {
        let p = self.space.exponents().p();
        weighted_norm(&self.space, &self.values, |v| self.space.x().norm(v), p)
    }

    /// Normalized duality mapping into the dual space, atomwise
    /// `||f_i||^{p-2} J_X(f_i) / ||f||^{p-2}`, extended by zero at the origin.
    pub fn duality_map(&self) -> DualSimpleFunction {
        let p = self.space.exponents().p();
        let total = self.norm();
        if total == 0.0 {
            return DualSimpleFunction::zero(self.space.clone());
        }
        let denom = total.powf(p - 2.0);
        let values = self
            .values
            .iter()
            .map(|v| {
                let n = self.space.x().norm(v);
                if n == 0.0 {
                    return vec![0.0; v.len()];
                }
                let scale = n.powf(p - 2.0) / denom;
                self.space
                    .x()
                    .duality_map(v)
                    .into_iter()
                    .map(|c| c * scale)
                    .collect()
            })
            .collect();
        DualSimpleFunction {
            space: self.space.clone(),
            values,
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        SimpleFunction {
            space: self.space.clone(),
            values: scale_values(&self.values, t),
        }
    }

    /// Atomwise sum; panics if the operands live on different spaces.
    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_space(other), "operands live on different spaces");
        SimpleFunction {
            space: self.space.clone(),
            values: zip_values(&self.values, &other.values, |a, b| a + b),
        }
    }

    /// Atomwise difference; panics if the operands live on different spaces.
    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_space(other), "operands live on different spaces");
        SimpleFunction {
            space: self.space.clone(),
            values: zip_values(&self.values, &other.values, |a, b| a - b),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// Checked atomwise linear combination `sum coeffs[k] fs[k]`.
    pub fn linear_combine(coeffs: &[f64], fs: &[&SimpleFunction]) -> Result<Self> {
        if coeffs.len() != fs.len() {
            return Err(Error::CoefficientMismatch {
                coeffs: coeffs.len(),
                functions: fs.len(),
            });
        }
        let first = fs.first().ok_or(Error::EmptySelection("function list"))?;
        let mut acc = SimpleFunction::zero(first.space.clone());
        for (&c, f) in coeffs.iter().zip(fs) {
            if !same_space(&acc.space, &f.space) {
                return Err(Error::SpaceMismatch);
            }
            acc = acc.add(&f.scaled(c));
        }
        Ok(acc)
    }
}

impl DualSimpleFunction {
    pub fn new(space: Arc<BochnerSpace>, values: Vec<Vec<f64>>) -> Result<Self> {
        check_values(&space, &values)?;
        Ok(DualSimpleFunction { space, values })
    }

    pub fn zero(space: Arc<BochnerSpace>) -> Self {
        let values = vec![vec![0.0; space.dim()]; space.atom_count()];
        DualSimpleFunction { space, values }
    }

    /// Raw tensor `1_A (x) v`: dual value `v` on every listed atom.
    pub fn indicator(space: Arc<BochnerSpace>, atom_ids: &[&str], v: &[f64]) -> Result<Self> {
        let f = SimpleFunction::indicator(space, atom_ids, v)?;
        Ok(DualSimpleFunction {
            space: f.space,
            values: f.values,
        })
    }

    pub fn space(&self) -> &Arc<BochnerSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &[f64] {
        &self.values[atom]
    }

    pub fn same_space_dual(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space)
    }

    /// Dual norm `(sum_i mass_i ||v_i||_{X*}^q)^{1/q}`.
    pub fn norm(&self) -> f64 {
        let q = self.space.exponents().q();
        weighted_norm(
            &self.space,
            &self.values,
            |v| self.space.x().dual_norm(v),
            q,
        )
    }

    /// Mass-weighted evaluation pairing `sum_i mass_i <v_i, f_i>`.
    pub fn pair(&self, f: &SimpleFunction) -> Result<f64> {
        if !same_space(&self.space, &f.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.pair_unchecked(f))
    }

    pub(crate) fn pair_unchecked(&self, f: &SimpleFunction) -> f64 {
        self.values
            .iter()
            .zip(&f.values)
            .enumerate()
            .map(|(i, (v, x))| self.space.measure().mass(i) * dot(v, x))
            .sum()
    }

    /// Inverse duality mapping back into the primal space, atomwise
    /// `||v_i||^{q-2} J_{X*}(v_i) / ||phi||^{q-2}`.
    pub fn duality_map_inv(&self) -> SimpleFunction {
        let q = self.space.exponents().q();
        let total = self.norm();
        if total == 0.0 {
            return SimpleFunction::zero(self.space.clone());
        }
        let denom = total.powf(q - 2.0);
        let values = self
            .values
            .iter()
            .map(|v| {
                let n = self.space.x().dual_norm(v);
                if n == 0.0 {
                    return vec![0.0; v.len()];
                }
                let scale = n.powf(q - 2.0) / denom;
                self.space
                    .x()
                    .duality_map_inv(v)
                    .into_iter()
                    .map(|c| c * scale)
                    .collect()
            })
            .collect();
        SimpleFunction {
            space: self.space.clone(),
            values,
        }
    }

    /// Atoms on which the function is nonzero (dual norm above the absolute
    /// tolerance).
    pub fn support_indices(&self, tol: &ToleranceConfig) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| self.space.x().dual_norm(v) > tol.abs)
            .map(|(i, _)| i)
            .collect()
    }

    /// Ids of the atoms in the support.
    pub fn support(&self, tol: &ToleranceConfig) -> Vec<String> {
        self.support_indices(tol)
            .into_iter()
            .map(|i| self.space.measure().atoms()[i].id.clone())
            .collect()
    }

    /// Restriction to the given atoms: equal values there, zero elsewhere.
    pub fn restrict(&self, atom_indices: &[usize]) -> Self {
        let mut values = vec![vec![0.0; self.space.dim()]; self.space.atom_count()];
        for &i in atom_indices {
            values[i] = self.values[i].clone();
        }
        DualSimpleFunction {
            space: self.space.clone(),
            values,
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        DualSimpleFunction {
            space: self.space.clone(),
            values: scale_values(&self.values, t),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            self.same_space_dual(other),
            "operands live on different spaces"
        );
        DualSimpleFunction {
            space: self.space.clone(),
            values: zip_values(&self.values, &other.values, |a, b| a + b),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(
            self.same_space_dual(other),
            "operands live on different spaces"
        );
        DualSimpleFunction {
            space: self.space.clone(),
            values: zip_values(&self.values, &other.values, |a, b| a - b),
        }
    }
}

fn scale_values(values: &[Vec<f64>], t: f64) -> Vec<Vec<f64>> {
    values
        .iter()
        .map(|v| v.iter().map(|c| c * t).collect())
        .collect()
}

fn zip_values(a: &[Vec<f64>], b: &[Vec<f64>], op: impl Fn(f64, f64) -> f64) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| op(u, v)).collect())
        .collect()
}
