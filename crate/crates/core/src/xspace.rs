//! Finite-dimensional model of the underlying vector space: `X = (R^d, l_p)`
//! together with its dual `(R^d, l_q)` and the normalized duality mapping
//! between them.

use crate::error::{Error, Result};

/// A conjugate exponent pair `1/p + 1/q = 1` with `1 < p < inf`.
///
/// `q` is always derived from `p`, so the pair is conjugate by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(ExponentPair {
            p,
            q: p / (p - 1.0),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair seen from the dual side: exponents swapped.
    pub fn conjugate(&self) -> Self {
        ExponentPair {
            p: self.q,
            q: self.p,
        }
    }
}

/// `|x|^e * sign(x)` with the convention `sign(0) = 0`.
fn signed_pow(x: f64, e: f64) -> f64 {
    x.abs().powf(e).copysign(x)
}

/// The model space `(R^d, l_p)`. All vectors are plain coordinate slices;
/// operations check lengths against `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct XSpace {
    dim: usize,
    exponents: ExponentPair,
}

impl XSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(XSpace {
            dim,
            exponents: ExponentPair::new(p)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> ExponentPair {
        self.exponents
    }

    fn check_dim(&self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        Ok(())
    }

    fn lp(coords: &[f64], e: f64) -> f64 {
        let sum: f64 = coords.iter().map(|c| c.abs().powf(e)).sum();
        sum.powf(1.0 / e)
    }

    /// `l_p` norm of a primal vector.
    pub fn norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        Self::lp(x, self.exponents.p)
    }

    /// `l_q` norm of a dual vector.
    pub fn dual_norm(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        Self::lp(v, self.exponents.q)
    }

    /// Canonical evaluation pairing `<v, x> = sum v_n x_n`.
    pub fn pair(&self, dual: &[f64], primal: &[f64]) -> Result<f64> {
        self.check_dim(dual)?;
        self.check_dim(primal)?;
        Ok(dot(dual, primal))
    }

    /// Normalized duality mapping `x -> |x_n|^{p-1} sign(x_n) / ||x||^{p-2}`,
    /// extended by zero at the origin.
    pub fn duality_map(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        Self::duality(x, self.exponents.p)
    }

    /// Inverse of the duality mapping: the duality map of the dual space,
    /// same formula with the conjugate exponent.
    pub fn duality_map_inv(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dim);
        Self::duality(v, self.exponents.q)
    }

    fn duality(coords: &[f64], e: f64) -> Vec<f64> {
        let norm = Self::lp(coords, e);
        if norm == 0.0 {
            return vec![0.0; coords.len()];
        }
        let scale = norm.powf(e - 2.0);
        coords
            .iter()
            .map(|&c| signed_pow(c, e - 1.0) / scale)
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
