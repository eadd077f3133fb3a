//! Problem file schema and validation.
//!
//! A problem file is a UTF-8 JSON document describing one measure space, the
//! vector space parameters, named primal/dual functions (per-atom coordinate
//! arrays) and named convex sets referencing those functions by name.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use bochner_opt::{
    Atom, BallSpec, BochnerSpace, ConvexSet, DualSimpleFunction, MeasureSpace, SimpleFunction,
    ToleranceConfig, XSpace,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDto {
    pub space: SpaceDto,
    pub x: XDto,
    pub p: f64,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionDto>,
    #[serde(default)]
    pub sets: BTreeMap<String, SetDto>,
    #[serde(default)]
    pub tolerances: Option<ToleranceDto>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDto {
    pub atoms: Vec<AtomDto>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDto {
    pub id: String,
    pub mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XDto {
    pub dim: usize,
    pub p_x: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDto {
    pub kind: FunctionKind,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Primal,
    Dual,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetDto {
    Ball {
        center: String,
        radius: f64,
    },
    SubdomainBall {
        atoms: Vec<String>,
        bound: f64,
    },
    Polytope {
        vertices: Vec<String>,
    },
    Cone {
        vertex: String,
        generators: Vec<String>,
    },
    Subspace {
        generators: Vec<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDto {
    pub rel: Option<f64>,
    pub abs: Option<f64>,
    pub pairing: Option<f64>,
    pub certificate: Option<f64>,
}

/// A fully resolved problem.
pub struct Problem {
    pub space: Arc<BochnerSpace>,
    pub primals: BTreeMap<String, SimpleFunction>,
    pub duals: BTreeMap<String, DualSimpleFunction>,
    pub sets: BTreeMap<String, ConvexSet>,
    pub tol: ToleranceConfig,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let dto: ProblemDto = serde_json::from_str(&text).map_err(|e| {
            CliError::Validation(format!(
                "{}: parse error at line {} column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        Problem::from_dto(dto)
    }

    pub fn from_dto(dto: ProblemDto) -> Result<Problem, CliError> {
        let measure = MeasureSpace::new(
            dto.space
                .atoms
                .into_iter()
                .map(|a| Atom {
                    id: a.id,
                    mass: a.mass,
                })
                .collect(),
        )?;
        let x = XSpace::new(dto.x.dim, dto.x.p_x)?;
        let space = BochnerSpace::new(measure, x, dto.p)?;

        let mut tol = ToleranceConfig::default();
        if let Some(t) = dto.tolerances {
            if let Some(v) = t.rel {
                tol.rel = v;
            }
            if let Some(v) = t.abs {
                tol.abs = v;
            }
            if let Some(v) = t.pairing {
                tol.pairing = v;
            }
            if let Some(v) = t.certificate {
                tol.certificate = v;
            }
        }

        let mut primals = BTreeMap::new();
        let mut duals = BTreeMap::new();
        for (name, f) in dto.functions {
            match f.kind {
                FunctionKind::Primal => {
                    let sf = SimpleFunction::new(space.clone(), f.values)
                        .map_err(|e| CliError::Validation(format!("function {name:?}: {e}")))?;
                    primals.insert(name, sf);
                }
                FunctionKind::Dual => {
                    let df = DualSimpleFunction::new(space.clone(), f.values)
                        .map_err(|e| CliError::Validation(format!("function {name:?}: {e}")))?;
                    duals.insert(name, df);
                }
            }
        }

        let mut sets = BTreeMap::new();
        for (name, s) in dto.sets {
            let resolve_primal = |n: &String| -> Result<SimpleFunction, CliError> {
                primals.get(n).cloned().ok_or_else(|| {
                    CliError::Validation(format!(
                        "set {name:?} references unknown primal function {n:?}"
                    ))
                })
            };
            let set = match s {
                SetDto::Ball { center, radius } => ConvexSet::Ball(
                    BallSpec::new(resolve_primal(&center)?, radius)
                        .map_err(|e| CliError::Validation(format!("set {name:?}: {e}")))?,
                ),
                SetDto::SubdomainBall { atoms, bound } => {
                    let ids: Vec<&str> = atoms.iter().map(String::as_str).collect();
                    ConvexSet::subdomain_ball(space.clone(), &ids, bound)
                        .map_err(|e| CliError::Validation(format!("set {name:?}: {e}")))?
                }
                SetDto::Polytope { vertices } => {
                    let vs = vertices
                        .iter()
                        .map(resolve_primal)
                        .collect::<Result<Vec<_>, _>>()?;
                    ConvexSet::polytope(vs)
                        .map_err(|e| CliError::Validation(format!("set {name:?}: {e}")))?
                }
                SetDto::Cone { vertex, generators } => {
                    let v = resolve_primal(&vertex)?;
                    let gs = generators
                        .iter()
                        .map(resolve_primal)
                        .collect::<Result<Vec<_>, _>>()?;
                    ConvexSet::cone(v, gs)
                        .map_err(|e| CliError::Validation(format!("set {name:?}: {e}")))?
                }
                SetDto::Subspace { generators } => {
                    let gs = generators
                        .iter()
                        .map(resolve_primal)
                        .collect::<Result<Vec<_>, _>>()?;
                    ConvexSet::subspace(gs)
                        .map_err(|e| CliError::Validation(format!("set {name:?}: {e}")))?
                }
            };
            sets.insert(name, set);
        }

        Ok(Problem {
            space,
            primals,
            duals,
            sets,
            tol,
        })
    }

    pub fn primal(&self, name: &str) -> Result<&SimpleFunction, CliError> {
        self.primals.get(name).ok_or_else(|| {
            CliError::Validation(format!(
                "no primal function named {name:?} in the problem file"
            ))
        })
    }

    pub fn dual(&self, name: &str) -> Result<&DualSimpleFunction, CliError> {
        self.duals.get(name).ok_or_else(|| {
            CliError::Validation(format!(
                "no dual function named {name:?} in the problem file"
            ))
        })
    }

    pub fn set(&self, name: &str) -> Result<&ConvexSet, CliError> {
        self.sets.get(name).ok_or_else(|| {
            CliError::Validation(format!("no set named {name:?} in the problem file"))
        })
    }

    pub fn ball(&self, name: &str) -> Result<&BallSpec, CliError> {
        match self.set(name)? {
            ConvexSet::Ball(b) => Ok(b),
            _ => Err(CliError::Validation(format!("set {name:?} is not a ball"))),
        }
    }
}
