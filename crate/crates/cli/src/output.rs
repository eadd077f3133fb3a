//! Output document assembly and serialization.
//!
//! All commands emit one JSON document on stdout. Floating point numbers are
//! written with 17 significant digits so parsing the document back yields
//! bit-identical values.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::json;
use serde_json::Value;

use bochner_opt::{
    DualSimpleFunction, SimpleFunction, Solution, SolutionKind, SupValue, ToleranceConfig,
    ViCertificate,
};

pub fn function_value(kind: &str, values: &[Vec<f64>]) -> Value {
    json!({ "kind": kind, "values": values })
}

pub fn primal_value(f: &SimpleFunction) -> Value {
    function_value("primal", f.values())
}

pub fn dual_value(f: &DualSimpleFunction) -> Value {
    function_value("dual", f.values())
}

pub fn sup_to_value(sup: &SupValue) -> Value {
    match sup {
        SupValue::Finite(v) => json!(v),
        SupValue::PlusInfinity => json!("infinity"),
    }
}

pub fn solution_value(solution: &Solution) -> Value {
    match &solution.kind {
        SolutionKind::Empty => json!({ "kind": "empty" }),
        SolutionKind::WholeSet => json!({ "kind": "whole_set" }),
        SolutionKind::Singleton(point) => json!({
            "kind": "singleton",
            "point": primal_value(point),
        }),
        SolutionKind::PolytopeFace(face) => json!({
            "kind": "polytope_face",
            "vertex_indices": face,
        }),
        SolutionKind::ConeFace { vertex, active } => json!({
            "kind": "cone_face",
            "vertex": primal_value(vertex),
            "active_generators": active,
        }),
    }
}

pub fn certificate_value(cert: &ViCertificate) -> Value {
    let mut doc = json!({
        "holds": cert.holds,
        "worst_violation": cert.worst_violation,
    });
    if let Some(witness) = &cert.witness {
        doc["witness"] = primal_value(witness);
    }
    doc
}

pub fn tolerances_value(tol: &ToleranceConfig) -> Value {
    json!({
        "rel": tol.rel,
        "abs": tol.abs,
        "pairing": tol.pairing,
        "certificate": tol.certificate,
    })
}

#[derive(Serialize)]
pub struct OutputDoc {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub tolerances: Value,
}

impl OutputDoc {
    pub fn new(command: &str, inputs: Value, result: Value, tol: &ToleranceConfig) -> Self {
        OutputDoc {
            command: command.to_string(),
            inputs,
            result,
            sup_value: None,
            certificate: None,
            tolerances: tolerances_value(tol),
        }
    }
}

/// JSON formatter writing every `f64` with 17 significant digits.
struct PreciseFormatter;

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn print_doc(doc: &OutputDoc) -> io::Result<()> {
    let stdout = io::stdout();
    let mut handle = stdout.lock();
    let mut ser = serde_json::Serializer::with_formatter(&mut handle, PreciseFormatter);
    doc.serialize(&mut ser).map_err(io::Error::other)?;
    handle.write_all(b"\n")
}
