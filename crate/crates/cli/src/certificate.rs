//! Deterministic JSON certificates.
//!
//! Object keys are sorted (serde_json's default map), every rational is a
//! string, and nothing time- or machine-dependent is recorded, so equal
//! inputs give byte-identical output.

use quadraform_core::current::{MetricReport, INDEX_CONVENTION};
use quadraform_core::exact::rational::to_text;
use quadraform_core::{AlphaMap, BilinearForm, Error, Rational, RationalMatrix, Subspace};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn rat(r: &Rational) -> Value {
    Value::String(to_text(r))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(m: &RationalMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn form(f: &BilinearForm) -> Value {
    matrix(f.matrix())
}

pub fn subspace(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(|v| vector(v)).collect::<Vec<_>>(),
    })
}

/// `α(s_a, s_b)` keyed by `"a,b"`.
pub fn alpha(a: &AlphaMap) -> Value {
    let m = a.s_dim();
    let mut out = Map::new();
    for i in 0..m {
        for j in 0..m {
            out.insert(format!("{i},{j}"), matrix(a.get(i, j)));
        }
    }
    Value::Object(out)
}

pub fn report(r: &MetricReport) -> Value {
    json!({
        "symmetric": r.symmetric,
        "invariant": r.invariant,
        "nondegenerate": r.nondegenerate,
        "symmetry_witness": r.symmetry_witness,
        "invariance_witness": r.invariance_witness,
        "kernel_witness": r.kernel_witness.as_ref().map(|v| vector(v)),
    })
}

/// sha256 of the compact canonical encoding of `inputs`.
pub fn digest(inputs: &Value) -> String {
    let text = serde_json::to_string(inputs).expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Whether a core error is a mathematical negative (exit 2) rather than a
/// malformed request.
pub fn is_negative(e: &Error) -> bool {
    !matches!(
        e,
        Error::DimensionMismatch { .. } | Error::InvalidAlgebra(_) | Error::Parse(_) | Error::InternalInconsistency(_)
    )
}

/// Stable kind tag plus any structured witness carried by the error.
pub fn error_json(e: &Error) -> Value {
    let (kind, witness) = match e {
        Error::DimensionMismatch { expected, found } => {
            ("DimensionMismatch", json!({"expected": expected, "found": found}))
        }
        Error::DegenerateForm => ("DegenerateForm", Value::Null),
        Error::NotScalarPlusNilpotent => ("NotScalarPlusNilpotent", Value::Null),
        Error::HypothesisViolated(_) => ("HypothesisViolated", Value::Null),
        Error::InvalidAlgebra(_) => ("InvalidAlgebra", Value::Null),
        Error::InvalidPhi(_) => ("InvalidPhi", Value::Null),
        Error::BadGamma(_) => ("BadGamma", Value::Null),
        Error::BadXi(_) => ("BadXi", Value::Null),
        Error::NotDerivation { i, j } => ("NotDerivation", json!({"i": i, "j": j})),
        Error::NotSkew { i, j } => ("NotSkew", json!({"i": i, "j": j})),
        Error::CompatibilityFailed(_) => ("CompatibilityFailed", Value::Null),
        Error::BadCenterVector(_) => ("BadCenterVector", Value::Null),
        Error::NotInCentroid(_) => ("NotInCentroid", Value::Null),
        Error::ConditionFailed { condition, witness } => {
            ("ConditionFailed", json!({"condition": condition, "detail": witness}))
        }
        Error::NotPerfect => ("NotPerfect", Value::Null),
        Error::WrongNilIndex { expected, found } => {
            ("WrongNilIndex", json!({"expected": expected, "found": found}))
        }
        Error::InternalInconsistency(_) => ("InternalInconsistency", Value::Null),
        Error::Parse(_) => ("Parse", Value::Null),
    };
    json!({"kind": kind, "message": e.to_string(), "witness": witness})
}

/// Result of a verb before the header fields are attached.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: String,
    pub negative: bool,
    pub body: Map<String, Value>,
}

impl Outcome {
    pub fn positive(verdict: &str) -> Self {
        Self {
            verdict: verdict.into(),
            negative: false,
            body: Map::new(),
        }
    }

    pub fn negative(verdict: &str) -> Self {
        Self {
            verdict: verdict.into(),
            negative: true,
            body: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.body.insert(key.into(), value);
        self
    }

    pub fn put(&mut self, key: &str, value: Value) {
        self.body.insert(key.into(), value);
    }

    pub fn rejected(e: &Error) -> Self {
        Self::negative("rejected").with("error", error_json(e))
    }

    pub fn into_certificate(self, operation: &str, inputs_digest: &str) -> Value {
        let mut out = self.body;
        out.insert("operation".into(), json!(operation));
        out.insert("inputs_digest".into(), json!(inputs_digest));
        out.insert("index_convention".into(), json!(INDEX_CONVENTION));
        out.insert("verdict".into(), json!(self.verdict));
        Value::Object(out)
    }
}
