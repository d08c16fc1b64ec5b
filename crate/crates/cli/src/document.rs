//! Circuit documents.
//!
//! ```json
//! {
//!   "name": "example1",
//!   "gates": [
//!     { "gate": "rz", "theta": 0.7853981633974483 },
//!     { "gate": "matrix", "label": "H2", "matrix": [[[0, 0], [0, -0.785]], [[0, 0.785], [0, 0]]] }
//!   ],
//!   "reference": { "eps_bar": 0.2, "floors": { "baseline": 0.97224174 }, "eps_max": 0.759 }
//! }
//! ```
//!
//! Gates are listed left to right in the product `e^{-iH_1}⋯e^{-iH_N}`, so the
//! last gate acts on the input state first. Complex entries are `[re, im]`.

use std::collections::BTreeMap;
use std::path::Path;

use cohbound_core::{BoundMethod, Circuit, Complex64, ComplexMatrix, Gate, HermitianMatrix, StateVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed circuit document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("gate {index}: {message}")]
    Gate { index: usize, message: String },
    #[error("circuit: {0}")]
    Circuit(String),
    #[error("initial state: {0}")]
    State(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateSpec {
    Rx {
        theta: f64,
    },
    Ry {
        theta: f64,
    },
    Rz {
        theta: f64,
    },
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

/// Published numbers to compare against; mismatches become warnings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub floors: BTreeMap<BoundMethod, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gates: Vec<GateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

fn finite(index: usize, x: f64) -> Result<f64, DocumentError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(DocumentError::Gate {
            index,
            message: format!("non-finite value {x}"),
        })
    }
}

impl GateSpec {
    pub fn to_gate(&self, index: usize) -> Result<Gate, DocumentError> {
        Ok(match self {
            GateSpec::Rx { theta } => Gate::rx(finite(index, *theta)?),
            GateSpec::Ry { theta } => Gate::ry(finite(index, *theta)?),
            GateSpec::Rz { theta } => Gate::rz(finite(index, *theta)?),
            GateSpec::Matrix { label, matrix } => {
                let rows: Vec<Vec<Complex64>> = matrix
                    .iter()
                    .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .collect();
                let err = |e: &dyn std::fmt::Display| DocumentError::Gate {
                    index,
                    message: e.to_string(),
                };
                let m = ComplexMatrix::from_rows(&rows).map_err(|e| err(&e))?;
                let h = HermitianMatrix::new(m).map_err(|e| err(&e))?;
                Gate::new(label.clone().unwrap_or_else(|| format!("H{}", index + 1)), h)
            }
        })
    }
}

impl CircuitDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document is always serializable")
    }

    pub fn circuit(&self) -> Result<Circuit, DocumentError> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| g.to_gate(i))
            .collect::<Result<Vec<_>, _>>()?;
        Circuit::new(gates).map_err(|e| DocumentError::Circuit(e.to_string()))
    }

    pub fn state(&self) -> Result<Option<StateVector>, DocumentError> {
        self.initial_state
            .as_ref()
            .map(|amps| {
                let v = amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                StateVector::normalized(v).map_err(|e| DocumentError::State(e.to_string()))
            })
            .transpose()
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("circuit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "name": "demo",
        "gates": [
            { "gate": "rz", "theta": 0.7853981633974483 },
            { "gate": "matrix", "matrix": [[[1, 0], [0.2, -0.1]], [[0.2, 0.1], [-0.5, 0]]] }
        ],
        "reference": { "eps_bar": 0.2, "floors": { "thm2": 0.98 } }
    }"#;

    #[test]
    fn parses_both_gate_kinds() {
        let doc = CircuitDocument::parse(EXAMPLE).unwrap();
        let c = doc.circuit().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.gates()[1].label, "H2");
        assert_eq!(doc.reference.unwrap().floors[&BoundMethod::Theorem2], 0.98);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let doc = CircuitDocument::parse(EXAMPLE).unwrap();
        let again = CircuitDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        let (a, b) = (doc.circuit().unwrap(), again.circuit().unwrap());
        for (x, y) in a.hamiltonians().zip(b.hamiltonians()) {
            assert_eq!(x.as_matrix().as_slice(), y.as_matrix().as_slice());
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let non_hermitian = r#"{ "gates": [ { "gate": "matrix", "matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]] } ] }"#;
        assert!(matches!(
            CircuitDocument::parse(non_hermitian).unwrap().circuit(),
            Err(DocumentError::Gate { index: 0, .. })
        ));
        assert!(CircuitDocument::parse(r#"{ "gates": [ { "gate": "rw", "theta": 1 } ] }"#).is_err());
        assert!(CircuitDocument::parse(r#"{ "gates": [] }"#).unwrap().circuit().is_err());
        let mixed = r#"{ "gates": [ { "gate": "rx", "theta": 1 },
            { "gate": "matrix", "matrix": [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]] } ] }"#;
        assert!(matches!(
            CircuitDocument::parse(mixed).unwrap().circuit(),
            Err(DocumentError::Circuit(_))
        ));
    }
}
