//! TOML generator files.
//!
//! ```toml
//! [[generator]]
//! name = "S2"
//! xi = ["0", "sin(y)", "cot(x)*cos(y)"]
//! eta = "0"
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::VectorField;
use crate::symcore::{parse, SymError};

#[derive(Debug, Error)]
pub enum GeneratorFileError {
    #[error("generator file: {0}")]
    Format(String),
    #[error("generator `{name}`, coefficient {slot}: {source}")]
    Coefficient {
        name: String,
        slot: &'static str,
        source: SymError,
    },
    #[error("generator name `{0}` used twice")]
    DuplicateName(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    name: String,
    xi: [String; 3],
    #[serde(default = "zero")]
    eta: String,
}

fn zero() -> String {
    "0".into()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    #[serde(default)]
    generator: Vec<Entry>,
}

pub fn generators_from_toml(text: &str) -> Result<Vec<VectorField>, GeneratorFileError> {
    let file: GeneratorFile =
        toml::from_str(text).map_err(|e| GeneratorFileError::Format(e.to_string()))?;
    let mut out: Vec<VectorField> = Vec::new();
    for e in file.generator {
        if out.iter().any(|f| f.name.as_deref() == Some(&e.name)) {
            return Err(GeneratorFileError::DuplicateName(e.name));
        }
        let p = |slot: &'static str, s: &str| {
            parse(s).map_err(|source| GeneratorFileError::Coefficient {
                name: e.name.clone(),
                slot,
                source,
            })
        };
        let xi = [
            p("xi[0]", &e.xi[0])?,
            p("xi[1]", &e.xi[1])?,
            p("xi[2]", &e.xi[2])?,
        ];
        out.push(VectorField::new(xi, p("eta", &e.eta)?).named(&e.name));
    }
    Ok(out)
}

pub fn generators_to_toml(fields: &[VectorField]) -> String {
    let file = GeneratorFile {
        generator: fields
            .iter()
            .map(|f| Entry {
                name: f.label(),
                xi: [
                    f.xi[0].to_string(),
                    f.xi[1].to_string(),
                    f.xi[2].to_string(),
                ],
                eta: f.eta.to_string(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("generator file serializes")
}
