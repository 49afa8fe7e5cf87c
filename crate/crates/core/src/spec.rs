//! JSON input files describing `G = A x| (<tau_1> x ... x <tau_r>)`.
//!
//! ```json
//! {
//!   "A": {"type": "abelian", "cyclic_factors": [7]},
//!   "factors": [{"p": 3, "n": 2, "m": 1, "u": 1, "psi": {"type": "power", "exponent": 2}}]
//! }
//! ```
//!
//! `A` may instead be `{"type": "table", "path": "a.csv"}`, resolved relative
//! to the spec file, and `psi` may be `{"type": "map", "images": [...]}`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{import_table, power_map_aut, Automorphism, GroupError, GroupTable, SdpFactor, SdpGroup};
use crate::recipe::RecipeSpec;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(rename = "A")]
    pub a: ASpec,
    pub factors: Vec<FactorSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ASpec {
    Abelian { cyclic_factors: Vec<u64> },
    Table { path: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    #[serde(default = "one")]
    pub u: u64,
    pub psi: PsiSpec,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PsiSpec {
    Power { exponent: i64 },
    Map { images: Vec<usize> },
}

fn field_error(field: impl Into<String>, err: impl ToString) -> SpecError {
    SpecError::Field { field: field.into(), message: err.to_string() }
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SpecError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("spec serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    /// Builds the group; table paths are resolved against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<SdpGroup, SpecError> {
        let a = match &self.a {
            ASpec::Abelian { cyclic_factors } => {
                GroupTable::abelian(cyclic_factors).map_err(|e| field_error("A.cyclic_factors", e))?
            }
            ASpec::Table { path } => {
                import_table(base_dir.join(path)).map_err(|e| field_error("A.path", e))?
            }
        };
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(s, f)| {
                let psi = match &f.psi {
                    PsiSpec::Power { exponent } => power_map_aut(&a, *exponent),
                    PsiSpec::Map { images } => Automorphism::new(&a, images.clone()),
                }
                .map_err(|e| field_error(format!("factors[{s}].psi"), e))?;
                SdpFactor::new(&a, f.p, f.n, f.m, f.u, psi).map_err(|e| match e {
                    GroupError::BadFactor { message, .. } => field_error(format!("factors[{s}]"), message),
                    other => field_error(format!("factors[{s}]"), other),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SdpGroup::new(a, factors).map_err(|e| field_error("factors", e))
    }
}

impl From<&RecipeSpec> for SpecFile {
    fn from(recipe: &RecipeSpec) -> Self {
        SpecFile {
            a: ASpec::Abelian { cyclic_factors: recipe.cyclic_factors.clone() },
            factors: recipe
                .factors
                .iter()
                .map(|f| FactorSpec { p: f.p, n: f.n, m: f.m, u: 1, psi: PsiSpec::Power { exponent: f.ell } })
                .collect(),
        }
    }
}
