use serde::{Deserialize, Serialize};

use super::GaussianState;
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, RVector};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON document `{schema_version, modes, mean, disp}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianStateDoc {
    pub schema_version: u32,
    pub modes: usize,
    pub mean: Vec<f64>,
    pub disp: Vec<Vec<f64>>,
}

impl From<&GaussianState> for GaussianStateDoc {
    fn from(s: &GaussianState) -> Self {
        let d = s.disp();
        GaussianStateDoc {
            schema_version: SCHEMA_VERSION,
            modes: s.modes(),
            mean: s.mean().iter().copied().collect(),
            disp: (0..d.nrows()).map(|i| (0..d.ncols()).map(|j| d[(i, j)]).collect()).collect(),
        }
    }
}

impl TryFrom<GaussianStateDoc> for GaussianState {
    type Error = Error;

    fn try_from(doc: GaussianStateDoc) -> Result<Self> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        let dim = 2 * doc.modes;
        if doc.mean.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: doc.mean.len() });
        }
        if doc.disp.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: doc.disp.len() });
        }
        if let Some(row) = doc.disp.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        let disp = RMatrix::from_fn(dim, dim, |i, j| doc.disp[i][j]);
        GaussianState::new(RVector::from_vec(doc.mean), disp)
    }
}

impl GaussianState {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GaussianStateDoc::from(self)).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GaussianStateDoc =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        doc.try_into()
    }
}
