//! JSON manifest describing a generated form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_li, FormError, TruncatedForm};
use crate::voa::literal::format_element;
use crate::voa::LatticeJson;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub basis_rank: usize,
    pub gram: Vec<Vec<String>>,
    pub li: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormManifest {
    pub lattice: LatticeJson,
    pub cutoff: u32,
    pub generators: Vec<String>,
    pub degrees: BTreeMap<String, DegreeEntry>,
}

impl FormManifest {
    pub fn from_form(form: &TruncatedForm) -> Self {
        let cert = check_li(form);
        let degrees = cert
            .degrees
            .into_iter()
            .map(|d| (d.degree.to_string(), DegreeEntry { basis_rank: d.rank, gram: d.gram, li: d.integral }))
            .collect();
        FormManifest {
            lattice: form.host().lattice().to_json(),
            cutoff: form.cutoff(),
            generators: form.generators().iter().map(format_element).collect(),
            degrees,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, FormError> {
        serde_json::from_str(s).map_err(|e| FormError::Precondition(format!("malformed manifest: {e}")))
    }

    /// Ranks in degree order.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.cutoff).filter_map(|s| self.degrees.get(&s.to_string()).map(|d| d.basis_rank)).collect()
    }
}
