use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular table of named real-valued columns, one row per participant.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub row_ids: Vec<String>,
    columns: IndexMap<String, Vec<f64>>,
}

impl FeatureTable {
    pub fn new(row_ids: Vec<String>) -> Self {
        FeatureTable {
            row_ids,
            columns: IndexMap::new(),
        }
    }

    pub fn add_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.row_ids.len() {
            return Err(Error::invalid(format!(
                "column `{name}` has {} values for {} rows",
                values.len(),
                self.row_ids.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("column `{name}` has non-finite cells")));
        }
        self.columns.insert(name, values);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::invalid(format!("no column `{name}`")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    /// Sub-table with the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<FeatureTable> {
        let mut out = FeatureTable::new(self.row_ids.clone());
        for name in names {
            out.add_column(*name, self.column(name)?.to_vec())?;
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("participant_id");
        for name in self.columns.keys() {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, id) in self.row_ids.iter().enumerate() {
            out.push_str(id);
            for values in self.columns.values() {
                out.push_str(&format!(",{}", values[i]));
            }
            out.push('\n');
        }
        out
    }
}
