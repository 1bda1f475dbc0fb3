//! Standardized regressions of each MA outcome and the report tables built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{display_name, OUTCOMES};
use crate::psychometrics::{describe, DescriptiveStats};
use crate::stats::{select_model, standardize, FeatureTable, ModelSelection};

pub const REGRESSION_HEADER: [&str; 8] = ["Group", "Predictors", "β", "S.E.", "t", "p", "R²", "AIC"];

/// Result of model selection for one outcome; `error` is set when no candidate could be fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeModel {
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<ModelSelection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Z-scores every column. Constant columns cannot be standardized and are
/// dropped; their names are returned alongside the table.
pub fn standardize_table(table: &FeatureTable) -> Result<(FeatureTable, Vec<String>)> {
    let mut out = FeatureTable::new(table.row_ids.clone());
    let mut dropped = Vec::new();
    for (name, values) in table.columns() {
        match standardize(values) {
            Ok(z) => out.add_column(name, z)?,
            Err(Error::ZeroVariance(_)) => dropped.push(name.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok((out, dropped))
}

/// Standardizes the table and selects a model for `outcome` among the candidates.
pub fn regress_outcome(
    table: &FeatureTable,
    outcome: &str,
    candidates: &[Vec<String>],
) -> Result<ModelSelection> {
    let (z, dropped) = standardize_table(table)?;
    if dropped.iter().any(|d| d == outcome) {
        return Err(Error::ZeroVariance(outcome.to_string()));
    }
    select_model(&z, outcome, candidates)
}

pub fn regress_all(table: &FeatureTable, candidates: &[Vec<String>]) -> Vec<OutcomeModel> {
    OUTCOMES
        .iter()
        .map(|outcome| outcome_model(table, outcome, candidates))
        .collect()
}

pub fn outcome_model(table: &FeatureTable, outcome: &str, candidates: &[Vec<String>]) -> OutcomeModel {
    match regress_outcome(table, outcome, candidates) {
        Ok(selection) => OutcomeModel {
            outcome: outcome.to_string(),
            selection: Some(selection),
            error: None,
        },
        Err(e) => OutcomeModel {
            outcome: outcome.to_string(),
            selection: None,
            error: Some(e.to_string()),
        },
    }
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

/// Coefficient table in the layout `Group,Predictors,β,S.E.,t,p,R²,AIC`, one
/// row per coefficient; R² and AIC repeat across the rows of a model.
pub fn regression_csv(models: &[OutcomeModel]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REGRESSION_HEADER)?;
    for model in models {
        let Some(sel) = &model.selection else { continue };
        let report = &sel.report;
        let aic = report.aic.map(fmt3).unwrap_or_else(|| "NA".into());
        for row in &report.rows {
            w.write_record([
                display_name(&model.outcome),
                display_name(&row.name),
                fmt3(row.beta),
                fmt3(row.se),
                fmt3(row.t),
                fmt3(row.p),
                fmt3(report.r_squared),
                aic.clone(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveRow {
    pub variable: String,
    #[serde(flatten)]
    pub stats: DescriptiveStats,
}

pub fn descriptives(table: &FeatureTable, columns: &[&str]) -> Result<Vec<DescriptiveRow>> {
    columns
        .iter()
        .map(|name| {
            Ok(DescriptiveRow {
                variable: name.to_string(),
                stats: describe(table.column(name)?)?,
            })
        })
        .collect()
}

pub fn descriptives_csv(rows: &[DescriptiveRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["Variable", "N", "M", "SD", "Q1", "Q3", "SKP"])?;
    for row in rows {
        let s = &row.stats;
        w.write_record([
            display_name(&row.variable),
            s.n.to_string(),
            fmt3(s.mean),
            fmt3(s.sd),
            fmt3(s.q1),
            fmt3(s.q3),
            fmt3(s.skewness),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
