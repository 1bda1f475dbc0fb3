//! Ordinary least squares with intercept, t-tests and Gaussian AIC.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::special::student_t_two_tailed;
use super::{is_constant, mean, FeatureTable};
use crate::error::{Error, Result};

pub const INTERCEPT: &str = "Intercept";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub beta: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub outcome: String,
    pub predictors: Vec<String>,
    /// Intercept first, then predictors in the given order.
    pub rows: Vec<CoefficientRow>,
    pub r_squared: f64,
    pub rss: f64,
    /// `None` when the fit is perfect (RSS = 0) and the log-likelihood diverges.
    pub aic: Option<f64>,
    pub perfect_fit: bool,
    pub n: usize,
}

impl RegressionReport {
    pub fn coefficient(&self, name: &str) -> Option<&CoefficientRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Gaussian maximum-likelihood AIC: n·ln(2π·RSS/n) + n + 2k, k = coefficients incl. intercept.
pub fn gaussian_aic(n: usize, rss: f64, coefficients: usize) -> f64 {
    let n = n as f64;
    n * (2.0 * PI * rss / n).ln() + n + 2.0 * coefficients as f64
}

/// In-place Cholesky factorisation of a symmetric positive definite matrix
/// (row-major, dimension `k`). Fails when a pivot collapses relative to the
/// diagonal, which signals a rank-deficient design.
fn cholesky(a: &mut [f64], k: usize) -> Result<()> {
    let scale = (0..k).map(|i| a[i * k + i]).fold(0.0f64, f64::max);
    for j in 0..k {
        let mut d = a[j * k + j];
        for m in 0..j {
            d -= a[j * k + m] * a[j * k + m];
        }
        if d <= scale * 1e-12 || !d.is_finite() {
            return Err(Error::SingularDesign);
        }
        let d = d.sqrt();
        a[j * k + j] = d;
        for i in j + 1..k {
            let mut s = a[i * k + j];
            for m in 0..j {
                s -= a[i * k + m] * a[j * k + m];
            }
            a[i * k + j] = s / d;
        }
        for i in 0..j {
            a[i * k + j] = 0.0;
        }
    }
    Ok(())
}

/// Solves L·Lᵀ·x = b given the lower factor.
fn cholesky_solve(l: &[f64], k: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..k {
        for m in 0..i {
            y[i] -= l[i * k + m] * y[m];
        }
        y[i] /= l[i * k + i];
    }
    for i in (0..k).rev() {
        for m in i + 1..k {
            y[i] -= l[m * k + i] * y[m];
        }
        y[i] /= l[i * k + i];
    }
    y
}

/// Fits y on the given predictor columns plus an intercept.
pub fn ols_fit(outcome: (&str, &[f64]), predictors: &[(&str, &[f64])]) -> Result<RegressionReport> {
    let (outcome_name, y) = outcome;
    let n = y.len();
    let p = predictors.len();
    let k = p + 1;
    if let Some((name, col)) = predictors.iter().find(|(_, c)| c.len() != n) {
        return Err(Error::invalid(format!(
            "predictor `{name}` has {} rows, outcome has {n}",
            col.len()
        )));
    }
    if n <= k {
        return Err(Error::invalid(format!(
            "{n} observations cannot support {k} coefficients"
        )));
    }
    if is_constant(y) {
        return Err(Error::ZeroVariance(outcome_name.to_string()));
    }

    let row = |i: usize| std::iter::once(1.0).chain(predictors.iter().map(move |(_, c)| c[i]));
    let mut xtx = vec![0.0; k * k];
    let mut xty = vec![0.0; k];
    for (i, &yi) in y.iter().enumerate() {
        let xi: Vec<f64> = row(i).collect();
        for a in 0..k {
            xty[a] += xi[a] * yi;
            for b in 0..=a {
                xtx[a * k + b] += xi[a] * xi[b];
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            xtx[a * k + b] = xtx[b * k + a];
        }
    }
    let mut factor = xtx;
    cholesky(&mut factor, k)?;
    let beta = cholesky_solve(&factor, k, &xty);

    let y_mean = mean(y);
    let mut rss = 0.0;
    let mut tss = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        let fitted: f64 = row(i).zip(&beta).map(|(x, b)| x * b).sum();
        rss += (yi - fitted).powi(2);
        tss += (yi - y_mean).powi(2);
    }
    let perfect_fit = rss <= tss * 1e-20;
    if perfect_fit {
        rss = 0.0;
    }
    let df = (n - k) as f64;
    let sigma2 = rss / df;

    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let mut unit = vec![0.0; k];
        unit[j] = 1.0;
        let inv_jj = cholesky_solve(&factor, k, &unit)[j];
        let se = (sigma2 * inv_jj).sqrt();
        let (t, pval) = if se > 0.0 {
            let t = beta[j] / se;
            (t, student_t_two_tailed(t, df))
        } else if beta[j] == 0.0 {
            (0.0, 1.0)
        } else {
            (beta[j].signum() * f64::INFINITY, 0.0)
        };
        rows.push(CoefficientRow {
            name: if j == 0 {
                INTERCEPT.to_string()
            } else {
                predictors[j - 1].0.to_string()
            },
            beta: beta[j],
            se,
            t,
            p: pval,
        });
    }

    Ok(RegressionReport {
        outcome: outcome_name.to_string(),
        predictors: predictors.iter().map(|(n, _)| n.to_string()).collect(),
        rows,
        r_squared: (1.0 - rss / tss).clamp(0.0, 1.0),
        rss,
        aic: (!perfect_fit).then(|| gaussian_aic(n, rss, k)),
        perfect_fit,
        n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFit {
    pub predictors: Vec<String>,
    pub aic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSelection {
    pub chosen: Vec<String>,
    pub report: RegressionReport,
    pub candidates: Vec<CandidateFit>,
}

/// Fits every candidate predictor set and keeps the one with the lowest AIC.
///
/// Ties go to the smaller predictor set, then to the lexicographically
/// smaller name list.
pub fn select_model(
    table: &FeatureTable,
    outcome: &str,
    candidates: &[Vec<String>],
) -> Result<ModelSelection> {
    if candidates.is_empty() {
        return Err(Error::invalid("no candidate predictor sets"));
    }
    let y = table.column(outcome)?;
    let mut fits: Vec<(CandidateFit, Option<RegressionReport>)> = Vec::new();
    for set in candidates {
        let fit = set
            .iter()
            .map(|name| Ok((name.as_str(), table.column(name)?)))
            .collect::<Result<Vec<_>>>()
            .and_then(|cols| ols_fit((outcome, y), &cols))
            .and_then(|report| match report.aic {
                Some(_) => Ok(report),
                None => Err(Error::invalid("perfect fit, AIC undefined")),
            });
        match fit {
            Ok(report) => fits.push((
                CandidateFit {
                    predictors: set.clone(),
                    aic: report.aic,
                    error: None,
                },
                Some(report),
            )),
            Err(e) => fits.push((
                CandidateFit {
                    predictors: set.clone(),
                    aic: None,
                    error: Some(e.to_string()),
                },
                None,
            )),
        }
    }
    let best = fits
        .iter()
        .filter_map(|(c, r)| Some((c, r.as_ref()?, c.aic?)))
        .min_by(|a, b| {
            a.2.total_cmp(&b.2)
                .then(a.0.predictors.len().cmp(&b.0.predictors.len()))
                .then_with(|| a.0.predictors.cmp(&b.0.predictors))
        });
    match best {
        Some((c, report, _)) => Ok(ModelSelection {
            chosen: c.predictors.clone(),
            report: report.clone(),
            candidates: fits.iter().map(|(c, _)| c.clone()).collect(),
        }),
        None => Err(Error::NoCandidate(
            fits.iter()
                .map(|(c, _)| {
                    format!(
                        "[{}]: {}",
                        c.predictors.join(", "),
                        c.error.as_deref().unwrap_or("unknown")
                    )
                })
                .collect::<Vec<_>>()
                .join("; "),
        )),
    }
}
