use serde::{Deserialize, Serialize};

use super::special::student_t_two_tailed;
use super::{is_constant, mean, FeatureTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub p: f64,
}

/// Pearson r with a two-tailed Student-t p-value on n − 2 df.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "pearson inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::invalid(format!("pearson needs n >= 3, got {n}")));
    }
    if is_constant(x) {
        return Err(Error::ZeroVariance("x".into()));
    }
    if is_constant(y) {
        return Err(Error::ZeroVariance("y".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if (1.0 - r.abs()) <= f64::EPSILON {
        0.0
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        student_t_two_tailed(t, df)
    };
    Ok(Correlation { r, p })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramCell {
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub significant: bool,
    /// `*` p < .05, `**` p < .01, `***` p < .001.
    pub stars: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CorrelogramCell {
    fn defined(c: Correlation, alpha: f64) -> Self {
        CorrelogramCell {
            r: Some(c.r),
            p: Some(c.p),
            significant: c.p < alpha,
            stars: stars(c.p).to_string(),
            error: None,
        }
    }

    fn undefined(error: String) -> Self {
        CorrelogramCell {
            r: None,
            p: None,
            significant: false,
            stars: String::new(),
            error: Some(error),
        }
    }

    pub fn is_defined(&self) -> bool {
        self.r.is_some()
    }
}

pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Symmetric matrix of pairwise Pearson correlations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub names: Vec<String>,
    pub alpha: f64,
    pub cells: Vec<Vec<CorrelogramCell>>,
}

pub fn correlogram(table: &FeatureTable, alpha: f64) -> Result<Correlogram> {
    let columns: Vec<(&str, &[f64])> = table.columns().collect();
    if columns.len() < 2 {
        return Err(Error::invalid("correlogram needs at least two columns"));
    }
    let k = columns.len();
    let mut cells = vec![vec![CorrelogramCell::undefined(String::new()); k]; k];
    for i in 0..k {
        for j in i..k {
            let cell = if i == j {
                if columns[i].1.len() >= 3 && !is_constant(columns[i].1) {
                    CorrelogramCell::defined(Correlation { r: 1.0, p: 0.0 }, alpha)
                } else {
                    CorrelogramCell::undefined(format!("`{}` has zero variance", columns[i].0))
                }
            } else {
                match pearson(columns[i].1, columns[j].1) {
                    Ok(c) => CorrelogramCell::defined(c, alpha),
                    Err(e) => CorrelogramCell::undefined(format!(
                        "{} × {}: {e}",
                        columns[i].0, columns[j].0
                    )),
                }
            };
            cells[j][i] = cell.clone();
            cells[i][j] = cell;
        }
    }
    Ok(Correlogram {
        names: columns.iter().map(|(n, _)| n.to_string()).collect(),
        alpha,
        cells,
    })
}

impl Correlogram {
    pub fn cell(&self, a: &str, b: &str) -> Option<&CorrelogramCell> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(&self.cells[i][j])
    }

    fn matrix_csv(&self, value: impl Fn(&CorrelogramCell) -> Option<f64>) -> String {
        let mut out = String::new();
        out.push_str("variable");
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.cells) {
            out.push_str(name);
            for cell in row {
                match value(cell) {
                    Some(v) => out.push_str(&format!(",{v:.6}")),
                    None => out.push_str(",NA"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// r matrix; undefined cells are `NA`.
    pub fn r_csv(&self) -> String {
        self.matrix_csv(|c| c.r)
    }

    pub fn p_csv(&self) -> String {
        self.matrix_csv(|c| c.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_correlations() {
        let c = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert_eq!((c.r, c.p), (1.0, 0.0));
        let c = pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!((c.r, c.p), (-1.0, 0.0));
    }

    #[test]
    fn hand_computed_point_eight() {
        // Sxy = 4, Sxx = Syy = 5
        let c = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((c.r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    fn table(cols: &[(&str, Vec<f64>)]) -> FeatureTable {
        let n = cols[0].1.len();
        let mut t = FeatureTable::new((0..n).map(|i| format!("p{i}")).collect());
        for (name, v) in cols {
            t.add_column(*name, v.clone()).unwrap();
        }
        t
    }

    #[test]
    fn identical_and_negated_columns() {
        let x = vec![1.0, 4.0, 2.0, 8.0, 5.0];
        let t = table(&[
            ("a", x.clone()),
            ("b", x.clone()),
            ("c", x.iter().map(|v| -v).collect()),
            ("k", vec![3.0; 5]),
        ]);
        let cg = correlogram(&t, 0.05).unwrap();
        assert_eq!(cg.cell("a", "b").unwrap().r, Some(1.0));
        let neg = cg.cell("a", "c").unwrap();
        assert_eq!(neg.r, Some(-1.0));
        assert!(neg.significant);
        assert_eq!(neg.stars, "***");
        assert!(!cg.cell("a", "k").unwrap().is_defined());
        assert!(!cg.cell("k", "k").unwrap().is_defined());
        assert_eq!(cg.cell("a", "a").unwrap().r, Some(1.0));
        assert!(cg.r_csv().contains("NA"));
    }
}
