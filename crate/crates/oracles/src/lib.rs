//! Slow, literal reference implementations for cross-checking the library.
//!
//! Everything here works on plain vectors and maps so the checks share no
//! code with the implementation under test.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

pub const UNREACHABLE: usize = usize::MAX / 4;

// ---------------------------------------------------------------------------
// Graphs

/// All-pairs hop distances; `UNREACHABLE` between components.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// (N − 1) / Σ d over reachable nodes; 0 for an isolated node.
pub fn closeness_graph_size(distances: &[usize]) -> f64 {
    let total: usize = distances.iter().filter(|&&x| x < UNREACHABLE).sum();
    if total == 0 {
        return 0.0;
    }
    (distances.len() as f64 - 1.0) / total as f64
}

/// ((r − 1) / Σ d) · ((r − 1) / (N − 1)), r counting the node itself.
pub fn closeness_component_normalized(distances: &[usize]) -> f64 {
    let reach: Vec<usize> = distances.iter().copied().filter(|&x| x < UNREACHABLE).collect();
    let total: usize = reach.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let r = reach.len() as f64;
    ((r - 1.0) / total as f64) * ((r - 1.0) / (distances.len() as f64 - 1.0))
}

/// Triangles through `i` over pairs of its neighbours.
pub fn local_clustering(adj: &[Vec<bool>], i: usize) -> f64 {
    let n = adj.len();
    let k = (0..n).filter(|&j| adj[i][j]).count();
    if k < 2 {
        return 0.0;
    }
    let mut triangles = 0;
    for a in 0..n {
        for b in a + 1..n {
            if adj[i][a] && adj[i][b] && adj[a][b] {
                triangles += 1;
            }
        }
    }
    triangles as f64 / (k * (k - 1) / 2) as f64
}

/// Number of participants producing each unordered association pair, each
/// participant given as (cue, responses) lists. Self-pairs are ignored.
pub fn association_counts(participants: &[Vec<(String, Vec<String>)>]) -> BTreeMap<(String, String), u32> {
    let mut counts = BTreeMap::new();
    for person in participants {
        let mut pairs = BTreeSet::new();
        for (cue, responses) in person {
            for r in responses {
                if r != cue {
                    let key = if cue < r { (cue.clone(), r.clone()) } else { (r.clone(), cue.clone()) };
                    pairs.insert(key);
                }
            }
        }
        for p in pairs {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}

/// Edge class from the −1/0/+1 labels of its endpoints.
pub fn edge_class(a: i8, b: i8) -> &'static str {
    let s = [a, b];
    if s.contains(&1) && s.contains(&-1) {
        "contrastive"
    } else if s.contains(&1) {
        "positive"
    } else if s.contains(&-1) {
        "negative"
    } else {
        "neutral"
    }
}

pub fn edge_colour(class: &str) -> &'static str {
    match class {
        "positive" => "cyan",
        "negative" => "red",
        "neutral" => "black",
        "contrastive" => "purple",
        other => panic!("unknown edge class {other}"),
    }
}

// ---------------------------------------------------------------------------
// Statistics

pub fn t_two_tailed(t: f64, df: f64) -> f64 {
    2.0 * StudentsT::new(0.0, 1.0, df).expect("valid df").sf(t.abs())
}

pub fn chi_squared_sf(x: f64, df: f64) -> f64 {
    ChiSquared::new(df).expect("valid df").sf(x)
}

/// Pearson r from raw sums and its two-tailed t-test p-value.
pub fn pearson(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
    let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
    (r, t_two_tailed(t, n - 2.0))
}

#[derive(Debug, Clone)]
pub struct Ols {
    /// Intercept first.
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub rss: f64,
    pub r_squared: f64,
    pub aic: f64,
}

/// OLS with intercept through the Moore–Penrose pseudo-inverse.
pub fn ols(y: &[f64], columns: &[Vec<f64>]) -> Ols {
    let n = y.len();
    let k = columns.len() + 1;
    let x = DMatrix::from_fn(n, k, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] });
    let yv = DVector::from_column_slice(y);
    let beta = x.clone().pseudo_inverse(1e-12).expect("pseudo-inverse") * &yv;
    let rss = (&yv - &x * &beta).norm_squared();
    let ybar = yv.mean();
    let tss: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
    let df = (n - k) as f64;
    let cov = (x.transpose() * &x).try_inverse().expect("full rank") * (rss / df);
    let nf = n as f64;
    let se: Vec<f64> = (0..k).map(|j| cov[(j, j)].sqrt()).collect();
    let t: Vec<f64> = (0..k).map(|j| beta[j] / se[j]).collect();
    Ols {
        beta: beta.iter().copied().collect(),
        p: t.iter().map(|&t| t_two_tailed(t, df)).collect(),
        se,
        t,
        rss,
        r_squared: 1.0 - rss / tss,
        aic: nf * (2.0 * std::f64::consts::PI * rss / nf).ln() + nf + 2.0 * k as f64,
    }
}

/// Hyndman–Fan type 7 quantile with 1-based order statistics.
pub fn type7(values: &[f64], p: f64) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let j = (n * p + 1.0 - p).floor();
    let g = n * p + 1.0 - p - j;
    let at = |k: f64| s[(k as usize).clamp(1, s.len()) - 1];
    (1.0 - g) * at(j) + g * at(j + 1.0)
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn sample_sd(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}

/// Adjusted Fisher–Pearson skewness G1.
pub fn skewness(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (m, s) = (mean(x), sample_sd(x));
    n / ((n - 1.0) * (n - 2.0)) * x.iter().map(|v| ((v - m) / s).powi(3)).sum::<f64>()
}

/// Two-sample Kruskal–Wallis H with tie correction, ranks by counting.
pub fn kruskal_wallis(a: &[f64], b: &[f64]) -> (f64, f64) {
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = all.len() as f64;
    let rank = |v: f64| {
        let less = all.iter().filter(|&&w| w < v).count() as f64;
        let equal = all.iter().filter(|&&w| w == v).count() as f64;
        less + (equal + 1.0) / 2.0
    };
    let ra: f64 = a.iter().map(|&v| rank(v)).sum();
    let rb: f64 = b.iter().map(|&v| rank(v)).sum();
    let h = 12.0 / (n * (n + 1.0)) * (ra * ra / a.len() as f64 + rb * rb / b.len() as f64) - 3.0 * (n + 1.0);
    let mut ties = 0.0;
    let mut seen: Vec<f64> = Vec::new();
    for &v in &all {
        if !seen.contains(&v) {
            seen.push(v);
            let t = all.iter().filter(|&&w| w == v).count() as f64;
            ties += t * t * t - t;
        }
    }
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return (0.0, 1.0);
    }
    let h = h / correction;
    (h, chi_squared_sf(h, 1.0))
}

// ---------------------------------------------------------------------------
// Valence labels as −1/0/+1

pub fn median_rating(r: &[u8]) -> f64 {
    let mut s = r.to_vec();
    s.sort();
    let n = s.len();
    if n % 2 == 1 {
        f64::from(s[n / 2])
    } else {
        (f64::from(s[n / 2 - 1]) + f64::from(s[n / 2])) / 2.0
    }
}

/// Negative: below Q1 or equal to the minimum. Positive: above Q3 or equal
/// to the maximum. All neutral when every concept has the same rating.
pub fn individual_labels(ratings: &BTreeMap<String, Vec<u8>>) -> BTreeMap<String, i8> {
    let eff: BTreeMap<&String, f64> = ratings.iter().map(|(k, v)| (k, median_rating(v))).collect();
    let values: Vec<f64> = eff.values().copied().collect();
    let (q1, q3) = (type7(&values, 0.25), type7(&values, 0.75));
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    eff.into_iter()
        .map(|(k, r)| {
            let neg = r < q1 || r == min;
            let pos = r > q3 || r == max;
            let label = if min == max {
                0
            } else {
                assert!(!(neg && pos), "a rating cannot be both extremes");
                if neg {
                    -1
                } else if pos {
                    1
                } else {
                    0
                }
            };
            (k.clone(), label)
        })
        .collect()
}

/// Each concept against all other ratings pooled: significant at `alpha`
/// with a higher (lower) mean is +1 (−1); fewer than 3 ratings is 0.
pub fn group_labels(ratings: &BTreeMap<String, Vec<u8>>, alpha: f64) -> BTreeMap<String, i8> {
    ratings
        .iter()
        .map(|(concept, own)| {
            let rest: Vec<f64> = ratings
                .iter()
                .filter(|(k, _)| *k != concept)
                .flat_map(|(_, v)| v.iter().map(|&x| f64::from(x)))
                .collect();
            let label = if own.len() < 3 || rest.is_empty() {
                0
            } else {
                let a: Vec<f64> = own.iter().map(|&x| f64::from(x)).collect();
                let (_, p) = kruskal_wallis(&a, &rest);
                // compare means without division
                let lhs = a.iter().sum::<f64>() * rest.len() as f64;
                let rhs = rest.iter().sum::<f64>() * a.len() as f64;
                if p < alpha && lhs > rhs {
                    1
                } else if p < alpha && lhs < rhs {
                    -1
                } else {
                    0
                }
            };
            (concept.clone(), label)
        })
        .collect()
}

/// Strictly below / strictly above / equal to the median of the totals.
pub fn median_split(totals: &[(String, f64)]) -> (Vec<String>, Vec<String>, Vec<String>) {
    let mut v: Vec<f64> = totals.iter().map(|t| t.1).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let m = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
    let pick = |f: &dyn Fn(f64) -> bool| totals.iter().filter(|t| f(t.1)).map(|t| t.0.clone()).collect();
    (pick(&|x| x < m), pick(&|x| x > m), pick(&|x| x == m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let (h, p) = kruskal_wallis(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        assert!((h - 27.0 / 7.0).abs() < 1e-12);
        assert!((p - 0.049534613435626915).abs() < 1e-12);
        let (r, _) = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]);
        assert!((r - 0.8).abs() < 1e-12);
        assert_eq!(type7(&[1.0, 2.0, 3.0, 4.0], 0.25), 1.75);
        assert_eq!(edge_class(1, -1), "contrastive");
        let d = floyd_warshall(&[vec![false, true, false], vec![true, false, false], vec![false; 3]]);
        assert_eq!(d[0][1], 1);
        assert_eq!(d[0][2], UNREACHABLE);
    }
}
