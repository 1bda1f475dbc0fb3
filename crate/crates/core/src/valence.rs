//! Valence labels from 1–5 ratings.
//!
//! Individuals: each concept gets its median rating; concepts below the
//! participant's first quartile or at their minimum are negative, concepts
//! above the third quartile or at their maximum are positive.
//!
//! Groups: each concept's pooled ratings are compared with the ratings of all
//! other concepts through a two-sample Kruskal–Wallis test.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::record::ParticipantRecord;
use crate::stats::special::chi_squared_sf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Valence {
    Negative,
    #[default]
    Neutral,
    Positive,
}

impl Valence {
    pub fn as_i8(self) -> i8 {
        match self {
            Valence::Negative => -1,
            Valence::Neutral => 0,
            Valence::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Valence> {
        match v {
            -1 => Some(Valence::Negative),
            0 => Some(Valence::Neutral),
            1 => Some(Valence::Positive),
            _ => None,
        }
    }

    /// Swaps positive and negative.
    pub fn flipped(self) -> Valence {
        match self {
            Valence::Negative => Valence::Positive,
            Valence::Neutral => Valence::Neutral,
            Valence::Positive => Valence::Negative,
        }
    }
}

impl fmt::Display for Valence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Valence::Negative => "negative",
            Valence::Neutral => "neutral",
            Valence::Positive => "positive",
        })
    }
}

impl Serialize for Valence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Valence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Valence::from_i8(v).ok_or_else(|| serde::de::Error::custom(format!("bad valence {v}")))
    }
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("median of an empty list"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}

pub fn median_rating(ratings: &[u8]) -> Result<f64> {
    let values: Vec<f64> = ratings.iter().map(|&r| f64::from(r)).collect();
    median(&values)
}

/// Linear-interpolation quantile (h = (n−1)p) of already sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// First and third quartiles with the linear-interpolation estimator.
pub fn quartiles(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::invalid("quartiles of an empty list"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok((quantile_sorted(&sorted, 0.25), quantile_sorted(&sorted, 0.75)))
}

/// Labels concepts from one participant's effective (median) ratings.
pub fn label_effective_ratings(effective: &BTreeMap<String, f64>) -> Result<BTreeMap<String, Valence>> {
    let values: Vec<f64> = effective.values().copied().collect();
    let (q1, q3) = quartiles(&values)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(effective
        .iter()
        .map(|(concept, &rating)| {
            let label = if min == max {
                Valence::Neutral
            } else if rating < q1 || rating == min {
                Valence::Negative
            } else if rating > q3 || rating == max {
                Valence::Positive
            } else {
                Valence::Neutral
            };
            (concept.clone(), label)
        })
        .collect())
}

/// Median rating per rated concept of one participant.
pub fn effective_ratings(record: &ParticipantRecord) -> Result<BTreeMap<String, f64>> {
    record
        .valence_ratings
        .iter()
        .map(|(concept, ratings)| Ok((concept.clone(), median_rating(ratings)?)))
        .collect()
}

pub fn individual_labels(record: &ParticipantRecord) -> Result<BTreeMap<String, Valence>> {
    if record.valence_ratings.is_empty() {
        return Err(Error::invalid(format!(
            "participant `{}` has no rated concepts",
            record.participant_id
        )));
    }
    label_effective_ratings(&effective_ratings(record)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KruskalWallis {
    pub h: f64,
    pub p: f64,
}

impl KruskalWallis {
    const UNDEFINED: KruskalWallis = KruskalWallis { h: 0.0, p: 1.0 };
}

fn check_two_sample(na: usize, nb: usize) -> Result<()> {
    if na == 0 || nb == 0 || na + nb < 3 {
        return Err(Error::invalid(format!(
            "Kruskal–Wallis needs two non-empty samples with at least 3 values in total (got {na} and {nb})"
        )));
    }
    Ok(())
}

fn h_statistic(rank_sums: [f64; 2], sizes: [usize; 2], tie_term: f64) -> KruskalWallis {
    let n = (sizes[0] + sizes[1]) as f64;
    let correction = 1.0 - tie_term / (n * n * n - n);
    if correction <= 0.0 {
        return KruskalWallis::UNDEFINED;
    }
    let raw = 12.0 / (n * (n + 1.0))
        * (rank_sums[0] * rank_sums[0] / sizes[0] as f64
            + rank_sums[1] * rank_sums[1] / sizes[1] as f64)
        - 3.0 * (n + 1.0);
    let h = (raw / correction).max(0.0);
    KruskalWallis {
        h,
        p: chi_squared_sf(h, 1.0),
    }
}

/// Two-sample Kruskal–Wallis H with tie correction; p from χ² with 1 df.
pub fn kruskal_wallis_two(a: &[f64], b: &[f64]) -> Result<KruskalWallis> {
    check_two_sample(a.len(), b.len())?;
    let mut pooled: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0))
        .chain(b.iter().map(|&v| (v, 1)))
        .collect();
    if pooled.iter().any(|(v, _)| v.is_nan()) {
        return Err(Error::invalid("NaN in Kruskal–Wallis sample"));
    }
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut rank_sums = [0.0; 2];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        for item in &pooled[i..=j] {
            rank_sums[item.1] += midrank;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    Ok(h_statistic(rank_sums, [a.len(), b.len()], tie_term))
}

/// Frequency of each rating 1..=5.
pub type RatingCounts = [u64; 5];

pub fn rating_counts(ratings: &[u8]) -> RatingCounts {
    let mut counts = [0; 5];
    for &r in ratings {
        counts[usize::from(r.clamp(1, 5)) - 1] += 1;
    }
    counts
}

/// Kruskal–Wallis on 1–5 ratings given as frequency tables; O(5) per call.
pub fn kruskal_wallis_counts(a: &RatingCounts, b: &RatingCounts) -> Result<KruskalWallis> {
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    check_two_sample(na as usize, nb as usize)?;
    let mut rank_sums = [0.0; 2];
    let mut tie_term = 0.0;
    let mut below = 0u64;
    for level in 0..5 {
        let t = a[level] + b[level];
        if t == 0 {
            continue;
        }
        let midrank = below as f64 + (t as f64 + 1.0) / 2.0;
        rank_sums[0] += a[level] as f64 * midrank;
        rank_sums[1] += b[level] as f64 * midrank;
        let t = t as f64;
        tie_term += t * t * t - t;
        below += a[level] + b[level];
    }
    Ok(h_statistic(rank_sums, [na as usize, nb as usize], tie_term))
}

/// Minimum number of ratings a concept needs before it can be tested.
pub const MIN_GROUP_RATINGS: usize = 3;

/// Default significance level for group labels.
pub const DEFAULT_GROUP_ALPHA: f64 = 0.1;

/// Labels each concept by testing its ratings against all other concepts' ratings.
pub fn group_labels(
    group_ratings: &BTreeMap<String, Vec<u8>>,
    alpha: f64,
) -> Result<BTreeMap<String, Valence>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha {alpha} outside [0, 1]")));
    }
    let counts: BTreeMap<&str, RatingCounts> = group_ratings
        .iter()
        .map(|(c, r)| (c.as_str(), rating_counts(r)))
        .collect();
    let mut total = [0u64; 5];
    for c in counts.values() {
        for level in 0..5 {
            total[level] += c[level];
        }
    }

    let mut labels = BTreeMap::new();
    for (concept, own) in &counts {
        let n_own: u64 = own.iter().sum();
        let mut rest = total;
        for level in 0..5 {
            rest[level] -= own[level];
        }
        let n_rest: u64 = rest.iter().sum();
        let label = if (n_own as usize) < MIN_GROUP_RATINGS || n_rest == 0 {
            Valence::Neutral
        } else {
            let test = kruskal_wallis_counts(own, &rest)?;
            // exact mean comparison: sum_own / n_own vs sum_rest / n_rest
            let weighted = |c: &RatingCounts| -> u64 {
                c.iter().enumerate().map(|(i, k)| (i as u64 + 1) * k).sum()
            };
            let lhs = u128::from(weighted(own)) * u128::from(n_rest);
            let rhs = u128::from(weighted(&rest)) * u128::from(n_own);
            if test.p < alpha && lhs > rhs {
                Valence::Positive
            } else if test.p < alpha && lhs < rhs {
                Valence::Negative
            } else {
                Valence::Neutral
            }
        };
        labels.insert(concept.to_string(), label);
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median_rating(&[3]).unwrap(), 3.0);
        assert_eq!(median_rating(&[2, 4]).unwrap(), 3.0);
        assert_eq!(median_rating(&[1, 5, 5]).unwrap(), 5.0);
        assert!(median_rating(&[]).is_err());
    }

    #[test]
    fn quartile_examples() {
        assert_eq!(quartiles(&[1.0, 2.0, 3.0, 4.0]).unwrap(), (1.75, 3.25));
        assert_eq!(quartiles(&[5.0; 4]).unwrap(), (5.0, 5.0));
        assert_eq!(quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), (2.0, 4.0));
        assert!(quartiles(&[]).is_err());
    }

    fn effective(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(c, r)| (c.to_string(), *r)).collect()
    }

    #[test]
    fn extremes_always_labelled() {
        let labels = label_effective_ratings(&effective(&[
            ("a", 1.0),
            ("b", 2.0),
            ("c", 3.0),
            ("d", 3.0),
            ("e", 4.0),
            ("f", 5.0),
        ]))
        .unwrap();
        assert_eq!(labels["a"], Valence::Negative);
        assert_eq!(labels["f"], Valence::Positive);
        assert_eq!(labels["c"], Valence::Neutral);
    }

    #[test]
    fn all_identical_is_neutral() {
        let labels =
            label_effective_ratings(&effective(&[("a", 3.0), ("b", 3.0), ("c", 3.0)])).unwrap();
        assert!(labels.values().all(|l| *l == Valence::Neutral));
    }

    #[test]
    fn repeated_concept_uses_median() {
        let mut r = ParticipantRecord::new("p");
        r.valence_ratings.insert("exam".into(), vec![1, 5, 5]);
        r.valence_ratings.insert("fun".into(), vec![3]);
        r.valence_ratings.insert("work".into(), vec![1]);
        let labels = individual_labels(&r).unwrap();
        assert_eq!(labels["exam"], Valence::Positive);
        assert_eq!(labels["work"], Valence::Negative);
    }

    #[test]
    fn kw_hand_example() {
        let kw = kruskal_wallis_two(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        // R_a = 6, R_b = 15: 12/42 * (12 + 75) - 21 = 27/7
        assert!((kw.h - 27.0 / 7.0).abs() < 1e-12);
        assert!((kw.p - 0.049_534_613_435_626_11).abs() < 1e-9);
    }

    #[test]
    fn kw_all_ties_undefined() {
        let kw = kruskal_wallis_two(&[3.0, 3.0], &[3.0, 3.0]).unwrap();
        assert_eq!((kw.h, kw.p), (0.0, 1.0));
    }

    #[test]
    fn kw_precondition() {
        assert!(kruskal_wallis_two(&[1.0], &[2.0]).is_err());
        assert!(kruskal_wallis_two(&[], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn counts_path_matches_generic() {
        let a = [1u8, 2, 2, 5, 5, 4];
        let b = [3u8, 3, 1, 2, 4, 4, 4, 5, 1];
        let to_f = |v: &[u8]| v.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
        let generic = kruskal_wallis_two(&to_f(&a), &to_f(&b)).unwrap();
        let fast = kruskal_wallis_counts(&rating_counts(&a), &rating_counts(&b)).unwrap();
        assert!((generic.h - fast.h).abs() < 1e-12);
        assert!((generic.p - fast.p).abs() < 1e-12);
    }

    fn group(pairs: &[(&str, &[u8])]) -> BTreeMap<String, Vec<u8>> {
        pairs.iter().map(|(c, r)| (c.to_string(), r.to_vec())).collect()
    }

    #[test]
    fn strongly_rated_concept_is_positive() {
        let g = group(&[
            ("science", &[5, 5, 5, 5]),
            ("a", &[3, 3, 2, 4, 3]),
            ("b", &[3, 2, 4, 3, 3]),
            ("c", &[3, 4, 3, 2, 3]),
        ]);
        let labels = group_labels(&g, 0.1).unwrap();
        assert_eq!(labels["science"], Valence::Positive);
    }

    #[test]
    fn fewer_than_three_ratings_is_neutral() {
        let g = group(&[("x", &[5, 5]), ("a", &[1, 1, 1, 1, 1, 1])]);
        assert_eq!(group_labels(&g, 0.1).unwrap()["x"], Valence::Neutral);
    }

    #[test]
    fn zero_alpha_is_all_neutral() {
        let g = group(&[("science", &[5, 5, 5, 5, 5]), ("a", &[1, 1, 1, 1, 1])]);
        let labels = group_labels(&g, 0.0).unwrap();
        assert!(labels.values().all(|l| *l == Valence::Neutral));
    }

    #[test]
    fn valence_json_is_integer() {
        assert_eq!(serde_json::to_string(&Valence::Negative).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Valence>("1").unwrap(), Valence::Positive);
        assert!(serde_json::from_str::<Valence>("2").is_err());
    }
}
