//! MAS questionnaire scoring and descriptive statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::MAS_ITEM_COUNT;
use crate::valence::quartiles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Evaluation,
    EverydaySocial,
    PassiveObservation,
}

impl Factor {
    pub const ALL: [Factor; 3] = [
        Factor::Evaluation,
        Factor::EverydaySocial,
        Factor::PassiveObservation,
    ];

    /// Items per factor on the standard 23-item scale.
    pub fn standard_item_count(self) -> usize {
        match self {
            Factor::Evaluation => 9,
            Factor::EverydaySocial => 8,
            Factor::PassiveObservation => 6,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::Evaluation => "Evaluation MA",
            Factor::EverydaySocial => "Everyday/Social MA",
            Factor::PassiveObservation => "Passive Observation MA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasItem {
    /// 1-based position in the answer vector.
    pub index: usize,
    pub english: String,
    pub italian: String,
    pub factor: Factor,
}

/// Assignment of questionnaire items to factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemMap {
    items: Vec<MasItem>,
}

#[derive(Deserialize)]
struct ItemFile {
    items: Vec<MasItem>,
}

impl ItemMap {
    /// Builds a map, requiring indices 1..=23 exactly once and 9/8/6 items per factor.
    pub fn new(mut items: Vec<MasItem>) -> Result<ItemMap> {
        items.sort_by_key(|i| i.index);
        if items.len() != MAS_ITEM_COUNT
            || items.iter().enumerate().any(|(k, item)| item.index != k + 1)
        {
            return Err(Error::invalid(format!(
                "item map must list indices 1..={MAS_ITEM_COUNT} exactly once"
            )));
        }
        for factor in Factor::ALL {
            let n = items.iter().filter(|i| i.factor == factor).count();
            if n != factor.standard_item_count() {
                return Err(Error::invalid(format!(
                    "{factor} has {n} items, expected {}",
                    factor.standard_item_count()
                )));
            }
        }
        Ok(ItemMap { items })
    }

    pub fn from_json(text: &str) -> Result<ItemMap> {
        let file: ItemFile = serde_json::from_str(text)?;
        ItemMap::new(file.items)
    }

    pub fn items(&self) -> &[MasItem] {
        &self.items
    }

    pub fn factor_of(&self, index: usize) -> Option<Factor> {
        self.items.get(index.checked_sub(1)?).map(|i| i.factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasScores {
    pub evaluation: u32,
    pub everyday_social: u32,
    pub passive_observation: u32,
    pub total: u32,
}

impl MasScores {
    pub fn factor(&self, factor: Factor) -> u32 {
        match factor {
            Factor::Evaluation => self.evaluation,
            Factor::EverydaySocial => self.everyday_social,
            Factor::PassiveObservation => self.passive_observation,
        }
    }
}

pub fn score_mas(answers: &[u8], item_map: &ItemMap) -> Result<MasScores> {
    if answers.len() != MAS_ITEM_COUNT {
        return Err(Error::invalid(format!(
            "expected {MAS_ITEM_COUNT} answers, got {}",
            answers.len()
        )));
    }
    let mut scores = MasScores {
        evaluation: 0,
        everyday_social: 0,
        passive_observation: 0,
        total: 0,
    };
    for (item, &answer) in item_map.items.iter().zip(answers) {
        if !(1..=5).contains(&answer) {
            return Err(Error::invalid(format!(
                "answer {answer} to item {} outside [1, 5]",
                item.index
            )));
        }
        let a = u32::from(answer);
        match item.factor {
            Factor::Evaluation => scores.evaluation += a,
            Factor::EverydaySocial => scores.everyday_social += a,
            Factor::PassiveObservation => scores.passive_observation += a,
        }
        scores.total += a;
    }
    Ok(scores)
}

/// Summary columns of the descriptive tables: N, M, SD, Q1, Q3, SKP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub q1: f64,
    pub q3: f64,
    pub skewness: f64,
}

/// Sample mean, sample SD (n − 1), interpolated quartiles and adjusted
/// Fisher–Pearson skewness G1 = g1·√(n(n−1))/(n−2).
///
/// Skewness is 0 for constant data and for n = 2, where g1 is identically 0.
pub fn describe(values: &[f64]) -> Result<DescriptiveStats> {
    let n = values.len();
    if n < 2 {
        return Err(Error::invalid(format!("describe needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let constant = values.iter().all(|v| *v == values[0]);
    let sd = if constant {
        0.0
    } else {
        (m2 * nf / (nf - 1.0)).sqrt()
    };
    let (q1, q3) = quartiles(values)?;
    let skewness = if n < 3 || constant || m2 == 0.0 {
        0.0
    } else {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    };
    Ok(DescriptiveStats {
        n,
        mean,
        sd,
        q1,
        q3,
        skewness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::mas_item_map;

    #[test]
    fn extremes() {
        let map = mas_item_map();
        let s = score_mas(&[1; 23], &map).unwrap();
        assert_eq!(
            (s.evaluation, s.everyday_social, s.passive_observation, s.total),
            (9, 8, 6, 23)
        );
        let s = score_mas(&[5; 23], &map).unwrap();
        assert_eq!(
            (s.evaluation, s.everyday_social, s.passive_observation, s.total),
            (45, 40, 30, 115)
        );
    }

    #[test]
    fn factor_isolation() {
        let map = mas_item_map();
        let answers: Vec<u8> = map
            .items()
            .iter()
            .map(|i| if i.factor == Factor::Evaluation { 5 } else { 1 })
            .collect();
        let s = score_mas(&answers, &map).unwrap();
        assert_eq!(
            (s.evaluation, s.everyday_social, s.passive_observation, s.total),
            (45, 8, 6, 59)
        );
    }

    #[test]
    fn invalid_answers() {
        let map = mas_item_map();
        assert!(score_mas(&[3; 22], &map).is_err());
        let mut bad = [3u8; 23];
        bad[4] = 6;
        assert!(score_mas(&bad, &map).is_err());
    }

    #[test]
    fn item_map_rejects_wrong_counts() {
        let mut items = mas_item_map().items().to_vec();
        items[0].factor = Factor::PassiveObservation;
        assert!(ItemMap::new(items).is_err());
    }

    #[test]
    fn describe_symmetric() {
        let d = describe(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(d.mean, 3.0);
        assert!((d.sd - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.skewness, 0.0);
        assert_eq!((d.q1, d.q3), (2.0, 4.0));
    }

    #[test]
    fn describe_constant_and_small() {
        let d = describe(&[4.0; 6]).unwrap();
        assert_eq!((d.sd, d.skewness), (0.0, 0.0));
        assert_eq!(describe(&[1.0, 9.0]).unwrap().skewness, 0.0);
        assert!(describe(&[1.0]).is_err());
    }
}
