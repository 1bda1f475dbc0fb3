//! Median-split cohorts, group networks and semantic frames.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Bfmn, ClosenessVariant, NetworkBuilder};
use crate::psychometrics::{score_mas, ItemMap};
use crate::record::ParticipantRecord;
use crate::valence::{group_labels, median, Valence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSplit {
    pub low: Vec<String>,
    pub high: Vec<String>,
    pub excluded: Vec<String>,
    pub median_total_ma: f64,
}

impl CohortSplit {
    /// Records of the low and high cohorts, in input order.
    pub fn partition<'a>(
        &self,
        records: &'a [ParticipantRecord],
    ) -> (Vec<&'a ParticipantRecord>, Vec<&'a ParticipantRecord>) {
        let low: BTreeSet<&str> = self.low.iter().map(String::as_str).collect();
        let high: BTreeSet<&str> = self.high.iter().map(String::as_str).collect();
        (
            records
                .iter()
                .filter(|r| low.contains(r.participant_id.as_str()))
                .collect(),
            records
                .iter()
                .filter(|r| high.contains(r.participant_id.as_str()))
                .collect(),
        )
    }
}

/// Splits participants around the median Total MA; ties with the median are excluded.
pub fn split_by_median(records: &[ParticipantRecord], item_map: &ItemMap) -> Result<CohortSplit> {
    if records.is_empty() {
        return Err(Error::invalid("median split of an empty dataset"));
    }
    let totals = records
        .iter()
        .map(|r| {
            score_mas(&r.mas_answers, item_map)
                .map(|s| f64::from(s.total))
                .map_err(|e| Error::validation(&r.participant_id, "mas_answers", e.to_string()))
        })
        .collect::<Result<Vec<f64>>>()?;
    split_totals(records.iter().map(|r| r.participant_id.as_str()).zip(totals))
}

/// Median split over precomputed (id, total) pairs.
pub fn split_totals<'a>(totals: impl IntoIterator<Item = (&'a str, f64)>) -> Result<CohortSplit> {
    let totals: Vec<(&str, f64)> = totals.into_iter().collect();
    let values: Vec<f64> = totals.iter().map(|t| t.1).collect();
    let m = median(&values)?;
    let mut split = CohortSplit {
        low: Vec::new(),
        high: Vec::new(),
        excluded: Vec::new(),
        median_total_ma: m,
    };
    for (id, total) in totals {
        let bucket = if total < m {
            &mut split.low
        } else if total > m {
            &mut split.high
        } else {
            &mut split.excluded
        };
        bucket.push(id.to_string());
    }
    Ok(split)
}

/// Weighted union of individual networks plus every participant's ratings per concept.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupNetwork {
    pub network: Bfmn,
    pub ratings: BTreeMap<String, Vec<u8>>,
}

/// Edge weight = number of participants who produced the association.
pub fn build_group_network<'a>(
    records: impl IntoIterator<Item = &'a ParticipantRecord>,
) -> Result<GroupNetwork> {
    let mut builder = NetworkBuilder::new();
    let mut ratings: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut count = 0usize;
    for record in records {
        count += 1;
        let individual = Bfmn::from_record(record);
        for node in individual.nodes() {
            builder.add_node(node);
        }
        for (a, b, _) in individual.edges() {
            builder.add_edge(a, b, 1);
        }
        for (concept, r) in &record.valence_ratings {
            ratings.entry(concept.clone()).or_default().extend(r);
        }
    }
    if count == 0 {
        return Err(Error::invalid("group network of an empty cohort"));
    }
    Ok(GroupNetwork {
        network: builder.build(),
        ratings,
    })
}

impl GroupNetwork {
    /// Attaches group valence labels computed at significance level `alpha`.
    pub fn label(&mut self, alpha: f64) -> Result<()> {
        let labels = group_labels(&self.ratings, alpha)?;
        self.network.set_labels(&labels);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Positive,
    Negative,
    Neutral,
    Contrastive,
}

impl EdgeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::Positive => "positive",
            EdgeClass::Negative => "negative",
            EdgeClass::Neutral => "neutral",
            EdgeClass::Contrastive => "contrastive",
        }
    }
}

/// Positive and negative labels take precedence over neutral; contrastive needs (+, −).
pub fn classify_edge(a: Valence, b: Valence) -> EdgeClass {
    use Valence::*;
    match (a, b) {
        (Positive, Negative) | (Negative, Positive) => EdgeClass::Contrastive,
        (Positive, _) | (_, Positive) => EdgeClass::Positive,
        (Negative, _) | (_, Negative) => EdgeClass::Negative,
        (Neutral, Neutral) => EdgeClass::Neutral,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
    pub contrastive: usize,
}

impl ClassCounts {
    pub fn add(&mut self, class: EdgeClass) {
        match class {
            EdgeClass::Positive => self.positive += 1,
            EdgeClass::Negative => self.negative += 1,
            EdgeClass::Neutral => self.neutral += 1,
            EdgeClass::Contrastive => self.contrastive += 1,
        }
    }

    /// Most frequent of positive, negative and contrastive; neutral on ties or when all are zero.
    pub fn mode(&self) -> EdgeClass {
        let mut ranked = [
            (self.positive, EdgeClass::Positive),
            (self.negative, EdgeClass::Negative),
            (self.contrastive, EdgeClass::Contrastive),
        ];
        ranked.sort_by_key(|r| std::cmp::Reverse(r.0));
        if ranked[0].0 == 0 || ranked[0].0 == ranked[1].0 {
            EdgeClass::Neutral
        } else {
            ranked[0].1
        }
    }
}

pub const MIN_FONT_SCALE: f64 = 1.0;
pub const MAX_FONT_SCALE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameNode {
    pub concept: String,
    pub valence: Valence,
    /// Closeness within the frame subgraph.
    pub closeness: f64,
    pub font_scale: f64,
    /// Position on the layout circle in degrees, 0 at the top, clockwise.
    /// The target sits at the centre and has no angle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEdge {
    pub source: String,
    pub target: String,
    pub weight: u32,
    pub class: EdgeClass,
}

/// Neighbourhood of a target concept in a labelled group network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticFrame {
    pub target: FrameNode,
    /// Neighbours in circular layout order.
    pub neighbours: Vec<FrameNode>,
    /// Every edge of the induced subgraph, target edges included.
    pub edges: Vec<FrameEdge>,
    pub frame_degree: usize,
    pub frame_clustering: f64,
    pub class_counts: ClassCounts,
    pub valence_mode: EdgeClass,
}

impl SemanticFrame {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn node(&self, concept: &str) -> Option<&FrameNode> {
        std::iter::once(&self.target)
            .chain(&self.neighbours)
            .find(|n| n.concept == concept)
    }
}

pub fn semantic_frame(group: &Bfmn, target: &str) -> Result<SemanticFrame> {
    let neighbours = group.neighbours(target)?;
    let frame_clustering = group.local_clustering(target)?;
    let sub = group.induced_subgraph(std::iter::once(target).chain(neighbours.iter().copied()))?;

    let mut edges = Vec::new();
    let mut class_counts = ClassCounts::default();
    for (a, b, weight) in sub.edges() {
        let class = classify_edge(sub.label(a), sub.label(b));
        class_counts.add(class);
        edges.push(FrameEdge {
            source: a.to_string(),
            target: b.to_string(),
            weight,
            class,
        });
    }

    let closeness: BTreeMap<&str, f64> = sub
        .nodes()
        .iter()
        .map(|n| {
            let c = sub
                .closeness(n, ClosenessVariant::GraphSize)
                .expect("node of its own subgraph");
            (n.as_str(), c)
        })
        .collect();
    let (lo, hi) = closeness
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    let font_scale = |c: f64| {
        if hi > lo {
            MIN_FONT_SCALE + (MAX_FONT_SCALE - MIN_FONT_SCALE) * (c - lo) / (hi - lo)
        } else {
            MIN_FONT_SCALE
        }
    };

    let order = circular_order(&sub, &neighbours);
    let k = order.len();
    let frame_node = |concept: &str, angle: Option<f64>| FrameNode {
        concept: concept.to_string(),
        valence: sub.label(concept),
        closeness: closeness[concept],
        font_scale: font_scale(closeness[concept]),
        angle,
    };
    Ok(SemanticFrame {
        target: frame_node(target, None),
        neighbours: order
            .iter()
            .enumerate()
            .map(|(i, n)| frame_node(n, Some(360.0 * i as f64 / k as f64)))
            .collect(),
        edges,
        frame_degree: neighbours.len(),
        frame_clustering,
        class_counts,
        valence_mode: class_counts.mode(),
    })
}

/// Orders neighbours so that linked neighbours sit close together: each
/// connected component (largest first) is sorted by its Fiedler vector.
fn circular_order<'a>(sub: &Bfmn, neighbours: &[&'a str]) -> Vec<&'a str> {
    let mut seen = BTreeSet::new();
    let mut components: Vec<Vec<&str>> = Vec::new();
    for &start in neighbours {
        if !seen.insert(start) {
            continue;
        }
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in neighbours {
                if !seen.contains(v) && sub.has_edge(u, v) {
                    seen.insert(v);
                    component.push(v);
                    stack.push(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(b[0])));
    components
        .into_iter()
        .flat_map(|c| fiedler_order(sub, c))
        .collect()
}

fn fiedler_order<'a>(sub: &Bfmn, nodes: Vec<&'a str>) -> Vec<&'a str> {
    let n = nodes.len();
    if n <= 2 {
        return nodes;
    }
    let mut laplacian = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if sub.has_edge(nodes[i], nodes[j]) {
                laplacian[(i, j)] = -1.0;
                laplacian[(j, i)] = -1.0;
                laplacian[(i, i)] += 1.0;
                laplacian[(j, j)] += 1.0;
            }
        }
    }
    let eigen = SymmetricEigen::new(laplacian);
    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let fiedler = eigen.eigenvectors.column(by_value[1]);
    // Fix the sign so the largest-magnitude entry is positive.
    let pivot = (0..n)
        .max_by(|&a, &b| fiedler[a].abs().total_cmp(&fiedler[b].abs()).then(b.cmp(&a)))
        .expect("non-empty component");
    let sign = if fiedler[pivot] < 0.0 { -1.0 } else { 1.0 };
    let key = |i: usize| (sign * fiedler[i] * 1e9).round() as i64;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| key(a).cmp(&key(b)).then_with(|| nodes[a].cmp(nodes[b])));
    idx.into_iter().map(|i| nodes[i]).collect()
}
