//! Behavioural forma mentis networks and their node metrics.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::ParticipantRecord;
use crate::valence::Valence;

/// Undirected concept graph with integer edge weights and valence labels.
///
/// Nodes are stored in lexicographic order so two networks built from the
/// same associations compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bfmn {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    weights: BTreeMap<(usize, usize), u32>,
    labels: BTreeMap<String, Valence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosenessVariant {
    /// (N − 1) / Σ d over reachable nodes, N = all nodes in the graph.
    #[default]
    GraphSize,
    /// ((r − 1) / Σ d) · ((r − 1) / (N − 1)), r = reachable nodes including self.
    ComponentNormalized,
}

impl FromStr for ClosenessVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "graph-size" | "graph_size" => Ok(ClosenessVariant::GraphSize),
            "component-normalized" | "component_normalized" => {
                Ok(ClosenessVariant::ComponentNormalized)
            }
            other => Err(format!("unknown closeness variant `{other}`")),
        }
    }
}

impl fmt::Display for ClosenessVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosenessVariant::GraphSize => "graph-size",
            ClosenessVariant::ComponentNormalized => "component-normalized",
        })
    }
}

/// Accumulates nodes and weighted edges before freezing them into a [`Bfmn`].
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), u32>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: &str) -> &mut Self {
        if !self.nodes.contains(node) {
            self.nodes.insert(node.to_string());
        }
        self
    }

    /// Adds `weight` to the edge a–b, creating it if needed. Self-loops are dropped.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: u32) -> &mut Self {
        self.add_node(a);
        self.add_node(b);
        if a != b && weight > 0 {
            *self.edges.entry(ordered(a, b)).or_insert(0) += weight;
        }
        self
    }

    /// Inserts a–b with weight 1 unless already present.
    pub fn add_simple_edge(&mut self, a: &str, b: &str) -> &mut Self {
        self.add_node(a);
        self.add_node(b);
        if a != b {
            self.edges.entry(ordered(a, b)).or_insert(1);
        }
        self
    }

    pub fn build(self) -> Bfmn {
        let nodes: Vec<String> = self.nodes.into_iter().collect();
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut weights = BTreeMap::new();
        for ((a, b), w) in self.edges {
            let (i, j) = (index[&a], index[&b]);
            adjacency[i].push(j);
            adjacency[j].push(i);
            weights.insert((i.min(j), i.max(j)), w);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Bfmn {
            nodes,
            index,
            adjacency,
            weights,
            labels: BTreeMap::new(),
        }
    }
}

impl Bfmn {
    /// Individual network: cues and responses as nodes, one unweighted edge per
    /// distinct cue–response pair, responses never linked to each other.
    pub fn from_record(record: &ParticipantRecord) -> Bfmn {
        let mut builder = NetworkBuilder::new();
        for (cue, responses) in &record.cue_responses {
            builder.add_node(cue);
            for response in responses {
                builder.add_simple_edge(cue, response);
            }
        }
        builder.build()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn contains(&self, node: &str) -> bool {
        self.index.contains_key(node)
    }

    pub fn node_index(&self, node: &str) -> Result<usize> {
        self.index
            .get(node)
            .copied()
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    pub fn neighbour_indices(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn neighbours(&self, node: &str) -> Result<Vec<&str>> {
        let i = self.node_index(node)?;
        Ok(self.adjacency[i]
            .iter()
            .map(|&j| self.nodes[j].as_str())
            .collect())
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.weight(a, b).is_some()
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<u32> {
        let (i, j) = (*self.index.get(a)?, *self.index.get(b)?);
        self.weights.get(&(i.min(j), i.max(j))).copied()
    }

    /// Edges as (a, b, weight) with a < b, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u32)> + '_ {
        self.weights
            .iter()
            .map(|(&(i, j), &w)| (self.nodes[i].as_str(), self.nodes[j].as_str(), w))
    }

    /// Non-neutral labels.
    pub fn labels(&self) -> &BTreeMap<String, Valence> {
        &self.labels
    }

    /// Label of a node; unlabelled nodes are neutral.
    pub fn label(&self, node: &str) -> Valence {
        self.labels.get(node).copied().unwrap_or_default()
    }

    /// Attaches labels for the nodes present in the graph; others are ignored.
    /// Neutral is the default and is not stored.
    pub fn set_labels(&mut self, labels: &BTreeMap<String, Valence>) {
        self.labels = labels
            .iter()
            .filter(|(k, v)| self.index.contains_key(*k) && **v != Valence::Neutral)
            .map(|(k, v)| (k.clone(), *v))
            .collect();
    }

    pub fn degree(&self, node: &str) -> Result<usize> {
        Ok(self.adjacency[self.node_index(node)?].len())
    }

    /// Breadth-first hop counts from `source`; unreachable nodes are absent.
    pub fn shortest_path_lengths(&self, source: &str) -> Result<BTreeMap<String, usize>> {
        let s = self.node_index(source)?;
        Ok(self
            .bfs(s)
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (self.nodes[i].clone(), d)))
            .collect())
    }

    pub(crate) fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have a distance");
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn closeness(&self, node: &str, variant: ClosenessVariant) -> Result<f64> {
        let i = self.node_index(node)?;
        Ok(self.closeness_at(i, variant))
    }

    pub(crate) fn closeness_at(&self, i: usize, variant: ClosenessVariant) -> f64 {
        let dist = self.bfs(i);
        let (sum, reachable) = dist
            .iter()
            .flatten()
            .fold((0usize, 0usize), |(s, r), &d| (s + d, r + 1));
        if sum == 0 {
            return 0.0;
        }
        let n = self.nodes.len() as f64;
        let sum = sum as f64;
        match variant {
            ClosenessVariant::GraphSize => (n - 1.0) / sum,
            ClosenessVariant::ComponentNormalized => {
                let r = reachable as f64 - 1.0;
                (r / sum) * (r / (n - 1.0))
            }
        }
    }

    /// Fraction of neighbour pairs that are themselves linked; 0 below degree 2.
    pub fn local_clustering(&self, node: &str) -> Result<f64> {
        let i = self.node_index(node)?;
        Ok(self.local_clustering_at(i))
    }

    pub(crate) fn local_clustering_at(&self, i: usize) -> f64 {
        let neighbours = &self.adjacency[i];
        let k = neighbours.len();
        if k < 2 {
            return 0.0;
        }
        let mut links = 0usize;
        for (x, &a) in neighbours.iter().enumerate() {
            for &b in &neighbours[x + 1..] {
                if self.adjacency[a].binary_search(&b).is_ok() {
                    links += 1;
                }
            }
        }
        links as f64 / (k * (k - 1) / 2) as f64
    }

    /// Subgraph induced by `keep`, carrying over weights and labels.
    pub fn induced_subgraph<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> Result<Bfmn> {
        let keep: BTreeSet<usize> = keep
            .into_iter()
            .map(|n| self.node_index(n))
            .collect::<Result<_>>()?;
        let mut builder = NetworkBuilder::new();
        for &i in &keep {
            builder.add_node(&self.nodes[i]);
        }
        for (&(i, j), &w) in &self.weights {
            if keep.contains(&i) && keep.contains(&j) {
                builder.add_edge(&self.nodes[i], &self.nodes[j], w);
            }
        }
        let mut sub = builder.build();
        sub.set_labels(&self.labels);
        Ok(sub)
    }

    /// `source,target,weight` edge list.
    pub fn to_edge_list_csv(&self) -> String {
        let mut out = String::from("source,target,weight\n");
        for (a, b, w) in self.edges() {
            out.push_str(&format!("{},{},{}\n", csv_field(a), csv_field(b), w));
        }
        out
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeEntry {
                    id: n.clone(),
                    valence: self.label(n),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(a, b, w)| EdgeEntry {
                    source: a.to_string(),
                    target: b.to_string(),
                    weight: w,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &NetworkDocument) -> Bfmn {
        let mut builder = NetworkBuilder::new();
        for n in &doc.nodes {
            builder.add_node(&n.id);
        }
        for e in &doc.edges {
            builder.add_edge(&e.source, &e.target, e.weight);
        }
        let mut net = builder.build();
        net.set_labels(
            &doc.nodes
                .iter()
                .map(|n| (n.id.clone(), n.valence))
                .collect(),
        );
        net
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Stable JSON form of a network: nodes with −1/0/+1 valence and weighted edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: String,
    pub valence: Valence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub source: String,
    pub target: String,
    pub weight: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str)]) -> Bfmn {
        let mut b = NetworkBuilder::new();
        for (x, y) in edges {
            b.add_simple_edge(x, y);
        }
        b.build()
    }

    fn record(pairs: &[(&str, &[&str])]) -> ParticipantRecord {
        let mut r = ParticipantRecord::new("p");
        for (cue, resp) in pairs {
            r.cue_responses
                .insert(cue.to_string(), resp.iter().map(|s| s.to_string()).collect());
        }
        r
    }

    #[test]
    fn responses_not_linked_to_each_other() {
        let net = Bfmn::from_record(&record(&[("math", &["exam", "boring", "numbers"])]));
        assert_eq!(net.edge_count(), 3);
        assert!(net.has_edge("math", "exam"));
        assert!(!net.has_edge("exam", "boring"));
    }

    #[test]
    fn self_loop_dropped() {
        let net = Bfmn::from_record(&record(&[("anxiety", &["anxiety", "fear"])]));
        assert_eq!(net.edge_count(), 1);
        assert!(net.has_edge("anxiety", "fear"));
        assert_eq!(net.degree("anxiety").unwrap(), 1);
    }

    #[test]
    fn shared_response_merges() {
        let net = Bfmn::from_record(&record(&[("math", &["exam"]), ("test", &["exam"])]));
        assert_eq!(net.degree("exam").unwrap(), 2);
    }

    #[test]
    fn isolated_cue_and_unknown_node() {
        let net = Bfmn::from_record(&record(&[("math", &[]), ("fun", &["game"])]));
        assert_eq!(net.degree("math").unwrap(), 0);
        assert_eq!(net.closeness("math", ClosenessVariant::GraphSize).unwrap(), 0.0);
        assert_eq!(
            net.closeness("math", ClosenessVariant::ComponentNormalized).unwrap(),
            0.0
        );
        assert!(matches!(net.degree("nope"), Err(Error::UnknownNode(_))));
        assert!(net.shortest_path_lengths("nope").is_err());
        assert!(net.local_clustering("nope").is_err());
    }

    #[test]
    fn star_degree() {
        let net = graph(&[("c", "a"), ("c", "b"), ("c", "d"), ("c", "e"), ("c", "f")]);
        assert_eq!(net.degree("c").unwrap(), 5);
        assert_eq!(net.local_clustering("c").unwrap(), 0.0);
    }

    #[test]
    fn weighted_edge_counts_once() {
        let mut b = NetworkBuilder::new();
        b.add_edge("math", "boring", 3);
        let net = b.build();
        assert_eq!(net.degree("math").unwrap(), 1);
        assert_eq!(net.weight("boring", "math"), Some(3));
    }

    #[test]
    fn path_distances_and_closeness() {
        let net = graph(&[("A", "B"), ("B", "C")]);
        let d = net.shortest_path_lengths("A").unwrap();
        assert_eq!(d["A"], 0);
        assert_eq!(d["B"], 1);
        assert_eq!(d["C"], 2);
        assert_eq!(net.closeness("B", ClosenessVariant::GraphSize).unwrap(), 1.0);
        assert!((net.closeness("A", ClosenessVariant::GraphSize).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn components_and_variants() {
        let net = graph(&[("A", "B"), ("C", "D"), ("D", "E")]);
        let d = net.shortest_path_lengths("A").unwrap();
        assert_eq!(d.len(), 2);
        assert!(!d.contains_key("C"));
        // N = 5, reachable r = 2, Σd = 1
        assert_eq!(net.closeness("A", ClosenessVariant::GraphSize).unwrap(), 4.0);
        assert_eq!(
            net.closeness("A", ClosenessVariant::ComponentNormalized).unwrap(),
            0.25
        );
    }

    #[test]
    fn complete_graph_distances() {
        let net = graph(&[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        let d = net.shortest_path_lengths("c").unwrap();
        assert!(d.iter().all(|(k, v)| (k == "c") == (*v == 0) && *v <= 1));
        assert_eq!(net.local_clustering("a").unwrap(), 1.0);
    }

    #[test]
    fn clustering_one_third() {
        let net = graph(&[("A", "B"), ("A", "C"), ("A", "D"), ("B", "C")]);
        assert!((net.local_clustering("A").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(graph(&[("a", "b"), ("b", "c"), ("c", "a")]).local_clustering("b").unwrap(), 1.0);
    }

    #[test]
    fn export_formats() {
        let mut b = NetworkBuilder::new();
        b.add_edge("math", "boring", 3).add_edge("math", "exam, final", 1);
        let mut net = b.build();
        net.set_labels(&BTreeMap::from([("boring".to_string(), Valence::Negative)]));
        assert_eq!(
            net.to_edge_list_csv(),
            "source,target,weight\nboring,math,3\n\"exam, final\",math,1\n"
        );
        let doc = net.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains(r#"{"id":"boring","valence":-1}"#));
        assert_eq!(Bfmn::from_document(&doc), net);
    }
}
