//! Median split, group networks and frames against brute-force constructions.

use std::collections::{BTreeMap, BTreeSet};

use formanet_core::frames::{
    build_group_network, semantic_frame, split_totals, SemanticFrame,
};
use formanet_core::network::{Bfmn, NetworkBuilder};
use formanet_core::record::ParticipantRecord;
use formanet_core::render::frame_svg;
use formanet_core::valence::Valence;
use formanet_oracles as oracle;
use proptest::prelude::*;

fn cohort() -> impl Strategy<Value = Vec<ParticipantRecord>> {
    prop::collection::vec(
        prop::collection::btree_map("[a-d]", prop::collection::vec("[a-h]", 0..=3), 1..=4),
        1..=20,
    )
    .prop_map(|people| {
        people
            .into_iter()
            .enumerate()
            .map(|(i, cues)| {
                let mut r = ParticipantRecord::new(format!("p{i}"));
                for (cue, resp) in cues {
                    r.valence_ratings.insert(cue.clone(), vec![(i % 5 + 1) as u8]);
                    r.cue_responses.insert(cue, resp);
                }
                r
            })
            .collect()
    })
}

fn valence() -> impl Strategy<Value = Valence> {
    prop_oneof![Just(Valence::Negative), Just(Valence::Neutral), Just(Valence::Positive)]
}

fn labelled_graph() -> impl Strategy<Value = Bfmn> {
    (2usize..14)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, 1u32..4), 0..40),
                prop::collection::vec(valence(), n),
            )
        })
        .prop_map(|(n, edges, labels)| {
            let mut b = NetworkBuilder::new();
            for i in 0..n {
                b.add_node(&format!("w{i:02}"));
            }
            for (a, c, w) in edges {
                b.add_edge(&format!("w{a:02}"), &format!("w{c:02}"), w);
            }
            let mut net = b.build();
            let map: BTreeMap<String, Valence> =
                labels.into_iter().enumerate().map(|(i, v)| (format!("w{i:02}"), v)).collect();
            net.set_labels(&map);
            net
        })
}

fn class_oracle(a: Valence, b: Valence) -> &'static str {
    oracle::edge_class(a.as_i8(), b.as_i8())
}

fn attr<'a>(tag: &'a str, name: &str) -> &'a str {
    let key = format!(" {name}=\"");
    let start = tag.find(&key).unwrap_or_else(|| panic!("{name} missing in {tag}")) + key.len();
    &tag[start..start + tag[start..].find('"').unwrap()]
}

/// Counts path elements whose stroke disagrees with the endpoint labels.
fn audit(svg: &str, frame: &SemanticFrame) -> usize {
    let label = |n: &str| frame.node(n).unwrap().valence;
    svg.lines()
        .filter(|l| l.starts_with("<path"))
        .filter(|tag| {
            let unescape = |s: &str| s.replace("&amp;", "&").replace("&quot;", "\"");
            let (a, b) = (unescape(attr(tag, "data-source")), unescape(attr(tag, "data-target")));
            let expected = class_oracle(label(&a), label(&b));
            attr(tag, "data-class") != expected || attr(tag, "stroke") != oracle::edge_colour(expected)
        })
        .count()
}

proptest! {
    #[test]
    fn median_split_partitions(totals in prop::collection::vec(23u32..=115, 2..80)) {
        let ids: Vec<String> = (0..totals.len()).map(|i| format!("p{i}")).collect();
        let split = split_totals(ids.iter().map(String::as_str).zip(totals.iter().map(|&t| f64::from(t)))).unwrap();
        let pairs: Vec<(String, f64)> = ids.iter().cloned().zip(totals.iter().map(|&t| f64::from(t))).collect();
        let (low, high, excluded) = oracle::median_split(&pairs);
        prop_assert_eq!(&split.low, &low);
        prop_assert_eq!(&split.high, &high);
        prop_assert_eq!(&split.excluded, &excluded);
        prop_assert_eq!(split.low.len() + split.high.len() + split.excluded.len(), totals.len());
    }

    #[test]
    fn group_weights_match_counts(records in cohort()) {
        let group = build_group_network(&records).unwrap();
        let people: Vec<Vec<(String, Vec<String>)>> = records
            .iter()
            .map(|r| r.cue_responses.iter().map(|(c, v)| (c.clone(), v.clone())).collect())
            .collect();
        let counts = oracle::association_counts(&people);
        let got: BTreeMap<(String, String), u32> =
            group.network.edges().map(|(a, b, w)| ((a.to_string(), b.to_string()), w)).collect();
        prop_assert_eq!(got, counts);

        for r in &records {
            let own = Bfmn::from_record(r);
            for node in own.nodes() {
                prop_assert!(group.network.degree(node).unwrap() >= own.degree(node).unwrap());
            }
        }
    }

    #[test]
    fn frame_matches_induced_subgraph(net in labelled_graph(), pick in any::<prop::sample::Index>()) {
        let target = pick.get(net.nodes()).clone();
        let frame = semantic_frame(&net, &target).unwrap();
        let neigh: BTreeSet<String> = net.nodes().iter().filter(|n| net.has_edge(&target, n)).cloned().collect();
        let got: BTreeSet<String> = frame.neighbours.iter().map(|n| n.concept.clone()).collect();
        prop_assert_eq!(&got, &neigh);
        prop_assert_eq!(frame.frame_degree, neigh.len());

        let mut keep = neigh.clone();
        keep.insert(target.clone());
        let mut expected_edges = BTreeSet::new();
        let mut links = 0;
        for (a, b, w) in net.edges() {
            if keep.contains(a) && keep.contains(b) {
                expected_edges.insert((a.to_string(), b.to_string(), w, class_oracle(net.label(a), net.label(b))));
                if a != target && b != target {
                    links += 1;
                }
            }
        }
        let got_edges: BTreeSet<_> = frame.edges.iter().map(|e| (e.source.clone(), e.target.clone(), e.weight, e.class.as_str())).collect();
        prop_assert_eq!(got_edges, expected_edges);
        let k = neigh.len();
        let c = if k < 2 { 0.0 } else { links as f64 / (k * (k - 1) / 2) as f64 };
        prop_assert!((frame.frame_clustering - c).abs() < 1e-12);

        for n in &frame.neighbours {
            prop_assert!((1.0..=2.0).contains(&n.font_scale));
        }

        let svg = frame_svg(&frame);
        prop_assert_eq!(audit(&svg, &frame), 0);
        prop_assert_eq!(&svg, &frame_svg(&frame));
    }

    #[test]
    fn flipping_labels_swaps_counts(net in labelled_graph(), pick in any::<prop::sample::Index>()) {
        let target = pick.get(net.nodes()).clone();
        let frame = semantic_frame(&net, &target).unwrap();
        let flipped_labels: BTreeMap<String, Valence> = net
            .nodes()
            .iter()
            .map(|n| (n.clone(), net.label(n).flipped()))
            .collect();
        let mut flipped = net.clone();
        flipped.set_labels(&flipped_labels);
        let other = semantic_frame(&flipped, &target).unwrap();
        prop_assert_eq!(frame.class_counts.positive, other.class_counts.negative);
        prop_assert_eq!(frame.class_counts.negative, other.class_counts.positive);
        prop_assert_eq!(frame.class_counts.contrastive, other.class_counts.contrastive);
        prop_assert_eq!(frame.class_counts.neutral, other.class_counts.neutral);
    }
}

#[test]
fn one_contrastive_pair_one_purple_path() {
    let mut b = NetworkBuilder::new();
    for n in ["a", "b", "c", "d", "e"] {
        b.add_edge("target", n, 1);
    }
    b.add_edge("a", "b", 2);
    let mut net = b.build();
    let labels: BTreeMap<String, Valence> =
        [("a", Valence::Positive), ("b", Valence::Negative), ("c", Valence::Positive)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
    net.set_labels(&labels);
    let frame = semantic_frame(&net, "target").unwrap();
    let svg = frame_svg(&frame);
    assert_eq!(svg.matches("stroke=\"purple\"").count(), 1);
    assert_eq!(frame.class_counts.contrastive, 1);
    assert_eq!(audit(&svg, &frame), 0);
}
