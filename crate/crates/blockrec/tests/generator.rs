//! Statistical checks of the generator and mask sampler, plus file
//! round-trip properties.

mod common;

use proptest::prelude::*;

use blockrec::netgen::{
    generate_network, parse_graph, parse_partition, sample_mask, GeneratorConfig, ObservedGraph,
    Partition,
};

#[test]
fn edge_probabilities_match_the_flip_construction() {
    // empirical intra-cluster edge rate ~ 1 - flip, inter-cluster ~ flip
    let cfg = GeneratorConfig::new(200, 0.8, 1234);
    let (graph, truth) = generate_network(&cfg).unwrap();
    let mut intra = [0usize; 2];
    let mut inter = [0usize; 2];
    for ((i, j), bit) in graph.observations() {
        if truth.same_cluster(i, j) {
            intra[usize::from(bit)] += 1;
        } else {
            inter[usize::from(bit)] += 1;
        }
    }
    let intra_rate = intra[1] as f64 / (intra[0] + intra[1]) as f64;
    let inter_rate = inter[1] as f64 / (inter[0] + inter[1]) as f64;
    assert!((intra_rate - 0.95).abs() <= 0.02, "intra rate {intra_rate}");
    assert!((inter_rate - 0.05).abs() <= 0.02, "inter rate {inter_rate}");
}

#[test]
fn mask_sampling_is_uniform_over_pairs() {
    let n = 20;
    let draws = 1000;
    let mut counts = std::collections::HashMap::new();
    for seed in 0..draws {
        let mask = sample_mask(n, 0.5, seed).unwrap();
        for &pair in mask.off_diagonal_pairs() {
            *counts.entry(pair).or_insert(0usize) += 1;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let freq = counts.get(&(i, j)).copied().unwrap_or(0) as f64 / draws as f64;
            assert!(
                (freq - 0.5).abs() <= 0.05,
                "pair ({i},{j}) frequency {freq}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_files_round_trip(n in 2usize..40, p0 in 0.2f64..=1.0, seed in 0u64..1000) {
        let cfg = GeneratorConfig::new(n, 0.9, seed);
        let (full, _) = generate_network(&cfg).unwrap();
        let graph = if p0 < 1.0 {
            full.restrict(&sample_mask(full.n(), p0, seed ^ 0xabcd).unwrap()).unwrap()
        } else {
            full
        };
        let mut text = String::new();
        text.push_str(&format!("n {}\n", graph.n()));
        for ((i, j), b) in graph.observations() {
            text.push_str(&format!("{} {} {}\n", i + 1, j + 1, u8::from(b)));
        }
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back, graph);
    }

    #[test]
    fn partition_files_round_trip(labels in proptest::collection::vec(0usize..5, 1..30)) {
        let p = match Partition::from_arbitrary_labels(&labels) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        let mut text = format!("n {} r {}\n", p.n(), p.r());
        for (node, &label) in p.labels().iter().enumerate() {
            text.push_str(&format!("{} {}\n", node + 1, label + 1));
        }
        let back = parse_partition(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn dense_round_trip_preserves_observations(n in 2usize..25, p0 in 0.3f64..=1.0, seed in 0u64..500) {
        let cfg = GeneratorConfig::new(n, 0.7, seed);
        let (full, _) = generate_network(&cfg).unwrap();
        let graph = full.restrict(&sample_mask(full.n(), p0, seed.wrapping_add(17)).unwrap()).unwrap();
        let (d, mask) = graph.to_dense();
        let back = ObservedGraph::from_dense(&d, &mask).unwrap();
        prop_assert_eq!(back, graph);
    }
}
