#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use conet_core::degree::{degree_sequence_of, hurwitz_zeta};
use conet_core::graph::components;
use conet_core::metrics::{distance_stats, top_hubs_in};
use conet_core::text::normalize_form;
use conet_core::{
    build_network, corpus_stats, edgelist, emit_pdf_ccdf, filter_stopwords, fit_power_law,
    node_clustering, tokenize, Corpus, DegreeSequence, DistanceMode, NormalizationRules,
    StopwordList, UndirectedView, WeightedDigraph, WindowConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

const VOCAB: [&str; 9] = ["a", "b", "c", "d", "e", "kad", "je", "ljudi", "dan"];

fn sentences() -> impl Strategy<Value = Vec<Vec<String>>> {
    let word = prop::sample::select(VOCAB.to_vec()).prop_map(String::from);
    prop::collection::vec(prop::collection::vec(word, 1..12), 1..8)
}

fn corpus_of(sentences: &[Vec<String>]) -> Corpus {
    let text: String = sentences.iter().map(|s| s.join(" ") + ". ").collect();
    let mut c = Corpus::new();
    c.push_document("doc", &text, NormalizationRules::default());
    c
}

fn build(c: &Corpus, n: usize) -> WeightedDigraph {
    build_network(c, &WindowConfig::with_stopwords(n).unwrap())
        .unwrap()
        .0
}

fn dense_graph() -> impl Strategy<Value = Dense> {
    (any::<u64>(), 1usize..40, 0.02f64..0.6, 1u64..20).prop_map(|(seed, n, p, max_w)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Dense::random(&mut rng, n, p, max_w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokens_are_clean(text in "[a-zA-Zčćž' .!?…\\-\"\n]{0,80}") {
        let sents = tokenize(&text, NormalizationRules::default());
        for (si, s) in sents.iter().enumerate() {
            prop_assert!(!s.is_empty());
            for (pi, t) in s.iter().enumerate() {
                prop_assert_eq!(t.sentence_index, si);
                prop_assert_eq!(t.position_in_sentence, pi);
                prop_assert!(!t.normalized.is_empty());
                prop_assert!(!t.normalized.chars().any(|c| c.is_whitespace() || ".!?…".contains(c)));
            }
        }
    }

    #[test]
    fn normalization_is_idempotent(text in "[a-zA-ZčćžČĆŽ' \\-]{0,40}") {
        for t in tokenize(&text, NormalizationRules::default()).into_iter().flatten() {
            prop_assert_eq!(normalize_form(&t.normalized, NormalizationRules::default()), vec![t.normalized.clone()]);
        }
    }

    #[test]
    fn stopword_entries_are_normalized(lines in prop::collection::vec("[a-zA-ZŠš]{1,6}", 0..20)) {
        let (list, _) = StopwordList::parse(&lines.join("\n"));
        let entries: Vec<&str> = list.iter().collect();
        let mut sorted = entries.clone();
        sorted.dedup();
        prop_assert_eq!(entries.len(), sorted.len());
        for e in entries {
            prop_assert_eq!(normalize_form(e, NormalizationRules::default()), vec![e.to_string()]);
        }
    }

    #[test]
    fn corpus_stats_bounds(sents in sentences(), stops in prop::collection::btree_set(prop::sample::select(VOCAB.to_vec()), 0..5)) {
        let c = corpus_of(&sents);
        let list: StopwordList = stops.into_iter().collect();
        let s = corpus_stats(&c, &list);
        prop_assert!(s.unique_words <= s.word_count);
        prop_assert!(s.stopwords_present <= s.unique_words);
        prop_assert_eq!(s.word_count, sents.iter().map(Vec::len).sum::<usize>());
        // the network keeps every distinct word as a node
        prop_assert_eq!(build(&c, 2).node_count(), s.unique_words);
    }

    #[test]
    fn empty_stoplist_filters_nothing(sents in sentences()) {
        let c = corpus_of(&sents);
        let f = filter_stopwords(&c, &StopwordList::new());
        prop_assert_eq!(f.sentences(), c.sentences());
    }

    #[test]
    fn filtering_removes_exactly_the_stopwords(sents in sentences(), stops in prop::collection::btree_set(prop::sample::select(VOCAB.to_vec()), 1..5)) {
        let c = corpus_of(&sents);
        let list: StopwordList = stops.iter().copied().collect();
        let f = filter_stopwords(&c, &list);
        let expect: Vec<Vec<String>> = sents
            .iter()
            .map(|s| s.iter().filter(|w| !stops.contains(w.as_str())).cloned().collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect();
        let got: Vec<Vec<String>> = f.sentences().iter().map(|s| s.iter().map(|t| t.normalized.clone()).collect()).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn build_matches_window_oracle(sents in sentences(), n in 2usize..7) {
        let c = corpus_of(&sents);
        let (g, diag) = build_network(&c, &WindowConfig::with_stopwords(n).unwrap()).unwrap();
        let mut expect: BTreeMap<(String, String), u64> = BTreeMap::new();
        let mut loops = 0;
        for s in &sents {
            for (a, b) in window_pairs(s, n) {
                if a == b {
                    loops += 1;
                } else {
                    *expect.entry((a, b)).or_default() += 1;
                }
            }
        }
        let got: BTreeMap<(String, String), u64> =
            link_set(&g).into_iter().map(|(a, b, w)| ((a, b), w)).collect();
        prop_assert_eq!(&got, &expect);
        prop_assert_eq!(diag.self_loops_skipped, loops);
        prop_assert_eq!(g.link_count(), expect.len());

        // total occurrences = sum over positions of min(n-1, L-p)
        let total: usize = sents
            .iter()
            .map(|s| (1..=s.len()).map(|p| (n - 1).min(s.len() - p)).sum::<usize>())
            .sum();
        prop_assert_eq!(got.values().sum::<u64>() as usize + loops, total);
    }

    #[test]
    fn larger_windows_only_add(sents in sentences(), n in 2usize..6) {
        let c = corpus_of(&sents);
        let (small, large) = (build(&c, n), build(&c, n + 1));
        prop_assert_eq!(small.node_count(), large.node_count());
        prop_assert!(large.link_count() >= small.link_count());
        for (s, t, w) in small.links() {
            let wl = large.weight_of(small.word(s), small.word(t));
            prop_assert!(wl.is_some_and(|wl| wl >= w));
        }
        prop_assert!(components(&large.undirected_view()).omega <= components(&small.undirected_view()).omega);
    }

    #[test]
    fn undirected_view_merges_both_directions(sents in sentences(), n in 2usize..5) {
        let g = build(&corpus_of(&sents), n);
        let v = g.undirected_view();
        for i in 0..g.node_count() as u32 {
            prop_assert!(v.neighbors(i).windows(2).all(|p| p[0] < p[1]));
            for &j in v.neighbors(i) {
                let merged = g.weight(i, j).unwrap_or(0) + g.weight(j, i).unwrap_or(0);
                prop_assert_eq!(v.weight(i, j), Some(merged));
                prop_assert_eq!(v.weight(j, i), Some(merged));
            }
        }
        let links: usize = (0..g.node_count() as u32).map(|i| g.out_links(i).count()).sum();
        prop_assert_eq!(links, g.link_count());
    }

    #[test]
    fn components_partition_nodes(g in dense_graph()) {
        let v = g.view();
        let parts = components(&v);
        let d = floyd_warshall(&g);
        prop_assert_eq!(parts.assignment.len(), g.n);
        prop_assert_eq!(parts.sizes.iter().sum::<usize>(), g.n);
        prop_assert_eq!(parts.sizes.len(), parts.omega);
        prop_assert!(parts.omega >= 1);
        for i in 0..g.n {
            for j in 0..g.n {
                prop_assert_eq!(parts.assignment[i] == parts.assignment[j], d[i][j] != INF);
            }
        }
        let mut lc = parts.largest_component.clone();
        lc.sort_unstable();
        prop_assert_eq!(lc.iter().map(|&x| x as usize).collect::<Vec<_>>(), largest_component(&d));
    }

    #[test]
    fn distances_match_floyd_warshall(g in dense_graph()) {
        let v = g.view();
        let d = floyd_warshall(&g);
        for s in 0..g.n {
            let bfs = conet_core::bfs_distances(&v, s as u32).unwrap();
            for t in 0..g.n {
                prop_assert_eq!(bfs.get(&(t as u32)).copied().unwrap_or(INF), d[s][t]);
            }
        }
        if v.edge_count() == 0 {
            prop_assert!(distance_stats(&v, DistanceMode::Exact).is_err());
            return Ok(());
        }
        let stats = distance_stats(&v, DistanceMode::Exact).unwrap();
        let comp = largest_component(&d);
        let (l, dia) = path_stats(&d, &comp);
        prop_assert_eq!(stats.average_path_length, l);
        prop_assert_eq!(stats.diameter, dia);
        prop_assert!(stats.diameter as f64 >= stats.average_path_length);
        prop_assert!(stats.exact);

        let all = distance_stats(&v, DistanceMode::Sampled { sources: comp.len(), seed: 3 }).unwrap();
        prop_assert_eq!(all.average_path_length.to_bits(), stats.average_path_length.to_bits());
        prop_assert_eq!(all.diameter, stats.diameter);
    }

    #[test]
    fn sampled_distances_are_seeded(g in dense_graph(), k in 1usize..10, seed in any::<u64>()) {
        let v = g.view();
        prop_assume!(v.edge_count() > 0);
        let a = distance_stats(&v, DistanceMode::Sampled { sources: k, seed }).unwrap();
        let b = distance_stats(&v, DistanceMode::Sampled { sources: k, seed }).unwrap();
        prop_assert_eq!(&a, &b);
        let exact = distance_stats(&v, DistanceMode::Exact).unwrap();
        prop_assert!(a.diameter <= exact.diameter);
        prop_assert_eq!(a.per_node_avg.len(), k.min(exact.component_size));
    }

    #[test]
    fn clustering_matches_enumeration(g in dense_graph()) {
        let v = g.view();
        let Some(max) = v.max_weight() else { return Ok(()); };
        for i in 0..g.n {
            let c = node_clustering(&v, max, i as u32).unwrap();
            prop_assert!((c - clustering_brute(&g, i)).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&c));
            if g.degree(i) < 2 {
                prop_assert_eq!(c, 0.0);
            }
        }
    }

    #[test]
    fn clustering_ignores_weight_scale(g in dense_graph()) {
        let v = g.view();
        let Some(max) = v.max_weight() else { return Ok(()); };
        let scaled = UndirectedView::from_edges(g.n, g.edges().into_iter().map(|(i, j, w)| (i, j, 7 * w)));
        for i in 0..g.n as u32 {
            prop_assert_eq!(
                node_clustering(&v, max, i).unwrap(),
                node_clustering(&scaled, 7 * max, i).unwrap()
            );
        }
    }

    #[test]
    fn uniform_weights_give_triangle_clustering(g in dense_graph(), w in 1u64..5) {
        let unit = Dense { n: g.n, w: g.w.iter().map(|r| r.iter().map(|&x| if x > 0 { w } else { 0 }).collect()).collect() };
        let v = unit.view();
        let Some(max) = v.max_weight() else { return Ok(()); };
        for i in 0..g.n {
            let c = node_clustering(&v, max, i as u32).unwrap();
            prop_assert!((c - clustering_unweighted(&unit, i)).abs() <= 1e-12);
        }
    }

    #[test]
    fn hubs_are_ranked(g in dense_graph(), k in 1usize..8) {
        let v = g.view();
        let words: Vec<String> = (0..g.n).map(|i| format!("w{i:02}")).collect();
        let hubs = top_hubs_in(&v, &words, k).unwrap();
        prop_assert_eq!(hubs.len(), k.min(g.n));
        let mut all: Vec<(usize, &str)> = (0..g.n).map(|i| (g.degree(i), words[i].as_str())).collect();
        all.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
        for (h, (d, w)) in hubs.iter().zip(all) {
            prop_assert_eq!(h.degree, d);
            prop_assert_eq!(h.word.as_str(), w);
        }
    }

    #[test]
    fn degree_sequence_of_graph(g in dense_graph()) {
        let seq = degree_sequence_of(&g.view());
        prop_assert_eq!(seq.n_obs(), g.n);
        prop_assert_eq!(seq.degrees, (0..g.n).map(|i| g.degree(i)).collect::<Vec<_>>());
    }

    #[test]
    fn distribution_identities(degrees in prop::collection::vec(0usize..60, 1..300)) {
        prop_assume!(degrees.iter().any(|&d| d > 0));
        let rows = emit_pdf_ccdf(&degrees.iter().copied().collect()).unwrap();
        let total: f64 = rows.iter().map(|r| r.pdf).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(rows.windows(2).all(|w| w[0].k < w[1].k && w[0].ccdf >= w[1].ccdf));
        for i in 0..rows.len() {
            let suffix: f64 = rows[i..].iter().map(|r| r.pdf).sum();
            prop_assert!((rows[i].ccdf - suffix).abs() <= 1e-12);
        }
        let positive = degrees.iter().filter(|&&d| d > 0).count();
        for r in &rows {
            let count = degrees.iter().filter(|&&d| d == r.k).count();
            prop_assert_eq!(r.pdf, count as f64 / positive as f64);
        }
    }

    #[test]
    fn fit_is_invariant_under_duplication(seed in any::<u64>(), size in 20usize..400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = PowerLawSampler::new(2.3, 1, 10_000);
        let degrees: Vec<usize> = (0..size).map(|_| sampler.sample(&mut rng) as usize).collect();
        let once: DegreeSequence = degrees.iter().copied().collect();
        let Ok(a) = fit_power_law(&once) else { return Ok(()); };
        let twice: DegreeSequence = degrees.iter().chain(&degrees).copied().collect();
        let b = fit_power_law(&twice).unwrap();
        prop_assert_eq!(a.x_min, b.x_min);
        prop_assert!((a.alpha - b.alpha).abs() <= 1e-8, "{} vs {}", a.alpha, b.alpha);
        prop_assert_eq!(2 * a.n_tail, b.n_tail);
        prop_assert!(a.n_tail >= 2 && a.alpha.is_finite());
        prop_assert!(a.x_min >= *degrees.iter().filter(|&&d| d > 0).min().unwrap());
    }

    #[test]
    fn edge_list_round_trip(sents in sentences(), n in 2usize..5) {
        let g = build(&corpus_of(&sents), n);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        edgelist::save(&g, &path).unwrap();
        let back = edgelist::load(&path).unwrap();
        prop_assert_eq!(back.words(), g.words());
        prop_assert_eq!(back.links(), g.links());
    }
}

#[test]
fn zeta_matches_direct_summation() {
    for &s in &[1.5, 2.0, 2.5, 3.3, 5.0] {
        for &q in &[1.0, 2.0, 5.0, 17.0, 250.0] {
            // direct sum to 2e6 terms, then the integral of the tail with a
            // midpoint correction
            let terms = 2_000_000u64;
            let mut sum = 0.0;
            for k in (0..terms).rev() {
                sum += (q + k as f64).powf(-s);
            }
            let tail_start = q + terms as f64 - 0.5;
            sum += tail_start.powf(1.0 - s) / (s - 1.0);
            let z = hurwitz_zeta(s, q);
            assert!(((z - sum) / sum).abs() < 1e-9, "s={s} q={q}: {z} vs {sum}");
        }
    }
}

#[test]
fn five_word_sentence_degrees() {
    let g = build(
        &corpus_of(&[["w1", "w2", "w3", "w4", "w5"].map(String::from).to_vec()]),
        2,
    );
    assert_eq!(
        degree_sequence_of(&g.undirected_view()).degrees,
        vec![1, 2, 2, 2, 1]
    );
}
