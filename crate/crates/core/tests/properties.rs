mod common;

use common::{oracle_path, synth_db, Oracle, SynthPos};
use lexpand::classifier::{classify, classify_row, proportions, Label, PointMode, Thresholds};
use lexpand::corpus::{count_frequencies, tokenize_parts, Document};
use lexpand::lexicon::{expand_by_sweep, ExpansionConfig, SeedLexicon, Side, SweepDecision, SynsetOrder};
use lexpand::similarity::{lch_measure, wup_measure, Variant};
use lexpand::taxonomy::{GraphOptions, TaxonomyGraph};
use lexpand::wndb::{PartOfSpeech, WordNetDatabase};
use proptest::prelude::*;

/// Random acyclic hierarchy: synset `i` draws up to two parents below it.
fn hierarchy(pos: PartOfSpeech, max: usize, vocab: usize) -> impl Strategy<Value = SynthPos> {
    (1..=max).prop_flat_map(move |n| {
        let parents = (0..n)
            .map(|i| {
                if i == 0 {
                    Just(Vec::new()).boxed()
                } else {
                    prop::collection::btree_set(1..=i, 0..=2)
                        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
                        .boxed()
                }
            })
            .collect::<Vec<_>>();
        let words = prop::collection::vec((0..vocab).prop_map(|k| format!("w{k}")), n);
        (parents, words).prop_map(move |(parents, words)| SynthPos { pos, parents, words })
    })
}

fn two_pos_db() -> impl Strategy<Value = WordNetDatabase> {
    (
        hierarchy(PartOfSpeech::Noun, 10, 8),
        hierarchy(PartOfSpeech::Verb, 6, 8),
    )
        .prop_map(|(n, v)| synth_db(&[n, v]))
}

fn appended(lex: &SeedLexicon, seeds: &SeedLexicon, side: Side) -> Vec<String> {
    let mut w: Vec<String> = lex
        .words(side)
        .skip(seeds.side(side).len())
        .map(str::to_string)
        .collect();
    w.sort();
    w
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn graph_agrees_with_path_enumeration(db in two_pos_db(), verb_root in any::<bool>()) {
        let options = GraphOptions { virtual_verb_root: verb_root, allow_cycles: false };
        let g = TaxonomyGraph::build_with(&db, options).unwrap();
        let oracle = Oracle::new(&db, verb_root);
        for a in db.synsets() {
            prop_assert_eq!(g.depth(a.id).unwrap(), oracle.depth(a.id));
            for b in db.synsets() {
                let d = g.shortest_ancestral_distance(a.id, b.id).unwrap();
                prop_assert_eq!(d, oracle.distance(a.id, b.id));
                prop_assert_eq!(d, g.shortest_ancestral_distance(b.id, a.id).unwrap());
                prop_assert_eq!(g.least_common_subsumer(a.id, b.id).unwrap(), oracle.lcs(a.id, b.id));
                let p = lexpand::similarity::path_similarity(&g, a.id, b.id).unwrap();
                prop_assert_eq!(p, oracle_path(&oracle, a.id, b.id));
                if let Some(p) = p {
                    prop_assert!(p > 0.0 && p <= 1.0);
                }
            }
        }
        prop_assert_eq!(g.max_depth(PartOfSpeech::Noun), oracle.max_depth(PartOfSpeech::Noun));
    }

    #[test]
    fn ratio_measures_stay_in_unit_interval(db in two_pos_db()) {
        let g = TaxonomyGraph::build(&db).unwrap();
        for a in db.synsets() {
            for b in db.synsets() {
                for v in [Variant::Ratio, Variant::Standard] {
                    if let Some(w) = wup_measure(&g, a.id, b.id, v).unwrap() {
                        prop_assert!((0.0..=1.0).contains(&w), "wup {}", w);
                    }
                }
                if let Some(l) = lch_measure(&g, a.id, b.id, Variant::Ratio).unwrap() {
                    prop_assert!((0.0..=1.0).contains(&l), "lch {}", l);
                }
            }
        }
    }

    #[test]
    fn sweep_keeps_seeds_and_appends_once(
        db in two_pos_db(),
        tau_good in 0.3f64..1.0,
        tau_bad in 0.05f64..0.3,
        live in any::<bool>(),
    ) {
        let g = TaxonomyGraph::build(&db).unwrap();
        let seeds = SeedLexicon::from_seeds(&["w0", "w1"], &["w2"]);
        let config = ExpansionConfig { tau_good, tau_bad, live_growth: live, trace: true, ..Default::default() };
        let (lex, report) = expand_by_sweep(&db, &g, &seeds, &config);
        for side in [Side::Good, Side::Bad] {
            prop_assert_eq!(&lex.side(side)[..seeds.side(side).len()], seeds.side(side));
        }
        let trace = report.trace.unwrap();
        prop_assert_eq!(trace.len(), db.len());
        let appends = trace.iter().filter(|r| r.decision != SweepDecision::Skip).count();
        prop_assert_eq!(appends, report.appended_good + report.appended_bad);
        prop_assert_eq!(lex.side(Side::Good).len() + lex.side(Side::Bad).len(), 3 + appends);
    }

    #[test]
    fn frozen_sweep_ignores_order(db in two_pos_db(), tau_good in 0.3f64..1.0) {
        let g = TaxonomyGraph::build(&db).unwrap();
        let seeds = SeedLexicon::from_seeds(&["w0"], &["w1", "w2"]);
        let run = |order| {
            let config = ExpansionConfig { tau_good, live_growth: false, order, ..Default::default() };
            expand_by_sweep(&db, &g, &seeds, &config).0
        };
        let base = run(SynsetOrder::File);
        for order in [SynsetOrder::AdjFirst, SynsetOrder::PosInterleaved] {
            let other = run(order);
            for side in [Side::Good, Side::Bad] {
                prop_assert_eq!(appended(&other, &seeds, side), appended(&base, &seeds, side));
            }
        }
    }

    #[test]
    fn wider_good_window_never_appends_less(db in two_pos_db(), lo in 0.2f64..0.9, extra in 0.0f64..0.5) {
        let g = TaxonomyGraph::build(&db).unwrap();
        let seeds = SeedLexicon::from_seeds(&["w0", "w3"], &["w1"]);
        let count = |tau_good: f64| {
            let config = ExpansionConfig { tau_good, tau_bad: 0.2, live_growth: false, ..Default::default() };
            let (_, r) = expand_by_sweep(&db, &g, &seeds, &config);
            r.appended_good + r.appended_bad
        };
        prop_assert!(count((lo + extra).min(1.0)) >= count(lo));
    }

    #[test]
    fn classifier_is_side_symmetric(
        good in prop::collection::vec(0u64..20, 1..6),
        bad in prop::collection::vec(0u64..20, 1..6),
        eps1 in 0.0f64..1.0,
        eps2 in 0.0f64..1.0,
    ) {
        let row: Vec<u64> = good.iter().chain(&bad).copied().collect();
        let sides: Vec<Side> = good.iter().map(|_| Side::Good).chain(bad.iter().map(|_| Side::Bad)).collect();
        let t = Thresholds { eps1, eps2 };
        let r = classify_row(&row, &sides, t, PointMode::Raw, None).unwrap();
        let total = r.p_good + r.p_bad;
        prop_assert!(total == 0.0 || (total - 1.0).abs() < 1e-12);
        prop_assert_eq!(r.strength, r.p_good.max(r.p_bad));
        prop_assert_eq!(r.point.x, good.iter().sum::<u64>() as f64);
        match r.label {
            Label::A => prop_assert!(r.p_good > eps1),
            Label::B => prop_assert!(r.p_bad > eps2),
            Label::Unclassified => {}
        }
        if r.both_passed {
            prop_assert!(t.overlapping());
        }

        let flipped: Vec<Side> = sides.iter().map(|s| s.other()).collect();
        let swapped = Thresholds { eps1: eps2, eps2: eps1 };
        let f = classify_row(&row, &flipped, swapped, PointMode::Raw, None).unwrap();
        prop_assert_eq!(f.label, r.label.swapped());
        prop_assert_eq!((f.p_good, f.p_bad), (r.p_bad, r.p_good));
    }

    #[test]
    fn proportions_feed_classify(row in prop::collection::vec(0u64..9, 2..8), eps in 0.0f64..1.0) {
        let sides: Vec<Side> = (0..row.len()).map(|i| if i % 2 == 0 { Side::Good } else { Side::Bad }).collect();
        let (pg, pb) = proportions(&row, &sides).unwrap();
        let d = classify(pg, pb, Thresholds { eps1: eps, eps2: eps });
        let r = classify_row(&row, &sides, Thresholds { eps1: eps, eps2: eps }, PointMode::Raw, None).unwrap();
        prop_assert_eq!(d.label, r.label);
    }

    #[test]
    fn bigrams_stay_within_lines(lines in prop::collection::vec("[a-c ]{0,12}", 0..6)) {
        let text = lines.join("\n");
        let t = tokenize_parts(&text);
        let expected: usize = text
            .lines()
            .map(|l| l.split_whitespace().count().saturating_sub(1))
            .sum();
        prop_assert_eq!(t.bigrams.len(), expected);
        prop_assert_eq!(t.unigrams.len(), text.split_whitespace().count());
    }

    #[test]
    fn unigram_counts_add_up(words in prop::collection::vec("[a-c]{1,2}", 0..30)) {
        let text = words.join(" ");
        let mut vocab = words.clone();
        vocab.sort();
        vocab.dedup();
        let m = count_frequencies(&[Document::new("d", text)], &vocab);
        prop_assert_eq!(m.row(0).iter().sum::<u64>(), words.len() as u64);
    }
}
