//! The acceptance gate: one test per contract criterion, exact integer
//! equality throughout. Each test prints as its own pass/fail line.

use num_bigint::BigInt;
use qknot::classify::{
    classify_edge, corollary_knot_check, corollary_simple_check, enumerate_connected,
    SplitAssumption, Verdict,
};
use qknot::corpus;
use qknot::cutsets::{
    all_maximal_pds, dl_extreme_coeffs, dual_extreme_coeffs, es_identity_check,
    maximal_pds_of_edge, parity,
};
use qknot::diagram::{build_medial, kauffman_bracket, kauffman_bracket_with, span_k, SmoothingConvention};
use qknot::laurent::LaurentPoly;
use qknot::plane_graph::{EdgeId, Sign, SignedGraph, SignedPlaneGraph};
use qknot::polynomials::{
    extreme_coeff_predictions, q_after_flip, q_polynomial, q_via_tutte, tutte_neg_eval,
};
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn poly(text: &str) -> LaurentPoly {
    LaurentPoly::parse(text, 'A').expect("literal polynomial")
}

/// Every connected loopless multigraph with at most 8 edges, bridges allowed.
fn connected_graphs() -> &'static [SignedGraph] {
    static SET: OnceLock<Vec<SignedGraph>> = OnceLock::new();
    SET.get_or_init(|| enumerate_connected(9, 8, false).expect("bounds are under the cap"))
}

/// The bridgeless subfamily, the domain of the flip and coefficient laws.
fn bridgeless_graphs() -> &'static [SignedGraph] {
    static SET: OnceLock<Vec<SignedGraph>> = OnceLock::new();
    SET.get_or_init(|| enumerate_connected(9, 8, true).expect("bounds are under the cap"))
}

/// The embedded corpus plus mixed-sign variants of four of its members.
fn embedded_corpus_with_variants() -> Vec<SignedPlaneGraph> {
    let mut graphs = corpus::all();
    let mut variants = vec![
        corpus::c(4).with_sign(EdgeId(1), Sign::Minus).unwrap(),
        corpus::theta3().with_sign(EdgeId(2), Sign::Minus).unwrap(),
        corpus::h_split()
            .with_sign(EdgeId(4), Sign::Minus)
            .unwrap()
            .with_sign(EdgeId(7), Sign::Minus)
            .unwrap(),
        corpus::c(3).with_all_signs(Sign::Minus),
    ];
    graphs.append(&mut variants);
    graphs
}

#[test]
fn point_values_of_the_smallest_graphs() {
    let cases = [
        ("e2", "-A^-2 - A^2"),
        ("b1", "-A^-3"),
        ("c2", "-A^-4 - A^4"),
        ("c3", "A^-7 - A^-3 - A^5"),
        ("theta3", "-A^-5 - A^3 + A^7"),
    ];
    for (name, expected) in cases {
        let g = corpus::load(name).expect("corpus member");
        assert_eq!(q_polynomial(g.underlying()), poly(expected), "Q[{name}]");
    }
}

#[test]
fn bracket_of_the_medial_diagram_matches_the_recursion() {
    let graphs = embedded_corpus_with_variants();
    assert!(graphs.len() >= 15, "corpus of {} graphs is too small", graphs.len());
    let mixed = graphs
        .iter()
        .filter(|g| {
            let signs: BTreeSet<Sign> = g.underlying().edges().map(|(_, ends)| ends.sign).collect();
            signs.contains(&Sign::Minus)
        })
        .count();
    assert!(mixed >= 3, "only {mixed} variants carry a negative sign");
    for g in &graphs {
        assert!(g.underlying().edge_count() <= 12, "{} exceeds 12 crossings", g.name());
        let recursion = q_polynomial(g.underlying());
        let state_sum = kauffman_bracket(&build_medial(g));
        assert_eq!(recursion, state_sum, "graph {}", g.name());
    }
}

#[test]
fn rank_expansion_agrees_on_every_small_connected_multigraph() {
    let graphs = connected_graphs();
    assert!(graphs.len() >= 200, "enumeration produced only {}", graphs.len());
    for g in graphs {
        let direct = q_polynomial(g);
        let scaled = q_via_tutte(g).expect("graph is connected and loopless");
        assert_eq!(direct, scaled, "{}-vertex {}-edge graph", g.vertex_count(), g.edge_count());
    }
}

#[test]
fn the_dual_graph_keeps_the_q_polynomial() {
    for g in corpus::all() {
        let q = q_polynomial(g.underlying());
        let dual = g.dual();
        assert_eq!(q, q_polynomial(dual.underlying()), "dual of {}", g.name());
        let double = dual.dual();
        assert_eq!(
            q_polynomial(dual.underlying()),
            q_polynomial(double.underlying()),
            "double dual of {}",
            g.name()
        );
    }
}

#[test]
fn extreme_degrees_and_coefficients_match_the_closed_forms() {
    for g in bridgeless_graphs() {
        let q = q_polynomial(g);
        let info = q.degree_info().expect("Q of a connected graph is nonzero");
        let predicted = extreme_coeff_predictions(g).expect("graph satisfies the preconditions");
        assert_eq!(
            (info.max_deg, &info.leading),
            (predicted.highest.0, &predicted.highest.1),
            "highest term, {}-vertex {}-edge graph",
            g.vertex_count(),
            g.edge_count()
        );
        assert_eq!(
            (info.min_deg, &info.trailing),
            (predicted.lowest.0, &predicted.lowest.1),
            "lowest term"
        );
        assert_eq!(q.coeff(predicted.second_highest.0), predicted.second_highest.1, "second-highest");
        assert_eq!(q.coeff(predicted.second_lowest.0), predicted.second_lowest.1, "second-lowest");
    }
}

#[test]
fn evaluation_end_coefficients_match_the_cutset_formulas() {
    for g in bridgeless_graphs() {
        let evaluation = tutte_neg_eval(g);
        let top = dl_extreme_coeffs(g).expect("graph is connected and loopless");
        assert_eq!(evaluation.coeff(top.degree), top.extreme_coeff, "top coefficient");
        assert_eq!(evaluation.coeff(top.degree - 1), top.second_coeff, "next-to-top coefficient");
        let bottom = dual_extreme_coeffs(g).expect("graph is connected and bridgeless");
        assert_eq!(evaluation.coeff(bottom.degree), bottom.extreme_coeff, "bottom coefficient");
        assert_eq!(
            evaluation.coeff(bottom.degree + 1),
            bottom.second_coeff,
            "next-to-bottom coefficient"
        );
    }

    for g in corpus::all() {
        let und = g.underlying();
        if !und.is_connected() || !und.is_bridgeless() {
            continue;
        }
        let family: BTreeSet<BTreeSet<EdgeId>> =
            all_maximal_pds(und).expect("preconditions hold").into_iter().collect();
        let dual_classes: BTreeSet<BTreeSet<EdgeId>> = g
            .dual()
            .underlying()
            .multiplicity_info()
            .expect("dual is a graph")
            .maximal_multiple_edges
            .into_iter()
            .collect();
        assert_eq!(family, dual_classes, "cutset family of {} against its dual", g.name());
    }
}

#[test]
fn flipped_coefficients_of_single_edges_obey_the_formulas() {
    let mut pairs = 0usize;
    for g in bridgeless_graphs() {
        let v = g.vertex_count() as i64;
        let m = g.edge_count() as i64;
        for e in g.edge_ids() {
            if g.parallel_edges(e).expect("edge exists").is_empty() {
                let flipped = q_after_flip(g, e).expect("flip succeeds");
                let in_family =
                    maximal_pds_of_edge(g, e).expect("preconditions hold").is_some();
                let top = parity(m - v + 1) * BigInt::from(i64::from(in_family));
                assert_eq!(flipped.coeff(3 * m - 2 * v), top, "near-top coefficient at {e}");
                let es = es_identity_check(g, e).expect("preconditions hold");
                let bottom = parity(v - 1)
                    * BigInt::from(es.simple_edges_contracted as i64 + 2 - es.simple_edges as i64);
                assert_eq!(flipped.coeff(-m - 2 * v + 8), bottom, "near-bottom coefficient at {e}");
                assert!(
                    es.holds,
                    "pair-count identity at {e}: {} vs {} + 1 + {}",
                    es.simple_edges, es.simple_edges_contracted, es.common_neighbors
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 500, "only {pairs} single-edge pairs were exercised");
}

#[test]
fn span_drop_of_eight_characterizes_the_exact_two_verdict() {
    let mut exact = 0usize;
    let mut inexact = 0usize;
    for g in bridgeless_graphs() {
        let q_span = q_polynomial(g).degree_info().expect("Q is nonzero").span;
        for e in g.edge_ids() {
            let verdict =
                classify_edge(g, e, SplitAssumption::Auto).expect("graph is classifiable");
            if verdict.split_status.certified() {
                continue;
            }
            let flip_span =
                q_after_flip(g, e).expect("flip succeeds").degree_info().map_or(0, |i| i.span);
            assert!(
                flip_span <= q_span - 8,
                "flip at {e} dropped the span by only {}",
                q_span - flip_span
            );
            let dropped_exactly_eight = flip_span == q_span - 8;
            let exactly_two = verdict.verdict == Verdict::ExactlyTwo;
            assert_eq!(
                dropped_exactly_eight, exactly_two,
                "span drop {} disagrees with verdict {} at {e}",
                q_span - flip_span,
                verdict.verdict.token()
            );
            if exactly_two {
                exact += 1;
            } else {
                inexact += 1;
            }
        }
    }
    assert!(exact > 0 && inexact > 0, "sweep saw {exact} exact and {inexact} inexact edges");
}

#[test]
fn flipping_one_of_a_connected_parallel_pair_deletes_the_pair() {
    let mut pairs = 0usize;
    for g in bridgeless_graphs() {
        for e in g.edge_ids() {
            let flipped = q_after_flip(g, e).expect("flip succeeds");
            for f in g.parallel_edges(e).expect("edge exists") {
                let rest = g.delete_edges([e, f]).expect("edges exist");
                if !rest.is_connected() {
                    continue;
                }
                assert_eq!(flipped, q_polynomial(&rest), "pair {e},{f}");
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 100, "only {pairs} parallel pairs were exercised");
}

#[test]
fn cycle_knots_drop_exactly_two_and_the_small_obstructions_fail() {
    for n in [5u32, 7, 9] {
        let g = corpus::c(n);
        let medial = build_medial(&g);
        assert_eq!(medial.link_components(), 1, "the medial of c{n} is a knot");
        assert_eq!(
            span_k(&medial).expect("bracket is nonzero").span_over_four,
            n as i64,
            "crossing count of c{n}"
        );
        for e in g.underlying().edge_ids() {
            let verdict = classify_edge(g.underlying(), e, SplitAssumption::Auto)
                .expect("cycles are classifiable");
            assert_eq!(verdict.verdict, Verdict::ExactlyTwo, "edge {e} of c{n}");
        }
        let report = corollary_simple_check(&g).expect("cycles are simple");
        assert!(report.knot && report.pass, "whole-graph check on c{n}");
    }

    let c3 = corpus::c(3);
    for e in c3.underlying().edge_ids() {
        let verdict = classify_edge(c3.underlying(), e, SplitAssumption::Auto).unwrap();
        assert_eq!(verdict.verdict, Verdict::NotExactlyTwo, "edge {e} of c3");
        assert!(!verdict.facts.common_neighbors.is_empty(), "c3 endpoints share a neighbor");
    }
    let c3_report = corollary_simple_check(&c3).expect("the triangle is simple");
    assert!(!c3_report.pass);
    let triangle = c3_report.conditions.iter().find(|c| c.name == "triangle-free").unwrap();
    assert!(!triangle.pass && triangle.witness.is_some(), "triangle witness is reported");

    let theta = corpus::theta3();
    for e in theta.underlying().edge_ids() {
        let verdict = classify_edge(theta.underlying(), e, SplitAssumption::Auto).unwrap();
        assert_eq!(verdict.verdict, Verdict::NotExactlyTwo, "edge {e} of theta3");
        assert!(
            verdict.facts.parallel.iter().all(|p| p.connected && !p.bridgeless),
            "removing a parallel pair of theta3 leaves a bridge"
        );
    }
    let theta_report = corollary_knot_check(&theta).expect("theta3 is a multigraph");
    assert!(!theta_report.pass);
    let pair_condition = theta_report
        .conditions
        .iter()
        .find(|c| c.name == "some parallel pair of each class deletes cleanly")
        .unwrap();
    assert!(!pair_condition.pass && pair_condition.witness.is_some());
}

#[test]
fn corrupting_the_smoothing_convention_is_caught() {
    // The two-cycle's bracket is mirror-symmetric, so swapping the smoothing
    // roles cannot move it; the pair below still forces the convention
    // because the one-bridge graph is as asymmetric as a diagram gets.
    let c2 = corpus::c(2);
    let honest_c2 = q_polynomial(c2.underlying());
    let corrupted_c2 = kauffman_bracket_with(&build_medial(&c2), SmoothingConvention::Mirrored);
    assert_eq!(honest_c2, corrupted_c2, "the two-cycle alone cannot see the corruption");

    let b1 = corpus::load("b1").unwrap();
    let honest_b1 = q_polynomial(b1.underlying());
    let corrupted_b1 = kauffman_bracket_with(&build_medial(&b1), SmoothingConvention::Mirrored);
    assert_ne!(honest_b1, corrupted_b1, "the corrupted convention must be detected");

    let detected = embedded_corpus_with_variants()
        .iter()
        .filter(|g| {
            kauffman_bracket_with(&build_medial(g), SmoothingConvention::Mirrored)
                != q_polynomial(g.underlying())
        })
        .count();
    assert!(detected >= 8, "the corruption slipped past most of the corpus ({detected} catches)");
}
