//! Medial link diagrams of signed plane graphs and their Kauffman bracket.
//!
//! Each edge of an embedded graph becomes one crossing of the medial
//! diagram, with the strand over or under according to the edge's sign, and
//! each isolated vertex becomes a free circle. The bracket is the state sum
//! over all ways to smooth every crossing: a state with `a` A-smoothings,
//! `b` B-smoothings, and `l` resulting circles contributes
//! `A^{a-b} (-A^2 - A^{-2})^{l-1}`.
//!
//! Around a crossing the four strand ends are numbered 0..4 counterclockwise
//! so that ends 0 and 2 continue each other through the crossing, as do 1
//! and 3. For a positive edge the A-smoothing joins 0-1 and 2-3, the
//! B-smoothing 0-3 and 1-2; a negative edge swaps the two. End 0 sits in the
//! face corner clockwise before the edge's first half-edge, and the
//! numbering proceeds toward the corner after it, so consecutive half-edges
//! in a rotation tie their crossings together corner by corner.

use crate::laurent::LaurentPoly;
use crate::plane_graph::{EdgeId, HalfEdgeId, Sign, SignedPlaneGraph};
use crate::polynomials::circle_weight;
use std::collections::BTreeMap;
use thiserror::Error;

/// Crossing budget for bracket state sums.
pub const DEFAULT_STATE_SUM_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram has {crossings} crossings, over the cap of {cap}")]
    CapExceeded { crossings: usize, cap: usize },
    #[error("the bracket is zero and has no span")]
    ZeroBracket,
    #[error("bracket span {span} is not divisible by four")]
    RaggedSpan { span: i64 },
}

/// One crossing of a medial diagram, remembering which edge produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub edge: EdgeId,
    pub sign: Sign,
}

/// A 4-valent link diagram: crossings plus a perfect matching on their
/// strand ends describing how arcs run between crossings, plus crossing-free
/// circles. Strand end `4i + s` is slot `s` of crossing `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedialDiagram {
    crossings: Vec<Crossing>,
    matching: Vec<usize>,
    free_circles: usize,
}

/// Which local pairing counts as the A-smoothing. [`Mirrored`] exists as a
/// deliberately wrong convention for negative-control tests: it must break
/// agreement with the edge-sign recursion somewhere.
///
/// [`Mirrored`]: SmoothingConvention::Mirrored
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingConvention {
    Standard,
    Mirrored,
}

/// Builds the medial diagram of an embedded signed graph.
pub fn build_medial(g: &SignedPlaneGraph) -> MedialDiagram {
    let underlying = g.underlying();
    let crossings: Vec<Crossing> = underlying
        .edges()
        .map(|(edge, ends)| Crossing { edge, sign: ends.sign })
        .collect();
    let index: BTreeMap<EdgeId, usize> =
        crossings.iter().enumerate().map(|(i, c)| (c.edge, i)).collect();

    // The strand end living in the corner between rotation-consecutive darts
    // `h` and `rot_next(h)`: on the `h` side it is slot 3 of `h`'s crossing
    // when `h` is the edge's first half, slot 1 when the second; on the
    // `rot_next(h)` side it is slot 0 (first half) or slot 2 (second).
    let end_at = |h: HalfEdgeId, leaving: bool| -> usize {
        let e = g.edge_of(h);
        let (h1, _) = g.halves(e).expect("half-edges map to edges");
        let slot = match (leaving, h == h1) {
            (true, true) => 3,
            (true, false) => 1,
            (false, true) => 0,
            (false, false) => 2,
        };
        4 * index[&e] + slot
    };

    let mut matching = vec![usize::MAX; 4 * crossings.len()];
    let mut free_circles = 0;
    for v in underlying.vertices() {
        let rot = g.rotation(v).expect("iterating existing vertices");
        if rot.is_empty() {
            free_circles += 1;
            continue;
        }
        for (i, &h) in rot.iter().enumerate() {
            let next = rot[(i + 1) % rot.len()];
            let from = end_at(h, true);
            let to = end_at(next, false);
            matching[from] = to;
            matching[to] = from;
        }
    }
    for (i, &m) in matching.iter().enumerate() {
        assert!(m != usize::MAX && matching[m] == i, "matching must be an involution");
    }
    MedialDiagram { crossings, matching, free_circles }
}

impl MedialDiagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    /// Slot of the other end of the strand running straight through a
    /// crossing: 0 continues as 2, 1 as 3.
    fn through(end: usize) -> usize {
        end ^ 2
    }

    /// Slot of the end tied to `end` when its crossing is smoothed. With the
    /// adjacent pairing {0,1},{2,3} the partner is `end ^ 1`; the other
    /// pairing {0,3},{1,2} sends slot `s` to `3 - s`.
    fn smoothed(&self, end: usize, use_adjacent: bool) -> usize {
        let base = end & !3;
        let slot = end & 3;
        base + if use_adjacent { slot ^ 1 } else { 3 - slot }
    }

    fn cycles<F: Fn(usize) -> usize>(&self, inside: F) -> usize {
        let n = self.matching.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut at = start;
            loop {
                seen[at] = true;
                let partner = inside(at);
                seen[partner] = true;
                at = self.matching[partner];
                if at == start {
                    break;
                }
            }
        }
        cycles
    }

    /// Number of components of the link the diagram presents: closed strands
    /// through the crossings, plus the free circles.
    pub fn link_components(&self) -> usize {
        self.cycles(Self::through) + self.free_circles
    }

    fn state_loops(&self, state: u64, convention: SmoothingConvention) -> usize {
        self.cycles(|end| {
            let crossing = end >> 2;
            let a_chosen = state >> crossing & 1 == 0;
            let positive = self.crossings[crossing].sign == Sign::Plus;
            let mut use_adjacent = a_chosen == positive;
            if convention == SmoothingConvention::Mirrored {
                use_adjacent = !use_adjacent;
            }
            self.smoothed(end, use_adjacent)
        }) + self.free_circles
    }
}

pub fn kauffman_bracket(d: &MedialDiagram) -> LaurentPoly {
    kauffman_bracket_with(d, SmoothingConvention::Standard)
}

pub fn kauffman_bracket_capped(d: &MedialDiagram, cap: usize) -> Result<LaurentPoly, DiagramError> {
    if d.crossing_count() > cap {
        return Err(DiagramError::CapExceeded { crossings: d.crossing_count(), cap });
    }
    Ok(kauffman_bracket(d))
}

pub fn kauffman_bracket_with(d: &MedialDiagram, convention: SmoothingConvention) -> LaurentPoly {
    let c = d.crossing_count();
    assert!(c < 64, "state masks are 64-bit");
    let mut states: Vec<(i64, usize)> = Vec::with_capacity(1 << c);
    let mut max_loops = 0;
    for state in 0u64..(1u64 << c) {
        let b_count = state.count_ones() as i64;
        let loops = d.state_loops(state, convention);
        assert!(loops >= 1, "a diagram with a vertex has at least one circle per state");
        max_loops = max_loops.max(loops);
        states.push((c as i64 - 2 * b_count, loops));
    }
    let circle = circle_weight();
    let mut powers = vec![LaurentPoly::one()];
    for i in 1..max_loops {
        let next = &powers[i - 1] * &circle;
        powers.push(next);
    }
    let mut total = LaurentPoly::zero();
    for (a_exp, loops) in states {
        total = total + LaurentPoly::monomial(a_exp, 1) * &powers[loops - 1];
    }
    total
}

/// Span of the bracket and its quarter, the diagram-independent crossing
/// count hiding in it: a reduced alternating diagram of a link realizes
/// exactly `span/4` crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanReport {
    pub span: i64,
    pub span_over_four: i64,
}

pub fn bracket_span(bracket: &LaurentPoly) -> Result<SpanReport, DiagramError> {
    let info = bracket.degree_info().ok_or(DiagramError::ZeroBracket)?;
    if info.span % 4 != 0 {
        return Err(DiagramError::RaggedSpan { span: info.span });
    }
    Ok(SpanReport { span: info.span, span_over_four: info.span / 4 })
}

/// Computes the bracket of `d` and reports its span.
pub fn span_k(d: &MedialDiagram) -> Result<SpanReport, DiagramError> {
    bracket_span(&kauffman_bracket(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::polynomials::q_polynomial;

    #[test]
    fn bracket_equals_edge_sign_recursion_on_the_corpus() {
        for plane in corpus::all() {
            assert_eq!(
                kauffman_bracket(&build_medial(&plane)),
                q_polynomial(plane.underlying()),
                "bracket disagrees with the recursion on {}",
                plane.name()
            );
        }
    }

    #[test]
    fn bracket_equals_edge_sign_recursion_with_mixed_signs() {
        let variants = [
            corpus::c(2).with_sign(EdgeId(1), Sign::Minus).unwrap(),
            corpus::c(4).with_sign(EdgeId(2), Sign::Minus).unwrap(),
            corpus::theta3().with_sign(EdgeId(3), Sign::Minus).unwrap(),
            corpus::diamond().with_all_signs(Sign::Minus),
            corpus::h_split().with_sign(EdgeId(4), Sign::Minus).unwrap(),
            corpus::b(1).with_sign(EdgeId(1), Sign::Minus).unwrap(),
        ];
        for plane in variants {
            assert_eq!(
                kauffman_bracket(&build_medial(&plane)),
                q_polynomial(plane.underlying()),
                "bracket disagrees with the recursion on a variant of {}",
                plane.name()
            );
        }
    }

    #[test]
    fn closed_strand_counts() {
        let expect = [
            ("c2", 2usize),
            ("c3", 1),
            ("c4", 2),
            ("c5", 1),
            ("theta3", 1),
            ("m4", 2),
        ];
        for (name, components) in expect {
            let plane = corpus::load(name).unwrap();
            assert_eq!(
                build_medial(&plane).link_components(),
                components,
                "component count of the medial of {name}"
            );
        }
        assert_eq!(build_medial(&corpus::e(3)).link_components(), 3);
        assert_eq!(build_medial(&corpus::b(1)).link_components(), 1);
    }

    #[test]
    fn edgeless_graphs_give_unlinked_circles() {
        let d = build_medial(&corpus::e(3));
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_circles(), 3);
        assert_eq!(kauffman_bracket(&d).to_string(), "A^-4 + 2 + A^4");
    }

    #[test]
    fn one_crossing_changes_collapse_the_span() {
        let hopf = build_medial(&corpus::c(2));
        let before = span_k(&hopf).unwrap();
        assert_eq!((before.span, before.span_over_four), (8, 2));
        let changed = build_medial(&corpus::c(2).with_sign(EdgeId(1), Sign::Minus).unwrap());
        let after = span_k(&changed).unwrap();
        assert_eq!((after.span, after.span_over_four), (4, 1));
    }

    #[test]
    fn mirrored_convention_is_caught_by_a_single_crossing() {
        let b1 = corpus::b(1);
        let honest = kauffman_bracket_with(&build_medial(&b1), SmoothingConvention::Standard);
        let mirrored = kauffman_bracket_with(&build_medial(&b1), SmoothingConvention::Mirrored);
        assert_eq!(honest, q_polynomial(b1.underlying()));
        assert_ne!(mirrored, honest);
        assert_eq!(mirrored.to_string(), "-A^3");

        // The two-crossing cycle cannot tell the conventions apart: its four
        // states pair up symmetrically.
        let c2 = corpus::c(2);
        assert_eq!(
            kauffman_bracket_with(&build_medial(&c2), SmoothingConvention::Mirrored),
            kauffman_bracket_with(&build_medial(&c2), SmoothingConvention::Standard)
        );
    }

    #[test]
    fn caps_reject_oversized_diagrams() {
        let d = build_medial(&corpus::c(5));
        assert!(matches!(
            kauffman_bracket_capped(&d, 4),
            Err(DiagramError::CapExceeded { crossings: 5, cap: 4 })
        ));
        assert!(kauffman_bracket_capped(&d, 5).is_ok());
    }

    #[test]
    fn span_reports_reject_ragged_input() {
        assert_eq!(bracket_span(&LaurentPoly::zero()), Err(DiagramError::ZeroBracket));
        let ragged = LaurentPoly::from_terms([(0i64, 1i32), (3, 1)]);
        assert_eq!(bracket_span(&ragged), Err(DiagramError::RaggedSpan { span: 3 }));
    }
}
