//! Pairwise-disconnecting edge sets and the extreme coefficients they pin
//! down.
//!
//! A pairwise-disconnecting set (pds) of a connected bridgeless graph is an
//! edge set, of size at least two, in which every two edges together
//! disconnect the graph. Maximal pds are in bijection with the maximal
//! parallel classes of the dual graph, and the two families control the
//! second coefficient at each end of `T_G(-t, -t^{-1})`, just as parallel
//! classes control the other end.

use crate::plane_graph::{EdgeId, GraphError, Sign, SignedGraph, VertexId};
use num_bigint::BigInt;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutsetError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has a bridge ({0}) but the operation requires a bridgeless graph")]
    HasBridges(EdgeId),
    #[error("a pairwise-disconnecting set needs at least two edges")]
    SetTooSmall,
    #[error("edge {0} is not in the candidate set's graph")]
    MissingEdge(EdgeId),
    #[error("{0}")]
    Precondition(String),
}

fn require_connected(g: &SignedGraph) -> Result<(), CutsetError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected.into());
    }
    Ok(())
}

fn require_bridgeless(g: &SignedGraph) -> Result<(), CutsetError> {
    if let Some(&e) = g.bridges().first() {
        return Err(CutsetError::HasBridges(e));
    }
    Ok(())
}

/// Tests whether `s` is a pairwise-disconnecting set of the connected
/// bridgeless graph `g`: every 2-subset of `s` disconnects `g`. The result
/// is cross-checked against the two equivalent criteria (component count
/// after deleting all of `s` equals `|s|`; the deleted edges string the
/// remaining components into a single cycle), which must agree.
pub fn is_pds(g: &SignedGraph, s: &BTreeSet<EdgeId>) -> Result<bool, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    if s.len() < 2 {
        return Err(CutsetError::SetTooSmall);
    }
    for &e in s {
        if g.ends(e).is_err() {
            return Err(CutsetError::MissingEdge(e));
        }
    }
    let edges: Vec<EdgeId> = s.iter().copied().collect();
    let mut pairwise = true;
    'pairs: for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            if g.components_without(&BTreeSet::from([a, b])) == 1 {
                pairwise = false;
                break 'pairs;
            }
        }
    }

    let (k, comp_of) = {
        let without = g.delete_edges(s.iter().copied()).expect("edges were checked");
        without.components()
    };
    let count_matches = k == s.len();

    // Cycle pattern: contracting each remaining component to a point must
    // turn the deleted edges into a single cycle through all of them.
    let cycle_pattern = count_matches && {
        let mut degree = vec![0usize; k];
        let mut quotient = SignedGraph::new();
        let mut ok = true;
        for (i, &e) in edges.iter().enumerate() {
            let ends = g.ends(e).expect("edges were checked");
            let (cu, cv) = (comp_of[&ends.u], comp_of[&ends.v]);
            if cu == cv {
                ok = false;
                break;
            }
            degree[cu] += 1;
            degree[cv] += 1;
            quotient.add_edge(EdgeId(i as u32), VertexId(cu as u32), VertexId(cv as u32), Sign::Plus);
        }
        ok && degree.iter().all(|&d| d == 2)
            && quotient.vertex_count() == k
            && quotient.is_connected()
    };

    assert_eq!(
        pairwise, count_matches,
        "pairwise disconnection and the component-count criterion disagree"
    );
    assert_eq!(
        pairwise, cycle_pattern,
        "pairwise disconnection and the cycle-pattern criterion disagree"
    );
    Ok(pairwise)
}

/// The maximal pairwise-disconnecting set containing `e`, if `e` lies in any
/// pds at all: `e` together with the bridges of `g - e`.
pub fn maximal_pds_of_edge(
    g: &SignedGraph,
    e: EdgeId,
) -> Result<Option<BTreeSet<EdgeId>>, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    let without = g.delete_edge(e)?;
    let mut s = without.bridges();
    s.insert(e);
    Ok(if s.len() >= 2 { Some(s) } else { None })
}

/// All maximal pairwise-disconnecting sets, sorted by smallest member. The
/// family is checked on the way out: the sets must be pairwise disjoint,
/// each must be a pds, and deleting one must leave only bridgeless
/// components.
pub fn all_maximal_pds(g: &SignedGraph) -> Result<Vec<BTreeSet<EdgeId>>, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    let mut family: BTreeSet<BTreeSet<EdgeId>> = BTreeSet::new();
    for e in g.edge_ids() {
        if let Some(s) = maximal_pds_of_edge(g, e)? {
            family.insert(s);
        }
    }
    let family: Vec<BTreeSet<EdgeId>> = family.into_iter().collect();
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    for s in &family {
        assert!(
            s.iter().all(|e| seen.insert(*e)),
            "maximal pairwise-disconnecting sets must be pairwise disjoint"
        );
        assert!(is_pds(g, s)?, "constructed set fails the pds criteria");
        let rest = g.delete_edges(s.iter().copied()).expect("family edges exist");
        assert!(
            rest.bridges().is_empty(),
            "components left by a maximal pds must be bridgeless"
        );
    }
    Ok(family)
}

/// Degree and the two top coefficients at one end of `T_G(-t, -t^{-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TutteEnd {
    pub degree: i64,
    pub extreme_coeff: BigInt,
    pub second_coeff: BigInt,
}

/// `(-1)^k` as an exact integer.
pub fn parity(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// Top end of `T_G(-t, -t^{-1})` for a connected loopless graph: degree
/// `|V| - 1`, extreme coefficient `(-1)^{|V|-1}`, and second coefficient
/// `(-1)^{|V|-1} (|V| - 1 - |E| + sum (|I| - 1))` over maximal parallel
/// classes `I`.
pub fn dl_extreme_coeffs(g: &SignedGraph) -> Result<TutteEnd, CutsetError> {
    require_connected(g)?;
    let info = g.multiplicity_info()?;
    let v = g.vertex_count() as i64;
    let e = g.edge_count() as i64;
    let sign = parity(v - 1);
    let parallel_excess: i64 = info
        .maximal_multiple_edges
        .iter()
        .map(|class| class.len() as i64 - 1)
        .sum();
    Ok(TutteEnd {
        degree: v - 1,
        extreme_coeff: sign.clone(),
        second_coeff: sign * BigInt::from(v - 1 - e + parallel_excess),
    })
}

/// Bottom end of `T_G(-t, -t^{-1})` for a connected bridgeless graph: degree
/// `|V| - 1 - |E|`, extreme coefficient `(-1)^{|E|-|V|+1}`, and second
/// coefficient `(-1)^{|E|-|V|+1} (-|V| + 1 + sum (|S| - 1))` over maximal
/// pairwise-disconnecting sets `S`.
pub fn dual_extreme_coeffs(g: &SignedGraph) -> Result<TutteEnd, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    let v = g.vertex_count() as i64;
    let e = g.edge_count() as i64;
    let sign = parity(e - v + 1);
    let pds_excess: i64 = all_maximal_pds(g)?
        .iter()
        .map(|s| s.len() as i64 - 1)
        .sum();
    Ok(TutteEnd {
        degree: v - 1 - e,
        extreme_coeff: sign.clone(),
        second_coeff: sign * BigInt::from(-v + 1 + pds_excess),
    })
}

/// Counting check behind the second-lowest coefficient after a crossing
/// change: for a multiplicity-one edge `e = uv` of a connected bridgeless
/// loopless graph, the simplified edge counts of `g` and `g / e` differ by
/// one plus the number of common neighbors of `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsIdentity {
    pub simple_edges: usize,
    pub simple_edges_contracted: usize,
    pub common_neighbors: usize,
    pub holds: bool,
}

pub fn es_identity_check(g: &SignedGraph, e: EdgeId) -> Result<EsIdentity, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    let info = g.multiplicity_info()?;
    let mu = *info
        .multiplicity
        .get(&e)
        .ok_or(CutsetError::MissingEdge(e))?;
    if mu != 1 {
        return Err(CutsetError::Precondition(format!(
            "edge {e} has multiplicity {mu}, the identity needs multiplicity 1"
        )));
    }
    let ends = *g.ends(e)?;
    let common = g.common_neighbors(ends.u, ends.v)?.len();
    let contracted = g.contract_edge(e)?;
    let contracted_info = contracted.multiplicity_info()?;
    let simple_edges = info.distinct_pair_count;
    let simple_edges_contracted = contracted_info.distinct_pair_count;
    Ok(EsIdentity {
        simple_edges,
        simple_edges_contracted,
        common_neighbors: common,
        holds: simple_edges == simple_edges_contracted + 1 + common,
    })
}

/// Brute-force reference: every inclusion-maximal pds found by scanning all
/// edge subsets of size two or more. Exponential; test sizes only.
pub fn brute_force_maximal_pds(g: &SignedGraph) -> Result<Vec<BTreeSet<EdgeId>>, CutsetError> {
    require_connected(g)?;
    require_bridgeless(g)?;
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let n = edges.len();
    assert!(n <= 16, "brute-force pds search is for small graphs");
    let mut all: Vec<BTreeSet<EdgeId>> = Vec::new();
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) < 2 {
            continue;
        }
        let s: BTreeSet<EdgeId> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if is_pds(g, &s)? {
            all.push(s);
        }
    }
    let maximal: BTreeSet<BTreeSet<EdgeId>> = all
        .iter()
        .filter(|s| !all.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    Ok(maximal.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::polynomials::tutte_neg_eval;

    fn set(ids: &[u32]) -> BTreeSet<EdgeId> {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn cycle_edges_form_one_pds() {
        let c5 = corpus::c(5).underlying().clone();
        assert!(is_pds(&c5, &set(&[1, 2])).unwrap());
        assert!(is_pds(&c5, &set(&[1, 2, 3, 4, 5])).unwrap());
        assert_eq!(is_pds(&c5, &set(&[1])), Err(CutsetError::SetTooSmall));
        assert_eq!(
            all_maximal_pds(&c5).unwrap(),
            vec![set(&[1, 2, 3, 4, 5])]
        );
    }

    #[test]
    fn three_edge_connected_graphs_have_none() {
        let theta = corpus::theta3().underlying().clone();
        assert!(all_maximal_pds(&theta).unwrap().is_empty());
        assert!(!is_pds(&theta, &set(&[1, 2])).unwrap());
        let m4 = corpus::m4().underlying().clone();
        assert!(all_maximal_pds(&m4).unwrap().is_empty());
    }

    #[test]
    fn families_on_the_corpus() {
        let diamond = corpus::diamond().underlying().clone();
        assert_eq!(
            all_maximal_pds(&diamond).unwrap(),
            vec![set(&[1, 2]), set(&[3, 4])]
        );
        let bowtie = corpus::bowtie().underlying().clone();
        assert_eq!(
            all_maximal_pds(&bowtie).unwrap(),
            vec![set(&[1, 2, 3]), set(&[4, 5, 6])]
        );
        let hsplit = corpus::h_split().underlying().clone();
        assert_eq!(
            all_maximal_pds(&hsplit).unwrap(),
            vec![set(&[1, 2, 3]), set(&[4, 5]), set(&[6, 7, 8])]
        );
        assert_eq!(
            maximal_pds_of_edge(&diamond, EdgeId(5)).unwrap(),
            None,
            "the chord lies in no pairwise-disconnecting set"
        );
    }

    #[test]
    fn brute_force_agrees_on_the_corpus() {
        for plane in corpus::all() {
            let g = plane.underlying();
            if !g.is_connected() || !g.bridges().is_empty() || g.edge_count() == 0 {
                continue;
            }
            assert_eq!(
                all_maximal_pds(g).unwrap(),
                brute_force_maximal_pds(g).unwrap(),
                "family mismatch on {}",
                plane.name()
            );
        }
    }

    #[test]
    fn dual_family_matches_parallel_classes() {
        for plane in corpus::all() {
            let g = plane.underlying();
            if !g.is_connected() || !g.bridges().is_empty() || g.loop_edge().is_some() {
                continue;
            }
            let dual = plane.dual();
            let dual_classes = dual.underlying().multiplicity_info().unwrap();
            let expected_set: BTreeSet<BTreeSet<EdgeId>> =
                dual_classes.maximal_multiple_edges.into_iter().collect();
            let expected: Vec<BTreeSet<EdgeId>> = expected_set.into_iter().collect();
            assert_eq!(
                all_maximal_pds(g).unwrap(),
                expected,
                "pds family is not the dual's parallel classes on {}",
                plane.name()
            );
        }
    }

    #[test]
    fn top_end_coefficients() {
        let cases = [
            (corpus::c(3), 2i64, 1i64, -1i64),
            (corpus::theta3(), 1, -1, 0),
            (corpus::c(2), 1, -1, 0),
            (corpus::b(1), 1, -1, 0),
        ];
        for (plane, degree, extreme, second) in cases {
            let end = dl_extreme_coeffs(plane.underlying()).unwrap();
            assert_eq!(end.degree, degree, "{}", plane.name());
            assert_eq!(end.extreme_coeff, BigInt::from(extreme), "{}", plane.name());
            assert_eq!(end.second_coeff, BigInt::from(second), "{}", plane.name());
            let poly = tutte_neg_eval(plane.underlying());
            assert_eq!(poly.coeff(end.degree), end.extreme_coeff, "{}", plane.name());
            assert_eq!(poly.coeff(end.degree - 1), end.second_coeff, "{}", plane.name());
        }
    }

    #[test]
    fn bottom_end_coefficients() {
        let cases = [
            (corpus::c(3), -1i64, -1i64, 0i64),
            (corpus::theta3(), -2, 1, -1),
            (corpus::c(5), -1, -1, 0),
        ];
        for (plane, degree, extreme, second) in cases {
            let end = dual_extreme_coeffs(plane.underlying()).unwrap();
            assert_eq!(end.degree, degree, "{}", plane.name());
            assert_eq!(end.extreme_coeff, BigInt::from(extreme), "{}", plane.name());
            assert_eq!(end.second_coeff, BigInt::from(second), "{}", plane.name());
            let poly = tutte_neg_eval(plane.underlying());
            assert_eq!(poly.coeff(end.degree), end.extreme_coeff, "{}", plane.name());
            assert_eq!(poly.coeff(end.degree + 1), end.second_coeff, "{}", plane.name());
        }
    }

    #[test]
    fn loops_do_not_disturb_the_bottom_end() {
        // A loop multiplies the evaluated polynomial by -t^{-1}; the formulas
        // must track the shifted degree.
        let mut g = corpus::c(2).underlying().clone();
        g.add_edge(EdgeId(9), VertexId(1), VertexId(1), Sign::Plus);
        let end = dual_extreme_coeffs(&g).unwrap();
        let poly = tutte_neg_eval(&g);
        assert_eq!(end.degree, -2);
        assert_eq!(poly.coeff(end.degree), end.extreme_coeff);
        assert_eq!(poly.coeff(end.degree + 1), end.second_coeff);
    }

    #[test]
    fn disconnected_and_bridged_inputs_error() {
        let e2 = corpus::e(2).underlying().clone();
        assert!(matches!(
            all_maximal_pds(&e2),
            Err(CutsetError::Graph(GraphError::NotConnected))
        ));
        let b1 = corpus::b(1).underlying().clone();
        assert!(matches!(
            all_maximal_pds(&b1),
            Err(CutsetError::HasBridges(_))
        ));
        assert!(matches!(
            dual_extreme_coeffs(&b1),
            Err(CutsetError::HasBridges(_))
        ));
    }

    #[test]
    fn simplified_edge_counts() {
        let c5 = corpus::c(5).underlying().clone();
        let id = es_identity_check(&c5, EdgeId(1)).unwrap();
        assert_eq!((id.simple_edges, id.simple_edges_contracted, id.common_neighbors), (5, 4, 0));
        assert!(id.holds);

        let c3 = corpus::c(3).underlying().clone();
        let id = es_identity_check(&c3, EdgeId(1)).unwrap();
        assert_eq!((id.simple_edges, id.simple_edges_contracted, id.common_neighbors), (3, 1, 1));
        assert!(id.holds);

        let diamond = corpus::diamond().underlying().clone();
        let id = es_identity_check(&diamond, EdgeId(5)).unwrap();
        assert_eq!((id.simple_edges, id.simple_edges_contracted, id.common_neighbors), (5, 2, 2));
        assert!(id.holds);

        let theta = corpus::theta3().underlying().clone();
        assert!(matches!(
            es_identity_check(&theta, EdgeId(1)),
            Err(CutsetError::Precondition(_))
        ));
    }
}
