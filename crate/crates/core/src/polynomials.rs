//! The Q-polynomial of a signed graph and its companions.
//!
//! `Q` lives in `Z[A, A^{-1}]` and is computed by deletion/contraction: an
//! isolated vertex beyond the first contributes a factor `-A^2 - A^{-2}`, a
//! positive loop `-A^3`, a positive bridge `-A^{-3}` (negative edges swap `A`
//! and `A^{-1}`), and any other edge splits into a deletion and a contraction
//! term. For all-positive connected graphs the same polynomial falls out of
//! the Whitney rank expansion evaluated at `(-t, -t^{-1})` after substituting
//! `t = A^{-4}` and shifting by `A^{2|V| - |E| - 2}`, which this module uses
//! as an independent cross-check.

use crate::cutsets::{self, CutsetError};
use crate::laurent::LaurentPoly;
use crate::plane_graph::{EdgeId, GraphError, Sign, SignedGraph, VertexId};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use thiserror::Error;

/// Edge budget for the deletion/contraction recursion.
pub const DEFAULT_RECURSION_EDGE_CAP: usize = 16;
/// Edge budget for subset-expansion sums.
pub const DEFAULT_SUBSET_EDGE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cutset(#[from] CutsetError),
    #[error("graph has {edges} edges, over the cap of {cap}")]
    CapExceeded { edges: usize, cap: usize },
    #[error("{0}")]
    Precondition(String),
}

/// The weight of a closed curve: `-A^2 - A^{-2}`.
pub fn circle_weight() -> LaurentPoly {
    LaurentPoly::from_terms([(2i64, -1i32), (-2, -1)])
}

fn loop_factor(sign: Sign) -> LaurentPoly {
    match sign {
        Sign::Plus => LaurentPoly::monomial(3, -1),
        Sign::Minus => LaurentPoly::monomial(-3, -1),
    }
}

fn bridge_factor(sign: Sign) -> LaurentPoly {
    match sign {
        Sign::Plus => LaurentPoly::monomial(-3, -1),
        Sign::Minus => LaurentPoly::monomial(3, -1),
    }
}

fn pivot_weights(sign: Sign) -> (LaurentPoly, LaurentPoly) {
    let (a, a_inv) = (LaurentPoly::monomial(1, 1), LaurentPoly::monomial(-1, 1));
    match sign {
        Sign::Plus => (a_inv, a),
        Sign::Minus => (a, a_inv),
    }
}

/// Which edge the recursion splits on when no loop or bridge is available.
/// The polynomial itself does not depend on the choice; computing it both
/// ways is a useful self-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotOrder {
    LowestId,
    HighestId,
}

pub fn q_polynomial(g: &SignedGraph) -> LaurentPoly {
    q_polynomial_with_pivot(g, PivotOrder::LowestId)
}

pub fn q_polynomial_capped(g: &SignedGraph, cap: usize) -> Result<LaurentPoly, PolyError> {
    if g.edge_count() > cap {
        return Err(PolyError::CapExceeded { edges: g.edge_count(), cap });
    }
    Ok(q_polynomial(g))
}

pub fn q_polynomial_with_pivot(g: &SignedGraph, order: PivotOrder) -> LaurentPoly {
    assert!(g.vertex_count() > 0, "the polynomial needs at least one vertex");
    if g.edge_count() == 0 {
        return circle_weight().pow(g.vertex_count() as u32 - 1);
    }
    let ids: Vec<EdgeId> = match order {
        PivotOrder::LowestId => g.edge_ids().collect(),
        PivotOrder::HighestId => {
            let mut ids: Vec<EdgeId> = g.edge_ids().collect();
            ids.reverse();
            ids
        }
    };
    let bridges = g.bridges();
    for &e in &ids {
        let ends = *g.ends(e).expect("iterating existing edges");
        if ends.is_loop() {
            let rest = g.delete_edge(e).expect("edge exists");
            return loop_factor(ends.sign) * q_polynomial_with_pivot(&rest, order);
        }
        if bridges.contains(&e) {
            let rest = g.contract_edge(e).expect("bridges are not loops");
            return bridge_factor(ends.sign) * q_polynomial_with_pivot(&rest, order);
        }
    }
    let e = ids[0];
    let sign = g.ends(e).expect("edge exists").sign;
    let deleted = q_polynomial_with_pivot(&g.delete_edge(e).expect("edge exists"), order);
    let contracted =
        q_polynomial_with_pivot(&g.contract_edge(e).expect("pivot is not a loop"), order);
    let (delete_weight, contract_weight) = pivot_weights(sign);
    delete_weight * deleted + contract_weight * contracted
}

fn powers(base: &LaurentPoly, up_to: usize) -> Vec<LaurentPoly> {
    let mut table = vec![LaurentPoly::one()];
    for i in 1..=up_to {
        table.push(&table[i - 1] * base);
    }
    table
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whitney rank expansion of the Tutte polynomial evaluated at
/// `(x, y) = (-t, -t^{-1})`: the sum over edge subsets `F` of
/// `(-t - 1)^{k(F) - 1} (-t^{-1} - 1)^{|F| - |V| + k(F)}`. Signs are
/// ignored. Exponential in the edge count; see [`tutte_neg_eval_capped`].
pub fn tutte_neg_eval(g: &SignedGraph) -> LaurentPoly {
    assert!(g.vertex_count() > 0, "the expansion needs at least one vertex");
    let index: BTreeMap<VertexId, usize> =
        g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(_, ends)| (index[&ends.u], index[&ends.v]))
        .collect();
    let nv = index.len();
    let ne = edges.len();
    assert!(ne < 64, "subset masks are 64-bit");
    let xs = powers(&LaurentPoly::from_terms([(1i64, -1i32), (0, -1)]), nv);
    let ys = powers(&LaurentPoly::from_terms([(-1i64, -1i32), (0, -1)]), ne);
    let mut total = LaurentPoly::zero();
    for mask in 0u64..(1u64 << ne) {
        let mut parent: Vec<usize> = (0..nv).collect();
        let mut k = nv;
        let mut taken = 0usize;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                taken += 1;
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    k -= 1;
                }
            }
        }
        let nullity = taken + k - nv;
        total = total + &xs[k - 1] * &ys[nullity];
    }
    total
}

pub fn tutte_neg_eval_capped(g: &SignedGraph, cap: usize) -> Result<LaurentPoly, PolyError> {
    if g.edge_count() > cap {
        return Err(PolyError::CapExceeded { edges: g.edge_count(), cap });
    }
    Ok(tutte_neg_eval(g))
}

/// `Q` of a connected all-positive graph computed through the rank
/// expansion: substitute `t = A^{-4}` in [`tutte_neg_eval`] and multiply by
/// `A^{2|V| - |E| - 2}`.
pub fn q_via_tutte(g: &SignedGraph) -> Result<LaurentPoly, PolyError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected.into());
    }
    if !g.is_all_positive() {
        return Err(PolyError::Precondition(
            "the rank-expansion detour needs all edges positive".into(),
        ));
    }
    let e = g.edge_count() as i64;
    let v = g.vertex_count() as i64;
    let substituted = tutte_neg_eval(g).scale_exponents(-4);
    Ok(LaurentPoly::monomial(2 * v - e - 2, 1) * substituted)
}

/// `Q` of the graph with the sign of `e` reversed. When `e` is neither a
/// bridge nor a loop the result is also pinned down by two single-step
/// identities against `Q` of the original graph, its deletion, and its
/// contraction; both are asserted.
pub fn q_after_flip(g: &SignedGraph, e: EdgeId) -> Result<LaurentPoly, PolyError> {
    let ends = *g.ends(e)?;
    let flipped = g.with_sign(e, ends.sign.flipped())?;
    let q_flipped = q_polynomial(&flipped);
    if !ends.is_loop() && !g.bridges().contains(&e) {
        let q = q_polynomial(g);
        let q_del = q_polynomial(&g.delete_edge(e)?);
        let q_con = q_polynomial(&g.contract_edge(e)?);
        let up = |k: i64| LaurentPoly::monomial(k, 1);
        let (via_contract, via_delete) = match ends.sign {
            Sign::Plus => (
                up(2) * &q + (up(-1) - up(3)) * &q_con,
                up(-2) * &q + (up(1) - up(-3)) * &q_del,
            ),
            Sign::Minus => (
                up(-2) * &q + (up(1) - up(-3)) * &q_con,
                up(2) * &q + (up(-1) - up(3)) * &q_del,
            ),
        };
        assert_eq!(q_flipped, via_contract, "single-step identity through the contraction");
        assert_eq!(q_flipped, via_delete, "single-step identity through the deletion");
    }
    Ok(q_flipped)
}

/// The four extreme coefficients of `Q` for a connected bridgeless loopless
/// all-positive graph, predicted without computing the polynomial. Each pair
/// is `(exponent of A, coefficient)`; the inner two sit four below and four
/// above the outer two, with coefficients controlled by maximal
/// pairwise-disconnecting sets and maximal parallel classes respectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremePredictions {
    pub highest: (i64, BigInt),
    pub second_highest: (i64, BigInt),
    pub second_lowest: (i64, BigInt),
    pub lowest: (i64, BigInt),
}

pub fn extreme_coeff_predictions(g: &SignedGraph) -> Result<ExtremePredictions, PolyError> {
    if !g.is_all_positive() {
        return Err(PolyError::Precondition(
            "extreme-coefficient predictions need all edges positive".into(),
        ));
    }
    if let Some(e) = g.loop_edge() {
        return Err(PolyError::Precondition(format!(
            "extreme-coefficient predictions need a loopless graph, found loop {e}"
        )));
    }
    let top = cutsets::dl_extreme_coeffs(g)?;
    let bottom = cutsets::dual_extreme_coeffs(g)?;
    let shift = 2 * g.vertex_count() as i64 - g.edge_count() as i64 - 2;
    let a_deg = |t_deg: i64| -4 * t_deg + shift;
    Ok(ExtremePredictions {
        highest: (a_deg(bottom.degree), bottom.extreme_coeff),
        second_highest: (a_deg(bottom.degree) - 4, bottom.second_coeff),
        second_lowest: (a_deg(top.degree) + 4, top.second_coeff),
        lowest: (a_deg(top.degree), top.extreme_coeff),
    })
}
