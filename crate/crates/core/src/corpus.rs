//! Curated embedded test graphs.
//!
//! Every graph ships as a text file under `corpus/` in the crate root (handy
//! for driving the CLI) and is embedded here so library tests and the
//! self-test harness can load them without touching the filesystem. Cycles
//! and edgeless graphs are also available at any size via [`c`] and [`e`],
//! which generate the same text the files use.

use crate::plane_graph::SignedPlaneGraph;

/// `(name, file text)` for every shipped corpus graph.
pub const FILES: &[(&str, &str)] = &[
    ("e1", include_str!("../corpus/e1.g")),
    ("e2", include_str!("../corpus/e2.g")),
    ("e3", include_str!("../corpus/e3.g")),
    ("b1", include_str!("../corpus/b1.g")),
    ("c2", include_str!("../corpus/c2.g")),
    ("c3", include_str!("../corpus/c3.g")),
    ("c4", include_str!("../corpus/c4.g")),
    ("c5", include_str!("../corpus/c5.g")),
    ("c6", include_str!("../corpus/c6.g")),
    ("c7", include_str!("../corpus/c7.g")),
    ("c8", include_str!("../corpus/c8.g")),
    ("c9", include_str!("../corpus/c9.g")),
    ("theta3", include_str!("../corpus/theta3.g")),
    ("m4", include_str!("../corpus/m4.g")),
    ("diamond", include_str!("../corpus/diamond.g")),
    ("bowtie", include_str!("../corpus/bowtie.g")),
    ("hsplit", include_str!("../corpus/hsplit.g")),
];

/// Loads a shipped corpus graph by name.
pub fn load(name: &str) -> Option<SignedPlaneGraph> {
    let (_, text) = FILES.iter().find(|(n, _)| *n == name)?;
    Some(SignedPlaneGraph::parse(text).expect("corpus files are valid"))
}

/// Every shipped corpus graph, in `FILES` order.
pub fn all() -> Vec<SignedPlaneGraph> {
    FILES
        .iter()
        .map(|(_, text)| SignedPlaneGraph::parse(text).expect("corpus files are valid"))
        .collect()
}

fn edgeless_text(n: u32) -> String {
    let mut out = format!("graph e{n}\n");
    for v in 1..=n {
        out.push_str(&format!("vertex v{v}:\n"));
    }
    out
}

fn cycle_text(n: u32) -> String {
    let mut out = format!("graph c{n}\n");
    out.push_str(&format!("vertex v1: h{} h1\n", 2 * n));
    for i in 2..=n {
        out.push_str(&format!("vertex v{i}: h{} h{}\n", 2 * (i - 1), 2 * i - 1));
    }
    for i in 1..=n {
        out.push_str(&format!("edge e{i} + : h{} h{}\n", 2 * i - 1, 2 * i));
    }
    out
}

/// Edgeless graph on `n >= 1` vertices; its medial is an `n`-component unlink.
pub fn e(n: u32) -> SignedPlaneGraph {
    assert!(n >= 1);
    SignedPlaneGraph::parse(&edgeless_text(n)).unwrap()
}

/// Single positive bridge (`n` is fixed at 1; the argument keeps call sites
/// uniform with the other families).
pub fn b(n: u32) -> SignedPlaneGraph {
    assert_eq!(n, 1);
    load("b1").unwrap()
}

/// Positive cycle on `n >= 2` vertices; edge `e_i` joins `v_i` to `v_{i+1}`.
pub fn c(n: u32) -> SignedPlaneGraph {
    assert!(n >= 2);
    SignedPlaneGraph::parse(&cycle_text(n)).unwrap()
}

/// Two vertices joined by three positive parallel edges.
pub fn theta3() -> SignedPlaneGraph {
    load("theta3").unwrap()
}

/// Two vertices joined by four positive parallel edges.
pub fn m4() -> SignedPlaneGraph {
    load("m4").unwrap()
}

/// Four-cycle with one chord (`e5`); the chord endpoints share two neighbors.
pub fn diamond() -> SignedPlaneGraph {
    load("diamond").unwrap()
}

/// Two triangles sharing a single cut vertex.
pub fn bowtie() -> SignedPlaneGraph {
    load("bowtie").unwrap()
}

/// Two disjoint triangles joined by a parallel pair (`e4`, `e5`); deleting
/// that pair disconnects the graph.
pub fn h_split() -> SignedPlaneGraph {
    load("hsplit").unwrap()
}
