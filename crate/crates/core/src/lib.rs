//! Q-polynomials of signed plane graphs, Kauffman brackets of their medial
//! link diagrams, and a graph-side test for when changing one crossing of an
//! alternating link lowers its crossing number by exactly two.
//!
//! A reduced alternating diagram corresponds to a plane multigraph with all
//! edges positive; changing one crossing flips one edge's sign. Everything
//! the crossing-number question needs can then be read off the graph:
//! bridges, parallel edges, common neighbors, and pairwise-disconnecting
//! sets. The polynomial machinery is here both as the object of interest and
//! as a cross-check on the combinatorics, since every structural claim shows
//! up as a degree or coefficient of `Q`.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod cutsets;
pub mod diagram;
pub mod laurent;
pub mod plane_graph;
pub mod polynomials;
