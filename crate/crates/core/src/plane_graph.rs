//! Signed multigraphs and their plane embeddings.
//!
//! Two layers live here. [`SignedGraph`] is the abstract object: vertices,
//! signed edges (loops and parallels allowed), and the structural queries the
//! rest of the crate leans on (bridges, components, multiplicities, common
//! neighbors). [`SignedPlaneGraph`] adds a rotation system: a counterclockwise
//! cyclic order of half-edges around each vertex. Faces, duals, and medial
//! diagrams are read off the rotation system; everything else only sees the
//! underlying graph.
//!
//! Every constructor validates that the rotation system is genuinely planar
//! by checking Euler's formula `v - e + f = 2` on each connected component.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct HalfEdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}
impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}
impl fmt::Display for HalfEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0)
    }
}

impl EdgeId {
    /// Accepts `e7` or a bare `7`, as written in graph files and CLI flags.
    pub fn parse_token(token: &str) -> Option<EdgeId> {
        parse_id(token, 'e').map(EdgeId)
    }
}

fn parse_id(token: &str, prefix: char) -> Option<u32> {
    let digits = token.strip_prefix(prefix).unwrap_or(token);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("cannot contract loop {0}")]
    ContractLoop(EdgeId),
    #[error("graph has a loop ({0}) but the operation requires a loopless graph")]
    LoopsPresent(EdgeId),
    #[error("operation requires a connected graph")]
    NotConnected,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid embedding: {0}")]
    Embedding(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

/// Endpoints and sign of one edge. Loops have `u == v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeEnds {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl EdgeEnds {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Abstract signed multigraph. All transformations are pure: they return a
/// new graph and keep the ids of surviving vertices and edges stable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignedGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, EdgeEnds>,
}

impl SignedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Inserts an edge, creating its endpoints as needed.
    pub fn add_edge(&mut self, e: EdgeId, u: VertexId, v: VertexId, sign: Sign) {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert(e, EdgeEnds { u, v, sign });
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeEnds)> {
        self.edges.iter().map(|(&e, ends)| (e, ends))
    }

    pub fn ends(&self, e: EdgeId) -> Result<&EdgeEnds, GraphError> {
        self.edges.get(&e).ok_or(GraphError::UnknownEdge(e))
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool, GraphError> {
        Ok(self.ends(e)?.is_loop())
    }

    pub fn is_all_positive(&self) -> bool {
        self.edges.values().all(|ends| ends.sign == Sign::Plus)
    }

    pub fn loop_edge(&self) -> Option<EdgeId> {
        self.edges.iter().find(|(_, ends)| ends.is_loop()).map(|(&e, _)| e)
    }

    pub fn with_sign(&self, e: EdgeId, sign: Sign) -> Result<Self, GraphError> {
        let mut out = self.clone();
        out.edges.get_mut(&e).ok_or(GraphError::UnknownEdge(e))?.sign = sign;
        Ok(out)
    }

    /// All signs forced to one value.
    pub fn with_all_signs(&self, sign: Sign) -> Self {
        let mut out = self.clone();
        for ends in out.edges.values_mut() {
            ends.sign = sign;
        }
        out
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Self, GraphError> {
        let mut out = self.clone();
        out.edges.remove(&e).ok_or(GraphError::UnknownEdge(e))?;
        Ok(out)
    }

    pub fn delete_edges<I: IntoIterator<Item = EdgeId>>(&self, iter: I) -> Result<Self, GraphError> {
        let mut out = self.clone();
        for e in iter {
            out.edges.remove(&e).ok_or(GraphError::UnknownEdge(e))?;
        }
        Ok(out)
    }

    /// Contracts a non-loop edge: its endpoints merge into the smaller vertex
    /// id, parallel edges become loops, every other edge id survives.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Self, GraphError> {
        let ends = *self.ends(e)?;
        if ends.is_loop() {
            return Err(GraphError::ContractLoop(e));
        }
        let keep = ends.u.min(ends.v);
        let gone = ends.u.max(ends.v);
        let mut out = SignedGraph::new();
        for &v in &self.vertices {
            out.add_vertex(if v == gone { keep } else { v });
        }
        for (&id, old) in &self.edges {
            if id == e {
                continue;
            }
            let remap = |w: VertexId| if w == gone { keep } else { w };
            out.edges.insert(
                id,
                EdgeEnds { u: remap(old.u), v: remap(old.v), sign: old.sign },
            );
        }
        Ok(out)
    }

    fn adjacency(&self) -> BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> {
        let mut adj: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, ends) in &self.edges {
            if ends.is_loop() {
                continue;
            }
            adj.get_mut(&ends.u).unwrap().push((ends.v, e));
            adj.get_mut(&ends.v).unwrap().push((ends.u, e));
        }
        adj
    }

    /// Number of connected components and the component index of each vertex,
    /// numbered in increasing order of their smallest vertex.
    pub fn components(&self) -> (usize, BTreeMap<VertexId, usize>) {
        let adj = self.adjacency();
        let mut comp = BTreeMap::new();
        let mut count = 0;
        for &start in &self.vertices {
            if comp.contains_key(&start) {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            comp.insert(start, count);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adj[&u] {
                    if !comp.contains_key(&w) {
                        comp.insert(w, count);
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn component_count(&self) -> usize {
        self.components().0
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_count() == 1
    }

    /// Bridge edges, found by one depth-first low-link pass. Parallel edges
    /// are distinguished by id, so neither of a parallel pair is a bridge;
    /// loops are never bridges.
    pub fn bridges(&self) -> BTreeSet<EdgeId> {
        let adj = self.adjacency();
        let index: BTreeMap<VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = index.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut timer = 0usize;
        let mut out = BTreeSet::new();

        // Iterative DFS; each stack frame remembers the edge it was entered by.
        struct Frame {
            vertex: VertexId,
            entry_edge: Option<EdgeId>,
            next_child: usize,
        }
        for &start in &self.vertices {
            if disc[index[&start]] != usize::MAX {
                continue;
            }
            let mut stack = vec![Frame { vertex: start, entry_edge: None, next_child: 0 }];
            disc[index[&start]] = timer;
            low[index[&start]] = timer;
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let u = frame.vertex;
                let ui = index[&u];
                if frame.next_child < adj[&u].len() {
                    let (w, e) = adj[&u][frame.next_child];
                    frame.next_child += 1;
                    if Some(e) == frame.entry_edge {
                        continue;
                    }
                    let wi = index[&w];
                    if disc[wi] == usize::MAX {
                        disc[wi] = timer;
                        low[wi] = timer;
                        timer += 1;
                        stack.push(Frame { vertex: w, entry_edge: Some(e), next_child: 0 });
                    } else {
                        low[ui] = low[ui].min(disc[wi]);
                    }
                } else {
                    let entry = frame.entry_edge;
                    let reach = low[ui];
                    stack.pop();
                    if let (Some(parent), Some(e)) = (stack.last(), entry) {
                        let pi = index[&parent.vertex];
                        low[pi] = low[pi].min(reach);
                        if reach > disc[pi] {
                            out.insert(e);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    /// Component count after deleting an edge set, without building the
    /// intermediate graph.
    pub fn components_without(&self, removed: &BTreeSet<EdgeId>) -> usize {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, ends) in &self.edges {
            if ends.is_loop() || removed.contains(&e) {
                continue;
            }
            adj.get_mut(&ends.u).unwrap().push(ends.v);
            adj.get_mut(&ends.v).unwrap().push(ends.u);
        }
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[&u] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        count
    }

    /// Distinct vertices adjacent to both `u` and `v`, excluding `u` and `v`
    /// themselves.
    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Result<BTreeSet<VertexId>, GraphError> {
        for w in [u, v] {
            if !self.vertices.contains(&w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        Ok(self
            .neighbors(u)
            .intersection(&self.neighbors(v))
            .copied()
            .filter(|w| *w != u && *w != v)
            .collect())
    }

    pub fn neighbors(&self, u: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for ends in self.edges.values() {
            if ends.is_loop() {
                continue;
            }
            if ends.u == u {
                out.insert(ends.v);
            } else if ends.v == u {
                out.insert(ends.u);
            }
        }
        out
    }

    /// Non-loop edges sharing both endpoints with `e`, excluding `e` itself.
    pub fn parallel_edges(&self, e: EdgeId) -> Result<Vec<EdgeId>, GraphError> {
        let ends = *self.ends(e)?;
        if ends.is_loop() {
            return Ok(Vec::new());
        }
        let pair = (ends.u.min(ends.v), ends.u.max(ends.v));
        Ok(self
            .edges
            .iter()
            .filter(|(&id, other)| {
                id != e && !other.is_loop() && (other.u.min(other.v), other.u.max(other.v)) == pair
            })
            .map(|(&id, _)| id)
            .collect())
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.edges
            .values()
            .map(|ends| {
                if ends.is_loop() {
                    if ends.u == u {
                        2
                    } else {
                        0
                    }
                } else {
                    (ends.u == u) as usize + (ends.v == u) as usize
                }
            })
            .sum()
    }

    /// Edge multiplicities grouped by endpoint pair; requires a loopless
    /// graph, where "parallel" is unambiguous.
    pub fn multiplicity_info(&self) -> Result<MultiplicityInfo, GraphError> {
        if let Some(e) = self.loop_edge() {
            return Err(GraphError::LoopsPresent(e));
        }
        let mut by_pair: BTreeMap<(VertexId, VertexId), BTreeSet<EdgeId>> = BTreeMap::new();
        for (&e, ends) in &self.edges {
            let pair = (ends.u.min(ends.v), ends.u.max(ends.v));
            by_pair.entry(pair).or_default().insert(e);
        }
        let mut classes: Vec<BTreeSet<EdgeId>> = by_pair.into_values().collect();
        classes.sort_by_key(|class| *class.first().unwrap());
        let mut multiplicity = BTreeMap::new();
        for class in &classes {
            for &e in class {
                multiplicity.insert(e, class.len());
            }
        }
        let maximal_multiple_edges =
            classes.iter().filter(|c| c.len() >= 2).cloned().collect();
        Ok(MultiplicityInfo {
            distinct_pair_count: classes.len(),
            multiplicity,
            classes,
            maximal_multiple_edges,
        })
    }

    /// The structural predicates the whole-graph checks read.
    pub fn connectivity(&self) -> ConnectivityReport {
        let connected = self.is_connected();
        let bridgeless = self.is_bridgeless();
        let two_edge_connected = connected && bridgeless;
        let minimal_two_edge_connected = two_edge_connected
            && self.edge_ids().all(|e| {
                let smaller = self.delete_edge(e).unwrap();
                !(smaller.is_connected() && smaller.is_bridgeless())
            });
        let has_loop = self.loop_edge().is_some();
        let mut pair_mult: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for ends in self.edges.values() {
            if !ends.is_loop() {
                *pair_mult.entry((ends.u.min(ends.v), ends.u.max(ends.v))).or_default() += 1;
            }
        }
        let simple = !has_loop && pair_mult.values().all(|&m| m == 1);

        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let adjacent = |a: VertexId, b: VertexId| {
            pair_mult.contains_key(&(a.min(b), a.max(b)))
        };
        let mult = |a: VertexId, b: VertexId| pair_mult.get(&(a.min(b), a.max(b))).copied().unwrap_or(0);
        let mut triangle = None;
        let mut quasi_simple_triangle = None;
        'outer: for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if !adjacent(a, b) {
                    continue;
                }
                for &c in verts.iter().skip(j + 1) {
                    if adjacent(a, c) && adjacent(b, c) {
                        triangle.get_or_insert([a, b, c]);
                        if mult(a, b) == 1 || mult(a, c) == 1 || mult(b, c) == 1 {
                            quasi_simple_triangle = Some([a, b, c]);
                            break 'outer;
                        }
                    }
                }
            }
        }
        ConnectivityReport {
            connected,
            bridgeless,
            two_edge_connected,
            minimal_two_edge_connected,
            simple,
            triangle_free: triangle.is_none(),
            quasi_simple_triangle_free: quasi_simple_triangle.is_none(),
            quasi_simple_triangle,
        }
    }
}

/// Parallel-edge structure of a loopless graph.
///
/// `classes` has one entry per distinct endpoint pair (so its length is the
/// number of edges of the underlying simple graph); `maximal_multiple_edges`
/// keeps only the classes of two or more mutually parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityInfo {
    pub multiplicity: BTreeMap<EdgeId, usize>,
    pub classes: Vec<BTreeSet<EdgeId>>,
    pub maximal_multiple_edges: Vec<BTreeSet<EdgeId>>,
    pub distinct_pair_count: usize,
}

/// A 2-edge-connected graph is connected and bridgeless; it is minimal when
/// deleting any single edge destroys 2-edge-connectivity. A quasi-simple
/// triangle is a triangle on three distinct vertices in which at least one
/// side has multiplicity one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub bridgeless: bool,
    pub two_edge_connected: bool,
    pub minimal_two_edge_connected: bool,
    pub simple: bool,
    pub triangle_free: bool,
    pub quasi_simple_triangle_free: bool,
    pub quasi_simple_triangle: Option<[VertexId; 3]>,
}

/// Signed multigraph with a planar rotation system.
///
/// `rotations[v]` lists the half-edges leaving `v` in counterclockwise order;
/// the sequence is cyclic, stored rotated so its smallest id comes first, so
/// two embeddings differing only by a cyclic shift compare equal.
#[derive(Debug, Clone)]
pub struct SignedPlaneGraph {
    name: String,
    graph: SignedGraph,
    rotations: BTreeMap<VertexId, Vec<HalfEdgeId>>,
    edge_halves: BTreeMap<EdgeId, (HalfEdgeId, HalfEdgeId)>,
    half_edge: BTreeMap<HalfEdgeId, EdgeId>,
    half_vertex: BTreeMap<HalfEdgeId, VertexId>,
}

impl PartialEq for SignedPlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        // The name is a label, not structure.
        self.graph == other.graph
            && self.rotations == other.rotations
            && self.edge_halves == other.edge_halves
    }
}
impl Eq for SignedPlaneGraph {}

impl SignedPlaneGraph {
    /// Builds and validates an embedded graph. Rejects inconsistent half-edge
    /// data and any rotation system whose face count violates Euler's formula
    /// on some component.
    pub fn new(
        name: impl Into<String>,
        rotations: Vec<(VertexId, Vec<HalfEdgeId>)>,
        edges: Vec<(EdgeId, Sign, HalfEdgeId, HalfEdgeId)>,
    ) -> Result<Self, GraphError> {
        let name = name.into();
        let mut rot_map: BTreeMap<VertexId, Vec<HalfEdgeId>> = BTreeMap::new();
        let mut half_vertex: BTreeMap<HalfEdgeId, VertexId> = BTreeMap::new();
        for (v, halves) in rotations {
            if rot_map.contains_key(&v) {
                return Err(GraphError::Embedding(format!("vertex {v} declared twice")));
            }
            for &h in &halves {
                if half_vertex.insert(h, v).is_some() {
                    return Err(GraphError::Embedding(format!(
                        "half-edge {h} appears in more than one rotation"
                    )));
                }
            }
            rot_map.insert(v, halves);
        }
        if rot_map.is_empty() {
            return Err(GraphError::Embedding("graph has no vertices".into()));
        }

        let mut graph = SignedGraph::new();
        for &v in rot_map.keys() {
            graph.add_vertex(v);
        }
        let mut edge_halves = BTreeMap::new();
        let mut half_edge: BTreeMap<HalfEdgeId, EdgeId> = BTreeMap::new();
        for (e, sign, h1, h2) in edges {
            if edge_halves.contains_key(&e) {
                return Err(GraphError::Embedding(format!("edge {e} declared twice")));
            }
            if h1 == h2 {
                return Err(GraphError::Embedding(format!(
                    "edge {e} lists the same half-edge twice"
                )));
            }
            for h in [h1, h2] {
                if !half_vertex.contains_key(&h) {
                    return Err(GraphError::Embedding(format!(
                        "edge {e} references half-edge {h} missing from every rotation"
                    )));
                }
                if half_edge.insert(h, e).is_some() {
                    return Err(GraphError::Embedding(format!(
                        "half-edge {h} belongs to more than one edge"
                    )));
                }
            }
            edge_halves.insert(e, (h1, h2));
            graph.add_edge(e, half_vertex[&h1], half_vertex[&h2], sign);
        }
        for &h in half_vertex.keys() {
            if !half_edge.contains_key(&h) {
                return Err(GraphError::Embedding(format!(
                    "half-edge {h} sits in a rotation but belongs to no edge"
                )));
            }
        }

        for halves in rot_map.values_mut() {
            canonicalize_rotation(halves);
        }

        let plane = Self {
            name,
            graph,
            rotations: rot_map,
            edge_halves,
            half_edge,
            half_vertex,
        };
        plane.check_euler()?;
        Ok(plane)
    }

    fn check_euler(&self) -> Result<(), GraphError> {
        let (_, comp_of) = self.graph.components();
        let mut v_count: BTreeMap<usize, i64> = BTreeMap::new();
        let mut e_count: BTreeMap<usize, i64> = BTreeMap::new();
        let mut f_count: BTreeMap<usize, i64> = BTreeMap::new();
        for (&v, &c) in &comp_of {
            *v_count.entry(c).or_default() += 1;
            if self.rotations[&v].is_empty() {
                *f_count.entry(c).or_default() += 1;
            }
        }
        for ends in self.graph.edges.values() {
            *e_count.entry(comp_of[&ends.u]).or_default() += 1;
        }
        for walk in self.faces() {
            let c = comp_of[&self.half_vertex[&walk[0]]];
            *f_count.entry(c).or_default() += 1;
        }
        for (&c, &v) in &v_count {
            let e = e_count.get(&c).copied().unwrap_or(0);
            let f = f_count.get(&c).copied().unwrap_or(0);
            if v - e + f != 2 {
                return Err(GraphError::Embedding(format!(
                    "rotation system is not planar: component has v={v}, e={e}, f={f}"
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn underlying(&self) -> &SignedGraph {
        &self.graph
    }

    pub fn rotation(&self, v: VertexId) -> Result<&[HalfEdgeId], GraphError> {
        self.rotations
            .get(&v)
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn halves(&self, e: EdgeId) -> Result<(HalfEdgeId, HalfEdgeId), GraphError> {
        self.edge_halves.get(&e).copied().ok_or(GraphError::UnknownEdge(e))
    }

    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        self.half_edge[&h]
    }

    pub fn base_vertex(&self, h: HalfEdgeId) -> VertexId {
        self.half_vertex[&h]
    }

    pub fn twin(&self, h: HalfEdgeId) -> HalfEdgeId {
        let (h1, h2) = self.edge_halves[&self.half_edge[&h]];
        if h == h1 {
            h2
        } else {
            h1
        }
    }

    pub fn rot_next(&self, h: HalfEdgeId) -> HalfEdgeId {
        let rot = &self.rotations[&self.half_vertex[&h]];
        let i = rot.iter().position(|&x| x == h).unwrap();
        rot[(i + 1) % rot.len()]
    }

    pub fn rot_prev(&self, h: HalfEdgeId) -> HalfEdgeId {
        let rot = &self.rotations[&self.half_vertex[&h]];
        let i = rot.iter().position(|&x| x == h).unwrap();
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub fn with_sign(&self, e: EdgeId, sign: Sign) -> Result<Self, GraphError> {
        let mut out = self.clone();
        out.graph = self.graph.with_sign(e, sign)?;
        Ok(out)
    }

    /// All signs forced to one value, embedding unchanged.
    pub fn with_all_signs(&self, sign: Sign) -> Self {
        let mut out = self.clone();
        out.graph = self.graph.with_all_signs(sign);
        out
    }

    /// Face walks of the embedding. Each walk lists the darts (half-edges
    /// read as departures from their base vertex) met when tracing the face;
    /// the successor of a dart is the rotation successor of its twin. Walks
    /// start at their smallest dart and are sorted by it.
    pub fn faces(&self) -> Vec<Vec<HalfEdgeId>> {
        let mut unvisited: BTreeSet<HalfEdgeId> = self.half_edge.keys().copied().collect();
        let mut walks = Vec::new();
        while let Some(&start) = unvisited.iter().next() {
            let mut walk = Vec::new();
            let mut dart = start;
            loop {
                unvisited.remove(&dart);
                walk.push(dart);
                dart = self.rot_next(self.twin(dart));
                if dart == start {
                    break;
                }
            }
            walks.push(walk);
        }
        walks
    }

    /// Componentwise planar dual: one vertex per face, one edge per primal
    /// edge with the same id and flipped sign, embedded with the face walks
    /// as rotations. Primal half-edge ids double as the dual's.
    pub fn dual(&self) -> SignedPlaneGraph {
        let walks = self.faces();
        let mut rotations: Vec<(VertexId, Vec<HalfEdgeId>)> = Vec::new();
        let mut face_of: BTreeMap<HalfEdgeId, VertexId> = BTreeMap::new();
        for (i, walk) in walks.iter().enumerate() {
            let fv = VertexId(i as u32 + 1);
            for &dart in walk {
                face_of.insert(dart, fv);
            }
            rotations.push((fv, walk.clone()));
        }
        // Isolated primal vertices are their own face: an isolated dual vertex.
        let mut next = walks.len() as u32 + 1;
        for (v, rot) in &self.rotations {
            if rot.is_empty() {
                let _ = v;
                rotations.push((VertexId(next), Vec::new()));
                next += 1;
            }
        }
        let edges = self
            .edge_halves
            .iter()
            .map(|(&e, &(h1, h2))| (e, self.graph.edges[&e].sign.flipped(), h1, h2))
            .collect();
        SignedPlaneGraph::new(format!("{}_dual", self.name), rotations, edges)
            .expect("the dual of a planar rotation system is planar")
    }

    /// Deletes an edge, leaving the rest of the embedding untouched.
    pub fn delete_edge(&self, e: EdgeId) -> Result<Self, GraphError> {
        let (h1, h2) = self.halves(e)?;
        let mut rotations: Vec<(VertexId, Vec<HalfEdgeId>)> = Vec::new();
        for (&v, rot) in &self.rotations {
            rotations.push((v, rot.iter().copied().filter(|&h| h != h1 && h != h2).collect()));
        }
        let edges = self
            .edge_halves
            .iter()
            .filter(|(&id, _)| id != e)
            .map(|(&id, &(a, b))| (id, self.graph.edges[&id].sign, a, b))
            .collect();
        Ok(SignedPlaneGraph::new(self.name.clone(), rotations, edges)
            .expect("deleting an edge preserves planarity"))
    }

    /// Contracts a non-loop edge. The endpoints merge into the smaller vertex
    /// id and their rotations splice: read `u`'s rotation from just after the
    /// contracted half round to just before it, then `v`'s the same way.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Self, GraphError> {
        let (h1, h2) = self.halves(e)?;
        let u = self.half_vertex[&h1];
        let v = self.half_vertex[&h2];
        if u == v {
            return Err(GraphError::ContractLoop(e));
        }
        let keep = u.min(v);
        let after = |vertex: VertexId, skip: HalfEdgeId| -> Vec<HalfEdgeId> {
            let rot = &self.rotations[&vertex];
            let i = rot.iter().position(|&x| x == skip).unwrap();
            (1..rot.len()).map(|k| rot[(i + k) % rot.len()]).collect()
        };
        let mut spliced = after(u, h1);
        spliced.extend(after(v, h2));
        let mut rotations: Vec<(VertexId, Vec<HalfEdgeId>)> = vec![(keep, spliced)];
        for (&w, rot) in &self.rotations {
            if w != u && w != v {
                rotations.push((w, rot.clone()));
            }
        }
        let edges = self
            .edge_halves
            .iter()
            .filter(|(&id, _)| id != e)
            .map(|(&id, &(a, b))| (id, self.graph.edges[&id].sign, a, b))
            .collect();
        Ok(SignedPlaneGraph::new(self.name.clone(), rotations, edges)
            .expect("contracting an edge of a plane graph preserves planarity"))
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// # comment
    /// graph c3
    /// vertex v1: h1 h6
    /// edge e1 + : h1 h2
    /// ```
    ///
    /// Vertex lines list half-edges counterclockwise; the order is cyclic, so
    /// rotated lines describe the same embedding.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut name: Option<String> = None;
        let mut rotations: Vec<(VertexId, Vec<HalfEdgeId>)> = Vec::new();
        let mut edges: Vec<(EdgeId, Sign, HalfEdgeId, HalfEdgeId)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            match words.next().unwrap() {
                "graph" => {
                    let token = words
                        .next()
                        .ok_or_else(|| parse_err(line, "graph line needs a name"))?;
                    if words.next().is_some() {
                        return Err(parse_err(line, "trailing tokens after graph name"));
                    }
                    if name.replace(token.to_string()).is_some() {
                        return Err(parse_err(line, "second graph line"));
                    }
                }
                "vertex" => {
                    let (head, tail) = content.split_once(':').ok_or_else(|| {
                        parse_err(line, "vertex line needs a ':' before its rotation")
                    })?;
                    let mut head_words = head.split_whitespace().skip(1);
                    let vid_token = head_words
                        .next()
                        .ok_or_else(|| parse_err(line, "vertex line needs an id"))?;
                    if head_words.next().is_some() {
                        return Err(parse_err(line, "unexpected tokens before ':'"));
                    }
                    let v = parse_id(vid_token, 'v')
                        .map(VertexId)
                        .ok_or_else(|| parse_err(line, format!("bad vertex id {vid_token:?}")))?;
                    let mut halves = Vec::new();
                    for token in tail.split_whitespace() {
                        let h = parse_id(token, 'h')
                            .map(HalfEdgeId)
                            .ok_or_else(|| parse_err(line, format!("bad half-edge id {token:?}")))?;
                        halves.push(h);
                    }
                    rotations.push((v, halves));
                }
                "edge" => {
                    let (head, tail) = content
                        .split_once(':')
                        .ok_or_else(|| parse_err(line, "edge line needs a ':' before its half-edges"))?;
                    let mut head_words = head.split_whitespace().skip(1);
                    let eid_token = head_words
                        .next()
                        .ok_or_else(|| parse_err(line, "edge line needs an id"))?;
                    let e = parse_id(eid_token, 'e')
                        .map(EdgeId)
                        .ok_or_else(|| parse_err(line, format!("bad edge id {eid_token:?}")))?;
                    let sign_token = head_words
                        .next()
                        .ok_or_else(|| parse_err(line, "edge line needs a sign"))?;
                    let sign = match sign_token {
                        "+" => Sign::Plus,
                        "-" => Sign::Minus,
                        other => return Err(parse_err(line, format!("bad sign {other:?}"))),
                    };
                    if head_words.next().is_some() {
                        return Err(parse_err(line, "unexpected tokens before ':'"));
                    }
                    let halves: Vec<HalfEdgeId> = tail
                        .split_whitespace()
                        .map(|token| {
                            parse_id(token, 'h')
                                .map(HalfEdgeId)
                                .ok_or_else(|| parse_err(line, format!("bad half-edge id {token:?}")))
                        })
                        .collect::<Result<_, _>>()?;
                    if halves.len() != 2 {
                        return Err(parse_err(line, "edge line needs exactly two half-edges"));
                    }
                    edges.push((e, sign, halves[0], halves[1]));
                }
                other => {
                    return Err(parse_err(line, format!("unknown directive {other:?}")));
                }
            }
        }
        let name = name.ok_or_else(|| parse_err(1, "missing `graph <name>` line"))?;
        Self::new(name, rotations, edges)
    }

    /// Canonical text form; `parse` of the output reproduces the graph.
    pub fn render(&self) -> String {
        let mut out = format!("graph {}\n", self.name);
        for (v, rot) in &self.rotations {
            out.push_str(&format!("vertex {v}:"));
            for h in rot {
                out.push_str(&format!(" {h}"));
            }
            out.push('\n');
        }
        for (e, &(h1, h2)) in &self.edge_halves {
            let sign = self.graph.edges[&e].sign;
            out.push_str(&format!("edge {e} {} : {h1} {h2}\n", sign.symbol()));
        }
        out
    }
}

fn canonicalize_rotation(rot: &mut Vec<HalfEdgeId>) {
    if rot.len() < 2 {
        return;
    }
    let min_at = rot
        .iter()
        .enumerate()
        .min_by_key(|(_, &h)| h)
        .map(|(i, _)| i)
        .unwrap();
    rot.rotate_left(min_at);
}

/// Sign-respecting graph isomorphism, by backtracking over degree-compatible
/// vertex bijections. Intended for the small graphs in this crate's tests and
/// self-checks.
pub fn isomorphic(a: &SignedGraph, b: &SignedGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let pair_key = |g: &SignedGraph, u: VertexId, v: VertexId| -> Vec<Sign> {
        let mut signs: Vec<Sign> = g
            .edges
            .values()
            .filter(|ends| {
                (ends.u == u && ends.v == v) || (ends.u == v && ends.v == u)
            })
            .map(|ends| ends.sign)
            .collect();
        signs.sort();
        signs
    };
    let degs = |g: &SignedGraph| {
        let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        d.sort();
        d
    };
    if degs(a) != degs(b) {
        return false;
    }
    let av: Vec<VertexId> = a.vertices().collect();
    let bv: Vec<VertexId> = b.vertices().collect();
    let mut assigned: Vec<Option<VertexId>> = vec![None; av.len()];
    let mut used = vec![false; bv.len()];

    fn backtrack(
        k: usize,
        a: &SignedGraph,
        b: &SignedGraph,
        av: &[VertexId],
        bv: &[VertexId],
        assigned: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
        pair_key: &dyn Fn(&SignedGraph, VertexId, VertexId) -> Vec<Sign>,
    ) -> bool {
        if k == av.len() {
            return true;
        }
        for j in 0..bv.len() {
            if used[j] || a.degree(av[k]) != b.degree(bv[j]) {
                continue;
            }
            if pair_key(a, av[k], av[k]) != pair_key(b, bv[j], bv[j]) {
                continue;
            }
            let ok = (0..k).all(|i| {
                pair_key(a, av[i], av[k]) == pair_key(b, assigned[i].unwrap(), bv[j])
            });
            if !ok {
                continue;
            }
            assigned[k] = Some(bv[j]);
            used[j] = true;
            if backtrack(k + 1, a, b, av, bv, assigned, used, pair_key) {
                return true;
            }
            assigned[k] = None;
            used[j] = false;
        }
        false
    }
    backtrack(0, a, b, &av, &bv, &mut assigned, &mut used, &pair_key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn cycle_structure_queries() {
        let c5 = corpus::c(5);
        let g = c5.underlying();
        assert_eq!(g.vertex_count(), 5);
        assert!(g.is_connected());
        assert!(g.bridges().is_empty());
        let report = g.connectivity();
        assert!(report.two_edge_connected);
        assert!(report.minimal_two_edge_connected);
        assert!(report.simple);
        assert!(report.triangle_free);
        let path = g.delete_edge(EdgeId(1)).unwrap();
        assert_eq!(path.bridges().len(), 4);
        assert!(path.is_connected());
    }

    #[test]
    fn bridges_match_deletion_recount() {
        for plane in corpus::all() {
            let g = plane.underlying();
            let (base, _) = g.components();
            let brute: BTreeSet<EdgeId> = g
                .edge_ids()
                .filter(|&e| g.delete_edge(e).unwrap().component_count() > base)
                .collect();
            assert_eq!(g.bridges(), brute, "bridge mismatch on {}", plane.name());
        }
    }

    #[test]
    fn multiplicity_classes() {
        let theta = corpus::theta3();
        let info = theta.underlying().multiplicity_info().unwrap();
        assert_eq!(info.multiplicity[&EdgeId(1)], 3);
        assert_eq!(info.distinct_pair_count, 1);
        assert_eq!(info.maximal_multiple_edges.len(), 1);

        let hsplit = corpus::h_split();
        let info = hsplit.underlying().multiplicity_info().unwrap();
        assert_eq!(info.distinct_pair_count, 7);
        assert_eq!(info.maximal_multiple_edges.len(), 1);
        assert_eq!(info.maximal_multiple_edges[0].len(), 2);

        let looped = corpus::c(2).underlying().contract_edge(EdgeId(1)).unwrap();
        assert!(matches!(looped.multiplicity_info(), Err(GraphError::LoopsPresent(_))));
    }

    #[test]
    fn common_neighbors_and_triangles() {
        let c3 = corpus::c(3);
        let ends = *c3.underlying().ends(EdgeId(1)).unwrap();
        let common = c3.underlying().common_neighbors(ends.u, ends.v).unwrap();
        assert_eq!(common.len(), 1);
        let report = c3.underlying().connectivity();
        assert!(!report.triangle_free);
        assert!(!report.quasi_simple_triangle_free);

        let theta = corpus::theta3();
        let report = theta.underlying().connectivity();
        assert!(report.triangle_free, "two vertices cannot span a triangle");

        let diamond = corpus::diamond();
        let chord = *diamond.underlying().ends(EdgeId(5)).unwrap();
        let common = diamond.underlying().common_neighbors(chord.u, chord.v).unwrap();
        assert_eq!(common.len(), 2);
    }

    #[test]
    fn contraction_merges_and_creates_loops() {
        let c2 = corpus::c(2);
        let contracted = c2.underlying().contract_edge(EdgeId(1)).unwrap();
        assert_eq!(contracted.vertex_count(), 1);
        assert!(contracted.ends(EdgeId(2)).unwrap().is_loop());
        let err = contracted.contract_edge(EdgeId(2));
        assert!(matches!(err, Err(GraphError::ContractLoop(_))));
    }

    #[test]
    fn face_counts_follow_euler() {
        assert_eq!(corpus::c(3).faces().len(), 2);
        assert_eq!(corpus::theta3().faces().len(), 3);
        assert_eq!(corpus::diamond().faces().len(), 3);
        assert_eq!(corpus::bowtie().faces().len(), 3);
        assert_eq!(corpus::h_split().faces().len(), 4);
        assert_eq!(corpus::b(1).faces().len(), 1);
    }

    #[test]
    fn embedded_delete_and_contract_stay_planar() {
        let c3 = corpus::c(3);
        let path = c3.delete_edge(EdgeId(1)).unwrap();
        assert_eq!(path.faces().len(), 1);
        let digon = c3.contract_edge(EdgeId(1)).unwrap();
        assert_eq!(digon.underlying().vertex_count(), 2);
        assert_eq!(digon.faces().len(), 2);
        assert!(isomorphic(digon.underlying(), corpus::c(2).underlying()));
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        // Same rotation order at both ends of a theta graph embeds it on the
        // torus, and the Euler check refuses it.
        let text = "graph torus_theta\n\
                    vertex v1: h1 h3 h5\n\
                    vertex v2: h2 h4 h6\n\
                    edge e1 + : h1 h2\n\
                    edge e2 + : h3 h4\n\
                    edge e3 + : h5 h6\n";
        match SignedPlaneGraph::parse(text) {
            Err(GraphError::Embedding(msg)) => assert!(msg.contains("not planar")),
            other => panic!("expected embedding rejection, got {other:?}"),
        }
    }

    #[test]
    fn parse_is_cyclic_rotation_invariant() {
        let base = corpus::theta3();
        let rotated = "graph theta3\n\
                       vertex v1: h3 h5 h1\n\
                       vertex v2: h2 h6 h4\n\
                       edge e1 + : h1 h2\n\
                       edge e2 + : h3 h4\n\
                       edge e3 + : h5 h6\n";
        assert_eq!(SignedPlaneGraph::parse(rotated).unwrap(), base);
        let reordered_lines = "graph theta3\n\
                               edge e3 + : h5 h6\n\
                               vertex v2: h6 h4 h2\n\
                               vertex v1: h1 h3 h5\n\
                               edge e1 + : h1 h2\n\
                               edge e2 + : h3 h4\n";
        assert_eq!(SignedPlaneGraph::parse(reordered_lines).unwrap(), base);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_sign = "graph g\nvertex v1: h1\nvertex v2: h2\nedge e1 * : h1 h2\n";
        match SignedPlaneGraph::parse(bad_sign) {
            Err(GraphError::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("sign"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad_directive = "graph g\nvertices v1: h1\n";
        match SignedPlaneGraph::parse(bad_directive) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let dangling = "graph g\nvertex v1: h1 h2\nvertex v2: h3\nedge e1 + : h1 h3\n";
        assert!(matches!(
            SignedPlaneGraph::parse(dangling),
            Err(GraphError::Embedding(_))
        ));
    }

    #[test]
    fn render_round_trips() {
        for plane in corpus::all() {
            let text = plane.render();
            let reparsed = SignedPlaneGraph::parse(&text).unwrap();
            assert_eq!(reparsed, plane, "round-trip failed for {}", plane.name());
        }
    }

    #[test]
    fn dual_swaps_cycles_and_bonds() {
        let c2_dual = corpus::c(2).dual();
        assert!(isomorphic(
            c2_dual.underlying(),
            corpus::c(2).with_all_signs(Sign::Minus).underlying()
        ));
        let c3_dual = corpus::c(3).dual();
        assert!(isomorphic(
            c3_dual.underlying(),
            corpus::theta3().with_all_signs(Sign::Minus).underlying()
        ));
        assert_eq!(c3_dual.underlying().vertex_count(), 2);
    }

    #[test]
    fn double_dual_is_isomorphic_to_the_original() {
        for plane in corpus::all() {
            let dd = plane.dual().dual();
            assert!(
                isomorphic(dd.underlying(), plane.underlying()),
                "double dual changed {}",
                plane.name()
            );
        }
    }

    #[test]
    fn isolated_vertices_are_self_dual() {
        let e3 = corpus::e(3);
        let dual = e3.dual();
        assert_eq!(dual.underlying().vertex_count(), 3);
        assert_eq!(dual.underlying().edge_count(), 0);
    }

    #[test]
    fn isomorphism_checker_sees_signs_and_multiplicity() {
        let c3 = corpus::c(3);
        assert!(isomorphic(c3.underlying(), c3.underlying()));
        assert!(!isomorphic(c3.underlying(), corpus::theta3().underlying()));
        let flipped = c3.with_sign(EdgeId(2), Sign::Minus).unwrap();
        assert!(!isomorphic(c3.underlying(), flipped.underlying()));
        // Relabeled triangle.
        let relabeled = "graph t\n\
                         vertex v7: h10 h20\n\
                         vertex v8: h11 h30\n\
                         vertex v9: h21 h31\n\
                         edge e4 + : h10 h11\n\
                         edge e5 + : h20 h21\n\
                         edge e6 + : h30 h31\n";
        let relabeled = SignedPlaneGraph::parse(relabeled).unwrap();
        assert!(isomorphic(c3.underlying(), relabeled.underlying()));
    }
}
