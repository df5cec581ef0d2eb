//! Metabolic network structure: metabolite vertices, directed reaction edges,
//! and the two virtual boundary vertices.
//!
//! A network holds the internal directed graph `G = (V, E)` plus boundary
//! edges: intake edges from the virtual source into intake vertices, and
//! excretion edges from excretion vertices into the virtual sink. Edges carry
//! the kinetics of their gain function. Edge order is canonical: lexicographic
//! by (tail, head) position with the source ordered before every vertex and
//! the sink after every vertex, so matrix columns line up across the crate.

use crate::rational::Rational;
use num::Signed;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Reserved identifier for the virtual source vertex.
pub const SOURCE_ID: &str = "SOURCE";
/// Reserved identifier for the virtual sink vertex.
pub const SINK_ID: &str = "SINK";

/// Tail endpoint of an edge: the virtual source or an internal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tail {
    Source,
    Vertex(usize),
}

/// Head endpoint of an edge: an internal vertex or the virtual sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Head {
    Vertex(usize),
    Sink,
}

/// Any node of the extended graph, for reachability queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Source,
    Vertex(usize),
    Sink,
}

/// Gain kinetics attached to an edge.
///
/// `Linear` is the identity gain with range `[0, inf)`. `Hill` saturates with
/// range `[0, 1)`. `ConstantIntake` is the unit gain carried by every intake
/// edge: intake flow is the flux value itself, independent of any metabolite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kinetics {
    Linear,
    Hill { p: u32, k: Rational },
    ConstantIntake,
}

impl Kinetics {
    /// Whether the gain can take arbitrarily large values.
    pub fn has_unbounded_range(&self) -> bool {
        match self {
            Kinetics::Linear => true,
            Kinetics::Hill { .. } => false,
            Kinetics::ConstantIntake => false,
        }
    }
}

impl fmt::Display for Kinetics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kinetics::Linear => write!(f, "linear"),
            Kinetics::Hill { p, k } => write!(f, "hill(p={p}, K={k})"),
            Kinetics::ConstantIntake => write!(f, "constant-intake"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub tail: Tail,
    pub head: Head,
    pub kinetics: Kinetics,
}

impl Edge {
    pub fn is_intake(&self) -> bool {
        self.tail == Tail::Source
    }

    pub fn is_excretion(&self) -> bool {
        self.head == Head::Sink
    }

    pub fn is_internal(&self) -> bool {
        !self.is_intake() && !self.is_excretion()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("empty vertex identifier")]
    EmptyVertexId,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("vertex identifier {0:?} is reserved for a virtual vertex")]
    ReservedVertexId(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("intake edge into {0:?} must use constant-intake kinetics")]
    IntakeKinetics(String),
    #[error("constant-intake kinetics on non-intake edge {0}")]
    MisplacedIntakeKinetics(String),
    #[error("hill kinetics on edge {0} requires p >= 1 and K > 0")]
    InvalidHillParameters(String),
}

/// One strongly or weakly connected component of the internal graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Member vertices, ascending.
    pub vertices: Vec<usize>,
    /// No internal edge leaves the component.
    pub terminal: bool,
    /// Contains at least one intake vertex.
    pub has_intake: bool,
    /// Contains at least one excretion vertex.
    pub has_excretion: bool,
}

/// A partition of the internal vertices into components, ordered by each
/// component's smallest vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
    /// Vertex index to component index.
    pub component_of: Vec<usize>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Terminal components without an excretion vertex: the traps that hold
    /// mass forever once it arrives.
    pub fn excretion_free_terminal(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.terminal && !c.has_excretion)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Split of the vertices by whether they can reach the sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachPartition {
    /// Vertices with a path to the sink, ascending.
    pub v1: Vec<usize>,
    /// Vertices without one, ascending.
    pub v2: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Network {
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge>,
    out_internal: Vec<Vec<(usize, usize)>>, // vertex -> (head vertex, edge index)
    in_internal: Vec<Vec<(usize, usize)>>,  // vertex -> (tail vertex, edge index)
    intake_vertices: Vec<usize>,
    excretion_vertices: Vec<usize>,
}

impl Network {
    /// Builds a validated network. Edges may be given in any order; they are
    /// stored canonically sorted.
    pub fn new(vertices: Vec<String>, mut edges: Vec<Edge>) -> Result<Self, NetworkError> {
        let mut index = BTreeMap::new();
        for (i, id) in vertices.iter().enumerate() {
            if id.is_empty() {
                return Err(NetworkError::EmptyVertexId);
            }
            if id == SOURCE_ID || id == SINK_ID {
                return Err(NetworkError::ReservedVertexId(id.clone()));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateVertex(id.clone()));
            }
        }
        let n = vertices.len();
        let key = |e: &Edge| -> (isize, isize) {
            let t = match e.tail {
                Tail::Source => -1,
                Tail::Vertex(v) => v as isize,
            };
            let h = match e.head {
                Head::Vertex(v) => v as isize,
                Head::Sink => n as isize,
            };
            (t, h)
        };
        for e in &edges {
            if let Tail::Vertex(v) = e.tail {
                if v >= n {
                    return Err(NetworkError::UnknownVertex(format!("#{v}")));
                }
            }
            if let Head::Vertex(v) = e.head {
                if v >= n {
                    return Err(NetworkError::UnknownVertex(format!("#{v}")));
                }
            }
            if let (Tail::Vertex(a), Head::Vertex(b)) = (e.tail, e.head) {
                if a == b {
                    return Err(NetworkError::SelfLoop(vertices[a].clone()));
                }
            }
        }
        edges.sort_by_key(&key);
        let mut net = Network {
            out_internal: vec![Vec::new(); n],
            in_internal: vec![Vec::new(); n],
            intake_vertices: Vec::new(),
            excretion_vertices: Vec::new(),
            vertices,
            index,
            edges,
        };
        for i in 1..net.edges.len() {
            if key(&net.edges[i - 1]) == key(&net.edges[i]) {
                return Err(NetworkError::DuplicateEdge(net.edge_label(i)));
            }
        }
        for e in &net.edges {
            match (e.tail, e.head) {
                (Tail::Source, Head::Vertex(v)) => {
                    if e.kinetics != Kinetics::ConstantIntake {
                        return Err(NetworkError::IntakeKinetics(net.vertices[v].clone()));
                    }
                }
                (Tail::Source, Head::Sink) => {
                    return Err(NetworkError::DuplicateEdge("SOURCE->SINK".to_owned()));
                }
                _ => {
                    if e.kinetics == Kinetics::ConstantIntake {
                        return Err(NetworkError::MisplacedIntakeKinetics(edge_label_raw(
                            &net.vertices,
                            e,
                        )));
                    }
                }
            }
            if let Kinetics::Hill { p, ref k } = e.kinetics {
                if p < 1 || !k.is_positive() {
                    return Err(NetworkError::InvalidHillParameters(edge_label_raw(
                        &net.vertices,
                        e,
                    )));
                }
            }
        }
        let edges = net.edges.clone();
        for (i, e) in edges.iter().enumerate() {
            match (e.tail, e.head) {
                (Tail::Source, Head::Vertex(v)) => net.intake_vertices.push(v),
                (Tail::Vertex(v), Head::Sink) => net.excretion_vertices.push(v),
                (Tail::Vertex(a), Head::Vertex(b)) => {
                    net.out_internal[a].push((b, i));
                    net.in_internal[b].push((a, i));
                }
                (Tail::Source, Head::Sink) => unreachable!(),
            }
        }
        net.intake_vertices.sort_unstable();
        net.intake_vertices.dedup();
        net.excretion_vertices.sort_unstable();
        net.excretion_vertices.dedup();
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Total number of edges, boundary edges included.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_label(&self, e: usize) -> String {
        edge_label_raw(&self.vertices, &self.edges[e])
    }

    pub fn edge_labels(&self) -> Vec<String> {
        (0..self.m()).map(|e| self.edge_label(e)).collect()
    }

    /// Vertices receiving an intake edge, ascending.
    pub fn intake_vertices(&self) -> &[usize] {
        &self.intake_vertices
    }

    /// Vertices with an excretion edge, ascending.
    pub fn excretion_vertices(&self) -> &[usize] {
        &self.excretion_vertices
    }

    pub fn is_intake_vertex(&self, v: usize) -> bool {
        self.intake_vertices.binary_search(&v).is_ok()
    }

    pub fn is_excretion_vertex(&self, v: usize) -> bool {
        self.excretion_vertices.binary_search(&v).is_ok()
    }

    /// True when the network has no boundary edges at all.
    pub fn is_closed(&self) -> bool {
        self.intake_vertices.is_empty() && self.excretion_vertices.is_empty()
    }

    /// Internal out-neighbours of `v` as (head, edge index) pairs.
    pub fn out_internal(&self, v: usize) -> &[(usize, usize)] {
        &self.out_internal[v]
    }

    /// Internal in-neighbours of `v` as (tail, edge index) pairs.
    pub fn in_internal(&self, v: usize) -> &[(usize, usize)] {
        &self.in_internal[v]
    }

    /// Edge indices leaving vertex `v` (internal and excretion).
    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.m())
            .filter(|&e| self.edges[e].tail == Tail::Vertex(v))
            .collect()
    }

    /// Strongly connected components of the internal graph, ordered by each
    /// component's smallest vertex index.
    pub fn strongly_connected_components(&self) -> ComponentDecomposition {
        let n = self.n();
        // Kosaraju, iterative: forward finish order, then reverse-graph sweeps.
        let mut finish_order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            // Stack entries are (vertex, next out-neighbour position).
            let mut stack = vec![(start, 0usize)];
            visited[start] = true;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.out_internal[v].len() {
                    let (w, _) = self.out_internal[v][*next];
                    *next += 1;
                    if !visited[w] {
                        visited[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    finish_order.push(v);
                    stack.pop();
                }
            }
        }
        let mut component_of = vec![usize::MAX; n];
        let mut raw_components: Vec<Vec<usize>> = Vec::new();
        for &start in finish_order.iter().rev() {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = raw_components.len();
            let mut members = vec![start];
            component_of[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.in_internal[v] {
                    if component_of[w] == usize::MAX {
                        component_of[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            raw_components.push(members);
        }
        self.finish_decomposition(raw_components, component_of)
    }

    /// Weakly connected components of the internal graph, ordered by each
    /// component's smallest vertex index.
    pub fn weakly_connected_components(&self) -> ComponentDecomposition {
        let n = self.n();
        let mut component_of = vec![usize::MAX; n];
        let mut raw_components: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = raw_components.len();
            let mut members = vec![start];
            component_of[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in self.out_internal[v].iter().chain(&self.in_internal[v]) {
                    if component_of[w] == usize::MAX {
                        component_of[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            raw_components.push(members);
        }
        self.finish_decomposition(raw_components, component_of)
    }

    fn finish_decomposition(
        &self,
        raw_components: Vec<Vec<usize>>,
        component_of_raw: Vec<usize>,
    ) -> ComponentDecomposition {
        let mut order: Vec<usize> = (0..raw_components.len()).collect();
        order.sort_by_key(|&c| raw_components[c][0]);
        let mut renumber = vec![0usize; raw_components.len()];
        for (new_id, &old_id) in order.iter().enumerate() {
            renumber[old_id] = new_id;
        }
        let component_of: Vec<usize> = component_of_raw.iter().map(|&c| renumber[c]).collect();
        let components = order
            .into_iter()
            .map(|old_id| {
                let vertices = raw_components[old_id].clone();
                let terminal = vertices.iter().all(|&v| {
                    self.out_internal[v]
                        .iter()
                        .all(|&(w, _)| component_of_raw[w] == old_id)
                });
                let has_intake = vertices.iter().any(|&v| self.is_intake_vertex(v));
                let has_excretion = vertices.iter().any(|&v| self.is_excretion_vertex(v));
                Component {
                    vertices,
                    terminal,
                    has_intake,
                    has_excretion,
                }
            })
            .collect();
        ComponentDecomposition {
            components,
            component_of,
        }
    }

    /// True when every weakly connected component of the internal graph is
    /// strongly connected.
    pub fn is_weakly_reversible(&self) -> bool {
        let weak = self.weakly_connected_components();
        let strong = self.strongly_connected_components();
        weak.len() == strong.len()
    }

    /// Path existence in the extended graph (boundary edges included).
    pub fn has_path(&self, from: Node, to: Node) -> bool {
        if from == to {
            return true;
        }
        // Breadth-first over the extended graph from `from`.
        let mut visited = vec![false; self.n()];
        let mut sink_reached = false;
        let mut queue = std::collections::VecDeque::new();
        match from {
            Node::Source => {
                for &v in &self.intake_vertices {
                    if !visited[v] {
                        visited[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            Node::Vertex(v) => {
                visited[v] = true;
                queue.push_back(v);
            }
            Node::Sink => return false,
        }
        while let Some(v) = queue.pop_front() {
            if self.is_excretion_vertex(v) {
                sink_reached = true;
            }
            for &(w, _) in &self.out_internal[v] {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
        match to {
            Node::Source => false,
            Node::Vertex(v) => visited[v],
            Node::Sink => sink_reached,
        }
    }

    /// Id-based path query; `"SOURCE"` and `"SINK"` name the virtual vertices.
    pub fn has_path_ids(&self, from: &str, to: &str) -> Result<bool, NetworkError> {
        let parse = |id: &str| -> Result<Node, NetworkError> {
            if id == SOURCE_ID {
                return Ok(Node::Source);
            }
            if id == SINK_ID {
                return Ok(Node::Sink);
            }
            self.vertex_index(id)
                .map(Node::Vertex)
                .ok_or_else(|| NetworkError::UnknownVertex(id.to_owned()))
        };
        Ok(self.has_path(parse(from)?, parse(to)?))
    }

    /// Splits vertices by whether they can reach the sink. No internal edge
    /// runs from the unreachable side back into the reachable side's
    /// complement; concretely, mass that leaves `v1` can never return.
    pub fn excretion_reachable_set(&self) -> ReachPartition {
        let mut can_reach = vec![false; self.n()];
        let mut stack: Vec<usize> = self.excretion_vertices.clone();
        for &v in &stack {
            can_reach[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.in_internal[v] {
                if !can_reach[w] {
                    can_reach[w] = true;
                    stack.push(w);
                }
            }
        }
        let v1 = (0..self.n()).filter(|&v| can_reach[v]).collect();
        let v2 = (0..self.n()).filter(|&v| !can_reach[v]).collect();
        ReachPartition { v1, v2 }
    }

    /// Vertices reachable from the intake set, in breadth-first discovery
    /// order (intakes in ascending order first).
    pub fn reachable_from_intakes(&self) -> Vec<usize> {
        let mut visited = vec![false; self.n()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for &v in &self.intake_vertices {
            if !visited[v] {
                visited[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in &self.out_internal[v] {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

fn edge_label_raw(vertices: &[String], e: &Edge) -> String {
    let tail = match e.tail {
        Tail::Source => SOURCE_ID,
        Tail::Vertex(v) => &vertices[v],
    };
    let head = match e.head {
        Head::Vertex(v) => &vertices[v],
        Head::Sink => SINK_ID,
    };
    format!("{tail}->{head}")
}

/// Convenience builder for programmatic network construction.
#[derive(Default)]
pub struct NetworkBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, Kinetics)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices<I: IntoIterator<Item = S>, S: Into<String>>(mut self, ids: I) -> Self {
        self.vertices.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, from: &str, to: &str, kinetics: Kinetics) -> Self {
        self.edges.push((from.to_owned(), to.to_owned(), kinetics));
        self
    }

    pub fn linear_edge(self, from: &str, to: &str) -> Self {
        self.edge(from, to, Kinetics::Linear)
    }

    pub fn intake(mut self, to: &str) -> Self {
        self.edges
            .push((SOURCE_ID.to_owned(), to.to_owned(), Kinetics::ConstantIntake));
        self
    }

    pub fn excretion(mut self, from: &str, kinetics: Kinetics) -> Self {
        self.edges.push((from.to_owned(), SINK_ID.to_owned(), kinetics));
        self
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (from, to, kinetics) in &self.edges {
            let tail = if from == SOURCE_ID {
                Tail::Source
            } else {
                Tail::Vertex(
                    *index
                        .get(from.as_str())
                        .ok_or_else(|| NetworkError::UnknownVertex(from.clone()))?,
                )
            };
            let head = if to == SINK_ID {
                Head::Sink
            } else {
                Head::Vertex(
                    *index
                        .get(to.as_str())
                        .ok_or_else(|| NetworkError::UnknownVertex(to.clone()))?,
                )
            };
            edges.push(Edge {
                tail,
                head,
                kinetics: kinetics.clone(),
            });
        }
        Network::new(self.vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::test_support::rct;

    #[test]
    fn canonical_edge_order() {
        let net = rct();
        let labels = net.edge_labels();
        assert_eq!(
            labels,
            vec![
                "SOURCE->v1",
                "SOURCE->v2",
                "SOURCE->v3",
                "v1->v4",
                "v2->v4",
                "v3->v4",
                "v4->v5",
                "v4->v6",
                "v5->v6",
                "v6->SINK"
            ]
        );
        assert_eq!(net.n(), 6);
        assert_eq!(net.m(), 10);
        assert_eq!(net.intake_vertices(), &[0, 1, 2]);
        assert_eq!(net.excretion_vertices(), &[5]);
    }

    #[test]
    fn excretion_edge_sorts_between_internal_edges() {
        // Excretion from the second vertex must sort before the internal edge
        // out of the third: the sink compares greater than any vertex, but the
        // tail decides first.
        let net = NetworkBuilder::new()
            .vertices(["a", "b", "c"])
            .linear_edge("a", "b")
            .linear_edge("c", "a")
            .excretion("b", Kinetics::Linear)
            .intake("a")
            .build()
            .unwrap();
        assert_eq!(
            net.edge_labels(),
            vec!["SOURCE->a", "a->b", "b->SINK", "c->a"]
        );
    }

    #[test]
    fn rejects_invalid_structure() {
        let dup = NetworkBuilder::new()
            .vertices(["a", "a"])
            .build();
        assert_eq!(dup.unwrap_err(), NetworkError::DuplicateVertex("a".into()));

        let reserved = NetworkBuilder::new().vertices(["SOURCE"]).build();
        assert!(matches!(reserved, Err(NetworkError::ReservedVertexId(_))));

        let self_loop = NetworkBuilder::new()
            .vertices(["a"])
            .linear_edge("a", "a")
            .build();
        assert!(matches!(self_loop, Err(NetworkError::SelfLoop(_))));

        let double = NetworkBuilder::new()
            .vertices(["a", "b"])
            .linear_edge("a", "b")
            .edge("a", "b", Kinetics::Hill { p: 2, k: rat(1, 2) })
            .build();
        assert!(matches!(double, Err(NetworkError::DuplicateEdge(_))));

        let double_intake = NetworkBuilder::new()
            .vertices(["a"])
            .intake("a")
            .intake("a")
            .build();
        assert!(matches!(double_intake, Err(NetworkError::DuplicateEdge(_))));

        let bad_hill = NetworkBuilder::new()
            .vertices(["a", "b"])
            .edge("a", "b", Kinetics::Hill { p: 0, k: rat(1, 2) })
            .build();
        assert!(matches!(bad_hill, Err(NetworkError::InvalidHillParameters(_))));

        let bad_gain = NetworkBuilder::new()
            .vertices(["a", "b"])
            .edge("a", "b", Kinetics::ConstantIntake)
            .build();
        assert!(matches!(
            bad_gain,
            Err(NetworkError::MisplacedIntakeKinetics(_))
        ));
    }

    #[test]
    fn components_of_the_running_example() {
        let net = rct();
        let strong = net.strongly_connected_components();
        assert_eq!(strong.len(), 6);
        assert!(strong.components.iter().all(|c| c.vertices.len() == 1));
        // Only the excretion vertex's singleton is terminal.
        let terminal: Vec<usize> = strong
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.terminal)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(terminal, vec![5]);
        assert!(strong.components[5].has_excretion);

        let weak = net.weakly_connected_components();
        assert_eq!(weak.len(), 1);
        assert!(!net.is_weakly_reversible());
    }

    #[test]
    fn cycle_is_weakly_reversible() {
        let net = NetworkBuilder::new()
            .vertices(["a", "b", "c"])
            .linear_edge("a", "b")
            .linear_edge("b", "c")
            .linear_edge("c", "a")
            .build()
            .unwrap();
        assert!(net.is_weakly_reversible());
        let strong = net.strongly_connected_components();
        assert_eq!(strong.len(), 1);
        assert!(strong.components[0].terminal);
        assert!(net.is_closed());
    }

    #[test]
    fn paths_and_reachability() {
        let net = rct();
        assert!(net.has_path_ids("SOURCE", "v6").unwrap());
        assert!(net.has_path_ids("v1", "SINK").unwrap());
        assert!(net.has_path_ids("v5", "v6").unwrap());
        assert!(!net.has_path_ids("v6", "v5").unwrap());
        assert!(net.has_path_ids("v3", "v3").unwrap());
        assert!(net.has_path_ids("SOURCE", "SINK").unwrap());
        assert!(net.has_path_ids("v6", "SINK").unwrap());
        assert!(matches!(
            net.has_path_ids("nope", "v1"),
            Err(NetworkError::UnknownVertex(_))
        ));

        let reach = net.excretion_reachable_set();
        assert_eq!(reach.v1, vec![0, 1, 2, 3, 4, 5]);
        assert!(reach.v2.is_empty());
    }

    #[test]
    fn trap_partition() {
        // Intake feeds a two-vertex cycle that never reaches the sink.
        let net = NetworkBuilder::new()
            .vertices(["v1", "v2", "v3", "v4"])
            .intake("v1")
            .linear_edge("v1", "v2")
            .linear_edge("v2", "v4")
            .linear_edge("v3", "v4")
            .linear_edge("v4", "v3")
            .excretion("v2", Kinetics::Linear)
            .build()
            .unwrap();
        let reach = net.excretion_reachable_set();
        assert_eq!(reach.v1, vec![0, 1]);
        assert_eq!(reach.v2, vec![2, 3]);
        let strong = net.strongly_connected_components();
        let traps = strong.excretion_free_terminal();
        assert_eq!(traps.len(), 1);
        assert_eq!(strong.components[traps[0]].vertices, vec![2, 3]);
        // Discovery order from the intake reaches v4 before v3.
        assert_eq!(net.reachable_from_intakes(), vec![0, 1, 3, 2]);
    }
}
