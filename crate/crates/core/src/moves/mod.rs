//! Terminal edge exchanges and the graph they induce on a state space.
//!
//! A vertex of the Crowell graph has exactly two incoming edges, so a leaf
//! of a state can always swap its tree edge for the other one. Doing so at
//! every leaf of every state links the whole state space together.

mod transform;

pub use transform::{
    below, clear_below, find_w_prime, phi, rooted_meet, transform, Below, MoveSequence, Provenance,
};

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::crowell::{CrowellGraph, EdgeId, Vertex};
use crate::statespace::{State, StateError, StateSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("vertex {0} is not a leaf of the state")]
    NotTerminal(Vertex),
    #[error("the other incoming edge at vertex {0} is a loop")]
    KinkVertex(Vertex),
    #[error("vertex {0} is the root")]
    VertexIsRoot(Vertex),
    #[error("no vertex below {0} can be detached")]
    NotFound(Vertex),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("state is not in the state set")]
    UnknownState,
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub vertex: Vertex,
    pub removed_edge: EdgeId,
    pub added_edge: EdgeId,
    /// Change in the number of `-t` edges, always `+1` or `-1`.
    pub degree_delta: i32,
}

/// Tree edges whose head is a leaf, as `(leaf, edge)` pairs in vertex order.
pub fn terminal_edges(s: &State, g: &CrowellGraph) -> Vec<(Vertex, EdgeId)> {
    let mut has_child = vec![false; g.vertex_count()];
    for v in g.vertices() {
        if let Some(p) = s.parent(v, g) {
            has_child[p - 1] = true;
        }
    }
    g.vertices()
        .filter(|&v| !has_child[v - 1])
        .filter_map(|v| s.parent_edge(v).map(|e| (v, e)))
        .collect()
}

/// Replaces the tree edge entering the leaf `v` by `v`'s other incoming edge.
pub fn exchange(s: &State, v: Vertex, g: &CrowellGraph) -> Result<(State, Move), MoveError> {
    if v == 0 || v > g.vertex_count() {
        return Err(StateError::UnknownVertex(v).into());
    }
    let Some(removed) = s.parent_edge(v) else {
        return Err(MoveError::VertexIsRoot(v));
    };
    if !s.is_leaf(v, g) {
        return Err(MoveError::NotTerminal(v));
    }
    let added = g.other_incoming(removed).ok_or_else(|| {
        MoveError::HypothesisViolation(format!("vertex {v} has one incoming edge"))
    })?;
    if g.edge(added).tail == v {
        return Err(MoveError::KinkVertex(v));
    }
    let degree_delta =
        g.edge(added).weight.degree() as i32 - g.edge(removed).weight.degree() as i32;
    if degree_delta.abs() != 1 {
        return Err(MoveError::HypothesisViolation(format!(
            "incoming edges of vertex {v} carry the same weight"
        )));
    }
    let mut next = s.clone();
    next.set_parent(v, added);
    Ok((
        next,
        Move {
            vertex: v,
            removed_edge: removed,
            added_edge: added,
            degree_delta,
        },
    ))
}

/// States linked by single terminal edge exchanges. Node `i` is the `i`-th
/// state of the state set it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeGraph {
    root: Vertex,
    keys: Vec<Vec<EdgeId>>,
    degrees: Vec<usize>,
    /// `(i, j)` with `i < j`, mapped to the exchanged vertices linking them.
    edges: BTreeMap<(usize, usize), Vec<Vertex>>,
    adjacency: Vec<Vec<usize>>,
}

pub fn exchange_graph(states: &StateSet, g: &CrowellGraph) -> Result<ExchangeGraph, MoveError> {
    let mut edges: BTreeMap<(usize, usize), Vec<Vertex>> = BTreeMap::new();
    for (i, s) in states.iter().enumerate() {
        for (v, _) in terminal_edges(s, g) {
            let (next, _) = exchange(s, v, g)?;
            let j = states.index_of(&next).ok_or(MoveError::UnknownState)?;
            if i < j {
                edges.entry((i, j)).or_default().push(v);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); states.len()];
    for &(i, j) in edges.keys() {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    Ok(ExchangeGraph {
        root: states.root(),
        keys: states.iter().map(State::key).collect(),
        degrees: states.iter().map(|s| s.degree(g)).collect(),
        edges,
        adjacency,
    })
}

impl ExchangeGraph {
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn key(&self, i: usize) -> &[EdgeId] {
        &self.keys[i]
    }

    /// t-degree of the state at node `i`.
    pub fn state_degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Edges as `((i, j), exchanged vertices)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Vertex>)> {
        self.edges.iter()
    }

    pub fn is_connected(&self) -> bool {
        self.distances(0).iter().all(Option::is_some)
    }

    /// Breadth-first distances from node `from`.
    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        if from >= dist.len() {
            return dist;
        }
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &x in &self.adjacency[u] {
                if dist[x].is_none() {
                    dist[x] = Some(d + 1);
                    queue.push_back(x);
                }
            }
        }
        dist
    }

    /// Number of nodes with exactly one neighbor. More than two rules out
    /// any lattice structure compatible with the exchanges.
    pub fn lattice_obstruction(&self) -> usize {
        self.adjacency.iter().filter(|a| a.len() == 1).count()
    }

    /// The nodes in path order when the graph is a simple path, starting
    /// from the end with the smaller t-degree.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let n = self.node_count();
        if n == 0 || !self.is_connected() || self.edge_count() + 1 != n {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        if self.adjacency.iter().any(|a| a.len() > 2) {
            return None;
        }
        let start = (0..n)
            .filter(|&i| self.adjacency[i].len() == 1)
            .min_by_key(|&i| (self.degrees[i], i))?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adjacency[cur].iter().find(|&&x| x != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    pub fn is_simple_path(&self) -> bool {
        self.path_order().is_some()
    }

    /// Graphviz rendering: node label is the t-degree, tooltip the state key.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        for (i, key) in self.keys.iter().enumerate() {
            let key: Vec<String> = key.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\", tooltip=\"{}\"];",
                self.degrees[i],
                key.join(",")
            );
        }
        for ((i, j), vs) in &self.edges {
            let vs: Vec<String> = vs.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  n{i} -- n{j} [label=\"{}\"];", vs.join(","));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .keys
            .iter()
            .zip(&self.degrees)
            .map(|(k, d)| json!({ "key": k, "degree": d }))
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|((i, j), vs)| json!({ "nodes": [i, j], "vertices": vs }))
            .collect();
        json!({
            "schema": 1,
            "root": self.root,
            "nodes": nodes,
            "edges": edges,
            "connected": self.is_connected(),
            "degree_one_nodes": self.lattice_obstruction(),
        })
    }
}
