//! States (spanning arborescences rooted at a chosen vertex), their
//! enumeration and the state-sum Alexander polynomial.

mod oracle;
mod paths;

pub use oracle::{alexander_oracle, arborescence_count_oracle, weighted_laplacian_minor};
pub use paths::{excise_loops, extend_to_state, rooted_path, state_with_terminal_edge};

use std::collections::VecDeque;

use serde_json::json;
use thiserror::Error;

use crate::crowell::{CrowellGraph, EdgeId, Vertex, Weight};
use crate::poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("not a rooted tree: {0}")]
    NotATree(String),
    #[error("edge {0} points at the root")]
    EdgeIntoRoot(EdgeId),
    #[error("no spanning arborescence exists for this root")]
    NoStates,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
}

/// A spanning tree rooted at `root` with every edge directed away from it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    root: Vertex,
    /// `parent[v - 1]` is the tree edge entering `v`; `None` only at the root.
    parent: Vec<Option<EdgeId>>,
}

impl State {
    /// Builds and validates a state from its edge set.
    pub fn from_edges(
        g: &CrowellGraph,
        root: Vertex,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, StateError> {
        let partial = PartialTree::from_edges(g, root, edges)?;
        if partial.len() != g.vertex_count() {
            return Err(StateError::NotATree("tree does not span the graph".into()));
        }
        Ok(State {
            root,
            parent: partial.parent,
        })
    }

    pub(crate) fn from_parents_unchecked(root: Vertex, parent: Vec<Option<EdgeId>>) -> Self {
        State { root, parent }
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent_edge(&self, v: Vertex) -> Option<EdgeId> {
        self.parent[v - 1]
    }

    pub fn parent(&self, v: Vertex, g: &CrowellGraph) -> Option<Vertex> {
        self.parent_edge(v).map(|e| g.edge(e).tail)
    }

    pub fn contains_edge(&self, e: EdgeId, g: &CrowellGraph) -> bool {
        self.parent_edge(g.edge(e).head) == Some(e)
    }

    /// Canonical key: the sorted list of tree edge ids.
    pub fn key(&self) -> Vec<EdgeId> {
        let mut k: Vec<EdgeId> = self.parent.iter().flatten().copied().collect();
        k.sort_unstable();
        k
    }

    pub fn edge_count(&self) -> usize {
        self.parent.iter().flatten().count()
    }

    pub fn children(&self, v: Vertex, g: &CrowellGraph) -> Vec<Vertex> {
        (1..=self.parent.len())
            .filter(|&c| self.parent(c, g) == Some(v))
            .collect()
    }

    pub fn is_leaf(&self, v: Vertex, g: &CrowellGraph) -> bool {
        !self.parent.iter().flatten().any(|&e| g.edge(e).tail == v)
    }

    /// Number of `-t` edges; the state's weight is `(-t)^degree`.
    pub fn degree(&self, g: &CrowellGraph) -> usize {
        self.parent
            .iter()
            .flatten()
            .filter(|&&e| g.edge(e).weight == Weight::MinusT)
            .count()
    }

    /// Vertices on the tree path from the root to `v`, both included.
    pub fn initial_segment(&self, v: Vertex, g: &CrowellGraph) -> Vec<Vertex> {
        let mut seg = vec![v];
        let mut x = v;
        while let Some(p) = self.parent(x, g) {
            seg.push(p);
            x = p;
        }
        seg.reverse();
        seg
    }

    pub(crate) fn set_parent(&mut self, v: Vertex, e: EdgeId) {
        self.parent[v - 1] = Some(e);
    }

    /// Checks every state invariant against `g`.
    pub fn validate(&self, g: &CrowellGraph) -> Result<(), StateError> {
        State::from_edges(g, self.root, self.parent.iter().flatten().copied()).and_then(|s| {
            if s == *self {
                Ok(())
            } else {
                Err(StateError::NotATree(
                    "parent map disagrees with edge heads".into(),
                ))
            }
        })
    }
}

/// A rooted tree in the graph, edges directed away from the root, not
/// necessarily spanning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTree {
    pub root: Vertex,
    parent: Vec<Option<EdgeId>>,
    in_tree: Vec<bool>,
}

impl PartialTree {
    pub fn empty(g: &CrowellGraph, root: Vertex) -> Self {
        let n = g.vertex_count();
        let mut in_tree = vec![false; n];
        in_tree[root - 1] = true;
        PartialTree {
            root,
            parent: vec![None; n],
            in_tree,
        }
    }

    /// Validates that `edges` form a rooted tree hanging from `root`.
    pub fn from_edges(
        g: &CrowellGraph,
        root: Vertex,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, StateError> {
        let n = g.vertex_count();
        if root == 0 || root > n {
            return Err(StateError::UnknownVertex(root));
        }
        let mut tree = PartialTree::empty(g, root);
        for e in edges {
            if e == 0 || e > g.edges().len() {
                return Err(StateError::NotATree(format!("unknown edge {e}")));
            }
            let head = g.edge(e).head;
            if head == root {
                return Err(StateError::EdgeIntoRoot(e));
            }
            if tree.parent[head - 1].is_some() {
                return Err(StateError::NotATree(format!(
                    "vertex {head} has two parents"
                )));
            }
            tree.parent[head - 1] = Some(e);
            tree.in_tree[head - 1] = true;
        }
        for v in 1..=n {
            if !tree.in_tree[v - 1] {
                continue;
            }
            let mut x = v;
            let mut steps = 0;
            while let Some(e) = tree.parent[x - 1] {
                x = g.edge(e).tail;
                steps += 1;
                if !tree.in_tree[x - 1] {
                    return Err(StateError::NotATree(format!("edge {e} hangs off the tree")));
                }
                if steps > n {
                    return Err(StateError::NotATree("cycle".into()));
                }
            }
            if x != root {
                return Err(StateError::NotATree(format!(
                    "vertex {v} is not reachable from the root"
                )));
            }
        }
        Ok(tree)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.in_tree[v - 1]
    }

    pub fn len(&self) -> usize {
        self.in_tree.iter().filter(|&&x| x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 1
    }

    pub fn parent_edge(&self, v: Vertex) -> Option<EdgeId> {
        self.parent[v - 1]
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut k: Vec<EdgeId> = self.parent.iter().flatten().copied().collect();
        k.sort_unstable();
        k
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (1..=self.in_tree.len())
            .filter(|&v| self.in_tree[v - 1])
            .collect()
    }

    /// Attaches `e` to the tree; its tail must be in the tree and its head
    /// must not.
    pub(crate) fn attach(&mut self, g: &CrowellGraph, e: EdgeId) {
        let edge = g.edge(e);
        debug_assert!(self.in_tree[edge.tail - 1] && !self.in_tree[edge.head - 1]);
        self.parent[edge.head - 1] = Some(e);
        self.in_tree[edge.head - 1] = true;
    }

    pub(crate) fn into_state(self) -> State {
        State::from_parents_unchecked(self.root, self.parent)
    }
}

/// All states for one root, in canonical key order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    root: Vertex,
    states: Vec<State>,
    keys: Vec<Vec<EdgeId>>,
}

impl StateSet {
    fn new(root: Vertex, mut states: Vec<State>) -> Self {
        states.sort_by_cached_key(State::key);
        states.dedup();
        let keys = states.iter().map(State::key).collect();
        StateSet { root, states, keys }
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn iter(&self) -> std::slice::Iter<'_, State> {
        self.states.iter()
    }

    pub fn get(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.keys.binary_search(&s.key()).ok()
    }

    /// Unnormalized `Σ w(T)`.
    pub fn state_sum(&self, g: &CrowellGraph) -> IntPoly {
        self.states
            .iter()
            .fold(IntPoly::zero(), |acc, s| &acc + &state_weight(s, g))
    }

    /// `{"schema":1,"root":r,"states":[{"key":[..],"degree":d}]}`.
    pub fn to_json(&self, g: &CrowellGraph) -> serde_json::Value {
        let states: Vec<_> = self
            .states
            .iter()
            .zip(&self.keys)
            .map(|(s, k)| json!({ "key": k, "degree": s.degree(g) }))
            .collect();
        json!({ "schema": 1, "root": self.root, "states": states })
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = &'a State;
    type IntoIter = std::slice::Iter<'a, State>;

    fn into_iter(self) -> Self::IntoIter {
        self.states.iter()
    }
}

/// Enumerates every spanning arborescence rooted at `root` by choosing an
/// incoming edge per vertex, backtracking on cycles and pruning branches in
/// which some vertex can no longer be reached from the root.
pub fn enumerate_states(g: &CrowellGraph, root: Vertex) -> Result<StateSet, StateError> {
    let n = g.vertex_count();
    if root == 0 || root > n {
        return Err(StateError::UnknownVertex(root));
    }
    let order: Vec<Vertex> = g.vertices().filter(|&v| v != root).collect();
    let mut parent = vec![None; n];
    let mut out = Vec::new();
    search(g, root, &order, 0, &mut parent, &mut out);
    if out.is_empty() {
        return Err(StateError::NoStates);
    }
    Ok(StateSet::new(root, out))
}

fn search(
    g: &CrowellGraph,
    root: Vertex,
    order: &[Vertex],
    i: usize,
    parent: &mut Vec<Option<EdgeId>>,
    out: &mut Vec<State>,
) {
    let Some(&v) = order.get(i) else {
        out.push(State::from_parents_unchecked(root, parent.clone()));
        return;
    };
    for &e in g.incoming(v) {
        let tail = g.edge(e).tail;
        if tail == v || closes_cycle(g, parent, tail, v) {
            continue;
        }
        parent[v - 1] = Some(e);
        if all_reachable(g, root, parent, &order[i + 1..]) {
            search(g, root, order, i + 1, parent, out);
        }
        parent[v - 1] = None;
    }
}

fn closes_cycle(g: &CrowellGraph, parent: &[Option<EdgeId>], from: Vertex, target: Vertex) -> bool {
    let mut x = from;
    loop {
        if x == target {
            return true;
        }
        match parent[x - 1] {
            Some(e) => x = g.edge(e).tail,
            None => return false,
        }
    }
}

/// Whether the root still reaches every vertex using decided parent edges
/// plus any incoming edge of an undecided vertex.
fn all_reachable(
    g: &CrowellGraph,
    root: Vertex,
    parent: &[Option<EdgeId>],
    undecided: &[Vertex],
) -> bool {
    let n = g.vertex_count();
    let mut open = vec![false; n];
    for &v in undecided {
        open[v - 1] = true;
    }
    let mut seen = vec![false; n];
    seen[root - 1] = true;
    let mut queue = VecDeque::from([root]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &e in g.outgoing(u) {
            let x = g.edge(e).head;
            if seen[x - 1] || x == root {
                continue;
            }
            if open[x - 1] || parent[x - 1] == Some(e) {
                seen[x - 1] = true;
                count += 1;
                queue.push_back(x);
            }
        }
    }
    count == n
}

/// `w(T) = (-t)^d` where `d` counts the `-t` edges of the state.
pub fn state_weight(s: &State, g: &CrowellGraph) -> IntPoly {
    IntPoly::minus_t_pow(s.degree(g))
}

/// State-sum Alexander polynomial, normalized by `(-t)^m` so that its
/// lowest-order term is a positive constant. Returns the polynomial and `m`.
pub fn alexander(g: &CrowellGraph, root: Vertex) -> Result<(IntPoly, i32), StateError> {
    let states = enumerate_states(g, root)?;
    states.state_sum(g).normalize().ok_or(StateError::NoStates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crowell::build_crowell;
    use crate::knot_io::parse_pd;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    fn graph(pd: &str) -> CrowellGraph {
        build_crowell(&parse_pd(pd).unwrap()).unwrap()
    }

    /// Tries every choice of incoming edge per non-root vertex.
    fn brute_force_states(g: &CrowellGraph, root: Vertex) -> Vec<Vec<EdgeId>> {
        let others: Vec<Vertex> = g.vertices().filter(|&v| v != root).collect();
        let mut found = Vec::new();
        for mask in 0..(1u32 << others.len()) {
            let edges: Vec<EdgeId> = others
                .iter()
                .enumerate()
                .map(|(i, &v)| g.incoming(v)[((mask >> i) & 1) as usize])
                .collect();
            if let Ok(s) = State::from_edges(g, root, edges) {
                found.push(s.key());
            }
        }
        found.sort();
        found
    }

    #[test]
    fn trefoil_states() {
        let g = graph(TREFOIL);
        for root in 1..=3 {
            let set = enumerate_states(&g, root).unwrap();
            assert_eq!(set.len(), 3);
            let keys: Vec<_> = set.iter().map(State::key).collect();
            assert_eq!(keys, brute_force_states(&g, root));
            let mut degrees: Vec<usize> = set.iter().map(|s| s.degree(&g)).collect();
            degrees.sort();
            assert_eq!(degrees, vec![0, 1, 2]);
        }
    }

    #[test]
    fn trefoil_weights() {
        let g = graph(TREFOIL);
        let set = enumerate_states(&g, 1).unwrap();
        let bottom = set.iter().find(|s| s.degree(&g) == 0).unwrap();
        assert_eq!(state_weight(bottom, &g), IntPoly::one());
        let top = set.iter().find(|s| s.degree(&g) == 2).unwrap();
        assert_eq!(state_weight(top, &g), IntPoly::from_coeffs(vec![0, 0, 1]));
        for s in &set {
            let plus = s
                .key()
                .iter()
                .filter(|&&e| g.edge(e).weight == Weight::PlusOne)
                .count();
            assert_eq!(s.degree(&g) + plus, 2);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let g = graph(FIGURE_EIGHT);
        for root in g.vertices() {
            let set = enumerate_states(&g, root).unwrap();
            let keys: Vec<_> = set.iter().map(State::key).collect();
            assert_eq!(keys, brute_force_states(&g, root));
            assert_eq!(set.len(), 5);
        }
    }

    #[test]
    fn alexander_trefoil_and_figure_eight() {
        let (p, m) = alexander(&graph(TREFOIL), 1).unwrap();
        assert_eq!(p, IntPoly::from_coeffs(vec![1, -1, 1]));
        assert_eq!(m, 0);
        let (p, _) = alexander(&graph(FIGURE_EIGHT), 1).unwrap();
        assert_eq!(p, IntPoly::from_coeffs(vec![1, -3, 1]));
    }

    #[test]
    fn state_validation() {
        let g = graph(TREFOIL);
        // Edges 4 (1->2) and 6 (2->3) form a chain from root 1.
        let s = State::from_edges(&g, 1, [4, 6]).unwrap();
        assert_eq!(s.initial_segment(3, &g), vec![1, 2, 3]);
        assert_eq!(s.children(1, &g), vec![2]);
        assert!(s.is_leaf(3, &g));
        assert!(s.validate(&g).is_ok());
        assert!(matches!(
            State::from_edges(&g, 1, [4]),
            Err(StateError::NotATree(_))
        ));
        assert!(matches!(
            State::from_edges(&g, 1, [1, 4]),
            Err(StateError::EdgeIntoRoot(1))
        ));
        // 3->2 and 2->3 form a cycle away from the root.
        assert!(matches!(
            State::from_edges(&g, 1, [3, 6]),
            Err(StateError::NotATree(_))
        ));
        assert!(matches!(
            enumerate_states(&g, 9),
            Err(StateError::UnknownVertex(9))
        ));
    }

    #[test]
    fn state_set_json() {
        let g = graph(TREFOIL);
        let set = enumerate_states(&g, 1).unwrap();
        let v = set.to_json(&g);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["states"].as_array().unwrap().len(), 3);
        assert_eq!(v["states"][0]["key"], json!([3, 5]));
        assert_eq!(v["states"][0]["degree"], 2);
    }
}
