//! Turning one state into another by terminal edge exchanges.
//!
//! The common part of two states grows one vertex at a time. To add a vertex
//! `w` whose target parent is already shared, everything hanging below `w`
//! is first moved elsewhere (recursively, always detaching a vertex whose
//! other parent lies outside the subtree), which makes `w` a leaf; then `w`
//! itself is exchanged onto the shared part.

use serde::Serialize;
use serde_json::json;

use super::{exchange, Move, MoveError};
use crate::crowell::{CrowellGraph, EdgeId, Vertex};
use crate::statespace::{PartialTree, State};

/// Why a move was emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Detaching a vertex below `target`, `depth` levels into the recursion.
    ClearBelow { target: Vertex, depth: usize },
    /// Attaching a leaf to the common part, which then has `meet_edges` edges.
    MeetGrowth { meet_edges: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
    pub provenance: Vec<Provenance>,
}

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    fn push(&mut self, mv: Move, why: Provenance) {
        self.moves.push(mv);
        self.provenance.push(why);
    }

    fn extend(&mut self, other: MoveSequence) {
        self.moves.extend(other.moves);
        self.provenance.extend(other.provenance);
    }

    /// Every intermediate state, starting with `start` itself. Each recorded
    /// move must match the exchange actually performed.
    pub fn replay(&self, start: &State, g: &CrowellGraph) -> Result<Vec<State>, MoveError> {
        let mut trail = vec![start.clone()];
        for mv in &self.moves {
            let cur = trail.last().expect("trail starts non-empty");
            let (next, done) = exchange(cur, mv.vertex, g)?;
            if done != *mv {
                return Err(MoveError::HypothesisViolation(format!(
                    "recorded move at vertex {} does not match the state",
                    mv.vertex
                )));
            }
            next.validate(g)?;
            trail.push(next);
        }
        Ok(trail)
    }

    pub fn apply(&self, start: &State, g: &CrowellGraph) -> Result<State, MoveError> {
        Ok(self.replay(start, g)?.pop().expect("trail is non-empty"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let moves: Vec<_> = self
            .moves
            .iter()
            .zip(&self.provenance)
            .map(|(m, p)| json!({ "move": m, "provenance": p }))
            .collect();
        json!({ "schema": 1, "length": self.len(), "moves": moves })
    }
}

/// The component of the root in the intersection of two states.
pub fn rooted_meet(t1: &State, t2: &State, g: &CrowellGraph) -> PartialTree {
    let mut meet = PartialTree::empty(g, t1.root());
    if t1.root() != t2.root() {
        return meet;
    }
    let mut stack = vec![t1.root()];
    while let Some(u) = stack.pop() {
        for &e in g.outgoing(u) {
            let head = g.edge(e).head;
            if !meet.contains(head)
                && t1.parent_edge(head) == Some(e)
                && t2.parent_edge(head) == Some(e)
            {
                meet.attach(g, e);
                stack.push(head);
            }
        }
    }
    meet
}

/// The vertices strictly below `w`, split into the connected pieces of the
/// graph they induce. `components[0]` holds `w`'s smaller-labelled child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Below {
    pub vertices: Vec<Vertex>,
    pub components: Vec<Vec<Vertex>>,
}

impl Below {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }
}

pub fn below(w: Vertex, t: &State, g: &CrowellGraph) -> Below {
    let children: Vec<Vec<Vertex>> = {
        let mut c = vec![Vec::new(); g.vertex_count()];
        for v in g.vertices() {
            if let Some(p) = t.parent(v, g) {
                c[p - 1].push(v);
            }
        }
        c
    };
    let mut vertices = Vec::new();
    let mut stack = children[w - 1].clone();
    while let Some(v) = stack.pop() {
        vertices.push(v);
        stack.extend(&children[v - 1]);
    }
    vertices.sort_unstable();

    let inside = |v: Vertex| vertices.binary_search(&v).is_ok();
    let mut comp = vec![usize::MAX; g.vertex_count()];
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    let first_child = children[w - 1].iter().min().copied();
    let seeds = first_child.into_iter().chain(vertices.iter().copied());
    for seed in seeds {
        if comp[seed - 1] != usize::MAX {
            continue;
        }
        let id = components.len();
        comp[seed - 1] = id;
        let mut members = vec![seed];
        let mut stack = vec![seed];
        while let Some(u) = stack.pop() {
            let around = g.outgoing(u).iter().map(|&e| g.edge(e).head);
            let around = around.chain(g.incoming(u).iter().map(|&e| g.edge(e).tail));
            for x in around.collect::<Vec<_>>() {
                if inside(x) && comp[x - 1] == usize::MAX {
                    comp[x - 1] = id;
                    members.push(x);
                    stack.push(x);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    Below {
        vertices,
        components,
    }
}

/// Tail of the incoming edge of `v` that is not in `t`.
pub fn phi(v: Vertex, t: &State, g: &CrowellGraph) -> Result<Vertex, MoveError> {
    let e = t.parent_edge(v).ok_or(MoveError::VertexIsRoot(v))?;
    let other = g.other_incoming(e).ok_or_else(|| {
        MoveError::HypothesisViolation(format!("vertex {v} has one incoming edge"))
    })?;
    Ok(g.edge(other).tail)
}

/// A vertex below `w` whose other parent lies outside the subtree of `w`:
/// the smallest head of an edge entering the first component from outside
/// that subtree, falling back to the remaining components in order.
pub fn find_w_prime(w: Vertex, t: &State, g: &CrowellGraph) -> Result<Vertex, MoveError> {
    let bel = below(w, t, g);
    pick_w_prime(w, &bel, g).ok_or(MoveError::NotFound(w))
}

fn pick_w_prime(w: Vertex, bel: &Below, g: &CrowellGraph) -> Option<Vertex> {
    bel.components.iter().find_map(|comp| {
        comp.iter()
            .copied()
            .filter(|&x| {
                g.incoming(x).iter().any(|&e| {
                    let tail = g.edge(e).tail;
                    tail != w && !bel.contains(tail)
                })
            })
            .min()
    })
}

/// Exchanges only below `w` until `w` is a leaf.
pub fn clear_below(
    w: Vertex,
    t: &State,
    g: &CrowellGraph,
) -> Result<(MoveSequence, State), MoveError> {
    if t.parent_edge(w).is_none() {
        return Err(MoveError::VertexIsRoot(w));
    }
    clear(w, t.clone(), g, 0)
}

fn clear(
    w: Vertex,
    mut t: State,
    g: &CrowellGraph,
    depth: usize,
) -> Result<(MoveSequence, State), MoveError> {
    if depth > g.vertex_count() {
        return Err(MoveError::HypothesisViolation(format!(
            "recursion below {w} does not terminate"
        )));
    }
    let mut seq = MoveSequence::default();
    loop {
        let bel = below(w, &t, g);
        if bel.is_empty() {
            return Ok((seq, t));
        }
        let w1 = pick_w_prime(w, &bel, g).ok_or_else(|| {
            MoveError::HypothesisViolation(format!(
                "nothing below {w} has a parent outside its subtree"
            ))
        })?;
        let (inner, cleared) = clear(w1, t, g, depth + 1)?;
        seq.extend(inner);
        let (next, mv) = exchange(&cleared, w1, g)?;
        seq.push(mv, Provenance::ClearBelow { target: w, depth });
        if below(w, &next, g).len() >= bel.len() {
            return Err(MoveError::HypothesisViolation(format!(
                "exchange at {w1} did not shrink the subtree of {w}"
            )));
        }
        t = next;
    }
}

/// Exchanges turning `t1` into `t2`, growing their rooted meet each round.
pub fn transform(t1: &State, t2: &State, g: &CrowellGraph) -> Result<MoveSequence, MoveError> {
    if t1.root() != t2.root() {
        return Err(MoveError::HypothesisViolation(
            "states have different roots".into(),
        ));
    }
    let n = g.vertex_count();
    let mut seq = MoveSequence::default();
    let mut cur = t1.clone();
    loop {
        let meet = rooted_meet(&cur, t2, g);
        if meet.len() == n {
            return Ok(seq);
        }
        let w = g
            .vertices()
            .find(|&v| !meet.contains(v) && t2.parent(v, g).is_some_and(|p| meet.contains(p)))
            .ok_or_else(|| MoveError::HypothesisViolation("rooted meet has no frontier".into()))?;
        let shared: Vec<EdgeId> = meet.edges();
        let (inner, cleared) = clear_below(w, &cur, g)?;
        if let Some(mv) = inner
            .moves
            .iter()
            .find(|m| shared.contains(&m.removed_edge))
        {
            return Err(MoveError::HypothesisViolation(format!(
                "move at {} removed shared edge {}",
                mv.vertex, mv.removed_edge
            )));
        }
        seq.extend(inner);
        let (next, mv) = exchange(&cleared, w, g)?;
        if next.parent_edge(w) != t2.parent_edge(w) {
            return Err(MoveError::HypothesisViolation(format!(
                "vertex {w} did not reach its target edge"
            )));
        }
        let grown = rooted_meet(&next, t2, g);
        if grown.len() <= meet.len() || shared.iter().any(|e| !grown.edges().contains(e)) {
            return Err(MoveError::HypothesisViolation(
                "rooted meet did not grow".into(),
            ));
        }
        seq.push(
            mv,
            Provenance::MeetGrowth {
                meet_edges: grown.len() - 1,
            },
        );
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crowell::build_crowell;
    use crate::knot_io::parse_pd;
    use crate::moves::{exchange_graph, terminal_edges};
    use crate::statespace::enumerate_states;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const SEVEN_SIX: &str =
        "X(1,13,2,12) X(3,9,4,8) X(5,1,6,14) X(7,10,8,11) X(9,3,10,2) X(11,6,12,7) X(13,5,14,4)";

    fn graph(pd: &str) -> CrowellGraph {
        build_crowell(&parse_pd(pd).unwrap()).unwrap()
    }

    #[test]
    fn meet_of_trefoil_extremes_is_trivial() {
        let g = graph(TREFOIL);
        let states = enumerate_states(&g, 1).unwrap();
        let bottom = states.iter().find(|s| s.degree(&g) == 0).unwrap();
        let top = states.iter().find(|s| s.degree(&g) == 2).unwrap();
        assert!(rooted_meet(bottom, top, &g).is_empty());
        assert_eq!(rooted_meet(bottom, bottom, &g).edges(), bottom.key());
        assert_eq!(transform(bottom, top, &g).unwrap().len(), 2);
        assert!(transform(top, top, &g).unwrap().is_empty());
    }

    #[test]
    fn below_on_trefoil_chain() {
        let g = graph(TREFOIL);
        for s in enumerate_states(&g, 1).unwrap().iter() {
            assert_eq!(below(1, s, &g).vertices, [2, 3]);
            for (leaf, _) in terminal_edges(s, &g) {
                assert!(below(leaf, s, &g).is_empty());
                assert_ne!(Some(phi(leaf, s, &g).unwrap()), s.parent(leaf, &g));
            }
        }
        assert_eq!(
            phi(1, enumerate_states(&g, 1).unwrap().get(0), &g),
            Err(MoveError::VertexIsRoot(1))
        );
    }

    #[test]
    fn trefoil_middle_of_chain_clears_in_one_move() {
        let g = graph(TREFOIL);
        for s in enumerate_states(&g, 1).unwrap().iter() {
            let chain = g.vertices().find(|&v| v != 1 && !s.is_leaf(v, &g));
            let Some(w) = chain else { continue };
            let (seq, after) = clear_below(w, s, &g).unwrap();
            assert_eq!(seq.len(), 1);
            assert!(after.is_leaf(w, &g));
            assert_eq!(seq.apply(s, &g).unwrap(), after);
        }
    }

    #[test]
    fn seven_six_transforms_between_all_pairs() {
        let g = graph(SEVEN_SIX);
        let states = enumerate_states(&g, 1).unwrap();
        let xg = exchange_graph(&states, &g).unwrap();
        for (i, a) in states.iter().enumerate() {
            let dist = xg.distances(i);
            for (j, b) in states.iter().enumerate() {
                let seq = transform(a, b, &g).unwrap();
                assert_eq!(&seq.apply(a, &g).unwrap(), b);
                assert!(seq.len() >= dist[j].unwrap());
            }
        }
    }

    #[test]
    fn move_sequence_json() {
        let g = graph(TREFOIL);
        let states = enumerate_states(&g, 1).unwrap();
        let seq = transform(states.get(0), states.get(2), &g).unwrap();
        let j = seq.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["length"], seq.len());
        assert!(j["moves"][0]["provenance"]["kind"].is_string());
    }
}
