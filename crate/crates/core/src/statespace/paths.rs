//! Constructive rooted paths and tree extensions.
//!
//! Every face boundary of a Crowell graph is a directed cycle, so an edge
//! traversed the wrong way can be replaced by the rest of the boundary of
//! either face next to it. The routines here build walks that way and then
//! cut out repeated vertices.

use crate::crowell::{CrowellGraph, EdgeId, Vertex};

use super::{PartialTree, State, StateError};

fn broken(msg: impl Into<String>) -> StateError {
    StateError::HypothesisViolation(msg.into())
}

/// Directed walk around face `f` from the head of `e` back to its tail.
fn face_detour(g: &CrowellGraph, f: usize, e: EdgeId) -> Result<Vec<EdgeId>, StateError> {
    let cycle = g
        .face_cycle(f)
        .ok_or_else(|| broken(format!("face {f} is not a directed cycle")))?;
    let pos = cycle
        .iter()
        .position(|&x| x == e)
        .ok_or_else(|| broken(format!("edge {e} is not on face {f}")))?;
    Ok((1..cycle.len())
        .map(|i| cycle[(pos + i) % cycle.len()])
        .collect())
}

/// Given consecutive edges `a -> w` and `w -> b` on the boundary of a face
/// `R`, returns a walk from `a` to `b` that follows, for every other edge of
/// `R`, the boundary of the face across that edge.
fn region_bypass(g: &CrowellGraph, e_in: EdgeId, e_out: EdgeId) -> Result<Vec<EdgeId>, StateError> {
    let w = g.edge(e_in).head;
    let region = g.face_between(w, e_in, e_out).ok_or_else(|| {
        broken(format!(
            "edges {e_in} and {e_out} do not share a corner at {w}"
        ))
    })?;
    let cycle = g
        .face_cycle(region)
        .ok_or_else(|| broken(format!("face {region} is not a directed cycle")))?;
    let len = cycle.len();
    let start = (0..len)
        .find(|&i| cycle[i] == e_in && cycle[(i + 1) % len] == e_out)
        .ok_or_else(|| broken(format!("face {region} does not run {e_in} then {e_out}")))?;
    // Remaining boundary of R, from b back to a.
    let rest: Vec<EdgeId> = (2..len).map(|i| cycle[(start + i) % len]).collect();
    let mut walk = Vec::new();
    for &f in rest.iter().rev() {
        let [l, r] = g.edge_faces(f);
        let across = if l != region {
            l
        } else if r != region {
            r
        } else {
            return Err(broken(format!("edge {f} has face {region} on both sides")));
        };
        walk.extend(face_detour(g, across, f)?);
    }
    Ok(walk)
}

/// Shortens a directed walk starting at `start` to a simple path with the
/// same endpoints by cutting out everything between the first and last
/// visit of each repeated vertex.
pub fn excise_loops(g: &CrowellGraph, start: Vertex, walk: &[EdgeId]) -> Vec<EdgeId> {
    let mut vertices = vec![start];
    let mut edges: Vec<EdgeId> = Vec::new();
    for &e in walk {
        let h = g.edge(e).head;
        if let Some(p) = vertices.iter().position(|&v| v == h) {
            vertices.truncate(p + 1);
            edges.truncate(p);
        } else {
            vertices.push(h);
            edges.push(e);
        }
    }
    edges
}

fn path_vertices(g: &CrowellGraph, start: Vertex, path: &[EdgeId]) -> Vec<Vertex> {
    std::iter::once(start)
        .chain(path.iter().map(|&e| g.edge(e).head))
        .collect()
}

/// Simple directed path from `root` to `v`.
///
/// Starts from a shortest path in the underlying undirected graph, replaces
/// each edge used against its direction by the boundary of the face on its
/// left, then removes revisit loops.
pub fn rooted_path(g: &CrowellGraph, root: Vertex, v: Vertex) -> Result<Vec<EdgeId>, StateError> {
    let n = g.vertex_count();
    for x in [root, v] {
        if x == 0 || x > n {
            return Err(StateError::UnknownVertex(x));
        }
    }
    if v == root {
        return Ok(Vec::new());
    }
    // BFS over the underlying undirected multigraph, edges in id order.
    let mut prev: Vec<Option<(EdgeId, Vertex)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root - 1] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for e in g.edges() {
            let y = if e.tail == x {
                e.head
            } else if e.head == x {
                e.tail
            } else {
                continue;
            };
            if !seen[y - 1] {
                seen[y - 1] = true;
                prev[y - 1] = Some((e.id, x));
                queue.push_back(y);
            }
        }
    }
    if !seen[v - 1] {
        return Err(broken(format!("vertex {v} is disconnected from {root}")));
    }
    let mut steps = Vec::new();
    let mut x = v;
    while let Some((e, p)) = prev[x - 1] {
        steps.push((e, p));
        x = p;
    }
    steps.reverse();

    let mut walk = Vec::new();
    for (e, from) in steps {
        if g.edge(e).tail == from {
            walk.push(e);
        } else {
            let [left, _] = g.edge_faces(e);
            walk.extend(face_detour(g, left, e)?);
        }
    }
    Ok(excise_loops(g, root, &walk))
}

/// Grows a rooted tree into a state: for each vertex still missing, takes a
/// rooted path to it and adds the final segment after its last vertex
/// already in the tree.
pub fn extend_to_state(
    g: &CrowellGraph,
    root: Vertex,
    partial: &[EdgeId],
) -> Result<State, StateError> {
    let tree = PartialTree::from_edges(g, root, partial.iter().copied())?;
    extend_tree(g, tree)
}

fn extend_tree(g: &CrowellGraph, mut tree: PartialTree) -> Result<State, StateError> {
    let root = tree.root;
    for v in g.vertices() {
        if tree.contains(v) {
            continue;
        }
        let path = rooted_path(g, root, v)?;
        attach_final_segment(g, &mut tree, root, &path);
    }
    Ok(tree.into_state())
}

/// Adds the part of `path` after its last vertex already in `tree`. Returns
/// that vertex.
fn attach_final_segment(
    g: &CrowellGraph,
    tree: &mut PartialTree,
    start: Vertex,
    path: &[EdgeId],
) -> Vertex {
    let verts = path_vertices(g, start, path);
    let last = (0..verts.len())
        .rev()
        .find(|&i| tree.contains(verts[i]))
        .expect("path starts inside the tree");
    for &e in &path[last..] {
        tree.attach(g, e);
    }
    verts[last]
}

/// A state in which `e0` is a terminal edge (its head is a leaf).
///
/// Builds a rooted path to the tail of `e0` that avoids its head, rerouting
/// around the face at the head's corner if needed, attaches `e0`, then hangs
/// both out-neighbours of the head onto the tree through paths that avoid
/// the head before extending to a spanning tree.
pub fn state_with_terminal_edge(
    g: &CrowellGraph,
    root: Vertex,
    e0: EdgeId,
) -> Result<State, StateError> {
    if root == 0 || root > g.vertex_count() {
        return Err(StateError::UnknownVertex(root));
    }
    if e0 == 0 || e0 > g.edges().len() {
        return Err(StateError::NotATree(format!("unknown edge {e0}")));
    }
    let (w0, w1) = (g.edge(e0).tail, g.edge(e0).head);
    if w1 == root {
        return Err(StateError::EdgeIntoRoot(e0));
    }
    if w0 == w1 {
        return Err(broken(format!("edge {e0} is a loop")));
    }

    let mut gamma = rooted_path(g, root, w0)?;
    let verts = path_vertices(g, root, &gamma);
    if let Some(pos) = verts.iter().position(|&x| x == w1) {
        // gamma runs v' -> w1 -> v''; swap that pair for a bypass.
        let (e_in, e_out) = (gamma[pos - 1], gamma[pos]);
        let bypass = region_bypass(g, e_in, e_out)?;
        let walk: Vec<EdgeId> = gamma[..pos - 1]
            .iter()
            .chain(&bypass)
            .chain(&gamma[pos + 1..])
            .copied()
            .collect();
        gamma = excise_loops(g, root, &walk);
        if path_vertices(g, root, &gamma).contains(&w1) {
            return Err(broken(format!("no rooted path to {w0} avoids {w1}")));
        }
    }

    let mut tree = PartialTree::empty(g, root);
    for &e in gamma.iter().chain([&e0]) {
        tree.attach(g, e);
    }
    let mut outs: Vec<EdgeId> = g.outgoing(w1).to_vec();
    outs.sort_unstable();
    for e1 in outs {
        let x = g.edge(e1).head;
        if tree.contains(x) {
            continue;
        }
        let beta = excise_loops(g, w0, &region_bypass(g, e0, e1)?);
        if path_vertices(g, w0, &beta).last() != Some(&x) {
            return Err(broken(format!("bypass from {w0} does not reach {x}")));
        }
        if attach_final_segment(g, &mut tree, w0, &beta) == w1 {
            return Err(broken(format!("{x} can only be reached through {w1}")));
        }
    }

    let state = extend_tree(g, tree)?;
    if state.parent_edge(w1) != Some(e0) || !state.is_leaf(w1, g) {
        return Err(broken(format!("edge {e0} did not stay terminal")));
    }
    Ok(state)
}
