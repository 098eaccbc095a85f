//! Directed matrix-tree oracles, independent of state enumeration.

use crate::crowell::{CrowellGraph, Vertex};
use crate::linalg::determinant;
use crate::poly::IntPoly;

use super::StateError;

/// In-degree Laplacian with edge weights `weight(e)`, root row and column
/// removed. Rows and columns follow vertex order with the root skipped.
pub fn weighted_laplacian_minor<R: Clone>(
    g: &CrowellGraph,
    root: Vertex,
    zero: R,
    weight: impl Fn(usize) -> R,
    add: impl Fn(&R, &R) -> R,
    sub: impl Fn(&R, &R) -> R,
) -> Vec<Vec<R>> {
    let others: Vec<Vertex> = g.vertices().filter(|&v| v != root).collect();
    let pos = |v: Vertex| others.iter().position(|&x| x == v);
    let m = others.len();
    let mut lap = vec![vec![zero; m]; m];
    for e in g.edges() {
        if e.tail == e.head {
            continue;
        }
        let Some(h) = pos(e.head) else { continue };
        let w = weight(e.id);
        lap[h][h] = add(&lap[h][h], &w);
        if let Some(t) = pos(e.tail) {
            lap[t][h] = sub(&lap[t][h], &w);
        }
    }
    lap
}

/// Number of spanning arborescences rooted at `root`, by the directed
/// matrix-tree theorem in exact integer arithmetic.
pub fn arborescence_count_oracle(g: &CrowellGraph, root: Vertex) -> i128 {
    let lap = weighted_laplacian_minor(g, root, 0i128, |_| 1, |a, b| a + b, |a, b| a - b);
    determinant(&lap)
}

/// Weighted matrix-tree determinant over `Z[t]`, normalized like the state
/// sum.
pub fn alexander_oracle(g: &CrowellGraph, root: Vertex) -> Result<IntPoly, StateError> {
    if root == 0 || root > g.vertex_count() {
        return Err(StateError::UnknownVertex(root));
    }
    let lap = weighted_laplacian_minor(
        g,
        root,
        IntPoly::zero(),
        |e| g.edge(e).weight.poly(),
        |a, b| a + b,
        |a, b| a - b,
    );
    determinant(&lap)
        .normalize()
        .map(|(p, _)| p)
        .ok_or(StateError::NoStates)
}
