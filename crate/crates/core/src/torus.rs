//! The (2, 2n+1) torus knots: their Alexander polynomials, standard
//! diagrams, and the rigid state-space structure a diagram must have when
//! its polynomial belongs to that family.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::crowell::{build_crowell, CrowellError, CrowellGraph, Weight};
use crate::knot_io::{parse_pd, Diagram, DiagramError};
use crate::moves::{exchange_graph, terminal_edges, ExchangeGraph, MoveError};
use crate::poly::IntPoly;
use crate::statespace::{enumerate_states, StateError, StateSet};

/// Printed with every torus verdict: primality is not derived from the
/// polynomial here but checked on the diagram.
pub const PRIMALITY_NOTE: &str =
    "primality checked on the diagram (2-connected Tait graph), not deduced from the polynomial";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("n must be at least 1, got {0}")]
    InvalidN(usize),
    #[error("polynomial {0} is not 1 + (-t) + ... + (-t)^2n")]
    PolyMismatch(IntPoly),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Crowell(#[from] CrowellError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Move(#[from] MoveError),
}

/// `1 + (-t) + (-t)^2 + ... + (-t)^(2n)`.
pub fn torus_poly(n: usize) -> Result<IntPoly, TorusError> {
    if n < 1 {
        return Err(TorusError::InvalidN(n));
    }
    Ok(IntPoly::from_minus_t_coeffs(&vec![1; 2 * n + 1]))
}

pub fn is_torus_alexander(p: &IntPoly) -> Option<usize> {
    let d = p.degree()?;
    if d == 0 || d % 2 == 1 {
        return None;
    }
    let n = d / 2;
    (torus_poly(n).ok()? == *p).then_some(n)
}

/// PD code of the closed two-strand braid with `2n+1` crossings.
pub fn torus_pd(n: usize) -> Result<String, TorusError> {
    if n < 1 {
        return Err(TorusError::InvalidN(n));
    }
    let k = 2 * n + 1;
    let arcs = 2 * k;
    let label = |a: usize| (a - 1) % arcs + 1;
    let crossings: Vec<String> = (0..k)
        .map(|i| {
            let a = 2 * i + 1;
            format!(
                "X({},{},{},{})",
                a,
                label(a + k),
                label(a + 1),
                label(a + k + 1)
            )
        })
        .collect();
    Ok(crossings.join(" "))
}

pub fn standard_torus_diagram(n: usize) -> Result<Diagram, TorusError> {
    Ok(parse_pd(&torus_pd(n)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    pub n: usize,
    pub poly_matches: bool,
    /// The `+1` edges form one directed cycle through every vertex.
    pub plus_cycle: bool,
    /// The `-t` edges form one cycle, each joining neighbours on the `+1` cycle.
    pub minus_cycle: bool,
    /// The exchange graph is a simple path on `2n+1` states.
    pub path_statespace: bool,
    /// Walking the path, the t-degrees read `0, 1, ..., 2n`.
    pub degrees_in_order: bool,
    /// The degree-0 state has `2n` edges, all of weight `+1`.
    pub bottom_state: bool,
    /// Terminal edge counts of the two end states.
    pub endpoint_leaf_counts: (usize, usize),
    /// Every state strictly inside the path has two terminal edges.
    pub interior_two_terminal: bool,
}

impl TorusReport {
    pub fn passes(&self) -> bool {
        self.poly_matches
            && self.plus_cycle
            && self.minus_cycle
            && self.path_statespace
            && self.degrees_in_order
            && self.bottom_state
            && self.interior_two_terminal
            && self.endpoint_leaf_counts == (1, 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["schema"] = json!(1);
        v["passes"] = json!(self.passes());
        v
    }
}

/// Successor map of the `weight` edges if they form a single directed
/// cycle through all vertices.
fn weight_cycle(g: &CrowellGraph, weight: Weight) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut next = vec![0; n + 1];
    let mut indeg = vec![0; n + 1];
    for e in g.edges().iter().filter(|e| e.weight == weight) {
        if next[e.tail] != 0 {
            return None;
        }
        next[e.tail] = e.head;
        indeg[e.head] += 1;
    }
    if (1..=n).any(|v| next[v] == 0 || indeg[v] != 1) {
        return None;
    }
    let (mut v, mut len) = (next[1], 1);
    while v != 1 {
        v = next[v];
        len += 1;
    }
    (len == n).then_some(next)
}

pub fn verify_torus_structure(
    g: &CrowellGraph,
    states: &StateSet,
    xg: &ExchangeGraph,
) -> Result<TorusReport, TorusError> {
    let poly = states
        .state_sum(g)
        .normalize()
        .map(|(p, _)| p)
        .unwrap_or_else(IntPoly::zero);
    let n = is_torus_alexander(&poly).ok_or(TorusError::PolyMismatch(poly))?;
    let k = 2 * n + 1;

    let plus = weight_cycle(g, Weight::PlusOne);
    let plus_cycle = plus.is_some() && g.vertex_count() == k;
    let minus_cycle = match (&plus, weight_cycle(g, Weight::MinusT)) {
        (Some(p), Some(_)) => g
            .edges()
            .iter()
            .filter(|e| e.weight == Weight::MinusT)
            .all(|e| p[e.tail] == e.head || p[e.head] == e.tail),
        _ => false,
    };

    let order = xg.path_order();
    let path_statespace = order.as_ref().is_some_and(|o| o.len() == k);
    let degrees_in_order = order
        .as_ref()
        .is_some_and(|o| o.iter().enumerate().all(|(i, &s)| xg.state_degree(s) == i));
    let leaves = |i: usize| terminal_edges(states.get(i), g).len();
    let (endpoint_leaf_counts, interior_two_terminal) = match &order {
        Some(o) => (
            (leaves(o[0]), leaves(o[o.len() - 1])),
            o[1..o.len() - 1].iter().all(|&i| leaves(i) == 2),
        ),
        None => ((0, 0), false),
    };
    let bottom_state = states
        .iter()
        .any(|s| s.degree(g) == 0 && s.edge_count() == 2 * n);

    Ok(TorusReport {
        n,
        poly_matches: true,
        plus_cycle,
        minus_cycle,
        path_statespace,
        degrees_in_order,
        bottom_state,
        endpoint_leaf_counts,
        interior_two_terminal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Torus {
        n: usize,
        prime_diagram: bool,
        report: TorusReport,
    },
    NotTorus {
        poly: IntPoly,
        prime_diagram: bool,
    },
}

impl Verdict {
    pub fn torus_n(&self) -> Option<usize> {
        match self {
            Verdict::Torus { n, .. } => Some(*n),
            Verdict::NotTorus { .. } => None,
        }
    }

    /// A non-torus verdict passes trivially; a torus one only if its report does.
    pub fn passes(&self) -> bool {
        match self {
            Verdict::Torus { report, .. } => report.passes(),
            Verdict::NotTorus { .. } => true,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Torus {
                n,
                prime_diagram,
                report,
            } => json!({
                "schema": 1,
                "torus": true,
                "n": n,
                "prime_diagram": prime_diagram,
                "note": PRIMALITY_NOTE,
                "report": report.to_json(),
            }),
            Verdict::NotTorus {
                poly,
                prime_diagram,
            } => json!({
                "schema": 1,
                "torus": false,
                "alexander": poly.to_string(),
                "prime_diagram": prime_diagram,
                "note": PRIMALITY_NOTE,
            }),
        }
    }
}

/// Decides whether `d` has a torus-family polynomial and, if so, checks the
/// full structure of its state space (rooted at crossing 1).
pub fn characterize(d: &Diagram) -> Result<Verdict, TorusError> {
    let g = build_crowell(d)?;
    let prime_diagram = d.is_prime_diagram();
    let states = enumerate_states(&g, 1)?;
    let (poly, _) = states
        .state_sum(&g)
        .normalize()
        .ok_or(StateError::NoStates)?;
    let Some(n) = is_torus_alexander(&poly) else {
        return Ok(Verdict::NotTorus {
            poly,
            prime_diagram,
        });
    };
    let xg = exchange_graph(&states, &g)?;
    let report = verify_torus_structure(&g, &states, &xg)?;
    Ok(Verdict::Torus {
        n,
        prime_diagram,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family() {
        assert_eq!(torus_poly(1).unwrap().to_string(), "1 - t + t^2");
        assert_eq!(torus_poly(3).unwrap().coeffs(), [1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(torus_poly(0), Err(TorusError::InvalidN(0)));
        for n in 1..8 {
            let p = torus_poly(n).unwrap();
            assert_eq!(p.eval(-1), 2 * n as i64 + 1);
            assert_eq!(is_torus_alexander(&p), Some(n));
        }
        assert_eq!(
            is_torus_alexander(&IntPoly::from_coeffs(vec![1, -3, 1])),
            None
        );
        assert_eq!(is_torus_alexander(&IntPoly::one()), None);
        assert_eq!(is_torus_alexander(&IntPoly::zero()), None);
    }

    #[test]
    fn standard_diagrams() {
        assert_eq!(torus_pd(1).unwrap(), "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)");
        assert!(standard_torus_diagram(0).is_err());
        for n in 1..=6 {
            let d = standard_torus_diagram(n).unwrap();
            assert_eq!(d.crossing_count(), 2 * n + 1);
            assert!(d.is_alternating() && d.is_reduced() && d.is_prime_diagram());
        }
    }

    #[test]
    fn characterizes_torus_diagrams() {
        for n in 1..=6 {
            let v = characterize(&standard_torus_diagram(n).unwrap()).unwrap();
            assert_eq!(v.torus_n(), Some(n));
            assert!(v.passes(), "{v:?}");
        }
        let d = standard_torus_diagram(1).unwrap();
        let g = build_crowell(&d).unwrap();
        let states = enumerate_states(&g, 1).unwrap();
        let xg = exchange_graph(&states, &g).unwrap();
        let r = verify_torus_structure(&g, &states, &xg).unwrap();
        assert!(r.path_statespace);
        assert_eq!(xg.node_count(), 3);
        let j = r.to_json();
        for field in [
            "poly_matches",
            "plus_cycle",
            "minus_cycle",
            "path_statespace",
            "bottom_state",
        ] {
            assert_eq!(j[field], true, "{field}");
        }
    }

    #[test]
    fn rejects_other_polynomials() {
        let eight = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        let g = build_crowell(&eight).unwrap();
        let states = enumerate_states(&g, 1).unwrap();
        let xg = exchange_graph(&states, &g).unwrap();
        assert!(matches!(
            verify_torus_structure(&g, &states, &xg),
            Err(TorusError::PolyMismatch(_))
        ));
        let v = characterize(&eight).unwrap();
        assert_eq!(v.torus_n(), None);
        assert_eq!(v.to_json()["alexander"], "1 - 3t + t^2");
    }
}
