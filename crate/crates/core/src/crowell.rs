//! The directed, weighted graph of an alternating diagram.
//!
//! Vertices are crossings and edges are arcs. Each arc is directed from the
//! crossing where it passes over to the crossing where it passes under, so a
//! vertex's two incoming edges are the halves of its under-strand. The half
//! lying to the left of the oriented over-strand has weight `-t`, the other
//! half has weight `+1`. Which half that is flips with the crossing sign:
//! when the over-strand enters through slot 1 the left half is the incoming
//! under-strand (slot 0), when it enters through slot 3 it is the outgoing
//! one (slot 2).

use serde::{Serialize, Serializer};
use serde_json::json;
use thiserror::Error;

use crate::knot_io::{ArcId, Color, CrossingId, Dart, Diagram};
use crate::poly::IntPoly;

pub type Vertex = CrossingId;
pub type EdgeId = ArcId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrowellError {
    #[error("diagram is not alternating")]
    NotAlternating,
    #[error("diagram is not reduced (crossing {crossing} is nugatory)")]
    NotReduced { crossing: CrossingId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    PlusOne,
    MinusT,
}

impl Weight {
    /// Exponent of `-t` contributed by the edge.
    pub fn degree(self) -> usize {
        match self {
            Weight::PlusOne => 0,
            Weight::MinusT => 1,
        }
    }

    pub fn poly(self) -> IntPoly {
        IntPoly::minus_t_pow(self.degree())
    }

    pub fn label(self) -> &'static str {
        match self {
            Weight::PlusOne => "+1",
            Weight::MinusT => "-t",
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CrowellEdge {
    pub id: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
    pub weight: Weight,
    #[serde(skip)]
    pub tail_slot: usize,
    #[serde(skip)]
    pub head_slot: usize,
}

impl CrowellEdge {
    pub fn tail_dart(&self) -> Dart {
        Dart::new(self.tail, self.tail_slot)
    }

    pub fn head_dart(&self) -> Dart {
        Dart::new(self.head, self.head_slot)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrowellGraph {
    diagram: Diagram,
    edges: Vec<CrowellEdge>,
    in_edges: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
}

pub fn build_crowell(d: &Diagram) -> Result<CrowellGraph, CrowellError> {
    CrowellGraph::new(d)
}

impl CrowellGraph {
    pub fn new(d: &Diagram) -> Result<Self, CrowellError> {
        if !d.is_alternating() {
            return Err(CrowellError::NotAlternating);
        }
        if let Some(c) = d.nugatory_crossing() {
            return Err(CrowellError::NotReduced { crossing: c });
        }
        // Under slot carrying the -t edge at each crossing.
        let minus_slot: Vec<usize> = d
            .crossings()
            .iter()
            .map(|c| {
                let over_in = Dart::new(c.id, 1);
                if d.arc_head(c.arcs[1]) == over_in {
                    0
                } else {
                    2
                }
            })
            .collect();
        let edges = (1..=d.arc_count())
            .map(|arc| {
                let [a, b] = [d.arc_tail(arc), d.arc_head(arc)];
                let (over, under) = if a.slot % 2 == 1 { (a, b) } else { (b, a) };
                CrowellEdge {
                    id: arc,
                    tail: over.crossing,
                    head: under.crossing,
                    weight: if under.slot == minus_slot[under.crossing - 1] {
                        Weight::MinusT
                    } else {
                        Weight::PlusOne
                    },
                    tail_slot: over.slot,
                    head_slot: under.slot,
                }
            })
            .collect();
        let mut g = CrowellGraph {
            diagram: d.clone(),
            edges,
            in_edges: Vec::new(),
            out_edges: Vec::new(),
        };
        g.index();
        Ok(g)
    }

    fn index(&mut self) {
        let n = self.vertex_count();
        self.in_edges = vec![Vec::new(); n];
        self.out_edges = vec![Vec::new(); n];
        for e in &self.edges {
            self.in_edges[e.head - 1].push(e.id);
            self.out_edges[e.tail - 1].push(e.id);
        }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn vertex_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        1..=self.vertex_count()
    }

    pub fn edges(&self) -> &[CrowellEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &CrowellEdge {
        &self.edges[id - 1]
    }

    pub fn incoming(&self, v: Vertex) -> &[EdgeId] {
        &self.in_edges[v - 1]
    }

    pub fn outgoing(&self, v: Vertex) -> &[EdgeId] {
        &self.out_edges[v - 1]
    }

    /// The incoming edge of `head(e)` other than `e`.
    pub fn other_incoming(&self, e: EdgeId) -> Option<EdgeId> {
        self.incoming(self.edge(e).head)
            .iter()
            .copied()
            .find(|&f| f != e)
    }

    /// Edges at `v` in counterclockwise order, starting with the incoming
    /// under-strand.
    pub fn rotation(&self, v: Vertex) -> [EdgeId; 4] {
        self.diagram.crossing(v).arcs
    }

    pub fn face_count(&self) -> usize {
        self.diagram.faces().len()
    }

    pub fn face_color(&self, f: usize) -> Color {
        self.diagram.faces()[f].color
    }

    /// Whether dart `d` traverses its edge from tail to head.
    fn dart_is_forward(&self, d: Dart) -> bool {
        self.edge(self.diagram.arc_at(d)).tail_dart() == d
    }

    /// The boundary of face `f` as a directed cycle of edge ids, or `None`
    /// if the boundary is not consistently directed.
    pub fn face_cycle(&self, f: usize) -> Option<Vec<EdgeId>> {
        let darts = &self.diagram.faces()[f].darts;
        let forward: Vec<bool> = darts.iter().map(|&d| self.dart_is_forward(d)).collect();
        let arcs = darts.iter().map(|&d| self.diagram.arc_at(d));
        if forward.iter().all(|&x| x) {
            Some(arcs.collect())
        } else if forward.iter().all(|&x| !x) {
            let mut cycle: Vec<EdgeId> = arcs.collect();
            cycle.reverse();
            Some(cycle)
        } else {
            None
        }
    }

    /// Faces to the left and right of `e` when travelling from tail to head.
    pub fn edge_faces(&self, e: EdgeId) -> [usize; 2] {
        let edge = self.edge(e);
        [
            self.diagram.face_of_dart(edge.head_dart()),
            self.diagram.face_of_dart(edge.tail_dart()),
        ]
    }

    /// Face at the corner of `v` between two consecutive edges of its
    /// rotation, if `a` and `b` are adjacent there.
    pub fn face_between(&self, v: Vertex, a: EdgeId, b: EdgeId) -> Option<usize> {
        let rot = self.rotation(v);
        (0..4).find_map(|k| {
            let (x, y) = (rot[k], rot[(k + 1) % 4]);
            ((x == a && y == b) || (x == b && y == a)).then(|| self.diagram.face_at_corner(v, k))
        })
    }

    /// Every face boundary is a directed cycle, black faces all traversed
    /// with one handedness and white faces with the other.
    pub fn check_region_compatibility(&self) -> bool {
        let mut handedness: [Option<bool>; 2] = [None, None];
        for (f, face) in self.diagram.faces().iter().enumerate() {
            let forward: Vec<bool> = face
                .darts
                .iter()
                .map(|&d| self.dart_is_forward(d))
                .collect();
            let dir = forward[0];
            if forward.iter().any(|&x| x != dir) {
                return false;
            }
            let slot = match self.face_color(f) {
                Color::Black => 0,
                Color::White => 1,
            };
            match handedness[slot] {
                None => handedness[slot] = Some(dir),
                Some(h) if h != dir => return false,
                Some(_) => {}
            }
        }
        match handedness {
            [Some(b), Some(w)] => b != w,
            _ => true,
        }
    }

    /// Descriptions of every violated structural invariant; empty for a
    /// correctly built graph.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.vertex_count();
        for v in self.vertices() {
            let ins = self.incoming(v);
            if ins.len() != 2 || self.outgoing(v).len() != 2 {
                out.push(format!(
                    "vertex {v}: in/out degree {}/{}",
                    ins.len(),
                    self.outgoing(v).len()
                ));
                continue;
            }
            let mut weights: Vec<Weight> = ins.iter().map(|&e| self.edge(e).weight).collect();
            weights.sort();
            if weights != [Weight::PlusOne, Weight::MinusT] {
                out.push(format!("vertex {v}: incoming weights {weights:?}"));
            }
            let rot = self.rotation(v);
            let incoming: Vec<bool> = rot
                .iter()
                .map(|&e| self.edge(e).head == v && ins.contains(&e))
                .collect();
            if (0..4).any(|k| incoming[k] == incoming[(k + 1) % 4]) {
                out.push(format!("vertex {v}: rotation does not alternate in/out"));
            }
        }
        for e in &self.edges {
            if e.tail == e.head {
                out.push(format!("edge {}: loop at {}", e.id, e.tail));
            }
        }
        let minus = self
            .edges
            .iter()
            .filter(|e| e.weight == Weight::MinusT)
            .count();
        if minus != n || self.edges.len() != 2 * n {
            out.push(format!(
                "weight split {minus}/{} for {n} vertices",
                self.edges.len() - minus
            ));
        }
        out
    }

    /// Reverses edge `id` in place. Only useful for building corrupted
    /// graphs that the compatibility check must reject.
    pub fn reverse_edge(&mut self, id: EdgeId) {
        let e = &mut self.edges[id - 1];
        std::mem::swap(&mut e.tail, &mut e.head);
        std::mem::swap(&mut e.tail_slot, &mut e.head_slot);
        self.index();
    }

    /// JSON export: `{"schema":1,"vertices":[..],"edges":[{id,tail,head,weight}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "vertices": self.vertices().collect::<Vec<_>>(),
            "edges": self.edges,
        })
    }
}
