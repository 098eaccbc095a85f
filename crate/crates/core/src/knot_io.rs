//! Knot diagrams given as planar-diagram (PD) codes.
//!
//! A crossing `X(a,b,c,d)` lists the four arcs meeting at it in
//! counterclockwise order, starting with the incoming under-strand. The
//! under-strand therefore runs `a -> c` and the over-strand joins `b` and `d`.
//! Arcs are numbered `1..=2n` for an `n`-crossing knot.
//!
//! Faces are traced from the rotation system: leaving crossing `c` through
//! slot `s` we arrive at the other end `(c', s')` of that arc and continue
//! through slot `s' + 1`. Every face lies to the right of its darts.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based crossing label (the vertex label of the Crowell graph).
pub type CrossingId = usize;
/// 1-based arc label.
pub type ArcId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD token {token:?}: {reason}")]
    MalformedToken { token: String, reason: String },
    #[error("arc {arc} appears {count} times; every arc must appear exactly twice")]
    ArcCountMismatch { arc: ArcId, count: usize },
    #[error("the diagram has more than one component")]
    MultiComponent,
    #[error("under-strand at crossing {crossing} runs against the knot orientation")]
    InconsistentOrientation { crossing: CrossingId },
    #[error("rotation system is not planar (V - E + F = {euler})")]
    NonplanarEmbedding { euler: i64 },
    #[error("checkerboard coloring conflict across arc {arc}")]
    ColoringConflict { arc: ArcId },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub id: CrossingId,
    /// Arc ids in counterclockwise order; slot 0 is the incoming under-strand.
    pub arcs: [ArcId; 4],
}

impl Crossing {
    pub fn is_under_slot(slot: usize) -> bool {
        slot.is_multiple_of(2)
    }
}

/// One end of an arc at a crossing, also used as a directed traversal of the
/// arc leaving the crossing through `slot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub crossing: CrossingId,
    pub slot: usize,
}

impl Dart {
    pub fn new(crossing: CrossingId, slot: usize) -> Self {
        Self { crossing, slot }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Which side of an arc (relative to the knot orientation) a face lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Darts in tracing order; the face is on the right of each.
    pub darts: Vec<Dart>,
    pub boundary: Vec<(ArcId, Side)>,
    /// Color under the default checkerboard (unbounded face white).
    pub color: Color,
}

impl Face {
    /// Corners `(crossing, k)` of the face, where corner `k` sits between
    /// slots `k` and `k + 1`.
    pub fn corners(&self) -> impl Iterator<Item = (CrossingId, usize)> + '_ {
        self.darts.iter().map(|d| (d.crossing, (d.slot + 3) % 4))
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// Black checkerboard graph: one vertex per black face, one edge per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaitGraph {
    /// Face indices of the black faces.
    pub vertices: Vec<usize>,
    /// Pairs of positions into `vertices`, one per crossing, in crossing order.
    pub edges: Vec<(usize, usize)>,
}

impl TaitGraph {
    fn connected_without(&self, removed: Option<usize>) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if Some(a) == removed || Some(b) == removed {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        (0..n).all(|v| seen[v] || Some(v) == removed)
    }

    /// Connected, loopless and without a cut vertex.
    pub fn is_biconnected(&self) -> bool {
        if self.edges.iter().any(|&(a, b)| a == b) {
            return false;
        }
        if !self.connected_without(None) {
            return false;
        }
        self.vertices.len() <= 2
            || (0..self.vertices.len()).all(|v| self.connected_without(Some(v)))
    }
}

/// A validated single-component knot diagram with its planar face structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    /// Per arc: the end where it leaves a crossing and the end where it
    /// enters one, along the knot orientation.
    ends: Vec<[Dart; 2]>,
    faces: Vec<Face>,
    /// `dart_face[c - 1][s]` is the face containing dart `(c, s)`.
    dart_face: Vec<[usize; 4]>,
}

pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    Diagram::from_tuples(tokenize(text)?)
}

fn malformed(token: &str, reason: &str) -> DiagramError {
    DiagramError::MalformedToken {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn tokenize(text: &str) -> Result<Vec<[ArcId; 4]>, DiagramError> {
    let mut out = Vec::new();
    let mut rest = text.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('X') else {
            let bad: String = rest.chars().take_while(|c| !c.is_whitespace()).collect();
            return Err(malformed(&bad, "expected a token of the form X(a,b,c,d)"));
        };
        let close = match body.chars().next() {
            Some('(') => ')',
            Some('[') => ']',
            _ => {
                let bad: String = rest.chars().take(8).collect();
                return Err(malformed(&bad, "expected '(' after X"));
            }
        };
        let Some(end) = body.find(close) else {
            return Err(malformed(rest, "unterminated token"));
        };
        let token = &rest[..end + 2];
        let nums: Vec<&str> = body[1..end].split(',').map(str::trim).collect();
        if nums.len() != 4 {
            return Err(malformed(token, "a crossing needs exactly four arcs"));
        }
        let mut arcs = [0; 4];
        for (slot, s) in nums.iter().enumerate() {
            arcs[slot] = match s.parse::<ArcId>() {
                Ok(a) if a > 0 => a,
                _ => return Err(malformed(token, "arc labels must be positive integers")),
            };
        }
        out.push(arcs);
        rest = body[end + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    if out.is_empty() {
        return Err(malformed(text, "empty input"));
    }
    Ok(out)
}

impl Diagram {
    pub fn from_tuples(tuples: Vec<[ArcId; 4]>) -> Result<Self, DiagramError> {
        let n = tuples.len();
        if n == 0 {
            return Err(malformed("", "empty input"));
        }
        let crossings: Vec<Crossing> = tuples
            .into_iter()
            .enumerate()
            .map(|(i, arcs)| Crossing { id: i + 1, arcs })
            .collect();

        let arc_count = 2 * n;
        let max_label = crossings.iter().flat_map(|c| c.arcs).max().unwrap_or(0);
        let mut occurrences: Vec<Vec<Dart>> = vec![Vec::new(); max_label.max(arc_count) + 1];
        for c in &crossings {
            for (slot, &a) in c.arcs.iter().enumerate() {
                occurrences[a].push(Dart::new(c.id, slot));
            }
        }
        for (arc, occ) in occurrences.iter().enumerate().skip(1) {
            if occ.len() != 2 || arc > arc_count {
                return Err(DiagramError::ArcCountMismatch {
                    arc,
                    count: occ.len(),
                });
            }
        }

        let mut diagram = Diagram {
            crossings,
            ends: Vec::new(),
            faces: Vec::new(),
            dart_face: Vec::new(),
        };
        diagram.orient(&occurrences)?;
        diagram.trace_faces();
        let euler = n as i64 - arc_count as i64 + diagram.faces.len() as i64;
        if euler != 2 {
            return Err(DiagramError::NonplanarEmbedding { euler });
        }
        let colors = diagram.checkerboard(Color::White)?;
        for (face, color) in diagram.faces.iter_mut().zip(colors) {
            face.color = color;
        }
        Ok(diagram)
    }

    /// Walks the strand starting at the incoming under-strand of crossing 1
    /// and records, for every arc, which end it leaves from and which it
    /// enters.
    fn orient(&mut self, occurrences: &[Vec<Dart>]) -> Result<(), DiagramError> {
        let arc_count = 2 * self.crossings.len();
        let mut ends: Vec<Option<[Dart; 2]>> = vec![None; arc_count];
        let other_end = |d: Dart| {
            let occ = &occurrences[self.arc_at(d)];
            if occ[0] == d {
                occ[1]
            } else {
                occ[0]
            }
        };
        let start = Dart::new(1, 0);
        let mut entering = start;
        let mut visited = 0;
        loop {
            let leaving = Dart::new(entering.crossing, (entering.slot + 2) % 4);
            if leaving.slot == 0 {
                return Err(DiagramError::InconsistentOrientation {
                    crossing: leaving.crossing,
                });
            }
            let next = other_end(leaving);
            let arc = self.arc_at(leaving);
            if ends[arc - 1].is_some() {
                return Err(DiagramError::MultiComponent);
            }
            ends[arc - 1] = Some([leaving, next]);
            visited += 1;
            if next == start {
                break;
            }
            entering = next;
        }
        if visited != arc_count {
            return Err(DiagramError::MultiComponent);
        }
        self.ends = ends
            .into_iter()
            .map(|e| e.expect("all arcs visited"))
            .collect();
        Ok(())
    }

    fn trace_faces(&mut self) {
        let n = self.crossings.len();
        let mut dart_face = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for c in 1..=n {
            for s in 0..4 {
                if dart_face[c - 1][s] != usize::MAX {
                    continue;
                }
                let idx = faces.len();
                let mut darts = Vec::new();
                let mut d = Dart::new(c, s);
                while dart_face[d.crossing - 1][d.slot] == usize::MAX {
                    dart_face[d.crossing - 1][d.slot] = idx;
                    darts.push(d);
                    let p = self.partner(d);
                    d = Dart::new(p.crossing, (p.slot + 1) % 4);
                }
                let boundary = darts
                    .iter()
                    .map(|&d| {
                        let arc = self.arc_at(d);
                        let along = self.arc_tail(arc) == d;
                        (arc, if along { Side::Right } else { Side::Left })
                    })
                    .collect();
                faces.push(Face {
                    darts,
                    boundary,
                    color: Color::White,
                });
            }
        }
        self.faces = faces;
        self.dart_face = dart_face;
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: CrossingId) -> &Crossing {
        &self.crossings[id - 1]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn arc_at(&self, d: Dart) -> ArcId {
        self.crossings[d.crossing - 1].arcs[d.slot]
    }

    /// End at which `arc` leaves a crossing.
    pub fn arc_tail(&self, arc: ArcId) -> Dart {
        self.ends[arc - 1][0]
    }

    /// End at which `arc` enters a crossing.
    pub fn arc_head(&self, arc: ArcId) -> Dart {
        self.ends[arc - 1][1]
    }

    /// The other end of the arc at `d`.
    pub fn partner(&self, d: Dart) -> Dart {
        let [a, b] = self.ends[self.arc_at(d) - 1];
        if a == d {
            b
        } else {
            a
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_of_dart(&self, d: Dart) -> usize {
        self.dart_face[d.crossing - 1][d.slot]
    }

    /// Face at corner `k` (between slots `k` and `k + 1`) of crossing `c`.
    pub fn face_at_corner(&self, c: CrossingId, k: usize) -> usize {
        self.dart_face[c - 1][(k + 1) % 4]
    }

    /// The two faces on either side of an arc.
    pub fn arc_faces(&self, arc: ArcId) -> [usize; 2] {
        let [a, b] = self.ends[arc - 1];
        [self.face_of_dart(a), self.face_of_dart(b)]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.crossing_count() as i64 - self.arc_count() as i64 + self.faces.len() as i64
    }

    /// Index of the face treated as unbounded: the first face in tracing
    /// order (the one containing dart `(1, 0)`).
    pub fn unbounded_face(&self) -> usize {
        0
    }

    /// Two-colors the faces so that faces sharing an arc differ, with the
    /// unbounded face getting `outer`.
    pub fn checkerboard(&self, outer: Color) -> Result<Vec<Color>, DiagramError> {
        let mut colors: Vec<Option<Color>> = vec![None; self.faces.len()];
        let start = self.unbounded_face();
        colors[start] = Some(outer);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let color = colors[f].expect("queued faces are colored");
            for &d in &self.faces[f].darts {
                let arc = self.arc_at(d);
                let g = self.face_of_dart(self.partner(d));
                match colors[g] {
                    None => {
                        colors[g] = Some(color.other());
                        queue.push_back(g);
                    }
                    Some(c) if c == color => return Err(DiagramError::ColoringConflict { arc }),
                    Some(_) => {}
                }
            }
        }
        colors
            .into_iter()
            .map(|c| c.ok_or(DiagramError::ColoringConflict { arc: 0 }))
            .collect()
    }

    /// Every arc joins an over-crossing end to an under-crossing end.
    pub fn is_alternating(&self) -> bool {
        self.ends
            .iter()
            .all(|[a, b]| Crossing::is_under_slot(a.slot) != Crossing::is_under_slot(b.slot))
    }

    /// First crossing met by one face at two opposite corners.
    pub fn nugatory_crossing(&self) -> Option<CrossingId> {
        (1..=self.crossing_count()).find(|&c| {
            self.face_at_corner(c, 0) == self.face_at_corner(c, 2)
                || self.face_at_corner(c, 1) == self.face_at_corner(c, 3)
        })
    }

    /// No face meets a crossing at two opposite corners.
    pub fn is_reduced(&self) -> bool {
        self.nugatory_crossing().is_none()
    }

    pub fn tait_graph(&self) -> TaitGraph {
        let vertices: Vec<usize> = (0..self.faces.len())
            .filter(|&f| self.faces[f].color == Color::Black)
            .collect();
        let pos = |f: usize| vertices.iter().position(|&v| v == f).expect("black face");
        let edges = (1..=self.crossing_count())
            .map(|c| {
                let k = if self.faces[self.face_at_corner(c, 0)].color == Color::Black {
                    0
                } else {
                    1
                };
                (
                    pos(self.face_at_corner(c, k)),
                    pos(self.face_at_corner(c, k + 2)),
                )
            })
            .collect();
        TaitGraph { vertices, edges }
    }

    /// Reduced, and the black Tait graph has no cut vertex. Diagrams with at
    /// most two crossings are prime exactly when reduced.
    pub fn is_prime_diagram(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        self.crossing_count() <= 2 || self.tait_graph().is_biconnected()
    }

    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
    const TORUS_2_5: &str = "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)";

    #[test]
    fn parses_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert!(d.is_alternating());
        // Hand trace: arc 1 leaves crossing 2 (over) and enters crossing 1 (under).
        assert_eq!(d.arc_tail(1), Dart::new(2, 3));
        assert_eq!(d.arc_head(1), Dart::new(1, 0));
        assert_eq!(d.arc_tail(4), Dart::new(2, 2));
        assert_eq!(d.arc_head(4), Dart::new(1, 1));
        assert_eq!(d.to_string(), TREFOIL);
    }

    #[test]
    fn accepts_bracket_syntax() {
        let d = parse_pd("X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]").unwrap();
        assert_eq!(d, parse_pd(TREFOIL).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_pd(""),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("   "),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("Y(1,2,3,4)"),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("X(1,2,3)"),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("X(1,2,a,4)"),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("X(1,2,2,1"),
            Err(DiagramError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_pd("X(1,4,2,5)"),
            Err(DiagramError::ArcCountMismatch { .. })
        ));
        assert!(matches!(
            parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,6)"),
            Err(DiagramError::ArcCountMismatch { arc: 3, count: 1 })
        ));
    }

    #[test]
    fn rejects_links() {
        // Hopf link: two components.
        let err = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap_err();
        assert_eq!(err, DiagramError::MultiComponent);
    }

    #[test]
    fn rejects_reversed_under_strand() {
        // Rotating a trefoil tuple two slots makes its under-strand point backwards.
        let err = parse_pd("X(2,5,1,4) X(3,6,4,1) X(5,2,6,3)").unwrap_err();
        assert!(matches!(err, DiagramError::InconsistentOrientation { .. }));
    }

    #[test]
    fn rejects_nonplanar_rotation() {
        // Trefoil arcs with one crossing's cyclic order reflected.
        let err = parse_pd("X(1,5,2,4) X(3,6,4,1) X(5,2,6,3)").unwrap_err();
        assert!(matches!(err, DiagramError::NonplanarEmbedding { .. }));
    }

    #[test]
    fn face_counts_follow_euler() {
        for (pd, faces) in [(TREFOIL, 5), (FIGURE_EIGHT, 6), (TORUS_2_5, 7)] {
            let d = parse_pd(pd).unwrap();
            assert_eq!(d.faces().len(), faces, "{pd}");
            assert_eq!(d.euler_characteristic(), 2);
            let darts: usize = d.faces().iter().map(Face::len).sum();
            assert_eq!(darts, 4 * d.crossing_count());
        }
    }

    #[test]
    fn checkerboard_is_proper_and_swaps() {
        for pd in [TREFOIL, FIGURE_EIGHT, TORUS_2_5] {
            let d = parse_pd(pd).unwrap();
            let white = d.checkerboard(Color::White).unwrap();
            let black = d.checkerboard(Color::Black).unwrap();
            assert_eq!(white[d.unbounded_face()], Color::White);
            for arc in 1..=d.arc_count() {
                let [f, g] = d.arc_faces(arc);
                assert_ne!(white[f], white[g]);
            }
            for (w, b) in white.iter().zip(&black) {
                assert_eq!(w.other(), *b);
            }
        }
    }

    #[test]
    fn torus_bigons_share_a_color() {
        let d = parse_pd(TORUS_2_5).unwrap();
        let bigons: Vec<&Face> = d.faces().iter().filter(|f| f.len() == 2).collect();
        assert_eq!(bigons.len(), 5);
        assert!(bigons.iter().all(|f| f.color == bigons[0].color));
    }

    #[test]
    fn alternation() {
        assert!(parse_pd(TREFOIL).unwrap().is_alternating());
        assert!(parse_pd(FIGURE_EIGHT).unwrap().is_alternating());
        // Crossing change at crossing 1 (its tuple rotated by one slot).
        let changed = parse_pd("X(4,2,5,1) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert!(!changed.is_alternating());
        assert!(parse_pd("X(1,2,2,1)").unwrap().is_alternating());
    }

    #[test]
    fn reducedness() {
        assert!(parse_pd(TREFOIL).unwrap().is_reduced());
        assert!(!parse_pd("X(1,2,2,1)").unwrap().is_reduced());
        // Trefoil with a kink inserted on arc 6.
        let kinked = parse_pd("X(1,4,2,5) X(3,8,4,1) X(5,2,6,3) X(7,6,8,7)").unwrap();
        assert!(kinked.is_alternating());
        assert!(!kinked.is_reduced());
        assert!(!kinked.is_prime_diagram());
    }

    #[test]
    fn primality() {
        let trefoil = parse_pd(TREFOIL).unwrap();
        assert!(trefoil.is_prime_diagram());
        let tait = trefoil.tait_graph();
        assert_eq!(tait.edges.len(), 3);
        assert!(parse_pd(TORUS_2_5).unwrap().is_prime_diagram());
        assert!(parse_pd(FIGURE_EIGHT).unwrap().is_prime_diagram());
        // Connected sum of two trefoils.
        let granny =
            parse_pd("X(1,4,2,5) X(3,6,4,7) X(5,2,6,3) X(7,10,8,11) X(9,12,10,1) X(11,8,12,9)")
                .unwrap();
        assert!(granny.is_alternating());
        assert!(granny.is_reduced());
        assert!(!granny.is_prime_diagram());
    }
}
