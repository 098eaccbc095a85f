//! The full battery of checks run on one knot diagram, as used by the
//! `verify-all` command. Every check is computed two ways where possible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::crowell::{build_crowell, CrowellGraph};
use crate::knot_io::{parse_pd, Color, Diagram};
use crate::moves::{
    below, clear_below, exchange, exchange_graph, find_w_prime, phi, rooted_meet, terminal_edges,
    transform, ExchangeGraph, Provenance,
};
use crate::poly::IntPoly;
use crate::statespace::{
    alexander_oracle, arborescence_count_oracle, enumerate_states, extend_to_state, rooted_path,
    state_with_terminal_edge, StateSet,
};
use crate::torus::{characterize, is_torus_alexander, Verdict};

/// Column names of the check matrix, in output order.
pub const CHECKS: [&str; 12] = [
    "diagram",
    "graph",
    "oracle",
    "roots",
    "normal",
    "connected",
    "exchange",
    "paths",
    "terminal",
    "lemma",
    "transform",
    "torus",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotReport {
    pub name: String,
    pub crossings: usize,
    pub states: usize,
    pub alexander: String,
    pub torus_n: Option<usize>,
    pub checks: Vec<Check>,
}

impl KnotReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = json!(self.passed());
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random state pairs fed to `transform`, per root-1 state space.
    pub pairs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            pairs: 100,
        }
    }
}

struct Ctx {
    d: Diagram,
    g: CrowellGraph,
    /// Indexed by root - 1.
    spaces: Vec<StateSet>,
    graphs: Vec<ExchangeGraph>,
}

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every check on one diagram. A parse or construction failure fails
/// the `diagram` or `graph` column and leaves the rest unreported.
pub fn verify_entry(name: &str, pd: &str, opts: VerifyOptions) -> KnotReport {
    let mut report = KnotReport {
        name: name.to_string(),
        crossings: 0,
        states: 0,
        alexander: String::new(),
        torus_n: None,
        checks: Vec::new(),
    };
    let fail = |report: &mut KnotReport, which: &'static str, detail: String| {
        report.checks.push(Check {
            name: which,
            passed: false,
            detail,
        });
    };
    let d = match parse_pd(pd) {
        Ok(d) => d,
        Err(e) => {
            fail(&mut report, "diagram", e.to_string());
            return report;
        }
    };
    report.crossings = d.crossing_count();
    let g = match build_crowell(&d) {
        Ok(g) => g,
        Err(e) => {
            report.checks.push(record("diagram", check_diagram(&d)));
            fail(&mut report, "graph", e.to_string());
            return report;
        }
    };
    let mut spaces = Vec::new();
    let mut graphs = Vec::new();
    for root in g.vertices() {
        let built = enumerate_states(&g, root)
            .map_err(|e| e.to_string())
            .and_then(|s| {
                exchange_graph(&s, &g)
                    .map(|x| (s, x))
                    .map_err(|e| e.to_string())
            });
        match built {
            Ok((s, x)) => {
                spaces.push(s);
                graphs.push(x);
            }
            Err(e) => {
                report.checks.push(record("diagram", check_diagram(&d)));
                fail(&mut report, "graph", format!("root {root}: {e}"));
                return report;
            }
        }
    }
    let ctx = Ctx {
        d,
        g,
        spaces,
        graphs,
    };
    report.states = ctx.spaces[0].len();
    if let Some((p, _)) = ctx.spaces[0].state_sum(&ctx.g).normalize() {
        report.alexander = p.to_string();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ name_hash(name));
    let checks: [(&'static str, Outcome); 12] = [
        ("diagram", check_diagram(&ctx.d)),
        ("graph", check_graph(&ctx)),
        ("oracle", check_oracle(&ctx)),
        ("roots", check_roots(&ctx)),
        ("normal", check_normal(&ctx)),
        ("connected", check_connected(&ctx)),
        ("exchange", check_exchange(&ctx)),
        ("paths", check_paths(&ctx)),
        ("terminal", check_terminal(&ctx)),
        ("lemma", check_lemma(&ctx)),
        ("transform", check_transform(&ctx, &mut rng, opts.pairs)),
        ("torus", check_torus(&ctx, &mut report.torus_n)),
    ];
    report.checks = checks.into_iter().map(|(n, o)| record(n, o)).collect();
    report
}

fn record(name: &'static str, outcome: Outcome) -> Check {
    match outcome {
        Ok(()) => Check {
            name,
            passed: true,
            detail: String::new(),
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

fn check_diagram(d: &Diagram) -> Outcome {
    ensure(d.is_alternating(), || "not alternating".into())?;
    ensure(d.is_reduced(), || "not reduced".into())?;
    ensure(d.is_prime_diagram(), || "not prime".into())?;
    ensure(d.euler_characteristic() == 2, || "not planar".into())?;
    let colors = d.checkerboard(Color::White).map_err(|e| e.to_string())?;
    let tait = d.tait_graph();
    let black = colors.iter().filter(|&&c| c == Color::Black).count();
    let sizes = [black, colors.len() - black];
    ensure(sizes.contains(&tait.vertices.len()), || {
        "Tait graph vertex count".into()
    })?;
    ensure(tait.edges.len() == d.crossing_count(), || {
        "Tait graph edge count".into()
    })?;
    let again = parse_pd(&d.to_pd_string()).map_err(|e| e.to_string())?;
    ensure(again.to_pd_string() == d.to_pd_string(), || {
        "PD round trip".into()
    })
}

fn check_graph(ctx: &Ctx) -> Outcome {
    let v = ctx.g.invariant_violations();
    ensure(v.is_empty(), || v.join("; "))?;
    ensure(ctx.g.check_region_compatibility(), || {
        "regions not compatible".into()
    })
}

fn check_oracle(ctx: &Ctx) -> Outcome {
    for (i, s) in ctx.spaces.iter().enumerate() {
        let root = i + 1;
        let count = arborescence_count_oracle(&ctx.g, root);
        ensure(s.len() as i128 == count, || {
            format!("root {root}: {} states, oracle {count}", s.len())
        })?;
        let oracle = alexander_oracle(&ctx.g, root).map_err(|e| e.to_string())?;
        let sum = s.state_sum(&ctx.g).normalize().map(|(p, _)| p);
        ensure(sum.as_ref() == Some(&oracle), || {
            format!("root {root}: state sum differs from oracle")
        })?;
    }
    Ok(())
}

fn normalized(ctx: &Ctx, i: usize) -> Option<IntPoly> {
    ctx.spaces[i].state_sum(&ctx.g).normalize().map(|(p, _)| p)
}

fn check_roots(ctx: &Ctx) -> Outcome {
    let first = normalized(ctx, 0);
    for i in 1..ctx.spaces.len() {
        ensure(normalized(ctx, i) == first, || {
            format!("root {} disagrees with root 1", i + 1)
        })?;
    }
    Ok(())
}

fn check_normal(ctx: &Ctx) -> Outcome {
    let p = normalized(ctx, 0).ok_or("zero state sum")?;
    ensure(p.minus_t_coeffs().iter().all(|&c| c > 0), || {
        format!("{p}: non-positive (-t)-coefficient")
    })?;
    ensure(p.is_palindromic(), || format!("{p}: not palindromic"))?;
    ensure(p.eval(-1) == ctx.spaces[0].len() as i64, || {
        "value at -1 differs from state count".into()
    })
}

fn check_connected(ctx: &Ctx) -> Outcome {
    for (i, (x, s)) in ctx.graphs.iter().zip(&ctx.spaces).enumerate() {
        ensure(x.node_count() == s.len(), || {
            format!("root {}: node count", i + 1)
        })?;
        ensure(x.is_connected(), || {
            format!("root {}: exchange graph disconnected", i + 1)
        })?;
    }
    Ok(())
}

fn check_exchange(ctx: &Ctx) -> Outcome {
    for s in ctx.spaces[0].iter() {
        let leaves = terminal_edges(s, &ctx.g);
        ensure(!leaves.is_empty(), || "state without terminal edge".into())?;
        for (v, _) in leaves {
            let (next, mv) = exchange(s, v, &ctx.g).map_err(|e| e.to_string())?;
            let delta = next.degree(&ctx.g) as i32 - s.degree(&ctx.g) as i32;
            ensure(
                mv.degree_delta.abs() == 1 && delta == mv.degree_delta,
                || format!("degree change {delta} at {v}"),
            )?;
            ensure(
                phi(v, &next, &ctx.g) == Ok(s.parent(v, &ctx.g).unwrap_or(0)),
                || "phi did not swap".into(),
            )?;
            let (back, _) = exchange(&next, v, &ctx.g).map_err(|e| e.to_string())?;
            ensure(&back == s, || {
                format!("exchange at {v} is not an involution")
            })?;
        }
    }
    Ok(())
}

fn check_paths(ctx: &Ctx) -> Outcome {
    let g = &ctx.g;
    for root in g.vertices() {
        for v in g.vertices() {
            let path = rooted_path(g, root, v).map_err(|e| e.to_string())?;
            let state = extend_to_state(g, root, &path).map_err(|e| e.to_string())?;
            state.validate(g).map_err(|e| e.to_string())?;
            ensure(path.iter().all(|&e| state.contains_edge(e, g)), || {
                "extension dropped a path edge".into()
            })?;
            ensure(ctx.spaces[root - 1].index_of(&state).is_some(), || {
                "extension not enumerated".into()
            })?;
        }
    }
    Ok(())
}

fn check_terminal(ctx: &Ctx) -> Outcome {
    let g = &ctx.g;
    for root in g.vertices() {
        let space = &ctx.spaces[root - 1];
        for e in g.edges().iter().filter(|e| e.head != root) {
            let s = state_with_terminal_edge(g, root, e.id)
                .map_err(|err| format!("edge {}: {err}", e.id))?;
            s.validate(g).map_err(|err| err.to_string())?;
            ensure(
                s.parent_edge(e.head) == Some(e.id) && s.is_leaf(e.head, g),
                || format!("edge {} not terminal", e.id),
            )?;
            ensure(space.index_of(&s).is_some(), || {
                format!("edge {}: state not enumerated", e.id)
            })?;
            let scan = space
                .iter()
                .any(|t| terminal_edges(t, g).contains(&(e.head, e.id)));
            ensure(scan, || {
                format!("edge {}: no enumerated state has it terminal", e.id)
            })?;
        }
    }
    Ok(())
}

/// Every (w, state) pair with something below `w` and `phi(w)` outside it
/// yields a vertex that can be detached, and clearing below `w` works.
fn check_lemma(ctx: &Ctx) -> Outcome {
    let g = &ctx.g;
    for s in ctx.spaces[0].iter() {
        for w in g.vertices().filter(|&w| w != s.root()) {
            let bel = below(w, s, g);
            let pw = phi(w, s, g).map_err(|e| e.to_string())?;
            if bel.is_empty() || bel.contains(pw) {
                continue;
            }
            let w1 = find_w_prime(w, s, g).map_err(|e| e.to_string())?;
            let p1 = phi(w1, s, g).map_err(|e| e.to_string())?;
            ensure(bel.contains(w1) && !bel.contains(p1) && p1 != w, || {
                format!("bad w' {w1} for {w}")
            })?;
            let (seq, after) = clear_below(w, s, g).map_err(|e| e.to_string())?;
            ensure(after.is_leaf(w, g), || format!("{w} not cleared"))?;
            let trail = seq.replay(s, g).map_err(|e| e.to_string())?;
            for (mv, state) in seq.moves.iter().zip(&trail) {
                ensure(below(w, state, g).contains(mv.vertex), || {
                    format!("move at {} outside subtree", mv.vertex)
                })?;
            }
        }
    }
    Ok(())
}

fn check_transform(ctx: &Ctx, rng: &mut ChaCha8Rng, pairs: usize) -> Outcome {
    let g = &ctx.g;
    let space = &ctx.spaces[0];
    let xg = &ctx.graphs[0];
    for _ in 0..pairs {
        let (i, j) = (rng.gen_range(0..space.len()), rng.gen_range(0..space.len()));
        let (a, b) = (space.get(i), space.get(j));
        let seq = transform(a, b, g).map_err(|e| format!("{i}->{j}: {e}"))?;
        let trail = seq.replay(a, g).map_err(|e| format!("{i}->{j}: {e}"))?;
        ensure(trail.last() == Some(b), || {
            format!("{i}->{j}: replay missed the target")
        })?;
        ensure(trail.iter().all(|t| space.index_of(t).is_some()), || {
            "intermediate not a state".into()
        })?;
        let dist = xg.distances(i)[j].ok_or("unreachable")?;
        ensure(seq.len() >= dist, || {
            format!("{i}->{j}: shorter than graph distance")
        })?;
        let mut last = rooted_meet(a, b, g).len() - 1;
        for (k, why) in seq.provenance.iter().enumerate() {
            if let Provenance::MeetGrowth { meet_edges } = *why {
                let actual = rooted_meet(&trail[k + 1], b, g).len() - 1;
                ensure(actual == meet_edges && meet_edges > last, || {
                    format!("{i}->{j}: meet shrank")
                })?;
                last = meet_edges;
            }
        }
    }
    Ok(())
}

fn check_torus(ctx: &Ctx, torus_n: &mut Option<usize>) -> Outcome {
    let verdict = characterize(&ctx.d).map_err(|e| e.to_string())?;
    let poly = normalized(ctx, 0).ok_or("zero state sum")?;
    *torus_n = verdict.torus_n();
    ensure(is_torus_alexander(&poly) == verdict.torus_n(), || {
        "verdict disagrees with polynomial".into()
    })?;
    match &verdict {
        Verdict::Torus {
            report,
            prime_diagram,
            ..
        } => ensure(*prime_diagram && report.passes(), || {
            format!("torus structure fails: {report:?}")
        }),
        Verdict::NotTorus { .. } => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_passes_everything() {
        let r = verify_entry(
            "3_1",
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
            VerifyOptions::default(),
        );
        assert_eq!(r.checks.iter().map(|c| c.name).collect::<Vec<_>>(), CHECKS);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.torus_n, Some(1));
        assert_eq!(r.alexander, "1 - t + t^2");
    }

    #[test]
    fn failures_are_reported_not_raised() {
        let r = verify_entry("bad", "X(1,2,3)", VerifyOptions::default());
        assert!(!r.passed());
        assert_eq!(r.checks[0].name, "diagram");
        let kinked = "X(1,4,2,5) X(3,8,4,1) X(5,2,6,3) X(7,6,8,7)";
        let r = verify_entry("kinked", kinked, VerifyOptions::default());
        assert!(!r.passed());
        assert!(r.checks.iter().any(|c| c.name == "graph" && !c.passed));
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let pd = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
        let opts = VerifyOptions { seed: 7, pairs: 20 };
        assert_eq!(verify_entry("4_1", pd, opts), verify_entry("4_1", pd, opts));
    }
}
