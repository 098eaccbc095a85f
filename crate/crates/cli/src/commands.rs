use std::fmt::Write as _;
use std::path::Path;

use crowell_core::crowell::{build_crowell, CrowellGraph};
use crowell_core::knot_io::{parse_pd, Diagram, DiagramError};
use crowell_core::moves::{exchange_graph, transform, Provenance};
use crowell_core::statespace::{
    alexander_oracle, arborescence_count_oracle, enumerate_states, StateSet,
};
use crowell_core::table::{bundled_table, lookup, parse_table, TableEntry};
use crowell_core::torus::{characterize, Verdict, PRIMALITY_NOTE};
use crowell_core::verify::{verify_entry, VerifyOptions, CHECKS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::{Command, Common, Format, TransformArgs, VerifyArgs};

pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Whatever was produced before the failure was detected.
    pub output: String,
}

impl Failure {
    fn rejected(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            output: String::new(),
        }
    }

    fn check_failed(message: impl Into<String>, output: String) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            output,
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            output: String::new(),
        }
    }
}

type Outcome = Result<String, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Validate(c) => validate(&c),
        Command::Graph(c) => graph(&c),
        Command::States(c) => states(&c),
        Command::Alexander(c) => alexander(&c),
        Command::ExchangeGraph(c) => exchange(&c),
        Command::Transform(t) => transform_cmd(&t),
        Command::Torus(c) => torus(&c),
        Command::VerifyAll(v) => verify_all(&v),
    }
}

fn load_table(path: Option<&Path>) -> Result<Vec<TableEntry>, Failure> {
    let path = path
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os("CROWELL_TABLE").map(Into::into));
    let Some(path) = path else {
        return Ok(bundled_table());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_table(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn diagram(c: &Common) -> Result<Diagram, Failure> {
    let s = &c.source;
    let pd = if let Some(pd) = &s.pd {
        pd.clone()
    } else if let Some(name) = &s.knot {
        let table = load_table(c.table.as_deref())?;
        lookup(&table, name)
            .map(|e| e.pd.clone())
            .ok_or_else(|| Failure::input(format!("knot {name} is not in the table")))?
    } else if let Some(path) = &s.input {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    } else {
        return Err(Failure::input("no diagram given"));
    };
    parse_pd(&pd).map_err(|e| match e {
        DiagramError::MalformedToken { .. } => Failure::input(e.to_string()),
        _ => Failure::rejected(e.to_string()),
    })
}

fn crowell(c: &Common) -> Result<CrowellGraph, Failure> {
    let g = build_crowell(&diagram(c)?).map_err(|e| Failure::rejected(e.to_string()))?;
    if c.root == 0 || c.root > g.vertex_count() {
        return Err(Failure::input(format!(
            "root {} is not a crossing (1..={})",
            c.root,
            g.vertex_count()
        )));
    }
    Ok(g)
}

fn state_set(g: &CrowellGraph, root: usize) -> Result<StateSet, Failure> {
    enumerate_states(g, root).map_err(|e| Failure::check_failed(e.to_string(), String::new()))
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::input(format!("{format:?} output is not available for {command}").to_lowercase())
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json"))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(c: &Common) -> Outcome {
    let d = diagram(c)?;
    let (alt, red, prime) = (d.is_alternating(), d.is_reduced(), d.is_prime_diagram());
    let out = match c.format {
        Format::Text => format!(
            "crossings: {}\narcs: {}\nfaces: {}\nalternating: {}\nreduced: {}\nprime: {}\n",
            d.crossing_count(),
            d.arc_count(),
            d.faces().len(),
            yes(alt),
            yes(red),
            yes(prime)
        ),
        Format::Json => json_line(&json!({
            "schema": 1,
            "crossings": d.crossing_count(),
            "arcs": d.arc_count(),
            "faces": d.faces().len(),
            "alternating": alt,
            "reduced": red,
            "prime": prime,
        })),
        f => return Err(unsupported(f, "validate")),
    };
    if alt && red && prime {
        Ok(out)
    } else {
        Err(Failure {
            code: 1,
            message: "diagram is not reduced, prime and alternating".into(),
            output: out,
        })
    }
}

fn graph(c: &Common) -> Outcome {
    let g = crowell(c)?;
    Ok(match c.format {
        Format::Text => {
            let mut out = format!("vertices: {}\n", g.vertex_count());
            for e in g.edges() {
                let _ = writeln!(
                    out,
                    "edge {}: {} -> {} {}",
                    e.id,
                    e.tail,
                    e.head,
                    e.weight.label()
                );
            }
            out
        }
        Format::Json => json_line(&g.to_json()),
        Format::Dot => {
            let mut out = String::from("digraph crowell {\n");
            for v in g.vertices() {
                let _ = writeln!(out, "  {v};");
            }
            for e in g.edges() {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"{}\", tooltip=\"arc {}\"];",
                    e.tail,
                    e.head,
                    e.weight.label(),
                    e.id
                );
            }
            out.push_str("}\n");
            out
        }
    })
}

fn key_string(key: &[usize]) -> String {
    key.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn states(c: &Common) -> Outcome {
    let g = crowell(c)?;
    let set = state_set(&g, c.root)?;
    Ok(match c.format {
        Format::Text => {
            let mut out = format!("root: {}\nstates: {}\n", c.root, set.len());
            for (i, s) in set.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{i}: degree {} edges {}",
                    s.degree(&g),
                    key_string(&s.key())
                );
            }
            out
        }
        Format::Json => json_line(&set.to_json(&g)),
        f => return Err(unsupported(f, "states")),
    })
}

fn alexander(c: &Common) -> Outcome {
    let g = crowell(c)?;
    let set = state_set(&g, c.root)?;
    let (p, m) = set
        .state_sum(&g)
        .normalize()
        .ok_or_else(|| Failure::check_failed("state sum vanishes", String::new()))?;
    let out = match c.format {
        Format::Text => format!("{p}\nm={m}\n"),
        Format::Json => json_line(&json!({
            "schema": 1,
            "root": c.root,
            "alexander": p.to_string(),
            "coeffs": p.coeffs(),
            "m": m,
            "states": set.len(),
        })),
        f => return Err(unsupported(f, "alexander")),
    };
    let oracle = alexander_oracle(&g, c.root)
        .map_err(|e| Failure::check_failed(e.to_string(), String::new()))?;
    if oracle != p || arborescence_count_oracle(&g, c.root) != set.len() as i128 {
        return Err(Failure::check_failed(
            format!("state sum disagrees with the determinant ({oracle})"),
            out,
        ));
    }
    Ok(out)
}

fn exchange(c: &Common) -> Outcome {
    let g = crowell(c)?;
    let set = state_set(&g, c.root)?;
    let xg = exchange_graph(&set, &g)
        .map_err(|e| Failure::check_failed(e.to_string(), String::new()))?;
    let out = match c.format {
        Format::Text => format!(
            "root: {}\nstates: {}\nexchanges: {}\nconnected: {}\ndegree-1 states: {}\npath: {}\n",
            c.root,
            xg.node_count(),
            xg.edge_count(),
            yes(xg.is_connected()),
            xg.lattice_obstruction(),
            yes(xg.is_simple_path())
        ),
        Format::Json => json_line(&xg.to_json()),
        Format::Dot => xg.to_dot(),
    };
    if xg.is_connected() {
        Ok(out)
    } else {
        Err(Failure::check_failed("exchange graph is disconnected", out))
    }
}

fn transform_cmd(t: &TransformArgs) -> Outcome {
    let c = &t.common;
    let g = crowell(c)?;
    let set = state_set(&g, c.root)?;
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    let mut pick = |given: Option<usize>| match given {
        Some(i) if i < set.len() => Ok(i),
        Some(i) => Err(Failure::input(format!(
            "state index {i} out of range (0..{})",
            set.len()
        ))),
        None => Ok(rng.gen_range(0..set.len())),
    };
    let (i, j) = (pick(t.from)?, pick(t.to)?);
    let (a, b) = (set.get(i), set.get(j));
    let seq =
        transform(a, b, &g).map_err(|e| Failure::check_failed(e.to_string(), String::new()))?;
    let out = match c.format {
        Format::Text => {
            let mut out = format!(
                "from: {i} (degree {}) edges {}\nto: {j} (degree {}) edges {}\nmoves: {}\n",
                a.degree(&g),
                key_string(&a.key()),
                b.degree(&g),
                key_string(&b.key()),
                seq.len()
            );
            for (k, (m, why)) in seq.moves.iter().zip(&seq.provenance).enumerate() {
                let why = match why {
                    Provenance::ClearBelow { target, depth } => {
                        format!("clearing below {target}, depth {depth}")
                    }
                    Provenance::MeetGrowth { meet_edges } => {
                        format!("shared tree grows to {meet_edges} edges")
                    }
                };
                let _ = writeln!(
                    out,
                    "{:>3}. vertex {}: edge {} -> {} ({:+})  {why}",
                    k + 1,
                    m.vertex,
                    m.removed_edge,
                    m.added_edge,
                    m.degree_delta
                );
            }
            out
        }
        Format::Json => {
            let mut v = seq.to_json();
            v["root"] = json!(c.root);
            v["from"] = json!({ "index": i, "key": a.key() });
            v["to"] = json!({ "index": j, "key": b.key() });
            json_line(&v)
        }
        f => return Err(unsupported(f, "transform")),
    };
    match seq.apply(a, &g) {
        Ok(end) if &end == b => Ok(out),
        Ok(_) => Err(Failure::check_failed(
            "replay ends at a different state",
            out,
        )),
        Err(e) => Err(Failure::check_failed(e.to_string(), out)),
    }
}

fn torus(c: &Common) -> Outcome {
    let d = diagram(c)?;
    let v = characterize(&d).map_err(|e| Failure::rejected(e.to_string()))?;
    let out = match c.format {
        Format::Text => match &v {
            Verdict::Torus { n, prime_diagram, report } => format!(
                "torus: (2,{}) knot, n={n}\nprime diagram: {}\nplus cycle: {}\nminus cycle: {}\npath state space: {}\ndegrees in order: {}\nbottom state: {}\nend state terminal edges: {} {}\ninterior states have two terminal edges: {}\nstructure: {}\nnote: {PRIMALITY_NOTE}\n",
                2 * n + 1,
                yes(*prime_diagram),
                yes(report.plus_cycle),
                yes(report.minus_cycle),
                yes(report.path_statespace),
                yes(report.degrees_in_order),
                yes(report.bottom_state),
                report.endpoint_leaf_counts.0,
                report.endpoint_leaf_counts.1,
                yes(report.interior_two_terminal),
                if report.passes() { "pass" } else { "FAIL" },
            ),
            Verdict::NotTorus { poly, prime_diagram } => format!(
                "torus: no\nalexander: {poly}\nprime diagram: {}\nnote: {PRIMALITY_NOTE}\n",
                yes(*prime_diagram)
            ),
        },
        Format::Json => json_line(&v.to_json()),
        f => return Err(unsupported(f, "torus")),
    };
    if v.passes() {
        Ok(out)
    } else {
        Err(Failure::check_failed(
            "torus polynomial without torus structure",
            out,
        ))
    }
}

fn verify_all(v: &VerifyArgs) -> Outcome {
    let table = load_table(v.table.as_deref())?;
    let opts = VerifyOptions {
        seed: v.seed,
        pairs: v.pairs,
    };
    let reports: Vec<_> = table
        .par_iter()
        .map(|e| verify_entry(&e.name, &e.pd, opts))
        .collect();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    let out = match v.format {
        Format::Text => {
            let width = reports
                .iter()
                .map(|r| r.name.len())
                .max()
                .unwrap_or(4)
                .max(4);
            let mut out = format!("{:<width$}", "knot");
            for name in CHECKS {
                let _ = write!(out, " {name}");
            }
            out.push_str("  states  alexander\n");
            for r in &reports {
                let _ = write!(out, "{:<width$}", r.name);
                for name in CHECKS {
                    let cell = match r.checks.iter().find(|c| c.name == name) {
                        Some(c) if c.passed => "ok",
                        Some(_) => "FAIL",
                        None => "-",
                    };
                    let _ = write!(out, " {cell:<w$}", w = name.len());
                }
                let _ = writeln!(out, "  {:<6}  {}", r.states, r.alexander);
            }
            for r in &reports {
                for c in r.checks.iter().filter(|c| !c.passed) {
                    let _ = writeln!(out, "{} {}: {}", r.name, c.name, c.detail);
                }
            }
            let torus: Vec<&str> = reports
                .iter()
                .filter(|r| r.torus_n.is_some())
                .map(|r| r.name.as_str())
                .collect();
            let _ = writeln!(out, "torus polynomials: {}", torus.join(" "));
            let _ = writeln!(
                out,
                "{} knots, {} passed, {} failed",
                reports.len(),
                reports.len() - failed.len(),
                failed.len()
            );
            out
        }
        Format::Json => json_line(&json!({
            "schema": 1,
            "seed": v.seed,
            "pairs": v.pairs,
            "knots": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "failed": failed,
        })),
        f => return Err(unsupported(f, "verify-all")),
    };
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(Failure::check_failed(
            format!("checks failed for {}", failed.join(", ")),
            out,
        ))
    }
}
