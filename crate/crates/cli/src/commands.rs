//! The subcommands as functions from input text to output text and exit code.

use anyhow::{anyhow, bail, Context, Result};
use rotplan_core::generators::{self, RandomParams};
use rotplan_core::link::link_at;
use rotplan_core::oracle::{oracle_decide, OracleOutcome};
use rotplan_core::pipeline::{decide_verified, DecisionOutcome, Limits};
use rotplan_core::rotation::{genus_gate, GateFailure};
use rotplan_core::stretch::{self, StepKind, StepParams};
use rotplan_core::{EdgeId, FaceId, TwoComplex, VertexId};
use serde_json::json;

use crate::format::{self, Document, Loaded, Names};
use crate::report;

/// Exit codes: success, failure of the tool, and a negative answer.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
    /// The stretch trace, when the command produced one.
    pub trace: Option<serde_json::Value>,
}

impl Output {
    fn new(stdout: String, code: i32) -> Self {
        Output { stdout, code, trace: None }
    }
}

fn load(text: &str) -> Result<Loaded> {
    format::read(text).context("cannot read input document")
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs the decision procedure and checks its answer.
pub fn check(text: &str, limits: &Limits, json: bool) -> Result<Output> {
    let l = load(text)?;
    let d = decide_verified(&l.complex, limits).map_err(|e| anyhow!("decision failed: {e}"))?;
    let steps = d.outcome.trace().steps.clone();
    let (mut out, doc) = match &d.outcome {
        DecisionOutcome::Embeddable { rotation, .. } => {
            let doc = Document::from_complex(&l.complex, &l.names, Some(rotation), None);
            (Output::new(String::new(), EXIT_OK), doc)
        }
        DecisionOutcome::Obstructed { certificate, trace } => {
            let end = trace.replay(&l.complex).map_err(|e| anyhow!("trace does not replay: {e}"))?;
            let doc = Document::from_complex(&end, &l.names, None, Some(certificate));
            (Output::new(String::new(), EXIT_NO), doc)
        }
    };
    out.stdout = if json {
        let mut v = json!({
            "schema": report::SCHEMA,
            "result": if out.code == EXIT_OK { "embeddable" } else { "obstructed" },
            "steps": steps.len(),
            "rounds": report::rounds(&d.rounds),
        });
        match &doc.certificate {
            None => v["rotation"] = report::rotation(&doc),
            Some(c) => v["certificate"] = report::certificate(c),
        }
        pretty(&v)
    } else {
        let head = match &doc.certificate {
            None => "# embeddable\n".to_string(),
            Some(_) => format!("# obstructed after {} stretching steps\n", steps.len()),
        };
        head + &format::print(&doc)
    };
    out.trace = Some(report::trace(&steps, &l.names));
    Ok(out)
}

/// Exhaustive search over all rotation systems.
pub fn oracle(text: &str, cap: u64, json: bool) -> Result<Output> {
    let l = load(text)?;
    let (outcome, stats) = oracle_decide(&l.complex, cap);
    let (result, code, rs) = match outcome {
        OracleOutcome::Exists(rs) => ("exists", EXIT_OK, Some(rs)),
        OracleOutcome::NotExists => ("none", EXIT_NO, None),
        OracleOutcome::CapExceeded => bail!("{} rotation systems exceed the cap of {cap}", stats.total),
    };
    let stdout = if json {
        let mut v = json!({ "schema": report::SCHEMA, "result": result, "rotation_systems": stats.total.to_string(), "link_tests": stats.checked });
        if let Some(rs) = &rs {
            v["rotation"] = report::rotation(&Document::from_complex(&l.complex, &l.names, Some(rs), None));
        }
        pretty(&v)
    } else {
        match &rs {
            Some(rs) => format!("# planar rotation system found after {} link tests, {} rotation systems in all\n", stats.checked, stats.total)
                + &format::print(&Document::from_complex(&l.complex, &l.names, Some(rs), None)),
            None => format!("no planar rotation system among {} ({} link tests)\n", stats.total, stats.checked),
        }
    };
    Ok(Output::new(stdout, code))
}

fn find<T: Copy>(what: &str, tok: &str, table: &std::collections::BTreeMap<T, String>) -> Result<T> {
    table.iter().find(|(_, n)| n.as_str() == tok).map(|(id, _)| *id).ok_or_else(|| anyhow!("unknown {what} `{tok}`"))
}

fn vertex(n: &Names, tok: &str) -> Result<VertexId> {
    find("vertex", tok, &n.vertices)
}

fn edge(n: &Names, tok: &str) -> Result<EdgeId> {
    find("edge", tok, &n.edges)
}

fn face(n: &Names, tok: &str) -> Result<FaceId> {
    find("face", tok, &n.faces)
}

fn arity(op: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        bail!("`{op}` takes {n} argument(s), got {}", args.len());
    }
    Ok(())
}

/// Parses the operands of a stretching operation.
pub fn step_params(op: &str, args: &[String], n: &Names, c: &TwoComplex) -> Result<(StepKind, StepParams)> {
    Ok(match op {
        "branch" => {
            if args.len() < 3 {
                bail!("`branch` takes a vertex, the cut edge and the branch edges");
            }
            let branch = args[2..].iter().map(|a| edge(n, a)).collect::<Result<_>>()?;
            (StepKind::Branch, StepParams::Branch { vertex: vertex(n, &args[0])?, cut: edge(n, &args[1])?, branch })
        }
        "sep2" => {
            arity(op, args, 3)?;
            (StepKind::TwoSeparator, StepParams::TwoSeparator { vertex: vertex(n, &args[0])?, a: edge(n, &args[1])?, b: edge(n, &args[2])? })
        }
        "edge" => {
            arity(op, args, 3)?;
            let faces = (face(n, &args[1])?, face(n, &args[2])?);
            (StepKind::Edge, StepParams::Edge { edge: edge(n, &args[0])?, faces, simplicial: c.is_simplicial() })
        }
        "reversible" => {
            arity(op, args, 1)?;
            (StepKind::ContractReversible, StepParams::ContractReversible { edge: edge(n, &args[0])? })
        }
        "unstretch" => {
            arity(op, args, 1)?;
            (StepKind::UnstretchBranch, StepParams::UnstretchBranch { edge: edge(n, &args[0])? })
        }
        "split" => {
            arity(op, args, 1)?;
            (StepKind::SplitVertex, StepParams::SplitVertex { vertex: vertex(n, &args[0])? })
        }
        "subdivide" => {
            arity(op, args, 1)?;
            (StepKind::Subdivide, StepParams::Subdivide { face: face(n, &args[0])? })
        }
        other => bail!("unknown operation `{other}`"),
    })
}

/// Applies one stretching operation and prints the result.
pub fn stretch(text: &str, op: &str, args: &[String]) -> Result<Output> {
    let l = load(text)?;
    let (kind, params) = step_params(op, args, &l.names, &l.complex)?;
    let (c, step) = stretch::apply(&l.complex, kind, &params).map_err(|e| anyhow!("{op} failed: {e}"))?;
    let mut out = Output::new(format::print(&Document::from_complex(&c, &l.names, None, None)), EXIT_OK);
    out.trace = Some(report::trace(std::slice::from_ref(&step), &l.names));
    Ok(out)
}

/// Describes the link graph at a vertex.
pub fn link(text: &str, v: &str, json: bool) -> Result<Output> {
    let l = load(text)?;
    let lg = link_at(&l.complex, vertex(&l.names, v)?);
    let r = report::link(&lg, &l.names);
    let stdout = if json {
        pretty(&r)
    } else {
        let mut s = format!("link at {}: {} nodes, {} arcs\n", r["vertex"].as_str().unwrap_or(v), lg.nodes.len(), lg.graph.arc_count());
        for a in r["arcs"].as_array().into_iter().flatten() {
            s.push_str(&format!("  {} -- {}  ({})\n", a["ends"][0].as_str().unwrap_or(""), a["ends"][1].as_str().unwrap_or(""), a["corner"].as_str().unwrap_or("")));
        }
        s.push_str(&format!("class {}\n", r["class"].as_str().unwrap_or("")));
        s
    };
    Ok(Output::new(stdout, EXIT_OK))
}

/// Prints a generated complex. `random` takes up to three bounds and a seed.
pub fn gen(name: &str, params: &[String], seed: u64) -> Result<Output> {
    let c = if name == "random" {
        let bound = |i: usize, default: u64| -> Result<u64> {
            params.get(i).map_or(Ok(default), |p| p.parse().with_context(|| format!("bad bound `{p}`")))
        };
        if params.len() > 3 {
            bail!("`random` takes at most three bounds");
        }
        let p = RandomParams { max_vertices: bound(0, 8)? as u32, max_faces: bound(1, 10)? as usize, max_degree: bound(2, 4)? as usize };
        random(&p, seed)
    } else {
        let ps: Vec<&str> = params.iter().map(String::as_str).collect();
        generators::generate(name, &ps).map_err(|e| anyhow!("{name}: {e}"))?
    };
    Ok(Output::new(format::write_complex(&c), EXIT_OK))
}

/// A random complex from a seeded stream.
pub fn random(p: &RandomParams, seed: u64) -> TwoComplex {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    generators::random_complex(p, &mut |n| rng.gen_range(0..n.max(1)))
}

/// Checks the rotation system or certificate carried by a document.
pub fn verify(text: &str) -> Result<Output> {
    let l = load(text)?;
    match (&l.rotation, &l.certificate) {
        (Some(rs), None) => Ok(match genus_gate(&l.complex, rs) {
            Ok(()) => Output::new("rotation system is planar\n".into(), EXIT_OK),
            Err(GateFailure::NonPlanarAt(v)) => Output::new(format!("rotation system is not planar at vertex {}\n", l.names.vertex(v)), EXIT_NO),
            Err(GateFailure::Invalid(e)) => Output::new(format!("rotation system is invalid: {e}\n"), EXIT_NO),
        }),
        (None, Some(c)) => Ok(match c.verify(&l.complex) {
            Ok(()) => Output::new("certificate verified\n".into(), EXIT_OK),
            Err(e) => Output::new(format!("{e}\n"), EXIT_NO),
        }),
        (Some(_), Some(_)) => bail!("document carries both a rotation system and a certificate"),
        (None, None) => bail!("document carries neither a rotation system nor a certificate"),
    }
}
