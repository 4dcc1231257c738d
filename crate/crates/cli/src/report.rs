//! JSON renderings of decisions, traces, certificates and links.

use rotplan_core::link::LinkGraph;
use rotplan_core::pipeline::RoundStats;
use rotplan_core::stretch::{StepParams, StretchStep};
use serde_json::{json, Map, Value};

use crate::format::{ChainDoc, CertificateDoc, DartRef, Document, Names};

pub const SCHEMA: u32 = 1;

fn dart(d: &DartRef) -> Value {
    Value::String(format!("{}:{}", d.face, d.pos))
}

fn chain(c: &ChainDoc) -> Value {
    json!({ "edges": c.edges, "vertices": c.vertices })
}

pub fn rotation(doc: &Document) -> Value {
    let mut m = Map::new();
    for (e, ds) in &doc.rotation {
        m.insert(e.clone(), ds.iter().map(dart).collect());
    }
    Value::Object(m)
}

pub fn certificate(c: &CertificateDoc) -> Value {
    match c {
        CertificateDoc::NonPlanarLink { vertex, kind, corners } => json!({
            "kind": "non-planar-link",
            "vertex": vertex,
            "kuratowski": format!("{kind:?}"),
            "corners": corners.iter().map(dart).collect::<Vec<_>>(),
        }),
        CertificateDoc::ParaPath(p) => json!({ "kind": "para-path", "path": chain(p) }),
        CertificateDoc::TorusCrossing { windings, cycle, deleted, mega } => json!({
            "kind": "torus-crossing",
            "windings": [windings.0, windings.1],
            "cycle": chain(cycle),
            "deleted_faces": deleted,
            "mega_faces": mega.iter().map(|m| json!({
                "winding": m.winding,
                "faces": m.faces,
                "darts": m.darts.iter().map(dart).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        CertificateDoc::ParityCycle(chains) => json!({ "kind": "parity-cycle", "chains": chains.iter().map(chain).collect::<Vec<_>>() }),
    }
}

pub fn rounds(rs: &[RoundStats]) -> Value {
    rs.iter()
        .map(|r| {
            json!({
                "cutvertex_degree": [r.cutvertex_degree_before, r.cutvertex_degree_after],
                "degree_parameter": [r.degree_parameter_before, r.degree_parameter_after],
            })
        })
        .collect()
}

fn params(p: &StepParams, n: &Names) -> Value {
    match p {
        StepParams::Branch { vertex, cut, branch } => json!({
            "vertex": n.vertex(*vertex),
            "cut": n.edge(*cut),
            "branch": branch.iter().map(|e| n.edge(*e)).collect::<Vec<_>>(),
        }),
        StepParams::TwoSeparator { vertex, a, b } => json!({ "vertex": n.vertex(*vertex), "separator": [n.edge(*a), n.edge(*b)] }),
        StepParams::Edge { edge, faces, simplicial } => {
            json!({ "edge": n.edge(*edge), "faces": [n.face(faces.0), n.face(faces.1)], "simplicial": simplicial })
        }
        StepParams::ContractReversible { edge } | StepParams::UnstretchBranch { edge } => json!({ "edge": n.edge(*edge) }),
        StepParams::SplitVertex { vertex } => json!({ "vertex": n.vertex(*vertex) }),
        StepParams::Subdivide { face } => json!({ "face": n.face(*face) }),
    }
}

/// One object per step. Cells created along the way carry decimal ids.
pub fn trace(steps: &[StretchStep], names: &Names) -> Value {
    steps
        .iter()
        .map(|s| {
            let ch = &s.changes;
            json!({
                "kind": format!("{:?}", s.kind),
                "params": params(&s.params, names),
                "new": {
                    "vertices": ch.new_vertices.iter().map(|v| names.vertex(*v)).collect::<Vec<_>>(),
                    "edges": ch.new_edges.iter().map(|e| names.edge(*e)).collect::<Vec<_>>(),
                    "faces": ch.new_faces.iter().map(|f| names.face(*f)).collect::<Vec<_>>(),
                },
                "removed": {
                    "vertices": ch.removed_vertices.iter().map(|v| names.vertex(*v)).collect::<Vec<_>>(),
                    "edges": ch.removed_edges.iter().map(|e| names.edge(*e)).collect::<Vec<_>>(),
                    "faces": ch.removed_faces.iter().map(|f| names.face(*f)).collect::<Vec<_>>(),
                },
            })
        })
        .collect()
}

pub fn link(l: &LinkGraph, names: &Names) -> Value {
    let cls = l.classify();
    let node = |i: usize| {
        let (e, end) = l.nodes[i];
        format!("{}.{}", names.edge(e), end)
    };
    json!({
        "vertex": names.vertex(l.vertex),
        "nodes": (0..l.nodes.len()).map(node).collect::<Vec<_>>(),
        "arcs": l.graph.arcs().iter().enumerate().map(|(a, &(u, v))| {
            let c = l.arc_corner[a];
            json!({ "ends": [node(u), node(v)], "corner": format!("{}:{}", names.face(c.face), c.pos) })
        }).collect::<Vec<_>>(),
        "class": format!("{:?}", cls.class),
        "two_connected": cls.is_2connected,
        "parallel": cls.is_parallel,
        "free": cls.is_free,
        "subdivision_of_3_connected": cls.is_sub3,
        "cut_nodes": l.graph.cut_nodes().into_iter().map(node).collect::<Vec<_>>(),
    })
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(flat).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// The trace as text lines, one `step` line per step followed by its cell changes.
pub fn trace_text(trace: &Value) -> String {
    let mut out = String::from("# stretch trace\n");
    for s in trace.as_array().into_iter().flatten() {
        out.push_str("step ");
        out.push_str(s["kind"].as_str().unwrap_or("?"));
        for (k, v) in s["params"].as_object().into_iter().flatten() {
            out.push_str(&format!(" {k}={}", flat(v)));
        }
        out.push('\n');
        for part in ["new", "removed"] {
            let cells: Vec<String> = ["vertices", "edges", "faces"]
                .iter()
                .filter(|c| s[part][**c].as_array().is_some_and(|a| !a.is_empty()))
                .map(|c| format!("{c}={}", flat(&s[part][*c])))
                .collect();
            if !cells.is_empty() {
                out.push_str(&format!("  {part} {}\n", cells.join(" ")));
            }
        }
    }
    out
}
