//! Acceptance gate. Prints one PASS or FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotplan::format;
use rotplan_core::generators::{self, random_complex, RandomParams};
use rotplan_core::graph::Multigraph;
use rotplan_core::link::{all_links, branches_at, link_at, two_separators, LinkGraph};
use rotplan_core::obstruction::Certificate;
use rotplan_core::oracle::{oracle_decide, rotation_system_count, OracleOutcome};
use rotplan_core::pipeline::{decide, decide_verified, DecisionOutcome, Limits, RoundStats};
use rotplan_core::planarity::{brute_force_rotations, unique_embedding_3connected, GraphRotation};
use rotplan_core::rotation::{genus_gate, RotationSystem};
use rotplan_core::stretch::{self, StretchStep};
use rotplan_core::{FaceId, TwoComplex};

const ORACLE_CAP: u64 = 200_000_000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// ----- instance generators --------------------------------------------------------------

fn max_edge_degree(c: &TwoComplex) -> usize {
    c.edge_degrees().values().copied().max().unwrap_or(0)
}

fn random_graph(rng: &mut ChaCha8Rng, nodes: u32, arcs: usize, max_deg: usize) -> Vec<(u32, u32)> {
    let mut deg = vec![0usize; nodes as usize];
    let mut out = BTreeSet::new();
    for _ in 0..200 {
        if out.len() == arcs {
            break;
        }
        let (a, b) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
        let (a, b) = (a.min(b), a.max(b));
        if a == b || out.contains(&(a, b)) || deg[a as usize] >= max_deg || deg[b as usize] >= max_deg {
            continue;
        }
        deg[a as usize] += 1;
        deg[b as usize] += 1;
        out.insert((a, b));
    }
    out.into_iter().collect()
}

/// Small simplicial complexes: random triangle soups and cones over random graphs.
fn small_instance(rng: &mut ChaCha8Rng, i: usize) -> Option<TwoComplex> {
    let c = if i.is_multiple_of(2) {
        let p = RandomParams { max_vertices: rng.gen_range(4..=9), max_faces: rng.gen_range(3..=10), max_degree: 4 };
        random_complex(&p, &mut |k| rng.gen_range(0..k.max(1)))
    } else {
        let n = rng.gen_range(5..=6);
        let m = rng.gen_range(8..=10);
        generators::cone_over(&random_graph(rng, n, m, 4))
    };
    let ok = c.edges().next().is_some()
        && c.validate().is_valid()
        && c.is_simplicial()
        && c.face_count() <= 10
        && max_edge_degree(&c) <= 4
        && rotation_system_count(&c) <= 10_000_000;
    ok.then_some(c)
}

/// Larger cones, for more cutvertex rounds.
fn dense_instance(rng: &mut ChaCha8Rng) -> TwoComplex {
    let n = rng.gen_range(5..=7);
    let m = rng.gen_range(8..=14);
    generators::cone_over(&random_graph(rng, n, m, 5))
}

// ----- independent genus check ----------------------------------------------------------

/// V − E + F of every component of the link at a vertex under the rotation
/// induced by `rs`: end 0 of an edge takes its rotator, end 1 the reverse.
fn link_is_spherical(l: &LinkGraph, rs: &RotationSystem) -> bool {
    let g = &l.graph;
    let n = g.node_count();
    let mut order: Vec<Vec<usize>> = Vec::with_capacity(n);
    for u in 0..n {
        let (e, end) = l.nodes[u];
        let rot = &rs.rotators[&e];
        let mut hs: Vec<usize> = g.halves(u).to_vec();
        hs.sort_by_key(|&h| rot.iter().position(|&d| d == l.half_dart[h]).expect("dart in rotator"));
        if end == 1 {
            hs.reverse();
        }
        order.push(hs);
    }
    let succ = |h: usize| -> usize {
        let t = Multigraph::twin(h);
        let at = &order[g.half_node(t)];
        let i = at.iter().position(|&x| x == t).unwrap();
        at[(i + 1) % at.len()]
    };
    let comps = g.components();
    let mut comp_of = vec![0usize; n];
    for (i, comp) in comps.iter().enumerate() {
        for &u in comp {
            comp_of[u] = i;
        }
    }
    let halves = 2 * g.arc_count();
    let mut seen = vec![false; halves];
    let mut faces = vec![0i64; comps.len()];
    for h in 0..halves {
        if seen[h] {
            continue;
        }
        let mut x = h;
        while !seen[x] {
            seen[x] = true;
            x = succ(x);
        }
        faces[comp_of[g.half_node(h)]] += 1;
    }
    let mut arcs = vec![0i64; comps.len()];
    for &(a, _) in g.arcs() {
        arcs[comp_of[a]] += 1;
    }
    comps.iter().enumerate().all(|(i, comp)| {
        let f = if arcs[i] == 0 { 1 } else { faces[i] };
        comp.len() as i64 - arcs[i] + f == 2
    })
}

fn spherical_everywhere(c: &TwoComplex, rs: &RotationSystem) -> bool {
    all_links(c).values().all(|l| link_is_spherical(l, rs))
}

// ----- criteria ---------------------------------------------------------------------------

fn oracle_agreement(rounds: &mut Vec<RoundStats>) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut total, mut yes, mut no, mut bad) = (0, 0, 0, Vec::new());
    let mut i = 0;
    while total < 600 && i < 20_000 {
        i += 1;
        let Some(c) = small_instance(&mut rng, i) else { continue };
        total += 1;
        let (o, _) = oracle_decide(&c, ORACLE_CAP);
        let truth = match o {
            OracleOutcome::Exists(rs) => {
                if !spherical_everywhere(&c, &rs) {
                    bad.push(format!("#{i}: oracle witness not spherical"));
                }
                true
            }
            OracleOutcome::NotExists => false,
            OracleOutcome::CapExceeded => {
                bad.push(format!("#{i}: oracle cap"));
                continue;
            }
        };
        match decide_verified(&c, &Limits::default()) {
            Ok(d) => {
                if d.outcome.is_embeddable() != truth {
                    bad.push(format!("#{i}: decide says {} but oracle says {truth}", d.outcome.is_embeddable()));
                }
                if let DecisionOutcome::Embeddable { rotation, .. } = &d.outcome {
                    if !spherical_everywhere(&c, rotation) {
                        bad.push(format!("#{i}: rotation not spherical"));
                    }
                }
                rounds.extend(d.rounds);
            }
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = total >= 500 && bad.is_empty() && yes > 0 && no > 0 && secs <= 600.0;
    verdict(pass, format!("{total} instances ({yes} embeddable, {no} not), {} disagreements, {secs:.1}s {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn applicable_steps(c: &TwoComplex) -> Vec<(TwoComplex, StretchStep)> {
    let mut out = Vec::new();
    for v in c.vertices() {
        let link = link_at(c, v);
        for u in 0..link.graph.node_count() {
            if let Ok(bs) = branches_at(&link.graph, u) {
                for b in bs {
                    out.extend(stretch::stretch_branch(c, v, &b));
                }
            }
        }
        if let Ok(seps) = two_separators(&link.graph) {
            for s in seps {
                out.extend(stretch::stretch_two_separator(c, v, (link.nodes[s.a].0, link.nodes[s.b].0)));
            }
        }
        out.extend(stretch::split_vertex(c, v).ok().filter(|(d, _)| d.vertex_count() > c.vertex_count()));
    }
    let faces: Vec<FaceId> = c.faces().map(|(f, _)| f).collect();
    for (e, _) in c.edges() {
        for &f1 in &faces {
            for &f2 in &faces {
                if f1 < f2 {
                    out.extend(stretch::stretch_edge(c, e, (f1, f2)));
                }
            }
        }
        out.extend(stretch::contract_reversible(c, e));
        out.extend(stretch::unstretch_branch(c, e));
    }
    out
}

fn stretching_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut kinds = std::collections::BTreeMap::new();
    let (mut pairs, mut negative, mut bad) = (0, 0, Vec::new());
    let mut i = 0;
    let mut queue: Vec<TwoComplex> = [generators::two_tetrahedra_at_edge(), generators::two_tetrahedra_at_vertex(), generators::parallel_cone(3), generators::moebius_disc()].into();
    while (pairs < 400 || negative < 20) && i < 5000 {
        i += 1;
        let c = match queue.pop() {
            Some(c) => c,
            None => match small_instance(&mut rng, i) {
                Some(c) => c,
                None => continue,
            },
        };
        let (before, _) = oracle_decide(&c, ORACLE_CAP);
        let Some(a) = before.exists() else { continue };
        let steps = applicable_steps(&c);
        for (after, s) in steps.into_iter().take(6) {
            if !after.validate().is_valid() {
                bad.push(format!("{:?} produced an invalid complex", s.kind));
                continue;
            }
            let (o, _) = oracle_decide(&after, ORACLE_CAP);
            let Some(b) = o.exists() else { continue };
            pairs += 1;
            if !a {
                negative += 1;
            }
            *kinds.entry(format!("{:?}", s.kind)).or_insert(0) += 1;
            if a != b {
                bad.push(format!("{:?} on instance {i}: {a} before, {b} after", s.kind));
            }
        }
    }
    verdict(pairs >= 200 && bad.is_empty() && kinds.len() >= 4, format!("{pairs} pairs ({negative} on non-embeddable inputs), kinds {kinds:?}, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn run_cli(args: &[&str], stdin: &str) -> (Option<i32>, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rotplan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("rotplan binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// `gen ... | check -`, returning the windings of a torus-crossing answer.
fn windings_via_cli(gen: &[&str]) -> Result<(u32, u32), String> {
    let mut args = vec!["gen"];
    args.extend_from_slice(gen);
    let (code, doc) = run_cli(&args, "");
    if code != Some(0) {
        return Err(format!("gen {gen:?} failed"));
    }
    let (code, out) = run_cli(&["check", "-"], &doc);
    if code != Some(2) {
        return Err(format!("{gen:?}: exit {code:?}"));
    }
    let l = format::read(&out).map_err(|e| e.to_string())?;
    match l.certificate {
        Some(Certificate::TorusCrossing(t)) => {
            t.verify(&l.complex).map_err(|e| e.to_string())?;
            let (a, b) = t.windings;
            Ok((a.min(b) as u32, a.max(b) as u32))
        }
        other => Err(format!("{gen:?}: {other:?}")),
    }
}

fn obstruction_reproduction() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    match windings_via_cli(&["moebius-disc"]) {
        Ok((1, 2)) => notes.push("moebius {1,2}".to_string()),
        other => {
            pass = false;
            notes.push(format!("moebius {other:?}"));
        }
    }
    for q in 2..=4u32 {
        for p in 1..q {
            let (ps, qs) = (p.to_string(), q.to_string());
            match windings_via_cli(&["torus-cross", &ps, &qs]) {
                Ok(w) if w == (p, q) => notes.push(format!("({p},{q})")),
                other => {
                    pass = false;
                    notes.push(format!("({p},{q}) {other:?}"));
                }
            }
        }
    }
    verdict(pass, notes.join(" "))
}

fn positive_instances() -> Verdict {
    let mut cases: Vec<(String, TwoComplex)> = vec![
        ("tetra".into(), generators::tetrahedron()),
        ("octa".into(), generators::octahedron()),
        ("delta2".into(), generators::delta2()),
    ];
    for n in 1..=6 {
        cases.push((format!("deltaplus {n}"), generators::delta_plus(n)));
    }
    for n in 3..=8 {
        cases.push((format!("annulus {n}"), generators::annulus(n)));
    }
    let mut bad = Vec::new();
    for (name, c) in &cases {
        match decide_verified(c, &Limits::default()) {
            Ok(d) => match d.outcome {
                DecisionOutcome::Embeddable { rotation, .. } => {
                    if genus_gate(c, &rotation).is_err() || !spherical_everywhere(c, &rotation) {
                        bad.push(format!("{name}: not spherical"));
                    }
                }
                DecisionOutcome::Obstructed { .. } => bad.push(format!("{name}: obstructed")),
            },
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    verdict(bad.is_empty(), format!("{} instances, failures {bad:?}", cases.len()))
}

fn degree_ledger(rounds: &[RoundStats]) -> Verdict {
    let mut all = rounds.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut errors = 0;
    for _ in 0..300 {
        let c = dense_instance(&mut rng);
        match decide(&c, &Limits::default()) {
            Ok(d) => all.extend(d.rounds),
            Err(_) => errors += 1,
        }
    }
    let violations = all
        .iter()
        .filter(|r| r.degree_parameter_after > r.degree_parameter_before || r.cutvertex_degree_after >= r.cutvertex_degree_before)
        .count();
    verdict(violations == 0 && errors == 0 && !all.is_empty(), format!("{} rounds, {violations} violations, {errors} errors", all.len()))
}

fn normalize(r: &GraphRotation) -> Vec<Vec<usize>> {
    r.rot
        .iter()
        .map(|hs| {
            let i = hs.iter().enumerate().min_by_key(|(_, &h)| h).map_or(0, |(i, _)| i);
            hs[i..].iter().chain(&hs[..i]).copied().collect()
        })
        .collect()
}

fn three_connected(n: usize, arcs: &[(usize, usize)]) -> bool {
    if n < 4 {
        return false;
    }
    for a in 0..n {
        for b in a + 1..n {
            let alive: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
            let mut seen = vec![false; n];
            let mut stack = vec![alive[0]];
            seen[alive[0]] = true;
            while let Some(x) = stack.pop() {
                for &(p, q) in arcs {
                    for (s, t) in [(p, q), (q, p)] {
                        if s == x && t != a && t != b && !seen[t] {
                            seen[t] = true;
                            stack.push(t);
                        }
                    }
                }
            }
            if alive.iter().any(|&x| !seen[x]) {
                return false;
            }
        }
    }
    true
}

/// A stacked triangulation with some edges removed, kept 3-connected.
fn random_three_connected_planar(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>) {
    loop {
        let n = rng.gen_range(5..=8);
        let mut arcs: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        for v in 4..n {
            let [a, b, c] = faces.swap_remove(rng.gen_range(0..faces.len()));
            arcs.extend([(a, v), (b, v), (c, v)]);
            faces.extend([[a, b, v], [a, c, v], [b, c, v]]);
        }
        for _ in 0..arcs.len() {
            let i = rng.gen_range(0..arcs.len());
            let mut fewer = arcs.clone();
            fewer.remove(i);
            if rng.gen_bool(0.5) && three_connected(n, &fewer) {
                arcs = fewer;
            }
        }
        let mut deg = vec![0u64; n];
        for &(a, b) in &arcs {
            deg[a] += 1;
            deg[b] += 1;
        }
        let space: u64 = deg.iter().map(|&d| (1..d.max(1)).product::<u64>()).product();
        if space <= 3_000_000 && three_connected(n, &arcs) {
            return (n, arcs);
        }
    }
}

fn whitney_gate() -> Verdict {
    let mut graphs: Vec<(String, Multigraph)> = vec![
        ("K4".into(), Multigraph::from_arcs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        ("octahedron".into(), Multigraph::from_arcs(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1), (5, 1), (5, 2), (5, 3), (5, 4)])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10 {
        let (n, arcs) = random_three_connected_planar(&mut rng);
        graphs.push((format!("random#{i}({n} nodes, {} arcs)", arcs.len()), Multigraph::from_arcs(n, &arcs)));
    }
    let mut bad = Vec::new();
    for (name, g) in &graphs {
        let found = RefCell::new(BTreeSet::new());
        let count = brute_force_rotations(g, usize::MAX, |r| {
            found.borrow_mut().insert(normalize(r));
            true
        });
        let pair = match unique_embedding_3connected(g) {
            Ok((a, b)) => BTreeSet::from([normalize(&a), normalize(&b)]),
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        if count.planar != 2 || *found.borrow() != pair {
            bad.push(format!("{name}: {} planar rotations", count.planar));
        }
    }
    verdict(bad.is_empty(), format!("{} graphs, failures {bad:?}", graphs.len()))
}

fn scaling() -> Verdict {
    let mut points = Vec::new();
    let mut bad = Vec::new();
    for k in [7u32, 10, 14, 20, 28, 40, 56, 71] {
        let c = generators::disc(k);
        let faces = c.face_count() as f64;
        let mut best = Duration::MAX;
        let mut outcome = None;
        for _ in 0..3 {
            let t = Instant::now();
            let d = decide(&c, &Limits::default());
            best = best.min(t.elapsed());
            outcome = Some(d);
        }
        match outcome.unwrap() {
            Ok(d) => match &d.outcome {
                DecisionOutcome::Embeddable { rotation, .. } if genus_gate(&c, rotation).is_ok() => {}
                _ => bad.push(format!("disc {k}: wrong answer")),
            },
            Err(e) => bad.push(format!("disc {k}: {e}")),
        }
        points.push((faces, best.as_secs_f64().max(1e-6)));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let (lo, hi) = (points[0], points[points.len() - 1]);
    verdict(
        slope <= 3.0 && bad.is_empty() && lo.0 <= 100.0 && hi.0 >= 10_000.0,
        format!("exponent {slope:.2} over {:.0}..{:.0} faces ({:.3}s..{:.3}s), failures {bad:?}", lo.0, hi.0, lo.1, hi.1),
    )
}

fn format_round_trip() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut bad = Vec::new();
    for p in &files {
        let text = std::fs::read_to_string(p).unwrap();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        match format::parse(&text) {
            Ok(doc) if format::print(&doc) == text => {}
            Ok(_) => bad.push(format!("{name}: differs")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    verdict(files.len() >= 20 && bad.is_empty(), format!("{} documents, failures {bad:?}", files.len()))
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
        verdict(false, format!("panicked: {msg}"))
    })
}

fn main() {
    let mut rounds = Vec::new();
    let results = [
        ("1 oracle agreement", guarded(|| oracle_agreement(&mut rounds))),
        ("2 stretching equivalence", guarded(stretching_equivalence)),
        ("3 obstruction reproduction", guarded(obstruction_reproduction)),
        ("4 positive instances", guarded(positive_instances)),
        ("5 degree-parameter ledger", guarded(|| degree_ledger(&rounds))),
        ("6 whitney uniqueness", guarded(whitney_gate)),
        ("7 scaling", guarded(scaling)),
        ("8 format round-trip", guarded(format_round_trip)),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
