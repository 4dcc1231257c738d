//! The decision procedure: stretch to a locally almost 3-connected, stretched
//! out complex, decide there, and pull the answer back.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::TwoComplex;
use crate::error::{ObstructionError, PipelineError, StretchError};
use crate::graph::Multigraph;
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::link::{all_links, branches_at, Branch, cutvertex_degree, is_cycle, is_free_graph, is_subdivision_of_3connected, link_at, parallel_between, parallel_structure, star_of_parallel_center, two_separators, LinkGraph};
use crate::obstruction::{final_check, non_planar_link, Certificate, FinalCheck};
use crate::planarity::planar_embed;
use crate::rotation::{genus_gate, RotationSystem};
use crate::stretch::{self, rotation_pullback, StepKind, StepParams, StretchStep, StretchTrace};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: DEFAULT_MAX_STEPS }
    }
}

/// Measurements around one round of cutvertex-degree reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundStats {
    pub cutvertex_degree_before: usize,
    pub cutvertex_degree_after: usize,
    pub degree_parameter_before: u64,
    pub degree_parameter_after: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionOutcome {
    /// A planar rotation system of the input.
    Embeddable { rotation: RotationSystem, trace: StretchTrace },
    /// A certificate valid on the input stretched by `trace`.
    Obstructed { certificate: Certificate, trace: StretchTrace },
}

impl DecisionOutcome {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, DecisionOutcome::Embeddable { .. })
    }

    pub fn trace(&self) -> &StretchTrace {
        match self {
            DecisionOutcome::Embeddable { trace, .. } | DecisionOutcome::Obstructed { trace, .. } => trace,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub outcome: DecisionOutcome,
    pub rounds: Vec<RoundStats>,
}

struct Driver {
    c: TwoComplex,
    trace: StretchTrace,
    limits: Limits,
    /// New edges of the branch stretches made while normalizing this round.
    branch_edges: Vec<EdgeId>,
    diagonals: Vec<EdgeId>,
}

/// Early exit of a stage.
enum Halt {
    Obstructed(Box<Certificate>),
    Error(PipelineError),
}

impl From<PipelineError> for Halt {
    fn from(e: PipelineError) -> Self {
        Halt::Error(e)
    }
}

impl From<StretchError> for Halt {
    fn from(e: StretchError) -> Self {
        Halt::Error(PipelineError::Stretch(e))
    }
}

type Stage<T = ()> = Result<T, Halt>;

impl Driver {
    fn take(&mut self, r: Result<(TwoComplex, StretchStep), StretchError>) -> Stage<StretchStep> {
        let (c, s) = r?;
        if self.trace.len() >= self.limits.max_steps {
            return Err(PipelineError::BudgetExceeded(self.limits.max_steps).into());
        }
        self.c = c;
        self.trace.push(s.clone());
        Ok(s)
    }

    fn planar_links(&self) -> Stage {
        match non_planar_link(&self.c) {
            Some(cert) => Err(Halt::Obstructed(Box::new(cert))),
            None => Ok(()),
        }
    }

    fn split_all(&mut self) -> Stage {
        let split: Vec<VertexId> = all_links(&self.c).into_iter().filter(|(_, l)| !l.graph.is_connected()).map(|(v, _)| v).collect();
        for v in split {
            self.take(stretch::split_vertex(&self.c, v))?;
        }
        Ok(())
    }

    /// Stretches branches until every link is 2-connected or a star of
    /// parallel graphs.
    fn local_cuts(&mut self) -> Stage {
        loop {
            // prefer branches that leave earlier stretches of this round intact
            let mut todo: Option<(bool, VertexId, Branch)> = None;
            'scan: for (v, l) in all_links(&self.c) {
                let g = &l.graph;
                if g.node_count() < 3 || g.is_2connected() || star_of_parallel_center(g).is_some() || is_free_graph(g) {
                    continue;
                }
                // cut nodes of degree two only join pendant paths
                let cuts: Vec<usize> = g.cut_nodes().into_iter().filter(|&u| g.degree(u) > 2).collect();
                let fresh = |b: &Branch| b.nodes.iter().any(|&u| self.branch_edges.contains(&l.nodes[u].0) || self.diagonals.contains(&l.nodes[u].0));
                let mut found = false;
                for &e in &cuts {
                    let branches = branches_at(g, e).map_err(|_| PipelineError::Stuck("cut node without branches"))?;
                    for b in branches {
                        let useful = if cuts.len() >= 2 {
                            b.nodes.iter().any(|u| *u != e && cuts.contains(u))
                        } else {
                            !branch_is_parallel(g, &b.arcs, e)
                        };
                        if !useful {
                            continue;
                        }
                        found = true;
                        let stale = fresh(&b);
                        if todo.as_ref().is_none_or(|t| t.0 && !stale) {
                            todo = Some((stale, v, b));
                        }
                        if !stale {
                            break 'scan;
                        }
                    }
                }
                if !cuts.is_empty() && !found {
                    return Err(PipelineError::Stuck("no branch to stretch").into());
                }
            }
            let Some((_, v, b)) = todo else { return Ok(()) };
            let s = self.take(stretch::stretch_branch(&self.c, v, &b))?;
            self.branch_edges.extend(s.changes.new_edges.first().copied());
            self.diagonals.extend(s.changes.new_edges.iter().skip(1).copied());
        }
    }

    /// Drives every 2-connected non-parallel link to maximum degree below `a`.
    fn be_nice(&mut self, a: usize) -> Stage {
        loop {
            let mut todo = None;
            for (v, l) in all_links(&self.c) {
                let g = &l.graph;
                if !g.is_2connected() || parallel_structure(g).is_some() {
                    continue;
                }
                if let Some(e) = (0..g.node_count()).find(|&u| g.degree(u) >= a) {
                    todo = Some((v, l, e));
                    break;
                }
            }
            let Some((v, l, e)) = todo else { return Ok(()) };
            let r = planar_embed(&l.graph).map_err(|_| match non_planar_link(&self.c) {
                Some(cert) => Halt::Obstructed(Box::new(cert)),
                None => Halt::Error(PipelineError::Stuck("non-planar link without witness")),
            })?;
            let seps = two_separators(&l.graph).map_err(|_| PipelineError::Stuck("link not 2-connected"))?;
            if let Some(s) = seps.iter().find(|s| s.proper && (s.a == e || s.b == e)) {
                let pair = (l.nodes[s.a].0, l.nodes[s.b].0);
                self.take(stretch::stretch_two_separator(&self.c, v, pair))?;
            } else {
                self.stretch_along(&l, e, &r.rot[e])?;
            }
        }
    }

    /// Stretches the edge of node `e` in the direction of two faces adjacent in
    /// the rotation `rot` at `e`, then subdivides the new face of size two.
    fn stretch_along(&mut self, l: &LinkGraph, e: usize, rot: &[usize]) -> Stage {
        let face = |h: usize| l.arc_corner[h >> 1].face;
        let edge = l.nodes[e].0;
        let k = rot.len();
        let (f1, f2) = (0..k)
            .map(|i| (face(rot[i]), face(rot[(i + 1) % k])))
            .find(|(a, b)| a != b)
            .ok_or(PipelineError::Stuck("no two distinct faces at the edge"))?;
        let s = self.take(stretch::pre_stretch_edge(&self.c, edge, (f1, f2)))?;
        let bigon: FaceId = s.changes.new_faces[0];
        self.take(stretch::subdivide_face(&self.c, bigon))?;
        Ok(())
    }

    /// Vertex-disjoint paths of degree-`a` edges joining stars of parallel
    /// graphs through parallel links.
    fn path_family(&self, a: usize) -> Stage<Vec<(Vec<EdgeId>, Vec<VertexId>)>> {
        let links = all_links(&self.c);
        let center_edge = |l: &LinkGraph| star_of_parallel_center(&l.graph).map(|u| (l.nodes[u].0, l.graph.degree(u)));
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for (&v, l) in &links {
            let Some((e1, d)) = center_edge(l) else { continue };
            if d != a || used.contains(&v) {
                continue;
            }
            let mut edges = vec![e1];
            let mut vertices = vec![v];
            let mut e = e1;
            let mut at = v;
            loop {
                let w = self.c.edge(e).ok_or(PipelineError::Stuck("path edge vanished"))?.other(at);
                if vertices.contains(&w) || used.contains(&w) {
                    return Err(PipelineError::Stuck("path revisits a vertex").into());
                }
                vertices.push(w);
                let lw = &links[&w];
                let node = lw.node_of_edge(e).ok_or(PipelineError::Stuck("path edge missing from link"))?;
                if star_of_parallel_center(&lw.graph).is_some() {
                    if star_of_parallel_center(&lw.graph) != Some(node) {
                        return Err(PipelineError::Stuck("path ends away from the cut node").into());
                    }
                    break;
                }
                let g = &lw.graph;
                let other = (0..g.node_count())
                    .find(|&u| u != node && g.degree(u) > 2 && parallel_between(g, node, u).is_some())
                    .ok_or(PipelineError::Stuck("interior link is not a parallel graph"))?;
                e = lw.nodes[other].0;
                edges.push(e);
                at = w;
            }
            used.extend(vertices.iter().copied());
            out.push((edges, vertices));
        }
        Ok(out)
    }

    /// Stretches every branch at the cut node `e` of the link at `v`.
    fn stretch_all_branches(&mut self, v: VertexId, e: EdgeId) -> Stage {
        let l = link_at(&self.c, v);
        let Some(node) = l.node_of_edge(e) else { return Ok(()) };
        let Ok(bs) = branches_at(&l.graph, node) else { return Ok(()) };
        let groups: Vec<Vec<EdgeId>> =
            bs.iter().map(|b| b.nodes.iter().filter(|&&u| u != node).map(|&u| l.nodes[u].0).collect()).collect();
        for branch in groups {
            let params = StepParams::Branch { vertex: v, cut: e, branch };
            self.take(stretch::apply(&self.c, StepKind::Branch, &params))?;
        }
        Ok(())
    }

    fn contract_paths(&mut self, paths: Vec<(Vec<EdgeId>, Vec<VertexId>)>) -> Stage {
        for (edges, vertices) in paths {
            let n = edges.len();
            self.stretch_all_branches(vertices[0], edges[0])?;
            if n >= 2 {
                self.stretch_all_branches(vertices[n], edges[n - 1])?;
            }
            for e in edges {
                self.take(stretch::contract_reversible(&self.c, e))?;
            }
        }
        Ok(())
    }

    /// Contracts again the new edges of face-degree three or more left by
    /// normalizing, newest first.
    fn unstretch_branches(&mut self) -> Stage {
        let edges = core::mem::take(&mut self.branch_edges);
        self.diagonals.clear();
        let degrees = self.c.edge_degrees();
        for &f in edges.iter().rev() {
            if degrees.get(&f).is_some_and(|&d| d >= 3) && stretch::is_unstretchable(&self.c, f) {
                self.take(stretch::unstretch_branch(&self.c, f))?;
            }
        }
        Ok(())
    }

    fn normalize(&mut self) -> Stage {
        self.split_all()?;
        self.local_cuts()?;
        self.planar_links()
    }

    fn cutvertex_rounds(&mut self, rounds: &mut Vec<RoundStats>) -> Stage {
        loop {
            self.split_all()?;
            let before_c = cutvertex_degree(&self.c).map_err(|_| PipelineError::Stuck("disconnected link"))?;
            let before_p = self.c.edge_degree_parameter().0;
            self.normalize()?;
            let a = cutvertex_degree(&self.c).map_err(|_| PipelineError::Stuck("disconnected link"))?;
            if a <= 3 {
                return Ok(());
            }
            self.be_nice(a)?;
            let paths = self.path_family(a)?;
            self.contract_paths(paths)?;
            self.unstretch_branches()?;
            self.split_all()?;
            let after_c = cutvertex_degree(&self.c).map_err(|_| PipelineError::Stuck("disconnected link"))?;
            rounds.push(RoundStats {
                cutvertex_degree_before: before_c.max(a),
                cutvertex_degree_after: after_c,
                degree_parameter_before: before_p,
                degree_parameter_after: self.c.edge_degree_parameter().0,
            });
            if after_c >= a {
                return Err(PipelineError::Stuck("cutvertex-degree did not drop").into());
            }
        }
    }

    /// Stretches proper 2-separators until every link is almost 3-connected.
    fn local_3_connectivity(&mut self) -> Stage {
        loop {
            let mut todo = None;
            for (v, l) in all_links(&self.c) {
                let g = &l.graph;
                if !g.is_2connected() || parallel_structure(g).is_some() || is_cycle(g) || is_subdivision_of_3connected(g) {
                    continue;
                }
                let seps = two_separators(g).map_err(|_| PipelineError::Stuck("link not 2-connected"))?;
                let s = seps.iter().find(|s| s.proper).ok_or(PipelineError::Stuck("no proper 2-separator"))?;
                todo = Some((v, (l.nodes[s.a].0, l.nodes[s.b].0)));
                break;
            }
            let Some((v, pair)) = todo else { return Ok(()) };
            self.take(stretch::stretch_two_separator(&self.c, v, pair))?;
        }
    }

    /// Stretches until every edge of face-degree two has an end whose link is
    /// neither rigid nor a parallel graph with thick branch nodes.
    fn stretch_out(&mut self) -> Stage {
        loop {
            let links = all_links(&self.c);
            let degrees = self.c.edge_degrees();
            let mut todo = None;
            for (e, x) in self.c.edges() {
                if degrees.get(&e) != Some(&2) || x.is_loop() {
                    continue;
                }
                let (lt, lh) = (&links[&x.tail], &links[&x.head]);
                if !(thick(lt) && thick(lh)) {
                    continue;
                }
                let node = lt.node_of_edge(e).ok_or(PipelineError::Stuck("edge missing from link"))?;
                let pair = separating_pair(lt, node).ok_or(PipelineError::Stuck("no separating pair around the edge"))?;
                todo = Some((x.tail, pair));
                break;
            }
            let Some((v, pair)) = todo else { return Ok(()) };
            self.take(stretch::apply(&self.c, StepKind::MakeStretchedOut, &StepParams::TwoSeparator { vertex: v, a: pair.0, b: pair.1 }))?;
        }
    }
}

fn branch_is_parallel(g: &Multigraph, arcs: &[usize], cut: usize) -> bool {
    let (sub, back) = g.arc_subgraph(arcs);
    let Some(c) = back.iter().position(|&x| x == cut) else { return false };
    if sub.arc_count() == 1 || is_cycle(&sub) {
        return true;
    }
    (0..sub.node_count()).any(|b| b != c && parallel_between(&sub, c, b).is_some())
}

/// Rigid, or parallel with branch nodes of degree at least three.
fn thick(l: &LinkGraph) -> bool {
    let g = &l.graph;
    if g.is_2connected() && is_subdivision_of_3connected(g) {
        return true;
    }
    matches!(parallel_structure(g), Some(p) if g.degree(p.a) >= 3)
}

/// Branch nodes closing the subdivided arc through the degree-two `node`.
fn separating_pair(l: &LinkGraph, node: usize) -> Option<(EdgeId, EdgeId)> {
    let g = &l.graph;
    let walk = |h0: usize| -> Option<usize> {
        let mut cur = h0;
        for _ in 0..=g.node_count() {
            let n = g.half_target(cur);
            if g.degree(n) != 2 {
                return Some(n);
            }
            cur = g.halves(n).iter().copied().find(|&x| x != Multigraph::twin(cur))?;
        }
        None
    };
    let hs = g.halves(node);
    if hs.len() != 2 {
        return None;
    }
    let (x, y) = (walk(hs[0])?, walk(hs[1])?);
    if x == y {
        return None;
    }
    Some((l.nodes[x].0, l.nodes[y].0))
}

/// Decides whether `c` has a planar rotation system.
pub fn decide(c: &TwoComplex, limits: &Limits) -> Result<Decision, PipelineError> {
    if !c.validate().is_valid() {
        return Err(PipelineError::InvalidInput("complex fails validation"));
    }
    if !c.is_simplicial() {
        return Err(PipelineError::InvalidInput("complex is not simplicial"));
    }
    let mut d = Driver { c: c.clone(), trace: StretchTrace::new(), limits: *limits, branch_edges: Vec::new(), diagonals: Vec::new() };
    let mut rounds = Vec::new();
    let staged = (|| -> Stage<FinalCheck> {
        d.planar_links()?;
        d.cutvertex_rounds(&mut rounds)?;
        d.local_3_connectivity()?;
        d.stretch_out()?;
        final_check(&d.c).map_err(|e| match e {
            ObstructionError::PreconditionViolated(why) => Halt::Error(PipelineError::Stuck(why)),
            _ => Halt::Error(PipelineError::Stuck("final check failed")),
        })
    })();
    let outcome = match staged {
        Ok(FinalCheck::Planar(rs)) => {
            let rotation = rotation_pullback(&d.trace, &rs)?;
            genus_gate(c, &rotation).map_err(|_| PipelineError::VerificationFailed("pulled-back rotation is not planar"))?;
            DecisionOutcome::Embeddable { rotation, trace: d.trace }
        }
        Ok(FinalCheck::Obstructed(certificate)) => DecisionOutcome::Obstructed { certificate, trace: d.trace },
        Err(Halt::Obstructed(certificate)) => DecisionOutcome::Obstructed { certificate: *certificate, trace: d.trace },
        Err(Halt::Error(e)) => return Err(e),
    };
    Ok(Decision { outcome, rounds })
}

/// [`decide`] followed by an independent check of the answer against the
/// input: the genus gate, or the certificate on the replayed stretching.
pub fn decide_verified(c: &TwoComplex, limits: &Limits) -> Result<Decision, PipelineError> {
    let d = decide(c, limits)?;
    verify_outcome(c, &d.outcome)?;
    Ok(d)
}

pub fn verify_outcome(c: &TwoComplex, outcome: &DecisionOutcome) -> Result<(), PipelineError> {
    match outcome {
        DecisionOutcome::Embeddable { rotation, .. } => {
            genus_gate(c, rotation).map_err(|_| PipelineError::VerificationFailed("rotation fails the genus gate"))
        }
        DecisionOutcome::Obstructed { certificate, trace } => {
            let end = trace.replay(c).map_err(|_| PipelineError::VerificationFailed("trace does not replay"))?;
            certificate.verify(&end).map_err(|_| PipelineError::VerificationFailed("certificate rejected"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn run(c: &TwoComplex) -> Decision {
        decide_verified(c, &Limits::default()).unwrap()
    }

    #[test]
    fn tetrahedron_needs_no_stretching() {
        let d = run(&generators::tetrahedron());
        assert!(d.outcome.is_embeddable());
        assert!(d.outcome.trace().is_empty());
    }

    #[test]
    fn cone_over_k5_stops_at_the_apex() {
        let d = run(&generators::cone_over_named("K5").unwrap());
        match d.outcome {
            DecisionOutcome::Obstructed { certificate: Certificate::NonPlanarLink { vertex, .. }, trace } => {
                assert_eq!(vertex, VertexId(0));
                assert!(trace.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn moebius_disc_is_a_torus_crossing() {
        match run(&generators::moebius_disc()).outcome {
            DecisionOutcome::Obstructed { certificate: Certificate::TorusCrossing(t), .. } => {
                let mut w = [t.windings.0, t.windings.1];
                w.sort_unstable();
                assert_eq!(w, [1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn positive_families_are_embeddable() {
        let mut cs = vec![generators::octahedron(), generators::delta2(), generators::annulus(4)];
        cs.extend((1..=6).map(generators::delta_plus));
        for c in cs {
            assert!(run(&c).outcome.is_embeddable());
        }
    }

    #[test]
    fn rejects_non_simplicial_input() {
        let mut c = TwoComplex::new();
        let v = c.add_vertex();
        let e = c.add_edge(v, v);
        c.add_face(&[(e, true)]);
        assert!(matches!(decide(&c, &Limits::default()), Err(PipelineError::InvalidInput(_))));
    }

    fn random_cone(rng: &mut rand_chacha::ChaCha8Rng) -> TwoComplex {
        use rand::Rng;
        let n = 5 + rng.gen_range(0..2u32);
        let m = 8 + rng.gen_range(0..3usize);
        let mut arcs = Vec::new();
        while arcs.len() < m {
            let (a, b) = (1 + rng.gen_range(0..n), 1 + rng.gen_range(0..n));
            if a < b && !arcs.contains(&(a, b)) {
                arcs.push((a, b));
            }
        }
        generators::cone_over(&arcs)
    }

    #[test]
    fn agrees_with_oracle_on_random_complexes() {
        use crate::generators::{random_complex, RandomParams};
        use crate::oracle::oracle_decide;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut yes, mut no, mut rounds) = (0, 0, 0);
        for i in 0..900 {
            let c = match i % 3 {
                0 => random_cone(&mut rng),
                1 => random_complex(&RandomParams { max_vertices: 7, max_faces: 10, max_degree: 4 }, &mut |k| rng.gen_range(0..k)),
                _ => random_complex(&RandomParams { max_vertices: 7, max_faces: 16, max_degree: 4 }, &mut |k| rng.gen_range(0..k)),
            };
            let Some(truth) = oracle_decide(&c, 2_000_000).0.exists() else { continue };
            let d = decide_verified(&c, &Limits::default()).unwrap();
            assert_eq!(d.outcome.is_embeddable(), truth);
            for r in &d.rounds {
                assert!(r.degree_parameter_after <= r.degree_parameter_before, "{r:?}");
                assert!(r.cutvertex_degree_after < r.cutvertex_degree_before, "{r:?}");
            }
            rounds += d.rounds.len();
            if truth {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(yes > 100 && no > 50 && rounds > 100, "{yes} {no} {rounds}");
    }

    #[test]
    fn torus_crossings_keep_their_windings() {
        for (p, q) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            match run(&generators::torus_cross(p, q)).outcome {
                DecisionOutcome::Obstructed { certificate: Certificate::TorusCrossing(t), .. } => assert_eq!(t.windings, (p as usize, q as usize)),
                other => panic!("{p} {q}: {other:?}"),
            }
        }
    }

    #[test]
    fn decisions_are_deterministic() {
        let c = generators::torus_cross(2, 3);
        assert_eq!(run(&c), run(&c));
        let c = generators::delta_plus(5);
        assert_eq!(run(&c), run(&c));
    }
}
