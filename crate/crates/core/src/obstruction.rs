//! Para-cycles, para-paths, mega faces and the final check on locally almost
//! 3-connected complexes.
//!
//! Edges of face-degree at least three are grouped into maximal chains that
//! pass through vertices with parallel links. A parallel link transports the
//! rotator of one branch edge onto the other; a rigid link (a subdivision of a
//! 3-connected graph) fixes every rotator at its vertex up to one mirror bit;
//! any other admissible link has cycle rank at most one and imposes nothing.
//! Existence of a planar rotation system then reduces to parity constraints
//! between mirror bits and a winding condition on each closed chain.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{DartPos, TwoComplex};
use crate::error::ObstructionError;
use crate::graph::Multigraph;
use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::link::{all_links, is_subdivision_of_3connected, link_at, parallel_between, LinkGraph};
use crate::planarity::{equal_cycle_interleaving, is_kuratowski_subgraph, permutation_cycles, planar_embed, KuratowskiKind};
use crate::rotation::{genus_gate, rotator_from_link, RotationSystem};

/// How a link constrains the rotators at its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkKind {
    /// Cycle rank at most one: every rotation is planar.
    Free,
    /// Parallel graph whose branch nodes stand for `a` and `b`.
    Parallel { a: EdgeId, b: EdgeId },
    /// Subdivision of a 3-connected planar graph; `rotators` holds the rotator
    /// of every edge at the vertex in one of the two embeddings.
    Rigid { rotators: BTreeMap<EdgeId, Vec<DartId>> },
}

/// Edges `e₁ … eₙ` of equal face-degree with `vertices[i−1]`, `vertices[i]`
/// the ends of `eᵢ`. Interior vertices have parallel links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaChain {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

/// A closed chain: `vertices[i]` joins `edges[i]` and `edges[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaCycle {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

/// Faces met by one orbit of darts on the first edge of a para-cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MegaFace {
    pub faces: Vec<FaceId>,
    /// The orbit, in transport order.
    pub darts: Vec<DartId>,
    pub winding: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCrossing {
    pub cycle: ParaCycle,
    pub mega_faces: [MegaFace; 2],
    pub windings: (usize, usize),
    /// Deleting these faces leaves exactly the two mega faces.
    pub deleted_faces: Vec<FaceId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The corners at `vertex` of a Kuratowski subgraph of its link.
    NonPlanarLink { vertex: VertexId, kind: KuratowskiKind, corners: Vec<DartPos> },
    /// A chain between rigid links whose transport matches neither embedding.
    NonLoopPlanarParaPath { path: ParaChain },
    TorusCrossing(TorusCrossing),
    /// Chains between rigid links whose mirror constraints sum to an odd
    /// parity around a closed walk.
    ParityCycle { chains: Vec<ParaChain> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusCheck {
    Crossing(TorusCrossing),
    AllEqual(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinalCheck {
    Planar(RotationSystem),
    Obstructed(Certificate),
}

/// Link kinds and chains of a complex whose links are all admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    pub kinds: BTreeMap<VertexId, LinkKind>,
    pub chains: Vec<ParaChain>,
    pub cycles: Vec<ParaCycle>,
}

// ----- link kinds -----------------------------------------------------------------------

/// First non-planar link, as a certificate.
pub fn non_planar_link(c: &TwoComplex) -> Option<Certificate> {
    for (v, link) in all_links(c) {
        if let Err(w) = planar_embed(&link.graph) {
            let corners = w.arcs.iter().map(|&a| link.arc_corner[a]).collect();
            return Some(Certificate::NonPlanarLink { vertex: v, kind: w.kind, corners });
        }
    }
    None
}

fn cycle_rank_at_most_one(g: &Multigraph) -> bool {
    g.is_connected() && g.arc_count() <= g.node_count()
}

/// Kind of a planar link; `None` when the link is not admissible.
pub fn link_kind(link: &LinkGraph) -> Option<LinkKind> {
    let g = &link.graph;
    if link.nodes.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    if cycle_rank_at_most_one(g) {
        return Some(LinkKind::Free);
    }
    let thick: Vec<usize> = (0..g.node_count()).filter(|&u| g.degree(u) > 2).collect();
    if thick.len() == 2 && parallel_between(g, thick[0], thick[1]).is_some() {
        return Some(LinkKind::Parallel { a: link.nodes[thick[0]].0, b: link.nodes[thick[1]].0 });
    }
    if is_subdivision_of_3connected(g) {
        let r = planar_embed(g).ok()?;
        let rotators = (0..g.node_count()).map(|u| (link.nodes[u].0, rotator_from_link(link, u, &r))).collect();
        return Some(LinkKind::Rigid { rotators });
    }
    None
}

// ----- transport ------------------------------------------------------------------------

/// Rotator transport across a parallel link: `σ_out = map(σ_in)`, reversed
/// when `flip`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Transport {
    map: BTreeMap<DartId, DartId>,
    flip: bool,
    faces: BTreeMap<DartId, Vec<FaceId>>,
}

impl Transport {
    fn apply(&self, sigma: &[DartId]) -> Option<Vec<DartId>> {
        let mut out: Vec<DartId> = sigma.iter().map(|d| self.map.get(d).copied()).collect::<Option<_>>()?;
        if self.flip {
            out.reverse();
        }
        Some(out)
    }

    fn inverse(&self) -> Transport {
        Transport { map: self.map.iter().map(|(&a, &b)| (b, a)).collect(), flip: self.flip, faces: BTreeMap::new() }
    }
}

fn transport(link: &LinkGraph, e_in: EdgeId, e_out: EdgeId) -> Option<Transport> {
    let g = &link.graph;
    let n_in = link.node_of_edge(e_in)?;
    let n_out = link.node_of_edge(e_out)?;
    let par = parallel_between(g, n_in, n_out)?;
    let mut map = BTreeMap::new();
    let mut faces = BTreeMap::new();
    for path in &par.paths {
        let first = path[0];
        let last = Multigraph::twin(*path.last()?);
        let d_in = link.half_dart[first];
        map.insert(d_in, link.half_dart[last]);
        faces.insert(d_in, path.iter().map(|&h| link.arc_corner[h >> 1].face).collect());
    }
    let flip = (link.nodes[n_in].1 + 1 + link.nodes[n_out].1) % 2 == 1;
    Some(Transport { map, flip, faces })
}

fn same_cyclic(a: &[DartId], b: &[DartId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(i) = b.iter().position(|&x| x == a[0]) else { return false };
    (0..a.len()).all(|k| a[k] == b[(i + k) % b.len()])
}

fn reversed(a: &[DartId]) -> Vec<DartId> {
    a.iter().rev().copied().collect()
}

fn face_degree(c: &TwoComplex, e: EdgeId) -> usize {
    c.faces().map(|(_, ds)| ds.iter().filter(|d| d.edge == e).count()).sum()
}

// ----- chains ---------------------------------------------------------------------------

type LinksAndKinds = (BTreeMap<VertexId, LinkGraph>, BTreeMap<VertexId, LinkKind>);

fn kinds_of(c: &TwoComplex) -> Result<LinksAndKinds, ObstructionError> {
    let links = all_links(c);
    let mut kinds = BTreeMap::new();
    for (&v, l) in &links {
        let k = link_kind(l).ok_or(ObstructionError::PreconditionViolated("link is not almost 3-connected"))?;
        kinds.insert(v, k);
    }
    Ok((links, kinds))
}

/// Chains and closed chains of edges of face-degree at least three.
pub fn h_graph(c: &TwoComplex) -> Result<HGraph, ObstructionError> {
    if c.edges().any(|(_, x)| x.is_loop()) {
        return Err(ObstructionError::PreconditionViolated("complex has a loop"));
    }
    let (_, kinds) = kinds_of(c)?;
    let degree = c.edge_degrees();
    let next = |e: EdgeId, at: VertexId| -> Option<EdgeId> {
        match &kinds[&at] {
            LinkKind::Parallel { a, b } if *a == e => Some(*b),
            LinkKind::Parallel { a, b } if *b == e => Some(*a),
            _ => None,
        }
    };
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    let mut chains = Vec::new();
    let mut cycles = Vec::new();
    for (e0, x0) in c.edges() {
        if degree[&e0] < 3 || seen.contains(&e0) {
            continue;
        }
        // walk forward from the head
        let mut edges = vec![e0];
        let mut vertices = vec![x0.tail, x0.head];
        let mut closed = false;
        seen.insert(e0);
        loop {
            let (e, at) = (*edges.last().unwrap(), *vertices.last().unwrap());
            let Some(f) = next(e, at) else { break };
            if f == e0 {
                closed = true;
                break;
            }
            if !seen.insert(f) {
                return Err(ObstructionError::PreconditionViolated("chains overlap"));
            }
            edges.push(f);
            vertices.push(c.edge(f).unwrap().other(at));
        }
        if closed {
            vertices.remove(0);
            cycles.push(ParaCycle { edges, vertices });
            continue;
        }
        // then backward from the tail
        loop {
            let (e, at) = (edges[0], vertices[0]);
            let Some(f) = next(e, at) else { break };
            if !seen.insert(f) {
                return Err(ObstructionError::PreconditionViolated("chains overlap"));
            }
            edges.insert(0, f);
            vertices.insert(0, c.edge(f).unwrap().other(at));
        }
        chains.push(ParaChain { edges, vertices });
    }
    Ok(HGraph { kinds, chains, cycles })
}

/// Closed chains through parallel links.
pub fn find_para_cycles(c: &TwoComplex) -> Result<Vec<ParaCycle>, ObstructionError> {
    Ok(h_graph(c)?.cycles)
}

/// Chains with a rigid link at both ends.
pub fn find_para_paths(c: &TwoComplex) -> Result<Vec<ParaChain>, ObstructionError> {
    let h = h_graph(c)?;
    let rigid = |v: &VertexId| matches!(h.kinds[v], LinkKind::Rigid { .. });
    Ok(h.chains.into_iter().filter(|p| rigid(&p.vertices[0]) && rigid(p.vertices.last().unwrap())).collect())
}

fn chain_transports(links: &BTreeMap<VertexId, LinkGraph>, p: &ParaChain) -> Option<Vec<Transport>> {
    (1..p.edges.len()).map(|i| transport(&links[&p.vertices[i]], p.edges[i - 1], p.edges[i])).collect()
}

fn rigid_rotator(kinds: &BTreeMap<VertexId, LinkKind>, v: VertexId, e: EdgeId) -> Option<&Vec<DartId>> {
    match kinds.get(&v)? {
        LinkKind::Rigid { rotators } => rotators.get(&e),
        _ => None,
    }
}

/// Parity between the mirror bits at the two rigid ends of a chain, or
/// `None` when no choice of bits fits.
fn chain_parity(links: &BTreeMap<VertexId, LinkGraph>, kinds: &BTreeMap<VertexId, LinkKind>, p: &ParaChain) -> Result<Option<bool>, ObstructionError> {
    let bad = ObstructionError::PreconditionViolated("chain does not run through parallel links");
    let ts = chain_transports(links, p).ok_or(bad.clone())?;
    let start = rigid_rotator(kinds, p.vertices[0], p.edges[0]).ok_or(bad.clone())?;
    let end = rigid_rotator(kinds, *p.vertices.last().unwrap(), *p.edges.last().unwrap()).ok_or(bad.clone())?;
    let mut sigma = start.clone();
    for t in &ts {
        sigma = t.apply(&sigma).ok_or(bad.clone())?;
    }
    Ok(if same_cyclic(&sigma, end) {
        Some(false)
    } else if same_cyclic(&sigma, &reversed(end)) {
        Some(true)
    } else {
        None
    })
}

// ----- mega faces -----------------------------------------------------------------------

fn cycle_transports(links: &BTreeMap<VertexId, LinkGraph>, o: &ParaCycle) -> Result<Vec<Transport>, ObstructionError> {
    let n = o.edges.len();
    if n == 0 || o.vertices.len() != n {
        return Err(ObstructionError::NotParaCycle);
    }
    (0..n)
        .map(|i| {
            let link = links.get(&o.vertices[i]).ok_or(ObstructionError::NotParaCycle)?;
            transport(link, o.edges[i], o.edges[(i + 1) % n]).ok_or(ObstructionError::NotParaCycle)
        })
        .collect()
}

/// Partition of the faces around `o` into mega faces, one per orbit of the
/// darts on the first edge under transport once around `o`.
pub fn mega_faces_at(c: &TwoComplex, o: &ParaCycle) -> Result<Vec<MegaFace>, ObstructionError> {
    let links = all_links(c);
    let ts = cycle_transports(&links, o)?;
    if ts.iter().filter(|t| t.flip).count() % 2 == 1 {
        return Err(ObstructionError::PreconditionViolated("transport around the cycle reverses rotators"));
    }
    let mut around: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in ts[0].map.keys() {
        let mut x = d;
        for t in &ts {
            x = t.map[&x];
        }
        around.insert(d.0 as usize, x.0 as usize);
    }
    let mut out = Vec::new();
    for orbit in permutation_cycles(&around) {
        let darts: Vec<DartId> = orbit.iter().map(|&d| DartId(d as u32)).collect();
        let mut faces = Vec::new();
        for &d in &darts {
            let mut x = d;
            for t in &ts {
                for &f in &t.faces[&x] {
                    if faces.last() != Some(&f) {
                        faces.push(f);
                    }
                }
                x = t.map[&x];
            }
        }
        if faces.len() > 1 && faces.first() == faces.last() {
            faces.pop();
        }
        out.push(MegaFace { faces, winding: darts.len(), darts });
    }
    Ok(out)
}

/// Torus crossing obstruction at `o` if two mega faces wind differently.
pub fn torus_crossing_check(c: &TwoComplex, o: &ParaCycle) -> Result<TorusCheck, ObstructionError> {
    let megas = mega_faces_at(c, o)?;
    let w0 = megas.first().ok_or(ObstructionError::NotParaCycle)?.winding;
    let Some(j) = megas.iter().position(|m| m.winding != w0) else {
        return Ok(TorusCheck::AllEqual(w0));
    };
    let pair = [megas[0].clone(), megas[j].clone()];
    let kept: BTreeSet<FaceId> = pair.iter().flat_map(|m| m.faces.iter().copied()).collect();
    let deleted_faces = c.faces().map(|(f, _)| f).filter(|f| !kept.contains(f)).collect();
    let windings = (pair[0].winding, pair[1].winding);
    Ok(TorusCheck::Crossing(TorusCrossing { cycle: o.clone(), mega_faces: pair, windings, deleted_faces }))
}

// ----- the check ------------------------------------------------------------------------

struct Parity {
    parent: Vec<usize>,
    to_parent: Vec<bool>,
}

impl Parity {
    fn new(n: usize) -> Self {
        Parity { parent: (0..n).collect(), to_parent: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut p = false;
        let mut r = x;
        while self.parent[r] != r {
            p ^= self.to_parent[r];
            r = self.parent[r];
        }
        (r, p)
    }

    /// Records `bit(x) ⊕ bit(y) = p`; false on contradiction.
    fn join(&mut self, x: usize, y: usize, p: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == p;
        }
        self.parent[rx] = ry;
        self.to_parent[rx] = px ^ py ^ p;
        true
    }
}

/// Decides a complex whose links are planar and almost 3-connected: either a
/// planar rotation system or a certificate.
pub fn final_check(c: &TwoComplex) -> Result<FinalCheck, ObstructionError> {
    if let Some(cert) = non_planar_link(c) {
        return Ok(FinalCheck::Obstructed(cert));
    }
    let h = h_graph(c)?;
    let links = all_links(c);
    for o in &h.cycles {
        if let TorusCheck::Crossing(t) = torus_crossing_check(c, o)? {
            return Ok(FinalCheck::Obstructed(Certificate::TorusCrossing(t)));
        }
    }
    let rigid: Vec<VertexId> = h.kinds.iter().filter(|(_, k)| matches!(k, LinkKind::Rigid { .. })).map(|(&v, _)| v).collect();
    let index: BTreeMap<VertexId, usize> = rigid.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parity = Parity::new(rigid.len());
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); rigid.len()];
    let is_rigid = |v: &VertexId| index.contains_key(v);
    for (k, p) in h.chains.iter().enumerate() {
        let (s, t) = (p.vertices[0], *p.vertices.last().unwrap());
        if !is_rigid(&s) || !is_rigid(&t) {
            continue;
        }
        let Some(par) = chain_parity(&links, &h.kinds, p)? else {
            return Ok(FinalCheck::Obstructed(Certificate::NonLoopPlanarParaPath { path: p.clone() }));
        };
        let (x, y) = (index[&s], index[&t]);
        if !parity.join(x, y, par) {
            let mut chains = forest_path(&forest, x, y).into_iter().map(|i| h.chains[i].clone()).collect::<Vec<_>>();
            chains.push(p.clone());
            return Ok(FinalCheck::Obstructed(Certificate::ParityCycle { chains }));
        }
        if x != y {
            forest[x].push((y, k));
            forest[y].push((x, k));
        }
    }
    let mut rs = RotationSystem::default_for(c);
    let mirror = |v: VertexId, parity: &mut Parity| parity.find(index[&v]).1;
    for p in &h.chains {
        let ts = chain_transports(&links, p).ok_or(ObstructionError::PreconditionViolated("broken chain"))?;
        let (s, t) = (p.vertices[0], *p.vertices.last().unwrap());
        let mut sigmas: Vec<Vec<DartId>> = vec![Vec::new(); p.edges.len()];
        if is_rigid(&s) || !is_rigid(&t) {
            let mut sigma = match rigid_rotator(&h.kinds, s, p.edges[0]) {
                Some(r) if mirror(s, &mut parity) => reversed(r),
                Some(r) => r.clone(),
                None => rs.rotators[&p.edges[0]].clone(),
            };
            sigmas[0] = sigma.clone();
            for (i, tr) in ts.iter().enumerate() {
                sigma = tr.apply(&sigma).ok_or(ObstructionError::PreconditionViolated("broken chain"))?;
                sigmas[i + 1] = sigma.clone();
            }
        } else {
            let last = p.edges.len() - 1;
            let r = rigid_rotator(&h.kinds, t, p.edges[last]).unwrap();
            let mut sigma = if mirror(t, &mut parity) { reversed(r) } else { r.clone() };
            sigmas[last] = sigma.clone();
            for i in (0..ts.len()).rev() {
                sigma = ts[i].inverse().apply(&sigma).ok_or(ObstructionError::PreconditionViolated("broken chain"))?;
                sigmas[i] = sigma.clone();
            }
        }
        for (e, s) in p.edges.iter().zip(sigmas) {
            rs.rotators.insert(*e, s);
        }
    }
    for o in &h.cycles {
        let ts = cycle_transports(&links, o)?;
        let megas = mega_faces_at(c, o)?;
        let mut around = BTreeMap::new();
        for m in &megas {
            let n = m.darts.len();
            for i in 0..n {
                around.insert(m.darts[i].0 as usize, m.darts[(i + 1) % n].0 as usize);
            }
        }
        let order = equal_cycle_interleaving(&around).ok_or(ObstructionError::PreconditionViolated("unequal windings"))?;
        let mut sigma: Vec<DartId> = order.into_iter().map(|d| DartId(d as u32)).collect();
        for (i, e) in o.edges.iter().enumerate() {
            rs.rotators.insert(*e, sigma.clone());
            if i + 1 < o.edges.len() {
                sigma = ts[i].apply(&sigma).ok_or(ObstructionError::NotParaCycle)?;
            }
        }
    }
    genus_gate(c, &rs).map_err(|_| ObstructionError::PreconditionViolated("assembled rotation system is not planar"))?;
    Ok(FinalCheck::Planar(rs))
}

fn forest_path(forest: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut back: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut stack = vec![from];
    let mut seen: BTreeSet<usize> = [from].into_iter().collect();
    while let Some(u) = stack.pop() {
        if u == to {
            break;
        }
        for &(w, k) in &forest[u] {
            if seen.insert(w) {
                back.insert(w, (u, k));
                stack.push(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = to;
    while cur != from {
        let Some(&(u, k)) = back.get(&cur) else { break };
        out.push(k);
        cur = u;
    }
    out
}

// ----- verification ---------------------------------------------------------------------

fn reject(why: &'static str) -> ObstructionError {
    ObstructionError::CertificateRejected(why)
}

impl Certificate {
    /// Re-checks the certificate against `c` from its definition.
    pub fn verify(&self, c: &TwoComplex) -> Result<(), ObstructionError> {
        match self {
            Certificate::NonPlanarLink { vertex, corners, .. } => {
                if !c.has_vertex(*vertex) {
                    return Err(reject("unknown vertex"));
                }
                let link = link_at(c, *vertex);
                let arcs: Option<Vec<usize>> =
                    corners.iter().map(|p| link.arc_corner.iter().position(|q| q == p)).collect();
                let arcs = arcs.ok_or(reject("corner not at the vertex"))?;
                if !is_kuratowski_subgraph(&link.graph, &arcs) {
                    return Err(reject("corners do not form a Kuratowski subgraph"));
                }
                Ok(())
            }
            Certificate::NonLoopPlanarParaPath { path } => {
                let (links, kinds) = chain_context(c, &path.vertices)?;
                check_chain_shape(c, path)?;
                match chain_parity(&links, &kinds, path).map_err(|_| reject("not a para-path"))? {
                    None => Ok(()),
                    Some(_) => Err(reject("para-path transport fits an embedding")),
                }
            }
            Certificate::ParityCycle { chains } => {
                let mut ends: BTreeMap<VertexId, usize> = BTreeMap::new();
                let mut odd = false;
                for p in chains {
                    let (links, kinds) = chain_context(c, &p.vertices)?;
                    check_chain_shape(c, p)?;
                    let par = chain_parity(&links, &kinds, p).map_err(|_| reject("not a para-path"))?;
                    odd ^= par.ok_or(reject("chain admits no parity"))?;
                    *ends.entry(p.vertices[0]).or_default() += 1;
                    *ends.entry(*p.vertices.last().unwrap()).or_default() += 1;
                }
                if chains.is_empty() || ends.values().any(|&k| k % 2 == 1) {
                    return Err(reject("chains do not close up"));
                }
                if !odd {
                    return Err(reject("parity around the chains is even"));
                }
                Ok(())
            }
            Certificate::TorusCrossing(t) => t.verify(c),
        }
    }
}

fn chain_context(c: &TwoComplex, vs: &[VertexId]) -> Result<LinksAndKinds, ObstructionError> {
    let mut links = BTreeMap::new();
    let mut kinds = BTreeMap::new();
    for &v in vs {
        if !c.has_vertex(v) {
            return Err(reject("unknown vertex"));
        }
        let l = link_at(c, v);
        if let Some(k) = link_kind(&l) {
            kinds.insert(v, k);
        }
        links.insert(v, l);
    }
    Ok((links, kinds))
}

fn check_chain_shape(c: &TwoComplex, p: &ParaChain) -> Result<(), ObstructionError> {
    if p.edges.is_empty() || p.vertices.len() != p.edges.len() + 1 {
        return Err(reject("malformed chain"));
    }
    for (i, &e) in p.edges.iter().enumerate() {
        let x = c.edge(e).ok_or(reject("unknown edge"))?;
        let (a, b) = (p.vertices[i], p.vertices[i + 1]);
        if !((x.tail == a && x.head == b) || (x.tail == b && x.head == a)) {
            return Err(reject("chain edge does not join its vertices"));
        }
        if face_degree(c, e) < 3 {
            return Err(reject("chain edge of face-degree below three"));
        }
    }
    Ok(())
}

impl TorusCrossing {
    pub fn verify(&self, c: &TwoComplex) -> Result<(), ObstructionError> {
        if self.windings.0 == self.windings.1 {
            return Err(reject("equal windings"));
        }
        let mut sub = c.clone();
        for f in &self.deleted_faces {
            sub.remove_face(*f).ok_or(reject("deleted face is not a face"))?;
        }
        sub.repair();
        let megas = mega_faces_at(&sub, &self.cycle).map_err(|_| reject("not a para-cycle after deletion"))?;
        let mut windings: Vec<usize> = megas.iter().map(|m| m.winding).collect();
        windings.sort_unstable();
        let mut want = vec![self.windings.0, self.windings.1];
        want.sort_unstable();
        if windings != want {
            return Err(reject("windings differ from the recorded ones"));
        }
        let kept: BTreeSet<FaceId> = sub.faces().map(|(f, _)| f).collect();
        let covered: BTreeSet<FaceId> = megas.iter().flat_map(|m| m.faces.iter().copied()).collect();
        if kept != covered {
            return Err(reject("faces left over besides the two mega faces"));
        }
        Ok(())
    }
}
