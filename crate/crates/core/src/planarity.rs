//! Graph rotations, face tracing and planar embeddings.
//!
//! A rotation lists, for every node, its half-edges in cyclic order. Faces are
//! the orbits of `h ↦ next(twin(h))` where `next` is the successor in the
//! rotation at the node of `twin(h)`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::PlanarityError;
use crate::graph::Multigraph;
use crate::link::{is_subdivision_of_3connected, parallel_between, LinkGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphRotation {
    pub rot: Vec<Vec<usize>>,
}

impl GraphRotation {
    /// Each node's rotation is a permutation of its half-edges.
    pub fn is_valid_for(&self, g: &Multigraph) -> bool {
        if self.rot.len() != g.node_count() {
            return false;
        }
        (0..g.node_count()).all(|u| {
            let mut a = self.rot[u].clone();
            let mut b = g.halves(u).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }

    /// Every rotator reversed.
    pub fn mirror(&self) -> GraphRotation {
        GraphRotation {
            rot: self
                .rot
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.reverse();
                    r
                })
                .collect(),
        }
    }

    /// Rotations rotated so that each starts at its smallest half-edge.
    pub fn canonical(&self) -> GraphRotation {
        GraphRotation { rot: self.rot.iter().map(|r| canonical_cycle(r)).collect() }
    }

    fn successor_table(&self, halves: usize) -> Vec<usize> {
        let mut next = vec![usize::MAX; halves];
        for r in &self.rot {
            for (i, &h) in r.iter().enumerate() {
                next[h] = r[(i + 1) % r.len()];
            }
        }
        next
    }

    /// Face boundaries as half-edge cycles, ordered by smallest half.
    pub fn faces(&self, g: &Multigraph) -> Vec<Vec<usize>> {
        let halves = 2 * g.arc_count();
        let next = self.successor_table(halves);
        let mut seen = vec![false; halves];
        let mut out = Vec::new();
        for s in 0..halves {
            if seen[s] {
                continue;
            }
            let mut f = Vec::new();
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                f.push(h);
                h = next[Multigraph::twin(h)];
            }
            out.push(f);
        }
        out
    }
}

/// Cyclic sequence rotated to start at its minimum.
pub fn canonical_cycle<T: Ord + Clone>(r: &[T]) -> Vec<T> {
    if r.is_empty() {
        return Vec::new();
    }
    let i = (0..r.len()).min_by(|&a, &b| r[a].cmp(&r[b])).unwrap();
    r[i..].iter().chain(r[..i].iter()).cloned().collect()
}

/// Do two sequences agree as cyclic orders?
pub fn same_cycle<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && canonical_cycle(a) == canonical_cycle(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceCount {
    pub faces: usize,
    pub genus: usize,
    pub planar: bool,
}

/// Counts faces and sums Euler genus over components.
/// Planar iff `V − E + F = 2` in every component (an isolated node has one face).
pub fn genus_of_rotation(g: &Multigraph, r: &GraphRotation) -> FaceCount {
    let faces = r.faces(g);
    let comps = g.components();
    let mut comp_of = vec![0; g.node_count()];
    for (i, c) in comps.iter().enumerate() {
        for &u in c {
            comp_of[u] = i;
        }
    }
    let mut v = vec![0i64; comps.len()];
    let mut e = vec![0i64; comps.len()];
    let mut f = vec![0i64; comps.len()];
    for (i, c) in comps.iter().enumerate() {
        v[i] = c.len() as i64;
    }
    for &(a, _) in g.arcs() {
        e[comp_of[a]] += 1;
    }
    for face in &faces {
        f[comp_of[g.half_node(face[0])]] += 1;
    }
    let mut genus = 0i64;
    let mut total_faces = faces.len();
    for i in 0..comps.len() {
        if e[i] == 0 {
            f[i] = 1;
            total_faces += 1;
        }
        genus += (2 - v[i] + e[i] - f[i]) / 2;
    }
    FaceCount { faces: total_faces, genus: genus.max(0) as usize, planar: genus == 0 }
}

pub fn is_planar_rotation(g: &Multigraph, r: &GraphRotation) -> bool {
    r.is_valid_for(g) && genus_of_rotation(g, r).planar
}

// ----- embedding ------------------------------------------------------------------------

/// Arcs of a minimal non-planar subgraph: a subdivision of K5 or K3,3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPlanarWitness {
    pub arcs: Vec<usize>,
    pub kind: KuratowskiKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A planar rotation, or a Kuratowski subgraph when none exists.
pub fn planar_embed(g: &Multigraph) -> Result<GraphRotation, NonPlanarWitness> {
    match embed(g) {
        Some(r) => {
            debug_assert!(is_planar_rotation(g, &r));
            Ok(r)
        }
        None => Err(kuratowski_witness(g)),
    }
}

pub fn is_planar(g: &Multigraph) -> bool {
    embed(g).is_some()
}

fn embed(g: &Multigraph) -> Option<GraphRotation> {
    // keep one representative of every parallel class; loops are put back later
    let mut rep: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut extra: Vec<usize> = Vec::new();
    let mut simple_arcs = Vec::new();
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        if u == v {
            extra.push(a);
            continue;
        }
        match rep.get(&(u.min(v), u.max(v))) {
            Some(_) => extra.push(a),
            None => {
                rep.insert((u.min(v), u.max(v)), a);
                simple_arcs.push(a);
            }
        }
    }
    let simple = subgraph_keep_nodes(g, &simple_arcs);
    // simple arc i is original arc simple_arcs[i]
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for block in simple.blocks() {
        let (sub, back) = simple.arc_subgraph(&block);
        let r = embed_biconnected(&sub)?;
        for (local, order) in r.into_iter().enumerate() {
            let u = back[local];
            rot[u].extend(order.into_iter().map(|h| {
                let orig = simple_arcs[block[h >> 1]];
                2 * orig + (h & 1)
            }));
        }
    }
    for a in extra {
        let (u, v) = g.arc(a);
        if u == v {
            rot[u].push(2 * a);
            rot[u].push(2 * a + 1);
            continue;
        }
        let b = rep[&(u.min(v), u.max(v))];
        let (hu, hv) = if g.arc(b).0 == u { (2 * b, 2 * b + 1) } else { (2 * b + 1, 2 * b) };
        let pu = rot[u].iter().position(|&h| h == hu).unwrap();
        rot[u].insert(pu + 1, 2 * a);
        let pv = rot[v].iter().position(|&h| h == hv).unwrap();
        rot[v].insert(pv, 2 * a + 1);
    }
    Some(GraphRotation { rot })
}

/// Subgraph on all nodes with the given arcs (arc `i` of the result is `arcs[i]`).
fn subgraph_keep_nodes(g: &Multigraph, arcs: &[usize]) -> Multigraph {
    let mut s = Multigraph::new(g.node_count());
    for &a in arcs {
        let (u, v) = g.arc(a);
        s.add_arc(u, v);
    }
    s
}

/// Planar rotation of a simple 2-connected graph (or a single arc) by repeated
/// path insertion into faces; `None` when the graph is not planar.
fn embed_biconnected(g: &Multigraph) -> Option<Vec<Vec<usize>>> {
    let n = g.node_count();
    let m = g.arc_count();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    if m == 1 {
        rot[g.arc(0).0].push(0);
        rot[g.arc(0).1].push(1);
        return Some(rot);
    }
    let mut in_arc = vec![false; m];
    let mut in_node = vec![false; n];
    // initial cycle through arc 0
    let (s, t) = g.arc(0);
    let path = bfs_path(g, t, |u| u == s, |h| h >> 1 != 0, |_| true)?;
    let mut cycle = vec![0usize];
    cycle.extend(path);
    let k = cycle.len();
    for i in 0..k {
        let h = cycle[i];
        let prev = cycle[(i + k - 1) % k];
        let u = g.half_node(h);
        rot[u] = vec![h, Multigraph::twin(prev)];
        in_node[u] = true;
        in_arc[h >> 1] = true;
    }
    let mut embedded = k;
    while embedded < m {
        let faces = trace_faces(g, &rot, &in_arc);
        // node -> half leaving it along the face, per face
        let face_out: Vec<BTreeMap<usize, usize>> = faces
            .iter()
            .map(|f| f.iter().map(|&h| (g.half_node(h), h)).collect())
            .collect();
        let fragments = fragments(g, &in_arc, &in_node);
        let mut choice: Option<(usize, usize)> = None;
        for (i, fr) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| fr.attachments.iter().all(|u| face_out[f].contains_key(u)))
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("some fragment remains");
        let halves = fragment_path(g, &fragments[fi], &in_arc, &in_node);
        let x = g.half_node(halves[0]);
        let y = g.half_target(*halves.last().unwrap());
        let hx = face_out[face][&x];
        let hy = face_out[face][&y];
        let px = rot[x].iter().position(|&h| h == hx).unwrap();
        rot[x].insert(px, halves[0]);
        let py = rot[y].iter().position(|&h| h == hy).unwrap();
        rot[y].insert(py, Multigraph::twin(*halves.last().unwrap()));
        for w in halves.windows(2) {
            let mid = g.half_target(w[0]);
            rot[mid] = vec![Multigraph::twin(w[0]), w[1]];
            in_node[mid] = true;
        }
        for &h in &halves {
            in_arc[h >> 1] = true;
        }
        embedded += halves.len();
    }
    Some(rot)
}

fn trace_faces(g: &Multigraph, rot: &[Vec<usize>], in_arc: &[bool]) -> Vec<Vec<usize>> {
    let halves = 2 * g.arc_count();
    let mut next = vec![usize::MAX; halves];
    for r in rot {
        for (i, &h) in r.iter().enumerate() {
            next[h] = r[(i + 1) % r.len()];
        }
    }
    let mut seen = vec![false; halves];
    let mut out = Vec::new();
    for s in 0..halves {
        if !in_arc[s >> 1] || seen[s] {
            continue;
        }
        let mut f = Vec::new();
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            f.push(h);
            h = next[Multigraph::twin(h)];
        }
        out.push(f);
    }
    out
}

struct Fragment {
    /// Embedded nodes the fragment attaches to.
    attachments: BTreeSet<usize>,
    /// A chord arc, or the nodes of a component outside the embedding.
    chord: Option<usize>,
    nodes: Vec<usize>,
}

fn fragments(g: &Multigraph, in_arc: &[bool], in_node: &[bool]) -> Vec<Fragment> {
    let mut out = Vec::new();
    for a in 0..g.arc_count() {
        let (u, v) = g.arc(a);
        if !in_arc[a] && in_node[u] && in_node[v] {
            out.push(Fragment { attachments: [u, v].into_iter().collect(), chord: Some(a), nodes: Vec::new() });
        }
    }
    let mut seen = in_node.to_vec();
    for s in 0..g.node_count() {
        if seen[s] {
            continue;
        }
        let mut nodes = vec![s];
        let mut attachments = BTreeSet::new();
        seen[s] = true;
        let mut i = 0;
        while i < nodes.len() {
            let u = nodes[i];
            i += 1;
            for w in g.neighbors(u) {
                if in_node[w] {
                    attachments.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    nodes.push(w);
                }
            }
        }
        nodes.sort_unstable();
        out.push(Fragment { attachments, chord: None, nodes });
    }
    out
}

/// Half-edges of a path through the fragment joining two distinct attachments.
fn fragment_path(g: &Multigraph, fr: &Fragment, in_arc: &[bool], in_node: &[bool]) -> Vec<usize> {
    if let Some(a) = fr.chord {
        return vec![2 * a];
    }
    let inside = |u: usize| fr.nodes.binary_search(&u).is_ok();
    let x = *fr.attachments.iter().next().unwrap();
    let h0 = g.halves(x).iter().copied().find(|&h| !in_arc[h >> 1] && inside(g.half_target(h))).unwrap();
    let start = g.half_target(h0);
    let rest = bfs_path(
        g,
        start,
        |u| in_node[u] && u != x,
        |h| !in_arc[h >> 1] && h >> 1 != h0 >> 1,
        |u| inside(u) || (in_node[u] && u != x),
    )
    .expect("fragment attaches at two nodes");
    let mut p = vec![h0];
    p.extend(rest);
    p
}

/// Shortest path by BFS from `s` to a node satisfying `goal`, using halves
/// passing `use_half` and entering nodes passing `enter`. Only goal nodes may be
/// entered without being expanded further.
fn bfs_path(
    g: &Multigraph,
    s: usize,
    goal: impl Fn(usize) -> bool,
    use_half: impl Fn(usize) -> bool,
    enter: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut via: Vec<Option<usize>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut q = VecDeque::new();
    q.push_back(s);
    while let Some(u) = q.pop_front() {
        for &h in g.halves(u) {
            if !use_half(h) {
                continue;
            }
            let w = g.half_target(h);
            if seen[w] || !enter(w) {
                continue;
            }
            seen[w] = true;
            via[w] = Some(h);
            if goal(w) {
                let mut path = Vec::new();
                let mut cur = w;
                while cur != s {
                    let h = via[cur].unwrap();
                    path.push(h);
                    cur = g.half_node(h);
                }
                path.reverse();
                return Some(path);
            }
            q.push_back(w);
        }
    }
    None
}

/// Greedy arc deletion down to a minimal non-planar subgraph.
fn kuratowski_witness(g: &Multigraph) -> NonPlanarWitness {
    let mut keep: Vec<usize> = (0..g.arc_count()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<usize> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
        let sub = subgraph_keep_nodes(g, &trial);
        if embed(&sub).is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    let sub = subgraph_keep_nodes(g, &keep);
    let branch = (0..sub.node_count()).filter(|&u| sub.degree(u) > 2).count();
    let kind = if branch == 5 { KuratowskiKind::K5 } else { KuratowskiKind::K33 };
    NonPlanarWitness { arcs: keep, kind }
}

/// Checks that the arcs form a subdivision of K5 or K3,3.
pub fn is_kuratowski_subgraph(g: &Multigraph, arcs: &[usize]) -> bool {
    let (sub, _) = g.arc_subgraph(arcs);
    if !sub.is_connected() || (0..sub.node_count()).any(|u| sub.degree(u) < 2) {
        return false;
    }
    let (s, _) = sub.suppress_degree_two();
    if !s.is_simple() {
        return false;
    }
    let n = s.node_count();
    let degs: Vec<usize> = (0..n).map(|u| s.degree(u)).collect();
    if n == 5 && s.arc_count() == 10 && degs.iter().all(|&d| d == 4) {
        return true;
    }
    if n == 6 && s.arc_count() == 9 && degs.iter().all(|&d| d == 3) {
        // bipartite with sides of three
        let mut side = [usize::MAX; 6];
        side[0] = 0;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for w in s.neighbors(u) {
                if side[w] == usize::MAX {
                    side[w] = 1 - side[u];
                    stack.push(w);
                } else if side[w] == side[u] {
                    return false;
                }
            }
        }
        return side.iter().filter(|&&x| x == 0).count() == 3;
    }
    false
}

/// The two mirror-image planar rotations of a subdivision of a 3-connected graph.
pub fn unique_embedding_3connected(g: &Multigraph) -> Result<(GraphRotation, GraphRotation), PlanarityError> {
    if !is_subdivision_of_3connected(g) {
        return Err(PlanarityError::NotApplicable);
    }
    let r = planar_embed(g).map_err(|_| PlanarityError::NonPlanar)?;
    let m = r.mirror();
    Ok((r, m))
}

// ----- vertex sums and loop-planarity ---------------------------------------------------

/// Result of gluing two link graphs along an edge.
#[derive(Clone, Debug)]
pub struct VertexSum {
    pub graph: Multigraph,
    /// Node → (0 for the first link, 1 for the second; node there).
    pub origin: Vec<(u8, usize)>,
}

/// Deletes the node of `along` in both links and joins the dangling arc-ends
/// that carry the same dart.
pub fn vertex_sum(a: &LinkGraph, b: &LinkGraph, along: crate::ids::EdgeId) -> Result<VertexSum, PlanarityError> {
    let na = a.node_of_edge(along).ok_or(PlanarityError::MissingNode(along))?;
    let nb = b.node_of_edge(along).ok_or(PlanarityError::MissingNode(along))?;
    let mut graph = Multigraph::new(0);
    let mut origin = Vec::new();
    let mut idx_a = vec![usize::MAX; a.graph.node_count()];
    let mut idx_b = vec![usize::MAX; b.graph.node_count()];
    for u in 0..a.graph.node_count() {
        if u != na {
            idx_a[u] = graph.add_node();
            origin.push((0, u));
        }
    }
    for u in 0..b.graph.node_count() {
        if u != nb {
            idx_b[u] = graph.add_node();
            origin.push((1, u));
        }
    }
    for &(u, v) in a.graph.arcs() {
        if u != na && v != na {
            graph.add_arc(idx_a[u], idx_a[v]);
        }
    }
    for &(u, v) in b.graph.arcs() {
        if u != nb && v != nb {
            graph.add_arc(idx_b[u], idx_b[v]);
        }
    }
    let b_half: BTreeMap<crate::ids::DartId, usize> =
        b.graph.halves(nb).iter().map(|&h| (b.half_dart[h], h)).collect();
    for &h in a.graph.halves(na) {
        let d = a.half_dart[h];
        let hb = *b_half.get(&d).ok_or(PlanarityError::MissingNode(along))?;
        let ua = a.graph.half_target(h);
        let ub = b.graph.half_target(hb);
        if ua == na || ub == nb {
            // arc running between the two glued nodes themselves
            return Err(PlanarityError::NotApplicable);
        }
        graph.add_arc(idx_a[ua], idx_b[ub]);
    }
    Ok(VertexSum { graph, origin })
}

/// Two nodes of one graph whose rotations must be mutually reverse under a
/// bijection of their half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopPairing {
    pub first: usize,
    pub second: usize,
    /// Half at `first` → half at `second`.
    pub matching: BTreeMap<usize, usize>,
}

impl LoopPairing {
    pub fn holds(&self, r: &GraphRotation) -> bool {
        let mapped: Vec<usize> = r.rot[self.first].iter().rev().map(|h| self.matching[h]).collect();
        same_cycle(&mapped, &r.rot[self.second])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopPlanarity {
    Planar(GraphRotation),
    Refuted,
}

/// A planar rotation honouring all pairings, decided exactly for subdivisions of
/// 3-connected graphs with at most one pairing, parallel graphs whose branch
/// nodes form the single pairing, and any graph with at most nine arcs.
pub fn loop_planar(g: &Multigraph, pairings: &[LoopPairing]) -> Result<LoopPlanarity, PlanarityError> {
    if pairings.is_empty() {
        return Ok(match planar_embed(g) {
            Ok(r) => LoopPlanarity::Planar(r),
            Err(_) => LoopPlanarity::Refuted,
        });
    }
    if pairings.len() == 1 && is_subdivision_of_3connected(g) {
        let Ok((r, m)) = unique_embedding_3connected(g) else {
            return Ok(LoopPlanarity::Refuted);
        };
        for cand in [r, m] {
            if pairings[0].holds(&cand) {
                return Ok(LoopPlanarity::Planar(cand));
            }
        }
        return Ok(LoopPlanarity::Refuted);
    }
    if pairings.len() == 1 {
        let p = &pairings[0];
        if let Some(ps) = parallel_between(g, p.first, p.second) {
            let along = ps.bijection();
            // rotations at the two branch nodes are reverse under both maps
            // exactly when σ⁻¹∘π shifts the cyclic order at `first`
            let inv: BTreeMap<usize, usize> = p.matching.iter().map(|(&x, &y)| (y, x)).collect();
            let psi: BTreeMap<usize, usize> = along.iter().map(|(&x, y)| (x, inv[y])).collect();
            return Ok(match equal_cycle_interleaving(&psi) {
                Some(order) => {
                    let mut rot: Vec<Vec<usize>> = (0..g.node_count()).map(|u| g.halves(u).to_vec()).collect();
                    rot[p.second] = order.iter().rev().map(|h| along[h]).collect();
                    rot[p.first] = order;
                    let r = GraphRotation { rot };
                    debug_assert!(is_planar_rotation(g, &r) && p.holds(&r));
                    LoopPlanarity::Planar(r)
                }
                None => LoopPlanarity::Refuted,
            });
        }
    }
    if g.arc_count() <= 9 {
        return Ok(match brute_force_rotations(g, usize::MAX, |r| pairings.iter().all(|p| p.holds(r))).first {
            Some(r) => LoopPlanarity::Planar(r),
            None => LoopPlanarity::Refuted,
        });
    }
    Err(PlanarityError::OutOfImplementedRange)
}

/// Cycles of a permutation, each starting at its smallest element, ordered by start.
pub fn permutation_cycles(p: &BTreeMap<usize, usize>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in p.keys() {
        if seen.contains(&s) {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while seen.insert(x) {
            c.push(x);
            x = p[&x];
        }
        out.push(c);
    }
    out
}

/// If all cycles of `p` have the same length `W`, the cyclic order
/// `c₁[0], c₂[0], …, c_K[0], c₁[1], …` on which `p` acts as a shift by `K`.
pub fn equal_cycle_interleaving(p: &BTreeMap<usize, usize>) -> Option<Vec<usize>> {
    let cycles = permutation_cycles(p);
    let w = cycles.first()?.len();
    if cycles.iter().any(|c| c.len() != w) {
        return None;
    }
    let mut order = Vec::with_capacity(p.len());
    for i in 0..w {
        for c in &cycles {
            order.push(c[i]);
        }
    }
    Some(order)
}

/// Enumeration summary over all rotations of a graph.
pub struct RotationCount {
    pub total: usize,
    pub planar: usize,
    pub first: Option<GraphRotation>,
}

/// Enumerates all rotations (up to `cap`), counting the planar ones that also
/// satisfy `accept`.
pub fn brute_force_rotations(
    g: &Multigraph,
    cap: usize,
    accept: impl Fn(&GraphRotation) -> bool,
) -> RotationCount {
    let n = g.node_count();
    let choices: Vec<Vec<Vec<usize>>> = (0..n).map(|u| cyclic_orders(g.halves(u))).collect();
    let mut idx = vec![0usize; n];
    let mut out = RotationCount { total: 0, planar: 0, first: None };
    loop {
        if out.total >= cap {
            break;
        }
        out.total += 1;
        let r = GraphRotation { rot: (0..n).map(|u| choices[u][idx[u]].clone()).collect() };
        if genus_of_rotation(g, &r).planar && accept(&r) {
            out.planar += 1;
            if out.first.is_none() {
                out.first = Some(r);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    out
}

/// All cyclic orders of `items`, each starting with the smallest item.
pub fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        let mut v = items.to_vec();
        v.sort_unstable();
        return vec![v];
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let first = sorted[0];
    let mut out = Vec::new();
    permute(&mut sorted[1..].to_vec(), 0, &mut |p| {
        let mut v = vec![first];
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permute(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn cycle_rotation_has_two_faces() {
        let g = cycle(5);
        let r = GraphRotation { rot: (0..5).map(|u| g.halves(u).to_vec()).collect() };
        let fc = genus_of_rotation(&g, &r);
        assert_eq!(fc.faces, 2);
        assert!(fc.planar);
    }

    #[test]
    fn k5_every_rotation_non_planar() {
        let g = complete(5);
        let c = brute_force_rotations(&g, usize::MAX, |_| true);
        assert_eq!(c.total, 6usize.pow(5));
        assert_eq!(c.planar, 0);
        assert!(planar_embed(&g).is_err());
    }

    #[test]
    fn k4_embeds_with_four_faces() {
        let g = complete(4);
        let r = planar_embed(&g).unwrap();
        let fc = genus_of_rotation(&g, &r);
        assert_eq!((fc.faces, fc.genus), (4, 0));
    }

    #[test]
    fn k4_has_exactly_two_planar_rotations_which_are_mirrors() {
        let g = complete(4);
        let c = brute_force_rotations(&g, usize::MAX, |_| true);
        assert_eq!(c.planar, 2);
        let (r, m) = unique_embedding_3connected(&g).unwrap();
        assert_eq!(r.mirror().canonical(), m.canonical());
        assert_ne!(r.canonical(), m.canonical());
    }

    #[test]
    fn witnesses() {
        let w = planar_embed(&complete(5)).unwrap_err();
        assert_eq!(w.kind, KuratowskiKind::K5);
        assert!(is_kuratowski_subgraph(&complete(5), &w.arcs));
        let w = planar_embed(&k33()).unwrap_err();
        assert_eq!(w.kind, KuratowskiKind::K33);
        assert!(is_kuratowski_subgraph(&k33(), &w.arcs));
        // K6 contains both; the witness must be one of them
        let k6 = complete(6);
        let w = planar_embed(&k6).unwrap_err();
        assert!(is_kuratowski_subgraph(&k6, &w.arcs));
        assert_eq!(unique_embedding_3connected(&complete(5)), Err(PlanarityError::NonPlanar));
    }

    #[test]
    fn parallel_graph_branch_rotations_are_reverse() {
        let g = parallel(&[1, 2, 1, 3, 1]);
        let r = planar_embed(&g).unwrap();
        assert!(genus_of_rotation(&g, &r).planar);
        let ps = parallel_between(&g, 0, 1).unwrap();
        let along = ps.bijection();
        let mapped: Vec<usize> = r.rot[0].iter().rev().map(|h| along[h]).collect();
        assert!(same_cycle(&mapped, &r.rot[1]));
    }

    #[test]
    fn multigraph_embeddings() {
        let g = Multigraph::from_arcs(3, &[(0, 1), (0, 1), (1, 2), (2, 0), (2, 2), (0, 1)]);
        let r = planar_embed(&g).unwrap();
        assert!(is_planar_rotation(&g, &r));
        let forest = Multigraph::from_arcs(6, &[(0, 1), (1, 2), (1, 3), (4, 5)]);
        assert!(is_planar_rotation(&forest, &planar_embed(&forest).unwrap()));
        assert!(planar_embed(&octahedron()).is_ok());
    }

    #[test]
    fn embedding_agrees_with_brute_force_on_small_graphs() {
        // all graphs on five nodes with up to nine arcs drawn from a fixed list
        let all: Vec<(usize, usize)> = (0..5).flat_map(|i| ((i + 1)..5).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << all.len()) {
            if mask.count_ones() > 9 || mask % 7 != 0 {
                continue;
            }
            let arcs: Vec<(usize, usize)> = (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            let g = Multigraph::from_arcs(5, &arcs);
            let brute = brute_force_rotations(&g, usize::MAX, |_| true).planar > 0;
            assert_eq!(planar_embed(&g).is_ok(), brute, "{arcs:?}");
        }
    }

    #[test]
    fn mirror_preserves_genus() {
        let g = complete(5);
        let r = GraphRotation { rot: (0..5).map(|u| g.halves(u).to_vec()).collect() };
        assert_eq!(genus_of_rotation(&g, &r).genus, genus_of_rotation(&g, &r.mirror()).genus);
    }

    fn theta_pairing(g: &Multigraph, sigma: &[usize]) -> LoopPairing {
        // pairs the i-th half at node 0 with the sigma(i)-th half at node 1
        let a = g.halves(0);
        let b = g.halves(1);
        LoopPairing { first: 0, second: 1, matching: sigma.iter().enumerate().map(|(i, &j)| (a[i], b[j])).collect() }
    }

    #[test]
    fn loop_planar_parallel_equal_windings() {
        let g = parallel(&[1, 1, 1, 1]);
        // matching along the paths themselves: all windings one
        let p = theta_pairing(&g, &[0, 1, 2, 3]);
        match loop_planar(&g, std::slice::from_ref(&p)).unwrap() {
            LoopPlanarity::Planar(r) => assert!(is_planar_rotation(&g, &r) && p.holds(&r)),
            LoopPlanarity::Refuted => panic!("expected planar"),
        }
        // two 2-cycles: windings (2, 2)
        let p = theta_pairing(&g, &[1, 0, 3, 2]);
        assert!(matches!(loop_planar(&g, &[p]).unwrap(), LoopPlanarity::Planar(_)));
    }

    #[test]
    fn loop_planar_parallel_unequal_windings_agrees_with_brute_force() {
        let g = parallel(&[1, 1, 1]);
        // a fixed point and a 2-cycle: windings (1, 2)
        let p = theta_pairing(&g, &[0, 2, 1]);
        assert_eq!(loop_planar(&g, std::slice::from_ref(&p)).unwrap(), LoopPlanarity::Refuted);
        let brute = brute_force_rotations(&g, usize::MAX, |r| p.holds(r));
        assert_eq!(brute.planar, 0);
        for sigma in [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [2, 1, 0]] {
            let p = theta_pairing(&g, &sigma);
            let fast = matches!(loop_planar(&g, std::slice::from_ref(&p)).unwrap(), LoopPlanarity::Planar(_));
            let slow = brute_force_rotations(&g, usize::MAX, |r| p.holds(r)).planar > 0;
            assert_eq!(fast, slow, "{sigma:?}");
        }
    }

    #[test]
    fn cyclic_order_counts() {
        assert_eq!(cyclic_orders(&[4, 1, 2, 3]).len(), 6);
        assert_eq!(cyclic_orders(&[7]).len(), 1);
        assert!(cyclic_orders(&[3, 1, 2]).iter().all(|o| o[0] == 1));
    }
}
