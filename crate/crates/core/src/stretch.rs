//! Stretching operations with a replayable trace and rotation pull-back.
//!
//! Every operation keeps the dart ids of surviving face traversals, so a
//! rotation system of the stretched complex is pulled back by a short list of
//! [`Reduction`]s: forgetting new edges, splicing rotators across contracted
//! faces of size two, and rebuilding the rotator of a contracted edge.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{Dart, Edge, TwoComplex};
use crate::error::StretchError;
use crate::graph::Multigraph;
use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::link::{is_para_star_at, link_at, two_separators, Branch, LinkGraph};
use crate::planarity::{brute_force_rotations, cyclic_orders, planar_embed};
use crate::rotation::{induced_rotation, planar_at, RotationSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Branch,
    TwoSeparator,
    Edge,
    ContractReversible,
    SplitVertex,
    Subdivide,
    MakeStretchedOut,
    UnstretchBranch,
}

/// Enough to re-run a step on the complex it was applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepParams {
    /// `branch` lists the edges at `vertex` forming the branch minus its cut node.
    Branch { vertex: VertexId, cut: EdgeId, branch: Vec<EdgeId> },
    TwoSeparator { vertex: VertexId, a: EdgeId, b: EdgeId },
    Edge { edge: EdgeId, faces: (FaceId, FaceId), simplicial: bool },
    ContractReversible { edge: EdgeId },
    /// `edge` is the new edge of an earlier branch stretch.
    UnstretchBranch { edge: EdgeId },
    SplitVertex { vertex: VertexId },
    Subdivide { face: FaceId },
}

/// Cells created or removed by a step. Everything else keeps its id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellChanges {
    pub new_vertices: Vec<VertexId>,
    pub new_edges: Vec<EdgeId>,
    pub new_faces: Vec<FaceId>,
    pub removed_vertices: Vec<VertexId>,
    pub removed_edges: Vec<EdgeId>,
    pub removed_faces: Vec<FaceId>,
}

/// Rotator surgery turning a rotation system of the later complex into one of
/// the earlier complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Drop(Vec<EdgeId>),
    /// Contract a face of size two on `keep` and `gone` into `keep`. `flip`
    /// when `gone` runs against `keep`.
    Splice { keep: EdgeId, gone: EdgeId, keep_dart: DartId, gone_dart: DartId, flip: bool },
    /// Undo such a contraction; `gone_darts` are the darts `gone` carried
    /// besides the contracted face.
    UnSplice { keep: EdgeId, gone: EdgeId, keep_dart: DartId, gone_dart: DartId, gone_darts: Vec<DartId>, flip: bool },
    /// Recover the rotator of a contracted reversible edge.
    Reversible(Box<ReversibleData>),
    /// Recover the rotator of an edge whose two end links were merged by
    /// a contraction.
    Unmerge(Box<UnmergeData>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnmergeData {
    pub edge: EdgeId,
    pub tail_link: LinkGraph,
    pub head_link: LinkGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleData {
    pub edge: EdgeId,
    pub ends: Edge,
    pub tail_link: LinkGraph,
    pub head_link: LinkGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchStep {
    pub kind: StepKind,
    pub params: StepParams,
    pub changes: CellChanges,
    /// Applied in order to a rotation system after the step.
    pub pullback: Vec<Reduction>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StretchTrace {
    pub steps: Vec<StretchStep>,
}

impl StretchTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: StretchStep) {
        self.steps.push(step);
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    /// Re-runs every step from `original`.
    pub fn replay(&self, original: &TwoComplex) -> Result<TwoComplex, StretchError> {
        let mut c = original.clone();
        for s in &self.steps {
            c = apply(&c, s.kind, &s.params)?.0;
        }
        Ok(c)
    }
}

/// Runs one step described by its parameters.
pub fn apply(c: &TwoComplex, kind: StepKind, params: &StepParams) -> Result<(TwoComplex, StretchStep), StretchError> {
    let (out, mut step) = match params {
        StepParams::Branch { vertex, cut, branch } => branch_by_edges(c, *vertex, *cut, branch)?,
        StepParams::TwoSeparator { vertex, a, b } => stretch_two_separator(c, *vertex, (*a, *b))?,
        StepParams::Edge { edge, faces, simplicial } => edge_impl(c, *edge, *faces, *simplicial, true)?,
        StepParams::ContractReversible { edge } => contract_reversible(c, *edge)?,
        StepParams::UnstretchBranch { edge } => unstretch_branch(c, *edge)?,
        StepParams::SplitVertex { vertex } => split_vertex(c, *vertex)?,
        StepParams::Subdivide { face } => subdivide_face(c, *face)?,
    };
    step.kind = kind;
    Ok((out, step))
}

fn step(kind: StepKind, params: StepParams, changes: CellChanges, pullback: Vec<Reduction>) -> StretchStep {
    StretchStep { kind, params, changes, pullback }
}

fn no_loops_at(c: &TwoComplex, v: VertexId) -> Result<(), StretchError> {
    if c.edges().any(|(_, x)| x.is_loop() && x.tail == v) {
        return Err(StretchError::LoopAt(v));
    }
    Ok(())
}

fn retarget(c: &mut TwoComplex, e: EdgeId, from: VertexId, to: VertexId) {
    let mut x = c.edge(e).expect("edge exists");
    if x.tail == from {
        x.tail = to;
    }
    if x.head == from {
        x.head = to;
    }
    c.set_edge(e, x);
}

/// Start vertices of the darts of a trail.
fn trail_starts(c: &TwoComplex, darts: &[Dart]) -> Vec<VertexId> {
    darts.iter().map(|d| c.dart_start(d)).collect()
}

/// Splits a face of size four along the diagonal at `corner_vertex`, creating
/// the diagonal edge. The half holding `keep_edge` keeps the face id.
fn split_quad(c: &mut TwoComplex, f: FaceId, corner_vertex: VertexId, keep_edge: EdgeId, changes: &mut CellChanges) -> EdgeId {
    let q = c.face(f).expect("face exists").to_vec();
    let s = trail_starts(c, &q);
    let i = s.iter().position(|&x| x == corner_vertex).expect("corner on face");
    let opp = s[(i + 2) % 4];
    let diag = c.add_edge(corner_vertex, opp);
    changes.new_edges.push(diag);
    let d_back = Dart { id: c.fresh_dart(), edge: diag, forward: false };
    let d_fwd = Dart { id: c.fresh_dart(), edge: diag, forward: true };
    // T1 runs corner → … → opp then back along the diagonal
    let t1 = vec![q[i], q[(i + 1) % 4], d_back];
    let t2 = vec![q[(i + 2) % 4], q[(i + 3) % 4], d_fwd];
    let (mine, other) = if t1.iter().any(|d| d.edge == keep_edge) { (t1, t2) } else { (t2, t1) };
    c.set_face(f, mine);
    let g = c.fresh_face_id();
    c.set_face(g, other);
    changes.new_faces.push(g);
    diag
}

// ----- branch stretching ----------------------------------------------------------------

/// Stretches the branch `b` of the link at `v`.
pub fn stretch_branch(c: &TwoComplex, v: VertexId, b: &Branch) -> Result<(TwoComplex, StretchStep), StretchError> {
    let link = link_at(c, v);
    if b.cut >= link.nodes.len() {
        return Err(StretchError::NotABranch(v));
    }
    let cut = link.nodes[b.cut].0;
    let branch: Vec<EdgeId> = b.nodes.iter().filter(|&&u| u != b.cut).map(|&u| link.nodes[u].0).collect();
    branch_by_edges(c, v, cut, &branch)
}

fn branch_by_edges(c: &TwoComplex, v: VertexId, cut: EdgeId, branch: &[EdgeId]) -> Result<(TwoComplex, StretchStep), StretchError> {
    no_loops_at(c, v)?;
    let link = link_at(c, v);
    let ne = link.node_of_edge(cut).ok_or(StretchError::NotABranch(v))?;
    if !link.graph.is_connected() {
        return Err(StretchError::NotABranch(v));
    }
    let mut removed = vec![false; link.graph.node_count()];
    removed[ne] = true;
    let comps = link.graph.components_avoiding(&removed);
    let want: BTreeSet<EdgeId> = branch.iter().copied().collect();
    let comp = comps
        .iter()
        .find(|k| k.iter().map(|&u| link.nodes[u].0).collect::<BTreeSet<_>>() == want)
        .ok_or(StretchError::NotABranch(v))?;
    if comps.len() < 2 {
        return Err(StretchError::NotABranch(v));
    }
    let in_branch: BTreeSet<usize> = comp.iter().copied().collect();

    let mut out = c.clone();
    let mut changes = CellChanges::default();
    let vb = out.add_vertex();
    let eb = out.add_edge(v, vb);
    changes.new_vertices.push(vb);
    changes.new_edges.push(eb);
    for &z in &want {
        retarget(&mut out, z, v, vb);
    }
    // corners at v between the cut node and the branch, grouped by face
    let mut corners: BTreeMap<FaceId, Vec<usize>> = BTreeMap::new();
    for (arc, &(x, y)) in link.graph.arcs().iter().enumerate() {
        if (x == ne && in_branch.contains(&y)) || (y == ne && in_branch.contains(&x)) {
            let p = link.arc_corner[arc];
            corners.entry(p.face).or_default().push(p.pos);
        }
    }
    let mut diags = Vec::new();
    for (&f, positions) in &corners {
        let old = c.face(f).expect("face exists");
        let mut trail = Vec::with_capacity(old.len() + positions.len());
        for (i, d) in old.iter().enumerate() {
            trail.push(*d);
            if positions.contains(&i) {
                // d ends at v; the next dart leaves v
                let forward = d.edge == cut;
                trail.push(Dart { id: out.fresh_dart(), edge: eb, forward });
            }
        }
        out.set_face(f, trail);
        if old.len() == 3 && positions.len() == 1 {
            diags.push(split_quad(&mut out, f, v, cut, &mut changes));
        }
    }
    let mut dropped = vec![eb];
    dropped.extend(diags);
    let params = StepParams::Branch { vertex: v, cut, branch: want.into_iter().collect() };
    Ok((out, step(StepKind::Branch, params, changes, vec![Reduction::Drop(dropped)])))
}

// ----- 2-separator stretching -----------------------------------------------------------

/// Inserts Δ⁺ₙ at the 2-separator `(a, b)` of the link at `v`, where `n` is the
/// number of components of `L(v) − a − b`.
pub fn stretch_two_separator(c: &TwoComplex, v: VertexId, (a, b): (EdgeId, EdgeId)) -> Result<(TwoComplex, StretchStep), StretchError> {
    no_loops_at(c, v)?;
    let link = link_at(c, v);
    let na = link.node_of_edge(a).ok_or(StretchError::NotTwoSeparator(v))?;
    let nb = link.node_of_edge(b).ok_or(StretchError::NotTwoSeparator(v))?;
    if na == nb {
        return Err(StretchError::NotTwoSeparator(v));
    }
    if !link.graph.is_2connected() {
        return Err(StretchError::LinkNot2Connected(v));
    }
    let mut removed = vec![false; link.graph.node_count()];
    removed[na] = true;
    removed[nb] = true;
    let comps = link.graph.components_avoiding(&removed);
    if comps.len() < 2 {
        return Err(StretchError::NotTwoSeparator(v));
    }
    let mut comp_of = vec![usize::MAX; link.graph.node_count()];
    for (k, comp) in comps.iter().enumerate() {
        for &u in comp {
            comp_of[u] = k;
        }
    }
    let ea = c.edge(a).expect("edge exists");
    let eb = c.edge(b).expect("edge exists");
    let (wa, wb) = (ea.other(v), eb.other(v));

    let mut out = c.clone();
    let mut changes = CellChanges::default();
    let mut xs = Vec::new();
    let (mut vx, mut wax, mut wbx) = (Vec::new(), Vec::new(), Vec::new());
    for _ in &comps {
        let x = out.add_vertex();
        xs.push(x);
        vx.push(out.add_edge(v, x));
        wax.push(if ea.tail == v { out.add_edge(x, wa) } else { out.add_edge(wa, x) });
        wbx.push(if eb.tail == v { out.add_edge(x, wb) } else { out.add_edge(wb, x) });
    }
    changes.new_vertices.extend(&xs);
    for k in 0..comps.len() {
        changes.new_edges.extend([vx[k], wax[k], wbx[k]]);
    }
    for (u, &(e, _)) in link.nodes.iter().enumerate() {
        if u != na && u != nb {
            retarget(&mut out, e, v, xs[comp_of[u]]);
        }
    }
    // darts on a and b move according to the node they meet at v
    let mut moved: BTreeMap<DartId, EdgeId> = BTreeMap::new();
    for (arc, &(x, y)) in link.graph.arcs().iter().enumerate() {
        for (here, there, half) in [(x, y, 2 * arc), (y, x, 2 * arc + 1)] {
            let target = if here == na {
                if there == nb { None } else { Some(wax[comp_of[there]]) }
            } else if here == nb {
                if there == na { None } else { Some(wbx[comp_of[there]]) }
            } else {
                None
            };
            if let Some(t) = target {
                moved.insert(link.half_dart[half], t);
            }
        }
    }
    let faces: Vec<FaceId> = c.faces().map(|(f, _)| f).collect();
    for f in faces {
        let darts = out.face(f).expect("face exists");
        if darts.iter().any(|d| moved.contains_key(&d.id)) {
            let new: Vec<Dart> = darts
                .iter()
                .map(|d| match moved.get(&d.id) {
                    Some(&t) => Dart { edge: t, ..*d },
                    None => *d,
                })
                .collect();
            out.set_face(f, new);
        }
    }
    let mut pullback = Vec::new();
    for k in 0..comps.len() {
        for (sep, edge, spoke) in [(a, ea, wax[k]), (b, eb, wbx[k])] {
            // triangle v → w → x_k → v
            let fwd = edge.tail == v;
            let d_sep = Dart { id: out.fresh_dart(), edge: sep, forward: fwd };
            let d_spoke = Dart { id: out.fresh_dart(), edge: spoke, forward: !fwd };
            let d_vx = Dart { id: out.fresh_dart(), edge: vx[k], forward: false };
            let f = out.fresh_face_id();
            out.set_face(f, vec![d_sep, d_spoke, d_vx]);
            changes.new_faces.push(f);
            pullback.push(Reduction::Splice { keep: sep, gone: spoke, keep_dart: d_sep.id, gone_dart: d_spoke.id, flip: false });
        }
    }
    pullback.insert(0, Reduction::Drop(vx));
    let params = StepParams::TwoSeparator { vertex: v, a, b };
    Ok((out, step(StepKind::TwoSeparator, params, changes, pullback)))
}

// ----- edge stretching ------------------------------------------------------------------

/// Stretches `e` in the direction of `faces`, then makes the result simplicial
/// by subdividing the second edge and each resulting face of size four.
pub fn stretch_edge(c: &TwoComplex, e: EdgeId, faces: (FaceId, FaceId)) -> Result<(TwoComplex, StretchStep), StretchError> {
    edge_impl(c, e, faces, true, true)
}

/// Stretches `e` leaving the face of size two in place.
pub fn pre_stretch_edge(c: &TwoComplex, e: EdgeId, faces: (FaceId, FaceId)) -> Result<(TwoComplex, StretchStep), StretchError> {
    edge_impl(c, e, faces, false, true)
}

fn dart_on(c: &TwoComplex, f: FaceId, e: EdgeId) -> Result<Dart, StretchError> {
    let darts = c.face(f).ok_or(StretchError::FaceNotOnEdge(f))?;
    let on: Vec<&Dart> = darts.iter().filter(|d| d.edge == e).collect();
    if on.len() != 1 {
        return Err(StretchError::FaceNotOnEdge(f));
    }
    Ok(*on[0])
}

/// Are the darts `d1`, `d2` on `e` neighbours in the rotator at `e` for every
/// planar rotation of the link at one of the ends of `e`?
pub fn adjacency_forced(c: &TwoComplex, e: EdgeId, d1: DartId, d2: DartId) -> bool {
    let Some(x) = c.edge(e) else { return false };
    [x.tail, x.head].into_iter().any(|v| {
        let link = link_at(c, v);
        let Some(node) = link.node_of_edge(e) else { return false };
        let (Some(h1), Some(h2)) = (link.half_of_dart(node, d1), link.half_of_dart(node, d2)) else {
            return false;
        };
        adjacent_in_every_planar_rotation(&link.graph, node, h1, h2)
    })
}

fn neighbours_in(r: &[usize], h1: usize, h2: usize) -> bool {
    let n = r.len();
    let i = r.iter().position(|&h| h == h1);
    match i {
        Some(i) => r[(i + 1) % n] == h2 || r[(i + n - 1) % n] == h2,
        None => false,
    }
}

const ADJACENCY_ENUMERATION_CAP: u128 = 200_000;

pub(crate) fn adjacent_in_every_planar_rotation(g: &Multigraph, node: usize, h1: usize, h2: usize) -> bool {
    if g.degree(node) <= 3 {
        return true;
    }
    if g.is_2connected() {
        if let Ok(seps) = two_separators(g) {
            if !seps.iter().any(|s| s.proper && (s.a == node || s.b == node)) {
                return match planar_embed(g) {
                    Ok(r) => neighbours_in(&r.rot[node], h1, h2),
                    Err(_) => true,
                };
            }
        }
    }
    let mut total: u128 = 1;
    for u in 0..g.node_count() {
        for k in 2..g.degree(u).max(1) {
            total = total.saturating_mul(k as u128);
        }
    }
    if total > ADJACENCY_ENUMERATION_CAP {
        return false;
    }
    let count = brute_force_rotations(g, usize::MAX, |r| !neighbours_in(&r.rot[node], h1, h2));
    count.planar == 0
}

fn edge_impl(
    c: &TwoComplex,
    e: EdgeId,
    (f1, f2): (FaceId, FaceId),
    simplicial: bool,
    check: bool,
) -> Result<(TwoComplex, StretchStep), StretchError> {
    let x = c.edge(e).ok_or(crate::error::ComplexError::UnknownEdge(e))?;
    if x.is_loop() {
        return Err(StretchError::LoopAt(x.tail));
    }
    let idx = c.index();
    if idx.degree(e) < 3 {
        return Err(StretchError::DegreeTooLow(e));
    }
    if f1 == f2 {
        return Err(StretchError::FaceNotOnEdge(f2));
    }
    let d1 = dart_on(c, f1, e)?;
    let d2 = dart_on(c, f2, e)?;
    if check && !adjacency_forced(c, e, d1.id, d2.id) {
        return Err(StretchError::AdjacencyNotForced(e));
    }
    let mut out = c.clone();
    let mut changes = CellChanges::default();
    let e2 = out.add_edge(x.tail, x.head);
    changes.new_edges.push(e2);
    let faces: Vec<FaceId> = c.faces().map(|(f, _)| f).collect();
    for &f in &faces {
        if f == f1 || f == f2 {
            continue;
        }
        let darts = out.face(f).expect("face exists");
        if darts.iter().any(|d| d.edge == e) {
            let new: Vec<Dart> = darts.iter().map(|d| if d.edge == e { Dart { edge: e2, ..*d } } else { *d }).collect();
            out.set_face(f, new);
        }
    }
    let keep_dart = Dart { id: out.fresh_dart(), edge: e, forward: true };
    let gone_dart = Dart { id: out.fresh_dart(), edge: e2, forward: false };
    let bigon = out.fresh_face_id();
    out.set_face(bigon, vec![keep_dart, gone_dart]);
    changes.new_faces.push(bigon);
    let splice = Reduction::Splice { keep: e, gone: e2, keep_dart: keep_dart.id, gone_dart: gone_dart.id, flip: false };
    let mut pullback = Vec::new();
    if simplicial {
        let m = out.add_vertex();
        let e3 = out.add_edge(m, x.head);
        out.set_edge(e2, Edge { tail: x.tail, head: m });
        changes.new_vertices.push(m);
        changes.new_edges.push(e3);
        let mut dropped = vec![e3];
        let carrying: Vec<(FaceId, usize)> = out
            .faces()
            .filter(|(_, ds)| ds.iter().any(|d| d.edge == e2))
            .map(|(f, ds)| (f, ds.len()))
            .collect();
        for (f, len) in carrying {
            let darts = out.face(f).expect("face exists").to_vec();
            let mut new = Vec::with_capacity(darts.len() + 1);
            for d in darts {
                if d.edge != e2 {
                    new.push(d);
                } else if d.forward {
                    new.push(d);
                    new.push(Dart { id: out.fresh_dart(), edge: e3, forward: true });
                } else {
                    new.push(Dart { id: out.fresh_dart(), edge: e3, forward: false });
                    new.push(d);
                }
            }
            out.set_face(f, new);
            if len == 3 {
                dropped.push(split_quad(&mut out, f, m, e2, &mut changes));
            }
        }
        pullback.push(Reduction::Drop(dropped));
    }
    pullback.push(splice);
    let params = StepParams::Edge { edge: e, faces: (f1, f2), simplicial };
    Ok((out, step(StepKind::Edge, params, changes, pullback)))
}

// ----- reversible contraction -----------------------------------------------------------

/// Is `e` reversible by the para-star criterion: both end links are para-stars
/// glued at `e`, where `e` has maximum degree?
pub fn is_reversible(c: &TwoComplex, e: EdgeId) -> bool {
    let Some(x) = c.edge(e) else { return false };
    if x.is_loop() {
        return false;
    }
    [(x.tail, 0u8), (x.head, 1u8)].into_iter().all(|(v, end)| {
        let link = link_at(c, v);
        let Some(n) = link.node_of(e, end) else { return false };
        link.graph.degree(n) == link.graph.max_degree() && is_para_star_at(&link.graph, n)
    })
}

/// Contracts a reversible edge, then contracts every resulting face of size two
/// that has an edge of face-degree two onto its other edge.
pub fn contract_reversible(c: &TwoComplex, e: EdgeId) -> Result<(TwoComplex, StretchStep), StretchError> {
    let x = c.edge(e).ok_or(crate::error::ComplexError::UnknownEdge(e))?;
    if !is_reversible(c, e) {
        return Err(StretchError::NotReversible(e));
    }
    let parallel = c.edges().any(|(g, y)| g != e && ((y.tail == x.tail && y.head == x.head) || (y.tail == x.head && y.head == x.tail)));
    if parallel {
        return Err(StretchError::NotReversible(e));
    }
    let data = ReversibleData { edge: e, ends: x, tail_link: link_at(c, x.tail), head_link: link_at(c, x.head) };
    let (out, changes, mut pullback) = contract_with_bigons(c, e)?;
    pullback.push(Reduction::Reversible(Box::new(data)));
    let params = StepParams::ContractReversible { edge: e };
    Ok((out, step(StepKind::ContractReversible, params, changes, pullback)))
}

fn contract_with_bigons(c: &TwoComplex, e: EdgeId) -> Result<(TwoComplex, CellChanges, Vec<Reduction>), StretchError> {
    let x = c.edge(e).ok_or(crate::error::ComplexError::UnknownEdge(e))?;
    let touched: Vec<FaceId> = c.faces().filter(|(_, ds)| ds.iter().any(|d| d.edge == e)).map(|(f, _)| f).collect();
    let edited = c.contract_edge(e)?;
    let mut out = edited.complex;
    let mut changes = CellChanges {
        removed_vertices: vec![x.tail, x.head],
        removed_edges: vec![e],
        removed_faces: edited.map.removed_faces.clone(),
        ..CellChanges::default()
    };
    changes.new_vertices.extend(edited.map.vertices.values().next().copied());
    let mut unsplices = Vec::new();
    for f in touched {
        let Some(darts) = out.face(f) else { continue };
        if darts.len() != 2 || darts[0].edge == darts[1].edge {
            continue;
        }
        let degrees = out.edge_degrees();
        let (k, g) = if degrees[&darts[0].edge] == 2 {
            (darts[1], darts[0])
        } else if degrees[&darts[1].edge] == 2 {
            (darts[0], darts[1])
        } else {
            continue;
        };
        let ke = out.edge(k.edge).expect("edge exists");
        let ge = out.edge(g.edge).expect("edge exists");
        let flip = !(ke.tail == ge.tail && ke.head == ge.head);
        let gone_darts: Vec<DartId> = out
            .faces()
            .filter(|&(h, _)| h != f)
            .flat_map(|(_, ds)| ds.iter().filter(|d| d.edge == g.edge).map(|d| d.id).collect::<Vec<_>>())
            .collect();
        unsplices.push(Reduction::UnSplice { keep: k.edge, gone: g.edge, keep_dart: k.id, gone_dart: g.id, gone_darts, flip });
        changes.removed_edges.push(g.edge);
        changes.removed_faces.push(f);
        out = out.contract_bigon_keeping(f, k.edge)?.complex;
    }
    unsplices.reverse();
    Ok((out, changes, unsplices))
}

/// Undoes a branch stretch whose new edge is `f`: contracts `f` and the faces
/// of size two left between each diagonal and its branch edge.
///
/// Applicable when at one end `v` of `f` every face at `f` is a triangle whose
/// third edge at `v` has face-degree two, both end links stay connected
/// without `f`, no other face meets both ends of `f`, and the ends of `f` have
/// no common neighbours besides the apexes of those triangles.
pub fn unstretch_branch(c: &TwoComplex, f: EdgeId) -> Result<(TwoComplex, StretchStep), StretchError> {
    let x = c.edge(f).ok_or(crate::error::ComplexError::UnknownEdge(f))?;
    if !is_unstretchable(c, f) {
        return Err(StretchError::NotUnstretchable(f));
    }
    let data = UnmergeData { edge: f, tail_link: link_at(c, x.tail), head_link: link_at(c, x.head) };
    let (out, changes, mut pullback) = contract_with_bigons(c, f)?;
    pullback.push(Reduction::Unmerge(Box::new(data)));
    let params = StepParams::UnstretchBranch { edge: f };
    Ok((out, step(StepKind::UnstretchBranch, params, changes, pullback)))
}

/// Whether [`unstretch_branch`] applies to `f`.
pub fn is_unstretchable(c: &TwoComplex, f: EdgeId) -> bool {
    let Some(x) = c.edge(f) else { return false };
    if x.is_loop() {
        return false;
    }
    let degrees = c.edge_degrees();
    let sides = [link_at(c, x.tail), link_at(c, x.head)];
    let connected = sides.iter().all(|l| {
        let Some(n) = l.node_of_edge(f) else { return false };
        let mut removed = vec![false; l.graph.node_count()];
        removed[n] = true;
        l.graph.components_avoiding(&removed).len() == 1
    });
    connected && [(0, x.head), (1, x.tail)].into_iter().any(|(i, u)| unstretch_at(c, f, &sides[i], u, &degrees))
}

fn unstretch_at(c: &TwoComplex, f: EdgeId, link: &LinkGraph, u: VertexId, degrees: &BTreeMap<EdgeId, usize>) -> bool {
    let v = link.vertex;
    let lg = &link.graph;
    let Some(nf) = link.node_of_edge(f) else { return false };
    let other = |e: EdgeId, at: VertexId| c.edge(e).map(|y| y.other(at));
    let mut apexes = BTreeSet::new();
    let mut faces_t = BTreeSet::new();
    let mut beside = Vec::new();
    for (arc, &(a, b)) in lg.arcs().iter().enumerate() {
        let nd = match (a == nf, b == nf) {
            (true, false) => b,
            (false, true) => a,
            (false, false) => continue,
            (true, true) => return false,
        };
        let d = link.nodes[nd].0;
        if degrees.get(&d) != Some(&2) || lg.degree(nd) != 2 {
            return false;
        }
        let t = link.arc_corner[arc].face;
        let Some(td) = c.face(t) else { return false };
        if td.len() != 3 || !faces_t.insert(t) {
            return false;
        }
        let Some(z) = td.iter().map(|y| y.edge).find(|&y| y != f && y != d) else { return false };
        let (Some(apex), Some(apex_u)) = (other(d, v), other(z, u)) else { return false };
        if apex != apex_u || apex == u || !apexes.insert(apex) {
            return false;
        }
        let Some(back) = lg.halves(nd).iter().map(|&h| h >> 1).find(|&a2| a2 != arc) else { return false };
        beside.push(link.arc_corner[back].face);
    }
    if apexes.is_empty() || beside.iter().any(|h| faces_t.contains(h)) {
        return false;
    }
    let neighbours = |w: VertexId| -> BTreeSet<VertexId> { c.edges().filter(|&(_, y)| y.tail == w || y.head == w).map(|(_, y)| y.other(w)).collect() };
    let common: BTreeSet<VertexId> = neighbours(v).intersection(&neighbours(u)).copied().collect();
    if common != apexes {
        return false;
    }
    !c.faces().filter(|(h, _)| !faces_t.contains(h)).any(|(_, ds)| {
        let on = |w: VertexId| ds.iter().any(|d| c.edge(d.edge).is_some_and(|y| y.tail == w || y.head == w));
        on(v) && on(u)
    })
}

/// Rotator at `e` closing every face of `link` at the node of `e` as soon as
/// it returns there; `None` if that does not give a single cycle.
fn rotator_by_port_walk(link: &LinkGraph, e: EdgeId, rs: &RotationSystem) -> Option<Vec<DartId>> {
    let g = &link.graph;
    let ne = link.node_of_edge(e)?;
    let rot = induced_rotation(link, rs).rot;
    let mut next = vec![usize::MAX; 2 * g.arc_count()];
    for (u, r) in rot.iter().enumerate() {
        if u == ne {
            continue;
        }
        for (i, &h) in r.iter().enumerate() {
            next[h] = *r.get((i + 1) % r.len())?;
        }
    }
    let ports: Vec<usize> = g.halves(ne).to_vec();
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
    for &h0 in &ports {
        let mut h = h0;
        let mut steps = 0;
        while g.half_target(h) != ne {
            h = *next.get(Multigraph::twin(h))?;
            steps += 1;
            if h == usize::MAX || steps > next.len() {
                return None;
            }
        }
        if succ.insert(Multigraph::twin(h), h0).is_some() {
            return None;
        }
    }
    let mut order = vec![ports[0]];
    while order.len() < ports.len() {
        let h = succ[order.last()?];
        if h == ports[0] {
            return None;
        }
        order.push(h);
    }
    if succ[order.last()?] != ports[0] {
        return None;
    }
    let mut out: Vec<DartId> = order.into_iter().map(|h| link.half_dart[h]).collect();
    if link.nodes[ne].1 == 1 {
        out.reverse();
    }
    Some(out)
}

// ----- splitting and subdivision --------------------------------------------------------

/// Replaces `v` by one vertex per component of its link.
pub fn split_vertex(c: &TwoComplex, v: VertexId) -> Result<(TwoComplex, StretchStep), StretchError> {
    let edited = c.split_vertex(v)?;
    let changes = CellChanges { new_vertices: edited.map.split_from.keys().copied().collect(), ..CellChanges::default() };
    Ok((edited.complex, step(StepKind::SplitVertex, StepParams::SplitVertex { vertex: v }, changes, Vec::new())))
}

/// Cones a face off from a new interior vertex.
pub fn subdivide_face(c: &TwoComplex, f: FaceId) -> Result<(TwoComplex, StretchStep), StretchError> {
    let darts = c.face(f).ok_or(crate::error::ComplexError::UnknownFace(f))?.to_vec();
    let starts = trail_starts(c, &darts);
    let mut out = c.clone();
    let mut changes = CellChanges::default();
    let centre = out.add_vertex();
    changes.new_vertices.push(centre);
    let spokes: Vec<EdgeId> = starts.iter().map(|&s| out.add_edge(centre, s)).collect();
    changes.new_edges.extend(&spokes);
    let n = darts.len();
    for i in 0..n {
        let a = Dart { id: out.fresh_dart(), edge: spokes[i], forward: true };
        let b = Dart { id: out.fresh_dart(), edge: spokes[(i + 1) % n], forward: false };
        let g = if i == 0 { f } else { out.fresh_face_id() };
        out.set_face(g, vec![a, darts[i], b]);
        if i > 0 {
            changes.new_faces.push(g);
        }
    }
    let params = StepParams::Subdivide { face: f };
    Ok((out, step(StepKind::Subdivide, params, changes, vec![Reduction::Drop(spokes)])))
}

// ----- pull-back ------------------------------------------------------------------------

/// Pulls a rotation system of the last complex of `trace` back to its first.
pub fn rotation_pullback(trace: &StretchTrace, rs: &RotationSystem) -> Result<RotationSystem, StretchError> {
    let mut rs = rs.clone();
    for s in trace.steps.iter().rev() {
        pull_step(s, &mut rs)?;
    }
    Ok(rs)
}

pub fn pull_step(s: &StretchStep, rs: &mut RotationSystem) -> Result<(), StretchError> {
    for r in &s.pullback {
        reduce(r, rs)?;
    }
    Ok(())
}

/// `r` rotated to start just after `x`, without `x`.
fn after(r: &[DartId], x: DartId) -> Option<Vec<DartId>> {
    let i = r.iter().position(|&d| d == x)?;
    Some(r[i + 1..].iter().chain(r[..i].iter()).copied().collect())
}

fn reduce(r: &Reduction, rs: &mut RotationSystem) -> Result<(), StretchError> {
    match r {
        Reduction::Drop(es) => {
            for e in es {
                rs.rotators.remove(e);
            }
        }
        Reduction::Splice { keep, gone, keep_dart, gone_dart, flip } => {
            let rk = rs.rotators.remove(keep).ok_or(StretchError::VerificationFailed)?;
            let mut rg = rs.rotators.remove(gone).ok_or(StretchError::VerificationFailed)?;
            if *flip {
                rg.reverse();
            }
            let mut merged = after(&rk, *keep_dart).ok_or(StretchError::VerificationFailed)?;
            merged.extend(after(&rg, *gone_dart).ok_or(StretchError::VerificationFailed)?);
            rs.rotators.insert(*keep, merged);
        }
        Reduction::UnSplice { keep, gone, keep_dart, gone_dart, gone_darts, flip } => {
            let merged = rs.rotators.remove(keep).ok_or(StretchError::VerificationFailed)?;
            let theirs: BTreeSet<DartId> = gone_darts.iter().copied().collect();
            let n = merged.len();
            let start = if theirs.is_empty() || theirs.len() == n {
                0
            } else {
                (0..n)
                    .find(|&i| theirs.contains(&merged[i]) && !theirs.contains(&merged[(i + n - 1) % n]))
                    .ok_or(StretchError::VerificationFailed)?
            };
            let rotated: Vec<DartId> = merged[start..].iter().chain(merged[..start].iter()).copied().collect();
            let k = theirs.len();
            if rotated[..k].iter().any(|d| !theirs.contains(d)) || rotated[k..].iter().any(|d| theirs.contains(d)) {
                return Err(StretchError::VerificationFailed);
            }
            let mut rg = vec![*gone_dart];
            rg.extend_from_slice(&rotated[..k]);
            let mut rk = vec![*keep_dart];
            rk.extend_from_slice(&rotated[k..]);
            if *flip {
                rg.reverse();
            }
            rs.rotators.insert(*keep, rk);
            rs.rotators.insert(*gone, rg);
        }
        Reduction::Reversible(data) => {
            let sigma = reversible_rotator(data, rs).ok_or(StretchError::VerificationFailed)?;
            rs.rotators.insert(data.edge, sigma);
        }
        Reduction::Unmerge(data) => {
            let placeholder = data.tail_link.node_of_edge(data.edge).map(|n| data.tail_link.graph.halves(n).iter().map(|&h| data.tail_link.half_dart[h]).collect());
            rs.rotators.insert(data.edge, placeholder.ok_or(StretchError::VerificationFailed)?);
            for link in [&data.tail_link, &data.head_link] {
                let Some(sigma) = rotator_by_port_walk(link, data.edge, rs) else { continue };
                rs.rotators.insert(data.edge, sigma);
                if planar_at(&data.tail_link, rs) && planar_at(&data.head_link, rs) {
                    return Ok(());
                }
            }
            return Err(StretchError::VerificationFailed);
        }
    }
    Ok(())
}

/// Cyclic dart orders (darts on `e`) of the components of `L − e`, each
/// component contracted to a node. `None` if a component is not a tree.
fn contracted_sides(link: &LinkGraph, end: u8, e: EdgeId, rs: &RotationSystem) -> Option<Vec<Vec<DartId>>> {
    let g = &link.graph;
    let ne = link.node_of(e, end)?;
    let rot = induced_rotation(link, rs).rot;
    let mut removed = vec![false; g.node_count()];
    removed[ne] = true;
    let mut out = Vec::new();
    for comp in g.components_avoiding(&removed) {
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        let internal = g.arcs().iter().filter(|&&(x, y)| inside.contains(&x) && inside.contains(&y)).count();
        if internal + 1 != comp.len() {
            return None;
        }
        let mut merged: Vec<usize> = rot[comp[0]].clone();
        let mut seen: BTreeSet<usize> = [comp[0]].into_iter().collect();
        let mut queue = vec![comp[0]];
        while let Some(u) = queue.pop() {
            for &h in &rot[u] {
                let y = g.half_target(h);
                if y == ne || seen.contains(&y) {
                    continue;
                }
                let ty = Multigraph::twin(h);
                let i = merged.iter().position(|&x| x == h)?;
                let mut next: Vec<usize> = merged[i + 1..].iter().chain(merged[..i].iter()).copied().collect();
                let j = rot[y].iter().position(|&x| x == ty)?;
                next.extend(rot[y][j + 1..].iter().chain(rot[y][..j].iter()).copied());
                merged = next;
                seen.insert(y);
                queue.push(y);
            }
        }
        out.push(merged.into_iter().map(|h| link.half_dart[Multigraph::twin(h)]).collect());
    }
    Some(out)
}

/// Rotator at a contracted reversible edge: contract the components of both
/// links, merge the tail-side nodes one pair at a time along shared faces and
/// read the rotator off the last node.
pub(crate) fn reversible_rotator(data: &ReversibleData, rs: &RotationSystem) -> Option<Vec<DartId>> {
    let e = data.edge;
    let structured = merge_sides(data, rs).filter(|sigma| {
        let mut trial = rs.clone();
        trial.rotators.insert(e, sigma.clone());
        planar_at(&data.tail_link, &trial) && planar_at(&data.head_link, &trial)
    });
    structured.or_else(|| brute_force_rotator(data, rs))
}

fn merge_sides(data: &ReversibleData, rs: &RotationSystem) -> Option<Vec<DartId>> {
    let e = data.edge;
    let mut left = contracted_sides(&data.tail_link, 0, e, rs)?;
    let right = contracted_sides(&data.head_link, 1, e, rs)?;
    let mut left_of: BTreeMap<DartId, usize> = BTreeMap::new();
    for (i, k) in left.iter().enumerate() {
        for &d in k {
            left_of.insert(d, i);
        }
    }
    let mut right_of: BTreeMap<DartId, usize> = BTreeMap::new();
    for (j, k) in right.iter().enumerate() {
        for &d in k {
            right_of.insert(d, j);
        }
    }
    if left_of.len() != right_of.len() || left_of.keys().ne(right_of.keys()) {
        return None;
    }
    let mut alive: Vec<bool> = vec![true; left.len()];
    while alive.iter().filter(|&&a| a).count() > 1 {
        let live: Vec<usize> = (0..left.len()).filter(|&i| alive[i]).collect();
        // components of the contracted graph, labelled by their left node
        let mut parent: Vec<usize> = (0..left.len() + right.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for (d, &i) in &left_of {
            let j = left.len() + right_of[d];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        let root0 = find(&mut parent, live[0]);
        let apart = live.iter().copied().find(|&i| find(&mut parent, i) != root0);
        let (y, z, merged) = if let Some(z) = apart {
            let y = live[0];
            let mut m = left[y].clone();
            m.extend(left[z].iter().copied());
            (y, z, m)
        } else {
            let mut found = None;
            'outer: for r in &right {
                let n = r.len();
                for i in 0..n {
                    let (d1, d2) = (r[i], r[(i + 1) % n]);
                    if left_of[&d1] != left_of[&d2] {
                        found = Some((d1, d2));
                        break 'outer;
                    }
                }
            }
            let (d1, d2) = found?;
            let (y, z) = (left_of[&d1], left_of[&d2]);
            let ry = &left[y];
            let i = ry.iter().position(|&d| d == d1)?;
            let mut m: Vec<DartId> = ry[i..].iter().chain(ry[..i].iter()).copied().collect();
            let rz = &left[z];
            let j = rz.iter().position(|&d| d == d2)?;
            m.extend(rz[j + 1..].iter().chain(rz[..=j].iter()).copied());
            (y, z, m)
        };
        for d in &left[z] {
            left_of.insert(*d, y);
        }
        left[y] = merged;
        left[z].clear();
        alive[z] = false;
    }
    let u = left.into_iter().zip(alive).find(|(_, a)| *a).map(|(k, _)| k)?;
    // `u` is the rotation at the head-side node of the edge
    let mut sigma = u;
    sigma.reverse();
    Some(sigma)
}

const REVERSIBLE_BRUTE_FORCE_MAX_DEGREE: usize = 8;

fn brute_force_rotator(data: &ReversibleData, rs: &RotationSystem) -> Option<Vec<DartId>> {
    let n = data.tail_link.node_of(data.edge, 0)?;
    let darts: Vec<usize> = data.tail_link.graph.halves(n).iter().map(|&h| data.tail_link.half_dart[h].0 as usize).collect();
    if darts.len() > REVERSIBLE_BRUTE_FORCE_MAX_DEGREE {
        return None;
    }
    let mut trial = rs.clone();
    for order in cyclic_orders(&darts) {
        let sigma: Vec<DartId> = order.into_iter().map(|d| DartId(d as u32)).collect();
        trial.rotators.insert(data.edge, sigma.clone());
        if planar_at(&data.tail_link, &trial) && planar_at(&data.head_link, &trial) {
            return Some(sigma);
        }
    }
    None
}
