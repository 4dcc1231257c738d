//! 2-complexes stored as vertices, edges and faces given by closed trails of darts.
//!
//! A face is a cyclic sequence of [`Dart`]s; consecutive darts chain head to
//! tail. Simplicial complexes are the special case of triangles on three
//! distinct vertices without loops or parallel edges, but every operation here
//! works on general 2-complexes since contractions leave the simplicial world.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::ComplexError;
use crate::ids::{DartId, EdgeId, FaceId, VertexId};

/// Endpoints of an edge. `tail == head` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// Vertex at end-index 0 (tail) or 1 (head).
    pub fn end(&self, end: u8) -> VertexId {
        if end == 0 {
            self.tail
        } else {
            self.head
        }
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// One traversal of an edge by a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dart {
    pub id: DartId,
    pub edge: EdgeId,
    /// `true` when the face runs from the edge's tail to its head.
    pub forward: bool,
}

impl Dart {
    /// End-index of the edge where the traversal starts.
    pub fn start_end(&self) -> u8 {
        if self.forward {
            0
        } else {
            1
        }
    }

    pub fn finish_end(&self) -> u8 {
        1 - self.start_end()
    }
}

/// Location of a dart inside its face trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DartPos {
    pub face: FaceId,
    pub pos: usize,
}

/// A record of a cell that an operation deleted because it became isolated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repair {
    DeletedEdge(EdgeId),
    DeletedVertex(VertexId),
    DeletedFace(FaceId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingVertex { edge: EdgeId, vertex: VertexId },
    MissingEdge { face: FaceId, edge: EdgeId },
    EmptyFace(FaceId),
    BrokenTrail { face: FaceId, pos: usize },
    EdgeWithoutFace(EdgeId),
    IsolatedVertex(VertexId),
    DuplicateDart(DartId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub simplicial: bool,
    /// Edges grouped by face-degree (counted with traversal multiplicity).
    pub edges_by_degree: BTreeMap<usize, Vec<EdgeId>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Σ (deg(e) − 2) over all edges of face-degree at least three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeParameterEdges(pub u64);

/// Where each cell of the input went. Cells absent from the maps kept their id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellMap {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    pub removed_faces: Vec<FaceId>,
    /// Vertices created by splitting, mapped to the vertex they came from.
    pub split_from: BTreeMap<VertexId, VertexId>,
    pub repairs: Vec<Repair>,
}

/// Result of a cell operation.
#[derive(Clone, Debug)]
pub struct Edited {
    pub complex: TwoComplex,
    pub map: CellMap,
}

/// A 2-dimensional cell complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoComplex {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    faces: BTreeMap<FaceId, Vec<Dart>>,
    next_vertex: u32,
    next_edge: u32,
    next_face: u32,
    next_dart: u32,
}

impl TwoComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a simplicial complex from vertex triples. Vertices and edges are
    /// numbered in order of first appearance, faces in input order.
    pub fn from_triangles(triangles: &[[u32; 3]]) -> Self {
        let mut c = TwoComplex::new();
        let mut edge_of: BTreeMap<(u32, u32), EdgeId> = BTreeMap::new();
        for t in triangles {
            for &x in t {
                c.insert_vertex(VertexId(x));
            }
        }
        for t in triangles {
            let mut trail = Vec::with_capacity(3);
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let e = *edge_of
                    .entry(key)
                    .or_insert_with(|| c.add_edge(VertexId(key.0), VertexId(key.1)));
                trail.push((e, a < b));
            }
            c.add_face(&trail);
        }
        c
    }

    // ----- raw construction -----------------------------------------------------------

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.insert_vertex(v);
        v
    }

    pub fn insert_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
        self.next_vertex = self.next_vertex.max(v.0 + 1);
    }

    pub fn add_edge(&mut self, tail: VertexId, head: VertexId) -> EdgeId {
        let e = EdgeId(self.next_edge);
        self.insert_edge(e, tail, head);
        e
    }

    pub fn insert_edge(&mut self, e: EdgeId, tail: VertexId, head: VertexId) {
        self.edges.insert(e, Edge { tail, head });
        self.next_edge = self.next_edge.max(e.0 + 1);
    }

    /// Adds a face from `(edge, forward)` pairs, allocating fresh dart ids.
    pub fn add_face(&mut self, trail: &[(EdgeId, bool)]) -> FaceId {
        let f = FaceId(self.next_face);
        self.insert_face(f, trail);
        f
    }

    pub fn insert_face(&mut self, f: FaceId, trail: &[(EdgeId, bool)]) {
        let darts = trail
            .iter()
            .map(|&(edge, forward)| Dart { id: self.fresh_dart(), edge, forward })
            .collect();
        self.faces.insert(f, darts);
        self.next_face = self.next_face.max(f.0 + 1);
    }

    /// Replaces (or creates) a face keeping the given darts verbatim.
    pub(crate) fn set_face(&mut self, f: FaceId, darts: Vec<Dart>) {
        self.faces.insert(f, darts);
        self.next_face = self.next_face.max(f.0 + 1);
    }

    pub(crate) fn fresh_dart(&mut self) -> DartId {
        let d = DartId(self.next_dart);
        self.next_dart += 1;
        d
    }

    pub(crate) fn fresh_face_id(&mut self) -> FaceId {
        let f = FaceId(self.next_face);
        self.next_face += 1;
        f
    }

    pub(crate) fn remove_face(&mut self, f: FaceId) -> Option<Vec<Dart>> {
        self.faces.remove(&f)
    }

    pub(crate) fn set_edge(&mut self, e: EdgeId, edge: Edge) {
        self.edges.insert(e, edge);
    }

    // ----- queries ----------------------------------------------------------------------

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().map(|(&e, &x)| (e, x))
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, &[Dart])> + '_ {
        self.faces.iter().map(|(&f, d)| (f, d.as_slice()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edge(&self, e: EdgeId) -> Option<Edge> {
        self.edges.get(&e).copied()
    }

    pub fn face(&self, f: FaceId) -> Option<&[Dart]> {
        self.faces.get(&f).map(|d| d.as_slice())
    }

    /// Vertex where dart `d` starts.
    pub fn dart_start(&self, d: &Dart) -> VertexId {
        self.edges[&d.edge].end(d.start_end())
    }

    pub fn dart_finish(&self, d: &Dart) -> VertexId {
        self.edges[&d.edge].end(d.finish_end())
    }

    /// Vertices of a face in trail order (starting vertex of each dart).
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[&f].iter().map(|d| self.dart_start(d)).collect()
    }

    pub fn index(&self) -> Incidence {
        Incidence::build(self)
    }

    /// Face-degree of every edge (number of darts on it).
    pub fn edge_degrees(&self) -> BTreeMap<EdgeId, usize> {
        let mut deg: BTreeMap<EdgeId, usize> = self.edges.keys().map(|&e| (e, 0)).collect();
        for darts in self.faces.values() {
            for d in darts {
                *deg.entry(d.edge).or_insert(0) += 1;
            }
        }
        deg
    }

    pub fn edge_degree_parameter(&self) -> DegreeParameterEdges {
        let total = self
            .edge_degrees()
            .values()
            .filter(|&&d| d >= 3)
            .map(|&d| (d - 2) as u64)
            .sum();
        DegreeParameterEdges(total)
    }

    /// Recomputes the simplicial flag from scratch.
    pub fn is_simplicial(&self) -> bool {
        let mut pairs = BTreeSet::new();
        for e in self.edges.values() {
            if e.is_loop() {
                return false;
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if !pairs.insert(key) {
                return false;
            }
        }
        let mut vertex_sets = BTreeSet::new();
        for (&f, darts) in &self.faces {
            if darts.len() != 3 {
                return false;
            }
            let mut vs = self.face_vertices(f);
            vs.sort();
            vs.dedup();
            if vs.len() != 3 {
                return false;
            }
            let mut es: Vec<EdgeId> = darts.iter().map(|d| d.edge).collect();
            es.sort();
            es.dedup();
            if es.len() != 3 || !vertex_sets.insert(vs) {
                return false;
            }
        }
        true
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (&e, x) in &self.edges {
            for v in [x.tail, x.head] {
                if !self.vertices.contains(&v) {
                    violations.push(Violation::MissingVertex { edge: e, vertex: v });
                }
            }
        }
        let mut seen_darts = BTreeSet::new();
        let mut structurally_sound = true;
        for (&f, darts) in &self.faces {
            if darts.is_empty() {
                violations.push(Violation::EmptyFace(f));
                continue;
            }
            for d in darts {
                if !self.edges.contains_key(&d.edge) {
                    violations.push(Violation::MissingEdge { face: f, edge: d.edge });
                    structurally_sound = false;
                }
                if !seen_darts.insert(d.id) {
                    violations.push(Violation::DuplicateDart(d.id));
                }
            }
            if !structurally_sound {
                continue;
            }
            for i in 0..darts.len() {
                let next = &darts[(i + 1) % darts.len()];
                if self.dart_finish(&darts[i]) != self.dart_start(next) {
                    violations.push(Violation::BrokenTrail { face: f, pos: i });
                }
            }
        }
        let degrees = self.edge_degrees();
        let mut used_vertices = BTreeSet::new();
        for (&e, x) in &self.edges {
            if degrees.get(&e).copied().unwrap_or(0) == 0 {
                violations.push(Violation::EdgeWithoutFace(e));
            }
            used_vertices.insert(x.tail);
            used_vertices.insert(x.head);
        }
        for &v in &self.vertices {
            if !used_vertices.contains(&v) {
                violations.push(Violation::IsolatedVertex(v));
            }
        }
        let mut edges_by_degree: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for (e, d) in degrees {
            edges_by_degree.entry(d).or_default().push(e);
        }
        ValidationReport {
            simplicial: structurally_sound && self.is_simplicial(),
            violations,
            edges_by_degree,
        }
    }

    /// Deletes edges without faces and vertices without edges.
    pub fn repair(&mut self) -> Vec<Repair> {
        let mut repairs = Vec::new();
        let empty: Vec<FaceId> = self
            .faces
            .iter()
            .filter(|(_, d)| d.is_empty())
            .map(|(&f, _)| f)
            .collect();
        for f in empty {
            self.faces.remove(&f);
            repairs.push(Repair::DeletedFace(f));
        }
        let degrees = self.edge_degrees();
        let dead: Vec<EdgeId> = degrees.iter().filter(|(_, &d)| d == 0).map(|(&e, _)| e).collect();
        for e in dead {
            self.edges.remove(&e);
            repairs.push(Repair::DeletedEdge(e));
        }
        let mut used = BTreeSet::new();
        for x in self.edges.values() {
            used.insert(x.tail);
            used.insert(x.head);
        }
        let lonely: Vec<VertexId> = self.vertices.iter().filter(|v| !used.contains(v)).copied().collect();
        for v in lonely {
            self.vertices.remove(&v);
            repairs.push(Repair::DeletedVertex(v));
        }
        repairs
    }

    // ----- cell operations --------------------------------------------------------------

    /// Identifies the endpoints of `e` into a fresh vertex and deletes `e` from
    /// every face trail.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Edited, ComplexError> {
        let edge = self.edge(e).ok_or(ComplexError::UnknownEdge(e))?;
        if edge.is_loop() {
            return Err(ComplexError::LoopContraction(e));
        }
        let mut c = self.clone();
        let merged = c.add_vertex();
        c.vertices.remove(&edge.tail);
        c.vertices.remove(&edge.head);
        c.edges.remove(&e);
        for x in c.edges.values_mut() {
            if x.tail == edge.tail || x.tail == edge.head {
                x.tail = merged;
            }
            if x.head == edge.tail || x.head == edge.head {
                x.head = merged;
            }
        }
        let mut map = CellMap::default();
        for darts in c.faces.values_mut() {
            darts.retain(|d| d.edge != e);
        }
        map.vertices.insert(edge.tail, merged);
        map.vertices.insert(edge.head, merged);
        map.repairs = c.repair();
        for r in &map.repairs {
            if let Repair::DeletedFace(f) = r {
                map.removed_faces.push(*f);
            }
        }
        Ok(Edited { complex: c, map })
    }

    /// Contracts a face of size two onto a single edge. The surviving edge is
    /// the lower of the two ids.
    pub fn contract_bigon(&self, f: FaceId) -> Result<Edited, ComplexError> {
        let darts = self.face(f).ok_or(ComplexError::UnknownFace(f))?;
        if darts.len() != 2 || darts[0].edge == darts[1].edge {
            return Err(ComplexError::NotBigon(f));
        }
        let keep = darts[0].edge.min(darts[1].edge);
        self.contract_bigon_keeping(f, keep)
    }

    /// As [`TwoComplex::contract_bigon`] with an explicit surviving edge.
    pub fn contract_bigon_keeping(&self, f: FaceId, keep: EdgeId) -> Result<Edited, ComplexError> {
        let darts = self.face(f).ok_or(ComplexError::UnknownFace(f))?;
        if darts.len() != 2 || darts[0].edge == darts[1].edge {
            return Err(ComplexError::NotBigon(f));
        }
        let gone = if darts[0].edge == keep {
            darts[1].edge
        } else if darts[1].edge == keep {
            darts[0].edge
        } else {
            return Err(ComplexError::NotBigon(f));
        };
        let ke = self.edges[&keep];
        let ge = self.edges[&gone];
        let same_orientation = ke.tail == ge.tail && ke.head == ge.head;
        let mut c = self.clone();
        c.faces.remove(&f);
        c.edges.remove(&gone);
        for ds in c.faces.values_mut() {
            for d in ds.iter_mut() {
                if d.edge == gone {
                    d.edge = keep;
                    if !same_orientation {
                        d.forward = !d.forward;
                    }
                }
            }
        }
        let mut map = CellMap::default();
        map.edges.insert(gone, keep);
        map.removed_faces.push(f);
        map.repairs = c.repair();
        Ok(Edited { complex: c, map })
    }

    /// Replaces `v` by one vertex per connected component of its link graph.
    pub fn split_vertex(&self, v: VertexId) -> Result<Edited, ComplexError> {
        if !self.has_vertex(v) {
            return Err(ComplexError::UnknownVertex(v));
        }
        let link = crate::link::link_at(self, v);
        let comps = link.graph.components();
        if comps.len() <= 1 {
            return Err(ComplexError::LinkConnected(v));
        }
        let mut c = self.clone();
        // component containing the smallest node keeps the id `v`
        let mut targets = Vec::with_capacity(comps.len());
        for (i, _) in comps.iter().enumerate() {
            targets.push(if i == 0 { v } else { c.add_vertex() });
        }
        let mut map = CellMap::default();
        for (ci, comp) in comps.iter().enumerate() {
            for &node in comp {
                let (e, end) = link.nodes[node];
                let x = c.edges.get_mut(&e).expect("link node edge exists");
                if end == 0 {
                    x.tail = targets[ci];
                } else {
                    x.head = targets[ci];
                }
            }
            if ci > 0 {
                map.split_from.insert(targets[ci], v);
            }
        }
        Ok(Edited { complex: c, map })
    }
}

/// Derived incidence tables: darts per edge, corners per vertex.
#[derive(Clone, Debug)]
pub struct Incidence {
    pub darts_on_edge: BTreeMap<EdgeId, Vec<DartPos>>,
    pub dart_pos: BTreeMap<DartId, DartPos>,
    /// Corners at each vertex: the corner after position `pos` of `face`
    /// (between dart `pos` and dart `pos + 1`).
    pub corners_at: BTreeMap<VertexId, Vec<DartPos>>,
    pub edges_at: BTreeMap<VertexId, Vec<(EdgeId, u8)>>,
}

impl Incidence {
    pub fn build(c: &TwoComplex) -> Self {
        let mut darts_on_edge: BTreeMap<EdgeId, Vec<DartPos>> =
            c.edges.keys().map(|&e| (e, Vec::new())).collect();
        let mut dart_pos = BTreeMap::new();
        let mut corners_at: BTreeMap<VertexId, Vec<DartPos>> =
            c.vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut edges_at: BTreeMap<VertexId, Vec<(EdgeId, u8)>> =
            c.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, x) in &c.edges {
            edges_at.entry(x.tail).or_default().push((e, 0));
            edges_at.entry(x.head).or_default().push((e, 1));
        }
        for (&f, darts) in &c.faces {
            for (pos, d) in darts.iter().enumerate() {
                let p = DartPos { face: f, pos };
                darts_on_edge.entry(d.edge).or_default().push(p);
                dart_pos.insert(d.id, p);
                let corner_vertex = c.dart_finish(d);
                corners_at.entry(corner_vertex).or_default().push(p);
            }
        }
        Incidence { darts_on_edge, dart_pos, corners_at, edges_at }
    }

    pub fn degree(&self, e: EdgeId) -> usize {
        self.darts_on_edge.get(&e).map_or(0, |v| v.len())
    }
}
