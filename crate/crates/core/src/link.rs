//! Link graphs of vertices and the graph classes that drive stretching.
//!
//! The link at `v` has one node per edge-end at `v` (a loop contributes both of
//! its ends) and one arc per face corner at `v`. The half-edge of an arc at node
//! `(e, end)` corresponds to the dart of the corner's face that runs on `e`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{DartPos, Incidence, TwoComplex};
use crate::error::LinkError;
use crate::graph::Multigraph;
use crate::ids::{DartId, EdgeId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub vertex: VertexId,
    pub graph: Multigraph,
    /// Node → edge-end it stands for.
    pub nodes: Vec<(EdgeId, u8)>,
    /// Arc → the corner (face, position of the dart ending at the vertex).
    pub arc_corner: Vec<DartPos>,
    /// Half-edge → dart on the node's edge.
    pub half_dart: Vec<DartId>,
}

impl LinkGraph {
    pub fn node_of(&self, e: EdgeId, end: u8) -> Option<usize> {
        self.nodes.binary_search(&(e, end)).ok()
    }

    /// First node belonging to edge `e` (either end).
    pub fn node_of_edge(&self, e: EdgeId) -> Option<usize> {
        self.node_of(e, 0).or_else(|| self.node_of(e, 1))
    }

    pub fn half_of_dart(&self, node: usize, d: DartId) -> Option<usize> {
        self.graph.halves(node).iter().copied().find(|&h| self.half_dart[h] == d)
    }

    pub fn classify(&self) -> Classification {
        classify(&self.graph)
    }
}

/// Link graph at `v`. Nodes are ordered by `(edge, end)`; arcs by corner.
pub fn link_at(c: &TwoComplex, v: VertexId) -> LinkGraph {
    link_at_indexed(c, &c.index(), v)
}

pub fn link_at_indexed(c: &TwoComplex, idx: &Incidence, v: VertexId) -> LinkGraph {
    let mut nodes: Vec<(EdgeId, u8)> = idx.edges_at.get(&v).cloned().unwrap_or_default();
    nodes.sort_unstable();
    let mut graph = Multigraph::new(nodes.len());
    let mut arc_corner = Vec::new();
    let mut half_dart = Vec::new();
    let node = |e: EdgeId, end: u8| nodes.binary_search(&(e, end)).expect("edge-end at vertex");
    for &p in idx.corners_at.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
        let darts = c.face(p.face).expect("face exists");
        let d_in = darts[p.pos];
        let d_out = darts[(p.pos + 1) % darts.len()];
        let a = node(d_in.edge, d_in.finish_end());
        let b = node(d_out.edge, d_out.start_end());
        graph.add_arc(a, b);
        arc_corner.push(p);
        half_dart.push(d_in.id);
        half_dart.push(d_out.id);
    }
    LinkGraph { vertex: v, graph, nodes, arc_corner, half_dart }
}

/// Links at every vertex, sharing one incidence table.
pub fn all_links(c: &TwoComplex) -> BTreeMap<VertexId, LinkGraph> {
    let idx = c.index();
    c.vertices().map(|v| (v, link_at_indexed(c, &idx, v))).collect()
}

// ----- classification ------------------------------------------------------------------

/// Two branch nodes joined by internally disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelStructure {
    pub a: usize,
    pub b: usize,
    /// Each path as the sequence of half-edges walked from `a` to `b`.
    pub paths: Vec<Vec<usize>>,
}

impl ParallelStructure {
    /// For each half-edge at `a`, the half-edge at `b` ending the same path.
    pub fn bijection(&self) -> BTreeMap<usize, usize> {
        self.paths
            .iter()
            .map(|p| (p[0], Multigraph::twin(*p.last().expect("non-empty path"))))
            .collect()
    }
}

/// The structure with the given branch nodes, if `g` is a parallel graph
/// between them (a path counts as a parallel graph with one path, a cycle as
/// one with two).
pub fn parallel_between(g: &Multigraph, a: usize, b: usize) -> Option<ParallelStructure> {
    if a == b || !g.is_connected() {
        return None;
    }
    if (0..g.node_count()).any(|u| u != a && u != b && g.degree(u) != 2) {
        return None;
    }
    if g.degree(a) != g.degree(b) || g.degree(a) == 0 {
        return None;
    }
    let mut paths = Vec::new();
    let mut used_arcs = vec![false; g.arc_count()];
    for &h0 in g.halves(a) {
        if used_arcs[h0 >> 1] {
            // a direct a-a loop would be seen twice
            return None;
        }
        let mut path = vec![h0];
        used_arcs[h0 >> 1] = true;
        let mut cur = h0;
        loop {
            let node = g.half_target(cur);
            if node == b {
                break;
            }
            if node == a {
                return None;
            }
            let next = g.halves(node).iter().copied().find(|&x| x != Multigraph::twin(cur))?;
            if used_arcs[next >> 1] {
                return None;
            }
            used_arcs[next >> 1] = true;
            path.push(next);
            cur = next;
        }
        paths.push(path);
    }
    if used_arcs.iter().any(|&u| !u) {
        return None;
    }
    Some(ParallelStructure { a, b, paths })
}

/// Parallel structure with branch nodes of degree at least three, or of a
/// path (branch nodes are its ends).
pub fn parallel_structure(g: &Multigraph) -> Option<ParallelStructure> {
    let special: Vec<usize> = (0..g.node_count()).filter(|&u| g.degree(u) != 2).collect();
    match special.as_slice() {
        [a, b] => parallel_between(g, *a, *b),
        [] if g.node_count() >= 2 => {
            // a cycle: branch nodes are node 0 and the node half way round
            let comps = g.components();
            if comps.len() != 1 {
                return None;
            }
            let half = g.node_count() / 2;
            let mut cur = g.halves(0)[0];
            for _ in 1..half {
                let n = g.half_target(cur);
                cur = g.halves(n).iter().copied().find(|&x| x != Multigraph::twin(cur))?;
            }
            parallel_between(g, 0, g.half_target(cur))
        }
        _ => None,
    }
}

pub fn is_tree(g: &Multigraph) -> bool {
    g.is_connected() && g.arc_count() + 1 == g.node_count()
}

pub fn is_path(g: &Multigraph) -> bool {
    is_tree(g) && g.max_degree() <= 2
}

pub fn is_cycle(g: &Multigraph) -> bool {
    g.node_count() >= 1 && g.is_connected() && (0..g.node_count()).all(|u| g.degree(u) == 2)
}

/// Subdivision of a 3-star, a path, or a cycle with an attached path.
pub fn is_free_graph(g: &Multigraph) -> bool {
    if !g.is_connected() || g.node_count() == 0 || g.max_degree() > 3 {
        return false;
    }
    let threes = (0..g.node_count()).filter(|&u| g.degree(u) == 3).count();
    if g.arc_count() + 1 == g.node_count() {
        threes <= 1
    } else if g.arc_count() == g.node_count() {
        threes == 1
    } else {
        false
    }
}

pub fn is_subdivision_of_3connected(g: &Multigraph) -> bool {
    if !g.is_connected() || (0..g.node_count()).any(|u| g.degree(u) < 2) {
        return false;
    }
    let (s, _) = g.suppress_degree_two();
    s.is_3connected()
}

/// The unique cut node if `g` is a star of parallel graphs: connected, exactly
/// one cut node, at least two blocks, and every block is a parallel graph
/// having the cut node as a branch node (single arcs and cycles qualify).
pub fn star_of_parallel_center(g: &Multigraph) -> Option<usize> {
    if !g.is_connected() {
        return None;
    }
    let cuts = g.cut_nodes();
    let c = match cuts.as_slice() {
        [c] => *c,
        _ => {
            let thick: Vec<usize> = cuts.iter().copied().filter(|&u| g.degree(u) > 2).collect();
            match thick.as_slice() {
                [c] => *c,
                _ => return None,
            }
        }
    };
    let branches = branches_at(g, c).ok()?;
    if branches.len() < 2 {
        return None;
    }
    for b in &branches {
        let (sub, back) = g.arc_subgraph(&b.arcs);
        let local_c = back.iter().position(|&x| x == c)?;
        if !block_is_parallel_at(&sub, local_c) {
            return None;
        }
    }
    Some(c)
}

fn block_is_parallel_at(sub: &Multigraph, c: usize) -> bool {
    if sub.arc_count() == 1 {
        return !sub.has_loops();
    }
    if is_cycle(sub) {
        return true;
    }
    (0..sub.node_count()).any(|b| b != c && parallel_between(sub, c, b).is_some())
}

/// Center of a para-star: a parallel graph (center = a branch node of maximum
/// degree) or a star of parallel graphs (center = its cut node).
pub fn para_star_center(g: &Multigraph) -> Option<usize> {
    if let Some(c) = star_of_parallel_center(g) {
        return Some(c);
    }
    parallel_structure(g).map(|p| p.a)
}

/// Is `g` a para-star whose gluing node is `center`?
pub fn is_para_star_at(g: &Multigraph, center: usize) -> bool {
    if star_of_parallel_center(g) == Some(center) {
        return true;
    }
    if let Some(p) = parallel_structure(g) {
        if p.a == center || p.b == center {
            return true;
        }
        // cycles: any node is a branch node
        if is_cycle(g) {
            return true;
        }
    }
    // paths: an end node
    is_path(g) && g.degree(center) <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphClass {
    Path,
    Cycle,
    FreeGraph,
    ParallelGraph { branch: (usize, usize), paths: usize },
    Subdivision3Connected,
    StarOfParallelGraphs { cut: usize },
    TwoConnectedOther,
    Disconnected,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: GraphClass,
    pub is_parallel: bool,
    pub is_free: bool,
    pub is_2connected: bool,
    pub is_sub3: bool,
    pub para_star_center: Option<usize>,
    pub star_of_parallel_center: Option<usize>,
}

impl Classification {
    /// Subdivision of a 3-connected graph, parallel graph, or free-graph.
    pub fn is_almost_3connected(&self) -> bool {
        self.is_sub3 || self.is_parallel || self.is_free
    }

    pub fn is_para_star(&self) -> bool {
        self.para_star_center.is_some()
    }

    pub fn is_star_of_parallel(&self) -> bool {
        self.star_of_parallel_center.is_some()
    }

    /// Parallel graph whose branch nodes have degree at least three.
    pub fn is_thick_parallel(&self) -> bool {
        matches!(self.class, GraphClass::ParallelGraph { .. })
    }
}

pub fn classify(g: &Multigraph) -> Classification {
    let connected = g.is_connected();
    let is_2connected = g.is_2connected();
    let parallel = if connected { parallel_structure(g) } else { None };
    let is_free = is_free_graph(g);
    let is_sub3 = connected && is_subdivision_of_3connected(g);
    let star = star_of_parallel_center(g);
    let class = if !connected {
        GraphClass::Disconnected
    } else if is_path(g) {
        GraphClass::Path
    } else if is_cycle(g) {
        GraphClass::Cycle
    } else if is_free {
        GraphClass::FreeGraph
    } else if let Some(p) = &parallel {
        GraphClass::ParallelGraph { branch: (p.a, p.b), paths: p.paths.len() }
    } else if is_sub3 {
        GraphClass::Subdivision3Connected
    } else if let Some(c) = star {
        GraphClass::StarOfParallelGraphs { cut: c }
    } else if is_2connected {
        GraphClass::TwoConnectedOther
    } else {
        GraphClass::Other
    };
    Classification {
        class,
        is_parallel: parallel.is_some(),
        is_free,
        is_2connected,
        is_sub3,
        para_star_center: if connected { para_star_center(g) } else { None },
        star_of_parallel_center: star,
    }
}

// ----- separators and branches ---------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSeparator {
    pub a: usize,
    pub b: usize,
    pub components: Vec<Vec<usize>>,
    pub proper: bool,
}

/// All 2-separators of a 2-connected graph by brute-force pair scan, ordered by
/// `(a, b)` with `a < b`.
pub fn two_separators(g: &Multigraph) -> Result<Vec<TwoSeparator>, LinkError> {
    if !g.is_2connected() {
        return Err(LinkError::Not2Connected);
    }
    let n = g.node_count();
    let mut out = Vec::new();
    let mut removed = vec![false; n];
    for a in 0..n {
        removed[a] = true;
        for b in (a + 1)..n {
            removed[b] = true;
            let components = g.components_avoiding(&removed);
            if components.len() >= 2 {
                let proper = !(components.len() == 2
                    && components.iter().any(|c| induced_is_path(g, c))
                    && !g.has_arc_between(a, b));
                out.push(TwoSeparator { a, b, components, proper });
            }
            removed[b] = false;
        }
        removed[a] = false;
    }
    Ok(out)
}

fn induced_is_path(g: &Multigraph, nodes: &[usize]) -> bool {
    let inside = |u: usize| nodes.binary_search(&u).is_ok();
    let mut arcs = 0;
    for &u in nodes {
        let d = g.neighbors(u).filter(|&w| inside(w)).count();
        if d > 2 {
            return false;
        }
        arcs += d;
    }
    // connected by construction; a tree has |V| - 1 arcs
    arcs / 2 + 1 == nodes.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub cut: usize,
    /// Nodes of the branch including the cut node, sorted.
    pub nodes: Vec<usize>,
    /// Arcs of the branch, sorted.
    pub arcs: Vec<usize>,
}

/// Branches at a cut node: components of `G − cut` together with the cut node.
pub fn branches_at(g: &Multigraph, cut: usize) -> Result<Vec<Branch>, LinkError> {
    let mut removed = vec![false; g.node_count()];
    removed[cut] = true;
    let comps = g.components_avoiding(&removed);
    if comps.len() < 2 || !g.is_connected() {
        return Err(LinkError::NotCutVertex(cut));
    }
    let mut out = Vec::new();
    for comp in comps {
        let mut arcs: Vec<usize> = (0..g.arc_count())
            .filter(|&a| {
                let (u, v) = g.arc(a);
                comp.binary_search(&u).is_ok() || comp.binary_search(&v).is_ok()
            })
            .collect();
        arcs.sort_unstable();
        let mut nodes = comp;
        nodes.push(cut);
        nodes.sort_unstable();
        out.push(Branch { cut, nodes, arcs });
    }
    Ok(out)
}

/// Degrees above two, largest first.
pub fn degree_sequence_abbrev(g: &Multigraph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.node_count()).map(|u| g.degree(u)).filter(|&d| d > 2).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Abbreviated degree-sequences of all links, largest first.
pub fn degree_parameter_complex(c: &TwoComplex) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = all_links(c).values().map(|l| degree_sequence_abbrev(&l.graph)).collect();
    all.sort_unstable_by(|a, b| b.cmp(a));
    all
}

/// Σ (deg − 2) over the nodes of a graph.
pub fn graph_degree_parameter(g: &Multigraph) -> i64 {
    (0..g.node_count()).map(|u| g.degree(u) as i64 - 2).sum()
}

/// Largest degree of a cut node over all links; 0 when no link has one.
pub fn cutvertex_degree(c: &TwoComplex) -> Result<usize, LinkError> {
    let mut best = 0;
    for (v, l) in all_links(c) {
        if !l.graph.is_connected() {
            return Err(LinkError::DisconnectedLink(v));
        }
        for u in l.graph.cut_nodes() {
            best = best.max(l.graph.degree(u));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::named::*;

    #[test]
    fn tetrahedron_links_are_triangles() {
        let t = generators::tetrahedron();
        for v in t.vertices() {
            let l = link_at(&t, v);
            assert_eq!((l.graph.node_count(), l.graph.arc_count()), (3, 3));
            assert_eq!(l.classify().class, GraphClass::Cycle);
        }
    }

    #[test]
    fn cone_apex_link_is_k5() {
        let c = generators::cone_over_named("K5").unwrap();
        let l = link_at(&c, generators::CONE_APEX);
        assert_eq!((l.graph.node_count(), l.graph.arc_count()), (5, 10));
        assert!(l.graph.is_3connected());
        assert_eq!(degree_sequence_abbrev(&l.graph), vec![4, 4, 4, 4, 4]);
    }

    #[test]
    fn deltaplus3_center_link_is_parallel() {
        let d = generators::delta_plus(3);
        let l = link_at(&d, generators::DELTA_CENTER);
        match l.classify().class {
            GraphClass::ParallelGraph { paths, .. } => assert_eq!(paths, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(degree_sequence_abbrev(&l.graph), vec![3, 3]);
    }

    #[test]
    fn five_path_parallel_graph() {
        let g = parallel(&[1, 2, 1, 3, 1]);
        let c = classify(&g);
        assert_eq!(c.class, GraphClass::ParallelGraph { branch: (0, 1), paths: 5 });
        assert_eq!((g.degree(0), g.degree(1)), (5, 5));
        assert!(c.is_almost_3connected());
    }

    #[test]
    fn subdivided_three_star_is_free() {
        let g = Multigraph::from_arcs(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        assert_eq!(classify(&g).class, GraphClass::FreeGraph);
        let lollipop = Multigraph::from_arcs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)]);
        assert_eq!(classify(&lollipop).class, GraphClass::FreeGraph);
    }

    #[test]
    fn k4_is_subdivision_of_3connected() {
        assert_eq!(classify(&complete(4)).class, GraphClass::Subdivision3Connected);
        assert!(!classify(&complete(4)).is_parallel);
    }

    #[test]
    fn paths_are_parallel_and_free() {
        let c = classify(&path(4));
        assert_eq!(c.class, GraphClass::Path);
        assert!(c.is_parallel && c.is_free);
    }

    #[test]
    fn cycle_is_parallel_when_queried() {
        let c = classify(&cycle(5));
        assert_eq!(c.class, GraphClass::Cycle);
        assert!(c.is_parallel);
        assert!(!c.is_free);
    }

    #[test]
    fn two_separator_examples() {
        assert!(two_separators(&complete(4)).unwrap().is_empty());
        let c4 = two_separators(&cycle(4)).unwrap();
        let pairs: Vec<(usize, usize)> = c4.iter().map(|s| (s.a, s.b)).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 3)]);
        assert!(c4.iter().all(|s| !s.proper));
        // two triangles sharing a, b plus the arc ab
        let g = Multigraph::from_arcs(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]);
        let seps = two_separators(&g).unwrap();
        assert_eq!(seps.len(), 1);
        assert_eq!((seps[0].a, seps[0].b), (0, 1));
        assert_eq!(seps[0].components, vec![vec![2], vec![3]]);
        assert!(seps[0].proper);
        assert_eq!(two_separators(&path(3)), Err(LinkError::Not2Connected));
    }

    #[test]
    fn branches_examples() {
        let bowtie = Multigraph::from_arcs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        assert_eq!(branches_at(&bowtie, 0).unwrap().len(), 2);
        let star = Multigraph::from_arcs(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        let bs = branches_at(&star, 0).unwrap();
        assert_eq!(bs.len(), 3);
        assert!(bs.iter().all(|b| b.arcs.len() == 2));
        assert_eq!(branches_at(&bowtie, 1), Err(LinkError::NotCutVertex(1)));
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(degree_sequence_abbrev(&complete(5)), vec![4, 4, 4, 4, 4]);
        assert!(degree_sequence_abbrev(&path(6)).is_empty());
    }

    #[test]
    fn star_of_parallel_graphs() {
        // two thetas glued at node 0
        let mut g = parallel(&[1, 1, 1]);
        let x = g.add_node();
        let y = g.add_node();
        let z = g.add_node();
        g.add_arc(0, x);
        g.add_arc(x, y);
        g.add_arc(0, z);
        g.add_arc(z, y);
        let c = classify(&g);
        assert_eq!(c.class, GraphClass::StarOfParallelGraphs { cut: 0 });
        assert_eq!(c.para_star_center, Some(0));
        assert!(is_para_star_at(&g, 0));
        assert!(!is_para_star_at(&complete(4), 0));
    }

    #[test]
    fn cutvertex_degree_examples() {
        assert_eq!(cutvertex_degree(&generators::tetrahedron()), Ok(0));
        // base vertices of the cone have a 4-star as link
        assert_eq!(cutvertex_degree(&generators::cone_over_named("K5").unwrap()), Ok(4));
        assert_eq!(cutvertex_degree(&generators::two_tetrahedra_at_edge()), Ok(4));
    }

    #[test]
    fn link_arcs_match_faces_at_vertex() {
        let c = generators::octahedron();
        let idx = c.index();
        for v in c.vertices() {
            let l = link_at_indexed(&c, &idx, v);
            let faces_at_v = c.faces().filter(|(f, _)| c.face_vertices(*f).contains(&v)).count();
            assert_eq!(l.graph.arc_count(), faces_at_v);
            assert_eq!(l.graph.node_count(), idx.edges_at[&v].len());
        }
    }
}
