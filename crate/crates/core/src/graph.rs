//! Undirected multigraphs with explicit half-edges.
//!
//! Arc `a` owns the half-edges `2a` (at its first node) and `2a + 1` (at its
//! second node). Rotations are cyclic orders of half-edges.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    arcs: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { arcs: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut g = Multigraph::new(n);
        for &(u, v) in arcs {
            g.add_arc(u, v);
        }
        g
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> usize {
        let a = self.arcs.len();
        self.arcs.push((u, v));
        self.adj[u].push(2 * a);
        self.adj[v].push(2 * a + 1);
        a
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, a: usize) -> (usize, usize) {
        self.arcs[a]
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    #[inline]
    pub fn half_node(&self, h: usize) -> usize {
        let (u, v) = self.arcs[h >> 1];
        if h & 1 == 0 {
            u
        } else {
            v
        }
    }

    #[inline]
    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    /// Node at the far end of half-edge `h`.
    pub fn half_target(&self, h: usize) -> usize {
        self.half_node(h ^ 1)
    }

    pub fn halves(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn has_loops(&self) -> bool {
        self.arcs.iter().any(|&(u, v)| u == v)
    }

    pub fn has_parallel_arcs(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.arcs.iter().any(|&(u, v)| u != v && !seen.insert((u.min(v), u.max(v))))
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loops() && !self.has_parallel_arcs()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(move |&h| self.half_target(h))
    }

    pub fn has_arc_between(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).any(|w| w == v)
    }

    /// Connected components ignoring nodes with `removed[u]`. Each component is
    /// sorted; components are ordered by smallest node.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || removed.get(s).copied().unwrap_or(false) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for w in self.neighbors(u) {
                    if !seen[w] && !removed.get(w).copied().unwrap_or(false) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&[])
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Lowpoint DFS shared by cut-node and block computations.
    fn dfs_blocks(&self) -> (Vec<bool>, Vec<Vec<usize>>) {
        let n = self.node_count();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut arc_stack: Vec<usize> = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // (node, arc used to enter, next index into adjacency)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (u, parent_arc, ref mut i)) = stack.last_mut() {
                if *i < self.adj[u].len() {
                    let h = self.adj[u][*i];
                    *i += 1;
                    let a = h >> 1;
                    if a == parent_arc {
                        continue;
                    }
                    let w = self.half_target(h);
                    if w == u {
                        // loops form their own block
                        if !blocks.iter().any(|b| b.len() == 1 && b[0] == a) {
                            blocks.push(vec![a]);
                        }
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        arc_stack.push(a);
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, a, 0));
                    } else if disc[w] < disc[u] {
                        arc_stack.push(a);
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] >= disc[p] {
                            if p != root {
                                is_cut[p] = true;
                            }
                            let mut block = Vec::new();
                            while let Some(a) = arc_stack.pop() {
                                block.push(a);
                                if a == parent_arc {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (is_cut, blocks)
    }

    /// Cut nodes in increasing order.
    pub fn cut_nodes(&self) -> Vec<usize> {
        let (is_cut, _) = self.dfs_blocks();
        (0..self.node_count()).filter(|&u| is_cut[u]).collect()
    }

    /// Arc sets of the blocks (biconnected components); loops are singleton blocks.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let (_, mut blocks) = self.dfs_blocks();
        blocks.sort();
        blocks
    }

    /// Connected, without cut nodes, and with at least two arcs
    /// (a single arc or a single node does not count).
    pub fn is_2connected(&self) -> bool {
        self.node_count() >= 2 && self.arc_count() >= 2 && self.is_connected() && self.cut_nodes().is_empty()
    }

    /// 3-connectivity of a simple graph on at least four nodes.
    pub fn is_3connected(&self) -> bool {
        let n = self.node_count();
        if n < 4 || !self.is_simple() || !self.is_connected() {
            return false;
        }
        if self.adj.iter().any(|a| a.len() < 3) {
            return false;
        }
        for x in 0..n {
            let mut removed = vec![false; n];
            removed[x] = true;
            for y in (x + 1)..n {
                removed[y] = true;
                if self.components_avoiding(&removed).len() > 1 {
                    return false;
                }
                removed[y] = false;
            }
        }
        true
    }

    /// Subgraph on the given arcs; returns the graph and the map from new node
    /// index to old node index.
    pub fn arc_subgraph(&self, arcs: &[usize]) -> (Multigraph, Vec<usize>) {
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut back = Vec::new();
        let mut g = Multigraph::new(0);
        for &a in arcs {
            let (u, v) = self.arcs[a];
            for x in [u, v] {
                if let alloc::collections::btree_map::Entry::Vacant(e) = index.entry(x) {
                    e.insert(g.add_node());
                    back.push(x);
                }
            }
            g.add_arc(index[&u], index[&v]);
        }
        (g, back)
    }

    /// Replaces every maximal path through degree-2 nodes by one arc. Cycles
    /// consisting only of degree-2 nodes collapse to a loop on their smallest node.
    /// Returns the reduced graph and the surviving (branch) nodes.
    pub fn suppress_degree_two(&self) -> (Multigraph, Vec<usize>) {
        let n = self.node_count();
        let keep: Vec<bool> = (0..n).map(|u| self.degree(u) != 2).collect();
        let mut keep = keep;
        // pure cycles: keep their minimum node
        for comp in self.components() {
            if comp.iter().all(|&u| self.degree(u) == 2) {
                keep[comp[0]] = true;
            }
        }
        let branch: Vec<usize> = (0..n).filter(|&u| keep[u]).collect();
        let pos: BTreeMap<usize, usize> = branch.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut g = Multigraph::new(branch.len());
        let mut used = vec![false; self.arc_count()];
        for &s in &branch {
            for &h in &self.adj[s] {
                if used[h >> 1] {
                    continue;
                }
                let mut cur = h;
                used[cur >> 1] = true;
                let mut node = self.half_target(cur);
                while !keep[node] {
                    let next = self.adj[node].iter().copied().find(|&x| x != Self::twin(cur)).unwrap_or(Self::twin(cur));
                    cur = next;
                    used[cur >> 1] = true;
                    node = self.half_target(cur);
                }
                g.add_arc(pos[&s], pos[&node]);
            }
        }
        (g, branch)
    }
}

#[cfg(test)]
pub(crate) mod named {
    use super::Multigraph;
    use alloc::vec::Vec;

    pub fn complete(n: usize) -> Multigraph {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                arcs.push((i, j));
            }
        }
        Multigraph::from_arcs(n, &arcs)
    }

    pub fn cycle(n: usize) -> Multigraph {
        let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_arcs(n, &arcs)
    }

    pub fn path(n: usize) -> Multigraph {
        let arcs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Multigraph::from_arcs(n, &arcs)
    }

    /// Two branch nodes 0 and 1 joined by `k` paths with the given interior lengths.
    pub fn parallel(interiors: &[usize]) -> Multigraph {
        let mut g = Multigraph::new(2);
        for &len in interiors {
            let mut prev = 0;
            for _ in 0..len {
                let x = g.add_node();
                g.add_arc(prev, x);
                prev = x;
            }
            g.add_arc(prev, 1);
        }
        g
    }

    pub fn k33() -> Multigraph {
        let mut arcs = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                arcs.push((i, j));
            }
        }
        Multigraph::from_arcs(6, &arcs)
    }

    pub fn octahedron() -> Multigraph {
        let mut arcs = Vec::new();
        for i in 0..6 {
            for j in (i + 1)..6 {
                // K6 minus the perfect matching {i, i + 3}
                if j != i + 3 {
                    arcs.push((i, j));
                }
            }
        }
        Multigraph::from_arcs(6, &arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn cut_nodes_of_bowtie() {
        let g = Multigraph::from_arcs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        assert_eq!(g.cut_nodes(), vec![0]);
        assert_eq!(g.blocks().len(), 2);
        assert!(!g.is_2connected());
    }

    #[test]
    fn path_blocks_are_arcs() {
        let g = path(4);
        assert_eq!(g.cut_nodes(), vec![1, 2]);
        assert_eq!(g.blocks().len(), 3);
    }

    #[test]
    fn connectivity_levels() {
        assert!(complete(4).is_3connected());
        assert!(complete(5).is_3connected());
        assert!(!cycle(5).is_3connected());
        assert!(cycle(5).is_2connected());
        assert!(octahedron().is_3connected());
        assert_eq!(octahedron().arc_count(), 12);
        assert!(k33().is_3connected());
    }

    #[test]
    fn suppression_of_subdivided_k4() {
        let mut g = complete(4);
        // subdivide arc 0
        let x = g.add_node();
        let (u, v) = g.arc(0);
        let mut h = Multigraph::new(g.node_count());
        for a in 1..g.arc_count() {
            let (p, q) = g.arc(a);
            h.add_arc(p, q);
        }
        h.add_arc(u, x);
        h.add_arc(x, v);
        let (s, branch) = h.suppress_degree_two();
        assert_eq!(branch, vec![0, 1, 2, 3]);
        assert!(s.is_3connected());
    }

    #[test]
    fn suppression_of_cycle_is_a_loop() {
        let (s, branch) = cycle(4).suppress_degree_two();
        assert_eq!(branch, vec![0]);
        assert!(s.has_loops());
    }

    #[test]
    fn parallel_graph_suppresses_to_multi_arc() {
        let (s, _) = parallel(&[1, 1, 2]).suppress_degree_two();
        assert_eq!(s.node_count(), 2);
        assert!(s.has_parallel_arcs());
    }
}
