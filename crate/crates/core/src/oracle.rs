//! Exhaustive ground truth for small complexes.
//!
//! Rotators are enumerated only on edges of face-degree three or more (smaller
//! edges have a unique rotator), edges in id order, each rotator in canonical
//! form with its smallest dart first. A vertex is tested as soon as the last
//! of its high-degree edges has been assigned; the first witness found is the
//! lexicographically smallest planar rotation system.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::TwoComplex;
use crate::graph::Multigraph;
use crate::ids::{DartId, EdgeId};
use crate::link::{all_links, LinkGraph};
use crate::planarity::{brute_force_rotations, cyclic_orders, GraphRotation, LoopPairing};
use crate::rotation::{planar_at, RotationSystem};

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome<W> {
    Exists(W),
    NotExists,
    CapExceeded,
}

impl<W> OracleOutcome<W> {
    pub fn exists(&self) -> Option<bool> {
        match self {
            OracleOutcome::Exists(_) => Some(true),
            OracleOutcome::NotExists => Some(false),
            OracleOutcome::CapExceeded => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Π over edges of (face-degree − 1)!, saturating.
    pub total: u128,
    /// Induced link rotations tested.
    pub checked: u64,
}

/// Number of rotation systems: Π (deg − 1)! over edges of positive degree.
pub fn rotation_system_count(c: &TwoComplex) -> u128 {
    let mut total: u128 = 1;
    for (_, d) in c.edge_degrees() {
        for k in 2..d.max(1) {
            total = total.saturating_mul(k as u128);
        }
    }
    total
}

struct Search<'a> {
    links: Vec<LinkGraph>,
    /// Vertices (as indices into `links`) to test after assigning edge `i`.
    check_after: Vec<Vec<usize>>,
    edges: Vec<EdgeId>,
    choices: Vec<Vec<Vec<DartId>>>,
    rs: RotationSystem,
    stats: &'a mut EnumerationStats,
    cap: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> Option<bool> {
        if i == self.edges.len() {
            return Some(true);
        }
        let e = self.edges[i];
        for k in 0..self.choices[i].len() {
            self.rs.rotators.insert(e, self.choices[i][k].clone());
            let mut ok = true;
            for &l in &self.check_after[i] {
                if self.stats.checked >= self.cap {
                    return None;
                }
                self.stats.checked += 1;
                if !planar_at(&self.links[l], &self.rs) {
                    ok = false;
                    break;
                }
            }
            if ok {
                match self.run(i + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
        }
        Some(false)
    }
}

/// Decides existence of a planar rotation system by exhaustive search, giving
/// up after `cap` link tests.
pub fn oracle_decide(c: &TwoComplex, cap: u64) -> (OracleOutcome<RotationSystem>, EnumerationStats) {
    let mut stats = EnumerationStats { total: rotation_system_count(c), checked: 0 };
    let mut rs = RotationSystem::default_for(c);
    let degrees = c.edge_degrees();
    let edges: Vec<EdgeId> = degrees.iter().filter(|&(_, &d)| d >= 3).map(|(&e, _)| e).collect();
    let position: BTreeMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let links: Vec<LinkGraph> = all_links(c).into_values().collect();
    let mut check_after = vec![Vec::new(); edges.len()];
    for (li, l) in links.iter().enumerate() {
        let last = l.nodes.iter().filter_map(|(e, _)| position.get(e)).max();
        match last {
            Some(&i) => check_after[i].push(li),
            None => {
                stats.checked += 1;
                if !planar_at(l, &rs) {
                    return (OracleOutcome::NotExists, stats);
                }
            }
        }
    }
    let choices: Vec<Vec<Vec<DartId>>> = edges
        .iter()
        .map(|e| {
            let darts: Vec<usize> = rs.rotators[e].iter().map(|d| d.0 as usize).collect();
            cyclic_orders(&darts).into_iter().map(|o| o.into_iter().map(|x| DartId(x as u32)).collect()).collect()
        })
        .collect();
    for (e, ch) in edges.iter().zip(&choices) {
        rs.rotators.insert(*e, ch[0].clone());
    }
    let mut search = Search { links, check_after, edges, choices, rs, stats: &mut stats, cap };
    let outcome = match search.run(0) {
        Some(true) => OracleOutcome::Exists(search.rs.clone()),
        Some(false) => OracleOutcome::NotExists,
        None => OracleOutcome::CapExceeded,
    };
    (outcome, stats)
}

/// Exhaustive search for a planar rotation honouring every pairing.
pub fn oracle_loop_planar(g: &Multigraph, pairings: &[LoopPairing], cap: u64) -> OracleOutcome<GraphRotation> {
    let mut total: u128 = 1;
    for u in 0..g.node_count() {
        for k in 2..g.degree(u).max(1) {
            total = total.saturating_mul(k as u128);
        }
    }
    if total > cap as u128 {
        return OracleOutcome::CapExceeded;
    }
    match brute_force_rotations(g, usize::MAX, |r| pairings.iter().all(|p| p.holds(r))).first {
        Some(r) => OracleOutcome::Exists(r),
        None => OracleOutcome::NotExists,
    }
}
