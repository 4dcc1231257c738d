//! Deterministic families of simplicial complexes.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::complex::TwoComplex;
use crate::error::GeneratorError;
use crate::ids::VertexId;

/// Apex of every cone built here.
pub const CONE_APEX: VertexId = VertexId(0);
/// The common endpoint of ā and b̄ in Δ⁺ₙ.
pub const DELTA_CENTER: VertexId = VertexId(0);
pub const DELTA_WA: VertexId = VertexId(1);
pub const DELTA_WB: VertexId = VertexId(2);

pub fn tetrahedron() -> TwoComplex {
    TwoComplex::from_triangles(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
}

/// Boundary of the octahedron; vertices 2i and 2i+1 are antipodal.
pub fn octahedron() -> TwoComplex {
    let mut t = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                t.push([x, y, z]);
            }
        }
    }
    TwoComplex::from_triangles(&t)
}

/// Two triangles sharing the edge 01.
pub fn delta2() -> TwoComplex {
    TwoComplex::from_triangles(&[[0, 1, 2], [0, 1, 3]])
}

/// `n` copies of Δ₂ glued along the path w_a – v – w_b. Vertex 0 is v, 1 is
/// w_a, 2 is w_b, and `3 + i` the apex of copy `i`.
pub fn delta_plus(n: u32) -> TwoComplex {
    let mut t = Vec::new();
    for i in 0..n {
        t.push([0, 1, 3 + i]);
        t.push([0, 2, 3 + i]);
    }
    TwoComplex::from_triangles(&t)
}

pub fn two_tetrahedra_at_vertex() -> TwoComplex {
    TwoComplex::from_triangles(&[
        [0, 1, 2],
        [0, 1, 3],
        [0, 2, 3],
        [1, 2, 3],
        [0, 4, 5],
        [0, 4, 6],
        [0, 5, 6],
        [4, 5, 6],
    ])
}

/// Two tetrahedron boundaries sharing the edge 01.
pub fn two_tetrahedra_at_edge() -> TwoComplex {
    TwoComplex::from_triangles(&[
        [0, 1, 2],
        [0, 1, 3],
        [0, 2, 3],
        [1, 2, 3],
        [0, 1, 4],
        [0, 1, 5],
        [0, 4, 5],
        [1, 4, 5],
    ])
}

/// Cone with apex 0 over the graph on nodes `1..` given by `arcs` (node ids are
/// shifted by one). The link at the apex is the graph itself.
pub fn cone_over(arcs: &[(u32, u32)]) -> TwoComplex {
    let t: Vec<[u32; 3]> = arcs.iter().map(|&(u, v)| [0, u + 1, v + 1]).collect();
    TwoComplex::from_triangles(&t)
}

pub fn named_graph(name: &str) -> Result<Vec<(u32, u32)>, GeneratorError> {
    let complete = |n: u32| {
        let mut a = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                a.push((i, j));
            }
        }
        a
    };
    Ok(match name {
        "K3" => complete(3),
        "K4" => complete(4),
        "K5" => complete(5),
        "K3,3" | "K33" => {
            let mut a = Vec::new();
            for i in 0..3 {
                for j in 3..6 {
                    a.push((i, j));
                }
            }
            a
        }
        "octahedron" => {
            let mut a = Vec::new();
            for i in 0..6 {
                for j in (i + 1)..6 {
                    if j != i + 3 {
                        a.push((i, j));
                    }
                }
            }
            a
        }
        "C4" => alloc::vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        _ => return Err(GeneratorError::UnknownGraph),
    })
}

pub fn cone_over_named(name: &str) -> Result<TwoComplex, GeneratorError> {
    Ok(cone_over(&named_graph(name)?))
}

/// Cone over a parallel graph with `k` paths of three arcs each. The apex link
/// has branch nodes 1 and 2.
pub fn parallel_cone(k: u32) -> TwoComplex {
    let mut arcs = Vec::new();
    for i in 0..k {
        let (x, y) = (2 + 2 * i, 3 + 2 * i);
        arcs.push((0, x));
        arcs.push((x, y));
        arcs.push((y, 1));
    }
    cone_over(&arcs)
}

/// Triangulated strip around the core cycle `0..m` winding `w` times. The free
/// boundary has `w·m` vertices numbered from `first`. Every core edge lies in
/// exactly `w` faces of the strip.
pub fn strip_triangles(m: u32, w: u32, first: u32) -> Vec<[u32; 3]> {
    let len = w * m;
    let b = |j: u32| first + j % len;
    let mut t = Vec::new();
    for j in 0..len {
        let (c0, c1) = (j % m, (j + 1) % m);
        t.push([c0, c1, b(j + 1)]);
        t.push([c0, b(j), b(j + 1)]);
    }
    t
}

/// Triangulated Möbius strip around the 3-cycle 0,1,2 with the triangle 012
/// attached as a disc on that cycle.
pub fn moebius_disc() -> TwoComplex {
    let mut t = strip_triangles(3, 2, 3);
    t.push([0, 1, 2]);
    TwoComplex::from_triangles(&t)
}

/// Two strips around the 3-cycle 0,1,2 winding `p` and `q` times.
pub fn torus_cross(p: u32, q: u32) -> TwoComplex {
    let mut t = strip_triangles(3, p, 3);
    t.extend(strip_triangles(3, q, 3 + 3 * p));
    TwoComplex::from_triangles(&t)
}

/// Triangulated annulus with `n ≥ 3` vertices on each boundary circle.
pub fn annulus(n: u32) -> TwoComplex {
    TwoComplex::from_triangles(&strip_triangles(n, 1, n))
}

/// Two winding-one strips on the 3-cycle 0,1,2.
pub fn double_annulus() -> TwoComplex {
    torus_cross(1, 1)
}

/// A `k × k` grid of squares, each split into two triangles.
pub fn disc(k: u32) -> TwoComplex {
    let id = |i: u32, j: u32| i * (k + 1) + j;
    let mut t = Vec::new();
    for i in 0..k {
        for j in 0..k {
            t.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            t.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
        }
    }
    TwoComplex::from_triangles(&t)
}

/// Builds a generator by name with integer parameters.
pub fn generate(name: &str, params: &[&str]) -> Result<TwoComplex, GeneratorError> {
    let num = |i: usize| -> Result<u32, GeneratorError> {
        params
            .get(i)
            .ok_or(GeneratorError::BadParams("missing parameter"))?
            .parse::<u32>()
            .map_err(|_| GeneratorError::BadParams("parameter is not a non-negative integer"))
    };
    let arity = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(GeneratorError::BadParams("wrong number of parameters"))
        }
    };
    match name {
        "tetra" => arity(0).map(|_| tetrahedron()),
        "octa" => arity(0).map(|_| octahedron()),
        "delta2" => arity(0).map(|_| delta2()),
        "deltaplus" => {
            arity(1)?;
            let n = num(0)?;
            if n == 0 {
                return Err(GeneratorError::BadParams("n must be at least 1"));
            }
            Ok(delta_plus(n))
        }
        "cone" => {
            arity(1)?;
            cone_over_named(params[0]).map_err(|_| GeneratorError::BadParams("unknown graph name"))
        }
        "moebius-disc" => arity(0).map(|_| moebius_disc()),
        "torus-cross" => {
            arity(2)?;
            let (p, q) = (num(0)?, num(1)?);
            if p == 0 || q == 0 {
                return Err(GeneratorError::BadParams("windings must be positive"));
            }
            Ok(torus_cross(p, q))
        }
        "annulus" => {
            arity(1)?;
            let n = num(0)?;
            if n < 3 {
                return Err(GeneratorError::BadParams("n must be at least 3"));
            }
            Ok(annulus(n))
        }
        "parallel" => {
            arity(1)?;
            let k = num(0)?;
            if k == 0 {
                return Err(GeneratorError::BadParams("k must be at least 1"));
            }
            Ok(parallel_cone(k))
        }
        "disc" => {
            arity(1)?;
            let k = num(0)?;
            if k == 0 {
                return Err(GeneratorError::BadParams("k must be at least 1"));
            }
            Ok(disc(k))
        }
        _ => Err(GeneratorError::UnknownGenerator),
    }
}

/// Shape of randomly drawn complexes.
#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    pub max_vertices: u32,
    pub max_faces: usize,
    pub max_degree: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { max_vertices: 7, max_faces: 10, max_degree: 4 }
    }
}

/// Random simplicial complex. `pick(k)` must return a uniform value in `0..k`.
///
/// Half of the draws are cones over a random graph with a few extra triangles,
/// so that apex links range over small graphs including non-planar ones.
pub fn random_complex(p: &RandomParams, pick: &mut impl FnMut(usize) -> usize) -> TwoComplex {
    let n = 4 + pick(p.max_vertices.saturating_sub(3).max(1) as usize) as u32;
    let target = 1 + pick(p.max_faces);
    let mut faces: BTreeSet<[u32; 3]> = BTreeSet::new();
    let mut deg: alloc::collections::BTreeMap<(u32, u32), usize> = Default::default();
    let mut try_add = |t: [u32; 3], faces: &mut BTreeSet<[u32; 3]>| {
        let mut s = t;
        s.sort_unstable();
        if s[0] == s[1] || s[1] == s[2] || faces.contains(&s) {
            return false;
        }
        let es = [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])];
        if es.iter().any(|e| deg.get(e).copied().unwrap_or(0) >= p.max_degree) {
            return false;
        }
        for e in es {
            *deg.entry(e).or_insert(0) += 1;
        }
        faces.insert(s);
        true
    };
    if pick(2) == 0 {
        let spokes = (target * 3 / 4).max(1);
        for _ in 0..(spokes * 8) {
            if faces.len() >= spokes {
                break;
            }
            let u = 1 + pick(n as usize - 1) as u32;
            let v = 1 + pick(n as usize - 1) as u32;
            try_add([0, u, v], &mut faces);
        }
    }
    for _ in 0..(target * 8) {
        if faces.len() >= target {
            break;
        }
        let t = [pick(n as usize) as u32, pick(n as usize) as u32, pick(n as usize) as u32];
        try_add(t, &mut faces);
    }
    let mut list: Vec<[u32; 3]> = faces.into_iter().collect();
    // compact vertex ids in order of first appearance
    let mut seen: Vec<u32> = Vec::new();
    for t in &list {
        for &x in t {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
    }
    for t in &mut list {
        for x in t.iter_mut() {
            *x = seen.iter().position(|&y| y == *x).unwrap() as u32;
        }
    }
    TwoComplex::from_triangles(&list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(c: &TwoComplex) -> (usize, usize, usize) {
        (c.vertex_count(), c.edge_count(), c.face_count())
    }

    #[test]
    fn named_counts() {
        assert_eq!(counts(&tetrahedron()), (4, 6, 4));
        assert_eq!(counts(&octahedron()), (6, 12, 8));
        assert_eq!(counts(&delta2()), (4, 5, 2));
        assert_eq!(counts(&delta_plus(3)), (6, 11, 6));
        assert_eq!(counts(&cone_over_named("K5").unwrap()), (6, 15, 10));
        assert_eq!(counts(&moebius_disc()), (9, 21, 13));
    }

    #[test]
    fn everything_is_simplicial() {
        let mut all = alloc::vec![
            tetrahedron(),
            octahedron(),
            delta2(),
            moebius_disc(),
            two_tetrahedra_at_edge(),
            two_tetrahedra_at_vertex(),
            disc(4),
            parallel_cone(4),
        ];
        for n in 1..7 {
            all.push(delta_plus(n));
        }
        for n in 3..7 {
            all.push(annulus(n));
        }
        for p in 1..5 {
            for q in p..5 {
                all.push(torus_cross(p, q));
            }
        }
        for g in ["K3", "K4", "K5", "K3,3", "octahedron", "C4"] {
            all.push(cone_over_named(g).unwrap());
        }
        for c in all {
            let r = c.validate();
            assert!(r.is_valid(), "{:?}", r.violations);
            assert!(r.simplicial);
        }
    }

    #[test]
    fn strip_core_degree_is_winding() {
        let c = torus_cross(2, 3);
        let degs = c.edge_degrees();
        for (e, x) in c.edges() {
            if x.tail.0 < 3 && x.head.0 < 3 {
                assert_eq!(degs[&e], 5);
            }
        }
    }

    #[test]
    fn generate_by_name() {
        assert_eq!(counts(&generate("deltaplus", &["3"]).unwrap()), (6, 11, 6));
        assert_eq!(generate("nope", &[]).unwrap_err(), GeneratorError::UnknownGenerator);
        assert!(matches!(generate("deltaplus", &["x"]), Err(GeneratorError::BadParams(_))));
        assert!(matches!(generate("tetra", &["1"]), Err(GeneratorError::BadParams(_))));
    }

    #[test]
    fn random_complexes_respect_bounds() {
        let mut state = 12345u64;
        let mut pick = |k: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % k
        };
        let p = RandomParams::default();
        for _ in 0..200 {
            let c = random_complex(&p, &mut pick);
            assert!(c.face_count() >= 1 && c.face_count() <= p.max_faces);
            assert!(c.edge_degrees().values().all(|&d| d <= p.max_degree));
            assert!(c.validate().simplicial);
        }
    }
}
