//! Seeded random instances: 2-connected plane graphs with demands on faces.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::facedemands::crossing;
use crate::planar::{
    biconnected_components, embed_straight_line, FaceDemand, FaceInstance, PlanarGraph,
};
use crate::rational;

pub const DEFAULT_SEED: u64 = 0x5eed_f10e;

/// `FLOWGAP_SEED` if set and numeric, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("FLOWGAP_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandKind {
    /// Per face: sources in one arc, sinks in its complement.
    Separable,
    General,
    /// Per face: no two chords cross.
    Laminar,
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub n: usize,
    /// Probability that each edge of the starting triangulation is dropped
    /// (when that keeps the graph 2-connected).
    pub drop: f64,
    pub max_cap: i64,
    pub kind: DemandKind,
    pub demands: usize,
    pub max_value: u64,
    /// Demands use at most this many faces.
    pub faces: usize,
    /// Only faces with at most this many boundary vertices carry demands.
    pub max_t: usize,
}

impl InstanceSpec {
    pub fn new(n: usize, kind: DemandKind) -> Self {
        InstanceSpec {
            n,
            drop: 0.6,
            max_cap: 3,
            kind,
            demands: 4,
            max_value: 2,
            faces: 1,
            max_t: 16,
        }
    }
}

type Point = (f64, f64);

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_cross(p: [(f64, f64); 2], q: [(f64, f64); 2]) -> bool {
    let d1 = orient(p[0], p[1], q[0]);
    let d2 = orient(p[0], p[1], q[1]);
    let d3 = orient(q[0], q[1], p[0]);
    let d4 = orient(q[0], q[1], p[1]);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn two_connected(n: usize, ends: &[(usize, usize)]) -> bool {
    let mut deg = vec![0; n];
    for &(u, v) in ends {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.iter().all(|&d| d >= 2) && biconnected_components(n, ends).len() == 1
}

/// Vertex positions and edge list of a random 2-connected straight-line plane
/// graph on `n ≥ 3` vertices: a greedy triangulation of random points with
/// edges dropped at random while 2-connectivity survives.
pub fn random_plane_layout(
    rng: &mut impl Rng,
    n: usize,
    drop: f64,
) -> (Vec<Point>, Vec<(usize, usize)>) {
    assert!(n >= 3, "need at least three vertices");
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let len = |&(u, v): &(usize, usize)| (pts[u].0 - pts[v].0).hypot(pts[u].1 - pts[v].1);
    pairs.sort_by(|a, b| len(a).total_cmp(&len(b)));
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for (u, v) in pairs {
        let free = ends.iter().all(|&(x, y)| {
            x == u
                || x == v
                || y == u
                || y == v
                || !segments_cross([pts[u], pts[v]], [pts[x], pts[y]])
        });
        if free {
            ends.push((u, v));
        }
    }
    let mut order: Vec<usize> = (0..ends.len()).collect();
    order.shuffle(rng);
    let mut keep = vec![true; ends.len()];
    for e in order {
        if !rng.gen_bool(drop) {
            continue;
        }
        keep[e] = false;
        let kept: Vec<(usize, usize)> = ends
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        if !two_connected(n, &kept) {
            keep[e] = true;
        }
    }
    let ends = ends
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(e, _)| e)
        .collect();
    (pts, ends)
}

/// A random 2-connected plane graph with integer capacities in `1..=max_cap`.
pub fn random_plane_graph(rng: &mut impl Rng, n: usize, drop: f64, max_cap: i64) -> PlanarGraph {
    let (pts, ends) = random_plane_layout(rng, n, drop);
    let caps: Vec<_> = ends
        .iter()
        .map(|_| rational::int(rng.gen_range(1..=max_cap)))
        .collect();
    embed_straight_line(&pts, &ends, &caps).expect("straight-line layouts are plane")
}

/// Random demands on faces of `g`, in the shape given by `kind`.
pub fn random_face_demands(
    rng: &mut impl Rng,
    g: &PlanarGraph,
    kind: DemandKind,
    count: usize,
    max_value: u64,
    faces: usize,
    max_t: usize,
) -> Vec<FaceDemand> {
    let mut candidates: Vec<usize> = (0..g.faces().len())
        .filter(|&fi| (3..=max_t).contains(&g.faces()[fi].len()))
        .collect();
    if candidates.is_empty() {
        return Vec::new();
    }
    candidates.shuffle(rng);
    candidates.truncate(faces.max(1));
    let mut chords: Vec<Vec<(usize, usize)>> = vec![Vec::new(); candidates.len()];
    let arcs: Vec<(usize, usize)> = candidates
        .iter()
        .map(|&fi| {
            let t = g.faces()[fi].len();
            (rng.gen_range(0..t), rng.gen_range(1..t))
        })
        .collect();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let slot = rng.gen_range(0..candidates.len());
        let f = &g.faces()[candidates[slot]];
        let t = f.len();
        let (a, b) = match kind {
            DemandKind::Separable => {
                let (start, len) = arcs[slot];
                let a = (start + rng.gen_range(0..len)) % t;
                let b = (start + len + rng.gen_range(0..t - len)) % t;
                (a, b)
            }
            DemandKind::General | DemandKind::Laminar => {
                let a = rng.gen_range(0..t);
                let b = (a + rng.gen_range(1..t)) % t;
                (a, b)
            }
        };
        if kind == DemandKind::Laminar && chords[slot].iter().any(|&c| crossing(t, c, (a, b))) {
            continue;
        }
        chords[slot].push((a, b));
        out.push(FaceDemand {
            u: f.vertices[a],
            v: f.vertices[b],
            face: f.id,
            value: rng.gen_range(1..=max_value),
        });
    }
    out
}

/// Capacities equal to the load of one explicit routing of `demands` (each
/// along a randomly perturbed shortest path) plus random slack in
/// `0..=slack`, never below 1. The result is feasible by construction.
pub fn routed_capacities(
    rng: &mut impl Rng,
    g: &PlanarGraph,
    demands: &[FaceDemand],
    slack: i64,
) -> PlanarGraph {
    let adj = g.adjacency();
    let mut load = vec![0i64; g.m()];
    for d in demands {
        let w: Vec<u64> = (0..g.m()).map(|_| rng.gen_range(100..200)).collect();
        let mut dist = vec![u64::MAX; g.n()];
        let mut prev = vec![usize::MAX; g.n()];
        let mut heap = BinaryHeap::new();
        dist[d.u] = 0;
        heap.push(Reverse((0, d.u)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            for &(v, e) in &adj[u] {
                let nd = du + w[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        let mut x = d.v;
        while x != d.u {
            let e = prev[x];
            load[e] += d.value as i64;
            let ed = &g.edges()[e];
            x = if ed.u == x { ed.v } else { ed.u };
        }
    }
    let caps: Vec<_> = load
        .iter()
        .map(|&l| rational::int((l + rng.gen_range(0..=slack)).max(1)))
        .collect();
    g.with_capacities(&caps)
}

/// A random face instance following `spec`; capacities are random.
pub fn random_instance(rng: &mut impl Rng, spec: &InstanceSpec) -> FaceInstance {
    let g = random_plane_graph(rng, spec.n, spec.drop, spec.max_cap);
    let demands = random_face_demands(
        rng,
        &g,
        spec.kind,
        spec.demands,
        spec.max_value,
        spec.faces,
        spec.max_t,
    );
    FaceInstance::new(g, demands).expect("generated demands lie on their faces")
}

/// Like [`random_instance`], with capacities from an explicit routing, so the
/// cut condition holds.
pub fn random_routable_instance(
    rng: &mut impl Rng,
    spec: &InstanceSpec,
    slack: i64,
) -> FaceInstance {
    let inst = random_instance(rng, spec);
    let g = routed_capacities(rng, &inst.graph, &inst.demands, slack);
    FaceInstance::new(g, inst.demands).expect("same faces")
}
