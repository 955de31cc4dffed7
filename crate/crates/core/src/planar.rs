//! Combinatorial embeddings given as rotation systems.
//!
//! Edge `e = (u, v)` owns two darts: `2e` leaves `u`, `2e + 1` leaves `v`.
//! The rotation of a vertex lists the darts leaving it in clockwise order.
//! Faces are the orbits of `d -> next(twin(d))`, where `next` is the
//! successor inside the rotation of the dart's origin.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use crate::facedemands::DemandSet;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cap: Rational,
}

/// A face boundary. `vertices[p]` is the origin of `darts[p]`; the position
/// `p` is what demand sets on this face refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Smallest dart on the boundary, which is also `darts[0]`.
    pub id: usize,
    pub darts: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// First boundary position of `v`.
    pub fn position_of(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    n: usize,
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
    next: Vec<usize>,
    faces: Vec<Face>,
    face_of_dart: Vec<usize>,
}

#[inline]
pub fn twin(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d / 2
}

impl PlanarGraph {
    /// Validates the rotation system and traces its faces. Rejects the
    /// embedding if it is not a sphere embedding of every component.
    pub fn new(n: usize, edges: Vec<Edge>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let m = edges.len();
        if rotation.len() != n {
            return Err(Error::EmbeddingInvalid(format!(
                "rotation lists {} vertices, graph has {n}",
                rotation.len()
            )));
        }
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::EmbeddingInvalid(format!(
                    "edge {id} has an endpoint out of range"
                )));
            }
            if e.u == e.v {
                return Err(Error::EmbeddingInvalid(format!("edge {id} is a loop")));
            }
            if !rational::is_nonneg(&e.cap) {
                return Err(Error::InvalidInput(format!(
                    "edge {id} has negative capacity"
                )));
            }
        }
        let mut seen = vec![false; 2 * m];
        let mut next = vec![usize::MAX; 2 * m];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= 2 * m {
                    return Err(Error::EmbeddingInvalid(format!(
                        "dart {d} at vertex {v} does not exist"
                    )));
                }
                if seen[d] {
                    return Err(Error::EmbeddingInvalid(format!("dart {d} appears twice")));
                }
                seen[d] = true;
                let e = &edges[edge_of(d)];
                let origin = if d % 2 == 0 { e.u } else { e.v };
                if origin != v {
                    return Err(Error::EmbeddingInvalid(format!(
                        "dart {d} leaves vertex {origin} but is listed at {v}"
                    )));
                }
                next[d] = rot[(i + 1) % rot.len()];
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::EmbeddingInvalid(format!(
                "dart {d} is missing from the rotation"
            )));
        }
        let mut g = PlanarGraph {
            n,
            edges,
            rotation,
            next,
            faces: Vec::new(),
            face_of_dart: vec![usize::MAX; 2 * m],
        };
        g.trace();
        g.euler_check()?;
        Ok(g)
    }

    fn trace(&mut self) {
        let m2 = self.next.len();
        for start in 0..m2 {
            if self.face_of_dart[start] != usize::MAX {
                continue;
            }
            let idx = self.faces.len();
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                self.face_of_dart[d] = idx;
                darts.push(d);
                d = self.phi(d);
                if d == start {
                    break;
                }
            }
            let vertices = darts.iter().map(|&d| self.origin(d)).collect();
            self.faces.push(Face {
                id: start,
                darts,
                vertices,
            });
        }
    }

    fn euler_check(&self) -> Result<()> {
        let comps = self.components();
        let mut with_edges = vec![false; self.n];
        for e in &self.edges {
            with_edges[comps[e.u]] = true;
        }
        let c_e = with_edges.iter().filter(|&&b| b).count();
        let n_e = (0..self.n)
            .filter(|&v| !self.rotation[v].is_empty())
            .count();
        let lhs = n_e as i64 - self.edges.len() as i64 + self.faces.len() as i64;
        if lhs != 2 * c_e as i64 {
            return Err(Error::EmbeddingInvalid(format!(
                "Euler check failed: n - m + f = {lhs}, expected {}",
                2 * c_e
            )));
        }
        Ok(())
    }

    /// The face-tracing permutation.
    #[inline]
    pub fn phi(&self, d: usize) -> usize {
        self.next[twin(d)]
    }

    #[inline]
    pub fn origin(&self, d: usize) -> usize {
        let e = &self.edges[edge_of(d)];
        if d.is_multiple_of(2) {
            e.u
        } else {
            e.v
        }
    }

    #[inline]
    pub fn head(&self, d: usize) -> usize {
        self.origin(twin(d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Index into [`faces`](Self::faces) of the face to the dart's side.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.face_of_dart[d]
    }

    /// Index of the face with canonical id `id`.
    pub fn face_index(&self, id: usize) -> Option<usize> {
        self.faces.binary_search_by_key(&id, |f| f.id).ok()
    }

    pub fn capacities(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.cap.clone()).collect()
    }

    /// Same embedding, new capacities.
    pub fn with_capacities(&self, caps: &[Rational]) -> Self {
        assert_eq!(caps.len(), self.edges.len());
        let mut g = self.clone();
        for (e, c) in g.edges.iter_mut().zip(caps) {
            e.cap = c.clone();
        }
        g
    }

    /// Same embedding with every capacity multiplied by `k`.
    pub fn scaled(&self, k: &Rational) -> Self {
        let caps: Vec<Rational> = self.edges.iter().map(|e| &e.cap * k).collect();
        self.with_capacities(&caps)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        adj
    }

    /// Component label per vertex, labels are the smallest vertex of each
    /// component.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = s;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = s;
                        stack.push(y);
                    }
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Capacity across the cut `(side, V \ side)`.
    pub fn cut_capacity(&self, side: &[bool]) -> Rational {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .fold(Rational::zero(), |acc, e| acc + &e.cap)
    }
}

/// All faces of `g`, with the Euler check re-run.
pub fn trace_faces(g: &PlanarGraph) -> Result<Vec<Face>> {
    g.euler_check()?;
    Ok(g.faces.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualEdge {
    /// Face indices on the two sides; equal for a bridge.
    pub a: usize,
    pub b: usize,
    pub primal: usize,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// Canonical face id of each dual vertex.
    pub faces: Vec<usize>,
    pub edges: Vec<DualEdge>,
}

impl DualGraph {
    pub fn n(&self) -> usize {
        self.faces.len()
    }
}

pub fn build_dual(g: &PlanarGraph, weights: &[Rational]) -> Result<DualGraph> {
    if weights.len() != g.m() {
        return Err(Error::InvalidInput(format!(
            "{} dual weights for {} edges",
            weights.len(),
            g.m()
        )));
    }
    g.euler_check()?;
    let edges = (0..g.m())
        .map(|e| DualEdge {
            a: g.face_of_dart(2 * e),
            b: g.face_of_dart(2 * e + 1),
            primal: e,
            weight: weights[e].clone(),
        })
        .collect();
    Ok(DualGraph {
        faces: g.faces.iter().map(|f| f.id).collect(),
        edges,
    })
}

/// One source/sink pair of a flow problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commodity {
    pub source: usize,
    pub sink: usize,
    pub demand: Rational,
}

/// Total demand across `(side, V \ side)`.
pub fn demand_across(commodities: &[Commodity], side: &[bool]) -> Rational {
    commodities
        .iter()
        .filter(|c| side[c.source] != side[c.sink])
        .fold(Rational::zero(), |acc, c| acc + &c.demand)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDemand {
    pub u: usize,
    pub v: usize,
    /// Canonical id of a face whose boundary holds both endpoints.
    pub face: usize,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceInstance {
    pub graph: PlanarGraph,
    pub demands: Vec<FaceDemand>,
}

impl FaceInstance {
    pub fn new(graph: PlanarGraph, demands: Vec<FaceDemand>) -> Result<Self> {
        for (i, d) in demands.iter().enumerate() {
            if d.value == 0 {
                return Err(Error::InvalidInput(format!("demand {i} has value 0")));
            }
            if d.u == d.v {
                return Err(Error::InvalidInput(format!(
                    "demand {i} has equal endpoints"
                )));
            }
            let Some(fi) = graph.face_index(d.face) else {
                return Err(Error::InvalidInput(format!(
                    "demand {i} names unknown face {}",
                    d.face
                )));
            };
            let f = &graph.faces()[fi];
            if f.position_of(d.u).is_none() || f.position_of(d.v).is_none() {
                return Err(Error::InvalidInput(format!(
                    "demand {i}: endpoints {} and {} are not both on face {}",
                    d.u, d.v, d.face
                )));
            }
        }
        Ok(FaceInstance { graph, demands })
    }

    pub fn commodities(&self) -> Vec<Commodity> {
        self.demands
            .iter()
            .map(|d| Commodity {
                source: d.u,
                sink: d.v,
                demand: rational::int(d.value as i64),
            })
            .collect()
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().map(|d| d.value).sum()
    }

    /// The per-face demand sets `H_F`, keyed by face index, in face order.
    pub fn face_demand_sets(&self) -> Vec<(usize, DemandSet)> {
        let mut sets: BTreeMap<usize, DemandSet> = BTreeMap::new();
        for d in &self.demands {
            let fi = self.graph.face_index(d.face).expect("validated");
            let f = &self.graph.faces()[fi];
            let a = f.position_of(d.u).expect("validated");
            let b = f.position_of(d.v).expect("validated");
            sets.entry(fi)
                .or_insert_with(|| DemandSet::new(f.len()))
                .add(a, b, rational::int(d.value as i64));
        }
        sets.into_iter().collect()
    }

    /// True iff the demands on every face are separable.
    pub fn is_separable(&self) -> bool {
        self.face_demand_sets()
            .iter()
            .all(|(_, d)| crate::facedemands::is_separable(d).is_some())
    }
}

/// A 2-vertex-connected piece of a face instance. Vertex and edge ids are
/// local; `vertices` and `edges` map them back, and `origins[i]` names the
/// input demand that local demand `i` was cut from.
#[derive(Debug, Clone)]
pub struct Block {
    pub instance: FaceInstance,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub origins: Vec<usize>,
}

/// Edge sets of the biconnected components, each sorted.
pub fn biconnected_components(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (id, &(u, v)) in ends.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut estack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent edge, next adjacency index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (x, pe, ref mut it)) = stack.last_mut() {
            if *it < adj[x].len() {
                let (y, id) = adj[x][*it];
                *it += 1;
                if id == pe {
                    continue;
                }
                if disc[y] == usize::MAX {
                    estack.push(id);
                    disc[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, id, 0));
                } else if disc[y] < disc[x] {
                    estack.push(id);
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(id) = estack.pop() {
                            block.push(id);
                            if id == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort();
    blocks
}

/// Splits a face instance at its cut vertices. A demand `ab` separated by
/// cut vertices `v1, .., vk` becomes `a v1, v1 v2, .., vk b`, one piece per
/// block on the way. A 2-connected input comes back unchanged.
pub fn split_cut_vertices(inst: &FaceInstance) -> Result<Vec<Block>> {
    let g = &inst.graph;
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let blocks = biconnected_components(g.n(), &ends);
    let isolated = (0..g.n()).filter(|&v| g.rotation()[v].is_empty()).count();
    if blocks.len() <= 1 && isolated == 0 {
        return Ok(vec![Block {
            instance: inst.clone(),
            vertices: (0..g.n()).collect(),
            edges: (0..g.m()).collect(),
            origins: (0..inst.demands.len()).collect(),
        }]);
    }

    let nb = blocks.len();
    let mut block_of_edge = vec![0; g.m()];
    let mut vertex_blocks: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (b, es) in blocks.iter().enumerate() {
        for &e in es {
            block_of_edge[e] = b;
            for x in [ends[e].0, ends[e].1] {
                if vertex_blocks[x].last() != Some(&b) {
                    vertex_blocks[x].push(b);
                }
            }
        }
    }
    for vb in vertex_blocks.iter_mut() {
        vb.sort_unstable();
        vb.dedup();
    }
    // Block-cut tree: nodes 0..nb are blocks, nb + v is cut vertex v.
    let is_cut = |v: usize| vertex_blocks[v].len() > 1;
    let node_of = |v: usize| {
        if is_cut(v) {
            nb + v
        } else {
            vertex_blocks[v][0]
        }
    };
    let mut tree: Vec<Vec<usize>> = vec![Vec::new(); nb + g.n()];
    for v in 0..g.n() {
        if is_cut(v) {
            for &b in &vertex_blocks[v] {
                tree[b].push(nb + v);
                tree[nb + v].push(b);
            }
        }
    }

    // Local embeddings.
    let mut locals = Vec::with_capacity(nb);
    for es in &blocks {
        let mut verts: Vec<usize> = es.iter().flat_map(|&e| [ends[e].0, ends[e].1]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local_v: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local_e: BTreeMap<usize, usize> = es.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let edges: Vec<Edge> = es
            .iter()
            .map(|&e| Edge {
                u: local_v[&ends[e].0],
                v: local_v[&ends[e].1],
                cap: g.edges()[e].cap.clone(),
            })
            .collect();
        let rotation: Vec<Vec<usize>> = verts
            .iter()
            .map(|&v| {
                g.rotation()[v]
                    .iter()
                    .filter_map(|&d| local_e.get(&edge_of(d)).map(|&le| 2 * le + (d & 1)))
                    .collect()
            })
            .collect();
        let lg = PlanarGraph::new(verts.len(), edges, rotation)?;
        locals.push((lg, verts, es.clone(), local_v, local_e));
    }

    let mut demands: Vec<Vec<(FaceDemand, usize)>> = vec![Vec::new(); nb];
    for (di, d) in inst.demands.iter().enumerate() {
        let path = tree_path(&tree, node_of(d.u), node_of(d.v));
        let face = &g.faces()[g.face_index(d.face).expect("validated")];
        let mut current = d.u;
        for (k, &node) in path.iter().enumerate() {
            if node >= nb {
                continue;
            }
            let next = path[k + 1..]
                .iter()
                .find(|&&x| x >= nb)
                .map(|&x| x - nb)
                .unwrap_or(d.v);
            let (lg, _, _, local_v, local_e) = &locals[node];
            let (a, b) = (local_v[&current], local_v[&next]);
            let lf = face
                .darts
                .iter()
                .find_map(|&dart| {
                    local_e
                        .get(&edge_of(dart))
                        .map(|&le| lg.face_of_dart(2 * le + (dart & 1)))
                })
                .ok_or_else(|| {
                    Error::InvalidInput(format!("demand {di}: face {} misses block {node}", d.face))
                })?;
            let lface = &lg.faces()[lf];
            if lface.position_of(a).is_none() || lface.position_of(b).is_none() {
                return Err(Error::InvalidInput(format!(
                    "demand {di}: piece {current}-{next} is not on one face of its block"
                )));
            }
            demands[node].push((
                FaceDemand {
                    u: a,
                    v: b,
                    face: lface.id,
                    value: d.value,
                },
                di,
            ));
            current = next;
        }
    }

    let mut out = Vec::with_capacity(nb);
    for ((lg, verts, es, _, _), ds) in locals.into_iter().zip(demands) {
        let origins = ds.iter().map(|(_, o)| *o).collect();
        let instance = FaceInstance::new(lg, ds.into_iter().map(|(d, _)| d).collect())?;
        out.push(Block {
            instance,
            vertices: verts,
            edges: es,
            origins,
        });
    }
    Ok(out)
}

fn tree_path(tree: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; tree.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in &tree[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut x = to;
    while x != from {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    path
}

/// Builds edges and a rotation for a plane graph from vertex positions, for
/// tests and generators. Each vertex orders its darts clockwise by angle.
pub fn embed_straight_line(
    points: &[(f64, f64)],
    ends: &[(usize, usize)],
    caps: &[Rational],
) -> Result<PlanarGraph> {
    let n = points.len();
    let mut rot: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in ends.iter().enumerate() {
        let ang = |a: usize, b: usize| {
            let (dx, dy) = (points[b].0 - points[a].0, points[b].1 - points[a].1);
            -dy.atan2(dx)
        };
        rot[u].push((ang(u, v), 2 * e));
        rot[v].push((ang(v, u), 2 * e + 1));
    }
    let rotation = rot
        .into_iter()
        .map(|mut r| {
            r.sort_by(|a, b| a.0.total_cmp(&b.0));
            r.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    let edges = ends
        .iter()
        .zip(caps)
        .map(|(&(u, v), c)| Edge {
            u,
            v,
            cap: c.clone(),
        })
        .collect();
    PlanarGraph::new(n, edges, rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cycle(k: usize) -> PlanarGraph {
        let pts: Vec<(f64, f64)> = (0..k)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / k as f64;
                (a.cos(), a.sin())
            })
            .collect();
        let ends: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        embed_straight_line(&pts, &ends, &vec![int(1); k]).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = cycle(3);
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = PlanarGraph::new(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                cap: int(1),
            }],
            vec![vec![0], vec![1]],
        )
        .unwrap();
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 2);
        let dual = build_dual(&g, &[int(5)]).unwrap();
        assert_eq!(dual.n(), 1);
        assert_eq!((dual.edges[0].a, dual.edges[0].b), (0, 0));
    }

    #[test]
    fn hexagon_and_chord() {
        let g = cycle(6);
        assert_eq!(g.faces().len(), 2);
        assert!(g.faces().iter().all(|f| f.len() == 6));
        let pts: Vec<(f64, f64)> = (0..6)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 6.0;
                (a.cos(), a.sin())
            })
            .collect();
        let mut ends: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        ends.push((0, 3));
        let g = embed_straight_line(&pts, &ends, &vec![int(1); 7]).unwrap();
        assert_eq!(g.faces().len(), 3);
        let total: usize = g.faces().iter().map(|f| f.len()).sum();
        assert_eq!(total, 14);
    }

    #[test]
    fn dual_of_cycle_is_a_bond() {
        let g = cycle(6);
        let dual = build_dual(&g, &vec![int(1); 6]).unwrap();
        assert_eq!(dual.n(), 2);
        assert!(dual.edges.iter().all(|e| e.a != e.b));
        let g3 = cycle(3);
        let dual = build_dual(&g3, &[int(1), int(2), int(3)]).unwrap();
        let mut ws: Vec<_> = dual.edges.iter().map(|e| e.weight.clone()).collect();
        ws.sort();
        assert_eq!(ws, vec![int(1), int(2), int(3)]);
    }

    #[test]
    fn rejects_non_planar_rotation() {
        let pts = [(0.0, 0.0), (0.0, 2.0), (-2.0, -1.0), (2.0, -1.0)];
        let ends = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)];
        let g = embed_straight_line(&pts, &ends, &vec![int(1); 6]).unwrap();
        assert_eq!(g.faces().len(), 4);
        let mut rotation = g.rotation().to_vec();
        rotation[0].reverse();
        let twisted = PlanarGraph::new(4, g.edges().to_vec(), rotation);
        assert!(matches!(twisted, Err(Error::EmbeddingInvalid(_))));
    }

    #[test]
    fn missing_dart_is_rejected() {
        let r = PlanarGraph::new(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                cap: int(1),
            }],
            vec![vec![0], vec![]],
        );
        assert!(matches!(r, Err(Error::EmbeddingInvalid(_))));
    }

    #[test]
    fn biconnected_components_of_bowtie() {
        let ends = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
        let b = biconnected_components(5, &ends);
        assert_eq!(b, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }
}
