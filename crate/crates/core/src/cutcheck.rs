//! Cut condition checking.
//!
//! With laminar demands on each face, the demand chords can be drawn inside
//! their faces, so `G + H` stays plane. A cut of `G + H` is an even subgraph
//! of its dual, and the cut condition fails exactly when some even subgraph
//! has negative weight under `c` on supply duals and `-d` on demand duals.
//! The minimum even subgraph is found as the negative edges plus a minimum
//! T-join, i.e. a minimum perfect matching on shortest-path distances.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::facedemands::DemandSet;
use crate::planar::{build_dual, demand_across, twin, Commodity, Edge, FaceInstance, PlanarGraph};
use crate::rational::{self, Rational};
use crate::{Error, Result};

pub const DEFAULT_BRUTE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    /// One side of the cut, sorted; empty when the verdict is satisfied.
    pub set: Vec<usize>,
    pub supply: Rational,
    pub demand: Rational,
    pub verdict: Verdict,
}

impl CutCertificate {
    pub fn satisfied() -> Self {
        CutCertificate {
            set: Vec::new(),
            supply: Rational::zero(),
            demand: Rational::zero(),
            verdict: Verdict::Satisfied,
        }
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    fn violated(g: &PlanarGraph, commodities: &[Commodity], side: &[bool]) -> Self {
        let cert = CutCertificate {
            set: (0..side.len()).filter(|&v| side[v]).collect(),
            supply: g.cut_capacity(side),
            demand: demand_across(commodities, side),
            verdict: Verdict::Violated,
        };
        assert!(cert.demand > cert.supply, "reported cut is not violated");
        cert
    }

    /// Recomputes both sides of the inequality from scratch.
    pub fn verify(&self, g: &PlanarGraph, commodities: &[Commodity]) -> bool {
        match self.verdict {
            Verdict::Satisfied => true,
            Verdict::Violated => {
                if self.set.is_empty()
                    || self.set.len() >= g.n()
                    || self.set.iter().any(|&v| v >= g.n())
                {
                    return false;
                }
                let side = side_of(g.n(), &self.set);
                let supply = g.cut_capacity(&side);
                let demand = demand_across(commodities, &side);
                supply == self.supply && demand == self.demand && demand > supply
            }
        }
    }
}

impl fmt::Display for CutCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Satisfied => write!(f, "satisfied"),
            Verdict::Violated => write!(
                f,
                "set {:?} has supply {} below demand {}",
                self.set,
                rational::fmt(&self.supply),
                rational::fmt(&self.demand)
            ),
        }
    }
}

pub fn side_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut side = vec![false; n];
    for &v in set {
        side[v] = true;
    }
    side
}

/// Commodities for per-face demand sets given as `(face index, set)`.
pub fn face_commodities(g: &PlanarGraph, per_face: &[(usize, DemandSet)]) -> Vec<Commodity> {
    let mut out = Vec::new();
    for (fi, d) in per_face {
        let face = &g.faces()[*fi];
        for c in d.chords() {
            out.push(Commodity {
                source: face.vertices[c.a],
                sink: face.vertices[c.b],
                demand: c.weight,
            });
        }
    }
    out
}

/// Adds every chord as an edge drawn inside its face. Edges `0..g.m()` are
/// the supply edges; chord edges follow in face order and carry their
/// demand as capacity.
///
/// At a boundary corner the new darts go between the two boundary darts,
/// sorted so that the chord reaching back the shortest way comes first.
pub fn embed_with_demands(g: &PlanarGraph, per_face: &[(usize, DemandSet)]) -> Result<PlanarGraph> {
    let mut edges: Vec<Edge> = g.edges().to_vec();
    // Dart after which the chord darts are inserted, with their sort keys.
    let mut inserts: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (fi, d) in per_face {
        let face = g
            .faces()
            .get(*fi)
            .ok_or_else(|| Error::InvalidInput(format!("no face with index {fi}")))?;
        let t = face.len();
        if d.t() != t {
            return Err(Error::InvalidInput(format!(
                "demand set of length {} on face {} of length {t}",
                d.t(),
                face.id
            )));
        }
        if !d.is_laminar() {
            return Err(Error::NotLaminar(face.id));
        }
        for c in d.chords() {
            let (u, v) = (face.vertices[c.a], face.vertices[c.b]);
            if u == v {
                return Err(Error::InvalidInput(format!(
                    "chord ({}, {}) on face {} joins vertex {u} to itself",
                    c.a, c.b, face.id
                )));
            }
            let e = edges.len();
            edges.push(Edge {
                u,
                v,
                cap: c.weight.clone(),
            });
            for (p, q, dart) in [(c.a, c.b, 2 * e), (c.b, c.a, 2 * e + 1)] {
                let before = twin(face.darts[(p + t - 1) % t]);
                inserts
                    .entry(before)
                    .or_default()
                    .push(((p + t - q) % t, dart));
            }
        }
    }
    if edges.len() == g.m() {
        return Ok(g.clone());
    }
    let rotation = g
        .rotation()
        .iter()
        .map(|rot| {
            let mut out = Vec::with_capacity(rot.len());
            for &x in rot {
                out.push(x);
                if let Some(list) = inserts.get_mut(&x) {
                    list.sort_unstable();
                    out.extend(list.iter().map(|&(_, d)| d));
                }
            }
            out
        })
        .collect();
    PlanarGraph::new(g.n(), edges, rotation)
}

/// Exact cut condition check for laminar per-face demands.
pub fn check_cut_condition(
    g: &PlanarGraph,
    per_face: &[(usize, DemandSet)],
) -> Result<CutCertificate> {
    let commodities = face_commodities(g, per_face);
    let gh = embed_with_demands(g, per_face)?;
    let m = g.m();
    let weights: Vec<Rational> = gh
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            if e < m {
                ed.cap.clone()
            } else {
                -ed.cap.clone()
            }
        })
        .collect();
    match min_even_subgraph(&gh, &weights)? {
        None => Ok(CutCertificate::satisfied()),
        Some(cut) => {
            let side = two_colour(&gh, &cut)?;
            let side = centralize(g, &commodities, side);
            Ok(CutCertificate::violated(g, &commodities, &side))
        }
    }
}

/// Checks a face instance whose per-face demands are laminar.
pub fn check_instance(inst: &FaceInstance) -> Result<CutCertificate> {
    check_cut_condition(&inst.graph, &inst.face_demand_sets())
}

/// Any face instance: laminar faces go through [`check_instance`], crossing
/// ones fall back to central-set enumeration up to `brute_limit` vertices.
pub fn check_any(inst: &FaceInstance, brute_limit: usize) -> Result<CutCertificate> {
    if inst.face_demand_sets().iter().all(|(_, d)| d.is_laminar()) {
        check_instance(inst)
    } else {
        brute_force_check(&inst.graph, &inst.commodities(), brute_limit)
    }
}

/// Negative-weight even subgraph of the dual of `gh` with minimum weight,
/// as a membership mask over primal edges, or `None` if every even
/// subgraph weighs at least zero.
fn min_even_subgraph(gh: &PlanarGraph, weights: &[Rational]) -> Result<Option<Vec<bool>>> {
    let dual = build_dual(gh, weights)?;
    let scale = rational::common_denominator(weights.iter());
    let w: Vec<BigInt> = weights.iter().map(|x| (x * &scale).to_integer()).collect();
    let nf = dual.n();

    let mut in_j: Vec<bool> = w.iter().map(|x| x.is_negative()).collect();
    let mut parity = vec![false; nf];
    let mut base = BigInt::zero();
    for de in &dual.edges {
        if in_j[de.primal] {
            base += &w[de.primal];
            if de.a != de.b {
                parity[de.a] ^= true;
                parity[de.b] ^= true;
            }
        }
    }
    if base.is_zero() {
        return Ok(None);
    }
    let terms: Vec<usize> = (0..nf).filter(|&f| parity[f]).collect();

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for de in &dual.edges {
        if de.a != de.b {
            adj[de.a].push((de.b, de.primal));
            adj[de.b].push((de.a, de.primal));
        }
    }
    let abs_w: Vec<BigInt> = w.iter().map(|x| x.abs()).collect();
    let trees: Vec<(Vec<Option<BigInt>>, Vec<usize>)> =
        terms.iter().map(|&s| dijkstra(&adj, &abs_w, s)).collect();
    let k = terms.len();
    let dist = |i: usize, j: usize| trees[i].0[terms[j]].clone();
    let mate = min_perfect_matching(k, &dist)?;

    let mut total = base;
    for i in 0..k {
        let j = mate[i];
        if i < j {
            total += dist(i, j).expect("matched pairs are connected");
            let pred = &trees[i].1;
            let mut f = terms[j];
            while f != terms[i] {
                let e = pred[f];
                in_j[e] ^= true;
                let de = &dual.edges[e];
                f = if de.a == f { de.b } else { de.a };
            }
        }
    }
    if !total.is_negative() {
        return Ok(None);
    }
    let check: BigInt = (0..w.len()).filter(|&e| in_j[e]).map(|e| &w[e]).sum();
    assert_eq!(
        check, total,
        "even subgraph weight disagrees with the matching bound"
    );
    Ok(Some(in_j))
}

/// Shortest distances and predecessor edges. Ties prefer the smaller face
/// index, then the smaller edge id.
fn dijkstra(
    adj: &[Vec<(usize, usize)>],
    w: &[BigInt],
    s: usize,
) -> (Vec<Option<BigInt>>, Vec<usize>) {
    let n = adj.len();
    let mut dist: Vec<Option<BigInt>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(BigInt::zero());
    heap.push(Reverse((BigInt::zero(), s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, e) in &adj[x] {
            let nd = &d + &w[e];
            let better = match &dist[y] {
                None => true,
                Some(cur) => nd < *cur || (nd == *cur && !done[y] && e < pred[y]),
            };
            if better && !done[y] {
                dist[y] = Some(nd.clone());
                pred[y] = e;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    (dist, pred)
}

const MATCHING_WEIGHT_CAP: i64 = 1 << 28;
const DP_LIMIT: usize = 22;

/// Minimum-weight perfect matching on `k` points with optional pair costs.
/// Uses the blossom algorithm when the costs fit its integer type and a
/// subset dynamic program otherwise.
fn min_perfect_matching(
    k: usize,
    dist: &dyn Fn(usize, usize) -> Option<BigInt>,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut pairs = Vec::new();
    let mut max = BigInt::zero();
    for i in 0..k {
        for j in i + 1..k {
            if let Some(d) = dist(i, j) {
                if d > max {
                    max = d.clone();
                }
                pairs.push((i, j, d));
            }
        }
    }
    if let Some(maxv) = max.to_i64().filter(|&m| m < MATCHING_WEIGHT_CAP) {
        let big = maxv + 1;
        let edges: Vec<(usize, usize, i32)> = pairs
            .iter()
            .map(|(i, j, d)| (*i, *j, (big - d.to_i64().expect("bounded")) as i32))
            .collect();
        let mates = mwmatching::Matching::new(edges).max_cardinality().solve();
        if mates.len() == k && mates.iter().all(|&m| m != mwmatching::SENTINEL) {
            return Ok(mates);
        }
        return Err(Error::EmbeddingInvalid(
            "odd dual component while matching".into(),
        ));
    }
    if k > DP_LIMIT {
        return Err(Error::TooLarge {
            n: k,
            limit: DP_LIMIT,
        });
    }
    Ok(matching_dp(k, dist))
}

/// Exact subset dynamic program; the lowest unmatched point is always
/// matched next.
pub(crate) fn matching_dp(k: usize, dist: &dyn Fn(usize, usize) -> Option<BigInt>) -> Vec<usize> {
    let full = (1usize << k) - 1;
    let mut best: Vec<Option<BigInt>> = vec![None; 1 << k];
    let mut choice = vec![usize::MAX; 1 << k];
    best[0] = Some(BigInt::zero());
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        for j in i + 1..k {
            if mask >> j & 1 == 0 {
                continue;
            }
            let (Some(d), Some(rest)) = (dist(i, j), best[mask & !(1 << i) & !(1 << j)].clone())
            else {
                continue;
            };
            let cand = rest + d;
            if best[mask].as_ref().is_none_or(|b| cand < *b) {
                best[mask] = Some(cand);
                choice[mask] = j;
            }
        }
    }
    let mut mates = vec![usize::MAX; k];
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask];
        mates[i] = j;
        mates[j] = i;
        mask &= !(1 << i) & !(1 << j);
    }
    mates
}

/// Vertex side whose cut in `gh` is exactly the masked edge set.
fn two_colour(gh: &PlanarGraph, cut: &[bool]) -> Result<Vec<bool>> {
    let n = gh.n();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let adj = gh.adjacency();
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let cx = colour[x].expect("set");
            for &(y, e) in &adj[x] {
                let want = cx ^ cut[e];
                match colour[y] {
                    None => {
                        colour[y] = Some(want);
                        stack.push(y);
                    }
                    Some(cy) if cy != want => {
                        return Err(Error::EmbeddingInvalid(
                            "dual even subgraph is not a cut".into(),
                        ));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(colour.into_iter().map(|c| c.unwrap_or(false)).collect())
}

fn components_within(g: &PlanarGraph, side: &[bool], which: bool) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if side[s] != which || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &(y, _) in &adj[x] {
                if side[y] == which && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn violates(g: &PlanarGraph, commodities: &[Commodity], side: &[bool]) -> bool {
    demand_across(commodities, side) > g.cut_capacity(side)
}

/// Shrinks a violated cut to one whose sides are connected. Supply across a
/// side splits exactly over its components while demand splits at most, so
/// some component is itself violated; doing this once per side gives a
/// central set when `g` is connected.
pub fn centralize(g: &PlanarGraph, commodities: &[Commodity], side: Vec<bool>) -> Vec<bool> {
    debug_assert!(violates(g, commodities, &side));
    let mut side = side;
    for which in [true, false] {
        let comp = components_within(g, &side, which)
            .into_iter()
            .map(|c| side_of(g.n(), &c))
            .find(|s| violates(g, commodities, s))
            .expect("a violated cut has a violated component");
        side = comp;
    }
    if side[0] {
        side
    } else {
        side.into_iter().map(|b| !b).collect()
    }
}

/// Enumerates central sets (both sides connected) and returns the first
/// violated one. On a disconnected graph every vertex subset is tried.
pub fn brute_force_check(
    g: &PlanarGraph,
    commodities: &[Commodity],
    limit: usize,
) -> Result<CutCertificate> {
    let n = g.n();
    if n > limit || n >= usize::BITS as usize {
        return Err(Error::TooLarge { n, limit });
    }
    if n < 2 {
        return Ok(CutCertificate::satisfied());
    }
    let connected = g.is_connected();
    // Vertex n-1 stays outside, so each cut is seen once.
    for mask in 1usize..(1 << (n - 1)) {
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        if connected
            && (components_within(g, &side, true).len() != 1
                || components_within(g, &side, false).len() != 1)
        {
            continue;
        }
        if violates(g, commodities, &side) {
            return Ok(CutCertificate::violated(g, commodities, &side));
        }
    }
    Ok(CutCertificate::satisfied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::embed_straight_line;
    use crate::rational::int;

    fn hexagon(cap: i64) -> PlanarGraph {
        let pts: Vec<(f64, f64)> = (0..6)
            .map(|i| {
                let a = i as f64 * std::f64::consts::PI / 3.0;
                (a.cos(), a.sin())
            })
            .collect();
        let ends: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        embed_straight_line(&pts, &ends, &vec![int(cap); 6]).unwrap()
    }

    fn on_face(g: &PlanarGraph, pairs: &[(usize, usize, i64)]) -> Vec<(usize, DemandSet)> {
        let f = &g.faces()[0];
        let mut d = DemandSet::new(f.len());
        for &(u, v, w) in pairs {
            d.add(f.position_of(u).unwrap(), f.position_of(v).unwrap(), int(w));
        }
        vec![(0, d)]
    }

    #[test]
    fn hexagon_demand_satisfied_then_violated() {
        let g = hexagon(1);
        let cert = check_cut_condition(&g, &on_face(&g, &[(0, 3, 1)])).unwrap();
        assert_eq!(cert.verdict, Verdict::Satisfied);
        let pf = on_face(&g, &[(0, 3, 3)]);
        let cert = check_cut_condition(&g, &pf).unwrap();
        assert!(cert.is_violated());
        assert_eq!(cert.supply, int(2));
        assert_eq!(cert.demand, int(3));
        assert!(cert.verify(&g, &face_commodities(&g, &pf)));
    }

    #[test]
    fn nested_chords_embed() {
        let g = hexagon(1);
        let f = &g.faces()[0];
        let mut d = DemandSet::new(6);
        d.add(0, 3, int(1));
        d.add(1, 2, int(1));
        let gh = embed_with_demands(&g, &[(0, d)]).unwrap();
        assert_eq!(gh.faces().len(), g.faces().len() + 2);
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn chords_sharing_endpoints_embed() {
        let g = hexagon(1);
        let d = DemandSet::from_pairs(6, &[(0, 2), (0, 3), (0, 4), (2, 4), (3, 5)]);
        assert!(!d.is_laminar());
        let d = DemandSet::from_pairs(6, &[(0, 2), (0, 3), (0, 4), (2, 3), (4, 5), (4, 0)]);
        assert!(d.is_laminar());
        let gh = embed_with_demands(&g, &[(0, d.clone())]).unwrap();
        assert_eq!(gh.faces().len(), g.faces().len() + d.len());
    }

    #[test]
    fn crossing_chords_rejected() {
        let g = hexagon(1);
        let d = DemandSet::from_pairs(6, &[(0, 3), (1, 4)]);
        assert!(matches!(
            embed_with_demands(&g, &[(0, d)]),
            Err(Error::NotLaminar(_))
        ));
    }

    #[test]
    fn brute_force_agrees_on_hexagon() {
        let g = hexagon(1);
        for w in 1..4 {
            let pf = on_face(&g, &[(0, 3, w), (1, 2, 1)]);
            let fast = check_cut_condition(&g, &pf).unwrap();
            let slow = brute_force_check(&g, &face_commodities(&g, &pf), 16).unwrap();
            assert_eq!(fast.verdict, slow.verdict);
        }
    }

    #[test]
    fn equality_is_allowed() {
        let g = embed_straight_line(&[(0.0, 0.0), (1.0, 0.0)], &[(0, 1)], &[int(2)]).unwrap();
        let c = [Commodity {
            source: 0,
            sink: 1,
            demand: int(2),
        }];
        assert_eq!(
            brute_force_check(&g, &c, 16).unwrap().verdict,
            Verdict::Satisfied
        );
        let c = [Commodity {
            source: 0,
            sink: 1,
            demand: int(3),
        }];
        assert!(brute_force_check(&g, &c, 16).unwrap().is_violated());
    }

    #[test]
    fn dp_matches_blossom() {
        let pts = [(0i64, 0i64), (5, 1), (2, 7), (9, 3), (4, 4), (8, 8)];
        let dist = |i: usize, j: usize| {
            let (a, b) = (pts[i], pts[j]);
            Some(BigInt::from((a.0 - b.0).abs() + (a.1 - b.1).abs()))
        };
        let cost = |m: &[usize]| -> BigInt {
            (0..6)
                .filter(|&i| i < m[i])
                .map(|i| dist(i, m[i]).unwrap())
                .sum()
        };
        let a = min_perfect_matching(6, &dist).unwrap();
        let b = matching_dp(6, &dist);
        assert_eq!(cost(&a), cost(&b));
    }
}
