//! Gap routing and approximate sparsest cuts for face instances.
//!
//! Each face's demands are replaced by a laminar family. The `i`-th members
//! of all faces form `H_i`, which is routed in `α_i G`. The flow paths used
//! for face `F` then form the supply graph in which the original demands of
//! `F` are routed. Both stages check the cut condition before routing.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cutcheck::{centralize, check_cut_condition, CutCertificate, Verdict};
use crate::facedemands::DemandSet;
use crate::laminar::{approximate, Phase};
use crate::planar::{
    demand_across, split_cut_vertices, Block, Commodity, FaceInstance, PlanarGraph,
};
use crate::rational::{self, Rational};
use crate::route::{edge_loads, max_concurrent_flow_with, Flow, FlowPath, RouteOptions};
use crate::{Error, Result};

/// The demands `H_i` of one family index, spread over faces, with the
/// capacity multiplier `α_i`.
#[derive(Debug, Clone)]
pub struct Part {
    pub alpha: Rational,
    pub per_face: Vec<(usize, DemandSet)>,
}

/// Families for every face of `inst`, merged by index. Separable faces take
/// part in the first level. Returns the parts and `Σα`, counting `1 + 2` for
/// every level in use.
pub fn build_parts(inst: &FaceInstance) -> Result<(Vec<Part>, Rational)> {
    let mut parts: BTreeMap<(usize, u8), Part> = BTreeMap::new();
    for (fi, d) in inst.face_demand_sets() {
        let fam = approximate(&d)?;
        for m in fam.members {
            let key = (
                m.level.unwrap_or(1),
                if m.phase == Phase::One { 1 } else { 2 },
            );
            parts
                .entry(key)
                .or_insert_with(|| Part {
                    alpha: m.alpha.clone(),
                    per_face: Vec::new(),
                })
                .per_face
                .push((fi, m.set));
        }
    }
    let mut levels: Vec<usize> = parts.keys().map(|k| k.0).collect();
    levels.dedup();
    let gap = rational::int(3 * levels.len() as i64);
    Ok((parts.into_values().collect(), gap))
}

#[derive(Debug, Clone)]
pub struct GapRouting {
    /// Paths on the original edges, one commodity per input demand, each
    /// routed in full.
    pub flow: Flow,
    /// `Σα`, the largest over the 2-connected blocks.
    pub gap_bound: Rational,
    /// Largest `load / capacity` over edges with positive capacity.
    pub max_load_ratio: Rational,
    /// Cut checks run before routing, first stage then second.
    pub checks: (usize, usize),
}

/// `gap · (1 + 2ε)`, the load factor the routing is guaranteed to respect.
pub fn load_bound(gap: &Rational, eps: f64) -> Rational {
    let e = Rational::from_float(eps).expect("finite eps");
    gap * (Rational::one() + rational::int(2) * e)
}

pub fn route_with_gap(inst: &FaceInstance, eps: f64) -> Result<GapRouting> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, 1/2], got {eps}"
        )));
    }
    let g = &inst.graph;
    let blocks = split_cut_vertices(inst)?;
    let mut gap_bound = Rational::zero();
    let mut checks = (0, 0);
    // Per original demand: the pieces it was split into, as (from, to, paths).
    let mut pieces: Vec<Vec<Piece>> = vec![Vec::new(); inst.demands.len()];

    for block in &blocks {
        let b = &block.instance;
        if b.demands.is_empty() {
            continue;
        }
        let (parts, gap) = build_parts(b)?;
        if gap > gap_bound {
            gap_bound = gap;
        }
        let bg = &b.graph;

        // First stage.
        let mut face_caps: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for part in &parts {
            let scaled = bg.scaled(&part.alpha);
            checks.0 += 1;
            let cert = check_cut_condition(&scaled, &part.per_face)?;
            if cert.is_violated() {
                return Err(lifted_violation(inst, block, &cert.set));
            }
            let mut commodities = Vec::new();
            let mut face_of = Vec::new();
            for (fi, d) in &part.per_face {
                let face = &bg.faces()[*fi];
                for c in d.chords() {
                    commodities.push(Commodity {
                        source: face.vertices[c.a],
                        sink: face.vertices[c.b],
                        demand: c.weight,
                    });
                    face_of.push(*fi);
                }
            }
            let paths = route_exactly(&scaled, &commodities, eps, "first stage")?;
            for p in paths {
                let caps = face_caps
                    .entry(face_of[p.demand])
                    .or_insert_with(|| vec![Rational::zero(); bg.m()]);
                for &e in &p.edges {
                    caps[e] += &p.value;
                }
            }
        }

        // Second stage, face by face.
        let mut by_face: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, d) in b.demands.iter().enumerate() {
            by_face
                .entry(bg.face_index(d.face).expect("validated"))
                .or_default()
                .push(i);
        }
        for (fi, local) in by_face {
            let caps = face_caps
                .remove(&fi)
                .unwrap_or_else(|| vec![Rational::zero(); bg.m()]);
            let gf = bg.with_capacities(&caps);
            let commodities: Vec<Commodity> = local
                .iter()
                .map(|&i| {
                    let d = &b.demands[i];
                    Commodity {
                        source: d.u,
                        sink: d.v,
                        demand: rational::int(d.value as i64),
                    }
                })
                .collect();
            checks.1 += 1;
            if let Some(side) = segment_cut_check(&gf, fi, &commodities) {
                return Err(Error::OracleShortfall(format!(
                    "second stage supply for face {} fails the cut condition on {:?}",
                    bg.faces()[fi].id,
                    (0..side.len()).filter(|&v| side[v]).collect::<Vec<_>>()
                )));
            }
            let paths = route_exactly(&gf, &commodities, eps, "second stage")?;
            let mut per: Vec<Vec<(Vec<usize>, Rational)>> = vec![Vec::new(); local.len()];
            for p in paths {
                let edges = p.edges.iter().map(|&e| block.edges[e]).collect();
                per[p.demand].push((edges, p.value));
            }
            for (k, &i) in local.iter().enumerate() {
                let d = &b.demands[i];
                let from = block.vertices[d.u];
                let to = block.vertices[d.v];
                pieces[block.origins[i]].push((from, to, std::mem::take(&mut per[k])));
            }
        }
    }

    let mut paths = Vec::new();
    for (di, d) in inst.demands.iter().enumerate() {
        for (edges, value) in splice(d.u, d.v, std::mem::take(&mut pieces[di])) {
            paths.push(FlowPath {
                demand: di,
                edges,
                value,
            });
        }
    }
    let flow = Flow {
        paths,
        lambda: Rational::one(),
    };
    let loads = edge_loads(g, &flow.paths);
    let mut max_load_ratio = Rational::zero();
    for (e, l) in loads.iter().enumerate() {
        let cap = &g.edges()[e].cap;
        if cap.is_zero() {
            if !l.is_zero() {
                return Err(Error::OracleShortfall(format!(
                    "flow uses edge {e} of capacity 0"
                )));
            }
        } else if l / cap > max_load_ratio {
            max_load_ratio = l / cap;
        }
    }
    if gap_bound.is_zero() {
        gap_bound = rational::int(3);
    }
    Ok(GapRouting {
        flow,
        gap_bound,
        max_load_ratio,
        checks,
    })
}

/// Routes every commodity in full: oracle at `ε/2`, then every commodity
/// scaled to its exact demand. Loads grow by at most `1/λ`.
fn route_exactly(
    g: &PlanarGraph,
    commodities: &[Commodity],
    eps: f64,
    stage: &str,
) -> Result<Vec<FlowPath>> {
    let half = eps / 2.0;
    let opts = RouteOptions {
        eps: half,
        target: Some(1.0 - 0.9 * half),
        ..RouteOptions::new(half)
    };
    let (flow, stats) = max_concurrent_flow_with(g, commodities, &opts)?;
    let floor = Rational::from_float(1.0 - half).expect("finite");
    if flow.lambda < floor {
        return Err(Error::OracleShortfall(format!(
            "{stage}: routed {} of every demand (upper bound {:.4}) after {} phases",
            rational::fmt(&flow.lambda),
            stats.upper_bound,
            stats.phases
        )));
    }
    let routed = flow.routed(commodities.len());
    Ok(flow
        .paths
        .into_iter()
        .map(|p| {
            let value = &p.value * &commodities[p.demand].demand / &routed[p.demand];
            FlowPath { value, ..p }
        })
        .collect())
}

/// Part of a demand routed inside one block: `(from, to, paths)`.
type Piece = (usize, usize, Vec<(Vec<usize>, Rational)>);

/// Joins the per-block pieces of one demand into end-to-end paths. Pieces
/// are chained by their endpoints and their path values merged in order.
fn splice(source: usize, sink: usize, mut pieces: Vec<Piece>) -> Vec<(Vec<usize>, Rational)> {
    let mut ordered = Vec::with_capacity(pieces.len());
    let mut at = source;
    while at != sink {
        let k = pieces
            .iter()
            .position(|p| p.0 == at)
            .expect("pieces chain from source to sink");
        let piece = pieces.swap_remove(k);
        at = piece.1;
        ordered.push(piece.2);
    }
    if ordered.len() == 1 {
        return ordered.pop().expect("one piece");
    }
    let mut idx = vec![0usize; ordered.len()];
    let mut left: Vec<Rational> = ordered.iter().map(|p| p[0].1.clone()).collect();
    let mut out = Vec::new();
    loop {
        let step = left.iter().min().expect("nonempty").clone();
        let mut edges = Vec::new();
        for (p, &i) in ordered.iter().zip(&idx) {
            edges.extend_from_slice(&p[i].0);
        }
        out.push((edges, step.clone()));
        let mut done = false;
        for k in 0..ordered.len() {
            left[k] -= &step;
            if left[k].is_zero() {
                idx[k] += 1;
                if idx[k] == ordered[k].len() {
                    done = true;
                } else {
                    left[k] = ordered[k][idx[k]].1.clone();
                }
            }
        }
        if done {
            break;
        }
    }
    out
}

/// Maps a violated cut of a block back to the whole instance: everything
/// hanging off a block vertex joins that vertex's side.
fn lifted_violation(inst: &FaceInstance, block: &Block, local_set: &[usize]) -> Error {
    let side = lift_side(inst, block, local_set);
    let g = &inst.graph;
    let commodities = inst.commodities();
    if demand_across(&commodities, &side) <= g.cut_capacity(&side) {
        return Error::OracleShortfall("block cut does not violate the input instance".into());
    }
    let side = centralize(g, &commodities, side);
    Error::CutViolated(Box::new(certificate(g, &commodities, &side)))
}

fn lift_side(inst: &FaceInstance, block: &Block, local_set: &[usize]) -> Vec<bool> {
    let g = &inst.graph;
    let mut in_block = vec![None; g.n()];
    for (l, &v) in block.vertices.iter().enumerate() {
        in_block[v] = Some(local_set.contains(&l));
    }
    let mut block_edge = vec![false; g.m()];
    for &e in &block.edges {
        block_edge[e] = true;
    }
    let adj = g.adjacency();
    let mut side = vec![false; g.n()];
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        let Some(colour) = in_block[s] else { continue };
        side[s] = colour;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in &adj[x] {
                if !block_edge[e] && !seen[y] && in_block[y].is_none() {
                    seen[y] = true;
                    side[y] = colour;
                    stack.push(y);
                }
            }
        }
    }
    side
}

fn certificate(g: &PlanarGraph, commodities: &[Commodity], side: &[bool]) -> CutCertificate {
    let supply = g.cut_capacity(side);
    let demand = demand_across(commodities, side);
    let verdict = if demand > supply {
        Verdict::Violated
    } else {
        Verdict::Satisfied
    };
    CutCertificate {
        set: (0..side.len()).filter(|&v| side[v]).collect(),
        supply,
        demand,
        verdict,
    }
}

/// Cut condition for demands that all sit on face `fi`: every boundary
/// segment must be separable from the rest of the boundary by at least its
/// demand. Returns a violated side if there is one.
pub fn segment_cut_check(
    g: &PlanarGraph,
    fi: usize,
    commodities: &[Commodity],
) -> Option<Vec<bool>> {
    let face = &g.faces()[fi];
    let t = face.len();
    for start in 0..t {
        // Segments avoiding position t - 1; their complements cover the rest.
        for len in 1..t - start {
            let mut side = vec![false; g.n()];
            for p in start..start + len {
                side[face.vertices[p]] = true;
            }
            let demand = demand_across(commodities, &side);
            if demand.is_zero() {
                continue;
            }
            let sinks: Vec<usize> = (0..t)
                .filter(|&p| p < start || p >= start + len)
                .map(|p| face.vertices[p])
                .collect();
            let sources: Vec<usize> = (start..start + len).map(|p| face.vertices[p]).collect();
            let (value, cut) = min_cut(g, &sources, &sinks);
            if value < demand {
                return Some(cut);
            }
        }
    }
    None
}

/// Exact minimum cut between two vertex sets, by shortest augmenting
/// paths. Returns the value and the source side.
pub fn min_cut(g: &PlanarGraph, sources: &[usize], sinks: &[usize]) -> (Rational, Vec<bool>) {
    let n = g.n();
    let mut is_src = vec![false; n];
    let mut is_snk = vec![false; n];
    sources.iter().for_each(|&v| is_src[v] = true);
    sinks.iter().for_each(|&v| is_snk[v] = true);
    let adj = g.adjacency();
    let caps = g.capacities();
    // Signed flow along each edge from `u` to `v`.
    let mut flow = vec![Rational::zero(); g.m()];
    let residual = |e: usize, from: usize, flow: &[Rational]| {
        if g.edges()[e].u == from {
            &caps[e] - &flow[e]
        } else {
            &caps[e] + &flow[e]
        }
    };
    let mut total = Rational::zero();
    loop {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = is_src.clone();
        let mut queue: std::collections::VecDeque<usize> = sources.iter().copied().collect();
        let mut reached = None;
        while let Some(x) = queue.pop_front() {
            if is_snk[x] {
                reached = Some(x);
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] && residual(e, x, &flow) > Rational::zero() {
                    seen[y] = true;
                    pred[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        let Some(t) = reached else {
            return (total, seen);
        };
        let mut push: Option<Rational> = None;
        let mut y = t;
        while let Some((x, e)) = pred[y] {
            let r = residual(e, x, &flow);
            if push.as_ref().is_none_or(|p| r < *p) {
                push = Some(r);
            }
            y = x;
        }
        let push = push.expect("a sink is never a source");
        let mut y = t;
        while let Some((x, e)) = pred[y] {
            if g.edges()[e].u == x {
                flow[e] += &push;
            } else {
                flow[e] -= &push;
            }
            y = x;
        }
        total += push;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsestCut {
    /// Side of the returned cut, empty when there is no demand.
    pub set: Vec<usize>,
    pub supply: Rational,
    pub demand: Rational,
    /// `supply / demand`, or `None` when there is no demand.
    pub ratio: Option<Rational>,
    /// Factor the ratio is guaranteed to be within.
    pub factor: Rational,
    pub probes: usize,
}

/// Binary search on `λ` over the checks of `(α_i G, λ H_i)`. Every
/// infeasible probe yields a cut of ratio below `λ`; the best one found is
/// returned.
pub fn approx_sparsest_cut(inst: &FaceInstance) -> Result<SparsestCut> {
    let g = &inst.graph;
    let commodities = inst.commodities();
    let total: u64 = inst.total_demand();
    let blocks = split_cut_vertices(inst)?;
    let mut work = Vec::new();
    let mut factor = Rational::zero();
    for block in &blocks {
        if block.instance.demands.is_empty() {
            continue;
        }
        let (parts, gap) = build_parts(&block.instance)?;
        if gap > factor {
            factor = gap;
        }
        work.push((block, parts));
    }
    if total == 0 || work.is_empty() {
        return Ok(SparsestCut {
            set: Vec::new(),
            supply: Rational::zero(),
            demand: Rational::zero(),
            ratio: None,
            factor: rational::int(3),
            probes: 0,
        });
    }

    let cap_sum: Rational = g.edges().iter().map(|e| e.cap.clone()).sum();
    let alpha_max = work
        .iter()
        .flat_map(|(_, ps)| ps.iter().map(|p| p.alpha.clone()))
        .max()
        .expect("some part");
    let w_min = work
        .iter()
        .flat_map(|(_, ps)| {
            ps.iter().flat_map(|p| {
                p.per_face
                    .iter()
                    .flat_map(|(_, d)| d.chords().map(|c| c.weight))
            })
        })
        .min()
        .expect("some chord");
    let mut lo = Rational::zero();
    let mut hi = alpha_max * cap_sum / w_min + Rational::one();
    let cap_den = rational::common_denominator(g.edges().iter().map(|e| &e.cap));
    let td = rational::int(total as i64);
    let tol = Rational::one() / (&td * &td * Rational::from_integer(cap_den));

    let mut best: Option<(Rational, Vec<bool>)> = None;
    let mut max_feasible = Rational::zero();
    let mut min_infeasible: Option<Rational> = None;
    let mut probes = 0;
    let mut probe = |lambda: &Rational| -> Result<Option<Vec<bool>>> {
        probes += 1;
        for (block, parts) in &work {
            let bg = &block.instance.graph;
            for part in parts {
                let scaled_g = bg.scaled(&part.alpha);
                let scaled_h: Vec<(usize, DemandSet)> = part
                    .per_face
                    .iter()
                    .map(|(fi, d)| (*fi, d.scaled(lambda)))
                    .collect();
                let cert = check_cut_condition(&scaled_g, &scaled_h)?;
                if cert.is_violated() {
                    return Ok(Some(lift_side(inst, block, &cert.set)));
                }
            }
        }
        Ok(None)
    };

    let mut record =
        |lambda: &Rational, found: Option<Vec<bool>>, best: &mut Option<(Rational, Vec<bool>)>| {
            match found {
                Some(side) => {
                    let demand = demand_across(&commodities, &side);
                    let ratio = g.cut_capacity(&side) / &demand;
                    assert!(ratio < *lambda, "probe cut is not below the probed ratio");
                    if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
                        *best = Some((ratio, side));
                    }
                    if min_infeasible.as_ref().is_none_or(|m| lambda < m) {
                        min_infeasible = Some(lambda.clone());
                    }
                }
                None => {
                    if *lambda > max_feasible {
                        max_feasible = lambda.clone();
                    }
                }
            }
            if let Some(m) = &min_infeasible {
                assert!(max_feasible < *m, "feasibility is not monotone in lambda");
            }
        };

    let top = probe(&hi)?;
    record(&hi, top.clone(), &mut best);
    if top.is_none() {
        return Err(Error::OracleShortfall(
            "upper end of the search is feasible".into(),
        ));
    }
    while &hi - &lo >= tol {
        let mid = (&lo + &hi) / rational::int(2);
        let found = probe(&mid)?;
        let infeasible = found.is_some();
        record(&mid, found, &mut best);
        if infeasible {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (ratio, side) = best.expect("the top probe found a cut");
    Ok(SparsestCut {
        set: (0..side.len()).filter(|&v| side[v]).collect(),
        supply: g.cut_capacity(&side),
        demand: demand_across(&commodities, &side),
        ratio: Some(ratio),
        factor,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{embed_straight_line, FaceDemand};
    use crate::rational::int;
    use crate::route::validate_flow;

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

    fn demand(g: &PlanarGraph, u: usize, v: usize, value: u64) -> FaceDemand {
        FaceDemand {
            u,
            v,
            face: g.faces()[0].id,
            value,
        }
    }

    #[test]
    fn single_demand_ample_capacity() {
        let g = hexagon(10);
        let inst = FaceInstance::new(g.clone(), vec![demand(&g, 0, 3, 1)]).unwrap();
        let r = route_with_gap(&inst, 0.05).unwrap();
        assert_eq!(r.gap_bound, int(3));
        let c = inst.commodities();
        assert!(validate_flow(&g, &c, &r.flow, &load_bound(&r.gap_bound, 0.05)).is_valid());
        assert_eq!(r.flow.routed(1)[0], int(1));
    }

    #[test]
    fn over_demand_is_refuted() {
        let g = hexagon(1);
        let inst = FaceInstance::new(g.clone(), vec![demand(&g, 0, 3, 3)]).unwrap();
        match route_with_gap(&inst, 0.05) {
            Err(Error::CutViolated(cert)) => assert!(cert.verify(&g, &inst.commodities())),
            other => panic!("expected a violated cut, got {other:?}"),
        }
    }

    #[test]
    fn crossing_pair_routes() {
        let g = hexagon(1);
        let inst =
            FaceInstance::new(g.clone(), vec![demand(&g, 0, 3, 1), demand(&g, 1, 4, 1)]).unwrap();
        let r = route_with_gap(&inst, 0.05).unwrap();
        let c = inst.commodities();
        let rep = validate_flow(&g, &c, &r.flow, &load_bound(&r.gap_bound, 0.05));
        assert!(rep.is_valid(), "{rep:?}");
    }

    #[test]
    fn min_cut_on_hexagon() {
        let g = hexagon(2);
        let (v, side) = min_cut(&g, &[0], &[3]);
        assert_eq!(v, int(4));
        assert!(side[0] && !side[3]);
    }

    #[test]
    fn sparsest_cut_on_hexagon() {
        let g = hexagon(1);
        let inst =
            FaceInstance::new(g.clone(), vec![demand(&g, 0, 3, 1), demand(&g, 1, 2, 1)]).unwrap();
        let s = approx_sparsest_cut(&inst).unwrap();
        // The best cut has ratio 1: {1, 2} has supply 2 and demand 2.
        let r = s.ratio.unwrap();
        assert!(r >= int(1) && r <= int(3), "{r}");
    }

    #[test]
    fn splice_two_pieces() {
        let a = vec![
            (vec![0], rational::frac(1, 2)),
            (vec![1], rational::frac(1, 2)),
        ];
        let b = vec![
            (vec![5], rational::frac(1, 3)),
            (vec![6], rational::frac(2, 3)),
        ];
        let out = splice(0, 2, vec![(1, 2, b), (0, 1, a)]);
        let total: Rational = out.iter().map(|p| p.1.clone()).sum();
        assert_eq!(total, int(1));
        assert_eq!(out[0].0, vec![0, 5]);
        assert_eq!(out.len(), 3);
    }
}
