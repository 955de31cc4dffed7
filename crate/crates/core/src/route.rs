//! Concurrent multicommodity flow by multiplicative weights, with exact
//! validation.
//!
//! The oracle keeps a length per edge, routes every commodity in full once
//! per phase along shortest paths, and stretches the lengths of the edges it
//! used. Any length function also bounds the optimum from above, so the loop
//! stops once the flow it holds is provably within the requested factor.
//! The result is moved onto an exact rational grid and scaled to fit the
//! capacities exactly.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use num_traits::{One, Zero};

use crate::planar::{Commodity, PlanarGraph};
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    pub demand: usize,
    /// Edge ids from the commodity's source to its sink.
    pub edges: Vec<usize>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub paths: Vec<FlowPath>,
    /// Fraction of every demand that is routed.
    pub lambda: Rational,
}

impl Flow {
    pub fn routed(&self, k: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); k];
        for p in &self.paths {
            out[p.demand] += &p.value;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteOptions {
    pub eps: f64,
    /// Stop as soon as the flow certifies this concurrency.
    pub target: Option<f64>,
    pub max_phases: usize,
}

impl RouteOptions {
    pub fn new(eps: f64) -> Self {
        RouteOptions {
            eps,
            target: None,
            max_phases: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteStats {
    pub phases: usize,
    /// Best upper bound on the optimal concurrency seen.
    pub upper_bound: f64,
    pub lower_bound: f64,
}

const GRID_BITS: u32 = 32;

pub fn max_concurrent_flow(g: &PlanarGraph, commodities: &[Commodity], eps: f64) -> Result<Flow> {
    Ok(max_concurrent_flow_with(g, commodities, &RouteOptions::new(eps))?.0)
}

pub fn max_concurrent_flow_with(
    g: &PlanarGraph,
    commodities: &[Commodity],
    opts: &RouteOptions,
) -> Result<(Flow, RouteStats)> {
    if !(opts.eps > 0.0 && opts.eps < 1.0) {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, 1), got {}",
            opts.eps
        )));
    }
    let n = g.n();
    let m = g.m();
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let cap: Vec<f64> = g.edges().iter().map(|e| rational::to_f64(&e.cap)).collect();
    let usable: Vec<bool> = g.edges().iter().map(|e| e.cap > Rational::zero()).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, e) in g.edges().iter().enumerate() {
        if usable[id] {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
    }

    let mut fixed: Vec<FlowPath> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for (j, c) in commodities.iter().enumerate() {
        if c.demand <= Rational::zero() {
            continue;
        }
        if c.source == c.sink {
            fixed.push(FlowPath {
                demand: j,
                edges: Vec::new(),
                value: c.demand.clone(),
            });
            continue;
        }
        if !reachable(&adj, c.source, c.sink) {
            return Err(Error::Disconnected(j));
        }
        active.push(j);
    }
    if active.is_empty() {
        let flow = Flow {
            paths: fixed,
            lambda: Rational::one(),
        };
        let stats = RouteStats {
            phases: 0,
            upper_bound: f64::INFINITY,
            lower_bound: f64::INFINITY,
        };
        return Ok((flow, stats));
    }

    // Scale demands so that the optimum lies in [1, k].
    let k = active.len() as f64;
    let zeta = active
        .iter()
        .map(|&j| {
            let c = &commodities[j];
            max_flow_f64(&adj, &ends, &cap, c.source, c.sink) / rational::to_f64(&c.demand)
        })
        .fold(f64::INFINITY, f64::min);
    let scale = zeta / k;
    let dem: Vec<f64> = active
        .iter()
        .map(|&j| rational::to_f64(&commodities[j].demand) * scale)
        .collect();

    let eta = opts.eps / 2.0;
    let stop = 1.0 - 0.9 * opts.eps;
    let mut len: Vec<f64> = (0..m)
        .map(|e| if usable[e] { 1.0 / cap[e] } else { 0.0 })
        .collect();
    let mut load = vec![0.0f64; m];
    let mut paths: Vec<BTreeMap<Vec<usize>, f64>> = vec![BTreeMap::new(); active.len()];
    let mut upper = f64::INFINITY;
    let mut lower = 0.0;
    let mut phases = 0;

    while phases < opts.max_phases {
        let volume: f64 = (0..m).filter(|&e| usable[e]).map(|e| len[e] * cap[e]).sum();
        let mut alpha = 0.0;
        let mut by_source: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (i, &j) in active.iter().enumerate() {
            let s = commodities[j].source;
            let dist = by_source
                .entry(s)
                .or_insert_with(|| dijkstra(&adj, &len, s).0);
            alpha += dem[i] * dist[commodities[j].sink];
        }
        if alpha > 0.0 {
            upper = upper.min(volume / alpha);
        }

        for (i, &j) in active.iter().enumerate() {
            let (s, t) = (commodities[j].source, commodities[j].sink);
            let mut remaining = dem[i];
            while remaining > 1e-12 * dem[i] {
                let (_, pred) = dijkstra(&adj, &len, s);
                let path = trace(g, &pred, s, t);
                let bottleneck = path.iter().map(|&e| cap[e]).fold(f64::INFINITY, f64::min);
                let u = remaining.min(bottleneck);
                for &e in &path {
                    load[e] += u;
                    len[e] *= 1.0 + eta * u / cap[e];
                }
                *paths[i].entry(path).or_insert(0.0) += u;
                remaining -= u;
            }
        }
        phases += 1;

        let congestion = (0..m)
            .filter(|&e| usable[e])
            .map(|e| load[e] / cap[e])
            .fold(0.0, f64::max);
        lower = phases as f64 / congestion;
        let target_met = opts.target.is_some_and(|t| lower * scale >= t);
        if lower >= stop * upper || target_met {
            break;
        }
        let longest = len.iter().copied().fold(0.0, f64::max);
        if longest > 1e100 {
            len.iter_mut().for_each(|x| *x /= longest);
        }
    }

    let flow = exact_flow(g, commodities, &active, &paths, fixed);
    let stats = RouteStats {
        phases,
        upper_bound: upper * scale,
        lower_bound: lower * scale,
    };
    Ok((flow, stats))
}

/// Moves the float path values onto a dyadic grid, scales them so no edge
/// is overloaded, and reads off the exact concurrency.
fn exact_flow(
    g: &PlanarGraph,
    commodities: &[Commodity],
    active: &[usize],
    paths: &[BTreeMap<Vec<usize>, f64>],
    fixed: Vec<FlowPath>,
) -> Flow {
    let mut out: Vec<FlowPath> = Vec::new();
    for (i, &j) in active.iter().enumerate() {
        for (p, &v) in &paths[i] {
            let value = rational::from_f64_floor(v, GRID_BITS);
            if !value.is_zero() {
                out.push(FlowPath {
                    demand: j,
                    edges: p.clone(),
                    value,
                });
            }
        }
    }
    let loads = edge_loads(g, &out);
    let mut kappa = Rational::zero();
    for (e, l) in loads.iter().enumerate() {
        if !l.is_zero() {
            let r = l / &g.edges()[e].cap;
            if r > kappa {
                kappa = r;
            }
        }
    }
    if !kappa.is_zero() {
        for p in out.iter_mut() {
            p.value = rational::floor_to_grid(&(&p.value / &kappa), GRID_BITS);
        }
        out.retain(|p| !p.value.is_zero());
    }
    out.extend(fixed);
    out.sort_by(|a, b| (a.demand, &a.edges).cmp(&(b.demand, &b.edges)));
    let routed = {
        let mut r = vec![Rational::zero(); commodities.len()];
        for p in &out {
            r[p.demand] += &p.value;
        }
        r
    };
    let lambda = commodities
        .iter()
        .enumerate()
        .filter(|(_, c)| c.demand > Rational::zero())
        .map(|(j, c)| &routed[j] / &c.demand)
        .min()
        .unwrap_or_else(Rational::one);
    Flow { paths: out, lambda }
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Shortest path tree; among equal distances the smaller predecessor edge
/// id wins.
fn dijkstra(adj: &[Vec<(usize, usize)>], len: &[f64], s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse(Key(0.0, s)));
    while let Some(Reverse(Key(d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, e) in &adj[x] {
            if done[y] {
                continue;
            }
            let nd = d + len[e];
            if nd < dist[y] || (nd == dist[y] && e < pred[y]) {
                dist[y] = nd;
                pred[y] = e;
                heap.push(Reverse(Key(nd, y)));
            }
        }
    }
    (dist, pred)
}

fn trace(g: &PlanarGraph, pred: &[usize], s: usize, t: usize) -> Vec<usize> {
    let mut path = Vec::new();
    let mut x = t;
    while x != s {
        let e = pred[x];
        path.push(e);
        let ed = &g.edges()[e];
        x = if ed.u == x { ed.v } else { ed.u };
    }
    path.reverse();
    path
}

fn reachable(adj: &[Vec<(usize, usize)>], s: usize, t: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        if x == t {
            return true;
        }
        for &(y, _) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// Undirected single-commodity max flow, shortest augmenting paths.
fn max_flow_f64(
    adj: &[Vec<(usize, usize)>],
    ends: &[(usize, usize)],
    cap: &[f64],
    s: usize,
    t: usize,
) -> f64 {
    // Signed flow on each edge, positive in the direction u -> v.
    let n = adj.len();
    let mut flow = vec![0.0f64; cap.len()];
    let mut total = 0.0;
    let residual = |e: usize, from: usize, flow: &[f64]| {
        if from == ends[e].0 {
            cap[e] - flow[e]
        } else {
            cap[e] + flow[e]
        }
    };
    loop {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if !seen[y] && residual(e, x, &flow) > 1e-12 {
                    seen[y] = true;
                    pred[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return total;
        }
        let mut push = f64::INFINITY;
        let mut y = t;
        while let Some((x, e)) = pred[y] {
            push = push.min(residual(e, x, &flow));
            y = x;
        }
        let mut y = t;
        while let Some((x, e)) = pred[y] {
            if x == ends[e].0 {
                flow[e] += push;
            } else {
                flow[e] -= push;
            }
            y = x;
        }
        total += push;
    }
}

/// Exact load per edge.
pub fn edge_loads(g: &PlanarGraph, paths: &[FlowPath]) -> Vec<Rational> {
    let mut loads = vec![Rational::zero(); g.m()];
    for p in paths {
        for &e in &p.edges {
            loads[e] += &p.value;
        }
    }
    loads
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowReport {
    pub loads: Vec<Rational>,
    /// `cap_scale * c(e) - load(e)`; negative means overloaded.
    pub slack: Vec<Rational>,
    /// `lambda * d_j - routed_j` where positive.
    pub deficits: Vec<Rational>,
    pub overloaded: Vec<usize>,
    pub short: Vec<usize>,
    /// Paths that do not run from their commodity's source to its sink.
    pub broken: Vec<usize>,
    pub negative: Vec<usize>,
}

impl FlowReport {
    pub fn is_valid(&self) -> bool {
        self.overloaded.is_empty()
            && self.short.is_empty()
            && self.broken.is_empty()
            && self.negative.is_empty()
    }
}

/// Exact check that `f` routes `lambda` of every demand with loads within
/// `cap_scale` times capacity.
pub fn validate_flow(
    g: &PlanarGraph,
    commodities: &[Commodity],
    f: &Flow,
    cap_scale: &Rational,
) -> FlowReport {
    let mut broken = Vec::new();
    let mut negative = Vec::new();
    for (i, p) in f.paths.iter().enumerate() {
        if p.value < Rational::zero() {
            negative.push(i);
        }
        if p.demand >= commodities.len()
            || !connects(
                g,
                &p.edges,
                commodities[p.demand].source,
                commodities[p.demand].sink,
            )
        {
            broken.push(i);
        }
    }
    let valid_paths: Vec<FlowPath> = f
        .paths
        .iter()
        .enumerate()
        .filter(|(i, _)| !broken.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    let loads = edge_loads(g, &valid_paths);
    let slack: Vec<Rational> = g
        .edges()
        .iter()
        .zip(&loads)
        .map(|(e, l)| &e.cap * cap_scale - l)
        .collect();
    let overloaded = (0..g.m())
        .filter(|&e| slack[e] < Rational::zero())
        .collect();
    let mut routed = vec![Rational::zero(); commodities.len()];
    for p in &valid_paths {
        routed[p.demand] += &p.value;
    }
    let deficits: Vec<Rational> = commodities
        .iter()
        .zip(&routed)
        .map(|(c, r)| {
            let d = &f.lambda * &c.demand - r;
            if d > Rational::zero() {
                d
            } else {
                Rational::zero()
            }
        })
        .collect();
    let short = (0..commodities.len())
        .filter(|&j| !deficits[j].is_zero())
        .collect();
    FlowReport {
        loads,
        slack,
        deficits,
        overloaded,
        short,
        broken,
        negative,
    }
}

/// Whether the edge sequence is a walk from `s` to `t`.
pub fn connects(g: &PlanarGraph, edges: &[usize], s: usize, t: usize) -> bool {
    let mut cur = s;
    for &e in edges {
        let Some(ed) = g.edges().get(e) else {
            return false;
        };
        cur = if ed.u == cur {
            ed.v
        } else if ed.v == cur {
            ed.u
        } else {
            return false;
        };
    }
    cur == t
}
