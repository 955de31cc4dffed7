//! Independent brute-force oracles for the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use flowgap::cutcover::CutCoverInstance;
use flowgap::facedemands::DemandSet;
use flowgap::planar::{Commodity, PlanarGraph};
use flowgap::route::Flow;
use flowgap::Rational;
use num_traits::{One, Signed, Zero};

pub fn seed(default: u64) -> u64 {
    flowgap::generate::seed_from_env(default)
}

/// Demand of `d` across the arc `start, start+1, .., start+len-1` (mod t).
pub fn arc_load(d: &DemandSet, start: usize, len: usize) -> Rational {
    let t = d.t();
    let inside = |p: usize| (p + t - start) % t < len;
    d.chords()
        .filter(|c| inside(c.a) != inside(c.b))
        .map(|c| c.weight)
        .sum()
}

/// Every proper arc of a `t`-cycle as `(start, len)`.
pub fn arcs(t: usize) -> Vec<(usize, usize)> {
    (0..t).flat_map(|s| (1..t).map(move |l| (s, l))).collect()
}

/// The first arc where `k * small` exceeds `big`, if any.
pub fn undominated_arc(big: &DemandSet, small: &DemandSet, k: &Rational) -> Option<(usize, usize)> {
    arcs(big.t())
        .into_iter()
        .find(|&(s, l)| k * arc_load(small, s, l) > arc_load(big, s, l))
}

pub fn sum_sets(t: usize, sets: &[&DemandSet]) -> DemandSet {
    let mut out = DemandSet::new(t);
    for s in sets {
        for c in s.chords() {
            out.add(c.a, c.b, c.weight);
        }
    }
    out
}

/// No two chords interleave, tested on raw positions.
pub fn laminar(d: &DemandSet) -> bool {
    let cs: Vec<(usize, usize)> = d.chords().map(|c| (c.a.min(c.b), c.a.max(c.b))).collect();
    for (i, &(a, b)) in cs.iter().enumerate() {
        for &(c, e) in &cs[i + 1..] {
            if a < c && c < b && b < e || c < a && a < e && e < b {
                return false;
            }
        }
    }
    true
}

pub fn cut_supply(g: &PlanarGraph, side: &[bool]) -> Rational {
    g.edges()
        .iter()
        .filter(|e| side[e.u] != side[e.v])
        .map(|e| e.cap.clone())
        .sum()
}

pub fn cut_demand(cs: &[Commodity], side: &[bool]) -> Rational {
    cs.iter()
        .filter(|c| side[c.source] != side[c.sink])
        .map(|c| c.demand.clone())
        .sum()
}

fn side_from_mask(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}

/// Over every vertex subset containing vertex 0: the minimum of
/// `supply - demand` and a set attaining it.
pub fn powerset_min_slack(g: &PlanarGraph, cs: &[Commodity]) -> (Rational, Vec<bool>) {
    let n = g.n();
    assert!(n <= 20);
    let mut best: Option<(Rational, Vec<bool>)> = None;
    for mask in 0..(1u64 << (n - 1)) {
        let side = side_from_mask(n, mask << 1 | 1);
        let slack = cut_supply(g, &side) - cut_demand(cs, &side);
        if best.as_ref().is_none_or(|(b, _)| slack < *b) {
            best = Some((slack, side));
        }
    }
    best.expect("n >= 1")
}

/// Minimum of `supply / demand` over subsets with positive demand.
pub fn powerset_sparsest(g: &PlanarGraph, cs: &[Commodity]) -> Option<Rational> {
    let n = g.n();
    let mut best: Option<Rational> = None;
    for mask in 0..(1u64 << (n - 1)) {
        let side = side_from_mask(n, mask << 1 | 1);
        let d = cut_demand(cs, &side);
        if d.is_positive() {
            let r = cut_supply(g, &side) / d;
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best
}

/// Walks `edges` from `s`; the end vertex, or `None` if they do not chain.
pub fn walk(g: &PlanarGraph, s: usize, edges: &[usize]) -> Option<usize> {
    let mut cur = s;
    for &e in edges {
        let ed = g.edges().get(e)?;
        cur = if ed.u == cur {
            ed.v
        } else if ed.v == cur {
            ed.u
        } else {
            return None;
        };
    }
    Some(cur)
}

/// Checks that `f` routes every commodity in full with loads at most
/// `factor` times capacity. Returns the largest load ratio.
pub fn check_full_routing(
    g: &PlanarGraph,
    cs: &[Commodity],
    f: &Flow,
    factor: &Rational,
) -> Result<Rational, String> {
    let mut routed = vec![Rational::zero(); cs.len()];
    let mut load = vec![Rational::zero(); g.m()];
    for (i, p) in f.paths.iter().enumerate() {
        let c = cs
            .get(p.demand)
            .ok_or(format!("path {i} names demand {}", p.demand))?;
        if p.value.is_negative() {
            return Err(format!("path {i} has negative value"));
        }
        if walk(g, c.source, &p.edges) != Some(c.sink) {
            return Err(format!("path {i} does not join {} to {}", c.source, c.sink));
        }
        routed[p.demand] += &p.value;
        for &e in &p.edges {
            load[e] += &p.value;
        }
    }
    for (j, c) in cs.iter().enumerate() {
        if routed[j] != c.demand {
            return Err(format!("demand {j} routed {} of {}", routed[j], c.demand));
        }
    }
    let mut worst = Rational::zero();
    for (e, ed) in g.edges().iter().enumerate() {
        if load[e] > factor * &ed.cap {
            return Err(format!(
                "edge {e} carries {} over {} x {}",
                load[e], factor, ed.cap
            ));
        }
        if ed.cap.is_positive() {
            let r = &load[e] / &ed.cap;
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}

/// Every simple path from `s` to `t`, as edge lists.
pub fn simple_paths(g: &PlanarGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(
        g: &PlanarGraph,
        x: usize,
        t: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == t {
            out.push(path.clone());
            return;
        }
        for (e, ed) in g.edges().iter().enumerate() {
            let y = if ed.u == x {
                ed.v
            } else if ed.v == x {
                ed.u
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                path.push(e);
                go(g, y, t, seen, path, out);
                path.pop();
                seen[y] = false;
            }
        }
    }
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut out = Vec::new();
    go(g, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Maximises `c·x` subject to `A x <= b`, `x >= 0`, with `b >= 0`, by the
/// tableau simplex with Bland's rule in exact arithmetic.
pub fn simplex_max(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Rational {
    let rows = a.len();
    let cols = c.len();
    assert!(b.iter().all(|x| !x.is_negative()));
    let width = cols + rows + 1;
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = vec![Rational::zero(); width];
            r[..cols].clone_from_slice(&a[i]);
            r[cols + i] = Rational::one();
            r[width - 1] = b[i].clone();
            r
        })
        .collect();
    let mut obj = vec![Rational::zero(); width];
    for j in 0..cols {
        obj[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            return obj[width - 1].clone();
        };
        let mut leave: Option<(Rational, usize, usize)> = None;
        for i in 0..rows {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width - 1] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((r, _, bi)) => ratio < *r || (ratio == *r && basis[i] < *bi),
                };
                if better {
                    leave = Some((ratio, i, basis[i]));
                }
            }
        }
        let (_, p, _) = leave.expect("bounded program");
        let piv = tab[p][enter].clone();
        for x in tab[p].iter_mut() {
            *x /= &piv;
        }
        let prow = tab[p].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        let f = obj[enter].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
        basis[p] = enter;
    }
}

/// Optimal concurrency over all simple paths, solved exactly.
pub fn exact_concurrency(g: &PlanarGraph, cs: &[Commodity]) -> Rational {
    let paths: Vec<(usize, Vec<usize>)> = cs
        .iter()
        .enumerate()
        .flat_map(|(j, c)| {
            simple_paths(g, c.source, c.sink)
                .into_iter()
                .map(move |p| (j, p))
        })
        .collect();
    // Variables: lambda, then one per path.
    let cols = 1 + paths.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, c) in cs.iter().enumerate() {
        let mut row = vec![Rational::zero(); cols];
        row[0] = c.demand.clone();
        for (i, (k, _)) in paths.iter().enumerate() {
            if *k == j {
                row[1 + i] = -Rational::one();
            }
        }
        a.push(row);
        b.push(Rational::zero());
    }
    for (e, ed) in g.edges().iter().enumerate() {
        let mut row = vec![Rational::zero(); cols];
        for (i, (_, p)) in paths.iter().enumerate() {
            if p.contains(&e) {
                row[1 + i] = Rational::one();
            }
        }
        a.push(row);
        b.push(ed.cap.clone());
    }
    let mut c = vec![Rational::zero(); cols];
    c[0] = Rational::one();
    simplex_max(&a, &b, &c)
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut x = x;
    while p[x] != r {
        let nx = p[x];
        p[x] = r;
        x = nx;
    }
    r
}

/// Every fixed edge lies on a cycle of fixed plus picked edges.
pub fn cover_feasible(inst: &CutCoverInstance, picked: &[bool]) -> bool {
    let mut all: Vec<(usize, usize)> = inst.y.clone();
    all.extend(
        inst.edges
            .iter()
            .zip(picked)
            .filter(|(_, &p)| p)
            .map(|(e, _)| (e.u, e.v)),
    );
    (0..inst.y.len()).all(|skip| {
        let mut p: Vec<usize> = (0..inst.n).collect();
        for (i, &(u, v)) in all.iter().enumerate() {
            if i != skip {
                let (a, b) = (find(&mut p, u), find(&mut p, v));
                p[a] = b;
            }
        }
        let (u, v) = inst.y[skip];
        find(&mut p, u) == find(&mut p, v)
    })
}

/// The same feasibility, straight from the definition: every vertex set
/// crossed by exactly one fixed edge is crossed by a picked edge.
pub fn cover_feasible_by_sets(inst: &CutCoverInstance, picked: &[bool]) -> bool {
    let n = inst.n;
    (1..(1u64 << n) - 1).all(|mask| {
        let side = side_from_mask(n, mask);
        let fixed = inst.y.iter().filter(|&&(u, v)| side[u] != side[v]).count();
        fixed != 1
            || inst
                .edges
                .iter()
                .zip(picked)
                .any(|(e, &p)| p && side[e.u] != side[e.v])
    })
}

/// Cheapest feasible subset of candidate edges, if any.
pub fn cover_opt(inst: &CutCoverInstance) -> Option<Rational> {
    let m = inst.edges.len();
    let mut best: Option<Rational> = None;
    for mask in 0..(1u64 << m) {
        let picked: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
        let cost: Rational = (0..m)
            .filter(|&e| picked[e])
            .map(|e| inst.edges[e].cost.clone())
            .sum();
        if best.as_ref().is_some_and(|b| cost >= *b) {
            continue;
        }
        if cover_feasible(inst, &picked) {
            best = Some(cost);
        }
    }
    best
}

/// Cheapest multicut separating every pair, over all vertex partitions that
/// split each pair (the cut edges of the best partition form an optimal
/// multicut).
pub fn multicut_opt(g: &PlanarGraph, pairs: &[(usize, usize)]) -> Rational {
    let n = g.n();
    let mut label = vec![0usize; n];
    let mut best: Option<Rational> = None;
    fn go(
        i: usize,
        used: usize,
        label: &mut Vec<usize>,
        g: &PlanarGraph,
        pairs: &[(usize, usize)],
        best: &mut Option<Rational>,
    ) {
        if i == label.len() {
            if pairs.iter().any(|&(s, t)| label[s] == label[t]) {
                return;
            }
            let cost: Rational = g
                .edges()
                .iter()
                .filter(|e| label[e.u] != label[e.v])
                .map(|e| e.cap.clone())
                .sum();
            if best.as_ref().is_none_or(|b| cost < *b) {
                *best = Some(cost);
            }
            return;
        }
        for l in 0..=used {
            label[i] = l;
            go(i + 1, used.max(l + 1), label, g, pairs, best);
        }
    }
    if n > 0 {
        go(1, 1, &mut label, g, pairs, &mut best);
    }
    best.unwrap_or_else(Rational::zero)
}

/// `s`-`t` connectivity after deleting `removed`, by union-find.
pub fn still_connected(g: &PlanarGraph, removed: &[usize], s: usize, t: usize) -> bool {
    let mut p: Vec<usize> = (0..g.n()).collect();
    for (e, ed) in g.edges().iter().enumerate() {
        if !removed.contains(&e) {
            let (a, b) = (find(&mut p, ed.u), find(&mut p, ed.v));
            p[a] = b;
        }
    }
    find(&mut p, s) == find(&mut p, t)
}

/// Dual load per candidate edge: `Σ y_S` over sets it crosses.
pub fn dual_loads(
    inst: &CutCoverInstance,
    duals: &BTreeMap<Vec<usize>, Rational>,
) -> Vec<Rational> {
    inst.edges
        .iter()
        .map(|e| {
            duals
                .iter()
                .filter(|(s, _)| s.contains(&e.u) != s.contains(&e.v))
                .map(|(_, y)| y.clone())
                .sum()
        })
        .collect()
}

/// `Σ f(S) y_S`.
pub fn dual_objective(inst: &CutCoverInstance, duals: &BTreeMap<Vec<usize>, Rational>) -> Rational {
    duals
        .iter()
        .filter(|(s, _)| {
            inst.y
                .iter()
                .filter(|&&(u, v)| s.contains(&u) != s.contains(&v))
                .count()
                == 1
        })
        .map(|(_, y)| y.clone())
        .sum()
}
