//! Primal-dual cut cover for the 2-edge-connectivity augmentation
//! requirement: `f(S) = 1` iff exactly one edge of the fixed set `Y` crosses
//! `S`. A set is unsatisfied while no picked edge crosses it.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutcheck::embed_with_demands;
use crate::facedemands::DemandSet;
use crate::planar::PlanarGraph;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverEdge {
    pub u: usize,
    pub v: usize,
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCoverInstance {
    pub n: usize,
    /// Candidate edges with costs.
    pub edges: Vec<CoverEdge>,
    /// Fixed edges defining the requirement.
    pub y: Vec<(usize, usize)>,
}

/// Dual values keyed by sorted vertex sets.
pub type DualSolution = BTreeMap<Vec<usize>, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration {
    /// Minimally unsatisfied sets whose duals were raised.
    pub active: Vec<Vec<usize>>,
    pub delta: Rational,
    pub admitted: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WgmvTrace {
    pub iterations: Vec<Iteration>,
    /// Edges in the order they were admitted, before reverse delete.
    pub grown: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WgmvResult {
    /// Picked edges, sorted.
    pub picked: Vec<usize>,
    pub duals: DualSolution,
    pub trace: WgmvTrace,
}

impl CutCoverInstance {
    pub fn new(n: usize, edges: Vec<CoverEdge>, y: Vec<(usize, usize)>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge {i} has an endpoint outside 0..{n}"
                )));
            }
            if e.cost < Rational::zero() {
                return Err(Error::InvalidInput(format!("edge {i} has negative cost")));
            }
        }
        if let Some((i, _)) = y.iter().enumerate().find(|(_, &(u, v))| u >= n || v >= n) {
            return Err(Error::InvalidInput(format!(
                "fixed edge {i} has an endpoint outside 0..{n}"
            )));
        }
        Ok(CutCoverInstance { n, edges, y })
    }

    /// `f(S)`: exactly one fixed edge crosses.
    pub fn requirement(&self, side: &[bool]) -> bool {
        self.y.iter().filter(|&&(u, v)| side[u] != side[v]).count() == 1
    }

    pub fn cost(&self, picked: &[usize]) -> Rational {
        picked.iter().map(|&e| self.edges[e].cost.clone()).sum()
    }

    pub fn crosses(&self, e: usize, side: &[bool]) -> bool {
        let ed = &self.edges[e];
        side[ed.u] != side[ed.v]
    }

    /// Whether `picked` covers every set with `f(S) = 1`.
    pub fn is_feasible(&self, picked: &[bool]) -> bool {
        minimal_unsatisfied_sets(self, picked).is_empty()
    }
}

fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    set.iter().for_each(|&v| m[v] = true);
    m
}

/// Bridges of a multigraph given by edge endpoints, as edge indices.
fn bridges(n: usize, ends: &[(usize, usize)]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in ends.iter().enumerate() {
        if u != v {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_bridge = vec![false; ends.len()];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, edge used to enter, next adjacency index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (x, via, ref mut i)) = stack.last_mut() {
            if *i < adj[x].len() {
                let (y, e) = adj[x][*i];
                *i += 1;
                if e == via {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    stack.push((y, e, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

/// Inclusion-minimal unsatisfied sets for the picked edges (a mask over
/// `inst.edges`). Each side of a fixed edge that is a bridge of
/// `(V, Y ∪ F)` is unsatisfied; the minimal sides are pairwise disjoint.
pub fn minimal_unsatisfied_sets(inst: &CutCoverInstance, picked: &[bool]) -> Vec<Vec<usize>> {
    let n = inst.n;
    let mut ends: Vec<(usize, usize)> = inst.y.clone();
    ends.extend(
        inst.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| picked[*i])
            .map(|(_, e)| (e.u, e.v)),
    );
    let is_bridge = bridges(n, &ends);
    let mut sides: Vec<Vec<bool>> = Vec::new();
    for (i, &(a, b)) in inst.y.iter().enumerate() {
        if !is_bridge[i] {
            continue;
        }
        let side_a = reach_without(n, &ends, a, i);
        let side_b = reach_without(n, &ends, b, i);
        sides.push(side_a);
        sides.push(side_b);
    }
    let subset = |x: &[bool], y: &[bool]| x.iter().zip(y).all(|(&p, &q)| !p || q);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, s) in sides.iter().enumerate() {
        let strictly_contains_other = sides
            .iter()
            .enumerate()
            .any(|(j, t)| j != i && t != s && subset(t, s));
        if !strictly_contains_other {
            out.push((0..n).filter(|&v| s[v]).collect());
        }
    }
    out.sort();
    out.dedup();
    out
}

fn reach_without(n: usize, ends: &[(usize, usize)], s: usize, skip: usize) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in ends.iter().enumerate() {
        if i != skip {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Growth phase with uniform dual raising, then reverse delete.
pub fn wgmv(inst: &CutCoverInstance) -> Result<WgmvResult> {
    let m = inst.edges.len();
    if !inst.is_feasible(&vec![true; m]) {
        return Err(Error::Infeasible);
    }
    let mut picked = vec![false; m];
    let mut grown = Vec::new();
    let mut load = vec![Rational::zero(); m];
    let mut duals: DualSolution = BTreeMap::new();
    let mut iterations = Vec::new();

    loop {
        let active = minimal_unsatisfied_sets(inst, &picked);
        if active.is_empty() {
            break;
        }
        let masks: Vec<Vec<bool>> = active.iter().map(|s| mask(inst.n, s)).collect();
        let count: Vec<usize> = (0..m)
            .map(|e| {
                if picked[e] {
                    0
                } else {
                    masks.iter().filter(|s| inst.crosses(e, s)).count()
                }
            })
            .collect();
        let delta = (0..m)
            .filter(|&e| count[e] > 0)
            .map(|e| (&inst.edges[e].cost - &load[e]) / rational::int(count[e] as i64))
            .min()
            .ok_or(Error::Infeasible)?;
        for s in &active {
            *duals.entry(s.clone()).or_insert_with(Rational::zero) += &delta;
        }
        for e in 0..m {
            if count[e] > 0 {
                load[e] += &delta * rational::int(count[e] as i64);
            }
        }
        let mut admitted = Vec::new();
        for e in 0..m {
            if picked[e] || load[e] != inst.edges[e].cost {
                continue;
            }
            let current = minimal_unsatisfied_sets(inst, &picked);
            if current.iter().any(|s| inst.crosses(e, &mask(inst.n, s))) {
                picked[e] = true;
                grown.push(e);
                admitted.push(e);
            }
        }
        assert!(!admitted.is_empty(), "a growth step admitted no edge");
        iterations.push(Iteration {
            active,
            delta,
            admitted,
        });
    }

    for &e in grown.iter().rev() {
        picked[e] = false;
        if !inst.is_feasible(&picked) {
            picked[e] = true;
        }
    }
    duals.retain(|_, v| !v.is_zero());
    Ok(WgmvResult {
        picked: (0..m).filter(|&e| picked[e]).collect(),
        duals,
        trace: WgmvTrace { iterations, grown },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub iteration: usize,
    pub active: usize,
    /// `Σ_{S ∈ A} |δ_F(S)|` for the final picked set.
    pub degree: usize,
}

impl DegreeCheck {
    pub fn within(&self) -> bool {
        self.degree <= 2 * self.active
    }

    /// The sharper `2|A| - 2`, recorded for inspection only.
    pub fn within_sharp(&self) -> bool {
        self.degree + 2 <= 2 * self.active
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub cost: Rational,
    /// `Σ f(S) y_S`.
    pub dual_value: Rational,
    /// Edges whose dual load exceeds their cost.
    pub overpaid: Vec<usize>,
    pub negative_duals: usize,
    pub feasible: bool,
    pub ratio_holds: bool,
    pub degrees: Vec<DegreeCheck>,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.overpaid.is_empty()
            && self.negative_duals == 0
            && self.feasible
            && self.ratio_holds
            && self.degrees.iter().all(DegreeCheck::within)
    }
}

pub fn verify_certificate(
    inst: &CutCoverInstance,
    picked: &[usize],
    duals: &DualSolution,
    trace: &WgmvTrace,
) -> CertificateReport {
    let m = inst.edges.len();
    let sides: Vec<(Vec<bool>, &Rational)> =
        duals.iter().map(|(s, y)| (mask(inst.n, s), y)).collect();
    let overpaid = (0..m)
        .filter(|&e| {
            let paid: Rational = sides
                .iter()
                .filter(|(s, _)| inst.crosses(e, s))
                .map(|(_, y)| (*y).clone())
                .sum();
            paid > inst.edges[e].cost
        })
        .collect();
    let negative_duals = duals.values().filter(|y| **y < Rational::zero()).count();
    let dual_value: Rational = sides
        .iter()
        .filter(|(s, _)| inst.requirement(s))
        .map(|(_, y)| (*y).clone())
        .sum();
    let cost = inst.cost(picked);
    let ratio_holds = cost <= rational::int(2) * &dual_value;
    let picked_mask = {
        let mut pm = vec![false; m];
        picked.iter().for_each(|&e| pm[e] = true);
        pm
    };
    let degrees = trace
        .iterations
        .iter()
        .enumerate()
        .map(|(i, it)| DegreeCheck {
            iteration: i,
            active: it.active.len(),
            degree: it
                .active
                .iter()
                .map(|s| {
                    let sm = mask(inst.n, s);
                    picked.iter().filter(|&&e| inst.crosses(e, &sm)).count()
                })
                .sum(),
        })
        .collect();
    CertificateReport {
        cost,
        dual_value,
        overpaid,
        negative_duals,
        feasible: inst.is_feasible(&picked_mask),
        ratio_holds,
        degrees,
    }
}

/// Random small instance: fixed edges form a spanning tree, candidates are
/// random pairs with costs in `1..=max_cost`.
pub fn random_instance(rng: &mut impl Rng, n: usize, m: usize, max_cost: i64) -> CutCoverInstance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let y = (1..n)
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    let edges = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            CoverEdge {
                u,
                v,
                cost: rational::int(rng.gen_range(1..=max_cost)),
            }
        })
        .collect();
    CutCoverInstance { n, edges, y }
}

pub const NONHALF_SEED: u64 = 0x005e_ed0f_d0a1;
const NONHALF_BUDGET: usize = 20_000;

/// Searches small instances for one where the duals are not half-integral.
pub fn find_nonhalfintegral_dual() -> Result<CutCoverInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(NONHALF_SEED);
    for _ in 0..NONHALF_BUDGET {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(n - 1..=2 * n);
        let inst = random_instance(&mut rng, n, m, 4);
        let Ok(res) = wgmv(&inst) else { continue };
        if res.duals.values().any(|y| *y.denom() > 2.into()) {
            return Ok(inst);
        }
    }
    Err(Error::NotFound)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multicut {
    /// Supply edges to delete, sorted.
    pub edges: Vec<usize>,
    pub cost: Rational,
    pub dual_value: Rational,
    pub result: WgmvResult,
}

/// Multicut for demands whose chords fit in their faces: a set of supply
/// edges is a multicut exactly when its dual, together with the dual demand
/// edges, leaves every component 2-edge-connected.
pub fn seymour_multicut(g: &PlanarGraph, per_face: &[(usize, DemandSet)]) -> Result<Multicut> {
    let gh = embed_with_demands(g, per_face)?;
    let m = g.m();
    let faces = gh.faces().len();
    let dual_ends = |e: usize| (gh.face_of_dart(2 * e), gh.face_of_dart(2 * e + 1));
    let edges = (0..m)
        .map(|e| {
            let (u, v) = dual_ends(e);
            CoverEdge {
                u,
                v,
                cost: g.edges()[e].cap.clone(),
            }
        })
        .collect();
    let y = (m..gh.m()).map(dual_ends).collect();
    let inst = CutCoverInstance::new(faces, edges, y)?;
    let result = wgmv(&inst)?;
    let cut = result.picked.clone();
    let pairs: Vec<(usize, usize)> = gh.edges()[m..].iter().map(|e| (e.u, e.v)).collect();
    if let Some(&(s, t)) = pairs
        .iter()
        .find(|&&(s, t)| connected_without(g, &cut, s, t))
    {
        return Err(Error::InvalidInput(format!(
            "edge set leaves demand {s}-{t} connected"
        )));
    }
    let dual_value = result.duals.values().cloned().sum();
    Ok(Multicut {
        cost: inst.cost(&cut),
        edges: cut,
        dual_value,
        result,
    })
}

/// Whether `s` and `t` stay connected in `g` once `removed` is deleted.
pub fn connected_without(g: &PlanarGraph, removed: &[usize], s: usize, t: usize) -> bool {
    let mut gone = vec![false; g.m()];
    removed.iter().for_each(|&e| gone[e] = true);
    let adj = g.adjacency();
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        if x == t {
            return true;
        }
        for &(y, e) in &adj[x] {
            if !gone[e] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn edge(u: usize, v: usize, c: i64) -> CoverEdge {
        CoverEdge { u, v, cost: int(c) }
    }

    #[test]
    fn single_fixed_edge() {
        let inst = CutCoverInstance::new(2, vec![], vec![(0, 1)]).unwrap();
        assert_eq!(minimal_unsatisfied_sets(&inst, &[]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn path_of_fixed_edges() {
        let inst = CutCoverInstance::new(3, vec![edge(0, 1, 1)], vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            minimal_unsatisfied_sets(&inst, &[false]),
            vec![vec![0], vec![2]]
        );
        assert_eq!(
            minimal_unsatisfied_sets(&inst, &[true]),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn forced_parallel_edge() {
        let inst = CutCoverInstance::new(2, vec![edge(0, 1, 4)], vec![(0, 1)]).unwrap();
        let r = wgmv(&inst).unwrap();
        assert_eq!(r.picked, vec![0]);
        assert_eq!(r.duals[&vec![0]], int(2));
        assert_eq!(r.duals[&vec![1]], int(2));
        let rep = verify_certificate(&inst, &r.picked, &r.duals, &r.trace);
        assert!(rep.is_valid(), "{rep:?}");
        assert_eq!(rep.dual_value, int(4));
    }

    #[test]
    fn zero_costs() {
        let inst =
            CutCoverInstance::new(3, vec![edge(0, 2, 0), edge(1, 2, 0)], vec![(0, 1), (1, 2)])
                .unwrap();
        let r = wgmv(&inst).unwrap();
        assert!(r.duals.is_empty());
        let rep = verify_certificate(&inst, &r.picked, &r.duals, &r.trace);
        assert!(rep.is_valid());
        assert_eq!(rep.cost, int(0));
    }

    #[test]
    fn infeasible() {
        let inst = CutCoverInstance::new(3, vec![edge(0, 1, 1)], vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(wgmv(&inst), Err(Error::Infeasible)));
    }

    #[test]
    fn overpaid_dual_flagged() {
        let inst = CutCoverInstance::new(2, vec![edge(0, 1, 4)], vec![(0, 1)]).unwrap();
        let r = wgmv(&inst).unwrap();
        let mut y = r.duals.clone();
        *y.get_mut(&vec![0]).unwrap() += int(1);
        let rep = verify_certificate(&inst, &r.picked, &y, &r.trace);
        assert_eq!(rep.overpaid, vec![0]);
    }

    #[test]
    fn bridges_respect_parallel_edges() {
        let b = bridges(3, &[(0, 1), (0, 1), (1, 2)]);
        assert_eq!(b, vec![false, false, true]);
    }
}
