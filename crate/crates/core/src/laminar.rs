//! Laminar families that approximate face demands.
//!
//! A separable demand set `D` (every chord crosses one segment `S`) is
//! covered by two laminar sets `L1 <= D` and `L2 <= 2D` with
//! `L1 + L2 >= D`. Arbitrary demands are split into dyadic levels, each of
//! which is separable block by block.

use num_traits::{ToPrimitive, Zero};

use crate::facedemands::{crossing, is_separable, DemandSet, Segment};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// `sigma[i]` is the index of the sink that source `i` is paired with after
/// the first phase. Sources are numbered in cyclic order from the start of
/// the separating segment, and sink `i` is the original partner of source `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub sigma: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparableFamily {
    pub l1: DemandSet,
    pub l2: DemandSet,
    pub pairing: Pairing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub alpha: Rational,
    pub set: DemandSet,
    /// Dyadic level for the general construction.
    pub level: Option<usize>,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarFamily {
    pub t: usize,
    pub members: Vec<Member>,
}

impl LaminarFamily {
    pub fn alpha_sum(&self) -> Rational {
        self.members
            .iter()
            .fold(Rational::zero(), |acc, m| acc + &m.alpha)
    }

    /// Sum of all member sets.
    pub fn union(&self) -> DemandSet {
        self.members
            .iter()
            .fold(DemandSet::new(self.t), |acc, m| acc.plus(&m.set))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Unit chords of a separable set laid out on a virtual cycle that holds
/// one position per chord end. Sources take virtual positions `0..k`, sinks
/// `k..2k`.
struct Virtual {
    /// Original face position of each virtual position.
    orig: Vec<usize>,
    /// Virtual sink position of the chord leaving virtual source `i`.
    partner: Vec<usize>,
}

fn unit_count(w: &Rational) -> Result<usize> {
    if !w.is_integer() {
        return Err(Error::InvalidInput(format!(
            "separable family needs integral weights, got {}",
            rational::fmt(w)
        )));
    }
    w.to_integer()
        .to_usize()
        .ok_or_else(|| Error::InvalidInput("chord weight too large".into()))
}

fn expand(d: &DemandSet, s: &Segment) -> Result<Virtual> {
    let t = d.t();
    // (source pos, sink pos) per unit chord.
    let mut units: Vec<(usize, usize)> = Vec::new();
    for c in d.chords() {
        let (src, snk) = match (s.contains(c.a), s.contains(c.b)) {
            (true, false) => (c.a, c.b),
            (false, true) => (c.b, c.a),
            _ => {
                return Err(Error::NotSeparable {
                    start: s.start,
                    len: s.len,
                })
            }
        };
        for _ in 0..unit_count(&c.weight)? {
            units.push((src, snk));
        }
    }
    let fwd = |from: usize, to: usize| (to + t - from) % t;
    // Ends at one position are ordered so that chords sharing it nest:
    // longer forward reach first. Parallel copies are nested by reversing
    // the copy order at the sink end.
    let mut ends: Vec<(usize, usize, bool, usize)> = Vec::new(); // (walk pos, key, is_sink, unit)
    for (u, &(src, snk)) in units.iter().enumerate() {
        let walk_src = fwd(s.start, src);
        let walk_snk = fwd(s.start, snk);
        ends.push((walk_src, t - fwd(src, snk), false, u));
        ends.push((walk_snk, t - fwd(snk, src), true, u));
    }
    ends.sort_by(|x, y| {
        (x.0, x.1)
            .cmp(&(y.0, y.1))
            .then_with(|| if x.2 { y.3.cmp(&x.3) } else { x.3.cmp(&y.3) })
    });
    let k = units.len();
    let mut orig = Vec::with_capacity(2 * k);
    let mut src_of = vec![0; k];
    let mut snk_of = vec![0; k];
    for (vpos, &(walk, _, is_sink, u)) in ends.iter().enumerate() {
        orig.push((walk + s.start) % t);
        if is_sink {
            snk_of[u] = vpos;
        } else {
            src_of[u] = vpos;
        }
    }
    let mut partner = vec![0; k];
    for u in 0..k {
        debug_assert!(src_of[u] < k && snk_of[u] >= k);
        partner[src_of[u]] = snk_of[u];
    }
    Ok(Virtual { orig, partner })
}

fn collapse(
    t: usize,
    orig: &[usize],
    chords: impl IntoIterator<Item = (usize, usize)>,
) -> DemandSet {
    let mut out = DemandSet::new(t);
    for (x, y) in chords {
        out.add(orig[x], orig[y], Rational::from_integer(1.into()));
    }
    out
}

/// The `(1, 2)` construction for demands separated by `s`.
///
/// The first phase uncrosses by swapping sink partners, which always ends in
/// the unique nested pairing: the `i`-th source meets the `i`-th sink from
/// the far end. The second phase joins `t_{σ(i)}` to `t_i`, drops loops, and
/// nests every crossing pair among the sinks.
pub fn build_separable_family(d: &DemandSet, s: &Segment) -> Result<SeparableFamily> {
    let t = d.t();
    if s.t != t {
        return Err(Error::InvalidInput(format!(
            "segment on cycle {} for face of length {t}",
            s.t
        )));
    }
    let v = expand(d, s)?;
    let k = v.partner.len();
    // Sink index j lives at virtual position partner[j]; invert that.
    let mut sink_at = vec![0; 2 * k];
    for (j, &p) in v.partner.iter().enumerate() {
        sink_at[p] = j;
    }
    let sigma: Vec<usize> = (0..k).map(|i| sink_at[2 * k - 1 - i]).collect();
    let l1 = collapse(t, &v.orig, (0..k).map(|i| (i, 2 * k - 1 - i)));

    let mut chords: Vec<(usize, usize)> = (0..k)
        .filter(|&i| sigma[i] != i)
        .map(|i| {
            let (x, y) = (v.partner[sigma[i]], v.partner[i]);
            (x.min(y), x.max(y))
        })
        .collect();
    nest_all(&mut chords);
    let l2 = collapse(t, &v.orig, chords);
    Ok(SeparableFamily {
        l1,
        l2,
        pairing: Pairing { sigma },
    })
}

/// Replaces crossing pairs `(a, c), (b, d)` with `a < b < c < d` by the
/// nested pair `(a, d), (b, c)` until none cross. Each step strictly raises
/// the sum of squared lengths, so the loop ends.
fn nest_all(chords: &mut [(usize, usize)]) {
    loop {
        let mut found = None;
        'scan: for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                if crossing(0, chords[i], chords[j]) {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = found else { break };
        let mut ends = [chords[i].0, chords[i].1, chords[j].0, chords[j].1];
        ends.sort_unstable();
        chords[i] = (ends[0], ends[3]);
        chords[j] = (ends[1], ends[2]);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGroup {
    /// Index of the dyadic block pair within its level.
    pub block: usize,
    /// The left half of the block, crossed by every chord of the group.
    pub separator: Segment,
    pub demands: DemandSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub level: usize,
    pub groups: Vec<LevelGroup>,
}

/// Level of a chord: the dyadic blocks of size `2^(level-1)` holding its
/// endpoints are siblings. Positions past `t - 1` act as empty padding.
pub fn chord_level(a: usize, b: usize) -> usize {
    (usize::BITS - (a ^ b).leading_zeros()) as usize
}

pub fn assign_levels(d: &DemandSet) -> Vec<Level> {
    let t = d.t();
    let mut levels: Vec<Level> = Vec::new();
    for c in d.chords() {
        let lvl = chord_level(c.a, c.b);
        let block = c.a >> lvl;
        let idx = match levels.binary_search_by_key(&lvl, |l| l.level) {
            Ok(i) => i,
            Err(i) => {
                levels.insert(
                    i,
                    Level {
                        level: lvl,
                        groups: Vec::new(),
                    },
                );
                i
            }
        };
        let groups = &mut levels[idx].groups;
        let gi = match groups.binary_search_by_key(&block, |g| g.block) {
            Ok(i) => i,
            Err(i) => {
                let separator =
                    Segment::new(block << lvl, 1 << (lvl - 1), t).expect("left half is proper");
                groups.insert(
                    i,
                    LevelGroup {
                        block,
                        separator,
                        demands: DemandSet::new(t),
                    },
                );
                i
            }
        };
        groups[gi].demands.add(c.a, c.b, c.weight);
    }
    levels
}

/// One `(1, 2)` pair per dyadic level: `L_i(1)` with `α = 1` and `L_i(2)`
/// with `α = 2`, each the union of the per-block constructions. Empty sets
/// are left out.
pub fn build_general_family(d: &DemandSet) -> Result<LaminarFamily> {
    let t = d.t();
    let mut members = Vec::new();
    for lvl in assign_levels(d) {
        let mut l1 = DemandSet::new(t);
        let mut l2 = DemandSet::new(t);
        for g in &lvl.groups {
            let fam = build_separable_family(&g.demands, &g.separator)?;
            l1 = l1.plus(&fam.l1);
            l2 = l2.plus(&fam.l2);
        }
        for (alpha, set, phase) in [(1, l1, Phase::One), (2, l2, Phase::Two)] {
            if !set.is_empty() {
                members.push(Member {
                    alpha: rational::int(alpha),
                    set,
                    level: Some(lvl.level),
                    phase,
                });
            }
        }
    }
    Ok(LaminarFamily { t, members })
}

/// Separable demands get the `(1, 2)` pair, anything else the dyadic family.
pub fn approximate(d: &DemandSet) -> Result<LaminarFamily> {
    if d.is_empty() {
        return Ok(LaminarFamily {
            t: d.t(),
            members: Vec::new(),
        });
    }
    let Some(s) = is_separable(d) else {
        return build_general_family(d);
    };
    let fam = build_separable_family(d, &s)?;
    let members = [(1, fam.l1, Phase::One), (2, fam.l2, Phase::Two)]
        .into_iter()
        .filter(|(_, set, _)| !set.is_empty())
        .map(|(alpha, set, phase)| Member {
            alpha: rational::int(alpha),
            set,
            level: None,
            phase,
        })
        .collect();
    Ok(LaminarFamily { t: d.t(), members })
}

/// `⌈log₂ t⌉`, with `t <= 1` giving 0.
pub fn ceil_log2(t: usize) -> usize {
    if t <= 1 {
        0
    } else {
        (usize::BITS - (t - 1).leading_zeros()) as usize
    }
}
