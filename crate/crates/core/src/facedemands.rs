//! Demand multisets on a single face cycle.
//!
//! Positions run `0..t` around the face. A chord is stored with its smaller
//! position first; parallel chords are merged by adding weights, and
//! self-loops are never stored.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Result};

pub type ChordKey = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
    pub weight: Rational,
}

impl Chord {
    pub fn key(&self) -> ChordKey {
        (self.a, self.b)
    }
}

#[inline]
fn norm(a: usize, b: usize) -> ChordKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSet {
    t: usize,
    chords: BTreeMap<ChordKey, Rational>,
}

impl DemandSet {
    pub fn new(t: usize) -> Self {
        DemandSet {
            t,
            chords: BTreeMap::new(),
        }
    }

    pub fn from_chords(
        t: usize,
        chords: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut d = DemandSet::new(t);
        for (a, b, w) in chords {
            d.add(a, b, w);
        }
        d
    }

    /// Unit-weight convenience constructor.
    pub fn from_pairs(t: usize, pairs: &[(usize, usize)]) -> Self {
        DemandSet::from_chords(t, pairs.iter().map(|&(a, b)| (a, b, Rational::one())))
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Adds `w` units between `a` and `b`. Self-loops and non-positive
    /// weights are ignored.
    pub fn add(&mut self, a: usize, b: usize, w: Rational) {
        assert!(
            a < self.t && b < self.t,
            "chord ({a}, {b}) outside face of length {}",
            self.t
        );
        if a == b || w <= Rational::zero() {
            return;
        }
        *self.chords.entry(norm(a, b)).or_insert_with(Rational::zero) += w;
    }

    /// Removes up to `w` units of chord `key`; the chord disappears at zero.
    fn remove(&mut self, key: ChordKey, w: &Rational) {
        if let Some(cur) = self.chords.get_mut(&key) {
            *cur -= w;
            if *cur <= Rational::zero() {
                self.chords.remove(&key);
            }
        }
    }

    pub fn weight(&self, a: usize, b: usize) -> Rational {
        self.chords
            .get(&norm(a, b))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn chords(&self) -> impl Iterator<Item = Chord> + '_ {
        self.chords.iter().map(|(&(a, b), w)| Chord {
            a,
            b,
            weight: w.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.chords
            .values()
            .fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        DemandSet::from_chords(self.t, self.chords().map(|c| (c.a, c.b, c.weight * k)))
    }

    /// Disjoint union (weights add).
    pub fn plus(&self, other: &DemandSet) -> Self {
        assert_eq!(self.t, other.t);
        let mut out = self.clone();
        for c in other.chords() {
            out.add(c.a, c.b, c.weight);
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.chords.values().all(|w| w.is_integer())
    }

    /// Pairs of crossing chords, in lexicographic order.
    pub fn crossing_pairs(&self) -> Vec<(ChordKey, ChordKey)> {
        let keys: Vec<ChordKey> = self.chords.keys().copied().collect();
        let mut out = Vec::new();
        for (i, &c1) in keys.iter().enumerate() {
            for &c2 in &keys[i + 1..] {
                if crossing(self.t, c1, c2) {
                    out.push((c1, c2));
                }
            }
        }
        out
    }

    pub fn is_laminar(&self) -> bool {
        let keys: Vec<ChordKey> = self.chords.keys().copied().collect();
        keys.iter()
            .enumerate()
            .all(|(i, &c1)| keys[i + 1..].iter().all(|&c2| !crossing(self.t, c1, c2)))
    }

    /// `Σ w_i w_j` over crossing pairs.
    pub fn crossing_potential(&self) -> Rational {
        self.crossing_pairs()
            .into_iter()
            .fold(Rational::zero(), |acc, (c1, c2)| {
                acc + &self.chords[&c1] * &self.chords[&c2]
            })
    }
}

/// A half-open arc `[start, start + len)` of face positions, taken mod `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
    pub t: usize,
}

impl Segment {
    pub fn new(start: usize, len: usize, t: usize) -> Result<Self> {
        if t < 2 || start >= t || len == 0 || len >= t {
            return Err(Error::InvalidInput(format!(
                "segment [{start}, +{len}) is not a proper arc of a cycle of length {t}"
            )));
        }
        Ok(Segment { start, len, t })
    }

    pub fn contains(&self, p: usize) -> bool {
        (p + self.t - self.start) % self.t < self.len
    }

    pub fn complement(&self) -> Segment {
        Segment {
            start: (self.start + self.len) % self.t,
            len: self.t - self.len,
            t: self.t,
        }
    }

    /// Every proper contiguous segment of a cycle of length `t`.
    pub fn all(t: usize) -> impl Iterator<Item = Segment> {
        (0..t).flat_map(move |start| (1..t).map(move |len| Segment { start, len, t }))
    }
}

/// Whether chords `c1` and `c2` interleave on the cycle. Chords sharing an
/// endpoint never cross.
pub fn crossing(_t: usize, c1: ChordKey, c2: ChordKey) -> bool {
    let (a, b) = norm(c1.0, c1.1);
    let inside = |p: usize| a < p && p < b;
    let (x, y) = c2;
    if x == a || x == b || y == a || y == b {
        return false;
    }
    inside(x) != inside(y)
}

/// Total weight of chords with exactly one endpoint in `s`.
pub fn delta_segment(d: &DemandSet, s: &Segment) -> Rational {
    d.chords
        .iter()
        .filter(|(&(a, b), _)| s.contains(a) != s.contains(b))
        .fold(Rational::zero(), |acc, (_, w)| acc + w)
}

/// `A >= B`: every contiguous segment carries at least as much demand in `A`.
pub fn dominates(a: &DemandSet, b: &DemandSet) -> bool {
    first_undominated(a, b).is_none()
}

/// A segment where `a` carries less than `b`, if any.
pub fn first_undominated(a: &DemandSet, b: &DemandSet) -> Option<Segment> {
    assert_eq!(a.t, b.t, "demand sets live on different faces");
    Segment::all(a.t).find(|s| delta_segment(a, s) < delta_segment(b, s))
}

/// A segment crossed by every chord, if one exists.
pub fn is_separable(d: &DemandSet) -> Option<Segment> {
    if d.t < 2 {
        return None;
    }
    Segment::all(d.t).find(|s| {
        d.chords
            .keys()
            .all(|&(a, b)| s.contains(a) != s.contains(b))
    })
}

/// The two ways of replacing a crossing pair. With the heavier chord
/// `(a, c)` and the lighter `(b, d)` met in cyclic order `a, b, c, d`, the
/// first pairs `a-b` and `c-d`, the second `b-c` and `d-a`. The heavier
/// chord keeps the weight difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UncrossMode {
    #[default]
    Possibility1,
    Possibility2,
}

/// Uncrosses `c1` and `c2` by moving `min(w1, w2)` units onto the two
/// replacement chords. On equal weights `c1` plays the heavier chord.
pub fn uncross_pair(
    d: &DemandSet,
    c1: ChordKey,
    c2: ChordKey,
    mode: UncrossMode,
) -> Result<DemandSet> {
    let (c1, c2) = (norm(c1.0, c1.1), norm(c2.0, c2.1));
    let w1 = d.weight(c1.0, c1.1);
    let w2 = d.weight(c2.0, c2.1);
    if w1.is_zero() || w2.is_zero() {
        return Err(Error::InvalidInput(format!(
            "chords {c1:?}, {c2:?} are not both present"
        )));
    }
    if !crossing(d.t, c1, c2) {
        return Err(Error::NotCrossing(c1, c2));
    }
    let (heavy, light, w) = if w1 >= w2 { (c1, c2, w2) } else { (c2, c1, w1) };
    // Walk the cycle from heavy.0: heavy.0, then the light endpoint inside
    // (heavy.0, heavy.1), then heavy.1, then the other light endpoint.
    let inside = |p: usize| heavy.0 < p && p < heavy.1;
    let (b, dd) = if inside(light.0) {
        (light.0, light.1)
    } else {
        (light.1, light.0)
    };
    let (a, c) = heavy;
    let (r1, r2) = match mode {
        UncrossMode::Possibility1 => ((a, b), (c, dd)),
        UncrossMode::Possibility2 => ((b, c), (dd, a)),
    };
    let mut out = d.clone();
    out.remove(heavy, &w);
    out.remove(light, &w);
    out.add(r1.0, r1.1, w.clone());
    out.add(r2.0, r2.1, w);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncrossStats {
    pub iterations: usize,
    /// Crossing potential before each iteration and after the last.
    pub potentials: Vec<Rational>,
}

/// Iteration budget `⌈t² ln Φ₀⌉ + 1` for integral weights; `None` when the
/// weights are fractional (the logarithmic bound needs `Φ ≥ 1`).
pub fn iteration_bound(t: usize, phi0: &Rational, integral: bool) -> Option<usize> {
    if !integral {
        return None;
    }
    if phi0.is_zero() {
        return Some(1);
    }
    let tt = (t * t) as f64;
    Some((tt * rational::to_f64(phi0).ln()).ceil().max(0.0) as usize + 1)
}

/// Uncrosses until laminar, always taking the crossing pair with the largest
/// weight product (ties to the lexicographically first pair) and replacing
/// it by the first possibility.
pub fn uncross_all(d: &DemandSet) -> (DemandSet, UncrossStats) {
    let integral = d.is_integral();
    let mut cur = d.clone();
    let mut potentials = Vec::new();
    let mut iterations = 0;
    let mut bound = None;
    loop {
        let pairs = cur.crossing_pairs();
        let phi = pairs.iter().fold(Rational::zero(), |acc, (c1, c2)| {
            acc + &cur.chords[c1] * &cur.chords[c2]
        });
        if potentials.is_empty() {
            bound = iteration_bound(cur.t, &phi, integral);
        }
        potentials.push(phi);
        if pairs.is_empty() {
            break;
        }
        let mut best: Option<(Rational, ChordKey, ChordKey)> = None;
        for (c1, c2) in pairs {
            let p = &cur.chords[&c1] * &cur.chords[&c2];
            if best.as_ref().is_none_or(|(bp, _, _)| p > *bp) {
                best = Some((p, c1, c2));
            }
        }
        let (_, c1, c2) = best.expect("nonempty");
        cur = uncross_pair(&cur, c1, c2, UncrossMode::Possibility1).expect("pair crosses");
        iterations += 1;
        if let Some(b) = bound {
            assert!(
                iterations <= b,
                "uncrossing exceeded its iteration bound {b}"
            );
        }
    }
    (
        cur,
        UncrossStats {
            iterations,
            potentials,
        },
    )
}
