mod common;

use common::*;
use flowgap::facedemands::{is_separable, uncross_all, uncross_pair, DemandSet, UncrossMode};
use flowgap::format::{parse_instance, print_instance};
use flowgap::generate::{self, DemandKind, InstanceSpec};
use flowgap::laminar::approximate;
use flowgap::rational::int;
use flowgap::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn chords() -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
    (4usize..=12).prop_flat_map(|t| {
        (
            Just(t),
            prop::collection::vec((0..t, 1..t, 1i64..=8), 1..=t),
        )
    })
}

fn build(t: usize, raw: &[(usize, usize, i64)]) -> DemandSet {
    let mut d = DemandSet::new(t);
    for &(a, off, w) in raw {
        d.add(a, (a + off) % t, int(w));
    }
    d
}

/// Weighted number of chord ends at every position.
fn terminal_degrees(d: &DemandSet) -> Vec<Rational> {
    let mut deg = vec![Rational::zero(); d.t()];
    for c in d.chords() {
        deg[c.a] += &c.weight;
        deg[c.b] += &c.weight;
    }
    deg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn uncrossing_keeps_terminal_degrees((t, raw) in chords()) {
        let d = build(t, &raw);
        for (c1, c2) in d.crossing_pairs() {
            for mode in [UncrossMode::Possibility1, UncrossMode::Possibility2] {
                let out = uncross_pair(&d, c1, c2, mode).unwrap();
                prop_assert_eq!(terminal_degrees(&out), terminal_degrees(&d));
                prop_assert!(out.total() < d.total() || out.total() == d.total());
            }
        }
        let (out, stats) = uncross_all(&d);
        prop_assert_eq!(terminal_degrees(&out), terminal_degrees(&d));
        prop_assert!(laminar(&out));
        prop_assert!(stats.potentials.last().unwrap().is_zero());
    }

    #[test]
    fn separability_witness_is_genuine((t, raw) in chords()) {
        let d = build(t, &raw);
        let brute = arcs(t).into_iter().find(|&(s, l)| {
            let inside = |p: usize| (p + t - s) % t < l;
            d.chords().all(|c| inside(c.a) != inside(c.b))
        });
        match is_separable(&d) {
            Some(seg) => prop_assert!(d.chords().all(|c| seg.contains(c.a) != seg.contains(c.b))),
            None => prop_assert!(brute.is_none()),
        }
    }

    #[test]
    fn families_dominate((t, raw) in chords()) {
        let d = build(t, &raw);
        let fam = approximate(&d).unwrap();
        let sets: Vec<&DemandSet> = fam.members.iter().map(|m| &m.set).collect();
        prop_assert!(undominated_arc(&sum_sets(t, &sets), &d, &Rational::one()).is_none());
        for m in &fam.members {
            prop_assert!(laminar(&m.set));
        }
    }

    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), n in 3usize..=16, general in any::<bool>()) {
        let kind = if general { DemandKind::General } else { DemandKind::Separable };
        let mut spec = InstanceSpec::new(n, kind);
        spec.faces = 2;
        let inst = generate::random_instance(&mut generate::rng(seed), &spec);
        let text = print_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn euler_holds_on_random_layouts(seed in any::<u64>(), n in 3usize..=20, drop in 0.0f64..1.0) {
        let g = generate::random_plane_graph(&mut generate::rng(seed), n, drop, 3);
        prop_assert_eq!(g.n() + g.faces().len(), g.m() + 2);
        let darts: usize = g.faces().iter().map(|f| f.len()).sum();
        prop_assert_eq!(darts, 2 * g.m());
        for f in g.faces() {
            for (p, &d) in f.darts.iter().enumerate() {
                prop_assert_eq!(g.phi(d), f.darts[(p + 1) % f.len()]);
                prop_assert_eq!(g.origin(d), f.vertices[p]);
            }
        }
    }
}
