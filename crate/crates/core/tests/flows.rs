mod common;

use common::*;
use flowgap::cutcheck::brute_force_check;
use flowgap::generate::{self, DemandKind, InstanceSpec};
use flowgap::pipeline::{approx_sparsest_cut, route_with_gap};
use flowgap::planar::FaceInstance;
use flowgap::rational::{frac, int, to_f64};
use flowgap::route::{max_concurrent_flow, validate_flow};
use flowgap::{Error, Rational};
use num_traits::One;
use rand::Rng;

#[test]
fn oracle_is_within_eps_of_the_exact_optimum() {
    let mut rng = generate::rng(seed(11));
    for r in 0..40 {
        let n = rng.gen_range(4..=6);
        let mut spec = InstanceSpec::new(n, DemandKind::General);
        spec.demands = rng.gen_range(1..=3);
        spec.faces = 2;
        let inst = generate::random_instance(&mut rng, &spec);
        let cs = inst.commodities();
        if cs.is_empty() {
            continue;
        }
        let exact = exact_concurrency(&inst.graph, &cs);
        let flow = max_concurrent_flow(&inst.graph, &cs, 0.05).unwrap();
        assert!(
            validate_flow(&inst.graph, &cs, &flow, &Rational::one()).is_valid(),
            "run {r}"
        );
        assert!(
            flow.lambda <= exact,
            "run {r}: {} above optimum {exact}",
            flow.lambda
        );
        assert!(
            flow.lambda >= &exact * frac(19, 20),
            "run {r}: {} far below {exact}",
            flow.lambda
        );
    }
}

#[test]
fn violated_instances_are_refuted_with_a_real_cut() {
    let mut rng = generate::rng(seed(12));
    let mut refuted = 0;
    for _ in 0..60 {
        let mut spec = InstanceSpec::new(rng.gen_range(5..=10), DemandKind::Separable);
        spec.max_value = 4;
        spec.demands = 5;
        let inst = generate::random_instance(&mut rng, &spec);
        let truth = brute_force_check(&inst.graph, &inst.commodities(), 16).unwrap();
        match route_with_gap(&inst, 0.05) {
            Ok(r) => {
                let bound = int(3) * frac(11, 10);
                check_full_routing(&inst.graph, &inst.commodities(), &r.flow, &bound).unwrap();
            }
            Err(Error::CutViolated(cert)) => {
                assert!(
                    truth.is_violated(),
                    "refuted an instance that meets the cut condition"
                );
                let side: Vec<bool> = (0..inst.graph.n()).map(|v| cert.set.contains(&v)).collect();
                assert!(cut_supply(&inst.graph, &side) < cut_demand(&inst.commodities(), &side));
                refuted += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(refuted > 0);
}

#[test]
fn sparsest_cut_without_demand_is_unbounded() {
    let g = generate::random_plane_graph(&mut generate::rng(3), 6, 0.5, 2);
    let inst = FaceInstance::new(g, Vec::new()).unwrap();
    let res = approx_sparsest_cut(&inst).unwrap();
    assert!(res.ratio.is_none() && res.set.is_empty());
}

#[test]
fn cut_vertex_instances_route_through_blocks() {
    // Two triangles sharing vertex 2, demand from one far corner to the other.
    use flowgap::planar::{embed_straight_line, FaceDemand};
    let pts = [(0.0, 0.0), (0.0, 2.0), (1.0, 1.0), (2.0, 0.0), (2.0, 2.0)];
    let ends = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
    let g = embed_straight_line(
        &pts,
        &ends,
        &[int(1), int(1), int(1), int(1), int(1), int(1)],
    )
    .unwrap();
    let outer = g
        .faces()
        .iter()
        .find(|f| f.position_of(0).is_some() && f.position_of(3).is_some())
        .unwrap()
        .id;
    let inst = FaceInstance::new(
        g,
        vec![FaceDemand {
            u: 0,
            v: 3,
            face: outer,
            value: 2,
        }],
    )
    .unwrap();
    let r = route_with_gap(&inst, 0.05).unwrap();
    let ratio = check_full_routing(
        &inst.graph,
        &inst.commodities(),
        &r.flow,
        &(int(3) * frac(11, 10)),
    )
    .unwrap();
    assert!(to_f64(&ratio) <= 3.3);
}
