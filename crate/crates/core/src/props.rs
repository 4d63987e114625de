//! Randomized properties across the algebra, graph and flag layers.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::flag::{FlagGraph, FlagSide, ZStep, ZWalk, ZWord};
use crate::graph::{DGraph, DWalk, Side, Vertex};
use crate::poly::{parse_stablemap, write_stablemap, AffineMap, Poly, PolyMap};
use crate::ring::{Ring, RingElem};

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::residue(6).unwrap()),
        Just(Ring::prime_field(5).unwrap()),
        Just(Ring::prime_field(127).unwrap()),
        Just(Ring::residue(256).unwrap()),
        Just(Ring::residue(1 << 32).unwrap()),
    ]
}

/// Rings with at least three regular elements, as walks require.
fn walk_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::prime_field(5).unwrap()),
        Just(Ring::prime_field(127).unwrap()),
        Just(Ring::residue(256).unwrap()),
        Just(Ring::residue(1 << 16).unwrap()),
    ]
}

fn poly(ring: Ring, dim: usize, max_deg: u8) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=max_deg, dim), any::<u64>());
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().map(|&x| x as usize).sum::<usize>() <= max_deg as usize);
        Poly::from_terms(ring, dim, terms).unwrap()
    })
}

fn map(ring: Ring, dim: usize, max_deg: u8) -> impl Strategy<Value = PolyMap> {
    prop::collection::vec(poly(ring, dim, max_deg), dim).prop_map(move |coords| PolyMap::new(ring, coords).unwrap())
}

fn ring_and_maps(count: usize, max_deg: u8) -> impl Strategy<Value = (Ring, Vec<PolyMap>, Vec<RingElem>)> {
    (ring_strategy(), 1usize..=4).prop_flat_map(move |(ring, dim)| {
        (
            Just(ring),
            prop::collection::vec(map(ring, dim, max_deg), count),
            prop::collection::vec(0..ring.modulus(), dim),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_operations_stay_canonical(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (ring.reduce(a), ring.reduce(b), ring.reduce(c));
        let m = ring.modulus();
        for x in [ring.add(a, b), ring.sub(a, b), ring.mul(a, b), ring.neg(a)] {
            prop_assert!(x < m);
        }
        prop_assert_eq!(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
        prop_assert_eq!(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
        prop_assert_eq!(ring.add(a, ring.neg(a)), 0);
    }

    #[test]
    fn recanonicalizing_is_identity((ring, maps, _) in ring_and_maps(1, 3)) {
        for p in maps[0].coords() {
            let again = Poly::from_terms(
                ring,
                p.dim(),
                p.terms().iter().map(|(m, c)| (m.exponents().to_vec(), *c)),
            )
            .unwrap();
            prop_assert_eq!(&again, p);
        }
    }

    #[test]
    fn composition_is_associative((_, maps, _) in ring_and_maps(3, 2)) {
        let (f, g, h) = (&maps[0], &maps[1], &maps[2]);
        let left = f.compose(&g.compose(h).unwrap()).unwrap();
        let right = f.compose(g).unwrap().compose(h).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_agrees_with_evaluation((_, maps, v) in ring_and_maps(2, 3)) {
        let (f, g) = (&maps[0], &maps[1]);
        let fg = f.compose(g).unwrap();
        prop_assert_eq!(fg.eval(&v).unwrap(), f.eval(&g.eval(&v).unwrap()).unwrap());
    }

    #[test]
    fn powers_add((_, maps, _) in ring_and_maps(1, 2), a in 0u64..3, b in 0u64..3) {
        let f = &maps[0];
        let whole = f.power(a + b).unwrap();
        prop_assert_eq!(whole, f.power(a).unwrap().compose(&f.power(b).unwrap()).unwrap());
    }

    #[test]
    fn affine_maps_compose_to_affine(ring in ring_strategy(), dim in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AffineMap::random_first_row(ring, dim, &mut rng).to_map();
        let b = AffineMap::random_first_row(ring, dim, &mut rng).to_map();
        prop_assert!(a.compose(&b).unwrap().degree() <= 1);
    }

    #[test]
    fn stablemap_round_trip((_, maps, _) in ring_and_maps(1, 3)) {
        let text = write_stablemap(&maps[0]);
        let back = parse_stablemap(&text).unwrap();
        prop_assert_eq!(&back, &maps[0]);
        prop_assert_eq!(write_stablemap(&back), text);
    }

    #[test]
    fn solved_vertices_are_incident(ring in walk_ring(), n in 2usize..12, seed in any::<u64>()) {
        let g = DGraph::new(ring, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = g.random_vertex(Side::Line, &mut rng);
        let p = g.point_on_line(&l, ring.sample(&mut rng)).unwrap();
        prop_assert!(g.is_incident(&p, &l).unwrap());
        let q = g.random_vertex(Side::Point, &mut rng);
        let m = g.line_through_point(&q, ring.sample(&mut rng)).unwrap();
        prop_assert!(g.is_incident(&q, &m).unwrap());
    }

    #[test]
    fn x_steps_invert(ring in walk_ring(), n in 2usize..12, seed in any::<u64>(), line in any::<bool>()) {
        let g = DGraph::new(ring, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = g.random_vertex(if line { Side::Line } else { Side::Point }, &mut rng);
        let (a, b) = (ring.sample(&mut rng), ring.sample(&mut rng));
        let there = g.apply_x(&v, a, b).unwrap();
        prop_assert_eq!(g.apply_x(&there, ring.neg(b), ring.neg(a)).unwrap(), v);
    }

    #[test]
    fn walks_truncate_to_smaller_graphs(ring in walk_ring(), n in 3usize..14, steps in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = DWalk::random(ring, steps, true, &mut rng).unwrap();
        let big = DGraph::new(ring, n).unwrap();
        let v = big.random_vertex(Side::Point, &mut rng);
        let end = big.walk_apply(&v, &w).unwrap();
        for i in 2..n {
            let small = DGraph::new(ring, i).unwrap();
            let got = small.walk_apply(&Vertex::point(v.coords[..i].to_vec()), &w).unwrap();
            prop_assert_eq!(&got.coords[..], &end.coords[..i]);
        }
    }

    #[test]
    fn walk_maps_match_numeric_walks(ring in walk_ring(), n in 2usize..10, steps in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DGraph::new(ring, n).unwrap();
        let w = DWalk::random(ring, steps, true, &mut rng).unwrap();
        let m = g.walk_symbolic(&w).unwrap();
        prop_assert!(m.degree() <= 3);
        let v = g.random_vertex(Side::Point, &mut rng);
        prop_assert_eq!(m.eval(&v.coords).unwrap(), g.walk_apply(&v, &w).unwrap().coords);
    }

    #[test]
    fn z_steps_undo(ring in walk_ring(), n in 2usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fg = FlagGraph::new(ring, n, true).unwrap();
        let (a, b) = (ring.sample_regular(&mut rng).unwrap(), ring.sample_regular(&mut rng).unwrap());
        let undo = ZWord { steps: vec![ZStep::Forward(a, b), ZStep::Inverse(a, b)] };
        prop_assert!(fg.word_symbolic(&undo).unwrap().is_identity());
        let f = fg.random_flag(FlagSide::F1, &mut rng);
        prop_assert_eq!(fg.apply_z_inverse(&fg.apply_z(&f, a, b).unwrap(), a, b).unwrap(), f);
    }

    #[test]
    fn zwalks_truncate_to_smaller_flag_graphs(ring in walk_ring(), n in 3usize..12, len in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = ZWalk::random(ring, len, &mut rng).unwrap();
        let big = FlagGraph::new(ring, n, true).unwrap();
        let f = big.random_flag(FlagSide::F1, &mut rng);
        let end = big.apply_zwalk(&f, &w).unwrap().data;
        let small = FlagGraph::new(ring, n - 1, true).unwrap();
        let mut data = f.data[..n - 1].to_vec();
        data.push(f.data[n]);
        let got = small.apply_zwalk(&crate::flag::Flag::f1(data), &w).unwrap().data;
        prop_assert_eq!(&got[..n - 1], &end[..n - 1]);
        prop_assert_eq!(got[n - 1], end[n]);
    }
}

#[test]
fn generic_zwalks_reach_degree_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for ring in [Ring::prime_field(127).unwrap(), Ring::residue(256).unwrap()] {
        for n in [6, 9, 14] {
            let fg = FlagGraph::new(ring, n, true).unwrap();
            for len in 1..4 {
                let g = fg.zwalk_symbolic(&ZWalk::random(ring, len, &mut rng).unwrap()).unwrap();
                assert_eq!(g.degree(), 3, "{ring} n={n} len={len}");
            }
        }
    }
}
