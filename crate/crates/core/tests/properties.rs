mod common;

use std::collections::BTreeSet;

use cubeknot::fixtures;
use cubeknot::format::{
    digest, parse_certificate, parse_knot, serialize_certificate, serialize_knot,
};
use cubeknot::knot::orientation_from;
use cubeknot::search::SearchOptions;
use cubeknot::{
    apply_move, bfs_search, enumerate_face_moves, is_legal, random_walk, subdivide_knot,
    FaceBoundaryMove, KnotDiagram, LatticeCell, MoveEngine,
};
use proptest::prelude::*;

fn walked(start: KnotDiagram, steps: usize, seed: u64) -> KnotDiagram {
    random_walk(&start, steps, seed).unwrap().0
}

fn seed_knot(which: u8) -> KnotDiagram {
    match which % 3 {
        0 => fixtures::sphere(),
        1 => fixtures::box_sphere([2, 1, 1]),
        _ => fixtures::square_loop(),
    }
}

fn arb_cell(n: usize) -> impl Strategy<Value = LatticeCell> {
    (prop::collection::vec(-4i64..4, n), 0u32..(1 << n)).prop_map(move |(anchor, mask)| {
        let axes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        LatticeCell::new(&anchor, &axes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_has_two_k_cells_and_squares_to_zero(c in arb_cell(4)) {
        prop_assume!(c.dim() >= 1);
        let b = c.boundary_cells().unwrap();
        prop_assert_eq!(b.len(), 2 * c.dim());
        prop_assert_eq!(b.iter().collect::<BTreeSet<_>>().len(), b.len());
        if c.dim() >= 2 {
            let mut count = std::collections::BTreeMap::new();
            for f in &b {
                for r in f.boundary_cells().unwrap() {
                    *count.entry(r).or_insert(0) += 1;
                }
            }
            prop_assert!(count.values().all(|&n| n == 2));
        }
    }

    #[test]
    fn coface_iff_containment(a in arb_cell(4), b in arb_cell(4)) {
        prop_assume!(b.dim() > a.dim());
        let listed = a.cofaces(b.dim()).unwrap().contains(&b);
        let oracle: BTreeSet<LatticeCell> = common::faces(&b).into_iter().collect();
        prop_assert_eq!(listed, oracle.contains(&a));
    }

    #[test]
    fn subdivision_tiles_the_cell(c in arb_cell(3), m in 2u32..4) {
        let parts = c.subdivide(m).unwrap();
        prop_assert_eq!(parts.len(), (m as usize).pow(c.dim() as u32));
        // every refined vertex of the cell's hull is covered, nothing outside is
        let covered: BTreeSet<LatticeCell> =
            parts.iter().flat_map(|p| p.vertices()).collect();
        let m = i64::from(m);
        let mut hull = BTreeSet::new();
        let ranges: Vec<(i64, i64)> = (0..3)
            .map(|i| {
                let (lo, hi) = c.bounds(i);
                (lo * m, hi * m)
            })
            .collect();
        for x in ranges[0].0..=ranges[0].1 {
            for y in ranges[1].0..=ranges[1].1 {
                for z in ranges[2].0..=ranges[2].1 {
                    hull.insert(common::cell(&[x, y, z], &[]));
                }
            }
        }
        prop_assert_eq!(covered, hull);
    }

    #[test]
    fn single_cell_boundary_is_a_knot_at_every_scale(
        x in -3i64..3, y in -3i64..3, m in 1u32..4
    ) {
        let d = fixtures::cube_sphere([x, y, 0, 0]);
        let d = if m > 1 { subdivide_knot(&d, m).unwrap() } else { d };
        prop_assert!(d.is_valid(), "{}", d.report());
    }

    #[test]
    fn involution(which in 0u8..3, steps in 0usize..15, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let d = walked(seed_knot(which), steps, seed);
        let moves = enumerate_face_moves(&d);
        let mv = pick.get(&moves);
        let there = apply_move(&d, mv).unwrap();
        let back = apply_move(&there, &mv.invert()).unwrap();
        prop_assert_eq!(back.cells(), d.cells());
    }

    #[test]
    fn enumerated_moves_preserve_validity(which in 0u8..3, steps in 0usize..20, seed in any::<u64>()) {
        let d = walked(seed_knot(which), steps, seed);
        for mv in enumerate_face_moves(&d) {
            let out = apply_move(&d, &mv);
            prop_assert!(out.is_ok(), "{mv}: {:?}", out.err());
        }
    }

    #[test]
    fn engine_verdict_matches_full_check(which in 0u8..3, steps in 0usize..20, seed in any::<u64>()) {
        let d = walked(seed_knot(which), steps, seed);
        let engine = MoveEngine::new(&d).unwrap();
        let k = d.dim();
        let carriers: BTreeSet<LatticeCell> =
            d.cells().iter().flat_map(|c| c.cofaces(k + 1).unwrap()).collect();
        for f in carriers {
            let removed: Vec<LatticeCell> = f
                .boundary_cells()
                .unwrap()
                .into_iter()
                .filter(|c| d.cells().contains(c))
                .collect();
            let full = FaceBoundaryMove::new(f, removed)
                .ok()
                .is_some_and(|mv| is_legal(&d, &mv));
            prop_assert_eq!(engine.move_for(&f).is_some(), full, "carrier {}", f);
        }
    }

    #[test]
    fn subdivision_commutes_with_exchange(
        which in 0u8..3, steps in 0usize..8, seed in any::<u64>(),
        pick in any::<prop::sample::Index>(), m in 2u32..4
    ) {
        let d = walked(seed_knot(which), steps, seed);
        let moves = enumerate_face_moves(&d);
        let mv = pick.get(&moves);
        let after = subdivide_knot(&apply_move(&d, mv).unwrap(), m).unwrap();
        let mut image: BTreeSet<LatticeCell> = subdivide_knot(&d, m).unwrap().cells().clone();
        for c in mv.removed() {
            for p in c.subdivide(m).unwrap() {
                prop_assert!(image.remove(&p));
            }
        }
        for c in mv.inserted() {
            for p in c.subdivide(m).unwrap() {
                prop_assert!(image.insert(p));
            }
        }
        prop_assert_eq!(&image, after.cells());
    }

    #[test]
    fn euler_characteristic_survives_subdivision(which in 0u8..3, steps in 0usize..10, seed in any::<u64>(), m in 2u32..5) {
        let d = walked(seed_knot(which), steps, seed);
        let chi = common::euler(d.cells());
        let fine = subdivide_knot(&d, m).unwrap();
        prop_assert_eq!(common::euler(fine.cells()), chi);
        prop_assert_eq!(fine.complex().euler_characteristic(), chi);
    }

    #[test]
    fn orientability_does_not_depend_on_the_root(which in 0u8..4, steps in 0usize..10, seed in any::<u64>()) {
        let d = if which == 3 { fixtures::torus() } else { walked(seed_knot(which), steps, seed) };
        let verdict = orientation_from(d.complex(), None).is_some();
        for root in d.cells() {
            prop_assert_eq!(orientation_from(d.complex(), Some(root)).is_some(), verdict);
        }
    }

    #[test]
    fn knot_files_round_trip(which in 0u8..3, steps in 0usize..20, seed in any::<u64>()) {
        let d = walked(seed_knot(which), steps, seed);
        let text = serialize_knot(&d);
        let back = parse_knot(&text).unwrap();
        prop_assert_eq!(back.cells(), d.cells());
        prop_assert_eq!(digest(&back), digest(&d));
        prop_assert_eq!(serialize_knot(&back), text);
    }

    #[test]
    fn certificates_round_trip(which in 0u8..3, steps in 0usize..12, seed in any::<u64>()) {
        let (_, seq) = random_walk(&seed_knot(which), steps, seed).unwrap();
        let back = parse_certificate(&serialize_certificate(&seq)).unwrap();
        prop_assert_eq!(&back, &seq);
        prop_assert!(back.replay().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_undoes_short_walks(which in 0u8..3, steps in 0usize..4, seed in any::<u64>()) {
        let start = seed_knot(which);
        let (end, _) = random_walk(&start, steps, seed).unwrap();
        let opts = SearchOptions { max_moves: steps, ..SearchOptions::default() };
        let found = bfs_search(&end, &start, &opts).unwrap();
        prop_assert!(found.certificate.len() <= steps);
        prop_assert_eq!(found.certificate.replay().unwrap(), start);
    }

    #[test]
    fn slices_depend_only_on_the_floor(level in 0i64..3, shift in any::<bool>()) {
        let j = if shift { fixtures::double_shift_cylinder() } else { fixtures::product_cylinder(3) };
        let t = level as f64;
        let a = j.slice_at(t + 0.25).unwrap();
        prop_assert_eq!(&j.slice_at(t + 0.5).unwrap(), &a);
        prop_assert_eq!(&j.slice_at(t + 0.75).unwrap(), &a);
        prop_assert!(a.is_valid());
    }
}
