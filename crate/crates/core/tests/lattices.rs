mod common;

use std::collections::BTreeSet;

use common::DpOracle;
use findim::approximation::{lattice_approx, FractalOracle};
use findim::cover::min_cover_count;
use findim::dimension::dim_fh;
use findim::generators::{
    cantor_level, cantor_square_level, carpet_count, carpet_level, closed_form, sierpinski_level,
    sierpinski_tetra_level, Family,
};
use findim::lattice::{LatticeSet, TSource};
use findim::metric::summarize;
use findim::Error;
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lattice_summary_matches_metric(pts in prop::collection::btree_set((0i64..7, 0i64..7), 2..30), tri in any::<bool>()) {
        let pts: Vec<Vec<i64>> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
        let l = if tri { LatticeSet::triangular(0.5, pts).unwrap() } else { LatticeSet::cubic(2, 0.5, pts).unwrap() };
        let s = l.summary().unwrap();
        let m = summarize(&l.to_metric()).unwrap();
        prop_assert!(close(s.separation, m.separation));
        prop_assert!(close(s.covering_diameter, m.covering_diameter));
        prop_assert!(close(s.diameter, m.diameter));
        prop_assert_eq!(s.has_focal_points(), m.has_focal_points());
    }

    #[test]
    fn matching_route_agrees_with_branch_and_bound(pts in prop::collection::btree_set((0i64..8, 0i64..8), 3..40)) {
        let pts: Vec<Vec<i64>> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
        let l = LatticeSet::cubic(2, 1.0, pts).unwrap();
        let m = l.to_metric();
        match l.exact_cover_count(0) {
            Ok(c) => {
                prop_assert_eq!(c.source, TSource::Matching);
                let want = min_cover_count(&m, l.summary().unwrap().covering_diameter).unwrap().count as u64;
                prop_assert_eq!(c.count, want);
            }
            Err(Error::InfiniteDimension) => prop_assert!(summarize(&m).unwrap().has_focal_points()),
            Err(e) => prop_assert!(e.is_budget()),
        }
    }
}

#[test]
fn branch_and_bound_matches_dp_on_small_levels() {
    for l in [cantor_level(3).unwrap(), sierpinski_level(2).unwrap(), carpet_level(0).unwrap()] {
        let m = l.to_metric();
        let nabla = summarize(&m).unwrap().covering_diameter;
        assert_eq!(l.exact_cover_count(128).unwrap().count as usize, DpOracle::new(&m, nabla).count());
    }
}

#[test]
fn ladder_uses_matching() {
    let pts = (0..10).flat_map(|i| [vec![i, 0], vec![i, 1]]).collect();
    let l = LatticeSet::cubic(2, 1.0, pts).unwrap();
    let c = l.exact_cover_count(0).unwrap();
    assert_eq!((c.count, c.source), (10, TSource::Matching));
}

#[test]
fn level_sizes() {
    for n in 0..=6 {
        assert_eq!(cantor_level(n).unwrap().len(), 1 << n);
        assert_eq!(cantor_square_level(n).unwrap().len(), 1 << (2 * n));
        assert_eq!(sierpinski_level(n).unwrap().len(), 3usize.pow(n));
    }
    for n in 0..=4 {
        assert_eq!(sierpinski_tetra_level(n).unwrap().len(), 4usize.pow(n));
    }
    for n in 0..=4 {
        assert_eq!(carpet_level(n).unwrap().len() as u64, carpet_count(n).unwrap());
    }
}

#[test]
fn sierpinski_points_are_distinct_and_uniform() {
    let l = sierpinski_level(4).unwrap();
    let set: BTreeSet<Vec<i64>> = l.points().map(|p| p.to_vec()).collect();
    assert_eq!(set.len(), l.len());
    let s = l.summary().unwrap();
    assert!(s.locally_uniform());
    assert!(close(s.covering_diameter, 1.0 / 16.0));
    assert!(close(s.diameter, 15.0 / 16.0));
}

#[test]
fn full_solve_matches_closed_form() {
    let l = cantor_square_level(3).unwrap();
    let d = dim_fh(&l.to_metric()).unwrap().value.unwrap();
    assert!((d - closed_form(Family::CantorSquare, 3).unwrap().dim.unwrap()).abs() < 1e-9);
}

#[test]
fn grid_approximations_are_locally_uniform() {
    for (o, eps) in [(FractalOracle::Carpet, 1.0 / 9.0), (FractalOracle::Sierpinski, 0.25), (FractalOracle::Tetra, 0.5)]
    {
        let a = lattice_approx(&o, eps).unwrap();
        let s = a.lattice.summary().unwrap();
        assert!(s.locally_uniform(), "{o:?}");
        assert!(close(s.covering_diameter, eps));
    }
}
