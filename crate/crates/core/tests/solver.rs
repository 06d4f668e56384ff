use std::f64::consts::PI;

use l1tv::analytic::candidates;
use l1tv::geom::Point;
use l1tv::mask::{Grid, PixelMask};
use l1tv::oracle::{candidate_mask, rasterize_shape};
use l1tv::shapes::{AnnulusSpec, DiscSpec, DumbbellSpec, Problem, ShapeSpec, SquareAnnulusSpec};
use l1tv::solver::{
    audit_energy, build_graph, classify_result, min_cut, solve_problem, GraphOptions, Neighborhood,
};
use proptest::prelude::*;

fn options(neighborhood: Neighborhood) -> GraphOptions {
    GraphOptions {
        neighborhood,
        ..GraphOptions::default()
    }
}

/// Smallest audited energy over every mask of a tiny grid.
fn brute_force_minimum(omega: &PixelMask, lambda: f64, nb: Neighborhood) -> u64 {
    let grid = *omega.grid();
    let n = grid.len();
    (0..1u32 << n)
        .map(|bits| {
            let mask = PixelMask::new(grid, (0..n).map(|i| bits >> i & 1 == 1).collect()).unwrap();
            audit_energy(&mask, omega, lambda, nb)
                .unwrap()
                .total_units()
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn min_cut_matches_enumeration(
        bits in proptest::collection::vec(any::<bool>(), 12),
        lambda in 0.2f64..30.0,
        sixteen in any::<bool>(),
    ) {
        let nb = if sixteen { Neighborhood::Sixteen } else { Neighborhood::Eight };
        let grid = Grid::new(4, 3, 0.4, Point::ORIGIN).unwrap();
        let omega = PixelMask::new(grid, bits).unwrap();
        let result = min_cut(&build_graph(&omega, lambda, options(nb)).unwrap()).unwrap();
        let best = brute_force_minimum(&omega, lambda, nb);
        prop_assert_eq!(result.flow_units, best);
        prop_assert_eq!(result.energy_units, best);
        prop_assert_eq!(audit_energy(&result.mask, &omega, lambda, nb).unwrap().total_units(), best);
    }
}

#[test]
fn solver_beats_every_rasterized_candidate() {
    let cases: [(ShapeSpec, f64); 3] = [
        (AnnulusSpec::new(1.0, 0.8, 0.1).unwrap().into(), 10.0),
        (SquareAnnulusSpec::new(1.0, 2.0, 0.1).unwrap().into(), 16.0),
        (DumbbellSpec::new(1.0, 0.3, 1.0, 0.2).unwrap().into(), 8.0),
    ];
    for (shape, lambda) in cases {
        let omega = rasterize_shape(&shape, 192).unwrap();
        let result =
            min_cut(&build_graph(&omega, lambda, GraphOptions::default()).unwrap()).unwrap();
        let own = audit_energy(&result.mask, &omega, lambda, Neighborhood::Sixteen).unwrap();
        assert_eq!(own.total_units(), result.energy_units);
        assert_eq!(result.flow_units, result.energy_units);
        assert_eq!(result.offset, 0.0);
        for c in candidates(shape.family()) {
            let mask = candidate_mask(&shape, lambda, c.kind, *omega.grid()).unwrap();
            let audit = audit_energy(&mask, &omega, lambda, Neighborhood::Sixteen).unwrap();
            assert!(audit.total_units() >= result.energy_units, "{shape:?} {c}");
        }
    }
}

#[test]
fn solves_are_deterministic() {
    let problem = Problem::new(DumbbellSpec::new(1.0, 0.3, 1.0, 0.2).unwrap(), 8.0);
    let a = solve_problem(&problem, 160, GraphOptions::default()).unwrap();
    let b = solve_problem(&problem, 160, GraphOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_audit_is_fidelity_of_omega() {
    let shape: ShapeSpec = DiscSpec::new(1.0).unwrap().into();
    let omega = rasterize_shape(&shape, 128).unwrap();
    let empty = PixelMask::empty(*omega.grid());
    let a = audit_energy(&empty, &omega, 2.5, Neighborhood::Sixteen).unwrap();
    assert_eq!(a.perimeter_units, 0);
    assert_eq!(a.fidelity_units % omega.count() as u64, 0);
    let per_pixel = a.fidelity() / omega.count() as f64;
    let h2 = omega.spacing() * omega.spacing();
    assert!((per_pixel / (2.5 * h2) - 1.0).abs() < 1e-6);
}

#[test]
fn disc_perimeter_calibration() {
    for radius in [0.25, 0.5, 1.0] {
        let shape: ShapeSpec = DiscSpec::new(radius).unwrap().into();
        let omega = rasterize_shape(&shape, 1024).unwrap();
        let a = audit_energy(&omega, &omega, 1.0, Neighborhood::Sixteen).unwrap();
        assert_eq!(a.fidelity_units, 0);
        let rel = (a.perimeter() / (2.0 * PI * radius) - 1.0).abs();
        assert!(rel < 0.02, "radius {radius}: {rel}");
    }
}

#[test]
fn classification_rejects_foreign_grids() {
    let shape: ShapeSpec = DiscSpec::new(1.0).unwrap().into();
    let result = solve_problem(&Problem::new(shape, 4.0), 64, GraphOptions::default()).unwrap();
    let other: ShapeSpec = DiscSpec::new(2.0).unwrap().into();
    assert!(classify_result(&result, &other, 4.0).is_err());
}
