//! Cross-checks against independent oracles: brute-force arithmetic,
//! Monte Carlo covariance, exact quadrature and convergence studies.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arw::arithmetic::{
    angular_fourier, enumerate_lattice_set, factorize, is_perfect_square, is_representable,
};
use arw::field::{covariance, derive_seed, sample, torus_covariance, FieldKind};
use arw::kacrice::{
    exact_quadrature_nodes, kac_rice_expected_length, leading_term, local_moments,
    singular_partition, zero_density_integral, KacRiceParams,
};
use arw::nodal::sample_nodal_length;

fn representable(max: u64) -> impl Iterator<Item = u64> {
    (1..=max).filter(|&n| is_representable(n))
}

#[test]
fn lattice_identities_up_to_ten_thousand() {
    for n in representable(10_000) {
        let set = enumerate_lattice_set(n).unwrap();
        assert_eq!(set.size() as u64, factorize(n).r2(), "r2({n})");
        let sum_sq: i64 = set.points.iter().map(|p| p.0 * p.0).sum();
        assert_eq!(
            sum_sq as u64 * 2,
            n * set.size() as u64,
            "sum of squares for {n}"
        );
        if !is_perfect_square(n) {
            let class_sq: i64 = set.classes.iter().map(|p| p.0 * p.0).sum();
            assert_eq!(class_sq as u64 * 8, n * set.size() as u64);
            assert_eq!(set.classes.len() * 4, set.size());
        } else {
            assert_eq!(set.axis_points.len(), 4);
        }
        for k in [1, 2, 3, 5, 6, 7] {
            let (re, im) = angular_fourier(&set, k);
            assert!(re.abs() < 1e-12 && im.abs() < 1e-12, "nu({k}) for {n}");
        }
        let (_, im4) = angular_fourier(&set, 4);
        assert!(im4.abs() < 1e-12);
    }
}

#[test]
fn empirical_covariance_matches_kernel() {
    let set = enumerate_lattice_set(65).unwrap();
    let (x, y) = ((0.31, 0.47), (0.36, 0.44));
    let draws = 100_000u64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for t in 0..draws {
        let w = sample(FieldKind::BoundaryAdapted, &set, derive_seed(99, t)).unwrap();
        let (a, b) = (w.evaluate(x), w.evaluate(y));
        sxy += a * b;
        sxx += a * a;
    }
    let tol = 4.0 / (draws as f64).sqrt();
    assert!((sxy / draws as f64 - covariance(&set, x, y)).abs() < tol);
    assert!((sxx / draws as f64 - covariance(&set, x, x)).abs() < tol);
}

#[test]
fn torus_covariance_is_stationary() {
    let set = enumerate_lattice_set(85).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let x = (rng.gen::<f64>(), rng.gen::<f64>());
        let y = (rng.gen::<f64>(), rng.gen::<f64>());
        let shift = (rng.gen::<f64>(), rng.gen::<f64>());
        let a = torus_covariance(&set, x, y);
        let b = torus_covariance(
            &set,
            (x.0 + shift.0, x.1 + shift.1),
            (y.0 + shift.0, y.1 + shift.1),
        );
        assert!((a - b).abs() < 1e-10);
        assert!((torus_covariance(&set, x, x) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn exact_grid_integrates_every_used_frequency() {
    for n in [65u64, 1105, 20_000] {
        let m = exact_quadrature_nodes(n);
        let kmax = 4 * n.isqrt() as i64;
        for k in 1..=kmax {
            let s: f64 = (0..m)
                .map(|i| (2.0 * PI * k as f64 * i as f64 / m as f64).cos())
                .sum::<f64>()
                / m as f64;
            assert!(s.abs() < 1e-13, "k = {k}, n = {n}: {s}");
        }
    }
}

#[test]
fn average_density_is_leading_to_first_order() {
    let set = enumerate_lattice_set(1105).unwrap();
    let (integral, _, _) = zero_density_integral(&set, 600).unwrap();
    let lead = leading_term(1105);
    assert!((integral - lead).abs() / lead <= 5.0 / set.size() as f64);
}

#[test]
fn quadrature_is_thread_independent() {
    let set = enumerate_lattice_set(130).unwrap();
    let params = KacRiceParams {
        mq: Some(200),
        tolerance: 0.05,
    };
    let run = |t: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .unwrap()
            .install(|| kac_rice_expected_length(&set, &params).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn grid_term_for_765() {
    let set = enumerate_lattice_set(765).unwrap();
    let r = kac_rice_expected_length(
        &set,
        &KacRiceParams {
            mq: Some(600),
            tolerance: 0.05,
        },
    )
    .unwrap();
    assert_eq!(r.grid_term, 4.0);
    assert_eq!(r.total, r.integral + 4.0);
}

#[test]
fn singular_measure_shrinks_with_threshold() {
    let set = enumerate_lattice_set(325).unwrap();
    let measures: Vec<f64> = [0.1, 0.5, 1.0, 3.0, f64::INFINITY]
        .iter()
        .map(|&e| singular_partition(&set, 0.25, e, 3).unwrap().measure)
        .collect();
    assert!(measures.windows(2).all(|w| w[0] >= w[1]), "{measures:?}");
    assert_eq!(*measures.last().unwrap(), 0.0);
}

#[test]
fn omega_diagonal_is_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [5u64, 65, 325, 1105, 5525] {
        let set = enumerate_lattice_set(n).unwrap();
        for _ in 0..500 {
            let x = (rng.gen::<f64>(), rng.gen::<f64>());
            let Ok(m) = local_moments(&set, x) else {
                continue;
            };
            assert!(
                m.omega.xx <= 10.0 && m.omega.yy <= 10.0,
                "{n} {x:?} {:?}",
                m.omega
            );
        }
    }
}

#[test]
fn doubling_resolution_barely_moves_lengths() {
    let set = enumerate_lattice_set(65).unwrap();
    for kind in [FieldKind::BoundaryAdapted, FieldKind::Torus] {
        let (mut a, mut b) = (0.0, 0.0);
        for t in 0..20 {
            let seed = derive_seed(7, t);
            a += sample_nodal_length(kind, &set, seed, 40.0).unwrap().length;
            b += sample_nodal_length(kind, &set, seed, 80.0).unwrap().length;
        }
        assert!((a - b).abs() / b < 0.005, "{kind}: {a} vs {b}");
    }
}

mod marching_squares {
    use arw::field::Grid;
    use arw::nodal::{marching_squares_length, marching_squares_length_periodic};
    use proptest::prelude::*;

    fn grid(m: usize, v: &[f64]) -> Grid {
        Grid::from_fn(m, |i, j| v[i * m + j])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn symmetries_are_exact(
            v in prop::collection::vec(-1.0f64..1.0, 64),
            k in -20i32..20,
            sign in prop::bool::ANY,
        ) {
            let g = grid(8, &v);
            let base = marching_squares_length(&g, 1.0 / 7.0).unwrap().length;
            let c = if sign { -(2f64.powi(k)) } else { 2f64.powi(k) };
            prop_assert_eq!(marching_squares_length(&g.transposed(), 1.0 / 7.0).unwrap().length, base);
            prop_assert_eq!(marching_squares_length(&g.scaled(c), 1.0 / 7.0).unwrap().length, base);
            let p = marching_squares_length_periodic(&g, 1.0 / 8.0).unwrap().length;
            prop_assert!(p >= 0.0);
            prop_assert_eq!(marching_squares_length_periodic(&g.transposed(), 1.0 / 8.0).unwrap().length, p);
        }

        #[test]
        fn each_cell_contributes_at_most_two_diagonals(v in prop::collection::vec(-1.0f64..1.0, 25)) {
            let len = marching_squares_length(&grid(5, &v), 1.0).unwrap().length;
            prop_assert!(len <= 16.0 * 2.0 * std::f64::consts::SQRT_2 + 1e-12);
        }
    }
}
