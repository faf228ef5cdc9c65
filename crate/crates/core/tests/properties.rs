use cantor_spectrum::{
    assemble_pencil, build_string, count_below, eigenvalue, make_params, step_approximate,
    BoundaryCondition, MonotoneSamples,
};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = (usize, f64)> {
    (2usize..=4, 0.05f64..0.95).prop_map(|(kappa, frac)| (kappa, frac / kappa as f64))
}

fn boundary() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Dirichlet),
        (0.0f64..20.0, 0.0f64..20.0).prop_map(|(g0, g1)| BoundaryCondition::robin(g0, g1).unwrap()),
        Just(BoundaryCondition::neumann()),
    ]
}

fn monotone() -> impl Strategy<Value = MonotoneSamples> {
    (
        -5.0f64..5.0,
        0.1f64..10.0,
        prop::collection::vec(
            (
                0.01f64..1.0,
                prop_oneof![Just(0.0), 0.0f64..2.0, 5.0f64..20.0],
            ),
            1..30,
        ),
    )
        .prop_map(|(lo, width, steps)| {
            let total: f64 = steps.iter().map(|s| s.0).sum();
            let mut xs = vec![lo];
            let mut fs = vec![0.0];
            for (dx, df) in &steps {
                xs.push(xs.last().unwrap() + width * dx / total);
                fs.push(fs.last().unwrap() + df);
            }
            *fs.last_mut().unwrap() += 1.0;
            MonotoneSamples::new(xs, fs).unwrap()
        })
        .prop_filter("strictly increasing abscissae", |f| {
            f.xs.windows(2).all(|w| w[0] < w[1])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversed_string_with_swapped_ends_has_the_same_inertia(
        (kappa, a) in weight(),
        level in 0usize..=4,
        bc in boundary(),
        probes in prop::collection::vec(-2.0f64..7.0, 100),
    ) {
        let p = make_params(kappa, a).unwrap();
        let s = build_string(&p, level).unwrap();
        let forward = assemble_pencil(&s, bc);
        let backward = assemble_pencil(&s.reversed(), bc.swapped());
        for e in probes {
            let lambda = 10f64.powf(e);
            prop_assert_eq!(count_below(&forward, lambda).unwrap(), count_below(&backward, lambda).unwrap());
        }
    }

    #[test]
    fn pencil_is_positive_semidefinite((kappa, a) in weight(), level in 0usize..=5, bc in boundary()) {
        let p = make_params(kappa, a).unwrap();
        let pencil = assemble_pencil(&build_string(&p, level).unwrap(), bc);
        prop_assert_eq!(count_below(&pencil, 0.0).unwrap(), 0);
        prop_assert_eq!(count_below(&pencil, -1.0).unwrap(), 0);
    }

    #[test]
    fn counts_and_eigenvalues_increase((kappa, a) in weight(), level in 1usize..=4, bc in boundary()) {
        let p = make_params(kappa, a).unwrap();
        let pencil = assemble_pencil(&build_string(&p, level).unwrap(), bc);
        let mut prev = 0;
        for i in 0..60 {
            let c = count_below(&pencil, 10f64.powf(-1.0 + 0.15 * i as f64)).unwrap();
            prop_assert!(c >= prev);
            prev = c;
        }
        let n = pencil.finite_eigenvalues().min(12);
        let values: Vec<f64> = (0..n).map(|k| eigenvalue(&pencil, k, 1e-12).unwrap()).collect();
        // small a gives pairs closer than the bisection tolerance
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]), "{:?}", values);
        for (k, v) in values.iter().enumerate() {
            prop_assert!(count_below(&pencil, v * (1.0 - 1e-9)).unwrap() <= k);
            prop_assert!(count_below(&pencil, v * (1.0 + 1e-9) + 1e-12).unwrap() > k);
        }
    }

    #[test]
    fn step_approximation_obeys_the_bound(f in monotone(), n in 0u32..=8, eps in 1e-4f64..0.5) {
        let g = step_approximate(&f, n, eps).unwrap();
        let (lo, hi) = f.domain();
        let (a, b) = f.bounds;
        let bound = 0.5f64.powi(n as i32) * (1.0 + eps) * (b - a) * (hi - lo).sqrt();
        prop_assert!(g.n_breaks() <= 1 << n);
        prop_assert!(f.l2_distance(&g).unwrap() < bound);
        prop_assert!(g.is_non_decreasing());
        prop_assert_eq!(g.values[0], a);
        prop_assert_eq!(*g.values.last().unwrap(), b);
    }
}
