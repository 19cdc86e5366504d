use divergence_lab::divergence::catalog;
use divergence_lab::fitting::{fit_bregman_binary, pav};
use divergence_lab::simplex::{push_forward, Channel, Distribution};
use divergence_lab::{Divergence, DivergenceSpec, Generator, ScalarFunction};
use proptest::prelude::*;

/// Interior distribution on `n` symbols from positive weights.
fn distribution(n: usize) -> impl Strategy<Value = Distribution<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let total: f64 = w.iter().sum();
        Distribution::new(w.iter().map(|x| x / total).collect()).unwrap()
    })
}

fn channel(n: usize, m: usize) -> impl Strategy<Value = Channel<f64>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, m), n).prop_map(|rows| {
        let rows = rows
            .into_iter()
            .map(|r| {
                let r: Vec<f64> = r.iter().map(|x| x + 1e-3).collect();
                let total: f64 = r.iter().sum();
                r.iter().map(|x| x / total).collect()
            })
            .collect();
        Channel::new(rows).unwrap()
    })
}

fn pair(n: usize) -> impl Strategy<Value = (Distribution<f64>, Distribution<f64>)> {
    (distribution(n), distribution(n))
}

const F_DIVERGENCES: [&str; 4] = ["kl", "tv", "hellinger", "chi2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn push_forward_respects_composition(p in distribution(4), a in channel(4, 4), b in channel(4, 4)) {
        let step = push_forward(&push_forward(&p, &a).unwrap(), &b).unwrap();
        let direct = push_forward(&p, &a.compose(&b).unwrap()).unwrap();
        for (x, y) in step.probs().iter().zip(direct.probs()) {
            prop_assert!((x - y).abs() <= 1e-14);
        }
        prop_assert!((step.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn divergences_are_permutation_invariant((p, q) in pair(5), seed in 0u64..1000) {
        let mut perm: Vec<usize> = (0..5).collect();
        perm.rotate_left((seed % 5) as usize);
        perm.swap(0, (seed / 5 % 5) as usize);
        let w = Channel::permutation(&perm).unwrap();
        let (pp, qq) = (push_forward(&p, &w).unwrap(), push_forward(&q, &w).unwrap());
        for name in ["kl", "tv", "hellinger", "chi2", "euclidean", "tv_squared"] {
            let d = catalog(name).unwrap();
            let (a, b) = (d.evaluate(&p, &q).unwrap(), d.evaluate(&pp, &qq).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn catalog_divergences_are_nonnegative((p, q) in pair(4)) {
        for name in ["kl", "tv", "hellinger", "chi2", "euclidean", "tv_squared"] {
            let d = catalog(name).unwrap();
            prop_assert!(d.evaluate(&p, &q).unwrap() >= -1e-15, "{name}");
            prop_assert!(d.evaluate(&p, &p).unwrap().abs() <= 1e-15, "{name}");
        }
    }

    #[test]
    fn f_divergences_satisfy_data_processing((p, q) in pair(4), w in channel(4, 4)) {
        let (pw, qw) = (push_forward(&p, &w).unwrap(), push_forward(&q, &w).unwrap());
        for name in F_DIVERGENCES {
            let d = catalog(name).unwrap();
            let (before, after) = (d.evaluate(&p, &q).unwrap(), d.evaluate(&pw, &qw).unwrap());
            prop_assert!(after <= before + 1e-9 + 1e-7 * before, "{name}: {after} > {before}");
        }
    }

    #[test]
    fn bregman_is_blind_to_affine_terms((p, q) in pair(3), a in -5.0f64..5.0, b in prop::collection::vec(-5.0f64..5.0, 3)) {
        let base = DivergenceSpec::bregman("base", Generator::negative_entropy()).unwrap();
        let shifted = DivergenceSpec::bregman(
            "shifted",
            Generator::Affine { base: Box::new(Generator::negative_entropy()), linear: b, constant: a },
        )
        .unwrap();
        let (x, y) = (base.evaluate(&p, &q).unwrap(), shifted.evaluate(&p, &q).unwrap());
        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn pav_is_the_monotone_projection(y in prop::collection::vec(-10.0f64..10.0, 1..40), z in prop::collection::vec(-10.0f64..10.0, 40)) {
        let x = pav(&y);
        prop_assert!(x.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(pav(&x), x.clone());
        // Variational inequality against an arbitrary monotone competitor.
        let mut z = z[..y.len()].to_vec();
        z.sort_by(f64::total_cmp);
        let inner: f64 = y.iter().zip(&x).zip(&z).map(|((yi, xi), zi)| (yi - xi) * (zi - xi)).sum();
        prop_assert!(inner <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bregman_fit_ignores_affine_generator_terms(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..3.0) {
        let g2 = ScalarFunction::Polynomial(vec![0.0, 0.0, c]).symmetrized();
        let with_affine = ScalarFunction::Combination(vec![(1.0, g2.clone()), (1.0, ScalarFunction::Polynomial(vec![a, b]))]);
        let plain = DivergenceSpec::bregman("plain", Generator::Binary(g2)).unwrap();
        let shifted = DivergenceSpec::bregman("shifted", Generator::Binary(with_affine)).unwrap();
        let x = fit_bregman_binary(&plain, 200, 12, 5).unwrap();
        let y = fit_bregman_binary(&shifted, 200, 12, 5).unwrap();
        prop_assert!((x.residual - y.residual).abs() <= 1e-9 * (1.0 + x.target_rms));
        prop_assert!((x.target_rms - y.target_rms).abs() <= 1e-12 * (1.0 + x.target_rms));
    }

    #[test]
    fn f_fit_is_convex_with_zero_at_one(name in prop::sample::select(vec!["kl", "tv", "hellinger", "chi2", "tv_squared", "brier"])) {
        let fit = divergence_lab::fitting::fit_f_divergence(&catalog(name).unwrap(), 300, 24, 9).unwrap();
        prop_assert!(fit.min_second_difference() >= -1e-10);
        let one = fit.knots.iter().position(|&x| x == 1.0).unwrap();
        prop_assert_eq!(fit.values[one], 0.0);
        prop_assert!(fit.objective.windows(2).all(|w| w[1] <= w[0]));
    }
}
