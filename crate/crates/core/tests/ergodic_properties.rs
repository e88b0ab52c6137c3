use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use noerlund::ergodic_engine::ensemble::{generate_ensemble, EnsembleConfig, Stratum};
use noerlund::ergodic_engine::*;
use noerlund::operator_core::*;
use noerlund::scalar::ratio;
use noerlund::seq_calculus::*;

fn gaussian_rational_matrix(d: usize) -> impl Strategy<Value = SquareMatrix<Complex<BigRational>>> {
    prop::collection::vec((-6i64..6, -6i64..6, 1i64..5), d * d).prop_map(move |v| {
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let (re, im, den) = v[i * d + j];
                        Complex::new(ratio(re, den), ratio(im, den))
                    })
                    .collect()
            })
            .collect();
        SquareMatrix::from_rows(rows).unwrap()
    })
}

fn rational_weights(len: usize) -> impl Strategy<Value = RatSeq> {
    prop::collection::vec((-9i64..10, 1i64..7), len)
        .prop_map(|v| RatSeq::from_vec(v.into_iter().map(|(n, d)| ratio(n, d)).collect()).unwrap())
}

/// Means by the defining double sum, recomputing every power from scratch.
fn direct_means(t: &Operator, s: &RealSeq, horizon: usize) -> Vec<CMatrix> {
    let d = t.dim();
    (0..=horizon)
        .map(|n| {
            let mut acc = CMatrix::zeros(d, d);
            for k in 0..=n {
                let w = s[n - k] - if n > k { s[n - k - 1] } else { 0.0 };
                let mut power = CMatrix::identity(d, d);
                for _ in 0..k {
                    power = &power * t.entries();
                }
                acc += power * Complex64::new(w / s[n], 0.0);
            }
            acc
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn summation_by_parts_is_exact(tau in gaussian_rational_matrix(3), a in rational_weights(20), m in 1usize..=4, n in 0usize..=12) {
        let c = summation_by_parts_check(&tau, &a, m, n).unwrap();
        prop_assert!(c.residual.is_zero());
    }

    #[test]
    fn summation_by_parts_in_floats(v in prop::collection::vec(-1.0f64..1.0, 9), w in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rows: Vec<&[f64]> = v.chunks(3).collect();
        let t = Operator::from_real_rows(&rows).unwrap();
        let a = RealSeq::from_vec(w).unwrap();
        let c = summation_by_parts_check(&SquareMatrix::from_operator(&t), &a, 4, 8).unwrap();
        prop_assert!(c.residual <= 1e-9 * c.scale.max(1.0));
    }

    #[test]
    fn weights_sum_to_the_normaliser(v in prop::collection::vec((0i64..20, 1i64..5), 1..80)) {
        // nondecreasing positive s via positive increments
        let mut s = vec![ratio(1, 1)];
        for (n, d) in v {
            let next = s.last().unwrap() + ratio(n, d);
            s.push(next);
        }
        let s = RatSeq::from_vec(s).unwrap();
        let a = delta(&s);
        for n in 0..=s.horizon() {
            let total: BigRational = (0..=n).map(|k| a[n - k].clone()).sum();
            prop_assert_eq!(&total, &s[n]);
        }
    }

    #[test]
    fn fixed_points_are_preserved(alpha in 0.1f64..3.0, x in prop::collection::vec(-1.0f64..1.0, 2)) {
        // T fixes e1 + e2 and scales e1 - e2 by -0.3
        let t = Operator::from_real_rows(&[&[0.35, 0.65], &[0.65, 0.35]]).unwrap();
        let fixed = nalgebra::DVector::from_vec(vec![Complex64::new(x[0], x[1]); 2]);
        for m in cesaro_means(&t, alpha, 40).unwrap() {
            prop_assert!((m.entries() * &fixed - &fixed).norm() < 1e-12);
        }
    }
}

#[test]
fn base_case_telescopes() {
    let a = RatSeq::tabulate(30, |n| ratio((n * n) as i64 + 1, n as i64 + 2));
    let c = summation_by_parts_exact(&[&[2, -1, 0], &[1, 1, 3], &[0, 0, -2]], &a, 1, 20).unwrap();
    assert!(c.residual.is_zero());
}

#[test]
fn cesaro_and_noerlund_agree_with_double_sum() {
    let t = Operator::from_real_rows(&[&[0.4, -0.7, 0.1], &[0.2, 0.5, -0.3], &[-0.6, 0.1, 0.8]]).unwrap();
    for alpha in [0.5, 1.0, 2.0] {
        let a = cesaro_numbers(alpha, 50).values;
        let ces = cesaro_means(&t, alpha, 50).unwrap();
        let nor = noerlund_means(&t, &a, 50).unwrap();
        let direct = direct_means(&t, &a, 50);
        for n in 0..=50 {
            assert_eq!(ces[n].entries(), nor[n].entries());
            assert!(NormKind::InducedSup.of(&(ces[n].entries() - &direct[n])) <= 1e-10);
        }
    }
}

#[test]
fn diagonal_example_converges_to_its_projection() {
    let c = |x: f64| Complex64::new(x, 0.0);
    let t = Operator::diagonal(&[c(1.0), c(0.3), c(-0.5)]);
    let r = convergence_report(&t, &cesaro_numbers(1.0, 500).values, 500).unwrap();
    assert_eq!(r.status, Status::Converged, "{:?}", r.reasons);
    let p = Operator::diagonal(&[c(1.0), c(0.0), c(0.0)]);
    assert!(r.projection.unwrap().distance(&p) < 1e-12);
    assert!(r.limit_estimate.unwrap().distance(&p) < 1e-9);
}

#[test]
fn jordan_block_with_linear_weights_diverges() {
    let t = Operator::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
    let s = RealSeq::tabulate(500, |n| (n + 1) as f64);
    let r = convergence_report(&t, &s, 500).unwrap();
    assert_eq!(r.status, Status::Diverged);
    let m = noerlund_means(&t, &s, 500).unwrap();
    assert!((m[500].entries()[(0, 1)].re - 250.0).abs() < 1e-9);
}

fn growing_counterexample_weights(horizon: usize) -> RealSeq {
    let a = RatSeq::tabulate(horizon, |n| match n {
        0 => ratio(1, 1),
        1 => ratio(5, 2),
        _ => ratio(1, n as i64 - 1) + ratio(2, n as i64) + ratio(1, n as i64 + 1),
    });
    sigma(&a).to_real()
}

#[test]
fn non_power_bounded_example_converges_to_zero() {
    let horizon = 4096;
    let s = growing_counterexample_weights(horizon);
    let r = convergence_report(&negated_jordan_block(), &s, horizon).unwrap();
    assert_eq!(r.verdict, Verdict::ResolventPoint);
    assert_eq!(r.status, Status::Converged, "{:?}", r.reasons);
    assert!(r.limit_error.unwrap() < 1e-6);
    let n = horizon as f64;
    assert!(r.norm_ratio_tail >= (n / 2.0 + 1.0) / (7.5 + 4.0 * (n - 1.0).ln()));
}

#[test]
fn single_stratum_ensembles() {
    let a1 = cesaro_numbers(1.0, 512).values;
    let jordan = EnsembleConfig { members: 6, strata: vec![Stratum::JordanAtOne], ..Default::default() };
    for m in generate_ensemble(&jordan).unwrap() {
        assert_eq!(convergence_report(&m.operator, &a1, 512).unwrap().status, Status::Diverged);
    }
    let resolvent = EnsembleConfig {
        members: 6,
        circle_probability: 0.0,
        strata: vec![Stratum::ResolventSet],
        ..Default::default()
    };
    for m in generate_ensemble(&resolvent).unwrap() {
        let r = convergence_report(&m.operator, &a1, 512).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.limit_estimate.unwrap().norm() < 1e-6);
    }
}
