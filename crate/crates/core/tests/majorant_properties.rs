use num_rational::BigRational;
use proptest::prelude::*;

use noerlund::concave_majorant::*;
use noerlund::majorant_builder::*;
use noerlund::scalar::ratio;
use noerlund::seq_calculus::*;

fn rational_seq(max_len: usize) -> impl Strategy<Value = RatSeq> {
    prop::collection::vec((-40i64..40, 1i64..6), 2..max_len)
        .prop_map(|v| RatSeq::from_vec(v.into_iter().map(|(n, d)| ratio(n, d)).collect()).unwrap())
}

fn real_seq(max_len: usize) -> impl Strategy<Value = RealSeq> {
    prop::collection::vec(-100.0f64..100.0, 2..max_len).prop_map(|v| RealSeq::from_vec(v).unwrap())
}

/// Chords over the finite set of points; the oracle for everything else.
fn max_chord(b: &RatSeq, n: usize, from: &BigRational) -> Option<BigRational> {
    (n + 1..=b.horizon())
        .map(|k| (&b[k] - from) / ratio((k - n) as i64, 1))
        .max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recursion_matches_hull_exactly(b in rational_seq(512)) {
        let r = lcm_recursive(&b, None).unwrap();
        let o = lcm_hull_oracle(&b).unwrap();
        prop_assert_eq!(&r.c, &o.c);
        prop_assert_eq!(r.contact_indices, o.contact_indices);
    }

    #[test]
    fn recursion_matches_hull_in_floats(b in real_seq(512)) {
        let r = lcm_recursive(&b, None).unwrap().c;
        let o = lcm_hull_oracle(&b).unwrap().c;
        for n in 0..=b.horizon() {
            prop_assert!((r[n] - o[n]).abs() <= 1e-9 * r[n].abs().max(o[n].abs()).max(1.0));
        }
    }

    #[test]
    fn majorant_dominates_and_is_concave(b in rational_seq(200)) {
        let c = lcm_recursive(&b, None).unwrap().c;
        for n in 0..=b.horizon() {
            prop_assert!(c[n] >= b[n]);
        }
        prop_assert!(shape_check(&c).concave != Some(false));
    }

    #[test]
    fn majorant_is_least(b in rational_seq(120), bump in prop::collection::vec(0i64..10, 1..120), base in 0i64..5) {
        let c = lcm_recursive(&b, None).unwrap().c;
        let h = b.horizon();
        // nonnegative concave bump: base plus sorted nonincreasing increments, clipped at zero
        let mut steps: Vec<i64> = bump.iter().map(|v| v - 5).collect();
        steps.sort_by(|x, y| y.cmp(x));
        let mut g = vec![base];
        for i in 0..h {
            let next = g[i] + steps.get(i).copied().unwrap_or(*steps.last().unwrap());
            g.push(next);
        }
        let low = *g.iter().min().unwrap();
        let x = RatSeq::tabulate(h, |n| &c[n] + ratio(g[n] - low.min(0), 1));
        // fewer than three points are trivially concave
        prop_assert!(shape_check(&x).concave != Some(false));
        for n in 0..=h {
            prop_assert!(x[n] >= b[n]);
            prop_assert!(x[n] >= c[n]);
        }
    }

    #[test]
    fn chord_slopes_shrink_along_the_majorant(b in rational_seq(100)) {
        let c = lcm_recursive(&b, None).unwrap().c;
        let h = b.horizon();
        for n in 0..h {
            for k in n + 2..=h {
                let later = (&b[k] - &c[n + 1]) / ratio((k - n - 1) as i64, 1);
                let earlier = (&b[k] - &c[n]) / ratio((k - n) as i64, 1);
                prop_assert!(later <= earlier, "n={} k={}", n, k);
            }
        }
    }

    #[test]
    fn increments_dominate_later_chords(b in rational_seq(100)) {
        let c = lcm_recursive(&b, None).unwrap().c;
        for n in 0..b.horizon() {
            let step = &c[n + 1] - &c[n];
            let best = max_chord(&c, n, &c[n]).unwrap();
            prop_assert!(step >= best);
            prop_assert_eq!(step, max_chord(&b, n, &c[n]).unwrap());
        }
    }

    #[test]
    fn contact_structure_is_consistent(b in rational_seq(150)) {
        let r = lcm_recursive(&b, None).unwrap();
        let cs = contact_structure(&b, &r).unwrap();
        prop_assert_eq!(cs.nu[0], 0);
        prop_assert!(cs.nu.windows(2).all(|w| w[1] > w[0]));
        for &k in &cs.nu {
            prop_assert_eq!(&r.c[k], &b[k]);
        }
    }
}

fn unbounded_corpus() -> Vec<(String, RealSeq, usize)> {
    let h = 4096;
    let mut out: Vec<(String, RealSeq, usize)> = Vec::new();
    for (i, beta) in [0.3, 0.5, 0.7, 0.9].iter().enumerate() {
        out.push((format!("pow{i}"), RealSeq::tabulate(h, |n| (n as f64).powf(*beta)), 0));
        out.push((format!("pow{i}+1"), RealSeq::tabulate(h, |n| (n as f64).powf(1.0 + beta)), 1));
        out.push((format!("pow{i}+2"), RealSeq::tabulate(h, |n| (n as f64).powf(2.0 + beta)), 2));
    }
    out.push(("log".into(), RealSeq::tabulate(h, |n| ((n + 1) as f64).ln()), 0));
    out.push(("nlog".into(), RealSeq::tabulate(h, |n| n as f64 * ((n + 2) as f64).ln()), 1));
    out.push((
        "wiggly".into(),
        RealSeq::tabulate(h, |n| (n as f64).sqrt() * (1.0 + 0.3 * (n as f64).sin())),
        0,
    ));
    out
}

#[test]
fn built_majorants_dominate_and_have_the_right_ratio() {
    for (name, b, p) in unbounded_corpus() {
        let built = build_majorant(&b, p).unwrap();
        for n in 0..=b.horizon() {
            assert!(built.s[n] >= built.b[n] * (1.0 - 1e-12), "{name} n={n}");
        }
        let lo = 1.0 / (p as f64 + 1.0) - 1e-3;
        assert!(built.ratio_window >= lo && built.ratio_window <= 1.0 + 1e-9, "{name}: {}", built.ratio_window);
        assert!(!built.sandwich.applicable || built.sandwich.holds, "{name}");
        let h = h_index(&built.s, p as u32 + 2).unwrap();
        assert_eq!(h.value, HValue::Finite(p as u32 + 1), "{name}");
    }
}

#[test]
fn unbounded_inputs_never_have_summable_first_differences() {
    for (name, b, _) in unbounded_corpus() {
        assert!(!summable_empirically(&delta(&b), L1_TAIL_TOL), "{name}");
        assert!(lcm_recursive(&b, None).is_ok());
    }
}

#[test]
fn majorant_ratio_of_unbounded_sequences_tends_to_one() {
    let h = 10_000;
    let corpus = [
        RealSeq::tabulate(h, |n| (n as f64).sqrt()),
        RealSeq::tabulate(h, |n| ((n + 1) as f64).ln() * (1.0 + 0.5 * ((n % 7) as f64 / 7.0))),
        RealSeq::tabulate(h, |n| if n % 3 == 0 { n as f64 } else { 0.5 * n as f64 }),
    ];
    for b in corpus {
        let c = lcm_recursive(&b, None).unwrap().c;
        // the finite hull can only rise up to the last prefix maximum
        let top = b.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let last_max = (0..=h).rev().find(|&n| b[n] == top).unwrap();
        assert!(last_max + 8 >= h);
        assert!(c.values()[..=last_max].windows(2).all(|w| w[1] > w[0]));
        assert!(limsup_ratio(&b, &c).unwrap() >= 1.0 - 1e-3);
    }
}

#[test]
fn exact_pipeline_on_cubes() {
    let b = RatSeq::tabulate(64, |n| ratio(((n + 1) * (n + 1) * (n + 1)) as i64, 1));
    let built = build_majorant(&b, 2).unwrap();
    let dp = iterate(DiffOp::Delta, &built.s, 2);
    assert!(shape_check(&dp).is_concave());
    for n in 0..=64 {
        assert!(built.s[n] >= b[n]);
    }
}
