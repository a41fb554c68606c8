//! Triplet loss: hinge inactivity, encoder soundness and gradient checks.

use contralocal_core::triplet_loss::*;
use proptest::prelude::*;

fn qp(max_n: usize) -> impl Strategy<Value = QuadraticProgram> {
    (1..=max_n).prop_flat_map(|n| {
        (proptest::collection::vec(-5.0f64..5.0, n * n), proptest::collection::vec(-5.0f64..5.0, n)).prop_map(move |(m, b)| {
            let q = (0..n).map(|i| (0..n).map(|j| if i <= j { m[i * n + j] } else { m[j * n + i] }).collect()).collect();
            QuadraticProgram::new(q, b).unwrap()
        })
    })
}

fn central_difference(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    (0..p.len())
        .map(|i| {
            let (mut a, mut b) = (p.to_vec(), p.to_vec());
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

fn points(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.01f64..0.99, n), count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encoded_gradient_is_the_qp_gradient((q, xs) in qp(10).prop_flat_map(|q| { let n = q.n(); (Just(q), points(n, 20)) })) {
        let (t, _) = encode_qp(&q);
        let zero = vec![0.0; q.n()];
        let (l0, q0) = (loss(&t, &zero), q.value(&zero));
        for x in xs {
            let g = gradient(&t, &x);
            for (a, b) in g.iter().zip(q.gradient(&x)) {
                prop_assert!((a - b).abs() <= 1e-8, "{} vs {}", a, b);
            }
            prop_assert!(((loss(&t, &x) - l0) - (q.value(&x) - q0)).abs() <= 1e-8);
            let fd = central_difference(|p| loss(&t, p), &x, 1e-6);
            for (a, b) in g.iter().zip(fd) {
                prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "{} vs {}", a, b);
            }
            prop_assert!((kkt_residual_tripletloss(&t, &x) - kkt_residual_qp(&q, &x)).abs() <= 1e-10);
        }
    }

    #[test]
    fn hinges_stay_open_on_the_box((q, d, xs) in qp(6).prop_flat_map(|q| { let n = q.n(); (Just(q), 1usize..=3).prop_flat_map(move |(q, d)| (Just(q), Just(d), proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, n * d), 10))) })) {
        let (t, _) = encode_qp_highd(&q, d);
        for x in xs {
            prop_assert!(t.hinge_arguments(&x).iter().all(|h| *h >= 0.0));
        }
        // corners are the extreme case
        let corner: Vec<f64> = (0..q.n() * d).map(|i| (i % 2) as f64).collect();
        prop_assert!(t.hinge_arguments(&corner).iter().all(|h| *h >= 0.0));
    }

    #[test]
    fn dual_split_is_minimal(q in qp(10)) {
        let (_, w) = encode_qp(&q);
        prop_assert_eq!(w.pairs.len(), q.n() * (q.n() - 1) / 2 + 2 * q.n());
        for p in w.pairs {
            prop_assert!(p.w >= 0.0 && p.w_dual >= 0.0);
            prop_assert_eq!(p.w * p.w_dual, 0.0);
            prop_assert_eq!(p.w - p.w_dual, p.target);
        }
    }

    #[test]
    fn highd_gradient_is_the_lifted_qp_gradient((q, d, x) in qp(5).prop_flat_map(|q| { let n = q.n(); (Just(q), 2usize..=3).prop_flat_map(move |(q, d)| (Just(q), Just(d), proptest::collection::vec(0.01f64..0.99, n * d))) })) {
        let (t, _) = encode_qp_highd(&q, d);
        let lifted = q.block_lift(d);
        for (a, b) in gradient(&t, &x).iter().zip(lifted.gradient(&x)) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn linear_model_matches_direct_embedding((q, x) in qp(6).prop_flat_map(|q| { let n = q.n(); (Just(q), proptest::collection::vec(0.0f64..=1.0, n)) })) {
        let (t, _) = encode_qp(&q);
        let basis = standard_basis(q.n());
        prop_assert_eq!(linear_model_loss(&t, &x, &basis).unwrap(), loss(&t, &x));
        prop_assert_eq!(linear_model_gradient(&t, &x, &basis).unwrap(), gradient(&t, &x));
    }

    #[test]
    fn kkt_transfers_from_loss_to_qp(q in qp(6)) {
        let (t, _) = encode_qp(&q);
        let start = vec![0.5; q.n()];
        let run = projected_gradient_descent(&t, &start, q.default_step(), 1e-7, 200_000);
        let r_loss = kkt_residual_tripletloss(&t, &run.point);
        let r_qp = kkt_residual_qp(&q, &run.point);
        prop_assert!((r_loss - r_qp).abs() <= 1e-9);
        if run.converged {
            prop_assert!(r_qp <= 1e-6);
        }
    }
}

#[test]
fn psd_program_converges_and_decodes_in_two_dimensions() {
    let q = QuadraticProgram::new(vec![vec![2.0, 0.5, 0.0], vec![0.5, 1.0, -0.3], vec![0.0, -0.3, 1.5]], vec![-1.0, 0.4, -2.5]).unwrap();
    let (t, _) = encode_qp_highd(&q, 2);
    let run = projected_gradient_descent(&t, &[0.5; 6], q.default_step(), 1e-9, 100_000);
    assert!(run.converged);
    assert!(run.losses.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let x = decode_kkt_highd(&run.point, 3, 2);
    assert!(kkt_residual_qp(&q, &x) <= 1e-8);
}

#[test]
fn finite_difference_of_a_square() {
    let g = central_difference(|p| p[0] * p[0], &[0.5], 1e-6);
    assert!((g[0] - 1.0).abs() < 1e-6);
}

