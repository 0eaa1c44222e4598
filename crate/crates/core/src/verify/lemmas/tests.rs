use super::*;
use crate::objectives::{scalar_quadratic, ObjectiveSpec};
use crate::rng::{gaussian_vec, seeded};
use crate::schedule::{anytime_prefix, silver};

fn silver_threshold(order: u32) -> f64 {
    let rho: f64 = 1.0 + 2f64.sqrt();
    (2f64.sqrt() - 1.0) * (rho.powi(order as i32) - 1.0) + 2f64.sqrt()
}

#[test]
fn empty_schedule_is_tight() {
    let q = scalar_quadratic(0.7, 0.0, 1.0).unwrap();
    let r = check_primitive_run(&q, vec![2.0], &FiniteSchedule::empty()).unwrap();
    assert!(r.pass);
    assert_eq!(r.slacks, vec![0.0, 0.0]);
}

#[test]
fn silver_and_anytime_are_primitive() {
    let mut rng = seeded(3);
    for seed in 0..6 {
        let family = if seed % 2 == 0 { "quadratic" } else { "log_sum_exp" };
        let obj = ObjectiveSpec::preset(family, 3, seed).unwrap().build::<f64>().unwrap();
        let x1: Vec<f64> = gaussian_vec(&mut rng, 3);
        for order in 1..=8 {
            let r = check_primitive_run(&*obj, x1.clone(), &silver(order).unwrap()).unwrap();
            assert!(r.pass, "{family} order {order}: {r:?}");
        }
        let params = AnytimeParams::default();
        for t in params.checkpoint_lengths(100) {
            let p = anytime_prefix(t as usize, params).unwrap();
            let r = check_primitive_run(&*obj, x1.clone(), &p).unwrap();
            assert!(r.pass, "{family} t={t}: {r:?}");
        }
    }
}

#[test]
fn long_single_step_is_not_primitive() {
    let q = scalar_quadratic(1.0, 0.0, 1.0).unwrap();
    let r = check_primitive_run(&q, vec![1.0], &FiniteSchedule::custom(vec![3.0]).unwrap()).unwrap();
    assert!(!r.pass);
    // lhs = 3*2 + 6*4 + 2 = 32 against 1/2
    assert!((r.aux("lhs").unwrap() - 32.0).abs() < 1e-12);
}

#[test]
fn primitive_needs_minimizer() {
    let obj = crate::objectives::LogSumExp::new(
        crate::objectives::linalg::Matrix::from_rows(2, 1, vec![1.0, -1.0]).unwrap(),
        vec![0.0, 0.3],
        1.0,
    )
    .unwrap();
    assert!(check_primitive_run(&obj, vec![1.0], &silver(2).unwrap()).is_err());
}

/// Scalar closed form of the key inequality, evaluated without the engine.
#[test]
fn key_matches_scalar_closed_form() {
    let (lambda, x0, a0) = (0.37f64, 1.9f64, 2.5f64);
    let s = silver::<f64>(3).unwrap();
    let q = scalar_quadratic(lambda, 0.0, 1.0).unwrap();
    let run = LemmaRun::new(&q, &[x0], a0, &s).unwrap();
    let r = check_lemma_key(&run).unwrap();

    let g = |x: f64| lambda * x;
    let f = |x: f64| 0.5 * lambda * x * x;
    let mut xs = vec![x0 - a0 * g(x0)];
    for &a in s.values() {
        let x = *xs.last().unwrap();
        xs.push(x - a * g(x));
    }
    let big_a: f64 = s.values().iter().sum();
    let c = big_a * (big_a + 1.0) / 2.0;
    let xk = *xs.last().unwrap();
    let lhs = big_a * (f(xk) - f(x0)) + 0.5 * (xk - x0).powi(2) + c * g(xk).powi(2);
    let inner: f64 = s.values().iter().zip(&xs).map(|(a, &x)| a * g(x) * g(x0)).sum();
    let rhs = 0.5 * (xs[0] - x0).powi(2) + inner - 0.5 * big_a * g(x0).powi(2);
    let scale = (xs[0] - x0).powi(2) + g(x0).powi(2);
    assert!((r.slacks[0] - (rhs - lhs) / scale).abs() < 1e-10);
    assert!(r.pass);
}

#[test]
fn key_family_at_minimizer_and_random() {
    let mut rng = seeded(8);
    for seed in 0..6 {
        let obj = ObjectiveSpec::preset("quadratic", 4, seed).unwrap().build::<f64>().unwrap();
        let s = silver(6).unwrap();
        let x0 = vec![0.0; 4];
        let r = check_lemma_key(&LemmaRun::new(&*obj, &x0, silver_threshold(6), &s).unwrap()).unwrap();
        assert!(r.pass);
        let x0: Vec<f64> = gaussian_vec(&mut rng, 4);
        let run = LemmaRun::new(&*obj, &x0, silver_threshold(6), &s).unwrap();
        let r = check_lemma_key(&run).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_lemma_key3(&run).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn key3_stationary_and_scalar() {
    let q = scalar_quadratic(1.0, 0.5, 1.0).unwrap();
    let s = silver::<f64>(4).unwrap();
    let run = LemmaRun::new(&q, &[0.5], 3.0, &s).unwrap();
    let r = check_lemma_key3(&run).unwrap();
    assert_eq!(r.aux("gradient_slack"), Some(0.0));
    assert_eq!(r.aux("value_slack"), Some(0.0));
    assert!(check_lemma_key3(&LemmaRun::new(&q, &[0.5], 3.0, &FiniteSchedule::empty()).unwrap()).is_err());

    // scalar closed form: lambda = 1/4 from x0 = 1
    let (lambda, a0) = (0.25f64, silver_threshold(2));
    let s = silver::<f64>(2).unwrap();
    let q = scalar_quadratic(lambda, 0.0, 1.0).unwrap();
    let run = LemmaRun::new(&q, &[1.0], a0, &s).unwrap();
    let r = check_lemma_key3(&run).unwrap();
    let mut x = 1.0 - a0 * lambda;
    for a in s.values() {
        x -= a * lambda * x;
    }
    let big_a: f64 = s.values().iter().sum();
    let c = big_a * (big_a + 1.0) / 2.0;
    let g0 = lambda * lambda;
    let we1 = (0.5 * a0 * a0 + 0.5 * (big_a + 1.0).powi(2) - a0 - 0.5 * big_a) * g0 - c * (lambda * x).powi(2);
    assert!((r.aux("gradient_slack").unwrap() - we1).abs() < 1e-12);
    assert!(r.pass);
}

#[test]
fn key2_domain_and_cap() {
    let q = scalar_quadratic(0.6, 0.0, 1.0).unwrap();
    let s = silver::<f64>(3).unwrap();
    let a = s.aggregate();
    assert!(check_lemma_key2(&q, &[1.0], 0.5, &s).is_err());
    assert!(check_lemma_key2(&q, &[1.0], a + 2.0, &s).is_err());
    let r = check_lemma_key2(&q, &[1.0], a + 2.0 - 1e-9, &s).unwrap();
    assert_eq!(r.aux("alpha_capped"), Some(1.0));
    let r = check_lemma_key2(&q, &[1.0], 1.0, &s).unwrap();
    assert!(r.pass, "{r:?}");
    let r = check_lemma_key2(&q, &[0.0], 1.0, &s).unwrap();
    assert_eq!(r.slacks, vec![0.0]);
}

#[test]
fn refine1_bounds() {
    let q = scalar_quadratic(1.0, 0.0, 1.0).unwrap();
    let s = silver::<f64>(5).unwrap();
    assert!(check_refine1(&q, &[1.0], &s, 1.0).is_err());
    assert!(check_refine1(&q, &[1.0], &FiniteSchedule::custom(vec![2.0]).unwrap(), 100.0).is_err());
    let alpha = silver_threshold(5);
    let r = check_refine1(&q, &[1.0], &s, alpha).unwrap();
    assert!(r.pass);
    assert!(r.aux("worst_ratio").unwrap() <= 432.0);
    let r = check_refine1(&q, &[0.0], &s, alpha).unwrap();
    assert!(r.slacks.iter().all(|&v| v == 0.0));
}

#[test]
fn checkpoint_rates() {
    let obj = ObjectiveSpec::preset("quadratic", 5, 2).unwrap().build::<f64>().unwrap();
    let r = check_checkpoint_rates(AnytimeParams::default(), &*obj, vec![0.0; 5], 300).unwrap();
    assert!(r.pass);
    let r = check_checkpoint_rates(AnytimeParams::default(), &*obj, vec![1.0, -2.0, 0.5, 3.0, 1.0], 2000).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.aux("checkpoints").unwrap() > 20.0);
}
