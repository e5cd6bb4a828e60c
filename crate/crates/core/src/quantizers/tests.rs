use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::constructions::{dyadic_frame, kashin_frame, two_onb_union, KashinFrame};
use crate::error::Error;
use crate::frame_core::{Frame, NormSpec};
use crate::norm::{l2, LpNorm};
use crate::rng;

#[test]
fn round_coeffs_examples() {
    assert_eq!(round_coeffs(&[0.24, -0.26], 0.5).unwrap(), vec![0, -1]);
    assert_eq!(round_coeffs(&[0.25], 0.5).unwrap(), vec![1]);
    assert_eq!(round_coeffs(&[-0.25], 0.5).unwrap(), vec![-1]);
    assert_eq!(round_coeffs(&[1.5, -3.0, 0.0], 0.5).unwrap(), vec![3, -6, 0]);
    assert!(round_coeffs(&[1.0], 0.0).is_err());
}

#[test]
fn sigma_delta_constant_one() {
    let out = sigma_delta(&[1.0; 6]).unwrap();
    assert!(out.bits.iter().all(|&q| q == 1));
    assert!(out.u.iter().all(|&u| u == 0.0));
}

#[test]
fn sigma_delta_zero_input_alternates() {
    let out = sigma_delta(&[0.0; 6]).unwrap();
    assert_eq!(out.bits, vec![1, -1, 1, -1, 1, -1]);
    assert_eq!(out.u, vec![-1.0, 0.0, -1.0, 0.0, -1.0, 0.0]);
    assert_eq!(out.state.step, 6);
}

#[test]
fn sigma_delta_rejects_large_input() {
    assert!(sigma_delta(&[0.5, 1.01]).is_err());
    assert!(sigma_delta(&[f64::NAN]).is_err());
}

#[test]
fn signed_digits_example() {
    assert_eq!(signed_dyadic_digits(0.625, 3), vec![1, 0, 1]);
    assert_eq!(signed_dyadic_digits(-0.625, 3), vec![-1, 0, -1]);
    assert_eq!(signed_dyadic_digits(0.0, 4), vec![0, 0, 0, 0]);
}

fn digits_value(d: &[i64]) -> f64 {
    d.iter().enumerate().map(|(j, &v)| v as f64 * 0.5f64.powi(j as i32 + 1)).sum()
}

/// Exhaustive minimum of `|s - Σ σ_j 2^-j|` over `σ ∈ {-1,0,1}^m`.
fn exhaustive_residual(s: f64, m: usize) -> f64 {
    let mut best = f64::INFINITY;
    let total = 3usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = 0.0;
        for j in 1..=m {
            v += ((c % 3) as f64 - 1.0) * 0.5f64.powi(j as i32);
            c /= 3;
        }
        best = best.min((s - v).abs());
    }
    best
}

#[test]
fn signed_digits_match_exhaustive_search() {
    let mut r = rng::seeded(1);
    for m in 1..=7 {
        let bound = 1.0 - 0.5f64.powi(m as i32);
        for _ in 0..60 {
            let s = rng::cube_point(&mut r, 1)[0] * bound;
            let d = signed_dyadic_digits(s, m);
            let res = (s - digits_value(&d)).abs();
            assert!((res - exhaustive_residual(s, m)).abs() <= 1e-15, "s={s} m={m}");
            assert!(res <= 0.5f64.powi(m as i32 + 1) + 1e-15);
        }
    }
}

fn onb(n: usize) -> Frame {
    Frame::orthonormal_basis(n, LpNorm::L2).unwrap()
}

#[test]
fn dyadic_quantize_zero() {
    let d = dyadic_frame(&onb(4), 3).unwrap();
    let q = dyadic_quantize(&d, &vec![0.0; d.len()]).unwrap();
    assert!(q.k.iter().all(|&v| v == 0));
    assert_eq!(q.error, 0.0);
}

#[test]
fn dyadic_quantize_bound_on_random_inputs() {
    let (n, m) = (8, 7);
    let d = dyadic_frame(&onb(n), m).unwrap();
    let bound = 1.0 + n as f64 * 0.5f64.powi(m as i32) / (1.0 - 0.5f64.powi(m as i32));
    let mut r = rng::seeded(2);
    for _ in 0..1000 {
        let a = rng::cube_point(&mut r, d.len());
        let q = dyadic_quantize(&d, &a).unwrap();
        assert!(q.error <= bound, "{}", q.error);
        assert!(q.k.iter().all(|v| v.abs() <= 3));
        assert!(q.verify(&d.frame, &d.frame.synthesis(&a).unwrap()).unwrap());
    }
}

#[test]
fn dyadic_quantize_extreme_inputs() {
    let d = dyadic_frame(&onb(3), 4).unwrap();
    let bound = 1.0 + 3.0 * 0.5f64.powi(4) / (1.0 - 0.5f64.powi(4));
    for fill in [1.0, -1.0] {
        let q = dyadic_quantize(&d, &vec![fill; d.len()]).unwrap();
        assert!(q.error <= bound);
        assert!(q.k.iter().all(|v| v.abs() <= 3));
    }
    let mut alt = vec![1.0; d.len()];
    alt.iter_mut().step_by(2).for_each(|v| *v = -1.0);
    assert!(dyadic_quantize(&d, &alt).unwrap().error <= bound);
    assert!(dyadic_quantize(&d, &vec![1.5; d.len()]).is_err());
}

fn small_kashin() -> KashinFrame {
    kashin_frame(2, 4, 5, 32).unwrap()
}

#[test]
fn kashin_represent_zero() {
    let kf = small_kashin();
    let rep = kashin_represent(&kf, &[0.0, 0.0], KASHIN_MAX_ITER, kf.k_hat).unwrap();
    assert!(rep.a.iter().all(|&v| v == 0.0));
}

fn check_representation(kf: &KashinFrame, x: &[f64], rep: &KashinRepresentation) {
    let a = DVector::from_column_slice(&rep.a);
    let y = &kf.u * a * (rep.level / (kf.big_n as f64).sqrt());
    for (p, q) in y.iter().zip(x) {
        assert!((p - q).abs() <= 1e-9);
    }
    assert!(rep.a.iter().all(|v| v.abs() <= 1.0 + 1e-9));
}

#[test]
fn kashin_representation_is_exact() {
    let kf = kashin_frame(16, 48, 3, 16).unwrap();
    let mut r = rng::seeded(4);
    for _ in 0..100 {
        let x = rng::sphere_point(&mut r, 16, LpNorm::L2);
        let rep = kashin_represent(&kf, &x, KASHIN_MAX_ITER, kf.k_hat).unwrap();
        check_representation(&kf, &x, &rep);
    }
}

#[test]
fn kashin_represent_escalates_from_a_low_level() {
    let kf = kashin_frame(4, 12, 6, 8).unwrap();
    let x = [1.0, 0.0, 0.0, 0.0];
    let rep = kashin_represent(&kf, &x, KASHIN_MAX_ITER, 0.5).unwrap();
    assert!(rep.escalations >= 1);
    assert!(rep.level >= 1.0);
    check_representation(&kf, &x, &rep);
    assert!(kashin_represent(&kf, &[2.0, 0.0, 0.0, 0.0], KASHIN_MAX_ITER, 1.0).is_err());
}

/// Orthonormal basis of the null space of `u` (rows orthonormal).
fn null_basis(u: &DMatrix<f64>, seed: u64) -> DMatrix<f64> {
    let big_n = u.ncols();
    let k = big_n - u.nrows();
    let mut r = rng::seeded(seed);
    let g = DMatrix::from_iterator(big_n, k, rng::gaussian_vec(&mut r, big_n * k));
    let p = DMatrix::<f64>::identity(big_n, big_n) - u.transpose() * u;
    (p * g).qr().q()
}

/// `√N · min ‖b0 + P w‖_∞` by a grid over `w`, refined three times around
/// the incumbent.
fn grid_oracle(u: &DMatrix<f64>, x: &[f64]) -> f64 {
    let b0 = u.transpose() * DVector::from_column_slice(x);
    let p = null_basis(u, 99);
    let eval = |w0: f64, w1: f64| (&b0 + p.column(0) * w0 + p.column(1) * w1).amax();
    let (mut c0, mut c1, mut half) = (0.0, 0.0, 2.0);
    let steps = 200;
    for _ in 0..4 {
        let mut best = (f64::INFINITY, c0, c1);
        for i in 0..=steps {
            for j in 0..=steps {
                let w0 = c0 - half + 2.0 * half * i as f64 / steps as f64;
                let w1 = c1 - half + 2.0 * half * j as f64 / steps as f64;
                let v = eval(w0, w1);
                if v < best.0 {
                    best = (v, w0, w1);
                }
            }
        }
        c0 = best.1;
        c1 = best.2;
        half *= 0.05;
    }
    (u.ncols() as f64).sqrt() * eval(c0, c1)
}

#[test]
fn kashin_min_level_matches_grid_oracle() {
    let kf = small_kashin();
    let mut r = rng::seeded(7);
    for _ in 0..10 {
        let x = rng::sphere_point(&mut r, 2, LpNorm::L2);
        let found = kashin_min_level(&kf, &x, KASHIN_MAX_ITER).unwrap();
        let oracle = grid_oracle(&kf.u, &x);
        assert!((found.level - oracle).abs() <= 0.05 * oracle, "{} vs {}", found.level, oracle);
        check_representation(&kf, &x, &found);
    }
}

#[test]
fn k_hat_bounds_sampled_levels() {
    let kf = kashin_frame(8, 24, 8, 32).unwrap();
    let mut r = rng::seeded(9);
    for _ in 0..50 {
        let x = rng::sphere_point(&mut r, 8, LpNorm::L2);
        let lvl = kashin_min_level(&kf, &x, KASHIN_MAX_ITER).unwrap().level;
        assert!(lvl <= kf.k_hat * 1.001, "{lvl} > {}", kf.k_hat);
    }
}

#[test]
fn kashin_quantize_contract() {
    let kf = kashin_frame(16, 48, 10, 16).unwrap();
    let delta = 0.05;
    let qf = kf.quantization_frame();
    let mut r = rng::seeded(11);
    for _ in 0..100 {
        let x = rng::sphere_point(&mut r, 16, LpNorm::L2);
        let q = kashin_quantize(&kf, &x, delta).unwrap();
        assert!(q.error <= delta / 2.0 + 1e-9, "{}", q.error);
        assert!(q.coeff_bound <= kf.k_hat + delta / 2.0 + 1e-12);
        assert!(q.verify(&qf, &x).unwrap());
    }
    let z = kashin_quantize(&kf, &[0.0; 16], delta).unwrap();
    assert!(z.k.iter().all(|&v| v == 0));
    assert_eq!(z.error, 0.0);
}

fn iterative_setup() -> (Frame, NormSpec, DualRounding, IterativeQuantizerConfig) {
    let frame = two_onb_union(4, &[0.1, 0.2]).unwrap().frame;
    let z = NormSpec::ZIntervalMax(Arc::new(frame.clone()));
    let base = DualRounding { frame: frame.clone(), delta: 0.25 };
    let cfg = IterativeQuantizerConfig::new(0.25, 1.5, 0.5).unwrap();
    (frame, z, base, cfg)
}

#[test]
fn iterative_config_for_half() {
    let c = IterativeQuantizerConfig::new(0.25, 2.0, 0.5).unwrap();
    assert_eq!(c.n1, 2);
    assert_eq!(c.q1, 0.75);
    assert_eq!(c.delta1, 0.125);
    assert_eq!(c.c1, 16.0);
    let c = IterativeQuantizerConfig::new(1.0, 1.0, 0.8).unwrap();
    assert_eq!(c.n1, 5);
    assert!((c.q1 - 0.96).abs() < 1e-15);
    assert!(IterativeQuantizerConfig::new(1.0, 1.0, 1.0).is_err());
}

#[test]
fn iterative_base_validates() {
    let (frame, z, base, cfg) = iterative_setup();
    let rep = validate_base(&base, &frame, &z, cfg.c0, cfg.q0, 100, 12).unwrap();
    assert!(rep.max_error <= 0.5 && rep.max_z <= 1.5);
}

#[test]
fn iterative_small_input_uses_one_call() {
    let (frame, z, base, cfg) = iterative_setup();
    let x = [0.6, -0.3, 0.2, 0.1];
    let q = iterative_quantize(&base, cfg, &frame, &z, &x).unwrap();
    assert_eq!(q.params["stages"], 1);
    assert!(q.error <= 1.0);
    assert!(q.z_norm_value.unwrap() <= cfg.c1 * l2(&x));
    let tiny = iterative_quantize(&base, cfg, &frame, &z, &[0.01, 0.0, 0.0, 0.0]).unwrap();
    assert!(tiny.k.iter().all(|&v| v == 0));
}

#[test]
fn iterative_large_input() {
    let (frame, z, base, cfg) = iterative_setup();
    let mut r = rng::seeded(13);
    let x: Vec<f64> = rng::sphere_point(&mut r, 4, LpNorm::L2).iter().map(|v| v * 1e3).collect();
    let q = iterative_quantize(&base, cfg, &frame, &z, &x).unwrap();
    assert!(q.error <= 1.0, "{}", q.error);
    assert!(q.z_norm_value.unwrap() <= cfg.c1 * 1e3);
    assert!(q.verify(&frame, &x).unwrap());
    assert_eq!(q.delta, cfg.delta1);
}

struct Lazy;

impl BaseQuantizer for Lazy {
    fn delta(&self) -> f64 {
        0.25
    }
    fn quantize(&self, x: &[f64]) -> crate::Result<Vec<i64>> {
        Ok(vec![0; 2 * x.len()])
    }
}

#[test]
fn iterative_reports_contract_violation() {
    let (frame, z, _, cfg) = iterative_setup();
    let err = iterative_quantize(&Lazy, cfg, &frame, &z, &[5.0, 0.0, 0.0, 0.0]).unwrap_err();
    assert!(matches!(err, Error::ContractViolation(_)));
    assert!(validate_base(&Lazy, &frame, &z, cfg.c0, cfg.q0, 10, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_delta_state_bounded(y in prop::collection::vec(-1.0f64..=1.0, 1..400)) {
        let out = sigma_delta(&y).unwrap();
        let mut partial = 0.0;
        for (t, (&v, &q)) in y.iter().zip(&out.bits).enumerate() {
            prop_assert!(out.u[t].abs() <= 1.0);
            partial += v - q as f64;
            prop_assert!((partial - out.u[t]).abs() <= 1e-9);
        }
    }

    #[test]
    fn rounding_error_is_half_step(a in prop::collection::vec(-50.0f64..50.0, 1..20), delta in 0.01f64..2.0) {
        let k = round_coeffs(&a, delta).unwrap();
        for (x, kv) in a.iter().zip(&k) {
            prop_assert!((x - delta * *kv as f64).abs() <= delta / 2.0 + 1e-12);
        }
    }

    #[test]
    fn iterative_contract_is_homogeneous(seed in 0u64..1000, scale in 1.0f64..500.0) {
        let (frame, z, base, cfg) = iterative_setup();
        let mut r = rng::seeded(seed);
        let u = rng::sphere_point(&mut r, 4, LpNorm::L2);
        for s in [scale, 2.0 * scale] {
            let x: Vec<f64> = u.iter().map(|v| v * s).collect();
            let q = iterative_quantize(&base, cfg, &frame, &z, &x).unwrap();
            prop_assert!(q.error <= 1.0);
            prop_assert!(q.z_norm_value.unwrap() <= cfg.c1 * s + 1e-9);
            prop_assert!(q.verify(&frame, &x).unwrap());
        }
    }

    #[test]
    fn dyadic_results_recompute(seed in 0u64..1000, n in 1usize..6, m in 1usize..7) {
        let d = dyadic_frame(&onb(n), m).unwrap();
        let mut r = rng::seeded(seed);
        let a = rng::cube_point(&mut r, d.len());
        let q = dyadic_quantize(&d, &a).unwrap();
        prop_assert!(q.verify(&d.frame, &d.frame.synthesis(&a).unwrap()).unwrap());
        prop_assert!(q.error <= 1.0 + n as f64 * 0.5f64.powi(m as i32) / (1.0 - 0.5f64.powi(m as i32)) + 1e-12);
    }
}
