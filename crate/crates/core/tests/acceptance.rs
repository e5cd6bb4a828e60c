//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runtime limits are part of each criterion.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use frameq::bandlimited::{sd_pipeline, BandlimitedSignal, PipelineConfig};
use frameq::bounds::{
    bcnqp_sample_test, density_check, enumerate_quantized_set, scaling_sweep, BcnqpQuantizer, ExperimentRecord,
    SweepConfig,
};
use frameq::constructions::{dense_pm1_frame, dyadic_frame, kashin_frame, two_onb_union};
use frameq::norm::l2;
use frameq::quantizers::{
    dyadic_quantize, iterative_quantize, kashin_quantize, round_coeffs, sigma_delta, validate_base, DualRounding,
    IterativeQuantizerConfig, QuantizationResult,
};
use frameq::{rng, Frame, LpNorm, NormSpec, ZNormVariant};
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let pass = out.pass && elapsed <= limit;
    println!(
        "{} criterion {id}: {title} | {} | {:.2} s (limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn criterion_1() -> Outcome {
    let u = two_onb_union(4, &[0.1, 0.2]).unwrap().frame.frame_bounds();
    let p = dense_pm1_frame(4, 6).unwrap().frame_bounds();
    let pass = (u.a - 2.0).abs() <= 1e-9
        && (u.b - 2.0).abs() <= 1e-9
        && p.a >= 1.0 - 1e-9
        && p.b <= 11.0 / 3.0 + 1e-9;
    check(pass, format!("union (a, b) = ({:.12}, {:.12}); ±1 truncation (a, b) = ({:.6}, {:.6})", u.a, u.b, p.a, p.b))
}

fn criterion_2() -> Outcome {
    let df = dyadic_frame(&Frame::orthonormal_basis(8, LpNorm::L2).unwrap(), 7).unwrap();
    let eps = 1.0 + 8.0 * 2f64.powi(-7) / (1.0 - 2f64.powi(-7));
    // δ = 1, so max |δ k| ≤ 3 is k ∈ {-3, ..., 3}
    let r = bcnqp_sample_test(BcnqpQuantizer::Dyadic(&df), 3.0, eps, 1000, 2024).unwrap();
    let k_ok = {
        let mut g = rng::seeded(2024);
        (0..1000).all(|_| {
            let a = rng::cube_point(&mut g, 112);
            dyadic_quantize(&df, &a).unwrap().k.iter().all(|k| (-3..=3).contains(k))
        })
    };
    let proj = df.frame.projection_constant_estimate(2000, 5);
    check(
        r.pass && k_ok && proj <= 4.0 + 1e-6 && df.len() == 112,
        format!("worst error {:.4} ≤ {eps:.4}, worst |k| {}, projection constant {proj:.4}", r.worst_error, r.worst_coeff),
    )
}

fn criterion_3() -> Outcome {
    let kf = kashin_frame(16, 48, 7, 64).unwrap();
    let t = kf.tightness();
    let tight = (t.a - 1.0).abs() <= 1e-9 && (t.b - 1.0).abs() <= 1e-9;
    let mut g = rng::seeded(77);
    let (mut worst_err, mut worst_coeff, mut failures) = (0.0f64, 0.0f64, 0);
    for _ in 0..100 {
        let x = rng::sphere_point(&mut g, 16, LpNorm::L2);
        match kashin_quantize(&kf, &x, 0.05) {
            Ok(q) => {
                worst_err = worst_err.max(q.error);
                worst_coeff = worst_coeff.max(q.coeff_bound);
            }
            Err(_) => failures += 1,
        }
    }
    let pass = tight && failures == 0 && worst_err <= 0.025 + 1e-9 && worst_coeff <= kf.k_hat + 0.05;
    check(
        pass,
        format!(
            "tightness ({:.12}, {:.12}), worst error {worst_err:.5}, worst |δk| {worst_coeff:.4} vs K_hat + δ = {:.4}",
            t.a,
            t.b,
            kf.k_hat + 0.05
        ),
    )
}

fn criterion_4() -> Outcome {
    let frame = two_onb_union(4, &[0.1, 0.2]).unwrap().frame;
    let z = NormSpec::ZIntervalMax(Arc::new(frame.clone()));
    let base = DualRounding { frame: frame.clone(), delta: 0.25 };
    let cfg = IterativeQuantizerConfig::new(0.25, 1.5, 0.5).unwrap();
    let measured = match validate_base(&base, &frame, &z, cfg.c0, cfg.q0, 2000, 31) {
        Ok(m) => m,
        Err(e) => return check(false, format!("base contract: {e}")),
    };
    let mut g = rng::seeded(44);
    let (mut worst_err, mut worst_ratio) = (0.0f64, 0.0f64);
    let mut ok = cfg.c1 == 8.0 * cfg.c0 && cfg.q1 == 0.75;
    for _ in 0..100 {
        let norm = 10f64.powf(g.random_range(0.0..=3.0));
        let x: Vec<f64> = rng::sphere_point(&mut g, 4, LpNorm::L2).iter().map(|v| v * norm).collect();
        match iterative_quantize(&base, cfg, &frame, &z, &x) {
            Ok(q) => {
                let zv = q.z_norm_value.unwrap();
                worst_err = worst_err.max(q.error);
                worst_ratio = worst_ratio.max(zv / (8.0 * cfg.c0 * l2(&x)));
                ok &= q.error <= 1.0 && zv <= 8.0 * cfg.c0 * l2(&x);
            }
            Err(_) => ok = false,
        }
    }
    check(
        ok,
        format!(
            "measured base (C0, q0) = ({:.4}, {:.4}) within (1.5, 0.5); worst error {worst_err:.4}, worst Z/(8·C0·‖x‖) {worst_ratio:.4}",
            measured.max_z, measured.max_error
        ),
    )
}

/// All coefficient vectors of `[-cap, cap]^N` with `‖δk‖_Z ≤ C`, as rounded points.
fn naive_points(frame: &Frame, delta: f64, c: f64, z: &NormSpec, cap: i64) -> BTreeSet<Vec<i64>> {
    let len = frame.len();
    let side = 2 * cap + 1;
    let mut out = BTreeSet::new();
    let mut k = vec![-cap; len];
    loop {
        let scaled: Vec<f64> = k.iter().map(|&v| delta * v as f64).collect();
        if z.eval(&scaled).unwrap() <= c {
            let mut p = vec![0.0; frame.dim()];
            for (i, &kv) in k.iter().enumerate() {
                for (pr, xv) in p.iter_mut().zip(frame.vector(i)) {
                    *pr += delta * kv as f64 * xv;
                }
            }
            out.insert(p.iter().map(|v| (v * 1e12).round() as i64).collect());
        }
        let mut pos = 0;
        loop {
            if pos == len {
                return out;
            }
            k[pos] += 1;
            if k[pos] < side - cap {
                break;
            }
            k[pos] = -cap;
            pos += 1;
        }
    }
}

fn criterion_5() -> Outcome {
    let h = 3f64.sqrt() / 2.0;
    let merc = Frame::self_dual(&[vec![0.0, 1.0], vec![-h, -0.5], vec![h, -0.5]], LpNorm::L2)
        .unwrap()
        .canonical_dual()
        .unwrap();
    let merc = Arc::new(merc);
    let union = Arc::new(two_onb_union(2, &[0.3]).unwrap().frame);
    type Instance = (&'static str, Arc<Frame>, f64, f64, NormSpec, i64);
    let instances: Vec<Instance> = vec![
        ("basis/l2", Arc::new(Frame::orthonormal_basis(2, LpNorm::L2).unwrap()), 0.2, 1.2, NormSpec::Lp(LpNorm::L2), 6),
        ("mercedes/interval", merc.clone(), 0.25, 1.5, NormSpec::ZIntervalMax(merc.clone()), 6),
        ("two-basis/interval", union.clone(), 0.3, 1.2, NormSpec::ZIntervalMax(union.clone()), 4),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, frame, delta, c, z, cap) in instances {
        let set = enumerate_quantized_set(&frame, delta, c, &z, cap).unwrap();
        let got: BTreeSet<Vec<i64>> = set.points.iter().map(|p| p.iter().map(|v| (v * 1e12).round() as i64).collect()).collect();
        let exact = got == naive_points(&frame, delta, c, &z, cap);
        let eps = density_check(&set, LpNorm::L2, 10_000, 8).unwrap().epsilon_hat;
        let volume = set.cardinality as f64 >= (1.0 / eps).powi(2) * 0.9;
        pass &= exact && volume;
        notes.push(format!("{name}: |F| = {}, ε̂ = {eps:.4}, oracle {}", set.cardinality, if exact { "equal" } else { "DIFFERS" }));
    }
    check(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let cfg = SweepConfig { trials: 1000, seed: 6, epsilon_target: Some(1.07), c: Some(3.0), ..Default::default() };
    let dims = [2, 4, 8, 16, 32];
    let a = scaling_sweep(&dims, &cfg).unwrap();
    let b = scaling_sweep(&dims, &cfg).unwrap();
    let identical = ExperimentRecord::to_csv(&a) == ExperimentRecord::to_csv(&b);
    let mut pass = identical;
    let mut notes = Vec::new();
    for (r, &n) in a.iter().zip(&dims) {
        let m = (2.0 * (n as f64).log2()).ceil() as usize;
        let ratio = r.big_n as f64 / (n as f64 * (n as f64).log2());
        let lower = r.bound_values["thm56_N_lower"];
        pass &= r.pass && r.big_n == 2 * n * m && ratio <= 5.0 && (lower <= 0.0 || r.big_n as f64 >= lower);
        notes.push(format!("n={n} N={} ratio {ratio:.2} err {:.3}", r.big_n, r.epsilon_measured));
    }
    check(pass, format!("{}; CSV identical: {identical}", notes.join(", ")))
}

fn criterion_7() -> Outcome {
    let f = BandlimitedSignal::new(vec![(0.9, 0.0)]).unwrap();
    let r4 = sd_pipeline(&f, &PipelineConfig::standard(4.0)).unwrap();
    let r8 = sd_pipeline(&f, &PipelineConfig::standard(8.0)).unwrap();
    let within = r4.max_error <= r4.rho_prime_l1 / 4.0 + r4.tail;
    let monotone = r8.max_error <= r4.max_error;
    let mut g = rng::seeded(70);
    let mut state_ok = true;
    let mut worst_state = 0.0f64;
    for _ in 0..10 {
        let y: Vec<f64> = (0..10_000).map(|_| g.random_range(-1.0..=1.0)).collect();
        let out = sigma_delta(&y).unwrap();
        let m = out.u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        worst_state = worst_state.max(m);
        state_ok &= m <= 1.0;
    }
    check(
        within && monotone && state_ok,
        format!(
            "λ=4 error {:.4} ≤ {:.4} + tail {:.2e}; λ=8 error {:.4}; max |u| {worst_state:.4}",
            r4.max_error,
            r4.rho_prime_l1 / 4.0,
            r4.tail,
            r8.max_error
        ),
    )
}

fn random_frame_strategy() -> impl Strategy<Value = (Frame, Vec<f64>)> {
    (2usize..5, 0usize..4, any::<u64>()).prop_map(|(n, extra, seed)| {
        let mut g = rng::seeded(seed);
        loop {
            let vs: Vec<Vec<f64>> = (0..n + extra + 1).map(|_| rng::gaussian_vec(&mut g, n)).collect();
            let f = Frame::self_dual(&vs, LpNorm::L2).unwrap();
            if f.frame_bounds().a > 1e-3 {
                return (f.canonical_dual().unwrap(), rng::gaussian_vec(&mut g, n));
            }
        }
    })
}

/// `max_{i ≤ j} ‖Σ_{i..=j} a_k x_k‖` computed directly.
fn interval_max(frame: &Frame, a: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..a.len() {
        let mut acc = vec![0.0; frame.dim()];
        for (j, &aj) in a.iter().enumerate().skip(i) {
            for (s, v) in acc.iter_mut().zip(frame.vector(j)) {
                *s += aj * v;
            }
            best = best.max(l2(&acc));
        }
    }
    best
}

fn property(name: &str, notes: &mut Vec<String>, r: Result<(), TestError<impl std::fmt::Debug>>) -> bool {
    match r {
        Ok(()) => {
            notes.push(format!("{name} ok"));
            true
        }
        Err(e) => {
            notes.push(format!("{name} FAILED: {e:?}"));
            false
        }
    }
}

fn criterion_8() -> Outcome {
    let runner = TestRunner::new_with_rng(Config { cases: 256, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let mut notes = Vec::new();
    let mut pass = true;

    let r = runner.clone().run(&random_frame_strategy(), |(f, x)| {
        let back = f.synthesis(&f.analysis(&x).unwrap()).unwrap();
        prop_assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + l2(&x))));
        Ok(())
    });
    pass &= property("reconstruction", &mut notes, r);

    let r = runner.clone().run(&random_frame_strategy(), |(f, _)| {
        let x = f.synthesis_matrix();
        let s = x * x.transpose();
        let dual = f.canonical_dual().unwrap();
        let d = dual.analysis_matrix();
        let n = f.dim();
        // dual functionals S⁻¹x_i: their frame operator is S⁻¹ and Σ x_i ⊗ S⁻¹x_i = I
        prop_assert!((&s * (d * d.transpose()) - DMatrix::<f64>::identity(n, n)).amax() <= 1e-8);
        prop_assert!((x * d.transpose() - DMatrix::<f64>::identity(n, n)).amax() <= 1e-8);
        let again = dual.canonical_dual().unwrap();
        prop_assert!((again.analysis_matrix() - d).amax() <= 1e-9 * (1.0 + d.amax()));
        Ok(())
    });
    pass &= property("canonical dual", &mut notes, r);

    let coeffs = (random_frame_strategy(), prop::collection::vec(-2.0f64..2.0, 8), prop::collection::vec(-2.0f64..2.0, 8), 0.0f64..1.0);
    let r = runner.clone().run(&coeffs, |((f, _), a, b, t)| {
        let len = f.len();
        let (a, b) = (&a[..len], &b[..len]);
        let z = |v: &[f64]| f.z_norm(v, ZNormVariant::IntervalMax).unwrap().value;
        let za = z(a);
        prop_assert!((za - interval_max(&f, a)).abs() <= 1e-9 * (1.0 + za));
        // bimonotone: restricting to any interval of indices cannot increase the norm
        for i in 0..len {
            for j in i..len {
                let part: Vec<f64> = (0..len).map(|k| if (i..=j).contains(&k) { a[k] } else { 0.0 }).collect();
                prop_assert!(z(&part) <= za + 1e-12);
            }
        }
        let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        prop_assert!(z(&sum) <= za + z(b) + 1e-9);
        let scaled: Vec<f64> = a.iter().map(|v| -3.0 * t * v).collect();
        prop_assert!((z(&scaled) - 3.0 * t * za).abs() <= 1e-9 * (1.0 + za));
        prop_assert!(z(&vec![0.0; len]) == 0.0);
        Ok(())
    });
    pass &= property("z-norm bimonotone and norm axioms", &mut notes, r);

    let dyadic = dyadic_frame(&Frame::orthonormal_basis(3, LpNorm::L2).unwrap(), 4).unwrap();
    let kashin = kashin_frame(4, 12, 3, 16).unwrap();
    let qf = kashin.quantization_frame();
    let recompute = |frame: &Frame, x: &[f64], q: &QuantizationResult| {
        let mut y = vec![0.0; frame.dim()];
        for (i, &k) in q.k.iter().enumerate() {
            for (s, v) in y.iter_mut().zip(frame.vector(i)) {
                *s += q.delta * k as f64 * v;
            }
        }
        let err = l2(&x.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>());
        let coeff = q.k.iter().map(|&k| (q.delta * k as f64).abs()).fold(0.0, f64::max);
        (err - q.error).abs() <= 1e-12 * (1.0 + err) && (coeff - q.coeff_bound).abs() <= 1e-15 * (1.0 + coeff)
    };
    let inputs = (prop::collection::vec(-1.0f64..=1.0, 24), 0.01f64..0.5);
    let r = runner.clone().run(&inputs, |(a, delta)| {
        let q = dyadic_quantize(&dyadic, &a).unwrap();
        prop_assert!(recompute(&dyadic.frame, &dyadic.frame.synthesis(&a).unwrap(), &q));
        let x: Vec<f64> = a[..4].iter().map(|v| v / 2.0).collect();
        let q = kashin_quantize(&kashin, &x, delta).unwrap();
        prop_assert!(recompute(&qf, &x, &q));
        let k = round_coeffs(&qf.analysis(&x).unwrap(), delta).unwrap();
        let q = QuantizationResult::assemble(&qf, &x, k, delta, "round", serde_json::json!({})).unwrap();
        prop_assert!(recompute(&qf, &x, &q) && q.verify(&qf, &x).unwrap());
        Ok(())
    });
    pass &= property("quantizer recomputation", &mut notes, r);

    check(pass, notes.join("; "))
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "tight-frame identity", s(1), criterion_1),
        run(2, "dyadic bounded-coefficient quantization", s(10), criterion_2),
        run(3, "Kashin quantization", s(30), criterion_3),
        run(4, "iterative quantizer", s(10), criterion_4),
        run(5, "counting/volume property", s(60), criterion_5),
        run(6, "scaling law sweep", s(120), criterion_6),
        run(7, "sigma-delta bound", s(30), criterion_7),
        run(8, "invariant suite", s(60), criterion_8),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
