use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use frameq::bandlimited::{sd_pipeline, BandlimitedSignal, PipelineConfig, WindowFamily};
use frameq::bounds::{
    counting_lower_bound, density_check, enumerate_quantized_set, min_norm_ratio, scaling_sweep, frame_length_lower_bound,
    volume_ratio_bound, volume_ratio_bound2, BoundParams, ExperimentRecord, GrowthFn, QuantizedSet, SweepConfig,
    SweepKind,
};
use frameq::constructions::{
    ball_net, dense_pm1_frame, dense_schauder_frame, dyadic_frame, expand_frame, kashin_frame, net_augmented_frame,
    pm1_digits, two_onb_union, DyadicFrame, KashinFrame,
};
use frameq::quantizers::{dyadic_quantize, kashin_quantize, round_coeffs, QuantizationResult};
use frameq::{rng, Frame, LpNorm, NormSpec};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{read_json, resolve, write_outputs, Format, GlobalFlags, Output};

/// A computed result failed the check it was run against.
#[derive(Debug)]
pub struct ContractFailure(pub String);

impl fmt::Display for ContractFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contract failure: {}", self.0)
    }
}

impl std::error::Error for ContractFailure {}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing parameter `{name}`"))
}

/// Accepts a bare frame or an object with a `frame` field (as written by
/// `build-frame`).
pub fn load_frame(path: &Path) -> Result<Frame> {
    let mut v = read_json(path)?;
    if let Some(inner) = v.get_mut("frame") {
        v = inner.take();
    }
    serde_json::from_value(v).with_context(|| format!("{} is not a frame", path.display()))
}

fn print_summary(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FrameKind {
    TwoOnb,
    DensePm1,
    DenseSchauder,
    Dyadic,
    Kashin,
    Expand,
    NetAugment,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildFrameArgs {
    #[arg(long, value_enum)]
    pub kind: Option<FrameKind>,
    /// Dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Frame length (Kashin: default 3n).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    /// Dyadic depth (default ⌈2 log₂ n⌉).
    #[arg(long)]
    pub m: Option<usize>,
    /// Levels of the dense ±1 frame (default 6).
    #[arg(long)]
    pub levels: Option<usize>,
    /// Tilt per coordinate pair of the two-basis union (default 0.1 each).
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Net grid step for dense_schauder and net_augment (default 0.5).
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Unit vectors used to estimate the Kashin constant (default 64).
    #[arg(long)]
    pub trial_samples: Option<usize>,
    /// Frame file expanded by expand and net_augment (default: standard basis).
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Column norm of the random expansion operator (default 0.5).
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub out: Option<String>,
}

fn base_frame(a: &BuildFrameArgs, n: usize) -> Result<Frame> {
    match &a.base {
        Some(p) => load_frame(p),
        None => Ok(Frame::orthonormal_basis(n, LpNorm::L2)?),
    }
}

pub fn build_frame(g: &GlobalFlags, flags: BuildFrameArgs) -> Result<()> {
    let r = resolve("build-frame", g, json!({ "out": "frame.json" }), &flags)?;
    let a = &r.params;
    let kind = need(a.kind, "kind")?;
    let n = need(a.n, "n")?;
    let seed = r.global.seed;
    let mut extra = json!({});
    let frame = match kind {
        FrameKind::TwoOnb => {
            let eps = a.eps.clone().unwrap_or_else(|| vec![0.1; n / 2]);
            two_onb_union(n, &eps)?.frame
        }
        FrameKind::DensePm1 => dense_pm1_frame(n, a.levels.unwrap_or(6))?,
        FrameKind::DenseSchauder => {
            let s = dense_schauder_frame(n, a.grid_step.unwrap_or(0.5))?;
            extra = json!({ "net_points": s.net.len(), "coarse": s.coarse });
            s.frame
        }
        FrameKind::Dyadic => {
            let m = a.m.unwrap_or_else(|| (2.0 * (n as f64).log2()).ceil().max(1.0) as usize);
            let df = dyadic_frame(&Frame::orthonormal_basis(n, LpNorm::L2)?, m)?;
            extra = json!({ "m": m, "projection_constant_estimate": df.frame.projection_constant_estimate(200, seed) });
            df.frame
        }
        FrameKind::Kashin => {
            let kf = kashin_frame(n, a.big_n.unwrap_or(3 * n), seed, a.trial_samples.unwrap_or(64))?;
            let t = kf.tightness();
            extra = json!({
                "k_hat": kf.k_hat,
                "seed_used": kf.seed_used,
                "tightness": [t.a, t.b],
                "orthonormality_defect": kf.orthonormality_defect(),
                "advisory": kf.advisory,
            });
            kf.frame()
        }
        FrameKind::Expand => {
            let base = base_frame(a, n)?;
            let len = base.len();
            let scale = a.scale.unwrap_or(0.5);
            let mut rg = rng::seeded(seed);
            let mut v = DMatrix::from_row_iterator(base.dim(), len, rng::gaussian_vec(&mut rg, base.dim() * len));
            for mut c in v.column_iter_mut() {
                let norm = c.norm();
                if norm > 0.0 {
                    c *= scale / norm;
                }
            }
            let y: Vec<Vec<f64>> = (0..len).map(|i| (0..len).map(|j| f64::from(u8::from(i == j))).collect()).collect();
            let e = expand_frame(&base, &y, LpNorm::L1, &v)?;
            extra = json!({ "lambda": e.lambda });
            e.frame
        }
        FrameKind::NetAugment => {
            let base = base_frame(a, n)?;
            let net = ball_net(base.dim(), a.grid_step.unwrap_or(0.5))?;
            let na = net_augmented_frame(&base, &net, seed)?;
            extra = json!({ "net_points": net.len(), "perturbed": na.perturbed, "replicas": na.replicas });
            na.expansion.frame
        }
    };
    let bounds = frame.frame_bounds();
    let report = json!({
        "kind": kind,
        "n": frame.dim(),
        "N": frame.len(),
        "frame_bounds": bounds,
        "details": extra,
    });
    let out = a.out.clone().unwrap_or_else(|| "frame.json".into());
    write_outputs("build-frame", &r, vec![Output::Json(out, json!({ "frame": frame, "report": report }))])?;
    print_summary(&report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Algorithm {
    /// Bounded-coefficient quantizer of a dyadic frame; input is coefficients.
    Dyadic,
    /// ℓ∞ representation then rounding, on a Kashin frame.
    Kashin,
    /// Rounding of the analysis coefficients to multiples of δ.
    Round,
    /// Signed digits on the dense ±1 frame.
    Pm1,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeArgs {
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Allowed error; the algorithm's guarantee by default.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Allowed `max |δ k_i|`; the algorithm's guarantee by default.
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Vector to quantize (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Coefficients `a` of `x = Σ a_i x_i` (dyadic only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<String>,
}

struct QuantizeRun {
    x: Vec<f64>,
    result: QuantizationResult,
    frame: Frame,
    epsilon: f64,
    c: f64,
}

fn random_ball(seed: u64, dim: usize) -> Vec<f64> {
    rng::ball_point(&mut rng::seeded(seed), dim, LpNorm::L2)
}

fn run_quantizer(a: &QuantizeArgs, frame: Frame, seed: u64) -> Result<QuantizeRun> {
    let alg = need(a.algorithm, "algorithm")?;
    if a.coeffs.is_some() && alg != Algorithm::Dyadic {
        bail!("--coeffs applies to the dyadic algorithm only");
    }
    Ok(match alg {
        Algorithm::Dyadic => {
            let df = DyadicFrame::from_frame(&frame).context("dyadic algorithm needs a dyadic frame")?;
            if a.delta.is_some_and(|d| d != 1.0) {
                bail!("the dyadic quantizer works at δ = 1");
            }
            if a.x.is_some() {
                bail!("the dyadic quantizer takes --coeffs, not --x");
            }
            let coeffs = match &a.coeffs {
                Some(c) => c.clone(),
                None => rng::cube_point(&mut rng::seeded(seed), df.len()),
            };
            let result = dyadic_quantize(&df, &coeffs)?;
            let w = 0.5f64.powi(df.m as i32);
            QuantizeRun {
                x: df.frame.synthesis(&coeffs)?,
                result,
                epsilon: a.epsilon.unwrap_or(1.0 + df.n as f64 * w / (1.0 - w)),
                c: a.c.unwrap_or(3.0),
                frame: df.frame,
            }
        }
        Algorithm::Kashin => {
            let kf = KashinFrame::from_frame(&frame).context("kashin algorithm needs a Kashin frame")?;
            let delta = a.delta.unwrap_or(0.05);
            let x = a.x.clone().unwrap_or_else(|| random_ball(seed, kf.n));
            let result = kashin_quantize(&kf, &x, delta)?;
            QuantizeRun {
                x,
                result,
                epsilon: a.epsilon.unwrap_or(delta / 2.0),
                c: a.c.unwrap_or(kf.k_hat + delta),
                frame: kf.quantization_frame(),
            }
        }
        Algorithm::Round => {
            let delta = a.delta.unwrap_or(0.1);
            let x = a.x.clone().unwrap_or_else(|| random_ball(seed, frame.dim()));
            let k = round_coeffs(&frame.analysis(&x)?, delta)?;
            let result = QuantizationResult::assemble(&frame, &x, k, delta, "round", json!({}))?;
            QuantizeRun {
                x,
                result,
                epsilon: a.epsilon.unwrap_or(f64::INFINITY),
                c: a.c.unwrap_or(f64::INFINITY),
                frame,
            }
        }
        Algorithm::Pm1 => {
            let c = frame.construction().filter(|c| c.kind == "dense_pm1").context("pm1 algorithm needs a dense_pm1 frame")?;
            let n = c.params["n"].as_u64().context("dense_pm1 params lack n")? as usize;
            let levels = c.params["L"].as_u64().context("dense_pm1 params lack L")? as usize;
            if a.delta.is_some_and(|d| d != 1.0) {
                bail!("the pm1 digits work at δ = 1");
            }
            let head = match &a.x {
                Some(x) => x.clone(),
                None => rng::cube_point(&mut rng::seeded(seed), n),
            };
            let k = pm1_digits(n, levels, &head)?;
            let mut x = head;
            x.resize(frame.dim(), 0.0);
            let result = QuantizationResult::assemble(&frame, &x, k, 1.0, "pm1", json!({ "n": n, "L": levels }))?;
            QuantizeRun {
                x,
                result,
                epsilon: a.epsilon.unwrap_or((n as f64).sqrt() * 0.5f64.powi(levels as i32)),
                c: a.c.unwrap_or(1.0),
                frame,
            }
        }
    })
}

pub fn quantize(g: &GlobalFlags, flags: QuantizeArgs) -> Result<()> {
    let r = resolve("quantize", g, json!({ "out": "quantize.json" }), &flags)?;
    let frame = load_frame(&need(r.params.frame.clone(), "frame")?)?;
    let run = run_quantizer(&r.params, frame, r.global.seed)?;
    let verified = run.result.verify(&run.frame, &run.x)?;
    let error_ok = run.result.error <= run.epsilon;
    let coeff_ok = run.result.coeff_bound <= run.c * (1.0 + 1e-12);
    let pass = verified && error_ok && coeff_ok;
    let finite = |v: f64| if v.is_finite() { json!(v) } else { Value::Null };
    let summary = json!({
        "algorithm": run.result.algorithm,
        "error": run.result.error,
        "coeff_bound": run.result.coeff_bound,
        "epsilon": finite(run.epsilon),
        "C": finite(run.c),
        "verified": verified,
        "pass": pass,
    });
    let body = json!({ "summary": summary, "x": run.x, "result": run.result });
    let out = r.params.out.clone().unwrap_or_else(|| "quantize.json".into());
    write_outputs("quantize", &r, vec![Output::Json(out, body)])?;
    print_summary(&summary)?;
    if !pass {
        return Err(ContractFailure(format!(
            "error {} (allowed {}), max |δk| {} (allowed {}), recomputation {}",
            run.result.error,
            run.epsilon,
            run.result.coeff_bound,
            run.c,
            if verified { "matches" } else { "differs" }
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum NormChoice {
    L1,
    L2,
    Linf,
    ZIntervalMax,
    ZSignMax,
}

impl NormChoice {
    fn lp(self) -> Option<LpNorm> {
        match self {
            NormChoice::L1 => Some(LpNorm::L1),
            NormChoice::L2 => Some(LpNorm::L2),
            NormChoice::Linf => Some(LpNorm::Inf),
            _ => None,
        }
    }

    fn spec(self, frame: &Arc<Frame>) -> NormSpec {
        match self {
            NormChoice::ZIntervalMax => NormSpec::ZIntervalMax(frame.clone()),
            NormChoice::ZSignMax => NormSpec::ZSignMax(frame.clone()),
            lp => NormSpec::Lp(lp.lp().expect("ℓp variant")),
        }
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityArgs {
    /// Point set: a saved quantized set, `{"points": [...]}` or a bare list.
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Frame whose quantized set is enumerated when no set is given.
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Coefficient norm of the enumeration.
    #[arg(long, value_enum)]
    pub z: Option<NormChoice>,
    /// Per-coordinate bound on |n_j|; derived from C/δ when absent.
    #[arg(long)]
    pub coeff_cap: Option<i64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Norm of the covered ball (default: the frame's, else ℓ2).
    #[arg(long, value_enum)]
    pub ambient: Option<NormChoice>,
    #[arg(long)]
    pub out: Option<String>,
}

fn load_set(path: &Path) -> Result<QuantizedSet> {
    let v = read_json(path)?;
    if let Ok(s) = serde_json::from_value::<QuantizedSet>(v.get("set").cloned().unwrap_or_else(|| v.clone())) {
        return Ok(s);
    }
    let pts = v.get("points").cloned().unwrap_or(v);
    let points: Vec<Vec<f64>> =
        serde_json::from_value(pts).with_context(|| format!("{} holds no point list", path.display()))?;
    if let Some(p) = points.iter().find(|p| p.len() != points[0].len()) {
        bail!("points of different dimensions ({} and {})", p.len(), points[0].len());
    }
    Ok(QuantizedSet {
        cardinality: points.len(),
        coefficients: vec![Vec::new(); points.len()],
        points,
        delta: f64::NAN,
        c: f64::NAN,
        z_norm: "external".into(),
        coeff_cap: 0,
        nodes_visited: 0,
    })
}

/// `|δ n_j|·‖x_j‖ ≤ ‖δ n‖_Z ≤ C` for the Z-norms; `|δ n_j| ≤ C` for ℓp.
fn default_cap(frame: &Frame, z: NormChoice, delta: f64, c: f64) -> Result<i64> {
    let scale = match z {
        NormChoice::ZIntervalMax | NormChoice::ZSignMax => {
            (0..frame.len()).map(|i| frame.vector_norm(i)).fold(f64::INFINITY, f64::min)
        }
        _ => 1.0,
    };
    if scale <= 0.0 {
        bail!("a zero frame vector leaves its coefficient unbounded; pass --coeff-cap");
    }
    Ok((c / (delta * scale) + 1e-9).floor() as i64)
}

pub fn density(g: &GlobalFlags, flags: DensityArgs) -> Result<()> {
    let r = resolve("density", g, json!({ "samples": 10000, "out": "density" }), &flags)?;
    let a = &r.params;
    let mut outputs = Vec::new();
    let (set, ambient) = match (&a.set, &a.frame) {
        (Some(p), None) => (load_set(p)?, a.ambient.unwrap_or(NormChoice::L2)),
        (None, Some(p)) => {
            let frame = Arc::new(load_frame(p)?);
            let delta = need(a.delta, "delta")?;
            let c = need(a.c, "C")?;
            let z = a.z.unwrap_or(NormChoice::ZIntervalMax);
            let cap = match a.coeff_cap {
                Some(cap) => cap,
                None => default_cap(&frame, z, delta, c)?,
            };
            let set = enumerate_quantized_set(&frame, delta, c, &z.spec(&frame), cap)?;
            outputs.push(Output::Json("set.json".into(), json!({ "set": set })));
            let ambient = match frame.ambient() {
                LpNorm::Inf => NormChoice::Linf,
                p if p == LpNorm::L1 => NormChoice::L1,
                _ => NormChoice::L2,
            };
            (set, a.ambient.unwrap_or(ambient))
        }
        _ => bail!("give exactly one of --set and --frame"),
    };
    let lp = ambient.lp().context("the covered ball needs an ℓp norm")?;
    let report = density_check(&set, lp, need(a.samples, "samples")?, r.global.seed)?;
    let stem = a.out.clone().unwrap_or_else(|| "density".into());
    outputs.push(match r.global.format {
        Format::Json => Output::Json(format!("{stem}.json"), json!({ "report": report })),
        Format::Csv => Output::Csv(
            format!("{stem}.csv"),
            format!(
                "epsilon_hat,samples,seed,ambient,cardinality\n{},{},{},{},{}\n",
                report.epsilon_hat, report.samples, report.seed, report.ambient, report.cardinality
            ),
        ),
    });
    write_outputs("density", &r, outputs)?;
    print_summary(&serde_json::to_value(&report)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepKindArg {
    Dyadic,
    Kashin,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub kind: Option<SweepKindArg>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub epsilon_target: Option<f64>,
    /// Kashin frame length over dimension.
    #[arg(long)]
    pub kashin_ratio: Option<usize>,
    #[arg(long)]
    pub kashin_trial_samples: Option<usize>,
    /// Record wall time per row (makes output run-dependent).
    #[arg(long)]
    pub timing: Option<bool>,
    #[arg(long)]
    pub cotype_q: Option<f64>,
    #[arg(long)]
    pub c_q: Option<f64>,
    #[arg(long)]
    pub k_z: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub a_const: Option<f64>,
    #[arg(long)]
    pub f_coef: Option<f64>,
    #[arg(long)]
    pub f_exp: Option<f64>,
    #[arg(long)]
    pub out: Option<String>,
}

fn bound_params(
    cotype_q: Option<f64>,
    c_q: Option<f64>,
    k_z: Option<f64>,
    d: Option<f64>,
    a_const: Option<f64>,
    f_coef: Option<f64>,
    f_exp: Option<f64>,
) -> BoundParams {
    let def = BoundParams::default();
    BoundParams {
        cotype_q: cotype_q.unwrap_or(def.cotype_q),
        c_q: c_q.unwrap_or(def.c_q),
        k_z: k_z.unwrap_or(def.k_z),
        f: GrowthFn::Power { coef: f_coef.unwrap_or(1.0), exp: f_exp.unwrap_or(1.0) },
        g: def.g,
        d: d.unwrap_or(def.d),
        a_const: a_const.unwrap_or(def.a_const),
    }
}

pub fn sweep(g: &GlobalFlags, flags: SweepArgs) -> Result<()> {
    let defaults = json!({ "dims": [2, 4, 8, 16, 32], "kind": "dyadic", "trials": 1000, "out": "sweep" });
    let r = resolve("sweep", g, defaults, &flags)?;
    let a = &r.params;
    let base = SweepConfig::default();
    let cfg = SweepConfig {
        kind: match a.kind {
            Some(SweepKindArg::Kashin) => SweepKind::Kashin,
            _ => SweepKind::Dyadic,
        },
        trials: a.trials.unwrap_or(base.trials),
        seed: r.global.seed,
        delta: a.delta,
        c: a.c,
        epsilon_target: a.epsilon_target,
        kashin_ratio: a.kashin_ratio.unwrap_or(base.kashin_ratio),
        kashin_trial_samples: a.kashin_trial_samples.unwrap_or(base.kashin_trial_samples),
        bound_params: bound_params(a.cotype_q, a.c_q, a.k_z, a.d, a.a_const, a.f_coef, a.f_exp),
        timing: a.timing.unwrap_or(false),
    };
    let dims = need(a.dims.clone(), "dims")?;
    let records = scaling_sweep(&dims, &cfg)?;
    let stem = a.out.clone().unwrap_or_else(|| "sweep".into());
    let output = match r.global.format {
        Format::Csv => Output::Csv(format!("{stem}.csv"), ExperimentRecord::to_csv(&records)),
        Format::Json => Output::Json(format!("{stem}.json"), ExperimentRecord::to_json(&records, &cfg)),
    };
    write_outputs("sweep", &r, vec![output])?;
    for rec in &records {
        println!("{}", rec.csv_row());
    }
    let failed: Vec<usize> = records.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    if !failed.is_empty() {
        return Err(ContractFailure(format!("sampling test failed for n in {failed:?}")).into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SignalChoice {
    /// `amplitude · sinc`.
    Demo,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FamilyChoice {
    RaisedCosine,
    MollifiedBump,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaDeltaArgs {
    /// Oversampling rate.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub signal: Option<SignalChoice>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Truncation radius T.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyChoice>,
    /// Spectral edge of the window in units of π.
    #[arg(long)]
    pub edge: Option<f64>,
    #[arg(long)]
    pub out: Option<String>,
}

pub fn sigma_delta(g: &GlobalFlags, flags: SigmaDeltaArgs) -> Result<()> {
    let defaults = json!({
        "lambda": 4.0, "signal": "demo", "amplitude": 0.9, "radius": 50.0,
        "grid_points": 2001, "family": "raised_cosine", "edge": 2.0, "out": "sigma_delta",
    });
    let r = resolve("sigma-delta", g, defaults, &flags)?;
    let a = &r.params;
    let signal = match need(a.signal, "signal")? {
        SignalChoice::Demo => BandlimitedSignal::scaled_sinc(need(a.amplitude, "amplitude")?),
        SignalChoice::Zero => BandlimitedSignal::zero(),
    };
    let cfg = PipelineConfig {
        lambda: need(a.lambda, "lambda")?,
        radius: need(a.radius, "radius")?,
        grid_points: need(a.grid_points, "grid_points")?,
        family: match need(a.family, "family")? {
            FamilyChoice::RaisedCosine => WindowFamily::RaisedCosine,
            FamilyChoice::MollifiedBump => WindowFamily::MollifiedBump,
        },
        edge: a.edge,
    };
    let report = sd_pipeline(&signal, &cfg)?;
    let stem = a.out.clone().unwrap_or_else(|| "sigma_delta".into());
    let output = match r.global.format {
        Format::Json => Output::Json(format!("{stem}.json"), json!({ "report": report })),
        Format::Csv => {
            let mut body = String::from("x,exact,reconstructed\n");
            for ((x, e), v) in report.grid.iter().zip(&report.exact).zip(&report.reconstructed) {
                body.push_str(&format!("{x},{e},{v}\n"));
            }
            Output::Csv(format!("{stem}.csv"), body)
        }
    };
    write_outputs("sigma-delta", &r, vec![output])?;
    print_summary(&serde_json::to_value(&report)?)?;
    if !report.pass {
        return Err(ContractFailure(format!(
            "max error {} above bound {} + tail {}",
            report.max_error, report.bound, report.tail
        ))
        .into());
    }
    Ok(())
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundEvalArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub cotype_q: Option<f64>,
    #[arg(long)]
    pub c_q: Option<f64>,
    #[arg(long)]
    pub k_z: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub a_const: Option<f64>,
    #[arg(long)]
    pub f_coef: Option<f64>,
    #[arg(long)]
    pub f_exp: Option<f64>,
    /// Frame whose min-norm ratio is reported.
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<String>,
}

pub fn bound_eval(g: &GlobalFlags, flags: BoundEvalArgs) -> Result<()> {
    let defaults = json!({ "n": 16, "epsilon": 0.5, "delta": 1.0, "C": 3.0, "out": "bounds" });
    let r = resolve("bound-eval", g, defaults, &flags)?;
    let a = &r.params;
    let p = bound_params(a.cotype_q, a.c_q, a.k_z, a.d, a.a_const, a.f_coef, a.f_exp);
    p.validate()?;
    let (n, eps, delta, c) = (need(a.n, "n")?, need(a.epsilon, "epsilon")?, need(a.delta, "delta")?, need(a.c, "C")?);
    let mut values = serde_json::Map::new();
    // ε ≥ 1 makes the counting bound undefined; it is reported as absent
    if eps < 1.0 {
        values.insert("eq433_lnN".into(), json!(counting_lower_bound(n, eps, delta, c, p.k_z, &p.f)?));
    }
    values.insert("thm56_N_lower".into(), json!(frame_length_lower_bound(n, p.cotype_q, delta, c)));
    if n >= 2 {
        values.insert("volume_ratio".into(), json!(volume_ratio_bound(n, p.cotype_q, p.c_q, p.d)?));
    }
    values.insert("volume_ratio2".into(), json!(volume_ratio_bound2(p.c_q, p.a_const)));
    if let Some(path) = &a.frame {
        values.insert("min_norm_ratio".into(), json!(min_norm_ratio(&load_frame(path)?)?));
    }
    let stem = a.out.clone().unwrap_or_else(|| "bounds".into());
    let output = match r.global.format {
        Format::Json => Output::Json(
            format!("{stem}.json"),
            json!({ "values": values, "bound_params": p, "unnormalized": p.unnormalized() }),
        ),
        Format::Csv => {
            let mut body = String::from("name,value\n");
            for (k, v) in &values {
                body.push_str(&format!("{k},{v}\n"));
            }
            Output::Csv(format!("{stem}.csv"), body)
        }
    };
    write_outputs("bound-eval", &r, vec![output])?;
    print_summary(&Value::Object(values))
}
