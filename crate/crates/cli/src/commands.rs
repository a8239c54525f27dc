//! Implementations of the subcommands: thin wrappers that resolve options,
//! read JSON/CSV inputs, call the library, and write deterministic outputs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use snowflake_core::embeddings::{
    discretize_lr, discretize_threshold, dyadic_round, holder_line_map, koch_eval, koch_extend,
    kuratowski_embed, lift_c0, lift_lr, FnPointMap, KochParams, PointMap, TabulatedMap,
    DEFAULT_DEPTH, DEFAULT_MAX_STEPS,
};
use snowflake_core::reductions::{
    block_diff_power_sum, ep_partial_sums, flat_diff_power_sum, flatten_blocks, scaled_family,
    theta, verify_reduction_conditions, SequencePair, DEFAULT_HORIZON,
    DEFAULT_SAMPLES_PER_INDEX,
};
use snowflake_core::search::{brute_min_distortion, local_min_distortion, SearchConfig};
use snowflake_core::spaces::{FiniteMetricSpace, PNormVector, StepFunction};
use snowflake_core::typecotype::{
    hypercube_obstruction_experiment, iff_verdict, metric_cotype_ratio, metric_type_ratio,
    necessary_conditions, rademacher_cotype_ratio, rademacher_type_ratio, sigma_embed,
    space_profile, GridMap, GridMetric, HypercubeMap, ObstructionConfig, SampleMode,
    SpaceDescriptor,
};

use crate::support::{csv_table, to_pretty_json, CliError, CliResult, Resolver, RunContext};
use crate::Cmd;

pub fn dispatch(cmd: Cmd, config: Option<PathBuf>, manifest: Option<PathBuf>) -> CliResult<()> {
    let config = config.as_deref();
    let manifest = manifest.as_deref();
    match cmd {
        Cmd::Curve { r, samples, depth, out } => curve(config, manifest, r, samples, depth, &out),
        Cmd::Extend { r, t_min, t_max, samples, max_steps, depth, out } => {
            extend(config, manifest, r, t_min, t_max, samples, max_steps, depth, &out)
        }
        Cmd::LineMap { alpha, t_min, t_max, samples, out } => {
            line_map(config, manifest, alpha, t_min, t_max, samples, &out)
        }
        Cmd::LiftLr { map, input, r, s, out } => {
            lift_lr_cmd(config, manifest, map, &input, r, s, &out)
        }
        Cmd::LiftC0 { map, input, out } => lift_c0_cmd(config, manifest, map, &input, &out),
        Cmd::Discretize { input, r, m, out } => discretize(config, manifest, &input, r, m, &out),
        Cmd::Kuratowski { input, recentered, out } => {
            kuratowski(config, manifest, &input, recentered, &out)
        }
        Cmd::Round { input, out } => round(config, manifest, &input, &out),
        Cmd::Type { input, p, mode, count, seed, out } => {
            rademacher(config, manifest, &input, p, mode, count, seed, &out, false)
        }
        Cmd::Cotype { input, q, mode, count, seed, out } => {
            rademacher(config, manifest, &input, q, mode, count, seed, &out, true)
        }
        Cmd::MetricType { map, images, n, p, out } => {
            metric_type(config, manifest, map, images.as_deref(), n, p, &out)
        }
        Cmd::MetricCotype { map, images, n, m, q, mode, count, seed, out } => metric_cotype(
            config,
            manifest,
            map,
            images.as_deref(),
            n,
            m,
            q,
            mode,
            count,
            seed,
            &out,
        ),
        Cmd::Sigma { s, m, q, out } => sigma(config, manifest, s, m, q, &out),
        Cmd::Profile { space, out } => profile(config, manifest, space, &out),
        Cmd::Conditions { r, s, p, q, out } => conditions(config, manifest, r, s, p, q, &out),
        Cmd::Verdict { r, p, s, q, out } => verdict(config, manifest, r, p, s, q, &out),
        Cmd::Theta { input, base, p, q, c, d, out } => {
            theta_cmd(config, manifest, &input, base, p, q, c, d, &out)
        }
        Cmd::ScaleFamily { p, q, c, d, horizon, out } => {
            scale_family(config, manifest, p, q, c, d, horizon, &out)
        }
        Cmd::VerifyFamily {
            base,
            p,
            q,
            c,
            d,
            constant_a,
            big_c,
            small_d,
            indices,
            samples,
            dim,
            lo,
            hi,
            seed,
            out,
        } => verify_family(
            config, manifest, base, p, q, c, d, constant_a, big_c, small_d, indices, samples,
            dim, lo, hi, seed, &out,
        ),
        Cmd::PartialSums { plant, p, horizon, out } => {
            partial_sums(config, manifest, plant, p, horizon, &out)
        }
        Cmd::Window { input, per_unit, out } => window(config, manifest, &input, per_unit, &out),
        Cmd::Brute { input, dim, p, alpha, resolution, radius, budget, out } => {
            brute(config, manifest, &input, dim, p, alpha, resolution, radius, budget, &out)
        }
        Cmd::Search { input, dim, p, alpha, restarts, iterations, seed, out } => search(
            config, manifest, &input, dim, p, alpha, restarts, iterations, seed, &out,
        ),
        Cmd::Obstruction {
            n_values,
            p_src,
            p_tgt,
            alpha,
            identity_candidate,
            restarts,
            iterations,
            seed,
            out,
        } => obstruction(
            config,
            manifest,
            n_values,
            p_src,
            p_tgt,
            alpha,
            identity_candidate,
            restarts,
            iterations,
            seed,
            &out,
        ),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(CliError::from)
}

/// "identity", "line-map:ALPHA", or a path to a tabulated-map JSON file.
fn load_point_map(spec: &str, ctx: &mut RunContext) -> CliResult<Box<dyn PointMap>> {
    if spec == "identity" {
        return Ok(Box::new(FnPointMap::identity()));
    }
    if let Some(raw) = spec.strip_prefix("line-map:") {
        let alpha: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad line-map exponent {raw:?}")))?;
        let dim = holder_line_map(alpha, 0.0)?.len();
        return Ok(Box::new(FnPointMap::new(dim, move |t| {
            holder_line_map(alpha, t).expect("line map evaluation")
        })));
    }
    let text = ctx.read_input(Path::new(spec))?;
    let map: TabulatedMap = parse_json(&text)?;
    Ok(Box::new(map))
}

fn curve(
    config: Option<&Path>,
    manifest: Option<&Path>,
    r: Option<f64>,
    samples: Option<usize>,
    depth: Option<u32>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["r", "samples", "depth"])?;
    let mut ctx = RunContext::new("curve", Some(out), manifest);
    let r = cfg.f64("r", r, 0.3)?;
    let samples = cfg.usize("samples", samples, 1000)?;
    let depth = cfg.u32("depth", depth, DEFAULT_DEPTH)?;
    if samples == 0 {
        return Err(CliError::Validation("samples must be positive".into()));
    }
    let params = KochParams::new(r)?;
    let rows = (0..=samples).map(|i| {
        let t = i as f64 / samples as f64;
        let (x, y) = koch_eval(&params, t, depth).expect("t in [0,1]");
        vec![t, x, y]
    });
    ctx.write_output(out, &csv_table("t,x,y", rows))?;
    ctx.finish(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    config: Option<&Path>,
    manifest: Option<&Path>,
    r: Option<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
    max_steps: Option<u32>,
    depth: Option<u32>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["r", "t-min", "t-max", "samples", "max-steps", "depth"])?;
    let mut ctx = RunContext::new("extend", Some(out), manifest);
    let r = cfg.f64("r", r, 0.3)?;
    let t_min = cfg.f64("t-min", t_min, -12.0)?;
    let t_max = cfg.f64("t-max", t_max, 4.0)?;
    let samples = cfg.usize("samples", samples, 1000)?;
    let max_steps = cfg.u32("max-steps", max_steps, DEFAULT_MAX_STEPS)?;
    let depth = cfg.u32("depth", depth, DEFAULT_DEPTH)?;
    if samples == 0 || !(t_min < t_max) {
        return Err(CliError::Validation("need samples > 0 and t-min < t-max".into()));
    }
    let params = KochParams::new(r)?;
    let mut rows = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = t_min + (t_max - t_min) * i as f64 / samples as f64;
        let (x, y) = koch_extend(&params, t, max_steps, depth)?;
        rows.push(vec![t, x, y]);
    }
    ctx.write_output(out, &csv_table("t,x,y", rows))?;
    ctx.finish(&cfg)
}

fn line_map(
    config: Option<&Path>,
    manifest: Option<&Path>,
    alpha: Option<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["alpha", "t-min", "t-max", "samples"])?;
    let mut ctx = RunContext::new("line-map", Some(out), manifest);
    let alpha = cfg.f64("alpha", alpha, 0.75)?;
    let t_min = cfg.f64("t-min", t_min, 0.0)?;
    let t_max = cfg.f64("t-max", t_max, 1.0)?;
    let samples = cfg.usize("samples", samples, 1000)?;
    if samples == 0 || !(t_min < t_max) {
        return Err(CliError::Validation("need samples > 0 and t-min < t-max".into()));
    }
    let dim = holder_line_map(alpha, t_min)?.len();
    let header = std::iter::once("t".to_string())
        .chain((0..dim).map(|k| format!("x{k}")))
        .collect::<Vec<_>>()
        .join(",");
    let mut rows = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = t_min + (t_max - t_min) * i as f64 / samples as f64;
        let mut row = vec![t];
        row.extend(holder_line_map(alpha, t)?);
        rows.push(row);
    }
    ctx.write_output(out, &csv_table(&header, rows))?;
    ctx.finish(&cfg)
}

fn lift_lr_cmd(
    config: Option<&Path>,
    manifest: Option<&Path>,
    map: Option<String>,
    input: &Path,
    r: Option<f64>,
    s: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["map", "r", "s"])?;
    let mut ctx = RunContext::new("lift-lr", Some(out), manifest);
    let map_spec = cfg.string("map", map, "identity")?;
    let r = cfg.f64("r", r, 2.0)?;
    let s = cfg.f64("s", s, 2.0)?;
    let map = load_point_map(&map_spec, &mut ctx)?;
    let values: Vec<f64> = parse_json(&ctx.read_input(input)?)?;
    let f = StepFunction::new(values)?;
    let lifted = lift_lr(map.as_ref(), &f, r, s)?;
    ctx.write_output(out, &to_pretty_json(&lifted.values().to_vec())?)?;
    ctx.finish(&cfg)
}

fn lift_c0_cmd(
    config: Option<&Path>,
    manifest: Option<&Path>,
    map: Option<String>,
    input: &Path,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["map"])?;
    let mut ctx = RunContext::new("lift-c0", Some(out), manifest);
    let map_spec = cfg.string("map", map, "identity")?;
    let map = load_point_map(&map_spec, &mut ctx)?;
    let x: Vec<f64> = parse_json(&ctx.read_input(input)?)?;
    let lifted = lift_c0(map.as_ref(), &x)?;
    ctx.write_output(out, &to_pretty_json(&lifted)?)?;
    ctx.finish(&cfg)
}

#[derive(Serialize)]
struct DiscretizeOutput {
    scale_exponent: f64,
    /// Least sample count for which the coarse-grid sandwich is certified.
    sandwich_threshold: usize,
    vectors: Vec<Vec<f64>>,
}

fn discretize(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    r: Option<f64>,
    m: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["r", "m"])?;
    let mut ctx = RunContext::new("discretize", Some(out), manifest);
    let r = cfg.f64("r", r, 2.0)?;
    let m = cfg.usize("m", m, 64)?;
    let families: Vec<Vec<f64>> = parse_json(&ctx.read_input(input)?)?;
    let family: Vec<StepFunction> = families
        .into_iter()
        .map(StepFunction::new)
        .collect::<Result<_, _>>()?;
    let vectors = discretize_lr(&family, r, m)?;
    let sandwich_threshold = discretize_threshold(&family, r).unwrap_or(1);
    let output = DiscretizeOutput {
        scale_exponent: r,
        sandwich_threshold,
        vectors: vectors.iter().map(|v| v.coords().to_vec()).collect(),
    };
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

fn kuratowski(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    recentered: Option<bool>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["recentered"])?;
    let mut ctx = RunContext::new("kuratowski", Some(out), manifest);
    let recentered = cfg.bool("recentered", recentered, false)?;
    let space: FiniteMetricSpace = parse_json(&ctx.read_input(input)?)?;
    let table = kuratowski_embed(&space, recentered)?;
    ctx.write_output(out, &to_pretty_json(&table)?)?;
    ctx.finish(&cfg)
}

fn round(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    out: &Path,
) -> CliResult<()> {
    let cfg = Resolver::new(config, &[])?;
    let mut ctx = RunContext::new("round", Some(out), manifest);
    let x: Vec<f64> = parse_json(&ctx.read_input(input)?)?;
    let rounded = dyadic_round(&x)?;
    ctx.write_output(out, &to_pretty_json(&rounded)?)?;
    ctx.finish(&cfg)
}

#[derive(Deserialize)]
struct VectorFamilyInput {
    p: f64,
    vectors: Vec<Vec<f64>>,
}

fn parse_mode(mode: &str, count: usize, seed: u64) -> CliResult<SampleMode> {
    match mode {
        "exact" => Ok(SampleMode::Exact),
        "sampled" => Ok(SampleMode::Sampled { seed, count }),
        other => Err(CliError::Validation(format!(
            "mode must be \"exact\" or \"sampled\", got {other:?}"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn rademacher(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    exponent: Option<f64>,
    mode: Option<String>,
    count: Option<usize>,
    seed: Option<u64>,
    out: &Path,
    cotype: bool,
) -> CliResult<()> {
    let exp_key = if cotype { "q" } else { "p" };
    let mut cfg = Resolver::new(config, &[exp_key, "mode", "count", "seed"])?;
    let name = if cotype { "cotype" } else { "type" };
    let mut ctx = RunContext::new(name, Some(out), manifest);
    let exponent = cfg.f64(exp_key, exponent, 2.0)?;
    let mode_name = cfg.string("mode", mode, "exact")?;
    let count = cfg.usize("count", count, 10_000)?;
    let seed = cfg.u64("seed", seed, 0)?;
    ctx.seed = seed;
    let mode = parse_mode(&mode_name, count, seed)?;
    let family: VectorFamilyInput = parse_json(&ctx.read_input(input)?)?;
    let vectors: Vec<PNormVector> = family
        .vectors
        .into_iter()
        .map(|c| PNormVector::new(c, family.p))
        .collect::<Result<_, _>>()?;
    let estimate = if cotype {
        rademacher_cotype_ratio(&vectors, exponent, mode)?
    } else {
        rademacher_type_ratio(&vectors, exponent, mode)?
    };
    ctx.write_output(out, &to_pretty_json(&estimate)?)?;
    ctx.finish(&cfg)
}

#[derive(Deserialize)]
struct ImagesInput {
    p: f64,
    images: Vec<Vec<f64>>,
}

fn metric_type(
    config: Option<&Path>,
    manifest: Option<&Path>,
    map: Option<String>,
    images: Option<&Path>,
    n: Option<u32>,
    p: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["map", "n", "p"])?;
    let mut ctx = RunContext::new("metric-type", Some(out), manifest);
    let map_spec = cfg.string("map", map, "identity-lp:2")?;
    let n = cfg.u32("n", n, 3)?;
    let p = cfg.f64("p", p, 2.0)?;
    let cube = if let Some(path) = images {
        let input: ImagesInput = parse_json(&ctx.read_input(path)?)?;
        let vectors = input
            .images
            .into_iter()
            .map(|c| PNormVector::new(c, input.p))
            .collect::<Result<_, _>>()?;
        HypercubeMap::new(n, vectors)?
    } else if let Some(raw) = map_spec.strip_prefix("identity-lp:") {
        let vector_p: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad identity-lp exponent {raw:?}")))?;
        HypercubeMap::identity(n, vector_p)?
    } else {
        return Err(CliError::Validation(format!(
            "map must be \"identity-lp:P\" or --images must be given, got {map_spec:?}"
        )));
    };
    let value = metric_type_ratio(&cube, p)?;
    ctx.write_output(out, &to_pretty_json(&serde_json::json!({ "value": value }))?)?;
    ctx.finish(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn metric_cotype(
    config: Option<&Path>,
    manifest: Option<&Path>,
    map: Option<String>,
    images: Option<&Path>,
    n: Option<u32>,
    m: Option<u32>,
    q: Option<f64>,
    mode: Option<String>,
    count: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["map", "n", "m", "q", "mode", "count", "seed", "alpha"])?;
    let mut ctx = RunContext::new("metric-cotype", Some(out), manifest);
    let map_spec = cfg.string("map", map, "sigma")?;
    let n = cfg.u32("n", n, 1)?;
    let m = cfg.u32("m", m, 4)?;
    let q = cfg.f64("q", q, 2.0)?;
    let mode_name = cfg.string("mode", mode, "exact")?;
    let count = cfg.usize("count", count, 10_000)?;
    let seed = cfg.u64("seed", seed, 0)?;
    ctx.seed = seed;
    let mode = parse_mode(&mode_name, count, seed)?;
    let grid = if let Some(path) = images {
        let input: ImagesInput = parse_json(&ctx.read_input(path)?)?;
        let vectors = input
            .images
            .into_iter()
            .map(|c| PNormVector::new(c, input.p))
            .collect::<Result<_, _>>()?;
        GridMap::dense(n, m, vectors, GridMetric::VectorNorm)?
    } else if map_spec == "sigma" {
        GridMap::sigma(n, m, q)?
    } else if let Some(raw) = map_spec.strip_prefix("identity-lp:") {
        let vector_p: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad identity-lp exponent {raw:?}")))?;
        GridMap::identity(n, m, vector_p)?
    } else if let Some(raw) = map_spec.strip_prefix("koch-composite:") {
        let alpha: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad koch-composite exponent {raw:?}")))?;
        GridMap::koch_composite(n, m, q, alpha)?
    } else {
        return Err(CliError::Validation(format!(
            "map must be \"sigma\", \"identity-lp:P\" or \"koch-composite:ALPHA\", got {map_spec:?}"
        )));
    };
    let estimate = metric_cotype_ratio(&grid, q, mode)?;
    ctx.write_output(out, &to_pretty_json(&estimate)?)?;
    ctx.finish(&cfg)
}

fn sigma(
    config: Option<&Path>,
    manifest: Option<&Path>,
    s: Option<String>,
    m: Option<u32>,
    q: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["s", "m", "q"])?;
    let mut ctx = RunContext::new("sigma", Some(out), manifest);
    let s_raw = cfg.string("s", s, "0")?;
    let m = cfg.u32("m", m, 4)?;
    let q = cfg.f64("q", q, 2.0)?;
    let s: Vec<u32> = s_raw
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("bad torus coordinate {tok:?}")))
        })
        .collect::<CliResult<_>>()?;
    let point = sigma_embed(&s, m, q)?;
    // per-coordinate distance to the half-shifted point (2 exactly when m
    // is even)
    let half_shifts: Vec<f64> = (0..s.len())
        .map(|j| {
            let mut shifted = s.clone();
            shifted[j] = (shifted[j] + m / 2) % m;
            let other = sigma_embed(&shifted, m, q)?;
            let a = &point.coords()[2 * j..2 * j + 2];
            let b = &other.coords()[2 * j..2 * j + 2];
            Ok(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt())
        })
        .collect::<CliResult<_>>()?;
    let output = serde_json::json!({
        "coords": point.coords(),
        "half_shift_per_coordinate_distance": half_shifts,
    });
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

/// "lp:R", "Lp:R", "c0", "seq:Q:<inner>".
fn parse_descriptor(spec: &str) -> CliResult<SpaceDescriptor> {
    if spec == "c0" {
        return Ok(SpaceDescriptor::C0);
    }
    if let Some(raw) = spec.strip_prefix("lp:") {
        let r: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad lp exponent {raw:?}")))?;
        return Ok(SpaceDescriptor::SmallLp(r));
    }
    if let Some(raw) = spec.strip_prefix("Lp:") {
        let r: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad Lp exponent {raw:?}")))?;
        return Ok(SpaceDescriptor::BigLp(r));
    }
    if let Some(rest) = spec.strip_prefix("seq:") {
        let (q_raw, inner) = rest.split_once(':').ok_or_else(|| {
            CliError::Validation(format!("seq descriptor needs seq:Q:<inner>, got {spec:?}"))
        })?;
        let q: f64 = q_raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad seq exponent {q_raw:?}")))?;
        return Ok(SpaceDescriptor::SeqOver(q, Box::new(parse_descriptor(inner)?)));
    }
    Err(CliError::Validation(format!(
        "space must be \"lp:R\", \"Lp:R\", \"c0\" or \"seq:Q:<inner>\", got {spec:?}"
    )))
}

fn profile(
    config: Option<&Path>,
    manifest: Option<&Path>,
    space: Option<String>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["space"])?;
    let mut ctx = RunContext::new("profile", Some(out), manifest);
    let spec = cfg.string("space", space, "lp:2")?;
    let descriptor = parse_descriptor(&spec)?;
    let profile = space_profile(&descriptor)?;
    let q_inf = if profile.q_inf.is_infinite() {
        serde_json::Value::String("inf".into())
    } else {
        serde_json::json!(profile.q_inf)
    };
    let output = serde_json::json!({ "p_sup": profile.p_sup, "q_inf": q_inf });
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

fn conditions(
    config: Option<&Path>,
    manifest: Option<&Path>,
    r: Option<f64>,
    s: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["r", "s", "p", "q"])?;
    let mut ctx = RunContext::new("conditions", Some(out), manifest);
    let r = cfg.f64("r", r, 1.0)?;
    let s = cfg.f64("s", s, 1.0)?;
    let p = cfg.f64("p", p, 1.0)?;
    let q = cfg.f64("q", q, 2.0)?;
    let (c1, c2, c3) = necessary_conditions(r, s, p, q)?;
    let output = serde_json::json!({
        "exponent_order": c1,
        "modulus_comparison": c2,
        "cotype_comparison": c3,
    });
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

fn verdict(
    config: Option<&Path>,
    manifest: Option<&Path>,
    r: Option<f64>,
    p: Option<f64>,
    s: Option<f64>,
    q: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["r", "p", "s", "q"])?;
    let mut ctx = RunContext::new("verdict", Some(out), manifest);
    let r = cfg.f64("r", r, 1.0)?;
    let p = cfg.f64("p", p, 1.0)?;
    let s = cfg.f64("s", s, 1.0)?;
    let q = cfg.f64("q", q, 2.0)?;
    let reducible = iff_verdict(r, p, s, q)?;
    println!("reducible: {reducible}");
    ctx.write_output(out, &to_pretty_json(&serde_json::json!({ "reducible": reducible }))?)?;
    ctx.finish(&cfg)
}

fn base_map(spec: &str) -> CliResult<Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>> {
    if spec == "identity" {
        return Ok(Arc::new(|u: &[f64]| u.to_vec()));
    }
    if let Some(raw) = spec.strip_prefix("line-map:") {
        let alpha: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad line-map exponent {raw:?}")))?;
        holder_line_map(alpha, 0.0)?;
        return Ok(Arc::new(move |u: &[f64]| {
            u.iter()
                .flat_map(|&t| holder_line_map(alpha, t).expect("line map evaluation"))
                .collect()
        }));
    }
    Err(CliError::Validation(format!(
        "base must be \"identity\" or \"line-map:ALPHA\", got {spec:?}"
    )))
}

#[derive(Serialize)]
struct ThetaOutput {
    flat_x: Vec<f64>,
    flat_y: Vec<f64>,
    flat_power_sum: f64,
    block_power_sum: f64,
}

#[allow(clippy::too_many_arguments)]
fn theta_cmd(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    base: Option<String>,
    p: Option<f64>,
    q: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["base", "p", "q", "c", "d"])?;
    let mut ctx = RunContext::new("theta", Some(out), manifest);
    let base_spec = cfg.string("base", base, "identity")?;
    let p = cfg.f64("p", p, 2.0)?;
    let q = cfg.f64("q", q, 2.0)?;
    let c = cfg.f64("c", c, 1.0)?;
    let d = cfg.f64("d", d, 1.0)?;
    let pair: SequencePair = parse_json(&ctx.read_input(input)?)?;
    let pair = SequencePair::new(pair.x, pair.y, pair.entry_p)?;
    let family = scaled_family(base_map(&base_spec)?, p, q, c, d, 1.0, 1e9, 0.0)?;
    let bx = theta(&family, &pair.x)?;
    let by = theta(&family, &pair.y)?;
    let flat_x = flatten_blocks(&bx);
    let flat_y = flatten_blocks(&by);
    let output = ThetaOutput {
        flat_power_sum: flat_diff_power_sum(&flat_x, &flat_y, q),
        block_power_sum: block_diff_power_sum(&bx, &by, q),
        flat_x,
        flat_y,
    };
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

fn scale_family(
    config: Option<&Path>,
    manifest: Option<&Path>,
    p: Option<f64>,
    q: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    horizon: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["p", "q", "c", "d", "horizon"])?;
    let mut ctx = RunContext::new("scale-family", Some(out), manifest);
    let p = cfg.f64("p", p, 2.0)?;
    let q = cfg.f64("q", q, 2.0)?;
    let c = cfg.f64("c", c, 1.0)?;
    let d = cfg.f64("d", d, 1.0)?;
    let horizon = cfg.usize("horizon", horizon, 64)?;
    if horizon == 0 {
        return Err(CliError::Validation("horizon must be positive".into()));
    }
    let family = scaled_family(Arc::new(|u: &[f64]| u.to_vec()), p, q, c, d, 1.0, 1e9, 0.0)?;
    let rows = (0..horizon).map(|n| vec![n as f64, (family.eps)(n), (family.delta)(n)]);
    ctx.write_output(out, &csv_table("n,eps,delta", rows))?;
    ctx.finish(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn verify_family(
    config: Option<&Path>,
    manifest: Option<&Path>,
    base: Option<String>,
    p: Option<f64>,
    q: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    constant_a: Option<f64>,
    big_c: Option<f64>,
    small_d: Option<f64>,
    indices: Option<usize>,
    samples: Option<usize>,
    dim: Option<usize>,
    lo: Option<f64>,
    hi: Option<f64>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(
        config,
        &[
            "base", "p", "q", "c", "d", "constant-a", "big-c", "small-d", "indices", "samples",
            "dim", "lo", "hi", "seed",
        ],
    )?;
    let mut ctx = RunContext::new("verify-family", Some(out), manifest);
    let base_spec = cfg.string("base", base, "identity")?;
    let p = cfg.f64("p", p, 2.0)?;
    let q = cfg.f64("q", q, 2.0)?;
    let c = cfg.f64("c", c, 1.0)?;
    let d = cfg.f64("d", d, 1.0)?;
    let constant_a = cfg.f64("constant-a", constant_a, 1.0 + 1e-9)?;
    let big_c = cfg.f64("big-c", big_c, 1e6)?;
    let small_d = cfg.f64("small-d", small_d, 0.5)?;
    let indices = cfg.usize("indices", indices, 16)?;
    let samples = cfg.usize("samples", samples, DEFAULT_SAMPLES_PER_INDEX)?;
    let dim = cfg.usize("dim", dim, 1)?;
    let lo = cfg.f64("lo", lo, -4.0)?;
    let hi = cfg.f64("hi", hi, 4.0)?;
    let seed = cfg.u64("seed", seed, 0)?;
    ctx.seed = seed;
    let family = scaled_family(base_map(&base_spec)?, p, q, c, d, constant_a, big_c, small_d)?;
    let report =
        verify_reduction_conditions(&family, p, q, indices, samples, dim, (lo, hi), seed)?;
    ctx.write_output(out, &to_pretty_json(&report)?)?;
    ctx.finish(&cfg)
}

fn partial_sums(
    config: Option<&Path>,
    manifest: Option<&Path>,
    plant: Option<String>,
    p: Option<f64>,
    horizon: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["plant", "p", "horizon"])?;
    let mut ctx = RunContext::new("partial-sums", Some(out), manifest);
    let plant = cfg.string("plant", plant, "geometric:0.5")?;
    let p = cfg.f64("p", p, 1.0)?;
    let horizon = cfg.usize("horizon", horizon, DEFAULT_HORIZON)?;
    if horizon == 0 {
        return Err(CliError::Validation("horizon must be positive".into()));
    }
    let distances: Vec<f64> = if let Some(raw) = plant.strip_prefix("geometric:") {
        let ratio: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad geometric ratio {raw:?}")))?;
        (0..horizon).map(|n| ratio.powi(n as i32)).collect()
    } else if let Some(raw) = plant.strip_prefix("power:") {
        let e: f64 = raw
            .parse()
            .map_err(|_| CliError::Validation(format!("bad power exponent {raw:?}")))?;
        (1..=horizon).map(|n| (n as f64).powf(-e)).collect()
    } else {
        return Err(CliError::Validation(format!(
            "plant must be \"geometric:RATIO\" or \"power:EXPONENT\", got {plant:?}"
        )));
    };
    let trace = ep_partial_sums(&distances, p)?;
    let rows = trace
        .iter()
        .enumerate()
        .map(|(i, &s)| vec![(i + 1) as f64, s]);
    ctx.write_output(out, &csv_table("n,s_n", rows))?;
    ctx.finish(&cfg)
}

fn window(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    per_unit: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(config, &["per-unit"])?;
    let mut ctx = RunContext::new("window", Some(out), manifest);
    let per_unit = cfg.usize("per-unit", per_unit, 100)?;
    let samples: Vec<f64> = parse_json(&ctx.read_input(input)?)?;
    let windows = snowflake_core::reductions::theta_window(&samples, per_unit)?;
    let output: Vec<Vec<f64>> = windows.iter().map(|w| w.values().to_vec()).collect();
    ctx.write_output(out, &to_pretty_json(&output)?)?;
    ctx.finish(&cfg)
}

#[derive(Serialize)]
struct BruteOutput {
    constant_a: f64,
    table: snowflake_core::spaces::EmbeddingTable,
}

#[allow(clippy::too_many_arguments)]
fn brute(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    dim: Option<usize>,
    p: Option<f64>,
    alpha: Option<f64>,
    resolution: Option<f64>,
    radius: Option<f64>,
    budget: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(
        config,
        &["dim", "p", "alpha", "resolution", "radius", "budget"],
    )?;
    let mut ctx = RunContext::new("brute", Some(out), manifest);
    let dim = cfg.usize("dim", dim, 2)?;
    let p = cfg.f64("p", p, 2.0)?;
    let alpha = cfg.f64("alpha", alpha, 1.0)?;
    let resolution = cfg.f64("resolution", resolution, 0.05)?;
    let radius = cfg.f64("radius", radius, 0.0)?;
    let budget = cfg.u64("budget", budget, 100_000_000)?;
    let space: FiniteMetricSpace = parse_json(&ctx.read_input(input)?)?;
    let search_cfg = SearchConfig {
        target_dim: dim,
        target_p: p,
        alpha,
        grid_resolution: resolution,
        grid_radius: if radius > 0.0 { Some(radius) } else { None },
        budget: budget as u128,
        ..Default::default()
    };
    let (constant_a, table) = brute_min_distortion(&space, &search_cfg)?;
    ctx.write_output(out, &to_pretty_json(&BruteOutput { constant_a, table })?)?;
    ctx.finish(&cfg)
}

#[derive(Serialize)]
struct SearchOutput {
    report: snowflake_core::spaces::DistortionReport,
    table: snowflake_core::spaces::EmbeddingTable,
}

#[allow(clippy::too_many_arguments)]
fn search(
    config: Option<&Path>,
    manifest: Option<&Path>,
    input: &Path,
    dim: Option<usize>,
    p: Option<f64>,
    alpha: Option<f64>,
    restarts: Option<usize>,
    iterations: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(
        config,
        &["dim", "p", "alpha", "restarts", "iterations", "seed"],
    )?;
    let mut ctx = RunContext::new("search", Some(out), manifest);
    let dim = cfg.usize("dim", dim, 2)?;
    let p = cfg.f64("p", p, 2.0)?;
    let alpha = cfg.f64("alpha", alpha, 1.0)?;
    let restarts = cfg.usize("restarts", restarts, 32)?;
    let iterations = cfg.usize("iterations", iterations, 10_000)?;
    let seed = cfg.u64("seed", seed, 0)?;
    ctx.seed = seed;
    let space: FiniteMetricSpace = parse_json(&ctx.read_input(input)?)?;
    let search_cfg = SearchConfig {
        target_dim: dim,
        target_p: p,
        alpha,
        restarts,
        iterations,
        seed,
        ..Default::default()
    };
    let (report, table) = local_min_distortion(&space, &search_cfg)?;
    ctx.write_output(out, &to_pretty_json(&SearchOutput { report, table })?)?;
    ctx.finish(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn obstruction(
    config: Option<&Path>,
    manifest: Option<&Path>,
    n_values: Option<String>,
    p_src: Option<f64>,
    p_tgt: Option<f64>,
    alpha: Option<f64>,
    identity_candidate: Option<bool>,
    restarts: Option<usize>,
    iterations: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let mut cfg = Resolver::new(
        config,
        &[
            "n-values",
            "p-src",
            "p-tgt",
            "alpha",
            "identity-candidate",
            "restarts",
            "iterations",
            "seed",
        ],
    )?;
    let mut ctx = RunContext::new("obstruction", Some(out), manifest);
    let n_raw = cfg.string("n-values", n_values, "1,2,3")?;
    let p_src = cfg.f64("p-src", p_src, 2.0)?;
    let p_tgt = cfg.f64("p-tgt", p_tgt, 2.0)?;
    let alpha = cfg.f64("alpha", alpha, 1.0)?;
    let identity_candidate = cfg.bool("identity-candidate", identity_candidate, true)?;
    let restarts = cfg.usize("restarts", restarts, 8)?;
    let iterations = cfg.usize("iterations", iterations, 2_000)?;
    let seed = cfg.u64("seed", seed, 0)?;
    ctx.seed = seed;
    let ns: Vec<u32> = n_raw
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("bad hypercube dimension {tok:?}")))
        })
        .collect::<CliResult<_>>()?;
    let experiment_cfg = ObstructionConfig {
        search: SearchConfig {
            restarts,
            iterations,
            seed,
            ..Default::default()
        },
        identity_candidate,
    };
    let rows = hypercube_obstruction_experiment(&ns, p_src, p_tgt, alpha, &experiment_cfg)?;
    let csv_rows = rows.iter().map(|row| {
        vec![
            row.n as f64,
            row.measured_a,
            row.a_squared,
            row.source_metric_type_ratio,
            row.growth,
        ]
    });
    ctx.write_output(
        out,
        &csv_table("n,measured_a,a_squared,source_metric_type_ratio,growth", csv_rows),
    )?;
    ctx.finish(&cfg)
}
