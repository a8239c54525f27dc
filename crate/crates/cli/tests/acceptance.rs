//! End-to-end acceptance gate: one test per release criterion, each
//! printing a single `criterion N: PASS` line when it holds. The criteria
//! exercise the library through its public API and the binary through its
//! command-line surface.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use snowflake_core::embeddings::{
    holder_line_map, koch_eval, koch_extend, lift_lr, discretize_lr, discretize_threshold,
    FnPointMap, KochParams, PointMap, DEFAULT_DEPTH, DEFAULT_MAX_STEPS,
};
use snowflake_core::reductions::{ep_partial_sums, scaled_family};
use snowflake_core::search::{
    brute_min_distortion, local_min_distortion, path_alpha_bound_check, path_space, SearchConfig,
};
use snowflake_core::spaces::{lr_distance, FiniteMetricSpace, PNormVector, StepFunction};
use snowflake_core::typecotype::{
    iff_verdict, metric_cotype_ratio, metric_type_ratio, necessary_conditions, rademacher_type_ratio,
    sigma_embed, space_profile, GridMap, HypercubeMap, SampleMode, SpaceDescriptor,
};
use snowflake_core::util::{fit_slope, mul_pow2, SplitMix64};

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn criterion_01_curve_anchor_points() {
    for r in [0.30, 0.35, 0.45] {
        let params = KochParams::new(r).unwrap();
        let h = (r * r - (0.5 - r) * (0.5 - r)).sqrt();
        let anchors = [
            (0.0, (0.0, 0.0)),
            (0.25, (r, 0.0)),
            (0.5, (0.5, h)),
            (0.75, (1.0 - r, 0.0)),
            (1.0, (1.0, 0.0)),
        ];
        for (t, (ex, ey)) in anchors {
            let (x, y) = koch_eval(&params, t, DEFAULT_DEPTH).unwrap();
            assert!(
                (x - ex).abs() <= 1e-12 && (y - ey).abs() <= 1e-12,
                "r = {r}, t = {t}: got ({x}, {y}), expected ({ex}, {ey})"
            );
        }
    }
    println!("criterion 1: PASS");
}

#[test]
fn criterion_02_self_similarity_and_extension() {
    for r in [0.30, 0.45] {
        let params = KochParams::new(r).unwrap();
        let mut rng = SplitMix64::new(2);

        // first-quarter self-similarity on [0, 1]
        for _ in 0..1000 {
            let t = rng.next_f64();
            let (qx, qy) = koch_eval(&params, t / 4.0, DEFAULT_DEPTH).unwrap();
            let (x, y) = koch_eval(&params, t, DEFAULT_DEPTH).unwrap();
            assert!(
                (qx - r * x).abs() <= 1e-10 && (qy - r * y).abs() <= 1e-10,
                "self-similarity fails at r = {r}, t = {t}"
            );
        }

        // first extension step: the map on [0, 4] rescales the curve
        let step1 = |t: f64| {
            let (x, y) = koch_eval(&params, t / 4.0, DEFAULT_DEPTH).unwrap();
            (x / r, y / r)
        };
        for _ in 0..1000 {
            let t = rng.range_f64(0.0, 4.0);
            let (x, y) = koch_extend(&params, t, DEFAULT_MAX_STEPS, DEFAULT_DEPTH).unwrap();
            let (ex, ey) = step1(t);
            assert!(
                (x - ex).abs() <= 1e-10 && (y - ey).abs() <= 1e-10,
                "first extension step fails at r = {r}, t = {t}"
            );
        }

        // second extension step on [-12, 4]: rescale the first step and
        // translate so the origin stays fixed
        let shift = 1.0 / (r * r) - 1.0 / r;
        for _ in 0..1000 {
            let t = rng.range_f64(-12.0, 4.0);
            let (x, y) = koch_extend(&params, t, DEFAULT_MAX_STEPS, DEFAULT_DEPTH).unwrap();
            let (sx, sy) = step1((t + 12.0) / 4.0);
            let (ex, ey) = (sx / r - shift, sy / r);
            assert!(
                (x - ex).abs() <= 1e-10 && (y - ey).abs() <= 1e-10,
                "second extension step fails at r = {r}, t = {t}: got ({x}, {y}), expected ({ex}, {ey})"
            );
        }
    }
    println!("criterion 2: PASS");
}

fn regression_slope(mut dist: impl FnMut(f64, f64) -> f64, pairs: usize, seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut xs = Vec::with_capacity(pairs);
    let mut ys = Vec::with_capacity(pairs);
    while xs.len() < pairs {
        let t1 = rng.next_f64();
        let t2 = rng.next_f64();
        if t1 == t2 {
            continue;
        }
        xs.push((t1 - t2).abs().ln());
        ys.push(dist(t1, t2).ln());
    }
    fit_slope(&xs, &ys)
}

#[test]
fn criterion_03_holder_exponent_recovery() {
    let params = KochParams::new(0.3).unwrap();
    let slope = regression_slope(
        |t1, t2| {
            let a = koch_eval(&params, t1, DEFAULT_DEPTH).unwrap();
            let b = koch_eval(&params, t2, DEFAULT_DEPTH).unwrap();
            ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
        },
        10_000,
        3,
    );
    assert!(
        (slope - params.alpha).abs() <= 0.02,
        "curve slope {slope} vs exponent {}",
        params.alpha
    );

    for alpha in [0.75, 0.3] {
        let slope = regression_slope(
            |t1, t2| {
                let a = holder_line_map(alpha, t1).unwrap();
                let b = holder_line_map(alpha, t2).unwrap();
                euclid(&a, &b)
            },
            10_000,
            3,
        );
        assert!(
            (slope - alpha).abs() <= 0.02,
            "line-map slope {slope} vs exponent {alpha}"
        );
    }
    println!("criterion 3: PASS");
}

#[test]
fn criterion_04_hypercube_identity_metric_type() {
    for n in 1..=10u32 {
        let l2 = HypercubeMap::identity(n, 2.0).unwrap();
        let ratio = metric_type_ratio(&l2, 2.0).unwrap();
        assert!((ratio - 1.0).abs() <= 1e-9, "l2 identity, n = {n}: {ratio}");

        let l1 = HypercubeMap::identity(n, 1.0).unwrap();
        let ratio = metric_type_ratio(&l1, 1.0).unwrap();
        assert!((ratio - 1.0).abs() <= 1e-9, "l1 identity, n = {n}: {ratio}");
    }
    println!("criterion 4: PASS");
}

#[test]
fn criterion_05_rademacher_exact_values() {
    let ones: Vec<PNormVector> = (0..4)
        .map(|_| PNormVector::new(vec![1.0], 1.0).unwrap())
        .collect();
    let est = rademacher_type_ratio(&ones, 1.0, SampleMode::Exact).unwrap();
    assert_eq!(est.value, 0.375, "four repeated scalar units at p = 1");

    let basis: Vec<PNormVector> = (0..4)
        .map(|k| {
            let mut c = vec![0.0; 4];
            c[k] = 1.0;
            PNormVector::new(c, 2.0).unwrap()
        })
        .collect();
    let est = rademacher_type_ratio(&basis, 2.0, SampleMode::Exact).unwrap();
    assert!((est.value - 1.0).abs() <= 1e-12, "orthonormal basis at p = 2");
    println!("criterion 5: PASS");
}

#[test]
fn criterion_06_metric_cotype_exact_value_and_half_shift() {
    let map = GridMap::identity(1, 2, 2.0).unwrap();
    let est = metric_cotype_ratio(&map, 2.0, SampleMode::Exact).unwrap();
    let expected = (1.5f64).sqrt() / 2.0;
    assert!(
        (est.value - expected).abs() <= 1e-12,
        "two-point circle identity: {} vs {expected}",
        est.value
    );

    let mut rng = SplitMix64::new(6);
    for m in [2u32, 4, 8, 16] {
        for n in 1..=4usize {
            let s: Vec<u32> = (0..n).map(|_| rng.range_usize(m as usize) as u32).collect();
            let base = sigma_embed(&s, m, 2.0).unwrap();
            for j in 0..n {
                let mut shifted = s.clone();
                shifted[j] = (shifted[j] + m / 2) % m;
                let img = sigma_embed(&shifted, m, 2.0).unwrap();
                // coordinate j lives in the (2j, 2j+1) plane
                let d = euclid(
                    &base.coords()[2 * j..2 * j + 2],
                    &img.coords()[2 * j..2 * j + 2],
                );
                assert!(
                    (d - 2.0).abs() <= 1e-12,
                    "half-shift distance {d} at m = {m}, n = {n}, j = {j}"
                );
            }
        }
    }
    println!("criterion 6: PASS");
}

#[test]
fn criterion_07_lift_and_discretization_identities() {
    let map = FnPointMap::new(3, |t| vec![t, t * t, (2.0 * t).sin()]);
    let mut rng = SplitMix64::new(7);

    // the lifted difference carries the blockwise l_s norms exactly
    for _ in 0..100 {
        let m = 2 + rng.range_usize(7);
        let s = 1.0 + 2.0 * rng.next_f64();
        let r = 1.0 + 2.0 * rng.next_f64();
        let f = StepFunction::new((0..m).map(|_| rng.range_f64(-1.0, 1.0)).collect()).unwrap();
        let g = StepFunction::new((0..m).map(|_| rng.range_f64(-1.0, 1.0)).collect()).unwrap();
        let lf = lift_lr(&map, &f, r, s).unwrap();
        let lg = lift_lr(&map, &g, r, s).unwrap();
        let lhs = lr_distance(&lf, &lg, s).unwrap().powf(s);
        let mut rhs = 0.0;
        for (a, b) in f.values().iter().zip(g.values()) {
            let va = PointMap::image(&map, *a).unwrap();
            let vb = PointMap::image(&map, *b).unwrap();
            rhs += va
                .iter()
                .zip(&vb)
                .map(|(x, y)| (x - y).abs().powf(s))
                .sum::<f64>()
                / m as f64;
        }
        assert!(
            (lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300),
            "lift norm identity: {lhs} vs {rhs}"
        );
    }

    // grid sampling on a common refinement reproduces distances exactly
    for _ in 0..100 {
        let r = 1.0 + 2.0 * rng.next_f64();
        let pf = 1 << rng.range_usize(4); // 1, 2, 4 or 8 pieces
        let pg = 1 << rng.range_usize(4);
        let f = StepFunction::new((0..pf).map(|_| rng.range_f64(-1.0, 1.0)).collect()).unwrap();
        let g = StepFunction::new((0..pg).map(|_| rng.range_f64(-1.0, 1.0)).collect()).unwrap();
        let true_dist = lr_distance(&f, &g, r).unwrap();
        if true_dist < 1e-6 {
            continue;
        }
        let vecs = discretize_lr(&[f, g], r, 8).unwrap();
        let sampled = vecs[0].distance(&vecs[1]).unwrap();
        assert!(
            (sampled / true_dist - 1.0).abs() <= 1e-13,
            "common-grid ratio {} off unity",
            sampled / true_dist
        );
    }

    // above the computed threshold the sandwich [1/2, 2] holds
    for _ in 0..100 {
        let r = 1.0 + 2.0 * rng.next_f64();
        let family: Vec<StepFunction> = loop {
            let cand: Vec<StepFunction> = (0..3)
                .map(|_| {
                    let pieces = 2 + rng.range_usize(6);
                    StepFunction::new((0..pieces).map(|_| rng.range_f64(-1.0, 1.0)).collect())
                        .unwrap()
                })
                .collect();
            let mut ok = true;
            for i in 0..cand.len() {
                for j in (i + 1)..cand.len() {
                    if lr_distance(&cand[i], &cand[j], r).unwrap() < 0.05 {
                        ok = false;
                    }
                }
            }
            if ok {
                break cand;
            }
        };
        let m = discretize_threshold(&family, r).unwrap();
        let vecs = discretize_lr(&family, r, m).unwrap();
        for i in 0..family.len() {
            for j in (i + 1)..family.len() {
                let true_dist = lr_distance(&family[i], &family[j], r).unwrap();
                let ratio = vecs[i].distance(&vecs[j]).unwrap() / true_dist;
                assert!(
                    (0.5..=2.0).contains(&ratio),
                    "sandwich ratio {ratio} at m = {m}, r = {r}"
                );
            }
        }
    }
    println!("criterion 7: PASS");
}

#[test]
fn criterion_08_reduction_sandwich_and_partial_sum_traces() {
    const HORIZON: usize = 10_000;
    let base = Arc::new(|u: &[f64]| holder_line_map(0.5, u[0]).unwrap());
    let (p, q) = (1.0, 2.0);

    // distortion constant of the base map against distance from the
    // origin, measured densely over the reachable offsets
    let origin = base(&[0.0]);
    let mut a_meas = 1.0f64;
    let mut kappa = 0.1;
    while kappa <= 2.0 {
        let rho = euclid(&base(&[kappa]), &origin) / kappa.powf(p / q);
        a_meas = a_meas.max(rho).max(1.0 / rho);
        kappa += 1e-4;
    }
    let a = a_meas * 1.01;

    let family = scaled_family(base.clone(), p, q, 0.25, 1.0, a, 2.0, 0.5).unwrap();

    // plant every pair inside the middle regime: distance kappa_n 2^{-n}
    // with kappa_n in [0.25, 2) against thresholds eps_n = 0.25 * 2^{-n}
    let mut rng = SplitMix64::new(8);
    let mut source_sum = 0.0f64; // sum of d^p
    let mut image_sum = 0.0f64; // sum of d'^q
    for n in 0..HORIZON {
        let kappa = rng.range_f64(0.25, 2.0);
        let x = [0.0];
        let y = [mul_pow2(kappa, -(n as i64))];
        let d = y[0];
        let ix = family.apply(n, &x).unwrap();
        let iy = family.apply(n, &y).unwrap();
        let dq = euclid(&ix, &iy);
        if d > 0.0 && dq > 0.0 {
            let target = d.powf(p / q);
            assert!(
                dq >= target / a && dq <= a * target,
                "pair at index {n} escapes the sandwich: d = {d}, d' = {dq}"
            );
        }
        source_sum += d.powf(p);
        image_sum += dq.powf(q);
        let aq = a.powf(q);
        assert!(
            image_sum >= source_sum / aq - 1e-300 && image_sum <= aq * source_sum + 1e-300,
            "flat sums escape [A^-q S, A^q S] at horizon {}",
            n + 1
        );
    }

    // planted membership traces
    let geometric: Vec<f64> = (0..HORIZON).map(|n| mul_pow2(1.0, -(n as i64))).collect();
    let trace = ep_partial_sums(&geometric, 1.0).unwrap();
    assert!((trace[HORIZON - 1] - 2.0).abs() <= 1e-12, "geometric sum");

    let harmonic: Vec<f64> = (1..=HORIZON).map(|n| 1.0 / n as f64).collect();
    let trace = ep_partial_sums(&harmonic, 2.0).unwrap();
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    assert!(
        (trace[HORIZON - 1] - basel).abs() <= 1e-3,
        "squared harmonic sum {} vs {basel}",
        trace[HORIZON - 1]
    );

    let slow: Vec<f64> = (1..=HORIZON).map(|n| 1.0 / (n as f64).sqrt()).collect();
    let trace = ep_partial_sums(&slow, 2.0).unwrap();
    assert!(
        trace[HORIZON - 1] > 9.0 && trace[HORIZON - 1] - trace[HORIZON * 9 / 10] > 0.05,
        "divergent trace must keep growing: {}",
        trace[HORIZON - 1]
    );
    println!("criterion 8: PASS");
}

fn four_cycle_graph() -> FiniteMetricSpace {
    // shortest-path metric of the 4-cycle: unit edges, diagonals 2
    let labels = snowflake_core::spaces::numeric_labels(4);
    let d = vec![
        vec![0.0, 1.0, 2.0, 1.0],
        vec![1.0, 0.0, 1.0, 2.0],
        vec![2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0],
    ];
    FiniteMetricSpace::new(labels, d).unwrap()
}

#[test]
fn criterion_09_search_oracle_dominance() {
    let space = four_cycle_graph();
    let brute_cfg = SearchConfig {
        grid_resolution: 0.1,
        grid_radius: Some(1.5),
        ..SearchConfig::default()
    };
    let (oracle, _) = brute_min_distortion(&space, &brute_cfg).unwrap();

    let local_cfg = SearchConfig {
        restarts: 16,
        iterations: 30_000,
        ..SearchConfig::default()
    };
    let (report, _) = local_min_distortion(&space, &local_cfg).unwrap();
    assert!(
        (report.constant_a / oracle - 1.0).abs() <= 0.02,
        "local {} vs oracle {oracle}",
        report.constant_a
    );

    let triangle = FiniteMetricSpace::new(
        snowflake_core::spaces::numeric_labels(3),
        vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ],
    )
    .unwrap();
    let tri_cfg = SearchConfig {
        restarts: 16,
        iterations: 60_000,
        ..SearchConfig::default()
    };
    let (report, _) = local_min_distortion(&triangle, &tri_cfg).unwrap();
    assert!(
        report.constant_a <= 1.001,
        "equilateral triangle should embed almost exactly: {}",
        report.constant_a
    );
    println!("criterion 9: PASS");
}

#[test]
fn criterion_10_path_chain_lower_bound() {
    for n in [4usize, 16, 64] {
        let space = path_space(n).unwrap();
        let cfg = SearchConfig {
            alpha: 1.5,
            restarts: 4,
            iterations: 2_000,
            ..SearchConfig::default()
        };
        let (report, _) = local_min_distortion(&space, &cfg).unwrap();
        assert!(
            path_alpha_bound_check(&space, n, 1.5, &report).unwrap(),
            "chain bound violated at n = {n}: A = {}",
            report.constant_a
        );
    }
    println!("criterion 10: PASS");
}

#[test]
fn criterion_11_verdict_tables_and_profiles() {
    // if-and-only-if verdict rows
    assert!(iff_verdict(1.0, 1.0, 1.0, 2.0).unwrap());
    assert!(!iff_verdict(1.0, 2.0, 2.0, 2.0).unwrap());
    assert!(iff_verdict(1.0, 1.0, 2.0, 2.0).unwrap()); // equality boundary
    assert!(iff_verdict(2.5, 1.0, 1.0, 1.0).is_err()); // r outside [1, 2]
    assert!(iff_verdict(1.0, 1.0, 2.0, 1.0).is_err()); // s > q

    // literal necessary conditions (arguments r, s, p, q)
    assert_eq!(
        necessary_conditions(1.0, 1.0, 1.0, 2.0).unwrap(),
        (true, true, true)
    );
    assert_eq!(
        necessary_conditions(1.0, 2.0, 2.0, 2.0).unwrap(),
        (true, false, true)
    );
    assert_eq!(
        necessary_conditions(3.0, 1.0, 1.0, 1.0).unwrap(),
        (true, true, false)
    );

    // closed-form profiles on a grid
    for i in 0..20 {
        let r = 1.0 + 0.15 * i as f64;
        for small in [true, false] {
            let d = if small {
                SpaceDescriptor::SmallLp(r)
            } else {
                SpaceDescriptor::BigLp(r)
            };
            let prof = space_profile(&d).unwrap();
            assert_eq!((prof.p_sup, prof.q_inf), (r.min(2.0), r.max(2.0)));
        }
        for j in 0..20 {
            let q = 1.0 + 0.15 * j as f64;
            let prof =
                space_profile(&SpaceDescriptor::SeqOver(q, Box::new(SpaceDescriptor::SmallLp(r))))
                    .unwrap();
            assert_eq!(prof.p_sup, r.min(2.0).min(q), "r = {r}, q = {q}");
            assert_eq!(prof.q_inf, r.max(2.0).max(q), "r = {r}, q = {q}");
        }
    }
    let c0 = space_profile(&SpaceDescriptor::C0).unwrap();
    assert_eq!(c0.p_sup, 1.0);
    assert!(c0.q_inf.is_infinite());
    println!("criterion 11: PASS");
}

/// Run the binary once in `dir` and return every produced output file
/// (manifests excluded: they record wall-clock time).
fn run_once(dir: &Path, threads: &str, args: &[&str]) -> BTreeMap<String, Vec<u8>> {
    let before: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    let output = Command::new(env!("CARGO_BIN_EXE_snowflake"))
        .current_dir(dir)
        .env("SNOWFLAKE_THREADS", threads)
        .args(args)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if before.contains(&name) || name.ends_with(".manifest.json") {
            continue;
        }
        files.insert(name.clone(), std::fs::read(dir.join(&name)).unwrap());
    }
    // stdout participates in the comparison as well
    files.insert("<stdout>".into(), output.stdout);
    files
}

#[test]
fn criterion_12_cli_determinism_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("space.json"),
        r#"{"labels":["0","1","2"],"dist":[[0.0,1.0,1.0],[1.0,0.0,1.0],[1.0,1.0,0.0]]}"#,
    )
    .unwrap();
    std::fs::write(d.join("steps.json"), "[0.1, 0.4, 0.9]").unwrap();
    std::fs::write(d.join("reals.json"), "[0.1, 0.5, 0.7]").unwrap();
    std::fs::write(d.join("family.json"), "[[0.0, 1.0], [0.5, 0.25]]").unwrap();
    std::fs::write(
        d.join("vectors.json"),
        r#"{"p":2.0,"vectors":[[1.0,0.0],[0.0,1.0]]}"#,
    )
    .unwrap();
    std::fs::write(
        d.join("pair.json"),
        r#"{"x":[[0.2],[0.1]],"y":[[0.25],[0.15]],"entry_p":2.0}"#,
    )
    .unwrap();
    std::fs::write(d.join("samples.json"), "[1.0, 0.9, 0.8, 0.7, 0.6, 0.5]").unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["curve", "--r", "0.3", "--samples", "16", "--out", "curve.csv"],
        vec![
            "extend", "--r", "0.3", "--t-min=-4", "--t-max", "4", "--samples", "16", "--out",
            "extend.csv",
        ],
        vec![
            "line-map", "--alpha", "0.75", "--samples", "16", "--out", "linemap.csv",
        ],
        vec![
            "lift-lr", "--map", "line-map:0.75", "--in", "steps.json", "--r", "2", "--s", "2",
            "--out", "liftlr.json",
        ],
        vec![
            "lift-c0", "--map", "line-map:0.75", "--in", "steps.json", "--out", "liftc0.json",
        ],
        vec![
            "discretize", "--in", "family.json", "--r", "2", "--m", "8", "--out", "disc.json",
        ],
        vec!["kuratowski", "--in", "space.json", "--out", "kura.json"],
        vec!["round", "--in", "reals.json", "--out", "round.json"],
        vec![
            "type", "--in", "vectors.json", "--p", "2", "--mode", "sampled", "--count", "500",
            "--seed", "7", "--out", "type.json",
        ],
        vec![
            "cotype", "--in", "vectors.json", "--q", "2", "--mode", "exact", "--out", "cotype.json",
        ],
        vec![
            "metric-type", "--map", "identity-lp:2.0", "--n", "3", "--p", "2", "--out", "mtype.json",
        ],
        vec![
            "metric-cotype", "--map", "sigma", "--n", "2", "--m", "4", "--q", "2", "--mode",
            "exact", "--out", "mcotype.json",
        ],
        vec!["sigma", "--s", "0,1", "--m", "4", "--q", "2", "--out", "sigma.json"],
        vec!["profile", "--space", "seq:3:lp:1.5", "--out", "profile.json"],
        vec![
            "conditions", "--r", "1", "--s", "2", "--p", "2", "--q", "2", "--out", "cond.json",
        ],
        vec![
            "verdict", "--r", "1", "--p", "1", "--s", "1", "--q", "2", "--out", "verdict.json",
        ],
        vec![
            "theta", "--in", "pair.json", "--base", "identity", "--p", "1", "--q", "2", "--c",
            "0.25", "--d", "1", "--out", "theta.json",
        ],
        vec![
            "scale-family", "--p", "1", "--q", "2", "--c", "0.25", "--d", "1", "--horizon", "32",
            "--out", "scale.csv",
        ],
        vec![
            "verify-family", "--base", "identity", "--p", "2", "--q", "2", "--constant-a", "2",
            "--big-c", "10", "--small-d", "1e-9", "--indices", "5", "--samples", "50", "--dim",
            "1", "--seed", "5", "--out", "verify.json",
        ],
        vec![
            "partial-sums", "--plant", "geometric:0.5", "--p", "1", "--horizon", "100", "--out",
            "psums.csv",
        ],
        vec!["window", "--in", "samples.json", "--per-unit", "3", "--out", "window.json"],
        vec![
            "brute", "--in", "space.json", "--dim", "2", "--resolution", "0.5", "--radius", "1.5",
            "--out", "brute.json",
        ],
        vec![
            "search", "--in", "space.json", "--dim", "2", "--restarts", "4", "--iterations",
            "200", "--seed", "1", "--out", "search.json",
        ],
        vec![
            "obstruction", "--n-values", "1,2", "--p-src", "2", "--p-tgt", "2", "--alpha", "1",
            "--identity-candidate", "true", "--out", "obstr.csv",
        ],
    ];
    assert_eq!(commands.len(), 24, "every subcommand participates");

    for args in &commands {
        let mut runs = Vec::new();
        for threads in ["1", "8", "1", "8"] {
            let run_dir = tempfile::tempdir_in(d).unwrap();
            for input in [
                "space.json", "steps.json", "reals.json", "family.json", "vectors.json",
                "pair.json", "samples.json",
            ] {
                std::fs::copy(d.join(input), run_dir.path().join(input)).unwrap();
            }
            runs.push(run_once(run_dir.path(), threads, args));
        }
        assert!(
            !runs[0].is_empty(),
            "{:?} produced no comparable output",
            args[0]
        );
        for other in &runs[1..] {
            assert_eq!(&runs[0], other, "outputs differ for {:?}", args[0]);
        }
    }
    println!("criterion 12: PASS");
}
