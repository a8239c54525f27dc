//! Distortion-minimization oracle: exhaustive grid placement on tiny
//! instances, seeded multi-start local improvement in general, and the
//! path-space lower-bound check.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{
    holder_distortion, DistortionReport, EmbeddingTable, FiniteMetricSpace, PNormVector,
};
use crate::util::SplitMix64;

/// Configuration shared by both search modes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub target_dim: usize,
    pub target_p: f64,
    pub alpha: f64,
    pub restarts: usize,
    pub iterations: usize,
    /// Initial perturbation size; defaults to diameter / 4.
    pub initial_step: Option<f64>,
    /// Step multiplier applied after every `decay_interval` non-improving
    /// iterations.
    pub step_decay: f64,
    pub decay_interval: usize,
    pub seed: u64,
    /// Grid spacing in brute mode.
    pub grid_resolution: f64,
    /// Half-width of the coordinate grid in brute mode; defaults to the
    /// source diameter.
    pub grid_radius: Option<f64>,
    /// Cap on the number of grid placements brute mode may enumerate.
    pub budget: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            target_dim: 2,
            target_p: 2.0,
            alpha: 1.0,
            restarts: 32,
            iterations: 10_000,
            initial_step: None,
            step_decay: 0.95,
            decay_interval: 100,
            seed: 0,
            grid_resolution: 0.05,
            grid_radius: None,
            budget: 100_000_000,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts < 1 || self.iterations < 1 {
            return Err(Error::invalid("restarts and iterations must be >= 1"));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::invalid("alpha must be positive"));
        }
        if self.target_dim == 0 {
            return Err(Error::invalid("target dimension must be >= 1"));
        }
        if !(self.grid_resolution > 0.0) {
            return Err(Error::invalid("grid resolution must be positive"));
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) || self.decay_interval == 0 {
            return Err(Error::invalid("step schedule must decay"));
        }
        Ok(())
    }
}

fn table_from_coords(
    space: &FiniteMetricSpace,
    coords: &[Vec<f64>],
    p: f64,
    alpha: f64,
) -> Result<EmbeddingTable> {
    let images: BTreeMap<String, PNormVector> = space
        .labels()
        .iter()
        .zip(coords)
        .map(|(l, c)| PNormVector::new(c.clone(), p).map(|v| (l.clone(), v)))
        .collect::<Result<_>>()?;
    EmbeddingTable::new(space.clone(), images, alpha)
}

/// `max over pairs |log d'(Tu, Tv) - alpha log d(u, v)|`; infinite when a
/// pair collapses, so collapsed candidates are never accepted.
fn log_objective(space: &FiniteMetricSpace, coords: &[Vec<f64>], p: f64, alpha: f64) -> f64 {
    let n = space.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let diff: Vec<f64> = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(a, b)| a - b)
                .collect();
            let dp = crate::spaces::p_norm_of(&diff, p);
            if dp == 0.0 {
                return f64::INFINITY;
            }
            worst = worst.max((dp.ln() - alpha * space.dist(i, j).ln()).abs());
        }
    }
    worst
}

/// Exhaustive placement of the points on a coordinate grid, with the
/// translation/rotation freedom fixed: the first point is pinned at the
/// origin and the second to the nonnegative first-axis ray. Returns the
/// least distortion constant found and its witness table.
pub fn brute_min_distortion(
    space: &FiniteMetricSpace,
    cfg: &SearchConfig,
) -> Result<(f64, EmbeddingTable)> {
    cfg.validate()?;
    let n = space.len();
    if n < 2 || n > 5 {
        return Err(Error::invalid("brute mode handles 2 to 5 points"));
    }
    if cfg.target_dim > 2 {
        return Err(Error::invalid("brute mode handles target dimension <= 2"));
    }
    let dim = cfg.target_dim;
    let radius = cfg.grid_radius.unwrap_or_else(|| space.diameter());
    let steps_half = (radius / cfg.grid_resolution).round() as i64;
    let axis_steps = (steps_half + 1) as u128; // second point: 0..=radius
    let full_steps = (2 * steps_half + 1) as u128; // free coords: -radius..=radius
    let free_coords = (n - 2) * dim;
    let total = axis_steps
        .checked_mul(full_steps.checked_pow(free_coords as u32).unwrap_or(u128::MAX))
        .unwrap_or(u128::MAX);
    if total > cfg.budget {
        return Err(Error::BudgetExceeded(total, cfg.budget));
    }

    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut coords = vec![vec![0.0; dim]; n];
    // odometer over (second-point axis coordinate, then each free coordinate)
    let mut counters = vec![0i64; 1 + free_coords];
    loop {
        coords[1][0] = counters[0] as f64 * cfg.grid_resolution;
        for (k, &c) in counters[1..].iter().enumerate() {
            coords[2 + k / dim][k % dim] = (c - steps_half) as f64 * cfg.grid_resolution;
        }
        let obj = log_objective(space, &coords, cfg.target_p, cfg.alpha);
        if obj.is_finite() && best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, coords.clone()));
        }
        let mut k = 0;
        loop {
            if k == counters.len() {
                let (obj, coords) = best.ok_or_else(|| {
                    Error::Degenerate("every grid placement collapsed a pair".into())
                })?;
                let table = table_from_coords(space, &coords, cfg.target_p, cfg.alpha)?;
                return Ok((obj.exp(), table));
            }
            counters[k] += 1;
            let limit = if k == 0 { steps_half } else { 2 * steps_half };
            if counters[k] <= limit {
                break;
            }
            counters[k] = 0;
            k += 1;
        }
    }
}

fn run_restart(
    space: &FiniteMetricSpace,
    cfg: &SearchConfig,
    restart: usize,
) -> (f64, Vec<Vec<f64>>) {
    let n = space.len();
    let dim = cfg.target_dim;
    let diam = space.diameter();
    let mut rng = SplitMix64::keyed(cfg.seed, restart as u64);
    let mut coords: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.range_f64(-diam, diam)).collect())
        .collect();
    let mut obj = log_objective(space, &coords, cfg.target_p, cfg.alpha);
    let mut step = cfg.initial_step.unwrap_or(diam / 4.0);
    let mut stale = 0usize;
    for _ in 0..cfg.iterations {
        let point = rng.range_usize(n);
        let coord = rng.range_usize(dim);
        let delta = rng.range_f64(-step, step);
        coords[point][coord] += delta;
        let candidate = log_objective(space, &coords, cfg.target_p, cfg.alpha);
        if candidate < obj {
            obj = candidate;
            stale = 0;
        } else {
            coords[point][coord] -= delta;
            stale += 1;
            if stale % cfg.decay_interval == 0 {
                step *= cfg.step_decay;
            }
        }
    }
    (obj, coords)
}

/// Seeded multi-start local improvement of the log-space distortion
/// objective. Restarts run independently (in parallel); the result is the
/// strict minimum over restarts with ties broken by restart index, so the
/// output is independent of thread count.
pub fn local_min_distortion(
    space: &FiniteMetricSpace,
    cfg: &SearchConfig,
) -> Result<(DistortionReport, EmbeddingTable)> {
    cfg.validate()?;
    if space.len() < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let results: Vec<(f64, Vec<Vec<f64>>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(space, cfg, r))
        .collect();
    let (obj, coords) = results
        .into_iter()
        .enumerate()
        .min_by(|(ia, (oa, _)), (ib, (ob, _))| {
            oa.partial_cmp(ob).unwrap_or(std::cmp::Ordering::Equal).then(ia.cmp(ib))
        })
        .map(|(_, r)| r)
        .unwrap();
    if !obj.is_finite() {
        return Err(Error::Degenerate(
            "every restart ended on a collapsed placement".into(),
        ));
    }
    let table = table_from_coords(space, &coords, cfg.target_p, cfg.alpha)?;
    let report = holder_distortion(space, &table)?;
    Ok((report, table))
}

/// The path space `F_n = {0, 1/n, ..., 1}` with `d(i, j) = |i - j| / n`.
pub fn path_space(n: usize) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::invalid("path needs n >= 1 segments"));
    }
    let labels = crate::spaces::numeric_labels(n + 1);
    let dist: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| (i as f64 - j as f64).abs() / n as f64)
                .collect()
        })
        .collect();
    FiniteMetricSpace::new(labels, dist)
}

/// Chain lower bound on the path space: any exponent-`alpha` embedding of
/// `F_n` must satisfy `A^2 >= n^{alpha - 1}`. Returns whether the report
/// passes; the space must actually be the path `F_n`.
pub fn path_alpha_bound_check(
    space: &FiniteMetricSpace,
    n: usize,
    alpha: f64,
    report: &DistortionReport,
) -> Result<bool> {
    let expected = path_space(n)?;
    if space.len() != expected.len() {
        return Err(Error::invalid("space is not the stated path"));
    }
    for i in 0..space.len() {
        for j in 0..space.len() {
            if (space.dist(i, j) - expected.dist(i, j)).abs() > 1e-12 {
                return Err(Error::invalid("space is not the stated path"));
            }
        }
    }
    if (report.alpha - alpha).abs() > 1e-12 {
        return Err(Error::invalid("report exponent does not match"));
    }
    let bound = (n as f64).powf(alpha - 1.0);
    Ok(report.constant_a * report.constant_a >= bound - 1e-9)
}
