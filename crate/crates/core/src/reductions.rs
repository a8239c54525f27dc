//! Pairing-based reduction machinery: the diagonal pairing bijection, the
//! block-to-flat map theta, the dyadically scaled family with its geometric
//! thresholds, sampled three-regime verification, finite-horizon membership
//! traces, and the unit-window slicing map.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{p_norm_of, StepFunction};
use crate::util::{mul_pow2, PairwiseAccumulator, SplitMix64};

/// Default horizon for partial-sum traces.
pub const DEFAULT_HORIZON: usize = 10_000;
/// Default sample count per regime in condition verification.
pub const DEFAULT_SAMPLES_PER_INDEX: usize = 1_000;

/// Diagonal pairing bijection `N^2 -> N`: `k = (n+m)(n+m+1)/2 + m`.
pub fn cantor_pair(n: usize, m: usize) -> usize {
    let s = n + m;
    s * (s + 1) / 2 + m
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(k: usize) -> (usize, usize) {
    // largest s with s(s+1)/2 <= k
    let mut s = (((8 * k + 1) as f64).sqrt() as usize + 1) / 2;
    while s * (s + 1) / 2 > k {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= k {
        s += 1;
    }
    let m = k - s * (s + 1) / 2;
    (s - m, m)
}

/// Per-index map of a reduction family; the output is a coordinate block
/// in the target space.
pub type IndexedMap = Arc<dyn Fn(usize, &[f64]) -> Result<Vec<f64>> + Send + Sync>;
/// Source distance used when classifying sampled pairs at index `n`.
pub type SourceDistance = Arc<dyn Fn(usize, &[f64], &[f64]) -> f64 + Send + Sync>;

/// An indexed family of maps `T_n` with thresholds `eps_n`, `delta_n` and
/// constants `A`, `C`, `D`.
#[derive(Clone)]
pub struct ReductionFamily {
    pub map: IndexedMap,
    pub source_distance: SourceDistance,
    pub eps: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    pub delta: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    pub constant_a: f64,
    pub constant_c: f64,
    pub constant_d: f64,
}

impl ReductionFamily {
    pub fn apply(&self, n: usize, u: &[f64]) -> Result<Vec<f64>> {
        let out = (self.map)(n, u)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "map produced a non-finite coordinate at index {n}"
            )));
        }
        Ok(out)
    }
}

/// Two finite sequences of points over a common coordinate space, compared
/// entrywise with the `l_p` distance of exponent `entry_p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequencePair {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub entry_p: f64,
}

impl SequencePair {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>, entry_p: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::invalid("sequences must have equal length"));
        }
        if x.is_empty() {
            return Err(Error::invalid("horizon must be >= 1"));
        }
        if x.iter().zip(&y).any(|(a, b)| a.len() != b.len()) {
            return Err(Error::invalid("entries must share dimension"));
        }
        if !(entry_p >= 1.0) {
            return Err(Error::invalid("entry exponent must satisfy p >= 1"));
        }
        Ok(SequencePair { x, y, entry_p })
    }

    pub fn horizon(&self) -> usize {
        self.x.len()
    }

    /// Entrywise distances `d_n(x(n), y(n))`.
    pub fn distances(&self) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| {
                let diff: Vec<f64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
                p_norm_of(&diff, self.entry_p)
            })
            .collect()
    }
}

/// Apply every `T_n` to the entries of a sequence, returning the coordinate
/// blocks of the image.
pub fn theta(family: &ReductionFamily, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    x.iter()
        .enumerate()
        .map(|(n, u)| family.apply(n, u))
        .collect()
}

/// Reindex blocks into a flat sequence: entry `pair(n, m)` of the output is
/// coordinate `m` of block `n`; untouched positions are zero.
pub fn flatten_blocks(blocks: &[Vec<f64>]) -> Vec<f64> {
    let mut len = 0;
    for (n, block) in blocks.iter().enumerate() {
        for m in 0..block.len() {
            len = len.max(cantor_pair(n, m) + 1);
        }
    }
    let mut flat = vec![0.0; len];
    for (n, block) in blocks.iter().enumerate() {
        for (m, &v) in block.iter().enumerate() {
            flat[cantor_pair(n, m)] = v;
        }
    }
    flat
}

/// `sum_k |a_k - b_k|^q` in flat index order (pairwise tree summation).
pub fn flat_diff_power_sum(a: &[f64], b: &[f64], q: f64) -> f64 {
    let len = a.len().max(b.len());
    let mut acc = PairwiseAccumulator::new();
    for k in 0..len {
        let av = a.get(k).copied().unwrap_or(0.0);
        let bv = b.get(k).copied().unwrap_or(0.0);
        acc.push((av - bv).abs().powf(q));
    }
    acc.sum()
}

/// `sum_n ||block_a(n) - block_b(n)||_q^q` in block order.
pub fn block_diff_power_sum(a: &[Vec<f64>], b: &[Vec<f64>], q: f64) -> f64 {
    let mut acc = PairwiseAccumulator::new();
    for (ba, bb) in a.iter().zip(b) {
        let mut inner = PairwiseAccumulator::new();
        for (u, v) in ba.iter().zip(bb) {
            inner.push((u - v).abs().powf(q));
        }
        acc.push(inner.sum());
    }
    acc.sum()
}

/// The dyadically scaled family `T_n(u) = 2^{-(p/q) n} T(2^n u)` with
/// thresholds `eps_n = 2^{-n} c` and `delta_n = 2^{-(p/q) n} d`.
pub fn scaled_family(
    base: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    p: f64,
    q: f64,
    c: f64,
    d: f64,
    constant_a: f64,
    constant_c: f64,
    constant_d: f64,
) -> Result<ReductionFamily> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::invalid("exponents must satisfy p, q >= 1"));
    }
    if !(c > 0.0 && d > 0.0) {
        return Err(Error::invalid("thresholds must be positive"));
    }
    let ratio = p / q;
    let map: IndexedMap = Arc::new(move |n, u| {
        let scaled: Vec<f64> = u.iter().map(|&v| mul_pow2(v, n as i64)).collect();
        if scaled.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "input too large to scale by 2^{n} without overflow"
            )));
        }
        let factor = (-(ratio) * n as f64).exp2();
        Ok(base(&scaled).into_iter().map(|v| v * factor).collect())
    });
    Ok(ReductionFamily {
        map,
        source_distance: Arc::new(|_, u: &[f64], v: &[f64]| {
            let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
            p_norm_of(&diff, 2.0)
        }),
        eps: Arc::new(move |n| mul_pow2(c, -(n as i64))),
        delta: Arc::new(move |n| (-(ratio) * n as f64).exp2() * d),
        constant_a,
        constant_c,
        constant_d,
    })
}

/// Which clause of the three-regime contract a sampled pair exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `d < eps_n`: small distances must map below `delta_n`.
    Small,
    /// `d > C`: large distances must map above `D`.
    Large,
    /// `eps_n <= d <= C`: the Holder sandwich with constant `A`.
    Sandwich,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub regime: Regime,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub source_distance: f64,
    pub image_distance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub indices_checked: usize,
    pub samples_per_index: usize,
    /// Counts of sampled pairs landing in (small, large, sandwich).
    pub regime_counts: (u64, u64, u64),
    pub violations: Vec<Violation>,
    /// Partial sums of `eps_n^p` and `delta_n^q` at the horizon.
    pub eps_power_sum: f64,
    pub delta_power_sum: f64,
    /// Last-decade relative movement below 1e-6 — a diagnostic for
    /// summability, not a proof.
    pub eps_numerically_cauchy: bool,
    pub delta_numerically_cauchy: bool,
    /// Sampling checks the clauses only on the pairs drawn here; nothing
    /// is claimed beyond them.
    pub coverage: String,
}

fn cauchy_diagnostic(terms: impl Fn(usize) -> f64, exponent: f64, horizon: usize) -> (f64, bool) {
    let mut acc = PairwiseAccumulator::new();
    let mut at_start_of_last_decade = 0.0;
    let start = horizon - horizon / 10;
    for n in 0..horizon {
        if n == start {
            at_start_of_last_decade = acc.sum();
        }
        acc.push(terms(n).powf(exponent));
    }
    let total = acc.sum();
    let moved = if total > 0.0 {
        (total - at_start_of_last_decade) / total
    } else {
        0.0
    };
    (total, moved < 1e-6)
}

/// Sample pairs at each index, classify them into the three regimes, and
/// check the corresponding clause. Violations are report content, never
/// errors. Pairs are drawn coordinatewise uniform from `sample_range`.
#[allow(clippy::too_many_arguments)]
pub fn verify_reduction_conditions(
    family: &ReductionFamily,
    p: f64,
    q: f64,
    indices: usize,
    samples_per_index: usize,
    dim: usize,
    sample_range: (f64, f64),
    seed: u64,
) -> Result<VerificationReport> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::invalid("exponents must satisfy p, q >= 1"));
    }
    if indices == 0 || dim == 0 {
        return Err(Error::invalid("need at least one index and one dimension"));
    }
    let (lo, hi) = sample_range;
    if !(lo < hi) {
        return Err(Error::invalid("sample range must be nonempty"));
    }
    let mut counts = (0u64, 0u64, 0u64);
    let mut violations = Vec::new();
    for n in 0..indices {
        let eps_n = (family.eps)(n);
        let delta_n = (family.delta)(n);
        for i in 0..samples_per_index {
            let mut rng = SplitMix64::keyed(seed, (n * samples_per_index + i) as u64);
            let u: Vec<f64> = (0..dim).map(|_| rng.range_f64(lo, hi)).collect();
            let v: Vec<f64> = (0..dim).map(|_| rng.range_f64(lo, hi)).collect();
            let d = (family.source_distance)(n, &u, &v);
            let image_u = family.apply(n, &u)?;
            let image_v = family.apply(n, &v)?;
            let diff: Vec<f64> = image_u.iter().zip(&image_v).map(|(a, b)| a - b).collect();
            let dq = p_norm_of(&diff, q);
            let (regime, ok) = if d < eps_n {
                counts.0 += 1;
                (Regime::Small, dq < delta_n)
            } else if d > family.constant_c {
                counts.1 += 1;
                (Regime::Large, dq > family.constant_d)
            } else {
                counts.2 += 1;
                let target = d.powf(p / q);
                let a = family.constant_a;
                (
                    Regime::Sandwich,
                    dq >= target / a - 1e-9 && dq <= a * target + 1e-9,
                )
            };
            if !ok {
                violations.push(Violation {
                    index: n,
                    regime,
                    u,
                    v,
                    source_distance: d,
                    image_distance: dq,
                });
            }
        }
    }
    let (eps_sum, eps_cauchy) = cauchy_diagnostic(|n| (family.eps)(n), p, DEFAULT_HORIZON);
    let (delta_sum, delta_cauchy) = cauchy_diagnostic(|n| (family.delta)(n), q, DEFAULT_HORIZON);
    Ok(VerificationReport {
        indices_checked: indices,
        samples_per_index,
        regime_counts: counts,
        violations,
        eps_power_sum: eps_sum,
        delta_power_sum: delta_sum,
        eps_numerically_cauchy: eps_cauchy,
        delta_numerically_cauchy: delta_cauchy,
        coverage: format!(
            "clauses checked on {} uniform pairs per index over [{lo}, {hi}]^{dim}; \
             no claim is made beyond the sampled pairs",
            samples_per_index
        ),
    })
}

/// Finite-horizon membership trace. For `p >= 1` the running sums
/// `S_N = sum_{n<N} d_n^p` for `N = 1..=horizon`; for `p = 0` the running
/// tail suprema `sup_{n >= N} d_n` for `N = 0..horizon`. Classification
/// against planted ground truth is the caller's business.
pub fn ep_partial_sums(distances: &[f64], p: f64) -> Result<Vec<f64>> {
    if distances.is_empty() {
        return Err(Error::invalid("horizon must be >= 1"));
    }
    if distances.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::invalid("distances must be nonnegative"));
    }
    if p == 0.0 {
        let mut out = vec![0.0; distances.len()];
        let mut sup = 0.0f64;
        for (i, &d) in distances.iter().enumerate().rev() {
            sup = sup.max(d);
            out[i] = sup;
        }
        return Ok(out);
    }
    if p < 1.0 {
        return Err(Error::invalid("exponent must be 0 or >= 1"));
    }
    let mut acc = PairwiseAccumulator::new();
    Ok(distances
        .iter()
        .map(|&d| {
            acc.push(d.powf(p));
            acc.sum()
        })
        .collect())
}

/// Slice uniform samples of `f` on `[1, N+1]` into `N` unit windows:
/// window `n` is the step-function restriction of `f(. + n + 1)` to
/// `[0, 1)`. Samples are the left endpoints `f(1 + i/per_unit)`.
pub fn theta_window(samples: &[f64], per_unit: usize) -> Result<Vec<StepFunction>> {
    if per_unit == 0 {
        return Err(Error::invalid("grid must have at least one sample per unit"));
    }
    if samples.is_empty() || samples.len() % per_unit != 0 {
        return Err(Error::invalid(format!(
            "grid misaligned: {} samples do not split into unit windows of {}",
            samples.len(),
            per_unit
        )));
    }
    samples
        .chunks(per_unit)
        .map(|w| StepFunction::new(w.to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::sup_distance;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pairing_roundtrip_and_injectivity() {
        assert_eq!(cantor_pair(0, 0), 0);
        let mut rng = SplitMix64::new(5);
        for _ in 0..10_000 {
            let n = rng.range_usize(100_000);
            let m = rng.range_usize(100_000);
            assert_eq!(cantor_unpair(cantor_pair(n, m)), (n, m));
        }
        let mut seen = std::collections::HashSet::new();
        for n in 0..1000 {
            for m in 0..1000 {
                assert!(seen.insert(cantor_pair(n, m)));
            }
        }
    }

    fn identity_family() -> ReductionFamily {
        ReductionFamily {
            map: Arc::new(|_, u| Ok(u.to_vec())),
            source_distance: Arc::new(|_, u: &[f64], v: &[f64]| {
                let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
                p_norm_of(&diff, 2.0)
            }),
            eps: Arc::new(|n| 0.5f64.powi(n as i32)),
            delta: Arc::new(|n| 0.5f64.powi(n as i32)),
            constant_a: 1.0,
            constant_c: 1e9,
            constant_d: 0.0,
        }
    }

    #[test]
    fn theta_trivial_cases() {
        let zero = ReductionFamily {
            map: Arc::new(|_, u| Ok(vec![0.0; u.len()])),
            ..identity_family()
        };
        let x = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let blocks = theta(&zero, &x).unwrap();
        assert!(blocks.iter().flatten().all(|&v| v == 0.0));

        let fam = identity_family();
        let bx = theta(&fam, &x).unwrap();
        let by = theta(&fam, &x).unwrap();
        assert_eq!(bx, by);
    }

    #[test]
    fn flat_and_block_sums_agree() {
        let fam = identity_family();
        let mut rng = SplitMix64::new(11);
        let x: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..7).map(|_| rng.range_f64(-2.0, 2.0)).collect())
            .collect();
        let y: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..7).map(|_| rng.range_f64(-2.0, 2.0)).collect())
            .collect();
        let bx = theta(&fam, &x).unwrap();
        let by = theta(&fam, &y).unwrap();
        for q in [1.0, 2.0, 3.5] {
            let flat = flat_diff_power_sum(&flatten_blocks(&bx), &flatten_blocks(&by), q);
            let block = block_diff_power_sum(&bx, &by, q);
            assert_abs_diff_eq!(flat, block, epsilon = 1e-12 * (1.0 + block));
        }
    }

    #[test]
    fn scaled_family_examples() {
        // p = q, base identity: T_n is the identity
        let fam = scaled_family(
            Arc::new(|u: &[f64]| u.to_vec()),
            2.0,
            2.0,
            1.0,
            1.0,
            1.0,
            1e9,
            0.0,
        )
        .unwrap();
        for n in [0usize, 1, 5, 40] {
            let out = fam.apply(n, &[0.7, -3.25]).unwrap();
            assert_eq!(out, vec![0.7, -3.25]);
        }
        // eps sequence for c = 1 is 1, 1/2, 1/4, ...
        assert_eq!((fam.eps)(0), 1.0);
        assert_eq!((fam.eps)(1), 0.5);
        assert_eq!((fam.eps)(2), 0.25);

        // n = 1, p = 1, q = 2: T_1(u) = 2^{-1/2} T(2u)
        let doubler = scaled_family(
            Arc::new(|u: &[f64]| vec![u[0] * 3.0]),
            1.0,
            2.0,
            1.0,
            1.0,
            1.0,
            1e9,
            0.0,
        )
        .unwrap();
        let out = doubler.apply(1, &[1.0]).unwrap();
        assert_abs_diff_eq!(out[0], 0.5f64.sqrt() * 6.0, epsilon = 1e-15);
    }

    #[test]
    fn verify_constant_map_reports_large_regime_violations() {
        let constant = ReductionFamily {
            map: Arc::new(|_, u| Ok(vec![0.0; u.len()])),
            constant_c: 0.5,
            constant_d: 0.1,
            ..identity_family()
        };
        let report =
            verify_reduction_conditions(&constant, 1.0, 1.0, 3, 200, 1, (0.0, 10.0), 0).unwrap();
        assert!(report.regime_counts.1 > 0);
        assert!(report
            .violations
            .iter()
            .any(|v| v.regime == Regime::Large));
        // every large-regime sample is a violation for the constant map
        assert_eq!(
            report.regime_counts.1,
            report
                .violations
                .iter()
                .filter(|v| v.regime == Regime::Large)
                .count() as u64
        );
    }

    #[test]
    fn verify_identity_scaled_family_clean() {
        // identity base map satisfies the two-regime hypothesis with p = q
        let fam = scaled_family(
            Arc::new(|u: &[f64]| u.to_vec()),
            2.0,
            2.0,
            1.0,
            1.0,
            1.0 + 1e-12,
            1e6,
            0.5,
        )
        .unwrap();
        let report =
            verify_reduction_conditions(&fam, 2.0, 2.0, 10, 100, 2, (-5.0, 5.0), 3).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations.first());
        assert!(report.eps_numerically_cauchy);
        assert!(report.delta_numerically_cauchy);
    }

    #[test]
    fn empty_sample_set_gives_empty_report() {
        let fam = identity_family();
        let report =
            verify_reduction_conditions(&fam, 1.0, 1.0, 2, 0, 1, (0.0, 1.0), 0).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.regime_counts, (0, 0, 0));
    }

    #[test]
    fn partial_sum_traces() {
        // geometric, p = 1: S_N -> 2
        let ds: Vec<f64> = (0..DEFAULT_HORIZON).map(|n| 0.5f64.powi(n as i32)).collect();
        let trace = ep_partial_sums(&ds, 1.0).unwrap();
        assert_abs_diff_eq!(*trace.last().unwrap(), 2.0, epsilon = 1e-9);

        // 1/n at p = 2: S_N -> pi^2/6
        let ds: Vec<f64> = (1..=DEFAULT_HORIZON).map(|n| 1.0 / n as f64).collect();
        let trace = ep_partial_sums(&ds, 2.0).unwrap();
        let limit = std::f64::consts::PI.powi(2) / 6.0;
        assert!((trace.last().unwrap() - limit).abs() < 1e-3);

        // n^{-1/2} at p = 2: harmonic growth, exceeds 9 by horizon 1e4
        let ds: Vec<f64> = (1..=DEFAULT_HORIZON).map(|n| (n as f64).powf(-0.5)).collect();
        let trace = ep_partial_sums(&ds, 2.0).unwrap();
        assert!(*trace.last().unwrap() > 9.0);

        // p = 0: running tail-sup
        let tail = ep_partial_sums(&[1.0, 3.0, 2.0, 0.5], 0.0).unwrap();
        assert_eq!(tail, vec![3.0, 3.0, 2.0, 0.5]);
    }

    #[test]
    fn window_slicing() {
        let g = 100usize;
        // f = 0
        let zeros = vec![0.0; 5 * g];
        for w in theta_window(&zeros, g).unwrap() {
            assert!(w.values().iter().all(|&v| v == 0.0));
        }

        // f(t) = 1/t on [1, N+1]: window n has sup-norm 1/(n+1)
        let n_windows = 6;
        let samples: Vec<f64> = (0..n_windows * g)
            .map(|i| 1.0 / (1.0 + i as f64 / g as f64))
            .collect();
        let windows = theta_window(&samples, g).unwrap();
        let zero = StepFunction::constant(0.0);
        for (n, w) in windows.iter().enumerate() {
            let sup = sup_distance(w, &zero.refine(w.pieces()).unwrap()).unwrap();
            assert_abs_diff_eq!(sup, 1.0 / (n as f64 + 1.0), epsilon = 1e-15);
        }

        // constant offset shows up as constant window distance
        let shifted: Vec<f64> = samples.iter().map(|v| v + 0.3).collect();
        let shifted_windows = theta_window(&shifted, g).unwrap();
        for (a, b) in windows.iter().zip(&shifted_windows) {
            assert_abs_diff_eq!(sup_distance(a, b).unwrap(), 0.3, epsilon = 1e-12);
        }

        assert!(theta_window(&samples[..g + 3], g).is_err());
    }
}
