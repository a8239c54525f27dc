//! Rademacher type/cotype ratios, metric type on the discrete hypercube,
//! metric cotype on the discrete torus, the sigma torus map, the closed-form
//! type/cotype profile algebra, and the verdict predicates derived from it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{local_min_distortion, SearchConfig};
use crate::spaces::{
    holder_distortion, metric_space_from_points, EmbeddingTable, PNormVector,
};
use crate::util::{PairwiseAccumulator, SplitMix64};

/// Exact Rademacher enumeration is limited to `2^n` sign patterns with
/// `n` at most this value.
pub const DEFAULT_RADEMACHER_EXACT_LIMIT: u32 = 24;

/// Exact metric-cotype enumeration is limited to `m^n * 3^n` states.
pub const DEFAULT_COTYPE_EXACT_BUDGET: u128 = 100_000_000;

/// Exact or seeded-sample evaluation of an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SampleMode {
    Exact,
    Sampled { seed: u64, count: usize },
}

/// A ratio together with the standard error of a sampled estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

impl RatioEstimate {
    fn exact(value: f64) -> Self {
        RatioEstimate { value, std_error: None }
    }
}

/// Supremum of types and infimum of cotypes of a space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeCotypeProfile {
    pub p_sup: f64,
    /// `f64::INFINITY` encodes "no finite cotype".
    pub q_inf: f64,
}

fn sign_pattern_norm_power(vectors: &[PNormVector], signs: u64, exponent: f64) -> f64 {
    let dim = vectors[0].dim();
    let mut sum = vec![0.0; dim];
    for (j, v) in vectors.iter().enumerate() {
        let s = if signs >> j & 1 == 0 { 1.0 } else { -1.0 };
        for (acc, c) in sum.iter_mut().zip(v.coords()) {
            *acc += s * c;
        }
    }
    crate::spaces::p_norm_of(&sum, vectors[0].p()).powf(exponent)
}

fn rademacher_ratio(
    vectors: &[PNormVector],
    exponent: f64,
    mode: SampleMode,
    exact_limit: u32,
) -> Result<RatioEstimate> {
    if vectors.is_empty() {
        return Err(Error::invalid("family must be nonempty"));
    }
    if exponent < 1.0 {
        return Err(Error::invalid("exponent must satisfy p >= 1"));
    }
    let p0 = vectors[0].p();
    let d0 = vectors[0].dim();
    if vectors.iter().any(|v| v.p() != p0 || v.dim() != d0) {
        return Err(Error::invalid("family must share exponent and dimension"));
    }
    let n = vectors.len();
    let denom_terms: Vec<f64> = vectors.iter().map(|v| v.norm().powf(exponent)).collect();
    let denom = crate::util::pairwise_sum(&denom_terms).powf(1.0 / exponent);
    if denom == 0.0 {
        return Err(Error::Degenerate("all vectors are zero".into()));
    }
    match mode {
        SampleMode::Exact => {
            if n as u32 > exact_limit {
                return Err(Error::BudgetExceeded(1u128 << n, 1u128 << exact_limit));
            }
            let mut acc = PairwiseAccumulator::new();
            for signs in 0..(1u64 << n) {
                acc.push(sign_pattern_norm_power(vectors, signs, exponent));
            }
            let mean = acc.sum() / (1u64 << n) as f64;
            Ok(RatioEstimate::exact(mean.powf(1.0 / exponent) / denom))
        }
        SampleMode::Sampled { seed, count } => {
            if count == 0 {
                return Err(Error::invalid("sample count must be positive"));
            }
            let mut acc = PairwiseAccumulator::new();
            let mut acc_sq = PairwiseAccumulator::new();
            for i in 0..count {
                let signs = SplitMix64::keyed(seed, i as u64).next_u64();
                let term = sign_pattern_norm_power(vectors, signs, exponent);
                acc.push(term);
                acc_sq.push(term * term);
            }
            let mean = acc.sum() / count as f64;
            let var = (acc_sq.sum() / count as f64 - mean * mean).max(0.0);
            let se_mean = (var / count as f64).sqrt();
            let value = mean.powf(1.0 / exponent) / denom;
            // delta method through x -> x^{1/p}
            let se = if mean > 0.0 {
                mean.powf(1.0 / exponent - 1.0) / exponent * se_mean / denom
            } else {
                0.0
            };
            Ok(RatioEstimate { value, std_error: Some(se) })
        }
    }
}

/// Least constant witnessing the type-`p` inequality for this family:
/// the sign-averaged norm mean over the `l_p` sum of the norms.
pub fn rademacher_type_ratio(
    vectors: &[PNormVector],
    p: f64,
    mode: SampleMode,
) -> Result<RatioEstimate> {
    rademacher_ratio(vectors, p, mode, DEFAULT_RADEMACHER_EXACT_LIMIT)
}

/// Greatest constant witnessing the cotype-`q` inequality for this family
/// (the same ratio with exponent `q >= 2`).
pub fn rademacher_cotype_ratio(
    vectors: &[PNormVector],
    q: f64,
    mode: SampleMode,
) -> Result<RatioEstimate> {
    if q < 2.0 {
        return Err(Error::invalid("cotype exponent must satisfy q >= 2"));
    }
    rademacher_ratio(vectors, q, mode, DEFAULT_RADEMACHER_EXACT_LIMIT)
}

/// A map from the vertices of `{0,1}^n`, indexed by bitmask.
#[derive(Debug, Clone)]
pub struct HypercubeMap {
    n: u32,
    images: Vec<PNormVector>,
}

impl HypercubeMap {
    pub fn new(n: u32, images: Vec<PNormVector>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("hypercube dimension must be >= 1"));
        }
        if images.len() != 1usize << n {
            return Err(Error::invalid(format!(
                "expected {} images, got {}",
                1usize << n,
                images.len()
            )));
        }
        let p0 = images[0].p();
        let d0 = images[0].dim();
        if images.iter().any(|v| v.p() != p0 || v.dim() != d0) {
            return Err(Error::invalid("images must share exponent and dimension"));
        }
        Ok(HypercubeMap { n, images })
    }

    /// The vertices of `{0,1}^n` as points of `l_p^n`.
    pub fn identity(n: u32, vector_p: f64) -> Result<Self> {
        let images = (0..1u64 << n)
            .map(|mask| {
                let coords = (0..n).map(|j| (mask >> j & 1) as f64).collect();
                PNormVector::new(coords, vector_p)
            })
            .collect::<Result<Vec<_>>>()?;
        HypercubeMap::new(n, images)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn images(&self) -> &[PNormVector] {
        &self.images
    }

    pub fn image(&self, vertex: u64) -> &PNormVector {
        &self.images[vertex as usize]
    }
}

/// Diagonal-to-edge ratio of the metric-type inequality, by exhaustive
/// enumeration: `(sum_D d^2)^{1/2} / (n^{1/p - 1/2} (sum_E d^2)^{1/2})`.
pub fn metric_type_ratio(map: &HypercubeMap, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::invalid("exponent must satisfy p >= 1"));
    }
    let n = map.n;
    if n > 16 {
        return Err(Error::BudgetExceeded(1u128 << n, 1u128 << 16));
    }
    let full = (1u64 << n) - 1;
    let mut edges = PairwiseAccumulator::new();
    let mut diagonals = PairwiseAccumulator::new();
    for s in 0..=full {
        for j in 0..n {
            let t = s ^ (1 << j);
            if s < t {
                let d = map.image(s).distance(map.image(t))?;
                edges.push(d * d);
            }
        }
        let t = s ^ full;
        if s < t {
            let d = map.image(s).distance(map.image(t))?;
            diagonals.push(d * d);
        }
    }
    let edge_sum = edges.sum();
    if edge_sum == 0.0 {
        return Err(Error::Degenerate("all edge distances are zero".into()));
    }
    let scale = (n as f64).powf(1.0 / p - 0.5);
    Ok(diagonals.sum().sqrt() / (scale * edge_sum.sqrt()))
}

/// How distances between torus images are measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridMetric {
    /// The vector's own `l_p` norm.
    VectorNorm,
    /// Coordinates are planar pairs; per-pair modulus combined with
    /// exponent `q`.
    ComplexModulus(f64),
}

#[derive(Clone)]
enum GridImages {
    Dense(Vec<PNormVector>),
    Generator(Arc<dyn Fn(&[u32]) -> PNormVector + Send + Sync>),
}

/// A map from the discrete torus `Z_m^n`.
#[derive(Clone)]
pub struct GridMap {
    n: u32,
    m: u32,
    images: GridImages,
    metric: GridMetric,
}

impl GridMap {
    pub fn dense(n: u32, m: u32, images: Vec<PNormVector>, metric: GridMetric) -> Result<Self> {
        check_grid_shape(n, m)?;
        if images.len() != (m as usize).pow(n) {
            return Err(Error::invalid(format!(
                "expected {} images, got {}",
                (m as usize).pow(n),
                images.len()
            )));
        }
        Ok(GridMap { n, m, images: GridImages::Dense(images), metric })
    }

    pub fn generator(
        n: u32,
        m: u32,
        f: impl Fn(&[u32]) -> PNormVector + Send + Sync + 'static,
        metric: GridMetric,
    ) -> Result<Self> {
        check_grid_shape(n, m)?;
        Ok(GridMap { n, m, images: GridImages::Generator(Arc::new(f)), metric })
    }

    /// `Z_m^n` as points of `l_p^n` with coordinates `s_j`.
    pub fn identity(n: u32, m: u32, vector_p: f64) -> Result<Self> {
        GridMap::generator(
            n,
            m,
            move |s| {
                PNormVector::new(s.iter().map(|&k| k as f64).collect(), vector_p).unwrap()
            },
            GridMetric::VectorNorm,
        )
    }

    /// The torus map sending each coordinate to the unit circle.
    pub fn sigma(n: u32, m: u32, q: f64) -> Result<Self> {
        GridMap::generator(
            n,
            m,
            move |s| sigma_embed(s, m, q).unwrap(),
            GridMetric::ComplexModulus(q),
        )
    }

    /// Each coordinate mapped through the composed line map of the stated
    /// exponent; coordinates concatenated, distances in the `l_q` norm.
    pub fn koch_composite(n: u32, m: u32, q: f64, alpha: f64) -> Result<Self> {
        let dim = crate::embeddings::holder_line_map(alpha, 0.0)?.len();
        let _ = dim;
        GridMap::generator(
            n,
            m,
            move |s| {
                let coords: Vec<f64> = s
                    .iter()
                    .flat_map(|&k| {
                        crate::embeddings::holder_line_map(alpha, k as f64 / m as f64).unwrap()
                    })
                    .collect();
                PNormVector::new(coords, q).unwrap()
            },
            GridMetric::VectorNorm,
        )
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn metric(&self) -> GridMetric {
        self.metric
    }

    pub fn image(&self, s: &[u32]) -> PNormVector {
        match &self.images {
            GridImages::Dense(images) => {
                let mut idx = 0usize;
                for &k in s.iter().rev() {
                    idx = idx * self.m as usize + k as usize;
                }
                images[idx].clone()
            }
            GridImages::Generator(f) => f(s),
        }
    }

    pub fn distance(&self, a: &PNormVector, b: &PNormVector) -> Result<f64> {
        match self.metric {
            GridMetric::VectorNorm => a.distance(b),
            GridMetric::ComplexModulus(q) => complex_lq_distance(a.coords(), b.coords(), q),
        }
    }
}

fn check_grid_shape(n: u32, m: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("torus dimension must be >= 1"));
    }
    if m < 2 || m % 2 != 0 {
        return Err(Error::invalid("modulus must be even and >= 2"));
    }
    Ok(())
}

/// `l_q` combination of planar-pair moduli; coordinates must pair up.
pub fn complex_lq_distance(a: &[f64], b: &[f64], q: f64) -> Result<f64> {
    if a.len() != b.len() || a.len() % 2 != 0 {
        return Err(Error::invalid("complex coordinates must be pairs"));
    }
    let moduli: Vec<f64> = a
        .chunks(2)
        .zip(b.chunks(2))
        .map(|(pa, pb)| ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt())
        .collect();
    Ok(crate::spaces::p_norm_of(&moduli, q))
}

/// Coordinate `j` of `s` mapped to `(cos 2 pi s_j / m, sin 2 pi s_j / m)`.
pub fn sigma_embed(s: &[u32], m: u32, q: f64) -> Result<PNormVector> {
    if m < 2 {
        return Err(Error::invalid("modulus must be >= 2"));
    }
    let mut coords = Vec::with_capacity(2 * s.len());
    for &k in s {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        coords.push(angle.cos());
        coords.push(angle.sin());
    }
    PNormVector::new(coords, q)
}

fn add_mod(s: &[u32], j: usize, delta: i64, m: u32) -> Vec<u32> {
    let mut out = s.to_vec();
    out[j] = ((s[j] as i64 + delta).rem_euclid(m as i64)) as u32;
    out
}

fn for_each_grid_point(n: u32, m: u32, mut f: impl FnMut(&[u32])) {
    let mut s = vec![0u32; n as usize];
    loop {
        f(&s);
        let mut j = 0;
        loop {
            if j == n as usize {
                return;
            }
            s[j] += 1;
            if s[j] < m {
                break;
            }
            s[j] = 0;
            j += 1;
        }
    }
}

/// Least admissible cotype constant for this map:
/// `((sum_j E_s[d(H(s + (m/2) e_j), H(s))^q]) / E_{eps,s}[d(H(s+eps), H(s))^q])^{1/q} / m`.
/// Both sides zero (constant map) returns 0 by convention.
pub fn metric_cotype_ratio(map: &GridMap, q: f64, mode: SampleMode) -> Result<RatioEstimate> {
    if q < 1.0 {
        return Err(Error::invalid("exponent must satisfy q >= 1"));
    }
    let n = map.n;
    let m = map.m;
    match mode {
        SampleMode::Exact => {
            let states = (m as u128).pow(n) * 3u128.pow(n);
            if states > DEFAULT_COTYPE_EXACT_BUDGET {
                return Err(Error::BudgetExceeded(states, DEFAULT_COTYPE_EXACT_BUDGET));
            }
            let mut shift_acc = PairwiseAccumulator::new();
            let mut step_acc = PairwiseAccumulator::new();
            let mut err = None;
            for_each_grid_point(n, m, |s| {
                if err.is_some() {
                    return;
                }
                let base = map.image(s);
                for j in 0..n as usize {
                    let shifted = map.image(&add_mod(s, j, m as i64 / 2, m));
                    match map.distance(&shifted, &base) {
                        Ok(d) => shift_acc.push(d.powf(q)),
                        Err(e) => err = Some(e),
                    }
                }
                // all eps in {-1, 0, 1}^n via a ternary counter
                let mut eps = vec![-1i64; n as usize];
                loop {
                    let mut t = s.to_vec();
                    for (j, &e) in eps.iter().enumerate() {
                        t[j] = ((s[j] as i64 + e).rem_euclid(m as i64)) as u32;
                    }
                    match map.distance(&map.image(&t), &base) {
                        Ok(d) => step_acc.push(d.powf(q)),
                        Err(e) => err = Some(e),
                    }
                    let mut j = 0;
                    loop {
                        if j == n as usize {
                            return;
                        }
                        eps[j] += 1;
                        if eps[j] <= 1 {
                            break;
                        }
                        eps[j] = -1;
                        j += 1;
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let grid_size = (m as f64).powi(n as i32);
            let lhs = shift_acc.sum() / grid_size;
            let rhs = step_acc.sum() / (grid_size * 3f64.powi(n as i32));
            if rhs == 0.0 {
                return Ok(RatioEstimate::exact(0.0));
            }
            Ok(RatioEstimate::exact((lhs / rhs).powf(1.0 / q) / m as f64))
        }
        SampleMode::Sampled { seed, count } => {
            if count == 0 {
                return Err(Error::invalid("sample count must be positive"));
            }
            let mut lhs_acc = PairwiseAccumulator::new();
            let mut lhs_sq = PairwiseAccumulator::new();
            let mut rhs_acc = PairwiseAccumulator::new();
            let mut rhs_sq = PairwiseAccumulator::new();
            for i in 0..count {
                let mut rng = SplitMix64::keyed(seed, i as u64);
                let s: Vec<u32> = (0..n).map(|_| rng.range_usize(m as usize) as u32).collect();
                let base = map.image(&s);
                let mut shift_term = 0.0;
                for j in 0..n as usize {
                    let shifted = map.image(&add_mod(&s, j, m as i64 / 2, m));
                    shift_term += map.distance(&shifted, &base)?.powf(q);
                }
                lhs_acc.push(shift_term);
                lhs_sq.push(shift_term * shift_term);
                let mut t = s.clone();
                for j in 0..n as usize {
                    let e = rng.range_usize(3) as i64 - 1;
                    t[j] = ((s[j] as i64 + e).rem_euclid(m as i64)) as u32;
                }
                let step_term = map.distance(&map.image(&t), &base)?.powf(q);
                rhs_acc.push(step_term);
                rhs_sq.push(step_term * step_term);
            }
            let cf = count as f64;
            let lhs = lhs_acc.sum() / cf;
            let rhs = rhs_acc.sum() / cf;
            if rhs == 0.0 {
                return Ok(RatioEstimate { value: 0.0, std_error: Some(0.0) });
            }
            let lhs_var = (lhs_sq.sum() / cf - lhs * lhs).max(0.0);
            let rhs_var = (rhs_sq.sum() / cf - rhs * rhs).max(0.0);
            let value = (lhs / rhs).powf(1.0 / q) / m as f64;
            let rel = ((lhs_var / cf).sqrt() / lhs).hypot((rhs_var / cf).sqrt() / rhs);
            Ok(RatioEstimate { value, std_error: Some(value * rel / q) })
        }
    }
}

/// Closed-form descriptor of a classical space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpaceDescriptor {
    /// The sequence space `l_r`.
    SmallLp(f64),
    /// The function space `L_r[0,1]`.
    BigLp(f64),
    /// Null sequences under the sup norm.
    C0,
    /// `l_q(X)` over an inner space.
    SeqOver(f64, Box<SpaceDescriptor>),
}

/// Type/cotype profile from the closed-form algebra:
/// `l_r, L_r -> (min(r,2), max(r,2))`; `l_q(X) -> (min(p(X),q), max(q(X),q))`;
/// `c_0 -> (1, inf)`.
pub fn space_profile(descriptor: &SpaceDescriptor) -> Result<TypeCotypeProfile> {
    match descriptor {
        SpaceDescriptor::SmallLp(r) | SpaceDescriptor::BigLp(r) => {
            if *r < 1.0 {
                return Err(Error::invalid("space exponent must satisfy r >= 1"));
            }
            Ok(TypeCotypeProfile { p_sup: r.min(2.0), q_inf: r.max(2.0) })
        }
        SpaceDescriptor::C0 => Ok(TypeCotypeProfile { p_sup: 1.0, q_inf: f64::INFINITY }),
        SpaceDescriptor::SeqOver(q, inner) => {
            if *q < 1.0 {
                return Err(Error::invalid("sequence exponent must satisfy q >= 1"));
            }
            let inner = space_profile(inner)?;
            Ok(TypeCotypeProfile {
                p_sup: inner.p_sup.min(*q),
                q_inf: inner.q_inf.max(*q),
            })
        }
    }
}

/// The three necessary conditions for reducibility between the relations
/// attached to `l_r` at exponent `p` and `l_s` at exponent `q`, evaluated
/// literally:
/// `p <= q`; `min(r/p, 2/p) >= min(s/q, 1, 2/q)`; `max(r, 2) <= max(s, q, 2)`.
pub fn necessary_conditions(r: f64, s: f64, p: f64, q: f64) -> Result<(bool, bool, bool)> {
    for (name, v) in [("r", r), ("s", s), ("p", p), ("q", q)] {
        if !(v >= 1.0 && v.is_finite()) {
            return Err(Error::invalid(format!("{name} must lie in [1, inf), got {v}")));
        }
    }
    let c1 = p <= q;
    let c2 = (r / p).min(2.0 / p) >= (s / q).min(1.0).min(2.0 / q);
    let c3 = r.max(2.0) <= s.max(q).max(2.0);
    Ok((c1, c2, c3))
}

/// The if-and-only-if verdict for `r, s` in `[1,2]` with `s <= q`:
/// reducible exactly when `p <= q` and `r/p >= s/q`.
pub fn iff_verdict(r: f64, p: f64, s: f64, q: f64) -> Result<bool> {
    if !(1.0..=2.0).contains(&r) {
        return Err(Error::invalid(format!("hypothesis r in [1,2] violated: r = {r}")));
    }
    if !(1.0..=2.0).contains(&s) {
        return Err(Error::invalid(format!("hypothesis s in [1,2] violated: s = {s}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("hypothesis p in [1,inf) violated: p = {p}")));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::invalid(format!("hypothesis q in [1,inf) violated: q = {q}")));
    }
    if s > q {
        return Err(Error::invalid(format!("hypothesis s <= q violated: s = {s}, q = {q}")));
    }
    Ok(p <= q && r / p >= s / q)
}

/// One row of the hypercube obstruction experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstructionRow {
    pub n: u32,
    /// Measured Holder constant of the embedding used (identity candidate
    /// or search output).
    pub measured_a: f64,
    pub a_squared: f64,
    /// Metric-type ratio of the source hypercube configuration at the
    /// target exponent.
    pub source_metric_type_ratio: f64,
    /// Informational growth column `n^{alpha/p_src - 1/p_tgt}`.
    pub growth: f64,
}

#[derive(Debug, Clone)]
pub struct ObstructionConfig {
    pub search: SearchConfig,
    /// Evaluate the coordinate-identity candidate instead of searching.
    pub identity_candidate: bool,
}

/// For each `n`, embed the hypercube of `l_{p_src}^n` into `l_{p_tgt}`
/// coordinates (identity candidate or distortion search), and report the
/// measured constant next to the growth sequence. Only measured quantities
/// are asserted; the growth column is informational.
pub fn hypercube_obstruction_experiment(
    n_values: &[u32],
    p_src: f64,
    p_tgt: f64,
    alpha: f64,
    cfg: &ObstructionConfig,
) -> Result<Vec<ObstructionRow>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha must lie in (0, 1]"));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let source_map = HypercubeMap::identity(n, p_src)?;
        let labels: Vec<String> = (0..1u64 << n).map(|mask| mask.to_string()).collect();
        let space = metric_space_from_points(source_map.images(), labels.clone())?;
        let measured_a = if cfg.identity_candidate {
            let images = labels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    PNormVector::new(source_map.images()[i].coords().to_vec(), p_tgt)
                        .map(|v| (l.clone(), v))
                })
                .collect::<Result<_>>()?;
            let table = EmbeddingTable::new(space.clone(), images, alpha)?;
            holder_distortion(&space, &table)?.constant_a
        } else {
            let mut search_cfg = cfg.search.clone();
            search_cfg.alpha = alpha;
            search_cfg.target_dim = n as usize;
            search_cfg.target_p = p_tgt;
            local_min_distortion(&space, &search_cfg)?.0.constant_a
        };
        let source_metric_type_ratio = metric_type_ratio(&source_map, p_tgt)?;
        let growth = (n as f64).powf(alpha / p_src - 1.0 / p_tgt);
        rows.push(ObstructionRow {
            n,
            measured_a,
            a_squared: measured_a * measured_a,
            source_metric_type_ratio,
            growth,
        });
    }
    Ok(rows)
}
