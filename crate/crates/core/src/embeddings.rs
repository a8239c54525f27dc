//! Explicit embedding constructions: the Koch-type curve `K_r` and its
//! extension to the whole line, coordinatewise composition to higher
//! dimension, lifts between function and sequence spaces, Kuratowski
//! sup-norm embeddings, grid discretization, and dyadic rounding.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{lr_distance, EmbeddingTable, FiniteMetricSpace, PNormVector, StepFunction};

/// Default base-4 descent depth; the contraction ratio to this power is
/// below double precision, so deeper descent cannot change the result.
pub const DEFAULT_DEPTH: u32 = 64;

/// Default extension step cap for [`koch_extend`].
pub const DEFAULT_MAX_STEPS: u32 = 60;

/// Similarity ratio, derived Holder exponent and apex height of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KochParams {
    pub r: f64,
    pub alpha: f64,
    pub h: f64,
}

impl KochParams {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.25 && r < 0.5) {
            return Err(Error::invalid(format!(
                "similarity ratio must lie in (1/4, 1/2), got {r}"
            )));
        }
        let alpha = (1.0 / r).ln() / 4f64.ln();
        let h = (r * r - (0.5 - r) * (0.5 - r)).sqrt();
        Ok(KochParams { r, alpha, h })
    }

    /// Parameters with `r = 4^{-alpha}` for a target exponent in (1/2, 1).
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "curve exponent must lie in (1/2, 1), got {alpha}"
            )));
        }
        KochParams::new(4f64.powf(-alpha))
    }
}

/// Orientation-preserving planar similarity `z -> a z + b` (complex).
#[derive(Debug, Clone, Copy)]
struct Similarity {
    ax: f64,
    ay: f64,
    bx: f64,
    by: f64,
}

impl Similarity {
    const IDENTITY: Similarity = Similarity { ax: 1.0, ay: 0.0, bx: 0.0, by: 0.0 };

    fn segment(from: (f64, f64), to: (f64, f64)) -> Similarity {
        Similarity {
            ax: to.0 - from.0,
            ay: to.1 - from.1,
            bx: from.0,
            by: from.1,
        }
    }

    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.ax * x - self.ay * y + self.bx,
            self.ax * y + self.ay * x + self.by,
        )
    }

    /// `self` after `inner`: `(self . inner)(z) = self(inner(z))`.
    fn then_inner(&self, inner: &Similarity) -> Similarity {
        let (bx, by) = self.apply(inner.bx, inner.by);
        Similarity {
            ax: self.ax * inner.ax - self.ay * inner.ay,
            ay: self.ax * inner.ay + self.ay * inner.ax,
            bx,
            by,
        }
    }
}

/// The four similarities carrying the unit segment onto the polyline
/// `(0,0) - (r,0) - (1/2,h) - (1-r,0) - (1,0)`.
fn base_maps(params: &KochParams) -> [Similarity; 4] {
    let pts = [
        (0.0, 0.0),
        (params.r, 0.0),
        (0.5, params.h),
        (1.0 - params.r, 0.0),
        (1.0, 0.0),
    ];
    [
        Similarity::segment(pts[0], pts[1]),
        Similarity::segment(pts[1], pts[2]),
        Similarity::segment(pts[2], pts[3]),
        Similarity::segment(pts[3], pts[4]),
    ]
}

/// Evaluate the self-similar curve at `t` by descending `depth` base-4
/// digits and applying the composed similarities to the residual point.
/// The error is at most `r^depth` times the curve diameter.
pub fn koch_eval(params: &KochParams, t: f64, depth: u32) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("curve parameter must lie in [0,1], got {t}")));
    }
    if depth == 0 {
        return Err(Error::invalid("depth must be positive"));
    }
    let maps = base_maps(params);
    let mut acc = Similarity::IDENTITY;
    let mut residual = t;
    for _ in 0..depth {
        let digit = ((residual * 4.0).floor() as usize).min(3);
        residual = residual * 4.0 - digit as f64;
        acc = acc.then_inner(&maps[digit]);
        if acc.ax.abs().max(acc.ay.abs()) == 0.0 {
            break;
        }
    }
    Ok(acc.apply(residual, 0.0))
}

/// Affine frame of the `m`-th extension step: on `[a, a + 4^m]` the extended
/// curve is `r^{-m} K((t - a) / 4^m) + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionFrame {
    pub step: u32,
    pub a: f64,
    pub c: (f64, f64),
    pub scale: f64,
}

impl ExtensionFrame {
    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.a + 4f64.powi(self.step as i32))
    }
}

/// Frames of the alternating extension: odd steps reuse the first quarter
/// (`a`, `c` unchanged), even steps append as the last quarter
/// (`a -> a - 3 * 4^m`, `c -> c - (r^{-(m+1)} - r^{-m}, 0)`).
pub fn extension_frames(params: &KochParams, max_steps: u32) -> Vec<ExtensionFrame> {
    let mut frames = Vec::with_capacity(max_steps as usize + 1);
    let mut a = 0.0;
    let mut c = (0.0, 0.0);
    frames.push(ExtensionFrame { step: 0, a, c, scale: 1.0 });
    for m in 0..max_steps {
        let next = m + 1;
        if next % 2 == 0 {
            a -= 3.0 * 4f64.powi(m as i32);
            c.0 -= params.r.powi(-(next as i32)) - params.r.powi(-(m as i32));
        }
        frames.push(ExtensionFrame {
            step: next,
            a,
            c,
            scale: params.r.powi(-(next as i32)),
        });
    }
    frames
}

/// Evaluate the extension of the curve to the real line, using the minimal
/// admissible frame.
pub fn koch_extend(params: &KochParams, t: f64, max_steps: u32, depth: u32) -> Result<(f64, f64)> {
    for frame in extension_frames(params, max_steps) {
        let (lo, hi) = frame.domain();
        if t >= lo && t <= hi {
            let base = koch_eval(params, (t - frame.a) / 4f64.powi(frame.step as i32), depth)?;
            return Ok((
                frame.scale * base.0 + frame.c.0,
                frame.scale * base.1 + frame.c.1,
            ));
        }
    }
    Err(Error::invalid(format!(
        "t = {t} outside the reachable domain; increase max_steps"
    )))
}

/// Number of curve stages needed for exponent `alpha`: minimal `k` with
/// `alpha^{1/k} > 1/2`.
pub fn line_map_stages(alpha: f64) -> Result<u32> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!(
            "line map exponent must lie in (0, 1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(0);
    }
    Ok((1.0 / alpha).log2().floor() as u32 + 1)
}

/// Map the real line into `R^{2^k}` with empirical Holder exponent `alpha`,
/// by applying the extended curve coordinatewise `k` times with stage
/// exponent `alpha^{1/k}`. `alpha = 1` is the identity.
pub fn holder_line_map(alpha: f64, t: f64) -> Result<Vec<f64>> {
    let k = line_map_stages(alpha)?;
    if k == 0 {
        return Ok(vec![t]);
    }
    let beta = alpha.powf(1.0 / k as f64);
    let params = KochParams::from_alpha(beta)?;
    let mut coords = vec![t];
    for _ in 0..k {
        let mut next = Vec::with_capacity(coords.len() * 2);
        for x in &coords {
            let (px, py) = koch_extend(&params, *x, DEFAULT_MAX_STEPS, DEFAULT_DEPTH)?;
            next.push(px);
            next.push(py);
        }
        coords = next;
    }
    Ok(coords)
}

/// A map from reals to coordinate tuples, evaluated pointwise.
pub trait PointMap {
    fn out_dim(&self) -> usize;
    /// `None` when `x` lies outside the map's domain.
    fn image(&self, x: f64) -> Option<Vec<f64>>;
}

/// Tabulated map on a declared grid; lookups must hit a grid node within
/// the stated tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TabulatedMap {
    pub entries: Vec<(f64, Vec<f64>)>,
    #[serde(default = "default_lookup_tol")]
    pub tol: f64,
}

fn default_lookup_tol() -> f64 {
    1e-9
}

impl TabulatedMap {
    pub fn new(entries: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("tabulated map needs at least one entry"));
        }
        let dim = entries[0].1.len();
        if entries.iter().any(|(_, out)| out.len() != dim) {
            return Err(Error::invalid("tabulated outputs must share a dimension"));
        }
        Ok(TabulatedMap { entries, tol: default_lookup_tol() })
    }

    pub fn tabulate(grid: &[f64], f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        TabulatedMap::new(grid.iter().map(|&x| (x, f(x))).collect())
    }
}

impl PointMap for TabulatedMap {
    fn out_dim(&self) -> usize {
        self.entries[0].1.len()
    }

    fn image(&self, x: f64) -> Option<Vec<f64>> {
        self.entries
            .iter()
            .find(|(g, _)| (g - x).abs() <= self.tol)
            .map(|(_, out)| out.clone())
    }
}

/// Closure-backed map for programmatic use.
#[derive(Clone)]
pub struct FnPointMap {
    dim: usize,
    f: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl FnPointMap {
    pub fn new(dim: usize, f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        FnPointMap { dim, f: Arc::new(f) }
    }

    pub fn identity() -> Self {
        FnPointMap::new(1, |x| vec![x])
    }
}

impl PointMap for FnPointMap {
    fn out_dim(&self) -> usize {
        self.dim
    }

    fn image(&self, x: f64) -> Option<Vec<f64>> {
        let out = (self.f)(x);
        debug_assert_eq!(out.len(), self.dim);
        Some(out)
    }
}

/// Lift a map `T: R -> R^n` to step functions: block `k` of the output
/// carries `n^{1/s} T(f(.))(k)`, giving `n * m` pieces. The `L_s` norm of a
/// lifted difference equals the integral of the `l_s` norms exactly.
pub fn lift_lr(map: &dyn PointMap, f: &StepFunction, r: f64, s: f64) -> Result<StepFunction> {
    if r < 1.0 || s < 1.0 {
        return Err(Error::invalid("exponents must satisfy r, s >= 1"));
    }
    let n = map.out_dim();
    let m = f.pieces();
    let factor = (n as f64).powf(1.0 / s);
    let mut images = Vec::with_capacity(m);
    for &v in f.values() {
        images.push(map.image(v).ok_or(Error::UndefinedAt(v))?);
    }
    let mut out = Vec::with_capacity(n * m);
    for k in 0..n {
        for img in &images {
            out.push(factor * img[k]);
        }
    }
    StepFunction::new(out)
}

/// Lift a map `T: R -> R^n` to finite sequences through the block pairing
/// `<k, m>_n = n k + (m - 1)`; sup-norm Holder bounds of `T` transfer.
pub fn lift_c0(map: &dyn PointMap, x: &[f64]) -> Result<Vec<f64>> {
    let n = map.out_dim();
    let mut out = vec![0.0; n * x.len()];
    for (k, &v) in x.iter().enumerate() {
        let img = map.image(v).ok_or(Error::UndefinedAt(v))?;
        out[n * k..n * (k + 1)].copy_from_slice(&img);
    }
    Ok(out)
}

/// Discretize a family of step functions by grid sampling:
/// `T(f) = m^{-1/r} (f(0), f(1/m), ..., f((m-1)/m))`, the sample taken from
/// the piece containing the grid point (the first piece covers 0).
pub fn discretize_lr(family: &[StepFunction], r: f64, m: usize) -> Result<Vec<PNormVector>> {
    if m == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    if r < 1.0 {
        return Err(Error::invalid("exponent must satisfy r >= 1"));
    }
    let factor = (m as f64).powf(-1.0 / r);
    family
        .iter()
        .map(|f| {
            let pieces = f.pieces();
            let coords = (0..m)
                .map(|j| {
                    // the grid point belongs to the piece starting at it, so a
                    // grid refining every breakpoint reproduces the integral
                    let t = j as f64 / m as f64;
                    let idx = ((t * pieces as f64).floor() as usize).min(pieces - 1);
                    factor * f.values()[idx]
                })
                .collect();
            PNormVector::new(coords, r)
        })
        .collect()
}

/// A sample count above which the discretization sandwich
/// `(1/2)||f_i - f_j||_r <= ||T f_i - T f_j||_r <= 2 ||f_i - f_j||_r`
/// is guaranteed for this family: grid cells missing a breakpoint
/// contribute exactly, and the at most `B` straddling cells are bounded by
/// the value range.
pub fn discretize_threshold(family: &[StepFunction], r: f64) -> Result<usize> {
    if family.len() < 2 {
        return Err(Error::invalid("need at least two functions"));
    }
    let breakpoints: usize = family.iter().map(|f| f.pieces()).sum();
    let mut min_dist = f64::INFINITY;
    let mut max_range = 0.0f64;
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            min_dist = min_dist.min(lr_distance(&family[i], &family[j], r)?);
            let lo_i = family[i].values().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi_i = family[i].values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo_j = family[j].values().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi_j = family[j].values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            max_range = max_range.max((hi_i - lo_j).abs()).max((hi_j - lo_i).abs());
        }
    }
    if min_dist == 0.0 {
        return Err(Error::Degenerate("family contains equal functions".into()));
    }
    let margin = 1.0 - 0.5f64.powf(r);
    let needed = breakpoints as f64 * max_range.powf(r) / (margin * min_dist.powf(r));
    Ok(needed.ceil().max(1.0) as usize)
}

/// Embed a finite metric space isometrically into sup-norm coordinates:
/// `T(u)(m) = d(u, x_m)`. With `recentered`, each coordinate is shifted
/// into `[0, diam(M)]`.
pub fn kuratowski_embed(space: &FiniteMetricSpace, recentered: bool) -> Result<EmbeddingTable> {
    let n = space.len();
    let mut shift = vec![0.0; n];
    if recentered {
        for m in 0..n {
            shift[m] = (0..n).map(|u| space.dist(u, m)).fold(f64::INFINITY, f64::min);
        }
    }
    let images: BTreeMap<String, PNormVector> = space
        .labels()
        .iter()
        .enumerate()
        .map(|(u, label)| {
            let coords = (0..n).map(|m| space.dist(u, m) - shift[m]).collect();
            PNormVector::new(coords, f64::INFINITY).map(|v| (label.clone(), v))
        })
        .collect::<Result<_>>()?;
    EmbeddingTable::new(space.clone(), images, 1.0)
}

/// Round entry `n` down to the dyadic grid `{k / 2^n}`; the error is below
/// `2^{-n}`.
pub fn dyadic_round(x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .enumerate()
        .map(|(n, &v)| {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!(
                    "entry {n} = {v} outside [0, 1]"
                )));
            }
            if n >= 1074 {
                return Ok(v);
            }
            let scale = 2f64.powi(n as i32);
            Ok((v * scale).floor() / scale)
        })
        .collect()
}
