//! Core value types: `l_p` vectors, step functions, finite metric spaces,
//! and Holder distortion reports.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::util::{lcm, pairwise_sum};
use crate::TOL;

/// A point of `l_p^d`: finite coordinates plus a norm exponent.
///
/// `p = f64::INFINITY` selects the sup norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PNormVector {
    coords: Vec<f64>,
    p: f64,
}

impl PNormVector {
    pub fn new(coords: Vec<f64>, p: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("coords must be nonempty"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coords must be finite"));
        }
        check_exponent(p)?;
        Ok(PNormVector { coords, p })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `(sum |x_i|^p)^{1/p}`, or `max |x_i|` for `p = inf`.
    pub fn norm(&self) -> f64 {
        p_norm_of(&self.coords, self.p)
    }

    pub fn sub(&self, other: &PNormVector) -> Result<PNormVector> {
        if self.p != other.p {
            return Err(Error::invalid("mixed norm exponents"));
        }
        if self.dim() != other.dim() {
            return Err(Error::invalid("mixed dimensions"));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(PNormVector { coords, p: self.p })
    }

    pub fn distance(&self, other: &PNormVector) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn scale(&self, c: f64) -> PNormVector {
        PNormVector {
            coords: self.coords.iter().map(|x| c * x).collect(),
            p: self.p,
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("exponent must satisfy p >= 1, got {p}")));
    }
    Ok(())
}

/// Norm of a raw coordinate slice under exponent `p` (`inf` for sup).
pub fn p_norm_of(coords: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else if p == 1.0 {
        pairwise_sum(&coords.iter().map(|x| x.abs()).collect::<Vec<_>>())
    } else {
        // Rescale by the max to avoid overflow for large p.
        let m = coords.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let s = pairwise_sum(
            &coords
                .iter()
                .map(|x| (x.abs() / m).powf(p))
                .collect::<Vec<_>>(),
        );
        m * s.powf(1.0 / p)
    }
}

/// A desk-scale element of `L_r[0,1]`: constant on each piece
/// `((k-1)/m, k/m]` of a uniform partition, right-open at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("step function needs at least one piece"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("step values must be finite"));
        }
        Ok(StepFunction { values })
    }

    pub fn constant(a: f64) -> Self {
        StepFunction { values: vec![a] }
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `t` in `[0, 1]`; the first piece covers 0.
    pub fn value_at(&self, t: f64) -> f64 {
        let m = self.values.len() as f64;
        let k = (t * m).ceil().max(1.0).min(m) as usize;
        self.values[k - 1]
    }

    /// The same function on `target` pieces; `target` must be a multiple of
    /// the current piece count.
    pub fn refine(&self, target: usize) -> Result<StepFunction> {
        if target == 0 || target % self.values.len() != 0 {
            return Err(Error::invalid(format!(
                "cannot refine {} pieces to {target}",
                self.values.len()
            )));
        }
        let rep = target / self.values.len();
        let values = self
            .values
            .iter()
            .flat_map(|v| std::iter::repeat(*v).take(rep))
            .collect();
        Ok(StepFunction { values })
    }
}

/// `L_r` distance of two step functions, exact on the common refinement.
pub fn lr_distance(f: &StepFunction, g: &StepFunction, r: f64) -> Result<f64> {
    check_exponent(r)?;
    let m = lcm(f.pieces() as u64, g.pieces() as u64) as usize;
    let rf = f.refine(m)?;
    let rg = g.refine(m)?;
    let w = 1.0 / m as f64;
    let terms: Vec<f64> = rf
        .values
        .iter()
        .zip(&rg.values)
        .map(|(a, b)| w * (a - b).abs().powf(r))
        .collect();
    Ok(pairwise_sum(&terms).powf(1.0 / r))
}

/// Sup distance of two step functions, exact.
pub fn sup_distance(f: &StepFunction, g: &StepFunction) -> Result<f64> {
    let m = lcm(f.pieces() as u64, g.pieces() as u64) as usize;
    let rf = f.refine(m)?;
    let rg = g.refine(m)?;
    Ok(rf
        .values
        .iter()
        .zip(&rg.values)
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs())))
}

/// Labeled points with a symmetric distance matrix satisfying the triangle
/// inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("metric space must be nonempty"));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::invalid("labels must be distinct"));
            }
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("distance matrix shape mismatch"));
        }
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(Error::invalid("diagonal must be zero"));
            }
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid("distances must be finite and nonnegative"));
                }
                if (d - dist[j][i]).abs() > TOL {
                    return Err(Error::invalid("distance matrix must be symmetric"));
                }
                if i != j && d <= 0.0 {
                    return Err(Error::invalid("distinct points must be at positive distance"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][j] > dist[i][k] + dist[k][j] + TOL {
                        return Err(Error::invalid(format!(
                            "triangle inequality fails on ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist_matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist
            .iter()
            .flatten()
            .fold(0.0f64, |acc, d| acc.max(*d))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Build a finite metric space from points of a common `l_p^d`.
pub fn metric_space_from_points(
    points: &[PNormVector],
    labels: Vec<String>,
) -> Result<FiniteMetricSpace> {
    if points.is_empty() {
        return Err(Error::invalid("need at least one point"));
    }
    if labels.len() != points.len() {
        return Err(Error::invalid("labels and points must agree in length"));
    }
    let n = points.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = points[i].distance(&points[j])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    FiniteMetricSpace::new(labels, dist)
}

/// Convenience labels `"0", "1", ...`.
pub fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A finite mapping from source points to target vectors, with the Holder
/// exponent it claims.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub source: FiniteMetricSpace,
    pub images: BTreeMap<String, PNormVector>,
    pub alpha: f64,
}

impl EmbeddingTable {
    pub fn new(
        source: FiniteMetricSpace,
        images: BTreeMap<String, PNormVector>,
        alpha: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::invalid("alpha must be positive"));
        }
        let mut dim = None;
        let mut p = None;
        for label in source.labels() {
            let img = images
                .get(label)
                .ok_or_else(|| Error::invalid(format!("missing image for label {label}")))?;
            if *dim.get_or_insert(img.dim()) != img.dim() {
                return Err(Error::invalid("image dimensions must agree"));
            }
            if *p.get_or_insert(img.p()) != img.p() {
                return Err(Error::invalid("image exponents must agree"));
            }
        }
        if images.len() != source.len() {
            return Err(Error::invalid("images must cover exactly the source labels"));
        }
        Ok(EmbeddingTable { source, images, alpha })
    }

    pub fn image(&self, label: &str) -> &PNormVector {
        &self.images[label]
    }

    pub fn p(&self) -> f64 {
        self.images.values().next().unwrap().p()
    }
}

/// The least constant in the Holder sandwich, with the pairs attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub alpha: f64,
    pub constant_a: f64,
    pub worst_expanding_pair: (String, String),
    pub worst_contracting_pair: (String, String),
}

/// Least `A` with `(1/A) d(u,v)^alpha <= d'(Tu,Tv) <= A d(u,v)^alpha` over
/// all distinct pairs. Ties break by lexicographic label order.
pub fn holder_distortion(space: &FiniteMetricSpace, table: &EmbeddingTable) -> Result<DistortionReport> {
    if space != &table.source {
        return Err(Error::invalid("table source does not match the space"));
    }
    if space.len() < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by(|&a, &b| space.labels()[a].cmp(&space.labels()[b]));

    let mut max_rho = f64::NEG_INFINITY;
    let mut min_rho = f64::INFINITY;
    let mut expanding = None;
    let mut contracting = None;
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            let li = &space.labels()[i];
            let lj = &space.labels()[j];
            let d = space.dist(i, j);
            let dp = table.image(li).distance(table.image(lj))?;
            if dp == 0.0 {
                return Err(Error::CollapsedPair(li.clone(), lj.clone()));
            }
            let rho = dp / d.powf(table.alpha);
            if rho > max_rho {
                max_rho = rho;
                expanding = Some((li.clone(), lj.clone()));
            }
            if rho < min_rho {
                min_rho = rho;
                contracting = Some((li.clone(), lj.clone()));
            }
        }
    }
    Ok(DistortionReport {
        alpha: table.alpha,
        constant_a: max_rho.max(1.0 / min_rho),
        worst_expanding_pair: expanding.unwrap(),
        worst_contracting_pair: contracting.unwrap(),
    })
}

// JSON wire format for EmbeddingTable: {"alpha": a, "p": p, "images": {...}}
// with the source matrix alongside; p = inf encoded as the string "inf".

#[derive(Serialize, Deserialize)]
struct EmbeddingTableWire {
    alpha: f64,
    p: ExponentWire,
    source: FiniteMetricSpace,
    images: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct ExponentWire(pub f64);

impl Serialize for ExponentWire {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExponentWire {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "inf" => Ok(ExponentWire(f64::INFINITY)),
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(ExponentWire)
                .ok_or_else(|| D::Error::custom("bad exponent")),
            _ => Err(D::Error::custom("exponent must be a number or \"inf\"")),
        }
    }
}

impl Serialize for EmbeddingTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = EmbeddingTableWire {
            alpha: self.alpha,
            p: ExponentWire(self.p()),
            source: self.source.clone(),
            images: self
                .images
                .iter()
                .map(|(k, v)| (k.clone(), v.coords().to_vec()))
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmbeddingTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = EmbeddingTableWire::deserialize(d)?;
        let images = wire
            .images
            .into_iter()
            .map(|(k, coords)| {
                PNormVector::new(coords, wire.p.0)
                    .map(|v| (k, v))
                    .map_err(D::Error::custom)
            })
            .collect::<std::result::Result<BTreeMap<_, _>, _>>()?;
        EmbeddingTable::new(wire.source, images, wire.alpha).map_err(D::Error::custom)
    }
}
