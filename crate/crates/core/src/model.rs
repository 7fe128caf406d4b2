//! Observation data, transform families and the L^p cost.
//!
//! The cost of a transform `T` over pairs `(I_i, O_i)` is
//! `sum_i |O_i - T(I_i)|^p` with `|.|` the Euclidean norm. No smoothing is
//! applied at zero residual: the cusp there is what makes exact recovery
//! possible.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in a Euclidean space of any dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("point has no coordinates".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "point has a non-finite coordinate".into(),
            ));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Point) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

impl From<[f64; 2]> for Point {
    fn from(c: [f64; 2]) -> Self {
        Self(c.to_vec())
    }
}

impl From<f64> for Point {
    fn from(c: f64) -> Self {
        Self(vec![c])
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Paired inputs and outputs. When labeled, the first `inliers` pairs are the
/// perfect observations and the rest are outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    inputs: Vec<Point>,
    outputs: Vec<Point>,
    inliers: Option<usize>,
}

impl ObservationSet {
    pub fn new(inputs: Vec<Point>, outputs: Vec<Point>) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::InvalidInput(format!(
                "{} inputs but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        if let Some(first) = inputs.first() {
            let d = first.dim();
            for p in inputs.iter().chain(&outputs) {
                check_dim(d, p.dim())?;
            }
        }
        Ok(Self {
            inputs,
            outputs,
            inliers: None,
        })
    }

    /// Marks the first `n` pairs as inliers.
    pub fn with_inliers(mut self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::InvalidInput(format!(
                "inlier count {n} exceeds {} pairs",
                self.len()
            )));
        }
        self.inliers = Some(n);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Dimension of the points, `None` for an empty set.
    pub fn dim(&self) -> Option<usize> {
        self.inputs.first().map(Point::dim)
    }

    pub fn inputs(&self) -> &[Point] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Point] {
        &self.outputs
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.inputs.iter().zip(&self.outputs)
    }

    pub fn labeled_inliers(&self) -> Option<usize> {
        self.inliers
    }

    /// `n`; every pair counts as an inlier when the set is unlabeled.
    pub fn inlier_count(&self) -> usize {
        self.inliers.unwrap_or(self.len())
    }

    /// `M = N - n`.
    pub fn outlier_count(&self) -> usize {
        self.len() - self.inlier_count()
    }

    /// Largest coordinate extent of the outputs, at least 1e-12.
    pub fn output_span(&self) -> f64 {
        let Some(d) = self.dim() else { return 0.0 };
        (0..d)
            .map(|k| {
                let (lo, hi) = self
                    .outputs
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                        (lo.min(p.0[k]), hi.max(p.0[k]))
                    });
                hi - lo
            })
            .fold(1e-12, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Translation,
    Rotation2D,
    Euclidean2D,
    Scaling,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Translation,
        Family::Rotation2D,
        Family::Euclidean2D,
        Family::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Translation => "translation",
            Family::Rotation2D => "rotation2d",
            Family::Euclidean2D => "euclidean2d",
            Family::Scaling => "scaling",
        }
    }

    /// Number of parameters for points of dimension `dim`.
    pub fn arity(self, dim: usize) -> usize {
        match self {
            Family::Translation => dim,
            Family::Rotation2D | Family::Scaling => 1,
            Family::Euclidean2D => 3,
        }
    }

    /// Dimension the family is restricted to, if any.
    pub fn required_dim(self) -> Option<usize> {
        match self {
            Family::Rotation2D | Family::Euclidean2D => Some(2),
            Family::Translation | Family::Scaling => None,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, Family::Rotation2D | Family::Euclidean2D)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// Maps an angle to `(-pi, pi]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// A member of one of the supported transform families.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    Translation(Vec<f64>),
    /// Counter-clockwise rotation about the origin.
    Rotation2D(f64),
    /// Rotation by `angle` followed by a shift by `offset`.
    Euclidean2D {
        angle: f64,
        offset: [f64; 2],
    },
    /// `T(I) = factor * I`, `factor > 0`.
    Scaling(f64),
}

/// Serialized as `{"family": ..., "params": [...]}`.
impl Serialize for Transform {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Transform", 2)?;
        st.serialize_field("family", &self.family())?;
        st.serialize_field("params", &self.params())?;
        st.end()
    }
}

impl Transform {
    pub fn translation(offset: Vec<f64>) -> Self {
        Transform::Translation(offset)
    }

    pub fn rotation(angle: f64) -> Self {
        Transform::Rotation2D(normalize_angle(angle))
    }

    pub fn euclidean(angle: f64, offset: [f64; 2]) -> Self {
        Transform::Euclidean2D {
            angle: normalize_angle(angle),
            offset,
        }
    }

    pub fn scaling(factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scaling factor must be positive, got {factor}"
            )));
        }
        Ok(Transform::Scaling(factor))
    }

    /// Identity member of `family` for points of dimension `dim`.
    pub fn identity(family: Family, dim: usize) -> Self {
        match family {
            Family::Translation => Transform::Translation(vec![0.0; dim]),
            Family::Rotation2D => Transform::Rotation2D(0.0),
            Family::Euclidean2D => Transform::Euclidean2D {
                angle: 0.0,
                offset: [0.0; 2],
            },
            Family::Scaling => Transform::Scaling(1.0),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Transform::Translation(_) => Family::Translation,
            Transform::Rotation2D(_) => Family::Rotation2D,
            Transform::Euclidean2D { .. } => Family::Euclidean2D,
            Transform::Scaling(_) => Family::Scaling,
        }
    }

    /// Flat parameter vector: offset, `[angle]`, `[angle, ax, ay]` or `[factor]`.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Transform::Translation(a) => a.clone(),
            Transform::Rotation2D(t) => vec![*t],
            Transform::Euclidean2D { angle, offset } => vec![*angle, offset[0], offset[1]],
            Transform::Scaling(s) => vec![*s],
        }
    }

    pub fn from_params(family: Family, params: &[f64]) -> Result<Self> {
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite transform parameter".into()));
        }
        let want = |n: usize| -> Result<()> {
            if params.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{family} takes {n} parameters, got {}",
                    params.len()
                )));
            }
            Ok(())
        };
        match family {
            Family::Translation => {
                if params.is_empty() {
                    return Err(Error::InvalidInput("translation needs an offset".into()));
                }
                Ok(Transform::Translation(params.to_vec()))
            }
            Family::Rotation2D => {
                want(1)?;
                Ok(Transform::rotation(params[0]))
            }
            Family::Euclidean2D => {
                want(3)?;
                Ok(Transform::euclidean(params[0], [params[1], params[2]]))
            }
            Family::Scaling => {
                want(1)?;
                Transform::scaling(params[0])
            }
        }
    }

    /// Euclidean norm of the parameter vector, used for deterministic tie-breaks.
    pub fn param_norm(&self) -> f64 {
        self.params().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute parameter difference; angles compared on the circle.
    pub fn param_error(&self, other: &Transform) -> Result<f64> {
        if self.family() != other.family() {
            return Err(Error::InvalidInput(format!(
                "cannot compare {} with {}",
                self.family(),
                other.family()
            )));
        }
        let a = self.params();
        let b = other.params();
        check_dim(a.len(), b.len())?;
        let angle_slot = self.family().has_angle();
        Ok(a.iter()
            .zip(&b)
            .enumerate()
            .map(|(k, (x, y))| {
                if angle_slot && k == 0 {
                    normalize_angle(x - y).abs()
                } else {
                    (x - y).abs()
                }
            })
            .fold(0.0, f64::max))
    }

    /// Writes `T(x)` into `out`, which must have the same length as `x`.
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Transform::Translation(a) => {
                for ((o, xi), ai) in out.iter_mut().zip(x).zip(a) {
                    *o = xi + ai;
                }
            }
            Transform::Rotation2D(t) => {
                let (s, c) = t.sin_cos();
                out[0] = c * x[0] - s * x[1];
                out[1] = s * x[0] + c * x[1];
            }
            Transform::Euclidean2D { angle, offset } => {
                let (s, c) = angle.sin_cos();
                out[0] = c * x[0] - s * x[1] + offset[0];
                out[1] = s * x[0] + c * x[1] + offset[1];
            }
            Transform::Scaling(f) => {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = f * xi;
                }
            }
        }
    }

    fn check_input_dim(&self, dim: usize) -> Result<()> {
        match self {
            Transform::Translation(a) => check_dim(a.len(), dim),
            Transform::Rotation2D(_) | Transform::Euclidean2D { .. } => check_dim(2, dim),
            Transform::Scaling(_) => Ok(()),
        }
    }
}

/// `T(x)`.
pub fn apply_transform(t: &Transform, x: &Point) -> Result<Point> {
    t.check_input_dim(x.dim())?;
    let mut out = vec![0.0; x.dim()];
    t.apply_into(&x.0, &mut out);
    Ok(Point(out))
}

/// Exponent of the cost. Values above 1 are admitted only as non-robust
/// baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    p: f64,
}

impl CostParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "exponent p must be positive, got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn is_robust(self) -> bool {
        self.p <= 1.0
    }

    fn of_distance(self, d: f64) -> f64 {
        // powf(0, p) is 0 for p > 0, keep the branch explicit for p = 1, 2
        if d == 0.0 {
            0.0
        } else if self.p == 1.0 {
            d
        } else if self.p == 2.0 {
            d * d
        } else {
            d.powf(self.p)
        }
    }
}

/// `|o - predicted|^p`.
pub fn residual(o: &Point, predicted: &Point, c: CostParams) -> Result<f64> {
    Ok(c.of_distance(o.distance(predicted)?))
}

/// `sum_i |O_i - T(I_i)|^p` over every pair.
pub fn total_cost(obs: &ObservationSet, t: &Transform, c: CostParams) -> Result<f64> {
    let Some(dim) = obs.dim() else {
        return Err(Error::InvalidInput("empty observation set".into()));
    };
    t.check_input_dim(dim)?;
    Ok(cost_unchecked(obs, t, c))
}

/// Cost without validation; callers guarantee dimensions match.
pub(crate) fn cost_unchecked(obs: &ObservationSet, t: &Transform, c: CostParams) -> f64 {
    let dim = obs.dim().unwrap_or(0);
    let mut buf = vec![0.0; dim];
    let mut total = 0.0;
    for (i, o) in obs.pairs() {
        t.apply_into(&i.0, &mut buf);
        let d2: f64 = buf.iter().zip(&o.0).map(|(a, b)| (a - b) * (a - b)).sum();
        total += c.of_distance(d2.sqrt());
    }
    total
}
