//! Closed-form minimum-inlier bounds.
//!
//! Notation follows the outlier-distance summary of a translation instance:
//! the distances `d_i = |O_i - T_b(I_i)|` of the `M` outliers, sorted, have
//! smallest consecutive gap `s`, largest gap `S`, ratio `R = S / s` and
//! maximum `d_M`. A bound `b` means every `n > b` perfect inliers make the
//! ideal transform a global minimizer of the L^p cost.
//!
//! Powers with large exponents (`(1 - p) / p` is 999 at `p = 0.001`) are
//! evaluated as `exp(e * ln(x))`.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::Point;

/// `x^e` through the log domain.
fn pow_log(x: f64, e: f64) -> f64 {
    (e * x.ln()).exp()
}

fn check_p_open(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Smallest integer strictly greater than `x` (for `x >= 0`).
pub fn strict_ceiling(x: f64) -> u64 {
    x.max(-1.0).floor() as u64 + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub p: f64,
    /// `M`
    pub outliers: usize,
    /// `s`
    pub min_gap: f64,
    /// `S`
    pub max_gap: f64,
    /// `d_M`
    pub max_distance: f64,
}

impl BoundInputs {
    pub fn new(
        p: f64,
        outliers: usize,
        min_gap: f64,
        max_gap: f64,
        max_distance: f64,
    ) -> Result<Self> {
        check_p_open(p)?;
        if outliers == 0 {
            return Err(Error::Domain("need at least one outlier".into()));
        }
        if !(min_gap > 0.0 && min_gap <= max_gap && max_gap.is_finite()) {
            return Err(Error::Domain(format!(
                "gaps must satisfy 0 < s <= S, got s={min_gap}, S={max_gap}"
            )));
        }
        if !(max_distance >= max_gap && max_distance.is_finite()) {
            return Err(Error::Domain(format!(
                "largest distance {max_distance} is below the largest gap {max_gap}"
            )));
        }
        Ok(Self {
            p,
            outliers,
            min_gap,
            max_gap,
            max_distance,
        })
    }

    /// Equally spaced distances `s, 2s, ..., Ms`.
    pub fn equal_spacing(p: f64, outliers: usize, gap: f64) -> Result<Self> {
        Self::new(p, outliers, gap, gap, gap * outliers as f64)
    }

    /// Summary of an explicit list of outlier distances.
    pub fn from_distances(p: f64, distances: &[f64]) -> Result<Self> {
        let mut d = distances.to_vec();
        if d.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::Domain(
                "distances must be positive and finite".into(),
            ));
        }
        d.sort_by(f64::total_cmp);
        let mut s = f64::INFINITY;
        let mut big = 0.0f64;
        let mut prev = 0.0;
        for x in &d {
            let gap = x - prev;
            s = s.min(gap);
            big = big.max(gap);
            prev = *x;
        }
        Self::new(p, d.len(), s, big, prev)
    }

    /// `R = S / s`
    pub fn ratio(&self) -> f64 {
        self.max_gap / self.min_gap
    }

    fn ratio_pow(&self) -> f64 {
        self.ratio().powf(self.p)
    }

    /// `(1 - p^2) / (2 - R^p)`, erroring when `R^p >= 2`.
    fn peak_base(&self) -> Result<f64> {
        let rp = self.ratio_pow();
        if rp >= 2.0 {
            return Err(Error::Validity {
                reason: format!(
                    "R^p = {rp} is not below 2; only strict robustness (n >= M) applies"
                ),
                fallback: Some(self.outliers as f64),
            });
        }
        Ok((1.0 - self.p * self.p) / (2.0 - rp))
    }
}

/// Inlier count sufficient against a translation at distance `d_t` from the
/// ideal one: `R^p + (d_M^p d_t^(1-p) + (R^p - 2) d_t / (p + 1)) / s + 1`.
pub fn inlier_requirement_at(b: &BoundInputs, d_t: f64) -> f64 {
    let p = b.p;
    let rp = b.ratio_pow();
    rp + (b.max_distance.powf(p) * d_t.powf(1.0 - p) + (rp - 2.0) * d_t / (p + 1.0)) / b.min_gap
        + 1.0
}

/// `p [(1-p^2)/(2-R^p)]^((1-p)/p) d_M / s + 1 + R^p`, the maximum of
/// [`inlier_requirement_at`] over all distances.
pub fn min_inliers_general(b: &BoundInputs) -> Result<f64> {
    let base = b.peak_base()?;
    let p = b.p;
    Ok(p * pow_log(base, (1.0 - p) / p) * b.max_distance / b.min_gap + 1.0 + b.ratio_pow())
}

/// Distance at which [`inlier_requirement_at`] peaks, clipped to `d_M`.
pub fn optimal_dt(b: &BoundInputs) -> Result<f64> {
    let base = b.peak_base()?;
    Ok((pow_log(base, 1.0 / b.p) * b.max_distance).min(b.max_distance))
}

/// `f(p) = p (1 - p^2)^((1-p)/p)`, with `f(1) = 1`.
pub fn equal_spacing_ratio(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1], got {p}")));
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok(p * pow_log(1.0 - p * p, (1.0 - p) / p))
}

/// Smallest `n` with `n > f(p) M + 2`.
pub fn min_inliers_equal_spacing(p: f64, outliers: usize) -> Result<u64> {
    check_p_open(p)?;
    Ok(strict_ceiling(
        equal_spacing_ratio(p)? * outliers as f64 + 2.0,
    ))
}

/// Truncated-normal outlier distances with `mu = 4 sigma` cut to
/// `[sigma, 7 sigma]`, so `R = 7`, and `d_M = M mu`.
pub const HALF_NORMAL_RATIO: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfNormalBound {
    /// Coefficient of `M`: `4 p [(1-p^2)/(2-7^p)]^((1-p)/p)`.
    pub ratio: f64,
    /// Additive `1 + 7^p`.
    pub constant: f64,
    pub outliers: usize,
}

impl HalfNormalBound {
    pub fn min_inliers(&self) -> f64 {
        self.ratio * self.outliers as f64 + self.constant
    }
}

/// Largest exponent for which `7^p < 2`.
pub fn half_normal_max_p() -> f64 {
    std::f64::consts::LN_2 / HALF_NORMAL_RATIO.ln()
}

pub fn min_inliers_half_normal(p: f64, outliers: usize) -> Result<HalfNormalBound> {
    check_p_open(p)?;
    let rp = HALF_NORMAL_RATIO.powf(p);
    if rp >= 2.0 {
        return Err(Error::Validity {
            reason: format!(
                "7^p = {rp} is not below 2 (p must be under {:.4})",
                half_normal_max_p()
            ),
            fallback: Some(outliers as f64),
        });
    }
    let base = (1.0 - p * p) / (2.0 - rp);
    Ok(HalfNormalBound {
        ratio: 4.0 * p * pow_log(base, (1.0 - p) / p),
        constant: 1.0 + rp,
        outliers,
    })
}

/// Probability that every sorted uniform distance lies within `M^(a-1)` of
/// its mean: `(1 - 2 exp(-2 M^(2a-1)))^M`.
pub fn hoeffding_confidence(outliers: usize, a: f64) -> f64 {
    let m = outliers as f64;
    let tail = 2.0 * (-2.0 * m.powf(2.0 * a - 1.0)).exp();
    if tail >= 1.0 {
        return 0.0;
    }
    (m * (-tail).ln_1p()).exp()
}

/// Bisection tolerance of [`hoeffding_a`].
pub const HOEFFDING_TOL: f64 = 1e-4;

/// Minimal `a` in `(1/2, 1)` with `hoeffding_confidence(M, a) >= confidence`.
pub fn hoeffding_a(outliers: usize, confidence: f64) -> Result<f64> {
    if outliers < 2 {
        return Err(Error::Domain(format!("need M >= 2, got {outliers}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let ok = |a: f64| hoeffding_confidence(outliers, a) >= confidence;
    let (mut lo, mut hi) = (0.5, 1.0);
    if !ok(hi) {
        return Err(Error::Domain(format!(
            "confidence {confidence} is out of reach for M = {outliers}"
        )));
    }
    while hi - lo > HOEFFDING_TOL {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGroupBounds {
    /// Distances below `d_T`: `2 M^a`.
    pub tfg: f64,
    /// Distances above `d_T`: `p (1-p^2)^((1-p)/p) (M + 1 - M^a) + M^a`.
    pub tsg: f64,
    /// Set when `2 M^a >= M`, i.e. the first-group bound says nothing.
    pub vacuous: bool,
}

pub fn uniform_tsg_bound(p: f64, outliers: usize, a: f64) -> Result<UniformGroupBounds> {
    check_p_open(p)?;
    if !(a > 0.5 && a < 1.0) {
        return Err(Error::Domain(format!("a must lie in (1/2, 1), got {a}")));
    }
    let m = outliers as f64;
    let ma = m.powf(a);
    let tfg = 2.0 * ma;
    let tsg = equal_spacing_ratio(p)? * (m + 1.0 - ma) + ma;
    Ok(UniformGroupBounds {
        tfg,
        tsg,
        vacuous: tfg >= m,
    })
}

/// The second-group expression before maximization,
/// `L^p d_t^(1-p) - d_t / (1 + p) + M^a` with `L = M + 1 - M^a`.
pub fn uniform_tsg_at(p: f64, outliers: usize, a: f64, d_t: f64) -> f64 {
    let m = outliers as f64;
    let ma = m.powf(a);
    (m + 1.0 - ma).powf(p) * d_t.powf(1.0 - p) - d_t / (1.0 + p) + ma
}

/// Cumulative distribution of outlier distances.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Normal law with mean `4 sigma` truncated to `[sigma, 7 sigma]`.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedNormalCdf {
    sigma: f64,
    normal: Normal,
    lo: f64,
    mass: f64,
}

impl TruncatedNormalCdf {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let normal = Normal::new(4.0 * sigma, sigma).map_err(|e| Error::Domain(e.to_string()))?;
        let lo = normal.cdf(sigma);
        let mass = normal.cdf(7.0 * sigma) - lo;
        Ok(Self {
            sigma,
            normal,
            lo,
            mass,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn median(&self) -> f64 {
        4.0 * self.sigma
    }
}

impl Cdf for TruncatedNormalCdf {
    fn cdf(&self, x: f64) -> f64 {
        if x <= self.sigma {
            0.0
        } else if x >= 7.0 * self.sigma {
            1.0
        } else {
            (self.normal.cdf(x) - self.lo) / self.mass
        }
    }
}

/// Evaluates `F` at `xs` (ascending) and checks the values form a
/// non-decreasing sequence in `[0, 1]`.
fn sample_cdf<F: Cdf + ?Sized>(f: &F, xs: &[f64]) -> Result<Vec<f64>> {
    let v: Vec<f64> = xs.iter().map(|&x| f.cdf(x)).collect();
    if v.iter().any(|y| !(0.0..=1.0).contains(y)) {
        return Err(Error::InvalidInput("CDF value outside [0, 1]".into()));
    }
    if v.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("CDF samples are not monotone".into()));
    }
    Ok(v)
}

fn check_cdf_args(p: f64, d_t: f64) -> Result<()> {
    check_p_open(p)?;
    if !(d_t > 0.0 && d_t.is_finite()) {
        return Err(Error::Domain(format!("d_T must be positive, got {d_t}")));
    }
    Ok(())
}

/// First-group upper bound for a general distance law:
/// `(F(d) - F(3d/4)) M - F(d/4) M / 2^p + (F(3d/4) - F(d/2)) M / 2^p`.
pub fn cdf_tfg_bound<F: Cdf + ?Sized>(f: &F, p: f64, outliers: usize, d_t: f64) -> Result<f64> {
    check_cdf_args(p, d_t)?;
    let v = sample_cdf(f, &[0.25 * d_t, 0.5 * d_t, 0.75 * d_t, d_t])?;
    let m = outliers as f64;
    let half = 0.5f64.powf(p);
    Ok((v[3] - v[2]) * m - v[0] * m * half + (v[2] - v[1]) * m * half)
}

/// Second-group upper bound, piecewise in `F(d_T)`:
///
/// * `F(d) > 1/2`: `M (1 - F(d))`
/// * `F(d)` in `[1/4, 1/2]`: `((3/2)^p - (1/2)^p)(1 - F(3d/2)) M + (F(3d/2) - F(d)) M`
/// * `F(d) < 1/4`: the banded sum over `[i d, (i+1) d]`, both with two bands
///   and with `floor(1/d)` bands; the smaller is returned.
///
/// On a regime edge both neighbouring branches are evaluated and the smaller
/// is returned.
pub fn cdf_tsg_bound<F: Cdf + ?Sized>(f: &F, p: f64, outliers: usize, d_t: f64) -> Result<f64> {
    check_cdf_args(p, d_t)?;
    let m = outliers as f64;
    let q = sample_cdf(f, &[d_t, 1.5 * d_t, 2.0 * d_t])?;
    let (fd, f32, f2) = (q[0], q[1], q[2]);

    let upper = || m * (1.0 - fd);
    let middle = || ((1.5f64.powf(p) - 0.5f64.powf(p)) * (1.0 - f32) + (f32 - fd)) * m;
    let banded = |bands: usize, tail_at: f64| -> Result<f64> {
        let xs: Vec<f64> = (1..=bands + 1).map(|i| i as f64 * d_t).collect();
        let v = sample_cdf(f, &xs)?;
        let mut sum = 0.0;
        for i in 1..=bands {
            let w = (i as f64 + 1.0).powf(p) - (i as f64).powf(p);
            sum += w * (v[i] - v[i - 1]);
        }
        Ok((sum + (1.0 - f.cdf(tail_at)) + (f2 - fd)) * m)
    };
    let lower = || -> Result<f64> {
        let printed = banded(2, 4.0 * d_t)?;
        let k = (1.0 / d_t).floor();
        if (1.0..1e6).contains(&k) {
            let k = k as usize;
            Ok(printed.min(banded(k, k as f64 * d_t)?))
        } else {
            Ok(printed)
        }
    };

    Ok(if fd > 0.5 {
        upper()
    } else if fd == 0.5 {
        upper().min(middle())
    } else if fd > 0.25 {
        middle()
    } else if fd == 0.25 {
        middle().min(lower()?)
    } else {
        lower()?
    })
}

/// Result of filling one oversized gap with synthetic observations spaced
/// `s` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapFill {
    /// Remaining largest gap `S' = S - floor(S/s) s + s`, in `[s, 2s)`.
    pub max_gap: f64,
    /// Synthetic observations inserted, `floor(S/s) - 1`.
    pub inserted: u64,
    /// Compensation count charged to the bound, `floor(S/s)`.
    pub compensation: u64,
}

pub fn fill_gap(min_gap: f64, max_gap: f64) -> Result<GapFill> {
    if !(min_gap > 0.0 && max_gap >= min_gap && max_gap.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < s <= S, got s={min_gap}, S={max_gap}"
        )));
    }
    let k = (max_gap / min_gap).floor();
    Ok(GapFill {
        max_gap: max_gap - k * min_gap + min_gap,
        inserted: k as u64 - 1,
        compensation: k as u64,
    })
}

/// Outliers split into groups, each with its own distance summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSpec {
    pub groups: Vec<BoundInputs>,
    /// `m1`: outliers closer than the smallest gap.
    pub near_zero: usize,
    /// `m2`: extreme outliers set aside.
    pub extreme: usize,
    /// `m3`: synthetic gap-filling observations charged to the bound.
    pub filled: usize,
}

/// `m1 + m2 + m3 + sum_g { p [(1-p^2)/(2-R_g^p)]^((1-p)/p) d_M,g / s_g + 1 + 2^p }`.
///
/// The per-group constant uses `2^p` in place of `R_g^p`, which is larger
/// once gap filling has brought `R_g` below 2.
pub fn grouped_bound(g: &GroupSpec) -> Result<f64> {
    let mut total = (g.near_zero + g.extreme + g.filled) as f64;
    for (k, b) in g.groups.iter().enumerate() {
        let general = min_inliers_general(b).map_err(|e| match e {
            Error::Validity { reason, fallback } => Error::Validity {
                reason: format!("group {k}: {reason}"),
                fallback,
            },
            other => other,
        })?;
        total += general - 1.0 - b.ratio_pow() + 1.0 + 2f64.powf(b.p);
    }
    Ok(total)
}

/// Mean over inlier inputs of the smallest absolute coordinate, one reading of
/// the inlier-magnitude term of the rotation bound.
pub fn inlier_min_coordinate_mean(inlier_inputs: &[Point]) -> Result<f64> {
    if inlier_inputs.is_empty() {
        return Err(Error::InvalidInput("no inlier inputs".into()));
    }
    let sum: f64 = inlier_inputs
        .iter()
        .map(|x| x.coords().iter().fold(f64::INFINITY, |m, c| m.min(c.abs())))
        .sum();
    Ok(sum / inlier_inputs.len() as f64)
}

/// Inputs of the 2-D rotation bound. Outlier distances are normalized by the
/// input magnitude, `d_i = |O_i - R_b I_i| / |I_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationBoundInputs {
    pub p: f64,
    pub outliers: usize,
    /// `s_1`, gap of the normalized distances dividing the second-group term.
    pub gap_scale: f64,
    /// `s`, smallest magnitude-weighted gap.
    pub min_gap: f64,
    /// `S`, largest magnitude-weighted gap.
    pub max_gap: f64,
    /// Inlier magnitude term `I_m`.
    pub inlier_magnitude: f64,
    /// `I_M`, largest outlier input magnitude.
    pub input_max: f64,
    /// `d_M`, largest normalized outlier distance.
    pub max_distance: f64,
}

impl RotationBoundInputs {
    fn validate(&self) -> Result<()> {
        check_p_open(self.p)?;
        let positive = [
            self.gap_scale,
            self.min_gap,
            self.max_gap,
            self.inlier_magnitude,
            self.input_max,
            self.max_distance,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || self.max_gap < self.min_gap {
            return Err(Error::Domain(
                "rotation bound inputs must be positive with s <= S".into(),
            ));
        }
        Ok(())
    }

    /// `I_M^p + (1 - r^p) I_m^p`, the rotation analog of `2 - R^p`.
    fn denominator(&self) -> f64 {
        let p = self.p;
        let r = self.max_gap / self.min_gap;
        self.input_max.powf(p) + (1.0 - r.powf(p)) * self.inlier_magnitude.powf(p)
    }

    fn invalid(&self, reason: String) -> Error {
        Error::Validity {
            reason: format!("{reason}; use max_p_rotation"),
            fallback: max_p_rotation(self.input_max, self.outliers.max(1))
                .ok()
                .map(|m| m.p),
        }
    }
}

/// Rotation analog of [`inlier_requirement_at`] for a chord `d_r = 2 sin(dθ/2)`:
/// `[r^p + (d_M^p I_M^p d_r^(1-p) - D d_r / (p+1)) / s_1 + I_M^p] / I_m^p`
/// with `D` = [`RotationBoundInputs`] denominator.
pub fn rotation_requirement_at(b: &RotationBoundInputs, d_r: f64) -> f64 {
    let p = b.p;
    let rp = (b.max_gap / b.min_gap).powf(p);
    let lead = b.max_distance.powf(p) * b.input_max.powf(p) * d_r.powf(1.0 - p);
    (rp + (lead - b.denominator() * d_r / (p + 1.0)) / b.gap_scale + b.input_max.powf(p))
        / b.inlier_magnitude.powf(p)
}

/// `{p K^((1-p)/p) I_M d_M / s_1 + I_M^p + r^p} / I_m^p` with
/// `K = (1-p^2) / (I_M^p + (1 - r^p) I_m^p)` and `r = S / s`.
///
/// The printed form of this bound is garbled; this is the reading that
/// parallels the translation bound term by term, where `D d_r / (p+1)`
/// replaces `(2 - R^p) d_T / (p+1)`. With unit magnitudes it reduces to
/// [`min_inliers_general`].
pub fn min_inliers_rotation_2d(b: &RotationBoundInputs) -> Result<f64> {
    b.validate()?;
    let denom = b.denominator();
    if denom <= 0.0 {
        return Err(b.invalid(format!("I_M^p + (1 - r^p) I_m^p = {denom} is not positive")));
    }
    let p = b.p;
    let base = (1.0 - p * p) / denom;
    let r = b.max_gap / b.min_gap;
    Ok(
        (p * pow_log(base, (1.0 - p) / p) * b.input_max * b.max_distance / b.gap_scale
            + b.input_max.powf(p)
            + r.powf(p))
            / b.inlier_magnitude.powf(p),
    )
}

/// Chord at which [`rotation_requirement_at`] peaks: `K^(1/p) I_M d_M`.
pub fn optimal_chord(b: &RotationBoundInputs) -> Result<f64> {
    b.validate()?;
    let denom = b.denominator();
    if denom <= 0.0 {
        return Err(b.invalid(format!("denominator {denom} is not positive")));
    }
    Ok(pow_log((1.0 - b.p * b.p) / denom, 1.0 / b.p) * b.input_max * b.max_distance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxP {
    pub p: f64,
    /// `2 I_max <= 1`: every exponent works and `p` is reported as 1.
    pub unconstrained: bool,
}

/// Largest `p` with `(2 I_max)^p < (M + 1) / M`, i.e. just below
/// `ln((M+1)/M) / ln(2 I_max)`.
pub fn max_p_rotation(input_max: f64, outliers: usize) -> Result<MaxP> {
    if outliers == 0 {
        return Err(Error::Domain("need M >= 1".into()));
    }
    if !(input_max > 0.0 && input_max.is_finite()) {
        return Err(Error::Domain(format!(
            "I_max must be positive, got {input_max}"
        )));
    }
    let base = 2.0 * input_max;
    if base <= 1.0 {
        return Ok(MaxP {
            p: 1.0,
            unconstrained: true,
        });
    }
    let m = outliers as f64;
    let limit = (m + 1.0) / m;
    let mut p = (1.0 / m).ln_1p() / base.ln();
    while base.powf(p) >= limit {
        p = p.next_down();
    }
    Ok(MaxP {
        p,
        unconstrained: false,
    })
}

/// `(1 + eps) M / (1 - eps)`.
pub fn euclidean_noise_ratio(eps: f64, outliers: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps must lie in [0, 1), got {eps}")));
    }
    Ok((1.0 + eps) * outliers as f64 / (1.0 - eps))
}

/// [`min_inliers_general`] scaled by `(1 + eps) / (1 - eps)`.
pub fn min_inliers_euclidean_super(b: &BoundInputs, eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps must lie in [0, 1), got {eps}")));
    }
    Ok(min_inliers_general(b)? * (1.0 + eps) / (1.0 - eps))
}

/// `sum_in |I|^p > sum_out |I|^p`: when it holds, the ideal scale factor is
/// the unique minimizer whatever the outlier outputs.
pub fn scaling_dominance(
    inlier_inputs: &[Point],
    outlier_inputs: &[Point],
    p: f64,
) -> Result<bool> {
    check_p_open(p)?;
    let mass = |pts: &[Point]| pts.iter().map(|x| x.norm().powf(p)).sum::<f64>();
    Ok(mass(inlier_inputs) > mass(outlier_inputs))
}

/// Reproductions of the published tables.
pub mod tables {
    use super::*;

    /// Exponents of the truncated-normal table.
    pub const HALF_NORMAL_PS: [f64; 18] = [
        0.001, 0.002, 0.004, 0.006, 0.008, 0.01, 0.012, 0.014, 0.016, 0.018, 0.02, 0.022, 0.024,
        0.026, 0.028, 0.03, 0.032, 0.034,
    ];

    pub const DEFAULT_CONFIDENCE: f64 = 0.999;

    /// `(p, min(n)/M)` for equally spaced outliers, `p = 0.1, ..., 1.0`.
    pub fn equal_spacing() -> Vec<(f64, f64)> {
        (1..=10)
            .map(|k| {
                let p = k as f64 / 10.0;
                (p, equal_spacing_ratio(p).expect("p in (0, 1]"))
            })
            .collect()
    }

    /// `(p, min(n)/M)` for truncated-normal outliers.
    pub fn half_normal() -> Vec<(f64, f64)> {
        HALF_NORMAL_PS
            .iter()
            .map(|&p| {
                (
                    p,
                    min_inliers_half_normal(p, 1).expect("p below 0.356").ratio,
                )
            })
            .collect()
    }

    /// `(M, a)` for `M = 100, ..., 1000`.
    pub fn hoeffding(confidence: f64) -> Result<Vec<(usize, f64)>> {
        (1..=10)
            .map(|k| {
                let m = 100 * k;
                hoeffding_a(m, confidence).map(|a| (m, a))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Maximum of `g` over `nodes` evenly spaced points of `(0, hi]`.
    fn scan_max(g: impl Fn(f64) -> f64, hi: f64, nodes: usize) -> (f64, f64) {
        (1..=nodes)
            .map(|k| {
                let x = hi * k as f64 / nodes as f64;
                (g(x), x)
            })
            .fold(
                (f64::NEG_INFINITY, 0.0),
                |a, b| if b.0 > a.0 { b } else { a },
            )
    }

    #[test]
    fn general_examples() {
        let b = BoundInputs::new(0.5, 100, 1.0, 1.0, 100.0).unwrap();
        assert!(close(min_inliers_general(&b).unwrap(), 39.5, 1e-12));
        let eq = BoundInputs::equal_spacing(0.3, 40, 1.0).unwrap();
        let want = equal_spacing_ratio(0.3).unwrap() * 40.0 + 2.0;
        assert!(rel(min_inliers_general(&eq).unwrap(), want) < 1e-12);
    }

    #[test]
    fn general_near_singular_ratio() {
        // 50-digit reference values, S chosen so that R^p = 2 - 1e-9
        let b = BoundInputs::new(0.5, 100, 1.0, 3.999999996, 100.0).unwrap();
        let v = min_inliers_general(&b).unwrap();
        assert!(rel(v, 37500001054.19745987) < 1e-6, "{v}");
        let b = BoundInputs::new(0.1, 100, 1.0, 1023.9999948799996, 1100.0).unwrap();
        let v = min_inliers_general(&b).unwrap();
        let want = 9.1351718141790143663e+81 * 1100.0 / 100.0;
        assert!(v.is_finite() && rel(v, want) < 1e-5, "{v}");
    }

    #[test]
    fn general_rejects_large_ratio() {
        let b = BoundInputs::new(0.5, 30, 1.0, 4.0, 40.0).unwrap();
        match min_inliers_general(&b) {
            Err(Error::Validity { fallback, .. }) => assert_eq!(fallback, Some(30.0)),
            other => panic!("{other:?}"),
        }
        assert!(optimal_dt(&b).is_err());
    }

    #[test]
    fn bound_inputs_validation() {
        assert!(BoundInputs::new(1.0, 3, 1.0, 1.0, 3.0).is_err());
        assert!(BoundInputs::new(0.5, 3, 2.0, 1.0, 3.0).is_err());
        assert!(BoundInputs::new(0.5, 3, 1.0, 2.0, 1.5).is_err());
        let b = BoundInputs::from_distances(0.5, &[3.0, 1.0, 2.5]).unwrap();
        assert_eq!(
            (b.min_gap, b.max_gap, b.max_distance, b.outliers),
            (0.5, 1.5, 3.0, 3)
        );
    }

    #[test]
    fn optimal_dt_examples() {
        let b = BoundInputs::new(0.5, 1, 1.0, 1.0, 1.0).unwrap();
        assert!(close(optimal_dt(&b).unwrap(), 0.5625, 1e-15));
        let b = BoundInputs::new(0.999_999, 1, 1.0, 1.0, 1.0).unwrap();
        assert!(optimal_dt(&b).unwrap() < 1e-5);
        // formula gives 13.8 > d_M, so the peak over (0, d_M] is at d_M
        let b = BoundInputs::new(0.1, 10, 1.0, 1.5, 10.0).unwrap();
        let d = optimal_dt(&b).unwrap();
        let (_, arg) = scan_max(|x| inlier_requirement_at(&b, x), 10.0, 100_000);
        assert!(close(d, arg, 1e-4), "{d} vs {arg}");
        assert_eq!(d, 10.0);
    }

    #[test]
    fn optimal_dt_is_the_peak() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let p = rng.random_range(0.05..0.95);
            let s = rng.random_range(0.1..2.0);
            let r_max = 2f64.powf(1.0 / p).min(50.0);
            let big = s * rng.random_range(1.0..r_max * 0.999);
            let dm = big * rng.random_range(1.0..200.0);
            let b = BoundInputs::new(p, 10, s, big, dm).unwrap();
            let peak = inlier_requirement_at(&b, optimal_dt(&b).unwrap());
            let (scan, _) = scan_max(|x| inlier_requirement_at(&b, x), dm, 10_000);
            assert!(
                scan <= peak + 1e-9 * peak.abs(),
                "p={p}: scan {scan} > {peak}"
            );
            // unclipped peak value equals the closed form
            let unclipped = pow_log((1.0 - p * p) / (2.0 - b.ratio_pow()), 1.0 / p) * dm;
            let v = inlier_requirement_at(&b, unclipped);
            assert!(rel(v, min_inliers_general(&b).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn equal_spacing_table_values() {
        assert!(close(equal_spacing_ratio(0.1).unwrap(), 0.09, 0.005));
        // 0.375 exactly, printed as 0.38
        assert!(close(
            equal_spacing_ratio(0.5).unwrap(),
            0.38,
            0.005 + 1e-12
        ));
        assert_eq!(equal_spacing_ratio(1.0).unwrap(), 1.0);
        assert!(equal_spacing_ratio(0.0).is_err());
        assert!(equal_spacing_ratio(1.5).is_err());
    }

    #[test]
    fn equal_spacing_is_increasing_and_at_most_one() {
        let mut prev = 0.0;
        for k in 1..1000 {
            let v = equal_spacing_ratio(k as f64 * 1e-3).unwrap();
            assert!(v > prev && v <= 1.0, "k={k}");
            prev = v;
        }
    }

    #[test]
    fn min_inliers_equal_spacing_examples() {
        assert_eq!(min_inliers_equal_spacing(0.5, 100).unwrap(), 40);
        // f(0.1)*50+2 = 6.5676 and f(0.9)*10+2 = 9.4835 (50-digit reference)
        assert_eq!(min_inliers_equal_spacing(0.1, 50).unwrap(), 7);
        assert_eq!(min_inliers_equal_spacing(0.9, 10).unwrap(), 10);
        assert_eq!(min_inliers_equal_spacing(0.3, 200).unwrap(), 51);
        assert!(min_inliers_equal_spacing(1.0, 10).is_err());
        assert_eq!(strict_ceiling(3.0), 4);
        assert_eq!(strict_ceiling(2.999), 3);
    }

    #[test]
    fn half_normal_examples() {
        assert!(close(
            min_inliers_half_normal(0.01, 1).unwrap().ratio,
            0.283,
            0.01
        ));
        assert!(close(
            min_inliers_half_normal(0.001, 1).unwrap().ratio,
            0.028,
            0.005
        ));
        assert!(close(
            min_inliers_half_normal(0.034, 1).unwrap().ratio,
            0.99,
            0.01
        ));
        let b = min_inliers_half_normal(0.02, 200).unwrap();
        assert!(close(b.constant, 1.0 + 7f64.powf(0.02), 1e-15));
        assert!(close(b.min_inliers(), b.ratio * 200.0 + b.constant, 1e-12));
        assert!(close(half_normal_max_p(), 0.356, 0.001));
        assert!(matches!(
            min_inliers_half_normal(0.36, 10),
            Err(Error::Validity { .. })
        ));
    }

    #[test]
    fn hoeffding_examples() {
        assert!(close(hoeffding_a(100, 0.999).unwrap(), 0.696, 0.002));
        assert!(close(hoeffding_a(500, 0.999).unwrap(), 0.655, 0.002));
        assert!(close(hoeffding_a(1000, 0.999).unwrap(), 0.643, 0.002));
        assert!(hoeffding_a(1, 0.999).is_err());
        assert!(hoeffding_a(100, 1.0).is_err());
    }

    #[test]
    fn hoeffding_a_is_minimal() {
        for m in [2usize, 10, 100, 250, 1000, 5000] {
            for conf in [0.5, 0.9, 0.999] {
                let Ok(a) = hoeffding_a(m, conf) else {
                    continue;
                };
                assert!(hoeffding_confidence(m, a) >= conf);
                if a - 2e-4 > 0.5 {
                    assert!(
                        hoeffding_confidence(m, a - 2e-4) < conf,
                        "M={m} conf={conf}"
                    );
                }
            }
        }
    }

    #[test]
    fn uniform_bounds() {
        let u = uniform_tsg_bound(0.1, 1000, 0.643).unwrap();
        assert!(close(u.tfg, 2.0 * 1000f64.powf(0.643), 1e-9));
        assert!(!u.vacuous);
        let u = uniform_tsg_bound(0.1, 1000, 0.9999).unwrap();
        assert!(u.vacuous && u.tfg > 1.99 * 1000.0);
        assert!(uniform_tsg_bound(0.1, 1000, 0.5).is_err());
    }

    #[test]
    fn uniform_tsg_matches_numeric_maximization() {
        let (p, m, a) = (0.2, 400usize, 0.660);
        let u = uniform_tsg_bound(p, m, a).unwrap();
        let l = m as f64 + 1.0 - (m as f64).powf(a);
        let (lin, _) = scan_max(|d| uniform_tsg_at(p, m, a, d), l, 100_000);
        assert!(rel(lin, u.tsg) < 1e-6, "{lin} vs {}", u.tsg);
        // the pre-linearization integral form never exceeds the bound
        let ma = (m as f64).powf(a);
        let integral = |d: f64| {
            (l.powf(p + 1.0) - (l - d).powf(p + 1.0) - d.powf(p + 1.0)) / ((p + 1.0) * d.powf(p))
                + ma
        };
        let (int_max, _) = scan_max(integral, l, 100_000);
        assert!(int_max <= u.tsg);
    }

    #[test]
    fn tfg_uniform_cdf() {
        let f = |x: f64| x.clamp(0.0, 1.0);
        for p in [0.1, 0.5, 0.9] {
            assert!(close(cdf_tfg_bound(&f, p, 1, 0.8).unwrap(), 0.2, 1e-12));
            assert!(close(cdf_tfg_bound(&f, p, 100, 1e-12).unwrap(), 0.0, 1e-9));
        }
    }

    #[test]
    fn tfg_rejects_non_monotone() {
        let bad = |x: f64| if x < 0.3 { 0.5 } else { 0.2 };
        assert!(matches!(
            cdf_tfg_bound(&bad, 0.5, 10, 0.8),
            Err(Error::InvalidInput(_))
        ));
        assert!(cdf_tsg_bound(&|x: f64| 2.0 * x, 0.5, 10, 0.8).is_err());
    }

    fn sorted_samples(n: usize, seed: u64, draw: impl Fn(&mut ChaCha8Rng) -> f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn tfg_half_normal_dominates_direct_sum() {
        use rand_distr::{Distribution, Normal as N};
        let sigma = 1.0;
        let law = TruncatedNormalCdf::new(sigma).unwrap();
        let normal = N::new(4.0, 1.0).unwrap();
        let m = 100_000;
        let d = sorted_samples(m, 3, |r| loop {
            let x = normal.sample(r);
            if (1.0..=7.0).contains(&x) {
                break x;
            }
        });
        let dt = law.median();
        for p in [0.1, 0.5, 0.9] {
            let direct: f64 = d
                .iter()
                .filter(|&&x| x <= dt)
                .map(|x| (x / dt).powf(p) - (1.0 - x / dt).powf(p))
                .sum();
            let bound = cdf_tfg_bound(&law, p, m, dt).unwrap();
            assert!(direct <= bound, "p={p}: {direct} > {bound}");
        }
    }

    #[test]
    fn tsg_regimes() {
        let f = |x: f64| x.clamp(0.0, 1.0);
        assert!(close(cdf_tsg_bound(&f, 0.3, 1, 0.8).unwrap(), 0.2, 1e-12));
        // F(d) = 0.5 edge: min of the two branches
        let edge = cdf_tsg_bound(&f, 0.3, 1, 0.5).unwrap();
        let upper: f64 = 0.5;
        let middle = (1.5f64.powf(0.3) - 0.5f64.powf(0.3)) * (1.0 - 0.75) + (0.75 - 0.5);
        assert!(close(edge, upper.min(middle), 1e-12));
    }

    #[test]
    fn tsg_square_cdf_dominates_direct_sum() {
        let f = |x: f64| x.clamp(0.0, 1.0).powi(2);
        let m = 100_000;
        let d = sorted_samples(m, 4, |r| r.random::<f64>().sqrt());
        let dt = 0.3;
        for p in [0.1, 0.5, 0.9] {
            let direct: f64 = d
                .iter()
                .filter(|&&x| x > dt)
                .map(|x| (x / dt).powf(p) - (x / dt - 1.0).powf(p))
                .sum();
            let bound = cdf_tsg_bound(&f, p, m, dt).unwrap();
            assert!(direct <= bound, "p={p}: {direct} > {bound}");
        }
    }

    #[test]
    fn gap_filling_by_construction() {
        for (s, big) in [(1.0, 5.0), (0.5, 2.75), (2.0, 9.0), (1.0, 1.0)] {
            let fill = fill_gap(s, big).unwrap();
            // insert the synthetic points into [0, big] and measure gaps directly
            let mut pts = vec![0.0];
            for k in 1..=fill.inserted {
                pts.push(k as f64 * s);
            }
            pts.push(big);
            let gaps: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
            let widest = gaps.iter().cloned().fold(0.0, f64::max);
            assert!(close(widest, fill.max_gap, 1e-12), "{s} {big}");
            assert!(fill.max_gap / s < 2.0);
            assert_eq!(fill.compensation, (big / s).floor() as u64);
        }
        let fill = fill_gap(1.0, 5.0).unwrap();
        assert_eq!((fill.compensation, fill.inserted), (5, 4));
    }

    #[test]
    fn grouped_bound_additivity() {
        let b = BoundInputs::new(0.3, 20, 1.0, 1.5, 25.0).unwrap();
        let braces =
            min_inliers_general(&b).unwrap() - 1.0 - 1.5f64.powf(0.3) + 1.0 + 2f64.powf(0.3);
        let one = grouped_bound(&GroupSpec {
            groups: vec![b],
            near_zero: 0,
            extreme: 0,
            filled: 0,
        })
        .unwrap();
        assert!(close(one, braces, 1e-12));
        let two = grouped_bound(&GroupSpec {
            groups: vec![b, b],
            near_zero: 3,
            extreme: 2,
            filled: 4,
        })
        .unwrap();
        assert!(close(two, 2.0 * braces + 9.0, 1e-12));
    }

    #[test]
    fn grouped_bound_names_bad_group() {
        let good = BoundInputs::new(0.5, 10, 1.0, 1.0, 10.0).unwrap();
        let bad = BoundInputs::new(0.5, 10, 1.0, 5.0, 20.0).unwrap();
        match grouped_bound(&GroupSpec {
            groups: vec![good, bad],
            near_zero: 0,
            extreme: 0,
            filled: 0,
        }) {
            Err(Error::Validity { reason, .. }) => assert!(reason.starts_with("group 1")),
            other => panic!("{other:?}"),
        }
    }

    fn unit_rotation(p: f64, m: usize, gap: f64) -> RotationBoundInputs {
        RotationBoundInputs {
            p,
            outliers: m,
            gap_scale: gap,
            min_gap: gap,
            max_gap: gap,
            inlier_magnitude: 1.0,
            input_max: 1.0,
            max_distance: gap * m as f64,
        }
    }

    #[test]
    fn rotation_reduces_to_translation() {
        for (p, m) in [(0.1, 50), (0.4, 20), (0.7, 200)] {
            let r = min_inliers_rotation_2d(&unit_rotation(p, m, 0.01)).unwrap();
            let t = min_inliers_general(&BoundInputs::equal_spacing(p, m, 0.01).unwrap()).unwrap();
            assert!(rel(r, t) < 1e-12);
        }
        // uniform magnitude c scales the inlier side by c^p and the outlier side by c
        let mut b = unit_rotation(0.3, 40, 0.02);
        b.inlier_magnitude = 2.0;
        b.input_max = 2.0;
        let k = pow_log((1.0 - 0.09) / 2f64.powf(0.3), 0.7 / 0.3);
        let want = (0.3 * k * 2.0 * 0.8 / 0.02 + 2f64.powf(0.3) + 1.0) / 2f64.powf(0.3);
        assert!(rel(min_inliers_rotation_2d(&b).unwrap(), want) < 1e-12);
    }

    #[test]
    fn rotation_closed_form_is_peak_of_requirement() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let p = rng.random_range(0.05..0.6);
            let s = rng.random_range(0.005..0.05);
            let b = RotationBoundInputs {
                p,
                outliers: 30,
                gap_scale: s,
                min_gap: s,
                max_gap: s * rng.random_range(1.0..1.3),
                inlier_magnitude: rng.random_range(0.5..1.0),
                input_max: rng.random_range(1.0..1.5),
                max_distance: s * 30.0 * rng.random_range(1.0..1.5),
            };
            let Ok(bound) = min_inliers_rotation_2d(&b) else {
                continue;
            };
            let peak = optimal_chord(&b).unwrap();
            let (scan, _) = scan_max(|d| rotation_requirement_at(&b, d), 4.0 * peak, 20_000);
            assert!(scan <= bound * (1.0 + 1e-9));
            assert!(rel(rotation_requirement_at(&b, peak), bound) < 1e-9);
        }
    }

    #[test]
    fn rotation_bound_dominates_direct_requirement() {
        // unit-magnitude inputs: needed n is sup over d_R of sum (d^p - |d - d_R|^p) / d_R^p
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..20 {
            let p = rng.random_range(0.1..0.6);
            let m = rng.random_range(5..60usize);
            let gaps: Vec<f64> = (0..m).map(|_| rng.random_range(1.0..1.2)).collect();
            let scale = rng.random_range(0.5..2.0) / gaps.iter().sum::<f64>();
            let d: Vec<f64> = gaps
                .iter()
                .scan(0.0, |acc, g| {
                    *acc += g * scale;
                    Some(*acc)
                })
                .collect();
            let s = gaps.iter().cloned().fold(f64::INFINITY, f64::min) * scale;
            let big = gaps.iter().cloned().fold(0.0, f64::max) * scale;
            let b = RotationBoundInputs {
                p,
                outliers: m,
                gap_scale: s,
                min_gap: s,
                max_gap: big,
                inlier_magnitude: 1.0,
                input_max: 1.0,
                max_distance: *d.last().unwrap(),
            };
            let Ok(bound) = min_inliers_rotation_2d(&b) else {
                continue;
            };
            let need = |r: f64| {
                d.iter()
                    .map(|&x| x.powf(p) - (x - r).abs().powf(p))
                    .sum::<f64>()
                    / r.powf(p)
            };
            let direct = (1..=20_000)
                .map(|k| 2.0 * k as f64 / 20_000.0)
                .chain(d.iter().copied().filter(|&x| x <= 2.0))
                .map(need)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(bound >= direct, "p={p} M={m}: {bound} < {direct}");
        }
    }

    #[test]
    fn rotation_guard() {
        let mut b = unit_rotation(0.5, 20, 0.05);
        b.max_gap = 0.05 * 9.0; // r^p = 3, denominator 1 - 2 < 0
        match min_inliers_rotation_2d(&b) {
            Err(Error::Validity { reason, fallback }) => {
                assert!(reason.contains("max_p_rotation"));
                assert!(fallback.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn max_p_rotation_examples() {
        let m = max_p_rotation(10.0, 100).unwrap();
        assert!(close(m.p, (1.01f64).ln() / 20f64.ln(), 1e-12));
        assert!(close(m.p, 0.00332, 1e-5));
        let m1 = max_p_rotation(3.0, 1).unwrap();
        assert!(close(m1.p, 2f64.ln() / 6f64.ln(), 1e-12));
        let free = max_p_rotation(0.4, 5).unwrap();
        assert!(free.unconstrained && free.p == 1.0);
        for (i, mm) in [(10.0, 100usize), (3.0, 1), (1.7, 1000), (50.0, 7)] {
            let r = max_p_rotation(i, mm).unwrap();
            let limit = (mm as f64 + 1.0) / mm as f64;
            assert!((2.0 * i).powf(r.p) < limit);
            assert!((2.0 * i).powf(r.p + 1e-6) >= limit);
        }
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_noise_ratio(0.0, 7).unwrap(), 7.0);
        assert!(close(euclidean_noise_ratio(0.1, 90).unwrap(), 110.0, 1e-12));
        assert!(close(euclidean_noise_ratio(0.5, 10).unwrap(), 30.0, 1e-12));
        assert!(euclidean_noise_ratio(1.0, 10).is_err());

        let b = BoundInputs::new(0.1, 100, 1.0, 1.0, 100.0).unwrap();
        let g = min_inliers_general(&b).unwrap();
        assert_eq!(min_inliers_euclidean_super(&b, 0.0).unwrap(), g);
        assert!(close(
            min_inliers_euclidean_super(&b, 0.5).unwrap(),
            3.0 * g,
            1e-12
        ));
        // 50-digit reference
        assert!(
            rel(
                min_inliers_euclidean_super(&b, 0.1).unwrap(),
                13.609655247022278224
            ) < 1e-13
        );
    }

    #[test]
    fn scaling_dominance_examples() {
        let ring = |r: f64, k: usize| vec![Point::from([r, 0.0]); k];
        assert!(scaling_dominance(&ring(1.0, 3), &ring(1.0, 2), 0.5).unwrap());
        assert!(!scaling_dominance(&ring(1.0, 2), &ring(1.0, 2), 0.5).unwrap());
        assert!(!scaling_dominance(&ring(2.0, 2), &ring(1.0, 5), 0.5).unwrap());
        assert!(scaling_dominance(&ring(1.0, 1), &[], 1.0).is_err());
    }

    #[test]
    fn inlier_min_coordinate() {
        let pts = [Point::from([3.0, -1.0]), Point::from([-0.5, 2.0])];
        assert!(close(
            inlier_min_coordinate_mean(&pts).unwrap(),
            0.75,
            1e-15
        ));
        assert!(inlier_min_coordinate_mean(&[]).is_err());
    }

    #[test]
    fn bounds_are_pure() {
        let b = BoundInputs::new(0.37, 33, 0.7, 0.9, 40.0).unwrap();
        assert_eq!(
            min_inliers_general(&b).unwrap().to_bits(),
            min_inliers_general(&b).unwrap().to_bits()
        );
        assert_eq!(
            hoeffding_a(321, 0.99).unwrap().to_bits(),
            hoeffding_a(321, 0.99).unwrap().to_bits()
        );
    }

    #[test]
    fn table_shapes() {
        assert_eq!(tables::equal_spacing().len(), 10);
        assert_eq!(tables::half_normal().len(), 18);
        assert_eq!(tables::hoeffding(0.999).unwrap().len(), 10);
    }
}
