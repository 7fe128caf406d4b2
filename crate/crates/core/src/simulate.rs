//! Synthetic instances and Monte Carlo recovery experiments.
//!
//! Every trial draws from its own ChaCha8 stream seeded by
//! [`trial_seed`]`(master, index)`, so results do not depend on execution
//! order or thread count.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{Cdf, TruncatedNormalCdf};
use crate::error::{Error, Result};
use crate::model::{
    apply_transform, total_cost, CostParams, Family, ObservationSet, Point, Transform,
};
use crate::solver::{estimate_simplex, estimate_translation, EstimateResult, SolverConfig};

/// Parameter error below which a trial counts as exact recovery.
pub const SUCCESS_THRESHOLD: f64 = 1e-3;

/// Inputs and random offsets are snapped to multiples of this so that
/// `I + a` is exact in floating point; with `p` small even a rounding-level
/// residual would otherwise cost `(1e-16)^p`.
const LATTICE: f64 = 1.0 / 4_294_967_296.0;

fn snap(x: f64) -> f64 {
    (x / LATTICE).round() * LATTICE
}

/// Piecewise-linear CDF through `(x_k, F_k)`, sampled by inverse
/// interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != fs.len() {
            return Err(Error::InvalidInput(
                "tabulated CDF needs at least two (x, F) knots".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || fs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput(
                "tabulated CDF must be increasing".into(),
            ));
        }
        if fs[0] != 0.0 || *fs.last().unwrap() != 1.0 || xs[0] < 0.0 {
            return Err(Error::InvalidInput(
                "tabulated CDF must run from F=0 to F=1 on x >= 0".into(),
            ));
        }
        Ok(Self { xs, fs })
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let k = self
            .fs
            .partition_point(|&f| f < u)
            .clamp(1, self.fs.len() - 1);
        let (f0, f1) = (self.fs[k - 1], self.fs[k]);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        if f1 > f0 {
            x0 + (u - f0) / (f1 - f0) * (x1 - x0)
        } else {
            x1
        }
    }
}

impl Cdf for TabulatedCdf {
    fn cdf(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let k = self.xs.partition_point(|&v| v < x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (f0, f1) = (self.fs[k - 1], self.fs[k]);
        f0 + (x - x0) / (x1 - x0) * (f1 - f0)
    }
}

/// Law of the outlier distances `|O_i - T_b(I_i)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    /// Distances `gap, 2 gap, ..., M gap`.
    EqualSpacing {
        gap: f64,
    },
    /// Normal with mean `4 sigma`, truncated to `[sigma, 7 sigma]`.
    HalfNormal {
        sigma: f64,
    },
    /// Uniform on `(0, max]`.
    Uniform {
        max: f64,
    },
    CustomCdf {
        table: TabulatedCdf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Every displacement points along the first axis.
    FixedAxis,
    Isotropic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub direction: Direction,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, direction: Direction) -> Result<Self> {
        let scale = match &kind {
            NoiseKind::EqualSpacing { gap } => *gap,
            NoiseKind::HalfNormal { sigma } => *sigma,
            NoiseKind::Uniform { max } => *max,
            NoiseKind::CustomCdf { .. } => 1.0,
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "noise scale must be positive, got {scale}"
            )));
        }
        Ok(Self { kind, direction })
    }

    /// Outliers displaced by up to twice the unit data span in a random
    /// direction.
    pub fn pointset_default() -> Self {
        Self {
            kind: NoiseKind::Uniform { max: 2.0 },
            direction: Direction::Isotropic,
        }
    }

    /// Draws `m` distances, in generation order.
    pub fn sample_distances(&self, m: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match &self.kind {
            NoiseKind::EqualSpacing { gap } => (1..=m).map(|i| i as f64 * gap).collect(),
            NoiseKind::HalfNormal { sigma } => {
                let normal = Normal::new(4.0 * sigma, *sigma).expect("positive sigma");
                (0..m)
                    .map(|_| loop {
                        let x = normal.sample(rng);
                        if x >= *sigma && x <= 7.0 * sigma {
                            break x;
                        }
                    })
                    .collect()
            }
            NoiseKind::Uniform { max } => {
                (0..m).map(|_| max * (1.0 - rng.random::<f64>())).collect()
            }
            NoiseKind::CustomCdf { table } => (0..m)
                .map(|_| table.quantile(rng.random::<f64>()))
                .collect(),
        }
    }

    /// CDF of the distance law, `None` for the deterministic ladder.
    pub fn distance_cdf(&self) -> Option<Box<dyn Cdf + Send + Sync>> {
        match &self.kind {
            NoiseKind::EqualSpacing { .. } => None,
            NoiseKind::HalfNormal { sigma } => {
                Some(Box::new(TruncatedNormalCdf::new(*sigma).ok()?))
            }
            NoiseKind::Uniform { max } => {
                let max = *max;
                Some(Box::new(move |x: f64| (x / max).clamp(0.0, 1.0)))
            }
            NoiseKind::CustomCdf { table } => Some(Box::new(table.clone())),
        }
    }
}

/// Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_statistic<F: Cdf + ?Sized>(samples: &[f64], f: &F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(k, &x)| {
            let fx = f.cdf(x);
            (fx - k as f64 / n)
                .abs()
                .max(((k + 1) as f64 / n - fx).abs())
        })
        .fold(0.0, f64::max)
}

/// Seed of trial `index` under `master`, a splitmix64 mix of the pair.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_direction(dim: usize, direction: Direction, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match direction {
        Direction::FixedAxis => {
            let mut e = vec![0.0; dim];
            e[0] = 1.0;
            e
        }
        Direction::Isotropic => loop {
            let v: Vec<f64> = (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        },
    }
}

fn family_dim(family: Family, ideal: &Transform) -> usize {
    match ideal {
        Transform::Translation(a) => a.len(),
        _ => family.required_dim().unwrap_or(2),
    }
}

/// `n` perfect pairs followed by `m` outliers, inputs uniform in the unit
/// box. Outlier `k` sits at `ideal(I) + d_k u_k` with `d_k` from the noise
/// law and `u_k` a unit direction.
pub fn gen_instance(
    n: usize,
    m: usize,
    family: Family,
    ideal: &Transform,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<ObservationSet> {
    if n + m == 0 {
        return Err(Error::InvalidInput(
            "instance needs at least one pair".into(),
        ));
    }
    if ideal.family() != family {
        return Err(Error::UnsupportedMode(format!(
            "ideal transform is {}, requested family {family}",
            ideal.family()
        )));
    }
    let dim = family_dim(family, ideal);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Point> = (0..n + m)
        .map(|_| Point::from_vec_unchecked((0..dim).map(|_| snap(rng.random::<f64>())).collect()))
        .collect();
    let distances = noise.sample_distances(m, &mut rng);
    let mut outputs = Vec::with_capacity(n + m);
    for (k, x) in inputs.iter().enumerate() {
        let mut y = apply_transform(ideal, x)?.coords().to_vec();
        if k >= n {
            let u = unit_direction(dim, noise.direction, &mut rng);
            let d = distances[k - n];
            for (yi, ui) in y.iter_mut().zip(u) {
                *yi += d * ui;
            }
        }
        outputs.push(Point::new(y)?);
    }
    ObservationSet::new(inputs, outputs)?.with_inliers(n)
}

/// A random member of `family`: offsets uniform in `[-1, 1]^dim`, angles
/// uniform on the circle, scale factors uniform in `[0.5, 2]`.
pub fn random_ideal(family: Family, dim: usize, rng: &mut ChaCha8Rng) -> Result<Transform> {
    if let Some(req) = family.required_dim() {
        if dim != req {
            return Err(Error::DimensionMismatch {
                expected: req,
                found: dim,
            });
        }
    }
    Ok(match family {
        Family::Translation => Transform::Translation(
            (0..dim)
                .map(|_| snap(rng.random_range(-1.0..1.0)))
                .collect(),
        ),
        Family::Rotation2D => Transform::rotation(rng.random_range(-PI..PI)),
        Family::Euclidean2D => {
            let angle = rng.random_range(-PI..PI);
            Transform::euclidean(
                angle,
                [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
            )
        }
        Family::Scaling => Transform::scaling(rng.random_range(0.5..2.0))?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub estimated: Transform,
    pub param_error: f64,
    pub success: bool,
    pub cost_at_ideal: f64,
    pub cost_at_estimate: f64,
    /// The ideal transform was one of the points the solver evaluated.
    pub saw_ideal: bool,
}

/// Solves `obs` (candidate enumeration for translations with `p <= 1`,
/// simplex search otherwise) and scores the estimate against `ideal`.
pub fn run_trial(
    obs: &ObservationSet,
    ideal: &Transform,
    c: CostParams,
    cfg: &SolverConfig,
    threshold: f64,
    seed: u64,
) -> Result<TrialOutcome> {
    let family = ideal.family();
    let (est, saw_ideal): (EstimateResult, bool) = if family == Family::Translation && c.is_robust()
    {
        // every exact pair contributes the ideal offset as a candidate
        (estimate_translation(obs, c)?, obs.inlier_count() > 0)
    } else {
        let cfg = SolverConfig {
            seed,
            ..cfg.clone()
        };
        (estimate_simplex(obs, family, c, &cfg)?, false)
    };
    let param_error = est.best.param_error(ideal)?;
    Ok(TrialOutcome {
        seed,
        param_error,
        success: param_error < threshold,
        cost_at_ideal: total_cost(obs, ideal, c)?,
        cost_at_estimate: est.cost,
        estimated: est.best,
        saw_ideal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub dim: usize,
    pub p_list: Vec<f64>,
    /// Inlier fractions `n / N`.
    pub inlier_fractions: Vec<f64>,
    /// `N`; each cell uses `n = round(f N)`, `M = N - n`.
    pub total: usize,
    pub noise: NoiseSpec,
    pub trials: usize,
    pub seed: u64,
    pub threshold: f64,
    pub solver: SolverConfig,
}

impl SweepSpec {
    pub fn new(
        family: Family,
        p_list: Vec<f64>,
        inlier_fractions: Vec<f64>,
        noise: NoiseSpec,
        trials: usize,
        seed: u64,
    ) -> Self {
        Self {
            family,
            dim: family.required_dim().unwrap_or(2),
            p_list,
            inlier_fractions,
            total: 118,
            noise,
            trials,
            seed,
            threshold: SUCCESS_THRESHOLD,
            solver: SolverConfig::default(),
        }
    }

    pub fn split(&self, fraction: f64) -> (usize, usize) {
        let n = ((fraction * self.total as f64).round() as usize).min(self.total);
        (n, self.total - n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub fraction: f64,
    pub inliers: usize,
    pub outliers: usize,
    pub successes: usize,
    pub trials: usize,
    pub recovery_rate: f64,
}

/// Recovery rate for every `(p, fraction)` cell, rows ordered by `p` then
/// fraction as given. Trial `t` uses the same seed in every cell.
pub fn breakdown_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if spec.total == 0 {
        return Err(Error::InvalidInput(
            "total pair count must be at least 1".into(),
        ));
    }
    if spec
        .inlier_fractions
        .iter()
        .any(|f| !(0.0..=1.0).contains(f))
    {
        return Err(Error::InvalidInput(
            "inlier fractions must lie in [0, 1]".into(),
        ));
    }
    spec.solver.validate()?;
    let costs: Vec<CostParams> = spec
        .p_list
        .iter()
        .map(|&p| CostParams::new(p))
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..costs.len())
        .flat_map(|i| (0..spec.inlier_fractions.len()).map(move |j| (i, j)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let outcomes: Vec<bool> = jobs
        .par_iter()
        .map(|&(cell, t)| -> Result<bool> {
            let (i, j) = cells[cell];
            let seed = trial_seed(spec.seed, t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ideal = random_ideal(spec.family, spec.dim, &mut rng)?;
            let (n, m) = spec.split(spec.inlier_fractions[j]);
            let obs = gen_instance(n, m, spec.family, &ideal, &spec.noise, rng.random())?;
            Ok(run_trial(&obs, &ideal, costs[i], &spec.solver, spec.threshold, seed)?.success)
        })
        .collect::<Result<_>>()?;

    Ok(cells
        .iter()
        .enumerate()
        .map(|(cell, &(i, j))| {
            let successes = outcomes[cell * spec.trials..(cell + 1) * spec.trials]
                .iter()
                .filter(|&&s| s)
                .count();
            let (n, m) = spec.split(spec.inlier_fractions[j]);
            SweepRow {
                p: spec.p_list[i],
                fraction: spec.inlier_fractions[j],
                inliers: n,
                outliers: m,
                successes,
                trials: spec.trials,
                recovery_rate: successes as f64 / spec.trials as f64,
            }
        })
        .collect())
}

/// Exponents compared in the point-set experiment.
pub const POINTSET_PS: [f64; 3] = [2.0, 1.0, 0.5];
pub const POINTSET_INLIERS: usize = 5;
pub const POINTSET_OUTLIERS: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointsetRow {
    pub p: f64,
    pub estimated: Transform,
    pub param_error: f64,
    pub offset_error: f64,
    pub success: bool,
    pub cost_at_ideal: f64,
    pub cost_at_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointsetReport {
    pub seed: u64,
    pub ideal: Transform,
    pub inliers: usize,
    pub outliers: usize,
    pub rows: Vec<PointsetRow>,
}

/// The 30-point instance: 5 exact pairs and 25 displaced ones under a random
/// rigid motion.
pub fn pointset_instance(seed: u64) -> Result<(ObservationSet, Transform)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ideal = random_ideal(Family::Euclidean2D, 2, &mut rng)?;
    let obs = gen_instance(
        POINTSET_INLIERS,
        POINTSET_OUTLIERS,
        Family::Euclidean2D,
        &ideal,
        &NoiseSpec::pointset_default(),
        rng.random(),
    )?;
    Ok((obs, ideal))
}

fn offset_error(a: &Transform, b: &Transform) -> f64 {
    match (a, b) {
        (Transform::Euclidean2D { offset: x, .. }, Transform::Euclidean2D { offset: y, .. }) => {
            ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt()
        }
        _ => f64::NAN,
    }
}

/// Runs the point-set experiment for each exponent in [`POINTSET_PS`] and
/// returns the report with one overlay SVG per exponent.
pub fn reproduce_pointset_experiment(
    seed: u64,
    cfg: &SolverConfig,
) -> Result<(PointsetReport, Vec<(f64, String)>)> {
    let (obs, ideal) = pointset_instance(seed)?;
    let mut rows = Vec::new();
    let mut svgs = Vec::new();
    for p in POINTSET_PS {
        let c = CostParams::new(p)?;
        let t = run_trial(&obs, &ideal, c, cfg, SUCCESS_THRESHOLD, seed)?;
        svgs.push((p, overlay_svg(&obs, &t.estimated, &format!("p = {p}"))?));
        rows.push(PointsetRow {
            p,
            offset_error: offset_error(&t.estimated, &ideal),
            estimated: t.estimated,
            param_error: t.param_error,
            success: t.success,
            cost_at_ideal: t.cost_at_ideal,
            cost_at_estimate: t.cost_at_estimate,
        });
    }
    Ok((
        PointsetReport {
            seed,
            ideal,
            inliers: obs.inlier_count(),
            outliers: obs.outlier_count(),
            rows,
        },
        svgs,
    ))
}

const SVG_SIZE: f64 = 800.0;
const SVG_MARGIN: f64 = 40.0;

/// Overlay of the inputs, the observed outputs (exact pairs green, displaced
/// red) and the inputs mapped by `estimate`, on an 800x800 view box.
pub fn overlay_svg(obs: &ObservationSet, estimate: &Transform, title: &str) -> Result<String> {
    if obs.dim() != Some(2) {
        return Err(Error::InvalidInput("overlay needs 2-D points".into()));
    }
    let mapped: Vec<Point> = obs
        .inputs()
        .iter()
        .map(|x| apply_transform(estimate, x))
        .collect::<Result<_>>()?;
    let all = obs.inputs().iter().chain(obs.outputs()).chain(&mapped);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for q in all {
        for k in 0..2 {
            lo[k] = lo[k].min(q.coords()[k]);
            hi[k] = hi[k].max(q.coords()[k]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SVG_SIZE - 2.0 * SVG_MARGIN) / extent;
    let to_px = |q: &Point| {
        let c = q.coords();
        (
            SVG_MARGIN + (c[0] - lo[0]) * scale,
            SVG_SIZE - SVG_MARGIN - (c[1] - lo[1]) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 800" width="800" height="800">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="24" text-anchor="middle" font-size="18">{}</text>"#,
        escape(title)
    );

    let _ = writeln!(s, r##"<g id="original" class="layer" fill="#1f77b4">"##);
    for q in obs.inputs() {
        let (x, y) = to_px(q);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5"/>"#);
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, r#"<g id="observed" class="layer">"#);
    let n = obs.inlier_count();
    for (k, q) in obs.outputs().iter().enumerate() {
        let (x, y) = to_px(q);
        let fill = if k < n { "#2ca02c" } else { "#d62728" };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{fill}"/>"#
        );
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        r#"<g id="estimated" class="layer" fill="none" stroke="black" stroke-width="1.5">"#
    );
    for q in &mapped {
        let (x, y) = to_px(q);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="8"/>"#);
    }
    s.push_str("</g>\n");

    s.push_str(r#"<g id="legend" font-size="14">"#);
    s.push('\n');
    let entries = [
        ("#1f77b4", "original points"),
        ("#2ca02c", "transformed, exact"),
        ("#d62728", "transformed, displaced"),
        ("none", "estimated alignment"),
    ];
    for (k, (color, label)) in entries.iter().enumerate() {
        let y = 50.0 + 20.0 * k as f64;
        let stroke = if *color == "none" {
            r#" stroke="black""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<circle cx="30" cy="{y}" r="5" fill="{color}"{stroke}/><text x="42" y="{}">{label}</text>"#,
            y + 5.0
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// Heat map of a sweep: one row per exponent, one column per fraction.
pub fn sweep_svg(rows: &[SweepRow]) -> String {
    let mut ps: Vec<f64> = Vec::new();
    let mut fs: Vec<f64> = Vec::new();
    for r in rows {
        if !ps.contains(&r.p) {
            ps.push(r.p);
        }
        if !fs.contains(&r.fraction) {
            fs.push(r.fraction);
        }
    }
    let cell_w = (SVG_SIZE - 2.0 * SVG_MARGIN - 60.0) / fs.len().max(1) as f64;
    let cell_h = (SVG_SIZE - 2.0 * SVG_MARGIN - 40.0) / ps.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 800" width="800" height="800">"#
    );
    let _ = writeln!(s, r#"<g id="cells">"#);
    for r in rows {
        let i = ps.iter().position(|&p| p == r.p).unwrap_or(0);
        let j = fs.iter().position(|&f| f == r.fraction).unwrap_or(0);
        let x = SVG_MARGIN + 60.0 + j as f64 * cell_w;
        let y = SVG_MARGIN + i as f64 * cell_h;
        let shade = (255.0 * (1.0 - r.recovery_rate)).round() as u8;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{cell_w:.2}" height="{cell_h:.2}" fill="rgb({shade},{},{shade})"><title>p={} f={} rate={}</title></rect>"#,
            255u8.saturating_sub(shade / 3),
            r.p,
            r.fraction,
            r.recovery_rate
        );
    }
    s.push_str("</g>\n<g id=\"axes\" font-size=\"12\">\n");
    for (i, p) in ps.iter().enumerate() {
        let y = SVG_MARGIN + (i as f64 + 0.5) * cell_h;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">p={p}</text>"#, SVG_MARGIN);
    }
    for (j, f) in fs.iter().enumerate() {
        let x = SVG_MARGIN + 60.0 + (j as f64 + 0.5) * cell_w;
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{f}</text>"#,
            SVG_SIZE - SVG_MARGIN - 10.0
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
