//! Minimizers of the L^p cost.
//!
//! * [`estimate_translation`]: exact enumeration of the offsets `O_j - I_j`.
//!   For `p <= 1` the cost is concave along every ray away from a zero
//!   residual, so in 1-D its minimum sits on one of these offsets.
//! * [`estimate_simplex`]: multi-start Nelder–Mead for every family, with an
//!   optional continuation in `p`.
//! * [`grid_oracle`]: exhaustive evaluation on a regular grid, the reference
//!   used by tests.
//!
//! All results are ordered by `(cost, parameter norm, index)`, so serial and
//! parallel evaluation agree bit for bit.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    cost_unchecked, total_cost, CostParams, Family, ObservationSet, Point, Transform,
};

/// Offsets closer than this in every coordinate are the same candidate.
pub const CANDIDATE_DEDUP_TOL: f64 = 1e-12;

/// Refuse grids with more nodes than this.
pub const MAX_GRID_NODES: u128 = 100_000_000;

const COARSE_ANGLES: usize = 8;
const SCALE_GRID: [f64; 3] = [0.5, 1.0, 2.0];
const MAX_RESTARTS: usize = 3;
const INITIAL_STEP_FRACTION: f64 = 0.05;
/// Simplex size, relative to the parameter scale, below which a flat
/// simplex counts as converged.
const SIMPLEX_XTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Nelder–Mead stops once the spread of simplex costs falls below
    /// `simplex_tol * max(1, |best|)`.
    pub simplex_tol: f64,
    pub seed: u64,
    /// Exponents visited before the target, largest first. `None` selects
    /// `[2, 1, 0.5]` (entries not above the target are dropped);
    /// `Some(vec![])` disables continuation.
    pub p_schedule: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iters: 1000,
            simplex_tol: 1e-10,
            seed: 0,
            p_schedule: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidInput("starts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if !(self.simplex_tol > 0.0) {
            return Err(Error::InvalidInput("simplex_tol must be positive".into()));
        }
        if let Some(s) = &self.p_schedule {
            if s.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
                return Err(Error::InvalidInput(
                    "schedule exponents must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// Exponents to run, ending with `target`.
    pub fn stages(&self, target: f64) -> Vec<f64> {
        let mut stages: Vec<f64> = match &self.p_schedule {
            None => vec![2.0, 1.0, 0.5],
            Some(s) => s.clone(),
        };
        stages.retain(|p| *p > target);
        stages.sort_by(|a, b| b.total_cmp(a));
        stages.dedup();
        stages.push(target);
        stages
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Candidate,
    Simplex,
    Grid,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Candidate => "candidate",
            Origin::Simplex => "simplex",
            Origin::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub best: Transform,
    /// `total_cost(obs, best, c)` at the target exponent.
    pub cost: f64,
    pub evaluations: u64,
    pub origin: Origin,
    /// False when some simplex run hit `max_iters` before converging.
    pub converged: bool,
}

/// Total order used to pick winners.
fn rank(a: (f64, f64, usize), b: (f64, f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then(a.1.total_cmp(&b.1))
        .then(a.2.cmp(&b.2))
}

fn require_nonempty(obs: &ObservationSet) -> Result<usize> {
    obs.dim()
        .ok_or_else(|| Error::InvalidInput("empty observation set".into()))
}

/// One translation per pair, offset `O_j - I_j`, duplicates removed.
pub fn candidate_translations(obs: &ObservationSet) -> Result<Vec<Transform>> {
    require_nonempty(obs)?;
    let mut offsets: Vec<Vec<f64>> = Vec::with_capacity(obs.len());
    for (i, o) in obs.pairs() {
        let a: Vec<f64> = o
            .coords()
            .iter()
            .zip(i.coords())
            .map(|(y, x)| y - x)
            .collect();
        let dup = offsets.iter().any(|b| {
            a.iter()
                .zip(b)
                .all(|(u, v)| (u - v).abs() <= CANDIDATE_DEDUP_TOL)
        });
        if !dup {
            offsets.push(a);
        }
    }
    Ok(offsets.into_iter().map(Transform::Translation).collect())
}

/// Best candidate translation. Requires `p <= 1`.
pub fn estimate_translation(obs: &ObservationSet, c: CostParams) -> Result<EstimateResult> {
    if !c.is_robust() {
        return Err(Error::UnsupportedMode(format!(
            "candidate enumeration needs p <= 1, got {}",
            c.p()
        )));
    }
    let candidates = candidate_translations(obs)?;
    let mut best: Option<((f64, f64, usize), Transform)> = None;
    for (k, t) in candidates.into_iter().enumerate() {
        let key = (cost_unchecked(obs, &t, c), t.param_norm(), k);
        if best
            .as_ref()
            .is_none_or(|(b, _)| rank(key, *b) == Ordering::Less)
        {
            best = Some((key, t));
        }
    }
    let ((cost, _, _), best) = best.expect("nonempty set yields a candidate");
    Ok(EstimateResult {
        best,
        cost,
        evaluations: obs.len() as u64,
        origin: Origin::Candidate,
        converged: true,
    })
}

fn check_family(obs: &ObservationSet, family: Family) -> Result<usize> {
    let dim = require_nonempty(obs)?;
    if let Some(req) = family.required_dim() {
        if dim != req {
            return Err(Error::DimensionMismatch {
                expected: req,
                found: dim,
            });
        }
        if obs.inputs().iter().all(|x| x.norm() == 0.0) {
            return Err(Error::InvalidInput(format!(
                "{family} needs at least one input away from the origin"
            )));
        }
    }
    Ok(dim)
}

fn coarse_angles() -> impl Iterator<Item = f64> {
    (0..COARSE_ANGLES)
        .map(|k| crate::model::normalize_angle(2.0 * PI * k as f64 / COARSE_ANGLES as f64))
}

/// Deterministic starting points for `family`, derived from the data.
pub fn seed_pool(obs: &ObservationSet, family: Family) -> Result<Vec<Transform>> {
    check_family(obs, family)?;
    let mut pool = Vec::new();
    match family {
        Family::Translation => pool.extend(candidate_translations(obs)?),
        Family::Rotation2D => {
            for (i, o) in obs.pairs() {
                if i.norm() > 0.0 && o.norm() > 0.0 {
                    let (x, y) = (i.coords(), o.coords());
                    pool.push(Transform::rotation(y[1].atan2(y[0]) - x[1].atan2(x[0])));
                }
            }
            pool.extend(coarse_angles().map(Transform::rotation));
        }
        Family::Euclidean2D => {
            for theta in coarse_angles() {
                let (s, c) = theta.sin_cos();
                for (i, o) in obs.pairs() {
                    let (x, y) = (i.coords(), o.coords());
                    let offset = [y[0] - (c * x[0] - s * x[1]), y[1] - (s * x[0] + c * x[1])];
                    pool.push(Transform::euclidean(theta, offset));
                }
            }
        }
        Family::Scaling => {
            for (i, o) in obs.pairs() {
                let nn: f64 = i.coords().iter().map(|v| v * v).sum();
                if nn > 0.0 {
                    let dot: f64 = i.coords().iter().zip(o.coords()).map(|(a, b)| a * b).sum();
                    let s = dot / nn;
                    if s > 0.0 && s.is_finite() {
                        pool.push(Transform::Scaling(s));
                    }
                }
            }
            pool.extend(SCALE_GRID.iter().map(|&s| Transform::Scaling(s)));
        }
    }
    Ok(pool)
}

fn random_start(pool: &[Transform], family: Family, rng: &mut ChaCha8Rng) -> Transform {
    let arity = pool[0].params().len();
    let mut lo = vec![f64::INFINITY; arity];
    let mut hi = vec![f64::NEG_INFINITY; arity];
    for t in pool {
        for (k, v) in t.params().into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let mut params: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| if b > a { rng.random_range(a..b) } else { a })
        .collect();
    match family {
        Family::Rotation2D | Family::Euclidean2D => params[0] = rng.random_range(-PI..PI),
        Family::Scaling => {
            let (a, b) = (lo[0].max(1e-6).ln(), hi[0].max(1e-6).ln());
            params[0] = if b > a {
                rng.random_range(a..b).exp()
            } else {
                lo[0]
            };
        }
        Family::Translation => {}
    }
    Transform::from_params(family, &params).expect("sampled inside the seed hull")
}

/// Parameter steps of the initial simplex around `t`.
fn initial_steps(t: &Transform, span: f64) -> Vec<f64> {
    match t {
        Transform::Translation(a) => vec![INITIAL_STEP_FRACTION * span; a.len()],
        Transform::Rotation2D(_) => vec![INITIAL_STEP_FRACTION * 2.0 * PI],
        Transform::Euclidean2D { .. } => vec![
            INITIAL_STEP_FRACTION * 2.0 * PI,
            INITIAL_STEP_FRACTION * span,
            INITIAL_STEP_FRACTION * span,
        ],
        Transform::Scaling(s) => vec![INITIAL_STEP_FRACTION * s.abs().max(1e-3)],
    }
}

struct Minimum {
    x: Vec<f64>,
    fx: f64,
    evaluations: u64,
    converged: bool,
}

/// Nelder–Mead with coefficients (1, 2, 0.5, 0.5). The best vertex never gets
/// worse, so a start at a global minimum stays there.
fn nelder_mead<F>(f: &F, x0: &[f64], steps: &[f64], max_iters: usize, tol: f64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += steps[k];
        simplex.push(v);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evaluations = (n + 1) as u64;
    let mut converged = false;

    for _ in 0..max_iters {
        // stable sort keeps the incumbent first among equal costs
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        fv = order.iter().map(|&k| fv[k]).collect();

        let spread = fv[n] - fv[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let scale = simplex[0].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let flat = spread <= tol * fv[0].abs().max(1.0) && diameter <= SIMPLEX_XTOL * scale;
        if flat || diameter <= 1e-15 * scale {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = f(&xr);
        evaluations += 1;
        if fr < fv[0] {
            let xe = along(2.0);
            let fe = f(&xe);
            evaluations += 1;
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            let (xc, fc) = if fr < fv[n] {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evaluations += 1;
            if fc < fv[n].min(fr) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for k in 1..=n {
                    let shrunk: Vec<f64> = simplex[k]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    simplex[k] = shrunk;
                    fv[k] = f(&simplex[k]);
                }
                evaluations += n as u64;
            }
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| fv[a].total_cmp(&fv[b]).then(a.cmp(&b)))
        .expect("simplex has vertices");
    Minimum {
        x: simplex[best].clone(),
        fx: fv[best],
        evaluations,
        converged,
    }
}

fn param_cost(obs: &ObservationSet, family: Family, c: CostParams, x: &[f64]) -> f64 {
    match Transform::from_params(family, x) {
        Ok(t) => cost_unchecked(obs, &t, c),
        Err(_) => f64::INFINITY,
    }
}

/// Nelder–Mead from a start, restarted from its own terminal point until the
/// cost stops improving.
fn polish(
    obs: &ObservationSet,
    family: Family,
    c: CostParams,
    cfg: &SolverConfig,
    start: &Transform,
    span: f64,
) -> (Transform, f64, u64, bool) {
    let f = |x: &[f64]| param_cost(obs, family, c, x);
    let mut x = start.params();
    let mut fx = f(&x);
    let mut evaluations = 1;
    let mut converged = true;
    for _ in 0..=MAX_RESTARTS {
        let t = Transform::from_params(family, &x).expect("finite incumbent");
        let m = nelder_mead(
            &f,
            &x,
            &initial_steps(&t, span),
            cfg.max_iters,
            cfg.simplex_tol,
        );
        evaluations += m.evaluations;
        converged = m.converged;
        if m.fx < fx {
            x = m.x;
            fx = m.fx;
        } else {
            break;
        }
    }
    let t = Transform::from_params(family, &x).expect("finite incumbent");
    (t, fx, evaluations, converged)
}

/// Multi-start simplex search seeded from [`seed_pool`] plus random starts.
pub fn estimate_simplex(
    obs: &ObservationSet,
    family: Family,
    c: CostParams,
    cfg: &SolverConfig,
) -> Result<EstimateResult> {
    cfg.validate()?;
    let pool = seed_pool(obs, family)?;
    run_stages(obs, family, c, cfg, &pool, true)
}

/// Simplex search from exactly the given starts (no seed pool, no random
/// fill). Continuation still applies.
pub fn simplex_from_starts(
    obs: &ObservationSet,
    family: Family,
    c: CostParams,
    cfg: &SolverConfig,
    starts: &[Transform],
) -> Result<EstimateResult> {
    cfg.validate()?;
    check_family(obs, family)?;
    if starts.is_empty() {
        return Err(Error::InvalidInput("no starting transforms given".into()));
    }
    if let Some(t) = starts.iter().find(|t| t.family() != family) {
        return Err(Error::InvalidInput(format!(
            "start of family {} given for {family}",
            t.family()
        )));
    }
    run_stages(obs, family, c, cfg, starts, false)
}

fn run_stages(
    obs: &ObservationSet,
    family: Family,
    c: CostParams,
    cfg: &SolverConfig,
    pool: &[Transform],
    screen: bool,
) -> Result<EstimateResult> {
    let dim = obs.dim().expect("checked nonempty");
    // fail early on translations of the wrong length
    total_cost(obs, &pool[0], c)?;
    let span = obs.output_span();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evaluations = 0u64;
    let mut converged = true;
    let mut winner: Option<Transform> = None;
    let mut winner_cost = f64::INFINITY;

    let random_fill: Vec<Transform> = if screen && pool.len() < cfg.starts {
        (0..cfg.starts - pool.len())
            .map(|_| random_start(pool, family, &mut rng))
            .collect()
    } else {
        Vec::new()
    };

    for stage_p in cfg.stages(c.p()) {
        let sc = CostParams::new(stage_p)?;
        let mut starts: Vec<Transform> = if screen {
            let mut scored: Vec<((f64, f64, usize), &Transform)> = pool
                .iter()
                .enumerate()
                .map(|(k, t)| ((cost_unchecked(obs, t, sc), t.param_norm(), k), t))
                .collect();
            evaluations += pool.len() as u64;
            scored.sort_by(|a, b| rank(a.0, b.0));
            scored
                .into_iter()
                .take(cfg.starts)
                .map(|(_, t)| t.clone())
                .chain(random_fill.iter().cloned())
                .collect()
        } else {
            pool.to_vec()
        };
        if let Some(w) = winner.take() {
            starts.insert(0, w);
        }

        let mut best: Option<((f64, f64, usize), Transform)> = None;
        for (k, s) in starts.iter().enumerate() {
            let (t, fx, ev, conv) = polish(obs, family, sc, cfg, s, span);
            evaluations += ev;
            converged &= conv;
            let key = (fx, t.param_norm(), k);
            if best
                .as_ref()
                .is_none_or(|(b, _)| rank(key, *b) == Ordering::Less)
            {
                best = Some((key, t));
            }
        }
        let (key, t) = best.expect("at least one start");
        winner_cost = key.0;
        winner = Some(t);
    }

    let best = winner.expect("at least one stage");
    debug_assert_eq!(best.params().len(), family.arity(dim));
    Ok(EstimateResult {
        cost: winner_cost,
        best,
        evaluations,
        origin: Origin::Simplex,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    /// Number of nodes, endpoints included.
    pub nodes: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, nodes: usize) -> Self {
        Self { min, max, nodes }
    }

    pub fn node(&self, k: usize) -> f64 {
        if self.nodes <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.nodes - 1) as f64
        }
    }

    pub fn step(&self) -> f64 {
        if self.nodes <= 1 {
            0.0
        } else {
            (self.max - self.min) / (self.nodes - 1) as f64
        }
    }
}

/// One axis per transform parameter, in [`Transform::params`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

impl GridSpec {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Self { axes }
    }

    pub fn node_count(&self) -> u128 {
        self.axes.iter().map(|a| a.nodes as u128).product()
    }

    fn params_at(&self, mut index: u128, out: &mut [f64]) {
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let n = axis.nodes as u128;
            *slot = axis.node((index % n) as usize);
            index /= n;
        }
    }
}

/// Exhaustive grid minimum. Nodes that are not valid transforms (a
/// non-positive scale) are skipped.
pub fn grid_oracle(
    obs: &ObservationSet,
    family: Family,
    c: CostParams,
    grid: &GridSpec,
) -> Result<EstimateResult> {
    let dim = check_family(obs, family)?;
    if grid.axes.len() != family.arity(dim) {
        return Err(Error::InvalidInput(format!(
            "{family} on dimension {dim} needs {} grid axes, got {}",
            family.arity(dim),
            grid.axes.len()
        )));
    }
    if grid
        .axes
        .iter()
        .any(|a| a.nodes == 0 || !(a.min.is_finite() && a.max.is_finite()) || a.max < a.min)
    {
        return Err(Error::InvalidInput(
            "grid axes need finite ranges and at least one node".into(),
        ));
    }
    let nodes = grid.node_count();
    if nodes > MAX_GRID_NODES {
        return Err(Error::GridTooLarge {
            nodes,
            limit: MAX_GRID_NODES,
        });
    }

    let arity = grid.axes.len();
    let best = (0..nodes as u64)
        .into_par_iter()
        .fold(
            || (None::<(f64, f64, usize)>, vec![0.0; arity]),
            |(best, mut buf), k| {
                grid.params_at(k as u128, &mut buf);
                let key = match Transform::from_params(family, &buf) {
                    Ok(t) => Some((cost_unchecked(obs, &t, c), t.param_norm(), k as usize)),
                    Err(_) => None,
                };
                let best = match (best, key) {
                    (Some(b), Some(k)) if rank(k, b) == Ordering::Less => Some(k),
                    (None, k) => k,
                    (b, _) => b,
                };
                (best, buf)
            },
        )
        .map(|(b, _)| b)
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if rank(y, x) == Ordering::Less { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            },
        );
    let (cost, _, k) =
        best.ok_or_else(|| Error::InvalidInput("grid has no valid transform".into()))?;
    let mut params = vec![0.0; arity];
    grid.params_at(k as u128, &mut params);
    Ok(EstimateResult {
        best: Transform::from_params(family, &params)?,
        cost,
        evaluations: nodes as u64,
        origin: Origin::Grid,
        converged: true,
    })
}

/// Grid centred on `center` with half-width `radius` per parameter.
pub fn grid_around(center: &Transform, radius: &[f64], nodes_per_axis: usize) -> GridSpec {
    GridSpec::new(
        center
            .params()
            .iter()
            .zip(radius)
            .map(|(c, r)| GridAxis::new(c - r, c + r, nodes_per_axis))
            .collect(),
    )
}

/// Regular translation grid over a box, convenience for 1-D and 2-D tests.
pub fn translation_grid(lo: &Point, hi: &Point, nodes_per_axis: usize) -> GridSpec {
    GridSpec::new(
        lo.coords()
            .iter()
            .zip(hi.coords())
            .map(|(a, b)| GridAxis::new(*a, *b, nodes_per_axis))
            .collect(),
    )
}
