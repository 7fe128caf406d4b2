//! Command-line front end and its file formats.
//!
//! Exit codes: 0 success, 2 input error, 3 unsupported mode, 4 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::tables;
use crate::error::Error;
use crate::model::{CostParams, Family, ObservationSet, Point, Transform};
use crate::simulate::{
    breakdown_sweep, gen_instance, random_ideal, reproduce_pointset_experiment, sweep_svg,
    Direction, NoiseKind, NoiseSpec, SweepSpec,
};
use crate::solver::{estimate_simplex, estimate_translation, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Largest exponent the estimators accept.
pub const MAX_P: f64 = 2.0;

#[derive(Debug)]
enum Failure {
    Input(String),
    Unsupported(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Unsupported(_) => EXIT_UNSUPPORTED,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Unsupported(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedMode(_) => Failure::Unsupported(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// One `(input, output)` pair as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealEntry {
    pub family: Family,
    pub params: Vec<f64>,
}

/// Point-set JSON: `dimension`, `pairs`, and optionally the number of
/// leading exact pairs and the generating transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dimension: usize,
    pub pairs: Vec<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inliers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealEntry>,
}

impl PointSetFile {
    pub fn from_observations(obs: &ObservationSet, ideal: Option<&Transform>) -> Self {
        Self {
            dimension: obs.dim().unwrap_or(0),
            pairs: obs
                .pairs()
                .map(|(i, o)| PairEntry {
                    input: i.coords().to_vec(),
                    output: o.coords().to_vec(),
                })
                .collect(),
            inliers: obs.labeled_inliers(),
            ideal: ideal.map(|t| IdealEntry {
                family: t.family(),
                params: t.params(),
            }),
        }
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::InvalidInput(format!(
                "malformed point-set JSON at line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn to_observations(&self) -> crate::Result<ObservationSet> {
        if self.dimension == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let mut inputs = Vec::with_capacity(self.pairs.len());
        let mut outputs = Vec::with_capacity(self.pairs.len());
        for (k, pair) in self.pairs.iter().enumerate() {
            for v in [&pair.input, &pair.output] {
                if v.len() != self.dimension {
                    return Err(Error::InvalidInput(format!(
                        "pair {k}: expected {} coordinates, found {}",
                        self.dimension,
                        v.len()
                    )));
                }
            }
            inputs.push(Point::new(pair.input.clone())?);
            outputs.push(Point::new(pair.output.clone())?);
        }
        let obs = ObservationSet::new(inputs, outputs)?;
        match self.inliers {
            Some(n) => obs.with_inliers(n),
            None => Ok(obs),
        }
    }

    pub fn ideal_transform(&self) -> crate::Result<Option<Transform>> {
        self.ideal
            .as_ref()
            .map(|e| Transform::from_params(e.family, &e.params))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub family: Family,
    pub p: f64,
    pub params: Vec<f64>,
    pub cost: f64,
    pub evaluations: u64,
    pub seed: u64,
    pub origin: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "lprobust",
    version,
    about = "Robust L^p estimation of geometric transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate a transform from a point-set file.
    Estimate(EstimateArgs),
    /// Print one of the minimum-inlier tables.
    Table(TableArgs),
    /// Recovery-rate sweep over exponents and inlier fractions.
    Simulate(SimulateArgs),
    /// Write a synthetic labeled point-set file.
    Gen(GenArgs),
    /// Run the 5 + 25 point Euclidean experiment and write overlays.
    Pointset(PointsetArgs),
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    family: Family,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Continuation exponents, largest first, e.g. `2,1,0.5`.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    which: u32,
    /// Confidence level for table 3.
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NoiseArg {
    Equal,
    Halfnormal,
    Uniform,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DirectionArg {
    Fixed,
    Isotropic,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[arg(long, value_enum)]
    noise: NoiseArg,
    /// Gap, sigma or maximum distance, depending on the noise law.
    #[arg(long, default_value_t = 1.0)]
    noise_scale: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Isotropic)]
    direction: DirectionArg,
}

impl NoiseArgs {
    fn spec(&self) -> crate::Result<NoiseSpec> {
        let s = self.noise_scale;
        let kind = match self.noise {
            NoiseArg::Equal => NoiseKind::EqualSpacing { gap: s },
            NoiseArg::Halfnormal => NoiseKind::HalfNormal { sigma: s },
            NoiseArg::Uniform => NoiseKind::Uniform { max: s },
        };
        let direction = match self.direction {
            DirectionArg::Fixed => Direction::FixedAxis,
            DirectionArg::Isotropic => Direction::Isotropic,
        };
        NoiseSpec::new(kind, direction)
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    fractions: Vec<f64>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pairs per instance.
    #[arg(long, default_value_t = 118)]
    total: usize,
    /// Point dimension for translation and scaling.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Directory for the heat-map SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    inliers: usize,
    #[arg(long)]
    outliers: usize,
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Point dimension for translation.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PointsetArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Directory for `report.json` and the overlays; the report goes to
    /// stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => cmd_estimate(&a),
        Command::Table(a) => cmd_table(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Pointset(a) => cmd_pointset(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn check_p(p: f64) -> CliResult<CostParams> {
    let c = CostParams::new(p)?;
    if p > MAX_P {
        return Err(Failure::Unsupported(format!(
            "p = {p} is above the supported maximum {MAX_P}"
        )));
    }
    Ok(c)
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_estimate(a: &EstimateArgs) -> CliResult<()> {
    let c = check_p(a.p)?;
    let text = fs::read_to_string(&a.points).map_err(|e| io_err(&a.points, e))?;
    let obs = PointSetFile::parse(&text)?.to_observations()?;
    let cfg = SolverConfig {
        starts: a.starts,
        seed: a.seed,
        p_schedule: a.schedule.clone(),
        ..Default::default()
    };
    cfg.validate()?;
    let est = if a.family == Family::Translation && c.is_robust() {
        estimate_translation(&obs, c)?
    } else {
        estimate_simplex(&obs, a.family, c, &cfg)?
    };
    let result = ResultFile {
        family: a.family,
        p: a.p,
        params: est.best.params(),
        cost: est.cost,
        evaluations: est.evaluations,
        seed: a.seed,
        origin: est.origin.name().to_string(),
    };
    emit(&to_json(&result), a.out.as_deref())
}

#[derive(Serialize)]
struct RatioRow {
    p: f64,
    min_n_over_m: f64,
}

#[derive(Serialize)]
struct HoeffdingRow {
    m: usize,
    a: f64,
}

fn cmd_table(a: &TableArgs) -> CliResult<()> {
    if a.confidence.is_some() && a.which != 3 {
        return Err(Failure::Input(
            "--confidence only applies to table 3".into(),
        ));
    }
    let text = match a.which {
        1 | 2 => {
            let rows: Vec<RatioRow> = if a.which == 1 {
                tables::equal_spacing()
            } else {
                tables::half_normal()
            }
            .into_iter()
            .map(|(p, min_n_over_m)| RatioRow { p, min_n_over_m })
            .collect();
            match a.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut s = String::from("p,min_n_over_m\n");
                    for r in &rows {
                        s.push_str(&format!("{},{}\n", r.p, r.min_n_over_m));
                    }
                    s
                }
            }
        }
        3 => {
            let conf = a.confidence.unwrap_or(tables::DEFAULT_CONFIDENCE);
            let rows: Vec<HoeffdingRow> = tables::hoeffding(conf)?
                .into_iter()
                .map(|(m, a)| HoeffdingRow { m, a })
                .collect();
            match a.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut s = String::from("m,a\n");
                    for r in &rows {
                        s.push_str(&format!("{},{}\n", r.m, r.a));
                    }
                    s
                }
            }
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown table {other}; expected 1, 2 or 3"
            )))
        }
    };
    emit(&text, None)
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult<()> {
    if a.trials < 1 {
        return Err(Failure::Input("--trials must be at least 1".into()));
    }
    for &p in &a.p {
        check_p(p)?;
    }
    let mut spec = SweepSpec::new(
        a.family,
        a.p.clone(),
        a.fractions.clone(),
        a.noise.spec()?,
        a.trials,
        a.seed,
    );
    spec.total = a.total;
    spec.dim = a.family.required_dim().unwrap_or(a.dim);
    spec.solver.starts = a.starts;
    let rows = breakdown_sweep(&spec)?;

    let mut csv = String::from("p,fraction,recovery_rate,trials\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.p, r.fraction, r.recovery_rate, r.trials
        ));
    }
    if let Some(dir) = &a.svg {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let path = dir.join("sweep.svg");
        fs::write(&path, sweep_svg(&rows)).map_err(|e| io_err(&path, e))?;
    }
    emit(&csv, None)
}

fn cmd_gen(a: &GenArgs) -> CliResult<()> {
    let dim = a.family.required_dim().unwrap_or(a.dim);
    if a.family == Family::Scaling && dim != 2 {
        return Err(Failure::Unsupported(
            "generated scaling instances are 2-D".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let ideal = random_ideal(a.family, dim, &mut rng)?;
    let obs = gen_instance(
        a.inliers,
        a.outliers,
        a.family,
        &ideal,
        &a.noise.spec()?,
        rng.random(),
    )?;
    let file = PointSetFile::from_observations(&obs, Some(&ideal));
    emit(&to_json(&file), Some(&a.out))
}

fn cmd_pointset(a: &PointsetArgs) -> CliResult<()> {
    let cfg = SolverConfig {
        starts: a.starts,
        ..Default::default()
    };
    let (report, svgs) = reproduce_pointset_experiment(a.seed, &cfg)?;
    let json = to_json(&report);
    let Some(dir) = &a.out else {
        return emit(&json, None);
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    emit(&json, Some(&dir.join("report.json")))?;
    for (p, svg) in svgs {
        emit(&svg, Some(&dir.join(format!("overlay_p{p}.svg"))))?;
    }
    Ok(())
}
