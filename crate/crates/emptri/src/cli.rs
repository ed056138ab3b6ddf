//! The `emptri` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (bad input files,
//! configuration or point sets), 3 a frozen expectation or an invariant check
//! failed.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use emptri_core::engine::{brute_force_empty_triangles, first_moment, near_pairs, DegreeTable, EmptyTriangleReport};
use emptri_core::geom::find_collinear_triple;
use emptri_core::sample::sample_uniform;
use emptri_core::{Error, PointSet};

use crate::experiments::{self, ConfigPatch, Experiment, ExperimentConfig, OccupancyEvent};
use crate::io::{read_point_set, write_degree_csv, write_point_set, BodySpec, ReportJson};
use crate::par::degree_report_par;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "emptri", version, about = "Empty triangles of planar point sets and random samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Report f, the pair degrees and optionally N_T for a point-set file.
    Analyze(AnalyzeArgs),
    /// Write a uniform sample of a normalized body as a point-set file.
    Sample(SampleArgs),
    /// Run a Monte Carlo experiment.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Point-set file, or `-` for standard input.
    pub input: PathBuf,
    /// Also count pairs at distance <= T (body units) and check the first-moment inequality.
    #[arg(long)]
    pub t: Option<f64>,
    /// Write the full degree table as CSV.
    #[arg(long)]
    pub degree_csv: Option<PathBuf>,
    /// Cross-check against the brute-force enumerator.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// `square`, `disk` or a body JSON file.
    #[arg(long, default_value = "square")]
    pub body: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: Experiment,
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Sample size or comma-separated grid.
    #[arg(long)]
    pub n: Option<String>,
    /// `square`, `disk` or a body JSON file.
    #[arg(long)]
    pub body: Option<String>,
    #[arg(long)]
    pub t_alpha: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<usize>,
    /// Directory for `<name>.csv` and `<name>.json` (CSV goes to standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON array of expected row values with tolerances.
    #[arg(long)]
    pub frozen: Option<PathBuf>,
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub check_general_position: bool,
    /// Occupancy event: `always`, `max>=M`, `exactly:K:J` or `first-empty`.
    #[arg(long)]
    pub event: Option<OccupancyEvent>,
    /// Target order type: `convex:K` or a `k:signs` label.
    #[arg(long)]
    pub target: Option<String>,
    /// Fixed pair `x1,y1,x2,y2` in body coordinates.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn data(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_DATA, message: message.to_string() }
}

fn tolerance(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_TOLERANCE, message: message.to_string() }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(&a, stdout),
        Command::Sample(a) => sample(&a, stdout),
        Command::Experiment(a) => experiment(&a, stdout, stderr),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &PathBuf) -> Result<PointSet, Failure> {
    let parsed = if path.as_os_str() == "-" {
        read_point_set(io::stdin().lock())
    } else {
        let file = File::open(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
        read_point_set(BufReader::new(file))
    };
    parsed.map_err(|e| data(format!("{}: {e}", path.display())))
}

fn analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let set = read_input(&args.input)?;
    if let Some([i, j, k]) = find_collinear_triple(set.points()) {
        return Err(data(Error::Collinear(i, j, k)));
    }
    let report = if set.len() < 3 {
        EmptyTriangleReport::from_table(0, DegreeTable::new(set.len()))
    } else {
        degree_report_par(&set).map_err(data)?
    };
    if args.oracle {
        let reference = brute_force_empty_triangles(&set, usize::MAX).map_err(data)?;
        if set.len() >= 3 && reference != report {
            return Err(tolerance(format!("oracle mismatch: brute force f = {}, engine f = {}", reference.f, report.f)));
        }
    }
    let near = match args.t {
        Some(t) => {
            let stat = near_pairs(&set, t, true).map_err(data)?;
            let fm = first_moment(&report, &stat).map_err(data)?;
            Some((stat, fm))
        }
        None => None,
    };
    let json = ReportJson::new(&report, near.as_ref().map(|(s, fm)| (s, *fm)));
    if let Some(path) = &args.degree_csv {
        let file = File::create(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
        write_degree_csv(BufWriter::new(file), &report).map_err(data)?;
    }
    serde_json::to_writer_pretty(&mut *stdout, &json).map_err(data)?;
    writeln!(stdout).map_err(data)?;
    if !json.handshake_ok || report.validate().is_err() {
        return Err(tolerance("report failed its identity checks"));
    }
    Ok(())
}

fn sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let spec = BodySpec::resolve(&args.body).map_err(data)?;
    let body = spec.normalized().map_err(data)?;
    let set = sample_uniform(&body, args.n, args.seed);
    let header = vec![
        format!("emptri {} sample", env!("CARGO_PKG_VERSION")),
        format!("body {}", serde_json::to_string(&spec).expect("body serializes")),
        format!("n {}", args.n),
        format!("seed {}", args.seed),
    ];
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_point_set(&mut w, &set, &header).and_then(|_| w.flush()).map_err(data)
        }
        None => write_point_set(stdout, &set, &header).map_err(data),
    }
}

fn parse_pair(text: &str) -> Result<[[f64; 2]; 2], Failure> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| data(format!("bad pair {text:?}")))?;
    match v.as_slice() {
        &[a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(data(format!("pair needs four numbers, got {text:?}"))),
    }
}

/// Defaults, then the configuration file, then the flags.
pub fn resolve_config(args: &ExperimentArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::defaults(args.name);
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
        ConfigPatch::from_json(&text).map_err(data)?.apply(&mut cfg);
    }
    let patch = ConfigPatch {
        body: args.body.as_deref().map(BodySpec::resolve).transpose().map_err(data)?,
        n_grid: args.n.as_deref().map(experiments::parse_grid).transpose().map_err(data)?,
        trials: args.trials,
        seed: args.seed,
        t_alpha: args.t_alpha,
        l: args.l,
        out: args.out.clone(),
        oracle: args.oracle.then_some(true),
        check_general_position: args.check_general_position.then_some(true),
        pair: args.pair.as_deref().map(parse_pair).transpose()?,
        event: args.event,
        target: args.target.clone(),
        iterations: args.iterations,
        ..ConfigPatch::default()
    };
    patch.apply(&mut cfg);
    Ok(cfg)
}

fn experiment(args: &ExperimentArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let cfg = resolve_config(args)?;
    let frozen = match &args.frozen {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            Some(experiments::parse_frozen(&text).map_err(|e| data(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let result = match args.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(data)?
            .install(|| experiments::run(args.name, &cfg)),
        None => experiments::run(args.name, &cfg),
    }
    .map_err(data)?;
    let verdict = frozen.as_deref().map(|f| experiments::compare_frozen(&result, f));

    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;
            let create = |ext: &str| {
                let path = dir.join(format!("{}.{ext}", args.name));
                File::create(&path).map(BufWriter::new).map_err(|e| data(format!("{}: {e}", path.display())))
            };
            let mut csv = create("csv")?;
            experiments::write_csv(&mut csv, &result).and_then(|_| csv.flush()).map_err(data)?;
            let mut json = create("json")?;
            experiments::write_summary(&mut json, &result, verdict.as_ref()).and_then(|_| json.flush()).map_err(data)?;
        }
        None => experiments::write_csv(&mut *stdout, &result).map_err(data)?,
    }

    if !result.checks.is_clean() {
        return Err(tolerance(format!(
            "invariant check failed: {}",
            result.checks.first_failure.as_deref().unwrap_or("unknown")
        )));
    }
    if let Some(v) = &verdict {
        for f in &v.failures {
            let e = &f.expectation;
            let _ = writeln!(
                stderr,
                "frozen: {} n={} {}: expected {} +/- {}, observed {:?}",
                e.experiment, e.n, e.statistic, e.expected, e.tolerance, f.observed
            );
        }
        if !v.passed() {
            return Err(tolerance(format!("{} of {} frozen expectations failed", v.failures.len(), v.checked)));
        }
    }
    Ok(())
}
