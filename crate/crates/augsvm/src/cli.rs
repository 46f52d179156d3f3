//! `augsvm train | predict | evaluate | bench | generate`.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use augsvm_core::{predict, train, Algorithm, KernelSpec, McEstimator, Solver, Task, TrainConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, write_bench_csv, BenchSpec, SweepAxis};
use crate::error::{Error, Result};
use crate::eval::{evaluate, TrainSummary};
use crate::io::libsvm::{read_records, LabelMode, ParseOptions};
use crate::io::{load_model, parse_libsvm, parse_libsvm_split, save_model, write_libsvm, write_timing_csv};
use crate::synth::{self, SynthSpec};
use crate::threads::ThreadExecutor;

#[derive(Debug, Parser)]
#[command(name = "augsvm", version, about = "Parallel SVM training by latent-scale augmentation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model and write it to a file.
    Train(TrainCmd),
    /// Print one prediction per input row.
    Predict(PredictCmd),
    /// Score a model on labelled rows.
    Evaluate(EvaluateCmd),
    /// Time training over a sweep and emit CSV.
    Bench(BenchCmd),
    /// Write a synthetic dataset in LIBSVM format.
    Generate(GenerateCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Cls,
    Svr,
    Mlt,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Cls => Task::Cls,
            TaskArg::Svr => Task::Svr,
            TaskArg::Mlt => Task::Mlt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Lin,
    Krn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Em,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Gaussian,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Average,
    Best,
}

/// Every training knob.
#[derive(Debug, Clone, Args)]
pub struct TrainOpts {
    #[arg(long, value_enum, default_value = "cls")]
    pub task: TaskArg,
    #[arg(long, value_enum, default_value = "lin")]
    pub solver: SolverArg,
    #[arg(long, value_enum, default_value = "em")]
    pub algo: AlgoArg,
    /// Regularization λ (default 1).
    #[arg(long, conflicts_with = "c")]
    pub lambda: Option<f64>,
    /// Soft-margin constant; sets λ = 2/C.
    #[arg(long = "C", id = "c")]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// EM stops when the objective changes by at most tol·N.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 10)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub gamma_floor: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Do not append a unit bias feature.
    #[arg(long)]
    pub no_bias: bool,
    /// MC estimate: running average or lowest-objective sample.
    #[arg(long, value_enum, default_value = "average")]
    pub mc_estimator: EstimatorArg,
    /// Largest training set held as a dense Gram matrix.
    #[arg(long, default_value_t = 8192)]
    pub gram_cap: usize,
}

impl TrainOpts {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            solver: match self.solver {
                SolverArg::Lin => Solver::Lin,
                SolverArg::Krn => Solver::Krn,
            },
            algo: match self.algo {
                AlgoArg::Em => Algorithm::Em,
                AlgoArg::Mc => Algorithm::Mc,
            },
            task: self.task.into(),
            lambda: match (self.lambda, self.c) {
                (Some(l), _) => l,
                (None, Some(c)) => TrainConfig::lambda_from_c(c),
                (None, None) => 1.0,
            },
            epsilon: self.epsilon,
            kernel: match self.kernel {
                KernelArg::Gaussian => KernelSpec::Gaussian { sigma: self.sigma },
                KernelArg::Linear => KernelSpec::Linear,
            },
            workers: self.workers,
            max_iters: self.max_iters,
            tol_scale: self.tol,
            burn_in: self.burn_in,
            gamma_floor: self.gamma_floor,
            seed: self.seed,
            add_bias: !self.no_bias,
            mc_estimator: match self.mc_estimator {
                EstimatorArg::Average => McEstimator::Average,
                EstimatorArg::Best => McEstimator::BestSample,
            },
            gram_cap: self.gram_cap,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainCmd {
    /// Training data in LIBSVM format.
    pub data: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub opts: TrainOpts,
    /// Feature count override (before the bias column).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Class count override for multiclass data.
    #[arg(long)]
    pub classes: Option<usize>,
    /// Parse the file in one line-aligned piece per worker.
    #[arg(long)]
    pub parallel_read: bool,
    /// Write per-rank phase timings as CSV.
    #[arg(long)]
    pub timing: Option<PathBuf>,
    /// Print the training report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PredictCmd {
    pub model: PathBuf,
    pub data: PathBuf,
    /// Write predictions here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateCmd {
    pub model: PathBuf,
    pub data: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Workers,
    Rows,
    Features,
    Classes,
}

/// Generator settings shared by `bench` and `generate`.
#[derive(Debug, Clone, Args)]
pub struct SynthOpts {
    #[arg(long, default_value_t = 1000)]
    pub rows: usize,
    #[arg(long, default_value_t = 2)]
    pub features: usize,
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    #[arg(long, default_value_t = 2.0)]
    pub separation: f64,
    /// Probability that a feature entry is zero.
    #[arg(long, default_value_t = 0.0)]
    pub sparsity: f64,
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// Seed of the generator.
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
}

impl SynthOpts {
    fn spec(&self, add_bias: bool) -> Result<SynthSpec> {
        if !(0.0..1.0).contains(&self.sparsity) {
            return Err(Error::Usage(format!("sparsity must be in [0, 1), got {}", self.sparsity)));
        }
        Ok(SynthSpec {
            rows: self.rows,
            features: self.features,
            classes: self.classes,
            separation: self.separation,
            sparsity: self.sparsity,
            noise: self.noise,
            add_bias,
            seed: self.data_seed,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchCmd {
    #[arg(long, value_enum)]
    pub sweep: AxisArg,
    /// Comma-separated values of the swept quantity.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,
    #[command(flatten)]
    pub synth: SynthOpts,
    /// Benchmark a fixed dataset instead (worker sweeps).
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub opts: TrainOpts,
    /// Iterations per run.
    #[arg(long, default_value_t = 5)]
    pub iters: usize,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// CSV destination; stdout if unset.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Blobs,
    Moons,
    Xor,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateCmd {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[command(flatten)]
    pub synth: SynthOpts,
    #[arg(short, long)]
    pub output: PathBuf,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    fs::File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn out_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn cmd_train(cmd: &TrainCmd, out: &mut dyn Write) -> Result<()> {
    let config = cmd.opts.config();
    config.validate()?;
    let opts = ParseOptions {
        task: config.task,
        add_bias: config.add_bias,
        dim: cmd.dim,
        classes: cmd.classes,
    };
    let data = if cmd.parallel_read {
        parse_libsvm_split(&read_text(&cmd.data)?, &opts, config.workers)?
    } else {
        parse_libsvm(open(&cmd.data)?, &opts)?
    };
    let exec = ThreadExecutor::new();
    let t0 = std::time::Instant::now();
    let (model, trace) = train(&data, &config, &exec)?;
    let seconds = t0.elapsed().as_secs_f64();
    write_file(&cmd.output, save_model(&model)?.as_bytes())?;
    if let Some(p) = &cmd.timing {
        let f = fs::File::create(p).map_err(|e| Error::io(p, e))?;
        write_timing_csv(&trace, std::io::BufWriter::new(f)).map_err(|e| Error::io(p, e))?;
    }
    let summary = TrainSummary::new(&trace, seconds);
    if cmd.json {
        let mut report = evaluate(&model, data.rows(), data.labels())?;
        report.train = Some(summary);
        writeln!(out, "{}", report.to_json()).map_err(out_err)?;
    } else {
        writeln!(
            out,
            "final_objective {}\niterations {}\nstop {}\ntrain_seconds {}",
            summary.final_objective,
            summary.iterations,
            summary.stop.as_str(),
            summary.seconds
        )
        .map_err(out_err)?;
    }
    Ok(())
}

/// Rows of `path` laid out for `model`'s feature space.
fn records_for(model: &augsvm_core::Model, path: &Path, mode: LabelMode) -> Result<crate::io::Records> {
    let k = model.dim - usize::from(model.add_bias);
    read_records(open(path)?, mode, model.add_bias, Some(k)).map_err(|e| match e {
        Error::Parse { line, message } if message.contains("exceeds the declared dimension") => {
            Error::Core(augsvm_core::Error::InvalidRow(format!("line {line}: {message}")))
        }
        e => e,
    })
}

fn cmd_predict(cmd: &PredictCmd, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&read_text(&cmd.model)?)?;
    let rec = records_for(&model, &cmd.data, LabelMode::Any)?;
    let mut text = String::new();
    for x in &rec.rows {
        text.push_str(&predict(&model, x)?.as_f64().to_string());
        text.push('\n');
    }
    match &cmd.output {
        Some(p) => write_file(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(out_err),
    }
}

fn cmd_evaluate(cmd: &EvaluateCmd, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&read_text(&cmd.model)?)?;
    let rec = records_for(&model, &cmd.data, LabelMode::Task(model.task))?;
    let report = evaluate(&model, &rec.rows, &rec.labels)?;
    let text = if cmd.json { report.to_json() + "\n" } else { report.to_text() };
    out.write_all(text.as_bytes()).map_err(out_err)
}

fn cmd_bench(cmd: &BenchCmd, out: &mut dyn Write) -> Result<()> {
    let config = cmd.opts.config();
    config.validate()?;
    let data = match &cmd.data {
        Some(p) => {
            let text = read_text(p)?;
            let opts = ParseOptions {
                task: config.task,
                add_bias: config.add_bias,
                dim: None,
                classes: None,
            };
            Some(crate::io::parse_libsvm_str(&text, &opts)?)
        }
        None => None,
    };
    let axis = match cmd.sweep {
        AxisArg::Workers => SweepAxis::Workers,
        AxisArg::Rows => SweepAxis::Rows,
        AxisArg::Features => SweepAxis::Features,
        AxisArg::Classes => SweepAxis::Classes,
    };
    let mut synth = cmd.synth.spec(config.add_bias)?;
    if config.task != Task::Mlt {
        synth.classes = 2;
    }
    let spec = BenchSpec {
        axis,
        values: cmd.values.clone(),
        synth,
        data,
        config,
        iterations: cmd.iters,
        repeats: cmd.repeats,
    };
    let rows = run_bench(&spec, &ThreadExecutor::new())?;
    let mut csv = Vec::new();
    write_bench_csv(&rows, &mut csv).map_err(out_err)?;
    match &cmd.output {
        Some(p) => write_file(p, &csv),
        None => out.write_all(&csv).map_err(out_err),
    }
}

fn cmd_generate(cmd: &GenerateCmd) -> Result<()> {
    let spec = cmd.synth.spec(false)?;
    let data = match cmd.kind {
        KindArg::Blobs => synth::blobs(&spec)?,
        KindArg::Moons => synth::moons(&spec)?,
        KindArg::Xor => synth::xor(false),
        KindArg::Linear => synth::linear_targets(&spec, &synth::coefficients(&spec))?,
    };
    let mut buf = Vec::new();
    write_libsvm(&data, &mut buf).map_err(|e| Error::io(&cmd.output, e))?;
    write_file(&cmd.output, &buf)
}

/// Runs one already-parsed command.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Train(c) => cmd_train(c, out),
        Command::Predict(c) => cmd_predict(c, out),
        Command::Evaluate(c) => cmd_evaluate(c, out),
        Command::Bench(c) => cmd_bench(c, out),
        Command::Generate(c) => cmd_generate(c),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
