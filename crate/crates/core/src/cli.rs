//! The `ocsca` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data / I/O error, 3 numeric
//! error. Every output file is written atomically, so a failed command
//! leaves nothing behind.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{fit_batch_cost_svm, BatchSvmConfig};
use crate::config::BenchConfig;
use crate::data::{shuffled_stream, CsvOptions, DataFormat, DataSource, Dataset, LibsvmOptions, SynthSpec};
use crate::error::Error;
use crate::eval::{evaluate, report_csv, run_protocol, summary_table, text_report, timing_csv};
use crate::learner::{OcscaLearner, StreamSummary};
use crate::persist::{format_model, load_model, write_atomic, SavedModel};
use crate::scorer::{AdaptedClassifier, BaseScorer, LinearAdaptation};
use crate::types::{CostSchedule, Hyperparams, Sample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ocsca", version, about = "Online cost-sensitive classifier adaptation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a base model from scratch (zero base, one online pass or batch SVM).
    TrainBase(TrainBaseArgs),
    /// Adapt a saved model to a new cost schedule over a stream.
    Adapt(AdaptArgs),
    /// Evaluate a saved model on labelled data.
    Eval(EvalArgs),
    /// Run the cross-validated benchmark described by a config file.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// LIBSVM (any extension) or CSV (`.csv`) file.
    #[arg(long, value_name = "PATH", conflicts_with = "synth_spec")]
    pub data: Option<PathBuf>,
    /// Synthetic data, e.g. `n_pos=400,n_neg=1600,dim=2,sep=1.5,noise=1,seed=7`.
    #[arg(long, value_name = "SPEC")]
    pub synth_spec: Option<SynthSpec>,
    /// CSV column holding the label.
    #[arg(long, default_value_t = 0)]
    pub label_column: usize,
    /// CSV file has a header row.
    #[arg(long)]
    pub csv_header: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Trainer {
    Online,
    Batch,
}

#[derive(Debug, Args)]
pub struct TrainBaseArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Costs as `POS:NEG`.
    #[arg(long, value_name = "POS:NEG")]
    pub schedule: CostSchedule,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Shuffle the sample order with this seed (file order otherwise).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Trainer::Online)]
    pub trainer: Trainer,
    /// Batch trainer epochs.
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    /// Append a constant feature so the model learns an intercept.
    #[arg(long)]
    pub bias: bool,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AdaptArgs {
    /// Base model to adapt.
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// New costs as `POS:NEG`.
    #[arg(long, value_name = "POS:NEG")]
    pub schedule: CostSchedule,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bias: bool,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Costs used for scoring; defaults to the model's own schedule.
    #[arg(long, value_name = "POS:NEG")]
    pub schedule: Option<CostSchedule>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory for report.csv, timings.csv, summary.txt, report.txt.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Overrides the config's fold seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's alpha grid, e.g. `0.1,1,10`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub alpha_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn data(e: Error) -> Self {
        Failure {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    /// Learning-phase errors: numeric problems are code 3, the rest data.
    fn learning(e: Error) -> Self {
        let code = match e.root() {
            Error::NonFinite(_) | Error::ZeroVector => EXIT_NUMERIC,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

impl DataArgs {
    fn source(&self) -> std::result::Result<DataSource, Failure> {
        match (&self.data, &self.synth_spec) {
            (Some(path), None) => {
                let format = DataFormat::from_path(path);
                Ok(DataSource::File {
                    path: path.clone(),
                    format,
                    libsvm: LibsvmOptions::default(),
                    csv: CsvOptions {
                        label_column: self.label_column,
                        has_header: self.csv_header,
                        base_score_column: None,
                    },
                })
            }
            (None, Some(spec)) => Ok(DataSource::Synthetic(spec.clone())),
            _ => Err(Failure::usage("exactly one of --data or --synth-spec is required")),
        }
    }

    fn load(&self) -> std::result::Result<Dataset, Failure> {
        self.source()?.load().map_err(Failure::data)
    }

    fn load_with_dimension(&self, d: usize) -> std::result::Result<Dataset, Failure> {
        self.source()?.load_with_dimension(d).map_err(Failure::data)
    }
}

fn hyperparams(alpha: f64, bias: bool) -> std::result::Result<Hyperparams, Failure> {
    Hyperparams::new(alpha)
        .map(|p| p.with_bias(bias))
        .map_err(|e| Failure::usage(e.to_string()))
}

fn ordered(dataset: &Dataset, seed: Option<u64>) -> Vec<&Sample> {
    match seed {
        Some(s) => shuffled_stream(dataset, s),
        None => dataset.samples().iter().collect(),
    }
}

fn print_summary(out: &mut dyn Write, s: &StreamSummary) {
    let _ = writeln!(
        out,
        "steps {}: passive {}, interior {}, clamped {}, skipped {}; mistakes {}; cumulative loss {:.6}",
        s.steps, s.passive, s.interior, s.clamped, s.skipped, s.mistakes, s.cumulative_loss
    );
    for (k, v) in [
        ("steps", s.steps),
        ("passive", s.passive),
        ("interior", s.interior),
        ("clamped", s.clamped),
        ("skipped", s.skipped),
        ("mistakes", s.mistakes),
    ] {
        let _ = writeln!(out, "METRIC {k}={v}");
    }
    let _ = writeln!(out, "METRIC cumulative_loss={}", s.cumulative_loss);
}

fn save(model: &SavedModel, path: &Path) -> CmdResult {
    write_atomic(path, format_model(model).as_bytes()).map_err(Failure::data)
}

fn train_base(args: &TrainBaseArgs, out: &mut dyn Write) -> CmdResult {
    let params = hyperparams(args.alpha, args.bias)?;
    let data = args.data.load()?;
    let stream = ordered(&data, args.seed);
    let model = match args.trainer {
        Trainer::Online => {
            let mut learner =
                OcscaLearner::new(BaseScorer::Zero, data.dimension(), args.schedule, params)
                    .map_err(Failure::learning)?
                    .with_trace(false);
            let summary = learner.run_stream(stream).map_err(Failure::learning)?;
            print_summary(out, &summary);
            SavedModel::from_learner(&learner)
        }
        Trainer::Batch => {
            let cfg = BatchSvmConfig {
                epochs: args.epochs,
                shuffle_seed: args.seed.unwrap_or(0),
                fit_intercept: args.bias,
                ..Default::default()
            };
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            let fit = fit_batch_cost_svm(data.samples(), &args.schedule, &cfg).map_err(Failure::learning)?;
            if let Some(last) = fit.epoch_objectives.last() {
                let _ = writeln!(out, "epochs {}: final objective {last:.6}", fit.epoch_objectives.len());
                let _ = writeln!(out, "METRIC objective={last}");
            }
            let d = data.dimension();
            let classifier = AdaptedClassifier::new(
                BaseScorer::Linear(fit.scorer),
                LinearAdaptation::zeros(d, false).map_err(Failure::learning)?,
            )
            .map_err(Failure::learning)?;
            SavedModel {
                classifier,
                schedule: args.schedule,
                params: params.with_bias(false),
            }
        }
    };
    save(&model, &args.out)?;
    let _ = writeln!(out, "wrote {}", args.out.display());
    Ok(())
}

fn adapt(args: &AdaptArgs, out: &mut dyn Write) -> CmdResult {
    let params = hyperparams(args.alpha, args.bias)?;
    args.data.source()?;
    let saved = load_model(&args.model).map_err(Failure::data)?;
    let d = saved.classifier.dimension();
    let base = saved.classifier.flatten().map_err(Failure::data)?;
    let data = args.data.load_with_dimension(d)?;
    let mut learner = OcscaLearner::new(BaseScorer::Linear(base), d, args.schedule, params)
        .map_err(Failure::learning)?
        .with_trace(false);
    let summary = learner
        .run_stream(ordered(&data, args.seed))
        .map_err(Failure::learning)?;
    print_summary(out, &summary);
    save(&SavedModel::from_learner(&learner), &args.out)?;
    let _ = writeln!(out, "wrote {}", args.out.display());
    Ok(())
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> CmdResult {
    args.data.source()?;
    let saved = load_model(&args.model).map_err(Failure::data)?;
    let data = args.data.load_with_dimension(saved.classifier.dimension())?;
    let schedule = args.schedule.unwrap_or(saved.schedule);
    let m = evaluate(&saved.classifier, data.samples(), &schedule).map_err(Failure::learning)?;
    let c = &m.confusion;
    let _ = writeln!(
        out,
        "{} samples under schedule {}: accuracy {:.4}, average cost {:.4}",
        m.n_test, schedule, m.accuracy, m.avg_cost
    );
    let _ = writeln!(out, "confusion: tp {} fp {} tn {} fn {}", c.tp, c.fp, c.tn, c.fn_);
    let _ = writeln!(out, "METRIC accuracy={}", m.accuracy);
    let _ = writeln!(out, "METRIC avg_cost={}", m.avg_cost);
    let _ = writeln!(out, "METRIC n_test={}", m.n_test);
    for (k, v) in [("tp", c.tp), ("fp", c.fp), ("tn", c.tn), ("fn", c.fn_)] {
        let _ = writeln!(out, "METRIC {k}={v}");
    }
    Ok(())
}

/// Files written by `bench`, in order.
pub const BENCH_FILES: [&str; 4] = ["report.csv", "timings.csv", "summary.txt", "report.txt"];

fn bench(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let mut cfg = BenchConfig::load(&args.config).map_err(Failure::data)?;
    if let Some(seed) = args.seed {
        cfg.protocol.plan.seed = seed;
    }
    if let Some(grid) = &args.alpha_grid {
        cfg.protocol.alpha_grid = grid.clone();
    }
    if args.threads.is_some() {
        cfg.protocol.threads = args.threads;
    }
    cfg.protocol
        .validate()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let mut data = cfg.data.load().map_err(Failure::data)?;
    data.name = cfg.name.clone();
    let result = run_protocol(&data, &cfg.protocol).map_err(Failure::learning)?;
    let contents = [
        report_csv(&result),
        timing_csv(&result),
        summary_table(&result),
        text_report(&result),
    ];
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::data(Error::Io {
        path: args.out.clone(),
        source: e,
    }))?;
    for (name, text) in BENCH_FILES.iter().zip(&contents) {
        write_atomic(&args.out.join(name), text.as_bytes()).map_err(Failure::data)?;
    }
    let _ = write!(out, "{}", contents[2]);
    let _ = writeln!(out, "wrote {}", args.out.display());
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::TrainBase(a) => train_base(a, out),
        Command::Adapt(a) => adapt(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Bench(a) => bench(a, out),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
