//! Command-line interface.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use clarisql::agent::{write_transcripts, AgentConfig};
use clarisql::db::{execute, load_examples, load_tables, Example, TableStore};
use clarisql::detector::DetectorConfig;
use clarisql::harness::{budget_search, evaluate, render_table, write_rows_csv, EvalConfig, EvalReport};
use clarisql::nlg::Nlg;
use clarisql::parser::{BaseParser, HeuristicParser, PerturbationConfig, ScriptedParser};
use clarisql::sql::Mode;
use clarisql::synth::{self, SynthConfig};

use crate::api::{router, AppState};
use crate::config;

#[derive(Debug, Parser)]
#[command(name = "clarisql", version, about = "Interactive text-to-SQL with clarification questions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a tables file and an examples file.
    Ingest(IngestArgs),
    /// Run simulated-user sessions over a dataset.
    Simulate(SimulateArgs),
    /// Search the detector threshold for a target number of questions.
    Budget(BudgetArgs),
    /// Serve the HTTP session API.
    Serve(ServeArgs),
    /// Re-render the tables of earlier simulate runs.
    Report(ReportArgs),
    /// Regenerate the synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Wikisql,
    Spider,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Wikisql => Mode::Wikisql,
            ModeArg::Spider => Mode::Spider,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Prob,
    Dropout,
    Unlimit,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long, default_value = "data/tables.jsonl")]
    pub tables: PathBuf,
    /// Defaults to data/<mode>.jsonl.
    #[arg(long)]
    pub examples: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "wikisql")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct AgentArgs {
    #[arg(long, value_enum, default_value = "prob")]
    pub detector: DetectorArg,
    #[arg(long, default_value_t = 0.95)]
    pub p_star: f64,
    #[arg(long, default_value_t = 0.05)]
    pub s_star: f64,
    /// Perturbed passes of the dropout detector.
    #[arg(long, default_value_t = 10)]
    pub passes: usize,
    #[arg(long, default_value_t = 0.1)]
    pub drop_rate: f64,
    /// Alternatives offered after a "no".
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replay scripted distributions from this JSON file instead of the
    /// lexical parser.
    #[arg(long)]
    pub script: Option<PathBuf>,
}

/// Failed turns in a row before the simulated user leaves; `none` never leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Patience(pub Option<usize>);

impl std::str::FromStr for Patience {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(Patience(None));
        }
        s.parse()
            .map(|n| Patience(Some(n)))
            .map_err(|_| format!("expected a count or `none`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub agent: AgentArgs,
    /// Failed turns in a row before the simulated user leaves, or `none`.
    #[arg(long, default_value = "3")]
    pub patience: Patience,
    /// Directory for the report, per-example CSV and transcripts.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub agent: AgentArgs,
    #[arg(long, default_value = "3")]
    pub patience: Patience,
    /// Target average number of questions per example.
    #[arg(long)]
    pub target: f64,
    #[arg(long, default_value_t = clarisql::harness::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
    #[arg(long, default_value = "data/tables.jsonl")]
    pub tables: PathBuf,
    #[arg(long, value_enum, default_value = "wikisql")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub agent: AgentArgs,
    /// Finished sessions are appended here as JSON lines.
    #[arg(long, default_value = "transcripts.jsonl")]
    pub transcripts: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Directory written by `simulate --out`.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value = "data")]
    pub out: PathBuf,
    #[arg(long, default_value_t = SynthConfig::default().seed)]
    pub seed: u64,
}

impl AgentArgs {
    pub fn detector(&self) -> DetectorConfig {
        match self.detector {
            DetectorArg::Prob => DetectorConfig::Prob { p_star: self.p_star },
            DetectorArg::Dropout => DetectorConfig::Dropout {
                s_star: self.s_star,
                perturbation: PerturbationConfig {
                    passes: self.passes,
                    drop_rate: self.drop_rate,
                    seed: self.seed,
                },
            },
            DetectorArg::Unlimit => DetectorConfig::Unlimit,
            DetectorArg::Off => DetectorConfig::Off,
        }
    }

    pub fn config(&self, mode: Mode) -> Result<AgentConfig> {
        let detector = self.detector();
        detector.validate()?;
        Ok(AgentConfig {
            k: self.k,
            detector,
            mode,
            seed: self.seed,
        })
    }

    pub fn parser(&self) -> Result<Arc<dyn BaseParser>> {
        Ok(match &self.script {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Arc::new(ScriptedParser::from_json(&text)?)
            }
            None => Arc::new(HeuristicParser::default()),
        })
    }
}

pub fn load_store(path: &Path) -> Result<TableStore> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    load_tables(BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

impl DataArgs {
    fn examples_path(&self) -> PathBuf {
        self.examples.clone().unwrap_or_else(|| {
            let name = match self.mode {
                ModeArg::Wikisql => "wikisql.jsonl",
                ModeArg::Spider => "spider.jsonl",
            };
            self.tables.with_file_name(name)
        })
    }

    pub fn load(&self) -> Result<(TableStore, Vec<Example>)> {
        let store = load_store(&self.tables)?;
        let path = self.examples_path();
        let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        let examples =
            load_examples(BufReader::new(file), Some(&store)).with_context(|| format!("loading {}", path.display()))?;
        Ok((store, examples))
    }
}

/// File-name stem for a run, e.g. `prob-p-0.95` or `unlimit-k-3`.
fn slug(r: &EvalReport) -> String {
    let mut out = String::new();
    for c in r.label().to_lowercase().chars() {
        if c.is_ascii_alphanumeric() || c == '.' {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out
}

fn ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<()> {
    let (store, examples) = args.data.load()?;
    let failing: Vec<String> = examples
        .iter()
        .filter_map(|ex| execute(&ex.gold, &store).err().map(|e| format!("{}: {e}", ex.id)))
        .collect();
    writeln!(
        out,
        "{} tables, {} examples, {} gold queries execute",
        store.len(),
        examples.len(),
        examples.len() - failing.len()
    )?;
    for f in &failing {
        writeln!(out, "  {f}")?;
    }
    Ok(())
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let (store, examples) = args.data.load()?;
    let config = EvalConfig {
        agent: args.agent.config(args.data.mode.into())?,
        patience: args.patience.0,
    };
    let run = evaluate(&store, &examples, args.agent.parser()?, Arc::new(Nlg::builtin()), config)?;
    write!(out, "{}", render_table(std::slice::from_ref(&run.report)))?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let stem = slug(&run.report);
        let create = |ext: &str| -> Result<BufWriter<File>> {
            let path = dir.join(format!("{stem}.{ext}"));
            Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
        };
        serde_json::to_writer_pretty(create("report.json")?, &run.report)?;
        write_rows_csv(create("rows.csv")?, &run.report)?;
        write_transcripts(create("transcripts.jsonl")?, &run.transcripts)?;
        writeln!(out, "wrote {}/{stem}.*", dir.display())?;
    }
    Ok(())
}

fn budget(args: &BudgetArgs, out: &mut dyn Write) -> Result<()> {
    let (store, examples) = args.data.load()?;
    let config = EvalConfig {
        agent: args.agent.config(args.data.mode.into())?,
        patience: args.patience.0,
    };
    let r = budget_search(
        &store,
        &examples,
        args.agent.parser()?,
        Arc::new(Nlg::builtin()),
        config,
        args.target,
        args.tolerance,
    )?;
    writeln!(
        out,
        "target {} ± {}: threshold {} gives Avg #q {:.4} ({}; {} evaluations)",
        r.target,
        r.tolerance,
        r.threshold,
        r.achieved,
        if r.feasible { "feasible" } else { "infeasible, closest value" },
        r.evaluations
    )?;
    write!(out, "{}", render_table(std::slice::from_ref(&r.report)))?;
    Ok(())
}

fn report(args: &ReportArgs, out: &mut dyn Write) -> Result<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".report.json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no *.report.json files in {}", args.input.display());
    }
    let mut reports = Vec::new();
    for p in &paths {
        let file = File::open(p)?;
        let r: EvalReport =
            serde_json::from_reader(BufReader::new(file)).with_context(|| format!("reading {}", p.display()))?;
        reports.push(r);
    }
    write!(out, "{}", render_table(&reports))?;
    Ok(())
}

fn synth_data(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let data = synth::generate(&SynthConfig {
        seed: args.seed,
        ..SynthConfig::default()
    });
    fs::create_dir_all(&args.out)?;
    let create = |name: &str| -> Result<BufWriter<File>> { Ok(BufWriter::new(File::create(args.out.join(name))?)) };
    synth::write_jsonl(create("tables.jsonl")?, &data.tables)?;
    synth::write_jsonl(create("wikisql.jsonl")?, &data.wikisql)?;
    synth::write_jsonl(create("spider.jsonl")?, &data.spider)?;
    writeln!(
        out,
        "{} tables, {} wikisql and {} spider examples in {}",
        data.tables.len(),
        data.wikisql.len(),
        data.spider.len(),
        args.out.display()
    )?;
    Ok(())
}

async fn serve(args: &ServeArgs) -> Result<()> {
    let store = load_store(&args.tables)?;
    let defaults = args.agent.config(args.mode.into())?;
    let state = AppState::new(store, args.agent.parser()?, Arc::new(Nlg::builtin()), defaults)
        .with_log(&args.transcripts)
        .with_context(|| format!("opening {}", args.transcripts.display()))?;
    let listener = tokio::net::TcpListener::bind(&args.addr)
        .await
        .with_context(|| format!("binding {}", args.addr))?;
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

/// Runs one parsed command, writing its output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Ingest(a) => ingest(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Budget(a) => budget(a, out),
        Command::Report(a) => report(a, out),
        Command::Synth(a) => synth_data(a, out),
        Command::Serve(a) => tokio::runtime::Runtime::new()?.block_on(serve(a)),
    }
}

/// Parses `args` with config-file entries from `MISP_CONFIG` filled in.
pub fn parse_args(args: Vec<OsString>) -> Result<Cli> {
    let args = match std::env::var_os(config::CONFIG_ENV) {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("reading config {}", Path::new(&path).display()))?;
            let entries = config::parse(&text)?;
            config::merge(args, &entries, &Cli::command())?
        }
        None => args,
    };
    Ok(Cli::try_parse_from(args)?)
}
