use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ngramfix_core::{
    correct_document, evaluate, inject_errors, load_index, read_ground_truth, save_index,
    write_ground_truth, CorrectionDecision, CorruptionSpec, IndexBuilder, NgramBackend,
    PipelineConfig, DEFAULT_TOP_K, MAX_CONTEXT, MAX_ORDER,
};
use ngramfix_service::{spawn, RemoteBackend, ServiceConfig, DEFAULT_POSTINGS_CAP};

/// Spelling correction for speech-recognizer transcripts using word n-gram
/// counts.
#[derive(Parser)]
#[command(name = "ngramfix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count n-grams of a line-per-sentence corpus and write an index directory.
    BuildIndex(BuildIndexArgs),
    /// Correct a transcript.
    Correct(CorrectArgs),
    /// Corrupt a clean text with synthetic recognition errors.
    Inject(InjectArgs),
    /// Score a corrected text against its reference.
    Evaluate(EvaluateArgs),
    /// Serve an index over HTTP until interrupted.
    Serve(ServeArgs),
}

#[derive(Args)]
struct BuildIndexArgs {
    /// Corpus files, one sentence per line. Repeatable.
    #[arg(long, required = true, num_args = 1..)]
    corpus: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = MAX_ORDER)]
    max_order: usize,
    /// Identifier recorded in the manifest. Defaults to the corpus file names.
    #[arg(long)]
    corpus_id: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BackendArgs {
    /// Index directory written by build-index.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Base URL of a running `ngramfix serve`.
    #[arg(long)]
    backend: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct CorrectArgs {
    #[command(flatten)]
    backend: BackendArgs,
    /// Transcript to correct; `-` reads stdin.
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
    #[arg(long, default_value_t = MAX_CONTEXT)]
    context: usize,
    #[arg(long, value_enum, default_value = "off")]
    realword: Switch,
    #[arg(long, default_value_t = 10.0)]
    margin: f64,
    /// Decide at the full context order only.
    #[arg(long)]
    no_backoff: bool,
    /// Write one TSV row per detected error.
    #[arg(long)]
    decisions: Option<PathBuf>,
}

#[derive(Args)]
struct InjectArgs {
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    ground_truth: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    nonword_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    realword_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bigrams an injected word must share with the original.
    #[arg(long, default_value_t = 2)]
    min_shared: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    corrupted: PathBuf,
    #[arg(long)]
    corrected: PathBuf,
    #[arg(long)]
    ground_truth: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: IpAddr,
    #[arg(long, default_value_t = DEFAULT_POSTINGS_CAP)]
    postings_cap: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::BuildIndex(args) => build_index(args),
        Command::Correct(args) => correct(args),
        Command::Inject(args) => inject(args),
        Command::Evaluate(args) => evaluate_cmd(args),
        Command::Serve(args) => serve(args),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn open_backend(args: &BackendArgs) -> Result<Box<dyn NgramBackend>> {
    match (&args.index, &args.backend) {
        (Some(dir), _) => Ok(Box::new(load_index(dir)?)),
        (None, Some(url)) => Ok(Box::new(
            RemoteBackend::connect(url).with_context(|| format!("connecting to {url}"))?,
        )),
        (None, None) => Err(anyhow!("one of --index or --backend is required")),
    }
}

fn build_index(args: BuildIndexArgs) -> Result<()> {
    let id = args.corpus_id.unwrap_or_else(|| {
        args.corpus
            .iter()
            .map(|p| p.file_name().unwrap_or(p.as_os_str()).to_string_lossy())
            .collect::<Vec<_>>()
            .join(",")
    });
    let mut builder = IndexBuilder::new(args.max_order)?.corpus_id(id);
    for path in &args.corpus {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        builder
            .add_reader(BufReader::new(file))
            .with_context(|| format!("reading {}", path.display()))?;
    }
    let index = builder.finish();
    save_index(&index, &args.out)?;
    let m = index.manifest();
    eprintln!(
        "indexed {} tokens, {} distinct words, orders 1..={} into {}",
        m.token_count,
        m.distinct_unigrams,
        m.max_order,
        args.out.display()
    );
    Ok(())
}

fn decisions_tsv(decisions: &[CorrectionDecision]) -> String {
    let mut out = String::from("position\ttoken\tkind\tchosen\tbackoff_order\tcandidates\n");
    for d in decisions {
        let candidates: Vec<&str> = d.candidates.iter().map(|c| c.word.as_str()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            d.error.position,
            d.error.token,
            d.error.kind.as_str(),
            d.chosen.as_ref().map_or("-", |t| t.as_str()),
            d.backoff_order,
            candidates.join(",")
        ));
    }
    out
}

fn correct(args: CorrectArgs) -> Result<()> {
    let config = PipelineConfig {
        top_k: args.top_k,
        context_window: args.context,
        realword_enabled: matches!(args.realword, Switch::On),
        realword_margin: args.margin,
        backoff_enabled: !args.no_backoff,
    };
    config.validate().map_err(|e| anyhow!(e))?;
    let backend = open_backend(&args.backend)?;
    let text = read_text(&args.input)?;
    let out = correct_document(&text, backend.as_ref(), &config)?;

    match &args.out {
        Some(path) => write_text(path, &out.corrected_text)?,
        None => io::stdout()
            .write_all(out.corrected_text.as_bytes())
            .context("writing stdout")?,
    }
    if let Some(path) = &args.decisions {
        write_text(path, &decisions_tsv(&out.decisions))?;
    }
    let changed = out.decisions.iter().filter(|d| d.changes_text()).count();
    eprintln!(
        "{} suspicious words, {} replaced",
        out.decisions.len(),
        changed
    );
    Ok(())
}

fn inject(args: InjectArgs) -> Result<()> {
    let spec = CorruptionSpec {
        nonword_rate: args.nonword_rate,
        realword_rate: args.realword_rate,
        seed: args.seed,
        min_shared_bigrams: args.min_shared,
    };
    spec.validate().map_err(|e| anyhow!(e))?;
    let backend = open_backend(&args.backend)?;
    let text = read_text(&args.input)?;
    let injection = inject_errors(&text, backend.as_ref(), &spec)?;
    write_text(&args.out, &injection.corrupted_text)?;
    write_text(&args.ground_truth, &write_ground_truth(&injection.records))?;
    eprintln!("injected {} errors", injection.records.len());
    Ok(())
}

fn evaluate_cmd(args: EvaluateArgs) -> Result<()> {
    let reference = read_text(&args.reference)?;
    let corrupted = read_text(&args.corrupted)?;
    let corrected = read_text(&args.corrected)?;
    let truth = read_text(&args.ground_truth)?;
    let records = read_ground_truth(truth.as_bytes())
        .map_err(|e| anyhow!(e))
        .with_context(|| format!("parsing {}", args.ground_truth.display()))?;
    let report = evaluate(&reference, &corrupted, &corrected, &records)?;
    io::stdout()
        .write_all(report.to_tsv().as_bytes())
        .context("writing stdout")?;
    eprintln!("{}", report.summary());
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let addr = SocketAddr::new(args.bind, args.port);
    let config = ServiceConfig {
        postings_cap: args.postings_cap,
    };
    let running = spawn(Arc::new(index), addr, config, true)?;
    eprintln!("serving {} on {}", args.index.display(), running.base_url());
    running.wait()?;
    Ok(())
}
