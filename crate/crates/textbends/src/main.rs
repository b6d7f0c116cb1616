//! Command-line entry point: generate, ingest, export, run, sweep, report,
//! verify. Exit codes: 0 success, 1 usage error, 2 data/integrity error,
//! 3 nondeterminism detected.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use textbends::bench::{run_benchmark, sweep_scale, ProtocolConfig, RunReport};
use textbends::engine::{verify_specs, Executor, ORACLE_MAX_DOCS};
use textbends::error::Error;
use textbends::gencorpus::{
    self, corpus_checksum, CorpusManifest, GeneratorConfig, TokenizerMode,
};
use textbends::model::Corpus;
use textbends::report::{emit_report, ReportFormat};
use textbends::weighting::{Scheme, WeightParams};
use textbends::workload::{build_workload, ParamFile, QuerySpec};

#[derive(Parser)]
#[command(name = "textbends", version, about = "Top-k text analytics benchmark kit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic synthetic corpus (JSONL + manifest)
    Generate(GenerateArgs),
    /// Load an external JSONL corpus and write its canonical form
    Ingest(IngestArgs),
    /// Export a corpus as snowflake-schema CSV files
    Export(ExportArgs),
    /// Run the benchmark protocol over a corpus
    Run(RunArgs),
    /// Generate corpora over a scale-factor list and benchmark each
    Sweep(SweepArgs),
    /// Re-emit a stored report as json, csv, or plotdata
    Report(ReportArgs),
    /// Cross-check columnar, mapreduce, and oracle executors per spec
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    sf: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output JSONL path; the manifest is written next to it
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    docs_per_sf: u64,
    #[arg(long, default_value_t = 1000)]
    vocab: usize,
    /// Comma-separated terms injected so search queries are never empty
    #[arg(long, value_delimiter = ',')]
    guaranteed_terms: Option<Vec<String>>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "pretokenized")]
    tokenizer: String,
    /// Canonical JSONL output path; the manifest is written next to it
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    tf_floor: f64,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Parameter file (JSON); built-in reference values when omitted
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values = ["tfidf", "bm25"])]
    schemes: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values = ["columnar", "mapreduce"])]
    engines: Vec<String>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    warm_runs: u32,
    #[arg(long, default_value_t = 1)]
    cold_runs: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    sf_list: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values = ["tfidf", "bm25"])]
    schemes: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values = ["columnar", "mapreduce"])]
    engines: Vec<String>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    warm_runs: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// One or more report JSON files
    #[arg(long, value_delimiter = ',')]
    input: Vec<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, default_value_t = ORACLE_MAX_DOCS)]
    max_docs: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::Config(_) => 1,
        Error::Nondeterminism(_) => 3,
        _ => 2,
    }
}

fn manifest_path(corpus_path: &Path) -> PathBuf {
    corpus_path.with_extension("manifest.json")
}

fn load_corpus(path: &Path) -> textbends::Result<Corpus> {
    gencorpus::ingest_jsonl(path, TokenizerMode::Pretokenized, 0.5)
}

fn load_params(path: &Option<PathBuf>) -> textbends::Result<ParamFile> {
    match path {
        Some(p) => ParamFile::from_json(&fs::read_to_string(p)?),
        None => Ok(ParamFile::reference()),
    }
}

fn parse_schemes(raw: &[String]) -> textbends::Result<Vec<Scheme>> {
    raw.iter().map(|s| Scheme::from_str(s)).collect()
}

fn parse_engines(raw: &[String]) -> textbends::Result<Vec<Executor>> {
    raw.iter().map(|s| Executor::from_str(s)).collect()
}

fn build_specs(
    params: &Option<PathBuf>,
    schemes: &[String],
    k: usize,
) -> textbends::Result<Vec<QuerySpec>> {
    build_workload(
        &load_params(params)?,
        &parse_schemes(schemes)?,
        k,
        WeightParams::default(),
    )
}

fn write_reports(reports: &[RunReport], out: &Path) -> textbends::Result<()> {
    let file = fs::File::create(out)?;
    emit_report(reports, ReportFormat::Json, file)
}

fn cmd_generate(args: GenerateArgs) -> textbends::Result<()> {
    let mut config = GeneratorConfig {
        sf: args.sf,
        seed: args.seed,
        docs_per_unit_sf: args.docs_per_sf,
        vocab_size: args.vocab,
        ..GeneratorConfig::default()
    };
    if let Some(terms) = args.guaranteed_terms {
        config.guaranteed_terms = terms;
    }
    let (corpus, manifest) = gencorpus::generate(&config)?;
    gencorpus::write_jsonl(&corpus, &args.out)?;
    gencorpus::write_manifest(&manifest, &manifest_path(&args.out))?;
    println!(
        "generated {} documents (sf={}, seed={}) checksum={}",
        manifest.document_count, manifest.sf, manifest.seed, manifest.checksum
    );
    Ok(())
}

fn cmd_ingest(args: IngestArgs) -> textbends::Result<()> {
    let mode = TokenizerMode::from_str(&args.tokenizer)?;
    let corpus = gencorpus::ingest_jsonl(&args.input, mode, args.tf_floor)?;
    gencorpus::write_jsonl(&corpus, &args.out)?;
    let manifest = CorpusManifest {
        sf: 0.0,
        seed: 0,
        document_count: corpus.doc_count() as u64,
        vocabulary_size: corpus.vocab_size() as u64,
        checksum: corpus_checksum(&corpus)?,
    };
    gencorpus::write_manifest(&manifest, &manifest_path(&args.out))?;
    println!(
        "ingested {} documents, vocabulary {}",
        manifest.document_count, manifest.vocabulary_size
    );
    Ok(())
}

fn cmd_export(args: ExportArgs) -> textbends::Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    gencorpus::export_snowflake(&corpus, &args.out_dir)?;
    println!("exported snowflake schema to {}", args.out_dir.display());
    Ok(())
}

fn load_manifest_or_recompute(corpus_path: &Path, corpus: &Corpus) -> textbends::Result<CorpusManifest> {
    let path = manifest_path(corpus_path);
    if path.exists() {
        gencorpus::read_manifest(&path)
    } else {
        Ok(CorpusManifest {
            sf: 0.0,
            seed: 0,
            document_count: corpus.doc_count() as u64,
            vocabulary_size: corpus.vocab_size() as u64,
            checksum: corpus_checksum(corpus)?,
        })
    }
}

fn cmd_run(args: RunArgs) -> textbends::Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let manifest = load_manifest_or_recompute(&args.corpus, &corpus)?;
    let specs = build_specs(&args.params, &args.schemes, args.k)?;
    let protocol = ProtocolConfig {
        warm_runs: args.warm_runs,
        cold_runs: args.cold_runs,
        engines: parse_engines(&args.engines)?,
    };
    let report = run_benchmark(&corpus, &manifest, &specs, &protocol)?;
    write_reports(std::slice::from_ref(&report), &args.out)?;
    println!(
        "ran {} specs x {} engines, report written to {}",
        specs.len(),
        protocol.engines.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> textbends::Result<()> {
    let specs = build_specs(&args.params, &args.schemes, args.k)?;
    let config = GeneratorConfig {
        seed: args.seed,
        ..GeneratorConfig::default()
    };
    let protocol = ProtocolConfig {
        warm_runs: args.warm_runs,
        cold_runs: 1,
        engines: parse_engines(&args.engines)?,
    };
    let reports = sweep_scale(&config, &args.sf_list, &specs, &protocol)?;
    write_reports(&reports, &args.out)?;
    println!(
        "swept {} scale factors, reports written to {}",
        reports.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> textbends::Result<()> {
    let format = ReportFormat::from_str(&args.format)?;
    let mut reports: Vec<RunReport> = Vec::new();
    for path in &args.input {
        let text = fs::read_to_string(path)?;
        // accept both a single report and a sweep's list
        match serde_json::from_str::<Vec<RunReport>>(&text) {
            Ok(mut list) => reports.append(&mut list),
            Err(_) => reports.push(serde_json::from_str(&text)?),
        }
    }
    let file = fs::File::create(&args.out)?;
    emit_report(&reports, format, file)?;
    println!("wrote {} to {}", args.format, args.out.display());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> textbends::Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    if corpus.doc_count() > args.max_docs {
        return Err(Error::Usage(format!(
            "corpus has {} documents, verify guard is {}",
            corpus.doc_count(),
            args.max_docs
        )));
    }
    let specs = build_specs(&args.params, &["tfidf".into(), "bm25".into()], args.k)?;
    let outcomes = verify_specs(&corpus, &specs, 1e-9)?;
    let mut failed = 0;
    for (label, ok) in &outcomes {
        println!("{} {}", if *ok { "PASS" } else { "FAIL" }, label);
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Error::Nondeterminism(format!(
            "{failed} of {} specs diverged across executors",
            outcomes.len()
        )));
    }
    println!("all {} specs PASS", outcomes.len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TEXTBENDS_LOG", "error"))
        .init();
    // clap exits with 2 on usage errors by default; this kit reserves 2 for
    // data errors, so map usage problems to 1 (help/version still exit 0)
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Ingest(args) => cmd_ingest(args),
        Command::Export(args) => cmd_export(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
