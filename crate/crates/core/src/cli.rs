//! Command-line front end.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::boxcover::DEFAULT_REPETITIONS;
use crate::entropy::EntropyMode;
use crate::error::Error;
use crate::fit::LogBase;
use crate::pipeline::{self, BatchEntry, EmitFlags, InputSource, PipelineError, RunConfig, Stage, OUT_DIR_ENV};
use crate::synth::GenSpec;

#[derive(Debug, Parser)]
#[command(name = "dengdim", version, about = "Deng information dimensions of complex networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse one network.
    Analyze(AnalyzeArgs),
    /// Analyse every network listed in a manifest.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub input: Option<PathBuf>,
    /// Generator spec, e.g. `ba:n=500,m=3` or `ws:n=500,k=10,p=0.1`.
    #[arg(long)]
    pub gen: Option<GenSpec>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Greedy-coloring restarts per box diameter.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub reps: usize,
    #[arg(long, default_value = "exact")]
    pub mode: EntropyMode,
    #[arg(long, default_value = "e")]
    pub log_base: LogBase,
    /// Largest box diameter to evaluate.
    #[arg(long)]
    pub emax_override: Option<u32>,
    /// Output directory; defaults to $DENGDIM_OUT, then `dengdim-out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Analyse the largest connected component of a disconnected input.
    #[arg(long)]
    pub largest_component: bool,
    /// Also write each box covering as JSON.
    #[arg(long)]
    pub dump_coverings: bool,
    /// Also write the analysed graph as an edge list.
    #[arg(long)]
    pub export_graph: bool,
    #[arg(long)]
    pub no_plot: bool,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// One set of analyze flags per line; `#` starts a comment line.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where batch.csv goes, and the default for entries without `--out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "entry", no_binary_name = true)]
struct ManifestLine {
    #[command(flatten)]
    args: AnalyzeArgs,
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(pipeline::DEFAULT_OUT_DIR))
}

impl AnalyzeArgs {
    pub fn into_config(self, default_out: &Path) -> RunConfig {
        let input = match (self.input, self.gen) {
            (Some(path), _) => InputSource::EdgeList(path),
            (None, Some(spec)) => InputSource::Generated(spec),
            (None, None) => unreachable!("clap requires --input or --gen"),
        };
        RunConfig {
            input,
            name: self.name,
            seed: self.seed,
            repetitions: self.reps,
            mode: self.mode,
            log_base: self.log_base,
            max_epsilon: self.emax_override,
            largest_component: self.largest_component,
            out_dir: self.out.unwrap_or_else(|| default_out.to_path_buf()),
            emit: EmitFlags {
                plot_svg: !self.no_plot,
                coverings: self.dump_coverings,
                graph: self.export_graph,
                ..EmitFlags::default()
            },
        }
    }
}

/// Splits a manifest line on whitespace, honouring single and double quotes.
fn split_words(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut quote = None;
    let mut in_word = false;
    for c in line.chars() {
        match (quote, c) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), c) => current.push(c),
            (None, '"' | '\'') => {
                quote = Some(c);
                in_word = true;
            }
            (None, c) if c.is_whitespace() => {
                if in_word {
                    words.push(std::mem::take(&mut current));
                    in_word = false;
                }
            }
            (None, c) => {
                current.push(c);
                in_word = true;
            }
        }
    }
    if quote.is_some() {
        return Err("unterminated quote".into());
    }
    if in_word {
        words.push(current);
    }
    Ok(words)
}

/// Parses a manifest into batch entries. Relative input paths resolve
/// against the manifest's directory.
pub fn parse_manifest(text: &str, base: &Path, default_out: &Path) -> Vec<BatchEntry> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| {
            let t = line.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, line)| {
            let label = format!("line {}", i + 1);
            let config = split_words(line)
                .and_then(|words| ManifestLine::try_parse_from(words).map_err(|e| e.to_string()))
                .map(|parsed| {
                    let mut config = parsed.args.into_config(default_out);
                    pipeline::resolve_relative(&mut config, base);
                    config
                })
                .map_err(|e| format!("{label}: {}", e.lines().next().unwrap_or_default()));
            let label = match &config {
                Ok(c) => c.name.clone().unwrap_or_else(|| input_label(&c.input)),
                Err(_) => label,
            };
            BatchEntry { label, config }
        })
        .collect()
}

fn input_label(input: &InputSource) -> String {
    match input {
        InputSource::EdgeList(p) => p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
        InputSource::Generated(spec) => spec.name(),
    }
}

pub fn execute(cli: Cli) -> std::result::Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Analyze(args) => {
            let config = args.into_config(&default_out_dir());
            let outcome = pipeline::run(&config)?;
            if outcome.dropped_edges > 0 {
                eprintln!("warning: dropped {} self-loops or duplicate edges", outcome.dropped_edges);
            }
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", crate::report::TABLE_HEADER);
            let _ = writeln!(stdout, "{}", outcome.table_row);
            for path in &outcome.artifacts {
                eprintln!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch(args) => {
            let config_err = |source: Error| PipelineError { stage: Stage::Config, source };
            let text = fs::read_to_string(&args.manifest).map_err(|e| config_err(e.into()))?;
            let base = args.manifest.parent().unwrap_or(Path::new("."));
            let out = args.out.unwrap_or_else(default_out_dir);
            let entries = parse_manifest(&text, base, &out);
            let outcome = pipeline::batch(&entries).map_err(config_err)?;
            fs::create_dir_all(&out)
                .and_then(|_| fs::write(out.join("batch.csv"), &outcome.csv))
                .map_err(|e| PipelineError {
                    stage: Stage::Emit,
                    source: e.into(),
                })?;
            print!("{}", outcome.csv);
            let failures = outcome.failures();
            for (entry, result) in entries.iter().zip(&outcome.results) {
                if let Err(err) = result {
                    eprintln!("warning: {} failed at {}: {}", entry.label, err.stage, err.source);
                }
            }
            if failures == entries.len() {
                eprintln!("error: every batch entry failed");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
