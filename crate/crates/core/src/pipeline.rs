//! End-to-end runs: ingest or generate a network, build its entropy profile,
//! fit both models and write the artifacts.

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::boxcover::{BoxCoverer, DEFAULT_REPETITIONS};
use crate::entropy::EntropyMode;
use crate::error::{Error, Result};
use crate::fit::{self, LogBase, Model, ModelComparison};
use crate::graph::{load_edge_list, Network};
use crate::profile::{build_profile_with, EntropyProfile, ProfileOptions};
use crate::report;
use crate::synth::{self, GenSpec};

pub const DEFAULT_OUT_DIR: &str = "dengdim-out";
pub const OUT_DIR_ENV: &str = "DENGDIM_OUT";

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    EdgeList(PathBuf),
    Generated(GenSpec),
}

impl fmt::Display for InputSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSource::EdgeList(p) => write!(f, "{}", p.display()),
            InputSource::Generated(spec) => write!(f, "{spec}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitFlags {
    pub profile_csv: bool,
    pub fits_json: bool,
    pub plot_svg: bool,
    pub table_row: bool,
    /// Box-covering dumps, one JSON file per box diameter.
    pub coverings: bool,
    /// The analysed graph in edge-list format.
    pub graph: bool,
}

impl EmitFlags {
    /// Analyse without writing anything.
    pub fn none() -> Self {
        EmitFlags {
            profile_csv: false,
            fits_json: false,
            plot_svg: false,
            table_row: false,
            coverings: false,
            graph: false,
        }
    }
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags {
            profile_csv: true,
            fits_json: true,
            plot_svg: true,
            table_row: true,
            coverings: false,
            graph: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    /// Overrides the network name (file stem or generator name).
    pub name: Option<String>,
    pub seed: u64,
    pub repetitions: usize,
    pub mode: EntropyMode,
    pub log_base: LogBase,
    pub max_epsilon: Option<u32>,
    pub largest_component: bool,
    pub out_dir: PathBuf,
    pub emit: EmitFlags,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        RunConfig {
            input,
            name: None,
            seed: 0,
            repetitions: DEFAULT_REPETITIONS,
            mode: EntropyMode::Exact,
            log_base: LogBase::E,
            max_epsilon: None,
            largest_component: false,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            emit: EmitFlags::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Generate,
    Profile,
    Fit,
    Emit,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Generate => "generate",
            Stage::Profile => "profile",
            Stage::Fit => "fit",
            Stage::Emit => "emit",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A module error tagged with the pipeline stage that raised it.
#[derive(Debug, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
    pub dropped_edges: usize,
    pub profile: EntropyProfile,
    pub comparison: ModelComparison,
    pub log_base: LogBase,
    pub table_row: String,
    pub artifacts: Vec<PathBuf>,
}

/// Loads or generates the network named by `config`, without analysing it.
pub fn acquire_network(config: &RunConfig) -> std::result::Result<(Network, usize), PipelineError> {
    let (mut network, dropped, stage) = match &config.input {
        InputSource::EdgeList(path) => {
            let file = fs::File::open(path).map_err(Error::from).at(Stage::Ingest)?;
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "network".into());
            let loaded = load_edge_list(BufReader::new(file), &stem).at(Stage::Ingest)?;
            (loaded.network, loaded.report.dropped(), Stage::Ingest)
        }
        InputSource::Generated(spec) => {
            let spec = spec.with_default_seed(config.seed);
            (synth::generate(&spec).at(Stage::Generate)?, 0, Stage::Generate)
        }
    };
    if config.largest_component {
        network = network.largest_component();
    }
    if let Some(name) = &config.name {
        network.set_name(name.clone());
    }
    network.ensure_connected().at(stage)?;
    Ok((network, dropped))
}

/// Runs one analysis and writes the requested artifacts.
pub fn run(config: &RunConfig) -> std::result::Result<RunOutcome, PipelineError> {
    let (network, dropped_edges) = acquire_network(config)?;
    let coverer = BoxCoverer::new(&network).at(Stage::Profile)?;
    let options = ProfileOptions {
        seed: config.seed,
        repetitions: config.repetitions,
        mode: config.mode,
        max_epsilon: config.max_epsilon,
    };
    let profile = build_profile_with(&coverer, &options).at(Stage::Profile)?;
    let comparison = fit::fit_and_compare(&profile, config.log_base).at(Stage::Fit)?;
    let table_row = report::table_row(network.name(), network.node_count(), network.edge_count(), &comparison);

    let mut artifacts = Vec::new();
    let emit = config.emit;
    if emit.profile_csv || emit.fits_json || emit.plot_svg || emit.table_row || emit.coverings || emit.graph {
        fs::create_dir_all(&config.out_dir).map_err(Error::from).at(Stage::Emit)?;
    }
    let stem = file_stem(network.name());
    let mut write = |suffix: &str, contents: String| -> std::result::Result<(), PipelineError> {
        let path = config.out_dir.join(format!("{stem}.{suffix}"));
        fs::write(&path, contents).map_err(Error::from).at(Stage::Emit)?;
        artifacts.push(path);
        Ok(())
    };
    if emit.profile_csv {
        write("profile.csv", report::profile_csv(&profile))?;
    }
    if emit.fits_json {
        write("fits.json", report::fits_json(&profile, &comparison, config.log_base))?;
    }
    if emit.plot_svg {
        write("plot.svg", report::plot_svg(&profile, &comparison))?;
    }
    if emit.table_row {
        write("row.csv", format!("{}\n{}\n", report::TABLE_HEADER, table_row))?;
    }
    if emit.coverings {
        for point in &profile.points {
            let seed = crate::seed::derive(config.seed, point.epsilon as u64);
            let covering = coverer.cover(point.epsilon, seed, config.repetitions).at(Stage::Profile)?;
            let mut text = covering.to_json(&network).at(Stage::Emit)?;
            text.push('\n');
            write(&format!("covering-{}.json", point.epsilon), text)?;
        }
    }
    if emit.graph {
        let mut header = vec![format!("network: {}", network.name())];
        if let InputSource::Generated(spec) = &config.input {
            header.push(format!("genspec: {}", spec.with_default_seed(config.seed)));
        }
        write("edges.txt", network.to_edge_list(&header))?;
    }

    Ok(RunOutcome {
        name: network.name().to_string(),
        nodes: network.node_count(),
        edges: network.edge_count(),
        dropped_edges,
        profile,
        comparison,
        log_base: config.log_base,
        table_row,
        artifacts,
    })
}

fn file_stem(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect();
    if stem.is_empty() {
        "network".into()
    } else {
        stem
    }
}

/// One batch entry: a parsed configuration, or the reason it could not be
/// parsed, with a label for reporting.
#[derive(Debug, Clone)]
pub struct BatchEntry {
    pub label: String,
    pub config: std::result::Result<RunConfig, String>,
}

pub const BATCH_HEADER: &str = "name,nodes,edges,d_D,d_dD,nu,r2_adj_D,r2_adj_dD,aic_min,delta_aic_D,delta_aic_dD,selected,seed,repetitions,mode,log_base,status,error";

#[derive(Debug)]
pub struct BatchOutcome {
    pub csv: String,
    pub results: Vec<std::result::Result<RunOutcome, PipelineError>>,
}

impl BatchOutcome {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.is_err()).count()
    }
}

/// Runs every entry, concurrently, and tabulates the results in input
/// order. A failing entry becomes an error row; the rest still run.
pub fn batch(entries: &[BatchEntry]) -> Result<BatchOutcome> {
    if entries.is_empty() {
        return Err(Error::Config("batch has no entries".into()));
    }
    let results: Vec<_> = entries
        .par_iter()
        .map(|entry| match &entry.config {
            Ok(config) => run(config),
            Err(message) => Err(PipelineError {
                stage: Stage::Config,
                source: Error::Config(message.clone()),
            }),
        })
        .collect();
    let mut csv = String::from(BATCH_HEADER);
    csv.push('\n');
    for (entry, result) in entries.iter().zip(&results) {
        csv.push_str(&batch_row(entry, result));
        csv.push('\n');
    }
    Ok(BatchOutcome { csv, results })
}

fn batch_row(entry: &BatchEntry, result: &std::result::Result<RunOutcome, PipelineError>) -> String {
    match result {
        Ok(out) => {
            let c = &out.comparison;
            let deng = c.fit(Model::Deng);
            let dsum = c.fit(Model::Dsummable);
            let opt = |x: Option<f64>| x.map(report::num).unwrap_or_default();
            [
                report::csv_field(&out.name),
                out.nodes.to_string(),
                out.edges.to_string(),
                opt(deng.map(|f| f.d)),
                opt(dsum.map(|f| f.d)),
                opt(dsum.and_then(|f| f.nu)),
                opt(deng.and_then(|f| f.r2_adj)),
                opt(dsum.and_then(|f| f.r2_adj)),
                report::num(c.aic_min),
                opt(c.delta_for(Model::Deng)),
                opt(c.delta_for(Model::Dsummable)),
                c.selected.as_str().to_string(),
                out.profile.seed.to_string(),
                out.profile.repetitions.to_string(),
                out.profile.mode.to_string(),
                out.log_base.to_string(),
                "ok".to_string(),
                String::new(),
            ]
            .join(",")
        }
        Err(err) => {
            let (seed, reps, mode, base) = match &entry.config {
                Ok(c) => (
                    c.seed.to_string(),
                    c.repetitions.to_string(),
                    c.mode.to_string(),
                    c.log_base.to_string(),
                ),
                Err(_) => Default::default(),
            };
            let mut fields = vec![report::csv_field(&entry.label)];
            fields.extend(std::iter::repeat_n(String::new(), 11));
            fields.extend([seed, reps, mode, base, "error".into(), report::csv_field(&err.to_string())]);
            fields.join(",")
        }
    }
}

/// Resolves a manifest-relative edge-list path against the manifest's directory.
pub fn resolve_relative(config: &mut RunConfig, base: &Path) {
    if let InputSource::EdgeList(path) = &mut config.input {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generated(spec: &str) -> RunConfig {
        RunConfig::new(InputSource::Generated(spec.parse().unwrap()))
    }

    #[test]
    fn missing_file_fails_at_ingest() {
        let config = RunConfig::new(InputSource::EdgeList("/nonexistent/graph.txt".into()));
        let err = run(&config).unwrap_err();
        assert_eq!(err.stage, Stage::Ingest);
    }

    #[test]
    fn disconnected_input_needs_largest_component() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("two.txt");
        let mut text = String::new();
        for i in 0..11 {
            text.push_str(&format!("{i} {}\n", i + 1));
        }
        text.push_str("x y\n");
        fs::write(&path, text).unwrap();
        let mut config = RunConfig::new(InputSource::EdgeList(path));
        config.out_dir = dir.path().join("out");
        let err = run(&config).unwrap_err();
        assert_eq!(err.stage, Stage::Ingest);
        assert!(matches!(err.source, Error::Disconnected { .. }));
        config.largest_component = true;
        let out = run(&config).unwrap();
        assert_eq!(out.nodes, 12);
    }

    #[test]
    fn short_range_fails_at_profile() {
        let mut config = generated("ws:n=20,k=6,p=0.0");
        config.emit = EmitFlags::none();
        let err = run(&config).unwrap_err();
        assert_eq!(err.stage, Stage::Profile);
        assert!(matches!(err.source, Error::InsufficientRange { .. }));
    }

    #[test]
    fn file_stems_are_sanitized() {
        assert_eq!(file_stem("BA-500"), "BA-500");
        assert_eq!(file_stem("my graph/1"), "my_graph_1");
        assert_eq!(file_stem(""), "network");
    }

    #[test]
    fn empty_batch_is_an_error() {
        assert!(matches!(batch(&[]), Err(Error::Config(_))));
    }
}
