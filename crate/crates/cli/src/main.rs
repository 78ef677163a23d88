//! `ontoforge` command-line front end.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use config::FileConfig;
use ontoforge::emit::{self, EmitOptions, FileMap, VizFormat};
use ontoforge::rdf::{parse_ntriples, parse_turtle, Graph, Iri};
use ontoforge::recover::{diff_schema, recover_structure_with, RecoveryOptions};
use ontoforge::schema::{load_schema, resolve_schema, CheckedSchema, CompileError, Vocabulary};
use ontoforge::validate::validate_graph;

#[derive(Debug, Parser)]
#[command(name = "ontoforge", version, about = "Compile ontology definitions into schema artifacts and check RDF data against them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ontology definition (Turtle, or N-Triples for `.nt`).
    #[arg(long, global = true, value_name = "PATH")]
    definition: Option<PathBuf>,
    /// Instance data file; repeatable.
    #[arg(long, global = true, value_name = "PATH")]
    data: Vec<PathBuf>,
    /// Directory receiving generated artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// IRI of the property-definition annotation.
    #[arg(long, global = true, value_name = "IRI")]
    vocab_propdefs: Option<String>,
    /// IRI of the enumerated value-set root class.
    #[arg(long, global = true, value_name = "IRI")]
    vocab_enumroot: Option<String>,
    #[arg(long, global = true, value_enum)]
    report: Option<ReportFormat>,
    /// Nesting depth of JSON-LD frames [default: 1].
    #[arg(long, global = true, value_name = "N")]
    frame_depth: Option<usize>,
    /// cytoscape-json or graphml [default: cytoscape-json].
    #[arg(long, global = true, value_name = "FORMAT")]
    viz_format: Option<String>,
    /// TOML configuration file; flags override its keys.
    #[arg(long, global = true, env = "ONTOFORGE_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Write every artifact: ShEx, OWL, docs, frames, visualization, API descriptor.
    Compile,
    /// Check data against the definition and print a violation report.
    Validate,
    /// Print the structure observed in the data as JSON.
    Recover,
    /// Compare the observed structure with the definition.
    Diff,
    /// Write the documentation site only.
    Docs,
    /// Write the JSON-LD frames only.
    Frame,
    /// Write the class diagram only.
    Viz,
    /// Write the API descriptor only.
    Apigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Flags merged over the configuration file.
struct RunConfig {
    command: Command,
    definition: Option<PathBuf>,
    data: Vec<PathBuf>,
    out: Option<PathBuf>,
    vocabulary: Vocabulary,
    report: ReportFormat,
    emit: EmitOptions,
}

enum Failure {
    Diagnostics(Vec<CompileError>),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<Vec<CompileError>> for Failure {
    fn from(e: Vec<CompileError>) -> Self {
        Failure::Diagnostics(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::resolve(cli).map_err(Failure::from).and_then(|c| run(&c));
    match outcome {
        Ok(code) => code,
        Err(Failure::Diagnostics(errors)) => {
            for e in errors {
                eprintln!("{e}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl RunConfig {
    fn resolve(cli: Cli) -> anyhow::Result<Self> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let mut vocabulary = Vocabulary::default();
        let iri = |s: String, flag: &str| Iri::new(s).with_context(|| format!("--{flag} must be an absolute IRI"));
        if let Some(v) = cli.vocab_propdefs.or(file.vocab_propdefs) {
            vocabulary.property_definitions = iri(v, "vocab-propdefs")?;
        }
        if let Some(v) = cli.vocab_enumroot.or(file.vocab_enumroot) {
            vocabulary.enumerated_value_root = iri(v, "vocab-enumroot")?;
        }
        let report = match (cli.report, file.report) {
            (Some(r), _) => r,
            (None, Some(r)) => ReportFormat::from_str(&r, false).map_err(|e| anyhow!("config key report: {e}"))?,
            (None, None) => ReportFormat::default(),
        };
        let viz_format = match cli.viz_format.or(file.viz_format) {
            Some(v) => v.parse::<VizFormat>().map_err(|e| anyhow!("{}", e.message))?,
            None => VizFormat::default(),
        };
        let emit = EmitOptions {
            frame_depth: cli.frame_depth.or(file.frame_depth).unwrap_or(1),
            viz_format,
        };
        let config = RunConfig {
            command: cli.command,
            definition: cli.definition.or(file.definition),
            data: if cli.data.is_empty() { file.data } else { cli.data },
            out: cli.out.or(file.out),
            vocabulary,
            report,
            emit,
        };
        if config.command != Command::Recover && config.definition.is_none() {
            bail!("--definition is required for this command");
        }
        if matches!(config.command, Command::Validate | Command::Recover | Command::Diff) && config.data.is_empty() {
            bail!("at least one --data file is required for this command");
        }
        Ok(config)
    }

    fn out_dir(&self) -> anyhow::Result<&Path> {
        self.out.as_deref().ok_or_else(|| anyhow!("--out is required for this command"))
    }
}

fn run(config: &RunConfig) -> Result<ExitCode, Failure> {
    let schema = match &config.definition {
        Some(path) => Some(load_definition(path, &config.vocabulary)?),
        None => None,
    };
    let schema = || schema.as_ref().expect("definition presence is checked during config resolution");
    let files = match config.command {
        Command::Compile => emit::emit_all(schema(), &config.emit)?,
        Command::Docs => nested("docs", emit::emit_docs(schema())?)?,
        Command::Frame => nested("frames", emit::emit_frames(schema(), config.emit.frame_depth)?)?,
        Command::Viz => {
            let mut files = FileMap::new();
            files.insert(config.emit.viz_format.file_name(), emit::emit_viz(schema(), config.emit.viz_format)).map_err(|e| vec![e])?;
            files
        }
        Command::Apigen => {
            let mut files = FileMap::new();
            files.insert("api.json", emit::emit_api_descriptor(schema())?).map_err(|e| vec![e])?;
            files
        }
        Command::Validate => {
            let data = load_data(&config.data)?;
            let report = validate_graph(schema(), &data);
            print(&match config.report {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json(),
            })?;
            return Ok(if report.conformant { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Recover => {
            let data = load_data(&config.data)?;
            let index_predicate = config.vocabulary.index_predicate.clone();
            print(&recover_structure_with(&data, &RecoveryOptions { index_predicate }).to_json())?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Diff => {
            let data = load_data(&config.data)?;
            let options = RecoveryOptions {
                index_predicate: schema().schema().vocab.index_predicate.clone(),
            };
            let diff = diff_schema(schema(), &recover_structure_with(&data, &options));
            print(&match config.report {
                ReportFormat::Text => diff.to_markdown(),
                ReportFormat::Json => diff.to_json(),
            })?;
            return Ok(if diff.is_blocking() { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    };
    write_files(config.out_dir()?, &files)?;
    Ok(ExitCode::SUCCESS)
}

fn nested(dir: &str, files: FileMap) -> Result<FileMap, Vec<CompileError>> {
    let mut out = FileMap::new();
    out.nest(dir, files).map_err(|e| vec![e])?;
    Ok(out)
}

fn parse_rdf(path: &Path) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "nt") { parse_ntriples(&text) } else { parse_turtle(&text) };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

fn load_definition(path: &Path, vocabulary: &Vocabulary) -> Result<CheckedSchema, Failure> {
    let graph = parse_rdf(path)?;
    Ok(resolve_schema(load_schema(&graph, vocabulary)?)?)
}

fn load_data(paths: &[PathBuf]) -> anyhow::Result<Graph> {
    let mut graph = Graph::new();
    for path in paths {
        graph.merge(&parse_rdf(path)?);
    }
    Ok(graph)
}

fn print(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).context("writing to standard output")
}

/// Each file goes to a temporary sibling first and is renamed into place.
fn write_files(out: &Path, files: &FileMap) -> anyhow::Result<()> {
    for (relative, content) in files.iter() {
        let target = out.join(relative);
        let dir = target.parent().unwrap_or(out);
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("staging {}", target.display()))?;
        tmp.write_all(content.as_bytes()).with_context(|| format!("writing {}", target.display()))?;
        tmp.persist(&target).with_context(|| format!("renaming into {}", target.display()))?;
    }
    Ok(())
}
