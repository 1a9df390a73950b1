//! The `ontomap` command line.
//!
//! Exit codes: 0 success, 1 I/O, parse or usage error, 2 data invariant
//! violation, 3 translator or protocol failure.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ontomap_core::align::{
    match_ontologies, score_mapping, similarity_score, ClassRef, DecodeConfig, DecodeMode, EditSimilarityTranslator,
    MatchConfig, MatchInputs, Scoring, TaskId, Translator,
};
use ontomap_core::corpus::{
    build_finetune_corpus, build_pretrain_corpus, AugmentationConfig, MaskingSchedule, PriorVersion,
};
use ontomap_core::metrics::RankingCase;
use ontomap_core::ontology::{record_descriptions, DescriptionOptions};
use ontomap_core::smartid::{anchor_class, assign_smartids, SmartIdConfig, DEFAULT_PATH_CAP};
use ontomap_core::{OntologyError, OntologyGraph, PathTrie, SmartIdTable};

use crate::cache::EmbedCache;
use crate::classfile::{inspect_ontology, load_ontology, render_classes};
use crate::config::{Decode, FileConfig, Mode, Split, TranslatorSpec};
use crate::corpusio::{render_corpus, Manifest, ScheduleEntry, SplitEntry};
use crate::error::{Error, Result};
use crate::idtable::{parse_table, render_table};
use crate::mapfile::{
    mapping_set, parse_mappings, parse_ranking, render_mappings, render_predictions, top_predictions,
};
use crate::provenance::{read_file, sha256_hex, write_file, Params, Provenance, TOOL_VERSION};
use crate::report::evaluate;
use crate::wire::{serve, serve_tcp, WireTranslator};

#[derive(Debug, Parser)]
#[command(
    name = "ontomap",
    version,
    about = "Ontology matching with path identifiers and constrained decoding"
)]
pub struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice; recorded in all outputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a class file, printing a validation report.
    Ingest(IngestArgs),
    /// Assign SmartIDs and SynonymIDs to every class.
    Smartids(SmartidsArgs),
    /// Build pre-training and fine-tuning corpora.
    Corpus(CorpusArgs),
    /// Match a source ontology against a target ontology.
    Match(MatchArgs),
    /// Score a mapping file against reference mappings.
    Eval(EvalArgs),
    /// Serve the edit-similarity translator over the wire protocol.
    ServeEdit(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub classes: PathBuf,
    #[arg(long)]
    pub ontology_id: String,
    /// Write the normalized class file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SmartidsArgs {
    #[arg(long)]
    pub classes: PathBuf,
    #[arg(long)]
    pub ontology_id: String,
    #[arg(long)]
    pub path_cap: Option<usize>,
    /// Output table file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Ontology as ID=PATH; repeatable.
    #[arg(long = "ontology", value_name = "ID=PATH", required = true)]
    pub ontologies: Vec<String>,
    /// Precomputed SmartID table as ID=PATH; repeatable.
    #[arg(long = "table", value_name = "ID=PATH")]
    pub tables: Vec<String>,
    /// Other ontology whose overlapping descriptions augment fine-tuning.
    #[arg(long = "cross-subset", value_name = "ID=PATH")]
    pub cross_subset: Vec<String>,
    /// Older release of an ontology as ID=PATH.
    #[arg(long = "prior", value_name = "ID=PATH")]
    pub priors: Vec<String>,
    #[arg(long, value_enum)]
    pub split: Option<Split>,
    #[arg(long)]
    pub mask_start: Option<f64>,
    #[arg(long)]
    pub mask_end: Option<f64>,
    #[arg(long)]
    pub mask_steps: Option<u64>,
    #[arg(long)]
    pub path_cap: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[arg(long)]
    pub task: String,
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub source_id: String,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub target_id: String,
    /// SmartID table of the target; assigned on the fly when absent.
    #[arg(long)]
    pub target_table: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub decode: Option<Decode>,
    #[arg(long)]
    pub beam_width: Option<usize>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// `edit` or `wire:<host:port | stdio:command>`.
    #[arg(long)]
    pub translator: Option<String>,
    #[arg(long)]
    pub path_cap: Option<usize>,
    /// Mapping file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the top prediction of every source, before thresholding.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub mappings: PathBuf,
    #[arg(long)]
    pub reference: PathBuf,
    /// Unthresholded predictions for accuracy; taken from the mapping file
    /// when absent.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub ranking: Option<PathBuf>,
    /// Source classes, needed to score a ranking file without scores.
    #[arg(long, requires = "source_id")]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub source_id: Option<String>,
    #[arg(long, requires = "target_id")]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub target_id: Option<String>,
    #[arg(long)]
    pub task: Option<String>,
    #[arg(long)]
    pub translator: Option<String>,
    /// Comma-separated cut-offs for Hits@K.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Let an exact description match score ranking candidates 1.0.
    #[arg(long)]
    pub exact_override: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub target_id: String,
    #[arg(long)]
    pub path_cap: Option<usize>,
    /// Listen on a TCP address instead of standard input and output.
    #[arg(long)]
    pub listen: Option<String>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn file_hash(path: &Path) -> Result<String> {
    Ok(sha256_hex(read_file(path)?.as_bytes()))
}

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let seed = pick(cli.seed, file.seed, 0);
    match cli.command {
        Command::Ingest(args) => ingest(&args, seed),
        Command::Smartids(args) => smartids(&args, &file, seed),
        Command::Corpus(args) => corpus(&args, &file, seed),
        Command::Match(args) => run_match(&args, &file, seed),
        Command::Eval(args) => eval(&args, &file, seed),
        Command::ServeEdit(args) => serve_edit(&args, &file),
    }
}

fn ingest(args: &IngestArgs, seed: u64) -> Result<()> {
    let (graph, report) = inspect_ontology(&args.classes, &args.ontology_id)?;
    let mut params = Params::new();
    params
        .set("ontology_id", &args.ontology_id)
        .set("classes_sha256", file_hash(&args.classes)?);
    let provenance = Provenance::new("ingest", &params, seed);
    let mut text = provenance.header();
    text.push_str(&format!(
        "ontology = {}\nclasses = {}\nroots = {}\nmulti_parent = {}\nmax_depth = {}\nerrors = {}\n",
        args.ontology_id,
        report.classes,
        report.roots,
        report.multi_parent,
        report.max_depth,
        report.errors.len()
    ));
    for err in &report.errors {
        text.push_str(&format!("error = {err}\n"));
    }
    emit(None, &text)?;
    if let Some(first) = report.errors.into_iter().next() {
        return Err(first.into());
    }
    if let Some(out) = &args.out {
        write_file(out, &format!("{}{}", provenance.header(), render_classes(&graph)))?;
    }
    Ok(())
}

fn smartid_config(path_cap: usize) -> SmartIdConfig {
    SmartIdConfig::with_path_cap(path_cap)
}

fn smartids(args: &SmartidsArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let path_cap = pick(args.path_cap, file.path_cap, DEFAULT_PATH_CAP);
    let graph = load_ontology(&args.classes, &args.ontology_id)?;
    let table = assign_smartids(&graph, &smartid_config(path_cap))?;
    let mut params = Params::new();
    params
        .set("ontology_id", &args.ontology_id)
        .set("path_cap", path_cap)
        .set("classes_sha256", file_hash(&args.classes)?);
    let text = format!(
        "{}{}",
        Provenance::new("smartids", &params, seed).header(),
        render_table(&table)
    );
    emit(args.out.as_deref(), &text)
}

fn split_spec(spec: &str) -> Result<(&str, &Path)> {
    match spec.split_once('=') {
        Some((id, path)) if !id.is_empty() && !path.is_empty() => Ok((id, Path::new(path))),
        _ => Err(Error::Config(format!("expected ID=PATH, got `{spec}`"))),
    }
}

fn corpus(args: &CorpusArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let defaults = MaskingSchedule::default();
    let schedule = MaskingSchedule::new(
        pick(args.mask_start, file.mask_start, defaults.start_ratio),
        pick(args.mask_end, file.mask_end, defaults.end_ratio),
        pick(args.mask_steps, file.mask_steps, defaults.total_steps),
    )?;
    let split = pick(args.split, file.split, Split::All);
    let path_cap = pick(args.path_cap, file.path_cap, DEFAULT_PATH_CAP);
    let mut params = Params::new();
    params
        .set("mask_start", schedule.start_ratio)
        .set("mask_end", schedule.end_ratio)
        .set("mask_steps", schedule.total_steps)
        .set("path_cap", path_cap)
        .set("split", format!("{split:?}").to_lowercase());

    let mut graphs = Vec::new();
    for spec in &args.ontologies {
        let (id, path) = split_spec(spec)?;
        params.set(&format!("ontology.{id}.sha256"), file_hash(path)?);
        graphs.push(load_ontology(path, id)?);
    }
    let mut given_tables = BTreeMap::new();
    for spec in &args.tables {
        let (id, path) = split_spec(spec)?;
        params.set(&format!("table.{id}.sha256"), file_hash(path)?);
        given_tables.insert(id.to_string(), parse_table(&read_file(path)?, id, path)?);
    }
    let mut tables: Vec<SmartIdTable> = Vec::new();
    for graph in &graphs {
        let table = match given_tables.remove(graph.ontology_id()) {
            Some(t) => t,
            None => assign_smartids(graph, &smartid_config(path_cap))?,
        };
        tables.push(table);
    }
    if let Some(id) = given_tables.keys().next() {
        return Err(Error::Config(format!("table given for unknown ontology `{id}`")));
    }
    let mut cross = Vec::new();
    for spec in &args.cross_subset {
        let (id, path) = split_spec(spec)?;
        params.set(&format!("cross_subset.{id}.sha256"), file_hash(path)?);
        cross.push(load_ontology(path, id)?);
    }
    let mut priors = Vec::new();
    for (i, spec) in args.priors.iter().enumerate() {
        let (of, path) = split_spec(spec)?;
        params.set(&format!("prior.{i}.{of}.sha256"), file_hash(path)?);
        priors.push((of.to_string(), load_ontology(path, &format!("{of}@prior{i}"))?));
    }

    let pairs: Vec<(&OntologyGraph, &SmartIdTable)> = graphs.iter().zip(&tables).collect();
    let provenance = Provenance::new("corpus", &params, seed);
    let mut manifest = Manifest {
        tool_version: TOOL_VERSION.to_string(),
        config_sha256: provenance.config_hash.clone(),
        seed,
        schedule: ScheduleEntry::from(&schedule),
        splits: BTreeMap::new(),
        warnings: Vec::new(),
    };
    if matches!(split, Split::Pretrain | Split::All) {
        let records = build_pretrain_corpus(&pairs, &schedule, seed)?;
        let instances: Vec<_> = records.iter().map(|r| &r.instance).collect();
        let text = format!("{}{}", provenance.header(), render_corpus(instances.iter().copied()));
        write_file(&args.out_dir.join("pretrain.jsonl"), &text)?;
        manifest.splits.insert(
            "pretrain".into(),
            SplitEntry::new("pretrain.jsonl", &text, instances.iter().copied()),
        );
    }
    if matches!(split, Split::Finetune | Split::All) {
        let augmentation = AugmentationConfig {
            cross_subset: cross.iter().collect(),
            prior_versions: priors.iter().map(|(of, graph)| PriorVersion { of, graph }).collect(),
            cross_subset_enabled: !cross.is_empty(),
            prior_versions_enabled: !priors.is_empty(),
        };
        let corpus = build_finetune_corpus(&pairs, &augmentation)?;
        let text = format!("{}{}", provenance.header(), render_corpus(&corpus.instances));
        write_file(&args.out_dir.join("finetune.jsonl"), &text)?;
        manifest.splits.insert(
            "finetune".into(),
            SplitEntry::new("finetune.jsonl", &text, &corpus.instances),
        );
        manifest.warnings = corpus.warnings;
    }
    for warning in &manifest.warnings {
        eprintln!("warning: {warning}");
    }
    write_file(&args.out_dir.join("manifest.json"), &manifest.render())
}

/// A translator chosen on the command line.
enum Chosen<'a> {
    Edit(EditSimilarityTranslator<'a>),
    Wire(Box<WireTranslator>),
}

impl Chosen<'_> {
    fn get(&self) -> &dyn Translator {
        match self {
            Self::Edit(t) => t,
            Self::Wire(t) => t.as_ref(),
        }
    }
}

fn choose<'a>(spec: &TranslatorSpec, target: &OntologyGraph, trie: &'a PathTrie) -> Result<Chosen<'a>> {
    Ok(match spec {
        TranslatorSpec::Edit => Chosen::Edit(EditSimilarityTranslator::new(target, trie)),
        TranslatorSpec::Wire(address) => Chosen::Wire(Box::new(WireTranslator::connect(address)?)),
    })
}

fn task_id(name: &str, source_id: &str, target_id: &str, file: &FileConfig) -> TaskId {
    match file.tasks.get(name) {
        Some(entry) => TaskId::new(name, &entry.source, &entry.target),
        None => TaskId::new(name, source_id, target_id),
    }
}

fn run_match(args: &MatchArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let threshold = pick(args.threshold, file.threshold, MatchConfig::default().threshold);
    if !threshold.is_finite() {
        return Err(Error::Config(format!("threshold must be finite, got {threshold}")));
    }
    let mode = pick(args.mode, file.mode, Mode::Tm1);
    let decode = pick(args.decode, file.decode, Decode::Greedy);
    let defaults = DecodeConfig::default();
    let decode_config = DecodeConfig {
        mode: match decode {
            Decode::Greedy => DecodeMode::Greedy,
            Decode::Beam => DecodeMode::Beam,
        },
        beam_width: pick(args.beam_width, file.beam_width, defaults.beam_width),
        temperature: pick(args.temperature, file.temperature, defaults.temperature),
        max_depth: pick(args.max_depth, file.max_depth, defaults.max_depth),
    };
    let singularize = file.singularize.unwrap_or(true);
    let config = MatchConfig {
        decode: decode_config,
        threshold,
        scoring: match mode {
            Mode::Tm1 => Scoring::Tm1,
            Mode::Tm2 => Scoring::Tm2,
        },
        descriptions: DescriptionOptions::singular(singularize),
        try_next_candidate: file.try_next_candidate.unwrap_or(false),
    };
    let spec = TranslatorSpec::parse(&pick(args.translator.clone(), file.translator.clone(), "edit".into()))?;
    let path_cap = pick(args.path_cap, file.path_cap, DEFAULT_PATH_CAP);

    let mut params = Params::new();
    params
        .set("task", &args.task)
        .set("source_id", &args.source_id)
        .set("target_id", &args.target_id)
        .set("threshold", threshold)
        .set("mode", format!("{mode:?}").to_lowercase())
        .set("decode", format!("{decode:?}").to_lowercase())
        .set("beam_width", decode_config.beam_width)
        .set("temperature", decode_config.temperature)
        .set("max_depth", decode_config.max_depth)
        .set("singularize", singularize)
        .set("try_next_candidate", config.try_next_candidate)
        .set("translator", &spec)
        .set("source_sha256", file_hash(&args.source)?)
        .set("target_sha256", file_hash(&args.target)?);

    let source = load_ontology(&args.source, &args.source_id)?;
    let target = load_ontology(&args.target, &args.target_id)?;
    let table = match &args.target_table {
        Some(path) => {
            params.set("target_table_sha256", file_hash(path)?);
            let table = parse_table(&read_file(path)?, &args.target_id, path)?;
            check_table_covers(&table, &target)?;
            table
        }
        None => {
            params.set("path_cap", path_cap);
            assign_smartids(&target, &smartid_config(path_cap))?
        }
    };
    let trie = PathTrie::build(&table);
    let task = task_id(&args.task, &args.source_id, &args.target_id, file);
    let chosen = choose(&spec, &target, &trie)?;
    let translator = EmbedCache::new(chosen.get());
    let inputs = MatchInputs {
        source: &source,
        target: &target,
        trie: &trie,
        task: &task,
    };
    let outcome = match_ontologies(&translator, inputs, &config)?;

    let provenance = Provenance::new("match", &params, seed);
    emit(
        args.out.as_deref(),
        &format!("{}{}", provenance.header(), render_mappings(&outcome.mappings)),
    )?;
    if let Some(path) = &args.predictions {
        write_file(
            path,
            &format!("{}{}", provenance.header(), render_predictions(&outcome.predictions)),
        )?;
    }
    eprintln!(
        "matched {} of {} source classes; {} mappings above {threshold}; {} scoring calls",
        outcome.predictions.len(),
        source.len(),
        outcome.mappings.len(),
        outcome.score_calls
    );
    if let Some((class_id, err)) = outcome.failures.first() {
        for (class_id, err) in &outcome.failures {
            eprintln!("translator failed on `{class_id}`: [{}] {}", err.code, err.message);
        }
        let mut err = err.clone();
        err.message = format!(
            "{} (first of {} failed source classes, `{class_id}`)",
            err.message,
            outcome.failures.len()
        );
        return Err(err.into());
    }
    Ok(())
}

/// A table must address exactly the classes of the graph it came with,
/// except a collapsed single root, which has no id of its own.
fn check_table_covers(table: &SmartIdTable, graph: &OntologyGraph) -> Result<()> {
    let anchor = anchor_class(graph);
    for record in graph.classes() {
        if table.smart_id(&record.class_id).is_none() && anchor != Some(record.class_id.as_str()) {
            return Err(OntologyError::UnknownClass(record.class_id.clone()).into());
        }
    }
    if let Some((class_id, _, _)) = table.entries().find(|(c, _, _)| !graph.contains(c)) {
        return Err(OntologyError::UnknownClass(class_id.to_string()).into());
    }
    Ok(())
}

fn eval(args: &EvalArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let beta = pick(args.beta, file.beta, 1.0);
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    let ks = if args.k.is_empty() {
        file.k.clone().unwrap_or_else(|| vec![1, 5])
    } else {
        args.k.clone()
    };
    let exact_override = pick(args.exact_override, file.exact_override, true);
    let mut params = Params::new();
    params
        .set("beta", beta)
        .set("k", ks.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .set("mappings_sha256", file_hash(&args.mappings)?)
        .set("reference_sha256", file_hash(&args.reference)?);

    let output_rows = parse_mappings(&read_file(&args.mappings)?, &args.mappings)?;
    let output = mapping_set(&output_rows, &args.mappings)?;
    let reference_rows = parse_mappings(&read_file(&args.reference)?, &args.reference)?;
    let reference = mapping_set(&reference_rows, &args.reference)?;
    let predictions = match &args.predictions {
        Some(path) => {
            params.set("predictions_sha256", file_hash(path)?);
            let rows = parse_mappings(&read_file(path)?, path)?;
            mapping_set(&rows, path)?;
            top_predictions(&rows)
        }
        None => top_predictions(&output_rows),
    };

    let cases = match &args.ranking {
        Some(path) => {
            params.set("ranking_sha256", file_hash(path)?);
            let ranking = parse_ranking(&read_file(path)?, path)?;
            if ranking.scored {
                Some(ranking.cases)
            } else {
                Some(score_ranking(args, file, ranking.cases, exact_override, &mut params)?)
            }
        }
        None => None,
    };
    let report = evaluate(&output, &reference, &predictions, cases.as_deref(), &ks, beta)?;
    let provenance = Provenance::new("eval", &params, seed);
    emit(args.out.as_deref(), &report.render(&provenance, &params))
}

fn score_ranking(
    args: &EvalArgs,
    file: &FileConfig,
    cases: Vec<RankingCase>,
    exact_override: bool,
    params: &mut Params,
) -> Result<Vec<RankingCase>> {
    let (Some(source_path), Some(source_id), Some(target_path), Some(target_id)) =
        (&args.source, &args.source_id, &args.target, &args.target_id)
    else {
        return Err(Error::Config(
            "the ranking file has no Scores column; pass --source/--source-id and --target/--target-id to score it"
                .into(),
        ));
    };
    let spec = TranslatorSpec::parse(&pick(args.translator.clone(), file.translator.clone(), "edit".into()))?;
    let singularize = file.singularize.unwrap_or(true);
    params
        .set("translator", &spec)
        .set("exact_override", exact_override)
        .set("singularize", singularize)
        .set("source_sha256", file_hash(source_path)?)
        .set("target_sha256", file_hash(target_path)?);
    let source = load_ontology(source_path, source_id)?;
    let target = load_ontology(target_path, target_id)?;
    let path_cap = pick(None, file.path_cap, DEFAULT_PATH_CAP);
    let trie = PathTrie::build(&assign_smartids(&target, &smartid_config(path_cap))?);
    let task = task_id(args.task.as_deref().unwrap_or("eval"), source_id, target_id, file);
    let chosen = choose(&spec, &target, &trie)?;
    let translator = EmbedCache::new(chosen.get());
    let options = DescriptionOptions::singular(singularize);

    let mut scored = Vec::with_capacity(cases.len());
    for case in cases {
        let source_record = source.try_class(&case.source_id)?;
        let source_terms = record_descriptions(source_record, options);
        let mut scores = Vec::with_capacity(case.negative_targets.len() + 1);
        for candidate in case.candidates() {
            let score = if exact_override {
                score_mapping(
                    &translator,
                    &task,
                    ClassRef::new(&source, &case.source_id),
                    ClassRef::new(&target, candidate),
                    options,
                )?
                .score
            } else {
                let target_terms = record_descriptions(target.try_class(candidate)?, options);
                similarity_score(&translator, &task, &source_terms, &target_terms)?
            };
            scores.push(score);
        }
        scored.push(case.with_scores(scores));
    }
    Ok(scored)
}

fn serve_edit(args: &ServeArgs, file: &FileConfig) -> Result<()> {
    let path_cap = pick(args.path_cap, file.path_cap, DEFAULT_PATH_CAP);
    let target = load_ontology(&args.target, &args.target_id)?;
    let trie = PathTrie::build(&assign_smartids(&target, &smartid_config(path_cap))?);
    let translator = EditSimilarityTranslator::new(&target, &trie);
    match &args.listen {
        Some(address) => {
            let listener = TcpListener::bind(address).map_err(|e| Error::io(address, e))?;
            let local = listener.local_addr().map_err(|e| Error::io(address, e))?;
            eprintln!("listening on {local}");
            serve_tcp(&translator, listener).map_err(|e| Error::io(address, e))
        }
        None => {
            let stdin = io::stdin().lock();
            let stdout = io::stdout().lock();
            serve(&translator, stdin, stdout).map_err(|e| Error::io("<stdio>", e))?;
            Ok(())
        }
    }
}
