//! `fd`: command-line entry point for the whole pipeline.

use std::fs::{self, File};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use fdistinct::classify::{self, Hyperparameters, LabeledExample, ModelKind, TrainedModel};
use fdistinct::crowd::{
    self, AggregatedLabel, BalanceStrategy, JudgmentColumns, LabelColumns, Source,
};
use fdistinct::features::{write_matrix, BlockSet, FeatureConfig, FeatureSpace};
use fdistinct::harness::{self, CvConfig, EvalReport, Example};
use fdistinct::ingest::{open_input, EntityRecord, EntityStore, IngestConfig, ParseMode, TripleReader};
use fdistinct::sampler::{build_sample, SampleConfig, SampleKg, VectorStore};
use fdistinct::seneca::{self, AlignmentGraph, SenecaConfig, VerdictSet};
use fdistinct::{Diagnostic, Task};

const CACHE_ENV: &str = "FD_CACHE_DIR";

#[derive(Parser)]
#[command(name = "fd", version, about = "Class/instance and physical-object classification of KG entities")]
struct Cli {
    /// Seed for every random choice of the run; recorded in reports.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stream N-Triples dumps (plain or gzip) into an entity store.
    Ingest(IngestArgs),
    /// Alignment-path verdicts (`iri TAB C|I TAB PO|NPO`) for the store.
    Seneca(SenecaArgs),
    /// Aggregate trust-weighted judgments into labels with agreement.
    Agreement(AgreementArgs),
    /// Per-class counts of labels at agreement thresholds.
    Bucket(BucketArgs),
    /// Compare two labelings of the same entities.
    Compare(CompareArgs),
    /// Drop majority-class entities until both classes are equal in size.
    Balance(BalanceArgs),
    /// Nearest-neighbour entity sampling over dense vectors.
    Sample(SampleArgs),
    /// Fit a feature space on labelled entities and write the sparse matrix.
    Featurize(FeaturizeArgs),
    /// Train one classifier on all labelled entities.
    Train(TrainArgs),
    /// Classify entities with a trained model.
    Predict(PredictArgs),
    /// Stratified k-fold cross-validation of one classifier and block set.
    Cv(CvArgs),
    /// Cross-validate every block combination of a universe.
    Sweep(CvArgs),
    /// Render saved reports as a table (or re-emit them as JSON).
    Report(ReportArgs),
}

#[derive(Args)]
struct IngestArgs {
    files: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    abstract_pred: Option<String>,
    #[arg(long)]
    category_pred: Option<String>,
    /// Keep only abstracts with this language tag.
    #[arg(long, default_value = "en", conflicts_with = "all_languages")]
    lang: String,
    #[arg(long)]
    all_languages: bool,
    /// Abort on the first malformed line.
    #[arg(long)]
    strict: bool,
    /// Literal-valued triples do not count towards out-degree.
    #[arg(long)]
    no_literal_degrees: bool,
    /// Only triples whose subject or object has one of these prefixes count
    /// towards degrees (repeatable).
    #[arg(long = "scope")]
    scope: Vec<String>,
    /// Ignore the store cache even when the cache directory is set.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct SenecaArgs {
    /// Alignment TSV files (repeatable).
    #[arg(long = "graph", required = true)]
    graph: Vec<PathBuf>,
    #[arg(long)]
    store: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Follow ALIGNED edges only in their stated direction.
    #[arg(long)]
    directed_alignments: bool,
    /// Let WordNet instance markers pass through the class rule.
    #[arg(long)]
    no_instance_veto: bool,
    /// Write verdicts with their witness paths as JSON lines.
    #[arg(long)]
    witnesses: Option<PathBuf>,
    /// Score the verdicts against these reference labels.
    #[arg(long, requires = "task")]
    gold: Option<PathBuf>,
    #[arg(long)]
    task: Option<Task>,
    #[command(flatten)]
    gold_format: LabelInput,
    /// Where the misclassification audit of `--gold` goes.
    #[arg(long, requires = "gold")]
    audit: Option<PathBuf>,
    /// Where the evaluation report of `--gold` goes.
    #[arg(long, requires = "gold")]
    report: Option<PathBuf>,
}

/// How a labels file is read.
#[derive(Args, Clone)]
struct LabelInput {
    /// JSON column mapping for labels or judgments files with other layouts.
    #[arg(long)]
    columns: Option<PathBuf>,
    /// The file is `entity TAB label` expert annotation without agreement.
    #[arg(long)]
    expert: bool,
}

#[derive(Args)]
struct AgreementArgs {
    judgments: PathBuf,
    #[arg(long)]
    task: Option<Task>,
    #[arg(long)]
    columns: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BucketArgs {
    labels: PathBuf,
    #[arg(long)]
    task: Task,
    /// Agreement thresholds (repeatable).
    #[arg(long = "threshold", default_values_t = [0.5, 0.6, 0.8])]
    thresholds: Vec<f64>,
    #[command(flatten)]
    input: LabelInput,
    /// Write the labels kept at the (single) threshold.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    task: Task,
    /// Apply this agreement threshold to the second labeling first.
    #[arg(long)]
    threshold: Option<f64>,
    /// The first file is expert annotation (`entity TAB label`).
    #[arg(long)]
    a_expert: bool,
    #[arg(long)]
    b_expert: bool,
    /// List every disagreement.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct BalanceArgs {
    labels: PathBuf,
    #[arg(long)]
    task: Task,
    /// random-drop or low-agreement-drop; the default follows the label source.
    #[arg(long)]
    strategy: Option<BalanceStrategy>,
    /// Keep only labels at this agreement or above before balancing.
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    input: LabelInput,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Dense vectors, text or binary.
    #[arg(long)]
    vectors: PathBuf,
    /// One seed IRI per line.
    #[arg(long)]
    seeds: PathBuf,
    /// N-Triples files with redirects, disambiguations, abstracts, labels.
    #[arg(long = "kg", required = true)]
    kg: Vec<PathBuf>,
    /// One place name per line.
    #[arg(long)]
    places: Option<PathBuf>,
    #[arg(long)]
    places_category: Option<String>,
    #[arg(short, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 0.6, conflicts_with = "no_min_cos")]
    min_cos: f64,
    #[arg(long)]
    no_min_cos: bool,
    #[arg(long, default_value = "en")]
    lang: String,
    /// Entity list, one per line.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Full sample summary as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Inputs shared by featurize, train, cv and sweep.
#[derive(Args, Clone)]
struct DataArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    task: Task,
    /// Aggregated labels TSV.
    #[arg(long, required_unless_present = "judgments", conflicts_with = "judgments")]
    labels: Option<PathBuf>,
    /// Raw judgments TSV, aggregated on the fly.
    #[arg(long)]
    judgments: Option<PathBuf>,
    #[command(flatten)]
    input: LabelInput,
    /// Alignment verdicts from `fd seneca`; required for the D block.
    #[arg(long)]
    verdicts: Option<PathBuf>,
    /// Agreement bucket to keep; crowd data defaults to 0.8.
    #[arg(long)]
    threshold: Option<f64>,
    /// Balancing strategy; defaults to low-agreement-drop for crowd data and
    /// random-drop for expert data.
    #[arg(long, conflicts_with = "no_balance")]
    balance: Option<BalanceStrategy>,
    #[arg(long)]
    no_balance: bool,
    /// Feature-config JSON (max_tokens, case_sensitive_match, binarize_e).
    #[arg(long)]
    feature_config: Option<PathBuf>,
    /// Hyperparameter JSON.
    #[arg(long)]
    hyperparameters: Option<PathBuf>,
}

#[derive(Args)]
struct FeaturizeArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, alias = "features", default_value = "AUED")]
    blocks: BlockSet,
    #[arg(short, long)]
    output: PathBuf,
    /// Save the fitted feature space as JSON.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "svm")]
    kind: ModelKind,
    #[arg(long, alias = "features", default_value = "AUED")]
    blocks: BlockSet,
    /// Model JSON; the feature space goes next to it as `<output>.space.json`.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    task: Task,
    #[arg(long)]
    verdicts: Option<PathBuf>,
    /// One IRI per line; defaults to every target entity in the store.
    #[arg(long)]
    entities: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "svm")]
    kind: ModelKind,
    /// Block set for `cv`, block universe for `sweep`.
    #[arg(long, alias = "features", default_value = "AUED")]
    blocks: BlockSet,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Reports as JSON (an array for sweep).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// The plain-text table.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Report JSON files (single reports or arrays).
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = run(cli) {
        let broken_pipe = e
            .downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe);
        if broken_pipe {
            return;
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Ingest(a) => ingest(a),
        Cmd::Seneca(a) => seneca_cmd(a),
        Cmd::Agreement(a) => agreement(a),
        Cmd::Bucket(a) => bucket(a),
        Cmd::Compare(a) => compare(a),
        Cmd::Balance(a) => balance(a, seed),
        Cmd::Sample(a) => sample(a),
        Cmd::Featurize(a) => featurize(a, seed),
        Cmd::Train(a) => train(a, seed),
        Cmd::Predict(a) => predict(a),
        Cmd::Cv(a) => cv(a, seed, false),
        Cmd::Sweep(a) => cv(a, seed, true),
        Cmd::Report(a) => report(a),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let r = open_input(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() && !line.starts_with('#') {
            out.push(line.to_string());
        }
    }
    Ok(out)
}

fn warn_diagnostics(what: &str, diags: &[Diagnostic]) {
    if diags.is_empty() {
        return;
    }
    log::warn!("{what}: {} diagnostics", diags.len());
    for d in diags {
        log::info!("  {d}");
    }
}

fn file_name(p: &Path) -> String {
    p.display().to_string()
}

// ---- ingest ----

fn ingest_config(a: &IngestArgs) -> IngestConfig {
    let mut cfg = IngestConfig::default();
    if let Some(p) = &a.abstract_pred {
        cfg.abstract_predicate = p.clone();
    }
    if let Some(p) = &a.category_pred {
        cfg.category_predicate = p.clone();
    }
    cfg.language = (!a.all_languages).then(|| a.lang.clone());
    cfg.count_literal_objects = !a.no_literal_degrees;
    cfg.scope_prefixes = a.scope.clone();
    cfg
}

/// Cache key over the ingest config and each input's path, size and mtime.
fn cache_key(files: &[PathBuf], cfg: &IngestConfig, strict: bool) -> Result<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&serde_json::json!({
        "abstract": cfg.abstract_predicate,
        "category": cfg.category_predicate,
        "language": cfg.language,
        "literals": cfg.count_literal_objects,
        "scope": cfg.scope_prefixes,
        "strict": strict,
    }))?);
    for f in files {
        let meta = fs::metadata(f).with_context(|| format!("reading {}", f.display()))?;
        let mtime = meta
            .modified()
            .ok()
            .and_then(|t| t.duration_since(std::time::UNIX_EPOCH).ok())
            .map_or(0, |d| d.as_nanos());
        let abs = fs::canonicalize(f)?;
        h.update(format!("{}\0{}\0{}\n", abs.display(), meta.len(), mtime).as_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

fn ingest(a: IngestArgs) -> Result<()> {
    if a.files.is_empty() {
        bail!("no input files");
    }
    let cfg = ingest_config(&a);
    let mode = if a.strict { ParseMode::Strict } else { ParseMode::Lenient };
    let cached = match std::env::var_os(CACHE_ENV) {
        Some(dir) if !a.no_cache => {
            let dir = PathBuf::from(dir);
            fs::create_dir_all(&dir)?;
            Some(dir.join(format!("store-{}.bin", cache_key(&a.files, &cfg, a.strict)?)))
        }
        _ => None,
    };
    let store = match &cached {
        Some(c) if c.exists() => {
            log::info!("using cached store {}", c.display());
            EntityStore::load(c)?
        }
        _ => {
            let s = EntityStore::ingest_files(&a.files, &cfg, mode)?;
            if let Some(c) = &cached {
                s.save(c)?;
            }
            s
        }
    };
    store.save(&a.output)?;
    let st = store.stats();
    eprintln!(
        "{} records ({} triples, {} abstracts, {} filtered by language, {} malformed lines)",
        st.records, st.triples, st.abstracts, st.abstracts_filtered_by_language, st.malformed_lines
    );
    Ok(())
}

// ---- labels ----

fn label_columns(input: &LabelInput) -> Result<LabelColumns> {
    if let Some(p) = &input.columns {
        return read_json(p);
    }
    Ok(if input.expert {
        LabelColumns {
            agreement: None,
            source: None,
            default_source: Source::Expert,
            ..LabelColumns::default()
        }
    } else {
        LabelColumns::default()
    })
}

fn load_labels(path: &Path, input: &LabelInput, task: Option<Task>) -> Result<Vec<AggregatedLabel>> {
    let cols = label_columns(input)?;
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(crowd::read_labels(f, &file_name(path), &cols, task)?)
}

fn load_judgments(path: &Path, columns: Option<&Path>, task: Option<Task>) -> Result<Vec<AggregatedLabel>> {
    let cols: JudgmentColumns = match columns {
        Some(p) => read_json(p)?,
        None => JudgmentColumns::default(),
    };
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let sets = crowd::read_judgments(f, &file_name(path), &cols, task)?;
    Ok(crowd::aggregate_all(&sets)?)
}

fn agreement(a: AgreementArgs) -> Result<()> {
    let labels = load_judgments(&a.judgments, a.columns.as_deref(), a.task)?;
    let mut out = output(a.output.as_deref())?;
    crowd::write_labels(&mut out, &labels)?;
    out.flush()?;
    let contested = labels.iter().filter(|l| l.contested).count();
    match crowd::mean_agreement(&labels) {
        Some(m) => eprintln!("{} entities, mean agreement {m:.4}, {contested} contested", labels.len()),
        None => eprintln!("no entities"),
    }
    Ok(())
}

fn bucket(a: BucketArgs) -> Result<()> {
    let labels = load_labels(&a.labels, &a.input, Some(a.task))?;
    if a.output.is_some() && a.thresholds.len() != 1 {
        bail!("--output needs exactly one --threshold");
    }
    let (pos, neg) = a.task.class_names();
    println!("agreement & {pos} & {neg} & total");
    for &t in &a.thresholds {
        let b = crowd::bucket(&labels, t)?;
        println!("{}", b.table_row(&[pos, neg]));
        if let Some(p) = &a.output {
            let mut w = output(Some(p))?;
            crowd::write_labels(&mut w, &b.kept)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn compare(a: CompareArgs) -> Result<()> {
    let input = |expert| LabelInput { columns: None, expert };
    let la = load_labels(&a.a, &input(a.a_expert), Some(a.task))?;
    let mut lb = load_labels(&a.b, &input(a.b_expert), Some(a.task))?;
    if let Some(t) = a.threshold {
        lb = crowd::bucket(&lb, t)?.kept;
    }
    let c = crowd::compare(&la, &lb)?;
    println!(
        "common {}  matching {}  disagreements {}  rate {:.4}",
        c.common,
        c.matching,
        c.disagreements.len(),
        c.rate
    );
    if a.list {
        for d in &c.disagreements {
            println!("{}\t{}\t{}", d.entity, d.a, d.b);
        }
    }
    Ok(())
}

fn default_strategy(labels: &[AggregatedLabel]) -> BalanceStrategy {
    if harness::dataset_tag(labels) == "E" {
        BalanceStrategy::RandomDrop
    } else {
        BalanceStrategy::LowAgreementDrop
    }
}

fn balance(a: BalanceArgs, seed: u64) -> Result<()> {
    let mut labels = load_labels(&a.labels, &a.input, Some(a.task))?;
    if let Some(t) = a.threshold {
        labels = crowd::bucket(&labels, t)?.kept;
    }
    let strategy = a.strategy.unwrap_or_else(|| default_strategy(&labels));
    let kept = crowd::balance(&labels, strategy, seed)?;
    let mut out = output(a.output.as_deref())?;
    crowd::write_labels(&mut out, &kept)?;
    out.flush()?;
    eprintln!("kept {} of {} labels", kept.len(), labels.len());
    Ok(())
}

// ---- seneca ----

fn seneca_cmd(a: SenecaArgs) -> Result<()> {
    let cfg = SenecaConfig {
        symmetrize_aligned: !a.directed_alignments,
        instance_flag_vetoes: !a.no_instance_veto,
        ..SenecaConfig::default()
    };
    let g = AlignmentGraph::load(&a.graph, cfg)?;
    warn_diagnostics("alignment graph", g.diagnostics());
    let store = EntityStore::load(&a.store)?;
    let set = seneca::seneca_batch(&store, &g);
    let mut out = output(a.output.as_deref())?;
    seneca::write_verdicts(&mut out, &set)?;
    out.flush()?;
    eprintln!(
        "{} entities: {} classes, {} physical objects",
        set.summary.entities, set.summary.candidate_classes, set.summary.candidate_physical_objects
    );
    if let Some(p) = &a.witnesses {
        let mut w = output(Some(p))?;
        for v in set.verdicts.values() {
            serde_json::to_writer(&mut w, v)?;
            writeln!(w)?;
        }
        w.flush()?;
    }
    if let (Some(gold_path), Some(task)) = (&a.gold, a.task) {
        let labels = load_labels(gold_path, &a.gold_format, Some(task))?;
        let gold: Vec<_> = labels
            .iter()
            .filter_map(|l| l.label(task).map(|lab| (l.entity.clone(), lab)))
            .collect();
        let r = harness::eval_seneca(&set, &gold, task, harness::dataset_tag(&labels))?;
        print!("{}", harness::render_table(std::slice::from_ref(&r)));
        if let Some(p) = &a.report {
            write_json(p, &r)?;
        }
        if let Some(p) = &a.audit {
            write_json(p, &harness::seneca_audit(&set, &gold, task))?;
        }
    }
    Ok(())
}

fn load_verdicts(path: &Path) -> Result<VerdictSet> {
    let r = open_input(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(seneca::read_verdicts(r)?)
}

// ---- experiments ----

struct Data {
    examples: Vec<Example>,
    dataset: &'static str,
    hyperparameters: Hyperparameters,
    features: FeatureConfig,
}

fn load_data(a: &DataArgs, seed: u64) -> Result<Data> {
    let store = EntityStore::load(&a.store)?;
    let labels = match (&a.labels, &a.judgments) {
        (Some(p), _) => load_labels(p, &a.input, Some(a.task))?,
        (None, Some(p)) => load_judgments(p, a.input.columns.as_deref(), Some(a.task))?,
        (None, None) => bail!("either --labels or --judgments is required"),
    };
    let dataset = harness::dataset_tag(&labels);
    let threshold = a.threshold.or((dataset == "C").then_some(0.8));
    let labels = match threshold {
        Some(t) => crowd::bucket(&labels, t)?.kept,
        None => labels,
    };
    let labels = if a.no_balance {
        labels
    } else {
        let s = a.balance.unwrap_or_else(|| default_strategy(&labels));
        crowd::balance(&labels, s, seed)?
    };
    let verdicts = a.verdicts.as_deref().map(load_verdicts).transpose()?;
    let (examples, diags) = harness::build_examples(&store, &labels, verdicts.as_ref(), a.task);
    warn_diagnostics("examples", &diags);
    log::info!("{} examples ({dataset}, threshold {threshold:?})", examples.len());
    Ok(Data {
        examples,
        dataset,
        hyperparameters: match &a.hyperparameters {
            Some(p) => read_json(p)?,
            None => Hyperparameters::default(),
        },
        features: match &a.feature_config {
            Some(p) => read_json(p)?,
            None => FeatureConfig::default(),
        },
    })
}

fn fit(d: &Data, blocks: BlockSet) -> Result<(FeatureSpace, Vec<LabeledExample>)> {
    let records: Vec<&EntityRecord> = d.examples.iter().map(|e| &e.record).collect();
    let space = FeatureSpace::fit(&records, blocks, d.features.clone())?;
    let mut diags = Vec::new();
    let rows = d
        .examples
        .iter()
        .map(|e| {
            let v = space.assemble(&e.record, e.verdict.unwrap_or(false), &mut diags);
            LabeledExample::new(e.record.iri.clone(), v, e.label, e.weight)
        })
        .collect();
    warn_diagnostics("features", &diags);
    Ok((space, rows))
}

fn needs_verdicts(d: &Data, blocks: BlockSet) -> Result<()> {
    if blocks.contains(fdistinct::features::Block::D) && d.examples.iter().any(|e| e.verdict.is_none()) {
        bail!("block set {blocks} includes D; pass --verdicts");
    }
    Ok(())
}

fn featurize(a: FeaturizeArgs, seed: u64) -> Result<()> {
    let d = load_data(&a.data, seed)?;
    needs_verdicts(&d, a.blocks)?;
    let (space, rows) = fit(&d, a.blocks)?;
    let rows: Vec<_> = rows.into_iter().map(|r| (r.entity, r.features)).collect();
    let mut out = output(Some(&a.output))?;
    write_matrix(&mut out, &space, &rows)?;
    out.flush()?;
    if let Some(p) = &a.space {
        write_json(p, &space)?;
    }
    eprintln!("{} rows x {} columns", rows.len(), space.dim());
    Ok(())
}

fn space_path(model: &Path) -> PathBuf {
    let mut s = model.as_os_str().to_owned();
    s.push(".space.json");
    PathBuf::from(s)
}

fn train(a: TrainArgs, seed: u64) -> Result<()> {
    let d = load_data(&a.data, seed)?;
    needs_verdicts(&d, a.blocks)?;
    let (space, rows) = fit(&d, a.blocks)?;
    let hp = Hyperparameters { seed, ..d.hyperparameters.clone() };
    let model = classify::train(a.kind, &space, &rows, &hp)?;
    model.save(&a.output)?;
    write_json(&space_path(&a.output), &space)?;
    eprintln!("{} trained on {} examples ({} columns)", a.kind, rows.len(), space.dim());
    Ok(())
}

fn predict(a: PredictArgs) -> Result<()> {
    let model = TrainedModel::load(&a.model)?;
    let space: FeatureSpace = read_json(&space_path(&a.model))?;
    if space.id() != model.space {
        bail!("{} does not belong to {}", space_path(&a.model).display(), a.model.display());
    }
    let store = EntityStore::load(&a.store)?;
    let verdicts = a.verdicts.as_deref().map(load_verdicts).transpose()?;
    if space.blocks().contains(fdistinct::features::Block::D) && verdicts.is_none() {
        bail!("the model uses the D block; pass --verdicts");
    }
    let entities: Vec<String> = match &a.entities {
        Some(p) => read_lines(p)?,
        None => store.targets().map(|r| r.iri.clone()).collect(),
    };
    let mut out = output(a.output.as_deref())?;
    let mut diags = Vec::new();
    for e in &entities {
        let Some(rec) = store.get(e) else {
            diags.push(Diagnostic::new(e, "not in the entity store"));
            continue;
        };
        let flag = verdicts.as_ref().and_then(|v| v.flag(a.task, e)).unwrap_or(false);
        let p = model.predict(&space.assemble(rec, flag, &mut diags))?;
        writeln!(out, "{e}\t{}\t{}", a.task.label_name(p.label), p.score)?;
    }
    out.flush()?;
    warn_diagnostics("predict", &diags);
    Ok(())
}

fn cv(a: CvArgs, seed: u64, all: bool) -> Result<()> {
    let d = load_data(&a.data, seed)?;
    let cfg = CvConfig {
        folds: a.folds,
        seed,
        hyperparameters: d.hyperparameters.clone(),
        features: d.features.clone(),
    };
    let reports = if all {
        harness::sweep(&d.examples, a.data.task, d.dataset, a.kind, a.blocks, &cfg)?
    } else {
        vec![harness::cross_validate(&d.examples, a.data.task, d.dataset, a.kind, a.blocks, &cfg)?]
    };
    let table = harness::render_table(&reports);
    print!("{table}");
    if let Some(p) = &a.table {
        fs::write(p, &table)?;
    }
    if let Some(p) = &a.output {
        if all {
            write_json(p, &reports)?;
        } else {
            write_json(p, &reports[0])?;
        }
    }
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let mut reports: Vec<EvalReport> = Vec::new();
    for p in &a.reports {
        let v: serde_json::Value = read_json(p)?;
        match v {
            serde_json::Value::Array(_) => reports.extend(serde_json::from_value::<Vec<EvalReport>>(v)?),
            _ => reports.push(serde_json::from_value(v)?),
        }
    }
    for r in &reports {
        if harness::config_hash(&r.config) != r.config_hash {
            log::warn!("{} {}: config hash does not match its config", r.method, r.dataset);
        }
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        print!("{}", harness::render_table(&reports));
    }
    Ok(())
}

// ---- sampling ----

fn sample(a: SampleArgs) -> Result<()> {
    let store = VectorStore::load(&a.vectors)?;
    let seeds = read_lines(&a.seeds)?;
    let mut triples = Vec::new();
    for p in &a.kg {
        let r = open_input(p).with_context(|| format!("opening {}", p.display()))?;
        let mut reader = TripleReader::with_source(r, ParseMode::Lenient, file_name(p));
        for t in reader.by_ref() {
            triples.push(t?);
        }
        warn_diagnostics(&file_name(p), reader.diagnostics());
    }
    let kg = SampleKg::from_triples(&triples, Some(&a.lang));
    drop(triples);
    let places = a.places.as_deref().map(read_lines).transpose()?.unwrap_or_default();
    let cfg = SampleConfig {
        k: a.k,
        min_cos: (!a.no_min_cos).then_some(a.min_cos),
        places_category: a.places_category.clone(),
    };
    let s = build_sample(&seeds, &store, &kg, &places, &cfg)?;
    let mut out = output(a.output.as_deref())?;
    for e in &s.entities {
        writeln!(out, "{e}")?;
    }
    out.flush()?;
    if let Some(p) = &a.summary {
        write_json(p, &s)?;
    }
    eprintln!(
        "{} entities ({} neighbours; dropped {} redirects, {} disambiguations, {} without abstract; {} places added)",
        s.entities.len(),
        s.neighbors,
        s.dropped_redirects.len(),
        s.dropped_disambiguations.len(),
        s.dropped_without_abstract.len(),
        s.places_added.len()
    );
    Ok(())
}
