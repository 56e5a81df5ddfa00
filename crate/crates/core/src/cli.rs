//! The `topvs` command line.
//!
//! JSON reports carry a `"config"` block echoing the subcommand, its flags
//! and the build version. Exit status 0 means success, 2 a usage error,
//! 3 an input error and 4 an internal invariant violation.

use std::fmt::{self, Display, Write as _};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::barcode::{self, BirthDeathDecomposition};
use crate::classify::{self, CvConfig, LabeledDataset, SolverConfig, SvmSettings};
use crate::embed::{self, embed_dataset_with, embed_decomposition, DatasetEmbedding};
use crate::graph::{self, ManifestEntry, NetworkFormat, WeightedNetwork};
use crate::simgen::{self, BenchmarkSpec, ModularSpec};
use crate::wasserstein::{self, Exponent};

type Out = dyn Write + Send;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn input<E: Display>(context: impl Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Input(format!("{context}: {e}"))
}

fn usage<E: Display>(flag: &'static str) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Usage(format!("{flag}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "topvs", version = VERSION, about = "Topological classification of weighted networks")]
pub struct Cli {
    /// Worker threads for parallel work (0 = one per core). Results do not
    /// depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Birth and death sets of one network (JSON).
    Decompose(DecomposeArgs),
    /// Betti numbers over filtration thresholds (CSV epsilon,beta0,beta1).
    Betti(BettiArgs),
    /// Wasserstein and product-metric distances between two networks (JSON).
    Dist(DistArgs),
    /// TopVS vectors of every network in a manifest (CSV).
    Embed(EmbedArgs),
    /// Barcode mean of the networks in a manifest (JSON).
    Mean(MeanArgs),
    /// One random modular network (edge-list CSV).
    Simulate(SimulateArgs),
    /// Two-group modular benchmark: network files plus a manifest.
    SimulateBenchmark(SimulateBenchmarkArgs),
    /// Nested cross-validated SVM accuracy (JSON).
    Classify(ClassifyArgs),
    /// Label-permutation significance test of nested CV accuracy (JSON).
    Permtest(PermtestArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose(_) => "decompose",
            Command::Betti(_) => "betti",
            Command::Dist(_) => "dist",
            Command::Embed(_) => "embed",
            Command::Mean(_) => "mean",
            Command::Simulate(_) => "simulate",
            Command::SimulateBenchmark(_) => "simulate-benchmark",
            Command::Classify(_) => "classify",
            Command::Permtest(_) => "permtest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// Pick by extension: .csv edge list, .json barcode, anything else adjacency.
    Auto,
    Edgelist,
    Adjacency,
    /// A `decompose` JSON report.
    Barcode,
}

#[derive(Debug, Args, Serialize)]
pub struct NetworkInput {
    /// Input file format.
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,
    /// Node count for edge-list input (default: largest index + 1).
    #[arg(long)]
    pub node_count: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkInput,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BettiArgs {
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkInput,
    /// Strictly ascending thresholds (default: every distinct edge weight).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thresholds: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DistArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkInput,
    /// Wasserstein exponent: a real >= 1 or `inf`.
    #[arg(long, default_value = "2")]
    pub p: Exponent,
    /// Reference size (default: the larger node count; never below it).
    #[arg(long)]
    pub ref_size: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ManifestInput {
    /// Dataset manifest JSON.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Reference size (default: the largest node count; never below it).
    #[arg(long)]
    pub ref_size: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EmbedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: ManifestInput,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MeanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: ManifestInput,
    /// Average only networks with this label.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 90)]
    pub nodes: usize,
    #[arg(long, default_value_t = 3)]
    pub modules: usize,
    /// Within-module probability of the N(1, 0.5^2) branch.
    #[arg(long, default_value_t = 0.75)]
    pub r: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateBenchmarkArgs {
    /// Network sizes; every size gets `per-group` networks in each group.
    #[arg(long, value_delimiter = ',', default_value = "90")]
    pub sizes: Vec<usize>,
    /// Module counts of groups L1 and L2.
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    pub modules: Vec<usize>,
    #[arg(long, default_value_t = 0.75)]
    pub r: f64,
    #[arg(long, default_value_t = 30)]
    pub per_group: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for network files, `manifest.json` and `benchmark.json`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CvArgs {
    #[arg(long, default_value_t = 2)]
    pub outer: usize,
    #[arg(long, default_value_t = 5)]
    pub inner: usize,
    /// Candidate values of the SVM regularization C.
    #[arg(long, value_delimiter = ',', default_value = "0.01,1,100")]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Z-score features on each training split before fitting.
    #[arg(long)]
    pub standardize: bool,
    /// Dual solver stopping tolerance on the projected gradient.
    #[arg(long, default_value_t = classify::svm::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = classify::svm::DEFAULT_MAX_EPOCHS)]
    pub max_epochs: usize,
}

impl CvArgs {
    fn config(&self) -> CvConfig {
        CvConfig {
            outer_folds: self.outer,
            inner_folds: self.inner,
            c_grid: self.grid.clone(),
            seed: self.seed,
            svm: SvmSettings {
                standardize: self.standardize,
                solver: SolverConfig {
                    tolerance: self.tolerance,
                    max_epochs: self.max_epochs,
                },
            },
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: ManifestInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub cv: CvArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PermtestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: ManifestInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub cv: CvArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("topvs: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs one parsed command. Output without `--out` goes to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    let mut buffer = Vec::new();
    let result = pool.install(|| dispatch(cli, &mut buffer));
    stdout
        .write_all(&buffer)
        .map_err(|e| CliError::Internal(format!("writing stdout: {e}")))?;
    result
}

fn dispatch(cli: &Cli, stdout: &mut Out) -> Result<(), CliError> {
    let config = config_echo(cli);
    match &cli.command {
        Command::Decompose(a) => decompose(a, config, stdout),
        Command::Betti(a) => betti(a, stdout),
        Command::Dist(a) => dist(a, config, stdout),
        Command::Embed(a) => embed_cmd(a, stdout),
        Command::Mean(a) => mean(a, config, stdout),
        Command::Simulate(a) => simulate(a, stdout),
        Command::SimulateBenchmark(a) => simulate_benchmark(a, config, stdout),
        Command::Classify(a) => classify_cmd(a, config, stdout),
        Command::Permtest(a) => permtest(a, config, stdout),
    }
}

fn config_echo(cli: &Cli) -> Value {
    json!({
        "command": cli.command.name(),
        "args": &cli.command,
        "version": VERSION,
    })
}

fn emit(out: &Option<PathBuf>, stdout: &mut Out, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(input(path.display())),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("writing stdout: {e}"))),
    }
}

fn emit_json(out: &Option<PathBuf>, stdout: &mut Out, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    emit(out, stdout, &text)
}

fn resolve_format(path: &Path, format: InputFormat) -> InputFormat {
    if format != InputFormat::Auto {
        return format;
    }
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("csv") => InputFormat::Edgelist,
        Some("json") => InputFormat::Barcode,
        _ => InputFormat::Adjacency,
    }
}

fn read_network(path: &Path, network: &NetworkInput) -> Result<WeightedNetwork, CliError> {
    let format = match resolve_format(path, network.format) {
        InputFormat::Edgelist => NetworkFormat::Edgelist,
        InputFormat::Adjacency => NetworkFormat::Adjacency,
        InputFormat::Barcode | InputFormat::Auto => {
            return Err(CliError::Usage(format!("{}: a network file is required here, not a barcode", path.display())))
        }
    };
    graph::read_network(path, format, network.node_count).map_err(|e| CliError::Input(e.to_string()))
}

/// A network file decomposed on the fly, or a saved `decompose` report.
fn read_barcode(path: &Path, network: &NetworkInput) -> Result<BirthDeathDecomposition, CliError> {
    if resolve_format(path, network.format) != InputFormat::Barcode {
        return Ok(barcode::decompose(&read_network(path, network)?));
    }
    let text = fs::read_to_string(path).map_err(input(path.display()))?;
    let mut d: BirthDeathDecomposition = serde_json::from_str(&text).map_err(input(path.display()))?;
    if d.node_count < 2 {
        return Err(CliError::Input(format!("{}: node_count must be at least 2", path.display())));
    }
    let (m, n) = barcode::counts_for_size(d.node_count);
    if d.births.len() != m || d.deaths.len() != n {
        return Err(CliError::Input(format!(
            "{}: a {}-node barcode needs {m} births and {n} deaths, found {} and {}",
            path.display(),
            d.node_count,
            d.births.len(),
            d.deaths.len()
        )));
    }
    if d.births.iter().chain(&d.deaths).any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("{}: non-finite barcode value", path.display())));
    }
    d.births.sort_by(f64::total_cmp);
    d.deaths.sort_by(f64::total_cmp);
    Ok(d)
}

fn decompose(a: &DecomposeArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let d = barcode::decompose(&read_network(&a.input, &a.network)?);
    emit_json(
        &a.out,
        stdout,
        &json!({ "config": config, "node_count": d.node_count, "births": d.births, "deaths": d.deaths }),
    )
}

fn betti(a: &BettiArgs, stdout: &mut Out) -> Result<(), CliError> {
    let net = read_network(&a.input, &a.network)?;
    let thresholds = a.thresholds.clone().unwrap_or_else(|| barcode::filtration_values(&net));
    let curve = barcode::betti_curves(&net, &thresholds).map_err(usage("--thresholds"))?;
    let mut text = String::from("epsilon,beta0,beta1\n");
    for ((eps, b0), b1) in curve.thresholds.iter().zip(&curve.beta0).zip(&curve.beta1) {
        writeln!(text, "{eps:?},{b0},{b1}").unwrap();
    }
    emit(&a.out, stdout, &text)
}

fn dist(a: &DistArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let first = read_barcode(&a.first, &a.network)?;
    let second = read_barcode(&a.second, &a.network)?;
    let largest = first.node_count.max(second.node_count);
    let ref_size = a.ref_size.unwrap_or(largest);
    if ref_size < largest {
        return Err(CliError::Usage(format!("--ref-size {ref_size} is below the larger node count {largest}")));
    }
    let x = embed_decomposition(&first, ref_size).map_err(input(a.first.display()))?;
    let y = embed_decomposition(&second, ref_size).map_err(input(a.second.display()))?;
    let (w_births, w_deaths) = wasserstein::block_distances(&x, &y, a.p).map_err(|e| CliError::Internal(e.to_string()))?;
    let d_product = wasserstein::product_metric(&x, &y, a.p).map_err(|e| CliError::Internal(e.to_string()))?;
    emit_json(
        &a.out,
        stdout,
        &json!({
            "config": config,
            "ref_size": ref_size,
            "w_births": w_births,
            "w_deaths": w_deaths,
            "d_product": d_product,
        }),
    )
}

fn load_embedded(dataset: &ManifestInput) -> Result<(graph::LoadedDataset, DatasetEmbedding), CliError> {
    let loaded = graph::load_manifest(&dataset.manifest).map_err(|e| CliError::Input(e.to_string()))?;
    let embedding = embed_dataset_with(&loaded.networks, dataset.ref_size).map_err(|e| match e {
        embed::EmbedError::RefSizeBelowMax { .. } | embed::EmbedError::RefSizeTooSmall(_) => CliError::Usage(format!("--ref-size: {e}")),
        other => CliError::Input(format!("{}: {other}", dataset.manifest.display())),
    })?;
    if embedding.exceeds_max {
        eprintln!(
            "topvs: note: reference size {} exceeds the largest network ({} nodes); every network is upsampled",
            embedding.ref_size, embedding.max_node_count
        );
    }
    Ok((loaded, embedding))
}

fn embedding_meta(e: &DatasetEmbedding) -> Value {
    json!({
        "ref_size": e.ref_size,
        "max_node_count": e.max_node_count,
        "ref_size_exceeds_max": e.exceeds_max,
    })
}

fn embed_cmd(a: &EmbedArgs, stdout: &mut Out) -> Result<(), CliError> {
    let (loaded, embedding) = load_embedded(&a.dataset)?;
    let (m, n) = barcode::counts_for_size(embedding.ref_size);
    let mut text = String::from("label,ref_size");
    (1..=m).for_each(|k| write!(text, ",b_{k}").unwrap());
    (1..=n).for_each(|k| write!(text, ",d_{k}").unwrap());
    text.push('\n');
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for (label, v) in loaded.labels.iter().zip(&embedding.vectors) {
        let mut record = vec![label.clone(), v.ref_size().to_string()];
        record.extend(v.coordinates().map(|x| format!("{x:?}")));
        writer.write_record(&record).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let body = writer.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    text.push_str(&String::from_utf8(body).map_err(|e| CliError::Internal(e.to_string()))?);
    emit(&a.out, stdout, &text)
}

fn mean(a: &MeanArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let (loaded, embedding) = load_embedded(&a.dataset)?;
    let selected: Vec<_> = embedding
        .vectors
        .iter()
        .zip(&loaded.labels)
        .filter(|(_, l)| a.label.as_ref().is_none_or(|want| want == *l))
        .map(|(v, _)| v.clone())
        .collect();
    if selected.is_empty() {
        return Err(CliError::Input(format!("no networks with label {:?}", a.label.as_deref().unwrap_or(""))));
    }
    let m = wasserstein::barcode_mean(&selected).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut report = embedding_meta(&embedding);
    report["config"] = config;
    report["count"] = json!(selected.len());
    report["births"] = json!(m.births());
    report["deaths"] = json!(m.deaths());
    emit_json(&a.out, stdout, &report)
}

fn simulate(a: &SimulateArgs, stdout: &mut Out) -> Result<(), CliError> {
    let spec = ModularSpec {
        node_count: a.nodes,
        module_count: a.modules,
        within_probability: a.r,
        seed: a.seed,
    };
    let net = simgen::generate(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = format!(
        "# simulate --nodes {} --modules {} --r {} --seed {} (topvs {VERSION})\n",
        a.nodes, a.modules, a.r, a.seed
    );
    text.push_str(&net.to_edge_list_csv());
    emit(&a.out, stdout, &text)
}

fn simulate_benchmark(a: &SimulateBenchmarkArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let modules = match a.modules.as_slice() {
        [first, second] => (*first, *second),
        other => return Err(CliError::Usage(format!("--modules needs exactly two values, got {}", other.len()))),
    };
    let spec = BenchmarkSpec {
        sizes: a.sizes.clone(),
        modules,
        within_probability: a.r,
        per_group: a.per_group,
        seed: a.seed,
    };
    let bench = simgen::generate_benchmark(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    fs::create_dir_all(&a.out_dir).map_err(input(a.out_dir.display()))?;

    let width = bench.networks.len().to_string().len().max(3);
    let mut manifest = Vec::with_capacity(bench.networks.len());
    for (k, (net, label)) in bench.networks.iter().zip(&bench.labels).enumerate() {
        let name = format!("net_{k:0width$}.csv");
        let path = a.out_dir.join(&name);
        fs::write(&path, net.to_edge_list_csv()).map_err(input(path.display()))?;
        manifest.push(ManifestEntry {
            path: name,
            format: NetworkFormat::Edgelist,
            node_count: Some(net.node_count()),
            label: label.clone(),
        });
    }
    let manifest_path = a.out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))? + "\n";
    fs::write(&manifest_path, text).map_err(input(manifest_path.display()))?;

    let summary = json!({
        "config": config,
        "manifest": manifest_path,
        "network_count": bench.networks.len(),
        "networks": bench.specs,
    });
    let summary_path = Some(a.out_dir.join("benchmark.json"));
    emit_json(&summary_path, stdout, &summary)?;
    writeln!(stdout, "{}", manifest_path.display()).map_err(|e| CliError::Internal(e.to_string()))
}

fn labeled(loaded: &graph::LoadedDataset, embedding: DatasetEmbedding) -> Result<LabeledDataset, CliError> {
    LabeledDataset::new(embedding.vectors, loaded.labels.clone()).map_err(|e| CliError::Input(e.to_string()))
}

fn classify_error(e: classify::ClassifyError) -> CliError {
    use classify::ClassifyError::*;
    match e {
        TooFewFolds(_) | EmptyGrid | InvalidC(_) | ZeroTrials => CliError::Usage(e.to_string()),
        DimensionMismatch { .. } => CliError::Internal(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn classify_cmd(a: &ClassifyArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let (loaded, embedding) = load_embedded(&a.dataset)?;
    let meta = embedding_meta(&embedding);
    let data = labeled(&loaded, embedding)?;
    let report = classify::nested_cv(&data, &a.cv.config()).map_err(classify_error)?;
    check_confusion(&report)?;
    let mut out = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    merge(&mut out, meta);
    out["config"] = config;
    emit_json(&a.out, stdout, &out)
}

fn permtest(a: &PermtestArgs, config: Value, stdout: &mut Out) -> Result<(), CliError> {
    let (loaded, embedding) = load_embedded(&a.dataset)?;
    let meta = embedding_meta(&embedding);
    let data = labeled(&loaded, embedding)?;
    let cv = a.cv.config();
    let report = classify::permutation_test(&data, a.trials, a.cv.seed, &cv).map_err(classify_error)?;
    check_confusion(&report.observed)?;
    let mut out = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    merge(&mut out, meta);
    out["config"] = config;
    emit_json(&a.out, stdout, &out)
}

fn check_confusion(report: &classify::CvReport) -> Result<(), CliError> {
    for (row, class) in report.confusion.iter().zip(&report.classes) {
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(CliError::Internal(format!("confusion row for {class:?} sums to {total}")));
        }
    }
    Ok(())
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

