//! The `kgexplain` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgexplain_core::axiom::Name;
use kgexplain_core::enrich::{
    build_lexical_index, enrich, select_root_individuals, Ambiguity, EnrichOptions,
};
use kgexplain_core::miner::{mine, DomainCatalog, MinerConfig};
use kgexplain_core::rdf::{parse_ntriples, RDFS_LABEL, RDFS_SUBCLASS_OF};
use kgexplain_core::syntax::{parse_statement, serialize_ontology};
use kgexplain_core::synth::{generate_scenario, ScenarioConfig};
use kgexplain_core::zsl::{
    build_class_graph, gat_attention, justify, parse_attention_file, parse_feature_table,
    parse_params, AttentionMode, FeatureSource, GatParams, GraphConfig, JustificationTemplates,
    ZslError,
};
use kgexplain_core::{materialize, query, AxiomTemplate, TripleSet};

use crate::config::{parse_config, Beam, FileConfig};
use crate::fs;
use crate::report::{alignment_json, bindings_json, report_json, to_json, JustificationJson};
use crate::scenario::{load_domains, load_ontology, load_signatures, write_scenario};
use crate::transfers::load_transfer_log;

#[derive(Debug, Parser)]
#[command(
    name = "kgexplain",
    version,
    about = "Explain feature transfers and zero-shot predictions with knowledge graphs",
    arg_required_else_help = true
)]
struct Cli {
    /// Flat JSON config; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Materialize an axiom file, or answer a pattern query against it.
    Materialize(MaterializeArgs),
    /// Align a domain ontology with a knowledge-graph dump and import facts.
    Enrich(EnrichArgs),
    /// Mine explanatory evidences from a transfer log.
    Mine(MineArgs),
    /// Justify zero-shot predictions from attention over a class graph.
    ZslJustify(ZslArgs),
    /// Generate a synthetic scenario with planted evidences.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct MaterializeArgs {
    #[arg(long, value_name = "AXIOMS")]
    input: PathBuf,
    /// Pattern with `?var` placeholders, e.g. `hasDepHub(?dep, ?hub)`.
    #[arg(long)]
    query: Option<String>,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AmbiguousArg {
    Skip,
    First,
}

impl From<AmbiguousArg> for Ambiguity {
    fn from(a: AmbiguousArg) -> Self {
        match a {
            AmbiguousArg::Skip => Ambiguity::Skip,
            AmbiguousArg::First => Ambiguity::First,
        }
    }
}

#[derive(Debug, Args)]
struct EnrichArgs {
    #[arg(long, value_name = "AXIOMS")]
    input: PathBuf,
    #[arg(long)]
    signatures: PathBuf,
    #[arg(long)]
    kg_dump: PathBuf,
    /// Comma-separated IRIs. Default: rdfs:label.
    #[arg(long)]
    label_predicates: Option<String>,
    /// Outgoing edges followed from each aligned entity. Default: 1.
    #[arg(long)]
    hops: Option<usize>,
    /// Default: skip.
    #[arg(long, value_enum)]
    ambiguous: Option<AmbiguousArg>,
    /// Property hops around signature individuals that count as roots. Default: 0.
    #[arg(long)]
    radius: Option<usize>,
    /// Enriched axiom file.
    #[arg(long)]
    out: PathBuf,
    /// Alignment report; defaults to standard output.
    #[arg(long)]
    alignment: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[arg(long)]
    transfers: PathBuf,
    /// Directory of `<id>.axioms` files.
    #[arg(long)]
    domains: PathBuf,
    #[arg(long)]
    signatures: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    theta_pos: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_neg: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    min_support: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Positive integer, or `inf` for no beam.
    #[arg(long)]
    beam: Option<Beam>,
    /// Only mine transfers of this feature.
    #[arg(long)]
    feature: Option<String>,
    /// Worker threads for candidate scoring.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ZslArgs {
    #[arg(long)]
    kg_dump: PathBuf,
    /// One class label or IRI per line.
    #[arg(long)]
    seen: PathBuf,
    /// One class label or IRI per line.
    #[arg(long)]
    unseen: PathBuf,
    /// Comma-separated IRIs whose values become shared-property nodes.
    #[arg(long)]
    property_predicates: Option<String>,
    /// Default: rdfs:subClassOf.
    #[arg(long)]
    subclass_predicate: Option<String>,
    /// Comma-separated IRIs used to resolve class labels. Default: rdfs:label.
    #[arg(long)]
    label_predicates: Option<String>,
    /// GAT parameter file; random initialization from `--seed` otherwise.
    #[arg(long, conflicts_with = "attention")]
    params: Option<PathBuf>,
    /// Precomputed `unseen seen weight` lines; skips the forward pass.
    #[arg(long)]
    attention: Option<PathBuf>,
    /// Node feature table; random features from `--seed` otherwise.
    #[arg(long)]
    features: Option<PathBuf>,
    /// Dimension of random features. Default: 16.
    #[arg(long)]
    feature_dim: Option<usize>,
    /// Default: 0.
    #[arg(long)]
    seed: Option<u64>,
    /// LeakyReLU slope for random parameters. Default: 0.2.
    #[arg(long)]
    slope: Option<f64>,
    /// Impressive classes per unseen class. Default: 2.
    #[arg(long)]
    k: Option<usize>,
    /// Attention hops over computed attentions. Default: 1.
    #[arg(long)]
    hops: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Default: 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    domains: Option<usize>,
    #[arg(long)]
    transfers: Option<usize>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    base_score: Option<f64>,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
}

/// A failed run: message and exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

/// Usage, input and IO problems.
fn usage(e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

/// Well-formed inputs the analysis cannot handle.
fn domain(e: impl Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

/// Runs the tool on `args` (program name first) and returns the exit code:
/// 0 on success, 1 on domain errors, 2 on usage and IO errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        None => FileConfig::default(),
        Some(p) => {
            let text = fs::read_text(p).map_err(usage)?;
            let (cfg, warnings) =
                parse_config(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            for w in warnings {
                warn(&w);
            }
            cfg
        }
    };
    match cli.command {
        Command::Materialize(a) => run_materialize(a),
        Command::Enrich(a) => run_enrich(a, &cfg),
        Command::Mine(a) => run_mine(a, &cfg),
        Command::ZslJustify(a) => run_zsl(a, &cfg),
        Command::Synth(a) => run_synth(a, &cfg),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write_atomic(p, text.as_bytes()).map_err(usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn load_kg(path: &Path) -> Result<TripleSet, Failure> {
    let text = fs::read_text(path).map_err(usage)?;
    parse_ntriples(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn run_materialize(a: MaterializeArgs) -> Result<(), Failure> {
    let (o, warnings) = load_ontology(&a.input).map_err(usage)?;
    for w in warnings {
        warn(&w);
    }
    let m = materialize(&o);
    let text = match &a.query {
        None => serialize_ontology(&m),
        Some(q) => {
            let pattern: AxiomTemplate =
                parse_statement(q).map_err(|e| usage(format!("query: {e}")))?;
            let answers = query(&m, &pattern).map_err(domain)?;
            to_json(&bindings_json(&answers))
        }
    };
    emit(a.out.as_deref(), &text)
}

fn run_enrich(a: EnrichArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let (o, warnings) = load_ontology(&a.input).map_err(usage)?;
    for w in warnings {
        warn(&w);
    }
    let sigs = load_signatures(&a.signatures).map_err(usage)?;
    let sig = sigs.iter().find(|s| s.domain() == o.id()).ok_or_else(|| {
        usage(format!(
            "{}: no signature for domain {}",
            a.signatures.display(),
            o.id()
        ))
    })?;
    let kg = load_kg(&a.kg_dump)?;
    let labels = a
        .label_predicates
        .as_deref()
        .or(cfg.label_predicates.as_deref())
        .map(split_list)
        .unwrap_or_else(|| vec![RDFS_LABEL.to_string()]);
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let ambiguity = match (a.ambiguous, cfg.ambiguous.as_deref()) {
        (Some(x), _) => x.into(),
        (None, Some("skip")) | (None, None) => Ambiguity::Skip,
        (None, Some("first")) => Ambiguity::First,
        (None, Some(other)) => {
            return Err(usage(format!(
                "config key `ambiguous`: `{other}` is not skip or first"
            )))
        }
    };
    let opts = EnrichOptions {
        hops: a.hops.or(cfg.hops).unwrap_or(1),
        ambiguity,
    };
    let radius = a.radius.or(cfg.radius).unwrap_or(0);
    let roots = select_root_individuals(&o, sig, radius);
    let idx = build_lexical_index(&kg, &label_refs);
    let (enriched, report) = enrich(&o, &kg, &idx, &roots, &opts);
    fs::write_atomic(&a.out, serialize_ontology(&enriched).as_bytes()).map_err(usage)?;
    emit(a.alignment.as_deref(), &to_json(&alignment_json(&report)))
}

fn run_mine(a: MineArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let defaults = MinerConfig::default();
    let miner_cfg = MinerConfig {
        theta_pos: a.theta_pos.or(cfg.theta_pos).unwrap_or(defaults.theta_pos),
        theta_neg: a.theta_neg.or(cfg.theta_neg).unwrap_or(defaults.theta_neg),
        alpha: a.alpha.or(cfg.alpha).unwrap_or(defaults.alpha),
        min_support: a
            .min_support
            .or(cfg.min_support)
            .unwrap_or(defaults.min_support),
        max_dimension: a
            .max_dim
            .or(cfg.max_dimension)
            .unwrap_or(defaults.max_dimension),
        beam_width: match a.beam.or(cfg.beam_width) {
            Some(b) => b.width(),
            None => defaults.beam_width,
        },
    };
    miner_cfg.validate().map_err(usage)?;
    let jobs = a.jobs.or(cfg.jobs);
    if jobs == Some(0) {
        return Err(usage("--jobs must be positive"));
    }

    let text = fs::read_text(&a.transfers).map_err(usage)?;
    let mut transfers =
        load_transfer_log(&text).map_err(|e| usage(format!("{}: {e}", a.transfers.display())))?;
    if let Some(f) = a.feature.as_deref().or(cfg.feature.as_deref()) {
        transfers.retain(|t| t.feature.as_str() == f);
    }
    let (onts, warnings) = load_domains(&a.domains).map_err(usage)?;
    for w in warnings {
        warn(&w);
    }
    let sigs = load_signatures(&a.signatures).map_err(usage)?;
    let catalog = DomainCatalog::materialize(onts, sigs).map_err(domain)?;

    let report = match jobs {
        None => mine(&transfers, &catalog, &miner_cfg),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(usage)?
            .install(|| mine(&transfers, &catalog, &miner_cfg)),
    }
    .map_err(domain)?;
    let feature = transfers.first().map(|t| t.feature.as_str());
    fs::write_atomic(&a.out, to_json(&report_json(&report, feature)).as_bytes()).map_err(usage)?;
    println!(
        "{} evidences from {} transfers ({} combinations scanned)",
        report.evidences.len(),
        transfers.len(),
        report.candidates_scanned
    );
    Ok(())
}

fn read_class_list(path: &Path) -> Result<Vec<String>, Failure> {
    Ok(fs::read_text(path)
        .map_err(usage)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn zsl_failure(e: ZslError) -> Failure {
    match e {
        ZslError::Parse { .. } => usage(e),
        _ => domain(e),
    }
}

fn run_zsl(a: ZslArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let hops = a.hops.or(cfg.attention_hops).unwrap_or(1);
    if hops == 0 {
        return Err(usage("--hops must be positive"));
    }
    if hops > 1 && a.attention.is_some() {
        return Err(usage(
            "--hops applies to computed attentions, not to --attention files",
        ));
    }
    let k = a.k.or(cfg.k).unwrap_or(2);
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    let kg = load_kg(&a.kg_dump)?;
    let seen = read_class_list(&a.seen)?;
    let unseen = read_class_list(&a.unseen)?;
    let graph_cfg = GraphConfig {
        subclass_predicate: a
            .subclass_predicate
            .or_else(|| cfg.subclass_predicate.clone())
            .unwrap_or_else(|| RDFS_SUBCLASS_OF.to_string()),
        property_predicates: a
            .property_predicates
            .as_deref()
            .or(cfg.property_predicates.as_deref())
            .map(split_list)
            .unwrap_or_default(),
    };
    let labels = a
        .label_predicates
        .as_deref()
        .or(cfg.label_predicates.as_deref())
        .map(split_list)
        .unwrap_or_else(|| vec![RDFS_LABEL.to_string()]);
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let idx = build_lexical_index(&kg, &label_refs);
    let features = match &a.features {
        Some(p) => FeatureSource::Table(
            parse_feature_table(&fs::read_text(p).map_err(usage)?)
                .map_err(|e| usage(format!("{}: {e}", p.display())))?,
        ),
        None => FeatureSource::Random {
            dim: a.feature_dim.or(cfg.feature_dim).unwrap_or(16),
            seed,
        },
    };
    let (g, warnings) =
        build_class_graph(&kg, &graph_cfg, &seen, &unseen, &idx, &features).map_err(zsl_failure)?;
    for w in warnings {
        warn(&w);
    }

    let att = match (&a.attention, &a.params) {
        (Some(p), _) => parse_attention_file(&fs::read_text(p).map_err(usage)?)
            .map_err(|e| usage(format!("{}: {e}", p.display())))?,
        (None, params) => {
            let params = match params {
                Some(p) => parse_params(&fs::read_text(p).map_err(usage)?)
                    .map_err(|e| usage(format!("{}: {e}", p.display())))?,
                None => {
                    let dim = g.features().map_or(0, |(_, d)| d);
                    GatParams::random(dim, dim, a.slope.or(cfg.slope).unwrap_or(0.2), seed)
                }
            };
            let (att, _) = gat_attention(&g, &params).map_err(zsl_failure)?;
            let mode = if hops == 1 {
                AttentionMode::Direct
            } else {
                AttentionMode::MultiHop { hops }
            };
            mode.apply(&att)
        }
    };

    let templates = JustificationTemplates::default();
    let mut out = Vec::new();
    let targets: BTreeSet<String> = g.unseen().clone();
    for u in &targets {
        let j = justify(&g, &att, u, k, &templates).map_err(zsl_failure)?;
        out.push(JustificationJson::from(&j));
    }
    fs::write_atomic(&a.out, to_json(&out).as_bytes()).map_err(usage)
}

fn run_synth(a: SynthArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let d = ScenarioConfig::default();
    let sc = ScenarioConfig {
        domains: a.domains.or(cfg.domains).unwrap_or(d.domains),
        transfers: a.transfers.or(cfg.transfers).unwrap_or(d.transfers),
        noise_sigma: a.noise_sigma.or(cfg.noise_sigma).unwrap_or(d.noise_sigma),
        base_score: a.base_score.or(cfg.base_score).unwrap_or(d.base_score),
        feature: match &cfg.feature {
            Some(f) => Name::new(f.as_str())
                .map_err(|_| usage(format!("config key `feature`: bad id `{f}`")))?,
            None => d.feature.clone(),
        },
        ..d
    };
    if !(sc.noise_sigma >= 0.0 && sc.noise_sigma.is_finite()) {
        return Err(usage("--noise-sigma must be finite and non-negative"));
    }
    let seed = a.seed.or(cfg.seed).unwrap_or(42);
    let s = generate_scenario(&sc, seed).map_err(domain)?;
    write_scenario(&a.out, &s).map_err(usage)?;
    println!(
        "wrote {} domains, {} transfers, {} planted evidences to {}",
        s.domains.len(),
        s.transfers.len(),
        s.planted.len(),
        a.out.display()
    );
    Ok(())
}
