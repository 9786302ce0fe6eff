//! Command-line front end.
//!
//! Settings come from flags, then from an optional `key = value` config
//! file, then from built-in defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;

use crate::bootstrap::{self, BootstrapConfig, RunOutput};
use crate::corpus::{ingest_path, IngestOptions, IngestReport};
use crate::dawg::Dawg;
use crate::entity::{load_aliases, AliasDictionary, AliasLoadReport};
use crate::error::{Error, Result};
use crate::eval::{self, ccdf, Averaging, EvalResult, IgnoreRule, TruthRow};
use crate::output::{self, PairLine};
use crate::pattern::{Orientation, Pattern, WeightUnit};
use crate::pipeline::{PrepareOptions, PrepareReport, PreparedCorpus};
use crate::quote::{GroupingOptions, QuoteBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quote-bootstrap",
    version,
    about = "Attribute quotations to speakers in redundant news corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the extraction loop and write the pairs and pattern files.
    Extract(CommonArgs),
    /// Score a pairs file against a ground-truth file.
    Eval(CommonArgs),
    /// Attribute every quotation to its nearest speaker mention.
    Baseline(CommonArgs),
    /// Print CCDF tables for a pairs file as CSV.
    Stats(CommonArgs),
    /// Run the extraction loop and print the learned patterns.
    Patterns(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` settings file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input corpus, NDJSON.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Alias dictionary, TSV.
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    /// Seed patterns, one per line.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Ground truth, TSV.
    #[arg(long = "ground-truth")]
    pub ground_truth: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pairs file to read (defaults to `<out>/pairs.ndjson`).
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long = "max-iterations")]
    pub max_iterations: Option<usize>,
    #[arg(long = "filter-threshold")]
    pub filter_threshold: Option<f64>,
    #[arg(long = "min-support")]
    pub min_support: Option<usize>,
    /// Context window in units.
    #[arg(long)]
    pub window: Option<usize>,
    /// Shared run length that groups quotation variants.
    #[arg(long = "group-len")]
    pub group_len: Option<usize>,
    #[arg(long = "min-quote-len")]
    pub min_quote_len: Option<usize>,
    #[arg(long = "max-quote-len")]
    pub max_quote_len: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write DOT renderings of each iteration's pattern graphs.
    #[arg(long)]
    pub dot: bool,
    /// Log filter, e.g. `info` or `debug`.
    #[arg(long = "log-level")]
    pub log_level: Option<String>,
}

/// Settings after merging flags, config file and defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    pub bootstrap: BootstrapConfig,
    pub prepare: PrepareOptions,
    pub alias_case_sensitive: bool,
    pub ignore_rule: IgnoreRule,
    pub max_line_bytes: usize,
    pub threads: Option<usize>,
    pub dot: bool,
    pub log_level: String,
}

/// Parses the flat config format: `key = value` per line, `#` comments.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("config line {}: expected `key = value`", n + 1))
        })?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

struct Settings {
    file: BTreeMap<String, String>,
    /// Directory of the config file; relative paths in it resolve here.
    base: Option<PathBuf>,
}

impl Settings {
    fn take_path(&mut self, key: &str, flag: &Option<PathBuf>) -> Result<Option<PathBuf>> {
        let from_file = self.file.remove(key);
        if flag.is_some() {
            return Ok(flag.clone());
        }
        Ok(from_file.map(|v| {
            let p = PathBuf::from(v);
            match &self.base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        }))
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let from_file = self.file.remove(key);
        if flag.is_some() {
            return Ok(flag);
        }
        from_file
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("bad value for `{key}`: `{v}`")))
            })
            .transpose()
    }
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let base = args
            .config
            .as_ref()
            .and_then(|p| p.parent())
            .map(Path::to_path_buf);
        let mut s = Settings { file, base };
        let d = BootstrapConfig::default();
        let path = |s: &mut Settings, k: &str, f: &Option<PathBuf>| s.take_path(k, f);

        let corpus = path(&mut s, "corpus", &args.corpus)?;
        let aliases = path(&mut s, "aliases", &args.aliases)?;
        let seeds = path(&mut s, "seeds", &args.seeds)?;
        let ground_truth = path(&mut s, "ground_truth", &args.ground_truth)?;
        let out = path(&mut s, "out", &args.out)?;
        let pairs = path(&mut s, "pairs", &args.pairs)?;

        let thresholds = match s.file.remove("thresholds") {
            Some(v) => v
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad threshold `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => d.thresholds.clone(),
        };
        let bootstrap = BootstrapConfig {
            seeds: d.seeds.clone(),
            max_iterations: s.take("max_iterations", args.max_iterations)?.unwrap_or(d.max_iterations),
            thresholds,
            max_wildcard_run: s.take("max_wildcard_run", None)?.unwrap_or(d.max_wildcard_run),
            filter_threshold: s
                .take("filter_threshold", args.filter_threshold)?
                .unwrap_or(d.filter_threshold),
            min_support: s.take("min_support", args.min_support)?.unwrap_or(d.min_support),
            tau: s.take("tau", None)?.unwrap_or(d.tau),
            weight_unit: s.take::<WeightUnit>("weight_unit", None)?.unwrap_or_default(),
            window: s.take("window", args.window)?.unwrap_or(d.window),
        };
        let bounds_default = QuoteBounds::default();
        let grouping_default = GroupingOptions::default();
        let prepare = PrepareOptions {
            quotes: Default::default(),
            bounds: QuoteBounds {
                min_len: s.take("min_quote_len", args.min_quote_len)?.unwrap_or(bounds_default.min_len),
                max_len: s.take("max_quote_len", args.max_quote_len)?.unwrap_or(bounds_default.max_len),
            },
            grouping: GroupingOptions {
                group_len: s.take("group_len", args.group_len)?.unwrap_or(grouping_default.group_len),
                enabled: s.take("grouping", None)?.unwrap_or(grouping_default.enabled),
                case_insensitive: s
                    .take("grouping_case_insensitive", None)?
                    .unwrap_or(grouping_default.case_insensitive),
            },
        };
        if prepare.grouping.group_len == 0 {
            return Err(Error::Config("group_len must be at least 1".into()));
        }
        if prepare.bounds.min_len > prepare.bounds.max_len {
            return Err(Error::Config("min_quote_len exceeds max_quote_len".into()));
        }
        let alias_case_sensitive = s.take("alias_case_sensitive", None)?.unwrap_or(true);
        let ignore_rule = match s.file.remove("ignore_rule").as_deref() {
            None | Some("both_unknown") => IgnoreRule::BothUnknown,
            Some("either_unknown") => IgnoreRule::EitherUnknown,
            Some(other) => {
                return Err(Error::Config(format!(
                    "ignore_rule must be `both_unknown` or `either_unknown`, got `{other}`"
                )))
            }
        };
        let max_line_bytes = s
            .take("max_line_bytes", None)?
            .unwrap_or(IngestOptions::default().max_line_bytes);
        let threads = s.take("threads", args.threads)?;
        if threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        let dot = args.dot || s.take("dot", None)?.unwrap_or(false);
        let log_level = s.take("log_level", args.log_level.clone())?.unwrap_or_else(|| "warn".into());
        if let Some(k) = s.file.keys().next() {
            return Err(Error::Config(format!("unknown config key `{k}`")));
        }
        Ok(RunConfig {
            corpus,
            aliases,
            seeds,
            ground_truth,
            out,
            pairs,
            bootstrap,
            prepare,
            alias_case_sensitive,
            ignore_rule,
            max_line_bytes,
            threads,
            dot,
            log_level,
        })
    }

    fn pairs_path(&self) -> Option<PathBuf> {
        self.pairs
            .clone()
            .or_else(|| self.out.as_ref().map(|o| o.join("pairs.ndjson")))
    }
}

/// Errors that should be reported with the usage exit code.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::PatternSyntax { .. } | Error::CoverageDomain(_)
    )
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    let p = p
        .as_deref()
        .ok_or_else(|| Error::Config(format!("missing required --{flag}")))?;
    existing(p, flag)
}

fn existing<'a>(p: &'a Path, flag: &str) -> Result<&'a Path> {
    if !p.exists() {
        return Err(Error::Config(format!("--{flag}: {} does not exist", p.display())));
    }
    Ok(p)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

struct Loaded {
    corpus: PreparedCorpus,
    dict: AliasDictionary,
    ingest: IngestReport,
    aliases: AliasLoadReport,
}

fn load_inputs(cfg: &RunConfig) -> Result<Loaded> {
    let corpus_path = require(&cfg.corpus, "corpus")?;
    let alias_path = require(&cfg.aliases, "aliases")?;
    let (docs, ingest) = ingest_path(
        corpus_path,
        IngestOptions {
            max_line_bytes: cfg.max_line_bytes,
        },
    )?;
    info!(
        "ingested {} of {} records ({} skipped)",
        ingest.kept,
        ingest.read,
        ingest.skipped()
    );
    let (dict, aliases) = load_aliases(alias_path, cfg.alias_case_sensitive)?;
    let corpus = PreparedCorpus::build(docs, &dict, &cfg.prepare);
    Ok(Loaded {
        corpus,
        dict,
        ingest,
        aliases,
    })
}

fn bootstrap_config(cfg: &RunConfig) -> Result<BootstrapConfig> {
    let mut b = cfg.bootstrap.clone();
    if let Some(p) = &cfg.seeds {
        let p = require(&Some(p.clone()), "seeds")?.to_path_buf();
        b.seeds = output::load_seeds(&p, b.max_wildcard_run)?;
    }
    b.check()?;
    Ok(b)
}

fn load_truth(cfg: &RunConfig) -> Result<Option<Vec<TruthRow>>> {
    match &cfg.ground_truth {
        None => Ok(None),
        Some(p) => {
            let p = existing(p, "ground-truth")?;
            let (rows, _) = eval::load_ground_truth(p)?;
            Ok(Some(rows))
        }
    }
}

#[derive(Serialize)]
struct IterationScore {
    iteration: usize,
    precision: Option<f64>,
    recall: Option<f64>,
}

#[derive(Serialize)]
struct Report<'a> {
    ingest: &'a IngestReport,
    aliases: &'a AliasLoadReport,
    prepare: &'a PrepareReport,
    converged: bool,
    iterations: &'a [bootstrap::IterationReport],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    scores: Vec<IterationScore>,
}

fn run_loop(cfg: &RunConfig) -> Result<(Loaded, RunOutput)> {
    let boot = bootstrap_config(cfg)?;
    let loaded = load_inputs(cfg)?;
    let out = bootstrap::run(&loaded.corpus, &boot)?;
    Ok((loaded, out))
}

fn write_dot_files(dir: &Path, out: &RunOutput) -> Result<()> {
    for it in &out.iterations {
        for (name, orientation) in [
            ("quote-first", Orientation::QuoteFirst),
            ("speaker-first", Orientation::SpeakerFirst),
        ] {
            let group: Vec<&Pattern> = it
                .candidates
                .iter()
                .filter(|p| p.orientation() == Some(orientation))
                .collect();
            if group.is_empty() {
                continue;
            }
            let dawg = Dawg::build(group)?;
            let path = dir.join(format!("dawg-{}-{name}.dot", it.iteration));
            fs::write(&path, dawg.to_dot()).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

fn cmd_extract(cfg: &RunConfig) -> Result<()> {
    let out_dir = cfg
        .out
        .clone()
        .ok_or_else(|| Error::Config("missing required --out".into()))?;
    let truth = load_truth(cfg)?;
    let (loaded, out) = run_loop(cfg)?;
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let names: Vec<String> = out.patterns.iter().map(|p| p.pattern.to_string()).collect();
    let lines = output::pair_lines(
        &out.table,
        |i| names.get(i).cloned().unwrap_or_default(),
        &loaded.corpus,
        &loaded.dict,
    );
    output::write_pairs(create(&out_dir.join("pairs.ndjson"))?, &lines)?;
    output::write_pattern_dump(create(&out_dir.join("patterns.tsv"))?, &out.patterns)?;

    let scores = match &truth {
        None => Vec::new(),
        Some(rows) => out
            .iterations
            .iter()
            .map(|it| {
                let y: Vec<_> = it
                    .attribution
                    .iter()
                    .map(|(c, s)| (loaded.corpus.cluster_text(*c).to_string(), s.clone()))
                    .collect();
                let r = eval::evaluate_texts(&y, rows, Averaging::Micro, cfg.ignore_rule, cfg.prepare.grouping);
                IterationScore {
                    iteration: it.iteration,
                    precision: r.precision,
                    recall: r.recall,
                }
            })
            .collect(),
    };
    let report = Report {
        ingest: &loaded.ingest,
        aliases: &loaded.aliases,
        prepare: &loaded.corpus.report,
        converged: out.converged,
        iterations: &out.iterations,
        scores,
    };
    let mut w = create(&out_dir.join("report.json"))?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    w.write_all(b"\n")?;
    w.flush()?;
    if cfg.dot {
        write_dot_files(&out_dir, &out)?;
    }
    println!(
        "{} pairs, {} patterns, {} iterations{}",
        lines.len(),
        out.patterns.len(),
        out.iterations.len(),
        if out.converged { ", converged" } else { "" }
    );
    Ok(())
}

fn cmd_patterns(cfg: &RunConfig) -> Result<()> {
    let (_, out) = run_loop(cfg)?;
    let stdout = io::stdout();
    output::write_pattern_dump(stdout.lock(), &out.patterns)?;
    if cfg.dot {
        let dir = cfg
            .out
            .clone()
            .ok_or_else(|| Error::Config("--dot needs --out".into()))?;
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write_dot_files(&dir, &out)?;
    }
    Ok(())
}

fn cmd_baseline(cfg: &RunConfig) -> Result<()> {
    let out_dir = cfg
        .out
        .clone()
        .ok_or_else(|| Error::Config("missing required --out".into()))?;
    let loaded = load_inputs(cfg)?;
    let table = eval::nearest_speaker_baseline(&loaded.corpus, cfg.bootstrap.window);
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let lines = output::pair_lines(
        &table,
        |_| "nearest-speaker".to_string(),
        &loaded.corpus,
        &loaded.dict,
    );
    output::write_pairs(create(&out_dir.join("pairs.ndjson"))?, &lines)?;
    println!("{} pairs", lines.len());
    Ok(())
}

fn fmt_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"))
}

/// Text rendering of micro and macro scores plus the per-speaker table.
pub fn render_eval(micro: &EvalResult, macro_: &EvalResult) -> String {
    let mut s = String::new();
    s.push_str("mode\tprecision\trecall\n");
    for r in [micro, macro_] {
        let mode = match r.mode {
            Averaging::Micro => "micro",
            Averaging::Macro => "macro",
        };
        s.push_str(&format!("{mode}\t{}\t{}\n", fmt_metric(r.precision), fmt_metric(r.recall)));
    }
    s.push_str("\nspeaker\tprecision\trecall\tcorrect\tjudged\trelevant\n");
    for (sp, sc) in &micro.per_speaker {
        s.push_str(&format!(
            "{sp}\t{}\t{}\t{}\t{}\t{}\n",
            fmt_metric(sc.precision),
            fmt_metric(sc.recall),
            sc.true_positives,
            sc.judged,
            sc.relevant
        ));
    }
    s
}

/// Micro and macro scores of pair lines against ground-truth rows.
pub fn score_lines(
    lines: &[PairLine],
    truth: &[TruthRow],
    rule: IgnoreRule,
    grouping: GroupingOptions,
) -> (EvalResult, EvalResult) {
    let y: Vec<_> = lines
        .iter()
        .map(|l| (l.quotation.clone(), l.speaker_id.clone()))
        .collect();
    (
        eval::evaluate_texts(&y, truth, Averaging::Micro, rule, grouping),
        eval::evaluate_texts(&y, truth, Averaging::Macro, rule, grouping),
    )
}

fn cmd_eval(cfg: &RunConfig) -> Result<()> {
    let pairs = cfg
        .pairs_path()
        .ok_or_else(|| Error::Config("missing required --pairs (or --out)".into()))?;
    let pairs = existing(&pairs, "pairs")?;
    let truth = load_truth(cfg)?.ok_or_else(|| Error::Config("missing required --ground-truth".into()))?;
    if truth.is_empty() {
        return Err(Error::Config("ground truth is empty".into()));
    }
    let lines = output::load_pairs(pairs)?;
    let (micro, macro_) = score_lines(&lines, &truth, cfg.ignore_rule, cfg.prepare.grouping);
    print!("{}", render_eval(&micro, &macro_));
    Ok(())
}

/// CSV with rows `table,k,count` for quotations per speaker and
/// occurrences per quotation.
pub fn render_stats(lines: &[PairLine]) -> String {
    let mut per_speaker: BTreeMap<&str, usize> = BTreeMap::new();
    for l in lines {
        *per_speaker.entry(l.speaker_id.as_str()).or_default() += 1;
    }
    let speaker_counts: Vec<usize> = per_speaker.into_values().collect();
    let occurrence_counts: Vec<usize> = lines.iter().map(|l| l.occurrences.len()).collect();
    let mut s = String::from("table,k,count\n");
    for (name, counts) in [
        ("quotations_per_speaker", &speaker_counts),
        ("occurrences_per_quotation", &occurrence_counts),
    ] {
        for (k, n) in ccdf(counts) {
            s.push_str(&format!("{name},{k},{n}\n"));
        }
    }
    s
}

fn cmd_stats(cfg: &RunConfig) -> Result<()> {
    let pairs = cfg
        .pairs_path()
        .ok_or_else(|| Error::Config("missing required --pairs (or --out)".into()))?;
    let pairs = existing(&pairs, "pairs")?;
    let lines = output::load_pairs(pairs)?;
    print!("{}", render_stats(&lines));
    Ok(())
}

fn dispatch(command: &Command) -> Result<()> {
    let args = match command {
        Command::Extract(a)
        | Command::Eval(a)
        | Command::Baseline(a)
        | Command::Stats(a)
        | Command::Patterns(a) => a,
    };
    let cfg = RunConfig::resolve(args)?;
    let _ = env_logger::Builder::new()
        .parse_filters(&cfg.log_level)
        .target(env_logger::Target::Stderr)
        .try_init();
    let work = || match command {
        Command::Extract(_) => cmd_extract(&cfg),
        Command::Eval(_) => cmd_eval(&cfg),
        Command::Baseline(_) => cmd_baseline(&cfg),
        Command::Stats(_) => cmd_stats(&cfg),
        Command::Patterns(_) => cmd_patterns(&cfg),
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Runs the tool on `argv` and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                warn!("internal error: {e:?}");
                EXIT_INTERNAL
            }
        }
    }
}
