//! Batch driver for the lexcorpus pipeline.
//!
//! Every subcommand reads the sample files, builds what it needs in memory,
//! and only then writes its outputs: each file goes to a temporary name in
//! the output directory and all of them are renamed once every write has
//! succeeded.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use lexcorpus::export;
use lexcorpus::freq::{rank, RankedList};
use lexcorpus::ingest::{
    build_catalog_with, parse_sample_with_fallback_id, validate_sample_size, IngestConfig,
    IngestError, RawSample, SampleCatalog, SizePolicy, SizeVerdict, SynchronicWindow,
};
use lexcorpus::lemma::{RuleError, RuleSet, TokenizerConfig};
use lexcorpus::lexicon::{
    categorize, load_lexicon_with, overlap, Category, LexiconError, ReferenceWordList,
};
use lexcorpus::normalize::{TableError, TransliterationTable};
use lexcorpus::pipeline::{count_corpus, CorpusCounts, LemmaPipeline, Parallelism, SampleError};
use lexcorpus::report::{render_coverage_chart, sources_matrix, ReportError};
use lexcorpus::stats::{
    compare_reference, coverage, dispersion, foreign_share, sic_share, significance_set,
    zipf_constants, ReferenceCurve, SignificanceConfig, StatsError, DEFAULT_CUTOFFS,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Sample { path: PathBuf, source: IngestError },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("transliteration table: {0}")]
    Table(#[from] TableError),
    #[error("rule file: {0}")]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Tokenize(#[from] SampleError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Config(String),
    #[error("sample {id} has {words} words, outside twice the size tolerance")]
    SampleSize { id: String, words: usize },
    #[error("no sample files found")]
    NoInput,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ingest,
    Analyze,
    Significance,
    Categories,
    Compare,
    Report,
}

/// All run parameters; numeric fields are validated by [`RunConfig::validate`].
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub table: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub extra_cities: Vec<String>,
    pub window_start: i32,
    pub window_end: i32,
    pub size_tolerance: f64,
    pub threshold_per_million: f64,
    pub skew_max_fields: usize,
    pub keep_skewed: bool,
    pub cutoffs: Vec<usize>,
    pub reference_curve: Vec<f64>,
    pub zipf_top_k: usize,
    pub top_n: usize,
    pub reference_limit: Option<usize>,
    /// 1 forces serial processing; 0 uses every core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            out_dir: PathBuf::from("."),
            table: None,
            rules: None,
            lexicon: None,
            reference: None,
            extra_cities: Vec::new(),
            window_start: 1979,
            window_end: 1989,
            size_tolerance: 0.02,
            threshold_per_million: 50.0,
            skew_max_fields: 2,
            keep_skewed: false,
            cutoffs: DEFAULT_CUTOFFS.to_vec(),
            reference_curve: vec![80.0, 10.0, 3.0, 2.0],
            zipf_top_k: 1000,
            top_n: 2000,
            reference_limit: None,
            threads: 0,
        }
    }
}

/// Resolved, validated run state.
struct Context {
    ingest: IngestConfig,
    pipeline: LemmaPipeline,
    size: SizePolicy<f64>,
    significance: SignificanceConfig<f64>,
    reference: ReferenceCurve<f64>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

impl RunConfig {
    fn validate(&self) -> Result<Context, CliError> {
        let mut ingest = IngestConfig {
            window: SynchronicWindow::new(self.window_start, self.window_end)?,
            ..IngestConfig::default()
        };
        for city in &self.extra_cities {
            ingest.registry.register(city)?;
        }
        let table = match &self.table {
            Some(p) => TransliterationTable::from_tsv(&read_text(p)?)?,
            None => TransliterationTable::default(),
        };
        let rules = match &self.rules {
            Some(p) => RuleSet::from_tsv(&read_text(p)?)?,
            None => RuleSet::default_rules(),
        };
        if self.cutoffs.len() != self.reference_curve.len() {
            return Err(CliError::Config(format!(
                "{} cutoffs but {} reference values",
                self.cutoffs.len(),
                self.reference_curve.len()
            )));
        }
        if self.zipf_top_k == 0 {
            return Err(CliError::Config("zipf top-k must be at least 1".into()));
        }
        if self.top_n == 0 {
            return Err(CliError::Config("top-n must be at least 1".into()));
        }
        Ok(Context {
            ingest,
            pipeline: LemmaPipeline {
                table,
                rules,
                tokenizer: TokenizerConfig::default(),
            },
            size: SizePolicy::new(self.size_tolerance)?,
            significance: SignificanceConfig::new(
                self.threshold_per_million,
                self.skew_max_fields,
                !self.keep_skewed,
            )?,
            reference: ReferenceCurve::new("L", self.reference_curve.clone()),
        })
    }
}

/// Output files staged in memory, in write order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Artifacts(pub Vec<(String, String)>);

impl Artifacts {
    fn add(&mut self, name: &str, content: String) {
        self.0.push((name.to_owned(), content));
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }

    pub fn names(&self) -> Vec<&str> {
        self.0.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Writes every file under `dir`, replacing earlier versions only after
    /// all of them were written in full.
    pub fn commit(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut staged = Vec::with_capacity(self.0.len());
        for (name, content) in &self.0 {
            let mut tmp = tempfile::Builder::new()
                .prefix(&format!(".{name}."))
                .tempfile_in(dir)
                .map_err(io_err(dir))?;
            tmp.write_all(content.as_bytes())
                .map_err(io_err(tmp.path()))?;
            tmp.as_file().sync_all().map_err(io_err(tmp.path()))?;
            staged.push((tmp, dir.join(name)));
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, target) in staged {
            tmp.persist(&target).map_err(|e| CliError::Io {
                path: target.clone(),
                source: e.error,
            })?;
            written.push(target);
        }
        Ok(written)
    }
}

fn sample_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut paths = BTreeSet::new();
    for input in inputs {
        let meta = fs::metadata(input).map_err(io_err(input))?;
        if meta.is_dir() {
            for entry in WalkDir::new(input) {
                let entry = entry.map_err(|e| CliError::Io {
                    path: input.clone(),
                    source: e.into(),
                })?;
                let is_txt = entry.path().extension().is_some_and(|e| e == "txt");
                if entry.file_type().is_file() && is_txt {
                    paths.insert(entry.into_path());
                }
            }
        } else {
            paths.insert(input.clone());
        }
    }
    if paths.is_empty() {
        return Err(CliError::NoInput);
    }
    Ok(paths.into_iter().collect())
}

fn load_catalog(config: &RunConfig, ctx: &Context) -> Result<SampleCatalog, CliError> {
    let mut samples = Vec::new();
    for path in sample_paths(&config.inputs)? {
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        let stem = path.file_stem().and_then(|s| s.to_str());
        let sample =
            parse_sample_with_fallback_id(&bytes, stem, &ctx.ingest).map_err(|source| {
                CliError::Sample {
                    path: path.clone(),
                    source,
                }
            })?;
        samples.push(sample);
    }
    Ok(build_catalog_with(samples, &ctx.ingest.registry)?)
}

fn count(
    config: &RunConfig,
    ctx: &Context,
    samples: &[RawSample],
) -> Result<CorpusCounts, CliError> {
    let counts = match config.threads {
        1 => count_corpus(samples, &ctx.pipeline, Parallelism::Serial)?,
        0 => count_corpus(samples, &ctx.pipeline, Parallelism::Parallel)?,
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| count_corpus(samples, &ctx.pipeline, Parallelism::Parallel))?,
    };
    Ok(counts)
}

/// Builds every output of `command` in memory without touching the disk
/// beyond reading inputs.
pub fn build_artifacts(config: &RunConfig, command: Command) -> Result<Artifacts, CliError> {
    let ctx = config.validate()?;
    let catalog = load_catalog(config, &ctx)?;
    let samples: Vec<RawSample> = catalog.samples().cloned().collect();
    let mut out = Artifacts::default();

    if command == Command::Ingest {
        let counts = count(config, &ctx, &samples)?;
        let mut listing = String::from("id\tcity\tfield\tarea\tyear\twaiver\twords\tsize\n");
        for s in &samples {
            let m = &s.metadata;
            let words = counts.word_counts[&m.id];
            let verdict = validate_sample_size(words, &ctx.size);
            if verdict == SizeVerdict::Reject {
                return Err(CliError::SampleSize {
                    id: m.id.clone(),
                    words,
                });
            }
            if verdict == SizeVerdict::Warn {
                eprintln!("warning: sample {} has {words} words", m.id);
            }
            writeln!(
                listing,
                "{}\t{}\t{}\t{}\t{}\t{}\t{words}\t{verdict:?}",
                m.id,
                m.city,
                m.field,
                m.area,
                m.year,
                if m.waiver { "yes" } else { "no" },
            )
            .unwrap();
        }
        out.add("catalog.tsv", sources_matrix(&catalog).to_tsv());
        out.add("samples.tsv", listing);
        return Ok(out);
    }

    let counts = count(config, &ctx, &samples)?;
    let table = &counts.table;
    let ranked: RankedList<f64> = rank(table);

    match command {
        Command::Ingest => unreachable!("handled above"),
        Command::Analyze => {
            let curve = coverage(&ranked, &config.cutoffs)?;
            let zipf = zipf_constants(&ranked, config.zipf_top_k.min(ranked.len()))?;
            let deviations = compare_reference(&curve, &ctx.reference)?;
            let sic = sic_share::<f64>(table);

            let mut summary = String::new();
            writeln!(summary, "samples\t{}", catalog.len()).unwrap();
            writeln!(summary, "tokens\t{}", table.corpus_total()).unwrap();
            writeln!(summary, "types\t{}", table.len()).unwrap();
            writeln!(summary, "zipf_top_k\t{}", zipf.constants.len()).unwrap();
            writeln!(summary, "zipf_geometric_mean\t{}", zipf.geometric_mean).unwrap();
            writeln!(summary, "zipf_cv\t{}", zipf.coefficient_of_variation).unwrap();
            for (cutoff, d) in config.cutoffs.iter().zip(&deviations) {
                writeln!(summary, "deviation_{cutoff}\t{d}").unwrap();
            }
            writeln!(summary, "sic_types\t{}", sic.sic_types).unwrap();
            writeln!(summary, "sic_tokens\t{}", sic.sic_tokens).unwrap();
            writeln!(summary, "sic_type_share\t{}", sic.type_share).unwrap();
            writeln!(summary, "sic_token_share\t{}", sic.token_share).unwrap();
            for (lang, share) in foreign_share::<f64>(table) {
                writeln!(summary, "foreign_share_{lang}\t{share}").unwrap();
            }
            for (c, n) in &counts.diagnostics.unmapped {
                writeln!(summary, "unmapped_U+{:04X}\t{n}", *c as u32).unwrap();
            }

            out.add("rank.tsv", export::rank_listing_tsv(&ranked));
            out.add("alpha.tsv", export::alphabetical_listing_tsv(&ranked));
            out.add("coverage.csv", export::coverage_csv(&curve));
            out.add("zipf.csv", export::zipf_csv(&zipf));
            out.add(
                "dispersion.tsv",
                export::dispersion_tsv(table, &dispersion::<f64>(table)),
            );
            out.add("summary.txt", summary);
        }
        Command::Significance => {
            let set = significance_set(&ranked, table, &ctx.significance);
            let mut summary = String::new();
            writeln!(summary, "tau_per_million\t{}", ctx.significance.tau).unwrap();
            writeln!(summary, "corpus_tokens\t{}", table.corpus_total()).unwrap();
            writeln!(summary, "min_count\t{}", set.min_count).unwrap();
            writeln!(summary, "included\t{}", set.lemmas.len()).unwrap();
            writeln!(summary, "covered_tokens\t{}", set.covered_tokens).unwrap();
            writeln!(
                summary,
                "skew_max_fields\t{}",
                ctx.significance.skew_max_fields
            )
            .unwrap();
            writeln!(
                summary,
                "exclude_skewed\t{}",
                ctx.significance.exclude_skewed
            )
            .unwrap();
            for lemma in &set.skewed {
                writeln!(summary, "skewed\t{lemma}").unwrap();
            }
            out.add(
                "significance.tsv",
                export::significance_listing_tsv(&ranked, &set.lemmas, &set.skewed),
            );
            out.add("significance_summary.txt", summary);
        }
        Command::Categories => {
            let path = config
                .lexicon
                .as_ref()
                .ok_or_else(|| CliError::Config("categories needs --lexicon".into()))?;
            let lexicon = load_lexicon_with(&read_text(path)?, &ctx.pipeline.table)?;
            let set = significance_set(&ranked, table, &ctx.significance);
            let tally = categorize(set.lemmas.iter().map(String::as_str), &lexicon);
            let mut text = String::from("category\tcount\n");
            for c in Category::ALL {
                writeln!(text, "{c}\t{}", tally.count(c)).unwrap();
            }
            writeln!(text, "UNCATEGORIZED\t{}", tally.uncategorized.len()).unwrap();
            let mut unlisted = String::new();
            for lemma in &tally.uncategorized {
                writeln!(unlisted, "{lemma}").unwrap();
            }
            out.add("categories.tsv", text);
            out.add("uncategorized.txt", unlisted);
        }
        Command::Compare => {
            let path = config
                .reference
                .as_ref()
                .ok_or_else(|| CliError::Config("compare needs --reference".into()))?;
            let mut reference =
                ReferenceWordList::parse_with(&read_text(path)?, &ctx.pipeline.table);
            if let Some(limit) = config.reference_limit {
                reference = reference.truncated(limit);
            }
            let report = overlap(&reference, &ranked, config.top_n)?;
            out.add("overlap.txt", report.to_text());
        }
        Command::Report => {
            let curve = coverage(&ranked, &config.cutoffs)?;
            let chart = render_coverage_chart(&curve, &ctx.reference)?;
            let matrix = sources_matrix(&catalog);
            out.add("sources.tsv", matrix.to_tsv());
            out.add("deficits.tsv", matrix.deficits_tsv());
            out.add("coverage_chart.txt", chart.text);
            out.add("coverage_series.csv", chart.data_csv);
        }
    }
    Ok(out)
}

/// Runs `command` and writes its outputs to `config.out_dir`.
pub fn run(config: &RunConfig, command: Command) -> Result<Vec<PathBuf>, CliError> {
    build_artifacts(config, command)?.commit(&config.out_dir)
}
