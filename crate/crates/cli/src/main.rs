use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use lexcorpus_cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(
    name = "lexcorpus",
    version,
    about = "Word-frequency lists from a balanced corpus"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Validate samples and write the city x field catalog
    Ingest,
    /// Rank and alphabetic listings, coverage, rank constants, dispersion
    Analyze,
    /// Words at or above the per-million threshold, with skew flags
    Significance,
    /// Category tally of the significant words (needs --lexicon)
    Categories,
    /// Overlap of a reference word list with the top ranks (needs --reference)
    Compare,
    /// Sources matrix and coverage chart
    Report,
}

#[derive(Args)]
struct Opts {
    /// Sample files or directories (searched for *.txt)
    #[arg(short, long = "input", global = true, required = false)]
    inputs: Vec<PathBuf>,
    #[arg(short, long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Transliteration table (source<TAB>replacement)
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Lemma rule file (target<TAB>left<TAB>right<TAB>replacement)
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// Category lexicon (lemma<TAB>category)
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Reference word list, one word per line
    #[arg(long, global = true)]
    reference: Option<PathBuf>,
    /// Additional accepted city code
    #[arg(long = "city", global = true)]
    extra_cities: Vec<String>,
    #[arg(long, global = true, default_value_t = 1979)]
    window_start: i32,
    #[arg(long, global = true, default_value_t = 1989)]
    window_end: i32,
    #[arg(long, global = true, default_value_t = 0.02)]
    size_tolerance: f64,
    #[arg(long, global = true, default_value_t = 50.0)]
    threshold_per_million: f64,
    #[arg(long, global = true, default_value_t = 2)]
    skew_max_fields: usize,
    /// Keep skewed words in the significance set
    #[arg(long, global = true)]
    keep_skewed: bool,
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "1000,2000,3000,4000"
    )]
    cutoffs: Vec<usize>,
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "80,10,3,2"
    )]
    reference_curve: Vec<f64>,
    #[arg(long, global = true, default_value_t = 1000)]
    zipf_top_k: usize,
    /// Rank cutoff for the overlap comparison
    #[arg(long, global = true, default_value_t = 2000)]
    top_n: usize,
    /// Use only the first N reference words
    #[arg(long, global = true)]
    reference_limit: Option<usize>,
    /// Worker threads; 1 is serial, 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

impl From<Opts> for RunConfig {
    fn from(o: Opts) -> Self {
        RunConfig {
            inputs: o.inputs,
            out_dir: o.out_dir,
            table: o.table,
            rules: o.rules,
            lexicon: o.lexicon,
            reference: o.reference,
            extra_cities: o.extra_cities,
            window_start: o.window_start,
            window_end: o.window_end,
            size_tolerance: o.size_tolerance,
            threshold_per_million: o.threshold_per_million,
            skew_max_fields: o.skew_max_fields,
            keep_skewed: o.keep_skewed,
            cutoffs: o.cutoffs,
            reference_curve: o.reference_curve,
            zipf_top_k: o.zipf_top_k,
            top_n: o.top_n,
            reference_limit: o.reference_limit,
            threads: o.threads,
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    if cli.opts.inputs.is_empty() {
        Cli::command()
            .error(
                ErrorKind::MissingRequiredArgument,
                "at least one --input is required",
            )
            .exit();
    }
    let command = match cli.command {
        Sub::Ingest => Command::Ingest,
        Sub::Analyze => Command::Analyze,
        Sub::Significance => Command::Significance,
        Sub::Categories => Command::Categories,
        Sub::Compare => Command::Compare,
        Sub::Report => Command::Report,
    };
    match run(&cli.opts.into(), command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
