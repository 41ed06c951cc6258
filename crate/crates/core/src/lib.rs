//! Word-frequency lists from a balanced, metadata-tagged corpus.
//!
//! The crate follows one corpus from raw sample files to the statistics
//! used to pick a core vocabulary:
//!
//! * [`ingest`]: sample files with city / field / year metadata, size
//!   checks, and the city × field catalog.
//! * [`normalize`]: transliteration of accented text into an uppercase
//!   ASCII canonical form (`ventrículo` → `VENTRI-CULO`).
//! * [`lemma`]: tokenization with inline annotations (`PARTE(LA)`,
//!   `(SIC)`) and context rules for one-letter conjunctions.
//! * [`freq`]: per-field frequency tables, merging and rank listings.
//! * [`stats`]: coverage blocks against a reference profile, rank ×
//!   probability constancy, significance threshold, dispersion and skew.
//! * [`lexicon`]: four-way category tallies and reference-list overlap.
//! * [`report`] and [`export`]: source matrices, charts and file formats.
//!
//! Statistics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix them to `f64`.

pub mod export;
pub mod freq;
pub mod ingest;
pub mod lemma;
pub mod lexicon;
pub mod normalize;
pub mod num;
pub mod pipeline;
pub mod report;
pub mod stats;
#[cfg(feature = "synth")]
pub mod synth;

pub use freq::{count_sample, merge, rank, FieldCounts, FrequencyTable, LemmaEntry};
pub use ingest::{
    build_catalog, parse_sample, validate_sample_size, Area, CityCode, FieldCode, IngestConfig,
    IngestError, RawSample, SampleCatalog, SampleMetadata, SizeVerdict,
};
pub use lemma::{apply_rules, count_words, tokenize, RuleSet, Token, TokenFlags};
pub use lexicon::{
    categorize, load_lexicon, overlap, Category, CategoryLexicon, CategoryTally, ReferenceWordList,
};
pub use normalize::{is_canonical, normalize, CanonicalText, TransliterationTable};
pub use num::Scalar;
pub use report::{render_coverage_chart, sources_matrix, CoverageChart, SourcesMatrix};
pub use stats::{
    compare_reference, coverage, dispersion, foreign_share, significance_set, skew_flags,
    zipf_constants, SignificanceSet, StatsError,
};

pub type RankedList = freq::RankedList<f64>;
pub type RankedEntry = freq::RankedEntry<f64>;
pub type CoverageCurve = stats::CoverageCurve<f64>;
pub type ReferenceCurve = stats::ReferenceCurve<f64>;
pub type ZipfReport = stats::ZipfReport<f64>;
pub type SignificanceConfig = stats::SignificanceConfig<f64>;
pub type DispersionReport = stats::DispersionReport<f64>;
pub type OverlapReport = lexicon::OverlapReport<f64>;
pub type SizePolicy = ingest::SizePolicy<f64>;
