//! Sample → tokens → frequency table, fanned out over samples.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::freq::{count_sample, merge, FrequencyTable};
use crate::ingest::RawSample;
use crate::lemma::{apply_rules, tokenize_with, RuleSet, Token, TokenizeError, TokenizerConfig};
use crate::normalize::{normalize_with_diagnostics, NormalizeDiagnostics, TransliterationTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("sample {id}: {source}")]
pub struct SampleError {
    pub id: String,
    pub source: TokenizeError,
}

/// Everything needed to turn sample text into lemmas.
#[derive(Debug, Clone)]
pub struct LemmaPipeline {
    pub table: TransliterationTable,
    pub rules: RuleSet,
    pub tokenizer: TokenizerConfig,
}

impl Default for LemmaPipeline {
    fn default() -> Self {
        LemmaPipeline {
            table: TransliterationTable::default(),
            rules: RuleSet::default_rules(),
            tokenizer: TokenizerConfig::default(),
        }
    }
}

impl LemmaPipeline {
    /// normalize → tokenize → apply_rules.
    pub fn lemmatize(
        &self,
        text: &str,
    ) -> Result<(Vec<Token>, NormalizeDiagnostics), TokenizeError> {
        let (canonical, diagnostics) = normalize_with_diagnostics(text, &self.table);
        let tokens = tokenize_with(&canonical, &self.tokenizer)?;
        Ok((apply_rules(&tokens, &self.rules), diagnostics))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    /// Use the ambient rayon pool.
    #[default]
    Parallel,
}

/// Result of processing a whole corpus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusCounts {
    pub table: FrequencyTable,
    /// Words per sample id.
    pub word_counts: BTreeMap<String, usize>,
    pub diagnostics: NormalizeDiagnostics,
}

impl CorpusCounts {
    fn merge(mut self, other: CorpusCounts) -> CorpusCounts {
        self.table = merge(self.table, other.table);
        self.word_counts.extend(other.word_counts);
        self.diagnostics.absorb(&other.diagnostics);
        self
    }
}

fn process(sample: &RawSample, pipeline: &LemmaPipeline) -> Result<CorpusCounts, SampleError> {
    let (tokens, diagnostics) = pipeline
        .lemmatize(&sample.body)
        .map_err(|source| SampleError {
            id: sample.metadata.id.clone(),
            source,
        })?;
    let mut word_counts = BTreeMap::new();
    word_counts.insert(sample.metadata.id.clone(), tokens.len());
    Ok(CorpusCounts {
        table: count_sample(&tokens, sample.metadata.field),
        word_counts,
        diagnostics,
    })
}

/// Counts every sample. On failure, reports the first failing sample in
/// input order regardless of parallelism.
pub fn count_corpus(
    samples: &[RawSample],
    pipeline: &LemmaPipeline,
    parallelism: Parallelism,
) -> Result<CorpusCounts, SampleError> {
    match parallelism {
        Parallelism::Serial => samples
            .iter()
            .map(|s| process(s, pipeline))
            .try_fold(CorpusCounts::default(), |acc, r| Ok(acc.merge(r?))),
        Parallelism::Parallel => {
            let results: Vec<_> = samples.par_iter().map(|s| process(s, pipeline)).collect();
            let per_sample = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(per_sample
                .into_par_iter()
                .reduce(CorpusCounts::default, CorpusCounts::merge))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_sample, IngestConfig};

    fn sample(id: &str, field: &str, body: &str) -> RawSample {
        let text = format!("#ID: {id}\n#CITY: LIMA\n#FIELD: {field}\n#YEAR: 1985\n\n{body}");
        parse_sample(text.as_bytes(), &IngestConfig::default()).unwrap()
    }

    #[test]
    fn lemmatizes_end_to_end() {
        let (tokens, diag) = LemmaPipeline::default()
            .lemmatize("Padre e hijos, la parte(la) del ventrículo; kasa (sic).")
            .unwrap();
        let lemmas: Vec<&str> = tokens.iter().map(|t| t.lemma.as_str()).collect();
        assert_eq!(
            lemmas,
            [
                "PADRE",
                "E(CONJ)",
                "HIJOS",
                "LA",
                "PARTE(LA)",
                "DEL",
                "VENTRI-CULO",
                "KASA"
            ]
        );
        assert!(tokens[7].flags.sic);
        assert_eq!(diag.total(), 0);
    }

    #[test]
    fn serial_equals_parallel() {
        let samples = vec![
            sample("1", "A09", "el perro y el gato"),
            sample("2", "n02", "uno o dos perros"),
            sample("3", "A09", "el gato"),
        ];
        let p = LemmaPipeline::default();
        let a = count_corpus(&samples, &p, Parallelism::Serial).unwrap();
        let b = count_corpus(&samples, &p, Parallelism::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.table.count("EL"), 3);
        assert_eq!(a.table.count("O(DISJ)"), 1);
        assert_eq!(a.word_counts["2"], 4);
    }

    #[test]
    fn first_error_in_input_order() {
        let samples = vec![
            sample("1", "A09", "bien"),
            sample("2", "A09", "(sic) mal"),
            sample("3", "A09", "mal (otro"),
        ];
        let p = LemmaPipeline::default();
        for mode in [Parallelism::Serial, Parallelism::Parallel] {
            let err = count_corpus(&samples, &p, mode).unwrap_err();
            assert_eq!(err.id, "2");
        }
    }
}
