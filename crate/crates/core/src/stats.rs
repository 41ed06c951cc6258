//! Distribution statistics over a ranked list: coverage blocks against a
//! reference profile, rank × probability constancy, the significance set,
//! and per-field dispersion with skew flagging.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::freq::{FrequencyTable, RankedList};
use crate::ingest::FIELD_COUNT;
use crate::lemma::Token;
use crate::num::{percent, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("corpus has no tokens")]
    EmptyCorpus,
    #[error("cutoffs must be non-empty, positive and strictly ascending")]
    InvalidCutoffs,
    #[error("series lengths differ: {expected} vs {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("top_k {top_k} must be in 1..={len}")]
    TopKOutOfRange { top_k: usize, len: usize },
    #[error("block shares must be non-negative and total at most 100")]
    InvalidShares,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub const DEFAULT_CUTOFFS: [usize; 4] = [1000, 2000, 3000, 4000];

fn check_cutoffs(cutoffs: &[usize]) -> Result<(), StatsError> {
    let ascending = cutoffs.windows(2).all(|w| w[0] < w[1]);
    if cutoffs.is_empty() || cutoffs[0] == 0 || !ascending {
        return Err(StatsError::InvalidCutoffs);
    }
    Ok(())
}

/// Token share of successive rank blocks `(prev_cutoff, cutoff]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve<T> {
    pub cutoffs: Vec<usize>,
    /// Percent of all tokens in each block.
    pub block_shares: Vec<T>,
    /// Percent of all tokens up to each cutoff.
    pub cumulative_shares: Vec<T>,
    /// Exact token counts per block, when computed from a corpus.
    pub block_tokens: Option<Vec<u64>>,
}

impl<T: Scalar> CoverageCurve<T> {
    /// Curve from already-known block percentages, e.g. published figures.
    pub fn from_block_shares(
        cutoffs: Vec<usize>,
        block_shares: Vec<T>,
    ) -> Result<Self, StatsError> {
        check_cutoffs(&cutoffs)?;
        if cutoffs.len() != block_shares.len() {
            return Err(StatsError::ArityMismatch {
                expected: cutoffs.len(),
                found: block_shares.len(),
            });
        }
        let mut running = T::zero();
        let mut cumulative_shares = Vec::with_capacity(block_shares.len());
        for &share in &block_shares {
            if share.is_nan() || share < T::zero() {
                return Err(StatsError::InvalidShares);
            }
            running = running + share;
            cumulative_shares.push(running);
        }
        if running > T::lit(100.0) + T::lit(100.0) * T::epsilon() * T::lit(8.0) {
            return Err(StatsError::InvalidShares);
        }
        Ok(CoverageCurve {
            cutoffs,
            block_shares,
            cumulative_shares,
            block_tokens: None,
        })
    }

    /// Cumulative share at the last cutoff.
    pub fn total_share(&self) -> T {
        self.cumulative_shares
            .last()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Tokens covered by all blocks in a corpus of `corpus_total` tokens.
    pub fn covered_tokens(&self, corpus_total: u64) -> T {
        self.total_share() * T::from_count(corpus_total) / T::lit(100.0)
    }
}

pub fn coverage<T: Scalar>(
    ranked: &RankedList<T>,
    cutoffs: &[usize],
) -> Result<CoverageCurve<T>, StatsError> {
    check_cutoffs(cutoffs)?;
    let total = ranked.corpus_total();
    if total == 0 {
        return Err(StatsError::EmptyCorpus);
    }
    let entries = ranked.entries();
    let mut block_tokens = Vec::with_capacity(cutoffs.len());
    let mut block_shares = Vec::with_capacity(cutoffs.len());
    let mut cumulative_shares = Vec::with_capacity(cutoffs.len());
    let mut start = 0;
    let mut running = 0u64;
    for &cutoff in cutoffs {
        let end = cutoff.min(entries.len());
        let tokens: u64 = entries[start.min(end)..end].iter().map(|e| e.count).sum();
        running += tokens;
        block_tokens.push(tokens);
        block_shares.push(percent(tokens, total));
        // From integer totals, so the last share is exactly 100 when every
        // rank is covered.
        cumulative_shares.push(percent(running, total));
        start = end;
    }
    Ok(CoverageCurve {
        cutoffs: cutoffs.to_vec(),
        block_shares,
        cumulative_shares,
        block_tokens: Some(block_tokens),
    })
}

/// Expected block shares of a reference profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCurve<T> {
    pub name: String,
    pub block_shares: Vec<T>,
}

impl<T: Scalar> ReferenceCurve<T> {
    pub fn new(name: impl Into<String>, block_shares: Vec<T>) -> Self {
        ReferenceCurve {
            name: name.into(),
            block_shares,
        }
    }

    /// 80 / 10 / 3 / 2 percent for the first four thousand-word blocks.
    pub fn lewandowski() -> Self {
        Self::new("L", [80.0, 10.0, 3.0, 2.0].map(T::lit).to_vec())
    }
}

/// Observed minus reference, block by block.
pub fn compare_reference<T: Scalar>(
    curve: &CoverageCurve<T>,
    reference: &ReferenceCurve<T>,
) -> Result<Vec<T>, StatsError> {
    if curve.block_shares.len() != reference.block_shares.len() {
        return Err(StatsError::ArityMismatch {
            expected: curve.block_shares.len(),
            found: reference.block_shares.len(),
        });
    }
    Ok(curve
        .block_shares
        .iter()
        .zip(&reference.block_shares)
        .map(|(&o, &r)| o - r)
        .collect())
}

/// Rank × probability constants for the top ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipfReport<T> {
    /// `constants[i]` is `c_n` for rank `n = i + 1`.
    pub constants: Vec<T>,
    pub geometric_mean: T,
    /// Population standard deviation over arithmetic mean.
    pub coefficient_of_variation: T,
}

/// `c_n = n * count_n / N` for `n <= top_k`.
pub fn zipf_constants<T: Scalar>(
    ranked: &RankedList<T>,
    top_k: usize,
) -> Result<ZipfReport<T>, StatsError> {
    let total = ranked.corpus_total();
    if total == 0 {
        return Err(StatsError::EmptyCorpus);
    }
    if top_k == 0 || top_k > ranked.len() {
        return Err(StatsError::TopKOutOfRange {
            top_k,
            len: ranked.len(),
        });
    }
    let n_total = T::from_count(total);
    let probabilities: Vec<T> = ranked
        .top(top_k)
        .iter()
        .map(|e| T::from_count(e.count) / n_total)
        .collect();
    zipf_constants_from_probabilities(&probabilities)
}

/// Same report from rank-ordered probabilities `P_1, P_2, ...`.
pub fn zipf_constants_from_probabilities<T: Scalar>(
    probabilities: &[T],
) -> Result<ZipfReport<T>, StatsError> {
    if probabilities.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let constants: Vec<T> = probabilities
        .iter()
        .enumerate()
        .map(|(i, &p)| T::from_count(i as u64 + 1) * p)
        .collect();
    let k = T::from_count(constants.len() as u64);
    let mean = constants.iter().fold(T::zero(), |a, &c| a + c) / k;
    let variance = constants
        .iter()
        .fold(T::zero(), |a, &c| a + (c - mean) * (c - mean))
        / k;
    let log_mean = constants.iter().fold(T::zero(), |a, &c| a + c.ln()) / k;
    Ok(ZipfReport {
        geometric_mean: log_mean.exp(),
        coefficient_of_variation: if mean > T::zero() {
            variance.sqrt() / mean
        } else {
            T::zero()
        },
        constants,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceConfig<T> {
    /// Threshold in occurrences per million.
    pub tau: T,
    /// Significant lemmas present in at most this many fields are skewed.
    pub skew_max_fields: usize,
    pub exclude_skewed: bool,
}

impl<T: Scalar> Default for SignificanceConfig<T> {
    fn default() -> Self {
        SignificanceConfig {
            tau: T::lit(50.0),
            skew_max_fields: 2,
            exclude_skewed: true,
        }
    }
}

impl<T: Scalar> SignificanceConfig<T> {
    pub fn new(tau: T, skew_max_fields: usize, exclude_skewed: bool) -> Result<Self, StatsError> {
        if tau.is_nan() || tau <= T::zero() || !tau.is_finite() {
            return Err(StatsError::InvalidConfig(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(1..=FIELD_COUNT).contains(&skew_max_fields) {
            return Err(StatsError::InvalidConfig(format!(
                "skew_max_fields must be in 1..={FIELD_COUNT}, got {skew_max_fields}"
            )));
        }
        Ok(SignificanceConfig {
            tau,
            skew_max_fields,
            exclude_skewed,
        })
    }

    /// Smallest absolute count meeting `tau` in a corpus of `corpus_total`
    /// tokens: `ceil(tau * N / 10^6)`.
    pub fn min_count(&self, corpus_total: u64) -> u64 {
        let exact = self.tau * T::from_count(corpus_total) / T::lit(1.0e6);
        exact.ceil().to_u64().unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignificanceSet {
    /// Included lemmas in rank order.
    pub lemmas: Vec<String>,
    /// Sum of the included lemmas' counts.
    pub covered_tokens: u64,
    pub min_count: u64,
    /// Lemmas meeting the threshold but concentrated in few fields, whether
    /// or not they were excluded.
    pub skewed: BTreeSet<String>,
}

impl SignificanceSet {
    pub fn lemma_set(&self) -> BTreeSet<&str> {
        self.lemmas.iter().map(String::as_str).collect()
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.iter().any(|l| l == lemma)
    }
}

pub fn significance_set<T: Scalar>(
    ranked: &RankedList<T>,
    table: &FrequencyTable,
    config: &SignificanceConfig<T>,
) -> SignificanceSet {
    let min_count = config.min_count(ranked.corpus_total()).max(1);
    let candidates: BTreeSet<String> = ranked
        .entries()
        .iter()
        .take_while(|e| e.count >= min_count)
        .map(|e| e.lemma.clone())
        .collect();
    let skewed = skew_flags(&dispersion::<T>(table), &candidates, config);

    let mut lemmas = Vec::new();
    let mut covered_tokens = 0;
    for e in ranked.entries().iter().take_while(|e| e.count >= min_count) {
        if config.exclude_skewed && skewed.contains(&e.lemma) {
            continue;
        }
        lemmas.push(e.lemma.clone());
        covered_tokens += e.count;
    }
    SignificanceSet {
        lemmas,
        covered_tokens,
        min_count,
        skewed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion<T> {
    /// Fields with a nonzero count.
    pub fields_present: usize,
    /// Share of the lemma's occurrences in its two strongest fields.
    pub top2_share: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionReport<T> {
    pub entries: BTreeMap<String, Dispersion<T>>,
}

impl<T> DispersionReport<T> {
    pub fn get(&self, lemma: &str) -> Option<&Dispersion<T>> {
        self.entries.get(lemma)
    }
}

pub fn dispersion<T: Scalar>(table: &FrequencyTable) -> DispersionReport<T> {
    let entries = table
        .iter()
        .map(|(lemma, entry)| {
            let mut counts = entry.fields.0;
            counts.sort_unstable_by(|a, b| b.cmp(a));
            let total = entry.total();
            let top2_share = if total == 0 {
                T::zero()
            } else {
                T::from_count(counts[0] + counts[1]) / T::from_count(total)
            };
            (
                lemma.to_owned(),
                Dispersion {
                    fields_present: entry.fields.fields_present(),
                    top2_share,
                },
            )
        })
        .collect();
    DispersionReport { entries }
}

/// Significant lemmas present in at most `skew_max_fields` fields.
pub fn skew_flags<T, S>(
    report: &DispersionReport<T>,
    significant: &BTreeSet<S>,
    config: &SignificanceConfig<T>,
) -> BTreeSet<String>
where
    S: AsRef<str> + Ord,
{
    significant
        .iter()
        .map(AsRef::as_ref)
        .filter(|lemma| {
            report
                .get(lemma)
                .is_some_and(|d| d.fields_present <= config.skew_max_fields)
        })
        .map(str::to_owned)
        .collect()
}

/// Percent of corpus tokens carrying each foreign-language tag.
pub fn foreign_share<T: Scalar>(table: &FrequencyTable) -> BTreeMap<String, T> {
    let mut flagged: BTreeMap<String, u64> = BTreeMap::new();
    for (_, entry) in table.iter() {
        if let Some(lang) = &entry.foreign {
            *flagged.entry(lang.clone()).or_insert(0) += entry.total();
        }
    }
    flagged
        .into_iter()
        .map(|(lang, n)| (lang, percent(n, table.corpus_total())))
        .collect()
}

/// [`foreign_share`] over a raw token stream.
pub fn foreign_share_tokens<T: Scalar>(tokens: &[Token]) -> BTreeMap<String, T> {
    let mut flagged: BTreeMap<String, u64> = BTreeMap::new();
    for token in tokens {
        if let Some(lang) = &token.flags.foreign {
            *flagged.entry(lang.clone()).or_insert(0) += 1;
        }
    }
    flagged
        .into_iter()
        .map(|(lang, n)| (lang, percent(n, tokens.len() as u64)))
        .collect()
}

/// SIC-flagged material as a share of types and of tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct SicShare<T> {
    pub sic_types: u64,
    pub sic_tokens: u64,
    pub type_share: T,
    pub token_share: T,
}

pub fn sic_share<T: Scalar>(table: &FrequencyTable) -> SicShare<T> {
    let (sic_types, sic_tokens) = table
        .iter()
        .filter(|(_, e)| e.sic > 0)
        .fold((0u64, 0u64), |(t, n), (_, e)| (t + 1, n + e.sic));
    SicShare {
        sic_types,
        sic_tokens,
        type_share: percent(sic_types, table.len() as u64),
        token_share: percent(sic_tokens, table.corpus_total()),
    }
}
