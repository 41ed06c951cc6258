//! Four-way word categories and overlap against external word lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freq::RankedList;
use crate::lemma::split_disambiguator;
use crate::normalize::{normalize, TransliterationTable};
use crate::num::{percent, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: expected `lemma<TAB>category`")]
    Malformed { line: usize },
    #[error("line {line}: unknown category {category:?}")]
    UnknownCategory { line: usize, category: String },
    #[error("line {line}: {lemma} already listed as {previous}")]
    ConflictingDuplicate {
        line: usize,
        lemma: String,
        previous: Category,
    },
    #[error("reference word list is empty")]
    EmptyReference,
    #[error("top_n must be at least 1")]
    InvalidTopN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Operator,
    General,
    Drawable,
    Qualities,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Operator,
        Category::General,
        Category::Drawable,
        Category::Qualities,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Operator => "OPERATOR",
            Category::General => "GENERAL",
            Category::Drawable => "DRAWABLE",
            Category::Qualities => "QUALITIES",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "OPERATOR" => Ok(Category::Operator),
            "GENERAL" => Ok(Category::General),
            "DRAWABLE" | "PICTURED" => Ok(Category::Drawable),
            "QUALITIES" => Ok(Category::Qualities),
            other => Err(other.to_owned()),
        }
    }
}

/// Canonicalizes one word-list entry; `None` for entries that normalize to
/// nothing.
fn canonical_entry(raw: &str, table: &TransliterationTable) -> Option<String> {
    let canon = normalize(raw.trim(), table).into_string();
    let trimmed = canon.trim();
    (!trimmed.is_empty()).then(|| trimmed.to_owned())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryLexicon {
    entries: BTreeMap<String, Category>,
}

impl CategoryLexicon {
    pub fn get(&self, lemma: &str) -> Option<Category> {
        self.entries.get(lemma).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads `lemma<TAB>category` rows with the default transliteration table.
pub fn load_lexicon(content: &str) -> Result<CategoryLexicon, LexiconError> {
    load_lexicon_with(content, &TransliterationTable::default())
}

/// Reads `lemma<TAB>category` rows. Lemmas are canonicalized; blank lines
/// and `#` comments are skipped. Repeating a lemma with the same category
/// is allowed.
pub fn load_lexicon_with(
    content: &str,
    table: &TransliterationTable,
) -> Result<CategoryLexicon, LexiconError> {
    let mut entries = BTreeMap::new();
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (raw_lemma, raw_category) = line
            .split_once('\t')
            .ok_or(LexiconError::Malformed { line: line_no })?;
        let lemma =
            canonical_entry(raw_lemma, table).ok_or(LexiconError::Malformed { line: line_no })?;
        let category: Category =
            raw_category
                .trim()
                .parse()
                .map_err(|category| LexiconError::UnknownCategory {
                    line: line_no,
                    category,
                })?;
        match entries.insert(lemma.clone(), category) {
            Some(previous) if previous != category => {
                return Err(LexiconError::ConflictingDuplicate {
                    line: line_no,
                    lemma,
                    previous,
                })
            }
            _ => {}
        }
    }
    Ok(CategoryLexicon { entries })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryTally {
    pub counts: BTreeMap<Category, usize>,
    /// Lemmas with neither a lexicon entry nor the adverb suffix, sorted.
    pub uncategorized: Vec<String>,
}

impl CategoryTally {
    pub fn count(&self, category: Category) -> usize {
        self.counts.get(&category).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum::<usize>() + self.uncategorized.len()
    }
}

const ADVERB_SUFFIX: &str = "MENTE";

/// Category of one lemma: the lexicon entry if any, else QUALITIES for
/// `-MENTE` adverbs.
pub fn classify(lemma: &str, lexicon: &CategoryLexicon) -> Option<Category> {
    if let Some(c) = lexicon.get(lemma) {
        return Some(c);
    }
    let (base, _) = split_disambiguator(lemma);
    // MENTE alone is the noun.
    (base.len() > ADVERB_SUFFIX.len() && base.ends_with(ADVERB_SUFFIX))
        .then_some(Category::Qualities)
}

pub fn categorize<'a, I>(significant: I, lexicon: &CategoryLexicon) -> CategoryTally
where
    I: IntoIterator<Item = &'a str>,
{
    let unique: BTreeSet<&str> = significant.into_iter().collect();
    let mut tally = CategoryTally::default();
    for c in Category::ALL {
        tally.counts.insert(c, 0);
    }
    for lemma in unique {
        match classify(lemma, lexicon) {
            Some(c) => *tally.counts.entry(c).or_insert(0) += 1,
            None => tally.uncategorized.push(lemma.to_owned()),
        }
    }
    tally
}

/// Ordered, de-duplicated canonical word list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceWordList {
    words: Vec<String>,
}

impl ReferenceWordList {
    /// One word per line, canonicalized with the default table.
    pub fn parse(content: &str) -> Self {
        Self::parse_with(content, &TransliterationTable::default())
    }

    pub fn parse_with(content: &str, table: &TransliterationTable) -> Self {
        Self::from_words(content.lines().filter(|l| !l.starts_with('#')), table)
    }

    pub fn from_words<'a, I>(words: I, table: &TransliterationTable) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut seen = BTreeSet::new();
        let words = words
            .into_iter()
            .filter_map(|w| canonical_entry(w, table))
            .filter(|w| seen.insert(w.clone()))
            .collect();
        ReferenceWordList { words }
    }

    /// Keeps the first `n` entries.
    pub fn truncated(&self, n: usize) -> Self {
        ReferenceWordList {
            words: self.words.iter().take(n).cloned().collect(),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport<T> {
    pub reference_size: usize,
    pub top_n: usize,
    pub matched: usize,
    /// `matched * 100 / reference_size`.
    pub percent: T,
}

impl<T: Scalar> OverlapReport<T> {
    pub fn to_text(&self) -> String {
        format!(
            "reference_size\t{}\ntop_n\t{}\nmatched\t{}\noverlap_percent\t{}\n",
            self.reference_size, self.top_n, self.matched, self.percent
        )
    }

    pub fn from_text(text: &str) -> Option<Self> {
        let fields: BTreeMap<&str, &str> =
            text.lines().filter_map(|l| l.split_once('\t')).collect();
        Some(OverlapReport {
            reference_size: fields.get("reference_size")?.parse().ok()?,
            top_n: fields.get("top_n")?.parse().ok()?,
            matched: fields.get("matched")?.parse().ok()?,
            percent: fields.get("overlap_percent")?.parse().ok()?,
        })
    }
}

/// Share of the reference list found among the corpus's first `top_n` ranks.
pub fn overlap<T: Scalar>(
    reference: &ReferenceWordList,
    ranked: &RankedList<T>,
    top_n: usize,
) -> Result<OverlapReport<T>, LexiconError> {
    if reference.is_empty() {
        return Err(LexiconError::EmptyReference);
    }
    if top_n == 0 {
        return Err(LexiconError::InvalidTopN);
    }
    let top: BTreeSet<&str> = ranked.top(top_n).iter().map(|e| e.lemma.as_str()).collect();
    let matched = reference
        .words()
        .iter()
        .filter(|w| top.contains(w.as_str()))
        .count();
    Ok(OverlapReport {
        reference_size: reference.len(),
        top_n,
        matched,
        percent: percent(matched as u64, reference.len() as u64),
    })
}
