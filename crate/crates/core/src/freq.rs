//! Per-field frequency tables and deterministic rank listings.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use crate::ingest::{FieldCode, FIELD_COUNT};
use crate::lemma::{Token, TokenFlags};
use crate::num::{per_million, Scalar};

/// Occurrence counts across the 15 fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldCounts(pub [u64; FIELD_COUNT]);

impl FieldCounts {
    pub fn get(&self, field: FieldCode) -> u64 {
        self.0[field.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Number of fields with a nonzero count.
    pub fn fields_present(&self) -> usize {
        self.0.iter().filter(|&&n| n > 0).count()
    }
}

impl AddAssign<&FieldCounts> for FieldCounts {
    fn add_assign(&mut self, rhs: &FieldCounts) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaEntry {
    pub fields: FieldCounts,
    /// Occurrences carrying the SIC flag.
    pub sic: u64,
    pub foreign: Option<String>,
}

impl LemmaEntry {
    pub fn total(&self) -> u64 {
        self.fields.total()
    }
}

/// Lemma → per-field counts, plus the corpus token total.
///
/// Every lemma's total is the sum of its field counts and the corpus total
/// is the sum of all lemma totals; the only mutators maintain both.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyTable {
    entries: BTreeMap<String, LemmaEntry>,
    corpus_total: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one occurrence of `lemma` in `field`.
    pub fn record(&mut self, lemma: &str, field: FieldCode, flags: &TokenFlags) {
        self.add_n(lemma, field, flags, 1);
    }

    fn add_n(&mut self, lemma: &str, field: FieldCode, flags: &TokenFlags, n: u64) {
        if n == 0 {
            return;
        }
        let entry = match self.entries.get_mut(lemma) {
            Some(e) => e,
            None => self.entries.entry(lemma.to_owned()).or_default(),
        };
        entry.fields.0[field.index()] += n;
        if flags.sic {
            entry.sic += n;
        }
        if entry.foreign.is_none() {
            entry.foreign.clone_from(&flags.foreign);
        }
        self.corpus_total += n;
    }

    /// Records `count` plain occurrences; for building tables by hand.
    pub fn add_count(&mut self, lemma: &str, field: FieldCode, count: u64) {
        self.add_n(lemma, field, &TokenFlags::default(), count);
    }

    pub fn get(&self, lemma: &str) -> Option<&LemmaEntry> {
        self.entries.get(lemma)
    }

    pub fn count(&self, lemma: &str) -> u64 {
        self.get(lemma).map_or(0, LemmaEntry::total)
    }

    /// Entries in ascending lemma order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &LemmaEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Number of distinct lemmas (types).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of tokens N.
    pub fn corpus_total(&self) -> u64 {
        self.corpus_total
    }

    pub fn merge_from(&mut self, other: &FrequencyTable) {
        for (lemma, theirs) in &other.entries {
            let ours = match self.entries.get_mut(lemma) {
                Some(e) => e,
                None => self.entries.entry(lemma.clone()).or_default(),
            };
            ours.fields += &theirs.fields;
            ours.sic += theirs.sic;
            if ours.foreign.is_none() {
                ours.foreign.clone_from(&theirs.foreign);
            }
        }
        self.corpus_total += other.corpus_total;
    }
}

impl Add for FrequencyTable {
    type Output = FrequencyTable;

    fn add(self, rhs: FrequencyTable) -> FrequencyTable {
        merge(self, rhs)
    }
}

/// Tallies one sample's tokens under `field`.
pub fn count_sample(tokens: &[Token], field: FieldCode) -> FrequencyTable {
    let mut table = FrequencyTable::new();
    for token in tokens {
        table.record(&token.lemma, field, &token.flags);
    }
    table
}

/// Pointwise sum of two tables.
pub fn merge(a: FrequencyTable, b: FrequencyTable) -> FrequencyTable {
    let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    big.merge_from(&small);
    big
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry<T> {
    /// 1-based rank.
    pub rank: usize,
    pub lemma: String,
    pub count: u64,
    pub per_million: T,
    pub fields: FieldCounts,
    pub sic: u64,
    pub foreign: Option<String>,
}

impl<T> RankedEntry<T> {
    pub fn flags(&self) -> TokenFlags {
        TokenFlags {
            sic: self.sic > 0,
            foreign: self.foreign.clone(),
        }
    }
}

/// Lemmas by descending count, ties broken by ascending lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList<T> {
    entries: Vec<RankedEntry<T>>,
    corpus_total: u64,
}

impl<T: Scalar> RankedList<T> {
    pub fn entries(&self) -> &[RankedEntry<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn corpus_total(&self) -> u64 {
        self.corpus_total
    }

    /// Entry at 1-based `rank`.
    pub fn at_rank(&self, rank: usize) -> Option<&RankedEntry<T>> {
        rank.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    /// The first `n` entries (all of them if fewer).
    pub fn top(&self, n: usize) -> &[RankedEntry<T>] {
        &self.entries[..n.min(self.entries.len())]
    }

    /// Entries in ascending lemma order, keeping their ranks.
    pub fn alphabetical(&self) -> Vec<&RankedEntry<T>> {
        let mut out: Vec<_> = self.entries.iter().collect();
        out.sort_by(|a, b| a.lemma.cmp(&b.lemma));
        out
    }

    /// Builds a list from `(lemma, count)` pairs with field detail unknown;
    /// counts are attributed to no field. Used for fixtures and readers.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (lemma, count) in counts {
            *merged.entry(lemma.into()).or_insert(0) += count;
        }
        let rows = merged
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .map(|(lemma, count)| (lemma, count, FieldCounts::default(), 0, None));
        Self::from_rows(rows)
    }

    fn from_rows<I>(rows: I) -> Self
    where
        I: IntoIterator<Item = (String, u64, FieldCounts, u64, Option<String>)>,
    {
        let mut rows: Vec<_> = rows.into_iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let corpus_total = rows.iter().map(|r| r.1).sum();
        let entries = rows
            .into_iter()
            .enumerate()
            .map(|(i, (lemma, count, fields, sic, foreign))| RankedEntry {
                rank: i + 1,
                lemma,
                count,
                per_million: per_million(count, corpus_total),
                fields,
                sic,
                foreign,
            })
            .collect();
        RankedList {
            entries,
            corpus_total,
        }
    }
}

pub fn rank<T: Scalar>(table: &FrequencyTable) -> RankedList<T> {
    let mut list = RankedList::from_rows(table.iter().filter(|(_, e)| e.total() > 0).map(
        |(lemma, e)| {
            (
                lemma.to_owned(),
                e.total(),
                e.fields,
                e.sic,
                e.foreign.clone(),
            )
        },
    ));
    // A table built by hand keeps its own N; the rows already agree with it.
    debug_assert_eq!(list.corpus_total, table.corpus_total());
    list.corpus_total = table.corpus_total();
    list
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(code: &str) -> FieldCode {
        code.parse().unwrap()
    }

    fn toks(words: &[&str]) -> Vec<Token> {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| Token::new(*w, i))
            .collect()
    }

    #[test]
    fn direct_tally() {
        let t = count_sample(&toks(&["A", "B", "A"]), f("A13"));
        assert_eq!(t.count("A"), 2);
        assert_eq!(t.count("B"), 1);
        assert_eq!(t.corpus_total(), 3);
        assert_eq!(t.get("A").unwrap().fields.get(f("A13")), 2);
        assert_eq!(t.get("A").unwrap().fields.fields_present(), 1);

        let empty = count_sample(&[], f("n01"));
        assert!(empty.is_empty());
        assert_eq!(empty.corpus_total(), 0);
    }

    #[test]
    fn merge_identity_and_sum() {
        let a = count_sample(&toks(&["X", "Y"]), f("A09"));
        let b = count_sample(&toks(&["X"]), f("n02"));
        assert_eq!(merge(a.clone(), FrequencyTable::new()), a);
        let m = merge(a.clone(), b.clone());
        assert_eq!(m, merge(b, a));
        assert_eq!(m.count("X"), 2);
        assert_eq!(m.get("X").unwrap().fields.fields_present(), 2);
        assert_eq!(m.corpus_total(), 3);
    }

    #[test]
    fn flags_accumulate() {
        let mut tokens = toks(&["KASA", "KASA", "WEEKEND(ENG)"]);
        tokens[0].flags.sic = true;
        tokens[2].flags.foreign = Some("ENG".into());
        let t = count_sample(&tokens, f("A14"));
        assert_eq!(t.get("KASA").unwrap().sic, 1);
        assert_eq!(
            t.get("WEEKEND(ENG)").unwrap().foreign.as_deref(),
            Some("ENG")
        );
    }

    #[test]
    fn rank_ties_alphabetical() {
        let list: RankedList<f64> = RankedList::from_counts([("B", 3), ("A", 3), ("C", 5)]);
        let order: Vec<_> = list.entries().iter().map(|e| e.lemma.as_str()).collect();
        assert_eq!(order, ["C", "A", "B"]);
        assert_eq!(list.at_rank(1).unwrap().rank, 1);
        assert_eq!(list.at_rank(3).unwrap().lemma, "B");
        assert!(list.at_rank(0).is_none());
        let alpha: Vec<_> = list.alphabetical().iter().map(|e| e.rank).collect();
        assert_eq!(alpha, [2, 3, 1]);
    }

    #[test]
    fn rank_empty_and_per_million() {
        assert!(rank::<f64>(&FrequencyTable::new()).is_empty());
        let mut t = FrequencyTable::new();
        t.add_count("VENTRI-CULO", f("A13"), 54);
        t.add_count("DE", f("A09"), 1_000_000 - 54);
        let list = rank::<f64>(&t);
        let v = list
            .entries()
            .iter()
            .find(|e| e.lemma == "VENTRI-CULO")
            .unwrap();
        assert_eq!(v.per_million, 54.0);
        assert_eq!(list.corpus_total(), 1_000_000);
    }
}
