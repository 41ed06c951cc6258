//! Tab- and comma-separated exports, and readers for each of them.
//!
//! Machine-readable floats use Rust's shortest round-trip formatting, except
//! the per-million column of listings, which is fixed at four decimals.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::freq::{FrequencyTable, RankedEntry, RankedList};
use crate::ingest::FieldCode;
use crate::lemma::TokenFlags;
use crate::num::Scalar;
use crate::report::ReportError;
use crate::stats::{CoverageCurve, DispersionReport, ZipfReport};

const LISTING_HEADER: &str = "rank\tlemma\tcount\tper_million\tfield_spread\tflags";

fn bad(line: usize, reason: impl Into<String>) -> ReportError {
    ReportError::Parse {
        line,
        reason: reason.into(),
    }
}

fn listing_row<T: Scalar>(out: &mut String, e: &RankedEntry<T>) {
    write!(
        out,
        "{}\t{}\t{}\t{:.4}\t{}\t{}",
        e.rank,
        e.lemma,
        e.count,
        e.per_million.to_f64().unwrap_or(f64::NAN),
        e.fields.fields_present(),
        e.flags()
    )
    .unwrap();
}

/// Listing in rank order.
pub fn rank_listing_tsv<T: Scalar>(ranked: &RankedList<T>) -> String {
    let mut out = format!("{LISTING_HEADER}\n");
    for e in ranked.entries() {
        listing_row(&mut out, e);
        out.push('\n');
    }
    out
}

/// Same columns as [`rank_listing_tsv`], in lemma order.
pub fn alphabetical_listing_tsv<T: Scalar>(ranked: &RankedList<T>) -> String {
    let mut out = format!("{LISTING_HEADER}\n");
    for e in ranked.alphabetical() {
        listing_row(&mut out, e);
        out.push('\n');
    }
    out
}

/// Rank listing restricted to `lemmas`, with a trailing `skew` column.
pub fn significance_listing_tsv<T: Scalar>(
    ranked: &RankedList<T>,
    lemmas: &[String],
    skewed: &BTreeSet<String>,
) -> String {
    let wanted: BTreeSet<&str> = lemmas.iter().map(String::as_str).collect();
    let mut out = format!("{LISTING_HEADER}\tskew\n");
    for e in ranked
        .entries()
        .iter()
        .filter(|e| wanted.contains(e.lemma.as_str()))
    {
        listing_row(&mut out, e);
        out.push_str(if skewed.contains(&e.lemma) {
            "\tY\n"
        } else {
            "\tN\n"
        });
    }
    out
}

/// One parsed listing line.
#[derive(Debug, Clone, PartialEq)]
pub struct ListingRow<T> {
    pub rank: usize,
    pub lemma: String,
    pub count: u64,
    pub per_million: T,
    pub field_spread: usize,
    pub flags: TokenFlags,
    pub skew: Option<bool>,
}

fn parse_flags(text: &str) -> Option<TokenFlags> {
    let mut flags = TokenFlags::default();
    if text == "-" {
        return Some(flags);
    }
    for part in text.split(',') {
        if part == "SIC" {
            flags.sic = true;
        } else {
            let lang = part.strip_prefix("FOREIGN(")?.strip_suffix(')')?;
            flags.foreign = Some(lang.to_owned());
        }
    }
    Some(flags)
}

/// Reads any of the listing exports (with or without the `skew` column).
pub fn parse_listing<T: Scalar>(text: &str) -> Result<Vec<ListingRow<T>>, ReportError> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, h)| h).unwrap_or_default();
    let with_skew = match header.strip_prefix(LISTING_HEADER) {
        Some("") => false,
        Some("\tskew") => true,
        _ => return Err(bad(1, "unexpected listing header")),
    };
    lines
        .map(|(i, line)| {
            let n = i + 1;
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 + usize::from(with_skew) {
                return Err(bad(n, "wrong column count"));
            }
            let skew = if with_skew {
                Some(match cols[6] {
                    "Y" => true,
                    "N" => false,
                    _ => return Err(bad(n, "bad skew flag")),
                })
            } else {
                None
            };
            Ok(ListingRow {
                rank: cols[0].parse().map_err(|_| bad(n, "bad rank"))?,
                lemma: cols[1].to_owned(),
                count: cols[2].parse().map_err(|_| bad(n, "bad count"))?,
                per_million: cols[3].parse().map_err(|_| bad(n, "bad per-million"))?,
                field_spread: cols[4].parse().map_err(|_| bad(n, "bad field spread"))?,
                flags: parse_flags(cols[5]).ok_or_else(|| bad(n, "bad flags"))?,
                skew,
            })
        })
        .collect()
}

pub fn coverage_csv<T: Scalar>(curve: &CoverageCurve<T>) -> String {
    let mut out = String::from("cutoff,block_share,cumulative_share,block_tokens\n");
    for (i, cutoff) in curve.cutoffs.iter().enumerate() {
        let tokens = curve
            .block_tokens
            .as_ref()
            .map(|t| t[i].to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{cutoff},{},{},{tokens}",
            curve.block_shares[i], curve.cumulative_shares[i]
        )
        .unwrap();
    }
    out
}

pub fn parse_coverage_csv<T: Scalar>(text: &str) -> Result<CoverageCurve<T>, ReportError> {
    let mut curve = CoverageCurve {
        cutoffs: Vec::new(),
        block_shares: Vec::new(),
        cumulative_shares: Vec::new(),
        block_tokens: None,
    };
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let n = i + 1;
        let cols: Vec<&str> = line.split(',').collect();
        let [cutoff, block, cumulative, block_tokens] = cols[..] else {
            return Err(bad(n, "expected 4 columns"));
        };
        curve
            .cutoffs
            .push(cutoff.parse().map_err(|_| bad(n, "bad cutoff"))?);
        curve
            .block_shares
            .push(block.parse().map_err(|_| bad(n, "bad share"))?);
        curve
            .cumulative_shares
            .push(cumulative.parse().map_err(|_| bad(n, "bad share"))?);
        if !block_tokens.is_empty() {
            tokens.push(
                block_tokens
                    .parse()
                    .map_err(|_| bad(n, "bad token count"))?,
            );
        }
    }
    if !tokens.is_empty() {
        if tokens.len() != curve.cutoffs.len() {
            return Err(bad(0, "block token column partially filled"));
        }
        curve.block_tokens = Some(tokens);
    }
    Ok(curve)
}

pub fn zipf_csv<T: Scalar>(report: &ZipfReport<T>) -> String {
    let mut out = String::from("rank,constant\n");
    for (i, c) in report.constants.iter().enumerate() {
        writeln!(out, "{},{c}", i + 1).unwrap();
    }
    out
}

/// Constants from [`zipf_csv`], in rank order.
pub fn parse_zipf_csv<T: Scalar>(text: &str) -> Result<Vec<T>, ReportError> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, line)| {
            let (rank, value) = line
                .split_once(',')
                .ok_or_else(|| bad(i + 1, "expected 2 columns"))?;
            if rank.parse::<usize>().ok() != Some(i) {
                return Err(bad(i + 1, "ranks must run 1, 2, 3, ..."));
            }
            value.parse().map_err(|_| bad(i + 1, "bad constant"))
        })
        .collect()
}

pub fn dispersion_tsv<T: Scalar>(table: &FrequencyTable, report: &DispersionReport<T>) -> String {
    let mut out = String::from("lemma\tcount\tfields_present\ttop2_share");
    for f in FieldCode::ALL {
        write!(out, "\t{f}").unwrap();
    }
    out.push('\n');
    for (lemma, entry) in table.iter() {
        let Some(d) = report.get(lemma) else { continue };
        write!(
            out,
            "{lemma}\t{}\t{}\t{}",
            entry.total(),
            d.fields_present,
            d.top2_share
        )
        .unwrap();
        for n in entry.fields.0 {
            write!(out, "\t{n}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Rebuilds the frequency table behind a dispersion export.
pub fn parse_dispersion_tsv(text: &str) -> Result<FrequencyTable, ReportError> {
    let mut table = FrequencyTable::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let n = i + 1;
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 + FieldCode::ALL.len() {
            return Err(bad(n, "wrong column count"));
        }
        let mut sum = 0;
        for (field, v) in FieldCode::ALL.iter().zip(&cols[4..]) {
            let count: u64 = v.parse().map_err(|_| bad(n, "bad count"))?;
            table.add_count(cols[0], *field, count);
            sum += count;
        }
        if cols[1].parse::<u64>().ok() != Some(sum) {
            return Err(bad(n, "count column disagrees with field counts"));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::{count_sample, rank};
    use crate::lemma::Token;
    use crate::stats::{coverage, dispersion, zipf_constants};

    fn sample_list() -> (FrequencyTable, RankedList<f64>) {
        let mut tokens: Vec<Token> = ["DE", "LA", "DE", "KASA", "WEEKEND(ENG)", "DE"]
            .iter()
            .enumerate()
            .map(|(i, w)| Token::new(*w, i))
            .collect();
        tokens[3].flags.sic = true;
        tokens[4].flags.foreign = Some("ENG".into());
        let table = count_sample(&tokens, "A14".parse().unwrap());
        let list = rank(&table);
        (table, list)
    }

    #[test]
    fn listing_round_trip() {
        let (_, list) = sample_list();
        let text = rank_listing_tsv(&list);
        assert!(text.starts_with(
            "rank\tlemma\tcount\tper_million\tfield_spread\tflags\n1\tDE\t3\t500000.0000\t1\t-\n"
        ));
        let rows = parse_listing::<f64>(&text).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().any(|r| r.lemma == "KASA" && r.flags.sic));
        assert!(rows
            .iter()
            .any(|r| r.flags.foreign.as_deref() == Some("ENG")));

        let alpha = parse_listing::<f64>(&alphabetical_listing_tsv(&list)).unwrap();
        let lemmas: Vec<&str> = alpha.iter().map(|r| r.lemma.as_str()).collect();
        assert_eq!(lemmas, ["DE", "KASA", "LA", "WEEKEND(ENG)"]);
    }

    #[test]
    fn significance_listing_has_skew_column() {
        let (_, list) = sample_list();
        let skewed: BTreeSet<String> = ["DE".to_string()].into_iter().collect();
        let text = significance_listing_tsv(&list, &["DE".into(), "LA".into()], &skewed);
        let rows = parse_listing::<f64>(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].skew, Some(true));
        assert_eq!(rows[1].skew, Some(false));
    }

    #[test]
    fn coverage_and_zipf_round_trip() {
        let (_, list) = sample_list();
        let curve = coverage(&list, &[1, 3]).unwrap();
        assert_eq!(
            parse_coverage_csv::<f64>(&coverage_csv(&curve)).unwrap(),
            curve
        );
        let z = zipf_constants(&list, 4).unwrap();
        assert_eq!(parse_zipf_csv::<f64>(&zipf_csv(&z)).unwrap(), z.constants);
    }

    #[test]
    fn dispersion_round_trip() {
        let (table, _) = sample_list();
        let text = dispersion_tsv(&table, &dispersion::<f64>(&table));
        let back = parse_dispersion_tsv(&text).unwrap();
        for (lemma, entry) in table.iter() {
            assert_eq!(back.get(lemma).unwrap().fields, entry.fields);
        }
        assert_eq!(back.corpus_total(), table.corpus_total());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_listing::<f64>("nope\n").is_err());
        assert!(parse_listing::<f64>(&format!("{LISTING_HEADER}\n1\tA\tx\t1\t1\t-\n")).is_err());
        assert!(parse_zipf_csv::<f64>("rank,constant\n2,0.5\n").is_err());
    }
}
