//! Source matrices in the city × field layout and monospace coverage charts.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ingest::{CityCode, FieldCode, SampleCatalog, FIELD_COUNT};
use crate::num::Scalar;
use crate::stats::{CoverageCurve, ReferenceCurve, StatsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

fn parse_err(line: usize, reason: impl Into<String>) -> ReportError {
    ReportError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Sample counts per city (rows) and field (columns). The ideal design has
/// exactly one sample in every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcesMatrix {
    pub cities: Vec<CityCode>,
    pub cells: Vec<[usize; FIELD_COUNT]>,
}

impl SourcesMatrix {
    pub fn column_totals(&self) -> [usize; FIELD_COUNT] {
        let mut totals = [0; FIELD_COUNT];
        for row in &self.cells {
            for (t, n) in totals.iter_mut().zip(row) {
                *t += n;
            }
        }
        totals
    }

    pub fn grand_total(&self) -> usize {
        self.column_totals().iter().sum()
    }

    pub fn cell(&self, city: &str, field: FieldCode) -> Option<usize> {
        let row = self.cities.iter().position(|c| c.as_str() == city)?;
        Some(self.cells[row][field.index()])
    }

    /// `max(0, 1 - count)` per cell.
    pub fn deficits(&self) -> Vec<[usize; FIELD_COUNT]> {
        self.cells
            .iter()
            .map(|row| row.map(|n| usize::from(n == 0)))
            .collect()
    }

    pub fn deficit_total(&self) -> usize {
        self.deficits().iter().flatten().sum()
    }

    fn header() -> String {
        let mut h = String::from("CITY");
        for f in FieldCode::ALL {
            write!(h, "\t{f}").unwrap();
        }
        h.push('\n');
        h
    }

    fn rows_tsv(&self, rows: &[[usize; FIELD_COUNT]]) -> String {
        let mut out = Self::header();
        for (city, row) in self.cities.iter().zip(rows) {
            out.push_str(city.as_str());
            for n in row {
                write!(out, "\t{n}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Counts with a `TOTAL` row and a `GRAND TOTAL` line.
    pub fn to_tsv(&self) -> String {
        let mut out = self.rows_tsv(&self.cells);
        out.push_str("TOTAL");
        for n in self.column_totals() {
            write!(out, "\t{n}").unwrap();
        }
        writeln!(out, "\nGRAND TOTAL\t{}", self.grand_total()).unwrap();
        out
    }

    /// Missing-sample indicator per cell, same layout without totals.
    pub fn deficits_tsv(&self) -> String {
        self.rows_tsv(&self.deficits())
    }

    /// Reads [`to_tsv`](Self::to_tsv) output; the totals, when present, must
    /// agree with the cells.
    pub fn from_tsv(text: &str) -> Result<Self, ReportError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty matrix"))?;
        if header != Self::header().trim_end() {
            return Err(parse_err(1, "unexpected header"));
        }
        let mut cities = Vec::new();
        let mut cells = Vec::new();
        let mut totals: Option<[usize; FIELD_COUNT]> = None;
        let mut grand: Option<usize> = None;
        for (i, line) in lines {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols[0] == "GRAND TOTAL" {
                let v = cols.get(1).and_then(|v| v.parse().ok());
                grand = Some(v.ok_or_else(|| parse_err(line_no, "bad grand total"))?);
                continue;
            }
            if cols.len() != FIELD_COUNT + 1 {
                return Err(parse_err(
                    line_no,
                    format!("expected {} columns", FIELD_COUNT + 1),
                ));
            }
            let mut row = [0; FIELD_COUNT];
            for (slot, v) in row.iter_mut().zip(&cols[1..]) {
                *slot = v
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad count {v:?}")))?;
            }
            if cols[0] == "TOTAL" {
                totals = Some(row);
            } else {
                let city = CityCode::new(cols[0]).map_err(|e| parse_err(line_no, e.to_string()))?;
                cities.push(city);
                cells.push(row);
            }
        }
        let matrix = SourcesMatrix { cities, cells };
        if totals.is_some_and(|t| t != matrix.column_totals()) {
            return Err(parse_err(0, "TOTAL row disagrees with cells"));
        }
        if grand.is_some_and(|g| g != matrix.grand_total()) {
            return Err(parse_err(0, "GRAND TOTAL disagrees with cells"));
        }
        Ok(matrix)
    }
}

pub fn sources_matrix(catalog: &SampleCatalog) -> SourcesMatrix {
    let cities = catalog.cities().to_vec();
    let cells = cities
        .iter()
        .map(|city| FieldCode::ALL.map(|f| catalog.cell_count(city, f)))
        .collect();
    SourcesMatrix { cities, cells }
}

/// Text chart plus the CSV series it was drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageChart {
    pub text: String,
    pub data_csv: String,
}

const CHART_WIDTH: usize = 50;

fn chart_column<T: Scalar>(share: T) -> usize {
    let col = (share * T::from_count(CHART_WIDTH as u64) / T::lit(100.0)).round();
    col.to_usize().unwrap_or(0).min(CHART_WIDTH)
}

/// Horizontal bars (`#`) for observed block shares with an `L` marker at
/// each reference share. A bar ending exactly at its reference has the
/// marker right after its last `#`.
pub fn render_coverage_chart<T: Scalar>(
    curve: &CoverageCurve<T>,
    reference: &ReferenceCurve<T>,
) -> Result<CoverageChart, ReportError> {
    if curve.block_shares.len() != reference.block_shares.len() {
        return Err(StatsError::ArityMismatch {
            expected: curve.block_shares.len(),
            found: reference.block_shares.len(),
        }
        .into());
    }
    let mut text = format!(
        "Coverage by rank block: # observed, L reference ({}); one column = {}%\n",
        reference.name,
        100 / CHART_WIDTH
    );
    let mut data_csv = String::from("from_rank,to_rank,observed,reference\n");
    let mut from = 1;
    for ((&cutoff, &observed), &expected) in curve
        .cutoffs
        .iter()
        .zip(&curve.block_shares)
        .zip(&reference.block_shares)
    {
        let mut row = vec![' '; CHART_WIDTH + 1];
        let bar = chart_column(observed);
        row[..bar].fill('#');
        row[chart_column(expected)] = 'L';
        let row: String = row.into_iter().collect();
        writeln!(
            text,
            "{:>11} |{}| {:>6.1} {:>6.1}",
            format!("{from}-{cutoff}"),
            row,
            observed.to_f64().unwrap_or(f64::NAN),
            expected.to_f64().unwrap_or(f64::NAN)
        )
        .unwrap();
        writeln!(data_csv, "{from},{cutoff},{observed},{expected}").unwrap();
        from = cutoff + 1;
    }
    Ok(CoverageChart { text, data_csv })
}

/// Cutoffs, observed and reference series from a chart data file.
pub type ChartSeries<T> = (Vec<usize>, Vec<T>, Vec<T>);

pub fn parse_chart_data<T: Scalar>(csv: &str) -> Result<ChartSeries<T>, ReportError> {
    let mut cutoffs = Vec::new();
    let mut observed = Vec::new();
    let mut reference = Vec::new();
    for (i, line) in csv.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let [_, to, obs, exp] = cols[..] else {
            return Err(parse_err(i + 1, "expected 4 columns"));
        };
        cutoffs.push(to.parse().map_err(|_| parse_err(i + 1, "bad cutoff"))?);
        observed.push(obs.parse().map_err(|_| parse_err(i + 1, "bad observed"))?);
        reference.push(exp.parse().map_err(|_| parse_err(i + 1, "bad reference"))?);
    }
    Ok((cutoffs, observed, reference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::build_catalog;
    use crate::stats::DEFAULT_CUTOFFS;

    #[test]
    fn empty_catalog_matrix() {
        let m = sources_matrix(&build_catalog(Vec::new()).unwrap());
        assert_eq!(m.cities.len(), 34);
        assert_eq!(m.grand_total(), 0);
        assert!(m.deficits().iter().flatten().all(|&d| d == 1));
        assert_eq!(m.deficit_total(), 34 * FIELD_COUNT);
        assert_eq!(SourcesMatrix::from_tsv(&m.to_tsv()).unwrap(), m);
    }

    #[test]
    fn rejects_inconsistent_totals() {
        let text = format!(
            "{}LIMA{}\nTOTAL{}\n",
            SourcesMatrix::header(),
            "\t1".repeat(FIELD_COUNT),
            "\t2".repeat(FIELD_COUNT)
        );
        assert!(SourcesMatrix::from_tsv(&text).is_err());
    }

    #[test]
    fn chart_for_published_blocks() {
        let curve = CoverageCurve::<f64>::from_block_shares(
            DEFAULT_CUTOFFS.to_vec(),
            vec![66.9, 7.1, 4.8, 2.0],
        )
        .unwrap();
        let chart = render_coverage_chart(&curve, &ReferenceCurve::lewandowski()).unwrap();
        let lines: Vec<&str> = chart.text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("     1-1000 |"));
        assert!(lines[1].ends_with("  66.9   80.0"));
        assert_eq!(lines[1].matches('#').count(), 33);
        assert_eq!(
            lines[1].find('L').unwrap() - lines[1].find('|').unwrap() - 1,
            40
        );
        assert!(lines[4].ends_with("   2.0    2.0"));

        let (cutoffs, observed, reference) = parse_chart_data::<f64>(&chart.data_csv).unwrap();
        assert_eq!(cutoffs, DEFAULT_CUTOFFS);
        assert_eq!(observed, curve.block_shares);
        assert_eq!(reference, [80.0, 10.0, 3.0, 2.0]);
    }

    #[test]
    fn equal_curves_coincide() {
        let reference = ReferenceCurve::<f64>::lewandowski();
        let curve = CoverageCurve::from_block_shares(
            DEFAULT_CUTOFFS.to_vec(),
            reference.block_shares.clone(),
        )
        .unwrap();
        let chart = render_coverage_chart(&curve, &reference).unwrap();
        for line in chart.text.lines().skip(1) {
            let bar = &line[line.find('|').unwrap() + 1..];
            let hashes = bar.chars().take_while(|&c| c == '#').count();
            assert_eq!(bar.chars().nth(hashes), Some('L'), "{line}");
        }
        let short = ReferenceCurve::new("x", vec![1.0]);
        assert!(matches!(
            render_coverage_chart(&curve, &short),
            Err(ReportError::Stats(StatsError::ArityMismatch { .. }))
        ));
    }
}
