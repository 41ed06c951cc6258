//! Sample files, their design-grid metadata, and the corpus catalog.
//!
//! A sample file is UTF-8 text with a header block of `#KEY: value` lines,
//! one blank line, and then the body:
//!
//! ```text
//! #ID: mtrey-a09-017
//! #CITY: MTREY
//! #FIELD: A09
//! #YEAR: 1985
//!
//! Había una vez ...
//! ```
//!
//! Recognized keys are `ID`, `CITY`, `FIELD`, `YEAR`, `AREA`, `WAIVER` and
//! `NOTE`. `CITY`, `FIELD` and `YEAR` are required.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::num::Scalar;

/// Number of subject fields in the sampling design.
pub const FIELD_COUNT: usize = 15;

/// Nominal length of one sample, in words.
pub const SAMPLE_WORDS: usize = 2000;

/// City rows of the published source matrix, in its row order.
pub const DEFAULT_CITIES: [&str; 34] = [
    "ASUNC", "BARCE", "BOGOT", "BAIRE", "CALI", "CARAC", "CORDO", "GUADA", "GUATE", "JUARE",
    "LAHAB", "LAPAZ", "LEON", "LIMA", "LOSAN", "MADRI", "MANAG", "MARAC", "MEDEL", "MEXIC",
    "MTREY", "MTVDO", "PANAM", "PUEBL", "QUITO", "SDOMI", "SJOSE", "SJUAN", "SSALV", "STIAG",
    "SEVIL", "TEGUC", "TIJUA", "VALEN",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("sample is not valid UTF-8")]
    InvalidUtf8,
    #[error("malformed header line {line}: {text:?}")]
    MalformedHeaderLine { line: usize, text: String },
    #[error("unknown header key {0:?}")]
    UnknownHeaderKey(String),
    #[error("header key {0} given more than once")]
    DuplicateHeaderKey(String),
    #[error("missing header key {0}")]
    MissingHeaderKey(&'static str),
    #[error("unknown city code {0:?}")]
    UnknownCityCode(String),
    #[error("invalid city code {0:?}: expected 1-5 uppercase ASCII letters")]
    InvalidCityCode(String),
    #[error("unknown field code {0:?}")]
    UnknownFieldCode(String),
    #[error("unknown area {0:?}")]
    UnknownArea(String),
    #[error("invalid year {0:?}")]
    InvalidYear(String),
    #[error("invalid waiver flag {0:?}")]
    InvalidWaiver(String),
    #[error("year {year} outside the synchronic window {start}-{end} and no waiver given")]
    YearOutOfWindow { year: i32, start: i32, end: i32 },
    #[error("sample body is empty")]
    EmptyBody,
    #[error("duplicate sample id {0:?}")]
    DuplicateSampleId(String),
    #[error("invalid synchronic window {start}-{end}")]
    InvalidWindow { start: i32, end: i32 },
    #[error("size tolerance {0} outside [0, 0.5]")]
    InvalidTolerance(String),
}

/// Five-letter (or shorter) uppercase city identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CityCode(String);

impl CityCode {
    /// Checks only the shape of the code, not registry membership.
    pub fn new(code: &str) -> Result<Self, IngestError> {
        let ok = (1..=5).contains(&code.len()) && code.bytes().all(|b| b.is_ascii_uppercase());
        if ok {
            Ok(CityCode(code.to_owned()))
        } else {
            Err(IngestError::InvalidCityCode(code.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CityCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered set of accepted cities. Defaults to the 34 cities of the design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityRegistry {
    order: Vec<CityCode>,
}

impl Default for CityRegistry {
    fn default() -> Self {
        CityRegistry {
            order: DEFAULT_CITIES
                .iter()
                .map(|c| CityCode(c.to_string()))
                .collect(),
        }
    }
}

impl CityRegistry {
    pub fn empty() -> Self {
        CityRegistry { order: Vec::new() }
    }

    /// Adds a city; registering an existing code is a no-op.
    pub fn register(&mut self, code: &str) -> Result<CityCode, IngestError> {
        let city = CityCode::new(code)?;
        if !self.order.contains(&city) {
            self.order.push(city.clone());
        }
        Ok(city)
    }

    pub fn contains(&self, code: &str) -> bool {
        self.order.iter().any(|c| c.0 == code)
    }

    pub fn lookup(&self, code: &str) -> Result<CityCode, IngestError> {
        if self.contains(code) {
            Ok(CityCode(code.to_owned()))
        } else {
            Err(IngestError::UnknownCityCode(code.to_owned()))
        }
    }

    pub fn cities(&self) -> &[CityCode] {
        &self.order
    }
}

/// Age area of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Area {
    Child,
    Adolescent,
    Adult,
}

impl Area {
    pub fn as_str(self) -> &'static str {
        match self {
            Area::Child => "CHILD",
            Area::Adolescent => "ADOLESCENT",
            Area::Adult => "ADULT",
        }
    }
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Area {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "CHILD" => Ok(Area::Child),
            "ADOLESCENT" => Ok(Area::Adolescent),
            "ADULT" => Ok(Area::Adult),
            other => Err(IngestError::UnknownArea(other.to_owned())),
        }
    }
}

/// One of the 15 subject fields: `n01..n03` (child), `a04..a06`
/// (adolescent), `A07..A15` (adult).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldCode(u8);

impl FieldCode {
    pub const ALL: [FieldCode; FIELD_COUNT] = {
        let mut all = [FieldCode(1); FIELD_COUNT];
        let mut i = 0;
        while i < FIELD_COUNT {
            all[i] = FieldCode(i as u8 + 1);
            i += 1;
        }
        all
    };

    /// Field from its 1-based number.
    pub fn from_number(n: u8) -> Option<Self> {
        (1..=FIELD_COUNT as u8).contains(&n).then_some(FieldCode(n))
    }

    /// Zero-based position in a field vector.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn area(self) -> Area {
        match self.0 {
            1..=3 => Area::Child,
            4..=6 => Area::Adolescent,
            _ => Area::Adult,
        }
    }

    fn prefix(self) -> char {
        match self.area() {
            Area::Child => 'n',
            Area::Adolescent => 'a',
            Area::Adult => 'A',
        }
    }

    /// Legend text for the field. `n01` has no published legend entry.
    pub fn description(self) -> &'static str {
        match self.0 {
            1 => "child field without legend entry (presumed preschool literature)",
            2 => "mathematics: written problems",
            3 => "hobbies, instructions to build apparatus and games",
            4 => "transcriptions of personal interviews with children and adolescents",
            5 => "homework and letters written by adolescents",
            6 => "sports: rules and reports",
            7 => "popular: sheet music and religious hymns",
            8 => "readings from textbooks, manuals and philosophico-religious material",
            9 => "fine arts: cinema, poetry, essays and novels for adults",
            10 => "business: publicity, catalogues, announcements and want ads",
            11 => "natural sciences: agriculture, biology and chemistry in popular magazine form",
            12 => "social sciences: economics, laws and published edicts in official organs",
            13 => "medicine: text books and popular magazine form",
            14 => "reports: contemporary events and police reports in newspapers",
            _ => "written material on fun, travel and food",
        }
    }
}

impl fmt::Display for FieldCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:02}", self.prefix(), self.0)
    }
}

impl FromStr for FieldCode {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || IngestError::UnknownFieldCode(s.to_owned());
        let mut chars = s.chars();
        let prefix = chars.next().ok_or_else(unknown)?;
        let digits = chars.as_str();
        if digits.len() != 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let field = digits
            .parse::<u8>()
            .ok()
            .and_then(FieldCode::from_number)
            .ok_or_else(unknown)?;
        if field.prefix() != prefix {
            return Err(unknown());
        }
        Ok(field)
    }
}

/// Inclusive range of accepted publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynchronicWindow {
    start: i32,
    end: i32,
}

impl Default for SynchronicWindow {
    fn default() -> Self {
        SynchronicWindow {
            start: 1979,
            end: 1989,
        }
    }
}

impl SynchronicWindow {
    pub fn new(start: i32, end: i32) -> Result<Self, IngestError> {
        if start > end {
            return Err(IngestError::InvalidWindow { start, end });
        }
        Ok(SynchronicWindow { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    pub registry: CityRegistry,
    pub window: SynchronicWindow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMetadata {
    pub id: String,
    pub city: CityCode,
    pub field: FieldCode,
    pub area: Area,
    pub year: i32,
    /// Re-edited classic: exempt from the synchronic window.
    pub waiver: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSample {
    pub metadata: SampleMetadata,
    pub body: String,
}

impl RawSample {
    /// Serializes back to the sample file format.
    pub fn to_file_string(&self) -> String {
        let m = &self.metadata;
        let mut out = format!("#ID: {}\n#CITY: {}\n#FIELD: {}\n", m.id, m.city, m.field);
        if m.area != m.field.area() {
            out.push_str(&format!("#AREA: {}\n", m.area));
        }
        out.push_str(&format!("#YEAR: {}\n", m.year));
        if m.waiver {
            out.push_str("#WAIVER: yes\n");
        }
        if !m.note.is_empty() {
            out.push_str(&format!("#NOTE: {}\n", m.note));
        }
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}

const KEYS: [&str; 7] = ["ID", "CITY", "FIELD", "YEAR", "AREA", "WAIVER", "NOTE"];

fn parse_waiver(value: &str) -> Result<bool, IngestError> {
    match value.to_ascii_lowercase().as_str() {
        "yes" | "true" | "1" | "classic" => Ok(true),
        "no" | "false" | "0" => Ok(false),
        _ => Err(IngestError::InvalidWaiver(value.to_owned())),
    }
}

// FNV-1a; stable across platforms and toolchains.
fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Parses a sample file. Without an `#ID` header the id is derived from the
/// metadata and a hash of the body.
pub fn parse_sample(content: &[u8], config: &IngestConfig) -> Result<RawSample, IngestError> {
    parse_sample_with_fallback_id(content, None, config)
}

/// Like [`parse_sample`], using `fallback_id` (typically the file stem) when
/// the header has no `#ID`.
pub fn parse_sample_with_fallback_id(
    content: &[u8],
    fallback_id: Option<&str>,
    config: &IngestConfig,
) -> Result<RawSample, IngestError> {
    let text = std::str::from_utf8(content).map_err(|_| IngestError::InvalidUtf8)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut header: BTreeMap<&'static str, String> = BTreeMap::new();
    let mut rest = text;
    let mut line_no = 0;
    let mut body = "";
    while !rest.is_empty() {
        let (line, tail) = match rest.find('\n') {
            Some(i) => (&rest[..i], &rest[i + 1..]),
            None => (rest, ""),
        };
        rest = tail;
        line_no += 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            body = rest;
            break;
        }
        let malformed = || IngestError::MalformedHeaderLine {
            line: line_no,
            text: line.to_owned(),
        };
        let entry = line.strip_prefix('#').ok_or_else(malformed)?;
        let (key, value) = entry.split_once(':').ok_or_else(malformed)?;
        let key = key.trim().to_ascii_uppercase();
        let key = *KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| IngestError::UnknownHeaderKey(key.clone()))?;
        if header.insert(key, value.trim().to_owned()).is_some() {
            return Err(IngestError::DuplicateHeaderKey(key.to_owned()));
        }
    }

    let required = |key: &'static str| {
        header
            .get(key)
            .map(String::as_str)
            .ok_or(IngestError::MissingHeaderKey(key))
    };
    let city = config.registry.lookup(required("CITY")?)?;
    let field: FieldCode = required("FIELD")?.parse()?;
    let year_text = required("YEAR")?;
    let year: i32 = year_text
        .parse()
        .map_err(|_| IngestError::InvalidYear(year_text.to_owned()))?;
    let area = match header.get("AREA") {
        Some(a) => a.parse()?,
        None => field.area(),
    };
    let waiver = match header.get("WAIVER") {
        Some(w) => parse_waiver(w)?,
        None => false,
    };
    if !waiver && !config.window.contains(year) {
        return Err(IngestError::YearOutOfWindow {
            year,
            start: config.window.start,
            end: config.window.end,
        });
    }
    if body.trim().is_empty() {
        return Err(IngestError::EmptyBody);
    }
    let id = match (header.get("ID"), fallback_id) {
        (Some(id), _) if !id.is_empty() => id.clone(),
        (_, Some(fallback)) => fallback.to_owned(),
        _ => format!("{city}-{field}-{year}-{:016x}", fnv1a64(body.as_bytes())),
    };

    Ok(RawSample {
        metadata: SampleMetadata {
            id,
            city,
            field,
            area,
            year,
            waiver,
            note: header.get("NOTE").cloned().unwrap_or_default(),
        },
        body: body.to_owned(),
    })
}

/// Outcome of checking a sample's word count against the nominal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeVerdict {
    Ok,
    Warn,
    Reject,
}

/// Accepted deviation from the nominal sample size, as a fraction of it.
/// `Warn` covers up to twice the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizePolicy<T> {
    target: usize,
    tolerance: T,
}

impl<T: Scalar> SizePolicy<T> {
    pub fn new(tolerance: T) -> Result<Self, IngestError> {
        if !(tolerance >= T::zero() && tolerance <= T::lit(0.5)) {
            return Err(IngestError::InvalidTolerance(tolerance.to_string()));
        }
        Ok(SizePolicy {
            target: SAMPLE_WORDS,
            tolerance,
        })
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }
}

impl<T: Scalar> Default for SizePolicy<T> {
    fn default() -> Self {
        SizePolicy {
            target: SAMPLE_WORDS,
            tolerance: T::lit(0.02),
        }
    }
}

pub fn validate_sample_size<T: Scalar>(token_count: usize, policy: &SizePolicy<T>) -> SizeVerdict {
    let deviation = T::from_count(token_count.abs_diff(policy.target) as u64);
    let allowed = T::from_count(policy.target as u64) * policy.tolerance;
    // Absorbs representation error so boundaries like 2000 * 0.02 = 40 hold
    // for both f32 and f64.
    let slack = |bound: T| bound + bound * T::epsilon() * T::lit(4.0);
    if deviation <= slack(allowed) {
        SizeVerdict::Ok
    } else if deviation <= slack(allowed + allowed) {
        SizeVerdict::Warn
    } else {
        SizeVerdict::Reject
    }
}

/// Accepted samples keyed by id plus the (city, field) cell counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCatalog {
    samples: BTreeMap<String, RawSample>,
    cell_counts: BTreeMap<(CityCode, FieldCode), usize>,
    cities: Vec<CityCode>,
}

impl SampleCatalog {
    pub fn samples(&self) -> impl Iterator<Item = &RawSample> {
        self.samples.values()
    }

    pub fn get(&self, id: &str) -> Option<&RawSample> {
        self.samples.get(id)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn cell_count(&self, city: &CityCode, field: FieldCode) -> usize {
        self.cell_counts
            .get(&(city.clone(), field))
            .copied()
            .unwrap_or(0)
    }

    pub fn cell_counts(&self) -> &BTreeMap<(CityCode, FieldCode), usize> {
        &self.cell_counts
    }

    /// Row universe: the registry cities followed by any other city seen.
    pub fn cities(&self) -> &[CityCode] {
        &self.cities
    }

    pub fn field_totals(&self) -> [usize; FIELD_COUNT] {
        let mut totals = [0; FIELD_COUNT];
        for ((_, field), n) in &self.cell_counts {
            totals[field.index()] += n;
        }
        totals
    }

    pub fn grand_total(&self) -> usize {
        self.cell_counts.values().sum()
    }

    pub fn into_samples(self) -> impl Iterator<Item = RawSample> {
        self.samples.into_values()
    }
}

/// Builds a catalog with the default city registry as the row universe.
pub fn build_catalog(
    samples: impl IntoIterator<Item = RawSample>,
) -> Result<SampleCatalog, IngestError> {
    build_catalog_with(samples, &CityRegistry::default())
}

pub fn build_catalog_with(
    samples: impl IntoIterator<Item = RawSample>,
    registry: &CityRegistry,
) -> Result<SampleCatalog, IngestError> {
    let mut by_id: BTreeMap<String, RawSample> = BTreeMap::new();
    let mut duplicates = BTreeSet::new();
    for sample in samples {
        let id = sample.metadata.id.clone();
        if by_id.insert(id.clone(), sample).is_some() {
            duplicates.insert(id);
        }
    }
    // Smallest offending id, so the error does not depend on input order.
    if let Some(id) = duplicates.into_iter().next() {
        return Err(IngestError::DuplicateSampleId(id));
    }

    let mut cell_counts = BTreeMap::new();
    let mut cities = registry.cities().to_vec();
    let mut extra = BTreeSet::new();
    for sample in by_id.values() {
        let m = &sample.metadata;
        *cell_counts.entry((m.city.clone(), m.field)).or_insert(0) += 1;
        if !registry.contains(m.city.as_str()) {
            extra.insert(m.city.clone());
        }
    }
    cities.extend(extra);

    Ok(SampleCatalog {
        samples: by_id,
        cell_counts,
        cities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> IngestConfig {
        IngestConfig::default()
    }

    #[test]
    fn parses_table_codes() {
        let s = parse_sample(
            b"#CITY: MTREY\n#FIELD: A09\n#YEAR: 1985\n\nHola mundo.\n",
            &cfg(),
        )
        .unwrap();
        assert_eq!(s.metadata.city.as_str(), "MTREY");
        assert_eq!(s.metadata.field.to_string(), "A09");
        assert_eq!(s.metadata.area, Area::Adult);
        assert_eq!(s.metadata.year, 1985);
        assert_eq!(s.body, "Hola mundo.\n");
    }

    #[test]
    fn year_outside_window_needs_waiver() {
        let err = parse_sample(b"#CITY: MTREY\n#FIELD: A09\n#YEAR: 1970\n\ntexto", &cfg());
        assert_eq!(
            err.unwrap_err(),
            IngestError::YearOutOfWindow {
                year: 1970,
                start: 1979,
                end: 1989
            }
        );
        let ok = parse_sample(
            b"#CITY: MTREY\n#FIELD: A09\n#YEAR: 1970\n#WAIVER: yes\n\ntexto",
            &cfg(),
        )
        .unwrap();
        assert!(ok.metadata.waiver);
    }

    #[test]
    fn window_bounds_are_inclusive() {
        for year in [1979, 1989] {
            let text = format!("#CITY: LIMA\n#FIELD: n02\n#YEAR: {year}\n\nx");
            assert!(parse_sample(text.as_bytes(), &cfg()).is_ok());
        }
    }

    #[test]
    fn empty_body_rejected() {
        let err = parse_sample(b"#CITY: MTREY\n#FIELD: A09\n#YEAR: 1985\n\n  \n", &cfg());
        assert_eq!(err.unwrap_err(), IngestError::EmptyBody);
        let err = parse_sample(b"#CITY: MTREY\n#FIELD: A09\n#YEAR: 1985\n", &cfg());
        assert_eq!(err.unwrap_err(), IngestError::EmptyBody);
    }

    #[test]
    fn header_errors() {
        let missing = parse_sample(b"#CITY: MTREY\n#YEAR: 1985\n\nx", &cfg());
        assert_eq!(missing.unwrap_err(), IngestError::MissingHeaderKey("FIELD"));
        let city = parse_sample(b"#CITY: PARIS\n#FIELD: A09\n#YEAR: 1985\n\nx", &cfg());
        assert_eq!(
            city.unwrap_err(),
            IngestError::UnknownCityCode("PARIS".into())
        );
        let field = parse_sample(b"#CITY: LIMA\n#FIELD: A16\n#YEAR: 1985\n\nx", &cfg());
        assert_eq!(
            field.unwrap_err(),
            IngestError::UnknownFieldCode("A16".into())
        );
        let bad = parse_sample(b"CITY: LIMA\n\nx", &cfg());
        assert!(matches!(
            bad,
            Err(IngestError::MalformedHeaderLine { line: 1, .. })
        ));
        let dup = parse_sample(b"#CITY: LIMA\n#CITY: LIMA\n\nx", &cfg());
        assert_eq!(
            dup.unwrap_err(),
            IngestError::DuplicateHeaderKey("CITY".into())
        );
    }

    #[test]
    fn field_code_prefix_must_match_area() {
        assert!("n01".parse::<FieldCode>().is_ok());
        assert!("a05".parse::<FieldCode>().is_ok());
        assert!("A15".parse::<FieldCode>().is_ok());
        for bad in ["A01", "n04", "a07", "A00", "A1", "A100", "x09", ""] {
            assert!(bad.parse::<FieldCode>().is_err(), "{bad}");
        }
        let shown: Vec<String> = FieldCode::ALL.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown[0], "n01");
        assert_eq!(shown[14], "A15");
    }

    #[test]
    fn area_override_and_registry_extension() {
        let mut config = cfg();
        config.registry.register("TORON").unwrap();
        let s = parse_sample(
            b"#CITY: TORON\n#FIELD: a04\n#AREA: CHILD\n#YEAR: 1980\n\nx",
            &config,
        )
        .unwrap();
        assert_eq!(s.metadata.area, Area::Child);
        assert!(config.registry.register("toronto").is_err());
    }

    #[test]
    fn serialization_round_trips() {
        let s = parse_sample(
            "#CITY: BAIRE\n#FIELD: A14\n#AREA: CHILD\n#YEAR: 1960\n#WAIVER: yes\n#NOTE: reedición\n\nCuerpo\n\ncon párrafos"
                .as_bytes(),
            &cfg(),
        )
        .unwrap();
        let again = parse_sample(s.to_file_string().as_bytes(), &cfg()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn size_verdicts() {
        let p = SizePolicy::<f64>::new(0.02).unwrap();
        assert_eq!(validate_sample_size(2000, &p), SizeVerdict::Ok);
        assert_eq!(validate_sample_size(2040, &p), SizeVerdict::Ok);
        assert_eq!(validate_sample_size(1960, &p), SizeVerdict::Ok);
        assert_eq!(validate_sample_size(2041, &p), SizeVerdict::Warn);
        assert_eq!(validate_sample_size(2080, &p), SizeVerdict::Warn);
        assert_eq!(validate_sample_size(2081, &p), SizeVerdict::Reject);
        assert_eq!(validate_sample_size(1500, &p), SizeVerdict::Reject);
        let p32 = SizePolicy::<f32>::new(0.02).unwrap();
        assert_eq!(validate_sample_size(2040, &p32), SizeVerdict::Ok);
        assert_eq!(validate_sample_size(2080, &p32), SizeVerdict::Warn);
        let exact = SizePolicy::<f64>::new(0.0).unwrap();
        assert_eq!(validate_sample_size(2001, &exact), SizeVerdict::Reject);
        assert!(SizePolicy::<f64>::new(0.6).is_err());
        assert!(SizePolicy::<f64>::new(f64::NAN).is_err());
    }

    fn sample(id: &str, city: &str, field: &str) -> RawSample {
        let text = format!("#ID: {id}\n#CITY: {city}\n#FIELD: {field}\n#YEAR: 1985\n\nx");
        parse_sample(text.as_bytes(), &cfg()).unwrap()
    }

    #[test]
    fn catalog_counts_and_duplicates() {
        let empty = build_catalog(Vec::new()).unwrap();
        assert_eq!(empty.grand_total(), 0);
        assert_eq!(empty.field_totals(), [0; FIELD_COUNT]);
        assert_eq!(empty.cities().len(), 34);

        let cat = build_catalog(vec![
            sample("1", "LIMA", "A09"),
            sample("2", "LIMA", "A09"),
            sample("3", "MTREY", "n02"),
        ])
        .unwrap();
        assert_eq!(cat.grand_total(), 3);
        assert_eq!(
            cat.cell_count(&CityCode::new("LIMA").unwrap(), "A09".parse().unwrap()),
            2
        );

        let dup = build_catalog(vec![sample("9", "LIMA", "A09"), sample("9", "LIMA", "A10")]);
        assert_eq!(dup.unwrap_err(), IngestError::DuplicateSampleId("9".into()));
    }

    #[test]
    fn derived_id_is_stable() {
        let a = parse_sample(b"#CITY: LIMA\n#FIELD: A09\n#YEAR: 1985\n\nuno dos", &cfg()).unwrap();
        let b = parse_sample(b"#CITY: LIMA\n#FIELD: A09\n#YEAR: 1985\n\nuno dos", &cfg()).unwrap();
        assert_eq!(a.metadata.id, b.metadata.id);
        assert!(a.metadata.id.starts_with("LIMA-A09-1985-"));
        let named = parse_sample_with_fallback_id(
            b"#CITY: LIMA\n#FIELD: A09\n#YEAR: 1985\n\nx",
            Some("f1"),
            &cfg(),
        )
        .unwrap();
        assert_eq!(named.metadata.id, "f1");
    }
}
