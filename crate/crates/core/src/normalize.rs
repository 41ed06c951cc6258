//! Transliteration of accented text into the canonical uppercase-ASCII form.
//!
//! The canonical alphabet is `A-Z`, `0-9`, space, `-`, `.`, `(` and `)`.
//! Accented letters become a base letter plus a marker (`Í` → `I-`,
//! `Ü` → `.U.`), sentence punctuation becomes a space, and a period survives
//! only inside words and abbreviations (`E.U.`, `X.A-N-OS`).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: expected `source<TAB>replacement`")]
    Malformed { line: usize },
    #[error("line {line}: source {text:?} must be exactly one character")]
    SourceNotOneChar { line: usize, text: String },
    #[error("line {line}: source {character:?} is already canonical and cannot be remapped")]
    CanonicalSource { line: usize, character: char },
    #[error("line {line}: replacement {replacement:?} leaves the canonical alphabet")]
    InvalidReplacement { line: usize, replacement: String },
    #[error("line {line}: source {character:?} mapped twice")]
    DuplicateSource { line: usize, character: char },
}

pub fn is_canonical_char(c: char) -> bool {
    matches!(c, 'A'..='Z' | '0'..='9' | ' ' | '-' | '.' | '(' | ')')
}

/// True iff every character of `text` is in the canonical alphabet.
pub fn is_canonical(text: &str) -> bool {
    text.chars().all(is_canonical_char)
}

/// Text known to be in the canonical alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CanonicalText(String);

impl CanonicalText {
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        is_canonical(&text).then_some(CanonicalText(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Character → replacement mapping applied after uppercasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransliterationTable {
    map: BTreeMap<char, String>,
}

const DEFAULT_ENTRIES: &[(char, &str)] = &[
    ('Á', "A-"),
    ('É', "E-"),
    ('Í', "I-"),
    ('Ó', "O-"),
    ('Ú', "U-"),
    ('Ü', ".U."),
    ('Ñ', "N-"),
    (',', " "),
    (';', " "),
    (':', " "),
    ('!', " "),
    ('?', " "),
    ('¡', " "),
    ('¿', " "),
    ('"', " "),
    ('«', " "),
    ('»', " "),
];

impl Default for TransliterationTable {
    fn default() -> Self {
        TransliterationTable {
            map: DEFAULT_ENTRIES
                .iter()
                .map(|&(c, r)| (c, r.to_owned()))
                .collect(),
        }
    }
}

impl TransliterationTable {
    /// Builds a table from `(source, replacement)` pairs, validating each.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, TableError>
    where
        I: IntoIterator<Item = (char, S)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (i, (source, replacement)) in pairs.into_iter().enumerate() {
            insert_checked(&mut map, i + 1, source, replacement.into())?;
        }
        Ok(TransliterationTable { map })
    }

    /// Parses a table file: one `source<TAB>replacement` pair per line.
    /// The replacement is taken verbatim, so a single space is a valid
    /// replacement. Blank lines are skipped.
    pub fn from_tsv(content: &str) -> Result<Self, TableError> {
        let mut map = BTreeMap::new();
        for (i, line) in content.lines().enumerate() {
            let line_no = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            let (source, replacement) = line
                .split_once('\t')
                .ok_or(TableError::Malformed { line: line_no })?;
            let mut chars = source.chars();
            let source_char = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(TableError::SourceNotOneChar {
                        line: line_no,
                        text: source.to_owned(),
                    })
                }
            };
            insert_checked(&mut map, line_no, source_char, replacement.to_owned())?;
        }
        Ok(TransliterationTable { map })
    }

    /// Serializes in the format read by [`from_tsv`](Self::from_tsv).
    pub fn to_tsv(&self) -> String {
        self.map
            .iter()
            .map(|(c, r)| format!("{c}\t{r}\n"))
            .collect()
    }

    pub fn get(&self, c: char) -> Option<&str> {
        self.map.get(&c).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Best-effort reverse mapping for display labels (`AN-OS` → `AÑOS`).
    /// Not a round trip: hyphens in the source text are indistinguishable
    /// from accent markers.
    pub fn display_label(&self, canonical: &str) -> String {
        let mut reverse: Vec<(&str, char)> = self
            .map
            .iter()
            .filter(|(_, r)| r.chars().count() >= 2 && r.chars().any(|c| c.is_ascii_alphanumeric()))
            .map(|(c, r)| (r.as_str(), *c))
            .collect();
        reverse.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));

        let mut out = String::with_capacity(canonical.len());
        let mut rest = canonical;
        'scan: while !rest.is_empty() {
            for (replacement, source) in &reverse {
                if let Some(tail) = rest.strip_prefix(replacement) {
                    out.push(*source);
                    rest = tail;
                    continue 'scan;
                }
            }
            let c = rest.chars().next().expect("non-empty");
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
        out
    }
}

fn insert_checked(
    map: &mut BTreeMap<char, String>,
    line: usize,
    source: char,
    replacement: String,
) -> Result<(), TableError> {
    if is_canonical_char(source) {
        return Err(TableError::CanonicalSource {
            line,
            character: source,
        });
    }
    if !is_canonical(&replacement) {
        return Err(TableError::InvalidReplacement { line, replacement });
    }
    if map.insert(source, replacement).is_some() {
        return Err(TableError::DuplicateSource {
            line,
            character: source,
        });
    }
    Ok(())
}

/// Characters that had no table entry and were replaced by a space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeDiagnostics {
    pub unmapped: BTreeMap<char, usize>,
}

impl NormalizeDiagnostics {
    pub fn total(&self) -> usize {
        self.unmapped.values().sum()
    }

    pub fn absorb(&mut self, other: &NormalizeDiagnostics) {
        for (c, n) in &other.unmapped {
            *self.unmapped.entry(*c).or_insert(0) += n;
        }
    }
}

pub fn normalize(text: &str, table: &TransliterationTable) -> CanonicalText {
    normalize_with_diagnostics(text, table).0
}

pub fn normalize_with_diagnostics(
    text: &str,
    table: &TransliterationTable,
) -> (CanonicalText, NormalizeDiagnostics) {
    let mut diagnostics = NormalizeDiagnostics::default();
    let mut out: Vec<char> = Vec::with_capacity(text.len());
    for c in text.chars() {
        if is_canonical_char(c) {
            out.push(c);
        } else if let Some(r) = table.get(c) {
            out.extend(r.chars());
        } else if c.is_whitespace() {
            out.push(' ');
        } else {
            for u in c.to_uppercase() {
                if is_canonical_char(u) {
                    out.push(u);
                } else if let Some(r) = table.get(u) {
                    out.extend(r.chars());
                } else {
                    out.push(' ');
                    *diagnostics.unmapped.entry(c).or_insert(0) += 1;
                }
            }
        }
    }
    strip_sentence_periods(&mut out);
    (CanonicalText(out.into_iter().collect()), diagnostics)
}

/// Turns sentence-final periods into spaces.
///
/// A period is kept when something other than a space follows it, or when
/// it closes a `.X.` group. Decisions run right to left so a run of periods
/// before a space collapses entirely; the result is a fixed point.
fn strip_sentence_periods(chars: &mut [char]) {
    for i in (0..chars.len()).rev() {
        if chars[i] != '.' {
            continue;
        }
        let closes_group = i >= 2 && chars[i - 1].is_ascii_alphanumeric() && chars[i - 2] == '.';
        if closes_group {
            continue;
        }
        match chars.get(i + 1) {
            None | Some(' ') => chars[i] = ' ',
            Some(_) => {}
        }
    }
}
