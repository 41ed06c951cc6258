//! Tokenization of canonical text and context rules for single-letter lemmas.
//!
//! Inline annotations are part of the sample text:
//!
//! * `PARTE(LA)`: a group glued to a word is kept as the lemma's
//!   disambiguator, so `PARTE` and `PARTE(LA)` count separately.
//! * `KASA (SIC)`: a free-standing `(SIC)` flags the previous token as a
//!   preserved source misspelling and is not itself a token.
//! * `(H2 O)`: a fully parenthesized group is one token; spaces inside
//!   parentheses are dropped (`(H2O)`).
//! * `WEEKEND(ENG)`: a disambiguator naming a foreign language flags the
//!   token as foreign.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::normalize::{is_canonical, CanonicalText};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenizeError {
    #[error("unbalanced parenthesis at character {offset}")]
    UnbalancedParenthesis { offset: usize },
    #[error("(SIC) marker at character {offset} has no preceding token")]
    DanglingSicMarker { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule line {line}: expected 4 tab-separated columns")]
    Malformed { line: usize },
    #[error("rule line {line}: unknown left context {class:?}")]
    UnknownLeftContext { line: usize, class: String },
    #[error("rule line {line}: {text:?} is not a canonical lemma")]
    InvalidLemma { line: usize, text: String },
    #[error("rule line {line}: replacement equals target {target:?}")]
    ReplacementEqualsTarget { line: usize, target: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenFlags {
    pub sic: bool,
    /// Language tag of a foreign-word annotation.
    pub foreign: Option<String>,
}

impl fmt::Display for TokenFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sic, &self.foreign) {
            (false, None) => f.write_str("-"),
            (true, None) => f.write_str("SIC"),
            (false, Some(lang)) => write!(f, "FOREIGN({lang})"),
            (true, Some(lang)) => write!(f, "SIC,FOREIGN({lang})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub lemma: String,
    /// Zero-based ordinal within the sample.
    pub position: usize,
    pub flags: TokenFlags,
}

impl Token {
    pub fn new(lemma: impl Into<String>, position: usize) -> Self {
        Token {
            lemma: lemma.into(),
            position,
            flags: TokenFlags::default(),
        }
    }
}

/// Splits a trailing `(...)` group glued to a word: `PARTE(LA)` gives
/// `("PARTE", Some("LA"))`. Fully parenthesized tokens have no base and
/// return `None` as the suffix.
pub fn split_disambiguator(lemma: &str) -> (&str, Option<&str>) {
    if !lemma.ends_with(')') {
        return (lemma, None);
    }
    let bytes = lemma.as_bytes();
    let mut depth = 0usize;
    for i in (0..bytes.len()).rev() {
        match bytes[i] {
            b')' => depth += 1,
            b'(' => {
                depth -= 1;
                if depth == 0 {
                    return if i == 0 {
                        (lemma, None)
                    } else {
                        (&lemma[..i], Some(&lemma[i + 1..lemma.len() - 1]))
                    };
                }
            }
            _ => {}
        }
    }
    (lemma, None)
}

/// Tag set that marks a disambiguator as a foreign-language annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub foreign_tags: BTreeSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            foreign_tags: ["ENG", "FRA", "ITA", "DEU", "POR", "LAT", "SPG"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

const SIC_MARKER: &str = "(SIC)";

pub fn tokenize(text: &CanonicalText) -> Result<Vec<Token>, TokenizeError> {
    tokenize_with(text, &TokenizerConfig::default())
}

pub fn tokenize_with(
    text: &CanonicalText,
    config: &TokenizerConfig,
) -> Result<Vec<Token>, TokenizeError> {
    let chars: Vec<char> = text.as_str().chars().collect();
    let mut tokens: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == ' ' {
            i += 1;
            continue;
        }
        let start = i;
        let mut raw = String::new();
        let mut depth = 0usize;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' if depth == 0 => break,
                ' ' => {}
                '(' => {
                    depth += 1;
                    raw.push(c);
                }
                ')' => {
                    if depth == 0 {
                        return Err(TokenizeError::UnbalancedParenthesis { offset: i });
                    }
                    depth -= 1;
                    raw.push(c);
                }
                _ => raw.push(c),
            }
            i += 1;
        }
        if depth > 0 {
            return Err(TokenizeError::UnbalancedParenthesis { offset: start });
        }

        if raw == SIC_MARKER {
            let target = tokens
                .last_mut()
                .ok_or(TokenizeError::DanglingSicMarker { offset: start })?;
            target.flags.sic = true;
            continue;
        }

        let foreign = match split_disambiguator(&raw) {
            (_, Some(tag)) if config.foreign_tags.contains(tag) => Some(tag.to_owned()),
            _ => None,
        };
        let position = tokens.len();
        tokens.push(Token {
            lemma: raw,
            position,
            flags: TokenFlags {
                sic: false,
                foreign,
            },
        });
    }
    Ok(tokens)
}

/// Number of counted words: every token, SIC-flagged or not. Absorbed
/// `(SIC)` markers are not tokens and do not count.
pub fn count_words(tokens: &[Token]) -> usize {
    tokens.len()
}

/// Constraint on the token before the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeftContext {
    Any,
    Absent,
    /// A present token not starting with a digit.
    Word,
    /// A present token starting with a digit.
    Digit,
}

/// Constraint on the token after the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RightContext {
    Any,
    Absent,
    Present,
    /// Present and starting with one of the prefixes.
    Prefixes(Vec<String>),
}

fn starts_with_digit(lemma: &str) -> bool {
    lemma.as_bytes().first().is_some_and(u8::is_ascii_digit)
}

impl LeftContext {
    fn matches(&self, prev: Option<&str>) -> bool {
        match (self, prev) {
            (LeftContext::Any, _) => true,
            (LeftContext::Absent, p) => p.is_none(),
            (LeftContext::Word, Some(p)) => !starts_with_digit(p),
            (LeftContext::Digit, Some(p)) => starts_with_digit(p),
            _ => false,
        }
    }

    fn parse(class: &str, line: usize) -> Result<Self, RuleError> {
        match class {
            "ANY" | "*" => Ok(LeftContext::Any),
            "ABSENT" => Ok(LeftContext::Absent),
            "WORD" => Ok(LeftContext::Word),
            "DIGIT" => Ok(LeftContext::Digit),
            other => Err(RuleError::UnknownLeftContext {
                line,
                class: other.to_owned(),
            }),
        }
    }
}

impl fmt::Display for LeftContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeftContext::Any => "ANY",
            LeftContext::Absent => "ABSENT",
            LeftContext::Word => "WORD",
            LeftContext::Digit => "DIGIT",
        })
    }
}

impl RightContext {
    fn matches(&self, next: Option<&str>) -> bool {
        match (self, next) {
            (RightContext::Any, _) => true,
            (RightContext::Absent, n) => n.is_none(),
            (RightContext::Present, n) => n.is_some(),
            (RightContext::Prefixes(prefixes), Some(n)) => {
                prefixes.iter().any(|p| n.starts_with(p.as_str()))
            }
            (RightContext::Prefixes(_), None) => false,
        }
    }

    fn parse(column: &str, line: usize) -> Result<Self, RuleError> {
        match column {
            "ANY" | "*" => Ok(RightContext::Any),
            "ABSENT" => Ok(RightContext::Absent),
            "PRESENT" => Ok(RightContext::Present),
            prefixes => {
                let list: Vec<String> = prefixes.split('|').map(str::to_owned).collect();
                if let Some(bad) = list.iter().find(|p| p.is_empty() || !is_canonical(p)) {
                    return Err(RuleError::InvalidLemma {
                        line,
                        text: bad.clone(),
                    });
                }
                Ok(RightContext::Prefixes(list))
            }
        }
    }
}

impl fmt::Display for RightContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RightContext::Any => f.write_str("ANY"),
            RightContext::Absent => f.write_str("ABSENT"),
            RightContext::Present => f.write_str("PRESENT"),
            RightContext::Prefixes(p) => f.write_str(&p.join("|")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisambiguationRule {
    pub target: String,
    pub left: LeftContext,
    pub right: RightContext,
    pub replacement: String,
}

fn valid_lemma(text: &str) -> bool {
    !text.is_empty() && !text.contains(' ') && is_canonical(text)
}

impl DisambiguationRule {
    pub fn new(
        target: &str,
        left: LeftContext,
        right: RightContext,
        replacement: &str,
    ) -> Result<Self, RuleError> {
        Self::checked(target, left, right, replacement, 0)
    }

    fn checked(
        target: &str,
        left: LeftContext,
        right: RightContext,
        replacement: &str,
        line: usize,
    ) -> Result<Self, RuleError> {
        for text in [target, replacement] {
            if !valid_lemma(text) {
                return Err(RuleError::InvalidLemma {
                    line,
                    text: text.to_owned(),
                });
            }
        }
        if target == replacement {
            return Err(RuleError::ReplacementEqualsTarget {
                line,
                target: target.to_owned(),
            });
        }
        Ok(DisambiguationRule {
            target: target.to_owned(),
            left,
            right,
            replacement: replacement.to_owned(),
        })
    }

    fn matches(&self, lemma: &str, prev: Option<&str>, next: Option<&str>) -> bool {
        lemma == self.target && self.left.matches(prev) && self.right.matches(next)
    }
}

/// Built-in rules for the one-letter words A, E, O and U. `A` has no rule
/// and always stays bare; so do E, O and U when no context matches.
pub const DEFAULT_RULES: &str = "\
# target\tleft\tright\treplacement
E\tANY\tHI\tE(CONJ)
U\tANY\tO|HO\tU(CONJ)
O\tDIGIT\t0|1|2|3|4|5|6|7|8|9\tO-
O\tWORD\tPRESENT\tO(DISJ)
";

/// Ordered rules; the first matching rule wins.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleSet {
    rules: Vec<DisambiguationRule>,
}

impl RuleSet {
    pub fn new(rules: Vec<DisambiguationRule>) -> Self {
        RuleSet { rules }
    }

    pub fn default_rules() -> Self {
        Self::from_tsv(DEFAULT_RULES).expect("built-in rules are valid")
    }

    /// Parses a rule file: `target<TAB>left<TAB>right<TAB>replacement`.
    /// Left is one of `ANY`, `ABSENT`, `WORD`, `DIGIT`; right is `ANY`,
    /// `ABSENT`, `PRESENT`, or `|`-separated prefixes of the next token.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn from_tsv(content: &str) -> Result<Self, RuleError> {
        let mut rules = Vec::new();
        for (i, line) in content.lines().enumerate() {
            let line_no = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [target, left, right, replacement] = cols[..] else {
                return Err(RuleError::Malformed { line: line_no });
            };
            rules.push(DisambiguationRule::checked(
                target,
                LeftContext::parse(left, line_no)?,
                RightContext::parse(right, line_no)?,
                replacement,
                line_no,
            )?);
        }
        Ok(RuleSet { rules })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# target\tleft\tright\treplacement\n");
        for r in &self.rules {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.target, r.left, r.right, r.replacement
            ));
        }
        out
    }

    pub fn rules(&self) -> &[DisambiguationRule] {
        &self.rules
    }

    fn lookup(&self, lemma: &str, prev: Option<&str>, next: Option<&str>) -> Option<&str> {
        self.rules
            .iter()
            .find(|r| r.matches(lemma, prev, next))
            .map(|r| r.replacement.as_str())
    }
}

/// Rewrites tokens whose lemma and neighbours match a rule. Context is
/// read from the input sequence, so rewrites never influence each other.
pub fn apply_rules(tokens: &[Token], rules: &RuleSet) -> Vec<Token> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, token)| {
            let prev = i.checked_sub(1).map(|j| tokens[j].lemma.as_str());
            let next = tokens.get(i + 1).map(|t| t.lemma.as_str());
            match rules.lookup(&token.lemma, prev, next) {
                Some(replacement) => Token {
                    lemma: replacement.to_owned(),
                    ..token.clone()
                },
                None => token.clone(),
            }
        })
        .collect()
}
