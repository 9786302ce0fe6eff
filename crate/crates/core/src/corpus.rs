//! Corpus ingestion and tokenization.
//!
//! Input is NDJSON, one article per line:
//!
//! ```text
//! {"id": "a1", "site": "example.com", "date": "2011-01-13T09:00:00Z", "content": "..."}
//! ```
//!
//! Ingestion drops records whose content is byte-identical to an earlier
//! record (first occurrence wins) and strips control characters. The
//! tokenizer is rule based: whitespace separates tokens, runs of word
//! characters form one token, and every other character is a one-character
//! punctuation token. Quotation-mark variants are folded into
//! [`TokenKind::QuoteOpen`] / [`TokenKind::QuoteClose`].

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the byte length of one NDJSON line.
pub const DEFAULT_MAX_LINE_BYTES: usize = 1 << 20;

/// One line of the input corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub id: String,
    pub site: String,
    pub date: Option<String>,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub site: String,
    pub published: Option<DateTime<Utc>>,
    pub text: String,
}

impl Document {
    /// Converts back into the record form accepted by [`ingest_records`].
    pub fn to_record(&self) -> RawRecord {
        RawRecord {
            id: self.doc_id.clone(),
            site: self.site.clone(),
            date: self.published.map(|d| d.to_rfc3339()),
            content: self.text.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IngestOptions {
    pub max_line_bytes: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            max_line_bytes: DEFAULT_MAX_LINE_BYTES,
        }
    }
}

/// Counters collected while ingesting. `read` counts every non-blank line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub read: usize,
    pub kept: usize,
    pub malformed: usize,
    pub oversized: usize,
    pub empty: usize,
    pub duplicate_text: usize,
    pub duplicate_id: usize,
}

impl IngestReport {
    /// Records that did not make it into the output, for any reason.
    pub fn skipped(&self) -> usize {
        self.read - self.kept
    }
}

struct Deduper {
    texts: HashSet<String>,
    ids: HashSet<String>,
}

impl Deduper {
    fn new() -> Self {
        Deduper {
            texts: HashSet::new(),
            ids: HashSet::new(),
        }
    }

    fn admit(&mut self, record: RawRecord, report: &mut IngestReport) -> Option<Document> {
        let published = match record.date.as_deref().map(parse_date) {
            None => None,
            Some(Some(d)) => Some(d),
            Some(None) => {
                log::warn!("record {}: unparseable date", record.id);
                report.malformed += 1;
                return None;
            }
        };
        let text = strip_control(&record.content);
        if text.trim().is_empty() {
            report.empty += 1;
            return None;
        }
        if self.texts.contains(&text) {
            report.duplicate_text += 1;
            return None;
        }
        if !self.ids.insert(record.id.clone()) {
            log::warn!("duplicate document id {}", record.id);
            report.duplicate_id += 1;
            return None;
        }
        self.texts.insert(text.clone());
        report.kept += 1;
        Some(Document {
            doc_id: record.id,
            site: record.site,
            published,
            text,
        })
    }
}

/// Ingests NDJSON from a reader. Records that cannot be used are skipped
/// and counted by reason; only read failures are errors.
pub fn ingest<R: BufRead>(
    mut reader: R,
    opts: IngestOptions,
) -> Result<(Vec<Document>, IngestReport)> {
    let mut report = IngestReport::default();
    let mut dedup = Deduper::new();
    let mut docs = Vec::new();
    let mut line = Vec::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        if reader.read_until(b'\n', &mut line)? == 0 {
            break;
        }
        lineno += 1;
        let trimmed = line.trim_ascii();
        if trimmed.is_empty() {
            continue;
        }
        report.read += 1;
        if trimmed.len() > opts.max_line_bytes {
            log::warn!(
                "line {lineno}: {} bytes exceeds limit of {}, skipped",
                trimmed.len(),
                opts.max_line_bytes
            );
            report.oversized += 1;
            continue;
        }
        let record: RawRecord = match serde_json::from_slice(trimmed) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("line {lineno}: malformed record: {e}");
                report.malformed += 1;
                continue;
            }
        };
        if let Some(doc) = dedup.admit(record, &mut report) {
            docs.push(doc);
        }
    }
    Ok((docs, report))
}

pub fn ingest_path(path: &Path, opts: IngestOptions) -> Result<(Vec<Document>, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest(BufReader::new(file), opts)
}

/// Ingests already-parsed records with the same dedup rules as [`ingest`].
pub fn ingest_records<I>(records: I) -> (Vec<Document>, IngestReport)
where
    I: IntoIterator<Item = RawRecord>,
{
    let mut report = IngestReport::default();
    let mut dedup = Deduper::new();
    let docs = records
        .into_iter()
        .filter_map(|r| {
            report.read += 1;
            dedup.admit(r, &mut report)
        })
        .collect();
    (docs, report)
}

fn parse_date(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(d) = DateTime::parse_from_rfc3339(s) {
        return Some(d.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(d) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(d.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|d| d.and_utc())
}

fn strip_control(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_control() || c.is_whitespace())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Punctuation,
    QuoteOpen,
    QuoteClose,
}

impl TokenKind {
    pub fn is_quote(self) -> bool {
        matches!(self, TokenKind::QuoteOpen | TokenKind::QuoteClose)
    }
}

/// A token with its byte range in the document text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub doc_id: String,
    pub tokens: Vec<Token>,
    /// False when some quote delimiter has no partner after normalization.
    pub quotes_balanced: bool,
}

impl TokenStream {
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

/// How a delimiter from the [`QuoteTable`] is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuoteRole {
    Open,
    Close,
    /// Straight quotes; resolved from context and the open/close state.
    Ambiguous,
}

/// Quote-delimiter normalization table. Longer delimiters win over their
/// prefixes, so `''` is matched before any single-character entry.
#[derive(Debug, Clone)]
pub struct QuoteTable {
    entries: Vec<(String, QuoteRole)>,
}

impl QuoteTable {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, QuoteRole)>,
        S: Into<String>,
    {
        let mut entries: Vec<(String, QuoteRole)> = entries
            .into_iter()
            .map(|(s, r)| (s.into(), r))
            .filter(|(s, _)| !s.is_empty())
            .collect();
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        QuoteTable { entries }
    }

    pub fn entries(&self) -> &[(String, QuoteRole)] {
        &self.entries
    }

    fn match_at(&self, rest: &str) -> Option<(usize, QuoteRole)> {
        self.entries
            .iter()
            .find(|(d, _)| rest.starts_with(d.as_str()))
            .map(|(d, r)| (d.len(), *r))
    }
}

impl Default for QuoteTable {
    fn default() -> Self {
        use QuoteRole::*;
        QuoteTable::new([
            ("\"", Ambiguous),
            ("\u{201C}", Open),  // “
            ("\u{201D}", Close), // ”
            ("\u{201E}", Open),  // „
            ("\u{00AB}", Open),  // «
            ("\u{00BB}", Close), // »
            ("``", Open),
            ("''", Close),
        ])
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

// Characters that stay inside a word when flanked by word characters:
// apostrophes and hyphens between letters, `.` and `,` between digits.
fn joins_word(prev: char, c: char, next: char) -> bool {
    match c {
        '\'' | '\u{2019}' | '-' => is_word_char(prev) && is_word_char(next),
        '.' | ',' => prev.is_ascii_digit() && next.is_ascii_digit(),
        _ => false,
    }
}

pub fn tokenize(doc: &Document) -> TokenStream {
    tokenize_with(doc, &QuoteTable::default())
}

pub fn tokenize_with(doc: &Document, table: &QuoteTable) -> TokenStream {
    let (tokens, quotes_balanced) = tokenize_text(&doc.text, table);
    TokenStream {
        doc_id: doc.doc_id.clone(),
        tokens,
        quotes_balanced,
    }
}

/// Tokenizes a bare string. Returns the tokens and whether the quote
/// delimiters pair up.
pub fn tokenize_text(text: &str, table: &QuoteTable) -> (Vec<Token>, bool) {
    let mut tokens = Vec::new();
    let mut straight_open = false;
    let mut depth: i64 = 0;
    let mut balanced = true;
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().expect("non-empty remainder");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if let Some((len, role)) = table.match_at(rest) {
            let kind = match role {
                QuoteRole::Open => TokenKind::QuoteOpen,
                QuoteRole::Close => TokenKind::QuoteClose,
                QuoteRole::Ambiguous => {
                    let prev = text[..i].chars().next_back();
                    let next = text[i + len..].chars().next();
                    resolve_straight(prev, next, straight_open)
                }
            };
            if role == QuoteRole::Ambiguous {
                straight_open = kind == TokenKind::QuoteOpen;
            }
            if kind == TokenKind::QuoteOpen {
                depth += 1;
            } else {
                depth -= 1;
                if depth < 0 {
                    balanced = false;
                    depth = 0;
                }
            }
            tokens.push(Token {
                surface: rest[..len].to_string(),
                kind,
                span: (i, i + len),
            });
            i += len;
            continue;
        }
        if is_word_char(c) {
            let mut end = i + c.len_utf8();
            let mut prev = c;
            let mut chars = text[end..].chars().peekable();
            while let Some(&d) = chars.peek() {
                if is_word_char(d) {
                    end += d.len_utf8();
                    prev = d;
                    chars.next();
                    continue;
                }
                let mut ahead = chars.clone();
                ahead.next();
                match ahead.peek() {
                    Some(&n) if joins_word(prev, d, n) => {
                        end += d.len_utf8();
                        prev = d;
                        chars.next();
                    }
                    _ => break,
                }
            }
            tokens.push(Token {
                surface: text[i..end].to_string(),
                kind: TokenKind::Word,
                span: (i, end),
            });
            i = end;
        } else {
            let end = i + c.len_utf8();
            tokens.push(Token {
                surface: text[i..end].to_string(),
                kind: TokenKind::Punctuation,
                span: (i, end),
            });
            i = end;
        }
    }
    (tokens, balanced && depth == 0)
}

fn resolve_straight(prev: Option<char>, next: Option<char>, open: bool) -> TokenKind {
    let after_boundary = prev.is_none_or(|p| p.is_whitespace() || "([{-\u{2014}".contains(p));
    let before_boundary = next.is_none_or(|n| n.is_whitespace());
    if open {
        // A straight quote that looks like an opener while one is pending
        // restarts the quotation; the earlier opener stays unmatched.
        if after_boundary && !before_boundary {
            TokenKind::QuoteOpen
        } else {
            TokenKind::QuoteClose
        }
    } else if !after_boundary && (before_boundary || next.is_some_and(|n| !is_word_char(n))) {
        TokenKind::QuoteClose
    } else {
        TokenKind::QuoteOpen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document {
            doc_id: "d".into(),
            site: "s".into(),
            published: None,
            text: text.into(),
        }
    }

    fn kinds_and_surfaces(text: &str) -> Vec<(TokenKind, String)> {
        tokenize(&doc(text))
            .tokens
            .into_iter()
            .map(|t| (t.kind, t.surface))
            .collect()
    }

    #[test]
    fn melville_sentence() {
        use TokenKind::*;
        let got = kinds_and_surfaces("\"Oops\", said Mr. Melville.");
        let want = vec![
            (QuoteOpen, "\""),
            (Word, "Oops"),
            (QuoteClose, "\""),
            (Punctuation, ","),
            (Word, "said"),
            (Word, "Mr"),
            (Punctuation, "."),
            (Word, "Melville"),
            (Punctuation, "."),
        ];
        let want: Vec<_> = want.into_iter().map(|(k, s)| (k, s.to_string())).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn guillemets() {
        let stream = tokenize(&doc("\u{00AB}I love harpoons\u{00BB}"));
        let kinds: Vec<_> = stream.tokens.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TokenKind::QuoteOpen,
                TokenKind::Word,
                TokenKind::Word,
                TokenKind::Word,
                TokenKind::QuoteClose
            ]
        );
        assert!(stream.quotes_balanced);
    }

    #[test]
    fn no_quotes_no_quote_tokens() {
        let stream = tokenize(&doc("The ship sailed at dawn, without its captain."));
        assert!(stream.tokens.iter().all(|t| !t.kind.is_quote()));
    }

    #[test]
    fn latex_style_and_curly() {
        use TokenKind::*;
        let got = kinds_and_surfaces("``Yes,'' he said. \u{201C}No.\u{201D}");
        let kinds: Vec<_> = got.iter().map(|(k, _)| *k).collect();
        assert_eq!(
            kinds,
            vec![
                QuoteOpen,
                Word,
                Punctuation,
                QuoteClose,
                Word,
                Word,
                Punctuation,
                QuoteOpen,
                Word,
                Punctuation,
                QuoteClose
            ]
        );
    }

    #[test]
    fn word_internal_connectors() {
        let got: Vec<String> = kinds_and_surfaces("don't re-elect 3.8 million, Mr.")
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        assert_eq!(got, vec!["don't", "re-elect", "3.8", "million", ",", "Mr", "."]);
    }

    #[test]
    fn unbalanced_quotes_are_flagged() {
        assert!(!tokenize(&doc("He said \u{201C}never")).quotes_balanced);
        assert!(!tokenize(&doc("stray\u{201D} close")).quotes_balanced);
        assert!(tokenize(&doc("\"a\" and \"b\"")).quotes_balanced);
    }

    #[test]
    fn straight_quotes_alternate() {
        use TokenKind::*;
        let got: Vec<_> = kinds_and_surfaces("He said \"yes\" and \"no\".")
            .into_iter()
            .filter(|(k, _)| k.is_quote())
            .map(|(k, _)| k)
            .collect();
        assert_eq!(got, vec![QuoteOpen, QuoteClose, QuoteOpen, QuoteClose]);
    }

    #[test]
    fn ingest_dedups_first_wins() {
        let input = concat!(
            r#"{"id":"1","site":"a","date":null,"content":"same text"}"#,
            "\n",
            r#"{"id":"2","site":"b","date":"2011-01-13","content":"other text"}"#,
            "\n",
            r#"{"id":"3","site":"c","date":null,"content":"same text"}"#,
            "\n"
        );
        let (docs, report) = ingest(input.as_bytes(), IngestOptions::default()).unwrap();
        let ids: Vec<_> = docs.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, vec!["1", "2"]);
        assert_eq!(report.duplicate_text, 1);
        assert_eq!(report.skipped(), 1);
        assert!(docs[1].published.is_some());
    }

    #[test]
    fn ingest_empty_stream() {
        let (docs, report) = ingest(&b""[..], IngestOptions::default()).unwrap();
        assert!(docs.is_empty());
        assert_eq!(report.read, 0);
    }

    #[test]
    fn ingest_skips_bad_lines() {
        let input = concat!(
            "not json\n",
            r#"{"id":"1","site":"a","date":null,"content":"\u0007"}"#,
            "\n",
            r#"{"id":"2","site":"a","date":"yesterday","content":"x"}"#,
            "\n",
            r#"{"id":"3","site":"a","date":null,"content":"fine"}"#,
            "\n"
        );
        let (docs, report) = ingest(input.as_bytes(), IngestOptions::default()).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(report.malformed, 2);
        assert_eq!(report.empty, 1);
    }

    #[test]
    fn oversized_lines_skipped() {
        let big = format!(
            r#"{{"id":"1","site":"a","date":null,"content":"{}"}}"#,
            "x".repeat(100)
        );
        let (docs, report) = ingest(big.as_bytes(), IngestOptions { max_line_bytes: 50 }).unwrap();
        assert!(docs.is_empty());
        assert_eq!(report.oversized, 1);
    }

    #[test]
    fn control_characters_stripped() {
        let (docs, _) = ingest_records([RawRecord {
            id: "1".into(),
            site: "a".into(),
            date: None,
            content: "a\u{0000}b\tc\n".into(),
        }]);
        assert_eq!(docs[0].text, "ab\tc\n");
    }
}
