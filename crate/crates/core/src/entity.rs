//! Speaker mentions from an alias dictionary.
//!
//! Aliases are tokenized with the corpus tokenizer and stored in a token
//! trie, so a mention is a run of whole tokens. Matching is leftmost-longest
//! and never looks inside quotation marks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize_text, QuoteTable, TokenStream};
use crate::error::{Error, Result};
use crate::quote::balanced_pairs;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpeakerId(pub String);

impl SpeakerId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SpeakerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SpeakerId {
    fn from(s: &str) -> Self {
        SpeakerId(s.to_string())
    }
}

#[derive(Debug, Default)]
struct AliasNode {
    children: HashMap<String, usize>,
    alias: Option<usize>,
}

#[derive(Debug)]
pub struct AliasDictionary {
    aliases: Vec<(Vec<String>, BTreeSet<SpeakerId>)>,
    nodes: Vec<AliasNode>,
    canonical: BTreeMap<SpeakerId, Vec<String>>,
    case_sensitive: bool,
}

/// One row of an alias file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasRow {
    pub alias: String,
    pub speaker: SpeakerId,
    pub canonical: bool,
}

impl AliasRow {
    pub fn new(alias: &str, speaker: &str, canonical: bool) -> Self {
        AliasRow {
            alias: alias.to_string(),
            speaker: SpeakerId::from(speaker),
            canonical,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct AliasLoadReport {
    pub rows: usize,
    pub malformed: usize,
    /// Ids that had no canonical row; their longest alias was used.
    pub missing_canonical: usize,
}

impl AliasDictionary {
    pub fn empty() -> Self {
        Self::from_rows(Vec::new(), true).0
    }

    /// Builds a dictionary. Rows whose alias tokenizes to nothing are
    /// dropped and counted as malformed.
    pub fn from_rows<I>(rows: I, case_sensitive: bool) -> (Self, AliasLoadReport)
    where
        I: IntoIterator<Item = AliasRow>,
    {
        let table = QuoteTable::default();
        let mut report = AliasLoadReport::default();
        let mut by_alias: BTreeMap<Vec<String>, BTreeSet<SpeakerId>> = BTreeMap::new();
        let mut canonical: BTreeMap<SpeakerId, Vec<String>> = BTreeMap::new();
        let mut fallback: BTreeMap<SpeakerId, Vec<String>> = BTreeMap::new();
        for row in rows {
            report.rows += 1;
            let (tokens, _) = tokenize_text(&row.alias, &table);
            let surface: Vec<String> = tokens
                .into_iter()
                .filter(|t| !t.kind.is_quote())
                .map(|t| t.surface)
                .collect();
            if surface.is_empty() {
                log::warn!("alias `{}` has no tokens, skipped", row.alias);
                report.malformed += 1;
                continue;
            }
            if row.canonical {
                canonical
                    .entry(row.speaker.clone())
                    .or_insert_with(|| surface.clone());
            }
            let better = fallback.get(&row.speaker).is_none_or(|cur| {
                surface.len() > cur.len() || (surface.len() == cur.len() && surface < *cur)
            });
            if better {
                fallback.insert(row.speaker.clone(), surface.clone());
            }
            let key = if case_sensitive {
                surface
            } else {
                surface.iter().map(|s| s.to_lowercase()).collect()
            };
            by_alias.entry(key).or_default().insert(row.speaker);
        }
        for (id, name) in fallback {
            if let std::collections::btree_map::Entry::Vacant(slot) = canonical.entry(id) {
                log::warn!("speaker {} has no canonical alias row", slot.key());
                report.missing_canonical += 1;
                slot.insert(name);
            }
        }

        let mut dict = AliasDictionary {
            aliases: Vec::with_capacity(by_alias.len()),
            nodes: vec![AliasNode::default()],
            canonical,
            case_sensitive,
        };
        for (key, ids) in by_alias {
            let mut node = 0;
            for tok in &key {
                node = match dict.nodes[node].children.get(tok) {
                    Some(&next) => next,
                    None => {
                        dict.nodes.push(AliasNode::default());
                        let next = dict.nodes.len() - 1;
                        dict.nodes[node].children.insert(tok.clone(), next);
                        next
                    }
                };
            }
            dict.nodes[node].alias = Some(dict.aliases.len());
            dict.aliases.push((key, ids));
        }
        (dict, report)
    }

    pub fn len(&self) -> usize {
        self.aliases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aliases.is_empty()
    }

    pub fn is_case_sensitive(&self) -> bool {
        self.case_sensitive
    }

    /// Candidate speakers for an exact token sequence.
    pub fn lookup<S: AsRef<str>>(&self, tokens: &[S]) -> Option<&BTreeSet<SpeakerId>> {
        let mut node = 0;
        for t in tokens {
            node = *self.nodes[node].children.get(self.normalize(t.as_ref()).as_ref())?;
        }
        self.nodes[node].alias.map(|a| &self.aliases[a].1)
    }

    pub fn canonical_name(&self, id: &SpeakerId) -> Option<&[String]> {
        self.canonical.get(id).map(Vec::as_slice)
    }

    /// Canonical name joined for display, e.g. `John McCain`.
    pub fn display_name(&self, id: &SpeakerId) -> String {
        self.canonical_name(id)
            .map(join_tokens)
            .unwrap_or_else(|| id.to_string())
    }

    pub fn speakers(&self) -> impl Iterator<Item = &SpeakerId> {
        self.canonical.keys()
    }

    fn normalize<'a>(&self, s: &'a str) -> std::borrow::Cow<'a, str> {
        if self.case_sensitive {
            std::borrow::Cow::Borrowed(s)
        } else {
            std::borrow::Cow::Owned(s.to_lowercase())
        }
    }
}

/// Joins tokens with single spaces, except before `.` `,` and similar.
pub fn join_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        let t = t.as_ref();
        let attach = matches!(t, "." | "," | ";" | ":" | "!" | "?" | ")");
        if i > 0 && !attach {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

/// Reads an alias file: `alias<TAB>speaker_id[<TAB>is_canonical]`.
pub fn load_aliases(path: &Path, case_sensitive: bool) -> Result<(AliasDictionary, AliasLoadReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_aliases(BufReader::new(file), case_sensitive)
}

pub fn parse_aliases<R: BufRead>(
    reader: R,
    case_sensitive: bool,
) -> Result<(AliasDictionary, AliasLoadReport)> {
    let mut rows = Vec::new();
    let mut malformed = 0;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_alias_line(line) {
            Some(row) => rows.push(row),
            None => {
                log::warn!("alias file line {}: malformed, skipped", n + 1);
                malformed += 1;
            }
        }
    }
    let (dict, mut report) = AliasDictionary::from_rows(rows, case_sensitive);
    report.rows += malformed;
    report.malformed += malformed;
    Ok((dict, report))
}

fn parse_alias_line(line: &str) -> Option<AliasRow> {
    let cols: Vec<&str> = line.split('\t').collect();
    let (alias, id, flag) = match cols.as_slice() {
        [a, i] => (*a, *i, "0"),
        [a, i, f] => (*a, *i, f.trim()),
        _ => return None,
    };
    let canonical = match flag {
        "1" => true,
        "0" => false,
        _ => return None,
    };
    let (alias, id) = (alias.trim(), id.trim());
    if alias.is_empty() || id.is_empty() {
        return None;
    }
    Some(AliasRow::new(alias, id, canonical))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    pub doc_id: String,
    /// Token range `[start, end)` in the stream.
    pub token_span: (usize, usize),
    pub surface: Vec<String>,
    pub candidates: BTreeSet<SpeakerId>,
    pub resolved: Option<SpeakerId>,
}

/// Leftmost-longest alias matching. Mentions never overlap and never touch
/// tokens inside (or delimiting) a quotation.
pub fn detect_mentions(stream: &TokenStream, dict: &AliasDictionary) -> Vec<EntityMention> {
    let tokens = &stream.tokens;
    let mut blocked = vec![false; tokens.len()];
    for (open, close) in balanced_pairs(tokens) {
        blocked[open..=close].iter_mut().for_each(|b| *b = true);
    }
    for (i, t) in tokens.iter().enumerate() {
        if t.kind.is_quote() {
            blocked[i] = true;
        }
    }

    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut node = 0;
        let mut best: Option<(usize, usize)> = None;
        let mut j = i;
        while j < tokens.len() && !blocked[j] {
            let key = dict.normalize(&tokens[j].surface);
            match dict.nodes[node].children.get(key.as_ref()) {
                Some(&next) => node = next,
                None => break,
            }
            j += 1;
            if let Some(a) = dict.nodes[node].alias {
                best = Some((j, a));
            }
        }
        match best {
            Some((end, a)) => {
                out.push(EntityMention {
                    doc_id: stream.doc_id.clone(),
                    token_span: (i, end),
                    surface: tokens[i..end].iter().map(|t| t.surface.clone()).collect(),
                    candidates: dict.aliases[a].1.clone(),
                    resolved: None,
                });
                i = end;
            }
            None => i += 1,
        }
    }
    out
}

fn contains_strictly(haystack: &[String], needle: &[String]) -> bool {
    haystack.len() > needle.len() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Resolves a mention to one speaker. An ambiguous mention takes the id of
/// a longer, unambiguous mention in the same document that contains it as a
/// token run, provided exactly one such id exists and it is a candidate.
pub fn resolve_partial(
    mention: &EntityMention,
    doc_mentions: &[EntityMention],
    dict: &AliasDictionary,
) -> Option<SpeakerId> {
    if mention.candidates.len() == 1 {
        return mention.candidates.iter().next().cloned();
    }
    let norm = |s: &[String]| -> Vec<String> {
        s.iter().map(|t| dict.normalize(t).into_owned()).collect()
    };
    let needle = norm(&mention.surface);
    let mut found: BTreeSet<&SpeakerId> = BTreeSet::new();
    for other in doc_mentions {
        if other.token_span == mention.token_span || other.candidates.len() != 1 {
            continue;
        }
        if contains_strictly(&norm(&other.surface), &needle) {
            found.extend(other.candidates.iter());
        }
    }
    match found.len() {
        1 => {
            let id = *found.iter().next().expect("one element");
            mention.candidates.contains(id).then(|| id.clone())
        }
        _ => None,
    }
}

/// Fills `resolved` for every mention of one document.
pub fn resolve_mentions(mentions: &mut [EntityMention], dict: &AliasDictionary) {
    let resolved: Vec<Option<SpeakerId>> = mentions
        .iter()
        .map(|m| resolve_partial(m, mentions, dict))
        .collect();
    for (m, r) in mentions.iter_mut().zip(resolved) {
        m.resolved = r;
    }
}
