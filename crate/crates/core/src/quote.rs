//! Quotation spans and grouping of near-duplicate quotations.
//!
//! Two quotations belong to the same group when they share a contiguous run
//! of `group_len` tokens, directly or through a chain of other quotations.
//! Each group is represented by its longest member.

use std::collections::HashMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::corpus::{Token, TokenKind, TokenStream};

pub const DEFAULT_GROUP_LEN: usize = 8;
pub const DEFAULT_MIN_QUOTE_LEN: usize = 3;
pub const DEFAULT_MAX_QUOTE_LEN: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClusterId(pub u32);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Accepted interior length of a quotation, in tokens, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuoteBounds {
    pub min_len: usize,
    pub max_len: usize,
}

impl Default for QuoteBounds {
    fn default() -> Self {
        QuoteBounds {
            min_len: DEFAULT_MIN_QUOTE_LEN,
            max_len: DEFAULT_MAX_QUOTE_LEN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotationSpan {
    pub doc_index: usize,
    pub doc_id: String,
    /// Token index of the opening delimiter.
    pub open: usize,
    /// Token index of the closing delimiter.
    pub close: usize,
    /// Interior token surfaces, delimiters excluded.
    pub tokens: Vec<String>,
    /// Interior text as it appears in the document, trimmed.
    pub text: String,
}

impl QuotationSpan {
    pub fn token_span(&self) -> std::ops::Range<usize> {
        self.open + 1..self.close
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Outermost balanced delimiter pairs `(open, close)` in document order.
/// Unmatched delimiters are ignored; pairs nested inside a matched pair are
/// part of the outer one and not reported.
pub fn balanced_pairs(tokens: &[Token]) -> Vec<(usize, usize)> {
    let mut stack = Vec::new();
    let mut pairs = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        match t.kind {
            TokenKind::QuoteOpen => stack.push(i),
            TokenKind::QuoteClose => {
                if let Some(open) = stack.pop() {
                    pairs.push((open, i));
                }
            }
            _ => {}
        }
    }
    pairs.sort_unstable();
    let mut outer: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        if outer.last().is_none_or(|last| p.0 > last.1) {
            outer.push(p);
        }
    }
    outer
}

#[derive(Debug, Clone, Default)]
pub struct QuoteDetection {
    pub spans: Vec<QuotationSpan>,
    /// Balanced pairs rejected by the length bounds.
    pub dropped: usize,
}

/// Finds quotation spans in one stream. `text` is the document text the
/// stream was produced from; it is used to recover the original spelling.
pub fn detect_quotations(
    stream: &TokenStream,
    text: &str,
    doc_index: usize,
    bounds: QuoteBounds,
) -> QuoteDetection {
    let mut out = QuoteDetection::default();
    for (open, close) in balanced_pairs(&stream.tokens) {
        let len = close - open - 1;
        if len < bounds.min_len || len > bounds.max_len {
            out.dropped += 1;
            continue;
        }
        let inner = &stream.tokens[open + 1..close];
        let start = stream.tokens[open].span.1;
        let end = stream.tokens[close].span.0;
        out.spans.push(QuotationSpan {
            doc_index,
            doc_id: stream.doc_id.clone(),
            open,
            close,
            tokens: inner.iter().map(|t| t.surface.clone()).collect(),
            text: text.get(start..end).unwrap_or_default().trim().to_string(),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupingOptions {
    /// Shared run length that merges two quotations.
    pub group_len: usize,
    /// When false, only quotations with identical (normalized) text merge.
    pub enabled: bool,
    pub case_insensitive: bool,
}

impl Default for GroupingOptions {
    fn default() -> Self {
        GroupingOptions {
            group_len: DEFAULT_GROUP_LEN,
            enabled: true,
            case_insensitive: true,
        }
    }
}

/// Groups token sequences. Returns a group index per input, numbered in
/// order of each group's first member.
pub fn group_sequences<T, S>(seqs: &[T], opts: GroupingOptions) -> Vec<usize>
where
    T: AsRef<[S]>,
    S: AsRef<str>,
{
    let ell = opts.group_len.max(1);
    let keys: Vec<Vec<String>> = seqs
        .iter()
        .map(|s| {
            s.as_ref()
                .iter()
                .map(|t| {
                    if opts.case_insensitive {
                        t.as_ref().to_lowercase()
                    } else {
                        t.as_ref().to_string()
                    }
                })
                .collect()
        })
        .collect();

    let mut uf = UnionFind::<usize>::new(keys.len());
    let mut exact: HashMap<&[String], usize> = HashMap::new();
    let mut grams: HashMap<&[String], usize> = HashMap::new();
    for (i, key) in keys.iter().enumerate() {
        if opts.enabled && key.len() >= ell {
            for gram in key.windows(ell) {
                match grams.get(gram) {
                    Some(&j) => {
                        uf.union(i, j);
                    }
                    None => {
                        grams.insert(gram, i);
                    }
                }
            }
        } else {
            match exact.get(key.as_slice()) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    exact.insert(key.as_slice(), i);
                }
            }
        }
    }

    let mut numbering: HashMap<usize, usize> = HashMap::new();
    (0..keys.len())
        .map(|i| {
            let root = uf.find_mut(i);
            let next = numbering.len();
            *numbering.entry(root).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotationCluster {
    pub id: ClusterId,
    /// Index (into the clustered span list) of the member used as canonical.
    pub canonical: usize,
    pub canonical_tokens: Vec<String>,
    pub canonical_text: String,
    /// Member indices into the clustered span list, ascending.
    pub members: Vec<usize>,
}

impl QuotationCluster {
    pub fn occurrence_count(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Clustering {
    pub clusters: Vec<QuotationCluster>,
    /// Cluster of each input span.
    pub assignment: Vec<ClusterId>,
}

/// Partitions all spans of a corpus into quotation clusters.
pub fn cluster_quotations(spans: &[QuotationSpan], opts: GroupingOptions) -> Clustering {
    let seqs: Vec<&[String]> = spans.iter().map(|s| s.tokens.as_slice()).collect();
    let groups = group_sequences(&seqs, opts);
    let n_groups = groups.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_groups];
    for (i, &g) in groups.iter().enumerate() {
        members[g].push(i);
    }
    let clusters = members
        .into_iter()
        .enumerate()
        .map(|(g, members)| {
            let canonical = *members
                .iter()
                .min_by(|&&a, &&b| {
                    let (sa, sb) = (&spans[a], &spans[b]);
                    sb.tokens
                        .len()
                        .cmp(&sa.tokens.len())
                        .then_with(|| sa.tokens.cmp(&sb.tokens))
                        .then_with(|| sa.text.cmp(&sb.text))
                        .then_with(|| a.cmp(&b))
                })
                .expect("groups are non-empty");
            QuotationCluster {
                id: ClusterId(g as u32),
                canonical,
                canonical_tokens: spans[canonical].tokens.clone(),
                canonical_text: spans[canonical].text.clone(),
                members,
            }
        })
        .collect();
    Clustering {
        clusters,
        assignment: groups.into_iter().map(|g| ClusterId(g as u32)).collect(),
    }
}
