//! Extraction patterns and their matching over annotated unit streams.
//! Per-pattern precision bookkeeping lives here too.
//!
//! A pattern is matched against units, not raw tokens. Quotations and
//! speaker mentions are collapsed into single units before matching, so the
//! placeholders `$Q` and `$S` each consume exactly one unit.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entity::SpeakerId;
use crate::error::{Error, Result};
use crate::quote::ClusterId;

/// Longest allowed run of consecutive wildcards.
pub const DEFAULT_MAX_WILDCARD_RUN: usize = 5;
/// Scale of the length-based match weight, in tokens.
pub const DEFAULT_TAU: f64 = 10.0;

const QUOTE_TEXT: &str = "$Q";
const SPEAKER_TEXT: &str = "$S";
const WILDCARD_TEXT: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternToken {
    Literal(String),
    Wildcard,
    Quote,
    Speaker,
}

impl PatternToken {
    pub fn is_placeholder(&self) -> bool {
        matches!(self, PatternToken::Quote | PatternToken::Speaker)
    }

    pub fn literal(s: &str) -> Self {
        PatternToken::Literal(s.to_string())
    }
}

impl fmt::Display for PatternToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternToken::Quote => f.write_str(QUOTE_TEXT),
            PatternToken::Speaker => f.write_str(SPEAKER_TEXT),
            PatternToken::Wildcard => f.write_str(WILDCARD_TEXT),
            PatternToken::Literal(s) => {
                let reserved = s == QUOTE_TEXT || s == SPEAKER_TEXT || s == WILDCARD_TEXT;
                if reserved || s.starts_with('\\') {
                    write!(f, "\\{s}")
                } else {
                    f.write_str(s)
                }
            }
        }
    }
}

/// Which placeholder comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    QuoteFirst,
    SpeakerFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub elements: Vec<PatternToken>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    QuotePlaceholders(usize),
    SpeakerPlaceholders(usize),
    StartsWithWildcard,
    EndsWithWildcard,
    StartsWithSpeaker,
    EndsWithSpeaker,
    WildcardRun { len: usize, max: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => f.write_str("pattern is empty"),
            Violation::QuotePlaceholders(n) => write!(f, "expected one $Q, found {n}"),
            Violation::SpeakerPlaceholders(n) => write!(f, "expected one $S, found {n}"),
            Violation::StartsWithWildcard => f.write_str("starts with a wildcard"),
            Violation::EndsWithWildcard => f.write_str("ends with a wildcard"),
            Violation::StartsWithSpeaker => f.write_str("starts with $S"),
            Violation::EndsWithSpeaker => f.write_str("ends with $S"),
            Violation::WildcardRun { len, max } => {
                write!(f, "{len} consecutive wildcards (at most {max} allowed)")
            }
        }
    }
}

impl Pattern {
    pub fn new(elements: Vec<PatternToken>) -> Self {
        Pattern { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Every broken format rule, in a fixed order. Empty means valid.
    pub fn violations(&self, max_wildcard_run: usize) -> Vec<Violation> {
        let el = &self.elements;
        let mut out = Vec::new();
        if el.is_empty() {
            out.push(Violation::Empty);
            return out;
        }
        let q = el.iter().filter(|t| **t == PatternToken::Quote).count();
        let s = el.iter().filter(|t| **t == PatternToken::Speaker).count();
        if q != 1 {
            out.push(Violation::QuotePlaceholders(q));
        }
        if s != 1 {
            out.push(Violation::SpeakerPlaceholders(s));
        }
        match el.first() {
            Some(PatternToken::Wildcard) => out.push(Violation::StartsWithWildcard),
            Some(PatternToken::Speaker) => out.push(Violation::StartsWithSpeaker),
            _ => {}
        }
        match el.last() {
            Some(PatternToken::Wildcard) => out.push(Violation::EndsWithWildcard),
            Some(PatternToken::Speaker) => out.push(Violation::EndsWithSpeaker),
            _ => {}
        }
        let longest = longest_wildcard_run(el);
        if longest > max_wildcard_run {
            out.push(Violation::WildcardRun {
                len: longest,
                max: max_wildcard_run,
            });
        }
        out
    }

    pub fn validate(&self, max_wildcard_run: usize) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations(max_wildcard_run);
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub fn is_valid(&self, max_wildcard_run: usize) -> bool {
        self.violations(max_wildcard_run).is_empty()
    }

    /// Orientation by placeholder order; `None` if a placeholder is missing.
    pub fn orientation(&self) -> Option<Orientation> {
        let q = self.elements.iter().position(|t| *t == PatternToken::Quote)?;
        let s = self.elements.iter().position(|t| *t == PatternToken::Speaker)?;
        Some(if q < s {
            Orientation::QuoteFirst
        } else {
            Orientation::SpeakerFirst
        })
    }

    pub fn reversed(&self) -> Pattern {
        Pattern {
            elements: self.elements.iter().rev().cloned().collect(),
        }
    }

    /// Parses and validates, turning violations into an error.
    pub fn parse_valid(text: &str, max_wildcard_run: usize) -> Result<Pattern> {
        let p: Pattern = text.parse()?;
        p.validate(max_wildcard_run).map_err(|v| Error::PatternSyntax {
            text: text.to_string(),
            reason: v
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        })?;
        Ok(p)
    }

    /// Does the pattern match the units starting at `start`?
    pub fn matches_at(&self, units: &[Unit], start: usize) -> Option<MatchResult> {
        let end = start.checked_add(self.elements.len())?;
        if end > units.len() || self.elements.is_empty() {
            return None;
        }
        let mut cluster = None;
        let mut speaker = None;
        let mut q_unit = 0;
        let mut s_unit = 0;
        for (k, (el, unit)) in self.elements.iter().zip(&units[start..end]).enumerate() {
            if !element_accepts(el, unit) {
                return None;
            }
            match (el, unit) {
                (PatternToken::Quote, Unit::Quote { cluster: c }) => {
                    cluster = Some(*c);
                    q_unit = start + k;
                }
                (PatternToken::Speaker, Unit::Speaker { speaker: Some(s) }) => {
                    speaker = Some(s.clone());
                    s_unit = start + k;
                }
                _ => {}
            }
        }
        Some(MatchResult {
            cluster: cluster?,
            speaker: speaker?,
            start,
            end,
            quote_unit: q_unit,
            speaker_unit: s_unit,
        })
    }

    /// All non-overlapping matches, scanning left to right.
    pub fn find_iter(&self, units: &[Unit]) -> Vec<MatchResult> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < units.len() {
            match self.matches_at(units, i) {
                Some(m) => {
                    i = m.end;
                    out.push(m);
                }
                None => i += 1,
            }
        }
        out
    }
}

fn longest_wildcard_run(el: &[PatternToken]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for t in el {
        if *t == PatternToken::Wildcard {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

fn element_accepts(el: &PatternToken, unit: &Unit) -> bool {
    match (el, unit) {
        (PatternToken::Literal(l), Unit::Token(t)) => l == t,
        (PatternToken::Wildcard, Unit::Token(_)) => true,
        (PatternToken::Quote, Unit::Quote { .. }) => true,
        (PatternToken::Speaker, Unit::Speaker { speaker: Some(_) }) => true,
        _ => false,
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Whitespace-separated elements. `$Q`, `$S` and `*` are reserved; a
    /// leading backslash makes the rest of the element a literal.
    fn from_str(text: &str) -> Result<Pattern> {
        let mut elements = Vec::new();
        for raw in text.split_whitespace() {
            let el = match raw {
                QUOTE_TEXT => PatternToken::Quote,
                SPEAKER_TEXT => PatternToken::Speaker,
                WILDCARD_TEXT => PatternToken::Wildcard,
                _ => match raw.strip_prefix('\\') {
                    Some("") => {
                        return Err(Error::PatternSyntax {
                            text: text.to_string(),
                            reason: "lone backslash".into(),
                        })
                    }
                    Some(rest) => PatternToken::Literal(rest.to_string()),
                    None => PatternToken::Literal(raw.to_string()),
                },
            };
            elements.push(el);
        }
        if elements.is_empty() {
            return Err(Error::PatternSyntax {
                text: text.to_string(),
                reason: "pattern is empty".into(),
            });
        }
        Ok(Pattern { elements })
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One matching unit of an annotated document.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Unit {
    /// A plain token outside quotations and mentions.
    Token(String),
    /// A whole quotation, delimiters included.
    Quote { cluster: ClusterId },
    /// A speaker mention; `None` when the mention could not be resolved.
    Speaker { speaker: Option<SpeakerId> },
}

impl Unit {
    pub fn is_plain(&self) -> bool {
        matches!(self, Unit::Token(_))
    }
}

/// A document as a sequence of matching units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedStream {
    pub doc_index: usize,
    pub doc_id: String,
    pub units: Vec<Unit>,
    /// Token range `[start, end)` covered by each unit.
    pub token_ranges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchResult {
    pub cluster: ClusterId,
    pub speaker: SpeakerId,
    /// First matched unit.
    pub start: usize,
    /// One past the last matched unit.
    pub end: usize,
    pub quote_unit: usize,
    pub speaker_unit: usize,
}

#[derive(Debug, Default)]
struct TrieNode {
    literal: HashMap<String, usize>,
    wildcard: Option<usize>,
    quote: Option<usize>,
    speaker: Option<usize>,
    terminal: Vec<usize>,
}

/// Prefix trie over pattern elements, used to match a whole pattern set in
/// one pass per stream. Each pattern keeps its own left-to-right
/// non-overlapping semantics, so results equal per-pattern `find_iter`.
#[derive(Debug)]
pub struct PatternTrie {
    nodes: Vec<TrieNode>,
    patterns: Vec<Pattern>,
}

impl PatternTrie {
    pub fn new(patterns: &[Pattern]) -> Self {
        let mut nodes = vec![TrieNode::default()];
        for (idx, p) in patterns.iter().enumerate() {
            let mut cur = 0;
            for el in &p.elements {
                let existing = match el {
                    PatternToken::Literal(s) => nodes[cur].literal.get(s).copied(),
                    PatternToken::Wildcard => nodes[cur].wildcard,
                    PatternToken::Quote => nodes[cur].quote,
                    PatternToken::Speaker => nodes[cur].speaker,
                };
                cur = match existing {
                    Some(n) => n,
                    None => {
                        let n = nodes.len();
                        nodes.push(TrieNode::default());
                        match el {
                            PatternToken::Literal(s) => {
                                nodes[cur].literal.insert(s.clone(), n);
                            }
                            PatternToken::Wildcard => nodes[cur].wildcard = Some(n),
                            PatternToken::Quote => nodes[cur].quote = Some(n),
                            PatternToken::Speaker => nodes[cur].speaker = Some(n),
                        }
                        n
                    }
                };
            }
            nodes[cur].terminal.push(idx);
        }
        PatternTrie {
            nodes,
            patterns: patterns.to_vec(),
        }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// Indices of the patterns matching at `start`, ascending.
    fn matching_at(&self, units: &[Unit], start: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut frontier = vec![(0usize, start)];
        while let Some((node, pos)) = frontier.pop() {
            let n = &self.nodes[node];
            out.extend_from_slice(&n.terminal);
            let Some(unit) = units.get(pos) else { continue };
            match unit {
                Unit::Token(t) => {
                    if let Some(&c) = n.literal.get(t.as_str()) {
                        frontier.push((c, pos + 1));
                    }
                    if let Some(c) = n.wildcard {
                        frontier.push((c, pos + 1));
                    }
                }
                Unit::Quote { .. } => {
                    if let Some(c) = n.quote {
                        frontier.push((c, pos + 1));
                    }
                }
                Unit::Speaker { speaker: Some(_) } => {
                    if let Some(c) = n.speaker {
                        frontier.push((c, pos + 1));
                    }
                }
                Unit::Speaker { speaker: None } => {}
            }
        }
        out.sort_unstable();
    }

    /// All matches of all patterns as `(pattern index, match)`, ordered by
    /// start unit and then pattern index.
    pub fn find_all(&self, units: &[Unit]) -> Vec<(usize, MatchResult)> {
        let mut next_free = vec![0usize; self.patterns.len()];
        let mut hits = Vec::new();
        let mut out = Vec::new();
        for start in 0..units.len() {
            self.matching_at(units, start, &mut hits);
            for &p in &hits {
                if start < next_free[p] {
                    continue;
                }
                // Only patterns with both placeholders produce a result.
                if let Some(m) = self.patterns[p].matches_at(units, start) {
                    next_free[p] = m.end;
                    out.push((p, m));
                }
            }
        }
        out
    }
}

/// How a pattern entered the active set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Seed,
    Inferred(u32),
}

/// Weighted classification counts for one pattern.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PatternStats {
    pub w_plus: f64,
    pub w_minus: f64,
    /// Distinct previously known pairs the pattern re-extracted.
    pub support: usize,
    pub positives: usize,
    pub negatives: usize,
    pub neutrals: usize,
}

impl PatternStats {
    pub fn add_positive(&mut self, weight: f64) {
        self.w_plus += weight;
        self.positives += 1;
    }

    pub fn add_negative(&mut self, weight: f64) {
        self.w_minus += weight;
        self.negatives += 1;
    }

    /// Associative merge of two partial tallies. Support is not additive
    /// across partitions and is left to the caller.
    pub fn merge(&mut self, other: &PatternStats) {
        self.w_plus += other.w_plus;
        self.w_minus += other.w_minus;
        self.positives += other.positives;
        self.negatives += other.negatives;
        self.neutrals += other.neutrals;
    }

    pub fn has_history(&self) -> bool {
        self.w_plus + self.w_minus > 0.0
    }
}

/// `w+ / (w+ + w-)`. Without any weighted history, seeds count as fully
/// precise and inferred patterns as useless.
pub fn precision(stats: &PatternStats, origin: Origin) -> f64 {
    let total = stats.w_plus + stats.w_minus;
    if total > 0.0 {
        (stats.w_plus / total).clamp(0.0, 1.0)
    } else if origin == Origin::Seed {
        1.0
    } else {
        0.0
    }
}

/// `tanh(length / tau)`.
pub fn match_weight(length: usize, tau: f64) -> f64 {
    (length as f64 / tau).tanh()
}

/// Which length feeds the match weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightUnit {
    #[default]
    Tokens,
    Chars,
}

impl FromStr for WeightUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tokens" => Ok(WeightUnit::Tokens),
            "chars" => Ok(WeightUnit::Chars),
            other => Err(Error::Config(format!(
                "weight unit must be `tokens` or `chars`, got `{other}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn tok(s: &str) -> Unit {
        Unit::Token(s.into())
    }

    fn q(c: u32) -> Unit {
        Unit::Quote {
            cluster: ClusterId(c),
        }
    }

    fn sp(s: &str) -> Unit {
        Unit::Speaker {
            speaker: Some(SpeakerId::from(s)),
        }
    }

    #[test]
    fn parses_reserved_elements() {
        let pat = p("$Q , said $S .");
        assert_eq!(
            pat.elements,
            vec![
                PatternToken::Quote,
                PatternToken::literal(","),
                PatternToken::literal("said"),
                PatternToken::Speaker,
                PatternToken::literal("."),
            ]
        );
        assert_eq!(pat.to_string(), "$Q , said $S .");
        assert!(pat.is_valid(5));
    }

    #[test]
    fn escaped_literals_round_trip() {
        let pat = Pattern::new(vec![
            PatternToken::Quote,
            PatternToken::literal("*"),
            PatternToken::literal("$S"),
            PatternToken::literal("\\x"),
            PatternToken::Speaker,
            PatternToken::literal("."),
        ]);
        let text = pat.to_string();
        assert_eq!(text, "$Q \\* \\$S \\\\x $S .");
        assert_eq!(p(&text), pat);
    }

    #[test]
    fn empty_and_backslash_rejected() {
        assert!("".parse::<Pattern>().is_err());
        assert!("$Q \\ $S .".parse::<Pattern>().is_err());
    }

    #[test]
    fn boundary_violations() {
        assert_eq!(
            p("* $Q said $S").violations(5),
            vec![Violation::StartsWithWildcard, Violation::EndsWithSpeaker]
        );
        assert_eq!(p("$Q said $S").violations(5), vec![Violation::EndsWithSpeaker]);
        assert_eq!(p("$S said $Q").violations(5), vec![Violation::StartsWithSpeaker]);
        assert_eq!(p("$Q said $S *").violations(5), vec![Violation::EndsWithWildcard]);
    }

    #[test]
    fn placeholder_counts() {
        assert_eq!(
            p("$Q said .").violations(5),
            vec![Violation::SpeakerPlaceholders(0)]
        );
        assert_eq!(
            p("$Q $Q $S .").violations(5),
            vec![Violation::QuotePlaceholders(2)]
        );
    }

    #[test]
    fn wildcard_run_limit() {
        assert!(p("$Q , * * * * * $S .").is_valid(5));
        assert_eq!(
            p("$Q , * * * * * * $S .").violations(5),
            vec![Violation::WildcardRun { len: 6, max: 5 }]
        );
    }

    #[test]
    fn orientation_follows_placeholder_order() {
        assert_eq!(p("$Q , said $S .").orientation(), Some(Orientation::QuoteFirst));
        assert_eq!(p("Mr . $S said : $Q").orientation(), Some(Orientation::SpeakerFirst));
    }

    #[test]
    fn seed_matches_first_document() {
        let units = vec![tok("Hello"), q(0), tok(","), tok("said"), sp("queequeg"), tok(".")];
        let m = p("$Q , said $S .").find_iter(&units);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].cluster, ClusterId(0));
        assert_eq!(m[0].speaker.as_str(), "queequeg");
        assert_eq!((m[0].start, m[0].end), (1, 6));
    }

    #[test]
    fn title_blocks_seed_but_matches_longer_pattern() {
        let units = vec![q(1), tok(","), tok("said"), tok("Mr"), tok("."), sp("melville"), tok(".")];
        assert!(p("$Q , said $S .").find_iter(&units).is_empty());
        let m = p("$Q , said Mr . $S .").find_iter(&units);
        assert_eq!(m[0].speaker.as_str(), "melville");
    }

    #[test]
    fn wildcard_takes_one_plain_token() {
        let pat = p("$Q , said * writer $S .");
        let units = vec![q(2), tok(","), tok("said"), tok("Nauruan"), tok("writer"), sp("x"), tok(".")];
        assert_eq!(pat.find_iter(&units).len(), 1);
        let blocked = vec![q(2), tok(","), tok("said"), sp("y"), tok("writer"), sp("x"), tok(".")];
        assert!(pat.find_iter(&blocked).is_empty());
    }

    #[test]
    fn unresolved_speaker_does_not_match() {
        let units = vec![q(0), tok(","), tok("said"), Unit::Speaker { speaker: None }, tok(".")];
        assert!(p("$Q , said $S .").find_iter(&units).is_empty());
        assert!(p("$Q , said * .").find_iter(&units).is_empty());
    }

    #[test]
    fn matches_do_not_overlap() {
        let units = vec![q(0), tok("x"), q(1), tok("x"), sp("a"), tok(".")];
        let m = p("$Q x * x $S .").find_iter(&units);
        assert!(m.is_empty());
        let units = vec![q(0), sp("a"), tok("."), q(1), sp("b"), tok(".")];
        let m = p("$Q $S .").find_iter(&units);
        assert_eq!(m.len(), 2);
        assert!(m[0].end <= m[1].start);
    }

    #[test]
    fn trie_agrees_with_single_patterns() {
        let pats = vec![
            p("$Q , said $S ."),
            p("$Q , said Mr . $S ."),
            p("$Q , * Mr . $S ."),
            p("$S said : $Q ."),
        ];
        let units = vec![
            q(0), tok(","), tok("said"), tok("Mr"), tok("."), sp("m"), tok("."),
            sp("a"), tok("said"), tok(":"), q(1), tok("."),
            q(2), tok(","), tok("said"), sp("b"), tok("."),
        ];
        let trie = PatternTrie::new(&pats);
        let mut got = trie.find_all(&units);
        got.sort();
        let mut want: Vec<(usize, MatchResult)> = pats
            .iter()
            .enumerate()
            .flat_map(|(i, pat)| pat.find_iter(&units).into_iter().map(move |m| (i, m)))
            .collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn precision_rules() {
        let mut s = PatternStats::default();
        assert_eq!(precision(&s, Origin::Seed), 1.0);
        assert_eq!(precision(&s, Origin::Inferred(2)), 0.0);
        for _ in 0..3 {
            s.add_positive(1.0);
        }
        s.add_negative(1.0);
        assert_eq!(precision(&s, Origin::Inferred(2)), 0.75);
    }

    #[test]
    fn weighted_precision() {
        let mut s = PatternStats::default();
        s.add_positive(match_weight(10, 10.0));
        s.add_positive(match_weight(10, 10.0));
        s.add_negative(match_weight(2, 10.0));
        let want = 2.0 * 1f64.tanh() / (2.0 * 1f64.tanh() + 0.2f64.tanh());
        assert!((precision(&s, Origin::Seed) - want).abs() < 1e-12);
        assert!((want - 0.885).abs() < 1e-3);
    }

    #[test]
    fn weight_shape() {
        assert_eq!(match_weight(0, 10.0), 0.0);
        assert!((match_weight(10, 10.0) - 0.761_594_155_955_764_9).abs() < 1e-12);
        assert!(match_weight(1000, 10.0) > 0.999_999);
        assert!(match_weight(1000, 10.0) <= 1.0);
    }
}
