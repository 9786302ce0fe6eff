//! Precision and recall against a ground truth, the nearest-speaker
//! baseline, explicit-coverage estimation and CCDF tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::warn;
use serde::Serialize;

use crate::bootstrap::{resolve_conflicts, Candidate, PairTable};
use crate::corpus::{tokenize_text, QuoteTable, TokenKind};
use crate::entity::SpeakerId;
use crate::error::{Error, Result};
use crate::pattern::{MatchResult, Unit};
use crate::pipeline::PreparedCorpus;
use crate::quote::{group_sequences, GroupingOptions};

/// One labelled row of a ground-truth file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub quotation: String,
    pub speaker: SpeakerId,
    pub correct: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TruthLoadReport {
    pub rows: usize,
    pub malformed: usize,
}

/// Reads `quotation<TAB>speaker_id<TAB>label` rows. Blank lines and lines
/// starting with `#` are ignored; other malformed lines are counted.
pub fn parse_ground_truth<R: BufRead>(reader: R) -> Result<(Vec<TruthRow>, TruthLoadReport)> {
    let mut rows = Vec::new();
    let mut report = TruthLoadReport::default();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let parsed = match cols.as_slice() {
            [q, s, l] if !q.trim().is_empty() && !s.trim().is_empty() => match l.trim() {
                "1" => Some(true),
                "0" => Some(false),
                _ => None,
            }
            .map(|correct| TruthRow {
                quotation: q.trim().to_string(),
                speaker: SpeakerId(s.trim().to_string()),
                correct,
            }),
            _ => None,
        };
        match parsed {
            Some(r) => {
                rows.push(r);
                report.rows += 1;
            }
            None => {
                warn!("ground truth line {}: malformed, skipped", n + 1);
                report.malformed += 1;
            }
        }
    }
    Ok((rows, report))
}

pub fn load_ground_truth(path: &Path) -> Result<(Vec<TruthRow>, TruthLoadReport)> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_ground_truth(BufReader::new(f))
}

/// Relevant pairs plus the quotations and speakers the truth knows about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth<Q: Ord> {
    pub relevant_pairs: BTreeSet<(Q, SpeakerId)>,
    pub relevant_quotes: BTreeSet<Q>,
    pub relevant_speakers: BTreeSet<SpeakerId>,
}

impl<Q: Ord + Clone> GroundTruth<Q> {
    /// Label-1 pairs become relevant pairs; every row contributes its
    /// quotation and speaker to the known sets.
    pub fn from_labelled<I>(rows: I) -> Self
    where
        I: IntoIterator<Item = (Q, SpeakerId, bool)>,
    {
        let mut gt = GroundTruth {
            relevant_pairs: BTreeSet::new(),
            relevant_quotes: BTreeSet::new(),
            relevant_speakers: BTreeSet::new(),
        };
        for (q, s, correct) in rows {
            gt.relevant_quotes.insert(q.clone());
            gt.relevant_speakers.insert(s.clone());
            if correct {
                gt.relevant_pairs.insert((q, s));
            }
        }
        gt
    }
}

/// Which retrieved pairs are ignored as outside the ground truth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IgnoreRule {
    /// Ignore pairs whose quotation and speaker are both unknown.
    #[default]
    BothUnknown,
    /// Ignore pairs whose quotation or speaker is unknown.
    EitherUnknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    Micro,
    Macro,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Score {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub true_positives: usize,
    /// Retrieved pairs that count toward precision.
    pub judged: usize,
    pub relevant: usize,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl Score {
    fn new(tp: usize, judged: usize, relevant: usize) -> Self {
        Score {
            precision: ratio(tp, judged),
            recall: ratio(tp, relevant),
            true_positives: tp,
            judged,
            relevant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub mode: Averaging,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub overall: Score,
    pub per_speaker: BTreeMap<SpeakerId, Score>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Scores retrieved pairs against the ground truth.
pub fn evaluate<Q: Ord + Clone>(
    retrieved: &BTreeSet<(Q, SpeakerId)>,
    gt: &GroundTruth<Q>,
    mode: Averaging,
    rule: IgnoreRule,
) -> EvalResult {
    let judged: Vec<&(Q, SpeakerId)> = retrieved
        .iter()
        .filter(|(q, s)| {
            let q_unknown = !gt.relevant_quotes.contains(q);
            let s_unknown = !gt.relevant_speakers.contains(s);
            let ignored = match rule {
                IgnoreRule::BothUnknown => q_unknown && s_unknown,
                IgnoreRule::EitherUnknown => q_unknown || s_unknown,
            };
            !ignored
        })
        .collect();
    let tp = judged.iter().filter(|p| gt.relevant_pairs.contains(*p)).count();
    let overall = Score::new(tp, judged.len(), gt.relevant_pairs.len());

    let mut per_speaker = BTreeMap::new();
    for speaker in &gt.relevant_speakers {
        let own_quotes: BTreeSet<&Q> = gt
            .relevant_pairs
            .iter()
            .filter(|(_, s)| s == speaker)
            .map(|(q, _)| q)
            .collect();
        let relevant = own_quotes.len();
        let mine: Vec<&&(Q, SpeakerId)> = judged
            .iter()
            .filter(|(q, s)| s == speaker || own_quotes.contains(q))
            .collect();
        let tp = mine
            .iter()
            .filter(|(q, s)| s == speaker && own_quotes.contains(q))
            .count();
        per_speaker.insert(speaker.clone(), Score::new(tp, mine.len(), relevant));
    }

    let (precision, recall) = match mode {
        Averaging::Micro => (overall.precision, overall.recall),
        Averaging::Macro => (
            mean(per_speaker.values().map(|s| s.precision)),
            mean(per_speaker.values().map(|s| s.recall)),
        ),
    };
    EvalResult {
        mode,
        precision,
        recall,
        overall,
        per_speaker,
    }
}

fn text_tokens(text: &str) -> Vec<String> {
    let (tokens, _) = tokenize_text(text, &QuoteTable::default());
    tokens
        .into_iter()
        .filter(|t| !matches!(t.kind, TokenKind::QuoteOpen | TokenKind::QuoteClose))
        .map(|t| t.surface)
        .collect()
}

/// Maps ground-truth and retrieved quotation texts onto shared keys by
/// grouping them together, so abridged variants compare equal. The key of
/// a group is its longest text (ties: smallest).
pub fn align_texts<'a, I>(texts: I, opts: GroupingOptions) -> BTreeMap<String, String>
where
    I: IntoIterator<Item = &'a str>,
{
    let distinct: Vec<&str> = texts
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let seqs: Vec<Vec<String>> = distinct.iter().map(|t| text_tokens(t)).collect();
    let groups = group_sequences(&seqs, opts);
    let mut key_of_group: BTreeMap<usize, &str> = BTreeMap::new();
    for (i, &g) in groups.iter().enumerate() {
        let t = distinct[i];
        key_of_group
            .entry(g)
            .and_modify(|k| {
                let longer = t.chars().count() > k.chars().count();
                let tie = t.chars().count() == k.chars().count() && t < *k;
                if longer || tie {
                    *k = t;
                }
            })
            .or_insert(t);
    }
    distinct
        .iter()
        .zip(&groups)
        .map(|(t, g)| (t.to_string(), key_of_group[g].to_string()))
        .collect()
}

/// Text-keyed evaluation of retrieved `(quotation text, speaker)` pairs.
pub fn evaluate_texts(
    retrieved: &[(String, SpeakerId)],
    truth: &[TruthRow],
    mode: Averaging,
    rule: IgnoreRule,
    opts: GroupingOptions,
) -> EvalResult {
    let keys = align_texts(
        truth
            .iter()
            .map(|r| r.quotation.as_str())
            .chain(retrieved.iter().map(|(q, _)| q.as_str())),
        opts,
    );
    let gt = GroundTruth::from_labelled(
        truth
            .iter()
            .map(|r| (keys[&r.quotation].clone(), r.speaker.clone(), r.correct)),
    );
    let y: BTreeSet<(String, SpeakerId)> = retrieved
        .iter()
        .map(|(q, s)| (keys[q].clone(), s.clone()))
        .collect();
    evaluate(&y, &gt, mode, rule)
}

/// Pairs every quotation occurrence with the closest resolved speaker
/// mention within `window` units (earlier mention wins at equal distance),
/// then resolves conflicts with every attribution counted as certain.
pub fn nearest_speaker_baseline(corpus: &PreparedCorpus, window: usize) -> PairTable {
    let mut candidates = Vec::new();
    for s in &corpus.streams {
        for (qi, unit) in s.units.iter().enumerate() {
            let Unit::Quote { cluster } = unit else { continue };
            let resolved = |i: usize| match s.units.get(i) {
                Some(Unit::Speaker { speaker: Some(id) }) => Some(id.clone()),
                _ => None,
            };
            let found = (1..=window).find_map(|d| {
                qi.checked_sub(d)
                    .and_then(|i| resolved(i).map(|id| (i, id)))
                    .or_else(|| resolved(qi + d).map(|id| (qi + d, id)))
            });
            if let Some((si, speaker)) = found {
                candidates.push(Candidate {
                    doc_index: s.doc_index,
                    matched: MatchResult {
                        cluster: *cluster,
                        speaker,
                        start: qi.min(si),
                        end: qi.max(si) + 1,
                        quote_unit: qi,
                        speaker_unit: si,
                    },
                    pattern: 0,
                });
            }
        }
    }
    resolve_conflicts(&candidates, &[1.0], 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub x: f64,
    /// Set when no root exists away from zero and `x` is reported as 0.
    pub degenerate: bool,
}

pub const COVERAGE_TOLERANCE: f64 = 1e-9;

/// Solves `x = 1 - (1 - p x)^n` for its root in `(0, 1]` by bisection.
pub fn explicit_coverage(p: f64, n: u32) -> Result<Coverage> {
    if n < 2 {
        return Err(Error::CoverageDomain(n));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Config(format!(
            "explicit coverage needs 0 < p <= 1, got {p}"
        )));
    }
    let f = |x: f64| 1.0 - (1.0 - p * x).powi(n as i32) - x;
    if f(1.0) >= 0.0 {
        return Ok(Coverage {
            x: 1.0,
            degenerate: false,
        });
    }
    // f'(0) = n p - 1; without a positive slope at zero there is no
    // interior root.
    if n as f64 * p <= 1.0 {
        return Ok(Coverage {
            x: 0.0,
            degenerate: true,
        });
    }
    // f is concave with f(0) = 0 and f'(0) > 0, so it is positive below
    // the root and negative above it.
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > COVERAGE_TOLERANCE / 4.0 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Coverage {
        x: 0.5 * (lo + hi),
        degenerate: false,
    })
}

/// `(k, number of counts >= k)` for `k = 1..=max`.
pub fn ccdf(counts: &[usize]) -> Vec<(usize, usize)> {
    let Some(&max) = counts.iter().max() else {
        return Vec::new();
    };
    let mut hist = vec![0usize; max + 1];
    for &c in counts {
        hist[c] += 1;
    }
    let mut out = Vec::with_capacity(max);
    let mut at_least = counts.len();
    for (k, &h) in hist.iter().enumerate() {
        if k >= 1 {
            out.push((k, at_least));
        }
        at_least -= h;
    }
    out
}
