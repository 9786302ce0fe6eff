//! The iterative extraction loop.
//!
//! Each iteration matches every active pattern against the corpus and
//! assigns each quotation to one speaker. It then learns new patterns from
//! the contexts in which known pairs occur. Learned patterns must be precise
//! against the attributions they were learned from before they are used.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::dawg::generalize_all;
use crate::entity::SpeakerId;
use crate::error::{Error, Result};
use crate::pattern::{
    match_weight, precision, MatchResult, Orientation, Origin, Pattern, PatternStats,
    PatternToken, PatternTrie, Unit, WeightUnit, DEFAULT_MAX_WILDCARD_RUN, DEFAULT_TAU,
};
use crate::pipeline::PreparedCorpus;
use crate::quote::ClusterId;

pub const DEFAULT_SEED: &str = "$Q , $S said";
pub const DEFAULT_THRESHOLDS: [f64; 4] = [0.0, 0.0002, 0.001, 0.005];
pub const DEFAULT_MAX_ITERATIONS: usize = 5;
pub const DEFAULT_FILTER_THRESHOLD: f64 = 0.7;
pub const DEFAULT_MIN_SUPPORT: usize = 5;
pub const DEFAULT_WINDOW: usize = 15;

/// Confidence values closer than this are treated as equal.
pub const CONFIDENCE_TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub seeds: Vec<Pattern>,
    pub max_iterations: usize,
    /// Clustering thresholds relative to the number of candidate patterns.
    pub thresholds: Vec<f64>,
    pub max_wildcard_run: usize,
    pub filter_threshold: f64,
    pub min_support: usize,
    pub tau: f64,
    pub weight_unit: WeightUnit,
    /// Largest unit distance between a quotation and a speaker mention for
    /// learning a pattern from their context.
    pub window: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            seeds: vec![DEFAULT_SEED.parse().expect("default seed parses")],
            max_iterations: DEFAULT_MAX_ITERATIONS,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            max_wildcard_run: DEFAULT_MAX_WILDCARD_RUN,
            filter_threshold: DEFAULT_FILTER_THRESHOLD,
            min_support: DEFAULT_MIN_SUPPORT,
            tau: DEFAULT_TAU,
            weight_unit: WeightUnit::Tokens,
            window: DEFAULT_WINDOW,
        }
    }
}

impl BootstrapConfig {
    pub fn check(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed pattern is required".into()));
        }
        for s in &self.seeds {
            if let Err(v) = s.validate(self.max_wildcard_run) {
                return Err(Error::Config(format!(
                    "invalid seed `{s}`: {}",
                    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                )));
            }
        }
        if !(self.filter_threshold > 0.0 && self.filter_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "filter threshold must be in (0, 1], got {}",
                self.filter_threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if self.max_wildcard_run == 0 {
            return Err(Error::Config("max_wildcard_run must be positive".into()));
        }
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(Error::Config(format!("tau must be positive, got {}", self.tau)));
        }
        if self.thresholds.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Config("thresholds must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivePattern {
    pub pattern: Pattern,
    pub origin: Origin,
    /// Latest measurement.
    pub stats: PatternStats,
    pub precision: f64,
}

impl ActivePattern {
    fn new(pattern: Pattern, origin: Origin, stats: PatternStats) -> Self {
        let precision = precision(&stats, origin);
        ActivePattern {
            pattern,
            origin,
            stats,
            precision,
        }
    }
}

/// One pattern match, located in the corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub doc_index: usize,
    pub matched: MatchResult,
    /// Index into the pattern list the candidates were matched with.
    pub pattern: usize,
}

impl Candidate {
    pub fn cluster(&self) -> ClusterId {
        self.matched.cluster
    }

    pub fn speaker(&self) -> &SpeakerId {
        &self.matched.speaker
    }

    pub fn context(&self) -> Context {
        (self.doc_index, self.matched.quote_unit, self.matched.speaker_unit)
    }
}

/// `(document, quotation unit, speaker unit)`.
pub type Context = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub doc_index: usize,
    pub start: usize,
    pub end: usize,
    pub pattern: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub cluster: ClusterId,
    pub speaker: SpeakerId,
    pub confidence: f64,
    pub patterns: BTreeSet<usize>,
    pub occurrences: Vec<Occurrence>,
    pub first_iteration: usize,
}

pub type PairTable = BTreeMap<ClusterId, PairRecord>;

/// Matches a pattern set against every stream. Output is ordered by
/// document, start unit and pattern index.
pub fn match_all(patterns: &[Pattern], corpus: &PreparedCorpus) -> Vec<Candidate> {
    if patterns.is_empty() {
        return Vec::new();
    }
    let trie = PatternTrie::new(patterns);
    corpus
        .streams
        .par_iter()
        .map(|s| {
            trie.find_all(&s.units)
                .into_iter()
                .map(|(pattern, matched)| Candidate {
                    doc_index: s.doc_index,
                    matched,
                    pattern,
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `1 - prod(1 - p)`.
pub fn confidence<I: IntoIterator<Item = f64>>(precisions: I) -> f64 {
    1.0 - precisions.into_iter().map(|p| 1.0 - p).product::<f64>()
}

/// Per-speaker evidence for one quotation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerEvidence {
    pub speaker: SpeakerId,
    pub confidence: f64,
    pub occurrences: usize,
}

/// Picks the winner among competing speakers: highest confidence, then
/// most occurrences, then smallest id. A winner needs positive confidence.
pub fn pick_speaker(evidence: &[SpeakerEvidence]) -> Option<&SpeakerEvidence> {
    let mut best: Option<&SpeakerEvidence> = None;
    for e in evidence {
        if e.confidence <= 0.0 {
            continue;
        }
        best = match best {
            None => Some(e),
            Some(b) => {
                let diff = e.confidence - b.confidence;
                let better = if diff.abs() <= CONFIDENCE_TIE_EPS {
                    e.occurrences > b.occurrences
                        || (e.occurrences == b.occurrences && e.speaker < b.speaker)
                } else {
                    diff > 0.0
                };
                Some(if better { e } else { b })
            }
        };
    }
    best
}

/// Assigns every matched quotation to at most one speaker. `precisions` is
/// indexed by candidate pattern index; `iteration` stamps new records.
pub fn resolve_conflicts(candidates: &[Candidate], precisions: &[f64], iteration: usize) -> PairTable {
    let mut by_cluster: BTreeMap<ClusterId, BTreeMap<&SpeakerId, Vec<&Candidate>>> = BTreeMap::new();
    for c in candidates {
        by_cluster
            .entry(c.cluster())
            .or_default()
            .entry(c.speaker())
            .or_default()
            .push(c);
    }
    let mut table = PairTable::new();
    for (cluster, speakers) in by_cluster {
        let evidence: Vec<SpeakerEvidence> = speakers
            .iter()
            .map(|(s, cands)| {
                let pats: BTreeSet<usize> = cands.iter().map(|c| c.pattern).collect();
                SpeakerEvidence {
                    speaker: (*s).clone(),
                    confidence: confidence(pats.iter().map(|&p| precisions[p])),
                    occurrences: cands.len(),
                }
            })
            .collect();
        let Some(win) = pick_speaker(&evidence) else { continue };
        let cands = &speakers[&win.speaker];
        table.insert(
            cluster,
            PairRecord {
                cluster,
                speaker: win.speaker.clone(),
                confidence: win.confidence,
                patterns: cands.iter().map(|c| c.pattern).collect(),
                occurrences: cands
                    .iter()
                    .map(|c| Occurrence {
                        doc_index: c.doc_index,
                        start: c.matched.start,
                        end: c.matched.end,
                        pattern: c.pattern,
                    })
                    .collect(),
                first_iteration: iteration,
            },
        );
    }
    table
}

/// Per-pattern classification of candidates against earlier attributions.
/// Each match is weighted by `weight(cluster)`.
pub fn classify_matches<F>(
    candidates: &[Candidate],
    n_patterns: usize,
    previous: &PairTable,
    weight: F,
) -> Vec<PatternStats>
where
    F: Fn(ClusterId) -> f64,
{
    let mut stats = vec![PatternStats::default(); n_patterns];
    let mut positive_clusters: Vec<BTreeSet<ClusterId>> = vec![BTreeSet::new(); n_patterns];
    for c in candidates {
        let s = &mut stats[c.pattern];
        match previous.get(&c.cluster()) {
            Some(rec) if rec.speaker == *c.speaker() => {
                s.add_positive(weight(c.cluster()));
                positive_clusters[c.pattern].insert(c.cluster());
            }
            Some(_) => s.add_negative(weight(c.cluster())),
            None => s.neutrals += 1,
        }
    }
    for (s, set) in stats.iter_mut().zip(positive_clusters) {
        s.support = set.len();
    }
    stats
}

/// Minimal patterns around every unconsumed co-occurrence of a known pair.
pub fn extract_candidate_patterns(
    table: &PairTable,
    corpus: &PreparedCorpus,
    consumed: &HashSet<Context>,
    window: usize,
) -> Vec<Pattern> {
    corpus
        .streams
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for (qi, unit) in s.units.iter().enumerate() {
                let Unit::Quote { cluster } = unit else { continue };
                let Some(rec) = table.get(cluster) else { continue };
                let lo = qi.saturating_sub(window);
                let hi = (qi + window).min(s.units.len().saturating_sub(1));
                for si in lo..=hi {
                    match &s.units[si] {
                        Unit::Speaker { speaker: Some(id) } if *id == rec.speaker => {}
                        _ => continue,
                    }
                    if consumed.contains(&(s.doc_index, qi, si)) {
                        continue;
                    }
                    if let Some(p) = context_pattern(&s.units, qi, si) {
                        out.push(p);
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The smallest valid pattern spanning the quotation at `qi` and the
/// speaker at `si`, or `None` if another quotation or mention sits between
/// them or the speaker cannot be enclosed by a plain token.
pub fn context_pattern(units: &[Unit], qi: usize, si: usize) -> Option<Pattern> {
    let (mut lo, mut hi) = (qi.min(si), qi.max(si));
    if units[lo + 1..hi].iter().any(|u| !u.is_plain()) {
        return None;
    }
    if lo == si {
        lo = lo.checked_sub(1)?;
        if !units[lo].is_plain() {
            return None;
        }
    }
    if hi == si {
        hi += 1;
        if !units.get(hi)?.is_plain() {
            return None;
        }
    }
    let elements = (lo..=hi)
        .map(|i| match &units[i] {
            _ if i == qi => PatternToken::Quote,
            _ if i == si => PatternToken::Speaker,
            Unit::Token(t) => PatternToken::Literal(t.clone()),
            _ => unreachable!("interior units are plain"),
        })
        .collect();
    Some(Pattern::new(elements))
}

/// Number of candidates that a relative threshold refers to.
pub fn absolute_threshold(relative: f64, n: usize) -> usize {
    (relative * n as f64).ceil() as usize
}

/// Union of the generalized candidate sets over every configured threshold,
/// computed separately per orientation.
pub fn cluster_candidates(candidates: &[Pattern], config: &BootstrapConfig) -> BTreeSet<Pattern> {
    let mut out = BTreeSet::new();
    for orientation in [Orientation::QuoteFirst, Orientation::SpeakerFirst] {
        let group: Vec<Pattern> = candidates
            .iter()
            .filter(|p| p.orientation() == Some(orientation))
            .cloned()
            .collect();
        if group.is_empty() {
            continue;
        }
        let n_mins: BTreeSet<usize> = config
            .thresholds
            .iter()
            .map(|&t| absolute_threshold(t, group.len()))
            .collect();
        let results: Vec<BTreeSet<Pattern>> = n_mins
            .par_iter()
            .map(|&n| generalize_all(&group, n, config.max_wildcard_run))
            .collect();
        for r in results {
            out.extend(r);
        }
    }
    out
}

/// Outcome of scoring one clustered pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPattern {
    pub pattern: Pattern,
    pub stats: PatternStats,
    pub precision: f64,
    pub admitted: bool,
}

/// Clusters candidates and scores each result against `table` with one
/// pass over the corpus. Results meeting both cutoffs are marked admitted;
/// patterns listed in `known` are skipped.
pub fn infer_patterns(
    candidates: &[Pattern],
    config: &BootstrapConfig,
    table: &PairTable,
    corpus: &PreparedCorpus,
    known: &BTreeSet<Pattern>,
    iteration: usize,
) -> Vec<ScoredPattern> {
    let clustered: Vec<Pattern> = cluster_candidates(candidates, config)
        .into_iter()
        .filter(|p| !known.contains(p))
        .collect();
    if clustered.is_empty() {
        return Vec::new();
    }
    let matches = match_all(&clustered, corpus);
    let stats = classify_matches(&matches, clustered.len(), table, |c| {
        match_weight(corpus.cluster_length(c, config.weight_unit), config.tau)
    });
    let origin = Origin::Inferred(iteration as u32);
    clustered
        .into_iter()
        .zip(stats)
        .map(|(pattern, stats)| {
            let precision = precision(&stats, origin);
            let admitted =
                precision >= config.filter_threshold && stats.support >= config.min_support;
            ScoredPattern {
                pattern,
                stats,
                precision,
                admitted,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationReport {
    pub iteration: usize,
    pub active_patterns: usize,
    pub matches: usize,
    pub pairs: usize,
    pub new_pairs: usize,
    pub changed_pairs: usize,
    pub candidate_patterns: usize,
    pub clustered_patterns: usize,
    pub admitted_patterns: usize,
    /// Quotation to speaker mapping at the end of the iteration.
    #[serde(skip)]
    pub attribution: BTreeMap<ClusterId, SpeakerId>,
    /// Raw candidate patterns before clustering.
    #[serde(skip)]
    pub candidates: Vec<Pattern>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: PairTable,
    /// Seeds first, then admitted patterns in admission order. Pair
    /// records refer to patterns by index into this list.
    pub patterns: Vec<ActivePattern>,
    pub iterations: Vec<IterationReport>,
    pub converged: bool,
}

/// Runs the loop until nothing changes or `max_iterations` is reached.
pub fn run(corpus: &PreparedCorpus, config: &BootstrapConfig) -> Result<RunOutput> {
    config.check()?;
    let weight = |c: ClusterId| match_weight(corpus.cluster_length(c, config.weight_unit), config.tau);

    let mut patterns: Vec<ActivePattern> = Vec::new();
    let mut known: BTreeSet<Pattern> = BTreeSet::new();
    for s in &config.seeds {
        if known.insert(s.clone()) {
            patterns.push(ActivePattern::new(s.clone(), Origin::Seed, PatternStats::default()));
        }
    }
    let mut table = PairTable::new();
    let mut consumed: HashSet<Context> = HashSet::new();
    let mut reports = Vec::new();
    let mut converged = false;

    for iteration in 1..=config.max_iterations {
        let plain: Vec<Pattern> = patterns.iter().map(|p| p.pattern.clone()).collect();
        let candidates = match_all(&plain, corpus);
        let stats = classify_matches(&candidates, patterns.len(), &table, weight);
        for (p, s) in patterns.iter_mut().zip(stats) {
            *p = ActivePattern::new(p.pattern.clone(), p.origin, s);
        }
        let precisions: Vec<f64> = patterns.iter().map(|p| p.precision).collect();
        consumed.extend(candidates.iter().map(Candidate::context));

        let mut next = resolve_conflicts(&candidates, &precisions, iteration);
        let mut new_pairs = 0;
        let mut changed_pairs = 0;
        for (cluster, rec) in next.iter_mut() {
            match table.get(cluster) {
                Some(old) if old.speaker == rec.speaker => rec.first_iteration = old.first_iteration,
                Some(_) => changed_pairs += 1,
                None => new_pairs += 1,
            }
        }
        for (cluster, old) in &table {
            next.entry(*cluster).or_insert_with(|| old.clone());
        }

        let extracted = extract_candidate_patterns(&next, corpus, &consumed, config.window);
        let scored = infer_patterns(&extracted, config, &next, corpus, &known, iteration);
        let admitted: Vec<&ScoredPattern> = scored.iter().filter(|s| s.admitted).collect();
        let admitted_count = admitted.len();
        for s in &admitted {
            known.insert(s.pattern.clone());
            patterns.push(ActivePattern {
                pattern: s.pattern.clone(),
                origin: Origin::Inferred(iteration as u32),
                stats: s.stats,
                precision: s.precision,
            });
            debug!("admitted `{}` (precision {:.3}, support {})", s.pattern, s.precision, s.stats.support);
        }

        let report = IterationReport {
            iteration,
            active_patterns: plain.len(),
            matches: candidates.len(),
            pairs: next.len(),
            new_pairs,
            changed_pairs,
            candidate_patterns: extracted.len(),
            clustered_patterns: scored.len(),
            admitted_patterns: admitted_count,
            attribution: next.iter().map(|(c, r)| (*c, r.speaker.clone())).collect(),
            candidates: extracted,
        };
        info!(
            "iteration {iteration}: {} patterns, {} matches, {} pairs (+{new_pairs}, ~{changed_pairs}), {} candidates, {} clustered, {} admitted",
            report.active_patterns,
            report.matches,
            report.pairs,
            report.candidate_patterns,
            report.clustered_patterns,
            report.admitted_patterns
        );
        let idle = new_pairs == 0 && changed_pairs == 0 && admitted_count == 0;
        table = next;
        reports.push(report);
        if idle {
            converged = true;
            break;
        }
    }

    Ok(RunOutput {
        table,
        patterns,
        iterations: reports,
        converged,
    })
}
