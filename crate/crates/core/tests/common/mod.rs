//! Property checks shared by the property-test target and the acceptance
//! runner. Each check owns its strategy and an independent oracle, and runs
//! a deterministic proptest runner for the requested number of cases.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use quote_bootstrap::bootstrap::{run, BootstrapConfig};
use quote_bootstrap::corpus::Document;
use quote_bootstrap::dawg::Dawg;
use quote_bootstrap::entity::{AliasDictionary, SpeakerId};
use quote_bootstrap::eval::{ccdf, evaluate, Averaging, GroundTruth, IgnoreRule};
use quote_bootstrap::output::{pair_lines, write_pairs, write_pattern_dump};
use quote_bootstrap::pattern::{
    precision, Origin, Orientation, Pattern, PatternStats, PatternToken, PatternTrie, Unit,
};
use quote_bootstrap::pipeline::{PrepareOptions, PreparedCorpus};
use quote_bootstrap::quote::{cluster_quotations, ClusterId, GroupingOptions, QuotationSpan};
use quote_bootstrap::synth::{SynthConfig, SyntheticCorpus};

pub const MAX_RUN: usize = 3;

pub type CheckFn = fn(u32) -> Result<(), String>;

/// Every shared check with a short name.
pub fn all_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("pattern validation", check_pattern_validation as CheckFn),
        ("pattern text round trip", check_pattern_round_trip),
        ("match soundness and non-overlap", check_match_soundness),
        ("trie equals per-pattern matching", check_trie_matching),
        ("dawg lossless at threshold 0", check_dawg_lossless),
        ("dawg count conservation", check_dawg_counts),
        ("dawg generalization monotonicity", check_dawg_monotonicity),
        ("dawg outputs cover inputs", check_dawg_cover),
        ("clustering partition and transitivity", check_clustering),
        ("evaluate monotonicity and bounds", check_evaluate),
        ("ccdf non-increase", check_ccdf),
        ("precision bounds", check_precision_bounds),
        ("attributions never shrink", check_loop_invariants),
        ("byte-determinism of two identical runs", check_determinism),
    ]
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 2048,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

fn run_prop<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

// ----- strategies -----

const WORDS: [&str; 5] = ["said", "Mr", ",", ".", "the"];

fn literal() -> impl Strategy<Value = PatternToken> {
    prop_oneof![
        4 => proptest::sample::select(WORDS.to_vec()).prop_map(PatternToken::literal),
        1 => proptest::sample::select(vec!["$Q", "$S", "*", "\\", "\\x", "a\\b"]).prop_map(PatternToken::literal),
    ]
}

fn any_token() -> impl Strategy<Value = PatternToken> {
    prop_oneof![
        3 => literal(),
        2 => Just(PatternToken::Wildcard),
        1 => Just(PatternToken::Quote),
        1 => Just(PatternToken::Speaker),
    ]
}

fn any_pattern() -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(any_token(), 0..9).prop_map(Pattern::new)
}

fn filler() -> impl Strategy<Value = PatternToken> {
    prop_oneof![
        3 => proptest::sample::select(WORDS.to_vec()).prop_map(PatternToken::literal),
        1 => Just(PatternToken::Wildcard),
    ]
}

fn word_token() -> impl Strategy<Value = PatternToken> {
    proptest::sample::select(WORDS.to_vec()).prop_map(PatternToken::literal)
}

/// Valid patterns over the shared word list, either orientation. The outer
/// segment next to `$S` always ends in a word, so `$S` is never at an end.
fn valid_pattern() -> impl Strategy<Value = Pattern> {
    let seg = || proptest::collection::vec(filler(), 0..5);
    let outer = || (word_token(), seg());
    (seg(), seg(), outer(), any::<bool>())
        .prop_map(|(loose, inner, (edge, rest), quote_first)| {
            // `guarded` sits next to `$S` and ends in a word at the border.
            let mut guarded = rest;
            guarded.push(edge);
            let mut loose = loose;
            if loose.last() == Some(&PatternToken::Wildcard) {
                loose.pop();
            }
            let mut el = Vec::new();
            if quote_first {
                loose.reverse();
                el.extend(loose);
                el.push(PatternToken::Quote);
                el.extend(inner);
                el.push(PatternToken::Speaker);
                el.extend(guarded);
            } else {
                guarded.reverse();
                el.extend(guarded);
                el.push(PatternToken::Speaker);
                el.extend(inner);
                el.push(PatternToken::Quote);
                el.extend(loose);
            }
            Pattern::new(el)
        })
        .prop_filter("wildcard run too long", |p| oracle_valid(p, MAX_RUN))
}

fn quote_first_pattern() -> impl Strategy<Value = Pattern> {
    valid_pattern().prop_map(|p| match p.orientation() {
        Some(Orientation::SpeakerFirst) => p.reversed(),
        _ => p,
    })
}

fn unit() -> impl Strategy<Value = Unit> {
    prop_oneof![
        6 => proptest::sample::select(WORDS.to_vec()).prop_map(|w| Unit::Token(w.to_string())),
        2 => (0u32..3).prop_map(|c| Unit::Quote { cluster: ClusterId(c) }),
        2 => proptest::sample::select(vec!["a", "b"]).prop_map(|s| Unit::Speaker { speaker: Some(SpeakerId::from(s)) }),
        1 => Just(Unit::Speaker { speaker: None }),
    ]
}

fn units() -> impl Strategy<Value = Vec<Unit>> {
    proptest::collection::vec(unit(), 0..40)
}

// ----- oracles -----

fn oracle_valid(p: &Pattern, m: usize) -> bool {
    let el = &p.elements;
    let count = |t: &PatternToken| el.iter().filter(|e| *e == t).count();
    if el.is_empty() || count(&PatternToken::Quote) != 1 || count(&PatternToken::Speaker) != 1 {
        return false;
    }
    let bad_end = |t: &PatternToken| matches!(t, PatternToken::Wildcard | PatternToken::Speaker);
    if bad_end(&el[0]) || bad_end(&el[el.len() - 1]) {
        return false;
    }
    let mut run = 0;
    for t in el {
        run = if *t == PatternToken::Wildcard { run + 1 } else { 0 };
        if run > m {
            return false;
        }
    }
    true
}

fn accepts(el: &PatternToken, u: &Unit) -> bool {
    match (el, u) {
        (PatternToken::Literal(l), Unit::Token(t)) => l == t,
        (PatternToken::Wildcard, Unit::Token(_)) => true,
        (PatternToken::Quote, Unit::Quote { .. }) => true,
        (PatternToken::Speaker, Unit::Speaker { speaker: Some(_) }) => true,
        _ => false,
    }
}

/// `(start, end, cluster, speaker)` of every greedy left-to-right match.
fn oracle_matches(p: &Pattern, units: &[Unit]) -> Vec<(usize, usize, ClusterId, SpeakerId)> {
    let n = p.elements.len();
    let mut out = Vec::new();
    let mut i = 0;
    while n > 0 && i + n <= units.len() {
        let window = &units[i..i + n];
        if p.elements.iter().zip(window).all(|(e, u)| accepts(e, u)) {
            let mut cluster = None;
            let mut speaker = None;
            for (e, u) in p.elements.iter().zip(window) {
                match (e, u) {
                    (PatternToken::Quote, Unit::Quote { cluster: c }) => cluster = Some(*c),
                    (PatternToken::Speaker, Unit::Speaker { speaker: Some(s) }) => speaker = Some(s.clone()),
                    _ => {}
                }
            }
            out.push((i, i + n, cluster.unwrap(), speaker.unwrap()));
            i += n;
        } else {
            i += 1;
        }
    }
    out
}

fn literal_tokens(set: &BTreeSet<Pattern>) -> BTreeSet<String> {
    set.iter()
        .flat_map(|p| p.elements.iter())
        .filter_map(|t| match t {
            PatternToken::Literal(s) => Some(s.clone()),
            _ => None,
        })
        .collect()
}

// ----- checks -----

pub fn check_pattern_validation(cases: u32) -> Result<(), String> {
    run_prop(cases, (any_pattern(), 0usize..4), |(p, m)| {
        prop_assert_eq!(p.is_valid(m), oracle_valid(&p, m));
        prop_assert_eq!(p.violations(m).is_empty(), oracle_valid(&p, m));
        if oracle_valid(&p, m) {
            prop_assert!(Pattern::parse_valid(&p.to_string(), m).is_ok());
        } else {
            prop_assert!(Pattern::parse_valid(&p.to_string(), m).is_err());
        }
        Ok(())
    })
}

pub fn check_pattern_round_trip(cases: u32) -> Result<(), String> {
    run_prop(cases, any_pattern(), |p| {
        if p.is_empty() {
            prop_assert!(p.to_string().parse::<Pattern>().is_err());
            return Ok(());
        }
        let text = p.to_string();
        let back: Pattern = text.parse().map_err(|e| TestCaseError::fail(format!("{e}")))?;
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
        Ok(())
    })
}

pub fn check_match_soundness(cases: u32) -> Result<(), String> {
    run_prop(cases, (valid_pattern(), units()), |(p, units)| {
        let got = p.find_iter(&units);
        for pair in got.windows(2) {
            prop_assert!(pair[0].end <= pair[1].start, "overlap: {:?}", pair);
        }
        for m in &got {
            let again = p.matches_at(&units, m.start);
            prop_assert_eq!(again.as_ref(), Some(m));
            for (e, u) in p.elements.iter().zip(&units[m.start..m.end]) {
                prop_assert!(accepts(e, u));
                if *e == PatternToken::Wildcard {
                    prop_assert!(u.is_plain());
                }
            }
            let quote_ok = matches!(units[m.quote_unit], Unit::Quote { cluster } if cluster == m.cluster);
            let speaker_ok =
                matches!(&units[m.speaker_unit], Unit::Speaker { speaker: Some(s) } if *s == m.speaker);
            prop_assert!(quote_ok && speaker_ok);
        }
        let simple: Vec<_> = got
            .iter()
            .map(|m| (m.start, m.end, m.cluster, m.speaker.clone()))
            .collect();
        prop_assert_eq!(simple, oracle_matches(&p, &units));
        Ok(())
    })
}

pub fn check_trie_matching(cases: u32) -> Result<(), String> {
    let strat = (proptest::collection::vec(valid_pattern(), 1..6), units());
    run_prop(cases, strat, |(pats, units)| {
        let trie = PatternTrie::new(&pats);
        let mut got = trie.find_all(&units);
        got.sort();
        let mut want: Vec<_> = pats
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.find_iter(&units).into_iter().map(move |m| (i, m)))
            .collect();
        want.sort();
        prop_assert_eq!(got, want);
        Ok(())
    })
}

fn pattern_set() -> impl Strategy<Value = Vec<Pattern>> {
    proptest::collection::vec(quote_first_pattern(), 1..12)
}

pub fn check_dawg_lossless(cases: u32) -> Result<(), String> {
    run_prop(cases, pattern_set(), |pats| {
        let d = Dawg::build(&pats).map_err(|e| TestCaseError::fail(format!("{e}")))?;
        let want: BTreeSet<Pattern> = pats.iter().cloned().collect();
        prop_assert_eq!(d.generalize(0, MAX_RUN), want);
        Ok(())
    })
}

pub fn check_dawg_counts(cases: u32) -> Result<(), String> {
    run_prop(cases, pattern_set(), |pats| {
        let d = Dawg::build(&pats).map_err(|e| TestCaseError::fail(format!("{e}")))?;
        prop_assert_eq!(d.total(), pats.len());
        let v = d.vertices();
        let mut level = vec![0usize];
        let mut depth = 0;
        while !level.is_empty() {
            if depth > 0 {
                let sum: usize = level.iter().map(|&i| v[i].count).sum();
                let longer = pats.iter().filter(|p| p.len() >= depth).count();
                prop_assert_eq!(sum, longer, "depth {}", depth);
                prop_assert!(sum <= pats.len());
            }
            for &i in &level {
                let below: usize = v[i].children.values().map(|&c| v[c].count).sum();
                prop_assert_eq!(v[i].count, below + v[i].terminal);
            }
            level = level.iter().flat_map(|&i| v[i].children.values().copied()).collect();
            depth += 1;
        }
        Ok(())
    })
}

pub fn check_dawg_monotonicity(cases: u32) -> Result<(), String> {
    run_prop(cases, pattern_set(), |pats| {
        let d = Dawg::build(&pats).map_err(|e| TestCaseError::fail(format!("{e}")))?;
        let mut prev: Option<usize> = None;
        for n in 0..=pats.len() + 1 {
            let lits = literal_tokens(&d.generalize(n, MAX_RUN)).len();
            if let Some(p) = prev {
                prop_assert!(lits <= p, "n_min {}: {} literals after {}", n, lits, p);
            }
            prev = Some(lits);
        }
        Ok(())
    })
}

pub fn check_dawg_cover(cases: u32) -> Result<(), String> {
    run_prop(cases, (pattern_set(), 0usize..5), |(pats, n)| {
        let d = Dawg::build(&pats).map_err(|e| TestCaseError::fail(format!("{e}")))?;
        for g in d.generalize(n, MAX_RUN) {
            prop_assert!(g.is_valid(MAX_RUN));
            let covers = pats.iter().any(|p| {
                p.len() >= g.len()
                    && (0..=p.len() - g.len()).any(|off| {
                        g.elements.iter().zip(&p.elements[off..]).all(|(a, b)| match a {
                            PatternToken::Wildcard => matches!(b, PatternToken::Literal(_) | PatternToken::Wildcard),
                            _ => a == b,
                        })
                    })
            });
            prop_assert!(covers, "{} covers no input", g);
        }
        Ok(())
    })
}

fn spans_from(seqs: &[Vec<String>]) -> Vec<QuotationSpan> {
    seqs.iter()
        .enumerate()
        .map(|(i, t)| QuotationSpan {
            doc_index: i,
            doc_id: format!("d{i}"),
            open: 0,
            close: t.len() + 1,
            tokens: t.clone(),
            text: t.join(" "),
        })
        .collect()
}

/// Pairwise linking followed by a transitive closure, quadratic by design.
fn oracle_groups(seqs: &[Vec<String>], opts: GroupingOptions) -> Vec<Vec<bool>> {
    let norm: Vec<Vec<String>> = seqs
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| if opts.case_insensitive { t.to_lowercase() } else { t.clone() })
                .collect()
        })
        .collect();
    let n = norm.len();
    let l = opts.group_len;
    let linked = |a: &Vec<String>, b: &Vec<String>| {
        if a == b {
            return true;
        }
        if !opts.enabled || a.len() < l || b.len() < l {
            return false;
        }
        a.windows(l).any(|x| b.windows(l).any(|y| x == y))
    };
    let mut same = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            same[i][j] = linked(&norm[i], &norm[j]);
        }
    }
    for k in 0..n {
        let via = same[k].clone();
        for row in same.iter_mut() {
            if row[k] {
                for (cell, &hop) in row.iter_mut().zip(&via) {
                    *cell |= hop;
                }
            }
        }
    }
    same
}

pub fn check_clustering(cases: u32) -> Result<(), String> {
    let word = proptest::sample::select(vec!["a", "A", "b", "c", ","]).prop_map(String::from);
    let seqs = proptest::collection::vec(proptest::collection::vec(word, 0..10), 0..200);
    let opts = (2usize..5, any::<bool>(), any::<bool>()).prop_map(|(group_len, enabled, case_insensitive)| GroupingOptions {
        group_len,
        enabled,
        case_insensitive,
    });
    run_prop(cases.min(64), (seqs, opts), |(seqs, opts)| {
        let spans = spans_from(&seqs);
        let c = cluster_quotations(&spans, opts);
        prop_assert_eq!(c.assignment.len(), spans.len());
        let mut seen = vec![0usize; spans.len()];
        for (k, cl) in c.clusters.iter().enumerate() {
            prop_assert_eq!(cl.id, ClusterId(k as u32));
            prop_assert!(cl.members.contains(&cl.canonical));
            let longest = cl.members.iter().map(|&m| spans[m].len()).max().unwrap_or(0);
            prop_assert_eq!(spans[cl.canonical].len(), longest);
            for &m in &cl.members {
                seen[m] += 1;
                prop_assert_eq!(c.assignment[m], cl.id);
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1), "not a partition");
        let same = oracle_groups(&seqs, opts);
        for (i, row) in same.iter().enumerate() {
            for (j, &linked) in row.iter().enumerate() {
                prop_assert_eq!(c.assignment[i] == c.assignment[j], linked, "spans {} and {}", i, j);
            }
        }
        Ok(())
    })
}

type Pair = (u8, SpeakerId);

fn truth_strategy() -> impl Strategy<Value = (Vec<(u8, SpeakerId, bool)>, BTreeSet<Pair>)> {
    let speaker = (0u8..4).prop_map(|s| SpeakerId(format!("s{s}")));
    let row = (0u8..6, speaker.clone(), any::<bool>());
    let pair = (0u8..8, (0u8..5).prop_map(|s| SpeakerId(format!("s{s}"))));
    (
        proptest::collection::vec(row, 1..12),
        proptest::collection::btree_set(pair, 0..15),
    )
}

fn in_unit(x: Option<f64>) -> bool {
    x.is_none_or(|v| (0.0..=1.0).contains(&v))
}

pub fn check_evaluate(cases: u32) -> Result<(), String> {
    run_prop(cases, (truth_strategy(), any::<prop::sample::Index>()), |((rows, y), pick)| {
        let gt = GroundTruth::from_labelled(rows);
        for rule in [IgnoreRule::BothUnknown, IgnoreRule::EitherUnknown] {
            for mode in [Averaging::Micro, Averaging::Macro] {
                let r = evaluate(&y, &gt, mode, rule);
                prop_assert!(in_unit(r.precision) && in_unit(r.recall));
                for s in r.per_speaker.values() {
                    prop_assert!(in_unit(s.precision) && in_unit(s.recall));
                }
            }
            let before = evaluate(&y, &gt, Averaging::Micro, rule);
            let missing: Vec<&Pair> = gt.relevant_pairs.iter().filter(|p| !y.contains(*p)).collect();
            if !missing.is_empty() {
                let mut y2 = y.clone();
                y2.insert((*pick.get(&missing)).clone());
                let after = evaluate(&y2, &gt, Averaging::Micro, rule);
                prop_assert!(after.precision.unwrap() >= before.precision.unwrap_or(0.0));
                prop_assert!(after.recall.unwrap() >= before.recall.unwrap());
            }
            let wrong: Vec<Pair> = gt
                .relevant_quotes
                .iter()
                .flat_map(|q| gt.relevant_speakers.iter().map(move |s| (*q, s.clone())))
                .filter(|p| !gt.relevant_pairs.contains(p) && !y.contains(p))
                .collect();
            if !wrong.is_empty() {
                let mut y2 = y.clone();
                y2.insert(pick.get(&wrong).clone());
                let after = evaluate(&y2, &gt, Averaging::Micro, rule);
                if let Some(p) = before.precision {
                    prop_assert!(after.precision.unwrap() <= p);
                }
                prop_assert_eq!(after.recall, before.recall);
            }
        }
        Ok(())
    })
}

pub fn check_ccdf(cases: u32) -> Result<(), String> {
    run_prop(cases, proptest::collection::vec(0usize..30, 0..60), |counts| {
        let table = ccdf(&counts);
        for w in table.windows(2) {
            prop_assert!(w[1].1 <= w[0].1);
            prop_assert_eq!(w[1].0, w[0].0 + 1);
        }
        for &(k, n) in &table {
            prop_assert_eq!(n, counts.iter().filter(|&&c| c >= k).count());
        }
        prop_assert_eq!(table.len(), counts.iter().copied().max().unwrap_or(0));
        Ok(())
    })
}

pub fn check_precision_bounds(cases: u32) -> Result<(), String> {
    let step = (any::<bool>(), 0.01f64..=1.0);
    let strat = (proptest::collection::vec(step, 0..20), any::<bool>());
    run_prop(cases, strat, |(steps, seed)| {
        let origin = if seed { Origin::Seed } else { Origin::Inferred(1) };
        let mut stats = PatternStats::default();
        let mut prev = precision(&stats, origin);
        prop_assert!((0.0..=1.0).contains(&prev));
        for (positive, w) in steps {
            if positive {
                stats.add_positive(w);
            } else {
                stats.add_negative(w);
            }
            let now = precision(&stats, origin);
            prop_assert!((0.0..=1.0).contains(&now));
            if positive {
                prop_assert!(now >= prev - 1e-12);
            } else {
                prop_assert!(now <= prev + 1e-12);
            }
            prev = now;
        }
        Ok(())
    })
}

/// A small synthetic corpus, prepared and ready for the loop.
pub fn small_corpus(seed: u64) -> (SyntheticCorpus, AliasDictionary, PreparedCorpus) {
    let cfg = SynthConfig {
        seed,
        pairs: 60,
        documents: 150,
        speakers: 30,
        bystanders: 10,
        max_occurrences: 15,
        ..SynthConfig::default()
    };
    let synth = SyntheticCorpus::generate(&cfg).expect("generator config is valid");
    let (dict, _) = AliasDictionary::from_rows(synth.aliases.clone(), true);
    let corpus = PreparedCorpus::build(synth.documents.clone(), &dict, &PrepareOptions::default());
    (synth, dict, corpus)
}

fn small_loop_config() -> BootstrapConfig {
    BootstrapConfig {
        min_support: 2,
        ..BootstrapConfig::default()
    }
}

pub fn check_loop_invariants(cases: u32) -> Result<(), String> {
    run_prop(cases.min(12), any::<u64>(), |seed| {
        let (_, _, corpus) = small_corpus(seed);
        let cfg = small_loop_config();
        let out = run(&corpus, &cfg).map_err(|e| TestCaseError::fail(format!("{e}")))?;
        let mut prev: BTreeMap<ClusterId, SpeakerId> = BTreeMap::new();
        for it in &out.iterations {
            for c in prev.keys() {
                prop_assert!(it.attribution.contains_key(c), "cluster {:?} lost", c);
            }
            prop_assert!(it.attribution.len() >= prev.len());
            prev = it.attribution.clone();
        }
        prop_assert!(out.iterations.len() <= cfg.max_iterations);
        for (i, p) in out.patterns.iter().enumerate() {
            prop_assert_eq!(p.origin == Origin::Seed, i < cfg.seeds.len());
        }
        let final_map: BTreeMap<ClusterId, SpeakerId> =
            out.table.iter().map(|(c, r)| (*c, r.speaker.clone())).collect();
        prop_assert_eq!(Some(&final_map), out.iterations.last().map(|i| &i.attribution));
        Ok(())
    })
}

/// Serialized pairs and pattern dump of one full run with `threads` workers.
pub fn run_bytes(documents: Vec<Document>, dict: &AliasDictionary, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        let corpus = PreparedCorpus::build(documents, dict, &PrepareOptions::default());
        let out = run(&corpus, &small_loop_config()).expect("run");
        let names: Vec<String> = out.patterns.iter().map(|p| p.pattern.to_string()).collect();
        let lines = pair_lines(&out.table, |i| names[i].clone(), &corpus, dict);
        let mut buf = Vec::new();
        write_pairs(&mut buf, &lines).expect("write");
        write_pattern_dump(&mut buf, &out.patterns).expect("write");
        buf
    })
}

pub fn check_determinism(cases: u32) -> Result<(), String> {
    run_prop(cases.min(4), any::<u64>(), |seed| {
        let (synth, dict, _) = small_corpus(seed);
        let a = run_bytes(synth.documents.clone(), &dict, 1);
        let b = run_bytes(synth.documents.clone(), &dict, 4);
        prop_assert!(!a.is_empty());
        prop_assert!(a == b, "runs differ for generator seed {}", seed);
        Ok(())
    })
}
