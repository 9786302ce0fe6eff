//! Seeded generator of synthetic news corpora with planted attributions.
//!
//! Quotations are random word sequences; speakers have generated names.
//! Every planted `(quotation, speaker)` pair occurs a heavy-tailed number of
//! times, each time inside one of a fixed set of attribution templates.
//! Only one template matches the default seed pattern. Some contexts carry
//! a distractor name close to the quotation, and a configurable share of
//! speakers can be "shadowed", meaning all of their contexts carry one.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;
use crate::entity::{AliasRow, SpeakerId};
use crate::error::{Error, Result};
use crate::eval::TruthRow;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub pairs: usize,
    pub documents: usize,
    pub speakers: usize,
    /// Names that appear only as distractors.
    pub bystanders: usize,
    pub max_occurrences: usize,
    /// Exponent of the occurrence-count power law.
    pub alpha: f64,
    /// Share of contexts that get a distractor name.
    pub distractor_rate: f64,
    /// Share of speakers whose every context gets a distractor.
    pub shadowed_fraction: f64,
    /// Share of occurrences that quote a shortened variant.
    pub abridge_rate: f64,
    /// Share of mentions that use the last name only.
    pub partial_rate: f64,
    /// Chance that a speaker reuses an earlier speaker's last name.
    pub shared_last_names: f64,
    pub min_quote_len: usize,
    pub max_quote_len: usize,
    /// Shortened variants keep at least this many tokens.
    pub min_abridged_len: usize,
    /// Relative weight of the template matching the default seed.
    pub seed_template_weight: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            pairs: 500,
            documents: 2000,
            speakers: 150,
            bystanders: 40,
            max_occurrences: 40,
            alpha: 2.0,
            distractor_rate: 0.1,
            shadowed_fraction: 0.0,
            abridge_rate: 0.15,
            partial_rate: 0.3,
            shared_last_names: 0.1,
            min_quote_len: 12,
            max_quote_len: 24,
            min_abridged_len: 8,
            seed_template_weight: 0.1,
        }
    }
}

/// Attribution templates. `{Q}` is the quotation, `{S}` the speaker,
/// `{R}` a role and `{O}` an outlet. The first one matches `$Q , $S said`.
pub const TEMPLATES: [&str; 30] = [
    "{Q}, {S} said.",
    "{Q}, said {S}.",
    "{Q}, {S} told reporters.",
    "{Q}, {S} added.",
    "{Q}, according to {S}.",
    "{Q}, {R} {S} said.",
    "{Q}, said {R} {S}.",
    "{Q}, {S} told {O}.",
    "{Q}, {S} wrote.",
    "{Q}, {S} explained.",
    "{Q}, {S} stated.",
    "{Q}, {S} insisted.",
    "{Q}, {S} claimed.",
    "{Q}, {S} noted in a statement.",
    "{Q}, the {R} {S} said.",
    "{Q}, {S} told the {O} newsroom.",
    "{S} said: {Q}.",
    "{S} told reporters: {Q}.",
    "{S} said, {Q}.",
    "{R} {S} said: {Q}.",
    "According to {S}, {Q}.",
    "{S} wrote: {Q}.",
    "{S} added: {Q}.",
    "{S} declared: {Q}.",
    "In a statement, {S} said: {Q}.",
    "{S} told {O}: {Q}.",
    "{S} explained: {Q}.",
    "{S} tweeted: {Q}.",
    "{S} remarked: {Q}.",
    "{S} announced: {Q}.",
];

const ROLES: [&str; 10] = [
    "Senator", "Mayor", "Governor", "CEO", "Minister", "spokesman", "coach", "director",
    "professor", "chairman",
];

const OUTLETS: [&str; 6] = ["Reuters", "Bloomberg", "CNN", "Politico", "Axios", "NPR"];

const FILLER: [&str; 12] = [
    "The meeting lasted for several hours.",
    "Markets opened slightly higher on the day.",
    "Officials did not release further details.",
    "The weather delayed several flights in the region.",
    "Local schools remained open throughout the week.",
    "The committee is expected to vote next month.",
    "Analysts had predicted a different outcome.",
    "Tickets for the event sold out within minutes.",
    "The report was published late in the evening.",
    "Traffic was heavy on the main roads.",
    "A second session is planned for the spring.",
    "Several questions remained unanswered.",
];

const FIRST_NAMES: [&str; 24] = [
    "Anna", "Boris", "Carla", "David", "Elena", "Felix", "Grace", "Hugo", "Irene", "Jonas",
    "Karin", "Louis", "Maria", "Nils", "Olga", "Pedro", "Quinn", "Rosa", "Simon", "Tara",
    "Ulrich", "Vera", "Walter", "Yara",
];

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";
const NAME_SUFFIXES: [&str; 5] = ["son", "ez", "ov", "berg", "ard"];

/// One planted attribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedPair {
    pub quotation: String,
    pub speaker: SpeakerId,
    /// Number of contexts the pair was written into.
    pub occurrences: usize,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    pub aliases: Vec<AliasRow>,
    pub pairs: Vec<PlantedPair>,
    pub shadowed: BTreeSet<SpeakerId>,
}

struct Person {
    id: SpeakerId,
    first: String,
    last: String,
}

impl Person {
    fn full(&self) -> String {
        format!("{} {}", self.first, self.last)
    }
}

fn syllable(rng: &mut ChaCha8Rng) -> String {
    let c = CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char;
    let v = VOWELS[rng.gen_range(0..VOWELS.len())] as char;
    format!("{c}{v}")
}

fn word(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| syllable(rng)).collect()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn quote_body(rng: &mut ChaCha8Rng, len: usize) -> Vec<String> {
    (0..len)
        .map(|i| {
            let w = word(rng);
            if i == 0 {
                capitalize(&w)
            } else {
                w
            }
        })
        .collect()
}

fn join_quote(words: &[String]) -> String {
    let mut s = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(w);
    }
    s
}

fn quote_marks(rng: &mut ChaCha8Rng) -> (&'static str, &'static str) {
    match rng.gen_range(0..3) {
        0 => ("\u{201C}", "\u{201D}"),
        1 => ("\"", "\""),
        _ => ("\u{00AB}", "\u{00BB}"),
    }
}

impl SyntheticCorpus {
    pub fn generate(cfg: &SynthConfig) -> Result<Self> {
        if cfg.speakers == 0 || cfg.pairs == 0 || cfg.documents == 0 {
            return Err(Error::Config("generator needs speakers, pairs and documents".into()));
        }
        if cfg.min_abridged_len > cfg.min_quote_len || cfg.min_quote_len > cfg.max_quote_len {
            return Err(Error::Config("inconsistent quotation lengths".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

        let mut used_last: BTreeSet<String> = BTreeSet::new();
        let mut fresh_last = |rng: &mut ChaCha8Rng| loop {
            let suffix = NAME_SUFFIXES[rng.gen_range(0..NAME_SUFFIXES.len())];
            let name = capitalize(&format!("{}{}{suffix}", syllable(rng), syllable(rng)));
            if used_last.insert(name.clone()) {
                break name;
            }
        };
        let mut people: Vec<Person> = Vec::new();
        let total_people = cfg.speakers + cfg.bystanders;
        let mut used_full: BTreeSet<String> = BTreeSet::new();
        while people.len() < total_people {
            let i = people.len();
            let share = i > 0 && i < cfg.speakers && rng.gen_bool(cfg.shared_last_names);
            let last = if share {
                people[rng.gen_range(0..i.min(cfg.speakers))].last.clone()
            } else {
                fresh_last(&mut rng)
            };
            let first = FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())].to_string();
            if !used_full.insert(format!("{first} {last}")) {
                continue;
            }
            let prefix = if i < cfg.speakers { "sp" } else { "by" };
            people.push(Person {
                id: SpeakerId(format!("{prefix}{i:04}")),
                first,
                last,
            });
        }

        let mut aliases = Vec::new();
        for p in &people {
            aliases.push(AliasRow::new(&p.full(), p.id.as_str(), true));
            aliases.push(AliasRow::new(&p.last, p.id.as_str(), false));
        }

        let shadowed: BTreeSet<usize> = (0..cfg.speakers)
            .filter(|_| rng.gen_bool(cfg.shadowed_fraction.clamp(0.0, 1.0)))
            .collect();

        let count_weights: Vec<f64> = (1..=cfg.max_occurrences.max(1))
            .map(|k| (k as f64).powf(-cfg.alpha))
            .collect();
        let count_dist = WeightedIndex::new(&count_weights).expect("positive weights");
        let rest = (1.0 - cfg.seed_template_weight) / (TEMPLATES.len() - 1) as f64;
        let template_weights: Vec<f64> = (0..TEMPLATES.len())
            .map(|i| if i == 0 { cfg.seed_template_weight } else { rest })
            .collect();
        let template_dist = WeightedIndex::new(&template_weights).expect("positive weights");

        // Every speaker gets at least one pair when possible.
        let mut pairs = Vec::with_capacity(cfg.pairs);
        let mut quotes: Vec<Vec<String>> = Vec::with_capacity(cfg.pairs);
        let mut speaker_of: Vec<usize> = Vec::with_capacity(cfg.pairs);
        let mut seen_texts = BTreeSet::new();
        while pairs.len() < cfg.pairs {
            let i = pairs.len();
            let speaker = if i < cfg.speakers {
                i
            } else {
                rng.gen_range(0..cfg.speakers)
            };
            let len = rng.gen_range(cfg.min_quote_len..=cfg.max_quote_len);
            let words = quote_body(&mut rng, len);
            let text = join_quote(&words);
            if !seen_texts.insert(text.clone()) {
                continue;
            }
            let occurrences = count_dist.sample(&mut rng) + 1;
            pairs.push(PlantedPair {
                quotation: text,
                speaker: people[speaker].id.clone(),
                occurrences,
            });
            quotes.push(words);
            speaker_of.push(speaker);
        }

        let mut contexts: Vec<Vec<String>> = vec![Vec::new(); cfg.documents];
        for (pi, pair) in pairs.iter().enumerate() {
            let person = &people[speaker_of[pi]];
            for _ in 0..pair.occurrences {
                let doc = rng.gen_range(0..cfg.documents);
                let words = &quotes[pi];
                let body = if rng.gen_bool(cfg.abridge_rate) && words.len() > cfg.min_abridged_len {
                    let keep = rng.gen_range(cfg.min_abridged_len..words.len());
                    let start = rng.gen_range(0..=words.len() - keep);
                    join_quote(&words[start..start + keep])
                } else {
                    pair.quotation.clone()
                };
                let (open, close) = quote_marks(&mut rng);
                let quoted = format!("{open}{body}{close}");

                let partial = rng.gen_bool(cfg.partial_rate);
                let mention = if partial { person.last.clone() } else { person.full() };
                let template = TEMPLATES[template_dist.sample(&mut rng)];
                let role = ROLES[rng.gen_range(0..ROLES.len())];
                let outlet = OUTLETS[rng.gen_range(0..OUTLETS.len())];
                let mut sentence = template
                    .replace("{R}", role)
                    .replace("{O}", outlet)
                    .replace("{S}", &mention);

                let distract = shadowed.contains(&speaker_of[pi]) || rng.gen_bool(cfg.distractor_rate);
                let quote_first = template.starts_with("{Q}");
                if distract {
                    let other = loop {
                        let k = rng.gen_range(0..people.len());
                        if k != speaker_of[pi] && people[k].last != person.last {
                            break k;
                        }
                    };
                    let d = people[other].full();
                    if quote_first {
                        sentence = format!("Asked about {d}: {sentence}");
                    } else {
                        sentence = sentence.replacen("{Q}.", &format!("{{Q}} about {d}."), 1);
                    }
                }
                let sentence = sentence.replace("{Q}", &quoted);

                let mut text = String::new();
                if partial {
                    text.push_str(&format!("{} spoke at the event. ", person.full()));
                }
                text.push_str(&sentence);
                contexts[doc].push(text);
            }
        }

        let documents = contexts
            .into_iter()
            .enumerate()
            .map(|(i, ctx)| {
                let mut parts = vec![format!("Dispatch {i}.")];
                for c in ctx {
                    parts.push(FILLER[rng.gen_range(0..FILLER.len())].to_string());
                    parts.push(c);
                }
                parts.push(FILLER[rng.gen_range(0..FILLER.len())].to_string());
                Document {
                    doc_id: format!("doc{i:05}"),
                    site: OUTLETS[i % OUTLETS.len()].to_lowercase(),
                    published: None,
                    text: parts.join(" "),
                }
            })
            .collect();

        Ok(SyntheticCorpus {
            documents,
            aliases,
            pairs,
            shadowed: shadowed.into_iter().map(|i| people[i].id.clone()).collect(),
        })
    }

    /// Every planted pair as a correct ground-truth row.
    pub fn truth_rows(&self) -> Vec<TruthRow> {
        self.pairs
            .iter()
            .map(|p| TruthRow {
                quotation: p.quotation.clone(),
                speaker: p.speaker.clone(),
                correct: true,
            })
            .collect()
    }

    /// Writes `corpus.ndjson`, `aliases.tsv` and `truth.tsv` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| -> Result<BufWriter<File>> {
            let path = dir.join(name);
            File::create(&path)
                .map(BufWriter::new)
                .map_err(|e| Error::io(path, e))
        };
        let mut w = create("corpus.ndjson")?;
        for d in &self.documents {
            serde_json::to_writer(&mut w, &d.to_record())?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        let mut w = create("aliases.tsv")?;
        for a in &self.aliases {
            writeln!(w, "{}\t{}\t{}", a.alias, a.speaker, u8::from(a.canonical))?;
        }
        w.flush()?;
        let mut w = create("truth.tsv")?;
        for p in &self.pairs {
            writeln!(w, "{}\t{}\t1", p.quotation, p.speaker)?;
        }
        w.flush()?;
        Ok(())
    }
}
