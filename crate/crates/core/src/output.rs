//! File formats of the command-line tool. Attributed pairs are NDJSON;
//! pattern dumps double as seed files.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{ActivePattern, PairTable};
use crate::entity::{AliasDictionary, SpeakerId};
use crate::error::{Error, Result};
use crate::pattern::{Origin, Pattern};
use crate::pipeline::PreparedCorpus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccurrenceRecord {
    pub doc: String,
    pub site: String,
    pub pattern: String,
}

/// One output line per attributed quotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairLine {
    pub quotation: String,
    pub speaker_id: SpeakerId,
    pub speaker_name: String,
    pub confidence: f64,
    pub occurrences: Vec<OccurrenceRecord>,
    pub iteration: usize,
}

/// Output lines in cluster order. `pattern_name` renders the pattern index
/// stored with each occurrence.
pub fn pair_lines<F>(
    table: &PairTable,
    pattern_name: F,
    corpus: &PreparedCorpus,
    dict: &AliasDictionary,
) -> Vec<PairLine>
where
    F: Fn(usize) -> String,
{
    table
        .values()
        .map(|rec| PairLine {
            quotation: corpus.cluster_text(rec.cluster).to_string(),
            speaker_id: rec.speaker.clone(),
            speaker_name: dict.display_name(&rec.speaker),
            confidence: rec.confidence,
            occurrences: rec
                .occurrences
                .iter()
                .map(|o| {
                    let d = &corpus.documents[o.doc_index];
                    OccurrenceRecord {
                        doc: d.doc_id.clone(),
                        site: d.site.clone(),
                        pattern: pattern_name(o.pattern),
                    }
                })
                .collect(),
            iteration: rec.first_iteration,
        })
        .collect()
}

pub fn write_pairs<W: Write>(mut w: W, lines: &[PairLine]) -> Result<()> {
    for l in lines {
        serde_json::to_writer(&mut w, l)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pairs<R: BufRead>(reader: R) -> Result<Vec<PairLine>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

pub fn load_pairs(path: &Path) -> Result<Vec<PairLine>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_pairs(BufReader::new(f))
}

fn origin_label(o: Origin) -> String {
    match o {
        Origin::Seed => "seed".into(),
        Origin::Inferred(i) => format!("iteration-{i}"),
    }
}

/// One line per pattern: `pattern<TAB>precision<TAB>support<TAB>origin`.
pub fn write_pattern_dump<W: Write>(mut w: W, patterns: &[ActivePattern]) -> Result<()> {
    for p in patterns {
        writeln!(
            w,
            "{}\t{:.6}\t{}\t{}",
            p.pattern,
            p.precision,
            p.stats.support,
            origin_label(p.origin)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads patterns one per line. Only the first tab-separated column is
/// used, so pattern dumps can be fed back as seeds. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_seeds<R: BufRead>(reader: R, max_wildcard_run: usize) -> Result<Vec<Pattern>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let text = line.split('\t').next().unwrap_or_default().trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        out.push(Pattern::parse_valid(text, max_wildcard_run)?);
    }
    Ok(out)
}

pub fn load_seeds(path: &Path, max_wildcard_run: usize) -> Result<Vec<Pattern>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_seeds(BufReader::new(f), max_wildcard_run)
}
