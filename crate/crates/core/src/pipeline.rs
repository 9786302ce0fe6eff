//! Turns ingested documents into annotated unit streams, with quotations
//! grouped into clusters and speaker mentions resolved.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{tokenize_with, Document, QuoteTable, TokenStream};
use crate::entity::{detect_mentions, resolve_mentions, AliasDictionary, EntityMention};
use crate::pattern::{AnnotatedStream, Unit, WeightUnit};
use crate::quote::{
    cluster_quotations, detect_quotations, ClusterId, Clustering, GroupingOptions, QuotationSpan,
    QuoteBounds,
};

#[derive(Debug, Clone, Default)]
pub struct PrepareOptions {
    pub quotes: QuoteTable,
    pub bounds: QuoteBounds,
    pub grouping: GroupingOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct PrepareReport {
    pub documents: usize,
    pub unbalanced_documents: usize,
    pub quotations: usize,
    pub quotations_dropped: usize,
    pub clusters: usize,
    pub mentions: usize,
    pub resolved_mentions: usize,
}

/// A corpus ready for pattern matching.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub documents: Vec<Document>,
    pub streams: Vec<AnnotatedStream>,
    pub spans: Vec<QuotationSpan>,
    pub clustering: Clustering,
    pub report: PrepareReport,
}

struct DocParts {
    tokens: TokenStream,
    spans: Vec<QuotationSpan>,
    dropped: usize,
    mentions: Vec<EntityMention>,
}

impl PreparedCorpus {
    pub fn build(documents: Vec<Document>, dict: &AliasDictionary, opts: &PrepareOptions) -> Self {
        let parts: Vec<DocParts> = documents
            .par_iter()
            .enumerate()
            .map(|(i, doc)| {
                let tokens = tokenize_with(doc, &opts.quotes);
                let det = detect_quotations(&tokens, &doc.text, i, opts.bounds);
                let mut mentions = detect_mentions(&tokens, dict);
                resolve_mentions(&mut mentions, dict);
                DocParts {
                    tokens,
                    spans: det.spans,
                    dropped: det.dropped,
                    mentions,
                }
            })
            .collect();

        let spans: Vec<QuotationSpan> = parts.iter().flat_map(|p| p.spans.iter().cloned()).collect();
        let clustering = cluster_quotations(&spans, opts.grouping);

        let mut offset = 0;
        let mut span_offsets = Vec::with_capacity(parts.len());
        for p in &parts {
            span_offsets.push(offset);
            offset += p.spans.len();
        }

        let streams: Vec<AnnotatedStream> = parts
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let clusters = &clustering.assignment[span_offsets[i]..span_offsets[i] + p.spans.len()];
                annotate(i, p, clusters)
            })
            .collect();

        let report = PrepareReport {
            documents: documents.len(),
            unbalanced_documents: parts.iter().filter(|p| !p.tokens.quotes_balanced).count(),
            quotations: spans.len(),
            quotations_dropped: parts.iter().map(|p| p.dropped).sum(),
            clusters: clustering.clusters.len(),
            mentions: parts.iter().map(|p| p.mentions.len()).sum(),
            resolved_mentions: parts
                .iter()
                .flat_map(|p| &p.mentions)
                .filter(|m| m.resolved.is_some())
                .count(),
        };

        PreparedCorpus {
            documents,
            streams,
            spans,
            clustering,
            report,
        }
    }

    pub fn cluster_text(&self, id: ClusterId) -> &str {
        &self.clustering.clusters[id.0 as usize].canonical_text
    }

    /// Length of a cluster's canonical text in the requested unit.
    pub fn cluster_length(&self, id: ClusterId, unit: WeightUnit) -> usize {
        let c = &self.clustering.clusters[id.0 as usize];
        match unit {
            WeightUnit::Tokens => c.canonical_tokens.len(),
            WeightUnit::Chars => c.canonical_text.chars().count(),
        }
    }

    /// Every occurrence of each cluster as `(document index, unit index)`.
    pub fn quote_positions(&self) -> BTreeMap<ClusterId, Vec<(usize, usize)>> {
        let mut out: BTreeMap<ClusterId, Vec<(usize, usize)>> = BTreeMap::new();
        for s in &self.streams {
            for (u, unit) in s.units.iter().enumerate() {
                if let Unit::Quote { cluster } = unit {
                    out.entry(*cluster).or_default().push((s.doc_index, u));
                }
            }
        }
        out
    }
}

fn annotate(doc_index: usize, p: &DocParts, clusters: &[ClusterId]) -> AnnotatedStream {
    let tokens = &p.tokens.tokens;
    // Per token: which quotation span or mention starts there.
    let mut starts: BTreeMap<usize, (usize, Unit)> = BTreeMap::new();
    for (span, cluster) in p.spans.iter().zip(clusters) {
        starts.insert(span.open, (span.close + 1, Unit::Quote { cluster: *cluster }));
    }
    for m in &p.mentions {
        starts.insert(
            m.token_span.0,
            (
                m.token_span.1,
                Unit::Speaker {
                    speaker: m.resolved.clone(),
                },
            ),
        );
    }

    let mut units = Vec::with_capacity(tokens.len());
    let mut ranges = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        match starts.get(&i) {
            Some((end, unit)) => {
                units.push(unit.clone());
                ranges.push((i, *end));
                i = *end;
            }
            None => {
                units.push(Unit::Token(tokens[i].surface.clone()));
                ranges.push((i, i + 1));
                i += 1;
            }
        }
    }
    AnnotatedStream {
        doc_index,
        doc_id: p.tokens.doc_id.clone(),
        units,
        token_ranges: ranges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::AliasRow;

    fn doc(id: &str, text: &str) -> Document {
        Document {
            doc_id: id.into(),
            site: "s".into(),
            published: None,
            text: text.into(),
        }
    }

    fn dict() -> AliasDictionary {
        AliasDictionary::from_rows(
            vec![
                AliasRow::new("Herman Melville", "melville", true),
                AliasRow::new("Melville", "melville", false),
            ],
            true,
        )
        .0
    }

    #[test]
    fn units_collapse_quotes_and_mentions() {
        let docs = vec![doc("a", "\u{201C}Oops, I did it\u{201D}, said Mr. Melville.")];
        let opts = PrepareOptions::default();
        let c = PreparedCorpus::build(docs, &dict(), &opts);
        let units = &c.streams[0].units;
        assert_eq!(units.len(), 7);
        assert!(matches!(units[0], Unit::Quote { cluster: ClusterId(0) }));
        assert_eq!(units[1], Unit::Token(",".into()));
        assert_eq!(
            units[5],
            Unit::Speaker {
                speaker: Some("melville".into())
            }
        );
        assert_eq!(c.report.clusters, 1);
        assert_eq!(c.cluster_text(ClusterId(0)), "Oops, I did it");
        assert_eq!(c.cluster_length(ClusterId(0), WeightUnit::Tokens), 5);
    }

    #[test]
    fn short_quotes_stay_plain_tokens() {
        let docs = vec![doc("a", "\u{201C}Hi\u{201D}, said Melville.")];
        let c = PreparedCorpus::build(docs, &dict(), &PrepareOptions::default());
        assert_eq!(c.report.quotations_dropped, 1);
        assert!(c.streams[0].units.iter().all(|u| !matches!(u, Unit::Quote { .. })));
    }

    #[test]
    fn repeated_quote_shares_a_cluster() {
        let docs = vec![
            doc("a", "\"We will win this\", said Melville."),
            doc("b", "Melville said: \"We will win this\"."),
        ];
        let c = PreparedCorpus::build(docs, &dict(), &PrepareOptions::default());
        assert_eq!(c.report.clusters, 1);
        let pos = c.quote_positions();
        assert_eq!(pos[&ClusterId(0)], vec![(0, 0), (1, 3)]);
    }
}
