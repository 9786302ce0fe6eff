//! Counted word graph over candidate patterns, and generalization of rare
//! tokens into wildcards.
//!
//! The graph is a prefix trie whose vertices count how many inserted
//! patterns pass through them. Patterns with the speaker placeholder first
//! are stored reversed, so every path starts at the quotation placeholder.
//!
//! Generalization of one stored pattern works as follows. The *anchor* is
//! the deepest vertex on its path whose count reaches `n_min` (the root if
//! none does). Tokens up to the anchor are frequent prefixes and are kept.
//! The *scope* is the deepest vertex on the path where some inserted
//! patterns leave it (the root if none do). A token after both the anchor
//! and the scope is kept if it is a placeholder, or if at least `n_min`
//! patterns below the scope end with the same token sequence from that
//! point on. Every other token becomes a wildcard, placeholders excepted.
//! The scope does not depend on `n_min`, so raising the threshold only
//! ever turns more tokens into wildcards.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pattern::{Orientation, Pattern, PatternToken};

#[derive(Debug, Clone)]
pub struct Vertex {
    /// `None` only for the root.
    pub label: Option<PatternToken>,
    /// Inserted patterns whose path passes through this vertex.
    pub count: usize,
    /// Inserted patterns whose path ends here.
    pub terminal: usize,
    pub children: BTreeMap<PatternToken, usize>,
    depth: usize,
}

#[derive(Debug, Clone)]
pub struct Dawg {
    vertices: Vec<Vertex>,
    orientation: Option<Orientation>,
}

impl Default for Dawg {
    fn default() -> Self {
        Dawg {
            vertices: vec![Vertex {
                label: None,
                count: 0,
                terminal: 0,
                children: BTreeMap::new(),
                depth: 0,
            }],
            orientation: None,
        }
    }
}

impl Dawg {
    /// Builds the graph from patterns that all share one orientation.
    pub fn build<'a, I>(patterns: I) -> Result<Dawg>
    where
        I: IntoIterator<Item = &'a Pattern>,
    {
        let mut d = Dawg::default();
        for p in patterns {
            d.insert(p)?;
        }
        Ok(d)
    }

    pub fn insert(&mut self, p: &Pattern) -> Result<()> {
        let orientation = p.orientation().ok_or_else(|| Error::PatternSyntax {
            text: p.to_string(),
            reason: "needs one $Q and one $S".into(),
        })?;
        match self.orientation {
            Some(o) if o != orientation => return Err(Error::MixedOrientation),
            _ => self.orientation = Some(orientation),
        }
        let seq: Vec<PatternToken> = match orientation {
            Orientation::QuoteFirst => p.elements.clone(),
            Orientation::SpeakerFirst => p.elements.iter().rev().cloned().collect(),
        };
        let mut cur = 0;
        self.vertices[0].count += 1;
        for el in seq {
            let next = match self.vertices[cur].children.get(&el) {
                Some(&n) => n,
                None => {
                    let n = self.vertices.len();
                    let depth = self.vertices[cur].depth + 1;
                    self.vertices.push(Vertex {
                        label: Some(el.clone()),
                        count: 0,
                        terminal: 0,
                        children: BTreeMap::new(),
                        depth,
                    });
                    self.vertices[cur].children.insert(el, n);
                    n
                }
            };
            self.vertices[next].count += 1;
            cur = next;
        }
        self.vertices[cur].terminal += 1;
        Ok(())
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.orientation
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of inserted patterns.
    pub fn total(&self) -> usize {
        self.vertices[0].count
    }

    /// Count of the vertex reached by following `path` from the root, in
    /// stored (possibly reversed) order.
    pub fn path_count(&self, path: &[PatternToken]) -> Option<usize> {
        let mut cur = 0;
        for el in path {
            cur = *self.vertices[cur].children.get(el)?;
        }
        Some(self.vertices[cur].count)
    }

    /// Every stored pattern with its multiplicity, in depth-first order.
    pub fn stored(&self) -> Vec<(Pattern, usize)> {
        self.terminal_paths()
            .into_iter()
            .map(|path| {
                let last = *path.last().expect("terminal paths are non-empty");
                (self.to_pattern(self.labels(&path)), self.vertices[last].terminal)
            })
            .collect()
    }

    fn labels(&self, path: &[usize]) -> Vec<PatternToken> {
        path.iter()
            .map(|&v| self.vertices[v].label.clone().expect("non-root vertex"))
            .collect()
    }

    fn to_pattern(&self, mut seq: Vec<PatternToken>) -> Pattern {
        if self.orientation == Some(Orientation::SpeakerFirst) {
            seq.reverse();
        }
        Pattern::new(seq)
    }

    /// Vertex paths (root excluded) of all terminal vertices, depth first,
    /// children in label order.
    fn terminal_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.dfs(0, &mut path, &mut out);
        out
    }

    fn dfs(&self, v: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v != 0 {
            path.push(v);
            if self.vertices[v].terminal > 0 {
                out.push(path.clone());
            }
        }
        for &c in self.vertices[v].children.values() {
            self.dfs(c, path, out);
        }
        if v != 0 {
            path.pop();
        }
    }

    /// Terminal label sequences below `anchor`, restricted to the part
    /// after it, with multiplicities.
    fn tails_below(&self, anchor: usize) -> Vec<(Vec<PatternToken>, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(anchor, Vec::new())];
        while let Some((v, tail)) = stack.pop() {
            if v != anchor && self.vertices[v].terminal > 0 {
                out.push((tail.clone(), self.vertices[v].terminal));
            } else if v == anchor && self.vertices[v].terminal > 0 {
                out.push((Vec::new(), self.vertices[v].terminal));
            }
            for (label, &c) in &self.vertices[v].children {
                let mut t = tail.clone();
                t.push(label.clone());
                stack.push((c, t));
            }
        }
        out
    }

    /// Generalized pattern set for threshold `n_min` and wildcard-run limit
    /// `max_run`. Leading and trailing wildcards are trimmed before validation.
    pub fn generalize(&self, n_min: usize, max_run: usize) -> BTreeSet<Pattern> {
        let mut suffix_counts: HashMap<usize, HashMap<Vec<PatternToken>, usize>> = HashMap::new();
        let mut out = BTreeSet::new();
        for path in self.terminal_paths() {
            let anchor_pos = path
                .iter()
                .rposition(|&v| self.vertices[v].count >= n_min);
            let keep_upto = anchor_pos.map_or(0, |i| i + 1);
            // Number of leading path positions at or above the scope.
            let scope_len = (0..path.len())
                .rev()
                .find(|&i| {
                    let above = if i == 0 { 0 } else { path[i - 1] };
                    self.vertices[above].count > self.vertices[path[i]].count
                })
                .unwrap_or(0);
            let scope = if scope_len == 0 { 0 } else { path[scope_len - 1] };
            let labels = self.labels(&path);
            let counts = suffix_counts.entry(scope).or_insert_with(|| {
                let mut m: HashMap<Vec<PatternToken>, usize> = HashMap::new();
                for (tail, n) in self.tails_below(scope) {
                    for k in 0..tail.len() {
                        *m.entry(tail[k..].to_vec()).or_default() += n;
                    }
                }
                m
            });
            let generalized: Vec<PatternToken> = labels
                .iter()
                .enumerate()
                .map(|(j, el)| {
                    if j < keep_upto || el.is_placeholder() {
                        return el.clone();
                    }
                    let support = if j < scope_len {
                        0
                    } else {
                        counts.get(&labels[j..]).copied().unwrap_or(0)
                    };
                    if support >= n_min {
                        el.clone()
                    } else {
                        PatternToken::Wildcard
                    }
                })
                .collect();
            let mut p = self.to_pattern(generalized);
            trim_wildcards(&mut p);
            if p.is_valid(max_run) {
                out.insert(p);
            }
        }
        out
    }

    /// Graphviz rendering with `label [count]` vertices.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dawg {\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = match &v.label {
                None => "root".to_string(),
                Some(l) => l.to_string(),
            };
            let shape = if v.terminal > 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(
                s,
                "  v{i} [label=\"{} [{}]\", shape={shape}];",
                dot_escape(&label),
                v.count
            );
        }
        for (i, v) in self.vertices.iter().enumerate() {
            for &c in v.children.values() {
                let _ = writeln!(s, "  v{i} -> v{c};");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn trim_wildcards(p: &mut Pattern) {
    while p.elements.last() == Some(&PatternToken::Wildcard) {
        p.elements.pop();
    }
    let lead = p
        .elements
        .iter()
        .take_while(|t| **t == PatternToken::Wildcard)
        .count();
    p.elements.drain(..lead);
}

/// Splits patterns by orientation and generalizes each group. Invalid
/// patterns are skipped.
pub fn generalize_all(patterns: &[Pattern], n_min: usize, max_run: usize) -> BTreeSet<Pattern> {
    let mut out = BTreeSet::new();
    for orientation in [Orientation::QuoteFirst, Orientation::SpeakerFirst] {
        let group: Vec<&Pattern> = patterns
            .iter()
            .filter(|p| p.orientation() == Some(orientation))
            .collect();
        if group.is_empty() {
            continue;
        }
        let d = Dawg::build(group).expect("group has a single orientation");
        out.extend(d.generalize(n_min, max_run));
    }
    out
}
