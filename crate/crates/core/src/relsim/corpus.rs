use std::io::BufRead;

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/relation_definitions.tsv");

/// Relation name → natural-language definition.
#[derive(Clone, Debug, PartialEq)]
pub struct DefinitionCorpus {
    entries: Vec<(String, String)>,
}

impl DefinitionCorpus {
    /// The 33 main ConceptNet 5 relation definitions.
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED.as_bytes()).expect("bundled corpus is well-formed")
    }

    pub fn new(entries: Vec<(String, String)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (name, text) in &entries {
            if text.trim().is_empty() {
                return Err(Error::invalid(format!("definition of `{name}` is empty")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("relation `{name}` defined twice")));
            }
        }
        Ok(Self { entries })
    }

    /// `relation<TAB>definition` lines; `#` lines are comments.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<definitions>", e))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, text) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `relation<TAB>definition`".into(),
            })?;
            entries.push((name.trim().to_owned(), text.trim().to_owned()));
        }
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, relation: &str) -> Option<&str> {
        self.entries.iter().find(|(n, _)| n == relation).map(|(_, d)| d.as_str())
    }

    /// Keeps only relations accepted by `keep`, preserving order.
    pub fn restricted_to(&self, keep: impl Fn(&str) -> bool) -> Self {
        Self { entries: self.entries.iter().filter(|(n, _)| keep(n)).cloned().collect() }
    }
}
