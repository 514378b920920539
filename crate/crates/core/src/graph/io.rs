//! Edge-list readers and writers.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, KnowledgeGraph};
use crate::error::{Error, Result};

/// Supported edge-list layouts.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeFormat {
    /// ConceptNet assertion dump: assertion URI, relation URI, start URI,
    /// end URI, JSON metadata.
    ConceptnetDump,
    /// `head<TAB>relation<TAB>tail`, `#` lines are comments.
    #[serde(rename = "generic-3col")]
    Generic3Col,
}

impl FromStr for EdgeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conceptnet-dump" => Ok(EdgeFormat::ConceptnetDump),
            "generic-3col" => Ok(EdgeFormat::Generic3Col),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected conceptnet-dump or generic-3col)"
            ))),
        }
    }
}

impl std::fmt::Display for EdgeFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeFormat::ConceptnetDump => "conceptnet-dump",
            EdgeFormat::Generic3Col => "generic-3col",
        })
    }
}

pub fn parse_edge_file(path: impl AsRef<Path>, format: EdgeFormat) -> Result<KnowledgeGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_reader(BufReader::with_capacity(1 << 20, file), format).map_err(|err| match err {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_reader<R: BufRead>(mut reader: R, format: EdgeFormat) -> Result<KnowledgeGraph> {
    let mut builder = GraphBuilder::new();
    let mut line = String::new();
    let mut line_no = 0usize;
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(|e| Error::io("<input>", e))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        let text = line.trim_end_matches(['\n', '\r']);
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        match format {
            EdgeFormat::Generic3Col => {
                let mut cols = text.split('\t');
                let (Some(h), Some(r), Some(t), None) = (cols.next(), cols.next(), cols.next(), cols.next())
                else {
                    let n = text.split('\t').count();
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected 3 tab-separated columns, found {n}"),
                    });
                };
                builder.add(h, r, t);
            }
            EdgeFormat::ConceptnetDump => {
                let mut cols = text.split('\t');
                let _assertion = cols.next();
                let (Some(r), Some(h), Some(t)) = (cols.next(), cols.next(), cols.next()) else {
                    let n = text.split('\t').count();
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected at least 4 tab-separated columns, found {n}"),
                    });
                };
                // metadata column (if any) is left untouched
                builder.add(concept_key(h), relation_label(r), concept_key(t));
            }
        }
    }
    Ok(builder.build())
}

/// `/r/RelatedTo` → `RelatedTo`, `/r/dbpedia/genre` → `dbpedia/genre`.
pub fn relation_label(uri: &str) -> &str {
    uri.strip_prefix("/r/").unwrap_or(uri)
}

/// Concept URI truncated to `/c/<lang>/<term>`, dropping part-of-speech
/// and sense suffixes. Non-concept URIs are kept verbatim.
pub fn concept_key(uri: &str) -> &str {
    if !uri.starts_with("/c/") {
        return uri;
    }
    match uri.char_indices().filter(|&(_, c)| c == '/').nth(3) {
        Some((cut, _)) => &uri[..cut],
        None => uri,
    }
}

/// Bare term of a concept URI: `/c/en/person` → `person`.
pub fn concept_term(uri: &str) -> &str {
    let key = concept_key(uri);
    if key.starts_with("/c/") {
        key.rsplit('/').next().unwrap_or(key)
    } else {
        key
    }
}

/// Writes the graph as generic-3col, repeating each triple by its multiplicity.
pub fn write_generic<W: Write>(graph: &KnowledgeGraph, mut out: W) -> std::io::Result<()> {
    for (i, &triple) in graph.triples().iter().enumerate() {
        let (h, r, t) = graph.names(triple);
        for _ in 0..graph.multiplicity(i) {
            writeln!(out, "{h}\t{r}\t{t}")?;
        }
    }
    out.flush()
}

pub fn write_generic_file(graph: &KnowledgeGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_generic(graph, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
