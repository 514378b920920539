//! Translational entity/relation embeddings: the table itself, its
//! on-disk format, the trainer, and the similarity-list validation.

mod analysis;
mod train;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Triple};

pub use analysis::{
    centroid_vector, hits_at_k, similarity_lists, translation_vector, validate_profile, validate_relation, RelationProfile,
    ValidationOptions, ValidationRecord,
};
pub use train::{train, train_on, TrainConfig, TrainReport};

/// Dense vectors for every entity and relation of a graph.
///
/// Rows follow the interning order of the graph the table was created
/// for; lookups from other graphs go through entity and relation names.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    entity_names: Vec<String>,
    relation_names: Vec<String>,
    entity_rows: HashMap<String, usize>,
    relation_rows: HashMap<String, usize>,
    entities: Vec<f32>,
    relations: Vec<f32>,
}

fn row_index(names: &[String]) -> HashMap<String, usize> {
    names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect()
}

impl EmbeddingTable {
    /// Table with all-zero vectors for the graph's vocabulary.
    pub fn zeros(graph: &KnowledgeGraph, dimension: usize) -> Self {
        Self::from_parts(
            dimension,
            graph.entities().names().to_vec(),
            graph.relations().names().to_vec(),
            vec![0.0; graph.num_entities() * dimension],
            vec![0.0; graph.num_relations() * dimension],
        )
        .expect("sizes are consistent by construction")
    }

    /// Uniform initialization in `[-6/√d, 6/√d]`.
    pub fn random<R: Rng>(graph: &KnowledgeGraph, dimension: usize, rng: &mut R) -> Self {
        let mut table = Self::zeros(graph, dimension);
        let bound = 6.0 / (dimension as f32).sqrt();
        for x in table.entities.iter_mut().chain(table.relations.iter_mut()) {
            *x = rng.random_range(-bound..bound);
        }
        table
    }

    pub fn from_parts(
        dimension: usize,
        entity_names: Vec<String>,
        relation_names: Vec<String>,
        entities: Vec<f32>,
        relations: Vec<f32>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        if entities.len() != entity_names.len() * dimension || relations.len() != relation_names.len() * dimension {
            return Err(Error::invalid("embedding matrix size does not match vocabulary"));
        }
        if entities.iter().chain(&relations).any(|x| !x.is_finite()) {
            return Err(Error::invalid("embedding contains non-finite values"));
        }
        Ok(Self {
            dimension,
            entity_rows: row_index(&entity_names),
            relation_rows: row_index(&relation_names),
            entity_names,
            relation_names,
            entities,
            relations,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_entities(&self) -> usize {
        self.entity_names.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relation_names.len()
    }

    pub fn entity_names(&self) -> &[String] {
        &self.entity_names
    }

    pub fn relation_names(&self) -> &[String] {
        &self.relation_names
    }

    pub fn entity_row(&self, name: &str) -> Option<usize> {
        self.entity_rows.get(name).copied()
    }

    pub fn relation_row(&self, name: &str) -> Option<usize> {
        self.relation_rows.get(name).copied()
    }

    pub fn entity_at(&self, row: usize) -> &[f32] {
        &self.entities[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn relation_at(&self, row: usize) -> &[f32] {
        &self.relations[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn entity_at_mut(&mut self, row: usize) -> &mut [f32] {
        &mut self.entities[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn relation_at_mut(&mut self, row: usize) -> &mut [f32] {
        &mut self.relations[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn entity(&self, name: &str) -> Result<&[f32]> {
        self.entity_row(name)
            .map(|r| self.entity_at(r))
            .ok_or_else(|| Error::UnknownEntity(name.to_owned()))
    }

    pub fn relation(&self, name: &str) -> Result<&[f32]> {
        self.relation_row(name)
            .map(|r| self.relation_at(r))
            .ok_or_else(|| Error::UnknownRelation(name.to_owned()))
    }

    pub fn set_entity(&mut self, name: &str, values: &[f32]) -> Result<()> {
        let row = self.entity_row(name).ok_or_else(|| Error::UnknownEntity(name.to_owned()))?;
        self.entity_at_mut(row).copy_from_slice(values);
        Ok(())
    }

    pub fn set_relation(&mut self, name: &str, values: &[f32]) -> Result<()> {
        let row = self.relation_row(name).ok_or_else(|| Error::UnknownRelation(name.to_owned()))?;
        self.relation_at_mut(row).copy_from_slice(values);
        Ok(())
    }

    /// Entity and relation rows for a triple of `graph`.
    pub fn rows_for(&self, graph: &KnowledgeGraph, triple: Triple) -> Result<(usize, usize, usize)> {
        let (h, r, t) = graph.names(triple);
        let head = self.entity_row(h).ok_or_else(|| Error::UnknownEntity(h.to_owned()))?;
        let rel = self.relation_row(r).ok_or_else(|| Error::UnknownRelation(r.to_owned()))?;
        let tail = self.entity_row(t).ok_or_else(|| Error::UnknownEntity(t.to_owned()))?;
        Ok((head, rel, tail))
    }

    /// Rescales every entity vector to unit Euclidean norm.
    pub fn normalize_entities(&mut self) {
        for row in self.entities.chunks_mut(self.dimension) {
            let n = row.iter().map(|x| x * x).sum::<f32>().sqrt();
            if n > 0.0 {
                row.iter_mut().for_each(|x| *x /= n);
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entities.iter().chain(&self.relations).all(|x| x.is_finite())
    }

    /// Writes `<stem>.json` (header) and `<stem>.bin` (little-endian f32
    /// rows: entities, then relations, each in interning order).
    pub fn save(&self, stem: impl AsRef<Path>, meta: serde_json::Value) -> Result<(PathBuf, PathBuf)> {
        let (json_path, bin_path) = stem_paths(stem.as_ref());
        let header = TableHeader {
            format: HEADER_FORMAT.to_owned(),
            dimension: self.dimension,
            entity_count: self.num_entities(),
            relation_count: self.num_relations(),
            meta,
            entities: self.entity_names.clone(),
            relations: self.relation_names.clone(),
        };
        let file = File::create(&json_path).map_err(|e| Error::io(&json_path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &header)?;

        let file = File::create(&bin_path).map_err(|e| Error::io(&bin_path, e))?;
        let mut out = BufWriter::new(file);
        for x in self.entities.iter().chain(&self.relations) {
            out.write_all(&x.to_le_bytes()).map_err(|e| Error::io(&bin_path, e))?;
        }
        out.flush().map_err(|e| Error::io(&bin_path, e))?;
        Ok((json_path, bin_path))
    }

    pub fn load(stem: impl AsRef<Path>) -> Result<Self> {
        let (json_path, bin_path) = stem_paths(stem.as_ref());
        let file = File::open(&json_path).map_err(|e| Error::io(&json_path, e))?;
        let header: TableHeader = serde_json::from_reader(BufReader::new(file))?;
        if header.format != HEADER_FORMAT {
            return Err(Error::invalid(format!("unrecognized embedding header `{}`", header.format)));
        }
        if header.entities.len() != header.entity_count || header.relations.len() != header.relation_count {
            return Err(Error::invalid("embedding header counts disagree with name lists"));
        }
        let mut bytes = Vec::new();
        File::open(&bin_path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(&bin_path, e))?;
        let expected = (header.entity_count + header.relation_count) * header.dimension * 4;
        if bytes.len() != expected {
            return Err(Error::invalid(format!(
                "embedding matrix has {} bytes, header implies {expected}",
                bytes.len()
            )));
        }
        let values: Vec<f32> = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let split = header.entity_count * header.dimension;
        Self::from_parts(
            header.dimension,
            header.entities,
            header.relations,
            values[..split].to_vec(),
            values[split..].to_vec(),
        )
    }

    /// `kind,name,v0,...` rows for inspection.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["kind".to_owned(), "name".to_owned()];
        header.extend((0..self.dimension).map(|i| format!("v{i}")));
        w.write_record(&header)?;
        let rows = self
            .entity_names
            .iter()
            .enumerate()
            .map(|(i, n)| ("entity", n, self.entity_at(i)))
            .chain(self.relation_names.iter().enumerate().map(|(i, n)| ("relation", n, self.relation_at(i))));
        for (kind, name, vec) in rows {
            let mut record = vec![kind.to_owned(), name.clone()];
            record.extend(vec.iter().map(|x| format!("{x:.6}")));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }
}

const HEADER_FORMAT: &str = "kgscope-embeddings/1";

#[derive(Serialize, Deserialize)]
struct TableHeader {
    format: String,
    dimension: usize,
    entity_count: usize,
    relation_count: usize,
    #[serde(default)]
    meta: serde_json::Value,
    entities: Vec<String>,
    relations: Vec<String>,
}

fn stem_paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("json"), stem.with_extension("bin"))
}
