//! Substructure mining inside a single relation: k-means over the
//! relation's per-triple translation vectors, k-selection scores,
//! cohesion/separation, exemplar sampling and a 2D PCA projection.

mod kmeans;
mod pca;
mod quality;
mod scores;

use crate::embedding::{translation_vector, EmbeddingTable};
use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, RelationId};

pub use kmeans::{lloyd_kmeans, ClusteringResult, KMeansConfig};
pub use pca::{pca_project_2d, Projection};
pub use quality::{
    cluster_quality, cohesion_scores, sample_cluster_exemplars, separation_scores, ClusterCohesion,
    ClusterQualityReport, Exemplar, QualityRow,
};
pub use scores::{
    adjusted_rand_index, calinski_harabasz, davies_bouldin, elbow_curve, k_selection_scores, silhouette,
    KSelectionCurve, KSelectionOptions,
};

/// Row-major point matrix with a back-reference to the triple behind
/// each row.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dimension: usize,
    data: Vec<f64>,
    triple_indices: Vec<usize>,
}

impl PointSet {
    pub fn new(dimension: usize, data: Vec<f64>, triple_indices: Vec<usize>) -> Result<Self> {
        if dimension == 0 || data.len() != dimension * triple_indices.len() {
            return Err(Error::invalid("point matrix shape does not match row count"));
        }
        Ok(Self { dimension, data, triple_indices })
    }

    /// Points without triple back-references (rows are numbered 0..n).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dimension = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dimension) {
            return Err(Error::invalid("rows have different dimensions"));
        }
        Self::new(dimension, rows.concat(), (0..rows.len()).collect())
    }

    pub fn len(&self) -> usize {
        self.triple_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triple_indices.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dimension)
    }

    pub fn triple_indices(&self) -> &[usize] {
        &self.triple_indices
    }

    /// Subset of rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> PointSet {
        let mut data = Vec::with_capacity(rows.len() * self.dimension);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        PointSet {
            dimension: self.dimension,
            data,
            triple_indices: rows.iter().map(|&r| self.triple_indices[r]).collect(),
        }
    }
}

/// One translation vector per triple of `relation`.
pub fn relation_point_set(table: &EmbeddingTable, graph: &KnowledgeGraph, relation: RelationId) -> Result<PointSet> {
    if relation.index() >= graph.num_relations() {
        return Err(Error::UnknownRelation(format!("#{}", relation.0)));
    }
    let indices = graph.relation_triple_indices(relation).to_vec();
    if indices.is_empty() {
        return Err(Error::Empty(format!("relation `{}` has no triples", graph.relation_name(relation))));
    }
    let mut data = Vec::with_capacity(indices.len() * table.dimension());
    for &i in &indices {
        data.extend(translation_vector(table, graph, graph.triple(i))?);
    }
    PointSet::new(table.dimension(), data, indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_rows_match_translations() {
        let g = KnowledgeGraph::from_triples([("a", "r", "b"), ("b", "s", "c"), ("c", "r", "a"), ("a", "r", "c")]);
        let mut table = EmbeddingTable::zeros(&g, 2);
        table.set_entity("a", &[1.0, 0.0]).unwrap();
        table.set_entity("b", &[0.0, 2.0]).unwrap();
        table.set_entity("c", &[3.0, 1.0]).unwrap();
        let r = g.relation_id("r").unwrap();
        let ps = relation_point_set(&table, &g, r).unwrap();
        assert_eq!(ps.len(), 3);
        for (row, &ti) in ps.rows().zip(ps.triple_indices()) {
            assert_eq!(row, translation_vector(&table, &g, g.triple(ti)).unwrap().as_slice());
        }
        let s = relation_point_set(&table, &g, g.relation_id("s").unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.row(0), &[3.0, -1.0]);
        assert!(relation_point_set(&table, &g, RelationId(9)).is_err());
    }
}
