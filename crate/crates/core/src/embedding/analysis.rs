//! Per-relation translation analysis: centroids, similarity lists, and
//! the rank-correlation / divergence check between them.

use serde::{Deserialize, Serialize};

use super::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, RelationId, Triple};
use crate::numeric::{cosine, histogram, kl_divergence, spearman_rho};

fn widen(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| f64::from(x)).collect()
}

/// `t − h` for one triple of `graph`.
pub fn translation_vector(table: &EmbeddingTable, graph: &KnowledgeGraph, triple: Triple) -> Result<Vec<f64>> {
    let h = table.entity(graph.entity_name(triple.head))?;
    let t = table.entity(graph.entity_name(triple.tail))?;
    Ok(h.iter().zip(t).map(|(&h, &t)| f64::from(t) - f64::from(h)).collect())
}

fn relation_translations(
    table: &EmbeddingTable,
    graph: &KnowledgeGraph,
    relation: RelationId,
) -> Result<Vec<(usize, Vec<f64>)>> {
    graph
        .relation_triple_indices(relation)
        .iter()
        .map(|&i| translation_vector(table, graph, graph.triple(i)).map(|v| (i, v)))
        .collect()
}

fn mean_of(vectors: impl Iterator<Item = Vec<f64>>, dimension: usize) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; dimension];
    let mut n = 0usize;
    for v in vectors {
        sum.iter_mut().zip(&v).for_each(|(s, x)| *s += x);
        n += 1;
    }
    (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
}

/// Mean translation vector over all triples of `relation`.
pub fn centroid_vector(table: &EmbeddingTable, graph: &KnowledgeGraph, relation: RelationId) -> Result<Vec<f64>> {
    let translations = relation_translations(table, graph, relation)?;
    mean_of(translations.into_iter().map(|(_, v)| v), table.dimension())
        .ok_or_else(|| Error::Empty(format!("relation `{}` has no triples", graph.relation_name(relation))))
}

/// Centroid and direct vectors of a relation together with the aligned
/// cosine-similarity lists against every translation vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationProfile {
    pub relation: String,
    pub triple_count: usize,
    pub centroid: Vec<f64>,
    pub direct: Vec<f64>,
    /// Graph triple index of each list entry.
    pub triple_indices: Vec<usize>,
    /// cos(direct, t − h) per triple.
    pub direct_similarities: Vec<f64>,
    /// cos(centroid, t − h) per triple.
    pub centroid_similarities: Vec<f64>,
    /// Triples dropped because their translation vector is zero.
    pub skipped_zero: usize,
}

pub fn similarity_lists(table: &EmbeddingTable, graph: &KnowledgeGraph, relation: RelationId) -> Result<RelationProfile> {
    let name = graph.relation_name(relation);
    let direct = widen(table.relation(name)?);
    let translations = relation_translations(table, graph, relation)?;
    let centroid = mean_of(translations.iter().map(|(_, v)| v.clone()), table.dimension())
        .ok_or_else(|| Error::Empty(format!("relation `{name}` has no triples")))?;

    let mut profile = RelationProfile {
        relation: name.to_owned(),
        triple_count: translations.len(),
        centroid,
        direct,
        triple_indices: Vec::with_capacity(translations.len()),
        direct_similarities: Vec::with_capacity(translations.len()),
        centroid_similarities: Vec::with_capacity(translations.len()),
        skipped_zero: 0,
    };
    for (i, v) in &translations {
        match (cosine(&profile.direct, v), cosine(&profile.centroid, v)) {
            (Some(d), Some(c)) => {
                profile.triple_indices.push(*i);
                profile.direct_similarities.push(d);
                profile.centroid_similarities.push(c);
            }
            _ if v.iter().all(|&x| x == 0.0) => profile.skipped_zero += 1,
            _ => {
                return Err(Error::invalid(format!(
                    "relation `{name}` has a zero direct or centroid vector; cosine undefined"
                )))
            }
        }
    }
    if profile.skipped_zero > 0 {
        log::warn!("relation `{name}`: skipped {} zero translation vectors", profile.skipped_zero);
    }
    Ok(profile)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub bins: usize,
    pub epsilon: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { bins: 100, epsilon: 1e-9 }
    }
}

/// Agreement between the direct-vector and centroid similarity lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub relation: String,
    pub triples: usize,
    /// Signed Spearman correlation; `None` when a list is constant.
    pub spearman: Option<f64>,
    pub abs_spearman: Option<f64>,
    /// `D_KL(hist(centroid list) || hist(direct list))`.
    pub kl_divergence: f64,
}

pub fn validate_relation(
    table: &EmbeddingTable,
    graph: &KnowledgeGraph,
    relation: RelationId,
    options: &ValidationOptions,
) -> Result<ValidationRecord> {
    if options.bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let profile = similarity_lists(table, graph, relation)?;
    validate_profile(&profile, options)
}

/// Validation statistics from already computed similarity lists.
pub fn validate_profile(profile: &RelationProfile, options: &ValidationOptions) -> Result<ValidationRecord> {
    let direct = &profile.direct_similarities;
    let centroid = &profile.centroid_similarities;
    if direct.len() < 2 {
        return Err(Error::invalid(format!(
            "relation `{}` needs at least two usable triples for validation",
            profile.relation
        )));
    }
    let rho = spearman_rho(direct, centroid)?;
    // the direct-vector list is the reference distribution q
    let q = histogram(direct, options.bins, -1.0, 1.0);
    let p = histogram(centroid, options.bins, -1.0, 1.0);
    Ok(ValidationRecord {
        relation: profile.relation.clone(),
        triples: direct.len(),
        spearman: rho,
        abs_spearman: rho.map(f64::abs),
        kl_divergence: kl_divergence(&p, &q, options.epsilon)?,
    })
}

/// Fraction of `test` triples whose true tail ranks within the top `k`
/// of all table entities by ascending `‖h + r − e‖²`. Rank is one plus
/// the number of entities strictly closer than the true tail.
pub fn hits_at_k(table: &EmbeddingTable, test: &KnowledgeGraph, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if test.is_empty() {
        return Err(Error::Empty("hits@k needs at least one test triple".into()));
    }
    let dim = table.dimension();
    let mut query = vec![0.0f32; dim];
    let mut hits = 0usize;
    for &triple in test.triples() {
        let (h, r, t) = table.rows_for(test, triple)?;
        let (hv, rv) = (table.entity_at(h), table.relation_at(r));
        for i in 0..dim {
            query[i] = hv[i] + rv[i];
        }
        let score = |row: usize| -> f32 {
            table.entity_at(row).iter().zip(&query).map(|(e, q)| (q - e) * (q - e)).sum()
        };
        let truth = score(t);
        let closer = (0..table.num_entities()).filter(|&e| score(e) < truth).count();
        if closer < k {
            hits += 1;
        }
    }
    Ok(hits as f64 / test.len() as f64)
}
