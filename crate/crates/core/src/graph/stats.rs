use serde::{Deserialize, Serialize};

use super::KnowledgeGraph;

/// Per-relation counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationStats {
    pub relation: String,
    pub triples: usize,
    pub entities: usize,
    pub head_entities: usize,
    pub tail_entities: usize,
    /// `|heads| / |tails|`, `None` when the relation has no tails.
    pub head_tail_ratio: Option<f64>,
}

/// Summary counts for a whole graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub triples: usize,
    pub duplicates_removed: u64,
    pub entities: usize,
    pub head_entities: usize,
    pub tail_entities: usize,
    pub head_tail_overlap: usize,
    /// `entities / triples`, `None` for an empty graph.
    pub entity_triple_ratio: Option<f64>,
    pub relations: Vec<RelationStats>,
}

impl GraphStats {
    /// `|H| + |T| - |H ∩ T| == |V|`.
    pub fn inclusion_exclusion_holds(&self) -> bool {
        self.head_entities + self.tail_entities - self.head_tail_overlap == self.entities
    }
}

const HEAD: u8 = 1;
const TAIL: u8 = 2;

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den != 0).then(|| num as f64 / den as f64)
}

pub fn compute_stats(graph: &KnowledgeGraph) -> GraphStats {
    let mut roles = vec![0u8; graph.num_entities()];
    for t in graph.triples() {
        roles[t.head.index()] |= HEAD;
        roles[t.tail.index()] |= TAIL;
    }
    let count = |mask: u8| roles.iter().filter(|&&r| r & mask == mask).count();
    let head_entities = count(HEAD);
    let tail_entities = count(TAIL);
    let overlap = count(HEAD | TAIL);
    let entities = roles.iter().filter(|&&r| r != 0).count();

    // reuse one scratch buffer across relations, clearing only touched slots
    let mut scratch = vec![0u8; graph.num_entities()];
    let mut touched = Vec::new();
    let relations = graph
        .relation_ids()
        .map(|rel| {
            touched.clear();
            for t in graph.relation_triples(rel) {
                for (e, mask) in [(t.head, HEAD), (t.tail, TAIL)] {
                    let slot = &mut scratch[e.index()];
                    if *slot == 0 {
                        touched.push(e.index());
                    }
                    *slot |= mask;
                }
            }
            let heads = touched.iter().filter(|&&e| scratch[e] & HEAD != 0).count();
            let tails = touched.iter().filter(|&&e| scratch[e] & TAIL != 0).count();
            let stats = RelationStats {
                relation: graph.relation_name(rel).to_owned(),
                triples: graph.relation_triple_indices(rel).len(),
                entities: touched.len(),
                head_entities: heads,
                tail_entities: tails,
                head_tail_ratio: ratio(heads, tails),
            };
            for &e in &touched {
                scratch[e] = 0;
            }
            stats
        })
        .collect();

    GraphStats {
        triples: graph.len(),
        duplicates_removed: graph.duplicate_count(),
        entities,
        head_entities,
        tail_entities,
        head_tail_overlap: overlap,
        entity_triple_ratio: ratio(entities, graph.len()),
        relations,
    }
}
