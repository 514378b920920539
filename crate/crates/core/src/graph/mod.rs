//! In-memory multi-relational knowledge graph.
//!
//! Entities and relations are interned to dense ids in first-seen order.
//! Duplicate `(head, relation, tail)` assertions are collapsed when the
//! graph is built; each stored triple keeps a multiplicity counter so the
//! original multiset can still be reproduced.

mod io;
mod stats;

use std::collections::HashSet;

use rustc_hash::FxHashMap;
use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    concept_key, concept_term, parse_edge_file, parse_reader, relation_label, write_generic, write_generic_file,
    EdgeFormat,
};
pub use stats::{compute_stats, GraphStats, RelationStats};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RelationId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub head: EntityId,
    pub relation: RelationId,
    pub tail: EntityId,
}

/// String interner handing out dense ids in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Vocab {
    names: Vec<String>,
    index: FxHashMap<String, u32>,
}

impl Vocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("vocabulary exceeds u32 range");
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Incrementally assembles a [`KnowledgeGraph`], collapsing duplicates.
#[derive(Default)]
pub struct GraphBuilder {
    entities: Vocab,
    relations: Vocab,
    triples: Vec<Triple>,
    multiplicity: Vec<u32>,
    seen: FxHashMap<Triple, usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, head: &str, relation: &str, tail: &str) -> Triple {
        let triple = Triple {
            head: EntityId(self.entities.intern(head)),
            relation: RelationId(self.relations.intern(relation)),
            tail: EntityId(self.entities.intern(tail)),
        };
        self.add_counted(triple, 1);
        triple
    }

    pub fn entity(&mut self, name: &str) -> EntityId {
        EntityId(self.entities.intern(name))
    }

    pub fn relation(&mut self, name: &str) -> RelationId {
        RelationId(self.relations.intern(name))
    }

    /// Adds a triple of ids obtained from [`entity`](Self::entity) and
    /// [`relation`](Self::relation).
    pub fn add_ids(&mut self, head: EntityId, relation: RelationId, tail: EntityId) -> Triple {
        assert!(
            head.index() < self.entities.len() && tail.index() < self.entities.len() && relation.index() < self.relations.len(),
            "id not issued by this builder"
        );
        let triple = Triple { head, relation, tail };
        self.add_counted(triple, 1);
        triple
    }

    fn add_counted(&mut self, triple: Triple, count: u32) {
        match self.seen.get(&triple) {
            Some(&slot) => self.multiplicity[slot] += count,
            None => {
                self.seen.insert(triple, self.triples.len());
                self.triples.push(triple);
                self.multiplicity.push(count);
            }
        }
    }

    pub fn build(self) -> KnowledgeGraph {
        let mut by_relation = vec![Vec::new(); self.relations.len()];
        for (i, t) in self.triples.iter().enumerate() {
            by_relation[t.relation.index()].push(i);
        }
        KnowledgeGraph {
            entities: self.entities,
            relations: self.relations,
            triples: self.triples,
            multiplicity: self.multiplicity,
            by_relation,
        }
    }
}

/// Immutable triple store with per-relation indices.
#[derive(Clone, Debug, Default)]
pub struct KnowledgeGraph {
    entities: Vocab,
    relations: Vocab,
    triples: Vec<Triple>,
    multiplicity: Vec<u32>,
    by_relation: Vec<Vec<usize>>,
}

impl KnowledgeGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Builds a graph from `(head, relation, tail)` string triples.
    pub fn from_triples<'a, I>(triples: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let mut builder = GraphBuilder::new();
        for (h, r, t) in triples {
            builder.add(h, r, t);
        }
        builder.build()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn triple(&self, index: usize) -> Triple {
        self.triples[index]
    }

    pub fn multiplicity(&self, index: usize) -> u32 {
        self.multiplicity[index]
    }

    /// Number of input assertions dropped as exact duplicates.
    pub fn duplicate_count(&self) -> u64 {
        self.multiplicity.iter().map(|&m| u64::from(m) - 1).sum()
    }

    pub fn entities(&self) -> &Vocab {
        &self.entities
    }

    pub fn relations(&self) -> &Vocab {
        &self.relations
    }

    pub fn num_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn entity_name(&self, id: EntityId) -> &str {
        self.entities.name(id.0)
    }

    pub fn relation_name(&self, id: RelationId) -> &str {
        self.relations.name(id.0)
    }

    pub fn entity_id(&self, name: &str) -> Option<EntityId> {
        self.entities.get(name).map(EntityId)
    }

    pub fn relation_id(&self, name: &str) -> Option<RelationId> {
        self.relations.get(name).map(RelationId)
    }

    pub fn require_relation(&self, name: &str) -> Result<RelationId> {
        self.relation_id(name).ok_or_else(|| Error::UnknownRelation(name.to_owned()))
    }

    pub fn relation_ids(&self) -> impl Iterator<Item = RelationId> {
        (0..self.relations.len() as u32).map(RelationId)
    }

    /// Indices (into [`Self::triples`]) of the triples carrying `relation`.
    pub fn relation_triple_indices(&self, relation: RelationId) -> &[usize] {
        self.by_relation.get(relation.index()).map_or(&[], Vec::as_slice)
    }

    pub fn relation_triples(&self, relation: RelationId) -> impl Iterator<Item = Triple> + '_ {
        self.relation_triple_indices(relation).iter().map(|&i| self.triples[i])
    }

    /// Human readable `(head, relation, tail)` for a stored triple.
    pub fn names(&self, triple: Triple) -> (&str, &str, &str) {
        (
            self.entity_name(triple.head),
            self.relation_name(triple.relation),
            self.entity_name(triple.tail),
        )
    }

    /// New graph holding the selected triples, re-interned in the given order.
    pub fn subgraph(&self, indices: &[usize]) -> KnowledgeGraph {
        let mut builder = GraphBuilder::new();
        for &i in indices {
            let (h, r, t) = self.names(self.triples[i]);
            let triple = Triple {
                head: EntityId(builder.entities.intern(h)),
                relation: RelationId(builder.relations.intern(r)),
                tail: EntityId(builder.entities.intern(t)),
            };
            builder.add_counted(triple, self.multiplicity[i]);
        }
        builder.build()
    }

    /// Drops every triple whose relation name is in `exclude`; the
    /// dictionaries are compacted to the symbols still referenced.
    pub fn filter_relations(&self, exclude: &HashSet<String>) -> KnowledgeGraph {
        if exclude.iter().all(|name| self.relation_id(name).is_none()) {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.triples.len())
            .filter(|&i| !exclude.contains(self.relation_name(self.triples[i].relation)))
            .collect();
        self.subgraph(&keep)
    }

    /// Uniform sample of `min(n, len)` distinct triples, kept in input order.
    pub fn sample_triples(&self, n: usize, seed: u64) -> KnowledgeGraph {
        if n >= self.triples.len() {
            return self.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = index::sample(&mut rng, self.triples.len(), n).into_vec();
        picked.sort_unstable();
        self.subgraph(&picked)
    }

    /// Shuffled partition into train, validation and test graphs.
    pub fn split(&self, spec: &SplitSpec) -> Result<DatasetSplit> {
        spec.validate()?;
        let n = self.triples.len();
        let (train_n, valid_n, _) = spec.sizes(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
        let part = |slice: &[usize]| {
            let mut idx = slice.to_vec();
            idx.sort_unstable();
            self.subgraph(&idx)
        };
        Ok(DatasetSplit {
            train: part(&order[..train_n]),
            validation: part(&order[train_n..train_n + valid_n]),
            test: part(&order[train_n + valid_n..]),
        })
    }
}

impl fmt::Display for KnowledgeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} triples, {} entities, {} relations",
            self.len(),
            self.num_entities(),
            self.num_relations()
        )
    }
}

/// Fractions for a train/validation/test split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSpec {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train: 0.75, validation: 0.125, test: 0.125, seed: 0 }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, f) in [("train", self.train), ("validation", self.validation), ("test", self.test)] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::invalid(format!("{name} fraction {f} outside [0, 1]")));
            }
        }
        let total = self.train + self.validation + self.test;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("split fractions sum to {total}, expected 1")));
        }
        Ok(())
    }

    /// Part sizes for `n` triples; validation and test are floored, train
    /// takes the remainder.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let valid = ((self.validation * n as f64).floor() as usize).min(n);
        let test = ((self.test * n as f64).floor() as usize).min(n - valid);
        (n - valid - test, valid, test)
    }
}

#[derive(Clone, Debug)]
pub struct DatasetSplit {
    pub train: KnowledgeGraph,
    pub validation: KnowledgeGraph,
    pub test: KnowledgeGraph,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> KnowledgeGraph {
        KnowledgeGraph::from_triples([
            ("a", "IsA", "b"),
            ("b", "IsA", "c"),
            ("a", "PartOf", "c"),
            ("d", "PartOf", "a"),
            ("c", "IsA", "e"),
            ("e", "PartOf", "b"),
        ])
    }

    fn name_set(g: &KnowledgeGraph) -> HashSet<(String, String, String)> {
        g.triples()
            .iter()
            .map(|&t| {
                let (h, r, t) = g.names(t);
                (h.to_owned(), r.to_owned(), t.to_owned())
            })
            .collect()
    }

    #[test]
    fn interning_is_first_seen_order() {
        let g = fixture();
        assert_eq!(g.entities().names(), ["a", "b", "c", "d", "e"]);
        assert_eq!(g.relations().names(), ["IsA", "PartOf"]);
    }

    #[test]
    fn duplicates_are_collapsed_with_multiplicity() {
        let g = KnowledgeGraph::from_triples([("a", "r", "b"), ("a", "r", "b"), ("b", "r", "a")]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.multiplicity(0), 2);
        assert_eq!(g.duplicate_count(), 1);
    }

    #[test]
    fn filter_removes_relation_and_compacts() {
        let mut g = KnowledgeGraph::from_triples([
            ("x", "ExternalURL", "http://a"),
            ("y", "ExternalURL", "http://b"),
            ("a", "IsA", "b"),
            ("z", "ExternalURL", "http://c"),
        ]);
        assert_eq!(g.num_entities(), 8);
        g = g.filter_relations(&HashSet::from(["ExternalURL".to_owned()]));
        assert_eq!(g.len(), 1);
        assert_eq!(g.num_entities(), 2);
        assert!(g.relation_id("ExternalURL").is_none());
    }

    #[test]
    fn filter_with_empty_set_is_identity() {
        let g = fixture();
        let f = g.filter_relations(&HashSet::new());
        assert_eq!(name_set(&g), name_set(&f));
        assert_eq!(f.num_entities(), g.num_entities());
    }

    #[test]
    fn filter_one_of_two_relations_leaves_one_index_key() {
        let f = fixture().filter_relations(&HashSet::from(["PartOf".to_owned()]));
        assert_eq!(f.num_relations(), 1);
        assert_eq!(f.relation_triple_indices(RelationId(0)).len(), 3);
    }

    #[test]
    fn filter_is_idempotent() {
        let ex = HashSet::from(["IsA".to_owned()]);
        let once = fixture().filter_relations(&ex);
        let twice = once.filter_relations(&ex);
        assert_eq!(name_set(&once), name_set(&twice));
    }

    #[test]
    fn sample_edge_cases() {
        let g = fixture();
        assert_eq!(g.sample_triples(100, 1).len(), 6);
        assert_eq!(g.sample_triples(0, 1).len(), 0);
        let a = g.sample_triples(3, 42);
        let b = g.sample_triples(3, 42);
        assert_eq!(a.len(), 3);
        assert_eq!(name_set(&a), name_set(&b));
        assert!(name_set(&a).is_subset(&name_set(&g)));
    }

    #[test]
    fn split_sizes_follow_floor_rule() {
        let spec = SplitSpec::default();
        assert_eq!(spec.sizes(8), (6, 1, 1));
        assert_eq!(spec.sizes(10), (8, 1, 1));
        let all_train = SplitSpec { train: 1.0, validation: 0.0, test: 0.0, seed: 3 };
        let s = fixture().split(&all_train).unwrap();
        assert_eq!((s.train.len(), s.validation.len(), s.test.len()), (6, 0, 0));
    }

    #[test]
    fn split_is_a_partition() {
        let g = fixture();
        let s = g.split(&SplitSpec { seed: 9, ..Default::default() }).unwrap();
        let (a, b, c) = (name_set(&s.train), name_set(&s.validation), name_set(&s.test));
        assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c));
        let union: HashSet<_> = a.union(&b).chain(c.iter()).cloned().collect();
        assert_eq!(union, name_set(&g));
    }

    #[test]
    fn invalid_split_rejected() {
        let bad = SplitSpec { train: 0.5, validation: 0.2, test: 0.2, seed: 0 };
        assert!(fixture().split(&bad).is_err());
        let neg = SplitSpec { train: 1.2, validation: -0.2, test: 0.0, seed: 0 };
        assert!(neg.validate().is_err());
    }
}
