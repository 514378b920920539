//! Relation / negated-relation probe: the known pair set, the `Unknown`
//! pairs it implies, balanced sampling of those pairs, and labelled
//! translation-vector datasets for classification.

mod classify;
mod cv;

use std::collections::{HashMap, HashSet};
use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

pub use classify::{
    Classifier, DecisionTree, ForestConfig, LogisticConfig, LogisticRegression, RandomForest, Samples, TreeConfig,
};
pub use cv::{cross_validate, stratified_folds, ClassifierKind, CvReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairLabel {
    /// Asserted under the relation.
    Positive,
    /// Asserted under the negation relation.
    Negative,
    Unknown,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnownPair {
    pub head: usize,
    pub tail: usize,
    pub label: PairLabel,
}

/// Known pairs of a relation and its negation after cleaning, with the
/// participating head and tail sets. `U` (head × tail minus known pairs)
/// is kept implicit.
#[derive(Clone, Debug)]
pub struct PairUniverse {
    pub relation: String,
    pub negation: String,
    heads: Vec<String>,
    tails: Vec<String>,
    known: Vec<KnownPair>,
    known_tails: Vec<HashSet<usize>>,
    known_heads: Vec<usize>,
    pub contradictions_removed: usize,
    pub duplicates_removed: u64,
}

impl PairUniverse {
    pub fn heads(&self) -> &[String] {
        &self.heads
    }

    pub fn tails(&self) -> &[String] {
        &self.tails
    }

    pub fn known(&self) -> &[KnownPair] {
        &self.known
    }

    pub fn is_known(&self, head: usize, tail: usize) -> bool {
        self.known_tails[head].contains(&tail)
    }

    pub fn unknown_count(&self) -> u64 {
        self.heads.len() as u64 * self.tails.len() as u64 - self.known.len() as u64
    }

    /// Heads with at least one unknown tail.
    pub fn unknown_heads(&self) -> Vec<usize> {
        (0..self.heads.len()).filter(|&h| self.known_tails[h].len() < self.tails.len()).collect()
    }

    /// Tails with at least one unknown head.
    pub fn unknown_tail_count(&self) -> usize {
        self.known_heads.iter().filter(|&&n| n < self.heads.len()).count()
    }

    pub fn label_counts(&self) -> (usize, usize) {
        let pos = self.known.iter().filter(|p| p.label == PairLabel::Positive).count();
        (pos, self.known.len() - pos)
    }

    pub fn summary(&self) -> UniverseSummary {
        let (positive, negative) = self.label_counts();
        let hu = self.unknown_heads().len();
        let tu = self.unknown_tail_count();
        UniverseSummary {
            relation: self.relation.clone(),
            negation: self.negation.clone(),
            known_pairs: self.known.len(),
            positive_pairs: positive,
            negative_pairs: negative,
            heads: self.heads.len(),
            tails: self.tails.len(),
            unknown_pairs: self.unknown_count(),
            unknown_heads: hu,
            unknown_tails: tu,
            unknown_heads_equal_heads: hu == self.heads.len(),
            unknown_tails_equal_tails: tu == self.tails.len(),
            contradictions_removed: self.contradictions_removed,
            duplicates_removed: self.duplicates_removed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniverseSummary {
    pub relation: String,
    pub negation: String,
    pub known_pairs: usize,
    pub positive_pairs: usize,
    pub negative_pairs: usize,
    pub heads: usize,
    pub tails: usize,
    pub unknown_pairs: u64,
    pub unknown_heads: usize,
    pub unknown_tails: usize,
    pub unknown_heads_equal_heads: bool,
    pub unknown_tails_equal_tails: bool,
    pub contradictions_removed: usize,
    pub duplicates_removed: u64,
}

/// Collects the pairs of `relation` and `negation`, dropping any pair
/// asserted under both. Duplicate assertions were already collapsed by
/// the graph and are only counted here.
pub fn build_pair_universe(graph: &KnowledgeGraph, relation: &str, negation: &str) -> Result<PairUniverse> {
    if relation == negation {
        return Err(Error::invalid("relation and negation must differ"));
    }
    let pos = graph.require_relation(relation)?;
    let neg = graph.require_relation(negation)?;
    let pairs_of = |rel| graph.relation_triples(rel).map(|t| (t.head, t.tail)).collect::<HashSet<_>>();
    let (pos_pairs, neg_pairs) = (pairs_of(pos), pairs_of(neg));
    let contradictions = pos_pairs.intersection(&neg_pairs).count();

    let duplicates_removed: u64 = [pos, neg]
        .iter()
        .flat_map(|&r| graph.relation_triple_indices(r).iter())
        .map(|&i| u64::from(graph.multiplicity(i)) - 1)
        .sum();

    let mut head_ids = HashMap::new();
    let mut tail_ids = HashMap::new();
    let mut heads = Vec::new();
    let mut tails = Vec::new();
    let mut known = Vec::new();
    for (rel, label, other) in [(pos, PairLabel::Positive, &neg_pairs), (neg, PairLabel::Negative, &pos_pairs)] {
        for t in graph.relation_triples(rel) {
            if other.contains(&(t.head, t.tail)) {
                continue;
            }
            let h = *head_ids.entry(t.head).or_insert_with(|| {
                heads.push(graph.entity_name(t.head).to_owned());
                heads.len() - 1
            });
            let tl = *tail_ids.entry(t.tail).or_insert_with(|| {
                tails.push(graph.entity_name(t.tail).to_owned());
                tails.len() - 1
            });
            known.push(KnownPair { head: h, tail: tl, label });
        }
    }
    if known.is_empty() {
        return Err(Error::Empty(format!("no `{relation}` / `{negation}` pairs remain after cleaning")));
    }
    let mut known_tails = vec![HashSet::new(); heads.len()];
    let mut known_heads = vec![0usize; tails.len()];
    for p in &known {
        known_tails[p.head].insert(p.tail);
        known_heads[p.tail] += 1;
    }
    if contradictions > 0 {
        log::info!("removed {contradictions} pairs asserted under both `{relation}` and `{negation}`");
    }
    Ok(PairUniverse {
        relation: relation.to_owned(),
        negation: negation.to_owned(),
        heads,
        tails,
        known,
        known_tails,
        known_heads,
        contradictions_removed: contradictions,
        duplicates_removed,
    })
}

/// Sampled unknown pairs `(head index, tail index)` into the universe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnknownSample {
    pub tail_ratio: usize,
    pub seed: u64,
    pub pairs: Vec<(usize, usize)>,
}

/// Per-head tail budget `max(1, ⌈|known| / (2·|heads with unknowns|)⌉)`.
pub fn tail_sampling_ratio(known: usize, unknown_heads: usize) -> usize {
    if unknown_heads == 0 {
        return 1;
    }
    known.div_ceil(2 * unknown_heads).max(1)
}

/// For every head with unknown tails, draws `tail_ratio` of them uniformly
/// (or all of them when fewer exist).
pub fn sample_unknown_pairs(universe: &PairUniverse, seed: u64) -> UnknownSample {
    let unknown_heads = universe.unknown_heads();
    let ratio = tail_sampling_ratio(universe.known.len(), unknown_heads.len());
    let n_tails = universe.tails.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(unknown_heads.len() * ratio);
    for h in unknown_heads {
        let known = &universe.known_tails[h];
        let available = n_tails - known.len();
        let mut chosen: Vec<usize> = if available <= ratio {
            (0..n_tails).filter(|t| !known.contains(t)).collect()
        } else if 2 * known.len() <= n_tails {
            let mut picked = HashSet::with_capacity(ratio);
            let mut order = Vec::with_capacity(ratio);
            while order.len() < ratio {
                let t = rng.random_range(0..n_tails);
                if !known.contains(&t) && picked.insert(t) {
                    order.push(t);
                }
            }
            order
        } else {
            let candidates: Vec<usize> = (0..n_tails).filter(|t| !known.contains(t)).collect();
            index::sample(&mut rng, candidates.len(), ratio).into_iter().map(|i| candidates[i]).collect()
        };
        chosen.sort_unstable();
        pairs.extend(chosen.into_iter().map(|t| (h, t)));
    }
    UnknownSample { tail_ratio: ratio, seed, pairs }
}

impl UnknownSample {
    /// Writes the sample as generic-3col lines with relation `label`.
    pub fn write_generic<W: Write>(&self, universe: &PairUniverse, label: &str, mut out: W) -> std::io::Result<()> {
        for &(h, t) in &self.pairs {
            writeln!(out, "{}\t{label}\t{}", universe.heads[h], universe.tails[t])?;
        }
        out.flush()
    }
}

/// Translation-vector rows for known and sampled unknown pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    pub dimension: usize,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<PairLabel>,
    pub pairs: Vec<(String, String)>,
}

impl LabeledDataset {
    pub fn count(&self, label: PairLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Positive (1) vs negative (0) rows only.
    pub fn binary(&self) -> Samples {
        let rows: Vec<usize> = (0..self.labels.len()).filter(|&i| self.labels[i] != PairLabel::Unknown).collect();
        Samples::new(
            self.dimension,
            rows.iter().flat_map(|&i| self.features[i].iter().copied()).collect(),
            rows.iter().map(|&i| u8::from(self.labels[i] == PairLabel::Positive)).collect(),
        )
        .expect("rows share the table dimension")
    }
}

pub fn assemble_dataset(table: &EmbeddingTable, universe: &PairUniverse, sample: &UnknownSample) -> Result<LabeledDataset> {
    let rows = universe
        .known
        .iter()
        .map(|p| (p.head, p.tail, p.label))
        .chain(sample.pairs.iter().map(|&(h, t)| (h, t, PairLabel::Unknown)));
    let mut data = LabeledDataset { dimension: table.dimension(), features: vec![], labels: vec![], pairs: vec![] };
    let mut seen = HashSet::new();
    for (h, t, label) in rows {
        if !seen.insert((h, t)) {
            return Err(Error::invalid("pair appears under more than one label"));
        }
        let (hn, tn) = (&universe.heads[h], &universe.tails[t]);
        let hv = table.entity(hn)?;
        let tv = table.entity(tn)?;
        data.features.push(hv.iter().zip(tv).map(|(&a, &b)| f64::from(b) - f64::from(a)).collect());
        data.labels.push(label);
        data.pairs.push((hn.clone(), tn.clone()));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> KnowledgeGraph {
        KnowledgeGraph::from_triples([
            ("p1", "Desires", "x"),
            ("p1", "Desires", "y"),
            ("p2", "Desires", "x"),
            ("p1", "NotDesires", "z"),
            ("p3", "NotDesires", "y"),
            ("p2", "NotDesires", "x"),
            ("p1", "Desires", "x"),
            ("p9", "IsA", "x"),
        ])
    }

    #[test]
    fn contradictions_and_duplicates_removed() {
        let u = build_pair_universe(&fixture(), "Desires", "NotDesires").unwrap();
        assert_eq!(u.contradictions_removed, 1);
        assert_eq!(u.duplicates_removed, 1);
        assert_eq!(u.known().len(), 4);
        assert!(!u.known().iter().any(|p| u.heads()[p.head] == "p2" && u.tails()[p.tail] == "x"));
    }

    #[test]
    fn universe_matches_enumeration() {
        let u = build_pair_universe(&fixture(), "Desires", "NotDesires").unwrap();
        let mut heads = u.heads().to_vec();
        heads.sort();
        let mut tails = u.tails().to_vec();
        tails.sort();
        assert_eq!(heads, ["p1", "p3"]);
        assert_eq!(tails, ["x", "y", "z"]);
        let known: HashSet<(String, String)> =
            u.known().iter().map(|p| (u.heads()[p.head].clone(), u.tails()[p.tail].clone())).collect();
        let mut unknown = 0;
        for h in &heads {
            for t in &tails {
                if !known.contains(&(h.clone(), t.clone())) {
                    unknown += 1;
                }
            }
        }
        assert_eq!(u.unknown_count(), unknown);
        assert_eq!(unknown, 2);
    }

    #[test]
    fn missing_relation_or_empty_universe() {
        assert!(matches!(build_pair_universe(&fixture(), "Desires", "Nope"), Err(Error::UnknownRelation(_))));
        let g = KnowledgeGraph::from_triples([("a", "Desires", "b"), ("a", "NotDesires", "b")]);
        assert!(matches!(build_pair_universe(&g, "Desires", "NotDesires"), Err(Error::Empty(_))));
    }

    #[test]
    fn swapping_arguments_flips_labels() {
        let g = fixture();
        let a = build_pair_universe(&g, "Desires", "NotDesires").unwrap();
        let b = build_pair_universe(&g, "NotDesires", "Desires").unwrap();
        let set = |u: &PairUniverse, flip: bool| -> HashSet<(String, String, bool)> {
            u.known()
                .iter()
                .map(|p| (u.heads()[p.head].clone(), u.tails()[p.tail].clone(), (p.label == PairLabel::Positive) ^ flip))
                .collect()
        };
        assert_eq!(set(&a, false), set(&b, true));
    }

    #[test]
    fn ratio_formula() {
        assert_eq!(tail_sampling_ratio(8_352, 2_683), 2);
        assert_eq!(tail_sampling_ratio(1, 50), 1);
        assert_eq!(tail_sampling_ratio(10, 0), 1);
    }

    #[test]
    fn head_with_single_unknown_tail_gets_it() {
        // p1 knows x,y; the only unknown tail for p1 is z
        let g = KnowledgeGraph::from_triples([
            ("p1", "Desires", "x"),
            ("p1", "NotDesires", "y"),
            ("p2", "Desires", "z"),
            ("p2", "Desires", "y"),
            ("p3", "NotDesires", "x"),
            ("p3", "Desires", "y"),
            ("p4", "Desires", "y"),
            ("p4", "Desires", "x"),
        ]);
        let u = build_pair_universe(&g, "Desires", "NotDesires").unwrap();
        let s = sample_unknown_pairs(&u, 1);
        assert_eq!(s.tail_ratio, 1);
        let p1 = u.heads().iter().position(|h| h == "p1").unwrap();
        let p1_pairs: Vec<_> = s.pairs.iter().filter(|p| p.0 == p1).collect();
        assert_eq!(p1_pairs.len(), 1);
        assert_eq!(u.tails()[p1_pairs[0].1], "z");
        assert!(s.pairs.iter().all(|&(h, t)| !u.is_known(h, t)));
        assert_eq!(s, sample_unknown_pairs(&u, 1));
    }

    #[test]
    fn dataset_rows_follow_labels_and_translations() {
        let edges: Vec<(String, &str, String)> = (0..10)
            .map(|i| (format!("h{i}"), "Desires", format!("t{i}")))
            .chain((10..20).map(|i| (format!("h{i}"), "NotDesires", format!("t{i}"))))
            .collect();
        let g = KnowledgeGraph::from_triples(edges.iter().map(|(h, r, t)| (h.as_str(), *r, t.as_str())));
        let u = build_pair_universe(&g, "Desires", "NotDesires").unwrap();
        let mut table = EmbeddingTable::zeros(&g, 2);
        for (i, name) in g.entities().names().to_vec().iter().enumerate() {
            table.set_entity(name, &[i as f32, (i * i) as f32 * 0.5]).unwrap();
        }
        let s = UnknownSample { tail_ratio: 1, seed: 0, pairs: (0..10).map(|i| (i, (i + 1) % 20)).collect() };
        let d = assemble_dataset(&table, &u, &s).unwrap();
        assert_eq!(d.features.len(), 30);
        assert_eq!((d.count(PairLabel::Positive), d.count(PairLabel::Negative), d.count(PairLabel::Unknown)), (10, 10, 10));
        for (row, (h, t)) in d.features.iter().zip(&d.pairs) {
            let hv = table.entity(h).unwrap();
            let tv = table.entity(t).unwrap();
            let expect: Vec<f64> = hv.iter().zip(tv).map(|(a, b)| f64::from(*b) - f64::from(*a)).collect();
            assert_eq!(row, &expect);
        }
        assert_eq!(d.binary().len(), 20);
    }
}
