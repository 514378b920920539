//! Seeded generators for graphs with planted structure, used for the
//! bundled miniature graph, desk-scale checks and tests.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, KnowledgeGraph};

/// Entities are split into equal-sized groups. Every relation maps a few
/// source groups onto target groups, and its triples pair a random member
/// of a source group with a random member of that source's target group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlantedGraphSpec {
    pub groups: usize,
    pub entities_per_group: usize,
    /// `(relation name, number of distinct triples)`.
    pub relations: Vec<(String, usize)>,
    /// Source groups per relation.
    pub domain_groups: usize,
    pub seed: u64,
}

pub fn entity_name(group: usize, member: usize) -> String {
    format!("g{group:02}/e{member:04}")
}

pub fn planted_graph(spec: &PlantedGraphSpec) -> Result<KnowledgeGraph> {
    if spec.groups < 2 || spec.entities_per_group == 0 || spec.domain_groups == 0 {
        return Err(Error::invalid("planted graph needs ≥2 groups, ≥1 entity per group and ≥1 domain group"));
    }
    let domain = spec.domain_groups.min(spec.groups);
    let capacity = domain * spec.entities_per_group * spec.entities_per_group;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut builder = GraphBuilder::new();
    for (name, count) in &spec.relations {
        if *count > capacity {
            return Err(Error::invalid(format!("relation `{name}` wants {count} triples, capacity is {capacity}")));
        }
        let sources = index::sample(&mut rng, spec.groups, domain).into_vec();
        let targets: Vec<usize> = sources
            .iter()
            .map(|&s| (s + rng.random_range(1..spec.groups)) % spec.groups)
            .collect();
        let mut seen = HashSet::with_capacity(*count);
        while seen.len() < *count {
            let slot = rng.random_range(0..domain);
            let h = rng.random_range(0..spec.entities_per_group);
            let t = rng.random_range(0..spec.entities_per_group);
            if seen.insert((slot, h, t)) {
                builder.add(&entity_name(sources[slot], h), name, &entity_name(targets[slot], t));
            }
        }
    }
    Ok(builder.build())
}

/// A single relation `r` from `heads` block-one entities to `tails`
/// block-two entities, `count` distinct random pairs.
pub fn two_block_graph(heads: usize, tails: usize, count: usize, seed: u64) -> Result<KnowledgeGraph> {
    if count > heads * tails {
        return Err(Error::invalid("more triples requested than head/tail pairs exist"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = GraphBuilder::new();
    let mut seen = HashSet::with_capacity(count);
    while seen.len() < count {
        let pair = (rng.random_range(0..heads), rng.random_range(0..tails));
        if seen.insert(pair) {
            builder.add(&format!("b1/e{}", pair.0), "r", &format!("b2/e{}", pair.1));
        }
    }
    Ok(builder.build())
}

/// Entities get Gaussian latent positions and every relation a Gaussian
/// latent offset. A triple picks a uniform head and, as tail, whichever of
/// `candidates` random entities lies nearest to `head + offset`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationalGraphSpec {
    pub entities: usize,
    pub latent_dimension: usize,
    pub candidates: usize,
    /// `(relation name, number of distinct triples)`.
    pub relations: Vec<(String, usize)>,
    pub seed: u64,
}

pub fn translational_graph(spec: &TranslationalGraphSpec) -> Result<KnowledgeGraph> {
    if spec.entities < 2 || spec.latent_dimension == 0 || spec.candidates == 0 {
        return Err(Error::invalid("translational graph needs ≥2 entities, a latent dimension and ≥1 candidate"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let m = spec.latent_dimension;
    let gaussian = |n: usize, rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| StandardNormal.sample(rng)).collect() };
    let latent = gaussian(spec.entities * m, &mut rng);
    let at = |e: usize| &latent[e * m..(e + 1) * m];
    let mut builder = GraphBuilder::new();
    let mut target = vec![0.0; m];
    for (name, count) in &spec.relations {
        let offset = gaussian(m, &mut rng);
        let mut seen = HashSet::with_capacity(*count);
        let mut attempts = 0usize;
        while seen.len() < *count {
            attempts += 1;
            if attempts > 50 * count + 1000 {
                return Err(Error::invalid(format!("relation `{name}` cannot reach {count} distinct triples")));
            }
            let h = rng.random_range(0..spec.entities);
            for ((x, a), b) in target.iter_mut().zip(at(h)).zip(&offset) {
                *x = a + b;
            }
            let mut best = (f64::INFINITY, h);
            for _ in 0..spec.candidates {
                let t = rng.random_range(0..spec.entities);
                if t == h {
                    continue;
                }
                let d: f64 = at(t).iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum();
                if d < best.0 {
                    best = (d, t);
                }
            }
            if best.1 != h && seen.insert((h, best.1)) {
                builder.add(&format!("e{h:05}"), name, &format!("e{:05}", best.1));
            }
        }
    }
    Ok(builder.build())
}

/// Recipe for the bundled 500-triple miniature graph.
pub fn mini_kg_spec() -> TranslationalGraphSpec {
    let relations = [
        ("HasContext", 120),
        ("IsA", 70),
        ("Desires", 60),
        ("PartOf", 50),
        ("UsedFor", 50),
        ("NotDesires", 40),
        ("AtLocation", 40),
        ("CapableOf", 40),
        ("HasFirstSubevent", 15),
        ("HasLastSubevent", 15),
    ];
    TranslationalGraphSpec {
        entities: 150,
        latent_dimension: 4,
        candidates: 24,
        relations: relations.iter().map(|&(r, n)| (r.to_owned(), n)).collect(),
        seed: 500,
    }
}

/// The bundled miniature graph as generic-3col text.
pub const MINI_KG: &str = include_str!("../data/mini_kg.tsv");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_graph_has_requested_sizes_and_is_seeded() {
        let spec = PlantedGraphSpec {
            groups: 6,
            entities_per_group: 20,
            relations: vec![("A".into(), 50), ("B".into(), 30)],
            domain_groups: 2,
            seed: 4,
        };
        let g = planted_graph(&spec).unwrap();
        assert_eq!(g.len(), 80);
        assert_eq!(g.duplicate_count(), 0);
        let again = planted_graph(&spec).unwrap();
        assert_eq!(g.entities().names(), again.entities().names());
    }

    #[test]
    fn translational_graph_is_seeded_and_sized() {
        let spec = TranslationalGraphSpec {
            entities: 200,
            latent_dimension: 4,
            candidates: 16,
            relations: vec![("A".into(), 300), ("B".into(), 100)],
            seed: 9,
        };
        let g = translational_graph(&spec).unwrap();
        assert_eq!(g.len(), 400);
        assert_eq!(g.duplicate_count(), 0);
        assert!(g.triples().iter().all(|t| t.head != t.tail));
        let again = translational_graph(&spec).unwrap();
        assert_eq!(g.triples(), again.triples());
    }

    #[test]
    fn bundled_mini_kg_matches_its_recipe() {
        let g = translational_graph(&mini_kg_spec()).unwrap();
        assert_eq!(g.len(), 500);
        let mut text = Vec::new();
        crate::graph::write_generic(&g, &mut text).unwrap();
        assert_eq!(String::from_utf8(text).unwrap(), MINI_KG, "regenerate with `cargo run --example gen_mini_kg`");
    }

    #[test]
    fn capacity_is_checked() {
        assert!(two_block_graph(2, 2, 5, 0).is_err());
        assert_eq!(two_block_graph(2, 2, 4, 0).unwrap().len(), 4);
    }
}
