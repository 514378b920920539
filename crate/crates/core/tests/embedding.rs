use kgscope::embedding::{
    hits_at_k, train_on, validate_relation, EmbeddingTable, TrainConfig, ValidationOptions,
};
use kgscope::graph::{KnowledgeGraph, SplitSpec};
use kgscope::synthetic::two_block_graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn planted_blocks_beat_untrained_ranking() {
    let graph = two_block_graph(900, 40, 1_000, 3).unwrap();
    let split = graph.split(&SplitSpec { train: 0.8, validation: 0.0, test: 0.2, seed: 1 }).unwrap();
    let cfg = TrainConfig { dimension: 32, epochs: 50, seed: 2, ..TrainConfig::default() };
    let (trained, _) = train_on(&graph, &split.train, &cfg).unwrap();
    let untrained = EmbeddingTable::random(&graph, cfg.dimension, &mut ChaCha8Rng::seed_from_u64(2));

    let k = 10;
    let baseline = hits_at_k(&untrained, &split.test, k).unwrap();
    let floor = k as f64 / graph.num_entities() as f64;
    let hits = hits_at_k(&trained, &split.test, k).unwrap();
    assert!(hits >= 5.0 * baseline.max(floor), "hits@{k} {hits} vs baseline {baseline} (floor {floor})");
}

fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let below = v.iter().filter(|y| *y < x).count() as f64;
            let ties = v.iter().filter(|y| *y == x).count() as f64;
            below + (ties + 1.0) / 2.0
        })
        .collect()
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot / (a.iter().map(|x| x * x).sum::<f64>().sqrt() * b.iter().map(|x| x * x).sum::<f64>().sqrt())
}

fn hist(v: &[f64], bins: usize) -> Vec<f64> {
    let mut h = vec![0.0; bins];
    for &x in v {
        let i = (((x + 1.0) / 2.0 * bins as f64) as usize).min(bins - 1);
        h[i] += 1.0;
    }
    h
}

#[test]
fn ten_triple_validation_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let names: Vec<String> = (0..8).map(|i| format!("n{i}")).collect();
    let mut triples = Vec::new();
    while triples.len() < 10 {
        let (h, t) = (rng.random_range(0..8), rng.random_range(0..8));
        if h != t && !triples.contains(&(h, t)) {
            triples.push((h, t));
        }
    }
    let graph = KnowledgeGraph::from_triples(triples.iter().map(|&(h, t)| (names[h].as_str(), "r", names[t].as_str())));
    let dim = 5;
    let mut table = EmbeddingTable::zeros(&graph, dim);
    let mut vecs = std::collections::HashMap::new();
    for name in &names {
        let v: Vec<f32> = (0..dim).map(|_| rng.random_range(-1.0f32..1.0)).collect();
        if table.entity_row(name).is_some() {
            table.set_entity(name, &v).unwrap();
        }
        vecs.insert(name.clone(), v);
    }
    let r: Vec<f32> = (0..dim).map(|_| rng.random_range(-1.0f32..1.0)).collect();
    table.set_relation("r", &r).unwrap();

    let f = |v: &[f32]| v.iter().map(|&x| x as f64).collect::<Vec<f64>>();
    let translations: Vec<Vec<f64>> = triples
        .iter()
        .map(|&(h, t)| f(&vecs[&names[t]]).iter().zip(f(&vecs[&names[h]])).map(|(a, b)| a - b).collect())
        .collect();
    let centroid: Vec<f64> =
        (0..dim).map(|j| translations.iter().map(|v| v[j]).sum::<f64>() / translations.len() as f64).collect();
    let direct: Vec<f64> = translations.iter().map(|v| cosine(v, &f(&r))).collect();
    let central: Vec<f64> = translations.iter().map(|v| cosine(v, &centroid)).collect();
    let rho = pearson(&ranks(&direct), &ranks(&central));

    let bins = 20;
    let smooth = |h: Vec<f64>| {
        let s: f64 = h.iter().map(|x| x + 1e-9).sum();
        h.into_iter().map(|x| (x + 1e-9) / s).collect::<Vec<f64>>()
    };
    let (p, q) = (smooth(hist(&central, bins)), smooth(hist(&direct, bins)));
    let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();

    let rel = graph.relation_id("r").unwrap();
    let rec = validate_relation(&table, &graph, rel, &ValidationOptions { bins, epsilon: 1e-9 }).unwrap();
    assert_eq!(rec.triples, 10);
    assert!((rec.spearman.unwrap() - rho).abs() < 1e-9, "{:?} vs {rho}", rec.spearman);
    assert!((rec.kl_divergence - kl).abs() < 1e-9, "{} vs {kl}", rec.kl_divergence);
}
