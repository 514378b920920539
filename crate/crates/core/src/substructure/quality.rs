//! Cohesion, separation and exemplar sampling for a clustering.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kmeans::ClusteringResult;
use super::PointSet;
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;
use crate::numeric::{distance, mean, normalized, sample_std};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCohesion {
    pub cluster: usize,
    pub members: usize,
    /// Mean `‖p/‖p‖ − c/‖c‖‖` over usable members.
    pub raw: Option<f64>,
    /// `1 − raw`.
    pub cohesion: Option<f64>,
    pub skipped_zero: usize,
}

pub fn cohesion_scores(points: &PointSet, result: &ClusteringResult) -> Result<Vec<ClusterCohesion>> {
    if result.assignments.len() != points.len() {
        return Err(Error::invalid("clustering result does not match the point set"));
    }
    let centroids: Vec<Option<Vec<f64>>> = result.centroids.iter().map(|c| normalized(c)).collect();
    let mut sums = vec![0.0; result.k];
    let mut used = vec![0usize; result.k];
    let mut members = vec![0usize; result.k];
    let mut skipped = vec![0usize; result.k];
    for (i, &c) in result.assignments.iter().enumerate() {
        members[c] += 1;
        match (normalized(points.row(i)), &centroids[c]) {
            (Some(p), Some(center)) => {
                sums[c] += distance(&p, center);
                used[c] += 1;
            }
            _ => skipped[c] += 1,
        }
    }
    let total_skipped: usize = skipped.iter().sum();
    if total_skipped > 0 {
        log::warn!("cohesion: skipped {total_skipped} points with zero norm or in zero-norm clusters");
    }
    Ok((0..result.k)
        .map(|c| {
            let raw = (used[c] > 0).then(|| sums[c] / used[c] as f64);
            ClusterCohesion {
                cluster: c,
                members: members[c],
                raw,
                cohesion: raw.map(|r| 1.0 - r),
                skipped_zero: skipped[c],
            }
        })
        .collect())
}

/// Per cluster, the mean distance between its normalized centroid and
/// every other normalized centroid. Zero-norm centroids yield `None` and
/// are left out of the others' averages.
pub fn separation_scores(result: &ClusteringResult) -> Result<Vec<Option<f64>>> {
    if result.k < 2 {
        return Err(Error::invalid("separation needs at least two clusters"));
    }
    let unit: Vec<Option<Vec<f64>>> = result.centroids.iter().map(|c| normalized(c)).collect();
    if unit.iter().any(Option::is_none) {
        log::warn!("separation: zero-norm centroids excluded");
    }
    Ok((0..result.k)
        .map(|i| {
            let own = unit[i].as_ref()?;
            let dists: Vec<f64> = (0..result.k)
                .filter(|&j| j != i)
                .filter_map(|j| unit[j].as_ref().map(|o| distance(own, o)))
                .collect();
            mean(&dists)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityRow {
    pub cluster: usize,
    pub size: usize,
    pub cohesion_raw: Option<f64>,
    pub cohesion: Option<f64>,
    pub separation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterQualityReport {
    pub relation: String,
    pub k: usize,
    pub rows: Vec<QualityRow>,
    pub cohesion_raw_mean: Option<f64>,
    pub cohesion_raw_std: Option<f64>,
    pub cohesion_mean: Option<f64>,
    pub cohesion_std: Option<f64>,
    pub separation_mean: Option<f64>,
    pub separation_std: Option<f64>,
}

pub fn cluster_quality(relation: &str, points: &PointSet, result: &ClusteringResult) -> Result<ClusterQualityReport> {
    let cohesion = cohesion_scores(points, result)?;
    let separation = if result.k >= 2 { separation_scores(result)? } else { vec![None; result.k] };
    let rows: Vec<QualityRow> = cohesion
        .iter()
        .zip(&separation)
        .map(|(c, &s)| QualityRow {
            cluster: c.cluster,
            size: c.members,
            cohesion_raw: c.raw,
            cohesion: c.cohesion,
            separation: s,
        })
        .collect();
    let collect = |f: fn(&QualityRow) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<_>>();
    let (raw, coh, sep) = (collect(|r| r.cohesion_raw), collect(|r| r.cohesion), collect(|r| r.separation));
    Ok(ClusterQualityReport {
        relation: relation.to_owned(),
        k: result.k,
        cohesion_raw_mean: mean(&raw),
        cohesion_raw_std: sample_std(&raw),
        cohesion_mean: mean(&coh),
        cohesion_std: sample_std(&coh),
        separation_mean: mean(&sep),
        separation_std: sample_std(&sep),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub cluster: usize,
    pub head: String,
    pub relation: String,
    pub tail: String,
}

/// Up to `per_cluster` uniformly sampled member triples per cluster,
/// listed in member order.
pub fn sample_cluster_exemplars(
    result: &ClusteringResult,
    points: &PointSet,
    graph: &KnowledgeGraph,
    per_cluster: usize,
    seed: u64,
) -> Result<Vec<Exemplar>> {
    if per_cluster == 0 {
        return Err(Error::invalid("per_cluster must be at least 1"));
    }
    if result.assignments.len() != points.len() {
        return Err(Error::invalid("clustering result does not match the point set"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for c in 0..result.k {
        let members = result.members(c);
        let mut picked = if members.len() <= per_cluster {
            (0..members.len()).collect()
        } else {
            index::sample(&mut rng, members.len(), per_cluster).into_vec()
        };
        picked.sort_unstable();
        for p in picked {
            let triple = graph.triple(points.triple_indices()[members[p]]);
            let (h, r, t) = graph.names(triple);
            out.push(Exemplar { cluster: c, head: h.to_owned(), relation: r.to_owned(), tail: t.to_owned() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(assignments: Vec<usize>, centroids: Vec<Vec<f64>>) -> ClusteringResult {
        ClusteringResult {
            k: centroids.len(),
            assignments,
            centroids,
            inertia: 0.0,
            iterations: 1,
            converged: true,
            inertia_history: vec![],
        }
    }

    #[test]
    fn identical_members_are_perfectly_cohesive() {
        let ps = PointSet::from_rows(&[vec![2.0, 1.0], vec![2.0, 1.0], vec![0.0, 5.0]]).unwrap();
        let r = result(vec![0, 0, 1], vec![vec![2.0, 1.0], vec![0.0, 5.0]]);
        let c = cohesion_scores(&ps, &r).unwrap();
        assert_eq!(c[0].raw, Some(0.0));
        assert_eq!(c[0].cohesion, Some(1.0));
        // singleton
        assert_eq!(c[1].raw, Some(0.0));
    }

    #[test]
    fn three_member_cohesion_by_hand() {
        let ps = PointSet::from_rows(&[vec![1.0, 0.0], vec![0.0, 3.0], vec![2.0, 2.0]]).unwrap();
        let centroid = vec![1.0, 5.0 / 3.0];
        let r = result(vec![0, 0, 0], vec![centroid.clone()]);
        let cn = (1.0f64 + 25.0 / 9.0).sqrt();
        let c = [1.0 / cn, (5.0 / 3.0) / cn];
        let s = 0.5f64.sqrt();
        let expected = [
            ((1.0 - c[0]).powi(2) + c[1].powi(2)).sqrt(),
            (c[0].powi(2) + (1.0 - c[1]).powi(2)).sqrt(),
            ((s - c[0]).powi(2) + (s - c[1]).powi(2)).sqrt(),
        ]
        .iter()
        .sum::<f64>()
            / 3.0;
        let got = cohesion_scores(&ps, &r).unwrap()[0].raw.unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_vectors_are_skipped_and_empty_clusters_undefined() {
        let ps = PointSet::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let r = result(vec![0, 0], vec![vec![0.5, 0.0], vec![0.0, 1.0]]);
        let c = cohesion_scores(&ps, &r).unwrap();
        assert_eq!(c[0].skipped_zero, 1);
        assert_eq!(c[0].raw, Some(0.0));
        assert_eq!(c[1].raw, None);
    }

    #[test]
    fn separation_cases() {
        let same = result(vec![0, 1], vec![vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert_eq!(separation_scores(&same).unwrap(), vec![Some(0.0), Some(0.0)]);
        let opposite = result(vec![0, 1], vec![vec![1.0, 0.0], vec![-3.0, 0.0]]);
        assert_eq!(separation_scores(&opposite).unwrap(), vec![Some(2.0), Some(2.0)]);
        assert!(separation_scores(&result(vec![0], vec![vec![1.0]])).is_err());
    }

    #[test]
    fn four_centroid_separation_by_pairs() {
        let cs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![1.0, 1.0]];
        let r = result(vec![0, 1, 2, 3], cs.clone());
        let unit: Vec<Vec<f64>> = cs.iter().map(|c| normalized(c).unwrap()).collect();
        let got = separation_scores(&r).unwrap();
        for i in 0..4 {
            let mut total = 0.0;
            for j in 0..4 {
                if i != j {
                    total += ((unit[i][0] - unit[j][0]).powi(2) + (unit[i][1] - unit[j][1]).powi(2)).sqrt();
                }
            }
            assert!((got[i].unwrap() - total / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exemplar_sampling() {
        let edges: Vec<(String, String)> = (0..102).map(|i| (format!("h{i}"), format!("t{i}"))).collect();
        let g = KnowledgeGraph::from_triples(edges.iter().map(|(h, t)| (h.as_str(), "r", t.as_str())));
        let ps = PointSet::new(1, vec![0.0; 102], (0..102).collect()).unwrap();
        let mut assignments = vec![0; 100];
        assignments.extend([1, 1]);
        let r = result(assignments, vec![vec![0.0], vec![1.0]]);
        let ex = sample_cluster_exemplars(&r, &ps, &g, 5, 3).unwrap();
        assert_eq!(ex.iter().filter(|e| e.cluster == 0).count(), 5);
        assert_eq!(ex.iter().filter(|e| e.cluster == 1).count(), 2);
        let distinct: std::collections::HashSet<_> = ex.iter().map(|e| &e.head).collect();
        assert_eq!(distinct.len(), 7);
        assert_eq!(ex, sample_cluster_exemplars(&r, &ps, &g, 5, 3).unwrap());
        assert!(sample_cluster_exemplars(&r, &ps, &g, 0, 3).is_err());
    }
}
