//! Internal clustering-quality indices used for choosing k.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kmeans::{lloyd_kmeans, KMeansConfig};
use super::PointSet;
use crate::error::{Error, Result};
use crate::numeric::{distance, squared_distance};

fn cluster_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |&m| m + 1)
}

fn check_labels(points: &PointSet, labels: &[usize]) -> Result<usize> {
    if labels.len() != points.len() {
        return Err(Error::invalid("one label per point is required"));
    }
    let k = cluster_count(labels);
    let mut present = vec![false; k];
    labels.iter().for_each(|&l| present[l] = true);
    let used = present.iter().filter(|&&p| p).count();
    if used < 2 || used > points.len().saturating_sub(1) {
        return Err(Error::invalid(format!(
            "index needs between 2 and n − 1 non-empty clusters, got {used} for {} points",
            points.len()
        )));
    }
    Ok(k)
}

fn label_means(points: &PointSet, labels: &[usize], k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut sums = vec![vec![0.0; points.dimension()]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        sums[l].iter_mut().zip(points.row(i)).for_each(|(s, x)| *s += x);
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            s.iter_mut().for_each(|x| *x /= c as f64);
        }
    }
    (sums, counts)
}

/// Mean silhouette coefficient over Euclidean distances; singleton
/// clusters contribute 0.
pub fn silhouette(points: &PointSet, labels: &[usize]) -> Result<f64> {
    let k = check_labels(points, labels)?;
    let n = points.len();
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    let per_point: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                if j != i {
                    sums[labels[j]] += distance(points.row(i), points.row(j));
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m > 0.0 { (b - a) / m } else { 0.0 }
        })
        .collect();
    Ok(per_point.iter().sum::<f64>() / n as f64)
}

/// Davies-Bouldin index: mean over clusters of the worst
/// `(s_i + s_j) / d(c_i, c_j)`, with `s` the mean member-to-centroid distance.
pub fn davies_bouldin(points: &PointSet, labels: &[usize]) -> Result<f64> {
    let k = check_labels(points, labels)?;
    let (centroids, counts) = label_means(points, labels, k);
    let mut scatter = vec![0.0; k];
    for (i, &l) in labels.iter().enumerate() {
        scatter[l] += distance(points.row(i), &centroids[l]);
    }
    let live: Vec<usize> = (0..k).filter(|&c| counts[c] > 0).collect();
    for &c in &live {
        scatter[c] /= counts[c] as f64;
    }
    let total: f64 = live
        .iter()
        .map(|&i| {
            live.iter()
                .filter(|&&j| j != i)
                .map(|&j| {
                    let d = distance(&centroids[i], &centroids[j]);
                    if d > 0.0 { (scatter[i] + scatter[j]) / d } else { f64::INFINITY }
                })
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(total / live.len() as f64)
}

/// Calinski-Harabasz: between-cluster over within-cluster dispersion,
/// each divided by its degrees of freedom.
pub fn calinski_harabasz(points: &PointSet, labels: &[usize]) -> Result<f64> {
    let k = check_labels(points, labels)?;
    let n = points.len();
    let (centroids, counts) = label_means(points, labels, k);
    let live = counts.iter().filter(|&&c| c > 0).count();
    let mut mean = vec![0.0; points.dimension()];
    for row in points.rows() {
        mean.iter_mut().zip(row).for_each(|(m, x)| *m += x / n as f64);
    }
    let between: f64 = (0..k).map(|c| counts[c] as f64 * squared_distance(&centroids[c], &mean)).sum();
    let within: f64 = labels.iter().enumerate().map(|(i, &l)| squared_distance(points.row(i), &centroids[l])).sum();
    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((between / (live - 1) as f64) / (within / (n - live) as f64))
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let (ka, kb) = (cluster_count(a), cluster_count(b));
    let mut table = vec![0u64; ka * kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
    }
    let pairs = |c: u64| (c * c.saturating_sub(1)) as f64 / 2.0;
    let index: f64 = table.iter().map(|&c| pairs(c)).sum();
    let rows: f64 = (0..ka).map(|i| pairs(table[i * kb..(i + 1) * kb].iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| pairs((0..ka).map(|i| table[i * kb + j]).sum())).sum();
    let expected = rows * cols / pairs(n as u64);
    let max = (rows + cols) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KSelectionOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// Evaluate silhouette on a seeded subsample of at most this many points.
    pub silhouette_sample: Option<usize>,
}

impl Default for KSelectionOptions {
    fn default() -> Self {
        let base = KMeansConfig::default();
        Self { max_iters: base.max_iters, tol: base.tol, silhouette_sample: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSelectionCurve {
    pub ks: Vec<usize>,
    pub inertia: Vec<f64>,
    pub silhouette: Vec<f64>,
    pub davies_bouldin: Vec<f64>,
    pub calinski_harabasz: Vec<f64>,
}

fn run(points: &PointSet, k: usize, seed: u64, options: &KSelectionOptions) -> Result<super::ClusteringResult> {
    lloyd_kmeans(points, &KMeansConfig { k, seed, max_iters: options.max_iters, tol: options.tol })
}

/// All four k-selection scores for every k, each from a fresh k-means
/// run with the same seed.
pub fn k_selection_scores(
    points: &PointSet,
    ks: &[usize],
    seed: u64,
    options: &KSelectionOptions,
) -> Result<KSelectionCurve> {
    if ks.is_empty() {
        return Err(Error::invalid("empty k range"));
    }
    if let Some(&bad) = ks.iter().find(|&&k| k < 2 || k + 1 > points.len()) {
        return Err(Error::invalid(format!(
            "k = {bad} outside [2, {}] required by silhouette / Davies-Bouldin / Calinski-Harabasz",
            points.len().saturating_sub(1)
        )));
    }
    let rows: Vec<(f64, f64, f64, f64)> = ks
        .par_iter()
        .map(|&k| {
            let result = run(points, k, seed, options)?;
            let sil = match options.silhouette_sample {
                Some(m) if m < points.len() => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
                    let mut idx = index::sample(&mut rng, points.len(), m).into_vec();
                    idx.sort_unstable();
                    let labels: Vec<usize> = idx.iter().map(|&i| result.assignments[i]).collect();
                    silhouette(&points.select(&idx), &labels)?
                }
                _ => silhouette(points, &result.assignments)?,
            };
            Ok((
                result.inertia,
                sil,
                davies_bouldin(points, &result.assignments)?,
                calinski_harabasz(points, &result.assignments)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(KSelectionCurve {
        ks: ks.to_vec(),
        inertia: rows.iter().map(|r| r.0).collect(),
        silhouette: rows.iter().map(|r| r.1).collect(),
        davies_bouldin: rows.iter().map(|r| r.2).collect(),
        calinski_harabasz: rows.iter().map(|r| r.3).collect(),
    })
}

/// Inertia per k; unlike the other scores this admits k = 1.
pub fn elbow_curve(points: &PointSet, ks: &[usize], seed: u64, options: &KSelectionOptions) -> Result<Vec<f64>> {
    ks.par_iter().map(|&k| run(points, k, seed, options).map(|r| r.inertia)).collect()
}
