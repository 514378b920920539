//! Lloyd iterations with k-means++ seeding.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PointSet;
use crate::error::{Error, Result};
use crate::numeric::squared_distance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Convergence threshold on the summed squared centroid shift.
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self { k: 20, seed: 0, max_iters: 300, tol: 1e-4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Inertia after every assignment step, final pass included.
    pub inertia_history: Vec<f64>,
}

impl ClusteringResult {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] == cluster).collect()
    }
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_distance(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Nearest-centroid labels and squared distances, computed per point so
/// the result does not depend on the worker count.
fn assign(points: &PointSet, centroids: &[Vec<f64>]) -> Vec<(usize, f64)> {
    (0..points.len()).into_par_iter().map(|i| nearest(points.row(i), centroids)).collect()
}

fn plus_plus_init<R: Rng>(points: &PointSet, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points.row(first).to_vec()];
    let mut d2: Vec<f64> = (0..n).map(|i| squared_distance(points.row(i), &centroids[0])).collect();
    while centroids.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(dist) => dist.sample(rng),
            // every point coincides with a centroid: fall back to an unused point
            Err(_) => {
                let unused: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
                unused[rng.random_range(0..unused.len())]
            }
        };
        chosen[next] = true;
        let c = points.row(next).to_vec();
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(points.row(i), &c));
        }
        centroids.push(c);
    }
    centroids
}

pub fn lloyd_kmeans(points: &PointSet, config: &KMeansConfig) -> Result<ClusteringResult> {
    let (n, k, dim) = (points.len(), config.k, points.dimension());
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds the number of points ({n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iters {
        iterations += 1;
        let assigned = assign(points, &centroids);
        let mut labels: Vec<usize> = assigned.iter().map(|a| a.0).collect();
        history.push(assigned.iter().map(|a| a.1).sum());

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            sums[l].iter_mut().zip(points.row(i)).for_each(|(s, x)| *s += x);
        }
        let mut updated: Vec<Vec<f64>> = sums
            .into_iter()
            .zip(&counts)
            .zip(&centroids)
            .map(|((s, &c), old)| if c == 0 { old.clone() } else { s.into_iter().map(|x| x / c as f64).collect() })
            .collect();
        repair_empty(points, &mut labels, &mut counts, &mut updated);

        let shift: f64 = updated.iter().zip(&centroids).map(|(a, b)| squared_distance(a, b)).sum();
        centroids = updated;
        if shift < config.tol {
            converged = true;
            break;
        }
    }

    let assigned = assign(points, &centroids);
    let inertia = assigned.iter().map(|a| a.1).sum();
    history.push(inertia);
    Ok(ClusteringResult {
        k,
        assignments: assigned.into_iter().map(|a| a.0).collect(),
        centroids,
        inertia,
        iterations,
        converged,
        inertia_history: history,
    })
}

/// Moves each empty cluster's centroid onto the point farthest from its
/// own centroid, taken from a cluster that has more than one member.
fn repair_empty(points: &PointSet, labels: &mut [usize], counts: &mut [usize], centroids: &mut [Vec<f64>]) {
    for empty in 0..centroids.len() {
        if counts[empty] > 0 {
            continue;
        }
        let donor = (0..labels.len())
            .filter(|&i| counts[labels[i]] > 1)
            .map(|i| (i, squared_distance(points.row(i), &centroids[labels[i]])))
            .fold(None, |best: Option<(usize, f64)>, cand| match best {
                Some(b) if b.1 >= cand.1 => Some(b),
                _ => Some(cand),
            });
        let Some((point, _)) = donor else { return };
        log::debug!("k-means: reseeding empty cluster {empty} from point {point}");
        counts[labels[point]] -= 1;
        labels[point] = empty;
        counts[empty] = 1;
        centroids[empty] = points.row(point).to_vec();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::Normal;

    fn blobs(per: usize, sep: f64, seed: u64) -> (PointSet, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (label, cx) in [(0usize, 0.0), (1, sep)] {
            for _ in 0..per {
                rows.push(vec![cx + noise.sample(&mut rng), noise.sample(&mut rng)]);
                labels.push(label);
            }
        }
        (PointSet::from_rows(&rows).unwrap(), labels)
    }

    #[test]
    fn k_one_is_the_global_mean() {
        let ps = PointSet::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 3.0]]).unwrap();
        let r = lloyd_kmeans(&ps, &KMeansConfig { k: 1, ..Default::default() }).unwrap();
        assert!((r.centroids[0][0] - 1.0).abs() < 1e-12 && (r.centroids[0][1] - 1.0).abs() < 1e-12);
        assert!((r.inertia - (2.0 + 2.0 + 4.0)).abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_gives_zero_inertia() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let ps = PointSet::from_rows(&rows).unwrap();
        let r = lloyd_kmeans(&ps, &KMeansConfig { k: 6, ..Default::default() }).unwrap();
        assert_eq!(r.inertia, 0.0);
        let mut seen = r.assignments.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn invalid_k_rejected() {
        let ps = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(lloyd_kmeans(&ps, &KMeansConfig { k: 0, ..Default::default() }).is_err());
        assert!(lloyd_kmeans(&ps, &KMeansConfig { k: 3, ..Default::default() }).is_err());
    }

    #[test]
    fn duplicate_points_with_large_k_keep_every_cluster() {
        let rows = vec![vec![1.0, 1.0]; 5].into_iter().chain([vec![4.0, 4.0]]).collect::<Vec<_>>();
        let ps = PointSet::from_rows(&rows).unwrap();
        let r = lloyd_kmeans(&ps, &KMeansConfig { k: 4, ..Default::default() }).unwrap();
        assert_eq!(r.assignments.len(), 6);
        assert_eq!(r.centroids.len(), 4);
        assert!(r.inertia.abs() < 1e-12);
    }

    #[test]
    fn planted_blobs_are_recovered_and_deterministic() {
        let (ps, truth) = blobs(100, 8.0, 3);
        let cfg = KMeansConfig { k: 2, seed: 11, ..Default::default() };
        let r = lloyd_kmeans(&ps, &cfg).unwrap();
        assert!(super::super::adjusted_rand_index(&truth, &r.assignments) >= 0.95);
        assert_eq!(r, lloyd_kmeans(&ps, &cfg).unwrap());
    }

    #[test]
    fn converged_assignment_is_locally_optimal() {
        let (ps, _) = blobs(40, 3.0, 8);
        let r = lloyd_kmeans(&ps, &KMeansConfig { k: 4, seed: 2, ..Default::default() }).unwrap();
        for (i, &a) in r.assignments.iter().enumerate() {
            let own = squared_distance(ps.row(i), &r.centroids[a]);
            for c in &r.centroids {
                assert!(squared_distance(ps.row(i), c) >= own);
            }
        }
        for w in r.inertia_history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
        }
    }
}
