use kgscope::substructure::{pca_project_2d, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn covariance(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (n, d) = (rows.len(), rows[0].len());
    let mean: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let mut c = vec![vec![0.0; d]; d];
    for r in rows {
        for a in 0..d {
            for b in 0..d {
                c[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]) / (n - 1) as f64;
            }
        }
    }
    (mean, c)
}

/// Dominant eigenpair by power iteration.
fn power(c: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let d = c.len();
    let mut v: Vec<f64> = (0..d).map(|i| 1.0 + i as f64 * 0.1).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w: Vec<f64> = (0..d).map(|i| (0..d).map(|j| c[i][j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        lambda = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    (lambda, v)
}

fn same_axis(a: &[f64], b: &[f64]) -> bool {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot.abs() - 1.0).abs() < 1e-6
}

#[test]
fn projection_matches_power_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..20 {
        let n = if case < 10 { 4 } else { 30 };
        let scales = [3.0, 2.0, 1.0, 0.5, 0.25];
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| scales.iter().map(|s| s * rng.random_range(-1.0..1.0)).collect()).collect();
        let (mean, c) = covariance(&rows);
        let (l1, v1) = power(&c);
        let deflated: Vec<Vec<f64>> =
            (0..c.len()).map(|i| (0..c.len()).map(|j| c[i][j] - l1 * v1[i] * v1[j]).collect()).collect();
        let (l2, v2) = power(&deflated);
        let trace: f64 = (0..c.len()).map(|i| c[i][i]).sum();

        let p = pca_project_2d(&PointSet::from_rows(&rows).unwrap()).unwrap();
        assert!(same_axis(&p.components[0], &v1) && same_axis(&p.components[1], &v2), "case {case}");
        assert!((p.explained_variance_ratio[0] - l1 / trace).abs() < 1e-6);
        assert!((p.explained_variance_ratio[1] - l2 / trace).abs() < 1e-6);
        for (row, xy) in rows.iter().zip(&p.coords) {
            for (axis, coord) in p.components.iter().zip(xy) {
                let expect: f64 = row.iter().zip(&mean).zip(axis).map(|((x, m), a)| (x - m) * a).sum();
                assert!((expect - coord).abs() < 1e-9);
            }
        }
    }
}
