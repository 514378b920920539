use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::PointSet;
use crate::error::{Error, Result};

/// Points projected onto their top two principal components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub coords: Vec<[f64; 2]>,
    /// Unit principal axes; each is signed so its largest-magnitude entry is positive.
    pub components: [Vec<f64>; 2],
    pub explained_variance_ratio: [f64; 2],
}

pub fn pca_project_2d(points: &PointSet) -> Result<Projection> {
    let (n, d) = (points.len(), points.dimension());
    if n < 2 || d < 2 {
        return Err(Error::invalid("PCA projection needs at least two points in at least two dimensions"));
    }
    let mut mean = vec![0.0; d];
    for row in points.rows() {
        mean.iter_mut().zip(row).for_each(|(m, x)| *m += x / n as f64);
    }
    let centered = DMatrix::from_fn(n, d, |i, j| points.row(i)[j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (n - 1) as f64;
    let total = cov.trace();
    if total <= 0.0 {
        return Err(Error::invalid("all points are identical; principal components undefined"));
    }
    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    let axis = |idx: usize| -> Vec<f64> {
        let col = eigen.eigenvectors.column(idx);
        let pivot = col.iter().copied().fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        col.iter().map(|x| x * sign).collect()
    };
    let components = [axis(order[0]), axis(order[1])];
    let coords = (0..n)
        .map(|i| {
            let row = centered.row(i);
            let project = |c: &[f64]| row.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
            [project(&components[0]), project(&components[1])]
        })
        .collect();
    let ratio = |idx: usize| eigen.eigenvalues[idx].max(0.0) / total;
    Ok(Projection { coords, explained_variance_ratio: [ratio(order[0]), ratio(order[1])], components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_input_keeps_distances() {
        let rows = vec![vec![0.0, 0.0], vec![3.0, 1.0], vec![-1.0, 2.0], vec![4.0, -2.0]];
        let ps = PointSet::from_rows(&rows).unwrap();
        let p = pca_project_2d(&ps).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let orig = ((rows[i][0] - rows[j][0]).powi(2) + (rows[i][1] - rows[j][1]).powi(2)).sqrt();
                let proj = ((p.coords[i][0] - p.coords[j][0]).powi(2) + (p.coords[i][1] - p.coords[j][1]).powi(2)).sqrt();
                assert!((orig - proj).abs() < 1e-9);
            }
        }
        assert!((p.explained_variance_ratio[0] + p.explained_variance_ratio[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_points_have_rank_one() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 2.0 * i as f64, -(i as f64)]).collect();
        let p = pca_project_2d(&PointSet::from_rows(&rows).unwrap()).unwrap();
        assert!((p.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
        assert!(p.coords.iter().all(|c| c[1].abs() < 1e-9));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let same = PointSet::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(pca_project_2d(&same).is_err());
        let one = PointSet::from_rows(&[vec![1.0, 1.0]]).unwrap();
        assert!(pca_project_2d(&one).is_err());
    }
}
