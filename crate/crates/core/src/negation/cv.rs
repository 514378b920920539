use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{Classifier, ForestConfig, LogisticConfig, LogisticRegression, RandomForest, Samples};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassifierKind {
    Logistic(LogisticConfig),
    Forest(ForestConfig),
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Logistic(_) => "logistic",
            ClassifierKind::Forest(_) => "forest",
        }
    }

    pub fn fit(&self, data: &Samples) -> Result<Box<dyn Classifier>> {
        Ok(match self {
            ClassifierKind::Logistic(cfg) => Box::new(LogisticRegression::fit(data, cfg)?),
            ClassifierKind::Forest(cfg) => Box::new(RandomForest::fit(data, cfg)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub classifier: ClassifierKind,
    pub folds: usize,
    pub seed: u64,
    pub fold_sizes: Vec<usize>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    /// Accuracy of predicting each training split's majority class.
    pub baseline_accuracy: f64,
}

/// Fold id per row. Each class is shuffled and dealt round-robin, the
/// dealing position carrying over from one class to the next, so fold
/// sizes differ by at most one overall and per class.
pub fn stratified_folds(labels: &[u8], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::invalid("need at least 2 folds"));
    }
    if labels.len() < folds {
        return Err(Error::invalid(format!("{} rows cannot fill {folds} folds", labels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [0u8, 1] {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        rows.shuffle(&mut rng);
        for i in rows {
            assignment[i] = next;
            next = (next + 1) % folds;
        }
    }
    Ok(assignment)
}

pub fn cross_validate(data: &Samples, kind: &ClassifierKind, folds: usize, seed: u64) -> Result<CvReport> {
    let assignment = stratified_folds(data.labels(), folds, seed)?;
    let results = (0..folds)
        .into_par_iter()
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| assignment[i] == f);
            let (train, test) = (data.subset(&train), data.subset(&test));
            let model = kind.fit(&train)?;
            let [zeros, ones] = train.class_counts();
            let majority = u8::from(ones > zeros);
            let base = test.labels().iter().filter(|&&l| l == majority).count() as f64 / test.len() as f64;
            Ok((test.len(), model.accuracy(&test), base))
        })
        .collect::<Result<Vec<_>>>()?;
    let accs: Vec<f64> = results.iter().map(|r| r.1).collect();
    let mean = accs.iter().sum::<f64>() / folds as f64;
    let var = accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (folds - 1) as f64;
    Ok(CvReport {
        classifier: kind.clone(),
        folds,
        seed,
        fold_sizes: results.iter().map(|r| r.0).collect(),
        fold_accuracies: accs,
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        baseline_accuracy: results.iter().map(|r| r.2).sum::<f64>() / folds as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_rows(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
    }

    #[test]
    fn separable_ten_fold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rows = random_rows(300, 3, &mut rng);
        let labels: Vec<u8> = (0..300).map(|i| (i % 2) as u8).collect();
        for (r, l) in rows.iter_mut().zip(&labels) {
            r[0] += if *l == 1 { 3.0 } else { -3.0 };
        }
        let data = Samples::from_rows(&rows, labels).unwrap();
        for kind in [
            ClassifierKind::Logistic(LogisticConfig::default()),
            ClassifierKind::Forest(ForestConfig { trees: 20, ..Default::default() }),
        ] {
            let rep = cross_validate(&data, &kind, 10, 0).unwrap();
            assert!(rep.mean_accuracy >= 0.95, "{} {}", kind.name(), rep.mean_accuracy);
            assert_eq!(rep.fold_sizes.iter().sum::<usize>(), 300);
            assert!((rep.baseline_accuracy - 0.5).abs() < 0.05);
        }
    }

    #[test]
    fn rejects_bad_fold_counts() {
        let data = Samples::from_rows(&[vec![0.0], vec![1.0], vec![2.0]], vec![0, 1, 0]).unwrap();
        assert!(cross_validate(&data, &ClassifierKind::Logistic(LogisticConfig::default()), 1, 0).is_err());
        assert!(cross_validate(&data, &ClassifierKind::Logistic(LogisticConfig::default()), 4, 0).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows = random_rows(100, 4, &mut rng);
        let labels: Vec<u8> = (0..100).map(|i| u8::from(rows[i][0] + rows[i][1] > 0.0)).collect();
        let data = Samples::from_rows(&rows, labels).unwrap();
        let kind = ClassifierKind::Forest(ForestConfig { trees: 10, ..Default::default() });
        let par = cross_validate(&data, &kind, 5, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let seq = pool.install(|| cross_validate(&data, &kind, 5, 3).unwrap());
        assert_eq!(par, seq);
    }

    proptest! {
        #[test]
        fn folds_partition_and_stratify(labels in proptest::collection::vec(0u8..2, 10..200), folds in 2usize..10, seed: u64) {
            let a = stratified_folds(&labels, folds, seed).unwrap();
            let mut sizes = vec![0usize; folds];
            let mut per_class = vec![[0usize; 2]; folds];
            for (i, &f) in a.iter().enumerate() {
                prop_assert!(f < folds);
                sizes[f] += 1;
                per_class[f][labels[i] as usize] += 1;
            }
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            for c in 0..2 {
                let counts: Vec<usize> = per_class.iter().map(|p| p[c]).collect();
                prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
            }
        }
    }
}
