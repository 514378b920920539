//! Bag-of-words TF/IDF vectors over relation definitions.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{DefinitionCorpus, MatrixKind, SimilarityMatrix};
use crate::error::{Error, Result};

/// Inverse document frequency weighting.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdfVariant {
    /// `ln(N / df)`
    #[default]
    Raw,
    /// `ln((1 + N) / (1 + df)) + 1`
    Smooth,
}

impl IdfVariant {
    fn weight(self, docs: usize, df: usize) -> f64 {
        let (n, df) = (docs as f64, df as f64);
        match self {
            IdfVariant::Raw => (n / df).ln(),
            IdfVariant::Smooth => ((1.0 + n) / (1.0 + df)).ln() + 1.0,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            IdfVariant::Raw => "raw term counts, idf = ln(N/df), cosine",
            IdfVariant::Smooth => "raw term counts, idf = ln((1+N)/(1+df)) + 1, cosine",
        }
    }
}

/// Lowercased maximal alphanumeric runs; single letters are kept.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn sparse_cosine(a: &BTreeMap<usize, f64>, b: &BTreeMap<usize, f64>) -> Option<f64> {
    let dot: f64 = a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum();
    let na = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().map(|x| x * x).sum::<f64>().sqrt();
    (na > 0.0 && nb > 0.0).then(|| (dot / (na * nb)).clamp(0.0, 1.0))
}

pub fn tfidf_similarity_matrix(corpus: &DefinitionCorpus, variant: IdfVariant) -> Result<SimilarityMatrix> {
    if corpus.len() < 2 {
        return Err(Error::Empty("TF/IDF similarity needs at least two definitions".into()));
    }
    let docs: Vec<Vec<String>> = corpus.entries().iter().map(|(_, d)| tokenize(d)).collect();
    let mut vocab: HashMap<&str, usize> = HashMap::new();
    let mut df: Vec<usize> = Vec::new();
    let mut counts: Vec<BTreeMap<usize, f64>> = Vec::with_capacity(docs.len());
    for doc in &docs {
        let mut tf = BTreeMap::new();
        for token in doc {
            let next = vocab.len();
            let id = *vocab.entry(token.as_str()).or_insert(next);
            if id == df.len() {
                df.push(0);
            }
            *tf.entry(id).or_insert(0.0) += 1.0;
        }
        for &id in tf.keys() {
            df[id] += 1;
        }
        counts.push(tf);
    }
    let idf: Vec<f64> = df.iter().map(|&d| variant.weight(docs.len(), d)).collect();
    let vectors: Vec<BTreeMap<usize, f64>> = counts
        .into_iter()
        .map(|tf| tf.into_iter().map(|(id, c)| (id, c * idf[id])).filter(|(_, w)| *w != 0.0).collect())
        .collect();

    let names = corpus.entries().iter().map(|(n, _)| n.clone()).collect();
    Ok(SimilarityMatrix::from_fn(names, MatrixKind::Tfidf, |i, j| {
        sparse_cosine(&vectors[i], &vectors[j]).unwrap_or(0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(defs: &[(&str, &str)]) -> DefinitionCorpus {
        DefinitionCorpus::new(defs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()).unwrap()
    }

    #[test]
    fn tokenizer_keeps_placeholders() {
        assert_eq!(tokenize("A is a part of B."), ["a", "is", "a", "part", "of", "b"]);
        assert_eq!(tokenize("can't"), ["can", "t"]);
    }

    #[test]
    fn identical_definitions_score_one() {
        let c = corpus(&[("X", "alpha beta"), ("Y", "alpha beta"), ("Z", "gamma delta")]);
        let m = tfidf_similarity_matrix(&c, IdfVariant::Raw).unwrap();
        assert!((m.get(0, 1) - 1.0).abs() < 1e-12);
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.get(2, 2), 1.0);
    }

    #[test]
    fn hand_computed_weights() {
        // N = 3; df(a) = 3 → idf 0; df(b) = 2 → ln 1.5; df(c) = df(d) = 1 → ln 3
        let c = corpus(&[("X", "a b c"), ("Y", "a b d"), ("Z", "a e")]);
        let m = tfidf_similarity_matrix(&c, IdfVariant::Raw).unwrap();
        let (b, u) = (1.5f64.ln(), 3f64.ln());
        let expected = b * b / (b * b + u * u);
        assert!((m.get(0, 1) - expected).abs() < 1e-12);
    }

    #[test]
    fn needs_two_documents() {
        assert!(tfidf_similarity_matrix(&corpus(&[("X", "a")]), IdfVariant::Raw).is_err());
    }
}
