//! Relation-to-relation similarity: definition TF/IDF, head/tail entity
//! overlap, and cosine over centroid or direct relation embeddings.

mod corpus;
mod tfidf;

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::embedding::RelationProfile;
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;
use crate::numeric::cosine;

pub use corpus::DefinitionCorpus;
pub use tfidf::{tfidf_similarity_matrix, tokenize, IdfVariant};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Tfidf,
    JaccardHead,
    JaccardTail,
    CosineCentroid,
    CosineDirect,
}

impl MatrixKind {
    pub fn label(self) -> &'static str {
        match self {
            MatrixKind::Tfidf => "tfidf",
            MatrixKind::JaccardHead => "jaccard-head",
            MatrixKind::JaccardTail => "jaccard-tail",
            MatrixKind::CosineCentroid => "cosine-centroid",
            MatrixKind::CosineDirect => "cosine-direct",
        }
    }
}

/// Square symmetric relation × relation score matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub kind: MatrixKind,
    pub relations: Vec<String>,
    /// Row-major `n × n` values.
    pub values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Evaluates `score` on the upper triangle and mirrors it; the
    /// diagonal is fixed at 1.
    pub fn from_fn(relations: Vec<String>, kind: MatrixKind, mut score: impl FnMut(usize, usize) -> f64) -> Self {
        let n = relations.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in i + 1..n {
                let s = score(i, j);
                values[i * n + j] = s;
                values[j * n + i] = s;
            }
        }
        Self { kind, relations, values }
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn index_of(&self, relation: &str) -> Option<usize> {
        self.relations.iter().position(|r| r == relation)
    }

    pub fn score(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    /// Header row and first column carry relation names; six decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["relation".to_owned()];
        header.extend(self.relations.iter().cloned());
        w.write_record(&header)?;
        for (i, name) in self.relations.iter().enumerate() {
            let mut row = vec![name.clone()];
            row.extend((0..self.len()).map(|j| format!("{:.6}", self.get(i, j))));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn read_csv<R: Read>(input: R, kind: MatrixKind) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let relations: Vec<String> = r.headers()?.iter().skip(1).map(str::to_owned).collect();
        let n = relations.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != n + 1 || record.get(0) != Some(relations.get(i).map_or("", String::as_str)) {
                return Err(Error::Parse { line: i + 2, message: "matrix row does not match header".into() });
            }
            for cell in record.iter().skip(1) {
                values.push(cell.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 2,
                    message: format!("bad number `{cell}`: {e}"),
                })?);
            }
        }
        if values.len() != n * n {
            return Err(Error::Parse { line: 0, message: "matrix is not square".into() });
        }
        Ok(Self { kind, relations, values })
    }
}

/// For each relation, its most similar other relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearestRelation {
    pub relation: String,
    pub nearest: String,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearestRelationTable {
    pub kind: MatrixKind,
    pub rows: Vec<NearestRelation>,
    nearest_index: Vec<usize>,
}

impl NearestRelationTable {
    pub fn nearest_of(&self, relation: &str) -> Option<&NearestRelation> {
        self.rows.iter().find(|r| r.relation == relation)
    }

    /// Pairs `(a, b)` with `a < b` (by matrix order) that are each other's nearest.
    pub fn mutual_pairs(&self) -> Vec<(String, String, f64)> {
        (0..self.rows.len())
            .filter_map(|i| {
                let j = self.nearest_index[i];
                (i < j && self.nearest_index[j] == i)
                    .then(|| (self.rows[i].relation.clone(), self.rows[j].relation.clone(), self.rows[i].score))
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["relation", "most_similar_relation", "score"])?;
        for row in &self.rows {
            w.write_record([row.relation.as_str(), row.nearest.as_str(), &format!("{:.6}", row.score)])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }
}

/// Row-wise argmax excluding the diagonal; ties go to the lowest index.
pub fn nearest_relations(matrix: &SimilarityMatrix) -> Result<NearestRelationTable> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::invalid("nearest relations need at least two relations"));
    }
    let mut rows = Vec::with_capacity(n);
    let mut nearest_index = Vec::with_capacity(n);
    for i in 0..n {
        let mut best = usize::MAX;
        for j in (0..n).filter(|&j| j != i) {
            if best == usize::MAX || matrix.get(i, j) > matrix.get(i, best) {
                best = j;
            }
        }
        nearest_index.push(best);
        rows.push(NearestRelation {
            relation: matrix.relations[i].clone(),
            nearest: matrix.relations[best].clone(),
            score: matrix.get(i, best),
        });
    }
    Ok(NearestRelationTable { kind: matrix.kind, rows, nearest_index })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntitySide {
    Head,
    Tail,
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Jaccard similarity of per-relation head (or tail) entity sets.
pub fn jaccard_overlap_matrix(graph: &KnowledgeGraph, side: EntitySide) -> SimilarityMatrix {
    let sets: Vec<Vec<u32>> = graph
        .relation_ids()
        .map(|rel| {
            let mut ids: Vec<u32> = graph
                .relation_triples(rel)
                .map(|t| match side {
                    EntitySide::Head => t.head.0,
                    EntitySide::Tail => t.tail.0,
                })
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let kind = match side {
        EntitySide::Head => MatrixKind::JaccardHead,
        EntitySide::Tail => MatrixKind::JaccardTail,
    };
    SimilarityMatrix::from_fn(graph.relations().names().to_vec(), kind, |i, j| {
        let inter = sorted_intersection_len(&sets[i], &sets[j]);
        let union = sets[i].len() + sets[j].len() - inter;
        if union == 0 { 0.0 } else { inter as f64 / union as f64 }
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationVector {
    Centroid,
    Direct,
}

/// Pairwise cosine between relation centroids or direct vectors.
/// Relations whose chosen vector has zero norm are left out.
pub fn embedding_similarity_matrix(profiles: &[RelationProfile], which: RelationVector) -> Result<SimilarityMatrix> {
    let pick = |p: &'_ RelationProfile| -> Vec<f64> {
        match which {
            RelationVector::Centroid => p.centroid.clone(),
            RelationVector::Direct => p.direct.clone(),
        }
    };
    if let Some(first) = profiles.first() {
        let dim = pick(first).len();
        if profiles.iter().any(|p| pick(p).len() != dim) {
            return Err(Error::invalid("relation profiles disagree on dimension"));
        }
    }
    let mut names = Vec::new();
    let mut vectors = Vec::new();
    for p in profiles {
        let v = pick(p);
        if v.iter().all(|&x| x == 0.0) {
            log::warn!("relation `{}` has a zero {:?} vector; excluded from cosine matrix", p.relation, which);
            continue;
        }
        names.push(p.relation.clone());
        vectors.push(v);
    }
    let kind = match which {
        RelationVector::Centroid => MatrixKind::CosineCentroid,
        RelationVector::Direct => MatrixKind::CosineDirect,
    };
    Ok(SimilarityMatrix::from_fn(names, kind, |i, j| {
        cosine(&vectors[i], &vectors[j]).expect("zero vectors were excluded")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(name: &str, centroid: Vec<f64>) -> RelationProfile {
        RelationProfile {
            relation: name.into(),
            triple_count: 1,
            direct: centroid.iter().map(|x| -x).collect(),
            centroid,
            triple_indices: vec![],
            direct_similarities: vec![],
            centroid_similarities: vec![],
            skipped_zero: 0,
        }
    }

    #[test]
    fn jaccard_hand_cases() {
        let g = KnowledgeGraph::from_triples([
            ("a", "R", "x"),
            ("b", "R", "x"),
            ("c", "R", "x"),
            ("b", "S", "y"),
            ("c", "S", "y"),
            ("d", "S", "y"),
            ("a", "T", "x"),
            ("b", "T", "z"),
            ("c", "T", "z"),
            ("q", "U", "w"),
        ]);
        let heads = jaccard_overlap_matrix(&g, EntitySide::Head);
        assert_eq!(heads.score("R", "S"), Some(0.5));
        assert_eq!(heads.score("R", "T"), Some(1.0));
        assert_eq!(heads.score("R", "U"), Some(0.0));
        let tails = jaccard_overlap_matrix(&g, EntitySide::Tail);
        assert_eq!(tails.score("R", "T"), Some(0.5));
        assert_eq!(tails.score("R", "R"), Some(1.0));
    }

    #[test]
    fn cosine_matrix_cases() {
        let ps = vec![
            profile("A", vec![1.0, 0.0]),
            profile("B", vec![0.0, 2.0]),
            profile("C", vec![1.0, 1.0]),
            profile("Z", vec![0.0, 0.0]),
        ];
        let m = embedding_similarity_matrix(&ps, RelationVector::Centroid).unwrap();
        assert_eq!(m.relations, ["A", "B", "C"]);
        assert_eq!(m.get(0, 1), 0.0);
        assert!((m.get(0, 2) - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((m.get(1, 2) - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(m.get(2, 2), 1.0);
        let d = embedding_similarity_matrix(&ps, RelationVector::Direct).unwrap();
        assert_eq!(d.kind, MatrixKind::CosineDirect);

        let bad = vec![profile("A", vec![1.0]), profile("B", vec![1.0, 0.0])];
        assert!(embedding_similarity_matrix(&bad, RelationVector::Centroid).is_err());
    }

    fn matrix(values: Vec<f64>) -> SimilarityMatrix {
        let n = (values.len() as f64).sqrt() as usize;
        SimilarityMatrix {
            kind: MatrixKind::Tfidf,
            relations: (0..n).map(|i| format!("r{i}")).collect(),
            values,
        }
    }

    #[test]
    fn nearest_cases() {
        let two = matrix(vec![1.0, 0.3, 0.3, 1.0]);
        let t = nearest_relations(&two).unwrap();
        assert_eq!(t.rows[0].nearest, "r1");
        assert_eq!(t.rows[1].nearest, "r0");
        assert_eq!(t.mutual_pairs(), vec![("r0".into(), "r1".into(), 0.3)]);

        let three = matrix(vec![1.0, 0.2, 0.7, 0.2, 1.0, 0.4, 0.7, 0.4, 1.0]);
        let t = nearest_relations(&three).unwrap();
        let got: Vec<_> = t.rows.iter().map(|r| (r.nearest.as_str(), r.score)).collect();
        assert_eq!(got, [("r2", 0.7), ("r2", 0.4), ("r0", 0.7)]);

        let ties = matrix(vec![1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0]);
        let t = nearest_relations(&ties).unwrap();
        assert_eq!(t.rows[0].nearest, "r1");
        assert_eq!(t.rows[1].nearest, "r0");
        assert_eq!(t.rows[2].nearest, "r0");

        assert!(nearest_relations(&matrix(vec![1.0])).is_err());
    }

    #[test]
    fn csv_layout_and_roundtrip() {
        let m = SimilarityMatrix {
            kind: MatrixKind::JaccardHead,
            relations: vec!["a,b".into(), "c".into()],
            values: vec![1.0, 0.123_456_789, 0.123_456_789, 1.0],
        };
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "relation,\"a,b\",c\n\"a,b\",1.000000,0.123457\nc,0.123457,1.000000\n");
        let back = SimilarityMatrix::read_csv(buf.as_slice(), MatrixKind::JaccardHead).unwrap();
        assert_eq!(back.relations, m.relations);
        for (x, y) in back.values.iter().zip(&m.values) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn jaccard_is_relabeling_invariant_and_local(
            edges in proptest::collection::vec((0u8..12, 0u8..4, 0u8..12), 4..60),
            extra in (0u8..12, 0u8..12),
        ) {
            let names: Vec<(String, String, String)> = edges
                .iter()
                .map(|(h, r, t)| (format!("e{h}"), format!("R{r}"), format!("e{t}")))
                .collect();
            let g = KnowledgeGraph::from_triples(names.iter().map(|(h, r, t)| (h.as_str(), r.as_str(), t.as_str())));
            let base = jaccard_overlap_matrix(&g, EntitySide::Head);

            // relabel entities with the bijection n → (5n + 3) mod 12 and reverse triple order
            let relabel = |e: &str| {
                let n: usize = e[1..].parse().unwrap();
                format!("x{}", (5 * n + 3) % 12)
            };
            let relabeled: Vec<(String, String, String)> =
                names.iter().rev().map(|(h, r, t)| (relabel(h), r.clone(), relabel(t))).collect();
            let g2 = KnowledgeGraph::from_triples(relabeled.iter().map(|(h, r, t)| (h.as_str(), r.as_str(), t.as_str())));
            let other = jaccard_overlap_matrix(&g2, EntitySide::Head);
            for a in &base.relations {
                for b in &base.relations {
                    prop_assert!((base.score(a, b).unwrap() - other.score(a, b).unwrap()).abs() < 1e-12);
                }
            }

            // adding a triple to the first relation leaves other pairs alone
            let target = base.relations[0].clone();
            let mut grown = names.clone();
            grown.push((format!("e{}", extra.0), target.clone(), format!("e{}", extra.1)));
            let g3 = KnowledgeGraph::from_triples(grown.iter().map(|(h, r, t)| (h.as_str(), r.as_str(), t.as_str())));
            let after = jaccard_overlap_matrix(&g3, EntitySide::Head);
            for a in base.relations.iter().filter(|r| **r != target) {
                for b in base.relations.iter().filter(|r| **r != target) {
                    prop_assert_eq!(base.score(a, b), after.score(a, b));
                }
            }
            for (i, j) in (0..base.len()).flat_map(|i| (0..base.len()).map(move |j| (i, j))) {
                prop_assert_eq!(base.get(i, j), base.get(j, i));
            }
        }
    }
}
