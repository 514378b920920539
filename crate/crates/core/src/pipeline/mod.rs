//! End-to-end runs driven by a [`PipelineConfig`], written as a report
//! bundle: a directory of JSON/CSV files plus a `manifest.json` listing each
//! file with its SHA-256.

mod bundle;
mod config;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::embedding::{
    hits_at_k, similarity_lists, train_on, validate_profile, EmbeddingTable, RelationProfile, TrainReport,
    ValidationOptions, ValidationRecord,
};
use crate::error::{Error, Result};
use crate::graph::{compute_stats, parse_edge_file, GraphStats, KnowledgeGraph};
use crate::negation::{
    assemble_dataset, build_pair_universe, cross_validate, sample_unknown_pairs, ClassifierKind, CvReport, PairLabel,
    UniverseSummary,
};
use crate::relsim::{
    embedding_similarity_matrix, jaccard_overlap_matrix, nearest_relations, tfidf_similarity_matrix, DefinitionCorpus,
    EntitySide, IdfVariant, RelationVector, SimilarityMatrix,
};
use crate::substructure::{
    cluster_quality, k_selection_scores, lloyd_kmeans, pca_project_2d, relation_point_set, sample_cluster_exemplars,
    ClusterQualityReport, KMeansConfig, KSelectionCurve, KSelectionOptions, PointSet,
};

pub use bundle::{fmt6, fmt_opt, sha256_file, slug, FileEntry};
use bundle::{publish, BundleWriter};
pub use config::{
    ClusterSection, FitOn, InputConfig, NegationSection, OutputConfig, PipelineConfig, RelsimSection, TrainSection,
    ValidateSection,
};

pub const MANIFEST_FORMAT: &str = "kgscope-report/1";

/// Validation passes when `|ρ| ≥ RHO_FLOOR` and `KL ≤ KL_CEILING`.
pub const RHO_FLOOR: f64 = 0.4;
pub const KL_CEILING: f64 = 2.0;

/// Reference TF/IDF score for HasContext–PartOf and its tolerance.
pub const TFIDF_REFERENCE: f64 = 0.178;
pub const TFIDF_TOLERANCE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub tool: String,
    pub version: String,
    pub config: PipelineConfig,
    pub stages: Vec<String>,
    pub timings: Vec<StageTiming>,
    pub notes: Vec<String>,
    /// Every other file in the bundle.
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn read(bundle_dir: impl AsRef<Path>) -> Result<Self> {
        let path = bundle_dir.as_ref().join("manifest.json");
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn checksums(&self) -> Vec<(String, String)> {
        self.files.iter().map(|f| (f.path.clone(), f.sha256.clone())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ReportBundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

/// Outcome of the TF/IDF spot check on the definition corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfidfCheck {
    pub variant: IdfVariant,
    pub variant_description: String,
    pub has_context_part_of: Option<f64>,
    pub reference: f64,
    pub tolerance: f64,
    pub within_band: Option<bool>,
    pub first_last_subevent_mutual: Option<bool>,
    pub first_last_subevent_score: Option<f64>,
}

impl TfidfCheck {
    pub fn evaluate(matrix: &SimilarityMatrix, variant: IdfVariant) -> Result<Self> {
        let score = matrix.score("HasContext", "PartOf");
        let (first, last) = ("HasFirstSubevent", "HasLastSubevent");
        let mutual = match (matrix.index_of(first), matrix.index_of(last)) {
            (Some(_), Some(_)) => {
                let table = nearest_relations(matrix)?;
                let of = |r: &str| table.nearest_of(r).map(|n| n.nearest.clone());
                Some(of(first).as_deref() == Some(last) && of(last).as_deref() == Some(first))
            }
            _ => None,
        };
        Ok(Self {
            variant,
            variant_description: variant.describe().to_owned(),
            has_context_part_of: score,
            reference: TFIDF_REFERENCE,
            tolerance: TFIDF_TOLERANCE,
            within_band: score.map(|s| (s - TFIDF_REFERENCE).abs() <= TFIDF_TOLERANCE),
            first_last_subevent_mutual: mutual,
            first_last_subevent_score: matrix.score(first, last),
        })
    }

    pub fn note(&self) -> String {
        let score = self.has_context_part_of.map_or_else(|| "n/a".to_owned(), |s| format!("{s:.4}"));
        let band = match self.within_band {
            Some(true) => "inside".to_owned(),
            Some(false) => format!("outside (discrepancy {:+.4})", self.has_context_part_of.unwrap_or(0.0) - self.reference),
            None => "not evaluated".to_owned(),
        };
        format!(
            "tfidf check [{}]: HasContext-PartOf = {score}, {band} the band {:.3} ± {:.3}; \
             HasFirstSubevent/HasLastSubevent mutually nearest: {}",
            self.variant_description,
            self.reference,
            self.tolerance,
            self.first_last_subevent_mutual.map_or("n/a", |m| if m { "yes" } else { "no" }),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub relations: usize,
    pub qualifying: usize,
    pub qualifying_passing: usize,
    pub min_triples: usize,
    pub rho_floor: f64,
    pub kl_ceiling: f64,
    pub hits_k: usize,
    pub hits_at_k: Option<f64>,
    pub hits_ranked: usize,
    pub records: Vec<ValidationRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub relation: String,
    pub points: usize,
    pub k: usize,
    pub seed: u64,
    pub iterations: usize,
    pub converged: bool,
    pub inertia: f64,
    pub inertia_history: Vec<f64>,
    pub quality: ClusterQualityReport,
    pub k_selection: Option<KSelectionCurve>,
    pub explained_variance_ratio: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegationReport {
    pub universe: UniverseSummary,
    pub tail_ratio: usize,
    pub sampled_unknown: usize,
    pub rows: usize,
    pub binary_rows: usize,
    pub cross_validation: Vec<CvReport>,
}

struct Clock {
    timings: Vec<StageTiming>,
}

impl Clock {
    fn stage<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        log::info!("stage {stage}");
        let start = Instant::now();
        let out = f().map_err(|e| e.in_stage(stage));
        self.timings.push(StageTiming { stage: stage.to_owned(), seconds: start.elapsed().as_secs_f64() });
        out
    }
}

/// Ingests the input: parse, drop excluded relations, optional sample.
pub fn load_graph(input: &InputConfig) -> Result<KnowledgeGraph> {
    let graph = parse_edge_file(&input.path, input.format)?;
    let exclude: HashSet<String> = input.exclude_relations.iter().cloned().collect();
    let mut graph = graph.filter_relations(&exclude);
    if let Some(n) = input.sample_size {
        graph = graph.sample_triples(n, input.seed);
    }
    if graph.is_empty() {
        return Err(Error::Empty(format!("{} holds no usable triples", input.path.display())));
    }
    Ok(graph)
}

fn staging_dir(dest: &Path) -> Result<PathBuf> {
    let name = dest
        .file_name()
        .ok_or_else(|| Error::Config(format!("output.dir {} has no final component", dest.display())))?
        .to_string_lossy()
        .into_owned();
    Ok(dest.with_file_name(format!(".{name}.partial-{}", std::process::id())))
}

/// Runs every selected stage and publishes the bundle to `output.dir`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<ReportBundle> {
    config.validate()?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = config.output.workers {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?
    };
    let dest = config.output.dir.clone();
    let staging = staging_dir(&dest)?;
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    }
    let result = pool.install(|| build_bundle(config, &staging));
    match result {
        Ok(manifest) => {
            publish(&staging, &dest).map_err(|e| e.in_stage("publish"))?;
            Ok(ReportBundle { dir: dest, manifest })
        }
        Err(e) => {
            let _ = fs::remove_dir_all(&staging);
            Err(e)
        }
    }
}

fn build_bundle(config: &PipelineConfig, staging: &Path) -> Result<Manifest> {
    let mut clock = Clock { timings: Vec::new() };
    let mut stages = vec!["ingest".to_owned(), "stats".to_owned()];
    let mut notes = Vec::new();

    let graph = clock.stage("ingest", || {
        let graph = load_graph(&config.input)?;
        for rel in config.referenced_relations() {
            graph.require_relation(rel)?;
        }
        Ok(graph)
    })?;
    let mut out = BundleWriter::new(staging.to_path_buf())?;

    clock.stage("stats", || write_stats(&mut out, &compute_stats(&graph)))?;

    if config.needs_embeddings() {
        stages.push("train".into());
        let (table, test) = clock.stage("train", || train_stage(config, &graph, &mut out))?;

        let profiles = if config.validate.enabled || config.relsim.enabled {
            clock.stage("profile", || graph.relation_ids().map(|r| similarity_lists(&table, &graph, r)).collect())?
        } else {
            Vec::new()
        };
        if config.validate.enabled {
            stages.push("validate".into());
            clock.stage("validate", || validate_stage(config, &test, &table, &profiles, &mut out))?;
        }
        if config.relsim.enabled {
            stages.push("relsim".into());
            let check = clock.stage("relsim", || relsim_stage(config, &graph, &profiles, &mut out))?;
            if let Some(check) = check {
                notes.push(check.note());
            }
        }
        if config.cluster.enabled {
            stages.push("cluster".into());
            clock.stage("cluster", || cluster_stage(&config.cluster, &graph, &table, &mut out))?;
        }
        if config.negation.enabled {
            stages.push("negation".into());
            clock.stage("negation", || negation_stage(&config.negation, &graph, &table, &mut out))?;
        }
    }

    let files = clock.stage("checksum", || out.entries())?;
    let manifest = Manifest {
        format: MANIFEST_FORMAT.to_owned(),
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        config: config.clone(),
        stages,
        timings: clock.timings,
        notes,
        files,
    };
    let path = out.root().join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn write_stats(out: &mut BundleWriter, stats: &GraphStats) -> Result<()> {
    out.json("stats/summary.json", stats)?;
    out.csv(
        "stats/relations.csv",
        &["relation", "triples", "entities", "head_entities", "tail_entities", "head_tail_ratio"],
        stats.relations.iter().map(|r| {
            vec![
                r.relation.clone(),
                r.triples.to_string(),
                r.entities.to_string(),
                r.head_entities.to_string(),
                r.tail_entities.to_string(),
                fmt_opt(r.head_tail_ratio),
            ]
        }),
    )
}

#[derive(Serialize)]
struct TrainingRecord<'a> {
    source: &'a str,
    fit_on: FitOn,
    split_sizes: [usize; 3],
    trained_triples: usize,
    config: crate::embedding::TrainConfig,
    report: Option<&'a TrainReport>,
}

/// Returns the table and the held-out test split.
fn train_stage(
    config: &PipelineConfig,
    graph: &KnowledgeGraph,
    out: &mut BundleWriter,
) -> Result<(EmbeddingTable, KnowledgeGraph)> {
    let split = graph.split(&config.split)?;
    let sizes = [split.train.len(), split.validation.len(), split.test.len()];
    let model = config.train.model();
    let training = match config.train.fit_on {
        FitOn::Train => &split.train,
        FitOn::All => graph,
    };
    let (table, report) = match &config.train.load {
        Some(stem) => {
            let table = EmbeddingTable::load(stem)?;
            for name in graph.entities().names() {
                table.entity(name)?;
            }
            for name in graph.relations().names() {
                table.relation(name)?;
            }
            (table, None)
        }
        None => {
            let (table, report) = train_on(graph, training, &model)?;
            log::info!("trained: loss {:.4} -> {:.4}", report.initial_loss, report.final_loss());
            (table, Some(report))
        }
    };
    out.json(
        "embeddings/training.json",
        &TrainingRecord {
            source: if config.train.load.is_some() { "loaded" } else { "trained" },
            fit_on: config.train.fit_on,
            split_sizes: sizes,
            trained_triples: if report.is_some() { training.len() } else { 0 },
            config: model.clone(),
            report: report.as_ref(),
        },
    )?;
    if config.train.export {
        let stem = out.path("embeddings/table.json")?.with_extension("");
        out.path("embeddings/table.bin")?;
        table.save(&stem, serde_json::json!({ "seed": model.seed, "config": model }))?;
    }
    Ok((table, split.test))
}

fn validate_stage(
    config: &PipelineConfig,
    test: &KnowledgeGraph,
    table: &EmbeddingTable,
    profiles: &[RelationProfile],
    out: &mut BundleWriter,
) -> Result<()> {
    let v = &config.validate;
    let options = ValidationOptions { bins: v.bins, epsilon: v.epsilon };
    let mut records = Vec::new();
    for p in profiles {
        if p.direct_similarities.len() < 2 {
            log::warn!("relation `{}`: too few usable triples to validate", p.relation);
            continue;
        }
        records.push(validate_profile(p, &options)?);
    }
    let passes = |r: &ValidationRecord| r.abs_spearman.is_some_and(|a| a >= RHO_FLOOR) && r.kl_divergence <= KL_CEILING;
    let qualifying: Vec<&ValidationRecord> = records.iter().filter(|r| r.triples >= v.min_triples).collect();

    let (hits, ranked) = if test.is_empty() {
        (None, 0)
    } else {
        let sample = test.sample_triples(v.hits_sample, v.seed);
        (Some(hits_at_k(table, &sample, v.hits_k)?), sample.len())
    };
    let summary = ValidationSummary {
        relations: records.len(),
        qualifying: qualifying.len(),
        qualifying_passing: qualifying.iter().filter(|r| passes(r)).count(),
        min_triples: v.min_triples,
        rho_floor: RHO_FLOOR,
        kl_ceiling: KL_CEILING,
        hits_k: v.hits_k,
        hits_at_k: hits,
        hits_ranked: ranked,
        records,
    };
    out.csv(
        "validation/relations.csv",
        &["relation", "triples", "spearman", "abs_spearman", "kl_divergence", "qualifying", "passes"],
        summary.records.iter().map(|r| {
            vec![
                r.relation.clone(),
                r.triples.to_string(),
                fmt_opt(r.spearman),
                fmt_opt(r.abs_spearman),
                fmt6(r.kl_divergence),
                (r.triples >= v.min_triples).to_string(),
                passes(r).to_string(),
            ]
        }),
    )?;
    out.json("validation/summary.json", &summary)
}

fn write_matrix(out: &mut BundleWriter, matrix: &SimilarityMatrix) -> Result<()> {
    let label = matrix.kind.label();
    matrix.write_csv(out.create(&format!("relsim/{label}.csv"))?)?;
    if matrix.len() >= 2 {
        nearest_relations(matrix)?.write_csv(out.create(&format!("relsim/{label}-nearest.csv"))?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RelsimSummary {
    matrices: Vec<MatrixSummary>,
    tfidf_check: Option<TfidfCheck>,
}

#[derive(Serialize)]
struct MatrixSummary {
    kind: String,
    relations: usize,
    mutual_nearest: Vec<(String, String, f64)>,
}

fn relsim_stage(
    config: &PipelineConfig,
    graph: &KnowledgeGraph,
    profiles: &[RelationProfile],
    out: &mut BundleWriter,
) -> Result<Option<TfidfCheck>> {
    let corpus = match &config.relsim.definitions {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            DefinitionCorpus::from_tsv(std::io::BufReader::new(file))?
        }
        None => DefinitionCorpus::bundled(),
    };
    let tfidf = tfidf_similarity_matrix(&corpus, config.relsim.idf)?;
    let check = TfidfCheck::evaluate(&tfidf, config.relsim.idf)?;
    let matrices = vec![
        tfidf,
        jaccard_overlap_matrix(graph, EntitySide::Head),
        jaccard_overlap_matrix(graph, EntitySide::Tail),
        embedding_similarity_matrix(profiles, RelationVector::Centroid)?,
        embedding_similarity_matrix(profiles, RelationVector::Direct)?,
    ];
    let mut summary = RelsimSummary { matrices: Vec::new(), tfidf_check: Some(check.clone()) };
    for m in &matrices {
        write_matrix(out, m)?;
        let mutual = if m.len() >= 2 { nearest_relations(m)?.mutual_pairs() } else { Vec::new() };
        summary.matrices.push(MatrixSummary { kind: m.kind.label().to_owned(), relations: m.len(), mutual_nearest: mutual });
    }
    out.json("relsim/summary.json", &summary)?;
    Ok(Some(check))
}

fn cluster_stage(c: &ClusterSection, graph: &KnowledgeGraph, table: &EmbeddingTable, out: &mut BundleWriter) -> Result<()> {
    let mut used = HashSet::new();
    for name in &c.relations {
        let dir = format!("cluster/{}", slug(name));
        if !used.insert(dir.clone()) {
            return Err(Error::Config(format!("cluster relation `{name}` repeats or collides with another")));
        }
        let rel = graph.require_relation(name)?;
        let points = relation_point_set(table, graph, rel)?;
        if points.len() <= c.k {
            return Err(Error::invalid(format!("relation `{name}` has {} triples, too few for k = {}", points.len(), c.k)));
        }
        let result = lloyd_kmeans(&points, &KMeansConfig { k: c.k, seed: c.seed, max_iters: c.max_iters, tol: c.tol })?;
        let quality = cluster_quality(name, &points, &result)?;
        let k_selection = match c.k_range {
            Some([lo, hi]) => {
                let hi = hi.min(points.len() - 1);
                let ks: Vec<usize> = (lo..=hi).collect();
                if ks.is_empty() {
                    return Err(Error::invalid(format!("k range is empty for `{name}` with {} points", points.len())));
                }
                let opts = KSelectionOptions { max_iters: c.max_iters, tol: c.tol, silhouette_sample: c.silhouette_sample };
                Some(k_selection_scores(&points, &ks, c.seed, &opts)?)
            }
            None => None,
        };
        let exemplars = sample_cluster_exemplars(&result, &points, graph, c.exemplars_per_cluster, c.seed)?;
        let projection = pca_project_2d(&points)?;

        out.csv(
            &format!("{dir}/quality.csv"),
            &["cluster", "size", "cohesion_raw", "cohesion", "separation"],
            quality
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.cluster.to_string(),
                        r.size.to_string(),
                        fmt_opt(r.cohesion_raw),
                        fmt_opt(r.cohesion),
                        fmt_opt(r.separation),
                    ]
                })
                .chain([
                    vec!["mean".into(), String::new(), fmt_opt(quality.cohesion_raw_mean), fmt_opt(quality.cohesion_mean), fmt_opt(quality.separation_mean)],
                    vec!["std".into(), String::new(), fmt_opt(quality.cohesion_raw_std), fmt_opt(quality.cohesion_std), fmt_opt(quality.separation_std)],
                ]),
        )?;
        if let Some(curve) = &k_selection {
            out.csv(
                &format!("{dir}/k-selection.csv"),
                &["k", "inertia", "silhouette", "davies_bouldin", "calinski_harabasz"],
                (0..curve.ks.len()).map(|i| {
                    vec![
                        curve.ks[i].to_string(),
                        fmt6(curve.inertia[i]),
                        fmt6(curve.silhouette[i]),
                        fmt6(curve.davies_bouldin[i]),
                        fmt6(curve.calinski_harabasz[i]),
                    ]
                }),
            )?;
        }
        out.csv(
            &format!("{dir}/exemplars.csv"),
            &["cluster", "head", "relation", "tail"],
            exemplars.iter().map(|e| vec![e.cluster.to_string(), e.head.clone(), e.relation.clone(), e.tail.clone()]),
        )?;
        out.csv(
            &format!("{dir}/pca.csv"),
            &["x", "y", "cluster", "head", "tail"],
            projection.coords.iter().zip(&result.assignments).zip(points.triple_indices()).map(|((xy, c), &ti)| {
                let (h, _, t) = graph.names(graph.triple(ti));
                vec![fmt6(xy[0]), fmt6(xy[1]), c.to_string(), h.to_owned(), t.to_owned()]
            }),
        )?;
        out.json(
            &format!("{dir}/report.json"),
            &ClusterReport {
                relation: name.clone(),
                points: points.len(),
                k: result.k,
                seed: c.seed,
                iterations: result.iterations,
                converged: result.converged,
                inertia: result.inertia,
                inertia_history: result.inertia_history.clone(),
                quality,
                k_selection,
                explained_variance_ratio: projection.explained_variance_ratio,
            },
        )?;
    }
    Ok(())
}

fn negation_stage(n: &NegationSection, graph: &KnowledgeGraph, table: &EmbeddingTable, out: &mut BundleWriter) -> Result<()> {
    let universe = build_pair_universe(graph, &n.relation, &n.negation)?;
    let sample = sample_unknown_pairs(&universe, n.seed);
    let dataset = assemble_dataset(table, &universe, &sample)?;
    let binary = dataset.binary();
    let mut kinds = Vec::new();
    if let Some(l) = &n.logistic {
        kinds.push(ClassifierKind::Logistic(l.clone()));
    }
    if let Some(f) = &n.forest {
        kinds.push(ClassifierKind::Forest(f.clone()));
    }
    let reports = kinds.iter().map(|k| cross_validate(&binary, k, n.folds, n.seed)).collect::<Result<Vec<_>>>()?;

    out.csv(
        "negation/cross-validation.csv",
        &["classifier", "fold", "size", "accuracy"],
        reports.iter().flat_map(|r| {
            (0..r.folds)
                .map(|f| vec![r.classifier.name().to_owned(), f.to_string(), r.fold_sizes[f].to_string(), fmt6(r.fold_accuracies[f])])
                .chain([
                    vec![r.classifier.name().to_owned(), "mean".into(), String::new(), fmt6(r.mean_accuracy)],
                    vec![r.classifier.name().to_owned(), "baseline".into(), String::new(), fmt6(r.baseline_accuracy)],
                ])
                .collect::<Vec<_>>()
        }),
    )?;
    {
        let mut w = out.create("negation/unknown-pairs.tsv")?;
        sample.write_generic(&universe, "Unknown", &mut w).map_err(|e| Error::io("negation/unknown-pairs.tsv", e))?;
    }
    if dataset.features.len() >= 2 {
        match pca_project_2d(&PointSet::from_rows(&dataset.features)?) {
            Ok(projection) => out.csv(
                "negation/pca.csv",
                &["x", "y", "label", "head", "tail"],
                projection.coords.iter().zip(&dataset.labels).zip(&dataset.pairs).map(|((xy, l), (h, t))| {
                    let label = match l {
                        PairLabel::Positive => n.relation.as_str(),
                        PairLabel::Negative => n.negation.as_str(),
                        PairLabel::Unknown => "Unknown",
                    };
                    vec![fmt6(xy[0]), fmt6(xy[1]), label.to_owned(), h.clone(), t.clone()]
                }),
            )?,
            Err(e) => log::warn!("negation projection skipped: {e}"),
        }
    }
    out.json(
        "negation/report.json",
        &NegationReport {
            universe: universe.summary(),
            tail_ratio: sample.tail_ratio,
            sampled_unknown: sample.pairs.len(),
            rows: dataset.labels.len(),
            binary_rows: binary.len(),
            cross_validation: reports,
        },
    )
}
