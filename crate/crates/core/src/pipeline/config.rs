use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedding::TrainConfig;
use crate::error::{Error, Result};
use crate::graph::{EdgeFormat, SplitSpec};
use crate::negation::{ForestConfig, LogisticConfig};
use crate::relsim::IdfVariant;

/// Everything a run needs, normally read from one TOML file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    pub split: SplitSpec,
    pub train: TrainSection,
    pub validate: ValidateSection,
    pub relsim: RelsimSection,
    pub cluster: ClusterSection,
    pub negation: NegationSection,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub path: PathBuf,
    pub format: EdgeFormat,
    pub exclude_relations: Vec<String>,
    /// Uniform triple sample taken after exclusion.
    pub sample_size: Option<usize>,
    pub seed: u64,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::new(),
            format: EdgeFormat::Generic3Col,
            exclude_relations: vec!["ExternalURL".into()],
            sample_size: None,
            seed: 0,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitOn {
    /// The train split only.
    #[default]
    Train,
    /// Every triple.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    /// Write the table into the bundle.
    pub export: bool,
    pub fit_on: FitOn,
    /// Stem of a saved table to use instead of training.
    pub load: Option<PathBuf>,
    pub dimension: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub margin: f64,
    pub negatives: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self::with_model(TrainConfig::default())
    }
}

impl TrainSection {
    pub fn with_model(m: TrainConfig) -> Self {
        Self {
            export: false,
            fit_on: FitOn::Train,
            load: None,
            dimension: m.dimension,
            epochs: m.epochs,
            learning_rate: m.learning_rate,
            margin: m.margin,
            negatives: m.negatives,
            batch_size: m.batch_size,
            seed: m.seed,
        }
    }

    pub fn model(&self) -> TrainConfig {
        TrainConfig {
            dimension: self.dimension,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            margin: self.margin,
            negatives: self.negatives,
            batch_size: self.batch_size,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    pub enabled: bool,
    pub bins: usize,
    pub epsilon: f64,
    /// Relations below this size are reported but not counted as qualifying.
    pub min_triples: usize,
    pub hits_k: usize,
    /// Cap on test triples ranked for hits@k.
    pub hits_sample: usize,
    pub seed: u64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self { enabled: false, bins: 100, epsilon: 1e-9, min_triples: 100, hits_k: 10, hits_sample: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelsimSection {
    pub enabled: bool,
    /// Tab-separated `relation<TAB>definition` file; the bundled corpus when unset.
    pub definitions: Option<PathBuf>,
    pub idf: IdfVariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    pub enabled: bool,
    pub relations: Vec<String>,
    pub k: usize,
    /// Inclusive `[low, high]` range scanned for k selection.
    pub k_range: Option<[usize; 2]>,
    pub max_iters: usize,
    pub tol: f64,
    pub exemplars_per_cluster: usize,
    pub silhouette_sample: Option<usize>,
    pub seed: u64,
}

impl Default for ClusterSection {
    fn default() -> Self {
        Self {
            enabled: false,
            relations: Vec::new(),
            k: 20,
            k_range: None,
            max_iters: 300,
            tol: 1e-4,
            exemplars_per_cluster: 5,
            silhouette_sample: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NegationSection {
    pub enabled: bool,
    pub relation: String,
    pub negation: String,
    pub folds: usize,
    pub seed: u64,
    pub logistic: Option<LogisticConfig>,
    pub forest: Option<ForestConfig>,
}

impl Default for NegationSection {
    fn default() -> Self {
        Self {
            enabled: false,
            relation: "Desires".into(),
            negation: "NotDesires".into(),
            folds: 10,
            seed: 0,
            logistic: Some(LogisticConfig::default()),
            forest: Some(ForestConfig::default()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Threads for intra-stage parallelism; all cores when unset.
    pub workers: Option<usize>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("report"), workers: None }
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Config(m),
        other => other,
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))
    }

    /// Parses a config file. Relative input paths (`input.path`,
    /// `train.load`, `relsim.definitions`) are taken relative to the file's
    /// directory; `output.dir` stays relative to the working directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(base) = path.parent() {
            cfg.rebase(base);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.input.path);
        if let Some(p) = self.train.load.as_mut() {
            fix(p);
        }
        if let Some(p) = self.relsim.definitions.as_mut() {
            fix(p);
        }
    }

    /// Any stage that needs an embedding table.
    pub fn needs_embeddings(&self) -> bool {
        self.train.export || self.validate.enabled || self.relsim.enabled || self.cluster.enabled || self.negation.enabled
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.path.as_os_str().is_empty() {
            return Err(Error::Config("input.path is required".into()));
        }
        if self.input.sample_size == Some(0) {
            return Err(Error::Config("input.sample_size must be positive".into()));
        }
        self.split.validate().map_err(config_error)?;
        if self.needs_embeddings() && self.train.load.is_none() {
            self.train.model().validate().map_err(config_error)?;
        }
        if self.validate.enabled {
            let v = &self.validate;
            if v.bins == 0 || v.hits_k == 0 || v.hits_sample == 0 {
                return Err(Error::Config("validate.bins, hits_k and hits_sample must be positive".into()));
            }
            if !(v.epsilon >= 0.0 && v.epsilon.is_finite()) {
                return Err(Error::Config("validate.epsilon must be a finite non-negative number".into()));
            }
        }
        if self.cluster.enabled {
            let c = &self.cluster;
            if c.relations.is_empty() {
                return Err(Error::Config("cluster.relations lists no relation".into()));
            }
            if c.k < 2 {
                return Err(Error::Config("cluster.k must be at least 2".into()));
            }
            if let Some([lo, hi]) = c.k_range {
                if lo < 2 || hi < lo {
                    return Err(Error::Config("cluster.k_range must satisfy 2 <= low <= high".into()));
                }
            }
            if c.exemplars_per_cluster == 0 || c.max_iters == 0 {
                return Err(Error::Config("cluster.exemplars_per_cluster and max_iters must be positive".into()));
            }
        }
        if self.negation.enabled {
            let n = &self.negation;
            if n.relation == n.negation {
                return Err(Error::Config("negation.relation and negation.negation must differ".into()));
            }
            if n.folds < 2 {
                return Err(Error::Config("negation.folds must be at least 2".into()));
            }
            if n.logistic.is_none() && n.forest.is_none() {
                return Err(Error::Config("negation selects no classifier".into()));
            }
        }
        if self.output.workers == Some(0) {
            return Err(Error::Config("output.workers must be positive".into()));
        }
        Ok(())
    }

    /// Relations that must exist in the ingested graph.
    pub fn referenced_relations(&self) -> Vec<&str> {
        let mut out = Vec::new();
        if self.cluster.enabled {
            out.extend(self.cluster.relations.iter().map(String::as_str));
        }
        if self.negation.enabled {
            out.push(self.negation.relation.as_str());
            out.push(self.negation.negation.as_str());
        }
        out
    }
}
