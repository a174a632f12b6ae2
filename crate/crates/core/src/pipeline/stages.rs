use super::config::PipelineConfig;
use super::manifest::{hash_entry, Manifest, MANIFEST_FILE};
use crate::community::{louvain, modularity_by_attribute, modularity_by_similarity, SimilarityModularity};
use crate::dataset::{self, labels, make_training_set, materialize, read_pairs_csv, split, NegativeMode, PairSample};
use crate::error::{Error, Result};
use crate::eval::{
    classify, evaluate_protocol, run_ablation, write_ablation_csv, AblationConfig, AblationRow, ClassificationReport,
    EvalReport, ForestScorer, ProtocolConfig, RandomScorer, SageScorer,
};
use crate::features::{similarity_weight, NodeFeatureTable, PairLayout, Variant};
use crate::forest::{train_forest, Forest};
use crate::graph::io::{load_binary, save_binary, write_gexf, write_viz_csv};
use crate::graph::{
    all_clustering, attribute_assortativity, connected_components, fit_power_law_ccdf, largest_cc,
    top_degree_neighborhood, Adjacency, BuildReport, CoPurchaseGraph, DegreeDistribution, PowerLawFit,
};
use crate::meta::{open_metadata, parse_metadata, FilterPolicy, ProductRecord};
use crate::sage::{predict_samples, train_sage, SageModel};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const PARSE: &str = "parse";
pub const BUILD_GRAPH: &str = "build-graph";
pub const STATS: &str = "stats";
pub const COMMUNITIES: &str = "communities";
pub const FEATURES: &str = "features";
pub const MAKE_DATASET: &str = "make-dataset";
pub const TRAIN_RF: &str = "train-rf";
pub const TRAIN_SAGE: &str = "train-sage";
pub const EVALUATE: &str = "evaluate";
pub const ABLATE: &str = "ablate";
pub const EXPORT_VIZ: &str = "export-viz";
pub const REPRO_REPORT: &str = "repro-report";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Rf,
    Sage,
    Random,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rf => "rf",
            ModelKind::Sage => "sage",
            ModelKind::Random => "random",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rf" => Ok(ModelKind::Rf),
            "sage" => Ok(ModelKind::Sage),
            "random" => Ok(ModelKind::Random),
            _ => Err(Error::invalid(format!("unknown model `{s}` (expected rf, sage or random)"))),
        }
    }
}

/// Stage directories under one root, each with a manifest.
pub struct Workspace {
    pub root: PathBuf,
    pub force: bool,
}

impl Workspace {
    pub fn new(root: impl Into<PathBuf>, force: bool) -> Self {
        Self {
            root: root.into(),
            force,
        }
    }

    pub fn dir(&self, stage: &str) -> PathBuf {
        self.root.join(stage)
    }

    /// Relative path of an artifact.
    pub fn rel(stage: &str, name: &str) -> PathBuf {
        Path::new(stage).join(name)
    }

    /// Loads and verifies the manifest of an upstream stage.
    pub fn require(&self, stage: &str) -> Result<Manifest> {
        let path = self.dir(stage).join(MANIFEST_FILE);
        if !path.exists() {
            return Err(Error::MissingArtifact {
                stage: stage.split('/').next().unwrap_or(stage).to_string(),
                path,
            });
        }
        let m = Manifest::load(&path)?;
        m.verify_outputs(&self.root, self.force)?;
        Ok(m)
    }

    /// Path of a verified upstream artifact.
    pub fn artifact(&self, stage: &str, name: &str) -> Result<PathBuf> {
        let m = self.require(stage)?;
        if m.output(name).is_none() {
            return Err(Error::MissingArtifact {
                stage: stage.to_string(),
                path: self.dir(stage).join(name),
            });
        }
        Ok(self.dir(stage).join(name))
    }

    fn begin(&self, stage: &str) -> Result<PathBuf> {
        let d = self.dir(stage);
        std::fs::create_dir_all(&d)?;
        Ok(d)
    }

    fn finish(
        &self,
        stage: &str,
        cfg: &PipelineConfig,
        inputs: &[PathBuf],
        external: &[PathBuf],
        outputs: &[&str],
    ) -> Result<Manifest> {
        let dir = self.dir(stage);
        std::fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
        let mut ins = Vec::new();
        for p in external {
            ins.push(hash_entry(Path::new(""), p)?);
        }
        for p in inputs {
            ins.push(hash_entry(&self.root, p.strip_prefix(&self.root).unwrap_or(p))?);
        }
        let mut outs = Vec::new();
        for name in outputs.iter().copied().chain(["config.toml"]) {
            outs.push(hash_entry(&self.root, &Self::rel(stage, name))?);
        }
        let m = Manifest {
            stage: stage.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            created: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            config: serde_json::to_value(cfg)?,
            inputs: ins,
            outputs: outs,
        };
        m.save(&dir.join(MANIFEST_FILE))?;
        Ok(m)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

fn save_bincode<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    bincode::serialize_into(&mut w, value)?;
    w.flush()?;
    Ok(())
}

fn load_bincode<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(bincode::deserialize_from(BufReader::new(File::open(path)?))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseReport {
    pub raw_records: usize,
    pub malformed: usize,
    pub retained: usize,
    pub policy: FilterPolicy,
}

pub fn parse(ws: &Workspace, cfg: &PipelineConfig) -> Result<ParseReport> {
    let dir = ws.begin(PARSE)?;
    let input = open_metadata(&cfg.dataset)?;
    let mut kept: Vec<ProductRecord> = Vec::new();
    let (mut raw, mut malformed) = (0usize, 0usize);
    for item in parse_metadata(input) {
        match item {
            Ok(r) => {
                raw += 1;
                if cfg.filter.accepts(&r) {
                    kept.push(r);
                }
            }
            Err(e) => {
                malformed += 1;
                log::warn!("skipping malformed record: {e}");
            }
        }
    }
    if raw == 0 {
        log::warn!("{} contains no records", cfg.dataset.display());
    }
    let report = ParseReport {
        raw_records: raw,
        malformed,
        retained: kept.len(),
        policy: cfg.filter,
    };
    save_bincode(&dir.join("records.bin"), &kept)?;
    write_json(&dir.join("parse_report.json"), &report)?;
    ws.finish(PARSE, cfg, &[], std::slice::from_ref(&cfg.dataset), &["records.bin", "parse_report.json"])?;
    Ok(report)
}

fn load_records(ws: &Workspace) -> Result<(Vec<ProductRecord>, PathBuf)> {
    let p = ws.artifact(PARSE, "records.bin")?;
    Ok((load_bincode(&p)?, p))
}

pub fn build_graph(ws: &Workspace, cfg: &PipelineConfig) -> Result<BuildReport> {
    let (records, input) = load_records(ws)?;
    let dir = ws.begin(BUILD_GRAPH)?;
    let (g, report) = CoPurchaseGraph::build(&records);
    g.check_invariants().map_err(Error::Invariant)?;
    save_binary(&g, dir.join("graph.bin"))?;
    let lcc = largest_cc(&g)?;
    save_binary(&lcc, dir.join("lcc.bin"))?;
    write_json(&dir.join("build_report.json"), &report)?;
    ws.finish(BUILD_GRAPH, cfg, &[input], &[], &["graph.bin", "lcc.bin", "build_report.json"])?;
    Ok(report)
}

fn load_graph(ws: &Workspace, name: &str) -> Result<(CoPurchaseGraph, PathBuf)> {
    let p = ws.artifact(BUILD_GRAPH, name)?;
    Ok((load_binary(&p)?, p))
}

/// Graph the labeled pairs live on: the LCC, or the full graph when
/// negatives are drawn from isolated products (the LCC has none).
fn load_pair_graph(ws: &Workspace, cfg: &PipelineConfig) -> Result<(CoPurchaseGraph, PathBuf)> {
    match cfg.pairs.negatives {
        NegativeMode::NonAdjacent => load_graph(ws, "lcc.bin"),
        NegativeMode::Isolated => load_graph(ws, "graph.bin"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub isolated: usize,
    pub components: usize,
    pub non_singleton_components: usize,
    pub lcc_nodes: usize,
    pub lcc_edges: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    /// `max_degree / (nodes - 1)`.
    pub max_degree_centrality: f64,
    pub mean_clustering: f64,
    /// Group assortativity on the LCC.
    pub assortativity: f64,
    /// CCDF regression on all non-isolated nodes.
    pub alpha: f64,
    pub power_law: PowerLawFit,
    pub power_law_lcc: PowerLawFit,
}

fn write_ccdf(path: &Path, dist: &DegreeDistribution) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["degree", "count", "ccdf"])?;
    for &(k, p) in &dist.ccdf {
        w.write_record([k.to_string(), dist.histogram[&k].to_string(), format!("{p}")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn compute_stats(g: &CoPurchaseGraph, lcc: &CoPurchaseGraph, k_min: usize) -> Result<GraphStats> {
    let comps = connected_components(g);
    let degrees = g.degrees();
    let n = g.node_count();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let dist = DegreeDistribution::from_degrees(degrees.iter().copied());
    let fit = fit_power_law_ccdf(&dist, k_min)?;
    let fit_lcc = fit_power_law_ccdf(&DegreeDistribution::of(lcc), k_min)?;
    let cc = all_clustering(g);
    Ok(GraphStats {
        nodes: n,
        edges: g.edge_count(),
        isolated: degrees.iter().filter(|&&d| d == 0).count(),
        components: comps.count(),
        non_singleton_components: comps.non_singleton(),
        lcc_nodes: lcc.node_count(),
        lcc_edges: lcc.edge_count(),
        mean_degree: if n == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / n as f64 },
        max_degree,
        max_degree_centrality: if n > 1 { max_degree as f64 / (n - 1) as f64 } else { 0.0 },
        mean_clustering: if n == 0 { 0.0 } else { cc.iter().sum::<f64>() / n as f64 },
        assortativity: attribute_assortativity(lcc, |v| lcc.attrs(v).group.as_str().to_string())?,
        alpha: fit.alpha,
        power_law: fit,
        power_law_lcc: fit_lcc,
    })
}

pub fn stats(ws: &Workspace, cfg: &PipelineConfig) -> Result<GraphStats> {
    let (g, gp) = load_graph(ws, "graph.bin")?;
    let (lcc, lp) = load_graph(ws, "lcc.bin")?;
    let dir = ws.begin(STATS)?;
    let s = compute_stats(&g, &lcc, cfg.stats.k_min)?;
    write_json(&dir.join("stats.json"), &s)?;
    write_ccdf(&dir.join("degree_ccdf.csv"), &DegreeDistribution::of(&g))?;
    write_ccdf(&dir.join("degree_ccdf_lcc.csv"), &DegreeDistribution::of(&lcc))?;
    ws.finish(STATS, cfg, &[gp, lp], &[], &["stats.json", "degree_ccdf.csv", "degree_ccdf_lcc.csv"])?;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub louvain_modularity: f64,
    pub louvain_communities: usize,
    pub louvain_levels: usize,
    pub group_modularity: f64,
    pub category_modularity: SimilarityModularity,
}

pub fn communities(ws: &Workspace, cfg: &PipelineConfig) -> Result<CommunityReport> {
    let (lcc, lp) = load_graph(ws, "lcc.bin")?;
    let dir = ws.begin(COMMUNITIES)?;
    let lv = louvain(&lcc, cfg.communities.louvain_seed)?;
    let mut w = csv::Writer::from_path(dir.join("partition.csv"))?;
    w.write_record(["node", "asin", "community"])?;
    for v in 0..lcc.node_count() {
        w.write_record([v.to_string(), lcc.attrs(v).asin.clone(), lv.partition.community(v).to_string()])?;
    }
    w.flush()?;
    let report = CommunityReport {
        louvain_modularity: lv.modularity,
        louvain_communities: lv.partition.count(),
        louvain_levels: lv.levels.len(),
        group_modularity: modularity_by_attribute(&lcc, |v| lcc.attrs(v).group.as_str().to_string())?,
        category_modularity: modularity_by_similarity(&lcc, similarity_weight(&lcc, cfg.d_cat), cfg.communities.null_model)?,
    };
    write_json(&dir.join("modularity.json"), &report)?;
    write_json(&dir.join("louvain_levels.json"), &lv.levels)?;
    ws.finish(COMMUNITIES, cfg, &[lp], &[], &["partition.csv", "modularity.json", "louvain_levels.json"])?;
    Ok(report)
}

pub fn features(ws: &Workspace, cfg: &PipelineConfig) -> Result<usize> {
    let (g, gp) = load_graph(ws, "graph.bin")?;
    let dir = ws.begin(FEATURES)?;
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    let mut w = csv::Writer::from_path(dir.join("node_features.csv"))?;
    w.write_record(["node", "asin", "book", "dvd", "music", "video", "log_degree", "clustering"])?;
    for (v, row) in table.rows().iter().enumerate() {
        let mut rec = vec![v.to_string(), g.attrs(v).asin.clone()];
        rec.extend(row.iter().map(|x| format!("{x}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    ws.finish(FEATURES, cfg, &[gp], &[], &["node_features.csv"])?;
    Ok(table.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub one_degree_nodes: usize,
    pub train: usize,
    pub test: usize,
    pub train_positive: usize,
    pub test_positive: usize,
    pub feature_columns: Vec<String>,
}

pub fn make_dataset(ws: &Workspace, cfg: &PipelineConfig) -> Result<DatasetSummary> {
    let (g, gp) = load_pair_graph(ws, cfg)?;
    let dir = ws.begin(MAKE_DATASET)?;
    let mut pairs_cfg = cfg.pairs;
    pairs_cfg.seed = cfg.seed;
    let samples = make_training_set(&g, &pairs_cfg)?;
    let (train, test) = split(&samples, cfg.split.train_fraction, cfg.seed)?;
    dataset::write_pairs_csv(&g, &train, BufWriter::new(File::create(dir.join("train_pairs.csv"))?))?;
    dataset::write_pairs_csv(&g, &test, BufWriter::new(File::create(dir.join("test_pairs.csv"))?))?;
    let layout = PairLayout::new(cfg.variant, cfg.d_cat);
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    for (name, part) in [("train_features.csv", &train), ("test_features.csv", &test)] {
        let x = materialize(&g, &table, &layout, part);
        dataset::write_features_csv(&layout, &x, &labels(part), BufWriter::new(File::create(dir.join(name))?))?;
    }
    let summary = DatasetSummary {
        one_degree_nodes: dataset::one_degree_nodes(&g).len(),
        train: train.len(),
        test: test.len(),
        train_positive: train.iter().filter(|s| s.label == 1).count(),
        test_positive: test.iter().filter(|s| s.label == 1).count(),
        feature_columns: layout.column_names(),
    };
    write_json(&dir.join("dataset.json"), &summary)?;
    ws.finish(
        MAKE_DATASET,
        cfg,
        &[gp],
        &[],
        &["train_pairs.csv", "test_pairs.csv", "train_features.csv", "test_features.csv", "dataset.json"],
    )?;
    Ok(summary)
}

fn load_pairs(ws: &Workspace, g: &CoPurchaseGraph) -> Result<(Vec<PairSample>, Vec<PairSample>, Vec<PathBuf>)> {
    let tp = ws.artifact(MAKE_DATASET, "train_pairs.csv")?;
    let ep = ws.artifact(MAKE_DATASET, "test_pairs.csv")?;
    let train = read_pairs_csv(g, File::open(&tp)?)?;
    let test = read_pairs_csv(g, File::open(&ep)?)?;
    Ok((train, test, vec![tp, ep]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub model: String,
    pub variant: Variant,
    pub train_size: usize,
    pub test: ClassificationReport,
    pub oob_accuracy: Option<f64>,
    pub final_loss: Option<f64>,
}

pub fn train_rf(ws: &Workspace, cfg: &PipelineConfig) -> Result<TrainReport> {
    let (g, gp) = load_pair_graph(ws, cfg)?;
    let (train, test, mut inputs) = load_pairs(ws, &g)?;
    inputs.push(gp);
    let dir = ws.begin(TRAIN_RF)?;
    let layout = PairLayout::new(cfg.variant, cfg.d_cat);
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    let x = materialize(&g, &table, &layout, &train);
    let forest = train_forest(&x, &labels(&train), &cfg.forest, cfg.seed)?;
    let scores = forest.predict_matrix(&materialize(&g, &table, &layout, &test))?;
    let report = TrainReport {
        model: "rf".into(),
        variant: cfg.variant,
        train_size: train.len(),
        test: classify(&labels(&test), &scores)?,
        oob_accuracy: forest.oob_accuracy,
        final_loss: None,
    };
    forest.save(dir.join("forest.json"))?;
    write_json(&dir.join("metrics.json"), &report)?;
    ws.finish(TRAIN_RF, cfg, &inputs, &[], &["forest.json", "metrics.json"])?;
    Ok(report)
}

pub fn train_sage_stage(ws: &Workspace, cfg: &PipelineConfig) -> Result<TrainReport> {
    let (g, gp) = load_pair_graph(ws, cfg)?;
    let (train, test, mut inputs) = load_pairs(ws, &g)?;
    inputs.push(gp);
    let dir = ws.begin(TRAIN_SAGE)?;
    let mut hyper = cfg.sage;
    hyper.seed = cfg.seed;
    hyper.d_cat = cfg.d_cat;
    let model = train_sage(&g, &train, &hyper)?;
    let scores = predict_samples(&g, &test, &model, cfg.seed);
    let report = TrainReport {
        model: "sage".into(),
        variant: cfg.variant,
        train_size: train.len(),
        test: classify(&labels(&test), &scores)?,
        oob_accuracy: None,
        final_loss: model.loss_trace.last().copied(),
    };
    model.save(dir.join("sage.json"))?;
    model.write_loss_csv(BufWriter::new(File::create(dir.join("loss.csv"))?))?;
    write_json(&dir.join("metrics.json"), &report)?;
    ws.finish(TRAIN_SAGE, cfg, &inputs, &[], &["sage.json", "loss.csv", "metrics.json"])?;
    Ok(report)
}

pub fn evaluate(ws: &Workspace, cfg: &PipelineConfig, model: ModelKind) -> Result<EvalReport> {
    let (lcc, lp) = load_graph(ws, "lcc.bin")?;
    let mut inputs = vec![lp];
    let protocol = ProtocolConfig {
        n: cfg.eval.n,
        ks: cfg.eval.ks.clone(),
        seeds: cfg.eval_seeds(),
    };
    let (mut report, classification) = match model {
        ModelKind::Random => (evaluate_protocol(&lcc, &RandomScorer::new(cfg.seed), &protocol)?, None),
        ModelKind::Rf => {
            let p = ws.artifact(TRAIN_RF, "forest.json")?;
            let forest = Forest::load(&p)?;
            let metrics: TrainReport = read_json(&ws.artifact(TRAIN_RF, "metrics.json")?)?;
            inputs.push(p);
            let scorer = ForestScorer {
                forest: &forest,
                layout: PairLayout::new(metrics.variant, cfg.d_cat),
            };
            (evaluate_protocol(&lcc, &scorer, &protocol)?, Some(metrics.test))
        }
        ModelKind::Sage => {
            let p = ws.artifact(TRAIN_SAGE, "sage.json")?;
            let m = SageModel::load(&p)?;
            let metrics: TrainReport = read_json(&ws.artifact(TRAIN_SAGE, "metrics.json")?)?;
            inputs.push(p);
            (evaluate_protocol(&lcc, &SageScorer { model: &m }, &protocol)?, Some(metrics.test))
        }
    };
    report.classification = classification;
    if model != ModelKind::Random {
        report.variant = Some(cfg.variant.to_string());
    }
    let stage = format!("{EVALUATE}/{}", model.name());
    let dir = ws.begin(&stage)?;
    write_json(&dir.join("report.json"), &report)?;
    report.write_curve_csv(BufWriter::new(File::create(dir.join("topk.csv"))?))?;
    ws.finish(&stage, cfg, &inputs, &[], &["report.json", "topk.csv"])?;
    Ok(report)
}

pub fn ablate(ws: &Workspace, cfg: &PipelineConfig, variants: &[Variant]) -> Result<Vec<AblationRow>> {
    let (g, gp) = load_pair_graph(ws, cfg)?;
    let dir = ws.begin(ABLATE)?;
    let mut dataset_cfg = cfg.pairs;
    dataset_cfg.seed = cfg.seed;
    let ab = AblationConfig {
        dataset: dataset_cfg,
        train_fraction: cfg.split.train_fraction,
        forest: cfg.forest,
        d_cat: cfg.d_cat,
        seed: cfg.seed,
    };
    let rows = run_ablation(&g, &ab, variants)?;
    write_ablation_csv(&rows, BufWriter::new(File::create(dir.join("ablation.csv"))?))?;
    write_json(&dir.join("ablation.json"), &rows)?;
    ws.finish(ABLATE, cfg, &[gp], &[], &["ablation.csv", "ablation.json"])?;
    Ok(rows)
}

pub fn export_viz(ws: &Workspace, cfg: &PipelineConfig, top: usize) -> Result<(usize, usize)> {
    let (g, gp) = load_graph(ws, "graph.bin")?;
    let dir = ws.begin(EXPORT_VIZ)?;
    let sub = top_degree_neighborhood(&g, top);
    write_gexf(&sub, BufWriter::new(File::create(dir.join("top_neighborhood.gexf"))?))?;
    write_viz_csv(
        &sub,
        BufWriter::new(File::create(dir.join("top_nodes.csv"))?),
        BufWriter::new(File::create(dir.join("top_edges.csv"))?),
    )?;
    ws.finish(
        EXPORT_VIZ,
        cfg,
        &[gp],
        &[],
        &["top_neighborhood.gexf", "top_nodes.csv", "top_edges.csv"],
    )?;
    Ok((sub.node_count(), sub.edge_count()))
}

/// One measured quantity next to its reference value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub name: String,
    pub measured: Option<f64>,
    pub reference: f64,
    pub tolerance: f64,
    pub within: Option<bool>,
}

fn line(name: &str, measured: Option<f64>, reference: f64, tolerance: f64) -> ReportLine {
    ReportLine {
        name: name.into(),
        measured,
        reference,
        tolerance,
        within: measured.map(|m| (m - reference).abs() <= tolerance),
    }
}

/// Collects whatever stage outputs exist into `report.json` and
/// `report.md`. Requires at least `stats`.
pub fn repro_report(ws: &Workspace, cfg: &PipelineConfig) -> Result<Vec<ReportLine>> {
    let sp = ws.artifact(STATS, "stats.json")?;
    let s: GraphStats = read_json(&sp)?;
    let mut inputs = vec![sp];
    let optional = |stage: &str, name: &str| -> Result<Option<PathBuf>> {
        match ws.artifact(stage, name) {
            Ok(p) => Ok(Some(p)),
            Err(Error::MissingArtifact { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut lines = vec![
        line("nodes", Some(s.nodes as f64), 519_497.0, 0.0),
        line("edges", Some(s.edges as f64), 964_468.0, 0.0),
        line("isolated", Some(s.isolated as f64), 159_575.0, 0.0),
        line("components", Some(s.components as f64), 165_510.0, 0.0),
        line("non_singleton_components", Some(s.non_singleton_components as f64), 5_935.0, 0.0),
        line("lcc_nodes", Some(s.lcc_nodes as f64), 327_953.0, 0.0),
        line("lcc_edges", Some(s.lcc_edges as f64), 902_604.0, 0.0),
        line("group_assortativity", Some(s.assortativity), 0.327, 0.005),
        line("alpha_ccdf_lcc", Some(s.power_law_lcc.alpha), 3.55, 0.2),
        line("alpha_hill_lcc", Some(s.power_law_lcc.hill_alpha), 3.55, 0.2),
        line("alpha_ccdf_graph", Some(s.power_law.alpha), 3.55, 0.2),
        line("alpha_hill_graph", Some(s.power_law.hill_alpha), 3.55, 0.2),
    ];
    if let Some(p) = optional(COMMUNITIES, "modularity.json")? {
        let c: CommunityReport = read_json(&p)?;
        lines.push(line("louvain_modularity", Some(c.louvain_modularity), 0.926, 0.026));
        lines.push(line("group_modularity", Some(c.group_modularity), 0.181, 0.01));
        lines.push(line("category_modularity", Some(c.category_modularity.modularity), 0.155, 0.03));
        inputs.push(p);
    }
    if let Some(p) = optional(TRAIN_RF, "metrics.json")? {
        let r: TrainReport = read_json(&p)?;
        lines.push(line("rf_f1", Some(r.test.f1), 0.9094, 0.03));
        lines.push(line("rf_roc_auc", Some(r.test.roc_auc), 0.9667, 0.02));
        inputs.push(p);
    }
    if let Some(p) = optional(ABLATE, "ablation.json")? {
        let rows: Vec<AblationRow> = read_json(&p)?;
        if let Some(r) = rows.iter().find(|r| r.variant == Variant::NoCategory) {
            lines.push(line("no_category_precision", Some(r.metrics.precision), 0.8416, 0.03));
            lines.push(line("no_category_recall", Some(r.metrics.recall), 0.9237, 0.03));
        }
        inputs.push(p);
    }
    for (model, reference) in [("random", 0.0063), ("rf", 0.0125), ("sage", 0.0187)] {
        let stage = format!("{EVALUATE}/{model}");
        if let Some(p) = optional(&stage, "report.json")? {
            let r: EvalReport = read_json(&p)?;
            lines.push(line(&format!("{model}_top5"), Some(r.top5), reference, reference));
            inputs.push(p);
        }
    }

    let dir = ws.begin(REPRO_REPORT)?;
    write_json(&dir.join("report.json"), &lines)?;
    let mut md = String::from("# Reproduction report\n\n| quantity | measured | reference | tolerance | within |\n|---|---|---|---|---|\n");
    for l in &lines {
        let m = l.measured.map_or("-".into(), |v| format!("{v:.4}"));
        let w = l.within.map_or("-", |b| if b { "yes" } else { "no" });
        md.push_str(&format!("| {} | {m} | {} | {} | {w} |\n", l.name, l.reference, l.tolerance));
    }
    std::fs::write(dir.join("report.md"), md)?;
    ws.finish(REPRO_REPORT, cfg, &inputs, &[], &["report.json", "report.md"])?;
    Ok(lines)
}
