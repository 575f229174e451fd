//! Experiment harness for Bayesian policy reuse: train, run, compare and sweep.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

use bpr_core::domains::{Domain, GolfDomain, SurveillanceDomain, TelephoneDomain, TelephoneSignal};
use bpr_core::models::{
    load_kb, save_kb, train_offline, TrainingConfig, TrainingReport, SCHEMA_VERSION,
};
use bpr_core::runner::RunTrace;
use bpr_core::KnowledgeBase;
use config::{resolve_strategy, AgentKind, ExperimentConfig, StrategySpec};
use error::{HarnessError, Result};
use experiment::{
    library_prefix, restrict_library, run_tasks, sample_tasks, shuffled_indices, task_values,
    SweepCell,
};
use output::{mean_std, sig6, sig6_opt, write_csv, write_manifest, Manifest};
use std::path::{Path, PathBuf};

pub use config::ExperimentConfig as Config;

/// The three built-in domains behind one type.
#[derive(Debug, Clone)]
pub enum AnyDomain {
    Golf(GolfDomain),
    Telephone(TelephoneDomain),
    Surveillance(SurveillanceDomain),
}

macro_rules! with_domain {
    ($any:expr, $d:ident => $body:expr) => {
        match $any {
            AnyDomain::Golf($d) => $body,
            AnyDomain::Telephone($d) => $body,
            AnyDomain::Surveillance($d) => $body,
        }
    };
}

impl AnyDomain {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(match cfg.domain.name.as_str() {
            "golf" => AnyDomain::Golf(GolfDomain::default()),
            "telephone" => {
                let name = cfg.domain.signal.as_deref().unwrap_or("u");
                let signal = TelephoneSignal::parse(name).ok_or_else(|| {
                    HarnessError::Config(format!("unknown telephone signal `{name}`"))
                })?;
                AnyDomain::Telephone(TelephoneDomain::new(signal))
            }
            "surveillance" => AnyDomain::Surveillance(match cfg.domain.map_seed {
                Some(s) => SurveillanceDomain::new(s),
                None => SurveillanceDomain::default(),
            }),
            other => return Err(HarnessError::Config(format!("unknown domain `{other}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        with_domain!(self, d => d.name())
    }

    pub fn utility_range(&self) -> (f64, f64) {
        with_domain!(self, d => d.utility_range())
    }

    pub fn policy_names(&self) -> Vec<String> {
        with_domain!(self, d => d.policy_names())
    }

    pub fn train(&self, config: &TrainingConfig) -> Result<(KnowledgeBase, TrainingReport)> {
        Ok(with_domain!(self, d => train_offline(d, config))?)
    }
}

fn training_config(cfg: &ExperimentConfig) -> TrainingConfig {
    TrainingConfig {
        episodes_per_pair: cfg.training.episodes_per_pair,
        smoothing_alpha: cfg.training.smoothing_alpha,
        seed: cfg.experiment.seed,
        ..TrainingConfig::default()
    }
}

/// Loads the configured kb or trains one in memory, then applies the library fraction.
pub fn prepare_kb(cfg: &ExperimentConfig, domain: &AnyDomain) -> Result<KnowledgeBase> {
    let kb = match &cfg.experiment.kb {
        Some(path) => load_kb(path)?,
        None => domain.train(&training_config(cfg))?.0,
    };
    let expected = with_domain!(domain, d => d.signal_kind());
    if kb.signal_kind() != expected {
        return Err(HarnessError::Config(format!(
            "kb was trained on {} signals but the domain emits {}",
            kb.signal_kind().name(),
            expected.name()
        )));
    }
    let f = cfg.experiment.library_fraction;
    if f < 1.0 {
        let order = shuffled_indices(kb.n_types(), cfg.experiment.seed, &[u64::MAX]);
        return restrict_library(&kb, &library_prefix(&order, f));
    }
    Ok(kb)
}

fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = cfg
        .experiment
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

pub struct TrainOutput {
    pub kb_path: PathBuf,
    pub report: TrainingReport,
}

pub fn cmd_train(cfg: &ExperimentConfig) -> Result<TrainOutput> {
    let domain = AnyDomain::from_config(cfg)?;
    let dir = out_dir(cfg)?;
    let (kb, report) = domain.train(&training_config(cfg))?;
    let kb_path = dir.join("kb.json");
    save_kb(&kb, &kb_path)?;
    std::fs::write(
        dir.join("training_report.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    write_manifest(
        &dir,
        &Manifest {
            schema_version: output::CSV_SCHEMA_VERSION,
            kb_schema_version: SCHEMA_VERSION,
            command: "train",
            domain: domain.name(),
            seed: cfg.experiment.seed,
            files: vec!["kb.json", "training_report.json"],
        },
    )?;
    log::info!(
        "trained {}x{} kb: {} bytes",
        kb.n_types(),
        kb.n_policies(),
        report.storage.total_bytes()
    );
    Ok(TrainOutput { kb_path, report })
}

/// Traces of one strategy over the shared evaluation tasks.
#[derive(Debug, Clone)]
pub struct StrategyRuns {
    pub label: String,
    pub traces: Vec<RunTrace>,
}

fn run_strategies(
    cfg: &ExperimentConfig,
    specs: &[StrategySpec],
) -> Result<(AnyDomain, Vec<StrategyRuns>)> {
    let domain = AnyDomain::from_config(cfg)?;
    let kb = prepare_kb(cfg, &domain)?;
    let kinds: Vec<AgentKind> = specs
        .iter()
        .map(|s| resolve_strategy(s, domain.utility_range(), kb.n_types()))
        .collect::<Result<_>>()?;
    let seed = cfg.experiment.seed;
    let (k, n) = (cfg.episodes(), cfg.tasks());
    let runs = with_domain!(&domain, d => {
        let tasks = sample_tasks(d, seed, n);
        let values = task_values(d, &tasks, cfg.experiment.value_episodes, seed)?;
        specs
            .iter()
            .zip(&kinds)
            .map(|(spec, kind)| {
                Ok(StrategyRuns {
                    label: spec.label().to_string(),
                    traces: run_tasks(d, &kb, &tasks, &values, kind, k, seed)?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    });
    Ok((domain, runs))
}

fn trace_rows(traces: &[RunTrace], prefix: Option<&str>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for tr in traces {
        for r in &tr.records {
            let mut row = Vec::with_capacity(8);
            if let Some(p) = prefix {
                row.push(p.to_string());
            }
            row.extend([
                tr.task_index.to_string(),
                r.episode.to_string(),
                r.domain_policy.to_string(),
                sig6(r.utility),
                sig6(r.regret),
                sig6_opt(r.entropy),
                tr.seed.to_string(),
            ]);
            rows.push(row);
        }
    }
    rows
}

pub struct RunOutput {
    pub trace_path: PathBuf,
    pub traces: Vec<RunTrace>,
}

pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let spec = cfg
        .strategy
        .clone()
        .ok_or_else(|| HarnessError::Config("run needs a [strategy] section".into()))?;
    let (domain, mut runs) = run_strategies(cfg, std::slice::from_ref(&spec))?;
    let traces = runs.remove(0).traces;
    let dir = out_dir(cfg)?;
    let trace_path = dir.join("trace.csv");
    write_csv(
        &trace_path,
        &output::TRACE_HEADER,
        &trace_rows(&traces, None),
    )?;
    write_manifest(
        &dir,
        &Manifest {
            schema_version: output::CSV_SCHEMA_VERSION,
            kb_schema_version: SCHEMA_VERSION,
            command: "run",
            domain: domain.name(),
            seed: cfg.experiment.seed,
            files: vec!["trace.csv"],
        },
    )?;
    Ok(RunOutput { trace_path, traces })
}

/// Per-episode aggregate of one strategy across tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub episode: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_entropy: Option<f64>,
    pub std_entropy: Option<f64>,
    pub n_tasks: usize,
}

pub fn summarize(traces: &[RunTrace]) -> Vec<EpisodeSummary> {
    let k = traces.first().map_or(0, |t| t.records.len());
    (0..k)
        .map(|e| {
            let regrets: Vec<f64> = traces.iter().map(|t| t.records[e].regret).collect();
            let entropies: Option<Vec<f64>> = traces.iter().map(|t| t.records[e].entropy).collect();
            let (mr, sr) = mean_std(&regrets);
            let ent = entropies.map(|v| mean_std(&v));
            EpisodeSummary {
                episode: e + 1,
                mean_regret: mr,
                std_regret: sr,
                mean_entropy: ent.map(|x| x.0),
                std_entropy: ent.map(|x| x.1),
                n_tasks: traces.len(),
            }
        })
        .collect()
}

pub struct CompareOutput {
    pub runs: Vec<StrategyRuns>,
    pub summaries: Vec<(String, Vec<EpisodeSummary>)>,
}

pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<CompareOutput> {
    let specs = cfg
        .compare
        .as_ref()
        .ok_or_else(|| HarnessError::Config("compare needs a [compare] section".into()))?
        .strategies
        .clone();
    let mut labels = std::collections::HashSet::new();
    for s in &specs {
        if !labels.insert(s.label().to_string()) {
            return Err(HarnessError::Config(format!(
                "duplicate strategy label `{}`",
                s.label()
            )));
        }
    }
    let (domain, runs) = run_strategies(cfg, &specs)?;
    let dir = out_dir(cfg)?;
    let mut trace = Vec::new();
    let mut summary_rows = Vec::new();
    let mut summaries = Vec::new();
    for r in &runs {
        trace.extend(trace_rows(&r.traces, Some(&r.label)));
        let s = summarize(&r.traces);
        for e in &s {
            summary_rows.push(vec![
                r.label.clone(),
                e.episode.to_string(),
                sig6(e.mean_regret),
                sig6(e.std_regret),
                sig6_opt(e.mean_entropy),
                sig6_opt(e.std_entropy),
                e.n_tasks.to_string(),
            ]);
        }
        summaries.push((r.label.clone(), s));
    }
    let mut header = vec!["strategy"];
    header.extend(output::TRACE_HEADER);
    write_csv(&dir.join("compare_trace.csv"), &header, &trace)?;
    write_csv(
        &dir.join("compare_summary.csv"),
        &output::COMPARE_SUMMARY_HEADER,
        &summary_rows,
    )?;
    write_manifest(
        &dir,
        &Manifest {
            schema_version: output::CSV_SCHEMA_VERSION,
            kb_schema_version: SCHEMA_VERSION,
            command: "compare",
            domain: domain.name(),
            seed: cfg.experiment.seed,
            files: vec!["compare_trace.csv", "compare_summary.csv"],
        },
    )?;
    Ok(CompareOutput { runs, summaries })
}

pub struct SweepOutput {
    pub path: PathBuf,
    pub cells: Vec<SweepCell>,
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| HarnessError::Config("sweep needs a [sweep] section".into()))?;
    let domain = AnyDomain::from_config(cfg)?;
    let mut full = cfg.clone();
    full.experiment.library_fraction = 1.0;
    let kb = prepare_kb(&full, &domain)?;
    let spec = sweep
        .strategy
        .clone()
        .unwrap_or_else(|| StrategySpec::named("ei"));
    let kind = resolve_strategy(&spec, domain.utility_range(), kb.n_types())?;
    let seed = cfg.experiment.seed;
    let cells = with_domain!(&domain, d => experiment::sweep(
        d,
        &kb,
        &kind,
        &sweep.fractions,
        &sweep.episodes,
        sweep.trials,
        cfg.experiment.value_episodes,
        seed,
    ))?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            let (m, s) = mean_std(&c.regrets);
            vec![
                sig6(c.fraction),
                c.episodes.to_string(),
                sig6(m),
                sig6(s),
                c.regrets.len().to_string(),
            ]
        })
        .collect();
    let dir = out_dir(cfg)?;
    let path = dir.join("sweep.csv");
    write_csv(&path, &output::SWEEP_HEADER, &rows)?;
    write_manifest(
        &dir,
        &Manifest {
            schema_version: output::CSV_SCHEMA_VERSION,
            kb_schema_version: SCHEMA_VERSION,
            command: "sweep",
            domain: domain.name(),
            seed,
            files: vec!["sweep.csv"],
        },
    )?;
    Ok(SweepOutput { path, cells })
}

/// Reads a config file and applies command-line overrides.
pub fn load_config(
    path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    kb: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.experiment.seed = s;
    }
    if out.is_some() {
        cfg.experiment.out = out;
    }
    if kb.is_some() {
        cfg.experiment.kb = kb;
    }
    Ok(cfg)
}
