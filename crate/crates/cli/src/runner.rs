//! Experiment dispatch: build the model, run the estimator, and emit CSV
//! plus a manifest. Output bytes are a pure function of the config.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use relperc_core::error::Error as CoreError;
use relperc_core::estimators::{
    crossing_sweep, crossing_sweep_with_doubling, kappa_curve, log_grid, pu_probe, tail_curve,
    trichotomy_scan, KappaConfig, PcEstimate, PuProbeConfig, SweepConfig, TailConfig,
    TrichotomyConfig,
};
use relperc_core::groups::{build_ball, parse_group, parse_subgroup};
use relperc_core::oracles::{run_builtin, OracleReport};
use relperc_core::percolation::{clusters, sample};
use relperc_core::walks::{
    frequency, max_frequency_cluster, run_walk, visit_count_experiment, visit_experiment_tree,
    VisitConfig, WalkKind,
};
use relperc_core::CouplingField;

use crate::config::{ExperimentConfig, ExperimentKind};

#[derive(Debug)]
pub enum RunError {
    Config(String),
    ResourceCap(String),
    OracleViolation(String),
    Io(std::io::Error),
    Core(CoreError),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::ResourceCap(m) => write!(f, "resource cap: {m}"),
            RunError::OracleViolation(m) => write!(f, "oracle violation: {m}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
            RunError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::MemoryBudget { .. } => RunError::ResourceCap(e.to_string()),
            other => RunError::Core(other),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl RunError {
    /// run: exit 0 ok, 1 oracle violation, 2 config error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::OracleViolation(_) => 1,
            RunError::Config(_) => 2,
            RunError::ResourceCap(_) => 3,
            RunError::Io(_) | RunError::Core(_) => 2,
        }
    }
}

pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

struct Emitter {
    dir: PathBuf,
    stem: String,
    files: Vec<PathBuf>,
}

impl Emitter {
    fn write(&mut self, suffix: &str, contents: &str) -> Result<(), RunError> {
        let name = if suffix.is_empty() {
            format!("{}.csv", self.stem)
        } else {
            format!("{}_{}.csv", self.stem, suffix)
        };
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    /// Two-column plot data, ready for gnuplot; plotting itself is left to
    /// external tools.
    fn write_dat(&mut self, pairs: &[(f64, f64)]) -> Result<(), RunError> {
        let mut out = String::new();
        for (x, y) in pairs {
            let _ = writeln!(out, "{x} {y}");
        }
        let path = self.dir.join(format!("{}.dat", self.stem));
        std::fs::write(&path, out)?;
        self.files.push(path);
        Ok(())
    }
}

pub fn run(config: &ExperimentConfig, out_root: &Path) -> Result<RunOutput, RunError> {
    let started = Instant::now();
    let dir = match &config.out_dir {
        Some(d) => PathBuf::from(d),
        None => out_root.to_path_buf(),
    };
    std::fs::create_dir_all(&dir)?;
    let mut emitter = Emitter { dir: dir.clone(), stem: config.output_stem(), files: Vec::new() };

    match &config.kind {
        ExperimentKind::Sweep => run_sweep(config, &mut emitter)?,
        ExperimentKind::Tail => run_tail(config, &mut emitter)?,
        ExperimentKind::Kappa => run_kappa(config, &mut emitter)?,
        ExperimentKind::Trichotomy => run_trichotomy(config, &mut emitter)?,
        ExperimentKind::PuProbe => run_pu(config, &mut emitter)?,
        ExperimentKind::Freq => run_freq(config, &mut emitter)?,
        ExperimentKind::Visits => run_visits(config, &mut emitter)?,
        ExperimentKind::Oracle(name) => run_oracle_experiment(name, config, &mut emitter)?,
    }

    // manifest: inputs, config hash, seed list, version, wall time
    let mut manifest = String::new();
    let _ = writeln!(manifest, "tool = relperc {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(manifest, "config_hash = {:016x}", config.config_hash());
    let _ = writeln!(
        manifest,
        "seeds = {}..{}",
        config.seed,
        config.seed + config.samples.max(config.walks)
    );
    let _ = writeln!(manifest, "wall_time_ms = {}", started.elapsed().as_millis());
    let _ = writeln!(manifest, "outputs = {}", emitter
        .files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" "));
    manifest.push_str("--- config ---\n");
    manifest.push_str(&config.normalized);
    let manifest_path = dir.join(format!("{}.manifest.txt", config.output_stem()));
    std::fs::write(&manifest_path, manifest)?;
    let mut files = emitter.files;
    files.push(manifest_path);
    Ok(RunOutput { files })
}

fn model_of(config: &ExperimentConfig) -> Result<relperc_core::GroupModel, RunError> {
    let dsl = config
        .group
        .as_deref()
        .ok_or_else(|| RunError::Config("missing group".into()))?;
    Ok(parse_group(dsl)?)
}

fn fmt_ci(lo: f64, hi: f64) -> String {
    format!("{lo},{hi}")
}

fn run_sweep(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let cfg = SweepConfig {
        p_grid: config.p_grid.clone().unwrap(),
        samples: config.samples,
        base_seed: config.seed,
        level: config.level,
        bisect_iters: 25,
    };
    let (curve, doubled) = if config.doubling {
        let rep = crossing_sweep_with_doubling(&model, config.radius, &cfg)?;
        (rep.base, Some((rep.doubled, rep.drift)))
    } else {
        (crossing_sweep(&model, config.radius, &cfg)?, None)
    };

    let mut csv = String::from("p,reach,ci_low,ci_high,n_samples\n");
    for pt in &curve.points {
        let _ = writeln!(csv, "{},{},{},{}", pt.p, pt.reach, fmt_ci(pt.ci.lo, pt.ci.hi), pt.samples);
    }
    em.write("", &csv)?;
    em.write_dat(&curve.points.iter().map(|pt| (pt.p, pt.reach)).collect::<Vec<_>>())?;

    let mut summary = String::from("level,pc,pc_status,radius\n");
    let (pc, status) = match curve.pc {
        PcEstimate::Crossed(p) => (p.to_string(), "crossed"),
        PcEstimate::AboveGrid => (format!(">{}", curve.points.last().unwrap().p), "above-grid"),
        PcEstimate::BelowGrid => (format!("<{}", curve.points[0].p), "below-grid"),
    };
    let _ = writeln!(summary, "{},{},{},{}", curve.level, pc, status, curve.radius);
    if let Some((dcurve, drift)) = doubled {
        let (dpc, dstatus) = match dcurve.pc {
            PcEstimate::Crossed(p) => (p.to_string(), "crossed"),
            PcEstimate::AboveGrid => ("above".into(), "above-grid"),
            PcEstimate::BelowGrid => ("below".into(), "below-grid"),
        };
        let _ = writeln!(summary, "{},{},{},{}", dcurve.level, dpc, dstatus, dcurve.radius);
        let _ = writeln!(
            summary,
            "drift,{},,",
            drift.map(|d| d.to_string()).unwrap_or_else(|| "n/a".into())
        );
    }
    em.write("summary", &summary)
}

fn run_tail(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let subgroup = parse_subgroup(&config.subgroup, &model)?;
    let n_grid = if config.n_grid_log {
        log_grid(config.n_max)
    } else {
        (1..=config.n_max).collect()
    };
    let cfg = TailConfig {
        p: config.p.unwrap(),
        n_grid,
        samples: config.samples,
        base_seed: config.seed,
        extra_sources: config.sources,
        source_margin: config.source_margin,
        visit_cap: relperc_core::percolation::explore::DEFAULT_VISIT_CAP,
    };
    let curve = tail_curve(&model, &subgroup, config.radius, &cfg)?;
    let mut csv = String::from(
        "p,n,q_max,ci_low,ci_high,q_origin,origin_ci_low,origin_ci_high,n_samples\n",
    );
    for pt in &curve.points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            curve.p,
            pt.n,
            pt.q_max,
            fmt_ci(pt.ci.lo, pt.ci.hi),
            pt.q_origin,
            fmt_ci(pt.origin_ci.lo, pt.origin_ci.hi),
            pt.samples
        );
    }
    em.write("", &csv)?;
    em.write_dat(&curve.points.iter().map(|pt| (pt.n as f64, pt.q_max)).collect::<Vec<_>>())?;
    let mut summary = String::from("fit,slope,intercept,r2,points\n");
    if let Some(fit) = &curve.exp_fit {
        let _ = writeln!(summary, "exp,{},{},{},{}", fit.slope, fit.intercept, fit.r2, fit.points);
    }
    if let Some(fit) = &curve.power_fit {
        let _ = writeln!(summary, "power,{},{},{},{}", fit.slope, fit.intercept, fit.r2, fit.points);
    }
    em.write("summary", &summary)
}

fn run_kappa(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let cfg = KappaConfig {
        p: config.p.unwrap(),
        n_max: config.n_max,
        pairs_per_n: config.pairs,
        samples: config.samples,
        base_seed: config.seed,
    };
    let curve = kappa_curve(&model, config.radius, &cfg)?;
    let mut csv = String::from("p,n,kappa,ci_low,ci_high,successes,trials\n");
    for pt in &curve.points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            curve.p,
            pt.n,
            pt.kappa,
            fmt_ci(pt.ci.lo, pt.ci.hi),
            pt.successes,
            pt.trials
        );
    }
    em.write("", &csv)?;
    em.write_dat(&curve.points.iter().map(|pt| (pt.n as f64, pt.kappa)).collect::<Vec<_>>())?;
    let mut audit = String::from("m,n,kappa_mn,product,slack,violated\n");
    for a in &curve.audits {
        let _ = writeln!(audit, "{},{},{},{},{},{}", a.m, a.n, a.lhs, a.product, a.slack, a.violated);
    }
    em.write("audit", &audit)?;
    let violations = curve.audits.iter().filter(|a| a.violated).count();
    let mut summary = String::from("growth_rate_sup,violations\n");
    let _ = writeln!(summary, "{},{}", curve.growth_rate_sup, violations);
    em.write("summary", &summary)
}

fn run_trichotomy(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let subgroup = parse_subgroup(&config.subgroup, &model)?;
    let mut ball = build_ball(&model, config.radius)?;
    let sub_id = ball.register_subgroup(subgroup)?;
    let cfg = TrichotomyConfig {
        p_grid: config.p_grid.clone().unwrap(),
        m: config.m_threshold,
        samples: config.samples,
        base_seed: config.seed,
    };
    let rows = trichotomy_scan(&ball, sub_id, &cfg)?;
    let mut csv = String::from("p,zero,one,many,n_samples\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{},{}", r.p, r.zero, r.one, r.many, r.samples);
    }
    em.write("", &csv)?;
    em.write_dat(
        &rows
            .iter()
            .map(|r| (r.p, r.many as f64 / r.samples as f64))
            .collect::<Vec<_>>(),
    )
}

fn run_pu(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let subgroup = parse_subgroup(&config.subgroup, &model)?;
    let cfg = PuProbeConfig {
        p: config.p.unwrap(),
        distance_grid: config.distance_grid.clone(),
        pairs_per_scale: config.pairs,
        samples: config.samples,
        base_seed: config.seed,
    };
    let report = pu_probe(&model, &subgroup, config.radius, &cfg)?;
    let mut csv = String::from("p,d,tau_min,ci_low,ci_high,successes,trials\n");
    for s in &report.scales {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            report.p,
            s.d,
            s.tau_min,
            fmt_ci(s.ci.lo, s.ci.hi),
            s.successes,
            s.trials
        );
    }
    em.write("", &csv)?;
    em.write_dat(&report.scales.iter().map(|s| (s.d as f64, s.tau_min)).collect::<Vec<_>>())?;
    let mut summary = String::from("verdict\n");
    let _ = writeln!(summary, "{}", report.verdict.as_str());
    em.write("summary", &summary)
}

fn run_freq(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let subgroup = parse_subgroup(&config.subgroup, &model)?;
    let mut ball = build_ball(&model, config.radius)?;
    let sub_id = ball.register_subgroup(subgroup)?;
    let spec = ball.subgroup_spec(sub_id).clone();
    let p = config.p.unwrap();
    let kind = if spec.generators.is_empty() {
        WalkKind::Ambient
    } else {
        WalkKind::Subgroup(spec)
    };
    let mut csv =
        String::from("seed,steps,cluster_id,frequency,ci_low,ci_high,reflection_fraction,flagged\n");
    for i in 0..config.walks {
        let field_seed = config.seed.wrapping_add(2 * i);
        let walk_seed = config.seed.wrapping_add(2 * i + 1);
        let part = clusters(&ball, &sample(&ball, &CouplingField::new(field_seed), p)?);
        let path = run_walk(&ball, &kind, config.steps, walk_seed)?;
        let best = max_frequency_cluster(&part, &path, walk_seed ^ 0x7469)?;
        let est = frequency(&part, &path, best)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            field_seed,
            config.steps,
            best,
            est.value,
            fmt_ci(est.ci.lo, est.ci.hi),
            path.reflection_fraction(),
            path.flagged()
        );
    }
    em.write("", &csv)
}

fn run_visits(config: &ExperimentConfig, em: &mut Emitter) -> Result<(), RunError> {
    let model = model_of(config)?;
    let horizons = config
        .horizons
        .clone()
        .unwrap_or_else(|| vec![(config.steps / 10).max(1), config.steps]);
    let cfg = VisitConfig {
        p: config.p.unwrap(),
        horizons: horizons.clone(),
        walks: config.walks,
        base_seed: config.seed,
    };
    // tree group models run unconstrained on the infinite graph, where the
    // escape trend is not masked by ball reflection; other models use the
    // reflected walk on the radius-R ball
    let report = if model.is_tree() && model.is_group() {
        visit_experiment_tree(&model, &cfg)?
    } else {
        let ball = build_ball(&model, config.radius)?;
        visit_count_experiment(&ball, &cfg)?
    };
    let mut csv = String::from(
        "seed,distinct_clusters,returns_to_start,horizon,start_fraction,reflection_fraction\n",
    );
    for row in &report.rows {
        for (h, frac) in horizons.iter().zip(&row.start_fraction) {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                row.seed,
                row.distinct_clusters,
                row.returns_to_start,
                h,
                frac,
                row.reflection_fraction
            );
        }
    }
    em.write("", &csv)?;
    let mut summary = String::from("horizon,mean_fraction,drop_from_previous,drop_se\n");
    for (i, h) in horizons.iter().enumerate() {
        let (dm, dse) = if i == 0 {
            (String::new(), String::new())
        } else {
            (
                report.trend.drop_mean[i - 1].to_string(),
                report.trend.drop_se[i - 1].to_string(),
            )
        };
        let _ = writeln!(summary, "{},{},{},{}", h, report.trend.mean_fraction[i], dm, dse);
    }
    em.write("summary", &summary)
}

fn run_oracle_experiment(
    name: &str,
    config: &ExperimentConfig,
    em: &mut Emitter,
) -> Result<(), RunError> {
    let reports = run_builtin(name, config.oracle_instance.as_deref())?;
    em.write("", &oracle_csv(&reports))?;
    if let Some(bad) = reports.iter().find(|r| !r.holds) {
        return Err(RunError::OracleViolation(format!("{bad}")));
    }
    Ok(())
}

pub fn oracle_csv(reports: &[OracleReport]) -> String {
    let mut csv = String::from(OracleReport::csv_header());
    csv.push('\n');
    for r in reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    csv
}
