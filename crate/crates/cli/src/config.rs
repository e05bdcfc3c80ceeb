//! Flat key=value experiment configuration with a closed schema: unknown
//! keys are rejected and every numeric field is range-checked.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use relperc_core::groups::{parse_group, parse_subgroup, GroupModel, SubgroupSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExperimentKind {
    Sweep,
    Tail,
    Kappa,
    Trichotomy,
    PuProbe,
    Freq,
    Visits,
    Oracle(String),
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "sweep" => Ok(Self::Sweep),
            "tail" => Ok(Self::Tail),
            "kappa" => Ok(Self::Kappa),
            "trichotomy" => Ok(Self::Trichotomy),
            "pu-probe" => Ok(Self::PuProbe),
            "freq" => Ok(Self::Freq),
            "visits" => Ok(Self::Visits),
            other => match other.strip_prefix("oracle:") {
                Some(name) if !name.is_empty() => Ok(Self::Oracle(name.to_string())),
                _ => Err(format!("unknown experiment kind `{s}`")),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Sweep => "sweep".into(),
            Self::Tail => "tail".into(),
            Self::Kappa => "kappa".into(),
            Self::Trichotomy => "trichotomy".into(),
            Self::PuProbe => "pu-probe".into(),
            Self::Freq => "freq".into(),
            Self::Visits => "visits".into(),
            Self::Oracle(name) => format!("oracle-{name}"),
        }
    }
}

/// The parsed and validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub group: Option<String>,
    pub subgroup: String,
    pub radius: u32,
    pub p: Option<f64>,
    pub p_grid: Option<Vec<f64>>,
    pub n_max: u64,
    pub n_grid_log: bool,
    pub samples: u64,
    pub steps: u64,
    pub walks: u64,
    pub seed: u64,
    pub sources: u32,
    pub source_margin: u32,
    pub pairs: u32,
    pub m_threshold: u64,
    pub distance_grid: Vec<u64>,
    pub level: f64,
    pub doubling: bool,
    pub horizons: Option<Vec<u64>>,
    pub oracle_instance: Option<String>,
    pub threads: Option<usize>,
    pub out_dir: Option<String>,
    /// Normalized key=value lines, the hash input.
    pub normalized: String,
}

pub const KNOWN_KEYS: &[(&str, &str)] = &[
    ("experiment", "sweep | tail | kappa | trichotomy | pu-probe | freq | visits | oracle:<name>"),
    ("group", "group DSL, e.g. free:2, lattice:2, wreath:z2:free:2, tree-oriented:3, finite:s3"),
    ("subgroup", "subgroup DSL: all | lamp[:r] | axis:<i> | level:<n> | coset:<elem>:<sub> (default all)"),
    ("radius", "ball radius R (default 8)"),
    ("p", "single retention probability in [0,1]"),
    ("p_grid", "lo:hi:count or comma list, for sweep/trichotomy"),
    ("n_max", "largest tail threshold or kappa scale (default 30)"),
    ("n_grid", "linear | log (tail thresholds; default linear)"),
    ("samples", "Monte Carlo samples N (default 1000)"),
    ("steps", "walk length T (default 10000)"),
    ("walks", "number of (field, walk) seed pairs (default 16)"),
    ("seed", "base seed; cell i uses seed + i (default 1)"),
    ("sources", "extra tail sources beyond the origin (default 32)"),
    ("source_margin", "max distance of sampled sources (default 16)"),
    ("pairs", "pairs per scale for kappa/pu-probe (default 4)"),
    ("m", "subgroup-count threshold for trichotomy (default 2, must be >= 2)"),
    ("distance_grid", "comma list of pu-probe scales (default 2,4,8,16,32)"),
    ("level", "crossing level for the sweep p_c estimate (default 0.5)"),
    ("doubling", "true | false: also sweep at 2R and report drift (default false)"),
    ("horizons", "comma list of visit horizons (default steps/10, steps)"),
    ("instance", "builtin oracle instance selector"),
    ("threads", "worker threads (default: all cores)"),
    ("out_dir", "output directory (overrides RELPERC_OUT)"),
];

#[derive(Debug, Default)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if self.ok() {
            let _ = writeln!(out, "config ok");
        }
        out
    }
}

pub fn parse_config_text(
    text: &str,
    overrides: &[(String, String)],
) -> (Option<ExperimentConfig>, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let key = k.trim().to_string();
                if kv.insert(key.clone(), v.trim().to_string()).is_some() {
                    report.warnings.push(format!("line {}: duplicate key `{key}`", lineno + 1));
                }
            }
            None => report
                .errors
                .push(format!("line {}: expected key=value, got `{line}`", lineno + 1)),
        }
    }
    for (k, v) in overrides {
        kv.insert(k.clone(), v.clone());
    }

    for key in kv.keys() {
        if !KNOWN_KEYS.iter().any(|(k, _)| k == key) {
            report.errors.push(format!("unknown key `{key}`"));
        }
    }

    let kind = match kv.get("experiment") {
        None => {
            report.errors.push("missing key `experiment`".into());
            None
        }
        Some(s) => match ExperimentKind::parse(s) {
            Ok(k) => Some(k),
            Err(e) => {
                report.errors.push(e);
                None
            }
        },
    };

    let group = kv.get("group").cloned();
    let subgroup = kv.get("subgroup").cloned().unwrap_or_else(|| "all".into());
    let needs_group = !matches!(kind, Some(ExperimentKind::Oracle(_)) | None);
    let mut model: Option<GroupModel> = None;
    if needs_group {
        match &group {
            None => report.errors.push("missing key `group`".into()),
            Some(g) => match parse_group(g) {
                Ok(m) => model = Some(m),
                Err(e) => report.errors.push(format!("group: {e}")),
            },
        }
    }
    let mut _sub: Option<SubgroupSpec> = None;
    if let Some(m) = &model {
        match parse_subgroup(&subgroup, m) {
            Ok(s) => _sub = Some(s),
            Err(e) => report.errors.push(format!("subgroup: {e}")),
        }
    }

    macro_rules! num {
        ($key:expr, $default:expr, $ty:ty) => {
            match kv.get($key) {
                None => $default,
                Some(v) => match v.parse::<$ty>() {
                    Ok(x) => x,
                    Err(_) => {
                        report.errors.push(format!("key `{}`: cannot parse `{v}`", $key));
                        $default
                    }
                },
            }
        };
    }

    let radius = num!("radius", 8u32, u32);
    let samples = num!("samples", 1000u64, u64);
    let steps = num!("steps", 10_000u64, u64);
    let walks = num!("walks", 16u64, u64);
    let seed = num!("seed", 1u64, u64);
    let sources = num!("sources", 32u32, u32);
    let source_margin = num!("source_margin", 16u32, u32);
    let pairs = num!("pairs", 4u32, u32);
    let m_threshold = num!("m", 2u64, u64);
    let level = num!("level", 0.5f64, f64);
    let n_max = num!("n_max", 30u64, u64);

    let p = kv.get("p").and_then(|v| match v.parse::<f64>() {
        Ok(x) if (0.0..=1.0).contains(&x) => Some(x),
        _ => {
            report.errors.push(format!("key `p`: `{v}` is not a probability"));
            None
        }
    });
    let p_grid = kv.get("p_grid").and_then(|v| match parse_grid(v) {
        Ok(g) => {
            if g.iter().any(|x| !(0.0..=1.0).contains(x)) {
                report.errors.push("p_grid has entries outside [0,1]".into());
                None
            } else {
                Some(g)
            }
        }
        Err(e) => {
            report.errors.push(format!("p_grid: {e}"));
            None
        }
    });
    let n_grid_log = match kv.get("n_grid").map(String::as_str) {
        None | Some("linear") => false,
        Some("log") => true,
        Some(other) => {
            report.errors.push(format!("n_grid must be linear or log, got `{other}`"));
            false
        }
    };
    let distance_grid = match kv.get("distance_grid") {
        None => vec![2, 4, 8, 16, 32],
        Some(v) => {
            let parsed: Result<Vec<u64>, _> =
                v.split(',').map(|x| x.trim().parse::<u64>()).collect();
            match parsed {
                Ok(g) => g,
                Err(_) => {
                    report.errors.push(format!("distance_grid: cannot parse `{v}`"));
                    vec![]
                }
            }
        }
    };
    let horizons = kv.get("horizons").and_then(|v| {
        let parsed: Result<Vec<u64>, _> = v.split(',').map(|x| x.trim().parse::<u64>()).collect();
        match parsed {
            Ok(g) => Some(g),
            Err(_) => {
                report.errors.push(format!("horizons: cannot parse `{v}`"));
                None
            }
        }
    });
    let doubling = match kv.get("doubling").map(String::as_str) {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            report.errors.push(format!("doubling must be true or false, got `{other}`"));
            false
        }
    };
    let threads = kv.get("threads").and_then(|v| match v.parse::<usize>() {
        Ok(x) if x >= 1 => Some(x),
        _ => {
            report.errors.push(format!("threads: `{v}` is not a positive integer"));
            None
        }
    });

    // per-kind requirements
    match &kind {
        Some(ExperimentKind::Sweep) | Some(ExperimentKind::Trichotomy) => {
            if p_grid.is_none() {
                report.errors.push("this experiment needs `p_grid`".into());
            }
        }
        Some(
            ExperimentKind::Tail
            | ExperimentKind::Kappa
            | ExperimentKind::PuProbe
            | ExperimentKind::Freq
            | ExperimentKind::Visits,
        ) if p.is_none() => {
            report.errors.push("this experiment needs `p`".into());
        }
        _ => {}
    }
    if samples == 0 {
        report.errors.push("samples must be >= 1".into());
    }
    if needs_group && radius == 0 {
        report.errors.push("radius must be >= 1".into());
    }
    if !(0.0..=1.0).contains(&level) {
        report.errors.push("level must lie in [0,1]".into());
    }

    let mut normalized = String::new();
    for (k, v) in &kv {
        let _ = writeln!(normalized, "{k}={v}");
    }

    let config = kind.map(|kind| ExperimentConfig {
        kind,
        group,
        subgroup,
        radius,
        p,
        p_grid,
        n_max,
        n_grid_log,
        samples,
        steps,
        walks,
        seed,
        sources,
        source_margin,
        pairs,
        m_threshold,
        distance_grid,
        level,
        doubling,
        horizons,
        oracle_instance: kv.get("instance").cloned(),
        threads,
        out_dir: kv.get("out_dir").cloned(),
        normalized,
    });
    match config {
        Some(c) if report.ok() => (Some(c), report),
        _ => (None, report),
    }
}

/// `lo:hi:count` or a comma list.
fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err("expected lo:hi:count".into());
        }
        let lo: f64 = parts[0].parse().map_err(|_| "bad lo")?;
        let hi: f64 = parts[1].parse().map_err(|_| "bad hi")?;
        let count: usize = parts[2].parse().map_err(|_| "bad count")?;
        if count < 2 || lo >= hi {
            return Err("degenerate grid".into());
        }
        Ok((0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect())
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad entry `{x}`")))
            .collect()
    }
}

impl ExperimentConfig {
    pub fn config_hash(&self) -> u64 {
        relperc_core::coupling::fnv1a64(self.normalized.as_bytes())
    }

    /// `<experiment>_<group>_<subgroup>_R<r>_seed<base>` with DSL colons
    /// flattened for the filesystem.
    pub fn output_stem(&self) -> String {
        let flat = |s: &str| s.replace([':', ','], "-");
        match &self.kind {
            ExperimentKind::Oracle(_) => {
                format!("{}_seed{}", self.kind.name(), self.seed)
            }
            _ => format!(
                "{}_{}_{}_R{}_seed{}",
                self.kind.name(),
                flat(self.group.as_deref().unwrap_or("none")),
                flat(&self.subgroup),
                self.radius,
                self.seed
            ),
        }
    }
}
