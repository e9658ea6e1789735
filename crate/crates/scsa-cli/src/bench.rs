//! Benchmark harness: a config file names the clean signals, the noise
//! sweep, the methods, and the seed count; the runner emits one detail row
//! per (signal, noise, method, seed) cell plus an aggregate table of
//! per-cell means over seeds.
//!
//! Cells are evaluated in parallel; rows are ordered by the config order
//! of each axis before writing, so the output bytes never depend on the
//! thread count.

use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;

use scsa_core::{
    add_white_noise, default_h_grid, detect_peak, mix_noise, moving_average, mse,
    peak_height_error, peak_width_error, savitzky_golay, scan_h, snr_out, CScsaMu, CostConfig,
    Error as CoreError, HGrid, SgParams, Signal, DEFAULT_H_GRID_COUNT,
};

use crate::error::{CliError, CliResult};
use crate::io::{read_signal_csv, resolve_out, TimedSignal};
use crate::kinds;

#[derive(Args)]
pub struct BenchArgs {
    /// Benchmark config file (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Detail CSV path (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Aggregate CSV path (overrides the config).
    #[arg(long)]
    aggregate_out: Option<PathBuf>,

    /// Worker threads for cell evaluation; 0 uses the default pool
    /// (overrides the config).
    #[arg(long)]
    jobs: Option<usize>,

    /// Seed count (overrides the config).
    #[arg(long)]
    seeds: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchConfig {
    signals: SignalsSection,
    noise: NoiseSection,
    #[serde(default)]
    run: RunSection,
    methods: MethodsSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalsSection {
    /// Signal kinds by name (same names as `scsa gen`).
    kinds: Vec<String>,
    /// Samples per signal.
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseSection {
    /// "white" or "mixture".
    kind: String,
    /// White-noise levels in percent of peak amplitude.
    levels_percent: Option<Vec<f64>>,
    /// Mixture targets in dB.
    targets_snr_db: Option<Vec<f64>>,
    /// Mixture noise records.
    record_a: Option<PathBuf>,
    record_b: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RunSection {
    /// Number of seeds (0, 1, …, seeds-1).
    seeds: Option<usize>,
    /// Worker threads; 0 or absent uses the default pool.
    jobs: Option<usize>,
    out: Option<PathBuf>,
    aggregate_out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodsSection {
    cscsa: Option<CScsaSection>,
    sg: Option<SgSection>,
    ma: Option<MaSection>,
    external: Option<ExternalSection>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct CScsaSection {
    mu: Option<f64>,
    nu: Option<i32>,
    h_min: Option<f64>,
    h_max: Option<f64>,
    h_count: Option<usize>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct SgSection {
    window: usize,
    order: usize,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct MaSection {
    window: usize,
}

/// Externally produced denoised signals, one CSV per cell named
/// `<signal>_<noise>_<seed>.csv` inside `dir`.
#[derive(Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct ExternalSection {
    dir: PathBuf,
}

enum NoisePlan {
    White(Vec<f64>),
    Mixture {
        targets: Vec<f64>,
        record_a: Signal<f64>,
        record_b: Signal<f64>,
    },
}

enum MethodPlan {
    CScsa(CScsaSection),
    Sg(SgSection),
    Ma(MaSection),
    External(ExternalSection),
}

impl MethodPlan {
    fn name(&self) -> &'static str {
        match self {
            MethodPlan::CScsa(_) => "cscsa",
            MethodPlan::Sg(_) => "sg",
            MethodPlan::Ma(_) => "ma",
            MethodPlan::External(_) => "external",
        }
    }
}

struct DetailRow {
    signal: String,
    n: usize,
    noise: String,
    method: &'static str,
    seed: u64,
    mse: String,
    snr_out_db: String,
    peak_height_err: String,
    peak_width_err: String,
}

pub fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::io(format!("{}: {e}", args.config.display())))?;
    let config: BenchConfig = toml::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.config.display())))?;

    let n = config.signals.n;
    if config.signals.kinds.is_empty() {
        return Err(CliError::usage("config lists no signal kinds"));
    }

    let noise = build_noise_plan(&config.noise)?;
    let methods = build_method_plans(&config.methods)?;
    if methods.is_empty() {
        return Err(CliError::usage("config enables no methods"));
    }

    let seeds = args.seeds.or(config.run.seeds).unwrap_or(1);
    if seeds == 0 {
        return Err(CliError::usage("seed count must be at least 1"));
    }
    let jobs = args.jobs.or(config.run.jobs).unwrap_or(0);
    let out = args
        .out
        .or(config.run.out)
        .unwrap_or_else(|| PathBuf::from("bench_detail.csv"));
    let aggregate_out = args
        .aggregate_out
        .or(config.run.aggregate_out)
        .unwrap_or_else(|| PathBuf::from("bench_aggregate.csv"));

    // Clean signals once per kind.
    let cleans: Vec<(String, TimedSignal)> = config
        .signals
        .kinds
        .iter()
        .map(|kind| Ok((kind.clone(), kinds::build_clean(kind, n, None, None, None)?)))
        .collect::<CliResult<_>>()?;

    // One cell per (signal, noise, method, seed), in output order.
    struct Cell<'a> {
        kind: &'a str,
        clean: &'a Signal<f64>,
        noise_label: String,
        noise_value: f64,
        method: &'a MethodPlan,
        seed: u64,
    }
    let noise_values: &[f64] = match &noise {
        NoisePlan::White(levels) => levels,
        NoisePlan::Mixture { targets, .. } => targets,
    };
    let mut cells = Vec::new();
    for (kind, clean) in &cleans {
        for &noise_value in noise_values {
            for method in &methods {
                for seed in 0..seeds as u64 {
                    cells.push(Cell {
                        kind,
                        clean: &clean.signal,
                        noise_label: noise_value.to_string(),
                        noise_value,
                        method,
                        seed,
                    });
                }
            }
        }
    }

    let evaluate = |cell: &Cell| -> CliResult<DetailRow> {
        let noisy = match &noise {
            NoisePlan::White(_) => add_white_noise(cell.clean, cell.noise_value, cell.seed)?,
            NoisePlan::Mixture {
                record_a, record_b, ..
            } => mix_noise(cell.clean, record_a, record_b, cell.noise_value)?.0,
        };
        let denoised = run_method(
            cell.method,
            cell.clean,
            &noisy,
            cell.kind,
            &cell.noise_label,
            cell.seed,
        )?;
        build_row(
            cell.kind,
            n,
            &cell.noise_label,
            cell.method.name(),
            cell.seed,
            cell.clean,
            &denoised,
        )
    };

    let rows: Vec<CliResult<DetailRow>> = if jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::usage(format!("cannot build a {jobs}-thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(&evaluate).collect())
    } else {
        cells.par_iter().map(&evaluate).collect()
    };
    let rows: Vec<DetailRow> = rows.into_iter().collect::<CliResult<_>>()?;

    write_detail(&out, &rows)?;
    write_aggregate(&aggregate_out, &rows)
}

fn build_noise_plan(section: &NoiseSection) -> CliResult<NoisePlan> {
    match section.kind.as_str() {
        "white" => {
            let levels = section
                .levels_percent
                .clone()
                .filter(|l| !l.is_empty())
                .ok_or_else(|| CliError::usage("white noise needs non-empty levels_percent"))?;
            if section.targets_snr_db.is_some()
                || section.record_a.is_some()
                || section.record_b.is_some()
            {
                return Err(CliError::usage(
                    "white noise takes only levels_percent; remove the mixture fields",
                ));
            }
            Ok(NoisePlan::White(levels))
        }
        "mixture" => {
            let targets = section
                .targets_snr_db
                .clone()
                .filter(|t| !t.is_empty())
                .ok_or_else(|| CliError::usage("mixture noise needs non-empty targets_snr_db"))?;
            if section.levels_percent.is_some() {
                return Err(CliError::usage(
                    "mixture noise takes only targets_snr_db; remove levels_percent",
                ));
            }
            let a = section
                .record_a
                .as_ref()
                .ok_or_else(|| CliError::usage("mixture noise needs record_a"))?;
            let b = section
                .record_b
                .as_ref()
                .ok_or_else(|| CliError::usage("mixture noise needs record_b"))?;
            Ok(NoisePlan::Mixture {
                targets,
                record_a: read_signal_csv(a)?.signal,
                record_b: read_signal_csv(b)?.signal,
            })
        }
        other => Err(CliError::usage(format!(
            "unknown noise kind `{other}` (expected white or mixture)"
        ))),
    }
}

fn build_method_plans(section: &MethodsSection) -> CliResult<Vec<MethodPlan>> {
    let mut plans = Vec::new();
    if let Some(c) = section.cscsa {
        if c.mu.is_some() && c.nu.is_some() {
            return Err(CliError::usage("cscsa config: give mu or nu, not both"));
        }
        plans.push(MethodPlan::CScsa(c));
    }
    if let Some(s) = section.sg {
        plans.push(MethodPlan::Sg(s));
    }
    if let Some(m) = section.ma {
        plans.push(MethodPlan::Ma(m));
    }
    if let Some(e) = &section.external {
        plans.push(MethodPlan::External(e.clone()));
    }
    Ok(plans)
}

fn run_method(
    method: &MethodPlan,
    clean: &Signal<f64>,
    noisy: &Signal<f64>,
    kind: &str,
    noise_label: &str,
    seed: u64,
) -> CliResult<Signal<f64>> {
    match method {
        MethodPlan::CScsa(c) => {
            let mu = match (c.mu, c.nu) {
                (Some(mu), _) => CScsaMu::Direct(mu),
                (None, nu) => CScsaMu::Auto {
                    nu: nu.unwrap_or(0),
                },
            };
            let count = c.h_count.unwrap_or(DEFAULT_H_GRID_COUNT);
            let grid = match (c.h_min, c.h_max) {
                (Some(lo), Some(hi)) => HGrid::new(lo, hi, count)?,
                _ => default_h_grid(noisy, count)?,
            };
            Ok(scan_h(noisy, &grid, &CostConfig::CScsa { mu })?.y_h)
        }
        MethodPlan::Sg(s) => Ok(savitzky_golay(noisy, SgParams::new(s.window, s.order)?)?),
        MethodPlan::Ma(m) => Ok(moving_average(noisy, m.window)?),
        MethodPlan::External(e) => {
            let name = format!("{kind}_{noise_label}_{seed}.csv");
            let path = e.dir.join(&name);
            let loaded = read_signal_csv(&path)?;
            if !loaded.signal.same_grid(clean) {
                return Err(CliError::data(format!(
                    "{}: grid does not match the benchmark signal",
                    path.display()
                )));
            }
            Ok(loaded.signal)
        }
    }
}

fn build_row(
    kind: &str,
    n: usize,
    noise_label: &str,
    method: &'static str,
    seed: u64,
    clean: &Signal<f64>,
    denoised: &Signal<f64>,
) -> CliResult<DetailRow> {
    let mse_value = mse(clean, denoised)?;
    let snr = match snr_out(clean, denoised) {
        Ok(v) => v.to_string(),
        Err(CoreError::InfiniteSnr) => "inf".to_string(),
        Err(e) => return Err(e.into()),
    };
    // Peak metrics are blank when either signal has no measurable peak.
    let (ph, pw) = match (detect_peak(clean), detect_peak(denoised)) {
        (Ok(c), Ok(d)) => (
            peak_height_error(&d, &c)?.to_string(),
            peak_width_error(&d, &c)?.to_string(),
        ),
        _ => (String::new(), String::new()),
    };
    Ok(DetailRow {
        signal: kind.to_string(),
        n,
        noise: noise_label.to_string(),
        method,
        seed,
        mse: mse_value.to_string(),
        snr_out_db: snr,
        peak_height_err: ph,
        peak_width_err: pw,
    })
}

const DETAIL_HEADER: [&str; 9] = [
    "signal",
    "n",
    "noise",
    "method",
    "seed",
    "mse",
    "snr_out_db",
    "peak_height_err",
    "peak_width_err",
];

fn write_detail(path: &Path, rows: &[DetailRow]) -> CliResult<()> {
    let path = resolve_out(path);
    let io_err = |e: csv::Error| CliError::io(format!("{}: {e}", path.display()));
    let mut writer = csv::Writer::from_path(&path).map_err(|e| {
        if e.is_io_error() {
            CliError::io(format!("{}: {e}", path.display()))
        } else {
            CliError::data(format!("{}: {e}", path.display()))
        }
    })?;
    writer.write_record(DETAIL_HEADER).map_err(io_err)?;
    for r in rows {
        writer
            .write_record([
                r.signal.as_str(),
                &r.n.to_string(),
                &r.noise,
                r.method,
                &r.seed.to_string(),
                &r.mse,
                &r.snr_out_db,
                &r.peak_height_err,
                &r.peak_width_err,
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// Per-cell means over seeds. Blank metric values are skipped; a cell whose
/// values are all blank stays blank.
fn write_aggregate(path: &Path, rows: &[DetailRow]) -> CliResult<()> {
    let path = resolve_out(path);
    let io_err = |e: csv::Error| CliError::io(format!("{}: {e}", path.display()));
    let mut writer = csv::Writer::from_path(&path).map_err(|e| {
        if e.is_io_error() {
            CliError::io(format!("{}: {e}", path.display()))
        } else {
            CliError::data(format!("{}: {e}", path.display()))
        }
    })?;
    writer
        .write_record([
            "signal",
            "n",
            "noise",
            "method",
            "seeds",
            "mse_mean",
            "snr_out_db_mean",
            "peak_height_err_mean",
            "peak_width_err_mean",
        ])
        .map_err(io_err)?;

    // Rows arrive grouped: seeds vary fastest within a cell.
    let mut i = 0;
    while i < rows.len() {
        let key = (&rows[i].signal, &rows[i].noise, rows[i].method);
        let mut j = i;
        while j < rows.len() && (&rows[j].signal, &rows[j].noise, rows[j].method) == key {
            j += 1;
        }
        let group = &rows[i..j];
        let mean_of = |field: fn(&DetailRow) -> &str| -> String {
            let values: Vec<f64> = group
                .iter()
                .map(field)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().unwrap_or(f64::INFINITY))
                .collect();
            if values.is_empty() {
                String::new()
            } else {
                (values.iter().sum::<f64>() / values.len() as f64).to_string()
            }
        };
        writer
            .write_record([
                rows[i].signal.as_str(),
                &rows[i].n.to_string(),
                &rows[i].noise,
                rows[i].method,
                &group.len().to_string(),
                &mean_of(|r| &r.mse),
                &mean_of(|r| &r.snr_out_db),
                &mean_of(|r| &r.peak_height_err),
                &mean_of(|r| &r.peak_width_err),
            ])
            .map_err(io_err)?;
        i = j;
    }
    writer
        .flush()
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}
