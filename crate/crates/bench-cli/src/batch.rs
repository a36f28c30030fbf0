//! Batch runner: a manifest of LP files and built-in NLP instances, solved
//! on a small worker pool under per-problem wall-time caps, with CSV/JSON
//! records and a size-class summary table.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ipm_lp::{solve_lp, LpOptions, LpStatus};
use ipm_nlp::{solve_nlp, NlpOptions, NlpStatus};
use kkt::Formulation;
use serde::{Deserialize, Serialize};

use crate::families::builtin_instance;
use crate::mps::parse_mps;
use crate::sgm::sgm10;
use crate::BenchError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub name: String,
    pub log2_nnz: f64,
    pub solved: u8,
    pub time_s: f64,
    pub solver: String,
    pub tol: f64,
    pub status: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub fn classify(nnz: usize) -> SizeClass {
        if nnz < 1 << 18 {
            SizeClass::Small
        } else if nnz < 1 << 20 {
            SizeClass::Medium
        } else {
            SizeClass::Large
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SizeClass::Small => "small (nnz < 2^18)",
            SizeClass::Medium => "medium (2^18 <= nnz < 2^20)",
            SizeClass::Large => "large (nnz >= 2^20)",
        }
    }
}

/// One manifest line: either `path` to an MPS file or `family` + `size` for
/// a built-in NLP, with optional solver-option overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub max_time: Option<f64>,
    #[serde(default)]
    pub formulation: Option<String>,
}

impl ManifestEntry {
    fn display_name(&self) -> String {
        match (&self.path, &self.family) {
            (Some(p), _) => Path::new(p)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.clone()),
            (None, Some(f)) => format!("{}_{}", f, self.size.unwrap_or(0)),
            (None, None) => "<invalid entry>".into(),
        }
    }
}

fn parse_formulation(s: &str) -> Result<Formulation, BenchError> {
    s.parse::<Formulation>().map_err(|e| BenchError::Parse {
        line: 0,
        message: e.to_string(),
    })
}

/// Solve one manifest entry. Failures of any kind become an unsolved record
/// carrying the configured cap time; the error is logged to stderr.
fn run_one(entry: &ManifestEntry) -> BenchmarkRecord {
    let name = entry.display_name();
    let tol = entry.tol.unwrap_or(1e-8);
    let cap = entry.max_time.unwrap_or(900.0);
    let unsolved = |solver: &str, status: String| BenchmarkRecord {
        name: name.clone(),
        log2_nnz: 0.0,
        solved: 0,
        time_s: cap,
        solver: solver.into(),
        tol,
        status,
    };
    match (&entry.path, &entry.family) {
        (Some(path), _) => {
            let attempt = || -> Result<BenchmarkRecord, BenchError> {
                let text = fs::read_to_string(path)?;
                let parsed = parse_mps(&text)?;
                let mut opts = LpOptions {
                    tol,
                    max_wall_time: cap,
                    ..LpOptions::default()
                };
                if let Some(mi) = entry.max_iter {
                    opts.max_iter = mi;
                }
                if let Some(f) = &entry.formulation {
                    opts.formulation = parse_formulation(f)?;
                }
                let nnz = parsed.lp.a.nnz().max(1);
                let report = solve_lp(&parsed.lp, &opts)?;
                let solved = report.status == LpStatus::Optimal;
                Ok(BenchmarkRecord {
                    name: name.clone(),
                    log2_nnz: (nnz as f64).log2(),
                    solved: solved as u8,
                    time_s: if solved { report.wall_time_seconds } else { cap },
                    solver: "ipm-lp".into(),
                    tol,
                    status: format!("{:?}", report.status),
                })
            };
            attempt().unwrap_or_else(|e| {
                eprintln!("batch: `{name}` failed: {e}");
                unsolved("ipm-lp", format!("Error: {e}"))
            })
        }
        (None, Some(family)) => {
            let attempt = || -> Result<BenchmarkRecord, BenchError> {
                let family = family.parse::<crate::families::Family>()?;
                let model = builtin_instance(family, entry.size.unwrap_or(0))?;
                let mut opts = NlpOptions {
                    tol,
                    max_wall_time: cap,
                    ..NlpOptions::default()
                };
                if let Some(mi) = entry.max_iter {
                    opts.max_iter = mi;
                }
                if let Some(f) = &entry.formulation {
                    opts.formulation = parse_formulation(f)?;
                }
                let x0 = model.initial_point().to_vec();
                let lambda0 = vec![0.0; model.m()];
                let nnz = (model.jacobian(&x0)?.nnz()
                    + model.hessian_lagrangian(&x0, &lambda0, 1.0)?.nnz())
                .max(1);
                let report = solve_nlp(&model, &opts)?;
                let solved = report.status == NlpStatus::Optimal;
                Ok(BenchmarkRecord {
                    name: name.clone(),
                    log2_nnz: (nnz as f64).log2(),
                    solved: solved as u8,
                    time_s: if solved { report.wall_time_seconds } else { cap },
                    solver: "ipm-nlp".into(),
                    tol,
                    status: format!("{:?}", report.status),
                })
            };
            attempt().unwrap_or_else(|e| {
                eprintln!("batch: `{name}` failed: {e}");
                unsolved("ipm-nlp", format!("Error: {e}"))
            })
        }
        (None, None) => {
            eprintln!("batch: manifest entry with neither `path` nor `family`");
            unsolved("none", "Error: empty manifest entry".into())
        }
    }
}

fn worker_count(jobs: usize) -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("BENCH_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(hw);
    cap.min(hw).min(jobs).max(1)
}

/// Solve every manifest entry (worker pool capped by BENCH_THREADS), write
/// `records.csv` and `records.json` under `out_dir`, and return the records
/// in manifest order.
pub fn run_batch(
    entries: &[ManifestEntry],
    out_dir: &Path,
) -> Result<Vec<BenchmarkRecord>, BenchError> {
    let slots: Vec<Mutex<Option<BenchmarkRecord>>> =
        entries.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(entries.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= entries.len() {
                    break;
                }
                *slots[i].lock().unwrap() = Some(run_one(&entries[i]));
            });
        }
    });
    let records: Vec<BenchmarkRecord> = slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every slot is filled"))
        .collect();

    fs::create_dir_all(out_dir)?;
    let mut csv = fs::File::create(out_dir.join("records.csv"))?;
    writeln!(csv, "name,log2_nnz,solved,time_s,solver,tol,status")?;
    for r in &records {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.name, r.log2_nnz, r.solved, r.time_s, r.solver, r.tol, r.status
        )?;
    }
    fs::write(
        out_dir.join("records.json"),
        serde_json::to_string_pretty(&records)?,
    )?;
    Ok(records)
}

/// Per-instance lines plus per-size-class SGM10 aggregates, in the
/// "problem | log2(nnz) | solved | time" column layout.
pub fn summary_table(records: &[BenchmarkRecord], max_time: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} | {:>9} | {:>6} | {:>10}\n",
        "problem", "log2(nnz)", "solved", "time"
    ));
    out.push_str(&"-".repeat(64));
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{:<28} | {:>9.2} | {:>6} | {:>10.4}\n",
            r.name, r.log2_nnz, r.solved, r.time_s
        ));
    }
    for class in [SizeClass::Small, SizeClass::Medium, SizeClass::Large] {
        let times: Vec<f64> = records
            .iter()
            .filter(|r| SizeClass::classify(r.log2_nnz.exp2().round() as usize) == class)
            .map(|r| r.time_s)
            .collect();
        if times.is_empty() {
            continue;
        }
        let solved: usize = records
            .iter()
            .filter(|r| SizeClass::classify(r.log2_nnz.exp2().round() as usize) == class)
            .map(|r| r.solved as usize)
            .sum();
        out.push_str(&format!(
            "{:<28} | {:>9} | {:>3}/{:<2} | {:>10.4}\n",
            class.label(),
            "",
            solved,
            times.len(),
            sgm10(&times, max_time).expect("nonempty by construction"),
        ));
    }
    out
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, BenchError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
