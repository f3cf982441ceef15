//! Batch verification over a grid of Hamming graphs `H(D, r)`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use hamcomm::commutator::{eigentable, spectrum_with, CommutatorSpectrum, EigenRow};
use hamcomm::complete_graph::{build_kr, verify_kr};
use hamcomm::hamming::{build_hamming_with_cap, vertex_count, verify_hamming, HammingContext};
use hamcomm::split::{verify_split, SplitDecomposition};
use hamcomm::tmodule::TAction;
use hamcomm::{Check, Checks};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SIZE_CAP: u128 = 256;
pub const DEFAULT_D: RangeInclusive<u32> = 1..=4;
pub const DEFAULT_R: RangeInclusive<u32> = 3..=5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Kr,
    Hamming,
    Split,
    Commutator,
    Tmodule,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Kr, Suite::Hamming, Suite::Split, Suite::Commutator, Suite::Tmodule];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kr => "kr",
            Suite::Hamming => "hamming",
            Suite::Split => "split",
            Suite::Commutator => "commutator",
            Suite::Tmodule => "tmodule",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Parses `A..B`, `A..=B` or a single `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub d_range: RangeInclusive<u32>,
    pub r_range: RangeInclusive<u32>,
    /// Whether the ranges came from the command line rather than the defaults.
    pub explicit_grid: bool,
    pub size_cap: u128,
    pub force: bool,
    pub suites: Vec<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d_range: DEFAULT_D,
            r_range: DEFAULT_R,
            explicit_grid: false,
            size_cap: DEFAULT_SIZE_CAP,
            force: false,
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    /// Grid cells in `(D, r)` order. The default grid is filtered by the cap;
    /// an explicit grid that exceeds it is rejected unless forced.
    pub fn cells(&self) -> Result<Vec<(u32, u32)>, UsageError> {
        if *self.r_range.start() < 3 {
            return Err(UsageError(format!("r must be at least 3, got {}", self.r_range.start())));
        }
        if *self.d_range.start() < 1 {
            return Err(UsageError("D must be at least 1".into()));
        }
        if self.suites.is_empty() {
            return Err(UsageError("no suites selected".into()));
        }
        let mut cells = Vec::new();
        for d in self.d_range.clone() {
            for r in self.r_range.clone() {
                let size = vertex_count(d, r);
                let fits = size.is_some_and(|n| n <= self.size_cap);
                if fits || self.force {
                    if size.is_none() {
                        return Err(UsageError(format!("H({d},{r}) is too large to build")));
                    }
                    cells.push((d, r));
                } else if self.explicit_grid {
                    return Err(UsageError(format!(
                        "H({d},{r}) has {} vertices, above the size cap {}; use --force or raise --size-cap",
                        size.map_or_else(|| "too many".to_string(), |n| n.to_string()),
                        self.size_cap
                    )));
                }
            }
        }
        if cells.is_empty() {
            return Err(UsageError("no grid cell fits under the size cap".into()));
        }
        Ok(cells)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub s: i64,
    /// Exact fraction `p/q` (or `p`).
    pub eigenvalue: String,
    pub predicted_dim: u64,
    pub computed_dim: Option<u64>,
}

impl From<&EigenRow> for EigenEntry {
    fn from(e: &EigenRow) -> Self {
        EigenEntry {
            s: e.s,
            eigenvalue: e.eigenvalue.to_string(),
            predicted_dim: e.predicted_dim.to_string().parse().expect("cell dims fit in u64"),
            computed_dim: e.computed_dim.map(|k| k as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSummary {
    pub diameter: usize,
    pub f_dims: Vec<usize>,
    pub modules: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub eta: usize,
    pub harvested_dim: usize,
    pub v_eta_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestSummary {
    pub seeds: usize,
    pub modules: usize,
    pub patterns: Vec<PatternSummary>,
    pub coverage: Vec<CoverageSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    #[serde(rename = "D")]
    pub d: u32,
    pub r: u32,
    pub suites: BTreeMap<String, SuiteReport>,
    pub eigentable: Vec<EigenEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmodule_harvest: Option<HarvestSummary>,
    pub timing_ms: u64,
}

impl CellReport {
    pub fn checks(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.suites
            .iter()
            .flat_map(|(name, s)| s.checks.iter().map(move |c| (name.as_str(), c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub cells: Vec<CellReport>,
}

impl Report {
    pub fn failures(&self) -> Vec<String> {
        self.cells
            .iter()
            .flat_map(|cell| {
                cell.checks()
                    .filter(|(_, c)| !c.pass)
                    .map(move |(suite, c)| format!("H({},{}) {suite}: {}", cell.d, cell.r, c.id))
            })
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|cell| cell.checks().all(|(_, c)| c.pass))
    }

    /// 0 if every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, self)
    }

    /// One row per `(D, r, suite, check)`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            schema_version: u32,
            #[serde(rename = "D")]
            d: u32,
            r: u32,
            suite: &'a str,
            check: &'a str,
            pass: bool,
            detail: &'a str,
        }
        let mut w = csv::Writer::from_writer(out);
        for cell in &self.cells {
            for (suite, c) in cell.checks() {
                w.serialize(Row {
                    schema_version: self.schema_version,
                    d: cell.d,
                    r: cell.r,
                    suite,
                    check: &c.id,
                    pass: c.pass,
                    detail: c.detail.as_deref().unwrap_or(""),
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn failed_suite(suite: Suite, err: impl fmt::Display) -> SuiteReport {
    SuiteReport {
        checks: vec![Check::with_detail(format!("{suite}.completed"), false, err.to_string())],
    }
}

fn suite_report(checks: Checks) -> SuiteReport {
    SuiteReport { checks: checks.0 }
}

fn harvest_summary(survey: &hamcomm::tmodule::Survey) -> HarvestSummary {
    let mut patterns: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for c in &survey.certificates {
        *patterns.entry(c.pattern()).or_default() += 1;
    }
    HarvestSummary {
        seeds: survey.seeds_tried,
        modules: survey.certificates.len(),
        patterns: patterns
            .into_iter()
            .map(|((diameter, f_dims), modules)| PatternSummary {
                diameter,
                f_dims,
                modules,
            })
            .collect(),
        coverage: survey
            .coverage
            .iter()
            .map(|c| CoverageSummary {
                eta: c.eta,
                harvested_dim: c.harvested_dim,
                v_eta_dim: c.v_eta_dim,
            })
            .collect(),
    }
}

/// Runs the selected suites on one cell. `cap` only guards the build.
pub fn run_cell(d: u32, r: u32, suites: &[Suite], cap: u128) -> CellReport {
    let start = Instant::now();
    let mut out = BTreeMap::new();
    let want = |s: Suite| suites.contains(&s);

    if want(Suite::Kr) {
        let report = build_kr(r).map(|ctx| verify_kr(&ctx));
        out.insert(
            Suite::Kr.to_string(),
            match report {
                Ok(rep) => suite_report(rep.checks),
                Err(e) => failed_suite(Suite::Kr, e),
            },
        );
    }

    let mut table: Vec<EigenEntry> = eigentable(d, r).iter().map(EigenEntry::from).collect();
    let mut harvest = None;
    let needs_ctx = suites.iter().any(|&s| s != Suite::Kr);
    if needs_ctx {
        match build_hamming_with_cap(d, r, cap) {
            Ok(ctx) => {
                run_hamming_suites(&ctx, suites, &mut out, &mut table, &mut harvest);
            }
            Err(e) => {
                for &s in suites.iter().filter(|&&s| s != Suite::Kr) {
                    out.insert(s.to_string(), failed_suite(s, &e));
                }
            }
        }
    }

    CellReport {
        d,
        r,
        suites: out,
        eigentable: table,
        tmodule_harvest: harvest,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}

fn run_hamming_suites(
    ctx: &HammingContext,
    suites: &[Suite],
    out: &mut BTreeMap<String, SuiteReport>,
    table: &mut Vec<EigenEntry>,
    harvest: &mut Option<HarvestSummary>,
) {
    let want = |s: Suite| suites.contains(&s);
    if want(Suite::Hamming) {
        out.insert(Suite::Hamming.to_string(), suite_report(verify_hamming(ctx)));
    }
    let split = SplitDecomposition::new(ctx);
    if want(Suite::Split) {
        out.insert(Suite::Split.to_string(), suite_report(verify_split(&split)));
    }
    if !want(Suite::Commutator) && !want(Suite::Tmodule) {
        return;
    }
    let spec: CommutatorSpectrum = match spectrum_with(&split) {
        Ok(spec) => spec,
        Err(e) => {
            for s in [Suite::Commutator, Suite::Tmodule].into_iter().filter(|&s| want(s)) {
                out.insert(s.to_string(), failed_suite(s, &e));
            }
            return;
        }
    };
    if want(Suite::Commutator) {
        *table = spec.table().iter().map(EigenEntry::from).collect();
        out.insert(Suite::Commutator.to_string(), suite_report(spec.checks.clone()));
    }
    if want(Suite::Tmodule) {
        let report = match TAction::new(ctx).survey(&split, &spec) {
            Ok(survey) => {
                *harvest = Some(harvest_summary(&survey));
                suite_report(survey.checks)
            }
            Err(e) => failed_suite(Suite::Tmodule, e),
        };
        out.insert(Suite::Tmodule.to_string(), report);
    }
}

/// Runs every cell on a pool of `jobs` workers; cells come back in grid order.
pub fn run(config: &RunConfig, jobs: usize) -> Result<Report, UsageError> {
    let cells = config.cells()?;
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let cap = if config.force { u128::MAX } else { config.size_cap };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| UsageError(e.to_string()))?;
    let cells = pool.install(|| {
        cells
            .par_iter()
            .map(|&(d, r)| run_cell(d, r, &suites, cap))
            .collect::<Vec<_>>()
    });
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        cells,
    })
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}
