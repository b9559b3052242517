//! Experiment harness: sweeps a (n, alpha, p0, method, seed) grid,
//! evaluates every run against the planted truth, and aggregates
//! per-cell means into a results CSV plus markdown report tables.
//!
//! Instances are derived deterministically from the master seed and the
//! cell coordinates, independently of the method and of grid order, so
//! every method sees the same graphs and reordering the grid changes
//! nothing. Cells run in parallel; aggregation sorts by cell key first.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::admipc::{self, SolveStatus, SolverConfig};
use crate::eval::{self, BlockStats, ExtractOutcome, SimilarityScores};
use crate::louvain::{self, SimpleGraph};
use crate::mat::DenseSymMatrix;
use crate::netgen::{self, GeneratorConfig};
use crate::rpca::{self, MialmConfig, MialmStatus, RpcabStatus};
use crate::spectral::SpectralBackend;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Admipc,
    Mialm,
    Rpcab,
    Louvain,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Admipc => "admipc",
            Method::Mialm => "mialm",
            Method::Rpcab => "rpcab",
            Method::Louvain => "louvain",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "admipc" => Ok(Method::Admipc),
            "mialm" => Ok(Method::Mialm),
            "rpcab" => Ok(Method::Rpcab),
            "louvain" => Ok(Method::Louvain),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// A full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub n_list: Vec<usize>,
    pub alpha_list: Vec<f64>,
    pub p0_list: Vec<f64>,
    pub seeds_per_cell: usize,
    pub methods: Vec<Method>,
    pub louvain_orders: usize,
    pub master_seed: u64,
    pub flip_fraction: f64,
    /// Solver config overrides; `None` keeps the per-n default 1/sqrt(n).
    pub rho: Option<f64>,
    pub eps_r: f64,
    pub kappa: f64,
    pub mu_bar: f64,
    pub max_iter: usize,
    pub outer_cap: usize,
    pub backend: SpectralBackend,
    pub jobs: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(n_list: Vec<usize>, alpha_list: Vec<f64>, p0_list: Vec<f64>, methods: Vec<Method>) -> Self {
        Self {
            n_list,
            alpha_list,
            p0_list,
            seeds_per_cell: 10,
            methods,
            louvain_orders: 20,
            master_seed: 0,
            flip_fraction: 0.05,
            rho: None,
            eps_r: 5e-4,
            kappa: 1.2,
            mu_bar: 1e7,
            max_iter: 500,
            outer_cap: 20,
            backend: SpectralBackend::default(),
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.alpha_list.is_empty() || self.p0_list.is_empty() {
            return Err(Error::InvalidArgument("n, alpha and p0 lists must be non-empty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("at least one method is required".into()));
        }
        if self.seeds_per_cell == 0 {
            return Err(Error::InvalidArgument("seeds_per_cell must be at least 1".into()));
        }
        if self.louvain_orders == 0 {
            return Err(Error::InvalidArgument("louvain_orders must be at least 1".into()));
        }
        Ok(())
    }
}

/// Identity of one run within the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub n: usize,
    pub alpha: f64,
    pub p0: f64,
    pub method: Method,
    pub seed_index: usize,
}

/// Outcome of one run; failures carry a status string instead of data.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub key: CellKey,
    pub stats: Option<BlockStats>,
    pub similarity: Option<SimilarityScores>,
    pub wall_clock_seconds: f64,
    pub eig_calls: Option<usize>,
    pub outer_iterations: Option<usize>,
    pub status: String,
}

/// Aggregated mean row for one (n, alpha, p0, method) cell.
#[derive(Debug, Clone)]
pub struct MeanRow {
    pub n: usize,
    pub alpha: f64,
    pub p0: f64,
    pub method: Method,
    pub s_max: Option<f64>,
    pub s_min: Option<f64>,
    pub s_av: Option<f64>,
    pub s_off: Option<f64>,
    pub s_f: Option<f64>,
    pub jaccard: Option<f64>,
    pub nmi_sg: Option<f64>,
    pub perc: Option<f64>,
    pub cpu_s: f64,
    pub eig_calls: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone)]
pub struct BenchTable {
    pub rows: Vec<MeanRow>,
    pub cells: Vec<CellResult>,
}

/// Stable 64-bit FNV-1a over the cell coordinates and a stream tag;
/// the generator seeds are pure functions of these inputs.
pub fn derive_seed(master: u64, n: usize, alpha: f64, p0: f64, seed_index: usize, stream: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let eat = |h: &mut u64, bytes: &[u8]| {
        for &b in bytes {
            *h = (*h ^ b as u64).wrapping_mul(PRIME);
        }
    };
    eat(&mut h, &master.to_le_bytes());
    eat(&mut h, &(n as u64).to_le_bytes());
    eat(&mut h, &alpha.to_bits().to_le_bytes());
    eat(&mut h, &p0.to_bits().to_le_bytes());
    eat(&mut h, &(seed_index as u64).to_le_bytes());
    eat(&mut h, stream.as_bytes());
    h
}

fn solver_config(spec: &ExperimentSpec, n: usize) -> SolverConfig {
    SolverConfig {
        rho: spec.rho.unwrap_or(1.0 / (n as f64).sqrt()),
        mu0: None,
        kappa: spec.kappa,
        mu_bar: spec.mu_bar,
        eps_r: spec.eps_r,
        max_iter: spec.max_iter,
        backend: spec.backend,
    }
}

fn mialm_config(spec: &ExperimentSpec, n: usize) -> MialmConfig {
    MialmConfig {
        rho: spec.rho.unwrap_or(1.0 / (n as f64).sqrt()),
        mu0: None,
        kappa: spec.kappa,
        mu_bar: spec.mu_bar,
        eps_r: spec.eps_r,
        max_iter: spec.max_iter,
        backend: spec.backend,
    }
}

/// Extraction-based similarity of a solved low-rank component, or `None`
/// with a status suffix when the diagonal check fails.
fn extract_similarity(
    l: &DenseSymMatrix,
    truth: &netgen::Partition,
) -> (Option<SimilarityScores>, Option<&'static str>) {
    match eval::extract_clusters(l, eval::TAU_D, eval::TAU_BAR) {
        ExtractOutcome::Clusters(p) => (eval::similarity(truth, &p).ok(), None),
        ExtractOutcome::DiagonalFailure { .. } => (None, Some("diag_failure")),
    }
}

fn run_cell(spec: &ExperimentSpec, key: CellKey) -> CellResult {
    match run_cell_inner(spec, key) {
        Ok(result) => result,
        Err(e) => CellResult {
            key,
            stats: None,
            similarity: None,
            wall_clock_seconds: 0.0,
            eig_calls: None,
            outer_iterations: None,
            status: format!("error:{e}"),
        },
    }
}

fn run_cell_inner(spec: &ExperimentSpec, key: CellKey) -> Result<CellResult> {
    let CellKey { n, alpha, p0, method, seed_index } = key;
    let gen_cfg = GeneratorConfig {
        n,
        alpha,
        flip_fraction: spec.flip_fraction,
        p0,
        seed: derive_seed(spec.master_seed, n, alpha, p0, seed_index, "edges"),
    };
    let (full, truth) = netgen::generate_network(&gen_cfg)?;
    let graph = if p0 < 1.0 {
        let mask_seed = derive_seed(spec.master_seed, n, alpha, p0, seed_index, "mask");
        full.restrict(&netgen::sample_mask(full.n(), p0, mask_seed)?)?
    } else {
        full
    };

    let stats;
    let similarity;
    let mut eig_calls = None;
    let mut outer_iterations = None;
    let status;
    let wall;
    let started = Instant::now();

    match method {
        Method::Admipc => {
            let result = admipc::solve(&graph, &solver_config(spec, graph.n()))?;
            wall = started.elapsed().as_secs_f64();
            stats = Some(eval::stats_against_truth(&result.l, &truth)?);
            let (sim, failure) = extract_similarity(&result.l, &truth);
            similarity = sim;
            eig_calls = Some(result.eig_calls);
            let base = match result.status {
                SolveStatus::Converged => "converged",
                SolveStatus::MaxIterReached => "max_iter",
            };
            status = compose_status(base, failure);
        }
        Method::Mialm => {
            let result = rpca::mialm_solve(&graph, &mialm_config(spec, graph.n()))?;
            wall = started.elapsed().as_secs_f64();
            stats = Some(eval::stats_against_truth(&result.l, &truth)?);
            let (sim, failure) = extract_similarity(&result.l, &truth);
            similarity = sim;
            eig_calls = Some(result.eig_calls);
            let base = match result.status {
                MialmStatus::Converged => "converged",
                MialmStatus::MaxIterReached => "max_iter",
            };
            status = compose_status(base, failure);
        }
        Method::Rpcab => {
            let result = rpca::rpcab_solve(&graph, &mialm_config(spec, graph.n()), spec.outer_cap, false)?;
            wall = started.elapsed().as_secs_f64();
            stats = Some(eval::stats_against_truth(&result.l, &truth)?);
            let (sim, failure) = extract_similarity(&result.l, &truth);
            similarity = sim;
            eig_calls = Some(result.eig_calls);
            outer_iterations = Some(result.outer_iterations);
            let base = match result.status {
                RpcabStatus::TraceMatched => "trace_matched",
                RpcabStatus::OuterCapReached => "outer_cap",
            };
            status = compose_status(base, failure);
        }
        Method::Louvain => {
            let simple = SimpleGraph::from_observed(&graph);
            let lou_seed = derive_seed(spec.master_seed, n, alpha, p0, seed_index, "louvain");
            let runs = louvain::louvain_best(&simple, spec.louvain_orders, lou_seed)?;
            wall = started.elapsed().as_secs_f64();
            // average every measure over the orderings
            let mut acc_stats = [0.0f64; 5];
            let mut acc_sim = [0.0f64; 3];
            for p in &runs {
                let s = eval::stats_against_truth(&eval::bdo_matrix(p), &truth)?;
                acc_stats[0] += s.s_max;
                acc_stats[1] += s.s_min;
                acc_stats[2] += s.s_av;
                acc_stats[3] += s.s_off;
                acc_stats[4] += s.s_f;
                let sim = eval::similarity(&truth, p)?;
                acc_sim[0] += sim.jaccard;
                acc_sim[1] += sim.nmi_sg;
                acc_sim[2] += sim.perc;
            }
            let count = runs.len() as f64;
            stats = Some(BlockStats {
                s_max: acc_stats[0] / count,
                s_min: acc_stats[1] / count,
                s_av: acc_stats[2] / count,
                s_off: acc_stats[3] / count,
                s_f: acc_stats[4] / count,
                per_cluster: Vec::new(),
            });
            similarity = Some(SimilarityScores {
                jaccard: acc_sim[0] / count,
                nmi_sg: acc_sim[1] / count,
                perc: acc_sim[2] / count,
            });
            status = "ok".to_string();
        }
    }

    Ok(CellResult {
        key,
        stats,
        similarity,
        wall_clock_seconds: wall,
        eig_calls,
        outer_iterations,
        status,
    })
}

fn compose_status(base: &str, failure: Option<&str>) -> String {
    match failure {
        Some(f) => format!("{base}/{f}"),
        None => base.to_string(),
    }
}

/// Runs the whole grid and aggregates per-cell means. Cells execute in
/// parallel (bounded by `jobs` when set); output order is independent of
/// scheduling.
pub fn run_bench(spec: &ExperimentSpec) -> Result<BenchTable> {
    spec.validate()?;
    let mut keys = Vec::new();
    for &n in &spec.n_list {
        for &alpha in &spec.alpha_list {
            for &p0 in &spec.p0_list {
                for &method in &spec.methods {
                    for seed_index in 0..spec.seeds_per_cell {
                        keys.push(CellKey { n, alpha, p0, method, seed_index });
                    }
                }
            }
        }
    }

    let work = || keys.par_iter().map(|&key| run_cell(spec, key)).collect::<Vec<_>>();
    let mut cells = match spec.jobs {
        Some(jobs) if jobs >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work),
        _ => work(),
    };

    cells.sort_by(|a, b| {
        (a.key.n, a.key.alpha.to_bits(), a.key.p0.to_bits(), a.key.method, a.key.seed_index).cmp(&(
            b.key.n,
            b.key.alpha.to_bits(),
            b.key.p0.to_bits(),
            b.key.method,
            b.key.seed_index,
        ))
    });

    let mut rows: Vec<MeanRow> = Vec::new();
    let mut group: Vec<&CellResult> = Vec::new();
    let flush = |group: &mut Vec<&CellResult>, rows: &mut Vec<MeanRow>| {
        if let Some(first) = group.first() {
            rows.push(aggregate_group(first.key, group));
        }
        group.clear();
    };
    let mut iter_cells = cells.iter().peekable();
    while let Some(cell) = iter_cells.next() {
        group.push(cell);
        let same_cell = iter_cells.peek().is_some_and(|next| {
            next.key.n == cell.key.n
                && next.key.alpha == cell.key.alpha
                && next.key.p0 == cell.key.p0
                && next.key.method == cell.key.method
        });
        if !same_cell {
            flush(&mut group, &mut rows);
        }
    }
    Ok(BenchTable { rows, cells })
}

fn aggregate_group(key: CellKey, group: &[&CellResult]) -> MeanRow {
    fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
        let present: Vec<f64> = values.flatten().collect();
        if present.is_empty() {
            None
        } else {
            Some(present.iter().sum::<f64>() / present.len() as f64)
        }
    }
    let stats = |f: fn(&BlockStats) -> f64| mean_of(group.iter().map(|c| c.stats.as_ref().map(f)));
    let sim = |f: fn(&SimilarityScores) -> f64| mean_of(group.iter().map(|c| c.similarity.as_ref().map(f)));
    let mut status_counts: Vec<(String, usize)> = Vec::new();
    for cell in group {
        match status_counts.iter_mut().find(|(s, _)| *s == cell.status) {
            Some((_, c)) => *c += 1,
            None => status_counts.push((cell.status.clone(), 1)),
        }
    }
    status_counts.sort();
    let status = status_counts
        .iter()
        .map(|(s, c)| format!("{s}:{c}"))
        .collect::<Vec<_>>()
        .join("|");
    MeanRow {
        n: key.n,
        alpha: key.alpha,
        p0: key.p0,
        method: key.method,
        s_max: stats(|s| s.s_max),
        s_min: stats(|s| s.s_min),
        s_av: stats(|s| s.s_av),
        s_off: stats(|s| s.s_off),
        s_f: stats(|s| s.s_f),
        jaccard: sim(|s| s.jaccard),
        nmi_sg: sim(|s| s.nmi_sg),
        perc: sim(|s| s.perc),
        cpu_s: group.iter().map(|c| c.wall_clock_seconds).sum::<f64>() / group.len() as f64,
        eig_calls: mean_of(group.iter().map(|c| c.eig_calls.map(|e| e as f64))),
        status,
    }
}

pub const CSV_HEADER: &str =
    "n,alpha,p0,method,s_max,s_min,s_av,s_off,s_f,jaccard,nmi_sg,perc,cpu_s,eig_calls,status";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl BenchTable {
    /// Mean rows as CSV, header included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.4},{:.4},{},{},{},{},{},{},{},{},{},{:.6},{},{}\n",
                row.n,
                row.alpha,
                row.p0,
                row.method.as_str(),
                fmt_opt(row.s_max),
                fmt_opt(row.s_min),
                fmt_opt(row.s_av),
                fmt_opt(row.s_off),
                fmt_opt(row.s_f),
                fmt_opt(row.jaccard),
                fmt_opt(row.nmi_sg),
                fmt_opt(row.perc),
                row.cpu_s,
                row.eig_calls.map(|e| format!("{e:.2}")).unwrap_or_default(),
                row.status,
            ));
        }
        out
    }
}

/// Parsed form of one results-CSV row.
#[derive(Debug, Clone)]
pub struct CsvRow {
    pub n: usize,
    pub alpha: f64,
    pub p0: f64,
    pub method: String,
    pub values: Vec<Option<f64>>, // the 11 numeric columns
    pub status: String,
}

pub fn parse_results_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty file".into() })?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Parse { line: 1, message: format!("unexpected header `{header}`") });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 15 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 15 fields, got {}", fields.len()),
            });
        }
        let parse_num = |i: usize| -> Result<Option<f64>> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                fields[i]
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("invalid number `{}`", fields[i]),
                    })
            }
        };
        rows.push(CsvRow {
            n: fields[0].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid n `{}`", fields[0]),
            })?,
            alpha: parse_num(1)?.ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "missing alpha".into(),
            })?,
            p0: parse_num(2)?.ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "missing p0".into(),
            })?,
            method: fields[3].to_string(),
            values: (4..14).map(parse_num).collect::<Result<Vec<_>>>()?,
            status: fields[14].to_string(),
        });
    }
    Ok(rows)
}

/// Renders per-p0 markdown tables from a results CSV: one block-statistics
/// table and one similarity/cost table per observation level, with one
/// column group per method.
pub fn render_report(csv: &str) -> Result<String> {
    let rows = parse_results_csv(csv)?;
    if rows.is_empty() {
        return Ok("No results to report.\n".to_string());
    }
    let mut p0s: Vec<u64> = rows.iter().map(|r| r.p0.to_bits()).collect();
    p0s.sort_unstable();
    p0s.dedup();
    let mut out = String::new();
    for bits in p0s {
        let p0 = f64::from_bits(bits);
        let subset: Vec<&CsvRow> = rows.iter().filter(|r| r.p0.to_bits() == bits).collect();
        let mut methods: Vec<&str> = subset.iter().map(|r| r.method.as_str()).collect();
        methods.sort_unstable();
        methods.dedup();
        let mut cells: Vec<(usize, u64)> = subset
            .iter()
            .map(|r| (r.n, r.alpha.to_bits()))
            .collect();
        cells.sort_unstable();
        cells.dedup();

        out.push_str(&format!("## p0 = {p0}\n\n"));
        let fmt = |v: &Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
        // block statistics, one column group per method
        out.push_str("### Block statistics\n\n");
        out.push_str("| n | alpha |");
        for m in &methods {
            out.push_str(&format!(" {m} s_max | {m} s_min | {m} s_av | {m} s_off | {m} s_f |"));
        }
        out.push('\n');
        out.push_str(&"|---".repeat(2 + methods.len() * 5));
        out.push_str("|\n");
        for &(n, alpha_bits) in &cells {
            out.push_str(&format!("| {n} | {} |", f64::from_bits(alpha_bits)));
            for m in &methods {
                match subset.iter().find(|r| {
                    r.n == n && r.alpha.to_bits() == alpha_bits && r.method == *m
                }) {
                    Some(r) => {
                        for v in &r.values[0..5] {
                            out.push_str(&format!(" {} |", fmt(v)));
                        }
                    }
                    None => out.push_str(&" - |".repeat(5)),
                }
            }
            out.push('\n');
        }
        out.push('\n');
        // similarity and cost
        out.push_str("### Similarity and cost\n\n");
        out.push_str("| n | alpha |");
        for m in &methods {
            out.push_str(&format!(" {m} jaccard | {m} nmi_sg | {m} perc | {m} cpu_s | {m} eig |"));
        }
        out.push('\n');
        out.push_str(&"|---".repeat(2 + methods.len() * 5));
        out.push_str("|\n");
        for &(n, alpha_bits) in &cells {
            out.push_str(&format!("| {n} | {} |", f64::from_bits(alpha_bits)));
            for m in &methods {
                match subset.iter().find(|r| {
                    r.n == n && r.alpha.to_bits() == alpha_bits && r.method == *m
                }) {
                    Some(r) => {
                        for v in &r.values[5..10] {
                            out.push_str(&format!(" {} |", fmt(v)));
                        }
                    }
                    None => out.push_str(&" - |".repeat(5)),
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// matrix dumps and key-value files

/// Writes the dense dump format: a line with n, then n rows of
/// space-separated entries at 12 significant digits.
pub fn write_matrix_file(path: &Path, m: &DenseSymMatrix) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let n = m.n();
    writeln!(out, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.11e}", m.get(i, j))).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_matrix_file(path: &Path) -> Result<DenseSymMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty file".into() })?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line: 1, message: format!("invalid order `{first}`") })?;
    let mut data = ndarray::Array2::zeros((n, n));
    for i in 0..n {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: i + 2, message: "missing matrix row".into() })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != n {
            return Err(Error::Parse {
                line: line_no + 1,
                message: format!("expected {n} entries, got {}", fields.len()),
            });
        }
        for (j, f) in fields.iter().enumerate() {
            data[(i, j)] = f.parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                message: format!("invalid entry `{f}`"),
            })?;
        }
    }
    DenseSymMatrix::from_array(data)
}

/// Writes `key = value` lines.
pub fn write_kv_file(path: &Path, pairs: &[(String, String)]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (k, v) in pairs {
        writeln!(out, "{k} = {v}")?;
    }
    Ok(())
}

/// Parses the bench spec format: `key = value` lines, `#` comments,
/// comma-separated lists.
pub fn parse_experiment_spec(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(vec![], vec![], vec![], vec![]);
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: line_no, message: format!("expected `key = value`, got `{line}`") })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Parse { line: line_no, message: format!("invalid {what} `{value}`") };
        match key {
            "n_list" => {
                spec.n_list = value
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("n list"))?;
            }
            "alpha_list" => {
                spec.alpha_list = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("alpha list"))?;
            }
            "p0_list" => {
                spec.p0_list = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("p0 list"))?;
            }
            "methods" => {
                spec.methods = value
                    .split(',')
                    .map(|v| Method::parse(v.trim()))
                    .collect::<Result<_>>()
                    .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            }
            "seeds_per_cell" => spec.seeds_per_cell = value.parse().map_err(|_| bad("count"))?,
            "louvain_orders" => spec.louvain_orders = value.parse().map_err(|_| bad("count"))?,
            "master_seed" => spec.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "flip" => spec.flip_fraction = value.parse().map_err(|_| bad("fraction"))?,
            "rho" => spec.rho = Some(value.parse().map_err(|_| bad("rho"))?),
            "eps_r" => spec.eps_r = value.parse().map_err(|_| bad("tolerance"))?,
            "kappa" => spec.kappa = value.parse().map_err(|_| bad("kappa"))?,
            "mu_bar" => spec.mu_bar = value.parse().map_err(|_| bad("mu_bar"))?,
            "max_iter" => spec.max_iter = value.parse().map_err(|_| bad("count"))?,
            "outer_cap" => spec.outer_cap = value.parse().map_err(|_| bad("count"))?,
            "jobs" => spec.jobs = Some(value.parse().map_err(|_| bad("count"))?),
            "backend" => {
                spec.backend = match value {
                    "full" => SpectralBackend::full_dense(),
                    "lanczos" => SpectralBackend::thresholded_iterative(1e-6),
                    _ => return Err(bad("backend (full|lanczos)")),
                };
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_derivation_ignores_grid_order_and_method() {
        let a = derive_seed(7, 100, 0.8, 1.0, 3, "edges");
        let b = derive_seed(7, 100, 0.8, 1.0, 3, "edges");
        assert_eq!(a, b);
        assert_ne!(a, derive_seed(7, 100, 0.8, 1.0, 4, "edges"));
        assert_ne!(a, derive_seed(7, 100, 0.8, 1.0, 3, "mask"));
        assert_ne!(a, derive_seed(8, 100, 0.8, 1.0, 3, "edges"));
    }

    #[test]
    fn small_bench_is_deterministic_modulo_timing() {
        let mut spec = ExperimentSpec::new(
            vec![30],
            vec![0.8],
            vec![1.0, 0.9],
            vec![Method::Admipc, Method::Louvain],
        );
        spec.seeds_per_cell = 2;
        spec.louvain_orders = 3;
        let strip_cpu = |csv: &str| -> String {
            csv.lines()
                .map(|line| {
                    let fields: Vec<&str> = line.split(',').collect();
                    fields
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != 12)
                        .map(|(_, f)| *f)
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let a = run_bench(&spec).unwrap().to_csv();
        let b = run_bench(&spec).unwrap().to_csv();
        // wall-clock differs run to run; everything else must be identical
        assert_eq!(strip_cpu(&a), strip_cpu(&b));
        assert_eq!(a.lines().count(), 1 + 2 * 2);
    }

    #[test]
    fn bench_rows_have_values_in_range() {
        let mut spec = ExperimentSpec::new(vec![25], vec![1.0], vec![1.0], vec![Method::Admipc]);
        spec.seeds_per_cell = 2;
        let table = run_bench(&spec).unwrap();
        for row in &table.rows {
            for v in [row.s_max, row.s_min, row.s_av, row.s_off, row.s_f, row.jaccard, row.nmi_sg, row.perc]
                .into_iter()
                .flatten()
            {
                assert!((0.0..=1.0).contains(&v), "{v} out of range");
            }
            assert!(row.cpu_s > 0.0);
            assert!(row.eig_calls.unwrap() > 0.0);
        }
    }

    #[test]
    fn csv_round_trips_through_the_parser() {
        let mut spec = ExperimentSpec::new(vec![20], vec![1.0], vec![1.0], vec![Method::Louvain]);
        spec.seeds_per_cell = 1;
        spec.louvain_orders = 2;
        let csv = run_bench(&spec).unwrap().to_csv();
        let rows = parse_results_csv(&csv).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].method, "louvain");
        assert!(rows[0].values[9].is_none()); // louvain has no eig calls
    }

    #[test]
    fn report_renders_tables_and_handles_empty_input() {
        let empty = format!("{CSV_HEADER}\n");
        assert_eq!(render_report(&empty).unwrap(), "No results to report.\n");
        let csv = format!(
            "{CSV_HEADER}\n100,0.8000,1.0000,admipc,0.010000,0.000000,0.002000,0.000000,1.000000,0.990000,0.995000,1.000000,0.52,31.00,converged:10\n"
        );
        let report = render_report(&csv).unwrap();
        assert!(report.contains("## p0 = 1"));
        assert!(report.contains("admipc s_max"));
        assert!(report.contains("| 100 | 0.8 |"));
    }

    #[test]
    fn matrix_dump_round_trips_to_12_digits() {
        let m = DenseSymMatrix::from_fn(4, |i, j| ((i * 13 + j * 7) % 17) as f64 / 1.7e5 - 3.1);
        let dir = std::env::temp_dir().join("blockrec_bench_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.txt");
        write_matrix_file(&path, &m).unwrap();
        let back = read_matrix_file(&path).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((back.get(i, j) - m.get(i, j)).abs() <= 1e-11 * m.get(i, j).abs().max(1.0));
            }
        }
    }

    #[test]
    fn spec_parser_reads_all_keys() {
        let text = "\
# grid
n_list = 100, 200
alpha_list = 0.8, 1.0
p0_list = 1.0
methods = admipc, louvain
seeds_per_cell = 3
louvain_orders = 5
master_seed = 9
flip = 0.03
eps_r = 1e-3
backend = lanczos
jobs = 2
";
        let spec = parse_experiment_spec(text).unwrap();
        assert_eq!(spec.n_list, vec![100, 200]);
        assert_eq!(spec.methods, vec![Method::Admipc, Method::Louvain]);
        assert_eq!(spec.seeds_per_cell, 3);
        assert_eq!(spec.flip_fraction, 0.03);
        assert_eq!(spec.backend.kind, crate::spectral::BackendKind::ThresholdedIterative);
        assert_eq!(spec.jobs, Some(2));
        assert!(parse_experiment_spec("bogus = 1\n").is_err());
        assert!(parse_experiment_spec("n_list\n").is_err());
    }
}
