//! Command-line front end: generate benchmark instances, run any of the
//! solvers, evaluate against ground truth, sweep experiment grids, and
//! render result tables.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use blockrec::bench::{self, derive_seed, ExperimentSpec, Method};
use blockrec::eval::{self, ExtractOutcome};
use blockrec::louvain::{self, SimpleGraph};
use blockrec::netgen::{self, GeneratorConfig, RNG_ALGORITHM};
use blockrec::rpca::{self, MialmConfig, MialmStatus, RpcabStatus};
use blockrec::spectral::SpectralBackend;
use blockrec::{admipc, SolveStatus, SolverConfig};

#[derive(Parser)]
#[command(name = "blockrec", version, about = "Community recovery in partially observed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Admipc,
    Mialm,
    Rpcab,
    Louvain,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Admipc => Method::Admipc,
            MethodArg::Mialm => Method::Mialm,
            MethodArg::Rpcab => Method::Rpcab,
            MethodArg::Louvain => Method::Louvain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    /// Full dense eigendecomposition.
    Full,
    /// Lanczos iteration computing only eigenvalues above the threshold.
    Lanczos,
}

impl From<BackendArg> for SpectralBackend {
    fn from(b: BackendArg) -> SpectralBackend {
        match b {
            BackendArg::Full => SpectralBackend::full_dense(),
            BackendArg::Lanczos => SpectralBackend::thresholded_iterative(1e-6),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance: graph.txt, truth.txt and a metadata file.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        p0: f64,
        /// Fraction of node pairs flipped between edge and non-edge.
        #[arg(long, default_value_t = 0.05)]
        flip: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a method on a graph file; solvers write L.txt/S.txt, louvain
    /// writes partition.txt, all write a metadata file.
    Solve {
        #[arg(long, default_value = "graph.txt")]
        graph: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Sparsity weight; defaults to 1/sqrt(n).
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long = "eps-r", default_value_t = 5e-4)]
        eps_r: f64,
        #[arg(long, default_value_t = 1.2)]
        kappa: f64,
        #[arg(long = "mu-bar", default_value_t = 1e7)]
        mu_bar: f64,
        #[arg(long = "max-iter", default_value_t = 500)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = BackendArg::Full)]
        backend: BackendArg,
        /// Outer-call cap for rpcab.
        #[arg(long = "outer-cap", default_value_t = 20)]
        outer_cap: usize,
        #[arg(long = "louvain-orders", default_value_t = 20)]
        louvain_orders: usize,
        /// Ordering seed for louvain.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a solved L (or extracted partition) against the truth.
    Eval {
        #[arg(long, default_value = "truth.txt")]
        truth: PathBuf,
        /// Low-rank component dump; mutually exclusive with --partition.
        #[arg(long, conflicts_with = "partition")]
        l: Option<PathBuf>,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Run an experiment grid described by a spec file; writes results.csv.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Maximum concurrent cells.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Render markdown tables from a results CSV.
    Report {
        #[arg(long)]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> blockrec::Result<()> {
    match command {
        Command::Generate { n, alpha, p0, flip, seed, out } => generate(n, alpha, p0, flip, seed, &out),
        Command::Solve {
            graph,
            method,
            out,
            rho,
            eps_r,
            kappa,
            mu_bar,
            max_iter,
            backend,
            outer_cap,
            louvain_orders,
            seed,
        } => solve(
            &graph,
            method.into(),
            &out,
            SolveOptions {
                rho,
                eps_r,
                kappa,
                mu_bar,
                max_iter,
                backend: backend.into(),
                outer_cap,
                louvain_orders,
                seed,
            },
        ),
        Command::Eval { truth, l, partition } => evaluate(&truth, l.as_deref(), partition.as_deref()),
        Command::Bench { spec, out, jobs } => run_bench(&spec, &out, jobs),
        Command::Report { csv } => {
            let text = std::fs::read_to_string(csv)?;
            print!("{}", bench::render_report(&text)?);
            Ok(())
        }
    }
}

fn generate(n: usize, alpha: f64, p0: f64, flip: f64, seed: u64, out: &Path) -> blockrec::Result<()> {
    std::fs::create_dir_all(out)?;
    let cfg = GeneratorConfig {
        n,
        alpha,
        flip_fraction: flip,
        p0,
        seed: derive_seed(seed, n, alpha, p0, 0, "edges"),
    };
    let (full, truth) = netgen::generate_network(&cfg)?;
    let graph = if p0 < 1.0 {
        let mask_seed = derive_seed(seed, n, alpha, p0, 0, "mask");
        full.restrict(&netgen::sample_mask(full.n(), p0, mask_seed)?)?
    } else {
        full
    };
    netgen::write_graph_file(&out.join("graph.txt"), &graph)?;
    netgen::write_partition_file(&out.join("truth.txt"), &truth)?;
    let meta = vec![
        ("rng".to_string(), RNG_ALGORITHM.to_string()),
        ("seed".to_string(), seed.to_string()),
        ("n_nominal".to_string(), n.to_string()),
        ("n".to_string(), graph.n().to_string()),
        ("alpha".to_string(), alpha.to_string()),
        ("p0".to_string(), p0.to_string()),
        ("flip".to_string(), flip.to_string()),
        ("clusters".to_string(), truth.r().to_string()),
        ("observed_pairs".to_string(), graph.mask().observed_pair_count().to_string()),
    ];
    bench::write_kv_file(&out.join("generate_meta.txt"), &meta)?;
    println!(
        "wrote {} ({} nodes, {} clusters, {} observed pairs)",
        out.join("graph.txt").display(),
        graph.n(),
        truth.r(),
        graph.mask().observed_pair_count()
    );
    Ok(())
}

struct SolveOptions {
    rho: Option<f64>,
    eps_r: f64,
    kappa: f64,
    mu_bar: f64,
    max_iter: usize,
    backend: SpectralBackend,
    outer_cap: usize,
    louvain_orders: usize,
    seed: u64,
}

fn solve(graph_path: &Path, method: Method, out: &Path, opts: SolveOptions) -> blockrec::Result<()> {
    std::fs::create_dir_all(out)?;
    let graph = netgen::read_graph_file(graph_path)?;
    let n = graph.n();
    let rho = opts.rho.unwrap_or(1.0 / (n as f64).sqrt());
    let backend_name = match opts.backend.kind {
        blockrec::spectral::BackendKind::FullDense => "full",
        blockrec::spectral::BackendKind::ThresholdedIterative => "lanczos",
    };
    let mut meta: Vec<(String, String)> = vec![
        ("method".into(), method.as_str().into()),
        ("graph".into(), graph_path.display().to_string()),
        ("n".into(), n.to_string()),
        ("rho".into(), format!("{rho:.9e}")),
        ("eps_r".into(), format!("{:.3e}", opts.eps_r)),
        ("kappa".into(), opts.kappa.to_string()),
        ("mu_bar".into(), format!("{:.3e}", opts.mu_bar)),
        ("max_iter".into(), opts.max_iter.to_string()),
        ("backend".into(), backend_name.into()),
        ("rng".into(), RNG_ALGORITHM.into()),
    ];
    let started = Instant::now();
    match method {
        Method::Admipc => {
            let cfg = SolverConfig {
                rho,
                mu0: None,
                kappa: opts.kappa,
                mu_bar: opts.mu_bar,
                eps_r: opts.eps_r,
                max_iter: opts.max_iter,
                backend: opts.backend,
            };
            let result = admipc::solve(&graph, &cfg)?;
            let wall = started.elapsed().as_secs_f64();
            bench::write_matrix_file(&out.join("L.txt"), &result.l)?;
            bench::write_matrix_file(&out.join("S.txt"), &result.s)?;
            meta.push(("iterations".into(), result.iterations.to_string()));
            meta.push(("eig_calls".into(), result.eig_calls.to_string()));
            meta.push((
                "status".into(),
                match result.status {
                    SolveStatus::Converged => "converged".into(),
                    SolveStatus::MaxIterReached => "max_iter".into(),
                },
            ));
            meta.push(("wall_s".into(), format!("{wall:.4}")));
            println!(
                "admipc: {} iterations, {} eig calls, {:.2}s",
                result.iterations, result.eig_calls, wall
            );
        }
        Method::Mialm => {
            let cfg = mialm_cfg(&opts, rho);
            let result = rpca::mialm_solve(&graph, &cfg)?;
            let wall = started.elapsed().as_secs_f64();
            bench::write_matrix_file(&out.join("L.txt"), &result.l)?;
            bench::write_matrix_file(&out.join("S.txt"), &result.s)?;
            meta.push(("iterations".into(), result.iterations.to_string()));
            meta.push(("eig_calls".into(), result.eig_calls.to_string()));
            meta.push((
                "status".into(),
                match result.status {
                    MialmStatus::Converged => "converged".into(),
                    MialmStatus::MaxIterReached => "max_iter".into(),
                },
            ));
            meta.push(("wall_s".into(), format!("{wall:.4}")));
            println!(
                "mialm: {} iterations, {} eig calls, {:.2}s",
                result.iterations, result.eig_calls, wall
            );
        }
        Method::Rpcab => {
            let cfg = mialm_cfg(&opts, rho);
            let result = rpca::rpcab_solve(&graph, &cfg, opts.outer_cap, false)?;
            let wall = started.elapsed().as_secs_f64();
            bench::write_matrix_file(&out.join("L.txt"), &result.l)?;
            bench::write_matrix_file(&out.join("S.txt"), &result.s)?;
            meta.push(("outer_iterations".into(), result.outer_iterations.to_string()));
            meta.push(("iterations".into(), result.iterations.to_string()));
            meta.push(("eig_calls".into(), result.eig_calls.to_string()));
            let trace = result
                .rho_trace
                .iter()
                .map(|(r, t)| format!("{r:.6e}:{t:.6}"))
                .collect::<Vec<_>>()
                .join(",");
            meta.push(("rho_trace".into(), trace));
            meta.push((
                "status".into(),
                match result.status {
                    RpcabStatus::TraceMatched => "trace_matched".into(),
                    RpcabStatus::OuterCapReached => "outer_cap".into(),
                },
            ));
            meta.push(("wall_s".into(), format!("{wall:.4}")));
            println!(
                "rpcab: {} outer calls, {} eig calls, {:.2}s",
                result.outer_iterations, result.eig_calls, wall
            );
        }
        Method::Louvain => {
            let simple = SimpleGraph::from_observed(&graph);
            let runs = louvain::louvain_best(&simple, opts.louvain_orders, opts.seed)?;
            let wall = started.elapsed().as_secs_f64();
            let mut best_q = f64::MIN;
            let mut best = &runs[0];
            let mut sum_q = 0.0;
            for p in &runs {
                let q = louvain::modularity(&simple, p)?;
                sum_q += q;
                if q > best_q {
                    best_q = q;
                    best = p;
                }
            }
            netgen::write_partition_file(&out.join("partition.txt"), best)?;
            meta.push(("orders".into(), opts.louvain_orders.to_string()));
            meta.push(("seed".into(), opts.seed.to_string()));
            meta.push(("best_modularity".into(), format!("{best_q:.6}")));
            meta.push((
                "mean_modularity".into(),
                format!("{:.6}", sum_q / runs.len() as f64),
            ));
            meta.push(("status".into(), "ok".into()));
            meta.push(("wall_s".into(), format!("{wall:.4}")));
            println!(
                "louvain: {} orderings, best modularity {:.4}, {:.2}s",
                opts.louvain_orders, best_q, wall
            );
        }
    }
    bench::write_kv_file(&out.join("solve_meta.txt"), &meta)?;
    Ok(())
}

fn mialm_cfg(opts: &SolveOptions, rho: f64) -> MialmConfig {
    MialmConfig {
        rho,
        mu0: None,
        kappa: opts.kappa,
        mu_bar: opts.mu_bar,
        eps_r: opts.eps_r,
        max_iter: opts.max_iter,
        backend: opts.backend,
    }
}

fn evaluate(truth_path: &Path, l: Option<&Path>, partition: Option<&Path>) -> blockrec::Result<()> {
    let truth = netgen::read_partition_file(truth_path)?;
    let print_stats = |stats: &eval::BlockStats| {
        println!("s_max = {:.6}", stats.s_max);
        println!("s_min = {:.6}", stats.s_min);
        println!("s_av = {:.6}", stats.s_av);
        println!("s_off = {:.6}", stats.s_off);
        println!("s_f = {:.6}", stats.s_f);
    };
    let print_similarity = |sim: &eval::SimilarityScores| {
        println!("jaccard = {:.6}", sim.jaccard);
        println!("nmi_sg = {:.6}", sim.nmi_sg);
        println!("perc = {:.6}", sim.perc);
    };
    // default to L.txt, falling back to partition.txt, when neither given
    let (l, partition) = match (l, partition) {
        (None, None) => {
            if Path::new("L.txt").exists() {
                (Some(Path::new("L.txt")), None)
            } else {
                (None, Some(Path::new("partition.txt")))
            }
        }
        other => other,
    };
    if let Some(l_path) = l {
        let l = bench::read_matrix_file(l_path)?;
        print_stats(&eval::stats_against_truth(&l, &truth)?);
        match eval::extract_clusters(&l, eval::TAU_D, eval::TAU_BAR) {
            ExtractOutcome::Clusters(p) => {
                println!("extraction = ok (r = {})", p.r());
                print_similarity(&eval::similarity(&truth, &p)?);
            }
            ExtractOutcome::DiagonalFailure { node, value } => {
                println!("extraction = diag_failure (node = {}, value = {value:.4})", node + 1);
            }
        }
    } else if let Some(p_path) = partition {
        let found = netgen::read_partition_file(p_path)?;
        print_stats(&eval::stats_against_truth(&eval::bdo_matrix(&found), &truth)?);
        print_similarity(&eval::similarity(&truth, &found)?);
    }
    Ok(())
}

fn run_bench(spec_path: &Path, out: &Path, jobs: Option<usize>) -> blockrec::Result<()> {
    std::fs::create_dir_all(out)?;
    let text = std::fs::read_to_string(spec_path)?;
    let mut spec: ExperimentSpec = bench::parse_experiment_spec(&text)?;
    if jobs.is_some() {
        spec.jobs = jobs;
    }
    let table = bench::run_bench(&spec)?;
    let csv_path = out.join("results.csv");
    std::fs::write(&csv_path, table.to_csv())?;
    println!("wrote {} ({} rows, {} runs)", csv_path.display(), table.rows.len(), table.cells.len());
    Ok(())
}
