use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mirrorgate::batch::Execution;
use mirrorgate::bench::{check_cost_law, sweep, BenchPoint, BenchSpec, Workload};
use mirrorgate::generate::{random_box_lp, InstanceParams, Sparsity};
use mirrorgate::io::{parse_problem_file, write_problem_file, write_trace_csv};
use mirrorgate::montecarlo::monte_carlo;
use mirrorgate::solver::{default_bounds, tight_deviation_constant, DEVIATION_CONSTANT};
use mirrorgate::{
    certify, fmt_f64, BudgetMode, Error, OracleMode, Problem, ProxKind, ProxSetup, Rng, RunStatus, SolverConfig,
};

#[derive(Parser)]
#[command(name = "mirrorgate", version, about = "Switching mirror descent with duality-gap certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file.
    Solve(SolveArgs),
    /// Solve with the exact oracle and report the duality-gap certificate.
    Certify(SolveArgs),
    /// Repeat seeded randomized solves and report the failure fraction.
    Montecarlo(MonteCarloArgs),
    /// Measure per-iteration operation counts over a grid of sizes.
    Bench(BenchArgs),
    /// Write a random box-constrained LP instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProxArg {
    Euclidean,
    Entropy,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Exact,
    Randomized,
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    eps_g: f64,
    /// Decouples eps_f from eps_g.
    #[arg(long)]
    eps_f: Option<f64>,
    #[arg(long)]
    mf: Option<f64>,
    #[arg(long)]
    mg: Option<f64>,
    #[arg(long, value_enum, default_value = "euclidean")]
    prox: ProxArg,
    /// deterministic, stochastic, expectation, or an iteration count.
    #[arg(long, default_value = "deterministic")]
    budget: String,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    /// 81 or tight.
    #[arg(long, default_value = "81")]
    confidence_const: String,
    #[arg(long, value_enum, default_value = "exact")]
    oracle: OracleArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    verbose_trace: bool,
    /// Squared distance bound R^2 from the start point to a solution.
    #[arg(long)]
    r2: Option<f64>,
    /// Overrides the computed bound Rbar^2 (required on the orthant).
    #[arg(long)]
    rbar2: Option<f64>,
    #[arg(long)]
    randomize_objective: bool,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    solve: SolveArgs,
    #[arg(long)]
    runs: u64,
    /// Reference optimal value f*.
    #[arg(long)]
    f_star: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated row counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1024usize, 2048, 4096, 8192, 16384])]
    m: Vec<usize>,
    /// Comma-separated nonzeros per column.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8])]
    s_m: Vec<usize>,
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = 2000)]
    iterations: u64,
    /// Coordinates changed per iteration (engine workload).
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Run the solver with this oracle instead of raw engine deltas.
    #[arg(long, value_enum)]
    solver: Option<OracleArg>,
    /// Track the maximum by a full scan instead of the segment tree.
    #[arg(long)]
    dense_baseline: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Nonzeros per row.
    #[arg(long, conflicts_with = "s_m")]
    s_n: Option<usize>,
    /// Nonzeros per column.
    #[arg(long)]
    s_m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

struct Prepared {
    problem: Problem,
    setup: ProxSetup,
    cfg: SolverConfig,
}

fn prepare(a: &SolveArgs) -> mirrorgate::Result<Prepared> {
    let problem = parse_problem_file(&a.problem)?;
    for l in problem.empty_rows() {
        eprintln!("warning: constraint row {} has no entries and is constant", l + 1);
    }
    let kind = match a.prox {
        ProxArg::Euclidean => ProxKind::Euclidean,
        ProxArg::Entropy => ProxKind::Entropy,
    };
    let mut setup = ProxSetup::new(kind, problem.set().clone())?;
    if let Some(r2) = a.r2 {
        setup = setup.with_r2(r2);
    }
    if let Some(rb) = a.rbar2 {
        setup = setup.with_rbar2(rb);
    }
    let oracle = match a.oracle {
        OracleArg::Exact => OracleMode::Exact,
        OracleArg::Randomized => OracleMode::Randomized,
    };
    let (mf, mg) = match (a.mf, a.mg) {
        (Some(f), Some(g)) => (f, g),
        (f, g) => {
            let (df, dg) = default_bounds(&problem, &setup, oracle, a.randomize_objective)?;
            (f.unwrap_or(df), g.unwrap_or(dg))
        }
    };
    let mut cfg = SolverConfig::new(a.eps_g, mf, mg);
    cfg.eps_f = a.eps_f;
    cfg.sigma = a.sigma;
    cfg.seed = a.seed;
    cfg.oracle = oracle;
    cfg.randomize_objective = a.randomize_objective;
    cfg.verbose_trace = a.verbose_trace;
    cfg.log_objective = a.verbose_trace;
    cfg.budget = match a.budget.as_str() {
        "deterministic" => BudgetMode::Deterministic,
        "stochastic" => BudgetMode::StochasticHP,
        "expectation" => BudgetMode::Expectation,
        s => BudgetMode::Manual(
            s.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad --budget `{s}`")))?,
        ),
    };
    cfg.deviation_constant = match a.confidence_const.as_str() {
        "81" => DEVIATION_CONSTANT,
        "tight" => tight_deviation_constant(),
        s => return Err(Error::InvalidConfig(format!("bad --confidence-const `{s}`"))),
    };
    cfg.validate()?;
    Ok(Prepared { problem, setup, cfg })
}

fn solve_cmd(a: &SolveArgs, force_certify: bool) -> mirrorgate::Result<ExitCode> {
    let Prepared { problem, setup, cfg } = prepare(a)?;
    let want_cert = a.certify || force_certify;
    if want_cert && cfg.oracle != OracleMode::Exact {
        return Err(Error::InvalidConfig("certificates need --oracle exact".into()));
    }
    let report = mirrorgate::solve(&problem, &setup, &cfg)?;
    let t = &report.trace;
    println!("N {}", t.iterations);
    println!("N_I {}", t.n_productive);
    println!("N_J {}", t.n_nonproductive);
    println!("eps_g {}", fmt_f64(report.eps_g));
    println!("eps_f {}", fmt_f64(report.eps_f));
    if let (Some(f), Some(g)) = (report.f_xbar, report.g_xbar) {
        println!("f_xbar {}", fmt_f64(f));
        println!("g_xbar {}", fmt_f64(g));
    }
    let cert = if want_cert && report.status() == RunStatus::Ok {
        let c = certify(&problem, t, &report.steps)?;
        println!("phi {}", fmt_f64(c.phi_val));
        println!("gap {}", fmt_f64(c.gap));
        println!("gap_within_eps_f {}", c.gap <= report.eps_f);
        Some(c)
    } else {
        None
    };
    if let Some(path) = &a.trace {
        write_trace_csv(&report, cert.as_ref(), path)?;
    }
    Ok(match report.status() {
        RunStatus::Ok => ExitCode::SUCCESS,
        RunStatus::NoProductiveSteps => {
            eprintln!("no productive iterations");
            ExitCode::from(2)
        }
    })
}

fn montecarlo_cmd(a: &MonteCarloArgs) -> mirrorgate::Result<ExitCode> {
    if a.runs == 0 {
        return Err(Error::InvalidConfig("--runs must be at least 1".into()));
    }
    let mut solve = a.solve.clone();
    if solve.budget == "deterministic" {
        solve.budget = "stochastic".into();
    }
    let Prepared { problem, setup, cfg } = prepare(&solve)?;
    let summary = monte_carlo(&problem, &setup, &cfg, a.runs, a.f_star, Execution::from_env())?;
    let (lo, hi) = summary.confidence_interval();
    println!("runs {}", summary.runs);
    println!("N {}", summary.budget);
    println!("failures {}", summary.failures);
    println!("failure_fraction {}", fmt_f64(summary.failure_fraction()));
    println!("ci95_low {}", fmt_f64(lo));
    println!("ci95_high {}", fmt_f64(hi));
    println!("sigma {}", fmt_f64(cfg.sigma));
    Ok(ExitCode::SUCCESS)
}

fn bench_cmd(a: &BenchArgs) -> mirrorgate::Result<ExitCode> {
    let workload = match a.solver {
        None => Workload::Engine { t: a.t },
        Some(OracleArg::Exact) => Workload::Solver { oracle: OracleMode::Exact },
        Some(OracleArg::Randomized) => Workload::Solver { oracle: OracleMode::Randomized },
    };
    let mut specs = Vec::new();
    for &s_m in &a.s_m {
        for &m in &a.m {
            specs.push(BenchSpec {
                m,
                n: a.n,
                s_m,
                iterations: a.iterations,
                workload,
                dense_baseline: a.dense_baseline,
                seed: a.seed,
            });
        }
    }
    let points = sweep(&specs, Execution::from_env())?;
    let mut csv = String::from(BenchPoint::CSV_HEADER);
    csv.push('\n');
    for p in &points {
        csv.push_str(&p.csv_row());
        csv.push('\n');
    }
    match &a.out {
        Some(path) => mirrorgate::io::write_atomic(path, |w| w.write_all(csv.as_bytes()))?,
        None => print!("{csv}"),
    }
    let violations = check_cost_law(&points);
    for v in &violations {
        eprintln!("cost law violated: {v}");
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn gen_cmd(a: &GenArgs) -> mirrorgate::Result<ExitCode> {
    let sparsity = match (a.s_n, a.s_m) {
        (Some(k), _) => Sparsity::PerRow(k),
        (None, Some(k)) => Sparsity::PerColumn(k),
        (None, None) => Sparsity::PerRow(a.n.min(3)),
    };
    let mut rng = Rng::new(a.seed);
    let spec = random_box_lp(&mut rng, &InstanceParams::box_lp(a.n, a.m, sparsity))?;
    let p = Problem::build(spec)?;
    write_problem_file(&p, &a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve_cmd(a, false),
        Command::Certify(a) => solve_cmd(a, true),
        Command::Montecarlo(a) => montecarlo_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Gen(a) => gen_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
