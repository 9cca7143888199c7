use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use flipcenter::encoding::{emit_dimacs, encode, parse_dimacs, xor_to_cnf, EncodeInput, ReachTable};
use flipcenter::heuristics::heuristic_solve;
use flipcenter::pipeline::{
    exact_solve, generate_instance, parse_edge_list, read_instance, read_solution, render_solution_pages, render_svg,
    run_strategy, validate_solution, write_instance, write_solution, Config, FileError, RunError,
};
use flipcenter::satbackend::{solve_internal, Budget, SatResult, SolveError};
use flipcenter::Instance;

const OK: u8 = 0;
const INVALID: u8 = 1;
const NO_ANSWER: u8 = 2;
const INTERNAL: u8 = 3;

/// Central triangulations under parallel flips.
#[derive(Parser)]
#[command(name = "flipcenter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a center and flip sequences for an instance.
    Solve(SolveArgs),
    /// Check a solution against its instance.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Write the formula for one distance vector as DIMACS (XNF for the xor formulation).
    Encode(EncodeArgs),
    /// Draw an input, a center or a whole solution as SVG.
    Render(RenderArgs),
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time the exact and heuristic solvers on generated instances.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [6usize, 7, 8])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve a DIMACS file with the built-in solver (exit 10 sat, 20 unsat).
    #[command(hide = true)]
    Sat {
        path: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Settings {
    /// key = value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    strategy: Option<String>,
    /// xor, cnf or auto.
    #[arg(long)]
    formulation: Option<String>,
    /// External DIMACS solver; `{}` stands for the formula path.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// The external solver reads XOR lines.
    #[arg(long)]
    solver_xor: bool,
    /// Seconds per SAT call.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    max_conflicts: Option<u64>,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_pruning: bool,
    #[arg(long)]
    suffix_start: Option<usize>,
    #[arg(long)]
    prefix_depths: Option<String>,
    /// Input indices for the subset strategy, comma separated.
    #[arg(long)]
    keep: Option<String>,
    #[arg(long)]
    seed_suffix: Option<usize>,
    /// Center for the fixed-center strategy: edge list or solution file.
    #[arg(long)]
    center: Option<PathBuf>,
}

impl Settings {
    fn load(&self) -> Result<Config, Failure> {
        let mut cfg = Config::default();
        if let Some(path) = &self.config {
            cfg.merge_str(&read_text(path)?).map_err(|e| Failure::invalid(e.to_string()))?;
        }
        let flags: [(&str, Option<String>); 12] = [
            ("strategy", self.strategy.clone()),
            ("formulation", self.formulation.clone()),
            ("solver_cmd", self.solver_cmd.clone()),
            ("solver_xor", self.solver_xor.then(|| "true".into())),
            ("timeout", self.timeout.map(|v| v.to_string())),
            ("max_conflicts", self.max_conflicts.map(|v| v.to_string())),
            ("limit", self.limit.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("pruning", self.no_pruning.then(|| "false".into())),
            ("suffix_start", self.suffix_start.map(|v| v.to_string())),
            ("prefix_depths", self.prefix_depths.clone()),
            ("keep", self.keep.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v).map_err(Failure::invalid)?;
            }
        }
        if let Some(s) = self.seed_suffix {
            cfg.seed_suffix = Some(s);
        }
        if let Some(c) = &self.center {
            cfg.center = Some(c.clone());
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    settings: Settings,
    /// Where to write the solution (stdout when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    instance: PathBuf,
    /// Rounds allowed per input, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    distances: Vec<u32>,
    #[command(flatten)]
    settings: Settings,
    /// Lower XOR constraints to plain clauses.
    #[arg(long)]
    lower: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    instance: PathBuf,
    /// Draw this solution's center; with --pages, every round too.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Which input to draw when no solution is given.
    #[arg(long, default_value_t = 0)]
    input: usize,
    /// Directory for one SVG per round.
    #[arg(long, requires = "solution")]
    pages: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn invalid(msg: impl Into<String>) -> Self {
        Failure { code: INVALID, msg: msg.into() }
    }
    fn internal(msg: impl Into<String>) -> Self {
        Failure { code: INTERNAL, msg: msg.into() }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Unknown(_) => Failure { code: NO_ANSWER, msg: e.to_string() },
            SolveError::Backend(_) => Failure::internal(e.to_string()),
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Solve(s) => s.into(),
            RunError::File(f) => f.into(),
            RunError::Settings(_) => Failure::invalid(e.to_string()),
            RunError::Heuristic(_) => Failure::internal(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::internal(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::internal(e.to_string())),
    }
}

fn solve(args: &SolveArgs) -> Result<u8, Failure> {
    let cfg = args.settings.load()?;
    let instance = read_instance(&args.instance)?;
    let cat = instance.catalog();
    let out = run_strategy(&instance, &cat, &cfg)?;
    validate_solution(&instance, &out.solution, &cat).map_err(|v| Failure::internal(format!("solver produced an invalid solution: {v}")))?;
    if let Some(cert) = &out.certificate {
        eprintln!("objective {} ({cert:?})", out.solution.objective);
    } else {
        eprintln!("objective {}", out.solution.objective);
    }
    emit(args.output.as_deref(), &write_solution(&out.solution))?;
    Ok(OK)
}

fn validate(instance: &Path, solution: &Path) -> Result<u8, Failure> {
    let instance = read_instance(instance)?;
    let solution = read_solution(solution)?;
    let cat = instance.catalog();
    match validate_solution(&instance, &solution, &cat) {
        Ok(()) => {
            println!("ok: objective {}", solution.objective);
            Ok(OK)
        }
        Err(v) => Err(Failure::invalid(format!("invalid solution: {v}"))),
    }
}

fn encode_cmd(args: &EncodeArgs) -> Result<u8, Failure> {
    let cfg = args.settings.load()?;
    let instance = read_instance(&args.instance)?;
    if args.distances.len() != instance.m() {
        return Err(Failure::invalid(format!("{} distances for {} inputs", args.distances.len(), instance.m())));
    }
    let cat = instance.catalog();
    let center = match &cfg.center {
        Some(p) => Some(instance.triangulation(parse_edge_list(&read_text(p)?)?).map_err(|e| Failure::invalid(format!("center: {e}")))?),
        None => None,
    };
    let reach = if cfg.pruning { ReachTable::compute(&instance, &cat) } else { ReachTable::unpruned(&instance) };
    let inp = EncodeInput { instance: &instance, catalog: &cat, reach: &reach, distances: &args.distances, fixed_center: center.as_ref() };
    let enc = encode(inp, cfg.formulation(), cfg.pruning);
    if enc.infeasible {
        eprintln!("unsatisfiable while encoding");
        return Ok(NO_ANSWER);
    }
    let text = if args.lower || enc.formula.xors.is_empty() {
        emit_dimacs(&xor_to_cnf(&enc.formula), false)
    } else {
        emit_dimacs(&enc.formula, true)
    }
    .map_err(|e| Failure::internal(e.to_string()))?;
    emit(args.output.as_deref(), &text)?;
    Ok(OK)
}

fn render(args: &RenderArgs) -> Result<u8, Failure> {
    let instance = read_instance(&args.instance)?;
    let svg = match &args.solution {
        Some(path) => {
            let sol = read_solution(path)?;
            if let Some(dir) = &args.pages {
                let cat = instance.catalog();
                let pages = render_solution_pages(&instance, &sol, &cat).map_err(|v| Failure::invalid(format!("invalid solution: {v}")))?;
                std::fs::create_dir_all(dir).map_err(|e| Failure::internal(e.to_string()))?;
                for (k, page) in pages.iter().enumerate() {
                    std::fs::write(dir.join(format!("page_{k:03}.svg")), page).map_err(|e| Failure::internal(e.to_string()))?;
                }
            }
            render_svg(&instance, &sol.center, &[])
        }
        None => {
            let t = instance.inputs.get(args.input).ok_or_else(|| Failure::invalid(format!("no input {}", args.input)))?;
            render_svg(&instance, t.edges(), &[])
        }
    };
    emit(args.output.as_deref(), &svg)?;
    Ok(OK)
}

fn gen(n: usize, m: usize, seed: u64, output: Option<&Path>) -> Result<u8, Failure> {
    if n < 3 || m < 1 {
        return Err(Failure::invalid("need n >= 3 and m >= 1"));
    }
    emit(output, &write_instance(&generate_instance(n, m, seed)))?;
    Ok(OK)
}

fn bench(sizes: &[usize], m: usize, count: u64, seed: u64) -> Result<u8, Failure> {
    println!("n\tm\tseed\texact\theuristic\texact_ms\theuristic_ms");
    for &n in sizes {
        for k in 0..count {
            let inst: Instance = generate_instance(n, m.max(1), seed + k);
            let cat = inst.catalog();
            let t0 = Instant::now();
            let exact = exact_solve(&inst, &cat, &Default::default(), &Default::default())?;
            let t1 = Instant::now();
            let heur = heuristic_solve(&inst, &cat, flipcenter::heuristics::DEFAULT_CANDIDATE_LIMIT).map_err(|e| Failure::internal(e.to_string()))?;
            let t2 = Instant::now();
            println!(
                "{n}\t{}\t{}\t{}\t{}\t{}\t{}",
                inst.m(),
                seed + k,
                exact.solution.objective,
                heur.objective,
                (t1 - t0).as_millis(),
                (t2 - t1).as_millis()
            );
        }
    }
    Ok(OK)
}

fn sat(path: &Path, seed: Option<u64>) -> Result<u8, Failure> {
    let f = parse_dimacs(&read_text(path)?).map_err(|e| Failure::invalid(e.to_string()))?;
    let f = if f.xors.is_empty() { f } else { xor_to_cnf(&f) };
    match solve_internal(&f, &Budget::unlimited(), seed.unwrap_or(0)).map_err(|e| Failure::invalid(e.to_string()))? {
        SatResult::Sat(model) => {
            let mut out = String::from("s SATISFIABLE\nv");
            for (v, &b) in model.iter().enumerate().skip(1) {
                out.push_str(&format!(" {}", if b { v as i64 } else { -(v as i64) }));
            }
            out.push_str(" 0\n");
            print!("{out}");
            Ok(10)
        }
        SatResult::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        SatResult::Unknown(_) => {
            println!("s UNKNOWN");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Validate { instance, solution } => validate(instance, solution),
        Command::Encode(a) => encode_cmd(a),
        Command::Render(a) => render(a),
        Command::Gen { n, m, seed, output } => gen(*n, *m, *seed, output.as_deref()),
        Command::Bench { sizes, m, count, seed } => bench(sizes, *m, *count, *seed),
        Command::Sat { path, seed } => sat(path, *seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
