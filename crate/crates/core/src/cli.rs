//! Command-line front end. Exit codes: 0 feasible or verified, 1 infeasible
//! or refuted, 2 usage or input error.

use std::ffi::OsString;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::edge::solve_edsp;
use crate::error::{Error, Result};
use crate::gen::clique::find_colorful_clique;
use crate::gen::mcc::{generate_mcc, MccParams};
use crate::gen::psi::{generate_psi, PatternGraph, PsiParams};
use crate::gen::random::{random_instance, RandomParams};
use crate::gen::{GenCertificate, Witness};
use crate::graph::{verify_solution, Instance, Mode, Solution};
use crate::io::{parse_instance, parse_solution, write_instance, write_solution};
use crate::kernel::solve_kdspc;
use crate::oracle::brute_force_oracle;
use crate::transform::solve_with_congestion;

#[derive(Parser, Debug)]
#[command(name = "dspc", version, about = "Disjoint shortest paths with congestion on DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Route every demand along a shortest path within the congestion budget.
    Solve(SolveArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Solve by exhaustive search (small instances only).
    Oracle(OracleArgs),
    /// Cross-check solvers on a seeded workload.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Dnc,
    Kernel,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "dnc")]
    algo: Algo,
    /// Override the mode stated in the instance file.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    solution: PathBuf,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    instances: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Dnc,
    Transform,
    Kernel,
    Edge,
    Mcc,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Block gadgets from partitioned subgraph isomorphism, vertex mode.
    Psi {
        #[command(flatten)]
        out: Output,
        #[arg(long, value_enum, default_value = "k33")]
        pattern: Pattern,
        #[arg(long, default_value_t = 2)]
        max_class: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 2)]
        congestion: u32,
        /// Also write the planted routing.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Planar grid from multi-colored clique, edge mode.
    Mcc {
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        /// Force a colorful clique into the graph.
        #[arg(long)]
        plant: bool,
        /// Also write the routing induced by a colorful clique, or `s 0`.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Random weighted DAG with random demands.
    Random {
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
        #[arg(long, default_value_t = 2)]
        max_weight: u64,
        #[arg(long, default_value_t = 3)]
        demands: usize,
        #[arg(long, default_value_t = 1)]
        congestion: u32,
        #[arg(long, default_value = "vertex")]
        mode: Mode,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Pattern {
    K33,
    Cube,
}

fn init_logging() {
    let level = match std::env::var("DSPC_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("info") => LevelFilter::Info,
        Ok("debug") => LevelFilter::Debug,
        _ => LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn read(path: &FsPath) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&FsPath>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Gen { family } => generate(family).map(|_| true),
        Command::Oracle(args) => {
            let inst = parse_instance(&read(&args.input)?)?;
            let sol = brute_force_oracle(&inst)?;
            emit(args.output.as_deref(), &write_solution(sol.as_ref()))?;
            Ok(sol.is_some())
        }
        Command::Bench(args) => bench(args),
    }
}

fn solve(args: SolveArgs) -> Result<bool> {
    let mut inst = parse_instance(&read(&args.input)?)?;
    if let Some(mode) = args.mode {
        if mode != inst.mode() {
            inst = Instance::new(inst.dag().clone(), inst.demands().to_vec(), inst.congestion(), mode)?;
        }
    }
    let start = Instant::now();
    let sol = match (args.algo, inst.mode()) {
        (Algo::Dnc, Mode::Vertex) => solve_with_congestion(&inst)?,
        (Algo::Dnc, Mode::Edge) => solve_edsp(&inst)?,
        (Algo::Kernel, Mode::Vertex) => solve_kdspc(&inst)?,
        (Algo::Kernel, Mode::Edge) => return Err(Error::Unsupported("the kernel solver is vertex-mode only".into())),
    };
    info!("solved {} demands in {:.2?}", inst.k(), start.elapsed());
    emit(args.output.as_deref(), &write_solution(sol.as_ref()))?;
    Ok(sol.is_some())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let inst = parse_instance(&read(&args.input)?)?;
    let Some(sol) = parse_solution(&read(&args.solution)?)? else {
        eprintln!("solution file reports no routing");
        return Ok(false);
    };
    if sol.len() != inst.k() {
        eprintln!("solution has {} paths for {} demands", sol.len(), inst.k());
        return Ok(false);
    }
    let report = verify_solution(&inst, &sol)?;
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(report.feasible)
}

fn witness_line(w: &Witness) -> String {
    let (name, ids) = match w {
        Witness::Clique(v) => ("clique", v.iter().map(|x| x + 1).collect::<Vec<_>>()),
        Witness::Homomorphism(v) => ("homomorphism", v.clone()),
    };
    let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
    format!("witness {name} {}", ids.join(" "))
}

fn generate(family: Family) -> Result<()> {
    match family {
        Family::Psi { out, pattern, max_class, edge_prob, congestion, solution } => {
            let pattern_graph = match pattern {
                Pattern::K33 => PatternGraph::k33(),
                Pattern::Cube => PatternGraph::cube(),
            };
            let params = PsiParams { pattern: pattern_graph, max_class, edge_prob, congestion };
            let (generated, cert) = generate_psi(out.seed, &params)?;
            let comments = vec![
                "family psi".to_string(),
                format!("seed {}", out.seed),
                format!(
                    "params pattern={} max-class={max_class} edge-prob={edge_prob} congestion={congestion}",
                    if matches!(pattern, Pattern::K33) { "k33" } else { "cube" }
                ),
                format!("host classes {:?}", generated.host.sizes()),
                witness_line(&cert.witness),
            ];
            write_generated(&generated.instance, &comments, &out, solution.as_deref(), Some(&cert))
        }
        Family::Mcc { out, vertices, colors, edge_prob, plant, solution } => {
            let params = MccParams { vertices, colors, edge_prob, plant };
            let (grid, cert) = generate_mcc(out.seed, &params)?;
            let r = &grid.report;
            let mut comments = vec![
                "family mcc".to_string(),
                format!("seed {}", out.seed),
                format!("params vertices={vertices} colors={colors} edge-prob={edge_prob} plant={plant}"),
                format!("colors {:?}", grid.colored.colors),
                format!("graph edges {:?}", grid.colored.graph.edges()),
                format!(
                    "grid vertices={} edges={} merges={} distance={}",
                    r.vertex_count, r.edge_count, r.merges, r.demand_distance
                ),
            ];
            comments.push(cert.as_ref().map_or("witness none".to_string(), |c| witness_line(&c.witness)));
            write_generated(&grid.instance, &comments, &out, solution.as_deref(), cert.as_ref())
        }
        Family::Random { out, vertices, edge_prob, max_weight, demands, congestion, mode } => {
            let params = RandomParams { vertices, edge_prob, max_weight, demands, congestion, mode, ..RandomParams::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(out.seed);
            let inst = random_instance(&mut rng, &params)?;
            let comments = vec![
                "family random".to_string(),
                format!("seed {}", out.seed),
                format!(
                    "params vertices={vertices} edge-prob={edge_prob} max-weight={max_weight} demands={demands} congestion={congestion} mode={mode}"
                ),
            ];
            write_generated(&inst, &comments, &out, None, None)
        }
    }
}

fn write_generated(
    inst: &Instance,
    comments: &[String],
    out: &Output,
    solution: Option<&FsPath>,
    cert: Option<&GenCertificate>,
) -> Result<()> {
    emit(out.output.as_deref(), &write_instance(inst, comments))?;
    if let Some(path) = solution {
        emit(Some(path), &write_solution(cert.map(|c| &c.expected_solution)))?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<bool> {
    let start = Instant::now();
    let (mut agree, mut feasible) = (0, 0);
    for i in 0..args.instances {
        let seed = args.seed + i;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ours, truth): (Option<Solution>, bool) = match args.suite {
            Suite::Dnc | Suite::Transform | Suite::Edge => {
                let (c, mode) = match args.suite {
                    Suite::Dnc => (1, Mode::Vertex),
                    Suite::Transform => (rng.gen_range(1..=2), Mode::Vertex),
                    _ => (rng.gen_range(1..=2), Mode::Edge),
                };
                let params = RandomParams {
                    vertices: rng.gen_range(2..=7),
                    demands: rng.gen_range(1..=3),
                    congestion: c,
                    mode,
                    ..RandomParams::default()
                };
                let inst = random_instance(&mut rng, &params)?;
                let ours = if mode == Mode::Edge { solve_edsp(&inst)? } else { solve_with_congestion(&inst)? };
                (ours, brute_force_oracle(&inst)?.is_some())
            }
            Suite::Kernel => {
                let k = rng.gen_range(4..=5);
                let params = RandomParams {
                    vertices: rng.gen_range(2..=6),
                    demands: k,
                    congestion: k as u32 - 1,
                    ..RandomParams::default()
                };
                let inst = random_instance(&mut rng, &params)?;
                (solve_kdspc(&inst)?, solve_with_congestion(&inst)?.is_some())
            }
            Suite::Mcc => {
                let params = MccParams { vertices: rng.gen_range(2..=5), ..MccParams::default() };
                let (grid, _) = generate_mcc(seed, &params)?;
                (solve_edsp(&grid.instance)?, find_colorful_clique(&grid.colored).is_some())
            }
        };
        agree += (ours.is_some() == truth) as u64;
        feasible += ours.is_some() as u64;
    }
    info!("bench finished in {:.2?}", start.elapsed());
    println!(
        "suite={:?} instances={} feasible={feasible} agree={agree}",
        args.suite,
        args.instances
    );
    Ok(agree == args.instances)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("dspc").chain(args.iter().copied()))
    }

    #[test]
    fn solve_then_verify() {
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
        std::fs::write(path("i"), "p dsp 4 4 2 1 edge\na 1 2 1\na 1 3 1\na 2 4 1\na 3 4 1\nd 1 4\nd 1 4\n").unwrap();
        assert_eq!(run_args(&["solve", "-i", &path("i"), "-o", &path("s")]), 0);
        assert_eq!(run_args(&["verify", "-i", &path("i"), "-s", &path("s")]), 0);
        assert_eq!(run_args(&["solve", "--mode", "vertex", "-i", &path("i"), "-o", &path("s2")]), 1);
        assert_eq!(std::fs::read_to_string(path("s2")).unwrap(), "s 0\n");
        std::fs::write(path("t"), "s 1\np 1 2 1 2 4\np 2 2 1 2 4\n").unwrap();
        assert_eq!(run_args(&["verify", "-i", &path("i"), "-s", &path("t")]), 1);
        assert_eq!(run_args(&["solve", "--algo", "kernel", "-i", &path("i")]), 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]), 2);
        assert_eq!(run_args(&["solve", "-i", "/nonexistent/file"]), 2);
        assert_eq!(run_args(&["--help"]), 0);
    }

    #[test]
    fn generated_files_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
        for family in ["psi", "mcc", "random"] {
            let (a, b) = (path(&format!("{family}-a")), path(&format!("{family}-b")));
            assert_eq!(run_args(&["gen", family, "--seed", "7", "-o", &a]), 0);
            assert_eq!(run_args(&["gen", family, "--seed", "7", "-o", &b]), 0);
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        }
    }

    #[test]
    fn planted_certificates_verify() {
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
        assert_eq!(run_args(&["gen", "psi", "--seed", "1", "-o", &path("p"), "--solution", &path("ps")]), 0);
        assert_eq!(run_args(&["verify", "-i", &path("p"), "-s", &path("ps")]), 0);
        assert_eq!(run_args(&["gen", "mcc", "--seed", "1", "--plant", "-o", &path("m"), "--solution", &path("ms")]), 0);
        assert_eq!(run_args(&["verify", "-i", &path("m"), "-s", &path("ms")]), 0);
        assert_eq!(run_args(&["solve", "-i", &path("m"), "-o", &path("mo")]), 0);
        assert_eq!(run_args(&["verify", "-i", &path("m"), "-s", &path("mo")]), 0);
    }

    #[test]
    fn oracle_and_bench() {
        let dir = tempfile::tempdir().unwrap();
        let i = dir.path().join("i");
        std::fs::write(&i, "p dsp 3 2 2 1 vertex\na 1 2 1\na 2 3 1\nd 1 3\nd 2 3\n").unwrap();
        assert_eq!(run_args(&["oracle", "-i", i.to_str().unwrap(), "-o", dir.path().join("o").to_str().unwrap()]), 1);
        assert_eq!(run_args(&["bench", "--suite", "dnc", "--instances", "20"]), 0);
    }
}
