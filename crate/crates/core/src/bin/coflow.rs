use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coflow_core::harness::{emit_cdf, emit_csv, emit_summary, run_scenario, Scenario};
use coflow_core::lowerbound::lower_bounds;
use coflow_core::model::{format_ratio, predicted_makespan, NetworkSpec};
use coflow_core::oracle::{brute_force_coflow, brute_force_flow, Limits};
use coflow_core::realizer::realize;
use coflow_core::schedulers::SchedulerKind;
use coflow_core::workload::{
    filter_by_flow_count, gen_instance, gen_speeds, parse_trace, read_instance, render_instance, Mixture, TraceStats,
};
use coflow_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "coflow",
    version,
    about = "Coflow makespan scheduling on parallel switch cores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Workload {
    Standard,
    Dense,
    Combined,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Flow,
    Coflow,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Number of coflows.
        #[arg(short = 'k', long, default_value_t = 25)]
        coflows: u32,
        /// Ports per core.
        #[arg(short = 'n', long, default_value_t = 10)]
        ports: u32,
        #[arg(short = 'm', long, default_value_t = 5)]
        cores: usize,
        /// Heterogeneity factor; speeds drawn from [1, m/h]. Omit for unit speeds.
        #[arg(long)]
        heterogeneity: Option<usize>,
        #[arg(long, value_enum, default_value_t = Workload::Standard)]
        workload: Workload,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a scenario file and write per-trial rows as CSV.
    Run {
        scenario: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
        /// Per-core completion samples.
        #[arg(long)]
        cdf: Option<PathBuf>,
        /// Per-point quartile table.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Parse a coflow-benchmark trace and print statistics.
    Trace {
        path: PathBuf,
        /// Report coflow counts with at least this many flows.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        threshold: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustively solve a small instance.
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Both)]
        level: Level,
        #[arg(long, default_value_t = 2_000_000)]
        max_states: u128,
        /// Enumerate every core relabeling.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Schedule an instance and dump the realized slices.
    Realize {
        instance: PathBuf,
        #[arg(short, long, default_value = "flpt")]
        scheduler: SchedulerKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

fn gen(
    seed: u64,
    coflows: u32,
    ports: u32,
    cores: usize,
    heterogeneity: Option<usize>,
    workload: Workload,
) -> Result<String> {
    let mixture = match workload {
        Workload::Standard => Mixture::standard(ports)?,
        Workload::Dense => Mixture::dense(ports)?,
        Workload::Combined => Mixture::combined(ports)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instance = gen_instance(coflows, ports, cores, &mixture, &mut rng)?;
    if let Some(h) = heterogeneity {
        let net = NetworkSpec::with_speeds(ports, gen_speeds(cores, h, &mut rng)?)?;
        instance = instance.with_network(net)?;
    }
    Ok(render_instance(&instance))
}

fn trace(path: &Path, thresholds: &[usize]) -> Result<String> {
    let (racks, coflows) = parse_trace(path)?;
    let st = TraceStats::of(racks, &coflows);
    let mut s = String::new();
    let _ = writeln!(s, "racks {}", st.racks);
    let _ = writeln!(s, "coflows {}", st.coflows);
    let _ = writeln!(s, "flows_per_coflow {} {}", st.min_flows, st.max_flows);
    let _ = writeln!(s, "flow_size_mb {} {}", st.min_size, st.max_size);
    for &t in thresholds {
        let _ = writeln!(s, "threshold {t} {}", filter_by_flow_count(&coflows, t).len());
    }
    Ok(s)
}

fn oracle(path: &Path, level: Level, max_states: u128, symmetry: bool) -> Result<String> {
    let instance = read_instance(path)?;
    let limits = Limits { max_states, symmetry };
    let lb = lower_bounds(&instance);
    let mut s = String::new();
    let _ = writeln!(s, "port_lb {}", format_ratio(&lb.port_lb));
    let _ = writeln!(s, "combined_lb {}", format_ratio(&lb.combined));
    let mut solve = |name: &str, r: coflow_core::oracle::OracleResult| {
        let cores: Vec<String> = r
            .witness
            .flow_cores()
            .iter()
            .map(|c| c.map_or("-".into(), |h| (h + 1).to_string()))
            .collect();
        let _ = writeln!(s, "{name}_opt {}", format_ratio(&r.optimum));
        let _ = writeln!(s, "{name}_explored {}", r.explored);
        let _ = writeln!(s, "{name}_cores {}", cores.join(" "));
    };
    if matches!(level, Level::Flow | Level::Both) {
        solve("flow", brute_force_flow(&instance, limits)?);
    }
    if matches!(level, Level::Coflow | Level::Both) {
        solve("coflow", brute_force_coflow(&instance, limits)?);
    }
    Ok(s)
}

fn realize_cmd(path: &Path, kind: SchedulerKind) -> Result<String> {
    let instance = read_instance(path)?;
    let assignment = kind.schedule(&instance)?;
    let predicted = predicted_makespan(&assignment, &instance)?;
    let realized = realize(&assignment, &instance)?;
    let actual = realized.makespan(&instance);
    if actual.overall != predicted.overall {
        return Err(Error::Internal(format!(
            "realized makespan {} differs from predicted {}",
            actual.overall, predicted.overall
        )));
    }
    let mut s = format!("# {kind} makespan {}\n", format_ratio(&actual.overall));
    s.push_str(&realized.dump(&instance));
    Ok(s)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            seed,
            coflows,
            ports,
            cores,
            heterogeneity,
            workload,
            output,
        } => write_out(
            output.as_deref(),
            &gen(seed, coflows, ports, cores, heterogeneity, workload)?,
        ),
        Command::Run {
            scenario,
            seed,
            output,
            cdf,
            summary,
        } => {
            let mut sc = Scenario::load(&scenario)?;
            sc.seed = seed;
            let report = run_scenario(&sc)?;
            emit_csv(&report, &output)?;
            if let Some(p) = cdf {
                emit_cdf(&report, &p)?;
            }
            if let Some(p) = summary {
                emit_summary(&report, &p)?;
            }
            for e in &report.errors {
                eprintln!("{} {} trial {}: {}", e.point, e.scheduler, e.trial, e.message);
            }
            if report.rows.is_empty() && !report.errors.is_empty() {
                return Err(Error::InvalidArgument("every trial failed".into()));
            }
            Ok(())
        }
        Command::Trace {
            path,
            threshold,
            output,
        } => write_out(output.as_deref(), &trace(&path, &threshold)?),
        Command::Oracle {
            instance,
            level,
            max_states,
            no_symmetry,
            output,
        } => write_out(output.as_deref(), &oracle(&instance, level, max_states, !no_symmetry)?),
        Command::Realize {
            instance,
            scheduler,
            output,
        } => write_out(output.as_deref(), &realize_cmd(&instance, scheduler)?),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
