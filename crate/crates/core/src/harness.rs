//! Experiment sweeps: generate instances per scenario point and trial, run
//! each scheduler, realize the schedule and record makespan ratios against
//! both lower bounds.
//!
//! Trials are independent. Each one seeds its own RNG from
//! `(seed, point, trial)`, so they run in parallel and any single row can be
//! reproduced in isolation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lowerbound::lower_bounds;
use crate::model::{predicted_makespan, to_f64, Coflow, Instance, NetworkSpec, Time};
use crate::realizer::{realize, simulate_discrete};
use crate::schedulers::SchedulerKind;
use crate::workload::{filter_by_flow_count, gen_instance, gen_speeds, parse_trace, CoflowDescription, Mixture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkloadKind {
    #[default]
    Standard,
    Dense,
    Combined,
    Custom,
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CdfBackend {
    #[default]
    None,
    /// Per-core spans of the exact realization.
    Realize,
    /// Completion steps of the slot simulator (integral speeds only).
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureEntry {
    pub w_min: u32,
    pub w_max: u32,
    pub l_min: u64,
    pub l_max: u64,
    pub percent: u32,
}

/// A sweep definition, usually read from TOML.
///
/// ```toml
/// name = "cores"
/// cores = [5, 10, 15, 20, 25]
/// coflows = [25]
/// ports = 10
/// trials = 100
/// schedulers = ["fls", "flpt", "weaver", "cls"]
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub cores: Vec<usize>,
    #[serde(default)]
    pub coflows: Vec<u32>,
    #[serde(default = "default_ports")]
    pub ports: u32,
    #[serde(default)]
    pub workload: WorkloadKind,
    #[serde(default)]
    pub mixture: Vec<MixtureEntry>,
    #[serde(default)]
    pub trace: Option<PathBuf>,
    #[serde(default)]
    pub thresholds: Vec<usize>,
    /// Heterogeneity factors; empty means identical unit-speed cores.
    #[serde(default)]
    pub heterogeneity: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(deserialize_with = "de_schedulers")]
    pub schedulers: Vec<SchedulerKind>,
    #[serde(default)]
    pub cdf: CdfBackend,
}

fn default_ports() -> u32 {
    10
}

fn default_trials() -> u32 {
    100
}

fn de_schedulers<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<SchedulerKind>, D::Error> {
    let names: Vec<String> = Vec::deserialize(d)?;
    names
        .iter()
        .map(|n| n.parse().map_err(serde::de::Error::custom))
        .collect()
}

/// One coordinate of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub cores: usize,
    pub coflows: Option<u32>,
    pub threshold: Option<usize>,
    pub heterogeneity: Option<usize>,
}

impl Point {
    pub fn label(&self) -> String {
        let mut s = format!("m={}", self.cores);
        if let Some(k) = self.coflows {
            let _ = write!(s, " K={k}");
        }
        if let Some(t) = self.threshold {
            let _ = write!(s, " thr={t}");
        }
        if let Some(h) = self.heterogeneity {
            let _ = write!(s, " h={h}");
        }
        s
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s = Scenario::from_toml(&text)?;
        // trace paths are relative to the scenario file
        if let (Some(t), Some(dir)) = (&s.trace, path.parent()) {
            if t.is_relative() {
                s.trace = Some(dir.join(t));
            }
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("scenario {}: {m}", self.name)));
        if self.name.is_empty() || self.name.contains([',', '\n', '"']) {
            return bad("name must be non-empty without commas, quotes or newlines");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.cores.is_empty() || self.cores.contains(&0) {
            return bad("cores axis must be non-empty and positive");
        }
        if self.schedulers.is_empty() {
            return bad("no schedulers");
        }
        if self.ports == 0 {
            return bad("ports must be positive");
        }
        match self.workload {
            WorkloadKind::Trace => {
                if self.trace.is_none() {
                    return bad("trace workload needs `trace`");
                }
            }
            _ => {
                if self.coflows.is_empty() {
                    return bad("coflows axis must be non-empty");
                }
            }
        }
        if self.workload == WorkloadKind::Custom && self.mixture.is_empty() {
            return bad("custom workload needs [[mixture]] entries");
        }
        for &h in &self.heterogeneity {
            if let Some(&m) = self.cores.iter().find(|&&m| h == 0 || h > m) {
                return bad(&format!("heterogeneity {h} outside 1..={m}"));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<Point> {
        let ks: Vec<Option<u32>> = match self.workload {
            WorkloadKind::Trace => vec![None],
            _ => self.coflows.iter().copied().map(Some).collect(),
        };
        let thrs: Vec<Option<usize>> = if self.thresholds.is_empty() {
            vec![None]
        } else {
            self.thresholds.iter().copied().map(Some).collect()
        };
        let hs: Vec<Option<usize>> = if self.heterogeneity.is_empty() {
            vec![None]
        } else {
            self.heterogeneity.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &cores in &self.cores {
            for &coflows in &ks {
                for &threshold in &thrs {
                    for &heterogeneity in &hs {
                        out.push(Point {
                            cores,
                            coflows,
                            threshold,
                            heterogeneity,
                        });
                    }
                }
            }
        }
        out
    }

    fn mixture(&self, ports: u32) -> Result<Mixture> {
        match self.workload {
            WorkloadKind::Standard | WorkloadKind::Trace => Mixture::standard(ports),
            WorkloadKind::Dense => Mixture::dense(ports),
            WorkloadKind::Combined => Mixture::combined(ports),
            WorkloadKind::Custom => Mixture::new(
                self.mixture
                    .iter()
                    .map(|e| Ok((CoflowDescription::new(e.w_min, e.w_max, e.l_min, e.l_max)?, e.percent)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one `(point, trial)` cell of a sweep.
pub fn child_seed(seed: u64, point: usize, trial: u32) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ point as u64) ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub point: String,
    pub scheduler: SchedulerKind,
    pub trial: u32,
    pub makespan: f64,
    pub port_lb: f64,
    pub combined_lb: f64,
    pub ratio_port: f64,
    pub ratio_combined: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub point: String,
    pub scheduler: SchedulerKind,
    pub trial: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfSample {
    pub point: String,
    pub scheduler: SchedulerKind,
    pub trial: u32,
    /// 1-based core index.
    pub core: usize,
    pub completion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

/// Type-7 (linear interpolation) quartiles plus extremes.
pub fn quartiles(samples: &[f64]) -> Result<Quartiles> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("quartiles of an empty sample".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = (v.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(v.len() - 1);
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    Ok(Quartiles {
        q1: q(0.25),
        q2: q(0.5),
        q3: q(0.75),
        min: v[0],
        max: v[v.len() - 1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub point: String,
    pub scheduler: SchedulerKind,
    pub trials: usize,
    pub mean: f64,
    pub mean_combined: f64,
    pub spread: Quartiles,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentReport {
    pub scenario: String,
    pub rows: Vec<Row>,
    pub errors: Vec<RowError>,
    pub cdf: Vec<CdfSample>,
}

impl ExperimentReport {
    /// `ratio_port` statistics per `(point, scheduler)`, in first-seen order.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut keys: Vec<(String, SchedulerKind)> = Vec::new();
        for r in &self.rows {
            let key = (r.point.clone(), r.scheduler);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.into_iter()
            .map(|(point, scheduler)| {
                let rows: Vec<&Row> = self
                    .rows
                    .iter()
                    .filter(|r| r.point == point && r.scheduler == scheduler)
                    .collect();
                let ratios: Vec<f64> = rows.iter().map(|r| r.ratio_port).collect();
                let n = rows.len() as f64;
                Aggregate {
                    trials: rows.len(),
                    mean: ratios.iter().sum::<f64>() / n,
                    mean_combined: rows.iter().map(|r| r.ratio_combined).sum::<f64>() / n,
                    spread: quartiles(&ratios).expect("non-empty group"),
                    point,
                    scheduler,
                }
            })
            .collect()
    }

    pub fn aggregate(&self, point: &str, scheduler: SchedulerKind) -> Option<Aggregate> {
        self.aggregates()
            .into_iter()
            .find(|a| a.point == point && a.scheduler == scheduler)
    }
}

struct TrialOutput {
    rows: Vec<Row>,
    errors: Vec<RowError>,
    cdf: Vec<CdfSample>,
}

fn build_instance(
    scenario: &Scenario,
    point: &Point,
    trace: Option<&(u32, Vec<Coflow>)>,
    rng: &mut ChaCha8Rng,
) -> Result<Instance> {
    let mut instance = match trace {
        Some((racks, coflows)) => {
            let kept = filter_by_flow_count(coflows, point.threshold.unwrap_or(0));
            Instance::new(NetworkSpec::identical(point.cores, *racks)?, kept)?
        }
        None => {
            let k = point.coflows.expect("synthetic points carry K");
            gen_instance(k, scenario.ports, point.cores, &scenario.mixture(scenario.ports)?, rng)?
        }
    };
    if let Some(h) = point.heterogeneity {
        let speeds = gen_speeds(point.cores, h, rng)?;
        let net = NetworkSpec::with_speeds(instance.network().ports(), speeds)?;
        instance = instance.with_network(net)?;
    }
    Ok(instance)
}

/// Regenerates the instance behind one `(point, trial)` cell.
pub fn trial_instance(scenario: &Scenario, point_index: usize, trial: u32) -> Result<Instance> {
    let points = scenario.points();
    let point = points
        .get(point_index)
        .ok_or_else(|| Error::InvalidArgument(format!("no point {point_index}")))?;
    let trace = load_trace(scenario)?;
    let mut rng = ChaCha8Rng::seed_from_u64(child_seed(scenario.seed, point_index, trial));
    build_instance(scenario, point, trace.as_ref(), &mut rng)
}

fn load_trace(scenario: &Scenario) -> Result<Option<(u32, Vec<Coflow>)>> {
    match (scenario.workload, &scenario.trace) {
        (WorkloadKind::Trace, Some(p)) => parse_trace(p).map(Some),
        _ => Ok(None),
    }
}

/// Flow-level list scheduling must stay within `(3 - 2/m)` of the combined
/// bound and coflow list scheduling within `2m` of the port bound.
fn check_bounds(kind: SchedulerKind, m: usize, makespan: Time, port_lb: Time, combined: Time) -> Result<()> {
    let m_t = Time::from_integer(m as i64);
    let (factor, base, what) = match kind {
        SchedulerKind::Fls | SchedulerKind::Flpt => {
            (Time::from_integer(3) - Time::new(2, m as i64), combined, "combined")
        }
        SchedulerKind::Cls => (m_t * 2, port_lb, "port"),
        _ => return Ok(()),
    };
    if makespan > factor * base {
        return Err(Error::BoundViolation(format!(
            "{kind} makespan {makespan} exceeds {factor} x {what} bound {base} at m = {m}"
        )));
    }
    Ok(())
}

fn run_trial(
    scenario: &Scenario,
    point_index: usize,
    point: &Point,
    trial: u32,
    trace: Option<&(u32, Vec<Coflow>)>,
) -> Result<TrialOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(child_seed(scenario.seed, point_index, trial));
    let instance = build_instance(scenario, point, trace, &mut rng)?;
    let label = point.label();
    let mut out = TrialOutput {
        rows: Vec::new(),
        errors: Vec::new(),
        cdf: Vec::new(),
    };
    let row_error = |kind: SchedulerKind, message: String| RowError {
        point: label.clone(),
        scheduler: kind,
        trial,
        message,
    };
    let lbs = lower_bounds(&instance);
    for &kind in &scenario.schedulers {
        if lbs.port_lb.is_zero() {
            out.errors.push(row_error(kind, "empty instance".into()));
            continue;
        }
        let assignment = match kind.schedule(&instance) {
            Ok(a) => a,
            Err(e @ Error::NetworkMismatch { .. }) => {
                out.errors.push(row_error(kind, e.to_string()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let predicted = predicted_makespan(&assignment, &instance)?;
        let realized = realize(&assignment, &instance)?.makespan(&instance);
        if realized.overall != predicted.overall {
            return Err(Error::Internal(format!(
                "{kind}: realized makespan {} differs from ledger {}",
                realized.overall, predicted.overall
            )));
        }
        let makespan = predicted.overall;
        if instance.network().is_identical() {
            check_bounds(kind, point.cores, makespan, lbs.port_lb, lbs.combined)?;
        }
        out.rows.push(Row {
            scenario: scenario.name.clone(),
            point: label.clone(),
            scheduler: kind,
            trial,
            makespan: to_f64(&makespan),
            port_lb: to_f64(&lbs.port_lb),
            combined_lb: to_f64(&lbs.combined),
            ratio_port: to_f64(&(makespan / lbs.port_lb)),
            ratio_combined: to_f64(&(makespan / lbs.combined)),
        });
        let completions: Vec<f64> = match scenario.cdf {
            CdfBackend::None => continue,
            CdfBackend::Realize => realized.per_core.iter().map(to_f64).collect(),
            CdfBackend::Discrete => match simulate_discrete(&assignment, &instance) {
                Ok(run) => run.core_completion.iter().map(|&c| c as f64).collect(),
                Err(e) => {
                    out.errors.push(row_error(kind, e.to_string()));
                    continue;
                }
            },
        };
        out.cdf
            .extend(completions.into_iter().enumerate().map(|(h, completion)| CdfSample {
                point: label.clone(),
                scheduler: kind,
                trial,
                core: h + 1,
                completion,
            }));
    }
    Ok(out)
}

pub fn run_scenario(scenario: &Scenario) -> Result<ExperimentReport> {
    scenario.validate()?;
    let trace = load_trace(scenario)?;
    let points = scenario.points();
    let cells: Vec<(usize, u32)> = (0..points.len())
        .flat_map(|p| (0..scenario.trials).map(move |t| (p, t)))
        .collect();
    let outputs = cells
        .par_iter()
        .map(|&(p, t)| run_trial(scenario, p, &points[p], t, trace.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExperimentReport {
        scenario: scenario.name.clone(),
        ..Default::default()
    };
    for o in outputs {
        report.rows.extend(o.rows);
        report.errors.extend(o.errors);
        report.cdf.extend(o.cdf);
    }
    Ok(report)
}

pub const CSV_HEADER: &str = "scenario,point,scheduler,trial,makespan,port_lb,combined_lb,ratio_port,ratio_combined";
pub const CDF_HEADER: &str = "scenario,point,scheduler,trial,core,completion";
pub const SUMMARY_HEADER: &str = "scenario,point,scheduler,trials,mean,mean_combined,q1,q2,q3,min,max";

pub fn render_csv(report: &ExperimentReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.point,
            r.scheduler,
            r.trial,
            r.makespan,
            r.port_lb,
            r.combined_lb,
            r.ratio_port,
            r.ratio_combined
        );
    }
    s
}

pub fn render_cdf(report: &ExperimentReport) -> String {
    let mut s = String::from(CDF_HEADER);
    s.push('\n');
    for c in &report.cdf {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            report.scenario, c.point, c.scheduler, c.trial, c.core, c.completion
        );
    }
    s
}

pub fn render_summary(report: &ExperimentReport) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for a in report.aggregates() {
        let q = a.spread;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            report.scenario, a.point, a.scheduler, a.trials, a.mean, a.mean_combined, q.q1, q.q2, q.q3, q.min, q.max
        );
    }
    s
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_file(path, &render_csv(report))
}

pub fn emit_cdf(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_file(path, &render_cdf(report))
}

pub fn emit_summary(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_file(path, &render_summary(report))
}

/// Reads rows back from [`render_csv`] output.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let origin = Path::new("<csv>");
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::parse(origin, 1, "unexpected header")),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let line = i + 1;
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 9 {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("expected 9 columns, got {}", cols.len()),
                ));
            }
            let f = |c: &str| {
                c.parse::<f64>()
                    .map_err(|_| Error::parse(origin, line, format!("bad number `{c}`")))
            };
            Ok(Row {
                scenario: cols[0].to_string(),
                point: cols[1].to_string(),
                scheduler: cols[2].parse()?,
                trial: cols[3].parse().map_err(|_| Error::parse(origin, line, "bad trial"))?,
                makespan: f(cols[4])?,
                port_lb: f(cols[5])?,
                combined_lb: f(cols[6])?,
                ratio_port: f(cols[7])?,
                ratio_combined: f(cols[8])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Defaults overridden key by key with `extra`.
    fn scenario(extra: &str) -> Scenario {
        let mut table: toml::Table = toml::from_str(
            "name = \"t\"\ncores = [1]\ncoflows = [1]\ntrials = 1\nschedulers = [\"fls\", \"flpt\", \"weaver\"]",
        )
        .unwrap();
        table.extend(toml::from_str::<toml::Table>(extra).unwrap());
        Scenario::from_toml(&toml::to_string(&table).unwrap()).unwrap()
    }

    #[test]
    fn quartiles_textbook() {
        let q = quartiles(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(q.q2, 2.5);
        assert_eq!((q.q1, q.q3), (1.75, 3.25));
        assert_eq!((q.min, q.max), (1.0, 4.0));
        let one = quartiles(&[3.5]).unwrap();
        assert!([one.q1, one.q2, one.q3, one.min, one.max].iter().all(|&x| x == 3.5));
        assert!(quartiles(&[]).is_err());
    }

    #[test]
    fn quartiles_ordered_on_uniform_samples() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<f64> = (0..100).map(|_| rng.gen::<f64>()).collect();
        let q = quartiles(&v).unwrap();
        assert!(q.min <= q.q1 && q.q1 < q.q2 && q.q2 < q.q3 && q.q3 <= q.max);
    }

    #[test]
    fn single_core_flow_level_ratio_is_one() {
        let r = run_scenario(&scenario("seed = 3")).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r
            .rows
            .iter()
            .all(|row| row.ratio_port == 1.0 && row.ratio_combined == 1.0));
    }

    #[test]
    fn same_seed_same_csv() {
        let s = scenario("seed = 8\ncores = [2, 3]\ncoflows = [4, 6]\ntrials = 3");
        assert_eq!(
            render_csv(&run_scenario(&s).unwrap()),
            render_csv(&run_scenario(&s).unwrap())
        );
    }

    #[test]
    fn mismatched_scheduler_is_a_row_error() {
        let s = Scenario::from_toml(
            "name = \"h\"\ncores = [4]\ncoflows = [3]\nheterogeneity = [1]\ntrials = 2\nschedulers = [\"fls\", \"flpt-h\"]",
        )
        .unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.errors.len(), 2);
        assert!(r.errors.iter().all(|e| e.scheduler == SchedulerKind::Fls));
        assert_eq!(r.rows.len(), 2);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let base = "name = \"x\"\ncores = [2]\ncoflows = [2]\nschedulers = [\"fls\"]\n";
        assert!(Scenario::from_toml(base).is_ok());
        assert!(Scenario::from_toml(&format!("{base}trials = 0")).is_err());
        assert!(Scenario::from_toml(&base.replace("[2]\nschedulers", "[]\nschedulers")).is_err());
        assert!(Scenario::from_toml(&base.replace("fls", "nope")).is_err());
        assert!(Scenario::from_toml(&format!("{base}heterogeneity = [3]")).is_err());
        assert!(Scenario::from_toml(&format!("{base}workload = \"trace\"")).is_err());
        assert!(Scenario::from_toml(&format!("{base}bogus = 1")).is_err());
    }

    #[test]
    fn points_cover_the_product() {
        let s = scenario("cores = [2, 3]\ncoflows = [1, 2, 3]\nheterogeneity = [1, 2]");
        let p = s.points();
        assert_eq!(p.len(), 12);
        assert_eq!(p[0].label(), "m=2 K=1 h=1");
    }

    #[test]
    fn header_and_empty_report() {
        let empty = ExperimentReport::default();
        assert_eq!(render_csv(&empty), format!("{CSV_HEADER}\n"));
        assert_eq!(
            CSV_HEADER,
            "scenario,point,scheduler,trial,makespan,port_lb,combined_lb,ratio_port,ratio_combined"
        );
        assert!(parse_csv(&render_csv(&empty)).unwrap().is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let s =
            scenario("seed = 2\ncores = [3]\ncoflows = [5]\ntrials = 4\nschedulers = [\"fls\", \"cls\", \"weaver\"]");
        let report = run_scenario(&s).unwrap();
        assert_eq!(parse_csv(&render_csv(&report)).unwrap(), report.rows);
    }

    #[test]
    fn isolated_trial_reproduces_its_row() {
        let s = scenario("seed = 4\ncores = [2, 5]\ncoflows = [6]\ntrials = 5\nschedulers = [\"flpt\"]");
        let report = run_scenario(&s).unwrap();
        let inst = trial_instance(&s, 1, 3).unwrap();
        let a = SchedulerKind::Flpt.schedule(&inst).unwrap();
        let makespan = to_f64(&predicted_makespan(&a, &inst).unwrap().overall);
        let row = report
            .rows
            .iter()
            .find(|r| r.point == "m=5 K=6" && r.trial == 3)
            .unwrap();
        assert_eq!(row.makespan, makespan);
    }

    #[test]
    fn cdf_backends_emit_one_sample_per_core() {
        for backend in ["realize", "discrete"] {
            let s = scenario(&format!("cores = [3]\ncoflows = [4]\ntrials = 2\ncdf = \"{backend}\""));
            let r = run_scenario(&s).unwrap();
            assert_eq!(r.cdf.len(), 2 * 3 * 3);
            assert!(render_cdf(&r).starts_with(CDF_HEADER));
        }
    }

    #[test]
    fn aggregates_match_rows() {
        let s = scenario("seed = 1\ncores = [4]\ncoflows = [5]\ntrials = 6\nschedulers = [\"cls\"]");
        let r = run_scenario(&s).unwrap();
        let a = r.aggregate("m=4 K=5", SchedulerKind::Cls).unwrap();
        let ratios: Vec<f64> = r.rows.iter().map(|x| x.ratio_port).collect();
        assert_eq!(a.trials, 6);
        assert!((a.mean - ratios.iter().sum::<f64>() / 6.0).abs() < 1e-12);
        assert_eq!(a.spread, quartiles(&ratios).unwrap());
        assert!(r.rows.iter().all(|x| x.ratio_combined <= x.ratio_port));
    }

    #[test]
    fn bound_check_fires_on_violation() {
        let t = Time::from_integer;
        assert!(check_bounds(SchedulerKind::Fls, 2, t(4), t(1), t(2)).is_ok());
        assert!(check_bounds(SchedulerKind::Fls, 2, t(4), t(1), Time::new(3, 2)).is_err());
        assert!(check_bounds(SchedulerKind::Cls, 2, t(4), t(1), t(1)).is_ok());
        assert!(check_bounds(SchedulerKind::Cls, 2, t(5), t(1), t(1)).is_err());
        assert!(check_bounds(SchedulerKind::Weaver, 2, t(500), t(1), t(1)).is_ok());
    }
}
