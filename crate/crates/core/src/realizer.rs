//! Turns a per-core flow placement into an explicit time-sliced schedule.
//!
//! A core's demand matrix is padded with slack until every row and column
//! sums to its largest port load `T`, then peeled into perfect matchings
//! (Birkhoff-von Neumann). The resulting slices serve every flow in full and
//! take exactly `T / s_h`, so the ledger makespan is achievable.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{format_ratio, Assignment, CoreId, FlowId, Instance, MakespanResult, Time};

/// One flow as seen by a single core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreFlow {
    pub id: FlowId,
    pub input: u32,
    pub output: u32,
    pub size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceEntry {
    pub input: u32,
    pub output: u32,
    pub flow: FlowId,
}

/// A period during which a fixed set of port-disjoint flows transmit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreScheduleSlice {
    pub matching: Vec<SliceEntry>,
    pub duration: Time,
    /// Index of the permutation term this slice belongs to. A term is split
    /// into several slices when a port pair carries more than one flow.
    pub term: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoreSchedule {
    pub slices: Vec<CoreScheduleSlice>,
    /// Number of permutation matrices in the decomposition.
    pub terms: usize,
}

impl CoreSchedule {
    pub fn span(&self) -> Time {
        self.slices.iter().map(|s| s.duration).sum()
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Real(FlowId, u64),
    Slack(u64),
}

impl Piece {
    fn remaining(&self) -> u64 {
        match *self {
            Piece::Real(_, r) | Piece::Slack(r) => r,
        }
    }

    fn take(&mut self, amount: u64) {
        match self {
            Piece::Real(_, r) | Piece::Slack(r) => *r -= amount,
        }
    }
}

/// Dense compacted demand matrix with per-cell piece queues.
struct Decomposer {
    n: usize,
    weight: Vec<u64>,
    pieces: Vec<VecDeque<Piece>>,
    row_port: Vec<Option<u32>>,
    col_port: Vec<Option<u32>>,
    match_row: Vec<Option<usize>>,
    match_col: Vec<Option<usize>>,
}

impl Decomposer {
    fn new(flows: &[CoreFlow]) -> Self {
        let mut rows: Vec<u32> = flows.iter().map(|f| f.input).collect();
        let mut cols: Vec<u32> = flows.iter().map(|f| f.output).collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        let n = rows.len().max(cols.len());
        let mut d = Decomposer {
            n,
            weight: vec![0; n * n],
            pieces: vec![VecDeque::new(); n * n],
            row_port: (0..n).map(|r| rows.get(r).copied()).collect(),
            col_port: (0..n).map(|c| cols.get(c).copied()).collect(),
            match_row: vec![None; n],
            match_col: vec![None; n],
        };
        for f in flows {
            let r = rows.binary_search(&f.input).expect("row present");
            let c = cols.binary_search(&f.output).expect("col present");
            d.weight[r * n + c] += f.size;
            d.pieces[r * n + c].push_back(Piece::Real(f.id, f.size));
        }
        d
    }

    /// Pads rows and columns with slack up to the largest line sum.
    fn equalize(&mut self) -> u64 {
        let n = self.n;
        let row_sum: Vec<u64> = (0..n).map(|r| (0..n).map(|c| self.weight[r * n + c]).sum()).collect();
        let col_sum: Vec<u64> = (0..n).map(|c| (0..n).map(|r| self.weight[r * n + c]).sum()).collect();
        let target = row_sum.iter().chain(&col_sum).copied().max().unwrap_or(0);
        let mut row_def: Vec<u64> = row_sum.iter().map(|s| target - s).collect();
        let mut col_def: Vec<u64> = col_sum.iter().map(|s| target - s).collect();
        // total row deficit equals total column deficit, so the sweep drains both
        let (mut r, mut c) = (0, 0);
        while r < n && c < n {
            if row_def[r] == 0 {
                r += 1;
                continue;
            }
            if col_def[c] == 0 {
                c += 1;
                continue;
            }
            let amount = row_def[r].min(col_def[c]);
            self.weight[r * n + c] += amount;
            self.pieces[r * n + c].push_back(Piece::Slack(amount));
            row_def[r] -= amount;
            col_def[c] -= amount;
        }
        target
    }

    fn augment(&mut self, row: usize, seen: &mut [bool]) -> bool {
        let n = self.n;
        for c in 0..n {
            if self.weight[row * n + c] == 0 || seen[c] {
                continue;
            }
            seen[c] = true;
            let free = match self.match_col[c] {
                None => true,
                Some(other) => self.augment(other, seen),
            };
            if free {
                self.match_row[row] = Some(c);
                self.match_col[c] = Some(row);
                return true;
            }
        }
        false
    }

    /// Restores a perfect matching on the current support, keeping the
    /// edges that survived the last subtraction.
    fn perfect_matching(&mut self) -> Result<()> {
        let mut seen = vec![false; self.n];
        for r in 0..self.n {
            if self.match_row[r].is_some() {
                continue;
            }
            seen.iter_mut().for_each(|s| *s = false);
            if !self.augment(r, &mut seen) {
                return Err(Error::Internal("no perfect matching on a line-balanced support".into()));
            }
        }
        Ok(())
    }

    fn run(mut self, speed: Time) -> Result<CoreSchedule> {
        let mut remaining = self.equalize();
        let n = self.n;
        let mut out = CoreSchedule::default();
        while remaining > 0 {
            self.perfect_matching()?;
            let cells: Vec<usize> = (0..n).map(|r| r * n + self.match_row[r].expect("perfect")).collect();
            let delta = cells.iter().map(|&x| self.weight[x]).min().expect("n > 0");
            let term = out.terms;
            // split the term wherever a cell moves on to its next piece
            let mut elapsed = 0;
            while elapsed < delta {
                let step = cells
                    .iter()
                    .map(|&x| self.pieces[x].front().map_or(u64::MAX, Piece::remaining))
                    .min()
                    .expect("n > 0")
                    .min(delta - elapsed);
                let mut matching = Vec::new();
                for &x in &cells {
                    let front = self.pieces[x].front_mut().expect("weight > 0 implies a piece");
                    if let Piece::Real(flow, _) = *front {
                        matching.push(SliceEntry {
                            input: self.row_port[x / n].expect("real row"),
                            output: self.col_port[x % n].expect("real col"),
                            flow,
                        });
                    }
                    front.take(step);
                    if front.remaining() == 0 {
                        self.pieces[x].pop_front();
                    }
                }
                out.slices.push(CoreScheduleSlice {
                    matching,
                    duration: Time::from_integer(step as i64) / speed,
                    term,
                });
                elapsed += step;
            }
            for (r, &x) in cells.iter().enumerate() {
                self.weight[x] -= delta;
                if self.weight[x] == 0 {
                    self.match_col[x % n] = None;
                    self.match_row[r] = None;
                }
            }
            remaining -= delta;
            out.terms += 1;
        }
        Ok(out)
    }
}

/// Decomposes one core's demand into port-disjoint slices.
pub fn realize_core(flows: &[CoreFlow], speed: Time) -> Result<CoreSchedule> {
    if speed <= Time::zero() {
        return Err(Error::InvalidArgument(format!(
            "core speed must be positive, got {speed}"
        )));
    }
    let mut ids: Vec<FlowId> = flows.iter().map(|f| f.id).collect();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("flow listed twice on one core".into()));
    }
    if let Some(f) = flows.iter().find(|f| f.size == 0) {
        return Err(Error::InvalidArgument(format!("flow {} has zero size", f.id)));
    }
    if flows.is_empty() {
        return Ok(CoreSchedule::default());
    }
    Decomposer::new(flows).run(speed)
}

/// Realizes a dense matrix of integer demands; cell `(r, c)` becomes flow
/// `r * n + c`.
pub fn realize_matrix(matrix: &[Vec<u64>], speed: Time) -> Result<CoreSchedule> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("demand matrix must be square".into()));
    }
    let flows: Vec<CoreFlow> = matrix
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(move |(c, &d)| CoreFlow {
                    id: r * n + c,
                    input: r as u32,
                    output: c as u32,
                    size: d,
                })
        })
        .collect();
    realize_core(&flows, speed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedSchedule {
    pub per_core: Vec<CoreSchedule>,
    /// Finish time of each flow, by [`FlowId`].
    pub finish: Vec<Time>,
}

impl RealizedSchedule {
    /// Makespan read off the slices rather than the ledgers.
    pub fn makespan(&self, instance: &Instance) -> MakespanResult {
        let per_core: Vec<Time> = self.per_core.iter().map(CoreSchedule::span).collect();
        let overall = per_core.iter().copied().max().unwrap_or_else(Time::zero);
        let per_coflow = (0..instance.coflows().len())
            .map(|pos| {
                instance
                    .flow_range(pos)
                    .map(|id| self.finish[id])
                    .max()
                    .unwrap_or_else(Time::zero)
            })
            .collect();
        MakespanResult {
            per_core,
            overall,
            per_coflow,
        }
    }

    /// One line per slice: `core,start,duration,i->j@k[,...]` with 1-based
    /// cores and ports.
    pub fn dump(&self, instance: &Instance) -> String {
        let mut s = String::new();
        for (h, core) in self.per_core.iter().enumerate() {
            let mut start = Time::zero();
            for slice in &core.slices {
                let _ = write!(
                    s,
                    "{},{},{}",
                    h + 1,
                    format_ratio(&start),
                    format_ratio(&slice.duration)
                );
                for e in &slice.matching {
                    let k = instance.flow(e.flow).coflow;
                    let _ = write!(s, ",{}->{}@{}", e.input + 1, e.output + 1, k);
                }
                s.push('\n');
                start += slice.duration;
            }
        }
        s
    }
}

pub(crate) fn flows_by_core(assignment: &Assignment, instance: &Instance) -> Result<Vec<Vec<CoreFlow>>> {
    let mut by_core = vec![Vec::new(); instance.network().cores()];
    for (id, f) in instance.flows().enumerate() {
        let h = assignment.core_of(id).ok_or(Error::IncompleteAssignment(id))?;
        by_core[h].push(CoreFlow {
            id,
            input: f.input,
            output: f.output,
            size: f.size,
        });
    }
    Ok(by_core)
}

/// Builds the explicit schedule for every core of an assignment.
pub fn realize(assignment: &Assignment, instance: &Instance) -> Result<RealizedSchedule> {
    let by_core = flows_by_core(assignment, instance)?;
    let net = instance.network();
    let per_core = by_core
        .iter()
        .enumerate()
        .map(|(h, flows)| realize_core(flows, net.speed(h)))
        .collect::<Result<Vec<_>>>()?;
    let mut finish = vec![Time::zero(); instance.flow_count()];
    for core in &per_core {
        let mut t = Time::zero();
        for slice in &core.slices {
            t += slice.duration;
            for e in &slice.matching {
                finish[e.flow] = t;
            }
        }
    }
    Ok(RealizedSchedule { per_core, finish })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteRun {
    /// Time step at which each core finished its last flow (0 when idle).
    pub core_completion: Vec<u64>,
    /// Busy port pairs per core per time step.
    pub utilization: Vec<Vec<u32>>,
}

fn integral_speed(speed: Time, core: CoreId) -> Result<u64> {
    if !speed.is_integer() || speed <= Time::zero() {
        return Err(Error::Unsupported(format!(
            "discrete simulation needs integral speeds; core {} has {}",
            core + 1,
            format_ratio(&speed)
        )));
    }
    Ok(*speed.numer() as u64)
}

/// Slot-by-slot simulation: each step serves a greedy maximal matching of
/// unfinished flows, picking the largest remaining demand first.
pub fn simulate_discrete(assignment: &Assignment, instance: &Instance) -> Result<DiscreteRun> {
    let by_core = flows_by_core(assignment, instance)?;
    let net = instance.network();
    let n = net.ports() as usize;
    let mut run = DiscreteRun {
        core_completion: Vec::with_capacity(by_core.len()),
        utilization: Vec::with_capacity(by_core.len()),
    };
    for (h, flows) in by_core.iter().enumerate() {
        let rate = integral_speed(net.speed(h), h)?;
        let mut left: Vec<(u64, CoreFlow)> = flows.iter().map(|f| (f.size, *f)).collect();
        let mut steps = 0u64;
        let mut util = Vec::new();
        let mut in_busy = vec![false; n];
        let mut out_busy = vec![false; n];
        while !left.is_empty() {
            left.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.id.cmp(&b.1.id)));
            in_busy.iter_mut().for_each(|x| *x = false);
            out_busy.iter_mut().for_each(|x| *x = false);
            let mut busy = 0;
            for (rem, f) in left.iter_mut() {
                let (i, j) = (f.input as usize, f.output as usize);
                if in_busy[i] || out_busy[j] {
                    continue;
                }
                in_busy[i] = true;
                out_busy[j] = true;
                *rem = rem.saturating_sub(rate);
                busy += 1;
            }
            left.retain(|(rem, _)| *rem > 0);
            util.push(busy);
            steps += 1;
        }
        run.core_completion.push(steps);
        run.utilization.push(util);
    }
    Ok(run)
}
