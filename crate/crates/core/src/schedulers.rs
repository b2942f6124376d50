//! List-scheduling heuristics that place flows or whole coflows on cores.
//!
//! Every argmin breaks ties toward the lowest core index and every sort is
//! stable, so a given instance always yields the same [`Assignment`].

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Assignment, CoreId, FlowId, Granularity, Instance, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchedulerKind {
    /// Flow list scheduling in instance order.
    Fls,
    /// Flow list scheduling, largest flow first.
    Flpt,
    /// Coflow list scheduling: whole coflows in instance order.
    Cls,
    /// Speed-aware FLPT.
    FlptH,
    /// Speed-aware CLS.
    ClsH,
    /// Critical/non-critical flow baseline.
    Weaver,
}

impl SchedulerKind {
    pub const ALL: [SchedulerKind; 6] = [
        SchedulerKind::Fls,
        SchedulerKind::Flpt,
        SchedulerKind::Cls,
        SchedulerKind::FlptH,
        SchedulerKind::ClsH,
        SchedulerKind::Weaver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::Fls => "fls",
            SchedulerKind::Flpt => "flpt",
            SchedulerKind::Cls => "cls",
            SchedulerKind::FlptH => "flpt-h",
            SchedulerKind::ClsH => "cls-h",
            SchedulerKind::Weaver => "weaver",
        }
    }

    pub fn granularity(self) -> Granularity {
        match self {
            SchedulerKind::Cls | SchedulerKind::ClsH => Granularity::Coflow,
            _ => Granularity::Flow,
        }
    }

    pub fn requires_identical(self) -> bool {
        matches!(self, SchedulerKind::Fls | SchedulerKind::Flpt | SchedulerKind::Cls)
    }

    /// Runs the scheduler.
    pub fn schedule(self, instance: &Instance) -> Result<Assignment> {
        if self.requires_identical() && !instance.network().is_identical() {
            return Err(Error::NetworkMismatch {
                scheduler: self.name().into(),
            });
        }
        Ok(match self {
            SchedulerKind::Fls => fls(instance),
            SchedulerKind::Flpt => flpt(instance),
            SchedulerKind::Cls => cls(instance),
            SchedulerKind::FlptH => flpt_h(instance),
            SchedulerKind::ClsH => cls_h(instance),
            SchedulerKind::Weaver => weaver(instance),
        })
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchedulerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        SchedulerKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheduler `{s}`")))
    }
}

/// Index of the smallest key; the first one wins on ties.
fn argmin<K: Ord>(keys: impl Iterator<Item = K>) -> CoreId {
    let mut best: Option<(CoreId, K)> = None;
    for (h, k) in keys.enumerate() {
        match &best {
            Some((_, b)) if k >= *b => {}
            _ => best = Some((h, k)),
        }
    }
    best.map(|(h, _)| h).unwrap_or(0)
}

/// Flow ids in non-increasing size, ties kept in instance order.
pub fn lpt_order(instance: &Instance) -> Vec<FlowId> {
    let mut order: Vec<FlowId> = (0..instance.flow_count()).collect();
    order.sort_by_key(|&id| std::cmp::Reverse(instance.flow(id).size));
    order
}

fn list_schedule(instance: &Instance, order: impl Iterator<Item = FlowId>) -> Assignment {
    let m = instance.network().cores();
    let mut a = Assignment::new(instance, Granularity::Flow);
    for id in order {
        let f = *instance.flow(id);
        let h = argmin((0..m).map(|h| a.load_in(h, f.input) + a.load_out(h, f.output)));
        a.assign_flow(instance, id, h);
    }
    a
}

/// Each flow, in instance order, goes to the core whose two ports
/// (its input and its output) carry the least combined load.
pub fn fls(instance: &Instance) -> Assignment {
    list_schedule(instance, 0..instance.flow_count())
}

/// [`fls`] over flows sorted by size, largest first.
pub fn flpt(instance: &Instance) -> Assignment {
    list_schedule(instance, lpt_order(instance).into_iter())
}

/// Like [`flpt`], but the argmin also counts the flow's own service time
/// `d / s_h`, which is what makes a faster core attractive.
pub fn flpt_h(instance: &Instance) -> Assignment {
    let net = instance.network();
    let mut a = Assignment::new(instance, Granularity::Flow);
    for id in lpt_order(instance) {
        let f = *instance.flow(id);
        let d = Time::from_integer(f.size as i64);
        let h = argmin((0..net.cores()).map(|h| a.load_in(h, f.input) + a.load_out(h, f.output) + d / net.speed(h)));
        a.assign_flow(instance, id, h);
    }
    a
}

/// Coflow objective `max_{i,j}(load_I(i,h) + load_O(j,h) + L_i/s_h + L_j/s_h)`.
/// The input and output terms are independent, so the pairwise max splits
/// into `max_i(..) + max_j(..)`.
fn cls_objective(
    a: &Assignment,
    core: CoreId,
    speed: Time,
    ins: &[(u32, u64)],
    outs: &[(u32, u64)],
    ports: u32,
) -> Time {
    let side = |loads: &[(u32, u64)], ledger: &dyn Fn(u32) -> Time| {
        // ports this coflow does not touch still count with their ledger value
        let untouched = (0..ports).map(ledger).max().unwrap_or_else(Time::zero);
        loads
            .iter()
            .map(|&(p, l)| ledger(p) + Time::from_integer(l as i64) / speed)
            .fold(untouched, Time::max)
    };
    side(ins, &|p| a.load_in(core, p)) + side(outs, &|p| a.load_out(core, p))
}

fn coflow_list_schedule(instance: &Instance) -> Assignment {
    let net = instance.network();
    let mut a = Assignment::new(instance, Granularity::Coflow);
    for (pos, coflow) in instance.coflows().iter().enumerate() {
        let ins = coflow.input_loads();
        let outs = coflow.output_loads();
        let h = argmin((0..net.cores()).map(|h| cls_objective(&a, h, net.speed(h), &ins, &outs, net.ports())));
        a.assign_coflow(instance, pos, h);
    }
    a
}

/// Whole coflows in instance order, each onto the core minimizing the
/// largest input-plus-output load it would create.
pub fn cls(instance: &Instance) -> Assignment {
    coflow_list_schedule(instance)
}

/// [`cls`] with coflow loads scaled by `1/s_h`.
pub fn cls_h(instance: &Instance) -> Assignment {
    coflow_list_schedule(instance)
}

/// A coflow's own data on one core, per port.
#[derive(Default, Clone)]
struct Footprint {
    inputs: Vec<(u32, Time)>,
    outputs: Vec<(u32, Time)>,
}

fn port_load(entries: &[(u32, Time)], port: u32) -> Time {
    entries.iter().find(|e| e.0 == port).map_or_else(Time::zero, |e| e.1)
}

fn bump(entries: &mut Vec<(u32, Time)>, port: u32, by: Time) {
    match entries.iter_mut().find(|e| e.0 == port) {
        Some(e) => e.1 += by,
        None => entries.push((port, by)),
    }
}

impl Footprint {
    fn add(&mut self, input: u32, output: u32, time: Time) {
        bump(&mut self.inputs, input, time);
        bump(&mut self.outputs, output, time);
    }

    fn completion(&self) -> Time {
        self.inputs
            .iter()
            .chain(&self.outputs)
            .map(|e| e.1)
            .max()
            .unwrap_or_else(Time::zero)
    }
}

/// Baseline reconstruction: flows largest first. A coflow's completion is
/// the largest load its own flows put on any port of any core. A flow is
/// critical when every core would push that completion past its current
/// value; critical flows go where the new completion is smallest, the rest
/// go where total port load is best balanced.
pub fn weaver(instance: &Instance) -> Assignment {
    let net = instance.network();
    let m = net.cores();
    let mut a = Assignment::new(instance, Granularity::Flow);
    let mut footprints: Vec<Vec<Footprint>> = vec![vec![Footprint::default(); m]; instance.coflows().len()];
    for id in lpt_order(instance) {
        let f = *instance.flow(id);
        let pos = instance.coflow_position(id);
        let d = Time::from_integer(f.size as i64);
        let own = &footprints[pos];
        let gamma_now = own.iter().map(Footprint::completion).max().unwrap_or_else(Time::zero);
        let tentative: Vec<Time> = (0..m)
            .map(|h| {
                let t = d / net.speed(h);
                gamma_now
                    .max(port_load(&own[h].inputs, f.input) + t)
                    .max(port_load(&own[h].outputs, f.output) + t)
            })
            .collect();
        let best = argmin(tentative.iter());
        let h = if tentative[best] > gamma_now {
            best
        } else {
            argmin((0..m).map(|h| a.load_in(h, f.input) + a.load_out(h, f.output) + d / net.speed(h)))
        };
        a.assign_flow(instance, id, h);
        footprints[pos][h].add(f.input, f.output, d / net.speed(h));
    }
    a
}
