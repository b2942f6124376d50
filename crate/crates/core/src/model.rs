//! Domain types: flows, coflows, the parallel network, assignments and
//! makespans.
//!
//! Ports are 0-based in memory and 1-based in every text format. Sizes are
//! integral data units; anything divided by a core speed is an exact
//! [`Time`] rational so ledger checks and argmin ties are reproducible.

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact time (and speed) value.
pub type Time = Ratio<i64>;

/// Index of a flow in instance order (coflows in order, flows in coflow order).
pub type FlowId = usize;

/// 0-based core index.
pub type CoreId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flow {
    pub input: u32,
    pub output: u32,
    pub coflow: u32,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coflow {
    id: u32,
    flows: Vec<Flow>,
}

impl Coflow {
    /// Builds a coflow from `(input, output, size)` triples. Zero sizes and
    /// repeated `(input, output)` pairs are rejected.
    pub fn new(id: u32, entries: impl IntoIterator<Item = (u32, u32, u64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut flows = Vec::new();
        for (input, output, size) in entries {
            if size == 0 {
                return Err(Error::InvalidInstance(format!(
                    "coflow {id}: zero-size flow {input}->{output}"
                )));
            }
            if !seen.insert((input, output)) {
                return Err(Error::InvalidInstance(format!(
                    "coflow {id}: duplicate flow {input}->{output}"
                )));
            }
            flows.push(Flow {
                input,
                output,
                coflow: id,
                size,
            });
        }
        Ok(Coflow { id, flows })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    /// `L_{i,k}` for every input port `i` this coflow touches, sorted by port.
    pub fn input_loads(&self) -> Vec<(u32, u64)> {
        accumulate(self.flows.iter().map(|f| (f.input, f.size)))
    }

    /// `L_{j,k}` for every output port `j` this coflow touches, sorted by port.
    pub fn output_loads(&self) -> Vec<(u32, u64)> {
        accumulate(self.flows.iter().map(|f| (f.output, f.size)))
    }

    pub fn max_port_load(&self) -> u64 {
        let ins = self.input_loads().into_iter().map(|(_, l)| l);
        let outs = self.output_loads().into_iter().map(|(_, l)| l);
        ins.chain(outs).max().unwrap_or(0)
    }
}

fn accumulate(items: impl Iterator<Item = (u32, u64)>) -> Vec<(u32, u64)> {
    let mut v: Vec<(u32, u64)> = items.collect();
    v.sort_unstable_by_key(|&(p, _)| p);
    let mut out: Vec<(u32, u64)> = Vec::with_capacity(v.len());
    for (p, l) in v {
        match out.last_mut() {
            Some((q, acc)) if *q == p => *acc += l,
            _ => out.push((p, l)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    ports: u32,
    speeds: Vec<Time>,
}

impl NetworkSpec {
    /// `cores` unit-speed cores, each an `ports x ports` switch.
    pub fn identical(cores: usize, ports: u32) -> Result<Self> {
        Self::with_speeds(ports, vec![Time::one(); cores])
    }

    pub fn with_speeds(ports: u32, speeds: Vec<Time>) -> Result<Self> {
        if speeds.is_empty() {
            return Err(Error::InvalidInstance("at least one core is required".into()));
        }
        if ports == 0 {
            return Err(Error::InvalidInstance("at least one port is required".into()));
        }
        if let Some(s) = speeds.iter().find(|s| **s <= Time::zero()) {
            return Err(Error::InvalidInstance(format!("non-positive core speed {s}")));
        }
        Ok(NetworkSpec { ports, speeds })
    }

    pub fn cores(&self) -> usize {
        self.speeds.len()
    }

    pub fn ports(&self) -> u32 {
        self.ports
    }

    pub fn speeds(&self) -> &[Time] {
        &self.speeds
    }

    pub fn speed(&self, core: CoreId) -> Time {
        self.speeds[core]
    }

    pub fn is_identical(&self) -> bool {
        self.speeds.iter().all(|s| s.is_one())
    }

    pub fn is_uniform(&self) -> bool {
        self.speeds.windows(2).all(|w| w[0] == w[1])
    }

    pub fn total_speed(&self) -> Time {
        self.speeds.iter().copied().sum()
    }

    pub fn max_speed(&self) -> Time {
        self.speeds.iter().copied().max().unwrap_or_else(Time::one)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    network: NetworkSpec,
    coflows: Vec<Coflow>,
    flow_offsets: Vec<usize>,
}

impl Instance {
    pub fn new(network: NetworkSpec, coflows: Vec<Coflow>) -> Result<Self> {
        let mut ids = HashSet::new();
        for c in &coflows {
            if !ids.insert(c.id) {
                return Err(Error::InvalidInstance(format!("duplicate coflow id {}", c.id)));
            }
            for f in &c.flows {
                if f.input >= network.ports || f.output >= network.ports {
                    return Err(Error::InvalidInstance(format!(
                        "coflow {}: port out of range in flow {}->{} (N = {})",
                        c.id,
                        f.input + 1,
                        f.output + 1,
                        network.ports
                    )));
                }
            }
        }
        let mut flow_offsets = Vec::with_capacity(coflows.len() + 1);
        let mut acc = 0;
        for c in &coflows {
            flow_offsets.push(acc);
            acc += c.len();
        }
        flow_offsets.push(acc);
        Ok(Instance {
            network,
            coflows,
            flow_offsets,
        })
    }

    pub fn network(&self) -> &NetworkSpec {
        &self.network
    }

    /// Same coflows on a different network.
    pub fn with_network(&self, network: NetworkSpec) -> Result<Self> {
        Instance::new(network, self.coflows.clone())
    }

    pub fn coflows(&self) -> &[Coflow] {
        &self.coflows
    }

    pub fn flow_count(&self) -> usize {
        *self.flow_offsets.last().unwrap_or(&0)
    }

    /// Flow ids owned by the coflow at `position`.
    pub fn flow_range(&self, position: usize) -> std::ops::Range<FlowId> {
        self.flow_offsets[position]..self.flow_offsets[position + 1]
    }

    /// All flows in instance order; the index is the [`FlowId`].
    pub fn flows(&self) -> impl Iterator<Item = &Flow> + '_ {
        self.coflows.iter().flat_map(|c| c.flows.iter())
    }

    pub fn flow(&self, id: FlowId) -> &Flow {
        let pos = self.coflow_position(id);
        &self.coflows[pos].flows[id - self.flow_offsets[pos]]
    }

    /// Position (not id) of the coflow owning flow `id`.
    pub fn coflow_position(&self, id: FlowId) -> usize {
        self.flow_offsets.partition_point(|&o| o <= id) - 1
    }

    pub fn max_flow_size(&self) -> u64 {
        self.flows().map(|f| f.size).max().unwrap_or(0)
    }
}

/// Total demand per input port and per output port across all coflows,
/// indexed by 0-based port.
pub fn port_loads(instance: &Instance) -> (Vec<u64>, Vec<u64>) {
    let n = instance.network.ports as usize;
    let mut ins = vec![0u64; n];
    let mut outs = vec![0u64; n];
    for f in instance.flows() {
        ins[f.input as usize] += f.size;
        outs[f.output as usize] += f.size;
    }
    (ins, outs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Flow,
    Coflow,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Granularity::Flow => f.write_str("flow"),
            Granularity::Coflow => f.write_str("coflow"),
        }
    }
}

/// Flow-to-core placement plus per-core port load ledgers.
///
/// `load_in[h][i]` is the service time already committed on input `i` of core
/// `h`, i.e. the sum of `size / s_h` over flows placed there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    granularity: Granularity,
    flow_core: Vec<Option<CoreId>>,
    coflow_core: Vec<Option<CoreId>>,
    load_in: Vec<Vec<Time>>,
    load_out: Vec<Vec<Time>>,
}

impl Assignment {
    pub fn new(instance: &Instance, granularity: Granularity) -> Self {
        let m = instance.network.cores();
        let n = instance.network.ports as usize;
        Assignment {
            granularity,
            flow_core: vec![None; instance.flow_count()],
            coflow_core: vec![None; instance.coflows.len()],
            load_in: vec![vec![Time::zero(); n]; m],
            load_out: vec![vec![Time::zero(); n]; m],
        }
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn load_in(&self, core: CoreId, port: u32) -> Time {
        self.load_in[core][port as usize]
    }

    pub fn load_out(&self, core: CoreId, port: u32) -> Time {
        self.load_out[core][port as usize]
    }

    pub fn ledgers(&self) -> (&[Vec<Time>], &[Vec<Time>]) {
        (&self.load_in, &self.load_out)
    }

    pub fn core_of(&self, flow: FlowId) -> Option<CoreId> {
        self.flow_core[flow]
    }

    pub fn flow_cores(&self) -> &[Option<CoreId>] {
        &self.flow_core
    }

    /// Core of the coflow at `position`; only set for coflow-level runs.
    pub fn coflow_core(&self, position: usize) -> Option<CoreId> {
        self.coflow_core[position]
    }

    pub fn is_complete(&self) -> bool {
        self.flow_core.iter().all(Option::is_some)
    }

    pub fn assign_flow(&mut self, instance: &Instance, flow: FlowId, core: CoreId) {
        let f = instance.flow(flow);
        let t = Time::from_integer(f.size as i64) / instance.network.speed(core);
        self.load_in[core][f.input as usize] += t;
        self.load_out[core][f.output as usize] += t;
        self.flow_core[flow] = Some(core);
    }

    /// Places every flow of the coflow at `position` on `core`. The ledger
    /// gains `L_{i,k}/s_h` on each input and `L_{j,k}/s_h` on each output.
    pub fn assign_coflow(&mut self, instance: &Instance, position: usize, core: CoreId) {
        let coflow = &instance.coflows[position];
        let speed = instance.network.speed(core);
        for (port, load) in coflow.input_loads() {
            self.load_in[core][port as usize] += Time::from_integer(load as i64) / speed;
        }
        for (port, load) in coflow.output_loads() {
            self.load_out[core][port as usize] += Time::from_integer(load as i64) / speed;
        }
        for id in instance.flow_range(position) {
            self.flow_core[id] = Some(core);
        }
        self.coflow_core[position] = Some(core);
    }

    /// Ledgers recomputed from scratch out of the flow placement.
    pub fn recompute_ledgers(&self, instance: &Instance) -> (Vec<Vec<Time>>, Vec<Vec<Time>>) {
        let m = instance.network.cores();
        let n = instance.network.ports as usize;
        let mut ins = vec![vec![Time::zero(); n]; m];
        let mut outs = vec![vec![Time::zero(); n]; m];
        for (id, f) in instance.flows().enumerate() {
            if let Some(h) = self.flow_core[id] {
                let t = Time::from_integer(f.size as i64) / instance.network.speed(h);
                ins[h][f.input as usize] += t;
                outs[h][f.output as usize] += t;
            }
        }
        (ins, outs)
    }

    pub fn ledgers_consistent(&self, instance: &Instance) -> bool {
        let (ins, outs) = self.recompute_ledgers(instance);
        ins == self.load_in && outs == self.load_out
    }

    /// Max port load of `core`, i.e. the time that core needs.
    pub fn core_span(&self, core: CoreId) -> Time {
        self.load_in[core]
            .iter()
            .chain(self.load_out[core].iter())
            .copied()
            .max()
            .unwrap_or_else(Time::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MakespanResult {
    pub per_core: Vec<Time>,
    pub overall: Time,
    /// Completion time per coflow, indexed by position in the instance.
    pub per_coflow: Vec<Time>,
}

/// Ledger-based makespan. A coflow completes when the busiest port it uses
/// on any of its cores drains; that is what the realizer achieves.
pub fn predicted_makespan(assignment: &Assignment, instance: &Instance) -> Result<MakespanResult> {
    if let Some(missing) = assignment.flow_core.iter().position(Option::is_none) {
        return Err(Error::IncompleteAssignment(missing));
    }
    let m = instance.network.cores();
    let per_core: Vec<Time> = (0..m).map(|h| assignment.core_span(h)).collect();
    let overall = per_core.iter().copied().max().unwrap_or_else(Time::zero);
    let per_coflow = (0..instance.coflows.len())
        .map(|pos| {
            instance
                .flow_range(pos)
                .map(|id| {
                    let f = instance.flow(id);
                    let h = assignment.flow_core[id].expect("checked complete");
                    assignment.load_in[h][f.input as usize].max(assignment.load_out[h][f.output as usize])
                })
                .max()
                .unwrap_or_else(Time::zero)
        })
        .collect();
    Ok(MakespanResult {
        per_core,
        overall,
        per_coflow,
    })
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_ratio(t: &Time) -> String {
    format!("{}/{}", t.numer(), t.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<Time> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Time::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Time::from_integer),
    }
}

pub fn to_f64(t: &Time) -> f64 {
    *t.numer() as f64 / *t.denom() as f64
}
