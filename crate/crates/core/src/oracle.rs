//! Exhaustive optimal makespan for desk-sized instances.
//!
//! Every flow (or coflow) to core map is enumerated; a core's time is its
//! largest port load over its speed, which the realizer attains. On uniform
//! speeds cores are interchangeable, so a new core is only ever opened as
//! the lowest unused one.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Assignment, Granularity, Instance, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: u128,
    /// Skip core relabelings when all speeds are equal.
    pub symmetry: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 2_000_000,
            symmetry: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Time,
    pub witness: Assignment,
    /// Complete maps evaluated.
    pub explored: u64,
}

/// A unit of placement: the port loads it adds to whichever core takes it.
struct Item {
    ins: Vec<(usize, u64)>,
    outs: Vec<(usize, u64)>,
}

struct Search<'a> {
    items: &'a [Item],
    speeds: &'a [Time],
    symmetric: bool,
    load_in: Vec<Vec<Time>>,
    load_out: Vec<Vec<Time>>,
    choice: Vec<usize>,
    best: Option<(Time, Vec<usize>)>,
    explored: u64,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, opened: usize, span: Time) {
        if depth == self.items.len() {
            self.explored += 1;
            if self.best.as_ref().is_none_or(|(b, _)| span < *b) {
                self.best = Some((span, self.choice.clone()));
            }
            return;
        }
        let m = self.speeds.len();
        let limit = if self.symmetric { (opened + 1).min(m) } else { m };
        for h in 0..limit {
            let speed = self.speeds[h];
            let item = &self.items[depth];
            let mut next = span;
            for &(p, l) in &item.ins {
                self.load_in[h][p] += Time::from_integer(l as i64) / speed;
                next = next.max(self.load_in[h][p]);
            }
            for &(p, l) in &item.outs {
                self.load_out[h][p] += Time::from_integer(l as i64) / speed;
                next = next.max(self.load_out[h][p]);
            }
            self.choice[depth] = h;
            self.descend(depth + 1, opened.max(h + 1), next);
            for &(p, l) in &item.ins {
                self.load_in[h][p] -= Time::from_integer(l as i64) / speed;
            }
            for &(p, l) in &item.outs {
                self.load_out[h][p] -= Time::from_integer(l as i64) / speed;
            }
        }
    }
}

fn state_count(cores: usize, items: usize) -> u128 {
    (0..items).fold(1u128, |acc, _| acc.saturating_mul(cores as u128))
}

fn solve(instance: &Instance, items: Vec<Item>, limits: Limits) -> Result<(Time, Vec<usize>, u64)> {
    let net = instance.network();
    let needed = state_count(net.cores(), items.len());
    if needed > limits.max_states {
        return Err(Error::OverLimit {
            needed,
            limit: limits.max_states,
        });
    }
    let n = net.ports() as usize;
    let mut search = Search {
        items: &items,
        speeds: net.speeds(),
        symmetric: limits.symmetry && net.is_uniform(),
        load_in: vec![vec![Time::zero(); n]; net.cores()],
        load_out: vec![vec![Time::zero(); n]; net.cores()],
        choice: vec![0; items.len()],
        best: None,
        explored: 0,
    };
    search.descend(0, 0, Time::zero());
    let (optimum, choice) = search.best.expect("at least the empty map is explored");
    Ok((optimum, choice, search.explored))
}

/// Optimal flow-level makespan.
pub fn brute_force_flow(instance: &Instance, limits: Limits) -> Result<OracleResult> {
    let items = instance
        .flows()
        .map(|f| Item {
            ins: vec![(f.input as usize, f.size)],
            outs: vec![(f.output as usize, f.size)],
        })
        .collect();
    let (optimum, choice, explored) = solve(instance, items, limits)?;
    let mut witness = Assignment::new(instance, Granularity::Flow);
    for (id, h) in choice.into_iter().enumerate() {
        witness.assign_flow(instance, id, h);
    }
    Ok(OracleResult {
        optimum,
        witness,
        explored,
    })
}

/// Optimal coflow-level makespan.
pub fn brute_force_coflow(instance: &Instance, limits: Limits) -> Result<OracleResult> {
    let items = instance
        .coflows()
        .iter()
        .map(|c| Item {
            ins: c.input_loads().into_iter().map(|(p, l)| (p as usize, l)).collect(),
            outs: c.output_loads().into_iter().map(|(p, l)| (p as usize, l)).collect(),
        })
        .collect();
    let (optimum, choice, explored) = solve(instance, items, limits)?;
    let mut witness = Assignment::new(instance, Granularity::Coflow);
    for (pos, h) in choice.into_iter().enumerate() {
        witness.assign_coflow(instance, pos, h);
    }
    Ok(OracleResult {
        optimum,
        witness,
        explored,
    })
}
