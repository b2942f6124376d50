#![allow(dead_code)]

use coflow_core::model::{Coflow, Instance, NetworkSpec, Time};
use rand::Rng;

/// Up to `max_flows` flows with sizes in `1..=max_size`, spread over at
/// most `max_coflows` coflows on an `n x n` fabric.
pub fn small_instance<R: Rng>(
    rng: &mut R,
    m: usize,
    n: u32,
    max_flows: usize,
    max_coflows: u32,
    max_size: u64,
) -> Instance {
    let k = rng.gen_range(1..=max_coflows);
    let mut coflows: Vec<Vec<(u32, u32, u64)>> = vec![Vec::new(); k as usize];
    let target = rng.gen_range(1..=max_flows);
    let mut placed = 0;
    let mut attempts = 0;
    while placed < target && attempts < 100 {
        attempts += 1;
        let c = rng.gen_range(0..k) as usize;
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if coflows[c].iter().any(|f| f.0 == i && f.1 == j) {
            continue;
        }
        coflows[c].push((i, j, rng.gen_range(1..=max_size)));
        placed += 1;
    }
    let coflows = coflows
        .into_iter()
        .filter(|c| !c.is_empty())
        .enumerate()
        .map(|(x, fl)| Coflow::new(x as u32 + 1, fl).unwrap())
        .collect();
    Instance::new(NetworkSpec::identical(m, n).unwrap(), coflows).unwrap()
}

/// Makespan of a flow-to-core map, recomputed from scratch.
pub fn makespan_of(instance: &Instance, cores: &[usize]) -> Time {
    let net = instance.network();
    let n = net.ports() as usize;
    let mut ins = vec![vec![0u64; n]; net.cores()];
    let mut outs = vec![vec![0u64; n]; net.cores()];
    for (f, &h) in instance.flows().zip(cores) {
        ins[h][f.input as usize] += f.size;
        outs[h][f.output as usize] += f.size;
    }
    (0..net.cores())
        .map(|h| {
            let top = ins[h].iter().chain(&outs[h]).copied().max().unwrap_or(0);
            Time::from_integer(top as i64) / net.speed(h)
        })
        .max()
        .unwrap_or_default()
}

pub fn max_line_sum(matrix: &[Vec<u64>]) -> u64 {
    let n = matrix.len();
    let rows = matrix.iter().map(|r| r.iter().sum::<u64>());
    let cols = (0..n).map(|c| matrix.iter().map(|r| r[c]).sum::<u64>());
    rows.chain(cols).max().unwrap_or(0)
}
