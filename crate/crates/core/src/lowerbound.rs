//! Lower bounds on the optimal makespan.
//!
//! `port_lb` spreads the busiest port's total demand over the aggregate
//! core speed. `flow_lb` holds because a flow cannot be split across cores.
//! Reported ratios divide by `port_lb`; bound checks use `combined`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{port_loads, Instance, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBounds {
    pub port_lb: Time,
    pub flow_lb: Time,
    pub combined: Time,
}

impl LowerBounds {
    fn new(port_lb: Time, flow_lb: Time) -> Self {
        LowerBounds {
            port_lb,
            flow_lb,
            combined: port_lb.max(flow_lb),
        }
    }
}

fn max_port_load(instance: &Instance) -> u64 {
    let (ins, outs) = port_loads(instance);
    ins.into_iter().chain(outs).max().unwrap_or(0)
}

/// Bounds for a unit-speed network with `m` cores.
pub fn lb_identical(instance: &Instance) -> Result<LowerBounds> {
    let net = instance.network();
    if !net.is_identical() {
        return Err(Error::NetworkMismatch {
            scheduler: "lb_identical".into(),
        });
    }
    let m = net.cores() as i64;
    Ok(LowerBounds::new(
        Time::new(max_port_load(instance) as i64, m),
        Time::from_integer(instance.max_flow_size() as i64),
    ))
}

/// Bounds for arbitrary speeds: port load over `sum s_l`, largest flow over
/// the fastest speed.
pub fn lb_heterogeneous(instance: &Instance) -> LowerBounds {
    let net = instance.network();
    let port_lb = Time::from_integer(max_port_load(instance) as i64) / net.total_speed();
    let largest = instance.max_flow_size();
    let flow_lb = if largest == 0 {
        Time::zero()
    } else {
        Time::from_integer(largest as i64) / net.max_speed()
    };
    LowerBounds::new(port_lb, flow_lb)
}

/// Dispatches on the network kind.
pub fn lower_bounds(instance: &Instance) -> LowerBounds {
    if instance.network().is_identical() {
        lb_identical(instance).expect("identical network")
    } else {
        lb_heterogeneous(instance)
    }
}
