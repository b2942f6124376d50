//! Reader for the public coflow-benchmark trace format.
//!
//! ```text
//! <numRacks> <numCoflows>
//! <id> <arrivalMillis> <numMappers> <mapperRack>... <numReducers> <rack:sizeMB>...
//! ```
//!
//! Each reducer's volume is split evenly over the mappers, rounded up to a
//! whole MB, and every mapper rack sends its share to the reducer rack.
//! Mapper or reducer racks may repeat; shares landing on the same port pair
//! are merged into one flow. Arrival times are dropped.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Coflow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStats {
    pub racks: u32,
    pub coflows: usize,
    pub min_flows: usize,
    pub max_flows: usize,
    pub min_size: u64,
    pub max_size: u64,
}

impl TraceStats {
    pub fn of(racks: u32, coflows: &[Coflow]) -> Self {
        let counts = coflows.iter().map(Coflow::len);
        let sizes = coflows.iter().flat_map(|c| c.flows().iter().map(|f| f.size));
        TraceStats {
            racks,
            coflows: coflows.len(),
            min_flows: counts.clone().min().unwrap_or(0),
            max_flows: counts.max().unwrap_or(0),
            min_size: sizes.clone().min().unwrap_or(0),
            max_size: sizes.max().unwrap_or(0),
        }
    }
}

/// Returns the rack count (`N`) and the coflows with 0-based ports.
pub fn parse_trace(path: &Path) -> Result<(u32, Vec<Coflow>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace_str(&text, path)
}

pub fn parse_trace_str(text: &str, origin: &Path) -> Result<(u32, Vec<Coflow>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(origin, 0, "empty trace"))?;
    let mut h = header.split_whitespace();
    let racks: u32 = num(h.next(), "rack count", origin, hline)?;
    let declared: usize = num(h.next(), "coflow count", origin, hline)?;

    let mut coflows = Vec::with_capacity(declared);
    for (line, content) in lines {
        let mut toks = content.split_whitespace();
        let id: u32 = num(toks.next(), "coflow id", origin, line)?;
        let _arrival: u64 = num(toks.next(), "arrival time", origin, line)?;
        let mappers: usize = num(toks.next(), "mapper count", origin, line)?;
        if mappers == 0 {
            return Err(Error::parse(origin, line, "coflow without mappers"));
        }
        let mapper_racks = (0..mappers)
            .map(|_| rack(toks.next(), racks, origin, line))
            .collect::<Result<Vec<_>>>()?;
        let reducers: usize = num(toks.next(), "reducer count", origin, line)?;
        let mut merged: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for _ in 0..reducers {
            let tok = toks
                .next()
                .ok_or_else(|| Error::parse(origin, line, "missing reducer entry"))?;
            let (r, mb) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(origin, line, format!("bad reducer entry `{tok}`")))?;
            let dst = rack(Some(r), racks, origin, line)?;
            let mb: f64 = mb
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| Error::parse(origin, line, format!("bad reducer size `{mb}`")))?;
            let share = ((mb / mappers as f64).ceil() as u64).max(1);
            for &src in &mapper_racks {
                *merged.entry((src, dst)).or_default() += share;
            }
        }
        if toks.next().is_some() {
            return Err(Error::parse(origin, line, "trailing tokens"));
        }
        let coflow = Coflow::new(id, merged.into_iter().map(|((i, j), d)| (i, j, d)))
            .map_err(|e| Error::parse(origin, line, e.to_string()))?;
        coflows.push(coflow);
    }
    if coflows.len() != declared {
        return Err(Error::parse(
            origin,
            hline,
            format!("header declares {declared} coflows, found {}", coflows.len()),
        ));
    }
    Ok((racks, coflows))
}

fn num<T: std::str::FromStr>(tok: Option<&str>, what: &str, origin: &Path, line: usize) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(origin, line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(origin, line, format!("bad {what} `{tok}`")))
}

fn rack(tok: Option<&str>, racks: u32, origin: &Path, line: usize) -> Result<u32> {
    let r: u32 = num(tok, "rack id", origin, line)?;
    if r >= racks {
        return Err(Error::parse(
            origin,
            line,
            format!("rack {r} out of range (numRacks = {racks})"),
        ));
    }
    Ok(r)
}

/// Keeps coflows with at least `threshold` flows.
pub fn filter_by_flow_count(coflows: &[Coflow], threshold: usize) -> Vec<Coflow> {
    coflows.iter().filter(|c| c.len() >= threshold).cloned().collect()
}
