//! Line-based instance format:
//!
//! ```text
//! N m
//! k i j size
//! ...
//! s: p/q p/q ...
//! ```
//!
//! Ports are 1-based. Coflows keep the order in which their id first
//! appears. The speeds line is optional on input (all 1) and `#` starts a
//! comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{format_ratio, parse_ratio, Coflow, Instance, NetworkSpec, Time};

pub fn render_instance(instance: &Instance) -> String {
    let net = instance.network();
    let mut s = format!("{} {}\n", net.ports(), net.cores());
    for f in instance.flows() {
        let _ = writeln!(s, "{} {} {} {}", f.coflow, f.input + 1, f.output + 1, f.size);
    }
    s.push_str("s:");
    for sp in net.speeds() {
        let _ = write!(s, " {}", format_ratio(sp));
    }
    s.push('\n');
    s
}

pub fn write_instance(instance: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, render_instance(instance)).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, path)
}

fn field<T: std::str::FromStr>(tok: Option<&str>, what: &str, origin: &Path, line: usize) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(origin, line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(origin, line, format!("bad {what} `{tok}`")))
}

/// Parses the native format; `origin` only labels error messages.
pub fn parse_instance(text: &str, origin: &Path) -> Result<Instance> {
    let mut header: Option<(u32, usize)> = None;
    let mut speeds: Option<Vec<Time>> = None;
    let mut order: Vec<u32> = Vec::new();
    let mut flows: Vec<Vec<(u32, u32, u64)>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("s:") {
            let parsed = rest
                .split_whitespace()
                .map(|tok| parse_ratio(tok).ok_or_else(|| Error::parse(origin, line, format!("bad speed `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            speeds = Some(parsed);
            continue;
        }
        let mut toks = content.split_whitespace();
        match header {
            None => {
                let n: u32 = field(toks.next(), "port count", origin, line)?;
                let m: usize = field(toks.next(), "core count", origin, line)?;
                header = Some((n, m));
            }
            Some((n, _)) => {
                let k: u32 = field(toks.next(), "coflow id", origin, line)?;
                let i: u32 = field(toks.next(), "input port", origin, line)?;
                let j: u32 = field(toks.next(), "output port", origin, line)?;
                let size: u64 = field(toks.next(), "flow size", origin, line)?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(Error::parse(origin, line, format!("port out of 1..={n}")));
                }
                if size == 0 {
                    return Err(Error::parse(origin, line, "flow size must be positive"));
                }
                let pos = match order.iter().position(|&x| x == k) {
                    Some(p) => p,
                    None => {
                        order.push(k);
                        flows.push(Vec::new());
                        order.len() - 1
                    }
                };
                flows[pos].push((i - 1, j - 1, size));
            }
        }
        if toks.next().is_some() {
            return Err(Error::parse(origin, line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(origin, 0, "missing `N m` header"))?;
    let network = match speeds {
        Some(s) if s.len() != m => {
            return Err(Error::InvalidInstance(format!("{} speeds for {m} cores", s.len())));
        }
        Some(s) => NetworkSpec::with_speeds(n, s)?,
        None => NetworkSpec::identical(m, n)?,
    };
    let coflows = order
        .into_iter()
        .zip(flows)
        .map(|(k, fl)| Coflow::new(k, fl))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(network, coflows)
}
