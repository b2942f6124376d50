//! Synthetic coflow generation, trace ingestion and the native instance
//! text format.

mod native;
mod trace;

pub use native::{parse_instance, read_instance, render_instance, write_instance};
pub use trace::{filter_by_flow_count, parse_trace, parse_trace_str, TraceStats};

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Coflow, Instance, NetworkSpec, Time};

/// Port-width and flow-size ranges for one family of coflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoflowDescription {
    pub w_min: u32,
    pub w_max: u32,
    pub l_min: u64,
    pub l_max: u64,
}

impl CoflowDescription {
    pub fn new(w_min: u32, w_max: u32, l_min: u64, l_max: u64) -> Result<Self> {
        if w_min < 1 || w_min > w_max || l_min < 1 || l_min > l_max {
            return Err(Error::InvalidArgument(format!(
                "bad coflow description ({w_min}, {w_max}, {l_min}, {l_max})"
            )));
        }
        Ok(CoflowDescription {
            w_min,
            w_max,
            l_min,
            l_max,
        })
    }
}

/// Weighted set of descriptions; weights are integer percentages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mixture {
    entries: Vec<(CoflowDescription, u32)>,
}

fn ceil_sqrt(n: u32) -> u32 {
    let mut r = (n as f64).sqrt() as u32;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

impl Mixture {
    pub fn new(entries: Vec<(CoflowDescription, u32)>) -> Result<Self> {
        let total: u32 = entries.iter().map(|e| e.1).sum();
        if total != 100 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, expected 100"
            )));
        }
        Ok(Mixture { entries })
    }

    /// The default four-family mix for `ports` ports:
    /// `(1,5,1,10)` 41%, `(1,5,10,1000)` 29%, `(5,N,1,10)` 9%, `(5,N,10,1000)` 21%.
    /// With fewer than 5 ports the width 5 is capped at `N`.
    pub fn standard(ports: u32) -> Result<Self> {
        let d = CoflowDescription::new;
        let w = ports.min(5);
        Mixture::new(vec![
            (d(1, w, 1, 10)?, 41),
            (d(1, w, 10, 1000)?, 29),
            (d(w, ports, 1, 10)?, 9),
            (d(w, ports, 10, 1000)?, 21),
        ])
    }

    /// Every coflow `(ceil(sqrt N), N, 1, 100)`.
    pub fn dense(ports: u32) -> Result<Self> {
        Mixture::new(vec![(CoflowDescription::new(ceil_sqrt(ports), ports, 1, 100)?, 100)])
    }

    /// Half dense, half sparse `(1, ceil(sqrt N), 1, 100)` coflows.
    pub fn combined(ports: u32) -> Result<Self> {
        let r = ceil_sqrt(ports);
        Mixture::new(vec![
            (CoflowDescription::new(r, ports, 1, 100)?, 50),
            (CoflowDescription::new(1, r, 1, 100)?, 50),
        ])
    }

    pub fn entries(&self) -> &[(CoflowDescription, u32)] {
        &self.entries
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> CoflowDescription {
        let mut x = rng.gen_range(0..100u32);
        for (d, w) in &self.entries {
            if x < *w {
                return *d;
            }
            x -= w;
        }
        unreachable!("weights sum to 100")
    }
}

/// One coflow: `w1 x w2` flows between `w1` distinct inputs and `w2`
/// distinct outputs, each with a uniform size in `[l_min, l_max]`.
pub fn gen_coflow<R: Rng + ?Sized>(id: u32, desc: &CoflowDescription, ports: u32, rng: &mut R) -> Result<Coflow> {
    if desc.w_max > ports {
        return Err(Error::InvalidArgument(format!(
            "width {} exceeds port count {ports}",
            desc.w_max
        )));
    }
    let w1 = rng.gen_range(desc.w_min..=desc.w_max) as usize;
    let w2 = rng.gen_range(desc.w_min..=desc.w_max) as usize;
    let mut inputs = sample(rng, ports as usize, w1).into_vec();
    let mut outputs = sample(rng, ports as usize, w2).into_vec();
    inputs.sort_unstable();
    outputs.sort_unstable();
    let mut entries = Vec::with_capacity(w1 * w2);
    for &i in &inputs {
        for &j in &outputs {
            entries.push((i as u32, j as u32, rng.gen_range(desc.l_min..=desc.l_max)));
        }
    }
    Coflow::new(id, entries)
}

/// `k` coflows (ids `1..=k`) on `m` unit-speed cores.
pub fn gen_instance<R: Rng + ?Sized>(k: u32, ports: u32, m: usize, mixture: &Mixture, rng: &mut R) -> Result<Instance> {
    let coflows = (1..=k)
        .map(|id| {
            let desc = mixture.draw(rng);
            gen_coflow(id, &desc, ports, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(NetworkSpec::identical(m, ports)?, coflows)
}

/// Denominator of the speed grid.
pub const SPEED_GRID: i64 = 64;

/// `m` speeds uniform on `[1, m/h]`, snapped to multiples of `1/64`.
pub fn gen_speeds<R: Rng + ?Sized>(m: usize, h: usize, rng: &mut R) -> Result<Vec<Time>> {
    if h == 0 || h > m {
        return Err(Error::InvalidArgument(format!(
            "heterogeneity factor {h} must be in 1..={m}"
        )));
    }
    let hi_ticks = (m as i64 * SPEED_GRID) / h as i64;
    let hi = m as f64 / h as f64;
    Ok((0..m)
        .map(|_| {
            let s: f64 = if hi > 1.0 { rng.gen_range(1.0..=hi) } else { 1.0 };
            let ticks = ((s * SPEED_GRID as f64).round() as i64).clamp(SPEED_GRID, hi_ticks.max(SPEED_GRID));
            Time::new(ticks, SPEED_GRID)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn degenerate_description_gives_one_flow() {
        let d = CoflowDescription::new(1, 1, 5, 5).unwrap();
        for n in [1, 7, 150] {
            let c = gen_coflow(1, &d, n, &mut rng(n as u64)).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c.flows()[0].size, 5);
        }
    }

    #[test]
    fn forced_two_by_two_grid() {
        let d = CoflowDescription::new(2, 2, 1, 1).unwrap();
        let c = gen_coflow(1, &d, 10, &mut rng(3)).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.input_loads().len(), 2);
        assert_eq!(c.output_loads().len(), 2);
        assert!(c.flows().iter().all(|f| f.size == 1));
    }

    #[test]
    fn width_beyond_ports_is_rejected() {
        let d = CoflowDescription::new(1, 11, 1, 1).unwrap();
        assert!(gen_coflow(1, &d, 10, &mut rng(0)).is_err());
        assert!(CoflowDescription::new(3, 2, 1, 1).is_err());
        assert!(CoflowDescription::new(1, 2, 0, 1).is_err());
    }

    #[test]
    fn flow_counts_within_width_squares() {
        let mix = Mixture::standard(10).unwrap();
        let mut r = rng(42);
        for _ in 0..1000 {
            let d = mix.draw(&mut r);
            let c = gen_coflow(1, &d, 10, &mut r).unwrap();
            let n = c.len() as u32;
            assert!(n >= d.w_min * d.w_min && n <= d.w_max * d.w_max);
            assert!(c.flows().iter().all(|f| f.size >= d.l_min && f.size <= d.l_max));
            assert!(c.flows().iter().all(|f| f.input < 10 && f.output < 10));
        }
    }

    #[test]
    fn mixture_frequencies_within_three_sigma() {
        let mix = Mixture::standard(10).unwrap();
        let mut r = rng(7);
        let draws = 10_000;
        let mut counts = [0u32; 4];
        for _ in 0..draws {
            let d = mix.draw(&mut r);
            let idx = mix.entries().iter().position(|e| e.0 == d).unwrap();
            counts[idx] += 1;
        }
        for (c, (_, w)) in counts.iter().zip(mix.entries()) {
            let p = *w as f64 / 100.0;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - draws as f64 * p).abs() <= 3.0 * sigma, "{c} vs {p}");
        }
    }

    #[test]
    fn mixtures_validate_weights() {
        let d = CoflowDescription::new(1, 1, 1, 1).unwrap();
        assert!(Mixture::new(vec![(d, 60)]).is_err());
        assert_eq!(Mixture::dense(10).unwrap().entries()[0].0.w_min, 4);
        assert_eq!(Mixture::dense(9).unwrap().entries()[0].0.w_min, 3);
        assert_eq!(Mixture::combined(10).unwrap().entries().len(), 2);
        let small = Mixture::standard(3).unwrap();
        assert!(small.entries().iter().all(|(d, _)| d.w_max <= 3));
        assert!(Mixture::standard(0).is_err());
    }

    #[test]
    fn instance_generation_is_seeded() {
        let mix = Mixture::standard(10).unwrap();
        let a = gen_instance(25, 10, 5, &mix, &mut rng(9)).unwrap();
        let b = gen_instance(25, 10, 5, &mix, &mut rng(9)).unwrap();
        let c = gen_instance(25, 10, 5, &mix, &mut rng(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.coflows().len(), 25);
        assert_eq!(gen_instance(0, 10, 5, &mix, &mut rng(9)).unwrap().flow_count(), 0);
    }

    #[test]
    fn speeds_in_range_on_grid() {
        assert!(gen_speeds(5, 5, &mut rng(1)).unwrap().iter().all(|s| s.is_one()));
        let s = gen_speeds(20, 5, &mut rng(2)).unwrap();
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|x| *x >= Time::one() && *x <= Time::from_integer(4)));
        assert!(s.iter().all(|x| SPEED_GRID % *x.denom() == 0));
        assert!(s.iter().any(|x| *x > Time::one()));
        assert_eq!(s, gen_speeds(20, 5, &mut rng(2)).unwrap());
        assert!(gen_speeds(3, 4, &mut rng(0)).is_err());
        assert!(gen_speeds(3, 0, &mut rng(0)).is_err());
    }
}
