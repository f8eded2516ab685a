//! Empirical distribution of
//! `(log R(n;a) - log 3 loglog n) / (log 3 sqrt(loglog n))` against the
//! standard normal CDF, the matching `omega`/`Omega` reference CDFs, and the
//! normal-order check for `log R(n;a)`.
//!
//! `n <= 2` (where `loglog n` is not positive) and `n` with `R(n;a) = 0`
//! (where `log R` is undefined) are excluded and counted. Histogram counts
//! are integers on fixed bin edges, so merged results do not depend on how
//! the range was split.

use serde::Serialize;

use crate::arith::SpfTable;
use crate::egyptian::EgyptianContext;
use crate::error::{Error, Result};
use crate::moments::{loglog, ABSOLUTE_SCAN_LIMIT, MAX_MODULUS};
use crate::par::{blocks, map_ordered, Execution, SCAN_BLOCK};

const LN_3: f64 = 1.098_612_288_668_109_7;

/// Standard normal CDF.
pub fn phi_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `start, start + step, ..., <= end` (with a small tolerance on the end).
pub fn z_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start {
        return Err(Error::InvalidArgument(format!("bad z grid {start}..{end} step {step}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::InvalidArgument(format!("z grid has {count} points; at most 100000 allowed")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn default_z_grid() -> Vec<f64> {
    z_grid(-3.0, 3.0, 0.25).expect("static grid")
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|z| !z.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("z grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfGrid {
    pub n_max: u64,
    pub z_values: Vec<f64>,
    /// Fraction of eligible `n` with statistic `<= z`.
    pub empirical: Vec<f64>,
    /// Same counts over all `n <= N`.
    pub empirical_all_n: Vec<f64>,
    pub gaussian: Vec<f64>,
    pub eligible: u64,
    pub excluded_zero_r: u64,
    pub excluded_small_n: u64,
}

impl CdfGrid {
    fn from_buckets(n_max: u64, z_values: &[f64], buckets: &[u64], zero: u64, small: u64) -> Self {
        let eligible: u64 = buckets.iter().sum();
        let mut run = 0u64;
        let mut empirical = Vec::with_capacity(z_values.len());
        let mut empirical_all_n = Vec::with_capacity(z_values.len());
        for &b in &buckets[..z_values.len()] {
            run += b;
            empirical.push(if eligible == 0 { 0.0 } else { run as f64 / eligible as f64 });
            empirical_all_n.push(run as f64 / n_max as f64);
        }
        CdfGrid {
            n_max,
            z_values: z_values.to_vec(),
            empirical,
            empirical_all_n,
            gaussian: z_values.iter().map(|&z| phi_cdf(z)).collect(),
            eligible,
            excluded_zero_r: zero,
            excluded_small_n: small,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.empirical.windows(2).all(|w| w[0] <= w[1]) && self.gaussian.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `max |empirical - Phi|` over the grid (eligible-`n` denominator).
pub fn ks_distance(grid: &CdfGrid) -> f64 {
    grid.empirical.iter().zip(&grid.gaussian).map(|(e, g)| (e - g).abs()).fold(0.0, f64::max)
}

/// As [`ks_distance`], with every `n <= N` in the denominator.
pub fn ks_distance_all_n(grid: &CdfGrid) -> f64 {
    grid.empirical_all_n.iter().zip(&grid.gaussian).map(|(e, g)| (e - g).abs()).fold(0.0, f64::max)
}

/// Which statistics one pass over `3..=N` collects.
#[derive(Debug, Clone, Default)]
struct PassSpec {
    r_grid: Option<Vec<f64>>,
    big_omega_grid: Option<Vec<f64>>,
    small_omega_grid: Option<Vec<f64>>,
    epsilons: Vec<f64>,
}

impl PassSpec {
    fn needs_r(&self) -> bool {
        self.r_grid.is_some() || !self.epsilons.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
struct PassCounts {
    r_buckets: Vec<u64>,
    big_buckets: Vec<u64>,
    small_buckets: Vec<u64>,
    deviating: Vec<u64>,
    zero_r: u64,
    eligible: u64,
}

impl PassCounts {
    fn new(spec: &PassSpec) -> Self {
        let len = |g: &Option<Vec<f64>>| g.as_ref().map_or(0, |g| g.len() + 1);
        PassCounts {
            r_buckets: vec![0; len(&spec.r_grid)],
            big_buckets: vec![0; len(&spec.big_omega_grid)],
            small_buckets: vec![0; len(&spec.small_omega_grid)],
            deviating: vec![0; spec.epsilons.len()],
            ..Default::default()
        }
    }

    fn merge(&mut self, o: &PassCounts) {
        for (x, y) in [
            (&mut self.r_buckets, &o.r_buckets),
            (&mut self.big_buckets, &o.big_buckets),
            (&mut self.small_buckets, &o.small_buckets),
            (&mut self.deviating, &o.deviating),
        ] {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
        }
        self.zero_r += o.zero_r;
        self.eligible += o.eligible;
    }
}

#[inline]
fn bucket(grid: &[f64], t: f64) -> usize {
    grid.partition_point(|&z| z < t)
}

fn check_inputs(a: u64, n_max: u64) -> Result<()> {
    if a == 0 || a > MAX_MODULUS {
        return Err(Error::InvalidArgument(format!("a = {a} must be in 1..={MAX_MODULUS}")));
    }
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!("N = {n_max} is below the minimum of 10")));
    }
    if n_max > ABSOLUTE_SCAN_LIMIT {
        return Err(Error::InvalidArgument(format!("N = {n_max} exceeds the scan limit {ABSOLUTE_SCAN_LIMIT}")));
    }
    Ok(())
}

fn run_pass(a: u64, n_max: u64, spec: &PassSpec, exec: Execution) -> Result<PassCounts> {
    for g in [&spec.r_grid, &spec.big_omega_grid, &spec.small_omega_grid].into_iter().flatten() {
        check_grid(g)?;
    }
    let table = SpfTable::new(n_max)?;
    let ctx = EgyptianContext::new(a)?;
    let chunks = blocks(3..=n_max, SCAN_BLOCK, &[]);
    let parts = map_ordered(exec, chunks, |block| -> Result<PassCounts> {
        let mut c = PassCounts::new(spec);
        let mut scratch = Vec::new();
        for n in block {
            let fi = table.factorize(n)?;
            let ll = loglog(n as f64);
            let root = ll.sqrt();
            if let Some(g) = &spec.big_omega_grid {
                c.big_buckets[bucket(g, (fi.omega_big() as f64 - ll) / root)] += 1;
            }
            if let Some(g) = &spec.small_omega_grid {
                c.small_buckets[bucket(g, (fi.omega_small() as f64 - ll) / root)] += 1;
            }
            if !spec.needs_r() {
                continue;
            }
            let r = ctx.r(&fi, &mut scratch)?;
            if r == 0 {
                c.zero_r += 1;
                continue;
            }
            c.eligible += 1;
            let log_r = (r as f64).ln();
            if let Some(g) = &spec.r_grid {
                c.r_buckets[bucket(g, (log_r - LN_3 * ll) / (LN_3 * root))] += 1;
            }
            let ratio = log_r / (LN_3 * ll);
            for (d, &eps) in c.deviating.iter_mut().zip(&spec.epsilons) {
                if (ratio - 1.0).abs() > eps {
                    *d += 1;
                }
            }
        }
        Ok(c)
    });
    let mut total = PassCounts::new(spec);
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

fn small_n(n_max: u64) -> u64 {
    n_max.min(2)
}

/// Empirical CDF of the normalized `log R(n;a)` on `z_grid`.
pub fn erdos_kac_cdf(a: u64, n_max: u64, z_grid: &[f64], exec: Execution) -> Result<CdfGrid> {
    check_inputs(a, n_max)?;
    let spec = PassSpec { r_grid: Some(z_grid.to_vec()), ..Default::default() };
    let c = run_pass(a, n_max, &spec, exec)?;
    Ok(CdfGrid::from_buckets(n_max, z_grid, &c.r_buckets, c.zero_r, small_n(n_max)))
}

/// Empirical CDFs of `(Omega(n) - loglog n)/sqrt(loglog n)` and
/// `(omega(n) - loglog n)/sqrt(loglog n)` over `3 <= n <= N`, in that order.
pub fn omega_reference_cdfs(n_max: u64, z_grid: &[f64], exec: Execution) -> Result<(CdfGrid, CdfGrid)> {
    check_inputs(1, n_max)?;
    let spec = PassSpec {
        big_omega_grid: Some(z_grid.to_vec()),
        small_omega_grid: Some(z_grid.to_vec()),
        ..Default::default()
    };
    let c = run_pass(1, n_max, &spec, exec)?;
    Ok((
        CdfGrid::from_buckets(n_max, z_grid, &c.big_buckets, 0, small_n(n_max)),
        CdfGrid::from_buckets(n_max, z_grid, &c.small_buckets, 0, small_n(n_max)),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalOrderReport {
    pub a: u64,
    pub n_max: u64,
    pub epsilon: f64,
    pub eligible: u64,
    pub deviating: u64,
    /// `deviating / eligible`
    pub fraction: f64,
}

/// Fraction of eligible `n <= N` with `|log R / (log 3 loglog n) - 1| > epsilon`.
pub fn normal_order_report(a: u64, n_max: u64, epsilon: f64, exec: Execution) -> Result<NormalOrderReport> {
    Ok(normal_order_reports(a, n_max, &[epsilon], exec)?.remove(0))
}

pub fn normal_order_reports(a: u64, n_max: u64, epsilons: &[f64], exec: Execution) -> Result<Vec<NormalOrderReport>> {
    check_inputs(a, n_max)?;
    if epsilons.is_empty() || epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let spec = PassSpec { epsilons: epsilons.to_vec(), ..Default::default() };
    let c = run_pass(a, n_max, &spec, exec)?;
    Ok(epsilons
        .iter()
        .zip(&c.deviating)
        .map(|(&epsilon, &deviating)| NormalOrderReport {
            a,
            n_max,
            epsilon,
            eligible: c.eligible,
            deviating,
            fraction: if c.eligible == 0 { 0.0 } else { deviating as f64 / c.eligible as f64 },
        })
        .collect())
}

/// The `R` CDF checked against the `Omega` and `omega` reference CDFs at
/// shifted arguments: `Omega_cdf(z - offset) - slack <= R_cdf(z) <= omega_cdf(z + offset) + slack`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub offset: f64,
    pub slack: f64,
    /// `max over z of Omega_cdf(z - offset) - R_cdf(z)`
    pub lower_gap: f64,
    /// `max over z of R_cdf(z) - omega_cdf(z + offset)`
    pub upper_gap: f64,
    pub holds: bool,
    /// The same inequalities with the two reference CDFs exchanged.
    pub swapped_lower_gap: f64,
    pub swapped_upper_gap: f64,
    pub swapped_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub a: u64,
    pub grid: CdfGrid,
    pub ks_eligible: f64,
    pub ks_all_n: f64,
    pub sandwich: SandwichReport,
}

fn shifted(grid: &[f64], by: f64) -> Vec<f64> {
    grid.iter().map(|z| z + by).collect()
}

/// One pass computing the `R` CDF, the KS distances and the sandwich check.
pub fn distribution_report(
    a: u64,
    n_max: u64,
    z_grid: &[f64],
    offset: f64,
    slack: f64,
    exec: Execution,
) -> Result<DistributionReport> {
    check_inputs(a, n_max)?;
    let down = shifted(z_grid, -offset);
    let up = shifted(z_grid, offset);
    // each reference statistic is needed at both shifts (direct and swapped check)
    let spec_main = PassSpec {
        r_grid: Some(z_grid.to_vec()),
        big_omega_grid: Some(down.clone()),
        small_omega_grid: Some(up.clone()),
        ..Default::default()
    };
    let spec_swap = PassSpec { big_omega_grid: Some(up), small_omega_grid: Some(down), ..Default::default() };
    let c = run_pass(a, n_max, &spec_main, exec)?;
    let s = run_pass(a, n_max, &spec_swap, exec)?;
    let small = small_n(n_max);
    let grid = CdfGrid::from_buckets(n_max, z_grid, &c.r_buckets, c.zero_r, small);
    let big_down = CdfGrid::from_buckets(n_max, &shifted(z_grid, -offset), &c.big_buckets, 0, small);
    let small_up = CdfGrid::from_buckets(n_max, &shifted(z_grid, offset), &c.small_buckets, 0, small);
    let big_up = CdfGrid::from_buckets(n_max, &shifted(z_grid, offset), &s.big_buckets, 0, small);
    let small_down = CdfGrid::from_buckets(n_max, &shifted(z_grid, -offset), &s.small_buckets, 0, small);

    let max_gap = |lhs: &[f64], rhs: &[f64]| lhs.iter().zip(rhs).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
    let lower_gap = max_gap(&big_down.empirical, &grid.empirical);
    let upper_gap = max_gap(&grid.empirical, &small_up.empirical);
    let swapped_lower_gap = max_gap(&small_down.empirical, &grid.empirical);
    let swapped_upper_gap = max_gap(&grid.empirical, &big_up.empirical);
    let sandwich = SandwichReport {
        offset,
        slack,
        lower_gap,
        upper_gap,
        holds: lower_gap <= slack && upper_gap <= slack,
        swapped_lower_gap,
        swapped_upper_gap,
        swapped_holds: swapped_lower_gap <= slack && swapped_upper_gap <= slack,
    };
    Ok(DistributionReport { a, ks_eligible: ks_distance(&grid), ks_all_n: ks_distance_all_n(&grid), grid, sandwich })
}
