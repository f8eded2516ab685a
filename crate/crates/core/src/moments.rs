//! Range scans over `n <= N`: the mean value `S1 = sum R(n;a)`, the second
//! moment `S2 = sum R(n;a)^2` (both over `gcd(n, a) = 1`), the deviation of
//! `R` from its quadratic-character main term, and the Turan-type second
//! moment of `Omega_chi`.
//!
//! Scans split `1..=N` into fixed blocks (cut at every checkpoint), evaluate
//! blocks independently and fold them in block order. All integer sums are
//! exact; the only floating sum (the running `log log n` Turan variant) is
//! accumulated block by block in a fixed order, so reports are bit-identical
//! for any thread count.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arith::{gcd, SpfTable};
use crate::characters::{CharacterGroup, DirichletCharacter};
use crate::egyptian::EgyptianContext;
use crate::error::{Error, Result};
use crate::par::{blocks, map_ordered, Execution, SCAN_BLOCK};

/// Default upper bound on `N` for scans.
pub const DEFAULT_SCAN_LIMIT: u64 = 10_000_000;
/// Hard bound: `n^2` must fit in 64 bits.
pub const ABSOLUTE_SCAN_LIMIT: u64 = 1 << 31;
pub const MAX_MODULUS: u64 = 10_000;
pub const MAX_MOMENT_ORDER: u32 = 6;

/// Natural `log log x`.
#[inline]
pub fn loglog(x: f64) -> f64 {
    x.ln().ln()
}

/// One row of a range scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub n: u64,
    pub r: u64,
    pub d_sq: u64,
    pub omega: u32,
    pub big_omega: u32,
    /// `r(n;a)`, the quadratic-character main term.
    pub quad_main: f64,
    /// `phi(a') * r(n;a)` exactly, `a' = a / gcd(n, a)`.
    pub quad_main_scaled: i64,
    pub gcd_na: u64,
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Cumulative report points; `N` itself is always added.
    pub checkpoints: Vec<u64>,
    pub exec: Execution,
    pub limit: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { checkpoints: Vec::new(), exec: Execution::Parallel, limit: DEFAULT_SCAN_LIMIT }
    }
}

/// Powers of ten below `n_max`, then `n_max`.
pub fn default_checkpoints(n_max: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        std::iter::successors(Some(10u64), |&c| c.checked_mul(10)).take_while(|&c| c < n_max).collect();
    out.push(n_max);
    out
}

/// Sorted, deduplicated checkpoints ending at `n_max`.
pub fn resolve_checkpoints(requested: &[u64], n_max: u64) -> Result<Vec<u64>> {
    if requested.is_empty() {
        return Ok(default_checkpoints(n_max));
    }
    if let Some(&bad) = requested.iter().find(|&&c| c == 0 || c > n_max) {
        return Err(Error::InvalidArgument(format!("checkpoint {bad} is outside 1..={n_max}")));
    }
    let mut cps = requested.to_vec();
    cps.push(n_max);
    cps.sort_unstable();
    cps.dedup();
    Ok(cps)
}

fn check_limits(a: u64, n_max: u64, limit: u64) -> Result<()> {
    if a == 0 || a > MAX_MODULUS {
        return Err(Error::InvalidArgument(format!("a = {a} must be in 1..={MAX_MODULUS}")));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let limit = limit.min(ABSOLUTE_SCAN_LIMIT);
    if n_max > limit {
        return Err(Error::InvalidArgument(format!("N = {n_max} exceeds the scan limit {limit}")));
    }
    Ok(())
}

/// Exact per-character Omega_chi moments plus the running-variant float sum.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TuranSums {
    pub sum: u64,
    pub sum_sq: u64,
    /// `sum over 1 < n of (Omega_chi(n) - loglog(n)/2)^2`.
    pub running: f64,
}

/// Sums over one contiguous block of `n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialSums {
    pub count: u64,
    pub coprime_count: u64,
    pub s1: u128,
    pub s2: u128,
    /// `sum (phi(a) R - phi(a) r)^2`, i.e. `phi(a)^2 D`.
    pub d_scaled: u128,
    pub turan: Vec<TuranSums>,
}

impl PartialSums {
    /// Fold `next` (the following block) into `self`.
    pub fn merge(&mut self, next: &PartialSums) {
        self.count += next.count;
        self.coprime_count += next.coprime_count;
        self.s1 += next.s1;
        self.s2 += next.s2;
        self.d_scaled += next.d_scaled;
        if self.turan.is_empty() {
            self.turan = vec![TuranSums::default(); next.turan.len()];
        }
        for (t, u) in self.turan.iter_mut().zip(&next.turan) {
            t.sum += u.sum;
            t.sum_sq += u.sum_sq;
            t.running += u.running;
        }
    }
}

/// Shared state for scanning one modulus.
#[derive(Debug, Clone)]
pub struct Scanner {
    ctx: EgyptianContext,
    real_chars: Vec<DirichletCharacter>,
    real_tables: Vec<Vec<i8>>,
    table: SpfTable,
}

impl Scanner {
    pub fn new(a: u64, n_max: u64) -> Result<Self> {
        let ctx = EgyptianContext::new(a)?;
        let group = CharacterGroup::new(a)?;
        let real_chars = group.real_characters();
        let real_tables = real_chars.iter().map(|c| c.real_table()).collect::<Result<Vec<_>>>()?;
        let table = SpfTable::new(n_max.max(2))?;
        Ok(Scanner { ctx, real_chars, real_tables, table })
    }

    pub fn modulus(&self) -> u64 {
        self.ctx.modulus()
    }

    pub fn table(&self) -> &SpfTable {
        &self.table
    }

    /// Characters with `chi^2 = chi_0` mod `a`, principal first.
    pub fn real_characters(&self) -> &[DirichletCharacter] {
        &self.real_chars
    }

    fn record(&self, n: u64, scratch: &mut Vec<u64>) -> Result<ScanRecord> {
        let fi = self.table.factorize(n)?;
        let e = self.ctx.evaluate(&fi, scratch)?;
        Ok(ScanRecord {
            n,
            r: e.r,
            d_sq: fi.d_of_square(),
            omega: fi.omega_small(),
            big_omega: fi.omega_big(),
            quad_main: e.quad_main_scaled as f64 / e.quad_main_denominator as f64,
            quad_main_scaled: e.quad_main_scaled,
            gcd_na: e.gcd_na,
        })
    }

    pub fn records(&self, range: RangeInclusive<u64>, exec: Execution) -> Result<Vec<ScanRecord>> {
        let chunks = blocks(range, SCAN_BLOCK, &[]);
        let parts = map_ordered(exec, chunks, |block| {
            let mut scratch = Vec::new();
            block.map(|n| self.record(n, &mut scratch)).collect::<Result<Vec<_>>>()
        });
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    /// Sums over one block of `n`.
    pub fn block_sums(&self, range: RangeInclusive<u64>) -> Result<PartialSums> {
        let a = self.ctx.modulus();
        let phi = self.ctx.phi() as i128;
        let mut sums = PartialSums { turan: vec![TuranSums::default(); self.real_tables.len()], ..Default::default() };
        let mut scratch = Vec::new();
        for n in range {
            let fi = self.table.factorize(n)?;
            sums.count += 1;
            if gcd(n, a) == 1 {
                let e = self.ctx.evaluate(&fi, &mut scratch)?;
                let r = e.r as u128;
                sums.coprime_count += 1;
                sums.s1 += r;
                sums.s2 += r * r;
                let diff = phi * e.r as i128 - e.quad_main_scaled as i128;
                sums.d_scaled += (diff * diff) as u128;
            }
            let ll_half = if n > 1 { 0.5 * loglog(n as f64) } else { 0.0 };
            for (t, table) in sums.turan.iter_mut().zip(&self.real_tables) {
                let om = omega_chi_from_table(table, a, fi.factors());
                t.sum += om;
                t.sum_sq += om * om;
                if n > 1 {
                    let dev = om as f64 - ll_half;
                    t.running += dev * dev;
                }
            }
        }
        Ok(sums)
    }

    /// Cumulative sums at each checkpoint (the last checkpoint is the scan end).
    pub fn cumulative(&self, checkpoints: &[u64], exec: Execution) -> Result<Vec<(u64, PartialSums)>> {
        let n_max = *checkpoints.last().ok_or_else(|| Error::InvalidArgument("no checkpoints".into()))?;
        let chunks = blocks(1..=n_max, SCAN_BLOCK, checkpoints);
        let ends: Vec<u64> = chunks.iter().map(|r| *r.end()).collect();
        let parts = map_ordered(exec, chunks, |block| self.block_sums(block));
        let mut acc = PartialSums::default();
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut cp = checkpoints.iter().peekable();
        for (end, part) in ends.into_iter().zip(parts) {
            acc.merge(&part?);
            while let Some(&&c) = cp.peek() {
                if c == end {
                    out.push((c, acc.clone()));
                    cp.next();
                } else {
                    break;
                }
            }
        }
        Ok(out)
    }
}

fn omega_chi_from_table(table: &[i8], a: u64, factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, k)| match table[(p % a) as usize] {
            1 => k as u64,
            -1 => (k / 2) as u64,
            _ => 0,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointRow {
    pub n_max: u64,
    pub coprime_count: u64,
    pub s1: u128,
    pub s2: u128,
    /// `phi(a)^2 * D`, exact.
    pub d_scaled: u128,
    pub d: f64,
    /// `D / (N log^2 N)`; absent for `N < 2`.
    pub d_normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuranRow {
    pub n_max: u64,
    /// `sum_{n <= N} (Omega_chi(n) - loglog(N)/2)^2`
    pub fixed_sum: Option<f64>,
    pub fixed_normalized: Option<f64>,
    /// `sum_{1 < n <= N} (Omega_chi(n) - loglog(n)/2)^2`
    pub running_sum: f64,
    pub running_normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuranSeries {
    /// Exponent tuple of the character in its group.
    pub character: Vec<u64>,
    pub kind: String,
    pub rows: Vec<TuranRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub a: u64,
    pub phi_a: u64,
    pub n_max: u64,
    pub checkpoints: Vec<CheckpointRow>,
    pub turan: Vec<TuranSeries>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn turan_row(n_max: u64, t: &TuranSums) -> TuranRow {
    let n = n_max as f64;
    let (fixed_sum, fixed_normalized, running_normalized) = if n_max >= 3 {
        let ll = loglog(n);
        let h = 0.5 * ll;
        let fixed = t.sum_sq as f64 - 2.0 * h * t.sum as f64 + n * h * h;
        (Some(fixed), Some(fixed / (n * ll)), Some(t.running / (n * ll)))
    } else {
        (None, None, None)
    };
    TuranRow { n_max, fixed_sum, fixed_normalized, running_sum: t.running, running_normalized }
}

fn checkpoint_row(n_max: u64, phi: u64, s: &PartialSums) -> CheckpointRow {
    let phi_sq = (phi as u128 * phi as u128) as f64;
    let d = s.d_scaled as f64 / phi_sq;
    let d_normalized = (n_max >= 2).then(|| {
        let n = n_max as f64;
        d / (n * n.ln().powi(2))
    });
    CheckpointRow { n_max, coprime_count: s.coprime_count, s1: s.s1, s2: s.s2, d_scaled: s.d_scaled, d, d_normalized }
}

/// Full scan of `1..=n_max` for modulus `a`.
pub fn scan(a: u64, n_max: u64, opts: &ScanOptions) -> Result<MomentReport> {
    check_limits(a, n_max, opts.limit)?;
    let start = Instant::now();
    let checkpoints = resolve_checkpoints(&opts.checkpoints, n_max)?;
    let scanner = Scanner::new(a, n_max)?;
    let cumulative = scanner.cumulative(&checkpoints, opts.exec)?;
    let phi = scanner.ctx.phi();
    let rows = cumulative.iter().map(|(n, s)| checkpoint_row(*n, phi, s)).collect();
    let turan = scanner
        .real_chars
        .iter()
        .enumerate()
        .map(|(i, chi)| TuranSeries {
            character: chi.exponents().to_vec(),
            kind: chi.kind().to_string(),
            rows: cumulative.iter().map(|(n, s)| turan_row(*n, &s.turan[i])).collect(),
        })
        .collect();
    Ok(MomentReport { a, phi_a: phi, n_max, checkpoints: rows, turan, elapsed: start.elapsed() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationResult {
    pub n_max: u64,
    /// `phi(a)^2 * D`
    pub d_scaled: u128,
    pub phi_a: u64,
    pub d: f64,
    pub normalized: f64,
}

/// `D(N;a) = sum_{n <= N, (n,a) = 1} (R(n;a) - r(n;a))^2` and `D / (N log^2 N)`.
pub fn deviation_statistic(a: u64, n_max: u64, exec: Execution) -> Result<DeviationResult> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("the deviation ratio needs N >= 2".into()));
    }
    let rep = scan(a, n_max, &ScanOptions { checkpoints: vec![n_max], exec, ..Default::default() })?;
    let row = rep.checkpoints.last().expect("final checkpoint");
    Ok(DeviationResult {
        n_max,
        d_scaled: row.d_scaled,
        phi_a: rep.phi_a,
        d: row.d,
        normalized: row.d_normalized.expect("N >= 2"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TuranVariant {
    /// Centre at `loglog(N)/2`, sum over `n <= N`.
    FixedLogLog,
    /// Centre at `loglog(n)/2`, sum over `1 < n <= N`.
    RunningLogLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuranResult {
    pub n_max: u64,
    pub sum: f64,
    /// `sum / (N loglog N)`
    pub normalized: f64,
}

/// Turan-type second moment of `Omega_chi` for a principal or quadratic
/// character, at each checkpoint.
pub fn turan_statistic_series(
    chi: &DirichletCharacter,
    checkpoints: &[u64],
    variant: TuranVariant,
    exec: Execution,
) -> Result<Vec<TuranResult>> {
    chi.require_real()?;
    let n_max = *checkpoints.last().ok_or_else(|| Error::InvalidArgument("no checkpoints".into()))?;
    if checkpoints.first().is_some_and(|&c| c < 3) {
        return Err(Error::InvalidArgument("the Turan statistic needs N >= 3".into()));
    }
    let checkpoints = resolve_checkpoints(checkpoints, n_max)?;
    let a = chi.modulus();
    let table = SpfTable::new(n_max)?;
    let chars = [chi.real_table()?];
    let chunks = blocks(1..=n_max, SCAN_BLOCK, &checkpoints);
    let ends: Vec<u64> = chunks.iter().map(|r| *r.end()).collect();
    let parts = map_ordered(exec, chunks, |block| -> Result<TuranSums> {
        let mut t = TuranSums::default();
        for n in block {
            let fi = table.factorize(n)?;
            let om = omega_chi_from_table(&chars[0], a, fi.factors());
            t.sum += om;
            t.sum_sq += om * om;
            if n > 1 {
                let dev = om as f64 - 0.5 * loglog(n as f64);
                t.running += dev * dev;
            }
        }
        Ok(t)
    });
    let mut acc = TuranSums::default();
    let mut out = Vec::new();
    let mut cp = checkpoints.iter().peekable();
    for (end, part) in ends.into_iter().zip(parts) {
        let part = part?;
        acc.sum += part.sum;
        acc.sum_sq += part.sum_sq;
        acc.running += part.running;
        if cp.peek() == Some(&&end) {
            cp.next();
            let row = turan_row(end, &acc);
            let (sum, normalized) = match variant {
                TuranVariant::FixedLogLog => (row.fixed_sum.unwrap(), row.fixed_normalized.unwrap()),
                TuranVariant::RunningLogLog => (row.running_sum, row.running_normalized.unwrap()),
            };
            out.push(TuranResult { n_max: end, sum, normalized });
        }
    }
    Ok(out)
}

pub fn turan_statistic(
    chi: &DirichletCharacter,
    n_max: u64,
    variant: TuranVariant,
    exec: Execution,
) -> Result<TuranResult> {
    Ok(turan_statistic_series(chi, &[n_max], variant, exec)?.pop().expect("one checkpoint"))
}

/// Exact `sum_{n <= N, (n,a) = 1} R(n;a)^k` at each checkpoint.
pub fn kth_moment_scan(a: u64, k: u32, checkpoints: &[u64], opts: &ScanOptions) -> Result<Vec<(u64, u128)>> {
    if k == 0 || k > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!("moment order {k} must be in 1..={MAX_MOMENT_ORDER}")));
    }
    let n_max = *checkpoints.last().ok_or_else(|| Error::InvalidArgument("no checkpoints".into()))?;
    check_limits(a, n_max, opts.limit)?;
    let checkpoints = resolve_checkpoints(checkpoints, n_max)?;
    let ctx = EgyptianContext::new(a)?;
    let table = SpfTable::new(n_max.max(2))?;
    let chunks = blocks(1..=n_max, SCAN_BLOCK, &checkpoints);
    let ends: Vec<u64> = chunks.iter().map(|r| *r.end()).collect();
    let parts = map_ordered(opts.exec, chunks, |block| -> Result<u128> {
        let mut scratch = Vec::new();
        let mut acc = 0u128;
        for n in block.filter(|&n| gcd(n, a) == 1) {
            let r = ctx.r(&table.factorize(n)?, &mut scratch)? as u128;
            let term = r.checked_pow(k).ok_or_else(|| Error::Overflow(format!("R({n};{a})^{k} exceeds 128 bits")))?;
            acc = acc.checked_add(term).ok_or_else(|| Error::Overflow("moment sum exceeds 128 bits".into()))?;
        }
        Ok(acc)
    });
    let mut total = 0u128;
    let mut out = Vec::new();
    let mut cp = checkpoints.iter().peekable();
    for (end, part) in ends.into_iter().zip(parts) {
        total = total.checked_add(part?).ok_or_else(|| Error::Overflow("moment sum exceeds 128 bits".into()))?;
        if cp.peek() == Some(&&end) {
            cp.next();
            out.push((end, total));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterKind;

    fn seq() -> ScanOptions {
        ScanOptions { exec: Execution::Sequential, ..Default::default() }
    }

    #[test]
    fn small_scan_values() {
        let rep = scan(1, 10, &ScanOptions { checkpoints: vec![10], ..seq() }).unwrap();
        let row = &rep.checkpoints[0];
        assert_eq!((row.s1, row.s2), (48, 298));
        assert_eq!(row.d_scaled, 0);
        let rep3 = scan(3, 10, &seq()).unwrap();
        assert_eq!(rep3.checkpoints.last().unwrap().d_scaled, 0);
        assert_eq!(rep3.checkpoints.last().unwrap().coprime_count, 7);
    }

    #[test]
    fn deviation_for_a5_by_hand() {
        // n <= 10 coprime to 5: R and 4 r(n;5) = g_chi0(n) + chi(-n) g_chi(n)
        let t = SpfTable::new(10).unwrap();
        let mut oracle = 0i128;
        for n in [1u64, 2, 3, 4, 6, 7, 8, 9] {
            let r = crate::egyptian::r_bruteforce(n, 5, false).unwrap().count as i128;
            let q = crate::egyptian::r_quadratic_main(n, 5, &t).unwrap();
            let diff = 4 * r - q.numerator as i128;
            oracle += diff * diff;
        }
        let dev = deviation_statistic(5, 10, Execution::Sequential).unwrap();
        assert_eq!(dev.d_scaled as i128, oracle);
        assert_eq!(dev.phi_a, 4);
        assert!(oracle > 0);
    }

    #[test]
    fn deviation_vanishes_for_exponent_two_groups() {
        for a in [1u64, 2, 3, 4, 6, 8, 12, 24] {
            let d = deviation_statistic(a, 2000, Execution::Parallel).unwrap();
            assert_eq!(d.d_scaled, 0, "a = {a}");
        }
        assert!(deviation_statistic(5, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn checkpoints_and_limits() {
        assert_eq!(default_checkpoints(1000), vec![10, 100, 1000]);
        assert_eq!(default_checkpoints(5), vec![5]);
        assert_eq!(default_checkpoints(250), vec![10, 100, 250]);
        assert_eq!(resolve_checkpoints(&[100, 10, 100], 500).unwrap(), vec![10, 100, 500]);
        assert!(resolve_checkpoints(&[600], 500).is_err());
        assert!(scan(0, 10, &seq()).is_err());
        assert!(scan(10_001, 10, &seq()).is_err());
        assert!(scan(1, 11, &ScanOptions { limit: 10, ..seq() }).is_err());
    }

    #[test]
    fn merge_equals_single_pass() {
        let scanner = Scanner::new(7, 5000).unwrap();
        let whole = scanner.block_sums(1..=5000).unwrap();
        for split in [1u64, 17, 2500, 4999] {
            let mut left = scanner.block_sums(1..=split).unwrap();
            left.merge(&scanner.block_sums(split + 1..=5000).unwrap());
            assert_eq!(left.s1, whole.s1);
            assert_eq!(left.s2, whole.s2);
            assert_eq!(left.d_scaled, whole.d_scaled);
            assert_eq!(left.coprime_count, whole.coprime_count);
            for (x, y) in left.turan.iter().zip(&whole.turan) {
                assert_eq!((x.sum, x.sum_sq), (y.sum, y.sum_sq));
                assert!((x.running - y.running).abs() < 1e-9 * y.running.max(1.0));
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let opts = ScanOptions { checkpoints: vec![100, 1000, 30_000], ..Default::default() };
        let a = crate::par::with_threads(Some(1), || scan(5, 50_000, &opts).unwrap());
        let b = crate::par::with_threads(Some(6), || scan(5, 50_000, &opts).unwrap());
        let c = scan(5, 50_000, &ScanOptions { exec: Execution::Sequential, ..opts.clone() }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn a1_moments_match_divisor_sums() {
        let t = SpfTable::new(20_000).unwrap();
        let rep = scan(1, 20_000, &ScanOptions { checkpoints: vec![1000, 20_000], ..Default::default() }).unwrap();
        for row in &rep.checkpoints {
            let (mut s1, mut s2) = (0u128, 0u128);
            for n in 1..=row.n_max {
                let d = t.factorize(n).unwrap().d_of_square() as u128;
                s1 += d;
                s2 += d * d;
            }
            assert_eq!((row.s1, row.s2), (s1, s2));
        }
    }

    #[test]
    fn kth_moments() {
        let k3 = kth_moment_scan(1, 3, &[10], &seq()).unwrap();
        assert_eq!(k3, vec![(10, 2160)]);
        let rep = scan(7, 3000, &ScanOptions { checkpoints: vec![300, 3000], ..seq() }).unwrap();
        let k1 = kth_moment_scan(7, 1, &[300, 3000], &seq()).unwrap();
        let k2 = kth_moment_scan(7, 2, &[300, 3000], &seq()).unwrap();
        for ((row, m1), m2) in rep.checkpoints.iter().zip(&k1).zip(&k2) {
            assert_eq!(row.s1, m1.1);
            assert_eq!(row.s2, m2.1);
        }
        assert!(kth_moment_scan(1, 7, &[10], &seq()).is_err());
        assert!(kth_moment_scan(1, 0, &[10], &seq()).is_err());
    }

    #[test]
    fn turan_small_case() {
        let chi = CharacterGroup::new(3)
            .unwrap()
            .all_characters()
            .into_iter()
            .find(|c| c.kind() == CharacterKind::Quadratic)
            .unwrap();
        // Omega_chi(n) = 0 for n = 1, 2, 3
        let ll3 = loglog(3.0);
        let fixed = turan_statistic(&chi, 3, TuranVariant::FixedLogLog, Execution::Sequential).unwrap();
        assert!((fixed.sum - 3.0 * (0.5 * ll3).powi(2)).abs() < 1e-12);
        assert!((fixed.normalized - fixed.sum / (3.0 * ll3)).abs() < 1e-12);
        let running = turan_statistic(&chi, 3, TuranVariant::RunningLogLog, Execution::Sequential).unwrap();
        let expected = (0.5 * loglog(2.0)).powi(2) + (0.5 * ll3).powi(2);
        assert!((running.sum - expected).abs() < 1e-12);
        assert!(turan_statistic(&chi, 2, TuranVariant::FixedLogLog, Execution::Sequential).is_err());
    }

    #[test]
    fn turan_principal_mod_1_is_classical() {
        let chi0 = CharacterGroup::new(1).unwrap().principal();
        let n_max = 1000u64;
        let t = SpfTable::new(n_max).unwrap();
        let h = 0.5 * loglog(n_max as f64);
        let direct: f64 = (1..=n_max).map(|n| (t.factorize(n).unwrap().omega_big() as f64 - h).powi(2)).sum();
        let res = turan_statistic(&chi0, n_max, TuranVariant::FixedLogLog, Execution::Sequential).unwrap();
        assert!((res.sum - direct).abs() < 1e-8 * direct);
    }
}
