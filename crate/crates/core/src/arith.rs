//! Smallest-prime-factor sieve and the elementary multiplicative functions
//! built on top of it.
//!
//! The sieve is the linear (Euler) sieve: every composite is crossed out
//! exactly once, by its smallest prime factor, so the table is built in
//! `O(limit)` and any `n <= limit` factors in `O(log n)` lookups.

use crate::error::{Error, Result};

/// Default cap on the memory spent on one [`SpfTable`] (1 GiB).
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Default cap on `d(n^2)` for routines that materialize divisor lists.
pub const DEFAULT_DIVISOR_CAP: u64 = 1 << 20;

/// Smallest prime factor for every integer in `2..=limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::LimitTooSmall { limit });
        }
        // spf entries plus a generous allowance for the prime list
        let bytes = (limit + 1).saturating_mul(4).saturating_add(limit / 2);
        if bytes > budget || limit > u32::MAX as u64 {
            return Err(Error::OverMemoryBudget { limit, bytes, budget });
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i as u64 * p as u64;
                if p > si || m > limit {
                    break;
                }
                spf[m as usize] = p;
            }
        }
        Ok(SpfTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.spf(n) == Some(n)
    }

    /// All primes up to the limit, increasing.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfRange { n, limit: self.limit });
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        Ok(FactoredInteger { value: n, factors })
    }
}

/// Free-function form of [`SpfTable::new`].
pub fn build_spf_table(limit: u64) -> Result<SpfTable> {
    SpfTable::new(limit)
}

/// Free-function form of [`SpfTable::factorize`].
pub fn factorize(n: u64, table: &SpfTable) -> Result<FactoredInteger> {
    table.factorize(n)
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Factor by trial division. Meant for moduli and small inputs, not
    /// for scans.
    pub fn by_trial_division(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p.saturating_mul(p) <= m {
            if m.is_multiple_of(p) {
                let mut k = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    k += 1;
                }
                factors.push((p, k));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(FactoredInteger { value: n, factors })
    }

    /// Build from `(prime, multiplicity)` pairs; checks the invariants
    /// (strictly increasing primes, positive multiplicities, no overflow).
    /// Primality of the bases is the caller's responsibility.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut prev = 1u64;
        for &(p, k) in &factors {
            if p <= prev || k == 0 {
                return Err(Error::InvalidArgument(format!(
                    "factor list must have increasing primes and positive multiplicities: {factors:?}"
                )));
            }
            prev = p;
            let pk = p.checked_pow(k).ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
            value = value.checked_mul(pk).ok_or_else(|| Error::Overflow("factored value exceeds u64".into()))?;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn one() -> Self {
        FactoredInteger { value: 1, factors: Vec::new() }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Divide out `d`, which must divide the value.
    pub fn divide_exact(&self, d: u64) -> Result<Self> {
        if d == 0 || !self.value.is_multiple_of(d) {
            return Err(Error::InvalidArgument(format!("{d} does not divide {}", self.value)));
        }
        let mut rest = d;
        let mut factors = Vec::with_capacity(self.factors.len());
        for &(p, k) in &self.factors {
            let mut k = k;
            while k > 0 && rest.is_multiple_of(p) {
                rest /= p;
                k -= 1;
            }
            if k > 0 {
                factors.push((p, k));
            }
        }
        debug_assert_eq!(rest, 1);
        Ok(FactoredInteger { value: self.value / d, factors })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    /// `d(n^2) = prod (2k + 1)` over `p^k || n`.
    pub fn d_of_square(&self) -> u64 {
        self.factors.iter().map(|&(_, k)| 2 * k as u64 + 1).product()
    }

    /// Number of distinct prime factors, omega(n).
    pub fn omega_small(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of prime factors with multiplicity, Omega(n).
    pub fn omega_big(&self) -> u32 {
        self.factors.iter().map(|&(_, k)| k).sum()
    }

    /// All divisors of `n^2`, increasing. Fails if `d(n^2)` is over `cap`.
    pub fn divisors_of_square(&self, cap: u64) -> Result<Vec<u64>> {
        let count = self.d_of_square();
        if count > cap {
            return Err(Error::DivisorCap { n: self.value, count, cap });
        }
        let mut divs = Vec::with_capacity(count as usize);
        divs.push(1u64);
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pj = 1u64;
            for _ in 0..2 * k {
                pj *= p;
                for i in 0..len {
                    divs.push(divs[i] * pj);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// Divisors of `n` itself (not of `n^2`), increasing, as factored
    /// integers.
    pub fn divisors(&self) -> Vec<FactoredInteger> {
        let mut out = vec![FactoredInteger::one()];
        for &(p, k) in &self.factors {
            let len = out.len();
            let mut pj = 1u64;
            for j in 1..=k {
                pj *= p;
                for i in 0..len {
                    let base = &out[i];
                    let mut factors = base.factors.clone();
                    factors.push((p, j));
                    out.push(FactoredInteger { value: base.value * pj, factors });
                }
            }
        }
        out.sort_by_key(|f| f.value);
        out
    }
}

pub fn d_of_square(fi: &FactoredInteger) -> u64 {
    fi.d_of_square()
}

pub fn divisors_of_square(fi: &FactoredInteger, cap: u64) -> Result<Vec<u64>> {
    fi.divisors_of_square(cap)
}

pub fn omega_small(fi: &FactoredInteger) -> u32 {
    fi.omega_small()
}

pub fn omega_big(fi: &FactoredInteger) -> u32 {
    fi.omega_big()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Euler's totient from a factorization.
pub fn euler_phi(fi: &FactoredInteger) -> u64 {
    fi.factors().iter().map(|&(p, k)| (p - 1) * p.pow(k - 1)).product()
}

/// Prime factor list of `n`, as the bare primes.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    FactoredInteger::by_trial_division(n.max(1)).map(|f| f.primes().collect()).unwrap_or_default()
}

/// Positive divisors of `n`, increasing (trial division).
pub fn divisors_of(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
