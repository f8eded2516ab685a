//! Invariant suites behind `egyfrac verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{euler_phi, gcd, FactoredInteger, SpfTable};
use crate::characters::CharacterGroup;
use crate::cyclo::CyclotomicInt;
use crate::dirichlet_series::{
    coefficient_lhs, coefficient_rhs, f_prime_identity_check, f_prime_power, local_factor_principal_check,
};
use crate::egyptian::{r_bruteforce, r_character_formula, r_divisor_method, r_general};
use crate::error::{Error, Result};
use crate::moments::{deviation_statistic, scan, ScanOptions};
use crate::par::{map_ordered, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Characters,
    Quick,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "characters" => Ok(Suite::Characters),
            "quick" => Ok(Suite::Quick),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite '{other}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Identities => "identities",
            Suite::Characters => "characters",
            Suite::Quick => "quick",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual cases examined.
    pub cases: u64,
    pub detail: String,
}

impl CheckResult {
    fn from_failures(name: &str, cases: u64, failures: Vec<String>) -> Self {
        let passed = failures.is_empty();
        let detail = match failures.first() {
            None => String::new(),
            Some(first) => format!("{} failure(s), first: {first}", failures.len()),
        };
        CheckResult { name: name.to_string(), passed, cases, detail }
    }
}

/// Bounds for one run of the suites.
#[derive(Debug, Clone, Copy)]
struct Bounds {
    cross_n: u64,
    cross_a: u64,
    coeff_n: u64,
    f_prime_p: u64,
    f_power_p: u64,
    f_power_k: u32,
    f_power_a: u64,
    orth_a: u64,
    moments_n: u64,
}

const FULL: Bounds = Bounds {
    cross_n: 5000,
    cross_a: 12,
    coeff_n: 2000,
    f_prime_p: 100,
    f_power_p: 50,
    f_power_k: 6,
    f_power_a: 8,
    orth_a: 30,
    moments_n: 10_000,
};

const QUICK: Bounds = Bounds {
    cross_n: 1000,
    cross_a: 12,
    coeff_n: 300,
    f_prime_p: 100,
    f_power_p: 50,
    f_power_k: 4,
    f_power_a: 8,
    orth_a: 30,
    moments_n: 10_000,
};

pub fn run_suite(suite: Suite, exec: Execution) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match suite {
        Suite::Identities => identities(&FULL, exec, &mut out)?,
        Suite::Characters => characters(&FULL, exec, &mut out),
        Suite::Quick => {
            identities(&QUICK, exec, &mut out)?;
            characters(&QUICK, exec, &mut out);
            moments(&QUICK, exec, &mut out)?;
        }
        Suite::All => {
            identities(&FULL, exec, &mut out)?;
            characters(&FULL, exec, &mut out);
            moments(&FULL, exec, &mut out)?;
        }
    }
    Ok(out)
}

fn identities(b: &Bounds, exec: Execution, out: &mut Vec<CheckResult>) -> Result<()> {
    out.push(cross_method(b.cross_n, b.cross_a, exec)?);
    out.push(coefficient_identity(b.coeff_n, &[3, 4, 5, 8], exec));
    out.push(f_prime_identity(b.f_prime_p, b.f_power_a));
    out.push(f_power_bound(b.f_power_p, b.f_power_k, b.f_power_a));
    out.push(local_factor(b.f_power_p, 10));
    Ok(())
}

fn characters(b: &Bounds, exec: Execution, out: &mut Vec<CheckResult>) {
    out.push(orthogonality(b.orth_a, exec));
    out.push(group_order(500));
}

fn moments(b: &Bounds, exec: Execution, out: &mut Vec<CheckResult>) -> Result<()> {
    let opts = ScanOptions { checkpoints: vec![10, b.moments_n], exec, ..Default::default() };
    let rep = scan(1, b.moments_n, &opts)?;
    let table = SpfTable::new(b.moments_n)?;
    let mut s1 = 0u128;
    let mut s2 = 0u128;
    for n in 1..=b.moments_n {
        let d = table.factorize(n)?.d_of_square() as u128;
        s1 += d;
        s2 += d * d;
    }
    let last = rep.checkpoints.last().expect("checkpoints");
    let mut failures = Vec::new();
    if (rep.checkpoints[0].s1, rep.checkpoints[0].s2) != (48, 298) {
        failures.push(format!("S1, S2 at N=10 are {}, {}", rep.checkpoints[0].s1, rep.checkpoints[0].s2));
    }
    if (last.s1, last.s2) != (s1, s2) {
        failures.push(format!("S1, S2 at N={} disagree with direct d(n^2) sums", b.moments_n));
    }
    out.push(CheckResult::from_failures("moments_a1", 2, failures));

    let mut failures = Vec::new();
    let divisors_24 = [1u64, 2, 3, 4, 6, 8, 12, 24];
    for &a in &divisors_24 {
        let dev = deviation_statistic(a, b.moments_n, exec)?;
        if dev.d_scaled != 0 {
            failures.push(format!("a={a}: D*phi^2 = {}", dev.d_scaled));
        }
    }
    out.push(CheckResult::from_failures("deviation_zero_a_divides_24", divisors_24.len() as u64, failures));
    Ok(())
}

/// Brute force against the sieve-backed general method, and, for coprime
/// pairs, against the divisor and character methods.
pub fn cross_method(n_max: u64, a_max: u64, exec: Execution) -> Result<CheckResult> {
    let table = SpfTable::new(n_max)?;
    let groups: Vec<CharacterGroup> = (1..=a_max).map(CharacterGroup::new).collect::<Result<_>>()?;
    let ns: Vec<u64> = (1..=n_max).collect();
    let per_n = map_ordered(exec, ns, |n| -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let fi = table.factorize(n)?;
        for (i, group) in groups.iter().enumerate() {
            let a = i as u64 + 1;
            let brute = r_bruteforce(n, a, false)?.count;
            let general = r_general(n, a, &table)?;
            let mut vals = vec![("general", general)];
            if gcd(n, a) == 1 {
                vals.push(("divisor", r_divisor_method(&fi, a)?));
                vals.push(("character", r_character_formula(&fi, group)?));
            }
            for (name, v) in vals {
                if v != brute {
                    bad.push(format!("n={n} a={a}: brute {brute}, {name} {v}"));
                }
            }
        }
        Ok(bad)
    });
    let mut failures = Vec::new();
    for bad in per_n {
        failures.extend(bad?);
    }
    Ok(CheckResult::from_failures("cross_method", n_max * a_max, failures))
}

/// The coefficient identity for every ordered pair of characters mod each `a`.
pub fn coefficient_identity(n_max: u64, moduli: &[u64], exec: Execution) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for &a in moduli {
        let chars = match CharacterGroup::new(a) {
            Ok(g) => g.all_characters(),
            Err(e) => {
                failures.push(format!("a={a}: {e}"));
                continue;
            }
        };
        let ns: Vec<u64> = (1..=n_max).collect();
        let per_n = map_ordered(exec, ns, |n| {
            let mut bad = Vec::new();
            let fi = match FactoredInteger::by_trial_division(n) {
                Ok(fi) => fi,
                Err(e) => return vec![format!("n={n}: {e}")],
            };
            for c1 in &chars {
                for c2 in &chars {
                    let lhs = coefficient_lhs(c1, c2, &fi, u64::MAX);
                    let rhs = coefficient_rhs(c1, c2, &fi);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (Ok(_), Ok(_)) => bad.push(format!(
                            "a={a} n={n} chi1={:?} chi2={:?}: sides differ",
                            c1.exponents(),
                            c2.exponents()
                        )),
                        (Err(e), _) | (_, Err(e)) => bad.push(format!("a={a} n={n}: {e}")),
                    }
                }
            }
            bad
        });
        cases += n_max * (chars.len() * chars.len()) as u64;
        failures.extend(per_n.into_iter().flatten());
    }
    CheckResult::from_failures("coefficient_identity", cases, failures)
}

fn primes_up_to(p_max: u64) -> Vec<u64> {
    (2..=p_max).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// `F(p)` against the formal eight-character sum, all pairs mod `a <= a_max`.
pub fn f_prime_identity(p_max: u64, a_max: u64) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    let primes = primes_up_to(p_max);
    for a in 1..=a_max {
        let chars = CharacterGroup::new(a).map(|g| g.all_characters()).unwrap_or_default();
        for c1 in &chars {
            for c2 in &chars {
                for &p in &primes {
                    cases += 1;
                    match f_prime_identity_check(c1, c2, p) {
                        Ok(true) => {}
                        Ok(false) => {
                            failures.push(format!("a={a} p={p} chi1={:?} chi2={:?}", c1.exponents(), c2.exponents()))
                        }
                        Err(e) => failures.push(format!("a={a} p={p}: {e}")),
                    }
                }
            }
        }
    }
    CheckResult::from_failures("f_prime_identity", cases, failures)
}

/// `|F(p^k)| <= 8k`, and `F(p^k) = 8k` exactly for the principal pair when `p` does not divide `a`.
pub fn f_power_bound(p_max: u64, k_max: u32, a_max: u64) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    let primes = primes_up_to(p_max);
    for a in 1..=a_max {
        let group = match CharacterGroup::new(a) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("a={a}: {e}"));
                continue;
            }
        };
        let chars = group.all_characters();
        let principal = group.principal();
        for c1 in &chars {
            for c2 in &chars {
                for &p in &primes {
                    for k in 1..=k_max {
                        cases += 1;
                        let f = match f_prime_power(c1, c2, p, k) {
                            Ok(f) => f,
                            Err(e) => {
                                failures.push(format!("a={a} p={p} k={k}: {e}"));
                                continue;
                            }
                        };
                        let bound = 8.0 * k as f64;
                        if f.to_complex().abs() > bound + 1e-9 {
                            failures.push(format!("a={a} p={p} k={k}: |F| = {}", f.to_complex().abs()));
                        }
                        let both_principal = c1 == &principal && c2 == &principal;
                        if both_principal && a % p != 0 && f != CyclotomicInt::from_integer(f.order(), 8 * k as i64) {
                            failures.push(format!("a={a} p={p} k={k}: principal F(p^k) != 8k"));
                        }
                    }
                }
            }
        }
    }
    CheckResult::from_failures("f_power_bound", cases, failures)
}

/// Series coefficients of the principal local factor against `(2k+1)^2`.
pub fn local_factor(p_max: u64, k_max: u32) -> CheckResult {
    let primes = primes_up_to(p_max);
    let failures: Vec<String> =
        primes.iter().filter(|&&p| !local_factor_principal_check(p, k_max)).map(|p| format!("p={p}")).collect();
    CheckResult::from_failures("local_factor", primes.len() as u64, failures)
}

/// Row and column orthogonality of the full character table mod every `a <= a_max`.
pub fn orthogonality(a_max: u64, exec: Execution) -> CheckResult {
    let moduli: Vec<u64> = (1..=a_max).collect();
    let per_a = map_ordered(exec, moduli, |a| -> (u64, Vec<String>) {
        let mut bad = Vec::new();
        let group = match CharacterGroup::new(a) {
            Ok(g) => g,
            Err(e) => return (0, vec![format!("a={a}: {e}")]),
        };
        let l = group.exponent();
        let phi = group.order() as i64;
        let chars = group.all_characters();
        let mut cases = 0;
        for c1 in &chars {
            for c2 in &chars {
                cases += 1;
                let prod = match c1.multiply(&c2.conjugate()) {
                    Ok(p) => p,
                    Err(e) => {
                        bad.push(format!("a={a}: {e}"));
                        continue;
                    }
                };
                let mut total = CyclotomicInt::zero(l);
                for n in 0..a {
                    total.add_root(prod.evaluate(n), 1);
                }
                let expected = if c1 == c2 { phi } else { 0 };
                if total.as_integer() != Some(expected) {
                    bad.push(format!("a={a} chi1={:?} chi2={:?}: row sum", c1.exponents(), c2.exponents()));
                }
            }
        }
        for m in 0..a {
            for n in 0..a {
                if gcd(n, a) != 1 {
                    continue;
                }
                cases += 1;
                let mut total = CyclotomicInt::zero(l);
                for chi in &chars {
                    total.add_root(chi.evaluate(m).mul(chi.evaluate(n).conj()), 1);
                }
                let expected = if m % a == n % a { phi } else { 0 };
                if total.as_integer() != Some(expected) {
                    bad.push(format!("a={a} m={m} n={n}: column sum"));
                }
            }
        }
        (cases, bad)
    });
    let mut cases = 0;
    let mut failures = Vec::new();
    for (c, bad) in per_a {
        cases += c;
        failures.extend(bad);
    }
    CheckResult::from_failures("orthogonality", cases, failures)
}

/// Number of characters equals `phi(a)`, real characters are those of order at most 2.
pub fn group_order(a_max: u64) -> CheckResult {
    let mut failures = Vec::new();
    for a in 1..=a_max {
        let ok = CharacterGroup::new(a).and_then(|g| {
            let phi = euler_phi(&FactoredInteger::by_trial_division(a)?);
            let all = g.all_characters();
            let real = all.iter().filter(|c| c.order() <= 2).count() as u64;
            Ok(g.order() == phi && all.len() as u64 == phi && real == g.real_character_count())
        });
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(format!("a={a}")),
            Err(e) => failures.push(format!("a={a}: {e}")),
        }
    }
    CheckResult::from_failures("group_order", a_max, failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let e = Execution::Parallel;
        assert!(cross_method(200, 6, e).unwrap().passed);
        assert!(coefficient_identity(60, &[3, 4], e).passed);
        assert!(f_prime_identity(30, 5).passed);
        assert!(f_power_bound(20, 3, 5).passed);
        assert!(local_factor(30, 10).passed);
        assert!(orthogonality(12, e).passed);
        assert!(group_order(60).passed);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Identities, Suite::Characters, Suite::Quick, Suite::All] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
