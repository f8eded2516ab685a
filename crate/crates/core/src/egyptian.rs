//! `R(n;a)`: the number of ordered pairs `(x, y)` of positive integers with
//! `a/n = 1/x + 1/y`.
//!
//! Three independent routes are provided:
//!
//! * [`r_bruteforce`] walks `x` through `n/a < x <= 2n/a` and solves for `y`.
//! * [`r_divisor_method`] uses `(ax - n)(ay - n) = n^2`: for `gcd(n, a) = 1`,
//!   `R(n;a)` counts divisors `u | n^2` with `u = -n (mod a)`.
//! * [`r_character_formula`] isolates that residue class with the
//!   orthogonality of characters mod `a`, summed exactly in `Z[zeta_L]`.
//!
//! [`r_general`] handles `gcd(n, a) > 1` through `R(n;a) = R(n/g; a/g)`.

use serde::Serialize;

use crate::arith::{gcd, FactoredInteger, SpfTable, DEFAULT_DIVISOR_CAP};
use crate::characters::{CharacterGroup, DirichletCharacter};
use crate::cyclo::CyclotomicInt;
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SolutionPair {
    pub x: u64,
    pub y: u64,
}

impl SolutionPair {
    pub fn satisfies(&self, n: u64, a: u64) -> bool {
        a as u128 * self.x as u128 * self.y as u128 == n as u128 * (self.x as u128 + self.y as u128)
    }

    pub fn swapped(&self) -> SolutionPair {
        SolutionPair { x: self.y, y: self.x }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceCount {
    pub count: u64,
    /// All ordered solutions sorted by `x`, when requested.
    pub solutions: Option<Vec<SolutionPair>>,
}

pub fn r_bruteforce(n: u64, a: u64, with_solutions: bool) -> Result<BruteForceCount> {
    r_bruteforce_with_budget(n, a, with_solutions, DEFAULT_BRUTE_FORCE_BUDGET)
}

pub fn r_bruteforce_with_budget(n: u64, a: u64, with_solutions: bool, budget: u64) -> Result<BruteForceCount> {
    if n == 0 || a == 0 {
        return Err(Error::InvalidArgument("n and a must be positive".into()));
    }
    if n > budget {
        return Err(Error::BruteForceBudget { n, budget });
    }
    let mut count = 0u64;
    let mut low_half = Vec::new();
    // x <= y exactly when x <= 2n/a
    for x in n / a + 1..=2 * n / a {
        let t = a * x - n;
        let nx = n * x;
        if nx.is_multiple_of(t) {
            let pair = SolutionPair { x, y: nx / t };
            if !pair.satisfies(n, a) {
                return Err(Error::Consistency(format!("bad solution {pair:?} for n = {n}, a = {a}")));
            }
            count += if pair.x == pair.y { 1 } else { 2 };
            if with_solutions {
                low_half.push(pair);
            }
        }
    }
    let solutions = with_solutions.then(|| {
        let mut all: Vec<SolutionPair> =
            low_half.iter().flat_map(|p| if p.x == p.y { vec![*p] } else { vec![*p, p.swapped()] }).collect();
        all.sort();
        all
    });
    Ok(BruteForceCount { count, solutions })
}

fn require_coprime(n: u64, a: u64) -> Result<()> {
    let g = gcd(n, a);
    if g > 1 {
        Err(Error::NotCoprime { n, a, gcd: g })
    } else {
        Ok(())
    }
}

fn check_cap(fi: &FactoredInteger, cap: u64) -> Result<u64> {
    let count = fi.d_of_square();
    if count > cap {
        Err(Error::DivisorCap { n: fi.value(), count, cap })
    } else {
        Ok(count)
    }
}

/// Residues mod `a` of all divisors of `n^2`, with multiplicity.
fn divisor_residues(fi: &FactoredInteger, a: u64, out: &mut Vec<u64>) {
    out.clear();
    out.push(1 % a);
    for &(p, k) in fi.factors() {
        let pr = p % a;
        let len = out.len();
        let mut mult = 1 % a;
        for _ in 0..2 * k {
            mult = mult * pr % a;
            for i in 0..len {
                let r = out[i] * mult % a;
                out.push(r);
            }
        }
    }
}

fn count_divisors_in_class(fi: &FactoredInteger, a: u64, scratch: &mut Vec<u64>) -> u64 {
    let n = fi.value();
    let target = (a - n % a) % a;
    divisor_residues(fi, a, scratch);
    scratch.iter().filter(|&&r| r == target).count() as u64
}

/// Divisors `u | n^2` with `u = -n (mod a)`; needs `gcd(n, a) = 1`.
pub fn r_divisor_method(fi: &FactoredInteger, a: u64) -> Result<u64> {
    r_divisor_method_with_cap(fi, a, DEFAULT_DIVISOR_CAP)
}

pub fn r_divisor_method_with_cap(fi: &FactoredInteger, a: u64, cap: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be positive".into()));
    }
    require_coprime(fi.value(), a)?;
    let d = check_cap(fi, cap)?;
    if a == 1 {
        return Ok(d);
    }
    Ok(count_divisors_in_class(fi, a, &mut Vec::with_capacity(d as usize)))
}

/// `R(n;a) = (1/phi(a)) sum_chi conj(chi)(-n) sum_{u | n^2} chi(u)`, computed
/// exactly. The total is checked to be a rational integer divisible by
/// `phi(a)`; anything else is a consistency failure.
pub fn r_character_formula(fi: &FactoredInteger, group: &CharacterGroup) -> Result<u64> {
    r_character_formula_with_cap(fi, group, DEFAULT_DIVISOR_CAP)
}

pub fn r_character_formula_with_cap(fi: &FactoredInteger, group: &CharacterGroup, cap: u64) -> Result<u64> {
    let a = group.modulus();
    let n = fi.value();
    require_coprime(n, a)?;
    check_cap(fi, cap)?;
    let divisors = fi.divisors_of_square(cap)?;
    let l = group.exponent();
    let minus_n = (a - n % a) % a;
    let mut total = CyclotomicInt::zero(l);
    for chi in group.all_characters() {
        let shift = chi.log_value(minus_n).ok_or_else(|| Error::Consistency(format!("-{n} is not a unit mod {a}")))?;
        // conj(chi)(-n) * chi(u) = zeta^(log chi(u) - log chi(-n))
        for &u in &divisors {
            if let Some(k) = chi.log_value(u) {
                total.add_power(k + l - shift, 1);
            }
        }
    }
    let value = total
        .as_integer()
        .ok_or_else(|| Error::Consistency(format!("character sum for n = {n}, a = {a} is not a rational integer")))?;
    let phi = group.order() as i64;
    if value < 0 || value % phi != 0 {
        return Err(Error::Consistency(format!(
            "character sum {value} for n = {n}, a = {a} is not a nonnegative multiple of phi = {phi}"
        )));
    }
    Ok((value / phi) as u64)
}

/// `R(n;a)` for any `n, a >= 1`, via `R(n;a) = R(n/g; a/g)`, `g = gcd(n, a)`.
pub fn r_general(n: u64, a: u64, table: &SpfTable) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be positive".into()));
    }
    let g = gcd(n, a);
    let reduced = table.factorize(n / g)?;
    r_divisor_method(&reduced, a / g)
}

/// Number of pairs `(p, k)`, `k >= 1`, with `p^k | n` and `chi(p^k) = 1`.
pub fn omega_chi(chi: &DirichletCharacter, fi: &FactoredInteger) -> Result<u32> {
    chi.require_real()?;
    Ok(fi
        .factors()
        .iter()
        .map(|&(p, k)| match chi.evaluate(p).real_sign() {
            Some(1) => k,
            Some(-1) => k / 2,
            _ => 0,
        })
        .sum())
}

/// `g_chi(n) = sum_{u | n^2} chi(u) = prod_{p^k || n} (1 + chi(p) + ... + chi(p)^{2k})`.
pub fn g_chi(chi: &DirichletCharacter, fi: &FactoredInteger) -> Result<u64> {
    chi.require_real()?;
    Ok(fi.factors().iter().map(|&(p, k)| local_g(chi.evaluate(p).real_sign().unwrap_or(0), k)).product())
}

/// `1 + s + s^2 + ... + s^(2k)` for `s` in {-1, 0, 1}.
#[inline]
fn local_g(sign: i64, k: u32) -> u64 {
    match sign {
        1 => 2 * k as u64 + 1,
        // -1: alternating sum of odd length; 0: only the constant term
        _ => 1,
    }
}

/// The quadratic-character main term `r(n;a)` as an exact fraction
/// `numerator / denominator`, with `denominator = phi(a / gcd(n, a))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticMain {
    pub numerator: i64,
    pub denominator: u64,
}

impl QuadraticMain {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub fn r_quadratic_main(n: u64, a: u64, table: &SpfTable) -> Result<QuadraticMain> {
    let g = gcd(n, a);
    let reduced = table.factorize(n / g)?;
    let group = CharacterGroup::new(a / g)?;
    quadratic_main_for(&reduced, &group)
}

/// `sum over chi^2 = chi_0 of chi(-n) g_chi(n)`, over `phi(a)`, for `n`
/// coprime to the group modulus.
pub fn quadratic_main_for(fi: &FactoredInteger, group: &CharacterGroup) -> Result<QuadraticMain> {
    let a = group.modulus();
    require_coprime(fi.value(), a)?;
    let minus_n = (a - fi.value() % a) % a;
    let mut numerator = 0i64;
    for chi in group.real_characters() {
        let sign = chi.evaluate(minus_n).real_sign().unwrap_or(0);
        numerator += sign * g_chi(&chi, fi)? as i64;
    }
    Ok(QuadraticMain { numerator, denominator: group.order() })
}

/// Real characters of one modulus as dense sign tables.
#[derive(Debug, Clone)]
struct RealCharacterTables {
    modulus: u64,
    phi: u64,
    tables: Vec<Vec<i8>>,
}

impl RealCharacterTables {
    fn new(modulus: u64) -> Result<Self> {
        let group = CharacterGroup::new(modulus)?;
        let tables = group.real_characters().iter().map(|c| c.real_table()).collect::<Result<Vec<_>>>()?;
        Ok(RealCharacterTables { modulus, phi: group.order(), tables })
    }

    /// `phi(a) * r(n;a)` for `n` coprime to the modulus.
    fn scaled_main(&self, fi: &FactoredInteger) -> i64 {
        let a = self.modulus;
        let minus_n = ((a - fi.value() % a) % a) as usize;
        self.tables
            .iter()
            .map(|t| {
                let sign = t[minus_n] as i64;
                if sign == 0 {
                    return 0;
                }
                let g: u64 = fi.factors().iter().map(|&(p, k)| local_g(t[(p % a) as usize] as i64, k)).product();
                sign * g as i64
            })
            .sum()
    }
}

/// Per-modulus precomputation for range scans: real-character tables for
/// every divisor `a'` of `a`, so that `R(n;a)` and `r(n;a)` cost one
/// factorization plus a divisor-residue walk.
#[derive(Debug, Clone)]
pub struct EgyptianContext {
    modulus: u64,
    by_divisor: Vec<(u64, RealCharacterTables)>,
    cap: u64,
}

/// Everything a scan needs about one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub r: u64,
    pub gcd_na: u64,
    /// `phi(a') * r(n;a)` with `a' = a / gcd(n, a)`.
    pub quad_main_scaled: i64,
    pub quad_main_denominator: u64,
}

impl EgyptianContext {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("a must be positive".into()));
        }
        let by_divisor = crate::arith::divisors_of(modulus)
            .into_iter()
            .map(|d| Ok((d, RealCharacterTables::new(d)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EgyptianContext { modulus, by_divisor, cap: DEFAULT_DIVISOR_CAP })
    }

    pub fn with_divisor_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.tables(self.modulus).phi
    }

    fn tables(&self, d: u64) -> &RealCharacterTables {
        let i = self.by_divisor.binary_search_by_key(&d, |(k, _)| *k).expect("divisor of a");
        &self.by_divisor[i].1
    }

    /// `R(n;a)` and `r(n;a)` from the factorization of `n`. `scratch` is a
    /// reusable buffer for divisor residues.
    pub fn evaluate(&self, fi: &FactoredInteger, scratch: &mut Vec<u64>) -> Result<Evaluation> {
        let g = gcd(fi.value(), self.modulus);
        let reduced_a = self.modulus / g;
        let reduced;
        let fi_red = if g == 1 {
            fi
        } else {
            reduced = fi.divide_exact(g)?;
            &reduced
        };
        check_cap(fi_red, self.cap)?;
        let r = if reduced_a == 1 { fi_red.d_of_square() } else { count_divisors_in_class(fi_red, reduced_a, scratch) };
        let t = self.tables(reduced_a);
        Ok(Evaluation { r, gcd_na: g, quad_main_scaled: t.scaled_main(fi_red), quad_main_denominator: t.phi })
    }

    pub fn r(&self, fi: &FactoredInteger, scratch: &mut Vec<u64>) -> Result<u64> {
        self.evaluate(fi, scratch).map(|e| e.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterKind;

    fn table() -> SpfTable {
        SpfTable::new(100_000).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let one = r_bruteforce(1, 1, true).unwrap();
        assert_eq!(one.count, 1);
        assert_eq!(one.solutions.unwrap(), vec![SolutionPair { x: 2, y: 2 }]);

        let two = r_bruteforce(2, 1, true).unwrap();
        assert_eq!(two.count, 3);
        assert_eq!(
            two.solutions.unwrap(),
            vec![SolutionPair { x: 3, y: 6 }, SolutionPair { x: 4, y: 4 }, SolutionPair { x: 6, y: 3 }]
        );
        assert_eq!(r_bruteforce(2, 5, false).unwrap().count, 0);
        assert_eq!(r_bruteforce(2, 5, false).unwrap().solutions, None);
        assert_eq!(
            r_bruteforce_with_budget(11, 1, false, 10).unwrap_err(),
            Error::BruteForceBudget { n: 11, budget: 10 }
        );
    }

    #[test]
    fn divisor_method_examples() {
        let t = table();
        assert_eq!(r_divisor_method(&t.factorize(4).unwrap(), 3).unwrap(), 2);
        assert_eq!(r_divisor_method(&t.factorize(5).unwrap(), 2).unwrap(), 3);
        for n in 1..200 {
            let fi = t.factorize(n).unwrap();
            assert_eq!(r_divisor_method(&fi, 1).unwrap(), fi.d_of_square());
        }
        assert_eq!(
            r_divisor_method(&t.factorize(6).unwrap(), 3).unwrap_err(),
            Error::NotCoprime { n: 6, a: 3, gcd: 3 }
        );
        assert!(matches!(r_divisor_method_with_cap(&t.factorize(12).unwrap(), 5, 4), Err(Error::DivisorCap { .. })));
    }

    #[test]
    fn character_formula_examples() {
        let t = table();
        let g3 = CharacterGroup::new(3).unwrap();
        assert_eq!(r_character_formula(&t.factorize(4).unwrap(), &g3).unwrap(), 2);
        let g5 = CharacterGroup::new(5).unwrap();
        assert_eq!(
            r_character_formula(&t.factorize(7).unwrap(), &g5).unwrap(),
            r_bruteforce(7, 5, false).unwrap().count
        );
        let g1 = CharacterGroup::new(1).unwrap();
        for n in 1..100 {
            let fi = t.factorize(n).unwrap();
            assert_eq!(r_character_formula(&fi, &g1).unwrap(), fi.d_of_square());
        }
        assert!(matches!(r_character_formula(&t.factorize(10).unwrap(), &g5), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn general_examples() {
        let t = table();
        assert_eq!(r_general(6, 3, &t).unwrap(), 3);
        assert_eq!(r_general(4, 2, &t).unwrap(), 3);
        assert_eq!(r_general(5, 5, &t).unwrap(), 1);
    }

    #[test]
    fn methods_agree_on_small_range() {
        let t = table();
        for a in 1..=12u64 {
            let group = CharacterGroup::new(a).unwrap();
            let ctx = EgyptianContext::new(a).unwrap();
            let mut scratch = Vec::new();
            for n in 1..=600u64 {
                let brute = r_bruteforce(n, a, false).unwrap().count;
                assert_eq!(r_general(n, a, &t).unwrap(), brute, "n = {n}, a = {a}");
                let fi = t.factorize(n).unwrap();
                assert_eq!(ctx.r(&fi, &mut scratch).unwrap(), brute);
                if gcd(n, a) == 1 {
                    assert_eq!(r_divisor_method(&fi, a).unwrap(), brute);
                    assert_eq!(r_character_formula(&fi, &group).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn solution_lists_are_swap_closed() {
        for a in 1..=6u64 {
            for n in 1..=150u64 {
                let res = r_bruteforce(n, a, true).unwrap();
                let sols = res.solutions.unwrap();
                assert_eq!(sols.len() as u64, res.count);
                for s in &sols {
                    assert!(s.satisfies(n, a));
                    assert!(sols.contains(&s.swapped()));
                }
                // the diagonal solution x = y = 2n/a exists iff a | 2n
                let diag = sols.iter().any(|s| s.x == s.y);
                assert_eq!(diag, (2 * n) % a == 0, "n = {n}, a = {a}");
            }
        }
    }

    fn quadratic_mod3() -> DirichletCharacter {
        CharacterGroup::new(3)
            .unwrap()
            .all_characters()
            .into_iter()
            .find(|c| c.kind() == CharacterKind::Quadratic)
            .unwrap()
    }

    #[test]
    fn omega_chi_examples() {
        let t = table();
        let chi = quadratic_mod3();
        assert_eq!(omega_chi(&chi, &t.factorize(4).unwrap()).unwrap(), 1);
        assert_eq!(omega_chi(&chi, &t.factorize(1).unwrap()).unwrap(), 0);
        let chi0 = CharacterGroup::new(5).unwrap().principal();
        for n in [7u64, 12, 64, 72, 2187] {
            let fi = t.factorize(n).unwrap();
            assert_eq!(omega_chi(&chi0, &fi).unwrap(), fi.omega_big());
        }
        let complex = CharacterGroup::new(5)
            .unwrap()
            .all_characters()
            .into_iter()
            .find(|c| c.kind() == CharacterKind::HigherOrder)
            .unwrap();
        assert!(matches!(omega_chi(&complex, &t.factorize(4).unwrap()), Err(Error::NotQuadratic { .. })));
        assert!(matches!(g_chi(&complex, &t.factorize(4).unwrap()), Err(Error::NotQuadratic { .. })));
    }

    #[test]
    fn g_chi_examples_and_bound() {
        let t = table();
        let chi = quadratic_mod3();
        assert_eq!(g_chi(&chi, &t.factorize(4).unwrap()).unwrap(), 1);
        assert_eq!(g_chi(&chi, &t.factorize(7).unwrap()).unwrap(), 3);
        let chi0 = CharacterGroup::new(7).unwrap().principal();
        assert_eq!(g_chi(&chi0, &t.factorize(36).unwrap()).unwrap(), 25);

        // direct divisor sum oracle
        for n in 1..=2000u64 {
            let fi = t.factorize(n).unwrap();
            let direct: i64 = fi
                .divisors_of_square(DEFAULT_DIVISOR_CAP)
                .unwrap()
                .iter()
                .map(|&u| chi.evaluate(u).real_sign().unwrap())
                .sum();
            assert_eq!(g_chi(&chi, &fi).unwrap() as i64, direct);
        }
    }

    #[test]
    fn quadratic_main_examples() {
        let t = table();
        for n in 1..50u64 {
            let q = r_quadratic_main(n, 1, &t).unwrap();
            assert_eq!(q, QuadraticMain { numerator: t.factorize(n).unwrap().d_of_square() as i64, denominator: 1 });
        }
        for n in (1..300u64).filter(|n| n % 3 != 0) {
            let q = r_quadratic_main(n, 3, &t).unwrap();
            assert_eq!(q.numerator % 2, 0);
            assert_eq!((q.numerator / 2) as u64, r_divisor_method(&t.factorize(n).unwrap(), 3).unwrap());
        }
        // a = 5, n = 2: chi_0 part g = d(4) = 3; quadratic part chi(-2) = chi(3) = -1,
        // chi(2) = -1 so g = 1. r = (3 - 1)/4.
        let q = r_quadratic_main(2, 5, &t).unwrap();
        assert_eq!(q, QuadraticMain { numerator: 2, denominator: 4 });
        assert_eq!(q.value(), 0.5);
    }

    #[test]
    fn context_matches_free_functions() {
        let t = table();
        for a in [1u64, 5, 7, 12, 30] {
            let ctx = EgyptianContext::new(a).unwrap();
            let mut scratch = Vec::new();
            for n in 1..=500u64 {
                let e = ctx.evaluate(&t.factorize(n).unwrap(), &mut scratch).unwrap();
                let q = r_quadratic_main(n, a, &t).unwrap();
                assert_eq!(e.r, r_general(n, a, &t).unwrap());
                assert_eq!((e.quad_main_scaled, e.quad_main_denominator), (q.numerator, q.denominator));
                assert_eq!(e.gcd_na, gcd(n, a));
            }
        }
    }
}
