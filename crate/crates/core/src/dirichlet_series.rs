//! Local factors of the Dirichlet series
//! `f(s) = sum_n conj(chi1)chi2(n) (sum_{u | n^2} chi1(u)) (sum_{v | n^2} conj(chi2)(v)) n^-s`.
//!
//! Writing `u = u1 u2^2` with `u1` squarefree turns `u | n^2` into
//! `u1 u2 | n`, which splits every coefficient as a Dirichlet convolution
//! `sum_{md = n} conj(chi1)chi2(m) F(d)` with `F` multiplicative. All values
//! here are exact elements of `Z[zeta_L]`.
//!
//! The principal-pair Euler product gives the leading coefficient of the
//! degree-8 polynomial in `sum R(n;a)^2 ~ N P_8(log N)`.

use serde::Serialize;

use crate::arith::{euler_phi, FactoredInteger, SpfTable};
use crate::characters::DirichletCharacter;
use crate::cyclo::CyclotomicInt;
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};

fn same_modulus(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<u64> {
    if chi1.modulus() != chi2.modulus() {
        return Err(Error::ModulusMismatch { left: chi1.modulus(), right: chi2.modulus() });
    }
    Ok(chi1.group().exponent())
}

/// `F(p^k)`, by enumerating `u = p^i`, `v = p^j` with
/// `max(ceil(i/2), ceil(j/2)) = k` (the lcm condition `[u1 u2, v1 v2] = p^k`).
pub fn f_prime_power(chi1: &DirichletCharacter, chi2: &DirichletCharacter, p: u64, k: u32) -> Result<CyclotomicInt> {
    let l = same_modulus(chi1, chi2)?;
    if k == 0 {
        return Ok(CyclotomicInt::from_integer(l, 1));
    }
    let x = chi1.evaluate(p);
    let y = chi2.evaluate(p).conj();
    let twist = chi1.conjugate().multiply(chi2)?.evaluate(p).pow(k as u64);
    let mut total = CyclotomicInt::zero(l);
    let top = 2 * k as u64;
    for i in 0..=top {
        for j in 0..=top {
            if i.div_ceil(2).max(j.div_ceil(2)) == k as u64 {
                total.add_root(x.pow(i).mul(y.pow(j)).mul(twist), 1);
            }
        }
    }
    Ok(total)
}

/// `F(d)` as the product of its prime-power values; `F(1) = 1`.
pub fn f_general(chi1: &DirichletCharacter, chi2: &DirichletCharacter, d: &FactoredInteger) -> Result<CyclotomicInt> {
    let l = same_modulus(chi1, chi2)?;
    let mut acc = CyclotomicInt::from_integer(l, 1);
    for &(p, k) in d.factors() {
        acc = acc.mul(&f_prime_power(chi1, chi2, p, k)?);
    }
    Ok(acc)
}

/// The eight formal characters
/// `chi1, chi2, chi1 chi2, chi1 conj(chi2), conj(chi1), conj(chi2),
/// conj(chi1) conj(chi2), conj(chi1) chi2`, repeats kept.
pub fn formal_character_list(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<[DirichletCharacter; 8]> {
    same_modulus(chi1, chi2)?;
    let c1 = chi1.conjugate();
    let c2 = chi2.conjugate();
    Ok([
        chi1.clone(),
        chi2.clone(),
        chi1.multiply(chi2)?,
        chi1.multiply(&c2)?,
        c1.clone(),
        c2.clone(),
        c1.multiply(&c2)?,
        c1.multiply(chi2)?,
    ])
}

/// `F(p)` from the formal sum: `chi_0(p)` plus the values at `p` of the
/// formal list with its `conj(chi1) chi2` entry removed.
pub fn f_prime_formal(chi1: &DirichletCharacter, chi2: &DirichletCharacter, p: u64) -> Result<CyclotomicInt> {
    let l = same_modulus(chi1, chi2)?;
    let list = formal_character_list(chi1, chi2)?;
    let mut total = CyclotomicInt::zero(l);
    total.add_root(chi1.group().principal().evaluate(p), 1);
    // the last entry is conj(chi1) chi2; drop exactly that one entry
    for chi in &list[..7] {
        total.add_root(chi.evaluate(p), 1);
    }
    Ok(total)
}

/// Whether the enumerated `F(p)` equals the formal character sum.
pub fn f_prime_identity_check(chi1: &DirichletCharacter, chi2: &DirichletCharacter, p: u64) -> Result<bool> {
    Ok(f_prime_power(chi1, chi2, p, 1)? == f_prime_formal(chi1, chi2, p)?)
}

/// n-th coefficient, straight from the definition: a double sum over
/// divisor pairs of `n^2`.
pub fn coefficient_lhs(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    n: &FactoredInteger,
    cap: u64,
) -> Result<CyclotomicInt> {
    let l = same_modulus(chi1, chi2)?;
    let twist = chi1.conjugate().multiply(chi2)?.evaluate(n.value());
    let mut total = CyclotomicInt::zero(l);
    if twist.is_zero() {
        return Ok(total);
    }
    let divs = n.divisors_of_square(cap)?;
    let left: Vec<_> = divs.iter().map(|&u| chi1.evaluate(u)).collect();
    let right: Vec<_> = divs.iter().map(|&v| chi2.evaluate(v).conj()).collect();
    for &cu in &left {
        if cu.is_zero() {
            continue;
        }
        let cu = cu.mul(twist);
        for &cv in &right {
            total.add_root(cu.mul(cv), 1);
        }
    }
    Ok(total)
}

/// n-th coefficient via the convolution `sum_{md = n} conj(chi1)chi2(m) F(d)`.
pub fn coefficient_rhs(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    n: &FactoredInteger,
) -> Result<CyclotomicInt> {
    let l = same_modulus(chi1, chi2)?;
    let twist = chi1.conjugate().multiply(chi2)?;
    let mut total = CyclotomicInt::zero(l);
    for d in n.divisors() {
        let m = n.value() / d.value();
        let tm = twist.evaluate(m);
        if tm.is_zero() {
            continue;
        }
        total = total.add(&f_general(chi1, chi2, &d)?.mul_root(tm));
    }
    Ok(total)
}

/// Series coefficients of `(1 + 6x + x^2) / (1 - x)^3` for `k = 0..=k_max`.
pub fn principal_series_coefficients(k_max: u32) -> Vec<u64> {
    let tri = |k: i64| -> i64 {
        if k < 0 {
            0
        } else {
            (k + 2) * (k + 1) / 2
        }
    };
    (0..=k_max as i64).map(|k| (tri(k) + 6 * tri(k - 1) + tri(k - 2)) as u64).collect()
}

/// True iff the series coefficients of the principal local factor equal
/// `d(p^{2k})^2` for `k <= k_max`.
pub fn local_factor_principal_check(p: u64, k_max: u32) -> bool {
    principal_series_coefficients(k_max).iter().enumerate().all(|(k, &c)| {
        let pk = if k == 0 {
            FactoredInteger::one()
        } else {
            match FactoredInteger::from_factors(vec![(p, k as u32)]) {
                Ok(f) => f,
                // p^k overflowed; fall back to the multiplicity-only formula
                Err(_) => return c == (2 * k as u64 + 1).pow(2),
            }
        };
        c == pk.d_of_square().pow(2)
    })
}

/// `(1 + 6/p + 1/p^2)(1 - 1/p)^6`: the principal local factor at `s = 1`
/// with the `L^9` pole part removed.
pub fn euler_factor(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 + 6.0 * x + x * x) * (1.0 - x).powi(6)
}

/// The same factor with the sign of the `6/p` term flipped,
/// `(1 - 6/p + 1/p^2)(1 - 1/p)^6`. Negative at `p = 2`, which is why
/// [`leading_coefficient`] uses [`euler_factor`].
pub fn minus_sign_factor(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 - 6.0 * x + x * x) * (1.0 - x).powi(6)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerProductResult {
    pub a: u64,
    pub value: f64,
    pub p_max: u64,
    /// Largest prime actually used (the largest prime `<= p_max` not dividing `a`).
    pub last_prime: u64,
    /// `|value - value without the last prime's factor|`.
    pub last_factor_delta: f64,
    pub primes_used: u64,
    /// `1 / (8! a^2) * prod_{p | a} (1 - 1/p)^7`.
    pub prefactor: f64,
    /// The minus-sign variant evaluated at `p = 2`, kept in reports to
    /// document why it is rejected.
    pub minus_sign_factor_at_2: f64,
}

const EULER_BLOCK: usize = 4096;

/// Leading coefficient of `P_8(log N; a)`, with the Euler product truncated
/// at `p_max`. Block products are combined in a fixed order, so the result
/// is bit-identical for any thread count.
pub fn leading_coefficient(a: u64, p_max: u64, exec: Execution) -> Result<EulerProductResult> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be positive".into()));
    }
    if p_max < 100 {
        return Err(Error::InvalidArgument(format!("p_max = {p_max} is below the minimum of 100")));
    }
    let fa = FactoredInteger::by_trial_division(a)?;
    let a_primes: Vec<u64> = fa.primes().collect();
    let table = SpfTable::new(p_max)?;
    let primes: Vec<u64> = table.primes().iter().map(|&p| p as u64).filter(|p| !a_primes.contains(p)).collect();
    let last_prime = *primes.last().ok_or_else(|| Error::InvalidArgument("no primes below p_max".into()))?;

    let chunks: Vec<Vec<u64>> = primes.chunks(EULER_BLOCK).map(|c| c.to_vec()).collect();
    let partials = map_ordered(exec, chunks, |block| block.iter().map(|&p| euler_factor(p)).product::<f64>());
    let body: f64 = partials.iter().product();

    let phi = euler_phi(&fa) as f64;
    // 1/(8! a^2) prod_{p|a}(1 - 1/p)^7 = phi(a)^7 / (8! a^9)
    let prefactor = (phi / a as f64).powi(7) / (40320.0 * (a as f64).powi(2));
    let value = prefactor * body;
    let without_last = value / euler_factor(last_prime);
    let result = EulerProductResult {
        a,
        value,
        p_max,
        last_prime,
        last_factor_delta: (value - without_last).abs(),
        primes_used: primes.len() as u64,
        prefactor,
        minus_sign_factor_at_2: minus_sign_factor(2),
    };
    if !(result.value.is_finite() && result.value > 0.0) {
        return Err(Error::Consistency(format!("Euler product for a = {a} is not positive: {}", result.value)));
    }
    Ok(result)
}
