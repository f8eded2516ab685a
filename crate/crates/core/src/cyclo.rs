//! Exact values on the unit circle and exact sums of them.
//!
//! [`UnitRoot`] is `e^(2 pi i num/den)` (or zero). [`CyclotomicInt`] is an
//! element of `Z[zeta_L]`, stored as integer coefficients on the powers
//! `zeta_L^0 .. zeta_L^(L-1)`. That representation is not unique (the powers
//! are linearly dependent), so comparisons reduce modulo the cyclotomic
//! polynomial `Phi_L` first.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{gcd, lcm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitRoot {
    Zero,
    /// `e^(2 pi i num/den)` with `num < den` and `gcd(num, den) = 1`
    /// (the root 1 is `0/1`).
    Root {
        num: u64,
        den: u64,
    },
}

impl UnitRoot {
    pub const ONE: UnitRoot = UnitRoot::Root { num: 0, den: 1 };
    pub const MINUS_ONE: UnitRoot = UnitRoot::Root { num: 1, den: 2 };

    /// `e^(2 pi i num/den)`, reduced.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity denominator must be positive");
        let num = num % den;
        if num == 0 {
            return UnitRoot::ONE;
        }
        let g = gcd(num, den);
        UnitRoot::Root { num: num / g, den: den / g }
    }

    pub fn is_zero(self) -> bool {
        self == UnitRoot::Zero
    }

    pub fn is_one(self) -> bool {
        self == UnitRoot::ONE
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(self) -> Option<u64> {
        match self {
            UnitRoot::Zero => None,
            UnitRoot::Root { den, .. } => Some(den),
        }
    }

    pub fn mul(self, other: UnitRoot) -> UnitRoot {
        match (self, other) {
            (UnitRoot::Root { num: a, den: b }, UnitRoot::Root { num: c, den: d }) => {
                let l = lcm(b, d);
                UnitRoot::new(a * (l / b) + c * (l / d), l)
            }
            _ => UnitRoot::Zero,
        }
    }

    pub fn conj(self) -> UnitRoot {
        match self {
            UnitRoot::Zero => UnitRoot::Zero,
            UnitRoot::Root { num, den } => UnitRoot::new(den - num, den),
        }
    }

    /// `self^k`, with `0^0 = 1`.
    pub fn pow(self, k: u64) -> UnitRoot {
        if k == 0 {
            return UnitRoot::ONE;
        }
        match self {
            UnitRoot::Zero => UnitRoot::Zero,
            UnitRoot::Root { num, den } => UnitRoot::new(((num as u128 * k as u128) % den as u128) as u64, den),
        }
    }

    /// The value as -1, 0 or 1 when it is real.
    pub fn real_sign(self) -> Option<i64> {
        match self {
            UnitRoot::Zero => Some(0),
            UnitRoot::Root { num: 0, .. } => Some(1),
            UnitRoot::Root { num: 1, den: 2 } => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(self) -> ComplexValue {
        match self {
            UnitRoot::Zero => ComplexValue { re: 0.0, im: 0.0 },
            UnitRoot::Root { num, den } => {
                let t = TAU * num as f64 / den as f64;
                ComplexValue { re: t.cos(), im: t.sin() }
            }
        }
    }
}

impl fmt::Display for UnitRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitRoot::Zero => write!(f, "0"),
            UnitRoot::Root { num: 0, .. } => write!(f, "1"),
            UnitRoot::Root { num, den } => write!(f, "e(2pi i*{num}/{den})"),
        }
    }
}

/// Floating complex value, produced only at the reporting boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im >= 0.0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}-{}i", self.re, -self.im)
        }
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n > 0);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &div);
        }
    }
    let poly = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(n, Arc::clone(&poly));
    poly
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Z[zeta_L]`: `sum_k coeffs[k] * zeta_L^k`.
#[derive(Debug, Clone)]
pub struct CyclotomicInt {
    order: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(order: u64) -> Self {
        assert!(order > 0);
        CyclotomicInt { order, coeffs: vec![0; order as usize] }
    }

    pub fn from_integer(order: u64, v: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = v;
        z
    }

    pub fn from_root(order: u64, r: UnitRoot) -> Self {
        let mut z = Self::zero(order);
        z.add_root(r, 1);
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Raw (unreduced) coefficient vector.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn lift(&self, order: u64) -> Self {
        if order == self.order {
            return self.clone();
        }
        debug_assert_eq!(order % self.order, 0);
        let step = order / self.order;
        let mut out = Self::zero(order);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[k * step as usize] = c;
        }
        out
    }

    /// `self += times * r`. Lifts to a larger order if `r` needs it.
    pub fn add_root(&mut self, r: UnitRoot, times: i64) {
        match r {
            UnitRoot::Zero => {}
            UnitRoot::Root { num, den } => {
                if !self.order.is_multiple_of(den) {
                    *self = self.lift(lcm(self.order, den));
                }
                let k = num * (self.order / den);
                self.coeffs[k as usize] += times;
            }
        }
    }

    /// Add `times * zeta_L^k` directly.
    #[inline]
    pub fn add_power(&mut self, k: u64, times: i64) {
        let idx = (k % self.order) as usize;
        self.coeffs[idx] += times;
    }

    pub fn add(&self, other: &CyclotomicInt) -> CyclotomicInt {
        let l = lcm(self.order, other.order);
        let mut a = self.lift(l);
        let b = other.lift(l);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn scale(&self, s: i64) -> CyclotomicInt {
        CyclotomicInt { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &CyclotomicInt) -> CyclotomicInt {
        let l = lcm(self.order, other.order);
        let a = self.lift(l);
        let b = other.lift(l);
        let mut out = Self::zero(l);
        let lu = l as usize;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    out.coeffs[(i + j) % lu] += x * y;
                }
            }
        }
        out
    }

    pub fn mul_root(&self, r: UnitRoot) -> CyclotomicInt {
        self.mul(&CyclotomicInt::from_root(self.order, r))
    }

    pub fn conj(&self) -> CyclotomicInt {
        let mut out = Self::zero(self.order);
        let lu = self.order as usize;
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(lu - k) % lu] += c;
        }
        out
    }

    /// Canonical coefficients: the remainder modulo `Phi_L`, of length
    /// `phi(L)` (the power basis of `Z[zeta_L]`).
    pub fn reduced(&self) -> Vec<i64> {
        let phi_l = cyclotomic_polynomial(self.order);
        let deg = phi_l.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &pj) in phi_l.iter().enumerate() {
                    rem[i - deg + j] -= c * pj;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r.iter().skip(1).all(|&c| c == 0) {
            Some(r.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> ComplexValue {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let t = TAU * k as f64 / self.order as f64;
                re += c as f64 * t.cos();
                im += c as f64 * t.sin();
            }
        }
        ComplexValue { re, im }
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        let l = lcm(self.order, other.order);
        self.lift(l).reduced() == other.lift(l).reduced()
    }
}

impl Eq for CyclotomicInt {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_root_arithmetic() {
        let i = UnitRoot::new(1, 4);
        assert_eq!(i.mul(i), UnitRoot::MINUS_ONE);
        assert_eq!(i.pow(4), UnitRoot::ONE);
        assert_eq!(i.conj(), UnitRoot::new(3, 4));
        assert_eq!(i.mul(i.conj()), UnitRoot::ONE);
        assert_eq!(UnitRoot::new(2, 4), UnitRoot::new(1, 2));
        assert_eq!(UnitRoot::Zero.mul(i), UnitRoot::Zero);
        assert_eq!(UnitRoot::Zero.pow(0), UnitRoot::ONE);
        assert_eq!(UnitRoot::new(1, 3).mul(UnitRoot::new(1, 6)), UnitRoot::new(1, 2));
        assert_eq!(UnitRoot::MINUS_ONE.real_sign(), Some(-1));
        assert_eq!(i.real_sign(), None);
        let c = i.to_complex();
        assert!(c.re.abs() < 1e-15 && (c.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn sums_cancel_exactly() {
        // 1 + zeta_3 + zeta_3^2 = 0
        let mut s = CyclotomicInt::zero(3);
        for k in 0..3 {
            s.add_root(UnitRoot::new(k, 3), 1);
        }
        assert!(s.is_zero());
        assert_eq!(s.as_integer(), Some(0));

        // i + (-i) + 2 = 2, built at mixed orders
        let mut t = CyclotomicInt::from_integer(1, 2);
        t.add_root(UnitRoot::new(1, 4), 1);
        t.add_root(UnitRoot::new(3, 4), 1);
        assert_eq!(t.order(), 4);
        assert_eq!(t.as_integer(), Some(2));

        let i = CyclotomicInt::from_root(4, UnitRoot::new(1, 4));
        assert_eq!(i.as_integer(), None);
        assert_eq!(i.mul(&i).as_integer(), Some(-1));
        assert_eq!(i.conj().add(&i).as_integer(), Some(0));
        assert_eq!(i.mul(&i.conj()), CyclotomicInt::from_integer(1, 1));
    }

    #[test]
    fn complex_boundary_matches_exact() {
        let mut s = CyclotomicInt::zero(12);
        for k in [1, 5, 7, 11] {
            s.add_power(k, 1);
        }
        // primitive 12th roots sum to mu(12) = 0
        assert!(s.is_zero());
        assert!(s.to_complex().abs() < 1e-12);
    }
}
