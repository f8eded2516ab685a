//! Dirichlet characters modulo `a`, evaluated exactly.
//!
//! `(Z/aZ)^*` is split by CRT into cyclic components: one per odd prime
//! power (generated by a primitive root), one for `4`, and two for `2^k`
//! with `k >= 3` (generated by `-1` and `5`). A character is a tuple of
//! exponents, one per component; `chi(g_j) = e(e_j / ord_j)`. Values are
//! [`UnitRoot`]s, so character sums stay exact.

use std::fmt;
use std::sync::Arc;

use crate::arith::{gcd, lcm, pow_mod, FactoredInteger};
use crate::cyclo::UnitRoot;
use crate::error::{Error, Result};

const NOT_A_UNIT: u32 = u32::MAX;

/// One cyclic factor of `(Z/aZ)^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub prime: u64,
    pub prime_power: u64,
    /// Generator, lifted by CRT so it is `1` modulo the other prime powers.
    pub generator: u64,
    pub order: u64,
}

#[derive(Debug)]
struct GroupData {
    modulus: u64,
    phi: u64,
    exponent: u64,
    components: Vec<Component>,
    /// `dlog[r * ncomp + j]` is the exponent of component `j` in residue `r`.
    dlog: Vec<u32>,
}

/// The unit group modulo `a` with a discrete-log table, shared by all of
/// its characters.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    inner: Arc<GroupData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterKind {
    Principal,
    Quadratic,
    HigherOrder,
}

impl fmt::Display for CharacterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CharacterKind::Principal => "principal",
            CharacterKind::Quadratic => "quadratic",
            CharacterKind::HigherOrder => "higher-order",
        })
    }
}

fn is_primitive_root(g: u64, modulus: u64, order: u64, order_primes: &[u64]) -> bool {
    pow_mod(g, order, modulus) == 1 && order_primes.iter().all(|&q| pow_mod(g, order / q, modulus) != 1)
}

fn crt_lift(residue: u64, prime_power: u64, modulus: u64) -> u64 {
    let other = modulus / prime_power;
    if other == 1 {
        return residue % modulus;
    }
    let mut x = residue % prime_power;
    while x % other != 1 % other {
        x += prime_power;
    }
    x
}

impl CharacterGroup {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if modulus > u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!("modulus {modulus} too large for a dense table")));
        }
        let fact = FactoredInteger::by_trial_division(modulus)?;
        let mut components = Vec::new();
        for &(p, k) in fact.factors() {
            let pk = p.pow(k);
            if p == 2 {
                match k {
                    1 => {}
                    2 => components.push(Component {
                        prime: 2,
                        prime_power: 4,
                        generator: crt_lift(3, 4, modulus),
                        order: 2,
                    }),
                    _ => {
                        components.push(Component {
                            prime: 2,
                            prime_power: pk,
                            generator: crt_lift(pk - 1, pk, modulus),
                            order: 2,
                        });
                        components.push(Component {
                            prime: 2,
                            prime_power: pk,
                            generator: crt_lift(5, pk, modulus),
                            order: pk / 4,
                        });
                    }
                }
            } else {
                let order = pk / p * (p - 1);
                let order_primes: Vec<u64> = FactoredInteger::by_trial_division(order)?.primes().collect();
                let g = (2..pk)
                    .find(|&g| g % p != 0 && is_primitive_root(g, pk, order, &order_primes))
                    .ok_or_else(|| Error::Consistency(format!("no primitive root mod {pk}")))?;
                components.push(Component { prime: p, prime_power: pk, generator: crt_lift(g, pk, modulus), order });
            }
        }
        let phi: u64 = components.iter().map(|c| c.order).product();
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));

        let ncomp = components.len();
        let mut dlog = vec![NOT_A_UNIT; modulus as usize * ncomp.max(1)];
        let mut seen = 0u64;
        // walk every exponent tuple once (odometer order)
        let mut exps = vec![0u64; ncomp];
        loop {
            let r = components
                .iter()
                .zip(&exps)
                .fold(1 % modulus, |acc, (c, &e)| acc * pow_mod(c.generator, e, modulus) % modulus);
            let base = r as usize * ncomp.max(1);
            if ncomp == 0 {
                dlog[base] = 0;
            } else if dlog[base] != NOT_A_UNIT {
                return Err(Error::Consistency(format!("generators mod {modulus} are not independent at residue {r}")));
            }
            for j in 0..ncomp {
                dlog[base + j] = exps[j] as u32;
            }
            seen += 1;
            let mut j = 0;
            while j < ncomp {
                exps[j] += 1;
                if exps[j] < components[j].order {
                    break;
                }
                exps[j] = 0;
                j += 1;
            }
            if j == ncomp {
                break;
            }
        }
        if seen != phi {
            return Err(Error::Consistency(format!("unit group mod {modulus}: {seen} != phi = {phi}")));
        }
        Ok(CharacterGroup { inner: Arc::new(GroupData { modulus, phi, exponent, components, dlog }) })
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    /// `phi(a)`, the group order.
    pub fn order(&self) -> u64 {
        self.inner.phi
    }

    /// Exponent of the group: every character value is an `exponent`-th root.
    pub fn exponent(&self) -> u64 {
        self.inner.exponent
    }

    pub fn components(&self) -> &[Component] {
        &self.inner.components
    }

    /// Exponent tuple of a residue coprime to the modulus.
    pub fn dlog(&self, n: u64) -> Option<Vec<u64>> {
        let a = self.inner.modulus;
        let r = (n % a) as usize;
        let nc = self.inner.components.len();
        let stride = nc.max(1);
        let row = &self.inner.dlog[r * stride..(r + 1) * stride];
        if row[0] == NOT_A_UNIT {
            None
        } else {
            Some(row[..nc].iter().map(|&e| e as u64).collect())
        }
    }

    pub fn principal(&self) -> DirichletCharacter {
        DirichletCharacter { group: self.clone(), exponents: vec![0; self.inner.components.len()] }
    }

    pub fn character(&self, exponents: Vec<u64>) -> Result<DirichletCharacter> {
        let comps = &self.inner.components;
        if exponents.len() != comps.len() || exponents.iter().zip(comps).any(|(&e, c)| e >= c.order) {
            return Err(Error::InvalidArgument(format!(
                "exponent tuple {exponents:?} does not fit the group mod {}",
                self.modulus()
            )));
        }
        Ok(DirichletCharacter { group: self.clone(), exponents })
    }

    /// Every character, in odometer order of exponent tuples (principal first).
    pub fn all_characters(&self) -> Vec<DirichletCharacter> {
        let comps = &self.inner.components;
        let mut out = Vec::with_capacity(self.inner.phi as usize);
        let mut exps = vec![0u64; comps.len()];
        loop {
            out.push(DirichletCharacter { group: self.clone(), exponents: exps.clone() });
            let mut j = 0;
            while j < comps.len() {
                exps[j] += 1;
                if exps[j] < comps[j].order {
                    break;
                }
                exps[j] = 0;
                j += 1;
            }
            if j == comps.len() {
                break;
            }
        }
        out
    }

    /// Characters with `chi^2 = chi_0` (the principal one included).
    pub fn real_characters(&self) -> Vec<DirichletCharacter> {
        self.all_characters().into_iter().filter(|c| c.kind() != CharacterKind::HigherOrder).collect()
    }

    /// Number of characters with `chi^2 = chi_0`, from the component orders.
    pub fn real_character_count(&self) -> u64 {
        self.inner.components.iter().map(|c| gcd(2, c.order)).product()
    }
}

impl PartialEq for CharacterGroup {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
    }
}

impl Eq for CharacterGroup {}

pub fn character_group(a: u64) -> Result<CharacterGroup> {
    CharacterGroup::new(a)
}

pub fn all_characters(group: &CharacterGroup) -> Vec<DirichletCharacter> {
    group.all_characters()
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: CharacterGroup,
    exponents: Vec<u64>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[mod {}; {:?}]", self.modulus(), self.exponents)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `chi(n)` as a power of `zeta_L` with `L` the group exponent, or
    /// `None` when `gcd(n, a) > 1`.
    #[inline]
    pub fn log_value(&self, n: u64) -> Option<u64> {
        let g = &*self.group.inner;
        let nc = g.components.len();
        let stride = nc.max(1);
        let r = (n % g.modulus) as usize;
        let row = &g.dlog[r * stride..(r + 1) * stride];
        if row[0] == NOT_A_UNIT {
            return None;
        }
        if nc == 0 {
            return Some(0);
        }
        let l = g.exponent;
        let mut acc = 0u64;
        for ((&d, &e), c) in row.iter().zip(&self.exponents).zip(&g.components) {
            acc += (d as u64 * e % c.order) * (l / c.order);
        }
        Some(acc % l)
    }

    pub fn evaluate(&self, n: u64) -> UnitRoot {
        match self.log_value(n) {
            None => UnitRoot::Zero,
            Some(k) => UnitRoot::new(k, self.group.exponent()),
        }
    }

    /// Evaluate at a signed integer, reduced modulo `a`.
    pub fn evaluate_signed(&self, n: i64) -> UnitRoot {
        let a = self.modulus() as i64;
        self.evaluate(n.rem_euclid(a) as u64)
    }

    /// `chi(-1)`.
    pub fn parity(&self) -> UnitRoot {
        self.evaluate_signed(-1)
    }

    pub fn order(&self) -> u64 {
        self.exponents.iter().zip(self.group.components()).fold(1, |acc, (&e, c)| lcm(acc, c.order / gcd(e, c.order)))
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn kind(&self) -> CharacterKind {
        match self.order() {
            1 => CharacterKind::Principal,
            2 => CharacterKind::Quadratic,
            _ => CharacterKind::HigherOrder,
        }
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exponents =
            self.exponents.iter().zip(self.group.components()).map(|(&e, c)| (c.order - e) % c.order).collect();
        DirichletCharacter { group: self.group.clone(), exponents }
    }

    pub fn multiply(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch { left: self.modulus(), right: other.modulus() });
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(self.group.components())
            .map(|((&x, &y), c)| (x + y) % c.order)
            .collect();
        Ok(DirichletCharacter { group: self.group.clone(), exponents })
    }

    /// Values in {-1, 0, 1} indexed by residue, for principal or quadratic
    /// characters.
    pub fn real_table(&self) -> Result<Vec<i8>> {
        self.require_real()?;
        Ok((0..self.modulus()).map(|r| self.evaluate(r).real_sign().expect("real character") as i8).collect())
    }

    pub fn require_real(&self) -> Result<()> {
        match self.kind() {
            CharacterKind::HigherOrder => Err(Error::NotQuadratic { modulus: self.modulus(), order: self.order() }),
            _ => Ok(()),
        }
    }
}

pub fn evaluate(chi: &DirichletCharacter, n: i64) -> UnitRoot {
    chi.evaluate_signed(n)
}

pub fn classify(chi: &DirichletCharacter) -> CharacterKind {
    chi.kind()
}

pub fn conjugate(chi: &DirichletCharacter) -> DirichletCharacter {
    chi.conjugate()
}

pub fn multiply(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<DirichletCharacter> {
    chi1.multiply(chi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CyclotomicInt;

    fn orders(a: u64) -> Vec<u64> {
        CharacterGroup::new(a).unwrap().components().iter().map(|c| c.order).collect()
    }

    #[test]
    fn group_shapes() {
        assert_eq!(orders(5), vec![4]);
        assert_eq!(orders(8), vec![2, 2]);
        assert_eq!(orders(1), Vec::<u64>::new());
        assert_eq!(orders(2), Vec::<u64>::new());
        assert_eq!(orders(4), vec![2]);
        assert_eq!(orders(32), vec![2, 8]);
        assert_eq!(orders(9), vec![6]);
        assert_eq!(orders(24), vec![2, 2, 2]);
        let g1 = CharacterGroup::new(1).unwrap();
        assert_eq!(g1.order(), 1);
        assert_eq!(g1.all_characters().len(), 1);
        assert!((0..20).all(|n| g1.principal().evaluate(n).is_one()));
    }

    #[test]
    fn group_orders_match_phi_and_generators_generate() {
        for a in 1..=500u64 {
            let g = CharacterGroup::new(a).unwrap();
            let phi = (1..=a).filter(|&r| gcd(r, a) == 1).count() as u64;
            assert_eq!(g.order(), phi, "a = {a}");
            for r in 0..a {
                assert_eq!(g.dlog(r).is_some(), gcd(r, a) == 1, "a = {a}, r = {r}");
            }
        }
    }

    #[test]
    fn counts_and_distinctness() {
        for a in [5u64, 12, 1, 7, 15, 16] {
            let g = CharacterGroup::new(a).unwrap();
            let chars = g.all_characters();
            assert_eq!(chars.len() as u64, g.order());
            for (i, x) in chars.iter().enumerate() {
                for y in &chars[i + 1..] {
                    assert!((1..a.max(2)).any(|n| x.evaluate(n) != y.evaluate(n)), "a = {a}");
                }
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let g6 = CharacterGroup::new(6).unwrap();
        assert!(g6.principal().evaluate(5).is_one());
        assert!(g6.principal().evaluate(4).is_zero());

        let g5 = CharacterGroup::new(5).unwrap();
        let chi = g5.all_characters().into_iter().find(|c| c.evaluate(2) == UnitRoot::new(1, 4)).unwrap();
        assert_eq!(chi.evaluate(4), UnitRoot::MINUS_ONE);
        assert_eq!(chi.evaluate(4), chi.evaluate(2).pow(2));
        assert_eq!(evaluate(&chi, -1), chi.evaluate(4));
        for c in g5.all_characters() {
            assert!(c.evaluate(1).is_one());
        }
    }

    #[test]
    fn classification() {
        let kinds = |a: u64| -> Vec<CharacterKind> {
            CharacterGroup::new(a).unwrap().all_characters().iter().map(classify).collect()
        };
        assert!(kinds(8).iter().all(|k| *k != CharacterKind::HigherOrder));
        let k5 = kinds(5);
        assert_eq!(k5.iter().filter(|k| **k == CharacterKind::Principal).count(), 1);
        assert_eq!(k5.iter().filter(|k| **k == CharacterKind::Quadratic).count(), 1);
        assert_eq!(k5.iter().filter(|k| **k == CharacterKind::HigherOrder).count(), 2);
        assert_eq!(kinds(24).len(), 8);
        assert!(kinds(24).iter().all(|k| *k != CharacterKind::HigherOrder));
    }

    #[test]
    fn real_character_count_matches_enumeration() {
        for a in 1..=200u64 {
            let g = CharacterGroup::new(a).unwrap();
            assert_eq!(g.real_characters().len() as u64, g.real_character_count(), "a = {a}");
        }
    }

    #[test]
    fn conjugate_and_multiply() {
        let g = CharacterGroup::new(15).unwrap();
        let chi0 = g.principal();
        assert_eq!(conjugate(&chi0), chi0);
        for chi in g.all_characters() {
            assert_eq!(chi.multiply(&chi.conjugate()).unwrap(), chi0);
            if chi.kind() == CharacterKind::Quadratic {
                assert_eq!(chi.conjugate(), chi);
            }
            for n in 0..15 {
                assert_eq!(chi.conjugate().evaluate(n), chi.evaluate(n).conj());
            }
        }
        let other = CharacterGroup::new(7).unwrap().principal();
        assert_eq!(multiply(&chi0, &other).unwrap_err(), Error::ModulusMismatch { left: 15, right: 7 });
    }

    #[test]
    fn complete_multiplicativity() {
        for a in 1..=24u64 {
            let g = CharacterGroup::new(a).unwrap();
            for chi in g.all_characters() {
                for m in 1..=100u64 {
                    for n in 1..=100u64 {
                        assert_eq!(chi.evaluate(m * n), chi.evaluate(m).mul(chi.evaluate(n)));
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_exhaustive() {
        for a in 1..=30u64 {
            let g = CharacterGroup::new(a).unwrap();
            let chars = g.all_characters();
            for r in (0..a).filter(|&r| gcd(r, a) == 1) {
                for s in 0..a {
                    let mut sum = CyclotomicInt::zero(g.exponent());
                    for chi in &chars {
                        sum.add_root(chi.evaluate(r).conj().mul(chi.evaluate(s)), 1);
                    }
                    let expected = if s % a == r % a { g.order() as i64 } else { 0 };
                    assert_eq!(sum.as_integer(), Some(expected), "a = {a}, r = {r}, s = {s}");
                }
            }
        }
    }

    #[test]
    fn real_tables_reject_complex_characters() {
        let g = CharacterGroup::new(5).unwrap();
        for chi in g.all_characters() {
            match chi.kind() {
                CharacterKind::HigherOrder => {
                    assert_eq!(chi.real_table().unwrap_err(), Error::NotQuadratic { modulus: 5, order: 4 })
                }
                _ => assert_eq!(chi.real_table().unwrap().len(), 5),
            }
        }
    }
}
