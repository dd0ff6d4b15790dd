//! Exact elements of the cyclotomic rings `Z[ζ_m]`.
//!
//! A value is stored as a sparse map `exponent -> coefficient` meaning
//! `Σ c_j ζ_m^j`, and is always kept in a canonical form so that structural
//! equality is equality of algebraic numbers.
//!
//! The canonical form is the tensor-product basis of `Z[ζ_m]`: write
//! `m = Π ℓ^a` and, for each prime `ℓ`, call the *ℓ-digit* of an exponent
//! `j` the value `(j mod ℓ^a) div ℓ^(a-1)`. The exponents whose ℓ-digit is
//! never `ℓ - 1` form a basis (there are exactly `φ(m)` of them). Any other
//! exponent is rewritten with the relation
//! `Σ_{i<ℓ} ζ_m^(j + i·m/ℓ) = 0`, whose orbit hits every ℓ-digit once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::nt::{factorize, lcm};
use crate::sign::Sign;

/// Above this order products accumulate in a hash map instead of a dense buffer.
const DENSE_LIMIT: u64 = 1 << 22;

#[derive(Clone)]
pub struct CyclotomicValue {
    order: u64,
    coeffs: BTreeMap<u64, i64>,
}

impl CyclotomicValue {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CyclotomicValue {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// The rational integer `n`, as an element of `Z[ζ_1] = Z`.
    pub fn integer(n: i64) -> Self {
        Self::from_terms(1, [(0, n)])
    }

    /// `ζ_order^exponent`.
    pub fn root_of_unity(order: u64, exponent: u64) -> Self {
        Self::from_terms(order, [(exponent % order, 1)])
    }

    /// Builds `Σ c ζ_order^e` from arbitrary (possibly repeated, unreduced)
    /// exponent/coefficient pairs.
    pub fn from_terms<I>(order: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        assert!(order >= 1, "cyclotomic order must be positive");
        let mut acc: HashMap<u64, i64> = HashMap::new();
        for (e, c) in terms {
            if c != 0 {
                *acc.entry(e % order).or_insert(0) += c;
            }
        }
        Self::canonical(order, acc)
    }

    /// Builds a value from a dense coefficient vector of length `order`.
    pub fn from_dense(order: u64, dense: &[i64]) -> Self {
        assert_eq!(dense.len() as u64, order);
        let acc = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e as u64, c))
            .collect();
        Self::canonical(order, acc)
    }

    fn canonical(order: u64, mut acc: HashMap<u64, i64>) -> Self {
        for (ell, a) in factorize(order) {
            let full = ell.pow(a);
            let low = full / ell;
            let step = order / ell;
            let top = ell - 1;
            let hits: Vec<(u64, i64)> = acc
                .iter()
                .filter(|(&e, &c)| c != 0 && (e % full) / low == top)
                .map(|(&e, &c)| (e, c))
                .collect();
            for (e, c) in hits {
                acc.remove(&e);
                for i in 1..ell {
                    *acc.entry((e + i * step) % order).or_insert(0) -= c;
                }
            }
        }
        CyclotomicValue {
            order,
            coeffs: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical `(exponent, coefficient)` terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Re-expresses the value in `Z[ζ_target]`; `order` must divide `target`.
    pub fn lift(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let k = target / self.order;
        Self::from_terms(target, self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.order;
        Self::from_terms(m, self.terms().map(|(e, c)| ((m - e) % m, c)))
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => self.coeffs.get(&0).copied(),
            _ => None,
        }
    }

    /// The value as `±1`, decided exactly.
    pub fn as_sign(&self) -> Option<Sign> {
        self.as_integer().and_then(Sign::from_i64)
    }

    /// Exact division by a nonzero integer, if every coefficient is divisible.
    pub fn div_exact(&self, n: i64) -> Option<Self> {
        assert!(n != 0, "division by zero");
        if self.coeffs.values().any(|c| c % n != 0) {
            return None;
        }
        Some(CyclotomicValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, c / n)).collect(),
        })
    }

    pub fn scale(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero(self.order);
        }
        CyclotomicValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, c * n)).collect(),
        }
    }

    /// Numerical value under the embedding `ζ_m ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        self.terms()
            .map(|(e, c)| {
                Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / m) * c as f64
            })
            .sum()
    }

    /// Sign read off the numerical value, accepted only within `tol` of ±1.
    pub fn numeric_sign(&self, tol: f64) -> Option<Sign> {
        let z = self.to_complex();
        if (z - 1.0).norm() <= tol {
            Some(Sign::Plus)
        } else if (z + 1.0).norm() <= tol {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_terms(self.order, [(0, 1)]);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// `self^exp` for a non-negative integer exponent.
    pub fn powi(&self, exp: u32) -> Self {
        self.pow(exp)
    }
}

impl PartialEq for CyclotomicValue {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicValue {}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicValue[{}]({})", self.order, self)
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (neg, mag) = (c < 0, c.unsigned_abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => write!(f, "z{}^{}", self.order, e)?,
                _ => write!(f, "{mag}*z{}^{}", self.order, e)?,
            }
        }
        Ok(())
    }
}

impl Add for &CyclotomicValue {
    type Output = CyclotomicValue;

    fn add(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        let (a, b) = self.common(rhs);
        // Sums of canonical forms are canonical.
        let mut coeffs = a.coeffs;
        for (e, c) in b.coeffs {
            *coeffs.entry(e).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        CyclotomicValue {
            order: a.order,
            coeffs,
        }
    }
}

impl Neg for &CyclotomicValue {
    type Output = CyclotomicValue;

    fn neg(self) -> CyclotomicValue {
        self.scale(-1)
    }
}

impl Sub for &CyclotomicValue {
    type Output = CyclotomicValue;

    fn sub(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        self + &(-rhs)
    }
}

impl Mul for &CyclotomicValue {
    type Output = CyclotomicValue;

    fn mul(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        let (a, b) = self.common(rhs);
        let m = a.order;
        if m <= DENSE_LIMIT {
            let mut dense = vec![0i64; m as usize];
            for (&ea, &ca) in &a.coeffs {
                for (&eb, &cb) in &b.coeffs {
                    dense[((ea + eb) % m) as usize] += ca * cb;
                }
            }
            CyclotomicValue::from_dense(m, &dense)
        } else {
            let mut acc: HashMap<u64, i64> = HashMap::new();
            for (&ea, &ca) in &a.coeffs {
                for (&eb, &cb) in &b.coeffs {
                    *acc.entry((ea + eb) % m).or_insert(0) += ca * cb;
                }
            }
            CyclotomicValue::canonical(m, acc)
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for CyclotomicValue {
            type Output = CyclotomicValue;
            fn $method(self, rhs: CyclotomicValue) -> CyclotomicValue {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for CyclotomicValue {
    type Output = CyclotomicValue;

    fn neg(self) -> CyclotomicValue {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(m: u64, e: u64) -> CyclotomicValue {
        CyclotomicValue::root_of_unity(m, e)
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in 2..40 {
            let s = CyclotomicValue::from_terms(m, (0..m).map(|e| (e, 1)));
            assert!(s.is_zero(), "m = {m}: {s}");
        }
    }

    #[test]
    fn canonical_basis_has_totient_size() {
        // Every root of unity reduces to the basis; the basis exponents are
        // exactly those with no ℓ-digit equal to ℓ - 1.
        for m in [1u64, 4, 6, 9, 12, 15, 24, 30] {
            let mut basis = std::collections::BTreeSet::new();
            for e in 0..m {
                for (k, _) in z(m, e).terms() {
                    basis.insert(k);
                }
            }
            assert_eq!(
                basis.len() as u64,
                crate::arith::nt::euler_phi(m),
                "m = {m}"
            );
        }
    }

    #[test]
    fn small_identities() {
        // ζ_4^2 = -1, ζ_3 + ζ_3^2 = -1, ζ_6 = -ζ_3^2
        assert_eq!(z(4, 2).as_integer(), Some(-1));
        assert_eq!((z(3, 1) + z(3, 2)).as_integer(), Some(-1));
        assert_eq!(z(6, 1), -z(3, 2));
        let worked = CyclotomicValue::from_terms(3, [(0, 2), (1, -1), (2, -1)]);
        assert_eq!(worked.as_integer(), Some(3));
        assert_eq!(worked.to_string(), "3");
        // (1 + i)(1 - i) = 2
        let a = CyclotomicValue::from_terms(4, [(0, 1), (1, 1)]);
        assert_eq!((&a * &a.conj()).as_integer(), Some(2));
    }

    #[test]
    fn mixed_orders_compare_by_value() {
        assert_eq!(z(2, 1), CyclotomicValue::integer(-1));
        assert_eq!(z(12, 4), z(3, 1));
        assert_ne!(z(12, 1), z(12, 5));
        assert_eq!(z(5, 2).lift(15), z(15, 6));
    }

    #[test]
    fn exact_division_and_signs() {
        let v = CyclotomicValue::integer(-7);
        assert_eq!(v.div_exact(7).unwrap().as_sign(), Some(Sign::Minus));
        assert!(z(5, 1).scale(3).div_exact(2).is_none());
        assert_eq!(z(8, 4).numeric_sign(1e-9), Some(Sign::Minus));
        assert_eq!(z(8, 1).numeric_sign(1e-9), None);
    }

    fn arb_value() -> impl Strategy<Value = CyclotomicValue> {
        (
            prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 9, 12, 15, 20, 21, 36]),
            prop::collection::vec((0u64..1000, -5i64..=5), 0..8),
        )
            .prop_map(|(m, terms)| CyclotomicValue::from_terms(m, terms))
    }

    proptest! {
        #[test]
        fn ring_ops_match_numeric(a in arb_value(), b in arb_value(), c in arb_value()) {
            let exact = &(&a * &b) + &(&c - &a);
            let numeric = a.to_complex() * b.to_complex() + (c.to_complex() - a.to_complex());
            prop_assert!((exact.to_complex() - numeric).norm() < 1e-9);
        }

        #[test]
        fn multiplication_commutes_and_distributes(a in arb_value(), b in arb_value(), c in arb_value()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn zero_iff_numerically_zero(a in arb_value(), b in arb_value()) {
            let d = &a - &b;
            prop_assert_eq!(d.is_zero(), d.to_complex().norm() < 1e-9);
        }
    }
}
