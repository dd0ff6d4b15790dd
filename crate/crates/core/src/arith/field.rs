//! Explicit finite fields `F_q = F_p[x]/(P)`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`
//! from their coefficient vectors over the prime field. Multiplication goes
//! through discrete-log tables built once at construction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::nt::{is_prime, prime_divisors};
use super::ArithError;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1_000_000;

/// `q = p^f` with `p` prime and `f >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    f: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, f: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if f == 0 {
            return Err(ArithError::ZeroDegree);
        }
        let q = p.checked_pow(f).ok_or(ArithError::FieldTooLarge { p, f })?;
        Ok(PrimePower { p, f, q })
    }

    /// Recovers `(p, f)` from a prime power `q`.
    pub fn from_order(q: u64) -> Result<Self, ArithError> {
        match super::nt::as_prime_power(q) {
            Some((p, f)) => Self::new(p, f),
            None => Err(ArithError::NotPrimePower(q)),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.f)
        }
    }
}

/// Polynomials over `F_p`, coefficients low degree first, no trailing zeros.
mod poly {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        super::super::nt::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = r[r.len() - 1] * lead_inv % p;
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test for a monic polynomial of degree `f`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let f = (m.len() - 1) as u32;
        if f == 1 {
            return true;
        }
        let x = vec![0, 1];
        // x^(p^k) mod m
        let frob = |k: u32| -> Poly {
            let mut acc = x.clone();
            for _ in 0..k {
                acc = pow_mod(&acc, p, m, p);
            }
            acc
        };
        // frob() is already reduced mod m, and deg x < f
        if !sub(&frob(f), &x, p).is_empty() {
            return false;
        }
        for ell in super::super::nt::prime_divisors(f as u64) {
            let h = sub(&frob(f / ell as u32), &x, p);
            let g = gcd(m, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// The finite field of order `q = p^f` with a fixed modulus and generator.
///
/// The modulus is the first monic irreducible `x^f + c_{f-1}x^{f-1} + ... + c_0`
/// when the lower coefficients are enumerated by their code
/// `c_0 + c_1 p + ...` in increasing order; the generator is the element
/// of smallest code whose multiplicative order is `q - 1`.
pub struct ResidueField {
    pp: PrimePower,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

impl ResidueField {
    pub fn new(pp: PrimePower) -> Result<Self, ArithError> {
        let (p, f, q) = (pp.p, pp.f as usize, pp.q);
        if q > MAX_FIELD_ORDER {
            return Err(ArithError::FieldTooLarge { p, f: pp.f });
        }
        let digits = |mut code: u64| -> Vec<u64> {
            (0..f)
                .map(|_| {
                    let d = code % p;
                    code /= p;
                    d
                })
                .collect()
        };

        let modulus = (0..q)
            .map(|code| {
                let mut m = digits(code);
                m.push(1);
                m
            })
            .find(|m| poly::is_irreducible(m, p))
            .expect("monic irreducibles exist in every degree");

        let order_factors = prime_divisors(q - 1);
        let generator = (1..q)
            .find(|&code| {
                let g = poly::trim(digits(code));
                order_factors
                    .iter()
                    .all(|&ell| poly::pow_mod(&g, (q - 1) / ell, &modulus, p) != vec![1])
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let encode = |c: &[u64]| -> u32 { c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32 };
        let g = poly::trim(digits(generator));
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u64];
        for i in 0..(q - 1) {
            let code = encode(&cur);
            exp.push(code);
            log[code as usize] = i as u32;
            cur = poly::mul_mod(&cur, &g, &modulus, p);
        }

        let mut field = ResidueField {
            pp,
            modulus,
            generator: generator as u32,
            exp,
            log,
            trace: Vec::new(),
        };
        let trace = (0..q as u32)
            .map(|code| {
                if code == 0 {
                    return 0;
                }
                let l = field.log[code as usize] as u64;
                let mut acc = 0u32;
                let mut pk = 1u64;
                for _ in 0..f {
                    let conj = field.exp[((l * pk) % (q - 1)) as usize];
                    acc = field.add_codes(acc, conj);
                    pk = pk * p % (q - 1).max(1);
                }
                debug_assert!((acc as u64) < p, "trace must land in the prime field");
                acc
            })
            .collect();
        field.trace = trace;
        Ok(field)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn characteristic(&self) -> u64 {
        self.pp.p
    }

    pub fn order(&self) -> u64 {
        self.pp.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, coeffs: &[u64]) -> FieldElement<'_> {
        let p = self.pp.p;
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        let r = poly::rem(&reduced, &self.modulus, p);
        let code = r.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        FieldElement {
            field: self,
            code: code as u32,
        }
    }

    pub fn from_code(&self, code: u32) -> FieldElement<'_> {
        assert!((code as u64) < self.pp.q, "code out of range");
        FieldElement { field: self, code }
    }

    pub fn from_int(&self, n: i64) -> FieldElement<'_> {
        let p = self.pp.p as i64;
        self.from_code(n.rem_euclid(p) as u32)
    }

    pub fn zero(&self) -> FieldElement<'_> {
        self.from_code(0)
    }

    pub fn one(&self) -> FieldElement<'_> {
        self.from_code(1)
    }

    pub fn generator(&self) -> FieldElement<'_> {
        self.from_code(self.generator)
    }

    /// `g^k` for the stored generator `g`.
    pub fn generator_power(&self, k: u64) -> FieldElement<'_> {
        self.from_code(self.exp[(k % (self.pp.q - 1)) as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (0..self.pp.q as u32).map(move |c| self.from_code(c))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (1..self.pp.q as u32).map(move |c| self.from_code(c))
    }

    pub(crate) fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.pp.p as u32;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn neg_code(&self, a: u32) -> u32 {
        let p = self.pp.p as u32;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.pp.q - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[l as usize]
    }

    /// Discrete log of a nonzero code with respect to the generator.
    pub(crate) fn log_code(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    pub(crate) fn trace_code(&self, a: u32) -> u64 {
        self.trace[a as usize] as u64
    }
}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResidueField")
            .field("q", &self.pp.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator())
            .finish()
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.pp == other.pp
    }
}

impl Eq for ResidueField {}

/// An element of a [`ResidueField`].
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    field: &'a ResidueField,
    code: u32,
}

impl<'a> FieldElement<'a> {
    pub fn field(&self) -> &'a ResidueField {
        self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Coefficients over the prime field, constant term first (length `f`).
    pub fn coeffs(&self) -> Vec<u64> {
        let p = self.field.pp.p;
        let mut c = self.code as u64;
        (0..self.field.pp.f)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    /// Discrete log base the field's generator; `None` for zero.
    pub fn dlog(&self) -> Option<u64> {
        self.field.log_code(self.code)
    }

    pub fn pow(&self, k: u64) -> FieldElement<'a> {
        match self.dlog() {
            None if k == 0 => self.field.one(),
            None => *self,
            Some(l) => {
                let n = self.field.pp.q - 1;
                let e = ((l as u128 * k as u128) % n as u128) as u64;
                self.field.generator_power(e)
            }
        }
    }

    pub fn inverse(&self) -> Option<FieldElement<'a>> {
        self.dlog()
            .map(|l| self.field.generator_power(self.field.pp.q - 1 - l))
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        let n = self.field.pp.q - 1;
        self.dlog().map(|l| n / super::nt::gcd(l, n))
    }

    /// Absolute trace `x + x^p + ... + x^{p^{f-1}}` as an integer mod `p`.
    pub fn trace(&self) -> u64 {
        trace_to_prime_field(*self)
    }
}

/// Absolute trace of `x` down to the prime field.
pub fn trace_to_prime_field(x: FieldElement<'_>) -> u64 {
    x.field.trace_code(x.code)
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.code == other.code
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

fn same_field(a: &FieldElement<'_>, b: &FieldElement<'_>) {
    assert!(
        std::ptr::eq(a.field, b.field),
        "field elements from different fields"
    );
}

impl<'a> Add for FieldElement<'a> {
    type Output = FieldElement<'a>;

    fn add(self, rhs: Self) -> Self::Output {
        same_field(&self, &rhs);
        self.field
            .from_code(self.field.add_codes(self.code, rhs.code))
    }
}

impl<'a> Neg for FieldElement<'a> {
    type Output = FieldElement<'a>;

    fn neg(self) -> Self::Output {
        self.field.from_code(self.field.neg_code(self.code))
    }
}

impl<'a> Sub for FieldElement<'a> {
    type Output = FieldElement<'a>;

    fn sub(self, rhs: Self) -> Self::Output {
        self + (-rhs)
    }
}

impl<'a> Mul for FieldElement<'a> {
    type Output = FieldElement<'a>;

    fn mul(self, rhs: Self) -> Self::Output {
        same_field(&self, &rhs);
        self.field
            .from_code(self.field.mul_codes(self.code, rhs.code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64, f: u32) -> ResidueField {
        ResidueField::new(PrimePower::new(p, f).unwrap()).unwrap()
    }

    /// Order of `x` by repeated multiplication, independent of the tables.
    fn brute_order(x: FieldElement<'_>) -> u64 {
        let one = x.field().one();
        let mut acc = x;
        let mut k = 1;
        while acc != one {
            acc = acc * x;
            k += 1;
        }
        k
    }

    #[test]
    fn prime_power_validation() {
        assert!(matches!(
            PrimePower::new(6, 1),
            Err(ArithError::NotPrime(6))
        ));
        assert!(matches!(PrimePower::new(5, 0), Err(ArithError::ZeroDegree)));
        assert_eq!(
            PrimePower::from_order(49).unwrap(),
            PrimePower::new(7, 2).unwrap()
        );
        assert!(PrimePower::from_order(12).is_err());
        assert!(ResidueField::new(PrimePower::new(1009, 2).unwrap()).is_err());
    }

    #[test]
    fn prime_field_generators() {
        let f5 = field(5, 1);
        assert_eq!(f5.generator().coeffs(), vec![2]);
        let powers: Vec<u64> = (1..=4).map(|k| f5.generator().pow(k).coeffs()[0]).collect();
        assert_eq!(powers, vec![2, 4, 3, 1]);
        assert_eq!(field(7, 1).generator().coeffs(), vec![3]);
        // brute force: smallest residue of full order
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let fp = field(p, 1);
            let expected = (1..p)
                .find(|&a| brute_order(fp.from_code(a as u32)) == p - 1)
                .unwrap();
            assert_eq!(fp.generator().code() as u64, expected, "p = {p}");
        }
    }

    #[test]
    fn f9_model() {
        let f9 = field(3, 2);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let g = f9.generator();
        assert_eq!(g.coeffs(), vec![1, 1]);
        // powers of x+1 modulo x^2+1: x+1, 2x, 2x+1, 2, ...
        assert_eq!(brute_order(g), 8);
        assert_eq!((g * g).coeffs(), vec![0, 2]);
        assert_eq!(g.pow(4).coeffs(), vec![2, 0]);
        // Tr(x+1) = (x+1) + (x+1)^3 = 2
        assert_eq!(g.trace(), 2);
        assert_eq!(f9.zero().trace(), 0);
    }

    #[test]
    fn prime_field_trace_is_identity() {
        let f11 = field(11, 1);
        for x in f11.elements() {
            assert_eq!(x.trace(), x.code() as u64);
        }
    }

    #[test]
    fn moduli_are_irreducible_by_root_search() {
        // degree 2 and 3: irreducible iff no root in F_p
        for (p, f) in [
            (2u64, 2u32),
            (2, 3),
            (3, 2),
            (3, 3),
            (5, 2),
            (5, 3),
            (7, 2),
            (11, 2),
        ] {
            let fq = field(p, f);
            let m = fq.modulus();
            let has_root =
                (0..p).any(|a| m.iter().rev().fold(0u64, |acc, &c| (acc * a + c) % p) == 0);
            assert!(!has_root, "p={p} f={f} modulus {:?}", m);
            assert_eq!(brute_order(fq.generator()), fq.order() - 1);
        }
    }

    #[test]
    fn modulus_is_first_irreducible() {
        // F_2: x^2+x+1, F_8: x^3+x+1, F_25: first is x^2+2 (2 is a non-square mod 5)
        assert_eq!(field(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(field(2, 3).modulus(), &[1, 1, 0, 1]);
        assert_eq!(field(5, 2).modulus(), &[2, 0, 1]);
        assert_eq!(field(7, 1).modulus(), &[0, 1]);
    }

    #[test]
    fn trace_additive_and_frobenius_invariant() {
        for (p, f) in [(2u64, 4u32), (3, 3), (5, 2), (7, 2)] {
            let fq = field(p, f);
            for x in fq.elements() {
                assert_eq!(x.pow(p).trace(), x.trace());
                for y in fq.elements().step_by(3) {
                    assert_eq!((x + y).trace(), (x.trace() + y.trace()) % p);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(
            (p, f) in prop::sample::select(vec![(2u64, 5u32), (3, 4), (5, 3), (7, 2), (13, 2), (101, 1)]),
            a in any::<u32>(), b in any::<u32>(), c in any::<u32>(),
        ) {
            let fq = field(p, f);
            let q = fq.order() as u32;
            let (x, y, z) = (fq.from_code(a % q), fq.from_code(b % q), fq.from_code(c % q));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!(x - x, fq.zero());
            if let Some(inv) = x.inverse() {
                prop_assert_eq!(x * inv, fq.one());
            }
            // the table product agrees with polynomial multiplication mod P
            let mut prod = vec![0u64; 2 * f as usize];
            for (i, &u) in x.coeffs().iter().enumerate() {
                for (j, &v) in y.coeffs().iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            prop_assert_eq!(fq.element(&prod), x * y);
        }
    }
}
