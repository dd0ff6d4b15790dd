//! Multiplicative characters of `k^×` and their Gauss sums.

use std::fmt;

use super::cyclotomic::CyclotomicValue;
use super::field::{FieldElement, ResidueField};
use super::nt::{gcd, lcm};
use super::ArithError;
use crate::sign::Sign;

/// The character `g^j ↦ ζ_{q-1}^{index·j}` for the field's stored generator `g`.
#[derive(Clone, Copy)]
pub struct MultiplicativeCharacter<'a> {
    field: &'a ResidueField,
    index: u64,
}

impl<'a> MultiplicativeCharacter<'a> {
    pub fn new(field: &'a ResidueField, index: u64) -> Self {
        let n = field.order() - 1;
        MultiplicativeCharacter {
            field,
            index: index % n,
        }
    }

    pub fn trivial(field: &'a ResidueField) -> Self {
        Self::new(field, 0)
    }

    /// All characters of exact order `e`, by increasing index. Empty unless `e | q - 1`.
    pub fn of_exact_order(field: &'a ResidueField, e: u64) -> Vec<Self> {
        let n = field.order() - 1;
        if e == 0 || !n.is_multiple_of(e) {
            return Vec::new();
        }
        let step = n / e;
        (0..e)
            .filter(|&j| gcd(j, e) == 1 || e == 1)
            .map(|j| Self::new(field, j * step))
            .collect()
    }

    /// Every character of the field, index `0..q-1`.
    pub fn all(field: &'a ResidueField) -> impl Iterator<Item = Self> + 'a {
        (0..field.order() - 1).map(move |k| Self::new(field, k))
    }

    pub fn field(&self) -> &'a ResidueField {
        self.field
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u64 {
        let n = self.field.order() - 1;
        n / gcd(self.index, n)
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// The inverse (complex-conjugate) character.
    pub fn conj(&self) -> Self {
        let n = self.field.order() - 1;
        Self::new(self.field, n - self.index)
    }

    /// `χ(x)` as an exponent of `ζ_{order(χ)}`.
    pub fn exponent_at(&self, x: FieldElement<'_>) -> Result<u64, ArithError> {
        let d = x.dlog().ok_or(ArithError::ZeroArgument)?;
        Ok(self.exponent_at_log(d))
    }

    pub(crate) fn exponent_at_log(&self, d: u64) -> u64 {
        let n = self.field.order() - 1;
        let e = self.order();
        // index·d is a multiple of n/e
        let raw = (self.index as u128 * d as u128 % n as u128) as u64;
        raw / (n / e)
    }

    pub fn eval(&self, x: FieldElement<'_>) -> Result<CyclotomicValue, ArithError> {
        char_eval(self, x)
    }
}

impl fmt::Debug for MultiplicativeCharacter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "χ[q={}, index={}, order={}]",
            self.field.order(),
            self.index,
            self.order()
        )
    }
}

impl PartialEq for MultiplicativeCharacter<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.index == other.index
    }
}

/// `χ(x) = ζ_{q-1}^{index·dlog(x)}`.
pub fn char_eval(
    chi: &MultiplicativeCharacter<'_>,
    x: FieldElement<'_>,
) -> Result<CyclotomicValue, ArithError> {
    let n = chi.field.order() - 1;
    let d = x.dlog().ok_or(ArithError::ZeroArgument)?;
    let exp = (chi.index as u128 * d as u128 % n as u128) as u64;
    Ok(CyclotomicValue::root_of_unity(n.max(1), exp))
}

/// `χ(-1)`, read off the exact value of the character at `-1`.
pub fn char_at_minus_one(chi: &MultiplicativeCharacter<'_>) -> Result<Sign, ArithError> {
    let field = chi.field;
    if !field.prime_power().is_odd() {
        return Err(ArithError::EvenCharacteristic);
    }
    let value = char_eval(chi, -field.one())?;
    Ok(value
        .as_sign()
        .expect("a character takes ±1 at an element of order 2"))
}

/// `τ(χ) = Σ_{x ∈ k^×} χ(x) ζ_p^{Tr(x)}`, held exactly in `Z[ζ_m]` with
/// `m = lcm(p, order(χ))`.
pub fn gauss_sum(chi: &MultiplicativeCharacter<'_>) -> CyclotomicValue {
    let field = chi.field;
    let p = field.characteristic();
    let e = chi.order();
    let m = lcm(p, e);
    let (to_m_from_e, to_m_from_p) = (m / e, m / p);
    let mut dense = vec![0i64; m as usize];
    for x in field.nonzero_elements() {
        let d = x.dlog().expect("nonzero");
        let j = chi.exponent_at_log(d);
        let t = x.trace();
        dense[((j * to_m_from_e + t * to_m_from_p) % m) as usize] += 1;
    }
    CyclotomicValue::from_dense(m, &dense)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::PrimePower;
    use proptest::prelude::*;

    fn field(p: u64, f: u32) -> ResidueField {
        ResidueField::new(PrimePower::new(p, f).unwrap()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f5 = field(5, 1);
        let minus_one = f5.from_int(-1);
        for x in f5.nonzero_elements() {
            assert_eq!(
                MultiplicativeCharacter::trivial(&f5).eval(x).unwrap(),
                CyclotomicValue::integer(1)
            );
        }
        let quartic = MultiplicativeCharacter::new(&f5, 1);
        assert_eq!(quartic.order(), 4);
        assert_eq!(
            quartic.eval(minus_one).unwrap(),
            CyclotomicValue::integer(-1)
        );
        let quadratic = MultiplicativeCharacter::new(&f5, 2);
        assert_eq!(
            quadratic.eval(minus_one).unwrap(),
            CyclotomicValue::integer(1)
        );
        assert!(matches!(
            quartic.eval(f5.zero()),
            Err(ArithError::ZeroArgument)
        ));
    }

    #[test]
    fn minus_one_examples() {
        let f5 = field(5, 1);
        let order4 = MultiplicativeCharacter::of_exact_order(&f5, 4);
        assert_eq!(order4.len(), 2);
        for chi in &order4 {
            assert_eq!(char_at_minus_one(chi).unwrap(), Sign::Minus);
        }
        let order2 = MultiplicativeCharacter::of_exact_order(&f5, 2);
        assert_eq!(char_at_minus_one(&order2[0]).unwrap(), Sign::Plus);
        let f13 = field(13, 1);
        for chi in MultiplicativeCharacter::of_exact_order(&f13, 3) {
            assert_eq!(char_at_minus_one(&chi).unwrap(), Sign::Plus);
        }
        let f4 = field(2, 2);
        assert!(matches!(
            char_at_minus_one(&MultiplicativeCharacter::new(&f4, 1)),
            Err(ArithError::EvenCharacteristic)
        ));
    }

    #[test]
    fn minus_one_parity_law() {
        for q in (3..=200u64).filter(|q| q % 2 == 1) {
            let Ok(pp) = PrimePower::from_order(q) else {
                continue;
            };
            let fq = ResidueField::new(pp).unwrap();
            for e in crate::arith::nt::divisors(q - 1) {
                for chi in MultiplicativeCharacter::of_exact_order(&fq, e) {
                    assert_eq!(
                        char_at_minus_one(&chi).unwrap(),
                        Sign::from_parity((q - 1) / e),
                        "q={q} e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        for (p, f) in [(2u64, 1u32), (3, 1), (5, 1), (3, 2), (2, 3)] {
            let fq = field(p, f);
            let tau = gauss_sum(&MultiplicativeCharacter::trivial(&fq));
            assert_eq!(tau.as_integer(), Some(-1), "q = {}", fq.order());
        }
        let f5 = field(5, 1);
        let tau = gauss_sum(&MultiplicativeCharacter::new(&f5, 2));
        assert!(tau.as_integer().is_none());
        assert_eq!((&tau * &tau.conj()).as_integer(), Some(5));
    }

    #[test]
    fn f9_quadratic_trivial_on_prime_field() {
        let f9 = field(3, 2);
        let xi = MultiplicativeCharacter::new(&f9, 4);
        assert_eq!(
            xi.eval(f9.generator()).unwrap(),
            CyclotomicValue::integer(-1)
        );
        // trivial on F_3^× = {1, 2}
        assert_eq!(
            xi.eval(f9.from_int(2)).unwrap(),
            CyclotomicValue::integer(1)
        );
        let worked = CyclotomicValue::from_terms(3, [(0, 2), (1, -1), (2, -1)]);
        assert_eq!(gauss_sum(&xi), worked);
        assert_eq!(gauss_sum(&xi).as_integer(), Some(3));
    }

    #[test]
    fn gauss_product_identity_small_fields() {
        for q in 2..=32u64 {
            let Ok(pp) = PrimePower::from_order(q) else {
                continue;
            };
            let fq = ResidueField::new(pp).unwrap();
            for chi in MultiplicativeCharacter::all(&fq).filter(|c| !c.is_trivial()) {
                let tau = gauss_sum(&chi);
                let tau_bar = gauss_sum(&chi.conj());
                let minus_one = chi.eval(-fq.one()).unwrap();
                assert_eq!(&tau * &tau_bar, minus_one.scale(q as i64), "{chi:?}");
                assert_eq!((&tau * &tau.conj()).as_integer(), Some(q as i64));
            }
        }
    }

    proptest! {
        #[test]
        fn characters_are_multiplicative(
            (p, f) in prop::sample::select(vec![(3u64, 3u32), (5, 2), (7, 2), (31, 1), (2, 6)]),
            k in any::<u64>(), a in any::<u32>(), b in any::<u32>(),
        ) {
            let fq = field(p, f);
            let n = fq.order() as u32 - 1;
            let chi = MultiplicativeCharacter::new(&fq, k);
            let x = fq.from_code(1 + a % n);
            let y = fq.from_code(1 + b % n);
            prop_assert_eq!(
                chi.eval(x * y).unwrap(),
                &chi.eval(x).unwrap() * &chi.eval(y).unwrap()
            );
        }
    }
}
