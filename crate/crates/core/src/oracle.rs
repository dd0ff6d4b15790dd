//! Brute-force derivation of tame local signs from Gauss sums.
//!
//! Nothing here calls into [`crate::engine`]. Each oracle evaluates a
//! combination of epsilon factors that does not depend on the choice of
//! uniformizer, realized at residue level:
//!
//! * a tame character `χ` of conductor exponent 1 and an additive character
//!   of level `n(ψ) = 0` has epsilon factor proportional to the Gauss sum
//!   `τ(χ̄)` over the residue field;
//! * the unramified quadratic extension is modeled by the residue extension
//!   `F_{q²}/F_q`, with `ζ_{2q-2}` the element `G^{(q+1)/2}` of order
//!   `2(q-1)` for a generator `G` of `F_{q²}^×`.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{
    gauss_sum, ArithError, CyclotomicValue, MultiplicativeCharacter, PrimePower, ResidueField,
};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle needs a nontrivial character")]
    TrivialCharacter,
    #[error("character is not trivial on the subfield of order {q}")]
    NotTrivialOnSubfield { q: u64 },
    #[error("field of order {0} is not a quadratic extension")]
    NotQuadraticExtension(u64),
    #[error("expected a sign, got {0}")]
    NonSignValue(String),
    #[error("oracle requires odd residue characteristic")]
    EvenCharacteristic,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A tame character of a local field through its residue-level data.
///
/// The conductor exponent is 0 exactly for the trivial character and 1
/// otherwise; the additive character has level `n(ψ) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct TameCharacterDatum<'a> {
    pub residue_char: MultiplicativeCharacter<'a>,
    pub conductor_exponent: u32,
    pub psi_level: i64,
}

impl<'a> TameCharacterDatum<'a> {
    pub fn new(residue_char: MultiplicativeCharacter<'a>) -> Self {
        TameCharacterDatum {
            residue_char,
            conductor_exponent: u32::from(!residue_char.is_trivial()),
            psi_level: 0,
        }
    }

    pub fn field(&self) -> &'a ResidueField {
        self.residue_char.field()
    }
}

/// Quadratic characters at a tame place, up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EtaClass {
    Trivial,
    UnramifiedQuadratic,
    RamifiedQuadraticTame,
}

impl EtaClass {
    pub const ALL: [EtaClass; 3] = [
        EtaClass::Trivial,
        EtaClass::UnramifiedQuadratic,
        EtaClass::RamifiedQuadraticTame,
    ];
}

fn exact_sign(v: &CyclotomicValue) -> Result<Sign, OracleError> {
    v.as_sign()
        .ok_or_else(|| OracleError::NonSignValue(v.to_string()))
}

/// Precomputed kernel for the dual-pair products `τ(χ)τ(χ̄)` over one field.
///
/// Expanding the product and substituting `x = u·y` gives
/// `τ(χ)τ(χ̄) = Σ_{u≠0} χ(u) S(u)` with `S(u) = Σ_{y≠0} ζ_p^{Tr(y(1+u))}`.
/// The kernel stores every `S(u)`, summed by brute force and reduced in
/// `Z[ζ_p]`, so each character costs one pass over `k^×`.
pub struct AbelianPairOracle<'a> {
    field: &'a ResidueField,
    /// Indexed by the discrete log of `u`; sparse terms of `S(u)` in `Z[ζ_p]`.
    kernel: Vec<Vec<(u64, i64)>>,
}

impl<'a> AbelianPairOracle<'a> {
    pub fn new(field: &'a ResidueField) -> Self {
        let p = field.characteristic();
        let n = field.order() - 1;
        let kernel = (0..n)
            .map(|log_u| {
                let u = field.generator_power(log_u);
                let shift = field.one() + u;
                let mut counts = vec![0i64; p as usize];
                for y in field.nonzero_elements() {
                    counts[(y * shift).trace() as usize] += 1;
                }
                CyclotomicValue::from_dense(p, &counts).terms().collect()
            })
            .collect();
        AbelianPairOracle { field, kernel }
    }

    /// `τ(χ)·τ(χ̄)`, exactly.
    pub fn pair_product(&self, chi: &MultiplicativeCharacter<'_>) -> CyclotomicValue {
        assert!(
            std::ptr::eq(chi.field(), self.field),
            "character belongs to another field"
        );
        let p = self.field.characteristic();
        let e = chi.order();
        let m = e * p;
        let mut acc: HashMap<u64, i64> = HashMap::new();
        for (log_u, terms) in self.kernel.iter().enumerate() {
            let j = chi.exponent_at_log(log_u as u64);
            for &(t, c) in terms {
                // ζ_e^j ζ_p^t = ζ_m^{jp + te}
                *acc.entry((j * p + t * e) % m).or_insert(0) += c;
            }
        }
        CyclotomicValue::from_terms(m, acc)
    }

    /// The normalized product `τ(χ)τ(χ̄)/q` as a sign.
    pub fn sign(&self, chi: &TameCharacterDatum<'_>) -> Result<Sign, OracleError> {
        let rc = &chi.residue_char;
        if rc.is_trivial() {
            return Err(OracleError::TrivialCharacter);
        }
        if !self.field.prime_power().is_odd() {
            return Err(OracleError::EvenCharacteristic);
        }
        let q = self.field.order() as i64;
        let product = self.pair_product(rc);
        let normalized = product
            .div_exact(q)
            .ok_or_else(|| OracleError::NonSignValue(format!("({product})/{q}")))?;
        exact_sign(&normalized)
    }
}

/// Root number of `χ ⊕ χ^{-1}ω^{-1}` for a tame character `χ` of the base
/// field, as the normalized dual-pair product `τ(χ)τ(χ̄)/q`.
pub fn oracle_abelian_pair(chi: &TameCharacterDatum<'_>) -> Result<Sign, OracleError> {
    AbelianPairOracle::new(chi.field()).sign(chi)
}

/// Order of the subfield of a degree-2 extension.
fn base_order(field: &ResidueField) -> Result<u64, OracleError> {
    let pp = field.prime_power();
    if !pp.f().is_multiple_of(2) {
        return Err(OracleError::NotQuadraticExtension(pp.q()));
    }
    Ok(PrimePower::new(pp.p(), pp.f() / 2)?.q())
}

/// Checks the preconditions shared by the induced-case oracles and returns
/// the base order `q`.
fn induced_preconditions(xi: &TameCharacterDatum<'_>) -> Result<u64, OracleError> {
    let field = xi.field();
    let q = base_order(field)?;
    if q % 2 == 0 {
        return Err(OracleError::EvenCharacteristic);
    }
    let rc = &xi.residue_char;
    if rc.is_trivial() {
        return Err(OracleError::TrivialCharacter);
    }
    // F_q^× is generated by G^{q+1}
    let subfield_gen = field.generator_power(q + 1);
    if rc.eval(subfield_gen)?.as_integer() != Some(1) {
        return Err(OracleError::NotTrivialOnSubfield { q });
    }
    Ok(q)
}

/// Both sides of the Fröhlich–Queyrut identity for `ξ` trivial on `F_q^×`:
/// `lhs = τ(ξ̄)/q` and `rhs = ξ(ζ_{2q-2})`.
pub fn froehlich_queyrut_check(xi: &TameCharacterDatum<'_>) -> Result<(Sign, Sign), OracleError> {
    let q = induced_preconditions(xi)?;
    let field = xi.field();
    let rc = &xi.residue_char;

    let tau = gauss_sum(&rc.conj());
    let lhs = tau
        .div_exact(q as i64)
        .ok_or_else(|| OracleError::NonSignValue(format!("({tau})/{q}")))?;
    let lhs = exact_sign(&lhs)?;

    let zeta = field.generator_power(q.div_ceil(2));
    debug_assert_eq!(zeta.multiplicative_order(), Some(2 * (q - 1)));
    let rhs = exact_sign(&rc.eval(zeta)?)?;
    Ok((lhs, rhs))
}

/// Root number of `Ind χ` from the unramified quadratic extension, with `χ`
/// realized by `ξ` on `F_{q²}^×` trivial on `F_q^×`:
///
/// `w = w(χ, ψ_{L_u}) · w(1 ⊕ χ_0, ψ_K)` where
/// `w(χ, ψ_{L_u}) = (-1)^{n+a} · τ(ξ̄)/q` and `w(1 ⊕ χ_0, ψ_K) = (-1)^n`.
pub fn oracle_induced(xi: &TameCharacterDatum<'_>) -> Result<Sign, OracleError> {
    let (fq_value, _) = froehlich_queyrut_check(xi)?;
    let n = xi.psi_level;
    let a = xi.conductor_exponent as u64;
    let twist = unramified_twist_epsilon_shift(a, n, 1, Sign::Minus);
    let induced_trivial = Sign::from_parity(n.rem_euclid(2) as u64);
    Ok(twist * fq_value * induced_trivial)
}

/// Whether `-1` is a square, by exhaustive search over the field.
pub fn minus_one_is_square(field: &ResidueField) -> bool {
    let minus_one = -field.one();
    field.elements().any(|x| x * x == minus_one)
}

/// Root number of `η ⊗ sp(2)` for a quadratic (or trivial) character `η`:
/// `det η(-1) · (-1)^{⟨η, 1⟩}`.
pub fn oracle_sp2(eta: EtaClass, field: &ResidueField) -> Result<Sign, OracleError> {
    let (det_part, multiplicity) = match eta {
        EtaClass::Trivial => (Sign::Plus, 1),
        // unramified characters are trivial on units
        EtaClass::UnramifiedQuadratic => (Sign::Plus, 0),
        EtaClass::RamifiedQuadraticTame => {
            if !field.prime_power().is_odd() {
                return Err(OracleError::EvenCharacteristic);
            }
            // -1 is a norm from the tame quadratic extension iff it is a square mod 𝔪
            let det = if minus_one_is_square(field) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            (det, 0)
        }
    };
    Ok(det_part * Sign::Minus.pow(multiplicity))
}

/// Change of the epsilon factor under a quadratic unramified twist:
/// `u(φ)^{n·dim + a}`.
pub fn unramified_twist_epsilon_shift(a: u64, n: i64, dim: u64, u_at_frobenius: Sign) -> Sign {
    let exponent = (n * dim as i64 + a as i64).rem_euclid(2) as u64;
    u_at_frobenius.pow(exponent)
}

/// Artin conductor of a tame representation: `dim - dim(V^I)`.
///
/// Panics if `inertia_invariant_dim > dim`.
pub fn artin_conductor_tame(dim: u64, inertia_invariant_dim: u64) -> u64 {
    dim.checked_sub(inertia_invariant_dim)
        .expect("inertia invariants cannot exceed the dimension")
}
