//! Exact arithmetic substrate: finite fields, their multiplicative
//! characters, Gauss sums, and cyclotomic integers.

pub mod character;
pub mod cyclotomic;
pub mod field;
pub mod nt;

pub use character::{char_at_minus_one, char_eval, gauss_sum, MultiplicativeCharacter};
pub use cyclotomic::CyclotomicValue;
pub use field::{trace_to_prime_field, FieldElement, PrimePower, ResidueField, MAX_FIELD_ORDER};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("residue degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{f} exceeds the table limit of {MAX_FIELD_ORDER}")]
    FieldTooLarge { p: u64, f: u32 },
    #[error("character evaluated at zero")]
    ZeroArgument,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
}
