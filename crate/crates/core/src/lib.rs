//! Root numbers of abelian varieties with real multiplication over p-adic
//! fields.
//!
//! The crate has two independent routes to every tame local sign:
//!
//! * [`engine`] evaluates closed-form sign formulas from a place's
//!   invariants (residue field order, tame inertia order, wild exponent,
//!   Artin conductor, abelianness of the Galois image, toric subtype);
//! * [`oracle`] re-derives the same signs from Gauss sums over explicitly
//!   constructed residue fields, using only the epsilon-factor axioms.
//!
//! [`local`] validates a place's data against the structural constraints
//! that real multiplication imposes, [`job`] is the JSON job format, and
//! [`suites`] drives the verification sweeps used by the `rootnum` binary.

pub mod arith;
pub mod engine;
pub mod job;
pub mod local;
pub mod oracle;
pub mod sign;
pub mod suites;

pub use sign::Sign;
