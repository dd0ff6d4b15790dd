//! Closed-form local and global root numbers.
//!
//! Every place carries two signs: `w_iota`, the root number of the
//! two-dimensional piece attached to one real embedding of the
//! multiplication field, and `w = w_iota^g`, the root number of the whole
//! variety at that place. Infinite places contribute `-1` per embedding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::local::{
    validate_place_with, validate_variety_with, PlaceData, PotentiallyGood, ReductionClass,
    RmVarietyData, ToricSubtype, ValidationOptions, ValidationReport,
};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("e = {e} does not divide {modulus}")]
    DivisibilityViolation { e: u64, modulus: u64 },
    #[error("per-embedding conductor {a_iota} must be even and at least 2")]
    OddConductor { a_iota: u64 },
    #[error("Artin conductor {a} is not divisible by g = {g}")]
    ConductorNotSplittable { a: u64, g: u32 },
    #[error("formula requires odd residue characteristic")]
    EvenCharacteristic,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("validation failed: {0}")]
    Invalid(ValidationReport),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    GoodRed,
    PotGoodAbelian,
    PotGoodInduced,
    SplitMult,
    NonSplitMult,
    AdditiveMult,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceSign {
    pub label: String,
    pub w: Sign,
    pub w_iota: Sign,
    pub case_tag: CaseTag,
    /// Set when `g` is even and the case formula was checked against `w = +1`.
    pub even_dim_shortcut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootNumberReport {
    pub dimension: u32,
    pub infinite_places: u32,
    pub per_place: Vec<PlaceSign>,
    pub global_w: Sign,
    pub global_w_iota: Sign,
    pub validation: ValidationReport,
}

fn require_odd(q: u64) -> Result<(), EngineError> {
    if q.is_multiple_of(2) {
        Err(EngineError::EvenCharacteristic)
    } else {
        Ok(())
    }
}

/// Abelian Galois image: `w_iota = (-1)^{(q-1)/e}`.
pub fn sign_pot_good_abelian(q: u64, e: u64) -> Result<Sign, EngineError> {
    require_odd(q)?;
    if e == 0 || !(q - 1).is_multiple_of(e) {
        return Err(EngineError::DivisibilityViolation { e, modulus: q - 1 });
    }
    Ok(Sign::from_parity((q - 1) / e))
}

/// Non-abelian Galois image with abelian inertia image:
/// `w_iota = (-1)^{a_iota/2 + (q+1)/e}`.
pub fn sign_pot_good_induced(q: u64, e: u64, a_iota: u64) -> Result<Sign, EngineError> {
    require_odd(q)?;
    if e == 0 || !(q + 1).is_multiple_of(e) {
        return Err(EngineError::DivisibilityViolation { e, modulus: q + 1 });
    }
    if !a_iota.is_multiple_of(2) || a_iota < 2 {
        return Err(EngineError::OddConductor { a_iota });
    }
    Ok(Sign::from_parity(a_iota / 2 + (q + 1) / e))
}

/// Potentially totally toric reduction; returns `(w, w_iota)`.
pub fn sign_toric(subtype: ToricSubtype, q: u64, g: u32) -> Result<(Sign, Sign), EngineError> {
    let w_iota = match subtype {
        ToricSubtype::SplitMultiplicative => Sign::Minus,
        ToricSubtype::NonSplitMultiplicative => Sign::Plus,
        ToricSubtype::Additive => {
            if q.is_multiple_of(2) {
                return Err(EngineError::UnsupportedCase(
                    "additive potentially multiplicative reduction over p = 2".into(),
                ));
            }
            Sign::from_parity((q - 1) / 2)
        }
    };
    Ok((w_iota.pow(g as u64), w_iota))
}

pub fn sign_place(place: &PlaceData, g: u32) -> Result<PlaceSign, EngineError> {
    sign_place_with(place, g, &ValidationOptions::default())
}

pub fn sign_place_with(
    place: &PlaceData,
    g: u32,
    opts: &ValidationOptions,
) -> Result<PlaceSign, EngineError> {
    let report = validate_place_with(place, g, opts);
    if !report.passed() {
        return Err(EngineError::Invalid(report));
    }
    let q = place.pp.q();
    let g64 = g as u64;

    let (w, w_iota, case_tag) = match place.reduction {
        ReductionClass::Good => (Sign::Plus, Sign::Plus, CaseTag::GoodRed),
        ReductionClass::PotentiallyGood(d) if d.galois_abelian => {
            let w_iota = sign_pot_good_abelian(q, d.e)?;
            let w = w_iota.pow(g64);
            // whole-variety form: (-1)^{g(q-1)/e}
            let direct = Sign::from_parity(g64 * (q - 1) / d.e);
            cross_check(w, direct, &place.label, "abelian")?;
            (w, w_iota, CaseTag::PotGoodAbelian)
        }
        ReductionClass::PotentiallyGood(d) => {
            let a_iota = split_conductor(&d, g)?;
            let w_iota = sign_pot_good_induced(q, d.e, a_iota)?;
            let w = w_iota.pow(g64);
            // whole-variety form: (-1)^{a/2 + g(q+1)/e}
            let direct = Sign::from_parity(d.artin_conductor / 2 + g64 * (q + 1) / d.e);
            cross_check(w, direct, &place.label, "induced")?;
            (w, w_iota, CaseTag::PotGoodInduced)
        }
        ReductionClass::PotentiallyToric { subtype } => {
            let (w, w_iota) = sign_toric(subtype, q, g)?;
            let tag = match subtype {
                ToricSubtype::SplitMultiplicative => CaseTag::SplitMult,
                ToricSubtype::NonSplitMultiplicative => CaseTag::NonSplitMult,
                ToricSubtype::Additive => CaseTag::AdditiveMult,
            };
            (w, w_iota, tag)
        }
    };

    let even_dim_shortcut = g.is_multiple_of(2);
    if even_dim_shortcut && w != Sign::Plus {
        return Err(EngineError::Internal(format!(
            "place {}: even dimension but case formula gives w = {w}",
            place.label
        )));
    }
    Ok(PlaceSign {
        label: place.label.clone(),
        w,
        w_iota,
        case_tag,
        even_dim_shortcut,
    })
}

fn split_conductor(d: &PotentiallyGood, g: u32) -> Result<u64, EngineError> {
    let a = d.artin_conductor;
    if !a.is_multiple_of(g as u64) {
        return Err(EngineError::ConductorNotSplittable { a, g });
    }
    Ok(a / g as u64)
}

fn cross_check(w: Sign, direct: Sign, label: &str, case: &str) -> Result<(), EngineError> {
    if w == direct {
        Ok(())
    } else {
        Err(EngineError::Internal(format!(
            "place {label}: {case} case gives w = {w} per embedding but {direct} globally"
        )))
    }
}

pub fn sign_global(data: &RmVarietyData) -> Result<RootNumberReport, EngineError> {
    sign_global_with(data, &ValidationOptions::default())
}

pub fn sign_global_with(
    data: &RmVarietyData,
    opts: &ValidationOptions,
) -> Result<RootNumberReport, EngineError> {
    let validation = validate_variety_with(data, opts);
    if !validation.passed() {
        return Err(EngineError::Invalid(validation));
    }
    let g = data.dimension;
    let per_place = data
        .places
        .iter()
        .map(|place| sign_place_with(place, g, opts))
        .collect::<Result<Vec<_>, _>>()?;

    let at_infinity = Sign::Minus.pow(data.infinite_places as u64);
    let global_w_iota = per_place.iter().map(|s| s.w_iota).product::<Sign>() * at_infinity;
    let global_w = per_place.iter().map(|s| s.w).product::<Sign>() * at_infinity.pow(g as u64);

    if global_w != global_w_iota.pow(g as u64) {
        return Err(EngineError::Internal(format!(
            "global w = {global_w} but w_iota^g = {}",
            global_w_iota.pow(g as u64)
        )));
    }
    if g.is_multiple_of(2) && global_w != Sign::Plus {
        return Err(EngineError::Internal(
            "even dimension but global w = -1".into(),
        ));
    }
    Ok(RootNumberReport {
        dimension: g,
        infinite_places: data.infinite_places,
        per_place,
        global_w,
        global_w_iota,
        validation,
    })
}
