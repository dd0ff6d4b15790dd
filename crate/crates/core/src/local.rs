//! Local invariants of an abelian variety with real multiplication at a
//! finite place, and the validator for the constraints they must satisfy.
//!
//! Validation never fails with an error: it returns a [`ValidationReport`]
//! carrying every violated constraint. Formula entry points in
//! [`crate::engine`] refuse data whose report is not clean.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::nt::{as_prime_power, euler_phi};
use crate::arith::PrimePower;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToricSubtype {
    SplitMultiplicative,
    NonSplitMultiplicative,
    Additive,
}

/// Data of potentially good reduction.
///
/// The inertia image has order `e · p^r` with `p ∤ e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PotentiallyGood {
    /// Tame part of the order of the inertia image.
    pub e: u64,
    /// Wild exponent.
    pub r: u32,
    pub galois_abelian: bool,
    pub inertia_abelian: bool,
    /// Artin conductor `a(A/K)`.
    pub artin_conductor: u64,
}

impl PotentiallyGood {
    /// Tame data with abelian Galois image.
    pub fn abelian(e: u64, artin_conductor: u64) -> Self {
        PotentiallyGood {
            e,
            r: 0,
            galois_abelian: true,
            inertia_abelian: true,
            artin_conductor,
        }
    }

    /// Tame data with non-abelian Galois image and abelian inertia image.
    pub fn induced(e: u64, artin_conductor: u64) -> Self {
        PotentiallyGood {
            e,
            r: 0,
            galois_abelian: false,
            inertia_abelian: true,
            artin_conductor,
        }
    }

    pub fn with_wild(mut self, r: u32) -> Self {
        self.r = r;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionClass {
    Good,
    PotentiallyGood(PotentiallyGood),
    PotentiallyToric { subtype: ToricSubtype },
}

impl ReductionClass {
    pub fn toric(subtype: ToricSubtype) -> Self {
        ReductionClass::PotentiallyToric { subtype }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceData {
    pub label: String,
    pub pp: PrimePower,
    pub reduction: ReductionClass,
}

impl PlaceData {
    pub fn new(label: impl Into<String>, pp: PrimePower, reduction: ReductionClass) -> Self {
        PlaceData {
            label: label.into(),
            pp,
            reduction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmVarietyData {
    /// `g = dim A = [F : Q]`.
    pub dimension: u32,
    pub places: Vec<PlaceData>,
    pub infinite_places: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    ZeroDimension,
    DuplicateLabel,
    ZeroTameOrder,
    TameOrderDivisibleByP,
    #[serde(rename = "tame_totient_not_dividing_2g")]
    TameTotientNotDividing2g,
    #[serde(rename = "wild_order_not_dividing_2g")]
    WildOrderNotDividing2g,
    WildPrimeNotThreeModFour,
    ForbiddenTameShape,
    TameOrderNotDividingQMinusOne,
    TameOrderNotDividingQPlusOne,
    #[serde(rename = "conductor_not_divisible_by_2g")]
    ConductorNotDivisibleBy2g,
    InducedConductorTooSmall,
    NonAbelianInertia,
    InconsistentAbelianFlags,
    EvenCharacteristic,
    /// Warning only: admitted by override outside the proven hypotheses.
    OutsideHypotheses,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant serializes");
        f.pad(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub label: String,
    pub code: ViolationCode,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> BTreeSet<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }

    pub fn failing_labels(&self) -> BTreeSet<&str> {
        self.violations.iter().map(|v| v.label.as_str()).collect()
    }

    /// Violations grouped by place label.
    pub fn by_label(&self) -> BTreeMap<&str, Vec<&Violation>> {
        let mut out: BTreeMap<&str, Vec<&Violation>> = BTreeMap::new();
        for v in &self.violations {
            out.entry(v.label.as_str()).or_default().push(v);
        }
        out
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    fn fail(&mut self, label: &str, code: ViolationCode, detail: String) {
        self.violations.push(Violation {
            label: label.to_string(),
            code,
            detail,
        });
    }

    fn warn(&mut self, label: &str, code: ViolationCode, detail: String) {
        self.warnings.push(Violation {
            label: label.to_string(),
            code,
            detail,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            f.write_str("PASS")?;
        } else {
            write!(f, "FAIL ({} violations)", self.violations.len())?;
        }
        for v in &self.violations {
            write!(f, "\n  [{}] {}: {}", v.label, v.code, v.detail)?;
        }
        for w in &self.warnings {
            write!(f, "\n  warning [{}] {}: {}", w.label, w.code, w.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Admit split and non-split multiplicative reduction over `p = 2`.
    pub allow_p2_multiplicative: bool,
}

/// `e` is `1`, `2`, `4`, `s^m` or `2 s^m` with `s ≡ 3 mod 4` a prime other than `p`.
fn allowed_odd_dimension_shape(e: u64, p: u64) -> bool {
    if matches!(e, 1 | 2 | 4) {
        return true;
    }
    let core = if e.is_multiple_of(2) { e / 2 } else { e };
    match as_prime_power(core) {
        Some((s, _)) => s % 4 == 3 && s != p,
        None => false,
    }
}

pub fn validate_place(place: &PlaceData, g: u32) -> ValidationReport {
    validate_place_with(place, g, &ValidationOptions::default())
}

pub fn validate_place_with(
    place: &PlaceData,
    g: u32,
    opts: &ValidationOptions,
) -> ValidationReport {
    use ViolationCode::*;

    let mut report = ValidationReport::default();
    let label = place.label.as_str();
    let (p, q) = (place.pp.p(), place.pp.q());
    let two_g = 2 * g as u64;

    if g == 0 {
        report.fail(label, ZeroDimension, "dimension must be at least 1".into());
        return report;
    }

    match &place.reduction {
        ReductionClass::Good => {}
        ReductionClass::PotentiallyToric { subtype } => {
            if p == 2 {
                match subtype {
                    ToricSubtype::Additive => report.fail(
                        label,
                        EvenCharacteristic,
                        "additive potentially multiplicative reduction over p = 2 is not covered"
                            .into(),
                    ),
                    _ if opts.allow_p2_multiplicative => report.warn(
                        label,
                        OutsideHypotheses,
                        format!("{subtype:?} reduction over p = 2 admitted by override"),
                    ),
                    _ => report.fail(
                        label,
                        EvenCharacteristic,
                        "p = 2 multiplicative reduction requires --allow-p2-multiplicative".into(),
                    ),
                }
            }
        }
        ReductionClass::PotentiallyGood(d) => {
            if p == 2 {
                report.fail(
                    label,
                    EvenCharacteristic,
                    "potentially good reduction over p = 2 is not covered".into(),
                );
            }
            if !d.inertia_abelian {
                if d.galois_abelian {
                    report.fail(
                        label,
                        InconsistentAbelianFlags,
                        "abelian Galois image forces abelian inertia image".into(),
                    );
                } else {
                    report.fail(
                        label,
                        NonAbelianInertia,
                        "no sign formula for non-abelian inertia image".into(),
                    );
                }
            }
            if d.e == 0 {
                report.fail(label, ZeroTameOrder, "tame order e must be positive".into());
                return report;
            }
            let e = d.e;
            if e % p == 0 {
                report.fail(
                    label,
                    TameOrderDivisibleByP,
                    format!("p = {p} divides e = {e}"),
                );
            }
            let phi_e = euler_phi(e);
            if !two_g.is_multiple_of(phi_e) {
                report.fail(
                    label,
                    TameTotientNotDividing2g,
                    format!("phi(e) = {phi_e} does not divide 2g = {two_g}"),
                );
            }
            if d.r >= 1 && p != 2 {
                let phi_wild = p.pow(d.r - 1) * (p - 1);
                if !two_g.is_multiple_of(phi_wild) {
                    report.fail(
                        label,
                        WildOrderNotDividing2g,
                        format!(
                            "p^(r-1)(p-1) = {phi_wild} does not divide 2g = {two_g} (r = {})",
                            d.r
                        ),
                    );
                }
                if g % 2 == 1 && p % 4 != 3 {
                    report.fail(
                        label,
                        WildPrimeNotThreeModFour,
                        format!("wild inertia with g odd needs p = 3 mod 4, got p = {p}"),
                    );
                }
            }
            if g % 2 == 1 && !allowed_odd_dimension_shape(e, p) {
                report.fail(
                    label,
                    ForbiddenTameShape,
                    format!("e = {e} is not of the form s^m, 2s^m or 4 with s = 3 mod 4 prime"),
                );
            }
            if d.galois_abelian {
                if (q - 1) % e != 0 {
                    report.fail(
                        label,
                        TameOrderNotDividingQMinusOne,
                        format!("abelian case needs e | q - 1, got e = {e}, q = {q}"),
                    );
                }
            } else if d.inertia_abelian {
                if (q + 1) % e != 0 {
                    report.fail(
                        label,
                        TameOrderNotDividingQPlusOne,
                        format!("induced case needs e | q + 1, got e = {e}, q = {q}"),
                    );
                }
                let a = d.artin_conductor;
                if a % two_g != 0 {
                    report.fail(
                        label,
                        ConductorNotDivisibleBy2g,
                        format!("induced case needs 2g | a, got a = {a}, 2g = {two_g}"),
                    );
                } else if a < two_g {
                    report.fail(
                        label,
                        InducedConductorTooSmall,
                        format!("induced case is ramified, so a >= 2g; got a = {a}"),
                    );
                }
            }
        }
    }
    report
}

pub fn validate_variety(data: &RmVarietyData) -> ValidationReport {
    validate_variety_with(data, &ValidationOptions::default())
}

pub fn validate_variety_with(data: &RmVarietyData, opts: &ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    if data.dimension == 0 {
        report.fail(
            "",
            ViolationCode::ZeroDimension,
            "dimension must be at least 1".into(),
        );
        return report;
    }
    let mut seen = BTreeSet::new();
    for place in &data.places {
        if !seen.insert(place.label.as_str()) {
            report.fail(
                &place.label,
                ViolationCode::DuplicateLabel,
                format!("label {:?} occurs more than once", place.label),
            );
        }
        report.merge(validate_place_with(place, data.dimension, opts));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use ViolationCode::*;

    fn place(p: u64, f: u32, reduction: ReductionClass) -> PlaceData {
        PlaceData::new(format!("v{p}"), PrimePower::new(p, f).unwrap(), reduction)
    }

    fn pot_good(e: u64, r: u32, galois_abelian: bool, a: u64) -> ReductionClass {
        ReductionClass::PotentiallyGood(PotentiallyGood {
            e,
            r,
            galois_abelian,
            inertia_abelian: true,
            artin_conductor: a,
        })
    }

    #[test]
    fn wild_order_must_divide_2g() {
        let r = validate_place(&place(5, 1, pot_good(4, 1, true, 4)), 1);
        assert!(!r.passed());
        assert!(r.codes().contains(&WildOrderNotDividing2g));
        assert!(r.codes().contains(&WildPrimeNotThreeModFour));
    }

    #[test]
    fn tame_abelian_order_three_passes() {
        let r = validate_place(&place(7, 1, pot_good(3, 0, true, 2)), 1);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn forbidden_shape() {
        let r = validate_place(&place(5, 1, pot_good(8, 0, true, 2)), 1);
        assert!(r.codes().contains(&ForbiddenTameShape), "{r}");
        // 8 is fine in even dimension as far as shape goes (phi(8) = 4 | 4)
        let r2 = validate_place(&place(17, 1, pot_good(8, 0, true, 4)), 2);
        assert!(r2.passed(), "{r2}");
    }

    #[test]
    fn odd_dimension_shapes() {
        let allowed: Vec<u64> = (1..=60)
            .filter(|&e| allowed_odd_dimension_shape(e, 5))
            .collect();
        assert_eq!(
            allowed,
            vec![1, 2, 3, 4, 6, 7, 9, 11, 14, 18, 19, 22, 23, 27, 31, 38, 43, 46, 47, 49, 54, 59]
        );
        assert!(!allowed_odd_dimension_shape(3, 3));
    }

    #[test]
    fn routing_by_galois_flag() {
        // e = 4, q = 7: 4 | 8 but 4 ∤ 6
        let ab = validate_place(&place(7, 1, pot_good(4, 0, true, 2)), 1);
        assert_eq!(ab.codes(), [TameOrderNotDividingQMinusOne].into());
        let ind = validate_place(&place(7, 1, pot_good(4, 0, false, 2)), 1);
        assert!(ind.passed(), "{ind}");
        let odd_a = validate_place(&place(7, 1, pot_good(4, 0, false, 3)), 1);
        assert_eq!(odd_a.codes(), [ConductorNotDivisibleBy2g].into());
        let zero_a = validate_place(&place(7, 1, pot_good(4, 0, false, 0)), 1);
        assert_eq!(zero_a.codes(), [InducedConductorTooSmall].into());
    }

    #[test]
    fn non_abelian_inertia_rejected() {
        let d = PotentiallyGood {
            e: 3,
            r: 0,
            galois_abelian: false,
            inertia_abelian: false,
            artin_conductor: 2,
        };
        let r = validate_place(&place(7, 1, ReductionClass::PotentiallyGood(d)), 1);
        assert_eq!(r.codes(), [NonAbelianInertia].into());
        let bad = PotentiallyGood {
            galois_abelian: true,
            ..d
        };
        let r = validate_place(&place(7, 1, ReductionClass::PotentiallyGood(bad)), 1);
        assert!(r.codes().contains(&InconsistentAbelianFlags));
    }

    #[test]
    fn p2_policy() {
        let split = place(
            2,
            1,
            ReductionClass::toric(ToricSubtype::SplitMultiplicative),
        );
        assert_eq!(
            validate_place(&split, 1).codes(),
            [EvenCharacteristic].into()
        );
        let opts = ValidationOptions {
            allow_p2_multiplicative: true,
        };
        let r = validate_place_with(&split, 1, &opts);
        assert!(r.passed());
        assert_eq!(r.warnings[0].code, OutsideHypotheses);
        let additive = place(2, 1, ReductionClass::toric(ToricSubtype::Additive));
        assert!(!validate_place_with(&additive, 1, &opts).passed());
        assert!(validate_place(&place(2, 3, ReductionClass::Good), 1).passed());
        assert!(!validate_place_with(&place(2, 1, pot_good(3, 0, true, 2)), 1, &opts).passed());
    }

    #[test]
    fn variety_aggregation() {
        let empty = RmVarietyData {
            dimension: 2,
            places: vec![],
            infinite_places: 0,
        };
        assert!(validate_variety(&empty).passed());

        let good = place(7, 1, pot_good(3, 0, true, 2));
        let mut dup = good.clone();
        dup.reduction = ReductionClass::Good;
        let data = RmVarietyData {
            dimension: 1,
            places: vec![good.clone(), dup],
            infinite_places: 1,
        };
        assert_eq!(validate_variety(&data).codes(), [DuplicateLabel].into());

        let mut bad = place(5, 1, pot_good(4, 1, true, 4));
        bad.label = "bad".into();
        let data = RmVarietyData {
            dimension: 1,
            places: vec![good, bad],
            infinite_places: 1,
        };
        let r = validate_variety(&data);
        assert_eq!(r.failing_labels(), ["bad"].into());
    }
}
