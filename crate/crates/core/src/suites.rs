//! Verification sweeps comparing the closed-form engine against the
//! Gauss-sum oracle, and parameter-grid tabulation of local signs.
//!
//! Every sweep walks its grid in a fixed order, so reports and tables are
//! identical from run to run.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::nt::{divisors, is_prime};
use crate::arith::{gauss_sum, MultiplicativeCharacter, PrimePower, ResidueField};
use crate::engine::{
    sign_global, sign_place, sign_pot_good_abelian, sign_pot_good_induced, sign_toric, CaseTag,
};
use crate::local::{
    validate_place, PlaceData, PotentiallyGood, ReductionClass, RmVarietyData, ToricSubtype,
};
use crate::oracle::{
    froehlich_queyrut_check, minus_one_is_square, oracle_induced, oracle_sp2, AbelianPairOracle,
    EtaClass, TameCharacterDatum,
};
use crate::sign::Sign;

/// Largest residue field order swept by the abelian suite.
pub const ABELIAN_Q_LIMIT: u64 = 10_000;
/// Largest base field order for the induced and Fröhlich–Queyrut suites.
pub const INDUCED_Q_LIMIT: u64 = 200;
pub const SP2_Q_LIMIT: u64 = 10_000;
pub const GAUSS_Q_LIMIT: u64 = 256;
pub const SWEEP_Q_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("bound {name} = {value} exceeds the limit {limit}")]
    BoundViolation {
        name: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Abelian,
    Induced,
    Fq,
    Sp2,
    Gauss,
    Even,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Abelian => "abelian",
            Suite::Induced => "induced",
            Suite::Fq => "fq",
            Suite::Sp2 => "sp2",
            Suite::Gauss => "gauss",
            Suite::Even => "even",
        };
        f.pad(name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checked: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, instance: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches.push(instance());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checked, {} mismatches",
            self.suite,
            self.checked,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            write!(f, "\n  MISMATCH {m}")?;
        }
        Ok(())
    }
}

fn check_bound(name: &'static str, value: u64, limit: u64) -> Result<(), SuiteError> {
    if value > limit {
        Err(SuiteError::BoundViolation { name, value, limit })
    } else {
        Ok(())
    }
}

fn field_of(q: u64) -> ResidueField {
    let pp = PrimePower::from_order(q).expect("grid holds prime powers");
    ResidueField::new(pp).expect("grid respects the table limit")
}

/// Prime powers `q <= qmax`, optionally odd only, in increasing order.
pub fn prime_powers_up_to(qmax: u64, odd_only: bool) -> Vec<u64> {
    (2..=qmax)
        .filter(|&q| PrimePower::from_order(q).is_ok())
        .filter(|&q| !odd_only || q % 2 == 1)
        .collect()
}

/// Dual-pair oracle against `(-1)^{(q-1)/e}` for every odd prime `p <= pmax`,
/// `f ∈ {1, 2}`, every `e | q - 1` with `e > 1` and every character of exact
/// order `e`.
pub fn verify_abelian(pmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("pmax^2", pmax.saturating_mul(pmax), ABELIAN_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Abelian);
    for p in (3..=pmax).filter(|&p| is_prime(p)) {
        for f in 1..=2u32 {
            let q = p.pow(f);
            let field = field_of(q);
            let oracle = AbelianPairOracle::new(&field);
            for e in divisors(q - 1).into_iter().filter(|&e| e > 1) {
                let formula = sign_pot_good_abelian(q, e).expect("e | q - 1");
                for chi in MultiplicativeCharacter::of_exact_order(&field, e) {
                    let got = oracle.sign(&TameCharacterDatum::new(chi));
                    report.check(got == Ok(formula), || {
                        format!(
                            "abelian q={q} e={e} index={} oracle={got:?} formula={formula}",
                            chi.index()
                        )
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Characters of `F_{q²}^×` of exact order `e | q + 1`; all are trivial on `F_q^×`.
fn induced_family(field: &ResidueField, q: u64) -> Vec<(u64, MultiplicativeCharacter<'_>)> {
    divisors(q + 1)
        .into_iter()
        .filter(|&e| e > 1)
        .flat_map(|e| {
            MultiplicativeCharacter::of_exact_order(field, e)
                .into_iter()
                .map(move |chi| (e, chi))
        })
        .collect()
}

/// Induced oracle against `(-1)^{1 + (q+1)/e}` for odd primes `q <= qmax`.
/// Each instance also checks both sides of the Fröhlich–Queyrut identity.
pub fn verify_induced(qmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, INDUCED_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Induced);
    for q in (3..=qmax).filter(|&q| is_prime(q)) {
        let field = field_of(q * q);
        for (e, chi) in induced_family(&field, q) {
            let formula = sign_pot_good_induced(q, e, 2).expect("e | q + 1");
            let datum = TameCharacterDatum::new(chi);
            let got = oracle_induced(&datum);
            report.check(got == Ok(formula), || {
                format!(
                    "induced q={q} e={e} index={} oracle={got:?} formula={formula}",
                    chi.index()
                )
            });
            let fq = froehlich_queyrut_check(&datum);
            report.check(matches!(fq, Ok((l, r)) if l == r), || {
                format!("fq q={q} e={e} index={} result={fq:?}", chi.index())
            });
        }
    }
    Ok(report)
}

/// Fröhlich–Queyrut identity alone, over the same family as [`verify_induced`].
pub fn verify_fq(qmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, INDUCED_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Fq);
    for q in (3..=qmax).filter(|&q| is_prime(q)) {
        let field = field_of(q * q);
        for (e, chi) in induced_family(&field, q) {
            let fq = froehlich_queyrut_check(&TameCharacterDatum::new(chi));
            report.check(matches!(fq, Ok((l, r)) if l == r), || {
                format!("fq q={q} e={e} index={} result={fq:?}", chi.index())
            });
        }
    }
    Ok(report)
}

pub fn toric_subtype_for(eta: EtaClass) -> ToricSubtype {
    match eta {
        EtaClass::Trivial => ToricSubtype::SplitMultiplicative,
        EtaClass::UnramifiedQuadratic => ToricSubtype::NonSplitMultiplicative,
        EtaClass::RamifiedQuadraticTame => ToricSubtype::Additive,
    }
}

/// sp(2) oracle against the toric table for every odd prime power `q <= qmax`.
pub fn verify_sp2(qmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, SP2_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Sp2);
    for q in prime_powers_up_to(qmax, true) {
        let field = field_of(q);
        for eta in EtaClass::ALL {
            let (_, formula) = sign_toric(toric_subtype_for(eta), q, 1).expect("odd q");
            let got = oracle_sp2(eta, &field);
            report.check(got == Ok(formula), || {
                format!("sp2 q={q} eta={eta:?} oracle={got:?} formula={formula}")
            });
        }
    }
    Ok(report)
}

/// `-1` is a square in `F_q` exactly when `(q-1)/2` is even.
pub fn verify_squareness(qmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, SP2_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Sp2);
    report.suite = "sp2_squareness".into();
    for q in prime_powers_up_to(qmax, true) {
        let brute = minus_one_is_square(&field_of(q));
        report.check(brute == ((q - 1) / 2 % 2 == 0), || {
            format!("squareness q={q} brute={brute}")
        });
    }
    Ok(report)
}

/// `|τ(χ)|² = q` and `τ(χ)τ(χ̄) = χ(-1)q` for every nontrivial `χ` over
/// every prime power `q <= qmax`.
pub fn verify_gauss(qmax: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, GAUSS_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Gauss);
    for q in prime_powers_up_to(qmax, false) {
        let field = field_of(q);
        let minus_one = -field.one();
        for chi in MultiplicativeCharacter::all(&field).filter(|c| !c.is_trivial()) {
            let tau = gauss_sum(&chi);
            let norm = &tau * &tau.conj();
            report.check(norm.as_integer() == Some(q as i64), || {
                format!("gauss |tau|^2 q={q} index={} got {norm}", chi.index())
            });
            let pair = &tau * &gauss_sum(&chi.conj());
            let expected = chi.eval(minus_one).expect("-1 != 0").scale(q as i64);
            report.check(pair == expected, || {
                format!(
                    "gauss pair q={q} index={} got {pair} expected {expected}",
                    chi.index()
                )
            });
        }
    }
    Ok(report)
}

/// Every admissible place over an odd prime power `q` for dimension `g`:
/// good, the three toric subtypes, and potentially good data with
/// `r ∈ {0, 1, 2}` and per-embedding conductor `2` or `4` in the induced case.
pub fn admissible_places(q: u64, g: u32) -> Vec<PlaceData> {
    let pp = PrimePower::from_order(q).expect("prime power");
    let mut out = vec![
        ReductionClass::Good,
        ReductionClass::toric(ToricSubtype::SplitMultiplicative),
        ReductionClass::toric(ToricSubtype::NonSplitMultiplicative),
        ReductionClass::toric(ToricSubtype::Additive),
    ];
    let g64 = g as u64;
    for r in 0..=2u32 {
        for e in divisors(q - 1) {
            out.push(ReductionClass::PotentiallyGood(
                PotentiallyGood::abelian(e, 2 * g64).with_wild(r),
            ));
        }
        for e in divisors(q + 1) {
            for a_iota in [2u64, 4] {
                out.push(ReductionClass::PotentiallyGood(
                    PotentiallyGood::induced(e, a_iota * g64).with_wild(r),
                ));
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, red)| PlaceData::new(format!("q{q}#{i}"), pp, red))
        .filter(|place| validate_place(place, g).passed())
        .collect()
}

/// A random job of dimension `g` drawn from `pool`, with distinct labels.
pub fn random_job<R: Rng>(rng: &mut R, g: u32, pool: &[PlaceData]) -> RmVarietyData {
    let n = rng.gen_range(0..=8usize).min(pool.len());
    let places = pool
        .choose_multiple(rng, n)
        .enumerate()
        .map(|(i, p)| {
            let mut p = p.clone();
            p.label = format!("{}@{i}", p.label);
            p
        })
        .collect();
    RmVarietyData {
        dimension: g,
        places,
        infinite_places: rng.gen_range(0..=4),
    }
}

/// Even-dimension vanishing: every admissible place for `g ∈ {2, 4}` over
/// odd `q <= qmax` has `w = +1`, and so does every one of `jobs` random
/// global jobs drawn with `seed`.
pub fn verify_even_dimension(qmax: u64, jobs: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    check_bound("qmax", qmax, SP2_Q_LIMIT)?;
    let mut report = SuiteReport::new(Suite::Even);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in [2u32, 4] {
        let mut pool = Vec::new();
        for q in prime_powers_up_to(qmax, true) {
            for place in admissible_places(q, g) {
                let got = sign_place(&place, g);
                report.check(matches!(&got, Ok(s) if s.w == Sign::Plus), || {
                    format!("even g={g} place={place:?} result={got:?}")
                });
                pool.push(place);
            }
        }
        for _ in 0..jobs {
            let job = random_job(&mut rng, g, &pool);
            let got = sign_global(&job);
            report.check(matches!(&got, Ok(r) if r.global_w == Sign::Plus), || {
                format!("even g={g} job={job:?} result={got:?}")
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum SweepCase {
    Good,
    Abelian,
    Induced,
    Split,
    NonSplit,
    Additive,
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub case: SweepCase,
    pub g: u32,
    pub qs: Vec<u64>,
    /// Restrict `e` to these values; `None` means every admissible `e`.
    pub e_filter: Option<Vec<u64>>,
    pub r_values: Vec<u32>,
    /// Per-embedding Artin conductor used in the induced case.
    pub a_iota: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SweepRow {
    pub q: u64,
    pub e: Option<u64>,
    pub r: Option<u32>,
    pub case: CaseTag,
    pub w_iota: Sign,
    pub w: Sign,
}

/// Tabulates `sign_place` over the grid; inadmissible cells are skipped.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>, SuiteError> {
    if grid.g == 0 {
        return Err(SuiteError::InvalidGrid("g must be at least 1".into()));
    }
    for &q in &grid.qs {
        check_bound("q", q, SWEEP_Q_LIMIT)?;
        if PrimePower::from_order(q).is_err() {
            return Err(SuiteError::InvalidGrid(format!("{q} is not a prime power")));
        }
    }
    let g64 = grid.g as u64;
    let mut rows = Vec::new();
    for &q in &grid.qs {
        let pp = PrimePower::from_order(q).expect("checked above");
        let mut cells: Vec<(Option<u64>, Option<u32>, ReductionClass)> = Vec::new();
        let toric = |s| vec![(None, None, ReductionClass::toric(s))];
        match grid.case {
            SweepCase::Good => cells.push((None, None, ReductionClass::Good)),
            SweepCase::Split => cells = toric(ToricSubtype::SplitMultiplicative),
            SweepCase::NonSplit => cells = toric(ToricSubtype::NonSplitMultiplicative),
            SweepCase::Additive => cells = toric(ToricSubtype::Additive),
            SweepCase::Abelian | SweepCase::Induced => {
                let abelian = grid.case == SweepCase::Abelian;
                let base = if abelian { q - 1 } else { q + 1 };
                for &r in &grid.r_values {
                    for e in divisors(base) {
                        if e == 1 && r == 0 {
                            continue;
                        }
                        if let Some(filter) = &grid.e_filter {
                            if !filter.contains(&e) {
                                continue;
                            }
                        }
                        let d = if abelian {
                            PotentiallyGood::abelian(e, 2 * g64)
                        } else {
                            PotentiallyGood::induced(e, grid.a_iota * g64)
                        };
                        cells.push((
                            Some(e),
                            Some(r),
                            ReductionClass::PotentiallyGood(d.with_wild(r)),
                        ));
                    }
                }
            }
        }
        for (e, r, reduction) in cells {
            let place = PlaceData::new(format!("q{q}"), pp, reduction);
            if !validate_place(&place, grid.g).passed() {
                continue;
            }
            let s = sign_place(&place, grid.g)
                .map_err(|err| SuiteError::InvalidGrid(err.to_string()))?;
            rows.push(SweepRow {
                q,
                e,
                r,
                case: s.case_tag,
                w_iota: s.w_iota,
                w: s.w,
            });
        }
    }
    rows.sort();
    Ok(rows)
}

/// CSV rendering with header `q,e,r,case,w_iota,w` and LF line endings.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("q,e,r,case,w_iota,w\n");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.q,
            opt(row.e.map(|e| e.to_string())),
            opt(row.r.map(|r| r.to_string())),
            row.case,
            row.w_iota.to_i64(),
            row.w.to_i64()
        ));
    }
    out
}
