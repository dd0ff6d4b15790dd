//! JSON job files describing a variety place by place.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "infinite_places": 1,
//!   "places": [
//!     {"label": "v7", "p": 7, "f": 1,
//!      "reduction": {"kind": "potentially_good", "e": 6, "r": 0,
//!                    "galois_abelian": true, "inertia_abelian": true,
//!                    "artin_conductor": 2}}
//!   ]
//! }
//! ```
//!
//! `reduction.kind` is one of `good`, `potentially_good`, `potentially_toric`;
//! any other kind, and any unknown field, is a parse error.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::PrimePower;
use crate::local::{PlaceData, PotentiallyGood, ReductionClass, RmVarietyData, ToricSubtype};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub dimension: u32,
    #[serde(default)]
    pub infinite_places: u32,
    #[serde(default)]
    pub places: Vec<JobPlace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobPlace {
    pub label: String,
    pub p: u64,
    #[serde(default = "one")]
    pub f: u32,
    pub reduction: JobReduction,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JobReduction {
    Good,
    PotentiallyGood {
        e: u64,
        #[serde(default)]
        r: u32,
        galois_abelian: bool,
        inertia_abelian: bool,
        artin_conductor: u64,
    },
    PotentiallyToric {
        subtype: ToricSubtype,
    },
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl JobError {
    pub fn path(&self) -> &str {
        match self {
            JobError::Parse { path, .. } => path,
        }
    }
}

impl From<JobReduction> for ReductionClass {
    fn from(r: JobReduction) -> Self {
        match r {
            JobReduction::Good => ReductionClass::Good,
            JobReduction::PotentiallyGood {
                e,
                r,
                galois_abelian,
                inertia_abelian,
                artin_conductor,
            } => ReductionClass::PotentiallyGood(PotentiallyGood {
                e,
                r,
                galois_abelian,
                inertia_abelian,
                artin_conductor,
            }),
            JobReduction::PotentiallyToric { subtype } => {
                ReductionClass::PotentiallyToric { subtype }
            }
        }
    }
}

impl From<ReductionClass> for JobReduction {
    fn from(r: ReductionClass) -> Self {
        match r {
            ReductionClass::Good => JobReduction::Good,
            ReductionClass::PotentiallyGood(d) => JobReduction::PotentiallyGood {
                e: d.e,
                r: d.r,
                galois_abelian: d.galois_abelian,
                inertia_abelian: d.inertia_abelian,
                artin_conductor: d.artin_conductor,
            },
            ReductionClass::PotentiallyToric { subtype } => {
                JobReduction::PotentiallyToric { subtype }
            }
        }
    }
}

impl JobFile {
    /// Parses JSON text; errors carry the JSON path of the offending value.
    pub fn parse(text: &str) -> Result<Self, JobError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            JobError::Parse {
                path,
                message: err.into_inner().to_string(),
            }
        })
    }

    /// Resolves residue fields. Rejects non-prime `p` and `f = 0`.
    pub fn to_variety(&self) -> Result<RmVarietyData, JobError> {
        let places = self
            .places
            .iter()
            .enumerate()
            .map(|(i, place)| {
                let pp = PrimePower::new(place.p, place.f).map_err(|err| {
                    let field = if place.f == 0 { "f" } else { "p" };
                    JobError::Parse {
                        path: format!("places[{i}].{field}"),
                        message: err.to_string(),
                    }
                })?;
                Ok(PlaceData::new(
                    place.label.clone(),
                    pp,
                    place.reduction.into(),
                ))
            })
            .collect::<Result<_, JobError>>()?;
        Ok(RmVarietyData {
            dimension: self.dimension,
            places,
            infinite_places: self.infinite_places,
        })
    }

    pub fn from_variety(data: &RmVarietyData) -> Self {
        JobFile {
            dimension: data.dimension,
            infinite_places: data.infinite_places,
            places: data
                .places
                .iter()
                .map(|p| JobPlace {
                    label: p.label.clone(),
                    p: p.pp.p(),
                    f: p.pp.f(),
                    reduction: p.reduction.into(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job files always serialize")
    }
}

/// Parses and resolves a job in one step.
pub fn parse_job(text: &str) -> Result<RmVarietyData, JobError> {
    JobFile::parse(text)?.to_variety()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EXAMPLE: &str = r#"{
        "dimension": 1, "infinite_places": 1,
        "places": [{"label": "v7", "p": 7, "f": 1,
          "reduction": {"kind": "potentially_good", "e": 6, "r": 0,
            "galois_abelian": true, "inertia_abelian": true, "artin_conductor": 2}}]
    }"#;

    #[test]
    fn parses_example() {
        let data = parse_job(EXAMPLE).unwrap();
        assert_eq!(data.dimension, 1);
        assert_eq!(data.places[0].pp.q(), 7);
        assert_eq!(
            data.places[0].reduction,
            ReductionClass::PotentiallyGood(PotentiallyGood::abelian(6, 2))
        );
    }

    #[test]
    fn unknown_kind_reports_path() {
        let text = r#"{"dimension": 1, "places": [
            {"label": "a", "p": 5, "reduction": {"kind": "semistable"}}]}"#;
        let err = JobFile::parse(text).unwrap_err();
        assert_eq!(err.path(), "places[0].reduction.kind");
        assert!(err.to_string().contains("semistable"));
    }

    #[test]
    fn unknown_field_and_bad_prime() {
        let err = JobFile::parse(r#"{"dimension": 1, "extra": 3}"#).unwrap_err();
        assert!(err.to_string().contains("extra"));
        let err = JobFile::parse(r#"{"dimension": -1}"#).unwrap_err();
        assert_eq!(err.path(), "dimension");
        let text = r#"{"dimension": 1, "places": [
            {"label": "a", "p": 9, "reduction": {"kind": "good"}}]}"#;
        assert_eq!(parse_job(text).unwrap_err().path(), "places[0].p");
        let text = r#"{"dimension": 1, "places": [
            {"label": "a", "p": 3, "f": 0, "reduction": {"kind": "good"}}]}"#;
        assert_eq!(parse_job(text).unwrap_err().path(), "places[0].f");
    }

    fn arb_reduction() -> impl Strategy<Value = JobReduction> {
        let subtype = prop::sample::select(vec![
            ToricSubtype::SplitMultiplicative,
            ToricSubtype::NonSplitMultiplicative,
            ToricSubtype::Additive,
        ]);
        prop_oneof![
            Just(JobReduction::Good),
            (1u64..50, 0u32..3, any::<bool>(), any::<bool>(), 0u64..40).prop_map(
                |(e, r, galois_abelian, inertia_abelian, artin_conductor)| {
                    JobReduction::PotentiallyGood {
                        e,
                        r,
                        galois_abelian,
                        inertia_abelian,
                        artin_conductor,
                    }
                }
            ),
            subtype.prop_map(|subtype| JobReduction::PotentiallyToric { subtype }),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip(
            dimension in 0u32..6,
            infinite_places in 0u32..6,
            places in prop::collection::vec(
                (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 1u32..3, arb_reduction()),
                0..5,
            ),
        ) {
            let job = JobFile {
                dimension,
                infinite_places,
                places: places
                    .into_iter()
                    .enumerate()
                    .map(|(i, (p, f, reduction))| JobPlace { label: format!("v{i}"), p, f, reduction })
                    .collect(),
            };
            let text = job.to_json();
            let parsed = JobFile::parse(&text).unwrap();
            prop_assert_eq!(&parsed, &job);
            prop_assert_eq!(parsed.to_json(), text);
            let data = parsed.to_variety().unwrap();
            prop_assert_eq!(JobFile::from_variety(&data), job);
        }
    }
}
