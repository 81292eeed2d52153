//! Witness-producing constructions with re-checkable certificates: the
//! residue invariant `rho` and its reciprocity, the generators `Z_a`,
//! bounding surfaces for level-0 divisors, and the hyperbola curves that
//! kill rational 0-cycles.
//!
//! A certificate stores its claim, the witnesses, and a transcript of named
//! checks. [`verify_certificate`] recomputes the transcript from the claim
//! and the stored witnesses alone and compares it entry by entry.

mod bounding;
mod rho;
mod zero;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::{CoordModel, CycleError};
use crate::field::FieldError;
use crate::milnor::MilnorError;
use crate::poly::PolyError;
use crate::wire::{CurveJson, CycleJson, ElementJson, EmbeddingJson, ModulusJson, PointJson, WireError, ZeroCycleJson};

pub use bounding::bounding_surface;
pub use rho::{generator_cycle, generator_polynomial, rho, verify_rho_reciprocity};
pub use zero::{obstruction, zero_cycle_vanishing_witness, Variant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("wrong level: {0}")]
    WrongLevel(String),
    #[error("component {0} does not have constant term 1 after scaling")]
    NotNormalized(String),
    #[error("component {0} has y1-degree above 1")]
    DegreeTooHigh(String),
    #[error("component {0} is not of the form 1 - t1...tr g")]
    NotPresentable(String),
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("the point {0} lies on the modulus")]
    PointOnModulus(String),
    #[error("wrong ambient space: {0}")]
    WrongAmbient(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Wire(#[from] WireError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `rho(boundary W) = 0` for an admissible level-2 cycle `W`.
    RhoReciprocity { statement: String, cycle: CycleJson },
    /// `Z = boundary W` for an admissible level-0 cycle `Z`.
    BoundingSurface { statement: String, cycle: CycleJson },
    /// `Z_a` is an admissible cycle with `boundary Z_a = 0` and `rho(Z_a) = a`.
    Generator {
        statement: String,
        field: String,
        a: String,
        r: usize,
    },
    /// The class of a closed point off the modulus vanishes (level 0), or
    /// reduces to a symbol on the residue field (higher levels).
    ZeroCycleVanishing {
        statement: String,
        field: String,
        modulus: ModulusJson,
        point: PointJson,
        variant: Variant,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Cycle { role: String, cycle: CycleJson },
    Curve { role: String, curve: CurveJson },
    ZeroCycle { role: String, cycle: ZeroCycleJson },
    Embedding { role: String, embedding: EmbeddingJson },
    Symbol { role: String, element: ElementJson },
}

/// The boundary convention the transcript was computed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionJson {
    pub model: CoordModel,
    pub level0_degeneracy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub claim: Claim,
    pub witnesses: Vec<Witness>,
    pub transcript: Vec<TranscriptEntry>,
    pub convention: ConventionJson,
}

impl WitnessCertificate {
    fn build(claim: Claim, witnesses: Vec<Witness>) -> Result<WitnessCertificate, WitnessError> {
        let (transcript, convention) = run_checks(&claim, &witnesses)?;
        Ok(WitnessCertificate {
            claim,
            witnesses,
            transcript,
            convention,
        })
    }

    /// Every transcript entry passed.
    pub fn is_valid(&self) -> bool {
        !self.transcript.is_empty() && self.transcript.iter().all(|e| e.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<WitnessCertificate, WitnessError> {
        serde_json::from_str(text).map_err(|e| WitnessError::MalformedCertificate(e.to_string()))
    }
}

/// Outcome of one check: pass or fail, an optional recorded value, and a
/// human-readable detail.
pub(crate) struct Outcome {
    pub ok: bool,
    pub value: Option<String>,
    pub detail: String,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Outcome {
        Outcome {
            ok: true,
            value: None,
            detail: detail.into(),
        }
    }

    pub fn test(ok: bool, detail: impl Into<String>) -> Outcome {
        Outcome {
            ok,
            value: None,
            detail: detail.into(),
        }
    }

    pub fn with_value(mut self, v: impl ToString) -> Outcome {
        self.value = Some(v.to_string());
        self
    }
}

#[derive(Default)]
pub(crate) struct Transcript(pub Vec<TranscriptEntry>);

impl Transcript {
    /// Records a check; a computation error becomes a failed entry.
    pub fn record<E: std::fmt::Display>(&mut self, check: impl Into<String>, outcome: Result<Outcome, E>) -> bool {
        let entry = match outcome {
            Ok(o) => TranscriptEntry {
                check: check.into(),
                status: if o.ok { Status::Pass } else { Status::Fail },
                value: o.value,
                detail: o.detail,
            },
            Err(e) => TranscriptEntry {
                check: check.into(),
                status: Status::Fail,
                value: None,
                detail: e.to_string(),
            },
        };
        let ok = entry.status == Status::Pass;
        self.0.push(entry);
        ok
    }
}

fn malformed(e: impl std::fmt::Display) -> WitnessError {
    WitnessError::MalformedCertificate(e.to_string())
}

/// The witness with the given role.
pub(crate) fn find<'a>(witnesses: &'a [Witness], role: &str) -> Result<&'a Witness, WitnessError> {
    witnesses
        .iter()
        .find(|w| match w {
            Witness::Cycle { role: r, .. }
            | Witness::Curve { role: r, .. }
            | Witness::ZeroCycle { role: r, .. }
            | Witness::Embedding { role: r, .. }
            | Witness::Symbol { role: r, .. } => r == role,
        })
        .ok_or_else(|| malformed(format!("missing witness {role:?}")))
}

fn run_checks(claim: &Claim, witnesses: &[Witness]) -> Result<(Vec<TranscriptEntry>, ConventionJson), WitnessError> {
    match claim {
        Claim::RhoReciprocity { cycle, .. } => rho::reciprocity_checks(cycle),
        Claim::Generator { field, a, r, .. } => rho::generator_checks(field, a, *r, witnesses),
        Claim::BoundingSurface { cycle, .. } => bounding::checks(cycle, witnesses),
        Claim::ZeroCycleVanishing {
            field,
            modulus,
            point,
            variant,
            ..
        } => zero::checks(field, modulus, point, variant, witnesses),
    }
}

/// Recomputes the transcript from the claim and stored witnesses. `true`
/// iff every check passes and the recomputed transcript and convention
/// equal the stored ones.
pub fn verify_certificate(c: &WitnessCertificate) -> Result<bool, WitnessError> {
    let (transcript, convention) = run_checks(&c.claim, &c.witnesses).map_err(|e| match e {
        WitnessError::MalformedCertificate(_) => e,
        other => malformed(other),
    })?;
    Ok(c.is_valid() && transcript == c.transcript && convention == c.convention)
}
