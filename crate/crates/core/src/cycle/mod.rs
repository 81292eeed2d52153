//! The cubical cycle complex with modulus on `A^r x cube^n` at desk scale:
//! hypersurface cycles, 0-cycles and parametric curves in two coordinate
//! models, their faces and boundaries, admissibility checks, and push-forward
//! along closed immersions.
//!
//! The ORIGINAL model uses `cube = P^1 - {1}` with faces at `0` and `inf`;
//! the PSI model uses `cube = A^1` with faces at `0` and `1`. The two are
//! identified by `psi(y) = 1/(1 - y)`, which sends ORIGINAL `0, inf, 1` to
//! PSI `1, 0, inf`.

mod curve;
mod hyper;
mod modulus;
mod points;
mod push;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::poly::{PolyError, Value};

pub use curve::ParamCurve;
pub use hyper::{is_degenerate, HypersurfaceCycle};
pub use modulus::{check_modulus_codim1, ModulusDatum, ModulusReport, ModulusVerdict};
pub use points::{check_modulus_zerocycle, ClosedPoint, ZeroCycle};
pub use push::Embedding;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("improper intersection with the face {0}")]
    ImproperFaceIntersection(String),
    #[error("the zero polynomial does not define a cycle")]
    ZeroComponent,
    #[error("expected a cycle in the {expected} model, got {found}")]
    WrongModel { expected: CoordModel, found: CoordModel },
    #[error("cycles live in different ambient spaces: {0}")]
    AmbientMismatch(String),
    #[error("component {0} has zero constant term")]
    ConstantTermZero(String),
    #[error("undefined at a pole: {0}")]
    UndefinedAtPole(String),
    #[error("the modulus divisor is not avoided: {0}")]
    ModulusNotAvoided(String),
    #[error("{0} does not split into certified irreducible factors")]
    UnfactorableEntry(String),
    #[error("improper boundary: {0}")]
    ImproperBoundary(String),
    #[error("curve component {0} is identically on a face or the excluded locus")]
    CurveOnFace(String),
    #[error("wrong level: {0}")]
    WrongLevel(String),
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0} is not a face value of the {1} model")]
    BadFace(FaceValue, CoordModel),
    #[error("residue field not representable: {0}")]
    UnsupportedResidueField(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CoordModel {
    Original,
    Psi,
}

impl fmt::Display for CoordModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordModel::Original => "ORIGINAL",
            CoordModel::Psi => "PSI",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceValue {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for FaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceValue::Zero => "0",
            FaceValue::One => "1",
            FaceValue::Infinity => "inf",
        })
    }
}

impl FaceValue {
    pub fn value(self, spec: &FieldSpec) -> Value {
        match self {
            FaceValue::Zero => Value::Finite(spec.zero()),
            FaceValue::One => Value::Finite(spec.one()),
            FaceValue::Infinity => Value::Infinity,
        }
    }
}

impl CoordModel {
    /// Face values `(plus, minus)`: the boundary is
    /// `sum_i (-1)^i (d_i^plus - d_i^minus)`.
    pub fn faces(self) -> (FaceValue, FaceValue) {
        match self {
            CoordModel::Original => (FaceValue::Infinity, FaceValue::Zero),
            CoordModel::Psi => (FaceValue::Zero, FaceValue::One),
        }
    }

    /// The point of `P^1` removed from the cube.
    pub fn excluded(self) -> FaceValue {
        match self {
            CoordModel::Original => FaceValue::One,
            CoordModel::Psi => FaceValue::Infinity,
        }
    }

    pub fn is_face(self, v: FaceValue) -> bool {
        let (a, b) = self.faces();
        v == a || v == b
    }

    pub fn other(self) -> CoordModel {
        match self {
            CoordModel::Original => CoordModel::Psi,
            CoordModel::Psi => CoordModel::Original,
        }
    }

    /// Classifies a coordinate value: `Some(face)` for a face value or the
    /// excluded point, `None` for an interior point.
    pub fn classify(self, v: &Value) -> Option<FaceValue> {
        let fv = match v {
            Value::Infinity => FaceValue::Infinity,
            Value::Finite(x) if x.is_zero() => FaceValue::Zero,
            Value::Finite(x) if x.is_one() => FaceValue::One,
            Value::Finite(_) => return None,
        };
        Some(fv)
    }
}

/// Sign convention of the boundary: the model's own inner sign, or its
/// negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    ModelDefault,
    Reversed,
}

impl Convention {
    pub fn sign(self) -> i64 {
        match self {
            Convention::ModelDefault => 1,
            Convention::Reversed => -1,
        }
    }
}

/// Options of the boundary operator on hypersurface cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryOptions {
    /// Treat every face of a level-1 cycle as degenerate at level 0.
    pub level0_degeneracy: bool,
    pub convention: Convention,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions {
            level0_degeneracy: true,
            convention: Convention::ModelDefault,
        }
    }
}

impl BoundaryOptions {
    /// The plain cubical boundary: no level-0 degeneracy, default signs.
    pub fn strict() -> BoundaryOptions {
        BoundaryOptions {
            level0_degeneracy: false,
            convention: Convention::ModelDefault,
        }
    }
}

/// Sign of `d_i^value` in the boundary.
pub fn face_sign(model: CoordModel, i: usize, value: FaceValue, convention: Convention) -> i64 {
    let (plus, _) = model.faces();
    let alt = if i.is_multiple_of(2) { 1 } else { -1 };
    let inner = if value == plus { 1 } else { -1 };
    alt * inner * convention.sign()
}

/// A face of `cube^n`: coordinates `y_i` set to face values, sorted by `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(pub Vec<(usize, FaceValue)>);

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, v)| format!("y{i}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Face {
    /// All proper faces of `cube^n` in the given model, by codimension, then
    /// by coordinates, then by face values.
    pub fn all(model: CoordModel, n: usize) -> Vec<Face> {
        let (a, b) = model.faces();
        let mut out = Vec::new();
        for codim in 1..=n {
            for subset in subsets(n, codim) {
                for mask in 0..(1u32 << codim) {
                    let face = subset
                        .iter()
                        .enumerate()
                        .map(|(k, &i)| (i, if mask >> (codim - 1 - k) & 1 == 0 { a } else { b }))
                        .collect();
                    out.push(Face(face));
                }
            }
        }
        out
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Result of a face-condition check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub violations: Vec<String>,
}

impl FaceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_enumeration() {
        let faces = Face::all(CoordModel::Psi, 2);
        assert_eq!(faces.len(), 8);
        assert_eq!(faces[0].to_string(), "{y1=0}");
        assert_eq!(faces[4].to_string(), "{y1=0, y2=0}");
        assert_eq!(Face::all(CoordModel::Original, 3).len(), 26);
    }

    #[test]
    fn signs_match_the_two_formulas() {
        use FaceValue::*;
        // ORIGINAL: (-1)^i (d^inf - d^0); PSI: (-1)^i (d^0 - d^1)
        let c = Convention::ModelDefault;
        assert_eq!(face_sign(CoordModel::Original, 1, Infinity, c), -1);
        assert_eq!(face_sign(CoordModel::Original, 1, Zero, c), 1);
        assert_eq!(face_sign(CoordModel::Psi, 2, Zero, c), 1);
        assert_eq!(face_sign(CoordModel::Psi, 2, One, c), -1);
        assert_eq!(face_sign(CoordModel::Psi, 2, One, Convention::Reversed), 1);
    }
}
