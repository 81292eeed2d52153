//! Milnor K-theory over explicit fields and rational function fields `k(t)`:
//! symbols, tame symbols and the total residue, a presentation oracle for
//! `K_2` of finite fields, the maps between 0-cycles and symbols, and the
//! Totaro and `xi` curves.

mod k2;
mod maps;
mod tame;
mod totaro;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::CycleError;
use crate::field::{norm_k1_finite, FieldElement, FieldError, FieldSpec};
use crate::poly::{PolyError, RatFunc};

pub use k2::{k2_presentation_oracle, smith_normal_form, K2Presentation};
pub use maps::{phi_map, phi_point, psi_element, psi_map, theta_map};
pub use tame::{places_of, tame_symbol, total_delta, weil_reciprocity_defect};
pub use totaro::{
    totaro_mult_curve, totaro_steinberg_curve, verify_commuting_square, verify_mult_curve,
    verify_steinberg_curve, verify_xi_curve, xi_curve, CurveCheck, SquareCheck,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilnorError {
    #[error("symbol entries must be nonzero")]
    ZeroEntry,
    #[error("symbol entries over different fields: {0}")]
    FieldMismatch(String),
    #[error("symbols of different degrees: {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("norm not implemented: {0}")]
    NormNotImplemented(String),
    #[error("the Steinberg curve needs f1 != 1")]
    SteinbergPrecondition,
    #[error("entries must be distinct: {0}")]
    IndistinctEntries(String),
    #[error("the curve is not the graph of functions on the t-line: {0}")]
    NotAGraph(String),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u128),
    #[error("q = {0} exceeds the oracle bound")]
    TooLarge(u128),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Values that can appear as entries of a Milnor symbol.
pub trait Entry: Clone + Ord + fmt::Display + fmt::Debug {
    fn entry_is_zero(&self) -> bool;
    fn entry_is_one(&self) -> bool;
    /// The constant field.
    fn entry_field(&self) -> &FieldSpec;
}

impl Entry for FieldElement {
    fn entry_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn entry_is_one(&self) -> bool {
        self.is_one()
    }
    fn entry_field(&self) -> &FieldSpec {
        self.spec()
    }
}

impl Entry for RatFunc {
    fn entry_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn entry_is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
    fn entry_field(&self) -> &FieldSpec {
        self.spec()
    }
}

/// A formal integer combination of symbols `{f_1, ..., f_n}` of a fixed
/// degree `n`. Symbols with an entry equal to 1 are dropped on insertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MilnorElement<E: Entry> {
    spec: FieldSpec,
    degree: usize,
    terms: BTreeMap<Vec<E>, i64>,
}

/// Elements of `K^M_n(k)`.
pub type KElement = MilnorElement<FieldElement>;
/// Elements of `K^M_n(k(t))`.
pub type FunctionKElement = MilnorElement<RatFunc>;

impl<E: Entry> fmt::Display for MilnorElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, &m)) in self.terms.iter().enumerate() {
            let body = s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
            let (sign, abs) = if m < 0 { ("-", -m) } else { ("+", m) };
            match (k, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if abs != 1 {
                write!(f, "{abs}*")?;
            }
            write!(f, "{{{body}}}")?;
        }
        Ok(())
    }
}

impl<E: Entry> MilnorElement<E> {
    pub fn zero(spec: &FieldSpec, degree: usize) -> MilnorElement<E> {
        MilnorElement {
            spec: spec.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The single symbol `{entries}`.
    pub fn symbol(spec: &FieldSpec, entries: Vec<E>) -> Result<MilnorElement<E>, MilnorError> {
        let mut e = MilnorElement::zero(spec, entries.len());
        e.add_symbol(entries, 1)?;
        Ok(e)
    }

    pub fn add_symbol(&mut self, entries: Vec<E>, mult: i64) -> Result<(), MilnorError> {
        if entries.len() != self.degree {
            return Err(MilnorError::DegreeMismatch(self.degree, entries.len()));
        }
        if let Some(x) = entries.iter().find(|x| x.entry_field() != &self.spec) {
            return Err(MilnorError::FieldMismatch(format!("{x} is not over {}", self.spec)));
        }
        if entries.iter().any(Entry::entry_is_zero) {
            return Err(MilnorError::ZeroEntry);
        }
        if mult == 0 || entries.iter().any(Entry::entry_is_one) {
            return Ok(());
        }
        let slot = self.terms.entry(entries.clone()).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.terms.remove(&entries);
        }
        Ok(())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<E>, i64)> {
        self.terms.iter().map(|(s, &m)| (s, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn add(&self, other: &MilnorElement<E>) -> Result<MilnorElement<E>, MilnorError> {
        if other.degree != self.degree {
            return Err(MilnorError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (s, m) in other.terms() {
            out.add_symbol(s.clone(), m)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> MilnorElement<E> {
        let mut out = MilnorElement::zero(&self.spec, self.degree);
        if k != 0 {
            out.terms = self.terms.iter().map(|(s, &m)| (s.clone(), m * k)).collect();
        }
        out
    }

    pub fn neg(&self) -> MilnorElement<E> {
        self.scale(-1)
    }

    pub fn sub(&self, other: &MilnorElement<E>) -> Result<MilnorElement<E>, MilnorError> {
        self.add(&other.neg())
    }

    /// Sorts the entries of every symbol, tracking the sign of the
    /// permutation (`{a, b} = -{b, a}`).
    pub fn sorted(&self) -> MilnorElement<E> {
        let mut out = MilnorElement::zero(&self.spec, self.degree);
        for (s, m) in self.terms() {
            let mut v = s.clone();
            let mut sign = 1;
            for i in 0..v.len() {
                for j in 0..v.len() - 1 - i {
                    if v[j] > v[j + 1] {
                        v.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            out.add_symbol(v, sign * m).expect("entries already validated");
        }
        out
    }
}

/// How [`symbol_reduce`] justifies a vanishing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReduceMode {
    /// Quote Steinberg's theorem for `K_n(F_q) = 0`, `n >= 2`.
    #[default]
    TheoremBacked,
    /// Confirm `K_2(F_q) = 0` with the presentation oracle.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Justification {
    /// Multilinearity, anticommutativity and `K_1 = k^x` only.
    Rewrites,
    /// `K_n(F_q) = 0` for `n >= 2` (Steinberg).
    Steinberg,
    /// `K_2(F_q)` computed trivial by the presentation oracle, which forces
    /// `K_n(F_q) = 0` for all `n >= 2`.
    K2Oracle { q: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub element: KElement,
    pub justification: Justification,
}

/// Rewrites an element by sound rules only: symbols with an entry 1 vanish;
/// entries are sorted with sign; in degree 1, `sum m_i {a_i}` becomes
/// `{prod a_i^m_i}`; in degree 0 the integer is kept. Over a finite field
/// every element of degree at least 2 is 0.
pub fn symbol_reduce(e: &KElement, mode: ReduceMode) -> Result<Reduced, MilnorError> {
    let spec = e.spec().clone();
    let n = e.degree();
    if n >= 2 && spec.is_finite() {
        let justification = match mode {
            ReduceMode::TheoremBacked => Justification::Steinberg,
            ReduceMode::Certificate => {
                let q = spec.order().expect("finite");
                let pres = k2_presentation_oracle(q)?;
                if !pres.is_trivial() {
                    return Err(MilnorError::NormNotImplemented(format!(
                        "oracle found K_2(F_{q}) = {pres:?}"
                    )));
                }
                Justification::K2Oracle { q }
            }
        };
        return Ok(Reduced {
            element: KElement::zero(&spec, n),
            justification,
        });
    }
    let element = match n {
        1 => {
            let mut prod = spec.one();
            for (s, m) in e.terms() {
                prod = &prod * &s[0].pow_i64(m)?;
            }
            KElement::symbol(&spec, vec![prod])?
        }
        _ => e.sorted(),
    };
    Ok(Reduced {
        element,
        justification: Justification::Rewrites,
    })
}

/// `N_{L/k}(a)` for `a` in an extension `L` of a prime field or Q; the
/// identity on the prime field.
pub fn norm_k1(a: &FieldElement) -> Result<FieldElement, MilnorError> {
    let spec = a.spec();
    if spec.is_prime_field() {
        return Ok(a.clone());
    }
    if spec.is_finite() {
        return Ok(norm_k1_finite(a)?);
    }
    if a.is_zero() {
        return Err(FieldError::ZeroElement.into());
    }
    // determinant of multiplication by a on the power basis
    let d = spec.degree();
    let u = spec.generator_u().expect("extension");
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(d);
    let mut basis = spec.one();
    for _ in 0..d {
        rows.push((&basis * a).base_coeffs());
        basis = &basis * &u;
    }
    Ok(determinant(rows))
}

#[allow(clippy::needless_range_loop)]
fn determinant(mut m: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = m.len();
    let spec = m[0][0].spec().clone();
    let mut det = spec.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return spec.zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = &det * &p;
        let pinv = p.inv().expect("nonzero pivot");
        for r in col + 1..n {
            let factor = &m[r][col] * &pinv;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &m[r][c] - &(&factor * &m[col][c]);
                m[r][c] = v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::UniPoly;

    #[test]
    fn reduce_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        let s = |a: i64, b: i64| KElement::symbol(&f7, vec![f7.from_i64(a), f7.from_i64(b)]).unwrap();
        assert!(s(4, 1).is_zero());
        let r = symbol_reduce(&s(2, 3), ReduceMode::TheoremBacked).unwrap();
        assert!(r.element.is_zero());
        assert_eq!(r.justification, Justification::Steinberg);
        let r = symbol_reduce(&s(2, 3), ReduceMode::Certificate).unwrap();
        assert_eq!(r.justification, Justification::K2Oracle { q: 7 });

        let q = FieldSpec::rationals();
        let a = KElement::symbol(&q, vec![q.from_i64(3), q.from_i64(2)]).unwrap();
        let b = KElement::symbol(&q, vec![q.from_i64(2), q.from_i64(3)]).unwrap();
        let r = symbol_reduce(&a.add(&b).unwrap(), ReduceMode::TheoremBacked).unwrap();
        assert!(r.element.is_zero());
        assert_eq!(r.justification, Justification::Rewrites);
        assert_eq!(a.sorted().to_string(), "-{2, 3}");
    }

    #[test]
    fn degree_one_combines() {
        let q = FieldSpec::rationals();
        let mut e = KElement::zero(&q, 1);
        e.add_symbol(vec![q.from_i64(2)], 3).unwrap();
        e.add_symbol(vec![q.from_i64(4)], -1).unwrap();
        let r = symbol_reduce(&e, ReduceMode::TheoremBacked).unwrap();
        assert_eq!(r.element.to_string(), "{2}");
        e.add_symbol(vec![q.from_i64(2)], -1).unwrap();
        assert!(symbol_reduce(&e, ReduceMode::TheoremBacked).unwrap().element.is_zero());
    }

    #[test]
    fn norms() {
        let f9 = FieldSpec::standard(9).unwrap();
        let u = f9.generator_u().unwrap();
        assert_eq!(norm_k1(&(&u + &f9.one())).unwrap(), FieldSpec::prime(3).unwrap().from_i64(2));
        let q = FieldSpec::rationals();
        let mu = UniPoly::from_i64s(&q, &[-2, 0, 1]);
        let k = FieldSpec::extension(&q, &mu).unwrap();
        let v = k.generator_u().unwrap();
        // N(1 + sqrt2) = 1 - 2 = -1
        assert_eq!(norm_k1(&(&v + &k.one())).unwrap(), q.from_i64(-1));
        let mu3 = UniPoly::from_i64s(&q, &[-2, 0, 0, 1]);
        let k3 = FieldSpec::extension(&q, &mu3).unwrap();
        assert_eq!(norm_k1(&k3.generator_u().unwrap()).unwrap(), q.from_i64(2));
    }
}
