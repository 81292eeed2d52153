use serde::{Deserialize, Serialize};

use super::{CoordModel, CycleError, HypersurfaceCycle};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{MultiPoly, Var, VarSet};

/// An effective principal divisor `{D = 0}` on `A^r`, remembering the
/// exponents when `D = t1^m1 * ... * tr^mr`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModulusDatum {
    divisor: MultiPoly,
    exponents: Option<Vec<u32>>,
}

impl ModulusDatum {
    /// `D_m = {t1^m1 * ... * tr^mr = 0}` with every `m_i >= 1`.
    pub fn monomial(spec: &FieldSpec, exponents: &[u32]) -> Result<ModulusDatum, CycleError> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(CycleError::BadModulus(format!(
                "monomial exponents must be positive, got {exponents:?}"
            )));
        }
        let vars = VarSet::new(exponents.len(), 0);
        let divisor = MultiPoly::from_terms(spec, vars, [(exponents.to_vec(), spec.one())]);
        Ok(ModulusDatum {
            divisor,
            exponents: Some(exponents.to_vec()),
        })
    }

    /// A divisor given by a polynomial in `t1..tr`.
    pub fn from_poly(divisor: &MultiPoly) -> Result<ModulusDatum, CycleError> {
        if divisor.vars().n != 0 {
            return Err(CycleError::BadModulus(format!("{divisor} involves cube coordinates")));
        }
        if divisor.is_constant() {
            return Err(CycleError::BadModulus(format!("{divisor} is zero or a unit")));
        }
        let exponents = match divisor.leading_term() {
            Some((e, c)) if divisor.num_terms() == 1 && !e.contains(&0) => {
                let d = divisor.scale(&c.inv()?);
                return Ok(ModulusDatum {
                    divisor: d,
                    exponents: Some(e.clone()),
                });
            }
            _ => None,
        };
        Ok(ModulusDatum {
            divisor: divisor.clone(),
            exponents,
        })
    }

    pub fn divisor(&self) -> &MultiPoly {
        &self.divisor
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    pub fn r(&self) -> usize {
        self.divisor.vars().r
    }

    pub fn spec(&self) -> &FieldSpec {
        self.divisor.spec()
    }

    /// `true` for `D = t1 * ... * tr`.
    pub fn is_reduced_monomial(&self) -> bool {
        self.exponents.as_ref().is_some_and(|e| e.iter().all(|&m| m == 1))
    }

    /// The divisor polynomial in a larger ring.
    pub fn divisor_in(&self, vars: VarSet) -> Result<MultiPoly, CycleError> {
        Ok(self.divisor.widen(vars)?)
    }

    /// `true` when the point `t` lies off the divisor.
    pub fn avoids(&self, t: &[FieldElement]) -> Result<bool, CycleError> {
        Ok(!self.divisor.eval(t, &[])?.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModulusVerdict {
    Certified,
    ViolatesNecessary,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusReport {
    pub verdict: ModulusVerdict,
    /// Per component: the normalized polynomial, its verdict and the reason.
    pub components: Vec<(String, ModulusVerdict, String)>,
}

fn component_verdict(
    f: &MultiPoly,
    d: &ModulusDatum,
) -> Result<(ModulusVerdict, String), CycleError> {
    let vars = f.vars();
    let f = f
        .normalize_constant_term()
        .ok_or_else(|| CycleError::ConstantTermZero(f.to_string()))?;
    let one_minus_f = MultiPoly::one(f.spec(), vars).sub(&f);
    let divisor = d.divisor_in(vars)?;
    let divides = one_minus_f.exact_div(&divisor).is_ok();
    let degrees: Vec<u32> = (1..=vars.n)
        .map(|i| f.degree_in(Var::Y(i)))
        .collect::<Result<_, _>>()?;
    let worst = degrees
        .iter()
        .enumerate()
        .max_by_key(|(_, &e)| e)
        .map(|(i, &e)| (i + 1, e));
    if divides && worst.is_none_or(|(_, e)| e <= 1) {
        return Ok((
            ModulusVerdict::Certified,
            format!("{} divides 1 - f and every y-degree is at most 1", d.divisor()),
        ));
    }
    if d.exponents().is_some() {
        if let Some((i, e)) = worst.filter(|&(_, e)| e >= 2) {
            return Ok((
                ModulusVerdict::ViolatesNecessary,
                format!("deg_y{i} = {e} exceeds 1"),
            ));
        }
        let tprod = MultiPoly::t_product(f.spec(), vars);
        if one_minus_f.exact_div(&tprod).is_err() {
            return Ok((
                ModulusVerdict::ViolatesNecessary,
                format!("{tprod} does not divide 1 - f"),
            ));
        }
    }
    Ok((
        ModulusVerdict::Unknown,
        format!("{} does not divide 1 - f and no necessary condition fails", d.divisor()),
    ))
}

/// Three-valued modulus check for codimension-1 cycles in the PSI model.
///
/// `Certified` when `D | 1 - f` and `deg_{y_i} f <= 1` for every `i`: then
/// the closure satisfies `prod s_{i,0}^{d_i} = D * g`, so the pull-back of
/// `D` is bounded by the divisor at infinity. For monomial `D_m` (all
/// `m_i >= 1`) the cycle group sits inside the one for `D_(1,...,1)`, where a
/// `y`-degree of 2 or `t1...tr` not dividing `1 - f` rules the modulus out.
pub fn check_modulus_codim1(
    z: &HypersurfaceCycle,
    d: &ModulusDatum,
) -> Result<ModulusReport, CycleError> {
    if z.model() != CoordModel::Psi {
        return Err(CycleError::WrongModel {
            expected: CoordModel::Psi,
            found: z.model(),
        });
    }
    if z.vars().r != d.r() || z.spec() != d.spec() {
        return Err(CycleError::AmbientMismatch(format!(
            "cycle on A^{} over {}, modulus on A^{} over {}",
            z.vars().r,
            z.spec(),
            d.r(),
            d.spec()
        )));
    }
    let mut components = Vec::new();
    let mut verdict = ModulusVerdict::Certified;
    for (f, _) in z.terms() {
        let (v, why) = component_verdict(f, d)?;
        verdict = match (verdict, v) {
            (ModulusVerdict::ViolatesNecessary, _) | (_, ModulusVerdict::ViolatesNecessary) => {
                ModulusVerdict::ViolatesNecessary
            }
            (ModulusVerdict::Unknown, _) | (_, ModulusVerdict::Unknown) => ModulusVerdict::Unknown,
            _ => ModulusVerdict::Certified,
        };
        components.push((f.to_string(), v, why));
    }
    Ok(ModulusReport { verdict, components })
}
