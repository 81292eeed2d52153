use std::cmp::Ordering;
use std::fmt;

use super::{FieldElement, FieldError, FieldSpec};

/// Dense univariate polynomial over a [`FieldSpec`], low degree first, with
/// no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

pub struct DisplayVar<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for DisplayVar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &FieldElement)> = self
            .poly
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in terms.into_iter().enumerate() {
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            let (neg, mag) = split_sign(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            write_term(f, &mag, &mono)?;
        }
        Ok(())
    }
}

/// Splits a coefficient into a display sign and magnitude (only rationals
/// carry a sign).
pub(crate) fn split_sign(c: &FieldElement) -> (bool, FieldElement) {
    use num_traits::Signed;
    match c.as_rational() {
        Some(x) if x.is_negative() => (true, -c),
        _ => (false, c.clone()),
    }
}

/// Writes `coeff*mono` with the conventions shared by all polynomial
/// printers: unit coefficients are omitted, extension coefficients with more
/// than one term are parenthesized.
pub(crate) fn write_term(f: &mut impl fmt::Write, coeff: &FieldElement, mono: &str) -> fmt::Result {
    let c = coeff.to_string();
    let compound = !coeff.in_base() && (c.contains(' ') || c.starts_with('-'));
    let c = if compound { format!("({c})") } else { c };
    if mono.is_empty() {
        write!(f, "{c}")
    } else if coeff.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{c}*{mono}")
    }
}

impl UniPoly {
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<FieldElement>) -> UniPoly {
        debug_assert!(coeffs.iter().all(|c| c.spec() == spec));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn from_i64s(spec: &FieldSpec, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(spec, coeffs.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn zero(spec: &FieldSpec) -> UniPoly {
        UniPoly::new(spec, Vec::new())
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        let spec = c.spec().clone();
        UniPoly::new(&spec, vec![c])
    }

    /// The monomial `x`.
    pub fn x(spec: &FieldSpec) -> UniPoly {
        UniPoly::new(spec, vec![spec.zero(), spec.one()])
    }

    /// `x - c`.
    pub fn linear_root(c: &FieldElement) -> UniPoly {
        let spec = c.spec().clone();
        UniPoly::new(&spec, vec![-c, spec.one()])
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> DisplayVar<'a> {
        DisplayVar { poly: self, var }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        UniPoly::new(&self.spec, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        UniPoly::new(&self.spec, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.spec, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(&self.spec, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.spec);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.spec, out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(self.spec.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let lead_inv = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(&self.spec), self.clone()));
        }
        let mut q = vec![self.spec.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = &r[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &(&c * di);
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((UniPoly::new(&self.spec, q), UniPoly::new(&self.spec, r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly, FieldError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient, `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic associate (zero stays zero).
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(i as i64))
            .collect();
        UniPoly::new(&self.spec, coeffs)
    }

    /// Evaluation at a point of this field or of a field containing it.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let target = x.spec();
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            let c = c.embed(target).expect("evaluation point field contains coefficients");
            acc = &(&acc * x) + &c;
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.spec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    /// `x^e mod m` by repeated squaring.
    pub fn pow_mod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::constant(self.spec.one()).rem(m).unwrap();
        let mut base = self.rem(m).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m).unwrap();
            }
            base = base.mul(&base).rem(m).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Image of the coefficients in a larger field.
    pub fn embed(&self, target: &FieldSpec) -> Result<UniPoly, FieldError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(target, coeffs))
    }

    /// Multiplicity of the factor `p` in `self`, and the cofactor.
    pub fn split_off(&self, p: &UniPoly) -> (u32, UniPoly) {
        let mut m = 0;
        let mut rest = self.clone();
        if rest.is_zero() || p.is_constant() {
            return (0, rest);
        }
        while let Some(q) = rest.exact_div(p) {
            m += 1;
            rest = q;
        }
        (m, rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = UniPoly::from_i64s(&f7, &[3, 0, 5, 1, 2]);
        let b = UniPoly::from_i64s(&f7, &[1, 4, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_shared_root() {
        let q = FieldSpec::rationals();
        let a = UniPoly::from_i64s(&q, &[-1, 0, 1]); // x^2 - 1
        let b = UniPoly::from_i64s(&q, &[-1, 1]).mul(&UniPoly::from_i64s(&q, &[5, 1]));
        assert_eq!(a.gcd(&b), UniPoly::from_i64s(&q, &[-1, 1]));
    }

    #[test]
    fn display_matches_grammar() {
        let q = FieldSpec::rationals();
        let a = UniPoly::from_i64s(&q, &[-1, 0, -3, 1]);
        assert_eq!(a.display_var("t").to_string(), "t^3 - 3*t^2 - 1");
        let f9 = FieldSpec::standard(9).unwrap();
        let c = &f9.generator_u().unwrap() + &f9.one();
        let p = UniPoly::new(&f9, vec![c.clone(), c]);
        assert_eq!(p.display_var("t").to_string(), "(u + 1)*t + (u + 1)");
    }
}
