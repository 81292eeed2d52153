//! Rational functions of one parameter `t` and the places of `k(t)`.

use std::fmt;

use super::PolyError;
use crate::field::{is_certified_irreducible, FieldElement, FieldSpec, UniPoly};

/// `num/den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

/// A value on the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(FieldElement),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&FieldElement> {
        match self {
            Value::Finite(x) => Some(x),
            Value::Infinity => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{x}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num.display_var("t"))
        } else {
            write!(f, "({})/({})", self.num.display_var("t"), self.den.display_var("t"))
        }
    }
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<RatFunc, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let spec = num.spec().clone();
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: UniPoly::constant(spec.one()),
            });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading().inv()?;
        Ok(RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: UniPoly) -> RatFunc {
        let one = UniPoly::constant(p.spec().one());
        RatFunc { num: p, den: one }
    }

    pub fn constant(c: FieldElement) -> RatFunc {
        RatFunc::from_poly(UniPoly::constant(c))
    }

    /// The parameter `t`.
    pub fn param(spec: &FieldSpec) -> RatFunc {
        RatFunc::from_poly(UniPoly::x(spec))
    }

    pub fn spec(&self) -> &FieldSpec {
        self.num.spec()
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, c: &FieldElement) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn embed(&self, target: &FieldSpec) -> Result<RatFunc, PolyError> {
        Ok(RatFunc {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    /// Value at a point of a field containing the coefficients.
    pub fn eval(&self, x: &FieldElement) -> Value {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Value::Infinity;
        }
        let n = self.num.eval(x);
        Value::Finite(n.div(&d).expect("nonzero"))
    }

    pub fn eval_at_infinity(&self) -> Value {
        let dn = self.num.degree();
        let dd = self.den.degree().expect("nonzero denominator");
        match dn {
            None => Value::Finite(self.spec().zero()),
            Some(dn) if dn > dd => Value::Infinity,
            Some(dn) if dn < dd => Value::Finite(self.spec().zero()),
            Some(_) => Value::Finite(self.num.leading().div(&self.den.leading()).expect("nonzero")),
        }
    }

    pub fn eval_value(&self, x: &Value) -> Value {
        match x {
            Value::Finite(x) => self.eval(x),
            Value::Infinity => self.eval_at_infinity(),
        }
    }
}

/// A place of `k(t)` over `k`: a monic irreducible polynomial or the place
/// at infinity with uniformizer `1/t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(UniPoly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{}", p.display_var("t")),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Place {
    /// Validates `pi` as monic and certified irreducible.
    pub fn finite(pi: UniPoly) -> Result<Place, PolyError> {
        if pi.is_constant() || !pi.leading().is_one() || !is_certified_irreducible(&pi) {
            return Err(PolyError::NotAPlace(pi.display_var("t").to_string()));
        }
        Ok(Place::Finite(pi))
    }

    /// The place `t = c`.
    pub fn at(c: &FieldElement) -> Place {
        Place::Finite(UniPoly::linear_root(c))
    }

    /// Degree of the residue field over `k`.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("nonconstant"),
            Place::Infinity => 1,
        }
    }

    pub fn residue_field(&self, k: &FieldSpec) -> Result<FieldSpec, PolyError> {
        match self {
            Place::Finite(p) if p.degree() != Some(1) => Ok(FieldSpec::extension(k, p)?),
            _ => Ok(k.clone()),
        }
    }

    pub fn uniformizer(&self, k: &FieldSpec) -> RatFunc {
        match self {
            Place::Finite(p) => RatFunc::from_poly(p.clone()),
            Place::Infinity => RatFunc::param(k).inv().expect("t is nonzero"),
        }
    }

    /// Order of vanishing of a nonzero function.
    pub fn valuation(&self, f: &RatFunc) -> i64 {
        assert!(!f.is_zero(), "valuation of zero");
        match self {
            Place::Finite(p) => f.num.split_off(p).0 as i64 - f.den.split_off(p).0 as i64,
            Place::Infinity => {
                f.den.degree().unwrap() as i64 - f.num.degree().unwrap() as i64
            }
        }
    }

    /// `f * pi^(-v(f))`, a unit at this place.
    pub fn unit_part(&self, f: &RatFunc) -> RatFunc {
        let v = self.valuation(f);
        let pi = self.uniformizer(f.spec());
        f.mul(&pi.pow(-v).expect("uniformizer is nonzero"))
    }

    /// Image of a polynomial in the residue field `field`.
    pub fn reduce_poly(&self, p: &UniPoly, field: &FieldSpec) -> Result<FieldElement, PolyError> {
        match self {
            Place::Infinity => unreachable!("polynomials are not units at infinity"),
            Place::Finite(pi) if pi.degree() == Some(1) => {
                Ok(p.eval(&(-&pi.coeff(0)).embed(field)?))
            }
            Place::Finite(pi) => {
                let r = p.rem(pi)?;
                Ok(field.from_base_coeffs(r.coeffs())?)
            }
        }
    }

    /// Residue class of a unit at this place, in `field` (the residue field).
    pub fn reduce_in(&self, f: &RatFunc, field: &FieldSpec) -> Result<FieldElement, PolyError> {
        if f.is_zero() || self.valuation(f) != 0 {
            return Err(PolyError::NotAUnit(f.to_string(), self.to_string()));
        }
        match self {
            Place::Infinity => Ok(f
                .num
                .leading()
                .div(&f.den.leading())?
                .embed(field)?),
            Place::Finite(_) => {
                let n = self.reduce_poly(&f.num, field)?;
                let d = self.reduce_poly(&f.den, field)?;
                Ok(n.div(&d)?)
            }
        }
    }

    /// Residue class of a unit, computing the residue field.
    pub fn reduce(&self, f: &RatFunc) -> Result<FieldElement, PolyError> {
        let field = self.residue_field(f.spec())?;
        self.reduce_in(f, &field)
    }

    /// The point of the projective line (over the residue field) that this
    /// place represents: `Infinity`, the root of a linear `pi`, or the class
    /// of `u` in `k[u]/(pi)`.
    pub fn point(&self, field: &FieldSpec) -> Value {
        match self {
            Place::Infinity => Value::Infinity,
            Place::Finite(pi) if pi.degree() == Some(1) => {
                Value::Finite((-&pi.coeff(0)).embed(field).expect("base field"))
            }
            Place::Finite(_) => Value::Finite(field.generator_u().expect("extension")),
        }
    }
}
