//! Exact scalar fields: the rationals, prime fields `F_p`, and simple
//! extensions `k[u]/(mu)` of either, together with univariate polynomials,
//! factorization and the `K_1` norm of finite extensions.

mod factor;
mod unipoly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use factor::{factor_univariate, is_certified_irreducible, rational_roots, Factorization};
pub use unipoly::UniPoly;
pub(crate) use unipoly::{split_sign, write_term};

/// Largest field order for which discrete logarithms are computed by
/// exhaustive search.
pub const DLOG_LIMIT: u128 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is neither 0 nor a prime below 2^32")]
    NonPrimeCharacteristic(u64),
    #[error("extension polynomial {0} is not irreducible over the base field")]
    ReducibleExtensionPolynomial(String),
    #[error("extension polynomial {0} has degree above 3; irreducibility over Q cannot be certified")]
    UncertifiedIrreducible(String),
    #[error("extension polynomial must be monic of degree >= 2, got {0}")]
    BadExtensionPolynomial(String),
    #[error("extensions are only supported over a prime field or Q")]
    UnsupportedTower,
    #[error("field order exceeds 2^64")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero element has no norm")]
    ZeroElement,
    #[error("norm requires a finite extension field")]
    NotFiniteExtension,
    #[error("the zero polynomial cannot be factored")]
    ZeroPolynomial,
    #[error("{0} is not a prime power")]
    NotPrimePower(u128),
    #[error("field of order {0} is too large for exhaustive discrete logarithms")]
    TooLarge(u128),
    #[error("elements of {found} used where {expected} was expected")]
    WrongField { expected: String, found: String },
    #[error("malformed field element: {0}")]
    BadLiteral(String),
}

// ---------------------------------------------------------------------------
// Base scalars
// ---------------------------------------------------------------------------

/// A coefficient of the prime field (or of Q). Extension elements are vectors
/// of these.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

/// Arithmetic in the prime field of a given characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Base(pub(crate) u64);

impl Base {
    pub(crate) fn zero(self) -> Scalar {
        if self.0 == 0 {
            Scalar::Rat(BigRational::zero())
        } else {
            Scalar::Mod(0)
        }
    }

    pub(crate) fn one(self) -> Scalar {
        self.int(1)
    }

    pub(crate) fn int(self, v: i64) -> Scalar {
        if self.0 == 0 {
            Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
        } else {
            let p = self.0 as i128;
            Scalar::Mod((v as i128).rem_euclid(p) as u64)
        }
    }

    pub(crate) fn big(self, v: &BigInt) -> Scalar {
        if self.0 == 0 {
            Scalar::Rat(BigRational::from_integer(v.clone()))
        } else {
            let p = BigInt::from(self.0);
            Scalar::Mod(v.mod_floor(&p).to_u64().expect("reduced residue fits"))
        }
    }

    pub(crate) fn rational(self, v: &BigRational) -> Option<Scalar> {
        if self.0 == 0 {
            return Some(Scalar::Rat(v.clone()));
        }
        let num = self.big(v.numer());
        let den = self.big(v.denom());
        let inv = self.inv(&den)?;
        Some(self.mul(&num, &inv))
    }

    pub(crate) fn is_zero(self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub(crate) fn is_one(self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
        }
    }

    pub(crate) fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % self.0),
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    pub(crate) fn neg(self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(x) => Scalar::Mod((self.0 - x) % self.0),
        }
    }

    pub(crate) fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub(crate) fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % self.0),
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    pub(crate) fn inv(self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Mod(x) => Scalar::Mod(pow_mod(*x, self.0 - 2, self.0)),
        })
    }

    fn fmt_scalar(self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => fmt_rational(x),
            Scalar::Mod(x) => x.to_string(),
        }
    }
}

pub(crate) fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors by trial division.
pub(crate) fn prime_divisors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^d` when it is a prime power.
pub fn prime_power(q: u128) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 || ps[0] > u32::MAX as u128 {
        return None;
    }
    let p = ps[0];
    let mut d = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        d += 1;
    }
    Some((p as u64, d))
}

// ---------------------------------------------------------------------------
// Field descriptions
// ---------------------------------------------------------------------------

struct SpecInner {
    characteristic: u64,
    /// Monic irreducible modulus, low degree first (length = degree + 1).
    modulus: Option<Vec<Scalar>>,
    /// Generator of the multiplicative group (finite fields only).
    generator: Option<Vec<Scalar>>,
    base: Option<FieldSpec>,
}

/// A validated exact field: Q, `F_p`, or `base[u]/(mu)`.
#[derive(Clone)]
pub struct FieldSpec(Arc<SpecInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.characteristic == other.0.characteristic && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.characteristic.hash(state);
        self.0.modulus.hash(state);
    }
}

impl PartialOrd for FieldSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.characteristic, &self.0.modulus).cmp(&(other.0.characteristic, &other.0.modulus))
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.0.characteristic == 0 {
            "Q".to_string()
        } else {
            format!("F_{}", self.0.characteristic)
        };
        match self.modulus_poly() {
            None => write!(f, "{base}"),
            Some(mu) => write!(f, "{base}[u]/({})", mu.display_var("u")),
        }
    }
}

impl FieldSpec {
    /// The field of rational numbers.
    pub fn rationals() -> FieldSpec {
        FieldSpec(Arc::new(SpecInner {
            characteristic: 0,
            modulus: None,
            generator: None,
            base: None,
        }))
    }

    /// The prime field `F_p`, with a multiplicative generator found by an
    /// order test over its elements in increasing order.
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        let bare = FieldSpec(Arc::new(SpecInner {
            characteristic: p,
            modulus: None,
            generator: None,
            base: None,
        }));
        let generator = bare.find_generator().map(|g| g.coeffs);
        Ok(FieldSpec(Arc::new(SpecInner {
            characteristic: p,
            modulus: None,
            generator,
            base: None,
        })))
    }

    /// Builds a field from a characteristic and an optional extension
    /// polynomial over the corresponding prime field (or Q).
    pub fn new(characteristic: u64, extension: Option<&UniPoly>) -> Result<FieldSpec, FieldError> {
        let base = if characteristic == 0 {
            FieldSpec::rationals()
        } else {
            FieldSpec::prime(characteristic)?
        };
        match extension {
            None => Ok(base),
            Some(mu) => FieldSpec::extension(&base, mu),
        }
    }

    /// The quotient `base[u]/(mu)`; `mu` must be monic irreducible of degree
    /// at least 2 over a prime field or Q.
    pub fn extension(base: &FieldSpec, mu: &UniPoly) -> Result<FieldSpec, FieldError> {
        if !base.is_prime_field() {
            return Err(FieldError::UnsupportedTower);
        }
        if mu.spec() != base {
            return Err(FieldError::WrongField {
                expected: base.to_string(),
                found: mu.spec().to_string(),
            });
        }
        let shown = mu.display_var("u").to_string();
        match mu.degree() {
            Some(d) if d >= 2 && mu.leading().is_one() => {}
            _ => return Err(FieldError::BadExtensionPolynomial(shown)),
        }
        if base.is_finite() {
            let fac = factor_univariate(mu)?;
            if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
                return Err(FieldError::ReducibleExtensionPolynomial(shown));
            }
        } else {
            if mu.degree().unwrap_or(0) > 3 {
                return Err(FieldError::UncertifiedIrreducible(shown));
            }
            if !is_certified_irreducible(mu) {
                return Err(FieldError::ReducibleExtensionPolynomial(shown));
            }
        }
        let modulus: Vec<Scalar> = mu.coeffs().iter().map(|c| c.coeffs[0].clone()).collect();
        if base.is_finite() {
            let p = base.characteristic() as u128;
            let d = (modulus.len() - 1) as u32;
            if p.checked_pow(d).is_none_or(|q| q > u64::MAX as u128) {
                return Err(FieldError::FieldTooLarge);
            }
        }
        let bare = FieldSpec(Arc::new(SpecInner {
            characteristic: base.characteristic(),
            modulus: Some(modulus.clone()),
            generator: None,
            base: Some(base.clone()),
        }));
        let generator = if base.is_finite() {
            bare.find_generator().map(|g| g.coeffs)
        } else {
            None
        };
        Ok(FieldSpec(Arc::new(SpecInner {
            characteristic: base.characteristic(),
            modulus: Some(modulus),
            generator,
            base: Some(base.clone()),
        })))
    }

    /// The field with `q` elements using the stored table of extension
    /// polynomials (F_4, F_8, F_9, F_16, F_25, F_27); other prime powers use
    /// the first monic irreducible polynomial in enumeration order.
    pub fn standard(q: u128) -> Result<FieldSpec, FieldError> {
        let (p, d) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let base = FieldSpec::prime(p)?;
        if d == 1 {
            return Ok(base);
        }
        let table: &[i64] = match q {
            4 => &[1, 1, 1],
            8 => &[1, 1, 0, 1],
            9 => &[1, 0, 1],
            16 => &[1, 1, 0, 0, 1],
            25 => &[2, 4, 1],
            27 => &[1, 2, 0, 1],
            _ => &[],
        };
        let mu = if table.is_empty() {
            first_irreducible(&base, d as usize)?
        } else {
            UniPoly::from_i64s(&base, table)
        };
        FieldSpec::extension(&base, &mu)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    /// Degree over the prime field (1 for prime fields and Q).
    pub fn degree(&self) -> usize {
        self.0.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }

    pub fn is_finite(&self) -> bool {
        self.0.characteristic != 0
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.modulus.is_none()
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        (self.0.characteristic as u128).checked_pow(self.degree() as u32)
    }

    /// The prime field (or Q) underneath this field.
    pub fn base(&self) -> FieldSpec {
        self.0.base.clone().unwrap_or_else(|| self.clone())
    }

    /// `true` when elements of `other` embed canonically into `self`.
    pub fn contains(&self, other: &FieldSpec) -> bool {
        self == other || (other.is_prime_field() && self.base() == *other)
    }

    /// The extension polynomial as a polynomial over the base field.
    pub fn modulus_poly(&self) -> Option<UniPoly> {
        let m = self.0.modulus.as_ref()?;
        let base = self.base();
        Some(UniPoly::new(
            &base,
            m.iter().map(|c| FieldElement::from_scalars(&base, vec![c.clone()])).collect(),
        ))
    }

    pub(crate) fn base_ops(&self) -> Base {
        Base(self.0.characteristic)
    }

    pub fn zero(&self) -> FieldElement {
        let b = self.base_ops();
        FieldElement::from_scalars(self, vec![b.zero(); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        let b = self.base_ops();
        let mut coeffs = vec![b.zero(); self.degree()];
        coeffs[0] = b.int(v);
        FieldElement::from_scalars(self, coeffs)
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, v: &BigRational) -> Result<FieldElement, FieldError> {
        let b = self.base_ops();
        let mut coeffs = vec![b.zero(); self.degree()];
        coeffs[0] = b.rational(v).ok_or(FieldError::DivisionByZero)?;
        Ok(FieldElement::from_scalars(self, coeffs))
    }

    /// The class of `u` in an extension field.
    pub fn generator_u(&self) -> Option<FieldElement> {
        if self.is_prime_field() {
            return None;
        }
        let b = self.base_ops();
        let mut coeffs = vec![b.zero(); self.degree()];
        coeffs[1] = b.one();
        Some(FieldElement::from_scalars(self, coeffs))
    }

    /// Builds an element from coordinates in the power basis `1, u, u^2, ...`.
    pub fn from_base_coeffs(&self, coeffs: &[FieldElement]) -> Result<FieldElement, FieldError> {
        let base = self.base();
        if coeffs.len() > self.degree() || coeffs.iter().any(|c| c.spec != base) {
            return Err(FieldError::BadLiteral(format!(
                "{} base coefficients for {}",
                coeffs.len(),
                self
            )));
        }
        let b = self.base_ops();
        let mut out = vec![b.zero(); self.degree()];
        for (slot, c) in out.iter_mut().zip(coeffs) {
            *slot = c.coeffs[0].clone();
        }
        Ok(FieldElement::from_scalars(self, out))
    }

    /// Stored generator of the multiplicative group (finite fields only).
    pub fn generator(&self) -> Option<FieldElement> {
        self.0
            .generator
            .as_ref()
            .map(|g| FieldElement::from_scalars(self, g.clone()))
    }

    /// The `k`-th element in canonical enumeration order: base-`p` digits of
    /// `k` read as power-basis coordinates, low degree first.
    pub fn element_at(&self, mut k: u128) -> FieldElement {
        let p = self.characteristic() as u128;
        assert!(p > 0, "enumeration needs a finite field");
        let coeffs = (0..self.degree())
            .map(|_| {
                let digit = (k % p) as u64;
                k /= p;
                Scalar::Mod(digit)
            })
            .collect();
        FieldElement::from_scalars(self, coeffs)
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order().expect("finite field");
        (0..q).map(move |k| self.element_at(k))
    }

    fn find_generator(&self) -> Option<FieldElement> {
        let q = self.order()?;
        if q == 2 {
            return Some(self.one());
        }
        let primes = prime_divisors(q - 1);
        (1..q).map(|k| self.element_at(k)).find(|g| {
            primes
                .iter()
                .all(|&l| !g.pow_u128((q - 1) / l).is_one())
        })
    }

    /// Exponent `e` with `g^e = a` for the stored generator, by exhaustive
    /// search.
    pub fn discrete_log(&self, a: &FieldElement) -> Result<u128, FieldError> {
        let q = self.order().ok_or(FieldError::NotFiniteExtension)?;
        if q > DLOG_LIMIT {
            return Err(FieldError::TooLarge(q));
        }
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let g = self.generator().expect("finite fields store a generator");
        let mut acc = self.one();
        for e in 0..q - 1 {
            if &acc == a {
                return Ok(e);
            }
            acc = &acc * &g;
        }
        unreachable!("generator order is q - 1")
    }
}

/// First monic irreducible polynomial of degree `d` over a prime field, in
/// the enumeration order of its lower coefficients.
fn first_irreducible(base: &FieldSpec, d: usize) -> Result<UniPoly, FieldError> {
    let p = base.characteristic() as u128;
    let count = p.checked_pow(d as u32).ok_or(FieldError::FieldTooLarge)?;
    for k in 0..count {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut m = k;
        for _ in 0..d {
            coeffs.push(base.from_i64((m % p) as i64));
            m /= p;
        }
        coeffs.push(base.one());
        let mu = UniPoly::new(base, coeffs);
        let fac = factor_univariate(&mu)?;
        if fac.factors.len() == 1 && fac.factors[0].1 == 1 && fac.unfactored.is_empty() {
            return Ok(mu);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

/// An element of a [`FieldSpec`] in canonical form: a reduced fraction over
/// Q, the least nonnegative residue over `F_p`, or the reduced polynomial of
/// degree below `deg(mu)` over an extension.
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.spec == other.spec
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.spec
            .cmp(&other.spec)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.spec.base_ops();
        if self.coeffs.len() == 1 {
            return write!(f, "{}", b.fmt_scalar(&self.coeffs[0]));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if b.is_zero(c) {
                continue;
            }
            let negative = matches!(c, Scalar::Rat(x) if x.is_negative());
            let mag = if negative { b.neg(c) } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            if mono.is_empty() {
                write!(f, "{}", b.fmt_scalar(&mag))?;
            } else if b.is_one(&mag) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", b.fmt_scalar(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub(crate) fn from_scalars(spec: &FieldSpec, coeffs: Vec<Scalar>) -> FieldElement {
        debug_assert_eq!(coeffs.len(), spec.degree());
        FieldElement {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        let b = self.spec.base_ops();
        self.coeffs.iter().all(|c| b.is_zero(c))
    }

    pub fn is_one(&self) -> bool {
        let b = self.spec.base_ops();
        b.is_one(&self.coeffs[0]) && self.coeffs[1..].iter().all(|c| b.is_zero(c))
    }

    /// `true` when the element lies in the prime field (or Q).
    pub fn in_base(&self) -> bool {
        let b = self.spec.base_ops();
        self.coeffs[1..].iter().all(|c| b.is_zero(c))
    }

    /// Power-basis coordinates as base-field elements, low degree first.
    pub fn base_coeffs(&self) -> Vec<FieldElement> {
        let base = self.spec.base();
        self.coeffs
            .iter()
            .map(|c| FieldElement::from_scalars(&base, vec![c.clone()]))
            .collect()
    }

    /// Projection to the prime field when the element lies there.
    pub fn to_base(&self) -> Option<FieldElement> {
        self.in_base()
            .then(|| FieldElement::from_scalars(&self.spec.base(), vec![self.coeffs[0].clone()]))
    }

    /// Canonical image in a field containing this one.
    pub fn embed(&self, target: &FieldSpec) -> Result<FieldElement, FieldError> {
        if &self.spec == target {
            return Ok(self.clone());
        }
        if !target.contains(&self.spec) {
            return Err(FieldError::WrongField {
                expected: target.to_string(),
                found: self.spec.to_string(),
            });
        }
        let b = target.base_ops();
        let mut coeffs = vec![b.zero(); target.degree()];
        coeffs[0] = self.coeffs[0].clone();
        Ok(FieldElement::from_scalars(target, coeffs))
    }

    /// The rational value of an element of Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match (&self.coeffs[..], self.spec.is_prime_field()) {
            ([Scalar::Rat(x)], true) => Some(x),
            _ => None,
        }
    }

    /// The residue of an element of `F_p`.
    pub fn as_residue(&self) -> Option<u64> {
        match (&self.coeffs[..], self.spec.is_prime_field()) {
            ([Scalar::Mod(x)], true) => Some(*x),
            _ => None,
        }
    }

    fn check(&self, other: &FieldElement) {
        assert!(
            self.spec == other.spec,
            "field mismatch: {} vs {}",
            self.spec,
            other.spec
        );
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let b = self.spec.base_ops();
        if self.coeffs.len() == 1 {
            let c = b.inv(&self.coeffs[0]).expect("nonzero");
            return Ok(FieldElement::from_scalars(&self.spec, vec![c]));
        }
        let modulus = self.spec.0.modulus.as_ref().expect("extension");
        let inv = base_poly_inverse(b, &self.coeffs, modulus);
        Ok(FieldElement::from_scalars(&self.spec, inv))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow_u128(&self, mut e: u128) -> FieldElement {
        let mut acc = self.spec.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn pow_i64(&self, e: i64) -> Result<FieldElement, FieldError> {
        if e < 0 {
            Ok(self.inv()?.pow_u128(e.unsigned_abs() as u128))
        } else {
            Ok(self.pow_u128(e as u128))
        }
    }

    /// Multiplication by an integer.
    pub fn times(&self, k: i64) -> FieldElement {
        self * &self.spec.from_i64(k)
    }
}

/// Inverse of a nonzero residue `a mod modulus` by the extended Euclidean
/// algorithm on base-coefficient vectors.
fn base_poly_inverse(b: Base, a: &[Scalar], modulus: &[Scalar]) -> Vec<Scalar> {
    fn trim(b: Base, v: &mut Vec<Scalar>) {
        while v.len() > 1 && b.is_zero(v.last().unwrap()) {
            v.pop();
        }
    }
    fn deg(b: Base, v: &[Scalar]) -> Option<usize> {
        (0..v.len()).rev().find(|&i| !b.is_zero(&v[i]))
    }
    fn sub_scaled(b: Base, x: &mut Vec<Scalar>, y: &[Scalar], c: &Scalar, shift: usize) {
        if x.len() < y.len() + shift {
            x.resize(y.len() + shift, b.zero());
        }
        for (i, yi) in y.iter().enumerate() {
            x[i + shift] = b.sub(&x[i + shift], &b.mul(c, yi));
        }
        trim(b, x);
    }
    let d = modulus.len() - 1;
    // Invariant: s_i * a = r_i (mod modulus).
    let mut r0: Vec<Scalar> = modulus.to_vec();
    let mut r1: Vec<Scalar> = a.to_vec();
    trim(b, &mut r1);
    let mut s0: Vec<Scalar> = vec![b.zero()];
    let mut s1: Vec<Scalar> = vec![b.one()];
    while deg(b, &r1).unwrap_or(0) > 0 {
        let d1 = deg(b, &r1).unwrap();
        let lead_inv = b.inv(&r1[d1]).unwrap();
        let mut q: Vec<Scalar> = vec![b.zero()];
        let mut r = r0.clone();
        while let Some(dr) = deg(b, &r) {
            if dr < d1 {
                break;
            }
            let c = b.mul(&r[dr], &lead_inv);
            if q.len() <= dr - d1 {
                q.resize(dr - d1 + 1, b.zero());
            }
            q[dr - d1] = c.clone();
            sub_scaled(b, &mut r, &r1, &c, dr - d1);
        }
        let mut s = s0.clone();
        for (i, qi) in q.iter().enumerate() {
            if !b.is_zero(qi) {
                sub_scaled(b, &mut s, &s1, qi, i);
            }
        }
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        trim(b, &mut r1);
    }
    // r1 is a nonzero constant c; inverse is s1 / c.
    let c_inv = b.inv(&r1[0]).expect("irreducible modulus makes gcd a unit");
    let mut out: Vec<Scalar> = s1.iter().map(|x| b.mul(x, &c_inv)).collect();
    out.resize(d, b.zero());
    out
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        let b = self.spec.base_ops();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| b.add(x, y))
            .collect();
        FieldElement::from_scalars(&self.spec, coeffs)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        let b = self.spec.base_ops();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| b.sub(x, y))
            .collect();
        FieldElement::from_scalars(&self.spec, coeffs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let b = self.spec.base_ops();
        let coeffs = self.coeffs.iter().map(|x| b.neg(x)).collect();
        FieldElement::from_scalars(&self.spec, coeffs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        let b = self.spec.base_ops();
        let d = self.coeffs.len();
        if d == 1 {
            return FieldElement::from_scalars(&self.spec, vec![b.mul(&self.coeffs[0], &rhs.coeffs[0])]);
        }
        let mut prod = vec![b.zero(); 2 * d - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if b.is_zero(x) {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = b.add(&prod[i + j], &b.mul(x, y));
            }
        }
        let modulus = self.spec.0.modulus.as_ref().expect("extension");
        // u^d = -(m_0 + ... + m_{d-1} u^{d-1})
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], b.zero());
            if b.is_zero(&c) {
                continue;
            }
            for (i, m) in modulus[..d].iter().enumerate() {
                let idx = k - d + i;
                prod[idx] = b.sub(&prod[idx], &b.mul(&c, m));
            }
        }
        prod.truncate(d);
        FieldElement::from_scalars(&self.spec, prod)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// `K_1` norm `N: F_{p^d}^x -> F_p^x`, computed as `a^((p^d - 1)/(p - 1))`.
pub fn norm_k1_finite(a: &FieldElement) -> Result<FieldElement, FieldError> {
    let spec = a.spec();
    if !spec.is_finite() || spec.is_prime_field() {
        return Err(FieldError::NotFiniteExtension);
    }
    if a.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let p = spec.characteristic() as u128;
    let q = spec.order().expect("finite");
    let n = a.pow_u128((q - 1) / (p - 1));
    Ok(n.to_base().expect("the norm lands in the prime field"))
}

/// Parses an integer or `a/b` literal into a prime-field (or Q) element.
pub fn parse_scalar(spec: &FieldSpec, text: &str) -> Result<FieldElement, FieldError> {
    let text = text.trim();
    let bad = || FieldError::BadLiteral(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    spec.from_rational(&BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_generator_is_two() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.generator().unwrap(), f5.from_i64(2));
        // independent order check: 2 has order 4 by enumeration of its powers
        let two = f5.from_i64(2);
        let orders: Vec<_> = (1..=4).map(|k| two.pow_u128(k).is_one()).collect();
        assert_eq!(orders, vec![false, false, false, true]);
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        assert_eq!(
            FieldSpec::new(6, None).unwrap_err(),
            FieldError::NonPrimeCharacteristic(6)
        );
        assert!(FieldSpec::new(1, None).is_err());
    }

    #[test]
    fn f9_from_u2_plus_1() {
        let f3 = FieldSpec::prime(3).unwrap();
        // u^2 + 1 has no root in F_3: 0 -> 1, 1 -> 2, 2 -> 2
        for x in 0..3i64 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        let mu = UniPoly::from_i64s(&f3, &[1, 0, 1]);
        let f9 = FieldSpec::new(3, Some(&mu)).unwrap();
        assert_eq!(f9.order(), Some(9));
        let u = f9.generator_u().unwrap();
        assert_eq!(&u * &u, f9.from_i64(-1));
    }

    #[test]
    fn rejects_reducible_extension() {
        let f5 = FieldSpec::prime(5).unwrap();
        let mu = UniPoly::from_i64s(&f5, &[1, 0, 1]); // u^2 + 1 = (u + 2)(u + 3)
        assert!(matches!(
            FieldSpec::extension(&f5, &mu),
            Err(FieldError::ReducibleExtensionPolynomial(_))
        ));
        let q = FieldSpec::rationals();
        let mu = UniPoly::from_i64s(&q, &[-4, 0, 1]);
        assert!(FieldSpec::extension(&q, &mu).is_err());
        let mu = UniPoly::from_i64s(&q, &[-2, 0, 1]);
        assert!(FieldSpec::extension(&q, &mu).is_ok());
    }

    #[test]
    fn rationals_field() {
        let q = FieldSpec::rationals();
        assert_eq!(q.characteristic(), 0);
        assert!(q.generator().is_none());
        let half = parse_scalar(&q, "1/2").unwrap();
        assert_eq!((&half + &half), q.one());
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(parse_scalar(&q, "-6/4").unwrap().to_string(), "-3/2");
    }

    #[test]
    fn norm_f9_of_u_plus_1() {
        let f9 = FieldSpec::standard(9).unwrap();
        let u = f9.generator_u().unwrap();
        let a = &u + &f9.one();
        // (u + 1)^2 = 2u, (2u)^2 = 4u^2 = -4 = 2 in F_3
        let sq = &a * &a;
        assert_eq!(sq, u.times(2));
        assert_eq!(&sq * &sq, f9.from_i64(2));
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(norm_k1_finite(&a).unwrap(), f3.from_i64(2));
        assert_eq!(norm_k1_finite(&f9.one()).unwrap(), f3.one());
    }

    #[test]
    fn norm_errors() {
        let f9 = FieldSpec::standard(9).unwrap();
        assert_eq!(norm_k1_finite(&f9.zero()), Err(FieldError::ZeroElement));
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(norm_k1_finite(&f3.one()), Err(FieldError::NotFiniteExtension));
    }

    #[test]
    fn norm_is_surjective_homomorphism_small_fields() {
        for q in [4u128, 8, 9, 16, 25, 27, 32, 49, 64, 81] {
            let f = FieldSpec::standard(q).unwrap();
            if f.order().unwrap() > 81 {
                continue;
            }
            let units: Vec<_> = f.elements().filter(|x| !x.is_zero()).collect();
            let mut image = std::collections::BTreeSet::new();
            for a in &units {
                image.insert(norm_k1_finite(a).unwrap());
            }
            assert_eq!(image.len() as u64, f.characteristic() - 1, "q = {q}");
            for a in units.iter().step_by(3) {
                for b in units.iter().step_by(5) {
                    let lhs = norm_k1_finite(&(a * b)).unwrap();
                    let rhs = &norm_k1_finite(a).unwrap() * &norm_k1_finite(b).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn discrete_log_round_trip() {
        let f16 = FieldSpec::standard(16).unwrap();
        let g = f16.generator().unwrap();
        for e in 0..15u128 {
            assert_eq!(f16.discrete_log(&g.pow_u128(e)).unwrap(), e);
        }
    }

    #[test]
    fn standard_table_fields() {
        for q in [4u128, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125] {
            let f = FieldSpec::standard(q).unwrap();
            assert_eq!(f.order(), Some(q));
            let g = f.generator().unwrap();
            assert!(g.pow_u128(q - 1).is_one());
        }
        assert!(matches!(FieldSpec::standard(12), Err(FieldError::NotPrimePower(12))));
    }

    #[test]
    fn inverse_in_rational_extension() {
        let q = FieldSpec::rationals();
        let mu = UniPoly::from_i64s(&q, &[-2, 0, 1]);
        let k = FieldSpec::extension(&q, &mu).unwrap();
        let a = &k.generator_u().unwrap() + &k.from_i64(3);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.to_string(), "u + 3");
    }
}
