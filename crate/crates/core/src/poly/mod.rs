//! Sparse multivariate polynomials in `t1..tr, y1..yn` and rational
//! functions of one parameter.

mod parse;
mod ratfunc;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{split_sign, write_term};
use crate::field::{FieldElement, FieldError, FieldSpec, UniPoly};

pub use parse::{parse_poly, parse_ratfunc};
pub use ratfunc::{Place, RatFunc, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("wrong field: {0}")]
    WrongField(String),
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("{0} is not a monic irreducible polynomial")]
    NotAPlace(String),
    #[error("{0} is not a unit at the place {1}")]
    NotAUnit(String, String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coordinates of `A^r x cube^n`: `r` affine variables followed by `n` cube
/// variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    pub r: usize,
    pub n: usize,
}

/// A variable, 1-based as in `t1` or `y2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T(usize),
    Y(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(i) => write!(f, "t{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

impl VarSet {
    pub fn new(r: usize, n: usize) -> VarSet {
        VarSet { r, n }
    }

    pub fn len(&self) -> usize {
        self.r + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of a variable in exponent vectors.
    pub fn index(&self, v: Var) -> Result<usize, PolyError> {
        match v {
            Var::T(i) if (1..=self.r).contains(&i) => Ok(i - 1),
            Var::Y(i) if (1..=self.n).contains(&i) => Ok(self.r + i - 1),
            _ => Err(PolyError::UnknownVariable(v.to_string())),
        }
    }

    pub fn var_at(&self, idx: usize) -> Var {
        if idx < self.r {
            Var::T(idx + 1)
        } else {
            Var::Y(idx - self.r + 1)
        }
    }

    /// The variable set with `v` removed.
    pub fn without(&self, v: Var) -> VarSet {
        match v {
            Var::T(_) => VarSet::new(self.r - 1, self.n),
            Var::Y(_) => VarSet::new(self.r, self.n - 1),
        }
    }
}

/// A polynomial over a [`FieldSpec`] stored as a map from exponent vectors
/// (t-block first) to nonzero coefficients. Iteration order is
/// lexicographic with `t1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    spec: FieldSpec,
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = self.vars.var_at(i);
                    if e == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let (neg, mag) = split_sign(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            write_term(f, &mag, &mono.join("*"))?;
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(spec: &FieldSpec, vars: VarSet) -> MultiPoly {
        MultiPoly {
            spec: spec.clone(),
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &FieldSpec, vars: VarSet, c: FieldElement) -> MultiPoly {
        MultiPoly::from_terms(spec, vars, [(vec![0; vars.len()], c)])
    }

    pub fn one(spec: &FieldSpec, vars: VarSet) -> MultiPoly {
        MultiPoly::constant(spec, vars, spec.one())
    }

    pub fn var(spec: &FieldSpec, vars: VarSet, v: Var) -> Result<MultiPoly, PolyError> {
        let mut e = vec![0; vars.len()];
        e[vars.index(v)?] = 1;
        Ok(MultiPoly::from_terms(spec, vars, [(e, spec.one())]))
    }

    /// Sums the given terms, dropping zero coefficients.
    pub fn from_terms(
        spec: &FieldSpec,
        vars: VarSet,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> MultiPoly {
        let mut out = MultiPoly::zero(spec, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        let c = c.embed(&self.spec).expect("coefficient in the polynomial field");
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let s = slot.get() + &c;
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn parse(text: &str, spec: &FieldSpec, vars: VarSet) -> Result<MultiPoly, PolyError> {
        parse_poly(text, spec, vars)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> FieldElement {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<FieldElement> {
        self.is_constant().then(|| self.constant_term())
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &FieldElement)> {
        self.terms.iter().next_back()
    }

    fn same_ring(&self, other: &MultiPoly) {
        assert!(
            self.spec == other.spec && self.vars == other.vars,
            "polynomial ring mismatch: {} {:?} vs {} {:?}",
            self.spec,
            self.vars,
            other.spec,
            other.vars
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            spec: self.spec.clone(),
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        let c = c.embed(&self.spec).expect("scalar in the polynomial field");
        MultiPoly::from_terms(
            &self.spec,
            self.vars,
            self.terms.iter().map(|(e, x)| (e.clone(), x * &c)),
        )
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        let mut out = MultiPoly::zero(&self.spec, self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.spec, self.vars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / g`.
    pub fn exact_div(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_ring(g);
        let (ge, gc) = g.leading_term().ok_or(PolyError::ZeroDivisor)?;
        let ge = ge.clone();
        let gc_inv = gc.inv()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.spec, self.vars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&ge).any(|(a, b)| a < b) {
                return Err(PolyError::InexactDivision);
            }
            let e: Vec<u32> = re.iter().zip(&ge).map(|(a, b)| a - b).collect();
            let c = rc * &gc_inv;
            let mono = MultiPoly::from_terms(&self.spec, self.vars, [(e, c)]);
            rem = rem.sub(&mono.mul(g));
            quot = quot.add(&mono);
        }
        Ok(quot)
    }

    /// Largest exponent of `v`.
    pub fn degree_in(&self, v: Var) -> Result<u32, PolyError> {
        let idx = self.vars.index(v)?;
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        let idx = self.vars.index(v).expect("variable in ring");
        self.terms.keys().any(|e| e[idx] > 0)
    }

    /// The coefficient of `v^e`, as a polynomial free of `v` in the same ring.
    pub fn coefficient_of(&self, v: Var, e: u32) -> Result<MultiPoly, PolyError> {
        let idx = self.vars.index(v)?;
        Ok(MultiPoly::from_terms(
            &self.spec,
            self.vars,
            self.terms.iter().filter(|(x, _)| x[idx] == e).map(|(x, c)| {
                let mut x = x.clone();
                x[idx] = 0;
                (x, c.clone())
            }),
        ))
    }

    /// Evaluates the assigned variables, keeping the ring.
    pub fn substitute(&self, assignments: &[(Var, FieldElement)]) -> Result<MultiPoly, PolyError> {
        let mut idx = Vec::with_capacity(assignments.len());
        for (v, c) in assignments {
            idx.push((self.vars.index(*v)?, c.embed(&self.spec)?));
        }
        let mut out = MultiPoly::zero(&self.spec, self.vars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let mut c = c.clone();
            for (i, val) in &idx {
                c = &c * &val.pow_u128(e[*i] as u128);
                e[*i] = 0;
            }
            out.add_term(e, &c);
        }
        Ok(out)
    }

    /// Evaluates `v` and removes it from the ring, renumbering the later
    /// variables of its block.
    pub fn restrict(&self, v: Var, value: &FieldElement) -> Result<MultiPoly, PolyError> {
        let idx = self.vars.index(v)?;
        let value = value.embed(&self.spec)?;
        let vars = self.vars.without(v);
        let mut out = MultiPoly::zero(&self.spec, vars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let k = e.remove(idx);
            out.add_term(e, &(c * &value.pow_u128(k as u128)));
        }
        Ok(out)
    }

    /// Moves the polynomial into another ring through a variable map.
    pub fn reindex(&self, vars: VarSet, map: impl Fn(Var) -> Var) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(&self.spec, vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    ne[vars.index(map(self.vars.var_at(i)))?] += k;
                }
            }
            out.add_term(ne, c);
        }
        Ok(out)
    }

    /// The same polynomial in a ring with at least as many variables of
    /// each kind.
    pub fn widen(&self, vars: VarSet) -> Result<MultiPoly, PolyError> {
        self.reindex(vars, |v| v)
    }

    /// Value at a point whose coordinates lie in a field containing the
    /// coefficients.
    pub fn eval(&self, t: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if t.len() != self.vars.r || y.len() != self.vars.n {
            return Err(PolyError::WrongField(format!(
                "point with {} + {} coordinates for a ring with {} + {} variables",
                t.len(),
                y.len(),
                self.vars.r,
                self.vars.n
            )));
        }
        let target = t
            .iter()
            .chain(y)
            .next()
            .map_or_else(|| self.spec.clone(), |c| c.spec().clone());
        let point: Vec<&FieldElement> = t.iter().chain(y).collect();
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = c.embed(&target)?;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = &term * &x.pow_u128(k as u128);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn embed(&self, target: &FieldSpec) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(target, self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.embed(target)?);
        }
        Ok(out)
    }

    /// `(c*v + d)^deg * self(v -> (a*v + b)/(c*v + d))`, where `deg` is the
    /// degree of `self` in `v`.
    pub fn mobius(&self, v: Var, m: [&FieldElement; 4]) -> Result<MultiPoly, PolyError> {
        let idx = self.vars.index(v)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let deg = self.degree_in(v)?;
        let vp = MultiPoly::var(&self.spec, self.vars, v)?;
        let lin = |x: &FieldElement, y: &FieldElement| {
            vp.scale(x).add(&MultiPoly::constant(&self.spec, self.vars, y.clone()))
        };
        let top = lin(m[0], m[1]);
        let bottom = lin(m[2], m[3]);
        let mut out = MultiPoly::zero(&self.spec, self.vars);
        for k in 0..=deg {
            let part = self.coefficient_of(v, k)?;
            if part.is_zero() {
                continue;
            }
            out = out.add(&part.mul(&top.pow(k)).mul(&bottom.pow(deg - k)));
        }
        debug_assert!(self.vars.index(v).is_ok_and(|i| i == idx));
        Ok(out)
    }

    /// Scales so that the constant term is 1; `None` if it vanishes.
    pub fn normalize_constant_term(&self) -> Option<MultiPoly> {
        let c = self.constant_term();
        (!c.is_zero()).then(|| self.scale(&c.inv().expect("nonzero")))
    }

    /// Canonical associate: constant term 1 when possible, otherwise monic
    /// leading term.
    pub fn normalize(&self) -> MultiPoly {
        if let Some(p) = self.normalize_constant_term() {
            return p;
        }
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// The polynomial as a univariate polynomial in `v`, when it involves no
    /// other variable.
    pub fn to_univariate(&self, v: Var) -> Option<UniPoly> {
        let idx = self.vars.index(v).ok()?;
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != idx && k > 0) {
                return None;
            }
            let k = e[idx] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, self.spec.zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(&self.spec, coeffs))
    }

    pub fn from_univariate(p: &UniPoly, vars: VarSet, v: Var) -> Result<MultiPoly, PolyError> {
        let idx = vars.index(v)?;
        Ok(MultiPoly::from_terms(
            p.spec(),
            vars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[idx] = k as u32;
                (e, c.clone())
            }),
        ))
    }

    /// Substitutes `images[k]` for the `k`-th variable; all images share a
    /// ring.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let (spec, vars) = match images.first() {
            Some(p) => (p.spec.clone(), p.vars),
            None => (self.spec.clone(), self.vars),
        };
        let mut out = MultiPoly::zero(&spec, vars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&spec, vars, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&img.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Value at rational functions of one parameter.
    pub fn eval_ratfuncs(&self, args: &[RatFunc]) -> RatFunc {
        assert_eq!(args.len(), self.vars.len(), "one argument per variable");
        let mut acc = RatFunc::constant(self.spec.zero());
        for (e, c) in &self.terms {
            let mut term = RatFunc::constant(c.clone());
            for (a, &k) in args.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&a.pow(k as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Product `t1*...*tr` in the given ring.
    pub fn t_product(spec: &FieldSpec, vars: VarSet) -> MultiPoly {
        let mut e = vec![0; vars.len()];
        e[..vars.r].iter_mut().for_each(|x| *x = 1);
        MultiPoly::from_terms(spec, vars, [(e, spec.one())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn parse_expands_products() {
        let p = MultiPoly::parse("1 - t1*t2*(3*y1 + 2)", &f7(), VarSet::new(2, 1)).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.to_string(), "4*t1*t2*y1 + 5*t1*t2 + 1");
        let q = MultiPoly::parse("t1^2*t2 - 1/2", &FieldSpec::rationals(), VarSet::new(2, 0)).unwrap();
        assert_eq!(q.num_terms(), 2);
        assert_eq!(q.to_string(), "t1^2*t2 - 1/2");
    }

    #[test]
    fn unknown_variable() {
        let err = MultiPoly::parse("1 - t1*t2*y3", &f7(), VarSet::new(2, 2)).unwrap_err();
        assert_eq!(err, PolyError::UnknownVariable("y3".into()));
    }

    #[test]
    fn face_substitution() {
        let h = MultiPoly::parse("1 - t1*t2*(2*y1*y2 + 3*y1 + 5*y2 + 6)", &f7(), VarSet::new(2, 2)).unwrap();
        let zero = h.substitute(&[(Var::Y(1), f7().zero())]).unwrap();
        let expect = MultiPoly::parse("1 - t1*t2*(5*y2 + 6)", &f7(), VarSet::new(2, 2)).unwrap();
        assert_eq!(zero, expect);
        let one = h.substitute(&[(Var::Y(1), f7().one())]).unwrap();
        let expect = MultiPoly::parse("1 - t1*t2*((2 + 5)*y2 + (3 + 6))", &f7(), VarSet::new(2, 2)).unwrap();
        assert_eq!(one, expect);
        assert_eq!(h.substitute(&[]).unwrap(), h);
    }

    #[test]
    fn exact_division() {
        let vars = VarSet::new(2, 1);
        let f = MultiPoly::parse("1 - t1*t2*(3*y1 + 2)", &f7(), vars).unwrap();
        let one = MultiPoly::one(&f7(), vars);
        let t12 = MultiPoly::t_product(&f7(), vars);
        let q = one.sub(&f).exact_div(&t12).unwrap();
        assert_eq!(q, MultiPoly::parse("3*y1 + 2", &f7(), vars).unwrap());
        assert_eq!(f.exact_div(&one).unwrap(), f);
        let g = MultiPoly::parse("1 - t1*y1", &f7(), vars).unwrap();
        assert_eq!(one.sub(&g).exact_div(&t12), Err(PolyError::InexactDivision));
        assert_eq!(f.exact_div(&MultiPoly::zero(&f7(), vars)), Err(PolyError::ZeroDivisor));
    }

    #[test]
    fn degrees_and_coefficients() {
        let vars = VarSet::new(2, 2);
        let p = MultiPoly::parse("1 - t1*t2*(2*y1*y2 + 3*y1 + 5*y2 + 6)", &f7(), vars).unwrap();
        assert_eq!(p.degree_in(Var::Y(1)).unwrap(), 1);
        let q = MultiPoly::parse("1 - t1*t2*y1^2", &f7(), vars).unwrap();
        assert_eq!(q.degree_in(Var::Y(1)).unwrap(), 2);
        let r = MultiPoly::parse("1 - t1*y1", &f7(), vars).unwrap();
        assert_eq!(r.degree_in(Var::T(2)).unwrap(), 0);
        let c1 = p.coefficient_of(Var::Y(1), 1).unwrap();
        assert_eq!(c1, MultiPoly::parse("-t1*t2*(2*y2 + 3)", &f7(), vars).unwrap());
        assert!(p.coefficient_of(Var::Y(1), 2).unwrap().is_zero());
        assert_eq!(
            MultiPoly::zero(&f7(), vars).degree_in(Var::Y(1)),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn restrict_reindexes() {
        let vars = VarSet::new(1, 2);
        let p = MultiPoly::parse("1 - t1*y1*y2^2", &f7(), vars).unwrap();
        let q = p.restrict(Var::Y(1), &f7().from_i64(3)).unwrap();
        assert_eq!(q.vars(), VarSet::new(1, 1));
        assert_eq!(q.to_string(), "4*t1*y1^2 + 1");
    }

    #[test]
    fn mobius_round_trip() {
        let q = FieldSpec::rationals();
        let vars = VarSet::new(1, 1);
        let p = MultiPoly::parse("1 - t1*(2*y1 + 3)", &q, vars).unwrap();
        let one = q.one();
        let zero = q.zero();
        let m1 = -&one;
        // y -> (y - 1)/y and back via y -> 1/(1 - y)
        let fwd = p.mobius(Var::Y(1), [&one, &m1, &one, &zero]).unwrap();
        let back = fwd.mobius(Var::Y(1), [&zero, &one, &m1, &one]).unwrap();
        assert_eq!(back.normalize(), p.normalize());
    }
}
