use std::collections::BTreeMap;
use std::fmt;

use super::{CoordModel, CycleError, FaceReport, ModulusDatum};
use crate::field::{FieldElement, FieldSpec, UniPoly};

/// A closed point of `A^r x cube^n`, given by coordinates in its residue
/// field.
///
/// Points over a proper extension of the base are stored with one chosen
/// conjugate; see [`ZeroCycle::add_point`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedPoint {
    spec: FieldSpec,
    t: Vec<FieldElement>,
    y: Vec<FieldElement>,
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[FieldElement]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({}; {})", show(&self.t), show(&self.y))?;
        if !self.spec.is_prime_field() {
            write!(f, " over {}", self.spec)?;
        }
        Ok(())
    }
}

impl ClosedPoint {
    /// Coordinates are embedded into `spec`.
    pub fn new(
        spec: &FieldSpec,
        t: Vec<FieldElement>,
        y: Vec<FieldElement>,
    ) -> Result<ClosedPoint, CycleError> {
        let embed = |v: Vec<FieldElement>| -> Result<Vec<FieldElement>, CycleError> {
            v.iter().map(|x| Ok(x.embed(spec)?)).collect()
        };
        Ok(ClosedPoint {
            spec: spec.clone(),
            t: embed(t)?,
            y: embed(y)?,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn t(&self) -> &[FieldElement] {
        &self.t
    }

    pub fn y(&self) -> &[FieldElement] {
        &self.y
    }

    fn coords(&self) -> impl Iterator<Item = &FieldElement> {
        self.t.iter().chain(&self.y)
    }

    fn map(&self, spec: &FieldSpec, g: impl Fn(&FieldElement) -> FieldElement) -> ClosedPoint {
        ClosedPoint {
            spec: spec.clone(),
            t: self.t.iter().map(&g).collect(),
            y: self.y.iter().map(&g).collect(),
        }
    }

    /// The same point with the t-coordinates replaced.
    pub fn with_t(&self, t: Vec<FieldElement>) -> ClosedPoint {
        ClosedPoint {
            spec: self.spec.clone(),
            t,
            y: self.y.clone(),
        }
    }
}

/// Applies the automorphism of `spec` sending `u` to `image`.
fn conjugate(x: &FieldElement, image: &FieldElement) -> FieldElement {
    UniPoly::new(&x.spec().base(), x.base_coeffs()).eval(image)
}

/// Representative of the closed point underlying `p` over the prime field
/// `base`, and the degree of `p.spec` over the field generated by its
/// coordinates.
fn canonicalize(base: &FieldSpec, p: ClosedPoint) -> Result<(ClosedPoint, i64), CycleError> {
    if p.spec == *base {
        return Ok((p, 1));
    }
    if !base.is_prime_field() || p.spec.base() != *base {
        return Err(CycleError::UnsupportedResidueField(format!(
            "point over {} in a cycle over {}",
            p.spec, base
        )));
    }
    let d = p.spec.degree();
    if p.coords().all(FieldElement::in_base) {
        let q = p.map(base, |x| x.to_base().expect("base element"));
        return Ok((q, d as i64));
    }
    let u = p.spec.generator_u().expect("extension");
    if p.spec.is_finite() {
        let ch = p.spec.characteristic() as u128;
        let frob = |q: &ClosedPoint| q.map(&p.spec, |x| x.pow_u128(ch));
        let mut orbit = vec![p.clone()];
        loop {
            let next = frob(orbit.last().unwrap());
            if next == p {
                break;
            }
            orbit.push(next);
        }
        if orbit.len() != d {
            return Err(CycleError::UnsupportedResidueField(format!(
                "coordinates of {p} generate a proper intermediate field"
            )));
        }
        return Ok((orbit.into_iter().min().unwrap(), 1));
    }
    match d {
        2 => {
            let mu = p.spec.modulus_poly().expect("extension");
            let other = (-&mu.coeff(1)).embed(&p.spec)? - u;
            let q = p.map(&p.spec, |x| conjugate(x, &other));
            Ok((p.clone().min(q), 1))
        }
        3 => Ok((p, 1)),
        _ => Err(CycleError::UnsupportedResidueField(format!(
            "degree {d} extension of Q for {p}"
        ))),
    }
}

/// A formal integer combination of closed points of `A^r x cube^n` over a
/// base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroCycle {
    base: FieldSpec,
    model: CoordModel,
    r: usize,
    n: usize,
    terms: BTreeMap<ClosedPoint, i64>,
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, m)| format!("{m}*[{p}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl ZeroCycle {
    pub fn new(base: &FieldSpec, model: CoordModel, r: usize, n: usize) -> ZeroCycle {
        ZeroCycle {
            base: base.clone(),
            model,
            r,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(
        base: &FieldSpec,
        model: CoordModel,
        point: ClosedPoint,
    ) -> Result<ZeroCycle, CycleError> {
        let mut z = ZeroCycle::new(base, model, point.t.len(), point.y.len());
        z.add_point(point, 1)?;
        Ok(z)
    }

    /// Adds `mult` copies of a point.
    ///
    /// A point over a proper extension `L` of a prime base field is replaced
    /// by the closed point it lies over: coordinates all in the base give a
    /// rational point with multiplicity `[L:k]`; otherwise a fixed conjugate
    /// is stored (the least Frobenius conjugate over a finite field).
    pub fn add_point(&mut self, point: ClosedPoint, mult: i64) -> Result<(), CycleError> {
        if point.t.len() != self.r || point.y.len() != self.n {
            return Err(CycleError::AmbientMismatch(format!(
                "point {point} in A^{} x cube^{}",
                self.r, self.n
            )));
        }
        if self.model == CoordModel::Original && point.y.iter().any(FieldElement::is_one) {
            return Err(CycleError::BadPoint(format!("{point} lies on the excluded locus y = 1")));
        }
        if mult == 0 {
            return Ok(());
        }
        let (p, deg) = canonicalize(&self.base, point)?;
        let e = self.terms.entry(p).or_insert(0);
        *e += mult * deg;
        if *e == 0 {
            let key = self
                .terms
                .iter()
                .find(|(_, &m)| m == 0)
                .map(|(k, _)| k.clone())
                .expect("zero entry");
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn model(&self) -> CoordModel {
        self.model
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClosedPoint, i64)> {
        self.terms.iter().map(|(p, &m)| (p, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum mult * [k(P):k]`.
    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(p, m)| m * (p.spec.degree() / self.base.degree()) as i64)
            .sum()
    }

    fn compatible(&self, other: &ZeroCycle) -> Result<(), CycleError> {
        if self.model != other.model {
            return Err(CycleError::WrongModel {
                expected: self.model,
                found: other.model,
            });
        }
        if self.base != other.base || self.r != other.r || self.n != other.n {
            return Err(CycleError::AmbientMismatch(format!(
                "0-cycles on A^{} x cube^{} over {} and A^{} x cube^{} over {}",
                self.r, self.n, self.base, other.r, other.n, other.base
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ZeroCycle) -> Result<ZeroCycle, CycleError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (p, m) in other.terms() {
            out.add_point(p.clone(), m)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> ZeroCycle {
        let mut out = self.clone();
        if k == 0 {
            out.terms.clear();
        } else {
            out.terms.values_mut().for_each(|m| *m *= k);
        }
        out
    }

    pub fn neg(&self) -> ZeroCycle {
        self.scale(-1)
    }

    pub fn sub(&self, other: &ZeroCycle) -> Result<ZeroCycle, CycleError> {
        self.add(&other.neg())
    }

    /// Flags every coordinate `y_i` lying on a face value of the model.
    pub fn check_face_condition(&self) -> FaceReport {
        let (a, b) = self.model.faces();
        let mut violations = Vec::new();
        for p in self.terms.keys() {
            for (i, y) in p.y.iter().enumerate() {
                let v = self.model.classify(&crate::poly::Value::Finite(y.clone()));
                if v == Some(a) || v == Some(b) {
                    violations.push(format!("y{}={} at {p}", i + 1, v.unwrap()));
                }
            }
        }
        FaceReport { violations }
    }

    /// Applies `psi` or its inverse to every y-coordinate.
    pub fn convert(&self, target: CoordModel) -> Result<ZeroCycle, CycleError> {
        if target == self.model {
            return Ok(self.clone());
        }
        let mut out = ZeroCycle::new(&self.base, target, self.r, self.n);
        for (p, m) in self.terms() {
            let y = p
                .y
                .iter()
                .map(|y| convert_coordinate(y, self.model))
                .collect::<Result<Vec<_>, _>>()?;
            let q = ClosedPoint {
                spec: p.spec.clone(),
                t: p.t.clone(),
                y,
            };
            out.add_point(q, m)?;
        }
        Ok(out)
    }
}

/// `psi(y) = 1/(1 - y)` from ORIGINAL, `psi^-1(w) = 1 - 1/w` from PSI.
pub(crate) fn convert_coordinate(y: &FieldElement, from: CoordModel) -> Result<FieldElement, CycleError> {
    let one = y.spec().one();
    match from {
        CoordModel::Original => (&one - y)
            .inv()
            .map_err(|_| CycleError::UndefinedAtPole(format!("psi({y})"))),
        CoordModel::Psi => Ok(&one
            - &y
                .inv()
                .map_err(|_| CycleError::UndefinedAtPole(format!("psi^-1({y})")))?),
    }
}

/// `true` iff the divisor does not vanish at the t-coordinates of any point.
pub fn check_modulus_zerocycle(z: &ZeroCycle, d: &ModulusDatum) -> Result<bool, CycleError> {
    if z.r != d.r() {
        return Err(CycleError::AmbientMismatch(format!(
            "0-cycle on A^{}, modulus on A^{}",
            z.r,
            d.r()
        )));
    }
    for p in z.terms.keys() {
        let dp = d.divisor().embed(&p.spec)?;
        if dp.eval(&p.t, &[])?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(spec: &FieldSpec, t: &[i64], y: &[i64]) -> ClosedPoint {
        ClosedPoint::new(
            spec,
            t.iter().map(|&v| spec.from_i64(v)).collect(),
            y.iter().map(|&v| spec.from_i64(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn modulus_disjointness() {
        let f7 = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&f7, &[1, 1]).unwrap();
        let z = |t: &[i64]| ZeroCycle::single(&f7, CoordModel::Psi, pt(&f7, t, &[])).unwrap();
        assert!(check_modulus_zerocycle(&z(&[1, 1]), &d).unwrap());
        assert!(!check_modulus_zerocycle(&z(&[0, 5]), &d).unwrap());
        let vars = crate::poly::VarSet::new(2, 0);
        let h = crate::poly::MultiPoly::parse("t1*t2 - 1", &f7, vars).unwrap();
        let dh = ModulusDatum::from_poly(&h).unwrap();
        assert!(check_modulus_zerocycle(&z(&[2, 3]), &dh).unwrap());
        assert!(!check_modulus_zerocycle(&z(&[2, 4]), &dh).unwrap());
    }

    #[test]
    fn psi_on_points() {
        let q = FieldSpec::rationals();
        let z = ZeroCycle::single(&q, CoordModel::Original, pt(&q, &[1], &[2])).unwrap();
        let w = z.convert(CoordModel::Psi).unwrap();
        let (p, _) = w.terms().next().unwrap();
        assert_eq!(p.y()[0], q.from_i64(-1));
        assert_eq!(w.convert(CoordModel::Original).unwrap(), z);
        let one = pt(&q, &[1], &[1]);
        assert!(ZeroCycle::single(&q, CoordModel::Original, one).is_err());
    }

    #[test]
    fn cancellation_and_faces() {
        let f5 = FieldSpec::prime(5).unwrap();
        let mut z = ZeroCycle::new(&f5, CoordModel::Psi, 1, 1);
        z.add_point(pt(&f5, &[2], &[3]), 2).unwrap();
        z.add_point(pt(&f5, &[2], &[3]), -2).unwrap();
        assert!(z.is_empty());
        z.add_point(pt(&f5, &[2], &[0]), 1).unwrap();
        assert_eq!(z.check_face_condition().first(), Some("y1=0 at (2; 0)"));
    }

    #[test]
    fn extension_points_are_canonical() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f9 = FieldSpec::standard(9).unwrap();
        let u = f9.generator_u().unwrap();
        let p = ClosedPoint::new(&f9, vec![u.clone()], vec![]).unwrap();
        let q = ClosedPoint::new(&f9, vec![u.pow_u128(3)], vec![]).unwrap();
        let mut z = ZeroCycle::new(&f3, CoordModel::Psi, 1, 0);
        z.add_point(p, 1).unwrap();
        z.add_point(q, 1).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z.degree(), 4);
        let mut w = ZeroCycle::new(&f3, CoordModel::Psi, 1, 0);
        w.add_point(ClosedPoint::new(&f9, vec![f9.from_i64(2)], vec![]).unwrap(), 1).unwrap();
        assert_eq!(w.terms().next().unwrap(), (&pt(&f3, &[2], &[]), 2));
    }
}
