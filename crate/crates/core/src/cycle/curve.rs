use std::fmt;

use super::{face_sign, Convention, CoordModel, CycleError, FaceValue, ZeroCycle};
use super::points::ClosedPoint;
use crate::field::{factor_univariate, FieldSpec};
use crate::poly::{Place, RatFunc, Value};

/// A rational curve `s -> (b_1(s), ..., b_r(s); c_1(s), ..., c_n(s))` in
/// `A^r x cube^n`, with `r = 0` for curves over a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamCurve {
    spec: FieldSpec,
    model: CoordModel,
    base: Vec<RatFunc>,
    components: Vec<RatFunc>,
}

impl fmt::Display for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[RatFunc]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "t -> ({}; {})", show(&self.base), show(&self.components))
    }
}

/// Zeros of `g` on the projective line with their orders.
pub(crate) fn zeros(g: &RatFunc) -> Result<Vec<(Place, u32)>, CycleError> {
    let mut out = Vec::new();
    if !g.num().is_constant() {
        let fac = factor_univariate(g.num())?;
        let irr = fac
            .certified_irreducibles()
            .ok_or_else(|| CycleError::UnfactorableEntry(g.num().display_var("t").to_string()))?;
        for (pi, e) in irr {
            out.push((Place::Finite(pi), e));
        }
    }
    let v = Place::Infinity.valuation(g);
    if v > 0 {
        out.push((Place::Infinity, v as u32));
    }
    Ok(out)
}

impl ParamCurve {
    pub fn new(
        spec: &FieldSpec,
        model: CoordModel,
        base: Vec<RatFunc>,
        components: Vec<RatFunc>,
    ) -> Result<ParamCurve, CycleError> {
        for c in base.iter().chain(&components) {
            if c.spec() != spec {
                return Err(CycleError::AmbientMismatch(format!("{c} is not over {spec}")));
            }
        }
        for c in &components {
            let on_face = match c.as_constant() {
                Some(x) => model.classify(&Value::Finite(x)).is_some(),
                None => false,
            };
            if on_face {
                return Err(CycleError::CurveOnFace(c.to_string()));
            }
        }
        Ok(ParamCurve {
            spec: spec.clone(),
            model,
            base,
            components,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn model(&self) -> CoordModel {
        self.model
    }

    pub fn base(&self) -> &[RatFunc] {
        &self.base
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn r(&self) -> usize {
        self.base.len()
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub(crate) fn with_base(&self, base: Vec<RatFunc>) -> ParamCurve {
        ParamCurve {
            base,
            ..self.clone()
        }
    }

    /// Parameter places where `c_i` takes the face value, with multiplicity.
    fn face_places(&self, i: usize, value: FaceValue) -> Result<Vec<(Place, u32)>, CycleError> {
        let c = &self.components[i - 1];
        let g = match value {
            FaceValue::Zero => c.clone(),
            FaceValue::One => c.sub(&RatFunc::constant(self.spec.one())),
            FaceValue::Infinity => c.inv()?,
        };
        zeros(&g)
    }

    /// The cubical boundary of the curve as a 0-cycle at level `n - 1`.
    ///
    /// Each place of the parameter line where `c_i` meets a face value gives
    /// the point of the remaining coordinates, weighted by the order of
    /// contact and the face sign. Points where the base has a pole or some
    /// other coordinate hits the excluded locus are not on the curve and are
    /// dropped; a point on another face is an improper boundary.
    pub fn boundary(&self, convention: Convention) -> Result<ZeroCycle, CycleError> {
        let n = self.level();
        if n == 0 {
            return Err(CycleError::WrongLevel("curve at level 0 has no boundary".into()));
        }
        let mut out = ZeroCycle::new(&self.spec, self.model, self.r(), n - 1);
        let (plus, minus) = self.model.faces();
        for i in 1..=n {
            for value in [plus, minus] {
                let sign = face_sign(self.model, i, value, convention);
                for (place, mult) in self.face_places(i, value)? {
                    if let Some(p) = self.point_at(&place, i)? {
                        out.add_point(p, sign * mult as i64)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The point at a parameter place with coordinate `y_skip` removed, or
    /// `None` when it lies outside `A^r x cube^(n-1)`.
    fn point_at(&self, place: &Place, skip: usize) -> Result<Option<ClosedPoint>, CycleError> {
        let field = place.residue_field(&self.spec)?;
        let x = place.point(&field);
        let eval = |f: &RatFunc| -> Result<Value, CycleError> {
            Ok(match f.embed(&field)?.eval_value(&x) {
                Value::Finite(v) => Value::Finite(v.embed(&field)?),
                Value::Infinity => Value::Infinity,
            })
        };
        let mut t = Vec::with_capacity(self.r());
        for b in &self.base {
            match eval(b)? {
                Value::Finite(v) => t.push(v),
                Value::Infinity => return Ok(None),
            }
        }
        let values = self
            .components
            .iter()
            .enumerate()
            .filter(|(j, _)| j + 1 != skip)
            .map(|(j, c)| Ok((j + 1, eval(c)?)))
            .collect::<Result<Vec<_>, CycleError>>()?;
        let excluded = Some(self.model.excluded());
        if values.iter().any(|(_, v)| self.model.classify(v) == excluded) {
            return Ok(None);
        }
        let mut y = Vec::with_capacity(values.len());
        for (j, v) in values {
            if let Some(fv) = self.model.classify(&v) {
                return Err(CycleError::ImproperBoundary(format!(
                    "at t = {x} ({place}) the curve {self} meets y{skip} on a face and y{j} = {fv}"
                )));
            }
            y.push(v.finite().expect("finite").clone());
        }
        Ok(Some(ClosedPoint::new(&field, t, y)?))
    }

    /// The same curve in the other coordinate model.
    pub fn convert(&self, target: CoordModel) -> Result<ParamCurve, CycleError> {
        if target == self.model {
            return Ok(self.clone());
        }
        let one = RatFunc::constant(self.spec.one());
        let components = self
            .components
            .iter()
            .map(|c| match self.model {
                CoordModel::Original => one.sub(c).inv(),
                CoordModel::Psi => Ok(one.sub(&c.inv()?)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        ParamCurve::new(&self.spec, target, self.base.clone(), components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_ratfunc;

    fn rf(spec: &FieldSpec, s: &str) -> RatFunc {
        parse_ratfunc(s, spec).unwrap()
    }

    #[test]
    fn single_linear_zero() {
        let f7 = FieldSpec::prime(7).unwrap();
        // over the hyperbola t1*t2 = 6, component t - 2 in ORIGINAL
        let c = ParamCurve::new(
            &f7,
            CoordModel::Original,
            vec![rf(&f7, "t"), rf(&f7, "6/t")],
            vec![rf(&f7, "t - 2")],
        )
        .unwrap();
        let b = c.boundary(Convention::ModelDefault).unwrap();
        let terms: Vec<_> = b.terms().map(|(p, m)| (p.to_string(), m)).collect();
        assert_eq!(terms, vec![("(2, 3; )".to_string(), 1)]);
    }

    #[test]
    fn double_zero_multiplicity() {
        let f5 = FieldSpec::prime(5).unwrap();
        let c = ParamCurve::new(
            &f5,
            CoordModel::Psi,
            vec![rf(&f5, "t + 1")],
            vec![rf(&f5, "(t - 2)^2")],
        )
        .unwrap();
        let b = c.boundary(Convention::ModelDefault).unwrap();
        let terms: Vec<_> = b.terms().map(|(p, m)| (p.to_string(), m)).collect();
        // (t-2)^2 = 1 at t = 1, 3
        assert_eq!(
            terms,
            vec![("(2; )".to_string(), 1), ("(3; )".to_string(), -2), ("(4; )".to_string(), 1)]
        );
    }

    #[test]
    fn boundary_degree_is_zero_in_original_model() {
        let f7 = FieldSpec::prime(7).unwrap();
        let c = ParamCurve::new(
            &f7,
            CoordModel::Original,
            vec![],
            vec![rf(&f7, "(t^2 + 1)/(t^3 + t + 1)")],
        )
        .unwrap();
        // over a point every boundary point is the same point, with total degree 0
        assert!(c.boundary(Convention::ModelDefault).unwrap().is_empty());
        let g = c.with_base(vec![rf(&f7, "t")]);
        let b = g.boundary(Convention::ModelDefault).unwrap();
        // zeros along t^2 + 1, poles along t^3 + t + 1; t = inf is off A^1
        assert_eq!(b.len(), 2);
        assert_eq!(b.degree(), -1);
    }

    #[test]
    fn conversion_commutes_with_boundary() {
        let f7 = FieldSpec::prime(7).unwrap();
        let c = ParamCurve::new(
            &f7,
            CoordModel::Original,
            vec![rf(&f7, "t")],
            vec![rf(&f7, "t - 3"), rf(&f7, "(t - 5)/(t + 3)")],
        )
        .unwrap();
        let lhs = c.boundary(Convention::ModelDefault).unwrap().convert(CoordModel::Psi).unwrap();
        let rhs = c.convert(CoordModel::Psi).unwrap().boundary(Convention::ModelDefault).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_face_component_rejected() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = ParamCurve::new(&f5, CoordModel::Psi, vec![], vec![rf(&f5, "1")]);
        assert!(matches!(r, Err(CycleError::CurveOnFace(_))));
    }
}
