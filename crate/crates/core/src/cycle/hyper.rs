use std::collections::BTreeMap;

use super::{face_sign, BoundaryOptions, CoordModel, CycleError, Face, FaceReport, FaceValue};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{MultiPoly, Var, VarSet};

/// A formal integer combination of hypersurfaces `V(f)` in `A^r x cube^n`.
///
/// Components are stored normalized (constant term 1 when it is nonzero,
/// otherwise monic leading term). Constant components are empty and dropped.
/// In the ORIGINAL model factors `y_j - 1` are removed, since they cut out
/// the excluded locus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypersurfaceCycle {
    spec: FieldSpec,
    vars: VarSet,
    model: CoordModel,
    terms: BTreeMap<MultiPoly, i64>,
}

impl std::fmt::Display for HypersurfaceCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, m)| format!("{m}*V({g})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `true` when `f` is independent of some cube coordinate.
pub fn is_degenerate(f: &MultiPoly) -> bool {
    let n = f.vars().n;
    n >= 1 && (1..=n).any(|i| !f.depends_on(Var::Y(i)))
}

fn strip_excluded(f: &MultiPoly) -> MultiPoly {
    let spec = f.spec();
    let vars = f.vars();
    let mut g = f.clone();
    for j in 1..=vars.n {
        let lin = MultiPoly::var(spec, vars, Var::Y(j))
            .unwrap()
            .sub(&MultiPoly::one(spec, vars));
        while g.depends_on(Var::Y(j)) {
            match g.exact_div(&lin) {
                Ok(q) => g = q,
                Err(_) => break,
            }
        }
    }
    g
}

fn canonical_component(f: &MultiPoly, model: CoordModel) -> Option<MultiPoly> {
    let g = match model {
        CoordModel::Original => strip_excluded(f),
        CoordModel::Psi => f.clone(),
    };
    (!g.is_constant()).then(|| g.normalize())
}

fn describe(face: &Face, f: &MultiPoly) -> String {
    format!("{face} of V({f})")
}

/// Restriction of `V(f)` to `y_i = value`, as a polynomial in the remaining
/// variables; `None` when the restriction is empty.
fn restrict_component(
    f: &MultiPoly,
    model: CoordModel,
    i: usize,
    value: FaceValue,
) -> Result<Option<MultiPoly>, CycleError> {
    if !model.is_face(value) {
        return Err(CycleError::BadFace(value, model));
    }
    let spec = f.spec();
    let v = Var::Y(i);
    let g = match value {
        FaceValue::Zero => f.restrict(v, &spec.zero())?,
        FaceValue::One => f.restrict(v, &spec.one())?,
        FaceValue::Infinity => {
            let d = f.degree_in(v)?;
            f.coefficient_of(v, d)?.restrict(v, &spec.zero())?
        }
    };
    let face = Face(vec![(i, value)]);
    if g.is_zero() {
        return Err(CycleError::ImproperFaceIntersection(describe(&face, f)));
    }
    if model == CoordModel::Original {
        // A drop in y_j-degree means the closure contains {y_j = inf} over
        // this face.
        for j in 1..=f.vars().n {
            if j == i {
                continue;
            }
            let jj = if j > i { j - 1 } else { j };
            if g.degree_in(Var::Y(jj))? != f.degree_in(Var::Y(j))? {
                let mut pair = vec![(i, value), (j, FaceValue::Infinity)];
                pair.sort();
                return Err(CycleError::ImproperFaceIntersection(describe(&Face(pair), f)));
            }
        }
    }
    Ok(canonical_component(&g, model))
}

/// `true` when the closure of `V(f)` contains the face.
fn contains_face(f: &MultiPoly, face: &Face) -> Result<bool, CycleError> {
    let spec = f.spec();
    let mut g = f.clone();
    for &(i, value) in &face.0 {
        let v = Var::Y(i);
        g = match value {
            FaceValue::Zero => g.substitute(&[(v, spec.zero())])?,
            FaceValue::One => g.substitute(&[(v, spec.one())])?,
            FaceValue::Infinity => g.coefficient_of(v, f.degree_in(v)?)?,
        };
        if g.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

impl HypersurfaceCycle {
    pub fn new(spec: &FieldSpec, vars: VarSet, model: CoordModel) -> HypersurfaceCycle {
        HypersurfaceCycle {
            spec: spec.clone(),
            vars,
            model,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        spec: &FieldSpec,
        vars: VarSet,
        model: CoordModel,
        terms: impl IntoIterator<Item = (MultiPoly, i64)>,
    ) -> Result<HypersurfaceCycle, CycleError> {
        let mut z = HypersurfaceCycle::new(spec, vars, model);
        for (f, m) in terms {
            z.add_component(&f, m)?;
        }
        Ok(z)
    }

    /// `V(f)` with multiplicity 1.
    pub fn single(f: &MultiPoly, model: CoordModel) -> Result<HypersurfaceCycle, CycleError> {
        HypersurfaceCycle::from_terms(f.spec(), f.vars(), model, [(f.clone(), 1)])
    }

    pub fn add_component(&mut self, f: &MultiPoly, mult: i64) -> Result<(), CycleError> {
        if f.spec() != &self.spec || f.vars() != self.vars {
            return Err(CycleError::AmbientMismatch(format!(
                "component over {} with {:?}, cycle over {} with {:?}",
                f.spec(),
                f.vars(),
                self.spec,
                self.vars
            )));
        }
        if f.is_zero() {
            return Err(CycleError::ZeroComponent);
        }
        if mult == 0 {
            return Ok(());
        }
        if let Some(g) = canonical_component(f, self.model) {
            let slot = self.terms.entry(g.clone()).or_insert(0);
            *slot += mult;
            if *slot == 0 {
                self.terms.remove(&g);
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn model(&self) -> CoordModel {
        self.model
    }

    /// The cube dimension `n`.
    pub fn level(&self) -> usize {
        self.vars.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiPoly, i64)> {
        self.terms.iter().map(|(f, &m)| (f, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &HypersurfaceCycle) -> Result<(), CycleError> {
        if self.model != other.model {
            return Err(CycleError::WrongModel {
                expected: self.model,
                found: other.model,
            });
        }
        if self.spec != other.spec || self.vars != other.vars {
            return Err(CycleError::AmbientMismatch(format!(
                "{} {:?} vs {} {:?}",
                self.spec, self.vars, other.spec, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HypersurfaceCycle) -> Result<HypersurfaceCycle, CycleError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (f, m) in other.terms() {
            out.add_component(f, m)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> HypersurfaceCycle {
        let mut out = HypersurfaceCycle::new(&self.spec, self.vars, self.model);
        if k != 0 {
            out.terms = self.terms.iter().map(|(f, &m)| (f.clone(), m * k)).collect();
        }
        out
    }

    pub fn neg(&self) -> HypersurfaceCycle {
        self.scale(-1)
    }

    pub fn sub(&self, other: &HypersurfaceCycle) -> Result<HypersurfaceCycle, CycleError> {
        self.add(&other.neg())
    }

    /// The cycle without its degenerate components.
    pub fn drop_degenerate(&self) -> HypersurfaceCycle {
        let mut out = self.clone();
        out.terms.retain(|f, _| !is_degenerate(f));
        out
    }

    /// Restriction to the face `y_i = value`, one level down.
    pub fn face_restrict(&self, i: usize, value: FaceValue) -> Result<HypersurfaceCycle, CycleError> {
        if i == 0 || i > self.vars.n {
            return Err(CycleError::WrongLevel(format!("face index {i} at level {}", self.vars.n)));
        }
        let mut out = HypersurfaceCycle::new(&self.spec, self.vars.without(Var::Y(i)), self.model);
        for (f, m) in self.terms() {
            if let Some(g) = restrict_component(f, self.model, i, value)? {
                out.add_component(&g, m)?;
            }
        }
        Ok(out)
    }

    /// The cubical boundary modulo degenerate cycles.
    pub fn boundary(&self, opts: BoundaryOptions) -> Result<HypersurfaceCycle, CycleError> {
        let n = self.vars.n;
        if n == 0 {
            return Err(CycleError::WrongLevel("level-0 cycles have no boundary".into()));
        }
        let (plus, minus) = self.model.faces();
        let mut out = HypersurfaceCycle::new(&self.spec, self.vars.without(Var::Y(1)), self.model);
        for i in 1..=n {
            for value in [plus, minus] {
                let sign = face_sign(self.model, i, value, opts.convention);
                for (f, m) in self.terms() {
                    if let Some(g) = restrict_component(f, self.model, i, value)? {
                        out.add_component(&g, sign * m)?;
                    }
                }
            }
        }
        if n == 1 && opts.level0_degeneracy {
            return Ok(HypersurfaceCycle::new(&out.spec, out.vars, out.model));
        }
        Ok(out.drop_degenerate())
    }

    /// Checks proper intersection with every face of the cube.
    pub fn check_face_condition(&self) -> FaceReport {
        let mut report = FaceReport::default();
        let faces = Face::all(self.model, self.vars.n);
        for face in &faces {
            for (f, _) in self.terms() {
                match contains_face(f, face) {
                    Ok(false) => {}
                    Ok(true) => report.violations.push(describe(face, f)),
                    Err(e) => report.violations.push(format!("{}: {e}", describe(face, f))),
                }
            }
        }
        report
    }

    /// The same cycle in the other coordinate model, through
    /// `psi(y) = 1/(1 - y)` (ORIGINAL to PSI) or its inverse.
    pub fn convert(&self, target: CoordModel) -> Result<HypersurfaceCycle, CycleError> {
        if target == self.model {
            return Ok(self.clone());
        }
        let spec = &self.spec;
        let (one, zero, m1) = (spec.one(), spec.zero(), -&spec.one());
        // ORIGINAL y = (w - 1)/w in terms of the PSI coordinate w, and
        // PSI y = 1/(1 - w) in terms of the ORIGINAL coordinate w.
        let m: [&FieldElement; 4] = match self.model {
            CoordModel::Original => [&one, &m1, &one, &zero],
            CoordModel::Psi => [&zero, &one, &m1, &one],
        };
        let mut out = HypersurfaceCycle::new(spec, self.vars, target);
        for (f, mult) in self.terms() {
            let mut g = f.clone();
            for j in 1..=self.vars.n {
                let v = Var::Y(j);
                let before = g.degree_in(v)?;
                g = g.mobius(v, m)?;
                if g.degree_in(v)? != before {
                    return Err(CycleError::UndefinedAtPole(format!(
                        "V({f}) contains a face or the excluded locus in y{j}"
                    )));
                }
            }
            out.add_component(&g, mult)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    fn cyc(text: &str, r: usize, n: usize, model: CoordModel) -> HypersurfaceCycle {
        let f = MultiPoly::parse(text, &f7(), VarSet::new(r, n)).unwrap();
        HypersurfaceCycle::single(&f, model).unwrap()
    }

    #[test]
    fn generator_faces() {
        let z = cyc("1 - t1*t2*3*y1", 2, 1, CoordModel::Psi);
        assert!(z.face_restrict(1, FaceValue::Zero).unwrap().is_empty());
        let one = z.face_restrict(1, FaceValue::One).unwrap();
        assert_eq!(one, cyc("1 - 3*t1*t2", 2, 0, CoordModel::Psi));
    }

    #[test]
    fn bounding_identity() {
        let w = cyc("1 - t1*t2*(t1 + 3)*y1", 2, 1, CoordModel::Psi);
        let z = cyc("1 - t1*t2*(t1 + 3)", 2, 0, CoordModel::Psi);
        assert_eq!(w.boundary(BoundaryOptions::strict()).unwrap(), z);
        assert!(w.boundary(BoundaryOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn reciprocity_faces() {
        // a, b, c, d = 2, 3, 4, 6
        let w = cyc("1 - t1*t2*(2*y1*y2 + 3*y1 + 4*y2 + 6)", 2, 2, CoordModel::Psi);
        let f20 = w.face_restrict(2, FaceValue::Zero).unwrap();
        assert_eq!(f20, cyc("1 - t1*t2*(3*y1 + 6)", 2, 1, CoordModel::Psi));
        let b = w.boundary(BoundaryOptions::default()).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.boundary(BoundaryOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn degeneracy() {
        let vars = VarSet::new(2, 1);
        assert!(is_degenerate(&MultiPoly::parse("1 - t1*t2", &f7(), vars).unwrap()));
        assert!(!is_degenerate(&MultiPoly::parse("1 - t1*t2*y1", &f7(), vars).unwrap()));
        let vars = VarSet::new(2, 2);
        assert!(is_degenerate(&MultiPoly::parse("1 - t1*t2*y2", &f7(), vars).unwrap()));
    }

    #[test]
    fn face_condition() {
        let ok = cyc("1 - t1*t2*(y1 + y2)", 2, 2, CoordModel::Psi);
        assert!(ok.check_face_condition().passed());
        let bad = cyc("y1 - y2", 2, 2, CoordModel::Psi);
        let report = bad.check_face_condition();
        assert_eq!(report.first(), Some("{y1=0, y2=0} of V(y1 + 6*y2)"));
        assert!(bad.boundary(BoundaryOptions::default()).is_ok());
    }

    #[test]
    fn original_infinity_faces() {
        // In the ORIGINAL model y1*y2 - 2 meets {y1 = inf} along {y2 = 0}
        let z = cyc("y1*y2 - 2", 1, 2, CoordModel::Original);
        assert!(z.face_restrict(1, FaceValue::Infinity).is_ok());
        let z = cyc("y1*y2 + y1 - 2", 1, 2, CoordModel::Original);
        assert!(!z.check_face_condition().passed());
        // y1 - 1 cuts out the excluded locus and is dropped
        let e = cyc("(y1 - 1)*(t1 + 2)*y1 - (y1 - 1)", 1, 1, CoordModel::Original);
        assert_eq!(e, cyc("(t1 + 2)*y1 - 1", 1, 1, CoordModel::Original));
    }

    #[test]
    fn conversion_commutes_with_boundary() {
        let w = cyc("1 - t1*t2*(2*y1*y2 + 3*y1 + 5*y2 + 6)", 2, 2, CoordModel::Psi);
        let o = w.convert(CoordModel::Original).unwrap();
        assert_eq!(o.convert(CoordModel::Psi).unwrap(), w);
        let opts = BoundaryOptions::default();
        let lhs = w.boundary(opts).unwrap().convert(CoordModel::Original).unwrap();
        let rhs = o.boundary(opts).unwrap();
        assert_eq!(lhs, rhs);
    }
}
