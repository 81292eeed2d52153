use super::{ClosedPoint, CycleError, ModulusDatum, ParamCurve, ZeroCycle};
use crate::field::FieldSpec;
use crate::poly::{MultiPoly, Place, RatFunc, VarSet};

/// A closed immersion `C -> A^r`, where `C` is the zero set of `equations`
/// in `A^s` and the map is given by polynomial coordinates in `t1..ts`.
///
/// The map is assumed to be a closed immersion on `C`, so points push
/// forward with multiplicity 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    spec: FieldSpec,
    source_r: usize,
    coords: Vec<MultiPoly>,
    equations: Vec<MultiPoly>,
}

impl Embedding {
    pub fn new(
        spec: &FieldSpec,
        source_r: usize,
        coords: Vec<MultiPoly>,
        equations: Vec<MultiPoly>,
    ) -> Result<Embedding, CycleError> {
        let vars = VarSet::new(source_r, 0);
        for p in coords.iter().chain(&equations) {
            if p.spec() != spec || p.vars() != vars {
                return Err(CycleError::AmbientMismatch(format!(
                    "{p} is not a polynomial in t1..t{source_r} over {spec}"
                )));
            }
        }
        Ok(Embedding {
            spec: spec.clone(),
            source_r,
            coords,
            equations,
        })
    }

    /// The inclusion of the closed subset `{equations = 0}` of `A^r`.
    pub fn subvariety(spec: &FieldSpec, r: usize, equations: Vec<MultiPoly>) -> Result<Embedding, CycleError> {
        let vars = VarSet::new(r, 0);
        let coords = (1..=r)
            .map(|i| MultiPoly::var(spec, vars, crate::poly::Var::T(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Embedding::new(spec, r, coords, equations)
    }

    pub fn identity(spec: &FieldSpec, r: usize) -> Embedding {
        Embedding::subvariety(spec, r, vec![]).expect("coordinate functions")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn source_r(&self) -> usize {
        self.source_r
    }

    pub fn target_r(&self) -> usize {
        self.coords.len()
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    /// `self o inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Embedding) -> Result<Embedding, CycleError> {
        if inner.target_r() != self.source_r || inner.spec != self.spec {
            return Err(CycleError::AmbientMismatch(format!(
                "cannot compose A^{} -> A^{} after A^{} -> A^{}",
                self.source_r,
                self.target_r(),
                inner.source_r,
                inner.target_r()
            )));
        }
        let coords = self.coords.iter().map(|c| c.compose(&inner.coords)).collect();
        let mut equations = inner.equations.clone();
        equations.extend(self.equations.iter().map(|e| e.compose(&inner.coords)));
        Embedding::new(&self.spec, inner.source_r, coords, equations)
    }

    /// `true` when the image of `C` misses the monomial divisor `D`: every
    /// `t_i` dividing `D` pulls back to a function that some equation
    /// `m - c` (`m` a monomial, `c != 0`) makes invertible on `C`.
    pub fn certifies_disjoint(&self, d: &ModulusDatum) -> bool {
        let Some(exps) = d.exponents() else {
            return false;
        };
        let units: Vec<Vec<u32>> = self
            .equations
            .iter()
            .filter_map(|e| {
                let c = e.constant_term();
                let rest: Vec<_> = e.terms().filter(|(m, _)| m.iter().any(|&k| k > 0)).collect();
                (rest.len() == 1 && !c.is_zero()).then(|| rest[0].0.clone())
            })
            .collect();
        let invertible = |mono: &Vec<u32>| {
            mono.iter()
                .enumerate()
                .all(|(j, &k)| k == 0 || units.iter().any(|u| u[j] > 0))
        };
        exps.iter().enumerate().all(|(i, &m)| {
            m == 0
                || self.coords[i].num_terms() == 1
                    && self.coords[i].terms().all(|(mono, _)| invertible(mono))
        })
    }

    fn on_source(&self, p: &ClosedPoint) -> Result<bool, CycleError> {
        for e in &self.equations {
            if !e.embed(p.spec())?.eval(p.t(), &[])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn push_point(&self, p: &ClosedPoint) -> Result<ClosedPoint, CycleError> {
        if p.t().len() != self.source_r || !self.on_source(p)? {
            return Err(CycleError::BadPoint(format!("{p} does not lie on the source")));
        }
        let t = self
            .coords
            .iter()
            .map(|c| Ok(c.embed(p.spec())?.eval(p.t(), &[])?))
            .collect::<Result<Vec<_>, CycleError>>()?;
        Ok(p.with_t(t))
    }

    /// Push-forward of a 0-cycle, checking the image avoids `modulus`.
    pub fn push_zero_cycle(
        &self,
        z: &ZeroCycle,
        modulus: Option<&ModulusDatum>,
    ) -> Result<ZeroCycle, CycleError> {
        let mut out = ZeroCycle::new(z.base(), z.model(), self.target_r(), z.level());
        for (p, m) in z.terms() {
            out.add_point(self.push_point(p)?, m)?;
        }
        if let Some(d) = modulus {
            if !super::check_modulus_zerocycle(&out, d)? {
                return Err(CycleError::ModulusNotAvoided(out.to_string()));
            }
        }
        Ok(out)
    }

    /// Push-forward of a parametric curve lying on the source, checking that
    /// its image avoids `modulus`.
    pub fn push_curve(
        &self,
        c: &ParamCurve,
        modulus: Option<&ModulusDatum>,
    ) -> Result<ParamCurve, CycleError> {
        if c.r() != self.source_r {
            return Err(CycleError::AmbientMismatch(format!("curve {c} on A^{}", c.r())));
        }
        for e in &self.equations {
            if !e.eval_ratfuncs(c.base()).is_zero() {
                return Err(CycleError::BadPoint(format!("curve {c} leaves the source ({e} != 0)")));
            }
        }
        let base: Vec<RatFunc> = self.coords.iter().map(|p| p.eval_ratfuncs(c.base())).collect();
        let out = c.with_base(base);
        if let Some(d) = modulus {
            curve_avoids(&out, d)?;
        }
        Ok(out)
    }
}

/// Fails when the curve meets `{D = 0}` at a point where its base
/// coordinates are finite.
pub(crate) fn curve_avoids(c: &ParamCurve, d: &ModulusDatum) -> Result<(), CycleError> {
    let pulled = d.divisor().eval_ratfuncs(c.base());
    if pulled.is_zero() {
        return Err(CycleError::ModulusNotAvoided(format!("{c} lies in {{{} = 0}}", d.divisor())));
    }
    let mut num = pulled.num().clone();
    for b in c.base() {
        loop {
            let g = num.gcd(b.den());
            if g.is_constant() {
                break;
            }
            num = num.exact_div(&g).expect("gcd divides");
        }
    }
    if !num.is_constant() {
        return Err(CycleError::ModulusNotAvoided(format!(
            "{c} meets {{{} = 0}} at the zeros of {}",
            d.divisor(),
            num.display_var("t")
        )));
    }
    let finite_at_infinity = c
        .base()
        .iter()
        .all(|b| b.is_zero() || Place::Infinity.valuation(b) >= 0);
    if finite_at_infinity && Place::Infinity.valuation(&pulled) > 0 {
        return Err(CycleError::ModulusNotAvoided(format!(
            "{c} meets {{{} = 0}} at t = inf",
            d.divisor()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{Convention, CoordModel};
    use crate::poly::parse_ratfunc;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn hyperbola_point_and_curve() {
        let k = f7();
        let vars = VarSet::new(2, 0);
        let h = MultiPoly::parse("t1*t2 - 6", &k, vars).unwrap();
        let emb = Embedding::subvariety(&k, 2, vec![h]).unwrap();
        let d = ModulusDatum::monomial(&k, &[2, 3]).unwrap();
        assert!(emb.certifies_disjoint(&d));
        let p = ClosedPoint::new(&k, vec![k.from_i64(2), k.from_i64(3)], vec![]).unwrap();
        assert_eq!(emb.push_point(&p).unwrap(), p);
        let bad = ClosedPoint::new(&k, vec![k.from_i64(2), k.from_i64(2)], vec![]).unwrap();
        assert!(emb.push_point(&bad).is_err());

        let rf = |s: &str| parse_ratfunc(s, &k).unwrap();
        let c = ParamCurve::new(&k, CoordModel::Original, vec![rf("t"), rf("6/t")], vec![rf("t - 2")]).unwrap();
        let pushed = emb.push_curve(&c, Some(&d)).unwrap();
        assert_eq!(
            pushed.boundary(Convention::ModelDefault).unwrap(),
            emb.push_zero_cycle(&c.boundary(Convention::ModelDefault).unwrap(), Some(&d)).unwrap()
        );
        let line = ParamCurve::new(&k, CoordModel::Original, vec![rf("t"), rf("t + 1")], vec![rf("t - 2")]).unwrap();
        let id = Embedding::identity(&k, 2);
        assert!(matches!(id.push_curve(&line, Some(&d)), Err(CycleError::ModulusNotAvoided(_))));
    }

    #[test]
    fn composition() {
        let k = f7();
        let v1 = VarSet::new(1, 0);
        let v2 = VarSet::new(2, 0);
        // s -> (s, 2) then (a, b) -> (a, b, a*b)
        let inner = Embedding::new(
            &k,
            1,
            vec![MultiPoly::parse("t1", &k, v1).unwrap(), MultiPoly::parse("2", &k, v1).unwrap()],
            vec![],
        )
        .unwrap();
        let outer = Embedding::new(
            &k,
            2,
            ["t1", "t2", "t1*t2"].iter().map(|s| MultiPoly::parse(s, &k, v2).unwrap()).collect(),
            vec![],
        )
        .unwrap();
        let comp = outer.compose(&inner).unwrap();
        let p = ClosedPoint::new(&k, vec![k.from_i64(5)], vec![]).unwrap();
        assert_eq!(
            comp.push_point(&p).unwrap(),
            outer.push_point(&inner.push_point(&p).unwrap()).unwrap()
        );
    }
}
