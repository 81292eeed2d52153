//! JSON forms of fields, moduli, cycles, points, curves, embeddings,
//! symbols and places.
//!
//! Fields are written as descriptors: `Q`, `Fp:7`, `Fq:9` (the standard
//! model), `Fq:3:u^2 + 1`, or `Q:u^2 - 2` for a number field. Field elements,
//! polynomials and rational functions are written in the text grammar of
//! [`crate::poly`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::{
    ClosedPoint, CoordModel, CycleError, Embedding, HypersurfaceCycle, ModulusDatum, ParamCurve, ZeroCycle,
};
use crate::field::{FieldElement, FieldError, FieldSpec, UniPoly};
use crate::milnor::{Entry, FunctionKElement, KElement, MilnorElement, MilnorError};
use crate::poly::{parse_poly, parse_ratfunc, MultiPoly, Place, PolyError, RatFunc, VarSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("bad field descriptor {0:?}")]
    BadField(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
}

pub fn field_descriptor(spec: &FieldSpec) -> String {
    let p = spec.characteristic();
    match (p, spec.modulus_poly()) {
        (0, None) => "Q".into(),
        (0, Some(mu)) => format!("Q:{}", mu.display_var("u")),
        (_, None) => format!("Fp:{p}"),
        (_, Some(mu)) => format!("Fq:{p}:{}", mu.display_var("u")),
    }
}

fn parse_modulus_poly(base: &FieldSpec, text: &str) -> Result<UniPoly, WireError> {
    let f = parse_ratfunc(&text.replace('u', "t"), base)?;
    match f.den().is_constant() {
        true => Ok(f.num().scale(&f.den().coeff(0).inv()?)),
        false => Err(WireError::BadField(text.into())),
    }
}

pub fn parse_field(text: &str) -> Result<FieldSpec, WireError> {
    let text = text.trim();
    let bad = || WireError::BadField(text.into());
    let parts: Vec<&str> = text.splitn(3, ':').collect();
    match parts.as_slice() {
        ["Q"] => Ok(FieldSpec::rationals()),
        ["Q", mu] => {
            let q = FieldSpec::rationals();
            Ok(FieldSpec::extension(&q, &parse_modulus_poly(&q, mu)?)?)
        }
        ["Fp", p] => Ok(FieldSpec::prime(p.trim().parse().map_err(|_| bad())?)?),
        ["Fq", q] => Ok(FieldSpec::standard(q.trim().parse().map_err(|_| bad())?)?),
        ["Fq", p, mu] => {
            let base = FieldSpec::prime(p.trim().parse().map_err(|_| bad())?)?;
            Ok(FieldSpec::extension(&base, &parse_modulus_poly(&base, mu)?)?)
        }
        _ => Err(bad()),
    }
}

/// Parses an element of `spec`, e.g. `3`, `1/2` or `2*u + 1`.
pub fn parse_element(spec: &FieldSpec, text: &str) -> Result<FieldElement, WireError> {
    parse_poly(text, spec, VarSet::new(0, 0))?
        .as_constant()
        .ok_or_else(|| WireError::Malformed(format!("{text} is not a constant")))
}

fn parse_elements(spec: &FieldSpec, v: &[String]) -> Result<Vec<FieldElement>, WireError> {
    v.iter().map(|s| parse_element(spec, s)).collect()
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(T::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
}

impl ModulusJson {
    pub fn from_datum(d: &ModulusDatum) -> ModulusJson {
        match d.exponents() {
            Some(e) => ModulusJson {
                exponents: Some(e.to_vec()),
                divisor: None,
            },
            None => ModulusJson {
                exponents: None,
                divisor: Some(d.divisor().to_string()),
            },
        }
    }

    pub fn to_datum(&self, spec: &FieldSpec, r: usize) -> Result<ModulusDatum, WireError> {
        let d = match (&self.exponents, &self.divisor) {
            (Some(e), None) => ModulusDatum::monomial(spec, e)?,
            (None, Some(p)) => ModulusDatum::from_poly(&parse_poly(p, spec, VarSet::new(r, 0))?)?,
            _ => return Err(WireError::Malformed("modulus needs exactly one of exponents, divisor".into())),
        };
        if d.r() != r {
            return Err(WireError::Malformed(format!("modulus on A^{}, cycle on A^{r}", d.r())));
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub mult: i64,
    pub poly: String,
}

/// `{"field", "model", "r", "n", "modulus"?, "terms": [{"mult", "poly"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub field: String,
    pub model: CoordModel,
    pub r: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<ModulusJson>,
    pub terms: Vec<TermJson>,
}

impl CycleJson {
    pub fn from_cycle(z: &HypersurfaceCycle, modulus: Option<&ModulusDatum>) -> CycleJson {
        CycleJson {
            field: field_descriptor(z.spec()),
            model: z.model(),
            r: z.vars().r,
            n: z.vars().n,
            modulus: modulus.map(ModulusJson::from_datum),
            terms: z
                .terms()
                .map(|(f, mult)| TermJson {
                    mult,
                    poly: f.to_string(),
                })
                .collect(),
        }
    }

    pub fn spec(&self) -> Result<FieldSpec, WireError> {
        parse_field(&self.field)
    }

    pub fn to_cycle(&self) -> Result<HypersurfaceCycle, WireError> {
        let spec = self.spec()?;
        let vars = VarSet::new(self.r, self.n);
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((parse_poly(&t.poly, &spec, vars)?, t.mult)))
            .collect::<Result<Vec<(MultiPoly, i64)>, WireError>>()?;
        Ok(HypersurfaceCycle::from_terms(&spec, vars, self.model, terms)?)
    }

    pub fn to_modulus(&self) -> Result<Option<ModulusDatum>, WireError> {
        let spec = self.spec()?;
        self.modulus.as_ref().map(|m| m.to_datum(&spec, self.r)).transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    #[serde(default = "one")]
    pub mult: i64,
    /// Residue field, when it differs from the base field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub t: Vec<String>,
    pub y: Vec<String>,
}

fn one() -> i64 {
    1
}

impl PointJson {
    pub fn from_point(p: &ClosedPoint, base: &FieldSpec, mult: i64) -> PointJson {
        PointJson {
            mult,
            field: (p.spec() != base).then(|| field_descriptor(p.spec())),
            t: strings(p.t()),
            y: strings(p.y()),
        }
    }

    pub fn to_point(&self, base: &FieldSpec) -> Result<ClosedPoint, WireError> {
        let spec = match &self.field {
            Some(f) => parse_field(f)?,
            None => base.clone(),
        };
        Ok(ClosedPoint::new(&spec, parse_elements(&spec, &self.t)?, parse_elements(&spec, &self.y)?)?)
    }
}

/// `{"field", "model", "r", "n", "modulus"?, "points": [{"t", "y"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCycleJson {
    pub field: String,
    pub model: CoordModel,
    pub r: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<ModulusJson>,
    pub points: Vec<PointJson>,
}

impl ZeroCycleJson {
    pub fn from_zero_cycle(z: &ZeroCycle, modulus: Option<&ModulusDatum>) -> ZeroCycleJson {
        ZeroCycleJson {
            field: field_descriptor(z.base()),
            model: z.model(),
            r: z.r(),
            n: z.level(),
            modulus: modulus.map(ModulusJson::from_datum),
            points: z.terms().map(|(p, m)| PointJson::from_point(p, z.base(), m)).collect(),
        }
    }

    pub fn to_zero_cycle(&self) -> Result<ZeroCycle, WireError> {
        let base = parse_field(&self.field)?;
        let mut z = ZeroCycle::new(&base, self.model, self.r, self.n);
        for p in &self.points {
            z.add_point(p.to_point(&base)?, p.mult)?;
        }
        Ok(z)
    }

    pub fn to_modulus(&self) -> Result<Option<ModulusDatum>, WireError> {
        let spec = parse_field(&self.field)?;
        self.modulus.as_ref().map(|m| m.to_datum(&spec, self.r)).transpose()
    }
}

/// `{"field", "model", "base": [..], "components": [..]}`, functions of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub field: String,
    pub model: CoordModel,
    pub base: Vec<String>,
    pub components: Vec<String>,
}

impl CurveJson {
    pub fn from_curve(c: &ParamCurve) -> CurveJson {
        CurveJson {
            field: field_descriptor(c.spec()),
            model: c.model(),
            base: strings(c.base()),
            components: strings(c.components()),
        }
    }

    pub fn to_curve(&self) -> Result<ParamCurve, WireError> {
        let spec = parse_field(&self.field)?;
        let parse = |v: &[String]| -> Result<Vec<RatFunc>, WireError> {
            v.iter().map(|s| Ok(parse_ratfunc(s, &spec)?)).collect()
        };
        Ok(ParamCurve::new(&spec, self.model, parse(&self.base)?, parse(&self.components)?)?)
    }
}

/// A closed immersion `{equations = 0} -> A^r` given by coordinates in
/// `t1..t(source_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub field: String,
    pub source_r: usize,
    pub coords: Vec<String>,
    pub equations: Vec<String>,
}

impl EmbeddingJson {
    pub fn from_embedding(e: &Embedding) -> EmbeddingJson {
        EmbeddingJson {
            field: field_descriptor(e.spec()),
            source_r: e.source_r(),
            coords: strings(e.coords()),
            equations: strings(e.equations()),
        }
    }

    pub fn to_embedding(&self) -> Result<Embedding, WireError> {
        let spec = parse_field(&self.field)?;
        let vars = VarSet::new(self.source_r, 0);
        let parse = |v: &[String]| -> Result<Vec<MultiPoly>, WireError> {
            v.iter().map(|s| Ok(parse_poly(s, &spec, vars)?)).collect()
        };
        Ok(Embedding::new(&spec, self.source_r, parse(&self.coords)?, parse(&self.equations)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTermJson {
    pub mult: i64,
    pub entries: Vec<String>,
}

/// A Milnor K-theory element: `{"field", "degree", "terms": [{"mult", "entries"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub field: String,
    pub degree: usize,
    pub terms: Vec<SymbolTermJson>,
}

impl ElementJson {
    pub fn from_element<E: Entry>(e: &MilnorElement<E>) -> ElementJson {
        ElementJson {
            field: field_descriptor(e.spec()),
            degree: e.degree(),
            terms: e
                .terms()
                .map(|(s, mult)| SymbolTermJson {
                    mult,
                    entries: strings(s),
                })
                .collect(),
        }
    }

    fn build<E: Entry>(
        &self,
        parse: impl Fn(&FieldSpec, &str) -> Result<E, WireError>,
    ) -> Result<MilnorElement<E>, WireError> {
        let spec = parse_field(&self.field)?;
        let mut out = MilnorElement::zero(&spec, self.degree);
        for t in &self.terms {
            let entries = t.entries.iter().map(|s| parse(&spec, s)).collect::<Result<Vec<E>, _>>()?;
            out.add_symbol(entries, t.mult)?;
        }
        Ok(out)
    }

    pub fn to_k_element(&self) -> Result<KElement, WireError> {
        self.build(parse_element)
    }

    pub fn to_function_element(&self) -> Result<FunctionKElement, WireError> {
        self.build(|spec, s| Ok(parse_ratfunc(s, spec)?))
    }
}

/// `{"pi": "t^2 + 1"}` or `{"infinity": true}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceJson {
    Finite { pi: String },
    Infinity { infinity: bool },
}

impl PlaceJson {
    pub fn from_place(v: &Place) -> PlaceJson {
        match v {
            Place::Finite(pi) => PlaceJson::Finite {
                pi: pi.display_var("t").to_string(),
            },
            Place::Infinity => PlaceJson::Infinity { infinity: true },
        }
    }

    pub fn to_place(&self, spec: &FieldSpec) -> Result<Place, WireError> {
        match self {
            PlaceJson::Infinity { infinity: true } => Ok(Place::Infinity),
            PlaceJson::Infinity { infinity: false } => Err(WireError::Malformed("infinity: false".into())),
            PlaceJson::Finite { pi } => {
                let f = parse_ratfunc(pi, spec)?;
                if !f.den().is_constant() {
                    return Err(WireError::Malformed(format!("{pi} is not a polynomial")));
                }
                Ok(Place::finite(f.num().scale(&f.den().coeff(0).inv()?))?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors_round_trip() {
        for d in ["Q", "Fp:7", "Fq:3:u^2 + 1", "Q:u^2 - 2"] {
            assert_eq!(field_descriptor(&parse_field(d).unwrap()), d);
        }
        assert_eq!(parse_field("Fq:9").unwrap(), FieldSpec::standard(9).unwrap());
        assert!(parse_field("Fp:6").is_err());
        assert!(parse_field("F7").is_err());
    }

    #[test]
    fn cycle_json_round_trip() {
        let k = FieldSpec::prime(7).unwrap();
        let f = parse_poly("1 - t1*t2*(3*y1 + 2)", &k, VarSet::new(2, 1)).unwrap();
        let z = HypersurfaceCycle::single(&f, CoordModel::Psi).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let j = CycleJson::from_cycle(&z, Some(&d));
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with(r#"{"field":"Fp:7","model":"PSI","r":2,"n":1,"modulus":{"exponents":[1,1]},"terms":"#));
        let back: CycleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_cycle().unwrap(), z);
        assert_eq!(back.to_modulus().unwrap(), Some(d));
    }

    #[test]
    fn points_curves_symbols_places() {
        let f9 = FieldSpec::standard(9).unwrap();
        let f3 = f9.base();
        let u = f9.generator_u().unwrap();
        let mut z = ZeroCycle::new(&f3, CoordModel::Original, 1, 1);
        z.add_point(ClosedPoint::new(&f9, vec![u.clone()], vec![f9.from_i64(2)]).unwrap(), 1).unwrap();
        let j = ZeroCycleJson::from_zero_cycle(&z, None);
        assert_eq!(j.to_zero_cycle().unwrap(), z);

        let k = FieldSpec::prime(5).unwrap();
        let c = ParamCurve::new(
            &k,
            CoordModel::Original,
            vec![parse_ratfunc("t", &k).unwrap()],
            vec![parse_ratfunc("(t + 1)/(t^2 + 2)", &k).unwrap()],
        )
        .unwrap();
        assert_eq!(CurveJson::from_curve(&c).to_curve().unwrap(), c);

        let e = KElement::symbol(&f9, vec![u.clone(), f9.from_i64(2)]).unwrap();
        assert_eq!(ElementJson::from_element(&e).to_k_element().unwrap(), e);

        let v = Place::finite(UniPoly::from_i64s(&k, &[2, 0, 1])).unwrap();
        let pj = PlaceJson::from_place(&v);
        assert_eq!(serde_json::to_string(&pj).unwrap(), r#"{"pi":"t^2 + 2"}"#);
        assert_eq!(pj.to_place(&k).unwrap(), v);
        let inf = serde_json::to_string(&PlaceJson::from_place(&Place::Infinity)).unwrap();
        assert_eq!(inf, r#"{"infinity":true}"#);
    }
}
