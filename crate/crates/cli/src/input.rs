//! Reading cycles, curves, symbols and certificates from files or inline
//! text.

use std::fs;

use chowmod::cycle::{ClosedPoint, CoordModel, HypersurfaceCycle, ModulusDatum, ParamCurve, ZeroCycle};
use chowmod::field::{FieldElement, FieldSpec};
use chowmod::milnor::{FunctionKElement, KElement};
use chowmod::poly::{parse_poly, parse_ratfunc, MultiPoly, RatFunc, VarSet};
use chowmod::wire::{parse_element, parse_field, CurveJson, CycleJson, ElementJson, PointJson, ZeroCycleJson};
use serde_json::Value;

use crate::CliError;

pub struct Source<'a> {
    pub file: Option<&'a str>,
    pub inline: Option<&'a str>,
}

pub enum Text {
    Json(Value),
    Inline(String),
}

impl Source<'_> {
    pub fn read(&self) -> Result<Text, CliError> {
        match (self.file, self.inline) {
            (Some(_), Some(_)) => Err(CliError::usage("give either --file or --inline, not both")),
            (Some(path), None) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
                let value = serde_json::from_str(&text).map_err(|e| CliError::new("Json", format!("{path}: {e}")))?;
                Ok(Text::Json(value))
            }
            (None, Some(s)) => Ok(Text::Inline(s.to_string())),
            (None, None) => Err(CliError::usage("an input is required: --file PATH or --inline TEXT")),
        }
    }

    pub fn read_json(&self) -> Result<Value, CliError> {
        match self.read()? {
            Text::Json(v) => Ok(v),
            Text::Inline(s) => serde_json::from_str(&s).map_err(|e| CliError::new("Json", e.to_string())),
        }
    }
}

pub fn decode<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::new("Json", format!("not a {what}: {e}")))
}

pub fn field(text: Option<&str>) -> Result<FieldSpec, CliError> {
    let text = text.ok_or_else(|| CliError::usage("--field is required for inline input"))?;
    Ok(parse_field(text).map_err(chowmod::Error::from)?)
}

pub fn model(text: Option<&str>, default: CoordModel) -> Result<CoordModel, CliError> {
    match text.map(str::to_ascii_lowercase).as_deref() {
        None => Ok(default),
        Some("psi") => Ok(CoordModel::Psi),
        Some("original") => Ok(CoordModel::Original),
        Some(other) => Err(CliError::usage(format!("unknown model {other:?}, expected original or psi"))),
    }
}

pub fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

pub fn exponents(text: &str) -> Result<Vec<u32>, CliError> {
    split_list(text)
        .into_iter()
        .map(|s| s.parse::<u32>().map_err(|_| CliError::usage(format!("bad modulus exponent {s:?}"))))
        .collect()
}

pub fn elements(k: &FieldSpec, text: &str) -> Result<Vec<FieldElement>, CliError> {
    split_list(text)
        .into_iter()
        .map(|s| Ok(parse_element(k, s).map_err(chowmod::Error::from)?))
        .collect()
}

pub fn ratfuncs(k: &FieldSpec, text: &str) -> Result<Vec<RatFunc>, CliError> {
    split_list(text)
        .into_iter()
        .map(|s| Ok(parse_ratfunc(s, k).map_err(chowmod::Error::from)?))
        .collect()
}

/// Largest index `i` of a variable `<letter>i` in the text.
fn max_index(text: &str, letter: char) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut best = 0;
    for (i, &c) in chars.iter().enumerate() {
        let after_ident = i > 0 && (chars[i - 1].is_ascii_alphanumeric() || chars[i - 1] == '_');
        if c != letter || after_ident {
            continue;
        }
        let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
        if let Ok(k) = digits.parse::<usize>() {
            best = best.max(k);
        }
    }
    best
}

/// Options that complete an inline hypersurface cycle.
pub struct CycleFlags<'a> {
    pub field: Option<&'a str>,
    pub model: Option<&'a str>,
    pub modulus: Option<&'a str>,
    pub r: Option<usize>,
    pub n: Option<usize>,
}

pub enum AnyCycle {
    Hyper(HypersurfaceCycle, Option<ModulusDatum>),
    Zero(ZeroCycle, Option<ModulusDatum>),
    Curve(ParamCurve),
}

impl AnyCycle {
    pub fn hyper(self) -> Result<(HypersurfaceCycle, Option<ModulusDatum>), CliError> {
        match self {
            AnyCycle::Hyper(z, d) => Ok((z, d)),
            _ => Err(CliError::usage("expected a hypersurface cycle")),
        }
    }
}

fn modulus_override(
    flags: &CycleFlags,
    spec: &FieldSpec,
    r: usize,
    current: Option<ModulusDatum>,
) -> Result<Option<ModulusDatum>, CliError> {
    let Some(m) = flags.modulus else { return Ok(current) };
    let e = exponents(m)?;
    if e.len() != r {
        return Err(CliError::usage(format!("--modulus has {} exponents, the cycle lives on A^{r}", e.len())));
    }
    Ok(Some(ModulusDatum::monomial(spec, &e).map_err(chowmod::Error::from)?))
}

/// A cycle from JSON (hypersurface, 0-cycle or curve, told apart by their
/// keys) or from inline text `m1*(f1) + ...` given as `f` or `f1; f2`.
pub fn cycle(src: &Source, flags: &CycleFlags) -> Result<AnyCycle, CliError> {
    let wire = |e: chowmod::wire::WireError| CliError::from(chowmod::Error::from(e));
    match src.read()? {
        Text::Json(v) if v.get("points").is_some() => {
            let j: ZeroCycleJson = decode(v, "0-cycle")?;
            let z = j.to_zero_cycle().map_err(wire)?;
            let d = modulus_override(flags, z.base(), z.r(), j.to_modulus().map_err(wire)?)?;
            Ok(AnyCycle::Zero(z, d))
        }
        Text::Json(v) if v.get("components").is_some() => {
            let j: CurveJson = decode(v, "curve")?;
            Ok(AnyCycle::Curve(j.to_curve().map_err(wire)?))
        }
        Text::Json(v) => {
            let j: CycleJson = decode(v, "cycle")?;
            let z = j.to_cycle().map_err(wire)?;
            let d = modulus_override(flags, z.spec(), z.vars().r, j.to_modulus().map_err(wire)?)?;
            Ok(AnyCycle::Hyper(z, d))
        }
        Text::Inline(s) => {
            let k = field(flags.field)?;
            let from_modulus = flags.modulus.map(|m| exponents(m).map(|e| e.len())).transpose()?;
            let r = flags.r.or(from_modulus).unwrap_or_else(|| max_index(&s, 't'));
            let n = flags.n.unwrap_or_else(|| max_index(&s, 'y'));
            let vars = VarSet::new(r, n);
            let mut z = HypersurfaceCycle::new(&k, vars, model(flags.model, CoordModel::Psi)?);
            for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let (mult, poly) = split_mult(part)?;
                let f: MultiPoly = parse_poly(poly, &k, vars).map_err(chowmod::Error::from)?;
                z.add_component(&f, mult).map_err(chowmod::Error::from)?;
            }
            let d = modulus_override(flags, &k, r, None)?;
            Ok(AnyCycle::Hyper(z, d))
        }
    }
}

/// `"3: f"` is three copies of `V(f)`; a bare `f` is one copy.
fn split_mult(part: &str) -> Result<(i64, &str), CliError> {
    match part.split_once(':') {
        Some((m, f)) => {
            let m = m.trim().parse::<i64>().map_err(|_| CliError::usage(format!("bad multiplicity in {part:?}")))?;
            Ok((m, f.trim()))
        }
        None => Ok((1, part)),
    }
}

/// A closed point from JSON (`PointJson`, or a 0-cycle with one point) or
/// inline `t1, ..., tr; y1, ..., yn`.
pub fn point(src: &Source, field_flag: Option<&str>) -> Result<(ClosedPoint, Option<ModulusDatum>), CliError> {
    let wire = |e: chowmod::wire::WireError| CliError::from(chowmod::Error::from(e));
    match src.read()? {
        Text::Json(v) if v.get("points").is_some() => {
            let j: ZeroCycleJson = decode(v, "0-cycle")?;
            let base = parse_field(&j.field).map_err(wire)?;
            let [p] = j.points.as_slice() else {
                return Err(CliError::usage("the 0-cycle must consist of a single point"));
            };
            if p.mult != 1 {
                return Err(CliError::usage("the point must have multiplicity 1"));
            }
            Ok((p.to_point(&base).map_err(wire)?, j.to_modulus().map_err(wire)?))
        }
        Text::Json(v) => {
            let base = field(field_flag)?;
            let j: PointJson = decode(v, "point")?;
            Ok((j.to_point(&base).map_err(wire)?, None))
        }
        Text::Inline(s) => {
            let k = field(field_flag)?;
            let (t, y) = s.split_once(';').unwrap_or((&s, ""));
            let p = ClosedPoint::new(&k, elements(&k, t)?, elements(&k, y)?).map_err(chowmod::Error::from)?;
            Ok((p, None))
        }
    }
}

/// A Milnor K element over a field: JSON `ElementJson`, or inline entries
/// `a, b, c` for the single symbol `{a, b, c}`.
pub fn k_element(src: &Source, field_flag: Option<&str>) -> Result<KElement, CliError> {
    match src.read()? {
        Text::Json(v) => {
            let j: ElementJson = decode(v, "symbol element")?;
            Ok(j.to_k_element().map_err(chowmod::Error::from)?)
        }
        Text::Inline(s) => {
            let k = field(field_flag)?;
            Ok(KElement::symbol(&k, elements(&k, &s)?).map_err(chowmod::Error::from)?)
        }
    }
}

/// A Milnor K element over `k(t)`, in the same two forms.
pub fn function_element(src: &Source, field_flag: Option<&str>) -> Result<FunctionKElement, CliError> {
    match src.read()? {
        Text::Json(v) => {
            let j: ElementJson = decode(v, "symbol element")?;
            Ok(j.to_function_element().map_err(chowmod::Error::from)?)
        }
        Text::Inline(s) => {
            let k = field(field_flag)?;
            Ok(FunctionKElement::symbol(&k, ratfuncs(&k, &s)?).map_err(chowmod::Error::from)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_indices() {
        assert_eq!(max_index("1 - t1*t2*(3*y1+2)", 't'), 2);
        assert_eq!(max_index("1 - t1*t2*(3*y1+2)", 'y'), 1);
        assert_eq!(max_index("t", 't'), 0);
        assert_eq!(max_index("st3 + t12", 't'), 12);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(split_mult("3: 1 - t1").unwrap(), (3, "1 - t1"));
        assert_eq!(split_mult("1 - t1").unwrap(), (1, "1 - t1"));
        assert!(split_mult("x: 1").is_err());
    }
}
