use serde::{Deserialize, Serialize};

use super::{find, Claim, ConventionJson, Outcome, Transcript, TranscriptEntry, Witness, WitnessCertificate, WitnessError};
use crate::cycle::{ClosedPoint, Convention, CoordModel, Embedding, ModulusDatum, ParamCurve, ZeroCycle};
use crate::field::{FieldElement, FieldSpec};
use crate::milnor::{phi_point, symbol_reduce, KElement, ReduceMode};
use crate::poly::{MultiPoly, RatFunc, Var, VarSet};
use crate::wire::{field_descriptor, parse_element, parse_field, CurveJson, ElementJson, EmbeddingJson, ModulusJson, PointJson};

/// Whether the point sits on `A^r` itself or on `X x A^r` over a rational
/// base point `x` of `X = A^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    Plain,
    ProductBase { base: Vec<String> },
}

/// The modulus with coefficients in the residue field of the point.
fn modulus_over(d: &ModulusDatum, l: &FieldSpec) -> Result<ModulusDatum, WitnessError> {
    Ok(ModulusDatum::from_poly(&d.divisor().embed(l)?)?)
}

/// `{t1 t2 = c1 c2, t3 = c3, ..., tr = cr}` inside `A^r`.
fn hyperbola(p: &ClosedPoint) -> Result<Embedding, WitnessError> {
    let l = p.spec();
    let r = p.t().len();
    let vars = VarSet::new(r, 0);
    let var = |i| MultiPoly::var(l, vars, Var::T(i));
    let c = |x: &FieldElement| MultiPoly::constant(l, vars, x.clone());
    let t = p.t();
    let mut eqs = vec![var(1)?.mul(&var(2)?).sub(&c(&(&t[0] * &t[1])))];
    for (i, ci) in t.iter().enumerate().skip(2) {
        eqs.push(var(i + 1)?.sub(&c(ci)));
    }
    Ok(Embedding::subvariety(l, r, eqs)?)
}

/// `s -> (s, c1 c2 / s, c3, ..., cr; s - c1)`.
fn graph_curve(p: &ClosedPoint) -> Result<ParamCurve, WitnessError> {
    let l = p.spec();
    let t = p.t();
    let s = RatFunc::param(l);
    let k = |x: FieldElement| RatFunc::constant(x);
    let mut base = vec![s.clone(), k(&t[0] * &t[1]).div(&s)?];
    base.extend(t[2..].iter().cloned().map(k));
    let comp = s.sub(&k(t[0].clone()));
    Ok(ParamCurve::new(l, CoordModel::Original, base, vec![comp])?)
}

/// `t -> (x, t)` from `A^r` into `A^(s+r)`.
fn base_inclusion(x: &[FieldElement], r: usize, l: &FieldSpec) -> Result<Embedding, WitnessError> {
    let vars = VarSet::new(r, 0);
    let mut coords: Vec<MultiPoly> = x.iter().map(|c| MultiPoly::constant(l, vars, c.clone())).collect();
    for i in 1..=r {
        coords.push(MultiPoly::var(l, vars, Var::T(i))?);
    }
    Ok(Embedding::new(l, r, coords, vec![])?)
}

/// `D` pulled back along the projection `A^(s+r) -> A^r`.
fn product_modulus(d: &ModulusDatum, s: usize) -> Result<ModulusDatum, WitnessError> {
    let r = d.r();
    let shifted = d.divisor().reindex(VarSet::new(s + r, 0), |v| match v {
        Var::T(i) => Var::T(i + s),
        other => other,
    })?;
    Ok(ModulusDatum::from_poly(&shifted)?)
}

fn base_point(variant: &Variant, k: &FieldSpec, l: &FieldSpec) -> Result<Option<Vec<FieldElement>>, WitnessError> {
    match variant {
        Variant::Plain => Ok(None),
        Variant::ProductBase { base } => base
            .iter()
            .map(|s| Ok(parse_element(k, s)?.embed(l)?))
            .collect::<Result<Vec<_>, WitnessError>>()
            .map(Some),
    }
}

fn precheck(p: &ClosedPoint, d: &ModulusDatum) -> Result<(), WitnessError> {
    let r = p.t().len();
    if r < 2 || d.r() != r {
        return Err(WitnessError::WrongAmbient(format!(
            "the point {p} needs r >= 2 and a modulus on A^{r}"
        )));
    }
    if d.exponents().is_none() {
        return Err(WitnessError::WrongAmbient(format!("{} is not a monomial modulus", d.divisor())));
    }
    if !modulus_over(d, p.spec())?.avoids(p.t())? {
        return Err(WitnessError::PointOnModulus(p.to_string()));
    }
    if let Some(y) = p.y().iter().find(|y| y.is_zero() || y.is_one()) {
        return Err(WitnessError::Inadmissible(format!("cube coordinate {y} of {p} is 0 or 1")));
    }
    Ok(())
}

pub(super) fn checks(
    field: &str,
    modulus: &ModulusJson,
    point: &PointJson,
    variant: &Variant,
    witnesses: &[Witness],
) -> Result<(Vec<TranscriptEntry>, ConventionJson), WitnessError> {
    let k = parse_field(field)?;
    let p = point.to_point(&k)?;
    let l = p.spec().clone();
    let r = p.t().len();
    let n = p.y().len();
    let d = modulus.to_datum(&k, r)?;
    let dl = modulus_over(&d, &l)?;
    let mut t = Transcript::default();

    t.record::<WitnessError>(
        "base_change",
        Ok(Outcome::test(l == k || l.base() == k, "witness built over the residue field of z; [z] is its push-forward")
            .with_value(field_descriptor(&l))),
    );
    let faces = p.y().iter().all(|y| !y.is_zero() && !y.is_one());
    t.record::<WitnessError>("point_face_condition", Ok(Outcome::test(faces, "no cube coordinate is 0, 1 or inf")));
    t.record("point_off_modulus", dl.avoids(p.t()).map(|ok| Outcome::test(ok, "D(z) != 0")));

    let Witness::Embedding { embedding, .. } = find(witnesses, "hyperbola")? else {
        return Err(WitnessError::MalformedCertificate("hyperbola witness is not an embedding".into()));
    };
    let emb = embedding.to_embedding()?;
    let shape = emb.spec() == &l && emb.source_r() == r && emb.target_r() == r;
    let on_curve = shape
        && emb
            .push_point(&p)
            .is_ok_and(|q| q == p);
    t.record::<WitnessError>("point_on_curve", Ok(Outcome::test(on_curve, "z lies on C x cube^n")));
    t.record::<WitnessError>(
        "curve_avoids_modulus",
        Ok(Outcome::test(shape && emb.certifies_disjoint(&dl), "every t_i dividing D is a unit on C")),
    );

    if n == 0 {
        let Witness::Curve { curve, .. } = find(witnesses, "graph")? else {
            return Err(WitnessError::MalformedCertificate("graph witness is not a curve".into()));
        };
        let g = curve.to_curve()?;
        let pushed = emb.push_curve(&g, Some(&dl));
        t.record(
            "graph_on_curve",
            pushed.as_ref().map(|_| Outcome::test(g.model() == CoordModel::Original, "graph lies on C and avoids D")),
        );
        let expected = ZeroCycle::single(&l, CoordModel::Original, p.clone())?;
        let boundary = g.boundary(Convention::ModelDefault);
        t.record(
            "graph_boundary",
            boundary.as_ref().map(|b| Outcome::test(*b == expected, "boundary of the graph is [z]").with_value(b)),
        );
        let commutes = match (&pushed, &boundary) {
            (Ok(c), Ok(b)) => c
                .boundary(Convention::ModelDefault)
                .and_then(|cb| Ok(cb == emb.push_zero_cycle(b, Some(&dl))?))
                .map(|ok| Outcome::test(ok, "boundary commutes with the push-forward")),
            _ => Ok(Outcome::test(false, "no graph boundary to push")),
        };
        t.record("push_commutes", commutes);
        if let Some(x) = base_point(variant, &k, &l)? {
            let Witness::Embedding { embedding, .. } = find(witnesses, "base_inclusion")? else {
                return Err(WitnessError::MalformedCertificate("base_inclusion witness is not an embedding".into()));
            };
            let incl = embedding.to_embedding()?;
            let same = base_inclusion(&x, r, &l)?;
            t.record::<WitnessError>("base_inclusion", Ok(Outcome::test(incl == same, "t -> (x, t)")));
            let dx = product_modulus(&dl, x.len())?;
            let product = pushed
                .map_err(WitnessError::from)
                .and_then(|c| Ok((incl.push_curve(&c, Some(&dx))?, incl.push_point(&p)?)))
                .and_then(|(c, q)| {
                    let b = c.boundary(Convention::ModelDefault)?;
                    let want = ZeroCycle::single(&l, CoordModel::Original, q)?;
                    Ok(Outcome::test(b == want, "x x graph bounds [x x z] off X x D").with_value(b))
                });
            t.record("product_push", product);
        }
    } else {
        let Witness::Symbol { element, .. } = find(witnesses, "obstruction")? else {
            return Err(WitnessError::MalformedCertificate("obstruction witness is not a symbol".into()));
        };
        let stored = element.to_k_element()?;
        let phi = phi_point(&p);
        t.record(
            "phi",
            phi.as_ref()
                .map(|(_, e)| Outcome::test(*e == stored, "phi_n of z on C").with_value(e)),
        );
        if let Ok((_, e)) = &phi {
            let (check, mode, detail) = match (l.is_finite(), n) {
                (true, 2) => ("k_theory_vanishing", ReduceMode::Certificate, "K_2 of a finite field is trivial"),
                (true, _) if n >= 2 => ("k_theory_vanishing", ReduceMode::TheoremBacked, "K_n of a finite field vanishes for n >= 2"),
                _ => ("obstruction_report", ReduceMode::TheoremBacked, "class of the obstruction; no vanishing claimed"),
            };
            let red = symbol_reduce(e, mode).map(|red| {
                let shown = match n >= 2 && l.is_finite() {
                    true => format!("{} ({:?})", red.element, red.justification),
                    false => red.element.to_string(),
                };
                Outcome::test(!(n >= 2 && l.is_finite()) || red.element.is_zero(), detail).with_value(shown)
            });
            t.record(check, red);
        }
    }
    Ok((
        t.0,
        ConventionJson {
            model: CoordModel::Original,
            level0_degeneracy: false,
        },
    ))
}

/// Certificate for a closed point `z = (c1, ..., cr; y)` off the monomial
/// modulus `D`, given in ORIGINAL coordinates. The hyperbola
/// `C = {t1 t2 = c1 c2} x (c3, ..., cr)` passes through `z` and misses `D`.
/// At level 0 the graph of `s - c1` on `C` bounds `[z]`; at higher levels
/// the certificate records `phi_n(z)` and, over finite fields, its
/// vanishing. Points over an extension `L` get a witness built over `L`.
pub fn zero_cycle_vanishing_witness(
    z: &ClosedPoint,
    d: &ModulusDatum,
    variant: &Variant,
) -> Result<WitnessCertificate, WitnessError> {
    let k = d.spec().clone();
    let l = z.spec().clone();
    if l != k && l.base() != k {
        return Err(WitnessError::WrongAmbient(format!("{z} is not over {k} or an extension of it")));
    }
    precheck(z, d)?;
    let r = z.t().len();
    let n = z.y().len();
    let emb = hyperbola(z)?;
    let mut witnesses = vec![Witness::Embedding {
        role: "hyperbola".into(),
        embedding: EmbeddingJson::from_embedding(&emb),
    }];
    let statement = if n == 0 {
        witnesses.push(Witness::Curve {
            role: "graph".into(),
            curve: CurveJson::from_curve(&graph_curve(z)?),
        });
        if let Some(x) = base_point(variant, &k, &l)? {
            witnesses.push(Witness::Embedding {
                role: "base_inclusion".into(),
                embedding: EmbeddingJson::from_embedding(&base_inclusion(&x, r, &l)?),
            });
        }
        format!("[{z}] = 0 in CH^{r}(A^{r}|D, 0) over {k}")
    } else {
        let (_, e) = phi_point(z)?;
        witnesses.push(Witness::Symbol {
            role: "obstruction".into(),
            element: ElementJson::from_element::<FieldElement>(&e),
        });
        format!("[{z}] in CH^{}(A^{r}|D, {n}) reduces to phi_{n}(z) = {e}", r + n)
    };
    let claim = Claim::ZeroCycleVanishing {
        statement,
        field: field_descriptor(&k),
        modulus: ModulusJson::from_datum(d),
        point: PointJson::from_point(z, &k, 1),
        variant: variant.clone(),
    };
    WitnessCertificate::build(claim, witnesses)
}

/// The obstruction symbol recorded in a level `n >= 1` certificate.
pub fn obstruction(c: &WitnessCertificate) -> Option<KElement> {
    c.witnesses.iter().find_map(|w| match w {
        Witness::Symbol { role, element } if role == "obstruction" => element.to_k_element().ok(),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{verify_certificate, Status};

    fn point(k: &FieldSpec, t: &[i64], y: &[i64]) -> ClosedPoint {
        let v = |s: &[i64]| s.iter().map(|&a| k.from_i64(a)).collect();
        ClosedPoint::new(k, v(t), v(y)).unwrap()
    }

    #[test]
    fn level_zero_examples() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let cert = zero_cycle_vanishing_witness(&point(&k, &[2, 3], &[]), &d, &Variant::Plain).unwrap();
        assert!(cert.is_valid(), "{:#?}", cert.transcript);
        assert!(verify_certificate(&cert).unwrap());
        let Witness::Embedding { embedding, .. } = &cert.witnesses[0] else { panic!() };
        assert_eq!(embedding.equations, vec!["t1*t2 + 1".to_string()]);

        let q = FieldSpec::rationals();
        let d = ModulusDatum::monomial(&q, &[2, 1, 5]).unwrap();
        let cert = zero_cycle_vanishing_witness(&point(&q, &[1, 1, 4], &[]), &d, &Variant::Plain).unwrap();
        assert!(cert.is_valid(), "{:#?}", cert.transcript);
        assert!(verify_certificate(&cert).unwrap());

        let variant = Variant::ProductBase { base: vec!["5".into()] };
        let cert = zero_cycle_vanishing_witness(&point(&q, &[2, 3], &[]), &ModulusDatum::monomial(&q, &[3, 1]).unwrap(), &variant).unwrap();
        assert!(cert.is_valid(), "{:#?}", cert.transcript);
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn level_one_reports_obstruction() {
        let k = FieldSpec::prime(5).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let cert = zero_cycle_vanishing_witness(&point(&k, &[2, 3], &[4]), &d, &Variant::Plain).unwrap();
        assert!(cert.is_valid(), "{:#?}", cert.transcript);
        assert_eq!(obstruction(&cert).unwrap().to_string(), "{4}");
        let last = cert.transcript.last().unwrap();
        assert_eq!(last.check, "obstruction_report");

        let cert = zero_cycle_vanishing_witness(&point(&k, &[2, 3], &[4, 2]), &d, &Variant::Plain).unwrap();
        let last = cert.transcript.last().unwrap();
        assert_eq!((last.check.as_str(), last.status), ("k_theory_vanishing", Status::Pass));
    }

    #[test]
    fn rejections() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        assert!(matches!(
            zero_cycle_vanishing_witness(&point(&k, &[0, 3], &[]), &d, &Variant::Plain),
            Err(WitnessError::PointOnModulus(_))
        ));
        let d1 = ModulusDatum::monomial(&k, &[1]).unwrap();
        assert!(matches!(
            zero_cycle_vanishing_witness(&point(&k, &[2], &[]), &d1, &Variant::Plain),
            Err(WitnessError::WrongAmbient(_))
        ));
    }

    #[test]
    fn tampered_curve_fails() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[2, 1]).unwrap();
        let mut cert = zero_cycle_vanishing_witness(&point(&k, &[2, 3], &[]), &d, &Variant::Plain).unwrap();
        if let Witness::Curve { curve, .. } = &mut cert.witnesses[1] {
            curve.components[0] = "t - 3".into();
        }
        assert!(!verify_certificate(&cert).unwrap());
    }

    #[test]
    fn extension_point() {
        let k = FieldSpec::prime(3).unwrap();
        let l = FieldSpec::standard(9).unwrap();
        let u = l.generator_u().unwrap();
        let z = ClosedPoint::new(&l, vec![u.clone(), l.from_i64(2)], vec![]).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 2]).unwrap();
        let cert = zero_cycle_vanishing_witness(&z, &d, &Variant::Plain).unwrap();
        assert!(cert.is_valid(), "{:#?}", cert.transcript);
        assert_eq!(cert.transcript[0].value.as_deref(), Some(field_descriptor(&l).as_str()));
        assert!(verify_certificate(&cert).unwrap());
    }
}
