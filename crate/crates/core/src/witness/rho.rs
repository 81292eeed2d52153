use super::{find, Claim, ConventionJson, Outcome, Transcript, TranscriptEntry, Witness, WitnessCertificate, WitnessError};
use crate::cycle::{
    check_modulus_codim1, face_sign, BoundaryOptions, Convention, CoordModel, CycleError, FaceValue, HypersurfaceCycle, ModulusDatum,
    ModulusVerdict,
};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{MultiPoly, Var, VarSet};
use crate::wire::{field_descriptor, parse_element, parse_field, CycleJson};

/// `rho` of one level-1 component: the coefficient of `y1` in
/// `((1 - f)/(t1...tr))(0, ..., 0, y1)`.
fn rho_component(f: &MultiPoly) -> Result<FieldElement, WitnessError> {
    let vars = f.vars();
    let f = f
        .normalize_constant_term()
        .ok_or_else(|| WitnessError::NotNormalized(f.to_string()))?;
    if f.degree_in(Var::Y(1))? > 1 {
        return Err(WitnessError::DegreeTooHigh(f.to_string()));
    }
    let spec = f.spec();
    let q = MultiPoly::one(spec, vars)
        .sub(&f)
        .exact_div(&MultiPoly::t_product(spec, vars))
        .map_err(|_| WitnessError::NotPresentable(f.to_string()))?;
    let at_zero: Vec<(Var, FieldElement)> = (1..=vars.r).map(|i| (Var::T(i), spec.zero())).collect();
    let ev = q.substitute(&at_zero)?;
    Ok(ev
        .coefficient_of(Var::Y(1), 1)?
        .as_constant()
        .expect("only y1 remains"))
}

fn rho_value(z: &HypersurfaceCycle) -> Result<FieldElement, WitnessError> {
    if z.level() != 1 {
        return Err(WitnessError::WrongLevel(format!("rho needs level 1, got {}", z.level())));
    }
    if z.model() != CoordModel::Psi {
        return Err(CycleError::WrongModel {
            expected: CoordModel::Psi,
            found: z.model(),
        }
        .into());
    }
    let mut acc = z.spec().zero();
    for (f, m) in z.terms() {
        acc = &acc + &rho_component(f)?.times(m);
    }
    Ok(acc)
}

/// The residue invariant
/// `rho(Z) = res_(y1 = inf) Ev_(t = 0) ((f(0, y1) - f)/(f(0, y1) t1...tr))`
/// of a level-1 cycle in the PSI model, extended linearly. Components are
/// normalized to constant term 1, so `f(0, y1) = 1`, and
/// `res_(y1 = inf)(alpha y1 + beta) = alpha`, which gives `rho(Z_a) = a`.
pub fn rho(z: &HypersurfaceCycle, d: &ModulusDatum) -> Result<FieldElement, WitnessError> {
    if d.r() != z.vars().r || d.spec() != z.spec() || d.exponents().is_none() {
        return Err(WitnessError::WrongAmbient(format!(
            "rho needs a monomial modulus on A^{} over {}",
            z.vars().r,
            z.spec()
        )));
    }
    rho_value(z)
}

pub(super) fn admissibility(t: &mut Transcript, z: &HypersurfaceCycle, d: &ModulusDatum) -> bool {
    let face = z.check_face_condition();
    let face_ok = t.record::<WitnessError>(
        "face_condition",
        Ok(Outcome::test(
            face.passed(),
            face.first().map_or("every face meets the cycle properly".into(), |v| format!("contains the face {v}")),
        )),
    );
    let modulus = check_modulus_codim1(z, d).map(|rep| {
        let why = rep
            .components
            .iter()
            .find(|c| c.1 != ModulusVerdict::Certified)
            .map_or("every component certified".to_string(), |c| format!("{}: {}", c.0, c.2));
        Outcome::test(rep.verdict == ModulusVerdict::Certified, why).with_value(format!("{:?}", rep.verdict))
    });
    face_ok & t.record("modulus", modulus)
}

pub(super) fn parse_cycle(c: &CycleJson) -> Result<(HypersurfaceCycle, ModulusDatum), WitnessError> {
    let z = c.to_cycle()?;
    let d = c
        .to_modulus()?
        .ok_or_else(|| WitnessError::MalformedCertificate("cycle without modulus".into()))?;
    Ok((z, d))
}

pub(super) fn reciprocity_checks(c: &CycleJson) -> Result<(Vec<TranscriptEntry>, ConventionJson), WitnessError> {
    let (w, d) = parse_cycle(c)?;
    if w.level() != 2 || w.model() != CoordModel::Psi {
        return Err(WitnessError::WrongLevel(format!(
            "reciprocity needs a level-2 PSI cycle, got level {} in {}",
            w.level(),
            w.model()
        )));
    }
    let mut t = Transcript::default();
    admissibility(&mut t, &w, &d);
    let opts = BoundaryOptions::default();
    let mut alternating = w.spec().zero();
    for i in 1..=2 {
        for v in [FaceValue::Zero, FaceValue::One] {
            let r = w.face_restrict(i, v).map_err(WitnessError::from).and_then(|f| rho_value(&f));
            if let Ok(x) = &r {
                let s = face_sign(CoordModel::Psi, i, v, Convention::ModelDefault);
                alternating = &alternating + &x.times(s);
            }
            t.record(format!("rho(y{i}={v})"), r.map(|x| Outcome::pass("face restriction").with_value(x)));
        }
    }
    for conv in [Convention::ModelDefault, Convention::Reversed] {
        let r = w
            .boundary(BoundaryOptions {
                convention: conv,
                ..opts
            })
            .map_err(WitnessError::from)
            .and_then(|b| rho_value(&b));
        let name = match conv {
            Convention::ModelDefault => "rho(boundary)",
            Convention::Reversed => "rho(boundary, reversed signs)",
        };
        t.record(name, r.map(|x| Outcome::test(x.is_zero(), "must vanish").with_value(x)));
    }
    t.record::<WitnessError>(
        "alternating_face_sum",
        Ok(Outcome::test(alternating.is_zero(), "sum of signed face values").with_value(&alternating)),
    );
    Ok((
        t.0,
        ConventionJson {
            model: CoordModel::Psi,
            level0_degeneracy: opts.level0_degeneracy,
        },
    ))
}

/// Certificate that `rho(boundary W) = 0` for an admissible level-2 cycle
/// in the PSI model, recording `rho` of the four faces.
pub fn verify_rho_reciprocity(w: &HypersurfaceCycle, d: &ModulusDatum) -> Result<WitnessCertificate, WitnessError> {
    let mut pre = Transcript::default();
    if w.model() != CoordModel::Psi {
        return Err(CycleError::WrongModel {
            expected: CoordModel::Psi,
            found: w.model(),
        }
        .into());
    }
    if !admissibility(&mut pre, w, d) {
        let why = pre.0.iter().find(|e| e.status == super::Status::Fail).expect("a failure");
        return Err(WitnessError::Inadmissible(format!("{}: {}", why.check, why.detail)));
    }
    let cycle = CycleJson::from_cycle(w, Some(d));
    let statement = format!("rho(boundary W) = 0 in {}", w.spec());
    WitnessCertificate::build(Claim::RhoReciprocity { statement, cycle }, vec![])
}

/// `1 - t1...tr a y1` on `A^r x cube^1`.
pub fn generator_polynomial(a: &FieldElement, r: usize) -> MultiPoly {
    let spec = a.spec();
    let vars = VarSet::new(r, 1);
    MultiPoly::from_terms(spec, vars, [(vec![0; r + 1], spec.one()), (vec![1; r + 1], -a)])
}

/// `D_(1, ..., 1)` on `A^r`.
fn reduced_modulus(spec: &FieldSpec, r: usize) -> Result<ModulusDatum, WitnessError> {
    Ok(ModulusDatum::monomial(spec, &vec![1; r])?)
}

pub(super) fn generator_checks(
    field: &str,
    a: &str,
    r: usize,
    witnesses: &[Witness],
) -> Result<(Vec<TranscriptEntry>, ConventionJson), WitnessError> {
    let spec = parse_field(field)?;
    let a = parse_element(&spec, a)?;
    let Witness::Cycle { cycle, .. } = find(witnesses, "generator")? else {
        return Err(WitnessError::MalformedCertificate("generator witness is not a cycle".into()));
    };
    let (z, d) = parse_cycle(cycle)?;
    let mut t = Transcript::default();
    let expected = HypersurfaceCycle::single(&generator_polynomial(&a, r), CoordModel::Psi)?;
    t.record::<WitnessError>(
        "generator_form",
        Ok(Outcome::test(z == expected && d == reduced_modulus(&spec, r)?, "V(1 - t1...tr a y1) with D = t1...tr")),
    );
    admissibility(&mut t, &z, &d);
    let opts = BoundaryOptions::default();
    let b = z.boundary(opts).map(|b| Outcome::test(b.is_empty(), "level-0 faces are degenerate").with_value(b.len()));
    t.record("boundary", b);
    let rho = rho(&z, &d).map(|x| Outcome::test(x == a, "rho(Z_a) = a").with_value(x));
    t.record("rho", rho);
    Ok((
        t.0,
        ConventionJson {
            model: CoordModel::Psi,
            level0_degeneracy: opts.level0_degeneracy,
        },
    ))
}

/// `Z_a = V(1 - t1...tr a y1)` with its certificate: admissible for
/// `D_(1, ..., 1)`, a cycle under the level-0 degeneracy convention, and
/// `rho(Z_a) = a`. For `a = 0` the cycle is empty.
pub fn generator_cycle(a: &FieldElement, r: usize) -> Result<(HypersurfaceCycle, WitnessCertificate), WitnessError> {
    if r == 0 {
        return Err(WitnessError::WrongAmbient("generators live on A^r with r >= 1".into()));
    }
    let spec = a.spec();
    let z = HypersurfaceCycle::single(&generator_polynomial(a, r), CoordModel::Psi)?;
    let d = reduced_modulus(spec, r)?;
    let claim = Claim::Generator {
        statement: format!("rho(Z_a) = a for a = {a} in {spec}"),
        field: field_descriptor(spec),
        a: a.to_string(),
        r,
    };
    let witnesses = vec![Witness::Cycle {
        role: "generator".into(),
        cycle: CycleJson::from_cycle(&z, Some(&d)),
    }];
    Ok((z, WitnessCertificate::build(claim, witnesses)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::witness::verify_certificate;

    fn cyc(text: &str, k: &FieldSpec, r: usize, n: usize) -> HypersurfaceCycle {
        HypersurfaceCycle::single(&parse_poly(text, k, VarSet::new(r, n)).unwrap(), CoordModel::Psi).unwrap()
    }

    #[test]
    fn rho_examples() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        assert_eq!(rho(&cyc("1 - t1*t2*(3*y1 + 2)", &k, 2, 1), &d).unwrap(), k.from_i64(3));
        // higher-order terms do not contribute
        let h = cyc("1 - t1*t2*(3*y1 + 2) + t1^2*t2^2*(y1 + 5)", &k, 2, 1);
        assert_eq!(rho(&h, &d).unwrap(), k.from_i64(3));
        assert!(matches!(rho(&cyc("1 - t1*t2*y1^2", &k, 2, 1), &d), Err(WitnessError::DegreeTooHigh(_))));
        assert!(matches!(rho(&cyc("1 - t1*y1", &k, 2, 1), &d), Err(WitnessError::NotPresentable(_))));
        assert!(matches!(rho(&cyc("1 - t1*t2*y1*y2", &k, 2, 2), &d), Err(WitnessError::WrongLevel(_))));
    }

    #[test]
    fn reciprocity_certificate() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let w = cyc("1 - t1*t2*(2*y1*y2 + 3*y1 + 4*y2 + 6)", &k, 2, 2);
        let cert = verify_rho_reciprocity(&w, &d).unwrap();
        assert!(cert.is_valid());
        let faces: Vec<_> = cert.transcript[2..6].iter().map(|e| e.value.clone().unwrap()).collect();
        // (c, a + c, b, a + b) = (4, 6, 3, 5)
        assert_eq!(faces, ["4", "6", "3", "5"]);
        assert!(verify_certificate(&cert).unwrap());
        let mut bad = cert.clone();
        bad.transcript[2].value = Some("5".into());
        assert!(!verify_certificate(&bad).unwrap());
        let inadmissible = cyc("1 - t1*t2*(y1^2*y2 + 1)", &k, 2, 2);
        assert!(matches!(verify_rho_reciprocity(&inadmissible, &d), Err(WitnessError::Inadmissible(_))));
    }

    #[test]
    fn generators() {
        let k = FieldSpec::prime(7).unwrap();
        let (z, cert) = generator_cycle(&k.from_i64(3), 2).unwrap();
        assert_eq!(z.len(), 1);
        assert!(cert.is_valid(), "{:?}", cert.transcript);
        assert!(verify_certificate(&cert).unwrap());
        let (z0, cert0) = generator_cycle(&k.zero(), 2).unwrap();
        assert!(z0.is_empty());
        assert!(cert0.is_valid());
        let q = FieldSpec::rationals();
        let half = q.from_i64(2).inv().unwrap();
        let (_, cq) = generator_cycle(&half, 3).unwrap();
        assert!(cq.is_valid());
        assert_eq!(cq.transcript.last().unwrap().value.as_deref(), Some("1/2"));
    }
}
