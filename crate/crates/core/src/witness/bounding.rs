use super::rho::{admissibility, parse_cycle};
use super::{find, Claim, ConventionJson, Outcome, Transcript, TranscriptEntry, Witness, WitnessCertificate, WitnessError};
use crate::cycle::{BoundaryOptions, CoordModel, FaceValue, HypersurfaceCycle, ModulusDatum};
use crate::poly::{MultiPoly, Var, VarSet};
use crate::wire::CycleJson;

/// `1 - f` divided by `t1...tr`, for a level-0 component normalized to
/// constant term 1.
fn presentation(f: &MultiPoly) -> Result<MultiPoly, WitnessError> {
    let spec = f.spec();
    let vars = f.vars();
    let f = f
        .normalize_constant_term()
        .ok_or_else(|| WitnessError::NotPresentable(f.to_string()))?;
    MultiPoly::one(spec, vars)
        .sub(&f)
        .exact_div(&MultiPoly::t_product(spec, vars))
        .map_err(|_| WitnessError::NotPresentable(f.to_string()))
}

/// The level-0 cycle as a PSI cycle; at level 0 the model only labels it.
fn as_psi(z: &HypersurfaceCycle) -> Result<HypersurfaceCycle, WitnessError> {
    Ok(HypersurfaceCycle::from_terms(
        z.spec(),
        z.vars(),
        CoordModel::Psi,
        z.terms().map(|(f, m)| (f.clone(), m)),
    )?)
}

pub(super) fn checks(c: &CycleJson, witnesses: &[Witness]) -> Result<(Vec<TranscriptEntry>, ConventionJson), WitnessError> {
    let (z, d) = parse_cycle(c)?;
    let z = as_psi(&z)?;
    let Witness::Cycle { cycle, .. } = find(witnesses, "bounding_surface")? else {
        return Err(WitnessError::MalformedCertificate("bounding_surface witness is not a cycle".into()));
    };
    let (w, dw) = parse_cycle(cycle)?;
    let mut t = Transcript::default();
    let presented = z.terms().map(|(f, _)| presentation(f)).collect::<Result<Vec<_>, _>>();
    t.record(
        "presentation",
        presented.map(|v| Outcome::pass("every component is 1 - t1...tr g").with_value(v.len())),
    );
    t.record::<WitnessError>(
        "same_modulus",
        Ok(Outcome::test(d == dw && w.vars() == VarSet::new(z.vars().r, 1), "W lives on A^r x cube^1 with the modulus of Z")),
    );
    let mut zt = Transcript::default();
    admissibility(&mut zt, &z, &d);
    let z_mod = zt.0.pop().expect("modulus entry");
    t.0.push(TranscriptEntry {
        check: "modulus(Z)".into(),
        ..z_mod
    });
    admissibility(&mut t, &w, &dw);
    let face0 = w.face_restrict(1, FaceValue::Zero).map(|f| Outcome::test(f.is_empty(), "W at y1 = 0").with_value(f.len()));
    t.record("face(y1=0) = 0", face0);
    let face1 = w.face_restrict(1, FaceValue::One).map(|f| Outcome::test(f == z, "W at y1 = 1"));
    t.record("face(y1=1) = Z", face1);
    let opts = BoundaryOptions::strict();
    let b = w.boundary(opts).map(|b| Outcome::test(b == z, "plain cubical boundary"));
    t.record("boundary = Z", b);
    Ok((
        t.0,
        ConventionJson {
            model: CoordModel::Psi,
            level0_degeneracy: opts.level0_degeneracy,
        },
    ))
}

/// For a level-0 cycle `Z = sum m V(1 - t1...tr g)`, the surface
/// `W = sum m V(1 - t1...tr g y1)` with `W|(y1=0) = 0` and `W|(y1=1) = Z`,
/// so `Z` is the plain boundary of `W`.
pub fn bounding_surface(z: &HypersurfaceCycle, d: &ModulusDatum) -> Result<WitnessCertificate, WitnessError> {
    if z.level() != 0 {
        return Err(WitnessError::WrongLevel(format!("bounding surfaces need level 0, got {}", z.level())));
    }
    let z = as_psi(z)?;
    let r = z.vars().r;
    let vars = VarSet::new(r, 1);
    let y1 = MultiPoly::var(z.spec(), vars, Var::Y(1))?;
    let mut w = HypersurfaceCycle::new(z.spec(), vars, CoordModel::Psi);
    for (f, m) in z.terms() {
        let g = presentation(f)?;
        let tg = MultiPoly::t_product(z.spec(), f.vars()).mul(&g).widen(vars)?;
        w.add_component(&MultiPoly::one(z.spec(), vars).sub(&tg.mul(&y1)), m)?;
    }
    let claim = Claim::BoundingSurface {
        statement: format!("Z = boundary W in z^1(A^{r}|D, 0) over {}", z.spec()),
        cycle: CycleJson::from_cycle(&z, Some(d)),
    };
    let witnesses = vec![Witness::Cycle {
        role: "bounding_surface".into(),
        cycle: CycleJson::from_cycle(&w, Some(d)),
    }];
    WitnessCertificate::build(claim, witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::parse_poly;
    use crate::witness::verify_certificate;

    #[test]
    fn bounding_examples() {
        let k = FieldSpec::prime(7).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let v0 = VarSet::new(2, 0);
        let z = HypersurfaceCycle::single(&parse_poly("1 - t1*t2*(t1 + 3)", &k, v0).unwrap(), CoordModel::Psi).unwrap();
        let cert = bounding_surface(&z, &d).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.transcript);
        assert!(verify_certificate(&cert).unwrap());

        let empty = HypersurfaceCycle::new(&k, v0, CoordModel::Psi);
        let cert = bounding_surface(&empty, &d).unwrap();
        assert!(cert.is_valid());

        let bad = HypersurfaceCycle::single(&parse_poly("t1 - 1", &k, v0).unwrap(), CoordModel::Psi).unwrap();
        assert!(matches!(bounding_surface(&bad, &d), Err(WitnessError::NotPresentable(_))));
    }

    #[test]
    fn tampered_witness_fails() {
        let k = FieldSpec::prime(5).unwrap();
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let v0 = VarSet::new(2, 0);
        let z = HypersurfaceCycle::single(&parse_poly("1 - 2*t1*t2", &k, v0).unwrap(), CoordModel::Psi).unwrap();
        let mut cert = bounding_surface(&z, &d).unwrap();
        if let Witness::Cycle { cycle, .. } = &mut cert.witnesses[0] {
            cycle.terms[0].poly = "1 - t1*y1".into();
        }
        assert!(!verify_certificate(&cert).unwrap());
    }
}
