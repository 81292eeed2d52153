use std::collections::BTreeMap;

use super::{norm_k1, FunctionKElement, KElement, MilnorError};
use crate::cycle::{ClosedPoint, CoordModel, ParamCurve, ZeroCycle};
use crate::field::{FieldElement, FieldSpec, UniPoly};
use crate::poly::{Place, RatFunc};

/// Images of `u` under the automorphisms of `spec` over its prime field
/// that can be written down: all Frobenius powers over a finite field, and
/// the conjugation of a quadratic extension of Q.
fn automorphism_images(spec: &FieldSpec) -> Vec<FieldElement> {
    let Some(u) = spec.generator_u() else {
        return vec![];
    };
    if spec.is_finite() {
        let p = spec.characteristic() as u128;
        let mut out = vec![u.clone()];
        for _ in 1..spec.degree() {
            let next = out.last().unwrap().pow_u128(p);
            out.push(next);
        }
        return out;
    }
    if spec.degree() == 2 {
        let mu = spec.modulus_poly().expect("extension");
        let other = &(-&mu.coeff(1)).embed(spec).expect("base") - &u;
        return vec![u, other];
    }
    vec![u]
}

fn apply(x: &FieldElement, image: &FieldElement) -> FieldElement {
    UniPoly::new(&x.spec().base(), x.base_coeffs()).eval(image)
}

/// `true` when the coordinates generate `spec` over the prime field.
fn generates(spec: &FieldSpec, coords: &[FieldElement]) -> Option<bool> {
    if spec.is_prime_field() {
        return Some(true);
    }
    if spec.is_finite() {
        let p = spec.characteristic() as u128;
        let frob: Vec<FieldElement> = coords.iter().map(|x| x.pow_u128(p)).collect();
        // the orbit has full length iff no proper power of Frobenius fixes them
        let d = spec.degree();
        let fixed_by = |e: usize| {
            let pe = p.pow(e as u32);
            coords.iter().all(|x| &x.pow_u128(pe) == x)
        };
        let _ = frob;
        return Some((1..d).filter(|e| d.is_multiple_of(*e)).all(|e| !fixed_by(e)));
    }
    let d = spec.degree();
    let prime_degree = (2..d).all(|k| !d.is_multiple_of(k));
    match coords.iter().any(|x| !x.in_base()) {
        false => Some(false),
        true if prime_degree => Some(true),
        true => None,
    }
}

/// `phi` on one point `(x; z_1, ..., z_n)` in ORIGINAL coordinates: the
/// base point `x` over its residue field and
/// `N_(k(z)/k(x)) {z_1, ..., z_n}`.
pub fn phi_point(p: &ClosedPoint) -> Result<(ClosedPoint, KElement), MilnorError> {
    let l = p.spec().clone();
    let n = p.y().len();
    let k = l.base();
    let base_rational = p.t().iter().all(FieldElement::in_base);
    if l.is_prime_field() || !base_rational {
        if !l.is_prime_field() && generates(&l, p.t()) != Some(true) {
            return Err(MilnorError::NormNotImplemented(format!(
                "the base point of {p} has an intermediate residue field"
            )));
        }
        // k(x) = k(z): pick a canonical conjugate of x and move z with it
        let sigma = automorphism_images(&l)
            .into_iter()
            .min_by_key(|img| p.t().iter().map(|x| apply(x, img)).collect::<Vec<_>>());
        let (t, y) = match sigma {
            Some(img) => (
                p.t().iter().map(|x| apply(x, &img)).collect(),
                p.y().iter().map(|x| apply(x, &img)).collect(),
            ),
            None => (p.t().to_vec(), p.y().to_vec()),
        };
        let x = ClosedPoint::new(&l, t, vec![])?;
        let mut e = KElement::zero(&l, n);
        e.add_symbol(y, 1)?;
        return Ok((x, e));
    }
    let x = ClosedPoint::new(&k, p.t().iter().map(|c| c.to_base().expect("base")).collect(), vec![])?;
    let deg = l.degree() as i64;
    let mut e = KElement::zero(&k, n);
    if p.y().iter().any(FieldElement::is_one) {
        return Ok((x, e));
    }
    match n {
        0 => e.add_symbol(vec![], deg)?,
        1 => e.add_symbol(vec![norm_k1(&p.y()[0])?], 1)?,
        _ if k.is_finite() => {}
        _ => {
            return Err(MilnorError::NormNotImplemented(format!(
                "K_{n} norm from {l} to {k}"
            )))
        }
    }
    Ok((x, e))
}

/// `phi_n` on a 0-cycle: the symbol of the cube coordinates at each base
/// point, normed to the residue field of the base point.
pub fn phi_map(z: &ZeroCycle) -> Result<BTreeMap<ClosedPoint, KElement>, MilnorError> {
    let z = z.convert(CoordModel::Original)?;
    let mut out: BTreeMap<ClosedPoint, KElement> = BTreeMap::new();
    for (p, m) in z.terms() {
        let (x, e) = phi_point(p)?;
        let e = e.scale(m);
        let slot = out
            .entry(x)
            .or_insert_with(|| KElement::zero(e.spec(), e.degree()));
        *slot = slot.add(&e)?;
    }
    out.retain(|_, e| !e.is_zero());
    Ok(out)
}

/// `psi-tilde_n`: the graph point `(x; f_1, ..., f_n)` of each symbol of
/// `e`, a 0-cycle over `base` in ORIGINAL coordinates. Symbols with an entry
/// 1 are already absent from `e`.
pub fn psi_map(x: &[FieldElement], e: &KElement, base: &FieldSpec) -> Result<ZeroCycle, MilnorError> {
    let mut out = ZeroCycle::new(base, CoordModel::Original, x.len(), e.degree());
    for (entries, m) in e.terms() {
        let p = ClosedPoint::new(e.spec(), x.to_vec(), entries.clone())?;
        out.add_point(p, m)?;
    }
    Ok(out)
}

/// `psi-tilde_n` applied to residues at the finite places of the t-line.
pub fn psi_element(
    parts: &BTreeMap<Place, KElement>,
    base: &FieldSpec,
    n: usize,
) -> Result<ZeroCycle, MilnorError> {
    let mut out = ZeroCycle::new(base, CoordModel::Original, 1, n);
    for (v, e) in parts {
        if matches!(v, Place::Infinity) || e.is_zero() {
            continue;
        }
        let x = v.point(e.spec()).finite().expect("finite place").clone();
        out = out.add(&psi_map(&[x], e, base)?)?;
    }
    Ok(out)
}

/// `theta_(n+1)` of a curve: `{c_1, ..., c_(n+1)}` in `K_(n+1)(k(t))` for
/// the graph of functions of `t` (base coordinate `t`), and 0 for a curve
/// over a point.
pub fn theta_map(c: &ParamCurve) -> Result<FunctionKElement, MilnorError> {
    let c = c.convert(CoordModel::Original)?;
    let spec = c.spec();
    let n = c.level();
    if c.base().iter().all(RatFunc::is_constant) {
        return Ok(FunctionKElement::zero(spec, n));
    }
    if c.r() != 1 || c.base()[0] != RatFunc::param(spec) {
        return Err(MilnorError::NotAGraph(c.to_string()));
    }
    FunctionKElement::symbol(spec, c.components().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_psi_round_trip() {
        let f7 = FieldSpec::prime(7).unwrap();
        let x = [f7.from_i64(4)];
        let e = KElement::symbol(&f7, vec![f7.from_i64(2), f7.from_i64(3)]).unwrap();
        let z = psi_map(&x, &e, &f7).unwrap();
        let back = phi_map(&z).unwrap();
        let key = ClosedPoint::new(&f7, x.to_vec(), vec![]).unwrap();
        assert_eq!(back[&key], e);
        let one = KElement::symbol(&f7, vec![f7.from_i64(2), f7.from_i64(1)]).unwrap();
        assert!(psi_map(&x, &one, &f7).unwrap().is_empty());
    }

    #[test]
    fn phi_norms_extension_points() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f9 = FieldSpec::standard(9).unwrap();
        let u = f9.generator_u().unwrap();
        let y = &u + &f9.one();
        let p = ClosedPoint::new(&f9, vec![f9.from_i64(1)], vec![y]).unwrap();
        let (x, e) = phi_point(&p).unwrap();
        assert_eq!(x.spec(), &f3);
        assert_eq!(e.to_string(), "{2}");
        // base point generating F_9: no norm, canonical conjugate
        let q = ClosedPoint::new(&f9, vec![u.pow_u128(3)], vec![u.clone()]).unwrap();
        let (x, e) = phi_point(&q).unwrap();
        assert_eq!(x.t()[0], u);
        assert_eq!(e.terms().next().unwrap().0[0], u.pow_u128(3));
    }

    #[test]
    fn theta_on_graphs() {
        let f5 = FieldSpec::prime(5).unwrap();
        let t = RatFunc::param(&f5);
        let one = RatFunc::constant(f5.one());
        let c = ParamCurve::new(&f5, CoordModel::Original, vec![t.clone()], vec![t.clone(), one.sub(&t)]).unwrap();
        assert_eq!(theta_map(&c).unwrap().to_string(), "{t, 4*t + 1}");
        let pt = ParamCurve::new(
            &f5,
            CoordModel::Original,
            vec![RatFunc::constant(f5.from_i64(2))],
            vec![t.clone(), one.sub(&t)],
        )
        .unwrap();
        assert!(theta_map(&pt).unwrap().is_zero());
    }
}
