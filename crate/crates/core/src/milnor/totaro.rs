use std::collections::BTreeMap;

use super::{phi_map, psi_element, psi_map, theta_map, total_delta, FunctionKElement, KElement, MilnorError};
use crate::cycle::{ClosedPoint, Convention, CoordModel, ParamCurve, ZeroCycle};
use crate::field::{FieldElement, UniPoly};
use crate::poly::RatFunc;

/// A witness curve together with its computed boundary and the 0-cycle it
/// is meant to realize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCheck {
    pub curve: ParamCurve,
    pub boundary: ZeroCycle,
    pub expected: ZeroCycle,
    /// The sign `s` with `boundary = s * expected` fixed by the ORIGINAL
    /// boundary convention.
    pub expected_sign: i64,
    /// The sign actually observed, if `boundary = +-expected`.
    pub global_sign: Option<i64>,
}

impl CurveCheck {
    fn new(curve: ParamCurve, expected: ZeroCycle, expected_sign: i64) -> Result<CurveCheck, MilnorError> {
        let boundary = curve.boundary(Convention::ModelDefault)?;
        let global_sign = [expected_sign, -expected_sign]
            .into_iter()
            .find(|&s| boundary == expected.scale(s));
        Ok(CurveCheck {
            curve,
            boundary,
            expected,
            expected_sign,
            global_sign,
        })
    }

    pub fn holds(&self) -> bool {
        self.global_sign == Some(self.expected_sign)
    }
}

fn constants(x: &[FieldElement]) -> Vec<RatFunc> {
    x.iter().cloned().map(RatFunc::constant).collect()
}

fn check_entries(spec_of: &FieldElement, entries: &[&FieldElement]) -> Result<(), MilnorError> {
    for e in entries {
        if e.spec() != spec_of.spec() {
            return Err(MilnorError::FieldMismatch(format!("{e} is not over {}", spec_of.spec())));
        }
        if e.is_zero() {
            return Err(MilnorError::ZeroEntry);
        }
    }
    Ok(())
}

/// The Steinberg curve over the point `x`:
/// `t -> (x; t, 1 - t, (f1 - t)/(1 - t), f3, ..., fn)`.
/// Its only face point is `t = f1`, the point `(x; f1, 1 - f1, f3, ..., fn)`.
pub fn totaro_steinberg_curve(
    x: &[FieldElement],
    f1: &FieldElement,
    rest: &[FieldElement],
) -> Result<ParamCurve, MilnorError> {
    let k = f1.spec().clone();
    let all: Vec<&FieldElement> = x.iter().chain(rest).collect();
    check_entries(f1, &all[x.len()..])?;
    check_entries(f1, &[f1])?;
    if let Some(c) = x.iter().find(|c| c.spec() != &k) {
        return Err(MilnorError::FieldMismatch(format!("{c} is not over {k}")));
    }
    if f1.is_one() {
        return Err(MilnorError::SteinbergPrecondition);
    }
    if let Some(c) = rest.iter().find(|c| c.is_one()) {
        return Err(MilnorError::DegenerateCurve(format!("constant coordinate {c}")));
    }
    let t = RatFunc::param(&k);
    let one = RatFunc::constant(k.one());
    let third = RatFunc::constant(f1.clone()).sub(&t).div(&one.sub(&t))?;
    let mut comps = vec![t.clone(), one.sub(&t), third];
    comps.extend(constants(rest));
    Ok(ParamCurve::new(&k, CoordModel::Original, constants(x), comps)?)
}

/// Checks that the Steinberg curve bounds exactly
/// `(x; f1, 1 - f1, f3, ..., fn)`, with sign `+1`.
pub fn verify_steinberg_curve(
    x: &[FieldElement],
    f1: &FieldElement,
    rest: &[FieldElement],
) -> Result<CurveCheck, MilnorError> {
    let curve = totaro_steinberg_curve(x, f1, rest)?;
    let k = curve.spec().clone();
    let mut y = vec![f1.clone(), &k.one() - f1];
    y.extend(rest.iter().cloned());
    let expected = ZeroCycle::single(&k, CoordModel::Original, ClosedPoint::new(&k, x.to_vec(), y)?)?;
    CurveCheck::new(curve, expected, 1)
}

/// The multiplicativity curve over `x`: `t -> (x; t, (f t - f g)/(t - f g))`.
pub fn totaro_mult_curve(x: &[FieldElement], f: &FieldElement, g: &FieldElement) -> Result<ParamCurve, MilnorError> {
    check_entries(f, &[f, g])?;
    let k = f.spec().clone();
    if f.is_one() || g.is_one() {
        return Err(MilnorError::DegenerateCurve("f = 1 or g = 1 makes the curve constant".into()));
    }
    let t = RatFunc::param(&k);
    let fg = RatFunc::constant(f * g);
    let second = t.scale(f).sub(&fg).div(&t.sub(&fg))?;
    Ok(ParamCurve::new(&k, CoordModel::Original, constants(x), vec![t, second])?)
}

/// Checks `boundary = -(psi(f) + psi(g) - psi(fg))` for the
/// multiplicativity curve; for `fg = 1` this is `psi(f) + psi(1/f)`.
pub fn verify_mult_curve(x: &[FieldElement], f: &FieldElement, g: &FieldElement) -> Result<CurveCheck, MilnorError> {
    let curve = totaro_mult_curve(x, f, g)?;
    let k = curve.spec().clone();
    let psi1 = |a: FieldElement| psi_map(x, &KElement::symbol(&k, vec![a])?, &k);
    let expected = psi1(f.clone())?.add(&psi1(g.clone())?)?.sub(&psi1(f * g)?)?;
    CurveCheck::new(curve, expected, -1)
}

/// The curve `t -> (t; f1, ..., fn, u pi^r)`: the graph of the entries over
/// the t-line, cut down to the open cube.
pub fn xi_curve(entries: &[RatFunc], u: &RatFunc, pi: &UniPoly, r: i64) -> Result<ParamCurve, MilnorError> {
    let k = u.spec().clone();
    let mut comps = entries.to_vec();
    comps.push(super::tame::unit_times_power(u, pi, r)?);
    for (i, c) in comps.iter().enumerate() {
        if c.spec() != &k {
            return Err(MilnorError::FieldMismatch(format!("{c} is not over {k}")));
        }
        if c.is_zero() {
            return Err(MilnorError::ZeroEntry);
        }
        if c.as_constant().is_some_and(|a| a.is_one()) {
            return Err(MilnorError::DegenerateCurve(format!("entry {} is 1", i + 1)));
        }
        if comps[..i].contains(c) {
            return Err(MilnorError::IndistinctEntries(c.to_string()));
        }
    }
    Ok(ParamCurve::new(&k, CoordModel::Original, vec![RatFunc::param(&k)], comps)?)
}

/// Checks `boundary(xi) = (-1)^n psi-tilde(delta {f1, ..., fn, u pi^r})`.
/// The boundary is proper only when no two entries share a zero or pole
/// on the affine line; otherwise it fails with an improper-boundary error.
pub fn verify_xi_curve(entries: &[RatFunc], u: &RatFunc, pi: &UniPoly, r: i64) -> Result<CurveCheck, MilnorError> {
    let curve = xi_curve(entries, u, pi, r)?;
    let k = curve.spec().clone();
    let n = entries.len();
    let symbol = FunctionKElement::symbol(&k, curve.components().to_vec())?;
    let expected = psi_element(&total_delta(&symbol)?, &k, n)?;
    CurveCheck::new(curve, expected, if n.is_multiple_of(2) { 1 } else { -1 })
}

/// Both paths around the square `z^(n+1)(A^1, n+1) -> K_(n+1)(k(t))`,
/// `-> z^(n+1)(A^1, n) -> (+)_x K_n(k(x))`, keyed by closed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    /// `phi o boundary`.
    pub phi_boundary: BTreeMap<ClosedPoint, KElement>,
    /// `delta o theta` at the finite places.
    pub delta_theta: BTreeMap<ClosedPoint, KElement>,
    pub expected_sign: i64,
    pub global_sign: Option<i64>,
}

impl SquareCheck {
    pub fn holds(&self) -> bool {
        self.global_sign == Some(self.expected_sign)
    }
}

fn scaled(m: &BTreeMap<ClosedPoint, KElement>, s: i64) -> BTreeMap<ClosedPoint, KElement> {
    m.iter().map(|(x, e)| (x.clone(), e.scale(s))).collect()
}

/// Compares `phi o boundary` with `delta o theta` on a graph curve
/// `t -> (t; c_1, ..., c_(n+1))`. With the ORIGINAL boundary convention and
/// the standard tame symbol they agree up to `(-1)^n`.
pub fn verify_commuting_square(c: &ParamCurve) -> Result<SquareCheck, MilnorError> {
    let c = c.convert(CoordModel::Original)?;
    if c.base().iter().all(RatFunc::is_constant) {
        return Err(MilnorError::NotAGraph(c.to_string()));
    }
    let theta = theta_map(&c)?;
    let n = c.level() - 1;
    let phi_boundary = phi_map(&c.boundary(Convention::ModelDefault)?)?;
    let delta_theta = phi_map(&psi_element(&total_delta(&theta)?, c.spec(), n)?)?;
    let expected_sign = if n % 2 == 0 { 1 } else { -1 };
    let global_sign = [expected_sign, -expected_sign]
        .into_iter()
        .find(|&s| phi_boundary == scaled(&delta_theta, s));
    Ok(SquareCheck {
        phi_boundary,
        delta_theta,
        expected_sign,
        global_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::parse_ratfunc;

    #[test]
    fn steinberg_over_f7() {
        let k = FieldSpec::prime(7).unwrap();
        let chk = verify_steinberg_curve(&[], &k.from_i64(3), &[]).unwrap();
        assert!(chk.holds());
        assert_eq!(chk.boundary.to_string(), "1*[(; 3, 5)]");
        assert_eq!(
            chk.curve.components()[2],
            parse_ratfunc("(3 - t)/(1 - t)", &k).unwrap()
        );
        assert!(matches!(
            totaro_steinberg_curve(&[], &k.one(), &[]),
            Err(MilnorError::SteinbergPrecondition)
        ));
        let chk = verify_steinberg_curve(&[k.from_i64(2)], &k.from_i64(4), &[k.from_i64(5)]).unwrap();
        assert!(chk.holds());
    }

    #[test]
    fn multiplicativity() {
        let k = FieldSpec::prime(7).unwrap();
        let chk = verify_mult_curve(&[], &k.from_i64(2), &k.from_i64(3)).unwrap();
        assert!(chk.holds());
        assert_eq!(chk.boundary.len(), 3);
        let q = FieldSpec::rationals();
        let half = q.from_i64(2).inv().unwrap();
        let chk = verify_mult_curve(&[], &q.from_i64(2), &half).unwrap();
        assert!(chk.holds());
        assert_eq!(chk.boundary.len(), 2);
    }

    #[test]
    fn xi_and_square() {
        let k = FieldSpec::prime(5).unwrap();
        let rf = |s: &str| parse_ratfunc(s, &k).unwrap();
        let pi = UniPoly::from_i64s(&k, &[-2, 1]);
        let chk = verify_xi_curve(&[rf("t + 1")], &rf("3"), &pi, 2).unwrap();
        assert!(chk.holds(), "{chk:?}");
        assert!(!chk.boundary.is_empty());
        assert!(matches!(
            xi_curve(&[rf("t - 2")], &RatFunc::constant(k.one()), &pi, 1),
            Err(MilnorError::IndistinctEntries(_))
        ));
        let c = ParamCurve::new(&k, CoordModel::Original, vec![rf("t")], vec![rf("t"), rf("t - 1")]).unwrap();
        let sq = verify_commuting_square(&c).unwrap();
        assert!(sq.holds(), "{sq:?}");
    }
}
