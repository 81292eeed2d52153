use std::collections::{BTreeMap, BTreeSet};

use super::{norm_k1, FunctionKElement, KElement, MilnorError};
use crate::cycle::CycleError;
use crate::field::{factor_univariate, FieldElement, FieldSpec, UniPoly};
use crate::poly::{Place, RatFunc};

/// The finite places where `f` has a zero or a pole.
pub fn places_of(f: &RatFunc) -> Result<Vec<Place>, MilnorError> {
    let mut out = BTreeSet::new();
    for p in [f.num(), f.den()] {
        if p.is_constant() {
            continue;
        }
        let irr = factor_univariate(p)?
            .certified_irreducibles()
            .ok_or_else(|| CycleError::UnfactorableEntry(p.display_var("t").to_string()))?;
        out.extend(irr.into_iter().map(|(pi, _)| Place::Finite(pi)));
    }
    Ok(out.into_iter().collect())
}

/// Residue `d_v` of one symbol, expanded without any relation besides
/// multilinearity and `{pi, pi} = {pi, -1}`.
///
/// Writing `f_i = u_i pi^(m_i)`, the symbol is the sum over nonempty sets
/// `S` of positions of `prod_{i in S} m_i` times the symbol with `pi` at the
/// positions of `S` and `u_i` elsewhere. All but the last `pi` become `-1`,
/// the last is moved to the end with sign `(-1)^(n - p)`, and
/// `d{a_1, ..., a_(n-1), pi} = {a_1-bar, ..., a_(n-1)-bar}`.
fn tame_one(
    v: &Place,
    entries: &[RatFunc],
    field: &FieldSpec,
    mult: i64,
    out: &mut KElement,
) -> Result<(), MilnorError> {
    let n = entries.len();
    let vals: Vec<i64> = entries.iter().map(|f| v.valuation(f)).collect();
    let units: Vec<FieldElement> = entries
        .iter()
        .map(|f| v.reduce_in(&v.unit_part(f), field))
        .collect::<Result<_, _>>()?;
    let minus_one = -&field.one();
    let support: Vec<usize> = (0..n).filter(|&i| vals[i] != 0).collect();
    for mask in 1u64..(1u64 << support.len()) {
        let set: Vec<usize> = (0..support.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| support[k])
            .collect();
        let coeff: i64 = set.iter().map(|&i| vals[i]).product();
        let last = *set.last().expect("nonempty");
        let sign = if (n - 1 - last).is_multiple_of(2) { 1 } else { -1 };
        let residue: Vec<FieldElement> = (0..n)
            .filter(|&i| i != last)
            .map(|i| if set.contains(&i) { minus_one.clone() } else { units[i].clone() })
            .collect();
        out.add_symbol(residue, mult * sign * coeff)?;
    }
    Ok(())
}

/// The tame symbol `d_v: K_n(k(t)) -> K_(n-1)(k(v))`, returned unreduced
/// over the residue field.
pub fn tame_symbol(v: &Place, s: &FunctionKElement) -> Result<KElement, MilnorError> {
    if s.degree() == 0 {
        return Err(MilnorError::DegreeMismatch(1, 0));
    }
    let field = v.residue_field(s.spec())?;
    let mut out = KElement::zero(&field, s.degree() - 1);
    for (entries, m) in s.terms() {
        tame_one(v, entries, &field, m, &mut out)?;
    }
    Ok(out)
}

/// `d_v` at every place where some entry is not a unit, and at infinity.
/// All other places give 0.
pub fn total_delta(s: &FunctionKElement) -> Result<BTreeMap<Place, KElement>, MilnorError> {
    let mut places = BTreeSet::new();
    for (entries, _) in s.terms() {
        for f in entries {
            places.extend(places_of(f)?);
        }
    }
    places.insert(Place::Infinity);
    places
        .into_iter()
        .map(|v| Ok((v.clone(), tame_symbol(&v, s)?)))
        .collect()
}

/// `prod_v N_(k(v)/k)(d_v {f, g})` in `k^x`; Weil reciprocity says it is 1.
pub fn weil_reciprocity_defect(f: &RatFunc, g: &RatFunc) -> Result<FieldElement, MilnorError> {
    let k = f.spec().clone();
    let s = FunctionKElement::symbol(&k, vec![f.clone(), g.clone()])?;
    let mut acc = k.one();
    for (_, e) in total_delta(&s)? {
        for (entries, m) in e.terms() {
            let n = norm_k1(&entries[0])?;
            acc = &acc * &n.pow_i64(m)?;
        }
    }
    Ok(acc)
}

/// `u * pi^r` as a rational function.
pub(crate) fn unit_times_power(u: &RatFunc, pi: &UniPoly, r: i64) -> Result<RatFunc, MilnorError> {
    Ok(u.mul(&RatFunc::from_poly(pi.clone()).pow(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_ratfunc;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn sym(k: &FieldSpec, entries: &[&str]) -> FunctionKElement {
        FunctionKElement::symbol(k, entries.iter().map(|s| parse_ratfunc(s, k).unwrap()).collect()).unwrap()
    }

    #[test]
    fn basic_rules() {
        let k = f5();
        let at_t = Place::at(&k.zero());
        assert_eq!(tame_symbol(&at_t, &sym(&k, &["t", "3"])).unwrap().to_string(), "-{3}");
        assert_eq!(tame_symbol(&at_t, &sym(&k, &["3", "t"])).unwrap().to_string(), "{3}");
        let at_1 = Place::at(&k.one());
        assert!(tame_symbol(&at_1, &sym(&k, &["t", "t"])).unwrap().is_zero());
        // d{f1, u t^r} = r {f1-bar}
        let e = tame_symbol(&at_t, &sym(&k, &["t + 2", "3*t^2*(t + 1)"])).unwrap();
        assert_eq!(e.to_string(), "2*{2}");
    }

    #[test]
    fn delta_of_t_and_t_minus_one() {
        let k = f5();
        let d = total_delta(&sym(&k, &["t", "t - 1"])).unwrap();
        let nonzero: Vec<String> = d.iter().filter(|(_, e)| !e.is_zero()).map(|(v, _)| v.to_string()).collect();
        assert_eq!(nonzero, vec!["t".to_string(), "inf".to_string()]);
        assert!(total_delta(&sym(&k, &["3"])).unwrap().values().all(KElement::is_zero));
    }

    #[test]
    fn weil_reciprocity_examples() {
        let k = FieldSpec::prime(7).unwrap();
        for (f, g) in [("t^2 + 1", "t - 3"), ("(t^3 + t + 1)/(t + 2)", "t^2 + 3*t + 5"), ("t", "t")] {
            let f = parse_ratfunc(f, &k).unwrap();
            let g = parse_ratfunc(g, &k).unwrap();
            assert!(weil_reciprocity_defect(&f, &g).unwrap().is_one());
        }
    }
}
