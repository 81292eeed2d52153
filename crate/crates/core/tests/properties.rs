use chowmod::cycle::{BoundaryOptions, ClosedPoint, CoordModel, Embedding, HypersurfaceCycle, ModulusDatum};
use chowmod::field::{factor_univariate, FieldElement, FieldSpec, UniPoly};
use chowmod::milnor::{phi_map, psi_map, tame_symbol, FunctionKElement, KElement};
use chowmod::poly::{parse_poly, MultiPoly, Place, RatFunc, Var, VarSet};
use chowmod::witness::{generator_cycle, rho, verify_certificate};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn specs() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(13).unwrap(),
        FieldSpec::standard(4).unwrap(),
        FieldSpec::standard(9).unwrap(),
        FieldSpec::standard(27).unwrap(),
        FieldSpec::rationals(),
        FieldSpec::extension(&FieldSpec::rationals(), &UniPoly::from_i64s(&FieldSpec::rationals(), &[-2, 0, 1])).unwrap(),
    ]
}

fn scalar(k: &FieldSpec, a: i64, b: i64) -> FieldElement {
    if k.characteristic() == 0 {
        k.from_rational(&BigRational::new(BigInt::from(a), BigInt::from(b.abs() + 1))).unwrap()
    } else {
        k.from_i64(a)
    }
}

/// An element from a few small integers, spread over the power basis.
fn elem(k: &FieldSpec, c: &[(i64, i64)]) -> FieldElement {
    let base = k.base();
    let coeffs: Vec<FieldElement> = c.iter().take(k.degree()).map(|&(a, b)| scalar(&base, a, b)).collect();
    k.from_base_coeffs(&coeffs).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 0i64..6), 3)
}

fn f7() -> FieldSpec {
    FieldSpec::prime(7).unwrap()
}

/// A polynomial in `t1, t2, y1, y2` over `F_7` or `Q`.
fn poly_in(k: &FieldSpec, vars: VarSet, terms: &[(Vec<u32>, i64, i64)]) -> MultiPoly {
    MultiPoly::from_terms(
        k,
        vars,
        terms.iter().map(|(e, a, b)| (e[..vars.len()].to_vec(), scalar(k, *a, *b))),
    )
}

fn terms() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, 4), -9i64..9, 0i64..4), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(s in 0usize..8, a in coeffs(), b in coeffs(), c in coeffs()) {
        let k = &specs()[s];
        let (x, y, z) = (elem(k, &a), elem(k, &b), elem(k, &c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, k.zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        } else {
            prop_assert!(x.inv().is_err());
        }
    }

    #[test]
    fn factorization_reexpands(p in prop::sample::select(vec![2u64, 3, 5, 7, 13]), c in prop::collection::vec(-50i64..50, 1..10)) {
        let k = FieldSpec::prime(p).unwrap();
        let f = UniPoly::from_i64s(&k, &c);
        prop_assume!(!f.is_zero());
        let fac = factor_univariate(&f).unwrap();
        prop_assert!(fac.unfactored.is_empty());
        prop_assert_eq!(fac.expand(), f);
    }

    #[test]
    fn ring_axioms(q in any::<bool>(), a in terms(), b in terms(), c in terms()) {
        let k = if q { FieldSpec::rationals() } else { f7() };
        let v = VarSet::new(2, 2);
        let (f, g, h) = (poly_in(&k, v, &a), poly_in(&k, v, &b), poly_in(&k, v, &c));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(q in any::<bool>(), a in terms(), b in terms()) {
        let k = if q { FieldSpec::rationals() } else { f7() };
        let v = VarSet::new(2, 2);
        let (f, g) = (poly_in(&k, v, &a), poly_in(&k, v, &b));
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).exact_div(&g).unwrap(), f);
    }

    #[test]
    fn substitutions_commute(a in terms(), x in 0i64..7, y in 0i64..7) {
        let k = f7();
        let f = poly_in(&k, VarSet::new(2, 2), &a);
        let (sx, sy) = ((Var::Y(1), k.from_i64(x)), (Var::Y(2), k.from_i64(y)));
        let one = f.substitute(std::slice::from_ref(&sx)).unwrap().substitute(std::slice::from_ref(&sy)).unwrap();
        let two = f.substitute(std::slice::from_ref(&sy)).unwrap().substitute(std::slice::from_ref(&sx)).unwrap();
        prop_assert_eq!(one, two);
    }

    #[test]
    fn parse_inverts_display(q in any::<bool>(), a in terms()) {
        let k = if q { FieldSpec::rationals() } else { f7() };
        let v = VarSet::new(2, 2);
        let f = poly_in(&k, v, &a);
        prop_assert_eq!(parse_poly(&f.to_string(), &k, v).unwrap(), f);
    }

    #[test]
    fn coefficients_reassemble(a in terms(), which in 0usize..4) {
        let k = f7();
        let vars = VarSet::new(2, 2);
        let f = poly_in(&k, vars, &a);
        prop_assume!(!f.is_zero());
        let v = vars.var_at(which);
        let x = MultiPoly::var(&k, vars, v).unwrap();
        let mut acc = MultiPoly::zero(&k, vars);
        for e in 0..=f.degree_in(v).unwrap() {
            acc = acc.add(&f.coefficient_of(v, e).unwrap().mul(&x.pow(e)));
        }
        prop_assert_eq!(acc, f);
    }
}

/// `1 - t1 t2 g` with `g` multilinear in `y1, y2`.
fn admissible(k: &FieldSpec, c: &[(i64, i64)], higher: &[(i64, i64)]) -> Option<HypersurfaceCycle> {
    let vars = VarSet::new(2, 2);
    let monos = [[0, 0], [1, 0], [0, 1], [1, 1]];
    let g = MultiPoly::from_terms(k, vars, monos.iter().zip(c).map(|(y, &(a, b))| (vec![0, 0, y[0], y[1]], scalar(k, a, b))));
    let h = MultiPoly::from_terms(k, vars, monos.iter().zip(higher).map(|(y, &(a, b))| (vec![1, 0, y[0], y[1]], scalar(k, a, b))));
    let tt = MultiPoly::t_product(k, vars);
    let f = MultiPoly::one(k, vars).sub(&tt.mul(&g.add(&h)));
    if f.is_constant() {
        return None;
    }
    let z = HypersurfaceCycle::single(&f, CoordModel::Psi).ok()?;
    z.check_face_condition().passed().then_some(z)
}

fn four() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..6, 0i64..3), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conversion_commutes_with_boundary(q in any::<bool>(), c in four(), h in four()) {
        let k = if q { FieldSpec::rationals() } else { f7() };
        let Some(w) = admissible(&k, &c, &h) else { return Ok(()) };
        let Ok(orig) = w.convert(CoordModel::Original) else { return Ok(()) };
        let opts = BoundaryOptions::strict();
        let lhs = w.boundary(opts).unwrap().convert(CoordModel::Original).unwrap();
        prop_assert_eq!(lhs, orig.boundary(opts).unwrap());
        prop_assert!(orig.boundary(opts).unwrap().boundary(opts).unwrap().is_empty());
    }

    #[test]
    fn degenerate_components_vanish(a in -6i64..6, b in 1i64..6) {
        let k = f7();
        let vars = VarSet::new(2, 1);
        let f = parse_poly(&format!("1 - t1*t2*({a} + {b}*t1)"), &k, vars).unwrap();
        let z = HypersurfaceCycle::single(&f, CoordModel::Psi).unwrap();
        prop_assert!(z.boundary(BoundaryOptions::strict()).unwrap().is_empty());
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        prop_assert!(rho(&z, &d).unwrap().is_zero());
    }

    #[test]
    fn rho_is_linear_and_ignores_higher_terms(a in -9i64..9, b in -9i64..9, c in -9i64..9, m in -3i64..3, n in -3i64..3) {
        let k = FieldSpec::rationals();
        let vars = VarSet::new(2, 1);
        let d = ModulusDatum::monomial(&k, &[1, 1]).unwrap();
        let f = parse_poly(&format!("1 - t1*t2*({a}*y1 + 1)"), &k, vars).unwrap();
        let g = parse_poly(&format!("1 - t1*t2*({b}*y1 + 2) + t1^2*t2*({c}*y1 + 1)"), &k, vars).unwrap();
        let g_low = parse_poly(&format!("1 - t1*t2*({b}*y1 + 2)"), &k, vars).unwrap();
        let mut z = HypersurfaceCycle::new(&k, vars, CoordModel::Psi);
        z.add_component(&f, m).unwrap();
        z.add_component(&g, n).unwrap();
        let rz = rho(&z, &d).unwrap();
        let single = |p: &MultiPoly| rho(&HypersurfaceCycle::single(p, CoordModel::Psi).unwrap(), &d).unwrap();
        prop_assert_eq!(rz, &single(&f).times(m) + &single(&g).times(n));
        prop_assert_eq!(single(&g), single(&g_low));
    }

    #[test]
    fn pushforward_is_functorial(a in 1i64..7, b in 0i64..7, s in 1i64..7) {
        let k = f7();
        let v1 = VarSet::new(1, 0);
        let v2 = VarSet::new(2, 0);
        let inner = Embedding::new(&k, 1, vec![
            parse_poly("t1", &k, v1).unwrap(),
            parse_poly(&format!("{a}*t1 + {b}"), &k, v1).unwrap(),
        ], vec![]).unwrap();
        let outer = Embedding::new(&k, 2, vec![
            parse_poly("t1", &k, v2).unwrap(),
            parse_poly("t2", &k, v2).unwrap(),
            parse_poly("t1*t2 + 1", &k, v2).unwrap(),
        ], vec![]).unwrap();
        let p = ClosedPoint::new(&k, vec![k.from_i64(s)], vec![k.from_i64(3)]).unwrap();
        let composed = outer.compose(&inner).unwrap().push_point(&p).unwrap();
        prop_assert_eq!(composed, outer.push_point(&inner.push_point(&p).unwrap()).unwrap());
    }

    #[test]
    fn tame_symbol_rules(p in prop::sample::select(vec![5u64, 7]), c in 0i64..7, u in prop::collection::vec((1i64..5, 1i64..5), 1..3), m in -3i64..3) {
        let k = FieldSpec::prime(p).unwrap();
        let pi = UniPoly::from_i64s(&k, &[-c, 1]);
        let v = Place::Finite(pi.clone());
        // x (t - c + w) reduces to x w at t = c
        let units: Vec<RatFunc> = u.iter().map(|&(x, w)| RatFunc::from_poly(UniPoly::from_i64s(&k, &[w - c, 1])).scale(&k.from_i64(x))).collect();
        let bars: Vec<FieldElement> = u.iter().map(|&(x, w)| k.from_i64(x * w)).collect();
        prop_assert!(units.iter().zip(&bars).all(|(f, b)| v.reduce(f).unwrap() == *b));
        let mut last = units.clone();
        last.push(RatFunc::from_poly(pi.clone()));
        let s = FunctionKElement::symbol(&k, last).unwrap();
        let mut want = KElement::zero(&k, units.len());
        want.add_symbol(bars.clone(), 1).unwrap();
        prop_assert_eq!(tame_symbol(&v, &s).unwrap(), want.clone());
        prop_assert_eq!(tame_symbol(&v, &s.scale(m)).unwrap(), want.scale(m));
        // moving pi to the front costs (-1)^(n-1)
        let mut first = vec![RatFunc::from_poly(pi.clone())];
        first.extend(units.iter().cloned());
        let s = FunctionKElement::symbol(&k, first).unwrap();
        let sign = if units.len().is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(tame_symbol(&v, &s).unwrap(), want.scale(sign));
        let all_units = FunctionKElement::symbol(&k, units.clone()).unwrap();
        prop_assert!(tame_symbol(&v, &all_units).unwrap().is_zero());
    }

    #[test]
    fn phi_inverts_psi(p in prop::sample::select(vec![5u64, 7, 11]), x in 0i64..11, ys in prop::collection::vec(1i64..11, 1..4)) {
        let k = FieldSpec::prime(p).unwrap();
        let entries: Vec<FieldElement> = ys.iter().map(|&y| k.from_i64(y)).collect();
        prop_assume!(entries.iter().all(|e| !e.is_zero()));
        let e = KElement::symbol(&k, entries.clone()).unwrap();
        let z = psi_map(&[k.from_i64(x)], &e, &k).unwrap();
        let back = phi_map(&z).unwrap();
        if entries.iter().any(FieldElement::is_one) {
            prop_assert!(z.is_empty());
        } else {
            let point = ClosedPoint::new(&k, vec![k.from_i64(x)], vec![]).unwrap();
            prop_assert_eq!(back.get(&point), Some(&e));
            prop_assert_eq!(back.len(), 1);
        }
    }

    #[test]
    fn verification_is_deterministic(a in -20i64..20, r in 2usize..4) {
        let k = FieldSpec::rationals();
        let (_, cert) = generator_cycle(&k.from_i64(a), r).unwrap();
        let once = verify_certificate(&cert).unwrap();
        prop_assert!(once);
        prop_assert_eq!(once, verify_certificate(&cert).unwrap());
        prop_assert_eq!(cert.to_json(), cert.clone().to_json());
    }
}
