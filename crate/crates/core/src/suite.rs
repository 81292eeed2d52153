//! Seeded property corpora over the whole library. Every instance draws
//! from its own ChaCha stream, keyed by the seed, the suite and the
//! instance index, so reports do not depend on scheduling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{
    check_modulus_codim1, BoundaryOptions, ClosedPoint, Convention, CoordModel, HypersurfaceCycle, ModulusDatum, ModulusVerdict,
};
use crate::field::{is_certified_irreducible, FieldElement, FieldSpec, UniPoly};
use crate::milnor::{
    k2_presentation_oracle, tame_symbol, verify_commuting_square, verify_mult_curve, verify_steinberg_curve, verify_xi_curve,
    weil_reciprocity_defect, FunctionKElement, KElement,
};
use crate::poly::{MultiPoly, Place, RatFunc, VarSet};
use crate::witness::{
    bounding_surface, generator_cycle, rho, verify_certificate, verify_rho_reciprocity, zero_cycle_vanishing_witness, Variant,
    WitnessCertificate,
};

pub const SUITE_NAMES: [&str; 13] = [
    "boundary_squared",
    "bounding_surface",
    "degree_bound",
    "k2_oracle",
    "rho_generators",
    "rho_reciprocity",
    "tame_symbol",
    "totaro_mult",
    "totaro_steinberg",
    "weil_reciprocity",
    "xi_curve",
    "zero_cycle_vanishing",
    "commuting_square",
];

/// Instance counts per suite. `k2_oracle` counts prime powers up to
/// `k2_max_q`; `rho_generators` counts random rationals on top of the
/// full enumeration of `F_5`, `F_7`, `F_11`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSizes {
    pub rho_reciprocity: usize,
    pub rho_generators: usize,
    pub bounding_surface: usize,
    pub degree_bound: usize,
    pub zero_cycle_vanishing: usize,
    pub k2_max_q: u128,
    pub tame_symbol: usize,
    pub weil_reciprocity: usize,
    pub totaro: usize,
    pub boundary_squared: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            rho_reciprocity: 300,
            rho_generators: 50,
            bounding_surface: 200,
            degree_bound: 100,
            zero_cycle_vanishing: 200,
            k2_max_q: 16,
            tame_symbol: 100,
            weil_reciprocity: 100,
            totaro: 50,
            boundary_squared: 200,
        }
    }
}

impl SuiteSizes {
    /// Overrides from `name=count` pairs; `totaro` sets all three curve suites.
    pub fn with_overrides(mut self, pairs: &[(String, u128)]) -> Result<SuiteSizes, String> {
        for (name, v) in pairs {
            let n = *v as usize;
            match name.as_str() {
                "rho_reciprocity" => self.rho_reciprocity = n,
                "rho_generators" => self.rho_generators = n,
                "bounding_surface" => self.bounding_surface = n,
                "degree_bound" => self.degree_bound = n,
                "zero_cycle_vanishing" => self.zero_cycle_vanishing = n,
                "k2_oracle" | "k2_max_q" => self.k2_max_q = *v,
                "tame_symbol" => self.tame_symbol = n,
                "weil_reciprocity" => self.weil_reciprocity = n,
                "totaro" | "totaro_steinberg" | "totaro_mult" | "xi_curve" | "commuting_square" => self.totaro = n,
                "boundary_squared" => self.boundary_squared = n,
                other => return Err(format!("unknown suite {other:?}")),
            }
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// The first few failures, as `instance: reason`.
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub sizes: SuiteSizes,
    pub suites: Vec<SuiteResult>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn get(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

const MAX_FAILURES: usize = 5;

type Check = Result<(), String>;

fn fail(msg: impl std::fmt::Display) -> String {
    msg.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng_for(seed: u64, suite: &str, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = SUITE_NAMES.iter().position(|s| *s == suite).expect("known suite") as u64;
    rng.set_stream((id << 32) | i as u64);
    rng
}

fn run_instances(seed: u64, name: &str, total: usize, f: impl Fn(&mut ChaCha8Rng, usize) -> Check + Sync) -> SuiteResult {
    let results: Vec<Check> = (0..total)
        .into_par_iter()
        .map(|i| f(&mut rng_for(seed, name, i), i))
        .collect();
    let failures: Vec<String> = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| format!("{i}: {e}")))
        .collect();
    SuiteResult {
        name: name.to_string(),
        passed: total - failures.len(),
        total,
        failures: failures.into_iter().take(MAX_FAILURES).collect(),
    }
}

fn test_fields() -> [FieldSpec; 3] {
    [FieldSpec::prime(5).unwrap(), FieldSpec::prime(7).unwrap(), FieldSpec::rationals()]
}

fn field_for(i: usize) -> FieldSpec {
    test_fields()[i % 3].clone()
}

fn rational(k: &FieldSpec, num: i64, den: i64) -> FieldElement {
    k.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
        .expect("nonzero denominator")
}

/// A random element; over `Q` a small fraction.
fn element(rng: &mut ChaCha8Rng, k: &FieldSpec) -> FieldElement {
    match k.characteristic() {
        0 => rational(k, rng.gen_range(-9..=9), rng.gen_range(1..=4)),
        p => k.from_i64(rng.gen_range(0..p as i64)),
    }
}

fn element_avoiding(rng: &mut ChaCha8Rng, k: &FieldSpec, bad: &[i64]) -> FieldElement {
    loop {
        let x = element(rng, k);
        if !bad.iter().any(|&b| x == k.from_i64(b)) {
            return x;
        }
    }
}

fn nonzero(rng: &mut ChaCha8Rng, k: &FieldSpec) -> FieldElement {
    element_avoiding(rng, k, &[0])
}

/// Exponent vector in `t1..tr, y1..yn`.
fn mono(vars: VarSet, t: &[u32], y: &[u32]) -> Vec<u32> {
    let mut e = vec![0; vars.len()];
    e[..t.len()].copy_from_slice(t);
    e[vars.r..vars.r + y.len()].copy_from_slice(y);
    e
}

/// `g` with every `y`-degree at most 1, each `y`-monomial carrying a
/// coefficient and, if `t_terms`, a random `t`-monomial of degree at most 1.
fn multilinear_g(rng: &mut ChaCha8Rng, k: &FieldSpec, vars: VarSet, t_terms: bool) -> MultiPoly {
    let mut terms = Vec::new();
    for mask in 0u32..(1 << vars.n) {
        let y: Vec<u32> = (0..vars.n).map(|j| mask >> j & 1).collect();
        let mut t = vec![0; vars.r];
        if t_terms && rng.gen_bool(0.3) {
            t[rng.gen_range(0..vars.r)] = 1;
        }
        terms.push((mono(vars, &t, &y), element(rng, k)));
    }
    MultiPoly::from_terms(k, vars, terms)
}

fn t_power(k: &FieldSpec, vars: VarSet, m: &[u32]) -> MultiPoly {
    MultiPoly::from_terms(k, vars, [(mono(vars, m, &[]), k.one())])
}

/// `1 - t^m g + t^m t_j h` with multilinear `g`, `h`: admissible for `D_m`.
fn admissible_component(rng: &mut ChaCha8Rng, k: &FieldSpec, vars: VarSet, m: &[u32], higher: bool) -> MultiPoly {
    let tm = t_power(k, vars, m);
    let mut f = MultiPoly::one(k, vars).sub(&tm.mul(&multilinear_g(rng, k, vars, vars.n > 0)));
    if higher {
        let mut e = vec![0; vars.r];
        e[rng.gen_range(0..vars.r)] = 1;
        let tj = t_power(k, vars, &e);
        f = f.add(&tm.mul(&tj).mul(&multilinear_g(rng, k, vars, false)));
    }
    f
}

fn random_cycle(
    rng: &mut ChaCha8Rng,
    k: &FieldSpec,
    vars: VarSet,
    m: &[u32],
    components: usize,
    higher: bool,
) -> Option<HypersurfaceCycle> {
    let mut z = HypersurfaceCycle::new(k, vars, CoordModel::Psi);
    for _ in 0..components {
        let f = admissible_component(rng, k, vars, m, higher);
        if f.is_constant() {
            continue;
        }
        let mult = *[-2, -1, 1, 2].choose(rng).unwrap();
        z.add_component(&f, mult).ok()?;
    }
    Some(z)
}

fn certified(z: &HypersurfaceCycle, d: &ModulusDatum) -> Result<bool, String> {
    Ok(check_modulus_codim1(z, d).map_err(fail)?.verdict == ModulusVerdict::Certified)
}

fn valid_and_reverified(c: &WitnessCertificate) -> Check {
    if !c.is_valid() {
        let bad = c.transcript.iter().find(|e| e.status == crate::witness::Status::Fail);
        return Err(format!("invalid certificate: {bad:?}"));
    }
    ensure(verify_certificate(c).map_err(fail)?, || "verification disagrees".into())
}

fn rho_reciprocity(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "rho_reciprocity", total, |rng, i| {
        let k = field_for(i);
        let vars = VarSet::new(2, 2);
        let d = ModulusDatum::monomial(&k, &[1, 1]).map_err(fail)?;
        let [a, b, c, e] = [0; 4].map(|_| element(rng, &k));
        let higher = i % 2 == 1;
        let tt = t_power(&k, vars, &[1, 1]);
        let g = MultiPoly::from_terms(
            &k,
            vars,
            [
                (mono(vars, &[], &[1, 1]), a.clone()),
                (mono(vars, &[], &[1, 0]), b.clone()),
                (mono(vars, &[], &[0, 1]), c.clone()),
                (mono(vars, &[], &[0, 0]), e),
            ],
        );
        let mut f = MultiPoly::one(&k, vars).sub(&tt.mul(&g));
        if higher {
            let j = rng.gen_range(0..2);
            let tj = t_power(&k, vars, if j == 0 { &[1, 0] } else { &[0, 1] });
            f = f.add(&tt.mul(&tj).mul(&multilinear_g(rng, &k, vars, false)));
        }
        if f.is_constant() {
            return Ok(());
        }
        let w = HypersurfaceCycle::single(&f, CoordModel::Psi).map_err(fail)?;
        let cert = verify_rho_reciprocity(&w, &d).map_err(fail)?;
        valid_and_reverified(&cert)?;
        let faces: Vec<String> = cert.transcript[2..6].iter().map(|e| e.value.clone().unwrap_or_default()).collect();
        let want: Vec<String> = [c.clone(), &a + &c, b.clone(), &a + &b].iter().map(|x| x.to_string()).collect();
        ensure(faces == want, || format!("face values {faces:?}, expected {want:?}"))
    })
}

fn rho_generators(seed: u64, random_q: usize) -> SuiteResult {
    let mut values: Vec<(FieldSpec, Option<FieldElement>)> = Vec::new();
    for p in [5u64, 7, 11] {
        let k = FieldSpec::prime(p).unwrap();
        values.extend(k.elements().map(|a| (k.clone(), Some(a))).collect::<Vec<_>>());
    }
    let q = FieldSpec::rationals();
    values.extend((0..random_q).map(|_| (q.clone(), None)));
    let total = 2 * values.len();
    run_instances(seed, "rho_generators", total, |rng, i| {
        let (k, a) = &values[i / 2];
        let r = 2 + i % 2;
        let a = a.clone().unwrap_or_else(|| element(rng, k));
        let (z, cert) = generator_cycle(&a, r).map_err(fail)?;
        valid_and_reverified(&cert)?;
        let d = ModulusDatum::monomial(k, &vec![1; r]).map_err(fail)?;
        let got = rho(&z, &d).map_err(fail)?;
        ensure(got == a, || format!("rho(Z_{a}) = {got}"))
    })
}

fn bounding(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "bounding_surface", total, |rng, i| {
        let k = field_for(i);
        let r = 2 + i % 2;
        let vars = VarSet::new(r, 0);
        let d = ModulusDatum::monomial(&k, &vec![1; r]).map_err(fail)?;
        let mut z = HypersurfaceCycle::new(&k, vars, CoordModel::Psi);
        for _ in 0..rng.gen_range(1..=3) {
            let mut terms = vec![(vec![0; r], element(rng, &k))];
            for _ in 0..rng.gen_range(0..3) {
                let mut e = vec![0; r];
                e[rng.gen_range(0..r)] += 1;
                terms.push((e, element(rng, &k)));
            }
            let g = MultiPoly::from_terms(&k, vars, terms);
            let f = MultiPoly::one(&k, vars).sub(&MultiPoly::t_product(&k, vars).mul(&g));
            if !f.is_constant() {
                z.add_component(&f, *[-1, 1, 2].choose(rng).unwrap()).map_err(fail)?;
            }
        }
        ensure(certified(&z, &d)?, || "corpus cycle not admissible".into())?;
        valid_and_reverified(&bounding_surface(&z, &d).map_err(fail)?)
    })
}

fn degree_bound(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "degree_bound", total, |rng, i| {
        let k = field_for(i);
        let r = 2 + i % 2;
        let n = 1 + rng.gen_range(0..2);
        let vars = VarSet::new(r, n);
        let m: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=2)).collect();
        let d = ModulusDatum::monomial(&k, &m).map_err(fail)?;
        let low = multilinear_g(rng, &k, vars, true);
        let j = rng.gen_range(0..n);
        let mut y = vec![0; n];
        y[j] = rng.gen_range(2..=3);
        let mut t = vec![0; r];
        if rng.gen_bool(0.5) {
            t[rng.gen_range(0..r)] = 1;
        }
        let high_term = MultiPoly::from_terms(&k, vars, [(mono(vars, &t, &y), nonzero(rng, &k))]);
        let tm = t_power(&k, vars, &m);
        let one = MultiPoly::one(&k, vars);
        let bad = HypersurfaceCycle::single(&one.sub(&tm.mul(&low.add(&high_term))), CoordModel::Psi).map_err(fail)?;
        // the counterpart caps every y-exponent at 1
        let capped: Vec<(Vec<u32>, FieldElement)> = high_term
            .terms()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[r..].iter_mut().for_each(|x| *x = (*x).min(1));
                (e, c.clone())
            })
            .collect();
        let good_g = low.add(&MultiPoly::from_terms(&k, vars, capped));
        let good = one.sub(&tm.mul(&good_g));
        let verdict = check_modulus_codim1(&bad, &d).map_err(fail)?.verdict;
        ensure(verdict == ModulusVerdict::ViolatesNecessary, || format!("{bad}: {verdict:?}"))?;
        if good.is_constant() {
            return Ok(());
        }
        let good = HypersurfaceCycle::single(&good, CoordModel::Psi).map_err(fail)?;
        ensure(certified(&good, &d)?, || format!("{good} not certified"))
    })
}

fn zero_cycles(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "zero_cycle_vanishing", total, |rng, i| {
        let k = field_for(i);
        let r = 2 + (i / 3) % 2;
        let m: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=3)).collect();
        let d = ModulusDatum::monomial(&k, &m).map_err(fail)?;
        let t: Vec<FieldElement> = (0..r).map(|_| nonzero(rng, &k)).collect();
        let z = ClosedPoint::new(&k, t, vec![]).map_err(fail)?;
        let variant = match i % 4 {
            3 => Variant::ProductBase {
                base: (0..rng.gen_range(1..=2)).map(|_| element(rng, &k).to_string()).collect(),
            },
            _ => Variant::Plain,
        };
        valid_and_reverified(&zero_cycle_vanishing_witness(&z, &d, &variant).map_err(fail)?)
    })
}

fn k2_oracle(max_q: u128) -> SuiteResult {
    let qs: Vec<u128> = (2..=max_q).filter(|&q| crate::field::prime_power(q).is_some()).collect();
    let results: Vec<Check> = qs
        .par_iter()
        .map(|&q| {
            let pres = k2_presentation_oracle(q).map_err(fail)?;
            ensure(pres.is_trivial(), || format!("q = {q}: {pres:?}"))
        })
        .collect();
    let failures: Vec<String> = results
        .iter()
        .zip(&qs)
        .filter_map(|(r, q)| r.as_ref().err().map(|e| format!("{q}: {e}")))
        .collect();
    SuiteResult {
        name: "k2_oracle".into(),
        passed: qs.len() - failures.len(),
        total: qs.len(),
        failures: failures.into_iter().take(MAX_FAILURES).collect(),
    }
}

fn finite_field_for(i: usize) -> FieldSpec {
    FieldSpec::prime([5, 7][i % 2]).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, k: &FieldSpec, max_deg: usize) -> UniPoly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let p = UniPoly::new(k, (0..=deg).map(|_| element(rng, k)).collect());
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_irreducible(rng: &mut ChaCha8Rng, k: &FieldSpec, max_deg: usize) -> UniPoly {
    loop {
        let deg = rng.gen_range(1..=max_deg);
        let mut c: Vec<FieldElement> = (0..deg).map(|_| element(rng, k)).collect();
        c.push(k.one());
        let p = UniPoly::new(k, c);
        if is_certified_irreducible(&p) {
            return p;
        }
    }
}

/// A rational function with numerator and denominator prime to `pi`.
fn unit_at(rng: &mut ChaCha8Rng, k: &FieldSpec, pi: &UniPoly) -> RatFunc {
    let mut part = || loop {
        let p = random_poly(rng, k, 2);
        if !p.rem(pi).expect("pi nonzero").is_zero() {
            return p;
        }
    };
    let (num, den) = (part(), part());
    RatFunc::new(num, den).expect("nonzero denominator")
}

fn tame(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "tame_symbol", total, |rng, i| {
        let k = finite_field_for(i);
        let pi = random_irreducible(rng, &k, 2);
        let v = Place::Finite(pi.clone());
        let n = rng.gen_range(1..=3);
        let units: Vec<RatFunc> = (0..n).map(|_| unit_at(rng, &k, &pi)).collect();
        let u = unit_at(rng, &k, &pi);
        let r = rng.gen_range(-3..=3);
        let last = u.mul(&RatFunc::from_poly(pi.clone()).pow(r).map_err(fail)?);
        let mut entries = units.clone();
        entries.push(last);
        let s = FunctionKElement::symbol(&k, entries).map_err(fail)?;
        let got = tame_symbol(&v, &s).map_err(fail)?;
        let field = v.residue_field(&k).map_err(fail)?;
        let bars: Vec<FieldElement> = units.iter().map(|f| v.reduce_in(f, &field)).collect::<Result<_, _>>().map_err(fail)?;
        let mut want = KElement::zero(&field, n);
        want.add_symbol(bars, r).map_err(fail)?;
        ensure(got == want, || format!("tame symbol {got}, formula {want}"))
    })
}

fn weil(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "weil_reciprocity", total, |rng, i| {
        let k = finite_field_for(i);
        let mut rf = || RatFunc::new(random_poly(rng, &k, 3), random_poly(rng, &k, 2)).expect("nonzero");
        let (f, g) = (rf(), rf());
        let defect = weil_reciprocity_defect(&f, &g).map_err(fail)?;
        ensure(defect.is_one(), || format!("defect {defect} for {{{f}, {g}}}"))
    })
}

fn steinberg(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "totaro_steinberg", total, |rng, i| {
        let k = field_for(i);
        let x: Vec<FieldElement> = (0..rng.gen_range(0..=2)).map(|_| element(rng, &k)).collect();
        let f1 = element_avoiding(rng, &k, &[0, 1]);
        let rest: Vec<FieldElement> = (0..rng.gen_range(0..=2)).map(|_| element_avoiding(rng, &k, &[0, 1])).collect();
        let chk = verify_steinberg_curve(&x, &f1, &rest).map_err(fail)?;
        ensure(chk.holds() && chk.boundary.len() == 1, || format!("{}: boundary {}", chk.curve, chk.boundary))
    })
}

fn mult(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "totaro_mult", total, |rng, i| {
        let k = field_for(i);
        let x: Vec<FieldElement> = (0..rng.gen_range(0..=2)).map(|_| element(rng, &k)).collect();
        let f = element_avoiding(rng, &k, &[0, 1]);
        let g = element_avoiding(rng, &k, &[0, 1]);
        let chk = verify_mult_curve(&x, &f, &g).map_err(fail)?;
        ensure(chk.holds(), || format!("{}: boundary {}", chk.curve, chk.boundary))
    })
}

/// Entries with pairwise disjoint supports, all prime to `pi`. Over `Q`
/// only linear factors are used, so every boundary point is rational.
fn xi_instance(rng: &mut ChaCha8Rng, k: &FieldSpec) -> (Vec<RatFunc>, RatFunc, UniPoly, i64) {
    let mut pool: Vec<UniPoly> = Vec::new();
    let max_deg = if k.is_finite() { 2 } else { 1 };
    while pool.len() < 6 {
        let p = if k.is_finite() {
            random_irreducible(rng, k, max_deg)
        } else {
            UniPoly::linear_root(&k.from_i64(rng.gen_range(-6..=6)))
        };
        if !pool.contains(&p) {
            pool.push(p);
        }
    }
    let pi = pool.pop().unwrap();
    let n = rng.gen_range(1..=2);
    let mut entries = Vec::new();
    for _ in 0..n {
        let mut f = RatFunc::constant(nonzero(rng, k));
        for _ in 0..rng.gen_range(1..=2) {
            let p = RatFunc::from_poly(pool.pop().unwrap());
            f = f.mul(&p.pow(*[-1, 1].choose(rng).unwrap()).expect("nonzero"));
        }
        entries.push(f);
    }
    let u = RatFunc::constant(nonzero(rng, k));
    let r = *[-2, -1, 1, 2, 3].choose(rng).unwrap();
    (entries, u, pi, r)
}

fn xi(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "xi_curve", total, |rng, i| {
        let k = field_for(i);
        let (entries, u, pi, r) = xi_instance(rng, &k);
        let chk = verify_xi_curve(&entries, &u, &pi, r).map_err(fail)?;
        ensure(chk.holds(), || format!("{}: boundary {} vs {}", chk.curve, chk.boundary, chk.expected))
    })
}

fn square(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "commuting_square", total, |rng, i| {
        let k = field_for(i);
        let (entries, u, pi, r) = xi_instance(rng, &k);
        let curve = crate::milnor::xi_curve(&entries, &u, &pi, r).map_err(fail)?;
        let sq = verify_commuting_square(&curve).map_err(fail)?;
        ensure(sq.holds(), || format!("{curve}: sign {:?}", sq.global_sign))
    })
}

fn boundary_squared(seed: u64, total: usize) -> SuiteResult {
    run_instances(seed, "boundary_squared", total, |rng, i| {
        let k = field_for(i);
        let n = 2 + i % 2;
        let r = 1 + rng.gen_range(0..2);
        let vars = VarSet::new(r, n);
        let m: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=2)).collect();
        let d = ModulusDatum::monomial(&k, &m).map_err(fail)?;
        let model = if (i / 2) % 2 == 0 { CoordModel::Psi } else { CoordModel::Original };
        let mut found = None;
        for _ in 0..50 {
            let (count, higher) = (rng.gen_range(1..=2), rng.gen_bool(0.5));
            let Some(w) = random_cycle(rng, &k, vars, &m, count, higher) else {
                continue;
            };
            if w.is_empty() || !w.check_face_condition().passed() || !certified(&w, &d)? {
                continue;
            }
            if let Ok(c) = w.convert(model) {
                found = Some(c);
                break;
            }
        }
        let w = found.ok_or("no admissible cycle drawn")?;
        for opts in [BoundaryOptions::strict(), BoundaryOptions { convention: Convention::Reversed, ..BoundaryOptions::strict() }] {
            let b = w.boundary(opts).map_err(fail)?;
            let bb = b.boundary(opts).map_err(fail)?;
            ensure(bb.is_empty(), || format!("boundary of boundary of {w} is {bb}"))?;
        }
        let (a, b) = model.faces();
        for j in 1..=n {
            for v in [a, b] {
                let face = w.face_restrict(j, v).map_err(fail)?;
                ensure(face.check_face_condition().passed(), || format!("face y{j}={v} of {w} fails the face condition"))?;
                let psi = face.convert(CoordModel::Psi).map_err(fail)?;
                ensure(certified(&psi, &d)?, || format!("face y{j}={v} of {w} loses the modulus"))?;
            }
        }
        Ok(())
    })
}

/// One suite by name.
pub fn run_one(name: &str, seed: u64, sizes: &SuiteSizes) -> Option<SuiteResult> {
    Some(match name {
        "rho_reciprocity" => rho_reciprocity(seed, sizes.rho_reciprocity),
        "rho_generators" => rho_generators(seed, sizes.rho_generators),
        "bounding_surface" => bounding(seed, sizes.bounding_surface),
        "degree_bound" => degree_bound(seed, sizes.degree_bound),
        "zero_cycle_vanishing" => zero_cycles(seed, sizes.zero_cycle_vanishing),
        "k2_oracle" => k2_oracle(sizes.k2_max_q),
        "tame_symbol" => tame(seed, sizes.tame_symbol),
        "weil_reciprocity" => weil(seed, sizes.weil_reciprocity),
        "totaro_steinberg" => steinberg(seed, sizes.totaro),
        "totaro_mult" => mult(seed, sizes.totaro),
        "xi_curve" => xi(seed, sizes.totaro),
        "commuting_square" => square(seed, sizes.totaro),
        "boundary_squared" => boundary_squared(seed, sizes.boundary_squared),
        _ => return None,
    })
}

/// Runs every suite under `seed`. Results are sorted by suite name.
pub fn run_suite(seed: u64, sizes: &SuiteSizes) -> SuiteReport {
    let results: BTreeMap<&str, SuiteResult> = SUITE_NAMES
        .par_iter()
        .map(|name| (*name, run_one(name, seed, sizes).expect("known suite")))
        .collect();
    let suites: Vec<SuiteResult> = results.into_values().collect();
    let all_passed = suites.iter().all(SuiteResult::ok);
    SuiteReport {
        seed,
        sizes: sizes.clone(),
        suites,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_deterministic() {
        let sizes = SuiteSizes {
            rho_reciprocity: 6,
            rho_generators: 2,
            bounding_surface: 6,
            degree_bound: 6,
            zero_cycle_vanishing: 6,
            k2_max_q: 5,
            tame_symbol: 6,
            weil_reciprocity: 6,
            totaro: 6,
            boundary_squared: 6,
        };
        let a = run_suite(7, &sizes);
        assert!(a.all_passed, "{}", a.to_json());
        assert_eq!(a.to_json(), run_suite(7, &sizes).to_json());
        assert_eq!(a.suites.len(), SUITE_NAMES.len());
    }
}
