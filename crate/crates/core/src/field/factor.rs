//! Univariate factorization: complete over finite fields (square-free,
//! distinct-degree and Cantor-Zassenhaus equal-degree splitting), rational
//! root extraction over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FieldElement, FieldError, UniPoly};

/// `unit * prod(factor^mult) * prod(unfactored^mult)` reproduces the input.
/// Factors are monic. Over finite fields `unfactored` is always empty; over Q
/// it holds the square-free cofactors left after every rational root has been
/// extracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, u32)>,
    pub unfactored: Vec<(UniPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit.clone());
        for (f, m) in self.factors.iter().chain(&self.unfactored) {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Irreducible factors with multiplicity, including cofactors over Q
    /// whose irreducibility is certified (degree at most 3, no rational root).
    /// `None` when some cofactor cannot be certified.
    pub fn certified_irreducibles(&self) -> Option<Vec<(UniPoly, u32)>> {
        let mut out = self.factors.clone();
        for (f, m) in &self.unfactored {
            if !is_certified_irreducible(f) {
                return None;
            }
            out.push((f.clone(), *m));
        }
        out.sort();
        Some(out)
    }
}

pub fn factor_univariate(p: &UniPoly) -> Result<Factorization, FieldError> {
    if p.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let unit = p.leading();
    let monic = p.monic();
    let spec = p.spec().clone();
    let mut factors = Vec::new();
    let mut unfactored = Vec::new();
    if monic.is_constant() {
        return Ok(Factorization {
            unit,
            factors,
            unfactored,
        });
    }
    if spec.is_finite() {
        for (part, mult) in squarefree_finite(&monic) {
            for (g, d) in distinct_degree(&part) {
                for f in equal_degree(&g, d) {
                    factors.push((f, mult));
                }
            }
        }
    } else if spec.is_prime_field() {
        for (part, mult) in squarefree_char0(&monic) {
            let (roots, rest) = split_rational_roots(&part)?;
            for r in roots {
                factors.push((UniPoly::linear_root(&r), mult));
            }
            if !rest.is_constant() {
                unfactored.push((rest, mult));
            }
        }
    } else {
        // Extensions of Q: only the trivial split is available.
        unfactored.push((monic, 1));
    }
    factors.sort();
    unfactored.sort();
    Ok(Factorization {
        unit,
        factors,
        unfactored,
    })
}

/// Over Q: degree one, or degree 2 or 3 without a rational root. Over finite
/// fields: a complete factorization with a single simple factor.
pub fn is_certified_irreducible(p: &UniPoly) -> bool {
    match p.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(d) => {
            let spec = p.spec();
            if spec.is_finite() {
                factor_univariate(p).is_ok_and(|f| f.factors.len() == 1 && f.factors[0].1 == 1)
            } else {
                spec.is_prime_field()
                    && d <= 3
                    && rational_roots(p).is_ok_and(|roots| roots.is_empty())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

fn pth_root_elem(a: &FieldElement) -> FieldElement {
    let q = a.spec().order().expect("finite");
    let p = a.spec().characteristic() as u128;
    a.pow_u128(q / p)
}

fn squarefree_finite(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let spec = f.spec();
    let p = spec.characteristic() as usize;
    let one = UniPoly::constant(spec.one());
    let mut out = Vec::new();
    let deflate = |g: &UniPoly| {
        let coeffs = g
            .coeffs()
            .iter()
            .step_by(p)
            .map(pth_root_elem)
            .collect();
        UniPoly::new(spec, coeffs)
    };
    let fp = f.derivative();
    if fp.is_zero() {
        for (g, m) in squarefree_finite(&deflate(f)) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).expect("gcd divides");
        if !fac.is_constant() {
            out.push((fac, i));
        }
        w = y.clone();
        c = c.exact_div(&y).expect("gcd divides");
        i += 1;
    }
    if !c.is_constant() {
        for (g, m) in squarefree_finite(&deflate(&c)) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let spec = f.spec();
    let q = spec.order().expect("finite");
    let x = UniPoly::x(spec);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.rem(&g).unwrap();
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(q, &g);
        let d = g.gcd(&h.sub(&x));
        if !d.is_constant() {
            g = g.exact_div(&d).expect("gcd divides");
            h = h.rem(&g).unwrap();
            out.push((d, i));
        }
        i += 1;
    }
    if !g.is_constant() {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

fn equal_degree(f: &UniPoly, d: usize) -> Vec<UniPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.clone()];
    }
    let spec = f.spec();
    let q = spec.order().expect("finite");
    let p = spec.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = UniPoly::new(
            spec,
            (0..n).map(|_| spec.element_at(rng.gen_range(0..q))).collect(),
        );
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(k d - 1)) with q = 2^k
            let k = spec.degree();
            let mut term = a.rem(f).unwrap();
            let mut acc = term.clone();
            for _ in 1..k * d {
                term = term.mul(&term).rem(f).unwrap();
                acc = acc.add(&term);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = prod_j (a^((q-1)/2))^(q^j)
            let base = a.pow_mod((q - 1) / 2, f);
            let mut acc = base.clone();
            let mut frob = base;
            for _ in 1..d {
                frob = frob.pow_mod(q, f);
                acc = acc.mul(&frob).rem(f).unwrap();
            }
            acc.sub(&UniPoly::constant(spec.one()))
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.exact_div(&g).expect("gcd divides"), d));
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Characteristic zero
// ---------------------------------------------------------------------------

/// Yun's square-free decomposition.
fn squarefree_char0(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = fp.exact_div(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a).expect("gcd divides");
        let c = d.exact_div(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, FieldError> {
    let n = n.abs().to_u128().ok_or(FieldError::TooLarge(u128::MAX))?;
    if n > 1u128 << 80 {
        return Err(FieldError::TooLarge(n));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// All rational roots of a nonzero polynomial over Q, without multiplicity,
/// by the rational root theorem.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<FieldElement>, FieldError> {
    let spec = p.spec();
    if spec.characteristic() != 0 || !spec.is_prime_field() {
        return Err(FieldError::WrongField {
            expected: "Q".into(),
            found: spec.to_string(),
        });
    }
    if p.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let rats: Vec<BigRational> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().expect("Q coefficients").clone())
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * &lcm).to_integer()).collect();
    let mut roots = Vec::new();
    let lead = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lead > 0 {
        roots.push(spec.zero());
        ints.drain(..lead);
    }
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let eval_sign = |num: &BigInt, den: &BigInt| -> bool {
        // sum a_i num^i den^(n-i) == 0
        let n = ints.len() - 1;
        let mut acc = BigInt::zero();
        let mut npow = BigInt::one();
        let mut dpows = vec![BigInt::one(); n + 1];
        for i in 1..=n {
            dpows[i] = &dpows[i - 1] * den;
        }
        for (i, a) in ints.iter().enumerate() {
            acc += a * &npow * &dpows[n - i];
            npow *= num;
        }
        acc.is_zero()
    };
    for num in divisors(&a0)? {
        for den in divisors(&an)? {
            if !num.gcd(&den).is_one() {
                continue;
            }
            for s in [num.clone(), -num.clone()] {
                if eval_sign(&s, &den) {
                    roots.push(spec.from_rational(&BigRational::new(s, den.clone()))?);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn split_rational_roots(p: &UniPoly) -> Result<(Vec<FieldElement>, UniPoly), FieldError> {
    let roots = rational_roots(p)?;
    let mut rest = p.clone();
    for r in &roots {
        rest = rest
            .exact_div(&UniPoly::linear_root(r))
            .expect("root gives a linear factor");
    }
    Ok((roots, rest.monic()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::Rng;

    #[test]
    fn u2_plus_1_over_f5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let p = UniPoly::from_i64s(&f5, &[1, 0, 1]);
        let fac = factor_univariate(&p).unwrap();
        let expected = vec![
            (UniPoly::from_i64s(&f5, &[2, 1]), 1),
            (UniPoly::from_i64s(&f5, &[3, 1]), 1),
        ];
        assert_eq!(fac.factors, expected);
        // re-expansion: (u + 2)(u + 3) = u^2 + 5u + 6 = u^2 + 1 mod 5
        assert_eq!(fac.expand(), p);
    }

    #[test]
    fn linear_over_q() {
        let q = FieldSpec::rationals();
        let p = UniPoly::from_i64s(&q, &[-7, 1]);
        let fac = factor_univariate(&p).unwrap();
        assert_eq!(fac.factors, vec![(p.clone(), 1)]);
        assert!(fac.unfactored.is_empty());
    }

    #[test]
    fn u2_minus_2_stays_unfactored() {
        let q = FieldSpec::rationals();
        let p = UniPoly::from_i64s(&q, &[-2, 0, 1]);
        // rational root theorem: candidates +-1, +-2, none is a root
        for c in [-2i64, -1, 1, 2] {
            assert_ne!(c * c - 2, 0);
        }
        let fac = factor_univariate(&p).unwrap();
        assert!(fac.factors.is_empty());
        assert_eq!(fac.unfactored, vec![(p.clone(), 1)]);
        assert!(is_certified_irreducible(&p));
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(
            factor_univariate(&UniPoly::zero(&f7)),
            Err(FieldError::ZeroPolynomial)
        );
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let q = FieldSpec::rationals();
        // 2 (x - 1/2)^2 (x + 3) (x^2 + 1)
        let a = UniPoly::new(&q, vec![q.from_rational(&BigRational::new((-1).into(), 2.into())).unwrap(), q.one()]);
        let p = a
            .pow(2)
            .mul(&UniPoly::from_i64s(&q, &[3, 1]))
            .mul(&UniPoly::from_i64s(&q, &[1, 0, 1]))
            .scale(&q.from_i64(2));
        let fac = factor_univariate(&p).unwrap();
        assert_eq!(fac.expand(), p);
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.contains(&(a, 2)));
        assert_eq!(fac.unfactored, vec![(UniPoly::from_i64s(&q, &[1, 0, 1]), 1)]);
    }

    #[test]
    fn random_finite_factorizations_reexpand() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &p in &[2u64, 3, 5, 7, 13] {
            let f = FieldSpec::prime(p).unwrap();
            for _ in 0..100 {
                let deg = rng.gen_range(1..=8);
                let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p as i64)).collect();
                coeffs.push(rng.gen_range(1..p as i64));
                let poly = UniPoly::from_i64s(&f, &coeffs);
                let fac = factor_univariate(&poly).unwrap();
                assert_eq!(fac.expand(), poly);
                assert!(fac.unfactored.is_empty());
                for (g, _) in &fac.factors {
                    assert_eq!(g.leading(), f.one());
                    // brute-force irreducibility for small factors
                    if g.degree().unwrap() <= 3 {
                        let roots = f.elements().filter(|x| g.eval(x).is_zero()).count();
                        assert!(g.degree() == Some(1) || roots == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn factors_over_extension_field() {
        let f9 = FieldSpec::standard(9).unwrap();
        let u = f9.generator_u().unwrap();
        // (x - u)^2 (x + 1) (x^2 + x + u) over F_9
        let lin = UniPoly::linear_root(&u);
        let p = lin
            .pow(2)
            .mul(&UniPoly::from_i64s(&f9, &[1, 1]))
            .mul(&UniPoly::new(&f9, vec![u.clone(), f9.one(), f9.one()]));
        let fac = factor_univariate(&p).unwrap();
        assert_eq!(fac.expand(), p);
        assert!(fac.factors.contains(&(lin, 2)));
    }

    #[test]
    fn binary_field_splitting() {
        let f2 = FieldSpec::prime(2).unwrap();
        // x^4 + x = x (x + 1) (x^2 + x + 1)
        let p = UniPoly::from_i64s(&f2, &[0, 1, 0, 0, 1]);
        let fac = factor_univariate(&p).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand(), p);
        let f4 = FieldSpec::standard(4).unwrap();
        let p = UniPoly::from_i64s(&f4, &[0, 1, 0, 0, 1]);
        let fac = factor_univariate(&p).unwrap();
        assert_eq!(fac.factors.len(), 4);
    }
}
