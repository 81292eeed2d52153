//! Fixed inputs for the benchmarks.

use chowmod::cycle::{CoordModel, HypersurfaceCycle, ModulusDatum};
use chowmod::field::{FieldSpec, UniPoly};
use chowmod::poly::{parse_poly, VarSet};

/// A level-2 admissible cycle `V(1 - t1 t2 g)` with `g` multilinear in
/// `y1, y2`, and the modulus `D_(1,1)`.
pub fn level_two_cycle(k: &FieldSpec) -> (HypersurfaceCycle, ModulusDatum) {
    let vars = VarSet::new(2, 2);
    let f = parse_poly("1 - t1*t2*(3*y1*y2 + 2*y1 + 5*y2 + 1) + t1^2*t2*(y1 + 1)", k, vars).expect("parses");
    let z = HypersurfaceCycle::single(&f, CoordModel::Psi).expect("nonconstant");
    let d = ModulusDatum::monomial(k, &[1, 1]).expect("monomial");
    (z, d)
}

/// `x^d + x + c` over `F_p`: a fixed dense-ish polynomial to factor.
pub fn factoring_input(p: u64, d: usize, c: i64) -> UniPoly {
    let k = FieldSpec::prime(p).expect("prime");
    let mut coeffs = vec![0; d + 1];
    coeffs[0] = c;
    coeffs[1] = 1;
    coeffs[d] += 1;
    UniPoly::from_i64s(&k, &coeffs)
}
