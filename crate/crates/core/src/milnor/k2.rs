use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::MilnorError;
use crate::field::{prime_power, FieldSpec};

/// Largest `q` accepted by [`k2_presentation_oracle`].
pub const K2_ORACLE_MAX_Q: u128 = 64;

/// Diagonal of the Smith normal form of an integer matrix (rows are
/// relations), with trailing zeros for rank defect up to `min(rows, cols)`.
#[allow(clippy::needless_range_loop)]
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(p, q)| a[i][j].abs().cmp(&a[p][q].abs()));
        let Some((pi, pj)) = pivot else {
            diag.extend(std::iter::repeat_n(BigInt::zero(), rows.min(cols) - k));
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                let q = a[i][k].div_floor(&a[k][k]);
                if !q.is_zero() {
                    for j in k..cols {
                        let v = &a[i][j] - &q * &a[k][j];
                        a[i][j] = v;
                    }
                }
                if !a[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                let q = a[k][j].div_floor(&a[k][k]);
                if !q.is_zero() {
                    for i in k..rows {
                        let v = &a[i][j] - &q * &a[i][k];
                        a[i][j] = v;
                    }
                }
                if !a[k][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility of the rest of the block
                let bad = (k + 1..rows)
                    .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&a[k][k]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in k..cols {
                            let v = &a[k][j] + &a[i][j];
                            a[k][j] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column k to the pivot
            let best = (k..rows)
                .map(|i| (i, k))
                .chain((k..cols).map(|j| (k, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(p, q)| a[i][j].abs().cmp(&a[p][q].abs()))
                .expect("pivot is nonzero");
            a.swap(k, best.0);
            for row in a.iter_mut() {
                row.swap(k, best.1);
            }
        }
        diag.push(a[k][k].abs());
    }
    diag
}

/// Presentation of `K_2^M(F_q)` by the single generator `{g, g}` for the
/// stored generator `g` of `F_q^x`: bilinearity gives `{g^i, g^j} = ij{g, g}`
/// and `(q - 1){g, g} = 0`, and each Steinberg relation `{a, 1 - a}` is the
/// row `log(a) log(1 - a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2Presentation {
    pub q: u128,
    pub generator: String,
    /// `(label, coefficient of {g, g})`.
    pub relations: Vec<(String, BigInt)>,
    /// Elementary divisors different from 1.
    pub invariants: Vec<BigInt>,
}

impl K2Presentation {
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
}

pub fn k2_presentation_oracle(q: u128) -> Result<K2Presentation, MilnorError> {
    prime_power(q).ok_or(MilnorError::NotPrimePower(q))?;
    if q > K2_ORACLE_MAX_Q {
        return Err(MilnorError::TooLarge(q));
    }
    let spec = FieldSpec::standard(q)?;
    let g = spec.generator().expect("finite fields store a generator");
    let mut relations = vec![(format!("(q - 1) = {}", q - 1), BigInt::from(q - 1))];
    for a in spec.elements() {
        if a.is_zero() || a.is_one() {
            continue;
        }
        let b = &spec.one() - &a;
        let la = spec.discrete_log(&a)?;
        let lb = spec.discrete_log(&b)?;
        relations.push((format!("{{{a}, {b}}}"), BigInt::from(la) * BigInt::from(lb)));
    }
    let matrix: Vec<Vec<BigInt>> = relations.iter().map(|(_, c)| vec![c.clone()]).collect();
    let invariants = smith_normal_form(&matrix)
        .into_iter()
        .filter(|x| !x.is_one())
        .collect();
    Ok(K2Presentation {
        q,
        generator: g.to_string(),
        relations,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn snf_known_matrices() {
        let d = smith_normal_form(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![2.into(), 6.into(), 12.into()]);
        let d = smith_normal_form(&m(&[&[4], &[6]]));
        assert_eq!(d, vec![2.into()]);
        let d = smith_normal_form(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!(d, vec![0.into(), 0.into()]);
    }

    #[test]
    fn small_fields_trivial() {
        for q in [2u128, 3, 4, 5, 7, 8, 9] {
            assert!(k2_presentation_oracle(q).unwrap().is_trivial(), "q = {q}");
        }
        assert_eq!(k2_presentation_oracle(5).unwrap().relations.len(), 4);
        assert!(matches!(k2_presentation_oracle(6), Err(MilnorError::NotPrimePower(6))));
        assert!(matches!(k2_presentation_oracle(67), Err(MilnorError::TooLarge(67))));
    }
}
