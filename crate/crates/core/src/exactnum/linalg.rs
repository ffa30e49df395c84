//! Small dense exact linear algebra over `BigRational` and `Surd`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Surd;
use crate::error::{Error, Result};

pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of the right null space `{x : m x = 0}`.
pub fn nullspace(m: &RatMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

pub fn rational_det(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let sub = &f * &a[c][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
    }
    det
}

pub fn rational_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of a square matrix of surds (Gauss-Jordan).
pub fn surd_inverse(m: &[Vec<Surd>]) -> Result<Vec<Vec<Surd>>> {
    let n = m.len();
    let mut a: Vec<Vec<Surd>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Surd::one() } else { Surd::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::SingularF0)?;
        a.swap(c, p);
        let inv = a[c][c].recip()?;
        for x in a[c].iter_mut() {
            *x = x.checked_mul(&inv)?;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let sub = f.checked_mul(&a[c][j])?;
                    a[i][j] = a[i][j].checked_sub(&sub)?;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: BigRational = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn det_and_inverse() {
        let b = m(&[&[1, 0], &[1, 2]]);
        assert_eq!(rational_det(&b), rat_int(2));
        let inv = rational_inverse(&b).unwrap();
        assert_eq!(inv[1][0], BigRational::new((-1).into(), 2.into()));
        assert!(rational_inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn primitive_vector_sign() {
        let v = vec![BigRational::new((-1).into(), 2.into()), BigRational::new(1.into(), 3.into())];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(3), BigInt::from(-2)]);
    }
}
