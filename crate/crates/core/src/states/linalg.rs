//! Exact Gaussian elimination over rationals and fraction-free rank over
//! integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(m: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (top, rest) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&mut a[r], &b[0])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&mut b[0], &a[row])
                };
                for (x, y) in top.iter_mut().zip(rest.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Rank of an integer matrix by Bareiss elimination.
pub fn rank_int(rows: &[&[BigInt]]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        for r in rank + 1..m.len() {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.
pub fn to_integer_row(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    primitive(&mut out);
    out
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn ranks_agree() {
        let cases: [&[&[i64]]; 4] = [
            &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]],
            &[&[1, 0], &[0, 1], &[1, 1]],
            &[&[0, 0, 0]],
            &[&[2, 3, 5, 7], &[1, 1, 1, 1], &[3, 4, 6, 8], &[0, 1, 3, 5]],
        ];
        let expected = [2, 2, 0, 2];
        for (rows, want) in cases.iter().zip(expected) {
            let m = ints(rows);
            let refs: Vec<&[BigInt]> = m.iter().map(Vec::as_slice).collect();
            assert_eq!(rank_int(&refs), want);
            let q: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            assert_eq!(rank_rational(&q), want);
        }
    }

    #[test]
    fn primitive_rows() {
        let v = to_integer_row(&[crate::rational::ratio(1, 2), crate::rational::ratio(-3, 4), int(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
