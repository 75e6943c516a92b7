//! Exact dense linear algebra over ℚ and ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
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
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_rank(points: &[Vec<Q>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Matrix = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Unique solution of a square system, or `None` when singular.
pub fn solve_square(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Fraction-free Gaussian elimination.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Nonzero invariant factors `d₁ | d₂ | …` of an integer matrix.
pub fn smith_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let d = &q * &m[i][t];
                        m[i][j] -= d;
                    }
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the rest of the block by the pivot.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(m[i][j].is_multiple_of(&m[t][t])));
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = m[i][j].clone();
                            m[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // A nonzero remainder is smaller than the pivot; make it the pivot.
            if let Some(i) = (t + 1..rows).find(|&i| !m[i][t].is_zero()) {
                m.swap(t, i);
            } else if let Some(j) = (t + 1..cols).find(|&j| !m[t][j].is_zero()) {
                for row in m.iter_mut() {
                    row.swap(t, j);
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn determinant() {
        assert_eq!(det_bareiss(ints(&[&[2, -1], &[-1, 2]])), BigInt::from(3));
        assert_eq!(det_bareiss(ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_bareiss(ints(&[&[1, 2], &[2, 4]])), BigInt::from(0));
        assert_eq!(
            det_bareiss(ints(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]])),
            BigInt::from(16)
        );
    }

    #[test]
    fn smith_form() {
        let l = ints(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        assert_eq!(smith_invariants(l), vec![BigInt::from(1), BigInt::from(3)]);
        let m = ints(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_invariants(m), vec![BigInt::from(1), BigInt::from(6)]);
        let k4: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 3 } else { -1 }).collect())
            .collect();
        let k4 = k4.iter().map(|r| r.as_slice()).collect::<Vec<_>>();
        let inv = smith_invariants(ints(&k4));
        assert_eq!(inv, vec![BigInt::from(1), BigInt::from(4), BigInt::from(4)]);
    }

    #[test]
    fn solve_and_invert() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_square(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![q_frac(4, 5), q_frac(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0], vec![q_frac(3, 5), q_frac(-1, 5)]);
        assert!(solve_square(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(1), q(1)]).is_none());
    }

    #[test]
    fn ranks() {
        let pts = vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(affine_rank(&pts), 1);
        assert_eq!(rank(&[vec![q(1), q(0)], vec![q(0), q(1)]]), 2);
    }
}
