//! Exact linear algebra over ℚ and ℤ on small dense matrices.

use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<Q>>;

pub fn to_q(m: &[Vec<i64>]) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row_i) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row_i.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_int(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Maximizes `c·x` subject to `A x ≤ b`, `x ≥ 0` with `b ≥ 0`, by the
/// simplex method with Bland's rule. Returns the optimum and an optimal
/// point, or `None` when unbounded.
pub fn lp_max(a: &Matrix, b: &[Q], c: &[Q]) -> Option<(Q, Vec<Q>)> {
    let m = a.len();
    let n = c.len();
    debug_assert!(b.iter().all(|x| !x.is_negative()));
    // Tableau columns: n structural, m slack, 1 right-hand side.
    let width = n + m + 1;
    let mut t: Matrix = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Q::zero(); width];
        row[..n].clone_from_slice(&a[i]);
        row[n + i] = Q::one();
        row[width - 1] = b[i].clone();
        t.push(row);
    }
    let mut obj = vec![Q::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (li, _) = leave?;
        let inv = t[li][enter].recip();
        for x in t[li].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = t[li].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != li && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        basis[li] = enter;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width - 1].clone();
        }
    }
    Some((t[m][width - 1].clone(), x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn bi(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det_int(&bi(&[vec![1, 1], vec![0, 1]])), BigInt::from(1));
        assert_eq!(det_int(&bi(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(det_int(&bi(&[vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 1]])), BigInt::from(6));
        assert_eq!(det_int(&bi(&[vec![1, 2], vec![2, 4]])), BigInt::from(0));
    }

    #[test]
    fn rank_and_kernel() {
        let m = to_q(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_int(&bi(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]])), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let s: Q = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = to_q(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0], vec![qi(1), qi(-1), qi(1)]);
        assert!(inverse(&to_q(&[vec![1, 2], vec![2, 4]])).is_none());
        assert_eq!(inverse(&Vec::new()), Some(Vec::new()));
    }

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6.
        let a = to_q(&[vec![1, 2], vec![3, 1]]);
        let (v, x) = lp_max(&a, &[qi(4), qi(6)], &[qi(1), qi(1)]).unwrap();
        assert_eq!(v, q(14, 5));
        assert_eq!(x, vec![q(8, 5), q(6, 5)]);
        // Unbounded direction.
        let a = to_q(&[vec![1, -1]]);
        assert!(lp_max(&a, &[qi(1)], &[qi(0), qi(1)]).is_none());
    }
}
