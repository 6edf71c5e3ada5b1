//! Dense exact linear algebra over `Q` on row-major `Vec<Vec<Scalar>>` matrices.

use num_traits::{One, Zero};

use crate::num::{dot, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form. Returns the reduced nonzero rows and the pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Matrix = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(row.clone());
        if rank(&trial, ncols) > basis.len() {
            basis = trial;
            chosen.push(i);
        }
    }
    chosen
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

pub fn transpose(m: &[Vec<Scalar>], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out(v: &[Scalar], basis: &[Vec<Scalar>]) -> Vec<Scalar> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let k = basis.len();
    let gram: Matrix = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Scalar> = basis.iter().map(|a| dot(a, v)).collect();
    let coeffs = solve(&gram, &rhs).expect("basis vectors are independent");
    let mut out = v.to_vec();
    for i in 0..k {
        for (o, b) in out.iter_mut().zip(&basis[i]) {
            *o -= &coeffs[i] * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_square() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![int(3), int(5)]);
        assert!(solve(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn projection_is_orthogonal() {
        let basis = m(&[&[1, 1, 0]]);
        let p = project_out(&[int(3), int(1), int(5)], &basis);
        assert!(dot(&p, &basis[0]).is_zero());
        assert_eq!(p[2], int(5));
    }
}
