//! Integer matrices acting on lattices, with Hermite-style integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::num::{Scalar, Vector};

/// A linear map `Z^source -> Z^target` given by a `target x source` integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    matrix: Vec<Vec<i64>>,
    source_rank: usize,
    target_rank: usize,
}

impl LatticeMap {
    pub fn new(target_rank: usize, source_rank: usize, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != target_rank {
            return Err(Error::Dimension { expected: target_rank, found: matrix.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != source_rank) {
            return Err(Error::Dimension { expected: source_rank, found: row.len() });
        }
        Ok(LatticeMap { matrix, source_rank, target_rank })
    }

    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeMap { matrix, source_rank: rank, target_rank: rank }
    }

    pub fn zero(target_rank: usize, source_rank: usize) -> Self {
        LatticeMap { matrix: vec![vec![0; source_rank]; target_rank], source_rank, target_rank }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.source_rank, "lattice map applied to a vector of the wrong rank");
        Vector::new(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .filter(|(a, _)| **a != 0)
                        .fold(Scalar::zero(), |acc, (a, x)| acc + x * Scalar::from_integer(BigInt::from(*a)))
                })
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if other.target_rank != self.source_rank {
            return Err(Error::Dimension { expected: self.source_rank, found: other.target_rank });
        }
        let matrix = (0..self.target_rank)
            .map(|i| {
                (0..other.source_rank)
                    .map(|j| (0..self.source_rank).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(LatticeMap { matrix, source_rank: other.source_rank, target_rank: self.target_rank })
    }

    pub fn transpose(&self) -> LatticeMap {
        let matrix = (0..self.source_rank)
            .map(|j| (0..self.target_rank).map(|i| self.matrix[i][j]).collect())
            .collect();
        LatticeMap { matrix, source_rank: self.target_rank, target_rank: self.source_rank }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub fn rational_matrix(&self) -> linalg::Matrix {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|&x| Scalar::from_integer(x.into())).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rational_matrix(), self.source_rank)
    }

    /// A Z-basis of the kernel lattice `{x in Z^source : M x = 0}`.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let a: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        integer_kernel(&a, self.source_rank)
    }

    /// Horizontal block concatenation `(self | other)`.
    pub fn hstack(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.target_rank != other.target_rank {
            return Err(Error::Dimension { expected: self.target_rank, found: other.target_rank });
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Ok(LatticeMap { matrix, source_rank: self.source_rank + other.source_rank, target_rank: self.target_rank })
    }

    /// Vertical block concatenation.
    pub fn vstack(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.source_rank != other.source_rank {
            return Err(Error::Dimension { expected: self.source_rank, found: other.source_rank });
        }
        let matrix = self.matrix.iter().chain(&other.matrix).cloned().collect();
        Ok(LatticeMap { matrix, source_rank: self.source_rank, target_rank: self.target_rank + other.target_rank })
    }

    pub fn scaled(&self, s: i64) -> LatticeMap {
        LatticeMap {
            matrix: self.matrix.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeMap({}x{}) {:?}", self.target_rank, self.source_rank, self.matrix)
    }
}

/// Integer kernel basis by unimodular column reduction of `a` (rows of length `ncols`).
///
/// Column operations are mirrored on an identity matrix `u`; once `a u` is in column
/// echelon form, the columns of `u` over the zero columns of `a u` span the kernel over Z.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let mut work: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // Column j is stored as work[.][j]; u[.][j].
    let col_op = |mat: &mut Vec<Vec<BigInt>>, target: usize, source: usize, factor: &BigInt| {
        for row in mat.iter_mut() {
            let delta = &row[source] * factor;
            row[target] -= delta;
        }
    };
    let swap = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut pivot_col = 0;
    for r in 0..m {
        if pivot_col >= ncols {
            break;
        }
        loop {
            // Pick the column (>= pivot_col) with the smallest nonzero |entry| in row r.
            let best = (pivot_col..ncols)
                .filter(|&j| !work[r][j].is_zero())
                .min_by(|&i, &j| work[r][i].abs().cmp(&work[r][j].abs()));
            let Some(b) = best else { break };
            swap(&mut work, pivot_col, b);
            swap(&mut u, pivot_col, b);
            let mut done = true;
            for j in pivot_col + 1..ncols {
                if work[r][j].is_zero() {
                    continue;
                }
                let q = work[r][j].div_floor(&work[r][pivot_col]);
                col_op(&mut work, j, pivot_col, &q);
                col_op(&mut u, j, pivot_col, &q);
                if !work[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    (pivot_col..ncols)
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_transpose() {
        let a = LatticeMap::new(1, 2, vec![vec![1, 1]]).unwrap();
        let b = LatticeMap::new(2, 1, vec![vec![1], vec![-1]]).unwrap();
        assert!(a.compose(&b).unwrap().is_zero());
        assert_eq!(a.transpose().matrix(), &[vec![1], vec![1]]);
        assert!(LatticeMap::new(2, 2, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn kernel_is_saturated() {
        // x + 2y + 3z = 0 has a rank-2 kernel lattice of index 1.
        let m = LatticeMap::new(1, 3, vec![vec![2, 4, 6]]).unwrap();
        let k = m.integer_kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v[0].clone() + &v[1] * 2 + &v[2] * 3;
            assert!(s.is_zero());
        }
        // The basis spans (-2, 1, 0) and (-3, 0, 1) over Z: its 2x2 minors have gcd 1.
        let minors = [
            &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0],
            &k[0][0] * &k[1][2] - &k[0][2] * &k[1][0],
            &k[0][1] * &k[1][2] - &k[0][2] * &k[1][1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn apply_map() {
        let m = LatticeMap::new(2, 3, vec![vec![-1, 1, 0], vec![-1, 0, 1]]).unwrap();
        let v = m.apply(&Vector::from_ints(&[1, 0, 0]));
        assert_eq!(v, Vector::from_ints(&[-1, -1]));
    }
}
