//! Double description: generators of `{x : A x >= 0, E x = 0}`.
//!
//! The equations are eliminated by parametrizing their nullspace. The lineality
//! space of the remaining inequality system is split off, and the extreme rays of
//! the pointed part are built incrementally (Motzkin's method) starting from a
//! simplicial cone cut out by a maximal independent subset of the inequalities.
//! Adjacency of two rays is decided algebraically: their common tight
//! constraints must have rank `r - 2`, where `r` is the rank of the system.

use num_traits::{Signed, Zero};

use crate::bitset::BitSet;
use crate::linalg::{self, Matrix};
use crate::num::{dot, primitive, Scalar};

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Matrix,
    pub rays: Matrix,
}

#[derive(Clone)]
struct Ray {
    coords: Vec<Scalar>,
    tight: BitSet,
}

pub(crate) fn cone_generators(dim: usize, ineqs: &[Vec<Scalar>], eqs: &[Vec<Scalar>]) -> ConeGenerators {
    // Parametrize the equation nullspace: x = sum_i y_i w_i.
    let w: Matrix = if eqs.is_empty() {
        (0..dim)
            .map(|i| {
                let mut e = vec![Scalar::zero(); dim];
                e[i] = Scalar::from_integer(1.into());
                e
            })
            .collect()
    } else {
        linalg::nullspace(eqs, dim)
    };
    let k = w.len();
    let lift = |y: &[Scalar]| -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); dim];
        for (yi, wi) in y.iter().zip(&w) {
            if yi.is_zero() {
                continue;
            }
            for (xj, wij) in x.iter_mut().zip(wi) {
                *xj += yi * wij;
            }
        }
        x
    };
    if k == 0 {
        return ConeGenerators::default();
    }

    let reduced: Matrix = ineqs
        .iter()
        .map(|a| w.iter().map(|wi| dot(a, wi)).collect::<Vec<_>>())
        .filter(|a: &Vec<Scalar>| a.iter().any(|x| !x.is_zero()))
        .map(|a| primitive(&a))
        .collect();

    let lineality = if reduced.is_empty() {
        linalg::nullspace(&[vec![Scalar::zero(); k]], k)
    } else {
        linalg::nullspace(&reduced, k)
    };
    let lines: Matrix = lineality.iter().map(|y| lift(y)).collect();

    if reduced.is_empty() {
        return ConeGenerators { lines, rays: Vec::new() };
    }

    let basis = linalg::independent_rows(&reduced, k);
    let r = basis.len();
    let m = reduced.len();

    // Initial simplicial cone {x in rowspace : B x >= 0}; its rays are x_j with B x_j = e_j.
    let b: Matrix = basis.iter().map(|&i| reduced[i].clone()).collect();
    let gram: Matrix = b.iter().map(|bi| b.iter().map(|bj| dot(bi, bj)).collect()).collect();
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let mut e = vec![Scalar::zero(); r];
            e[j] = Scalar::from_integer(1.into());
            let yv = linalg::solve(&gram, &e).expect("independent rows have an invertible Gram matrix");
            let mut x = vec![Scalar::zero(); k];
            for (c, bi) in yv.iter().zip(&b) {
                for (xk, bik) in x.iter_mut().zip(bi) {
                    *xk += c * bik;
                }
            }
            let coords = primitive(&x);
            let mut tight = BitSet::new(m);
            for (t, &row) in basis.iter().enumerate() {
                if t != j {
                    tight.insert(row);
                }
            }
            Ray { coords, tight }
        })
        .collect();

    for (idx, row) in reduced.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let values: Vec<Scalar> = rays.iter().map(|ray| dot(row, &ray.coords)).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (ray, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                let mut kept = ray.clone();
                if v.is_zero() {
                    kept.tight.insert(idx);
                }
                next.push(kept);
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if !values[i].is_positive() {
                continue;
            }
            for (j, n) in rays.iter().enumerate() {
                if !values[j].is_negative() {
                    continue;
                }
                let common = p.tight.and(&n.tight);
                if r >= 2 && common.count() < r - 2 {
                    continue;
                }
                if !adjacent(&reduced, &common, k, r) {
                    continue;
                }
                let coords: Vec<Scalar> = n
                    .coords
                    .iter()
                    .zip(&p.coords)
                    .map(|(nc, pc)| &values[i] * nc - &values[j] * pc)
                    .collect();
                let mut tight = common;
                tight.insert(idx);
                next.push(Ray { coords: primitive(&coords), tight });
            }
        }
        rays = next;
    }

    let mut out: Matrix = rays.into_iter().map(|ray| primitive(&lift(&ray.coords))).collect();
    out.sort();
    out.dedup();
    ConeGenerators { lines, rays: out }
}

fn adjacent(rows: &[Vec<Scalar>], common: &BitSet, k: usize, r: usize) -> bool {
    if r < 2 {
        return false;
    }
    let sub: Matrix = common.iter().map(|i| rows[i].clone()).collect();
    linalg::rank(&sub, k) == r - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn rows(r: &[&[i64]]) -> Matrix {
        r.iter().map(|x| x.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn positive_orthant() {
        let g = cone_generators(3, &rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 3);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // Cone over the square [-1,1]^2 at height 1: |x| <= z, |y| <= z.
        let ineqs = rows(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let g = cone_generators(3, &ineqs, &[]);
        assert_eq!(g.rays.len(), 4);
        for ray in &g.rays {
            for a in &ineqs {
                assert!(!dot(a, ray).is_negative());
            }
        }
    }

    #[test]
    fn halfspace_has_lineality() {
        let g = cone_generators(3, &rows(&[&[1, 0, 0]]), &[]);
        assert_eq!(g.lines.len(), 2);
        assert_eq!(g.rays, rows(&[&[1, 0, 0]]));
    }

    #[test]
    fn opposite_inequalities_collapse() {
        let g = cone_generators(2, &rows(&[&[1, 0], &[-1, 0]]), &[]);
        assert_eq!(g.lines.len(), 1);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn equations_restrict() {
        let g = cone_generators(3, &rows(&[&[1, 0, 0], &[0, 1, 0]]), &rows(&[&[1, -1, 0]]));
        // x = y >= 0, z free.
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays, rows(&[&[1, 1, 0]]));
    }
}
