//! The fan of `E_T^N = (A^N \ {0})^d`, stored sparsely as per-factor faces of the positive orthant.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::fan::{FVector, Fan};
use crate::num::Vector;
use crate::polyhedron::Cone;

/// A cone `δ_1 × ⋯ × δ_d` of Σ_E; factor `j` is the face of `cone(e_1, …, e_N)`
/// spanned by the set bits of `masks[j]`, which is never the full set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SigmaCone {
    pub masks: Vec<u32>,
}

impl SigmaCone {
    pub fn dim(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Is `self` a face of `other`?
    pub fn is_face_of(&self, other: &SigmaCone) -> bool {
        self.masks.iter().zip(&other.masks).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &SigmaCone) -> SigmaCone {
        SigmaCone { masks: self.masks.iter().zip(&other.masks).map(|(a, b)| a & b).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaE {
    n: usize,
    d: usize,
}

impl SigmaE {
    pub fn new(n: usize, d: usize) -> Result<SigmaE> {
        if n == 0 || d == 0 {
            return Err(Error::Precondition("N and d must be positive".into()));
        }
        if n > 31 {
            return Err(Error::ResourceCap { what: "N (sparse cone masks)", value: n, cap: 31 });
        }
        Ok(SigmaE { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ambient_rank(&self) -> usize {
        self.n * self.d
    }

    fn full_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// Every cone, in lexicographic mask order.
    pub fn cones(&self) -> Vec<SigmaCone> {
        let per: Vec<u32> = (0..self.full_mask()).collect();
        let mut out = vec![SigmaCone { masks: vec![] }];
        for _ in 0..self.d {
            out = out
                .into_iter()
                .flat_map(|c| {
                    per.iter().map(move |&m| {
                        let mut masks = c.masks.clone();
                        masks.push(m);
                        SigmaCone { masks }
                    })
                })
                .collect();
        }
        out
    }

    /// The `N^d` maximal cones `σ^{i_1} × ⋯ × σ^{i_d}`, where `σ^i` omits `e_i`; indexed by 1-based tuples.
    pub fn maximal_cones(&self) -> Vec<(Vec<usize>, SigmaCone)> {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..self.d {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (1..=self.n).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        tuples
            .into_iter()
            .map(|t| {
                let masks = t.iter().map(|&i| self.full_mask() & !(1u32 << (i - 1))).collect();
                (t, SigmaCone { masks })
            })
            .collect()
    }

    /// f-vector by enumeration of all cones (parallel over the first factor).
    pub fn f_vector(&self) -> FVector {
        let top = self.d * (self.n - 1);
        let per: Vec<usize> = (0..=self.n - 1).map(|j| binomial(self.n, j)).collect();
        // Enumerate first-factor masks explicitly; remaining factors enumerated recursively.
        let counts = (0..self.full_mask())
            .into_par_iter()
            .map(|m| {
                let mut local = vec![0usize; top + 1];
                let first = m.count_ones() as usize;
                let mut partial = vec![0usize; top + 1];
                partial[first] = 1;
                for _ in 1..self.d {
                    let mut next = vec![0usize; top + 1];
                    for (k, &c) in partial.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for mask in 0..self.full_mask() {
                            let j = mask.count_ones() as usize;
                            next[k + j] += c;
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial.into_iter().enumerate() {
                    local[k] += c;
                }
                local
            })
            .reduce(|| vec![0usize; top + 1], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        debug_assert_eq!(counts.iter().sum::<usize>(), per.iter().sum::<usize>().pow(self.d as u32));
        FVector::new(counts)
    }

    /// The cone in `Q^{Nd}`; factor `j` occupies coordinates `jN .. (j+1)N`.
    pub fn cone(&self, c: &SigmaCone) -> Cone {
        let rank = self.ambient_rank();
        let gens = c
            .masks
            .iter()
            .enumerate()
            .flat_map(|(j, &m)| {
                (0..self.n).filter(move |b| m & (1 << b) != 0).map(move |b| Vector::unit(rank, j * self.n + b))
            })
            .collect();
        Cone::new(rank, gens).expect("coordinate cones are well formed")
    }

    /// Materializes the fan; refused above the geometric rank cap.
    pub fn to_fan(&self, caps: &Caps) -> Result<Fan> {
        caps.check_geometric(self.ambient_rank())?;
        Ok(Fan::from_closed(self.ambient_rank(), self.cones().iter().map(|c| self.cone(c)).collect()))
    }
}

/// Σ_E as an explicit fan in `Q^{Nd}`.
pub fn build_sigma_e(n: usize, d: usize) -> Result<Fan> {
    SigmaE::new(n, d)?.to_fan(&Caps::from_env())
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Number of `k`-dimensional cones of Σ_E: the coefficient of `x^k` in `(sum_{j<N} C(N,j) x^j)^d`.
pub fn sigma_e_fvector_closed_form(n: usize, d: usize, k: usize) -> BigUint {
    if n == 0 || d == 0 || k > d * (n - 1) {
        return if n > 0 && d == 0 && k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let factor: Vec<BigUint> = (0..n).map(|j| binomial_big(n, j)).collect();
    let mut poly = vec![BigUint::one()];
    for _ in 0..d {
        let mut next = vec![BigUint::zero(); poly.len() + n - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        poly = next;
    }
    poly.get(k).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;

    #[test]
    fn small_cases() {
        assert_eq!(build_sigma_e(1, 1).unwrap(), Fan::trivial(1));
        assert_eq!(build_sigma_e(2, 1).unwrap().f_vector().counts(), &[1, 2]);
        assert_eq!(build_sigma_e(3, 2).unwrap().f_vector().counts(), &[1, 6, 15, 18, 9]);
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for n in 1..=3 {
            for d in 1..=2 {
                let sparse = SigmaE::new(n, d).unwrap().f_vector();
                let fan = build_sigma_e(n, d).unwrap().f_vector();
                assert_eq!(sparse, fan);
                for k in 0..=n * d + 1 {
                    assert_eq!(sigma_e_fvector_closed_form(n, d, k), BigUint::from(fan.get(k)), "N={n} d={d} k={k}");
                }
            }
        }
        assert_eq!(sigma_e_fvector_closed_form(3, 2, 4), BigUint::from(9u32));
        assert_eq!(sigma_e_fvector_closed_form(3, 2, 3), BigUint::from(18u32));
        assert_eq!(sigma_e_fvector_closed_form(2, 1, 0), BigUint::from(1u32));
    }

    #[test]
    fn product_structure() {
        let one = build_sigma_e(3, 1).unwrap();
        assert_eq!(one.product(&one), build_sigma_e(3, 2).unwrap());
        assert_eq!(SigmaE::new(3, 2).unwrap().maximal_cones().len(), 9);
    }
}
