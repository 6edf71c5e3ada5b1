//! Split exact sequences for the subtorus `T ⊂ T × T_E` and the matrices `I`, `J`.
//!
//! `0 → M_E →ι M ⊕ M_E →π M → 0` with `ι(b) = (−I b, b)`, `π(a, b) = a + I b`, and
//! dually `0 → N →α N ⊕ N_E →ρ N_E → 0` with `α(a) = (a, J a)`, `ρ(a, b) = b − J a`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fansy::ValidationReport;
use crate::lattice::LatticeMap;
use crate::linalg;
use crate::num::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub n: usize,
    pub d: usize,
    /// `M_E → M`, a `d × Nd` matrix.
    pub i_map: LatticeMap,
    /// `N → N_E`, the transpose of `I`.
    pub j_map: LatticeMap,
    pub iota: LatticeMap,
    pub pi: LatticeMap,
    pub alpha: LatticeMap,
    pub rho: LatticeMap,
    pub sigma_star: LatticeMap,
    pub tau: LatticeMap,
}

impl SplitData {
    /// Column `(i−1)N + j` of `I` is `e_i`: block `i` of `N_E` maps onto the `i`-th coordinate of `N`.
    pub fn new(n: usize, d: usize) -> Result<SplitData> {
        if n == 0 || d == 0 {
            return Err(Error::Precondition("N and d must be positive".into()));
        }
        let ne = n * d;
        let i_rows: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..ne).map(|c| i64::from(c / n == i)).collect())
            .collect();
        let i_map = LatticeMap::new(d, ne, i_rows)?;
        let j_map = i_map.transpose();
        let id_d = LatticeMap::identity(d);
        let id_e = LatticeMap::identity(ne);
        let iota = i_map.scaled(-1).vstack(&id_e)?;
        let pi = id_d.hstack(&i_map)?;
        let alpha = id_d.vstack(&j_map)?;
        let rho = j_map.scaled(-1).hstack(&id_e)?;
        let sigma_star = id_d.vstack(&LatticeMap::zero(ne, d))?;
        let tau = LatticeMap::zero(ne, d).hstack(&id_e)?;
        let s = SplitData { n, d, i_map, j_map, iota, pi, alpha, rho, sigma_star, tau };
        let report = s.verify();
        if !report.ok() {
            return Err(Error::InternalInconsistency(format!("split data identities fail:\n{report}")));
        }
        Ok(s)
    }

    /// Rank of `N_E`.
    pub fn rank_e(&self) -> usize {
        self.n * self.d
    }

    /// Exactness, section identities, duality, and `ker ρ = im α` over `Z`.
    pub fn verify(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let zero = |m: Result<LatticeMap>| m.is_ok_and(|m| m.is_zero());
        let ident = |m: Result<LatticeMap>, k: usize| m.is_ok_and(|m| m == LatticeMap::identity(k));
        r.push("π ∘ ι = 0", zero(self.pi.compose(&self.iota)), "");
        r.push("ρ ∘ α = 0", zero(self.rho.compose(&self.alpha)), "");
        r.push("π ∘ σ* = id", ident(self.pi.compose(&self.sigma_star), self.d), "");
        r.push("τ ∘ ι = id", ident(self.tau.compose(&self.iota), self.rank_e()), "");
        r.push("ρ = ιᵀ", self.rho == self.iota.transpose(), "");
        r.push("α = πᵀ", self.alpha == self.pi.transpose(), "");
        r.push("rank ρ = Nd", self.rho.rank() == self.rank_e(), "");
        r.push("ker ρ = im α", self.kernel_matches_image(), "");
        r
    }

    fn kernel_matches_image(&self) -> bool {
        let kernel = self.rho.integer_kernel();
        if kernel.len() != self.d {
            return false;
        }
        // α has an identity block on top, so a preimage is read off the first d entries.
        let alpha_m = self.alpha.rational_matrix();
        let in_image = |v: &[BigInt]| -> bool {
            let target: Vec<Scalar> = v.iter().cloned().map(Scalar::from_integer).collect();
            linalg::mat_vec(&alpha_m, &target[..self.d]) == target
        };
        let alpha_in_kernel = self.rho.compose(&self.alpha).is_ok_and(|m| m.is_zero());
        alpha_in_kernel && kernel.iter().all(|v| in_image(v)) && kernel.iter().all(|v| v.iter().any(|x| !x.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Vector;

    #[test]
    fn d1_n2() {
        let s = SplitData::new(2, 1).unwrap();
        assert_eq!(s.j_map.matrix(), &[vec![1], vec![1]]);
        assert_eq!(s.rho.apply(&Vector::from_ints(&[1, 5, 7])), Vector::from_ints(&[4, 6]));
        assert_eq!(s.alpha.apply(&Vector::from_ints(&[3])), Vector::from_ints(&[3, 3, 3]));
        assert!(s.verify().ok());
    }

    #[test]
    fn d2_n3() {
        let s = SplitData::new(3, 2).unwrap();
        assert_eq!(s.i_map.matrix(), &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1]]);
        for j in 0..8 {
            let e = Vector::unit(8, j);
            let expected = if j < 2 { Vector::unit(2, j) } else { Vector::unit(2, (j - 2) / 3) };
            assert_eq!(s.pi.apply(&e), expected);
        }
        assert!(s.verify().ok());
        assert_eq!(s.rho.integer_kernel().len(), 2);
    }
}
