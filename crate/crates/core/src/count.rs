//! Generator counts for equivariant Chow groups: enumeration of `R_k`, `V_k`, `T_k`,
//! the closed forms `S_i`, `S′_i`, and the convolution with the face numbers of Σ_E.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::downgrade::{build_yc, Mode, Quotient};
use crate::error::Result;
use crate::fan::FVector;
use crate::fansy::{MarkedFansyDivisor, ValidationReport};
use crate::sigma_e::{sigma_e_fvector_closed_form, SigmaE};

/// Which geometric families feed `R`, `V` and `T`.
///
/// With `horizontal[k]` the unmarked tail cones of dimension `d+1−k`, `slice[k]` the slice
/// cells of dimension `d−k` with unmarked tail, and `contracted[k]` the marked cones of
/// dimension `d−k`:
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `R = horizontal`, `V = slice`, `T = contracted`.
    Geometric,
    /// `R = slice`, `V = contracted`, `T = horizontal`; reproduces the reference table.
    #[default]
    Rotated,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CountProfile {
    pub d: usize,
    /// Indexed by `k = 0..=d+1`.
    pub r: Vec<usize>,
    pub v: Vec<usize>,
    pub t: Vec<usize>,
    pub num_special_points: usize,
}

impl CountProfile {
    pub fn zero(d: usize, num_special_points: usize) -> Self {
        CountProfile { d, r: vec![0; d + 2], v: vec![0; d + 2], t: vec![0; d + 2], num_special_points }
    }

    pub fn r_at(&self, k: usize) -> usize {
        self.r.get(k).copied().unwrap_or(0)
    }

    pub fn v_at(&self, k: usize) -> usize {
        self.v.get(k).copied().unwrap_or(0)
    }

    pub fn t_at(&self, k: usize) -> usize {
        self.t.get(k).copied().unwrap_or(0)
    }

    pub fn total(&self, k: usize) -> usize {
        self.r_at(k) + self.v_at(k) + self.t_at(k)
    }

    /// Entrywise sum; `d` and `|P|` are taken from `self`.
    pub fn add(&self, other: &CountProfile) -> CountProfile {
        let len = self.r.len().max(other.r.len()).max(self.v.len()).max(other.v.len()).max(self.t.len()).max(other.t.len());
        CountProfile {
            d: self.d,
            r: (0..len).map(|k| self.r_at(k) + other.r_at(k)).collect(),
            v: (0..len).map(|k| self.v_at(k) + other.v_at(k)).collect(),
            t: (0..len).map(|k| self.t_at(k) + other.t_at(k)).collect(),
            num_special_points: self.num_special_points,
        }
    }
}

/// `|r_k|`, `|v_k|`, `|t_k|` for `k = 0..=Nd+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantCounts {
    pub n: usize,
    pub d: usize,
    pub r: Vec<BigUint>,
    pub v: Vec<BigUint>,
    pub t: Vec<BigUint>,
}

impl EquivariantCounts {
    fn at(v: &[BigUint], k: usize) -> BigUint {
        v.get(k).cloned().unwrap_or_default()
    }

    pub fn r_at(&self, k: usize) -> BigUint {
        Self::at(&self.r, k)
    }

    pub fn v_at(&self, k: usize) -> BigUint {
        Self::at(&self.v, k)
    }

    pub fn t_at(&self, k: usize) -> BigUint {
        Self::at(&self.t, k)
    }

    pub fn total(&self, k: usize) -> BigUint {
        self.r_at(k) + self.v_at(k) + self.t_at(k)
    }

    /// `k ≤ Nd`.
    pub fn within_bound(&self, k: usize) -> bool {
        k <= self.n * self.d
    }

    /// `Nd − d ≥ d + 1`, the approximation range needed for every `k ≤ d+1`.
    pub fn approximation_adequate(&self) -> bool {
        self.n * self.d > 2 * self.d
    }
}

/// `R`, `V`, `T` read off a marked fansy divisor after padding `P` to two points.
pub fn enumerate_rvt(x: &MarkedFansyDivisor, convention: Convention) -> CountProfile {
    let x = x.ensure_min_p();
    let d = x.rank();
    let len = d + 2;
    let mut horizontal = vec![0; len];
    let mut slice = vec![0; len];
    let mut contracted = vec![0; len];
    for c in x.tail_fan().cones() {
        let dim = c.dim();
        if x.is_marked(c) {
            if dim <= d {
                contracted[d - dim] += 1;
            }
        } else if dim <= d + 1 {
            horizontal[d + 1 - dim] += 1;
        }
    }
    for s in x.slices().values() {
        for cell in s.cells() {
            let unmarked = cell.tail_cone().map(|t| !x.is_marked(&t)).unwrap_or(false);
            if unmarked && cell.dim() <= d {
                slice[d - cell.dim()] += 1;
            }
        }
    }
    let (r, v, t) = match convention {
        Convention::Geometric => (horizontal, slice, contracted),
        Convention::Rotated => (slice, contracted, horizontal),
    };
    CountProfile { d, r, v, t, num_special_points: x.num_special_points() }
}

/// `S_i = #Σ(d−i+1) + 2#Σ(d−i)` for `i < d`, `#Σ(1) + |P|` for `i = d`, and `0` beyond.
pub fn s_closed_form(fvector: &FVector, num_p: usize, d: usize, i: usize) -> usize {
    use std::cmp::Ordering;
    match i.cmp(&d) {
        Ordering::Less => fvector.get(d - i + 1) + 2 * fvector.get(d - i),
        Ordering::Equal => fvector.get(1) + num_p,
        Ordering::Greater => 0,
    }
}

/// `S′_i = R′_{Nd−d−i}` for `i ≤ Nd−d`, else `0`.
pub fn sprime_closed_form(n: usize, d: usize, i: usize) -> BigUint {
    let top = n * d - d;
    if i > top {
        BigUint::zero()
    } else {
        sigma_e_fvector_closed_form(n, d, top - i)
    }
}

/// `r_k = sum_{m ≤ k} R′_{Nd−d−(k−m)} · R_m`, and likewise for `v`, `t`.
pub fn convolve_counts(p: &CountProfile, n: usize) -> EquivariantCounts {
    let d = p.d;
    let len = n * d + 2;
    let sp: Vec<BigUint> = (0..len).map(|i| sprime_closed_form(n, d, i)).collect();
    let conv = |at: &dyn Fn(usize) -> usize| -> Vec<BigUint> {
        (0..len)
            .map(|k| (0..=k).map(|m| &sp[k - m] * BigUint::from(at(m))).sum())
            .collect()
    };
    EquivariantCounts {
        n,
        d,
        r: conv(&|m| p.r_at(m)),
        v: conv(&|m| p.v_at(m)),
        t: conv(&|m| p.t_at(m)),
    }
}

/// `R_i + V_i + T_i = S_i`.
pub fn s_check(p: &CountProfile, fvector: &FVector, i: usize) -> bool {
    p.total(i) == s_closed_form(fvector, p.num_special_points, p.d, i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumIdentity {
    pub k: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl SumIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `r_k + v_k + t_k` against `sum_{i ≤ k} S′_i S_{k−i}`.
pub fn sum_identity(p: &CountProfile, fvector: &FVector, n: usize, k: usize) -> SumIdentity {
    let counts = convolve_counts(p, n);
    let rhs = (0..=k)
        .map(|i| sprime_closed_form(n, p.d, i) * BigUint::from(s_closed_form(fvector, p.num_special_points, p.d, k - i)))
        .sum();
    SumIdentity { k, lhs: counts.total(k), rhs }
}

/// Generator counts of the presentation `Z^{V_k} ⊕ Z^{R_k} ⊕ Z^{T_k} → A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub k: usize,
    pub v: usize,
    pub r: usize,
    pub t: usize,
    pub notes: Vec<&'static str>,
}

impl GeneratorReport {
    pub fn total(&self) -> usize {
        self.v + self.r + self.t
    }
}

pub fn generator_report(p: &CountProfile, k: usize) -> GeneratorReport {
    GeneratorReport {
        k,
        v: p.v_at(k),
        r: p.r_at(k),
        t: p.t_at(k),
        notes: vec![
            "the third summand of the presentation is taken to be Z^{T_k}",
            "generator counts only: the relations lattice K is not computed, so these are not ranks",
        ],
    }
}

/// Enumerates `Y_C` geometrically and compares every count with the convolution of the
/// counts of X, for all `k ≤ Nd+1`; also compares the provenance buckets of every slice.
pub fn oracle_report(x: &MarkedFansyDivisor, n: usize, caps: &Caps) -> Result<ValidationReport> {
    let x = x.ensure_min_p();
    let q = match build_yc(&x, n, Mode::Geometric, caps)? {
        Quotient::Geometric(q) => q,
        Quotient::Counting(_) => unreachable!("geometric mode requested"),
    };
    let mut report = q.report.clone();
    let direct = enumerate_rvt(&q.fansy, Convention::Geometric);
    let predicted = convolve_counts(&enumerate_rvt(&x, Convention::Geometric), n);
    for k in 0..=n * x.rank() + 1 {
        let got = (direct.r_at(k), direct.v_at(k), direct.t_at(k));
        let want = (predicted.r_at(k), predicted.v_at(k), predicted.t_at(k));
        let same = BigUint::from(got.0) == want.0 && BigUint::from(got.1) == want.1 && BigUint::from(got.2) == want.2;
        report.push(
            format!("oracle k={k}"),
            same,
            format!("enumerated {got:?}, convolved ({}, {}, {})", want.0, want.1, want.2),
        );
    }
    let sigma_e = SigmaE::new(n, x.rank())?.f_vector();
    for (p, slice) in x.slices() {
        let buckets = q.provenance_buckets(p);
        let ok = slice.f_vector().counts().iter().enumerate().all(|(a, &fa)| {
            sigma_e.counts().iter().enumerate().all(|(b, &fb)| buckets.get(&(a, b)).copied().unwrap_or(0) == fa * fb)
        }) && buckets.values().sum::<usize>() == slice.f_vector().total() * sigma_e.total();
        report.push(format!("provenance buckets at {p}"), ok, "");
    }
    Ok(report)
}
