//! Worked examples: the trivial divisor over the P¹ fan and P¹-bundles over P².

use std::collections::BTreeMap;

use crate::downgrade::toric_downgrade;
use crate::error::Result;
use crate::fan::{p1_fan, projectivized_bundle_fan, FVector, Fan};
use crate::fansy::MarkedFansyDivisor;
use crate::num::Vector;

/// `P(O ⊕ O(D))` over a smooth complete toric base, with `D` given by one integer per base ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    pub base_rays: Vec<Vector>,
    pub base_cones: Vec<Vec<usize>>,
    pub twist: Vec<i64>,
}

impl BundleSpec {
    /// Bundles over P² with rays `(1,0)`, `(0,1)`, `(-1,-1)`.
    pub fn over_p2(twist: [i64; 3]) -> BundleSpec {
        BundleSpec {
            base_rays: crate::fan::p2_rays(),
            base_cones: vec![vec![0, 1], vec![1, 2], vec![2, 0]],
            twist: twist.to_vec(),
        }
    }

    pub fn base_fan(&self) -> Result<Fan> {
        let rank = self.base_rays.first().map_or(0, Vector::rank);
        Fan::from_rays(rank, &self.base_rays, &self.base_cones)
    }

    pub fn fan(&self) -> Result<Fan> {
        if self.twist.len() != self.base_rays.len() {
            return Err(crate::error::Error::Precondition(format!(
                "{} twist entries for {} rays",
                self.twist.len(),
                self.base_rays.len()
            )));
        }
        let twist: BTreeMap<Vector, i64> =
            self.base_rays.iter().cloned().zip(self.twist.iter().copied()).collect();
        projectivized_bundle_fan(&self.base_fan()?, &twist)
    }

    pub fn fansy(&self) -> Result<MarkedFansyDivisor> {
        toric_downgrade(&self.fan()?)
    }
}

/// A marked fansy divisor with the face numbers used in the closed form for `S_i`.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub label: String,
    pub fansy: MarkedFansyDivisor,
    pub reference_fvector: FVector,
    pub bundle: Option<BundleSpec>,
}

impl Fixture {
    pub fn from_bundle(label: &str, spec: BundleSpec) -> Result<Fixture> {
        Ok(Fixture {
            label: label.to_string(),
            fansy: spec.fansy()?,
            reference_fvector: spec.base_fan()?.f_vector(),
            bundle: Some(spec),
        })
    }
}

/// No special points, no marks, tail fan the fan of P¹.
pub fn trivial_p1() -> Fixture {
    let fan = p1_fan();
    Fixture {
        label: "trivial".into(),
        reference_fvector: fan.f_vector(),
        fansy: MarkedFansyDivisor::trivial(fan),
        bundle: None,
    }
}

pub fn p_e() -> Result<Fixture> {
    Fixture::from_bundle("P(E)", BundleSpec::over_p2([1, 0, 0]))
}

pub fn p_f() -> Result<Fixture> {
    Fixture::from_bundle("P(F)", BundleSpec::over_p2([1, 1, -1]))
}

/// `P(F)` with the sign of the last twist entry flipped.
pub fn p_f_mutated() -> Result<Fixture> {
    Fixture::from_bundle("P(F) mutated", BundleSpec::over_p2([1, 1, 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{enumerate_rvt, Convention};

    #[test]
    fn bundle_profiles() {
        let e = enumerate_rvt(&p_e().unwrap().fansy, Convention::Rotated);
        assert_eq!((&e.r[..3], &e.v[..3], &e.t[..3]), (&[4, 7, 3][..], &[2, 1, 0][..], &[0, 1, 2][..]));
        let f = enumerate_rvt(&p_f().unwrap().fansy, Convention::Rotated);
        assert_eq!((&f.r[..3], &f.v[..3], &f.t[..3]), (&[1, 4, 5][..], &[5, 5, 0][..], &[0, 0, 0][..]));
    }

    #[test]
    fn fixtures_validate() {
        for fx in [trivial_p1(), p_e().unwrap(), p_f().unwrap()] {
            let r = fx.fansy.ensure_min_p().validate();
            assert!(r.ok(), "{}: {r}", fx.label);
        }
        assert_eq!(p_e().unwrap().reference_fvector.counts(), &[1, 3, 3]);
    }
}
