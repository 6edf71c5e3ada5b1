//! Polyhedral divisors over the projective line, their evaluations, degrees and properness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::PolyhedralComplex;
use crate::lattice::LatticeMap;
use crate::num::{format_scalar, parse_scalar, Scalar, Vector};
use crate::polyhedron::{Cone, Halfspace, Pairing, Polyhedron};

/// A point of `P^1`: a finite rational coordinate or infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointOnLine {
    Finite(Scalar),
    Infinity,
}

impl PointOnLine {
    pub fn zero() -> Self {
        PointOnLine::Finite(Scalar::zero())
    }

    pub fn finite(v: i64) -> Self {
        PointOnLine::Finite(crate::num::int(v))
    }
}

impl fmt::Display for PointOnLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOnLine::Finite(s) => f.write_str(&format_scalar(s)),
            PointOnLine::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for PointOnLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PointOnLine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(PointOnLine::Infinity),
            other => Ok(PointOnLine::Finite(parse_scalar(other)?)),
        }
    }
}

/// A finitely supported rational divisor on `P^1`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QDivisor(pub BTreeMap<PointOnLine, Scalar>);

impl QDivisor {
    pub fn coefficient(&self, p: &PointOnLine) -> Scalar {
        self.0.get(p).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Scalar {
        self.0.values().fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(Zero::is_zero)
    }

    /// Coefficient-wise `self >= other`.
    pub fn dominates(&self, other: &QDivisor) -> bool {
        self.0.keys().chain(other.0.keys()).all(|p| self.coefficient(p) >= other.coefficient(p))
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        let mut out = self.0.clone();
        for (p, c) in &other.0 {
            *out.entry(p.clone()).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        QDivisor(out)
    }

    pub fn scale(&self, s: &Scalar) -> QDivisor {
        let mut out: BTreeMap<_, _> = self.0.iter().map(|(p, c)| (p.clone(), c * s)).collect();
        out.retain(|_, c: &mut Scalar| !c.is_zero());
        QDivisor(out)
    }
}

/// `sum_p Δ_p ⊗ p` with common tail cone; unlisted points carry the tail itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PolyhedralDivisor {
    tail: Cone,
    coefficients: BTreeMap<PointOnLine, Polyhedron>,
}

impl PolyhedralDivisor {
    /// Coefficients equal to the tail are dropped; nonempty ones must have the given tail.
    pub fn new(tail: Cone, coefficients: BTreeMap<PointOnLine, Polyhedron>) -> Result<Self> {
        let rank = tail.rank();
        let mut kept = BTreeMap::new();
        for (p, c) in coefficients {
            if c.rank() != rank {
                return Err(Error::Dimension { expected: rank, found: c.rank() });
            }
            if !c.is_empty() {
                let t = c.tail_cone()?;
                if t != tail {
                    return Err(Error::Validity(format!(
                        "coefficient at {p} has tail {t:?}, expected {tail:?}"
                    )));
                }
                if &c == tail.as_polyhedron() {
                    continue;
                }
            }
            kept.insert(p, c);
        }
        Ok(PolyhedralDivisor { tail, coefficients: kept })
    }

    /// The divisor with every coefficient equal to `tail`.
    pub fn trivial(tail: Cone) -> Self {
        PolyhedralDivisor { tail, coefficients: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.tail.rank()
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    /// Points whose coefficient differs from the tail.
    pub fn support(&self) -> impl Iterator<Item = &PointOnLine> {
        self.coefficients.keys()
    }

    pub fn coefficients(&self) -> &BTreeMap<PointOnLine, Polyhedron> {
        &self.coefficients
    }

    pub fn coefficient(&self, p: &PointOnLine) -> Polyhedron {
        self.coefficients
            .get(p)
            .cloned()
            .unwrap_or_else(|| self.tail.as_polyhedron().clone())
    }

    /// Some coefficient is EMPTY, so the locus is affine.
    pub fn has_empty_coefficient(&self) -> bool {
        self.coefficients.values().any(Polyhedron::is_empty)
    }

    /// `D(u) = sum_p min_{v in Δ_p} <u, v> · p`; EMPTY coefficients lie outside the locus and are skipped.
    pub fn evaluate(&self, u: &[Scalar]) -> Result<QDivisor> {
        let mut out = BTreeMap::new();
        for (p, c) in &self.coefficients {
            if c.is_empty() {
                continue;
            }
            match c.min_pairing(u)? {
                Pairing::Finite(s) => {
                    if !s.is_zero() {
                        out.insert(p.clone(), s);
                    }
                }
                Pairing::MinusInfinity => return Err(Error::MinusInfinity { point: p.to_string() }),
            }
        }
        if !self.tail.dual().contains(u) {
            return Err(Error::MinusInfinity { point: "general point".into() });
        }
        Ok(QDivisor(out))
    }

    /// Minkowski sum of all coefficients.
    pub fn degree(&self) -> Result<Polyhedron> {
        let mut acc = self.tail.as_polyhedron().clone();
        for (p, c) in &self.coefficients {
            if c.is_empty() {
                return Err(Error::LocusRestricted { point: p.to_string() });
            }
            acc = acc.minkowski_sum(c)?;
        }
        Ok(acc)
    }

    /// Coefficient-wise intersection.
    pub fn intersect(&self, other: &PolyhedralDivisor) -> Result<PolyhedralDivisor> {
        let tail = self.tail.intersect(&other.tail)?;
        let points: BTreeSet<&PointOnLine> = self.support().chain(other.support()).collect();
        let mut coefficients = BTreeMap::new();
        for p in points {
            coefficients.insert(p.clone(), self.coefficient(p).intersect(&other.coefficient(p))?);
        }
        PolyhedralDivisor::new(tail, coefficients)
    }

    /// Coefficient-wise face relation: every coefficient is EMPTY or a face of the corresponding one of `other`.
    pub fn is_face_of(&self, other: &PolyhedralDivisor) -> bool {
        if !self.tail.is_face_of(&other.tail) {
            return false;
        }
        let points: BTreeSet<&PointOnLine> = self.support().chain(other.support()).collect();
        points.into_iter().all(|p| {
            let a = self.coefficient(p);
            a.is_empty() || a.is_face_of(&other.coefficient(p))
        })
    }

    /// Coefficient-wise `Δ_p × σ`, with tail `tail × σ`.
    pub fn product_with_cone(&self, sigma: &Cone) -> PolyhedralDivisor {
        PolyhedralDivisor {
            tail: self.tail.product(sigma),
            coefficients: self
                .coefficients
                .iter()
                .map(|(p, c)| (p.clone(), c.product(sigma.as_polyhedron())))
                .collect(),
        }
    }

    /// Coefficient-wise image under a lattice map.
    pub fn linear_image(&self, m: &LatticeMap) -> Result<PolyhedralDivisor> {
        let tail = self.tail.linear_image(m)?;
        let coefficients = self
            .coefficients
            .iter()
            .map(|(p, c)| Ok((p.clone(), c.linear_image(m)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        PolyhedralDivisor::new(tail, coefficients)
    }

    /// Properness over `P^1` via the degree criterion.
    pub fn validate_pp(&self) -> PpReport {
        validate_pp(self)
    }
}

/// Per-direction verdicts of the properness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpReport {
    /// Some coefficient is EMPTY; the locus is affine and the conditions hold trivially.
    pub affine_locus: bool,
    pub semiample: bool,
    pub big: bool,
    /// `(u, deg D(u))` on the generators of the linearity domains.
    pub evaluations: Vec<(Vector, Scalar)>,
    /// `deg D(u)` at a relative-interior point of the dual tail cone.
    pub interior_value: Option<(Vector, Scalar)>,
}

impl PpReport {
    pub fn is_proper(&self) -> bool {
        self.affine_locus || (self.semiample && self.big)
    }
}

/// On `P^1`, `D(u)` is semiample iff `deg D(u) >= 0` and big iff `deg D(u) > 0`.
///
/// `u ↦ deg D(u)` is the concave support function of `deg D`, linear on the normal
/// cones of the vertices of `deg D` intersected with the dual tail cone. Checking the
/// generators of those cones certifies semiampleness; by concavity a nonnegative
/// function that is positive somewhere is positive on the whole relative interior.
pub fn validate_pp(d: &PolyhedralDivisor) -> PpReport {
    if d.has_empty_coefficient() {
        return PpReport {
            affine_locus: true,
            semiample: true,
            big: true,
            evaluations: vec![],
            interior_value: None,
        };
    }
    let deg = d.degree().expect("no empty coefficients");
    let rank = d.rank();
    let dual = d.tail().dual();
    let mut tests: BTreeSet<Vector> = BTreeSet::new();
    for v in deg.vertices() {
        let mut ineqs: Vec<Halfspace> = deg
            .vertices()
            .iter()
            .filter(|w| *w != v)
            .map(|w| Halfspace { normal: w.sub(v), offset: Scalar::zero() })
            .collect();
        ineqs.extend(
            dual.facet_normals()
                .into_iter()
                .map(|n| Halfspace { normal: n, offset: Scalar::zero() }),
        );
        let eqs: Vec<Halfspace> = dual
            .as_polyhedron()
            .hrep()
            .equations
            .to_vec();
        let domain = Polyhedron::from_hrep(rank, &ineqs, &eqs).expect("ranks agree");
        tests.extend(domain.rays().iter().cloned());
        for l in domain.lines() {
            tests.insert(l.clone());
            tests.insert(l.neg());
        }
    }
    let eval = |u: &Vector| -> Scalar {
        let s = d.evaluate(u).expect("u lies in the dual tail cone").degree();
        debug_assert_eq!(Pairing::Finite(s.clone()), deg.min_pairing(u).unwrap());
        s
    };
    let evaluations: Vec<(Vector, Scalar)> = tests.into_iter().map(|u| {
        let s = eval(&u);
        (u, s)
    }).collect();
    let semiample = evaluations.iter().all(|(_, s)| !s.is_negative());
    let interior = dual.relative_interior_point();
    let interior_sum = evaluations.iter().fold(interior.clone(), |acc, (u, _)| acc.add(u));
    let iv = eval(&interior_sum);
    let big = semiample && iv.is_positive();
    PpReport { affine_locus: false, semiample, big, evaluations, interior_value: Some((interior_sum, iv)) }
}

/// A finite set of polyhedral divisors closed under intersection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorialFan {
    rank: usize,
    members: Vec<PolyhedralDivisor>,
}

impl DivisorialFan {
    /// Closes the generators under pairwise intersection and checks the face relations.
    pub fn new(rank: usize, generators: Vec<PolyhedralDivisor>) -> Result<DivisorialFan> {
        let mut members: BTreeSet<PolyhedralDivisor> = BTreeSet::new();
        for g in generators {
            if g.rank() != rank {
                return Err(Error::Dimension { expected: rank, found: g.rank() });
            }
            members.insert(g);
        }
        let mut frontier: Vec<PolyhedralDivisor> = members.iter().cloned().collect();
        while !frontier.is_empty() {
            let current: Vec<PolyhedralDivisor> = members.iter().cloned().collect();
            let mut next = Vec::new();
            for a in &frontier {
                for b in &current {
                    let x = a.intersect(b)?;
                    if !x.is_face_of(a) || !x.is_face_of(b) {
                        return Err(Error::FanValidity(format!(
                            "intersection of members {a:?} and {b:?} is not a face of both"
                        )));
                    }
                    if !members.contains(&x) {
                        members.insert(x.clone());
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        Ok(DivisorialFan { rank, members: members.into_iter().collect() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn members(&self) -> &[PolyhedralDivisor] {
        &self.members
    }

    pub fn special_points(&self) -> BTreeSet<PointOnLine> {
        self.members.iter().flat_map(|m| m.support().cloned()).collect()
    }

    /// The polyhedral complex of nonempty coefficients at `p`.
    pub fn slice(&self, p: &PointOnLine) -> Result<PolyhedralComplex> {
        let cells: Vec<Polyhedron> = self
            .members
            .iter()
            .map(|m| m.coefficient(p))
            .filter(|c| !c.is_empty())
            .collect();
        PolyhedralComplex::new(self.rank, cells)
    }

    /// Every member has an EMPTY coefficient somewhere.
    pub fn is_contraction_free(&self) -> bool {
        self.members.iter().all(PolyhedralDivisor::has_empty_coefficient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn interval(a: i64, b: i64) -> Polyhedron {
        Polyhedron::interval(int(a), int(b))
    }

    fn divisor(tail: Cone, coeffs: Vec<(PointOnLine, Polyhedron)>) -> PolyhedralDivisor {
        PolyhedralDivisor::new(tail, coeffs.into_iter().collect()).unwrap()
    }

    #[test]
    fn evaluation() {
        let ray = Cone::from_ints(1, &[&[1]]).unwrap();
        let delta = Polyhedron::new(1, vec![Vector::from_ints(&[1])], vec![Vector::from_ints(&[1])]).unwrap();
        let d = divisor(ray, vec![(PointOnLine::zero(), delta)]);
        assert_eq!(d.evaluate(&[int(2)]).unwrap().coefficient(&PointOnLine::zero()), int(2));
        assert!(d.evaluate(&[int(0)]).unwrap().is_zero());
        assert!(matches!(d.evaluate(&[int(-1)]), Err(Error::MinusInfinity { .. })));
    }

    #[test]
    fn degrees() {
        let z = Cone::zero(1);
        let d = divisor(z.clone(), vec![(PointOnLine::zero(), interval(0, 1)), (PointOnLine::Infinity, interval(2, 3))]);
        assert_eq!(d.degree().unwrap(), interval(2, 4));
        let sigma = Cone::from_ints(1, &[&[1]]).unwrap();
        assert_eq!(PolyhedralDivisor::trivial(sigma.clone()).degree().unwrap(), sigma.into_polyhedron());
        let e = divisor(z, vec![(PointOnLine::zero(), Polyhedron::empty(1))]);
        assert!(matches!(e.degree(), Err(Error::LocusRestricted { .. })));
    }

    #[test]
    fn pp_examples() {
        let z = Cone::zero(1);
        let d = divisor(z, vec![(PointOnLine::zero(), interval(0, 1)), (PointOnLine::Infinity, interval(-1, 0))]);
        let r = d.validate_pp();
        assert!(!r.semiample);
        assert!(r.evaluations.iter().any(|(u, s)| u == &Vector::from_ints(&[1]) && s == &int(-1)));
        let sigma = Cone::from_ints(1, &[&[1]]).unwrap();
        let t = PolyhedralDivisor::trivial(sigma.clone()).validate_pp();
        assert!(t.semiample);
        assert!(!t.big);
        let shifted = Polyhedron::new(1, vec![Vector::from_ints(&[1])], vec![Vector::from_ints(&[1])]).unwrap();
        let good = divisor(sigma, vec![(PointOnLine::zero(), shifted)]);
        assert!(good.validate_pp().is_proper());
    }

    #[test]
    fn fan_closure_and_slices() {
        let z = Cone::zero(1);
        let a = divisor(z.clone(), vec![(PointOnLine::zero(), interval(0, 1)), (PointOnLine::Infinity, Polyhedron::empty(1))]);
        let b = divisor(z, vec![(PointOnLine::zero(), interval(1, 2)), (PointOnLine::Infinity, Polyhedron::empty(1))]);
        let f = DivisorialFan::new(1, vec![a, b]).unwrap();
        assert_eq!(f.members().len(), 3);
        assert!(f.is_contraction_free());
        assert_eq!(f.slice(&PointOnLine::zero()).unwrap().f_vector().counts(), &[3, 2]);
        assert!(f.slice(&PointOnLine::Infinity).unwrap().cells().is_empty());
    }

    #[test]
    fn point_parsing() {
        assert_eq!("inf".parse::<PointOnLine>().unwrap(), PointOnLine::Infinity);
        assert_eq!("3/2".parse::<PointOnLine>().unwrap().to_string(), "3/2");
        assert!(PointOnLine::zero() < PointOnLine::Infinity);
    }
}
