//! Marked fansy divisors: complete slices over `P^1` with a common tail fan and contracted cones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::divisor::{DivisorialFan, PointOnLine, PolyhedralDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, PolyhedralComplex};
use crate::polyhedron::{Cone, Polyhedron};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Named pass/fail checks plus non-fatal warnings, in deterministic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{status} {}", c.name)?;
            } else {
                writeln!(f, "{status} {}: {}", c.name, c.detail)?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "WARN {w}")?;
        }
        Ok(())
    }
}

/// `Ξ = sum_P Ξ_P · P` with tail fan Σ and marked cones C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedFansyDivisor {
    rank: usize,
    tail_fan: Fan,
    slices: BTreeMap<PointOnLine, PolyhedralComplex>,
    marked: BTreeSet<Cone>,
}

impl MarkedFansyDivisor {
    /// Points absent from `slices` carry the tail fan; the keys of `slices` are the special points.
    pub fn new(
        tail_fan: Fan,
        slices: BTreeMap<PointOnLine, PolyhedralComplex>,
        marked: BTreeSet<Cone>,
    ) -> Result<Self> {
        let rank = tail_fan.rank();
        for (p, s) in &slices {
            if s.rank() != rank {
                return Err(Error::Dimension { expected: rank, found: s.rank() });
            }
            if s.cells().is_empty() {
                return Err(Error::Validity(format!("slice at {p} has no cells")));
            }
        }
        if let Some(c) = marked.iter().find(|c| !tail_fan.contains(c)) {
            return Err(Error::Validity(format!("marked cone {c:?} is not in the tail fan")));
        }
        Ok(MarkedFansyDivisor { rank, tail_fan, slices, marked })
    }

    /// Tail fan only, no special points, no marks.
    pub fn trivial(tail_fan: Fan) -> Self {
        MarkedFansyDivisor { rank: tail_fan.rank(), tail_fan, slices: BTreeMap::new(), marked: BTreeSet::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tail_fan(&self) -> &Fan {
        &self.tail_fan
    }

    pub fn marked(&self) -> &BTreeSet<Cone> {
        &self.marked
    }

    pub fn is_marked(&self, c: &Cone) -> bool {
        self.marked.contains(c)
    }

    pub fn special_points(&self) -> impl Iterator<Item = &PointOnLine> {
        self.slices.keys()
    }

    pub fn num_special_points(&self) -> usize {
        self.slices.len()
    }

    pub fn slices(&self) -> &BTreeMap<PointOnLine, PolyhedralComplex> {
        &self.slices
    }

    pub fn slice(&self, p: &PointOnLine) -> PolyhedralComplex {
        self.slices.get(p).cloned().unwrap_or_else(|| self.tail_fan.as_complex())
    }

    /// Cells of the slice at `p` whose tail cone is `sigma`.
    pub fn cells_with_tail(&self, p: &PointOnLine, sigma: &Cone) -> Vec<Polyhedron> {
        self.slice(p)
            .cells()
            .iter()
            .filter(|c| c.tail_cone().is_ok_and(|t| &t == sigma))
            .cloned()
            .collect()
    }

    /// `D^σ = sum_P Δ_P^σ ⊗ P`, with `Δ_P^σ` the unique cell of `Ξ_P` with tail `σ`.
    pub fn d_sigma(&self, sigma: &Cone) -> Result<PolyhedralDivisor> {
        let mut coefficients = BTreeMap::new();
        for p in self.slices.keys() {
            let cells = self.cells_with_tail(p, sigma);
            if cells.len() != 1 {
                return Err(Error::Validity(format!(
                    "slice at {p} has {} cells with tail {sigma:?}, expected exactly one",
                    cells.len()
                )));
            }
            coefficients.insert(p.clone(), cells.into_iter().next().expect("one cell"));
        }
        PolyhedralDivisor::new(sigma.clone(), coefficients)
    }

    /// Appends points from `0, ∞, 1` (in that order) carrying the trivial slice until `|P| >= 2`.
    pub fn ensure_min_p(&self) -> MarkedFansyDivisor {
        let mut out = self.clone();
        for p in [PointOnLine::zero(), PointOnLine::Infinity, PointOnLine::finite(1)] {
            if out.slices.len() >= 2 {
                break;
            }
            out.slices.entry(p).or_insert_with(|| self.tail_fan.as_complex());
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate_marked_fansy(self)
    }

    /// A divisorial fan whose slices are the slices of `self`.
    ///
    /// Generators: `D^σ` for full-dimensional marked `σ`, and for every special point `P`
    /// and maximal cell `Δ` of `Ξ_P` with unmarked tail, `Δ ⊗ P` with EMPTY coefficients at
    /// the other special points.
    pub fn to_divisorial_fan(&self) -> Result<DivisorialFan> {
        let x = self.ensure_min_p();
        let n = x.rank;
        let mut gens = Vec::new();
        for sigma in x.marked.iter().filter(|c| c.dim() == n) {
            gens.push(x.d_sigma(sigma)?);
        }
        for (p, slice) in &x.slices {
            for cell in slice.maximal_cells() {
                let tail = cell.tail_cone()?;
                if x.is_marked(&tail) {
                    continue;
                }
                let mut coefficients = BTreeMap::new();
                for q in x.slices.keys() {
                    let c = if q == p { cell.clone() } else { Polyhedron::empty(n) };
                    coefficients.insert(q.clone(), c);
                }
                gens.push(PolyhedralDivisor::new(tail, coefficients)?);
            }
        }
        DivisorialFan::new(n, gens)
    }
}

/// Checks slice completeness, tail fans, the marked closure rule and the two
/// conditions on full-dimensional marked cones.
///
/// The degree condition is read as: for `τ ≺ σ`, `τ ∈ C` iff `deg D^σ ∩ τ ≠ ∅`.
pub fn validate_marked_fansy(x: &MarkedFansyDivisor) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = x.rank;

    for (p, slice) in &x.slices {
        let cert = slice.is_complete();
        report.push(
            format!("slice {p} complete"),
            cert.complete,
            cert.failure.clone().unwrap_or_default(),
        );
        match slice.tail_fan() {
            Ok(t) => report.push(
                format!("slice {p} tail fan"),
                t == x.tail_fan,
                if t == x.tail_fan { String::new() } else { format!("tail fan {:?} differs", t.f_vector()) },
            ),
            Err(e) => report.push(format!("slice {p} tail fan"), false, e.to_string()),
        }
        if let Err(e) = slice.check_intersections() {
            report.push(format!("slice {p} is a complex"), false, e.to_string());
        }
    }
    let cert = x.tail_fan.is_complete();
    report.push("tail fan complete", cert.complete, cert.failure.unwrap_or_default());

    // Closure as stated: τ ≺ σ and τ ∈ C implies σ ∈ C.
    let cones = x.tail_fan.cones();
    let mut upward_ok = true;
    let mut downward_ok = true;
    for tau in cones {
        for sigma in cones {
            if sigma == tau || !tau.is_face_of(sigma) {
                continue;
            }
            if x.is_marked(tau) && !x.is_marked(sigma) {
                upward_ok = false;
            }
            if x.is_marked(sigma) && !x.is_marked(tau) {
                downward_ok = false;
            }
        }
    }
    report.push("marked set closed under cofaces", upward_ok, "");
    if upward_ok != downward_ok {
        report.warn("the marked set is not closed under faces; the inverse closure rule would differ");
    }

    for sigma in x.marked.iter().filter(|c| c.dim() == n) {
        let d = match x.d_sigma(sigma) {
            Ok(d) => d,
            Err(e) => {
                report.push(format!("D^σ proper for σ = {sigma:?}"), false, e.to_string());
                continue;
            }
        };
        let pp = d.validate_pp();
        report.push(
            format!("D^σ proper for σ = {sigma:?}"),
            pp.is_proper(),
            if pp.is_proper() {
                String::new()
            } else if !pp.semiample {
                "not semiample".to_string()
            } else {
                "not big".to_string()
            },
        );
        let deg = match d.degree() {
            Ok(deg) => deg,
            Err(e) => {
                report.push(format!("degree condition for σ = {sigma:?}"), false, e.to_string());
                continue;
            }
        };
        let mut bad = Vec::new();
        for tau in cones.iter().filter(|t| t.is_face_of(sigma)) {
            let meets = deg.intersect(tau.as_polyhedron()).is_ok_and(|i| !i.is_empty());
            if meets != x.is_marked(tau) {
                bad.push(format!("{tau:?}"));
            }
        }
        report.push(
            format!("degree condition for σ = {sigma:?}"),
            bad.is_empty(),
            if bad.is_empty() { String::new() } else { format!("faces {} violate it", bad.join(", ")) },
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::p1_fan;

    #[test]
    fn unmarked_trivial_is_valid() {
        let x = MarkedFansyDivisor::trivial(p1_fan()).ensure_min_p();
        assert_eq!(x.num_special_points(), 2);
        let r = x.validate();
        assert!(r.ok(), "{r}");
        let s = x.to_divisorial_fan().unwrap();
        assert!(s.is_contraction_free());
        assert_eq!(s.slice(&PointOnLine::zero()).unwrap(), p1_fan().as_complex());
    }

    #[test]
    fn ensure_min_p_adds_points() {
        let x = MarkedFansyDivisor::trivial(p1_fan());
        let one = MarkedFansyDivisor::new(
            p1_fan(),
            BTreeMap::from([(PointOnLine::Infinity, p1_fan().as_complex())]),
            BTreeSet::new(),
        )
        .unwrap();
        let y = one.ensure_min_p();
        assert_eq!(y.special_points().cloned().collect::<Vec<_>>(), vec![PointOnLine::zero(), PointOnLine::Infinity]);
        assert_eq!(x.ensure_min_p().ensure_min_p(), x.ensure_min_p());
    }

    #[test]
    fn failing_bigness_is_reported() {
        // Mark everything in the trivial P^1 fansy divisor: D^σ = σ ⊗ 0 + σ ⊗ ∞ is not big.
        let fan = p1_fan();
        let marked: BTreeSet<Cone> = fan.cones().iter().cloned().collect();
        let slices = BTreeMap::from([
            (PointOnLine::zero(), fan.as_complex()),
            (PointOnLine::Infinity, fan.as_complex()),
        ]);
        let x = MarkedFansyDivisor::new(fan, slices, marked).unwrap();
        let r = x.validate();
        assert!(r.failures().any(|c| c.name.starts_with("D^σ proper")));
    }
}
