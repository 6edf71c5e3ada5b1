//! Divisorial polyhedra `(L, □)` and their dualization to contraction-free divisorial fans.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::divisor::{DivisorialFan, PointOnLine, PolyhedralDivisor};
use crate::error::{Error, Result};
use crate::fan::PolyhedralComplex;
use crate::fansy::ValidationReport;
use crate::num::{Scalar, Vector};
use crate::polyhedron::{Halfspace, Pairing, Polyhedron};

/// `u ↦ <slope, u> + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffinePiece {
    pub slope: Vector,
    pub constant: Scalar,
}

impl AffinePiece {
    pub fn eval(&self, u: &[Scalar]) -> Scalar {
        self.slope.dot(u) + &self.constant
    }
}

/// A concave piecewise-affine function, the minimum of finitely many affine pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcavePiecewise {
    pieces: Vec<AffinePiece>,
}

impl ConcavePiecewise {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Validity("a piecewise-affine function needs at least one piece".into()));
        }
        let r = pieces[0].slope.rank();
        if let Some(p) = pieces.iter().find(|p| p.slope.rank() != r) {
            return Err(Error::Dimension { expected: r, found: p.slope.rank() });
        }
        Ok(ConcavePiecewise { pieces })
    }

    pub fn zero(rank: usize) -> Self {
        ConcavePiecewise { pieces: vec![AffinePiece { slope: Vector::zero(rank), constant: Scalar::zero() }] }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn eval(&self, u: &[Scalar]) -> Scalar {
        self.pieces.iter().map(|p| p.eval(u)).min().expect("nonempty")
    }

    /// Recession slope `lim L(u + λw)/λ = min_i <slope_i, w>`.
    pub fn lin(&self, w: &[Scalar]) -> Scalar {
        self.pieces.iter().map(|p| p.slope.dot(w)).min().expect("nonempty")
    }

    /// Region of `domain` on which piece `i` attains the minimum.
    pub fn piece_domain(&self, i: usize, domain: &Polyhedron) -> Result<Polyhedron> {
        let rank = domain.rank();
        let pi = &self.pieces[i];
        let ineqs: Vec<Halfspace> = self
            .pieces
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, pj)| Halfspace { normal: pj.slope.sub(&pi.slope), offset: &pi.constant - &pj.constant })
            .collect();
        Polyhedron::from_hrep(rank, &ineqs, &[])?.intersect(domain)
    }
}

/// A polyhedron `□ ⊂ M_Q` and concave functions `L_P` on it, zero at all unlisted points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialPolyhedron {
    pub square: Polyhedron,
    pub functions: BTreeMap<PointOnLine, ConcavePiecewise>,
}

impl DivisorialPolyhedron {
    pub fn new(square: Polyhedron, functions: BTreeMap<PointOnLine, ConcavePiecewise>) -> Result<Self> {
        if square.is_empty() {
            return Err(Error::EmptyOperand("divisorial polyhedron"));
        }
        for f in functions.values() {
            let r = f.pieces()[0].slope.rank();
            if r != square.rank() {
                return Err(Error::Dimension { expected: square.rank(), found: r });
            }
        }
        Ok(DivisorialPolyhedron { square, functions })
    }

    pub fn function(&self, p: &PointOnLine) -> ConcavePiecewise {
        self.functions.get(p).cloned().unwrap_or_else(|| ConcavePiecewise::zero(self.square.rank()))
    }

    /// Pairwise piece check: every piece should be active on a full-dimensional part of □.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let d = self.square.dim();
        for (p, f) in &self.functions {
            let mut redundant = Vec::new();
            for i in 0..f.pieces().len() {
                match f.piece_domain(i, &self.square) {
                    Ok(dom) if !dom.is_empty() && dom.dim() == d => {}
                    Ok(_) => redundant.push(i),
                    Err(e) => {
                        report.push(format!("L_{p} pieces"), false, e.to_string());
                    }
                }
            }
            report.push(format!("L_{p} concave on □"), true, "minimum of affine pieces");
            if !redundant.is_empty() {
                report.warn(format!("L_{p}: pieces {redundant:?} are never strictly active on □"));
            }
        }
        report
    }

    /// `{(u, t) : u ∈ □, t <= L_P(u)}`.
    fn hypograph(&self, p: &PointOnLine) -> Result<Polyhedron> {
        let r = self.square.rank();
        let f = self.function(p);
        let h = self.square.hrep();
        let lift = |hs: &Halfspace| Halfspace { normal: hs.normal.concat(&Vector::zero(1)), offset: hs.offset.clone() };
        let mut ineqs: Vec<Halfspace> = h.inequalities.iter().map(lift).collect();
        let eqs: Vec<Halfspace> = h.equations.iter().map(lift).collect();
        for piece in f.pieces() {
            // <a, u> + b - t >= 0
            let mut normal = piece.slope.entries().to_vec();
            normal.push(-Scalar::one());
            ineqs.push(Halfspace { normal: Vector::new(normal), offset: -piece.constant.clone() });
        }
        let g = Polyhedron::from_hrep(r + 1, &ineqs, &eqs)?;
        debug_assert!(!g.is_empty());
        Ok(g)
    }

    /// `L_P ≡ 0` on □.
    pub fn is_trivial_at(&self, p: &PointOnLine) -> Result<bool> {
        let g = self.hypograph(p)?;
        let flat = self.square.product(&Polyhedron::new(1, vec![Vector::zero(1)], vec![Vector::from_ints(&[-1])])?);
        Ok(g == flat)
    }

    /// Points with `L_P ≢ 0`.
    pub fn nontrivial_points(&self) -> Result<Vec<PointOnLine>> {
        let mut out = Vec::new();
        for p in self.functions.keys() {
            if !self.is_trivial_at(p)? {
                out.push(p.clone());
            }
        }
        Ok(out)
    }

    /// `□*_P = {v : <v, w> >= Lin_P(w) for all w in tail(□)}`.
    pub fn dual_square(&self, p: &PointOnLine) -> Result<Polyhedron> {
        let r = self.square.rank();
        let f = self.function(p);
        let tail = self.square.tail_cone()?;
        let mut tests: Vec<Vector> = Vec::new();
        for i in 0..f.pieces().len() {
            // Linearity domain of Lin inside tail(□): piece i has the smallest slope pairing.
            let pi = &f.pieces()[i];
            let ineqs: Vec<Halfspace> = f
                .pieces()
                .iter()
                .map(|pj| Halfspace { normal: pj.slope.sub(&pi.slope), offset: Scalar::zero() })
                .collect();
            let dom = Polyhedron::from_hrep(r, &ineqs, &[])?.intersect(tail.as_polyhedron())?;
            tests.extend(dom.rays().iter().cloned());
            for l in dom.lines() {
                tests.push(l.clone());
                tests.push(l.neg());
            }
        }
        let ineqs: Vec<Halfspace> = tests
            .iter()
            .map(|w| Halfspace { normal: w.clone(), offset: f.lin(w) })
            .collect();
        Polyhedron::from_hrep(r, &ineqs, &[])
    }

    /// `L*_P(v) = min_{u ∈ □} (<u, v> - L_P(u))`.
    pub fn conjugate(&self, p: &PointOnLine, v: &[Scalar]) -> Result<Pairing> {
        let mut w = v.to_vec();
        w.push(-Scalar::one());
        self.hypograph(p)?.min_pairing(&w)
    }

    /// `□*_P` and its subdivision into the linearity domains of `L*_P`.
    ///
    /// Domains are pointed unless □ itself lies in a proper affine subspace, as for `□ = {0}`.
    pub fn dualize(&self, p: &PointOnLine) -> Result<(Polyhedron, PolyhedralComplex)> {
        let r = self.square.rank();
        let star = self.dual_square(p)?;
        let g = self.hypograph(p)?;
        let probe = star.relative_interior_point().ok_or(Error::InternalInconsistency("□* is empty".into()))?;
        if matches!(self.conjugate(p, &probe)?, Pairing::MinusInfinity) {
            return Err(Error::InternalInconsistency(format!("L*_{p} is unbounded below on □*")));
        }
        let verts: Vec<(Vector, Scalar)> = g
            .vertices()
            .iter()
            .map(|x| (Vector::new(x.entries()[..r].to_vec()), x[r].clone()))
            .collect();
        let mut cells = Vec::new();
        for (k, (uk, tk)) in verts.iter().enumerate() {
            let ineqs: Vec<Halfspace> = verts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, (uj, tj))| Halfspace { normal: uj.sub(uk), offset: tj - tk })
                .collect();
            let dom = Polyhedron::from_hrep(r, &ineqs, &[])?.intersect(&star)?;
            if !dom.is_empty() && dom.dim() == star.dim() {
                cells.push(dom);
            }
        }
        let complex = PolyhedralComplex::new(r, cells)?;
        Ok((star, complex))
    }

    /// `C_L = {Δ_P ⊗ P + ∅ ⊗ (E − P) : P ∈ K, Δ_P ∈ Ξ(L*_P)}` closed under intersection.
    pub fn to_divisorial_fan(&self) -> Result<DivisorialFan> {
        divpoly_to_divfan(self)
    }
}

pub fn dualize_divpoly(dp: &DivisorialPolyhedron, p: &PointOnLine) -> Result<(Polyhedron, PolyhedralComplex)> {
    dp.dualize(p)
}

pub fn divpoly_to_divfan(dp: &DivisorialPolyhedron) -> Result<DivisorialFan> {
    let k = dp.nontrivial_points()?;
    if k.is_empty() {
        return Err(Error::DegenerateInput("L_P vanishes identically at every point".into()));
    }
    let r = dp.square.rank();
    let mut gens = Vec::new();
    for p in &k {
        let (_, complex) = dp.dualize(p)?;
        for cell in complex.maximal_cells() {
            let mut coefficients = BTreeMap::new();
            for q in &k {
                coefficients.insert(q.clone(), if q == p { cell.clone() } else { Polyhedron::empty(r) });
            }
            gens.push(PolyhedralDivisor::new(cell.tail_cone()?, coefficients)?);
        }
    }
    let fan = DivisorialFan::new(r, gens)?;
    if !fan.is_contraction_free() {
        return Err(Error::Construction(
            "generated fan is not contraction free: some member has no EMPTY coefficient".into(),
        ));
    }
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn constant(slope: i64, c: i64) -> ConcavePiecewise {
        ConcavePiecewise::new(vec![AffinePiece { slope: Vector::from_ints(&[slope]), constant: int(c) }]).unwrap()
    }

    #[test]
    fn zero_function_on_interval() {
        let sq = Polyhedron::interval(int(0), int(1));
        let p = PointOnLine::zero();
        let dp = DivisorialPolyhedron::new(sq, BTreeMap::from([(p.clone(), ConcavePiecewise::zero(1))])).unwrap();
        let (star, xi) = dp.dualize(&p).unwrap();
        assert_eq!(star.dim(), 1);
        assert!(star.lines().len() == 1);
        assert_eq!(dp.conjugate(&p, &[int(3)]).unwrap(), Pairing::Finite(int(0)));
        assert_eq!(dp.conjugate(&p, &[int(-2)]).unwrap(), Pairing::Finite(int(-2)));
        assert_eq!(xi.f_vector().counts(), &[1, 2]);
        assert!(dp.is_trivial_at(&p).unwrap());
        assert!(matches!(divpoly_to_divfan(&dp), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn affine_function_breakpoint() {
        let sq = Polyhedron::interval(int(0), int(1));
        let p = PointOnLine::zero();
        let dp = DivisorialPolyhedron::new(sq, BTreeMap::from([(p.clone(), constant(3, 1))])).unwrap();
        let (_, xi) = dp.dualize(&p).unwrap();
        let vertices: Vec<_> = xi.cells_of_dim(0).cloned().collect();
        assert_eq!(vertices, vec![Polyhedron::point(Vector::from_ints(&[3]))]);
    }

    #[test]
    fn point_square() {
        let sq = Polyhedron::point(Vector::zero(1));
        let p = PointOnLine::Infinity;
        let dp = DivisorialPolyhedron::new(sq, BTreeMap::from([(p.clone(), ConcavePiecewise::zero(1))])).unwrap();
        let (star, xi) = dp.dualize(&p).unwrap();
        assert_eq!(star.lines().len(), 1);
        assert_eq!(xi.cells().len(), 1);
    }

    #[test]
    fn two_point_fan() {
        let sq = Polyhedron::interval(int(0), int(1));
        let dp = DivisorialPolyhedron::new(
            sq,
            BTreeMap::from([(PointOnLine::zero(), constant(1, 0)), (PointOnLine::Infinity, constant(-2, 0))]),
        )
        .unwrap();
        let fan = dp.to_divisorial_fan().unwrap();
        assert!(fan.is_contraction_free());
        for m in fan.members() {
            assert!(m.validate_pp().is_proper());
        }
        let s0 = fan.slice(&PointOnLine::zero()).unwrap();
        assert!(s0.is_complete().complete);
        assert_eq!(s0.cells_of_dim(0).next().unwrap(), &Polyhedron::point(Vector::from_ints(&[1])));
        let (_, xi_inf) = dp.dualize(&PointOnLine::Infinity).unwrap();
        assert_eq!(fan.slice(&PointOnLine::Infinity).unwrap(), xi_inf);
    }
}
