//! Rational polyhedra and cones with a canonical V-representation and a lazily derived H-representation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::lattice::LatticeMap;
use crate::linalg::{self, Matrix};
use crate::num::{dot, primitive, Scalar, Vector};

/// `normal . x >= offset` (or `=` when used as an equation).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Scalar,
}

impl Halfspace {
    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        self.normal.dot(x) - &self.offset
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HRep {
    pub inequalities: Vec<Halfspace>,
    pub equations: Vec<Halfspace>,
}

/// Result of minimizing a linear form over a polyhedron.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pairing {
    Finite(Scalar),
    MinusInfinity,
}

impl Pairing {
    pub fn finite(self) -> Option<Scalar> {
        match self {
            Pairing::Finite(s) => Some(s),
            Pairing::MinusInfinity => None,
        }
    }
}

#[derive(Debug)]
struct Generators {
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
    lines: Vec<Vector>,
    hrep: OnceLock<HRep>,
}

/// `conv(vertices) + cone(rays) + span(lines)`, or the empty polyhedron.
///
/// The representation is canonical: lines are a reduced echelon basis scaled to
/// primitive integer vectors, rays are primitive integer vectors orthogonal to the
/// lines, vertices are the minimal-face points orthogonal to the lines, and every
/// list is sorted. Two polyhedra are equal exactly when they are the same point set.
#[derive(Clone)]
pub struct Polyhedron {
    rank: usize,
    gens: Option<Arc<Generators>>,
}

fn check_rank(rank: usize, v: &[Scalar]) -> Result<()> {
    if v.len() != rank {
        return Err(Error::Dimension { expected: rank, found: v.len() });
    }
    Ok(())
}

fn canonical_lines(rank: usize, lines: &[Vector]) -> Vec<Vector> {
    let rows: Matrix = lines.iter().map(|l| l.entries().to_vec()).collect();
    let (r, _) = linalg::rref(&rows, rank);
    r.into_iter().map(|row| Vector::new(primitive(&row))).collect()
}

impl Polyhedron {
    pub fn empty(rank: usize) -> Self {
        Polyhedron { rank, gens: None }
    }

    /// A single point.
    pub fn point(v: Vector) -> Self {
        let rank = v.rank();
        Self::from_extreme(rank, vec![v], vec![], vec![])
    }

    /// The closed interval `[a, b]` in rank one.
    pub fn interval(a: Scalar, b: Scalar) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self::from_extreme(1, vec![Vector::new(vec![lo]), Vector::new(vec![hi])], vec![], vec![])
    }

    /// Builds `conv(vertices) + cone(rays)`, pruning redundant generators.
    pub fn new(rank: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        Self::from_vrep(rank, vertices, rays, vec![])
    }

    pub fn from_vrep(rank: usize, vertices: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> Result<Self> {
        for v in vertices.iter().chain(&rays).chain(&lines) {
            check_rank(rank, v)?;
        }
        if vertices.is_empty() {
            return Ok(Self::empty(rank));
        }
        let hrep = hrep_from_generators(rank, &vertices, &rays, &lines);
        Ok(Self::from_hrep_internal(rank, &hrep))
    }

    /// Builds `{x : a.x >= b for inequalities, a.x = b for equations}`.
    pub fn from_hrep(rank: usize, inequalities: &[Halfspace], equations: &[Halfspace]) -> Result<Self> {
        for h in inequalities.iter().chain(equations) {
            check_rank(rank, &h.normal)?;
        }
        let hrep = HRep { inequalities: inequalities.to_vec(), equations: equations.to_vec() };
        let p = Self::from_hrep_internal(rank, &hrep);
        // Round-trip through V so that the stored H-representation is irredundant.
        Ok(match &p.gens {
            None => p,
            Some(g) => Self::from_extreme(rank, g.vertices.clone(), g.rays.clone(), g.lines.clone()),
        })
    }

    fn from_hrep_internal(rank: usize, hrep: &HRep) -> Self {
        let homog = |h: &Halfspace| -> Vec<Scalar> {
            let mut row = h.normal.entries().to_vec();
            row.push(-h.offset.clone());
            row
        };
        let mut ineqs: Matrix = hrep.inequalities.iter().map(homog).collect();
        let mut x0 = vec![Scalar::zero(); rank + 1];
        x0[rank] = Scalar::one();
        ineqs.push(x0);
        let eqs: Matrix = hrep.equations.iter().map(homog).collect();
        let g = cone_generators(rank + 1, &ineqs, &eqs);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in g.rays {
            let t = r[rank].clone();
            let x: Vec<Scalar> = r[..rank].to_vec();
            if t.is_positive() {
                vertices.push(Vector::new(x.iter().map(|c| c / &t).collect()));
            } else {
                rays.push(Vector::new(x));
            }
        }
        if vertices.is_empty() {
            return Self::empty(rank);
        }
        let lines: Vec<Vector> = g.lines.into_iter().map(|l| Vector::new(l[..rank].to_vec())).collect();
        Self::from_extreme(rank, vertices, rays, lines)
    }

    /// Trusted constructor: the generators are already irredundant modulo the lineality space.
    pub(crate) fn from_extreme(rank: usize, vertices: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> Self {
        if vertices.is_empty() {
            return Self::empty(rank);
        }
        let lines = canonical_lines(rank, &lines);
        let basis: Matrix = lines.iter().map(|l| l.entries().to_vec()).collect();
        let mut vertices: Vec<Vector> = vertices
            .iter()
            .map(|v| Vector::new(linalg::project_out(v, &basis)))
            .collect();
        vertices.sort();
        vertices.dedup();
        let mut rays: Vec<Vector> = rays
            .iter()
            .map(|r| Vector::new(primitive(&linalg::project_out(r, &basis))))
            .filter(|r| !r.is_zero())
            .collect();
        rays.sort();
        rays.dedup();
        Polyhedron {
            rank,
            gens: Some(Arc::new(Generators { vertices, rays, lines, hrep: OnceLock::new() })),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_none()
    }

    pub fn vertices(&self) -> &[Vector] {
        self.gens.as_ref().map_or(&[], |g| &g.vertices)
    }

    pub fn rays(&self) -> &[Vector] {
        self.gens.as_ref().map_or(&[], |g| &g.rays)
    }

    pub fn lines(&self) -> &[Vector] {
        self.gens.as_ref().map_or(&[], |g| &g.lines)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays().is_empty() && self.lines().is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lines().is_empty()
    }

    /// Derived H-representation (empty for the empty polyhedron).
    pub fn hrep(&self) -> &HRep {
        static EMPTY: OnceLock<HRep> = OnceLock::new();
        match &self.gens {
            None => EMPTY.get_or_init(HRep::default),
            Some(g) => g
                .hrep
                .get_or_init(|| hrep_from_generators(self.rank, &g.vertices, &g.rays, &g.lines)),
        }
    }

    /// Dimension of the affine hull. Panics on the empty polyhedron.
    pub fn dim(&self) -> usize {
        self.try_dim().expect("dimension of the empty polyhedron")
    }

    pub fn try_dim(&self) -> Option<usize> {
        let g = self.gens.as_ref()?;
        Some(span_dim(self.rank, &g.vertices, &g.rays, &g.lines))
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        if self.is_empty() || x.len() != self.rank {
            return false;
        }
        let h = self.hrep();
        h.equations.iter().all(|e| e.slack(x).is_zero())
            && h.inequalities.iter().all(|i| !i.slack(x).is_negative())
    }

    /// `other ⊆ self`.
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() || self.rank != other.rank {
            return false;
        }
        let h = self.hrep();
        other.vertices().iter().all(|v| self.contains(v))
            && other.rays().iter().all(|r| {
                h.equations.iter().all(|e| e.normal.dot(r).is_zero())
                    && h.inequalities.iter().all(|i| !i.normal.dot(r).is_negative())
            })
            && other.lines().iter().all(|l| {
                h.equations.iter().chain(&h.inequalities).all(|e| e.normal.dot(l).is_zero())
            })
    }

    /// Set equality via mutual containment of H-representations.
    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.contains_polyhedron(other) && other.contains_polyhedron(self)
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.rank != other.rank {
            return Err(Error::Dimension { expected: self.rank, found: other.rank });
        }
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyOperand("minkowski_sum"));
        }
        let mut vertices = Vec::new();
        for a in self.vertices() {
            for b in other.vertices() {
                vertices.push(a.add(b));
            }
        }
        let rays = self.rays().iter().chain(other.rays()).cloned().collect();
        let lines = self.lines().iter().chain(other.lines()).cloned().collect();
        Polyhedron::from_vrep(self.rank, vertices, rays, lines)
    }

    /// The recession cone `{v : v + self ⊆ self}`.
    pub fn tail_cone(&self) -> Result<Cone> {
        if self.is_empty() {
            return Err(Error::EmptyOperand("tail_cone"));
        }
        for r in self.rays().iter().chain(self.lines()) {
            for v in self.vertices() {
                if !self.contains(&v.add(r)) {
                    return Err(Error::InternalInconsistency(format!(
                        "ray {r} does not recede from vertex {v}"
                    )));
                }
            }
        }
        Ok(Cone(Polyhedron::from_extreme(
            self.rank,
            vec![Vector::zero(self.rank)],
            self.rays().to_vec(),
            self.lines().to_vec(),
        )))
    }

    /// Cartesian product; the empty polyhedron is absorbing.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let rank = self.rank + other.rank;
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(rank);
        }
        let za = Vector::zero(self.rank);
        let zb = Vector::zero(other.rank);
        let mut vertices = Vec::new();
        for a in self.vertices() {
            for b in other.vertices() {
                vertices.push(a.concat(b));
            }
        }
        let rays = self
            .rays()
            .iter()
            .map(|r| r.concat(&zb))
            .chain(other.rays().iter().map(|r| za.concat(r)))
            .collect();
        let lines = self
            .lines()
            .iter()
            .map(|r| r.concat(&zb))
            .chain(other.lines().iter().map(|r| za.concat(r)))
            .collect();
        Polyhedron::from_extreme(rank, vertices, rays, lines)
    }

    /// Image under a lattice map, with redundant generators pruned.
    pub fn linear_image(&self, m: &LatticeMap) -> Result<Polyhedron> {
        if m.source_rank() != self.rank {
            return Err(Error::Dimension { expected: m.source_rank(), found: self.rank });
        }
        if self.is_empty() {
            return Ok(Polyhedron::empty(m.target_rank()));
        }
        let map = |vs: &[Vector]| vs.iter().map(|v| m.apply(v)).collect::<Vec<_>>();
        Polyhedron::from_vrep(m.target_rank(), map(self.vertices()), map(self.rays()), map(self.lines()))
    }

    /// True when `m` is injective on the affine span of `self`.
    pub fn map_is_injective_on(&self, m: &LatticeMap) -> bool {
        let dirs = self.directions();
        let images: Matrix = dirs.iter().map(|d| m.apply(d).into_inner()).collect();
        linalg::rank(&images, m.target_rank()) == linalg::rank(&dirs, self.rank)
    }

    fn directions(&self) -> Matrix {
        let Some(v0) = self.vertices().first() else { return vec![] };
        self.vertices()[1..]
            .iter()
            .map(|v| v.sub(v0).into_inner())
            .chain(self.rays().iter().map(|r| r.entries().to_vec()))
            .chain(self.lines().iter().map(|l| l.entries().to_vec()))
            .collect()
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.rank != other.rank {
            return Err(Error::Dimension { expected: self.rank, found: other.rank });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.rank));
        }
        let (a, b) = (self.hrep(), other.hrep());
        let ineqs: Vec<Halfspace> = a.inequalities.iter().chain(&b.inequalities).cloned().collect();
        let eqs: Vec<Halfspace> = a.equations.iter().chain(&b.equations).cloned().collect();
        Polyhedron::from_hrep(self.rank, &ineqs, &eqs)
    }

    /// `min_{v in self} <u, v>`.
    pub fn min_pairing(&self, u: &[Scalar]) -> Result<Pairing> {
        check_rank(self.rank, u)?;
        let g = self.gens.as_ref().ok_or(Error::UndefinedOnEmpty)?;
        if g.rays.iter().any(|r| dot(u, r).is_negative()) || g.lines.iter().any(|l| !dot(u, l).is_zero()) {
            return Ok(Pairing::MinusInfinity);
        }
        let min = g.vertices.iter().map(|v| dot(u, v)).min().expect("nonempty polyhedron has a vertex");
        Ok(Pairing::Finite(min))
    }

    pub fn translate(&self, t: &Vector) -> Polyhedron {
        match &self.gens {
            None => self.clone(),
            Some(g) => Polyhedron::from_extreme(
                self.rank,
                g.vertices.iter().map(|v| v.add(t)).collect(),
                g.rays.clone(),
                g.lines.clone(),
            ),
        }
    }

    /// Mean of the vertices plus the sum of the rays; lies in the relative interior.
    pub fn relative_interior_point(&self) -> Option<Vector> {
        let g = self.gens.as_ref()?;
        let n = Scalar::from_integer((g.vertices.len() as i64).into());
        let mut p = g.vertices.iter().fold(Vector::zero(self.rank), |acc, v| acc.add(v)).scale(&(Scalar::one() / n));
        for r in &g.rays {
            p = p.add(r);
        }
        Some(p)
    }

    /// Indices of the inequalities tight at `x`.
    pub fn tight_inequalities(&self, x: &[Scalar]) -> Vec<usize> {
        self.hrep()
            .inequalities
            .iter()
            .enumerate()
            .filter(|(_, h)| h.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// The smallest face of `self` containing the point `x` (which must lie in `self`).
    pub fn face_containing(&self, x: &[Scalar]) -> Option<Polyhedron> {
        if !self.contains(x) {
            return None;
        }
        let h = self.hrep();
        let tight: Vec<&Halfspace> = self.tight_inequalities(x).into_iter().map(|i| &h.inequalities[i]).collect();
        Some(self.face_cut_by(&tight))
    }

    /// Face of `self` on which all the given valid inequalities are tight.
    pub(crate) fn face_cut_by(&self, tight: &[&Halfspace]) -> Polyhedron {
        let vertices: Vec<Vector> = self
            .vertices()
            .iter()
            .filter(|v| tight.iter().all(|h| h.slack(v).is_zero()))
            .cloned()
            .collect();
        let rays: Vec<Vector> = self
            .rays()
            .iter()
            .filter(|r| tight.iter().all(|h| h.normal.dot(r).is_zero()))
            .cloned()
            .collect();
        Polyhedron::from_extreme(self.rank, vertices, rays, self.lines().to_vec())
    }

    /// True when `self` is a nonempty face of `other`.
    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        if self.is_empty() || !other.contains_polyhedron(self) {
            return false;
        }
        let p = self.relative_interior_point().expect("nonempty");
        other.face_containing(&p).is_some_and(|f| &f == self)
    }

    fn key(&self) -> (usize, Option<GenKey<'_>>) {
        (
            self.rank,
            self.gens.as_ref().map(|g| (&g.vertices[..], &g.rays[..], &g.lines[..])),
        )
    }
}

pub(crate) fn span_dim(rank: usize, vertices: &[Vector], rays: &[Vector], lines: &[Vector]) -> usize {
    let Some(v0) = vertices.first() else { return 0 };
    let dirs: Matrix = vertices[1..]
        .iter()
        .map(|v| v.sub(v0).into_inner())
        .chain(rays.iter().map(|r| r.entries().to_vec()))
        .chain(lines.iter().map(|l| l.entries().to_vec()))
        .collect();
    linalg::rank(&dirs, rank)
}

/// Facet description of a nonempty polyhedron via the dual of its homogenization.
fn hrep_from_generators(rank: usize, vertices: &[Vector], rays: &[Vector], lines: &[Vector]) -> HRep {
    let mut gens: Matrix = Vec::new();
    for v in vertices {
        let mut row = v.entries().to_vec();
        row.push(Scalar::one());
        gens.push(row);
    }
    for r in rays {
        let mut row = r.entries().to_vec();
        row.push(Scalar::zero());
        gens.push(row);
    }
    for l in lines {
        let mut row = l.entries().to_vec();
        row.push(Scalar::zero());
        gens.push(row.iter().map(|x| -x).collect());
        gens.push(row);
    }
    let dual = cone_generators(rank + 1, &gens, &[]);
    let split = |y: &[Scalar]| Halfspace {
        normal: Vector::new(y[..rank].to_vec()),
        offset: -y[rank].clone(),
    };
    // Canonical equations: reduced echelon basis, primitive.
    let (eq_rows, _) = linalg::rref(&dual.lines, rank + 1);
    let eq_rows: Matrix = eq_rows.into_iter().map(|r| primitive(&r)).collect();
    let mut equations: Vec<Halfspace> = eq_rows.iter().map(|r| split(r)).collect();
    equations.sort();
    let mut inequalities: Vec<Halfspace> = dual
        .rays
        .iter()
        .map(|y| primitive(&linalg::project_out(y, &eq_rows)))
        .map(|y| split(&y))
        .filter(|h| !h.normal.is_zero())
        .filter(|h| vertices.iter().any(|v| h.slack(v).is_zero()))
        .collect();
    inequalities.sort();
    inequalities.dedup();
    HRep { inequalities, equations }
}

type GenKey<'a> = (&'a [Vector], &'a [Vector], &'a [Vector]);

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Polyhedron {}

impl Hash for Polyhedron {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gens {
            None => write!(f, "EMPTY({})", self.rank),
            Some(g) => {
                write!(f, "conv{:?}", g.vertices)?;
                if !g.rays.is_empty() {
                    write!(f, " + cone{:?}", g.rays)?;
                }
                if !g.lines.is_empty() {
                    write!(f, " + span{:?}", g.lines)?;
                }
                Ok(())
            }
        }
    }
}

/// A polyhedral cone `cone(generators) + span(lines)` with apex at the origin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Polyhedron);

impl Cone {
    pub fn new(rank: usize, generators: Vec<Vector>) -> Result<Cone> {
        let p = Polyhedron::from_vrep(rank, vec![Vector::zero(rank)], generators, vec![])?;
        Ok(Cone(p))
    }

    pub fn from_ints(rank: usize, generators: &[&[i64]]) -> Result<Cone> {
        Cone::new(rank, generators.iter().map(|g| Vector::from_ints(g)).collect())
    }

    pub fn zero(rank: usize) -> Cone {
        Cone(Polyhedron::point(Vector::zero(rank)))
    }

    /// The whole space `Q^rank`.
    pub fn full_space(rank: usize) -> Cone {
        Cone(Polyhedron::from_extreme(
            rank,
            vec![Vector::zero(rank)],
            vec![],
            (0..rank).map(|i| Vector::unit(rank, i)).collect(),
        ))
    }

    /// Interprets a polyhedron as a cone; it must have the origin as its only vertex.
    pub fn from_polyhedron(p: Polyhedron) -> Result<Cone> {
        if p.vertices() != [Vector::zero(p.rank())] {
            return Err(Error::Precondition(format!("{p:?} is not a cone")));
        }
        Ok(Cone(p))
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Primitive generators of the pointed part.
    pub fn generators(&self) -> &[Vector] {
        self.0.rays()
    }

    pub fn lines(&self) -> &[Vector] {
        self.0.lines()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.0.rays().is_empty() && self.0.lines().is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.0.is_pointed()
    }

    pub fn as_polyhedron(&self) -> &Polyhedron {
        &self.0
    }

    pub fn into_polyhedron(self) -> Polyhedron {
        self.0
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.0.contains(x)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        self.0.contains_polyhedron(&other.0)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        Ok(Cone(self.0.intersect(&other.0)?))
    }

    pub fn product(&self, other: &Cone) -> Cone {
        Cone(self.0.product(&other.0))
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.is_face_of(&other.0)
    }

    pub fn relative_interior_point(&self) -> Vector {
        self.0.relative_interior_point().expect("cones are nonempty")
    }

    pub fn linear_image(&self, m: &LatticeMap) -> Result<Cone> {
        Ok(Cone(self.0.linear_image(m)?))
    }

    /// Inward facet normals; together with the equations of the span they cut out the cone.
    pub fn facet_normals(&self) -> Vec<Vector> {
        self.0.hrep().inequalities.iter().map(|h| h.normal.clone()).collect()
    }

    /// The dual cone `{u : <u, v> >= 0 for all v in self}`.
    pub fn dual(&self) -> Cone {
        let rank = self.rank();
        let ineqs: Vec<Halfspace> = self
            .generators()
            .iter()
            .map(|g| Halfspace { normal: g.clone(), offset: Scalar::zero() })
            .collect();
        let eqs: Vec<Halfspace> = self
            .lines()
            .iter()
            .map(|g| Halfspace { normal: g.clone(), offset: Scalar::zero() })
            .collect();
        Cone(Polyhedron::from_hrep(rank, &ineqs, &eqs).expect("ranks agree"))
    }

    /// Pointed, simplicial and unimodular: generators extend to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        if !self.is_pointed() {
            return false;
        }
        let g = self.generators();
        let rows: Matrix = g.iter().map(|v| v.entries().to_vec()).collect();
        if linalg::rank(&rows, self.rank()) != g.len() {
            return false;
        }
        let Some(ints) = g.iter().map(|v| v.to_bigints()).collect::<Option<Vec<_>>>() else {
            return false;
        };
        saturated(&ints, self.rank())
    }
}

/// Whether the integer vectors span a saturated sublattice of `Z^rank`.
fn saturated(vectors: &[Vec<num_bigint::BigInt>], rank: usize) -> bool {
    use num_integer::Integer;
    // gcd of maximal minors equals 1.
    let k = vectors.len();
    if k == 0 {
        return true;
    }
    let mut g = num_bigint::BigInt::zero();
    for cols in combinations(rank, k) {
        let m: Matrix = vectors
            .iter()
            .map(|v| cols.iter().map(|&c| Scalar::from_integer(v[c].clone())).collect())
            .collect();
        g = g.gcd(&determinant(&m).to_integer());
    }
    g.is_one()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.generators())?;
        if !self.lines().is_empty() {
            write!(f, " + span{:?}", self.lines())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};

    fn v(x: &[i64]) -> Vector {
        Vector::from_ints(x)
    }

    fn poly(vs: &[&[i64]], rs: &[&[i64]]) -> Polyhedron {
        let rank = vs[0].len();
        Polyhedron::new(rank, vs.iter().map(|x| v(x)).collect(), rs.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn interval_sum() {
        let a = Polyhedron::interval(int(0), int(1));
        let b = Polyhedron::interval(int(0), int(2));
        assert_eq!(a.minkowski_sum(&b).unwrap(), Polyhedron::interval(int(0), int(3)));
    }

    #[test]
    fn tail_is_identity() {
        let d = poly(&[&[0, 0], &[1, 0]], &[&[0, 1]]);
        let t = d.tail_cone().unwrap();
        assert_eq!(t, Cone::from_ints(2, &[&[0, 1]]).unwrap());
        assert_eq!(d.minkowski_sum(t.as_polyhedron()).unwrap(), d);
        assert!(poly(&[&[0, 0], &[1, 1]], &[]).tail_cone().unwrap().is_zero());
    }

    #[test]
    fn segment_sum_is_square() {
        let a = poly(&[&[0, 0], &[1, 0]], &[]);
        let b = poly(&[&[0, 0], &[0, 1]], &[]);
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(s, poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[]));
        assert_eq!(s.vertices().len(), 4);
    }

    #[test]
    fn redundant_generators_pruned() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0]], &[&[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(p.vertices(), &[v(&[0, 0])]);
        assert_eq!(p.rays().len(), 2);
    }

    #[test]
    fn round_trip_v_h_v() {
        let p = poly(&[&[0, 0], &[3, 1], &[1, 2]], &[&[1, 1]]);
        let h = p.hrep().clone();
        let q = Polyhedron::from_hrep(2, &h.inequalities, &h.equations).unwrap();
        assert_eq!(p, q);
        assert!(p.same_set(&q));
    }

    #[test]
    fn lower_dimensional_hrep() {
        let p = poly(&[&[0, 0, 1], &[1, 0, 1]], &[]);
        assert_eq!(p.dim(), 1);
        assert_eq!(p.hrep().equations.len(), 2);
        assert_eq!(p.hrep().inequalities.len(), 2);
    }

    #[test]
    fn product_of_intervals() {
        let i = Polyhedron::interval(int(0), int(1));
        assert_eq!(i.product(&i), poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[]));
        let z = Cone::zero(0);
        assert_eq!(i.product(z.as_polyhedron()), i);
    }

    #[test]
    fn linear_image_example() {
        let rho = LatticeMap::new(2, 3, vec![vec![-1, 1, 0], vec![-1, 0, 1]]).unwrap();
        let delta = Polyhedron::interval(int(0), int(1));
        let sigma = Cone::from_ints(2, &[&[1, 0]]).unwrap();
        let prod = delta.product(sigma.as_polyhedron());
        let img = prod.linear_image(&rho).unwrap();
        assert_eq!(img, poly(&[&[0, 0], &[-1, -1]], &[&[1, 0]]));
        assert!(prod.map_is_injective_on(&rho));
        let proj = LatticeMap::new(1, 2, vec![vec![1, 0]]).unwrap();
        let sq = Polyhedron::interval(int(0), int(1)).product(&Polyhedron::interval(int(0), int(1)));
        assert_eq!(sq.linear_image(&proj).unwrap(), Polyhedron::interval(int(0), int(1)));
        assert_eq!(sq.linear_image(&LatticeMap::identity(2)).unwrap(), sq);
    }

    #[test]
    fn intersections() {
        let a = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(a.intersect(&a.translate(&v(&[5, 0]))).unwrap().is_empty());
        let c1 = Cone::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        let c2 = Cone::from_ints(2, &[&[1, 0], &[0, -1]]).unwrap();
        assert_eq!(c1.intersect(&c2).unwrap(), Cone::from_ints(2, &[&[1, 0]]).unwrap());
    }

    #[test]
    fn pairing() {
        let d = poly(&[&[1]], &[&[1]]);
        assert_eq!(d.min_pairing(&[int(2)]).unwrap(), Pairing::Finite(int(2)));
        assert_eq!(d.min_pairing(&[int(-1)]).unwrap(), Pairing::MinusInfinity);
        assert_eq!(Polyhedron::empty(1).min_pairing(&[int(1)]), Err(Error::UndefinedOnEmpty));
    }

    #[test]
    fn lineality_is_canonical() {
        let a = Polyhedron::from_vrep(2, vec![v(&[3, 1])], vec![], vec![v(&[1, 1])]).unwrap();
        let b = Polyhedron::from_vrep(2, vec![v(&[0, -2])], vec![], vec![v(&[-2, -2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices(), &[Vector::new(vec![int(1), int(-1)])]);
        let half = Polyhedron::from_hrep(
            2,
            &[Halfspace { normal: v(&[0, 1]), offset: ratio(1, 2) }],
            &[],
        )
        .unwrap();
        assert_eq!(half.lines().len(), 1);
        assert_eq!(half.rays(), &[v(&[0, 1])]);
    }

    #[test]
    fn faces_and_smoothness() {
        let c = Cone::from_ints(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert!(Cone::from_ints(2, &[&[1, 0]]).unwrap().is_face_of(&c));
        assert!(!Cone::from_ints(2, &[&[2, 1]]).unwrap().is_face_of(&c));
        assert!(Cone::zero(2).is_face_of(&c));
        assert!(c.is_smooth());
        assert!(!Cone::from_ints(2, &[&[1, 0], &[1, 2]]).unwrap().is_smooth());
        assert_eq!(c.dual(), Cone::from_ints(2, &[&[0, 1], &[1, -1]]).unwrap());
    }
}
