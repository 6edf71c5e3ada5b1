//! Fans, polyhedral complexes, completeness certificates and f-vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::faces::convolve;
use crate::num::{ratio, Vector};
use crate::polyhedron::{Cone, Polyhedron};

/// Per-dimension face counts; entries outside the stored range read as zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FVector(Vec<usize>);

impl FVector {
    pub fn new(counts: Vec<usize>) -> Self {
        let mut counts = counts;
        while counts.last() == Some(&0) {
            counts.pop();
        }
        FVector(counts)
    }

    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// Signed lookup: negative dimensions have no faces.
    pub fn at(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.get(k as usize)
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn convolve(&self, other: &FVector) -> FVector {
        FVector::new(convolve(&self.0, &other.0))
    }
}

impl fmt::Debug for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite set of polyhedra closed under faces and meeting pairwise in common faces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyhedralComplex {
    rank: usize,
    cells: Vec<Polyhedron>,
    maximal: Vec<usize>,
}

impl PolyhedralComplex {
    /// Closes `cells` under faces and checks that pairwise intersections are common faces.
    pub fn new(rank: usize, cells: Vec<Polyhedron>) -> Result<Self> {
        let c = Self::closure(rank, cells)?;
        c.check_intersections()?;
        Ok(c)
    }

    /// Closes under faces without the pairwise intersection check.
    pub fn closure(rank: usize, cells: Vec<Polyhedron>) -> Result<Self> {
        let mut all: BTreeSet<Polyhedron> = BTreeSet::new();
        for c in &cells {
            if c.rank() != rank {
                return Err(Error::Dimension { expected: rank, found: c.rank() });
            }
            if c.is_empty() {
                continue;
            }
            if all.contains(c) {
                continue;
            }
            for f in c.faces()?.polyhedra() {
                all.insert(f.clone());
            }
        }
        Ok(Self::from_closed(rank, all.into_iter().collect()))
    }

    /// Trusted constructor for a set already closed under faces.
    pub(crate) fn from_closed(rank: usize, cells: Vec<Polyhedron>) -> Self {
        let mut cells = cells;
        cells.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
        cells.dedup();
        let maximal = (0..cells.len())
            .filter(|&i| {
                let d = cells[i].dim();
                !cells.iter().any(|o| o.dim() > d && o.contains_polyhedron(&cells[i]))
            })
            .collect();
        PolyhedralComplex { rank, cells, maximal }
    }

    pub fn check_intersections(&self) -> Result<()> {
        let max: Vec<&Polyhedron> = self.maximal_cells().collect();
        for (i, a) in max.iter().enumerate() {
            for b in &max[i + 1..] {
                let x = a.intersect(b)?;
                if x.is_empty() {
                    continue;
                }
                if !x.is_face_of(a) || !x.is_face_of(b) {
                    return Err(Error::FanValidity(format!(
                        "cells {a:?} and {b:?} meet in {x:?}, which is not a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cells(&self) -> &[Polyhedron] {
        &self.cells
    }

    pub fn maximal_cells(&self) -> impl Iterator<Item = &Polyhedron> {
        self.maximal.iter().map(|&i| &self.cells[i])
    }

    pub fn contains_cell(&self, p: &Polyhedron) -> bool {
        self.cells.binary_search_by(|c| (c.dim(), c).cmp(&(p.dim(), p))).is_ok()
    }

    pub fn index_of(&self, p: &Polyhedron) -> Option<usize> {
        self.cells.binary_search_by(|c| (c.dim(), c).cmp(&(p.dim(), p))).ok()
    }

    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0; self.rank + 1];
        for c in &self.cells {
            counts[c.dim()] += 1;
        }
        FVector::new(counts)
    }

    /// Cells of dimension `k`.
    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = &Polyhedron> {
        self.cells.iter().filter(move |c| c.dim() == k)
    }

    /// The set of tail cones of the cells.
    pub fn tail_fan(&self) -> Result<Fan> {
        let cones: BTreeSet<Cone> = self.cells.iter().map(|c| c.tail_cone()).collect::<Result<_>>()?;
        Fan::new(self.rank, cones.into_iter().collect())
    }

    pub fn is_complete(&self) -> CompletenessCertificate {
        completeness(self, 100, 0x5eed)
    }

    /// The complex whose only cells are the faces of the cones of `fan`.
    pub fn from_fan(fan: &Fan) -> PolyhedralComplex {
        PolyhedralComplex::from_closed(fan.rank, fan.cones.iter().map(|c| c.as_polyhedron().clone()).collect())
    }

    pub fn translate(&self, t: &Vector) -> PolyhedralComplex {
        PolyhedralComplex::from_closed(self.rank, self.cells.iter().map(|c| c.translate(t)).collect())
    }
}

/// Outcome of the ridge-count and connectivity test plus random sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessCertificate {
    pub complete: bool,
    pub full_dimensional: bool,
    pub ridges_paired: bool,
    pub connected: bool,
    pub samples_checked: usize,
    pub uncovered: Option<Vector>,
    pub failure: Option<String>,
}

fn completeness(c: &PolyhedralComplex, samples: usize, seed: u64) -> CompletenessCertificate {
    let n = c.rank;
    let max: Vec<&Polyhedron> = c.maximal_cells().collect();
    let mut cert = CompletenessCertificate {
        complete: false,
        full_dimensional: !max.is_empty() && max.iter().all(|m| m.dim() == n),
        ridges_paired: false,
        connected: false,
        samples_checked: 0,
        uncovered: None,
        failure: None,
    };
    if !cert.full_dimensional {
        cert.failure = Some("a maximal cell is not full-dimensional".into());
    }

    let mut ridge_owners: HashMap<Polyhedron, Vec<usize>> = HashMap::new();
    if cert.full_dimensional && n > 0 {
        for (i, m) in max.iter().enumerate() {
            let faces = match m.faces() {
                Ok(f) => f,
                Err(e) => {
                    cert.failure = Some(e.to_string());
                    return cert;
                }
            };
            for f in faces.faces().iter().filter(|f| f.dim + 1 == n) {
                ridge_owners.entry(f.polyhedron.clone()).or_default().push(i);
            }
        }
        let bad = ridge_owners.iter().find(|(_, owners)| owners.len() != 2);
        cert.ridges_paired = bad.is_none();
        if let Some((r, owners)) = bad {
            cert.failure = Some(format!("ridge {r:?} lies in {} maximal cells", owners.len()));
        }
    } else if cert.full_dimensional {
        cert.ridges_paired = true;
    }

    // Union-find over maximal cells sharing a ridge.
    let mut parent: Vec<usize> = (0..max.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for owners in ridge_owners.values() {
        for w in owners.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let roots: BTreeSet<usize> = (0..max.len()).map(|i| find(&mut parent, i)).collect();
    cert.connected = roots.len() == 1;
    if !cert.connected && cert.failure.is_none() {
        cert.failure = Some(format!("maximal cells form {} components", roots.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = Vector::new(
            (0..n)
                .map(|_| ratio(rng.random_range(-60..=60), rng.random_range(1..=7)))
                .collect(),
        );
        cert.samples_checked += 1;
        if !max.iter().any(|m| m.contains(&x)) {
            cert.uncovered = Some(x);
            break;
        }
    }
    cert.complete = cert.full_dimensional && cert.ridges_paired && cert.connected && cert.uncovered.is_none();
    if let (true, Some(x)) = (cert.failure.is_none(), &cert.uncovered) {
        cert.failure = Some(format!("sample point {x} is not covered"));
    }
    cert
}

/// A fan: cones closed under faces, meeting pairwise in common faces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fan {
    rank: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Closes the given cones under faces and validates pairwise intersections.
    pub fn new(rank: usize, cones: Vec<Cone>) -> Result<Fan> {
        let complex = PolyhedralComplex::new(rank, cones.into_iter().map(Cone::into_polyhedron).collect())?;
        let cones = complex
            .cells
            .into_iter()
            .map(Cone::from_polyhedron)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::FanValidity("a face of a cone is not a cone".into()))?;
        Ok(Fan { rank, cones })
    }

    /// Cones given as index sets into a list of rays.
    pub fn from_rays(rank: usize, rays: &[Vector], cones: &[Vec<usize>]) -> Result<Fan> {
        let cs = cones
            .iter()
            .map(|idx| {
                let gens = idx
                    .iter()
                    .map(|&i| {
                        rays.get(i).cloned().ok_or_else(|| {
                            Error::FanValidity(format!("ray index {i} out of range"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Cone::new(rank, gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(rank, cs)
    }

    /// Trusted constructor for cones already closed under faces.
    pub(crate) fn from_closed(rank: usize, cones: Vec<Cone>) -> Fan {
        let mut cones = cones;
        cones.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
        cones.dedup();
        Fan { rank, cones }
    }

    /// The fan consisting of the zero cone only.
    pub fn trivial(rank: usize) -> Fan {
        Fan { rank, cones: vec![Cone::zero(rank)] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim() == k)
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|o| o.dim() > c.dim() && o.contains_cone(c)))
            .collect()
    }

    /// Primitive generators of the rays, sorted.
    pub fn rays(&self) -> Vec<Vector> {
        self.cones_of_dim(1).map(|c| c.generators()[0].clone()).collect()
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.index_of(c).is_some()
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.binary_search_by(|x| (x.dim(), x).cmp(&(c.dim(), c))).ok()
    }

    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0; self.rank + 1];
        for c in &self.cones {
            counts[c.dim()] += 1;
        }
        FVector::new(counts)
    }

    pub fn as_complex(&self) -> PolyhedralComplex {
        PolyhedralComplex::from_fan(self)
    }

    pub fn is_complete(&self) -> CompletenessCertificate {
        self.as_complex().is_complete()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    /// The fan of all pairwise product cones.
    pub fn product(&self, other: &Fan) -> Fan {
        let mut cones = Vec::with_capacity(self.cones.len() * other.cones.len());
        for a in &self.cones {
            for b in &other.cones {
                cones.push(a.product(b));
            }
        }
        Fan::from_closed(self.rank + other.rank, cones)
    }

    /// The smallest cone of the fan containing `x`, if any.
    pub fn cone_containing(&self, x: &[crate::num::Scalar]) -> Option<&Cone> {
        self.cones.iter().find(|c| c.contains(x))
    }
}

pub fn product_fan(a: &Fan, b: &Fan) -> Fan {
    a.product(b)
}

/// The complete fan of the projective line.
pub fn p1_fan() -> Fan {
    Fan::from_closed(1, vec![
        Cone::zero(1),
        Cone::from_ints(1, &[&[1]]).expect("valid"),
        Cone::from_ints(1, &[&[-1]]).expect("valid"),
    ])
}

/// The fan of the projective plane with rays (1,0), (0,1), (-1,-1).
pub fn p2_fan() -> Fan {
    let rays = p2_rays();
    Fan::from_rays(2, &rays, &[vec![0, 1], vec![1, 2], vec![2, 0]]).expect("valid")
}

/// Rays of the projective plane in the order (1,0), (0,1), (-1,-1).
pub fn p2_rays() -> Vec<Vector> {
    vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1]), Vector::from_ints(&[-1, -1])]
}

/// The fan of `P(O ⊕ O(D))` over a smooth complete base, for `D = sum_ρ twist(ρ) D_ρ`.
///
/// Rays are `(u_ρ, c_ρ)` together with `(0, ±1)`; every maximal base cone lifts
/// to two maximal cones, one containing `(0, 1)` and one containing `(0, -1)`.
pub fn projectivized_bundle_fan(base: &Fan, twist: &BTreeMap<Vector, i64>) -> Result<Fan> {
    if !base.is_smooth() {
        return Err(Error::Precondition("base fan is not smooth".into()));
    }
    if !base.is_complete().complete {
        return Err(Error::Precondition("base fan is not complete".into()));
    }
    let n = base.rank();
    let lift = |u: &Vector| -> Result<Vector> {
        let c = twist
            .get(u)
            .ok_or_else(|| Error::Precondition(format!("twist undefined on ray {u}")))?;
        Ok(u.concat(&Vector::from_ints(&[*c])))
    };
    let up = Vector::unit(n + 1, n);
    let down = up.neg();
    let mut maximal = Vec::new();
    for sigma in base.maximal_cones() {
        let lifted: Vec<Vector> = sigma.generators().iter().map(lift).collect::<Result<_>>()?;
        for pole in [&up, &down] {
            let mut gens = lifted.clone();
            gens.push(pole.clone());
            maximal.push(Cone::new(n + 1, gens)?);
        }
    }
    let fan = Fan::new(n + 1, maximal)?;
    if !fan.is_smooth() {
        return Err(Error::Construction("projectivized fan is not smooth".into()));
    }
    let cert = fan.is_complete();
    if !cert.complete {
        return Err(Error::Construction(format!(
            "projectivized fan is not complete: {}",
            cert.failure.unwrap_or_default()
        )));
    }
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twist(c: &[i64]) -> BTreeMap<Vector, i64> {
        p2_rays().into_iter().zip(c.iter().copied()).collect()
    }

    #[test]
    fn standard_fvectors() {
        assert_eq!(p2_fan().f_vector().counts(), &[1, 3, 3]);
        assert_eq!(Fan::trivial(0).f_vector().counts(), &[1]);
        assert_eq!(p1_fan().product(&p1_fan()).f_vector().counts(), &[1, 4, 4]);
        assert_eq!(p1_fan().product(&Fan::trivial(0)), p1_fan());
    }

    #[test]
    fn completeness_checks() {
        assert!(p2_fan().is_complete().complete);
        assert!(p1_fan().is_complete().complete);
        let quadrant = Fan::new(2, vec![Cone::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap()]).unwrap();
        let cert = quadrant.is_complete();
        assert!(!cert.complete);
        assert!(!cert.ridges_paired);
    }

    #[test]
    fn overlapping_cones_rejected() {
        let a = Cone::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        let b = Cone::from_ints(2, &[&[1, 1], &[-1, 1]]).unwrap();
        assert!(matches!(Fan::new(2, vec![a, b]), Err(Error::FanValidity(_))));
    }

    #[test]
    fn bundle_fans() {
        let trivial_p1: BTreeMap<Vector, i64> = p1_fan().rays().into_iter().map(|r| (r, 0)).collect();
        let f = projectivized_bundle_fan(&p1_fan(), &trivial_p1).unwrap();
        assert_eq!(f.f_vector().counts(), &[1, 4, 4]);
        let p2p1 = projectivized_bundle_fan(&p2_fan(), &twist(&[0, 0, 0])).unwrap();
        assert_eq!(p2p1.f_vector().counts(), &[1, 5, 9, 6]);
        assert_eq!(p2p1, p2_fan().product(&p1_fan()));
        let pe = projectivized_bundle_fan(&p2_fan(), &twist(&[1, 0, 0])).unwrap();
        assert_eq!(pe.rays().len(), 5);
        assert_eq!(pe.maximal_cones().len(), 6);
        let pf = projectivized_bundle_fan(&p2_fan(), &twist(&[1, 1, -1])).unwrap();
        assert_eq!(pf.f_vector().counts(), &[1, 5, 9, 6]);
    }

    #[test]
    fn complex_tail_fan() {
        // Subdivision of the line at 0 and 1.
        let pts = |a: i64| Vector::from_ints(&[a]);
        let cells = vec![
            Polyhedron::new(1, vec![pts(1)], vec![pts(1)]).unwrap(),
            Polyhedron::new(1, vec![pts(0), pts(1)], vec![]).unwrap(),
            Polyhedron::new(1, vec![pts(0)], vec![pts(-1)]).unwrap(),
        ];
        let c = PolyhedralComplex::new(1, cells).unwrap();
        assert_eq!(c.f_vector().counts(), &[2, 3]);
        assert!(c.is_complete().complete);
        assert_eq!(c.tail_fan().unwrap(), p1_fan());
    }
}
