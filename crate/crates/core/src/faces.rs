//! Face lattices of polyhedra, enumerated through generator/facet incidences.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::Zero;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::polyhedron::{span_dim, Polyhedron};

#[derive(Clone, Debug)]
pub struct Face {
    pub dim: usize,
    pub polyhedron: Polyhedron,
    generators: BitSet,
}

/// All nonempty faces of a polyhedron, sorted by dimension, with covering relations.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn of(p: &Polyhedron) -> Result<FaceLattice> {
        if p.is_empty() {
            return Err(Error::EmptyOperand("faces"));
        }
        let nv = p.vertices().len();
        let nr = p.rays().len();
        let n = nv + nr;
        let ineqs = &p.hrep().inequalities;
        let tight: Vec<BitSet> = ineqs
            .iter()
            .map(|h| {
                let mut s = BitSet::new(n);
                for (i, v) in p.vertices().iter().enumerate() {
                    if h.slack(v).is_zero() {
                        s.insert(i);
                    }
                }
                for (i, r) in p.rays().iter().enumerate() {
                    if h.normal.dot(r).is_zero() {
                        s.insert(nv + i);
                    }
                }
                s
            })
            .collect();
        let has_vertex = |s: &BitSet| s.iter().next().is_some_and(|i| i < nv);
        let closure = |s: &BitSet| -> BitSet {
            tight
                .iter()
                .filter(|t| s.is_subset(t))
                .fold(BitSet::full(n), |acc, t| acc.and(t))
        };

        let full = BitSet::full(n);
        let mut seen: HashSet<BitSet> = HashSet::from([full.clone()]);
        let mut queue = VecDeque::from([full]);
        while let Some(f) = queue.pop_front() {
            for t in &tight {
                let g = f.and(t);
                if g == f || !has_vertex(&g) {
                    continue;
                }
                let c = closure(&g);
                if seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }

        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|s| {
                let vertices: Vec<_> = s.iter().filter(|&i| i < nv).map(|i| p.vertices()[i].clone()).collect();
                let rays: Vec<_> = s.iter().filter(|&i| i >= nv).map(|i| p.rays()[i - nv].clone()).collect();
                let dim = span_dim(p.rank(), &vertices, &rays, p.lines());
                let polyhedron = Polyhedron::from_extreme(p.rank(), vertices, rays, p.lines().to_vec());
                Face { dim, polyhedron, generators: s }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.polyhedron).cmp(&(b.dim, &b.polyhedron)));

        let mut covers = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if b.dim == a.dim + 1 && a.generators.is_subset(&b.generators) {
                    covers.push((i, j));
                }
            }
        }
        Ok(FaceLattice { faces, covers })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Covering pairs `(smaller, larger)` of face indices.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Number of faces of each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for f in &self.faces {
            out[f.dim] += 1;
        }
        out
    }

    /// Face dimensions counted from the lowest occurring dimension.
    ///
    /// Faces of a polyhedron with lineality all have dimension at least the lineality
    /// dimension, so comparisons of combinatorial types use this shifted vector.
    pub fn shifted_f_vector(&self) -> Vec<usize> {
        let low = self.faces.iter().map(|f| f.dim).min().unwrap_or(0);
        self.f_vector()[low..].to_vec()
    }

    pub fn polyhedra(&self) -> impl Iterator<Item = &Polyhedron> {
        self.faces.iter().map(|f| &f.polyhedron)
    }

    pub fn contains(&self, p: &Polyhedron) -> bool {
        self.faces.iter().any(|f| &f.polyhedron == p)
    }

    pub fn set(&self) -> BTreeSet<Polyhedron> {
        self.polyhedra().cloned().collect()
    }
}

impl Polyhedron {
    pub fn faces(&self) -> Result<FaceLattice> {
        FaceLattice::of(self)
    }
}

/// Coefficients of the product of two polynomials given by coefficient lists.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, Vector};
    use crate::polyhedron::Cone;

    #[test]
    fn square_faces() {
        let i = Polyhedron::interval(int(0), int(1));
        let sq = i.product(&i);
        let l = sq.faces().unwrap();
        assert_eq!(l.f_vector(), vec![4, 4, 1]);
        // Each edge covers two vertices; the square covers four edges.
        assert_eq!(l.covers().len(), 12);
    }

    #[test]
    fn simplicial_cone_is_boolean() {
        let theta = Cone::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(theta.as_polyhedron().faces().unwrap().f_vector(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn product_law_triangle_times_cone() {
        let tri = Polyhedron::new(2, vec![Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])], vec![]).unwrap();
        let sigma = Cone::from_ints(2, &[&[1, 0], &[1, 2]]).unwrap();
        let prod = tri.product(sigma.as_polyhedron());
        let lp = prod.faces().unwrap();
        let la = tri.faces().unwrap();
        let lb = sigma.as_polyhedron().faces().unwrap();
        assert_eq!(lp.f_vector(), convolve(&la.f_vector(), &lb.f_vector()));
        let expected: BTreeSet<Polyhedron> = la
            .polyhedra()
            .flat_map(|f| lb.polyhedra().map(move |g| f.product(g)))
            .collect();
        assert_eq!(lp.set(), expected);
    }

    #[test]
    fn unbounded_faces() {
        let p = Polyhedron::new(1, vec![Vector::from_ints(&[1])], vec![Vector::from_ints(&[1])]).unwrap();
        assert_eq!(p.faces().unwrap().f_vector(), vec![1, 1]);
        assert!(Polyhedron::empty(1).faces().is_err());
    }

    #[test]
    fn halfplane_faces() {
        let p = Cone::new(2, vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1]), Vector::from_ints(&[0, -1])]).unwrap();
        let l = p.as_polyhedron().faces().unwrap();
        assert_eq!(l.f_vector(), vec![0, 1, 1]);
        assert_eq!(l.shifted_f_vector(), vec![1, 1]);
    }
}
