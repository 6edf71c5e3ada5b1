//! Downgrading: from a complexity-one T-variety X to the quotient `Y_C = (X × E_T^N) / T`,
//! and from a toric variety to a marked fansy divisor.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Caps;
use crate::divisor::{DivisorialFan, PointOnLine, PolyhedralDivisor};
use crate::error::{Error, Result};
use crate::faces::{convolve, FaceLattice};
use crate::fan::{Fan, FVector, PolyhedralComplex};
use crate::fansy::{MarkedFansyDivisor, ValidationReport};
use crate::lattice::LatticeMap;
use crate::num::{int, Scalar, Vector};
use crate::polyhedron::{Cone, Halfspace, Polyhedron};
use crate::sigma_e::{sigma_e_fvector_closed_form, SigmaCone, SigmaE};
use crate::split::SplitData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Materialize every polyhedron of `Y_C`.
    Geometric,
    /// Per-dimension counts only.
    #[default]
    Counting,
}

/// `S × Σ_E`: every member `𝔇` of `S` paired with every maximal `σ_I`, closed under intersection.
///
/// Returns the fan and the number of generators before closure, which is `|S| · N^d`.
pub fn product_with_e_t(s: &DivisorialFan, sigma_e: &SigmaE, caps: &Caps) -> Result<(DivisorialFan, usize)> {
    let rank = s.rank() + sigma_e.ambient_rank();
    caps.check_geometric(rank)?;
    let maximal: Vec<Cone> = sigma_e.maximal_cones().iter().map(|(_, c)| sigma_e.cone(c)).collect();
    let gens: Vec<PolyhedralDivisor> = s
        .members()
        .iter()
        .flat_map(|m| maximal.iter().map(move |c| m.product_with_cone(c)))
        .collect();
    let count = gens.len();
    Ok((DivisorialFan::new(rank, gens)?, count))
}

/// `ρ(Δ × σ_I)` together with its face lattice.
#[derive(Clone, Debug)]
pub struct SliceImage {
    pub image: Polyhedron,
    pub faces: FaceLattice,
    /// `ρ` is injective on the affine span of `Δ × σ_I`.
    pub injective: bool,
    /// Face numbers of `Δ` convolved with those of `σ_I`.
    pub expected_f_vector: Vec<usize>,
}

impl SliceImage {
    /// Injective, and the image has the face numbers of the product.
    pub fn certified(&self) -> bool {
        self.injective && self.faces.f_vector() == self.expected_f_vector
    }
}

pub fn downgrade_slice(delta: &Polyhedron, sigma_i: &Cone, split: &SplitData) -> Result<SliceImage> {
    if delta.rank() != split.d {
        return Err(Error::Dimension { expected: split.d, found: delta.rank() });
    }
    if sigma_i.rank() != split.rank_e() {
        return Err(Error::Dimension { expected: split.rank_e(), found: sigma_i.rank() });
    }
    if delta.is_empty() {
        return Err(Error::EmptyOperand("slice cell"));
    }
    let product = delta.product(sigma_i.as_polyhedron());
    let injective = product.map_is_injective_on(&split.rho);
    let image = product.linear_image(&split.rho)?;
    let faces = image.faces()?;
    let expected_f_vector = convolve(&delta.faces()?.f_vector(), &sigma_i.as_polyhedron().faces()?.f_vector());
    let out = SliceImage { image, faces, injective, expected_f_vector };
    if !out.certified() {
        return Err(Error::Construction(format!(
            "ρ(Δ × σ_I) is not combinatorially Δ × σ_I: face numbers {:?}, expected {:?}",
            out.faces.f_vector(),
            out.expected_f_vector
        )));
    }
    Ok(out)
}

/// Where a cell of `Y_C` comes from: `ρ(F × G)` with `F` a cell of `Ξ_P` and `G` a cone of Σ_E.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub point: PointOnLine,
    /// Index of `F` among the cells of the slice of X at `point`.
    pub source_cell: usize,
    pub source_dim: usize,
    pub sigma: SigmaCone,
    /// 1-based tuple of the lexicographically first maximal cone of Σ_E containing `G`.
    pub tuple: Vec<usize>,
}

impl Provenance {
    pub fn sigma_dim(&self) -> usize {
        self.sigma.dim()
    }
}

fn first_tuple(c: &SigmaCone, n: usize) -> Vec<usize> {
    c.masks
        .iter()
        .map(|m| (0..n).find(|b| m & (1 << b) == 0).expect("factor masks are proper") + 1)
        .collect()
}

/// `Y_C` as a marked fansy divisor in `N_E`, with provenance for every slice cell.
#[derive(Clone, Debug)]
pub struct QuotientFansyDivisor {
    pub n: usize,
    pub fansy: MarkedFansyDivisor,
    pub provenance: BTreeMap<PointOnLine, BTreeMap<Polyhedron, Provenance>>,
    /// Checks made during construction.
    pub report: ValidationReport,
}

/// Per-dimension counts of `Y_C` without materializing geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCounts {
    pub n: usize,
    pub rank: usize,
    /// Cells of each dimension `0..=rank` in each slice.
    pub slices: BTreeMap<PointOnLine, Vec<BigUint>>,
    pub tail_fan: Vec<BigUint>,
    pub marked: Vec<BigUint>,
}

#[derive(Clone, Debug)]
pub enum Quotient {
    Geometric(Box<QuotientFansyDivisor>),
    Counting(QuotientCounts),
}

impl Quotient {
    /// Counts in either mode.
    pub fn counts(&self) -> QuotientCounts {
        match self {
            Quotient::Geometric(q) => q.counts(),
            Quotient::Counting(c) => c.clone(),
        }
    }
}

/// Builds `Y_C` for the approximation parameter `n`.
pub fn build_yc(x: &MarkedFansyDivisor, n: usize, mode: Mode, caps: &Caps) -> Result<Quotient> {
    caps.check_counting(n)?;
    match mode {
        Mode::Geometric => Ok(Quotient::Geometric(Box::new(build_yc_geometric(x, n, caps)?))),
        Mode::Counting => Ok(Quotient::Counting(count_yc(x, n)?)),
    }
}

fn dims_to_big(f: &[usize], len: usize) -> Vec<BigUint> {
    (0..len).map(|k| BigUint::from(f.get(k).copied().unwrap_or(0))).collect()
}

fn convolve_big(a: &[BigUint], b: &[BigUint], len: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Counting mode: every count of `Y_C` is a count of X convolved with the face numbers of Σ_E.
pub fn count_yc(x: &MarkedFansyDivisor, n: usize) -> Result<QuotientCounts> {
    let x = x.ensure_min_p();
    let d = x.rank();
    let rank = n * d;
    let len = rank + 1;
    let sig: Vec<BigUint> = (0..len).map(|k| sigma_e_fvector_closed_form(n, d, k)).collect();
    let by_dim = |f: &FVector| convolve_big(&dims_to_big(f.counts(), d + 1), &sig, len);
    let mut marked = vec![0usize; d + 1];
    for c in x.marked() {
        marked[c.dim()] += 1;
    }
    Ok(QuotientCounts {
        n,
        rank,
        slices: x.slices().iter().map(|(p, s)| (p.clone(), by_dim(&s.f_vector()))).collect(),
        tail_fan: by_dim(&x.tail_fan().f_vector()),
        marked: convolve_big(&dims_to_big(&marked, d + 1), &sig, len),
    })
}

fn build_yc_geometric(x: &MarkedFansyDivisor, n: usize, caps: &Caps) -> Result<QuotientFansyDivisor> {
    let x = x.ensure_min_p();
    let d = x.rank();
    caps.check_geometric(d + n * d)?;
    let split = SplitData::new(n, d)?;
    let sigma_e = SigmaE::new(n, d)?;
    let e_cones = sigma_e.cones();
    let e_geom: Vec<Cone> = e_cones.iter().map(|c| sigma_e.cone(c)).collect();
    let rank = split.rank_e();
    let mut report = ValidationReport::default();

    let image = |a: &Polyhedron, g: &Cone| a.product(g.as_polyhedron()).linear_image(&split.rho);

    // Tail fan and marks.
    let mut tail_cones = Vec::new();
    let mut marked = BTreeSet::new();
    for sigma in x.tail_fan().cones() {
        for g in &e_geom {
            let c = Cone::from_polyhedron(image(sigma.as_polyhedron(), g)?)?;
            if x.is_marked(sigma) {
                marked.insert(c.clone());
            }
            tail_cones.push(c);
        }
    }
    let tail_fan = Fan::from_closed(rank, tail_cones);

    // Injectivity and face numbers on every maximal pair.
    let maximal_e: Vec<Cone> = sigma_e.maximal_cones().iter().map(|(_, c)| sigma_e.cone(c)).collect();
    let mut certified = true;
    for slice in x.slices().values() {
        for cell in slice.maximal_cells() {
            for g in &maximal_e {
                if downgrade_slice(cell, g, &split).is_err() {
                    certified = false;
                }
            }
        }
    }
    report.push("ρ(Δ × σ_I) ≅ Δ × σ_I on maximal pairs", certified, "");

    let mut slices = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for (p, slice) in x.slices() {
        let mut cells = Vec::new();
        let mut prov = BTreeMap::new();
        for (idx, cell) in slice.cells().iter().enumerate() {
            for (c, g) in e_cones.iter().zip(&e_geom) {
                let img = image(cell, g)?;
                prov.insert(
                    img.clone(),
                    Provenance {
                        point: p.clone(),
                        source_cell: idx,
                        source_dim: cell.dim(),
                        sigma: c.clone(),
                        tuple: first_tuple(c, n),
                    },
                );
                cells.push(img);
            }
        }
        let complex = PolyhedralComplex::from_closed(rank, cells);
        report.push(
            format!("Y_C slice {p}: one cell per pair (F, G)"),
            complex.cells().len() == slice.cells().len() * e_cones.len() && prov.len() == complex.cells().len(),
            format!("{} cells", complex.cells().len()),
        );
        slices.insert(p.clone(), complex);
        provenance.insert(p.clone(), prov);
    }
    let fansy = MarkedFansyDivisor::new(tail_fan, slices, marked)?;
    let q = QuotientFansyDivisor { n, fansy, provenance, report };
    let mut report = q.report.clone();
    report.extend(q.fansy.validate());
    report.extend(member_compatibility(&x, &split, &sigma_e, 0x5eed)?);
    Ok(QuotientFansyDivisor { report, ..q })
}

/// For each member `𝔇` of the divisorial fan of X and each maximal `σ_I`, checks that
/// `ρ(𝔇 × σ_I)` has coefficients with the right tail, degree `ρ(deg(𝔇 × σ_I))`, and
/// evaluation `D'(u) = (𝔇 × σ_I)(ρ* u)` on sampled `u` in the dual tail cone.
pub fn member_compatibility(
    x: &MarkedFansyDivisor,
    split: &SplitData,
    sigma_e: &SigmaE,
    seed: u64,
) -> Result<ValidationReport> {
    let s = x.to_divisorial_fan()?;
    let maximal_e: Vec<Cone> = sigma_e.maximal_cones().iter().map(|(_, c)| sigma_e.cone(c)).collect();
    let rho_dual = split.rho.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tails_ok, mut degree_ok, mut eval_ok) = (true, true, true);
    let mut detail = Vec::new();
    for m in s.members() {
        for g in &maximal_e {
            let up = m.product_with_cone(g);
            let down = up.linear_image(&split.rho)?;
            for (p, c) in down.coefficients() {
                if !c.is_empty() && c.tail_cone()? != *down.tail() {
                    tails_ok = false;
                    detail.push(format!("tail mismatch at {p}"));
                }
            }
            if !up.has_empty_coefficient() {
                let lhs = down.degree()?;
                let rhs = up.degree()?.linear_image(&split.rho)?;
                let up_strict = !up.degree()?.same_set(up.tail().as_polyhedron());
                let down_strict = !lhs.same_set(down.tail().as_polyhedron());
                if !lhs.same_set(&rhs) || up_strict != down_strict {
                    degree_ok = false;
                    detail.push(format!("degree mismatch for {:?}", down.tail()));
                }
            }
            let dual = down.tail().dual();
            let gens: Vec<Vector> = dual.generators().iter().chain(dual.lines()).cloned().collect();
            for _ in 0..3 {
                let u = gens.iter().fold(Vector::zero(split.rank_e()), |acc, g| {
                    acc.add(&g.scale(&int(rng.random_range(0..=4))))
                });
                let a = down.evaluate(&u)?;
                let b = up.evaluate(&rho_dual.apply(&u))?;
                if a != b {
                    eval_ok = false;
                    detail.push(format!("evaluation mismatch at {u}"));
                }
            }
        }
    }
    let mut r = ValidationReport::default();
    let joined = detail.join("; ");
    r.push("members: coefficient tails", tails_ok, joined.clone());
    r.push("members: degree is the image of the degree", degree_ok, joined.clone());
    r.push("members: evaluation compatibility", eval_ok, joined);
    Ok(r)
}

impl QuotientFansyDivisor {
    pub fn counts(&self) -> QuotientCounts {
        let rank = self.fansy.rank();
        let len = rank + 1;
        let f = |v: &FVector| dims_to_big(v.counts(), len);
        let mut marked = vec![0usize; len];
        for c in self.fansy.marked() {
            marked[c.dim()] += 1;
        }
        QuotientCounts {
            n: self.n,
            rank,
            slices: self.fansy.slices().iter().map(|(p, s)| (p.clone(), f(&s.f_vector()))).collect(),
            tail_fan: f(&self.fansy.tail_fan().f_vector()),
            marked: dims_to_big(&marked, len),
        }
    }

    /// Number of slice cells at `p` coming from pairs with `dim F = a` and `dim G = b`.
    pub fn provenance_buckets(&self, p: &PointOnLine) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for prov in self.provenance.get(p).into_iter().flat_map(|m| m.values()) {
            *out.entry((prov.source_dim, prov.sigma_dim())).or_insert(0) += 1;
        }
        out
    }
}

fn slab_cut(rank: usize, level: i64) -> Polyhedron {
    let mut normal = vec![Scalar::zero(); rank];
    normal[rank - 1] = int(1);
    Polyhedron::from_hrep(rank, &[], &[Halfspace { normal: Vector::new(normal), offset: int(level) }])
        .expect("a hyperplane is a polyhedron")
}

/// Drops the last coordinate.
fn drop_last(rank: usize) -> LatticeMap {
    let rows = (0..rank - 1).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
    LatticeMap::new(rank - 1, rank, rows).expect("well formed")
}

/// Reads a fan in `N ⊕ Z` as a marked fansy divisor over `N`.
///
/// The slices at `0` and `∞` are the cuts of the cones at height `1` and `−1`, the tail fan
/// is the cut at height `0`, and a tail cone is marked when it comes from a cone meeting both
/// open half-spaces.
pub fn toric_downgrade(big: &Fan) -> Result<MarkedFansyDivisor> {
    let rank = big.rank();
    if rank < 2 {
        return Err(Error::Precondition("the fan must have rank at least 2".into()));
    }
    let s = drop_last(rank);
    let q = rank - 1;
    let (h0, hp, hm) = (slab_cut(rank, 0), slab_cut(rank, 1), slab_cut(rank, -1));
    let mut tails = Vec::new();
    let mut marked = BTreeSet::new();
    let (mut zero, mut inf) = (Vec::new(), Vec::new());
    for sigma in big.cones() {
        let poly = sigma.as_polyhedron();
        let t = Cone::from_polyhedron(poly.intersect(&h0)?.linear_image(&s)?)?;
        let gens = || sigma.generators().iter().chain(sigma.lines());
        let up = gens().any(|g| g[q].is_positive()) || sigma.lines().iter().any(|l| !l[q].is_zero());
        let down = gens().any(|g| g[q].is_negative()) || sigma.lines().iter().any(|l| !l[q].is_zero());
        if up && down {
            marked.insert(t.clone());
        }
        tails.push(t);
        for (cut, dest) in [(&hp, &mut zero), (&hm, &mut inf)] {
            let c = poly.intersect(cut)?;
            if !c.is_empty() {
                dest.push(c.linear_image(&s)?);
            }
        }
    }
    let tail_fan = Fan::new(q, tails)?;
    let slices = BTreeMap::from([
        (PointOnLine::zero(), PolyhedralComplex::new(q, zero)?),
        (PointOnLine::Infinity, PolyhedralComplex::new(q, inf)?),
    ]);
    MarkedFansyDivisor::new(tail_fan, slices, marked)
}
