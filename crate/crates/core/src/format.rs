//! Computation documents: a TOML encoding of marked fansy divisors, bundle fixtures,
//! count profiles and run parameters. Rationals are written as strings such as `"3/2"`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Range, RangeInclusive};

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::count::CountProfile;
use crate::divisor::PointOnLine;
use crate::downgrade::QuotientFansyDivisor;
use crate::error::{Error, Result};
use crate::fan::{FVector, Fan, PolyhedralComplex};
use crate::fansy::MarkedFansyDivisor;
use crate::fixtures::{BundleSpec, Fixture};
use crate::num::{format_scalar, parse_scalar, Scalar, Vector};
use crate::polyhedron::{Cone, Polyhedron};

/// An integer or a rational written as a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    fn from_scalar(s: &Scalar) -> Literal {
        if s.is_integer() {
            if let Ok(v) = i64::try_from(s.numer()) {
                return Literal::Int(v);
            }
        }
        Literal::Text(format_scalar(s))
    }

    fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Literal::Int(v) => Ok(crate::num::int(*v)),
            Literal::Text(t) => parse_scalar(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `"1..2"` or a single level.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub base_rays: Vec<Vec<i64>>,
    pub base_cones: Vec<Vec<usize>>,
    pub twist: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailFanDoc {
    pub rays: Vec<Vec<i64>>,
    /// Ray indices of the maximal cones; faces are implied.
    pub cones: Vec<Vec<usize>>,
    /// Ray indices of the marked cones; `[]` is the zero cone.
    #[serde(default)]
    pub marked: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub vertices: Vec<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<Vec<i64>>,
    /// Index of the source cell in the slice of the input at the same point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_cell: Option<usize>,
    /// 1-based tuple `I` of a maximal cone of Σ_E containing the source cone.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<usize>>,
    /// Per-factor bit masks of the source cone of Σ_E.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    /// A rational or `"inf"`.
    pub at: String,
    /// Maximal cells suffice; faces are implied.
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    #[serde(rename = "R", default, skip_serializing_if = "Vec::is_empty")]
    pub r: Vec<usize>,
    #[serde(rename = "V", default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<usize>,
    #[serde(rename = "T", default, skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<usize>,
    pub special_points: usize,
    /// Face numbers `#Σ(0), #Σ(1), …` used in the closed form for `S_i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_fvector: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub lattice_rank: usize,
    #[serde(default, skip_serializing_if = "is_default_parameters")]
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle: Option<Spanned<BundleDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_fan: Option<Spanned<TailFanDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Spanned<PointDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Spanned<ProfileDoc>>,
}

fn is_default_parameters(p: &Parameters) -> bool {
    p == &Parameters::default()
}

/// A resolved document.
#[derive(Clone, Debug)]
pub struct Input {
    pub label: String,
    pub fansy: Option<MarkedFansyDivisor>,
    pub bundle: Option<BundleSpec>,
    pub profile: Option<CountProfile>,
    pub reference_fvector: Option<FVector>,
    pub n: Option<usize>,
    pub k: Option<RangeInclusive<usize>>,
}

impl Input {
    pub fn fixture(&self) -> Option<Fixture> {
        let fansy = self.fansy.clone()?;
        Some(Fixture {
            label: self.label.clone(),
            reference_fvector: self.reference_fvector.clone().unwrap_or_else(|| fansy.tail_fan().f_vector()),
            fansy,
            bundle: self.bundle.clone(),
        })
    }
}

/// `(line, column)`, both 1-based, of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Positioner<'a>(&'a str);

impl Positioner<'_> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        let (line, column) = line_column(self.0, span.start);
        Error::Parse { line, column, message: message.into() }
    }

    /// Re-anchors errors raised without a position.
    fn at<T>(&self, span: Range<usize>, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse { line: 0, message, .. } => self.err(span.clone(), message),
            Error::Dimension { expected, found } => {
                self.err(span.clone(), format!("expected {expected} coordinates, found {found}"))
            }
            other => other,
        })
    }
}

/// `"2"` or `"1..2"`.
pub fn parse_k_range(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Parse { line: 0, column: 0, message: format!("invalid k range {text:?}") };
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a = parse(text)?;
            Ok(a..=a)
        }
    }
}

fn int_vector(rank: usize, v: &[i64]) -> Result<Vector> {
    if v.len() != rank {
        return Err(Error::Dimension { expected: rank, found: v.len() });
    }
    Ok(Vector::from_ints(v))
}

fn ray_indices(rays: &[Vec<i64>], idx: &[usize]) -> Result<Vec<Vector>> {
    idx.iter()
        .map(|&i| {
            rays.get(i).map(|r| Vector::from_ints(r)).ok_or_else(|| Error::Parse {
                line: 0,
                column: 0,
                message: format!("ray index {i} out of range"),
            })
        })
        .collect()
}

/// Parses and resolves a document. Structural problems are positioned parse errors;
/// geometric invalidity is left to validation wherever the data can still be represented.
pub fn parse_document(text: &str) -> Result<Input> {
    let doc: Document = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse { line, column, message: e.message().to_string() }
    })?;
    resolve(&doc, text)
}

pub fn resolve(doc: &Document, text: &str) -> Result<Input> {
    let pos = Positioner(text);
    let d = doc.lattice_rank;
    if d == 0 {
        return Err(pos.err(0..0, "lattice_rank must be positive"));
    }
    let k = doc.parameters.k.as_deref().map(parse_k_range).transpose().map_err(|e| match e {
        Error::Parse { message, .. } => pos.err(0..0, message),
        other => other,
    })?;

    let bundle = match &doc.bundle {
        None => None,
        Some(b) => {
            let span = b.span();
            let b = b.get_ref();
            let base_rank = b.base_rays.first().map_or(0, Vec::len);
            if base_rank != d {
                return Err(pos.err(span, format!("bundle base has rank {base_rank}, expected {d}")));
            }
            let base_rays =
                pos.at(span.clone(), b.base_rays.iter().map(|r| int_vector(d, r)).collect::<Result<Vec<_>>>())?;
            if b.twist.len() != base_rays.len() {
                return Err(pos.err(span, "twist needs one entry per base ray"));
            }
            Some(BundleSpec { base_rays, base_cones: b.base_cones.clone(), twist: b.twist.clone() })
        }
    };

    let fansy = match (&doc.tail_fan, &bundle) {
        (Some(tf), _) => Some(explicit_fansy(d, tf, &doc.points, &pos)?),
        (None, Some(spec)) => Some(spec.fansy()?),
        (None, None) => {
            if let Some(p) = doc.points.first() {
                return Err(pos.err(p.span(), "points given without a tail fan"));
            }
            None
        }
    };

    let profile = match &doc.profile {
        None => None,
        Some(p) => {
            let span = p.span();
            let p = p.get_ref();
            if p.r.is_empty() && p.v.is_empty() && p.t.is_empty() {
                None
            } else if p.r.len() != p.v.len() || p.v.len() != p.t.len() {
                return Err(pos.err(span, "R, V and T must have equal length"));
            } else {
                Some(CountProfile { d, r: p.r.clone(), v: p.v.clone(), t: p.t.clone(), num_special_points: p.special_points })
            }
        }
    };
    let reference_fvector = doc
        .profile
        .as_ref()
        .and_then(|p| p.get_ref().reference_fvector.clone())
        .map(FVector::new)
        .or(match &bundle {
            Some(b) => Some(b.base_fan()?.f_vector()),
            None => None,
        });

    if fansy.is_none() && profile.is_none() {
        return Err(pos.err(0..0, "document has neither geometry nor a profile"));
    }
    Ok(Input {
        label: doc.label.clone().unwrap_or_else(|| "X".into()),
        fansy,
        bundle,
        profile,
        reference_fvector,
        n: doc.parameters.n,
        k,
    })
}

fn explicit_fansy(
    d: usize,
    tf: &Spanned<TailFanDoc>,
    points: &[Spanned<PointDoc>],
    pos: &Positioner,
) -> Result<MarkedFansyDivisor> {
    let span = tf.span();
    let t = tf.get_ref();
    pos.at(span.clone(), t.rays.iter().map(|r| int_vector(d, r)).collect::<Result<Vec<_>>>())?;
    let cones = pos.at(
        span.clone(),
        t.cones.iter().map(|c| Cone::new(d, ray_indices(&t.rays, c)?)).collect::<Result<Vec<_>>>(),
    )?;
    let fan = if cones.is_empty() { Fan::trivial(d) } else { Fan::new(d, cones)? };
    let marked = pos.at(
        span.clone(),
        t.marked.iter().map(|c| Cone::new(d, ray_indices(&t.rays, c)?)).collect::<Result<BTreeSet<_>>>(),
    )?;
    let mut slices = BTreeMap::new();
    for p in points {
        let span = p.span();
        let p = p.get_ref();
        let at: PointOnLine = pos.at(span.clone(), p.at.parse())?;
        let cells = pos.at(span.clone(), p.cells.iter().map(|c| cell(d, c)).collect::<Result<Vec<_>>>())?;
        if slices.contains_key(&at) {
            return Err(pos.err(span, format!("point {at} listed twice")));
        }
        slices.insert(at, PolyhedralComplex::closure(d, cells)?);
    }
    pos.at(span, MarkedFansyDivisor::new(fan, slices, marked))
}

fn cell(d: usize, c: &CellDoc) -> Result<Polyhedron> {
    let vertices = c
        .vertices
        .iter()
        .map(|v| {
            if v.len() != d {
                return Err(Error::Dimension { expected: d, found: v.len() });
            }
            Ok(Vector::new(v.iter().map(Literal::to_scalar).collect::<Result<_>>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    if vertices.is_empty() {
        return Err(Error::Parse { line: 0, column: 0, message: "a cell needs at least one vertex".into() });
    }
    let rays = c.rays.iter().map(|r| int_vector(d, r)).collect::<Result<Vec<_>>>()?;
    Polyhedron::new(d, vertices, rays)
}

fn int_entries(v: &Vector) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            if !x.is_integer() {
                return Err(Error::Precondition(format!("ray {v} is not integral")));
            }
            i64::try_from(x.numer()).map_err(|_| Error::Precondition(format!("ray {v} overflows i64")))
        })
        .collect()
}

fn cell_doc(p: &Polyhedron) -> Result<CellDoc> {
    Ok(CellDoc {
        vertices: p.vertices().iter().map(|v| v.iter().map(Literal::from_scalar).collect()).collect(),
        rays: p.rays().iter().map(int_entries).collect::<Result<_>>()?,
        source_cell: None,
        tuple: None,
        sigma: None,
    })
}

fn unspanned<T>(v: T) -> Spanned<T> {
    Spanned::new(0..0, v)
}

/// Encodes a marked fansy divisor; slices list maximal cells only.
pub fn document_from_fansy(label: &str, x: &MarkedFansyDivisor, reference: Option<&FVector>) -> Result<Document> {
    let d = x.rank();
    let rays = x.tail_fan().rays();
    let index = |c: &Cone| -> Vec<usize> {
        c.generators().iter().map(|g| rays.iter().position(|r| r == g).expect("ray of the fan")).collect()
    };
    let tail_fan = TailFanDoc {
        rays: rays.iter().map(int_entries).collect::<Result<_>>()?,
        cones: x.tail_fan().maximal_cones().into_iter().map(index).collect(),
        marked: x.marked().iter().map(index).collect(),
    };
    let points = x
        .slices()
        .iter()
        .map(|(p, s)| {
            Ok(unspanned(PointDoc {
                at: p.to_string(),
                cells: s.maximal_cells().map(cell_doc).collect::<Result<_>>()?,
            }))
        })
        .collect::<Result<_>>()?;
    let profile = reference.map(|f| {
        unspanned(ProfileDoc {
            r: vec![],
            v: vec![],
            t: vec![],
            special_points: x.num_special_points(),
            reference_fvector: Some(f.counts().to_vec()),
        })
    });
    Ok(Document {
        label: Some(label.to_string()),
        lattice_rank: d,
        parameters: Parameters::default(),
        bundle: None,
        tail_fan: Some(unspanned(tail_fan)),
        points,
        profile,
    })
}

/// Encodes `Y_C` with every slice cell and its provenance.
pub fn document_from_quotient(label: &str, q: &QuotientFansyDivisor) -> Result<Document> {
    let mut doc = document_from_fansy(label, &q.fansy, None)?;
    doc.parameters.n = Some(q.n);
    doc.points = q
        .fansy
        .slices()
        .iter()
        .map(|(p, s)| {
            let prov = q.provenance.get(p);
            let cells = s
                .cells()
                .iter()
                .map(|c| {
                    let mut doc = cell_doc(c)?;
                    if let Some(pr) = prov.and_then(|m| m.get(c)) {
                        doc.source_cell = Some(pr.source_cell);
                        doc.tuple = Some(pr.tuple.clone());
                        doc.sigma = Some(pr.sigma.masks.clone());
                    }
                    Ok(doc)
                })
                .collect::<Result<_>>()?;
            Ok(unspanned(PointDoc { at: p.to_string(), cells }))
        })
        .collect::<Result<_>>()?;
    Ok(doc)
}

pub fn to_toml(doc: &Document) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::Construction(format!("serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn positions() {
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        let err = parse_document("lattice_rank = 1\n[tail_fan]\nrays = [[1], [-1]]\ncones = [[0], [5]]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(matches!(parse_document(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_document("lattice_rank = \n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("1..2").unwrap(), 1..=2);
        assert_eq!(parse_k_range("3").unwrap(), 3..=3);
        assert!(parse_k_range("2..1").is_err());
    }

    #[test]
    fn round_trip() {
        for fx in [fixtures::trivial_p1(), fixtures::p_e().unwrap(), fixtures::p_f().unwrap()] {
            let x = fx.fansy.ensure_min_p();
            let text = to_toml(&document_from_fansy(&fx.label, &x, Some(&fx.reference_fvector)).unwrap()).unwrap();
            let back = parse_document(&text).unwrap();
            assert_eq!(back.fansy.as_ref(), Some(&x), "{text}");
            assert_eq!(back.reference_fvector.as_ref(), Some(&fx.reference_fvector));
        }
    }

    #[test]
    fn rational_vertices() {
        let text = "lattice_rank = 1\n[tail_fan]\nrays = [[1], [-1]]\ncones = [[0], [1]]\n\
                    [[points]]\nat = \"0\"\ncells = [{vertices = [[\"1/2\"]], rays = [[1]]}, {vertices = [[\"1/2\"]], rays = [[-1]]}]\n";
        let x = parse_document(text).unwrap().fansy.unwrap();
        let slice = x.slice(&PointOnLine::zero());
        assert_eq!(slice.f_vector().counts(), &[1, 2]);
        assert_eq!(slice.cells()[0].vertices()[0][0], crate::num::ratio(1, 2));
    }
}
