//! Exact polyhedral geometry for complexity-one T-varieties over the projective line,
//! the downgrade against the toric approximation of the classifying space, and
//! equivariant Chow generator counts.

mod bitset;
mod dd;

pub mod config;
pub mod count;
pub mod divisor;
pub mod divpoly;
pub mod downgrade;
pub mod error;
pub mod faces;
pub mod fan;
pub mod fansy;
pub mod fixtures;
pub mod format;
pub mod lattice;
pub mod linalg;
pub mod num;
pub mod polyhedron;
pub mod sigma_e;
pub mod split;
pub mod table;

pub use count::{
    convolve_counts, enumerate_rvt, generator_report, oracle_report, s_check, s_closed_form, sprime_closed_form, sum_identity,
    Convention, CountProfile, EquivariantCounts, GeneratorReport, SumIdentity,
};
pub use divisor::{DivisorialFan, PointOnLine, PolyhedralDivisor, PpReport, QDivisor};
pub use divpoly::{divpoly_to_divfan, dualize_divpoly, AffinePiece, ConcavePiecewise, DivisorialPolyhedron};
pub use downgrade::{
    build_yc, count_yc, downgrade_slice, member_compatibility, product_with_e_t, toric_downgrade, Mode, Provenance,
    Quotient, QuotientCounts, QuotientFansyDivisor, SliceImage,
};
pub use error::{Error, Result};
pub use config::Caps;
pub use faces::{Face, FaceLattice};
pub use fan::{projectivized_bundle_fan, product_fan, CompletenessCertificate, FVector, Fan, PolyhedralComplex};
pub use fansy::{validate_marked_fansy, Check, MarkedFansyDivisor, ValidationReport};
pub use fixtures::{BundleSpec, Fixture};
pub use format::{parse_document, parse_k_range, Document, Input};
pub use lattice::LatticeMap;
pub use num::{Scalar, Vector};
pub use polyhedron::{Cone, HRep, Halfspace, Pairing, Polyhedron};
pub use split::SplitData;
pub use table::{ResultRow, ResultTable, Table};
pub use sigma_e::{build_sigma_e, sigma_e_fvector_closed_form, SigmaCone, SigmaE};
