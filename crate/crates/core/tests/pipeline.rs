use std::collections::BTreeMap;
use std::path::PathBuf;

use eqchow_core::count::{enumerate_rvt, generator_report, oracle_report, Convention};
use eqchow_core::fan::p1_fan;
use eqchow_core::fixtures::{p_e, p_f, trivial_p1};
use eqchow_core::{
    build_yc, count_yc, parse_document, Caps, MarkedFansyDivisor, Mode, PointOnLine, PolyhedralComplex, Polyhedron,
    Quotient,
};
use num_bigint::BigUint;

fn example(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn example_documents_match_fixtures() {
    let pe = parse_document(&example("pe.toml")).unwrap();
    assert_eq!(pe.fansy.as_ref(), Some(&p_e().unwrap().fansy));
    assert_eq!(pe.n, Some(3));
    assert_eq!(pe.k, Some(1..=2));
    let pf = parse_document(&example("pf.toml")).unwrap();
    assert_eq!(pf.fansy.as_ref(), Some(&p_f().unwrap().fansy));
    let t = parse_document(&example("trivial.toml")).unwrap();
    assert_eq!(t.fansy.as_ref(), Some(&trivial_p1().fansy));
}

#[test]
fn bundle_marks() {
    let e = p_e().unwrap().fansy;
    let mut dims: Vec<_> = e.marked().iter().map(|c| c.dim()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2, 2]);
    // The second bundle has cones meeting both half-spaces, so its marked set is not empty.
    assert!(!p_f().unwrap().fansy.marked().is_empty());
    assert_eq!(p_f().unwrap().fansy.tail_fan().f_vector().counts(), &[1, 5, 5]);
}

#[test]
fn oracle_on_first_bundle_with_n2() {
    let r = oracle_report(&p_e().unwrap().fansy, 2, &Caps::default()).unwrap();
    assert!(r.ok(), "{r}");
}

#[test]
fn quotient_slices_are_complete() {
    let q = match build_yc(&trivial_p1().fansy, 2, Mode::Geometric, &Caps::default()).unwrap() {
        Quotient::Geometric(q) => q,
        Quotient::Counting(_) => unreachable!(),
    };
    for s in q.fansy.slices().values() {
        let cert = s.is_complete();
        assert!(cert.complete && cert.ridges_paired && cert.connected, "{cert:?}");
        assert!(cert.samples_checked >= 100);
    }
}

#[test]
fn n1_preserves_combinatorics() {
    let x = p_e().unwrap().fansy;
    let c = count_yc(&x, 1).unwrap();
    for (p, s) in x.slices() {
        let f: Vec<BigUint> = (0..=2).map(|k| BigUint::from(s.f_vector().get(k))).collect();
        assert_eq!(c.slices[p], f);
    }
}

#[test]
fn incomplete_slice_is_reported() {
    let x = trivial_p1().fansy;
    let half = PolyhedralComplex::new(1, vec![Polyhedron::new(1, vec![eqchow_core::Vector::from_ints(&[0])], vec![eqchow_core::Vector::from_ints(&[1])]).unwrap()]).unwrap();
    let broken = MarkedFansyDivisor::new(
        x.tail_fan().clone(),
        BTreeMap::from([(PointOnLine::zero(), half), (PointOnLine::Infinity, p1_fan().as_complex())]),
        Default::default(),
    )
    .unwrap();
    let r = broken.validate();
    assert!(!r.ok());
    assert!(r.failures().any(|c| c.name.contains("slice 0 complete")), "{r}");
}

#[test]
fn padding_adds_trivial_slice_faces() {
    let x = p_e().unwrap().fansy;
    let only_zero = MarkedFansyDivisor::new(
        x.tail_fan().clone(),
        BTreeMap::from([(PointOnLine::zero(), x.slice(&PointOnLine::zero()))]),
        x.marked().clone(),
    )
    .unwrap();
    let padded = enumerate_rvt(&only_zero, Convention::Geometric);
    let zero_only: usize = x
        .slice(&PointOnLine::zero())
        .cells()
        .iter()
        .filter(|c| !x.is_marked(&c.tail_cone().unwrap()))
        .count();
    let unmarked_tail: usize = x.tail_fan().cones().iter().filter(|c| !x.is_marked(c)).count();
    assert_eq!(padded.v.iter().sum::<usize>(), zero_only + unmarked_tail);
}

#[test]
fn generator_report_matches_enumeration() {
    let p = enumerate_rvt(&trivial_p1().fansy, Convention::Rotated);
    for k in 0..=3 {
        let g = generator_report(&p, k);
        assert_eq!((g.r, g.v, g.t), (p.r_at(k), p.v_at(k), p.t_at(k)));
    }
    assert_eq!(generator_report(&p, 1).total(), 4);
}
