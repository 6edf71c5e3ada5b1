//! The built-in invariant suite behind `eqchow selfcheck`.

use std::io::Write;

use eqchow_core::fixtures::{self, Fixture};
use eqchow_core::format::{document_from_fansy, to_toml};
use eqchow_core::{
    build_sigma_e, convolve_counts, enumerate_rvt, oracle_report, parse_document, s_check, sigma_e_fvector_closed_form,
    sum_identity, Caps, Convention, ResultTable, SplitData, ValidationReport,
};
use num_bigint::BigUint;

/// `(|r_2|, |v_2|, |t_2|, |r_1|, |v_1|, |t_1|)` for N = 3.
pub const REFERENCE_PE: [u32; 6] = [213, 48, 36, 135, 45, 9];
pub const REFERENCE_PF: [u32; 6] = [132, 165, 0, 54, 135, 0];

fn big(v: [u32; 6]) -> Vec<BigUint> {
    v.map(BigUint::from).to_vec()
}

/// The six table entries of a fixture at N = 3.
pub fn table_row(fx: &Fixture) -> Vec<BigUint> {
    let p = enumerate_rvt(&fx.fansy, Convention::Rotated);
    let mut t = ResultTable::default();
    t.add_variety(&fx.label, &p, &fx.reference_fvector, 3, 1..=2);
    t.flat(&fx.label)
}

pub fn suite() -> ValidationReport {
    let mut r = ValidationReport::default();
    let (pe, pf) = match (fixtures::p_e(), fixtures::p_f()) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            r.push("bundle fixtures build", false, format!("{:?} {:?}", a.err(), b.err()));
            return r;
        }
    };

    for (fx, reference) in [(&pe, REFERENCE_PE), (&pf, REFERENCE_PF)] {
        let row = table_row(fx);
        r.push(format!("reference table row for {}", fx.label), row == big(reference), format!("{row:?}"));
    }

    for fx in [&pe, &pf] {
        let p = enumerate_rvt(&fx.fansy, Convention::Rotated);
        let s_ok = (0..=2).all(|i| s_check(&p, &fx.reference_fvector, i));
        r.push(format!("S_i closed forms for {}", fx.label), s_ok, "");
        let id_ok = (0..=2).all(|k| sum_identity(&p, &fx.reference_fvector, 3, k).holds());
        r.push(format!("sum identity for {}, k = 0..2", fx.label), id_ok, "");
        let monotone = (0..=fx.fansy.rank() + 1).all(|k| {
            let c: Vec<_> = (2..=4).map(|n| convolve_counts(&p, n)).collect();
            c.windows(2).all(|w| w[0].r_at(k) <= w[1].r_at(k) && w[0].v_at(k) <= w[1].v_at(k) && w[0].t_at(k) <= w[1].t_at(k))
        });
        r.push(format!("counts non-decreasing in N for {}", fx.label), monotone, "");
    }

    let mut sigma_ok = true;
    for n in 1..=3 {
        for d in 1..=2 {
            match build_sigma_e(n, d) {
                Ok(f) => {
                    let counts = f.f_vector();
                    sigma_ok &= (0..=n * d).all(|k| BigUint::from(counts.get(k)) == sigma_e_fvector_closed_form(n, d, k));
                }
                Err(_) => sigma_ok = false,
            }
        }
    }
    r.push("Σ_E face numbers match the closed form for N ≤ 3, d ≤ 2", sigma_ok, "");

    let split_ok = [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (4, 3)]
        .iter()
        .all(|&(n, d)| SplitData::new(n, d).is_ok_and(|s| s.verify().ok()));
    r.push("split data identities", split_ok, "");

    match oracle_report(&fixtures::trivial_p1().fansy, 2, &Caps::default()) {
        Ok(o) => r.push(
            "oracle equivalence, trivial divisor, N = 2, d = 1",
            o.ok(),
            o.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "),
        ),
        Err(e) => r.push("oracle equivalence, trivial divisor, N = 2, d = 1", false, e.to_string()),
    }

    for fx in [fixtures::trivial_p1(), pe.clone(), pf.clone()] {
        let v = fx.fansy.ensure_min_p().validate();
        r.push(format!("fixture {} validates", fx.label), v.ok(), "");
        let round = document_from_fansy(&fx.label, &fx.fansy, Some(&fx.reference_fvector))
            .and_then(|d| to_toml(&d))
            .and_then(|t| parse_document(&t))
            .is_ok_and(|i| i.fansy.as_ref() == Some(&fx.fansy));
        r.push(format!("fixture {} round-trips", fx.label), round, "");
    }

    match fixtures::p_f_mutated() {
        Ok(m) => {
            let row = table_row(&m);
            r.push("mutated fixture departs from the reference table", row != big(REFERENCE_PF), format!("{row:?}"));
        }
        Err(e) => r.push("mutated fixture departs from the reference table", false, e.to_string()),
    }
    r
}

pub fn run(out: &mut dyn Write) -> i32 {
    let r = suite();
    let _ = write!(out, "{r}");
    let _ = writeln!(out, "result: {} checks={} failed={}", if r.ok() { "ok" } else { "fail" }, r.checks.len(), r.failures().count());
    if r.ok() {
        0
    } else {
        1
    }
}
