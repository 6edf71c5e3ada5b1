//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use eqchow_core::faces::convolve;
use eqchow_core::fixtures::{p_e, p_f, trivial_p1};
use eqchow_core::{
    build_sigma_e, build_yc, downgrade_slice, enumerate_rvt, oracle_report, s_closed_form, sigma_e_fvector_closed_form,
    sprime_closed_form, sum_identity, Caps, Cone, Convention, Fixture, MarkedFansyDivisor, Mode, Polyhedron, Quotient,
    SigmaE, SplitData, ValidationReport, Vector,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: &'static str,
    what: &'static str,
    pass: bool,
    detail: String,
}

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn big(v: &[u32]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn fixtures() -> (Fixture, Fixture) {
    (p_e().expect("P(E) fixture"), p_f().expect("P(F) fixture"))
}

fn table_values() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for (file, expected) in [("pe.toml", "P(E),2,213,48,36|P(E),1,135,45,9"), ("pf.toml", "P(F),2,132,165,0|P(F),1,54,135,0")] {
        let out = Command::new(env!("CARGO_BIN_EXE_eqchow"))
            .args(["count", "--input", &example(file), "--N", "3", "--k", "1..=2", "--format", "csv"])
            .output()
            .expect("run eqchow");
        let csv = String::from_utf8_lossy(&out.stdout);
        let got: Vec<String> =
            csv.lines().skip(1).map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect();
        let ok = out.status.success() && got.join("|") == expected;
        pass &= ok;
        detail.push(format!("{file}: {}", got.join(" ")));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    detail.push(format!("{:.2?}", elapsed));
    Outcome { id: "1", what: "reference table via `eqchow count`, under 60 s", pass, detail: detail.join("; ") }
}

fn sum_identities() -> Outcome {
    let (pe, pf) = fixtures();
    let mut pass = true;
    let mut detail = Vec::new();
    let s: Vec<usize> = (0..=2).map(|i| s_closed_form(&pe.reference_fvector, 2, 2, i)).collect();
    pass &= s == [6, 9, 5];
    let sp: Vec<BigUint> = (0..=4).map(|i| sprime_closed_form(3, 2, i)).collect();
    pass &= sp == big(&[9, 18, 15, 6, 1]);
    detail.push(format!("S={s:?} S'={sp:?}"));
    for fx in [&pe, &pf] {
        let p = enumerate_rvt(&fx.fansy, Convention::Rotated);
        for k in 0..=2 {
            let id = sum_identity(&p, &fx.reference_fvector, 3, k);
            pass &= id.holds();
            let want = match k {
                2 => Some(297u32),
                1 => Some(189),
                _ => None,
            };
            if let Some(w) = want {
                pass &= id.lhs == BigUint::from(w);
            }
            detail.push(format!("{} k={k}: {}={}", fx.label, id.lhs, id.rhs));
        }
    }
    Outcome { id: "2", what: "sum identity for k = 0..2", pass, detail: detail.join("; ") }
}

fn sigma_e_counts() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    for n in 1..=3 {
        for d in 1..=2 {
            match build_sigma_e(n, d) {
                Ok(f) => {
                    let fv = f.f_vector();
                    pass &= (0..=n * d).all(|k| BigUint::from(fv.get(k)) == sigma_e_fvector_closed_form(n, d, k));
                }
                Err(_) => pass = false,
            }
        }
    }
    let f32 = SigmaE::new(3, 2).map(|s| s.f_vector().counts().to_vec()).unwrap_or_default();
    pass &= f32 == [1, 6, 15, 18, 9];
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    Outcome {
        id: "3",
        what: "Σ_E enumeration equals the closed form for N ≤ 3, d ≤ 2, under 5 s",
        pass,
        detail: format!("(3,2): {f32:?}; {elapsed:.2?}"),
    }
}

fn oracle() -> Outcome {
    let r = oracle_report(&trivial_p1().fansy, 2, &Caps::default());
    let (pass, detail) = match r {
        Ok(r) => (r.ok(), format!("{} checks, {} failed", r.checks.len(), r.failures().count())),
        Err(e) => (false, e.to_string()),
    };
    Outcome { id: "4", what: "Y_C counts equal the convolution, trivial divisor, N = 2", pass, detail }
}

fn random_polytope(rng: &mut ChaCha8Rng, rank: usize) -> Polyhedron {
    let n = rng.random_range(1..=5);
    let pts = (0..n).map(|_| Vector::from_ints(&(0..rank).map(|_| rng.random_range(-4..=4)).collect::<Vec<i64>>())).collect();
    Polyhedron::new(rank, pts, vec![]).expect("polytope")
}

fn random_cone(rng: &mut ChaCha8Rng, rank: usize) -> Cone {
    let n = rng.random_range(0..=3);
    let gens = (0..n)
        .map(|_| {
            let mut v = vec![1i64];
            v.extend((1..rank).map(|_| rng.random_range(-3..=3)));
            Vector::from_ints(&v)
        })
        .collect();
    Cone::new(rank, gens).expect("cone")
}

fn face_products(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut pass = true;
    let cases = 24;
    for _ in 0..cases {
        let p = random_polytope(rng, 2).minkowski_sum(random_cone(rng, 2).as_polyhedron()).expect("sum");
        let c = random_cone(rng, 2);
        let (lp, lc) = (p.faces().expect("faces"), c.as_polyhedron().faces().expect("faces"));
        let lprod = p.product(c.as_polyhedron()).faces().expect("faces");
        let expected: BTreeSet<Polyhedron> = lp.polyhedra().flat_map(|f| lc.polyhedra().map(move |g| f.product(g))).collect();
        pass &= lprod.set() == expected && lprod.f_vector() == convolve(&lp.f_vector(), &lc.f_vector());
    }
    (pass, format!("{cases} cases"))
}

fn check_named(r: &ValidationReport, needle: &str) -> bool {
    let hits: Vec<_> = r.checks.iter().filter(|c| c.name.contains(needle)).collect();
    !hits.is_empty() && hits.iter().all(|c| c.passed)
}

fn downgrade_pipeline() -> Vec<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let (a, a_detail) = face_products(&mut rng);

    let cases: Vec<(MarkedFansyDivisor, usize, &str)> = vec![
        (trivial_p1().fansy, 2, "trivial N=2"),
        (trivial_p1().fansy, 3, "trivial N=3"),
        (p_e().expect("P(E)").fansy, 1, "P(E) N=1"),
        (p_e().expect("P(E)").fansy, 2, "P(E) N=2"),
    ];
    let (mut b, mut c, mut d) = (true, true, true);
    let mut pairs = 0usize;
    let mut detail = Vec::new();
    for (x, n, label) in &cases {
        let x = x.ensure_min_p();
        let split = SplitData::new(*n, x.rank()).expect("split");
        let sigma_e = SigmaE::new(*n, x.rank()).expect("Σ_E");
        for slice in x.slices().values() {
            for cell in slice.maximal_cells() {
                for (_, g) in sigma_e.maximal_cones() {
                    pairs += 1;
                    b &= downgrade_slice(cell, &sigma_e.cone(&g), &split).is_ok_and(|s| s.certified());
                }
            }
        }
        match build_yc(&x, *n, Mode::Geometric, &Caps::default()) {
            Ok(Quotient::Geometric(q)) => {
                b &= check_named(&q.report, "on maximal pairs");
                c &= check_named(&q.report, "complete") && q.fansy.validate().ok();
                d &= check_named(&q.report, "evaluation compatibility") && check_named(&q.report, "degree");
            }
            other => {
                c = false;
                detail.push(format!("{label}: {:?}", other.err()));
            }
        }
    }
    let e = [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (4, 3)]
        .iter()
        .all(|&(n, d)| SplitData::new(n, d).is_ok_and(|s| s.verify().ok()));
    let elapsed = start.elapsed();
    let in_time = elapsed < Duration::from_secs(120);
    detail.push(format!("{pairs} pairs; {elapsed:.2?}"));
    let tag = |x: bool| x && in_time;
    vec![
        Outcome { id: "5a", what: "face lattice of a product, randomized", pass: tag(a), detail: a_detail },
        Outcome { id: "5b", what: "downgrade_slice certified on every processed pair", pass: tag(b), detail: detail.join("; ") },
        Outcome { id: "5c", what: "Y_C outputs are complete", pass: tag(c), detail: String::new() },
        Outcome { id: "5d", what: "evaluation and degree compatibility", pass: tag(d), detail: String::new() },
        Outcome { id: "5e", what: "split data identities", pass: tag(e), detail: format!("{elapsed:.2?} total for 5a-5e") },
    ]
}

fn marks() -> Vec<Outcome> {
    let (pe, pf) = fixtures();
    let dims = |x: &MarkedFansyDivisor| x.marked().iter().map(|c| c.dim()).collect::<Vec<_>>();
    vec![
        Outcome {
            id: "6a",
            what: "P(F) has an empty marked set",
            pass: pf.fansy.marked().is_empty(),
            detail: format!("marked cone dimensions {:?}", dims(&pf.fansy)),
        },
        Outcome {
            id: "6b",
            what: "P(E) has a nonempty marked set",
            pass: !pe.fansy.marked().is_empty(),
            detail: format!("marked cone dimensions {:?}", dims(&pe.fansy)),
        },
    ]
}

fn main() -> ExitCode {
    let mut all = vec![table_values(), sum_identities(), sigma_e_counts(), oracle()];
    all.extend(downgrade_pipeline());
    all.extend(marks());
    for o in &all {
        let status = if o.pass { "PASS" } else { "FAIL" };
        if o.detail.is_empty() {
            println!("{status} [{}] {}", o.id, o.what);
        } else {
            println!("{status} [{}] {} ({})", o.id, o.what, o.detail);
        }
    }
    let failed = all.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
