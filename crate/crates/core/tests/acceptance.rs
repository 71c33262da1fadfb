//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the verdicts are always printed.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hodgekit::batch::Execution;
use hodgekit::elliptic::quadrature::periods_by_integration;
use hodgekit::elliptic::{
    j_algebraic, j_of_tau, lattice_invariants, periods, reduce_to_fundamental_domain, reduced_basis, tau_of,
    Sl2Z, TauPoint, WeierstrassCurve,
};
use hodgekit::hodge::{
    exterior_power, Bidegree, Face, HodgeDecomposition, HodgeDocument, HodgeRepresentation,
};
use hodgekit::linalg::{rational, GaussianRational, QiMatrix, Rational, Subspace};
use hodgekit::nc_hodge::{nc_hodge_batch, purity_check, restrict_to_torus, Purity, SL2Rep, Summand, TorusEmbedding};
use hodgekit::polarization::{check_polarization, PolarizationForm, PositivityFailure};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

use common::{random_structure, rng, wedge_hodge_numbers};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn structures(count: usize) -> Vec<HodgeDecomposition> {
    let mut r = rng(0x5eed_0001);
    (0..count).map(|_| random_structure(&mut r, 8, -3..=5)).collect()
}

/// All six ordered round trips among the three faces.
fn three_face_round_trips() -> Outcome {
    let start = Instant::now();
    let samples = structures(500);
    let failures: Vec<String> = hodgekit::batch::map(&samples, Execution::Parallel, |d| {
        let base = HodgeDocument::Decomposition(d.clone());
        let faces: BTreeMap<&str, HodgeDocument> = Face::ALL
            .into_iter()
            .map(|f| (f.as_str(), base.convert(f).expect("valid input converts")))
            .collect();
        let mut bad = Vec::new();
        for a in Face::ALL {
            for b in Face::ALL {
                if a == b {
                    continue;
                }
                let x = &faces[a.as_str()];
                let back = x.convert(b).and_then(|y| y.convert(a));
                if back.as_ref() != Ok(x) {
                    bad.push(format!("{a}->{b}->{a} on rank {} weight {}", d.rank(), d.weight()));
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    within(elapsed, Duration::from_secs(60))?;
    let max_rank = samples.iter().map(HodgeDecomposition::rank).max().unwrap_or(0);
    Ok(format!("500 structures x 6 round trips exact, max rank {max_rank}, {elapsed:.2?}"))
}

fn projector_algebra() -> Outcome {
    let samples = structures(200);
    let mut checked = 0;
    for d in &samples {
        let r = match HodgeDocument::Decomposition(d.clone()).convert(Face::Representation) {
            Ok(HodgeDocument::Representation(r)) => r,
            other => return Err(format!("conversion failed: {other:?}")),
        };
        check_projectors(&r)?;
        checked += 1;
    }
    Ok(format!("{checked} representations: idempotent, orthogonal, complete, conjugation-paired"))
}

fn check_projectors(r: &HodgeRepresentation) -> Result<(), String> {
    let n = r.rank();
    let cs = r.coefficients();
    let mut sum = QiMatrix::zeros(n, n);
    for (k, c) in cs {
        ensure(&(c * c) == c, || format!("C_{k} not idempotent"))?;
        for (k2, c2) in cs {
            if k != k2 {
                ensure((c * c2) == QiMatrix::zeros(n, n), || format!("C_{k} C_{k2} != 0"))?;
            }
        }
        let mirror = cs.get(&k.swapped()).ok_or_else(|| format!("no C_{}", k.swapped()))?;
        ensure(&c.conj() == mirror, || format!("conj(C_{k}) != C_{}", k.swapped()))?;
        sum = &sum + c;
    }
    ensure(sum == QiMatrix::identity(n), || "projectors do not sum to I".into())
}

fn elliptic_model(tau: &GaussianRational) -> HodgeDecomposition {
    let one = GaussianRational::one();
    let line = |t: GaussianRational| Subspace::span(2, &[vec![one.clone(), t]]).unwrap();
    HodgeDecomposition::new(
        1,
        2,
        [(Bidegree::new(1, 0), line(tau.clone())), (Bidegree::new(0, 1), line(tau.conj()))],
    )
    .expect("non-real tau gives a valid model")
}

fn random_tau(r: &mut rand::rngs::StdRng, upper: bool) -> GaussianRational {
    let re = rational(r.random_range(-20..=20), r.random_range(1..=7));
    let im = rational(r.random_range(1..=20), r.random_range(1..=7));
    GaussianRational::new(re, if upper { im } else { -im })
}

fn hodge_riemann_elliptic() -> Outcome {
    let q = PolarizationForm::symplectic_plane();
    let mut r = rng(0x5eed_0003);
    for _ in 0..100 {
        let tau = random_tau(&mut r, true);
        let report = check_polarization(&elliptic_model(&tau), &q).map_err(|e| e.to_string())?;
        ensure(report.overall, || format!("tau = {tau:?} should polarize"))?;
    }
    for _ in 0..100 {
        let tau = random_tau(&mut r, false);
        let report = check_polarization(&elliptic_model(&tau), &q).map_err(|e| e.to_string())?;
        ensure(report.orthogonality_ok && !report.positivity_ok, || format!("tau = {tau:?} verdict"))?;
        let witnessed = report.positivity_failures.iter().any(|f| match f {
            PositivityFailure::NotPositive { witness, value, .. } => {
                // i·Q(w, w̄) recomputed independently from the witness.
                let w_bar: Vec<_> = witness.iter().map(GaussianRational::conj).collect();
                let direct = &q.eval(witness, &w_bar) * &GaussianRational::i();
                direct.is_real() && &direct.re == value && *value <= Rational::zero()
            }
            _ => false,
        });
        ensure(witnessed, || format!("tau = {tau:?} lacks a valid witness"))?;
    }
    Ok("100 upper-half-plane tau polarized, 100 lower rejected with checked witnesses".into())
}

fn grid() -> Vec<WeierstrassCurve> {
    let value = |k: i64| rational(-45 + 10 * k, 9);
    let mut out = Vec::new();
    for a in 0..10 {
        for b in 0..10 {
            let c = WeierstrassCurve::from_rationals(value(a), value(b));
            if !c.is_singular() {
                out.push(c);
            }
        }
    }
    out
}

fn rel_err(got: Complex64, want: f64) -> f64 {
    (got - want).norm() / want.abs()
}

fn period_round_trip() -> Outcome {
    let start = Instant::now();
    let curves = grid();
    let results = hodgekit::batch::map(&curves, Execution::Parallel, |c| -> Result<(f64, f64, f64), String> {
        let l = periods(c, 1e-12).map_err(|e| e.to_string())?;
        let (g2, g3) = lattice_invariants(&l, 20).map_err(|e| e.to_string())?;
        let (_, t) = reduced_basis(&l).map_err(|e| e.to_string())?;
        let j = j_of_tau(&t, 20);
        let ja = j_algebraic(c).map_err(|e| e.to_string())?;
        Ok((rel_err(g2, c.t2()), rel_err(g3, -c.t3()), rel_err(j, ja)))
    });
    let elapsed = start.elapsed();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (c, r) in curves.iter().zip(results) {
        let (a, b, j) = r.map_err(|e| format!("({}, {}): {e}", c.t2(), c.t3()))?;
        ensure(a < 1e-8 && b < 1e-8, || format!("({}, {}): g2 err {a:e}, g3 err {b:e}", c.t2(), c.t3()))?;
        ensure(j < 1e-9, || format!("({}, {}): j err {j:e}", c.t2(), c.t3()))?;
        worst = (worst.0.max(a), worst.1.max(b), worst.2.max(j));
    }
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{} curves; worst rel err g2 {:.1e}, g3 {:.1e}, j {:.1e}; {elapsed:.2?}",
        curves.len(),
        worst.0,
        worst.1,
        worst.2
    ))
}

fn cm_anchors() -> Outcome {
    let rho = Complex64::from_polar(1.0, PI / 3.0);
    let anchors = [(4.0, 0.0, Complex64::new(0.0, 1.0), 1728.0), (0.0, 1.0, rho, 0.0)];
    for (t2, t3, expected_tau, expected_j) in anchors {
        let c = WeierstrassCurve::new(t2, t3);
        let from_agm = periods(&c, 1e-14).map_err(|e| e.to_string())?;
        let from_quadrature = periods_by_integration(&c, 1e-13).map_err(|e| e.to_string())?;
        for (name, l) in [("agm", from_agm), ("quadrature", from_quadrature)] {
            let t = reduce_to_fundamental_domain(&tau_of(&l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            // On the boundary e^{iπ/3} and e^{2iπ/3} are the same point.
            let d = (t.tau - expected_tau).norm().min((t.tau + expected_tau.conj()).norm());
            ensure(d < 1e-10, || format!("({t2}, {t3}) {name}: tau {} off by {d:e}", t.tau))?;
            let j = j_of_tau(&t, 20);
            let err = if expected_j == 0.0 { j.norm() } else { (j - expected_j).norm() };
            ensure(err < 1e-9, || format!("({t2}, {t3}) {name}: j = {j}"))?;
        }
    }
    Ok("tau = i, j = 1728 and tau = e^(i pi/3), j = 0 from both AGM and quadrature".into())
}

fn random_word(r: &mut rand::rngs::StdRng) -> Sl2Z {
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| r.random_range(-10..=10));
        if let Some(m) = Sl2Z::new(e[0], e[1], e[2], e[3]) {
            return m;
        }
    }
}

/// Equal as points of the fundamental domain, where the two vertical edges
/// and the two halves of the unit arc are identified.
fn same_orbit_point(a: Complex64, b: Complex64, tol: f64) -> bool {
    let flipped = -b.conj();
    [b, b + 1.0, b - 1.0, flipped, flipped + 1.0, flipped - 1.0]
        .iter()
        .any(|c| (a - c).norm() <= tol * a.norm().max(1.0))
}

fn sl2z_reduction() -> Outcome {
    let mut r = rng(0x5eed_0006);
    let mut inversions = 0;
    for _ in 0..1000 {
        let tau = Complex64::new(r.random_range(-3.0..3.0), r.random_range(0.05..3.0));
        let w = random_word(&mut r);
        let moved = w.apply(tau);
        let a = reduce_to_fundamental_domain(&TauPoint::new(tau).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let b = reduce_to_fundamental_domain(&TauPoint::new(moved).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(a.is_reduced() && b.is_reduced(), || format!("not reduced: {} / {}", a.tau, b.tau))?;
        ensure(same_orbit_point(a.tau, b.tau, 1e-10), || format!("tau {tau}, word {w}: {} vs {}", a.tau, b.tau))?;
        for (input, t) in [(tau, &a), (moved, &b)] {
            let m = t.reducing_word;
            ensure(m.det() == 1, || format!("det {m} != 1"))?;
            let image = m.apply(input);
            ensure((image - t.tau).norm() <= 1e-10 * t.tau.norm(), || format!("{m} maps {input} to {image}, not {}", t.tau))?;
        }
        if b.reducing_word.c != 0 {
            inversions += 1;
        }
    }
    Ok(format!("1000 random tau and words agree; {inversions} reductions needed inversions"))
}

/// Torus weights from the symmetric-tensor basis: a monomial in `Sym^a` is a
/// non-decreasing 0/1 sequence of length `a` and has weight `#0 − #1`.
fn brute_weights(a: u32) -> Vec<i64> {
    (0..1u32 << a)
        .filter(|bits| {
            let seq: Vec<u32> = (0..a).map(|i| (bits >> i) & 1).collect();
            seq.windows(2).all(|w| w[0] <= w[1])
        })
        .map(|bits| a as i64 - 2 * bits.count_ones() as i64)
        .collect()
}

fn brute_table(summands: &[(u32, u32, u32)]) -> BTreeMap<Bidegree, usize> {
    let mut t = BTreeMap::new();
    for &(a, b, m) in summands {
        for p in brute_weights(a) {
            for q in brute_weights(b) {
                *t.entry(Bidegree::new(p, q)).or_insert(0) += m as usize;
            }
        }
    }
    t
}

fn nc_exhaustive() -> Outcome {
    let singles: Vec<(u32, u32)> = (0..=4).flat_map(|a| (0..=4).map(move |b| (a, b))).collect();
    let mut cases: Vec<Vec<(u32, u32, u32)>> = Vec::new();
    for &(a, b) in &singles {
        for m in 1..=2 {
            cases.push(vec![(a, b, m)]);
        }
        for &(c, d) in &singles {
            cases.push(vec![(a, b, 1), (c, d, 1)]);
        }
    }
    let reps: Vec<SL2Rep> = cases
        .iter()
        .map(|s| SL2Rep::new(s.iter().map(|&(a, b, multiplicity)| Summand { a, b, multiplicity }).collect()).unwrap())
        .collect();
    let reports = nc_hodge_batch(&reps, TorusEmbedding::Diagonal, Execution::Parallel);
    let mut pure_singletons = Vec::new();
    for ((case, rep), report) in cases.iter().zip(&reps).zip(&reports) {
        let table = brute_table(case);
        let dim: usize = case.iter().map(|&(a, b, m)| ((a + 1) * (b + 1) * m) as usize).sum();
        ensure(table.values().sum::<usize>() == dim, || format!("{rep}: brute dimension"))?;
        let c = restrict_to_torus(rep, TorusEmbedding::Diagonal);
        ensure(c.total() == dim && rep.dim() == dim, || format!("{rep}: dimension not conserved"))?;
        ensure(c.entries() == &table, || format!("{rep}: character table differs from brute force"))?;
        let degrees: std::collections::BTreeSet<i64> = table.keys().map(|k| k.total()).collect();
        match (purity_check(&c), degrees.len()) {
            (Purity::Pure { weight }, 1) => {
                ensure(degrees.contains(&weight), || format!("{rep}: weight {weight}"))?;
                ensure(report.is_nc_hodge && report.weight == Some(weight), || format!("{rep}: report"))?;
            }
            (Purity::Impure { witness, degrees: wd }, n) if n > 1 => {
                ensure(wd[0] != wd[1] && witness.iter().all(|k| table.contains_key(k)), || format!("{rep}: witness"))?;
                ensure(!report.is_nc_hodge, || format!("{rep}: report"))?;
            }
            (v, n) => return Err(format!("{rep}: verdict {v:?} but {n} total degrees")),
        }
        if case.len() == 1 && case[0].2 == 1 && report.is_nc_hodge {
            pure_singletons.push((case[0].0, case[0].1));
        }
    }
    ensure(pure_singletons == vec![(0, 0)], || format!("pure singletons: {pure_singletons:?}"))?;
    Ok(format!(
        "{} representations match brute force; only Sym(0)*conj(Sym(0)) is a pure single summand",
        cases.len()
    ))
}

fn exterior_powers() -> Outcome {
    let one = GaussianRational::one();
    let model = elliptic_model(&GaussianRational::i());
    let l2 = exterior_power(&model, 2).map_err(|e| e.to_string())?;
    let expected: BTreeMap<_, _> = [(Bidegree::new(1, 1), 1)].into();
    ensure(l2.rank() == 1 && l2.weight() == 2 && l2.hodge_numbers() == expected, || {
        format!("wedge^2 of the model: {:?}", l2.hodge_numbers())
    })?;
    ensure(l2.block(Bidegree::new(1, 1)) == Some(&Subspace::span(1, &[vec![one]]).unwrap()), || "block".into())?;
    let mut r = rng(0x5eed_0008);
    let mut count = 0;
    for _ in 0..60 {
        let d = random_structure(&mut r, 6, -3..=5);
        for k in 0..=3 {
            let w = exterior_power(&d, k).map_err(|e| e.to_string())?;
            ensure(w.validate().is_valid(), || format!("wedge^{k} invalid"))?;
            let want = wedge_hodge_numbers(&d.hodge_numbers(), k);
            let want: BTreeMap<_, _> = want.into_iter().filter(|(_, v)| *v > 0).collect();
            ensure(w.hodge_numbers() == want, || {
                format!("wedge^{k} of {:?}: {:?} vs {:?}", d.hodge_numbers(), w.hodge_numbers(), want)
            })?;
            count += 1;
        }
    }
    Ok(format!("wedge^2 of the weight-1 model is (1,1); {count} random powers match the convolution"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 three-face round trips", three_face_round_trips),
        ("2 projector algebra", projector_algebra),
        ("3 Hodge-Riemann on the elliptic model", hodge_riemann_elliptic),
        ("4 period engine round trip", period_round_trip),
        ("5 CM anchor points", cm_anchors),
        ("6 SL(2,Z) reduction", sl2z_reduction),
        ("7 nc-Hodge exhaustive check", nc_exhaustive),
        ("8 exterior-power Hodge numbers", exterior_powers),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!("{} of 8 acceptance criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
