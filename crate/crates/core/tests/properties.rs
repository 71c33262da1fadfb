mod common;

use std::collections::BTreeMap;

use hodgekit::elliptic::quadrature::periods_by_integration;
use hodgekit::elliptic::{
    basis_change, betti_de_rham_row, discriminant, lattice_invariants, periods, reduce_to_fundamental_domain, Sl2Z,
    TauPoint, WeierstrassCurve,
};
use hodgekit::hodge::{
    decomposition_to_filtration, decomposition_to_representation, dual, filtration_to_decomposition,
    representation_to_decomposition, tensor, Bidegree, GeneralHodgeStructure, HodgeDecomposition, HodgeStructure,
};
use hodgekit::linalg::{GaussianRational, QiMatrix, Subspace};
use hodgekit::nc_hodge::{restrict_to_torus, SL2Rep, Summand, TorusEmbedding};
use hodgekit::polarization::{check_polarization, is_positive_definite, z2_grading, PolarizationForm};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use common::{gaussian, random_invertible, random_matrix, random_structure, rng};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn structure(seed: u64, max_rank: usize) -> HodgeDecomposition {
    random_structure(&mut rng(seed), max_rank, -3..=5)
}

fn convolve(a: &BTreeMap<Bidegree, usize>, b: &BTreeMap<Bidegree, usize>) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    for (ka, ha) in a {
        for (kb, hb) in b {
            *out.entry(*ka + *kb).or_insert(0) += ha * hb;
        }
    }
    out
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rref_is_idempotent(seed: u64, rows in 1usize..6, cols in 1usize..6) {
        let m = random_matrix(&mut rng(seed), rows, cols);
        let r = m.rref();
        prop_assert_eq!(r.rref(), r);
    }

    #[test]
    fn rank_nullity(seed: u64, rows in 1usize..6, cols in 1usize..7) {
        let mut r = rng(seed);
        // Low-rank products make the null space nontrivial more often.
        let inner = r.random_range(1..=rows.min(cols));
        let m = &random_matrix(&mut r, rows, inner) * &random_matrix(&mut r, inner, cols);
        let null = m.null_space_vectors();
        prop_assert_eq!(m.rank() + null.len(), cols);
        for v in &null {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == GaussianRational::from(0)));
        }
    }

    #[test]
    fn span_is_basis_independent(seed: u64, n in 1usize..6, k in 1usize..5) {
        let mut r = rng(seed);
        let vectors = random_matrix(&mut r, n, k);
        let change = random_invertible(&mut r, k);
        let a = Subspace::column_space(&vectors);
        let b = Subspace::column_space(&(&vectors * &change));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn intersection_and_sum_dimensions(seed: u64, n in 1usize..6) {
        let mut r = rng(seed);
        let (ka, kb) = (r.random_range(1..=n), r.random_range(1..=n));
        let a = Subspace::column_space(&random_matrix(&mut r, n, ka));
        let b = Subspace::column_space(&random_matrix(&mut r, n, kb));
        let sum = a.sum(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn faces_round_trip(seed: u64) {
        let d = structure(seed, 6);
        let f = decomposition_to_filtration(&d).unwrap();
        prop_assert!(f.validate().is_valid());
        prop_assert_eq!(&filtration_to_decomposition(&f).unwrap(), &d);
        let rep = decomposition_to_representation(&d).unwrap();
        prop_assert_eq!(representation_to_decomposition(&rep).unwrap(), HodgeStructure::Pure(d.clone()));
    }

    #[test]
    fn representation_is_multiplicative_on_real_points(seed: u64) {
        let d = structure(seed, 5);
        let rep = decomposition_to_representation(&d).unwrap();
        let mut r = rng(seed ^ 1);
        let z = loop {
            let z = gaussian(&mut r);
            if z != GaussianRational::from(0) { break z; }
        };
        let w = GaussianRational::from(r.random_range(1..4));
        // h(zw) = h(z) h(w) for the torus action.
        prop_assert_eq!(rep.evaluate(&(&z * &w)), &rep.evaluate(&z) * &rep.evaluate(&w));
        let t = GaussianRational::from(2);
        let two = GaussianRational::from(2);
        let mut scale = GaussianRational::from(1);
        for _ in 0..d.weight().unsigned_abs() {
            scale = &scale * &two;
        }
        if d.weight() < 0 {
            scale = scale.inv().unwrap();
        }
        prop_assert_eq!(rep.evaluate(&t), QiMatrix::identity(d.rank()).scale(&scale));
    }

    #[test]
    fn tensor_and_dual_hodge_numbers(seed: u64) {
        let a = structure(seed, 4);
        let b = structure(seed.wrapping_add(7), 4);
        let t = tensor(&a, &b).unwrap();
        prop_assert!(t.validate().is_valid());
        prop_assert_eq!(t.hodge_numbers(), convolve(&a.hodge_numbers(), &b.hodge_numbers()));
        let dd = dual(&dual(&a).unwrap()).unwrap();
        prop_assert_eq!(&dd, &a);
        let negated: BTreeMap<_, _> = a.hodge_numbers().into_iter().map(|(k, h)| (k.negated(), h)).collect();
        prop_assert_eq!(dual(&a).unwrap().hodge_numbers(), negated);
    }

    #[test]
    fn general_sums_and_grading(seed: u64) {
        let a = GeneralHodgeStructure::from_pure(structure(seed, 4));
        let b = GeneralHodgeStructure::from_pure(structure(seed.wrapping_add(3), 4));
        let s = a.direct_sum(&b).unwrap();
        prop_assert_eq!(s.rank(), a.rank() + b.rank());
        let mut expected = a.hodge_numbers();
        for (k, h) in b.hodge_numbers() {
            *expected.entry(k).or_insert(0) += h;
        }
        prop_assert_eq!(s.hodge_numbers(), expected);
        let (even, odd) = z2_grading(&s);
        prop_assert!(even.components().keys().all(|w| w % 2 == 0));
        prop_assert!(odd.components().keys().all(|w| w % 2 != 0));
        prop_assert_eq!(even.direct_sum(&odd).unwrap().hodge_numbers(), s.hodge_numbers());
        let back = GeneralHodgeStructure::from_mixed(&s.to_mixed()).unwrap();
        prop_assert_eq!(back.hodge_numbers(), s.hodge_numbers());
    }

    #[test]
    fn positivity_is_basis_independent(seed: u64, n in 1usize..5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n);
        // A Hermitian matrix, positive definite about half the time.
        let shift = GaussianRational::from(r.random_range(-4..8));
        let h = &(&a.adjoint() * &a) - &QiMatrix::identity(n).scale(&shift);
        let p = random_invertible(&mut r, n);
        let moved = &(&p.adjoint() * &h) * &p;
        prop_assert_eq!(is_positive_definite(&h), is_positive_definite(&moved));
        prop_assert!(is_positive_definite(&h).is_some());
    }

    #[test]
    fn negating_the_form_keeps_orthogonality(num in -20i64..20, den in 1i64..6, im in 1i64..20) {
        let tau = GaussianRational::new(hodgekit::linalg::rational(num, den), hodgekit::linalg::rational(im, den));
        let one = GaussianRational::from(1);
        let line = |t: GaussianRational| Subspace::span(2, &[vec![one.clone(), t]]).unwrap();
        let d = HodgeDecomposition::new(
            1,
            2,
            [(Bidegree::new(1, 0), line(tau.clone())), (Bidegree::new(0, 1), line(tau.conj()))],
        ).unwrap();
        let q = PolarizationForm::symplectic_plane();
        let a = check_polarization(&d, &q).unwrap();
        let b = check_polarization(&d, &q.negated()).unwrap();
        prop_assert_eq!(a.orthogonality_ok, b.orthogonality_ok);
        prop_assert!(a.positivity_ok && !b.positivity_ok);
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn reduction_lands_in_the_domain(re in -50.0f64..50.0, im in 0.01f64..20.0) {
        let tau = Complex64::new(re, im);
        let t = reduce_to_fundamental_domain(&TauPoint::new(tau).unwrap()).unwrap();
        prop_assert!(t.is_reduced());
        prop_assert_eq!(t.reducing_word.det(), 1);
        prop_assert!((t.reducing_word.apply(tau) - t.tau).norm() < 1e-9 * t.tau.norm());
    }

    #[test]
    fn scaling_covariance(t2 in -5.0f64..5.0, t3 in -5.0f64..5.0, k in 0usize..3) {
        let c = WeierstrassCurve::new(t2, t3);
        prop_assume!(discriminant(&c).abs() > 1e-3);
        let lambda = [2.0, 3.0, 0.5][k];
        let base = periods(&c, 1e-13).unwrap();
        let scaled = periods(&c.scaled(lambda), 1e-13).unwrap();
        // Same lattice up to the chosen basis; on the nose for these real scalings.
        let m = basis_change(&base.scaled(Complex64::new(1.0 / lambda, 0.0)), &scaled, 1e-10);
        prop_assert_eq!(m, Some([[1, 0], [0, 1]]));
        let (g2, g3) = lattice_invariants(&scaled, 20).unwrap();
        let (h2, h3) = lattice_invariants(&base, 20).unwrap();
        prop_assert!((g2 - h2 * lambda.powi(4)).norm() <= 1e-8 * (1.0 + g2.norm()));
        prop_assert!((g3 - h3 * lambda.powi(6)).norm() <= 1e-8 * (1.0 + g3.norm()));
    }

    #[test]
    fn change_of_cycles_is_an_action(t2 in 0.5f64..5.0, t3 in -1.0f64..1.0, a in -3i64..3, b in -3i64..3) {
        let c = WeierstrassCurve::new(t2, t3);
        prop_assume!(discriminant(&c).abs() > 1e-3);
        let row = betti_de_rham_row(&c, 1e-13).unwrap();
        let m = Sl2Z::new(1, a, 0, 1).unwrap().compose(&Sl2Z::S).compose(&Sl2Z::translation(b));
        let moved = row.change_of_cycles(&m);
        let back = moved.change_of_cycles(&m.inverse());
        for (x, y) in back.entries.iter().zip(&row.entries) {
            prop_assert!((x - y).norm() < 1e-12 * (1.0 + y.norm()));
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn agm_matches_quadrature_on_real_roots(t2 in 0.1f64..5.0, t3 in -5.0f64..5.0) {
        let c = WeierstrassCurve::new(t2, t3);
        prop_assume!(discriminant(&c) > 1e-3);
        let a = periods(&c, 1e-13).unwrap();
        let b = periods_by_integration(&c, 1e-11).unwrap();
        prop_assert!(basis_change(&a, &b, 1e-9).is_some(), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn torus_restriction_conserves_dimension(terms in proptest::collection::vec((0u32..6, 0u32..6, 1u32..4), 1..4)) {
        let rep = SL2Rep::new(terms.iter().map(|&(a, b, multiplicity)| Summand { a, b, multiplicity }).collect()).unwrap();
        let c = restrict_to_torus(&rep, TorusEmbedding::Diagonal);
        prop_assert_eq!(c.total(), rep.dim());
        // Weights of Sym^a are symmetric about zero.
        for (k, m) in c.entries() {
            prop_assert_eq!(c.multiplicity(Bidegree::new(-k.p, -k.q)), *m);
        }
        let text = rep.to_string();
        prop_assert_eq!(text.parse::<SL2Rep>().unwrap(), rep);
    }
}

#[test]
fn empty_structures_are_handled() {
    let g = GeneralHodgeStructure::empty();
    let (even, odd) = z2_grading(&g);
    assert_eq!((even.rank(), odd.rank()), (0, 0));
}
