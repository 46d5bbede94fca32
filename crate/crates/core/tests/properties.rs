mod common;

use common::*;
use kcomm_core::classify::{idempotent_witnesses, scalar_witness_test};
use kcomm_core::json::{mat_from_json, mat_to_json, parse, table_from_json, table_to_json, to_canonical_string};
use kcomm_core::preserver::{all_pairs, tabulate};
use kcomm_core::sandwich::sandwich_apply;
use kcomm_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_recursion(a in gaussian_mat(), b in gaussian_mat(), k in 0u32..=8) {
        prop_assert_eq!(kcomm_closed(&a, &b, k).unwrap(), kcomm_recursive(&a, &b, k).unwrap());
    }

    #[test]
    fn recurrence_and_linearity(a in gaussian_mat(), a2 in gaussian_mat(), b in gaussian_mat(), k in 0u32..=6) {
        let next = kcomm_recursive(&a, &b, k + 1).unwrap();
        prop_assert_eq!(next, kcomm_recursive(&a, &b, k).unwrap().commutator(&b));
        let sum = kcomm_recursive(&(&a + &a2), &b, k).unwrap();
        prop_assert_eq!(sum, &kcomm_recursive(&a, &b, k).unwrap() + &kcomm_recursive(&a2, &b, k).unwrap());
    }

    #[test]
    fn scaling_law(a in gaussian_mat(), b in gaussian_mat(), l in gaussian_scalar(), m in gaussian_scalar(), k in 0u32..=6) {
        let lhs = kcomm_recursive(&a.scale(&l), &b.scale(&m), k).unwrap();
        let rhs = kcomm_recursive(&a, &b, k).unwrap().scale(&(&l * &m.pow(k)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn central_translation(a in gaussian_mat(), b in gaussian_mat(), c in gaussian_scalar(), k in 0u32..=6) {
        let ci = Mat2::scalar(qi(), c);
        let base = kcomm_recursive(&a, &b, k).unwrap();
        prop_assert_eq!(kcomm_recursive(&a, &(&b + &ci), k).unwrap(), base.clone());
        if k >= 1 {
            prop_assert_eq!(kcomm_recursive(&(&a + &ci), &b, k).unwrap(), base);
        }
    }

    #[test]
    fn idempotent_periodicity(a in gaussian_mat(), x in nonzero_gaussian_vec(), f in nonzero_gaussian_vec(), k in 1u32..=6) {
        let fac = RankOneFactor::new(x, f).unwrap();
        let pairing = fac.pairing();
        prop_assume!(!pairing.is_exact_zero());
        // rescale x so that <x, f> = 1
        let inv = pairing.inv().unwrap();
        let fac = RankOneFactor::new([&fac.x[0] * &inv, &fac.x[1] * &inv], fac.f.clone()).unwrap();
        let qm = fac.to_matrix(qi());
        prop_assert!(qm.is_idempotent());
        prop_assert_eq!(kcomm_recursive(&a, &qm, k + 2).unwrap(), kcomm_recursive(&a, &qm, k).unwrap());
        prop_assert_eq!(kcomm_idempotent_fast(&a, &qm, k).unwrap(), kcomm_recursive(&a, &qm, k).unwrap());
    }

    #[test]
    fn nilpotent_annihilation(a in gaussian_mat(), x in nonzero_gaussian_vec(), t in gaussian_scalar(), k in 3u32..=7) {
        // N = x g* with g* = t (-x2, x1), so g* x = 0
        let n = Mat2::new(qi(), [
            [&x[0] * &(-&(&t * &x[1])), &x[0] * &(&t * &x[0])],
            [&x[1] * &(-&(&t * &x[1])), &x[1] * &(&t * &x[0])],
        ]).unwrap();
        prop_assert!(n.is_nilpotent());
        prop_assert!(kcomm_recursive(&a, &n, k).unwrap().is_zero());
        prop_assert!(kcomm_nilpotent_fast(&a, &n, k).unwrap().is_zero());
    }

    #[test]
    fn rank_one_round_trip(x in nonzero_gaussian_vec(), f in nonzero_gaussian_vec()) {
        let a = Mat2::outer(qi(), &x, &f);
        let fac = a.rank_one_factor().unwrap();
        prop_assert_eq!(fac.to_matrix(qi()), a.clone());
        let one = Scalar::one(FieldKind::GaussianQi);
        let direct = RankOneFactor::new(x, f).unwrap();
        prop_assert_eq!(a.is_idempotent(), direct.pairing() == one);
    }

    #[test]
    fn cayley_hamilton(s in gaussian_mat()) {
        let ch = &(&(&s * &s) - &s.scale(&s.trace())) + &Mat2::scalar(qi(), s.det());
        prop_assert!(ch.is_zero());
    }

    #[test]
    fn spectral_split_reassembles(s in gaussian_mat()) {
        if let Ok(split) = s.spectral_split() {
            prop_assert_eq!(split.reassemble(), s);
            prop_assert!(split.nilpotent.is_nilpotent());
        }
    }

    #[test]
    fn conjugation_involutive_and_multiplicative(a in gaussian_scalar(), b in gaussian_scalar()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn roots_satisfy_their_order(m in 1u32..=16) {
        for field in [q(), qi(), FieldTag::real(), FieldTag::complex()] {
            let roots = roots_of_unity(&field, m).unwrap();
            prop_assert!(field.eq(&roots[0], &field.one()));
            for z in &roots {
                prop_assert!(field.eq(&z.pow(m), &field.one()));
            }
        }
    }

    #[test]
    fn sandwich_vectorization(pairs in prop::collection::vec((gaussian_mat(), gaussian_mat()), 1..4), t in gaussian_mat()) {
        let op = sandwich_operator(&pairs).unwrap();
        prop_assert_eq!(op.apply(&t), sandwich_apply(&pairs, &t));
    }

    #[test]
    fn witness_test_decides_scalarity(z in gaussian_mat(), k in 1u32..=6) {
        prop_assert_eq!(scalar_witness_test(&z, k).unwrap().holds, z.is_scalar());
    }

    #[test]
    fn canonical_form_preserves_brackets(k in 1u32..=6, h in prop::collection::vec(gaussian_scalar(), 6), pick in 0usize..4) {
        let field = qi();
        let roots = roots_of_unity(&field, k + 1).unwrap();
        let lambda = roots[pick % roots.len()].clone();
        let p = probe_set(field);
        let table = HSpec::Table(p.iter().cloned().zip(h).collect());
        let map = generate_map(field, &lambda, &table, &p, k).unwrap();
        for (a, b) in all_pairs(&p) {
            let fa = map.lookup(&a).unwrap();
            let fb = map.lookup(&b).unwrap();
            prop_assert_eq!(kcomm_recursive(fa, fb, k).unwrap(), kcomm_recursive(&a, &b, k).unwrap());
        }
        let d = decompose(&map).unwrap();
        prop_assert_eq!(&d.lambda, &lambda);
        let expected = table.values(field, &p).unwrap();
        for (a, v) in p.iter().zip(&expected) {
            prop_assert_eq!(d.h_of(a), Some(v));
        }
    }

    #[test]
    fn non_scalar_residue_always_rejected(k in 1u32..=4, idx in 0usize..6, shift in gaussian_mat()) {
        prop_assume!(!shift.is_scalar());
        let field = qi();
        let p = probe_set(field);
        let mut map = generate_map(field, &field.one(), &HSpec::Trace, &p, k).unwrap();
        map.entries[idx].1 = &map.entries[idx].1 + &shift;
        let err = decompose(&map).unwrap_err();
        prop_assert_eq!(decompose(&map).unwrap_err(), err.clone());
        if let Error::NotTheoremForm { stage: RejectStage::NonScalarResidue, residue } = &err {
            prop_assert!(!residue.is_scalar());
        }
    }

    #[test]
    fn matrix_json_is_stable(a in gaussian_mat()) {
        let text = to_canonical_string(&mat_to_json(&a));
        let back = mat_from_json(&parse(&text).unwrap(), None).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(to_canonical_string(&mat_to_json(&back)), text);
    }
}

#[test]
fn witness_set_is_the_documented_one() {
    let w = idempotent_witnesses(q());
    assert_eq!(w.len(), 5);
    assert_eq!(w[0], u(q(), 0, 0));
    assert_eq!(w[1], u(q(), 1, 1));
}

#[test]
fn canonical_form_preserves_scalar_and_scalar_plus_nilpotent_classes() {
    let field = qi();
    let i = Scalar::imaginary_unit(field.kind).unwrap();
    let inputs = vec![
        Mat2::scalar(field, int(field, 3)),
        Mat2::scalar(field, Scalar::ratio(field.kind, -1, 2)),
        &Mat2::scalar(field, int(field, 2)) + &u(field, 0, 1),
        Mat2::from_i64(field, [[2, 1], [-1, 0]]),
        Mat2::from_i64(field, [[1, 0], [0, 2]]),
    ];
    let map = generate_map(field, &i, &HSpec::Determinant, &inputs, 3).unwrap();
    for (a, out) in &map.entries {
        assert_eq!(a.is_scalar(), out.is_scalar());
        assert_eq!(
            scalar_plus_nilpotent_spectral(a).verdict.holds,
            scalar_plus_nilpotent_spectral(out).verdict.holds
        );
    }
}

#[test]
fn table_json_round_trip() {
    let field = qi();
    let p = probe_set(field);
    let t = tabulate(field, &Scalar::imaginary_unit(field.kind).unwrap(), &HSpec::Trace, &p, 3, "demo").unwrap();
    let text = to_canonical_string(&table_to_json(&t));
    let back = table_from_json(&parse(&text).unwrap(), None, None).unwrap();
    assert_eq!(back, t);
    assert_eq!(to_canonical_string(&table_to_json(&back)), text);
}
