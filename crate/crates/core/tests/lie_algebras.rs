use proptest::prelude::*;
use quadraform_core::constructions::{heisenberg, heisenberg_extended, sl2};
use quadraform_core::exact::rational::int;
use quadraform_core::exact::search::{grid_bound, SearchLimits, SearchOutcome};
use quadraform_core::exact::{adjoint_wrt_form, unit_vector, RationalMatrix, Subspace};
use quadraform_core::lie::{find_nondegenerate, is_self_adjoint};
use quadraform_core::{BilinearForm, Indecomposability, LieAlgebra, Rational, Validation};

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn flat(m: &RationalMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

fn matrix_span(ms: &[RationalMatrix]) -> Subspace {
    let n = ms.first().map_or(0, |m| m.rows() * m.cols());
    Subspace::span(n, &ms.iter().map(flat).collect::<Vec<_>>())
}

#[test]
fn validate_examples() {
    assert_eq!(LieAlgebra::abelian(3).validate(), Validation::Ok);
    let solvable = LieAlgebra::from_brackets(vec!["x".into(), "y".into()], &[(0, 1, 0, int(1))]).unwrap();
    assert!(solvable.validate().is_ok());

    let mut c = vec![int(0); 8];
    c[2] = int(1); // c[0][1][0]
    c[4] = int(1); // c[1][0][0]
    let bad = LieAlgebra::new(vec!["a".into(), "b".into()], c).unwrap();
    assert_eq!(
        bad.validate(),
        Validation::Antisymmetry {
            i: 0,
            j: 1,
            k: 0,
            residue: int(2)
        }
    );
}

#[test]
fn jacobi_violation_is_reported() {
    // Antisymmetric but [[x,y],z] + cyclic ≠ 0.
    let bad = LieAlgebra::from_brackets(
        vec!["x".into(), "y".into(), "z".into()],
        &[(0, 1, 2, int(1)), (1, 2, 1, int(1))],
    )
    .unwrap();
    assert!(matches!(bad.validate(), Validation::Jacobi { .. }));
}

#[test]
fn brackets_of_examples() {
    let h1 = heisenberg(1).unwrap();
    assert_eq!(h1.bracket(&ints(&[1, 0, 0]), &ints(&[0, 1, 0])).unwrap(), ints(&[0, 0, 1]));
    let g = sl2();
    assert_eq!(g.bracket(&ints(&[1, 0, 0]), &ints(&[0, 0, 1])).unwrap(), ints(&[0, 1, 0]));
    let x = ints(&[3, -1, 2]);
    assert_eq!(g.bracket(&x, &x).unwrap(), ints(&[0, 0, 0]));
    assert!(g.bracket(&ints(&[1, 0]), &x).is_err());
}

#[test]
fn center_and_derived() {
    let ab = LieAlgebra::abelian(3);
    assert!(ab.derived_subalgebra().is_zero());
    assert_eq!(ab.center(), Subspace::full(3));

    let hd = heisenberg_extended(1, None).unwrap().algebra;
    assert_eq!(hd.center(), Subspace::span(4, &[unit_vector(4, 3)]));
    assert_eq!(
        hd.derived_subalgebra(),
        Subspace::span(4, &[unit_vector(4, 1), unit_vector(4, 2), unit_vector(4, 3)])
    );
}

#[test]
fn centroid_examples() {
    assert_eq!(LieAlgebra::abelian(2).centroid_basis().len(), 4);
    let g = sl2();
    let gamma = g.centroid_basis();
    assert_eq!(matrix_span(&gamma), matrix_span(&[RationalMatrix::identity(3)]));

    let data = heisenberg_extended(1, None).unwrap();
    let gamma = data.algebra.centroid_basis();
    assert_eq!(gamma.len(), 2);
    let n = &data.nilpotent;
    assert_eq!(n.mul_vec(&unit_vector(4, 0)), unit_vector(4, 3));
    assert!((n * n).is_zero());
    assert_eq!(
        matrix_span(&gamma),
        matrix_span(&[RationalMatrix::identity(4), n.clone()])
    );
}

#[test]
fn killing_form_of_sl2() {
    let k = sl2().killing_form();
    // Classical values on (e, h, f).
    let expected = RationalMatrix::from_ints(&[&[0, 0, 4], &[0, 8, 0], &[4, 0, 0]]);
    assert_eq!(k.matrix(), &expected);
    let forms = sl2().invariant_symmetric_forms();
    assert_eq!(forms.len(), 1);
    assert_eq!(matrix_span(&[forms[0].matrix().clone()]), matrix_span(&[expected]));
    let found = find_nondegenerate(&forms, 3, SearchLimits::default());
    assert!(found.found().unwrap().is_nondegenerate());
}

#[test]
fn heisenberg_has_no_invariant_metric() {
    for n in 1..=1 {
        let h = heisenberg(n).unwrap();
        let forms = h.invariant_symmetric_forms();
        let out = find_nondegenerate(&forms, h.dim(), SearchLimits::default());
        match out {
            SearchOutcome::Exhausted {
                certified,
                searched_k,
                proven_bound,
                ..
            } => {
                assert!(certified);
                assert_eq!(searched_k, proven_bound);
                assert_eq!(proven_bound, grid_bound(h.dim()));
            }
            SearchOutcome::Found { .. } => panic!("h_{n} has no invariant metric"),
        }
    }
}

#[test]
fn hbar_is_in_every_invariant_radical() {
    for n in 1..=3 {
        let h = heisenberg(n).unwrap();
        let hbar = unit_vector(h.dim(), 2 * n);
        for f in h.invariant_symmetric_forms() {
            assert!(f.left_radical().contains(&hbar));
        }
    }
}

#[test]
fn find_nondegenerate_examples() {
    let one = BilinearForm::new(RationalMatrix::from_ints(&[&[1]])).unwrap();
    let out = find_nondegenerate(std::slice::from_ref(&one), 1, SearchLimits::default());
    assert_eq!(out.found(), Some(&one));
    let d1 = BilinearForm::new(RationalMatrix::from_ints(&[&[1, 0], &[0, 0]])).unwrap();
    let d2 = BilinearForm::new(RationalMatrix::from_ints(&[&[0, 0], &[0, 1]])).unwrap();
    match find_nondegenerate(&[d1, d2], 2, SearchLimits::default()) {
        SearchOutcome::Found { k, value, .. } => {
            assert_eq!(k, 1);
            assert_eq!(value.matrix(), &RationalMatrix::identity(2));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn nilpotent_and_perfect() {
    let ab = LieAlgebra::abelian(2);
    assert!(ab.is_nilpotent() && !ab.is_perfect());
    assert!(heisenberg(1).unwrap().is_nilpotent());
    assert!(!heisenberg_extended(1, None).unwrap().algebra.is_nilpotent());
    let g = sl2();
    assert!(!g.is_nilpotent() && g.is_perfect());
}

#[test]
fn symmetric_centroid_examples() {
    let g = sl2();
    let syms = g.symmetric_centroids(&g.killing_form()).unwrap();
    assert_eq!(matrix_span(&syms), matrix_span(&[RationalMatrix::identity(3)]));

    let data = heisenberg_extended(1, None).unwrap();
    let syms = data.algebra.symmetric_centroids(&data.metric).unwrap();
    assert_eq!(
        matrix_span(&syms),
        matrix_span(&[RationalMatrix::identity(4), data.nilpotent.clone()])
    );
    let star = adjoint_wrt_form(&data.nilpotent, &data.metric).unwrap();
    assert_eq!(star, data.nilpotent);

    let ab = LieAlgebra::abelian(1);
    let b = BilinearForm::new(RationalMatrix::identity(1)).unwrap();
    assert_eq!(ab.symmetric_centroids(&b).unwrap(), vec![RationalMatrix::identity(1)]);
    assert!(g.symmetric_centroids(&BilinearForm::zero(3)).is_err());
}

#[test]
fn indecomposability_examples() {
    let g = sl2();
    let k = g.killing_form();
    let sum = g.direct_sum(&g);
    let block = RationalMatrix::from_fn(6, 6, |i, j| {
        if i < 3 && j < 3 {
            k.entry(i, j).clone()
        } else if i >= 3 && j >= 3 {
            k.entry(i - 3, j - 3).clone()
        } else {
            int(0)
        }
    });
    let b = BilinearForm::new(block).unwrap();
    assert!(sum.is_invariant_metric(&b));
    match sum.is_indecomposable(&b).unwrap() {
        Indecomposability::Splits { idempotent } => {
            let first = RationalMatrix::from_fn(6, 6, |i, j| if i == j && i < 3 { int(1) } else { int(0) });
            assert_eq!(idempotent, first);
            assert_eq!(&idempotent * &idempotent, idempotent);
            assert!(sum.is_centroid(&idempotent));
            assert!(is_self_adjoint(&idempotent, &b));
        }
        other => panic!("{other:?}"),
    }

    let data = heisenberg_extended(1, None).unwrap();
    assert_eq!(
        data.algebra.is_indecomposable(&data.metric).unwrap(),
        Indecomposability::Indecomposable
    );
    let b1 = BilinearForm::new(RationalMatrix::identity(1)).unwrap();
    assert_eq!(
        LieAlgebra::abelian(1).is_indecomposable(&b1).unwrap(),
        Indecomposability::Indecomposable
    );
    assert_eq!(g.is_indecomposable(&k).unwrap(), Indecomposability::Indecomposable);
}

#[test]
fn nilpotent_annihilator_of_extended_heisenberg() {
    let data = heisenberg_extended(1, None).unwrap();
    let a = data.algebra.nilpotent_annihilator(&data.metric).unwrap();
    assert_eq!(a, Subspace::kernel(&data.nilpotent));
    assert!(a.contains(&unit_vector(4, 3)));
}

fn invertible_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| RationalMatrix::from_fn(n, n, |i, j| int(v[i * n + j])))
        .prop_filter("invertible", |m| m.is_invertible())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn change_of_basis_preserves_axioms_and_killing(p in invertible_matrix(3)) {
        let g = sl2();
        let h = g.change_basis(&p).unwrap();
        prop_assert!(h.validate().is_ok());
        prop_assert_eq!(h.killing_form(), g.killing_form().change_basis(&p));
        prop_assert!(h.is_invariant_metric(&h.killing_form()));
    }

    #[test]
    fn centroid_and_forms_satisfy_their_equations(p in invertible_matrix(4)) {
        let g = heisenberg_extended(1, None).unwrap().algebra.change_basis(&p).unwrap();
        let gamma = g.centroid_basis();
        for t in &gamma {
            prop_assert!(g.is_centroid(t));
        }
        let derived = g.derived_subalgebra();
        for t in &gamma {
            for s in &gamma {
                for x in derived.basis() {
                    prop_assert_eq!((t * s).mul_vec(x), (s * t).mul_vec(x));
                }
            }
        }
        for f in g.invariant_symmetric_forms() {
            prop_assert!(f.is_symmetric());
            prop_assert!(g.is_invariant(&f));
        }
    }

    #[test]
    fn found_forms_lie_in_the_span(p in invertible_matrix(3)) {
        let g = sl2().change_basis(&p).unwrap();
        let forms = g.invariant_symmetric_forms();
        let found = find_nondegenerate(&forms, 3, SearchLimits::default());
        let f = found.found().unwrap();
        prop_assert!(f.is_nondegenerate());
        let span = matrix_span(&forms.iter().map(|f| f.matrix().clone()).collect::<Vec<_>>());
        prop_assert!(span.contains(&flat(f.matrix())));
    }

    #[test]
    fn splitting_idempotents_are_valid(p in invertible_matrix(3)) {
        let g = sl2().change_basis(&p).unwrap();
        let sum = g.direct_sum(&g);
        let k = g.killing_form();
        let b = BilinearForm::new(RationalMatrix::from_fn(6, 6, |i, j| {
            if i < 3 && j < 3 { k.entry(i, j).clone() }
            else if i >= 3 && j >= 3 { k.entry(i - 3, j - 3).clone() * int(2) }
            else { int(0) }
        })).unwrap();
        match sum.is_indecomposable(&b).unwrap() {
            Indecomposability::Splits { idempotent: e } => {
                prop_assert_eq!(&e * &e, e.clone());
                prop_assert!(!e.is_zero());
                prop_assert!(e != RationalMatrix::identity(6));
                prop_assert!(sum.is_centroid(&e));
                prop_assert!(is_self_adjoint(&e, &b));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
