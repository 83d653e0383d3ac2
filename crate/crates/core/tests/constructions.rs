use proptest::prelude::*;
use quadraform_core::constructions::{
    antidiagonal_form, default_phi, double_extension, double_extension_alpha, heisenberg, heisenberg_current_alpha,
    heisenberg_extended, skew_derivations, sl2, standard_symplectic, witt_split, ExtensionAlphaInputs,
};
use quadraform_core::current::{check_alpha, metric_from_alpha, verify_invariant_metric};
use quadraform_core::exact::rational::int;
use quadraform_core::exact::{unit_vector, RationalMatrix, Subspace};
use quadraform_core::{AlphaMap, AssocAlgebra, BilinearForm, CurrentAlgebra, Error, LieAlgebra, Rational};

fn form(m: RationalMatrix) -> BilinearForm {
    BilinearForm::new(m).unwrap()
}

/// `B_h(x, y) = ω(φ⁻¹x, y)` on `𝔽^{2n}`, computed entry by entry.
fn omega_phi_form(n: usize, phi: &RationalMatrix) -> BilinearForm {
    let omega = standard_symplectic(n);
    let inv = phi.inverse().unwrap();
    form(RationalMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let x = inv.column(i);
        (0..2 * n).map(|k| &x[k] * omega.get(k, j)).sum()
    }))
}

fn matrix_span(ms: &[RationalMatrix]) -> Subspace {
    let n = ms.first().map_or(0, |m| m.rows() * m.cols());
    Subspace::span(n, &ms.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>())
}

#[test]
fn heisenberg_families_validate() {
    for n in 1..=3 {
        let h = heisenberg(n).unwrap();
        assert!(h.validate().is_ok());
        assert_eq!(h.center(), Subspace::span(2 * n + 1, &[unit_vector(2 * n + 1, 2 * n)]));
    }
    for n in 1..=2 {
        let data = heisenberg_extended(n, None).unwrap();
        let g = &data.algebra;
        let dim = 2 * n + 2;
        assert!(g.validate().is_ok());
        assert!(verify_invariant_metric(g, &data.metric).unwrap().all_ok());
        // D(V) ⊆ V and D(ℏ) = 0.
        let ad_d = g.ad_basis(0);
        for j in 1..dim {
            let img = ad_d.column(j);
            assert!(img[0] == int(0) && img[dim - 1] == int(0));
        }
        assert!(ad_d.column(dim - 1).iter().all(|x| *x == int(0)));
        assert!(data.phi.is_invertible());
        let anti = &(&data.phi.transpose() * &data.omega) + &(&data.omega * &data.phi);
        assert!(anti.is_zero());
        assert_eq!(g.center(), Subspace::span(dim, &[unit_vector(dim, dim - 1)]));
    }
}

#[test]
fn extended_heisenberg_metric_entries() {
    let data = heisenberg_extended(1, None).unwrap();
    let expected = RationalMatrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
    assert_eq!(data.metric.matrix(), &expected);
}

#[test]
fn invalid_phi_is_rejected() {
    let singular = RationalMatrix::from_ints(&[&[1, 0], &[0, 0]]);
    assert!(matches!(heisenberg_extended(1, Some(&singular)), Err(Error::InvalidPhi(_))));
    let not_anti = RationalMatrix::identity(2);
    assert!(matches!(heisenberg_extended(1, Some(&not_anti)), Err(Error::InvalidPhi(_))));
    let scaled = RationalMatrix::from_ints(&[&[3, 0], &[0, -3]]);
    let data = heisenberg_extended(1, Some(&scaled)).unwrap();
    assert!(verify_invariant_metric(&data.algebra, &data.metric).unwrap().all_ok());
}

#[test]
fn double_extension_of_symplectic_plane_is_extended_heisenberg() {
    for n in 1..=2 {
        let phi = default_phi(n);
        let b_h = omega_phi_form(n, &phi);
        let ext = double_extension(&LieAlgebra::abelian(2 * n), &b_h, &phi).unwrap();
        let data = heisenberg_extended(n, None).unwrap();
        assert!(ext.result.validate().is_ok());
        assert_eq!(ext.result.structure_constants(), data.algebra.structure_constants());
        assert_eq!(ext.b_ext, data.metric);
    }
}

#[test]
fn trivial_double_extensions() {
    let empty = double_extension(&LieAlgebra::abelian(0), &BilinearForm::zero(0), &RationalMatrix::zeros(0, 0)).unwrap();
    assert_eq!(empty.result.dim(), 2);
    assert!(empty.result.is_abelian());
    assert_eq!(empty.b_ext.matrix(), &RationalMatrix::from_ints(&[&[0, 1], &[1, 0]]));

    let b_h = form(RationalMatrix::from_ints(&[&[1, 0], &[0, 2]]));
    let ext = double_extension(&LieAlgebra::abelian(2), &b_h, &RationalMatrix::zeros(2, 2)).unwrap();
    assert!(ext.result.is_abelian());
    let expected = RationalMatrix::from_ints(&[&[0, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 2, 0], &[1, 0, 0, 0]]);
    assert_eq!(ext.b_ext.matrix(), &expected);
}

#[test]
fn double_extension_errors() {
    let g = sl2();
    let k = g.killing_form();
    assert!(matches!(
        double_extension(&g, &k, &RationalMatrix::identity(3)),
        Err(Error::NotDerivation { .. })
    ));
    let b = form(RationalMatrix::identity(2));
    let d = RationalMatrix::from_ints(&[&[1, 0], &[0, 0]]);
    assert_eq!(double_extension(&LieAlgebra::abelian(2), &b, &d), Err(Error::NotSkew { i: 0, j: 0 }));
}

#[test]
fn double_extension_of_sl2_by_inner_derivation() {
    let g = sl2();
    let k = g.killing_form();
    let d = g.ad_basis(1);
    let ext = double_extension(&g, &k, &d).unwrap();
    assert!(ext.result.validate().is_ok());
    assert!(verify_invariant_metric(&ext.result, &ext.b_ext).unwrap().all_ok());
    assert!(ext.result.center().contains(&unit_vector(5, 4)));
    // Inner derivations give a split extension: c is central but not a bracket.
    assert!(!ext.result.derived_subalgebra().contains(&unit_vector(5, 4)));
}

#[test]
fn skew_derivation_examples() {
    let b = form(RationalMatrix::identity(2));
    let ders = skew_derivations(&LieAlgebra::abelian(2), &b).unwrap();
    assert_eq!(ders.len(), 1);
    assert_eq!(
        matrix_span(&ders),
        matrix_span(&[RationalMatrix::from_ints(&[&[0, 1], &[-1, 0]])])
    );

    let g = sl2();
    let ders = skew_derivations(&g, &g.killing_form()).unwrap();
    assert_eq!(ders.len(), 3);
    let inner: Vec<_> = (0..3).map(|i| g.ad_basis(i)).collect();
    assert_eq!(matrix_span(&ders), matrix_span(&inner));

    assert!(skew_derivations(&LieAlgebra::abelian(0), &BilinearForm::zero(0)).unwrap().is_empty());
}

#[test]
fn witt_split_of_extended_heisenberg() {
    let data = heisenberg_extended(1, None).unwrap();
    let hbar = unit_vector(4, 3);
    let split = witt_split(&data.algebra, &data.metric, &hbar).unwrap();
    assert_eq!(split.d, unit_vector(4, 0));
    assert_eq!(split.h_basis, vec![unit_vector(4, 1), unit_vector(4, 2)]);
    assert_eq!(split.derivation, data.phi);
    assert!(split.c_in_derived);
    assert!(split.round_trip(&data.algebra, &data.metric).unwrap());
    let ext = double_extension(&split.h, &split.b_h, &split.derivation).unwrap();
    assert_eq!(ext.result.structure_constants(), data.algebra.structure_constants());
    assert_eq!(ext.b_ext, data.metric);
}

#[test]
fn witt_split_of_trivial_extension() {
    let b_h = form(RationalMatrix::from_ints(&[&[1, 0], &[0, 2]]));
    let h = LieAlgebra::abelian(2);
    let ext = double_extension(&h, &b_h, &RationalMatrix::zeros(2, 2)).unwrap();
    let c = unit_vector(4, 3);
    let split = witt_split(&ext.result, &ext.b_ext, &c).unwrap();
    assert!(!split.c_in_derived);
    assert_eq!(split.h.structure_constants(), h.structure_constants());
    assert_eq!(split.b_h, b_h);
    assert!(split.derivation.is_zero());
    assert!(split.round_trip(&ext.result, &ext.b_ext).unwrap());

    // Central but not isotropic.
    assert!(matches!(
        witt_split(&ext.result, &ext.b_ext, &unit_vector(4, 1)),
        Err(Error::BadCenterVector(_))
    ));
    assert!(matches!(
        witt_split(&ext.result, &ext.b_ext, &[int(0), int(0), int(0), int(0)]),
        Err(Error::BadCenterVector(_))
    ));
    let data = heisenberg_extended(1, None).unwrap();
    assert!(matches!(
        witt_split(&data.algebra, &data.metric, &unit_vector(4, 1)),
        Err(Error::BadCenterVector(_))
    ));
}

fn plane_extension() -> (RationalMatrix, BilinearForm) {
    let phi = default_phi(1);
    let b_h = omega_phi_form(1, &phi);
    (phi, b_h)
}

#[test]
fn default_extension_alpha_matches_heisenberg_alpha() {
    let (phi, b_h) = plane_extension();
    let ext = double_extension(&LieAlgebra::abelian(2), &b_h, &phi).unwrap();
    let s = AssocAlgebra::truncated_polynomial(2).unwrap();
    let gp = antidiagonal_form(2);
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: None,
        gammap: &gp,
        f: None,
        zeta: None,
    };
    let alpha = double_extension_alpha(&ext, &inputs).unwrap();
    let bbar = metric_from_alpha(&ext.b_ext, &alpha);
    let reference = heisenberg_current_alpha(1, &s, &gp, &BilinearForm::zero(2)).unwrap();
    let data = heisenberg_extended(1, None).unwrap();
    assert_eq!(bbar, metric_from_alpha(&data.metric, &reference));

    let m = 2;
    let (d, c) = (ext.d_index(), ext.c_index());
    for a in 0..m {
        for b in 0..m {
            assert_eq!(bbar.entry(d * m + a, c * m + b), gp.entry(a, b));
            assert_eq!(bbar.entry(c * m + a, c * m + b), &int(0));
        }
    }
    let cur = CurrentAlgebra::build(&ext.result, &s).unwrap();
    assert!(verify_invariant_metric(cur.as_lie(), &bbar).unwrap().all_ok());
}

#[test]
fn extension_alpha_over_the_field() {
    let (phi, b_h) = plane_extension();
    let ext = double_extension(&LieAlgebra::abelian(2), &b_h, &phi).unwrap();
    let s = AssocAlgebra::truncated_polynomial(1).unwrap();
    let gp = form(RationalMatrix::from_ints(&[&[2]]));
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: None,
        gammap: &gp,
        f: None,
        zeta: None,
    };
    let alpha = double_extension_alpha(&ext, &inputs).unwrap();
    assert_eq!(metric_from_alpha(&ext.b_ext, &alpha), ext.b_ext.scale(&int(2)));
}

/// `h = 𝔽² ⊕ 𝔽` (abelian) with `D = φ ⊕ 0`, so `e₃ ∈ C(h) ∩ Ker D`.
fn plane_plus_line() -> (LieAlgebra, BilinearForm, RationalMatrix) {
    let (phi, b2) = plane_extension();
    let b_h = form(RationalMatrix::from_fn(3, 3, |i, j| match (i < 2, j < 2) {
        (true, true) => b2.entry(i, j).clone(),
        (false, false) => int(1),
        _ => int(0),
    }));
    let d = RationalMatrix::from_fn(3, 3, |i, j| if i < 2 && j < 2 { phi.get(i, j).clone() } else { int(0) });
    (LieAlgebra::abelian(3), b_h, d)
}

#[test]
fn extension_alpha_with_nonzero_f() {
    let (h, b_h, d) = plane_plus_line();
    let ext = double_extension(&h, &b_h, &d).unwrap();
    let s = AssocAlgebra::truncated_polynomial(2).unwrap();
    let gp = antidiagonal_form(2);
    let e3 = unit_vector(3, 2);
    let zero = vec![int(0); 3];
    let f = vec![e3.clone(), zero.clone(), zero.clone(), zero];
    let zeta = form(RationalMatrix::from_ints(&[&[1, 2], &[2, 0]]));
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: None,
        gammap: &gp,
        f: Some(&f),
        zeta: Some(&zeta),
    };
    let alpha = double_extension_alpha(&ext, &inputs).unwrap();
    assert!(check_alpha(&ext.result, &ext.b_ext, &s, &alpha).unwrap().all_ok());
    let bbar = metric_from_alpha(&ext.b_ext, &alpha);
    let cur = CurrentAlgebra::build(&ext.result, &s).unwrap();
    assert!(verify_invariant_metric(cur.as_lie(), &bbar).unwrap().all_ok());
    // Cross terms B̄(d⊗1, x⊗1) = B_h(f(1,1), x).
    let m = 2;
    for x in 0..3 {
        let want: Rational = (0..3).map(|l| &e3[l] * b_h.entry(l, x)).sum();
        assert_eq!(bbar.entry(0, (1 + x) * m), &want);
    }
    assert_eq!(bbar.entry(0, 3 * m), &int(1));
    // ζ shows up on d ⊗ d.
    assert_eq!(bbar.entry(0, 1), &int(2));
}

#[test]
fn extension_alpha_rejects_bad_inputs() {
    let (h, b_h, d) = plane_plus_line();
    let ext = double_extension(&h, &b_h, &d).unwrap();
    let s = AssocAlgebra::truncated_polynomial(2).unwrap();
    let gp = antidiagonal_form(2);
    // f(1,1) = e₁ is central but not in Ker D.
    let zero = vec![int(0); 3];
    let f = vec![unit_vector(3, 0), zero.clone(), zero.clone(), zero];
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: None,
        gammap: &gp,
        f: Some(&f),
        zeta: None,
    };
    assert!(matches!(double_extension_alpha(&ext, &inputs), Err(Error::CompatibilityFailed(_))));

    let degenerate = form(RationalMatrix::from_ints(&[&[1, 0], &[0, 0]]));
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: None,
        gammap: &degenerate,
        f: None,
        zeta: None,
    };
    assert!(matches!(double_extension_alpha(&ext, &inputs), Err(Error::CompatibilityFailed(_))));

    // α_h = 2γ′ · Id breaks α_h ∘ D = γ′ D.
    let alpha_h = AlphaMap::scalar_times(&gp.scale(&int(2)), &RationalMatrix::identity(3));
    let inputs = ExtensionAlphaInputs {
        s: &s,
        alpha_h: Some(&alpha_h),
        gammap: &gp,
        f: None,
        zeta: None,
    };
    match double_extension_alpha(&ext, &inputs) {
        Err(Error::CompatibilityFailed(msg)) => assert!(msg.contains("∘ D")),
        other => panic!("{other:?}"),
    }
}

fn skew_plane_derivation() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, -3i64..=3).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn witt_split_inverts_double_extension((a, b) in skew_plane_derivation(), w1 in 1i64..=3, w2 in 1i64..=3) {
        // B_h = diag(w1, w2); D skew for it has the form [[0, w2 t], [-w1 t, 0]].
        let t = a * 2 + b;
        prop_assume!(t != 0);
        let b_h = form(RationalMatrix::from_ints(&[&[w1, 0], &[0, w2]]));
        let d = RationalMatrix::from_ints(&[&[0, w2 * t], &[-w1 * t, 0]]);
        let ext = double_extension(&LieAlgebra::abelian(2), &b_h, &d).unwrap();
        prop_assert!(ext.result.validate().is_ok());
        let split = witt_split(&ext.result, &ext.b_ext, &unit_vector(4, 3)).unwrap();
        prop_assert!(split.round_trip(&ext.result, &ext.b_ext).unwrap());
    }

    #[test]
    fn rebased_witt_split_round_trips(p in prop::collection::vec(-2i64..=2, 16)) {
        let data = heisenberg_extended(1, None).unwrap();
        let p = RationalMatrix::from_fn(4, 4, |i, j| int(p[i * 4 + j]));
        prop_assume!(p.is_invertible());
        let g = data.algebra.change_basis(&p).unwrap();
        let b = data.metric.change_basis(&p);
        // ℏ in the new coordinates.
        let c = p.inverse().unwrap().mul_vec(&unit_vector(4, 3));
        let split = witt_split(&g, &b, &c).unwrap();
        prop_assert!(split.round_trip(&g, &b).unwrap());
        let ext = double_extension(&split.h, &split.b_h, &split.derivation).unwrap();
        prop_assert!(verify_invariant_metric(&ext.result, &ext.b_ext).unwrap().all_ok());
    }

    #[test]
    fn default_extension_alphas_verify(m in 1usize..=3) {
        let (h, b_h, d) = plane_plus_line();
        let ext = double_extension(&h, &b_h, &d).unwrap();
        let s = AssocAlgebra::truncated_polynomial(m).unwrap();
        let gp = antidiagonal_form(m);
        let inputs = ExtensionAlphaInputs { s: &s, alpha_h: None, gammap: &gp, f: None, zeta: None };
        let alpha = double_extension_alpha(&ext, &inputs).unwrap();
        let cur = CurrentAlgebra::build(&ext.result, &s).unwrap();
        let bbar = metric_from_alpha(&ext.b_ext, &alpha);
        prop_assert!(verify_invariant_metric(cur.as_lie(), &bbar).unwrap().all_ok());
    }
}
