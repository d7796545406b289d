use jordan_orbit::dual::*;
use jordan_orbit::linalg;
use jordan_orbit::orbit::dual_from_frame;
use jordan_orbit::spectral::FormVariant;
use jordan_orbit::*;
use nalgebra::{DMatrix, DVector};

fn dual(v: &[f64]) -> DualElement {
    DualElement::new(v.to_vec())
}

/// `(l_a)ᵀ ξ` straight from the structure constants: `Σ_k ξ_k C[a][j][k]`.
fn coadjoint(alg: &AlgebraSpec, a: usize, xi: &DVector<f64>) -> DVector<f64> {
    let d = alg.dim();
    DVector::from_fn(d, |j, _| (0..d).map(|k| xi[k] * alg.constant(a, j, k)).sum())
}

#[test]
fn componentwise_bivector_is_diagonal() {
    let r4 = build_rn(4).unwrap();
    let xi = dual(&[0.5, 2.0, -1.0, 3.0]);
    let r = bivector_at(&r4.spec, &xi).unwrap().matrix;
    assert_eq!(r, DMatrix::from_diagonal(xi.coords()));
}

#[test]
fn cross_product_bivector_is_antisymmetric() {
    let so3 = build_lie(LieName::So3).unwrap();
    let xi = dual(&[0.3, -1.2, 0.7]);
    let r = bivector_at(&so3.spec, &xi).unwrap().matrix;
    assert_eq!(r.clone(), -r.transpose());
    // R_ij = Σ ε_ijk ξ_k
    assert_eq!(r[(0, 1)], 0.7);
    assert_eq!(r[(1, 2)], 0.3);
    assert_eq!(r[(2, 0)], -1.2);
}

#[test]
fn bivector_vanishes_at_the_origin() {
    for e in [build_spin(3).unwrap(), build_lie(LieName::Sl2r).unwrap()] {
        let r = bivector_at(&e.spec, &DualElement::zeros(e.dim())).unwrap().matrix;
        assert!(r.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn sharp_of_basis_covectors_is_the_coadjoint_action() {
    let h = build_hermitian(3, Field::Complex).unwrap();
    let d = h.dim();
    let mut rng = linalg::prng(9);
    let xi = DualElement(linalg::random_vector(&mut rng, d, -1.0, 1.0));
    for a in 0..d {
        let theta = DVector::from_fn(d, |i, _| if i == a { 1.0 } else { 0.0 });
        let v = sharp_at(&h.spec, &xi, &theta).unwrap();
        assert!((v.coords() - coadjoint(&h.spec, a, xi.coords())).amax() < 1e-14);
        let w = dual_action(&h.spec, &Element::basis(d, a), &xi).unwrap();
        assert!((v.coords() - w.coords()).amax() < 1e-14);
    }
}

#[test]
fn componentwise_sharp_is_pointwise_product() {
    let r3 = build_rn(3).unwrap();
    let xi = dual(&[1.0, 2.0, 3.0]);
    let theta = DVector::from_vec(vec![0.5, -1.0, 4.0]);
    let v = sharp_at(&r3.spec, &xi, &theta).unwrap();
    assert_eq!(v.to_vec(), vec![0.5, -2.0, 12.0]);
    let z = sharp_at(&r3.spec, &DualElement::zeros(3), &theta).unwrap();
    assert_eq!(z.to_vec(), vec![0.0; 3]);
}

#[test]
fn dual_vector_field_of_constant_and_linear_functions() {
    let s = build_spin(3).unwrap();
    let xi = dual(&[2.0, 0.5, -0.3, 0.1]);
    let zero = dual_vector_field(&s.spec, &xi, &DVector::zeros(4)).unwrap();
    assert_eq!(zero.to_vec(), vec![0.0; 4]);
    // f_a(ξ) = ξ(e_a) has differential δ_a
    for a in 0..4 {
        let df = DVector::from_fn(4, |i, _| if i == a { 1.0 } else { 0.0 });
        let v = dual_vector_field(&s.spec, &xi, &df).unwrap();
        assert!((v.coords() - coadjoint(&s.spec, a, xi.coords())).amax() < 1e-15);
    }
}

#[test]
fn relative_entropy_direction() {
    let n = 4;
    let r = build_rn(n).unwrap();
    let xi = DVector::from_vec(vec![0.2, 1.5, 0.7, 3.0]);
    let q = DVector::from_vec(vec![0.4, 1.0, 2.0, 0.5]);
    let f = |p: &DVector<f64>| (0..n).map(|i| p[i] * (p[i] / q[i]).ln()).sum::<f64>();
    let analytic = DVector::from_fn(n, |i, _| (xi[i] / q[i]).ln() + 1.0);
    let h = 1e-6;
    let fd = DVector::from_fn(n, |i, _| {
        let mut a = xi.clone();
        let mut b = xi.clone();
        a[i] += h;
        b[i] -= h;
        (f(&a) - f(&b)) / (2.0 * h)
    });
    assert!((&analytic - &fd).amax() < 1e-7);
    let dir = dual_vector_field(&r.spec, &DualElement(xi.clone()), &analytic).unwrap();
    let want = DVector::from_fn(n, |i, _| xi[i] * ((xi[i] / q[i]).ln() + 1.0));
    assert!((dir.coords() - want).amax() < 1e-14);
}

#[test]
fn distribution_ranks() {
    let r5 = build_rn(5).unwrap();
    assert_eq!(distribution_basis(&r5.spec, &dual(&[1.0, 2.0, 0.5, 3.0, 0.1])).unwrap().rank, 5);
    assert_eq!(distribution_basis(&r5.spec, &dual(&[1.0, 0.0, 0.5, 0.0, 0.1])).unwrap().rank, 3);
    assert_eq!(distribution_basis(&r5.spec, &dual(&[0.0; 5])).unwrap().rank, 0);

    let so3 = build_lie(LieName::So3).unwrap();
    assert_eq!(distribution_basis(&so3.spec, &dual(&[0.3, 0.4, -1.0])).unwrap().rank, 2);
    assert_eq!(distribution_basis(&so3.spec, &dual(&[0.0; 3])).unwrap().rank, 0);
}

#[test]
fn structure_algebra_dimensions() {
    let r4 = build_rn(4).unwrap();
    let g = structure_algebra(&r4.spec);
    assert_eq!(g.dim(), 4);
    for a in &g.operators {
        for b in &g.operators {
            assert!(linalg::max_abs(&linalg::commutator(a.matrix(), b.matrix())) < 1e-15);
        }
    }
    let so3 = structure_algebra(&build_lie(LieName::So3).unwrap().spec);
    assert_eq!((so3.dim(), so3.generation_depth), (3, 0));

    let h = structure_algebra(&build_hermitian(2, Field::Real).unwrap().spec);
    assert_eq!(h.dim(), 4);
    assert!(h.closure_residual() < 1e-12);
}

#[test]
fn extended_algebra_brackets_and_representation() {
    let r3 = extended_structure_algebra(&build_rn(3).unwrap().spec).unwrap();
    assert!(r3.inner_derivations.is_empty());
    assert_eq!(r3.dim(), 3);
    assert!(r3.bracket_table.iter().all(|&v| v == 0.0));

    let h = extended_structure_algebra(&build_hermitian(2, Field::Real).unwrap().spec).unwrap();
    assert_eq!(h.dim(), 4);

    for e in verify::jordan_catalog().unwrap() {
        let ext = extended_structure_algebra(&e.spec).unwrap();
        assert!(ext.residuals.transvective, "{}", e.name);
        assert!(ext.residuals.homomorphism < 1e-10, "{}: {:e}", e.name, ext.residuals.homomorphism);
        assert!(ext.residuals.jacobi < 1e-10, "{}", e.name);
        // φ([u_p, u_q]) = [φ(u_p), φ(u_q)] recomputed here from the table
        let n = ext.dim();
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                let lhs = ext.represent(&ext.bracket(p, q));
                let rhs = linalg::commutator(ext.phi[p].matrix(), ext.phi[q].matrix());
                worst = worst.max(linalg::max_abs(&(lhs - rhs)));
            }
        }
        assert!(worst < 1e-10, "{}: {worst:e}", e.name);
    }
}

#[test]
fn lie_algebras_are_always_involutive() {
    for e in [
        build_lie(LieName::So3).unwrap(),
        build_lie(LieName::Sl2r).unwrap(),
        build_lie(LieName::Un(2)).unwrap(),
        build_lie(LieName::Un(3)).unwrap(),
    ] {
        let mut rng = linalg::prng(21);
        for _ in 0..25 {
            let xi = DualElement(linalg::random_vector(&mut rng, e.dim(), -1.0, 1.0));
            assert!(involutivity_test(&e.spec, &xi).unwrap().involutive, "{}", e.name);
        }
    }
}

#[test]
fn involutivity_at_symmetric_matrix_points() {
    let h = build_hermitian(2, Field::Real).unwrap();
    let frame = &h.canonical_frame;
    let bad = dual_from_frame(&h, frame, &[1.0, -1.0], FormVariant::TauHat).unwrap();
    let v = involutivity_test(&h.spec, &bad).unwrap();
    assert_eq!((v.dist_rank, v.bracket_rank, v.involutive), (2, 3, false));
    let good = dual_from_frame(&h, frame, &[2.0, 1.0], FormVariant::TauHat).unwrap();
    let v = involutivity_test(&h.spec, &good).unwrap();
    assert!(v.involutive);
    assert_eq!(v.derivations_in_image, Some(true));
}

#[test]
fn canonical_form_values() {
    let r2 = build_rn(2).unwrap();
    let v = canonical_form_g(&r2.spec, &dual(&[1.0, 2.0]), &Element::basis(2, 0), &Element::basis(2, 0)).unwrap();
    assert_eq!(v.value, 1.0);
    assert!(!v.ambiguous);

    let s = build_spin(4).unwrap();
    let so3 = build_lie(LieName::So3).unwrap();
    let mut rng = linalg::prng(4);
    for _ in 0..20 {
        let xi = DualElement(linalg::random_vector(&mut rng, 5, -1.0, 1.0));
        let a = Element(linalg::random_vector(&mut rng, 5, -1.0, 1.0));
        let b = Element(linalg::random_vector(&mut rng, 5, -1.0, 1.0));
        let gab = canonical_form_g(&s.spec, &xi, &a, &b).unwrap().value;
        let gba = canonical_form_g(&s.spec, &xi, &b, &a).unwrap().value;
        assert!((gab - gba).abs() < 1e-14);
        let pairing = xi.pair(&product(&s.spec, &a, &b).unwrap());
        assert!((gab - pairing).abs() < 1e-14);

        let xi3 = DualElement(linalg::random_vector(&mut rng, 3, -1.0, 1.0));
        let a3 = Element(linalg::random_vector(&mut rng, 3, -1.0, 1.0));
        assert!(canonical_form_g(&so3.spec, &xi3, &a3, &a3).unwrap().value.abs() < 1e-15);
    }
}

#[test]
fn so3_orbit_form_is_nondegenerate_and_rank_is_rotation_invariant() {
    let so3 = build_lie(LieName::So3).unwrap();
    let mut rng = linalg::prng(8);
    for _ in 0..20 {
        let xi = DualElement(linalg::random_vector(&mut rng, 3, -1.0, 1.0));
        let (v, gram) = tangent_gram(&so3.spec, &xi).unwrap();
        assert_eq!(v.ncols(), 2);
        assert!(linalg::max_abs(&(&gram + gram.transpose())) < 1e-12);
        // the area form on the sphere of radius |ξ| in an orthonormal tangent basis
        let det = gram.determinant();
        assert!((det - 1.0 / xi.coords().norm_squared()).abs() < 1e-9 * det.abs().max(1.0));

        // rotation exp(ad_u)
        let u = Element(linalg::random_vector(&mut rng, 3, -1.0, 1.0));
        let g = linalg::expm(&left_multiplication(&so3.spec, &u).unwrap().0);
        let moved = act_dual(&g, &xi).unwrap();
        assert_eq!(distribution_basis(&so3.spec, &moved).unwrap().rank, 2);
    }
}
