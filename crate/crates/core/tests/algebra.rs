use std::f64::consts::FRAC_1_SQRT_2;

use jordan_orbit::algebra::find_unit;
use jordan_orbit::builders::load_custom_str;
use jordan_orbit::linalg;
use jordan_orbit::*;
use nalgebra::{DMatrix, DVector, Matrix2};

fn el(v: &[f64]) -> Element {
    Element::new(v.to_vec())
}

/// Coordinates of a real symmetric 2×2 matrix in the basis E11, E22, (E12+E21)/√2.
fn sym2_coords(m: &Matrix2<f64>) -> DVector<f64> {
    DVector::from_vec(vec![m[(0, 0)], m[(1, 1)], m[(0, 1)] * 2.0_f64.sqrt()])
}

fn sym2_matrix(c: &DVector<f64>) -> Matrix2<f64> {
    let o = c[2] * FRAC_1_SQRT_2;
    Matrix2::new(c[0], o, o, c[1])
}

#[test]
fn componentwise_product() {
    let r3 = build_rn(3).unwrap();
    let p = product(&r3.spec, &el(&[1.0, 2.0, 3.0]), &el(&[4.0, 5.0, 6.0])).unwrap();
    assert_eq!(p.to_vec(), vec![4.0, 10.0, 18.0]);
}

#[test]
fn symmetric_matrices_anticommute_to_zero() {
    let h = build_hermitian(2, Field::Real).unwrap();
    let a = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    let b = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let oracle = (a * b + b * a) * 0.5;
    let p = product(&h.spec, &Element(sym2_coords(&a)), &Element(sym2_coords(&b))).unwrap();
    assert!((p.coords() - sym2_coords(&oracle)).amax() < 1e-15);
    assert!(p.norm() < 1e-15);
}

#[test]
fn symmetric_matrix_product_matches_matrix_arithmetic() {
    let h = build_hermitian(2, Field::Real).unwrap();
    let mut rng = linalg::prng(11);
    for _ in 0..20 {
        let x = linalg::random_vector(&mut rng, 3, -2.0, 2.0);
        let y = linalg::random_vector(&mut rng, 3, -2.0, 2.0);
        let (a, b) = (sym2_matrix(&x), sym2_matrix(&y));
        let oracle = sym2_coords(&((a * b + b * a) * 0.5));
        let p = product(&h.spec, &Element(x), &Element(y)).unwrap();
        assert!((p.coords() - oracle).amax() < 1e-14);
    }
}

#[test]
fn spin_vectors_multiply_to_unit() {
    let s = build_spin(2).unwrap();
    let x = el(&[0.0, 1.0, 0.0]);
    let p = product(&s.spec, &x, &x).unwrap();
    assert_eq!(p.to_vec(), vec![1.0, 0.0, 0.0]);
}

#[test]
fn left_multiplication_matrices() {
    let r4 = build_rn(4).unwrap();
    for i in 0..4 {
        let l = left_multiplication(&r4.spec, &Element::basis(4, i)).unwrap();
        let mut want = DMatrix::zeros(4, 4);
        want[(i, i)] = 1.0;
        assert_eq!(l.0, want);
    }
    let s = build_spin(3).unwrap();
    let l = left_multiplication(&s.spec, &Element::basis(4, 0)).unwrap();
    assert_eq!(l.0, DMatrix::identity(4, 4));
}

#[test]
fn left_multiplication_spectrum_on_peirce_spaces() {
    let h = build_hermitian(2, Field::Real).unwrap();
    let l = left_multiplication(&h.spec, &el(&[1.0, -1.0, 0.0])).unwrap();
    // symmetric in an orthonormal basis, so real eigenvalues
    let mut ev: Vec<f64> = l.0.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    for (a, b) in ev.iter().zip([-1.0, 0.0, 1.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    // E11, E22 and the off-diagonal direction are the eigenvectors
    for (k, want) in [(0, 1.0), (1, -1.0), (2, 0.0)] {
        let v = l.apply(&Element::basis(3, k));
        assert!((v.coords() - Element::basis(3, k).coords() * want).amax() < 1e-15);
    }
}

#[test]
fn axiom_flags_of_builders() {
    let r = check_axioms(&build_rn(3).unwrap().spec);
    assert!(r.commutative && r.jordan_identity && r.associative);
    let (u, _) = find_unit(&build_rn(3).unwrap().spec);
    assert_eq!(u.unwrap().to_vec(), vec![1.0, 1.0, 1.0]);

    let so3 = build_lie(LieName::So3).unwrap();
    let r = check_axioms(&so3.spec);
    assert!(r.anticommutative && r.jacobi && !r.commutative);
    assert!(r.unit.is_none());

    let h = build_hermitian(2, Field::Real).unwrap();
    let r = check_axioms(&h.spec);
    assert!(r.commutative && r.jordan_identity && !r.associative);

    let r = check_axioms(&build_rn(4).unwrap().spec);
    assert!(r.commutative && r.associative && r.jordan_identity);
}

#[test]
fn symmetric_matrices_have_a_non_associative_basis_triple() {
    let h = build_hermitian(2, Field::Real).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (a, b, c) = (Element::basis(3, i), Element::basis(3, j), Element::basis(3, k));
                let left = product(&h.spec, &product(&h.spec, &a, &b).unwrap(), &c).unwrap();
                let right = product(&h.spec, &a, &product(&h.spec, &b, &c).unwrap()).unwrap();
                worst = worst.max((left.coords() - right.coords()).amax());
            }
        }
    }
    assert!(worst > 0.1);
}

#[test]
fn commutators_of_multiplications_are_derivations() {
    for entry in [
        build_hermitian(3, Field::Complex).unwrap(),
        build_spin(4).unwrap(),
        build_hermitian(2, Field::Quaternion).unwrap(),
    ] {
        let mut rng = linalg::prng(5);
        let d = entry.dim();
        let lx = left_multiplication(&entry.spec, &Element(linalg::random_vector(&mut rng, d, -1.0, 1.0))).unwrap();
        let ly = left_multiplication(&entry.spec, &Element(linalg::random_vector(&mut rng, d, -1.0, 1.0))).unwrap();
        let dop = LinearOperator(linalg::commutator(&lx.0, &ly.0));
        assert!(is_derivation(&entry.spec, &dop).unwrap().holds, "{}", entry.name);
    }
}

#[test]
fn identity_and_rotations_are_automorphisms() {
    let h = build_hermitian(2, Field::Real).unwrap();
    assert!(is_automorphism(&h.spec, &LinearOperator::identity(3)).unwrap().holds);

    let t: f64 = 0.37;
    let q = Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    let cols: Vec<DVector<f64>> = (0..3)
        .map(|k| {
            let m = sym2_matrix(&DVector::from_fn(3, |i, _| if i == k { 1.0 } else { 0.0 }));
            sym2_coords(&(q * m * q.transpose()))
        })
        .collect();
    let g = LinearOperator(DMatrix::from_columns(&cols));
    assert!(is_automorphism(&h.spec, &g).unwrap().holds);

    // a non-orthogonal rescaling is not
    let mut s = DMatrix::identity(3, 3);
    s[(0, 0)] = 2.0;
    assert!(!is_automorphism(&h.spec, &LinearOperator(s)).unwrap().holds);
}

#[test]
fn custom_file_with_non_commutative_jordan_table_is_rejected() {
    let text = r#"{
        "dim": 2,
        "kind": "jordan",
        "basis": ["a", "b"],
        "constants": [[0, 0, 0, 1.0], [0, 1, 1, 1.0], [1, 0, 1, 0.5]]
    }"#;
    let err = load_custom_str(text).unwrap_err();
    assert!(matches!(err, Error::AxiomMismatch(_)), "{err}");
}

#[test]
fn custom_file_roundtrip() {
    let h = build_spin(2).unwrap();
    let file = AlgebraFile::from_spec(&h.spec);
    let text = serde_json::to_string(&file).unwrap();
    let back = load_custom_str(&text).unwrap();
    assert_eq!(back.spec.constants(), h.spec.constants());
    assert_eq!(back.kind(), AlgebraKind::Jordan);
    let u = back.unit.unwrap();
    assert!((u.coords() - Element::basis(3, 0).coords()).amax() < 1e-12);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(load_custom_str("{\"dim\": 2}").is_err());
    let r3 = build_rn(3).unwrap();
    assert!(matches!(
        product(&r3.spec, &el(&[1.0, 2.0]), &el(&[1.0, 2.0, 3.0])),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(from_source("nope:3").is_err());
    assert!(build_rn(0).is_err());
}
