use jordan_orbit::builders::Structure;
use jordan_orbit::linalg;
use jordan_orbit::spectral::{self, jordan_frame_check, peirce_decompose, spectral_decompose, tau_matrix, FormVariant};
use jordan_orbit::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[test]
fn one_dimensional_reals() {
    let r1 = build_rn(1).unwrap();
    assert_eq!(r1.dim(), 1);
    assert_eq!(r1.spec.constant(0, 0, 0), 1.0);
    assert_eq!(r1.unit.as_ref().unwrap().to_vec(), vec![1.0]);
}

#[test]
fn componentwise_frame_is_the_standard_basis() {
    let r3 = build_rn(3).unwrap();
    assert_eq!(r3.rank, Some(3));
    for (i, c) in r3.canonical_frame.iter().enumerate() {
        assert_eq!(c, &Element::basis(3, i));
    }
}

#[test]
fn hermitian_dimensions() {
    for n in 1..=5 {
        assert_eq!(build_hermitian(n, Field::Real).unwrap().dim(), n * (n + 1) / 2);
        assert_eq!(build_hermitian(n, Field::Complex).unwrap().dim(), n * n);
        assert_eq!(build_hermitian(n, Field::Quaternion).unwrap().dim(), n * (2 * n - 1));
    }
    let h = build_hermitian(2, Field::Real).unwrap();
    assert_eq!(h.rank, Some(2));
    assert_eq!(h.canonical_frame[0].to_vec(), vec![1.0, 0.0, 0.0]);
    assert_eq!(h.canonical_frame[1].to_vec(), vec![0.0, 1.0, 0.0]);
}

#[test]
fn off_diagonal_peirce_space_dimension_by_field() {
    // one real direction per real unit of the field: 1, 2, 4
    for (field, want) in [(Field::Real, 1), (Field::Complex, 2), (Field::Quaternion, 4)] {
        let h = build_hermitian(2, field).unwrap();
        let p = peirce_decompose(&h, &h.canonical_frame, FormVariant::TauHat).unwrap();
        assert_eq!(p.block(0, 1).unwrap().basis.len(), want, "{}", h.name);
        assert_eq!(p.block(0, 0).unwrap().basis.len(), 1);
    }
}

#[test]
fn quaternion_off_diagonal_block_matches_explicit_realification() {
    // {z E12 + z̄ E21 : z ∈ ℍ} inside the complex 4×4 embedding, one matrix per
    // quaternion unit, built independently of the library's basis.
    let h = build_hermitian(2, Field::Quaternion).unwrap();
    let basis = match &h.structure {
        Structure::Hermitian(b) => b.clone(),
        _ => unreachable!(),
    };
    let n = 2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let quat = |a: Complex64, b: Complex64| {
        // a + b j ↦ [[a, b], [−b̄, ā]]
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = a;
        m[(0, 1)] = b;
        m[(1, 0)] = -b.conj();
        m[(1, 1)] = a.conj();
        m
    };
    let units = [
        quat(c(1.0, 0.0), c(0.0, 0.0)),
        quat(c(0.0, 1.0), c(0.0, 0.0)),
        quat(c(0.0, 0.0), c(1.0, 0.0)),
        quat(c(0.0, 0.0), c(0.0, 1.0)),
    ];
    let p = peirce_decompose(&h, &h.canonical_frame, FormVariant::TauHat).unwrap();
    let block: Vec<DVector<f64>> = p.block(0, 1).unwrap().basis.iter().map(|e| e.coords().clone()).collect();
    for q in &units {
        let mut m = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        // quaternion q at (0,1) and its conjugate at (1,0), complex layout
        // rows/cols (i, n+i)
        let qc = q.adjoint();
        for (r, cidx) in [(0usize, 1usize)] {
            for a in 0..2 {
                for b in 0..2 {
                    m[(r + a * n, cidx + b * n)] = q[(a, b)];
                    m[(cidx + a * n, r + b * n)] = qc[(a, b)];
                }
            }
        }
        assert!((&m - m.adjoint()).iter().all(|z| z.norm() < 1e-15));
        let coords = basis.from_matrix(&m);
        assert!((basis.to_matrix(&coords) - &m).iter().all(|z| z.norm() < 1e-14));
        assert!(linalg::distance_to_span(&block, &coords) < 1e-12);
    }
}

#[test]
fn spin_one_is_the_plane_with_componentwise_product() {
    let s1 = build_spin(1).unwrap();
    assert!(check_axioms(&s1.spec).associative);
    let r2 = build_rn(2).unwrap();
    let phi = |v: &Element| Element::new(vec![v.0[0] + v.0[1], v.0[0] - v.0[1]]);
    let mut rng = linalg::prng(3);
    for _ in 0..20 {
        let x = Element(linalg::random_vector(&mut rng, 2, -2.0, 2.0));
        let y = Element(linalg::random_vector(&mut rng, 2, -2.0, 2.0));
        let lhs = phi(&product(&s1.spec, &x, &y).unwrap());
        let rhs = product(&r2.spec, &phi(&x), &phi(&y)).unwrap();
        assert!((lhs.coords() - rhs.coords()).amax() < 1e-14);
    }
}

#[test]
fn spin_frame_elements_are_idempotent() {
    let s3 = build_spin(3).unwrap();
    for c in &s3.canonical_frame {
        let sq = product(&s3.spec, c, c).unwrap();
        assert!((sq.coords() - c.coords()).amax() < 1e-15);
    }
    let s5 = build_spin(5).unwrap();
    let check = jordan_frame_check(&s5, &s5.canonical_frame);
    assert!(check.passed, "{:?}", check.failures);
}

#[test]
fn every_canonical_frame_is_complete_and_orthogonal() {
    for e in jordan_orbit::verify::jordan_catalog().unwrap() {
        let check = jordan_frame_check(&e, &e.canonical_frame);
        assert!(check.passed, "{}: {:?}", e.name, check.failures);
        assert_eq!(e.rank, Some(e.canonical_frame.len()));
    }
}

#[test]
fn direct_sums() {
    let two = build_direct_sum(&[build_rn(1).unwrap(), build_rn(1).unwrap()]).unwrap();
    assert_eq!(two.spec.constants(), build_rn(2).unwrap().spec.constants());

    let s = build_direct_sum(&[build_hermitian(2, Field::Real).unwrap(), build_rn(2).unwrap()]).unwrap();
    assert_eq!(s.dim(), 5);
    assert_eq!(s.rank, Some(4));
    assert_eq!(spectral::jordan_rank(&s).unwrap(), 4);

    // trace form from the definition: T_ij = tr l_{e_i • e_j}
    let d = s.dim();
    let t = DMatrix::from_fn(d, d, |i, j| {
        let p = product(&s.spec, &Element::basis(d, i), &Element::basis(d, j)).unwrap();
        left_multiplication(&s.spec, &p).unwrap().0.trace()
    });
    for i in 0..3 {
        for j in 3..5 {
            assert_eq!(t[(i, j)], 0.0);
            assert_eq!(t[(j, i)], 0.0);
        }
    }
    assert!((tau_matrix(&s) - t).amax() < 1e-14);

    assert!(matches!(
        build_direct_sum(&[build_rn(2).unwrap(), build_lie(LieName::So3).unwrap()]),
        Err(Error::KindMismatch { .. })
    ));
}

#[test]
fn cross_product_algebra() {
    let so3 = build_lie(LieName::So3).unwrap();
    assert_eq!(so3.dim(), 3);
    let eps = |i: usize, j: usize, k: usize| -> f64 {
        if i == j || j == k || i == k {
            0.0
        } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
            1.0
        } else {
            -1.0
        }
    };
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(so3.spec.constant(i, j, k), eps(i, j, k));
            }
        }
    }
}

#[test]
fn sl2_killing_form_is_indefinite() {
    let sl = build_lie(LieName::Sl2r).unwrap();
    let d = sl.dim();
    // ad_i[k][j] = C[i][j][k]; K_ij = tr(ad_i ad_j)
    let ad: Vec<DMatrix<f64>> = (0..d)
        .map(|i| DMatrix::from_fn(d, d, |k, j| sl.spec.constant(i, j, k)))
        .collect();
    let k = DMatrix::from_fn(d, d, |i, j| (&ad[i] * &ad[j]).trace());
    let ev = k.symmetric_eigen().eigenvalues;
    let pos = ev.iter().filter(|&&v| v > 1e-9).count();
    let neg = ev.iter().filter(|&&v| v < -1e-9).count();
    assert!((pos, neg) == (1, 2) || (pos, neg) == (2, 1), "{ev}");
}

#[test]
fn hermitian_spectral_coefficients_are_matrix_eigenvalues() {
    for field in [Field::Real, Field::Complex, Field::Quaternion] {
        for n in 1..=4 {
            let h = build_hermitian(n, field).unwrap();
            let basis = match &h.structure {
                Structure::Hermitian(b) => b.clone(),
                _ => unreachable!(),
            };
            let mut rng = linalg::prng(n as u64 * 17);
            let x = linalg::random_vector(&mut rng, h.dim(), -1.0, 1.0);
            let m = basis.to_matrix(&x);
            let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(|a, b| b.total_cmp(a));
            if field == Field::Quaternion {
                // the complex embedding doubles every eigenvalue
                ev = ev.into_iter().step_by(2).collect();
            }
            let sd = spectral_decompose(&h, &Element(x)).unwrap();
            assert_eq!(sd.coefficients.len(), n);
            for (a, b) in sd.coefficients.iter().zip(&ev) {
                assert!((a - b).abs() < 1e-8, "{}: {a} vs {b}", h.name);
            }
        }
    }
}

#[test]
fn spin_trace_form_is_a_multiple_of_the_inner_product() {
    for n in 1..=6 {
        let s = build_spin(n).unwrap();
        let d = n + 1;
        // tr l_1 = n + 1 and tr l_{e_k} = 0
        let traces: Vec<f64> = (0..d)
            .map(|i| left_multiplication(&s.spec, &Element::basis(d, i)).unwrap().0.trace())
            .collect();
        assert_eq!(traces[0], d as f64);
        let tau = tau_matrix(&s);
        let tau_hat = s.tau_hat.as_ref().unwrap();
        assert!((tau - tau_hat * d as f64).amax() < 1e-14);
        assert_eq!(spectral::tau_ratio(&s), Some(d as f64));
    }
}

#[test]
fn catalog_sources_parse() {
    for (src, dim) in [
        ("rn:4", 4),
        ("herm:3", 6),
        ("herm:2:complex", 4),
        ("herm:2:quaternion", 6),
        ("spin:5", 6),
        ("lie:so3", 3),
        ("lie:sl2r", 3),
        ("lie:un:2", 4),
        ("sum:herm:2:real+rn:2", 5),
    ] {
        assert_eq!(from_source(src).unwrap().dim(), dim, "{src}");
    }
    for bad in ["rn:x", "herm:2:octonion", "lie:e8", "spin:0"] {
        assert!(from_source(bad).is_err(), "{bad}");
    }
}

#[test]
fn custom_file_metadata_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("r2.json");
    std::fs::write(
        &good,
        r#"{"dim": 2, "kind": "jordan", "basis": ["a", "b"],
            "constants": [[0, 0, 0, 1.0], [1, 1, 1, 1.0]],
            "rank": 2, "unit": [1.0, 1.0], "frame": [[1.0, 0.0], [0.0, 1.0]]}"#,
    )
    .unwrap();
    let e = load_custom(&good).unwrap();
    assert_eq!(e.rank, Some(2));
    assert_eq!(from_source(good.to_str().unwrap()).unwrap().dim(), 2);

    let bad_unit = r#"{"dim": 2, "kind": "jordan", "basis": ["a", "b"],
        "constants": [[0, 0, 0, 1.0], [1, 1, 1, 1.0]], "unit": [1.0, 0.0]}"#;
    assert!(builders::load_custom_str(bad_unit).is_err());
    let bad_rank = r#"{"dim": 2, "kind": "jordan", "basis": ["a", "b"],
        "constants": [[0, 0, 0, 1.0], [1, 1, 1, 1.0]], "rank": 1}"#;
    assert!(builders::load_custom_str(bad_rank).is_err());
    let bad_frame = r#"{"dim": 2, "kind": "jordan", "basis": ["a", "b"],
        "constants": [[0, 0, 0, 1.0], [1, 1, 1, 1.0]], "frame": [[1.0, 1.0]]}"#;
    assert!(matches!(builders::load_custom_str(bad_frame), Err(Error::InvalidFrame(_))));
}
