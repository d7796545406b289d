//! Small dense linear-algebra helpers shared by the geometric modules.
//!
//! Everything here works on `nalgebra` dynamic matrices. Rank decisions follow
//! one rule throughout the crate: a singular value counts as zero when it is
//! below `tol * max(1, sigma_max) * n`, where `n` is the ambient dimension.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic PRNG used by every randomized routine in the crate.
pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed for trial `index` of a sweep.
pub fn trial_seed(root: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = root ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_vector(rng: &mut Prng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(lo..hi))
}

/// Threshold below which a singular value is treated as zero.
pub fn rank_threshold(tol: f64, sigma_max: f64, n: usize) -> f64 {
    tol * sigma_max.max(1.0) * n.max(1) as f64
}

/// Singular values of `m` (unordered).
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let thr = rank_threshold(tol, smax, m.nrows());
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = rank_threshold(tol, smax, n);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > thr)
        .collect();
    DMatrix::from_fn(n, keep.len(), |r, c| u[(r, keep[c])])
}

/// Orthonormal basis (as columns) of the null space of `m`, using an absolute
/// singular-value threshold.
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad wide matrices so the SVD yields a full set of right singular vectors.
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    DMatrix::from_fn(n, keep.len(), |r, c| vt[(keep[c], r)])
}

/// Moore-Penrose pseudo-inverse with the crate-wide rank rule.
pub fn pseudo_inverse(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return DMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u");
    let vt = svd.v_t.as_ref().expect("v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = rank_threshold(tol, smax, rows);
    let mut out = DMatrix::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > thr {
            let uk = u.column(k);
            let vk = vt.row(k).transpose();
            out += (vk * uk.transpose()) / s;
        }
    }
    out
}

/// Least-squares solution of `m x = b` via the pseudo-inverse, plus the
/// residual norm `|m x - b|`.
pub fn least_squares(m: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> (DVector<f64>, f64) {
    let x = pseudo_inverse(m, tol) * b;
    let r = (m * &x - b).norm();
    (x, r)
}

/// Eigen-decomposition of the symmetric part of `m`.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
}

/// Counts of (positive, negative, zero) eigenvalues of a symmetric matrix.
pub fn inertia(m: &DMatrix<f64>, tol: f64) -> (usize, usize, usize) {
    if m.nrows() == 0 {
        return (0, 0, 0);
    }
    let eig = symmetric_eigen(m);
    let emax = eig.eigenvalues.iter().fold(0.0f64, |a, &e| a.max(e.abs()));
    let thr = rank_threshold(tol, emax, m.nrows());
    let mut p = 0;
    let mut n = 0;
    let mut z = 0;
    for &e in eig.eigenvalues.iter() {
        if e > thr {
            p += 1;
        } else if e < -thr {
            n += 1;
        } else {
            z += 1;
        }
    }
    (p, n, z)
}

/// Extends an orthonormal list of vectors by the component of `v` orthogonal
/// to it, if that component is larger than `threshold` (relative to |v|).
/// Returns whether `v` was added.
pub fn extend_orthonormal(basis: &mut Vec<DVector<f64>>, v: &DVector<f64>, threshold: f64) -> bool {
    let norm = v.norm();
    if norm == 0.0 {
        return false;
    }
    let mut w = v.clone();
    // Two passes of classical Gram-Schmidt.
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
    }
    let rest = w.norm();
    if rest > threshold * norm {
        basis.push(w / rest);
        true
    } else {
        false
    }
}

/// Euclidean distance from `v` to the span of an orthonormal list.
pub fn distance_to_span(basis: &[DVector<f64>], v: &DVector<f64>) -> f64 {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
    }
    w.norm()
}

/// Column-stacks a square matrix into a vector.
pub fn vectorize(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

/// Matrix exponential (scaling and squaring with a Padé approximant).
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.exp()
}

/// Expands `prod_i (t - roots[i])` into `[a_0, ..., a_{n-1}]` such that the
/// polynomial equals `t^n + a_{n-1} t^{n-1} + ... + a_0`.
pub fn monic_from_roots(roots: &[f64]) -> Vec<f64> {
    // coefficients in ascending order, leading coefficient included
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= r * ck;
        }
        c = next;
    }
    c.pop();
    c
}
