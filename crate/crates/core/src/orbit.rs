//! Orbits of the structure group on the dual of a formally real Jordan
//! algebra: classification by spectral signature, regularity, tangent
//! dimensions and the orbit metric in Peirce block form.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{DualElement, Element};
use crate::builders::{CatalogEntry, Structure};
use crate::dual;
use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::{
    self, default_variant, form_matrix, peirce_decompose, sharp_map_tau, spectral_decompose, zero_cutoff,
    FormVariant, PeirceDecomposition, SpectralData, ZERO_THRESHOLD,
};

/// Position of a point relative to the closed cones `Ω̄` and `−Ω̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeStatus {
    PositiveInterior,
    PositiveBoundary,
    NegativeInterior,
    NegativeBoundary,
    /// ξ = 0, on the boundary of both cones.
    Origin,
    /// Mixed signature: outside both closed cones.
    Exterior,
}

impl ConeStatus {
    pub fn from_signature(n_plus: usize, n_minus: usize, rank: usize) -> Self {
        match (n_plus, n_minus) {
            (0, 0) => ConeStatus::Origin,
            (p, 0) if p == rank => ConeStatus::PositiveInterior,
            (_, 0) => ConeStatus::PositiveBoundary,
            (0, n) if n == rank => ConeStatus::NegativeInterior,
            (0, _) => ConeStatus::NegativeBoundary,
            _ => ConeStatus::Exterior,
        }
    }

    pub fn is_interior(self) -> bool {
        matches!(self, ConeStatus::PositiveInterior | ConeStatus::NegativeInterior)
    }

    pub fn in_closed_cone(self) -> bool {
        self != ConeStatus::Exterior
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitClass {
    pub signature: (usize, usize),
    pub rank: usize,
    /// `n₊ = 0` or `n₋ = 0`; for direct sums, every factor qualifies.
    pub regular_orbit: bool,
    pub cone_status: ConeStatus,
    pub coefficients: Vec<f64>,
    pub variant: FormVariant,
    /// Per-factor classes for direct sums, empty otherwise.
    pub factors: Vec<OrbitClass>,
}

fn spectral_of_dual(entry: &CatalogEntry, xi: &DualElement, variant: FormVariant) -> Result<(Element, SpectralData)> {
    let x = sharp_map_tau(entry, xi, variant)?;
    let sd = spectral_decompose(entry, &x)?;
    Ok((x, sd))
}

pub fn classify_orbit(entry: &CatalogEntry, xi: &DualElement) -> Result<OrbitClass> {
    classify_orbit_with(entry, xi, default_variant(entry))
}

pub fn classify_orbit_with(entry: &CatalogEntry, xi: &DualElement, variant: FormVariant) -> Result<OrbitClass> {
    let (_, sd) = spectral_of_dual(entry, xi, variant)?;
    let rank = sd.coefficients.len();
    let (p, n) = sd.signature;
    let factors = match &entry.structure {
        Structure::DirectSum(fs) => fs
            .iter()
            .map(|(off, f)| {
                let sub = DualElement(xi.coords().rows(*off, f.dim()).into_owned());
                classify_orbit_with(f, &sub, variant)
            })
            .collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    let regular_orbit = if factors.is_empty() {
        p == 0 || n == 0
    } else {
        factors.iter().all(|f| f.regular_orbit)
    };
    Ok(OrbitClass {
        signature: (p, n),
        rank,
        regular_orbit,
        cone_status: ConeStatus::from_signature(p, n, rank),
        coefficients: sd.coefficients,
        variant,
        factors,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub coefficients: Vec<f64>,
    /// First pair of nonzero coefficients with `λ_a + λ_b = 0` and `J_ab ≠ 0`.
    pub offending: Option<(usize, usize)>,
    /// Smallest `|λ_a + λ_b|` over pairs of nonzero coefficients with `J_ab ≠ 0`.
    pub min_pair_sum: f64,
}

fn regularity(sd: &SpectralData, peirce: &PeirceDecomposition) -> RegularityVerdict {
    let lam = &sd.coefficients;
    let cut = sd.zero_cutoff();
    let mut offending = None;
    let mut min_pair_sum = f64::INFINITY;
    for b in &peirce.blocks {
        if b.basis.is_empty() {
            continue;
        }
        let (la, lb) = (lam[b.i], lam[b.j]);
        if la.abs() <= cut || lb.abs() <= cut {
            continue;
        }
        let s = (la + lb).abs();
        min_pair_sum = min_pair_sum.min(s);
        if s <= cut && offending.is_none() {
            offending = Some((b.i, b.j));
        }
    }
    RegularityVerdict {
        regular: offending.is_none(),
        coefficients: lam.clone(),
        offending,
        min_pair_sum,
    }
}

/// Pairwise criterion: no two nonzero coefficients whose Peirce space is
/// nonzero may sum to zero.
pub fn is_regular_point(entry: &CatalogEntry, xi: &DualElement) -> Result<RegularityVerdict> {
    let variant = default_variant(entry);
    let (_, sd) = spectral_of_dual(entry, xi, variant)?;
    let peirce = peirce_decompose(entry, &sd.frame.idempotents, variant)?;
    Ok(regularity(&sd, &peirce))
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentDims {
    pub dim_lx: usize,
    pub dim_der: usize,
    pub dim_orbit: usize,
    /// The same three numbers read off from Peirce dimensions and coefficients.
    pub predicted: (usize, usize, usize),
    pub consistent: bool,
}

pub fn tangent_dims(entry: &CatalogEntry, x: &Element) -> Result<TangentDims> {
    let spec = &entry.spec;
    spec.check_dim(x.dim())?;
    let tol = spec.tolerance();
    let lx = spec.left_matrix(x.coords());
    let ders = dual::inner_derivations(spec);
    let dx: Vec<DVector<f64>> = ders.iter().map(|d| d.matrix() * x.coords()).collect();
    let dim_lx = linalg::numerical_rank(&lx, tol);
    let dim_der = if dx.is_empty() {
        0
    } else {
        linalg::numerical_rank(&DMatrix::from_columns(&dx), tol)
    };
    let mut all = dx.clone();
    all.extend((0..spec.dim()).map(|i| lx.column(i).into_owned()));
    let dim_orbit = linalg::numerical_rank(&DMatrix::from_columns(&all), tol);

    let sd = spectral_decompose(entry, x)?;
    let peirce = peirce_decompose(entry, &sd.frame.idempotents, default_variant(entry))?;
    let cut = sd.zero_cutoff();
    let lam = &sd.coefficients;
    let (mut pl, mut pd, mut po) = (0, 0, 0);
    for b in &peirce.blocks {
        let n = b.basis.len();
        let (la, lb) = (lam[b.i], lam[b.j]);
        let sum_nz = (la + lb).abs() > cut;
        let diff_nz = (la - lb).abs() > cut;
        if sum_nz {
            pl += n;
        }
        if diff_nz {
            pd += n;
        }
        if sum_nz || diff_nz {
            po += n;
        }
    }
    Ok(TangentDims {
        dim_lx,
        dim_der,
        dim_orbit,
        predicted: (pl, pd, po),
        consistent: (dim_lx, dim_der, dim_orbit) == (pl, pd, po),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockCoefficient {
    /// Peirce index pairs (zero based) sharing these coefficient values.
    pub pairs: Vec<(usize, usize)>,
    pub lambda: (f64, f64),
    /// `2 / (λ_a + λ_i)`.
    pub coefficient: f64,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub point: DualElement,
    pub variant: FormVariant,
    /// `τ/τ̂` where defined.
    pub ratio: Option<f64>,
    pub regular_point: bool,
    pub coefficients: Vec<f64>,
    pub tangent_dim: usize,
    /// Gram matrix on `tangent_basis`.
    #[serde(serialize_with = "spectral::ser_matrix")]
    pub gram: DMatrix<f64>,
    /// Columns: Peirce-adapted basis of the tangent space in dual coordinates,
    /// orthonormal for the dual of the chosen form.
    #[serde(serialize_with = "spectral::ser_matrix")]
    pub tangent_basis: DMatrix<f64>,
    /// The metric as a bilinear form on dual coordinates: `G(v, w) = vᵀ M w`
    /// for tangent vectors `v, w`.
    #[serde(serialize_with = "spectral::ser_matrix")]
    pub coordinate_gram: DMatrix<f64>,
    pub metric_signature: (usize, usize),
    pub block_coefficients: Vec<BlockCoefficient>,
    pub cross_check_residual: f64,
    pub min_pair_sum: f64,
    pub pole_warning: bool,
}

pub fn metric_at(entry: &CatalogEntry, xi: &DualElement) -> Result<MetricReport> {
    metric_at_with(entry, xi, default_variant(entry))
}

/// The orbit metric at a regular point. On `(J_ai)^♭` it is `2/(λ_a + λ_i)`
/// times the chosen form; the result is cross-checked against
/// `G(l_a★ξ, l_b★ξ) = <ξ, a•b>`.
pub fn metric_at_with(entry: &CatalogEntry, xi: &DualElement, variant: FormVariant) -> Result<MetricReport> {
    let spec = &entry.spec;
    let d = spec.dim();
    let (_, sd) = spectral_of_dual(entry, xi, variant)?;
    let peirce = peirce_decompose(entry, &sd.frame.idempotents, variant)?;
    let verdict = regularity(&sd, &peirce);
    let lam = &sd.coefficients;
    if let Some((a, b)) = verdict.offending {
        return Err(Error::NotRegular {
            a,
            b,
            lambda_a: lam[a],
            lambda_b: lam[b],
        });
    }
    let form = form_matrix(entry, variant)?;
    let cut = sd.zero_cutoff();

    let mut m = DMatrix::zeros(d, d);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let mut coeff_per_col = Vec::new();
    let mut merged: Vec<BlockCoefficient> = Vec::new();
    let mut min_sum = f64::INFINITY;
    for b in &peirce.blocks {
        let (la, lb) = (lam[b.i], lam[b.j]);
        if b.basis.is_empty() || (la.abs() <= cut && lb.abs() <= cut) {
            continue;
        }
        min_sum = min_sum.min((la + lb).abs());
        let c = 2.0 / (la + lb);
        for v in &b.basis {
            m += v.coords() * v.coords().transpose() * c;
            cols.push(&form * v.coords());
            coeff_per_col.push(c);
        }
        let key = (la.max(lb), la.min(lb));
        let close = |x: f64, y: f64| (x - y).abs() <= cut;
        match merged
            .iter_mut()
            .find(|e| close(e.lambda.0, key.0) && close(e.lambda.1, key.1))
        {
            Some(e) => {
                e.pairs.push((b.i, b.j));
                e.dim += b.basis.len();
            }
            None => merged.push(BlockCoefficient {
                pairs: vec![(b.i, b.j)],
                lambda: key,
                coefficient: c,
                dim: b.basis.len(),
            }),
        }
    }
    let tangent_basis = if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    let gram = tangent_basis.transpose() * &m * &tangent_basis;
    let gram = (&gram + gram.transpose()) * 0.5;

    // Second route through the bivector field: on its image, G(v, w) = vᵀ R⁺ w.
    let r = dual::bivector_at(spec, xi)?.matrix;
    let rp = linalg::pseudo_inverse(&r, spec.tolerance());
    let gram2 = tangent_basis.transpose() * &rp * &tangent_basis;
    let scale = linalg::max_abs(&gram).max(1.0);
    let mut cross = linalg::max_abs(&(&gram - &gram2)) / scale;
    let mut rng = linalg::prng(0xC0FF_EE00 ^ d as u64);
    for _ in 0..8 {
        let a = linalg::random_vector(&mut rng, d, -1.0, 1.0);
        let b = linalg::random_vector(&mut rng, d, -1.0, 1.0);
        let direct = (a.transpose() * &r * &b)[0];
        let v = r.transpose() * &a;
        let w = r.transpose() * &b;
        let via = (v.transpose() * &m * w)[0];
        cross = cross.max((direct - via).abs() / direct.abs().max(1.0));
    }

    let (p, n, _) = linalg::inertia(&gram, spec.tolerance());
    let lnorm = lam.iter().map(|l| l * l).sum::<f64>().sqrt();
    Ok(MetricReport {
        point: xi.clone(),
        variant,
        ratio: spectral::tau_ratio(entry),
        regular_point: true,
        coefficients: lam.clone(),
        tangent_dim: tangent_basis.ncols(),
        gram,
        tangent_basis,
        coordinate_gram: m,
        metric_signature: (p, n),
        block_coefficients: merged,
        cross_check_residual: cross,
        min_pair_sum: min_sum,
        pole_warning: min_sum < 1e-6 * lnorm,
    })
}

/// `ξ = (Σ λ_a c_a)^♭` for a frame and coefficients.
pub fn dual_from_frame(
    entry: &CatalogEntry,
    frame: &[Element],
    lambda: &[f64],
    variant: FormVariant,
) -> Result<DualElement> {
    if frame.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            found: lambda.len(),
        });
    }
    let x = frame
        .iter()
        .zip(lambda)
        .fold(DVector::zeros(entry.dim()), |acc, (c, l)| acc + c.coords() * *l);
    spectral::flat_map(entry, &Element(x), variant)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub name: String,
    pub n: usize,
    pub points: usize,
    pub max_residual: f64,
    pub max_cross_check: f64,
}

/// ℝⁿ at positive ξ: `M = diag(1/ξ_i)`. Residual is entrywise relative to
/// `sqrt(M_ii M_jj)`.
pub fn fisher_rao_check(n: usize, points: usize, seed: u64) -> Result<ClosedFormCheck> {
    let entry = crate::builders::build_rn(n)?;
    let mut worst: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for t in 0..points {
        let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
        let xi = DVector::from_fn(n, |_, _| rng.random_range(0.05..5.0));
        let rep = metric_at(&entry, &DualElement(xi.clone()))?;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 / xi[i] } else { 0.0 };
                let s = (1.0 / (xi[i] * xi[j])).sqrt();
                worst = worst.max((rep.coordinate_gram[(i, j)] - want).abs() / s);
            }
        }
        cross = cross.max(rep.cross_check_residual);
    }
    Ok(ClosedFormCheck {
        name: "fisher-rao".into(),
        n,
        points,
        max_residual: worst,
        max_cross_check: cross,
    })
}

/// Complex Hermitian matrix of a coordinate vector in the orthonormal basis
/// (diagonal units first, then `(E_ij + E_ji)/√2`, `i(E_ij − E_ji)/√2` per
/// pair `i < j`).
fn hermitian_from_coords(n: usize, v: &DVector<f64>) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(v[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = v[k] * FRAC_1_SQRT_2;
            let t = v[k + 1] * FRAC_1_SQRT_2;
            m[(i, j)] = Complex64::new(s, t);
            m[(j, i)] = Complex64::new(s, -t);
            k += 2;
        }
    }
    m
}

/// M_n^sa(ℂ) at frame-diagonal positive ξ: on `J_ai`, `a < i`, the metric is
/// `2/(λ_a+λ_i)(z w̄ + w z̄)` for entries z, w at (a, i); on `J_aa` it is
/// `z w / λ_a`. Compared on random tangent pairs, relative to `max(1, |G|)`.
pub fn bures_helstrom_check(n: usize, points: usize, seed: u64) -> Result<ClosedFormCheck> {
    let entry = crate::builders::build_hermitian(n, crate::builders::Field::Complex)?;
    let d = entry.dim();
    let mut worst: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for t in 0..points {
        let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
        let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..4.0)).collect();
        let mut xi = DVector::zeros(d);
        xi.rows_mut(0, n).copy_from_slice(&lambda);
        let rep = metric_at(&entry, &DualElement(xi))?;
        cross = cross.max(rep.cross_check_residual);
        for _ in 0..4 {
            let v = linalg::random_vector(&mut rng, d, -1.0, 1.0);
            let w = linalg::random_vector(&mut rng, d, -1.0, 1.0);
            let (x, y) = (hermitian_from_coords(n, &v), hermitian_from_coords(n, &w));
            let mut g = 0.0;
            for a in 0..n {
                g += x[(a, a)].re * y[(a, a)].re / lambda[a];
                for i in (a + 1)..n {
                    let (z, u) = (x[(a, i)], y[(a, i)]);
                    g += 2.0 / (lambda[a] + lambda[i]) * (z * u.conj() + u * z.conj()).re;
                }
            }
            let ours = (v.transpose() * &rep.coordinate_gram * &w)[0];
            worst = worst.max((ours - g).abs() / g.abs().max(1.0));
        }
    }
    Ok(ClosedFormCheck {
        name: "bures-helstrom".into(),
        n,
        points,
        max_residual: worst,
        max_cross_check: cross,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpinCheck {
    pub n: usize,
    pub points: usize,
    /// Against `2/(t₀+s₀)(t₁+s₁)(t₂+s₂) + 2/(t₀−s₀)(t₁−s₁)(t₂−s₂) + 2/t₀<x₁,x₂>`.
    pub literal_residual: f64,
    /// Against `(t₁+s₁)(t₂+s₂)/(2(t₀+s₀)) + (t₁−s₁)(t₂−s₂)/(2(t₀−s₀)) + <x₁,x₂>/t₀`,
    /// the value of `<ξ, a•b>` for `X_k = l_{a_k}★ξ`.
    pub corrected_residual: f64,
    /// Positive definite exactly when `t₀ > |s₀|`, over all sampled points.
    pub definiteness_agrees: bool,
    pub max_cross_check: f64,
}

/// JSpin(n) at `ξ = t₀1^♭ + s₀e₁^♭` (τ̂ identification) with random tangent
/// vectors `X = t1^♭ + s e₁^♭ + x^♭`, `x ⊥ e₁`. Points are drawn from the
/// positive cone, the negative cone and the mixed region with `t₀ ≠ 0`.
pub fn spin_factor_check(n: usize, points: usize, seed: u64) -> Result<SpinCheck> {
    let entry = crate::builders::build_spin(n)?;
    let d = n + 1;
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    let mut agrees = true;
    let mut cross: f64 = 0.0;
    for t in 0..points {
        let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
        let mag = rng.random_range(0.2..3.0);
        let (t0, s0) = match t % 3 {
            0 => (mag, mag * rng.random_range(-0.9..0.9)),
            1 => (-mag, mag * rng.random_range(-0.9..0.9)),
            _ => {
                let s = mag * rng.random_range(1.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                (mag * if rng.random_bool(0.5) { 1.0 } else { -1.0 }, s)
            }
        };
        let mut xi = DVector::zeros(d);
        xi[0] = t0;
        xi[1] = s0;
        let rep = metric_at_with(&entry, &DualElement(xi), FormVariant::TauHat)?;
        cross = cross.max(rep.cross_check_residual);
        let pd = rep.metric_signature == (rep.tangent_dim, 0);
        if pd != (t0 > s0.abs()) {
            agrees = false;
        }
        for _ in 0..4 {
            let v = linalg::random_vector(&mut rng, d, -1.0, 1.0);
            let w = linalg::random_vector(&mut rng, d, -1.0, 1.0);
            let (t1, s1, t2, s2) = (v[0], v[1], w[0], w[1]);
            let xx: f64 = (2..d).map(|k| v[k] * w[k]).sum();
            let lit = 2.0 / (t0 + s0) * (t1 + s1) * (t2 + s2)
                + 2.0 / (t0 - s0) * (t1 - s1) * (t2 - s2)
                + 2.0 / t0 * xx;
            let cor = (t1 + s1) * (t2 + s2) / (2.0 * (t0 + s0))
                + (t1 - s1) * (t2 - s2) / (2.0 * (t0 - s0))
                + xx / t0;
            let ours = (v.transpose() * &rep.coordinate_gram * &w)[0];
            literal = literal.max((ours - lit).abs() / lit.abs().max(1.0));
            corrected = corrected.max((ours - cor).abs() / cor.abs().max(1.0));
        }
    }
    Ok(SpinCheck {
        n,
        points,
        literal_residual: literal,
        corrected_residual: corrected,
        definiteness_agrees: agrees,
        max_cross_check: cross,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub n_plus: usize,
    pub samples: Vec<f64>,
    pub speeds: Vec<f64>,
    /// `4 Σ_{a ≤ n₊} F(c_a, c_a)` for the chosen form F.
    pub expected: f64,
    pub max_relative_deviation: f64,
}

/// Speeds `G(α̇, α̇)` along `α(t) = t²(c_1 + … + c_{n₊})^♭`.
pub fn incompleteness_curve(
    entry: &CatalogEntry,
    frame: &[Element],
    n_plus: usize,
    samples: &[f64],
    variant: FormVariant,
) -> Result<CurveReport> {
    if n_plus == 0 || n_plus > frame.len() {
        return Err(Error::InvalidInput(format!(
            "n_plus must lie in 1..={}, got {n_plus}",
            frame.len()
        )));
    }
    if let Some(t) = samples.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::InvalidInput(format!("curve samples must be positive, got {t}")));
    }
    let form = form_matrix(entry, variant)?;
    let sum = frame[..n_plus]
        .iter()
        .fold(DVector::zeros(entry.dim()), |acc, c| acc + c.coords());
    let expected = 4.0
        * frame[..n_plus]
            .iter()
            .map(|c| (c.coords().transpose() * &form * c.coords())[0])
            .sum::<f64>();
    let flat = &form * &sum;
    let mut speeds = Vec::with_capacity(samples.len());
    for &t in samples {
        let xi = DualElement(&flat * (t * t));
        let vel = &flat * (2.0 * t);
        let rep = metric_at_with(entry, &xi, variant)?;
        speeds.push((vel.transpose() * &rep.coordinate_gram * &vel)[0]);
    }
    let dev = speeds
        .iter()
        .map(|s| (s - expected).abs() / expected.abs())
        .fold(0.0, f64::max);
    Ok(CurveReport {
        n_plus,
        samples: samples.to_vec(),
        speeds,
        expected,
        max_relative_deviation: dev,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleRow {
    pub eps: f64,
    pub max_entry: f64,
    pub scaled: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleSweep {
    pub rows: Vec<PoleRow>,
    /// `max(scaled) / min(scaled) − 1`.
    pub spread: f64,
}

pub const DEFAULT_POLE_EPS: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

/// Metric blow-up near the non-regular locus: `λ = (1, −1+ε, 1, …)` on the
/// canonical frame; reports `max |gram|` and `ε · max |gram|`.
pub fn pole_sweep(entry: &CatalogEntry, eps: &[f64]) -> Result<PoleSweep> {
    let frame = &entry.canonical_frame;
    if frame.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "pole sweep needs a frame of rank at least 2, {} has {}",
            entry.name,
            frame.len()
        )));
    }
    let variant = default_variant(entry);
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let mut lambda = vec![1.0; frame.len()];
        lambda[1] = -1.0 + e;
        let xi = dual_from_frame(entry, frame, &lambda, variant)?;
        let rep = metric_at_with(entry, &xi, variant)?;
        let max_entry = linalg::max_abs(&rep.gram);
        rows.push(PoleRow {
            eps: e,
            max_entry,
            scaled: max_entry * e,
        });
    }
    let hi = rows.iter().map(|r| r.scaled).fold(f64::NEG_INFINITY, f64::max);
    let lo = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    Ok(PoleSweep {
        rows,
        spread: hi / lo - 1.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub trials: usize,
    pub automorphisms_only: bool,
    pub base_signature: (usize, usize),
    pub signature_constant: bool,
    /// Automorphism sweeps: largest change of the sorted coefficients,
    /// relative to `max(1, ‖λ‖∞)`.
    pub max_coefficient_drift: Option<f64>,
    /// Automorphism sweeps at regular points: largest entry of
    /// `Vᵀ(Aᵀ M' A − M)V` relative to `max(1, max |gram|)`, `A = g⁻ᵀ`.
    pub max_pullback_residual: Option<f64>,
}

/// Moves ξ by seeded random group elements and records what changes.
pub fn signature_invariance_sweep(
    entry: &CatalogEntry,
    xi: &DualElement,
    trials: usize,
    seed: u64,
    automorphisms_only: bool,
) -> Result<SweepReport> {
    let ext = dual::extended_structure_algebra(&entry.spec)?;
    let variant = default_variant(entry);
    let (_, base) = spectral_of_dual(entry, xi, variant)?;
    let base_metric = if automorphisms_only {
        match metric_at_with(entry, xi, variant) {
            Ok(m) => Some(m),
            Err(Error::NotRegular { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let lscale = base.coefficients.iter().fold(1.0f64, |a, l| a.max(l.abs()));
    let mut constant = true;
    let mut drift: f64 = 0.0;
    let mut pullback: f64 = 0.0;
    for t in 0..trials {
        let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
        let g = dual::sample_group_element(&ext, &mut rng, automorphisms_only);
        let moved = dual::act_dual(&g, xi)?;
        let (_, sd) = spectral_of_dual(entry, &moved, variant)?;
        if sd.signature != base.signature {
            constant = false;
        }
        if automorphisms_only {
            for (a, b) in sd.coefficients.iter().zip(&base.coefficients) {
                drift = drift.max((a - b).abs() / lscale);
            }
            if let Some(m0) = &base_metric {
                let m1 = metric_at_with(entry, &moved, variant)?;
                let a = g
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::numerical("group element is singular", f64::NAN, f64::INFINITY))?
                    .transpose();
                let v = &m0.tangent_basis;
                let pulled = v.transpose() * a.transpose() * &m1.coordinate_gram * &a * v;
                let res = linalg::max_abs(&(pulled - &m0.gram)) / linalg::max_abs(&m0.gram).max(1.0);
                pullback = pullback.max(res);
            }
        }
    }
    Ok(SweepReport {
        seed,
        trials,
        automorphisms_only,
        base_signature: base.signature,
        signature_constant: constant,
        max_coefficient_drift: automorphisms_only.then_some(drift),
        max_pullback_residual: (automorphisms_only && base_metric.is_some()).then_some(pullback),
    })
}

/// Zero cutoff used for a coefficient list, exposed for reports.
pub fn coefficient_cutoff(coefficients: &[f64]) -> f64 {
    zero_cutoff(coefficients, ZERO_THRESHOLD)
}
