//! Acceptance checks. Each criterion has pinned tolerances and sample sizes;
//! [`run_suite`] runs all of them on the default catalog and
//! [`run_for_algebra`] runs the ones that apply to a single algebra.

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{DualElement, Element};
use crate::builders::{self, CatalogEntry, Field, LieName, Structure};
use crate::dual;
use crate::error::Result;
use crate::linalg;
use crate::orbit;
use crate::spectral::{self, default_variant};

pub const SCHEMA: &str = "jordan-orbit/1";

pub const FISHER_RAO_TOL: f64 = 1e-9;
pub const FISHER_RAO_POINTS: usize = 100;
pub const FISHER_RAO_MAX_N: usize = 8;
pub const BURES_TOL: f64 = 1e-8;
pub const BURES_POINTS: usize = 20;
pub const BURES_MAX_N: usize = 4;
pub const SPIN_TOL: f64 = 1e-9;
pub const SPIN_POINTS: usize = 30;
pub const SPIN_MAX_N: usize = 10;
pub const REGULARITY_POINTS: usize = 500;
pub const ORBIT_TRIALS: usize = 100;
pub const ORBIT_TOL: f64 = 1e-7;
pub const PEIRCE_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const POLE_SPREAD_TOL: f64 = 0.05;
pub const CURVE_TOL: f64 = 1e-8;
pub const CURVE_SAMPLES: [f64; 3] = [0.1, 1.0, 10.0];
pub const KKS_POINTS: usize = 50;
pub const KKS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    /// Short name of the property being checked.
    pub anchor: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub algebras: Vec<String>,
    pub details: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: measured {:.3e} (tolerance {:.1e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance,
            self.details
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub seed: u64,
    pub algebra: Option<String>,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

fn names(entries: &[CatalogEntry]) -> Vec<String> {
    entries.iter().map(|e| e.name.clone()).collect()
}

fn criterion(
    id: u32,
    name: &'static str,
    anchor: &'static str,
    passed: bool,
    measured: f64,
    tolerance: f64,
    algebras: Vec<String>,
    details: String,
) -> CriterionResult {
    CriterionResult {
        id,
        name,
        anchor,
        passed,
        measured,
        tolerance,
        algebras,
        details,
    }
}

/// Simple, formally real catalog entries used by the sampled criteria.
pub fn simple_catalog() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for f in [Field::Real, Field::Complex, Field::Quaternion] {
            out.push(builders::build_hermitian(n, f)?);
        }
    }
    out.push(builders::build_hermitian(4, Field::Complex)?);
    for n in [2, 3, 5] {
        out.push(builders::build_spin(n)?);
    }
    Ok(out)
}

/// Every formally real catalog entry, including non-simple ones.
pub fn jordan_catalog() -> Result<Vec<CatalogEntry>> {
    let mut out = vec![builders::build_rn(1)?, builders::build_rn(3)?];
    out.extend(simple_catalog()?);
    out.push(builders::build_spin(1)?);
    out.push(builders::build_direct_sum(&[
        builders::build_hermitian(2, Field::Real)?,
        builders::build_rn(2)?,
    ])?);
    out.push(builders::build_direct_sum(&[
        builders::build_spin(2)?,
        builders::build_hermitian(2, Field::Complex)?,
    ])?);
    Ok(out)
}

pub fn criterion_fisher_rao(ns: &[usize], seed: u64) -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    for &n in ns {
        worst = worst.max(orbit::fisher_rao_check(n, FISHER_RAO_POINTS, seed)?.max_residual);
    }
    Ok(criterion(
        1,
        "Fisher-Rao reproduction",
        "fisher-rao-metric",
        worst <= FISHER_RAO_TOL,
        worst,
        FISHER_RAO_TOL,
        ns.iter().map(|n| format!("rn:{n}")).collect(),
        format!("{FISHER_RAO_POINTS} positive points per n"),
    ))
}

pub fn criterion_bures_helstrom(ns: &[usize], seed: u64) -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for &n in ns {
        let c = orbit::bures_helstrom_check(n, BURES_POINTS, seed)?;
        worst = worst.max(c.max_residual);
        cross = cross.max(c.max_cross_check);
    }
    Ok(criterion(
        2,
        "Bures-Helstrom block form",
        "bures-helstrom-metric",
        worst <= BURES_TOL && cross <= BURES_TOL,
        worst.max(cross),
        BURES_TOL,
        ns.iter().map(|n| format!("herm:{n}:complex")).collect(),
        format!("block-form residual {worst:.3e}, bivector cross-check {cross:.3e}"),
    ))
}

/// Compares against the three-term spin-factor expression with coefficients
/// 2/(t₀+s₀), 2/(t₀−s₀), 2/t₀ and checks definiteness. The value of the
/// canonical form itself is reported alongside as `corrected`.
pub fn criterion_spin_factor(ns: &[usize], seed: u64) -> Result<CriterionResult> {
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    let mut cross: f64 = 0.0;
    let mut definite = true;
    for &n in ns {
        let c = orbit::spin_factor_check(n, SPIN_POINTS, seed)?;
        literal = literal.max(c.literal_residual);
        corrected = corrected.max(c.corrected_residual);
        cross = cross.max(c.max_cross_check);
        definite &= c.definiteness_agrees;
    }
    Ok(criterion(
        3,
        "spin-factor metric",
        "spin-factor-metric",
        literal <= SPIN_TOL && definite,
        literal,
        SPIN_TOL,
        ns.iter().map(|n| format!("spin:{n}")).collect(),
        format!(
            "three-term display residual {literal:.3e}; residual against <xi, a.b> closed form \
             (coefficients 1/(2(t0+s0)), 1/(2(t0-s0)), 1/t0) {corrected:.3e}; bivector cross-check {cross:.3e}; \
             positive definite exactly when t0 > |s0|: {definite}"
        ),
    ))
}

/// Seeded dual points: half structured (integer coefficients in −3..=3 on
/// the canonical frame, moved by a random automorphism), half uniform.
fn regularity_points(entry: &CatalogEntry, count: usize, seed: u64) -> Result<Vec<DualElement>> {
    let ext = dual::extended_structure_algebra(&entry.spec)?;
    let variant = default_variant(entry);
    let r = entry.canonical_frame.len();
    let mut pts = Vec::with_capacity(count);
    for t in 0..count {
        let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
        if t % 2 == 0 {
            let mut lambda: Vec<f64> = (0..r).map(|_| rng.random_range(-3i32..=3) as f64).collect();
            if t % 4 == 0 && r >= 2 {
                // force an opposite pair
                let a = rng.random_range(0..r);
                let b = (a + 1 + rng.random_range(0..r - 1)) % r;
                lambda[b] = -lambda[a];
            }
            let xi = orbit::dual_from_frame(entry, &entry.canonical_frame, &lambda, variant)?;
            let g = dual::sample_group_element(&ext, &mut rng, true);
            pts.push(dual::act_dual(&g, &xi)?);
        } else {
            pts.push(DualElement(linalg::random_vector(&mut rng, entry.dim(), -1.0, 1.0)));
        }
    }
    Ok(pts)
}

pub fn criterion_regularity(entries: &[CatalogEntry], seed: u64) -> Result<CriterionResult> {
    let mut total = 0usize;
    let mut disagree = 0usize;
    let mut nonregular = 0usize;
    for e in entries {
        for xi in regularity_points(e, REGULARITY_POINTS, seed)? {
            let pred = orbit::is_regular_point(e, &xi)?;
            let inv = dual::involutivity_test(&e.spec, &xi)?;
            total += 1;
            if !pred.regular {
                nonregular += 1;
            }
            if pred.regular != inv.involutive {
                disagree += 1;
            }
        }
    }
    Ok(criterion(
        4,
        "regularity <=> involutivity",
        "regularity-criterion",
        disagree == 0,
        disagree as f64,
        0.0,
        names(entries),
        format!("{total} points, {nonregular} non-regular, {disagree} disagreements"),
    ))
}

pub fn criterion_orbit_invariance(entries: &[CatalogEntry], seed: u64) -> Result<CriterionResult> {
    let mut constant = true;
    let mut drift: f64 = 0.0;
    let mut pullback: f64 = 0.0;
    for (k, e) in entries.iter().enumerate() {
        let mut rng = linalg::prng(linalg::trial_seed(seed ^ 0x0b17, k as u64));
        let xi = DualElement(linalg::random_vector(&mut rng, e.dim(), -1.0, 1.0));
        let s = orbit::signature_invariance_sweep(e, &xi, ORBIT_TRIALS, seed, false)?;
        constant &= s.signature_constant;
        let a = orbit::signature_invariance_sweep(e, &xi, ORBIT_TRIALS, seed, true)?;
        constant &= a.signature_constant;
        drift = drift.max(a.max_coefficient_drift.unwrap_or(0.0));
        pullback = pullback.max(a.max_pullback_residual.unwrap_or(0.0));
    }
    Ok(criterion(
        5,
        "orbit invariance",
        "orbit-classification",
        constant && drift <= ORBIT_TOL && pullback <= ORBIT_TOL,
        drift.max(pullback),
        ORBIT_TOL,
        names(entries),
        format!(
            "{ORBIT_TRIALS} group elements per algebra; signature constant: {constant}; \
             coefficient drift {drift:.3e}; metric pullback {pullback:.3e}"
        ),
    ))
}

pub fn criterion_peirce(entries: &[CatalogEntry], seed: u64) -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    let mut structural = true;
    let mut notes = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let variant = default_variant(e);
        let mut rng = linalg::prng(linalg::trial_seed(seed ^ 0x9e1c, k as u64));
        let x = Element(linalg::random_vector(&mut rng, e.dim(), -1.0, 1.0));
        let spectral_frame = spectral::spectral_decompose(e, &x)?.frame.idempotents;
        for frame in [&e.canonical_frame, &spectral_frame] {
            let fc = spectral::jordan_frame_check(e, frame);
            let p = spectral::peirce_decompose(e, frame, variant)?;
            let c = spectral::check_peirce(e, &p)?;
            worst = worst
                .max(c.product_residual)
                .max(c.eigenvalue_residual)
                .max(c.orthogonality_residual)
                .max(fc.eigenvalue_residual);
            let ok = c.dims_sum == c.dim && c.diagonal_one_dimensional && (!e.simple || c.off_diagonal_nonzero);
            if !ok {
                notes.push(format!("{}: block dimensions {:?}", e.name, c.dims));
            }
            structural &= ok;
        }
    }
    Ok(criterion(
        6,
        "Peirce laws",
        "peirce-decomposition",
        structural && worst <= PEIRCE_TOL,
        worst,
        PEIRCE_TOL,
        names(entries),
        if notes.is_empty() {
            "canonical and spectral frames; dimensions, products, eigenvalues".into()
        } else {
            notes.join("; ")
        },
    ))
}

pub fn criterion_trace_form(entries: &[CatalogEntry], include_counterexample: bool) -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut notes = Vec::new();
    for e in entries {
        let tf = spectral::trace_form(e)?;
        let sym = linalg::max_abs(&(&tf.matrix - tf.matrix.transpose()));
        worst = worst.max(sym).max(tf.associativity_residual);
        let definite = tf.signature.1 == 0 && tf.signature.2 == 0;
        if !matches!(e.structure, Structure::Custom) && !definite {
            ok = false;
            notes.push(format!("{} not positive definite {:?}", e.name, tf.signature));
        }
    }
    let mut names = names(entries);
    if include_counterexample {
        let nil = builders::load_custom_str(builders::DUAL_NUMBERS_JSON)?;
        let tf = spectral::trace_form(&nil)?;
        worst = worst.max(tf.associativity_residual);
        let degenerate = tf.signature.2 > 0;
        ok &= degenerate;
        notes.push(format!("dual numbers signature {:?}", tf.signature));
        names.push("dual-numbers".into());
    }
    Ok(criterion(
        7,
        "trace-form properties",
        "trace-form",
        ok && worst <= TRACE_TOL,
        worst,
        TRACE_TOL,
        names,
        notes.join("; "),
    ))
}

pub fn criterion_pole(entries: &[CatalogEntry]) -> Result<CriterionResult> {
    let mut spread: f64 = 0.0;
    let mut notes = Vec::new();
    for e in entries {
        let s = orbit::pole_sweep(e, &orbit::DEFAULT_POLE_EPS)?;
        spread = spread.max(s.spread);
        let last = s.rows.last().map(|r| r.scaled).unwrap_or(f64::NAN);
        notes.push(format!("{}: eps*max {last:.6}", e.name));
    }
    Ok(criterion(
        8,
        "pole order",
        "metric-pole",
        spread <= POLE_SPREAD_TOL,
        spread,
        POLE_SPREAD_TOL,
        names(entries),
        notes.join("; "),
    ))
}

pub fn criterion_curve(entries: &[CatalogEntry]) -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    for e in entries {
        let variant = default_variant(e);
        for n_plus in 1..=e.canonical_frame.len() {
            let c = orbit::incompleteness_curve(e, &e.canonical_frame, n_plus, &CURVE_SAMPLES, variant)?;
            worst = worst.max(c.max_relative_deviation);
        }
    }
    Ok(criterion(
        9,
        "constant-speed curve",
        "incompleteness-curve",
        worst <= CURVE_TOL,
        worst,
        CURVE_TOL,
        names(entries),
        "every n+ on the canonical frame, t in {0.1, 1, 10}".into(),
    ))
}

pub fn criterion_kks(entries: &[CatalogEntry], seed: u64) -> Result<CriterionResult> {
    let mut ok = true;
    let mut antisym: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    let mut notes = Vec::new();
    for e in entries {
        let d = e.dim();
        let zero = dual::distribution_basis(&e.spec, &DualElement::zeros(d))?;
        if zero.rank != 0 {
            ok = false;
            notes.push(format!("{}: rank {} at the origin", e.name, zero.rank));
        }
        for t in 0..KKS_POINTS {
            let mut rng = linalg::prng(linalg::trial_seed(seed, t as u64));
            let xi = DualElement(linalg::random_vector(&mut rng, d, -1.0, 1.0));
            let inv = dual::involutivity_test(&e.spec, &xi)?;
            if !inv.involutive {
                ok = false;
                notes.push(format!("{}: point {t} not involutive", e.name));
            }
            if matches!(e.structure, Structure::Lie(LieName::So3)) && inv.dist_rank != 2 {
                ok = false;
                notes.push(format!("{}: rank {} at a generic point", e.name, inv.dist_rank));
            }
            let (v, gram) = dual::tangent_gram(&e.spec, &xi)?;
            let scale = xi.norm().max(f64::MIN_POSITIVE);
            antisym = antisym.max(linalg::max_abs(&(&gram + gram.transpose())) * scale);
            if v.ncols() > 0 {
                // |det| of the tangent Gram in units of |ξ|
                let det = gram.determinant().abs() * scale.powi(v.ncols() as i32);
                min_det = min_det.min(det);
            }
        }
    }
    let nondegenerate = min_det > 1e-6;
    Ok(criterion(
        10,
        "Lie/KKS sanity",
        "kks-structure",
        ok && nondegenerate && antisym <= KKS_TOL,
        antisym,
        KKS_TOL,
        names(entries),
        format!(
            "{KKS_POINTS} points per algebra; smallest scaled tangent Gram determinant {min_det:.3e}{}",
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
        ),
    ))
}

/// Criteria 1 to 10 on the default catalog.
pub fn run_criterion(id: u32, seed: u64) -> Result<CriterionResult> {
    match id {
        1 => criterion_fisher_rao(&(1..=FISHER_RAO_MAX_N).collect::<Vec<_>>(), seed),
        2 => criterion_bures_helstrom(&(1..=BURES_MAX_N).collect::<Vec<_>>(), seed),
        3 => criterion_spin_factor(&(1..=SPIN_MAX_N).collect::<Vec<_>>(), seed),
        4 => criterion_regularity(&simple_catalog()?, seed),
        5 => criterion_orbit_invariance(&jordan_catalog()?, seed),
        6 => criterion_peirce(&jordan_catalog()?, seed),
        7 => criterion_trace_form(&jordan_catalog()?, true),
        8 => {
            let pole: Vec<CatalogEntry> = simple_catalog()?
                .into_iter()
                .filter(|e| e.rank.unwrap_or(0) >= 2)
                .collect();
            criterion_pole(&pole)
        }
        9 => criterion_curve(&[
            builders::build_rn(3)?,
            builders::build_hermitian(3, Field::Complex)?,
            builders::build_spin(3)?,
            builders::build_direct_sum(&[builders::build_hermitian(2, Field::Real)?, builders::build_rn(2)?])?,
        ]),
        10 => criterion_kks(
            &[
                builders::build_lie(LieName::So3)?,
                builders::build_lie(LieName::Sl2r)?,
                builders::build_lie(LieName::Un(2))?,
            ],
            seed,
        ),
        _ => Err(crate::error::Error::InvalidInput(format!("no criterion {id}"))),
    }
}

fn suite_body(seed: u64) -> Result<Vec<CriterionResult>> {
    (1..=10).map(|id| run_criterion(id, seed)).collect()
}

/// Criteria that apply to one algebra.
fn algebra_body(entry: &CatalogEntry, seed: u64) -> Result<Vec<CriterionResult>> {
    use crate::algebra::AlgebraKind;
    let one = std::slice::from_ref(entry);
    let mut out = Vec::new();
    if entry.kind() == AlgebraKind::Lie {
        out.push(criterion_kks(one, seed)?);
        return Ok(out);
    }
    if entry.kind() != AlgebraKind::Jordan {
        return Ok(out);
    }
    let formally_real = spectral::is_formally_real(entry)?;
    match &entry.structure {
        Structure::Componentwise(n) => out.push(criterion_fisher_rao(&[*n], seed)?),
        Structure::Hermitian(b) if b.field == Field::Complex => out.push(criterion_bures_helstrom(&[b.n], seed)?),
        Structure::Spin(n) => out.push(criterion_spin_factor(&[*n], seed)?),
        _ => {}
    }
    if !formally_real || entry.unit.is_none() {
        out.push(criterion_trace_form(one, false)?);
        return Ok(out);
    }
    if entry.simple && !entry.canonical_frame.is_empty() {
        out.push(criterion_regularity(one, seed)?);
    }
    out.push(criterion_orbit_invariance(one, seed)?);
    if !entry.canonical_frame.is_empty() {
        out.push(criterion_peirce(one, seed)?);
    }
    out.push(criterion_trace_form(one, false)?);
    if entry.simple && entry.canonical_frame.len() >= 2 {
        out.push(criterion_pole(one)?);
    }
    if !entry.canonical_frame.is_empty() {
        out.push(criterion_curve(one)?);
    }
    Ok(out)
}

fn determinism(first: &[CriterionResult], again: Result<Vec<CriterionResult>>) -> Result<CriterionResult> {
    let a = serde_json::to_string(first)?;
    let b = serde_json::to_string(&again?)?;
    Ok(criterion(
        11,
        "determinism",
        "reproducibility",
        a == b,
        if a == b { 0.0 } else { 1.0 },
        0.0,
        Vec::new(),
        format!("re-ran every criterion with the same seed; {} bytes compared", a.len()),
    ))
}

fn finish(seed: u64, algebra: Option<String>, criteria: Vec<CriterionResult>) -> VerifyReport {
    VerifyReport {
        schema: SCHEMA,
        seed,
        algebra,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

pub fn run_suite(seed: u64) -> Result<VerifyReport> {
    let mut body = suite_body(seed)?;
    let det = determinism(&body, suite_body(seed))?;
    body.push(det);
    Ok(finish(seed, None, body))
}

pub fn run_for_algebra(entry: &CatalogEntry, seed: u64) -> Result<VerifyReport> {
    let mut body = algebra_body(entry, seed)?;
    let det = determinism(&body, algebra_body(entry, seed))?;
    body.push(det);
    Ok(finish(seed, Some(entry.name.clone()), body))
}

/// Natural-gradient consistency on ℝⁿ: the A-dual field of `df` equals
/// `M⁻¹ df` for the orbit metric M. Returns the largest relative residual.
pub fn natural_gradient_residual(n: usize, seed: u64) -> Result<f64> {
    let entry = builders::build_rn(n)?;
    let mut rng = linalg::prng(seed);
    let xi = DVector::from_fn(n, |_, _| rng.random_range(0.1..2.0));
    let q = DVector::from_fn(n, |_, _| rng.random_range(0.1..2.0));
    // f(ξ) = Σ ξ_i log(ξ_i / q_i), differentiated by central differences
    let f = |p: &DVector<f64>| -> f64 { (0..n).map(|i| p[i] * (p[i] / q[i]).ln()).sum() };
    let h = 1e-6;
    let df = DVector::from_fn(n, |i, _| {
        let mut a = xi.clone();
        let mut b = xi.clone();
        a[i] += h;
        b[i] -= h;
        (f(&a) - f(&b)) / (2.0 * h)
    });
    let point = DualElement(xi.clone());
    let dir = dual::dual_vector_field(&entry.spec, &point, &df)?;
    let m = orbit::metric_at(&entry, &point)?.coordinate_gram;
    let pre = m
        .lu()
        .solve(&df)
        .ok_or_else(|| crate::error::Error::numerical("metric is singular", f64::NAN, f64::INFINITY))?;
    Ok((dir.coords() - &pre).amax() / pre.amax().max(1.0))
}
