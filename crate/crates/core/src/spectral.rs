//! Structure theory of formally real Jordan algebras: trace forms, Jordan
//! frames, spectral decomposition, minimal polynomials and Peirce spaces.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{find_unit, AlgebraKind, DualElement, Element};
use crate::builders::{CatalogEntry, Field, HermitianBasis, Structure};
use crate::error::{Error, Result};
use crate::linalg;

/// Default zero threshold for spectral coefficients, relative to `max(1, ‖λ‖∞)`.
pub const ZERO_THRESHOLD: f64 = 1e-8;

const RECONSTRUCTION_TOL: f64 = 1e-8;
const KRYLOV_TOL: f64 = 1e-10;
const MERGE_TOL: f64 = 1e-8;
const EIGENSPACE_TOL: f64 = 1e-6;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormVariant {
    /// `τ(x, y) = tr l_{x•y}`.
    Tau,
    /// The associative form attached to the model (`Re tr(xy)` for matrices).
    TauHat,
}

impl FormVariant {
    pub fn name(self) -> &'static str {
        match self {
            FormVariant::Tau => "tau",
            FormVariant::TauHat => "tau-hat",
        }
    }
}

/// τ̂ for matrix models (and sums containing them), τ elsewhere.
pub fn default_variant(entry: &CatalogEntry) -> FormVariant {
    if entry.prefers_tau_hat() {
        FormVariant::TauHat
    } else {
        FormVariant::Tau
    }
}

fn require_jordan(entry: &CatalogEntry) -> Result<()> {
    if entry.kind() == AlgebraKind::Jordan {
        Ok(())
    } else {
        Err(Error::KindMismatch {
            expected: AlgebraKind::Jordan.to_string(),
            found: entry.kind().to_string(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceForm {
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: DMatrix<f64>,
    /// (positive, negative, zero) eigenvalue counts.
    pub signature: (usize, usize, usize),
    pub variant: FormVariant,
    /// `τ / τ̂` when τ̂ is known and the two forms are proportional.
    pub ratio: Option<f64>,
    pub associativity_residual: f64,
}

pub(crate) fn ser_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    linalg::to_rows(m).serialize(s)
}

/// `T[i][j] = tr l_{e_i • e_j} = Σ_k C[i][j][k] tr l_{e_k}`.
pub fn tau_matrix(entry: &CatalogEntry) -> DMatrix<f64> {
    let spec = &entry.spec;
    let d = spec.dim();
    let traces: Vec<f64> = spec.left_basis().iter().map(|l| l.trace()).collect();
    DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| spec.constant(i, j, k) * traces[k]).sum())
}

/// Matrix of the requested form in the algebra basis.
pub fn form_matrix(entry: &CatalogEntry, variant: FormVariant) -> Result<DMatrix<f64>> {
    match variant {
        FormVariant::Tau => Ok(tau_matrix(entry)),
        FormVariant::TauHat => entry.tau_hat.clone().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no associative form tau-hat", entry.name))
        }),
    }
}

/// Ratio `τ/τ̂` if τ̂ exists and the forms are proportional.
pub fn tau_ratio(entry: &CatalogEntry) -> Option<f64> {
    let th = entry.tau_hat.as_ref()?;
    let t = tau_matrix(entry);
    let k = t.dot(th) / th.dot(th);
    let res = linalg::max_abs(&(&t - th * k));
    (res <= 1e-9 * linalg::max_abs(&t).max(1.0)).then_some(k)
}

/// Largest `|F(x•y, z) − F(x, y•z)|` over basis triples, relative to `max|F|`
/// and the structure-constant scale.
pub fn associativity_residual(entry: &CatalogEntry, form: &DMatrix<f64>) -> f64 {
    let spec = &entry.spec;
    let d = spec.dim();
    let mut res: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let ij = spec.basis_product(i, j);
            let lhs = form.transpose() * &ij; // lhs[k] = F(e_i•e_j, e_k)
            for k in 0..d {
                let jk = spec.basis_product(j, k);
                let rhs = (form.row(i) * &jk)[0];
                res = res.max((lhs[k] - rhs).abs());
            }
        }
    }
    res / (linalg::max_abs(form).max(1.0) * spec.scale())
}

pub fn trace_form(entry: &CatalogEntry) -> Result<TraceForm> {
    require_jordan(entry)?;
    let matrix = tau_matrix(entry);
    let signature = linalg::inertia(&matrix, entry.spec.tolerance());
    let associativity_residual = associativity_residual(entry, &matrix);
    Ok(TraceForm {
        signature,
        variant: FormVariant::Tau,
        ratio: tau_ratio(entry),
        associativity_residual,
        matrix,
    })
}

pub fn is_formally_real(entry: &CatalogEntry) -> Result<bool> {
    let tf = trace_form(entry)?;
    Ok(tf.signature.1 == 0 && tf.signature.2 == 0)
}

fn require_formally_real(entry: &CatalogEntry) -> Result<()> {
    let tf = trace_form(entry)?;
    let (p, n, z) = tf.signature;
    if n == 0 && z == 0 {
        Ok(())
    } else {
        Err(Error::NotFormallyReal {
            positive: p,
            negative: n,
            zero: z,
        })
    }
}

fn require_nondegenerate(form: &DMatrix<f64>, tol: f64) -> Result<()> {
    let (_, _, z) = linalg::inertia(form, tol);
    if z == 0 {
        Ok(())
    } else {
        Err(Error::DegenerateForm(format!("form has a {z}-dimensional null space")))
    }
}

/// `x ↦ x^♭ = F(x, ·)`, coordinates `F x`.
pub fn flat_map(entry: &CatalogEntry, x: &Element, variant: FormVariant) -> Result<DualElement> {
    entry.spec.check_dim(x.dim())?;
    let f = form_matrix(entry, variant)?;
    require_nondegenerate(&f, entry.spec.tolerance())?;
    Ok(DualElement(f * x.coords()))
}

/// Inverse of [`flat_map`].
pub fn sharp_map_tau(entry: &CatalogEntry, xi: &DualElement, variant: FormVariant) -> Result<Element> {
    entry.spec.check_dim(xi.dim())?;
    let f = form_matrix(entry, variant)?;
    require_nondegenerate(&f, entry.spec.tolerance())?;
    let lu = f.lu();
    lu.solve(xi.coords())
        .map(Element)
        .ok_or_else(|| Error::DegenerateForm("form matrix is singular".into()))
}

/// A complete system of orthogonal primitive idempotents.
#[derive(Clone, Debug, Serialize)]
pub struct JordanFrame {
    pub idempotents: Vec<Element>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameCheck {
    pub passed: bool,
    pub orthogonality_residual: f64,
    pub completeness_residual: f64,
    /// `dim ker(l_c − Id)` for each element; 1 for a primitive idempotent.
    pub one_space_dims: Vec<usize>,
    /// Largest entry of `l(2l − 1)(l − 1)` over the frame.
    pub eigenvalue_residual: f64,
    pub failures: Vec<String>,
}

fn unit_of(entry: &CatalogEntry) -> Result<DVector<f64>> {
    match &entry.unit {
        Some(u) => Ok(u.coords().clone()),
        None => find_unit(&entry.spec).0.map(|u| u.0).ok_or(Error::NotUnital),
    }
}

fn one_space_dim(l: &DMatrix<f64>) -> usize {
    let d = l.nrows();
    let m = l - DMatrix::identity(d, d);
    linalg::null_space(&m, EIGENSPACE_TOL * linalg::max_abs(l).max(1.0)).ncols()
}

/// Checks `{c_i, c_j} = δ_ij c_i`, `Σ c_i = 1`, primitivity and that each
/// `l_{c_i}` has spectrum in `{0, ½, 1}`.
pub fn jordan_frame_check(entry: &CatalogEntry, frame: &[Element]) -> FrameCheck {
    let spec = &entry.spec;
    let tol = spec.tolerance();
    let mut failures = Vec::new();
    if frame.is_empty() || frame.iter().any(|c| c.dim() != spec.dim()) {
        failures.push("frame is empty or has elements of the wrong dimension".into());
        return FrameCheck {
            passed: false,
            orthogonality_residual: f64::INFINITY,
            completeness_residual: f64::INFINITY,
            one_space_dims: Vec::new(),
            eigenvalue_residual: f64::INFINITY,
            failures,
        };
    }
    let mut orth: f64 = 0.0;
    for (i, ci) in frame.iter().enumerate() {
        for (j, cj) in frame.iter().enumerate().skip(i) {
            let p = spec.mul(ci.coords(), cj.coords());
            let want = if i == j { ci.coords().clone() } else { DVector::zeros(spec.dim()) };
            orth = orth.max((p - want).amax());
        }
    }
    if orth > tol * spec.scale() * 10.0 {
        failures.push(format!("idempotent/orthogonality relations fail (residual {orth:e})"));
    }

    let sum: DVector<f64> = frame.iter().fold(DVector::zeros(spec.dim()), |a, c| a + c.coords());
    let completeness = match unit_of(entry) {
        Ok(u) => (sum - u).amax(),
        Err(_) => f64::INFINITY,
    };
    if completeness > tol * 10.0 {
        failures.push(format!("elements do not sum to the unit (residual {completeness:e})"));
    }

    let mut dims = Vec::with_capacity(frame.len());
    let mut eig: f64 = 0.0;
    for (i, c) in frame.iter().enumerate() {
        let l = spec.left_matrix(c.coords());
        let k = one_space_dim(&l);
        if k != 1 {
            failures.push(format!("element {i} is not primitive (1-eigenspace of dimension {k})"));
        }
        dims.push(k);
        // l(2l − 1)(l − 1) vanishes iff l is diagonalizable with spectrum in {0, ½, 1}
        let id = DMatrix::<f64>::identity(spec.dim(), spec.dim());
        let poly = &l * (&l * 2.0 - &id) * (&l - &id);
        eig = eig.max(linalg::max_abs(&poly));
    }
    if eig > 1e-9 {
        failures.push(format!("multiplication operators have eigenvalues outside {{0, 1/2, 1}} (residual {eig:e})"));
    }
    FrameCheck {
        passed: failures.is_empty(),
        orthogonality_residual: orth,
        completeness_residual: completeness,
        one_space_dims: dims,
        eigenvalue_residual: eig,
        failures,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralPath {
    Generic,
    Componentwise,
    Hermitian,
    Spin,
    DirectSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    pub frame: JordanFrame,
    /// Sorted in descending order.
    pub coefficients: Vec<f64>,
    /// `(n₊, n₋)` after zero thresholding.
    pub signature: (usize, usize),
    pub zero_threshold: f64,
    pub reconstruction_residual: f64,
    pub path: SpectralPath,
}

impl SpectralData {
    fn from_pairs(mut pairs: Vec<(f64, DVector<f64>)>, x: &DVector<f64>, path: SpectralPath) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let coefficients: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let recon = pairs.iter().fold(DVector::zeros(x.len()), |a, (l, c)| a + c * *l);
        let reconstruction_residual = (x - recon).norm();
        let signature = signature_of(&coefficients, ZERO_THRESHOLD);
        Self {
            frame: JordanFrame {
                idempotents: pairs.into_iter().map(|p| Element(p.1)).collect(),
            },
            coefficients,
            signature,
            zero_threshold: ZERO_THRESHOLD,
            reconstruction_residual,
            path,
        }
    }

    /// Threshold below which `|λ|` counts as zero for these coefficients.
    pub fn zero_cutoff(&self) -> f64 {
        zero_cutoff(&self.coefficients, self.zero_threshold)
    }
}

pub fn zero_cutoff(coefficients: &[f64], threshold: f64) -> f64 {
    let m = coefficients.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    threshold * m.max(1.0)
}

pub fn signature_of(coefficients: &[f64], threshold: f64) -> (usize, usize) {
    let cut = zero_cutoff(coefficients, threshold);
    let p = coefficients.iter().filter(|&&l| l > cut).count();
    let n = coefficients.iter().filter(|&&l| l < -cut).count();
    (p, n)
}

fn check_spectral_preconditions(entry: &CatalogEntry, x: &Element) -> Result<DVector<f64>> {
    require_jordan(entry)?;
    entry.spec.check_dim(x.dim())?;
    if !x.is_finite() {
        return Err(Error::InvalidInput("element has non-finite coordinates".into()));
    }
    let unit = unit_of(entry)?;
    require_formally_real(entry)?;
    Ok(unit)
}

/// Spectral decomposition `x = Σ λ_i c_i`, using an exact route when the
/// model provides one.
pub fn spectral_decompose(entry: &CatalogEntry, x: &Element) -> Result<SpectralData> {
    let unit = check_spectral_preconditions(entry, x)?;
    let data = match &entry.structure {
        Structure::Componentwise(n) => {
            let pairs = (0..*n)
                .map(|i| (x.coords()[i], DVector::from_fn(*n, |k, _| if k == i { 1.0 } else { 0.0 })))
                .collect();
            SpectralData::from_pairs(pairs, x.coords(), SpectralPath::Componentwise)
        }
        Structure::Hermitian(basis) if basis.field != Field::Quaternion => {
            SpectralData::from_pairs(hermitian_pairs(basis, x.coords()), x.coords(), SpectralPath::Hermitian)
        }
        Structure::Spin(_) => SpectralData::from_pairs(spin_pairs(x.coords()), x.coords(), SpectralPath::Spin),
        Structure::DirectSum(factors) => {
            let d = entry.dim();
            let mut pairs = Vec::new();
            for (off, f) in factors {
                let m = f.dim();
                let sub = Element(x.coords().rows(*off, m).into_owned());
                let sd = spectral_decompose(f, &sub)?;
                for (l, c) in sd.coefficients.iter().zip(sd.frame.idempotents) {
                    let mut v = DVector::zeros(d);
                    v.rows_mut(*off, m).copy_from(c.coords());
                    pairs.push((*l, v));
                }
            }
            SpectralData::from_pairs(pairs, x.coords(), SpectralPath::DirectSum)
        }
        _ => return generic(entry, x, &unit),
    };
    verify_reconstruction(data, x, 1.0)
}

/// The model-independent route: Krylov/Hessenberg eigenvalues of `l_x` on the
/// subalgebra generated by `x`, Lagrange idempotents, and recursive splitting
/// of non-primitive idempotents.
pub fn spectral_decompose_generic(entry: &CatalogEntry, x: &Element) -> Result<SpectralData> {
    let unit = check_spectral_preconditions(entry, x)?;
    generic(entry, x, &unit)
}

fn verify_reconstruction(data: SpectralData, x: &Element, condition: f64) -> Result<SpectralData> {
    let bound = RECONSTRUCTION_TOL * x.norm().max(f64::MIN_POSITIVE);
    if data.reconstruction_residual <= bound || data.reconstruction_residual == 0.0 {
        Ok(data)
    } else {
        Err(Error::numerical(
            "spectral reconstruction does not reproduce the element",
            data.reconstruction_residual / x.norm().max(f64::MIN_POSITIVE),
            condition,
        ))
    }
}

fn hermitian_pairs(basis: &HermitianBasis, x: &DVector<f64>) -> Vec<(f64, DVector<f64>)> {
    let m = basis.to_matrix(x);
    let eig = m.symmetric_eigen();
    (0..eig.eigenvalues.len())
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            let p = v * v.adjoint();
            (eig.eigenvalues[k], basis.from_matrix(&p))
        })
        .collect()
}

fn spin_pairs(x: &DVector<f64>) -> Vec<(f64, DVector<f64>)> {
    let d = x.len();
    let t = x[0];
    let v = x.rows(1, d - 1).into_owned();
    let r = v.norm();
    let dir = if r > 0.0 {
        v / r
    } else {
        DVector::from_fn(d - 1, |k, _| if k == 0 { 1.0 } else { 0.0 })
    };
    let half = |s: f64| {
        let mut c = DVector::zeros(d);
        c[0] = 0.5;
        c.rows_mut(1, d - 1).copy_from(&(&dir * (0.5 * s)));
        c
    };
    vec![(t + r, half(1.0)), (t - r, half(-1.0))]
}

struct GenericState<'a> {
    entry: &'a CatalogEntry,
    rng: linalg::Prng,
    condition: f64,
}

fn generic(entry: &CatalogEntry, x: &Element, unit: &DVector<f64>) -> Result<SpectralData> {
    let mut st = GenericState {
        entry,
        rng: linalg::prng(0x5eed_f4a3),
        condition: 1.0,
    };
    let mut pairs = Vec::new();
    split(&mut st, x.coords(), unit, 0, &mut pairs)?;
    let cond = st.condition;
    let data = SpectralData::from_pairs(pairs, x.coords(), SpectralPath::Generic);
    verify_reconstruction(data, x, cond)
}

/// Decomposes `x ∈ J_1(f)` relative to the unit `f` of that subalgebra and
/// appends `(λ, c)` pairs with `c` primitive.
fn split(
    st: &mut GenericState<'_>,
    x: &DVector<f64>,
    f: &DVector<f64>,
    depth: usize,
    out: &mut Vec<(f64, DVector<f64>)>,
) -> Result<()> {
    let spec = &st.entry.spec;
    let d = spec.dim();
    if depth > d {
        return Err(Error::numerical("idempotent splitting did not terminate", f64::NAN, st.condition));
    }
    let s = x.norm();
    let eigen: Vec<(f64, DVector<f64>)> = if s <= f64::MIN_POSITIVE * 1e10 {
        vec![(0.0, f.clone())]
    } else {
        let y = x / s;
        let mus = krylov_eigenvalues(st, &y, f)?;
        let mut res = Vec::with_capacity(mus.len());
        for (k, &mk) in mus.iter().enumerate() {
            let mut v = f.clone();
            for (j, &mj) in mus.iter().enumerate() {
                if j == k {
                    continue;
                }
                let gap = mk - mj;
                st.condition = st.condition.max(1.0 / gap.abs());
                v = (spec.mul(&y, &v) - &v * mj) / gap;
            }
            res.push((mk * s, v));
        }
        res
    };

    for (lambda, c) in eigen {
        let l = spec.left_matrix(&c);
        let one = linalg::null_space(
            &(&l - DMatrix::identity(d, d)),
            EIGENSPACE_TOL * linalg::max_abs(&l).max(1.0),
        );
        if one.ncols() <= 1 {
            out.push((lambda, c));
            continue;
        }
        // A generic element of J_1(c) has simple spectrum there.
        let w = linalg::random_vector(&mut st.rng, one.ncols(), -1.0, 1.0);
        let z = &one * w;
        let mut sub = Vec::new();
        split(st, &z, &c, depth + 1, &mut sub)?;
        out.extend(sub.into_iter().map(|(_, ci)| (lambda, ci)));
    }
    Ok(())
}

/// Distinct eigenvalues of `l_y` on `span{f, y, y², …}`, i.e. the roots of
/// the minimal polynomial of `y` in the subalgebra with unit `f`.
fn krylov_eigenvalues(st: &mut GenericState<'_>, y: &DVector<f64>, f: &DVector<f64>) -> Result<Vec<f64>> {
    let spec = &st.entry.spec;
    let d = spec.dim();
    let mut q: Vec<DVector<f64>> = vec![f / f.norm()];
    while q.len() < d {
        let w = spec.mul(y, q.last().expect("nonempty"));
        let before = w.norm();
        if !linalg::extend_orthonormal(&mut q, &w, KRYLOV_TOL) || before == 0.0 {
            break;
        }
    }
    let m = q.len();
    let qm = DMatrix::from_columns(&q);
    let ly = spec.left_matrix(y);
    // Hessenberg matrix of l_y on the Krylov space; similar to the companion
    // matrix of the minimal polynomial.
    let h = qm.transpose() * ly * &qm;
    let ev = h
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::numerical("eigenvalue iteration did not converge", f64::NAN, st.condition))?
        .complex_eigenvalues();
    let scale = ev.iter().fold(1.0f64, |a, e| a.max(e.norm()));
    if let Some(bad) = ev.iter().find(|e| e.im.abs() > 1e-6 * scale) {
        return Err(Error::numerical(
            "minimal polynomial has non-real roots",
            bad.im.abs(),
            st.condition,
        ));
    }
    let mut roots: Vec<f64> = ev.iter().map(|e| e.re).collect();
    for r in roots.iter_mut() {
        *r = newton_polish(&h, *r);
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    let mut merged: Vec<f64> = Vec::with_capacity(m);
    for r in roots {
        match merged.last() {
            Some(&last) if (last - r).abs() <= MERGE_TOL => {}
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

/// One Newton step on `p(λ) = det(λ − H)`, using `p'/p = tr (λ − H)⁻¹`.
fn newton_polish(h: &DMatrix<f64>, lambda: f64) -> f64 {
    let m = h.nrows();
    let a = DMatrix::identity(m, m) * lambda - h;
    match a.try_inverse() {
        Some(inv) => {
            let t = inv.trace();
            if t.is_finite() && t != 0.0 {
                let step = 1.0 / t;
                if step.abs() < 1e-6 * lambda.abs().max(1.0) {
                    return lambda - step;
                }
            }
            lambda
        }
        None => lambda,
    }
}

/// Rank of a Jordan algebra, read off as the number of spectral coefficients
/// of a seeded random element.
pub fn jordan_rank(entry: &CatalogEntry) -> Result<usize> {
    let mut rng = linalg::prng(0x7a4b);
    let x = Element(linalg::random_vector(&mut rng, entry.dim(), -1.0, 1.0));
    Ok(spectral_decompose(entry, &x)?.coefficients.len())
}

/// Coefficients `[a_0, …, a_{r−1}]` of `λ^r + a_{r−1}λ^{r−1} + … + a_0 = Π(λ − λ_i)`.
pub fn minimal_polynomial_coeffs(entry: &CatalogEntry, x: &Element) -> Result<Vec<f64>> {
    let sd = spectral_decompose(entry, x)?;
    Ok(linalg::monic_from_roots(&sd.coefficients))
}

/// `‖x^r + Σ a_k x^k‖` with Jordan powers `x^0 = 1`, `x^{k+1} = x • x^k`.
pub fn minimal_polynomial_residual(entry: &CatalogEntry, x: &Element, coeffs: &[f64]) -> Result<f64> {
    let mut p = unit_of(entry)?;
    let mut acc = DVector::zeros(entry.dim());
    for &a in coeffs {
        acc += &p * a;
        p = entry.spec.mul(x.coords(), &p);
    }
    acc += p;
    Ok(acc.norm())
}

/// A Peirce space `J_ij` (`i ≤ j`, zero based) with a basis orthonormal for
/// the chosen form.
#[derive(Clone, Debug)]
pub struct PeirceBlock {
    pub i: usize,
    pub j: usize,
    pub basis: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct PeirceDecomposition {
    pub frame: JordanFrame,
    pub variant: FormVariant,
    pub blocks: Vec<PeirceBlock>,
    /// Largest `‖l_{c_k} b − ½(δ_ik + δ_jk) b‖` over all basis vectors.
    pub eigenvalue_residual: f64,
}

impl PeirceDecomposition {
    pub fn block(&self, i: usize, j: usize) -> Option<&PeirceBlock> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.blocks.iter().find(|b| b.i == i && b.j == j)
    }

    pub fn dims(&self) -> Vec<(usize, usize, usize)> {
        self.blocks.iter().map(|b| (b.i, b.j, b.basis.len())).collect()
    }
}

/// Simultaneous eigenspaces of `{l_{c_k}}` for eigenvalue patterns
/// `½(δ_ik + δ_jk)`.
pub fn peirce_decompose(entry: &CatalogEntry, frame: &[Element], variant: FormVariant) -> Result<PeirceDecomposition> {
    require_jordan(entry)?;
    let check = jordan_frame_check(entry, frame);
    if !check.passed {
        return Err(Error::InvalidFrame(check.failures.join("; ")));
    }
    let spec = &entry.spec;
    let d = spec.dim();
    let r = frame.len();
    let form = form_matrix(entry, variant)?;
    let ls: Vec<DMatrix<f64>> = frame.iter().map(|c| spec.left_matrix(c.coords())).collect();
    let lmax = ls.iter().fold(1.0f64, |a, l| a.max(linalg::max_abs(l)));
    let mut blocks = Vec::new();
    let mut eig_res: f64 = 0.0;
    for i in 0..r {
        for j in i..r {
            let mut stacked = DMatrix::zeros(r * d, d);
            for (k, l) in ls.iter().enumerate() {
                let theta = 0.5 * ((k == i) as u8 as f64 + (k == j) as u8 as f64);
                let m = l - DMatrix::identity(d, d) * theta;
                stacked.view_mut((k * d, 0), (d, d)).copy_from(&m);
            }
            let n = linalg::null_space(&stacked, EIGENSPACE_TOL * lmax);
            let basis = if n.ncols() == 0 {
                Vec::new()
            } else {
                let g = n.transpose() * &form * &n;
                let eig = linalg::symmetric_eigen(&g);
                if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
                    return Err(Error::DegenerateForm(format!(
                        "form is not positive on the Peirce space ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                // B = N G^{-1/2}
                let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt()));
                let b = &n * (&eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose());
                (0..b.ncols()).map(|c| Element(b.column(c).into_owned())).collect()
            };
            for b in &basis {
                for (k, l) in ls.iter().enumerate() {
                    let theta = 0.5 * ((k == i) as u8 as f64 + (k == j) as u8 as f64);
                    let v: &Element = b;
                    let res = (l * v.coords() - v.coords() * theta).norm() / v.norm();
                    eig_res = eig_res.max(res);
                }
            }
            blocks.push(PeirceBlock { i, j, basis });
        }
    }
    let total: usize = blocks.iter().map(|b| b.basis.len()).sum();
    if total != d {
        return Err(Error::numerical(
            format!("Peirce spaces have total dimension {total}, expected {d}"),
            eig_res,
            f64::NAN,
        ));
    }
    Ok(PeirceDecomposition {
        frame: JordanFrame {
            idempotents: frame.to_vec(),
        },
        variant,
        blocks,
        eigenvalue_residual: eig_res,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeirceCheck {
    pub dims: Vec<(usize, usize, usize)>,
    pub dims_sum: usize,
    pub dim: usize,
    pub diagonal_one_dimensional: bool,
    pub off_diagonal_nonzero: bool,
    pub eigenvalue_residual: f64,
    /// Largest off-block Gram entry of the chosen form.
    pub orthogonality_residual: f64,
    /// Largest violation of the product relations between Peirce spaces.
    pub product_residual: f64,
}

/// The index pairs whose Peirce spaces may contain `{J_ab, J_cd}`.
fn allowed_targets(a: usize, b: usize, c: usize, d: usize) -> Vec<(usize, usize)> {
    let ord = |p: usize, q: usize| if p <= q { (p, q) } else { (q, p) };
    if (a, b) == (c, d) {
        return if a == b { vec![(a, a)] } else { vec![(a, a), (b, b)] };
    }
    if a == c {
        vec![ord(b, d)]
    } else if a == d {
        vec![ord(b, c)]
    } else if b == c {
        vec![ord(a, d)]
    } else if b == d {
        vec![ord(a, c)]
    } else {
        Vec::new()
    }
}

/// Checks orthogonality of the blocks and the product relations
/// `{J_ij, J_kl} = 0` for disjoint pairs, `{J_ij, J_jl} ⊂ J_il` and
/// `{J_ij, J_ij} ⊂ J_ii + J_jj`.
pub fn check_peirce(entry: &CatalogEntry, p: &PeirceDecomposition) -> Result<PeirceCheck> {
    let spec = &entry.spec;
    let form = form_matrix(entry, p.variant)?;
    let mut orth: f64 = 0.0;
    for (x, bx) in p.blocks.iter().enumerate() {
        for by in p.blocks.iter().skip(x + 1) {
            for u in &bx.basis {
                for v in &by.basis {
                    orth = orth.max((u.coords().transpose() * &form * v.coords())[0].abs());
                }
            }
        }
    }
    let mut prod: f64 = 0.0;
    for bx in &p.blocks {
        for by in &p.blocks {
            if bx.basis.is_empty() || by.basis.is_empty() {
                continue;
            }
            let targets = allowed_targets(bx.i, bx.j, by.i, by.j);
            let target_basis: Vec<&Element> = targets
                .iter()
                .filter_map(|(i, j)| p.block(*i, *j))
                .flat_map(|b| b.basis.iter())
                .collect();
            for u in &bx.basis {
                for v in &by.basis {
                    let w = spec.mul(u.coords(), v.coords());
                    let mut rest = w.clone();
                    for t in &target_basis {
                        let c = (t.coords().transpose() * &form * &w)[0];
                        rest -= t.coords() * c;
                    }
                    prod = prod.max(rest.norm() / (u.norm() * v.norm()));
                }
            }
        }
    }
    let dims = p.dims();
    let dims_sum = dims.iter().map(|t| t.2).sum();
    Ok(PeirceCheck {
        diagonal_one_dimensional: dims.iter().filter(|t| t.0 == t.1).all(|t| t.2 == 1),
        off_diagonal_nonzero: dims.iter().filter(|t| t.0 != t.1).all(|t| t.2 > 0),
        dims,
        dims_sum,
        dim: spec.dim(),
        eigenvalue_residual: p.eigenvalue_residual,
        orthogonality_residual: orth,
        product_residual: prod,
    })
}

/// Draws a seeded random element with coordinates uniform in `[lo, hi)`.
pub fn random_element(entry: &CatalogEntry, rng: &mut linalg::Prng, lo: f64, hi: f64) -> Element {
    Element(DVector::from_fn(entry.dim(), |_, _| rng.random_range(lo..hi)))
}
