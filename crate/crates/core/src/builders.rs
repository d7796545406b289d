//! Catalog of concrete algebras: ℝⁿ, self-adjoint matrices over ℝ/ℂ/ℍ, spin
//! factors, direct sums, a few Lie algebras and user-supplied JSON tables.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    check_axioms, find_unit, AlgebraFile, AlgebraKind, AlgebraSpec, Element, DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    pub fn parse(s: &str) -> Result<Field> {
        match s {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            "quaternion" | "h" => Ok(Field::Quaternion),
            _ => Err(Error::InvalidInput(format!("unknown field '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
            Field::Quaternion => "quaternion",
        }
    }

    /// Real dimension of the self-adjoint n×n matrices over this field.
    pub fn hermitian_dim(self, n: usize) -> usize {
        match self {
            Field::Real => n * (n + 1) / 2,
            Field::Complex => n * n,
            Field::Quaternion => n * (2 * n - 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieName {
    So3,
    Sl2r,
    Un(usize),
}

/// Which concrete model an entry was built from. Spectral and metric routines
/// use this to pick exact fast paths.
#[derive(Clone, Debug)]
pub enum Structure {
    Componentwise(usize),
    Hermitian(HermitianBasis),
    Spin(usize),
    /// Factors with the coordinate offset of each block.
    DirectSum(Vec<(usize, CatalogEntry)>),
    Lie(LieName),
    Custom,
}

/// Orthonormal real coordinates on self-adjoint matrices.
///
/// Complex and real fields use n×n complex matrices. Quaternionic matrices
/// `A + Bj` are stored through the embedding `[[A, B], [-conj(B), conj(A)]]`,
/// in which case traces are divided by 2 so the basis stays orthonormal for
/// the real trace form.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    pub n: usize,
    pub field: Field,
    pub matrices: Vec<DMatrix<Complex64>>,
    pub labels: Vec<String>,
}

impl HermitianBasis {
    pub fn new(n: usize, field: Field) -> Self {
        let m = if field == Field::Quaternion { 2 * n } else { n };
        let zero = || DMatrix::<Complex64>::zeros(m, m);
        let one = Complex64::new(1.0, 0.0);
        let iu = Complex64::new(0.0, 1.0);
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut matrices = Vec::new();
        let mut labels = Vec::new();

        // (a, b) entries of a quaternion q = a + b j placed at (r, c); the
        // conjugate goes to (c, r).
        let put_quat = |mat: &mut DMatrix<Complex64>, r: usize, c: usize, a: Complex64, b: Complex64| {
            mat[(r, c)] += a;
            mat[(n + r, n + c)] += a.conj();
            mat[(r, n + c)] += b;
            mat[(n + r, c)] -= b.conj();
        };

        for i in 0..n {
            let mut e = zero();
            if field == Field::Quaternion {
                put_quat(&mut e, i, i, one, Complex64::new(0.0, 0.0));
            } else {
                e[(i, i)] = one;
            }
            matrices.push(e);
            labels.push(format!("E{}{}", i + 1, i + 1));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let tag = format!("{}{}", i + 1, j + 1);
                match field {
                    Field::Real | Field::Complex => {
                        let mut sym = zero();
                        sym[(i, j)] = s;
                        sym[(j, i)] = s;
                        matrices.push(sym);
                        labels.push(format!("S{tag}"));
                        if field == Field::Complex {
                            let mut im = zero();
                            im[(i, j)] = iu * s;
                            im[(j, i)] = -iu * s;
                            matrices.push(im);
                            labels.push(format!("I{tag}"));
                        }
                    }
                    Field::Quaternion => {
                        let z = Complex64::new(0.0, 0.0);
                        // q ∈ {1, i, j, k} written as (a, b) with q = a + b j
                        let units = [
                            ("S", one, z),
                            ("I", iu, z),
                            ("J", z, one),
                            ("K", z, iu),
                        ];
                        for (name, a, b) in units {
                            let mut q = zero();
                            put_quat(&mut q, i, j, a * s, b * s);
                            // conjugate quaternion -(a + bj) + 2 Re(a)
                            let (ca, cb) = (a.conj(), -b);
                            put_quat(&mut q, j, i, ca * s, cb * s);
                            matrices.push(q);
                            labels.push(format!("{name}{tag}"));
                        }
                    }
                }
            }
        }
        Self {
            n,
            field,
            matrices,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    fn trace_scale(&self) -> f64 {
        if self.field == Field::Quaternion {
            2.0
        } else {
            1.0
        }
    }

    /// Matrix (in the complex or embedded representation) of a coordinate vector.
    pub fn to_matrix(&self, coords: &DVector<f64>) -> DMatrix<Complex64> {
        let m = self.matrices[0].nrows();
        let mut out = DMatrix::zeros(m, m);
        for (b, &c) in self.matrices.iter().zip(coords.iter()) {
            if c != 0.0 {
                out += b * Complex64::new(c, 0.0);
            }
        }
        out
    }

    /// Coordinates of a self-adjoint matrix, `c_k = Re tr(B_k M) / s`.
    pub fn from_matrix(&self, m: &DMatrix<Complex64>) -> DVector<f64> {
        let s = self.trace_scale();
        DVector::from_iterator(
            self.dim(),
            self.matrices.iter().map(|b| (b * m).trace().re / s),
        )
    }
}

/// An algebra together with known ground truth.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: AlgebraSpec,
    pub rank: Option<usize>,
    pub unit: Option<Element>,
    pub canonical_frame: Vec<Element>,
    pub notes: String,
    pub structure: Structure,
    /// Matrix of the associative form τ̂ in the algebra basis, when the model
    /// comes with one.
    pub tau_hat: Option<DMatrix<f64>>,
    pub simple: bool,
}

impl CatalogEntry {
    /// Wraps a bare spec with no metadata. The unit is detected if present.
    pub fn custom(name: impl Into<String>, spec: AlgebraSpec) -> Self {
        let unit = find_unit(&spec).0;
        Self {
            name: name.into(),
            spec,
            rank: None,
            unit,
            canonical_frame: Vec::new(),
            notes: "user supplied".into(),
            structure: Structure::Custom,
            tau_hat: None,
            simple: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.spec.kind()
    }

    /// True for the self-adjoint matrix models (and sums built only from them
    /// and ℝⁿ) where the associative form τ̂ is the natural default.
    pub fn prefers_tau_hat(&self) -> bool {
        match &self.structure {
            Structure::Hermitian(_) => true,
            Structure::DirectSum(f) => {
                self.tau_hat.is_some()
                    && f.iter().any(|(_, e)| matches!(e.structure, Structure::Hermitian(_)))
            }
            _ => false,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("size parameter must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn basis_vector(d: usize, i: usize) -> Element {
    Element::basis(d, i)
}

pub fn build_rn(n: usize) -> Result<CatalogEntry> {
    check_n(n)?;
    let labels = (1..=n).map(|i| format!("e{i}")).collect();
    let spec = AlgebraSpec::from_basis_products(AlgebraKind::Jordan, labels, DEFAULT_TOLERANCE, |i, j| {
        let mut v = vec![0.0; n];
        if i == j {
            v[i] = 1.0;
        }
        v
    })?;
    Ok(CatalogEntry {
        name: format!("rn:{n}"),
        spec,
        rank: Some(n),
        unit: Some(Element::new(vec![1.0; n])),
        canonical_frame: (0..n).map(|i| basis_vector(n, i)).collect(),
        notes: "componentwise product on R^n".into(),
        structure: Structure::Componentwise(n),
        tau_hat: Some(DMatrix::identity(n, n)),
        simple: n == 1,
    })
}

pub fn build_hermitian(n: usize, field: Field) -> Result<CatalogEntry> {
    check_n(n)?;
    let basis = HermitianBasis::new(n, field);
    let d = basis.dim();
    let spec = AlgebraSpec::from_basis_products(
        AlgebraKind::Jordan,
        basis.labels.clone(),
        DEFAULT_TOLERANCE,
        |i, j| {
            let (a, b) = (&basis.matrices[i], &basis.matrices[j]);
            let p = (a * b + b * a) * Complex64::new(0.5, 0.0);
            basis.from_matrix(&p).iter().copied().collect()
        },
    )?;
    let mut unit = vec![0.0; d];
    unit[..n].iter_mut().for_each(|u| *u = 1.0);
    Ok(CatalogEntry {
        name: format!("herm:{n}:{}", field.name()),
        spec,
        rank: Some(n),
        unit: Some(Element::new(unit)),
        canonical_frame: (0..n).map(|i| basis_vector(d, i)).collect(),
        notes: format!("self-adjoint {n}x{n} {} matrices, product (AB+BA)/2", field.name()),
        structure: Structure::Hermitian(basis),
        tau_hat: Some(DMatrix::identity(d, d)),
        simple: true,
    })
}

pub fn build_spin(n: usize) -> Result<CatalogEntry> {
    check_n(n)?;
    let d = n + 1;
    let labels = std::iter::once("1".to_string())
        .chain((1..=n).map(|i| format!("e{i}")))
        .collect();
    let spec = AlgebraSpec::from_basis_products(AlgebraKind::Jordan, labels, DEFAULT_TOLERANCE, |i, j| {
        let mut v = vec![0.0; d];
        match (i, j) {
            (0, k) | (k, 0) => v[k] = 1.0,
            (k, l) if k == l => v[0] = 1.0,
            _ => {}
        }
        v
    })?;
    let mut c_plus = vec![0.0; d];
    let mut c_minus = vec![0.0; d];
    c_plus[0] = 0.5;
    c_plus[1] = 0.5;
    c_minus[0] = 0.5;
    c_minus[1] = -0.5;
    Ok(CatalogEntry {
        name: format!("spin:{n}"),
        spec,
        rank: Some(2),
        unit: Some(basis_vector(d, 0)),
        canonical_frame: vec![Element::new(c_plus), Element::new(c_minus)],
        notes: format!("spin factor R1 + R^{n} with x.y = <x,y>1"),
        structure: Structure::Spin(n),
        tau_hat: Some(DMatrix::identity(d, d)),
        // JSpin(1) is isomorphic to R^2.
        simple: n >= 2,
    })
}

pub fn build_direct_sum(entries: &[CatalogEntry]) -> Result<CatalogEntry> {
    let first = entries
        .first()
        .ok_or_else(|| Error::InvalidInput("direct sum needs at least one summand".into()))?;
    let kind = first.kind();
    if let Some(bad) = entries.iter().find(|e| e.kind() != kind) {
        return Err(Error::KindMismatch {
            expected: kind.to_string(),
            found: bad.kind().to_string(),
        });
    }
    let d: usize = entries.iter().map(|e| e.dim()).sum();
    let mut c = vec![0.0; d * d * d];
    let mut labels = Vec::with_capacity(d);
    let mut factors = Vec::with_capacity(entries.len());
    let mut off = 0;
    for (f, e) in entries.iter().enumerate() {
        let m = e.dim();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    c[((off + i) * d + off + j) * d + off + k] = e.spec.constant(i, j, k);
                }
            }
        }
        labels.extend(e.spec.labels().iter().map(|l| format!("{}.{l}", f + 1)));
        factors.push((off, e.clone()));
        off += m;
    }
    let tol = entries.iter().map(|e| e.spec.tolerance()).fold(f64::INFINITY, f64::min);
    let spec = AlgebraSpec::new(kind, labels, c, tol)?;

    let embed = |off: usize, x: &Element| {
        let mut v = DVector::zeros(d);
        v.rows_mut(off, x.dim()).copy_from(x.coords());
        Element(v)
    };
    let rank = entries.iter().map(|e| e.rank).sum::<Option<usize>>();
    let unit = if entries.iter().all(|e| e.unit.is_some()) {
        let mut u = DVector::zeros(d);
        for (off, e) in &factors {
            u += embed(*off, e.unit.as_ref().expect("checked")).0;
        }
        Some(Element(u))
    } else {
        None
    };
    let canonical_frame = factors
        .iter()
        .flat_map(|(off, e)| e.canonical_frame.iter().map(move |c| embed(*off, c)))
        .collect();
    let tau_hat = if entries.iter().all(|e| e.tau_hat.is_some()) {
        let mut t = DMatrix::zeros(d, d);
        for (off, e) in &factors {
            let th = e.tau_hat.as_ref().expect("checked");
            t.view_mut((*off, *off), th.shape()).copy_from(th);
        }
        Some(t)
    } else {
        None
    };
    let name = format!(
        "sum:{}",
        entries.iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join("+")
    );
    Ok(CatalogEntry {
        name,
        spec,
        rank,
        unit,
        canonical_frame,
        notes: "block-diagonal direct sum".into(),
        structure: Structure::DirectSum(factors),
        tau_hat,
        simple: entries.len() == 1 && first.simple,
    })
}

pub fn build_lie(name: LieName) -> Result<CatalogEntry> {
    let (labels, products): (Vec<String>, Box<dyn Fn(usize, usize) -> Vec<f64>>) = match name {
        LieName::So3 => (
            vec!["L1".into(), "L2".into(), "L3".into()],
            Box::new(|i, j| {
                let mut v = vec![0.0; 3];
                if i != j {
                    let k = 3 - i - j;
                    // sign of the permutation (i, j, k)
                    v[k] = if (j + 3 - i) % 3 == 1 { 1.0 } else { -1.0 };
                }
                v
            }),
        ),
        LieName::Sl2r => (
            vec!["h".into(), "e".into(), "f".into()],
            Box::new(|i, j| {
                let mut v = vec![0.0; 3];
                match (i, j) {
                    (0, 1) => v[1] = 2.0,
                    (1, 0) => v[1] = -2.0,
                    (0, 2) => v[2] = -2.0,
                    (2, 0) => v[2] = 2.0,
                    (1, 2) => v[0] = 1.0,
                    (2, 1) => v[0] = -1.0,
                    _ => {}
                }
                v
            }),
        ),
        LieName::Un(n) => {
            check_n(n)?;
            let (labels, mats) = skew_hermitian_basis(n);
            let mats2 = mats.clone();
            (
                labels,
                Box::new(move |i, j| {
                    let p = &mats2[i] * &mats2[j] - &mats2[j] * &mats2[i];
                    mats2.iter().map(|b| (b.adjoint() * &p).trace().re).collect()
                }),
            )
        }
    };
    let spec = AlgebraSpec::from_basis_products(AlgebraKind::Lie, labels, DEFAULT_TOLERANCE, products)?;
    let tag = match name {
        LieName::So3 => "so3".to_string(),
        LieName::Sl2r => "sl2r".to_string(),
        LieName::Un(n) => format!("un:{n}"),
    };
    Ok(CatalogEntry {
        name: format!("lie:{tag}"),
        spec,
        rank: None,
        unit: None,
        canonical_frame: Vec::new(),
        notes: format!("Lie algebra {tag}"),
        structure: Structure::Lie(name),
        tau_hat: None,
        simple: !matches!(name, LieName::Un(_)),
    })
}

fn skew_hermitian_basis(n: usize) -> (Vec<String>, Vec<DMatrix<Complex64>>) {
    let iu = Complex64::new(0.0, 1.0);
    let s = FRAC_1_SQRT_2;
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for k in 0..n {
        let mut m = DMatrix::zeros(n, n);
        m[(k, k)] = iu;
        mats.push(m);
        labels.push(format!("D{}", k + 1));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let mut a = DMatrix::zeros(n, n);
            a[(k, l)] = Complex64::new(s, 0.0);
            a[(l, k)] = Complex64::new(-s, 0.0);
            mats.push(a);
            labels.push(format!("A{}{}", k + 1, l + 1));
            let mut b = DMatrix::zeros(n, n);
            b[(k, l)] = iu * s;
            b[(l, k)] = iu * s;
            mats.push(b);
            labels.push(format!("B{}{}", k + 1, l + 1));
        }
    }
    (labels, mats)
}

/// The two-dimensional algebra ℝ[ε]/(ε²) as a JSON algebra file. It is a
/// Jordan algebra whose trace form is degenerate.
pub const DUAL_NUMBERS_JSON: &str = r#"{
  "dim": 2,
  "kind": "jordan",
  "basis": ["1", "eps"],
  "constants": [[0, 0, 0, 1.0], [0, 1, 1, 1.0], [1, 0, 1, 1.0]],
  "tolerance": 1e-9
}"#;

pub fn load_custom(path: impl AsRef<Path>) -> Result<CatalogEntry> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut entry = load_custom_str(&text)?;
    entry.name = path.display().to_string();
    Ok(entry)
}

/// Parses and validates an algebra file. Optional `rank`, `unit` and `frame`
/// fields are checked against the table, never trusted.
pub fn load_custom_str(text: &str) -> Result<CatalogEntry> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    let spec = file.to_spec()?;
    check_axioms(&spec).require(spec.kind())?;
    let d = spec.dim();
    let mut entry = CatalogEntry::custom("custom", spec);

    if let Some(u) = &file.unit {
        if u.len() != d {
            return Err(Error::InvalidInput(format!("unit has length {} but dim is {d}", u.len())));
        }
        let u = Element::new(u.clone());
        let l = entry.spec.left_matrix(u.coords());
        let id = DMatrix::<f64>::identity(d, d);
        let res = linalg::max_abs(&(l - &id));
        let r = right_multiplication(&entry.spec, u.coords());
        let res = res.max(linalg::max_abs(&(r - id)));
        if res > entry.spec.tolerance() * entry.spec.scale() * 10.0 {
            return Err(Error::InvalidInput(format!(
                "declared unit is not a two-sided unit (residual {res:e})"
            )));
        }
        entry.unit = Some(u);
    }
    if let Some(frame) = &file.frame {
        if entry.kind() != AlgebraKind::Jordan {
            return Err(Error::InvalidInput("a frame is only meaningful for Jordan algebras".into()));
        }
        let mut elems = Vec::with_capacity(frame.len());
        for c in frame {
            if c.len() != d {
                return Err(Error::InvalidInput(format!(
                    "frame element has length {} but dim is {d}",
                    c.len()
                )));
            }
            elems.push(Element::new(c.clone()));
        }
        let check = crate::spectral::jordan_frame_check(&entry, &elems);
        if !check.passed {
            return Err(Error::InvalidFrame(check.failures.join("; ")));
        }
        entry.canonical_frame = elems;
    }
    if let Some(r) = file.rank {
        if entry.kind() != AlgebraKind::Jordan {
            return Err(Error::InvalidInput("rank is only meaningful for Jordan algebras".into()));
        }
        if !entry.canonical_frame.is_empty() && entry.canonical_frame.len() != r {
            return Err(Error::InvalidInput(format!(
                "declared rank {r} but frame has {} elements",
                entry.canonical_frame.len()
            )));
        }
        let computed = crate::spectral::jordan_rank(&entry)?;
        if computed != r {
            return Err(Error::InvalidInput(format!(
                "declared rank {r} but the algebra has rank {computed}"
            )));
        }
        entry.rank = Some(r);
    } else if !entry.canonical_frame.is_empty() {
        entry.rank = Some(entry.canonical_frame.len());
    }
    Ok(entry)
}

fn right_multiplication(spec: &AlgebraSpec, x: &DVector<f64>) -> DMatrix<f64> {
    let d = spec.dim();
    DMatrix::from_fn(d, d, |k, i| (0..d).map(|j| x[j] * spec.constant(i, j, k)).sum())
}

/// Parses a catalog source string: `rn:N`, `herm:N:FIELD`, `spin:N`,
/// `lie:so3`, `lie:sl2r`, `lie:un:N`, `sum:A+B+...`, or a path to a JSON file.
pub fn from_source(source: &str) -> Result<CatalogEntry> {
    let source = source.trim();
    if let Some(rest) = source.strip_prefix("sum:") {
        let parts = rest
            .split('+')
            .map(from_source)
            .collect::<Result<Vec<_>>>()?;
        return build_direct_sum(&parts);
    }
    let parts: Vec<&str> = source.split(':').collect();
    let int = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("expected a positive integer, got '{s}'")))
    };
    match parts.as_slice() {
        ["rn", n] => build_rn(int(n)?),
        ["herm", n] => build_hermitian(int(n)?, Field::Real),
        ["herm", n, f] => build_hermitian(int(n)?, Field::parse(f)?),
        ["spin", n] => build_spin(int(n)?),
        ["lie", "so3"] => build_lie(LieName::So3),
        ["lie", "sl2r"] => build_lie(LieName::Sl2r),
        ["lie", "un", n] => build_lie(LieName::Un(int(n)?)),
        _ if Path::new(source).is_file() => load_custom(source),
        _ => Err(Error::InvalidInput(format!("unknown algebra '{source}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::product;

    #[test]
    fn hermitian_basis_is_orthonormal_and_self_adjoint() {
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            for n in 1..=3 {
                let b = HermitianBasis::new(n, field);
                assert_eq!(b.dim(), field.hermitian_dim(n));
                for (k, m) in b.matrices.iter().enumerate() {
                    assert!((m - m.adjoint()).norm() < 1e-15, "{field:?} {k}");
                    let coords = b.from_matrix(m);
                    for (l, c) in coords.iter().enumerate() {
                        let want = if l == k { 1.0 } else { 0.0 };
                        assert!((c - want).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn spin_basis_products() {
        let s = build_spin(2).unwrap();
        let x = Element::new(vec![0.0, 1.0, 0.0]);
        assert_eq!(product(&s.spec, &x, &x).unwrap().to_vec(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn so3_is_cross_product() {
        let g = build_lie(LieName::So3).unwrap();
        let e1 = Element::basis(3, 0);
        let e2 = Element::basis(3, 1);
        assert_eq!(product(&g.spec, &e1, &e2).unwrap().to_vec(), vec![0.0, 0.0, 1.0]);
        assert_eq!(product(&g.spec, &e2, &e1).unwrap().to_vec(), vec![0.0, 0.0, -1.0]);
        let e3 = Element::basis(3, 2);
        assert_eq!(product(&g.spec, &e3, &e1).unwrap().to_vec(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_size_rejected() {
        assert!(build_rn(0).is_err());
        assert!(build_hermitian(0, Field::Real).is_err());
        assert!(build_spin(0).is_err());
        assert!(build_lie(LieName::Un(0)).is_err());
    }

    #[test]
    fn source_strings() {
        assert_eq!(from_source("rn:5").unwrap().dim(), 5);
        assert_eq!(from_source("herm:2:complex").unwrap().dim(), 4);
        assert_eq!(from_source("herm:3:quaternion").unwrap().dim(), 15);
        assert_eq!(from_source("spin:3").unwrap().dim(), 4);
        assert_eq!(from_source("lie:un:2").unwrap().dim(), 4);
        assert_eq!(from_source("sum:herm:2:real+rn:2").unwrap().dim(), 5);
        assert!(matches!(from_source("octonions:3"), Err(Error::InvalidInput(_))));
        assert!(from_source("rn:x").is_err());
    }

    #[test]
    fn mixed_kind_sum_rejected() {
        let a = build_rn(2).unwrap();
        let b = build_lie(LieName::So3).unwrap();
        assert!(matches!(build_direct_sum(&[a, b]), Err(Error::KindMismatch { .. })));
    }
}
