//! Finite-dimensional real algebras given by structure constants.
//!
//! An algebra of dimension `d` is stored as a dense tensor `C` with
//! `e_i • e_j = Σ_k C[i][j][k] e_k`. Elements live in the coordinate basis
//! `e_0..e_{d-1}`, dual elements in the dual basis, and the pairing between
//! them is the plain dot product of coordinates.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Jordan,
    Lie,
    Associative,
    General,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::Jordan => "jordan",
            AlgebraKind::Lie => "lie",
            AlgebraKind::Associative => "associative",
            AlgebraKind::General => "general",
        };
        f.write_str(s)
    }
}

macro_rules! coordinate_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name(pub DVector<f64>);

        impl $name {
            pub fn new(coords: Vec<f64>) -> Self {
                Self(DVector::from_vec(coords))
            }

            pub fn zeros(dim: usize) -> Self {
                Self(DVector::zeros(dim))
            }

            pub fn basis(dim: usize, index: usize) -> Self {
                let mut v = DVector::zeros(dim);
                v[index] = 1.0;
                Self(v)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &DVector<f64> {
                &self.0
            }

            pub fn to_vec(&self) -> Vec<f64> {
                self.0.iter().copied().collect()
            }

            pub fn norm(&self) -> f64 {
                self.0.norm()
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|x| x.is_finite())
            }
        }

        impl From<DVector<f64>> for $name {
            fn from(v: DVector<f64>) -> Self {
                Self(v)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_seq(self.0.iter())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                Ok(Self::new(Vec::<f64>::deserialize(d)?))
            }
        }
    };
}

coordinate_vector!(
    /// Element of the algebra, in the algebra basis.
    Element
);
coordinate_vector!(
    /// Element of the dual space, in the basis dual to the algebra basis.
    DualElement
);

impl DualElement {
    /// The pairing `<ξ, a>`.
    pub fn pair(&self, a: &Element) -> f64 {
        self.0.dot(&a.0)
    }
}

/// Linear map on algebra coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator(pub DMatrix<f64>);

impl LinearOperator {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element(&self.0 * &x.0)
    }

    /// The transpose, acting on dual coordinates.
    pub fn dual(&self) -> LinearOperator {
        LinearOperator(self.0.transpose())
    }
}

/// A finite-dimensional real algebra as a structure-constant tensor.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    dim: usize,
    kind: AlgebraKind,
    labels: Vec<String>,
    /// `C[i][j][k]` at `(i * d + j) * d + k`.
    constants: Vec<f64>,
    tolerance: f64,
    /// `left[i]` is the matrix of `l_{e_i}`.
    left: Vec<DMatrix<f64>>,
}

impl AlgebraSpec {
    /// Builds an algebra from a dense tensor indexed `(i * d + j) * d + k`.
    ///
    /// Only shape and finiteness are validated here; use
    /// [`AlgebraSpec::new_checked`] to also verify the declared kind.
    pub fn new(
        kind: AlgebraKind,
        labels: Vec<String>,
        constants: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be positive".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        if constants.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("structure constants must be finite".into()));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be a positive real".into()));
        }
        let left = (0..dim)
            .map(|i| DMatrix::from_fn(dim, dim, |k, j| constants[(i * dim + j) * dim + k]))
            .collect();
        Ok(Self {
            dim,
            kind,
            labels,
            constants,
            tolerance,
            left,
        })
    }

    /// Like [`AlgebraSpec::new`] but rejects tables that violate the axioms of
    /// the declared kind.
    pub fn new_checked(
        kind: AlgebraKind,
        labels: Vec<String>,
        constants: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        let spec = Self::new(kind, labels, constants, tolerance)?;
        let report = check_axioms(&spec);
        report.require(kind)?;
        Ok(spec)
    }

    /// Builds an algebra from a function returning the product of two basis
    /// vectors as a coordinate vector.
    pub fn from_basis_products<F>(
        kind: AlgebraKind,
        labels: Vec<String>,
        tolerance: f64,
        mut product: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<f64>,
    {
        let d = labels.len();
        let mut c = vec![0.0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let p = product(i, j);
                if p.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: p.len(),
                    });
                }
                for (k, v) in p.into_iter().enumerate() {
                    // Round-off from matrix realifications is flushed to zero.
                    c[(i * d + j) * d + k] = if v.abs() < 1e-14 { 0.0 } else { v };
                }
            }
        }
        Self::new(kind, labels, c, tolerance)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be a positive real".into()));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    /// Largest absolute structure constant, at least 1.
    pub fn scale(&self) -> f64 {
        self.constants.iter().fold(1.0f64, |a, &c| a.max(c.abs()))
    }

    /// `e_i • e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> DVector<f64> {
        let off = (i * self.dim + j) * self.dim;
        DVector::from_column_slice(&self.constants[off..off + self.dim])
    }

    /// Matrices of `l_{e_i}` for all basis vectors.
    pub fn left_basis(&self) -> &[DMatrix<f64>] {
        &self.left
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            })
        }
    }

    pub(crate) fn left_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                m += &self.left[i] * xi;
            }
        }
        m
    }

    pub(crate) fn mul(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for i in 0..d {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                let w = xi * y[j];
                if w == 0.0 {
                    continue;
                }
                let off = (i * d + j) * d;
                for k in 0..d {
                    out[k] += w * self.constants[off + k];
                }
            }
        }
        out
    }
}

/// `x • y` with `(x•y)_k = Σ_{i,j} x_i y_j C[i][j][k]`.
pub fn product(alg: &AlgebraSpec, x: &Element, y: &Element) -> Result<Element> {
    alg.check_dim(x.dim())?;
    alg.check_dim(y.dim())?;
    Ok(Element(alg.mul(&x.0, &y.0)))
}

/// The operator `l_x = (b ↦ x • b)`.
pub fn left_multiplication(alg: &AlgebraSpec, x: &Element) -> Result<LinearOperator> {
    alg.check_dim(x.dim())?;
    Ok(LinearOperator(alg.left_matrix(&x.0)))
}

/// Result of the exhaustive axiom check on basis tuples.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub commutative: bool,
    pub anticommutative: bool,
    pub jordan_identity: bool,
    pub jacobi: bool,
    pub associative: bool,
    pub unit: Option<Element>,
    pub residuals: AxiomResiduals,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResiduals {
    pub commutativity: f64,
    pub anticommutativity: f64,
    pub jordan_identity: f64,
    pub jacobi: f64,
    pub associativity: f64,
    pub unit: f64,
}

impl AxiomReport {
    pub fn satisfies(&self, kind: AlgebraKind) -> bool {
        match kind {
            AlgebraKind::Jordan => self.commutative && self.jordan_identity,
            AlgebraKind::Lie => self.anticommutative && self.jacobi,
            AlgebraKind::Associative => self.associative,
            AlgebraKind::General => true,
        }
    }

    pub(crate) fn require(&self, kind: AlgebraKind) -> Result<()> {
        if self.satisfies(kind) {
            return Ok(());
        }
        let r = &self.residuals;
        let why = match kind {
            AlgebraKind::Jordan if !self.commutative => {
                format!("product is not commutative (residual {:e})", r.commutativity)
            }
            AlgebraKind::Jordan => format!("Jordan identity fails (residual {:e})", r.jordan_identity),
            AlgebraKind::Lie if !self.anticommutative => format!(
                "product is not anticommutative (residual {:e})",
                r.anticommutativity
            ),
            AlgebraKind::Lie => format!("Jacobi identity fails (residual {:e})", r.jacobi),
            _ => format!("product is not associative (residual {:e})", r.associativity),
        };
        Err(Error::AxiomMismatch(format!("declared {kind}: {why}")))
    }
}

type Sparse = Vec<(usize, f64)>;

fn sparse_of(v: &DVector<f64>) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, x)| **x != 0.0)
        .map(|(i, x)| (i, *x))
        .collect()
}

struct SparseTable<'a> {
    alg: &'a AlgebraSpec,
    pairs: Vec<Sparse>,
}

impl<'a> SparseTable<'a> {
    fn new(alg: &'a AlgebraSpec) -> Self {
        let d = alg.dim();
        let pairs = (0..d * d)
            .map(|ij| sparse_of(&alg.basis_product(ij / d, ij % d)))
            .collect();
        Self { alg, pairs }
    }

    fn pair(&self, i: usize, j: usize) -> &Sparse {
        &self.pairs[i * self.alg.dim() + j]
    }

    fn mul(&self, u: &Sparse, v: &Sparse, acc: &mut DVector<f64>, sign: f64) {
        for &(p, up) in u {
            for &(q, vq) in v {
                for &(k, c) in self.pair(p, q) {
                    acc[k] += sign * up * vq * c;
                }
            }
        }
    }

    fn mul_sparse(&self, u: &Sparse, v: &Sparse) -> Sparse {
        let mut acc = DVector::zeros(self.alg.dim());
        self.mul(u, v, &mut acc, 1.0);
        sparse_of(&acc)
    }
}

/// Decides every axiom flag by exhaustive evaluation on basis tuples.
///
/// Residuals are normalized by powers of the largest structure constant so
/// that the tolerance is independent of the basis scaling.
pub fn check_axioms(alg: &AlgebraSpec) -> AxiomReport {
    let d = alg.dim();
    let tol = alg.tolerance();
    let s = alg.scale();
    let table = SparseTable::new(alg);
    let unit_of = |i: usize| -> Sparse { vec![(i, 1.0)] };

    let mut comm: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let a = alg.basis_product(i, j);
            let b = alg.basis_product(j, i);
            comm = comm.max((&a - &b).amax());
            anti = anti.max((&a + &b).amax());
        }
    }
    comm /= s;
    anti /= s;
    let commutative = comm <= tol;
    let anticommutative = anti <= tol;

    // Associativity and Jacobi on all basis triples.
    let mut assoc: f64 = 0.0;
    let mut jacobi: f64 = 0.0;
    let mut acc = DVector::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                acc.fill(0.0);
                table.mul(table.pair(i, j), &unit_of(k), &mut acc, 1.0);
                table.mul(&unit_of(i), table.pair(j, k), &mut acc, -1.0);
                assoc = assoc.max(acc.amax());

                acc.fill(0.0);
                table.mul(table.pair(i, j), &unit_of(k), &mut acc, 1.0);
                table.mul(table.pair(j, k), &unit_of(i), &mut acc, 1.0);
                table.mul(table.pair(k, i), &unit_of(j), &mut acc, 1.0);
                jacobi = jacobi.max(acc.amax());
            }
        }
    }
    assoc /= s * s;
    jacobi /= s * s;

    // Fully linearized Jordan identity:
    // Σ_cyc(a,b,c) {{a,y},{b,c}} - {a,{y,{b,c}}} = 0.
    let mut jordan: f64 = f64::INFINITY;
    if commutative {
        jordan = 0.0;
        for a in 0..d {
            for b in a..d {
                for c in b..d {
                    let triples = [(a, b, c), (b, c, a), (c, a, b)];
                    for y in 0..d {
                        acc.fill(0.0);
                        for &(p, q, r) in &triples {
                            let qr = table.pair(q, r);
                            table.mul(table.pair(p, y), qr, &mut acc, 1.0);
                            let inner = table.mul_sparse(&unit_of(y), qr);
                            table.mul(&unit_of(p), &inner, &mut acc, -1.0);
                        }
                        jordan = jordan.max(acc.amax());
                    }
                }
            }
        }
        jordan /= s * s * s;
    }
    let jordan_identity = commutative && jordan <= tol;

    let (unit, unit_residual) = find_unit(alg);

    AxiomReport {
        commutative,
        anticommutative,
        jordan_identity,
        jacobi: jacobi <= tol,
        associative: assoc <= tol,
        unit,
        residuals: AxiomResiduals {
            commutativity: comm,
            anticommutativity: anti,
            jordan_identity: jordan,
            jacobi,
            associativity: assoc,
            unit: unit_residual,
        },
    }
}

/// Solves `l_u = Id` and `r_u = Id` in least squares; accepts the solution when
/// the residual is within tolerance.
pub fn find_unit(alg: &AlgebraSpec) -> (Option<Element>, f64) {
    let d = alg.dim();
    let mut a = DMatrix::zeros(2 * d * d, d);
    for i in 0..d {
        for b in 0..d {
            for k in 0..d {
                // l_{e_i}[k][b] = C[i][b][k];  r_{e_i}[k][b] = C[b][i][k]
                a[(b * d + k, i)] = alg.constant(i, b, k);
                a[(d * d + b * d + k, i)] = alg.constant(b, i, k);
            }
        }
    }
    let mut rhs = DVector::zeros(2 * d * d);
    for b in 0..d {
        rhs[b * d + b] = 1.0;
        rhs[d * d + b * d + b] = 1.0;
    }
    let (u, residual) = linalg::least_squares(&a, &rhs, alg.tolerance());
    let residual = residual / (2.0 * d as f64).sqrt();
    if residual <= alg.tolerance() * alg.scale() {
        (Some(Element(u)), residual)
    } else {
        (None, residual)
    }
}

/// Verdict of a derivation or automorphism check.
#[derive(Clone, Debug, Serialize)]
pub struct MorphismCheck {
    pub holds: bool,
    pub residual: f64,
}

/// Checks `[D, l_{e_i}] = l_{D e_i}` for every basis vector, which is the
/// Leibniz rule `D(e_i•e_j) = (De_i)•e_j + e_i•(De_j)` on all basis pairs.
pub fn is_derivation(alg: &AlgebraSpec, op: &LinearOperator) -> Result<MorphismCheck> {
    let m = op.matrix();
    alg.check_dim(m.nrows())?;
    alg.check_dim(m.ncols())?;
    let scale = alg.scale() * linalg::max_abs(m).max(1.0);
    let mut residual: f64 = 0.0;
    for (i, li) in alg.left_basis().iter().enumerate() {
        let dei = m.column(i).into_owned();
        let lhs = m * li - li * m;
        let rhs = alg.left_matrix(&dei);
        residual = residual.max(linalg::max_abs(&(lhs - rhs)));
    }
    residual /= scale;
    Ok(MorphismCheck {
        holds: residual <= alg.tolerance(),
        residual,
    })
}

/// Checks that `g` is invertible and `g l_{e_i} = l_{g e_i} g` for every basis
/// vector, i.e. `g(e_i•e_j) = (ge_i)•(ge_j)`.
pub fn is_automorphism(alg: &AlgebraSpec, op: &LinearOperator) -> Result<MorphismCheck> {
    let g = op.matrix();
    alg.check_dim(g.nrows())?;
    alg.check_dim(g.ncols())?;
    let d = alg.dim();
    if linalg::numerical_rank(g, alg.tolerance()) < d {
        return Ok(MorphismCheck {
            holds: false,
            residual: f64::INFINITY,
        });
    }
    let gmax = linalg::max_abs(g).max(1.0);
    let scale = alg.scale() * gmax * gmax;
    let mut residual: f64 = 0.0;
    for (i, li) in alg.left_basis().iter().enumerate() {
        let gei = g.column(i).into_owned();
        let lhs = g * li;
        let rhs = alg.left_matrix(&gei) * g;
        residual = residual.max(linalg::max_abs(&(lhs - rhs)));
    }
    residual /= scale;
    Ok(MorphismCheck {
        holds: residual <= alg.tolerance(),
        residual,
    })
}

/// JSON algebra file: `{"dim", "kind", "basis", "constants": [[i,j,k,v],...],
/// "tolerance"}` plus optional catalog metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub kind: AlgebraKind,
    pub basis: Vec<String>,
    pub constants: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<f64>>>,
}

impl AlgebraFile {
    /// Densifies the sparse constant list. Unspecified triples are zero;
    /// repeated triples are rejected.
    pub fn to_spec(&self) -> Result<AlgebraSpec> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidInput("dim must be positive".into()));
        }
        if self.basis.len() != d {
            return Err(Error::InvalidInput(format!(
                "basis has {} labels but dim is {d}",
                self.basis.len()
            )));
        }
        let mut c = vec![0.0; d * d * d];
        let mut seen = vec![false; d * d * d];
        for &(i, j, k, v) in &self.constants {
            if i >= d || j >= d || k >= d {
                return Err(Error::InvalidInput(format!(
                    "constant index ({i},{j},{k}) out of range for dim {d}"
                )));
            }
            let idx = (i * d + j) * d + k;
            if seen[idx] {
                return Err(Error::InvalidInput(format!("constant ({i},{j},{k}) given twice")));
            }
            seen[idx] = true;
            c[idx] = v;
        }
        AlgebraSpec::new(
            self.kind,
            self.basis.clone(),
            c,
            self.tolerance.unwrap_or(DEFAULT_TOLERANCE),
        )
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        let d = spec.dim();
        let mut constants = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = spec.constant(i, j, k);
                    if v != 0.0 {
                        constants.push((i, j, k, v));
                    }
                }
            }
        }
        AlgebraFile {
            dim: d,
            kind: spec.kind(),
            basis: spec.labels().to_vec(),
            constants,
            tolerance: Some(spec.tolerance()),
            rank: None,
            unit: None,
            frame: None,
        }
    }
}
