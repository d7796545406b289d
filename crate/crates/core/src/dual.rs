//! Geometry on the dual space: the linear bivector field, sharp map,
//! generated distribution, structure Lie algebra and involutivity test.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraKind, AlgebraSpec, DualElement, Element, LinearOperator};
use crate::error::{Error, Result};
use crate::linalg;

/// `R[i][j] = <ξ, e_i • e_j>` at a point ξ.
#[derive(Clone, Debug)]
pub struct BivectorAt {
    pub point: DualElement,
    pub matrix: DMatrix<f64>,
}

pub fn bivector_at(alg: &AlgebraSpec, xi: &DualElement) -> Result<BivectorAt> {
    alg.check_dim(xi.dim())?;
    let d = alg.dim();
    let x = xi.coords();
    let m = DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| x[k] * alg.constant(i, j, k)).sum());
    Ok(BivectorAt {
        point: xi.clone(),
        matrix: m,
    })
}

/// Contraction of θ into the first slot: `<b, sharp(θ)> = R(θ, b)`, i.e. `Rᵀθ`.
pub fn sharp_at(alg: &AlgebraSpec, xi: &DualElement, theta: &DVector<f64>) -> Result<DualElement> {
    alg.check_dim(theta.len())?;
    let r = bivector_at(alg, xi)?;
    Ok(DualElement(r.matrix.transpose() * theta))
}

/// The A-dual vector field of a function with differential `df` at ξ. With a
/// Jordan algebra and a positive ξ this is the natural-gradient direction.
pub fn dual_vector_field(alg: &AlgebraSpec, xi: &DualElement, df: &DVector<f64>) -> Result<DualElement> {
    sharp_at(alg, xi, df)
}

/// `l_a★ξ = l_aᵀ ξ`.
pub fn dual_action(alg: &AlgebraSpec, a: &Element, xi: &DualElement) -> Result<DualElement> {
    alg.check_dim(a.dim())?;
    alg.check_dim(xi.dim())?;
    Ok(DualElement(alg.left_matrix(a.coords()).transpose() * xi.coords()))
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionBasis {
    pub point: DualElement,
    pub generators: Vec<DualElement>,
    pub rank: usize,
}

pub fn distribution_basis(alg: &AlgebraSpec, xi: &DualElement) -> Result<DistributionBasis> {
    alg.check_dim(xi.dim())?;
    let generators: Vec<DualElement> = alg
        .left_basis()
        .iter()
        .map(|l| DualElement(l.transpose() * xi.coords()))
        .collect();
    let cols: Vec<DVector<f64>> = generators.iter().map(|g| g.0.clone()).collect();
    let rank = linalg::numerical_rank(&DMatrix::from_columns(&cols), alg.tolerance());
    Ok(DistributionBasis {
        point: xi.clone(),
        generators,
        rank,
    })
}

#[derive(Clone, Debug)]
pub struct StructureAlgebraBasis {
    /// Orthonormal in the Frobenius inner product.
    pub operators: Vec<LinearOperator>,
    /// Number of commutator rounds that added new directions.
    pub generation_depth: usize,
}

impl StructureAlgebraBasis {
    pub fn dim(&self) -> usize {
        self.operators.len()
    }

    /// Largest distance of `[X_i, X_j]` from the span, relative to its norm.
    pub fn closure_residual(&self) -> f64 {
        let basis: Vec<DVector<f64>> = self.operators.iter().map(|o| linalg::vectorize(o.matrix())).collect();
        let mut res: f64 = 0.0;
        for (i, a) in self.operators.iter().enumerate() {
            for b in self.operators.iter().skip(i + 1) {
                let c = linalg::vectorize(&linalg::commutator(a.matrix(), b.matrix()));
                let n = c.norm();
                if n > 0.0 {
                    res = res.max(linalg::distance_to_span(&basis, &c) / n);
                }
            }
        }
        res
    }
}

const SPAN_TOL: f64 = 1e-9;

/// Closes `span{l_{e_i}}` under commutators.
pub fn structure_algebra(alg: &AlgebraSpec) -> StructureAlgebraBasis {
    let d = alg.dim();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for l in alg.left_basis() {
        linalg::extend_orthonormal(&mut basis, &linalg::vectorize(l), SPAN_TOL);
    }
    let mut depth = 0;
    let mut frontier_start = 0;
    loop {
        let n = basis.len();
        let mut added = false;
        // Pairs among older operators were bracketed in earlier rounds.
        for j in frontier_start..n {
            for i in 0..j {
                let a = linalg::unvectorize(&basis[i], d);
                let b = linalg::unvectorize(&basis[j], d);
                let c = linalg::vectorize(&linalg::commutator(&a, &b));
                if linalg::extend_orthonormal(&mut basis, &c, SPAN_TOL) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        depth += 1;
        frontier_start = n;
        if basis.len() >= d * d {
            break;
        }
    }
    StructureAlgebraBasis {
        operators: basis.iter().map(|v| LinearOperator(linalg::unvectorize(v, d))).collect(),
        generation_depth: depth,
    }
}

/// `𝔤̂ = Der₀ ⊕ J` with the bracket `[d, x] = d(x)`, `[x, y] = [l_x, l_y]`.
///
/// Basis order: inner derivations first, then the algebra basis.
#[derive(Clone, Debug)]
pub struct ExtendedStructureAlgebra {
    pub inner_derivations: Vec<LinearOperator>,
    pub jordan_dim: usize,
    /// `[u_p, u_q] = Σ_s table[(p * n + q) * n + s] u_s` with `n = dim`.
    pub bracket_table: Vec<f64>,
    /// `φ(u_p)` for every basis vector of 𝔤̂.
    pub phi: Vec<LinearOperator>,
    pub residuals: ExtendedResiduals,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendedResiduals {
    pub jacobi: f64,
    /// Distance of `[Der₀, Der₀]` from `Der₀`.
    pub derivation_closure: f64,
    /// Largest derivation defect of the inner derivations.
    pub derivation: f64,
    pub homomorphism: f64,
    /// `span [l_x, l_y] = Der₀`.
    pub transvective: bool,
}

impl ExtendedStructureAlgebra {
    pub fn dim(&self) -> usize {
        self.inner_derivations.len() + self.jordan_dim
    }

    pub fn bracket(&self, p: usize, q: usize) -> DVector<f64> {
        let n = self.dim();
        let off = (p * n + q) * n;
        DVector::from_column_slice(&self.bracket_table[off..off + n])
    }

    /// `φ(u) = Σ u_p φ(u_p)`.
    pub fn represent(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let d = self.jordan_dim;
        let mut m = DMatrix::zeros(d, d);
        for (c, op) in u.iter().zip(&self.phi) {
            m += op.matrix() * *c;
        }
        m
    }
}

/// Orthonormal (Frobenius) basis of `span{[l_{e_i}, l_{e_j}]}`.
pub fn inner_derivations(alg: &AlgebraSpec) -> Vec<LinearOperator> {
    let ls = alg.left_basis();
    let d = alg.dim();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let c = linalg::commutator(&ls[i], &ls[j]);
            linalg::extend_orthonormal(&mut basis, &linalg::vectorize(&c), SPAN_TOL);
        }
    }
    basis.iter().map(|v| LinearOperator(linalg::unvectorize(v, d))).collect()
}

pub fn extended_structure_algebra(alg: &AlgebraSpec) -> Result<ExtendedStructureAlgebra> {
    if alg.kind() != AlgebraKind::Jordan {
        return Err(Error::KindMismatch {
            expected: AlgebraKind::Jordan.to_string(),
            found: alg.kind().to_string(),
        });
    }
    let d = alg.dim();
    let ders = inner_derivations(alg);
    let k = ders.len();
    let n = k + d;
    let der_vecs: Vec<DVector<f64>> = ders.iter().map(|o| linalg::vectorize(o.matrix())).collect();
    let ls = alg.left_basis();

    let project = |m: &DMatrix<f64>| -> (DVector<f64>, f64) {
        let v = linalg::vectorize(m);
        let c = DVector::from_iterator(k, der_vecs.iter().map(|b| b.dot(&v)));
        let rest = der_vecs.iter().zip(c.iter()).fold(v.clone(), |acc, (b, ci)| acc - b * *ci);
        (c, rest.norm() / v.norm().max(1.0))
    };

    let mut table = vec![0.0; n * n * n];
    let mut closure: f64 = 0.0;
    let mut transvective_res: f64 = 0.0;
    let mut set = |p: usize, q: usize, v: &DVector<f64>, offset: usize| {
        let base = (p * n + q) * n + offset;
        for (s, x) in v.iter().enumerate() {
            table[base + s] = *x;
        }
    };
    for p in 0..k {
        for q in 0..k {
            let (c, res) = project(&linalg::commutator(ders[p].matrix(), ders[q].matrix()));
            closure = closure.max(res);
            set(p, q, &c, 0);
        }
        for i in 0..d {
            let dx = ders[p].matrix().column(i).into_owned();
            set(p, k + i, &dx, k);
            set(k + i, p, &(-dx), k);
        }
    }
    for i in 0..d {
        for j in 0..d {
            let (c, res) = project(&linalg::commutator(&ls[i], &ls[j]));
            transvective_res = transvective_res.max(res);
            set(k + i, k + j, &c, 0);
        }
    }

    let mut phi = ders.clone();
    phi.extend(ls.iter().cloned().map(LinearOperator));

    let mut derivation: f64 = 0.0;
    for dd in &ders {
        derivation = derivation.max(crate::algebra::is_derivation(alg, dd)?.residual);
    }

    let mut ext = ExtendedStructureAlgebra {
        inner_derivations: ders,
        jordan_dim: d,
        bracket_table: table,
        phi,
        residuals: ExtendedResiduals {
            jacobi: 0.0,
            derivation_closure: closure,
            derivation,
            homomorphism: 0.0,
            transvective: transvective_res <= 1e-8,
        },
    };
    ext.residuals.jacobi = jacobi_residual(&ext);
    ext.residuals.homomorphism = homomorphism_residual(&ext);
    Ok(ext)
}

fn jacobi_residual(ext: &ExtendedStructureAlgebra) -> f64 {
    let n = ext.dim();
    let scale = ext.bracket_table.iter().fold(1.0f64, |a, c| a.max(c.abs()));
    let br = |u: &DVector<f64>, q: usize| -> DVector<f64> {
        // [u, e_q] for a general u
        let mut out = DVector::zeros(n);
        for (p, c) in u.iter().enumerate() {
            if *c != 0.0 {
                out += ext.bracket(p, q) * *c;
            }
        }
        out
    };
    let mut res: f64 = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let ab = ext.bracket(a, b);
            for c in (b + 1)..n {
                let bc = ext.bracket(b, c);
                let ca = ext.bracket(c, a);
                let j = br(&ab, c) + br(&bc, a) + br(&ca, b);
                res = res.max(j.amax());
            }
        }
    }
    res / (scale * scale)
}

fn homomorphism_residual(ext: &ExtendedStructureAlgebra) -> f64 {
    let n = ext.dim();
    let mut res: f64 = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            let lhs = ext.represent(&ext.bracket(p, q));
            let rhs = linalg::commutator(ext.phi[p].matrix(), ext.phi[q].matrix());
            res = res.max(linalg::max_abs(&(lhs - rhs)));
        }
    }
    res
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutivityVerdict {
    pub dist_rank: usize,
    pub bracket_rank: usize,
    pub involutive: bool,
    /// `d − dist_rank`, the dimension of the stabilizer of the distribution.
    pub stabilizer_dim: usize,
    /// Jordan kinds: whether `Der₀·ξ ⊂ J·ξ`.
    pub derivations_in_image: Option<bool>,
}

/// Compares the rank of the distribution spanned by `l_{e_i}★ξ` with the rank
/// after adding the brackets of those fields. For linear actions the bracket
/// of two fundamental fields is, up to sign, the field of the commutator, so
/// it is evaluated as `[l_i, l_j]ᵀ ξ`.
pub fn involutivity_test(alg: &AlgebraSpec, xi: &DualElement) -> Result<InvolutivityVerdict> {
    alg.check_dim(xi.dim())?;
    let d = alg.dim();
    let tol = alg.tolerance();
    let ls = alg.left_basis();
    let x = xi.coords();
    let gens: Vec<DVector<f64>> = ls.iter().map(|l| l.transpose() * x).collect();
    let mut cols = gens.clone();
    for i in 0..d {
        for j in (i + 1)..d {
            cols.push(linalg::commutator(&ls[i], &ls[j]).transpose() * x);
        }
    }
    let dist_rank = linalg::numerical_rank(&DMatrix::from_columns(&gens), tol);
    let bracket_rank = linalg::numerical_rank(&DMatrix::from_columns(&cols), tol);
    let derivations_in_image = if alg.kind() == AlgebraKind::Jordan {
        let mut c = gens.clone();
        for dd in inner_derivations(alg) {
            c.push(dd.matrix().transpose() * x);
        }
        Some(linalg::numerical_rank(&DMatrix::from_columns(&c), tol) == dist_rank)
    } else {
        None
    };
    Ok(InvolutivityVerdict {
        dist_rank,
        bracket_rank,
        involutive: dist_rank == bracket_rank,
        stabilizer_dim: d - dist_rank,
        derivations_in_image,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CanonicalFormValue {
    pub value: f64,
    /// Set when ξ is degenerate and the value may depend on the chosen
    /// representatives `a, b` of the tangent vectors.
    pub ambiguous: bool,
}

/// `G(l_a★ξ, l_b★ξ) = aᵀ R b`.
pub fn canonical_form_g(alg: &AlgebraSpec, xi: &DualElement, a: &Element, b: &Element) -> Result<CanonicalFormValue> {
    alg.check_dim(a.dim())?;
    alg.check_dim(b.dim())?;
    let r = bivector_at(alg, xi)?.matrix;
    let value = (a.coords().transpose() * &r * b.coords())[0];
    let scale = linalg::max_abs(&r).max(f64::MIN_POSITIVE);
    let sym = linalg::max_abs(&(&r - r.transpose())) <= alg.tolerance() * scale;
    let anti = linalg::max_abs(&(&r + r.transpose())) <= alg.tolerance() * scale;
    let full = linalg::numerical_rank(&r, alg.tolerance()) == alg.dim();
    Ok(CanonicalFormValue {
        value,
        ambiguous: !(sym || anti || full),
    })
}

/// Orthonormal basis `V` (columns) of the tangent space `Rᵀ·A` at ξ together
/// with the Gram matrix of the canonical form on it, computed through
/// least-norm preimages `a_k` of the basis vectors: `G_kl = a_kᵀ R a_l`.
pub fn tangent_gram(alg: &AlgebraSpec, xi: &DualElement) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let r = bivector_at(alg, xi)?.matrix;
    let rt = r.transpose();
    let v = linalg::column_space(&rt, alg.tolerance());
    let pre = linalg::pseudo_inverse(&rt, alg.tolerance()) * &v;
    let gram = pre.transpose() * &r * &pre;
    Ok((v, gram))
}

/// Samples a structure-group element `Π exp(φ(u_k))` with 1–3 factors and
/// coefficients uniform in `[−0.5, 0.5]`. With `automorphisms_only` the
/// coefficients on the algebra part are zero, giving an element of `Aut₀`.
pub fn sample_group_element(
    ext: &ExtendedStructureAlgebra,
    rng: &mut linalg::Prng,
    automorphisms_only: bool,
) -> DMatrix<f64> {
    let n = ext.dim();
    let k = ext.inner_derivations.len();
    let factors = rng.random_range(1..=3);
    let mut g = DMatrix::identity(ext.jordan_dim, ext.jordan_dim);
    for _ in 0..factors {
        let mut u = linalg::random_vector(rng, n, -0.5, 0.5);
        if automorphisms_only {
            u.rows_mut(k, n - k).fill(0.0);
        }
        g = linalg::expm(&ext.represent(&u)) * g;
    }
    g
}

/// Dual action `ξ ↦ (g⁻¹)ᵀ ξ`.
pub fn act_dual(g: &DMatrix<f64>, xi: &DualElement) -> Result<DualElement> {
    let inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numerical("group element is singular", f64::NAN, f64::INFINITY))?;
    Ok(DualElement(inv.transpose() * xi.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_hermitian, build_lie, build_rn, Field, LieName};

    #[test]
    fn structure_algebra_dimensions() {
        assert_eq!(structure_algebra(&build_rn(3).unwrap().spec).dim(), 3);
        let so3 = structure_algebra(&build_lie(LieName::So3).unwrap().spec);
        assert_eq!(so3.dim(), 3);
        assert_eq!(so3.generation_depth, 0);
        let m2 = structure_algebra(&build_hermitian(2, Field::Real).unwrap().spec);
        assert_eq!(m2.dim(), 4);
        assert!(m2.closure_residual() < 1e-10);
    }

    #[test]
    fn extended_algebra_of_rn_is_abelian() {
        let e = extended_structure_algebra(&build_rn(3).unwrap().spec).unwrap();
        assert!(e.inner_derivations.is_empty());
        assert_eq!(e.dim(), 3);
        assert!(e.bracket_table.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn extended_algebra_rejects_lie() {
        let g = build_lie(LieName::So3).unwrap();
        assert!(matches!(extended_structure_algebra(&g.spec), Err(Error::KindMismatch { .. })));
    }
}
