//! Commutative post-Lie algebra (CPA) structures.
//!
//! A CPA structure on a Lie algebra g is a bilinear product `x·y` with
//!
//! * `x·y = y·x`,
//! * `[x,y]·z = x·(y·z) − y·(x·z)`,
//! * `x·[y,z] = [x·y,z] + [y,x·z]`.
//!
//! Products are stored as dense tensors `t[i][j][k]` with
//! `e_i·e_j = Σ_k t[i][j][k] e_k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    ceil_div, dense_from_sparse, is_zero_vector, sparse_from_dense, unit_vector, zero_vector, ExactError,
    Matrix, Rational, SparseRow, Subspace,
};
use crate::format::{AlgebraRef, ProductFile};
use crate::freelie::FreeNilpotentPresentation;
use crate::liealg::{LieAlgebraTable, LieError};

pub mod families;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CpaError {
    #[error("tensor has {found} entries, expected {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("product e{}·e{} listed twice", .i + 1, .j + 1)]
    DuplicateProduct { i: usize, j: usize },
    #[error("coefficients are not symmetric at ({}, {}, {})", .i + 1, .j + 1, .k + 1)]
    NotSymmetric { i: usize, j: usize, k: usize },
    #[error("subspace is not contained in the lower central term g^{t}")]
    NotInLowerCentral { t: usize },
    #[error("the algebra is stem: every CPA structure on it is complete")]
    StemAlgebra,
    #[error("the algebra is not nilpotent")]
    NotNilpotent,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A symmetric bilinear product on a Lie algebra, candidate CPA structure.
#[derive(Clone, Debug, PartialEq)]
pub struct CpaProduct {
    algebra: Arc<LieAlgebraTable>,
    tensor: Vec<Rational>,
}

/// First failing basis tuple of an axiom together with its residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 0-based basis indices; a pair for symmetry, a triple otherwise.
    pub indices: Vec<usize>,
    pub residual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CpaReport {
    pub symmetry: Option<Violation>,
    pub representation: Option<Violation>,
    pub derivation: Option<Violation>,
    pub is_complete: bool,
    pub is_central: bool,
    /// g·Z(g) = 0
    pub g_z_is_zero: bool,
    /// g·[g,g] = 0
    pub g_comm_is_zero: bool,
}

impl CpaReport {
    pub fn symmetry_ok(&self) -> bool {
        self.symmetry.is_none()
    }
    pub fn representation_ok(&self) -> bool {
        self.representation.is_none()
    }
    pub fn derivation_ok(&self) -> bool {
        self.derivation.is_none()
    }
    pub fn is_cpa(&self) -> bool {
        self.symmetry_ok() && self.representation_ok() && self.derivation_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilationBound {
    pub r: usize,
    pub holds: bool,
}

impl CpaProduct {
    pub fn zero(algebra: Arc<LieAlgebraTable>) -> Self {
        let n = algebra.dim();
        CpaProduct {
            algebra,
            tensor: zero_vector(n * n * n),
        }
    }

    /// Wraps a raw tensor; symmetry is not enforced here (see [`verify`]).
    pub fn from_tensor(algebra: Arc<LieAlgebraTable>, tensor: Vec<Rational>) -> Result<Self, CpaError> {
        let n = algebra.dim();
        if tensor.len() != n * n * n {
            return Err(CpaError::ShapeMismatch {
                expected: n * n * n,
                found: tensor.len(),
            });
        }
        Ok(CpaProduct { algebra, tensor })
    }

    /// Builds a symmetric product from the listed `e_i·e_j`; unlisted
    /// products are zero.
    pub fn from_products(
        algebra: Arc<LieAlgebraTable>,
        products: Vec<(usize, usize, SparseRow)>,
    ) -> Result<Self, CpaError> {
        let n = algebra.dim();
        let mut p = CpaProduct::zero(algebra);
        let mut seen = vec![false; n * n];
        for (i, j, v) in products {
            let (i, j) = (i.min(j), i.max(j));
            for index in [j].into_iter().chain(v.iter().map(|(k, _)| *k)) {
                if index >= n {
                    return Err(CpaError::IndexOutOfRange { index, dim: n });
                }
            }
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(CpaError::DuplicateProduct { i, j });
            }
            for (k, x) in v {
                p.tensor[(i * n + j) * n + k] += &x;
                if i != j {
                    p.tensor[(j * n + i) * n + k] += &x;
                }
            }
        }
        Ok(p)
    }

    pub fn from_file(algebra: Arc<LieAlgebraTable>, file: &ProductFile) -> Result<Self, CpaError> {
        let n = algebra.dim();
        let zero_based = |index: usize| {
            if index == 0 || index > n {
                Err(CpaError::IndexOutOfRange { index, dim: n })
            } else {
                Ok(index - 1)
            }
        };
        let mut products = Vec::new();
        for (i, j, v) in &file.products {
            let (i, j) = (zero_based(*i)?, zero_based(*j)?);
            if i > j {
                return Err(CpaError::Precondition("product files list only i <= j".into()));
            }
            let v = v
                .iter()
                .map(|(k, x)| Ok((zero_based(*k)?, x.clone())))
                .collect::<Result<SparseRow, CpaError>>()?;
            products.push((i, j, v));
        }
        Self::from_products(algebra, products)
    }

    pub fn to_file(&self, algebra: Option<AlgebraRef>) -> ProductFile {
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = sparse_from_dense(self.product_basis(i, j));
                if !v.is_empty() {
                    products.push((i + 1, j + 1, v.into_iter().map(|(k, x)| (k + 1, x)).collect()));
                }
            }
        }
        ProductFile { algebra, products }
    }

    pub fn algebra(&self) -> &LieAlgebraTable {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<LieAlgebraTable> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn tensor(&self) -> &[Rational] {
        &self.tensor
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.tensor[(i * n + j) * n + k]
    }

    /// `e_i·e_j` as a dense vector.
    pub fn product_basis(&self, i: usize, j: usize) -> &[Rational] {
        let n = self.dim();
        &self.tensor[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// `e_i·v`.
    pub fn left_basis(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = zero_vector(n);
        for (l, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (k, t) in self.product_basis(i, l).iter().enumerate() {
                if !t.is_zero() {
                    out[k] += x * t;
                }
            }
        }
        out
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = zero_vector(n);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            let v = self.left_basis(i, y);
            for (k, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    out[k] += a * &c;
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ e_i·y`.
    pub fn left_mult(&self, i: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (k, t) in self.product_basis(i, j).iter().enumerate() {
                if !t.is_zero() {
                    m.set(k, j, t.clone());
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult_vec(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for j in 0..n {
                for (k, t) in self.product_basis(i, j).iter().enumerate() {
                    if !t.is_zero() {
                        *m.entry_mut(k, j) += a * t;
                    }
                }
            }
        }
        m
    }

    /// `e_i·e_j − e_j·e_i`.
    pub fn symmetry_residual(&self, i: usize, j: usize) -> Vec<Rational> {
        self.product_basis(i, j)
            .iter()
            .zip(self.product_basis(j, i))
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `[e_i,e_j]·e_k − e_i·(e_j·e_k) + e_j·(e_i·e_k)`.
    pub fn representation_residual(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let n = self.dim();
        let mut out = zero_vector(n);
        for (l, c) in self.algebra.bracket_basis(i, j) {
            for (m, t) in self.product_basis(*l, k).iter().enumerate() {
                if !t.is_zero() {
                    out[m] += c * t;
                }
            }
        }
        let jk = self.product_basis(j, k);
        if !is_zero_vector(jk) {
            for (m, x) in self.left_basis(i, jk).into_iter().enumerate() {
                out[m] -= x;
            }
        }
        let ik = self.product_basis(i, k);
        if !is_zero_vector(ik) {
            for (m, x) in self.left_basis(j, ik).into_iter().enumerate() {
                out[m] += x;
            }
        }
        out
    }

    /// `e_i·[e_j,e_k] − [e_i·e_j, e_k] − [e_j, e_i·e_k]`.
    pub fn derivation_residual(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let n = self.dim();
        let g = &self.algebra;
        let mut out = zero_vector(n);
        for (l, c) in g.bracket_basis(j, k) {
            for (m, t) in self.product_basis(i, *l).iter().enumerate() {
                if !t.is_zero() {
                    out[m] += c * t;
                }
            }
        }
        for (l, t) in self.product_basis(i, j).iter().enumerate().filter(|(_, t)| !t.is_zero()) {
            for (m, c) in g.bracket_basis(l, k) {
                out[*m] -= t * c;
            }
        }
        for (l, t) in self.product_basis(i, k).iter().enumerate().filter(|(_, t)| !t.is_zero()) {
            for (m, c) in g.bracket_basis(j, l) {
                out[*m] -= t * c;
            }
        }
        out
    }

    /// `e_i·e_j ∈ Z(g)` for all i, j.
    pub fn is_central_in(&self, center: &Subspace) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| center.contains_vector(self.product_basis(i, j)).expect("same ambient"))
        })
    }

    /// `g·S = 0`.
    pub fn annihilates(&self, s: &Subspace) -> bool {
        let n = self.dim();
        (0..n).all(|i| s.basis_vectors().all(|v| is_zero_vector(&self.left_basis(i, v))))
    }

    /// Span of `L(v)(w)` for v in `ops` and w in `s`.
    fn apply_all(&self, ops: &[Matrix], s: &Subspace) -> Subspace {
        let vectors: Vec<Vec<Rational>> = ops
            .iter()
            .flat_map(|m| s.basis_vectors().map(move |w| m.mul_vec(w)))
            .filter(|v| !is_zero_vector(v))
            .collect();
        Subspace::span(self.dim(), vectors).expect("lengths agree")
    }
}

fn first_failure<F>(n: usize, inner: F) -> Option<Violation>
where
    F: Fn(usize) -> Option<Violation> + Sync + Send,
{
    (0..n).into_par_iter().find_map_first(inner)
}

/// Checks the three axioms on all basis tuples and computes the derived flags.
pub fn verify(p: &CpaProduct) -> CpaReport {
    let n = p.dim();
    let symmetry = first_failure(n, |i| {
        (i + 1..n).find_map(|j| {
            let r = p.symmetry_residual(i, j);
            (!is_zero_vector(&r)).then(|| Violation {
                indices: vec![i, j],
                residual: r,
            })
        })
    });
    let representation = first_failure(n, |i| {
        for j in i + 1..n {
            for k in 0..n {
                let r = p.representation_residual(i, j, k);
                if !is_zero_vector(&r) {
                    return Some(Violation {
                        indices: vec![i, j, k],
                        residual: r,
                    });
                }
            }
        }
        None
    });
    let derivation = first_failure(n, |i| {
        for j in 0..n {
            for k in j + 1..n {
                let r = p.derivation_residual(i, j, k);
                if !is_zero_vector(&r) {
                    return Some(Violation {
                        indices: vec![i, j, k],
                        residual: r,
                    });
                }
            }
        }
        None
    });
    let center = p.algebra.center();
    let commutator = p.algebra.commutator();
    CpaReport {
        symmetry,
        representation,
        derivation,
        is_complete: is_complete(p),
        is_central: p.is_central_in(&center),
        g_z_is_zero: p.annihilates(&center),
        g_comm_is_zero: p.annihilates(&commutator),
    }
}

/// W_0 = g, W_{k+1} = Σ_i L(e_i)(W_k); complete iff the chain reaches 0.
pub fn is_complete(p: &CpaProduct) -> bool {
    let n = p.dim();
    let ops: Vec<Matrix> = (0..n).map(|i| p.left_mult(i)).collect();
    let mut w = Subspace::full(n);
    for _ in 0..=n {
        if w.is_zero() {
            return true;
        }
        let next = p.apply_all(&ops, &w);
        if next == w {
            return false;
        }
        w = next;
    }
    w.is_zero()
}

fn matrix_power(m: &Matrix, e: usize) -> Matrix {
    let mut result = Matrix::identity(m.rows());
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

/// g₀ = ∩_i ker L(e_i)^dim.
pub fn fitting_null(p: &CpaProduct) -> Subspace {
    let n = p.dim();
    if n == 0 {
        return Subspace::zero(0);
    }
    let powers: Vec<Matrix> = (0..n).map(|i| matrix_power(&p.left_mult(i), n)).collect();
    let refs: Vec<&Matrix> = powers.iter().collect();
    Matrix::vstack(&refs).expect("square blocks").nullspace()
}

/// Checks `L(a)^r(g) = 0` for `r = ⌈(dim a + t − 1)/t⌉`, where `a ⊆ g^t`.
pub fn annihilation_bound(p: &CpaProduct, a: &Subspace, t: usize) -> Result<AnnihilationBound, CpaError> {
    if t == 0 {
        return Err(CpaError::Precondition("t must be at least 1".into()));
    }
    let lower = p.algebra.lower_central_series();
    let gt = lower.get(t - 1).unwrap_or_else(|| lower.last().expect("nonempty"));
    if !gt.contains(a)? {
        return Err(CpaError::NotInLowerCentral { t });
    }
    if a.is_zero() {
        return Ok(AnnihilationBound { r: 0, holds: true });
    }
    let r = ceil_div(a.dim() + t - 1, t);
    let ops: Vec<Matrix> = a.basis_vectors().map(|v| p.left_mult_vec(v)).collect();
    let mut w = Subspace::full(p.dim());
    for _ in 0..r {
        w = p.apply_all(&ops, &w);
    }
    Ok(AnnihilationBound { r, holds: w.is_zero() })
}

/// `x_i·x_j = Σ_k α[i][j][k] z_k` on generators, zero elsewhere; `z_k` runs
/// over the degree-c basis block.
pub fn construct_central(
    p: &FreeNilpotentPresentation,
    coeffs: &[Vec<Vec<Rational>>],
) -> Result<CpaProduct, CpaError> {
    let g = p.generators;
    let center: Vec<usize> = p.center_indices().collect();
    let shape_err = || CpaError::Precondition(format!("coefficients must have shape {g} x {g} x {}", center.len()));
    if coeffs.len() != g || coeffs.iter().any(|row| row.len() != g || row.iter().any(|c| c.len() != center.len())) {
        return Err(shape_err());
    }
    for i in 0..g {
        for j in i + 1..g {
            if let Some(k) = (0..center.len()).find(|&k| coeffs[i][j][k] != coeffs[j][i][k]) {
                return Err(CpaError::NotSymmetric { i, j, k });
            }
        }
    }
    let algebra = Arc::new(p.table.clone());
    let mut products = Vec::new();
    for i in 0..g {
        for j in i..g {
            let v: SparseRow = center
                .iter()
                .zip(&coeffs[i][j])
                .filter(|(_, c)| !c.is_zero())
                .map(|(z, c)| (*z, c.clone()))
                .collect();
            if !v.is_empty() {
                products.push((i, j, v));
            }
        }
    }
    CpaProduct::from_products(algebra, products)
}

/// `v·v = v`, all other products zero, for g = Kv ⊕ a with v central and
/// not in [g,g].
pub fn construct_incomplete(t: Arc<LieAlgebraTable>) -> Result<CpaProduct, CpaError> {
    if !t.is_nilpotent() {
        return Err(CpaError::NotNilpotent);
    }
    let n = t.dim();
    let center = t.center();
    let commutator = t.commutator();
    let v = center
        .basis_vectors()
        .find(|z| !commutator.contains_vector(z).expect("same ambient"))
        .ok_or(CpaError::StemAlgebra)?
        .to_vec();
    // a = [g,g] + coordinate complement of [g,g] + Kv
    let mut a_basis: Vec<Vec<Rational>> = commutator.basis_vectors().map(<[Rational]>::to_vec).collect();
    let mut spanned = commutator.sum(&Subspace::span(n, [&v])?)?;
    for k in 0..n {
        let e = unit_vector(n, k);
        if !spanned.contains_vector(&e)? {
            spanned = spanned.sum(&Subspace::span(n, [&e])?)?;
            a_basis.push(e);
        }
    }
    // λ(e_k): the v-coordinate of e_k in the basis (v, a_1, ..., a_m)
    let mut columns = vec![v.clone()];
    columns.extend(a_basis);
    let basis = Matrix::from_rows(columns)?.transpose();
    let mut lambda = Vec::with_capacity(n);
    for k in 0..n {
        // solve basis · c = e_k through the augmented nullspace
        let mut rows: Vec<Vec<Rational>> = (0..n).map(|r| basis.row(r).to_vec()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(if r == k { -Rational::one() } else { Rational::zero() });
        }
        let ns = Matrix::from_rows(rows)?.nullspace();
        let sol = ns
            .basis_vectors()
            .find(|s| !s[n].is_zero())
            .expect("basis is invertible");
        lambda.push(&sol[0] / &sol[n]);
    }
    let mut tensor = zero_vector(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let f = &lambda[i] * &lambda[j];
            if f.is_zero() {
                continue;
            }
            for (k, x) in v.iter().enumerate() {
                tensor[(i * n + j) * n + k] = &f * x;
            }
        }
    }
    CpaProduct::from_tensor(t, tensor)
}

/// For a central CPA structure on a stem algebra, reports whether
/// g·Z(g) = g·[g,g] = 0.
pub fn central_implies_annihilation(p: &CpaProduct) -> Result<bool, CpaError> {
    let g = p.algebra();
    if !g.invariants().is_stem {
        return Err(CpaError::Precondition("algebra is not stem".into()));
    }
    let report = verify(p);
    if !report.is_cpa() {
        return Err(CpaError::Precondition("product is not a CPA structure".into()));
    }
    if !report.is_central {
        return Err(CpaError::Precondition("product is not central".into()));
    }
    Ok(report.g_z_is_zero && report.g_comm_is_zero)
}

/// L as a map into matrices: checks `L([e_i,e_j]) = [L(e_i), L(e_j)]` for
/// all pairs.
pub fn left_multiplication_is_representation(p: &CpaProduct) -> bool {
    let n = p.dim();
    let ops: Vec<Matrix> = (0..n).map(|i| p.left_mult(i)).collect();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let lhs = p.left_mult_vec(&dense_from_sparse(n, p.algebra.bracket_basis(i, j)));
            let rhs = ops[i].mul(&ops[j]).sub(&ops[j].mul(&ops[i]));
            lhs == rhs
        })
    })
}

/// Checks that `D([x,y]) = [Dx, y] + [x, Dy]` on basis pairs.
pub fn is_derivation(g: &LieAlgebraTable, d: &Matrix) -> bool {
    let n = g.dim();
    let columns: Vec<Vec<Rational>> = (0..n).map(|j| d.column(j)).collect();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let lhs = d.mul_vec(&dense_from_sparse(n, g.bracket_basis(i, j)));
            let a = g.bracket(&columns[i], &unit_vector(n, j)).expect("dims");
            let b = g.bracket(&unit_vector(n, i), &columns[j]).expect("dims");
            lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y)
        })
    })
}

/// Non-zero products `e_i·e_j` (i ≤ j) for display.
pub fn nonzero_products(p: &CpaProduct) -> BTreeMap<(usize, usize), Vec<Rational>> {
    let n = p.dim();
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let v = p.product_basis(i, j);
            if !is_zero_vector(v) {
                out.insert((i, j), v.to_vec());
            }
        }
    }
    out
}
