//! Finite-dimensional Lie algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    dense_from_sparse, is_zero_vector, zero_vector, ExactError, Matrix, Rational, SparseMatrix,
    SparseRow, Subspace,
};
use crate::format::AlgebraFile;

pub mod catalog;

pub use catalog::{catalog, catalog_names, CatalogEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [e{0}, e{0}] must vanish", .i + 1)]
    SelfBracket { i: usize },
    #[error("bracket [e{}, e{}] listed twice", .i + 1, .j + 1)]
    DuplicateBracket { i: usize, j: usize },
    #[error("ill-formed vector for [e{}, e{}]: {reason}", .i + 1, .j + 1)]
    IllFormedVector { i: usize, j: usize, reason: String },
    #[error("expected {expected} basis names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("Jacobi identity fails at (e{}, e{}, e{}), residual {residual:?}", .i + 1, .j + 1, .k + 1)]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<Rational>,
    },
    #[error("vector of length {found} in an algebra of dimension {dim}")]
    VectorLength { found: usize, dim: usize },
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("cannot build {name}: {reason}")]
    Build { name: String, reason: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A Lie algebra as a table of brackets of basis vectors.
///
/// Only `[e_i, e_j]` for `i < j` is supplied; the rest follows from
/// antisymmetry. Constructed tables always satisfy the Jacobi identity.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebraTable {
    dim: usize,
    names: Vec<String>,
    brackets: Vec<SparseRow>,
}

impl fmt::Debug for LieAlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebraTable(dim {}) {{", self.dim)?;
        for (i, j, v) in self.nonzero_brackets() {
            write!(f, " [{},{}]={}", self.names[i], self.names[j], self.format_vector(&dense_from_sparse(self.dim, v)))?;
        }
        write!(f, " }}")
    }
}

fn check_sparse(dim: usize, i: usize, j: usize, v: SparseRow) -> Result<SparseRow, LieError> {
    let mut seen = BTreeMap::new();
    for (k, x) in v {
        if k >= dim {
            return Err(LieError::IllFormedVector {
                i,
                j,
                reason: format!("index {} beyond dimension {dim}", k + 1),
            });
        }
        if seen.insert(k, x).is_some() {
            return Err(LieError::IllFormedVector {
                i,
                j,
                reason: format!("index {} repeated", k + 1),
            });
        }
    }
    Ok(seen.into_iter().filter(|(_, x)| !x.is_zero()).collect())
}

impl LieAlgebraTable {
    /// Builds the table and checks the Jacobi identity.
    pub fn new(names: Vec<String>, brackets: Vec<(usize, usize, SparseRow)>) -> Result<Self, LieError> {
        let t = Self::from_brackets(names, brackets)?;
        t.validate()?;
        Ok(t)
    }

    /// Builds the table with structural checks only. Entries with `i > j`
    /// are accepted and stored through antisymmetry.
    pub fn from_brackets(
        names: Vec<String>,
        brackets: Vec<(usize, usize, SparseRow)>,
    ) -> Result<Self, LieError> {
        let dim = names.len();
        let mut table = vec![Vec::new(); dim * dim];
        let mut given = vec![false; dim * dim];
        for (i, j, v) in brackets {
            for index in [i, j] {
                if index >= dim {
                    return Err(LieError::IndexOutOfRange { index, dim });
                }
            }
            let v = check_sparse(dim, i, j, v)?;
            if i == j {
                if v.is_empty() {
                    continue;
                }
                return Err(LieError::SelfBracket { i });
            }
            let (a, b, v) = if i < j {
                (i, j, v)
            } else {
                (j, i, v.into_iter().map(|(k, x)| (k, -x)).collect())
            };
            if given[a * dim + b] {
                return Err(LieError::DuplicateBracket { i: a, j: b });
            }
            given[a * dim + b] = true;
            table[b * dim + a] = v.iter().map(|(k, x)| (*k, -x)).collect();
            table[a * dim + b] = v;
        }
        Ok(LieAlgebraTable {
            dim,
            names,
            brackets: table,
        })
    }

    pub fn with_default_names(dim: usize, brackets: Vec<(usize, usize, SparseRow)>) -> Result<Self, LieError> {
        Self::new(default_names("e", dim), brackets)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(default_names("e", dim), Vec::new()).expect("abelian table")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// `[e_i, e_j]` as a sparse vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseRow {
        &self.brackets[i * self.dim + j]
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &SparseRow)> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let v = &self.brackets[i * n + j];
                (!v.is_empty()).then_some((i, j, v))
            })
        })
    }

    fn check_len(&self, v: &[Rational]) -> Result<(), LieError> {
        if v.len() != self.dim {
            Err(LieError::VectorLength {
                found: v.len(),
                dim: self.dim,
            })
        } else {
            Ok(())
        }
    }

    /// `[x, y]` for dense vectors of length `dim`.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = zero_vector(self.dim);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let v = self.bracket_basis(i, j);
                if v.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in v {
                    out[*k] += &ab * c;
                }
            }
        }
        Ok(out)
    }

    /// `[e_i, y]`.
    pub fn bracket_with_basis(&self, i: usize, y: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vector(self.dim);
        for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            for (k, c) in self.bracket_basis(i, j) {
                out[*k] += b * c;
            }
        }
        out
    }

    /// `[e_i, [e_j, e_k]]` accumulated into `acc` with sign `sign`.
    fn add_nested(&self, acc: &mut [Rational], i: usize, j: usize, k: usize) {
        for (l, c) in self.bracket_basis(j, k) {
            for (m, d) in self.bracket_basis(i, *l) {
                acc[*m] += c * d;
            }
        }
    }

    fn jacobi_residual_raw(&self, i: usize, j: usize, k: usize, acc: &mut [Rational]) {
        self.add_nested(acc, i, j, k);
        self.add_nested(acc, j, k, i);
        self.add_nested(acc, k, i, j);
    }

    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let mut acc = zero_vector(self.dim);
        self.jacobi_residual_raw(i, j, k, &mut acc);
        acc
    }

    /// Checks the Jacobi identity on all triples i < j < k and reports the
    /// lexicographically least failing triple.
    pub fn validate(&self) -> Result<(), LieError> {
        let n = self.dim;
        let failure = (0..n).into_par_iter().find_map_first(|i| {
            let mut acc = zero_vector(n);
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.bracket_basis(j, k).is_empty()
                        && self.bracket_basis(k, i).is_empty()
                        && self.bracket_basis(i, j).is_empty()
                    {
                        continue;
                    }
                    self.jacobi_residual_raw(i, j, k, &mut acc);
                    if !is_zero_vector(&acc) {
                        return Some((i, j, k, acc));
                    }
                }
            }
            None
        });
        match failure {
            Some((i, j, k, residual)) => Err(LieError::JacobiViolation { i, j, k, residual }),
            None => Ok(()),
        }
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad_matrix(&self, x: &[Rational]) -> Result<Matrix, LieError> {
        self.check_len(x)?;
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for j in 0..self.dim {
                for (k, c) in self.bracket_basis(i, j) {
                    *m.entry_mut(*k, j) += a * c;
                }
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.bracket_basis(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// `span{[e_a, v] : a, v ∈ basis(s)}`.
    pub fn bracket_with_all(&self, s: &Subspace) -> Subspace {
        let vectors: Vec<Vec<Rational>> = (0..self.dim)
            .flat_map(|a| s.basis_vectors().map(move |v| self.bracket_with_basis(a, v)))
            .filter(|v| !is_zero_vector(v))
            .collect();
        Subspace::span(self.dim, vectors).expect("lengths agree")
    }

    /// `span{[v, w] : v ∈ basis(a), w ∈ basis(b)}`.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for v in a.basis_vectors() {
            for w in b.basis_vectors() {
                let x = self.bracket(v, w).expect("lengths agree");
                if !is_zero_vector(&x) {
                    vectors.push(x);
                }
            }
        }
        Subspace::span(self.dim, vectors).expect("lengths agree")
    }

    pub fn commutator(&self) -> Subspace {
        let vectors: Vec<Vec<Rational>> = self
            .nonzero_brackets()
            .map(|(_, _, v)| dense_from_sparse(self.dim, v))
            .collect();
        Subspace::span(self.dim, vectors).expect("lengths agree")
    }

    /// Simultaneous kernel of all `ad(e_j)`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for (m, c) in self.bracket_basis(i, j) {
                    rows.entry((j, *m)).or_default().push((i, c.clone()));
                }
            }
        }
        let mut sm = SparseMatrix::new(n);
        for (_, r) in rows {
            sm.push_row(r);
        }
        sm.nullspace()
    }

    /// g¹ = g, g^{i+1} = [g, g^i], listed until the chain stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_with_all(last);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_subspaces(last, last);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn series(&self) -> SeriesReport {
        let lower_central = self.lower_central_series();
        let derived = self.derived_series();
        let nilpotency_class = lower_central
            .last()
            .filter(|s| s.is_zero())
            .map(|_| lower_central.len() - 1);
        let commutator = lower_central
            .get(1)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim));
        SeriesReport {
            lower_central,
            derived,
            center: self.center(),
            commutator,
            nilpotency_class,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series()
            .last()
            .is_some_and(Subspace::is_zero)
    }

    pub fn invariants(&self) -> Invariants {
        let center = self.center();
        let commutator = self.commutator();
        let z_ratio = if self.dim == 0 {
            Rational::zero()
        } else {
            Rational::new(center.dim() as i64, self.dim as i64)
        };
        Invariants {
            is_stem: commutator.contains(&center).expect("same ambient"),
            z_ratio,
            codim_commutator: self.dim - commutator.dim(),
        }
    }

    /// Direct sum with `other`; basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebraTable) -> LieAlgebraTable {
        let n = self.dim;
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut brackets: Vec<(usize, usize, SparseRow)> = self
            .nonzero_brackets()
            .map(|(i, j, v)| (i, j, v.clone()))
            .collect();
        brackets.extend(other.nonzero_brackets().map(|(i, j, v)| {
            (i + n, j + n, v.iter().map(|(k, x)| (k + n, x.clone())).collect())
        }));
        LieAlgebraTable::from_brackets(names, brackets).expect("direct sum of valid tables")
    }

    /// The table on the first `n` basis vectors with components beyond `n`
    /// dropped. Meaningful when the trailing basis vectors span an ideal.
    pub fn leading_quotient(&self, n: usize) -> Result<LieAlgebraTable, LieError> {
        let names = self.names[..n].to_vec();
        let brackets = self
            .nonzero_brackets()
            .filter(|(i, j, _)| *i < n && *j < n)
            .map(|(i, j, v)| (i, j, v.iter().filter(|(k, _)| *k < n).cloned().collect()))
            .collect();
        LieAlgebraTable::new(names, brackets)
    }

    /// Human-readable linear combination, e.g. `x11 - x9`.
    pub fn format_vector(&self, v: &[Rational]) -> String {
        format_combination(v, &self.names)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim,
            names: self.names.clone(),
            brackets: self
                .nonzero_brackets()
                .map(|(i, j, v)| {
                    (i + 1, j + 1, v.iter().map(|(k, x)| (k + 1, x.clone())).collect())
                })
                .collect(),
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self, LieError> {
        if file.names.len() != file.dim {
            return Err(LieError::NameCount {
                expected: file.dim,
                found: file.names.len(),
            });
        }
        let one_based = |index: usize| -> Result<usize, LieError> {
            if index == 0 || index > file.dim {
                Err(LieError::IndexOutOfRange {
                    index,
                    dim: file.dim,
                })
            } else {
                Ok(index - 1)
            }
        };
        let mut brackets = Vec::with_capacity(file.brackets.len());
        for (i, j, v) in &file.brackets {
            let (i, j) = (one_based(*i)?, one_based(*j)?);
            if i >= j {
                return Err(LieError::IllFormedVector {
                    i,
                    j,
                    reason: "only entries with i < j may be listed".into(),
                });
            }
            let v = v
                .iter()
                .map(|(k, x)| Ok((one_based(*k)?, x.clone())))
                .collect::<Result<SparseRow, LieError>>()?;
            brackets.push((i, j, v));
        }
        LieAlgebraTable::new(file.names.clone(), brackets)
    }
}

pub fn default_names(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("{prefix}{i}")).collect()
}

pub fn format_combination(v: &[Rational], names: &[String]) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude}*"));
        }
        out.push_str(&names[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Lower central and derived series with center and commutator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub lower_central: Vec<Subspace>,
    pub derived: Vec<Subspace>,
    pub center: Subspace,
    pub commutator: Subspace,
    /// `None` when the algebra is not nilpotent.
    pub nilpotency_class: Option<usize>,
}

impl SeriesReport {
    pub fn lower_central_dims(&self) -> Vec<usize> {
        self.lower_central.iter().map(Subspace::dim).collect()
    }

    pub fn derived_dims(&self) -> Vec<usize> {
        self.derived.iter().map(Subspace::dim).collect()
    }

    /// dim g^i / g^{i+1} for consecutive terms.
    pub fn lower_central_quotient_dims(&self) -> Vec<usize> {
        self.lower_central
            .windows(2)
            .map(|w| w[0].dim() - w[1].dim())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub is_stem: bool,
    pub z_ratio: Rational,
    pub codim_commutator: usize,
}
