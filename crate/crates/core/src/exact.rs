//! Exact rational scalars, dense matrices and a lattice of subspaces.
//!
//! Every subspace is stored by the reduced row echelon form of a spanning
//! set, so equality of subspaces is equality of data.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length")]
    RaggedRows,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// An arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Height max(|p|, q), used to order search points.
    pub fn height(&self) -> BigInt {
        let p = self.numer().abs();
        let q = self.denom().clone();
        if p > q {
            p
        } else {
            q
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| -> Result<BigInt, ExactError> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| ExactError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((p, q)) => Rational::from_bigints(parse(p)?, parse(q)?),
            None => Ok(Rational::from(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

pub fn zero_vector(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// `acc += factor * v`, skipping zero entries.
pub fn axpy(acc: &mut [Rational], factor: &Rational, v: &[Rational]) {
    if factor.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += factor * x;
        }
    }
}

/// Sparse row: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(n: usize, row: &[(usize, Rational)]) -> Vec<Rational> {
    let mut v = zero_vector(n);
    for (i, x) in row {
        v[*i] = x.clone();
    }
    v
}

/// Incremental Gaussian elimination over sparse rows.
///
/// Every stored row has a leading 1 and zeros in all previously known pivot
/// columns; [`RowReducer::into_rref`] finishes the back-substitution.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
    scratch: Vec<Rational>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            pivots: BTreeMap::new(),
            scratch: zero_vector(cols),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the current pivots, returning the residual.
    pub fn reduce(&mut self, row: &[(usize, Rational)]) -> SparseRow {
        if row.is_empty() {
            return Vec::new();
        }
        let lo = row[0].0;
        let mut hi = lo;
        for (c, x) in row {
            self.scratch[*c] = x.clone();
            hi = hi.max(*c);
        }
        let mut c = lo;
        while c < self.cols {
            if !self.scratch[c].is_zero() {
                if let Some(p) = self.pivots.get(&c) {
                    let f = std::mem::take(&mut self.scratch[c]);
                    for (j, x) in p.iter().skip(1) {
                        self.scratch[*j] -= &f * x;
                        hi = hi.max(*j);
                    }
                }
            }
            c += 1;
            if c > hi {
                break;
            }
        }
        let mut out = Vec::new();
        for j in lo..=hi.min(self.cols.saturating_sub(1)) {
            if !self.scratch[j].is_zero() {
                out.push((j, std::mem::take(&mut self.scratch[j])));
            }
        }
        out
    }

    /// Adds a row; returns true when it raised the rank.
    pub fn push(&mut self, row: &[(usize, Rational)]) -> bool {
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.recip().expect("nonzero leading entry");
        for (_, x) in r.iter_mut() {
            *x *= &lead;
        }
        self.pivots.insert(r[0].0, r);
        true
    }

    pub fn push_dense(&mut self, row: &[Rational]) -> bool {
        self.push(&sparse_from_dense(row))
    }

    /// Canonical reduced row echelon rows, ordered by pivot column.
    pub fn into_rref(mut self) -> Vec<SparseRow> {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for &c in cols.iter().rev() {
            let row = self.pivots.remove(&c).expect("pivot row");
            let needs = row.iter().skip(1).any(|(j, _)| done.contains_key(j));
            let row = if needs {
                for (j, x) in &row {
                    self.scratch[*j] = x.clone();
                }
                for (j, p) in done.iter() {
                    let f = std::mem::take(&mut self.scratch[*j]);
                    if f.is_zero() {
                        continue;
                    }
                    for (k, x) in p.iter().skip(1) {
                        self.scratch[*k] -= &f * x;
                    }
                }
                let mut out = Vec::new();
                for j in c..self.cols {
                    if !self.scratch[j].is_zero() {
                        out.push((j, std::mem::take(&mut self.scratch[j])));
                    }
                }
                out
            } else {
                row
            };
            done.insert(c, row);
        }
        done.into_values().collect()
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: zero_vector(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::RaggedRows);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix with an explicit column count, so that zero-row
    /// matrices keep their width.
    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::RaggedRows);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Rational::from(x)).collect())
            .collect();
        Matrix::from_rows(rows).expect("rectangular integer matrix")
    }

    pub fn from_sparse_rows(cols: usize, rows: &[SparseRow]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r {
                m.set(i, *j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.entries)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let start = i * other.cols;
                axpy(
                    &mut out.entries[start..start + other.cols],
                    a,
                    other.row(k),
                );
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix, ExactError> {
        let cols = blocks.first().map_or(0, |m| m.cols);
        if let Some(bad) = blocks.iter().find(|m| m.cols != cols) {
            return Err(ExactError::DimensionMismatch {
                expected: cols,
                found: bad.cols,
            });
        }
        Ok(Matrix {
            rows: blocks.iter().map(|m| m.rows).sum(),
            cols,
            entries: blocks.iter().flat_map(|m| m.entries.iter().cloned()).collect(),
        })
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.cols);
        for i in 0..self.rows {
            red.push_dense(self.row(i));
        }
        red
    }

    pub fn rank(&self) -> usize {
        self.reducer().rank()
    }

    /// The reduced row echelon form, same shape, zero rows at the bottom.
    pub fn rref(&self) -> Matrix {
        let rows = self.reducer().into_rref();
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r {
                m.set(i, *j, x.clone());
            }
        }
        m
    }

    pub fn nullspace(&self) -> Subspace {
        nullspace_from_rref(self.cols, &self.reducer().into_rref())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Rational]> = self.row_vectors().collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// A matrix stored as sparse rows; used for the large constraint systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row given as (column, value) pairs in any order; repeated
    /// columns are summed and zeros dropped.
    pub fn push_row<I: IntoIterator<Item = (usize, Rational)>>(&mut self, entries: I) {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, x) in entries {
            assert!(j < self.cols, "column out of range");
            *acc.entry(j).or_default() += x;
        }
        self.rows
            .push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn sparse_rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_sparse_rows(self.cols, &self.rows)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(j, x)| x * &v[*j]).sum())
            .collect()
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.cols);
        for r in &self.rows {
            red.push(r);
        }
        red
    }

    pub fn rank(&self) -> usize {
        self.reducer().rank()
    }

    pub fn nullspace(&self) -> Subspace {
        nullspace_from_rref(self.cols, &self.reducer().into_rref())
    }
}

fn nullspace_from_rref(cols: usize, rref: &[SparseRow]) -> Subspace {
    let mut pivot_of = vec![None; cols];
    for (i, r) in rref.iter().enumerate() {
        pivot_of[r[0].0] = Some(i);
    }
    // column-wise view of the non-pivot entries
    let mut by_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
    for r in rref {
        let p = r[0].0;
        for (j, x) in r.iter().skip(1) {
            by_col[*j].push((p, -x));
        }
    }
    let mut red = RowReducer::new(cols);
    for f in (0..cols).filter(|&j| pivot_of[j].is_none()) {
        let mut v: SparseRow = std::mem::take(&mut by_col[f]);
        v.push((f, Rational::one()));
        v.sort_by_key(|(j, _)| *j);
        red.push(&v);
    }
    Subspace::from_rref_rows(cols, red.into_rref())
}

/// A subspace of Q^n, stored as a canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.basis
        )
    }
}

impl Subspace {
    fn from_rref_rows(ambient_dim: usize, rows: Vec<SparseRow>) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::from_sparse_rows(ambient_dim, &rows),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::identity(n),
        }
    }

    /// Span of the given vectors, each of length `n`.
    pub fn span<I, V>(n: usize, vectors: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Rational]>,
    {
        let mut red = RowReducer::new(n);
        for v in vectors {
            let v = v.as_ref();
            if v.len() != n {
                return Err(ExactError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            red.push_dense(v);
        }
        Ok(Subspace::from_rref_rows(n, red.into_rref()))
    }

    pub fn row_space(m: &Matrix) -> Self {
        Subspace::from_rref_rows(m.cols(), m.reducer().into_rref())
    }

    /// Span of coordinate vectors e_i.
    pub fn coordinate(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Subspace::span(n, indices.into_iter().map(|i| unit_vector(n, i))).expect("in range")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis_vectors()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }

    fn check(&self, n: usize) -> Result<(), ExactError> {
        if n != self.ambient_dim {
            Err(ExactError::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            })
        } else {
            Ok(())
        }
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        self.check(v.len())?;
        let mut r = v.to_vec();
        for (row, p) in self.basis_vectors().zip(self.pivots()) {
            if !r[p].is_zero() {
                let f = -r[p].clone();
                axpy(&mut r, &f, row);
            }
        }
        Ok(r)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool, ExactError> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    /// Coordinates of `v` in the RREF basis, when `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, ExactError> {
        if !self.contains_vector(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots().into_iter().map(|p| v[p].clone()).collect()))
    }

    /// True when `other` ⊆ `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, ExactError> {
        self.check(other.ambient_dim)?;
        for v in other.basis_vectors() {
            if !self.contains_vector(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check(other.ambient_dim)?;
        Subspace::span(
            self.ambient_dim,
            self.basis_vectors().chain(other.basis_vectors()),
        )
    }

    /// Linear functionals vanishing on the subspace, as a subspace of Q^n.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        self.basis.nullspace()
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check(other.ambient_dim)?;
        let a = self.annihilator();
        let b = other.annihilator();
        let stacked = Matrix::vstack(&[a.basis(), b.basis()])?;
        if stacked.rows() == 0 {
            return Ok(Subspace::full(self.ambient_dim));
        }
        Ok(stacked.nullspace())
    }

    /// Image under a linear map given by its matrix (acting on columns).
    pub fn image(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        self.check(m.cols())?;
        Subspace::span(m.rows(), self.basis_vectors().map(|v| m.mul_vec(v)))
    }

    /// Direct product S_1 × ... × S_k inside Q^{n_1 + ... + n_k}.
    pub fn product(factors: &[&Subspace]) -> Subspace {
        let n: usize = factors.iter().map(|s| s.ambient_dim).sum();
        let mut vectors = Vec::new();
        let mut offset = 0;
        for s in factors {
            for v in s.basis_vectors() {
                let mut w = zero_vector(n);
                w[offset..offset + s.ambient_dim].clone_from_slice(v);
                vectors.push(w);
            }
            offset += s.ambient_dim;
        }
        Subspace::span(n, vectors).expect("consistent lengths")
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ambient_dim: usize,
            basis: Vec<Vec<Rational>>,
        }
        let r = Repr::deserialize(deserializer)?;
        Subspace::span(r.ambient_dim, r.basis).map_err(serde::de::Error::custom)
    }
}

/// Ceiling of a/b for positive b.
pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}
