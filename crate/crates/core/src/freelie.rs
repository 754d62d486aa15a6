//! Free-nilpotent Lie algebras F_{g,c} on the Lyndon basis.
//!
//! Basis elements are Lyndon words of length at most `c` over the letters
//! `1..=g`, bracketed by their standard factorization and ordered by degree,
//! then lexicographically. Brackets of basis elements are rewritten into this
//! basis by recursion on the standard factorization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{Rational, SparseRow};
use crate::format::AlgebraFile;
use crate::liealg::{LieAlgebraTable, LieError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeLieError {
    #[error("need at least {min} generators, got {got}")]
    TooFewGenerators { min: usize, got: usize },
    #[error("nilpotency class must be at least 1")]
    ZeroClass,
    #[error("dimension {dimension} exceeds the budget of {limit}")]
    BudgetExceeded { dimension: BigUint, limit: usize },
    #[error(transparent)]
    Table(#[from] LieError),
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// I_m(g) = (1/m) Σ_{d | m} μ(d) g^{m/d}, the number of Lyndon words of
/// length m over g letters.
pub fn necklace_count(g: u64, m: u64) -> BigUint {
    assert!(m >= 1);
    let base = BigInt::from(g);
    let mut sum = BigInt::zero();
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu != 0 {
            sum += BigInt::from(mu) * base.pow((m / d) as u32);
        }
    }
    let quotient = sum / BigInt::from(m);
    quotient.to_biguint().expect("necklace counts are nonnegative")
}

/// Dimensions of the homogeneous components of F_{g,c}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDimensions {
    pub generators: u64,
    pub class: u64,
    /// `per_degree[m - 1] = I_m(g)`.
    pub per_degree: Vec<BigUint>,
}

impl WittDimensions {
    pub fn total(&self) -> BigUint {
        self.per_degree.iter().sum()
    }

    /// dim Z(F_{g,c}) = I_c(g).
    pub fn center_dim(&self) -> BigUint {
        self.per_degree.last().cloned().unwrap_or_default()
    }

    /// dim F_{g,k} for k = 1..=c.
    pub fn cumulative(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.per_degree
            .iter()
            .map(|x| {
                acc += x;
                acc.clone()
            })
            .collect()
    }
}

pub fn witt_dimension(g: u64, c: u64) -> WittDimensions {
    WittDimensions {
        generators: g,
        class: c,
        per_degree: (1..=c).map(|m| necklace_count(g, m)).collect(),
    }
}

/// A word is Lyndon when it is strictly smaller than each proper rotation.
pub fn is_lyndon(word: &[usize]) -> bool {
    let n = word.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|r| {
        let rotated = word[r..].iter().chain(&word[..r]);
        word.iter().cmp(rotated) == std::cmp::Ordering::Less
    })
}

/// All Lyndon words of length ≤ `max_len` over letters `1..=g` (Duval's
/// generation order), unsorted.
pub fn lyndon_words(g: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if g == 0 || max_len == 0 {
        return out;
    }
    let mut w = vec![0usize];
    while !w.is_empty() {
        out.push(w.iter().map(|x| x + 1).collect());
        let m = w.len();
        while w.len() < max_len {
            let next = w[w.len() - m];
            w.push(next);
        }
        while let Some(&last) = w.last() {
            if last == g - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Standard factorization w = uv with v the longest proper Lyndon suffix.
/// `None` for single letters.
pub fn standard_factorization(word: &[usize]) -> Option<(&[usize], &[usize])> {
    if word.len() < 2 {
        return None;
    }
    (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .map(|i| word.split_at(i))
}

/// Binary bracketing tree of a basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Letter(usize),
    Bracket(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn of_word(word: &[usize]) -> Bracketing {
        match standard_factorization(word) {
            None => Bracketing::Letter(word[0]),
            Some((u, v)) => Bracketing::Bracket(Box::new(Self::of_word(u)), Box::new(Self::of_word(v))),
        }
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Letter(a) => write!(f, "{a}"),
            Bracketing::Bracket(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonElement {
    pub word: Vec<usize>,
    pub degree: usize,
    pub bracketing: Bracketing,
    pub basis_index: usize,
    /// Basis indices of the standard factorization.
    pub factors: Option<(usize, usize)>,
}

impl LyndonElement {
    /// `x1` for generators, `x[1,[1,2]]` otherwise.
    pub fn label(&self) -> String {
        match self.bracketing {
            Bracketing::Letter(a) => format!("x{a}"),
            ref b => format!("x{b}"),
        }
    }
}

/// Resource limits for [`build_free_nilpotent_with_budget`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildBudget {
    pub max_dim: usize,
}

impl Default for BuildBudget {
    fn default() -> Self {
        BuildBudget { max_dim: 4096 }
    }
}

#[derive(Clone, Debug)]
pub struct FreeNilpotentPresentation {
    pub generators: usize,
    pub class: usize,
    pub basis: Vec<LyndonElement>,
    pub table: LieAlgebraTable,
}

struct Normalizer<'a> {
    class: usize,
    basis: &'a [LyndonElement],
    index: HashMap<Vec<usize>, usize>,
    memo: HashMap<(usize, usize), SparseRow>,
}

fn scale_into(acc: &mut BTreeMap<usize, Rational>, factor: &Rational, v: &SparseRow) {
    for (k, x) in v {
        *acc.entry(*k).or_default() += factor * x;
    }
}

fn collect(acc: BTreeMap<usize, Rational>) -> SparseRow {
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

impl Normalizer<'_> {
    fn bracket(&mut self, a: usize, b: usize) -> SparseRow {
        if a == b || self.basis[a].degree + self.basis[b].degree > self.class {
            return Vec::new();
        }
        if self.basis[a].word > self.basis[b].word {
            return self.bracket(b, a).into_iter().map(|(k, x)| (k, -x)).collect();
        }
        if let Some(v) = self.memo.get(&(a, b)) {
            return v.clone();
        }
        let concat_is_basis = match self.basis[a].factors {
            None => true,
            Some((_, a2)) => self.basis[a2].word >= self.basis[b].word,
        };
        let result = if concat_is_basis {
            let mut w = self.basis[a].word.clone();
            w.extend_from_slice(&self.basis[b].word);
            let k = self.index[&w];
            debug_assert_eq!(self.basis[k].factors, Some((a, b)));
            vec![(k, Rational::one())]
        } else {
            // [[a1, a2], b] = [[a1, b], a2] + [a1, [a2, b]]
            let (a1, a2) = self.basis[a].factors.expect("non-letter");
            let mut acc = BTreeMap::new();
            for (l, x) in self.bracket(a1, b) {
                let v = self.bracket(l, a2);
                scale_into(&mut acc, &x, &v);
            }
            for (l, x) in self.bracket(a2, b) {
                let v = self.bracket(a1, l);
                scale_into(&mut acc, &x, &v);
            }
            collect(acc)
        };
        self.memo.insert((a, b), result.clone());
        result
    }
}

pub fn build_free_nilpotent(g: usize, c: usize) -> Result<FreeNilpotentPresentation, FreeLieError> {
    build_free_nilpotent_with_budget(g, c, BuildBudget::default())
}

pub fn build_free_nilpotent_with_budget(
    g: usize,
    c: usize,
    budget: BuildBudget,
) -> Result<FreeNilpotentPresentation, FreeLieError> {
    if g < 2 {
        return Err(FreeLieError::TooFewGenerators { min: 2, got: g });
    }
    if c == 0 {
        return Err(FreeLieError::ZeroClass);
    }
    let expected = witt_dimension(g as u64, c as u64).total();
    if expected > BigUint::from(budget.max_dim) {
        return Err(FreeLieError::BudgetExceeded {
            dimension: expected,
            limit: budget.max_dim,
        });
    }
    let mut words = lyndon_words(g, c);
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let basis: Vec<LyndonElement> = words
        .iter()
        .enumerate()
        .map(|(i, w)| LyndonElement {
            word: w.clone(),
            degree: w.len(),
            bracketing: Bracketing::of_word(w),
            basis_index: i,
            factors: standard_factorization(w).map(|(u, v)| (index[u], index[v])),
        })
        .collect();
    let dim = basis.len();
    let mut norm = Normalizer {
        class: c,
        basis: &basis,
        index,
        memo: HashMap::new(),
    };
    let mut brackets = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            if basis[i].degree + basis[j].degree > c {
                continue;
            }
            let v = norm.bracket(i, j);
            if !v.is_empty() {
                brackets.push((i, j, v));
            }
        }
    }
    let names = basis.iter().map(LyndonElement::label).collect();
    let table = LieAlgebraTable::new(names, brackets)?;
    Ok(FreeNilpotentPresentation {
        generators: g,
        class: c,
        basis,
        table,
    })
}

impl FreeNilpotentPresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    /// Basis indices of degree `m`.
    pub fn degree_range(&self, m: usize) -> std::ops::Range<usize> {
        let start = self.basis.partition_point(|e| e.degree < m);
        let end = self.basis.partition_point(|e| e.degree <= m);
        start..end
    }

    pub fn generator_indices(&self) -> std::ops::Range<usize> {
        self.degree_range(1)
    }

    /// The degree-c block, which spans the center.
    pub fn center_indices(&self) -> std::ops::Range<usize> {
        self.degree_range(self.class)
    }

    /// `[b_i, b_j]` in the Lyndon basis.
    pub fn normalize_bracket(&self, i: usize, j: usize) -> SparseRow {
        self.table.bracket_basis(i, j).clone()
    }

    pub fn to_file(&self) -> AlgebraFile {
        self.table.to_file()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (n, mu) in (1..=12).zip(expected) {
            assert_eq!(mobius(n), mu, "mu({n})");
        }
    }

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 2]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 2, 1, 2]));
        assert!(!is_lyndon(&[1, 1]));
        assert!(!is_lyndon(&[]));
    }

    #[test]
    fn standard_factorizations() {
        assert_eq!(standard_factorization(&[1]), None);
        assert_eq!(standard_factorization(&[1, 1, 2]), Some((&[1][..], &[1, 2][..])));
        assert_eq!(standard_factorization(&[1, 2, 2]), Some((&[1, 2][..], &[2][..])));
        assert_eq!(standard_factorization(&[1, 2, 1, 2, 2]), Some((&[1, 2][..], &[1, 2, 2][..])));
    }

    #[test]
    fn bracketing_labels() {
        let b = Bracketing::of_word(&[1, 1, 2]);
        assert_eq!(b.to_string(), "[1,[1,2]]");
        assert_eq!(Bracketing::of_word(&[1, 2, 2]).to_string(), "[[1,2],2]");
    }

    #[test]
    fn abelian_case() {
        for g in 1..6 {
            let w = witt_dimension(g, 1);
            assert_eq!(w.total(), BigUint::from(g));
        }
    }

    #[test]
    fn build_rejects_bad_arguments() {
        assert!(matches!(build_free_nilpotent(1, 3), Err(FreeLieError::TooFewGenerators { .. })));
        assert!(matches!(build_free_nilpotent(2, 0), Err(FreeLieError::ZeroClass)));
        assert!(matches!(
            build_free_nilpotent_with_budget(2, 10, BuildBudget { max_dim: 100 }),
            Err(FreeLieError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn heisenberg_is_f22() {
        let p = build_free_nilpotent(2, 2).unwrap();
        assert_eq!(p.dim(), 3);
        let brackets: Vec<_> = p.table.nonzero_brackets().map(|(i, j, v)| (i, j, v.clone())).collect();
        assert_eq!(brackets, vec![(0, 1, vec![(2, Rational::one())])]);
        assert_eq!(p.table.names(), &["x1", "x2", "x[1,2]"]);
    }

    #[test]
    fn f23_matches_hall_table_up_to_sign() {
        let p = build_free_nilpotent(2, 3).unwrap();
        let t = &p.table;
        let one = Rational::one();
        assert_eq!(t.bracket_basis(0, 1), &vec![(2, one.clone())]);
        assert_eq!(t.bracket_basis(0, 2), &vec![(3, one.clone())]);
        // the Lyndon element 122 is [[1,2],2] = -[2,[1,2]]
        assert_eq!(t.bracket_basis(1, 2), &vec![(4, -one.clone())]);
        assert_eq!(t.bracket_basis(1, 0), &vec![(2, -one)]);
        assert!(t.bracket_basis(0, 0).is_empty());
    }

    #[test]
    fn f33_brackets_against_generators() {
        let p = build_free_nilpotent(3, 3).unwrap();
        let e = |w: &[usize]| p.basis.iter().position(|b| b.word == w).unwrap();
        let one = Rational::one();
        // [x[2,3], x1] = -x[1,[2,3]]: the concatenation 123 factors as (1, 23)
        assert_eq!(p.normalize_bracket(e(&[2, 3]), 0), vec![(e(&[1, 2, 3]), -one.clone())]);
        // [x3, x[1,2]] = -[[1,3],2] - [1,[2,3]] is a two-term combination
        let v = p.normalize_bracket(2, e(&[1, 2]));
        let mut expected = vec![(e(&[1, 2, 3]), -one.clone()), (e(&[1, 3, 2]), -one)];
        expected.sort_by_key(|(k, _)| *k);
        assert_eq!(v, expected);
        assert!(v.iter().all(|(_, x)| x.is_integer()));
    }

    #[test]
    fn degree_ranges() {
        let p = build_free_nilpotent(3, 3).unwrap();
        assert_eq!(p.generator_indices(), 0..3);
        assert_eq!(p.degree_range(2), 3..6);
        assert_eq!(p.center_indices(), 6..14);
    }
}
