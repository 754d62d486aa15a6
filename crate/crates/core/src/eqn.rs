//! Linear equation systems over nilpotent Lie algebras.
//!
//! For a generating pair (x, y) of a two-generated algebra, the pair system
//! asks for u, v, w ∈ [g,g] with
//!
//! ```text
//! [x,u] + [y,v] = 0,   [x,v] + [y,w] = 0.
//! ```
//!
//! The algebra has property F when every solution for every generating pair
//! is central. For g ≥ 3 generators the grid system asks for symmetric
//! u_{ij} ∈ [g,g] with `[u_ij, x_k] + [x_j, u_ik] = 0` for all i, j, k.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{is_zero_vector, unit_vector, ExactError, Rational, SparseMatrix, Subspace};
use crate::freelie::{build_free_nilpotent, FreeLieError};
use crate::liealg::{LieAlgebraTable, LieError};
use crate::polysolve::{self, SolveBudget, Ternary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EqnError {
    #[error("g/[g,g] has dimension {found}, expected {expected}")]
    AbelianizationRank { expected: usize, found: usize },
    #[error("the given vectors do not generate the algebra modulo [g,g]")]
    NotGenerating,
    #[error("at least 3 generators are required, got {found}")]
    InsufficientGenerators { found: usize },
    #[error("the algebra is not nilpotent")]
    NotNilpotent,
    #[error("z(g) = {z_ratio} < 1/3 but every tested pair gave central solutions")]
    RatioContradiction { z_ratio: Rational },
    #[error("class bound must be at least 3, got {0}")]
    ClassTooSmall(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Solutions `(u, v, w)` of the pair system, in ambient coordinates of
/// `g ⊕ g ⊕ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSystem {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub domain: Subspace,
    pub rows: usize,
    pub cols: usize,
    pub solution: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
}

impl PairSystem {
    pub fn dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn split(&self, s: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
        let n = self.dim();
        (s[..n].to_vec(), s[n..2 * n].to_vec(), s[2 * n..].to_vec())
    }

    pub fn is_central(&self, center: &Subspace) -> bool {
        Subspace::product(&[center, center, center])
            .contains(&self.solution)
            .expect("same ambient")
    }

    /// First solution basis vector outside `Z(g)³`.
    pub fn noncentral_witness(&self, center: &Subspace) -> Option<PairWitness> {
        let z3 = Subspace::product(&[center, center, center]);
        self.solution
            .basis_vectors()
            .find(|s| !z3.contains_vector(s).expect("same ambient"))
            .map(|s| {
                let (u, v, w) = self.split(s);
                PairWitness {
                    x: self.x.clone(),
                    y: self.y.clone(),
                    u,
                    v,
                    w,
                }
            })
    }
}

/// Residuals `([x,u] + [y,v], [x,v] + [y,w])`.
pub fn pair_residual(
    t: &LieAlgebraTable,
    x: &[Rational],
    y: &[Rational],
    u: &[Rational],
    v: &[Rational],
    w: &[Rational],
) -> Result<(Vec<Rational>, Vec<Rational>), LieError> {
    let add = |a: Vec<Rational>, b: Vec<Rational>| a.into_iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>();
    Ok((
        add(t.bracket(x, u)?, t.bracket(y, v)?),
        add(t.bracket(x, v)?, t.bracket(y, w)?),
    ))
}

fn check_generating(t: &LieAlgebraTable, commutator: &Subspace, vectors: &[&[Rational]]) -> Result<(), EqnError> {
    let spanned = commutator.sum(&Subspace::span(t.dim(), vectors.iter().copied())?)?;
    if spanned.is_full() {
        Ok(())
    } else {
        Err(EqnError::NotGenerating)
    }
}

fn two_generated(t: &LieAlgebraTable) -> Result<Subspace, EqnError> {
    let commutator = t.commutator();
    let found = t.dim() - commutator.dim();
    if found != 2 {
        return Err(EqnError::AbelianizationRank { expected: 2, found });
    }
    Ok(commutator)
}

pub fn solve_pair(t: &LieAlgebraTable, x: &[Rational], y: &[Rational]) -> Result<PairSystem, EqnError> {
    let domain = two_generated(t)?;
    check_generating(t, &domain, &[x, y])?;
    let n = t.dim();
    let r = domain.dim();
    let basis: Vec<&[Rational]> = domain.basis_vectors().collect();
    let adx: Vec<Vec<Rational>> = basis.iter().map(|d| t.bracket(x, d)).collect::<Result<_, _>>()?;
    let ady: Vec<Vec<Rational>> = basis.iter().map(|d| t.bracket(y, d)).collect::<Result<_, _>>()?;
    // columns: a (u-coordinates), b (v), c (w)
    let mut m = SparseMatrix::new(3 * r);
    for q in 0..n {
        let first = (0..r)
            .filter(|&p| !adx[p][q].is_zero())
            .map(|p| (p, adx[p][q].clone()))
            .chain((0..r).filter(|&p| !ady[p][q].is_zero()).map(|p| (r + p, ady[p][q].clone())));
        m.push_row(first);
        let second = (0..r)
            .filter(|&p| !adx[p][q].is_zero())
            .map(|p| (r + p, adx[p][q].clone()))
            .chain((0..r).filter(|&p| !ady[p][q].is_zero()).map(|p| (2 * r + p, ady[p][q].clone())));
        m.push_row(second);
    }
    let kernel = m.nullspace();
    let vectors: Vec<Vec<Rational>> = kernel
        .basis_vectors()
        .map(|k| {
            let mut s = vec![Rational::zero(); 3 * n];
            for block in 0..3 {
                for (p, d) in basis.iter().enumerate() {
                    let c = &k[block * r + p];
                    if !c.is_zero() {
                        crate::exact::axpy(&mut s[block * n..(block + 1) * n], c, d);
                    }
                }
            }
            s
        })
        .collect();
    Ok(PairSystem {
        x: x.to_vec(),
        y: y.to_vec(),
        rows: 2 * n,
        cols: 3 * r,
        solution: Subspace::span(3 * n, vectors)?,
        domain,
    })
}

/// How pairs are chosen when testing property F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairPolicy {
    pub random_pairs: usize,
    /// Bound on numerators and denominators of random coordinates.
    pub height: i64,
    pub seed: u64,
    /// Automorphisms act transitively on generating pairs, so the canonical
    /// pair decides the property.
    pub transitive: bool,
}

impl Default for PairPolicy {
    fn default() -> Self {
        PairPolicy {
            random_pairs: 25,
            height: 3,
            seed: 0,
            transitive: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyF {
    True,
    False,
    TrueForTestedPairs,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSummary {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub solution_dim: usize,
    pub central: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyFReport {
    pub verdict: PropertyF,
    pub z_ratio: Rational,
    pub obstructed: bool,
    pub pairs: Vec<PairSummary>,
    pub witness: Option<PairWitness>,
}

/// The coordinate vectors off the pivots of `[g,g]`, a canonical lift of a
/// basis of g/[g,g].
pub fn canonical_generators(t: &LieAlgebraTable) -> Vec<Vec<Rational>> {
    let pivots = t.commutator().pivots();
    (0..t.dim())
        .filter(|k| !pivots.contains(k))
        .map(|k| unit_vector(t.dim(), k))
        .collect()
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, height: i64) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(rng.gen_range(-height..=height), rng.gen_range(1..=height.max(1))))
        .collect()
}

pub fn has_property_f(t: &LieAlgebraTable, policy: &PairPolicy) -> Result<PropertyFReport, EqnError> {
    if !t.is_nilpotent() {
        return Err(EqnError::NotNilpotent);
    }
    let commutator = two_generated(t)?;
    let bound = ratio_bound(t)?;
    let center = t.center();
    let canonical = canonical_generators(t);
    let mut candidates = vec![(canonical[0].clone(), canonical[1].clone())];
    if !policy.transitive {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        let mut attempts = 0;
        while candidates.len() < policy.random_pairs + 1 && attempts < 20 * (policy.random_pairs + 1) {
            attempts += 1;
            let x = random_vector(&mut rng, t.dim(), policy.height);
            let y = random_vector(&mut rng, t.dim(), policy.height);
            if check_generating(t, &commutator, &[&x, &y]).is_ok() {
                candidates.push((x, y));
            }
        }
    }
    let mut pairs = Vec::new();
    for (x, y) in candidates {
        let system = solve_pair(t, &x, &y)?;
        let witness = system.noncentral_witness(&center);
        pairs.push(PairSummary {
            x,
            y,
            solution_dim: system.solution.dim(),
            central: witness.is_none(),
        });
        if witness.is_some() {
            return Ok(PropertyFReport {
                verdict: PropertyF::False,
                z_ratio: bound.z_ratio,
                obstructed: bound.obstructed,
                pairs,
                witness,
            });
        }
    }
    if bound.obstructed {
        return Err(EqnError::RatioContradiction { z_ratio: bound.z_ratio });
    }
    Ok(PropertyFReport {
        verdict: if policy.transitive { PropertyF::True } else { PropertyF::TrueForTestedPairs },
        z_ratio: bound.z_ratio,
        obstructed: bound.obstructed,
        pairs,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioBound {
    pub z_ratio: Rational,
    /// z(g) < 1/3, which rules out property F.
    pub obstructed: bool,
}

pub fn ratio_bound(t: &LieAlgebraTable) -> Result<RatioBound, EqnError> {
    if !t.is_nilpotent() {
        return Err(EqnError::NotNilpotent);
    }
    two_generated(t)?;
    let z_ratio = t.invariants().z_ratio;
    Ok(RatioBound {
        obstructed: z_ratio < Rational::new(1, 3),
        z_ratio,
    })
}

/// Solutions of the grid system as vectors of `g^P`, one block per pair
/// `i ≤ j` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSystem {
    pub generators: Vec<Vec<Rational>>,
    pub pairs: Vec<(usize, usize)>,
    pub domain: Subspace,
    pub rows: usize,
    pub cols: usize,
    pub solution: Subspace,
}

impl GridSystem {
    pub fn block(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        self.pairs.iter().position(|p| *p == (i, j)).expect("pair in range")
    }

    /// `Z(g)^P`, every assignment of central elements.
    pub fn central_assignments(&self, center: &Subspace) -> Subspace {
        let factors: Vec<&Subspace> = self.pairs.iter().map(|_| center).collect();
        Subspace::product(&factors)
    }

    pub fn is_central(&self, center: &Subspace) -> bool {
        self.central_assignments(center).contains(&self.solution).expect("same ambient")
    }

    pub fn equals_central_assignments(&self, center: &Subspace) -> bool {
        self.central_assignments(center) == self.solution
    }
}

pub fn solve_grid(t: &LieAlgebraTable, generators: &[Vec<Rational>]) -> Result<GridSystem, EqnError> {
    let g = generators.len();
    if g < 3 {
        return Err(EqnError::InsufficientGenerators { found: g });
    }
    let domain = t.commutator();
    let refs: Vec<&[Rational]> = generators.iter().map(Vec::as_slice).collect();
    check_generating(t, &domain, &refs)?;
    let n = t.dim();
    let r = domain.dim();
    let pairs: Vec<(usize, usize)> = (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).collect();
    let block = |i: usize, j: usize| pairs.iter().position(|p| *p == (i.min(j), i.max(j))).expect("pair");
    let basis: Vec<&[Rational]> = domain.basis_vectors().collect();
    // ad(x_k) d_p
    let ad: Vec<Vec<Vec<Rational>>> = generators
        .iter()
        .map(|x| basis.iter().map(|d| t.bracket(x, d)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let mut m = SparseMatrix::new(pairs.len() * r);
    // [u_ij, x_k] + [x_j, u_ik] = −ad(x_k) u_ij + ad(x_j) u_ik
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                let (bij, bik) = (block(i, j), block(i, k));
                for q in 0..n {
                    let entries = (0..r)
                        .filter(|&p| !ad[k][p][q].is_zero())
                        .map(|p| (bij * r + p, -&ad[k][p][q]))
                        .chain(
                            (0..r)
                                .filter(|&p| !ad[j][p][q].is_zero())
                                .map(|p| (bik * r + p, ad[j][p][q].clone())),
                        );
                    m.push_row(entries);
                }
            }
        }
    }
    let rows = m.rows();
    let kernel = m.nullspace();
    let vectors: Vec<Vec<Rational>> = kernel
        .basis_vectors()
        .map(|k| {
            let mut s = vec![Rational::zero(); pairs.len() * n];
            for b in 0..pairs.len() {
                for (p, d) in basis.iter().enumerate() {
                    let c = &k[b * r + p];
                    if !c.is_zero() {
                        crate::exact::axpy(&mut s[b * n..(b + 1) * n], c, d);
                    }
                }
            }
            s
        })
        .collect();
    Ok(GridSystem {
        generators: generators.to_vec(),
        cols: pairs.len() * r,
        solution: Subspace::span(pairs.len() * n, vectors)?,
        pairs,
        domain,
        rows,
    })
}

/// Residual `[u_ij, x_k] + [x_j, u_ik]` for a grid assignment.
pub fn grid_residual(
    t: &LieAlgebraTable,
    system: &GridSystem,
    s: &[Rational],
    (i, j, k): (usize, usize, usize),
) -> Result<Vec<Rational>, LieError> {
    let n = t.dim();
    let u = |a: usize, b: usize| {
        let blk = system.block(a, b);
        &s[blk * n..(blk + 1) * n]
    };
    let a = t.bracket(u(i, j), &system.generators[k])?;
    let b = t.bracket(&system.generators[j], u(i, k))?;
    Ok(a.into_iter().zip(b).map(|(p, q)| p + q).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub class: usize,
    pub dim: usize,
    pub center_dim: usize,
    pub commutator_dim: usize,
    pub system_rows: usize,
    pub system_cols: usize,
    pub solution_dim: usize,
    pub central: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseCase {
    pub class: usize,
    pub parameters: usize,
    pub central: Ternary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub classes: Vec<ClassReport>,
    pub base_case: BaseCase,
    pub all_central: bool,
    pub reasoning: &'static str,
}

const INDUCTION: &str = "For F(2,c) with c >= 3: for a CPA structure on F(2,c+1) the products x_i.x_j of \
the generators lie in [n,n] and satisfy the pair system for the generating pair (x_1, x_2); when every \
solution of that system is central the products land in the last term of the lower central series, so the \
structure is central. The base case c = 3 is settled by the full polynomial solve.";

/// Checks the pair system of F(2,c) on its canonical generators for
/// `3 ≤ c ≤ c_max`, and solves the CPA variety of F(2,3) completely.
pub fn conjecture_scan(c_max: usize, budget: &SolveBudget) -> Result<ConjectureReport, EqnError> {
    if c_max < 3 {
        return Err(EqnError::ClassTooSmall(c_max));
    }
    let mut classes = Vec::new();
    for c in 3..=c_max {
        let start = Instant::now();
        let p = build_free_nilpotent(2, c)?;
        let t = &p.table;
        let (x, y) = (unit_vector(t.dim(), 0), unit_vector(t.dim(), 1));
        let system = solve_pair(t, &x, &y)?;
        let center = t.center();
        classes.push(ClassReport {
            class: c,
            dim: t.dim(),
            center_dim: center.dim(),
            commutator_dim: system.domain.dim(),
            system_rows: system.rows,
            system_cols: system.cols,
            solution_dim: system.solution.dim(),
            central: system.is_central(&center),
            elapsed: start.elapsed(),
        });
    }
    let base = Arc::new(build_free_nilpotent(2, 3)?.table);
    let variety = polysolve::solve_cpa(base.clone(), budget);
    let central = polysolve::variety_is_central(&variety, &base.center(), budget).verdict;
    let all_central = classes.iter().all(|c| c.central) && central == Ternary::Yes;
    Ok(ConjectureReport {
        classes,
        base_case: BaseCase {
            class: 3,
            parameters: variety.parameters,
            central,
        },
        all_central,
        reasoning: INDUCTION,
    })
}

/// `z(F(2,n)) = I_n / Σ_{m ≤ n} I_m` from the Witt dimensions.
pub fn free_two_generator_ratio(n: usize) -> Rational {
    let w = crate::freelie::witt_dimension(2, n as u64);
    let top = num_bigint::BigInt::from(w.center_dim());
    let total = num_bigint::BigInt::from(w.total());
    Rational::from_bigints(top, total).expect("positive total")
}

/// Checks that every generator is nonzero modulo `[g,g]`; convenience for
/// callers that pick generators by hand.
pub fn is_generating_set(t: &LieAlgebraTable, vectors: &[Vec<Rational>]) -> bool {
    let refs: Vec<&[Rational]> = vectors.iter().map(Vec::as_slice).collect();
    !refs.iter().any(|v| is_zero_vector(v)) && check_generating(t, &t.commutator(), &refs).is_ok()
}
