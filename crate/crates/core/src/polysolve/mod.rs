//! Polynomial systems for CPA structures.
//!
//! The unknowns are the tensor coefficients `t[i][j][k]` with `i ≤ j`. The
//! derivation axiom is linear in them and is solved first by an exact
//! nullspace, giving `t = P·s`. The representation axiom becomes a system of
//! quadratic polynomials in the free parameters `s`, which is handed to
//! Buchberger's algorithm.

pub mod groebner;
pub mod poly;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

pub use groebner::{buchberger, normal_form, radical_member, BudgetExceeded, GroebnerBasis, GroebnerBudget, Ternary};
pub use poly::{Monomial, MultiPoly, ParsePolyError};

use crate::cpa::{self, CpaProduct};
use crate::exact::{Rational, RowReducer, SparseMatrix, SparseRow, Subspace};
use crate::liealg::LieAlgebraTable;

/// Index layout of the unknowns `t[i][j][k]`, `i ≤ j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownLayout {
    dim: usize,
}

impl UnknownLayout {
    pub fn new(dim: usize) -> Self {
        UnknownLayout { dim }
    }

    pub fn count(&self) -> usize {
        self.dim * self.dim * (self.dim + 1) / 2
    }

    /// Index of `t[i][j][k]`; the pair is sorted first.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        let n = self.dim;
        let pair = i * n - i * i.saturating_sub(1) / 2 + (j - i);
        pair * n + k
    }

    /// Inverse of [`index`](Self::index).
    pub fn triple(&self, u: usize) -> (usize, usize, usize) {
        let n = self.dim;
        let (pair, k) = (u / n, u % n);
        let mut i = 0;
        let mut start = 0;
        while start + (n - i) <= pair {
            start += n - i;
            i += 1;
        }
        (i, i + pair - start, k)
    }
}

/// Raw constraint system in the tensor unknowns.
#[derive(Clone, Debug)]
pub struct Constraints {
    pub layout: UnknownLayout,
    /// Derivation-axiom rows over all basis triples.
    pub linear: SparseMatrix,
    /// Representation-axiom residuals, degree ≤ 2.
    pub quadratic: Vec<MultiPoly>,
}

fn derivation_rows(t: &LieAlgebraTable, layout: UnknownLayout) -> SparseMatrix {
    let n = t.dim();
    let mut m = SparseMatrix::new(layout.count());
    // e_i·[e_j,e_k] − [e_i·e_j, e_k] − [e_j, e_i·e_k], component q
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
                for (l, c) in t.bracket_basis(j, k) {
                    for (q, row) in rows.iter_mut().enumerate() {
                        row.push((layout.index(i, *l, q), c.clone()));
                    }
                }
                for l in 0..n {
                    for (q, c) in t.bracket_basis(l, k) {
                        rows[*q].push((layout.index(i, j, l), -c));
                    }
                    for (q, c) in t.bracket_basis(j, l) {
                        rows[*q].push((layout.index(i, k, l), -c));
                    }
                }
                for row in rows {
                    if !row.is_empty() {
                        m.push_row(row);
                    }
                }
            }
        }
    }
    m
}

/// Accumulates `Σ c·form_a·form_b + Σ c·form` into a polynomial.
#[derive(Default)]
struct QuadraticAccumulator {
    quadratic: HashMap<(usize, usize), Rational>,
    linear: HashMap<usize, Rational>,
}

impl QuadraticAccumulator {
    fn add_linear(&mut self, c: &Rational, form: &[(usize, Rational)]) {
        for (v, x) in form {
            *self.linear.entry(*v).or_default() += c * x;
        }
    }

    fn add_product(&mut self, c: &Rational, a: &[(usize, Rational)], b: &[(usize, Rational)]) {
        for (v, x) in a {
            let cx = c * x;
            for (w, y) in b {
                let key = (*v.min(w), *v.max(w));
                *self.quadratic.entry(key).or_default() += &cx * y;
            }
        }
    }

    fn finish(self) -> MultiPoly {
        let mut terms: Vec<(Monomial, Rational)> = self
            .quadratic
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((v, w), c)| (Monomial::from_factors(vec![(v as u32, 1), (w as u32, 1)]), c))
            .collect();
        terms.extend(
            self.linear
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(v, c)| (Monomial::var(v), c)),
        );
        MultiPoly::from_terms(terms)
    }
}

/// Representation-axiom residuals with each unknown replaced by `form(u)`.
fn representation_polys<'a, F>(t: &LieAlgebraTable, layout: UnknownLayout, form: F) -> Vec<MultiPoly>
where
    F: Fn(usize) -> &'a [(usize, Rational)],
{
    let n = t.dim();
    let tf = |a: usize, b: usize, c: usize| form(layout.index(a, b, c));
    let mut out = Vec::new();
    // [e_i,e_j]·e_k − e_i·(e_j·e_k) + e_j·(e_i·e_k), component m
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for m in 0..n {
                    let mut acc = QuadraticAccumulator::default();
                    for (l, c) in t.bracket_basis(i, j) {
                        acc.add_linear(c, tf(*l, k, m));
                    }
                    let one = Rational::one();
                    let minus = -Rational::one();
                    for l in 0..n {
                        let jk = tf(j, k, l);
                        if !jk.is_empty() {
                            acc.add_product(&minus, jk, tf(i, l, m));
                        }
                        let ik = tf(i, k, l);
                        if !ik.is_empty() {
                            acc.add_product(&one, ik, tf(j, l, m));
                        }
                    }
                    let p = acc.finish();
                    if !p.is_zero() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Builds the full constraint system in the `n²(n+1)/2` tensor unknowns.
pub fn assemble_constraints(t: &LieAlgebraTable) -> Constraints {
    let layout = UnknownLayout::new(t.dim());
    let identity: Vec<SparseRow> = (0..layout.count()).map(|u| vec![(u, Rational::one())]).collect();
    Constraints {
        layout,
        linear: derivation_rows(t, layout),
        quadratic: representation_polys(t, layout, |u| identity[u].as_slice()),
    }
}

/// Linearly independent polynomials spanning the same vector space, with
/// distinct leading monomials.
pub fn linear_interreduce(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut monomials: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().iter().map(|t| t.0.clone())).collect();
    monomials.sort_unstable_by(|a, b| b.cmp(a));
    monomials.dedup();
    let column: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut red = RowReducer::new(monomials.len());
    for p in polys {
        let mut row: SparseRow = p.terms().iter().map(|(m, c)| (column[m], c.clone())).collect();
        row.sort_by_key(|e| e.0);
        red.push(&row);
    }
    red.into_rref()
        .into_iter()
        .map(|row| MultiPoly::from_terms(row.into_iter().map(|(j, c)| (monomials[j].clone(), c)).collect()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietyStatus {
    /// No quadratic conditions survive on the linear solution space.
    LinearOnly,
    GroebnerDone,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveBudget {
    pub groebner: GroebnerBudget,
    /// Search nodes allowed per targeted form in the witness search.
    pub witness_nodes: usize,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            groebner: GroebnerBudget::default(),
            witness_nodes: 400,
        }
    }
}

/// All CPA structures on an algebra: `t = P·s` subject to `quadratic(s) = 0`.
#[derive(Clone, Debug)]
pub struct SolutionVariety {
    pub algebra: Arc<LieAlgebraTable>,
    pub layout: UnknownLayout,
    /// Row `u` expresses unknown `u` as a linear form in the parameters.
    pub parametrization: Vec<SparseRow>,
    pub parameters: usize,
    pub quadratic: Vec<MultiPoly>,
    pub groebner: Option<GroebnerBasis>,
    pub status: VarietyStatus,
}

/// Solves the linear part exactly, then the quadratic part by Gröbner
/// bases. Linear polynomials found among the quadratic conditions or in their
/// Gröbner basis are folded back into the parametrization until none remain.
pub fn solve_cpa(t: Arc<LieAlgebraTable>, budget: &SolveBudget) -> SolutionVariety {
    let layout = UnknownLayout::new(t.dim());
    let mut kernel = derivation_rows(&t, layout).nullspace();
    let mut ran_groebner = false;
    loop {
        let parameters = kernel.dim();
        let parametrization = parametrize(&kernel, layout.count());
        let raw = representation_polys(&t, layout, |u| parametrization[u].as_slice());
        let quadratic = linear_interreduce(&raw);
        let finish = |quadratic, groebner, status| SolutionVariety {
            algebra: t.clone(),
            layout,
            parametrization: parametrization.clone(),
            parameters,
            quadratic,
            groebner,
            status,
        };
        if quadratic.is_empty() {
            let status = if ran_groebner { VarietyStatus::GroebnerDone } else { VarietyStatus::LinearOnly };
            return finish(quadratic, Some(GroebnerBasis::default()), status);
        }
        let linear = linear_members(&quadratic);
        if !linear.is_empty() {
            kernel = restrict(&kernel, &linear);
            continue;
        }
        ran_groebner = true;
        match buchberger(&quadratic, &budget.groebner) {
            Ok(g) => {
                let linear = linear_members(g.polys());
                if linear.is_empty() {
                    return finish(quadratic, Some(g), VarietyStatus::GroebnerDone);
                }
                kernel = restrict(&kernel, &linear);
            }
            Err(_) => return finish(quadratic, None, VarietyStatus::BudgetExceeded),
        }
    }
}

fn parametrize(kernel: &Subspace, unknowns: usize) -> Vec<SparseRow> {
    let mut parametrization: Vec<SparseRow> = vec![Vec::new(); unknowns];
    for (q, b) in kernel.basis_vectors().enumerate() {
        for (u, x) in b.iter().enumerate() {
            if !x.is_zero() {
                parametrization[u].push((q, x.clone()));
            }
        }
    }
    parametrization
}

/// Homogeneous linear polynomials among `polys`, as forms in the parameters.
fn linear_members(polys: &[MultiPoly]) -> Vec<SparseRow> {
    polys
        .iter()
        .filter(|p| p.degree() == 1 && p.terms().iter().all(|t| !t.0.is_one()))
        .map(|p| {
            let mut row: SparseRow = p
                .terms()
                .iter()
                .map(|(m, c)| (m.max_var().expect("degree one"), c.clone()))
                .collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect()
}

/// The part of `kernel` on which the parameter forms vanish.
fn restrict(kernel: &Subspace, forms: &[SparseRow]) -> Subspace {
    let mut m = SparseMatrix::new(kernel.dim());
    for f in forms {
        m.push_row(f.iter().cloned());
    }
    let basis: Vec<Vec<Rational>> = kernel.basis_vectors().map(<[Rational]>::to_vec).collect();
    let vectors: Vec<Vec<Rational>> = m
        .nullspace()
        .basis_vectors()
        .map(|w| {
            let mut v = vec![Rational::zero(); kernel.ambient_dim()];
            for (c, b) in w.iter().zip(&basis) {
                if !c.is_zero() {
                    crate::exact::axpy(&mut v, c, b);
                }
            }
            v
        })
        .collect();
    Subspace::span(kernel.ambient_dim(), vectors).expect("lengths agree")
}

/// The linear form in the parameters for a functional on tensor unknowns.
fn compose(v: &SolutionVariety, functional: &[(usize, Rational)]) -> SparseRow {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (u, c) in functional {
        for (q, x) in &v.parametrization[*u] {
            *acc.entry(*q).or_default() += c * x;
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

fn independent_forms(parameters: usize, forms: impl IntoIterator<Item = SparseRow>) -> Vec<SparseRow> {
    let mut red = RowReducer::new(parameters);
    for f in forms {
        red.push(&f);
    }
    red.into_rref()
}

impl SolutionVariety {
    pub fn product_at(&self, s: &[Rational]) -> CpaProduct {
        let n = self.algebra.dim();
        let mut tensor = vec![Rational::zero(); n * n * n];
        for (u, form) in self.parametrization.iter().enumerate() {
            let value: Rational = form.iter().map(|(q, x)| x * &s[*q]).sum();
            if value.is_zero() {
                continue;
            }
            let (i, j, k) = self.layout.triple(u);
            tensor[(i * n + j) * n + k] = value.clone();
            tensor[(j * n + i) * n + k] = value;
        }
        CpaProduct::from_tensor(self.algebra.clone(), tensor).expect("shape matches")
    }

    /// Whether `s` satisfies every quadratic condition.
    pub fn contains_point(&self, s: &[Rational]) -> bool {
        self.quadratic.iter().all(|p| p.evaluate(s).is_zero())
    }

    /// Independent linear forms whose common zero set is the central locus.
    pub fn noncentral_forms(&self, center: &Subspace) -> Vec<SparseRow> {
        let n = self.algebra.dim();
        let ann = center.annihilator();
        let mut forms = Vec::new();
        for i in 0..n {
            for j in i..n {
                for phi in ann.basis_vectors() {
                    let functional: SparseRow = phi
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(k, x)| (self.layout.index(i, j, k), x.clone()))
                        .collect();
                    forms.push(compose(self, &functional));
                }
            }
        }
        independent_forms(self.parameters, forms)
    }

    /// Independent linear forms whose common zero set is `g·Z(g) = 0`.
    pub fn center_action_forms(&self, center: &Subspace) -> Vec<SparseRow> {
        let n = self.algebra.dim();
        let mut forms = Vec::new();
        for i in 0..n {
            for z in center.basis_vectors() {
                for m in 0..n {
                    let functional: SparseRow = z
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(l, x)| (self.layout.index(i, l, m), x.clone()))
                        .collect();
                    forms.push(compose(self, &functional));
                }
            }
        }
        independent_forms(self.parameters, forms)
    }

    pub fn export(&self) -> VarietyExport {
        let n = self.algebra.dim();
        let mut parametrization = Vec::new();
        for (u, form) in self.parametrization.iter().enumerate() {
            if form.is_empty() {
                continue;
            }
            let (i, j, k) = self.layout.triple(u);
            debug_assert!(k < n);
            parametrization.push((i + 1, j + 1, k + 1, form.iter().map(|(q, x)| (q + 1, x.clone())).collect()));
        }
        VarietyExport {
            unknowns: self.layout.count(),
            parameters: self.parameters,
            parametrization,
            quadratic: self.quadratic.iter().map(ToString::to_string).collect(),
            groebner: self
                .groebner
                .as_ref()
                .map(|g| g.polys().iter().map(ToString::to_string).collect()),
            status: self.status,
        }
    }
}

/// JSON shape of a [`SolutionVariety`]; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyExport {
    pub unknowns: usize,
    pub parameters: usize,
    /// `[i, j, k, [[q, "c"], ...]]`: `t[i][j][k] = Σ c·s_q`.
    pub parametrization: Vec<(usize, usize, usize, Vec<(usize, Rational)>)>,
    pub quadratic: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groebner: Option<Vec<String>>,
    pub status: VarietyStatus,
}

/// A rational point of the variety giving a non-central CPA structure.
#[derive(Clone, Debug)]
pub struct Witness {
    pub parameters: Vec<Rational>,
    pub product: CpaProduct,
    pub central: bool,
    pub g_z_is_zero: bool,
}

#[derive(Clone, Debug)]
pub struct CentralityReport {
    pub verdict: Ternary,
    pub noncentral_forms: usize,
    pub witness: Option<Witness>,
}

/// Decides whether every CPA structure in the variety is central.
///
/// `yes` is certified by radical membership of every non-centrality form;
/// `no` always comes with a rational witness that has been checked against
/// the axioms. Witnesses with `g·Z(g) ≠ 0` are searched for first.
pub fn variety_is_central(v: &SolutionVariety, center: &Subspace, budget: &SolveBudget) -> CentralityReport {
    let forms = v.noncentral_forms(center);
    let report = |verdict, witness| CentralityReport {
        verdict,
        noncentral_forms: forms.len(),
        witness,
    };
    if forms.is_empty() {
        return report(Ternary::Yes, None);
    }
    let polys = |f: &SparseRow| MultiPoly::linear(f, Rational::zero());
    let mut undecided: Vec<&SparseRow> = Vec::new();
    match &v.groebner {
        Some(g) if g.is_zero_ideal() => undecided.extend(forms.iter()),
        Some(g) => {
            let mut all_yes = true;
            for f in &forms {
                match radical_member(&polys(f), g.polys(), &budget.groebner) {
                    Ternary::Yes => {}
                    Ternary::No => undecided.push(f),
                    Ternary::Unknown => all_yes = false,
                }
            }
            if undecided.is_empty() && all_yes {
                return report(Ternary::Yes, None);
            }
            if undecided.is_empty() {
                // nothing certified as non-central, but not everything decided
                return report(Ternary::Unknown, None);
            }
        }
        None => undecided.extend(forms.iter()),
    }
    let base: Vec<MultiPoly> = match &v.groebner {
        Some(g) => g.polys().to_vec(),
        None => v.quadratic.clone(),
    };
    let mut targets: Vec<SparseRow> = v.center_action_forms(center);
    targets.extend(undecided.into_iter().cloned());
    for target in &targets {
        if let Some(w) = find_witness(v, &base, target, center, budget) {
            if !w.central {
                return report(Ternary::No, Some(w));
            }
        }
    }
    report(Ternary::Unknown, None)
}

const CANDIDATES: [(i64, i64); 9] = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1)];

/// Searches for a rational point with `target = c` for small nonzero c.
fn find_witness(
    v: &SolutionVariety,
    base: &[MultiPoly],
    target: &[(usize, Rational)],
    center: &Subspace,
    budget: &SolveBudget,
) -> Option<Witness> {
    for c in [1, -1, 2] {
        let mut gens = base.to_vec();
        gens.push(MultiPoly::linear(target, Rational::from(-c)));
        let mut nodes = 0;
        let point = search(gens, Vec::new(), v.parameters, budget, &mut nodes)?;
        if !v.contains_point(&point) {
            continue;
        }
        let product = v.product_at(&point);
        let rep = cpa::verify(&product);
        if !rep.is_cpa() {
            continue;
        }
        return Some(Witness {
            parameters: point,
            central: product.is_central_in(center),
            g_z_is_zero: rep.g_z_is_zero,
            product,
        });
    }
    None
}

/// `var = expr`, with `expr` free of `var` and of every earlier eliminated
/// variable.
struct Elimination {
    var: usize,
    expr: MultiPoly,
}

/// Depth-first search over small rational values. Linear polynomials are
/// eliminated by substitution; a Gröbner basis under a small budget prunes
/// inconsistent branches.
fn search(
    polys: Vec<MultiPoly>,
    mut eliminated: Vec<Elimination>,
    parameters: usize,
    budget: &SolveBudget,
    nodes: &mut usize,
) -> Option<Vec<Rational>> {
    *nodes += 1;
    if *nodes > budget.witness_nodes {
        return None;
    }
    let mut polys = linear_interreduce(&polys);
    while let Some(p) = polys.iter().find(|p| p.degree() <= 1) {
        if p.is_unit() {
            return None;
        }
        let (lm, lc) = p.leading().expect("nonzero").clone();
        let var = lm.max_var().expect("degree one");
        let expr = MultiPoly::from_terms(p.terms()[1..].to_vec()).scale(&-lc.recip().expect("nonzero"));
        polys = linear_interreduce(&polys.iter().map(|q| q.substitute_poly(var, &expr)).collect::<Vec<_>>());
        eliminated.push(Elimination { var, expr });
    }
    if polys.is_empty() {
        let mut point = vec![Rational::zero(); parameters];
        for e in eliminated.iter().rev() {
            point[e.var] = e.expr.evaluate(&point);
        }
        return Some(point);
    }
    let probe = GroebnerBudget {
        max_pairs: 200,
        ..budget.groebner
    };
    if matches!(buchberger(&polys, &probe), Ok(g) if g.is_unit_ideal()) {
        return None;
    }
    let x = polys.iter().flat_map(MultiPoly::variables).min().expect("nonconstant");
    for (p, q) in CANDIDATES {
        let value = Rational::new(p, q);
        let next: Vec<MultiPoly> = polys.iter().map(|f| f.substitute(x, &value)).collect();
        let mut elim: Vec<Elimination> = eliminated.iter().map(|e| Elimination { var: e.var, expr: e.expr.clone() }).collect();
        elim.push(Elimination {
            var: x,
            expr: MultiPoly::constant(value),
        });
        if let Some(point) = search(next, elim, parameters, budget, nodes) {
            return Some(point);
        }
        if *nodes > budget.witness_nodes {
            return None;
        }
    }
    None
}
