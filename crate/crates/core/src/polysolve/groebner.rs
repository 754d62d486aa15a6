//! Buchberger's algorithm with the Gebauer–Möller criteria.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::poly::{Monomial, MultiPoly};
use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerBudget {
    /// S-pairs reduced before giving up.
    pub max_pairs: usize,
    /// Largest S-pair lcm degree allowed.
    pub max_degree: u32,
    pub deadline: Option<Instant>,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget {
            max_pairs: 4_000,
            max_degree: 16,
            deadline: None,
        }
    }
}

impl GroebnerBudget {
    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("Groebner budget exceeded after {pairs_processed} S-pairs")]
pub struct BudgetExceeded {
    pub pairs_processed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

/// A reduced, monic Gröbner basis sorted by increasing leading monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroebnerBasis {
    polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.iter().any(MultiPoly::is_unit)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    /// Normal form of `f`.
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let refs: Vec<&MultiPoly> = self.polys.iter().collect();
        normal_form(f, &refs)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

/// Full reduction of `f` by `divisors` (all nonzero).
pub fn normal_form(f: &MultiPoly, divisors: &[&MultiPoly]) -> MultiPoly {
    let mut acc: BTreeMap<Monomial, Rational> = f.terms().iter().cloned().collect();
    let mut remainder: BTreeMap<Monomial, Rational> = BTreeMap::new();
    while let Some((m, c)) = acc.pop_last() {
        let divisor = divisors
            .iter()
            .find(|g| g.leading_monomial().expect("nonzero divisor").divides(&m));
        match divisor {
            None => {
                remainder.insert(m, c);
            }
            Some(g) => {
                let (lm, lc) = g.leading().expect("nonzero divisor");
                let q = lm.quotient_of(&m);
                let factor = &c / lc;
                for (t, a) in &g.terms()[1..] {
                    let delta = &factor * a;
                    match acc.entry(t.mul(&q)) {
                        Entry::Occupied(mut e) => {
                            *e.get_mut() -= &delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                        Entry::Vacant(e) => {
                            e.insert(-delta);
                        }
                    }
                }
            }
        }
    }
    MultiPoly::from_map(remainder)
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_of(&l), &gc.clone());
    let b = g.mul_term(&gm.quotient_of(&l), fc);
    a.sub(&b)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    lcm: Monomial,
    j: usize,
    i: usize,
}

struct State {
    polys: Vec<MultiPoly>,
    active: Vec<bool>,
    pairs: BTreeSet<Pair>,
}

impl State {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().expect("nonzero")
    }

    /// Adds `h` (index into `polys`) and updates pairs.
    fn update(&mut self, h: usize) {
        let lh = self.lm(h).clone();
        let mut c: Vec<(usize, Monomial)> = (0..h)
            .filter(|&g| self.active[g])
            .map(|g| (g, lh.lcm(self.lm(g))))
            .collect();
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while !c.is_empty() {
            let (g1, l1) = c.remove(0);
            let coprime = lh.is_coprime(self.lm(g1));
            if coprime || (!c.iter().any(|(_, l2)| l2.divides(&l1)) && !d.iter().any(|(_, l2)| l2.divides(&l1))) {
                d.push((g1, l1));
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(self.lm(*g)))
            .map(|(g, l)| Pair {
                lcm: l,
                j: h,
                i: g,
            })
            .collect();
        let old = std::mem::take(&mut self.pairs);
        for p in old {
            let keep = !(lh.divides(&p.lcm)
                && lh.lcm(self.lm(p.i)) != p.lcm
                && lh.lcm(self.lm(p.j)) != p.lcm);
            if keep {
                self.pairs.insert(p);
            }
        }
        self.pairs.extend(e);
        for g in 0..h {
            if self.active[g] && lh.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
        self.active[h] = true;
    }

    fn active_polys(&self) -> Vec<&MultiPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn push(&mut self, p: MultiPoly) -> usize {
        self.polys.push(p);
        self.active.push(false);
        self.polys.len() - 1
    }
}

fn unit_basis() -> GroebnerBasis {
    GroebnerBasis {
        polys: vec![MultiPoly::constant(Rational::one())],
    }
}

/// Reduced Gröbner basis of the ideal generated by `generators` under grevlex.
pub fn buchberger(generators: &[MultiPoly], budget: &GroebnerBudget) -> Result<GroebnerBasis, BudgetExceeded> {
    let mut state = State {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: BTreeSet::new(),
    };
    let mut input: Vec<MultiPoly> = generators.iter().filter(|p| !p.is_zero()).map(MultiPoly::make_monic).collect();
    if input.iter().any(MultiPoly::is_unit) {
        return Ok(unit_basis());
    }
    input.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    input.dedup();
    for f in input {
        let reduced = normal_form(&f, &state.active_polys());
        if reduced.is_zero() {
            continue;
        }
        if reduced.is_unit() {
            return Ok(unit_basis());
        }
        let h = state.push(reduced.make_monic());
        state.update(h);
    }
    let mut processed = 0usize;
    while let Some(pair) = state.pairs.pop_first() {
        if processed >= budget.max_pairs || pair.lcm.degree() > budget.max_degree || budget.expired() {
            return Err(BudgetExceeded {
                pairs_processed: processed,
            });
        }
        processed += 1;
        let s = s_polynomial(&state.polys[pair.i], &state.polys[pair.j]);
        let h = normal_form(&s, &state.active_polys());
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return Ok(unit_basis());
        }
        let idx = state.push(h.make_monic());
        state.update(idx);
    }
    Ok(interreduce(state.active_polys().into_iter().cloned().collect()))
}

/// Minimal, fully reduced, monic basis from a Gröbner basis.
fn interreduce(mut basis: Vec<MultiPoly>) -> GroebnerBasis {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for p in basis {
        let lm = p.leading_monomial().expect("nonzero");
        if !minimal.iter().any(|q| q.leading_monomial().expect("nonzero").divides(lm)) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (lm, lc) = minimal[k].leading().expect("nonzero").clone();
        let others: Vec<&MultiPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, q)| q).collect();
        let tail = MultiPoly::from_terms(minimal[k].terms()[1..].to_vec());
        let tail = normal_form(&tail, &others);
        let p = MultiPoly::from_terms(vec![(lm, lc)]).add(&tail).make_monic();
        reduced.push(p);
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    GroebnerBasis { polys: reduced }
}

/// Decides `f ∈ √I` through `1 ∈ I + (1 − y·f)` with a fresh variable y.
pub fn radical_member(f: &MultiPoly, ideal: &[MultiPoly], budget: &GroebnerBudget) -> Ternary {
    if f.is_zero() {
        return Ternary::Yes;
    }
    let y = ideal
        .iter()
        .chain(std::iter::once(f))
        .map(MultiPoly::var_bound)
        .max()
        .unwrap_or(0);
    let mut gens: Vec<MultiPoly> = ideal.to_vec();
    gens.push(MultiPoly::constant(Rational::one()).sub(&MultiPoly::var(y).mul(f)));
    match buchberger(&gens, budget) {
        Ok(g) if g.is_unit_ideal() => Ternary::Yes,
        Ok(_) => Ternary::No,
        Err(_) => Ternary::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn gb(gens: &[&str]) -> GroebnerBasis {
        let gens: Vec<MultiPoly> = gens.iter().map(|s| p(s)).collect();
        buchberger(&gens, &GroebnerBudget::default()).unwrap()
    }

    #[test]
    fn principal_ideal() {
        assert_eq!(gb(&["s1"]).polys(), &[p("s1")]);
        assert_eq!(gb(&["2*s1 + 4"]).polys(), &[p("s1 + 2")]);
        assert!(gb(&[]).is_zero_ideal());
        assert!(gb(&["0"]).is_zero_ideal());
    }

    #[test]
    fn twisted_pair() {
        // s1 = x, s2 = y: (x^2 - y, y^2 - x)
        let g = gb(&["s1^2 - s2", "s2^2 - s1"]);
        assert!(g.contains(&p("s1^4 - s1")));
        assert!(!g.contains(&p("s1 - s2")));
        assert_eq!(g.reduce(&g.reduce(&p("s1^5 + s2^3"))), g.reduce(&p("s1^5 + s2^3")));
    }

    #[test]
    fn circle_and_line() {
        let g = gb(&["s1^2 + s2^2 - 1", "s1 - s2"]);
        assert_eq!(g.polys(), &[p("s1 - s2"), p("s2^2 - 1/2")]);
        assert!(g.contains(&p("2*s2^2 - 1")));
    }

    #[test]
    fn inconsistent_system() {
        assert!(gb(&["s1", "s1 - 1"]).is_unit_ideal());
        assert!(gb(&["s1*s2 - 1", "s1"]).is_unit_ideal());
    }

    #[test]
    fn cyclic3_is_deterministic() {
        let gens = ["s1 + s2 + s3", "s1*s2 + s2*s3 + s3*s1", "s1*s2*s3 - 1"];
        let a = gb(&gens);
        let mut rev = gens;
        rev.reverse();
        assert_eq!(a, gb(&rev));
        assert!(a.contains(&p("s3^3 - 1")));
    }

    #[test]
    fn budget_is_reported() {
        let tight = GroebnerBudget {
            max_pairs: 0,
            ..GroebnerBudget::default()
        };
        let gens: Vec<MultiPoly> = ["s1^2 - s2", "s1*s2 - 1"].iter().map(|s| p(s)).collect();
        assert_eq!(buchberger(&gens, &tight), Err(BudgetExceeded { pairs_processed: 0 }));
        // coprime leading monomials need no S-pairs at all
        assert!(buchberger(&[p("s1^2 - s2"), p("s2^2 - s1")], &tight).is_ok());
    }

    #[test]
    fn radical_examples() {
        let b = GroebnerBudget::default();
        assert_eq!(radical_member(&p("s1"), &[p("s1^2")], &b), Ternary::Yes);
        assert_eq!(radical_member(&p("s1"), &[p("s2")], &b), Ternary::No);
        assert_eq!(radical_member(&p("s1 + s2"), &[p("s1^2 - s2^2"), p("s1 + s2")], &b), Ternary::Yes);
        assert_eq!(radical_member(&p("s1*s2"), &[p("s1^3"), p("s2^5 - s1")], &b), Ternary::Yes);
        assert_eq!(radical_member(&p("s1 - 1"), &[p("s1^2 - 1")], &b), Ternary::No);
        assert_eq!(radical_member(&MultiPoly::zero(), &[], &b), Ternary::Yes);
    }
}
