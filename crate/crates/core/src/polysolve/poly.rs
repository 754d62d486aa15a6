//! Sparse multivariate polynomials over the rationals in grevlex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::Rational;

/// A monomial as `(variable, exponent)` pairs sorted by variable, with
/// positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: usize) -> Self {
        Monomial::from_factors(vec![(v as u32, 1)])
    }

    /// Builds a monomial from unsorted factors; repeated variables multiply.
    pub fn from_factors(mut factors: Vec<(u32, u32)>) -> Self {
        factors.retain(|f| f.1 > 0);
        factors.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial {
            degree: merged.iter().map(|f| f.1).sum(),
            factors: merged,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.factors
            .binary_search_by_key(&(v as u32), |f| f.0)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.factors.last().map(|f| f.0 as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => out.push(*a.next().unwrap()),
                    Ordering::Greater => out.push(*b.next().unwrap()),
                    Ordering::Equal => {
                        out.push((x.0, x.1 + y.1));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.degree > other.degree {
            return false;
        }
        let mut it = other.factors.iter();
        'outer: for &(v, e) in &self.factors {
            for &(w, f) in it.by_ref() {
                match w.cmp(&v) {
                    Ordering::Less => continue,
                    Ordering::Equal if f >= e => continue 'outer,
                    _ => return false,
                }
            }
            return false;
        }
        true
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let factors = other
            .factors
            .iter()
            .map(|&(v, e)| (v, e - self.exponent(v as usize)))
            .filter(|f| f.1 > 0)
            .collect();
        Monomial {
            degree: other.degree - self.degree,
            factors,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut all: BTreeMap<u32, u32> = self.factors.iter().copied().collect();
        for &(v, e) in &other.factors {
            let slot = all.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial::from_factors(all.into_iter().collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.0.cmp(&y.0) {
                Ordering::Less => {
                    a.next();
                }
                Ordering::Greater => {
                    b.next();
                }
                Ordering::Equal => return false,
            }
        }
        true
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic with variable 0 largest.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut a, mut b) = (self.factors.iter().rev().peekable(), other.factors.iter().rev().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                // the side with a factor in a later variable is smaller
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(x), Some(y)) => {
                    if x.0 != y.0 {
                        return if x.0 > y.0 { Ordering::Less } else { Ordering::Greater };
                    }
                    if x.1 != y.1 {
                        return y.1.cmp(&x.1);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MonomialDisplay(self))
    }
}

struct MonomialDisplay<'a>(&'a Monomial);

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_one() {
            return write!(f, "1");
        }
        for (n, (v, e)) in self.0.factors.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "s{}", v + 1)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial as terms in strictly decreasing monomial order with nonzero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::from_terms(vec![(Monomial::one(), c)])
    }

    pub fn var(v: usize) -> Self {
        MultiPoly::from_terms(vec![(Monomial::var(v), Rational::one())])
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(terms: Vec<(Monomial, Rational)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_default() += c;
        }
        MultiPoly::from_map(map)
    }

    pub(crate) fn from_map(map: BTreeMap<Monomial, Rational>) -> Self {
        MultiPoly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// A linear polynomial `Σ c_v s_v + constant`.
    pub fn linear(coeffs: &[(usize, Rational)], constant: Rational) -> Self {
        let mut terms: Vec<(Monomial, Rational)> =
            coeffs.iter().map(|(v, c)| (Monomial::var(*v), c.clone())).collect();
        terms.push((Monomial::one(), constant));
        MultiPoly::from_terms(terms)
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// One more than the largest variable index used.
    pub fn var_bound(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.0.max_var())
            .max()
            .map_or(0, |v| v + 1)
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|t| t.0.factors().iter().map(|f| f.0 as usize))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn make_monic(&self) -> Self {
        match self.terms.first() {
            None => MultiPoly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c · m · self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap().clone()),
                    Ordering::Equal => {
                        let c = &x.1 + &y.1;
                        if !c.is_zero() {
                            out.push((x.0.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        MultiPoly { terms: out }
    }

    pub fn sub(&self, other: &MultiPoly) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &MultiPoly) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                *map.entry(m.mul(n)).or_default() += a * b;
            }
        }
        MultiPoly::from_map(map)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.factors()
                    .iter()
                    .fold(c.clone(), |acc, &(v, e)| (0..e).fold(acc, |acc, _| acc * &point[v as usize]))
            })
            .sum()
    }

    /// Replaces variable `v` by the constant `value`.
    pub fn substitute(&self, v: usize, value: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exponent(v);
                if e == 0 {
                    return (m.clone(), c.clone());
                }
                let rest: Vec<(u32, u32)> = m.factors().iter().copied().filter(|f| f.0 as usize != v).collect();
                let coeff = (0..e).fold(c.clone(), |acc, _| acc * value);
                (Monomial::from_factors(rest), coeff)
            })
            .collect();
        MultiPoly::from_terms(terms)
    }

    /// Replaces variable `v` by the polynomial `q`.
    pub fn substitute_poly(&self, v: usize, q: &MultiPoly) -> Self {
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::constant(Rational::one())];
        let mut out = MultiPoly::zero();
        let mut plain = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            if e == 0 {
                plain.push((m.clone(), c.clone()));
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().expect("nonempty").mul(q);
                powers.push(next);
            }
            let rest: Vec<(u32, u32)> = m.factors().iter().copied().filter(|f| f.0 as usize != v).collect();
            out = out.add(&powers[e].mul_term(&Monomial::from_factors(rest), c));
        }
        out.add(&MultiPoly::from_terms(plain))
    }

    /// Renames variables through `map`.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> Self {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let f = m.factors().iter().map(|&(v, e)| (map(v as usize) as u32, e)).collect();
                    (Monomial::from_factors(f), c.clone())
                })
                .collect(),
        )
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", MonomialDisplay(m))?;
            } else {
                write!(f, "{abs}*{}", MonomialDisplay(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial: {0}")]
pub struct ParsePolyError(pub String);

impl FromStr for MultiPoly {
    type Err = ParsePolyError;

    /// Grammar: signed sums of `c*s1^2*s3`-style terms; variables are
    /// `s<k>` with k ≥ 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| ParsePolyError(m.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !current.ends_with('^') {
                if idx > 0 {
                    if current.is_empty() {
                        return Err(err("dangling sign"));
                    }
                    pieces.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        pieces.push((negative, current));

        let mut terms = Vec::new();
        for (negative, piece) in pieces {
            let mut coeff = Rational::one();
            let mut factors = Vec::new();
            for factor in piece.split('*') {
                if let Some(var) = factor.strip_prefix('s') {
                    let (index, exp) = match var.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| err(factor))?),
                        None => (var, 1),
                    };
                    let index: usize = index.parse().map_err(|_| err(factor))?;
                    if index == 0 {
                        return Err(err("variables are numbered from s1"));
                    }
                    factors.push(((index - 1) as u32, exp));
                } else {
                    coeff *= &factor.parse::<Rational>().map_err(|_| err(factor))?;
                }
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((Monomial::from_factors(factors), coeff));
        }
        Ok(MultiPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn m(f: &[(u32, u32)]) -> Monomial {
        Monomial::from_factors(f.to_vec())
    }

    #[test]
    fn grevlex_order() {
        // degree first
        assert!(m(&[(2, 2)]) > m(&[(0, 1)]));
        // s1 > s2 > s3
        assert!(m(&[(0, 1)]) > m(&[(1, 1)]));
        // s1*s3 < s2^2 in grevlex
        assert!(m(&[(0, 1), (2, 1)]) < m(&[(1, 2)]));
        // s1^2 > s1*s2 > s2^2 > s1*s3
        let mut v = vec![m(&[(0, 1), (2, 1)]), m(&[(1, 2)]), m(&[(0, 2)]), m(&[(0, 1), (1, 1)])];
        v.sort();
        v.reverse();
        assert_eq!(v, vec![m(&[(0, 2)]), m(&[(0, 1), (1, 1)]), m(&[(1, 2)]), m(&[(0, 1), (2, 1)])]);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[(0, 1), (2, 2)]);
        let b = m(&[(0, 2), (1, 1), (2, 3)]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), m(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(a.lcm(&m(&[(1, 4)])), m(&[(0, 1), (1, 4), (2, 2)]));
        assert!(m(&[(0, 1)]).is_coprime(&m(&[(1, 3)])));
        assert!(!a.is_coprime(&b));
        assert!(!m(&[(1, 1)]).divides(&m(&[(0, 1), (2, 1)])));
    }

    #[test]
    fn display_and_parse() {
        let f = p("3*s1^2*s3 - 1/2*s2 + 1 - s1^2*s3");
        assert_eq!(f.to_string(), "2*s1^2*s3 - 1/2*s2 + 1");
        assert_eq!(p(&f.to_string()), f);
        assert_eq!(p("-s1 + s1").to_string(), "0");
        assert_eq!(p("-2/3").to_string(), "-2/3");
        assert!("s0".parse::<MultiPoly>().is_err());
        assert!("s1 +".parse::<MultiPoly>().is_err());
        assert!("".parse::<MultiPoly>().is_err());
        assert!("x".parse::<MultiPoly>().is_err());
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let f = p("s1 + s2");
        let g = p("s1 - s2");
        assert_eq!(f.mul(&g), p("s1^2 - s2^2"));
        assert_eq!(f.sub(&f), MultiPoly::zero());
        let pt = [Rational::from(3), Rational::from(2)];
        assert_eq!(f.mul(&g).evaluate(&pt), Rational::from(5));
        assert_eq!(p("s1^2*s2 + s2").substitute(0, &Rational::from(2)), p("5*s2"));
        assert_eq!(p("s1*s2").rename(|v| v + 2), p("s3*s4"));
        assert_eq!(p("s1^2*s2 + s1").substitute_poly(0, &p("s2 - 1")), p("s2^3 - 2*s2^2 + 2*s2 - 1"));
        assert_eq!(p("s3 + s1^2").var_bound(), 3);
        assert_eq!(p("s3 + s1^2").variables(), vec![0, 2]);
    }
}
